//! Base curves (the projective line and Weierstrass cubics), closed points
//! and curve configurations with punctures.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::exact::{Field, Place, Poly};

/// Affine point, or `None` for the point at infinity `O`.
pub type Point = Option<(u32, u32)>;

/// `y² + a1 xy + a3 y = x³ + a2 x² + a4 x + a6` over a field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EllipticCurve {
    pub k: Field,
    /// `[a1, a2, a3, a4, a6]`.
    pub a: [u32; 5],
}

impl EllipticCurve {
    pub fn new(k: &Field, a: [u32; 5]) -> Result<EllipticCurve> {
        let e = EllipticCurve { k: k.clone(), a };
        if e.discriminant() == 0 {
            return Err(Error::Invalid("singular Weierstrass equation".into()));
        }
        Ok(e)
    }
    /// Short form `y² = x³ + a x + b`.
    pub fn short(k: &Field, a4: i64, a6: i64) -> Result<EllipticCurve> {
        EllipticCurve::new(k, [0, 0, 0, k.from_int(a4), k.from_int(a6)])
    }
    pub fn discriminant(&self) -> u32 {
        let k = &self.k;
        let [a1, a2, a3, a4, a6] = self.a;
        let c = |n: i64| k.from_int(n);
        let m = |x: u32, y: u32| k.mul(x, y);
        let b2 = k.add(m(a1, a1), m(c(4), a2));
        let b4 = k.add(m(c(2), a4), m(a1, a3));
        let b6 = k.add(m(a3, a3), m(c(4), a6));
        let b8 = {
            let t1 = m(m(a1, a1), a6);
            let t2 = m(m(c(4), a2), a6);
            let t3 = m(m(a1, a3), a4);
            let t4 = m(a2, m(a3, a3));
            let t5 = m(a4, a4);
            k.sub(k.add(k.sub(k.add(t1, t2), t3), t4), t5)
        };
        let d1 = m(m(b2, b2), b8);
        let d2 = m(c(8), m(b4, m(b4, b4)));
        let d3 = m(c(27), m(b6, b6));
        let d4 = m(c(9), m(b2, m(b4, b6)));
        k.add(k.neg(k.add(k.add(d1, d2), d3)), d4)
    }
    /// The same equation over an extension field of the (prime) base field.
    pub fn over(&self, ext: &Field) -> EllipticCurve {
        EllipticCurve { k: ext.clone(), a: self.a }
    }
    /// `x³ + a2 x² + a4 x + a6` and `a1 x + a3`, so that the equation reads
    /// `y² + h(x) y = g(x)`.
    pub fn g_h(&self) -> (Poly, Poly) {
        let [a1, a2, a3, a4, a6] = self.a;
        (Poly::from_coeffs(vec![a6, a4, a2, 1]), Poly::from_coeffs(vec![a3, a1]))
    }
    pub fn contains(&self, p: &Point) -> bool {
        let Some((x, y)) = *p else { return true };
        let k = &self.k;
        let (g, h) = self.g_h();
        k.add(k.mul(y, y), k.mul(h.eval(k, x), y)) == g.eval(k, x)
    }
    pub fn neg(&self, p: &Point) -> Point {
        let (x, y) = (*p)?;
        let k = &self.k;
        let [a1, _, a3, _, _] = self.a;
        Some((x, k.sub(k.neg(y), k.add(k.mul(a1, x), a3))))
    }
    pub fn add(&self, p: &Point, q: &Point) -> Point {
        let k = &self.k;
        let [a1, a2, a3, a4, _] = self.a;
        let ((x1, y1), (x2, y2)) = match (p, q) {
            (None, _) => return *q,
            (_, None) => return *p,
            (Some(a), Some(b)) => (*a, *b),
        };
        if *q == self.neg(p) {
            return None;
        }
        let lambda = if x1 != x2 {
            k.div(k.sub(y2, y1), k.sub(x2, x1))
        } else {
            let num = k.sub(
                k.add(k.add(k.mul(k.from_int(3), k.mul(x1, x1)), k.mul(k.from_int(2), k.mul(a2, x1))), a4),
                k.mul(a1, y1),
            );
            let den = k.add(k.add(k.mul(k.from_int(2), y1), k.mul(a1, x1)), a3);
            k.div(num, den)
        };
        let nu = k.sub(y1, k.mul(lambda, x1));
        let x3 = k.sub(k.sub(k.sub(k.add(k.mul(lambda, lambda), k.mul(a1, lambda)), a2), x1), x2);
        let y3 = k.sub(k.sub(k.neg(k.mul(k.add(lambda, a1), x3)), nu), a3);
        Some((x3, y3))
    }
    pub fn mul(&self, n: i64, p: &Point) -> Point {
        let base = if n < 0 { self.neg(p) } else { *p };
        let mut acc = None;
        for _ in 0..n.unsigned_abs() {
            acc = self.add(&acc, &base);
        }
        acc
    }
    /// All points over the field of definition, `O` first, then affine
    /// points by `(x, y)`.
    pub fn points(&self) -> Vec<Point> {
        let mut out = vec![None];
        for x in self.k.elements() {
            for y in self.k.elements() {
                if self.contains(&Some((x, y))) {
                    out.push(Some((x, y)));
                }
            }
        }
        out
    }
    /// Applies `x -> x^q` coordinatewise, `q` the base field size.
    fn frobenius(&self, p: &Point, q: u32) -> Point {
        p.map(|(x, y)| (self.k.pow(x, q as u64), self.k.pow(y, q as u64)))
    }
}

/// A closed point of a base curve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClosedPoint {
    Line(Place),
    /// A Frobenius orbit of points over `F_{q^degree}`, listed from the
    /// least coordinates. Degree 1 points use the base field directly.
    Cubic { degree: usize, orbit: Vec<Point> },
}

impl ClosedPoint {
    pub fn degree(&self) -> usize {
        match self {
            ClosedPoint::Line(p) => p.degree(),
            ClosedPoint::Cubic { degree, .. } => *degree,
        }
    }
    pub fn display(&self, k: &Field) -> String {
        match self {
            ClosedPoint::Line(p) => p.display(k),
            ClosedPoint::Cubic { degree, orbit } => match (degree, orbit[0]) {
                (_, None) => "O".into(),
                (1, Some((x, y))) => alloc::format!("({x},{y})"),
                (d, Some((x, y))) => alloc::format!("deg{d}:({x},{y})"),
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BaseCurve {
    ProjectiveLine,
    Elliptic(EllipticCurve),
}

/// A smooth projective curve minus finitely many closed points.
#[derive(Clone, Debug)]
pub struct CurveConfig {
    pub k: Field,
    pub base: BaseCurve,
    pub punctures: Vec<ClosedPoint>,
}

impl CurveConfig {
    pub fn new(k: &Field, base: BaseCurve, punctures: Vec<ClosedPoint>) -> Result<CurveConfig> {
        if punctures.is_empty() {
            return Err(Error::Invalid("at least one puncture is required".into()));
        }
        for (i, p) in punctures.iter().enumerate() {
            if punctures[..i].contains(p) {
                return Err(Error::Invalid(alloc::format!("puncture {} repeated", p.display(k))));
            }
            match (&base, p) {
                (BaseCurve::ProjectiveLine, ClosedPoint::Line(_)) => {}
                (BaseCurve::Elliptic(e), ClosedPoint::Cubic { orbit, .. }) => {
                    if orbit.iter().any(|x| x.is_some()) && orbit.len() == 1 && !e.contains(&orbit[0]) {
                        return Err(Error::Invalid(alloc::format!("{} is not on the curve", p.display(k))));
                    }
                }
                _ => return Err(Error::Invalid("puncture does not lie on the base curve".into())),
            }
        }
        Ok(CurveConfig { k: k.clone(), base, punctures })
    }
    /// `P¹` minus places given as strings (`inf` or monic irreducibles in `t`).
    pub fn projective_line(k: &Field, punctures: &[&str]) -> Result<CurveConfig> {
        let ps = punctures.iter().map(|s| Place::parse(s, k).map(ClosedPoint::Line)).collect::<Result<Vec<_>>>()?;
        CurveConfig::new(k, BaseCurve::ProjectiveLine, ps)
    }
    /// An elliptic curve minus rational points (`None` = `O`).
    pub fn elliptic(e: EllipticCurve, punctures: &[Point]) -> Result<CurveConfig> {
        let k = e.k.clone();
        let ps = punctures.iter().map(|p| ClosedPoint::Cubic { degree: 1, orbit: vec![*p] }).collect();
        CurveConfig::new(&k, BaseCurve::Elliptic(e), ps)
    }
    pub fn s(&self) -> usize {
        self.punctures.len()
    }
    pub fn degrees(&self) -> Vec<usize> {
        self.punctures.iter().map(ClosedPoint::degree).collect()
    }
    /// Puncture places when the base is the projective line.
    pub fn places(&self) -> Option<Vec<Place>> {
        self.punctures
            .iter()
            .map(|p| match p {
                ClosedPoint::Line(pl) => Some(pl.clone()),
                _ => None,
            })
            .collect()
    }
}

/// Closed points of degree at most `max_degree`, by degree.
pub fn enumerate_closed_points(k: &Field, base: &BaseCurve, max_degree: usize) -> Result<Vec<ClosedPoint>> {
    if max_degree == 0 {
        return Err(Error::Invalid("max_degree must be at least 1".into()));
    }
    let mut out = Vec::new();
    match base {
        BaseCurve::ProjectiveLine => {
            for d in 1..=max_degree {
                for p in Poly::monic_irreducibles(k, d) {
                    out.push(ClosedPoint::Line(Place::Finite(p)));
                }
                if d == 1 {
                    out.push(ClosedPoint::Line(Place::Infinity));
                }
            }
        }
        BaseCurve::Elliptic(e) => {
            for d in 1..=max_degree {
                out.extend(points_of_degree(e, d)?);
            }
        }
    }
    Ok(out)
}

/// Frobenius orbits of exact size `d` in `E(F_{q^d})`.
pub fn points_of_degree(e: &EllipticCurve, d: usize) -> Result<Vec<ClosedPoint>> {
    let k = &e.k;
    if d == 1 {
        return Ok(e.points().into_iter().map(|p| ClosedPoint::Cubic { degree: 1, orbit: vec![p] }).collect());
    }
    if !k.is_prime_field() {
        return Err(Error::Unsupported("higher-degree points need a prime base field".into()));
    }
    let qd = (k.q() as u64).checked_pow(d as u32).filter(|&x| x <= u32::MAX as u64).ok_or_else(|| {
        Error::Unsupported(alloc::format!("F_{}^{d} too large", k.q()))
    })?;
    let ext = Field::new(qd as u32)?;
    let ee = e.over(&ext);
    let mut seen = alloc::collections::BTreeSet::new();
    let mut out = Vec::new();
    for p in ee.points() {
        if seen.contains(&p) {
            continue;
        }
        let mut orbit = vec![p];
        let mut cur = ee.frobenius(&p, k.q());
        while cur != p {
            orbit.push(cur);
            cur = ee.frobenius(&cur, k.q());
        }
        for x in &orbit {
            seen.insert(*x);
        }
        if orbit.len() == d {
            orbit.sort();
            out.push(ClosedPoint::Cubic { degree: d, orbit });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn projective_line_points() {
        let k = Field::new(2).unwrap();
        let pts = enumerate_closed_points(&k, &BaseCurve::ProjectiveLine, 2).unwrap();
        assert_eq!(pts.iter().filter(|p| p.degree() == 1).count(), 3);
        assert_eq!(pts.iter().filter(|p| p.degree() == 2).count(), 1);
        let k3 = Field::new(3).unwrap();
        assert_eq!(enumerate_closed_points(&k3, &BaseCurve::ProjectiveLine, 1).unwrap().len(), 4);
    }

    #[test]
    fn elliptic_points_and_law() {
        let k = Field::new(5).unwrap();
        let e = EllipticCurve::short(&k, -1, 0).unwrap();
        let pts = e.points();
        // Brute force: count solutions of y² = x³ - x, plus O.
        let mut n = 1;
        for x in 0..5u32 {
            for y in 0..5u32 {
                if (y * y) % 5 == (x * x * x + 4 * x) % 5 {
                    n += 1;
                }
            }
        }
        assert_eq!(pts.len(), n);
        for p in &pts {
            for q in &pts {
                assert!(e.contains(&e.add(p, q)));
                assert_eq!(e.add(p, q), e.add(q, p));
            }
        }
        // Degree-2 points: (|E(F_25)| - |E(F_5)|) / 2 of them.
        let e25 = e.over(&Field::new(25).unwrap());
        let d2 = points_of_degree(&e, 2).unwrap();
        assert_eq!(d2.len(), (e25.points().len() - pts.len()) / 2);
        assert!(EllipticCurve::short(&k, 0, 0).is_err());
    }
}
