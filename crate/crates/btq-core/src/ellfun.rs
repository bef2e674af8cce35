//! The function field of a Weierstrass cubic: elements `a(x) + b(x) y` with
//! `a, b ∈ F_q(x)`, valuations at closed points, and Miller-style
//! construction of functions with a prescribed principal divisor.

use alloc::vec::Vec;

use crate::curve::{ClosedPoint, EllipticCurve, Point};
use crate::error::{Error, Result};
use crate::exact::{Field, Poly, RatFunc};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EllFunc {
    pub a: RatFunc,
    pub b: RatFunc,
}

impl EllFunc {
    pub fn one() -> EllFunc {
        EllFunc { a: RatFunc::one(), b: RatFunc::zero() }
    }
    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
    pub fn mul(&self, o: &EllFunc, e: &EllipticCurve) -> EllFunc {
        let k = &e.k;
        let (g, h) = e.g_h();
        let (g, h) = (RatFunc::from_poly(g), RatFunc::from_poly(h));
        let bb = self.b.mul(&o.b, k);
        // y² = g - h y
        EllFunc {
            a: self.a.mul(&o.a, k).add(&bb.mul(&g, k), k),
            b: self.a.mul(&o.b, k).add(&o.a.mul(&self.b, k), k).sub(&bb.mul(&h, k), k),
        }
    }
    /// Image under the hyperelliptic involution `y -> -y - h(x)`.
    pub fn conjugate(&self, e: &EllipticCurve) -> EllFunc {
        let k = &e.k;
        let h = RatFunc::from_poly(e.g_h().1);
        EllFunc { a: self.a.sub(&self.b.mul(&h, k), k), b: self.b.neg(k) }
    }
    /// `f · conj(f) ∈ F_q(x)`.
    pub fn norm(&self, e: &EllipticCurve) -> RatFunc {
        let n = self.mul(&self.conjugate(e), e);
        debug_assert!(n.b.is_zero());
        n.a
    }
    pub fn inv(&self, e: &EllipticCurve) -> Result<EllFunc> {
        let n = self.norm(e).inv(&e.k)?;
        let c = self.conjugate(e);
        Ok(EllFunc { a: c.a.mul(&n, &e.k), b: c.b.mul(&n, &e.k) })
    }
    /// Valuation at `O`: `x` has a double pole and `y` a triple pole, so the
    /// two parts never cancel.
    pub fn valuation_at_infinity(&self) -> Result<i64> {
        let deg = |f: &RatFunc| f.num().degree() - f.den().degree();
        let va = (!self.a.is_zero()).then(|| -2 * deg(&self.a));
        let vb = (!self.b.is_zero()).then(|| -2 * deg(&self.b) - 3);
        va.into_iter().chain(vb).min().ok_or(Error::ZeroValuation)
    }
    pub fn valuation(&self, e: &EllipticCurve, p: &ClosedPoint) -> Result<i64> {
        let ClosedPoint::Cubic { orbit, .. } = p else {
            return Err(Error::Invalid("not a point of the cubic".into()));
        };
        match orbit[0] {
            None => self.valuation_at_infinity(),
            Some(r) => {
                let ext = if orbit.len() == 1 { e.k.clone() } else { Field::new(e.k.q().pow(orbit.len() as u32))? };
                self.valuation_affine(e, &ext, r)
            }
        }
    }

    fn valuation_affine(&self, e: &EllipticCurve, ext: &Field, (x0, y0): (u32, u32)) -> Result<i64> {
        if self.is_zero() {
            return Err(Error::ZeroValuation);
        }
        let k = &e.k;
        let den = self.a.den().mul(self.b.den(), k);
        let num_a = self.a.num().mul(self.b.den(), k);
        let num_b = self.b.num().mul(self.a.den(), k);
        let ee = e.over(ext);
        let r = Some((x0, y0));
        let two_torsion = ee.neg(&r) == r;
        let m = min_poly(k, ext, x0);
        let vm = |p: &Poly| p.split_off(&m, k).0;
        let ram = if two_torsion { 2 } else { 1 };
        let v_den = ram * vm(&den);
        let (g, h) = e.g_h();
        let norm = |a: &Poly, b: &Poly| a.mul(a, k).sub(&a.mul(b, k).mul(&h, k), k).sub(&b.mul(b, k).mul(&g, k), k);
        let v_num = if two_torsion {
            vm(&norm(&num_a, &num_b))
        } else {
            let (mut a, mut b, mut count) = (num_a, num_b, 0i64);
            loop {
                let (ea, eb) = (a.eval(ext, x0), b.eval(ext, x0));
                if ea == 0 && eb == 0 {
                    a = a.div_exact(&m, k);
                    b = b.div_exact(&m, k);
                    count += 1;
                    continue;
                }
                if ext.add(ea, ext.mul(eb, y0)) != 0 {
                    break count;
                }
                break count + vm(&norm(&a, &b));
            }
        };
        Ok(v_num - v_den)
    }
}

/// Minimal polynomial over the prime field `k` of `x0 ∈ ext`.
fn min_poly(k: &Field, ext: &Field, x0: u32) -> Poly {
    let mut conj = alloc::vec![x0];
    let mut c = ext.pow(x0, k.q() as u64);
    while c != x0 {
        conj.push(c);
        c = ext.pow(c, k.q() as u64);
    }
    let mut m = Poly::one();
    for c in conj {
        m = m.mul(&Poly::from_coeffs(alloc::vec![ext.neg(c), 1]), ext);
    }
    // Coefficients are fixed by Frobenius, hence prime-field residues.
    debug_assert!(m.coeffs().iter().all(|&x| x < k.q()));
    m
}

fn line(e: &EllipticCurve, lambda: u32, nu: u32) -> EllFunc {
    let k = &e.k;
    EllFunc { a: RatFunc::from_poly(Poly::from_coeffs(alloc::vec![k.neg(nu), k.neg(lambda)])), b: RatFunc::one() }
}

fn vertical(e: &EllipticCurve, p: &Point) -> EllFunc {
    match p {
        None => EllFunc::one(),
        Some((x, _)) => EllFunc { a: RatFunc::from_poly(Poly::from_coeffs(alloc::vec![e.k.neg(*x), 1])), b: RatFunc::zero() },
    }
}

/// Adds `(q) - (O)` to the running divisor `(r) - (O) + div f`.
fn step(e: &EllipticCurve, r: &Point, q: &Point, f: &EllFunc) -> Result<(Point, EllFunc)> {
    let k = &e.k;
    let (Some((x1, y1)), Some((x2, y2))) = (r, q) else {
        return Ok((e.add(r, q), f.clone()));
    };
    let s = e.add(r, q);
    if s.is_none() {
        return Ok((None, f.mul(&vertical(e, r), e)));
    }
    let [a1, a2, a3, a4, _] = e.a;
    let lambda = if x1 != x2 {
        k.div(k.sub(*y2, *y1), k.sub(*x2, *x1))
    } else {
        let num = k.sub(
            k.add(k.add(k.mul(k.from_int(3), k.mul(*x1, *x1)), k.mul(k.from_int(2), k.mul(a2, *x1))), a4),
            k.mul(a1, *y1),
        );
        k.div(num, k.add(k.add(k.mul(k.from_int(2), *y1), k.mul(a1, *x1)), a3))
    };
    let nu = k.sub(*y1, k.mul(lambda, *x1));
    let g = line(e, lambda, nu).mul(&vertical(e, &s).inv(e)?, e);
    Ok((s, f.mul(&g, e)))
}

/// A function with divisor `Σ a_i (P_i)` for rational points `P_i`; the
/// divisor must be principal (degree zero, points summing to `O`).
pub fn principal_function(e: &EllipticCurve, divisor: &[(Point, i64)]) -> Result<EllFunc> {
    let mut r: Point = None;
    let mut f = EllFunc::one();
    for (p, a) in divisor {
        if p.is_none() {
            continue;
        }
        for _ in 0..a.unsigned_abs() {
            if *a > 0 {
                (r, f) = step(e, &r, p, &f)?;
            } else {
                (r, f) = step(e, &r, &e.neg(p), &f)?;
                f = f.mul(&vertical(e, p).inv(e)?, e);
            }
        }
    }
    if r.is_some() || divisor.iter().map(|(_, a)| a).sum::<i64>() != 0 {
        return Err(Error::Invalid("divisor is not principal".into()));
    }
    Ok(f)
}

/// Rational and degree-2 closed points other than those in `avoid`.
pub fn other_points(e: &EllipticCurve, avoid: &[ClosedPoint]) -> Vec<ClosedPoint> {
    let mut out: Vec<ClosedPoint> = crate::curve::points_of_degree(e, 1).unwrap_or_default();
    if let Ok(d2) = crate::curve::points_of_degree(e, 2) {
        out.extend(d2);
    }
    out.retain(|p| !avoid.contains(p));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_divisors() {
        let k = Field::new(5).unwrap();
        let e = EllipticCurve::short(&k, 1, 1).unwrap();
        let pts = e.points();
        let p = pts[1];
        let q = pts[2];
        // (P) + (Q) - (P+Q) - (O) is principal.
        let s = e.add(&p, &q);
        let f = principal_function(&e, &[(p, 1), (q, 1), (s, -1), (None, -1)]).unwrap();
        let cp = |x: Point| ClosedPoint::Cubic { degree: 1, orbit: alloc::vec![x] };
        let mut expect = alloc::collections::BTreeMap::new();
        for (x, a) in [(p, 1), (q, 1), (s, -1), (None, -1)] {
            *expect.entry(x).or_insert(0) += a;
        }
        for x in &pts {
            assert_eq!(f.valuation(&e, &cp(*x)).unwrap(), *expect.get(x).unwrap_or(&0), "at {x:?}");
        }
    }
}
