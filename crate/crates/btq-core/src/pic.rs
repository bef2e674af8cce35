//! Picard groups of punctured curves, the exact sequence relating units,
//! punctures and Picard groups, explicit units, and the set of classes
//! modulo inversion.
//!
//! `Pic` of the complete curve is presented on generators `(deg, E-part)`:
//! the degree coordinate is free and the remaining coordinates are the
//! invariant factor coordinates of the group of rational points (empty for
//! the projective line). The map from the puncture lattice sends `e_i` to the
//! class of `-P_i`.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::curve::{BaseCurve, ClosedPoint, CurveConfig, EllipticCurve, Point};
use crate::ellfun::{principal_function, EllFunc};
use crate::error::{Error, Result};
use crate::exact::lattice::{image_basis, kernel_basis, same_span};
use crate::exact::{FgAbGroup, FiniteAbelian, IntMatrix, Presented, RatFunc};

/// Default bound on the exponents of a unit.
pub const UNIT_BOUND: i64 = 12;

#[derive(Clone, Debug)]
pub struct PicData {
    pub config: CurveConfig,
    /// Rational points of the elliptic curve, `O` first (empty for `P¹`).
    pub points: Vec<Point>,
    pub point_group: Option<FiniteAbelian>,
    /// Invariant factors of the point group.
    pub point_orders: Vec<BigInt>,
    /// `Pic` of the complete curve.
    pub pic_bar: FgAbGroup,
    /// Relations of `Pic` of the complete curve on its generators.
    pub pic_bar_relations: IntMatrix,
    /// `(1 + m) × s` matrix of the map from the puncture lattice.
    pub phi: IntMatrix,
    /// Columns spanning the kernel of `phi`.
    pub ker_phi: IntMatrix,
    pub unit_rank: usize,
    pub pic: FgAbGroup,
    pub pic_presented: Presented,
    /// `gcd` of the puncture degrees.
    pub gcd: u64,
    pub pic0: FgAbGroup,
    /// Columns (in point-group coordinates) spanning `Im φ ∩ Pic⁰`.
    pub im_phi_cap_pic0: IntMatrix,
}

impl PicData {
    pub fn generators(&self) -> usize {
        self.phi.rows()
    }
    /// The class in `Pic` of the complete curve of a closed point.
    pub fn point_class(&self, p: &ClosedPoint) -> Vec<BigInt> {
        point_class(&self.config, self.point_group.as_ref(), &self.points, p)
    }
    pub fn pic_string(&self) -> String {
        self.pic.pretty()
    }
}

fn point_class(c: &CurveConfig, g: Option<&FiniteAbelian>, points: &[Point], p: &ClosedPoint) -> Vec<BigInt> {
    let mut v = vec![BigInt::from(p.degree())];
    if let (BaseCurve::Elliptic(e), ClosedPoint::Cubic { orbit, .. }, Some(g)) = (&c.base, p, g) {
        // The orbit sum is Frobenius-invariant, hence a rational point.
        let sum = if orbit.len() == 1 {
            orbit[0]
        } else {
            let ext = crate::exact::Field::new(c.k.q().pow(orbit.len() as u32)).unwrap();
            let ee = e.over(&ext);
            orbit.iter().fold(None, |acc, x| ee.add(&acc, x))
        };
        let idx = points.iter().position(|x| *x == sum).expect("orbit sum is rational");
        v.extend(g.coordinates(idx));
    }
    v
}

/// Computes the Picard data and the map from the puncture lattice.
pub fn nagata(config: &CurveConfig) -> Result<PicData> {
    let (points, point_group) = match &config.base {
        BaseCurve::ProjectiveLine => (Vec::new(), None),
        BaseCurve::Elliptic(e) => {
            let pts = e.points();
            let g = FiniteAbelian::from_law(pts.len(), |i, j| {
                let s = e.add(&pts[i], &pts[j]);
                pts.iter().position(|x| *x == s).unwrap()
            });
            (pts, Some(g))
        }
    };
    let point_orders: Vec<BigInt> = point_group.as_ref().map_or(Vec::new(), |g| g.group().torsion().to_vec());
    let m = point_orders.len();
    let n = 1 + m;
    let mut rel = IntMatrix::zeros(n, m);
    for (j, d) in point_orders.iter().enumerate() {
        rel.set(1 + j, j, d.clone());
    }
    let pic_bar = FgAbGroup::new(1, point_orders.iter().cloned());
    let s = config.s();
    let cols: Vec<Vec<BigInt>> = config
        .punctures
        .iter()
        .map(|p| point_class(config, point_group.as_ref(), &points, p).into_iter().map(|x| -x).collect())
        .collect();
    let phi = IntMatrix::from_columns(n, &cols);
    let all = phi.hcat(&rel);
    let pic_presented = Presented::new(n, &all);
    let pic = pic_presented.group().clone();
    // ker φ: kernel of [φ | R] projected to the puncture coordinates.
    let k = kernel_basis(&all);
    let proj: Vec<Vec<BigInt>> = (0..k.cols()).map(|j| k.column(j)[..s].to_vec()).collect();
    let ker_phi = image_basis(&IntMatrix::from_columns(s, &proj));
    let unit_rank = ker_phi.cols();
    let gcd = config.degrees().iter().fold(0u64, |g, &d| g.gcd(&(d as u64)));
    // Im φ ∩ Pic⁰ = φ(degree-zero combinations), read in point coordinates.
    let degree_row = IntMatrix::from_columns(1, &(0..s).map(|i| vec![phi.get(0, i).clone()]).collect::<Vec<_>>());
    let deg0 = kernel_basis(&degree_row);
    let image = phi.mul(&deg0);
    let cap_cols: Vec<Vec<BigInt>> = (0..image.cols()).map(|j| image.column(j)[1..].to_vec()).collect();
    let im_phi_cap_pic0 = IntMatrix::from_columns(m, &cap_cols);
    let rel0 = {
        let mut r = IntMatrix::zeros(m, m);
        for (j, d) in point_orders.iter().enumerate() {
            r.set(j, j, d.clone());
        }
        r.hcat(&im_phi_cap_pic0)
    };
    let pic0 = Presented::new(m, &rel0).group().clone();
    Ok(PicData {
        config: config.clone(),
        points,
        point_group,
        point_orders,
        pic_bar,
        pic_bar_relations: rel,
        phi,
        ker_phi,
        unit_rank,
        pic,
        pic_presented,
        gcd,
        pic0,
        im_phi_cap_pic0,
    })
}

/// A unit of the coordinate ring, up to constants.
#[derive(Clone, Debug)]
pub enum Unit {
    /// A rational function of `t`.
    Line(RatFunc),
    /// An element `a(x) + b(x) y` of the function field of the cubic.
    Cubic(EllFunc),
}

impl Unit {
    /// Valuation at a closed point of the base curve.
    pub fn valuation(&self, config: &CurveConfig, p: &ClosedPoint) -> Result<i64> {
        match (self, p, &config.base) {
            (Unit::Line(f), ClosedPoint::Line(pl), _) => f.valuation(pl, &config.k),
            (Unit::Cubic(f), _, BaseCurve::Elliptic(e)) => f.valuation(e, p),
            _ => Err(Error::Invalid("point and unit live on different curves".into())),
        }
    }
    pub fn display(&self, config: &CurveConfig) -> String {
        match self {
            Unit::Line(f) => f.display(&config.k),
            Unit::Cubic(f) => {
                alloc::format!("{} + ({})*y", f.a.display(&config.k).replace('t', "x"), f.b.display(&config.k).replace('t', "x"))
            }
        }
    }
}

/// Divisor vectors (on the punctures) of the emitted units, and the units.
#[derive(Clone, Debug)]
pub struct UnitsGroup {
    pub exponents: Vec<Vec<i64>>,
    pub units: Vec<Unit>,
}

/// One unit per basis vector of `ker φ`, with exponents bounded by `bound`.
pub fn units_group(pic: &PicData, bound: i64) -> Result<UnitsGroup> {
    let config = &pic.config;
    let basis = reduced_kernel(&pic.ker_phi);
    let mut units = Vec::new();
    let mut exponents = Vec::new();
    for a in basis {
        if a.iter().any(|x| x.abs() > bound) {
            return Err(Error::NotFound(alloc::format!("unit not found within bound {bound}")));
        }
        let u = match &config.base {
            BaseCurve::ProjectiveLine => Unit::Line(line_unit(config, &a)?),
            BaseCurve::Elliptic(e) => Unit::Cubic(cubic_unit(config, e, &a)?),
        };
        exponents.push(a);
        units.push(u);
    }
    Ok(UnitsGroup { exponents, units })
}

/// Products of puncture polynomials: the exponent at infinity follows.
fn line_unit(config: &CurveConfig, a: &[i64]) -> Result<RatFunc> {
    let k = &config.k;
    let mut f = RatFunc::one();
    for (p, &ai) in config.punctures.iter().zip(a) {
        if let ClosedPoint::Line(crate::exact::Place::Finite(pi)) = p {
            f = f.mul(&RatFunc::from_poly(pi.clone()).pow(ai, k)?, k);
        }
    }
    Ok(f)
}

fn cubic_unit(config: &CurveConfig, e: &EllipticCurve, a: &[i64]) -> Result<EllFunc> {
    let mut div = Vec::new();
    for (p, &ai) in config.punctures.iter().zip(a) {
        match p {
            ClosedPoint::Cubic { degree: 1, orbit } => div.push((orbit[0], ai)),
            _ if ai == 0 => {}
            _ => return Err(Error::Unsupported("units through higher-degree punctures on a cubic".into())),
        }
    }
    principal_function(e, &div)
}

/// Kernel basis as integer vectors after pairwise size reduction.
fn reduced_kernel(k: &IntMatrix) -> Vec<Vec<i64>> {
    let mut vs: Vec<Vec<BigInt>> = (0..k.cols()).map(|j| k.column(j)).collect();
    let norm = |v: &Vec<BigInt>| v.iter().map(|x| x * x).fold(BigInt::zero(), |a, b| a + b);
    loop {
        let mut changed = false;
        for i in 0..vs.len() {
            for j in 0..vs.len() {
                if i == j {
                    continue;
                }
                for sign in [1i64, -1] {
                    let cand: Vec<BigInt> = vs[i].iter().zip(&vs[j]).map(|(x, y)| x + y * sign).collect();
                    if norm(&cand) < norm(&vs[i]) {
                        vs[i] = cand;
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    vs.into_iter().map(|v| v.iter().map(|x| x.to_i64().unwrap_or(i64::MAX)).collect()).collect()
}

/// Report of the exactness checks, node by node.
#[derive(Clone, Debug)]
pub struct ExactnessReport {
    /// Units have no zeros or poles away from the punctures (checked on the
    /// given sample of other points) and realize their exponent vectors.
    pub units_supported_on_punctures: bool,
    /// Constants inject and the unit exponent vectors are independent.
    pub at_units: bool,
    /// Exponent vectors of units span `ker φ`.
    pub at_punctures: bool,
    /// `Pic(C̄) -> Pic(C)` kills exactly `Im φ`.
    pub at_pic_bar: bool,
    /// `Pic⁰(C) -> Pic(C) -> Z/gcd` is exact.
    pub degree_sequence: bool,
}

impl ExactnessReport {
    pub fn all(&self) -> bool {
        self.units_supported_on_punctures && self.at_units && self.at_punctures && self.at_pic_bar && self.degree_sequence
    }
}

/// Verifies the exact sequences for `pic` using explicit units. `others`
/// are closed points away from the punctures at which every unit must have
/// valuation zero.
pub fn check_exactness(pic: &PicData, units: &UnitsGroup, others: &[ClosedPoint]) -> Result<ExactnessReport> {
    let config = &pic.config;
    let s = config.s();
    let mut supported = true;
    for (u, a) in units.units.iter().zip(&units.exponents) {
        for (p, &ai) in config.punctures.iter().zip(a) {
            supported &= u.valuation(config, p)? == ai;
        }
        for p in others {
            supported &= u.valuation(config, p)? == 0;
        }
    }
    let cols: Vec<Vec<BigInt>> = units.exponents.iter().map(|a| a.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let ex = IntMatrix::from_columns(s, &cols);
    let at_units = crate::exact::intmat::snf(&ex).rank() == units.exponents.len();
    let at_punctures = same_span(&ex, &pic.ker_phi)
        && (0..ex.cols()).all(|j| pic.pic_presented.is_zero_class(&pic.phi.mul_vec(&ex.column(j))))
        && ex.cols() == pic.unit_rank;
    // The quotient Pic(C̄) -> Pic(C) kills φ's columns and nothing more: the
    // relation lattice of Pic(C) is exactly span(R) + Im φ.
    let rels = pic.phi.hcat(&pic.pic_bar_relations);
    let at_pic_bar = (0..rels.cols()).all(|j| pic.pic_presented.is_zero_class(&rels.column(j)))
        && pic.pic.rank() == pic.pic_bar.rank() - usize::from(s > 0);
    // Finite case: |Pic(C)| = |Pic⁰(C)| · gcd, and degree generates Z/gcd.
    let degree_sequence = match (pic.pic.order(), pic.pic0.order()) {
        (Some(a), Some(b)) => a == b * BigInt::from(pic.gcd),
        _ => false,
    };
    Ok(ExactnessReport { units_supported_on_punctures: supported, at_units, at_punctures, at_pic_bar, degree_sequence })
}

/// Orbits of `Pic(C)` under inversion, as canonical coordinate vectors.
#[derive(Clone, Debug)]
pub struct KummerSet {
    pub orbits: Vec<Vec<Vec<BigInt>>>,
}

impl KummerSet {
    pub fn len(&self) -> usize {
        self.orbits.len()
    }
    pub fn is_empty(&self) -> bool {
        self.orbits.is_empty()
    }
    pub fn fixed_points(&self) -> usize {
        self.orbits.iter().filter(|o| o.len() == 1).count()
    }
}

/// Enumerates `Pic(C)` (finite) and groups elements with their inverses.
pub fn kummer(pic: &FgAbGroup) -> Result<KummerSet> {
    if !pic.is_finite() {
        return Err(Error::Unsupported("Pic(C) is infinite".into()));
    }
    let orders = pic.torsion_u64();
    let total: u64 = orders.iter().product();
    if total > 1 << 22 {
        return Err(Error::ResourceCap(alloc::format!("|Pic(C)| = {total}")));
    }
    let mut seen = BTreeSet::new();
    let mut orbits = Vec::new();
    for idx in 0..total {
        let mut x = Vec::with_capacity(orders.len());
        let mut r = idx;
        for &d in &orders {
            x.push(r % d);
            r /= d;
        }
        if seen.contains(&x) {
            continue;
        }
        let neg: Vec<u64> = x.iter().zip(&orders).map(|(&a, &d)| (d - a) % d).collect();
        seen.insert(x.clone());
        seen.insert(neg.clone());
        let conv = |v: &Vec<u64>| v.iter().map(|&a| BigInt::from(a)).collect::<Vec<_>>();
        if neg == x {
            orbits.push(vec![conv(&x)]);
        } else {
            orbits.push(vec![conv(&x), conv(&neg)]);
        }
    }
    Ok(KummerSet { orbits })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::Field;

    #[test]
    fn line_examples() {
        let k = Field::new(3).unwrap();
        let c = CurveConfig::projective_line(&k, &["t", "inf"]).unwrap();
        let p = nagata(&c).unwrap();
        assert!(p.pic.is_trivial());
        assert_eq!(p.unit_rank, 1);
        let c2 = CurveConfig::projective_line(&k, &["t^2+1"]).unwrap();
        let p2 = nagata(&c2).unwrap();
        assert_eq!(p2.pic, FgAbGroup::cyclic(2));
        assert_eq!(p2.unit_rank, 0);
        let c3 = CurveConfig::projective_line(&k, &["t^2+1", "inf"]).unwrap();
        let u = units_group(&nagata(&c3).unwrap(), UNIT_BOUND).unwrap();
        assert_eq!(u.exponents.len(), 1);
        let Unit::Line(f) = &u.units[0] else { panic!() };
        assert_eq!(f.num().display(&k, "t").replace(' ', ""), "t^2+1");
    }

    #[test]
    fn kummer_sizes() {
        assert_eq!(kummer(&FgAbGroup::cyclic(3)).unwrap().len(), 2);
        assert_eq!(kummer(&FgAbGroup::cyclic(2)).unwrap().len(), 2);
        assert_eq!(kummer(&FgAbGroup::cyclic(8)).unwrap().len(), 5);
        assert!(kummer(&FgAbGroup::free(1)).is_err());
    }
}
