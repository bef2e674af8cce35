//! Vertices of the building as rank-two bundles on `P¹` that are trivial on
//! the punctured curve, their endomorphism algebras, and the quotient of the
//! building by `GL_2` or `SL_2` of the coordinate ring.
//!
//! A vertex `(L_i)` glues the free module `A²` to the lattices `L_i` at the
//! punctures. Its bundle splits as `O(a) ⊕ O(b)`; the vertex orbit is
//! determined by `n = |a - b|` and `max(a, b) mod g`, `g` the gcd of the
//! puncture degrees. Orbits are matched by an exact search in the space of
//! homomorphisms between the two lattice tuples.

pub mod algebra;
pub mod hom;
pub mod quotient;

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::building::{Building, BuildingVertex};
use crate::curve::{BaseCurve, CurveConfig};
use crate::error::{Error, Result};
use crate::exact::lattice;
use crate::exact::{Field, IntMatrix, Mat2, Place, Poly, RatFunc};
use crate::pic::{nagata, units_group, PicData, Unit, UNIT_BOUND};
use crate::tree::{Tree, TreeVertex};

pub use algebra::{EndAlgebra, StabDescriptor};
pub use hom::{hom_space, Condition, HomSpace, RrSpace};
pub use quotient::{quotient_ball, GroupFlavor, QuotientBall, QuotientCell};

/// Orbit label of a vertex under `GL_2(A)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BundleClass {
    /// `|a - b|` for the splitting `O(a) ⊕ O(b)`.
    pub n: u64,
    /// `max(a, b) mod g`.
    pub twist: i64,
}

/// Everything needed to work with bundles for one configuration on `P¹`.
#[derive(Clone, Debug)]
pub struct BundleContext {
    pub k: Field,
    pub places: Vec<Place>,
    pub degrees: Vec<i64>,
    pub building: Building,
    pub g: i64,
    pub pic: PicData,
    /// Valuation vectors of a basis of the units modulo constants.
    pub unit_lattice: Vec<Vec<i64>>,
    pub units: Vec<RatFunc>,
}

impl BundleContext {
    pub fn new(config: &CurveConfig) -> Result<BundleContext> {
        if !matches!(config.base, BaseCurve::ProjectiveLine) {
            return Err(Error::Unsupported("bundles are implemented over the projective line".into()));
        }
        let k = config.k.clone();
        let places = config.places().expect("projective line");
        let degrees: Vec<i64> = places.iter().map(|p| p.degree() as i64).collect();
        let building = Building::new(places.iter().map(|p| Tree::new(&k, p.clone())).collect());
        let pic = nagata(config)?;
        let ug = units_group(&pic, UNIT_BOUND)?;
        let units = ug
            .units
            .iter()
            .map(|u| match u {
                Unit::Line(f) => f.clone(),
                Unit::Cubic(_) => unreachable!(),
            })
            .collect();
        Ok(BundleContext { g: pic.gcd as i64, k, places, degrees, building, pic, unit_lattice: ug.exponents, units })
    }
    pub fn s(&self) -> usize {
        self.places.len()
    }
    pub fn trees(&self) -> &[Tree] {
        &self.building.trees
    }
    pub fn matrices(&self, v: &BuildingVertex) -> Vec<Mat2> {
        self.trees().iter().zip(v).map(|(t, x)| t.matrix(x)).collect()
    }
    /// `deg E = -Σ d_i m_i`.
    pub fn degree(&self, v: &BuildingVertex) -> i64 {
        -v.iter().zip(&self.degrees).map(|(x, d)| x.m * d).sum::<i64>()
    }
    /// Acts on a vertex by a matrix.
    pub fn act(&self, g: &Mat2, v: &BuildingVertex) -> BuildingVertex {
        self.trees().iter().zip(v).map(|(t, x)| t.canonicalize(&g.mul(&t.matrix(x), &self.k)).unwrap()).collect()
    }

    /// Endomorphisms preserving every lattice in `lattices` (pairs of place
    /// and tree vertex).
    pub fn end_space(&self, lattices: &[(usize, TreeVertex)]) -> HomSpace {
        let conds: Vec<Condition> = lattices
            .iter()
            .map(|(i, x)| {
                let m = self.trees()[*i].matrix(x);
                Condition { place: *i, src: m.clone(), dst: m, e: 0 }
            })
            .collect();
        hom_space(&self.k, &self.places, &conds)
    }
    pub fn vertex_end(&self, v: &BuildingVertex) -> HomSpace {
        self.end_space(&v.iter().cloned().enumerate().collect::<Vec<_>>())
    }

    pub fn classify_vertex(&self, v: &BuildingVertex) -> BundleClass {
        let dim = self.vertex_end(v).dim() as i64;
        let d = self.degree(v);
        let n = if dim > 4 { dim - 3 } else { d.rem_euclid(2) };
        BundleClass { n: n as u64, twist: ((d + n) / 2).rem_euclid(self.g) }
    }

    /// Some `γ ∈ GL_2(A)` with `γ · v = w`, or `None` if the vertices lie in
    /// different orbits.
    pub fn transport(&self, v: &BuildingVertex, w: &BuildingVertex) -> Option<Mat2> {
        if self.classify_vertex(v) != self.classify_vertex(w) {
            return None;
        }
        let k = &self.k;
        // γ L^v = π^e L^w needs Σ e_i d_i = (deg w - deg v) / 2.
        let e = solve_degrees(&self.degrees, (self.degree(w) - self.degree(v)) / 2)?;
        let mv = self.matrices(v);
        let mw = self.matrices(w);
        let conds: Vec<Condition> = (0..self.s())
            .map(|i| Condition { place: i, src: mv[i].clone(), dst: mw[i].clone(), e: e[i] })
            .collect();
        let hs = hom_space(k, &self.places, &conds);
        let target: Vec<i64> = (0..self.s())
            .map(|i| {
                let p = &self.places[i];
                2 * e[i] + p.valuation(&mw[i].det(k), k).unwrap() - p.valuation(&mv[i].det(k), k).unwrap()
            })
            .collect();
        let is_iso = |g: &Mat2| {
            let det = g.det(k);
            !det.is_zero() && self.places.iter().zip(&target).all(|(p, t)| p.valuation(&det, k).unwrap() == *t)
        };
        search(k, hs.dim(), |c| {
            let g = hs.element(c, k);
            is_iso(&g).then_some(g)
        })
    }

    /// Valuation vector of a unit at the punctures.
    pub fn unit_valuations(&self, f: &RatFunc) -> Vec<i64> {
        self.places.iter().map(|p| p.valuation(f, &self.k).unwrap()).collect()
    }

    /// Coordinates of a unit valuation vector in the unit lattice.
    pub fn unit_coordinates(&self, z: &[i64]) -> Option<Vec<i64>> {
        if self.unit_lattice.is_empty() {
            return z.iter().all(|x| *x == 0).then(Vec::new);
        }
        let cols: Vec<Vec<BigInt>> = self.unit_lattice.iter().map(|c| c.iter().map(|x| BigInt::from(*x)).collect()).collect();
        let m = IntMatrix::from_columns(self.s(), &cols);
        let b: Vec<BigInt> = z.iter().map(|x| BigInt::from(*x)).collect();
        lattice::solve(&m, &b).map(|x| x.iter().map(|y| y.to_i64().unwrap()).collect())
    }

    /// Writes a unit `u` with valuations in twice the unit lattice as
    /// `c · w²` and returns the constant `c`.
    pub fn square_class_constant(&self, u: &RatFunc) -> Option<u32> {
        let coords = self.unit_coordinates(&self.unit_valuations(u))?;
        let k = &self.k;
        let mut w = RatFunc::one();
        for (c, f) in coords.iter().zip(&self.units) {
            if c % 2 != 0 {
                return None;
            }
            w = w.mul(&f.pow(c / 2, k).ok()?, k);
        }
        u.div(&w.mul(&w, k), k).ok()?.as_constant()
    }

    /// A vertex `diag(π_i^{a_i}, 1)` realizing the class, when its twist is
    /// zero (otherwise the bundle has no diagonal form over the base ring).
    pub fn normal_form(&self, b: BundleClass) -> Result<Vec<i64>> {
        if b.twist != 0 || b.n as i64 % self.g != 0 {
            return Err(Error::Unsupported(format!("class (n={}, twist={}) has no diagonal form", b.n, b.twist)));
        }
        solve_degrees(&self.degrees, b.n as i64).ok_or_else(|| Error::Invalid("degree equation".into()))
    }
    pub fn normal_vertex(&self, a: &[i64]) -> BuildingVertex {
        a.iter().map(|&m| TreeVertex { m, u: Default::default() }).collect()
    }
}

/// Integer `e` with `Σ e_i d_i = target`, concentrated on as few places as
/// possible.
fn solve_degrees(d: &[i64], target: i64) -> Option<Vec<i64>> {
    let mut e = vec![0i64; d.len()];
    if let Some(i) = d.iter().position(|x| target % x == 0) {
        e[i] = target / d[i];
        return Some(e);
    }
    // Running Bézout combination.
    let mut g = 0i64;
    let mut coef: Vec<i64> = vec![0; d.len()];
    for (i, &di) in d.iter().enumerate() {
        let ext = g.extended_gcd(&di);
        for c in coef.iter_mut() {
            *c *= ext.x;
        }
        coef[i] = ext.y;
        g = ext.gcd;
    }
    if target % g != 0 {
        return None;
    }
    for (ei, c) in e.iter_mut().zip(&coef) {
        *ei = c * (target / g);
    }
    Some(e)
}

/// Deterministic random probing of `F_q^dim`, then exhaustive search.
fn search<T>(k: &Field, dim: usize, mut test: impl FnMut(&[u32]) -> Option<T>) -> Option<T> {
    let q = k.q() as u64;
    let mut state = 0x9E37_79B9_7F4A_7C15u64 ^ dim as u64;
    let mut c = vec![0u32; dim];
    for _ in 0..96 {
        for ci in c.iter_mut() {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            *ci = (state % q) as u32;
        }
        if let Some(t) = test(&c) {
            return Some(t);
        }
    }
    let total = q.checked_pow(dim as u32)?;
    for idx in 1..total {
        let mut x = idx;
        for ci in c.iter_mut() {
            *ci = (x % q) as u32;
            x /= q;
        }
        if let Some(t) = test(&c) {
            return Some(t);
        }
    }
    None
}

/// How a stabilizer generator acts on the link in one direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LinkActionKind {
    /// A split torus element: fixes exactly `0` and `∞`.
    Standard,
    /// A unipotent element moving `∞`: fixes only `0`.
    BoundaryBorel,
    /// Acts as the identity on the link.
    Trivial,
}

#[derive(Clone, Debug)]
pub struct GeneratorAction {
    pub matrix: Mat2,
    pub kind: LinkActionKind,
    /// Predicted fixed link positions (`q_v` is `∞`).
    pub fixed: Vec<u64>,
}

#[derive(Clone, Debug)]
pub struct DirectionAction {
    pub generators: Vec<GeneratorAction>,
    /// Orbits of the whole stabilizer on the link positions.
    pub orbits: Vec<Vec<u64>>,
}

#[derive(Clone, Debug)]
pub struct LinkAction {
    pub class: BundleClass,
    /// Exponents of the diagonal normal form.
    pub exponents: Vec<i64>,
    pub directions: Vec<DirectionAction>,
}

/// Stabilizer generators of the normal-form vertex: `diag(ζ, 1)`,
/// `diag(1, ζ)` (when `q > 2`) and `[[1, 0], [f, 1]]` for a basis of
/// `f ∈ L(Σ a_i P_i)`.
pub fn stabilizer_generators(ctx: &BundleContext, a: &[i64]) -> (Vec<Mat2>, Vec<RatFunc>) {
    let k = &ctx.k;
    let mut torus = Vec::new();
    if k.q() > 2 {
        let z = RatFunc::constant(k.primitive_element());
        torus.push(Mat2::diag(z.clone(), RatFunc::one()));
        torus.push(Mat2::diag(RatFunc::one(), z));
    }
    let rr = RrSpace::new(k, &ctx.places, a);
    let fs: Vec<RatFunc> = (0..rr.dim()).map(|j| rr.basis_element(j, k)).collect();
    (torus, fs)
}

pub fn stabilizer_link_action(ctx: &BundleContext, b: BundleClass) -> Result<LinkAction> {
    let a = ctx.normal_form(b)?;
    let v = ctx.normal_vertex(&a);
    let k = &ctx.k;
    let (torus, fs) = stabilizer_generators(ctx, &a);
    let rep = quotient::RepData::new(ctx, &v);
    let mut directions = Vec::new();
    for (i, tree) in ctx.trees().iter().enumerate() {
        let qv = tree.q_v();
        let all: Vec<u64> = (0..=qv).collect();
        let mut generators: Vec<GeneratorAction> = torus
            .iter()
            .map(|m| GeneratorAction { matrix: m.clone(), kind: LinkActionKind::Standard, fixed: vec![0, qv] })
            .collect();
        for f in &fs {
            let m = Mat2::new(RatFunc::one(), RatFunc::zero(), f.clone(), RatFunc::one());
            let boundary = ctx.places[i].valuation(f, k).unwrap() == -a[i];
            let (kind, fixed) =
                if boundary { (LinkActionKind::BoundaryBorel, vec![0]) } else { (LinkActionKind::Trivial, all.clone()) };
            generators.push(GeneratorAction { matrix: m, kind, fixed });
        }
        directions.push(DirectionAction { generators, orbits: rep.link_orbits(i) });
    }
    Ok(LinkAction { class: b, exponents: a, directions })
}

/// Brute-force fixed points of `g` on the link of `v` in direction `i`.
pub fn fixed_link_points(ctx: &BundleContext, v: &BuildingVertex, i: usize, g: &Mat2) -> Vec<u64> {
    let tree = &ctx.trees()[i];
    tree.link(&v[i])
        .iter()
        .enumerate()
        .filter(|(_, x)| tree.canonicalize(&g.mul(&tree.matrix(x), &ctx.k)).unwrap() == **x)
        .map(|(p, _)| p as u64)
        .collect()
}

/// Shape of the stabilizer of a class, from its normal form.
#[derive(Clone, Debug)]
pub struct ClassStabilizer {
    pub descriptor: StabDescriptor,
    /// `|GL_2(F_q)|` for the trivial bundle.
    pub finite_order: Option<u64>,
    /// Torus and unipotent generators.
    pub generators: Vec<Mat2>,
}

pub fn stabilizer_descriptor(ctx: &BundleContext, b: BundleClass) -> Result<ClassStabilizer> {
    let a = ctx.normal_form(b)?;
    let v = ctx.normal_vertex(&a);
    let end = ctx.vertex_end(&v);
    let descriptor = EndAlgebra::new(&ctx.k, &end).descriptor();
    let q = ctx.k.q() as u64;
    let (mut generators, fs) = stabilizer_generators(ctx, &a);
    let finite_order = (b.n == 0).then(|| (q * q - 1) * (q * q - q));
    if b.n == 0 {
        // GL_2(F_q) is generated by the torus, one elementary matrix and the
        // Weyl element.
        generators.push(Mat2::new(RatFunc::one(), RatFunc::one(), RatFunc::zero(), RatFunc::one()));
        generators.push(Mat2::new(RatFunc::zero(), RatFunc::one(), RatFunc::one(), RatFunc::zero()));
    } else {
        generators.extend(fs.into_iter().map(|f| Mat2::new(RatFunc::one(), RatFunc::zero(), f, RatFunc::one())));
    }
    Ok(ClassStabilizer { descriptor, finite_order, generators })
}

/// Cells whose stabilizer contains a split torus.
pub fn is_parabolic(ctx: &BundleContext, lattices: &[(usize, TreeVertex)]) -> bool {
    let end = ctx.end_space(lattices);
    EndAlgebra::new(&ctx.k, &end).descriptor().is_parabolic()
}

/// The distinct `(place, lattice)` pairs among a cube's corners.
pub fn cube_lattices(cube: &crate::building::BuildingCube) -> Vec<(usize, TreeVertex)> {
    let mut set = BTreeSet::new();
    for c in cube.corners() {
        for (i, x) in c.into_iter().enumerate() {
            set.insert((i, x));
        }
    }
    set.into_iter().collect()
}

/// Residue at puncture `i` of an integral element.
pub(crate) fn residue(ctx: &BundleContext, i: usize, x: &RatFunc) -> Poly {
    if x.is_zero() {
        return Poly::zero();
    }
    x.padic_expand(&ctx.places[i], 1, &ctx.k).digit(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_equation() {
        assert_eq!(solve_degrees(&[2, 3], 1).map(|e| e[0] * 2 + e[1] * 3), Some(1));
        assert_eq!(solve_degrees(&[2, 4], 3), None);
        assert_eq!(solve_degrees(&[1, 1], 5), Some(vec![5, 0]));
    }
}
