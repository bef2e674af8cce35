//! Crystallographic models: the cubulated `Z^s` with a translation lattice
//! `Λ` (the unit lattice `T` or its double `ST`), optionally extended by the
//! point inversions `x ↦ λ - x` (`N`, `SN`).
//!
//! Quotients are computed on a window: vertex classes of `Z^s / Λ` are
//! enumerated in invariant-factor coordinates with the free coordinates
//! bounded by the window, and a cube is kept when all its corners are.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exact::lattice::image_basis;
use crate::exact::intmat::snf;
use crate::exact::{ChainComplex, Coeff, FgAbGroup, IntMatrix, Presented, SparseMatrix};
use crate::pic::PicData;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Flavor {
    T,
    ST,
    N,
    SN,
}

impl Flavor {
    pub fn parse(s: &str) -> Result<Flavor> {
        match s.to_ascii_uppercase().as_str() {
            "T" => Ok(Flavor::T),
            "ST" => Ok(Flavor::ST),
            "N" => Ok(Flavor::N),
            "SN" => Ok(Flavor::SN),
            _ => Err(Error::Invalid(alloc::format!("unknown model flavor {s:?}"))),
        }
    }
    pub fn has_inversions(&self) -> bool {
        matches!(self, Flavor::N | Flavor::SN)
    }
}

/// An affine map `x ↦ sign · x + shift` of `Z^s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Affine {
    pub sign: i64,
    pub shift: Vec<i64>,
}

impl Affine {
    pub fn apply(&self, x: &[i64]) -> Vec<i64> {
        x.iter().zip(&self.shift).map(|(a, b)| self.sign * a + b).collect()
    }
    /// `self ∘ other`.
    pub fn compose(&self, other: &Affine) -> Affine {
        Affine { sign: self.sign * other.sign, shift: self.apply(&other.shift) }
    }
}

#[derive(Clone, Debug)]
pub struct CrystGroup {
    pub s: usize,
    pub flavor: Flavor,
    /// Columns: a basis of the unit lattice `T`.
    pub units: IntMatrix,
    /// Columns: a basis of the translation lattice (`T` or `2T`).
    pub lattice: IntMatrix,
}

/// `T = {a : Σ a_i [P_i] = 0}` from the Picard data.
pub fn build_cryst(pic: &PicData, flavor: Flavor) -> CrystGroup {
    CrystGroup::from_unit_lattice(pic.config.s(), &pic.ker_phi, flavor)
}

impl CrystGroup {
    /// A model from any sublattice of `Z^s` given by spanning columns
    /// (synthetic inputs included).
    pub fn from_unit_lattice(s: usize, t: &IntMatrix, flavor: Flavor) -> CrystGroup {
        let units = if t.cols() == 0 { IntMatrix::zeros(s, 0) } else { image_basis(t) };
        let mut lattice = units.clone();
        if matches!(flavor, Flavor::ST | Flavor::SN) {
            for r in 0..s {
                for c in 0..lattice.cols() {
                    let v = lattice.get(r, c) * 2u32;
                    lattice.set(r, c, v);
                }
            }
        }
        CrystGroup { s, flavor, units, lattice }
    }
    pub fn rank(&self) -> usize {
        self.lattice.cols()
    }
    /// Translations by the lattice basis, then the inversion at the origin.
    pub fn generators(&self) -> Vec<Affine> {
        let mut g: Vec<Affine> = (0..self.rank())
            .map(|c| Affine { sign: 1, shift: self.lattice.column(c).iter().map(|x| x.to_i64().unwrap()).collect() })
            .collect();
        if self.flavor.has_inversions() {
            g.push(Affine { sign: -1, shift: vec![0; self.s] });
        }
        g
    }
    /// Inversion centers `λ / 2`, as doubled coordinates `λ`, for a basis of
    /// the translation lattice (centers form `½Λ`).
    pub fn inversion_centers_doubled(&self) -> Option<IntMatrix> {
        self.flavor.has_inversions().then(|| self.lattice.clone())
    }
    fn max_entry(&self) -> i64 {
        (0..self.rank())
            .flat_map(|c| self.lattice.column(c))
            .map(|x| x.abs().to_i64().unwrap())
            .max()
            .unwrap_or(0)
    }
    pub fn min_window(&self) -> i64 {
        2 * self.max_entry() + 2
    }
}

/// A cube of `Z^s / Λ`: the class of its least corner and its directions.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ModelCell {
    pub class: Vec<BigInt>,
    pub dirs: Vec<usize>,
    /// 1, or 2 when an inversion maps the cell to itself.
    pub stabilizer: u8,
}

/// The window quotient: cells of `Z^s / Λ`, folded by the inversion for the
/// normalizer flavors.
#[derive(Clone, Debug)]
pub struct ModelQuotient {
    pub cells: Vec<Vec<ModelCell>>,
    pub complex: ChainComplex,
}

struct Classes {
    pres: Presented,
    u_inv: IntMatrix,
    /// Per transformed coordinate: order (0 free, 1 dropped).
    orders: Vec<BigInt>,
}

impl Classes {
    fn new(g: &CrystGroup) -> Classes {
        let rel = if g.rank() == 0 { IntMatrix::zeros(g.s, 1) } else { g.lattice.clone() };
        let pres = Presented::new(g.s, &rel);
        let f = snf(&rel);
        let mut orders = vec![BigInt::zero(); g.s];
        for (i, d) in f.factors.iter().enumerate() {
            orders[i] = d.clone();
        }
        Classes { pres, u_inv: f.u_inv, orders }
    }
    fn canonical(&self, x: &[i64]) -> Vec<BigInt> {
        self.pres.canonical_i64(x)
    }
    /// All classes with free coordinates in `[-w, w]`, as representatives.
    fn representatives(&self, w: i64) -> Vec<Vec<i64>> {
        let mut out: Vec<Vec<BigInt>> = vec![Vec::new()];
        for d in &self.orders {
            let range: Vec<i64> = if d.is_zero() {
                (-w..=w).collect()
            } else {
                (0..d.to_i64().unwrap()).collect()
            };
            out = out
                .into_iter()
                .flat_map(|v| {
                    range.iter().map(move |&a| {
                        let mut v = v.clone();
                        v.push(BigInt::from(a));
                        v
                    })
                })
                .collect();
        }
        out.iter().map(|y| self.u_inv.mul_vec(y).iter().map(|x| x.to_i64().unwrap()).collect()).collect()
    }
    fn in_window(&self, c: &[BigInt], w: i64) -> bool {
        let free = self.orders.iter().filter(|d| d.is_zero()).count();
        c[c.len() - free..].iter().all(|x| x.abs() <= BigInt::from(w))
    }
}

/// The window complex before folding: cube classes keyed by canonical
/// corner class and directions, with representatives.
fn window_cells(g: &CrystGroup, w: i64) -> (Classes, Vec<BTreeMap<(Vec<BigInt>, Vec<usize>), Vec<i64>>>) {
    let cl = Classes::new(g);
    let s = g.s;
    let reps = cl.representatives(w);
    let mut cells: Vec<BTreeMap<(Vec<BigInt>, Vec<usize>), Vec<i64>>> = vec![BTreeMap::new(); s + 1];
    for a in &reps {
        for mask in 0u64..1 << s {
            let dirs: Vec<usize> = (0..s).filter(|i| mask >> i & 1 == 1).collect();
            let ok = (0u64..1 << dirs.len()).all(|m| {
                let mut c = a.clone();
                for (j, &i) in dirs.iter().enumerate() {
                    c[i] += (m >> j & 1) as i64;
                }
                cl.in_window(&cl.canonical(&c), w)
            });
            if ok {
                cells[dirs.len()].insert((cl.canonical(a), dirs), a.clone());
            }
        }
    }
    (cl, cells)
}

/// Quotient of the window by `Λ` (and the inversion, for `N`/`SN`), with
/// orbit chains; cells reversed by their stabilizer are dropped.
pub fn model_quotient(g: &CrystGroup, window: i64) -> Result<ModelQuotient> {
    if window < g.min_window() {
        return Err(Error::Invalid(alloc::format!(
            "window {window} too small: need at least {} so the torus directions close up",
            g.min_window()
        )));
    }
    let (cl, cells) = window_cells(g, window);
    let s = g.s;
    let inv = g.flavor.has_inversions();
    // Orbit representative and sign of every window cell.
    type Key = (Vec<BigInt>, Vec<usize>);
    let mut orbit_of: Vec<BTreeMap<Key, (usize, i64)>> = vec![BTreeMap::new(); s + 1];
    let mut out: Vec<Vec<ModelCell>> = vec![Vec::new(); s + 1];
    let mut flipped: Vec<Vec<bool>> = vec![Vec::new(); s + 1];
    for d in 0..=s {
        for (key, a) in &cells[d] {
            if orbit_of[d].contains_key(key) {
                continue;
            }
            let id = out[d].len();
            orbit_of[d].insert(key.clone(), (id, 1));
            let mut stab = 1;
            let mut flip = false;
            if inv {
                // x ↦ -x sends the cube at a with directions I to the cube at
                // -a - e_I, reversing orientation when |I| is odd.
                let mut b: Vec<i64> = a.iter().map(|x| -x).collect();
                for &i in &key.1 {
                    b[i] -= 1;
                }
                let img = (cl.canonical(&b), key.1.clone());
                let sign = if d % 2 == 1 { -1 } else { 1 };
                if img == *key {
                    stab = 2;
                    flip = sign == -1;
                } else {
                    orbit_of[d].insert(img, (id, sign));
                }
            }
            out[d].push(ModelCell { class: key.0.clone(), dirs: key.1.clone(), stabilizer: stab });
            flipped[d].push(flip);
        }
    }
    // Keep unflipped orbits.
    let keep: Vec<Vec<usize>> =
        flipped.iter().map(|f| (0..f.len()).filter(|&i| !f[i]).collect()).collect();
    let pos: Vec<BTreeMap<usize, usize>> =
        keep.iter().map(|l| l.iter().enumerate().map(|(a, b)| (*b, a)).collect()).collect();
    let dims: Vec<usize> = keep.iter().map(Vec::len).collect();
    let mut bds = Vec::new();
    for d in 1..=s {
        let cols = keep[d]
            .iter()
            .map(|&c| {
                let cell = &out[d][c];
                let a = &cells[d][&(cell.class.clone(), cell.dirs.clone())];
                let mut col: BTreeMap<usize, i64> = BTreeMap::new();
                for (j, &i) in cell.dirs.iter().enumerate() {
                    let sj = if j % 2 == 0 { 1 } else { -1 };
                    let mut rest = cell.dirs.clone();
                    rest.remove(j);
                    let mut far = a.clone();
                    far[i] += 1;
                    for (corner, side) in [(a.clone(), -sj), (far, sj)] {
                        let (f, fs) = orbit_of[d - 1][&(cl.canonical(&corner), rest.clone())];
                        if let Some(&p) = pos[d - 1].get(&f) {
                            *col.entry(p).or_insert(0) += side * fs;
                        }
                    }
                }
                col.into_iter().filter(|(_, v)| *v != 0).collect()
            })
            .collect();
        bds.push(SparseMatrix::from_columns(dims[d - 1], cols));
    }
    let cells = keep.iter().zip(out).map(|(k, o)| k.iter().map(|&i| o[i].clone()).collect()).collect();
    Ok(ModelQuotient { cells, complex: ChainComplex::new(0, dims, bds)? })
}

/// Homology of the window quotient; the window is validated by recomputing
/// with a larger one.
pub fn quotient_homology(g: &CrystGroup, window: i64, coeff: Coeff) -> Result<Vec<FgAbGroup>> {
    let h = model_quotient(g, window)?.complex.homology(coeff);
    let h2 = model_quotient(g, window + 2)?.complex.homology(coeff);
    if h != h2 {
        return Err(Error::Invalid("homology not stable in the window size".into()));
    }
    Ok(h)
}

/// Vertices fixed by some inversion, modulo translations: the 2-torsion of
/// `Z^s / Λ`, with representatives. For `SN` these are the `T`-translates of
/// the origin, `2^{rank T}` of them.
pub fn special_vertices(g: &CrystGroup) -> Result<Vec<Vec<i64>>> {
    if !g.flavor.has_inversions() {
        return Err(Error::Invalid("special vertices need the inversions (N or SN)".into()));
    }
    let cl = Classes::new(g);
    let mut y_choices: Vec<Vec<BigInt>> = vec![Vec::new()];
    for d in &cl.orders {
        let opts: Vec<BigInt> = if d.is_even() && !d.is_zero() { vec![BigInt::zero(), d / 2] } else { vec![BigInt::zero()] };
        y_choices = y_choices
            .into_iter()
            .flat_map(|v| {
                opts.iter().map(move |o| {
                    let mut v = v.clone();
                    v.push(o.clone());
                    v
                })
            })
            .collect();
    }
    let mut out: Vec<Vec<i64>> =
        y_choices.iter().map(|y| cl.u_inv.mul_vec(y).iter().map(|x| x.to_i64().unwrap()).collect()).collect();
    out.sort();
    Ok(out)
}

/// Abelianization of the determinant-one monomial group over the units
/// `U` (given as a finitely generated abelian group with the coordinates of
/// `-1`): generators `U` and `w`, relations `2u = 0` (from
/// `w d(u) w⁻¹ = d(u⁻¹)`) and `2w = [-1]`.
pub fn sn_tilde_h1(units: &FgAbGroup, minus_one: &[i64], coeff: Coeff) -> FgAbGroup {
    let tors = units.torsion();
    let n = tors.len() + units.rank() + 1;
    let mut cols: Vec<Vec<BigInt>> = Vec::new();
    for (i, d) in tors.iter().enumerate() {
        let mut c = vec![BigInt::zero(); n];
        c[i] = d.clone();
        cols.push(c);
    }
    for i in 0..n - 1 {
        let mut c = vec![BigInt::zero(); n];
        c[i] = BigInt::from(2);
        cols.push(c);
    }
    let mut c: Vec<BigInt> = minus_one.iter().map(|x| BigInt::from(-x)).collect();
    c.resize(n - 1, BigInt::zero());
    c.push(BigInt::from(2));
    cols.push(c);
    let g = Presented::new(n, &IntMatrix::from_columns(n, &cols)).group().clone();
    match coeff {
        // H_1 with field coefficients: G ⊗ Z/ℓ.
        Coeff::ModL(l) => {
            let l = BigInt::from(l);
            let mut orders: Vec<BigInt> = g.torsion().iter().map(|d| d.gcd(&l)).collect();
            orders.extend(core::iter::repeat(l).take(g.rank()));
            FgAbGroup::new(0, orders)
        }
        _ => coeff.localize(&g),
    }
}

/// Units of `F_q[C]`: `F_q^×` (cyclic, `-1` at half its order) times `Z^rank`.
pub fn units_presentation(q: u64, rank: usize) -> (FgAbGroup, Vec<i64>) {
    let g = FgAbGroup::new(rank, [BigInt::from(q - 1)]);
    let mut m1 = vec![0i64; g.torsion().len()];
    if q % 2 == 1 && !m1.is_empty() {
        m1[0] = (q as i64 - 1) / 2;
    }
    m1.resize(g.torsion().len() + rank, 0);
    (g, m1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn affine_composition() {
        let t = Affine { sign: 1, shift: vec![1, -1] };
        let i = Affine { sign: -1, shift: vec![0, 0] };
        let ti = t.compose(&i);
        assert_eq!(ti.apply(&[3, 4]), vec![-2, -5]);
        assert_eq!(i.compose(&t).apply(&[3, 4]), vec![-4, -3]);
    }
}
