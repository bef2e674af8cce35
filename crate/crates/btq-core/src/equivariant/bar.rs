//! Normalized bar complexes with coefficients in signed permutation modules,
//! group homology, and presentations of homology with explicit cycles.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use super::group::{FiniteGroup, GroupTag};
use crate::error::{Error, Result};
use crate::exact::lattice::{image_basis, kernel_basis, SpanSolver};
use crate::exact::{ChainComplex, Coeff, FgAbGroup, IntMatrix, SparseMatrix};

/// Cap on the total rank of a bar complex (sparse path).
pub const BAR_CAP: usize = 300_000;
/// Cap on chain ranks where explicit cycles are tracked (dense path). The
/// Smith form keeps square transforms, so memory grows with the square.
pub const DENSE_CAP: usize = 3_000;

/// A subgroup of a [`FiniteGroup`], as a sorted element list starting at
/// the identity.
#[derive(Clone, Debug)]
pub struct Subgroup<'a> {
    pub group: &'a FiniteGroup,
    pub elems: Vec<usize>,
    pos: BTreeMap<usize, usize>,
}

impl<'a> Subgroup<'a> {
    pub fn new(group: &'a FiniteGroup, elems: &[usize]) -> Subgroup<'a> {
        let mut elems = elems.to_vec();
        elems.sort_unstable();
        elems.dedup();
        debug_assert_eq!(elems[0], 0);
        let pos = elems.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        Subgroup { group, elems, pos }
    }
    pub fn whole(group: &'a FiniteGroup) -> Subgroup<'a> {
        Subgroup::new(group, &(0..group.order()).collect::<Vec<_>>())
    }
    pub fn order(&self) -> usize {
        self.elems.len()
    }
    /// Local index of a group element.
    pub fn local(&self, g: usize) -> Option<usize> {
        self.pos.get(&g).copied()
    }
    fn lmul(&self, a: usize, b: usize) -> usize {
        self.pos[&self.group.mul(self.elems[a], self.elems[b])]
    }
    fn linv(&self, a: usize) -> usize {
        self.pos[&self.group.inv(self.elems[a])]
    }
}

/// `h · e_i = sign · e_j`, indexed by local element then basis vector.
#[derive(Clone, Debug)]
pub struct SignedPermModule {
    pub rank: usize,
    pub act: Vec<Vec<(usize, i64)>>,
}

impl SignedPermModule {
    pub fn trivial(order: usize) -> SignedPermModule {
        SignedPermModule { rank: 1, act: vec![vec![(0, 1)]; order] }
    }
    /// Rank one, `h` acting by `chi[h]`.
    pub fn character(chi: &[i64]) -> SignedPermModule {
        SignedPermModule { rank: 1, act: chi.iter().map(|&c| vec![(0, c)]).collect() }
    }
    /// `Z[G/H]` for the subgroup `h` (left cosets, ordered by least element).
    pub fn cosets(g: &FiniteGroup, h: &[usize]) -> SignedPermModule {
        let n = g.order();
        let mut coset_of = vec![usize::MAX; n];
        let mut reps = Vec::new();
        for x in 0..n {
            if coset_of[x] == usize::MAX {
                for &y in h {
                    coset_of[g.mul(x, y)] = reps.len();
                }
                reps.push(x);
            }
        }
        let act = (0..n).map(|a| reps.iter().map(|&r| (coset_of[g.mul(a, r)], 1)).collect()).collect();
        SignedPermModule { rank: reps.len(), act }
    }
}

fn tuple_count(n: usize, q: usize) -> Option<usize> {
    (n - 1).checked_pow(q as u32)
}

/// Boundary columns of the normalized bar complex `C_q(H; M)`, `q ≥ 1`,
/// with `M` made a right module by `m · h = h⁻¹ m`.
fn bar_boundary(h: &Subgroup, m: &SignedPermModule, q: usize) -> Vec<Vec<(usize, i64)>> {
    let n = h.order();
    let b = n - 1;
    let count = tuple_count(n, q).unwrap();
    let mut cols = Vec::with_capacity(count * m.rank);
    let mut tuple = vec![0usize; q];
    let index = |t: &[usize]| t.iter().fold(0usize, |acc, &x| acc * b + (x - 1));
    for t in 0..count {
        let mut x = t;
        for slot in tuple.iter_mut().rev() {
            *slot = x % b + 1;
            x /= b;
        }
        for i in 0..m.rank {
            let mut col: BTreeMap<usize, i64> = BTreeMap::new();
            // [g2|..|gq] ⊗ g1⁻¹ e_i
            let (j, s) = m.act[h.linv(tuple[0])][i];
            *col.entry(index(&tuple[1..]) * m.rank + j).or_insert(0) += s;
            for k in 1..q {
                let prod = h.lmul(tuple[k - 1], tuple[k]);
                if prod != 0 {
                    let mut u = tuple[..k - 1].to_vec();
                    u.push(prod);
                    u.extend_from_slice(&tuple[k + 1..]);
                    let sign = if k % 2 == 1 { -1 } else { 1 };
                    *col.entry(index(&u) * m.rank + i).or_insert(0) += sign;
                }
            }
            let sign = if q % 2 == 1 { -1 } else { 1 };
            *col.entry(index(&tuple[..q - 1]) * m.rank + i).or_insert(0) += sign;
            cols.push(col.into_iter().filter(|(_, v)| *v != 0).collect());
        }
    }
    cols
}

/// The bar complex in degrees `0..=top`.
pub fn bar_complex(h: &Subgroup, m: &SignedPermModule, top: usize) -> Result<ChainComplex> {
    let n = h.order();
    let mut dims = Vec::new();
    let mut total = 0usize;
    for q in 0..=top {
        let d = tuple_count(n, q).and_then(|c| c.checked_mul(m.rank)).unwrap_or(usize::MAX);
        total = total.saturating_add(d);
        dims.push(d);
    }
    if total > BAR_CAP {
        return Err(Error::ResourceCap(alloc::format!(
            "bar complex of a group of order {n} up to degree {top}: {total} generators"
        )));
    }
    let bds = (1..=top).map(|q| SparseMatrix::from_columns(dims[q - 1], bar_boundary(h, m, q))).collect();
    ChainComplex::new(0, dims, bds)
}

/// `G ⊗ Z/ℓ`.
pub fn tensor_mod(g: &FgAbGroup, l: u64) -> FgAbGroup {
    let lb = BigInt::from(l);
    let mut orders: Vec<BigInt> = g.torsion().iter().map(|d| d.gcd(&lb)).collect();
    orders.extend(core::iter::repeat(lb).take(g.rank()));
    FgAbGroup::new(0, orders)
}

/// `Tor(G, Z/ℓ)`.
pub fn tor_mod(g: &FgAbGroup, l: u64) -> FgAbGroup {
    let lb = BigInt::from(l);
    FgAbGroup::new(0, g.torsion().iter().map(|d| d.gcd(&lb)))
}

/// Universal coefficients from integral `H_n` and `H_{n-1}`.
pub fn with_coefficients(hn: &FgAbGroup, hn1: Option<&FgAbGroup>, coeff: Coeff) -> FgAbGroup {
    match coeff {
        Coeff::Z => hn.clone(),
        Coeff::ZHalf => hn.invert_two(),
        Coeff::ModL(l) => {
            let t = hn1.map(|h| tor_mod(h, l)).unwrap_or_else(FgAbGroup::trivial);
            tensor_mod(hn, l).direct_sum(&t)
        }
    }
}

/// Integral homology of a cyclic group of order `m`.
pub fn cyclic_homology(m: usize, n: usize) -> FgAbGroup {
    match n {
        0 => FgAbGroup::free(1),
        _ if n % 2 == 1 => FgAbGroup::cyclic(m as u64),
        _ => FgAbGroup::trivial(),
    }
}

/// `H_n(H; M)` over `Z` by the bar complex.
pub fn bar_homology(h: &Subgroup, m: &SignedPermModule, n: usize) -> Result<FgAbGroup> {
    Ok(bar_complex(h, m, n + 1)?.homology_at(n as i64, Coeff::Z))
}

/// `H_n(G; coeff)` with trivial coefficients; cyclic groups by the closed
/// form, everything else by the bar complex.
pub fn group_homology(g: &FiniteGroup, n: usize, coeff: Coeff) -> Result<FgAbGroup> {
    let integral = |k: usize| -> Result<FgAbGroup> {
        match g.tag {
            GroupTag::Cyclic(m) => Ok(cyclic_homology(m, k)),
            _ => bar_homology(&Subgroup::whole(g), &SignedPermModule::trivial(g.order()), k),
        }
    };
    let hn = integral(n)?;
    let hn1 = match (coeff, n) {
        (Coeff::ModL(_), 1..) => Some(integral(n - 1)?),
        _ => None,
    };
    Ok(with_coefficients(&hn, hn1.as_ref(), coeff))
}

/// `H_n(G; M)` for a signed permutation module.
pub fn module_homology(g: &FiniteGroup, m: &SignedPermModule, n: usize, coeff: Coeff) -> Result<FgAbGroup> {
    let c = bar_complex(&Subgroup::whole(g), m, n + 1)?;
    let hn = c.homology_at(n as i64, Coeff::Z);
    let hn1 = (n >= 1).then(|| c.homology_at(n as i64 - 1, Coeff::Z));
    Ok(with_coefficients(&hn, hn1.as_ref(), coeff))
}

/// A matrix with at least one row and column (zero padding), so that the
/// normal form routines never see an empty side.
fn padded(m: &IntMatrix) -> IntMatrix {
    let (r, c) = (m.rows().max(1), m.cols().max(1));
    if r == m.rows() && c == m.cols() {
        return m.clone();
    }
    let mut out = IntMatrix::zeros(r, c);
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            out.set(i, j, m.get(i, j).clone());
        }
    }
    out
}

pub(crate) fn dense(m: &SparseMatrix) -> IntMatrix {
    m.to_dense()
}

/// `H = Z / B` for `C_{q+1} --d_in--> C_q --d_out--> C_{q-1}`, tensored
/// with `Z/modulus` when `modulus > 0`, presented on an explicit basis of
/// cycles.
#[derive(Clone, Debug)]
pub struct CyclePresentation {
    /// Columns: cycle basis in chain coordinates.
    pub cycles: IntMatrix,
    /// Columns: boundaries (and `modulus` multiples) in cycle coordinates.
    pub relations: IntMatrix,
    solver: Option<SpanSolver>,
}

impl CyclePresentation {
    pub fn new(d_in: &IntMatrix, d_out: &IntMatrix, n: usize, modulus: u64) -> CyclePresentation {
        let ml = BigInt::from(modulus);
        // Cycles: x with d_out x ≡ 0.
        let cycles = if d_out.rows() == 0 || d_out.is_zero() && modulus == 0 {
            IntMatrix::identity(n)
        } else {
            let mut big = d_out.clone();
            if modulus > 0 {
                let mut s = IntMatrix::zeros(d_out.rows(), d_out.rows());
                for i in 0..d_out.rows() {
                    s.set(i, i, ml.clone());
                }
                big = big.hcat(&s);
            }
            let k = kernel_basis(&padded(&big));
            let proj: Vec<Vec<BigInt>> =
                (0..k.cols()).map(|j| k.column(j)[..n].to_vec()).filter(|v| v.iter().any(|x| !x.is_zero())).collect();
            if proj.is_empty() {
                IntMatrix::zeros(n, 0)
            } else {
                let b = image_basis(&IntMatrix::from_columns(n, &proj));
                b
            }
        };
        if cycles.cols() == 0 {
            return CyclePresentation { cycles, relations: IntMatrix::zeros(0, 0), solver: None };
        }
        let solver = SpanSolver::new(&cycles);
        let mut bnd = d_in.clone();
        if modulus > 0 {
            let mut s = IntMatrix::zeros(n, n);
            for i in 0..n {
                s.set(i, i, ml.clone());
            }
            bnd = if bnd.cols() == 0 { s } else { bnd.hcat(&s) };
        }
        let z = cycles.cols();
        let relations = if bnd.cols() == 0 || bnd.is_zero() {
            IntMatrix::zeros(z, 0)
        } else {
            let span = image_basis(&bnd);
            let cols: Vec<Vec<BigInt>> = (0..span.cols())
                .map(|j| solver.solve(&span.column(j)).expect("boundaries are cycles"))
                .collect();
            IntMatrix::from_columns(z, &cols)
        };
        CyclePresentation { cycles, relations, solver: Some(solver) }
    }
    pub fn generators(&self) -> usize {
        self.cycles.cols()
    }
    /// Cycle coordinates of a chain that is a cycle.
    pub fn express(&self, chain: &[BigInt]) -> Vec<BigInt> {
        match &self.solver {
            Some(s) => s.solve(chain).expect("chain is a cycle"),
            None => Vec::new(),
        }
    }
    pub fn group(&self) -> FgAbGroup {
        if self.generators() == 0 {
            return FgAbGroup::trivial();
        }
        crate::exact::Presented::new(self.generators(), &padded_cols(&self.relations)).group().clone()
    }
}

/// Adds a zero column to a matrix with none.
pub(crate) fn padded_cols(m: &IntMatrix) -> IntMatrix {
    if m.cols() > 0 {
        m.clone()
    } else {
        IntMatrix::zeros(m.rows(), 1)
    }
}

/// Explicit-cycle homology of a twisted bar complex in degrees `0..=top`.
#[derive(Clone, Debug)]
pub struct BarHomology {
    pub order: usize,
    pub degrees: Vec<CyclePresentation>,
}

impl BarHomology {
    pub fn new(h: &Subgroup, chi: &[i64], top: usize, modulus: u64) -> Result<BarHomology> {
        let n = h.order();
        let m = SignedPermModule::character(chi);
        let c = bar_complex(h, &m, top + 1)?;
        if c.dims().iter().any(|&d| d > DENSE_CAP) {
            return Err(Error::ResourceCap(alloc::format!(
                "explicit cycles for a stabilizer of order {n} up to degree {top}"
            )));
        }
        let degrees = (0..=top as i64)
            .map(|q| {
                let d_in = dense(&c.boundary(q + 1));
                let d_out = if q == 0 { IntMatrix::zeros(0, c.dim(0)) } else { dense(&c.boundary(q)) };
                CyclePresentation::new(&d_in, &d_out, c.dim(q), modulus)
            })
            .collect();
        Ok(BarHomology { order: n, degrees })
    }
}

/// Index of a bar tuple (local, non-identity entries).
pub(crate) fn tuple_index(t: &[usize], order: usize) -> usize {
    t.iter().fold(0usize, |acc, &x| acc * (order - 1) + (x - 1))
}

/// Decodes a bar tuple index.
pub(crate) fn tuple_of(mut idx: usize, q: usize, order: usize) -> Vec<usize> {
    let b = order - 1;
    let mut t = vec![0usize; q];
    for slot in t.iter_mut().rev() {
        *slot = idx % b + 1;
        idx /= b;
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cyclic_groups() {
        for m in 1..=6 {
            let g = FiniteGroup::from_table(
                &(0..m).map(|a| (0..m).map(|b| (a + b) % m).collect()).collect::<Vec<_>>(),
            )
            .unwrap();
            for n in 0..=3 {
                let bar = group_homology(&g, n, Coeff::Z).unwrap();
                assert_eq!(bar, cyclic_homology(m, n), "m={m} n={n}");
            }
        }
    }

    #[test]
    fn universal_coefficients() {
        let g = FiniteGroup::cyclic(3);
        assert_eq!(group_homology(&g, 2, Coeff::ModL(3)).unwrap(), FgAbGroup::cyclic(3));
        assert!(group_homology(&g, 2, Coeff::ModL(5)).unwrap().is_trivial());
        assert!(group_homology(&FiniteGroup::cyclic(2), 1, Coeff::ZHalf).unwrap().is_trivial());
    }
}
