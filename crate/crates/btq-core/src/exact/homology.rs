//! Homology of integer chain complexes with coefficients in `Z`, `Z/ℓ` or
//! `Z[1/2]`.
//!
//! `Z[1/2]` is flat over `Z`, so `H(C ⊗ Z[1/2]) = H(C) ⊗ Z[1/2]`: it is
//! computed as integral homology with every 2-primary torsion factor dropped.
//! The free rank then counts `Z[1/2]` summands.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::abgroup::FgAbGroup;
use super::intmat::{invariant_factors, rank_mod_p, IntMatrix, SparseMatrix};
use crate::error::{Error, Result};

/// Coefficient ring for homology.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Coeff {
    Z,
    /// `Z/ℓ` for a prime `ℓ`.
    ModL(u64),
    ZHalf,
}

impl Coeff {
    pub fn parse(s: &str) -> Result<Coeff> {
        match s.trim() {
            "Z" | "z" => Ok(Coeff::Z),
            "Z[1/2]" | "z[1/2]" | "zhalf" | "Zhalf" => Ok(Coeff::ZHalf),
            other => {
                let l = other
                    .strip_prefix("Z/")
                    .or_else(|| other.strip_prefix("z/"))
                    .and_then(|x| x.parse::<u64>().ok())
                    .ok_or_else(|| Error::Invalid(alloc::format!("unknown coefficient ring {other:?}")))?;
                if !super::field::is_prime(l as u32) || l > u32::MAX as u64 {
                    return Err(Error::Invalid(alloc::format!("Z/{l}: modulus must be prime")));
                }
                Ok(Coeff::ModL(l))
            }
        }
    }
    pub fn label(&self) -> alloc::string::String {
        match self {
            Coeff::Z => "Z".into(),
            Coeff::ModL(l) => alloc::format!("Z/{l}"),
            Coeff::ZHalf => "Z[1/2]".into(),
        }
    }
    /// Applies the coefficient change to an integral homology group, when
    /// that is possible from the group alone (`Z` and `Z[1/2]`).
    pub fn localize(&self, g: &FgAbGroup) -> FgAbGroup {
        match self {
            Coeff::ZHalf => g.invert_two(),
            _ => g.clone(),
        }
    }
}

/// `ker d_n / im d_{n+1}` where `d_n: C_n -> C_{n-1}` and
/// `d_{n+1}: C_{n+1} -> C_n`.
pub fn homology_of_pair(d_n: &SparseMatrix, d_np1: &SparseMatrix, coeff: Coeff) -> Result<FgAbGroup> {
    if d_n.cols() != d_np1.rows() {
        return Err(Error::Invalid("boundary shapes do not compose".into()));
    }
    if !d_n.mul(d_np1).is_zero() {
        return Err(Error::NotAComplex);
    }
    let dim = d_n.cols();
    Ok(match coeff {
        Coeff::ModL(l) => {
            let k = dim - rank_mod_p(d_n, l);
            FgAbGroup::from_u64(0, &vec![l; k - rank_mod_p(d_np1, l)])
        }
        _ => {
            let rk = invariant_factors(d_n).len();
            let f = invariant_factors(d_np1);
            let free = dim - rk - f.len();
            coeff.localize(&FgAbGroup::new(free, f.into_iter().filter(|d| !d.is_one())))
        }
    })
}

/// A bounded chain complex `C_top -> ... -> C_min` of free abelian groups.
/// `boundary(n)` maps degree `n` to degree `n - 1`.
#[derive(Clone, Debug)]
pub struct ChainComplex {
    min_degree: i64,
    dims: Vec<usize>,
    // d[i] : C_{min+i} -> C_{min+i-1}; d[0] has zero rows.
    d: Vec<SparseMatrix>,
}

impl ChainComplex {
    /// `dims[i]` is the rank in degree `min_degree + i`; `boundaries[i]` is the
    /// map out of degree `min_degree + i + 1`.
    pub fn new(min_degree: i64, dims: Vec<usize>, boundaries: Vec<SparseMatrix>) -> Result<ChainComplex> {
        if dims.is_empty() || boundaries.len() + 1 != dims.len() {
            return Err(Error::Invalid("need one boundary per consecutive pair of degrees".into()));
        }
        let mut d = Vec::with_capacity(dims.len());
        d.push(SparseMatrix::zeros(0, dims[0]));
        for (i, b) in boundaries.into_iter().enumerate() {
            if b.rows() != dims[i] || b.cols() != dims[i + 1] {
                return Err(Error::Invalid(alloc::format!("boundary {} has the wrong shape", i + 1)));
            }
            d.push(b);
        }
        for i in 1..d.len() - 1 {
            if !d[i].mul(&d[i + 1]).is_zero() {
                return Err(Error::NotAComplex);
            }
        }
        Ok(ChainComplex { min_degree, dims, d })
    }
    pub fn min_degree(&self) -> i64 {
        self.min_degree
    }
    pub fn max_degree(&self) -> i64 {
        self.min_degree + self.dims.len() as i64 - 1
    }
    pub fn dim(&self, n: i64) -> usize {
        self.index(n).map_or(0, |i| self.dims[i])
    }
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }
    fn index(&self, n: i64) -> Option<usize> {
        let i = n - self.min_degree;
        (i >= 0 && (i as usize) < self.dims.len()).then_some(i as usize)
    }
    /// The boundary out of degree `n` (zero matrices outside the range).
    pub fn boundary(&self, n: i64) -> SparseMatrix {
        match self.index(n) {
            Some(i) => self.d[i].clone(),
            None => SparseMatrix::zeros(self.dim(n - 1), 0),
        }
    }
    pub fn homology_at(&self, n: i64, coeff: Coeff) -> FgAbGroup {
        let dn = match self.index(n) {
            Some(i) => self.d[i].clone(),
            None => return FgAbGroup::trivial(),
        };
        let dnp1 = match self.index(n + 1) {
            Some(i) => self.d[i].clone(),
            None => SparseMatrix::zeros(self.dim(n), 0),
        };
        homology_of_pair(&dn, &dnp1, coeff).expect("validated complex")
    }
    /// Homology in every degree from `min_degree` to `max_degree`.
    pub fn homology(&self, coeff: Coeff) -> Vec<FgAbGroup> {
        (self.min_degree..=self.max_degree()).map(|n| self.homology_at(n, coeff)).collect()
    }
    pub fn euler_characteristic(&self) -> i64 {
        self.dims
            .iter()
            .enumerate()
            .map(|(i, &d)| if (self.min_degree + i as i64) % 2 == 0 { d as i64 } else { -(d as i64) })
            .sum()
    }
    /// The complex with `Z` appended in degree `min_degree - 1`, mapped to by
    /// the augmentation that sends every generator of the bottom degree to 1.
    pub fn augmented(&self) -> ChainComplex {
        let eps = SparseMatrix::from_columns(1, vec![vec![(0usize, 1i64)]; self.dims[0]]);
        let mut dims = vec![1];
        dims.extend_from_slice(&self.dims);
        let mut bds = vec![eps];
        bds.extend(self.d[1..].iter().cloned());
        ChainComplex::new(self.min_degree - 1, dims, bds).expect("augmentation is a chain map")
    }
    /// Free ranks of integral homology.
    pub fn betti(&self) -> Vec<usize> {
        self.homology(Coeff::Z).iter().map(FgAbGroup::rank).collect()
    }
}

/// Verifies `Z[1/2]` homology equals integral homology with 2-primary torsion
/// removed, degree by degree. The right-hand side is computed independently by
/// diagonalizing the boundaries over the dyadic rationals.
pub fn localization_law_holds(c: &ChainComplex) -> bool {
    (c.min_degree..=c.max_degree()).all(|n| {
        let z = c.homology_at(n, Coeff::Z).invert_two();
        let dn = c.boundary(n);
        let dnp1 = match c.index(n + 1) {
            Some(i) => c.d[i].clone(),
            None => SparseMatrix::zeros(c.dim(n), 0),
        };
        let (rk, _) = dyadic_diagonal(&dn);
        let (rk1, odd) = dyadic_diagonal(&dnp1);
        z == FgAbGroup::new(c.dim(n) - rk - rk1, odd)
    })
}

/// Diagonalizes an integer matrix over `Z[1/2]`. Returns the rank and the odd
/// parts of the diagonal entries.
pub fn dyadic_diagonal(m: &SparseMatrix) -> (usize, Vec<BigInt>) {
    // Entries are integers; a unit 2^k never matters for divisibility, so
    // every comparison uses the odd part.
    let odd = |x: &BigInt| -> BigInt {
        let mut x = x.abs();
        if x.is_zero() {
            return x;
        }
        while x.is_even() {
            x >>= 1;
        }
        x
    };
    let (rows, cols) = (m.rows(), m.cols());
    let dense = m.to_dense();
    let mut a: Vec<Vec<BigInt>> = (0..rows).map(|i| (0..cols).map(|j| dense.get(i, j).clone()).collect()).collect();
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        let mut best: Option<(usize, usize, BigInt)> = None;
        for (i, row) in a.iter().enumerate().skip(t) {
            for (j, x) in row.iter().enumerate().skip(t) {
                if !x.is_zero() {
                    let o = odd(x);
                    if best.as_ref().is_none_or(|b| o < b.2) {
                        best = Some((i, j, o));
                    }
                }
            }
        }
        let Some((i, j, _)) = best else { break };
        a.swap(t, i);
        for row in a.iter_mut() {
            row.swap(t, j);
        }
        // Rows and columns may be doubled freely (2 is a unit), which keeps
        // everything integral while clearing the pivot's power of two.
        let mut done = true;
        for i in t + 1..rows {
            if a[i][t].is_zero() {
                continue;
            }
            let (p, x) = (a[t][t].clone(), a[i][t].clone());
            let po = odd(&p);
            let mut scale = BigInt::one();
            while !(&x * &scale).is_multiple_of(&(&p / &po)) {
                scale <<= 1;
            }
            let xs = &x * &scale;
            let q = (&xs / (&p / &po)).div_floor(&po);
            for c in t..cols {
                let v = &a[i][c] * &scale - &q * &a[t][c];
                a[i][c] = v;
            }
            if !a[i][t].is_zero() {
                done = false;
            }
        }
        for j in t + 1..cols {
            if a[t][j].is_zero() {
                continue;
            }
            let (p, x) = (a[t][t].clone(), a[t][j].clone());
            let po = odd(&p);
            let mut scale = BigInt::one();
            while !(&x * &scale).is_multiple_of(&(&p / &po)) {
                scale <<= 1;
            }
            let xs = &x * &scale;
            let q = (&xs / (&p / &po)).div_floor(&po);
            for r in t..rows {
                let v = &a[r][j] * &scale - &q * &a[r][t];
                a[r][j] = v;
            }
            if !a[t][j].is_zero() {
                done = false;
            }
        }
        if done {
            diag.push(odd(&a[t][t]));
            t += 1;
        }
    }
    (diag.len(), diag)
}

/// A random three-term complex `C_2 -> C_1 -> C_0` with small entries, drawn
/// from `next`. Boundaries are `A·[I 0]·W⁻¹` and `W·[0 I]ᵀ·B` for a random
/// unimodular `W`, so they compose to zero while carrying varied torsion.
pub fn random_complex(next: &mut dyn FnMut() -> u64) -> ChainComplex {
    let mut pick = |lo: i64, hi: i64| lo + (next() % (hi - lo + 1) as u64) as i64;
    let n1 = pick(2, 6) as usize;
    let m = pick(1, n1 as i64 - 1) as usize;
    let n0 = pick(1, 5) as usize;
    let n2 = pick(1, 5) as usize;
    let mut w = IntMatrix::identity(n1);
    let mut w_inv = IntMatrix::identity(n1);
    for _ in 0..3 * n1 {
        let i = pick(0, n1 as i64 - 1) as usize;
        let j = pick(0, n1 as i64 - 1) as usize;
        if i == j {
            continue;
        }
        let c = pick(-2, 2);
        let mut e = IntMatrix::identity(n1);
        e.set(i, j, BigInt::from(c));
        let mut e_inv = IntMatrix::identity(n1);
        e_inv.set(i, j, BigInt::from(-c));
        w = w.mul(&e);
        w_inv = e_inv.mul(&w_inv);
    }
    let mut a = IntMatrix::zeros(n0, n1);
    for r in 0..n0 {
        for c in 0..m {
            a.set(r, c, BigInt::from(pick(-4, 4)));
        }
    }
    let mut b = IntMatrix::zeros(n1, n2);
    for r in m..n1 {
        for c in 0..n2 {
            b.set(r, c, BigInt::from(pick(-4, 4)));
        }
    }
    let d1 = a.mul(&w_inv);
    let d2 = w.mul(&b);
    ChainComplex::new(0, vec![n0, n1, n2], vec![d1.to_sparse(), d2.to_sparse()]).expect("composes to zero")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_circle() {
        // Four vertices, four edges e_i = v_{i+1} - v_i.
        let d1 = IntMatrix::from_rows(&[[-1, 0, 0, 1], [1, -1, 0, 0], [0, 1, -1, 0], [0, 0, 1, -1]]).to_sparse();
        let c = ChainComplex::new(0, vec![4, 4], vec![d1]).unwrap();
        let h = c.homology(Coeff::Z);
        assert_eq!(h, [FgAbGroup::free(1), FgAbGroup::free(1)]);
    }

    #[test]
    fn multiplication_complexes() {
        let two = IntMatrix::from_rows(&[[2]]).to_sparse();
        let c = ChainComplex::new(0, vec![1, 1], vec![two]).unwrap();
        assert_eq!(c.homology_at(0, Coeff::Z), FgAbGroup::cyclic(2));
        assert!(c.homology_at(0, Coeff::ZHalf).is_trivial());
        let three = IntMatrix::from_rows(&[[3]]).to_sparse();
        let c = ChainComplex::new(0, vec![1, 1], vec![three]).unwrap();
        assert_eq!(c.homology(Coeff::ModL(3)), [FgAbGroup::cyclic(3), FgAbGroup::cyclic(3)]);
    }

    #[test]
    fn rejects_non_complex() {
        let a = IntMatrix::from_rows(&[[1]]).to_sparse();
        let b = IntMatrix::from_rows(&[[1]]).to_sparse();
        assert_eq!(homology_of_pair(&a, &b, Coeff::Z), Err(Error::NotAComplex));
    }

    #[test]
    fn dyadic_diagonalization() {
        let m = IntMatrix::from_rows(&[[4, 6], [6, 12]]).to_sparse();
        // SNF over Z is diag(2, 12): odd parts 1 and 3.
        let (rk, mut d) = dyadic_diagonal(&m);
        d.sort();
        assert_eq!(rk, 2);
        assert_eq!(d, [BigInt::from(1), BigInt::from(3)]);
        let two = IntMatrix::from_rows(&[[6]]).to_sparse();
        let c = ChainComplex::new(0, vec![1, 1], vec![two]).unwrap();
        assert!(localization_law_holds(&c));
    }
}
