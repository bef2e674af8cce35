//! Integer matrices, Smith normal form and sparse invariant factors.
//!
//! Dense reductions run on `i64` with checked arithmetic first and restart on
//! [`BigInt`] when an intermediate value overflows, so results never depend on
//! the fast path.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// A dense matrix of arbitrary-precision integers, row major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            if r > 0 {
                f.write_str("; ")?;
            }
            for c in 0..self.cols {
                if c > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
        }
        f.write_str("]")
    }
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> IntMatrix {
        IntMatrix { rows, cols, data: vec![<BigInt as Zero>::zero(); rows * cols] }
    }
    pub fn identity(n: usize) -> IntMatrix {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = <BigInt as One>::one();
        }
        m
    }
    /// Builds a matrix from row slices; all rows must have equal length.
    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> IntMatrix {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut m = IntMatrix::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.as_ref().len(), cols, "ragged rows");
            for (j, &x) in r.as_ref().iter().enumerate() {
                m.data[i * cols + j] = BigInt::from(x);
            }
        }
        m
    }
    /// Builds a matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_columns(rows: usize, cols: &[Vec<BigInt>]) -> IntMatrix {
        let mut m = IntMatrix::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, x) in c.iter().enumerate() {
                m.data[i * cols.len() + j] = x.clone();
            }
        }
        m
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.data[r * self.cols + c]
    }
    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        self.data[r * self.cols + c] = v;
    }
    pub fn column(&self, c: usize) -> Vec<BigInt> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }
    pub fn row(&self, r: usize) -> Vec<BigInt> {
        self.data[r * self.cols..(r + 1) * self.cols].to_vec()
    }
    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }
    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c).clone();
            }
        }
        t
    }
    pub fn mul(&self, o: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, o.rows, "dimension mismatch");
        let mut out = IntMatrix::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if Zero::is_zero(a) {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(l, j);
                    if !Zero::is_zero(b) {
                        out.data[i * o.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }
    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| (0..self.cols).fold(<BigInt as Zero>::zero(), |acc, j| acc + self.get(i, j) * &v[j]))
            .collect()
    }
    /// Horizontal concatenation.
    pub fn hcat(&self, o: &IntMatrix) -> IntMatrix {
        assert_eq!(self.rows, o.rows);
        let mut m = IntMatrix::zeros(self.rows, self.cols + o.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m.set(r, c, self.get(r, c).clone());
            }
            for c in 0..o.cols {
                m.set(r, self.cols + c, o.get(r, c).clone());
            }
        }
        m
    }
    /// Determinant by fraction-free elimination; panics on non-square input.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        if n == 0 {
            return <BigInt as One>::one();
        }
        let mut a: Vec<Vec<BigInt>> = (0..n).map(|r| self.row(r)).collect();
        let mut sign = <BigInt as One>::one();
        let mut prev = <BigInt as One>::one();
        for k in 0..n - 1 {
            if Zero::is_zero(&a[k][k]) {
                match (k + 1..n).find(|&i| !Zero::is_zero(&a[i][k])) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return <BigInt as Zero>::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                    a[i][j] = v;
                }
            }
            prev = a[k][k].clone();
        }
        sign * &a[n - 1][n - 1]
    }
    pub fn to_sparse(&self) -> SparseMatrix {
        let mut s = SparseMatrix::zeros(self.rows, self.cols);
        for c in 0..self.cols {
            for r in 0..self.rows {
                let v = self.get(r, c);
                if !Zero::is_zero(v) {
                    s.cols_data[c].push((r, v.to_i64().expect("entry fits in i64")));
                }
            }
        }
        s
    }
}

/// A column-major sparse integer matrix with `i64` entries. Column `j` lists
/// `(row, value)` pairs in increasing row order without zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols_data: Vec<Vec<(usize, i64)>>,
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> SparseMatrix {
        SparseMatrix { rows, cols_data: vec![Vec::new(); cols] }
    }
    /// Builds from per-column entry lists; duplicate rows are summed.
    pub fn from_columns(rows: usize, cols: Vec<Vec<(usize, i64)>>) -> SparseMatrix {
        let cols_data = cols.into_iter().map(normalize_sparse).collect::<Vec<_>>();
        debug_assert!(cols_data.iter().all(|c| c.iter().all(|&(r, _)| r < rows)));
        SparseMatrix { rows, cols_data }
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols_data.len()
    }
    pub fn column(&self, j: usize) -> &[(usize, i64)] {
        &self.cols_data[j]
    }
    pub fn columns(&self) -> &[Vec<(usize, i64)>] {
        &self.cols_data
    }
    pub fn nnz(&self) -> usize {
        self.cols_data.iter().map(Vec::len).sum()
    }
    pub fn is_zero(&self) -> bool {
        self.cols_data.iter().all(Vec::is_empty)
    }
    pub fn to_dense(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.rows, self.cols());
        for (c, col) in self.cols_data.iter().enumerate() {
            for &(r, v) in col {
                m.set(r, c, BigInt::from(v));
            }
        }
        m
    }
    pub fn transpose(&self) -> SparseMatrix {
        let mut t = vec![Vec::new(); self.rows];
        for (c, col) in self.cols_data.iter().enumerate() {
            for &(r, v) in col {
                t[r].push((c, v));
            }
        }
        SparseMatrix { rows: self.cols(), cols_data: t }
    }
    /// `self * o`, with entries computed in `i128` and checked to fit `i64`.
    pub fn mul(&self, o: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.cols(), o.rows, "dimension mismatch");
        let mut out = Vec::with_capacity(o.cols());
        for col in &o.cols_data {
            let mut acc: BTreeMap<usize, i128> = BTreeMap::new();
            for &(l, b) in col {
                for &(r, a) in &self.cols_data[l] {
                    *acc.entry(r).or_insert(0) += a as i128 * b as i128;
                }
            }
            out.push(
                acc.into_iter()
                    .filter(|&(_, v)| v != 0)
                    .map(|(r, v)| (r, i64::try_from(v).expect("product entry fits in i64")))
                    .collect(),
            );
        }
        SparseMatrix { rows: self.rows, cols_data: out }
    }
    /// Keeps the listed rows and columns, renumbered in the given order.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> SparseMatrix {
        let mut rmap = vec![usize::MAX; self.rows];
        for (i, &r) in rows.iter().enumerate() {
            rmap[r] = i;
        }
        let cols_data = cols
            .iter()
            .map(|&c| {
                let mut v: Vec<(usize, i64)> =
                    self.cols_data[c].iter().filter(|(r, _)| rmap[*r] != usize::MAX).map(|&(r, x)| (rmap[r], x)).collect();
                v.sort_unstable();
                v
            })
            .collect();
        SparseMatrix { rows: rows.len(), cols_data }
    }
}

fn normalize_sparse(mut v: Vec<(usize, i64)>) -> Vec<(usize, i64)> {
    v.sort_unstable_by_key(|e| e.0);
    let mut out: Vec<(usize, i64)> = Vec::with_capacity(v.len());
    for (r, x) in v {
        match out.last_mut() {
            Some(last) if last.0 == r => last.1 += x,
            _ => out.push((r, x)),
        }
    }
    out.retain(|e| e.1 != 0);
    out
}

/// Integer types the reductions can run on.
trait IntLike: Clone + PartialEq + fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn to_big(&self) -> BigInt;
    fn is_zero(&self) -> bool;
    fn is_neg(&self) -> bool;
    fn abs_lt(&self, o: &Self) -> bool;
    fn add(&self, o: &Self) -> Option<Self>;
    fn sub(&self, o: &Self) -> Option<Self>;
    fn mul(&self, o: &Self) -> Option<Self>;
    fn neg(&self) -> Option<Self>;
    /// Truncating division and remainder.
    fn div_rem(&self, o: &Self) -> (Self, Self);
    /// `(g, s, t)` with `g = s*self + t*o`, `g >= 0`.
    fn xgcd(&self, o: &Self) -> Option<(Self, Self, Self)>;
}

impl IntLike for i64 {
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn is_neg(&self) -> bool {
        *self < 0
    }
    fn abs_lt(&self, o: &Self) -> bool {
        self.unsigned_abs() < o.unsigned_abs()
    }
    fn add(&self, o: &Self) -> Option<Self> {
        self.checked_add(*o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        self.checked_sub(*o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        self.checked_mul(*o)
    }
    fn neg(&self) -> Option<Self> {
        self.checked_neg()
    }
    fn div_rem(&self, o: &Self) -> (Self, Self) {
        (self / o, self % o)
    }
    fn xgcd(&self, o: &Self) -> Option<(Self, Self, Self)> {
        let e = (*self as i128).extended_gcd(&(*o as i128));
        let (mut g, mut s, mut t) = (e.gcd, e.x, e.y);
        if g < 0 {
            g = -g;
            s = -s;
            t = -t;
        }
        Some((i64::try_from(g).ok()?, i64::try_from(s).ok()?, i64::try_from(t).ok()?))
    }
}

impl IntLike for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_neg(&self) -> bool {
        self.is_negative()
    }
    fn abs_lt(&self, o: &Self) -> bool {
        self.magnitude() < o.magnitude()
    }
    fn add(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn neg(&self) -> Option<Self> {
        Some(-self)
    }
    fn div_rem(&self, o: &Self) -> (Self, Self) {
        Integer::div_rem(self, o)
    }
    fn xgcd(&self, o: &Self) -> Option<(Self, Self, Self)> {
        let e = self.extended_gcd(o);
        let (mut g, mut s, mut t) = (e.gcd, e.x, e.y);
        if g.is_negative() {
            g = -g;
            s = -s;
            t = -t;
        }
        Some((g, s, t))
    }
}

struct Overflow;

type Mat<T> = Vec<Vec<T>>;

/// Smith normal form `U * M * V = D` of a matrix, with `U`, `V` unimodular.
#[derive(Clone, Debug)]
pub struct Snf {
    /// The nonzero diagonal entries `d_1 | d_2 | ...`, all positive.
    pub factors: Vec<BigInt>,
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
}

impl Snf {
    pub fn rank(&self) -> usize {
        self.factors.len()
    }
    /// The diagonal matrix `D` with the shape of the input.
    pub fn diagonal(&self) -> IntMatrix {
        let mut d = IntMatrix::zeros(self.u.rows(), self.v.rows());
        for (i, f) in self.factors.iter().enumerate() {
            d.set(i, i, f.clone());
        }
        d
    }
}

/// Smith normal form with unimodular transforms.
pub fn snf(m: &IntMatrix) -> Snf {
    if let Some(a) = to_small(m) {
        if let Ok(r) = snf_generic::<i64>(a, true) {
            return r;
        }
    }
    snf_generic::<BigInt>(to_mat(m), true).unwrap_or_else(|_| unreachable!())
}

/// Invariant factors only (no transforms).
pub fn snf_factors(m: &IntMatrix) -> Vec<BigInt> {
    if let Some(a) = to_small(m) {
        if let Ok(r) = snf_generic::<i64>(a, false) {
            return r.factors;
        }
    }
    snf_generic::<BigInt>(to_mat(m), false).unwrap_or_else(|_| unreachable!()).factors
}

fn to_small(m: &IntMatrix) -> Option<Mat<i64>> {
    (0..m.rows).map(|r| (0..m.cols).map(|c| m.get(r, c).to_i64()).collect()).collect()
}

fn to_mat(m: &IntMatrix) -> Mat<BigInt> {
    (0..m.rows).map(|r| m.row(r)).collect()
}

fn to_int(a: &Mat<impl IntLike>, rows: usize, cols: usize) -> IntMatrix {
    let mut m = IntMatrix::zeros(rows, cols);
    for (r, row) in a.iter().enumerate() {
        for (c, x) in row.iter().enumerate() {
            m.set(r, c, x.to_big());
        }
    }
    m
}

fn ident<T: IntLike>(n: usize) -> Mat<T> {
    (0..n).map(|i| (0..n).map(|j| if i == j { T::one() } else { T::zero() }).collect()).collect()
}

/// Elementary operations recorded on the transforms. `U` sees row operations,
/// `U^{-1}` the inverse column operations, and dually for `V`.
struct Transforms<T> {
    on: bool,
    u: Mat<T>,
    ui: Mat<T>,
    v: Mat<T>,
    vi: Mat<T>,
}

impl<T: IntLike> Transforms<T> {
    fn swap_rows(&mut self, i: usize, j: usize) {
        if self.on {
            self.u.swap(i, j);
            for row in &mut self.ui {
                row.swap(i, j);
            }
        }
    }
    fn swap_cols(&mut self, i: usize, j: usize) {
        if self.on {
            for row in &mut self.v {
                row.swap(i, j);
            }
            self.vi.swap(i, j);
        }
    }
    /// row_i += q * row_t
    fn row_axpy(&mut self, i: usize, t: usize, q: &T) -> Result<(), Overflow> {
        if self.on {
            axpy_row(&mut self.u, i, t, q)?;
            let nq = q.neg().ok_or(Overflow)?;
            axpy_col(&mut self.ui, t, i, &nq)?;
        }
        Ok(())
    }
    /// col_j += q * col_t
    fn col_axpy(&mut self, j: usize, t: usize, q: &T) -> Result<(), Overflow> {
        if self.on {
            axpy_col(&mut self.v, j, t, q)?;
            let nq = q.neg().ok_or(Overflow)?;
            axpy_row(&mut self.vi, t, j, &nq)?;
        }
        Ok(())
    }
    fn neg_row(&mut self, i: usize) -> Result<(), Overflow> {
        if self.on {
            for x in &mut self.u[i] {
                *x = x.neg().ok_or(Overflow)?;
            }
            for row in &mut self.ui {
                row[i] = row[i].neg().ok_or(Overflow)?;
            }
        }
        Ok(())
    }
}

fn axpy_row<T: IntLike>(a: &mut Mat<T>, i: usize, t: usize, q: &T) -> Result<(), Overflow> {
    if q.is_zero() {
        return Ok(());
    }
    for c in 0..a[i].len() {
        if !a[t][c].is_zero() {
            let p = a[t][c].mul(q).ok_or(Overflow)?;
            a[i][c] = a[i][c].add(&p).ok_or(Overflow)?;
        }
    }
    Ok(())
}

fn axpy_col<T: IntLike>(a: &mut Mat<T>, j: usize, t: usize, q: &T) -> Result<(), Overflow> {
    if q.is_zero() {
        return Ok(());
    }
    for row in a.iter_mut() {
        if !row[t].is_zero() {
            let p = row[t].mul(q).ok_or(Overflow)?;
            row[j] = row[j].add(&p).ok_or(Overflow)?;
        }
    }
    Ok(())
}

fn snf_generic<T: IntLike>(mut a: Mat<T>, with_transforms: bool) -> Result<Snf, Overflow> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut tr = Transforms {
        on: with_transforms,
        u: if with_transforms { ident(rows) } else { Vec::new() },
        ui: if with_transforms { ident(rows) } else { Vec::new() },
        v: if with_transforms { ident(cols) } else { Vec::new() },
        vi: if with_transforms { ident(cols) } else { Vec::new() },
    };
    let mut t = 0;
    while t < rows.min(cols) {
        // Global minimal-magnitude pivot in the trailing block.
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !a[i][j].is_zero() && best.map_or(true, |(bi, bj)| a[i][j].abs_lt(&a[bi][bj])) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        move_pivot(&mut a, &mut tr, t, pi, pj);
        loop {
            let mut clean = true;
            for i in t + 1..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let (q, _) = a[i][t].div_rem(&a[t][t]);
                let nq = q.neg().ok_or(Overflow)?;
                axpy_row(&mut a, i, t, &nq)?;
                tr.row_axpy(i, t, &nq)?;
                if !a[i][t].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let (q, _) = a[t][j].div_rem(&a[t][t]);
                let nq = q.neg().ok_or(Overflow)?;
                axpy_col(&mut a, j, t, &nq)?;
                tr.col_axpy(j, t, &nq)?;
                if !a[t][j].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                // Bring the smallest leftover in row/column t to the pivot.
                let mut best = (t, t);
                for i in t + 1..rows {
                    if !a[i][t].is_zero() && a[i][t].abs_lt(&a[best.0][best.1]) {
                        best = (i, t);
                    }
                }
                for j in t + 1..cols {
                    if !a[t][j].is_zero() && a[t][j].abs_lt(&a[best.0][best.1]) {
                        best = (t, j);
                    }
                }
                move_pivot(&mut a, &mut tr, t, best.0, best.1);
                continue;
            }
            // Divisibility of the trailing block by the pivot.
            let bad = (t + 1..rows).find(|&i| {
                (t + 1..cols).any(|j| !a[i][j].is_zero() && !a[i][j].div_rem(&a[t][t]).1.is_zero())
            });
            match bad {
                Some(i) => {
                    let one = T::one();
                    axpy_row(&mut a, t, i, &one)?;
                    tr.row_axpy(t, i, &one)?;
                }
                None => break,
            }
        }
        if a[t][t].is_neg() {
            for x in &mut a[t] {
                *x = x.neg().ok_or(Overflow)?;
            }
            tr.neg_row(t)?;
        }
        t += 1;
    }
    let factors = (0..t).map(|i| a[i][i].to_big()).collect();
    let (u, ui, v, vi) = if with_transforms {
        (to_int(&tr.u, rows, rows), to_int(&tr.ui, rows, rows), to_int(&tr.v, cols, cols), to_int(&tr.vi, cols, cols))
    } else {
        (IntMatrix::zeros(rows, rows), IntMatrix::zeros(rows, rows), IntMatrix::zeros(cols, cols), IntMatrix::zeros(cols, cols))
    };
    Ok(Snf { factors, u, u_inv: ui, v, v_inv: vi })
}

fn move_pivot<T: IntLike>(a: &mut Mat<T>, tr: &mut Transforms<T>, t: usize, i: usize, j: usize) {
    if i != t {
        a.swap(i, t);
        tr.swap_rows(i, t);
    }
    if j != t {
        for row in a.iter_mut() {
            row.swap(j, t);
        }
        tr.swap_cols(j, t);
    }
}

/// Invariant factors of a sparse matrix: unit pivots are eliminated
/// sparsely, the remainder goes through a row-style Hermite reduction and a
/// dense Smith normal form. Gives the same answer as [`snf_factors`].
pub fn invariant_factors(m: &SparseMatrix) -> Vec<BigInt> {
    let (units, rest) = eliminate_unit_pivots(m.columns(), m.rows());
    let mut out = vec![<BigInt as One>::one(); units];
    if rest.is_empty() {
        return out;
    }
    let basis = match hermite_rows::<i64>(&rest) {
        Ok(b) => to_int(&b, b.len(), b.first().map_or(0, Vec::len)),
        Err(_) => {
            let big: Vec<Vec<(usize, BigInt)>> =
                rest.iter().map(|v| v.iter().map(|&(c, x)| (c, BigInt::from(x))).collect()).collect();
            let b = hermite_rows::<BigInt>(&big).unwrap_or_else(|_| unreachable!());
            to_int(&b, b.len(), b.first().map_or(0, Vec::len))
        }
    };
    out.extend(snf_factors(&basis));
    out
}

/// Rank of a sparse integer matrix over the integers.
pub fn rank(m: &SparseMatrix) -> usize {
    invariant_factors(m).len()
}

/// Eliminates pivots of absolute value one, treating each column as a vector.
/// Returns the number of eliminated pivots and the remaining nonzero vectors
/// compacted onto the surviving coordinates.
fn eliminate_unit_pivots(cols: &[Vec<(usize, i64)>], nrows: usize) -> (usize, Vec<Vec<(usize, i64)>>) {
    let mut vecs: Vec<Vec<(usize, i64)>> = cols.iter().filter(|c| !c.is_empty()).cloned().collect();
    let mut alive = vec![true; vecs.len()];
    let mut occ: Vec<Vec<usize>> = vec![Vec::new(); nrows];
    for (i, v) in vecs.iter().enumerate() {
        for &(r, _) in v {
            occ[r].push(i);
        }
    }
    let mut units = 0;
    let mut overflowed = false;
    // Process short vectors first; a vector may be revisited after updates.
    let mut order: Vec<usize> = (0..vecs.len()).collect();
    order.sort_by_key(|&i| vecs[i].len());
    let mut queue: alloc::collections::VecDeque<usize> = order.into_iter().collect();
    let mut queued = vec![true; vecs.len()];
    while let Some(i) = queue.pop_front() {
        queued[i] = false;
        if !alive[i] || overflowed {
            continue;
        }
        // Choose the unit entry whose coordinate occurs least often.
        let mut pick: Option<(usize, i64)> = None;
        for &(r, x) in &vecs[i] {
            if x == 1 || x == -1 {
                if pick.map_or(true, |(pr, _)| occ[r].len() < occ[pr].len()) {
                    pick = Some((r, x));
                }
            }
        }
        let Some((c, s)) = pick else { continue };
        let pivot = core::mem::take(&mut vecs[i]);
        alive[i] = false;
        units += 1;
        let users = core::mem::take(&mut occ[c]);
        for w in users {
            if w == i || !alive[w] {
                continue;
            }
            let Some(&(_, wc)) = vecs[w].iter().find(|e| e.0 == c) else { continue };
            // w -= (wc * s) * pivot, using s = 1/s for units.
            let f = wc * s;
            match sparse_axpy(&vecs[w], &pivot, f) {
                Some(nv) => {
                    for &(r, _) in &nv {
                        if r != c && !vecs[w].iter().any(|e| e.0 == r) {
                            occ[r].push(w);
                        }
                    }
                    vecs[w] = nv;
                    if vecs[w].is_empty() {
                        alive[w] = false;
                    } else if !queued[w] {
                        queued[w] = true;
                        queue.push_back(w);
                    }
                }
                None => {
                    overflowed = true;
                    break;
                }
            }
        }
        if overflowed {
            break;
        }
    }
    if overflowed {
        // Fall back to the plain path on the original data.
        let rest: Vec<Vec<(usize, i64)>> = cols.iter().filter(|c| !c.is_empty()).cloned().collect();
        return (0, rest);
    }
    let rest: Vec<Vec<(usize, i64)>> =
        vecs.into_iter().zip(alive).filter(|(v, a)| *a && !v.is_empty()).map(|(v, _)| v).collect();
    // Compact coordinates.
    let mut used: Vec<usize> = rest.iter().flat_map(|v| v.iter().map(|e| e.0)).collect();
    used.sort_unstable();
    used.dedup();
    let rest = rest
        .into_iter()
        .map(|v| v.into_iter().map(|(r, x)| (used.binary_search(&r).unwrap(), x)).collect())
        .collect();
    (units, rest)
}

/// `w - f * p` for sorted sparse vectors; `None` on overflow.
fn sparse_axpy(w: &[(usize, i64)], p: &[(usize, i64)], f: i64) -> Option<Vec<(usize, i64)>> {
    let mut out = Vec::with_capacity(w.len() + p.len());
    let (mut a, mut b) = (0, 0);
    while a < w.len() || b < p.len() {
        let take_w = b >= p.len() || (a < w.len() && w[a].0 < p[b].0);
        let take_p = a >= w.len() || (b < p.len() && p[b].0 < w[a].0);
        if take_w {
            out.push(w[a]);
            a += 1;
        } else if take_p {
            out.push((p[b].0, p[b].1.checked_mul(f)?.checked_neg()?));
            b += 1;
        } else {
            let v = w[a].1.checked_sub(p[b].1.checked_mul(f)?)?;
            if v != 0 {
                out.push((w[a].0, v));
            }
            a += 1;
            b += 1;
        }
    }
    Some(out)
}

/// Hermite-style row reduction of a set of sparse vectors (all coordinates
/// `< n`, with `n` inferred). Returns a basis of their integer span as dense
/// rows in echelon form.
fn hermite_rows<T: IntLike>(vecs: &[Vec<(usize, T)>]) -> Result<Mat<T>, Overflow> {
    let n = vecs.iter().flat_map(|v| v.iter().map(|e| e.0 + 1)).max().unwrap_or(0);
    let mut piv: BTreeMap<usize, Vec<T>> = BTreeMap::new();
    for v in vecs {
        let mut row = vec![T::zero(); n];
        for (c, x) in v {
            row[*c] = x.clone();
        }
        insert_hermite(&mut piv, row)?;
    }
    Ok(piv.into_values().collect())
}

fn insert_hermite<T: IntLike>(piv: &mut BTreeMap<usize, Vec<T>>, mut row: Vec<T>) -> Result<(), Overflow> {
    loop {
        let Some(c) = row.iter().position(|x| !x.is_zero()) else { return Ok(()) };
        let Some(b) = piv.get_mut(&c) else {
            if row[c].is_neg() {
                for x in &mut row {
                    *x = x.neg().ok_or(Overflow)?;
                }
            }
            piv.insert(c, row);
            return Ok(());
        };
        let (q, r) = row[c].div_rem(&b[c]);
        if r.is_zero() {
            let nq = q.neg().ok_or(Overflow)?;
            for j in c..row.len() {
                if !b[j].is_zero() {
                    row[j] = row[j].add(&b[j].mul(&nq).ok_or(Overflow)?).ok_or(Overflow)?;
                }
            }
            continue;
        }
        // Unimodular 2x2 combination putting gcd on the pivot.
        let (g, s, t) = row[c].xgcd(&b[c]).ok_or(Overflow)?;
        let (ra, _) = row[c].div_rem(&g);
        let (rb, _) = b[c].div_rem(&g);
        let mut nb = vec![T::zero(); row.len()];
        let mut nr = vec![T::zero(); row.len()];
        for j in c..row.len() {
            nb[j] = s.mul(&row[j]).ok_or(Overflow)?.add(&t.mul(&b[j]).ok_or(Overflow)?).ok_or(Overflow)?;
            nr[j] = rb.mul(&row[j]).ok_or(Overflow)?.sub(&ra.mul(&b[j]).ok_or(Overflow)?).ok_or(Overflow)?;
        }
        *b = nb;
        row = nr;
    }
}

/// Rank modulo a prime `p` by sparse elimination.
pub fn rank_mod_p(m: &SparseMatrix, p: u64) -> usize {
    let mut piv: BTreeMap<usize, Vec<(usize, u64)>> = BTreeMap::new();
    for col in m.columns() {
        let mut v: Vec<(usize, u64)> =
            col.iter().map(|&(r, x)| (r, x.rem_euclid(p as i64) as u64)).filter(|e| e.1 != 0).collect();
        loop {
            let Some(&(c, x)) = v.first() else { break };
            match piv.get(&c) {
                None => {
                    let inv = pow_mod(x, p - 2, p);
                    for e in &mut v {
                        e.1 = e.1 * inv % p;
                    }
                    piv.insert(c, v);
                    break;
                }
                Some(b) => v = sub_scaled_mod(&v, b, x, p),
            }
        }
    }
    piv.len()
}

fn sub_scaled_mod(w: &[(usize, u64)], b: &[(usize, u64)], f: u64, p: u64) -> Vec<(usize, u64)> {
    let mut out = Vec::with_capacity(w.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < w.len() || j < b.len() {
        if j >= b.len() || (i < w.len() && w[i].0 < b[j].0) {
            out.push(w[i]);
            i += 1;
        } else if i >= w.len() || b[j].0 < w[i].0 {
            out.push((b[j].0, (p - b[j].1 * f % p) % p));
            j += 1;
        } else {
            let v = (w[i].1 + p - b[j].1 * f % p) % p;
            if v != 0 {
                out.push((w[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out.retain(|e| e.1 != 0);
    out
}

pub(crate) fn pow_mod(a: u64, mut e: u64, p: u64) -> u64 {
    let (mut b, mut acc) = (a % p, 1u64);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn small_examples() {
        assert_eq!(snf_factors(&IntMatrix::identity(2)), big(&[1, 1]));
        assert_eq!(snf_factors(&IntMatrix::from_rows(&[[2, 4], [6, 8]])), big(&[2, 4]));
        assert!(snf_factors(&IntMatrix::zeros(3, 3)).is_empty());
        assert!(snf_factors(&IntMatrix::zeros(0, 4)).is_empty());
    }

    #[test]
    fn transforms_reconstruct() {
        let m = IntMatrix::from_rows(&[[2, 4, 4], [-6, 6, 12], [10, -4, -16]]);
        let s = snf(&m);
        assert_eq!(s.factors, big(&[2, 6, 12]));
        assert_eq!(s.u.mul(&m).mul(&s.v), s.diagonal());
        assert_eq!(s.u.mul(&s.u_inv), IntMatrix::identity(3));
        assert_eq!(s.v.mul(&s.v_inv), IntMatrix::identity(3));
    }

    #[test]
    fn sparse_matches_dense() {
        let m = IntMatrix::from_rows(&[[1, 2, 0, 3], [0, 4, 6, 0], [2, 0, 6, 6], [0, 0, 0, 5]]);
        assert_eq!(invariant_factors(&m.to_sparse()), snf_factors(&m));
    }

    #[test]
    fn overflow_falls_back() {
        let b = i64::MAX / 3;
        let m = IntMatrix::from_rows(&[[b, b - 1], [b - 7, b + 5]]);
        let f = snf_factors(&m);
        let det = m.det();
        assert_eq!(f.iter().product::<BigInt>(), det.abs());
    }

    #[test]
    fn rank_mod_prime() {
        let m = IntMatrix::from_rows(&[[3, 0], [0, 1]]).to_sparse();
        assert_eq!(rank_mod_p(&m, 3), 1);
        assert_eq!(rank_mod_p(&m, 5), 2);
    }
}
