//! Subgroups of `Z^n` given by generating columns: kernels, images, solving,
//! and homology of complexes of presented abelian groups.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use super::abgroup::{FgAbGroup, Presented};
use super::intmat::{snf, IntMatrix};

/// Columns forming a basis of `{x : m x = 0}`.
pub fn kernel_basis(m: &IntMatrix) -> IntMatrix {
    let s = snf(m);
    let r = s.rank();
    let cols: Vec<Vec<BigInt>> = (r..m.cols()).map(|j| s.v.column(j)).collect();
    IntMatrix::from_columns(m.cols(), &cols)
}

/// Columns forming a basis of the column span of `m`.
pub fn image_basis(m: &IntMatrix) -> IntMatrix {
    let s = snf(m);
    let cols: Vec<Vec<BigInt>> = s
        .factors
        .iter()
        .enumerate()
        .map(|(i, d)| s.u_inv.column(i).into_iter().map(|x| x * d).collect())
        .collect();
    IntMatrix::from_columns(m.rows(), &cols)
}

/// Repeated solving of `m x = b` for one matrix `m`.
#[derive(Clone, Debug)]
pub struct SpanSolver {
    s: super::intmat::Snf,
    cols: usize,
}

impl SpanSolver {
    pub fn new(m: &IntMatrix) -> SpanSolver {
        SpanSolver { s: snf(m), cols: m.cols() }
    }
    pub fn solve(&self, b: &[BigInt]) -> Option<Vec<BigInt>> {
        let s = &self.s;
        let ub = s.u.mul_vec(b);
        let r = s.rank();
        if ub[r..].iter().any(|x| !x.is_zero()) {
            return None;
        }
        let mut y = vec![BigInt::zero(); self.cols];
        for i in 0..r {
            let (q, rem) = ub[i].div_rem(&s.factors[i]);
            if !rem.is_zero() {
                return None;
            }
            y[i] = q;
        }
        Some(s.v.mul_vec(&y))
    }
}

/// An integer solution of `m x = b`, if one exists.
pub fn solve(m: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    SpanSolver::new(m).solve(b)
}

pub fn in_span(m: &IntMatrix, b: &[BigInt]) -> bool {
    solve(m, b).is_some()
}

/// Whether the column spans of `a` and `b` coincide.
pub fn same_span(a: &IntMatrix, b: &IntMatrix) -> bool {
    (0..a.cols()).all(|j| in_span(b, &a.column(j))) && (0..b.cols()).all(|j| in_span(a, &b.column(j)))
}

/// `span(sub) / span(rel)` where `span(rel) ⊆ span(sub)`; `sub` must have
/// independent columns.
pub fn subquotient(sub: &IntMatrix, rel: &IntMatrix) -> Presented {
    let n = sub.cols();
    let solver = SpanSolver::new(sub);
    let coords: Vec<Vec<BigInt>> = (0..rel.cols())
        .map(|j| solver.solve(&rel.column(j)).expect("relations lie in the subgroup"))
        .collect();
    Presented::new(n, &IntMatrix::from_columns(n, &coords))
}

/// A finitely generated abelian group `Z^n / span(relations)`.
#[derive(Clone, Debug)]
pub struct Module {
    pub gens: usize,
    pub relations: IntMatrix,
}

impl Module {
    pub fn new(gens: usize, relations: IntMatrix) -> Module {
        assert_eq!(relations.rows(), gens);
        Module { gens, relations }
    }
    /// A free module with a diagonal presentation `Z/orders[i]` (0 for `Z`).
    pub fn cyclic_sum(orders: &[BigInt]) -> Module {
        let n = orders.len();
        let mut r = IntMatrix::zeros(n, n);
        for (i, d) in orders.iter().enumerate() {
            r.set(i, i, d.clone());
        }
        Module { gens: n, relations: r }
    }
    pub fn group(&self) -> FgAbGroup {
        Presented::new(self.gens, &self.relations).group().clone()
    }
}

/// Homology at `mid` of `prev --g--> mid --f--> next`, where `g` and `f` are
/// matrices on generators that respect the relations and compose to zero.
pub fn presented_homology(g: &IntMatrix, mid: &Module, f: &IntMatrix, next: &Module) -> FgAbGroup {
    let n = mid.gens;
    assert_eq!(f.cols(), n);
    assert_eq!(g.rows(), n);
    // ker f = projection of ker [f | R_next] to the first n coordinates.
    let big = f.hcat(&next.relations);
    let k = kernel_basis(&big);
    let proj: Vec<Vec<BigInt>> = (0..k.cols()).map(|j| k.column(j)[..n].to_vec()).collect();
    let kernel = image_basis(&IntMatrix::from_columns(n, &proj));
    let rel = g.hcat(&mid.relations);
    subquotient(&kernel, &rel).group().clone()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_image_solve() {
        let m = IntMatrix::from_rows(&[[2, 4, 6], [1, 2, 3]]);
        let k = kernel_basis(&m);
        assert_eq!(k.cols(), 2);
        assert!(m.mul(&k).is_zero());
        let im = image_basis(&m);
        assert_eq!(im.cols(), 1);
        assert!(same_span(&im, &m));
        assert!(solve(&m, &[BigInt::from(4), BigInt::from(2)]).is_some());
        assert!(solve(&m, &[BigInt::from(1), BigInt::from(1)]).is_none());
    }

    #[test]
    fn homology_of_presented_modules() {
        // Z/4 --x2--> Z/4 --x2--> Z/4: homology = ker(2)/im(2) = 0.
        let m = Module::cyclic_sum(&[BigInt::from(4)]);
        let two = IntMatrix::from_rows(&[[2]]);
        assert!(presented_homology(&two, &m, &two, &m).is_trivial());
        // 0 -> Z/4 --x2--> Z/4: kernel is {0, 2} ~ Z/2.
        let zero_in = IntMatrix::zeros(1, 0);
        assert_eq!(presented_homology(&zero_in, &m, &two, &m), FgAbGroup::cyclic(2));
    }
}
