//! Structure of a finite-dimensional endomorphism algebra: its Jacobson
//! radical and semisimple quotient, which decide the stabilizer type.

use alloc::vec;
use alloc::vec::Vec;

use super::hom::HomSpace;
use crate::exact::fqlin;
use crate::exact::{Field, Mat2};

/// Shape of a cell stabilizer, read from `A / rad A` of its endomorphism
/// algebra `A`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StabDescriptor {
    /// `A / rad A = Mat_2(F_q)`.
    FullGL2k,
    /// `A / rad A = F_q × F_q`; `h = dim rad A`.
    TorusUnipotent { h: usize },
    /// `A / rad A = F_{q²}`.
    NonSplitTorus { unipotent: usize },
    /// `A / rad A = F_q`: scalars times a unipotent group.
    CentralOnly { unipotent: usize },
}

impl StabDescriptor {
    /// Whether the stabilizer contains a split torus, i.e. the algebra has a
    /// nontrivial idempotent.
    pub fn is_parabolic(&self) -> bool {
        matches!(self, StabDescriptor::FullGL2k | StabDescriptor::TorusUnipotent { .. })
    }
    pub fn name(&self) -> &'static str {
        match self {
            StabDescriptor::FullGL2k => "FullGL2k",
            StabDescriptor::TorusUnipotent { .. } => "TorusUnipotent",
            StabDescriptor::NonSplitTorus { .. } => "NonSplitTorus",
            StabDescriptor::CentralOnly { .. } => "CentralOnly",
        }
    }
}

/// The algebra spanned by a [`HomSpace`] closed under multiplication.
pub struct EndAlgebra<'a> {
    k: &'a Field,
    space: &'a HomSpace,
}

impl<'a> EndAlgebra<'a> {
    pub fn new(k: &'a Field, space: &'a HomSpace) -> EndAlgebra<'a> {
        EndAlgebra { k, space }
    }
    pub fn dim(&self) -> usize {
        self.space.dim()
    }
    fn constant(&self, m: &Mat2) -> u32 {
        m.trace(self.k).as_constant().expect("trace of an endomorphism is constant")
    }
    fn coords(&self, m: &Mat2) -> Vec<u32> {
        self.space.express(m, self.k).expect("product stays in the algebra")
    }

    /// Basis of the Jacobson radical, in algebra coordinates.
    pub fn radical(&self) -> Vec<Vec<u32>> {
        let k = self.k;
        let b = &self.space.basis;
        let n = b.len();
        // W = radical of the trace form.
        let gram: Vec<Vec<u32>> =
            (0..n).map(|i| (0..n).map(|j| self.constant(&b[i].mul(&b[j], k))).collect()).collect();
        let w = fqlin::nullspace(k, &gram, n);
        if k.p() != 2 || w.is_empty() {
            return w;
        }
        // In characteristic 2 the determinant is additive and Frobenius
        // semilinear on W; the radical is its zero set.
        let dets: Vec<u32> = w
            .iter()
            .map(|c| self.space.element(c, k).det(k).as_constant().expect("determinant is constant"))
            .collect();
        let ker = fqlin::nullspace(k, &[dets], w.len());
        let sqrt = |x: u32| k.pow(x, k.q() as u64 / 2);
        ker.iter()
            .map(|e| {
                let mut v = vec![0u32; n];
                for (ej, wj) in e.iter().zip(&w) {
                    let r = sqrt(*ej);
                    for (vi, wi) in v.iter_mut().zip(wj) {
                        *vi = k.add(*vi, k.mul(r, *wi));
                    }
                }
                v
            })
            .collect()
    }

    pub fn descriptor(&self) -> StabDescriptor {
        let k = self.k;
        let n = self.dim();
        let j = self.radical();
        let h = j.len();
        match n - h {
            1 => StabDescriptor::CentralOnly { unipotent: h },
            4 => StabDescriptor::FullGL2k,
            2 => {
                let one = self.coords(&Mat2::identity());
                let mut span = j.clone();
                span.push(one.clone());
                let x = (0..n)
                    .map(|i| {
                        let mut e = vec![0u32; n];
                        e[i] = 1;
                        e
                    })
                    .find(|e| fqlin::express(k, &span, e).is_none())
                    .expect("quotient of dimension two");
                let xm = self.space.element(&x, k);
                let x2 = self.coords(&xm.mul(&xm, k));
                // x² = α x + β mod rad.
                let mut basis = vec![x.clone(), one];
                basis.extend(j.iter().cloned());
                let sol = fqlin::express(k, &basis, &x2).expect("quotient is spanned by 1 and x");
                let (alpha, beta) = (sol[0], sol[1]);
                let splits = k.elements().any(|r| k.sub(k.sub(k.mul(r, r), k.mul(alpha, r)), beta) == 0);
                if splits {
                    StabDescriptor::TorusUnipotent { h }
                } else {
                    StabDescriptor::NonSplitTorus { unipotent: h }
                }
            }
            d => panic!("semisimple quotient of dimension {d} inside 2x2 matrices"),
        }
    }

    /// The number of units, by enumeration (for small algebras).
    pub fn unit_count(&self) -> u64 {
        let k = self.k;
        let n = self.dim();
        let q = k.q() as u64;
        let total = q.pow(n as u32);
        let mut count = 0;
        let mut c = vec![0u32; n];
        for idx in 0..total {
            let mut x = idx;
            for ci in c.iter_mut() {
                *ci = (x % q) as u32;
                x /= q;
            }
            if !self.space.element(&c, k).det(k).is_zero() {
                count += 1;
            }
        }
        count
    }
}
