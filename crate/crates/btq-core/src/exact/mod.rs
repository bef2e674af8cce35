//! Exact arithmetic: finite fields, polynomials, rational functions,
//! valuations, integer matrices, Smith normal form and homology.

pub mod abgroup;
pub mod field;
pub mod fqlin;
pub mod homology;
pub mod intmat;
pub mod lattice;
pub mod mat2;
pub mod poly;
pub mod ratfunc;

pub use abgroup::{FgAbGroup, FiniteAbelian, Presented};
pub use field::{Field, FqElement};
pub use homology::{homology_of_pair, ChainComplex, Coeff};
pub use intmat::{IntMatrix, Snf, SparseMatrix};
pub use lattice::Module;
pub use mat2::Mat2;
pub use poly::Poly;
pub use ratfunc::{Expansion, Place, RatFunc, ResidueField};
