//! Riemann–Roch spaces on `P¹` supported at the punctures, spaces of
//! homomorphisms between lattice tuples, and the finite-dimensional
//! endomorphism algebras they form.

use alloc::vec;
use alloc::vec::Vec;

use crate::exact::fqlin;
use crate::exact::{Field, Mat2, Place, Poly, RatFunc};

/// `L(Σ n_i P_i)` over the puncture places: functions regular away from the
/// punctures with `v_{P_i} >= -n_i`.
#[derive(Clone, Debug)]
pub struct RrSpace {
    /// Multiplier `num / den` with `t^j · num / den` the basis.
    num: Poly,
    den: Poly,
    /// Dimension (0 if the divisor has negative degree).
    dim: usize,
}

impl RrSpace {
    pub fn new(k: &Field, places: &[Place], n: &[i64]) -> RrSpace {
        let mut num = Poly::one();
        let mut den = Poly::one();
        let mut bound = 0i64;
        for (p, &ni) in places.iter().zip(n) {
            match p {
                Place::Infinity => bound += ni,
                Place::Finite(pi) => {
                    bound += ni * pi.degree();
                    if ni > 0 {
                        den = den.mul(&pi.pow(ni as u64, k), k);
                    } else if ni < 0 {
                        num = num.mul(&pi.pow((-ni) as u64, k), k);
                    }
                }
            }
        }
        RrSpace { num, den, dim: if bound < 0 { 0 } else { bound as usize + 1 } }
    }
    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn basis_element(&self, j: usize, k: &Field) -> RatFunc {
        RatFunc::new(self.num.shift(j), self.den.clone(), k).unwrap()
    }
    /// Coordinates of `f ∈ L(D)`, or `None` if `f` is not in the space.
    pub fn coordinates(&self, f: &RatFunc, k: &Field) -> Option<Vec<u32>> {
        if f.is_zero() {
            return Some(vec![0; self.dim]);
        }
        // h = f · den / num must be a polynomial of degree < dim.
        let h = f.mul(&RatFunc::new(self.den.clone(), self.num.clone(), k).unwrap(), k);
        if !h.den().is_one() || h.num().degree() >= self.dim as i64 {
            return None;
        }
        let mut c = h.num().coeffs().to_vec();
        c.resize(self.dim, 0);
        Some(c)
    }
}

/// `v((dst)⁻¹ γ src) >= e` at puncture `place`.
#[derive(Clone, Debug)]
pub struct Condition {
    pub place: usize,
    pub src: Mat2,
    pub dst: Mat2,
    pub e: i64,
}

/// A subspace of `Mat_2(A)` cut out by lattice conditions, with a fixed
/// candidate space (entrywise `L(D)`) used for coordinates.
#[derive(Clone, Debug)]
pub struct HomSpace {
    pub rr: RrSpace,
    /// Basis vectors in candidate coordinates: entry `(r, c)` occupies the
    /// block `(2r + c) * rr.dim ..`.
    pub coords: Vec<Vec<u32>>,
    pub basis: Vec<Mat2>,
}

fn min_val(m: &Mat2, p: &Place, k: &Field) -> i64 {
    m.min_valuation(p, k).expect("nonzero matrix")
}

/// Solves the conditions. Every puncture must carry at least one condition.
pub fn hom_space(k: &Field, places: &[Place], conds: &[Condition]) -> HomSpace {
    let s = places.len();
    let mut bound = vec![i64::MIN; s];
    let prepared: Vec<(usize, Mat2, Mat2, i64)> = conds
        .iter()
        .map(|c| {
            let p = &places[c.place];
            let dinv = c.dst.inv(k).expect("invertible lattice matrix");
            let sinv = c.src.inv(k).expect("invertible lattice matrix");
            // γ = dst · X · src⁻¹ with v(X) >= e bounds every entry of γ.
            let b = c.e + min_val(&c.dst, p, k) + min_val(&sinv, p, k);
            bound[c.place] = bound[c.place].max(b);
            (c.place, dinv, c.src.clone(), c.e)
        })
        .collect();
    assert!(bound.iter().all(|&b| b > i64::MIN), "every puncture needs a condition");
    let n: Vec<i64> = bound.iter().map(|b| -b).collect();
    let rr = RrSpace::new(k, places, &n);
    let dim = rr.dim();
    let cand = 4 * dim;
    let funcs: Vec<RatFunc> = (0..dim).map(|j| rr.basis_element(j, k)).collect();
    let mut rows: Vec<Vec<u32>> = Vec::new();
    for (place, dinv, src, e) in &prepared {
        let p = &places[*place];
        let d = p.degree();
        let lo = bound[*place] + min_val(dinv, p, k) + min_val(src, p, k);
        if lo >= *e {
            continue;
        }
        let span = (*e - lo) as usize;
        let dcol = |r: usize| if r == 0 { [&dinv.a, &dinv.c] } else { [&dinv.b, &dinv.d] };
        let srow = |c: usize| if c == 0 { [&src.a, &src.b] } else { [&src.c, &src.d] };
        // rows indexed by (entry jk, digit index, coefficient)
        let base = rows.len();
        rows.resize(base + 4 * span * d, vec![0; cand]);
        for r in 0..2 {
            for c in 0..2 {
                let col = dcol(r);
                let row = srow(c);
                for (j, f) in funcs.iter().enumerate() {
                    let ci = (2 * r + c) * dim + j;
                    for (x, dx) in col.iter().enumerate() {
                        for (y, sy) in row.iter().enumerate() {
                            if dx.is_zero() || sy.is_zero() {
                                continue;
                            }
                            let val = f.mul(dx, k).mul(sy, k);
                            if val.is_zero() {
                                continue;
                            }
                            let ex = val.padic_expand(p, *e, k);
                            for idx in 0..span {
                                let digit = ex.digit(lo + idx as i64);
                                for (t, &co) in digit.coeffs().iter().enumerate() {
                                    let ri = base + ((2 * x + y) * span + idx) * d + t;
                                    rows[ri][ci] = k.add(rows[ri][ci], co);
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    let coords = if rows.is_empty() {
        (0..cand).map(|i| {
            let mut v = vec![0; cand];
            v[i] = 1;
            v
        }).collect()
    } else {
        fqlin::nullspace(k, &rows, cand)
    };
    let basis = coords.iter().map(|v| assemble(k, &funcs, dim, v)).collect();
    HomSpace { rr, coords, basis }
}

fn assemble(k: &Field, funcs: &[RatFunc], dim: usize, v: &[u32]) -> Mat2 {
    let mut e = [RatFunc::zero(), RatFunc::zero(), RatFunc::zero(), RatFunc::zero()];
    for (b, slot) in e.iter_mut().enumerate() {
        for j in 0..dim {
            let c = v[b * dim + j];
            if c != 0 {
                *slot = slot.add(&funcs[j].scale(c, k), k);
            }
        }
    }
    let [a, b, c, d] = e;
    Mat2::new(a, b, c, d)
}

impl HomSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
    /// Candidate coordinates of a matrix, if its entries lie in the space.
    pub fn candidate_coordinates(&self, m: &Mat2, k: &Field) -> Option<Vec<u32>> {
        let mut out = Vec::with_capacity(4 * self.rr.dim());
        for x in m.entries() {
            out.extend(self.rr.coordinates(x, k)?);
        }
        Some(out)
    }
    /// Coordinates in [`HomSpace::basis`] of an element of the space.
    pub fn express(&self, m: &Mat2, k: &Field) -> Option<Vec<u32>> {
        let c = self.candidate_coordinates(m, k)?;
        fqlin::express(k, &self.coords, &c)
    }
    /// The element with the given basis coordinates.
    pub fn element(&self, coeffs: &[u32], k: &Field) -> Mat2 {
        let mut acc = Mat2::new(RatFunc::zero(), RatFunc::zero(), RatFunc::zero(), RatFunc::zero());
        for (c, b) in coeffs.iter().zip(&self.basis) {
            if *c != 0 {
                acc = acc.add(&b.scale(&RatFunc::constant(*c), k), k);
            }
        }
        acc
    }
}
