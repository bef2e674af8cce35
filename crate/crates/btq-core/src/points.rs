//! Complexes of points on the projective line over `F_q`: the plain complex
//! of distinct tuples, the alternating complex, its decomposable part and
//! the D/E resolution of it, and low-degree equivariant homology of the
//! quotient by the decomposable part.
//!
//! Points are numbered `0..q` by field element, then `q` for infinity.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::equivariant::group::Mat;
use crate::equivariant::{equivariant_homology, module_homology, FiniteGroup, GComplex, SignedPermModule};
use crate::error::{Error, Result};
use crate::exact::{ChainComplex, Coeff, FgAbGroup, Field, SparseMatrix};

/// Cap on the total number of generators of a points complex.
pub const POINTS_CAP: usize = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    Plain,
    Alternating,
}

impl Variant {
    pub fn parse(s: &str) -> Result<Variant> {
        match s {
            "plain" => Ok(Variant::Plain),
            "alternating" | "alt" => Ok(Variant::Alternating),
            _ => Err(Error::Invalid(alloc::format!("unknown variant {s:?}"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct PointsComplex {
    pub q: u32,
    pub max_degree: usize,
    pub variant: Variant,
    /// `bases[n]`: the generators of degree `n`, tuples in lexicographic order
    /// (sorted tuples for the alternating variant).
    pub bases: Vec<Vec<Vec<usize>>>,
    pub complex: ChainComplex,
}

/// Generator count of degree `n` without building anything.
pub fn generator_count(q: u32, n: usize, variant: Variant) -> Option<usize> {
    let m = q as usize + 1;
    if n + 1 > m {
        return Some(0);
    }
    let falling = (0..=n).try_fold(1usize, |acc, i| acc.checked_mul(m - i))?;
    Some(match variant {
        Variant::Plain => falling,
        Variant::Alternating => (0..=n).fold(falling, |acc, i| acc / (i + 1)),
    })
}

fn tuples(m: usize, len: usize, sorted: bool) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(len);
    fn rec(m: usize, len: usize, sorted: bool, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        let start = if sorted { cur.last().map_or(0, |&x| x + 1) } else { 0 };
        for x in start..m {
            if !sorted && cur.contains(&x) {
                continue;
            }
            cur.push(x);
            rec(m, len, sorted, cur, out);
            cur.pop();
        }
    }
    rec(m, len, sorted, &mut cur, &mut out);
    out
}

pub fn build_points_complex(q: u32, max_degree: usize, variant: Variant) -> Result<PointsComplex> {
    Field::new(q)?;
    if max_degree > q as usize {
        return Err(Error::Invalid(alloc::format!("degree {max_degree} needs more than q + 1 = {} points", q + 1)));
    }
    let total = (0..=max_degree)
        .map(|n| generator_count(q, n, variant))
        .try_fold(0usize, |acc, c| c.and_then(|c| acc.checked_add(c)));
    match total {
        Some(t) if t <= POINTS_CAP => {}
        _ => {
            return Err(Error::ResourceCap(alloc::format!(
                "points complex q={q} up to degree {max_degree} exceeds {POINTS_CAP} generators"
            )))
        }
    }
    let m = q as usize + 1;
    let sorted = variant == Variant::Alternating;
    let bases: Vec<Vec<Vec<usize>>> = (0..=max_degree).map(|n| tuples(m, n + 1, sorted)).collect();
    let index: Vec<BTreeMap<&Vec<usize>, usize>> =
        bases.iter().map(|b| b.iter().enumerate().map(|(i, t)| (t, i)).collect()).collect();
    let mut bds = Vec::new();
    for n in 1..=max_degree {
        let cols = bases[n]
            .iter()
            .map(|t| {
                let mut col: Vec<(usize, i64)> = (0..t.len())
                    .map(|i| {
                        let mut f = t.clone();
                        f.remove(i);
                        (index[n - 1][&f], if i % 2 == 0 { 1 } else { -1 })
                    })
                    .collect();
                col.sort_unstable();
                col
            })
            .collect();
        bds.push(SparseMatrix::from_columns(bases[n - 1].len(), cols));
    }
    let dims = bases.iter().map(Vec::len).collect();
    let complex = ChainComplex::new(0, dims, bds)?;
    Ok(PointsComplex { q, max_degree, variant, bases, complex })
}

impl PointsComplex {
    /// The quotient map to the alternating complex on distinct tuples
    /// (sorting with the permutation sign), as matrices per degree.
    pub fn to_alternating(&self) -> Result<(PointsComplex, Vec<SparseMatrix>)> {
        let alt = build_points_complex(self.q, self.max_degree, Variant::Alternating)?;
        let maps = (0..=self.max_degree)
            .map(|n| {
                let index: BTreeMap<&Vec<usize>, usize> =
                    alt.bases[n].iter().enumerate().map(|(i, t)| (t, i)).collect();
                let cols = self.bases[n]
                    .iter()
                    .map(|t| {
                        let (s, sign) = sort_sign(t);
                        vec![(index[&s], sign)]
                    })
                    .collect();
                SparseMatrix::from_columns(alt.bases[n].len(), cols)
            })
            .collect();
        Ok((alt, maps))
    }
}

fn sort_sign(t: &[usize]) -> (Vec<usize>, i64) {
    let mut v = t.to_vec();
    let mut sign = 1;
    for i in 0..v.len() {
        for j in 0..v.len() - 1 - i {
            if v[j] > v[j + 1] {
                v.swap(j, j + 1);
                sign = -sign;
            }
        }
    }
    (v, sign)
}

#[derive(Clone, Debug)]
pub struct AcyclicityReport {
    /// Degrees inside the contraction range with the augmented homology.
    pub checked: Vec<(usize, FgAbGroup)>,
    /// Degrees computed but outside the range where a point off the
    /// support of every cycle is guaranteed.
    pub outside: Vec<(usize, FgAbGroup, String)>,
    pub acyclic_in_range: bool,
}

/// Augmented homology in degrees `< max_degree`; the contraction argument
/// needs a free point and is only claimed for degrees `≤ q - 2`.
pub fn acyclicity_check(c: &PointsComplex) -> AcyclicityReport {
    let aug = c.complex.augmented();
    let limit = c.q as i64 - 2;
    let mut checked = Vec::new();
    let mut outside = Vec::new();
    for d in 0..c.max_degree {
        let h = aug.homology_at(d as i64, Coeff::Z);
        if (d as i64) <= limit {
            checked.push((d, h));
        } else {
            outside.push((d, h, "outside contraction range".into()));
        }
    }
    let acyclic_in_range = checked.iter().all(|(_, h)| h.is_trivial());
    AcyclicityReport { checked, outside, acyclic_in_range }
}

/// The decomposable subcomplex `F₀`, the complexes `D` and `E`, and the maps
/// `F₀ → D → E`, in degrees 1 and 0.
#[derive(Clone, Debug)]
pub struct DeResolution {
    pub q: u32,
    /// Points `x`, then sorted pairs `{x < y}`.
    pub f0: [Vec<Vec<usize>>; 2],
    /// Degree 1: `(y)_x`, stored as `(x, y)`, `y ≠ x`; degree 0: `1_x`.
    pub d1: Vec<(usize, usize)>,
    /// Unordered pairs, degree 1.
    pub e1: Vec<(usize, usize)>,
    /// `F₀ → D` in degrees 0 and 1; `D → E` in degree 1.
    pub alpha: [SparseMatrix; 2],
    pub beta1: SparseMatrix,
    pub f0_complex: ChainComplex,
    pub d_complex: ChainComplex,
}

pub fn de_resolution(q: u32) -> Result<DeResolution> {
    if q > 7 {
        return Err(Error::ResourceCap(alloc::format!("D/E resolution only for q ≤ 7, got {q}")));
    }
    let alt = build_points_complex(q, 1, Variant::Alternating)?;
    let m = q as usize + 1;
    let points = alt.bases[0].clone();
    let pairs = alt.bases[1].clone();
    let d1: Vec<(usize, usize)> = (0..m).flat_map(|x| (0..m).filter(move |&y| y != x).map(move |y| (x, y))).collect();
    let d_index: BTreeMap<(usize, usize), usize> = d1.iter().enumerate().map(|(i, p)| (*p, i)).collect();
    let e1: Vec<(usize, usize)> = pairs.iter().map(|p| (p[0], p[1])).collect();
    let e_index: BTreeMap<(usize, usize), usize> = e1.iter().enumerate().map(|(i, p)| (*p, i)).collect();
    // D: (y)_x ↦ -1_x.
    let d_bd = SparseMatrix::from_columns(m, d1.iter().map(|&(x, _)| vec![(x, -1)]).collect());
    let d_complex = ChainComplex::new(0, vec![m, d1.len()], vec![d_bd])?;
    let alpha0 = SparseMatrix::from_columns(m, (0..m).map(|x| vec![(x, 1)]).collect());
    let alpha1 = SparseMatrix::from_columns(
        d1.len(),
        pairs
            .iter()
            .map(|p| {
                let (x, y) = (p[0], p[1]);
                let mut col = vec![(d_index[&(x, y)], 1), (d_index[&(y, x)], -1)];
                col.sort_unstable();
                col
            })
            .collect(),
    );
    let beta1 = SparseMatrix::from_columns(
        e1.len(),
        d1.iter().map(|&(x, y)| vec![(e_index[&(x.min(y), x.max(y))], 1)]).collect(),
    );
    Ok(DeResolution {
        q,
        f0: [points, pairs],
        d1,
        e1,
        alpha: [alpha0, alpha1],
        beta1,
        f0_complex: alt.complex,
        d_complex,
    })
}

#[derive(Clone, Debug)]
pub struct DeReport {
    pub chain_maps: bool,
    pub composite_zero: bool,
    /// Homology of `F₀_n → D_n → E_n` at the three spots, per degree `n`,
    /// over `Z` (reported only), over `Z[1/2]` and mod 3.
    pub integral: Vec<[FgAbGroup; 3]>,
    pub exact_half: bool,
    pub exact_mod3: bool,
}

fn sparse_eq(a: &SparseMatrix, b: &SparseMatrix) -> bool {
    a.to_dense() == b.to_dense()
}

pub fn de_exactness(q: u32) -> Result<DeReport> {
    let r = de_resolution(q)?;
    let m = q as usize + 1;
    // Chain maps: α₀ ∂_F = ∂_D α₁, and E has nothing in degree 0.
    let lhs = r.alpha[0].mul(&r.f0_complex.boundary(1));
    let rhs = r.d_complex.boundary(1).mul(&r.alpha[1]);
    let chain_maps = sparse_eq(&lhs, &rhs);
    let composite_zero = r.beta1.mul(&r.alpha[1]).is_zero();
    let mut integral = Vec::new();
    let mut exact_half = true;
    let mut exact_mod3 = true;
    // Degree 0: F₀_0 → D_0 → 0; degree 1: F₀_1 → D_1 → E_1.
    let short: [(SparseMatrix, SparseMatrix, usize); 2] = [
        (r.alpha[0].clone(), SparseMatrix::zeros(0, m), 0),
        (r.alpha[1].clone(), r.beta1.clone(), r.e1.len()),
    ];
    for (a, b, e) in short {
        // As a chain complex in degrees 0 (E), 1 (D), 2 (F₀).
        let c = ChainComplex::new(0, vec![e, a.rows(), a.cols()], vec![b, a])?;
        let z = c.homology(Coeff::Z);
        exact_half &= c.homology(Coeff::ZHalf).iter().all(FgAbGroup::is_trivial);
        exact_mod3 &= c.homology(Coeff::ModL(3)).iter().all(FgAbGroup::is_trivial);
        integral.push([z[2].clone(), z[1].clone(), z[0].clone()]);
    }
    Ok(DeReport { chain_maps, composite_zero, integral, exact_half, exact_mod3 })
}

/// `z ↦ (a z + b) / (c z + d)` on point indices.
pub fn mobius(k: &Field, m: &Mat, z: usize) -> usize {
    let q = k.q() as usize;
    let [a, b, c, d] = *m;
    if z == q {
        return if c == 0 { q } else { k.div(a, c) as usize };
    }
    let z = z as u32;
    let num = k.add(k.mul(a, z), b);
    let den = k.add(k.mul(c, z), d);
    if den == 0 {
        q
    } else {
        k.div(num, den) as usize
    }
}

/// The alternating complex modulo its decomposable part, with the
/// `SL_2(F_q)` action, as a G-complex (zero in degrees 0 and 1).
pub fn alternating_quotient(q: u32, max_degree: usize) -> Result<GComplex> {
    let g = FiniteGroup::sl2(q)?;
    let alt = build_points_complex(q, max_degree.max(2).min(q as usize), Variant::Alternating)?;
    let (k, mats) = g.matrices.clone().expect("matrix group");
    let top = alt.max_degree;
    let mut dims = vec![0, 0];
    dims.extend((2..=top).map(|n| alt.bases[n].len()));
    let mut bds = vec![SparseMatrix::zeros(0, 0), SparseMatrix::zeros(0, dims[2])];
    for n in 3..=top {
        bds.push(alt.complex.boundary(n as i64));
    }
    let index: Vec<BTreeMap<&Vec<usize>, usize>> =
        alt.bases.iter().map(|b| b.iter().enumerate().map(|(i, t)| (t, i)).collect()).collect();
    let action = mats
        .iter()
        .map(|mat| {
            (0..=top)
                .map(|n| {
                    if n < 2 {
                        return Vec::new();
                    }
                    alt.bases[n]
                        .iter()
                        .map(|t| {
                            let img: Vec<usize> = t.iter().map(|&z| mobius(&k, mat, z)).collect();
                            let (s, sign) = sort_sign(&img);
                            (index[n][&s], sign)
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    GComplex::from_cells(g, dims, bds, action)
}

#[derive(Clone, Debug)]
pub struct Rp1Report {
    pub q: u32,
    /// `SL_2(F_q)` is transitive on points and on unordered pairs.
    pub transitive_points: bool,
    pub transitive_pairs: bool,
    /// `RP¹_n` for `n ≤ max_degree`.
    pub groups: Vec<FgAbGroup>,
}

fn orbit_count<T: Ord + Clone>(items: &[T], act: impl Fn(&Mat, &T) -> T, mats: &[Mat]) -> usize {
    let mut seen: BTreeMap<T, ()> = BTreeMap::new();
    let mut count = 0;
    for x in items {
        if seen.contains_key(x) {
            continue;
        }
        count += 1;
        for m in mats {
            seen.insert(act(m, x), ());
        }
    }
    count
}

/// `RP¹_n(F_q) = H_n(SL_2(F_q); C^alt / F₀)` for `n ≤ max_degree ≤ 1`,
/// computed from the hyperhomology total complex.
pub fn rp1_low_degree(q: u32, max_degree: usize) -> Result<Rp1Report> {
    if !(2..=5).contains(&q) {
        return Err(Error::Invalid(alloc::format!("q must be in 2..=5, got {q}")));
    }
    if max_degree > 1 {
        return Err(Error::Invalid("only degrees ≤ 1 are computed here; see rp1_exploratory".into()));
    }
    let x = alternating_quotient(q, max_degree + 2)?;
    let (k, mats) = x.group.matrices.clone().expect("matrix group");
    let m = q as usize + 1;
    let points: Vec<usize> = (0..m).collect();
    let pairs: Vec<(usize, usize)> = (0..m).flat_map(|a| (a + 1..m).map(move |b| (a, b))).collect();
    let transitive_points = orbit_count(&points, |g, &z| mobius(&k, g, z), &mats) == 1;
    let transitive_pairs = orbit_count(
        &pairs,
        |g, &(a, b)| {
            let (u, v) = (mobius(&k, g, a), mobius(&k, g, b));
            (u.min(v), u.max(v))
        },
        &mats,
    ) == 1;
    let groups = equivariant_homology(&x, max_degree, Coeff::Z)?;
    Ok(Rp1Report { q, transitive_points, transitive_pairs, groups })
}

/// `H_n(SL_2(F_q); C^alt / F₀)` in degree `n` (exploratory; no claim is
/// attached to the value).
pub fn rp1_exploratory(q: u32, n: usize) -> Result<FgAbGroup> {
    let x = alternating_quotient(q, (n + 1).min(q as usize))?;
    Ok(equivariant_homology(&x, n, Coeff::Z)?.pop().expect("degree n"))
}

/// `C_1` of the plain complex as a permutation module of `SL_2(F_q)`, and
/// `H_p` of it (for the comparison with the diagonal torus).
pub fn c1_module_homology(q: u32, p: usize) -> Result<FgAbGroup> {
    let g = FiniteGroup::sl2(q)?;
    let (k, mats) = g.matrices.clone().expect("matrix group");
    let plain = build_points_complex(q, 1, Variant::Plain)?;
    let index: BTreeMap<&Vec<usize>, usize> = plain.bases[1].iter().enumerate().map(|(i, t)| (t, i)).collect();
    let act = mats
        .iter()
        .map(|mat| {
            plain.bases[1]
                .iter()
                .map(|t| {
                    let img: Vec<usize> = t.iter().map(|&z| mobius(&k, mat, z)).collect();
                    (index[&img], 1)
                })
                .collect()
        })
        .collect();
    let m = SignedPermModule { rank: plain.bases[1].len(), act };
    module_homology(&g, &m, p, Coeff::Z)
}

/// Elements of `SL_2(F_q)` mapping the pair `{0, ∞}` to itself.
pub fn pair_stabilizer(q: u32) -> Result<Vec<Mat>> {
    let g = FiniteGroup::sl2(q)?;
    let (k, mats) = g.matrices.clone().expect("matrix group");
    let inf = q as usize;
    Ok(mats
        .into_iter()
        .filter(|m| {
            let (a, b) = (mobius(&k, m, 0), mobius(&k, m, inf));
            (a.min(b), a.max(b)) == (0, inf)
        })
        .collect())
}

/// The normalizer of the diagonal torus: `diag(a, a⁻¹)` and
/// `[[0, b], [-b⁻¹, 0]]`.
pub fn torus_normalizer_matrices(q: u32) -> Result<Vec<Mat>> {
    let k = Field::new(q)?;
    let mut out = Vec::new();
    for a in k.elements().filter(|&a| a != 0) {
        out.push([a, 0, 0, k.inv(a)]);
        out.push([0, a, k.neg(k.inv(a)), 0]);
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        assert_eq!(generator_count(3, 1, Variant::Plain), Some(12));
        assert_eq!(generator_count(3, 2, Variant::Alternating), Some(4));
        assert_eq!(generator_count(2, 3, Variant::Plain), Some(0));
    }
}
