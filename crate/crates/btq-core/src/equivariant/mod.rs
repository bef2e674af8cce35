//! Equivariant homology of finite cell complexes with a finite group
//! action: the isotropy spectral sequence (E¹ with d¹, then E²), a direct
//! hyperhomology computation to compare against, and the long exact
//! sequence of a pair of orbit chain complexes.

pub mod bar;
pub mod group;

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::Zero;

pub use bar::{group_homology, module_homology, SignedPermModule, Subgroup};
pub use group::FiniteGroup;

use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::exact::lattice::{presented_homology, Module, SpanSolver};
use crate::exact::{fqlin, ChainComplex, Coeff, FgAbGroup, Field, IntMatrix, SparseMatrix};
use bar::{padded_cols, tuple_index, tuple_of, BarHomology, BAR_CAP};

/// Cell `c` of dimension `p` goes to `sign · image`.
pub type SignedCell = (usize, i64);

/// A finite cell complex with a cellular action of a finite group.
#[derive(Clone, Debug)]
pub struct GComplex {
    pub group: FiniteGroup,
    pub dims: Vec<usize>,
    /// `boundaries[p - 1]`: `C_p → C_{p-1}`.
    pub boundaries: Vec<SparseMatrix>,
    /// `action[g][p][c]`.
    action: Vec<Vec<Vec<SignedCell>>>,
    /// The input was barycentrically subdivided to make stabilizers fix
    /// their cells pointwise.
    pub subdivided: bool,
}

fn sort_with_sign(mut v: Vec<usize>) -> (Vec<usize>, i64) {
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

impl GComplex {
    /// A simplicial complex with the group acting by vertex permutations
    /// (`perm(g)[v]`). Subdivides once if some stabilizer moves a vertex of
    /// the simplex it fixes.
    pub fn from_simplicial(
        group: FiniteGroup,
        sc: &SimplicialComplex,
        perm: impl Fn(usize) -> Vec<usize>,
    ) -> Result<GComplex> {
        let perms: Vec<Vec<usize>> = (0..group.order()).map(&perm).collect();
        GComplex::from_vertex_perms(group, sc, perms)
    }

    fn from_vertex_perms(group: FiniteGroup, sc: &SimplicialComplex, perms: Vec<Vec<usize>>) -> Result<GComplex> {
        let n = group.order();
        for (g, p) in perms.iter().enumerate() {
            if p.len() != sc.vertices {
                return Err(Error::Invalid(alloc::format!("permutation of element {g} has wrong length")));
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = group.mul(a, b);
                if (0..sc.vertices).any(|v| perms[ab][v] != perms[a][perms[b][v]]) {
                    return Err(Error::Invalid(alloc::format!("vertex action is not a homomorphism at ({a},{b})")));
                }
            }
        }
        let index: Vec<BTreeMap<&Vec<usize>, usize>> =
            sc.simplices.iter().map(|l| l.iter().enumerate().map(|(i, s)| (s, i)).collect()).collect();
        let mut pointwise = true;
        for (d, l) in sc.simplices.iter().enumerate() {
            for s in l {
                for p in &perms {
                    let mut img: Vec<usize> = s.iter().map(|&v| p[v]).collect();
                    img.sort_unstable();
                    if !index[d].contains_key(&img) {
                        return Err(Error::Invalid("vertex action does not preserve simplices".into()));
                    }
                    if img == *s && s.iter().any(|&v| p[v] != v) {
                        pointwise = false;
                    }
                }
            }
        }
        if !pointwise {
            let (sd, names) = sc.barycentric();
            let lookup: BTreeMap<(usize, usize), usize> = names.iter().enumerate().map(|(i, x)| (*x, i)).collect();
            let new_perms: Vec<Vec<usize>> = perms
                .iter()
                .map(|p| {
                    names
                        .iter()
                        .map(|&(d, i)| {
                            let mut img: Vec<usize> = sc.simplices[d][i].iter().map(|&v| p[v]).collect();
                            img.sort_unstable();
                            lookup[&(d, index[d][&img])]
                        })
                        .collect()
                })
                .collect();
            let mut out = GComplex::from_vertex_perms(group, &sd, new_perms)?;
            out.subdivided = true;
            return Ok(out);
        }
        let action = perms
            .iter()
            .map(|p| {
                sc.simplices
                    .iter()
                    .enumerate()
                    .map(|(d, l)| {
                        l.iter()
                            .map(|s| {
                                let (img, sign) = sort_with_sign(s.iter().map(|&v| p[v]).collect());
                                (index[d][&img], sign)
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let cc = sc.chain_complex();
        let dims = cc.dims().to_vec();
        let boundaries = (1..dims.len() as i64).map(|p| cc.boundary(p)).collect();
        Ok(GComplex { group, dims, boundaries, action, subdivided: false })
    }

    /// A general cell complex with a signed permutation action; checks that
    /// the action is a homomorphism and commutes with the boundary.
    pub fn from_cells(
        group: FiniteGroup,
        dims: Vec<usize>,
        boundaries: Vec<SparseMatrix>,
        action: Vec<Vec<Vec<SignedCell>>>,
    ) -> Result<GComplex> {
        let n = group.order();
        if action.len() != n || action.iter().any(|a| a.len() != dims.len()) {
            return Err(Error::Invalid("action table has the wrong shape".into()));
        }
        ChainComplex::new(0, dims.clone(), boundaries.clone())?;
        let x = GComplex { group, dims, boundaries, action, subdivided: false };
        for a in 0..n {
            for b in 0..n {
                let ab = x.group.mul(a, b);
                for p in 0..x.dims.len() {
                    for c in 0..x.dims[p] {
                        let (c1, s1) = x.act(b, p, c);
                        let (c2, s2) = x.act(a, p, c1);
                        if x.act(ab, p, c) != (c2, s1 * s2) {
                            return Err(Error::Invalid("cell action is not a homomorphism".into()));
                        }
                    }
                }
            }
            for p in 1..x.dims.len() {
                for c in 0..x.dims[p] {
                    let (gc, s) = x.act(a, p, c);
                    let mut lhs: BTreeMap<usize, i64> = BTreeMap::new();
                    for &(f, v) in x.boundaries[p - 1].column(c) {
                        let (gf, t) = x.act(a, p - 1, f);
                        *lhs.entry(gf).or_insert(0) += v * t;
                    }
                    let mut rhs: BTreeMap<usize, i64> = BTreeMap::new();
                    for &(f, v) in x.boundaries[p - 1].column(gc) {
                        *rhs.entry(f).or_insert(0) += v * s;
                    }
                    lhs.retain(|_, v| *v != 0);
                    rhs.retain(|_, v| *v != 0);
                    if lhs != rhs {
                        return Err(Error::Invalid("action does not commute with the boundary".into()));
                    }
                }
            }
        }
        Ok(x)
    }

    #[inline]
    pub fn act(&self, g: usize, p: usize, c: usize) -> SignedCell {
        self.action[g][p][c]
    }
    pub fn top_dim(&self) -> usize {
        self.dims.len() - 1
    }
    pub fn chain_complex(&self) -> Result<ChainComplex> {
        ChainComplex::new(0, self.dims.clone(), self.boundaries.clone())
    }

    /// Cell orbits of dimension `p`.
    pub fn orbits(&self, p: usize) -> Orbits {
        let n = self.group.order();
        let mut of = vec![(usize::MAX, 0usize, 0i64); self.dims[p]];
        let mut reps = Vec::new();
        let mut stabs = Vec::new();
        let mut chars = Vec::new();
        for c in 0..self.dims[p] {
            if of[c].0 != usize::MAX {
                continue;
            }
            let o = reps.len();
            let mut stab = Vec::new();
            let mut chi = Vec::new();
            for g in 0..n {
                let (d, s) = self.act(g, p, c);
                if of[d].0 == usize::MAX {
                    of[d] = (o, g, s);
                }
                if d == c {
                    stab.push(g);
                    chi.push(s);
                }
            }
            reps.push(c);
            stabs.push(stab);
            chars.push(chi);
        }
        Orbits { reps, of, stabilizers: stabs, characters: chars }
    }

    /// Whether every stabilizer acts on its cell with sign +1.
    pub fn orientation_preserving(&self) -> bool {
        (0..self.dims.len()).all(|p| self.orbits(p).characters.iter().all(|c| c.iter().all(|&s| s == 1)))
    }

    /// The orbit chain complex `C(X)_G` (orientation-reversed orbits give
    /// 2-torsion and are kept as such over `Z`).
    pub fn orbit_complex(&self) -> Result<ChainComplex> {
        let page = e1_page(self, Coeff::Z, 0)?;
        let dims: Vec<usize> = page.entries.iter().map(|c| c[0].gens).collect();
        // Only valid as a plain chain complex when every orbit is free over Z.
        if page.entries.iter().any(|c| c[0].relations.cols() > 0 && !c[0].relations.is_zero()) {
            return Err(Error::Unsupported("orbit module has torsion; use the E¹ page".into()));
        }
        let bds = (1..dims.len()).map(|p| page.d1[p][0].to_sparse()).collect();
        ChainComplex::new(0, dims, bds)
    }
}

/// Orbit data for one dimension: representatives, for every cell its orbit
/// with an element `g` and sign `s` such that `g · rep = s · cell`, and per
/// representative its stabilizer with the orientation character.
#[derive(Clone, Debug)]
pub struct Orbits {
    pub reps: Vec<usize>,
    pub of: Vec<(usize, usize, i64)>,
    pub stabilizers: Vec<Vec<usize>>,
    pub characters: Vec<Vec<i64>>,
}

/// `E¹_{p,q} = ⊕_σ H_q(G_σ; Z_σ)` with the orientation character `Z_σ`,
/// presented on explicit bar cycles, and `d¹: E¹_{p,q} → E¹_{p-1,q}`.
#[derive(Clone, Debug)]
pub struct E1Page {
    pub coeff: Coeff,
    pub q_max: usize,
    /// `entries[p][q]`, as presented modules over `Z`.
    pub entries: Vec<Vec<Module>>,
    /// `d1[p][q]` on generators (`d1[0][q]` has no rows).
    pub d1: Vec<Vec<IntMatrix>>,
    /// Per orbit representative: stabilizer order.
    pub stabilizer_orders: Vec<Vec<usize>>,
}

fn modulus(coeff: Coeff) -> u64 {
    match coeff {
        Coeff::ModL(l) => l,
        _ => 0,
    }
}

fn localize(coeff: Coeff, g: FgAbGroup) -> FgAbGroup {
    match coeff {
        Coeff::ZHalf => g.invert_two(),
        _ => g,
    }
}

fn block_diagonal(blocks: &[&IntMatrix], rows: usize) -> IntMatrix {
    let cols: usize = blocks.iter().map(|b| b.cols()).sum();
    let mut out = IntMatrix::zeros(rows, cols);
    let (mut r0, mut c0) = (0, 0);
    for b in blocks {
        for i in 0..b.rows() {
            for j in 0..b.cols() {
                out.set(r0 + i, c0 + j, b.get(i, j).clone());
            }
        }
        r0 += b.rows();
        c0 += b.cols();
    }
    out
}

/// Builds the E¹ page in rows `q ≤ q_max`. Over `Z[1/2]` the page is
/// computed integrally and localized when read.
pub fn e1_page(x: &GComplex, coeff: Coeff, q_max: usize) -> Result<E1Page> {
    let g = &x.group;
    let md = modulus(coeff);
    let orbits: Vec<Orbits> = (0..x.dims.len()).map(|p| x.orbits(p)).collect();
    // Cycle presentations, shared between equal (stabilizer, character).
    let mut cache: BTreeMap<(Vec<usize>, Vec<i64>), BarHomology> = BTreeMap::new();
    for o in &orbits {
        for (st, chi) in o.stabilizers.iter().zip(&o.characters) {
            let key = (st.clone(), chi.clone());
            if !cache.contains_key(&key) {
                let h = Subgroup::new(g, st);
                cache.insert(key, BarHomology::new(&h, chi, q_max, md)?);
            }
        }
    }
    // Stabilizers must fix the faces of their cells (no transfer maps).
    for p in 1..x.dims.len() {
        for (o, &sigma) in orbits[p].reps.iter().enumerate() {
            for &(face, _) in x.boundaries[p - 1].column(sigma) {
                let (t, h, _) = orbits[p - 1].of[face];
                let dst = &orbits[p - 1].stabilizers[t];
                if orbits[p].stabilizers[o].iter().any(|&a| dst.binary_search(&g.conj(h, a)).is_err()) {
                    return Err(Error::Unsupported(alloc::format!(
                        "stabilizer of {p}-cell {sigma} moves its face {face}; subdivide first"
                    )));
                }
            }
        }
    }
    let bh = |p: usize, o: usize| &cache[&(orbits[p].stabilizers[o].clone(), orbits[p].characters[o].clone())];
    let mut entries = Vec::new();
    let mut offsets: Vec<Vec<Vec<usize>>> = Vec::new();
    for (p, o) in orbits.iter().enumerate() {
        let mut row = Vec::new();
        let mut off_row = Vec::new();
        for q in 0..=q_max {
            let pres: Vec<&bar::CyclePresentation> = (0..o.reps.len()).map(|i| &bh(p, i).degrees[q]).collect();
            let mut offs = Vec::new();
            let mut total = 0;
            for c in &pres {
                offs.push(total);
                total += c.generators();
            }
            let rels: Vec<&IntMatrix> = pres.iter().map(|c| &c.relations).collect();
            let relations = block_diagonal(&rels, total);
            row.push(Module::new(total, padded_cols(&relations)));
            off_row.push(offs);
        }
        entries.push(row);
        offsets.push(off_row);
    }
    let mut d1 = vec![(0..=q_max).map(|q| IntMatrix::zeros(0, entries[0][q].gens)).collect::<Vec<_>>()];
    for p in 1..x.dims.len() {
        let mut row = Vec::new();
        for q in 0..=q_max {
            let mut m = IntMatrix::zeros(entries[p - 1][q].gens, entries[p][q].gens);
            for (o, &sigma) in orbits[p].reps.iter().enumerate() {
                let src_stab = Subgroup::new(g, &orbits[p].stabilizers[o]);
                let src = &bh(p, o).degrees[q];
                for &(face, inc) in x.boundaries[p - 1].column(sigma) {
                    let (t, h, s) = orbits[p - 1].of[face];
                    // face = s · h · rep, so conjugate by h⁻¹ into the rep's stabilizer.
                    let dst_stab = Subgroup::new(g, &orbits[p - 1].stabilizers[t]);
                    let dst = &bh(p - 1, t).degrees[q];
                    let nd = dst_stab.order();
                    let dim_dst = if q == 0 { 1 } else { (nd - 1).pow(q as u32) };
                    for j in 0..src.generators() {
                        let z = src.cycles.column(j);
                        let mut img = vec![BigInt::zero(); dim_dst];
                        for (idx, coef) in z.iter().enumerate() {
                            if coef.is_zero() {
                                continue;
                            }
                            let tup = tuple_of(idx, q, src_stab.order());
                            let mapped: Vec<usize> = tup
                                .iter()
                                .map(|&a| dst_stab.local(g.conj(h, src_stab.elems[a])).expect("conjugate lies in stabilizer"))
                                .collect();
                            if mapped.iter().any(|&a| a == 0) {
                                continue;
                            }
                            img[tuple_index(&mapped, nd)] += coef * inc * s;
                        }
                        let coords = dst.express(&img);
                        for (k, c) in coords.into_iter().enumerate() {
                            let r = offsets[p - 1][q][t] + k;
                            let col = offsets[p][q][o] + j;
                            let v = m.get(r, col) + c;
                            m.set(r, col, v);
                        }
                    }
                }
            }
            row.push(m);
        }
        d1.push(row);
    }
    let stabilizer_orders = orbits.iter().map(|o| o.stabilizers.iter().map(Vec::len).collect()).collect();
    Ok(E1Page { coeff, q_max, entries, d1, stabilizer_orders })
}

impl E1Page {
    pub fn p_max(&self) -> usize {
        self.entries.len() - 1
    }
    /// `E¹_{p,q}` as an abelian group (localized for `Z[1/2]`).
    pub fn group(&self, p: usize, q: usize) -> FgAbGroup {
        localize(self.coeff, self.entries[p][q].group())
    }
    /// `d¹ ∘ d¹ = 0` modulo the relations of the target.
    pub fn d1_squared_vanishes(&self) -> bool {
        (2..=self.p_max()).all(|p| {
            (0..=self.q_max).all(|q| {
                let comp = self.d1[p - 1][q].mul(&self.d1[p][q]);
                let rel = &self.entries[p - 2][q].relations;
                let solver = SpanSolver::new(&padded_cols(rel));
                (0..comp.cols()).all(|j| solver.solve(&comp.column(j)).is_some())
            })
        })
    }
}

/// E² page with the total homology where the spectral sequence is forced
/// to degenerate.
#[derive(Clone, Debug)]
pub struct E2Page {
    pub entries: Vec<Vec<FgAbGroup>>,
    /// `E²` sits in one row or in at most two adjacent columns, so all
    /// higher differentials vanish.
    pub degenerate: bool,
    pub marker: Option<String>,
    /// Total degree `n ≤ q_max`, assembled as a direct sum when degenerate.
    pub total: Option<Vec<FgAbGroup>>,
    /// Per total degree: a non-bottom filtration quotient has torsion, so
    /// the direct sum is one of several possible extensions.
    pub extension_ambiguous: Vec<bool>,
}

pub fn e2_and_total(page: &E1Page) -> E2Page {
    let pm = page.p_max();
    let trivial_mod = Module::new(1, IntMatrix::from_rows(&[[1]]));
    let mut entries = Vec::new();
    for p in 0..=pm {
        let mut col = Vec::new();
        for q in 0..=page.q_max {
            let mid = &page.entries[p][q];
            let n = mid.gens;
            let g = if p < pm { page.d1[p + 1][q].clone() } else { IntMatrix::zeros(n, 0) };
            let (f, next) = if p > 0 && page.entries[p - 1][q].gens > 0 {
                (page.d1[p][q].clone(), page.entries[p - 1][q].clone())
            } else {
                (IntMatrix::zeros(1, n), trivial_mod.clone())
            };
            let h = if n == 0 {
                FgAbGroup::trivial()
            } else {
                presented_homology(&padded_cols(&g), mid, &f, &Module::new(next.gens, padded_cols(&next.relations)))
            };
            col.push(localize(page.coeff, h));
        }
        entries.push(col);
    }
    let nonzero: Vec<(usize, usize)> = (0..=pm)
        .flat_map(|p| (0..=page.q_max).map(move |q| (p, q)))
        .filter(|&(p, q)| !entries[p][q].is_trivial())
        .collect();
    let cols: Vec<usize> = nonzero.iter().map(|x| x.0).collect();
    let rows: Vec<usize> = nonzero.iter().map(|x| x.1).collect();
    let span = |v: &[usize]| v.iter().max().zip(v.iter().min()).map_or(0, |(a, b)| a - b);
    let degenerate = span(&cols) <= 1 || span(&rows) == 0;
    let mut extension_ambiguous = Vec::new();
    let total = degenerate.then(|| {
        (0..=page.q_max)
            .map(|n| {
                let parts: Vec<(usize, &FgAbGroup)> = (0..=n.min(pm))
                    .map(|p| (p, &entries[p][n - p]))
                    .filter(|(_, g)| !g.is_trivial())
                    .collect();
                let field = matches!(page.coeff, Coeff::ModL(_));
                extension_ambiguous.push(!field && parts.iter().skip(1).any(|(_, g)| !g.torsion().is_empty()));
                parts.iter().fold(FgAbGroup::trivial(), |acc, (_, g)| acc.direct_sum(g))
            })
            .collect()
    });
    E2Page {
        entries,
        degenerate,
        marker: (!degenerate).then(|| "possible higher differentials".into()),
        total,
        extension_ambiguous,
    }
}

/// Equivariant homology `H^G_n(X)` for `n ≤ n_max`, directly from the total
/// complex of the bar construction with coefficients in the cellular chains.
pub fn equivariant_homology(x: &GComplex, n_max: usize, coeff: Coeff) -> Result<Vec<FgAbGroup>> {
    let g = &x.group;
    let ord = g.order();
    let b = ord - 1;
    let top = n_max + 1;
    let bar_dim = |p: usize| if p == 0 { 1 } else { b.pow(p as u32) };
    let cells = |q: usize| x.dims.get(q).copied().unwrap_or(0);
    // Block offsets of Tot_n = ⊕_{p+q=n} Bar_p ⊗ C_q.
    let mut offsets: Vec<BTreeMap<usize, usize>> = Vec::new();
    let mut dims = Vec::new();
    for n in 0..=top {
        let mut off = BTreeMap::new();
        let mut t = 0usize;
        for p in 0..=n {
            off.insert(p, t);
            t = t.saturating_add(bar_dim(p).saturating_mul(cells(n - p)));
        }
        offsets.push(off);
        dims.push(t);
    }
    if dims.iter().sum::<usize>() > BAR_CAP {
        return Err(Error::ResourceCap(alloc::format!("hyperhomology total complex: {} generators", dims.iter().sum::<usize>())));
    }
    let mut bds = Vec::new();
    for n in 1..=top {
        let mut cols = Vec::with_capacity(dims[n]);
        for p in 0..=n {
            let q = n - p;
            for t in 0..bar_dim(p) {
                let tup = tuple_of(t, p, ord);
                for c in 0..cells(q) {
                    let mut col: BTreeMap<usize, i64> = BTreeMap::new();
                    let at = |p: usize, q: usize, t: usize, c: usize| offsets[p + q][&p] + t * cells(q) + c;
                    if p > 0 {
                        // [g2|..] ⊗ g1⁻¹ c
                        let (c1, s) = x.act(g.inv(tup[0]), q, c);
                        *col.entry(at(p - 1, q, tuple_index(&tup[1..], ord), c1)).or_insert(0) += s;
                        for k in 1..p {
                            let prod = g.mul(tup[k - 1], tup[k]);
                            if prod != 0 {
                                let mut u = tup[..k - 1].to_vec();
                                u.push(prod);
                                u.extend_from_slice(&tup[k + 1..]);
                                let sign = if k % 2 == 1 { -1 } else { 1 };
                                *col.entry(at(p - 1, q, tuple_index(&u, ord), c)).or_insert(0) += sign;
                            }
                        }
                        let sign = if p % 2 == 1 { -1 } else { 1 };
                        *col.entry(at(p - 1, q, tuple_index(&tup[..p - 1], ord), c)).or_insert(0) += sign;
                    }
                    if q > 0 {
                        let sign = if p % 2 == 1 { -1 } else { 1 };
                        for &(f, v) in x.boundaries[q - 1].column(c) {
                            *col.entry(at(p, q - 1, t, f)).or_insert(0) += sign * v;
                        }
                    }
                    cols.push(col.into_iter().filter(|(_, v)| *v != 0).collect());
                }
            }
        }
        bds.push(SparseMatrix::from_columns(dims[n - 1], cols));
    }
    let tot = ChainComplex::new(0, dims, bds)?;
    let integral: Vec<FgAbGroup> = (0..=n_max).map(|n| tot.homology_at(n as i64, Coeff::Z)).collect();
    Ok((0..=n_max)
        .map(|n| bar::with_coefficients(&integral[n], n.checked_sub(1).map(|m| &integral[m]), coeff))
        .collect())
}

/// Long exact sequence data for `0 → C(A) → C(X) → C(X)/C(A) → 0`.
#[derive(Clone, Debug)]
pub struct SesReport {
    /// `C(A) → C(X) → C(X/A)` exact in every degree at chain level.
    pub degreewise_exact: bool,
    pub homology_a: Vec<FgAbGroup>,
    pub homology_x: Vec<FgAbGroup>,
    pub homology_rel: Vec<FgAbGroup>,
    /// Per prime: the long exact sequence is exact at every term.
    pub les_exact: Vec<(u32, bool)>,
    pub convention: Option<String>,
}

/// Primes used for the rank checks: a small one and a large one standing
/// in for the rationals.
pub const LES_PRIMES: [u32; 2] = [3, 32749];

/// Checks the short exact sequence of orbit chain complexes for the
/// subcomplex spanned by `sub[p]` (cell indices of `x` per degree).
pub fn chain_ses_check(x: &ChainComplex, sub: &[Vec<usize>]) -> Result<SesReport> {
    let top = x.dims().len();
    let mut in_a: Vec<Vec<bool>> = (0..top).map(|p| vec![false; x.dim(p as i64)]).collect();
    for (p, l) in sub.iter().enumerate() {
        for &c in l {
            if p >= top || c >= in_a[p].len() {
                return Err(Error::Invalid(alloc::format!("cell ({p},{c}) is not in the complex")));
            }
            in_a[p][c] = true;
        }
    }
    for p in 1..top {
        let d = x.boundary(p as i64);
        for c in (0..x.dim(p as i64)).filter(|&c| in_a[p][c]) {
            if d.column(c).iter().any(|&(f, v)| v != 0 && !in_a[p - 1][f]) {
                return Err(Error::Invalid(alloc::format!("not a subcomplex: face of cell ({p},{c}) missing")));
            }
        }
    }
    let a_cells: Vec<Vec<usize>> = in_a.iter().map(|v| (0..v.len()).filter(|&i| v[i]).collect()).collect();
    let q_cells: Vec<Vec<usize>> = in_a.iter().map(|v| (0..v.len()).filter(|&i| !v[i]).collect()).collect();
    let restrict = |rows: &[Vec<usize>], cols: &[Vec<usize>]| -> Result<ChainComplex> {
        let dims: Vec<usize> = cols.iter().map(Vec::len).collect();
        let bds = (1..top).map(|p| x.boundary(p as i64).submatrix(&rows[p - 1], &cols[p])).collect();
        ChainComplex::new(0, dims, bds)
    };
    let ca = restrict(&a_cells, &a_cells)?;
    let cq = restrict(&q_cells, &q_cells)?;
    // Degreewise: the basis splits, and d maps A into A.
    let degreewise_exact =
        (0..top).all(|p| a_cells[p].len() + q_cells[p].len() == x.dim(p as i64));
    let mut les_exact = Vec::new();
    for &l in &LES_PRIMES {
        les_exact.push((l, les_ranks_exact(x, &a_cells, &q_cells, l)));
    }
    Ok(SesReport {
        degreewise_exact,
        homology_a: ca.homology(Coeff::Z),
        homology_x: x.homology(Coeff::Z),
        homology_rel: cq.homology(Coeff::Z),
        les_exact,
        convention: sub.iter().all(Vec::is_empty).then(|| {
            "A empty: X/A read as X with a disjoint base point, so relative chains are C(X)".into()
        }),
    })
}

fn dense_mod(m: &SparseMatrix, rows: &[usize], cols: &[usize], k: &Field) -> Vec<Vec<u32>> {
    // Column vectors, restricted.
    let pos: BTreeMap<usize, usize> = rows.iter().enumerate().map(|(i, &r)| (r, i)).collect();
    cols.iter()
        .map(|&c| {
            let mut v = vec![0u32; rows.len()];
            for &(r, x) in m.column(c) {
                if let Some(&i) = pos.get(&r) {
                    v[i] = k.add(v[i], k.from_int(x));
                }
            }
            v
        })
        .collect()
}

fn transpose(cols: &[Vec<u32>], rows: usize) -> Vec<Vec<u32>> {
    (0..rows).map(|i| cols.iter().map(|c| c[i]).collect()).collect()
}

/// Rank checks of the long exact sequence over `F_l`.
fn les_ranks_exact(x: &ChainComplex, a: &[Vec<usize>], qc: &[Vec<usize>], l: u32) -> bool {
    let k = Field::new(l).expect("prime field");
    let top = x.dims().len();
    let all: Vec<Vec<usize>> = (0..top).map(|p| (0..x.dim(p as i64)).collect()).collect();
    let bd = |p: usize| x.boundary(p as i64);
    // Cycles and boundaries of a restricted complex, as column vectors in
    // the restricted basis.
    let cycles = |cells: &[Vec<usize>], p: usize| -> Vec<Vec<u32>> {
        if p == 0 {
            return (0..cells[0].len()).map(|i| (0..cells[0].len()).map(|j| u32::from(i == j)).collect()).collect();
        }
        let cols = dense_mod(&bd(p), &cells[p - 1], &cells[p], &k);
        fqlin::nullspace(&k, &transpose(&cols, cells[p - 1].len()), cells[p].len())
    };
    let bounds = |cells: &[Vec<usize>], p: usize| -> Vec<Vec<u32>> {
        if p + 1 >= top {
            return Vec::new();
        }
        dense_mod(&bd(p + 1), &cells[p], &cells[p + 1], &k)
    };
    // Embeds restricted vectors into the full basis.
    let embed = |v: &[u32], cells: &[usize], n: usize| -> Vec<u32> {
        let mut out = vec![0u32; n];
        for (i, &c) in cells.iter().enumerate() {
            out[c] = v[i];
        }
        out
    };
    let rank_mod = |base: &[Vec<u32>], extra: &[Vec<u32>]| -> (usize, usize) {
        let r0 = fqlin::rank(&k, base);
        let mut all = base.to_vec();
        all.extend(extra.iter().cloned());
        (r0, fqlin::rank(&k, &all) - r0)
    };
    let mut h = vec![[0usize; 3]; top];
    let mut ri = vec![0usize; top];
    let mut rj = vec![0usize; top];
    let mut rd = vec![0usize; top];
    for p in 0..top {
        let n = x.dim(p as i64);
        let za = cycles(a, p);
        let ba = bounds(a, p);
        let zx = cycles(&all, p);
        let bx = bounds(&all, p);
        let zq = cycles(qc, p);
        let bq = bounds(qc, p);
        h[p][0] = za.len() - fqlin::rank(&k, &ba);
        h[p][1] = zx.len() - fqlin::rank(&k, &bx);
        h[p][2] = zq.len() - fqlin::rank(&k, &bq);
        let ia: Vec<Vec<u32>> = za.iter().map(|v| embed(v, &a[p], n)).collect();
        ri[p] = rank_mod(&bx, &ia).1;
        let proj: Vec<Vec<u32>> = zx.iter().map(|v| qc[p].iter().map(|&c| v[c]).collect()).collect();
        rj[p] = rank_mod(&bq, &proj).1;
        if p > 0 {
            let lifts: Vec<Vec<u32>> = zq.iter().map(|v| embed(v, &qc[p], n)).collect();
            let d = bd(p);
            let imgs: Vec<Vec<u32>> = lifts
                .iter()
                .map(|v| {
                    let mut out = vec![0u32; a[p - 1].len()];
                    let pos: BTreeMap<usize, usize> = a[p - 1].iter().enumerate().map(|(i, &c)| (c, i)).collect();
                    for (c, &coef) in v.iter().enumerate() {
                        if coef == 0 {
                            continue;
                        }
                        for &(r, val) in d.column(c) {
                            if let Some(&i) = pos.get(&r) {
                                out[i] = k.add(out[i], k.mul(coef, k.from_int(val)));
                            }
                        }
                    }
                    out
                })
                .collect();
            rd[p] = rank_mod(&bounds(a, p - 1), &imgs).1;
        }
    }
    (0..top).all(|p| {
        let next_d = if p + 1 < top { rd[p + 1] } else { 0 };
        ri[p] + rj[p] == h[p][1] && rj[p] + rd[p] == h[p][2] && next_d + ri[p] == h[p][0]
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sort_sign() {
        assert_eq!(sort_with_sign(vec![2, 0, 1]), (vec![0, 1, 2], 1));
        assert_eq!(sort_with_sign(vec![1, 0]), (vec![0, 1], -1));
    }
}
