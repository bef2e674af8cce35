//! Orbit representatives of the cells near the base vertex under `GL_2(A)`
//! or `SL_2(A)`.
//!
//! Vertex orbits are explored breadth-first, each new orbit represented by
//! an actual neighbor of an earlier representative, so representative
//! distances equal quotient distances. A cube orbit is keyed by the least,
//! over its corners `c`, of the representative of `c` together with the
//! link coordinates of the transported cube there, minimized over the
//! stabilizer of that representative. Cells are kept when every corner orbit
//! lies within the radius.
//!
//! Edges are oriented from even to odd vertex type and cubes carry the
//! product orientation. A cube whose stabilizer reverses orientation is
//! marked flipped and left out of the orbit chain complex.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use super::algebra::{EndAlgebra, StabDescriptor};
use super::{cube_lattices, residue, BundleClass, BundleContext};
use crate::building::{BuildingCube, BuildingVertex};
use crate::error::{Error, Result};
use crate::exact::fqlin;
use crate::exact::{ChainComplex, Mat2, Poly, SparseMatrix};
use crate::tree::TreeVertex;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GroupFlavor {
    Gl2,
    Sl2,
}

/// The action of one stabilizer element on the links of a vertex.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct LinkPerm {
    perms: Vec<Vec<u64>>,
    det_square: bool,
}

/// Stabilizer data of a representative vertex.
pub(crate) struct RepData {
    units: Vec<LinkPerm>,
}

/// Largest reduced stabilizer enumerated.
const UNIT_CAP: u64 = 1 << 20;

impl RepData {
    pub(crate) fn new(ctx: &BundleContext, v: &BuildingVertex) -> RepData {
        let k = &ctx.k;
        let end = ctx.vertex_end(v);
        let mats = ctx.matrices(v);
        let inv: Vec<Mat2> = mats.iter().map(|m| m.inv(k).unwrap()).collect();
        let degs: Vec<usize> = ctx.degrees.iter().map(|d| *d as usize).collect();
        let width: usize = degs.iter().map(|d| 4 * d).sum();
        // Reductions of the basis in ∏ Mat_2(k_i), flattened over F_q.
        let mut rows: Vec<Vec<u32>> = end
            .basis
            .iter()
            .map(|b| {
                let mut row = Vec::with_capacity(width);
                for i in 0..ctx.s() {
                    let x = inv[i].mul(b, k).mul(&mats[i], k);
                    for e in x.entries() {
                        let r = residue(ctx, i, e);
                        for t in 0..degs[i] {
                            row.push(r.coeff(t));
                        }
                    }
                }
                row
            })
            .collect();
        let rank = fqlin::rref(k, &mut rows).len();
        rows.truncate(rank);
        let q = k.q() as u64;
        let total = q.checked_pow(rank as u32).filter(|t| *t <= UNIT_CAP).expect("reduced stabilizer too large");
        let mut units: Vec<LinkPerm> = Vec::new();
        let mut coef = vec![0u32; rank];
        for idx in 0..total {
            let mut x = idx;
            for c in coef.iter_mut() {
                *c = (x % q) as u32;
                x /= q;
            }
            let mut flat = vec![0u32; width];
            for (c, r) in coef.iter().zip(&rows) {
                if *c != 0 {
                    for (f, e) in flat.iter_mut().zip(r) {
                        *f = k.add(*f, k.mul(*c, *e));
                    }
                }
            }
            if let Some(u) = link_perm(ctx, &degs, &flat) {
                units.push(u);
            }
        }
        units.sort();
        units.dedup();
        RepData { units }
    }

    /// Orbits of the stabilizer on the link positions in direction `i`.
    pub(crate) fn link_orbits(&self, i: usize) -> Vec<Vec<u64>> {
        let n = self.units[0].perms[i].len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut orbit: Vec<u64> = self.units.iter().map(|u| u.perms[i][start]).collect();
            orbit.sort();
            orbit.dedup();
            for &x in &orbit {
                seen[x as usize] = true;
            }
            out.push(orbit);
        }
        out
    }

    /// Least image of a tuple of link positions (in directions `dirs`) under
    /// the units allowed by `square` (`None` allows every unit).
    fn canonical(&self, dirs: &[usize], tuple: &[u64], square: Option<bool>) -> Vec<u64> {
        let mut best: Option<Vec<u64>> = None;
        for u in &self.units {
            if square.is_some_and(|s| s != u.det_square) {
                continue;
            }
            let img: Vec<u64> = dirs.iter().zip(tuple).map(|(i, t)| u.perms[*i][*t as usize]).collect();
            if best.as_ref().is_none_or(|b| img < *b) {
                best = Some(img);
            }
        }
        best.expect("identity is a unit")
    }
}

/// The Möbius action of a reduced element on each link, if it is a unit.
fn link_perm(ctx: &BundleContext, degs: &[usize], flat: &[u32]) -> Option<LinkPerm> {
    let k = &ctx.k;
    let mut off = 0;
    let mut perms = Vec::new();
    let mut det0 = None;
    for (i, tree) in ctx.trees().iter().enumerate() {
        let f = tree.residue_field();
        let d = degs[i];
        let mut ent = Vec::new();
        for _ in 0..4 {
            ent.push(f.reduce(&Poly::from_coeffs(flat[off..off + d].to_vec())));
            off += d;
        }
        let (a, b, c, dd) = (&ent[0], &ent[1], &ent[2], &ent[3]);
        let det = f.sub(&f.mul(a, dd), &f.mul(b, c));
        if det.is_zero() {
            return None;
        }
        det0.get_or_insert(det.coeff(0));
        let qv = tree.q_v();
        let perm: Vec<u64> = (0..=qv)
            .map(|y| {
                let (num, den) = if y == qv {
                    (a.clone(), c.clone())
                } else {
                    let y = f.element(y);
                    (f.add(&f.mul(a, &y), b), f.add(&f.mul(c, &y), dd))
                };
                match f.inv(&den) {
                    None => qv,
                    Some(di) => f.index(&f.mul(&num, &di)),
                }
            })
            .collect();
        perms.push(perm);
    }
    Some(LinkPerm { perms, det_square: k.is_square(det0.unwrap()) })
}

struct Rep {
    vertex: BuildingVertex,
    class: BundleClass,
    /// Maps this representative to the first representative of its class.
    to_label: Mat2,
    depth: usize,
    data: RepData,
}

/// A transport of a vertex to its representative.
#[derive(Clone)]
struct Located {
    rep: usize,
    gamma: Mat2,
    /// Parity of `v_i(det γ)` per puncture.
    odd: Vec<bool>,
    /// Whether the constant part of `det γ` is a square (always for `GL_2`).
    square: bool,
}

struct Locator<'a> {
    ctx: &'a BundleContext,
    flavor: GroupFlavor,
    reps: Vec<Rep>,
    by_label: BTreeMap<BundleClass, usize>,
    by_orbit: BTreeMap<(BundleClass, Vec<u8>), usize>,
    classes: BTreeMap<BuildingVertex, BundleClass>,
    /// Transport to the label representative and its unit class.
    to_label: BTreeMap<BuildingVertex, (Mat2, Vec<u8>)>,
    located: BTreeMap<BuildingVertex, Option<Located>>,
}

impl<'a> Locator<'a> {
    fn class(&mut self, w: &BuildingVertex) -> BundleClass {
        if let Some(c) = self.classes.get(w) {
            return *c;
        }
        let c = self.ctx.classify_vertex(w);
        self.classes.insert(w.clone(), c);
        c
    }

    fn unit_class(&self, g: &Mat2) -> Vec<u8> {
        if self.flavor == GroupFlavor::Gl2 {
            return Vec::new();
        }
        let z = self.ctx.unit_valuations(&g.det(&self.ctx.k));
        let c = self.ctx.unit_coordinates(&z).expect("determinant of a transport is a unit");
        c.iter().map(|x| x.rem_euclid(2) as u8).collect()
    }

    fn label_transport(&mut self, w: &BuildingVertex, class: BundleClass) -> Option<(Mat2, Vec<u8>)> {
        if let Some(t) = self.to_label.get(w) {
            return Some(t.clone());
        }
        let l = *self.by_label.get(&class)?;
        let g = self.ctx.transport(w, &self.reps[l].vertex).expect("same class implies same orbit");
        let u = self.unit_class(&g);
        self.to_label.insert(w.clone(), (g.clone(), u.clone()));
        Some((g, u))
    }

    fn locate(&mut self, w: &BuildingVertex) -> Option<Located> {
        if let Some(Some(l)) = self.located.get(w) {
            return Some(l.clone());
        }
        let class = self.class(w);
        let (g0, u) = self.label_transport(w, class)?;
        let r = *self.by_orbit.get(&(class, u))?;
        let k = &self.ctx.k;
        let gamma = self.reps[r].to_label.inv(k).unwrap().mul(&g0, k);
        let det = gamma.det(k);
        let odd = self.ctx.places.iter().map(|p| p.valuation(&det, k).unwrap().rem_euclid(2) == 1).collect();
        let square = match self.flavor {
            GroupFlavor::Gl2 => true,
            GroupFlavor::Sl2 => {
                let c = self.ctx.square_class_constant(&det).expect("transport within an SL_2 orbit");
                k.is_square(c)
            }
        };
        let l = Located { rep: r, gamma, odd, square };
        self.located.insert(w.clone(), Some(l.clone()));
        Some(l)
    }

    fn register(&mut self, w: BuildingVertex, depth: usize) -> usize {
        let class = self.class(&w);
        let idx = self.reps.len();
        let (to_label, u) = match self.label_transport(&w, class) {
            Some(t) => t,
            None => {
                self.by_label.insert(class, idx);
                let u = vec![0u8; if self.flavor == GroupFlavor::Sl2 { self.ctx.unit_lattice.len() } else { 0 }];
                (Mat2::identity(), u)
            }
        };
        self.by_orbit.insert((class, u), idx);
        let data = RepData::new(self.ctx, &w);
        self.reps.push(Rep { vertex: w, class, to_label, depth, data });
        idx
    }

    /// Transported link coordinates of the cube spanned at `v` by `moves`,
    /// minimized over corners and stabilizers. Returns the key, the sign of
    /// a minimizing transport and whether both signs occur.
    fn cube_key(&mut self, v: &BuildingVertex, moves: &[(usize, TreeVertex)]) -> Option<(CubeKey, i64, bool)> {
        let k = self.ctx.k.clone();
        let dirs: Vec<usize> = moves.iter().map(|m| m.0).collect();
        let mut best: Option<(usize, Vec<u64>)> = None;
        let mut signs = (false, false);
        for mask in 0..1u64 << moves.len() {
            let mut c = v.clone();
            for (j, (i, x)) in moves.iter().enumerate() {
                if mask >> j & 1 == 1 {
                    c[*i] = x.clone();
                }
            }
            let loc = self.locate(&c)?;
            let rep = &self.reps[loc.rep];
            let mut tuple = Vec::with_capacity(moves.len());
            for (j, (i, x)) in moves.iter().enumerate() {
                let other = if mask >> j & 1 == 1 { &v[*i] } else { x };
                let tree = &self.ctx.trees()[*i];
                let img = tree.canonicalize(&loc.gamma.mul(&tree.matrix(other), &k)).unwrap();
                tuple.push(tree.link_position(&rep.vertex[*i], &img).expect("transport preserves adjacency"));
            }
            let square = (self.flavor == GroupFlavor::Sl2).then_some(loc.square);
            let canon = rep.data.canonical(&dirs, &tuple, square);
            let negative = dirs.iter().filter(|i| loc.odd[**i]).count() % 2 == 1;
            let cand = (loc.rep, canon);
            match &best {
                Some(b) if cand > *b => continue,
                Some(b) if cand == *b => {}
                _ => {
                    best = Some(cand);
                    signs = (false, false);
                }
            }
            if negative {
                signs.1 = true;
            } else {
                signs.0 = true;
            }
        }
        let (rep, tuple) = best.unwrap();
        let sign = if signs.0 { 1 } else { -1 };
        Some((CubeKey { dirs, rep, tuple }, sign, signs.0 && signs.1))
    }

    fn key_cube(&self, key: &CubeKey) -> (BuildingVertex, Vec<(usize, TreeVertex)>) {
        let v = self.reps[key.rep].vertex.clone();
        let moves =
            key.dirs.iter().zip(&key.tuple).map(|(i, t)| (*i, self.ctx.trees()[*i].link(&v[*i])[*t as usize].clone())).collect();
        (v, moves)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct CubeKey {
    dirs: Vec<usize>,
    rep: usize,
    tuple: Vec<u64>,
}

#[derive(Clone, Debug)]
pub struct QuotientCell {
    pub dim: usize,
    /// A representative cube in the building.
    pub cube: BuildingCube,
    /// Index of the vertex orbit the representative is anchored at.
    pub anchor: usize,
    /// Largest quotient distance of a corner orbit from the base orbit.
    pub depth: usize,
    /// Classes of the corners.
    pub classes: Vec<BundleClass>,
    pub stab: StabDescriptor,
    pub parabolic: bool,
    /// Stabilizer reverses the orientation.
    pub flipped: bool,
    /// `(face index, incidence)`; faces of flipped orbits are omitted.
    pub faces: Vec<(usize, i64)>,
}

#[derive(Clone, Debug)]
pub struct QuotientBall {
    pub flavor: GroupFlavor,
    pub radius: usize,
    pub cells: Vec<Vec<QuotientCell>>,
}

/// Orbit representatives of the cells within quotient distance `radius` of
/// the base vertex.
pub fn quotient_ball(ctx: &BundleContext, radius: usize, flavor: GroupFlavor) -> Result<QuotientBall> {
    if radius > 6 {
        return Err(Error::ResourceCap("quotient radius is limited to 6".into()));
    }
    let mut loc = Locator {
        ctx,
        flavor,
        reps: Vec::new(),
        by_label: BTreeMap::new(),
        by_orbit: BTreeMap::new(),
        classes: BTreeMap::new(),
        to_label: BTreeMap::new(),
        located: BTreeMap::new(),
    };
    loc.register(ctx.building.base(), 0);
    let mut head = 0;
    while head < loc.reps.len() {
        let (v, depth) = (loc.reps[head].vertex.clone(), loc.reps[head].depth);
        head += 1;
        if depth == radius {
            continue;
        }
        for (i, tree) in ctx.trees().iter().enumerate() {
            for x in tree.link(&v[i]) {
                let mut w = v.clone();
                w[i] = x;
                if loc.locate(&w).is_none() {
                    loc.register(w, depth + 1);
                }
            }
        }
    }
    let s = ctx.s();
    // Higher cells, keyed canonically.
    let mut keys: Vec<BTreeMap<CubeKey, (i64, bool)>> = vec![BTreeMap::new(); s + 1];
    for r in 0..loc.reps.len() {
        let v = loc.reps[r].vertex.clone();
        for mask in 1..1u64 << s {
            let dirs: Vec<usize> = (0..s).filter(|i| mask >> i & 1 == 1).collect();
            let sizes: Vec<u64> = dirs.iter().map(|i| ctx.trees()[*i].q_v() + 1).collect();
            let total: u64 = sizes.iter().product();
            for idx in 0..total {
                let mut x = idx;
                let tuple: Vec<u64> = sizes
                    .iter()
                    .map(|sz| {
                        let t = x % sz;
                        x /= sz;
                        t
                    })
                    .collect();
                let square = (flavor == GroupFlavor::Sl2).then_some(true);
                if loc.reps[r].data.canonical(&dirs, &tuple, square) != tuple {
                    continue;
                }
                let moves: Vec<(usize, TreeVertex)> =
                    dirs.iter().zip(&tuple).map(|(i, t)| (*i, ctx.trees()[*i].link(&v[*i])[*t as usize].clone())).collect();
                if let Some((key, _, flipped)) = loc.cube_key(&v, &moves) {
                    keys[dirs.len()].entry(key).or_insert((0, flipped));
                }
            }
        }
    }
    let mut cells: Vec<Vec<QuotientCell>> = vec![Vec::new(); s + 1];
    let lattices_of = |c: &BuildingCube| cube_lattices(c);
    for r in 0..loc.reps.len() {
        let v = loc.reps[r].vertex.clone();
        let end = ctx.vertex_end(&v);
        let stab = EndAlgebra::new(&ctx.k, &end).descriptor();
        cells[0].push(QuotientCell {
            dim: 0,
            cube: BuildingCube::vertex(v),
            anchor: r,
            depth: loc.reps[r].depth,
            classes: vec![loc.reps[r].class],
            parabolic: stab.is_parabolic(),
            stab,
            flipped: false,
            faces: Vec::new(),
        });
    }
    let index: Vec<BTreeMap<CubeKey, usize>> =
        keys.iter().map(|m| m.keys().enumerate().map(|(i, k)| (k.clone(), i)).collect()).collect();
    for d in 1..=s {
        for (key, (_, flipped)) in keys[d].clone() {
            let (v, moves) = loc.key_cube(&key);
            let cube = BuildingCube::spanned(&v, &moves);
            let end = ctx.end_space(&lattices_of(&cube));
            let stab = EndAlgebra::new(&ctx.k, &end).descriptor();
            let mut classes = Vec::new();
            let mut depth = 0;
            for c in cube.corners() {
                let l = loc.locate(&c).unwrap();
                classes.push(loc.reps[l.rep].class);
                depth = depth.max(loc.reps[l.rep].depth);
            }
            classes.sort();
            classes.dedup();
            let mut faces: BTreeMap<usize, i64> = BTreeMap::new();
            for (j, (i, x)) in moves.iter().enumerate() {
                let pos_sign = if j % 2 == 0 { 1 } else { -1 };
                for end_vertex in [&v[*i], x] {
                    let ends_odd = end_vertex.vertex_type() == 1;
                    let mut fv = v.clone();
                    fv[*i] = end_vertex.clone();
                    let rest: Vec<(usize, TreeVertex)> =
                        moves.iter().enumerate().filter(|(jj, _)| *jj != j).map(|(_, m)| m.clone()).collect();
                    let side = if ends_odd { 1 } else { -1 };
                    let (fidx, fsign, fflip) = if rest.is_empty() {
                        (loc.locate(&fv).unwrap().rep, 1, false)
                    } else {
                        let (fk, fs, ff) = loc.cube_key(&fv, &rest).unwrap();
                        (index[d - 1][&fk], fs, ff)
                    };
                    if !fflip {
                        *faces.entry(fidx).or_insert(0) += pos_sign * side * fsign;
                    }
                }
            }
            cells[d].push(QuotientCell {
                dim: d,
                cube,
                anchor: key.rep,
                depth,
                classes,
                parabolic: stab.is_parabolic(),
                stab,
                flipped,
                faces: faces.into_iter().filter(|(_, c)| *c != 0).collect(),
            });
        }
    }
    Ok(QuotientBall { flavor, radius, cells })
}

impl QuotientBall {
    pub fn count(&self, d: usize) -> usize {
        self.cells.get(d).map_or(0, Vec::len)
    }
    pub fn vertex_classes(&self) -> Vec<BundleClass> {
        self.cells[0].iter().map(|c| c.classes[0]).collect()
    }

    /// Orbit chains on the unflipped cells (restricted to parabolic cells if
    /// asked), as a chain complex together with the kept cell indices.
    pub fn chain_complex(&self, parabolic_only: bool) -> (ChainComplex, Vec<Vec<usize>>) {
        let keep: Vec<Vec<usize>> = self
            .cells
            .iter()
            .map(|l| (0..l.len()).filter(|&i| !l[i].flipped && (!parabolic_only || l[i].parabolic)).collect())
            .collect();
        let pos: Vec<BTreeMap<usize, usize>> =
            keep.iter().map(|l| l.iter().enumerate().map(|(a, b)| (*b, a)).collect()).collect();
        let dims: Vec<usize> = keep.iter().map(Vec::len).collect();
        let mut bds = Vec::new();
        for d in 1..self.cells.len() {
            let cols = keep[d]
                .iter()
                .map(|&c| {
                    self.cells[d][c]
                        .faces
                        .iter()
                        .map(|(f, s)| (*pos[d - 1].get(f).expect("faces of kept cells are kept"), *s))
                        .collect()
                })
                .collect();
            bds.push(SparseMatrix::from_columns(dims[d - 1], cols));
        }
        (ChainComplex::new(0, dims, bds).expect("orbit boundary squares to zero"), keep)
    }

    /// Connected components of the 1-skeleton (parabolic cells only if
    /// asked), including flipped edges.
    pub fn components(&self, parabolic_only: bool) -> usize {
        let n = self.count(0);
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        let mut comps = self.cells[0].iter().filter(|c| !parabolic_only || c.parabolic).count();
        if self.cells.len() > 1 {
            for e in &self.cells[1] {
                if parabolic_only && !e.parabolic {
                    continue;
                }
                let ends: Vec<usize> = self.edge_ends(e);
                let (a, b) = (find(&mut parent, ends[0]), find(&mut parent, ends[ends.len() - 1]));
                if a != b {
                    parent[a] = b;
                    comps -= 1;
                }
            }
        }
        comps
    }

    /// Vertex orbits at the ends of an edge orbit.
    pub fn edge_ends(&self, e: &QuotientCell) -> Vec<usize> {
        if !e.faces.is_empty() {
            return e.faces.iter().map(|f| f.0).collect();
        }
        // Flipped or loop: both ends in the anchor orbit.
        vec![e.anchor]
    }
}
