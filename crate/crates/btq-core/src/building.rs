//! The product of the trees at the punctures, as a cubical complex.
//!
//! A cube is stored as its lexicographically least corner (`base`), the
//! sorted set of moving directions and, per direction, the other endpoint of
//! the edge. Since the lexicographic minimum of a product of edges is taken
//! componentwise, the base is the componentwise smaller endpoint.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::complex::{orbit_quotient, DeltaComplex, SimplicialComplex};
use crate::exact::{ChainComplex, SparseMatrix};
use crate::tree::{Tree, TreeVertex};

pub type BuildingVertex = Vec<TreeVertex>;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BuildingCube {
    pub base: BuildingVertex,
    pub dirs: Vec<usize>,
    /// Other endpoint in each direction of `dirs`.
    pub choices: Vec<TreeVertex>,
}

impl BuildingCube {
    pub fn vertex(v: BuildingVertex) -> BuildingCube {
        BuildingCube { base: v, dirs: Vec::new(), choices: Vec::new() }
    }
    pub fn dim(&self) -> usize {
        self.dirs.len()
    }
    /// Builds the canonical cube spanned at `v` by the edges `v_i -- w_i`.
    pub fn spanned(v: &BuildingVertex, moves: &[(usize, TreeVertex)]) -> BuildingCube {
        let mut moves = moves.to_vec();
        moves.sort_by_key(|m| m.0);
        let mut base = v.clone();
        let mut choices = Vec::new();
        for (i, w) in &moves {
            if *w < base[*i] {
                choices.push(core::mem::replace(&mut base[*i], w.clone()));
            } else {
                choices.push(w.clone());
            }
        }
        BuildingCube { base, dirs: moves.iter().map(|m| m.0).collect(), choices }
    }
    /// Corner for the subset `mask` of `dirs` (bit `j` = direction `dirs[j]`
    /// at its far endpoint).
    pub fn corner(&self, mask: u64) -> BuildingVertex {
        let mut v = self.base.clone();
        for (j, &i) in self.dirs.iter().enumerate() {
            if mask >> j & 1 == 1 {
                v[i] = self.choices[j].clone();
            }
        }
        v
    }
    pub fn corners(&self) -> Vec<BuildingVertex> {
        (0..1u64 << self.dim()).map(|m| self.corner(m)).collect()
    }
    /// The codimension-one face dropping `dirs[j]`, at the base side
    /// (`far = false`) or the far side.
    pub fn face(&self, j: usize, far: bool) -> BuildingCube {
        let mut base = self.base.clone();
        if far {
            base[self.dirs[j]] = self.choices[j].clone();
        }
        let mut dirs = self.dirs.clone();
        let mut choices = self.choices.clone();
        dirs.remove(j);
        choices.remove(j);
        BuildingCube { base, dirs, choices }
    }
}

/// The building of a list of trees (one per puncture).
#[derive(Clone, Debug)]
pub struct Building {
    pub trees: Vec<Tree>,
}

/// A finite cubical complex with cubes grouped by dimension.
#[derive(Clone, Debug, Default)]
pub struct CubeComplex {
    pub vertices: Vec<BuildingVertex>,
    pub cubes: Vec<Vec<BuildingCube>>,
}

impl CubeComplex {
    pub fn count(&self, d: usize) -> usize {
        self.cubes.get(d).map_or(0, Vec::len)
    }
    pub fn index(&self) -> Vec<BTreeMap<&BuildingCube, usize>> {
        self.cubes.iter().map(|l| l.iter().enumerate().map(|(i, c)| (c, i)).collect()).collect()
    }
    /// Whether every face of every cube is present.
    pub fn is_closed(&self) -> bool {
        let idx = self.index();
        self.cubes.iter().enumerate().skip(1).all(|(d, l)| {
            l.iter().all(|c| (0..d).all(|j| [false, true].iter().all(|&f| idx[d - 1].contains_key(&c.face(j, f)))))
        })
    }
    /// Cellular chains with `∂c = Σ_j (-1)^j (far face_j - base face_j)`.
    pub fn chain_complex(&self) -> ChainComplex {
        let idx = self.index();
        let dims: Vec<usize> = self.cubes.iter().map(Vec::len).collect();
        let mut bds = Vec::new();
        for d in 1..self.cubes.len() {
            let cols = self.cubes[d]
                .iter()
                .map(|c| {
                    let mut col: Vec<(usize, i64)> = Vec::new();
                    for j in 0..d {
                        let s = if j % 2 == 0 { 1 } else { -1 };
                        col.push((idx[d - 1][&c.face(j, true)], s));
                        col.push((idx[d - 1][&c.face(j, false)], -s));
                    }
                    col
                })
                .collect();
            bds.push(SparseMatrix::from_columns(dims[d - 1], cols));
        }
        ChainComplex::new(0, dims, bds).expect("cubical boundary squares to zero")
    }
}

/// The link of a building vertex: `s` groups of points, with one simplex per
/// choice of at most one point from each of a set of distinct groups.
#[derive(Clone, Debug)]
pub struct LinkComplex {
    pub groups: Vec<Vec<TreeVertex>>,
}

impl LinkComplex {
    /// Number of `n`-simplices: sum over `(n+1)`-subsets of groups of the
    /// product of their sizes.
    pub fn count(&self, n: usize) -> u64 {
        let sizes: Vec<u64> = self.groups.iter().map(|g| g.len() as u64).collect();
        // Elementary symmetric polynomial e_{n+1}(sizes).
        let mut e = vec![0u64; sizes.len() + 2];
        e[0] = 1;
        for &x in &sizes {
            for j in (1..e.len()).rev() {
                e[j] += e[j - 1] * x;
            }
        }
        e.get(n + 1).copied().unwrap_or(0)
    }
    /// Explicit simplicial complex with vertices numbered group by group.
    pub fn simplicial(&self) -> SimplicialComplex {
        let offsets: Vec<usize> =
            self.groups.iter().scan(0, |acc, g| Some(core::mem::replace(acc, *acc + g.len()))).collect();
        let total: usize = self.groups.iter().map(Vec::len).sum();
        // Facets: one point from every group.
        let mut facets = vec![Vec::new()];
        for (g, &off) in self.groups.iter().zip(&offsets) {
            facets = facets
                .into_iter()
                .flat_map(|f: Vec<usize>| {
                    (0..g.len()).map(move |x| {
                        let mut f = f.clone();
                        f.push(off + x);
                        f
                    })
                })
                .collect();
        }
        SimplicialComplex::from_facets(total, &facets)
    }
}

impl Building {
    pub fn new(trees: Vec<Tree>) -> Building {
        Building { trees }
    }
    pub fn s(&self) -> usize {
        self.trees.len()
    }
    pub fn base(&self) -> BuildingVertex {
        vec![TreeVertex::base(); self.s()]
    }
    /// L¹ distance.
    pub fn distance(&self, a: &BuildingVertex, b: &BuildingVertex) -> u64 {
        self.trees.iter().zip(a.iter().zip(b)).map(|(t, (x, y))| t.distance(x, y)).sum()
    }
    pub fn vertex_link(&self, v: &BuildingVertex) -> LinkComplex {
        LinkComplex { groups: self.trees.iter().zip(v).map(|(t, x)| t.link(x)).collect() }
    }

    /// All cubes whose corners lie within L¹ distance `r` of `center`.
    pub fn ball(&self, center: &BuildingVertex, r: u64) -> CubeComplex {
        let s = self.s();
        // Per-coordinate balls with distances.
        let per: Vec<Vec<(TreeVertex, u64)>> = self
            .trees
            .iter()
            .zip(center)
            .map(|(t, c)| t.ball(c, r).into_iter().map(|v| (v.clone(), t.distance(c, &v))).collect())
            .collect();
        let mut vertices: Vec<(BuildingVertex, u64)> = vec![(Vec::new(), 0)];
        for p in &per {
            let mut next = Vec::new();
            for (v, d) in &vertices {
                for (x, dx) in p {
                    if d + dx <= r {
                        let mut w = v.clone();
                        w.push(x.clone());
                        next.push((w, d + dx));
                    }
                }
            }
            vertices = next;
        }
        vertices.sort();
        let mut cubes: Vec<Vec<BuildingCube>> = vec![Vec::new(); s + 1];
        for (v, _) in &vertices {
            // Up-moves: neighbors larger than the current coordinate.
            let ups: Vec<Vec<TreeVertex>> = self
                .trees
                .iter()
                .zip(v)
                .map(|(t, x)| t.link(x).into_iter().filter(|w| w > x).collect())
                .collect();
            for mask in 0u64..1 << s {
                let dirs: Vec<usize> = (0..s).filter(|i| mask >> i & 1 == 1).collect();
                let mut combos: Vec<Vec<TreeVertex>> = vec![Vec::new()];
                for &i in &dirs {
                    combos = combos
                        .into_iter()
                        .flat_map(|c| {
                            ups[i].iter().map(move |w| {
                                let mut c = c.clone();
                                c.push(w.clone());
                                c
                            })
                        })
                        .collect();
                }
                for choices in combos {
                    let cube = BuildingCube { base: v.clone(), dirs: dirs.clone(), choices };
                    // The farthest corner takes each coordinate at its larger distance.
                    let far: u64 = (0..s)
                        .map(|i| {
                            let t = &self.trees[i];
                            match cube.dirs.iter().position(|&d| d == i) {
                                Some(j) => t.distance(&center[i], &v[i]).max(t.distance(&center[i], &cube.choices[j])),
                                None => t.distance(&center[i], &v[i]),
                            }
                        })
                        .sum();
                    if far <= r {
                        cubes[dirs.len()].push(cube);
                    }
                }
            }
        }
        while cubes.len() > 1 && cubes.last().unwrap().is_empty() {
            cubes.pop();
        }
        for l in cubes.iter_mut() {
            l.sort();
        }
        CubeComplex { vertices: vertices.into_iter().map(|(v, _)| v).collect(), cubes }
    }
}

/// Vertices `0_i = 2i` and `∞_i = 2i + 1`; simplices pick at most one of the
/// two per direction. This is the boundary of the `s`-dimensional
/// cross-polytope.
pub fn apartment_link(s: usize) -> SimplicialComplex {
    let mut facets = vec![Vec::new()];
    for i in 0..s {
        facets = facets
            .into_iter()
            .flat_map(|f: Vec<usize>| {
                [2 * i, 2 * i + 1].into_iter().map(move |x| {
                    let mut f = f.clone();
                    f.push(x);
                    f
                })
            })
            .collect();
    }
    SimplicialComplex::from_facets(2 * s, &facets)
}

/// The antipodal involution `0_i <-> ∞_i` on [`apartment_link`].
pub fn antipode(s: usize) -> Vec<usize> {
    (0..2 * s).map(|v| v ^ 1).collect()
}

/// The apartment link modulo the antipodal map. For `s = 1` this is a point.
pub fn antipodal_quotient(s: usize) -> DeltaComplex {
    orbit_quotient(&apartment_link(s), &[antipode(s)]).0
}

/// The cellular chain complex of the standard cell structure on `RP^n`
/// (one cell per dimension, boundaries alternating `0` and `2`).
pub fn standard_rp(n: usize) -> ChainComplex {
    let dims = vec![1; n + 1];
    let bds = (1..=n)
        .map(|d| {
            let x = if d % 2 == 0 { 2 } else { 0 };
            SparseMatrix::from_columns(1, vec![if x == 0 { Vec::new() } else { vec![(0, x)] }])
        })
        .collect();
    ChainComplex::new(0, dims, bds).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{Coeff, FgAbGroup, Field, Place};

    fn building(q: u32, places: &[&str]) -> Building {
        let k = Field::new(q).unwrap();
        Building::new(places.iter().map(|p| Tree::new(&k, Place::parse(p, &k).unwrap())).collect())
    }

    #[test]
    fn link_counts() {
        let b = building(2, &["t", "inf"]);
        let l = b.vertex_link(&b.base());
        assert_eq!((l.count(0), l.count(1), l.count(2)), (6, 9, 0));
        let b3 = building(2, &["t", "t+1", "inf"]);
        assert_eq!(b3.vertex_link(&b3.base()).count(2), 27);
        let sc = b3.vertex_link(&b3.base()).simplicial();
        assert_eq!((sc.count(0), sc.count(1), sc.count(2)), (9, 27, 27));
    }

    #[test]
    fn small_balls() {
        let b = building(2, &["t"]);
        let c = b.ball(&b.base(), 2);
        assert_eq!((c.count(0), c.count(1)), (10, 9));
        let b2 = building(2, &["t", "inf"]);
        let c = b2.ball(&b2.base(), 1);
        assert_eq!((c.count(0), c.count(1), c.count(2)), (7, 6, 0));
        assert_eq!(b2.ball(&b2.base(), 0).count(0), 1);
        assert!(c.is_closed());
    }

    #[test]
    fn rp2() {
        let h = antipodal_quotient(3).chain_complex().homology(Coeff::Z);
        assert_eq!(h, [FgAbGroup::free(1), FgAbGroup::cyclic(2), FgAbGroup::trivial()]);
        assert_eq!(h, standard_rp(2).homology(Coeff::Z));
    }
}
