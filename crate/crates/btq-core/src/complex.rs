//! Finite simplicial and Δ-complexes and their cellular chain complexes.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use crate::exact::{ChainComplex, SparseMatrix};

/// A simplicial complex on vertices `0..n`, stored by dimension; every
/// simplex is a sorted vertex list and the set is closed under faces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    pub vertices: usize,
    pub simplices: Vec<Vec<Vec<usize>>>,
}

impl SimplicialComplex {
    /// Closure of the given facets.
    pub fn from_facets(vertices: usize, facets: &[Vec<usize>]) -> SimplicialComplex {
        let mut by_dim: Vec<BTreeSet<Vec<usize>>> = Vec::new();
        for f in facets {
            let mut f = f.clone();
            f.sort_unstable();
            f.dedup();
            let n = f.len();
            // Every nonempty subset.
            for mask in 1u64..(1u64 << n) {
                let s: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| f[i]).collect();
                let d = s.len() - 1;
                if by_dim.len() <= d {
                    by_dim.resize(d + 1, BTreeSet::new());
                }
                by_dim[d].insert(s);
            }
        }
        for v in 0..vertices {
            if by_dim.is_empty() {
                by_dim.push(BTreeSet::new());
            }
            by_dim[0].insert(vec![v]);
        }
        SimplicialComplex { vertices, simplices: by_dim.into_iter().map(|s| s.into_iter().collect()).collect() }
    }
    pub fn dim(&self) -> usize {
        self.simplices.len().saturating_sub(1)
    }
    pub fn count(&self, d: usize) -> usize {
        self.simplices.get(d).map_or(0, Vec::len)
    }
    /// Simplicial chain complex (degrees `0..=dim`), faces with sign `(-1)^j`.
    pub fn chain_complex(&self) -> ChainComplex {
        self.to_delta().chain_complex()
    }
    pub fn to_delta(&self) -> DeltaComplex {
        let index: Vec<BTreeMap<&Vec<usize>, usize>> =
            self.simplices.iter().map(|l| l.iter().enumerate().map(|(i, s)| (s, i)).collect()).collect();
        let mut faces = vec![vec![Vec::new(); self.count(0)]];
        for d in 1..self.simplices.len() {
            let f = self.simplices[d]
                .iter()
                .map(|s| {
                    (0..s.len())
                        .map(|j| {
                            let mut t = s.clone();
                            t.remove(j);
                            index[d - 1][&t]
                        })
                        .collect()
                })
                .collect();
            faces.push(f);
        }
        DeltaComplex { faces }
    }
    /// Barycentric subdivision: vertices are simplices (numbered by dimension
    /// then position), simplices are chains ordered by inclusion.
    pub fn barycentric(&self) -> (SimplicialComplex, Vec<(usize, usize)>) {
        let mut ids: BTreeMap<&Vec<usize>, usize> = BTreeMap::new();
        let mut names = Vec::new();
        for (d, l) in self.simplices.iter().enumerate() {
            for (i, s) in l.iter().enumerate() {
                ids.insert(s, names.len());
                names.push((d, i));
            }
        }
        // Maximal chains: build chains downward from every simplex.
        let mut facets = Vec::new();
        for l in &self.simplices {
            for s in l {
                let mut stack = vec![vec![s.clone()]];
                while let Some(chain) = stack.pop() {
                    let last = chain.last().unwrap();
                    if last.len() == 1 {
                        facets.push(chain.iter().map(|x| ids[x]).collect::<Vec<_>>());
                        continue;
                    }
                    for j in 0..last.len() {
                        let mut t = last.clone();
                        t.remove(j);
                        let mut c = chain.clone();
                        c.push(t);
                        stack.push(c);
                    }
                }
            }
        }
        (SimplicialComplex::from_facets(names.len(), &facets), names)
    }
}

/// A Δ-complex: `faces[n][c]` lists the `n + 1` faces (cells of dimension
/// `n - 1`) of the `c`-th `n`-cell in order; `faces[0]` has empty entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaComplex {
    pub faces: Vec<Vec<Vec<usize>>>,
}

impl DeltaComplex {
    pub fn count(&self, d: usize) -> usize {
        self.faces.get(d).map_or(0, Vec::len)
    }
    pub fn chain_complex(&self) -> ChainComplex {
        let dims: Vec<usize> = self.faces.iter().map(Vec::len).collect();
        let mut bds = Vec::new();
        for d in 1..self.faces.len() {
            let cols = self.faces[d]
                .iter()
                .map(|f| {
                    let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
                    for (j, &g) in f.iter().enumerate() {
                        *acc.entry(g).or_default() += if j % 2 == 0 { 1 } else { -1 };
                    }
                    acc.into_iter().filter(|&(_, x)| x != 0).collect()
                })
                .collect();
            bds.push(SparseMatrix::from_columns(dims[d - 1], cols));
        }
        ChainComplex::new(0, dims, bds).expect("Δ-complex boundaries compose to zero")
    }
}

/// Quotient of a simplicial complex by a group generated by vertex
/// permutations. Each orbit of simplices becomes one cell. The action must
/// preserve the vertex order inside every simplex it maps into the complex
/// (so orbit cells inherit a consistent orientation); if it does not, the
/// complex is barycentrically subdivided first, which always restores it.
/// Returns the quotient and whether subdivision happened.
pub fn orbit_quotient(sc: &SimplicialComplex, gens: &[Vec<usize>]) -> (DeltaComplex, bool) {
    if order_preserving(sc, gens) {
        return (quotient_ordered(sc, gens), false);
    }
    let (sd, names) = sc.barycentric();
    let index: BTreeMap<(usize, Vec<usize>), usize> = names
        .iter()
        .enumerate()
        .map(|(i, &(d, j))| ((d, sc.simplices[d][j].clone()), i))
        .collect();
    let lifted: Vec<Vec<usize>> = gens
        .iter()
        .map(|g| {
            names
                .iter()
                .map(|&(d, j)| {
                    let mut img: Vec<usize> = sc.simplices[d][j].iter().map(|&v| g[v]).collect();
                    img.sort_unstable();
                    index[&(d, img)]
                })
                .collect()
        })
        .collect();
    debug_assert!(order_preserving(&sd, &lifted));
    (quotient_ordered(&sd, &lifted), true)
}

fn order_preserving(sc: &SimplicialComplex, gens: &[Vec<usize>]) -> bool {
    gens.iter().all(|g| {
        sc.simplices.iter().flatten().all(|s| {
            let img: Vec<usize> = s.iter().map(|&v| g[v]).collect();
            img.windows(2).all(|w| w[0] < w[1])
        })
    })
}

fn quotient_ordered(sc: &SimplicialComplex, gens: &[Vec<usize>]) -> DeltaComplex {
    // Orbit representative = the lexicographically least image.
    let mut rep_of: Vec<BTreeMap<Vec<usize>, usize>> = Vec::new();
    let mut reps: Vec<Vec<Vec<usize>>> = Vec::new();
    for l in &sc.simplices {
        let mut map = BTreeMap::new();
        let mut rl = Vec::new();
        for s in l {
            if map.contains_key(s) {
                continue;
            }
            let mut orbit = BTreeSet::from([s.clone()]);
            let mut todo = vec![s.clone()];
            while let Some(x) = todo.pop() {
                for g in gens {
                    let y: Vec<usize> = x.iter().map(|&v| g[v]).collect();
                    if orbit.insert(y.clone()) {
                        todo.push(y);
                    }
                }
            }
            let id = rl.len();
            rl.push(orbit.iter().next().unwrap().clone());
            for x in orbit {
                map.insert(x, id);
            }
        }
        rep_of.push(map);
        reps.push(rl);
    }
    let mut faces = vec![vec![Vec::new(); reps.first().map_or(0, Vec::len)]];
    for d in 1..reps.len() {
        faces.push(
            reps[d]
                .iter()
                .map(|s| {
                    (0..s.len())
                        .map(|j| {
                            let mut t = s.clone();
                            t.remove(j);
                            rep_of[d - 1][&t]
                        })
                        .collect()
                })
                .collect(),
        );
    }
    DeltaComplex { faces }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{Coeff, FgAbGroup};

    #[test]
    fn triangle_boundary_is_a_circle() {
        let sc = SimplicialComplex::from_facets(3, &[vec![0, 1], vec![1, 2], vec![0, 2]]);
        assert_eq!(sc.chain_complex().homology(Coeff::Z), [FgAbGroup::free(1), FgAbGroup::free(1)]);
        let (sd, _) = sc.barycentric();
        assert_eq!((sd.count(0), sd.count(1)), (6, 6));
        assert_eq!(sd.chain_complex().betti(), [1, 1]);
    }

    #[test]
    fn reflection_forces_subdivision() {
        // An edge with its endpoints swapped: the quotient is an interval.
        let sc = SimplicialComplex::from_facets(2, &[vec![0, 1]]);
        let (q, sub) = orbit_quotient(&sc, &[vec![1, 0]]);
        assert!(sub);
        assert_eq!(q.chain_complex().homology(Coeff::Z), [FgAbGroup::free(1), FgAbGroup::trivial()]);
    }
}
