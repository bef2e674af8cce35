//! The Bruhat–Tits tree of `SL_2` at one place of `F_q(t)`.
//!
//! A vertex is the class of the lattice spanned by the columns of
//! `[[π^m, u], [0, 1]]`, with `u` a finite π-adic expansion truncated below
//! `π^m`. All coordinates are relative to the standard basis of `K²`.
//! Vertices are ordered by level, then by tail digits.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::exact::{Field, Mat2, Place, Poly, RatFunc, ResidueField};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TreeVertex {
    pub m: i64,
    /// Exponent → nonzero residue digit, every exponent `< m`.
    pub u: BTreeMap<i64, Poly>,
}

impl TreeVertex {
    pub fn base() -> TreeVertex {
        TreeVertex { m: 0, u: BTreeMap::new() }
    }
    /// `m mod 2`.
    pub fn vertex_type(&self) -> u8 {
        self.m.rem_euclid(2) as u8
    }
    /// The tail with all digits of exponent `>= level` dropped.
    pub fn truncated(&self, level: i64) -> BTreeMap<i64, Poly> {
        self.u.range(..level).map(|(i, d)| (*i, d.clone())).collect()
    }
}

/// A tree at a fixed place, with the arithmetic context needed for it.
#[derive(Clone, Debug)]
pub struct Tree {
    k: Field,
    place: Place,
    res: ResidueField,
}

impl Tree {
    pub fn new(k: &Field, place: Place) -> Tree {
        let res = place.residue_field(k);
        Tree { k: k.clone(), place, res }
    }
    pub fn field(&self) -> &Field {
        &self.k
    }
    pub fn place(&self) -> &Place {
        &self.place
    }
    pub fn residue_field(&self) -> &ResidueField {
        &self.res
    }
    /// Valence minus one.
    pub fn q_v(&self) -> u64 {
        self.res.size()
    }

    /// Canonical vertex of the column lattice of `m`.
    pub fn canonicalize(&self, m: &Mat2) -> Result<TreeVertex> {
        let k = &self.k;
        let det = m.det(k);
        if det.is_zero() {
            return Err(Error::Singular);
        }
        let v = |x: &RatFunc| if x.is_zero() { i64::MAX } else { self.place.valuation(x, k).unwrap() };
        // Column with the smaller bottom valuation goes second.
        let (top, bottom) = if v(&m.c) < v(&m.d) { (&m.a, &m.c) } else { (&m.b, &m.d) };
        let level = v(&det) - 2 * v(bottom);
        let u = top.div(bottom, k)?;
        Ok(TreeVertex { m: level, u: self.tail(&u, level) })
    }

    fn tail(&self, u: &RatFunc, level: i64) -> BTreeMap<i64, Poly> {
        u.padic_expand(&self.place, level, &self.k).nonzero().map(|(i, d)| (i, d.clone())).collect()
    }

    /// `Σ lift(digit) π^i`.
    pub fn tail_value(&self, u: &BTreeMap<i64, Poly>) -> RatFunc {
        u.iter().fold(RatFunc::zero(), |acc, (i, d)| acc.add(&self.place.lift(d, *i, &self.k), &self.k))
    }

    /// The representative `[[π^m, u], [0, 1]]`.
    pub fn matrix(&self, v: &TreeVertex) -> Mat2 {
        let pm = self.place.uniformizer().pow(v.m, &self.k).unwrap();
        Mat2::new(pm, self.tail_value(&v.u), RatFunc::zero(), RatFunc::one())
    }

    /// Whether the column lattices of `m1` and `m2` are homothetic, decided
    /// from `m1⁻¹ m2` alone.
    pub fn matrix_equivalent(&self, m1: &Mat2, m2: &Mat2) -> Result<bool> {
        let k = &self.k;
        let n = m1.inv(k)?.mul(m2, k);
        let det = n.det(k);
        if det.is_zero() {
            return Err(Error::Singular);
        }
        let mn = n.min_valuation(&self.place, k).unwrap();
        Ok(self.place.valuation(&det, k)? == 2 * mn)
    }

    /// The child reached through residue `x` (by index): `(m + 1, u + x π^m)`.
    pub fn child(&self, v: &TreeVertex, x: u64) -> TreeVertex {
        let mut u = v.u.clone();
        let d = self.res.element(x);
        if !d.is_zero() {
            u.insert(v.m, d);
        }
        TreeVertex { m: v.m + 1, u }
    }
    pub fn parent(&self, v: &TreeVertex) -> TreeVertex {
        TreeVertex { m: v.m - 1, u: v.truncated(v.m - 1) }
    }

    /// Neighbors in link order: children for residues `0, 1, ...`, then the
    /// parent (the point `∞` of the link).
    pub fn link(&self, v: &TreeVertex) -> Vec<TreeVertex> {
        let mut out: Vec<TreeVertex> = (0..self.q_v()).map(|x| self.child(v, x)).collect();
        out.push(self.parent(v));
        out
    }

    /// Position of the neighbor `w` in `link(v)`: the residue index for a
    /// child, `q_v` for the parent, `None` if not adjacent.
    pub fn link_position(&self, v: &TreeVertex, w: &TreeVertex) -> Option<u64> {
        if w.m == v.m + 1 && w.truncated(v.m) == v.u {
            return Some(w.u.get(&v.m).map_or(0, |d| self.res.index(d)));
        }
        if w.m == v.m - 1 && *w == self.parent(v) {
            return Some(self.q_v());
        }
        None
    }

    /// Closed-form graph distance.
    pub fn distance(&self, a: &TreeVertex, b: &TreeVertex) -> u64 {
        let mut meet = a.m.min(b.m);
        // First exponent where the tails differ.
        let keys: BTreeSet<i64> = a.u.keys().chain(b.u.keys()).copied().collect();
        for i in keys {
            if i >= meet {
                break;
            }
            if a.u.get(&i) != b.u.get(&i) {
                meet = i;
                break;
            }
        }
        ((a.m - meet) + (b.m - meet)) as u64
    }

    /// Reference distance by breadth-first search (bounded by `limit`).
    pub fn distance_bfs(&self, a: &TreeVertex, b: &TreeVertex, limit: u64) -> Option<u64> {
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::from([(a.clone(), 0u64)]);
        seen.insert(a.clone());
        while let Some((v, d)) = queue.pop_front() {
            if v == *b {
                return Some(d);
            }
            if d == limit {
                continue;
            }
            for w in self.link(&v) {
                if seen.insert(w.clone()) {
                    queue.push_back((w, d + 1));
                }
            }
        }
        None
    }

    /// All vertices within distance `r` of `center`, in BFS order. Panics if a
    /// vertex is reached twice at the same depth (which would be a cycle).
    pub fn ball(&self, center: &TreeVertex, r: u64) -> Vec<TreeVertex> {
        let mut out = alloc::vec![center.clone()];
        let mut frontier = alloc::vec![(center.clone(), None::<TreeVertex>)];
        for _ in 0..r {
            let mut next = Vec::new();
            for (v, from) in &frontier {
                for w in self.link(v) {
                    if Some(&w) != from.as_ref() {
                        next.push((w, Some(v.clone())));
                    }
                }
            }
            out.extend(next.iter().map(|(w, _)| w.clone()));
            frontier = next;
        }
        out
    }

    /// Label `(m,u)` with `u` written as a rational function of `t`.
    pub fn label(&self, v: &TreeVertex) -> String {
        alloc::format!("({},{})", v.m, self.tail_value(&v.u).display(&self.k))
    }
}

/// Distance between vertices of possibly different trees.
pub fn distance(a: (&Tree, &TreeVertex), b: (&Tree, &TreeVertex)) -> Result<u64> {
    if a.0.place != b.0.place || a.0.k != b.0.k {
        return Err(Error::DifferentPlaces);
    }
    Ok(a.0.distance(a.1, b.1))
}

/// `1 + (q+1)(q^r - 1)/(q - 1)`, saturating at `u64::MAX`.
pub fn ball_size(q: u64, r: u32) -> u64 {
    let mut total: u64 = 1;
    let mut sphere = q + 1;
    for _ in 0..r {
        total = total.saturating_add(sphere);
        sphere = sphere.saturating_mul(q);
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    fn at_t(q: u32) -> Tree {
        let k = Field::new(q).unwrap();
        Tree::new(&k, Place::finite(Poly::t(), &k).unwrap())
    }

    #[test]
    fn link_matrices() {
        let tr = at_t(2);
        let one = Poly::one;
        let z = Poly::zero;
        let v1 = tr.canonicalize(&Mat2::from_polys(Poly::t(), one(), z(), one())).unwrap();
        let v0 = tr.canonicalize(&Mat2::from_polys(Poly::t(), z(), z(), one())).unwrap();
        assert_eq!((v1.m, v1.u.len()), (1, 1));
        assert_eq!((v0.m, v0.u.len()), (1, 0));
        assert_ne!(v0, v1);
        assert_eq!(tr.canonicalize(&Mat2::identity()).unwrap(), TreeVertex::base());
        let link = tr.link(&TreeVertex::base());
        assert_eq!(link, [v0, v1, TreeVertex { m: -1, u: BTreeMap::new() }]);
    }

    #[test]
    fn distances() {
        let tr = at_t(3);
        let far = TreeVertex { m: 3, u: BTreeMap::new() };
        assert_eq!(tr.distance(&TreeVertex::base(), &far), 3);
        assert_eq!(tr.distance_bfs(&TreeVertex::base(), &far, 5), Some(3));
    }
}
