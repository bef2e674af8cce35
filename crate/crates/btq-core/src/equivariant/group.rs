//! Finite groups as multiplication tables, element 0 the identity.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::exact::Field;

/// Largest order accepted for an explicit table.
pub const TABLE_CAP: usize = 32;

/// A 2×2 matrix over `F_q` as `[a, b, c, d]`.
pub type Mat = [u32; 4];

#[derive(Clone, Debug)]
pub enum GroupTag {
    Cyclic(usize),
    TorusNormalizer(u32),
    Gl2(u32),
    Sl2(u32),
    Table,
}

#[derive(Clone, Debug)]
pub struct FiniteGroup {
    pub name: String,
    pub tag: GroupTag,
    n: usize,
    mul: Vec<u32>,
    inv: Vec<usize>,
    /// Matrices of the elements, for the matrix groups.
    pub matrices: Option<(Field, Vec<Mat>)>,
}

impl FiniteGroup {
    fn from_law(name: String, tag: GroupTag, n: usize, law: impl Fn(usize, usize) -> usize) -> FiniteGroup {
        let mut mul = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                mul[a * n + b] = law(a, b) as u32;
            }
        }
        let inv = (0..n).map(|a| (0..n).find(|&b| mul[a * n + b] == 0).expect("inverse")).collect();
        FiniteGroup { name, tag, n, mul, inv, matrices: None }
    }

    /// An explicit multiplication table; the identity is moved to index 0
    /// and the group axioms are verified.
    pub fn from_table(table: &[Vec<usize>]) -> Result<FiniteGroup> {
        let n = table.len();
        if n == 0 || n > TABLE_CAP {
            return Err(Error::Invalid(alloc::format!("table order {n} outside 1..={TABLE_CAP}")));
        }
        if table.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
            return Err(Error::Invalid("table is not a closed n×n law".into()));
        }
        let e = (0..n)
            .find(|&e| (0..n).all(|a| table[e][a] == a && table[a][e] == a))
            .ok_or_else(|| Error::Invalid("no identity".into()))?;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::Invalid(alloc::format!("not associative at ({a},{b},{c})")));
                    }
                }
            }
            if !(0..n).any(|b| table[a][b] == e) {
                return Err(Error::Invalid(alloc::format!("element {a} has no inverse")));
            }
        }
        // Swap e and 0.
        let relabel = |x: usize| if x == e { 0 } else if x == 0 { e } else { x };
        Ok(FiniteGroup::from_law("table".into(), GroupTag::Table, n, |a, b| relabel(table[relabel(a)][relabel(b)])))
    }

    pub fn cyclic(m: usize) -> FiniteGroup {
        assert!(m >= 1);
        FiniteGroup::from_law(alloc::format!("Z/{m}"), GroupTag::Cyclic(m), m, |a, b| (a + b) % m)
    }

    /// `F_q^× ⋊ Z/2`, the generator of `Z/2` inverting the torus. Element
    /// `(i, e)` is `g^i w^e` for a primitive `g`, stored as `i + (q-1) e`.
    pub fn torus_normalizer(q: u32) -> Result<FiniteGroup> {
        Field::new(q)?;
        let m = q as usize - 1;
        Ok(FiniteGroup::from_law(alloc::format!("F{q}^x:Z/2"), GroupTag::TorusNormalizer(q), 2 * m, |a, b| {
            let (i, e) = (a % m, a / m);
            let (j, f) = (b % m, b / m);
            let j = if e == 1 { (m - j) % m } else { j };
            (i + j) % m + m * ((e + f) % 2)
        }))
    }

    fn matrix_group(name: String, tag: GroupTag, k: Field, mats: Vec<Mat>) -> FiniteGroup {
        let index: BTreeMap<Mat, usize> = mats.iter().enumerate().map(|(i, m)| (*m, i)).collect();
        let g = FiniteGroup::from_law(name, tag, mats.len(), |a, b| index[&mat_mul(&k, &mats[a], &mats[b])]);
        FiniteGroup { matrices: Some((k, mats)), ..g }
    }

    /// `GL_2(F_q)`, `q ≤ 5`.
    pub fn gl2(q: u32) -> Result<FiniteGroup> {
        let k = small_field(q)?;
        let mats = all_matrices(&k, |d| d != 0);
        Ok(FiniteGroup::matrix_group(alloc::format!("GL2(F{q})"), GroupTag::Gl2(q), k, mats))
    }

    /// `SL_2(F_q)`, `q ≤ 5`.
    pub fn sl2(q: u32) -> Result<FiniteGroup> {
        let k = small_field(q)?;
        let mats = all_matrices(&k, |d| d == 1);
        Ok(FiniteGroup::matrix_group(alloc::format!("SL2(F{q})"), GroupTag::Sl2(q), k, mats))
    }

    pub fn order(&self) -> usize {
        self.n
    }
    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.n + b] as usize
    }
    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }
    /// `g⁻¹ h g`.
    pub fn conj(&self, g: usize, h: usize) -> usize {
        self.mul(self.mul(self.inv(g), h), g)
    }
    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }
    /// The subgroup generated by `gens`, sorted (so 0 comes first).
    pub fn generated(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.n];
        seen[0] = true;
        let mut out = vec![0];
        let mut i = 0;
        while i < out.len() {
            let x = out[i];
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    out.push(y);
                }
            }
            i += 1;
        }
        out.sort_unstable();
        out
    }
    pub fn is_abelian(&self) -> bool {
        (0..self.n).all(|a| (0..self.n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }
    /// Index of a matrix in a matrix group.
    pub fn index_of(&self, m: &Mat) -> Option<usize> {
        self.matrices.as_ref()?.1.iter().position(|x| x == m)
    }
}

fn small_field(q: u32) -> Result<Field> {
    if q > 5 {
        return Err(Error::ResourceCap(alloc::format!("matrix groups over F_{q}: only q ≤ 5")));
    }
    Field::new(q)
}

fn all_matrices(k: &Field, det_ok: impl Fn(u32) -> bool) -> Vec<Mat> {
    let mut out = Vec::new();
    for a in k.elements() {
        for b in k.elements() {
            for c in k.elements() {
                for d in k.elements() {
                    if det_ok(k.sub(k.mul(a, d), k.mul(b, c))) {
                        out.push([a, b, c, d]);
                    }
                }
            }
        }
    }
    // Identity first.
    let id = out.iter().position(|m| *m == [1, 0, 0, 1]).expect("identity");
    out.swap(0, id);
    out
}

pub fn mat_mul(k: &Field, x: &Mat, y: &Mat) -> Mat {
    [
        k.add(k.mul(x[0], y[0]), k.mul(x[1], y[2])),
        k.add(k.mul(x[0], y[1]), k.mul(x[1], y[3])),
        k.add(k.mul(x[2], y[0]), k.mul(x[3], y[2])),
        k.add(k.mul(x[2], y[1]), k.mul(x[3], y[3])),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders() {
        assert_eq!(FiniteGroup::sl2(2).unwrap().order(), 6);
        assert_eq!(FiniteGroup::sl2(3).unwrap().order(), 24);
        assert_eq!(FiniteGroup::gl2(3).unwrap().order(), 48);
        assert_eq!(FiniteGroup::sl2(4).unwrap().order(), 60);
        assert_eq!(FiniteGroup::sl2(5).unwrap().order(), 120);
        let n = FiniteGroup::torus_normalizer(5).unwrap();
        assert_eq!(n.order(), 8);
        assert!(!n.is_abelian());
        assert!(FiniteGroup::torus_normalizer(3).unwrap().is_abelian());
    }

    #[test]
    fn table_identity_is_relabelled() {
        // Z/3 with identity stored at index 2.
        let t = vec![vec![1, 2, 0], vec![2, 0, 1], vec![0, 1, 2]];
        let g = FiniteGroup::from_table(&t).unwrap();
        assert_eq!(g.mul(0, 1), 1);
        assert_eq!(g.element_order(1), 3);
        let bad = vec![vec![0, 1], vec![1, 1]];
        assert!(FiniteGroup::from_table(&bad).is_err());
    }
}
