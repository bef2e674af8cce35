//! Finitely generated abelian groups: the value type of every homology
//! computation, presentations with canonical coordinates, and finite groups
//! recovered from an addition law.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::intmat::{snf, snf_factors, IntMatrix};

/// `Z^rank ⊕ Z/d_1 ⊕ ... ⊕ Z/d_k` with `1 < d_1 | d_2 | ... | d_k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FgAbGroup {
    rank: usize,
    torsion: Vec<BigInt>,
}

impl FgAbGroup {
    /// Normalizes arbitrary cyclic orders (zeros and ones allowed) into the
    /// invariant factor chain.
    pub fn new(rank: usize, orders: impl IntoIterator<Item = BigInt>) -> FgAbGroup {
        let mut rank = rank;
        let mut nz = Vec::new();
        for d in orders {
            let d = d.abs();
            if d.is_zero() {
                rank += 1;
            } else if !d.is_one() {
                nz.push(d);
            }
        }
        if nz.len() <= 1 {
            return FgAbGroup { rank, torsion: nz };
        }
        let n = nz.len();
        let mut m = IntMatrix::zeros(n, n);
        for (i, d) in nz.into_iter().enumerate() {
            m.set(i, i, d);
        }
        let torsion = snf_factors(&m).into_iter().filter(|d| !d.is_one()).collect();
        FgAbGroup { rank, torsion }
    }
    pub fn from_u64(rank: usize, orders: &[u64]) -> FgAbGroup {
        FgAbGroup::new(rank, orders.iter().map(|&d| BigInt::from(d)))
    }
    pub fn trivial() -> FgAbGroup {
        FgAbGroup { rank: 0, torsion: Vec::new() }
    }
    pub fn free(rank: usize) -> FgAbGroup {
        FgAbGroup { rank, torsion: Vec::new() }
    }
    pub fn cyclic(n: u64) -> FgAbGroup {
        FgAbGroup::from_u64(0, &[n])
    }
    pub fn rank(&self) -> usize {
        self.rank
    }
    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }
    pub fn torsion_u64(&self) -> Vec<u64> {
        self.torsion.iter().map(|d| d.to_u64().unwrap_or(u64::MAX)).collect()
    }
    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }
    pub fn is_finite(&self) -> bool {
        self.rank == 0
    }
    /// Order of a finite group.
    pub fn order(&self) -> Option<BigInt> {
        self.is_finite().then(|| self.torsion.iter().product())
    }
    /// Number of elements killed by `n` in the torsion part.
    pub fn torsion_killed_by(&self, n: u64) -> BigInt {
        let n = BigInt::from(n);
        self.torsion.iter().map(|d| d.gcd(&n)).product()
    }
    /// Tensoring with `Z[1/2]`: the 2-primary part of each factor is dropped.
    pub fn invert_two(&self) -> FgAbGroup {
        let two = BigInt::from(2);
        FgAbGroup::new(
            self.rank,
            self.torsion.iter().map(|d| {
                let mut d = d.clone();
                while d.is_even() {
                    d /= &two;
                }
                d
            }),
        )
    }
    pub fn direct_sum(&self, o: &FgAbGroup) -> FgAbGroup {
        FgAbGroup::new(self.rank + o.rank, self.torsion.iter().chain(&o.torsion).cloned())
    }
    /// Short human-readable form, e.g. `Z^2+Z/2+Z/6` or `0`.
    pub fn pretty(&self) -> String {
        let mut parts: Vec<String> = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(alloc::format!("Z^{r}")),
        }
        for d in &self.torsion {
            parts.push(alloc::format!("Z/{d}"));
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join("+")
        }
    }
}

impl fmt::Display for FgAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.pretty())
    }
}

/// An abelian group `Z^gens / (column span of relations)` together with a
/// coordinate change to its invariant factor decomposition.
#[derive(Clone, Debug)]
pub struct Presented {
    group: FgAbGroup,
    u: IntMatrix,
    // Per transformed coordinate: its cyclic order (0 for free), 1 = dropped.
    orders: Vec<BigInt>,
}

impl Presented {
    pub fn new(gens: usize, relations: &IntMatrix) -> Presented {
        assert_eq!(relations.rows(), gens);
        let s = snf(relations);
        let mut orders = vec![BigInt::zero(); gens];
        for (i, f) in s.factors.iter().enumerate() {
            orders[i] = f.clone();
        }
        let group = FgAbGroup::new(0, orders.iter().cloned());
        Presented { group, u: s.u, orders }
    }
    pub fn group(&self) -> &FgAbGroup {
        &self.group
    }
    pub fn generators(&self) -> usize {
        self.orders.len()
    }
    /// Canonical coordinates of the class of `x`: one entry per nontrivial
    /// cyclic factor (reduced into `[0, d)`), then one per free factor.
    /// Two vectors have the same class iff their canonical coordinates agree.
    pub fn canonical(&self, x: &[BigInt]) -> Vec<BigInt> {
        let y = self.u.mul_vec(x);
        let mut tors = Vec::new();
        let mut free = Vec::new();
        for (yi, d) in y.into_iter().zip(&self.orders) {
            if d.is_zero() {
                free.push(yi);
            } else if !d.is_one() {
                tors.push(yi.mod_floor(d));
            }
        }
        tors.extend(free);
        tors
    }
    pub fn canonical_i64(&self, x: &[i64]) -> Vec<BigInt> {
        let v: Vec<BigInt> = x.iter().map(|&a| BigInt::from(a)).collect();
        self.canonical(&v)
    }
    pub fn is_zero_class(&self, x: &[BigInt]) -> bool {
        self.canonical(x).iter().all(Zero::is_zero)
    }
}

/// A finite abelian group given by an addition law on `0..n` with identity
/// `0`, together with canonical coordinates for each element.
#[derive(Clone, Debug)]
pub struct FiniteAbelian {
    group: FgAbGroup,
    /// Greedy generators (as element indices).
    gens: Vec<usize>,
    /// Coefficients of each element in terms of `gens`.
    coeffs: Vec<Vec<i64>>,
    presented: Presented,
    by_canonical: BTreeMap<Vec<BigInt>, usize>,
}

impl FiniteAbelian {
    /// Recovers the structure from `add`; the table is assumed to be an
    /// abelian group law with identity `0` (checked on the generated closure).
    pub fn from_law(n: usize, add: impl Fn(usize, usize) -> usize) -> FiniteAbelian {
        assert!(n >= 1);
        let mut coeffs: Vec<Option<Vec<i64>>> = vec![None; n];
        coeffs[0] = Some(Vec::new());
        let mut members = vec![0usize];
        let mut gens: Vec<usize> = Vec::new();
        let mut rel_cols: Vec<Vec<i64>> = Vec::new();
        while members.len() < n {
            let g = (0..n).find(|&x| coeffs[x].is_none()).unwrap();
            let j = gens.len();
            gens.push(g);
            for c in coeffs.iter_mut().flatten() {
                c.push(0);
            }
            // Extend the subgroup by multiples of g until we land back inside.
            let base: Vec<usize> = members.clone();
            let mut mult = 1i64;
            let mut cur = g;
            loop {
                if let Some(c) = coeffs[cur].clone() {
                    // mult * g = element with coefficients c.
                    let mut rel = c;
                    rel[j] -= mult;
                    rel_cols.push(rel.iter().map(|x| -x).collect());
                    break;
                }
                for &h in &base {
                    let s = add(h, cur);
                    if coeffs[s].is_none() {
                        let mut c = coeffs[h].clone().unwrap();
                        c[j] += mult;
                        coeffs[s] = Some(c);
                        members.push(s);
                    }
                }
                mult += 1;
                cur = add(cur, g);
            }
        }
        let m = gens.len();
        let coeffs: Vec<Vec<i64>> = coeffs.into_iter().map(|c| {
            let mut c = c.unwrap();
            c.resize(m, 0);
            c
        }).collect();
        let mut rel = IntMatrix::zeros(m, rel_cols.len());
        for (j, col) in rel_cols.iter().enumerate() {
            for (i, &x) in col.iter().enumerate() {
                rel.set(i, j, BigInt::from(x));
            }
        }
        let presented = Presented::new(m, &rel);
        let group = presented.group().clone();
        let mut by_canonical = BTreeMap::new();
        for (x, c) in coeffs.iter().enumerate() {
            by_canonical.insert(presented.canonical_i64(c), x);
        }
        assert_eq!(by_canonical.len(), n, "addition law is not a group law");
        FiniteAbelian { group, gens, coeffs, presented, by_canonical }
    }
    pub fn group(&self) -> &FgAbGroup {
        &self.group
    }
    pub fn generators(&self) -> &[usize] {
        &self.gens
    }
    /// Canonical coordinates (one per invariant factor) of element `x`.
    pub fn coordinates(&self, x: usize) -> Vec<BigInt> {
        self.presented.canonical_i64(&self.coeffs[x])
    }
    /// The element with the given canonical coordinates.
    pub fn element(&self, coords: &[BigInt]) -> Option<usize> {
        self.by_canonical.get(coords).copied()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization() {
        let g = FgAbGroup::from_u64(1, &[2, 3, 4, 1, 0]);
        assert_eq!(g.rank(), 2);
        assert_eq!(g.torsion_u64(), [2, 12]);
        assert_eq!(g.pretty(), "Z^2+Z/2+Z/12");
        assert_eq!(g.invert_two().pretty(), "Z^2+Z/3");
        assert_eq!(FgAbGroup::trivial().pretty(), "0");
    }

    #[test]
    fn structure_from_law() {
        // Z/2 x Z/4 encoded as a + 2b with a in Z/2, b in Z/4.
        let add = |x: usize, y: usize| ((x % 2 + y % 2) % 2) + 2 * ((x / 2 + y / 2) % 4);
        let f = FiniteAbelian::from_law(8, add);
        assert_eq!(f.group().torsion_u64(), [2, 4]);
        for x in 0..8 {
            assert_eq!(f.element(&f.coordinates(x)), Some(x));
        }
        let c6 = FiniteAbelian::from_law(6, |x, y| (x + y) % 6);
        assert_eq!(c6.group().torsion_u64(), [6]);
    }

    #[test]
    fn presented_classes() {
        // Z^2 / <(2, 2)>  =  Z + Z/2
        let p = Presented::new(2, &IntMatrix::from_rows(&[[2], [2]]));
        assert_eq!(p.group().pretty(), "Z+Z/2");
        assert!(p.is_zero_class(&[BigInt::from(4), BigInt::from(4)]));
        assert!(!p.is_zero_class(&[BigInt::from(1), BigInt::from(1)]));
        assert_eq!(p.canonical_i64(&[3, 1]), p.canonical_i64(&[1, -1]));
    }
}
