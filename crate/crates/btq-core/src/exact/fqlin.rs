//! Dense linear algebra over a finite field. Matrices are row vectors of
//! field elements.

use alloc::vec;
use alloc::vec::Vec;

use super::field::Field;

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(k: &Field, m: &mut [Vec<u32>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| m[i][c] != 0) else { continue };
        m.swap(r, p);
        let inv = k.inv(m[r][c]);
        for x in m[r].iter_mut() {
            *x = k.mul(*x, inv);
        }
        for i in 0..rows {
            if i != r && m[i][c] != 0 {
                let f = m[i][c];
                for j in c..cols {
                    let s = k.mul(f, m[r][j]);
                    m[i][j] = k.sub(m[i][j], s);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(k: &Field, m: &[Vec<u32>]) -> usize {
    let mut a = m.to_vec();
    rref(k, &mut a).len()
}

/// Basis of `{x : m x = 0}` for a matrix with `cols` columns.
pub fn nullspace(k: &Field, m: &[Vec<u32>], cols: usize) -> Vec<Vec<u32>> {
    let mut a = m.to_vec();
    let pivots = rref(k, &mut a);
    let mut is_pivot = vec![false; cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut out = Vec::new();
    for f in (0..cols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![0u32; cols];
        v[f] = 1;
        for (r, &p) in pivots.iter().enumerate() {
            v[p] = k.neg(a[r][f]);
        }
        out.push(v);
    }
    out
}

/// Some solution of `m x = b`, if one exists.
pub fn solve(k: &Field, m: &[Vec<u32>], b: &[u32], cols: usize) -> Option<Vec<u32>> {
    let mut a: Vec<Vec<u32>> = m
        .iter()
        .zip(b)
        .map(|(row, &bi)| {
            let mut r = row.clone();
            r.push(bi);
            r
        })
        .collect();
    let pivots = rref(k, &mut a);
    if pivots.last() == Some(&cols) {
        return None;
    }
    let mut x = vec![0u32; cols];
    for (r, &p) in pivots.iter().enumerate() {
        x[p] = a[r][cols];
    }
    Some(x)
}

/// Coordinates of `v` in the span of `basis` (rows), if it lies there.
pub fn express(k: &Field, basis: &[Vec<u32>], v: &[u32]) -> Option<Vec<u32>> {
    let n = v.len();
    let cols = basis.len();
    let m: Vec<Vec<u32>> = (0..n).map(|i| basis.iter().map(|b| b[i]).collect()).collect();
    solve(k, &m, v, cols)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_and_solve() {
        let k = Field::new(5).unwrap();
        let m = vec![vec![1, 2, 3], vec![2, 4, 0]];
        let ns = nullspace(&k, &m, 3);
        assert_eq!(ns.len(), 1);
        for row in &m {
            let s = (0..3).fold(0, |acc, j| k.add(acc, k.mul(row[j], ns[0][j])));
            assert_eq!(s, 0);
        }
        let x = solve(&k, &m, &[1, 0], 3).unwrap();
        assert_eq!(k.add(k.add(x[0], k.mul(2, x[1])), k.mul(3, x[2])), 1);
        assert_eq!(rank(&k, &m), 2);
        assert!(solve(&k, &[vec![1, 1], vec![2, 2]], &[1, 0], 2).is_none());
    }
}
