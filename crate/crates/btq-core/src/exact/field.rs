//! Finite fields F_q with q = p^e.
//!
//! Elements are encoded as integers `0..q`: the coordinate vector
//! `(c_0, .., c_{e-1})` over F_p with respect to the power basis of a fixed
//! defining polynomial maps to `c_0 + c_1 p + .. + c_{e-1} p^{e-1}`. For prime
//! fields the encoding is the usual residue.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Defining polynomials (low to high coefficients, monic) for the extension
/// fields of order at most 64. These are the Conway polynomials.
const DEFINING: &[(u32, u32, &[u32])] = &[
    (2, 2, &[1, 1, 1]),
    (2, 3, &[1, 1, 0, 1]),
    (2, 4, &[1, 1, 0, 0, 1]),
    (2, 5, &[1, 0, 1, 0, 0, 1]),
    (2, 6, &[1, 1, 0, 1, 1, 0, 1]),
    (3, 2, &[2, 2, 1]),
    (3, 3, &[1, 2, 0, 1]),
    (5, 2, &[2, 4, 1]),
    (7, 2, &[3, 6, 1]),
];

/// Largest prime accepted for a prime field.
pub const MAX_PRIME: u32 = 1 << 15;

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits `q` as `p^e`, or `None` if `q` is not a prime power.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while q % p != 0 {
        p += 1;
    }
    let (mut r, mut e) = (q, 0);
    while r % p == 0 {
        r /= p;
        e += 1;
    }
    (r == 1).then_some((p, e))
}

#[derive(Debug)]
struct Data {
    p: u32,
    e: u32,
    q: u32,
    modulus: Vec<u32>,
    // Only populated for e > 1.
    add: Vec<u8>,
    mul: Vec<u8>,
    inv: Vec<u32>,
}

/// A finite field handle. Cloning is cheap.
#[derive(Clone, Debug)]
pub struct Field {
    d: Arc<Data>,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.d.q == other.d.q
    }
}
impl Eq for Field {}

/// An element of F_{p^e} spelled out by its coordinates over F_p.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FqElement {
    pub p: u32,
    pub e: u32,
    pub coords: Vec<u32>,
}

impl Field {
    /// The field with `q` elements. Prime fields up to [`MAX_PRIME`] and
    /// extension fields of order at most 64 are available.
    pub fn new(q: u32) -> Result<Field> {
        let (p, e) = prime_power(q).ok_or_else(|| Error::Invalid(alloc::format!("{q} is not a prime power")))?;
        if e == 1 {
            if p > MAX_PRIME {
                return Err(Error::Unsupported(alloc::format!("prime {p} too large")));
            }
            let mut inv = vec![0u32; p as usize];
            for a in 1..p {
                inv[a as usize] = pow_mod(a, p - 2, p);
            }
            return Ok(Field { d: Arc::new(Data { p, e, q, modulus: vec![0, 1], add: vec![], mul: vec![], inv }) });
        }
        let modulus = DEFINING
            .iter()
            .find(|(pp, ee, _)| *pp == p && *ee == e)
            .map(|(_, _, m)| m.to_vec())
            .ok_or_else(|| Error::Unsupported(alloc::format!("no defining polynomial for F_{q}")))?;
        let qs = q as usize;
        let mut add = vec![0u8; qs * qs];
        let mut mul = vec![0u8; qs * qs];
        for a in 0..q {
            let ca = digits(a, p, e);
            for b in 0..q {
                let cb = digits(b, p, e);
                let s: Vec<u32> = ca.iter().zip(&cb).map(|(x, y)| (x + y) % p).collect();
                add[a as usize * qs + b as usize] = undigits(&s, p) as u8;
                mul[a as usize * qs + b as usize] = undigits(&poly_mulmod(&ca, &cb, &modulus, p), p) as u8;
            }
        }
        let mut inv = vec![0u32; qs];
        for a in 1..qs {
            let b = (1..qs).find(|&b| mul[a * qs + b] == 1).ok_or_else(|| {
                Error::Invalid(alloc::format!("defining polynomial for F_{q} is reducible"))
            })?;
            inv[a] = b as u32;
        }
        Ok(Field { d: Arc::new(Data { p, e, q, modulus, add, mul, inv }) })
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.d.q
    }
    #[inline]
    pub fn p(&self) -> u32 {
        self.d.p
    }
    #[inline]
    pub fn degree(&self) -> u32 {
        self.d.e
    }
    pub fn is_prime_field(&self) -> bool {
        self.d.e == 1
    }
    /// The defining polynomial of the extension (low to high).
    pub fn modulus(&self) -> &[u32] {
        &self.d.modulus
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.d.e == 1 {
            let s = a + b;
            if s >= self.d.p { s - self.d.p } else { s }
        } else {
            self.d.add[(a * self.d.q + b) as usize] as u32
        }
    }
    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            return 0;
        }
        if self.d.e == 1 {
            self.d.p - a
        } else {
            let p = self.d.p;
            let c: Vec<u32> = digits(a, p, self.d.e).iter().map(|&x| (p - x) % p).collect();
            undigits(&c, p)
        }
    }
    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }
    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if self.d.e == 1 {
            ((a as u64 * b as u64) % self.d.p as u64) as u32
        } else {
            self.d.mul[(a * self.d.q + b) as usize] as u32
        }
    }
    /// Multiplicative inverse; panics on zero.
    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        assert!(a != 0, "inverse of zero");
        self.d.inv[a as usize]
    }
    #[inline]
    pub fn div(&self, a: u32, b: u32) -> u32 {
        self.mul(a, self.inv(b))
    }
    pub fn pow(&self, a: u32, mut n: u64) -> u32 {
        let (mut base, mut acc) = (a, 1u32);
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            n >>= 1;
        }
        acc
    }
    pub fn frobenius(&self, a: u32) -> u32 {
        self.pow(a, self.d.p as u64)
    }
    /// Image of an integer under Z -> F_p -> F_q.
    pub fn from_int(&self, n: i64) -> u32 {
        n.rem_euclid(self.d.p as i64) as u32
    }
    pub fn elements(&self) -> core::ops::Range<u32> {
        0..self.d.q
    }
    pub fn is_square(&self, a: u32) -> bool {
        a == 0 || self.elements().any(|x| self.mul(x, x) == a)
    }
    /// A generator of the multiplicative group.
    pub fn primitive_element(&self) -> u32 {
        let n = (self.d.q - 1) as u64;
        let primes: Vec<u64> = (2..=n).filter(|&d| n % d == 0 && is_prime(d as u32)).collect();
        (1..self.d.q)
            .find(|&g| primes.iter().all(|&r| self.pow(g, n / r) != 1))
            .unwrap_or(1)
    }
    pub fn element(&self, coords: &[u32]) -> u32 {
        let p = self.d.p;
        let mut v = 0;
        for &c in coords.iter().rev() {
            v = v * p + c % p;
        }
        v
    }
    pub fn to_element(&self, a: u32) -> FqElement {
        FqElement { p: self.d.p, e: self.d.e, coords: digits(a, self.d.p, self.d.e) }
    }
    pub fn from_element(&self, x: &FqElement) -> Result<u32> {
        if x.p != self.d.p || x.e != self.d.e {
            return Err(Error::Invalid("element of a different field".into()));
        }
        Ok(self.element(&x.coords))
    }
}

fn pow_mod(a: u32, mut n: u32, m: u32) -> u32 {
    let (mut b, mut acc) = (a as u64 % m as u64, 1u64);
    while n > 0 {
        if n & 1 == 1 {
            acc = acc * b % m as u64;
        }
        b = b * b % m as u64;
        n >>= 1;
    }
    acc as u32
}

fn digits(mut a: u32, p: u32, e: u32) -> Vec<u32> {
    let mut out = Vec::with_capacity(e as usize);
    for _ in 0..e {
        out.push(a % p);
        a /= p;
    }
    out
}

fn undigits(c: &[u32], p: u32) -> u32 {
    c.iter().rev().fold(0, |acc, &x| acc * p + x)
}

fn poly_mulmod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let e = m.len() - 1;
    let mut prod = vec![0u32; a.len() + b.len()];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    for k in (e..prod.len()).rev() {
        let c = prod[k];
        if c != 0 {
            for (j, &mj) in m.iter().enumerate().take(e) {
                let idx = k - e + j;
                prod[idx] = (prod[idx] + (p - c) * mj % p) % p;
            }
            prod[k] = 0;
        }
    }
    prod.truncate(e);
    prod
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_axioms_small() {
        for q in [2, 3, 4, 5, 7, 8, 9, 16, 25, 27, 32, 49, 64] {
            let k = Field::new(q).unwrap();
            for a in k.elements() {
                assert_eq!(k.add(a, k.neg(a)), 0);
                if a != 0 {
                    assert_eq!(k.mul(a, k.inv(a)), 1);
                }
                for b in k.elements().step_by(3) {
                    assert_eq!(k.frobenius(k.add(a, b)), k.add(k.frobenius(a), k.frobenius(b)));
                    for c in k.elements().step_by(5) {
                        assert_eq!(k.mul(a, k.add(b, c)), k.add(k.mul(a, b), k.mul(a, c)));
                        assert_eq!(k.mul(k.mul(a, b), c), k.mul(a, k.mul(b, c)));
                    }
                }
            }
            let g = k.primitive_element();
            let mut seen = alloc::collections::BTreeSet::new();
            let mut x = 1;
            for _ in 0..q - 1 {
                seen.insert(x);
                x = k.mul(x, g);
            }
            assert_eq!(seen.len() as u32, q - 1);
        }
    }

    #[test]
    fn rejects_non_prime_powers() {
        assert!(Field::new(6).is_err());
        assert!(Field::new(1).is_err());
        assert!(Field::new(81).is_err());
    }
}
