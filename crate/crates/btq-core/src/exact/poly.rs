//! Dense univariate polynomials over a [`Field`], coefficients low to high.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Write;

use super::field::Field;
use crate::error::{Error, Result};

/// A polynomial in `t`. The coefficient vector never has a trailing zero, so
/// the zero polynomial is the empty vector and equality is structural.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly(Vec<u32>);

impl Poly {
    pub fn zero() -> Poly {
        Poly(Vec::new())
    }
    pub fn one() -> Poly {
        Poly(vec![1])
    }
    pub fn constant(c: u32) -> Poly {
        Poly::from_coeffs(vec![c])
    }
    /// `c * t^d`.
    pub fn monomial(c: u32, d: usize) -> Poly {
        if c == 0 {
            return Poly::zero();
        }
        let mut v = vec![0; d + 1];
        v[d] = c;
        Poly(v)
    }
    /// The variable `t`.
    pub fn t() -> Poly {
        Poly(vec![0, 1])
    }
    pub fn from_coeffs(mut c: Vec<u32>) -> Poly {
        while c.last() == Some(&0) {
            c.pop();
        }
        Poly(c)
    }
    pub fn coeffs(&self) -> &[u32] {
        &self.0
    }
    pub fn coeff(&self, i: usize) -> u32 {
        self.0.get(i).copied().unwrap_or(0)
    }
    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }
    pub fn is_one(&self) -> bool {
        self.0 == [1]
    }
    /// Degree, or `None` for the zero polynomial.
    pub fn deg(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }
    /// Degree with `deg 0 = -1`, convenient for comparisons.
    pub fn degree(&self) -> i64 {
        self.0.len() as i64 - 1
    }
    pub fn lead(&self) -> u32 {
        self.0.last().copied().unwrap_or(0)
    }
    pub fn is_monic(&self) -> bool {
        self.lead() == 1
    }
    pub fn is_constant(&self) -> bool {
        self.0.len() <= 1
    }

    pub fn eval(&self, k: &Field, x: u32) -> u32 {
        self.0.iter().rev().fold(0, |acc, &c| k.add(k.mul(acc, x), c))
    }

    pub fn add(&self, o: &Poly, k: &Field) -> Poly {
        let n = self.0.len().max(o.0.len());
        Poly::from_coeffs((0..n).map(|i| k.add(self.coeff(i), o.coeff(i))).collect())
    }
    pub fn sub(&self, o: &Poly, k: &Field) -> Poly {
        let n = self.0.len().max(o.0.len());
        Poly::from_coeffs((0..n).map(|i| k.sub(self.coeff(i), o.coeff(i))).collect())
    }
    pub fn neg(&self, k: &Field) -> Poly {
        Poly(self.0.iter().map(|&c| k.neg(c)).collect())
    }
    pub fn scale(&self, c: u32, k: &Field) -> Poly {
        if c == 0 {
            return Poly::zero();
        }
        Poly(self.0.iter().map(|&x| k.mul(x, c)).collect())
    }
    /// Multiplication by `t^d`.
    pub fn shift(&self, d: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![0; d];
        v.extend_from_slice(&self.0);
        Poly(v)
    }
    pub fn mul(&self, o: &Poly, k: &Field) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![0u32; self.0.len() + o.0.len() - 1];
        if k.is_prime_field() {
            // Accumulate in u64 and reduce once per slot.
            let p = k.p() as u64;
            let mut acc = vec![0u64; out.len()];
            for (i, &a) in self.0.iter().enumerate() {
                if a == 0 {
                    continue;
                }
                for (j, &b) in o.0.iter().enumerate() {
                    let s = &mut acc[i + j];
                    *s += a as u64 * b as u64;
                    if *s >= 1 << 62 {
                        *s %= p;
                    }
                }
            }
            for (o, a) in out.iter_mut().zip(acc) {
                *o = (a % p) as u32;
            }
        } else {
            for (i, &a) in self.0.iter().enumerate() {
                if a == 0 {
                    continue;
                }
                for (j, &b) in o.0.iter().enumerate() {
                    out[i + j] = k.add(out[i + j], k.mul(a, b));
                }
            }
        }
        Poly::from_coeffs(out)
    }
    pub fn pow(&self, mut n: u64, k: &Field) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base, k);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base, k);
            }
        }
        acc
    }

    /// Euclidean division; panics if `d` is zero.
    pub fn divrem(&self, d: &Poly, k: &Field) -> (Poly, Poly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        if self.0.len() < d.0.len() {
            return (Poly::zero(), self.clone());
        }
        let dl = d.0.len();
        let inv = k.inv(d.lead());
        let mut r = self.0.clone();
        let mut quo = vec![0u32; r.len() - dl + 1];
        for i in (0..quo.len()).rev() {
            let c = r[i + dl - 1];
            if c == 0 {
                continue;
            }
            let f = k.mul(c, inv);
            quo[i] = f;
            for (j, &dj) in d.0.iter().enumerate() {
                r[i + j] = k.sub(r[i + j], k.mul(f, dj));
            }
        }
        r.truncate(dl - 1);
        (Poly::from_coeffs(quo), Poly::from_coeffs(r))
    }
    pub fn rem(&self, d: &Poly, k: &Field) -> Poly {
        self.divrem(d, k).1
    }
    /// Division that must be exact.
    pub fn div_exact(&self, d: &Poly, k: &Field) -> Poly {
        let (q, r) = self.divrem(d, k);
        debug_assert!(r.is_zero(), "inexact polynomial division");
        q
    }
    pub fn divides(&self, f: &Poly, k: &Field) -> bool {
        f.rem(self, k).is_zero()
    }
    /// `(lead, self / lead)`; the zero polynomial maps to `(0, 0)`.
    pub fn monic(&self, k: &Field) -> (u32, Poly) {
        if self.is_zero() {
            return (0, Poly::zero());
        }
        let l = self.lead();
        (l, self.scale(k.inv(l), k))
    }
    /// Monic gcd (zero if both inputs are zero).
    pub fn gcd(&self, o: &Poly, k: &Field) -> Poly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b, k);
            a = b;
            b = r;
        }
        a.monic(k).1
    }
    /// `(g, s, u)` with `g = s*self + u*o` and `g` the monic gcd.
    pub fn xgcd(&self, o: &Poly, k: &Field) -> (Poly, Poly, Poly) {
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (Poly::one(), Poly::zero());
        let (mut u0, mut u1) = (Poly::zero(), Poly::one());
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1, k);
            let s2 = s0.sub(&q.mul(&s1, k), k);
            let u2 = u0.sub(&q.mul(&u1, k), k);
            r0 = core::mem::replace(&mut r1, r);
            s0 = core::mem::replace(&mut s1, s2);
            u0 = core::mem::replace(&mut u1, u2);
        }
        if r0.is_zero() {
            return (r0, s0, u0);
        }
        let inv = k.inv(r0.lead());
        (r0.scale(inv, k), s0.scale(inv, k), u0.scale(inv, k))
    }
    /// Inverse modulo `m`, if it exists.
    pub fn inv_mod(&self, m: &Poly, k: &Field) -> Option<Poly> {
        let (g, s, _) = self.rem(m, k).xgcd(m, k);
        g.is_one().then(|| s.rem(m, k))
    }
    pub fn mulmod(&self, o: &Poly, m: &Poly, k: &Field) -> Poly {
        self.mul(o, k).rem(m, k)
    }
    pub fn powmod(&self, mut n: u64, m: &Poly, k: &Field) -> Poly {
        let mut base = self.rem(m, k);
        let mut acc = Poly::one().rem(m, k);
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mulmod(&base, m, k);
            }
            base = base.mulmod(&base, m, k);
            n >>= 1;
        }
        acc
    }
    pub fn derivative(&self, k: &Field) -> Poly {
        Poly::from_coeffs(
            self.0.iter().enumerate().skip(1).map(|(i, &c)| k.mul(k.from_int(i as i64), c)).collect(),
        )
    }
    /// `t^n * self(1/t)`; requires `n >= deg self`.
    pub fn reverse(&self, n: usize) -> Poly {
        let mut v = vec![0; n + 1];
        for (i, &c) in self.0.iter().enumerate() {
            v[n - i] = c;
        }
        Poly::from_coeffs(v)
    }
    /// Multiplicity of the irreducible `p` as a factor, and the cofactor.
    pub fn split_off(&self, p: &Poly, k: &Field) -> (i64, Poly) {
        assert!(!self.is_zero());
        let mut f = self.clone();
        let mut n = 0;
        loop {
            let (q, r) = f.divrem(p, k);
            if !r.is_zero() {
                return (n, f);
            }
            f = q;
            n += 1;
        }
    }

    /// Rabin's irreducibility test.
    pub fn is_irreducible(&self, k: &Field) -> bool {
        let n = match self.deg() {
            None | Some(0) => return false,
            Some(1) => return true,
            Some(n) => n,
        };
        let f = self.monic(k).1;
        let q = k.q() as u64;
        let t = Poly::t();
        // t^(q^j) mod f for j = 0..=n
        let mut frob = vec![t.clone()];
        for j in 0..n {
            let next = frob[j].powmod(q, &f, k);
            frob.push(next);
        }
        if frob[n] != t.rem(&f, k) {
            return false;
        }
        let mut m = n;
        let mut r = 2;
        while m > 1 {
            if m % r == 0 {
                let g = frob[n / r].sub(&t, k).gcd(&f, k);
                if !g.is_one() {
                    return false;
                }
                while m % r == 0 {
                    m /= r;
                }
            }
            r += 1;
        }
        true
    }

    /// Number of polynomials of degree `< d`, i.e. `q^d`.
    pub fn count_below(k: &Field, d: usize) -> u64 {
        (k.q() as u64).pow(d as u32)
    }
    /// The polynomial of degree `< d` with index `idx` in base-`q` digit
    /// order (coefficient of `t^i` is digit `i`). Inverse of [`Poly::index`].
    pub fn from_index(k: &Field, mut idx: u64, d: usize) -> Poly {
        let q = k.q() as u64;
        let mut c = Vec::with_capacity(d);
        for _ in 0..d {
            c.push((idx % q) as u32);
            idx /= q;
        }
        Poly::from_coeffs(c)
    }
    pub fn index(&self, k: &Field) -> u64 {
        let q = k.q() as u64;
        self.0.iter().rev().fold(0, |acc, &c| acc * q + c as u64)
    }
    /// All monic polynomials of exact degree `d`.
    pub fn monics(k: &Field, d: usize) -> impl Iterator<Item = Poly> + '_ {
        (0..Poly::count_below(k, d)).map(move |i| {
            let mut p = Poly::from_index(k, i, d).0;
            p.resize(d, 0);
            p.push(1);
            Poly(p)
        })
    }
    /// All monic irreducible polynomials of degree `d`, in index order.
    pub fn monic_irreducibles(k: &Field, d: usize) -> Vec<Poly> {
        Poly::monics(k, d).filter(|p| p.is_irreducible(k)).collect()
    }

    /// Renders with variable `var`; non-prime-field coefficients are written
    /// as `[code]`.
    pub fn display(&self, k: &Field, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (i, &c) in self.0.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !s.is_empty() {
                s.push('+');
            }
            let cs = if k.is_prime_field() { alloc::format!("{c}") } else { alloc::format!("[{c}]") };
            match (i, c) {
                (0, _) => s.push_str(&cs),
                (_, 1) => {}
                _ => s.push_str(&cs),
            }
            if i >= 1 {
                s.push_str(var);
                if i > 1 {
                    let _ = write!(s, "^{i}");
                }
            }
        }
        s
    }

    /// Parses strings such as `t^2+2t+1`, `t-1` or `[3]t+1`.
    pub fn parse(s: &str, k: &Field, var: char) -> Result<Poly> {
        let err = || Error::Invalid(alloc::format!("cannot parse polynomial {s:?}"));
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(err());
        }
        let mut acc = Poly::zero();
        let bytes: Vec<char> = s.chars().collect();
        let mut i = 0;
        while i < bytes.len() {
            let mut sign_neg = false;
            if bytes[i] == '+' || bytes[i] == '-' {
                sign_neg = bytes[i] == '-';
                i += 1;
            }
            let mut coeff: Option<u32> = None;
            if i < bytes.len() && bytes[i] == '[' {
                let end = bytes[i..].iter().position(|&c| c == ']').ok_or_else(err)? + i;
                let code: String = bytes[i + 1..end].iter().collect();
                let c: u32 = code.parse().map_err(|_| err())?;
                if c >= k.q() {
                    return Err(err());
                }
                coeff = Some(c);
                i = end + 1;
            } else {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if i > start {
                    let n: i64 = bytes[start..i].iter().collect::<String>().parse().map_err(|_| err())?;
                    coeff = Some(k.from_int(n));
                }
            }
            let mut exp = 0usize;
            if i < bytes.len() && bytes[i] == '*' {
                i += 1;
            }
            if i < bytes.len() && bytes[i] == var {
                i += 1;
                exp = 1;
                if i < bytes.len() && bytes[i] == '^' {
                    i += 1;
                    let start = i;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                    exp = bytes[start..i].iter().collect::<String>().parse().map_err(|_| err())?;
                }
            } else if coeff.is_none() {
                return Err(err());
            }
            let mut c = coeff.unwrap_or(1);
            if sign_neg {
                c = k.neg(c);
            }
            acc = acc.add(&Poly::monomial(c, exp), k);
            if i < bytes.len() && bytes[i] != '+' && bytes[i] != '-' {
                return Err(err());
            }
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn irreducible_counts() {
        // Necklace counts: (1/n) sum_{d|n} mu(d) q^(n/d).
        let k2 = Field::new(2).unwrap();
        let counts: Vec<usize> = (1..=5).map(|d| Poly::monic_irreducibles(&k2, d).len()).collect();
        assert_eq!(counts, [2, 1, 2, 3, 6]);
        let k3 = Field::new(3).unwrap();
        let counts: Vec<usize> = (1..=3).map(|d| Poly::monic_irreducibles(&k3, d).len()).collect();
        assert_eq!(counts, [3, 3, 8]);
        let k4 = Field::new(4).unwrap();
        assert_eq!(Poly::monic_irreducibles(&k4, 2).len(), 6);
    }

    #[test]
    fn parse_roundtrip() {
        let k = Field::new(3).unwrap();
        let p = Poly::parse("t^2+1", &k, 't').unwrap();
        assert_eq!(p, Poly::from_coeffs(vec![1, 0, 1]));
        assert_eq!(Poly::parse("t-1", &k, 't').unwrap(), Poly::from_coeffs(vec![2, 1]));
        assert_eq!(Poly::parse(&p.display(&k, "t"), &k, 't').unwrap(), p);
        assert!(Poly::parse("t^", &k, 't').is_err());
        assert!(Poly::parse("x+1", &k, 't').is_err());
    }

    #[test]
    fn xgcd_identity() {
        let k = Field::new(5).unwrap();
        let a = Poly::from_coeffs(vec![1, 2, 3, 4]);
        let b = Poly::from_coeffs(vec![3, 0, 1]);
        let (g, s, u) = a.xgcd(&b, &k);
        assert_eq!(s.mul(&a, &k).add(&u.mul(&b, &k), &k), g);
        assert!(g.divides(&a, &k) && g.divides(&b, &k));
    }
}
