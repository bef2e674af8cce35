//! Rational functions in `F_q(t)`, places of the projective line, valuations,
//! π-adic expansions and residue fields.

use alloc::string::String;
use alloc::vec::Vec;

use super::field::Field;
use super::poly::Poly;
use crate::error::{Error, Result};

/// A reduced fraction `num / den` with `den` monic. Zero is `0 / 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly, k: &Field) -> Result<RatFunc> {
        if den.is_zero() {
            return Err(Error::Invalid("zero denominator".into()));
        }
        if num.is_zero() {
            return Ok(RatFunc::zero());
        }
        let g = num.gcd(&den, k);
        let (mut n, mut d) = (num, den);
        if !g.is_one() {
            n = n.div_exact(&g, k);
            d = d.div_exact(&g, k);
        }
        let (l, d) = d.monic(k);
        Ok(RatFunc { num: n.scale(k.inv(l), k), den: d })
    }
    pub fn zero() -> RatFunc {
        RatFunc { num: Poly::zero(), den: Poly::one() }
    }
    pub fn one() -> RatFunc {
        RatFunc { num: Poly::one(), den: Poly::one() }
    }
    pub fn constant(c: u32) -> RatFunc {
        RatFunc { num: Poly::constant(c), den: Poly::one() }
    }
    pub fn t() -> RatFunc {
        RatFunc::from_poly(Poly::t())
    }
    pub fn from_poly(p: Poly) -> RatFunc {
        RatFunc { num: p, den: Poly::one() }
    }
    pub fn num(&self) -> &Poly {
        &self.num
    }
    pub fn den(&self) -> &Poly {
        &self.den
    }
    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }
    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }
    /// The constant value, if this is a constant.
    pub fn as_constant(&self) -> Option<u32> {
        (self.den.is_one() && self.num.is_constant()).then(|| self.num.coeff(0))
    }

    pub fn add(&self, o: &RatFunc, k: &Field) -> RatFunc {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            return RatFunc::new(self.num.add(&o.num, k), self.den.clone(), k).unwrap();
        }
        let n = self.num.mul(&o.den, k).add(&o.num.mul(&self.den, k), k);
        RatFunc::new(n, self.den.mul(&o.den, k), k).unwrap()
    }
    pub fn neg(&self, k: &Field) -> RatFunc {
        RatFunc { num: self.num.neg(k), den: self.den.clone() }
    }
    pub fn sub(&self, o: &RatFunc, k: &Field) -> RatFunc {
        self.add(&o.neg(k), k)
    }
    pub fn mul(&self, o: &RatFunc, k: &Field) -> RatFunc {
        if self.is_zero() || o.is_zero() {
            return RatFunc::zero();
        }
        // Cross-cancel first to keep degrees small.
        let g1 = self.num.gcd(&o.den, k);
        let g2 = o.num.gcd(&self.den, k);
        let n = self.num.div_exact(&g1, k).mul(&o.num.div_exact(&g2, k), k);
        let d = self.den.div_exact(&g2, k).mul(&o.den.div_exact(&g1, k), k);
        let (l, d) = d.monic(k);
        RatFunc { num: n.scale(k.inv(l), k), den: d }
    }
    pub fn scale(&self, c: u32, k: &Field) -> RatFunc {
        if c == 0 {
            return RatFunc::zero();
        }
        RatFunc { num: self.num.scale(c, k), den: self.den.clone() }
    }
    pub fn mul_poly(&self, p: &Poly, k: &Field) -> RatFunc {
        self.mul(&RatFunc::from_poly(p.clone()), k)
    }
    pub fn inv(&self, k: &Field) -> Result<RatFunc> {
        if self.is_zero() {
            return Err(Error::Invalid("inverse of zero".into()));
        }
        let (l, n) = self.num.monic(k);
        Ok(RatFunc { num: self.den.scale(k.inv(l), k), den: n })
    }
    pub fn div(&self, o: &RatFunc, k: &Field) -> Result<RatFunc> {
        Ok(self.mul(&o.inv(k)?, k))
    }
    pub fn pow(&self, n: i64, k: &Field) -> Result<RatFunc> {
        let base = if n < 0 { self.inv(k)? } else { self.clone() };
        let e = n.unsigned_abs();
        Ok(RatFunc { num: base.num.pow(e, k), den: base.den.pow(e, k) })
    }

    /// Discrete valuation at `place`.
    pub fn valuation(&self, place: &Place, k: &Field) -> Result<i64> {
        place.valuation(self, k)
    }

    /// The π-adic digits of `self` at `place` from index `v_P(self)` up to
    /// `upper - 1`. Digits are polynomials of degree `< deg P`; for the place
    /// at infinity the uniformizer is `1/t` and digits are constants.
    pub fn padic_expand(&self, place: &Place, upper: i64, k: &Field) -> Expansion {
        if self.is_zero() {
            return Expansion { start: upper, digits: Vec::new() };
        }
        let (v, g, h, pi) = place.chart(self, k);
        let n = upper - v;
        if n <= 0 {
            return Expansion { start: upper, digits: Vec::new() };
        }
        let pin = pi.pow(n as u64, k);
        let hinv = h.inv_mod(&pin, k).expect("denominator is a unit at the place");
        let mut u = g.mulmod(&hinv, &pin, k);
        let mut digits = Vec::with_capacity(n as usize);
        for _ in 0..n {
            let (q, r) = u.divrem(&pi, k);
            digits.push(r);
            u = q;
        }
        Expansion { start: v, digits }
    }

    pub fn display(&self, k: &Field) -> String {
        if self.den.is_one() {
            self.num.display(k, "t")
        } else {
            alloc::format!("({})/({})", self.num.display(k, "t"), self.den.display(k, "t"))
        }
    }
}

/// A dense run of π-adic digits starting at index `start`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expansion {
    pub start: i64,
    pub digits: Vec<Poly>,
}

impl Expansion {
    /// Digit at index `i` (zero outside the stored range).
    pub fn digit(&self, i: i64) -> Poly {
        if i < self.start {
            return Poly::zero();
        }
        self.digits.get((i - self.start) as usize).cloned().unwrap_or_else(Poly::zero)
    }
    /// Nonzero digits as `(index, digit)` pairs.
    pub fn nonzero(&self) -> impl Iterator<Item = (i64, &Poly)> {
        self.digits.iter().enumerate().filter(|(_, d)| !d.is_zero()).map(move |(i, d)| (self.start + i as i64, d))
    }
}

/// A place of `F_q(t)`: a monic irreducible polynomial or the point at
/// infinity.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Place {
    Finite(Poly),
    Infinity,
}

impl Place {
    /// Checks that `p` is monic and irreducible.
    pub fn finite(p: Poly, k: &Field) -> Result<Place> {
        if !p.is_monic() || !p.is_irreducible(k) {
            return Err(Error::Invalid(alloc::format!("{} is not monic irreducible", p.display(k, "t"))));
        }
        Ok(Place::Finite(p))
    }
    /// Parses `inf` or a polynomial string.
    pub fn parse(s: &str, k: &Field) -> Result<Place> {
        let s = s.trim();
        if s == "inf" || s == "∞" || s == "infinity" {
            return Ok(Place::Infinity);
        }
        Place::finite(Poly::parse(s, k, 't')?, k)
    }
    pub fn degree(&self) -> usize {
        match self {
            Place::Infinity => 1,
            Place::Finite(p) => p.deg().unwrap(),
        }
    }
    pub fn is_infinity(&self) -> bool {
        matches!(self, Place::Infinity)
    }
    /// `q^deg`, the size of the residue field.
    pub fn residue_size(&self, k: &Field) -> u64 {
        (k.q() as u64).pow(self.degree() as u32)
    }
    pub fn uniformizer(&self) -> RatFunc {
        match self {
            Place::Infinity => RatFunc { num: Poly::one(), den: Poly::t() },
            Place::Finite(p) => RatFunc::from_poly(p.clone()),
        }
    }
    /// `digit * π^i` as a rational function.
    pub fn lift(&self, digit: &Poly, i: i64, k: &Field) -> RatFunc {
        if digit.is_zero() {
            return RatFunc::zero();
        }
        let d = RatFunc::from_poly(digit.clone());
        d.mul(&self.uniformizer().pow(i, k).unwrap(), k)
    }
    pub fn valuation(&self, f: &RatFunc, k: &Field) -> Result<i64> {
        if f.is_zero() {
            return Err(Error::ZeroValuation);
        }
        Ok(match self {
            Place::Infinity => f.den.degree() - f.num.degree(),
            Place::Finite(p) => {
                let a = f.num.split_off(p, k).0;
                if a > 0 {
                    a
                } else {
                    -f.den.split_off(p, k).0
                }
            }
        })
    }
    /// Writes a nonzero `f` as `π^v g/h` with `g, h` prime to the local
    /// uniformizer `pi`, in the local chart (for infinity the chart variable
    /// is `s = 1/t`). Returns `(v, g, h, pi)`.
    fn chart(&self, f: &RatFunc, k: &Field) -> (i64, Poly, Poly, Poly) {
        match self {
            Place::Finite(p) => {
                let (a, g) = f.num.split_off(p, k);
                let (b, h) = f.den.split_off(p, k);
                (a - b, g, h, p.clone())
            }
            Place::Infinity => {
                let dn = f.num.deg().unwrap();
                let dd = f.den.deg().unwrap();
                (dd as i64 - dn as i64, f.num.reverse(dn), f.den.reverse(dd), Poly::t())
            }
        }
    }
    pub fn residue_field(&self, k: &Field) -> ResidueField {
        let modulus = match self {
            Place::Infinity => Poly::t(),
            Place::Finite(p) => p.clone(),
        };
        ResidueField { k: k.clone(), d: self.degree(), modulus }
    }
    pub fn display(&self, k: &Field) -> String {
        match self {
            Place::Infinity => "inf".into(),
            Place::Finite(p) => p.display(k, "t"),
        }
    }
}

/// The residue field `F_q[t]/(π)` with elements stored as polynomials of
/// degree `< deg π` and indexed by their base-`q` digits.
#[derive(Clone, Debug)]
pub struct ResidueField {
    k: Field,
    d: usize,
    modulus: Poly,
}

impl ResidueField {
    pub fn size(&self) -> u64 {
        (self.k.q() as u64).pow(self.d as u32)
    }
    pub fn base(&self) -> &Field {
        &self.k
    }
    pub fn element(&self, idx: u64) -> Poly {
        Poly::from_index(&self.k, idx, self.d)
    }
    pub fn index(&self, x: &Poly) -> u64 {
        x.index(&self.k)
    }
    pub fn reduce(&self, x: &Poly) -> Poly {
        x.rem(&self.modulus, &self.k)
    }
    pub fn add(&self, a: &Poly, b: &Poly) -> Poly {
        a.add(b, &self.k)
    }
    pub fn sub(&self, a: &Poly, b: &Poly) -> Poly {
        a.sub(b, &self.k)
    }
    pub fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        a.mulmod(b, &self.modulus, &self.k)
    }
    pub fn inv(&self, a: &Poly) -> Option<Poly> {
        a.inv_mod(&self.modulus, &self.k)
    }
    pub fn elements(&self) -> impl Iterator<Item = Poly> + '_ {
        (0..self.size()).map(move |i| self.element(i))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rf(k: &Field, n: &[u32], d: &[u32]) -> RatFunc {
        RatFunc::new(Poly::from_coeffs(n.to_vec()), Poly::from_coeffs(d.to_vec()), k).unwrap()
    }

    #[test]
    fn valuations() {
        let k = Field::new(2).unwrap();
        let t = Place::Finite(Poly::t());
        // t^3/(t+1)
        let f = rf(&k, &[0, 0, 0, 1], &[1, 1]);
        assert_eq!(t.valuation(&f, &k), Ok(3));
        let g = rf(&k, &[1, 0, 1], &[0, 1]);
        assert_eq!(Place::Infinity.valuation(&g, &k), Ok(-1));
        let q = Place::finite(Poly::from_coeffs(alloc::vec![1, 1, 1]), &k).unwrap();
        assert_eq!(q.valuation(&rf(&k, &[1, 1, 1], &[1]), &k), Ok(1));
        assert_eq!(q.valuation(&RatFunc::zero(), &k), Err(Error::ZeroValuation));
    }

    #[test]
    fn expansions() {
        let k = Field::new(2).unwrap();
        let t = Place::Finite(Poly::t());
        let f = rf(&k, &[1], &[1, 1]);
        let e = f.padic_expand(&t, 3, &k);
        assert_eq!(e.start, 0);
        assert_eq!(e.digits, [Poly::one(), Poly::one(), Poly::one()]);
        let e = RatFunc::t().padic_expand(&t, 3, &k);
        assert_eq!((e.start, e.digits.len()), (1, 2));
        assert_eq!(e.digit(1), Poly::one());
        assert_eq!(e.digit(2), Poly::zero());
        let inv_t = rf(&k, &[1], &[0, 1]);
        let e = inv_t.padic_expand(&Place::Infinity, 2, &k);
        assert_eq!((e.start, e.digits.clone()), (1, alloc::vec![Poly::one()]));
    }
}
