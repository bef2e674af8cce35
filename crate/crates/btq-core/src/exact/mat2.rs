//! 2×2 matrices over `F_q(t)`.

use super::field::Field;
use super::poly::Poly;
use super::ratfunc::{Place, RatFunc};
use crate::error::{Error, Result};

/// `[[a, b], [c, d]]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mat2 {
    pub a: RatFunc,
    pub b: RatFunc,
    pub c: RatFunc,
    pub d: RatFunc,
}

impl Mat2 {
    pub fn new(a: RatFunc, b: RatFunc, c: RatFunc, d: RatFunc) -> Mat2 {
        Mat2 { a, b, c, d }
    }
    pub fn identity() -> Mat2 {
        Mat2::diag(RatFunc::one(), RatFunc::one())
    }
    pub fn diag(a: RatFunc, d: RatFunc) -> Mat2 {
        Mat2 { a, b: RatFunc::zero(), c: RatFunc::zero(), d }
    }
    pub fn from_polys(a: Poly, b: Poly, c: Poly, d: Poly) -> Mat2 {
        Mat2::new(RatFunc::from_poly(a), RatFunc::from_poly(b), RatFunc::from_poly(c), RatFunc::from_poly(d))
    }
    pub fn entries(&self) -> [&RatFunc; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }
    pub fn mul(&self, o: &Mat2, k: &Field) -> Mat2 {
        let dot = |x: &RatFunc, y: &RatFunc, z: &RatFunc, w: &RatFunc| x.mul(y, k).add(&z.mul(w, k), k);
        Mat2 {
            a: dot(&self.a, &o.a, &self.b, &o.c),
            b: dot(&self.a, &o.b, &self.b, &o.d),
            c: dot(&self.c, &o.a, &self.d, &o.c),
            d: dot(&self.c, &o.b, &self.d, &o.d),
        }
    }
    pub fn det(&self, k: &Field) -> RatFunc {
        self.a.mul(&self.d, k).sub(&self.b.mul(&self.c, k), k)
    }
    pub fn scale(&self, s: &RatFunc, k: &Field) -> Mat2 {
        Mat2 { a: self.a.mul(s, k), b: self.b.mul(s, k), c: self.c.mul(s, k), d: self.d.mul(s, k) }
    }
    pub fn inv(&self, k: &Field) -> Result<Mat2> {
        let det = self.det(k);
        if det.is_zero() {
            return Err(Error::Singular);
        }
        let di = det.inv(k)?;
        Ok(Mat2 { a: self.d.mul(&di, k), b: self.b.neg(k).mul(&di, k), c: self.c.neg(k).mul(&di, k), d: self.a.mul(&di, k) })
    }
    /// The adjugate `[[d, -b], [-c, a]]`.
    pub fn adjugate(&self, k: &Field) -> Mat2 {
        Mat2 { a: self.d.clone(), b: self.b.neg(k), c: self.c.neg(k), d: self.a.clone() }
    }
    pub fn is_zero(&self) -> bool {
        self.entries().iter().all(|x| x.is_zero())
    }
    /// Minimum valuation of the entries at `place` (`None` for the zero matrix).
    pub fn min_valuation(&self, place: &Place, k: &Field) -> Option<i64> {
        self.entries().iter().filter(|x| !x.is_zero()).map(|x| place.valuation(x, k).unwrap()).min()
    }
    pub fn add(&self, o: &Mat2, k: &Field) -> Mat2 {
        Mat2 { a: self.a.add(&o.a, k), b: self.b.add(&o.b, k), c: self.c.add(&o.c, k), d: self.d.add(&o.d, k) }
    }
    pub fn trace(&self, k: &Field) -> RatFunc {
        self.a.add(&self.d, k)
    }
}
