//! Rational functions in `t` in canonical (reduced, monic denominator) form.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::poly::Poly;
use super::scalar::{Field, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    /// Canonicalizes `num / den`; panics on a zero denominator.
    pub fn new(num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "rational function with zero denominator");
        let field = num.field();
        if num.is_zero() {
            return RatFunc { num, den: Poly::one(field) };
        }
        let g = num.gcd(&den);
        let (mut n, mut d) = if g.is_one() { (num, den) } else { (num.div_exact(&g), den.div_exact(&g)) };
        if !d.is_monic() {
            let inv = d.lead().inv().expect("nonzero");
            n = n.scale(&inv);
            d = d.scale(&inv);
        }
        RatFunc { num: n, den: d }
    }

    pub fn from_poly(p: Poly) -> Self {
        let field = p.field();
        RatFunc { num: p, den: Poly::one(field) }
    }

    pub fn zero(field: Field) -> Self {
        Self::from_poly(Poly::zero(field))
    }

    pub fn one(field: Field) -> Self {
        Self::from_poly(Poly::one(field))
    }

    pub fn constant(c: Scalar) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    pub fn t(field: Field) -> Self {
        Self::from_poly(Poly::t(field))
    }

    /// `t^n` for any integer `n`.
    pub fn t_pow(field: Field, n: i64) -> Self {
        if n >= 0 {
            Self::from_poly(Poly::monomial(field.one(), n as usize))
        } else {
            RatFunc { num: Poly::one(field), den: Poly::monomial(field.one(), n.unsigned_abs() as usize) }
        }
    }

    /// `(t - a)^n` for any integer `n`.
    pub fn linear_pow(a: &Scalar, n: i64) -> Self {
        let f = a.field();
        let base = Poly::linear(a).pow(n.unsigned_abs());
        if n >= 0 {
            Self::from_poly(base)
        } else {
            RatFunc { num: Poly::one(f), den: base }
        }
    }

    pub fn field(&self) -> Field {
        self.num.field()
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

    pub fn is_poly(&self) -> bool {
        self.den.is_one()
    }

    /// `deg num - deg den`; `None` for zero.
    pub fn degree(&self) -> Option<i64> {
        Some(self.num.degree()? as i64 - self.den.degree().unwrap() as i64)
    }

    /// Valuation at infinity, `deg den - deg num`; `None` for zero.
    pub fn val_inf(&self) -> Option<i64> {
        self.degree().map(|d| -d)
    }

    /// Order of vanishing at the finite point `a`; `None` for zero.
    pub fn val_at(&self, a: &Scalar) -> Option<i64> {
        if self.is_zero() {
            return None;
        }
        let n = self.num.taylor_shift(a).low_order().unwrap() as i64;
        let d = self.den.taylor_shift(a).low_order().unwrap() as i64;
        Some(n - d)
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        Some(RatFunc::new(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, other: &RatFunc) -> Option<Self> {
        Some(self * &other.inv()?)
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Self::zero(self.field());
        }
        RatFunc { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn mul_poly(&self, p: &Poly) -> Self {
        RatFunc::new(&self.num * p, self.den.clone())
    }

    pub fn pow(&self, e: i64) -> Self {
        let base = if e < 0 { self.inv().expect("inverse of zero") } else { self.clone() };
        RatFunc { num: base.num.pow(e.unsigned_abs()), den: base.den.pow(e.unsigned_abs()) }
    }

    /// Splits into polynomial part and proper part (`deg < 0`).
    pub fn split_proper(&self) -> (Poly, RatFunc) {
        let (q, r) = self.num.div_rem(&self.den);
        (q, RatFunc { num: r, den: self.den.clone() })
    }

    /// Value at a finite point where the function is regular.
    pub fn eval(&self, a: &Scalar) -> Option<Scalar> {
        let d = self.den.eval(a);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval(a).div(&d))
    }

    /// Substitution `t -> 1/t`.
    pub fn invert_variable(&self) -> Self {
        let n = self.num.degree().unwrap_or(0);
        let d = self.den.degree().unwrap_or(0);
        let m = n.max(d);
        RatFunc::new(self.num.reverse(n).shift(m - n), self.den.reverse(d).shift(m - d))
    }
}

impl<'a> Add<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return RatFunc::new(&self.num + &rhs.num, self.den.clone());
        }
        RatFunc::new(&(&self.num * &rhs.den) + &(&rhs.num * &self.den), &self.den * &rhs.den)
    }
}

impl<'a> Sub<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() || rhs.is_zero() {
            return RatFunc::zero(self.field());
        }
        if self.den.is_one() && rhs.den.is_one() {
            return RatFunc::from_poly(&self.num * &rhs.num);
        }
        RatFunc::new(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc { num: -&self.num, den: self.den.clone() }
    }
}

impl Add for RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: RatFunc) -> RatFunc {
        &self + &rhs
    }
}

impl Sub for RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: RatFunc) -> RatFunc {
        &self - &rhs
    }
}

impl Mul for RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: RatFunc) -> RatFunc {
        &self * &rhs
    }
}

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        -&self
    }
}

impl From<Poly> for RatFunc {
    fn from(p: Poly) -> Self {
        RatFunc::from_poly(p)
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form() {
        let f = Field::Rational;
        let a = RatFunc::new(Poly::from_ints(f, &[-2, 0, 2]), Poly::from_ints(f, &[2, 2]));
        assert_eq!(a.num(), &Poly::from_ints(f, &[-1, 1]));
        assert!(a.is_poly());
        let b = RatFunc::new(Poly::from_ints(f, &[1]), Poly::from_ints(f, &[0, 3]));
        assert!(b.den().is_monic());
        assert_eq!(b.degree(), Some(-1));
    }

    #[test]
    fn valuations() {
        let f = Field::Rational;
        let a = RatFunc::new(Poly::from_ints(f, &[0, 0, 1]), Poly::from_ints(f, &[-1, 1]).pow(3));
        assert_eq!(a.val_at(&f.int(0)), Some(2));
        assert_eq!(a.val_at(&f.int(1)), Some(-3));
        assert_eq!(a.val_inf(), Some(1));
        assert_eq!(a.invert_variable().val_at(&f.int(0)), Some(1));
    }
}
