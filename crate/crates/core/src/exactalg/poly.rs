//! Dense univariate polynomials over a [`Field`].

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};

use super::scalar::{Field, Scalar};
use crate::error::{Error, Result};

/// Coefficients are stored ascending; trailing zeros are always stripped, so
/// the zero polynomial has an empty coefficient list and degree `None`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    field: Field,
    coeffs: Vec<Scalar>,
}

impl Poly {
    pub fn new(field: Field, mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { field, coeffs }
    }

    pub fn zero(field: Field) -> Self {
        Poly { field, coeffs: Vec::new() }
    }

    pub fn one(field: Field) -> Self {
        Self::constant(field.one())
    }

    pub fn constant(c: Scalar) -> Self {
        let field = c.field();
        Self::new(field, vec![c])
    }

    /// The variable `t`.
    pub fn t(field: Field) -> Self {
        Self::monomial(field.one(), 1)
    }

    pub fn monomial(c: Scalar, n: usize) -> Self {
        let field = c.field();
        let mut coeffs = vec![field.zero(); n];
        coeffs.push(c);
        Self::new(field, coeffs)
    }

    /// `t - a`.
    pub fn linear(a: &Scalar) -> Self {
        let f = a.field();
        Self::new(f, vec![-a, f.one()])
    }

    pub fn from_ints(field: Field, cs: &[i64]) -> Self {
        Self::new(field, cs.iter().map(|&c| field.int(c)).collect())
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Scalar> {
        self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree as a signed integer, with `i64::MIN` for zero.
    pub fn deg(&self) -> i64 {
        self.degree().map_or(i64::MIN, |d| d as i64)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn coeff(&self, i: usize) -> Scalar {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn lead(&self) -> Scalar {
        self.coeffs.last().cloned().unwrap_or_else(|| self.field.zero())
    }

    /// Order of vanishing at `t = 0`; `None` for zero.
    pub fn low_order(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Self::zero(self.field);
        }
        Poly { field: self.field, coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    /// Multiplication by `t^n`.
    pub fn shift(&self, n: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![self.field.zero(); n];
        coeffs.extend(self.coeffs.iter().cloned());
        Poly { field: self.field, coeffs }
    }

    /// Drops the lowest `n` coefficients (exact division by `t^n` when they vanish).
    pub fn unshift(&self, n: usize) -> Self {
        Self::new(self.field, self.coeffs.iter().skip(n).cloned().collect())
    }

    /// Reduction modulo `t^n`.
    pub fn truncate(&self, n: usize) -> Self {
        Self::new(self.field, self.coeffs.iter().take(n).cloned().collect())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.lead().inv().expect("nonzero leading coefficient");
        self.scale(&inv)
    }

    pub fn is_monic(&self) -> bool {
        self.lead().is_one()
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        let mut acc = self.field.zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c * &self.field.int(i as i64)).collect();
        Self::new(self.field, coeffs)
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut acc = Self::one(self.field);
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &b;
            }
            b = &b * &b;
            e >>= 1;
        }
        acc
    }

    /// `p(t + a)`, the Taylor expansion at `a` in the variable `z = t - a`.
    pub fn taylor_shift(&self, a: &Scalar) -> Self {
        let mut out = Self::zero(self.field);
        let lin = Self::new(self.field, vec![a.clone(), self.field.one()]);
        for c in self.coeffs.iter().rev() {
            out = &(&out * &lin) + &Self::constant(c.clone());
        }
        out
    }

    /// `t^n p(1/t)` for `n >= deg p`.
    pub fn reverse(&self, n: usize) -> Self {
        let mut coeffs = vec![self.field.zero(); n + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[n - i] = c.clone();
        }
        Self::new(self.field, coeffs)
    }

    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let dd = d.coeffs.len() - 1;
        if self.coeffs.len() <= dd {
            return (Self::zero(self.field), self.clone());
        }
        let inv = d.lead().inv().expect("nonzero lead");
        let mut r = self.coeffs.clone();
        let mut q = vec![self.field.zero(); r.len() - dd];
        for i in (0..q.len()).rev() {
            let c = &r[i + dd] * &inv;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    r[i + j] = &r[i + j] - &(&c * dc);
                }
            }
            q[i] = c;
        }
        r.truncate(dd);
        (Self::new(self.field, q), Self::new(self.field, r))
    }

    pub fn rem(&self, d: &Poly) -> Poly {
        self.div_rem(d).1
    }

    /// Division that must be exact.
    pub fn div_exact(&self, d: &Poly) -> Poly {
        let (q, r) = self.div_rem(d);
        debug_assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b).monic();
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn lcm(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.field);
        }
        (self * other).div_exact(&self.gcd(other)).monic()
    }

    /// Extended gcd: returns `(g, s, u)` with `s*self + u*other = g`, `g` monic.
    pub fn xgcd(&self, other: &Poly) -> (Poly, Poly, Poly) {
        let f = self.field;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Self::one(f), Self::zero(f));
        let (mut u0, mut u1) = (Self::zero(f), Self::one(f));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            r0 = std::mem::replace(&mut r1, r);
            let s = &s0 - &(&q * &s1);
            s0 = std::mem::replace(&mut s1, s);
            let u = &u0 - &(&q * &u1);
            u0 = std::mem::replace(&mut u1, u);
        }
        if r0.is_zero() {
            return (r0, s0, u0);
        }
        let inv = r0.lead().inv().expect("nonzero");
        (r0.scale(&inv), s0.scale(&inv), u0.scale(&inv))
    }

    /// Power-series inverse modulo `t^n`; the constant term must be nonzero.
    pub fn series_inv(&self, n: usize) -> Option<Poly> {
        let c0 = self.coeff(0).inv()?;
        let f = self.field;
        let mut out = vec![f.zero(); n];
        if n == 0 {
            return Some(Self::zero(f));
        }
        out[0] = c0.clone();
        for i in 1..n {
            let mut acc = f.zero();
            for j in 1..=i.min(self.coeffs.len().saturating_sub(1)) {
                acc = &acc + &(&self.coeffs[j] * &out[i - j]);
            }
            out[i] = -&(&acc * &c0);
        }
        Some(Self::new(f, out))
    }

    /// Product truncated modulo `t^n`.
    pub fn mul_trunc(&self, other: &Poly, n: usize) -> Poly {
        let f = self.field;
        if self.is_zero() || other.is_zero() || n == 0 {
            return Self::zero(f);
        }
        let len = (self.coeffs.len() + other.coeffs.len() - 1).min(n);
        let mut out = vec![f.zero(); len];
        for (i, a) in self.coeffs.iter().enumerate().take(len) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(len - i) {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Self::new(f, out)
    }

    pub fn is_squarefree(&self) -> bool {
        if self.degree().unwrap_or(0) == 0 {
            return true;
        }
        self.gcd(&self.derivative()).degree() == Some(0)
    }

    /// The distinct roots lying in the base field, sorted, together with a flag
    /// telling whether every root of the polynomial (over the algebraic
    /// closure) is among them.
    pub fn rational_roots(&self) -> Result<(Vec<Scalar>, bool)> {
        if self.is_zero() {
            return Err(Error::InvalidInput("roots of the zero polynomial".into()));
        }
        let sqf = self.squarefree_part();
        let mut roots = match self.field {
            Field::Prime(p) => roots_fp(&sqf, p),
            Field::Rational => roots_q(&sqf)?,
        };
        roots.sort();
        roots.dedup();
        let complete = roots.len() == sqf.degree().unwrap_or(0);
        Ok((roots, complete))
    }

    /// Product of the distinct irreducible factors (characteristic-safe for the
    /// polynomials met here: falls back to the input when the derivative vanishes).
    pub fn squarefree_part(&self) -> Poly {
        let d = self.derivative();
        if d.is_zero() {
            return self.monic();
        }
        let g = self.gcd(&d);
        self.div_exact(&g).monic()
    }

    /// `self^e mod m`.
    pub fn pow_mod(&self, mut e: u64, m: &Poly) -> Poly {
        let mut acc = Self::one(self.field).rem(m);
        let mut b = self.rem(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = (&acc * &b).rem(m);
            }
            b = (&b * &b).rem(m);
            e >>= 1;
        }
        acc
    }
}

fn roots_fp(f: &Poly, p: u64) -> Vec<Scalar> {
    let field = f.field();
    if f.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    if p <= 4096 {
        return field.elements().into_iter().filter(|x| f.eval(x).is_zero()).collect();
    }
    // Isolate the split part gcd(f, t^p - t), then split by Cantor-Zassenhaus
    // with a deterministic sequence of shifts.
    let t = Poly::t(field);
    let tp = t.pow_mod(p, f);
    let g = f.gcd(&(&tp - &t));
    let mut out = Vec::new();
    let mut stack = vec![g];
    let mut delta = 0i64;
    while let Some(h) = stack.pop() {
        match h.degree() {
            None | Some(0) => {}
            Some(1) => out.push(-&h.monic().coeff(0)),
            Some(_) => loop {
                delta += 1;
                let shifted = &t + &Poly::constant(field.int(delta));
                let w = &shifted.pow_mod((p - 1) / 2, &h) - &Poly::one(field);
                let d = h.gcd(&w);
                let dd = d.degree().unwrap_or(0);
                if dd > 0 && dd < h.degree().unwrap() {
                    let other = h.div_exact(&d);
                    stack.push(d);
                    stack.push(other);
                    break;
                }
            },
        }
    }
    out
}

const DIVISOR_BUDGET: u64 = 1 << 40;

fn roots_q(f: &Poly) -> Result<Vec<Scalar>> {
    let field = f.field();
    let mut out = Vec::new();
    let mut g = f.clone();
    if let Some(k) = g.low_order() {
        if k > 0 {
            out.push(field.zero());
            g = g.unshift(k);
        }
    }
    if g.degree().unwrap_or(0) == 0 {
        return Ok(out);
    }
    // Clear denominators to a primitive integer polynomial.
    let mut den = BigInt::one();
    for c in g.coeffs() {
        if let Scalar::Q(q) = c {
            den = den.lcm(q.denom());
        }
    }
    let ints: Vec<BigInt> = g
        .coeffs()
        .iter()
        .map(|c| match c {
            Scalar::Q(q) => (q * BigRational::from_integer(den.clone())).to_integer(),
            Scalar::Fp { .. } => unreachable!(),
        })
        .collect();
    let a0 = ints[0].abs();
    let an = ints.last().unwrap().abs();
    let small = |n: &BigInt| n.to_u64().filter(|&v| v <= DIVISOR_BUDGET);
    let (Some(a0), Some(an)) = (small(&a0), small(&an)) else {
        return Err(Error::BudgetExceeded("rational root search coefficients too large".into()));
    };
    for p in divisors(a0) {
        for q in divisors(an) {
            for sign in [1i64, -1] {
                let cand = Scalar::Q(BigRational::new(BigInt::from(sign) * BigInt::from(p), BigInt::from(q)));
                if g.eval(&cand).is_zero() {
                    out.push(cand);
                }
            }
        }
    }
    Ok(out)
}

fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|i| &self.coeff(i) + &rhs.coeff(i)).collect();
        Poly::new(self.field, coeffs)
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|i| &self.coeff(i) - &rhs.coeff(i)).collect();
        Poly::new(self.field, coeffs)
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero(self.field);
        }
        let mut out = vec![self.field.zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Poly::new(self.field, out)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { field: self.field, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, rhs: Poly) -> Poly {
        &self + &rhs
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, rhs: Poly) -> Poly {
        &self - &rhs
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 if c.is_one() => write!(f, "t")?,
                1 => write!(f, "({c})*t")?,
                _ if c.is_one() => write!(f, "t^{i}")?,
                _ => write!(f, "({c})*t^{i}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(cs: &[i64]) -> Poly {
        Poly::from_ints(Field::Rational, cs)
    }

    #[test]
    fn division_identity() {
        let a = q(&[1, 2, 3, 4, 5]);
        let b = q(&[-1, 0, 2]);
        let (qq, r) = a.div_rem(&b);
        assert_eq!(&(&qq * &b) + &r, a);
        assert!(r.deg() < b.deg());
    }

    #[test]
    fn gcd_is_monic_common_factor() {
        let a = &q(&[1, 1]) * &q(&[2, 0, 1]);
        let b = &q(&[1, 1]) * &q(&[3, 1]);
        assert_eq!(a.gcd(&b), q(&[1, 1]));
        let (g, s, u) = a.xgcd(&b);
        assert_eq!(&(&s * &a) + &(&u * &b), g);
    }

    #[test]
    fn series_inverse() {
        let f = q(&[1, -1]);
        let inv = f.series_inv(5).unwrap();
        assert_eq!(inv, q(&[1, 1, 1, 1, 1]));
    }

    #[test]
    fn roots_over_q_and_fp() {
        let f = &(&q(&[-1, 2]) * &q(&[3, 1])) * &q(&[1, 0, 1]);
        let (roots, complete) = f.rational_roots().unwrap();
        assert_eq!(roots.len(), 2);
        assert!(!complete);
        let f7 = Field::prime(7).unwrap();
        let g = &Poly::from_ints(f7, &[-1, 0, 1]) * &Poly::from_ints(f7, &[0, 1]);
        let (roots, complete) = g.rational_roots().unwrap();
        assert_eq!(roots, vec![f7.int(0), f7.int(1), f7.int(6)]);
        assert!(complete);
    }

    #[test]
    fn large_prime_split() {
        let p = 1_000_003;
        let f = Field::prime(p).unwrap();
        let g = &(&Poly::from_ints(f, &[-5, 1]) * &Poly::from_ints(f, &[17, 1])) * &Poly::from_ints(f, &[2, 0, 0, 1]);
        let (roots, _) = g.rational_roots().unwrap();
        for r in &roots {
            assert!(g.eval(r).is_zero());
        }
        assert!(roots.contains(&f.int(5)));
        assert!(roots.contains(&f.int(-17)));
    }

    #[test]
    fn taylor_shift_roundtrip() {
        let f = q(&[3, -2, 0, 1]);
        let a = Field::Rational.int(2);
        let g = f.taylor_shift(&a);
        assert_eq!(g.coeff(0), f.eval(&a));
        assert_eq!(g.taylor_shift(&-&a), f);
    }
}
