//! Points of the projective line, their uniformisers, and truncated Laurent
//! expansions of rational functions.

use std::fmt;

use super::poly::Poly;
use super::ratfunc::RatFunc;
use super::scalar::{Field, Scalar};

/// A rational point of `P^1`. The uniformiser is `z = t - a` at a finite point
/// and `s = 1/t` at infinity.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CurvePoint {
    Finite(Scalar),
    Infinity,
}

impl CurvePoint {
    pub fn is_infinity(&self) -> bool {
        matches!(self, CurvePoint::Infinity)
    }

    /// The uniformiser as a function of `t`.
    pub fn uniformiser(&self, field: Field) -> RatFunc {
        self.z_pow(field, 1)
    }

    /// `z^n` as a function of `t`, any integer `n`.
    pub fn z_pow(&self, field: Field, n: i64) -> RatFunc {
        match self {
            CurvePoint::Finite(a) => RatFunc::linear_pow(a, n),
            CurvePoint::Infinity => RatFunc::t_pow(field, -n),
        }
    }

    /// A polynomial `v(z)` in the local coordinate, rewritten in `t`.
    pub fn local_to_t(&self, v: &Poly) -> RatFunc {
        match self {
            CurvePoint::Finite(a) => RatFunc::from_poly(v.taylor_shift(&-a)),
            CurvePoint::Infinity => RatFunc::from_poly(v.clone()).invert_variable(),
        }
    }

    /// A rational function of the local coordinate, rewritten in `t`.
    pub fn local_rat_to_t(&self, f: &RatFunc) -> RatFunc {
        let n = self.local_to_t(f.num());
        let d = self.local_to_t(f.den());
        n.div(&d).expect("nonzero denominator")
    }

    /// Order of vanishing of `f` at this point; `None` for zero.
    pub fn valuation(&self, f: &RatFunc) -> Option<i64> {
        match self {
            CurvePoint::Finite(a) => f.val_at(a),
            CurvePoint::Infinity => f.val_inf(),
        }
    }

    pub fn field_check(&self, field: Field) -> bool {
        match self {
            CurvePoint::Finite(a) => a.field() == field,
            CurvePoint::Infinity => true,
        }
    }
}

impl fmt::Display for CurvePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurvePoint::Finite(a) => write!(f, "t={a}"),
            CurvePoint::Infinity => write!(f, "inf"),
        }
    }
}

/// `sum_i coeffs[i] z^(start + i) + O(z^precision)` at `point`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentJet {
    pub point: CurvePoint,
    pub start: i64,
    pub coeffs: Vec<Scalar>,
    pub precision: i64,
    field: Field,
}

impl LaurentJet {
    pub fn field(&self) -> Field {
        self.field
    }

    /// True when the jet vanishes to the stated precision.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `z^e`; `e` must lie below the precision.
    pub fn coeff(&self, e: i64) -> Scalar {
        assert!(e < self.precision, "coefficient beyond jet precision");
        if e < self.start {
            return self.field.zero();
        }
        self.coeffs.get((e - self.start) as usize).cloned().unwrap_or_else(|| self.field.zero())
    }

    /// Valuation if visible within the precision.
    pub fn valuation(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.start)
    }

    /// Truncated product of two jets at the same point.
    pub fn mul(&self, other: &LaurentJet) -> LaurentJet {
        assert_eq!(self.point, other.point);
        let start = self.start + other.start;
        let precision = (self.precision + other.start).min(other.precision + self.start);
        let a = Poly::new(self.field, self.coeffs.clone());
        let b = Poly::new(self.field, other.coeffs.clone());
        let n = (precision - start).max(0) as usize;
        Self::from_series(self.point.clone(), self.field, start, a.mul_trunc(&b, n), precision)
    }

    fn from_series(point: CurvePoint, field: Field, start: i64, series: Poly, precision: i64) -> Self {
        let Some(lo) = series.low_order() else {
            return LaurentJet { point, start: precision, coeffs: Vec::new(), precision, field };
        };
        let n = (precision - start).max(0) as usize;
        let coeffs: Vec<Scalar> = series.truncate(n).coeffs().iter().skip(lo).cloned().collect();
        if coeffs.is_empty() {
            return LaurentJet { point, start: precision, coeffs, precision, field };
        }
        LaurentJet { point, start: start + lo as i64, coeffs, precision, field }
    }
}

/// Laurent expansion of `f` at `x`, truncated strictly below `precision`.
pub fn laurent_expand(f: &RatFunc, x: &CurvePoint, precision: i64) -> LaurentJet {
    let field = f.field();
    if f.is_zero() {
        return LaurentJet { point: x.clone(), start: precision, coeffs: Vec::new(), precision, field };
    }
    let (v, n, d) = match x {
        CurvePoint::Finite(a) => {
            let n = f.num().taylor_shift(a);
            let d = f.den().taylor_shift(a);
            let vn = n.low_order().unwrap();
            let vd = d.low_order().unwrap();
            (vn as i64 - vd as i64, n.unshift(vn), d.unshift(vd))
        }
        CurvePoint::Infinity => {
            let dn = f.num().degree().unwrap();
            let dd = f.den().degree().unwrap();
            (dd as i64 - dn as i64, f.num().reverse(dn), f.den().reverse(dd))
        }
    };
    if v >= precision {
        return LaurentJet { point: x.clone(), start: precision, coeffs: Vec::new(), precision, field };
    }
    let count = (precision - v) as usize;
    let inv = d.series_inv(count).expect("unit denominator after shift");
    LaurentJet::from_series(x.clone(), field, v, n.mul_trunc(&inv, count), precision)
}

/// Coefficients of `z^0, ..., z^(n-1)` of a function regular at `x`, or `None`
/// if it has a pole there.
pub fn regular_coeffs(f: &RatFunc, x: &CurvePoint, n: usize) -> Option<Vec<Scalar>> {
    let jet = laurent_expand(f, x, n as i64);
    if !jet.is_zero() && jet.start < 0 {
        return None;
    }
    Some((0..n as i64).map(|e| jet.coeff(e)).collect())
}

/// Principal part of `f` at `x` as `(k, v)` with `f - v(z)/z^k` regular at `x`,
/// `deg v < k`, and `k` the exact pole order (`k = 0`, `v = 0` if regular).
pub fn polar_part(f: &RatFunc, x: &CurvePoint) -> (usize, Poly) {
    let field = f.field();
    let jet = laurent_expand(f, x, 0);
    if jet.is_zero() {
        return (0, Poly::zero(field));
    }
    let k = (-jet.start) as usize;
    (k, Poly::new(field, jet.coeffs.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rf(f: Field, n: &[i64], d: &[i64]) -> RatFunc {
        RatFunc::new(Poly::from_ints(f, n), Poly::from_ints(f, d))
    }

    #[test]
    fn simple_pole() {
        let f = Field::Rational;
        let jet = laurent_expand(&rf(f, &[1], &[-1, 1]), &CurvePoint::Finite(f.int(1)), 2);
        assert_eq!(jet.start, -1);
        assert_eq!(jet.coeff(-1), f.int(1));
        assert_eq!(jet.coeff(0), f.int(0));
        assert_eq!(jet.coeff(1), f.int(0));
    }

    #[test]
    fn geometric_series() {
        let f = Field::Rational;
        let jet = laurent_expand(&rf(f, &[0, 1], &[1, -1]), &CurvePoint::Finite(f.int(0)), 3);
        assert_eq!(jet.start, 1);
        assert_eq!(jet.coeffs, vec![f.int(1), f.int(1)]);
    }

    #[test]
    fn at_infinity() {
        let f = Field::Rational;
        let jet = laurent_expand(&rf(f, &[1], &[0, 1]), &CurvePoint::Infinity, 3);
        assert_eq!(jet.start, 1);
        assert_eq!(jet.coeffs, vec![f.int(1)]);
    }

    #[test]
    fn polar_part_recovers() {
        let f = Field::Rational;
        let g = rf(f, &[1, 1, 1], &[0, 0, 1, 1]);
        let x = CurvePoint::Finite(f.int(0));
        let (k, v) = polar_part(&g, &x);
        assert_eq!(k, 2);
        let pp = &x.local_to_t(&v) * &x.z_pow(f, -(k as i64));
        assert!(x.valuation(&(&g - &pp)).unwrap() >= 0);
    }
}
