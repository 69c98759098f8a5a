//! Lattice primitives: canonical bases, sums, and sublattices cut out by jet
//! conditions at a point.

use crate::error::{Error, Result};
use crate::exactalg::hnf::{canonical_global, canonical_local_inf};
use crate::exactalg::laurent::regular_coeffs;
use crate::exactalg::{CurvePoint, MatrixK, MatrixR, RatFunc};

/// The condition `<f, w> = 0 mod z^order` on lattice elements `f`.
#[derive(Clone, Debug)]
pub struct JetCondition {
    pub w: Vec<RatFunc>,
    pub order: usize,
}

/// Canonical basis of the lattice spanned by `gens` in the chart of `x`
/// (global over `k[t]` for a finite point, local at infinity otherwise).
pub fn canonical_at(gens: &MatrixR, x: &CurvePoint) -> Result<MatrixR> {
    match x {
        CurvePoint::Finite(_) => canonical_global(gens),
        CurvePoint::Infinity => canonical_local_inf(gens),
    }
}

/// Linear system of the conditions on `(O/z^K)^r` with basis `z^i e_j`,
/// column index `i * r + j`. Returns the matrix and `K`.
pub fn condition_matrix(basis: &MatrixR, x: &CurvePoint, conds: &[JetCondition]) -> Result<(MatrixK, usize)> {
    let f = basis.field();
    let r = basis.cols();
    let big_k = conds.iter().map(|c| c.order).max().unwrap_or(0);
    let mut rows = Vec::new();
    for c in conds {
        if c.w.len() != basis.rows() {
            return Err(Error::DimensionMismatch("condition covector length".into()));
        }
        let mut rho = Vec::with_capacity(r);
        for j in 0..r {
            let mut acc = RatFunc::zero(f);
            for (i, wi) in c.w.iter().enumerate() {
                let b = basis.get(i, j);
                if !b.is_zero() && !wi.is_zero() {
                    acc = &acc + &(b * wi);
                }
            }
            rho.push(regular_coeffs(&acc, x, c.order).ok_or_else(|| Error::NotRegularCovector(x.to_string()))?);
        }
        for m in 0..c.order {
            let mut row = vec![f.zero(); big_k * r];
            for i in 0..=m {
                for j in 0..r {
                    row[i * r + j] = rho[j][m - i].clone();
                }
            }
            rows.push(row);
        }
    }
    Ok((MatrixK::from_rows(f, big_k * r, rows), big_k))
}

/// Sublattice `{f in L : <f, w_c> = 0 mod z^k_c}` of the lattice `L` with basis
/// `basis`, in canonical form.
pub fn impose_conditions(basis: &MatrixR, x: &CurvePoint, conds: &[JetCondition]) -> Result<MatrixR> {
    let f = basis.field();
    let r = basis.cols();
    let (m, big_k) = condition_matrix(basis, x, conds)?;
    if big_k == 0 {
        return canonical_at(basis, x);
    }
    let zk = x.z_pow(f, big_k as i64);
    let mut gens: Vec<Vec<RatFunc>> = basis.columns().into_iter().map(|c| c.iter().map(|e| e * &zk).collect()).collect();
    let zp: Vec<RatFunc> = (0..big_k).map(|i| x.z_pow(f, i as i64)).collect();
    for kv in m.kernel() {
        let mut g = vec![RatFunc::zero(f); basis.rows()];
        for i in 0..big_k {
            for j in 0..r {
                let c = &kv[i * r + j];
                if c.is_zero() {
                    continue;
                }
                let coef = zp[i].scale(c);
                for (row, gr) in g.iter_mut().enumerate() {
                    let b = basis.get(row, j);
                    if !b.is_zero() {
                        *gr = &*gr + &(b * &coef);
                    }
                }
            }
        }
        gens.push(g);
    }
    canonical_at(&MatrixR::from_cols(f, basis.rows(), gens), x)
}

/// Canonical basis of the lattice sum of `a` and the extra generators.
pub fn lattice_sum(a: &MatrixR, extra: &[Vec<RatFunc>], x: &CurvePoint) -> Result<MatrixR> {
    let f = a.field();
    let mut cols = a.columns();
    cols.extend(extra.iter().cloned());
    canonical_at(&MatrixR::from_cols(f, a.rows(), cols), x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{Field, Poly};

    #[test]
    fn hyperplane_condition() {
        let f = Field::Rational;
        let x = CurvePoint::Finite(f.int(0));
        let id = MatrixR::identity(f, 2);
        let cond = JetCondition { w: vec![RatFunc::one(f), RatFunc::zero(f)], order: 1 };
        let sub = impose_conditions(&id, &x, &[cond]).unwrap();
        let expect = MatrixR::diag(f, vec![RatFunc::t(f), RatFunc::one(f)]);
        assert_eq!(sub, expect);
    }

    #[test]
    fn order_two_jet_condition() {
        // {f : f_1 + z f_2 = 0 mod z^2} at 0
        let f = Field::Rational;
        let x = CurvePoint::Finite(f.int(0));
        let id = MatrixR::identity(f, 2);
        let cond = JetCondition { w: vec![RatFunc::one(f), RatFunc::t(f)], order: 2 };
        let sub = impose_conditions(&id, &x, &[cond]).unwrap();
        // Colength 2 and contains (-t, 1) and (t^2, 0).
        assert_eq!(sub.det().degree(), Some(2));
        let member = MatrixR::from_cols(f, 2, vec![vec![RatFunc::from_poly(Poly::from_ints(f, &[0, -1])), RatFunc::one(f)]]);
        assert!(crate::exactalg::hnf::contained_global(&member, &sub).unwrap());
    }
}
