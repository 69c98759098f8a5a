//! Splitting type of a lattice pair by column reduction of the transition
//! matrix.
//!
//! With `P = Ainf^-1 A0` and `D` a monic common denominator, `D P` is column
//! reduced by unimodular column operations `U` (the leading-coefficient matrix
//! is made nonsingular). The column degrees `delta_j` then give the exponents
//! `a_j = deg D - delta_j`, and `A0 U` is a frame whose `j`-th column times
//! `t^a_j` generates the lattice at infinity.

use super::matrix::MatrixK;
use super::poly::Poly;
use super::polymat::MatrixR;
use super::ratfunc::RatFunc;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Splitting {
    /// `a_1 >= ... >= a_r`.
    pub exponents: Vec<i64>,
    /// `A0 U`: a `k[t]`-basis of the finite lattice adapted to the splitting.
    pub frame: MatrixR,
    pub frame_inv: MatrixR,
}

impl Splitting {
    /// From a known adapted frame; columns are reordered so the exponents
    /// descend.
    pub(crate) fn from_frame(exps: Vec<i64>, frame: MatrixR, frame_inv: MatrixR) -> Splitting {
        let mut order: Vec<usize> = (0..exps.len()).collect();
        order.sort_by(|&x, &y| exps[y].cmp(&exps[x]));
        Splitting {
            exponents: order.iter().map(|&j| exps[j]).collect(),
            frame: frame.select_cols(&order),
            frame_inv: frame_inv.transpose().select_cols(&order).transpose(),
        }
    }
}

pub fn split_lattice_pair(a0: &MatrixR, ainf: &MatrixR) -> Result<Splitting> {
    let f = a0.field();
    let r = a0.rows();
    let ainf_inv = ainf.inverse().ok_or(Error::Singular)?;
    let p = ainf_inv.mul(a0);
    let d = p.common_denominator();
    let dd = d.deg();
    let mut q = p.scale(&RatFunc::from_poly(d)).poly_entries();
    let mut u: Vec<Vec<Poly>> = (0..r).map(|i| (0..r).map(|j| if i == j { Poly::one(f) } else { Poly::zero(f) }).collect()).collect();
    loop {
        let deltas: Vec<i64> = (0..r).map(|j| (0..r).map(|i| q[i][j].deg()).max().unwrap_or(i64::MIN)).collect();
        if deltas.contains(&i64::MIN) {
            return Err(Error::Singular);
        }
        let mut lc = MatrixK::zeros(f, r, r);
        for (i, row) in q.iter().enumerate() {
            for (j, p) in row.iter().enumerate() {
                lc.set(i, j, p.coeff(deltas[j] as usize));
            }
        }
        let kernel = lc.kernel();
        let Some(c) = kernel.first() else {
            let exps: Vec<i64> = deltas.iter().map(|&dj| dd - dj).collect();
            let mut order: Vec<usize> = (0..r).collect();
            order.sort_by(|&x, &y| exps[y].cmp(&exps[x]));
            let exponents = order.iter().map(|&j| exps[j]).collect();
            let umat = MatrixR::from_poly_entries(f, &u).select_cols(&order);
            let frame = a0.mul(&umat);
            let frame_inv = frame.inverse().ok_or(Error::Singular)?;
            return Ok(Splitting { exponents, frame, frame_inv });
        };
        let jstar = (0..r).filter(|&j| !c[j].is_zero()).max_by_key(|&j| (deltas[j], std::cmp::Reverse(j))).unwrap();
        let cinv = c[jstar].inv().unwrap();
        for m in [&mut q, &mut u] {
            for row in m.iter_mut() {
                let mut acc = Poly::zero(f);
                for j in 0..r {
                    if c[j].is_zero() || row[j].is_zero() {
                        continue;
                    }
                    let coef = &c[j] * &cinv;
                    acc = &acc + &row[j].shift((deltas[jstar] - deltas[j]) as usize).scale(&coef);
                }
                row[jstar] = acc;
            }
        }
    }
}

/// `G = U diag(t^a) W` with `U` unimodular over `k[t]` and `W` invertible over
/// the local ring at infinity.
pub fn birkhoff_factorize(g: &MatrixR) -> Result<(MatrixR, Vec<i64>, MatrixR)> {
    let f = g.field();
    if g.rows() != g.cols() {
        return Err(Error::DimensionMismatch("Birkhoff factorization expects a square matrix".into()));
    }
    let s = split_lattice_pair(&MatrixR::identity(f, g.rows()), g)?;
    let tinv = MatrixR::t_diag(f, &s.exponents.iter().map(|a| -a).collect::<Vec<_>>());
    let w = tinv.mul(&s.frame_inv).mul(g);
    // With A0 = I the adapted frame is U itself.
    Ok((s.frame, s.exponents, w))
}

/// True if `w` is invertible over the local ring at infinity.
pub fn is_unit_at_inf(w: &MatrixR) -> bool {
    let entries_ok = (0..w.rows()).all(|i| (0..w.cols()).all(|j| w.get(i, j).val_inf().is_none_or(|v| v >= 0)));
    entries_ok && w.det().val_inf() == Some(0)
}

/// True if `u` is a polynomial matrix with nonzero constant determinant.
pub fn is_unimodular(u: &MatrixR) -> bool {
    u.is_polynomial() && u.det().degree() == Some(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::scalar::Field;

    #[test]
    fn diagonal_input() {
        let f = Field::Rational;
        let g = MatrixR::t_diag(f, &[2, -1]);
        let (u, a, w) = birkhoff_factorize(&g).unwrap();
        assert_eq!(a, vec![2, -1]);
        assert_eq!(u, MatrixR::identity(f, 2));
        assert_eq!(w, MatrixR::identity(f, 2));
    }

    #[test]
    fn unimodular_at_infinity() {
        let f = Field::Rational;
        let one = RatFunc::one(f);
        let g = MatrixR::from_rows(f, 2, vec![vec![one.clone(), RatFunc::t_pow(f, -1)], vec![RatFunc::zero(f), one]]);
        let (u, a, w) = birkhoff_factorize(&g).unwrap();
        assert_eq!(a, vec![0, 0]);
        assert_eq!(u, MatrixR::identity(f, 2));
        assert_eq!(w, g);
    }

    #[test]
    fn factors_multiply_back() {
        let f = Field::prime(7).unwrap();
        let t = RatFunc::t(f);
        let one = RatFunc::one(f);
        let g = MatrixR::from_rows(f, 2, vec![vec![&t * &t, one.clone()], vec![t.clone(), RatFunc::t_pow(f, -2)]]);
        let (u, a, w) = birkhoff_factorize(&g).unwrap();
        assert!(is_unimodular(&u));
        assert!(is_unit_at_inf(&w));
        assert_eq!(u.mul(&MatrixR::t_diag(f, &a)).mul(&w), g);
        assert!(a.windows(2).all(|x| x[0] >= x[1]));
    }
}
