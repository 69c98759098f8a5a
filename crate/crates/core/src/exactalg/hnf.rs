//! Hermite normal forms of lattices: over `k[t]` for the finite chart and over
//! the local ring at infinity for the other chart.
//!
//! Both use column operations and produce a lower-triangular basis. Over
//! `k[t]` the diagonal is monic and each off-diagonal entry has degree below
//! the diagonal entry of its row. At infinity the diagonal is `t^(-n)` and each
//! off-diagonal entry is the Laurent polynomial spanned by `t^m`, `m > -n`.

use super::laurent::{laurent_expand, CurvePoint};
use super::poly::Poly;
use super::polymat::MatrixR;
use super::ratfunc::RatFunc;
use super::scalar::Field;
use crate::error::{Error, Result};

struct ColOps {
    a: Vec<Vec<Poly>>,
    u: Vec<Vec<Poly>>,
}

impl ColOps {
    fn swap(&mut self, x: usize, y: usize) {
        for row in self.a.iter_mut().chain(self.u.iter_mut()) {
            row.swap(x, y);
        }
    }

    /// `col_j -= q * col_i`
    fn axpy(&mut self, j: usize, i: usize, q: &Poly) {
        if q.is_zero() {
            return;
        }
        for row in self.a.iter_mut().chain(self.u.iter_mut()) {
            if !row[i].is_zero() {
                row[j] = &row[j] - &(q * &row[i]);
            }
        }
    }

    fn scale(&mut self, i: usize, c: &super::scalar::Scalar) {
        for row in self.a.iter_mut().chain(self.u.iter_mut()) {
            row[i] = row[i].scale(c);
        }
    }
}

type PolyRows = Vec<Vec<Poly>>;

/// Column Hermite form of an `r x n` polynomial matrix of rank `r`. Returns the
/// `r x r` form and the `n x n` unimodular transform `U` with `A U = [H | 0]`.
pub fn poly_hnf(field: Field, a: PolyRows, n: usize) -> Result<(PolyRows, PolyRows)> {
    let r = a.len();
    if n < r {
        return Err(Error::DegenerateLattice);
    }
    let mut u = vec![vec![Poly::zero(field); n]; n];
    for (i, row) in u.iter_mut().enumerate() {
        row[i] = Poly::one(field);
    }
    let mut ops = ColOps { a, u };
    for i in 0..r {
        loop {
            let best = (i..n).filter(|&j| !ops.a[i][j].is_zero()).min_by_key(|&j| ops.a[i][j].deg());
            let Some(j0) = best else {
                return Err(Error::DegenerateLattice);
            };
            ops.swap(i, j0);
            let mut clean = true;
            for j in i + 1..n {
                if ops.a[i][j].is_zero() {
                    continue;
                }
                let q = ops.a[i][j].div_rem(&ops.a[i][i]).0;
                ops.axpy(j, i, &q);
                if !ops.a[i][j].is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        let inv = ops.a[i][i].lead().inv().unwrap();
        ops.scale(i, &inv);
    }
    for i in 1..r {
        for j in 0..i {
            let q = ops.a[i][j].div_rem(&ops.a[i][i]).0;
            ops.axpy(j, i, &q);
        }
    }
    let h = ops.a.into_iter().map(|row| row.into_iter().take(r).collect()).collect();
    Ok((h, ops.u))
}

/// Hermite form of a square nonsingular polynomial matrix: `H = M U`.
pub fn hermite_normal_form(m: &MatrixR) -> Result<(MatrixR, MatrixR)> {
    if m.rows() != m.cols() {
        return Err(Error::DimensionMismatch("Hermite form expects a square matrix".into()));
    }
    if !m.is_polynomial() {
        return Err(Error::InvalidInput("Hermite form expects polynomial entries".into()));
    }
    let f = m.field();
    let (h, u) = poly_hnf(f, m.poly_entries(), m.cols())?;
    Ok((MatrixR::from_poly_entries(f, &h), MatrixR::from_poly_entries(f, &u)))
}

/// Canonical basis of the `k[t]`-lattice spanned by the columns of `gens`
/// (rational entries allowed; the columns must span `k(t)^r`).
pub fn canonical_global(gens: &MatrixR) -> Result<MatrixR> {
    let f = gens.field();
    let d = gens.common_denominator();
    let scaled = gens.scale(&RatFunc::from_poly(d.clone()));
    let (h, _) = poly_hnf(f, scaled.poly_entries(), gens.cols())?;
    let dinv = RatFunc::new(Poly::one(f), d);
    Ok(MatrixR::from_poly_entries(f, &h).scale(&dinv))
}

/// Canonical basis of the lattice over the local ring at infinity spanned by
/// the columns of `gens`.
pub fn canonical_local_inf(gens: &MatrixR) -> Result<MatrixR> {
    let f = gens.field();
    let r = gens.rows();
    let n = gens.cols();
    if n < r {
        return Err(Error::DegenerateLattice);
    }
    let mut a: Vec<Vec<RatFunc>> = (0..r).map(|i| gens.row(i)).collect();
    let swap = |a: &mut Vec<Vec<RatFunc>>, x: usize, y: usize| {
        for row in a.iter_mut() {
            row.swap(x, y);
        }
    };
    let axpy = |a: &mut Vec<Vec<RatFunc>>, j: usize, i: usize, c: &RatFunc| {
        for row in a.iter_mut() {
            if !row[i].is_zero() {
                row[j] = &row[j] - &(c * &row[i]);
            }
        }
    };
    let mut ns = vec![0i64; r];
    for i in 0..r {
        let j0 = (i..n).filter(|&j| !a[i][j].is_zero()).min_by_key(|&j| a[i][j].val_inf().unwrap()).ok_or(Error::DegenerateLattice)?;
        swap(&mut a, i, j0);
        let v = a[i][i].val_inf().unwrap();
        ns[i] = v;
        let unit = RatFunc::t_pow(f, -v).div(&a[i][i]).unwrap();
        for row in a.iter_mut() {
            row[i] = &row[i] * &unit;
        }
        for j in i + 1..n {
            if a[i][j].is_zero() {
                continue;
            }
            let c = a[i][j].div(&a[i][i]).unwrap();
            axpy(&mut a, j, i, &c);
        }
    }
    for i in 1..r {
        for j in 0..i {
            let entry = a[i][j].clone();
            if entry.is_zero() {
                continue;
            }
            let rep = truncate_at_inf(&entry, ns[i]);
            let c = (&entry - &rep).div(&a[i][i]).unwrap();
            axpy(&mut a, j, i, &c);
            a[i][j] = rep;
        }
    }
    let cols = (0..r).map(|j| (0..r).map(|i| a[i][j].clone()).collect()).collect();
    Ok(MatrixR::from_cols(f, r, cols))
}

/// The part of `f` spanned by `t^m` with `m > -n` in its expansion at infinity.
fn truncate_at_inf(f: &RatFunc, n: i64) -> RatFunc {
    let field = f.field();
    let jet = laurent_expand(f, &CurvePoint::Infinity, n);
    let mut out = RatFunc::zero(field);
    for (i, c) in jet.coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let e = jet.start + i as i64;
        out = &out + &RatFunc::t_pow(field, -e).scale(c);
    }
    out
}

/// True if every column of `sub` lies in the `k[t]`-lattice with basis `lat`.
pub fn contained_global(sub: &MatrixR, lat: &MatrixR) -> Result<bool> {
    let inv = lat.inverse().ok_or(Error::DegenerateLattice)?;
    Ok(inv.mul(sub).is_polynomial())
}

/// True if every column of `sub` lies in the lattice at infinity with basis `lat`.
pub fn contained_local_inf(sub: &MatrixR, lat: &MatrixR) -> Result<bool> {
    let inv = lat.inverse().ok_or(Error::DegenerateLattice)?;
    let c = inv.mul(sub);
    Ok((0..c.rows()).all(|i| (0..c.cols()).all(|j| c.get(i, j).val_inf().is_none_or(|v| v >= 0))))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(f: Field, cs: &[i64]) -> RatFunc {
        RatFunc::from_poly(Poly::from_ints(f, cs))
    }

    #[test]
    fn already_canonical() {
        let f = Field::Rational;
        let m = MatrixR::diag(f, vec![p(f, &[0, 0, 1]), p(f, &[1])]);
        let (h, u) = hermite_normal_form(&m).unwrap();
        assert_eq!(h, m);
        assert_eq!(u, MatrixR::identity(f, 2));
    }

    #[test]
    fn worked_example() {
        // columns (t, t) and (1, 0)
        let f = Field::Rational;
        let m = MatrixR::from_cols(f, 2, vec![vec![p(f, &[0, 1]), p(f, &[0, 1])], vec![p(f, &[1]), p(f, &[0])]]);
        let (h, u) = hermite_normal_form(&m).unwrap();
        let expect = MatrixR::from_cols(f, 2, vec![vec![p(f, &[1]), p(f, &[0])], vec![p(f, &[0]), p(f, &[0, 1])]]);
        assert_eq!(h, expect);
        assert_eq!(m.mul(&u), h);
    }

    #[test]
    fn singular_is_degenerate() {
        let f = Field::Rational;
        let m = MatrixR::from_cols(f, 2, vec![vec![p(f, &[0, 1]), p(f, &[0, 1])], vec![p(f, &[1]), p(f, &[1])]]);
        assert_eq!(hermite_normal_form(&m).unwrap_err(), Error::DegenerateLattice);
    }

    #[test]
    fn local_inf_is_canonical() {
        let f = Field::Rational;
        let t = RatFunc::t(f);
        // Two bases of the same lattice at infinity.
        let a = MatrixR::from_cols(f, 2, vec![vec![t.clone(), p(f, &[1])], vec![p(f, &[0]), RatFunc::t_pow(f, -1)]]);
        let unit = RatFunc::new(Poly::from_ints(f, &[1, 1]), Poly::from_ints(f, &[3, 1]));
        let mut b = a.clone();
        let c0 = a.col(0);
        let c1 = a.col(1);
        let mixed: Vec<RatFunc> = c0.iter().zip(&c1).map(|(x, y)| &(x * &unit) + &(y * &RatFunc::t_pow(f, -1))).collect();
        b.set_col(0, &mixed);
        assert_eq!(canonical_local_inf(&a).unwrap(), canonical_local_inf(&b).unwrap());
    }
}
