//! Dense matrices over `k(t)`.

use std::fmt;

use super::matrix::MatrixK;
use super::poly::Poly;
use super::ratfunc::RatFunc;
use super::scalar::{Field, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MatrixR {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<RatFunc>,
}

fn size(f: &RatFunc) -> usize {
    if f.is_zero() {
        return usize::MAX;
    }
    f.num().coeffs().len() + f.den().coeffs().len()
}

impl MatrixR {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        MatrixR { field, rows, cols, data: vec![RatFunc::zero(field); rows * cols] }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, RatFunc::one(field));
        }
        m
    }

    pub fn diag(field: Field, entries: Vec<RatFunc>) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(field, n, n);
        for (i, e) in entries.into_iter().enumerate() {
            m.set(i, i, e);
        }
        m
    }

    /// `diag(t^a_1, ..., t^a_r)`.
    pub fn t_diag(field: Field, exps: &[i64]) -> Self {
        Self::diag(field, exps.iter().map(|&a| RatFunc::t_pow(field, a)).collect())
    }

    pub fn from_cols(field: Field, rows: usize, cols: Vec<Vec<RatFunc>>) -> Self {
        let c = cols.len();
        let mut m = Self::zeros(field, rows, c);
        for (j, col) in cols.into_iter().enumerate() {
            assert_eq!(col.len(), rows, "ragged matrix columns");
            for (i, v) in col.into_iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    pub fn from_rows(field: Field, cols: usize, rows: Vec<Vec<RatFunc>>) -> Self {
        let r = rows.len();
        let mut data = Vec::with_capacity(r * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged matrix rows");
            data.extend(row);
        }
        MatrixR { field, rows: r, cols, data }
    }

    pub fn from_constant(m: &MatrixK) -> Self {
        let mut out = Self::zeros(m.field(), m.rows(), m.cols());
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                out.set(i, j, RatFunc::constant(m.get(i, j).clone()));
            }
        }
        out
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &RatFunc {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: RatFunc) {
        self.data[i * self.cols + j] = v;
    }

    pub fn col(&self, j: usize) -> Vec<RatFunc> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn row(&self, i: usize) -> Vec<RatFunc> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn columns(&self) -> Vec<Vec<RatFunc>> {
        (0..self.cols).map(|j| self.col(j)).collect()
    }

    pub fn set_col(&mut self, j: usize, col: &[RatFunc]) {
        for (i, v) in col.iter().enumerate() {
            self.set(i, j, v.clone());
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    pub fn select_cols(&self, idx: &[usize]) -> MatrixR {
        MatrixR::from_cols(self.field, self.rows, idx.iter().map(|&j| self.col(j)).collect())
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(j, i, self.get(i, j).clone());
            }
        }
        m
    }

    pub fn mul(&self, other: &MatrixR) -> MatrixR {
        assert_eq!(self.cols, other.rows, "matrix product dimension mismatch");
        let mut m = Self::zeros(self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = RatFunc::zero(self.field);
                for k in 0..self.cols {
                    let a = self.get(i, k);
                    let b = other.get(k, j);
                    if !a.is_zero() && !b.is_zero() {
                        acc = &acc + &(a * b);
                    }
                }
                m.set(i, j, acc);
            }
        }
        m
    }

    pub fn mul_vec(&self, v: &[RatFunc]) -> Vec<RatFunc> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = RatFunc::zero(self.field);
                for (j, x) in v.iter().enumerate() {
                    let a = self.get(i, j);
                    if !a.is_zero() && !x.is_zero() {
                        acc = &acc + &(a * x);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn scale(&self, c: &RatFunc) -> MatrixR {
        MatrixR { field: self.field, rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * c).collect() }
    }

    pub fn hstack(&self, other: &MatrixR) -> MatrixR {
        assert_eq!(self.rows, other.rows);
        let mut cols = self.columns();
        cols.extend(other.columns());
        Self::from_cols(self.field, self.rows, cols)
    }

    /// Kronecker product; index `(i, l)` maps to `i * other.rows + l`.
    pub fn kron(&self, other: &MatrixR) -> MatrixR {
        let mut m = Self::zeros(self.field, self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for l in 0..other.rows {
                    for n in 0..other.cols {
                        m.set(i * other.rows + l, j * other.cols + n, a * other.get(l, n));
                    }
                }
            }
        }
        m
    }

    pub fn is_polynomial(&self) -> bool {
        self.data.iter().all(|x| x.is_poly())
    }

    /// Monic lcm of all denominators.
    pub fn common_denominator(&self) -> Poly {
        self.data.iter().fold(Poly::one(self.field), |acc, x| acc.lcm(x.den()))
    }

    /// Entries as polynomials; panics if some entry is not a polynomial.
    pub fn poly_entries(&self) -> Vec<Vec<Poly>> {
        (0..self.rows).map(|i| (0..self.cols).map(|j| self.get(i, j).num().clone()).collect()).collect()
    }

    pub fn from_poly_entries(field: Field, rows: &[Vec<Poly>]) -> MatrixR {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_rows(field, cols, rows.iter().map(|r| r.iter().cloned().map(RatFunc::from_poly).collect()).collect())
    }

    /// Gaussian elimination over `k(t)` returning `(rank, det)` (det only
    /// meaningful for square input). Pivots are chosen by smallest size.
    fn eliminate(&self) -> (usize, RatFunc) {
        let mut m = self.clone();
        let mut det = RatFunc::one(self.field);
        let mut rank = 0;
        let mut row = 0;
        for c in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).filter(|&i| !m.get(i, c).is_zero()).min_by_key(|&i| size(m.get(i, c))) else {
                det = RatFunc::zero(self.field);
                continue;
            };
            if p != row {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, row * m.cols + j);
                }
                det = -&det;
            }
            let piv = m.get(row, c).clone();
            det = &det * &piv;
            let inv = piv.inv().unwrap();
            for i in row + 1..m.rows {
                let f = m.get(i, c) * &inv;
                if f.is_zero() {
                    continue;
                }
                for j in c..m.cols {
                    let v = m.get(i, j) - &(&f * m.get(row, j));
                    m.set(i, j, v);
                }
            }
            row += 1;
            rank += 1;
        }
        (rank, det)
    }

    pub fn rank(&self) -> usize {
        self.eliminate().0
    }

    pub fn det(&self) -> RatFunc {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        if self.rows == 0 {
            return RatFunc::one(self.field);
        }
        self.eliminate().1
    }

    pub fn inverse(&self) -> Option<MatrixR> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = MatrixR::identity(self.field, n);
        for c in 0..n {
            let p = (c..n).filter(|&i| !a.get(i, c).is_zero()).min_by_key(|&i| size(a.get(i, c)))?;
            if p != c {
                for j in 0..n {
                    a.data.swap(p * n + j, c * n + j);
                    inv.data.swap(p * n + j, c * n + j);
                }
            }
            let pinv = a.get(c, c).inv().unwrap();
            for j in 0..n {
                let v = a.get(c, j) * &pinv;
                a.set(c, j, v);
                let w = inv.get(c, j) * &pinv;
                inv.set(c, j, w);
            }
            for i in 0..n {
                if i == c {
                    continue;
                }
                let f = a.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let v = a.get(i, j) - &(&f * a.get(c, j));
                    a.set(i, j, v);
                    let w = inv.get(i, j) - &(&f * inv.get(c, j));
                    inv.set(i, j, w);
                }
            }
        }
        Some(inv)
    }

    /// Evaluation at a finite point where every entry is regular.
    pub fn eval(&self, a: &Scalar) -> Option<MatrixK> {
        let mut m = MatrixK::zeros(self.field, self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.get(i, j).eval(a)?);
            }
        }
        Some(m)
    }
}

impl fmt::Display for MatrixR {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_roundtrip() {
        let f = Field::Rational;
        let t = RatFunc::t(f);
        let one = RatFunc::one(f);
        let m = MatrixR::from_rows(f, 2, vec![vec![t.clone(), one.clone()], vec![one.clone(), &t * &t]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), MatrixR::identity(f, 2));
        assert_eq!(m.det(), &(&t * &(&t * &t)) - &one);
    }

    #[test]
    fn singular_has_no_inverse() {
        let f = Field::Rational;
        let t = RatFunc::t(f);
        let m = MatrixR::from_rows(f, 2, vec![vec![t.clone(), &t * &t], vec![RatFunc::one(f), t.clone()]]);
        assert!(m.inverse().is_none());
        assert!(m.det().is_zero());
        assert_eq!(m.rank(), 1);
    }
}
