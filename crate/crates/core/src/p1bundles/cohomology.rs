//! Global sections, first cohomology with monomial bases, Čech classes of
//! rational sections, and the residue pairing.
//!
//! `H^1(V)` is modelled as `k(t)^r / (L0 + Linf)`. In the split frame `b_j`
//! (columns of `A0 U`) the classes `t^-e b_j`, `1 <= e <= -a_j - 1`, form a
//! basis, ordered by summand and then by `e`.

use super::bundle::Bundle;
use crate::exactalg::laurent::laurent_expand;
use crate::exactalg::{CurvePoint, MatrixK, Poly, RatFunc, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct H1Space {
    pub dim: usize,
    /// `(j, e)`: the class of `t^-e b_j`.
    pub tags: Vec<(usize, i64)>,
}

#[derive(Clone, Debug)]
pub struct Cohomology {
    pub h0: usize,
    pub h1: usize,
    pub sections: Vec<Vec<RatFunc>>,
    pub h1_space: H1Space,
}

/// Sum of residues at all finite points of `f dt`: the coefficient of `t^-1`
/// in the expansion at infinity.
pub fn finite_residue_sum(f: &RatFunc) -> Scalar {
    laurent_expand(f, &CurvePoint::Infinity, 2).coeff(1)
}

pub fn dot(a: &[RatFunc], b: &[RatFunc]) -> RatFunc {
    let f = a[0].field();
    let mut acc = RatFunc::zero(f);
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc = &acc + &(x * y);
        }
    }
    acc
}

impl Bundle {
    pub fn h0(&self) -> usize {
        self.exponents().iter().map(|&a| (a + 1).max(0) as usize).sum()
    }

    pub fn h1(&self) -> usize {
        self.exponents().iter().map(|&a| (-a - 1).max(0) as usize).sum()
    }

    /// `t^m b_j` for `0 <= m <= a_j`, ordered by summand and then by `m`.
    pub fn sections(&self) -> Vec<Vec<RatFunc>> {
        let f = self.field();
        let s = self.splitting();
        let mut out = Vec::new();
        for (j, &a) in s.exponents.iter().enumerate() {
            let b = s.frame.col(j);
            for m in 0..=a {
                let tm = RatFunc::t_pow(f, m);
                out.push(b.iter().map(|x| x * &tm).collect());
            }
        }
        out
    }

    /// Coordinates of a global section in the basis of [`Bundle::sections`],
    /// or `None` if `v` is not a global section.
    pub fn section_coords(&self, v: &[RatFunc]) -> Option<Vec<Scalar>> {
        let s = self.splitting();
        let c = s.frame_inv.mul_vec(v);
        let mut out = Vec::new();
        for (j, &a) in s.exponents.iter().enumerate() {
            if !c[j].is_poly() {
                return None;
            }
            let p = c[j].num();
            if p.deg() > a {
                return None;
            }
            for m in 0..=a {
                out.push(p.coeff(m as usize));
            }
        }
        Some(out)
    }

    pub fn h1_space(&self) -> H1Space {
        let mut tags = Vec::new();
        for (j, &a) in self.exponents().iter().enumerate() {
            for e in 1..=(-a - 1) {
                tags.push((j, e));
            }
        }
        H1Space { dim: tags.len(), tags }
    }

    pub fn cohomology_basis(&self) -> Cohomology {
        Cohomology { h0: self.h0(), h1: self.h1(), sections: self.sections(), h1_space: self.h1_space() }
    }

    /// The rational section `t^-e b_j` representing the `idx`-th basis class.
    pub fn h1_representative(&self, idx: usize) -> Vec<RatFunc> {
        let (j, e) = self.h1_space().tags[idx];
        let te = RatFunc::t_pow(self.field(), -e);
        self.splitting().frame.col(j).iter().map(|x| x * &te).collect()
    }

    /// Coordinates of the class of the rational section `g` in `H^1`.
    pub fn h1_class(&self, g: &[RatFunc]) -> Vec<Scalar> {
        let s = self.splitting();
        let c = s.frame_inv.mul_vec(g);
        let mut out = Vec::new();
        for (j, &a) in s.exponents.iter().enumerate() {
            if a > -2 {
                continue;
            }
            let jet = laurent_expand(&c[j], &CurvePoint::Infinity, -a);
            for e in 1..=(-a - 1) {
                out.push(jet.coeff(e));
            }
        }
        out
    }

    /// Rational section `chart(x) v(z) / z^k`, for `v` given in the local frame.
    pub fn principal_section(&self, x: &CurvePoint, v: &[Poly], k: usize) -> Vec<RatFunc> {
        let f = self.field();
        let zk = x.z_pow(f, -(k as i64));
        let local: Vec<RatFunc> = v.iter().map(|p| &x.local_to_t(p) * &zk).collect();
        self.chart(x).mul_vec(&local)
    }

    /// Coboundary class of the principal part `v(z) / z^k` at `x` (local frame).
    pub fn coboundary(&self, x: &CurvePoint, v: &[Poly], k: usize) -> Vec<Scalar> {
        let cls = self.h1_class(&self.principal_section(x, v, k));
        match x {
            CurvePoint::Finite(_) => cls.iter().map(|c| -c).collect(),
            CurvePoint::Infinity => cls,
        }
    }

    /// Pairing matrix `P[m][n] = sum of finite residues of <t^-e b_j, eta_n> dt`
    /// between the `H^1` basis and the section basis of `K (x) V*`.
    pub fn serre_pairing(&self) -> MatrixK {
        let f = self.field();
        let kv = self.dual().canonical_twist();
        let etas = kv.sections();
        let h1 = self.h1_space();
        let mut m = MatrixK::zeros(f, h1.dim, etas.len());
        for idx in 0..h1.dim {
            let rep = self.h1_representative(idx);
            for (n, eta) in etas.iter().enumerate() {
                m.set(idx, n, finite_residue_sum(&dot(&rep, eta)));
            }
        }
        m
    }
}

/// `h^0` by direct linear algebra: polynomial vectors `u` of degree at most
/// `bound` with `Ainf^-1 A0 u` regular at infinity. Without a bound, the
/// maximal degree of the entries of `A0^-1 Ainf` is used.
pub fn oracle_h0(v: &Bundle, bound: Option<usize>) -> usize {
    let f = v.field();
    let r = v.rank();
    let a0 = v.a0();
    let ainf = v.ainf();
    let bound = bound.unwrap_or_else(|| {
        let g = a0.inverse().unwrap().mul(ainf);
        let mut mx = 0i64;
        for i in 0..r {
            for j in 0..r {
                if let Some(d) = g.get(i, j).degree() {
                    mx = mx.max(d);
                }
            }
        }
        mx as usize
    });
    let p = ainf.inverse().unwrap().mul(a0);
    let b = bound as i64;
    let jets: Vec<Vec<_>> = (0..r).map(|i| (0..r).map(|j| laurent_expand(p.get(i, j), &CurvePoint::Infinity, b)).collect()).collect();
    let emin = jets.iter().flatten().filter(|j| !j.is_zero()).map(|j| j.start).min().unwrap_or(0) - b;
    let ncols = r * (bound + 1);
    let mut rows = Vec::new();
    for jrow in &jets {
        for e in emin..0 {
            let mut row = vec![f.zero(); ncols];
            for (j, jet) in jrow.iter().enumerate() {
                for m in 0..=bound {
                    let idx = e + m as i64;
                    if idx < b {
                        row[j * (bound + 1) + m] = jet.coeff(idx);
                    }
                }
            }
            rows.push(row);
        }
    }
    if rows.is_empty() {
        return ncols;
    }
    let mat = MatrixK::from_rows(f, ncols, rows);
    ncols - mat.rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{Field, MatrixR};

    #[test]
    fn line_bundles() {
        let f = Field::Rational;
        let o3 = Bundle::split(f, &[3]);
        assert_eq!(o3.h0(), 4);
        assert_eq!(o3.sections().len(), 4);
        assert_eq!(o3.sections()[2][0], RatFunc::t_pow(f, 2));
        let om2 = Bundle::split(f, &[-2]);
        assert_eq!(om2.h1(), 1);
        assert_eq!(om2.h1_class(&[RatFunc::t_pow(f, -1)]), vec![f.one()]);
        assert_eq!(om2.h1_class(&[RatFunc::one(f)]), vec![f.zero()]);
    }

    #[test]
    fn serre_pairing_small() {
        let f = Field::Rational;
        let om2 = Bundle::split(f, &[-2]);
        let p = om2.serre_pairing();
        assert_eq!(p.rows(), 1);
        assert_eq!(p.cols(), 1);
        assert!(p.get(0, 0).is_one());
        let om3 = Bundle::split(f, &[-3]);
        assert_eq!(om3.serre_pairing().rank(), 2);
    }

    #[test]
    fn residue_oracle_for_o_minus_3() {
        // g = 1/(t(t-1)) in O(-3); pairing against sections 1, t of O(1).
        let f = Field::Rational;
        let om3 = Bundle::split(f, &[-3]);
        let g = RatFunc::new(Poly::one(f), Poly::from_ints(f, &[0, -1, 1]));
        let cls = om3.h1_class(std::slice::from_ref(&g));
        let p = om3.serre_pairing();
        let etas = om3.dual().canonical_twist().sections();
        for (n, eta) in etas.iter().enumerate() {
            let lhs = (0..2).fold(f.zero(), |acc, m| &acc + &(&cls[m] * p.get(m, n)));
            // res_0 + res_1 of eta/(t(t-1))
            let direct = &(-&eta[0].eval(&f.int(0)).unwrap()) + &eta[0].eval(&f.int(1)).unwrap();
            assert_eq!(lhs, direct);
        }
    }

    #[test]
    fn oracle_matches_small() {
        let f5 = Field::prime(5).unwrap();
        assert_eq!(oracle_h0(&Bundle::split(f5, &[3]), None), 4);
        assert_eq!(oracle_h0(&Bundle::split(f5, &[-1]), None), 0);
        let t = RatFunc::t(f5);
        let a0 = MatrixR::from_rows(f5, 2, vec![vec![RatFunc::one(f5), t.clone()], vec![RatFunc::zero(f5), RatFunc::one(f5)]]);
        let v = Bundle::from_lattices(a0, MatrixR::t_diag(f5, &[2, -1])).unwrap();
        assert_eq!(oracle_h0(&v, None), v.h0());
    }
}
