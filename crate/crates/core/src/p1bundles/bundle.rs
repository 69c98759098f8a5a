use std::fmt;
use std::sync::OnceLock;

use super::lattice::canonical_at;
use crate::error::{Error, Result};
use crate::exactalg::birkhoff::{split_lattice_pair, Splitting};
use crate::exactalg::{CurvePoint, Field, MatrixR, RatFunc};

/// A rank-`r` bundle on `P^1`: columns of `a0` span the `k[t]`-lattice of the
/// finite chart, columns of `ainf` span the lattice at infinity.
#[derive(Clone, Debug)]
pub struct Bundle {
    field: Field,
    a0: MatrixR,
    ainf: MatrixR,
    split: OnceLock<Splitting>,
}

impl PartialEq for Bundle {
    fn eq(&self, other: &Self) -> bool {
        self.a0 == other.a0 && self.ainf == other.ainf
    }
}

impl Eq for Bundle {}

impl Bundle {
    pub fn from_lattices(a0: MatrixR, ainf: MatrixR) -> Result<Self> {
        let r = a0.rows();
        if a0.cols() != r || ainf.rows() != r || ainf.cols() != r {
            return Err(Error::DimensionMismatch(format!(
                "lattice matrices must be {r}x{r}, got {}x{} and {}x{}",
                a0.rows(),
                a0.cols(),
                ainf.rows(),
                ainf.cols()
            )));
        }
        if a0.field() != ainf.field() {
            return Err(Error::FieldMismatch(a0.field().to_string(), ainf.field().to_string()));
        }
        if r == 0 || a0.det().is_zero() || ainf.det().is_zero() {
            return Err(Error::DegenerateLattice);
        }
        Ok(Bundle { field: a0.field(), a0, ainf, split: OnceLock::new() })
    }

    /// `O(a_1) + ... + O(a_r)` with `A0 = I`, `Ainf = diag(t^a_i)`.
    pub fn split(field: Field, exps: &[i64]) -> Self {
        let r = exps.len();
        assert!(r > 0, "split bundle of rank zero");
        let id = MatrixR::identity(field, r);
        Bundle {
            field,
            a0: id.clone(),
            ainf: MatrixR::t_diag(field, exps),
            split: OnceLock::from(Splitting::from_frame(exps.to_vec(), id.clone(), id)),
        }
    }

    pub fn trivial(field: Field, r: usize) -> Self {
        Self::split(field, &vec![0; r])
    }

    /// `K = O(-2)`, trivialized by `dt` on the finite chart; `ds = -t^-2 dt`.
    pub fn canonical(field: Field) -> Self {
        Bundle {
            field,
            a0: MatrixR::identity(field, 1),
            ainf: MatrixR::diag(field, vec![-RatFunc::t_pow(field, -2)]),
            split: OnceLock::from(Splitting::from_frame(vec![-2], MatrixR::identity(field, 1), MatrixR::identity(field, 1))),
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rank(&self) -> usize {
        self.a0.rows()
    }

    pub fn a0(&self) -> &MatrixR {
        &self.a0
    }

    pub fn ainf(&self) -> &MatrixR {
        &self.ainf
    }

    /// Lattice basis in the chart of `x`.
    pub fn chart(&self, x: &CurvePoint) -> &MatrixR {
        match x {
            CurvePoint::Finite(_) => &self.a0,
            CurvePoint::Infinity => &self.ainf,
        }
    }

    /// `deg det Ainf - deg det A0`.
    pub fn degree(&self) -> i64 {
        self.ainf.det().degree().unwrap() - self.a0.det().degree().unwrap()
    }

    pub fn splitting(&self) -> &Splitting {
        self.split.get_or_init(|| split_lattice_pair(&self.a0, &self.ainf).expect("validated lattice pair splits"))
    }

    pub fn exponents(&self) -> &[i64] {
        &self.splitting().exponents
    }

    /// `(rank, degree, splitting)`.
    pub fn invariants(&self) -> (usize, i64, &Splitting) {
        (self.rank(), self.degree(), self.splitting())
    }

    // Duals, tensor products and twists inherit an adapted frame from a
    // splitting that is already known, which spares a factorization of the
    // (often much larger) result.

    pub fn dual(&self) -> Bundle {
        let a0 = self.a0.inverse().unwrap().transpose();
        let ainf = self.ainf.inverse().unwrap().transpose();
        let split =
            self.derived(|s| Splitting::from_frame(s.exponents.iter().map(|a| -a).collect(), s.frame_inv.transpose(), s.frame.transpose()));
        Bundle { field: self.field, a0, ainf, split }
    }

    fn derived(&self, f: impl FnOnce(&Splitting) -> Splitting) -> OnceLock<Splitting> {
        match self.split.get() {
            Some(s) => OnceLock::from(f(s)),
            None => OnceLock::new(),
        }
    }

    /// `self (x) other`; index `(i, l)` maps to `i * other.rank() + l`.
    pub fn tensor(&self, other: &Bundle) -> Bundle {
        let split = match (self.split.get(), other.split.get()) {
            (Some(s), Some(o)) => OnceLock::from(Splitting::from_frame(
                s.exponents.iter().flat_map(|a| o.exponents.iter().map(move |c| a + c)).collect(),
                s.frame.kron(&o.frame),
                s.frame_inv.kron(&o.frame_inv),
            )),
            _ => OnceLock::new(),
        };
        Bundle { field: self.field, a0: self.a0.kron(&other.a0), ainf: self.ainf.kron(&other.ainf), split }
    }

    /// `self (x) O(m x)`.
    pub fn twist(&self, x: &CurvePoint, m: i64) -> Bundle {
        let f = self.field;
        let (a0, ainf, c) = match x {
            CurvePoint::Finite(a) => {
                let c = RatFunc::linear_pow(a, -m);
                (self.a0.scale(&c), self.ainf.clone(), c)
            }
            CurvePoint::Infinity => (self.a0.clone(), self.ainf.scale(&RatFunc::t_pow(f, m)), RatFunc::one(f)),
        };
        let split = self.derived(|s| {
            let cinv = c.inv().expect("nonzero");
            Splitting::from_frame(s.exponents.iter().map(|a| a + m).collect(), s.frame.scale(&c), s.frame_inv.scale(&cinv))
        });
        Bundle { field: f, a0, ainf, split }
    }

    /// `End V = V* (x) V`.
    pub fn end(&self) -> Bundle {
        self.dual().tensor(self)
    }

    /// `self (x) K`.
    pub fn canonical_twist(&self) -> Bundle {
        self.tensor(&Bundle::canonical(self.field))
    }

    /// Canonical (Hermite) bases of both lattices; equal iff the subsheaves of
    /// `k(t)^r` coincide.
    pub fn canonical_pair(&self) -> Result<(MatrixR, MatrixR)> {
        Ok((canonical_at(&self.a0, &CurvePoint::Finite(self.field.zero()))?, canonical_at(&self.ainf, &CurvePoint::Infinity)?))
    }

    /// Same lattices, canonical bases.
    pub fn canonicalized(&self) -> Result<Bundle> {
        let (a0, ainf) = self.canonical_pair()?;
        // Same sheaf, so any known splitting still applies.
        Ok(Bundle { field: self.field, a0, ainf, split: self.split.clone() })
    }

    /// Sheaf equality inside `k(t)^r`.
    pub fn same_sheaf(&self, other: &Bundle) -> Result<bool> {
        if self.rank() != other.rank() || self.field != other.field {
            return Ok(false);
        }
        Ok(self.canonical_pair()? == other.canonical_pair()?)
    }
}

impl fmt::Display for Bundle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "bundle(rank {}, degree {}) over {}", self.rank(), self.degree(), self.field)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn split_degree() {
        let f = Field::Rational;
        let v = Bundle::split(f, &[2, -1]);
        assert_eq!(v.rank(), 2);
        assert_eq!(v.degree(), 1);
        assert_eq!(v.exponents(), &[2, -1]);
    }

    #[test]
    fn degenerate_rejected() {
        let f = Field::Rational;
        let z = MatrixR::zeros(f, 2, 2);
        assert_eq!(Bundle::from_lattices(z, MatrixR::identity(f, 2)).unwrap_err(), Error::DegenerateLattice);
    }

    #[test]
    fn sheaf_ops_degrees() {
        let f = Field::Rational;
        let v = Bundle::split(f, &[2, -1]);
        assert_eq!(v.dual().exponents(), &[1, -2]);
        let k = Bundle::canonical(f);
        assert_eq!(k.exponents(), &[-2]);
        assert_eq!(k.dual().canonical_twist().exponents(), &[0]);
        let o1 = Bundle::split(f, &[1]);
        assert_eq!(o1.tensor(&o1).exponents(), &[2]);
        let tw = Bundle::trivial(f, 2).twist(&CurvePoint::Finite(f.zero()), 1);
        assert_eq!(tw.degree(), 2);
        assert_eq!(Bundle::trivial(f, 2).twist(&CurvePoint::Infinity, 1).exponents(), &[1, 1]);
        assert_eq!(v.end().degree(), 0);
    }
}
