//! Principal parts `v(z) / z^k` in a bundle's local frame and torsion modules
//! generated by them.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::exactalg::laurent::regular_coeffs;
use crate::exactalg::{CurvePoint, Field, LaurentJet, Poly, RatFunc};
use crate::p1bundles::Bundle;

/// `v(z) / z^pole` at `point`, with `v` in the local frame of the bundle
/// (columns of `A0` at a finite point, of `Ainf` at infinity). Canonical:
/// every `deg v_i < pole`, and `v(0) != 0` unless the part is zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrincipalPart {
    pub point: CurvePoint,
    pub pole: usize,
    pub vector: Vec<Poly>,
}

impl PrincipalPart {
    pub fn new(point: CurvePoint, pole: usize, vector: Vec<Poly>) -> Self {
        let mut pole = pole;
        let mut vector: Vec<Poly> = vector.iter().map(|p| p.truncate(pole)).collect();
        while pole > 0 && vector.iter().all(|p| p.coeff(0).is_zero()) {
            vector = vector.iter().map(|p| p.unshift(1)).collect();
            pole -= 1;
        }
        if pole == 0 {
            let f = vector.first().map(|p| p.field());
            if let Some(f) = f {
                vector = vec![Poly::zero(f); vector.len()];
            }
        }
        PrincipalPart { point, pole, vector }
    }

    pub fn field(&self) -> Field {
        self.vector[0].field()
    }

    pub fn rank(&self) -> usize {
        self.vector.len()
    }

    pub fn is_zero(&self) -> bool {
        self.pole == 0
    }

    /// Per-coordinate Laurent tails (negative exponents only).
    pub fn tails(&self) -> Vec<LaurentJet> {
        let f = self.field();
        let zk = self.point.z_pow(f, -(self.pole as i64));
        self.vector.iter().map(|v| crate::exactalg::laurent_expand(&(&self.point.local_to_t(v) * &zk), &self.point, 0)).collect()
    }

    /// Multiplication by `z^i` (a regular germ), canonicalized.
    pub fn times_z(&self, i: usize) -> Self {
        PrincipalPart::new(self.point.clone(), self.pole, self.vector.iter().map(|p| p.shift(i)).collect())
    }
}

/// `<p, f>` modulo regular germs, for `f` an ambient covector regular at the
/// support of `p` as a section of the dual bundle.
pub fn pairing_principal(v: &Bundle, p: &PrincipalPart, f: &[RatFunc]) -> Result<PrincipalPart> {
    let field = v.field();
    let chart = v.chart(&p.point);
    let mut acc = Poly::zero(field);
    for (i, vi) in p.vector.iter().enumerate() {
        let col = chart.col(i);
        let rho = crate::p1bundles::cohomology::dot(&col, f);
        let c = regular_coeffs(&rho, &p.point, p.pole).ok_or_else(|| Error::NotRegularCovector(p.point.to_string()))?;
        acc = &acc + &vi.mul_trunc(&Poly::new(field, c), p.pole);
    }
    Ok(PrincipalPart::new(p.point.clone(), p.pole, vec![acc]))
}

/// A skyscraper torsion sheaf given by generators per support point.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TorsionModule {
    pub parts: BTreeMap<CurvePoint, Vec<PrincipalPart>>,
}

impl TorsionModule {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_parts(parts: Vec<PrincipalPart>) -> Self {
        let mut t = Self::new();
        for p in parts {
            t.push(p);
        }
        t
    }

    pub fn push(&mut self, p: PrincipalPart) {
        self.parts.entry(p.point.clone()).or_default().push(p);
    }

    pub fn support(&self) -> Vec<CurvePoint> {
        self.parts.keys().cloned().collect()
    }

    pub fn generators(&self) -> impl Iterator<Item = &PrincipalPart> {
        self.parts.values().flatten()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }
}
