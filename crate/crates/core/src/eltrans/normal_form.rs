//! Reduction of generators of a torsion module at one point to generators
//! with independent leading vectors.

use super::principal::{PrincipalPart, TorsionModule};
use crate::error::{Error, Result};
use crate::exactalg::{CurvePoint, Field, MatrixK, MatrixR, Poly, RatFunc};

/// Generators `v_j(z) / z^k_j` with `k_1 >= ... >= k_s` and independent
/// `v_j(0)`. `frame` completes `v_1, ..., v_s` by standard basis vectors to a
/// local frame; its entries are polynomials in the local coordinate `z`, as is
/// `dual_frame = frame^-T` (rational in `z`, regular at `z = 0`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalForm {
    pub point: CurvePoint,
    pub generators: Vec<PrincipalPart>,
    pub frame: MatrixR,
    pub dual_frame: MatrixR,
}

impl NormalForm {
    pub fn s(&self) -> usize {
        self.generators.len()
    }

    pub fn poles(&self) -> Vec<usize> {
        self.generators.iter().map(|g| g.pole).collect()
    }

    pub fn degree(&self) -> usize {
        self.generators.iter().map(|g| g.pole).sum()
    }

    pub fn leading_vectors(&self) -> Vec<Vec<crate::exactalg::Scalar>> {
        self.generators.iter().map(|g| g.vector.iter().map(|p| p.coeff(0)).collect()).collect()
    }
}

fn leading(p: &PrincipalPart) -> Vec<crate::exactalg::Scalar> {
    p.vector.iter().map(|c| c.coeff(0)).collect()
}

fn sort_generators(gens: &mut [PrincipalPart]) {
    gens.sort_by(|a, b| b.pole.cmp(&a.pole).then_with(|| leading(a).cmp(&leading(b))));
}

/// Rescale by a local unit so the first nonzero coordinate of `v(0)` is 1 and
/// the whole coordinate is the constant 1 modulo `z^k`.
fn normalize(p: &PrincipalPart) -> PrincipalPart {
    let i0 = p.vector.iter().position(|c| !c.coeff(0).is_zero()).expect("nonzero leading vector");
    let u = p.vector[i0].series_inv(p.pole).expect("unit");
    PrincipalPart::new(p.point.clone(), p.pole, p.vector.iter().map(|c| c.mul_trunc(&u, p.pole)).collect())
}

pub fn normal_form(tau: &TorsionModule, x: &CurvePoint) -> Result<NormalForm> {
    let input = tau.parts.get(x).filter(|g| !g.is_empty()).ok_or_else(|| Error::EmptyGenerators(x.to_string()))?;
    let r = input[0].rank();
    let field = input[0].field();
    let mut gens: Vec<PrincipalPart> = input.iter().filter(|p| !p.is_zero()).cloned().collect();
    loop {
        sort_generators(&mut gens);
        let Some((l, coeffs)) = first_dependent(field, &gens) else { break };
        let mut w = gens[l].vector.clone();
        for (j, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (wi, vj) in w.iter_mut().zip(&gens[j].vector) {
                *wi = &*wi - &vj.scale(c);
            }
        }
        let reduced = PrincipalPart::new(x.clone(), gens[l].pole, w);
        if reduced.is_zero() {
            gens.remove(l);
        } else {
            gens[l] = reduced;
        }
    }
    let mut gens: Vec<PrincipalPart> = gens.iter().map(normalize).collect();
    sort_generators(&mut gens);
    let (frame, dual_frame) = adapted_frame(field, r, &gens);
    Ok(NormalForm { point: x.clone(), generators: gens, frame, dual_frame })
}

/// First `l` whose leading vector lies in the span of the earlier ones, with
/// the coefficients expressing it.
fn first_dependent(field: Field, gens: &[PrincipalPart]) -> Option<(usize, Vec<crate::exactalg::Scalar>)> {
    let r = gens.first()?.rank();
    for l in 1..gens.len() {
        let earlier: Vec<_> = gens[..l].iter().map(leading).collect();
        let m = MatrixK::from_cols(field, r, earlier);
        if let Some(c) = m.solve(&leading(&gens[l])) {
            return Some((l, c));
        }
    }
    None
}

fn adapted_frame(field: Field, r: usize, gens: &[PrincipalPart]) -> (MatrixR, MatrixR) {
    let mut cols: Vec<Vec<Poly>> = gens.iter().map(|g| g.vector.clone()).collect();
    let mut lead: Vec<Vec<_>> = gens.iter().map(leading).collect();
    for i in 0..r {
        if cols.len() == r {
            break;
        }
        let mut e = vec![field.zero(); r];
        e[i] = field.one();
        let mut trial = lead.clone();
        trial.push(e.clone());
        if MatrixK::from_cols(field, r, trial).rank() == lead.len() + 1 {
            lead.push(e);
            let mut c = vec![Poly::zero(field); r];
            c[i] = Poly::one(field);
            cols.push(c);
        }
    }
    let rat: Vec<Vec<RatFunc>> = cols.into_iter().map(|c| c.into_iter().map(RatFunc::from_poly).collect()).collect();
    let frame = MatrixR::from_cols(field, r, rat);
    let dual = frame.inverse().expect("frame invertible at z = 0").transpose();
    (frame, dual)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pp(f: Field, pole: usize, v: &[&[i64]]) -> PrincipalPart {
        PrincipalPart::new(CurvePoint::Finite(f.zero()), pole, v.iter().map(|c| Poly::from_ints(f, c)).collect())
    }

    #[test]
    fn single_generator_rescaled() {
        let f = Field::Rational;
        let tau = TorsionModule::from_parts(vec![pp(f, 2, &[&[1], &[0, 1]])]);
        let nf = normal_form(&tau, &CurvePoint::Finite(f.zero())).unwrap();
        assert_eq!(nf.poles(), vec![2]);
        assert_eq!(nf.generators[0].vector, vec![Poly::one(f), Poly::t(f)]);
    }

    #[test]
    fn full_fiber() {
        let f = Field::prime(7).unwrap();
        let tau = TorsionModule::from_parts(vec![pp(f, 1, &[&[0], &[1]]), pp(f, 1, &[&[1], &[0]])]);
        let nf = normal_form(&tau, &CurvePoint::Finite(f.zero())).unwrap();
        assert_eq!(nf.poles(), vec![1, 1]);
        assert_eq!(MatrixK::from_cols(f, 2, nf.leading_vectors()).rank(), 2);
    }

    #[test]
    fn dependent_generator_becomes_regular() {
        // e1/t^2 and (e1 + t e2)/t: the second reduces to e2, which is regular.
        let f = Field::Rational;
        let tau = TorsionModule::from_parts(vec![pp(f, 2, &[&[1], &[0]]), pp(f, 1, &[&[1], &[0, 1]])]);
        let nf = normal_form(&tau, &CurvePoint::Finite(f.zero())).unwrap();
        assert_eq!(nf.poles(), vec![2]);
        assert_eq!(nf.degree(), 2);
    }

    #[test]
    fn reduction_lowers_pole() {
        // (1,0)/t^2 and (1,1)/t^2 -> (1,0)/t^2 and (0,1)/t^2
        let f = Field::Rational;
        let tau = TorsionModule::from_parts(vec![pp(f, 2, &[&[1], &[0]]), pp(f, 2, &[&[1, 3], &[1]])]);
        let nf = normal_form(&tau, &CurvePoint::Finite(f.zero())).unwrap();
        assert_eq!(nf.poles(), vec![2, 2]);
        let tau = TorsionModule::from_parts(vec![pp(f, 2, &[&[1], &[0]]), pp(f, 2, &[&[1, 3], &[0, 1]])]);
        let nf = normal_form(&tau, &CurvePoint::Finite(f.zero())).unwrap();
        assert_eq!(nf.poles(), vec![2, 1]);
    }

    #[test]
    fn empty_is_error() {
        let f = Field::Rational;
        let tau = TorsionModule::new();
        assert!(matches!(normal_form(&tau, &CurvePoint::Finite(f.zero())), Err(Error::EmptyGenerators(_))));
    }
}
