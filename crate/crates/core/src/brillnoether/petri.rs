//! Subspaces of global sections, the Petri multiplication, the restricted cup
//! product and the subscheme `Z_Lambda ⊂ PE*` cut out by a subspace of sections.

use rand_chacha::ChaCha8Rng;

use crate::eltrans::{quotient_module, TorsionModule};
use crate::error::{Error, Result};
use crate::exactalg::{CurvePoint, MatrixK, MatrixR, RatFunc, Scalar};
use crate::hilbquot::{quot_to_hilb, ZScheme};
use crate::p1bundles::Bundle;

/// `m` independent global sections of `E`, as vectors in `k(t)^r`.
#[derive(Clone, Debug)]
pub struct SectionSubspace {
    pub bundle: Bundle,
    pub basis: Vec<Vec<RatFunc>>,
}

impl SectionSubspace {
    pub fn new(bundle: &Bundle, basis: Vec<Vec<RatFunc>>) -> Result<Self> {
        let coords = coords_matrix(bundle, &basis)?;
        if coords.rank() != basis.len() {
            return Err(Error::InvalidInput("sections are dependent".into()));
        }
        Ok(SectionSubspace { bundle: bundle.clone(), basis })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates in the section basis of the bundle, one column per section.
    pub fn coords(&self) -> MatrixK {
        coords_matrix(&self.bundle, &self.basis).expect("validated sections")
    }

    /// The `r x r` matrix of sections when `dim = rank`.
    pub fn matrix(&self) -> MatrixR {
        MatrixR::from_cols(self.bundle.field(), self.bundle.rank(), self.basis.clone())
    }
}

fn coords_matrix(e: &Bundle, secs: &[Vec<RatFunc>]) -> Result<MatrixK> {
    let cols = secs
        .iter()
        .map(|s| {
            if s.len() != e.rank() {
                return Err(Error::DimensionMismatch("section length".into()));
            }
            e.section_coords(s).ok_or_else(|| Error::InvalidInput("not a global section".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MatrixK::from_cols(e.field(), e.h0(), cols))
}

/// Elementwise Kronecker product of ambient vectors.
pub fn kron_vec(a: &[RatFunc], b: &[RatFunc]) -> Vec<RatFunc> {
    a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect()
}

#[derive(Clone, Debug)]
pub struct PetriData {
    pub domain: usize,
    pub codomain: usize,
    pub matrix: MatrixK,
    pub rank: usize,
}

impl PetriData {
    pub fn injective(&self) -> bool {
        self.rank == self.domain
    }
}

/// `mu: Lambda (x) H^0(K (x) E*) -> H^0(K (x) End E)`, `s (x) eta -> eta (x) s`,
/// with `Lambda = H^0(E)` when absent. Columns are indexed by
/// `(section, eta)` in that order.
pub fn petri_rank(e: &Bundle, lambda: Option<&SectionSubspace>) -> PetriData {
    let f = e.field();
    let secs = match lambda {
        Some(l) => l.basis.clone(),
        None => e.sections(),
    };
    let etas = e.dual().canonical_twist().sections();
    let target = e.end().canonical_twist();
    let codomain = target.h0();
    let mut cols = Vec::new();
    for s in &secs {
        for eta in &etas {
            cols.push(target.section_coords(&kron_vec(eta, s)).expect("product of sections is a section"));
        }
    }
    let matrix = MatrixK::from_cols(f, codomain, cols);
    let rank = matrix.rank();
    PetriData { domain: secs.len() * etas.len(), codomain, matrix, rank }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MInjectivity {
    pub m: usize,
    pub sampled: usize,
    pub coordinate: usize,
    pub all_injective: bool,
}

/// Petri `m`-injectivity on all coordinate `m`-subspaces of the section
/// basis plus `samples` random ones. Sampling does not prove the claim.
pub fn petri_m_injective(e: &Bundle, m: usize, samples: usize, rng: &mut ChaCha8Rng) -> Result<MInjectivity> {
    let secs = e.sections();
    if m > secs.len() {
        return Err(Error::Precondition(format!("m = {m} exceeds h0 = {}", secs.len())));
    }
    let mut all = true;
    let mut coordinate = 0;
    for idx in index_subsets(secs.len(), m) {
        let l = SectionSubspace::new(e, idx.iter().map(|&i| secs[i].clone()).collect())?;
        all &= petri_rank(e, Some(&l)).injective();
        coordinate += 1;
    }
    let mut sampled = 0;
    while sampled < samples {
        let basis = crate::random::section_combinations(e, m, rng);
        let Ok(l) = SectionSubspace::new(e, basis) else { continue };
        all &= petri_rank(e, Some(&l)).injective();
        sampled += 1;
    }
    Ok(MInjectivity { m, sampled, coordinate, all_injective: all })
}

fn index_subsets(n: usize, m: usize) -> Vec<Vec<usize>> {
    if m == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in 0..n {
        for mut rest in index_subsets(n - first - 1, m - 1) {
            for r in rest.iter_mut() {
                *r += first + 1;
            }
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// `phi(v)` for `phi` in `End E = E* (x) E`: `phi(v)_l = sum_i phi_(i,l) v_i`.
pub fn apply_endomorphism(phi: &[RatFunc], v: &[RatFunc]) -> Vec<RatFunc> {
    let r = v.len();
    let f = v[0].field();
    (0..r)
        .map(|l| {
            let mut acc = RatFunc::zero(f);
            for (i, vi) in v.iter().enumerate() {
                let p = &phi[i * r + l];
                if !p.is_zero() && !vi.is_zero() {
                    acc = &acc + &(p * vi);
                }
            }
            acc
        })
        .collect()
}

/// `H^1(End E) -> Hom(Lambda, H^1(E))`, `xi -> (lambda -> xi(lambda))`. Rows
/// are indexed by `(section b, H^1(E) basis class)`, columns by the
/// `H^1(End E)` basis.
pub fn restricted_cup(e: &Bundle, lambda: &SectionSubspace) -> MatrixK {
    let f = e.field();
    let end = e.end();
    let h = end.h1();
    let h1e = e.h1();
    let mut m = MatrixK::zeros(f, lambda.dim() * h1e, h);
    for a in 0..h {
        let xi = end.h1_representative(a);
        for (b, s) in lambda.basis.iter().enumerate() {
            for (c, val) in e.h1_class(&apply_endomorphism(&xi, s)).into_iter().enumerate() {
                m.set(b * h1e + c, a, val);
            }
        }
    }
    m
}

#[derive(Clone, Debug)]
pub struct ZLambda {
    /// `O (x) Lambda*` inside the ambient of `E*`.
    pub target: Bundle,
    pub tau: TorsionModule,
    pub z: ZScheme,
    /// `det` of the evaluation matrix in the finite frame.
    pub det: crate::exactalg::Poly,
    /// Order of vanishing of the determinant at infinity.
    pub inf_order: usize,
    pub det_squarefree: bool,
}

/// `tau_Lambda = coker(E* -> O (x) Lambda*)` and `Z_Lambda = quot_to_hilb` of
/// it, for `dim Lambda = rank E`.
pub fn zlambda(e: &Bundle, lambda: &SectionSubspace) -> Result<ZLambda> {
    let r = e.rank();
    if lambda.dim() != r {
        return Err(Error::Precondition(format!("need {r} sections, got {}", lambda.dim())));
    }
    let m = lambda.matrix();
    let n0 = e.a0().inverse().ok_or(Error::Singular)?.mul(&m);
    let det = n0.det();
    if det.is_zero() {
        return Err(Error::DegenerateEvaluation);
    }
    let det = det.num().clone();
    let ninf = e.ainf().inverse().ok_or(Error::Singular)?.mul(&m);
    let inf_order = CurvePoint::Infinity.valuation(&ninf.det()).unwrap_or(0).max(0) as usize;
    let (roots, complete) = det.rational_roots()?;
    if !complete {
        return Err(Error::UnsupportedPlace("evaluation degenerates over a non-rational point".into()));
    }
    let mut support: Vec<CurvePoint> = roots.into_iter().map(CurvePoint::Finite).collect();
    if inf_order > 0 {
        support.push(CurvePoint::Infinity);
    }
    let mt = m.inverse().ok_or(Error::DegenerateEvaluation)?.transpose();
    let target = Bundle::from_lattices(mt.clone(), mt)?;
    let dual = e.dual();
    let tau = quotient_module(&dual, &target, &support)?;
    let z = quot_to_hilb(&dual, &tau)?;
    let det_squarefree = det.is_squarefree() && inf_order <= 1;
    Ok(ZLambda { target, tau, z, det: det.monic(), inf_order, det_squarefree })
}

/// Transpose check: `P_End mu'_b = C_b^T P_E` for every section `b`, where
/// `mu'_b(eta) = lambda_b (x) eta` in `K (x) (End E)*` and `C_b` is the block
/// of the restricted cup for `b`.
pub fn cup_petri_duality(e: &Bundle, lambda: &SectionSubspace) -> bool {
    let cup = restricted_cup(e, lambda);
    let end = e.end();
    let p_end = end.serre_pairing();
    let p_e = e.serre_pairing();
    let dual_target = end.dual().canonical_twist();
    let etas = e.dual().canonical_twist().sections();
    let h1e = e.h1();
    for (b, s) in lambda.basis.iter().enumerate() {
        let cols: Vec<Vec<Scalar>> = etas.iter().map(|eta| dual_target.section_coords(&kron_vec(s, eta)).expect("section")).collect();
        let mu = MatrixK::from_cols(e.field(), dual_target.h0(), cols);
        let lhs = p_end.mul(&mu);
        let rows: Vec<Vec<Scalar>> = (0..h1e).map(|c| cup.row(b * h1e + c)).collect();
        let cb = MatrixK::from_rows(e.field(), end.h1(), rows);
        let rhs = cb.transpose().mul(&p_e);
        if lhs != rhs {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{Field, Poly};

    fn sec(f: Field, entries: &[&[i64]]) -> Vec<RatFunc> {
        entries.iter().map(|c| RatFunc::from_poly(Poly::from_ints(f, c))).collect()
    }

    #[test]
    fn petri_examples() {
        let f = Field::Rational;
        let p = petri_rank(&Bundle::split(f, &[1, -3]), None);
        assert_eq!((p.domain, p.rank), (4, 3));
        assert!(!p.injective());
        // K (x) O(1)* = O(-3) has no sections.
        let p = petri_rank(&Bundle::split(f, &[1]), None);
        assert_eq!((p.domain, p.rank), (0, 0));
        // O(2) + O(-4): products of quadrics span the quartics.
        let p = petri_rank(&Bundle::split(f, &[2, -4]), None);
        assert_eq!((p.domain, p.rank), (9, 5));
        let p = petri_rank(&Bundle::split(f, &[3, 0]), None);
        assert_eq!((p.domain, p.rank), (0, 0));
        assert!(p.injective());
    }

    #[test]
    fn zlambda_examples() {
        let f = Field::Rational;
        let e = Bundle::split(f, &[2, 0]);
        let l = SectionSubspace::new(&e, vec![sec(f, &[&[0, 0, 1], &[]]), sec(f, &[&[1], &[1]])]).unwrap();
        let z = zlambda(&e, &l).unwrap();
        assert_eq!(z.det, Poly::from_ints(f, &[0, 0, 1]));
        assert!(!z.det_squarefree);
        assert_eq!(z.z.clusters().len(), 1);
        assert_eq!(z.z.clusters()[0].k, 2);
        let l = SectionSubspace::new(&e, vec![sec(f, &[&[-1, 0, 1], &[]]), sec(f, &[&[1], &[1]])]).unwrap();
        let z = zlambda(&e, &l).unwrap();
        assert!(z.det_squarefree);
        assert_eq!(z.z.clusters().iter().map(|c| c.k).collect::<Vec<_>>(), vec![1, 1]);
        let l = SectionSubspace::new(&e, vec![sec(f, &[&[0, 0, 1], &[]]), sec(f, &[&[1], &[]])]).unwrap();
        assert_eq!(zlambda(&e, &l).unwrap_err(), Error::DegenerateEvaluation);
    }

    #[test]
    fn cup_zero_target_and_duality() {
        let f = Field::prime(7).unwrap();
        let e = Bundle::split(f, &[2, 0]);
        let l = SectionSubspace::new(&e, vec![sec(f, &[&[1], &[1]])]).unwrap();
        assert!(restricted_cup(&e, &l).is_zero());
        let e = Bundle::split(f, &[2, -2]);
        let l = SectionSubspace::new(&e, vec![sec(f, &[&[1], &[]]), sec(f, &[&[0, 1], &[]])]).unwrap();
        let cup = restricted_cup(&e, &l);
        let mu = petri_rank(&e, Some(&l));
        // Serre duality: rank of the cup equals the rank of mu_Lambda.
        assert_eq!(cup.rank(), mu.rank);
        assert!(cup_petri_duality(&e, &l));
    }
}
