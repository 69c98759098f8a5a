//! The elementary transformation `0 -> V -> Vtilde -> tau -> 0` and the
//! subsheaf `Vtilde* ⊆ V*` it determines.

use super::normal_form::{normal_form, NormalForm};
use super::principal::{PrincipalPart, TorsionModule};
use crate::error::{Error, Result};
use crate::exactalg::{laurent_expand, CurvePoint, MatrixR, Poly, RatFunc};
use crate::p1bundles::lattice::{canonical_at, impose_conditions, lattice_sum, JetCondition};
use crate::p1bundles::Bundle;

/// A subsheaf of `V*` of finite colength, stored by canonical lattice bases.
/// `base` is the canonical pair of `V*` itself.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotPoint {
    pub base: (MatrixR, MatrixR),
    pub l0: MatrixR,
    pub linf: MatrixR,
    pub colength: usize,
}

impl QuotPoint {
    /// From a base bundle `V` and any lattice bases of a subsheaf of `V*`.
    pub fn new(v: &Bundle, l0: &MatrixR, linf: &MatrixR) -> Result<Self> {
        let vd = v.dual();
        let base = vd.canonical_pair()?;
        let sub = Bundle::from_lattices(l0.clone(), linf.clone())?;
        let (l0, linf) = sub.canonical_pair()?;
        let contained = crate::exactalg::hnf::contained_global(&l0, &base.0)? && crate::exactalg::hnf::contained_local_inf(&linf, &base.1)?;
        if !contained {
            return Err(Error::Precondition("sublattice not contained in the dual lattices".into()));
        }
        let colength = vd.degree() - sub.degree();
        Ok(QuotPoint { base, l0, linf, colength: colength as usize })
    }

    /// `Vtilde*` as a bundle.
    pub fn bundle(&self) -> Bundle {
        Bundle::from_lattices(self.l0.clone(), self.linf.clone()).expect("stored lattices are valid")
    }
}

pub fn quot_equal(q1: &QuotPoint, q2: &QuotPoint) -> Result<bool> {
    if q1.base != q2.base {
        return Err(Error::DifferentBaseBundles);
    }
    Ok(q1.l0 == q2.l0 && q1.linf == q2.linf)
}

#[derive(Clone, Debug)]
pub struct VTilde {
    pub vtilde: Bundle,
    pub quot: QuotPoint,
    pub degree: usize,
    pub normal_forms: Vec<NormalForm>,
}

fn check_field(v: &Bundle, tau: &TorsionModule) -> Result<()> {
    for p in tau.generators() {
        if p.rank() != v.rank() {
            return Err(Error::DimensionMismatch(format!("principal part of rank {} over a rank {} bundle", p.rank(), v.rank())));
        }
        if p.field() != v.field() || !p.point.field_check(v.field()) {
            return Err(Error::FieldMismatch(v.field().to_string(), p.field().to_string()));
        }
    }
    Ok(())
}

/// Lattices of `V + <generators>`, one chart at a time.
fn sum_lattices(v: &Bundle, gens: &[&PrincipalPart]) -> Result<(MatrixR, MatrixR)> {
    let mut fin = Vec::new();
    let mut inf = Vec::new();
    for p in gens {
        let sec = v.principal_section(&p.point, &p.vector, p.pole);
        match p.point {
            CurvePoint::Finite(_) => fin.push(sec),
            CurvePoint::Infinity => inf.push(sec),
        }
    }
    let f = v.field();
    let l0 = lattice_sum(v.a0(), &fin, &CurvePoint::Finite(f.zero()))?;
    let linf = lattice_sum(v.ainf(), &inf, &CurvePoint::Infinity)?;
    Ok((l0, linf))
}

/// `{f in V* : <p, f> regular for every generator p}`, by jet conditions.
fn pairing_kernel(v: &Bundle, tau: &TorsionModule) -> Result<(MatrixR, MatrixR)> {
    let vd = v.dual();
    let f = v.field();
    let mut l0 = canonical_at(vd.a0(), &CurvePoint::Finite(f.zero()))?;
    let mut linf = canonical_at(vd.ainf(), &CurvePoint::Infinity)?;
    for (x, gens) in &tau.parts {
        let chart = v.chart(x);
        let conds: Vec<JetCondition> = gens
            .iter()
            .filter(|p| !p.is_zero())
            .map(|p| {
                let local: Vec<RatFunc> = p.vector.iter().map(|c| x.local_to_t(c)).collect();
                JetCondition { w: chart.mul_vec(&local), order: p.pole }
            })
            .collect();
        match x {
            CurvePoint::Finite(_) => l0 = impose_conditions(&l0, x, &conds)?,
            CurvePoint::Infinity => linf = impose_conditions(&linf, x, &conds)?,
        }
    }
    Ok((l0, linf))
}

/// `adj(frame)^T = det(frame) frame^-T` in `t`, with columns `j < s` scaled by
/// `z^k_j`: the adapted-frame generators of `Vtilde*` near the point, in the
/// coordinates of the dual local frame.
fn adapted_generators(nf: &NormalForm) -> Vec<Vec<RatFunc>> {
    let f = nf.frame.field();
    let x = &nf.point;
    let det = nf.frame.det();
    let adj_t = nf.dual_frame.scale(&det);
    let r = adj_t.rows();
    let mut out = Vec::new();
    for j in 0..r {
        let zk = match nf.generators.get(j) {
            Some(g) => x.z_pow(f, g.pole as i64),
            None => RatFunc::one(f),
        };
        out.push((0..r).map(|i| &x.local_rat_to_t(adj_t.get(i, j)) * &zk).collect());
    }
    out
}

/// `Vtilde*` from the adapted frames at each support point.
fn adapted_frame_lattices(v: &Bundle, nfs: &[NormalForm]) -> Result<(MatrixR, MatrixR)> {
    let vd = v.dual();
    let f = v.field();
    let big_k = |nf: &NormalForm| nf.generators.first().map_or(0, |g| g.pole) as i64;
    let finite: Vec<&NormalForm> = nfs.iter().filter(|nf| !nf.point.is_infinity()).collect();
    // `m_x` kills the other finite points and is a unit at `x`.
    let weight = |skip: Option<&CurvePoint>| -> RatFunc {
        let mut acc = RatFunc::one(f);
        for nf in &finite {
            if Some(&nf.point) != skip {
                acc = &acc * &nf.point.z_pow(f, big_k(nf));
            }
        }
        acc
    };
    let mut fin_gens: Vec<Vec<RatFunc>> = Vec::new();
    let w_all = weight(None);
    for c in vd.a0().columns() {
        fin_gens.push(c.iter().map(|e| e * &w_all).collect());
    }
    for nf in &finite {
        let w = weight(Some(&nf.point));
        for g in adapted_generators(nf) {
            fin_gens.push(vd.a0().mul_vec(&g).iter().map(|e| e * &w).collect());
        }
    }
    let l0 = canonical_at(&MatrixR::from_cols(f, v.rank(), fin_gens), &CurvePoint::Finite(f.zero()))?;
    let linf = match nfs.iter().find(|nf| nf.point.is_infinity()) {
        None => canonical_at(vd.ainf(), &CurvePoint::Infinity)?,
        Some(nf) => {
            let sk = CurvePoint::Infinity.z_pow(f, big_k(nf));
            let mut gens: Vec<Vec<RatFunc>> = vd.ainf().columns().iter().map(|c| c.iter().map(|e| e * &sk).collect()).collect();
            for g in adapted_generators(nf) {
                gens.push(vd.ainf().mul_vec(&g));
            }
            canonical_at(&MatrixR::from_cols(f, v.rank(), gens), &CurvePoint::Infinity)?
        }
    };
    Ok((l0, linf))
}

/// `Vtilde`, the point `Vtilde* ⊆ V*`, and `d = deg Vtilde - deg V`. The
/// subsheaf is computed three ways (dual of the lattice sum, pairing kernel,
/// adapted frames) and the generator reduction is checked against the input;
/// any disagreement is reported as an inconsistency.
pub fn vtilde_from_tau(v: &Bundle, tau: &TorsionModule) -> Result<VTilde> {
    check_field(v, tau)?;
    let nfs: Vec<NormalForm> = tau.support().iter().map(|x| normal_form(tau, x)).collect::<Result<_>>()?;
    let raw: Vec<&PrincipalPart> = tau.generators().collect();
    let (l0, linf) = sum_lattices(v, &raw)?;
    let reduced: Vec<&PrincipalPart> = nfs.iter().flat_map(|nf| nf.generators.iter()).collect();
    if sum_lattices(v, &reduced)? != (l0.clone(), linf.clone()) {
        return Err(Error::Inconsistent("normal form changed the generated module".into()));
    }
    let vtilde = Bundle::from_lattices(l0, linf)?;
    let dual = vtilde.dual();
    let q = QuotPoint::new(v, dual.a0(), dual.ainf())?;
    let (k0, kinf) = pairing_kernel(v, tau)?;
    if !quot_equal(&q, &QuotPoint::new(v, &k0, &kinf)?)? {
        return Err(Error::Inconsistent("pairing kernel differs from the dual of the lattice sum".into()));
    }
    let (a0, ainf) = adapted_frame_lattices(v, &nfs)?;
    if !quot_equal(&q, &QuotPoint::new(v, &a0, &ainf)?)? {
        return Err(Error::Inconsistent("adapted-frame span differs from the pairing kernel".into()));
    }
    let d = vtilde.degree() - v.degree();
    let local: usize = nfs.iter().map(NormalForm::degree).sum();
    if d < 0 || d as usize != local || q.colength != local {
        return Err(Error::Inconsistent(format!("degree {d} against local degrees summing to {local}")));
    }
    Ok(VTilde { vtilde, quot: q, degree: local, normal_forms: nfs })
}

/// Generators of `W / V` at the given support points, for bundles
/// `V ⊆ W` whose quotient is supported there.
pub fn quotient_module(v: &Bundle, w: &Bundle, support: &[CurvePoint]) -> Result<TorsionModule> {
    let f = v.field();
    let mut tau = TorsionModule::new();
    for x in support {
        let inv = v.chart(x).inverse().ok_or(Error::Singular)?;
        for g in w.chart(x).columns() {
            let c = inv.mul_vec(&g);
            let jets: Vec<_> = c.iter().map(|ci| laurent_expand(ci, x, 0)).collect();
            let k = jets.iter().filter(|j| !j.is_zero()).map(|j| -j.start).max().unwrap_or(0);
            if k <= 0 {
                continue;
            }
            let vector = jets.iter().map(|j| Poly::new(f, (0..k).map(|m| j.coeff(m - k)).collect())).collect();
            tau.push(PrincipalPart::new(x.clone(), k as usize, vector));
        }
        if !tau.parts.contains_key(x) {
            return Err(Error::Precondition(format!("quotient not supported at {x}")));
        }
    }
    Ok(tau)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::Field;

    fn pp(f: Field, x: CurvePoint, pole: usize, v: &[&[i64]]) -> PrincipalPart {
        PrincipalPart::new(x, pole, v.iter().map(|c| Poly::from_ints(f, c)).collect())
    }

    #[test]
    fn hyperplane_gives_o1_plus_o() {
        let f = Field::Rational;
        let v = Bundle::trivial(f, 2);
        let x = CurvePoint::Finite(f.zero());
        let tau = TorsionModule::from_parts(vec![pp(f, x, 1, &[&[1], &[0]])]);
        let out = vtilde_from_tau(&v, &tau).unwrap();
        assert_eq!(out.vtilde.exponents(), &[1, 0]);
        assert_eq!(out.degree, 1);
        let expect = MatrixR::diag(f, vec![RatFunc::t(f), RatFunc::one(f)]);
        assert_eq!(out.quot.l0, expect);
    }

    #[test]
    fn full_fiber_twists() {
        let f = Field::prime(5).unwrap();
        let v = Bundle::split(f, &[1, -2]);
        for x in [CurvePoint::Finite(f.int(3)), CurvePoint::Infinity] {
            let tau = TorsionModule::from_parts(vec![pp(f, x.clone(), 1, &[&[1], &[0]]), pp(f, x.clone(), 1, &[&[0], &[1]])]);
            let out = vtilde_from_tau(&v, &tau).unwrap();
            assert!(out.vtilde.same_sheaf(&v.twist(&x, 1)).unwrap());
            assert_eq!(out.degree, 2);
        }
    }

    #[test]
    fn length_two_jet() {
        let f = Field::Rational;
        let v = Bundle::trivial(f, 2);
        let tau = TorsionModule::from_parts(vec![pp(f, CurvePoint::Finite(f.zero()), 2, &[&[1], &[0, 1]])]);
        let out = vtilde_from_tau(&v, &tau).unwrap();
        assert_eq!(out.degree, 2);
        assert_eq!(out.vtilde.exponents(), &[1, 1]);
    }

    #[test]
    fn distinct_hyperplanes_distinct_points() {
        let f = Field::Rational;
        let v = Bundle::trivial(f, 2);
        let x = CurvePoint::Finite(f.zero());
        let a = vtilde_from_tau(&v, &TorsionModule::from_parts(vec![pp(f, x.clone(), 1, &[&[1], &[0]])])).unwrap();
        let b = vtilde_from_tau(&v, &TorsionModule::from_parts(vec![pp(f, x, 1, &[&[0], &[1]])])).unwrap();
        assert!(!quot_equal(&a.quot, &b.quot).unwrap());
        assert_eq!(a.vtilde.exponents(), b.vtilde.exponents());
        let other =
            vtilde_from_tau(&Bundle::split(f, &[0, 1]), &TorsionModule::from_parts(vec![pp(f, CurvePoint::Infinity, 1, &[&[1], &[0]])]))
                .unwrap();
        assert_eq!(quot_equal(&a.quot, &other.quot).unwrap_err(), Error::DifferentBaseBundles);
    }

    #[test]
    fn generator_order_irrelevant() {
        let f = Field::prime(7).unwrap();
        let v = Bundle::split(f, &[0, -1]);
        let x = CurvePoint::Finite(f.int(2));
        let g1 = pp(f, x.clone(), 2, &[&[1, 1], &[3]]);
        let g2 = pp(f, CurvePoint::Infinity, 1, &[&[2], &[1]]);
        let a = vtilde_from_tau(&v, &TorsionModule::from_parts(vec![g1.clone(), g2.clone()])).unwrap();
        let b = vtilde_from_tau(&v, &TorsionModule::from_parts(vec![g2, g1])).unwrap();
        assert!(quot_equal(&a.quot, &b.quot).unwrap());
        assert_eq!(a.degree, 3);
    }

    #[test]
    fn two_finite_points() {
        let f = Field::Rational;
        let v = Bundle::split(f, &[-1, -3]);
        let g1 = pp(f, CurvePoint::Finite(f.int(1)), 2, &[&[1, 2], &[-1, 1]]);
        let g2 = pp(f, CurvePoint::Finite(f.int(-2)), 1, &[&[0], &[1]]);
        let out = vtilde_from_tau(&v, &TorsionModule::from_parts(vec![g1, g2])).unwrap();
        assert_eq!(out.degree, 3);
        assert_eq!(out.vtilde.degree(), v.degree() + 3);
        let back = quotient_module(&v, &out.vtilde, &[CurvePoint::Finite(f.int(-2)), CurvePoint::Finite(f.int(1))]).unwrap();
        let again = vtilde_from_tau(&v, &back).unwrap();
        assert!(quot_equal(&again.quot, &out.quot).unwrap());
    }
}
