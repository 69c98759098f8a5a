//! Curvilinear subschemes of the scroll `PV`, the subsheaf `V_Z* ⊆ V*` of
//! linear forms vanishing on `Z`, and the passage back from torsion quotients.

use crate::eltrans::{normal_form, quot_equal, quotient_module, vtilde_from_tau, QuotPoint, TorsionModule};
use crate::error::{Error, Result};
use crate::exactalg::{CurvePoint, Poly, RatFunc, Scalar};
use crate::p1bundles::lattice::{canonical_at, condition_matrix, impose_conditions, JetCondition};
use crate::p1bundles::Bundle;

/// A curvilinear piece of length `k` over `x`: the jet `nu(z)` of a local
/// section of `PV`, in the local frame of `V`. Stored normalized: the first
/// coordinate with `nu_i(0) != 0` is the constant 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cluster {
    pub x: CurvePoint,
    pub k: usize,
    pub jet: Vec<Poly>,
}

impl Cluster {
    pub fn new(x: CurvePoint, k: usize, jet: Vec<Poly>) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidInput("cluster of length zero".into()));
        }
        let jet: Vec<Poly> = jet.iter().map(|p| p.truncate(k)).collect();
        let i0 = jet
            .iter()
            .position(|p| !p.coeff(0).is_zero())
            .ok_or_else(|| Error::InvalidInput("cluster jet vanishes at its point".into()))?;
        let u = jet[i0].series_inv(k).expect("unit");
        let jet = jet.iter().map(|p| p.mul_trunc(&u, k)).collect();
        Ok(Cluster { x, k, jet })
    }

    /// The point of the fiber `P(V_x)` where the cluster is supported.
    pub fn branch(&self) -> Vec<Scalar> {
        self.jet.iter().map(|p| p.coeff(0)).collect()
    }

    fn key(&self) -> (CurvePoint, Vec<Vec<Scalar>>, usize) {
        (self.x.clone(), self.jet.iter().map(|p| p.coeffs().to_vec()).collect(), self.k)
    }

    fn condition(&self, v: &Bundle) -> JetCondition {
        let local: Vec<RatFunc> = self.jet.iter().map(|p| self.x.local_to_t(p)).collect();
        JetCondition { w: v.chart(&self.x).mul_vec(&local), order: self.k }
    }
}

/// A union of curvilinear clusters with pairwise distinct branch points,
/// kept sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZScheme {
    clusters: Vec<Cluster>,
}

impl ZScheme {
    pub fn new(mut clusters: Vec<Cluster>) -> Result<Self> {
        clusters.sort_by_key(Cluster::key);
        for w in clusters.windows(2) {
            if w[0].x == w[1].x && w[0].branch() == w[1].branch() {
                return Err(Error::InvalidInput(format!("two clusters share a branch point over {}", w[0].x)));
            }
        }
        if let Some(c) = clusters.first() {
            let r = c.jet.len();
            if clusters.iter().any(|c| c.jet.len() != r) {
                return Err(Error::DimensionMismatch("cluster jets of different ranks".into()));
            }
        }
        Ok(ZScheme { clusters })
    }

    pub fn clusters(&self) -> &[Cluster] {
        &self.clusters
    }

    pub fn length(&self) -> usize {
        self.clusters.iter().map(|c| c.k).sum()
    }

    /// The image `pi(Z)` as a sorted list of distinct points.
    pub fn base_points(&self) -> Vec<CurvePoint> {
        let mut xs: Vec<CurvePoint> = self.clusters.iter().map(|c| c.x.clone()).collect();
        xs.dedup();
        xs
    }

    fn at(&self, x: &CurvePoint) -> impl Iterator<Item = &Cluster> {
        let x = x.clone();
        self.clusters.iter().filter(move |c| c.x == x)
    }
}

#[derive(Clone, Debug)]
pub struct Alpha {
    pub vz: Bundle,
    pub tau_z: TorsionModule,
    pub quot: QuotPoint,
}

fn check_scheme(v: &Bundle, z: &ZScheme) -> Result<()> {
    for c in z.clusters() {
        if c.jet.len() != v.rank() {
            return Err(Error::DimensionMismatch(format!("cluster of rank {} over a rank {} bundle", c.jet.len(), v.rank())));
        }
        if c.jet[0].field() != v.field() || !c.x.field_check(v.field()) {
            return Err(Error::FieldMismatch(v.field().to_string(), c.jet[0].field().to_string()));
        }
    }
    Ok(())
}

/// `V_Z* = {f in V* : <f, nu> = 0 mod z^k on every cluster}`, `V_Z` its dual,
/// and `tau_Z = V_Z / V`.
pub fn alpha(v: &Bundle, z: &ZScheme) -> Result<Alpha> {
    check_scheme(v, z)?;
    let vd = v.dual();
    let f = v.field();
    let mut l0 = canonical_at(vd.a0(), &CurvePoint::Finite(f.zero()))?;
    let mut linf = canonical_at(vd.ainf(), &CurvePoint::Infinity)?;
    for x in z.base_points() {
        let conds: Vec<JetCondition> = z.at(&x).map(|c| c.condition(v)).collect();
        match x {
            CurvePoint::Finite(_) => l0 = impose_conditions(&l0, &x, &conds)?,
            CurvePoint::Infinity => linf = impose_conditions(&linf, &x, &conds)?,
        }
    }
    let quot = QuotPoint::new(v, &l0, &linf)?;
    let vz = quot.bundle().dual();
    let support = nonzero_support(v, &vz, z.base_points())?;
    let tau_z = quotient_module(v, &vz, &support)?;
    Ok(Alpha { vz, tau_z, quot })
}

/// Drop base points where `V_Z` agrees with `V` (every condition there was
/// implied by the others, so the quotient has no stalk).
fn nonzero_support(v: &Bundle, vz: &Bundle, pts: Vec<CurvePoint>) -> Result<Vec<CurvePoint>> {
    let mut out = Vec::new();
    for x in pts {
        let inv = v.chart(&x).inverse().ok_or(Error::Singular)?;
        let has_pole = vz.chart(&x).columns().iter().any(|g| inv.mul_vec(g).iter().any(|c| x.valuation(c).is_some_and(|val| val < 0)));
        if has_pole {
            out.push(x);
        }
    }
    Ok(out)
}

fn normal_form_clusters(tau: &TorsionModule) -> Result<ZScheme> {
    let mut clusters = Vec::new();
    for x in tau.support() {
        for g in normal_form(tau, &x)?.generators {
            clusters.push(Cluster::new(x.clone(), g.pole, g.vector)?);
        }
    }
    ZScheme::new(clusters)
}

/// One cluster per normal-form generator; verified by `alpha` reproducing
/// the subsheaf of `vtilde_from_tau`.
pub fn quot_to_hilb(v: &Bundle, tau: &TorsionModule) -> Result<ZScheme> {
    quot_to_hilb_against(v, tau, &vtilde_from_tau(v, tau)?.quot)
}

/// `quot_to_hilb` with the Quot point of `tau` already known.
pub(crate) fn quot_to_hilb_against(v: &Bundle, tau: &TorsionModule, expect: &QuotPoint) -> Result<ZScheme> {
    let z = normal_form_clusters(tau)?;
    if !quot_equal(&alpha(v, &z)?.quot, expect)? {
        return Err(Error::Inconsistent("alpha of the constructed scheme misses the torsion quotient".into()));
    }
    Ok(z)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiDefect {
    pub defect: usize,
    /// `length(Z) - (deg V_Z - deg V)`.
    pub by_degree: usize,
    /// `length(Z)` minus the rank of the jet-evaluation conditions.
    pub by_rank: usize,
}

impl PiDefect {
    pub fn nondefective(&self) -> bool {
        self.defect == 0
    }
}

pub fn pi_defect(v: &Bundle, z: &ZScheme) -> Result<PiDefect> {
    let a = alpha(v, z)?;
    let len = z.length() as i64;
    let gained = a.vz.degree() - v.degree();
    let by_degree = len - gained;
    let vd = v.dual();
    let mut rank = 0usize;
    for x in z.base_points() {
        let conds: Vec<JetCondition> = z.at(&x).map(|c| c.condition(v)).collect();
        let (m, _) = condition_matrix(vd.chart(&x), &x, &conds)?;
        rank += m.rank();
    }
    let by_rank = len - rank as i64;
    if by_degree != by_rank || by_degree < 0 {
        return Err(Error::Inconsistent(format!("defect {by_degree} by degree, {by_rank} by jet rank")));
    }
    Ok(PiDefect { defect: by_degree as usize, by_degree: by_degree as usize, by_rank: by_rank as usize })
}

/// `alpha(quot_to_hilb(tau)) = Vtilde*` as points of the Quot scheme.
pub fn roundtrip_check(v: &Bundle, tau: &TorsionModule) -> Result<bool> {
    let expect = vtilde_from_tau(v, tau)?.quot;
    let z = normal_form_clusters(tau)?;
    quot_equal(&alpha(v, &z)?.quot, &expect)
}

/// Length-one cluster at `x` in the direction `nu`.
pub fn point_cluster(x: CurvePoint, nu: &[Scalar]) -> Result<Cluster> {
    Cluster::new(x, 1, nu.iter().map(|c| Poly::constant(c.clone())).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eltrans::PrincipalPart;
    use crate::exactalg::Field;

    fn cl(f: Field, x: CurvePoint, k: usize, jet: &[&[i64]]) -> Cluster {
        Cluster::new(x, k, jet.iter().map(|c| Poly::from_ints(f, c)).collect()).unwrap()
    }

    #[test]
    fn single_hyperplane() {
        let f = Field::Rational;
        let v = Bundle::trivial(f, 2);
        let z = ZScheme::new(vec![cl(f, CurvePoint::Finite(f.zero()), 1, &[&[1], &[0]])]).unwrap();
        let a = alpha(&v, &z).unwrap();
        assert_eq!(a.vz.exponents(), &[1, 0]);
        assert_eq!(a.quot.l0, crate::exactalg::MatrixR::diag(f, vec![RatFunc::t(f), RatFunc::one(f)]));
        assert_eq!(pi_defect(&v, &z).unwrap().defect, 0);
    }

    #[test]
    fn three_points_in_a_fiber() {
        let f = Field::prime(5).unwrap();
        let v = Bundle::split(f, &[0, -1]);
        let x = CurvePoint::Finite(f.int(2));
        let z =
            ZScheme::new(vec![cl(f, x.clone(), 1, &[&[1], &[0]]), cl(f, x.clone(), 1, &[&[0], &[1]]), cl(f, x.clone(), 1, &[&[1], &[1]])])
                .unwrap();
        let a = alpha(&v, &z).unwrap();
        assert!(a.vz.same_sheaf(&v.twist(&x, 1)).unwrap());
        assert_eq!(a.vz.degree(), v.degree() + 2);
        let d = pi_defect(&v, &z).unwrap();
        assert_eq!(d.defect, 1);
        assert_eq!(d.by_rank, 1);
    }

    #[test]
    fn order_two_cluster() {
        let f = Field::Rational;
        let v = Bundle::trivial(f, 2);
        let z = ZScheme::new(vec![cl(f, CurvePoint::Finite(f.zero()), 2, &[&[1], &[0, 1]])]).unwrap();
        let a = alpha(&v, &z).unwrap();
        assert_eq!(a.vz.degree(), 2);
        assert_eq!(crate::p1bundles::oracle_h0(&a.vz, None), 4);
        assert_eq!(a.vz.h0(), 4);
    }

    #[test]
    fn quot_to_hilb_examples() {
        let f = Field::Rational;
        let v = Bundle::trivial(f, 2);
        let x = CurvePoint::Finite(f.zero());
        let p = PrincipalPart::new(x.clone(), 2, vec![Poly::one(f), Poly::t(f)]);
        let z = quot_to_hilb(&v, &TorsionModule::from_parts(vec![p.clone()])).unwrap();
        assert_eq!(z.clusters(), &[cl(f, x.clone(), 2, &[&[1], &[0, 1]])]);
        assert!(roundtrip_check(&v, &TorsionModule::from_parts(vec![p])).unwrap());
        let full = TorsionModule::from_parts(vec![
            PrincipalPart::new(x.clone(), 1, vec![Poly::one(f), Poly::zero(f)]),
            PrincipalPart::new(x.clone(), 1, vec![Poly::zero(f), Poly::one(f)]),
        ]);
        let z = quot_to_hilb(&v, &full).unwrap();
        assert_eq!(z.length(), 2);
        assert!(z.clusters().iter().all(|c| c.k == 1));
        assert_eq!(pi_defect(&v, &z).unwrap().defect, 0);
    }

    #[test]
    fn tau_z_regenerates_vz() {
        let f = Field::prime(7).unwrap();
        let v = Bundle::split(f, &[1, -2]);
        let z =
            ZScheme::new(vec![cl(f, CurvePoint::Finite(f.int(3)), 2, &[&[2, 1], &[1, 5]]), cl(f, CurvePoint::Infinity, 1, &[&[1], &[4]])])
                .unwrap();
        let a = alpha(&v, &z).unwrap();
        let again = vtilde_from_tau(&v, &a.tau_z).unwrap();
        assert!(again.vtilde.same_sheaf(&a.vz).unwrap());
    }

    #[test]
    fn shared_branch_point_rejected() {
        let f = Field::Rational;
        let x = CurvePoint::Finite(f.zero());
        let r = ZScheme::new(vec![cl(f, x.clone(), 1, &[&[2], &[4]]), cl(f, x, 2, &[&[1], &[2, 1]])]);
        assert!(matches!(r, Err(Error::InvalidInput(_))));
    }
}
