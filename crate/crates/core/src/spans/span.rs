//! Linear spans of subschemes of `PV` inside `P H^1(V (x) F)`, computed both
//! from jet evaluation of dual sections and from coboundaries of `tau_Z`.

use crate::eltrans::{normal_form, quot_equal, vtilde_from_tau, TorsionModule};
use crate::error::{Error, Result};
use crate::exactalg::laurent::regular_coeffs;
use crate::exactalg::{CurvePoint, Field, MatrixK, Poly, RatFunc, Scalar};
use crate::hilbquot::scheme::quot_to_hilb_against;
use crate::hilbquot::{alpha, Cluster, ZScheme};
use crate::p1bundles::cohomology::dot;
use crate::p1bundles::{Bundle, H1Space};

/// A linear subspace of `H^1`, by a canonical basis in the split-model
/// coordinates of the ambient bundle. The empty span has `dim = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct H1Subspace {
    pub ambient: H1Space,
    pub basis: MatrixK,
    pub dim: usize,
}

impl H1Subspace {
    pub fn from_vectors(field: Field, ambient: H1Space, vecs: Vec<Vec<Scalar>>) -> Self {
        let basis = MatrixK::from_cols(field, ambient.dim, vecs).column_space();
        let dim = basis.cols();
        H1Subspace { ambient, basis, dim }
    }

    pub fn projective_dim(&self) -> i64 {
        self.dim as i64 - 1
    }

    pub fn contains(&self, other: &H1Subspace) -> bool {
        self.basis.hstack(&other.basis).rank() == self.dim
    }

    pub fn contains_vector(&self, v: &[Scalar]) -> bool {
        let col = MatrixK::from_cols(self.basis.field(), self.ambient.dim, vec![v.to_vec()]);
        self.basis.hstack(&col).rank() == self.dim
    }

    pub fn is_everything(&self) -> bool {
        self.dim == self.ambient.dim
    }
}

#[derive(Clone, Debug)]
pub struct SpanResult {
    pub span: H1Subspace,
    /// `rk(F) length(Z) - 1 - dim Span`; the plain defect when `F = O`.
    pub defect: i64,
}

/// `<eta, chart(x) (nu (x) e_l)>` as a local function, in the local trivialization
/// of `K` (`dt` on the finite chart, `ds = -t^-2 dt` at infinity).
fn local_pairing(w: &Bundle, x: &CurvePoint, eta: &[RatFunc], local: &[RatFunc]) -> RatFunc {
    let f = w.field();
    let g = dot(eta, &w.chart(x).mul_vec(local));
    match x {
        CurvePoint::Finite(_) => g,
        CurvePoint::Infinity => &g * &(-RatFunc::t_pow(f, 2)),
    }
}

fn unit(field: Field, n: usize, l: usize) -> Vec<Poly> {
    (0..n).map(|i| if i == l { Poly::one(field) } else { Poly::zero(field) }).collect()
}

/// `nu (x) e_l` in the local frame of `V (x) F`.
fn tensor_local(nu: &[Poly], rf: usize, l: usize) -> Vec<Poly> {
    let f = nu[0].field();
    let e = unit(f, rf, l);
    nu.iter().flat_map(|a| e.iter().map(move |b| a * b)).collect()
}

/// Route A: functionals `eta -> coefficient of z^m in <eta, nu (x) e_l>` on
/// `H^0(K (x) W*)`, transported into `H^1(W)` through the Serre pairing.
fn span_by_evaluation(w: &Bundle, rf: usize, z: &ZScheme) -> Result<H1Subspace> {
    let field = w.field();
    let amb = w.h1_space();
    let etas = w.dual().canonical_twist().sections();
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    for c in z.clusters() {
        for l in 0..rf {
            let local: Vec<RatFunc> = tensor_local(&c.jet, rf, l).iter().map(|p| c.x.local_to_t(p)).collect();
            let cols: Vec<Vec<Scalar>> = etas
                .iter()
                .map(|eta| {
                    let g = local_pairing(w, &c.x, eta, &local);
                    regular_coeffs(&g, &c.x, c.k).ok_or_else(|| Error::Inconsistent("dual section with a pole".into()))
                })
                .collect::<Result<_>>()?;
            for m in 0..c.k {
                rows.push(cols.iter().map(|col| col[m].clone()).collect());
            }
        }
    }
    if rows.is_empty() {
        return Ok(H1Subspace::from_vectors(field, amb, Vec::new()));
    }
    let e = MatrixK::from_rows(field, etas.len(), rows);
    let p = w.serre_pairing();
    let pinv_t = p.inverse().ok_or_else(|| Error::Inconsistent("degenerate Serre pairing".into()))?.transpose();
    let img = pinv_t.mul(&e.transpose());
    Ok(H1Subspace::from_vectors(field, amb, img.columns()))
}

/// Route B: coboundaries of `z^i v_j (x) e_l / z^k_j` over the normal-form
/// generators of `tau_Z`.
fn span_by_coboundary(w: &Bundle, rf: usize, tau_z: &TorsionModule) -> Result<H1Subspace> {
    let field = w.field();
    let mut vecs = Vec::new();
    for x in tau_z.support() {
        for g in normal_form(tau_z, &x)?.generators {
            for i in 0..g.pole {
                let shifted: Vec<Poly> = g.vector.iter().map(|p| p.shift(i)).collect();
                for l in 0..rf {
                    vecs.push(w.coboundary(&x, &tensor_local(&shifted, rf, l), g.pole));
                }
            }
        }
    }
    Ok(H1Subspace::from_vectors(field, w.h1_space(), vecs))
}

/// The span computed by evaluating dual sections on `Z` and by coboundaries
/// of the normal form of `tau_Z`, unreconciled.
pub fn span_routes(v: &Bundle, f: &Bundle, z: &ZScheme) -> Result<(H1Subspace, H1Subspace)> {
    if v.field() != f.field() {
        return Err(Error::FieldMismatch(v.field().to_string(), f.field().to_string()));
    }
    let w = v.tensor(f);
    if w.h1() == 0 {
        return Err(Error::EmptyAmbient);
    }
    let rf = f.rank();
    let a = span_by_evaluation(&w, rf, z)?;
    let tau_z = alpha(v, z)?.tau_z;
    let b = span_by_coboundary(&w, rf, &tau_z)?;
    Ok((a, b))
}

/// `Span(Z)` inside `P H^1(V (x) F)` and the relative defect; both routes are
/// computed and must agree.
pub fn rel_span(v: &Bundle, f: &Bundle, z: &ZScheme) -> Result<SpanResult> {
    if v.field() != f.field() {
        return Err(Error::FieldMismatch(v.field().to_string(), f.field().to_string()));
    }
    let (a, b) = span_routes(v, f, z)?;
    if a != b {
        return Err(Error::Inconsistent(format!("evaluation span of dim {} vs coboundary span of dim {}", a.dim, b.dim)));
    }
    let defect = (f.rank() * z.length()) as i64 - 1 - a.projective_dim();
    Ok(SpanResult { span: a, defect })
}

pub fn span_of(v: &Bundle, z: &ZScheme) -> Result<SpanResult> {
    rel_span(v, &Bundle::trivial(v.field(), 1), z)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityReport {
    pub lhs: i64,
    pub rhs: i64,
    pub holds: bool,
}

/// `h^0(Vtilde (x) F) - h^0(V (x) F)` against the relative defect of
/// `Z = quot_to_hilb(tau)`; with `F = O` this is the plain identity.
pub fn relggrr_check(v: &Bundle, f: &Bundle, tau: &TorsionModule) -> Result<IdentityReport> {
    let vt = vtilde_from_tau(v, tau)?;
    let z = quot_to_hilb_against(v, tau, &vt.quot)?;
    let span = rel_span(v, f, &z)?;
    let vt = vt.vtilde;
    let lhs = vt.tensor(f).cohomology_basis().h0 as i64 - v.tensor(f).cohomology_basis().h0 as i64;
    Ok(IdentityReport { lhs, rhs: span.defect, holds: lhs == span.defect })
}

pub fn ggrr_check(v: &Bundle, tau: &TorsionModule) -> Result<IdentityReport> {
    relggrr_check(v, &Bundle::trivial(v.field(), 1), tau)
}

/// `Span(Z) = Span(Z')` for schemes defining the same Quot point.
pub fn same_span_check(v: &Bundle, z1: &ZScheme, z2: &ZScheme) -> Result<bool> {
    if !quot_equal(&alpha(v, z1)?.quot, &alpha(v, z2)?.quot)? {
        return Err(Error::DifferentQuotPoints);
    }
    Ok(span_of(v, z1)?.span == span_of(v, z2)?.span)
}

/// `dim Span(Z) + 1 = h^1(V) - h^1(V_Z)`.
pub fn exactness_check(v: &Bundle, z: &ZScheme) -> Result<bool> {
    let s = span_of(v, z)?;
    let vz = alpha(v, z)?.vz;
    Ok(s.span.dim as i64 == v.h1() as i64 - vz.h1() as i64)
}

/// `psi(nu)`: the class of `nu / z` at the cluster's point; zero exactly at
/// base points of `psi`.
pub fn psi_point(v: &Bundle, nu: &Cluster) -> Result<Vec<Scalar>> {
    if v.h1() == 0 {
        return Err(Error::EmptyAmbient);
    }
    if nu.k != 1 || nu.jet.len() != v.rank() {
        return Err(Error::InvalidInput("psi_point takes a length-one cluster of the bundle's rank".into()));
    }
    Ok(v.coboundary(&nu.x, &nu.jet, 1))
}

/// A point of `PV x_X PF`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaPoint {
    pub x: CurvePoint,
    pub v: Vec<Scalar>,
    pub w: Vec<Scalar>,
}

impl DeltaPoint {
    pub fn new(x: CurvePoint, v: Vec<Scalar>, w: Vec<Scalar>) -> Result<Self> {
        if v.iter().all(Scalar::is_zero) || w.iter().all(Scalar::is_zero) {
            return Err(Error::InvalidInput("zero fiber direction".into()));
        }
        Ok(DeltaPoint { x, v, w })
    }
}

/// The class of `(v (x) w) / z` in `H^1(V (x) F)`.
pub fn psi_delta(v: &Bundle, f: &Bundle, d: &DeltaPoint) -> Result<Vec<Scalar>> {
    let w = v.tensor(f);
    if w.h1() == 0 {
        return Err(Error::EmptyAmbient);
    }
    if d.v.len() != v.rank() || d.w.len() != f.rank() {
        return Err(Error::DimensionMismatch("delta point directions".into()));
    }
    let vec: Vec<Poly> = d.v.iter().flat_map(|a| d.w.iter().map(move |b| Poly::constant(a * b))).collect();
    Ok(w.coboundary(&d.x, &vec, 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eltrans::PrincipalPart;
    use crate::hilbquot::point_cluster;

    fn pt(f: Field, x: CurvePoint, nu: &[i64]) -> Cluster {
        point_cluster(x, &nu.iter().map(|&a| f.int(a)).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn two_points_on_o_minus_3() {
        let f = Field::Rational;
        let v = Bundle::split(f, &[-3]);
        let z = ZScheme::new(vec![pt(f, CurvePoint::Finite(f.int(0)), &[1]), pt(f, CurvePoint::Finite(f.int(1)), &[1])]).unwrap();
        let s = span_of(&v, &z).unwrap();
        assert_eq!(s.span.projective_dim(), 1);
        assert_eq!(s.defect, 0);
        let empty = span_of(&v, &ZScheme::new(vec![]).unwrap()).unwrap();
        assert_eq!(empty.span.projective_dim(), -1);
        assert_eq!(empty.defect, 0);
    }

    #[test]
    fn two_points_in_one_fibre_span_the_fibre() {
        let f = Field::prime(7).unwrap();
        let v = Bundle::split(f, &[-3, -2]);
        let x = CurvePoint::Finite(f.int(2));
        let z = ZScheme::new(vec![pt(f, x.clone(), &[1, 0]), pt(f, x.clone(), &[1, 3])]).unwrap();
        let s = span_of(&v, &z).unwrap();
        let fibre: Vec<Vec<Scalar>> = (0..2)
            .map(|i| {
                let mut e = vec![f.zero(); 2];
                e[i] = f.one();
                psi_point(&v, &point_cluster(x.clone(), &e).unwrap()).unwrap()
            })
            .collect();
        assert_eq!(s.span, H1Subspace::from_vectors(f, v.h1_space(), fibre));
    }

    #[test]
    fn ggrr_on_line_bundle() {
        let f = Field::Rational;
        let v = Bundle::split(f, &[-3]);
        let tau = TorsionModule::from_parts(
            [0, 1, 2].iter().map(|&a| PrincipalPart::new(CurvePoint::Finite(f.int(a)), 1, vec![Poly::one(f)])).collect(),
        );
        let rep = ggrr_check(&v, &tau).unwrap();
        assert_eq!((rep.lhs, rep.rhs), (1, 1));
        let g2 = Bundle::split(f, &[-2, -2]);
        let x = CurvePoint::Finite(f.int(5));
        let full =
            TorsionModule::from_parts(vec![PrincipalPart::new(x.clone(), 1, unit(f, 2, 0)), PrincipalPart::new(x, 1, unit(f, 2, 1))]);
        assert!(ggrr_check(&g2, &full).unwrap().holds);
        assert_eq!(ggrr_check(&Bundle::trivial(f, 2), &full).unwrap_err(), Error::EmptyAmbient);
    }

    #[test]
    fn segre_points() {
        let f = Field::prime(11).unwrap();
        let v = Bundle::split(f, &[-3, -3]);
        let mut vecs = Vec::new();
        for a in [0, 4] {
            for nu in [[1, 0], [0, 1]] {
                vecs.push(psi_point(&v, &pt(f, CurvePoint::Finite(f.int(a)), &nu)).unwrap());
            }
        }
        assert_eq!(MatrixK::from_cols(f, 4, vecs).rank(), 4);
    }

    #[test]
    fn relative_reduces_to_plain() {
        let f = Field::prime(5).unwrap();
        let v = Bundle::split(f, &[-4, -1]);
        let z = ZScheme::new(vec![pt(f, CurvePoint::Finite(f.int(1)), &[1, 2]), pt(f, CurvePoint::Infinity, &[0, 1])]).unwrap();
        let a = span_of(&v, &z).unwrap();
        let b = rel_span(&v, &Bundle::trivial(f, 1), &z).unwrap();
        assert_eq!(a.span, b.span);
        let d = DeltaPoint::new(CurvePoint::Finite(f.int(1)), vec![f.one(), f.int(2)], vec![f.one()]).unwrap();
        assert_eq!(psi_delta(&v, &Bundle::trivial(f, 1), &d).unwrap(), psi_point(&v, &z.clusters()[0]).unwrap());
    }

    #[test]
    fn relative_proper_subspace() {
        let f = Field::Rational;
        let v = Bundle::split(f, &[-6, -4]);
        let fb = Bundle::split(f, &[0, 1]);
        let z = ZScheme::new(vec![pt(f, CurvePoint::Finite(f.int(1)), &[1, 1]), pt(f, CurvePoint::Finite(f.int(-1)), &[1, 2])]).unwrap();
        let s = rel_span(&v, &fb, &z).unwrap();
        assert!(!s.span.is_everything());
        assert!(s.span.dim <= 4);
    }
}
