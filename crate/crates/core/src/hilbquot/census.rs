//! Exhaustive comparison, over a small prime field, of torsion quotients with
//! reduced support and reduced subschemes of `PV` with distinct base points.

use rayon::prelude::*;

use super::scheme::{alpha, point_cluster, quot_to_hilb, ZScheme};
use crate::eltrans::{quot_equal, vtilde_from_tau, PrincipalPart, QuotPoint, TorsionModule};
use crate::error::{Error, Result};
use crate::exactalg::{CurvePoint, Field, Poly, Scalar};
use crate::p1bundles::Bundle;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CensusReport {
    pub field: Field,
    pub rank: usize,
    pub degree: usize,
    pub quot_count: usize,
    pub hilb_count: usize,
    /// `C(q + 1, d) * ((q^r - 1) / (q - 1))^d`.
    pub formula: u128,
    pub bijective: bool,
}

/// Rational points of `P^1`, infinity last.
pub fn rational_points(field: Field) -> Vec<CurvePoint> {
    let mut pts: Vec<CurvePoint> = field.elements().into_iter().map(CurvePoint::Finite).collect();
    pts.push(CurvePoint::Infinity);
    pts
}

/// Normalized representatives of the points of `P^(r-1)` over the field.
pub fn projective_points(field: Field, r: usize) -> Vec<Vec<Scalar>> {
    let elems = field.elements();
    let mut out = Vec::new();
    for lead in 0..r {
        let free = r - lead - 1;
        let mut idx = vec![0usize; free];
        loop {
            let mut v = vec![field.zero(); r];
            v[lead] = field.one();
            for (i, &e) in idx.iter().enumerate() {
                v[lead + 1 + i] = elems[e].clone();
            }
            out.push(v);
            let mut carry = 0;
            while carry < free {
                idx[carry] += 1;
                if idx[carry] < elems.len() {
                    break;
                }
                idx[carry] = 0;
                carry += 1;
            }
            if carry == free {
                break;
            }
        }
    }
    out
}

fn subsets<T: Clone>(items: &[T], d: usize) -> Vec<Vec<T>> {
    if d == 0 {
        return vec![Vec::new()];
    }
    if items.len() < d {
        return Vec::new();
    }
    let mut out = Vec::new();
    for (i, x) in items.iter().enumerate() {
        for mut rest in subsets(&items[i + 1..], d - 1) {
            rest.insert(0, x.clone());
            out.push(rest);
        }
    }
    out
}

fn binomial(n: u128, k: u128) -> u128 {
    (0..k).fold(1u128, |acc, i| acc * (n - i) / (i + 1))
}

/// One configuration: distinct points with a fiber direction at each.
fn configurations(field: Field, r: usize, d: usize) -> Vec<Vec<(CurvePoint, Vec<Scalar>)>> {
    let dirs = projective_points(field, r);
    let mut out = Vec::new();
    for pts in subsets(&rational_points(field), d) {
        let mut idx = vec![0usize; d];
        loop {
            out.push(pts.iter().cloned().zip(idx.iter().map(|&i| dirs[i].clone())).collect());
            let mut carry = 0;
            while carry < d {
                idx[carry] += 1;
                if idx[carry] < dirs.len() {
                    break;
                }
                idx[carry] = 0;
                carry += 1;
            }
            if carry == d {
                break;
            }
        }
    }
    out
}

fn distinct(qs: &[QuotPoint]) -> Result<usize> {
    let mut uniq: Vec<&QuotPoint> = Vec::new();
    for q in qs {
        let mut seen = false;
        for u in &uniq {
            if quot_equal(q, u)? {
                seen = true;
                break;
            }
        }
        if !seen {
            uniq.push(q);
        }
    }
    Ok(uniq.len())
}

/// Both sides over the given bundle; `budget` bounds the number of
/// configurations on each side.
pub fn enumerate_reduced_over(v: &Bundle, d: usize, budget: usize) -> Result<CensusReport> {
    let field = v.field();
    let Some(q) = field.size() else {
        return Err(Error::Precondition("census needs a finite field".into()));
    };
    let r = v.rank();
    if d == 0 || d as u64 > q + 1 {
        return Err(Error::Precondition(format!("degree {d} outside 1..={}", q + 1)));
    }
    let n = ((q as u128).pow(r as u32) - 1) / (q as u128 - 1);
    let formula = binomial(q as u128 + 1, d as u128) * n.pow(d as u32);
    if formula > budget as u128 {
        return Err(Error::BudgetExceeded(format!("{formula} configurations exceed the budget of {budget}")));
    }
    let configs = configurations(field, r, d);

    // Quot side: tau = sum of nu/z at each point; check alpha o quot_to_hilb.
    let quot_side: Vec<(QuotPoint, ZScheme, bool)> = configs
        .par_iter()
        .map(|cfg| {
            let tau = TorsionModule::from_parts(
                cfg.iter()
                    .map(|(x, nu)| PrincipalPart::new(x.clone(), 1, nu.iter().map(|c| Poly::constant(c.clone())).collect()))
                    .collect(),
            );
            let qp = vtilde_from_tau(v, &tau)?.quot;
            let z = quot_to_hilb(v, &tau)?;
            let back = quot_equal(&alpha(v, &z)?.quot, &qp)?;
            Ok((qp, z, back))
        })
        .collect::<Result<_>>()?;

    // Hilb side: reduced schemes; check quot_to_hilb o alpha.
    let hilb_side: Vec<(ZScheme, QuotPoint, bool)> = configs
        .par_iter()
        .map(|cfg| {
            let z = ZScheme::new(cfg.iter().map(|(x, nu)| point_cluster(x.clone(), nu)).collect::<Result<_>>()?)?;
            let a = alpha(v, &z)?;
            let back = quot_to_hilb(v, &a.tau_z)? == z;
            Ok((z, a.quot, back))
        })
        .collect::<Result<_>>()?;

    let quots: Vec<QuotPoint> = quot_side.iter().map(|t| t.0.clone()).collect();
    let images: Vec<QuotPoint> = hilb_side.iter().map(|t| t.1.clone()).collect();
    let quot_count = distinct(&quots)?;
    let mut zs: Vec<&ZScheme> = Vec::new();
    for (z, _, _) in &hilb_side {
        if !zs.contains(&z) {
            zs.push(z);
        }
    }
    let hilb_count = zs.len();
    let injective = distinct(&images)? == hilb_count;
    let bijective = quot_count == hilb_count
        && injective
        && quot_side.iter().all(|t| t.2)
        && hilb_side.iter().all(|t| t.2)
        && quot_side.iter().all(|t| t.1.length() == d);
    Ok(CensusReport { field, rank: r, degree: d, quot_count, hilb_count, formula, bijective })
}

/// Census over the trivial bundle of rank `r`.
pub fn enumerate_reduced(field: Field, r: usize, d: usize, budget: usize) -> Result<CensusReport> {
    enumerate_reduced_over(&Bundle::trivial(field, r), d, budget)
}
