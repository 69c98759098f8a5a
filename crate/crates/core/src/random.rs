//! Seeded generators for bundles with known splitting type, torsion modules,
//! subschemes and section subspaces. All randomness goes through `ChaCha8Rng`
//! so runs are reproducible from a seed.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::eltrans::{PrincipalPart, TorsionModule};
use crate::exactalg::{CurvePoint, Field, MatrixR, Poly, RatFunc, Scalar};
use crate::hilbquot::{Cluster, ZScheme};
use crate::p1bundles::Bundle;

/// Small-height scalars over the rationals, uniform over a prime field.
pub fn scalar(field: Field, rng: &mut ChaCha8Rng) -> Scalar {
    match field {
        Field::Rational => field.int(rng.gen_range(-5..=5)),
        Field::Prime(p) => field.int(rng.gen_range(0..p) as i64),
    }
}

pub fn nonzero_scalar(field: Field, rng: &mut ChaCha8Rng) -> Scalar {
    loop {
        let c = scalar(field, rng);
        if !c.is_zero() {
            return c;
        }
    }
}

pub fn poly(field: Field, max_deg: usize, rng: &mut ChaCha8Rng) -> Poly {
    Poly::new(field, (0..=max_deg).map(|_| scalar(field, rng)).collect())
}

pub fn nonzero_vector(field: Field, r: usize, rng: &mut ChaCha8Rng) -> Vec<Scalar> {
    loop {
        let v: Vec<Scalar> = (0..r).map(|_| scalar(field, rng)).collect();
        if v.iter().any(|c| !c.is_zero()) {
            return v;
        }
    }
}

/// `count` distinct rational points; infinity is included with some
/// probability when `allow_inf` holds.
pub fn distinct_points(field: Field, count: usize, allow_inf: bool, rng: &mut ChaCha8Rng) -> Vec<CurvePoint> {
    let mut pool: Vec<CurvePoint> = match field {
        Field::Prime(_) => field.elements().into_iter().map(CurvePoint::Finite).collect(),
        Field::Rational => (-12..=12).map(|a| CurvePoint::Finite(field.int(a))).collect(),
    };
    if allow_inf {
        pool.push(CurvePoint::Infinity);
    }
    assert!(count <= pool.len(), "not enough rational points");
    pool.shuffle(rng);
    pool.truncate(count);
    pool.sort();
    pool
}

/// A random unimodular polynomial matrix: a product of elementary column
/// operations with polynomial multipliers, and a diagonal of units.
fn unimodular(field: Field, r: usize, steps: usize, max_deg: usize, rng: &mut ChaCha8Rng) -> MatrixR {
    let mut m = MatrixR::identity(field, r);
    for i in 0..r {
        m.set(i, i, RatFunc::constant(nonzero_scalar(field, rng)));
    }
    if r < 2 {
        return m;
    }
    for _ in 0..steps {
        let a = rng.gen_range(0..r);
        let mut b = rng.gen_range(0..r - 1);
        if b >= a {
            b += 1;
        }
        let c = RatFunc::from_poly(poly(field, max_deg, rng));
        let mut e = MatrixR::identity(field, r);
        e.set(b, a, c);
        m = m.mul(&e);
    }
    m
}

/// A bundle isomorphic to `O(a_1) + ... + O(a_r)` with scrambled lattice
/// bases: `A0 = G U0`, `Ainf = G T W0` with `U0` unimodular over `k[t]`, `W0`
/// invertible over the local ring at infinity, `T = diag(t^a)` and `G` a
/// random invertible polynomial matrix.
pub fn disguised_split(field: Field, exps: &[i64], rng: &mut ChaCha8Rng) -> Bundle {
    let r = exps.len();
    // Coefficient growth over the rationals is the bottleneck downstream, so
    // the disguise there is lighter.
    let (steps, deg) = match field {
        Field::Rational => (r, 1),
        Field::Prime(_) => (2 * r, 2),
    };
    let g = loop {
        let g = unimodular(field, r, steps, 1, rng);
        // One extra non-unimodular factor keeps G generic.
        let mut d = MatrixR::identity(field, r);
        let i = rng.gen_range(0..r);
        d.set(i, i, RatFunc::from_poly(Poly::linear(&scalar(field, rng))));
        let g = g.mul(&d);
        if !g.det().is_zero() {
            break g;
        }
    };
    let u0 = unimodular(field, r, steps, deg, rng);
    let w0 = unimodular(field, r, steps, deg, rng).transpose();
    let w0 = MatrixR::from_rows(
        field,
        r,
        w0.poly_entries().iter().map(|row| row.iter().map(|p| RatFunc::from_poly(p.clone()).invert_variable()).collect()).collect(),
    );
    let a0 = g.mul(&u0);
    let ainf = g.mul(&MatrixR::t_diag(field, exps)).mul(&w0);
    Bundle::from_lattices(a0, ainf).expect("invertible by construction")
}

/// Exponents in `lo..=hi`, sorted descending.
pub fn exponents(r: usize, lo: i64, hi: i64, rng: &mut ChaCha8Rng) -> Vec<i64> {
    let mut e: Vec<i64> = (0..r).map(|_| rng.gen_range(lo..=hi)).collect();
    e.sort_by(|a, b| b.cmp(a));
    e
}

/// A torsion module with `points` support points and up to `gens` generators
/// per point, poles at most `max_pole`.
pub fn torsion(field: Field, r: usize, points: usize, gens: usize, max_pole: usize, rng: &mut ChaCha8Rng) -> TorsionModule {
    let mut tau = TorsionModule::new();
    for x in distinct_points(field, points, true, rng) {
        let n = rng.gen_range(1..=gens);
        for _ in 0..n {
            let k = rng.gen_range(1..=max_pole);
            let mut v: Vec<Poly> = (0..r).map(|_| poly(field, k - 1, rng)).collect();
            let lead = nonzero_vector(field, r, rng);
            for (vi, c) in v.iter_mut().zip(lead) {
                *vi = &(&*vi - &Poly::constant(vi.coeff(0))) + &Poly::constant(c);
            }
            tau.push(PrincipalPart::new(x.clone(), k, v));
        }
    }
    tau
}

/// `d` length-one quotients at distinct points.
pub fn reduced_torsion(field: Field, r: usize, d: usize, rng: &mut ChaCha8Rng) -> TorsionModule {
    TorsionModule::from_parts(
        distinct_points(field, d, true, rng)
            .into_iter()
            .map(|x| PrincipalPart::new(x, 1, nonzero_vector(field, r, rng).into_iter().map(Poly::constant).collect()))
            .collect(),
    )
}

/// Clusters of lengths up to `max_k` over distinct base points.
pub fn zscheme(field: Field, r: usize, clusters: usize, max_k: usize, rng: &mut ChaCha8Rng) -> ZScheme {
    let mut out = Vec::new();
    for x in distinct_points(field, clusters, true, rng) {
        let k = rng.gen_range(1..=max_k);
        let lead = nonzero_vector(field, r, rng);
        let jet: Vec<Poly> = lead.into_iter().map(|c| &Poly::constant(c) + &poly(field, k - 1, rng).shift(1)).collect();
        out.push(Cluster::new(x, k, jet).expect("nonzero leading vector"));
    }
    ZScheme::new(out).expect("distinct base points")
}

/// `m` random combinations of the global sections of `e`.
pub fn section_combinations(e: &Bundle, m: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<RatFunc>> {
    let f = e.field();
    let secs = e.sections();
    (0..m)
        .map(|_| {
            let mut acc = vec![RatFunc::zero(f); e.rank()];
            for s in &secs {
                let c = RatFunc::constant(scalar(f, rng));
                for (a, b) in acc.iter_mut().zip(s) {
                    *a = &*a + &(b * &c);
                }
            }
            acc
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn disguised_keeps_splitting() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for field in [Field::Rational, Field::prime(101).unwrap()] {
            for _ in 0..5 {
                let e = exponents(3, -4, 3, &mut rng);
                let v = disguised_split(field, &e, &mut rng);
                assert_eq!(v.exponents(), e.as_slice());
                assert_eq!(v.degree(), e.iter().sum::<i64>());
            }
        }
    }
}
