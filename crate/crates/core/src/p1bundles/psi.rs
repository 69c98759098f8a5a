//! The embedding criterion for the map from the scroll to `P H^1`: sections of
//! `K (x) V*` must impose `2r` independent conditions on every effective
//! divisor of degree two.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::bundle::Bundle;
use crate::error::{Error, Result};
use crate::exactalg::laurent::regular_coeffs;
use crate::exactalg::{CurvePoint, Field, MatrixK, Poly, RatFunc};

/// An effective divisor of degree two: `q(t) = 0` on the finite chart plus
/// `inf_mult` times the point at infinity (`deg q + inf_mult = 2`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Degree2Divisor {
    pub finite: Poly,
    pub inf_mult: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PsiReport {
    pub holds: bool,
    pub divisors_checked: usize,
    /// Exhaustive over a finite field; sampled (heuristic) over the rationals.
    pub exhaustive: bool,
    pub witness: Option<Degree2Divisor>,
}

/// `h^0(W(-D))` as the dimension of sections of `W` vanishing on `D`.
pub fn h0_minus_divisor(w: &Bundle, d: &Degree2Divisor) -> usize {
    let f = w.field();
    let sections = w.sections();
    if sections.is_empty() {
        return 0;
    }
    let a0inv = w.a0().inverse().unwrap();
    let ainfinv = w.ainf().inverse().unwrap();
    let qdeg = d.finite.degree().unwrap_or(0);
    let mut cols = Vec::new();
    for s in &sections {
        let mut col = Vec::new();
        if qdeg > 0 {
            for u in a0inv.mul_vec(s) {
                let rem = u.num().rem(&d.finite);
                for i in 0..qdeg {
                    col.push(rem.coeff(i));
                }
            }
        }
        if d.inf_mult > 0 {
            for u in ainfinv.mul_vec(s) {
                col.extend(regular_coeffs(&u, &CurvePoint::Infinity, d.inf_mult).expect("section regular at infinity"));
            }
        }
        cols.push(col);
    }
    let rows = cols[0].len();
    let m = MatrixK::from_cols(f, rows, cols);
    sections.len() - m.rank()
}

/// All effective degree-two divisors over a finite prime field: pairs of
/// rational points (with repetition) and the irreducible monic quadratics.
pub fn all_degree2_divisors(field: Field) -> Vec<Degree2Divisor> {
    let elems = field.elements();
    let mut out = Vec::new();
    for (i, a) in elems.iter().enumerate() {
        for b in &elems[i..] {
            out.push(Degree2Divisor { finite: &Poly::linear(a) * &Poly::linear(b), inf_mult: 0 });
        }
        out.push(Degree2Divisor { finite: Poly::linear(a), inf_mult: 1 });
    }
    out.push(Degree2Divisor { finite: Poly::one(field), inf_mult: 2 });
    for b in &elems {
        for c in &elems {
            let q = Poly::new(field, vec![c.clone(), b.clone(), field.one()]);
            if elems.iter().all(|x| !q.eval(x).is_zero()) {
                out.push(Degree2Divisor { finite: q, inf_mult: 0 });
            }
        }
    }
    out
}

pub fn psi_embedding_check(v: &Bundle, samples: usize, rng: &mut ChaCha8Rng) -> Result<PsiReport> {
    if v.h1() == 0 {
        return Err(Error::EmptyAmbient);
    }
    let f = v.field();
    let r = v.rank();
    let w = v.dual().canonical_twist();
    let h = w.h0();
    let (divisors, exhaustive) = match f {
        Field::Prime(_) => (all_degree2_divisors(f), true),
        Field::Rational => {
            let mut ds = vec![Degree2Divisor { finite: Poly::one(f), inf_mult: 2 }];
            for _ in 0..samples {
                let b = f.int(rng.gen_range(-6..=6));
                let c = f.int(rng.gen_range(-6..=6));
                let q = Poly::new(f, vec![c, b, f.one()]);
                ds.push(Degree2Divisor { finite: q, inf_mult: 0 });
                let a = f.int(rng.gen_range(-6..=6));
                ds.push(Degree2Divisor { finite: Poly::linear(&a), inf_mult: 1 });
            }
            (ds, false)
        }
    };
    let target = h as i64 - 2 * r as i64;
    for (n, d) in divisors.iter().enumerate() {
        if h0_minus_divisor(&w, d) as i64 != target {
            return Ok(PsiReport { holds: false, divisors_checked: n + 1, exhaustive, witness: Some(d.clone()) });
        }
    }
    Ok(PsiReport { holds: true, divisors_checked: divisors.len(), exhaustive, witness: None })
}

/// `W (x) O(-D)` as a bundle, for cross-checking [`h0_minus_divisor`].
pub fn twist_down(w: &Bundle, d: &Degree2Divisor) -> Bundle {
    let f = w.field();
    let a0 = w.a0().scale(&RatFunc::from_poly(d.finite.clone()));
    let ainf = w.ainf().scale(&RatFunc::t_pow(f, -(d.inf_mult as i64)));
    Bundle::from_lattices(a0, ainf).expect("twist of a valid bundle")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn criterion_examples() {
        let f = Field::prime(5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!(psi_embedding_check(&Bundle::split(f, &[-3]), 0, &mut rng).unwrap().holds);
        assert!(!psi_embedding_check(&Bundle::split(f, &[-2]), 0, &mut rng).unwrap().holds);
        // Segre: K (x) V* = O(1) + O(1).
        assert!(psi_embedding_check(&Bundle::split(f, &[-3, -3]), 0, &mut rng).unwrap().holds);
        assert_eq!(psi_embedding_check(&Bundle::split(f, &[-1, -1]), 0, &mut rng).unwrap_err(), Error::EmptyAmbient);
        assert_eq!(psi_embedding_check(&Bundle::split(f, &[0]), 0, &mut rng).unwrap_err(), Error::EmptyAmbient);
    }

    #[test]
    fn conditions_match_twisted_bundle() {
        let f = Field::prime(3).unwrap();
        let w = Bundle::split(f, &[3, 1]);
        for d in all_degree2_divisors(f) {
            assert_eq!(h0_minus_divisor(&w, &d), twist_down(&w, &d).h0());
        }
    }
}
