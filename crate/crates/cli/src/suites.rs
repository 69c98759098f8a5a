//! Randomized verification suites. Each instance is drawn from its own seed,
//! derived from the run seed, the suite, the field and the instance index,
//! and serializes to JSON so that a failure can be replayed alone.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use scrollkit::brillnoether::{
    bn_span_identity_check, cup_petri_duality, find_lambda, genrks_defect_check, kernel_span_check, restricted_cup, secant_membership,
    SectionSubspace,
};
use scrollkit::eltrans::TorsionModule;
use scrollkit::hilbquot::{enumerate_reduced, pi_defect, point_cluster, roundtrip_check, Cluster, ZScheme};
use scrollkit::p1bundles::oracle_h0;
use scrollkit::random::{
    disguised_split, distinct_points, exponents, nonzero_vector, poly, reduced_torsion, section_combinations, torsion, zscheme,
};
use scrollkit::spans::{ggrr_check, rel_span, relggrr_check, same_span_check, span_routes, DeltaPoint};
use scrollkit::{Bundle, CurvePoint, Error, Field, Poly, RatFunc, Result};

use crate::codec::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Ggrr,
    Roundtrip,
    Census,
    Spans,
    Relggrr,
    Pidefect,
    Samespan,
    Serre,
    Cohomology,
    Bn,
    Secant,
    Duality,
}

impl Suite {
    pub const ALL: [Suite; 12] = [
        Suite::Ggrr,
        Suite::Roundtrip,
        Suite::Census,
        Suite::Spans,
        Suite::Relggrr,
        Suite::Pidefect,
        Suite::Samespan,
        Suite::Serre,
        Suite::Cohomology,
        Suite::Bn,
        Suite::Secant,
        Suite::Duality,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Ggrr => "ggrr",
            Suite::Roundtrip => "roundtrip",
            Suite::Census => "census",
            Suite::Spans => "spans",
            Suite::Relggrr => "relggrr",
            Suite::Pidefect => "pidefect",
            Suite::Samespan => "samespan",
            Suite::Serre => "serre",
            Suite::Cohomology => "cohomology",
            Suite::Bn => "bn",
            Suite::Secant => "secant",
            Suite::Duality => "duality",
        }
    }

    pub fn from_name(s: &str) -> Option<Suite> {
        Suite::ALL.into_iter().find(|x| x.name() == s)
    }

    fn code(self) -> u64 {
        Suite::ALL.iter().position(|&x| x == self).unwrap_or_default() as u64
    }
}

/// Splitting types for the section-subspace suite. All are globally
/// generated; the first two have `H^1(End E) = 0`.
const BN_TYPES: [&[i64]; 12] =
    [&[1, 1], &[2, 1], &[2, 0], &[3, 0], &[4, 0], &[3, 1], &[4, 1], &[5, 1], &[4, 2], &[2, 0, 0], &[3, 1, 0], &[2, 2, 0]];

/// One self-contained verification problem.
#[derive(Clone, Debug)]
pub enum Instance {
    Ggrr {
        v: Bundle,
        tau: TorsionModule,
    },
    Roundtrip {
        v: Bundle,
        tau: TorsionModule,
    },
    Census {
        field: Field,
        r: usize,
        d: usize,
    },
    Spans {
        v: Bundle,
        f: Bundle,
        z: ZScheme,
    },
    Relggrr {
        v: Bundle,
        f: Bundle,
        tau: TorsionModule,
    },
    Pidefect {
        v: Bundle,
        z: ZScheme,
    },
    Samespan {
        v: Bundle,
        z1: ZScheme,
        z2: ZScheme,
    },
    /// `g` is a random element of `L0 + Linf`, so its class must vanish.
    Serre {
        v: Bundle,
        g: Vec<RatFunc>,
    },
    Cohomology {
        v: Bundle,
    },
    Bn {
        e: Bundle,
        lambda: Vec<Vec<RatFunc>>,
    },
    /// `sub` is a subscheme of `z`.
    Secant {
        v: Bundle,
        f: Bundle,
        z: ZScheme,
        sub: ZScheme,
        points: Vec<DeltaPoint>,
    },
    Duality {
        e: Bundle,
        lambda: Vec<Vec<RatFunc>>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail(String),
}

impl Verdict {
    pub fn passed(&self) -> bool {
        *self == Verdict::Pass
    }
}

fn fail_unless(ok: bool, why: impl FnOnce() -> String) -> Option<String> {
    if ok {
        None
    } else {
        Some(why())
    }
}

impl Instance {
    pub fn suite(&self) -> Suite {
        match self {
            Instance::Ggrr { .. } => Suite::Ggrr,
            Instance::Roundtrip { .. } => Suite::Roundtrip,
            Instance::Census { .. } => Suite::Census,
            Instance::Spans { .. } => Suite::Spans,
            Instance::Relggrr { .. } => Suite::Relggrr,
            Instance::Pidefect { .. } => Suite::Pidefect,
            Instance::Samespan { .. } => Suite::Samespan,
            Instance::Serre { .. } => Suite::Serre,
            Instance::Cohomology { .. } => Suite::Cohomology,
            Instance::Bn { .. } => Suite::Bn,
            Instance::Secant { .. } => Suite::Secant,
            Instance::Duality { .. } => Suite::Duality,
        }
    }

    pub fn field(&self) -> Field {
        match self {
            Instance::Census { field, .. } => *field,
            Instance::Ggrr { v, .. }
            | Instance::Roundtrip { v, .. }
            | Instance::Spans { v, .. }
            | Instance::Relggrr { v, .. }
            | Instance::Pidefect { v, .. }
            | Instance::Samespan { v, .. }
            | Instance::Serre { v, .. }
            | Instance::Cohomology { v }
            | Instance::Secant { v, .. } => v.field(),
            Instance::Bn { e, .. } | Instance::Duality { e, .. } => e.field(),
        }
    }

    /// The verdict, and for the census and the section-subspace suite the
    /// data behind it.
    pub fn check(&self) -> (Verdict, Option<Value>) {
        let mut detail = None;
        let outcome = self.check_inner(&mut detail);
        let verdict = match outcome {
            Ok(None) => Verdict::Pass,
            Ok(Some(why)) => Verdict::Fail(why),
            Err(e) => Verdict::Fail(format!("error: {e}")),
        };
        (verdict, detail)
    }

    fn check_inner(&self, detail: &mut Option<Value>) -> Result<Option<String>> {
        Ok(match self {
            Instance::Ggrr { v, tau } => {
                let rep = ggrr_check(v, tau)?;
                fail_unless(rep.holds, || format!("h0 side {} vs defect side {}", rep.lhs, rep.rhs))
            }
            Instance::Roundtrip { v, tau } => fail_unless(roundtrip_check(v, tau)?, || "alpha misses the quotient".into()),
            Instance::Census { field, r, d } => {
                let rep = enumerate_reduced(*field, *r, *d, 1_000_000)?;
                *detail = Some(json!({
                    "q": field.size(),
                    "r": r,
                    "d": d,
                    "quot": rep.quot_count,
                    "hilb": rep.hilb_count,
                    "bijective": rep.bijective,
                }));
                fail_unless(rep.bijective && rep.quot_count == rep.hilb_count, || {
                    format!("{} quotients, {} schemes", rep.quot_count, rep.hilb_count)
                })
            }
            Instance::Spans { v, f, z } => {
                let (a, b) = span_routes(v, f, z)?;
                fail_unless(a == b, || format!("evaluation span dim {} vs coboundary span dim {}", a.dim, b.dim))
            }
            Instance::Relggrr { v, f, tau } => {
                let rep = relggrr_check(v, f, tau)?;
                fail_unless(rep.holds, || format!("h0 side {} vs defect side {}", rep.lhs, rep.rhs))
            }
            Instance::Pidefect { v, z } => {
                let d = pi_defect(v, z)?;
                let bound = fiber_excess(z, v.rank());
                fail_unless(d.by_degree == d.by_rank && d.defect >= bound && d.defect <= z.length(), || {
                    format!("defect {} (degree) / {} (rank), expected at least {bound}", d.by_degree, d.by_rank)
                })
            }
            Instance::Samespan { v, z1, z2 } => {
                if z1 == z2 {
                    Some("the two schemes coincide".into())
                } else {
                    fail_unless(same_span_check(v, z1, z2)?, || "spans differ".into())
                }
            }
            Instance::Serre { v, g } => {
                let h1 = v.h1();
                let dual_h0 = oracle_h0(&v.dual().canonical_twist(), None);
                let p = v.serre_pairing();
                let cls = v.h1_class(g);
                if h1 != dual_h0 {
                    Some(format!("h1 = {h1} but h0(K (x) V*) = {dual_h0}"))
                } else if p.rows() != p.cols() || (h1 > 0 && p.det().is_zero()) {
                    Some("pairing is degenerate".into())
                } else {
                    fail_unless(cls.iter().all(|c| c.is_zero()), || "coboundary has a nonzero class".into())
                }
            }
            Instance::Cohomology { v } => {
                let (h0, h1) = (v.h0(), v.h1());
                let oracle = oracle_h0(v, None);
                let rr = h0 as i64 - h1 as i64 == v.degree() + v.rank() as i64;
                fail_unless(h0 == oracle && rr, || format!("h0 = {h0}, oracle {oracle}, h1 = {h1}"))
            }
            Instance::Bn { e, lambda } => {
                let l = SectionSubspace::new(e, lambda.clone())?;
                let empty = e.end().h1() == 0;
                *detail = Some(json!({ "splitting": e.exponents(), "emptyAmbient": empty }));
                if empty {
                    // Degenerate ambient: both identities must refuse, and the
                    // cup product has no target.
                    let refused = matches!(bn_span_identity_check(e, &l), Err(Error::EmptyAmbient))
                        && matches!(genrks_defect_check(e, &l), Err(Error::EmptyAmbient));
                    fail_unless(refused && restricted_cup(e, &l).rows() == 0, || "empty ambient not detected".into())
                } else {
                    let id = bn_span_identity_check(e, &l)?;
                    let gr = genrks_defect_check(e, &l)?;
                    if !id.holds {
                        Some(format!("kernel dim {} vs span dim {}", id.kernel.dim, id.span.dim))
                    } else {
                        fail_unless(gr.holds, || format!("defect {} vs predicted {}", gr.defect, gr.predicted))
                    }
                }
            }
            Instance::Secant { v, f, z, sub, points } => {
                let id = kernel_span_check(v, f, z)?;
                let big = rel_span(v, f, z)?.span;
                let small = rel_span(v, f, sub)?.span;
                if !id.holds {
                    Some(format!("kernel dim {} vs span dim {}", id.kernel.dim, id.span.dim))
                } else if !big.contains(&small) {
                    Some("span of a subscheme is not contained in the span".into())
                } else {
                    fail_unless(secant_membership(v, f, points, z)?, || "a secant point leaves the span".into())
                }
            }
            Instance::Duality { e, lambda } => {
                let l = SectionSubspace::new(e, lambda.clone())?;
                fail_unless(cup_petri_duality(e, &l), || "cup product is not dual to the Petri map".into())
            }
        })
    }

    pub fn to_json(&self) -> Value {
        let mut out = match self {
            Instance::Ggrr { v, tau } | Instance::Roundtrip { v, tau } => {
                json!({ "v": bundle_to_json(v), "tau": torsion_to_json(tau) })
            }
            Instance::Census { r, d, .. } => json!({ "r": r, "d": d }),
            Instance::Spans { v, f, z } => json!({ "v": bundle_to_json(v), "f": bundle_to_json(f), "z": zscheme_to_json(z) }),
            Instance::Relggrr { v, f, tau } => {
                json!({ "v": bundle_to_json(v), "f": bundle_to_json(f), "tau": torsion_to_json(tau) })
            }
            Instance::Pidefect { v, z } => json!({ "v": bundle_to_json(v), "z": zscheme_to_json(z) }),
            Instance::Samespan { v, z1, z2 } => {
                json!({ "v": bundle_to_json(v), "z1": zscheme_to_json(z1), "z2": zscheme_to_json(z2) })
            }
            Instance::Serre { v, g } => json!({ "v": bundle_to_json(v), "g": ratvec_to_json(g) }),
            Instance::Cohomology { v } => json!({ "v": bundle_to_json(v) }),
            Instance::Bn { e, lambda } | Instance::Duality { e, lambda } => json!({
                "e": bundle_to_json(e),
                "lambda": lambda.iter().map(|s| ratvec_to_json(s)).collect::<Vec<_>>(),
            }),
            Instance::Secant { v, f, z, sub, points } => json!({
                "v": bundle_to_json(v),
                "f": bundle_to_json(f),
                "z": zscheme_to_json(z),
                "sub": zscheme_to_json(sub),
                "points": points.iter().map(delta_to_json).collect::<Vec<_>>(),
            }),
        };
        out["suite"] = json!(self.suite().name());
        out["field"] = json!(self.field().to_string());
        out
    }

    pub fn from_json(v: &Value) -> Result<Instance> {
        let bad = |m: &str| Error::Parse { offset: None, message: m.to_string() };
        let name = v.get("suite").and_then(Value::as_str).ok_or_else(|| bad("$: missing suite name"))?;
        let suite = Suite::from_name(name).ok_or_else(|| bad(&format!("$.suite: unknown suite {name:?}")))?;
        let field: Field = v.get("field").and_then(Value::as_str).ok_or_else(|| bad("$: missing field"))?.parse()?;
        let key = |k: &str| v.get(k).ok_or_else(|| bad(&format!("$: missing key {k:?}")));
        let bundle = |k: &str| -> Result<Bundle> {
            let b = bundle_from_json(key(k)?, &format!("$.{k}"))?;
            if b.field() != field {
                return Err(Error::FieldMismatch(field.to_string(), b.field().to_string()));
            }
            Ok(b)
        };
        let mut normalized = false;
        let mut scheme = |k: &str| zscheme_from_json(key(k)?, field, &format!("$.{k}"), &mut normalized);
        let count = |k: &str| key(k)?.as_u64().map(|n| n as usize).ok_or_else(|| bad(&format!("$.{k}: expected an integer")));
        let sections = |k: &str| -> Result<Vec<Vec<RatFunc>>> {
            key(k)?
                .as_array()
                .ok_or_else(|| bad(&format!("$.{k}: expected an array")))?
                .iter()
                .enumerate()
                .map(|(i, s)| ratvec_from_json(s, field, &format!("$.{k}[{i}]")))
                .collect()
        };
        Ok(match suite {
            Suite::Ggrr | Suite::Roundtrip => {
                let v = bundle("v")?;
                let tau = torsion_from_json(key("tau")?, field, v.rank(), "$.tau")?;
                if suite == Suite::Ggrr {
                    Instance::Ggrr { v, tau }
                } else {
                    Instance::Roundtrip { v, tau }
                }
            }
            Suite::Census => Instance::Census { field, r: count("r")?, d: count("d")? },
            Suite::Spans => Instance::Spans { v: bundle("v")?, f: bundle("f")?, z: scheme("z")? },
            Suite::Relggrr => {
                let v = bundle("v")?;
                let tau = torsion_from_json(key("tau")?, field, v.rank(), "$.tau")?;
                Instance::Relggrr { v, f: bundle("f")?, tau }
            }
            Suite::Pidefect => Instance::Pidefect { v: bundle("v")?, z: scheme("z")? },
            Suite::Samespan => Instance::Samespan { v: bundle("v")?, z1: scheme("z1")?, z2: scheme("z2")? },
            Suite::Serre => Instance::Serre { v: bundle("v")?, g: ratvec_from_json(key("g")?, field, "$.g")? },
            Suite::Cohomology => Instance::Cohomology { v: bundle("v")? },
            Suite::Bn => Instance::Bn { e: bundle("e")?, lambda: sections("lambda")? },
            Suite::Duality => Instance::Duality { e: bundle("e")?, lambda: sections("lambda")? },
            Suite::Secant => {
                let points = key("points")?
                    .as_array()
                    .ok_or_else(|| bad("$.points: expected an array"))?
                    .iter()
                    .enumerate()
                    .map(|(i, p)| delta_from_json(p, field, &format!("$.points[{i}]")))
                    .collect::<Result<_>>()?;
                Instance::Secant { v: bundle("v")?, f: bundle("f")?, z: scheme("z")?, sub: scheme("sub")?, points }
            }
        })
    }
}

/// Lower bound for the defect from fibers carrying more reduced points than
/// the rank.
fn fiber_excess(z: &ZScheme, r: usize) -> usize {
    z.base_points()
        .iter()
        .map(|x| {
            let here: Vec<&Cluster> = z.clusters().iter().filter(|c| &c.x == x).collect();
            if here.iter().all(|c| c.k == 1) {
                here.len().saturating_sub(r)
            } else {
                0
            }
        })
        .sum()
}

fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Seed of one instance.
pub fn instance_seed(seed: u64, suite: Suite, field: Field, index: usize) -> u64 {
    let fcode = match field {
        Field::Rational => 0,
        Field::Prime(p) => p,
    };
    [suite.code(), fcode, index as u64].iter().fold(splitmix(seed), |h, &x| splitmix(h ^ x))
}

/// Exponents in `lo..=hi` with at least one at most `-2`, so `H^1 != 0`.
fn exps_with_h1(r: usize, lo: i64, hi: i64, rng: &mut ChaCha8Rng) -> Vec<i64> {
    let mut e = exponents(r, lo, hi, rng);
    if e[r - 1] > -2 {
        e[r - 1] = rng.gen_range(lo..=-2);
        e.sort_by(|a, b| b.cmp(a));
    }
    e
}

/// Torsion of degree at most `max_deg`: reduced half the time, otherwise a
/// few generators with poles up to 3.
fn small_torsion(field: Field, r: usize, max_deg: usize, rng: &mut ChaCha8Rng) -> TorsionModule {
    if rng.gen_bool(0.5) {
        let d = rng.gen_range(1..=max_deg);
        return reduced_torsion(field, r, d, rng);
    }
    loop {
        let pts = rng.gen_range(1..=2);
        let t = torsion(field, r, pts, 2, 3, rng);
        if t.generators().map(|g| g.pole).sum::<usize>() <= max_deg {
            return t;
        }
    }
}

/// `count` length-one clusters over `x` with distinct directions.
fn fiber_clusters(field: Field, r: usize, x: &CurvePoint, count: usize, rng: &mut ChaCha8Rng) -> Vec<Cluster> {
    let mut out: Vec<Cluster> = Vec::new();
    while out.len() < count {
        let c = point_cluster(x.clone(), &nonzero_vector(field, r, rng)).expect("nonzero direction");
        if out.iter().all(|o| o.branch() != c.branch()) {
            out.push(c);
        }
    }
    out
}

/// A point of the line not among `used`.
fn fresh_point(field: Field, used: &[CurvePoint], rng: &mut ChaCha8Rng) -> CurvePoint {
    distinct_points(field, used.len() + 1, true, rng).into_iter().find(|p| !used.contains(p)).expect("enough points")
}

/// Clusters over distinct points, sometimes with an extra fiber carrying
/// several points.
fn mixed_scheme(field: Field, r: usize, rng: &mut ChaCha8Rng) -> ZScheme {
    let n = rng.gen_range(1..=3);
    let mut cs = zscheme(field, r, n, 2, rng).clusters().to_vec();
    if r > 1 && rng.gen_bool(0.3) {
        let used: Vec<CurvePoint> = cs.iter().map(|c| c.x.clone()).collect();
        let x = fresh_point(field, &used, rng);
        let count = rng.gen_range(2..=r + 1);
        cs.extend(fiber_clusters(field, r, &x, count, rng));
    }
    ZScheme::new(cs).expect("distinct branch points")
}

/// A twisting bundle with nonnegative splitting.
fn twisting_bundle(field: Field, rng: &mut ChaCha8Rng) -> Bundle {
    if rng.gen_bool(0.4) {
        return Bundle::trivial(field, 1);
    }
    let rf = rng.gen_range(1..=2);
    disguised_split(field, &exponents(rf, 0, 2, rng), rng)
}

fn pair_with_h1(field: Field, rng: &mut ChaCha8Rng) -> (Bundle, Bundle) {
    loop {
        let r = rng.gen_range(1..=3);
        let e = exps_with_h1(r, -6, -1, rng);
        let f = twisting_bundle(field, rng);
        let fe = f.exponents().to_vec();
        // h^1(V (x) F) > 0 iff some a_i + b_l <= -2.
        if e.iter().any(|a| fe.iter().any(|b| a + b <= -2)) {
            return (disguised_split(field, &e, rng), f);
        }
    }
}

/// Frame of `V_x` to order `m`: columns of a polynomial matrix invertible at 0.
fn random_frame(field: Field, r: usize, m: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<Poly>> {
    loop {
        let cols: Vec<Vec<Poly>> = (0..r).map(|_| (0..r).map(|_| poly(field, m - 1, rng)).collect()).collect();
        let at0 = scrollkit::MatrixK::from_cols(field, r, cols.iter().map(|c| c.iter().map(|p| p.coeff(0)).collect()).collect());
        if at0.rank() == r {
            return cols;
        }
    }
}

fn generate(suite: Suite, field: Field, index: usize, rng: &mut ChaCha8Rng) -> Result<Instance> {
    Ok(match suite {
        Suite::Ggrr => {
            let r = rng.gen_range(1..=3);
            let v = disguised_split(field, &exps_with_h1(r, -6, -1, rng), rng);
            Instance::Ggrr { v, tau: small_torsion(field, r, 6, rng) }
        }
        Suite::Roundtrip => {
            let r = rng.gen_range(1..=3);
            let v = disguised_split(field, &exponents(r, -4, 3, rng), rng);
            Instance::Roundtrip { v, tau: small_torsion(field, r, 6, rng) }
        }
        Suite::Census => {
            if field.size().is_none() {
                return Err(Error::Precondition("census needs a finite field".into()));
            }
            Instance::Census { field, r: 2, d: index + 1 }
        }
        Suite::Spans => {
            let (v, f) = pair_with_h1(field, rng);
            let z = mixed_scheme(field, v.rank(), rng);
            Instance::Spans { v, f, z }
        }
        Suite::Relggrr => {
            let (v, f) = pair_with_h1(field, rng);
            let tau = small_torsion(field, v.rank(), 4, rng);
            Instance::Relggrr { v, f, tau }
        }
        Suite::Pidefect => {
            let r = rng.gen_range(2..=3);
            let v = disguised_split(field, &exponents(r, -4, 3, rng), rng);
            let z = match index % 3 {
                0 => {
                    let n = rng.gen_range(1..=3);
                    zscheme(field, r, n, 3, rng)
                }
                1 => {
                    // More points in one fiber than the rank: defective.
                    let x = distinct_points(field, 1, true, rng).remove(0);
                    let count = rng.gen_range(r + 1..=r + 2);
                    let mut cs = fiber_clusters(field, r, &x, count, rng);
                    if rng.gen_bool(0.5) {
                        let y = fresh_point(field, &[x], rng);
                        cs.extend(fiber_clusters(field, r, &y, 1, rng));
                    }
                    ZScheme::new(cs)?
                }
                _ => mixed_scheme(field, r, rng),
            };
            Instance::Pidefect { v, z }
        }
        Suite::Samespan => {
            // Two frames of the same fiber to the same order cut out the same
            // subsheaf, so the schemes differ while the Quot points agree.
            // Rank one has a single direction, so it is excluded.
            let r = rng.gen_range(2..=3);
            let v = disguised_split(field, &exps_with_h1(r, -6, -1, rng), rng);
            let x = distinct_points(field, 1, true, rng).remove(0);
            let m = rng.gen_range(1..=2);
            let extra: Vec<Cluster> = {
                let n = rng.gen_range(0..=2);
                let mut cs = Vec::new();
                let mut used = vec![x.clone()];
                for _ in 0..n {
                    let y = fresh_point(field, &used, rng);
                    used.push(y.clone());
                    cs.extend(fiber_clusters(field, r, &y, 1, rng));
                }
                cs
            };
            let mut schemes = Vec::new();
            for _ in 0..2 {
                let mut cs: Vec<Cluster> =
                    random_frame(field, r, m, rng).into_iter().map(|col| Cluster::new(x.clone(), m, col)).collect::<Result<_>>()?;
                cs.extend(extra.iter().cloned());
                schemes.push(ZScheme::new(cs)?);
            }
            let z2 = schemes.pop().expect("two schemes");
            let z1 = schemes.pop().expect("two schemes");
            Instance::Samespan { v, z1, z2 }
        }
        Suite::Serre => {
            let r = rng.gen_range(1..=3);
            let v = disguised_split(field, &exponents(r, -5, 3, rng), rng);
            let u: Vec<RatFunc> = (0..r).map(|_| RatFunc::from_poly(poly(field, 3, rng))).collect();
            let w: Vec<RatFunc> = (0..r).map(|_| RatFunc::from_poly(poly(field, 3, rng)).invert_variable()).collect();
            let g = v.a0().mul_vec(&u).iter().zip(v.ainf().mul_vec(&w)).map(|(a, b)| a + &b).collect();
            Instance::Serre { v, g }
        }
        Suite::Cohomology => {
            let r = rng.gen_range(1..=3);
            Instance::Cohomology { v: disguised_split(field, &exponents(r, -5, 5, rng), rng) }
        }
        Suite::Bn => {
            // Lambda through deg E prescribed directions, so det splits into
            // rational linear factors.
            let ty = BN_TYPES[index % BN_TYPES.len()];
            let e = disguised_split(field, ty, rng);
            let d: i64 = ty.iter().sum();
            let mut last = Error::Precondition("no attempts".into());
            for _ in 0..10 {
                let pts: Vec<(CurvePoint, Vec<scrollkit::Scalar>)> =
                    distinct_points(field, d as usize, false, rng).into_iter().map(|x| (x, nonzero_vector(field, e.rank(), rng))).collect();
                match find_lambda(&e, &pts, 20, rng) {
                    Ok((l, _)) => return Ok(Instance::Bn { e, lambda: l.basis }),
                    Err(err) => last = err,
                }
            }
            return Err(last);
        }
        Suite::Secant => {
            let (v, f) = if index.is_multiple_of(4) {
                (Bundle::split(field, &[-6, -4]), Bundle::split(field, &[0, 1]))
            } else {
                pair_with_h1(field, rng)
            };
            let r = v.rank();
            let z = mixed_scheme(field, r, rng);
            let cs = z.clusters().to_vec();
            let mut points = Vec::new();
            for c in &cs {
                if points.is_empty() || rng.gen_bool(0.6) {
                    points.push(DeltaPoint::new(c.x.clone(), c.branch(), nonzero_vector(field, f.rank(), rng))?);
                }
            }
            let mut keep: Vec<Cluster> = cs.clone();
            keep.shuffle(rng);
            keep.truncate(rng.gen_range(1..=cs.len()));
            let sub = ZScheme::new(keep)?;
            Instance::Secant { v, f, z, sub, points }
        }
        Suite::Duality => loop {
            let r = if rng.gen_bool(0.75) { 2 } else { 3 };
            let mut ex = exponents(r, 0, 3, rng);
            ex[r - 1] = rng.gen_range(-3..=-2);
            let e = disguised_split(field, &ex, rng);
            let m = rng.gen_range(1..=e.h0().min(2));
            if let Ok(l) = SectionSubspace::new(&e, section_combinations(&e, m, rng)) {
                break Instance::Duality { e, lambda: l.basis };
            }
        },
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteRun {
    pub suite: Suite,
    #[serde(serialize_with = "field_name")]
    pub field: Field,
    pub samples: usize,
}

fn field_name<S: serde::Serializer>(f: &Field, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&f.to_string())
}

#[derive(Clone, Debug, Serialize)]
pub struct Counterexample {
    pub index: usize,
    pub seed: u64,
    pub reason: String,
    /// The instance itself, or null when generation failed.
    pub instance: Value,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteOutcome {
    #[serde(flatten)]
    pub run: SuiteRun,
    pub passed: usize,
    pub failed: usize,
    pub counterexamples: Vec<Counterexample>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub details: Vec<Value>,
}

impl SuiteOutcome {
    pub fn ok(&self) -> bool {
        self.failed == 0 && self.passed == self.run.samples
    }
}

/// Counterexamples kept per suite; the counts cover every instance.
pub const MAX_COUNTEREXAMPLES: usize = 5;

/// Generate and check one instance.
pub fn run_instance(suite: Suite, field: Field, seed: u64, index: usize) -> (std::result::Result<Instance, Error>, Verdict, Option<Value>) {
    let s = instance_seed(seed, suite, field, index);
    let mut rng = ChaCha8Rng::seed_from_u64(s);
    match generate(suite, field, index, &mut rng) {
        Ok(inst) => {
            let (verdict, detail) = inst.check();
            (Ok(inst), verdict, detail)
        }
        Err(e) => {
            let why = format!("generation failed: {e}");
            (Err(e), Verdict::Fail(why), None)
        }
    }
}

pub fn run_suite(run: &SuiteRun, seed: u64) -> SuiteOutcome {
    let mut out = SuiteOutcome { run: run.clone(), passed: 0, failed: 0, counterexamples: Vec::new(), details: Vec::new() };
    for index in 0..run.samples {
        let (inst, verdict, detail) = run_instance(run.suite, run.field, seed, index);
        out.details.extend(detail);
        match verdict {
            Verdict::Pass => out.passed += 1,
            Verdict::Fail(reason) => {
                out.failed += 1;
                if out.counterexamples.len() < MAX_COUNTEREXAMPLES {
                    out.counterexamples.push(Counterexample {
                        index,
                        seed: instance_seed(seed, run.suite, run.field, index),
                        reason,
                        instance: inst.map(|i| i.to_json()).unwrap_or(Value::Null),
                    });
                }
            }
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: u32,
    pub seed: u64,
    pub passed: bool,
    pub suites: Vec<SuiteOutcome>,
}

impl Report {
    /// Pretty JSON; identical inputs give byte-identical text.
    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }
}

pub fn run_plan(plan: &[SuiteRun], seed: u64, mut progress: impl FnMut(&SuiteOutcome)) -> Report {
    let suites: Vec<SuiteOutcome> = plan
        .iter()
        .map(|run| {
            let o = run_suite(run, seed);
            progress(&o);
            o
        })
        .collect();
    Report { schema: 1, seed, passed: suites.iter().all(SuiteOutcome::ok), suites }
}

/// The plan behind the acceptance run.
pub fn acceptance_plan() -> Vec<SuiteRun> {
    let f101 = Field::Prime(101);
    let run = |suite, field, samples| SuiteRun { suite, field, samples };
    vec![
        run(Suite::Ggrr, f101, 500),
        run(Suite::Ggrr, Field::Rational, 100),
        run(Suite::Roundtrip, f101, 400),
        run(Suite::Roundtrip, Field::Rational, 100),
        run(Suite::Census, Field::Prime(2), 2),
        run(Suite::Census, Field::Prime(3), 2),
        run(Suite::Spans, f101, 250),
        run(Suite::Spans, Field::Rational, 50),
        run(Suite::Relggrr, f101, 200),
        run(Suite::Pidefect, f101, 500),
        run(Suite::Samespan, f101, 100),
        run(Suite::Serre, f101, 200),
        run(Suite::Cohomology, Field::Prime(5), 200),
        run(Suite::Bn, f101, 100),
        run(Suite::Secant, f101, 100),
        run(Suite::Duality, f101, 100),
    ]
}

/// Re-run a counterexample payload: either an instance object or a whole
/// counterexample with an `instance` member.
pub fn replay(payload: &Value) -> Result<(Instance, Verdict)> {
    let inst = payload.get("instance").filter(|v| v.is_object()).unwrap_or(payload);
    let inst = Instance::from_json(inst)?;
    let (verdict, _) = inst.check();
    Ok((inst, verdict))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn instances_roundtrip_through_json() {
        for suite in Suite::ALL {
            let field = if suite == Suite::Census { Field::Prime(2) } else { Field::Prime(101) };
            let (inst, _, _) = run_instance(suite, field, 3, 1);
            let inst = inst.unwrap();
            let back = Instance::from_json(&inst.to_json()).unwrap();
            assert_eq!(back.to_json(), inst.to_json(), "{}", suite.name());
        }
    }

    #[test]
    fn seeds_separate_suites_and_indices() {
        let f = Field::Prime(101);
        let a = instance_seed(1, Suite::Ggrr, f, 0);
        assert_ne!(a, instance_seed(1, Suite::Ggrr, f, 1));
        assert_ne!(a, instance_seed(1, Suite::Spans, f, 0));
        assert_ne!(a, instance_seed(1, Suite::Ggrr, Field::Rational, 0));
        assert_ne!(a, instance_seed(2, Suite::Ggrr, f, 0));
    }
}
