use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use scrollkit::eltrans::vtilde_from_tau;
use scrollkit::hilbquot::{alpha, enumerate_reduced, pi_defect, quot_to_hilb};
use scrollkit::random::disguised_split;
use scrollkit::spans::span_of;
use scrollkit::{Bundle, Error, Field};
use scrollkit_cli::codec::*;
use scrollkit_cli::suites::{acceptance_plan, replay, run_plan, Suite, SuiteOutcome, SuiteRun, Verdict};

#[derive(Parser)]
#[command(name = "scrollkit", version, about = "Elementary transformations of bundles on P^1 and their scroll subschemes")]
struct Cli {
    /// Base field: Q, Fp:<p> or F<p>.
    #[arg(long, global = true, default_value = "Fp:101")]
    field: String,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Instances per suite (verify, report).
    #[arg(long, global = true)]
    samples: Option<usize>,
    /// Write the JSON result here instead of stdout.
    #[arg(long, global = true)]
    json_out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Splitting type and cohomology of a bundle.
    Bundle {
        /// Bundle JSON file.
        #[arg(long, conflicts_with = "split")]
        input: Option<PathBuf>,
        /// Splitting type, e.g. `3,0,-2`.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        split: Option<Vec<i64>>,
        /// Scramble the lattice bases of a split bundle (uses the seed).
        #[arg(long, requires = "split")]
        disguise: bool,
    },
    /// Elementary transformation by a torsion quotient, or by a subscheme.
    Eltrans {
        #[arg(long)]
        bundle: PathBuf,
        #[arg(long, conflicts_with = "scheme", required_unless_present = "scheme")]
        torsion: Option<PathBuf>,
        #[arg(long)]
        scheme: Option<PathBuf>,
    },
    /// Run randomized verification suites.
    Verify(VerifyArgs),
    /// Count reduced quotients and subschemes over a small prime field.
    Census {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 200_000)]
        budget: usize,
    },
    /// Run every suite at acceptance size and emit the report.
    Report,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    ggrr: bool,
    #[arg(long)]
    relggrr: bool,
    #[arg(long)]
    roundtrip: bool,
    #[arg(long)]
    spans: bool,
    #[arg(long)]
    bn: bool,
    #[arg(long)]
    secant: bool,
    #[arg(long)]
    census: bool,
    #[arg(long)]
    pidefect: bool,
    #[arg(long)]
    samespan: bool,
    #[arg(long)]
    serre: bool,
    #[arg(long)]
    cohomology: bool,
    #[arg(long)]
    duality: bool,
    /// Every suite.
    #[arg(long)]
    all: bool,
    /// Re-check one counterexample payload.
    #[arg(long, conflicts_with = "all")]
    replay: Option<PathBuf>,
}

impl VerifyArgs {
    fn selected(&self) -> Vec<Suite> {
        let flags = [
            (self.ggrr, Suite::Ggrr),
            (self.roundtrip, Suite::Roundtrip),
            (self.census, Suite::Census),
            (self.spans, Suite::Spans),
            (self.relggrr, Suite::Relggrr),
            (self.pidefect, Suite::Pidefect),
            (self.samespan, Suite::Samespan),
            (self.serre, Suite::Serre),
            (self.cohomology, Suite::Cohomology),
            (self.bn, Suite::Bn),
            (self.secant, Suite::Secant),
            (self.duality, Suite::Duality),
        ];
        flags.into_iter().filter(|(on, _)| *on || self.all).map(|(_, s)| s).collect()
    }
}

/// Failure modes mapped to exit codes.
enum Failure {
    Verification,
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e.to_string())
    }
}

fn read_json(path: &PathBuf) -> Result<Value, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    parse_json(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

/// A bundle object, or the output of `scrollkit bundle` wrapping one.
fn read_bundle(path: &PathBuf) -> Result<Bundle, Failure> {
    let v = read_json(path)?;
    let inner = v.get("bundle").unwrap_or(&v);
    bundle_from_json(inner, "$").map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn emit(cli: &Cli, v: &Value) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(v).expect("serializable") + "\n";
    match &cli.json_out {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Input(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn bundle_summary(b: &Bundle) -> Value {
    json!({
        "rank": b.rank(),
        "degree": b.degree(),
        "splitting": b.exponents(),
        "h0": b.h0(),
        "h1": b.h1(),
    })
}

fn warn_normalized(normalized: bool) {
    if normalized {
        eprintln!("note: cluster jets were normalized");
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let field: Field = cli.field.parse()?;
    match &cli.command {
        Command::Bundle { input, split, disguise } => {
            let b = match (input, split) {
                (Some(p), _) => read_bundle(p)?,
                (None, Some(e)) if e.is_empty() => return Err(Failure::Input("empty splitting type".into())),
                (None, Some(e)) if *disguise => disguised_split(field, e, &mut ChaCha8Rng::seed_from_u64(cli.seed)),
                (None, Some(e)) => Bundle::split(field, e),
                (None, None) => return Err(Failure::Input("give --input or --split".into())),
            };
            let mut out = bundle_summary(&b);
            out["bundle"] = bundle_to_json(&b);
            emit(cli, &out)
        }
        Command::Eltrans { bundle, torsion, scheme } => {
            let v = read_bundle(bundle)?;
            let out = if let Some(t) = torsion {
                let tau = torsion_from_json(&read_json(t)?, v.field(), v.rank(), "$")?;
                let vt = vtilde_from_tau(&v, &tau)?;
                let z = quot_to_hilb(&v, &tau)?;
                json!({
                    "degree": vt.degree,
                    "vtilde": bundle_summary(&vt.vtilde),
                    "vtildeBundle": bundle_to_json(&vt.vtilde),
                    "scheme": zscheme_to_json(&z),
                    "piDefect": pi_defect(&v, &z)?.defect,
                })
            } else {
                let path = scheme.as_ref().expect("clap requires one of the two");
                let mut normalized = false;
                let z = zscheme_from_json(&read_json(path)?, v.field(), "$", &mut normalized)?;
                warn_normalized(normalized);
                let a = alpha(&v, &z)?;
                let mut out = json!({
                    "length": z.length(),
                    "vz": bundle_summary(&a.vz),
                    "vzBundle": bundle_to_json(&a.vz),
                    "tauZ": torsion_to_json(&a.tau_z),
                    "piDefect": pi_defect(&v, &z)?.defect,
                });
                if v.h1() > 0 {
                    let s = span_of(&v, &z)?;
                    out["span"] = json!({ "dim": s.span.dim, "defect": s.defect });
                }
                out
            };
            emit(cli, &out)
        }
        Command::Census { q, r, d, budget } => {
            let f = Field::prime(*q)?;
            let rep = enumerate_reduced(f, *r, *d, *budget)?;
            let ok = rep.bijective && rep.quot_count == rep.hilb_count && rep.formula == rep.quot_count as u128;
            emit(
                cli,
                &json!({
                    "q": q,
                    "r": r,
                    "d": d,
                    "quot": rep.quot_count,
                    "hilb": rep.hilb_count,
                    "formula": rep.formula.to_string(),
                    "bijective": rep.bijective,
                }),
            )?;
            if ok {
                Ok(())
            } else {
                Err(Failure::Verification)
            }
        }
        Command::Verify(args) => {
            if let Some(p) = &args.replay {
                let (inst, verdict) = replay(&read_json(p)?)?;
                return match verdict {
                    Verdict::Pass => {
                        println!("PASS {} (replayed)", inst.suite().name());
                        Ok(())
                    }
                    Verdict::Fail(why) => {
                        println!("FAIL {} (replayed): {why}", inst.suite().name());
                        Err(Failure::Verification)
                    }
                };
            }
            let suites = args.selected();
            if suites.is_empty() {
                return Err(Failure::Input("no suite selected".into()));
            }
            if suites.contains(&Suite::Census) && field.size().is_none() {
                return Err(Failure::Input("the census needs a prime field".into()));
            }
            let samples = cli.samples.unwrap_or(20);
            let plan: Vec<SuiteRun> = suites
                .into_iter()
                .map(|suite| SuiteRun { suite, field, samples: if suite == Suite::Census { samples.min(2) } else { samples } })
                .collect();
            finish_report(cli, &plan, false)
        }
        Command::Report => {
            let mut plan = acceptance_plan();
            if let Some(n) = cli.samples {
                for run in plan.iter_mut().filter(|r| r.suite != Suite::Census) {
                    run.samples = n;
                }
            }
            finish_report(cli, &plan, true)
        }
    }
}

fn print_outcome(o: &SuiteOutcome, to_stderr: bool) {
    let status = if o.ok() { "PASS" } else { "FAIL" };
    let mut lines = vec![format!("{status} {} {} {}/{}", o.run.suite.name(), o.run.field, o.passed, o.run.samples)];
    for c in &o.counterexamples {
        lines.push(format!("FAIL {} #{} seed={}: {} :: {}", o.run.suite.name(), c.index, c.seed, c.reason, c.instance));
    }
    for l in lines {
        if to_stderr {
            eprintln!("{l}");
        } else {
            println!("{l}");
        }
    }
}

/// `report` keeps stdout for the JSON; `verify` prints its lines there and
/// writes JSON only on request.
fn finish_report(cli: &Cli, plan: &[SuiteRun], json_to_stdout: bool) -> Result<(), Failure> {
    let report = run_plan(plan, cli.seed, |o| print_outcome(o, json_to_stdout));
    let text = report.to_json_string();
    match &cli.json_out {
        Some(p) => std::fs::write(p, &text).map_err(|e| Failure::Input(format!("{}: {e}", p.display())))?,
        None if json_to_stdout => print!("{text}"),
        None => {}
    }
    if report.passed {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
