//! The `gauss-dioph` command line. Every subcommand prints a short human
//! rendering by default and one JSON object per line with `--json`.
//!
//! Exit codes: 0 on success, 2 on parse or domain errors, 3 when
//! `enumerate --check` finds a solution the theory does not account for.

use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use crate::error::Error;
use crate::factorization::{factor, gcd_canonical, gcd_euclidean, is_gaussian_prime};
use crate::families::{
    check_canonical, check_solution, divisibility_profile, generate, param_recover, recognize,
    reduce_to_canonical, sample_params, Family, FamilyParams, Shape, Sign, Triple,
};
use crate::gaussian::{GaussianInt, UnitPower};
use crate::mordell::{mordell_solutions, MordellInstance};
use crate::oracle::{cross_check, enumerate_primitive, SearchBox};
use crate::parity::classify;

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 2;
pub const EXIT_CHECK_FAILED: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "gauss-dioph", version, about = "Gaussian-integer arithmetic and quadratic Diophantine families over Z[i]")]
struct Cli {
    /// Emit JSON-lines instead of human-readable text
    #[arg(long, global = true)]
    json: bool,

    /// Seed for randomized runs
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parity class of z (E0, EI, O0, OI)
    Classify {
        #[arg(allow_hyphen_values = true)]
        z: GaussianInt,
    },
    /// Canonical factorization i^u (1+i)^a p1^e1 ...
    Factor {
        #[arg(allow_hyphen_values = true)]
        z: GaussianInt,
    },
    /// Euclidean and canonical gcd of z and w
    Gcd {
        #[arg(allow_hyphen_values = true)]
        z: GaussianInt,
        #[arg(allow_hyphen_values = true)]
        w: GaussianInt,
    },
    /// Whether z is a Gaussian prime
    Prime {
        #[arg(allow_hyphen_values = true)]
        z: GaussianInt,
    },
    /// All coprime solutions of XY = kV^2
    Mordell {
        #[arg(long, allow_hyphen_values = true)]
        k: GaussianInt,
        #[arg(long = "V", alias = "v", allow_hyphen_values = true)]
        v: GaussianInt,
    },
    /// Generate a solution of a family's canonical form from parameters
    Solve(SolveArgs),
    /// Check whether a triple solves a family and report its divisibility profile
    Verify(TripleArgs),
    /// Reduce a primitive solution to canonical form and recover its parameters
    Reduce(TripleArgs),
    /// Enumerate primitive solutions of a family in a box
    Enumerate {
        #[arg(long)]
        family: Family,
        #[arg(long)]
        bound: i64,
        /// Cross-check every solution against the parametrization
        #[arg(long)]
        check: bool,
    },
}

#[derive(Args, Debug)]
struct SolveArgs {
    #[arg(long)]
    family: Family,
    #[arg(long, default_value_t = 0)]
    t: i64,
    #[arg(long = "P", allow_hyphen_values = true, required_unless_present = "random")]
    p: Option<GaussianInt>,
    #[arg(long = "Q", allow_hyphen_values = true, required_unless_present = "random")]
    q: Option<GaussianInt>,
    #[arg(long, allow_hyphen_values = true)]
    sign: Option<Sign>,
    /// Draw this many random valid parameter sets instead (uses --seed)
    #[arg(long, conflicts_with_all = ["p", "q", "sign"])]
    random: Option<usize>,
    /// Norm bound for random parameters
    #[arg(long, default_value_t = 10_000)]
    max_norm: u64,
}

#[derive(Args, Debug)]
struct TripleArgs {
    #[arg(long)]
    family: Family,
    /// "X, Y, Z"
    #[arg(long, allow_hyphen_values = true)]
    triple: Triple,
}

#[derive(Serialize)]
struct TripleJson {
    #[serde(rename = "X")]
    x: String,
    #[serde(rename = "Y")]
    y: String,
    #[serde(rename = "Z")]
    z: String,
}

impl From<&Triple> for TripleJson {
    fn from(t: &Triple) -> Self {
        TripleJson {
            x: t.x.to_string(),
            y: t.y.to_string(),
            z: t.z.to_string(),
        }
    }
}

#[derive(Serialize)]
struct ParamsJson {
    t: u8,
    #[serde(rename = "P")]
    p: String,
    #[serde(rename = "Q")]
    q: String,
    sign: Option<Sign>,
}

impl From<&FamilyParams> for ParamsJson {
    fn from(p: &FamilyParams) -> Self {
        ParamsJson {
            t: p.t.exponent(),
            p: p.p.to_string(),
            q: p.q.to_string(),
            sign: p.sign,
        }
    }
}

enum Failure {
    Domain(Error),
    Check(String),
    Io(std::io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Io(e.into())
    }
}

/// Parses `args` (including the program name) and runs the command,
/// writing results to `out` and diagnostics to stderr.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = e.print();
                    EXIT_DOMAIN
                }
            };
        }
    };
    match dispatch(&cli, out) {
        Ok(()) => EXIT_OK,
        Err(Failure::Domain(e)) => {
            eprintln!("error: {e}");
            EXIT_DOMAIN
        }
        Err(Failure::Check(msg)) => {
            eprintln!("cross-check failed: {msg}");
            EXIT_CHECK_FAILED
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            EXIT_DOMAIN
        }
    }
}

fn emit(out: &mut dyn Write, value: &impl Serialize) -> std::result::Result<(), Failure> {
    serde_json::to_writer(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> std::result::Result<(), Failure> {
    let json = cli.json;
    match &cli.command {
        Command::Classify { z } => {
            let class = classify(z)?;
            if json {
                emit(out, &json!({ "z": z.to_string(), "class": class }))?;
            } else {
                writeln!(out, "{class}")?;
            }
        }
        Command::Factor { z } => {
            let f = factor(z)?;
            if json {
                emit(out, &f.to_json())?;
            } else {
                writeln!(out, "{f}")?;
            }
        }
        Command::Gcd { z, w } => {
            if z.is_zero() && w.is_zero() {
                return Err(Error::Zero("gcd").into());
            }
            let euclid = gcd_euclidean(z, w);
            let canonical = if z.is_zero() || w.is_zero() {
                None
            } else {
                Some(gcd_canonical(z, w)?)
            };
            if json {
                emit(
                    out,
                    &json!({
                        "euclidean": euclid.to_string(),
                        "canonical": canonical.as_ref().map(|c| c.to_json()),
                    }),
                )?;
            } else {
                writeln!(out, "euclidean: {euclid}")?;
                if let Some(c) = canonical {
                    writeln!(out, "canonical: {c}")?;
                }
            }
        }
        Command::Prime { z } => {
            let prime = is_gaussian_prime(z)?;
            if json {
                emit(out, &json!({ "z": z.to_string(), "prime": prime }))?;
            } else {
                writeln!(out, "{prime}")?;
            }
        }
        Command::Mordell { k, v } => {
            let inst = MordellInstance::new(k.clone(), v.clone())?;
            for s in mordell_solutions(&inst) {
                if json {
                    emit(out, &s.to_json())?;
                } else {
                    writeln!(
                        out,
                        "t={} k1={} k2={} P={} Q={}  X={} Y={}",
                        s.t.exponent(),
                        s.k1,
                        s.k2,
                        s.p,
                        s.q,
                        s.x(),
                        s.y()
                    )?;
                }
            }
        }
        Command::Solve(args) => solve(args, cli.seed, json, out)?,
        Command::Verify(args) => verify(args, json, out)?,
        Command::Reduce(args) => reduce(args, json, out)?,
        Command::Enumerate {
            family,
            bound,
            check,
        } => {
            let search = SearchBox::new(*bound)?;
            if *check {
                let report = cross_check(*family, search);
                let unmatched: Vec<_> = report
                    .unmatched
                    .iter()
                    .map(|u| json!({ "triple": TripleJson::from(&u.triple), "reason": u.reason, "hard": u.hard }))
                    .collect();
                if json {
                    emit(
                        out,
                        &json!({
                            "family": family,
                            "bound": report.bound,
                            "total": report.total,
                            "matched": report.matched,
                            "unmatched": unmatched,
                            "passed": report.passed(),
                        }),
                    )?;
                } else {
                    writeln!(
                        out,
                        "{family} bound {}: {} solutions, {} matched, {} unmatched ({} hard)",
                        report.bound,
                        report.total,
                        report.matched,
                        report.unmatched.len(),
                        report.hard_failures()
                    )?;
                    for u in &report.unmatched {
                        writeln!(out, "  {} : {}", u.triple, u.reason)?;
                    }
                }
                if !report.passed() {
                    return Err(Failure::Check(format!(
                        "{} of {} {family} solutions unaccounted for",
                        report.hard_failures(),
                        report.total
                    )));
                }
            } else {
                for t in enumerate_primitive(*family, search) {
                    if json {
                        emit(out, &TripleJson::from(&t))?;
                    } else {
                        writeln!(out, "{t}")?;
                    }
                }
            }
        }
    }
    Ok(())
}

fn solve(args: &SolveArgs, seed: u64, json: bool, out: &mut dyn Write) -> std::result::Result<(), Failure> {
    let params: Vec<FamilyParams> = match args.random {
        Some(n) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..n)
                .map(|_| sample_params(args.family, &mut rng, args.max_norm))
                .collect()
        }
        None => {
            let (Some(p), Some(q)) = (&args.p, &args.q) else {
                return Err(Error::InvalidParams("--P and --Q are required".into()).into());
            };
            if !(0..4).contains(&args.t) {
                return Err(Error::InvalidParams(format!("--t must be in 0..3, got {}", args.t)).into());
            }
            vec![FamilyParams {
                t: UnitPower::new(args.t),
                p: p.clone(),
                q: q.clone(),
                sign: args.sign,
            }]
        }
    };
    for p in &params {
        let t = generate(args.family, p)?;
        if json {
            emit(
                out,
                &json!({
                    "family": args.family,
                    "params": ParamsJson::from(p),
                    "triple": TripleJson::from(&t),
                    "canonical_equation": args.family.canonical_equation(),
                    "verified": check_canonical(args.family, &t),
                }),
            )?;
        } else {
            writeln!(out, "{t}")?;
        }
    }
    Ok(())
}

fn shape_name(shape: Shape) -> &'static str {
    match shape {
        Shape::Original => "original",
        Shape::Canonical => "canonical",
    }
}

fn verify(args: &TripleArgs, json: bool, out: &mut dyn Write) -> std::result::Result<(), Failure> {
    let (family, t) = (args.family, &args.triple);
    let shape = recognize(family, t).ok();
    let profile = match shape {
        Some(_) if t.primitive => Some(divisibility_profile(family, t)?),
        _ => None,
    };
    let valuations = t.valuations();
    if json {
        emit(
            out,
            &json!({
                "family": family,
                "triple": TripleJson::from(t),
                "solution": shape.is_some(),
                "original_form": check_solution(family, t),
                "canonical_form": check_canonical(family, t),
                "shape": shape.map(shape_name),
                "primitive": t.primitive,
                "profile": profile,
                "valuations": valuations,
            }),
        )?;
    } else {
        match shape {
            Some(s) => writeln!(out, "solution: true ({} form)", shape_name(s))?,
            None => writeln!(out, "solution: false")?,
        }
        writeln!(out, "primitive: {}", t.primitive)?;
        let v = valuations.map(|e| e.to_string()).join(", ");
        match profile {
            Some(p) => writeln!(out, "profile: {p} (1+i exponents {v})")?,
            None => writeln!(out, "profile: n/a (1+i exponents {v})")?,
        }
    }
    Ok(())
}

fn reduce(args: &TripleArgs, json: bool, out: &mut dyn Write) -> std::result::Result<(), Failure> {
    let family = args.family;
    let (canonical, cert) = reduce_to_canonical(family, &args.triple)?;
    let params = if family.is_complete() {
        Some(param_recover(family, &canonical)?)
    } else {
        None
    };
    if json {
        emit(
            out,
            &json!({
                "family": family,
                "canonical": TripleJson::from(&canonical),
                "certificate": {
                    "perm": cert.perm,
                    "units": cert.units.map(|u| u.exponent()),
                },
                "params": params.as_ref().map(ParamsJson::from),
            }),
        )?;
    } else {
        writeln!(out, "{canonical}")?;
        let units = cert.units.map(|u| u.exponent().to_string()).join(", ");
        let perm = cert.perm.map(|p| p.to_string()).join(", ");
        writeln!(out, "certificate: perm [{perm}], units i^[{units}]")?;
        if let Some(p) = params {
            writeln!(out, "params: {p}")?;
        }
    }
    Ok(())
}
