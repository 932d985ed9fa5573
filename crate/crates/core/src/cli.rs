//! Command-line driver. Every command prints (or writes) a JSON report whose
//! top-level `verified` flag decides the exit code: 0 pass, 1 check failure,
//! 2 usage error.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::artin_schreier::{build_k1_module, enumerate_orbits, FactoredElement, FpPoly, InstanceReport, Side};
use crate::condition_star::{fuzz_condition_star, CoeffTower, FuzzBounds};
use crate::error::Error;
use crate::galmodules::{decompose_tower, tower_compatibility_check, GModulePresentation, ModuleRecord};
use crate::grouprings::GroupRing;
use crate::milnor_symbols::{
    check_norm_residue_diagram, norm_membership_km, norm_symbols, random_computable_symbol, KmMembership,
    MilnorClass,
};
use crate::params::PrimeParams;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "milnor-galois", version, about = "Exact checks for Galois modules of Milnor K-groups mod p^s")]
pub struct Cli {
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Socle lemma in R_s[G_i]: every nonzero b has γ with γ·b = socle.
    IdealLemma {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        s: u32,
        #[arg(long)]
        i: u32,
        #[arg(long, conflicts_with = "fuzz")]
        exhaustive: bool,
        /// Check N random nonzero elements.
        #[arg(long)]
        fuzz: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Decompose the tower M mod p, …, M mod p^S of a module file.
    Decompose {
        #[arg(long)]
        module_file: PathBuf,
        #[arg(long)]
        tower_depth: Option<u32>,
    },
    /// Build the Artin–Schreier K_1 module and cross-check its ranks.
    AsInstance {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        s: u32,
        #[arg(long = "dF")]
        d_f: usize,
    },
    /// Symbol calculus checks over the Artin–Schreier tower.
    Symbols {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        s: u32,
        #[arg(long)]
        m: usize,
        #[arg(long, value_enum)]
        check: SymbolCheck,
        /// F-side polynomial in t for the membership check.
        #[arg(long, default_value = "t")]
        x: String,
        #[arg(long = "dF", default_value_t = 1)]
        d_f: usize,
        /// Random symbols for the diagram check.
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Randomized valuation check of the norm equation.
    ConditionStar {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        ell: u64,
        #[arg(long)]
        trials: u64,
        #[arg(long)]
        seed: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SymbolCheck {
    Diagram,
    Membership,
}

#[derive(Debug, Serialize)]
struct Report {
    command: &'static str,
    verified: bool,
    details: Value,
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    /// The JSON report, if the command got far enough to produce one.
    pub report: Option<String>,
    pub message: Option<String>,
    /// Where the report was written, if `--output` was given.
    pub written_to: Option<PathBuf>,
}

fn usage(msg: impl Into<String>) -> Outcome {
    Outcome { code: EXIT_USAGE, report: None, message: Some(msg.into()), written_to: None }
}

/// Parameter errors are the caller's fault; anything else is a failed check.
fn classify(e: Error) -> Outcome {
    let code = match e {
        Error::InvalidParams(_) | Error::Parse(_) | Error::Structural(_) | Error::IncompatibleTower(_) => EXIT_USAGE,
        _ => EXIT_FAIL,
    };
    Outcome { code, report: None, message: Some(e.to_string()), written_to: None }
}

fn to_value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("reports serialize")
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            return Outcome { code, report: None, message: Some(e.to_string()), written_to: None };
        }
    };
    let (command, result) = match &cli.command {
        Command::IdealLemma { p, s, i, exhaustive, fuzz, seed } => {
            ("ideal-lemma", ideal_lemma(*p, *s, *i, *exhaustive, *fuzz, *seed))
        }
        Command::Decompose { module_file, tower_depth } => ("decompose", decompose(module_file, *tower_depth)),
        Command::AsInstance { p, s, d_f } => ("as-instance", as_instance(*p, *s, *d_f)),
        Command::Symbols { p, s, m, check, x, d_f, trials, seed } => {
            ("symbols", symbols(*p, *s, *m, *check, x, *d_f, *trials, *seed))
        }
        Command::ConditionStar { p, n, ell, trials, seed } => {
            ("condition-star", condition_star(*p, *n, *ell, *trials, *seed))
        }
    };
    let (verified, details) = match result {
        Ok(r) => r,
        Err(o) => return o,
    };
    let text = serde_json::to_string_pretty(&Report { command, verified, details }).expect("reports serialize") + "\n";
    if let Some(path) = &cli.output {
        if let Err(e) = std::fs::write(path, &text) {
            return usage(format!("cannot write {}: {e}", path.display()));
        }
    }
    Outcome {
        code: if verified { EXIT_PASS } else { EXIT_FAIL },
        report: Some(text),
        message: None,
        written_to: cli.output.clone(),
    }
}

type CmdResult = std::result::Result<(bool, Value), Outcome>;

fn ideal_lemma(p: u64, s: u32, i: u32, exhaustive: bool, fuzz: Option<u64>, seed: u64) -> CmdResult {
    if i == 0 {
        return Err(usage("the socle lemma needs i >= 1"));
    }
    let params = PrimeParams::new(p, s, i).map_err(classify)?;
    let ring = GroupRing::new(params, i).map_err(classify)?;
    let socle = ring.socle().map_err(classify)?;
    let check = |b: &crate::grouprings::GroupRingElement| -> std::result::Result<bool, Outcome> {
        let gamma = b.socle_multiplier().map_err(classify)?;
        Ok(gamma.mul(b).map_err(classify)? == socle)
    };
    let (mode, checked, failures) = match (exhaustive, fuzz) {
        (true, _) | (false, None) => {
            let card = ring.cardinality().filter(|&c| c <= 1 << 24).ok_or_else(|| {
                usage("ring too large for an exhaustive run; use --fuzz N")
            })?;
            let mut failures = 0u64;
            for idx in 1..card {
                if !check(&ring.element_from_index(idx))? {
                    failures += 1;
                }
            }
            ("exhaustive", (card - 1) as u64, failures)
        }
        (false, Some(n)) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut failures = 0u64;
            let mut checked = 0u64;
            while checked < n {
                let b = ring.random(&mut rng);
                if b.is_zero() {
                    continue;
                }
                checked += 1;
                if !check(&b)? {
                    failures += 1;
                }
            }
            ("fuzz", n, failures)
        }
    };
    // p^(s-1) (τ-1)^(p^i) = 0
    let top = ring.tau_minus_one().pow(params.group_order(i) as u64).scale(params.ring().p_pow(s - 1));
    let nilpotent = top.is_zero();
    let verified = failures == 0 && nilpotent;
    Ok((
        verified,
        json!({
            "p": p, "s": s, "i": i, "mode": mode, "seed": seed,
            "checked": checked, "failures": failures, "nilpotency_holds": nilpotent,
        }),
    ))
}

fn decompose(path: &PathBuf, depth: Option<u32>) -> CmdResult {
    let text = std::fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    let record: ModuleRecord =
        serde_json::from_str(&text).map_err(|e| usage(format!("bad module file {}: {e}", path.display())))?;
    let top = GModulePresentation::try_from(record).map_err(classify)?;
    let s = top.params().s;
    let depth = depth.unwrap_or(s);
    if depth == 0 || depth > s {
        return Err(usage(format!("--tower-depth must be between 1 and s = {s}")));
    }
    let tower: Vec<GModulePresentation> =
        (1..=depth).map(|k| top.reduce_mod(k)).collect::<crate::error::Result<_>>().map_err(classify)?;
    let result = decompose_tower(&tower).map_err(classify)?;
    let compatible = tower_compatibility_check(top.params().p, &result.certificates);
    let verified = result.report.verified && compatible && result.certificates.len() == depth as usize;
    let mut details = to_value(&result);
    details["tower_compatible"] = json!(compatible);
    Ok((verified, details))
}

fn as_instance(p: u64, s: u32, d_f: usize) -> CmdResult {
    let params = PrimeParams::new(p, s, 1).map_err(classify)?;
    let inst = enumerate_orbits(params, d_f).map_err(classify)?;
    let module = build_k1_module(&inst, s).map_err(classify)?;
    let report = InstanceReport::new(&inst, &module);
    Ok((report.cross_check.passed, to_value(&report)))
}

#[allow(clippy::too_many_arguments)]
fn symbols(p: u64, s: u32, m: usize, check: SymbolCheck, x: &str, d_f: usize, trials: u64, seed: u64) -> CmdResult {
    PrimeParams::new(p, s, 1).map_err(classify)?;
    if m == 0 {
        return Err(usage("--m must be at least 1"));
    }
    match check {
        SymbolCheck::Diagram => {
            if m < 2 {
                return Err(usage("the diagram check needs m >= 2"));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut failures = Vec::new();
            for k in 0..trials {
                let c = random_computable_symbol(p, m, s, &mut rng).map_err(classify)?;
                if !check_norm_residue_diagram(&c).map_err(classify)? {
                    failures.push(json!({ "trial": k, "symbol": c.to_string() }));
                }
            }
            let verified = failures.is_empty();
            Ok((verified, json!({ "p": p, "s": s, "m": m, "trials": trials, "seed": seed, "failures": failures })))
        }
        SymbolCheck::Membership => {
            let poly = FpPoly::parse(p, x).map_err(classify)?;
            if poly.is_zero() {
                return Err(usage("--x must be nonzero"));
            }
            let xf = FactoredElement::from_poly(Side::F, &poly).map_err(classify)?;
            let class = MilnorClass::alpha(&xf, m, s).map_err(classify)?;
            let verdict = norm_membership_km(&class, d_f).map_err(classify)?;
            // replay the certificate before reporting success
            let verified = match &verdict {
                KmMembership::Member { certificate } => norm_symbols(certificate).map_err(classify)? == class,
                KmMembership::NonMember { chain, .. } => {
                    chain.first() == Some(&class)
                        && chain.windows(2).all(|w| w[0].residue_top().ok().as_ref() == Some(&w[1]))
                }
                KmMembership::Unknown { .. } => false,
            };
            let summary: Vec<String> = match &verdict {
                KmMembership::Member { certificate } => vec![format!("N({certificate}) = {class}")],
                KmMembership::NonMember { chain, .. } => chain.iter().map(|c| c.to_string()).collect(),
                KmMembership::Unknown { reason } => vec![reason.clone()],
            };
            Ok((
                verified,
                json!({
                    "p": p, "s": s, "m": m, "dF": d_f, "x": poly.display("t"),
                    "class": class.to_string(), "summary": summary, "result": to_value(&verdict),
                }),
            ))
        }
    }
}

fn condition_star(p: u64, n: u32, ell: u64, trials: u64, seed: u64) -> CmdResult {
    let tower = CoeffTower::new(p, n, ell).map_err(classify)?;
    match fuzz_condition_star(&tower, trials, &FuzzBounds::default(), seed) {
        Ok(report) => Ok((report.counterexamples.is_empty() && report.mismatches == trials, to_value(&report))),
        Err(Error::Counterexample(repro)) => Ok((
            false,
            json!({ "p": p, "n": n, "ell": ell, "trials": trials, "seed": seed, "counterexamples": [repro] }),
        )),
        Err(e) => Err(classify(e)),
    }
}

/// Entry point for the binary.
pub fn main_from_env() -> i32 {
    let out = run(std::env::args_os());
    if let Some(msg) = &out.message {
        eprint!("{msg}");
        if !msg.ends_with('\n') {
            eprintln!();
        }
    }
    if let Some(report) = &out.report {
        if out.written_to.is_none() {
            print!("{report}");
        }
    }
    out.code
}
