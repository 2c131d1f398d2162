//! `finring` — command-line front end for the finite-ring ideal calculus.
//!
//! Subcommands: `analyze` (one-ring summary), `localize` (at `S = 1 + I`),
//! `endo` (endomorphism ring of an ideal power), `zint` (symbolic facts
//! about ideals of the integers), and `verify` (the corpus suite).
//!
//! Exit codes: 0 all good, 1 at least one check failed, 2 usage or parse
//! error, 3 a cap was exceeded in single-target mode.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use finring::caps::Caps;
use finring::checks::{one_plus_criteria, OnePlusCriteria};
use finring::ctx::RingCtx;
use finring::endo::{
    all_endomorphisms, endo_ring_summary, module_of_ideal_power, EndoError, EndoRingSummary,
};
use finring::ideal::{Ideal, IdealError};
use finring::localization::MultSet;
use finring::ring::{FiniteRing, RingError};
use finring::spectrum::{is_gelfand, is_mp_ring, is_reduced, is_zero_dimensional};
use finring::suite::{run_suite, SuiteOptions};
use finring::zint;

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

/// Ideal calculus of finite commutative rings.
#[derive(Parser)]
#[command(name = "finring", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Largest ring size to build (default 256, or 64 for `verify`).
    #[arg(long, global = true)]
    max_ring_size: Option<usize>,

    /// Largest module carrier for endomorphism enumeration.
    #[arg(long, global = true, default_value_t = 64)]
    max_endo_carrier: usize,

    /// Most generators for endomorphism modules.
    #[arg(long, global = true, default_value_t = 3)]
    max_gens: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Summarize one ring: ideals with purity verdicts, spectrum, classes.
    Analyze {
        /// Ring spec, e.g. `zmod:12` or `polyquot:p=2;f=0,0,1`.
        spec: String,
    },
    /// Localize a ring at the multiplicative set S = 1 + I.
    Localize {
        /// Ring spec.
        spec: String,
        /// Generators of I as element indices, comma-separated.
        #[arg(long, value_delimiter = ',', required = true, num_args = 1..)]
        ideal: Vec<usize>,
    },
    /// Enumerate the endomorphism ring of I^n.
    Endo {
        /// Ring spec.
        spec: String,
        /// Generators of I as element indices, comma-separated.
        #[arg(long, value_delimiter = ',', required = true, num_args = 1..)]
        ideal: Vec<usize>,
        /// The power n.
        #[arg(long, default_value_t = 1)]
        power: u32,
    },
    /// Symbolic facts about the ideals nZ of the integers.
    Zint {
        #[command(subcommand)]
        query: ZintQuery,
    },
    /// Build the ring corpus and run the named checks over it.
    Verify {
        /// Comma-separated check identifiers (default: all).
        #[arg(long, value_delimiter = ',')]
        checks: Option<Vec<String>>,
        /// Worker threads: 0 = library default, 1 = strictly serial.
        #[arg(long, default_value_t = 0)]
        jobs: usize,
    },
}

#[derive(Subcommand)]
enum ZintQuery {
    /// Purity and N-purity of nZ.
    Purity { n: u64 },
    /// Prime spectrum of the localization of Z at S = 1 + nZ.
    SpecLocalized { n: u64 },
    /// Radical of nZ, kernel of Z → S⁻¹Z, and the radical criterion.
    RadicalKernel { n: u64 },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((body, code)) => {
            if let Some(path) = &cli.out {
                if let Err(e) = fs::write(path, body.as_bytes()) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            } else {
                print!("{body}");
            }
            code
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(if cap_exceeded(&e) { 3 } else { 2 })
        }
    }
}

/// Caps exceeded in single-target mode exit 3; everything else that errors
/// is a usage/parse problem and exits 2.
fn cap_exceeded(err: &anyhow::Error) -> bool {
    err.chain().any(|cause| {
        if let Some(e) = cause.downcast_ref::<RingError>() {
            return matches!(e, RingError::SizeCap { .. });
        }
        if let Some(e) = cause.downcast_ref::<IdealError>() {
            return matches!(e, IdealError::LatticeCap { .. });
        }
        if let Some(e) = cause.downcast_ref::<EndoError>() {
            return matches!(e, EndoError::CarrierCap { .. } | EndoError::GenCap { .. });
        }
        false
    })
}

fn run(cli: &Cli) -> Result<(String, ExitCode)> {
    let caps = |default_ring_size: usize| Caps {
        max_ring_size: cli.max_ring_size.unwrap_or(default_ring_size),
        max_endo_carrier: cli.max_endo_carrier,
        max_endo_gens: cli.max_gens,
        ..Caps::default()
    };
    match &cli.command {
        Command::Analyze { spec } => {
            let report = cmd_analyze(spec, &caps(Caps::default().max_ring_size))?;
            Ok((
                render(cli.format, &report, render_analyze)?,
                ExitCode::SUCCESS,
            ))
        }
        Command::Localize { spec, ideal } => {
            let report = cmd_localize(spec, ideal, &caps(Caps::default().max_ring_size))?;
            Ok((
                render(cli.format, &report, render_localize)?,
                ExitCode::SUCCESS,
            ))
        }
        Command::Endo { spec, ideal, power } => {
            let report = cmd_endo(spec, ideal, *power, &caps(Caps::default().max_ring_size))?;
            Ok((render(cli.format, &report, render_endo)?, ExitCode::SUCCESS))
        }
        Command::Zint { query } => {
            let body = cmd_zint(query, cli.format)?;
            Ok((body, ExitCode::SUCCESS))
        }
        Command::Verify { checks, jobs } => {
            let opts = SuiteOptions {
                caps: caps(Caps::suite().max_ring_size),
                checks: checks.clone(),
                jobs: *jobs,
            };
            let report = run_suite(&opts)?;
            let body = match cli.format {
                Format::Json => {
                    let mut s = serde_json::to_string_pretty(&report)?;
                    s.push('\n');
                    s
                }
                Format::Text => report.render_text(),
            };
            let code = if report.has_failures() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
            Ok((body, code))
        }
    }
}

fn render<T: Serialize>(format: Format, report: &T, text: impl Fn(&T) -> String) -> Result<String> {
    Ok(match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report)?;
            s.push('\n');
            s
        }
        Format::Text => text(report),
    })
}

fn fmt_set(elems: &[usize]) -> String {
    let inner: Vec<String> = elems.iter().map(|e| e.to_string()).collect();
    format!("{{{}}}", inner.join(","))
}

fn flag(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct IdealRow {
    members: String,
    gens: Vec<usize>,
    pure: bool,
    n_pure: bool,
    strongly_pi_regular: bool,
    prime: bool,
    maximal: bool,
    minimal: bool,
    radical: String,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct Classes {
    field: bool,
    reduced: bool,
    zero_dimensional: bool,
    gelfand: bool,
    mp: bool,
    mid: bool,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct AnalyzeReport {
    spec: String,
    size: usize,
    units: Vec<usize>,
    idempotents: Vec<usize>,
    nilradical: String,
    jacobson: String,
    ideals: Vec<IdealRow>,
    primes: Vec<String>,
    maximals: Vec<String>,
    minimals: Vec<String>,
    classes: Classes,
}

fn cmd_analyze(spec: &str, caps: &Caps) -> Result<AnalyzeReport> {
    let ring = FiniteRing::parse_and_build(spec, caps)?;
    let ctx = RingCtx::new(&ring, caps)?;
    let ideals = (0..ctx.ideals().len())
        .map(|idx| {
            let ideal = &ctx.ideals()[idx];
            let v = ctx.purity(idx);
            IdealRow {
                members: ideal.display_members(),
                gens: ideal.gens().to_vec(),
                pure: v.pure,
                n_pure: v.is_npure(),
                strongly_pi_regular: v.strongly_pi_regular,
                prime: ctx.prime_idxs().contains(&idx),
                maximal: ctx.maximal_idxs().contains(&idx),
                minimal: ctx.minimal_idxs().contains(&idx),
                radical: ctx.radical(idx).display_members(),
            }
        })
        .collect();
    let members_of = |idxs: &[usize]| {
        idxs.iter()
            .map(|&i| ctx.ideals()[i].display_members())
            .collect::<Vec<_>>()
    };
    Ok(AnalyzeReport {
        spec: ring.spec().to_string(),
        size: ring.size(),
        units: ring.units(),
        idempotents: ring.idempotents(),
        nilradical: ctx.nilradical().display_members(),
        jacobson: ctx.spectrum().jacobson.display_members(),
        primes: members_of(ctx.prime_idxs()),
        maximals: members_of(ctx.maximal_idxs()),
        minimals: members_of(ctx.minimal_idxs()),
        classes: Classes {
            field: ring.is_field(),
            reduced: is_reduced(&ring),
            zero_dimensional: is_zero_dimensional(ctx.spectrum()),
            gelfand: is_gelfand(ctx.spectrum()),
            mp: is_mp_ring(ctx.spectrum()),
            mid: ctx.is_mid_ring()?,
        },
        ideals,
    })
}

fn render_analyze(r: &AnalyzeReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "ring {} (size {})", r.spec, r.size);
    let _ = writeln!(s, "units: {}", fmt_set(&r.units));
    let _ = writeln!(s, "idempotents: {}", fmt_set(&r.idempotents));
    let _ = writeln!(s, "nilradical: {}   jacobson: {}", r.nilradical, r.jacobson);
    let _ = writeln!(
        s,
        "classes: field={} reduced={} zeroDimensional={} gelfand={} mp={} mid={}",
        flag(r.classes.field),
        flag(r.classes.reduced),
        flag(r.classes.zero_dimensional),
        flag(r.classes.gelfand),
        flag(r.classes.mp),
        flag(r.classes.mid),
    );
    let _ = writeln!(s, "ideals ({}):", r.ideals.len());
    for row in &r.ideals {
        let _ = writeln!(
            s,
            "  {:<24} pure={:<3} nPure={:<3} stronglyPiRegular={:<3} prime={:<3} maximal={:<3} minimal={:<3} radical={}",
            row.members,
            flag(row.pure),
            flag(row.n_pure),
            flag(row.strongly_pi_regular),
            flag(row.prime),
            flag(row.maximal),
            flag(row.minimal),
            row.radical,
        );
    }
    let _ = writeln!(s, "primes: {}", r.primes.join(", "));
    let _ = writeln!(s, "maximals: {}", r.maximals.join(", "));
    let _ = writeln!(s, "minimals: {}", r.minimals.join(", "));
    s
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct LocalizeReport {
    spec: String,
    ideal: String,
    mult_set: String,
    kernel: String,
    quotient_spec: String,
    quotient_size: usize,
    quotient_primes: Vec<String>,
    inverses: BTreeMap<usize, usize>,
    criteria: OnePlusCriteria,
}

fn cmd_localize(spec: &str, gens: &[usize], caps: &Caps) -> Result<LocalizeReport> {
    let ring = FiniteRing::parse_and_build(spec, caps)?;
    let ctx = RingCtx::new(&ring, caps)?;
    let ideal = Ideal::generated(&ring, gens)?;
    let idx = ctx
        .index_of(&ideal)
        .expect("generated ideal is in the complete lattice");
    let l = ctx.localize_one_plus(idx)?;
    let criteria = one_plus_criteria(&ctx, idx)
        .with_context(|| format!("criteria for I={}", ideal.display_members()))?;
    let mult_set = MultSet::one_plus(&ideal);
    Ok(LocalizeReport {
        spec: ring.spec().to_string(),
        ideal: ideal.display_members(),
        mult_set: fmt_set(mult_set.members()),
        kernel: l.loc.kernel.display_members(),
        quotient_spec: l.ctx.ring().spec().to_string(),
        quotient_size: l.ctx.ring().size(),
        quotient_primes: l
            .ctx
            .spectrum()
            .primes
            .iter()
            .map(|p| p.display_members())
            .collect(),
        inverses: l.loc.inverses.clone(),
        criteria,
    })
}

fn render_localize(r: &LocalizeReport) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "localization of {} at S = 1 + I, I = {}",
        r.spec, r.ideal
    );
    let _ = writeln!(s, "S = {}", r.mult_set);
    let _ = writeln!(s, "kernel = {}", r.kernel);
    let _ = writeln!(
        s,
        "quotient: {} (size {})",
        r.quotient_spec, r.quotient_size
    );
    let _ = writeln!(
        s,
        "primes of the quotient: {}",
        r.quotient_primes.join(", ")
    );
    let pairs: Vec<String> = r
        .inverses
        .iter()
        .map(|(sx, t)| format!("{sx}→{t}"))
        .collect();
    let _ = writeln!(s, "inverse certificate: {}", pairs.join(", "));
    let c = &r.criteria;
    let _ = writeln!(
        s,
        "criteria: nPure={} pure={} spectrumPullback={} localizedNilradical={} kernelRadical={} inducedIso={} kernelEqualsIdeal={} localizedIdealZero={}",
        flag(c.n_pure),
        flag(c.pure),
        flag(c.spectrum_pullback),
        flag(c.localized_nilradical),
        flag(c.kernel_radical),
        flag(c.induced_iso),
        flag(c.kernel_equals_ideal),
        flag(c.localized_ideal_zero),
    );
    s
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct EndoReport {
    spec: String,
    ideal: String,
    power: u32,
    summary: EndoRingSummary,
}

fn cmd_endo(spec: &str, gens: &[usize], power: u32, caps: &Caps) -> Result<EndoReport> {
    let ring = FiniteRing::parse_and_build(spec, caps)?;
    let ideal = Ideal::generated(&ring, gens)?;
    let module = module_of_ideal_power(&ideal, power, caps)?;
    let endos = all_endomorphisms(&module);
    Ok(EndoReport {
        spec: ring.spec().to_string(),
        ideal: ideal.display_members(),
        power,
        summary: endo_ring_summary(&module, &endos),
    })
}

fn render_endo(r: &EndoReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "End(I^{}) for {}, I = {}", r.power, r.spec, r.ideal);
    let _ = writeln!(
        s,
        "module carrier {} with generators {:?}",
        fmt_set(&r.summary.carrier),
        r.summary.gens
    );
    let _ = writeln!(
        s,
        "{} endomorphisms; commutative={} identity={} zero={} closedUnderAddition={} closedUnderComposition={}",
        r.summary.count,
        flag(r.summary.commutative),
        flag(r.summary.identity_present),
        flag(r.summary.zero_present),
        flag(r.summary.closed_under_addition),
        flag(r.summary.closed_under_composition),
    );
    s
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct ZPurityReport {
    n: u64,
    pure: bool,
    n_pure: bool,
}

fn cmd_zint(query: &ZintQuery, format: Format) -> Result<String> {
    match query {
        ZintQuery::Purity { n } => {
            let (pure, n_pure) = zint::z_purity(zint::ZIdeal { n: *n });
            let report = ZPurityReport {
                n: *n,
                pure,
                n_pure,
            };
            render(format, &report, |r| {
                format!("{}Z: pure={} nPure={}\n", r.n, flag(r.pure), flag(r.n_pure))
            })
        }
        ZintQuery::SpecLocalized { n } => {
            let report = zint::z_spec_localized(*n)?;
            render(format, &report, |r| {
                let primes: Vec<String> = r.primes.iter().map(|p| p.to_string()).collect();
                format!(
                    "Spec of Z localized at 1 + {}Z: [{}]\nZ/{}Z field: {}   localization field: {}\n",
                    r.n,
                    primes.join(", "),
                    r.n,
                    flag(r.quotient_is_field),
                    flag(r.localization_is_field),
                )
            })
        }
        ZintQuery::RadicalKernel { n } => {
            let report = zint::z_radical_kernel_facts(*n)?;
            render(format, &report, |r| {
                format!(
                    "radical of {}Z: {}Z\nkernel of Z → S⁻¹Z: {}Z\nradical criterion (√I = √Ker): {}\n",
                    r.n, r.radical, r.kernel, flag(r.criterion_iv),
                )
            })
        }
    }
}
