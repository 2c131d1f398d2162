//! Corpus generation and the verification harness: build a deterministic
//! family of small rings, run every enabled check over each of them (serial
//! or parallel, same verdicts either way), and assemble the report.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use rayon::prelude::*;
use serde_json::json;
use thiserror::Error;

use crate::caps::Caps;
use crate::checks::run_checks;
use crate::ctx::RingCtx;
use crate::ideal::{all_ideals, IdealError};
use crate::ring::{quotient_ring, FiniteRing, RingError, RingSpec};
use crate::verdict::{CorpusRing, CorpusSummary, SuiteConfig, SuiteReport, Verdict, CHECK_IDS};

#[derive(Debug, Error)]
pub enum SuiteError {
    #[error("unknown check id {0:?}")]
    UnknownCheck(String),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Ideal(#[from] IdealError),
    #[error("could not build a thread pool with {jobs} workers: {message}")]
    ThreadPool { jobs: usize, message: String },
}

/// Everything `run_suite` needs: the caps (echoed into the report), an
/// optional check filter, and the worker count (`0` = library default,
/// `1` = strictly serial).
#[derive(Clone, Debug)]
pub struct SuiteOptions {
    pub caps: Caps,
    pub checks: Option<Vec<String>>,
    pub jobs: usize,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            caps: Caps::suite(),
            checks: None,
            jobs: 0,
        }
    }
}

/// Validate a check filter against the known identifiers; `None` enables
/// everything.
pub fn resolve_checks(filter: Option<&[String]>) -> Result<BTreeSet<String>, SuiteError> {
    match filter {
        None => Ok(CHECK_IDS.iter().map(|s| s.to_string()).collect()),
        Some(list) => {
            let mut enabled = BTreeSet::new();
            for id in list {
                if !CHECK_IDS.contains(&id.as_str()) {
                    return Err(SuiteError::UnknownCheck(id.clone()));
                }
                enabled.insert(id.clone());
            }
            Ok(enabled)
        }
    }
}

/// The deterministic corpus: residue rings `Z/nZ` for `2 ≤ n ≤ cap`,
/// truncated polynomial rings over `F_2` and `F_3` for every monic modulus
/// of degree 2 and 3 that fits, pairwise products of residue rings, and all
/// quotients of each of those bases by each of its ideals — deduplicated by
/// identical tables, first occurrence kept.
pub fn build_corpus(caps: &Caps) -> Result<Vec<Arc<FiniteRing>>, SuiteError> {
    let cap = caps.max_ring_size;
    let mut bases: Vec<Arc<FiniteRing>> = Vec::new();
    for n in 2..=cap as u64 {
        bases.push(FiniteRing::build(&RingSpec::Zmod(n), caps)?);
    }
    for p in [2u64, 3] {
        for deg in 2u32..=3 {
            if p.pow(deg) > cap as u64 {
                continue;
            }
            for code in 0..p.pow(deg) {
                let mut coeffs = Vec::with_capacity(deg as usize + 1);
                let mut rest = code;
                for _ in 0..deg {
                    coeffs.push(rest % p);
                    rest /= p;
                }
                coeffs.push(1);
                bases.push(FiniteRing::build(&RingSpec::PolyQuot { p, coeffs }, caps)?);
            }
        }
    }
    for m in 2..=cap as u64 {
        for k in m..=cap as u64 {
            if m * k > cap as u64 {
                break;
            }
            let spec = RingSpec::Product(Box::new(RingSpec::Zmod(m)), Box::new(RingSpec::Zmod(k)));
            bases.push(FiniteRing::build(&spec, caps)?);
        }
    }

    let mut rings = bases.clone();
    for base in &bases {
        for ideal in all_ideals(base, caps)? {
            let (quotient, _) = quotient_ring(base, ideal.mask(), ideal.gens(), caps)?;
            rings.push(quotient);
        }
    }

    let mut corpus: Vec<Arc<FiniteRing>> = Vec::new();
    let mut by_hash: BTreeMap<u64, Vec<usize>> = BTreeMap::new();
    for ring in rings {
        let bucket = by_hash.entry(ring.table_hash()).or_default();
        if bucket.iter().any(|&i| corpus[i].same_tables(&ring)) {
            continue;
        }
        bucket.push(corpus.len());
        corpus.push(ring);
    }
    Ok(corpus)
}

/// One ring's work unit: build the context, run the enabled checks. A
/// context that cannot be built (cap violations on derived data) yields one
/// skipped verdict per enabled check so the coverage invariant survives.
fn ring_task(
    ring: &Arc<FiniteRing>,
    caps: &Caps,
    enabled: &BTreeSet<String>,
) -> (CorpusRing, Vec<Verdict>) {
    let spec = ring.spec().to_string();
    match RingCtx::new(ring, caps) {
        Ok(ctx) => {
            let verdicts = run_checks(&ctx, enabled);
            (
                CorpusRing {
                    spec,
                    size: ring.size(),
                    ideals: ctx.ideals().len(),
                },
                verdicts,
            )
        }
        Err(e) => {
            let verdicts = enabled
                .iter()
                .map(|id| Verdict::skipped(id, spec.clone(), json!({ "error": e.to_string() })))
                .collect();
            (
                CorpusRing {
                    spec,
                    size: ring.size(),
                    ideals: 0,
                },
                verdicts,
            )
        }
    }
}

/// Run the suite over the generated corpus and assemble the report.
/// Verdict order is corpus order and is identical for serial and parallel
/// runs; only the timing fields may differ.
pub fn run_suite(opts: &SuiteOptions) -> Result<SuiteReport, SuiteError> {
    let enabled = resolve_checks(opts.checks.as_deref())?;
    let corpus = build_corpus(&opts.caps)?;

    let results: Vec<(CorpusRing, Vec<Verdict>)> = if opts.jobs == 1 {
        corpus
            .iter()
            .map(|r| ring_task(r, &opts.caps, &enabled))
            .collect()
    } else {
        let mut builder = rayon::ThreadPoolBuilder::new();
        if opts.jobs > 0 {
            builder = builder.num_threads(opts.jobs);
        }
        let pool = builder.build().map_err(|e| SuiteError::ThreadPool {
            jobs: opts.jobs,
            message: e.to_string(),
        })?;
        pool.install(|| {
            corpus
                .par_iter()
                .map(|r| ring_task(r, &opts.caps, &enabled))
                .collect()
        })
    };

    let config = SuiteConfig {
        max_ring_size: opts.caps.max_ring_size,
        max_ideals: opts.caps.max_ideals,
        max_endo_carrier: opts.caps.max_endo_carrier,
        max_endo_gens: opts.caps.max_endo_gens,
        checks: enabled.iter().cloned().collect(),
        jobs: opts.jobs,
    };
    let rings: Vec<CorpusRing> = results.iter().map(|(c, _)| c.clone()).collect();
    let summary = CorpusSummary {
        ring_count: rings.len(),
        ideal_count: rings.iter().map(|r| r.ideals).sum(),
        rings,
    };
    let checks = results.into_iter().flat_map(|(_, v)| v).collect();
    Ok(SuiteReport::assemble(config, summary, checks))
}
