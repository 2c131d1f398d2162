//! Report plumbing: one [`Verdict`] per check instance, tallies, and the
//! aggregated [`SuiteReport`] with its JSON schema
//! `{ config, corpus, checks, perCheck, failures, totals }`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

/// The fixed identifiers of every check the suite can run, in report order.
pub const CHECK_IDS: [&str; 23] = [
    "Structural",
    "T2.6",
    "PropII",
    "ThmIII",
    "ThmIV",
    "LemII",
    "LemIII",
    "PropIV",
    "LemIV",
    "LemV",
    "LemVI",
    "CorI",
    "CorII",
    "CorIII",
    "CorIV",
    "ThmII",
    "PropIII",
    "PropV",
    "PropVI",
    "LemVIIa",
    "ThmV-endo",
    "LemVIIb-endo",
    "ExampleI",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    /// A cap was hit; the witness names the cap.
    Skipped,
    /// The hypothesis set was empty; no instance was actually exercised.
    Vacuous,
}

/// Outcome of one check on one subject.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Verdict {
    pub check_id: String,
    pub subject: String,
    pub status: CheckStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    pub elapsed_ms: f64,
}

impl Verdict {
    pub fn pass(check_id: &str, subject: impl Into<String>) -> Verdict {
        Verdict {
            check_id: check_id.to_string(),
            subject: subject.into(),
            status: CheckStatus::Pass,
            witness: None,
            elapsed_ms: 0.0,
        }
    }

    /// A passing verdict that still carries informational payload.
    pub fn pass_with(check_id: &str, subject: impl Into<String>, witness: Value) -> Verdict {
        Verdict {
            witness: Some(witness),
            ..Verdict::pass(check_id, subject)
        }
    }

    pub fn fail(check_id: &str, subject: impl Into<String>, witness: Value) -> Verdict {
        Verdict {
            status: CheckStatus::Fail,
            witness: Some(witness),
            ..Verdict::pass(check_id, subject)
        }
    }

    pub fn skipped(check_id: &str, subject: impl Into<String>, cap: Value) -> Verdict {
        Verdict {
            status: CheckStatus::Skipped,
            witness: Some(cap),
            ..Verdict::pass(check_id, subject)
        }
    }

    pub fn vacuous(check_id: &str, subject: impl Into<String>) -> Verdict {
        Verdict {
            status: CheckStatus::Vacuous,
            ..Verdict::pass(check_id, subject)
        }
    }

    pub fn with_elapsed(mut self, elapsed_ms: f64) -> Verdict {
        self.elapsed_ms = elapsed_ms;
        self
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Tally {
    pub pass: usize,
    pub fail: usize,
    pub skipped: usize,
    pub vacuous: usize,
    pub instances: usize,
}

impl Tally {
    pub fn add(&mut self, status: CheckStatus) {
        match status {
            CheckStatus::Pass => self.pass += 1,
            CheckStatus::Fail => self.fail += 1,
            CheckStatus::Skipped => self.skipped += 1,
            CheckStatus::Vacuous => self.vacuous += 1,
        }
        self.instances += 1;
    }

    pub fn consistent(&self) -> bool {
        self.pass + self.fail + self.skipped + self.vacuous == self.instances
    }
}

/// Echo of the configuration a suite run used.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SuiteConfig {
    pub max_ring_size: usize,
    pub max_ideals: usize,
    pub max_endo_carrier: usize,
    pub max_endo_gens: usize,
    pub checks: Vec<String>,
    pub jobs: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CorpusRing {
    pub spec: String,
    pub size: usize,
    pub ideals: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CorpusSummary {
    pub ring_count: usize,
    pub ideal_count: usize,
    pub rings: Vec<CorpusRing>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SuiteReport {
    pub config: SuiteConfig,
    pub corpus: CorpusSummary,
    pub checks: Vec<Verdict>,
    pub per_check: BTreeMap<String, Tally>,
    pub failures: Vec<Verdict>,
    pub totals: Tally,
}

impl SuiteReport {
    /// Assemble tallies, failures, and totals from the verdict list.
    pub fn assemble(
        config: SuiteConfig,
        corpus: CorpusSummary,
        checks: Vec<Verdict>,
    ) -> SuiteReport {
        let mut per_check: BTreeMap<String, Tally> = BTreeMap::new();
        let mut totals = Tally::default();
        let mut failures = Vec::new();
        for v in &checks {
            per_check
                .entry(v.check_id.clone())
                .or_default()
                .add(v.status);
            totals.add(v.status);
            if v.status == CheckStatus::Fail {
                failures.push(v.clone());
            }
        }
        SuiteReport {
            config,
            corpus,
            checks,
            per_check,
            failures,
            totals,
        }
    }

    pub fn has_failures(&self) -> bool {
        self.totals.fail > 0
    }

    /// Human-readable summary: per-check tally table, failures, totals.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "corpus: {} rings, {} ideals (size cap {})\n",
            self.corpus.ring_count, self.corpus.ideal_count, self.config.max_ring_size
        ));
        out.push_str(&format!(
            "{:<14} {:>6} {:>6} {:>8} {:>8} {:>10}\n",
            "check", "pass", "fail", "skipped", "vacuous", "instances"
        ));
        for (id, t) in &self.per_check {
            out.push_str(&format!(
                "{:<14} {:>6} {:>6} {:>8} {:>8} {:>10}\n",
                id, t.pass, t.fail, t.skipped, t.vacuous, t.instances
            ));
        }
        out.push_str(&format!(
            "{:<14} {:>6} {:>6} {:>8} {:>8} {:>10}\n",
            "total",
            self.totals.pass,
            self.totals.fail,
            self.totals.skipped,
            self.totals.vacuous,
            self.totals.instances
        ));
        if self.failures.is_empty() {
            out.push_str("no failures\n");
        } else {
            out.push_str(&format!("{} failure(s):\n", self.failures.len()));
            for f in &self.failures {
                out.push_str(&format!(
                    "  {} on {}: {}\n",
                    f.check_id,
                    f.subject,
                    f.witness
                        .as_ref()
                        .map(|w| w.to_string())
                        .unwrap_or_default()
                ));
            }
        }
        out
    }
}

/// Zero out every `elapsedMs` field in a serialized report, recursively.
/// Two runs with identical config must agree byte-for-byte after this.
pub fn strip_timing(value: &mut Value) {
    match value {
        Value::Object(map) => {
            for (k, v) in map.iter_mut() {
                if k == "elapsedMs" {
                    *v = Value::from(0.0);
                } else {
                    strip_timing(v);
                }
            }
        }
        Value::Array(items) => {
            for v in items {
                strip_timing(v);
            }
        }
        _ => {}
    }
}
