use std::fmt::Write as _;
use std::path::PathBuf;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::exactmath::{parse_decimal, BallReal, Precision, Rational};
use crate::matveev::{BoundState, MCoefficient, Stage};
use crate::reduction::{approx_f64, Aggregation, RoundSummary};
use crate::search::{SearchBox, SearchResult, SolutionRow};

pub const REPORT_VERSION: &str = concat!("fibcert-", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofConfig {
    pub precision: Precision,
    /// Worker threads for the reduction and search stages; 0 means one per core.
    pub jobs: usize,
    pub aggregation: Aggregation,
    /// Rounded analytic bound on `m` used to set the first reduction's `M`.
    #[serde(with = "super::serde_decimal")]
    pub round1_m_cap: Rational,
    /// Convergent denominators must stay below `10^denominator_cap_digits`.
    pub denominator_cap_digits: u32,
    /// Directory for resumable per-`l` reduction results; not part of the certificate.
    #[serde(skip)]
    pub cache_dir: Option<PathBuf>,
}

impl Default for ProofConfig {
    fn default() -> Self {
        ProofConfig {
            precision: Precision::default(),
            jobs: 0,
            aggregation: Aggregation::Pooled,
            round1_m_cap: parse_decimal("1.31e14").expect("literal"),
            denominator_cap_digits: 100,
            cache_dir: None,
        }
    }
}

impl ProofConfig {
    pub fn validate(&self) -> Result<()> {
        Precision::new(self.precision.digits, self.precision.max_digits)?;
        if self.denominator_cap_digits == 0 {
            return Err(Error::PreconditionViolated("denominator cap must be positive".into()));
        }
        if !self.round1_m_cap.is_integer() || self.round1_m_cap < Rational::from_integer(2.into()) {
            return Err(Error::PreconditionViolated("round1_m_cap must be an integer >= 2".into()));
        }
        Ok(())
    }

    pub fn denominator_cap(&self) -> BigInt {
        BigInt::from(10u32).pow(self.denominator_cap_digits)
    }

    /// SHA-256 of the report version and the canonical JSON of this config.
    pub fn checksum(&self) -> String {
        let mut h = Sha256::new();
        h.update(REPORT_VERSION.as_bytes());
        h.update(serde_json::to_vec(self).expect("config serializes"));
        hex::encode(h.finalize())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalyticDetail {
    /// `RHS/n` of the final inequality in `n`, evaluated at `n_max`; below 1.
    pub ratio_at_n_max: BallReal,
    /// `1.61e12 (1 + ln n_max)`
    pub m_bound: BallReal,
    pub m_coefficient: MCoefficient,
    pub n_coefficient: BallReal,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionDetail {
    pub round: u8,
    pub summary: RoundSummary,
    /// `n_max` from the size inequality before the thresholds are re-derived.
    #[serde(with = "super::serde_bigint")]
    pub n_from_sizes: BigInt,
    /// `(l_max, k_max)` re-derived from `n_from_sizes`.
    pub thresholds: (u64, u64),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchRecord {
    pub search_box: SearchBox,
    pub prefilter: bool,
    pub solutions: Vec<SolutionRow>,
    pub evaluated: u64,
    pub pruned: u64,
}

impl SearchRecord {
    pub fn from_result(r: &SearchResult, prefilter: bool) -> Self {
        SearchRecord {
            search_box: r.search_box,
            prefilter,
            solutions: r.solutions.iter().map(|s| s.row()).collect(),
            evaluated: r.evaluated,
            pruned: r.pruned,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchDetail {
    /// The box left by the reductions, `n >= 9`.
    pub final_box: SearchRecord,
    /// Same `(l, k, m)` ranges with `1 <= n <= 8`.
    pub small_n: SearchRecord,
    /// `m = 1`, `n <= 12`.
    pub m_one: SearchRecord,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum StageDetail {
    Analytic(AnalyticDetail),
    Reduction(ReductionDetail),
    Search(SearchDetail),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageRecord {
    pub stage: Stage,
    pub bounds: BoundState,
    pub certified: bool,
    pub wall_time_ms: u64,
    pub detail: StageDetail,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Relation {
    Eq,
    Le,
    Ge,
}

/// A published value next to the computed one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReferenceMatch {
    pub quantity: String,
    /// `computed <relation> reference` is what is being checked.
    pub relation: Relation,
    pub reference: String,
    pub computed: String,
    pub matches: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub stage: Stage,
    pub kind: String,
    pub message: String,
}

impl Failure {
    pub fn from_error(stage: Stage, e: &Error) -> Self {
        let kind = match e {
            Error::PrecisionExhausted { .. } => "precision-exhausted",
            Error::VerificationFailed(_) => "verification-failed",
            _ => "error",
        };
        Failure { stage, kind: kind.into(), message: e.to_string() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofReport {
    pub version: String,
    pub config: ProofConfig,
    pub input_checksum: String,
    pub stages: Vec<StageRecord>,
    pub verdict: Vec<SolutionRow>,
    pub certified: bool,
    pub failure: Option<Failure>,
    pub paper_reference_matches: Vec<ReferenceMatch>,
}

impl ProofReport {
    pub fn stage(&self, stage: Stage) -> Option<&StageRecord> {
        self.stages.iter().find(|s| s.stage == stage)
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// JSON with every `wall_time_ms` zeroed, for run-to-run comparison.
    pub fn to_json_without_timing(&self) -> Result<String> {
        let mut copy = self.clone();
        for s in &mut copy.stages {
            s.wall_time_ms = 0;
        }
        copy.to_json()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}  checksum {}", self.version, &self.input_checksum[..16]);
        let _ = writeln!(out, "precision {} digits (max {})", self.config.precision.digits, self.config.precision.max_digits);
        for s in &self.stages {
            let b = &s.bounds;
            let _ = writeln!(
                out,
                "{:<10} n <= {:<40} l <= {:<4} k <= {:<4} m <= {:<16} {:>7} ms {}",
                s.stage.to_string(),
                b.n_max.to_string(),
                b.l_max,
                b.k_max,
                b.m_max.to_string(),
                s.wall_time_ms,
                if s.certified { "certified" } else { "NOT certified" }
            );
            if let StageDetail::Reduction(r) = &s.detail {
                let sm = &r.summary;
                let _ = writeln!(
                    out,
                    "           M = {}, max q = {} (l = {}), min eps > {:.6e} (l = {}), omega < {} (per-l {})",
                    sm.m_bound,
                    sm.max_q,
                    sm.max_q_l,
                    approx_f64(&sm.min_epsilon),
                    sm.min_epsilon_l,
                    approx_f64(&sm.pooled_omega),
                    approx_f64(&sm.per_l_max_omega)
                );
            }
        }
        let verdict: Vec<String> = self.verdict.iter().map(|r| format!("({}, {}, {}, {})", r.n, r.l, r.k, r.m)).collect();
        let _ = writeln!(out, "verdict: {{{}}}", verdict.join(", "));
        if let Some(f) = &self.failure {
            let _ = writeln!(out, "failure in {}: {}", f.stage, f.message);
        }
        let _ = writeln!(out, "reference values:");
        for m in &self.paper_reference_matches {
            let rel = match m.relation {
                Relation::Eq => "=",
                Relation::Le => "<=",
                Relation::Ge => ">=",
            };
            let _ = writeln!(
                out,
                "  [{}] {}: computed {} {} {}",
                if m.matches { "match" } else { "MISMATCH" },
                m.quantity,
                m.computed,
                rel,
                m.reference
            );
        }
        out
    }
}
