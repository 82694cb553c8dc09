use std::time::Instant;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::reference::reference_matches;
use super::report::*;
use crate::error::{Error, Result};
use crate::exactmath::BallReal;
use crate::matveev::{analytic_stage, lk_bounds_from_n, n_from_size_bounds, BoundState, Stage};
use crate::reduction::{reduce_round, ReductionOutcome, RoundOptions, RoundSummary};
use crate::search::{search_box, search_m1_case, keep_k_at_least_3, SearchBox, SearchOptions};

/// Events reported while a proof runs.
#[derive(Debug, Clone, Copy)]
pub enum ProgressEvent<'a> {
    StageStarted(Stage),
    Reduced { round: u8, outcome: &'a ReductionOutcome },
    StageFinished(&'a StageRecord),
}

pub type Progress<'a> = &'a (dyn Fn(ProgressEvent<'_>) + Sync);

pub fn run_proof(config: &ProofConfig) -> Result<ProofReport> {
    run_proof_with(config, None)
}

/// Run every stage in order. Stage errors do not propagate: they end the run
/// and are recorded in `failure`, leaving a partial, uncertified report.
pub fn run_proof_with(config: &ProofConfig, progress: Option<Progress<'_>>) -> Result<ProofReport> {
    config.validate()?;
    let mut report = ProofReport {
        version: REPORT_VERSION.into(),
        config: config.clone(),
        input_checksum: config.checksum(),
        stages: Vec::new(),
        verdict: Vec::new(),
        certified: false,
        failure: None,
        paper_reference_matches: Vec::new(),
    };
    let mut runner = Runner { config, progress, stages: &mut report.stages };
    match runner.run() {
        Ok(verdict) => {
            report.certified = report.stages.iter().all(|s| s.certified) && verdict.iter().all(|s| s.verify());
            if report.certified {
                report.verdict = verdict.iter().map(|s| s.row()).collect();
            }
        }
        Err((stage, e)) => report.failure = Some(Failure::from_error(stage, &e)),
    }
    report.paper_reference_matches = reference_matches(&report);
    Ok(report)
}

struct Runner<'a, 'p> {
    config: &'a ProofConfig,
    progress: Option<Progress<'p>>,
    stages: &'a mut Vec<StageRecord>,
}

type StageResult<T> = std::result::Result<T, (Stage, Error)>;

fn at<T>(stage: Stage, r: Result<T>) -> StageResult<T> {
    r.map_err(|e| (stage, e))
}

impl Runner<'_, '_> {
    fn emit(&self, ev: ProgressEvent<'_>) {
        if let Some(cb) = self.progress {
            cb(ev);
        }
    }

    fn push(&mut self, rec: StageRecord) {
        self.emit(ProgressEvent::StageFinished(&rec));
        self.stages.push(rec);
    }

    fn run(&mut self) -> StageResult<Vec<crate::search::Solution>> {
        let analytic = self.analytic()?;
        let reduced1 = self.reduction(1, &analytic)?;
        let reduced2 = self.reduction(2, &reduced1)?;
        self.search(&reduced2)
    }

    fn analytic(&mut self) -> StageResult<BoundState> {
        let stage = Stage::Analytic;
        self.emit(ProgressEvent::StageStarted(stage));
        let t = Instant::now();
        let digits = self.config.precision.digits;
        let a = at(stage, analytic_stage(digits))?;
        let cap = BallReal::from_rational(&self.config.round1_m_cap, digits);
        if !a.m_bound.certainly_le(&cap) {
            return Err((stage, Error::VerificationFailed("analytic m bound exceeds round1_m_cap".into())));
        }
        let bounds = a.bounds.clone();
        self.push(StageRecord {
            stage,
            bounds: bounds.clone(),
            certified: true,
            wall_time_ms: t.elapsed().as_millis() as u64,
            detail: StageDetail::Analytic(AnalyticDetail {
                ratio_at_n_max: a.ratio_at_n_max,
                m_bound: a.m_bound,
                m_coefficient: a.m_coefficient,
                n_coefficient: a.n_coefficient,
            }),
        });
        Ok(bounds)
    }

    fn reduction(&mut self, round: u8, prev: &BoundState) -> StageResult<BoundState> {
        let stage = if round == 1 { Stage::Reduced1 } else { Stage::Reduced2 };
        self.emit(ProgressEvent::StageStarted(stage));
        let t = Instant::now();
        let digits = self.config.precision.digits;
        let m = reduction_m(round, prev, self.config);
        let opts = RoundOptions {
            precision: self.config.precision,
            cap: self.config.denominator_cap(),
            jobs: self.config.jobs,
            aggregation: self.config.aggregation,
            cache_dir: self.config.cache_dir.clone(),
        };
        let cb = |outcome: &ReductionOutcome| self.emit(ProgressEvent::Reduced { round, outcome });
        let summary: RoundSummary = at(stage, reduce_round(&m, 3, prev.l_max, &opts, Some(&cb)))?;
        let m_max = summary.m_max.clone().min(prev.m_max.clone());
        let n_from_sizes = n_from_size_bounds(&BigInt::from(prev.k_max), &m_max, &BigInt::from(prev.l_max));
        let thresholds = next_thresholds(round, prev, &n_from_sizes, digits).map_err(|e| (stage, e))?;
        let bounds = BoundState {
            n_max: n_from_sizes.clone().min(prev.n_max.clone()),
            l_max: thresholds.0,
            k_max: thresholds.1,
            m_max,
            stage,
        };
        let certified = summary.table.iter().all(|o| o.certified);
        self.push(StageRecord {
            stage,
            bounds: bounds.clone(),
            certified,
            wall_time_ms: t.elapsed().as_millis() as u64,
            detail: StageDetail::Reduction(ReductionDetail { round, summary, n_from_sizes, thresholds }),
        });
        Ok(bounds)
    }

    fn search(&mut self, prev: &BoundState) -> StageResult<Vec<crate::search::Solution>> {
        let stage = Stage::Searched;
        self.emit(ProgressEvent::StageStarted(stage));
        let t = Instant::now();
        let (final_box, small_box) = search_boxes(prev).map_err(|e| (stage, e))?;
        let opts = SearchOptions { prefilter: true, jobs: self.config.jobs };
        let main = at(stage, search_box(&final_box, &opts))?;
        let small = at(stage, search_box(&small_box, &opts))?;
        let m_one = at(stage, search_m1_case())?;
        let all: Vec<_> = main.solutions.iter().chain(&small.solutions).chain(&m_one.solutions).copied().collect();
        let verdict = keep_k_at_least_3(&all);
        self.push(StageRecord {
            stage,
            bounds: BoundState { stage, ..prev.clone() },
            certified: true,
            wall_time_ms: t.elapsed().as_millis() as u64,
            detail: StageDetail::Search(SearchDetail {
                final_box: SearchRecord::from_result(&main, true),
                small_n: SearchRecord::from_result(&small, true),
                m_one: SearchRecord::from_result(&m_one, false),
            }),
        });
        Ok(verdict)
    }
}

/// `M` bounding `u = k + m`: the first round uses the configured cap on `m`,
/// later rounds the previous reduced `m_max`.
pub fn reduction_m(round: u8, prev: &BoundState, config: &ProofConfig) -> BigInt {
    let m_part = if round == 1 { config.round1_m_cap.to_integer() } else { prev.m_max.clone() };
    BigInt::from(prev.k_max) + m_part
}

/// After the first round `(l_max, k_max)` are re-derived from the new `n_max`;
/// after the second they are carried over unchanged.
pub fn next_thresholds(round: u8, prev: &BoundState, n: &BigInt, digits: u32) -> Result<(u64, u64)> {
    if round == 1 {
        let (l, k) = lk_bounds_from_n(n, digits)?;
        Ok((l.min(prev.l_max), k.min(prev.k_max)))
    } else {
        Ok((prev.l_max, prev.k_max))
    }
}

/// The final box (`n >= 9`) and its complement `1 <= n <= 8` over the same `(l, k, m)`.
pub fn search_boxes(b: &BoundState) -> Result<(SearchBox, SearchBox)> {
    let n_hi = b
        .n_max
        .to_u64()
        .ok_or_else(|| Error::PreconditionViolated(format!("n_max {} too large to search", b.n_max)))?;
    let m_hi = b
        .m_max
        .to_u64()
        .ok_or_else(|| Error::PreconditionViolated(format!("m_max {} too large to search", b.m_max)))?;
    let final_box = SearchBox::new((9, n_hi), (3, b.l_max), (3, b.k_max), (2, m_hi));
    let small = SearchBox::new((1, 8.min(n_hi)), (3, b.l_max), (3, b.k_max), (2, m_hi));
    Ok((final_box, small))
}
