//! Independent re-check of a proof report.
//!
//! Everything cheap is recomputed from the recorded data: the analytic
//! inequalities at the recorded `n_max`, every reduction outcome's `epsilon`
//! at its stated precision, the bound arithmetic between stages, and the final
//! searches. Nothing is read back from the report without being re-derived.

use std::path::Path;

use num_bigint::BigInt;

use super::report::*;
use super::run::{next_thresholds, reduction_m, search_boxes};
use crate::error::{Error, Result};
use crate::exactmath::BallReal;
use crate::matveev::{derive_m_bound, lk_bounds_from_n, n_bound_ratio, n_from_size_bounds, BoundState, Stage};
use crate::reduction::{check_outcome, m_max_from_omega, omega_ball, round_up_omega, Aggregation, ReductionInstance};
use crate::search::{search_box, search_m1_case, keep_k_at_least_3, SearchOptions, Solution};

const ORDER: [Stage; 4] = [Stage::Analytic, Stage::Reduced1, Stage::Reduced2, Stage::Searched];

fn fail<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::VerificationFailed(msg.into()))
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        fail(msg())
    }
}

pub fn verify_report_file(path: &Path) -> Result<()> {
    let text = std::fs::read_to_string(path)?;
    verify_report(&ProofReport::from_json(&text)?)
}

/// `Ok(())` when every claim re-verifies; otherwise the first failing claim.
pub fn verify_report(r: &ProofReport) -> Result<()> {
    ensure(r.certified, || "report is not marked certified".into())?;
    ensure(r.failure.is_none(), || "report records a failure".into())?;
    ensure(r.input_checksum == r.config.checksum(), || "input checksum does not match config".into())?;
    r.config.validate()?;
    let stages: Vec<Stage> = r.stages.iter().map(|s| s.stage).collect();
    ensure(stages == ORDER, || format!("stages out of order: {stages:?}"))?;
    for s in &r.stages {
        ensure(s.certified, || format!("stage {} not certified", s.stage))?;
        ensure(s.bounds.stage == s.stage, || format!("stage {} carries bounds labelled {}", s.stage, s.bounds.stage))?;
    }
    for w in r.stages.windows(2) {
        ensure(w[1].bounds.within(&w[0].bounds), || format!("bounds grew from {} to {}", w[0].stage, w[1].stage))?;
    }
    let digits = r.config.precision.digits;
    verify_analytic(&r.stages[0], r, digits)?;
    verify_reduction(&r.stages[1], &r.stages[0].bounds, 1, r, digits)?;
    verify_reduction(&r.stages[2], &r.stages[1].bounds, 2, r, digits)?;
    verify_search(&r.stages[3], &r.stages[2].bounds, r)?;
    Ok(())
}

fn verify_analytic(s: &StageRecord, r: &ProofReport, digits: u32) -> Result<()> {
    let b = &s.bounds;
    let one = BallReal::one(digits);
    ensure(n_bound_ratio(&b.n_max, digits)?.certainly_lt(&one), || "final inequality fails at n_max".into())?;
    let m_bound = derive_m_bound(&BallReal::from_int(b.n_max.clone(), digits))?;
    ensure(m_bound.upper().floor() <= b.m_max, || "analytic m_max below the m bound at n_max".into())?;
    let cap = BallReal::from_rational(&r.config.round1_m_cap, digits);
    ensure(m_bound.certainly_le(&cap), || "m bound exceeds round1_m_cap".into())?;
    let (l, k) = lk_bounds_from_n(&b.n_max, digits)?;
    ensure(l <= b.l_max && k <= b.k_max, || format!("thresholds ({l}, {k}) exceed recorded bounds"))?;
    Ok(())
}

fn verify_reduction(s: &StageRecord, prev: &BoundState, round: u8, r: &ProofReport, digits: u32) -> Result<()> {
    let StageDetail::Reduction(d) = &s.detail else {
        return fail(format!("stage {} has no reduction detail", s.stage));
    };
    ensure(d.round == round, || format!("stage {} records round {}", s.stage, d.round))?;
    let sm = &d.summary;
    let m = reduction_m(round, prev, &r.config);
    ensure(sm.m_bound >= m, || format!("round {round}: M = {} is below k_max + m bound = {m}", sm.m_bound))?;
    ensure(sm.l_range == (3, prev.l_max), || format!("round {round}: l range does not cover 3..={}", prev.l_max))?;
    let ls: Vec<u64> = sm.table.iter().map(|o| o.l).collect();
    ensure(ls == (3..=prev.l_max).collect::<Vec<_>>(), || format!("round {round}: table does not list every l once"))?;
    for o in &sm.table {
        let inst = ReductionInstance::fibonacci(o.l, sm.m_bound.clone())?;
        check_outcome(&inst, o)?;
    }
    let max_q = sm.table.iter().map(|o| &o.q).max().expect("nonempty table");
    let min_eps = sm.table.iter().map(|o| &o.epsilon_lower).min().expect("nonempty table");
    ensure(&sm.max_q == max_q && &sm.min_epsilon == min_eps, || format!("round {round}: extremes misreported"))?;
    let inst = ReductionInstance::fibonacci(3, sm.m_bound.clone())?;
    let pooled = omega_ball(&inst, max_q, min_eps, digits)?;
    ensure(round_up_omega(&pooled) <= sm.pooled_omega, || format!("round {round}: pooled omega too small"))?;
    let per_l = sm.table.iter().map(|o| &o.omega_bound).max().expect("nonempty table");
    ensure(per_l <= &sm.per_l_max_omega, || format!("round {round}: per-l omega too small"))?;
    let chosen = match sm.aggregation {
        Aggregation::Pooled => &sm.pooled_omega,
        Aggregation::PerL => &sm.per_l_max_omega,
    };
    ensure(m_max_from_omega(chosen) <= sm.m_max, || format!("round {round}: m_max below 1 + floor(omega)"))?;
    let b = &s.bounds;
    ensure(b.m_max >= sm.m_max.clone().min(prev.m_max.clone()), || format!("round {round}: m_max misreported"))?;
    let n = n_from_size_bounds(&BigInt::from(prev.k_max), &b.m_max, &BigInt::from(prev.l_max));
    ensure(n == d.n_from_sizes && n.clone().min(prev.n_max.clone()) <= b.n_max, || {
        format!("round {round}: n_max does not follow from 2 + (k + m)(l - 1)")
    })?;
    let th = next_thresholds(round, prev, &d.n_from_sizes, digits)?;
    ensure(th == d.thresholds && th.0 <= b.l_max && th.1 <= b.k_max, || format!("round {round}: thresholds misreported"))?;
    Ok(())
}

fn rows_equal(rec: &SearchRecord, sols: &[Solution]) -> bool {
    rec.solutions.len() == sols.len() && rec.solutions.iter().zip(sols).all(|(a, b)| *a == b.row())
}

fn verify_search(s: &StageRecord, prev: &BoundState, r: &ProofReport) -> Result<()> {
    let StageDetail::Search(d) = &s.detail else {
        return fail("searched stage has no search detail");
    };
    let (final_box, small_box) = search_boxes(prev)?;
    ensure(d.final_box.search_box == final_box && d.small_n.search_box == small_box, || {
        "search boxes do not match the reduced bounds".into()
    })?;
    let opts = SearchOptions { prefilter: true, jobs: r.config.jobs };
    let main = search_box(&final_box, &opts)?;
    let small = search_box(&small_box, &opts)?;
    let m_one = search_m1_case()?;
    ensure(rows_equal(&d.final_box, &main.solutions), || "final box results differ on rerun".into())?;
    ensure(rows_equal(&d.small_n, &small.solutions), || "small-n results differ on rerun".into())?;
    ensure(rows_equal(&d.m_one, &m_one.solutions), || "m = 1 results differ on rerun".into())?;
    for row in &r.verdict {
        let sol = Solution { n: row.n, l: row.l, k: row.k, m: row.m };
        ensure(sol.verify() && sol.row() == *row, || format!("verdict entry {sol} does not satisfy the equation"))?;
    }
    let all: Vec<_> = main.solutions.iter().chain(&small.solutions).chain(&m_one.solutions).copied().collect();
    let expected: Vec<_> = keep_k_at_least_3(&all).iter().map(|s| s.row()).collect();
    ensure(r.verdict == expected, || "verdict differs from the filtered search results".into())?;
    Ok(())
}
