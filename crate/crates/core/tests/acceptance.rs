//! One PASS/FAIL line per acceptance criterion. Run with `--nocapture` to see
//! the table when everything passes; a failing criterion fails the test.

mod common;

use std::time::{Duration, Instant};

use fibcert::cfrac::{convergents, expand_ball, is_reduced};
use fibcert::exactmath::{ln_phi, parse_decimal, Precision};
use fibcert::fibkit::*;
use fibcert::matveev::{analytic_stage, lk_bounds_from_n, n_from_size_bounds};
use fibcert::pipeline::{run_proof, ProofConfig, ProofReport};
use fibcert::reduction::{approx_f64, reduce_round, RoundOptions, RoundSummary};
use fibcert::search::{search_box, search_m1_case, SearchBox, SearchOptions};
use fibcert::{BallReal, BigInt, Rational};
use num_integer::Integer;
use num_traits::Zero;
use rand::{Rng, SeedableRng};

struct Line {
    id: u8,
    pass: bool,
    detail: String,
}

struct Checks {
    pass: bool,
    notes: Vec<String>,
}

impl Checks {
    fn new() -> Self {
        Checks { pass: true, notes: Vec::new() }
    }

    fn check(&mut self, ok: bool, note: String) {
        self.pass &= ok;
        self.notes.push(if ok { note } else { format!("{note} [FAIL]") });
    }

    fn runtime(&mut self, took: Duration, limit: Duration) {
        self.check(took < limit, format!("runtime {:.2}s < {}s", took.as_secs_f64(), limit.as_secs()));
    }

    fn line(self, id: u8) -> Line {
        Line { id, pass: self.pass, detail: self.notes.join("; ") }
    }
}

fn dec(s: &str) -> Rational {
    parse_decimal(s).unwrap()
}

fn int(s: &str) -> BigInt {
    s.parse().unwrap()
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let t = Instant::now();
    let v = f();
    (v, t.elapsed())
}

fn criterion_1() -> Line {
    let mut c = Checks::new();
    let (a, took) = timed(|| analytic_stage(200).unwrap());
    let b = &a.bounds;
    c.check(
        int("1000000000000000000000000000000000") <= b.n_max && b.n_max <= int("46400000000000000000000000000000000"),
        format!("n_max = {} in [1e33, 4.64e34]", b.n_max),
    );
    c.check(b.m_max <= int("131000000000000"), format!("m_max = {} <= 1.31e14", b.m_max));
    c.check((b.l_max, b.k_max) == (157, 167), format!("(l, k) thresholds = ({}, {})", b.l_max, b.k_max));
    c.runtime(took, Duration::from_secs(1));
    c.line(1)
}

fn round(m: &str, l_hi: u64) -> (RoundSummary, Duration) {
    timed(|| reduce_round(&int(m), 3, l_hi, &RoundOptions::default(), None).unwrap())
}

fn criterion_2(s: &RoundSummary, took: Duration) -> Line {
    let mut c = Checks::new();
    c.check(
        s.max_q == int("25431328747122828658870707509980696460342"),
        format!("max q = {} (l = {})", s.max_q, s.max_q_l),
    );
    c.check(s.min_epsilon >= dec("1.5e-28"), format!("min eps = {:.6e} >= 1.5e-28", approx_f64(&s.min_epsilon)));
    let omega = s.omega();
    c.check(
        dec("225.6") <= *omega && *omega <= dec("226.1"),
        format!(
            "omega = {} in [225.6, 226.1] (per-l max {})",
            approx_f64(omega),
            approx_f64(&s.per_l_max_omega)
        ),
    );
    c.check(s.m_max == BigInt::from(227), format!("m_max = {} (want 227)", s.m_max));
    let n = n_from_size_bounds(&BigInt::from(167), &s.m_max, &BigInt::from(157));
    c.check(n == BigInt::from(61466), format!("n_max = {n} (want 61466)"));
    c.runtime(took, Duration::from_secs(300));
    c.line(2)
}

fn criterion_3() -> Line {
    let mut c = Checks::new();
    let (l, k) = lk_bounds_from_n(&BigInt::from(61466), 200).unwrap();
    c.check((l, k) == (18, 24), format!("(l_max, k_max) from n = 61466: ({l}, {k})"));
    c.line(3)
}

fn criterion_4(s: &RoundSummary, took: Duration) -> Line {
    let mut c = Checks::new();
    let q16 = s.table.iter().find(|o| o.l == 16).map(|o| o.q.clone());
    c.check(q16 == Some(BigInt::from(61976)), format!("q(16) = {q16:?}"));
    let reference = dec("0.001274174011265825");
    let rel = (&s.min_epsilon - &reference) / &reference;
    c.check(
        s.min_epsilon >= reference && rel <= dec("1e-6"),
        format!("min eps = {} (relative excess {:.2e})", approx_f64(&s.min_epsilon), approx_f64(&rel)),
    );
    let omega = s.omega();
    c.check(dec("26.0") <= *omega && *omega <= dec("26.7"), format!("omega = {} in [26.0, 26.7]", approx_f64(omega)));
    c.check(s.m_max == BigInt::from(27), format!("m_max = {}", s.m_max));
    let n = n_from_size_bounds(&BigInt::from(24), &s.m_max, &BigInt::from(18));
    c.check(n == BigInt::from(869), format!("n_max = {n}"));
    c.runtime(took, Duration::from_secs(10));
    c.line(4)
}

fn criterion_5(report: &ProofReport) -> Line {
    let mut c = Checks::new();
    let ((main, m1), took) = timed(|| {
        (search_box(&SearchBox::final_box(), &SearchOptions::default()).unwrap(), search_m1_case().unwrap())
    });
    c.check(main.solutions.is_empty(), format!("final box {}: {} solutions", main.search_box, main.solutions.len()));
    let m1: Vec<_> = m1.solutions.iter().map(|s| (s.n, s.l, s.k, s.m)).collect();
    c.check(m1 == [(3, 3, 1, 1), (6, 3, 3, 1)], format!("m = 1: {m1:?}"));
    let verdict: Vec<_> = report.verdict.iter().map(|s| (s.n, s.l, s.k, s.m)).collect();
    c.check(report.certified && verdict == [(6, 3, 3, 1)], format!("pipeline verdict {verdict:?}"));
    c.runtime(took, Duration::from_secs(10));
    c.line(5)
}

/// Every convergent up to the chosen one, for each `l` of a round.
fn convergent_invariants(s: &RoundSummary) -> Result<usize, String> {
    let mut n = 0;
    for o in &s.table {
        let fl = fib(o.l);
        let gamma = |d: u32| BallReal::from_int(fl.clone(), d).ln().unwrap().div(&ln_phi(d)).unwrap();
        let convs = convergents(&expand_ball(&gamma(o.digits), 4096));
        let check = gamma(o.digits.max(200) * 2);
        for cv in convs.iter().take(o.q_index + 1) {
            // |gamma - p/q| < 1/q^2, i.e. |q gamma - p| < 1/q
            if !(is_reduced(cv) && cv.approximates(&check)) {
                return Err(format!("l = {}, index {}", o.l, cv.index));
            }
            n += 1;
        }
        if convs[o.q_index].q != o.q {
            return Err(format!("l = {}: recorded q differs from expansion", o.l));
        }
    }
    Ok(n)
}

fn exact_divisibility_grid_holds() -> Result<usize, String> {
    let f = common::naive_fib(2000);
    let mut n = 0;
    for l in 3..=10u64 {
        for j in 1..=200u64 {
            let idx = l * j;
            let fl = &f[l as usize];
            let mut x = f[idx as usize].clone();
            let mut k = 0;
            while !x.is_zero() && x.is_multiple_of(fl) {
                x /= fl;
                k += 1;
            }
            if k >= 2 {
                let inst = exact_divisibility_instance(l, idx).map_err(|e| e.to_string())?;
                if !inst.holds() || inst.k != k {
                    return Err(format!("l = {l}, n = {idx}"));
                }
                n += 1;
            }
        }
    }
    Ok(n)
}

fn random_box_equivalence(count: usize) -> Result<usize, String> {
    let mut rng = rand::rngs::StdRng::seed_from_u64(99);
    for _ in 0..count {
        let r = |rng: &mut rand::rngs::StdRng, lo: u64, hi: u64, len: u64| {
            let a = rng.gen_range(lo..hi);
            (a, a + rng.gen_range(0..len))
        };
        let (n, l, k, m) = (r(&mut rng, 1, 40, 60), r(&mut rng, 1, 10, 6), r(&mut rng, 0, 5, 5), r(&mut rng, 0, 4, 5));
        let b = SearchBox::new(n, l, k, m);
        let got: Vec<_> = search_box(&b, &SearchOptions { prefilter: false, jobs: 1 })
            .map_err(|e| e.to_string())?
            .solutions
            .iter()
            .map(|s| (s.n, s.l, s.k, s.m))
            .collect();
        if got != common::naive_search(n, l, k, m) {
            return Err(format!("box {b}"));
        }
    }
    Ok(count)
}

fn criterion_6(r1: &RoundSummary, r2: &RoundSummary) -> Line {
    let mut c = Checks::new();
    let all = |range: std::ops::RangeInclusive<u64>, f: &dyn Fn(u64) -> bool| range.clone().all(f);
    c.check(all(0..=500, &|n| binet_check(n, Precision::default()).unwrap()), "Binet n <= 500".into());
    c.check(all(1..=1000, &|n| golden_bounds_check(n)), "golden-ratio bounds n <= 1000".into());
    c.check(
        all(1..=60, &|l| (1..=l).all(|d| catalan_identity_check(l, d).unwrap())),
        "Catalan d <= l <= 60".into(),
    );
    c.check(all(3..=200, &|l| fl_minus_one_divides(l).unwrap()), "F_l - 1 divisibility l <= 200".into());
    let grid = exact_divisibility_grid_holds();
    c.check(grid.is_ok(), format!("exact-divisibility lemma grid: {grid:?}"));
    let convs = convergent_invariants(r1).and_then(|a| convergent_invariants(r2).map(|b| a + b));
    c.check(convs.is_ok(), format!("convergent invariants: {convs:?}"));
    let synth = common::synthetic_brute_force(20, 2024);
    c.check(synth == Ok(20), format!("synthetic reduction brute force: {synth:?}"));
    let boxes = random_box_equivalence(60);
    c.check(boxes.is_ok(), format!("random-box search equivalence: {boxes:?}"));
    c.line(6)
}

fn criterion_7() -> Line {
    let mut c = Checks::new();
    let (chains, violations) = common::containment_chains(1000, 31337);
    c.check(chains == 1000 && violations.is_empty(), format!("{chains} chains, {} violations", violations.len()));
    for v in violations.iter().take(3) {
        c.notes.push(v.clone());
    }
    c.line(7)
}

fn criterion_8() -> (Line, ProofReport) {
    let mut c = Checks::new();
    let (a, took) = timed(|| run_proof(&ProofConfig::default()).unwrap());
    let b = run_proof(&ProofConfig::default()).unwrap();
    let (ja, jb) = (a.to_json_without_timing().unwrap(), b.to_json_without_timing().unwrap());
    c.check(ja == jb, format!("two reports of {} bytes identical modulo timing", ja.len()));
    c.runtime(took, Duration::from_secs(600));
    (c.line(8), a)
}

#[test]
fn acceptance() {
    let (r1, t1) = round("131000000000167", 157);
    let (r2, t2) = round("251", 18);
    let (c8, report) = criterion_8();
    let lines = vec![
        criterion_1(),
        criterion_2(&r1, t1),
        criterion_3(),
        criterion_4(&r2, t2),
        criterion_5(&report),
        criterion_6(&r1, &r2),
        criterion_7(),
        c8,
    ];
    println!();
    for l in &lines {
        println!("criterion {}: {}  {}", l.id, if l.pass { "PASS" } else { "FAIL" }, l.detail);
    }
    let failed: Vec<u8> = lines.iter().filter(|l| !l.pass).map(|l| l.id).collect();
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
