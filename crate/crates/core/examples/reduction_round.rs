//! One round of the Dujella–Pethő reduction over a range of `l`.
//!
//! ```text
//! cargo run --release --example reduction_round -- 2
//! cargo run --release --example reduction_round -- 1
//! ```

use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::Instant;

use fibcert::reduction::{approx_f64, reduce_round, RoundOptions};
use fibcert::BigInt;

fn main() -> fibcert::Result<()> {
    let round = std::env::args().nth(1).unwrap_or_else(|| "2".into());
    let (m, l_hi) = match round.as_str() {
        "1" => (BigInt::from(131_000_000_000_167u64), 157),
        _ => (BigInt::from(251), 18),
    };
    let done = AtomicUsize::new(0);
    let total = (l_hi - 2) as usize;
    let progress = |o: &fibcert::reduction::ReductionOutcome| {
        let n = done.fetch_add(1, Ordering::Relaxed) + 1;
        eprintln!("[{n:>3}/{total}] l = {:>3}  q_{} = {}", o.l, o.q_index, o.q);
    };
    let start = Instant::now();
    let summary = reduce_round(&m, 3, l_hi, &RoundOptions::default(), Some(&progress))?;
    println!("M                = {m}");
    println!("max q            = {} (l = {})", summary.max_q, summary.max_q_l);
    println!("min epsilon      > {} (l = {})", approx_f64(&summary.min_epsilon), summary.min_epsilon_l);
    println!("pooled omega     < {}", approx_f64(&summary.pooled_omega));
    println!("per-l max omega  < {}", approx_f64(&summary.per_l_max_omega));
    println!("m_max            = {}", summary.m_max);
    println!("elapsed          = {:.2?}", start.elapsed());
    Ok(())
}
