//! Exhaustive search of the box left after the reductions, plus the m = 1 branch.

use std::time::Instant;

use fibcert::search::*;

fn main() -> fibcert::Result<()> {
    let b = SearchBox::final_box();
    let t = Instant::now();
    let r = search_box(&b, &SearchOptions::default())?;
    println!("box {b}: {} tuples evaluated, {} pruned, {} solutions ({:.2?})", r.evaluated, r.pruned, r.solutions.len(), t.elapsed());

    let raw = search_box(&b, &SearchOptions { prefilter: false, jobs: 0 })?;
    println!("without the size prefilter:   {} tuples evaluated, {} solutions", raw.evaluated, raw.solutions.len());

    let m1 = search_m1_case()?;
    for s in &m1.solutions {
        let row = s.row();
        println!("m = 1: F_{} = {} = F_{}^{} (F_{} - 1)", s.n, row.lhs, s.l, s.k, s.l);
    }
    let verdict = keep_k_at_least_3(&m1.solutions);
    println!("with k >= 3: {:?}", verdict.iter().map(|s| s.to_string()).collect::<Vec<_>>());
    Ok(())
}
