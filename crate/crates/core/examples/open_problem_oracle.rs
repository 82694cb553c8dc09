//! Small-scale search for F_n = a^k (b^m - 1) with arbitrary bases a, b >= 2.

use fibcert::fibkit::fib;
use fibcert::search::{open_problem_oracle, Range};

fn main() -> fibcert::Result<()> {
    let n_hi = 300;
    let hits = open_problem_oracle(Range::new(2, 40), Range::new(2, 40), Range::new(1, 30), Range::new(1, 30), n_hi)?;
    println!("a, b <= 40, k, m <= 30, n <= {n_hi}: {} tuples", hits.len());
    for h in &hits {
        println!("F_{:<3} = {:>6} = {}^{} ({}^{} - 1)", h.n, fib(h.n).to_string(), h.a, h.k, h.b, h.m);
    }
    Ok(())
}
