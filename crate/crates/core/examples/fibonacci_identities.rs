//! Exact Fibonacci numbers and the identities the proof leans on.

use fibcert::exactmath::Precision;
use fibcert::fibkit::*;

fn main() -> fibcert::Result<()> {
    println!("F_100 = {}", fib(100));
    println!("F_869 has {} digits", fib(869).to_string().len());

    let binet_ok = (0..=500).all(|n| binet_check(n, Precision::default()).unwrap_or(false));
    println!("Binet formula encloses F_n for n <= 500: {binet_ok}");

    let golden_ok = (1..=1000).all(golden_bounds_check);
    println!("phi^(n-2) <= F_n <= phi^(n-1) for 1 <= n <= 1000: {golden_ok}");

    let mut catalan_ok = true;
    for l in 1..=60 {
        for d in 1..=l {
            catalan_ok &= catalan_identity_check(l, d)?;
        }
    }
    println!("Catalan's identity for d <= l <= 60: {catalan_ok}");

    let divides = (3..=200).map(fl_minus_one_divides).collect::<fibcert::Result<Vec<_>>>()?;
    println!("(F_l - 1) | F_(l-2) F_(l-1) F_(l+1) F_(l+2) for 3 <= l <= 200: {}", divides.iter().all(|&b| b));

    // exact divisibility: F_l^k || F_n forces F_l^(k-1) or F_l^(k-2) || n/l
    for (l, n) in [(3, 6), (4, 36), (3, 24), (5, 125)] {
        let inst = exact_divisibility_instance(l, n)?;
        println!(
            "F_{l}^{} || F_{n}: clause {}, exponent in n/l expected {} observed {}",
            inst.k, inst.clause, inst.expected_exponent, inst.observed_exponent
        );
    }

    let lb = ln_n_lower_bound(3, 3, 60)?;
    println!("any solution with l = 3, k = 3 has ln n >= {:.6}", lb.to_f64());
    Ok(())
}
