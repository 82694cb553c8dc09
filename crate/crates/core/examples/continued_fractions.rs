//! Certified continued fractions of `ln F_l / ln phi`.

use fibcert::cfrac::{convergents, expand, first_convergent_above};
use fibcert::exactmath::{ln_phi, Precision};
use fibcert::fibkit::fib;
use fibcert::{BallReal, BigInt};

fn main() -> fibcert::Result<()> {
    let phi_source = |d: u32| Ok(fibcert::exactmath::phi(d));
    let pq = expand(&phi_source, 12, Precision::default())?;
    let q: Vec<String> = convergents(&pq).iter().take(12).map(|c| c.q.to_string()).collect();
    println!("phi = [1; 1, 1, ...], denominators {}", q.join(", "));

    for l in [16u64, 154] {
        let fl = fib(l);
        let gamma = move |d: u32| BallReal::from_int(fl.clone(), d).ln()?.div(&ln_phi(d));
        let pq = expand(&gamma, 20, Precision::default())?;
        let head: Vec<String> = pq.a.iter().take(20).map(|a| a.to_string()).collect();
        println!("\nln F_{l} / ln phi = [{}; {}, ...]", head[0], head[1..].join(", "));
        println!("certified quotients at {} digits: {}", pq.digits, pq.certified_len);
        let threshold = if l == 16 { BigInt::from(6 * 251) } else { BigInt::from(6u64 * 131_000_000_000_167) };
        let c = first_convergent_above(&gamma, &threshold, Precision::default())?;
        println!("first convergent with q > {threshold}: q_{} = {}", c.index, c.q);
        let x = gamma(200)?;
        println!("|gamma - p/q| < 1/q^2: {}", c.approximates(&x));
    }
    Ok(())
}
