//! Matveev's bound and the first box of bounds on (n, l, k, m).

use fibcert::matveev::*;

fn main() -> fibcert::Result<()> {
    let digits = 200;
    let c = m_coefficient(digits)?;
    println!("m coefficient from Matveev     = {:.6e}", c.matveev.to_f64());
    println!("padded by 1.5/1.4              = {:.6e} <= {}", c.padded.to_f64(), c.cap);
    println!("D^2 (1 + ln D) with D = 2      = {:.6}", c.degree_factor_literal.to_f64());
    println!("as displayed, 2^3 (1 + ln 2)   = {:.6}", c.degree_factor_displayed.to_f64());
    println!("n coefficient                  = {:.6e}", n_coefficient(digits)?.to_f64());

    let stage = analytic_stage(digits)?;
    let b = &stage.bounds;
    println!("\nleast n with the final inequality certified: {}", b.n_max);
    println!("ratio at that n                  = {:.6}", stage.ratio_at_n_max.to_f64());
    println!("m < 1.61e12 (1 + ln n_max)       = {:.6e}", stage.m_bound.to_f64());
    println!("l_max = {}, k_max = {}", b.l_max, b.k_max);

    println!("\nheight side conditions hold for (l, m) = (157, 227): {}", heights_admissible(157, 227, 60)?);
    Ok(())
}
