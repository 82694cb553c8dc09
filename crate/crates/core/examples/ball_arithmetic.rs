//! Midpoint-radius arithmetic: every result encloses the true value.

use fibcert::exactmath::{ln2, ln_phi, parse_decimal, phi, sqrt5};
use fibcert::{BallReal, Rational};

fn main() -> fibcert::Result<()> {
    let digits = 50;
    let s5 = sqrt5(digits);
    println!("sqrt 5      = {s5}");
    println!("phi         = {}", phi(digits));
    println!("ln phi      = {}", ln_phi(digits));
    println!("ln 2        = {}", ln2(digits));

    // phi^2 = phi + 1 holds inside the enclosures
    let p = phi(digits);
    let diff = p.mul(&p).sub(&p.add(&BallReal::one(digits)));
    println!("phi^2 - phi - 1 contains 0: {}", diff.contains_zero());

    // a decimal tenth is not dyadic, so it gets a small radius
    let tenth = BallReal::from_rational(&parse_decimal("0.1")?, digits);
    println!("0.1         = {tenth}");
    println!("contains 1/10: {}", tenth.contains_rational(&Rational::new(1.into(), 10.into())));

    // a certified comparison either decides or declines
    let a = ln2(digits);
    let b = BallReal::from_rational(&parse_decimal("0.6931471805599453")?, digits);
    println!("ln 2 vs 0.6931471805599453: {:?}", a.certified_cmp(&b));
    println!("ln 2 vs itself:             {:?}", a.certified_cmp(&a));

    // distance to the nearest integer, used by the reduction step
    let x = sqrt5(digits).mul_int(&1000.into());
    println!("||1000 sqrt 5|| = {}", x.nearest_int_distance()?);
    Ok(())
}
