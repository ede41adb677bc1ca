//! Parse expressions and evaluate them exactly.
use mularith::expr::{build, build_natural, BuildContext};

fn main() -> mularith::Result<()> {
    let ctx = BuildContext::default();
    for (src, args) in [
        ("sigma_r", vec![3, 3]),
        ("dir(one, one)", vec![4, 6]),
        ("psi_lcm(phi)", vec![12]),
        ("mul(at_gcd(phi), lift(sigma(2)))", vec![6, 10]),
        ("inv(unit, gcd)", vec![4, 8]),
    ] {
        let f = build(src, args.len(), &ctx)?;
        println!("{src:<36} at {args:?} = {}", f.eval(&args)?);
    }
    // natural arity: `s` is a function of two variables
    let s = build_natural("s", 1, &ctx)?;
    println!("s has arity {} and s(4, 6) = {}", s.arity(), s.eval(&[4, 6])?);
    Ok(())
}
