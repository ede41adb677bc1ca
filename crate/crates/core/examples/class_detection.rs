//! Empirical class detection on catalog and random functions.
use mularith::arith::check_class;
use mularith::{catalog::function, random};

fn main() -> mularith::Result<()> {
    let fs = [
        function("gcd", 2, None)?,
        function("lcm", 2, None)?,
        function("prod", 2, None)?,
        function("rho", 2, None)?,
        random::firmly(7, 2),
        random::general(7, 2),
    ];
    for f in &fs {
        let rep = check_class(f, 12)?;
        println!("{:<24} declared {:?}, observed {:?}", f.name(), f.class(), rep.strongest());
    }
    Ok(())
}
