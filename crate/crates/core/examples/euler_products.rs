//! Multiple Dirichlet series through Euler products, checked against zeta values.
use mularith::catalog::function;
use mularith::series::{dirichlet_partial_sum, euler_product, format_float, zeta, EulerConfig};

fn main() -> mularith::Result<()> {
    let cfg = EulerConfig::default().with_primes(20_000);
    let gcd = function("gcd", 2, None)?;
    let res = euler_product(&gcd, &[2.0, 2.0], &cfg)?;
    let d = cfg.digits;
    let closed = zeta(3.0, d)? * zeta(2.0, d)?.square() / zeta(4.0, d)?;
    println!("sum gcd(m,n)/(mn)^2 = {}", format_float(&res.value, 30));
    println!("zeta(3)zeta(2)^2/zeta(4) = {}", format_float(&closed, 30));
    println!("tail estimate {:.2e}, fitted alpha {:?}", res.tail_estimate, res.alpha);
    println!("partial sum to 200: {}", format_float(&dirichlet_partial_sum(&gcd, &[2.0, 2.0], 200, 30)?, 30));
    match euler_product(&function("one", 2, None)?, &[1.0, 2.0], &cfg) {
        Err(e) => println!("z = (1, 2): {e}"),
        Ok(r) => println!("unexpected value {}", r.value),
    }
    Ok(())
}
