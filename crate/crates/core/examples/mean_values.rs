//! Mean values: Euler products against box averages.
use mularith::asymptotics::{gcd_composite_box_mean, mean_value_dirichlet, mean_value_unitary, MEAN_VALUE_DEGREE};
use mularith::catalog::function;
use mularith::expr::{build, BuildContext};
use mularith::series::{format_float, EulerConfig};

fn main() -> mularith::Result<()> {
    let cfg = EulerConfig { degree: MEAN_VALUE_DEGREE, ..EulerConfig::default() };
    let gcd3 = function("gcd", 3, None)?;
    let m = mean_value_dirichlet(&gcd3, &cfg)?;
    println!("M(gcd, 3 variables) = {}", format_float(&m.value, 20));
    println!("box mean at N = 300 = {}", format_float(&gcd_composite_box_mean(&function("id", 1, None)?, 3, 300, cfg.prec())?, 20));
    // a bounded function has the same mean under both kernels
    let f = build("div(at_gcd(phi), gcd)", 2, &BuildContext::default())?;
    let (d, u) = (mean_value_dirichlet(&f, &cfg)?, mean_value_unitary(&f, &cfg)?);
    println!("M(phi(gcd)/gcd): Dirichlet kernel {}, unitary kernel {}", format_float(&d.value, 20), format_float(&u.value, 20));
    Ok(())
}
