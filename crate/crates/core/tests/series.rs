use mularith::catalog::function;
use mularith::series::euler::{euler_product_with, LocalSum};
use mularith::series::{euler_product, zeta, EulerConfig};
use mularith::{Error, Result};
use rug::ops::Pow;
use rug::Float;

const DIGITS: u32 = 50;

fn z(s: f64) -> Float {
    zeta(s, DIGITS).unwrap()
}

fn rel(a: &Float, b: &Float) -> f64 {
    (a.clone() - b).abs().to_f64() / b.to_f64().abs()
}

fn euler(name: &str, at: &[f64]) -> Result<Float> {
    let f = function(name, at.len(), None)?;
    Ok(euler_product(&f, at, &EulerConfig::default())?.value)
}

/// `zeta(z_1)..zeta(z_r) prod_p (1 + sum_(j>=2) (-1)^(j-1) (j-1) e_j(p^-z))`
fn rho_closed(at: &[f64]) -> Float {
    let cfg = EulerConfig::default();
    let prec = cfg.prec();
    let prod = euler_product_with(
        |p| {
            let xs: Vec<Float> = at.iter().map(|&s| Float::with_val(prec, p).pow(-s)).collect();
            // elementary symmetric e_j by the usual recurrence
            let mut e = vec![Float::with_val(prec, 0); xs.len() + 1];
            e[0] = Float::with_val(prec, 1);
            for x in &xs {
                for j in (1..e.len()).rev() {
                    let t = e[j - 1].clone() * x;
                    e[j] += t;
                }
            }
            let mut v = Float::with_val(prec, 1);
            for (j, ej) in e.iter().enumerate().skip(2) {
                let sign = if j % 2 == 0 { -1 } else { 1 };
                v += ej.clone() * (sign * (j as i64 - 1));
            }
            Ok::<_, Error>(LocalSum::exact(v))
        },
        &cfg,
    )
    .unwrap();
    at.iter().fold(prod.value, |acc, &s| acc * z(s))
}

#[test]
fn gcd_lcm_s_c_rho_closed_forms() {
    let cases: Vec<(&str, Vec<f64>, Float)> = vec![
        ("gcd", vec![2.0, 2.0], z(2.0) * z(2.0) * z(3.0) / z(4.0)),
        ("gcd", vec![3.0, 3.0], z(3.0) * z(3.0) * z(5.0) / z(6.0)),
        ("gcd", vec![2.0, 2.0, 2.0], z(2.0) * z(2.0) * z(2.0) * z(5.0) / z(6.0)),
        ("lcm", vec![3.0, 3.0], z(2.0) * z(2.0) * z(5.0) / z(4.0)),
        ("s", vec![2.0, 2.0], z(2.0).square() * z(2.0).square() * z(3.0) / z(4.0)),
        ("s", vec![3.0, 3.0], z(3.0).square() * z(3.0).square() * z(5.0) / z(6.0)),
        ("c", vec![2.0, 2.0], z(2.0).square() * z(2.0).square() * z(3.0) / z(4.0).square()),
        ("c", vec![3.0, 3.0], z(3.0).square() * z(3.0).square() * z(5.0) / z(6.0).square()),
        ("sigma_r", vec![2.0, 3.0, 2.0], z(2.0).square() * z(3.0).square() * z(2.0).square() * z(6.0) / z(7.0)),
        ("rho", vec![2.0, 2.0], rho_closed(&[2.0, 2.0])),
        ("rho", vec![3.0, 3.0], rho_closed(&[3.0, 3.0])),
        ("rho", vec![2.0, 2.0, 2.0], rho_closed(&[2.0, 2.0, 2.0])),
    ];
    for (name, at, closed) in cases {
        let e = rel(&euler(name, &at).unwrap(), &closed);
        assert!(e < 1e-9, "{name} at {at:?}: {e:e}");
    }
}

#[test]
fn rho_pairs_are_visible_points() {
    // r = 2: pairwise coprime is plain coprime
    let v = euler("rho", &[2.0, 3.0]).unwrap();
    assert!(rel(&v, &(z(2.0) * z(3.0) / z(5.0))) < 1e-9);
}

#[test]
fn lcm_series_diverges_at_two() {
    assert!(matches!(euler("lcm", &[2.0, 2.0]), Err(Error::Divergent(_))));
}

// Ramanujan sums with the first argument k and second n (c_n(k) is periodic in k mod n).
// Summing over k first gives zeta(z) sum_(d|n) mu(n/d) d^(1-z), hence
// zeta(z) zeta(z+w-1) / zeta(w); the roles of z and w are exchanged in the commonly printed form.
#[test]
fn ramanujan_series_exponents() {
    for (zk, wn) in [(2.0, 3.0), (3.0, 2.0), (2.5, 4.0)] {
        let v = euler("ramanujan", &[zk, wn]).unwrap();
        let derived = z(zk) * z(zk + wn - 1.0) / z(wn);
        let printed = z(wn) * z(zk + wn - 1.0) / z(zk);
        assert!(rel(&v, &derived) < 1e-9, "({zk}, {wn})");
        assert!(rel(&v, &printed) > 1e-3, "({zk}, {wn})");
    }
}
