//! Mean values `lim N^{-r} sum_{n_i <= N} f(n)` by Euler products and by truncated Wintner sums.

use num_traits::Zero;
use rug::ops::Pow;
use rug::Float;

use crate::arith::{ArithFn, LocalFactor};
use crate::convolution::{convolve, mobius, ConvolutionKind};
use crate::error::{Error, Result};
use crate::numbers::Rational;
use crate::series::euler::{euler_product_with, local_sum, EulerConfig, EulerProductResult, LocalSum};
use crate::series::zeta::to_float;

/// Local degree for mean values: at `z = 1` the shells at `p = 2` decay only like `2^{-2d/3}`.
pub const MEAN_VALUE_DEGREE: u32 = 160;

fn require_multiplicative(f: &ArithFn) -> Result<LocalFactor> {
    if !f.class().is_multiplicative() {
        return Err(Error::NotMultiplicative(f.name().to_string()));
    }
    f.local_factor()
}

/// `M(f) = prod_p (1 - 1/p)^r sum_nu f(p^nu) / p^{nu_1 + .. + nu_r}` for multiplicative `f`.
pub fn mean_value_dirichlet(f: &ArithFn, cfg: &EulerConfig) -> Result<EulerProductResult> {
    let lf = require_multiplicative(f)?;
    let r = f.arity();
    let prec = cfg.prec();
    let ones = vec![Float::with_val(prec, 1); r];
    euler_product_with(
        |p| {
            let l = local_sum(&lf, &ones, p, cfg)?;
            let damp = Float::with_val(prec, 1) - Float::with_val(prec, p).recip();
            let damp = Float::with_val(prec, rug::ops::Pow::pow(damp, r as u32));
            Ok(LocalSum { value: l.value * damp, ..l })
        },
        cfg,
    )
}

/// `sum (mu_r * f)(n) / (n_1 .. n_r)` over `[1,N]^r`, any `f`.
pub fn mean_value_wintner(f: &ArithFn, cutoff: u64, digits: u32) -> Result<Float> {
    let g = convolve(ConvolutionKind::Dirichlet, &mobius(ConvolutionKind::Dirichlet, f.arity()), f)?;
    crate::series::euler::dirichlet_partial_sum(&g, &vec![1.0; f.arity()], cutoff, digits)
}

/// Local unitary convolution `(mu^x_r x f)(p^nu)`: alternating sum over the coordinates moved to `mu^x`.
fn unitary_kernel(lf: &LocalFactor, p: u64, nu: &[u32]) -> Rational {
    let support: Vec<usize> = (0..nu.len()).filter(|&i| nu[i] > 0).collect();
    let mut acc = Rational::zero();
    for mask in 0u32..(1 << support.len()) {
        let mut rest = nu.to_vec();
        for (bit, &i) in support.iter().enumerate() {
            if mask >> bit & 1 == 1 {
                rest[i] = 0;
            }
        }
        let v = lf.value(p, &rest);
        if mask.count_ones() % 2 == 0 { acc += v } else { acc -= v }
    }
    acc
}

/// `prod_p sum_nu (mu^x_r x f)(p^nu) phi(p^nu_1)..phi(p^nu_r) / p^{2 sum nu}`.
pub fn mean_value_unitary(f: &ArithFn, cfg: &EulerConfig) -> Result<EulerProductResult> {
    let lf = require_multiplicative(f)?;
    let r = f.arity();
    let prec = cfg.prec();
    // phi(p^v)/p^{2v} = (1 - 1/p) p^{-v}: fold (1 - 1/p) into the coefficient
    let weighted = LocalFactor::new(r, move |p, nu| {
        let h = unitary_kernel(&lf, p, nu);
        let k = nu.iter().filter(|&&v| v > 0).count() as u32;
        h * num_traits::Pow::pow(crate::numbers::ratio(p as i64 - 1, p as i64), k)
    });
    let ones = vec![Float::with_val(prec, 1); r];
    euler_product_with(|p| local_sum(&weighted, &ones, p, cfg), cfg)
}

/// `sum_{n_i <= N} g(gcd(n))` exactly, as `sum_d (mu * g)(d) [N/d]^r`.
pub fn gcd_composite_box_sum(g: &ArithFn, r: usize, cutoff: u64) -> Result<Rational> {
    let mg = convolve(ConvolutionKind::Dirichlet, &crate::catalog::classical::classical("mu", None)?, g)?;
    let mut acc = Rational::zero();
    for d in 1..=cutoff {
        let q = num_bigint::BigInt::from(cutoff / d).pow(r as u32);
        acc += mg.value(&[d]) * Rational::from_integer(q);
    }
    Ok(acc)
}

/// `N^{-r} sum_{n_i <= N} g(gcd(n))`.
pub fn gcd_composite_box_mean(g: &ArithFn, r: usize, cutoff: u64, prec: u32) -> Result<Float> {
    let s = gcd_composite_box_sum(g, r, cutoff)?;
    let denom = num_bigint::BigInt::from(cutoff).pow(r as u32);
    Ok(to_float(&(s / Rational::from_integer(denom)), prec))
}

/// Closed route for `g(gcd)`: `(1/zeta(r)) sum_n g(n)/n^r`, one-variable Euler product.
pub fn mean_value_gcd_composite(g: &ArithFn, r: usize, cfg: &EulerConfig) -> Result<EulerProductResult> {
    let lf = require_multiplicative(g)?;
    let prec = cfg.prec();
    let z = vec![Float::with_val(prec, r as u32)];
    euler_product_with(
        |p| {
            let l = local_sum(&lf, &z, p, cfg)?;
            let inv_zeta = Float::with_val(prec, 1) - Float::with_val(prec, rug::Integer::from(p).pow(r as u32)).recip();
            Ok(LocalSum { value: l.value * inv_zeta, ..l })
        },
        cfg,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::classical::classical;
    use crate::catalog::several::{delta_fn, gcd_fn, one_fn};
    use crate::numbers::rat;
    use crate::series::zeta::zeta;

    fn cfg(p: u64) -> EulerConfig {
        EulerConfig { primes: p, digits: 40, degree: MEAN_VALUE_DEGREE, ..EulerConfig::default() }
    }

    fn near(a: &Float, b: &Float, tol: f64) -> bool {
        Float::with_val(a.prec(), a - b).abs().to_f64() < tol
    }

    #[test]
    fn gcd_mean_values() {
        let z = |s| zeta(s, 40).unwrap();
        let want = z(2.0) / z(3.0);
        let got = mean_value_dirichlet(&gcd_fn(3), &cfg(20_000)).unwrap();
        assert!(near(&got.value, &want, 1e-10), "{}", got.value);
        let phi = classical("phi", None).unwrap();
        let want_phi = z(2.0) / z(3.0).pow(2);
        let got = mean_value_dirichlet(&phi.of_gcd(3).unwrap(), &cfg(20_000)).unwrap();
        assert!(near(&got.value, &want_phi, 1e-10));
        let closed = mean_value_gcd_composite(&phi, 3, &cfg(20_000)).unwrap();
        assert!(near(&closed.value, &want_phi, 1e-10));
        let boxed = gcd_composite_box_mean(&classical("id", None).unwrap(), 3, 300, 64).unwrap();
        assert!((boxed.to_f64() / want.to_f64() - 1.0).abs() < 0.02);
    }

    #[test]
    fn delta_mean_is_zero() {
        let got = mean_value_dirichlet(&delta_fn(2), &cfg(1000)).unwrap();
        assert!(got.value.is_zero());
    }

    #[test]
    fn gcd_pairs_diverge() {
        assert!(matches!(mean_value_dirichlet(&gcd_fn(2), &cfg(1000)), Err(Error::Divergent(_))));
    }

    #[test]
    fn unitary_mean_values() {
        let one = mean_value_unitary(&one_fn(2), &cfg(1000)).unwrap();
        assert!(near(&one.value, &Float::with_val(64, 1), 1e-30));
        let chi = ArithFn::new("gcud=1", 2, crate::arith::Class::General, |t| rat((crate::numbers::gcud(t).unwrap() == 1) as i64));
        let chi = chi.with_class(crate::arith::Class::Multiplicative).with_local(LocalFactor::new(2, |_, nu| {
            rat(!(nu[0] == nu[1] && nu[0] > 0) as i64)
        }));
        let got = mean_value_unitary(&chi, &cfg(20_000)).unwrap();
        let direct = crate::series::euler::euler_product_with(
            |p| {
                let pf = Float::with_val(128, p);
                let t = Float::with_val(128, &pf - 1u32) / (Float::with_val(128, pf.clone().pow(2u32)) * (pf + 1u32));
                Ok(LocalSum::exact(Float::with_val(128, 1) - t))
            },
            &cfg(20_000),
        )
        .unwrap();
        assert!(near(&got.value, &direct.value, 1e-10));
    }
}
