//! Riemann zeta, its derivative and the prime zeta tail, by Euler–Maclaurin summation.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_traits::{One, ToPrimitive, Zero};
use rug::float::Constant;
use rug::ops::Pow;
use rug::Float;

use crate::catalog::classical::mu;
use crate::error::{Error, Result};
use crate::numbers::{binomial, big, primes_up_to, rat, Rational};

/// Bits needed for `digits` significant decimals, plus guard bits.
pub fn bits_for_digits(digits: u32) -> u32 {
    (digits as f64 * std::f64::consts::LOG2_10).ceil() as u32 + 24
}

pub fn digits_for_bits(prec: u32) -> u32 {
    ((prec.saturating_sub(24)) as f64 / std::f64::consts::LOG2_10).floor() as u32
}

/// Exact rational to `Float`.
pub fn to_float(q: &Rational, prec: u32) -> Float {
    if let (Some(n), Some(d)) = (q.numer().to_i64(), q.denom().to_i64()) {
        return Float::with_val(prec, n) / d;
    }
    let n = rug::Integer::from_str_radix(&q.numer().to_str_radix(16), 16).expect("hex numerator");
    let d = rug::Integer::from_str_radix(&q.denom().to_str_radix(16), 16).expect("hex denominator");
    Float::with_val(prec, n) / Float::with_val(prec, d)
}

/// `B_0, B_1, ..., B_m` (with `B_1 = -1/2`).
pub fn bernoulli(m: usize) -> Vec<Rational> {
    static CACHE: OnceLock<Mutex<Vec<Rational>>> = OnceLock::new();
    let mut cache = CACHE.get_or_init(|| Mutex::new(vec![Rational::one()])).lock().expect("bernoulli cache");
    while cache.len() <= m {
        let k = cache.len();
        let mut acc = Rational::zero();
        for (j, b) in cache.iter().enumerate() {
            acc += big(binomial(k as u64 + 1, j as u64)) * b;
        }
        cache.push(-acc / rat(k as i64 + 1));
    }
    cache[..=m].to_vec()
}

pub fn pi(prec: u32) -> Float {
    Float::with_val(prec, Constant::Pi)
}

/// Euler's constant.
pub fn euler_gamma(prec: u32) -> Float {
    Float::with_val(prec, Constant::Euler)
}

fn check_s(s: &Float) -> Result<()> {
    if *s <= 1 {
        return Err(Error::InvalidArgument(format!("zeta needs s > 1, got {}", s.to_f64())));
    }
    Ok(())
}

/// `(zeta(s), zeta'(s))` at the precision of `s`.
fn zeta_em(s: &Float) -> (Float, Float) {
    let prec = s.prec();
    let digits = digits_for_bits(prec).max(10) as u64;
    let n_cut = digits + 10;
    let m = (digits / 2 + 10) as usize;
    let bern = bernoulli(2 * m);

    let mut z = Float::with_val(prec, 0);
    let mut dz = Float::with_val(prec, 0);
    for n in 1..n_cut {
        let t = Float::with_val(prec, n).pow(-s.clone());
        let ln = Float::with_val(prec, n).ln();
        dz -= Float::with_val(prec, &t * &ln);
        z += t;
    }
    let big_n = Float::with_val(prec, n_cut);
    let ln_n = big_n.clone().ln();
    let n_s = big_n.clone().pow(-s.clone());
    let sm1 = Float::with_val(prec, s - 1u32);
    let n_1s = Float::with_val(prec, &n_s * &big_n);
    // integral term
    z += Float::with_val(prec, &n_1s / &sm1);
    dz -= Float::with_val(prec, &n_1s * (Float::with_val(prec, &ln_n / &sm1) + Float::with_val(prec, sm1.clone().pow(2)).recip()));
    z += Float::with_val(prec, &n_s / 2u32);
    dz -= Float::with_val(prec, &n_s * &ln_n) / 2u32;

    // rising factorial s(s+1)..(s+2k-2), N^{-s-2k+1}, sum of 1/(s+j)
    let mut rising = s.clone();
    let mut harm = Float::with_val(prec, s.clone().recip());
    let mut npow = Float::with_val(prec, &n_s / &big_n);
    let n2 = Float::with_val(prec, big_n.clone().pow(2));
    let mut fact = Float::with_val(prec, 2);
    for k in 1..=m {
        if k > 1 {
            for j in [2 * k as u32 - 3, 2 * k as u32 - 2] {
                let sj = Float::with_val(prec, s + j);
                harm += Float::with_val(prec, sj.clone().recip());
                rising *= sj;
            }
            fact *= (2 * k as u32 - 1) * (2 * k as u32);
            npow /= &n2;
        }
        let b = to_float(&bern[2 * k], prec);
        let term = Float::with_val(prec, &b * &rising) * &npow / &fact;
        dz += Float::with_val(prec, &term * Float::with_val(prec, &harm - &ln_n));
        z += term;
    }
    (z, dz)
}

fn key(s: &Float) -> (String, u32) {
    (s.to_string_radix(16, None), s.prec())
}

fn cached(tag: u8, s: &Float, compute: impl FnOnce() -> Float) -> Float {
    static CACHE: OnceLock<Mutex<HashMap<(u8, String, u32), Float>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let (k, p) = key(s);
    if let Some(v) = cache.lock().expect("zeta cache").get(&(tag, k.clone(), p)) {
        return v.clone();
    }
    let v = compute();
    cache.lock().expect("zeta cache").insert((tag, k, p), v.clone());
    v
}

/// `zeta(s)` for real `s > 1`, accurate to about `digits` decimals.
pub fn zeta(s: f64, digits: u32) -> Result<Float> {
    zeta_float(&Float::with_val(bits_for_digits(digits), s))
}

/// `zeta(s)` at the precision of `s`.
pub fn zeta_float(s: &Float) -> Result<Float> {
    check_s(s)?;
    Ok(cached(0, s, || zeta_em(s).0))
}

/// `zeta'(s)` for real `s > 1`.
pub fn zeta_derivative(s: f64, digits: u32) -> Result<Float> {
    let s = Float::with_val(bits_for_digits(digits), s);
    check_s(&s)?;
    Ok(cached(1, &s, || zeta_em(&s).1))
}

/// Prime zeta `P(s) = sum_p p^{-s} = sum_k mu(k)/k log zeta(ks)`.
pub fn prime_zeta(s: &Float) -> Result<Float> {
    check_s(s)?;
    Ok(cached(2, s, || {
        let prec = s.prec();
        let mut acc = Float::with_val(prec, 0);
        let mut k = 1u64;
        loop {
            let ks = Float::with_val(prec, s * k);
            if ks.to_f64() > prec as f64 + 8.0 {
                break;
            }
            let m = mu(k);
            if m != 0 {
                let lz = zeta_em(&ks).0.ln();
                acc += Float::with_val(prec, lz * m) / k;
            }
            k += 1;
        }
        acc
    }))
}

/// `sum_{p > P} p^{-s}`.
pub fn prime_zeta_tail(s: &Float, cutoff: u64) -> Result<Float> {
    let head = prime_power_sum(&primes_up_to(cutoff), s);
    Ok(prime_zeta(s)? - head)
}

/// `sum_{p in primes} p^{-s}` with a fixed summation order.
pub fn prime_power_sum(primes: &[u64], s: &Float) -> Float {
    use rayon::prelude::*;
    let prec = s.prec();
    let integral = s.to_f64().fract() == 0.0 && s.to_f64() < 1e6;
    let block_sums: Vec<Float> = primes
        .par_chunks(4096)
        .map(|chunk| {
            let mut acc = Float::with_val(prec, 0);
            for &p in chunk {
                let t = if integral {
                    Float::with_val(prec, rug::Integer::from(p).pow(s.to_f64() as u32)).recip()
                } else {
                    Float::with_val(prec, p).pow(-s.clone())
                };
                acc += t;
            }
            acc
        })
        .collect();
    block_sums.into_iter().fold(Float::with_val(prec, 0), |a, b| a + b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bernoulli_examples() {
        let b = bernoulli(12);
        assert_eq!(b[1], crate::numbers::ratio(-1, 2));
        assert_eq!(b[2], crate::numbers::ratio(1, 6));
        assert_eq!(b[3], rat(0));
        assert_eq!(b[12], crate::numbers::ratio(-691, 2730));
    }

    #[test]
    fn zeta_closed_forms() {
        let prec = bits_for_digits(50);
        let p = pi(prec);
        let z2 = zeta(2.0, 50).unwrap();
        let want: Float = Float::with_val(prec, p.clone().pow(2)) / 6u32;
        assert!(Float::with_val(prec, &z2 - &want).abs() < 1e-48);
        let z4 = zeta(4.0, 50).unwrap();
        let want: Float = Float::with_val(prec, p.pow(4)) / 90u32;
        assert!(Float::with_val(prec, &z4 - &want).abs() < 1e-48);
        assert!(zeta(1.0, 20).is_err());
    }

    #[test]
    fn zeta_matches_mpfr() {
        for s in [1.5, 2.0, 3.0, 3.7, 5.0, 12.0, 30.0] {
            let ours = zeta(s, 50).unwrap();
            let theirs = Float::with_val(ours.prec(), s).zeta();
            let rel = Float::with_val(ours.prec(), &ours - &theirs).abs() / &theirs;
            assert!(rel < 1e-48, "s = {s}");
        }
        assert!(zeta(3.0, 20).unwrap().to_string_radix(10, Some(11)).starts_with("1.2020569032"));
    }

    #[test]
    fn derivative_matches_difference_quotient() {
        for s in [2.0, 3.0, 4.5] {
            let d = zeta_derivative(s, 40).unwrap();
            let prec = bits_for_digits(80);
            let h = Float::with_val(prec, 1e-25);
            let hi = Float::with_val(prec, s + &h).zeta();
            let lo = Float::with_val(prec, s - &h).zeta();
            let fd = Float::with_val(prec, (hi - lo) / (h * 2u32));
            assert!(Float::with_val(prec, &fd - &d).abs() < 1e-35, "s = {s}");
        }
        // zeta'(2) = -0.93754825431584375370...
        assert!(zeta_derivative(2.0, 30).unwrap().to_string_radix(10, Some(12)).starts_with("-9.3754825431"));
    }

    #[test]
    fn prime_zeta_value() {
        let s = Float::with_val(bits_for_digits(40), 2);
        // P(2) = 0.45224742004106549850...
        assert!(prime_zeta(&s).unwrap().to_string_radix(10, Some(15)).starts_with("4.5224742004106"));
        let tail = prime_zeta_tail(&s, 1000).unwrap().to_f64();
        let approx = 1.0 / (1000.0 * (1000f64).ln());
        assert!(tail > 0.5 * approx && tail < 2.0 * approx);
    }
}
