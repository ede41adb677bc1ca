//! Euler products `prod_p sum_nu f(p^nu) p^{-nu.z}` with a fitted prime tail.

use num_traits::Zero;
use rayon::prelude::*;
use rug::ops::Pow;
use rug::Float;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::arith::{ArithFn, LocalFactor};
use crate::error::{Error, Result};
use crate::numbers::primes_up_to;
use crate::series::zeta::{bits_for_digits, prime_power_sum, prime_zeta, to_float};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerConfig {
    /// Prime cutoff `P`.
    pub primes: u64,
    /// Local degree cutoff `D` (total degree of the exponent tuple).
    pub degree: u32,
    /// Significant decimal digits of the working precision.
    pub digits: u32,
    /// A shell below `stop_ratio * |local sum|` counts as negligible.
    pub stop_ratio: f64,
    pub block: usize,
}

impl Default for EulerConfig {
    fn default() -> Self {
        EulerConfig { primes: 100_000, degree: 40, digits: 50, stop_ratio: 1e-30, block: 2048 }
    }
}

impl EulerConfig {
    pub fn prec(&self) -> u32 {
        bits_for_digits(self.digits)
    }

    pub fn with_primes(self, primes: u64) -> Self {
        EulerConfig { primes, ..self }
    }
}

/// One local factor with an estimate of the dropped shells, relative to the value.
#[derive(Debug, Clone)]
pub struct LocalSum {
    pub value: Float,
    pub truncation: f64,
    pub degree: u32,
}

impl LocalSum {
    pub fn exact(value: Float) -> LocalSum {
        LocalSum { value, truncation: 0.0, degree: 0 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EulerProductResult {
    /// Tail-corrected value.
    pub value: Float,
    /// Raw product over `p <= P`.
    pub partial_product: Float,
    pub cutoff: u64,
    pub local_degree: u32,
    pub tail_estimate: Float,
    /// Fitted decay exponent of `log L_p`, when a fit was possible.
    pub alpha: Option<f64>,
    pub digits: u32,
}

/// Decimal rendering with `digits` significant digits, fixed point when short.
pub fn format_float(x: &Float, digits: u32) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    let s = x.to_string_radix(10, Some(digits as usize));
    let Some((mant, exp)) = s.split_once('e').map(|(m, e)| (m.to_string(), e.parse::<i64>().unwrap_or(0))) else {
        return s;
    };
    if !(-6..=20).contains(&exp) {
        return s;
    }
    let neg = mant.starts_with('-');
    let digits_only: String = mant.chars().filter(|c| c.is_ascii_digit()).collect();
    let point = 1 + exp;
    let body = if point <= 0 {
        format!("0.{}{}", "0".repeat((-point) as usize), digits_only)
    } else if point as usize >= digits_only.len() {
        format!("{}{}", digits_only, "0".repeat(point as usize - digits_only.len()))
    } else {
        format!("{}.{}", &digits_only[..point as usize], &digits_only[point as usize..])
    };
    if neg { format!("-{body}") } else { body }
}

impl Serialize for EulerProductResult {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("EulerProductResult", 6)?;
        st.serialize_field("value", &format_float(&self.value, self.digits))?;
        st.serialize_field("partial_product", &format_float(&self.partial_product, self.digits))?;
        st.serialize_field("cutoff", &self.cutoff)?;
        st.serialize_field("local_degree", &self.local_degree)?;
        st.serialize_field("tail_estimate", &format_float(&self.tail_estimate, 6))?;
        st.serialize_field("alpha", &self.alpha)?;
        st.end()
    }
}

fn compositions(d: u32, r: usize, cur: &mut Vec<u32>, visit: &mut dyn FnMut(&[u32])) {
    if cur.len() + 1 == r {
        cur.push(d);
        visit(cur);
        cur.pop();
        return;
    }
    for a in 0..=d {
        cur.push(a);
        compositions(d - a, r, cur, visit);
        cur.pop();
    }
}

/// Local sum of `f` at `p`, enumerated by shells of equal total degree.
pub fn local_sum(local: &LocalFactor, z: &[Float], p: u64, cfg: &EulerConfig) -> Result<LocalSum> {
    let prec = cfg.prec();
    let r = z.len();
    let d_max = cfg.degree;
    let powers: Vec<Vec<Float>> = z
        .iter()
        .map(|zi| {
            let x = Float::with_val(prec, p).pow(-zi.clone());
            let mut row = vec![Float::with_val(prec, 1)];
            for k in 1..=d_max as usize {
                let next = Float::with_val(prec, &row[k - 1] * &x);
                row.push(next);
            }
            row
        })
        .collect();
    let mut sum = Float::with_val(prec, 0);
    let mut mags: Vec<f64> = Vec::with_capacity(d_max as usize + 1);
    let mut quiet = 0;
    let mut cur = Vec::with_capacity(r);
    for d in 0..=d_max {
        let mut shell = Float::with_val(prec, 0);
        let mut mag = Float::with_val(prec, 0);
        compositions(d, r, &mut cur, &mut |e| {
            let c = local.value(p, e);
            if c.is_zero() {
                return;
            }
            let mut t = to_float(&c, prec);
            for (i, &k) in e.iter().enumerate() {
                t *= &powers[i][k as usize];
            }
            mag += Float::with_val(prec, t.abs_ref());
            shell += t;
        });
        sum += &shell;
        let m = mag.to_f64();
        mags.push(m);
        if d > 0 && m <= cfg.stop_ratio * sum.to_f64().abs() {
            quiet += 1;
            if quiet >= 3 {
                return Ok(LocalSum { value: sum, truncation: 0.0, degree: d });
            }
        } else {
            quiet = 0;
        }
    }
    let total = sum.to_f64().abs();
    let last = mags[d_max as usize];
    let mid = mags[d_max as usize / 2];
    if last > cfg.stop_ratio * total && last >= mid {
        return Err(Error::Divergent(format!("local sum at p = {p} is not decreasing up to degree {d_max}")));
    }
    let span = (d_max - d_max / 2).max(1) as f64;
    let rate = if mid > 0.0 { (last / mid).powf(1.0 / span) } else { 0.5 };
    let rest = if rate < 1.0 { last * rate / (1.0 - rate) } else { last * d_max as f64 };
    let truncation = if total > 0.0 { rest / total } else { rest };
    Ok(LocalSum { value: sum, truncation, degree: d_max })
}

/// Product over `p <= P` of caller-supplied local factors, with the fitted tail.
pub fn euler_product_with<F>(local: F, cfg: &EulerConfig) -> Result<EulerProductResult>
where
    F: Fn(u64) -> Result<LocalSum> + Sync,
{
    let prec = cfg.prec();
    let primes = primes_up_to(cfg.primes);
    let blocks: Vec<Result<(Float, f64, u32)>> = primes
        .par_chunks(cfg.block.max(1))
        .map(|chunk| {
            let mut prod = Float::with_val(prec, 1);
            let mut trunc = 0.0;
            let mut deg = 0;
            for &p in chunk {
                let l = local(p)?;
                prod *= &l.value;
                trunc += l.truncation;
                deg = deg.max(l.degree);
            }
            Ok((prod, trunc, deg))
        })
        .collect();
    let mut partial = Float::with_val(prec, 1);
    let mut trunc = 0.0;
    let mut degree = 0;
    for b in blocks {
        let (p, t, d) = b?;
        partial *= p;
        trunc += t;
        degree = degree.max(d);
    }
    let fit = fit_tail(&local, &primes, prec)?;
    let unknown_tail = || Float::with_val(prec, partial.abs_ref());
    let (value, tail_estimate, alpha) = match fit {
        TailFit::Exact => (partial.clone(), Float::with_val(prec, 0), None),
        TailFit::TooFewPrimes => (partial.clone(), unknown_tail(), None),
        TailFit::Model { alpha, c, d } => {
            if alpha <= 1.0 + 1e-9 {
                if c < 0.0 {
                    // log-tail diverges to -infinity: the product tends to 0
                    (Float::with_val(prec, 0), unknown_tail(), Some(alpha))
                } else {
                    return Err(Error::Divergent(format!("local factors decay like 1 + {c:.3}/p^{alpha:.3}")));
                }
            } else {
                let a = Float::with_val(prec, alpha);
                let t_a = prime_zeta(&a)? - prime_power_sum(&primes, &a);
                let a1 = Float::with_val(prec, alpha + 1.0);
                let t_a1 = prime_zeta(&a1)? - prime_power_sum(&primes, &a1);
                let delta = Float::with_val(prec, &t_a * c) + Float::with_val(prec, &t_a1 * d);
                let value = Float::with_val(prec, &partial * delta.exp());
                let bound = Float::with_val(prec, &t_a * (2.0 * c.abs()));
                let tail = Float::with_val(prec, value.abs_ref()) * (bound + trunc);
                (value, tail, Some(alpha))
            }
        }
    };
    Ok(EulerProductResult { value, partial_product: partial, cutoff: cfg.primes, local_degree: degree, tail_estimate, alpha, digits: cfg.digits })
}

enum TailFit {
    Exact,
    TooFewPrimes,
    Model { alpha: f64, c: f64, d: f64 },
}

fn largest_at_most(primes: &[u64], x: u64) -> Option<u64> {
    let i = primes.partition_point(|&p| p <= x);
    (i > 0).then(|| primes[i - 1])
}

/// Fits `log L_p ~ c p^{-alpha} + d p^{-alpha-1}` at three primes near `P/4, P/2, P`.
fn fit_tail<F>(local: &F, primes: &[u64], prec: u32) -> Result<TailFit>
where
    F: Fn(u64) -> Result<LocalSum> + Sync,
{
    let Some(&q3) = primes.last() else { return Ok(TailFit::TooFewPrimes) };
    let q1 = largest_at_most(primes, q3 / 4);
    let q2 = largest_at_most(primes, q3 / 2);
    let (Some(q1), Some(q2)) = (q1, q2) else { return Ok(TailFit::TooFewPrimes) };
    if !(q1 < q2 && q2 < q3) {
        return Ok(TailFit::TooFewPrimes);
    }
    let ell = |q: u64| -> Result<f64> {
        let v = local(q)?.value;
        Ok(Float::with_val(prec, v.ln()).to_f64())
    };
    let (l1, l2, l3) = (ell(q1)?, ell(q2)?, ell(q3)?);
    let negligible = 2f64.powi(-(prec as i32) + 16);
    if l3.abs() < negligible && l1.abs() < negligible {
        return Ok(TailFit::Exact);
    }
    let raw = (l1.abs() / l3.abs()).ln() / (q3 as f64 / q1 as f64).ln();
    let alpha = if (raw - raw.round()).abs() < 1e-2 { raw.round() } else { raw };
    let u = |l: f64, q: u64| l * (q as f64).powf(alpha);
    let (u2, u3) = (u(l2, q2), u(l3, q3));
    let d = (u2 - u3) / (1.0 / q2 as f64 - 1.0 / q3 as f64);
    let c = u3 - d / q3 as f64;
    Ok(TailFit::Model { alpha, c, d })
}

/// `D(f; z)` as an Euler product; `f` must be multiplicative and `z` real.
pub fn euler_product(f: &ArithFn, z: &[f64], cfg: &EulerConfig) -> Result<EulerProductResult> {
    if !f.class().is_multiplicative() {
        return Err(Error::NotMultiplicative(f.name().to_string()));
    }
    if z.len() != f.arity() {
        return Err(Error::ArityMismatch { expected: f.arity(), found: z.len() });
    }
    let lf = f.local_factor()?;
    let prec = cfg.prec();
    let zf: Vec<Float> = z.iter().map(|&x| Float::with_val(prec, x)).collect();
    euler_product_with(|p| local_sum(&lf, &zf, p, cfg), cfg)
}

/// `euler_product` with prime cutoff `P` and local degree `D`.
pub fn euler_product_eval(f: &ArithFn, z: &[f64], primes: u64, degree: u32) -> Result<EulerProductResult> {
    euler_product(f, z, &EulerConfig { primes, degree, ..EulerConfig::default() })
}

/// Direct sum of `f(n)/(n_1^z_1 .. n_r^z_r)` over `[1,N]^r`.
pub fn dirichlet_partial_sum(f: &ArithFn, z: &[f64], n: u64, digits: u32) -> Result<Float> {
    if z.len() != f.arity() {
        return Err(Error::ArityMismatch { expected: f.arity(), found: z.len() });
    }
    if n == 0 {
        return Err(Error::NonPositive("N".into()));
    }
    let prec = bits_for_digits(digits);
    let r = z.len();
    let weights: Vec<Vec<Float>> = z
        .iter()
        .map(|&zi| (1..=n).map(|k| Float::with_val(prec, k).pow(-Float::with_val(prec, zi))).collect())
        .collect();
    let rows: Vec<Float> = (1..=n)
        .into_par_iter()
        .map(|first| {
            let mut acc = Float::with_val(prec, 0);
            let mut t = vec![1u64; r];
            t[0] = first;
            loop {
                let v = f.value(&t);
                if !v.is_zero() {
                    let mut term = to_float(&v, prec);
                    for (i, &k) in t.iter().enumerate() {
                        term *= &weights[i][k as usize - 1];
                    }
                    acc += term;
                }
                let mut i = r;
                loop {
                    if i == 1 {
                        return acc;
                    }
                    i -= 1;
                    if t[i] < n {
                        t[i] += 1;
                        break;
                    }
                    t[i] = 1;
                }
            }
        })
        .collect();
    Ok(rows.into_iter().fold(Float::with_val(prec, 0), |a, b| a + b))
}
