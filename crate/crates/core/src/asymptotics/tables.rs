//! Exact partial sums next to their main terms.

use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rug::Float;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::numbers::{isqrt, smallest_prime_factors, Rational};
use crate::series::zeta::{bits_for_digits, euler_gamma, pi, zeta, zeta_derivative};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableTarget {
    /// `sum_{m,n <= x} gcd(m, n)`
    Gcd2,
    /// `sum_{n_i <= x} gcd(n_1..n_r)`, `r >= 3`
    GcdR(u32),
    /// `sum_{m,n <= x} lcm(m, n)`
    Lcm2,
    /// `sum_{n <= x} g_2(n)`
    G2,
    /// `sum_{n <= x} ell_2(n)/n`
    L2OverN,
    /// `sum_{m,n <= x} s(m, n)`
    S2,
    /// `sum_{m,n <= x} c(m, n)`
    C2,
}

pub const TARGET_NAMES: &[&str] = &["gcd2", "gcdr", "lcm2", "g2", "l2_over_n", "s2", "c2"];

impl TableTarget {
    pub fn parse(name: &str, r: u32) -> Result<TableTarget> {
        Ok(match name {
            "gcd2" => TableTarget::Gcd2,
            "gcdr" if r >= 3 => TableTarget::GcdR(r),
            "gcdr" => return Err(Error::InvalidArgument("gcdr needs r >= 3".into())),
            "lcm2" => TableTarget::Lcm2,
            "g2" => TableTarget::G2,
            "l2_over_n" => TableTarget::L2OverN,
            "s2" => TableTarget::S2,
            "c2" => TableTarget::C2,
            _ => return Err(Error::UnknownTarget(name.to_string())),
        })
    }

    /// Whether the main term keeps only the leading coefficient.
    pub fn leading_only(self) -> bool {
        matches!(self, TableTarget::G2 | TableTarget::S2 | TableTarget::C2)
    }
}

impl FromStr for TableTarget {
    type Err = Error;
    fn from_str(s: &str) -> Result<TableTarget> {
        TableTarget::parse(s, 3)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PartialSumRow {
    pub x: u64,
    #[serde(serialize_with = "ser_rational")]
    pub exact: Rational,
    pub main_term: f64,
    pub rel_dev: f64,
}

impl PartialSumRow {
    pub fn ratio(&self) -> f64 {
        1.0 + self.rel_dev
    }
}

fn ser_rational<S: Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&q.to_string())
}

/// Arithmetic tables up to `n` from one smallest-prime-factor sieve.
struct Sieve {
    phi: Vec<u64>,
    mu: Vec<i64>,
    /// `D(y) = sum_{k <= y} tau(k)`
    tau_prefix: Vec<u64>,
}

impl Sieve {
    fn new(n: u64) -> Sieve {
        let n = n as usize;
        let spf = smallest_prime_factors(n.max(2));
        let mut phi = vec![0u64; n + 1];
        let mut mu = vec![0i64; n + 1];
        let mut tau = vec![0u64; n + 1];
        if n >= 1 {
            phi[1] = 1;
            mu[1] = 1;
            tau[1] = 1;
        }
        for k in 2..=n {
            let p = spf[k] as usize;
            let mut m = k / p;
            let mut e = 1;
            while m.is_multiple_of(p) {
                m /= p;
                e += 1;
            }
            let pe = k / m;
            phi[k] = phi[m] * (pe - pe / p) as u64;
            mu[k] = if e == 1 { -mu[m] } else { 0 };
            tau[k] = tau[m] * (e + 1);
        }
        let mut tau_prefix = vec![0u64; n + 1];
        for k in 1..=n {
            tau_prefix[k] = tau_prefix[k - 1] + tau[k];
        }
        Sieve { phi, mu, tau_prefix }
    }

    /// `(mu * phi)(d)` for `d <= n`.
    fn mu_phi(&self) -> Vec<i64> {
        let n = self.phi.len() - 1;
        let mut h = vec![0i64; n + 1];
        for d in 1..=n {
            if self.mu[d] == 0 {
                continue;
            }
            for (k, m) in (d..=n).step_by(d).enumerate() {
                h[m] += self.mu[d] * self.phi[k + 1] as i64;
            }
        }
        h
    }
}

fn exact_sum(target: TableTarget, x: u64, sv: &Sieve) -> Rational {
    let int = |v: BigInt| Rational::from_integer(v);
    let d_of = |y: u64| BigInt::from(sv.tau_prefix[y as usize]);
    match target {
        TableTarget::Gcd2 | TableTarget::GcdR(_) => {
            let r = if let TableTarget::GcdR(r) = target { r } else { 2 };
            int((1..=x).map(|d| BigInt::from(sv.phi[d as usize]) * BigInt::from(x / d).pow(r)).sum())
        }
        TableTarget::Lcm2 => {
            // lcm = d a b over coprime (a, b): sum_d d sum_e mu(e) e^2 T(y/e)^2
            let tri = |z: u64| -> BigInt { BigInt::from(z) * BigInt::from(z + 1) / 2u32 };
            let coprime_ab = |y: u64| -> BigInt {
                (1..=y)
                    .filter(|&e| sv.mu[e as usize] != 0)
                    .map(|e| BigInt::from(sv.mu[e as usize] * (e * e) as i64) * tri(y / e).pow(2))
                    .sum()
            };
            int((1..=x).map(|d| BigInt::from(d) * coprime_ab(x / d)).sum())
        }
        TableTarget::G2 => int((1..=isqrt(x)).map(|d| BigInt::from(sv.phi[d as usize]) * d_of(x / (d * d))).sum()),
        TableTarget::L2OverN => {
            let mut acc = Rational::zero();
            for d in 1..=isqrt(x) {
                let y = x / (d * d);
                let c: BigInt = (1..=isqrt(y))
                    .filter(|&e| sv.mu[e as usize] != 0)
                    .map(|e| BigInt::from(sv.mu[e as usize]) * d_of(y / (e * e)))
                    .sum();
                acc += Rational::new(c, BigInt::from(d));
            }
            acc
        }
        TableTarget::S2 => int((1..=x).map(|d| BigInt::from(sv.phi[d as usize]) * d_of(x / d).pow(2)).sum()),
        TableTarget::C2 => {
            let h = sv.mu_phi();
            int((1..=x).map(|d| BigInt::from(h[d as usize]) * d_of(x / d).pow(2)).sum())
        }
    }
}

/// Constants of the main terms, evaluated once.
struct Constants {
    gamma: f64,
    pi: f64,
    z2: f64,
    z3: f64,
    dz2: f64,
    dz3: f64,
}

impl Constants {
    fn new() -> Result<Constants> {
        let prec = bits_for_digits(30);
        Ok(Constants {
            gamma: euler_gamma(prec).to_f64(),
            pi: pi(prec).to_f64(),
            z2: zeta(2.0, 30)?.to_f64(),
            z3: zeta(3.0, 30)?.to_f64(),
            dz2: zeta_derivative(2.0, 30)?.to_f64(),
            dz3: zeta_derivative(3.0, 30)?.to_f64(),
        })
    }
}

/// Coefficient of the top power of `log x`, with the power of `x` and of `log x`.
pub fn leading_coefficient(target: TableTarget) -> Result<(f64, i32, i32)> {
    let k = Constants::new()?;
    Ok(match target {
        TableTarget::Gcd2 => (1.0 / k.z2, 2, 1),
        TableTarget::GcdR(r) => (zeta(r as f64 - 1.0, 30)?.to_f64() / zeta(r as f64, 30)?.to_f64(), r as i32, 0),
        TableTarget::Lcm2 => (k.z3 / (4.0 * k.z2), 4, 0),
        TableTarget::G2 => (3.0 / (2.0 * k.pi * k.pi), 1, 2),
        TableTarget::L2OverN => (k.z3 / k.z2, 1, 1),
        TableTarget::S2 => (2.0 / (k.pi * k.pi), 2, 3),
        TableTarget::C2 => (12.0 / k.pi.powi(4), 2, 3),
    })
}

fn main_term(target: TableTarget, x: f64, k: &Constants) -> Result<f64> {
    let l = x.ln();
    Ok(match target {
        TableTarget::Gcd2 => x * x / k.z2 * (l + 2.0 * k.gamma - 0.5 - k.z2 / 2.0 - k.dz2 / k.z2),
        TableTarget::L2OverN => k.z3 / k.z2 * x * (l + 2.0 * k.gamma - 1.0 - 2.0 * k.dz2 / k.z2 + 2.0 * k.dz3 / k.z3),
        other => {
            let (c, xp, lp) = leading_coefficient(other)?;
            c * x.powi(xp) * l.powi(lp)
        }
    })
}

/// Rows for ascending `xs`.
pub fn partial_sum_table(target: TableTarget, xs: &[u64]) -> Result<Vec<PartialSumRow>> {
    if xs.is_empty() || xs.windows(2).any(|w| w[0] >= w[1]) || xs[0] == 0 {
        return Err(Error::InvalidArgument("xs must be positive and strictly ascending".into()));
    }
    let sv = Sieve::new(*xs.last().expect("nonempty"));
    let k = Constants::new()?;
    xs.iter()
        .map(|&x| {
            let exact = exact_sum(target, x, &sv);
            let main = main_term(target, x as f64, &k)?;
            let e = exact.to_f64().unwrap_or(f64::NAN);
            Ok(PartialSumRow { x, exact, main_term: main, rel_dev: e / main - 1.0 })
        })
        .collect()
}

/// CSV with header `x,exact,main_term,rel_dev`.
pub fn table_csv(rows: &[PartialSumRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::InvalidArgument(e.to_string());
    w.write_record(["x", "exact", "main_term", "rel_dev"]).map_err(io)?;
    for row in rows {
        w.write_record([row.x.to_string(), row.exact.to_string(), format!("{:.12e}", row.main_term), format!("{:.6e}", row.rel_dev)])
            .map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::InvalidArgument(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv is utf-8"))
}

/// Least-squares fit of `exact / x^a = c_k log^k x + .. + c_0`, top coefficient against the known one.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LeadingFit {
    pub fitted: f64,
    pub expected: f64,
    pub rel_err: f64,
    pub coefficients: Vec<f64>,
}

pub fn fit_leading_coefficient(target: TableTarget, xs: &[u64]) -> Result<LeadingFit> {
    let (expected, xp, lp) = leading_coefficient(target)?;
    let rows = partial_sum_table(target, xs)?;
    let cols = lp as usize + 1;
    if rows.len() < cols {
        return Err(Error::InvalidArgument(format!("need at least {cols} points")));
    }
    let a = DMatrix::from_fn(rows.len(), cols, |i, j| (rows[i].x as f64).ln().powi((lp as usize - j) as i32));
    let b = DVector::from_fn(rows.len(), |i, _| rows[i].exact.to_f64().unwrap_or(f64::NAN) / (rows[i].x as f64).powi(xp));
    let sol = a.svd(true, true).solve(&b, 1e-14).map_err(|e| Error::InvalidArgument(e.to_string()))?;
    let fitted = sol[0];
    Ok(LeadingFit { fitted, expected, rel_err: (fitted / expected - 1.0).abs(), coefficients: sol.iter().copied().collect() })
}

/// `exact` rendered with the working precision of the tables.
pub fn exact_as_float(row: &PartialSumRow) -> Float {
    crate::series::zeta::to_float(&row.exact, bits_for_digits(30))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::several::{s_fn, cyclic_fn};
    use crate::numbers::{gcd, lcm};

    fn brute2(x: u64, f: impl Fn(u64, u64) -> Rational) -> Rational {
        let mut acc = Rational::zero();
        for m in 1..=x {
            for n in 1..=x {
                acc += f(m, n);
            }
        }
        acc
    }

    #[test]
    fn exact_sums_match_brute_force() {
        let sv = Sieve::new(60);
        let r = |v: u64| Rational::from_integer(v.into());
        for x in [1, 2, 7, 10, 31, 60] {
            assert_eq!(exact_sum(TableTarget::Gcd2, x, &sv), brute2(x, |m, n| r(gcd(&[m, n]).unwrap())));
            assert_eq!(exact_sum(TableTarget::Lcm2, x, &sv), brute2(x, |m, n| r(lcm(&[m, n]).unwrap())));
            assert_eq!(exact_sum(TableTarget::S2, x, &sv), brute2(x, |m, n| s_fn().value(&[m, n])));
            assert_eq!(exact_sum(TableTarget::C2, x, &sv), brute2(x, |m, n| cyclic_fn(2).value(&[m, n])));
            let g2: Rational = (1..=x).map(|n| crate::convolute::named_convolute("g", 2).unwrap().value(&[n])).sum();
            assert_eq!(exact_sum(TableTarget::G2, x, &sv), g2);
            let l2: Rational = (1..=x)
                .map(|n| crate::convolute::named_convolute("ell", 2).unwrap().value(&[n]) / Rational::from_integer(n.into()))
                .sum();
            assert_eq!(exact_sum(TableTarget::L2OverN, x, &sv), l2);
        }
        let cube: u64 = (1..=12u64).flat_map(|a| (1..=12u64).flat_map(move |b| (1..=12u64).map(move |c| gcd(&[a, b, c]).unwrap()))).sum();
        assert_eq!(exact_sum(TableTarget::GcdR(3), 12, &sv), r(cube));
    }

    #[test]
    fn gcd2_at_ten() {
        // double loop: 189
        let rows = partial_sum_table(TableTarget::Gcd2, &[10]).unwrap();
        assert_eq!(rows[0].exact, Rational::from_integer(189.into()));
    }

    #[test]
    fn csv_header() {
        let rows = partial_sum_table(TableTarget::Lcm2, &[10, 20]).unwrap();
        let csv = table_csv(&rows).unwrap();
        assert!(csv.starts_with("x,exact,main_term,rel_dev\n10,"));
        assert_eq!(csv.lines().count(), 3);
    }

    #[test]
    fn targets_parse() {
        assert_eq!(TableTarget::parse("gcdr", 4).unwrap(), TableTarget::GcdR(4));
        assert!(TableTarget::parse("gcdr", 2).is_err());
        assert!(matches!(TableTarget::parse("zzz", 2), Err(Error::UnknownTarget(_))));
    }
}
