//! One-variable classical functions: integer kernels plus `ArithFn` wrappers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, Zero};

use crate::arith::{ArithFn, Class, LocalFactor};
use crate::error::{Error, Result};
use crate::numbers::{big, binomial, factor, factorial, rat, Rational};

pub fn phi(n: u64) -> u64 {
    factor(n).factors.iter().fold(n, |acc, &(p, _)| acc / p * (p - 1))
}

pub fn psi(n: u64) -> u64 {
    factor(n).factors.iter().fold(n, |acc, &(p, _)| acc / p * (p + 1))
}

pub fn mu(n: u64) -> i64 {
    let f = factor(n);
    if f.is_squarefree() {
        if f.omega().is_multiple_of(2) { 1 } else { -1 }
    } else {
        0
    }
}

/// `(-1)^omega(n)`, the unitary analogue of the Möbius function.
pub fn mu_unitary(n: u64) -> i64 {
    if factor(n).omega().is_multiple_of(2) { 1 } else { -1 }
}

pub fn liouville(n: u64) -> i64 {
    if factor(n).big_omega().is_multiple_of(2) { 1 } else { -1 }
}

pub fn tau(n: u64) -> u64 {
    factor(n).factors.iter().map(|&(_, e)| e as u64 + 1).product()
}

/// Piltz divisor function: ordered factorizations into `k` factors.
pub fn tau_k(k: u32, n: u64) -> BigInt {
    factor(n).factors.iter().map(|&(_, e)| binomial(e as u64 + k as u64 - 1, k as u64 - 1)).product()
}

pub fn sigma(n: u64) -> u64 {
    factor(n).factors.iter().map(|&(p, e)| (p.pow(e + 1) - 1) / (p - 1)).product()
}

fn int_pow(p: u64, e: i64) -> Rational {
    let base = big(p);
    if e >= 0 {
        Pow::pow(base, e as u64)
    } else {
        Pow::pow(base, (-e) as u64).recip()
    }
}

pub fn sigma_k(k: i64, n: u64) -> Rational {
    factor(n).factors.iter().map(|&(p, e)| sigma_k_local(k, p, e)).product()
}

fn sigma_k_local(k: i64, p: u64, e: u32) -> Rational {
    (0..=e as i64).map(|j| int_pow(p, j * k)).sum()
}

pub fn jordan(k: i64, n: u64) -> Rational {
    factor(n).factors.iter().map(|&(p, e)| jordan_local(k, p, e)).product()
}

fn jordan_local(k: i64, p: u64, e: u32) -> Rational {
    if e == 0 {
        return Rational::one();
    }
    int_pow(p, e as i64 * k) * (Rational::one() - int_pow(p, -k))
}

pub fn omega(n: u64) -> u32 {
    factor(n).omega()
}

pub fn big_omega(n: u64) -> u32 {
    factor(n).big_omega()
}

/// `prod_p v_p(n)!`
pub fn xi(n: u64) -> BigInt {
    factor(n).factors.iter().map(|&(_, e)| factorial(e as u64)).product()
}

/// Alternating sum of divisors, `(id * lambda)(n)`.
pub fn beta(n: u64) -> i64 {
    factor(n)
        .divisors()
        .into_iter()
        .map(|d| d as i64 * liouville(n / d))
        .sum()
}

pub fn is_squarefree(n: u64) -> bool {
    factor(n).is_squarefree()
}

pub fn is_squarefull(n: u64) -> bool {
    factor(n).is_squarefull()
}

/// `c_n(k) = sum_{d | gcd(k,n)} d mu(n/d)`
pub fn ramanujan_sum(n: u64, k: u64) -> i64 {
    let g = n.gcd(&k);
    factor(g).divisors().into_iter().map(|d| d as i64 * mu(n / d)).sum()
}

/// `c_{p^b}(p^a)` from Hölder's evaluation.
pub fn ramanujan_local(p: u64, a: u32, b: u32) -> Rational {
    if b == 0 {
        Rational::one()
    } else if a >= b {
        big(BigInt::from(p).pow(b) - BigInt::from(p).pow(b - 1))
    } else if a + 1 == b {
        -big(BigInt::from(p).pow(a))
    } else {
        Rational::zero()
    }
}

fn one_var(
    name: &str,
    class: Class,
    def: impl Fn(u64) -> Rational + Send + Sync + 'static,
    local: Option<Box<dyn Fn(u64, u32) -> Rational + Send + Sync>>,
) -> ArithFn {
    let f = ArithFn::new(name, 1, class, move |t| def(t[0]));
    match local {
        Some(l) => f.with_local(LocalFactor::new(1, move |p, nu| l(p, nu[0]))),
        None => f,
    }
}

/// Names accepted by [`classical`].
pub const CLASSICAL_NAMES: &[&str] = &[
    "delta", "one", "id", "power", "phi", "jordan", "psi", "mu", "mu_unitary", "tau", "sigma", "omega",
    "bigomega", "lambda", "xi", "beta", "mu2", "squarefull",
];

/// One-variable catalog function; `k` parametrizes `power`, `jordan`/`phi`,
/// `tau` (Piltz order) and `sigma`.
pub fn classical(name: &str, k: Option<i64>) -> Result<ArithFn> {
    let f = match name {
        "delta" => one_var("delta", Class::Completely, |n| rat((n == 1) as i64), Some(Box::new(|_, _| rat(0)))),
        "one" => one_var("one", Class::Completely, |_| rat(1), Some(Box::new(|_, _| rat(1)))),
        "id" | "power" => {
            let k = k.unwrap_or(1);
            let label = if name == "id" && k == 1 { "id".to_string() } else { format!("power({k})") };
            one_var(&label, Class::Completely, move |n| int_pow(n, k), Some(Box::new(move |p, e| int_pow(p, e as i64 * k))))
        }
        "phi" | "jordan" => {
            let k = k.unwrap_or(1);
            let label = if k == 1 { "phi".to_string() } else { format!("jordan({k})") };
            one_var(&label, Class::Multiplicative, move |n| jordan(k, n), Some(Box::new(move |p, e| jordan_local(k, p, e))))
        }
        "psi" => one_var(
            "psi",
            Class::Multiplicative,
            |n| rat(psi(n) as i64),
            Some(Box::new(|p, e| big(BigInt::from(p).pow(e) + BigInt::from(p).pow(e - 1)))),
        ),
        "mu" => one_var("mu", Class::Multiplicative, |n| rat(mu(n)), Some(Box::new(|_, e| rat(if e == 1 { -1 } else { 0 })))),
        "mu_unitary" => one_var("mu_unitary", Class::Multiplicative, |n| rat(mu_unitary(n)), Some(Box::new(|_, _| rat(-1)))),
        "tau" => {
            let k = k.unwrap_or(2);
            if k < 1 {
                return Err(Error::InvalidArgument(format!("tau order must be >= 1, got {k}")));
            }
            let k = k as u32;
            let label = if k == 2 { "tau".to_string() } else { format!("tau({k})") };
            one_var(
                &label,
                Class::Multiplicative,
                move |n| big(piltz_by_divisors(k, n)),
                Some(Box::new(move |_, e| big(binomial(e as u64 + k as u64 - 1, k as u64 - 1)))),
            )
        }
        "sigma" => {
            let k = k.unwrap_or(1);
            let label = if k == 1 { "sigma".to_string() } else { format!("sigma({k})") };
            one_var(
                &label,
                Class::Multiplicative,
                move |n| factor(n).divisors().into_iter().map(|d| int_pow(d, k)).sum(),
                Some(Box::new(move |p, e| sigma_k_local(k, p, e))),
            )
        }
        "omega" => one_var("omega", Class::General, |n| rat(omega(n) as i64), None),
        "bigomega" => one_var("bigomega", Class::General, |n| rat(big_omega(n) as i64), None),
        "lambda" => one_var(
            "lambda",
            Class::Completely,
            |n| rat(liouville(n)),
            Some(Box::new(|_, e| rat(if e % 2 == 0 { 1 } else { -1 }))),
        ),
        "xi" => one_var("xi", Class::Multiplicative, |n| big(xi(n)), Some(Box::new(|_, e| big(factorial(e as u64))))),
        "beta" => one_var(
            "beta",
            Class::Multiplicative,
            |n| rat(beta(n)),
            Some(Box::new(|p, e| {
                (0..=e).map(|j| big(BigInt::from(p).pow(j)) * rat(if (e - j) % 2 == 0 { 1 } else { -1 })).sum()
            })),
        ),
        "mu2" => one_var("mu2", Class::Multiplicative, |n| rat(is_squarefree(n) as i64), Some(Box::new(|_, e| rat((e == 1) as i64)))),
        "squarefull" => {
            one_var("squarefull", Class::Multiplicative, |n| rat(is_squarefull(n) as i64), Some(Box::new(|_, e| rat((e >= 2) as i64))))
        }
        _ => return Err(Error::UnknownFunction(name.to_string())),
    };
    Ok(f)
}

/// `tau_k(n)` via `tau_k = 1 * tau_{k-1}`.
fn piltz_by_divisors(k: u32, n: u64) -> BigInt {
    if k == 1 {
        return BigInt::one();
    }
    factor(n).divisors().into_iter().map(|d| piltz_by_divisors(k - 1, d)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(classical("psi", None).unwrap().value(&[4]), rat(6));
        assert_eq!(classical("jordan", Some(2)).unwrap().value(&[12]), rat(96));
        assert_eq!(classical("beta", None).unwrap().value(&[6]), rat(2));
        assert_eq!(ramanujan_sum(1, 17), 1);
        assert_eq!(ramanujan_sum(4, 2), -2);
        assert_eq!(ramanujan_sum(6, 4), -1);
        assert!(classical("nope", None).is_err());
    }

    #[test]
    fn ramanujan_matches_cosine_sum() {
        for n in 1..=40u64 {
            for k in 1..=40u64 {
                let s: f64 = (1..=n)
                    .filter(|j| j.gcd(&n) == 1)
                    .map(|j| (2.0 * std::f64::consts::PI * (j * k) as f64 / n as f64).cos())
                    .sum();
                assert_eq!(s.round() as i64, ramanujan_sum(n, k), "c_{n}({k})");
            }
        }
    }

    #[test]
    fn beta_is_id_conv_lambda() {
        for n in 1..=500u64 {
            let direct: i64 = (1..=n).filter(|d| n % d == 0).map(|d| d as i64 * liouville(n / d)).sum();
            assert_eq!(beta(n), direct);
        }
    }

    #[test]
    fn local_factors_reconstruct() {
        for name in CLASSICAL_NAMES {
            let f = classical(name, None).unwrap();
            if !f.class().is_multiplicative() {
                continue;
            }
            for n in 1..=300u64 {
                let via_local = crate::arith::eval_multiplicative(f.local().unwrap(), &[n]).unwrap();
                assert_eq!(via_local, f.value(&[n]), "{name}({n})");
            }
        }
        for (name, k) in [("tau", 4), ("sigma", -2), ("sigma", 0), ("jordan", 3), ("power", -1)] {
            let f = classical(name, Some(k)).unwrap();
            for n in 1..=200u64 {
                assert_eq!(crate::arith::eval_multiplicative(f.local().unwrap(), &[n]).unwrap(), f.value(&[n]));
            }
        }
    }

    #[test]
    fn brute_force_one_variable() {
        for n in 1..=400u64 {
            let divs: Vec<u64> = (1..=n).filter(|d| n % d == 0).collect();
            assert_eq!(tau(n), divs.len() as u64);
            assert_eq!(sigma(n), divs.iter().sum::<u64>());
            assert_eq!(phi(n), (1..=n).filter(|k| k.gcd(&n) == 1).count() as u64);
            let sq = (2..=n).all(|d| n % (d * d) != 0);
            assert_eq!(is_squarefree(n), sq);
        }
    }
}
