//! Functions of several variables: gcd, lcm, rho, sigma, subgroup counts, E, A.
//!
//! Each comes with a definitional evaluator, a divisor-sum representation where
//! one is known, and a local factor built from exponent data.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, Zero};

use crate::arith::{ArithFn, Class, LocalFactor};
use crate::catalog::classical::{mu, phi, ramanujan_local, ramanujan_sum, tau};
use crate::numbers::{big, factor, for_each_divisor_tuple, gcud, rat, Rational};

fn pow_big(p: u64, e: u32) -> BigInt {
    BigInt::from(p).pow(e)
}

fn gcd_all(t: &[u64]) -> u64 {
    t.iter().fold(0u64, |a, &b| a.gcd(&b))
}

fn lcm_all(t: &[u64]) -> u64 {
    t.iter().fold(1u64, |a, &b| a.lcm(&b))
}

pub fn gcd_fn(r: usize) -> ArithFn {
    ArithFn::new("gcd", r, Class::Multiplicative, |t| rat(gcd_all(t) as i64))
        .with_local(LocalFactor::new(r, |p, nu| big(pow_big(p, *nu.iter().min().unwrap()))))
}

pub fn lcm_fn(r: usize) -> ArithFn {
    ArithFn::new("lcm", r, Class::Multiplicative, |t| big(t.iter().fold(BigInt::one(), |a, &b| a.lcm(&BigInt::from(b)))))
        .with_local(LocalFactor::new(r, |p, nu| big(pow_big(p, *nu.iter().max().unwrap()))))
}

/// Greatest common unitary divisor as a function of r variables.
pub fn gcud_fn(r: usize) -> ArithFn {
    ArithFn::new("gcud", r, Class::Multiplicative, |t| rat(gcud(t).expect("positive tuple") as i64)).with_local(
        LocalFactor::new(r, |p, nu| {
            let e = nu[0];
            if nu.iter().all(|&x| x == e) { big(pow_big(p, e)) } else { Rational::one() }
        }),
    )
}

pub fn prod_fn(r: usize) -> ArithFn {
    ArithFn::new("prod", r, Class::Completely, |t| big(t.iter().map(|&x| BigInt::from(x)).product::<BigInt>()))
        .with_local(LocalFactor::new(r, |p, nu| big(pow_big(p, nu.iter().sum()))))
}

/// The constant function `1_r`.
pub fn one_fn(r: usize) -> ArithFn {
    ArithFn::new("one", r, Class::Completely, |_| rat(1)).with_local(LocalFactor::new(r, |_, _| rat(1)))
}

/// `delta_r`, the unit of every convolution.
pub fn delta_fn(r: usize) -> ArithFn {
    ArithFn::new("delta", r, Class::Completely, |t| rat(t.iter().all(|&x| x == 1) as i64))
        .with_local(LocalFactor::new(r, |_, _| rat(0)))
}

/// `xi_r(n) = xi(n_1) ... xi(n_r)`
pub fn xi_fn(r: usize) -> ArithFn {
    use crate::catalog::classical::xi;
    ArithFn::new("xi", r, Class::Firmly, |t| big(t.iter().map(|&x| xi(x)).product::<BigInt>())).with_local(
        LocalFactor::new(r, |_, nu| big(nu.iter().map(|&e| crate::numbers::factorial(e as u64)).product::<BigInt>())),
    )
}

/// 1 when the components are pairwise coprime.
pub fn rho_definitional(t: &[u64]) -> Rational {
    for i in 0..t.len() {
        for j in i + 1..t.len() {
            if t[i].gcd(&t[j]) != 1 {
                return Rational::zero();
            }
        }
    }
    Rational::one()
}

/// `sum tau(d_1...d_r) mu(n_1/d_1)...mu(n_r/d_r)` over divisor tuples.
pub fn rho_representation(t: &[u64]) -> Rational {
    let mut total = 0i64;
    for_each_divisor_tuple(t, |d| {
        let sign: i64 = d.iter().zip(t).map(|(&di, &ni)| mu(ni / di)).product();
        if sign != 0 {
            total += sign * tau_of_product(d) as i64;
        }
    });
    rat(total)
}

/// `tau(d_1 ... d_r)` without forming the product.
pub fn tau_of_product(d: &[u64]) -> u64 {
    let mut exps: Vec<(u64, u32)> = Vec::new();
    for &x in d {
        for (p, e) in factor(x).factors {
            match exps.iter_mut().find(|(q, _)| *q == p) {
                Some((_, f)) => *f += e,
                None => exps.push((p, e)),
            }
        }
    }
    exps.iter().map(|&(_, e)| e as u64 + 1).product()
}

pub fn rho_fn(r: usize) -> ArithFn {
    ArithFn::new("rho", r, Class::Multiplicative, rho_definitional)
        .with_local(LocalFactor::new(r, |_, nu| rat((nu.iter().filter(|&&e| e > 0).count() <= 1) as i64)))
}

/// 1 when the components are pairwise unitary coprime.
pub fn rho_unitary_definitional(t: &[u64]) -> Rational {
    for i in 0..t.len() {
        for j in i + 1..t.len() {
            if gcud(&[t[i], t[j]]).expect("positive") != 1 {
                return Rational::zero();
            }
        }
    }
    Rational::one()
}

pub fn rho_unitary_fn(r: usize) -> ArithFn {
    ArithFn::new("rho_unitary", r, Class::Multiplicative, rho_unitary_definitional).with_local(LocalFactor::new(
        r,
        |_, nu| {
            let mut pos: Vec<u32> = nu.iter().copied().filter(|&e| e > 0).collect();
            pos.sort_unstable();
            rat(pos.windows(2).all(|w| w[0] != w[1]) as i64)
        },
    ))
}

/// `sigma(n_1..n_r) = sum gcd(d_1..d_r)` over divisor tuples.
pub fn sigma_r_definitional(t: &[u64]) -> Rational {
    let mut total = BigInt::zero();
    for_each_divisor_tuple(t, |d| total += gcd_all(d));
    big(total)
}

/// `sum_{d | gcd} phi(d) tau(n_1/d) ... tau(n_r/d)`
pub fn sigma_r_representation(t: &[u64]) -> Rational {
    let g = gcd_all(t);
    let total: BigInt = factor(g)
        .divisors()
        .into_iter()
        .map(|d| BigInt::from(phi(d)) * t.iter().map(|&n| BigInt::from(tau(n / d))).product::<BigInt>())
        .sum();
    big(total)
}

fn sigma_r_local(p: u64, nu: &[u32]) -> Rational {
    let m = *nu.iter().min().unwrap();
    let total: BigInt = (0..=m)
        .map(|j| {
            let ph = if j == 0 { BigInt::one() } else { pow_big(p, j) - pow_big(p, j - 1) };
            ph * nu.iter().map(|&e| BigInt::from(e - j + 1)).product::<BigInt>()
        })
        .sum();
    big(total)
}

pub fn sigma_r_fn(r: usize) -> ArithFn {
    ArithFn::new("sigma_r", r, Class::Multiplicative, sigma_r_definitional).with_local(LocalFactor::new(r, sigma_r_local))
}

/// Number of subgroups of `Z_m x Z_n`, `sum_{a | m, b | n} gcd(a, b)`.
pub fn s_fn() -> ArithFn {
    ArithFn::new("s", 2, Class::Multiplicative, sigma_r_definitional).with_local(LocalFactor::new(2, sigma_r_local))
}

/// Number of cyclic subgroups of `Z_{n_1} x ... x Z_{n_r}`, counting elements by
/// order: a cyclic subgroup of order `d` has `phi(d)` generators.
pub fn cyclic_definitional(t: &[u64]) -> Rational {
    let l = lcm_all(t);
    let mut total = Rational::zero();
    for d in factor(l).divisors() {
        // elements of order exactly d
        let count: BigInt = factor(d)
            .divisors()
            .into_iter()
            .map(|e| BigInt::from(mu(d / e)) * t.iter().map(|&n| BigInt::from(e.gcd(&n))).product::<BigInt>())
            .sum();
        total += Rational::new(count, BigInt::from(phi(d)));
    }
    total
}

/// `sum phi(d_1)...phi(d_r) / phi(lcm(d_1..d_r))`
pub fn cyclic_representation(t: &[u64]) -> Rational {
    let mut total = Rational::zero();
    for_each_divisor_tuple(t, |d| {
        let num: BigInt = d.iter().map(|&x| BigInt::from(phi(x))).product();
        total += Rational::new(num, BigInt::from(phi(lcm_all(d))));
    });
    total
}

/// `sum_{m <= max v} (prod_i p^min(m,v_i) - prod_i p^min(m-1,v_i)) / w(p^m)`,
/// grouping exponent tuples by their maximum; `weight` is `phi` for c and `id` for A.
fn grouped_by_max(p: u64, nu: &[u32], weight: impl Fn(u32) -> BigInt) -> Rational {
    let top = *nu.iter().max().unwrap();
    let level = |m: u32| -> BigInt { nu.iter().map(|&e| pow_big(p, m.min(e))).product() };
    let mut total = Rational::one();
    for m in 1..=top {
        total += Rational::new(level(m) - level(m - 1), weight(m));
    }
    total
}

pub fn cyclic_fn(r: usize) -> ArithFn {
    ArithFn::new("c", r, Class::Multiplicative, cyclic_definitional)
        .with_local(LocalFactor::new(r, |p, nu| grouped_by_max(p, nu, |m| pow_big(p, m) - pow_big(p, m - 1))))
}

/// `E(n_1..n_r) = (1/n) sum_{j=1}^{n} c_{n_1}(j) ... c_{n_r}(j)`, `n = lcm`.
pub fn e_definitional(t: &[u64]) -> Rational {
    let n = lcm_all(t);
    let total: BigInt = (1..=n)
        .map(|j| t.iter().map(|&ni| BigInt::from(ramanujan_sum(ni, j))).product::<BigInt>())
        .sum();
    Rational::new(total, BigInt::from(n))
}

/// `sum d_1 mu(n_1/d_1) ... d_r mu(n_r/d_r) / lcm(d_1..d_r)`
pub fn e_representation(t: &[u64]) -> Rational {
    let mut total = Rational::zero();
    for_each_divisor_tuple(t, |d| {
        let sign: i64 = d.iter().zip(t).map(|(&di, &ni)| mu(ni / di)).product();
        if sign != 0 {
            let num: BigInt = d.iter().map(|&x| BigInt::from(x)).product::<BigInt>() * sign;
            total += Rational::new(num, BigInt::from(lcm_all(d)));
        }
    });
    total
}

fn e_local(p: u64, nu: &[u32]) -> Rational {
    // only j_i in {v_i, v_i - 1} survive the Möbius factor
    let r = nu.len();
    let mut total = Rational::zero();
    for mask in 0u32..(1 << r) {
        let mut ok = true;
        let mut sign = 1i64;
        let mut js = Vec::with_capacity(r);
        for (i, &e) in nu.iter().enumerate() {
            if mask >> i & 1 == 1 {
                if e == 0 {
                    ok = false;
                    break;
                }
                sign = -sign;
                js.push(e - 1);
            } else {
                js.push(e);
            }
        }
        if ok {
            let sum: u32 = js.iter().sum();
            let max = *js.iter().max().unwrap();
            total += Rational::new(pow_big(p, sum) * sign, pow_big(p, max));
        }
    }
    total
}

pub fn e_fn(r: usize) -> ArithFn {
    ArithFn::new("E", r, Class::Multiplicative, e_definitional).with_local(LocalFactor::new(r, e_local))
}

/// `A(n_1..n_r) = (1/n) sum_{k=1}^{n} gcd(k,n_1) ... gcd(k,n_r)`, `n = lcm`.
pub fn a_definitional(t: &[u64]) -> Rational {
    let n = lcm_all(t);
    let total: BigInt = (1..=n).map(|k| t.iter().map(|&ni| BigInt::from(k.gcd(&ni))).product::<BigInt>()).sum();
    Rational::new(total, BigInt::from(n))
}

/// `sum phi(d_1)...phi(d_r) / lcm(d_1..d_r)`
pub fn a_representation(t: &[u64]) -> Rational {
    let mut total = Rational::zero();
    for_each_divisor_tuple(t, |d| {
        let num: BigInt = d.iter().map(|&x| BigInt::from(phi(x))).product();
        total += Rational::new(num, BigInt::from(lcm_all(d)));
    });
    total
}

pub fn a_fn(r: usize) -> ArithFn {
    ArithFn::new("A", r, Class::Multiplicative, a_definitional)
        .with_local(LocalFactor::new(r, |p, nu| grouped_by_max(p, nu, |m| pow_big(p, m))))
}

/// `(k, n) -> c_n(k)` from the closed evaluation `mu(n/g) phi(n) / phi(n/g)`, `g = gcd(k,n)`.
pub fn ramanujan_definitional(t: &[u64]) -> Rational {
    let (k, n) = (t[0], t[1]);
    let g = k.gcd(&n);
    let m = n / g;
    Rational::new(BigInt::from(mu(m)) * BigInt::from(phi(n)), BigInt::from(phi(m)))
}

/// `(k, n) -> sum_{d | gcd(k,n)} d mu(n/d)`
pub fn ramanujan_representation(t: &[u64]) -> Rational {
    rat(ramanujan_sum(t[1], t[0]))
}

pub fn ramanujan_fn() -> ArithFn {
    ArithFn::new("ramanujan", 2, Class::Multiplicative, ramanujan_definitional)
        .with_local(LocalFactor::new(2, |p, nu| ramanujan_local(p, nu[0], nu[1])))
}
