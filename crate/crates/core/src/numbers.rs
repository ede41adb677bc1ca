//! Integer substrate: factorization, primes, gcd/lcm/gcud, divisors, exact rationals.

use std::sync::{Arc, OnceLock};

use dashmap::DashMap;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use serde::Serialize;

use crate::error::{Error, Result};

/// Exact value domain for every function value in the algebraic path.
pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn big(n: impl Into<BigInt>) -> Rational {
    Rational::from_integer(n.into())
}

/// Smallest-prime-factor table covers factorizations below this bound.
const SPF_LIMIT: usize = 1 << 20;
/// Trial division bound before falling back to Pollard rho.
const TRIAL_LIMIT: u64 = 1_000_000;

fn spf_table() -> &'static [u32] {
    static TABLE: OnceLock<Vec<u32>> = OnceLock::new();
    TABLE.get_or_init(|| smallest_prime_factors(SPF_LIMIT - 1))
}

/// `spf[n]` is the least prime dividing `n` for `2 <= n <= limit`.
pub fn smallest_prime_factors(limit: usize) -> Vec<u32> {
    let mut spf = vec![0u32; limit + 1];
    for i in 2..=limit {
        if spf[i] == 0 {
            spf[i] = i as u32;
            let mut j = i * i;
            while j <= limit {
                if spf[j] == 0 {
                    spf[j] = i as u32;
                }
                j += i;
            }
        }
    }
    spf
}

/// A positive integer as its prime-power decomposition with increasing primes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Factorization {
    pub value: u64,
    pub factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn one() -> Self {
        Factorization { value: 1, factors: Vec::new() }
    }

    /// ω(n)
    pub fn omega(&self) -> u32 {
        self.factors.len() as u32
    }

    /// Ω(n)
    pub fn big_omega(&self) -> u32 {
        self.factors.iter().map(|&(_, e)| e).sum()
    }

    /// ν_p(n)
    pub fn exponent(&self, p: u64) -> u32 {
        self.factors.iter().find(|&&(q, _)| q == p).map_or(0, |&(_, e)| e)
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }

    pub fn is_squarefull(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e >= 2)
    }

    pub fn radical(&self) -> u64 {
        self.factors.iter().map(|&(p, _)| p).product()
    }

    pub fn divisors(&self) -> Vec<u64> {
        let mut out = vec![1u64];
        for &(p, e) in &self.factors {
            let len = out.len();
            let mut pk = 1u64;
            for _ in 0..e {
                pk *= p;
                for i in 0..len {
                    out.push(out[i] * pk);
                }
            }
        }
        out.sort_unstable();
        out
    }

    pub fn unitary_divisors(&self) -> Vec<u64> {
        let mut out = vec![1u64];
        for &(p, e) in &self.factors {
            let pe = p.pow(e);
            let len = out.len();
            for i in 0..len {
                out.push(out[i] * pe);
            }
        }
        out.sort_unstable();
        out
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin for 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if (n as usize) < SPF_LIMIT {
        return spf_table()[n as usize] as u64 == n;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if BASES.iter().any(|&b| n.is_multiple_of(b)) {
        return false;
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Brent's variant of Pollard rho; `n` must be odd and composite.
fn pollard_rho(n: u64) -> u64 {
    for c in 1.. {
        let f = |x: u64| ((mul_mod(x, x, n) as u128 + c as u128) % n as u128) as u64;
        let (mut y, mut r, mut q, m) = (2u64, 1u64, 1u64, 128u64);
        let (mut g, mut x, mut ys) = (1u64, 0u64, 0u64);
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..m.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = q.gcd(&n);
                k += m;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = x.abs_diff(ys).gcd(&n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
    }
    unreachable!()
}

fn split_large(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    let d = pollard_rho(n);
    split_large(d, out);
    split_large(n / d, out);
}

fn collect(mut primes: Vec<u64>, value: u64) -> Factorization {
    primes.sort_unstable();
    let mut factors: Vec<(u64, u32)> = Vec::new();
    for p in primes {
        match factors.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => factors.push((p, 1)),
        }
    }
    Factorization { value, factors }
}

/// Prime-power decomposition of `n >= 1`.
pub fn factorize(n: u64) -> Result<Factorization> {
    if n == 0 {
        return Err(Error::NonPositive("0".into()));
    }
    Ok(factor(n))
}

/// Infallible variant for internal callers that already validated `n >= 1`.
pub(crate) fn factor(n: u64) -> Factorization {
    debug_assert!(n >= 1);
    let value = n;
    let mut primes = Vec::new();
    let mut m = n;
    if (m as usize) < SPF_LIMIT {
        let spf = spf_table();
        while m > 1 {
            let p = spf[m as usize] as u64;
            primes.push(p);
            m /= p;
        }
        return collect(primes, value);
    }
    let mut d = 2u64;
    while d <= TRIAL_LIMIT && d * d <= m {
        while m.is_multiple_of(d) {
            primes.push(d);
            m /= d;
        }
        d += if d == 2 { 1 } else { 2 };
        if (m as usize) < SPF_LIMIT {
            let spf = spf_table();
            while m > 1 {
                let p = spf[m as usize] as u64;
                primes.push(p);
                m /= p;
            }
        }
    }
    if m > 1 {
        split_large(m, &mut primes);
    }
    collect(primes, value)
}

fn check_positive(n: u64) -> Result<()> {
    if n == 0 {
        Err(Error::NonPositive("0".into()))
    } else {
        Ok(())
    }
}

pub fn divisors(n: u64) -> Result<Vec<u64>> {
    check_positive(n)?;
    Ok(factor(n).divisors())
}

pub fn unitary_divisors(n: u64) -> Result<Vec<u64>> {
    check_positive(n)?;
    Ok(factor(n).unitary_divisors())
}

/// Memoized divisor lists; append-only, so readers never observe partial entries.
pub fn divisors_cached(n: u64) -> Arc<[u64]> {
    static CACHE: OnceLock<DashMap<u64, Arc<[u64]>>> = OnceLock::new();
    let cache = CACHE.get_or_init(DashMap::new);
    if let Some(d) = cache.get(&n) {
        return Arc::clone(&d);
    }
    let d: Arc<[u64]> = factor(n).divisors().into();
    cache.entry(n).or_insert(d).clone()
}

/// Calls `f` on every element of the cartesian product of `lists`, odometer order.
pub fn for_each_combination<L: AsRef<[u64]>>(lists: &[L], mut f: impl FnMut(&[u64])) {
    if lists.iter().any(|l| l.as_ref().is_empty()) {
        return;
    }
    let r = lists.len();
    let mut idx = vec![0usize; r];
    let mut cur: Vec<u64> = lists.iter().map(|l| l.as_ref()[0]).collect();
    loop {
        f(&cur);
        let mut i = r;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            idx[i] += 1;
            if idx[i] < lists[i].as_ref().len() {
                cur[i] = lists[i].as_ref()[idx[i]];
                break;
            }
            idx[i] = 0;
            cur[i] = lists[i].as_ref()[0];
        }
    }
}

/// Calls `f` on every divisor tuple `d` with `d_i | t_i`.
pub fn for_each_divisor_tuple(t: &[u64], f: impl FnMut(&[u64])) {
    let lists: Vec<Arc<[u64]>> = t.iter().map(|&n| divisors_cached(n)).collect();
    for_each_combination(&lists, f);
}

pub fn gcd(xs: &[u64]) -> Result<u64> {
    let (first, rest) = xs.split_first().ok_or(Error::EmptyList)?;
    for &x in xs {
        check_positive(x)?;
    }
    Ok(rest.iter().fold(*first, |g, &x| g.gcd(&x)))
}

pub fn lcm(xs: &[u64]) -> Result<u64> {
    let (first, rest) = xs.split_first().ok_or(Error::EmptyList)?;
    for &x in xs {
        check_positive(x)?;
    }
    rest.iter().try_fold(*first, |l, &x| {
        (l / l.gcd(&x)).checked_mul(x).ok_or_else(|| Error::Overflow("lcm".into()))
    })
}

/// Greatest common unitary divisor, by scanning the unitary divisors of the
/// first element for those that are unitary divisors of every element.
pub fn gcud(xs: &[u64]) -> Result<u64> {
    let (first, rest) = xs.split_first().ok_or(Error::EmptyList)?;
    for &x in xs {
        check_positive(x)?;
    }
    let best = unitary_divisors(*first)?
        .into_iter()
        .rev()
        .find(|&d| rest.iter().all(|&x| is_unitary_divisor(d, x)))
        .unwrap_or(1);
    Ok(best)
}

/// `d || n`
pub fn is_unitary_divisor(d: u64, n: u64) -> bool {
    n.is_multiple_of(d) && d.gcd(&(n / d)) == 1
}

/// All primes `<= limit`, ascending.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// `p^e` or `None` on overflow.
pub fn checked_pow(p: u64, e: u32) -> Option<u64> {
    p.checked_pow(e)
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::from(0);
    }
    let k = k.min(n - k);
    let mut acc = BigInt::from(1);
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::from(1), |a, k| a * BigInt::from(k))
}

/// `floor(sqrt(n))`
pub fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// `floor(n^(1/k))`
pub fn iroot(n: u64, k: u32) -> u64 {
    if k == 1 || n < 2 {
        return n;
    }
    let mut r = (n as f64).powf(1.0 / k as f64).round() as u64;
    while r > 0 && r.checked_pow(k).is_none_or(|v| v > n) {
        r -= 1;
    }
    while (r + 1).checked_pow(k).is_some_and(|v| v <= n) {
        r += 1;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_division(mut n: u64) -> Vec<(u64, u32)> {
        let mut out = Vec::new();
        let mut d = 2;
        while d * d <= n {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            if e > 0 {
                out.push((d, e));
            }
            d += 1;
        }
        if n > 1 {
            out.push((n, 1));
        }
        out
    }

    #[test]
    fn factorize_examples() {
        assert!(factorize(1).unwrap().factors.is_empty());
        assert_eq!(factorize(12).unwrap().factors, vec![(2, 2), (3, 1)]);
        assert_eq!(factorize(8128).unwrap().factors, trial_division(8128));
        assert_eq!(factorize(8128).unwrap().factors, vec![(2, 6), (127, 1)]);
        assert!(factorize(0).is_err());
    }

    #[test]
    fn factorize_reconstructs_up_to_1e5() {
        for n in 1..=100_000u64 {
            let f = factor(n);
            let prod: u64 = f.factors.iter().map(|&(p, e)| p.pow(e)).product();
            assert_eq!(prod, n);
            assert!(f.factors.windows(2).all(|w| w[0].0 < w[1].0));
            assert!(f.factors.iter().all(|&(p, e)| e >= 1 && is_prime(p)));
        }
    }

    #[test]
    fn factorize_beyond_sieve() {
        for n in [
            1_000_003u64 * 999_983,
            (1u64 << 61) - 1,
            600_851_475_143,
            999_999_000_001,
            4_611_686_014_132_420_609, // (2^31-1)^2
            2u64.pow(40) * 3,
        ] {
            let f = factor(n);
            let prod: u64 = f.factors.iter().map(|&(p, e)| p.pow(e)).product();
            assert_eq!(prod, n);
            assert!(f.factors.iter().all(|&(p, _)| is_prime(p)));
        }
        assert_eq!(factor(600_851_475_143).factors, trial_division(600_851_475_143));
    }

    #[test]
    fn miller_rabin_matches_sieve() {
        let sieve = primes_up_to(3_000_000);
        let mut it = sieve.iter().peekable();
        for n in 2_000_000u64..3_000_000 {
            let expected = it.peek().is_some_and(|&&p| p == n);
            while it.peek().is_some_and(|&&p| p <= n) {
                it.next();
            }
            if expected != is_prime(n) {
                panic!("is_prime({n})");
            }
        }
    }

    #[test]
    fn divisor_examples() {
        assert_eq!(divisors(6).unwrap(), vec![1, 2, 3, 6]);
        assert_eq!(unitary_divisors(12).unwrap(), vec![1, 3, 4, 12]);
        for (p, k) in [(2u64, 5u32), (3, 3), (101, 2)] {
            assert_eq!(unitary_divisors(p.pow(k)).unwrap(), vec![1, p.pow(k)]);
        }
    }

    #[test]
    fn unitary_divisors_subset_and_count() {
        for n in 1..=10_000u64 {
            let d = divisors(n).unwrap();
            let u = unitary_divisors(n).unwrap();
            let filtered: Vec<u64> = d.iter().copied().filter(|&x| is_unitary_divisor(x, n)).collect();
            assert_eq!(u, filtered);
            assert_eq!(u.len(), 1usize << factor(n).omega());
        }
    }

    #[test]
    fn gcd_lcm_gcud_examples() {
        assert_eq!(gcd(&[4, 6]).unwrap(), 2);
        assert_eq!(lcm(&[4, 6]).unwrap(), 12);
        assert_eq!(gcud(&[2, 4]).unwrap(), 1);
        assert_eq!(gcud(&[12, 3]).unwrap(), 3);
        assert_eq!(gcd(&[]), Err(Error::EmptyList));
        assert_eq!(gcud(&[]), Err(Error::EmptyList));
    }

    #[test]
    fn gcud_divides_gcd() {
        for a in 1..=500u64 {
            for b in 1..=500u64 {
                let g = gcd(&[a, b]).unwrap();
                assert_eq!(g % gcud(&[a, b]).unwrap(), 0);
            }
        }
    }

    #[test]
    fn gcud_exponent_pattern() {
        // d = prod p^e over primes whose exponent is equal and positive in every element
        for a in 1..=60u64 {
            for b in 1..=60u64 {
                for c in 1..=30u64 {
                    let (fa, fb, fc) = (factor(a), factor(b), factor(c));
                    let d: u64 = fa
                        .factors
                        .iter()
                        .filter(|&&(p, e)| fb.exponent(p) == e && fc.exponent(p) == e)
                        .map(|&(p, e)| p.pow(e))
                        .product();
                    assert_eq!(gcud(&[a, b, c]).unwrap(), d);
                }
            }
        }
    }

    #[test]
    fn prime_counts() {
        assert!(primes_up_to(1).is_empty());
        assert_eq!(primes_up_to(10), vec![2, 3, 5, 7]);
        assert_eq!(primes_up_to(1_000_000).len(), 78498);
    }

    #[test]
    fn roots() {
        for n in 0..5000u64 {
            let r = isqrt(n);
            assert!(r * r <= n && (r + 1) * (r + 1) > n);
            let c = iroot(n, 3);
            assert!(c.pow(3) <= n && (c + 1).pow(3) > n);
        }
        assert_eq!(binomial(6, 2), BigInt::from(15));
        assert_eq!(factorial(5), BigInt::from(120));
    }
}
