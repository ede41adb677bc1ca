//! Coprimality densities: Euler products against exact lattice counts.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use rug::ops::Pow;
use rug::Float;
use serde::{Serialize, Serializer};

use crate::arith::LocalFactor;
use crate::catalog::classical::mu;
use crate::error::{Error, Result};
use crate::numbers::{factor, ratio, Rational};
use crate::series::euler::{euler_product_with, local_sum, EulerConfig, EulerProductResult, LocalSum};
use crate::series::zeta::{to_float, zeta_float};

/// The five lattice-point predicates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DensityPredicate {
    GcdOne,
    GcdSquarefree,
    PairwiseCoprime,
    GcudOne,
    PairwiseUnitaryCoprime,
}

impl DensityPredicate {
    pub const ALL: [DensityPredicate; 5] = [
        DensityPredicate::GcdOne,
        DensityPredicate::GcdSquarefree,
        DensityPredicate::PairwiseCoprime,
        DensityPredicate::GcudOne,
        DensityPredicate::PairwiseUnitaryCoprime,
    ];

    pub fn name(self) -> &'static str {
        match self {
            DensityPredicate::GcdOne => "gcd-one",
            DensityPredicate::GcdSquarefree => "gcd-squarefree",
            DensityPredicate::PairwiseCoprime => "pairwise-coprime",
            DensityPredicate::GcudOne => "gcud-one",
            DensityPredicate::PairwiseUnitaryCoprime => "pairwise-unitary-coprime",
        }
    }

    pub fn from_name(s: &str) -> Result<DensityPredicate> {
        let alias = match s {
            "coprime" | "visible" => "gcd-one",
            "unitary-coprime" => "gcud-one",
            other => other,
        };
        DensityPredicate::ALL
            .into_iter()
            .find(|p| p.name() == alias)
            .ok_or_else(|| Error::UnknownPredicate(s.to_string()))
    }
}

impl Serialize for DensityPredicate {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

fn pf(p: u64, prec: u32) -> Float {
    Float::with_val(prec, p)
}

fn exact_local(value: Float) -> Result<LocalSum> {
    Ok(LocalSum::exact(value))
}

/// `A_r` local factor, closed form `(1 - 1/p)^{r-1} (1 + (r-1)/p)`.
pub fn pairwise_coprime_local_closed(p: u64, r: u32) -> Rational {
    let q = ratio(p as i64 - 1, p as i64);
    num_traits::Pow::pow(q, r - 1) * (Rational::from_integer(1.into()) + ratio(r as i64 - 1, p as i64))
}

/// `A_r` local factor along the proof route `(1 - 1/p)^r + (r/p)(1 - 1/p)^{r-1}`.
pub fn pairwise_coprime_local_proof(p: u64, r: u32) -> Rational {
    let q = ratio(p as i64 - 1, p as i64);
    num_traits::Pow::pow(q.clone(), r) + ratio(r as i64, p as i64) * num_traits::Pow::pow(q, r - 1)
}

/// Both routes to `A_r`.
#[derive(Debug, Clone, Serialize)]
pub struct CoprimeDensity {
    pub closed_form: EulerProductResult,
    pub proof_route: EulerProductResult,
}

pub fn density_pairwise_coprime(r: usize, cfg: &EulerConfig) -> Result<CoprimeDensity> {
    if r < 2 {
        return Err(Error::InvalidArgument("pairwise coprimality needs r >= 2".into()));
    }
    let prec = cfg.prec();
    let r32 = r as u32;
    let closed = euler_product_with(
        |p| {
            let q = Float::with_val(prec, 1) - pf(p, prec).recip();
            let lin = Float::with_val(prec, 1) + Float::with_val(prec, (r32 - 1) as f64) / pf(p, prec);
            exact_local(q.pow(r32 - 1) * lin)
        },
        cfg,
    )?;
    let proof = euler_product_with(
        |p| {
            let q = Float::with_val(prec, 1) - pf(p, prec).recip();
            let a = Float::with_val(prec, q.clone().pow(r32));
            let b = Float::with_val(prec, q.pow(r32 - 1)) * r32 / pf(p, prec);
            exact_local(a + b)
        },
        cfg,
    )?;
    Ok(CoprimeDensity { closed_form: closed, proof_route: proof })
}

/// `prod_p (1 - (p-1)^r / (p^r (p^r - 1)))`: density of `gcud(n_1..n_r) = 1`.
pub fn density_gcud_coprime(r: usize, cfg: &EulerConfig) -> Result<EulerProductResult> {
    if r < 2 {
        return Err(Error::InvalidArgument("gcud density needs r >= 2".into()));
    }
    let prec = cfg.prec();
    euler_product_with(
        |p| {
            let pr = Float::with_val(prec, rug::Integer::from(p).pow(r as u32));
            let num = Float::with_val(prec, rug::Integer::from(p - 1).pow(r as u32));
            let den = Float::with_val(prec, &pr * Float::with_val(prec, &pr - 1u32));
            exact_local(Float::with_val(prec, 1) - num / den)
        },
        cfg,
    )
}

/// `Q(p^nu)` with `Q = mu^x_r x rho^x`: the nonzero exponents take `q` distinct values with
/// multiplicities `t_1..t_q`, and `Q = (-1)^{t_1 + .. + t_q} (1 - t_1)..(1 - t_q)`.
pub fn q_function(nu: &[u32]) -> i64 {
    let mut mult: BTreeMap<u32, i64> = BTreeMap::new();
    for &v in nu.iter().filter(|&&v| v > 0) {
        *mult.entry(v).or_default() += 1;
    }
    let k: i64 = mult.values().sum();
    let sign = if k % 2 == 0 { 1 } else { -1 };
    sign * mult.values().map(|t| 1 - t).product::<i64>()
}

/// The same value written with the sign `(-1)^r`, as the closed formula is printed.
pub fn q_function_printed(nu: &[u32]) -> i64 {
    let k = nu.iter().filter(|&&v| v > 0).count();
    let r = nu.len();
    let flip = if (r - k).is_multiple_of(2) { 1 } else { -1 };
    if nu.iter().all(|&v| v == 0) { 1 } else { flip * q_function(nu) }
}

/// Polynomial factors `1 + a_2/p^2 + ..` of the explicit `r = 3, 4` products as printed, with their zeta prefactors.
///
/// The `r = 4` list does not match the predicate; see [`derived_unitary_polynomial`].
pub fn explicit_unitary_polynomial(r: usize) -> Option<(&'static [i64], &'static [f64])> {
    const A3: [i64; 9] = [1, 0, -4, 7, -9, 8, -2, -3, 2];
    const A4: [i64; 16] = [1, 0, -8, 3, 27, -24, -14, -3, 37, -30, 42, -33, -41, 78, -44, 9];
    match r {
        3 => Some((&A3, &[2.0, 3.0])),
        4 => Some((&A4, &[2.0, 2.0, 3.0, 4.0])),
        _ => None,
    }
}

/// Routes to `A^x_r`.
#[derive(Debug, Clone, Serialize)]
pub struct UnitaryCoprimeDensity {
    pub q_sum: EulerProductResult,
    /// `r = 2`: the gcud product; `r = 3, 4`: zeta factors times the printed polynomial product.
    pub explicit: Option<EulerProductResult>,
    /// `r = 3, 4`: the same zeta factors times the numerator from [`derived_unitary_polynomial`].
    pub derived: Option<EulerProductResult>,
}

/// `prod_z zeta(z) * prod_p sum_i c_i p^-i`.
pub fn polynomial_product(coeffs: &[i64], zetas: &[u32], cfg: &EulerConfig) -> Result<EulerProductResult> {
    let prec = cfg.prec();
    let mut res = euler_product_with(
        |p| {
            let x = pf(p, prec).recip();
            let mut acc = Float::with_val(prec, 0);
            for &c in coeffs.iter().rev() {
                acc = acc * &x + c;
            }
            exact_local(acc)
        },
        cfg,
    )?;
    let mut pre = Float::with_val(prec, 1);
    for &s in zetas {
        pre *= zeta_float(&Float::with_val(prec, s))?;
    }
    res.value *= &pre;
    res.partial_product *= &pre;
    res.tail_estimate *= &pre;
    Ok(res)
}

/// Numerator of the local density of pairwise unitary coprimality after clearing `prod_z (1 - x^z)`, x = 1/p.
///
/// Counted straight from the predicate: the positive exponents at p must be distinct, so
/// the local density is `(1-x)^r sum_m C(r,m) m! x^(m(m+1)/2) / prod_(i<=m) (1-x^i)`.
/// Errors if the cleared series does not terminate.
pub fn derived_unitary_polynomial(r: usize, zetas: &[u32]) -> Result<Vec<i64>> {
    let n = 4 * r * r + 4 * zetas.iter().sum::<u32>() as usize;
    let mut total = vec![0i128; n + 1];
    for m in 0..=r {
        let lead = m * (m + 1) / 2;
        if lead > n {
            break;
        }
        let mut term = vec![0i128; n + 1];
        term[lead] = (0..m as i128).fold(1, |acc, i| acc * (r as i128 - i));
        for i in 1..=m {
            // divide by (1 - x^i)
            for d in i..=n {
                term[d] += term[d - i];
            }
        }
        total.iter_mut().zip(&term).for_each(|(t, v)| *t += v);
    }
    let times_one_minus = |a: &mut Vec<i128>, k: usize| {
        for d in (k..=n).rev() {
            a[d] -= a[d - k];
        }
    };
    for _ in 0..r {
        times_one_minus(&mut total, 1);
    }
    for &z in zetas {
        times_one_minus(&mut total, z as usize);
    }
    let last = total.iter().rposition(|&c| c != 0).unwrap_or(0);
    if last > n / 2 {
        return Err(Error::InvalidArgument(format!("local density of r = {r} is not a polynomial over the given zeta factors")));
    }
    Ok(total[..=last].iter().map(|&c| c as i64).collect())
}

pub fn density_pairwise_unitary_coprime(r: usize, cfg: &EulerConfig) -> Result<UnitaryCoprimeDensity> {
    if r < 2 {
        return Err(Error::InvalidArgument("pairwise unitary coprimality needs r >= 2".into()));
    }
    let prec = cfg.prec();
    let weighted = LocalFactor::new(r, |p, nu| {
        let q = q_function(nu);
        if q == 0 {
            return Rational::zero();
        }
        let k = nu.iter().filter(|&&v| v > 0).count() as u32;
        Rational::from_integer(q.into()) * num_traits::Pow::pow(ratio(p as i64 - 1, p as i64), k)
    });
    let ones = vec![Float::with_val(prec, 1); r];
    let q_sum = euler_product_with(|p| local_sum(&weighted, &ones, p, cfg), cfg)?;
    let (explicit, derived) = match (r, explicit_unitary_polynomial(r)) {
        (2, _) => (Some(density_gcud_coprime(2, cfg)?), None),
        (_, Some((coeffs, zetas))) => {
            let exps: Vec<u32> = zetas.iter().map(|&z| z as u32).collect();
            let derived = derived_unitary_polynomial(r, &exps)?;
            (Some(polynomial_product(coeffs, &exps, cfg)?), Some(polynomial_product(&derived, &exps, cfg)?))
        }
        _ => (None, None),
    };
    Ok(UnitaryCoprimeDensity { q_sum, explicit, derived })
}

/// Analytic density of each predicate.
pub fn analytic_density(pred: DensityPredicate, r: usize, cfg: &EulerConfig) -> Result<EulerProductResult> {
    let prec = cfg.prec();
    let inverse_zeta_product = |s: u32| {
        euler_product_with(
            move |p| exact_local(Float::with_val(prec, 1) - Float::with_val(prec, rug::Integer::from(p).pow(s)).recip()),
            cfg,
        )
    };
    match pred {
        DensityPredicate::GcdOne => inverse_zeta_product(r as u32),
        DensityPredicate::GcdSquarefree => inverse_zeta_product(2 * r as u32),
        DensityPredicate::PairwiseCoprime => Ok(density_pairwise_coprime(r, cfg)?.closed_form),
        DensityPredicate::GcudOne => density_gcud_coprime(r, cfg),
        DensityPredicate::PairwiseUnitaryCoprime => Ok(density_pairwise_unitary_coprime(r, cfg)?.q_sum),
    }
}

fn gcud_is_one(a: u64, b: u64) -> bool {
    let g = a.gcd(&b);
    g == 1 || factor(g).primes().all(|p| factor(a).exponent(p) != factor(b).exponent(p))
}

/// Symmetric pair table over `[1,B]^2`, row-major from index 1.
struct PairTable {
    side: usize,
    bits: Vec<bool>,
}

impl PairTable {
    fn new(side: u64, rel: impl Fn(u64, u64) -> bool + Sync) -> PairTable {
        let n = side as usize;
        let rows: Vec<Vec<bool>> = (1..=side).into_par_iter().map(|a| (1..=side).map(|b| rel(a, b)).collect()).collect();
        PairTable { side: n, bits: rows.concat() }
    }

    fn get(&self, a: u64, b: u64) -> bool {
        self.bits[(a as usize - 1) * self.side + b as usize - 1]
    }
}

/// Tuples in `[1,B]^r` whose coordinates are pairwise related by `table`.
fn count_pairwise(table: &PairTable, r: usize, side: u64) -> BigInt {
    fn extend(table: &PairTable, chosen: &mut Vec<u64>, r: usize, side: u64) -> u64 {
        if chosen.len() == r {
            return 1;
        }
        if chosen.len() + 1 == r {
            return (1..=side).filter(|&x| chosen.iter().all(|&c| table.get(c, x))).count() as u64;
        }
        let mut total = 0;
        for x in 1..=side {
            if chosen.iter().all(|&c| table.get(c, x)) {
                chosen.push(x);
                total += extend(table, chosen, r, side);
                chosen.pop();
            }
        }
        total
    }
    let per_first: Vec<u64> = (1..=side)
        .into_par_iter()
        .map(|first| {
            let mut chosen = vec![first];
            extend(table, &mut chosen, r, side)
        })
        .collect();
    per_first.into_iter().map(BigInt::from).sum()
}

/// Number of tuples in `[1,B]^r` satisfying the predicate.
pub fn lattice_count(pred: DensityPredicate, r: usize, side: u64) -> Result<BigInt> {
    if r == 0 || side == 0 {
        return Err(Error::NonPositive("r and B".into()));
    }
    Ok(match pred {
        // gcd(n) = 1: sum_d mu(d) [B/d]^r; gcd squarefree: sum_d mu(d) [B/d^2]^r
        DensityPredicate::GcdOne => (1..=side).map(|d| BigInt::from(mu(d)) * BigInt::from(side / d).pow(r as u32)).sum(),
        DensityPredicate::GcdSquarefree => (1..)
            .take_while(|d| d * d <= side)
            .map(|d: u64| BigInt::from(mu(d)) * BigInt::from(side / (d * d)).pow(r as u32))
            .sum(),
        DensityPredicate::PairwiseCoprime => {
            if r == 1 {
                return Ok(BigInt::from(side));
            }
            count_pairwise(&PairTable::new(side, |a, b| a.gcd(&b) == 1), r, side)
        }
        DensityPredicate::PairwiseUnitaryCoprime => {
            if r == 1 {
                return Ok(BigInt::from(side));
            }
            count_pairwise(&PairTable::new(side, gcud_is_one), r, side)
        }
        DensityPredicate::GcudOne => {
            // gcud(n) = 1 iff no prime has one common positive exponent in every coordinate
            let exps: Vec<Vec<(u64, u32)>> = (1..=side).map(|n| factor(n).factors.clone()).collect();
            let ok = |t: &[u64]| -> bool {
                exps[t[0] as usize - 1].iter().all(|&(p, e)| t[1..].iter().any(|&n| factor_exp(&exps[n as usize - 1], p) != e))
            };
            let per_first: Vec<u64> = (1..=side)
                .into_par_iter()
                .map(|first| {
                    let mut count = 0u64;
                    let mut t = vec![1u64; r];
                    t[0] = first;
                    loop {
                        if ok(&t) {
                            count += 1;
                        }
                        let mut i = r;
                        loop {
                            if i == 1 {
                                return count;
                            }
                            i -= 1;
                            if t[i] < side {
                                t[i] += 1;
                                break;
                            }
                            t[i] = 1;
                        }
                    }
                })
                .collect();
            per_first.into_iter().map(BigInt::from).sum()
        }
    })
}

fn factor_exp(f: &[(u64, u32)], p: u64) -> u32 {
    f.iter().find(|&&(q, _)| q == p).map_or(0, |&(_, e)| e)
}

/// `count / B^r`.
pub fn empirical_density(pred: DensityPredicate, r: usize, side: u64) -> Result<Rational> {
    let count = lattice_count(pred, r, side)?;
    Ok(Rational::new(count, BigInt::from(side).pow(r as u32)))
}

#[derive(Debug, Clone, Serialize)]
pub struct DensityReport {
    pub predicate: DensityPredicate,
    pub r: usize,
    pub analytic: EulerProductResult,
    #[serde(serialize_with = "ser_rational")]
    pub empirical: Rational,
    pub box_side: u64,
    pub gap: f64,
}

fn ser_rational<S: Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&q.to_string())
}

pub fn density_report(pred: DensityPredicate, r: usize, side: u64, cfg: &EulerConfig) -> Result<DensityReport> {
    let analytic = analytic_density(pred, r, cfg)?;
    let empirical = empirical_density(pred, r, side)?;
    let e = to_float(&empirical, cfg.prec());
    let gap = Float::with_val(cfg.prec(), &analytic.value - &e).abs().to_f64();
    Ok(DensityReport { predicate: pred, r, analytic, empirical, box_side: side, gap })
}

/// Empirical value as `f64`.
pub fn rational_to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or_else(|| to_float(q, 64).to_f64())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_numerators() {
        let (a3, z3) = explicit_unitary_polynomial(3).unwrap();
        assert_eq!(derived_unitary_polynomial(3, &[2, 3]).unwrap(), a3.to_vec());
        assert_eq!(z3, &[2.0, 3.0]);
        let a4 = derived_unitary_polynomial(4, &[2, 2, 3, 4]).unwrap();
        assert_eq!(a4, vec![1, 0, -8, 19, -27, 16, 36, -93, 75, 8, -48, 17, -1, 24, -28, 9]);
        assert_ne!(a4, explicit_unitary_polynomial(4).unwrap().0.to_vec());
        assert!(derived_unitary_polynomial(4, &[2]).is_err());
    }
    use crate::numbers::{gcd, gcud};

    fn brute(pred: DensityPredicate, r: usize, side: u64) -> u64 {
        let tuples = crate::arith::box_tuples(r, side);
        tuples
            .iter()
            .filter(|t| match pred {
                DensityPredicate::GcdOne => gcd(t).unwrap() == 1,
                DensityPredicate::GcdSquarefree => factor(gcd(t).unwrap()).is_squarefree(),
                DensityPredicate::PairwiseCoprime => (0..r).all(|i| (i + 1..r).all(|j| t[i].gcd(&t[j]) == 1)),
                DensityPredicate::GcudOne => gcud(t).unwrap() == 1,
                DensityPredicate::PairwiseUnitaryCoprime => (0..r).all(|i| (i + 1..r).all(|j| gcud(&[t[i], t[j]]).unwrap() == 1)),
            })
            .count() as u64
    }

    #[test]
    fn counts_match_enumeration() {
        for pred in DensityPredicate::ALL {
            for (r, side) in [(2, 40), (3, 14), (4, 7)] {
                assert_eq!(lattice_count(pred, r, side).unwrap(), BigInt::from(brute(pred, r, side)), "{pred:?} r={r}");
            }
        }
    }

    #[test]
    fn small_examples() {
        assert_eq!(empirical_density(DensityPredicate::GcdOne, 2, 4).unwrap(), ratio(11, 16));
        assert_eq!(empirical_density(DensityPredicate::PairwiseCoprime, 2, 4).unwrap(), ratio(11, 16));
        assert_eq!(pairwise_coprime_local_closed(2, 2), ratio(3, 4));
    }

    #[test]
    fn local_polynomials_agree() {
        for r in 2..=5 {
            for p in crate::numbers::primes_up_to(100) {
                assert_eq!(pairwise_coprime_local_closed(p, r), pairwise_coprime_local_proof(p, r));
            }
        }
    }

    #[test]
    fn q_function_examples() {
        assert_eq!(q_function(&[0, 0, 0]), 1);
        assert_eq!(q_function(&[2, 2, 2]), 2);
        assert_eq!(q_function(&[3, 3, 1, 1]), 1);
        assert_eq!(q_function(&[1, 1]), -1);
        assert_eq!(q_function(&[2, 1]), 0);
        assert_eq!(q_function(&[2, 2, 0]), -1);
        assert_eq!(q_function(&[2, 2, 2, 0]), 2);
        assert_eq!(q_function(&[1, 1, 1, 1]), -3);
        // the printed sign (-1)^r differs once a coordinate vanishes
        assert_eq!(q_function_printed(&[2, 2, 0]), 1);
        assert_eq!(q_function_printed(&[2, 2, 2]), 2);
    }

    #[test]
    fn q_function_is_unitary_convolution() {
        // (mu^x_r x rho^x)(p^nu): alternate over the coordinates given to mu^x
        let rho_x = |nu: &[u32]| {
            let vals: Vec<u32> = nu.iter().copied().filter(|&v| v > 0).collect();
            (0..vals.len()).all(|i| (i + 1..vals.len()).all(|j| vals[i] != vals[j]))
        };
        for r in 1..=4usize {
            let lists: Vec<Vec<u64>> = vec![(0..=3).collect(); r];
            crate::numbers::for_each_combination(&lists, |nu| {
                let nu: Vec<u32> = nu.iter().map(|&v| v as u32).collect();
                let support: Vec<usize> = (0..r).filter(|&i| nu[i] > 0).collect();
                let mut brute = 0i64;
                for mask in 0u32..(1 << support.len()) {
                    let mut rest = nu.clone();
                    for (bit, &i) in support.iter().enumerate() {
                        if mask >> bit & 1 == 1 {
                            rest[i] = 0;
                        }
                    }
                    if rho_x(&rest) {
                        brute += if mask.count_ones() % 2 == 0 { 1 } else { -1 };
                    }
                }
                assert_eq!(q_function(&nu), brute, "{nu:?}");
            });
        }
    }

    #[test]
    fn a2_is_six_over_pi_squared() {
        let cfg = EulerConfig { primes: 10_000, digits: 40, ..EulerConfig::default() };
        let d = density_pairwise_coprime(2, &cfg).unwrap();
        let prec = cfg.prec();
        let want = Float::with_val(prec, 6) / Float::with_val(prec, crate::series::zeta::pi(prec).pow(2));
        assert!(Float::with_val(prec, &d.closed_form.value - &want).abs() < 1e-12);
        assert!(Float::with_val(prec, &d.proof_route.value - &want).abs() < 1e-12);
    }
}
