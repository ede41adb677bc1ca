//! The five convolutions on functions of r variables, their unit, inverses and
//! Möbius functions.
//!
//! Every convolution is evaluated by direct summation over per-component splits
//! `n_i = (d_i, e_i)`; when both factors are multiplicative the result also
//! carries a local factor computed by the same rule on exponents.

use std::sync::{Arc, OnceLock};

use dashmap::DashMap;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{box_tuples, first_disagreement, ArithFn, Class, LocalFactor};
use crate::catalog::several::{delta_fn, one_fn, xi_fn};
use crate::error::{Error, Result};
use crate::numbers::{binomial, factor, rat, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConvolutionKind {
    Dirichlet,
    Unitary,
    Gcd,
    Lcm,
    Binomial,
}

impl ConvolutionKind {
    pub const ALL: [ConvolutionKind; 5] =
        [ConvolutionKind::Dirichlet, ConvolutionKind::Unitary, ConvolutionKind::Gcd, ConvolutionKind::Lcm, ConvolutionKind::Binomial];

    /// Short name used by the expression grammar.
    pub fn name(self) -> &'static str {
        match self {
            ConvolutionKind::Dirichlet => "dir",
            ConvolutionKind::Unitary => "unit",
            ConvolutionKind::Gcd => "gcd",
            ConvolutionKind::Lcm => "lcm",
            ConvolutionKind::Binomial => "binom",
        }
    }

    pub fn from_name(s: &str) -> Option<ConvolutionKind> {
        match s {
            "dir" | "dirichlet" => Some(ConvolutionKind::Dirichlet),
            "unit" | "unitary" => Some(ConvolutionKind::Unitary),
            "gcd" => Some(ConvolutionKind::Gcd),
            "lcm" => Some(ConvolutionKind::Lcm),
            "binom" | "binomial" => Some(ConvolutionKind::Binomial),
            _ => None,
        }
    }

    fn result_class(self, a: Class, b: Class) -> Class {
        let m = a.meet(b);
        match self {
            _ if !m.is_multiplicative() => Class::General,
            ConvolutionKind::Gcd => Class::Multiplicative,
            ConvolutionKind::Binomial => m,
            _ => m.min(Class::Firmly),
        }
    }
}

/// One way to write a component `n` as the pair `(d, e)`, with its weight.
#[derive(Debug, Clone, Copy)]
struct Split {
    d: u64,
    e: u64,
    w: u64,
}

fn compute_splits(kind: ConvolutionKind, n: u64) -> Vec<Split> {
    let fac = factor(n);
    match kind {
        ConvolutionKind::Dirichlet | ConvolutionKind::Gcd => {
            fac.divisors().into_iter().map(|d| Split { d, e: n / d, w: 1 }).collect()
        }
        ConvolutionKind::Unitary => fac.unitary_divisors().into_iter().map(|d| Split { d, e: n / d, w: 1 }).collect(),
        ConvolutionKind::Binomial => {
            let mut out = vec![Split { d: 1, e: n, w: 1 }];
            for &(p, nu) in &fac.factors {
                let mut next = Vec::with_capacity(out.len() * (nu as usize + 1));
                for s in &out {
                    let mut pj = 1u64;
                    for j in 0..=nu {
                        let c = binomial(nu as u64, j as u64);
                        let c: u64 = c.try_into().expect("binomial weight fits u64");
                        next.push(Split { d: s.d * pj, e: s.e / pj, w: s.w * c });
                        pj *= p;
                    }
                }
                out = next;
            }
            out
        }
        ConvolutionKind::Lcm => {
            let divs = fac.divisors();
            let mut out = Vec::new();
            for &d in &divs {
                for &e in &divs {
                    if d.lcm(&e) == n {
                        out.push(Split { d, e, w: 1 });
                    }
                }
            }
            out
        }
    }
}

fn splits(kind: ConvolutionKind, n: u64) -> Arc<[Split]> {
    static CACHE: OnceLock<DashMap<(ConvolutionKind, u64), Arc<[Split]>>> = OnceLock::new();
    let cache = CACHE.get_or_init(DashMap::new);
    if let Some(s) = cache.get(&(kind, n)) {
        return Arc::clone(&s);
    }
    let s: Arc<[Split]> = compute_splits(kind, n).into();
    cache.entry((kind, n)).or_insert(s).clone()
}

/// `gcd(d_1...d_r, e_1...e_r) = 1` without forming products.
fn products_coprime(d: &[u64], e: &[u64]) -> bool {
    d.iter().all(|&a| a == 1 || e.iter().all(|&b| a.gcd(&b) == 1))
}

/// Visits `(d, e, weight)` for every admissible decomposition of `t`.
fn for_each_decomposition(kind: ConvolutionKind, t: &[u64], mut visit: impl FnMut(&[u64], &[u64], u64)) {
    let per: Vec<Arc<[Split]>> = t.iter().map(|&n| splits(kind, n)).collect();
    let r = t.len();
    let mut idx = vec![0usize; r];
    let mut d = vec![0u64; r];
    let mut e = vec![0u64; r];
    loop {
        let mut w = 1u64;
        for i in 0..r {
            let s = per[i][idx[i]];
            d[i] = s.d;
            e[i] = s.e;
            w *= s.w;
        }
        if kind != ConvolutionKind::Gcd || products_coprime(&d, &e) {
            visit(&d, &e, w);
        }
        let mut i = r;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            idx[i] += 1;
            if idx[i] < per[i].len() {
                break;
            }
            idx[i] = 0;
        }
    }
}

/// Exponent-level analogue of [`for_each_decomposition`] at a single prime.
fn for_each_local_decomposition(kind: ConvolutionKind, nu: &[u32], mut visit: impl FnMut(&[u32], &[u32], BigInt)) {
    let per: Vec<Vec<(u32, u32, u64)>> = nu
        .iter()
        .map(|&v| match kind {
            ConvolutionKind::Dirichlet | ConvolutionKind::Gcd => (0..=v).map(|a| (a, v - a, 1)).collect(),
            ConvolutionKind::Unitary if v == 0 => vec![(0, 0, 1)],
            ConvolutionKind::Unitary => vec![(0, v, 1), (v, 0, 1)],
            ConvolutionKind::Binomial => {
                (0..=v).map(|a| (a, v - a, binomial(v as u64, a as u64).try_into().unwrap())).collect()
            }
            ConvolutionKind::Lcm => {
                let mut out = Vec::new();
                for a in 0..=v {
                    for b in 0..=v {
                        if a.max(b) == v {
                            out.push((a, b, 1));
                        }
                    }
                }
                out
            }
        })
        .collect();
    let r = nu.len();
    let mut idx = vec![0usize; r];
    let mut a = vec![0u32; r];
    let mut b = vec![0u32; r];
    loop {
        let mut w = BigInt::one();
        for i in 0..r {
            let (x, y, c) = per[i][idx[i]];
            a[i] = x;
            b[i] = y;
            w *= c;
        }
        let admissible = kind != ConvolutionKind::Gcd || a.iter().all(|&x| x == 0) || b.iter().all(|&y| y == 0);
        if admissible {
            visit(&a, &b, w);
        }
        let mut i = r;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            idx[i] += 1;
            if idx[i] < per[i].len() {
                break;
            }
            idx[i] = 0;
        }
    }
}

fn local_convolution(kind: ConvolutionKind, f: LocalFactor, g: LocalFactor) -> LocalFactor {
    let r = f.arity();
    LocalFactor::new(r, move |p, nu| {
        let mut acc = Rational::zero();
        for_each_local_decomposition(kind, nu, |a, b, w| {
            let fa = f.value(p, a);
            if fa.is_zero() {
                return;
            }
            acc += Rational::from_integer(w) * fa * g.value(p, b);
        });
        acc
    })
}

/// The convolution `f (kind) g`, evaluated by direct summation and memoized.
pub fn convolve(kind: ConvolutionKind, f: &ArithFn, g: &ArithFn) -> Result<ArithFn> {
    if f.arity() != g.arity() {
        return Err(Error::ArityMismatch { expected: f.arity(), found: g.arity() });
    }
    let class = kind.result_class(f.class(), g.class());
    let name = format!("{}({}, {})", kind.name(), f.name(), g.name());
    let (ff, gg) = (f.clone(), g.clone());
    let out = ArithFn::new(name, f.arity(), class, move |t| {
        let mut acc = Rational::zero();
        for_each_decomposition(kind, t, |d, e, w| {
            let fd = ff.value(d);
            if fd.is_zero() {
                return;
            }
            let term = fd * gg.value(e);
            if w == 1 {
                acc += term;
            } else {
                acc += term * rat(w as i64);
            }
        });
        acc
    });
    let out = if class.is_multiplicative() {
        out.with_local(local_convolution(kind, f.local_factor()?, g.local_factor()?))
    } else {
        out
    };
    Ok(out.memoized())
}

/// `delta_r`, the unit of all five convolutions.
pub fn identity(r: usize) -> ArithFn {
    delta_fn(r)
}

/// Inverse of `f` under `kind`; the box `[1,B]^r` is validated and solved
/// eagerly in increasing (product, lexicographic) order, other tuples lazily.
pub fn inverse(kind: ConvolutionKind, f: &ArithFn, bound: u64) -> Result<ArithFn> {
    let r = f.arity();
    if kind == ConvolutionKind::Lcm {
        return lcm_inverse(f, bound);
    }
    let ones = vec![1u64; r];
    let f1 = f.value(&ones);
    if f1.is_zero() {
        return Err(Error::NotInvertible { witness: ones, reason: "f(1,..,1) = 0".into() });
    }
    let class = match kind {
        ConvolutionKind::Gcd => f.class().min(Class::Multiplicative),
        ConvolutionKind::Binomial => f.class(),
        _ => f.class().min(Class::Firmly),
    };
    let memo: Arc<DashMap<Vec<u64>, Rational>> = Arc::new(DashMap::new());
    let inv_f1 = f1.recip();
    let solver = InverseSolver { kind, f: f.clone(), inv_f1, memo };
    let mut tuples = box_tuples(r, bound);
    tuples.sort_by_key(|t| (t.iter().map(|&x| x as u128).product::<u128>(), t.clone()));
    for t in &tuples {
        solver.solve(t);
    }
    let name = format!("inv({}, {})", kind.name(), f.name());
    let out = ArithFn::new(name, r, class, move |t| solver.solve(t));
    if class.is_multiplicative() {
        let lf = f.local_factor()?;
        let local = local_inverse(kind, lf);
        return Ok(out.with_local(local));
    }
    Ok(out)
}

struct InverseSolver {
    kind: ConvolutionKind,
    f: ArithFn,
    inv_f1: Rational,
    memo: Arc<DashMap<Vec<u64>, Rational>>,
}

impl InverseSolver {
    fn solve(&self, t: &[u64]) -> Rational {
        if let Some(v) = self.memo.get(t) {
            return v.clone();
        }
        let v = if t.iter().all(|&x| x == 1) {
            self.inv_f1.clone()
        } else {
            let mut acc = Rational::zero();
            for_each_decomposition(self.kind, t, |d, e, w| {
                if d.iter().all(|&x| x == 1) {
                    return;
                }
                let fd = self.f.value(d);
                if fd.is_zero() {
                    return;
                }
                acc += fd * self.solve(e) * rat(w as i64);
            });
            -acc * &self.inv_f1
        };
        self.memo.insert(t.to_vec(), v.clone());
        v
    }
}

/// Local factor of the inverse, solved on exponents in increasing total degree.
fn local_inverse(kind: ConvolutionKind, f: LocalFactor) -> LocalFactor {
    let r = f.arity();
    let memo: Arc<DashMap<(u64, Vec<u32>), Rational>> = Arc::new(DashMap::new());
    fn solve(kind: ConvolutionKind, f: &LocalFactor, memo: &DashMap<(u64, Vec<u32>), Rational>, p: u64, nu: &[u32]) -> Rational {
        if nu.iter().all(|&e| e == 0) {
            return Rational::one();
        }
        if let Some(v) = memo.get(&(p, nu.to_vec())) {
            return v.clone();
        }
        let mut acc = Rational::zero();
        for_each_local_decomposition(kind, nu, |a, b, w| {
            if a.iter().all(|&x| x == 0) {
                return;
            }
            let fa = f.value(p, a);
            if !fa.is_zero() {
                acc += Rational::from_integer(w) * fa * solve(kind, f, memo, p, b);
            }
        });
        let v = -acc;
        memo.insert((p, nu.to_vec()), v.clone());
        v
    }
    LocalFactor::new(r, move |p, nu| solve(kind, &f, &memo, p, nu))
}

/// lcm inverse through `(1 / (f * 1_r)) * mu_r`.
fn lcm_inverse(f: &ArithFn, bound: u64) -> Result<ArithFn> {
    let r = f.arity();
    let h = convolve(ConvolutionKind::Dirichlet, f, &one_fn(r))?;
    for t in box_tuples(r, bound) {
        if h.value(&t).is_zero() {
            return Err(Error::NotInvertible { witness: t, reason: "(f * 1_r) vanishes".into() });
        }
    }
    let hh = h.clone();
    let class = if f.class().is_multiplicative() { Class::Multiplicative } else { Class::General };
    let recip = ArithFn::new(format!("recip({})", h.name()), r, class, move |t| {
        let v = hh.value(t);
        assert!(!v.is_zero(), "lcm inverse: (f * 1_r) vanishes at {t:?}");
        v.recip()
    });
    let recip = match h.local() {
        Some(l) if class.is_multiplicative() => {
            let l = l.clone();
            recip.with_local(LocalFactor::new(r, move |p, nu| l.value(p, nu).recip()))
        }
        _ => recip,
    };
    let g = convolve(ConvolutionKind::Dirichlet, &recip, &mobius(ConvolutionKind::Dirichlet, r))?;
    Ok(g.renamed(format!("inv(lcm, {})", f.name())))
}

/// The inverse of `1_r` under `kind`, in closed form.
#[derive(Clone, Debug)]
pub struct MobiusFamily {
    pub kind: ConvolutionKind,
    pub function: ArithFn,
}

pub fn mobius_family(kind: ConvolutionKind, r: usize) -> MobiusFamily {
    MobiusFamily { kind, function: mobius(kind, r) }
}

fn sign(odd: bool) -> i64 {
    if odd { -1 } else { 1 }
}

/// Closed forms: `mu_r`, `mu_r^x`, `mu_r^gcd`, `mu_r^lcm`, `lambda_r`.
pub fn mobius(kind: ConvolutionKind, r: usize) -> ArithFn {
    use crate::catalog::classical::{liouville, mu, mu_unitary};
    match kind {
        ConvolutionKind::Dirichlet => ArithFn::new("mu_r", r, Class::Firmly, |t| rat(t.iter().map(|&n| mu(n)).product()))
            .with_local(LocalFactor::new(r, |_, nu| {
                rat(if nu.iter().any(|&e| e > 1) { 0 } else { sign(nu.iter().filter(|&&e| e == 1).count() % 2 == 1) })
            })),
        ConvolutionKind::Unitary => {
            ArithFn::new("mu_unitary_r", r, Class::Firmly, |t| rat(t.iter().map(|&n| mu_unitary(n)).product()))
                .with_local(LocalFactor::new(r, |_, nu| rat(sign(nu.iter().filter(|&&e| e > 0).count() % 2 == 1))))
        }
        ConvolutionKind::Gcd => ArithFn::new("mu_gcd_r", r, Class::Multiplicative, |t| {
            let mut primes: Vec<u64> = t.iter().flat_map(|&n| factor(n).primes().collect::<Vec<_>>()).collect();
            primes.sort_unstable();
            primes.dedup();
            rat(sign(primes.len() % 2 == 1))
        })
        .with_local(LocalFactor::new(r, |_, _| rat(-1))),
        ConvolutionKind::Lcm => {
            let local = LocalFactor::new(r, |_, nu| lcm_mobius_local(nu));
            ArithFn::from_local("mu_lcm_r", Class::Firmly, local)
        }
        ConvolutionKind::Binomial => {
            ArithFn::new("lambda_r", r, Class::Completely, |t| rat(t.iter().map(|&n| liouville(n)).product()))
                .with_local(LocalFactor::new(r, |_, nu| rat(sign(nu.iter().sum::<u32>() % 2 == 1))))
        }
    }
}

/// `mu_r^lcm(p^v_1, .., p^v_r) = prod_{v_i >= 1} -1 / (v_i (v_i + 1))`.
pub fn lcm_mobius_local(nu: &[u32]) -> Rational {
    nu.iter()
        .filter(|&&v| v > 0)
        .map(|&v| Rational::new(BigInt::from(-1), BigInt::from(v as u64 * (v as u64 + 1))))
        .product()
}

/// `(-1)^r / (v_1 (v_1 + 1) ... v_r (v_r + 1))`, valid when every `v_i >= 1`.
pub fn lcm_mobius_prime_power_formula(nu: &[u32]) -> Rational {
    let den: u64 = nu.iter().map(|&v| v as u64 * (v as u64 + 1)).product();
    Rational::new(BigInt::from(sign(nu.len() % 2 == 1)), BigInt::from(den))
}

/// `f (+) g = ((f * 1_r)(g * 1_r)) * mu_r`.
pub fn lcm_via_dirichlet(f: &ArithFn, g: &ArithFn) -> Result<ArithFn> {
    let r = f.arity();
    let one = one_fn(r);
    let fs = convolve(ConvolutionKind::Dirichlet, f, &one)?;
    let gs = convolve(ConvolutionKind::Dirichlet, g, &one)?;
    let prod = fs.mul(&gs)?;
    Ok(convolve(ConvolutionKind::Dirichlet, &prod, &mobius(ConvolutionKind::Dirichlet, r))?
        .renamed(format!("lcm_via_dir({}, {})", f.name(), g.name())))
}

/// `f o g = xi_r ((f / xi_r) * (g / xi_r))` on `[1,B]^r`.
pub fn binomial_iso_check(f: &ArithFn, g: &ArithFn, bound: u64) -> Result<bool> {
    let r = f.arity();
    let xi = xi_fn(r);
    let lhs = convolve(ConvolutionKind::Binomial, f, g)?;
    let inner = convolve(ConvolutionKind::Dirichlet, &f.div(&xi)?, &g.div(&xi)?)?;
    let rhs = xi.mul(&inner)?;
    Ok(first_disagreement(&lhs, &rhs, bound)?.is_none())
}
