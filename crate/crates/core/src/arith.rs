//! Arithmetic functions of r variables with exact rational values.
//!
//! An [`ArithFn`] is an immutable, thread-safe evaluator `N^r -> Q` carrying an
//! advisory class tag and, for multiplicative functions, an optional
//! [`LocalFactor`] that determines it from prime-power data.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use dashmap::DashMap;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numbers::{factor, Rational};

pub type Evaluator = dyn Fn(&[u64]) -> Rational + Send + Sync;
pub type LocalEvaluator = dyn Fn(u64, &[u32]) -> Rational + Send + Sync;

/// Multiplicativity classes, ordered from weakest to strongest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Class {
    General,
    Multiplicative,
    Firmly,
    Completely,
}

impl Class {
    pub fn is_multiplicative(self) -> bool {
        self >= Class::Multiplicative
    }

    /// Strongest class implied by both tags.
    pub fn meet(self, other: Class) -> Class {
        self.min(other)
    }
}

impl fmt::Display for Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Class::General => "general",
            Class::Multiplicative => "multiplicative",
            Class::Firmly => "firmly multiplicative",
            Class::Completely => "completely multiplicative",
        };
        f.write_str(s)
    }
}

/// Prime-power data `(p; v_1..v_r) -> f(p^v_1, .., p^v_r)` of a multiplicative function.
#[derive(Clone)]
pub struct LocalFactor {
    arity: usize,
    eval: Arc<LocalEvaluator>,
}

impl LocalFactor {
    pub fn new<F>(arity: usize, f: F) -> Self
    where
        F: Fn(u64, &[u32]) -> Rational + Send + Sync + 'static,
    {
        LocalFactor { arity, eval: Arc::new(f) }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn value(&self, p: u64, nu: &[u32]) -> Rational {
        if nu.iter().all(|&e| e == 0) {
            return Rational::one();
        }
        (self.eval)(p, nu)
    }
}

impl fmt::Debug for LocalFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LocalFactor(arity {})", self.arity)
    }
}

/// Exponent tuples of every prime dividing some component, in increasing prime order.
pub fn prime_exponents(t: &[u64]) -> Vec<(u64, Vec<u32>)> {
    let mut table: Vec<(u64, Vec<u32>)> = Vec::new();
    for (i, &n) in t.iter().enumerate() {
        for (p, e) in factor(n).factors {
            match table.iter_mut().find(|(q, _)| *q == p) {
                Some((_, v)) => v[i] = e,
                None => {
                    let mut v = vec![0; t.len()];
                    v[i] = e;
                    table.push((p, v));
                }
            }
        }
    }
    table.sort_unstable_by_key(|(p, _)| *p);
    table
}

fn validate(arity: usize, t: &[u64]) -> Result<()> {
    if t.len() != arity {
        return Err(Error::ArityMismatch { expected: arity, found: t.len() });
    }
    if let Some(&bad) = t.iter().find(|&&x| x == 0) {
        return Err(Error::NonPositive(bad.to_string()));
    }
    Ok(())
}

/// Product of local values over the primes dividing `t_1 ... t_r`.
pub fn eval_multiplicative(local: &LocalFactor, t: &[u64]) -> Result<Rational> {
    validate(local.arity, t)?;
    Ok(eval_local_product(local, t))
}

fn eval_local_product(local: &LocalFactor, t: &[u64]) -> Rational {
    let mut acc = Rational::one();
    for (p, nu) in prime_exponents(t) {
        acc *= local.value(p, &nu);
        if acc.is_zero() {
            break;
        }
    }
    acc
}

/// An arithmetic function of `arity` variables.
#[derive(Clone)]
pub struct ArithFn {
    name: Arc<str>,
    arity: usize,
    class: Class,
    eval: Arc<Evaluator>,
    local: Option<LocalFactor>,
}

impl fmt::Debug for ArithFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ArithFn({}, arity {}, {})", self.name, self.arity, self.class)
    }
}

impl ArithFn {
    pub fn new<F>(name: impl Into<String>, arity: usize, class: Class, f: F) -> Self
    where
        F: Fn(&[u64]) -> Rational + Send + Sync + 'static,
    {
        assert!(arity >= 1, "arity must be at least 1");
        ArithFn { name: Arc::from(name.into()), arity, class, eval: Arc::new(f), local: None }
    }

    /// The multiplicative function determined by `local`.
    pub fn from_local(name: impl Into<String>, class: Class, local: LocalFactor) -> Self {
        assert!(class.is_multiplicative());
        let l = local.clone();
        let mut f = ArithFn::new(name, local.arity, class, move |t| eval_local_product(&l, t));
        f.local = Some(local);
        f
    }

    /// Attach prime-power data to a definitional evaluator.
    pub fn with_local(mut self, local: LocalFactor) -> Self {
        assert_eq!(local.arity, self.arity);
        self.local = Some(local);
        self
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = Arc::from(name.into());
        self
    }

    pub fn with_class(mut self, class: Class) -> Self {
        self.class = class;
        if !class.is_multiplicative() {
            self.local = None;
        }
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn class(&self) -> Class {
        self.class
    }

    pub fn local(&self) -> Option<&LocalFactor> {
        self.local.as_ref()
    }

    /// Unchecked evaluation; components must be positive and the length must match.
    pub fn value(&self, t: &[u64]) -> Rational {
        debug_assert_eq!(t.len(), self.arity, "{}", self.name);
        (self.eval)(t)
    }

    /// Checked evaluation.
    pub fn eval(&self, t: &[u64]) -> Result<Rational> {
        validate(self.arity, t)?;
        Ok(self.value(t))
    }

    /// `f(p^v_1, .., p^v_r)`, through the local factor when one is attached.
    pub fn local_value(&self, p: u64, nu: &[u32]) -> Result<Rational> {
        if let Some(l) = &self.local {
            return Ok(l.value(p, nu));
        }
        let t = nu
            .iter()
            .map(|&e| p.checked_pow(e))
            .collect::<Option<Vec<u64>>>()
            .ok_or_else(|| Error::Overflow(format!("{}: {p}^{nu:?}", self.name)))?;
        Ok(self.value(&t))
    }

    /// The local factor, synthesized from the evaluator if none is attached.
    pub fn local_factor(&self) -> Result<LocalFactor> {
        if !self.class.is_multiplicative() {
            return Err(Error::NotMultiplicative(self.name.to_string()));
        }
        if let Some(l) = &self.local {
            return Ok(l.clone());
        }
        let f = self.clone();
        Ok(LocalFactor::new(self.arity, move |p, nu| {
            let t: Vec<u64> = nu.iter().map(|&e| p.pow(e)).collect();
            f.value(&t)
        }))
    }

    /// Same function with an append-only concurrent value cache.
    pub fn memoized(&self) -> ArithFn {
        let cache: Arc<DashMap<Box<[u64]>, Rational>> = Arc::new(DashMap::new());
        let inner = Arc::clone(&self.eval);
        ArithFn {
            name: Arc::clone(&self.name),
            arity: self.arity,
            class: self.class,
            local: self.local.clone(),
            eval: Arc::new(move |t: &[u64]| {
                if let Some(v) = cache.get(t) {
                    return v.clone();
                }
                let v = inner(t);
                cache.insert(t.into(), v.clone());
                v
            }),
        }
    }

    fn check_same_arity(&self, other: &ArithFn) -> Result<()> {
        if self.arity != other.arity {
            return Err(Error::ArityMismatch { expected: self.arity, found: other.arity });
        }
        Ok(())
    }

    /// Pointwise product.
    pub fn mul(&self, other: &ArithFn) -> Result<ArithFn> {
        self.check_same_arity(other)?;
        let (f, g) = (self.clone(), other.clone());
        let class = self.class.meet(other.class);
        let out = ArithFn::new(format!("mul({}, {})", self.name, other.name), self.arity, class, move |t| {
            f.value(t) * g.value(t)
        });
        Ok(match (class.is_multiplicative(), self.local_factor(), other.local_factor()) {
            (true, Ok(a), Ok(b)) => out.with_local(LocalFactor::new(self.arity, move |p, nu| a.value(p, nu) * b.value(p, nu))),
            _ => out,
        })
    }

    /// Pointwise quotient; the divisor must not vanish where evaluated.
    pub fn div(&self, other: &ArithFn) -> Result<ArithFn> {
        self.check_same_arity(other)?;
        let (f, g) = (self.clone(), other.clone());
        let class = self.class.meet(other.class);
        let out = ArithFn::new(format!("div({}, {})", self.name, other.name), self.arity, class, move |t| {
            let d = g.value(t);
            assert!(!d.is_zero(), "division by zero value of {} at {t:?}", g.name);
            f.value(t) / d
        });
        Ok(match (class.is_multiplicative(), self.local_factor(), other.local_factor()) {
            (true, Ok(a), Ok(b)) => out.with_local(LocalFactor::new(self.arity, move |p, nu| a.value(p, nu) / b.value(p, nu))),
            _ => out,
        })
    }

    /// Pointwise sum; the result is untagged.
    pub fn add(&self, other: &ArithFn) -> Result<ArithFn> {
        self.check_same_arity(other)?;
        let (f, g) = (self.clone(), other.clone());
        Ok(ArithFn::new(format!("add({}, {})", self.name, other.name), self.arity, Class::General, move |t| {
            f.value(t) + g.value(t)
        }))
    }

    pub fn sub(&self, other: &ArithFn) -> Result<ArithFn> {
        self.check_same_arity(other)?;
        let (f, g) = (self.clone(), other.clone());
        Ok(ArithFn::new(format!("sub({}, {})", self.name, other.name), self.arity, Class::General, move |t| {
            f.value(t) - g.value(t)
        }))
    }

    pub fn scale(&self, c: Rational) -> ArithFn {
        let f = self.clone();
        ArithFn::new(format!("{c}*{}", self.name), self.arity, Class::General, move |t| &c * f.value(t))
    }

    /// `(n_1, .., n_r) -> g(gcd(n_1, .., n_r))` for a one-variable `g`.
    pub fn of_gcd(&self, r: usize) -> Result<ArithFn> {
        self.compose_with(r, "gcd", |t| t.iter().fold(0u64, |a, &b| a.gcd(&b)), |nu| *nu.iter().min().unwrap())
    }

    /// `(n_1, .., n_r) -> g(lcm(n_1, .., n_r))` for a one-variable `g`.
    pub fn of_lcm(&self, r: usize) -> Result<ArithFn> {
        self.compose_with(r, "lcm", |t| t.iter().fold(1u64, |a, &b| a.lcm(&b)), |nu| *nu.iter().max().unwrap())
    }

    fn compose_with(
        &self,
        r: usize,
        label: &str,
        inner: fn(&[u64]) -> u64,
        exp: fn(&[u32]) -> u32,
    ) -> Result<ArithFn> {
        if self.arity != 1 {
            return Err(Error::ArityMismatch { expected: 1, found: self.arity });
        }
        let g = self.clone();
        let class = if self.class.is_multiplicative() { Class::Multiplicative } else { Class::General };
        let out = ArithFn::new(format!("{}({label})", self.name), r, class, move |t| g.value(&[inner(t)]));
        Ok(match self.local_factor() {
            Ok(l) if class.is_multiplicative() => out.with_local(LocalFactor::new(r, move |p, nu| l.value(p, &[exp(nu)]))),
            _ => out,
        })
    }
}

/// `(n_1, .., n_r) -> g_1(n_1) ... g_r(n_r)`.
pub fn from_one_variable_product(gs: &[ArithFn]) -> Result<ArithFn> {
    if gs.is_empty() {
        return Err(Error::EmptyList);
    }
    if let Some(g) = gs.iter().find(|g| g.arity != 1) {
        return Err(Error::ArityMismatch { expected: 1, found: g.arity });
    }
    let class = if gs.iter().all(|g| g.class == Class::Completely) {
        Class::Completely
    } else if gs.iter().all(|g| g.class.is_multiplicative()) {
        Class::Firmly
    } else {
        Class::General
    };
    let name = format!("tensor({})", gs.iter().map(|g| g.name()).collect::<Vec<_>>().join(", "));
    let owned: Vec<ArithFn> = gs.to_vec();
    let f = ArithFn::new(name, gs.len(), class, move |t| {
        let mut acc = Rational::one();
        for (g, &n) in owned.iter().zip(t) {
            acc *= g.value(&[n]);
            if acc.is_zero() {
                break;
            }
        }
        acc
    });
    if class.is_multiplicative() {
        let locals: Vec<LocalFactor> = gs.iter().map(|g| g.local_factor()).collect::<Result<_>>()?;
        let r = gs.len();
        return Ok(f.with_local(LocalFactor::new(r, move |p, nu| {
            locals.iter().zip(nu).map(|(l, &e)| l.value(p, &[e])).product()
        })));
    }
    Ok(f)
}

/// `n -> f(n, .., n)`.
pub fn diagonal(f: &ArithFn) -> ArithFn {
    let g = f.clone();
    let r = f.arity;
    let class = match f.class {
        Class::Completely => Class::Completely,
        c if c.is_multiplicative() => Class::Multiplicative,
        _ => Class::General,
    };
    let out = ArithFn::new(format!("diag({})", f.name), 1, class, move |t| g.value(&vec![t[0]; r]));
    match f.local_factor() {
        Ok(l) => out.with_local(LocalFactor::new(1, move |p, nu| l.value(p, &vec![nu[0]; r]))),
        Err(_) => out,
    }
}

/// All tuples of `[1,B]^r` in lexicographic order.
pub fn box_tuples(r: usize, bound: u64) -> Vec<Vec<u64>> {
    let side: Vec<u64> = (1..=bound).collect();
    let lists = vec![side; r];
    let mut out = Vec::new();
    crate::numbers::for_each_combination(&lists, |t| out.push(t.to_vec()));
    out
}

/// A tuple where two functions disagree.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Disagreement {
    pub args: Vec<u64>,
    pub lhs: String,
    pub rhs: String,
}

/// First tuple of `[1,B]^r` (lexicographic) where `f` and `g` differ.
pub fn first_disagreement(f: &ArithFn, g: &ArithFn, bound: u64) -> Result<Option<Disagreement>> {
    use rayon::prelude::*;
    f.check_same_arity(g)?;
    let tuples = box_tuples(f.arity, bound);
    Ok(tuples.par_iter().find_map_first(|t| {
        let (a, b) = (f.value(t), g.value(t));
        (a != b).then(|| Disagreement { args: t.clone(), lhs: a.to_string(), rhs: b.to_string() })
    }))
}

/// Outcome of a bounded refutation search for one class.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    NoCounterexample,
    Counterexample { m: Vec<u64>, n: Vec<u64>, lhs: String, rhs: String },
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::NoCounterexample)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassReport {
    pub bound: u64,
    pub pairs_tested: usize,
    pub multiplicative: Verdict,
    pub firmly: Verdict,
    pub completely: Verdict,
}

impl ClassReport {
    /// Strongest class with no counterexample up to the bound.
    pub fn strongest(&self) -> Class {
        if self.completely.holds() {
            Class::Completely
        } else if self.firmly.holds() {
            Class::Firmly
        } else if self.multiplicative.holds() {
            Class::Multiplicative
        } else {
            Class::General
        }
    }
}

impl fmt::Display for ClassReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (label, v) in [("multiplicative", &self.multiplicative), ("firmly", &self.firmly), ("completely", &self.completely)] {
            match v {
                Verdict::NoCounterexample => writeln!(f, "{label}: no counterexample <= {}", self.bound)?,
                Verdict::Counterexample { m, n, lhs, rhs } => {
                    writeln!(f, "{label}: fails, f({m:?}*{n:?}) = {lhs} but f(m)f(n) = {rhs}")?
                }
            }
        }
        Ok(())
    }
}

/// Tuples in `[1,B]^r` with product at most `cap`, sorted by (product, lex).
fn tuples_with_product(r: usize, b: u64, cap: u64) -> Vec<(u64, Vec<u64>)> {
    fn rec(r: usize, b: u64, cap: u64, cur: &mut Vec<u64>, prod: u64, out: &mut Vec<(u64, Vec<u64>)>) {
        if cur.len() == r {
            out.push((prod, cur.clone()));
            return;
        }
        for x in 1..=b {
            let p = prod * x;
            if p > cap {
                break;
            }
            cur.push(x);
            rec(r, b, cap, cur, p, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(r, b, cap, &mut Vec::new(), 1, &mut out);
    out.sort();
    out
}

/// Bounded search for violations of each class's functional equation over
/// pairs `m, n` in `[1,B]^r` with `(m_1..m_r)(n_1..n_r) <= B^2`.
pub fn check_class(f: &ArithFn, bound: u64) -> Result<ClassReport> {
    if bound < 2 {
        return Err(Error::InvalidArgument("check_class needs B >= 2".into()));
    }
    let r = f.arity;
    let ones = vec![1u64; r];
    let mut cache: HashMap<Vec<u64>, Rational> = HashMap::new();
    let mut value = |t: &[u64]| -> Rational {
        if let Some(v) = cache.get(t) {
            return v.clone();
        }
        let v = f.value(t);
        cache.insert(t.to_vec(), v.clone());
        v
    };
    let mut report = ClassReport {
        bound,
        pairs_tested: 0,
        multiplicative: Verdict::NoCounterexample,
        firmly: Verdict::NoCounterexample,
        completely: Verdict::NoCounterexample,
    };
    let at_one = value(&ones);
    if !at_one.is_one() {
        let v = Verdict::Counterexample {
            m: ones.clone(),
            n: ones.clone(),
            lhs: at_one.to_string(),
            rhs: (&at_one * &at_one).to_string(),
        };
        report.multiplicative = v.clone();
        report.firmly = v.clone();
        report.completely = v;
        return Ok(report);
    }
    let cap = bound * bound;
    let tuples = tuples_with_product(r, bound, cap);
    for (pm, m) in &tuples {
        for (_, n) in tuples.iter().take_while(|(pn, _)| pm * pn <= cap) {
            if report.pairs_tested > 0
                && !report.multiplicative.holds()
                && !report.firmly.holds()
                && !report.completely.holds()
            {
                return Ok(report);
            }
            report.pairs_tested += 1;
            let mn: Vec<u64> = m.iter().zip(n).map(|(a, b)| a * b).collect();
            let lhs = value(&mn);
            let rhs = value(m) * value(n);
            if lhs == rhs {
                continue;
            }
            let witness = || Verdict::Counterexample { m: m.clone(), n: n.clone(), lhs: lhs.to_string(), rhs: rhs.to_string() };
            let componentwise = m.iter().zip(n).all(|(a, b)| a.gcd(b) == 1);
            let global = componentwise && m.iter().all(|a| n.iter().all(|b| a.gcd(b) == 1));
            if report.completely.holds() {
                report.completely = witness();
            }
            if componentwise && report.firmly.holds() {
                report.firmly = witness();
            }
            if global && report.multiplicative.holds() {
                report.multiplicative = witness();
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numbers::rat;

    fn gcd2() -> ArithFn {
        ArithFn::new("gcd", 2, Class::Multiplicative, |t| rat(t[0].gcd(&t[1]) as i64))
    }

    fn tau() -> ArithFn {
        ArithFn::new("tau", 1, Class::Multiplicative, |t| rat(factor(t[0]).factors.iter().map(|&(_, e)| e as i64 + 1).product()))
    }

    #[test]
    fn eval_multiplicative_examples() {
        let g = LocalFactor::new(2, |p, nu| rat(p.pow(*nu.iter().min().unwrap()) as i64));
        let l = LocalFactor::new(2, |p, nu| rat(p.pow(*nu.iter().max().unwrap()) as i64));
        assert_eq!(eval_multiplicative(&g, &[1, 1]).unwrap(), rat(1));
        assert_eq!(eval_multiplicative(&g, &[12, 18]).unwrap(), rat(6));
        assert_eq!(eval_multiplicative(&l, &[4, 6]).unwrap(), rat(12));
        assert!(matches!(eval_multiplicative(&g, &[1, 2, 3]), Err(Error::ArityMismatch { .. })));
    }

    #[test]
    fn check_class_gcd() {
        let rep = check_class(&gcd2(), 12).unwrap();
        assert!(rep.multiplicative.holds());
        assert!(!rep.firmly.holds());
        assert_eq!(rep.strongest(), Class::Multiplicative);
        for b in 2..=30 {
            assert!(check_class(&gcd2(), b).unwrap().multiplicative.holds());
        }
    }

    #[test]
    fn check_class_products() {
        let prod = ArithFn::new("prod", 2, Class::Completely, |t| rat((t[0] * t[1]) as i64));
        assert_eq!(check_class(&prod, 12).unwrap().strongest(), Class::Completely);
        let tt = from_one_variable_product(&[tau(), tau()]).unwrap();
        assert_eq!(tt.class(), Class::Firmly);
        let rep = check_class(&tt, 12).unwrap();
        assert!(rep.firmly.holds() && !rep.completely.holds());
    }

    #[test]
    fn check_class_rejects_zero_at_one() {
        let zero = ArithFn::new("zero", 1, Class::General, |_| rat(0));
        let rep = check_class(&zero, 5).unwrap();
        assert_eq!(rep.strongest(), Class::General);
    }

    #[test]
    fn diagonal_of_gcd_is_id() {
        let d = diagonal(&gcd2());
        assert_eq!(d.value(&[7]), rat(7));
    }

    #[test]
    fn memo_is_transparent() {
        let g = gcd2();
        let m = g.memoized();
        for a in 1..30 {
            for b in 1..30 {
                assert_eq!(g.value(&[a, b]), m.value(&[a, b]));
                assert_eq!(g.value(&[a, b]), m.value(&[a, b]));
            }
        }
    }

    #[test]
    fn checked_eval_rejects_bad_tuples() {
        assert!(gcd2().eval(&[0, 3]).is_err());
        assert!(gcd2().eval(&[3]).is_err());
    }
}
