//! Named special functions with definitional and representation evaluators.

pub mod classical;
pub mod several;

use crate::arith::{ArithFn, Class};
use crate::error::{Error, Result};
use crate::numbers::Rational;

pub use classical::{classical, ramanujan_sum, CLASSICAL_NAMES};

/// Arity rule of a catalog name.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Arity {
    Fixed(usize),
    /// Any arity `>= min`.
    AtLeast(usize),
}

impl Arity {
    pub fn admits(self, r: usize) -> bool {
        match self {
            Arity::Fixed(k) => k == r,
            Arity::AtLeast(k) => r >= k,
        }
    }
}

/// A catalog function at a concrete arity.
#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub arity: usize,
    pub class: Class,
    pub definitional: ArithFn,
    pub representation: Option<ArithFn>,
}

impl CatalogEntry {
    /// Both routes at `t`, when a representation exists.
    pub fn routes(&self, t: &[u64]) -> (Rational, Option<Rational>) {
        (self.definitional.value(t), self.representation.as_ref().map(|f| f.value(t)))
    }
}

/// Names of the several-variable catalog, with arity rules.
pub const SEVERAL_NAMES: &[(&str, Arity)] = &[
    ("one", Arity::AtLeast(1)),
    ("delta", Arity::AtLeast(1)),
    ("gcd", Arity::AtLeast(1)),
    ("lcm", Arity::AtLeast(1)),
    ("gcud", Arity::AtLeast(1)),
    ("prod", Arity::AtLeast(1)),
    ("xi_r", Arity::AtLeast(1)),
    ("rho", Arity::AtLeast(2)),
    ("rho_unitary", Arity::AtLeast(2)),
    ("sigma_r", Arity::AtLeast(1)),
    ("s", Arity::Fixed(2)),
    ("c", Arity::AtLeast(1)),
    ("E", Arity::AtLeast(1)),
    ("A", Arity::AtLeast(1)),
    ("ramanujan", Arity::Fixed(2)),
];

pub fn arity_rule(name: &str) -> Option<Arity> {
    if let Some(&(_, a)) = SEVERAL_NAMES.iter().find(|(n, _)| *n == name) {
        return Some(a);
    }
    CLASSICAL_NAMES.contains(&name).then_some(Arity::Fixed(1))
}

fn repr(name: &str, r: usize, class: Class, f: fn(&[u64]) -> Rational) -> ArithFn {
    ArithFn::new(format!("{name}:representation"), r, class, f)
}

/// Catalog entry `name` at arity `r`; `k` parametrizes the one-variable families.
pub fn entry(name: &str, r: usize, k: Option<i64>) -> Result<CatalogEntry> {
    use several::*;
    let rule = arity_rule(name).ok_or_else(|| Error::UnknownFunction(name.to_string()))?;
    if !rule.admits(r) && !(r == 1 && matches!(name, "one" | "delta")) {
        return Err(Error::UnsupportedArity { name: name.to_string(), arity: r });
    }
    let m = Class::Multiplicative;
    let (static_name, definitional, representation): (&'static str, ArithFn, Option<ArithFn>) = match name {
        "one" if r > 1 => ("one", one_fn(r), None),
        "delta" if r > 1 => ("delta", delta_fn(r), None),
        "gcd" => ("gcd", gcd_fn(r), None),
        "lcm" => ("lcm", lcm_fn(r), None),
        "gcud" => ("gcud", gcud_fn(r), None),
        "prod" => ("prod", prod_fn(r), None),
        "xi_r" => ("xi_r", xi_fn(r), None),
        "rho" => ("rho", rho_fn(r), Some(repr("rho", r, m, rho_representation))),
        "rho_unitary" => ("rho_unitary", rho_unitary_fn(r), None),
        "sigma_r" => ("sigma_r", sigma_r_fn(r), Some(repr("sigma_r", r, m, sigma_r_representation))),
        "s" => ("s", s_fn(), Some(repr("s", 2, m, sigma_r_representation))),
        "c" => ("c", cyclic_fn(r), Some(repr("c", r, m, cyclic_representation))),
        "E" => ("E", e_fn(r), Some(repr("E", r, m, e_representation))),
        "A" => ("A", a_fn(r), Some(repr("A", r, m, a_representation))),
        "ramanujan" => ("ramanujan", ramanujan_fn(), Some(repr("ramanujan", 2, m, ramanujan_representation))),
        _ => {
            let f = classical(name, k)?;
            let static_name = CLASSICAL_NAMES.iter().find(|n| **n == name).copied().unwrap_or("classical");
            (static_name, f, None)
        }
    };
    Ok(CatalogEntry { name: static_name, arity: r, class: definitional.class(), definitional, representation })
}

/// The catalog function `name` at arity `r`.
pub fn function(name: &str, r: usize, k: Option<i64>) -> Result<ArithFn> {
    Ok(entry(name, r, k)?.definitional)
}

/// Every catalog entry admitting arity `r`.
pub fn entries_of_arity(r: usize) -> Vec<CatalogEntry> {
    let mut out = Vec::new();
    if r == 1 {
        for name in CLASSICAL_NAMES {
            out.push(entry(name, 1, None).expect("classical name"));
        }
    }
    for &(name, rule) in SEVERAL_NAMES {
        if rule.admits(r) && !(r == 1 && matches!(name, "one" | "delta")) {
            out.push(entry(name, r, None).expect("catalog name"));
        }
    }
    out
}
