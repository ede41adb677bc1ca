//! Named identities checked exhaustively over a box, the backing of `verify`.

use serde::Serialize;

use crate::arith::{first_disagreement, ArithFn, Class};
use crate::catalog::classical::classical;
use crate::catalog::several::{gcd_fn, one_fn, sigma_r_fn, tau_of_product};
use crate::catalog::{entry, function};
use crate::convolute::{
    a_closed, b_closed, convolute, g_gcd_convolutes, h_closed, homomorphism_check, lcm_convolute_identities, named_convolute,
    CountFunction, ConvoluteKind,
};
use crate::convolution::{binomial_iso_check, convolve, inverse, lcm_mobius_local, lcm_mobius_prime_power_formula, lcm_via_dirichlet, mobius, ConvolutionKind};
use crate::error::{Error, Result};
use crate::numbers::{big, checked_pow, rat};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Counterexample {
    pub check: String,
    pub args: Vec<u64>,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub identity: String,
    pub bound: u64,
    pub arity: usize,
    pub pass: bool,
    pub checks: usize,
    pub counterexample: Option<Counterexample>,
}

/// `(name, summary)` of every named identity.
pub const IDENTITIES: &[(&str, &str)] = &[
    ("rho-representation", "rho: definition vs divisor-sum representation"),
    ("rho-divisor-sum", "(rho * 1_r)(n) = tau(n_1...n_r)"),
    ("c-routes", "cyclic subgroup count: element orders vs phi-representation"),
    ("s-routes", "subgroup count s(m,n): divisor sum vs phi-representation"),
    ("sigma_r-routes", "sigma(n_1..n_r): gcd sum vs phi-representation"),
    ("E-routes", "E: Ramanujan-sum definition vs representation"),
    ("A-routes", "A: definition vs representation"),
    ("ramanujan-routes", "c_n(k): closed evaluation vs divisor sum"),
    ("lcm-via-dirichlet", "f (+) g = ((f*1)(g*1)) * mu_r"),
    ("mobius-lcm-formula", "lcm Mobius function vs computed inverse of 1_r at prime powers"),
    ("mobius-inverts-one", "each Mobius function inverts 1_r under its convolution"),
    ("binomial-isomorphism", "f o g = xi_r ((f/xi_r) * (g/xi_r))"),
    ("counting-functions", "tau_r, H_r, N_r, M_r, Q_r: convolutes of 1_r vs closed forms"),
    ("gcd-convolutes", "Dirichlet and lcm convolutes of g(gcd) vs their closed routes"),
    ("lcm-convolute-corollaries", "the lcm convolutes of g(gcd) for g = id, tau, phi, sigma, beta, mu, lambda"),
    ("ramanujan-dir-convolute", "a(n) = sqrt(n) on squares, else 0"),
    ("ramanujan-unit-convolute", "b(n) = [n squarefull]"),
    ("ramanujan-lcm-convolute", "h(n) = phi(n)"),
    ("convolute-homomorphisms", "Psi maps each r-variable convolution to its one-variable image"),
    ("bell-unitary-sum", "(f x g)_(p) = f_(p) + g_(p) at positive degrees"),
];

struct Run {
    identity: String,
    bound: u64,
    arity: usize,
    checks: usize,
    counterexample: Option<Counterexample>,
}

impl Run {
    fn new(identity: &str, bound: u64, arity: usize) -> Run {
        Run { identity: identity.to_string(), bound, arity, checks: 0, counterexample: None }
    }

    fn compare(&mut self, label: &str, lhs: &ArithFn, rhs: &ArithFn, bound: u64) -> Result<()> {
        if self.counterexample.is_some() {
            return Ok(());
        }
        self.checks += 1;
        if let Some(d) = first_disagreement(lhs, rhs, bound)? {
            self.counterexample = Some(Counterexample { check: label.to_string(), args: d.args, lhs: d.lhs.to_string(), rhs: d.rhs.to_string() });
        }
        Ok(())
    }

    fn point(&mut self, label: &str, args: Vec<u64>, lhs: String, rhs: String) {
        if self.counterexample.is_some() {
            return;
        }
        self.checks += 1;
        if lhs != rhs {
            self.counterexample = Some(Counterexample { check: label.to_string(), args, lhs, rhs });
        }
    }

    fn report(self) -> VerifyReport {
        VerifyReport {
            pass: self.counterexample.is_none(),
            identity: self.identity,
            bound: self.bound,
            arity: self.arity,
            checks: self.checks,
            counterexample: self.counterexample,
        }
    }
}

fn routes(run: &mut Run, name: &str, r: usize, bound: u64) -> Result<()> {
    let e = entry(name, r, None)?;
    let repr = e.representation.ok_or_else(|| Error::UnknownIdentity(format!("{name} has no second route")))?;
    run.compare(name, &e.definitional, &repr, bound)
}

fn one_var(label: &str, f: impl Fn(u64) -> crate::numbers::Rational + Send + Sync + 'static) -> ArithFn {
    ArithFn::new(label, 1, Class::General, move |t| f(t[0]))
}

/// Checks identity `name` at arity `r` over `[1,B]^r` (or `n <= B` for one-variable identities).
pub fn verify_identity(name: &str, r: usize, bound: u64) -> Result<VerifyReport> {
    if bound == 0 || r == 0 {
        return Err(Error::NonPositive("box and arity".into()));
    }
    let mut run = Run::new(name, bound, r);
    match name {
        "rho-representation" => routes(&mut run, "rho", r.max(2), bound)?,
        "rho-divisor-sum" => {
            let r = r.max(2);
            let lhs = convolve(ConvolutionKind::Dirichlet, &function("rho", r, None)?, &one_fn(r))?;
            let rhs = ArithFn::new("tau(prod)", r, Class::General, |t| rat(tau_of_product(t) as i64));
            run.compare(name, &lhs, &rhs, bound)?;
        }
        "c-routes" => routes(&mut run, "c", r, bound)?,
        "s-routes" => routes(&mut run, "s", 2, bound)?,
        "sigma_r-routes" => routes(&mut run, "sigma_r", r, bound)?,
        "E-routes" => routes(&mut run, "E", r, bound)?,
        "A-routes" => routes(&mut run, "A", r, bound)?,
        "ramanujan-routes" => routes(&mut run, "ramanujan", 2, bound)?,
        "lcm-via-dirichlet" => {
            let pairs = [(gcd_fn(r), sigma_r_fn(r)), (function("E", r, None)?, crate::random::general(11, r))];
            for (f, g) in &pairs {
                run.compare(&format!("{} (+) {}", f.name(), g.name()), &convolve(ConvolutionKind::Lcm, f, g)?, &lcm_via_dirichlet(f, g)?, bound)?;
            }
        }
        "mobius-lcm-formula" => {
            let computed = inverse(ConvolutionKind::Lcm, &one_fn(r), 2)?;
            let top = bound.min(6) as u32;
            for p in [2u64, 3, 5] {
                let lists: Vec<Vec<u64>> = vec![(0..=top as u64).collect(); r];
                let mut points = Vec::new();
                crate::numbers::for_each_combination(&lists, |nu| points.push(nu.to_vec()));
                for nu in points {
                    let nu32: Vec<u32> = nu.iter().map(|&v| v as u32).collect();
                    let args: Vec<u64> = nu32.iter().map(|&v| checked_pow(p, v).expect("small prime power")).collect();
                    let got = computed.value(&args);
                    run.point("local formula", args.clone(), lcm_mobius_local(&nu32).to_string(), got.to_string());
                    if nu32.iter().all(|&v| v >= 1) {
                        run.point("printed formula", args, lcm_mobius_prime_power_formula(&nu32).to_string(), got.to_string());
                    }
                }
            }
        }
        "mobius-inverts-one" => {
            for kind in ConvolutionKind::ALL {
                let h = convolve(kind, &mobius(kind, r), &one_fn(r))?;
                run.compare(kind.name(), &h, &crate::convolution::identity(r), bound)?;
            }
        }
        "binomial-isomorphism" => {
            let pairs = [(gcd_fn(r), crate::random::general(3, r)), (crate::random::multiplicative(5, r), sigma_r_fn(r))];
            for (f, g) in &pairs {
                run.checks += 1;
                if !binomial_iso_check(f, g, bound)? && run.counterexample.is_none() {
                    let lhs = convolve(ConvolutionKind::Binomial, f, g)?;
                    let xi = crate::catalog::several::xi_fn(r);
                    let rhs = xi.mul(&convolve(ConvolutionKind::Dirichlet, &f.div(&xi)?, &g.div(&xi)?)?)?;
                    run.compare("binomial", &lhs, &rhs, bound)?;
                }
            }
        }
        "counting-functions" => {
            let r = r.max(2);
            for count in CountFunction::ALL {
                let kind = count.convolute_kind();
                let direct = crate::convolute::convolute_definitional(kind, &one_fn(r));
                let closed = one_var("closed", move |n| big(count.closed_form(r, n)));
                run.compare(&format!("{count:?} closed"), &direct, &closed, bound)?;
                if count.sum_form(r, 1).is_some() {
                    let sum = one_var("sum", move |n| big(count.sum_form(r, n).expect("has sum form")));
                    run.compare(&format!("{count:?} sum"), &direct, &sum, bound)?;
                }
            }
        }
        "gcd-convolutes" => {
            let r = r.max(2);
            for g in ["id", "phi", "tau", "mu", "sigma", "lambda"] {
                let routes = g_gcd_convolutes(&classical(g, None)?, r)?;
                run.compare(&format!("dir {g}"), &routes.dir_direct, &routes.dir_closed, bound)?;
                run.compare(&format!("lcm {g}"), &routes.lcm_direct, &routes.lcm_closed, bound)?;
            }
        }
        "lcm-convolute-corollaries" => {
            let r = r.max(2);
            for n in 1..=bound {
                for c in lcm_convolute_identities(n, r)? {
                    run.point(&c.name, vec![n], c.lhs, c.rhs);
                }
            }
        }
        "ramanujan-dir-convolute" | "ramanujan-unit-convolute" | "ramanujan-lcm-convolute" => {
            let (conv, closed): (&str, fn(u64) -> u64) = match name {
                "ramanujan-dir-convolute" => ("a", a_closed),
                "ramanujan-unit-convolute" => ("b", b_closed),
                _ => ("h", h_closed),
            };
            // the per-prime route: ramanujan carries its local factor
            let fast = convolute(
                match conv {
                    "a" => ConvoluteKind::Dir,
                    "b" => ConvoluteKind::Unit,
                    _ => ConvoluteKind::Lcm,
                },
                &crate::catalog::several::ramanujan_fn(),
            )?;
            let closed_fn = one_var(conv, move |n| rat(closed(n) as i64));
            run.compare(conv, &fast, &closed_fn, bound)?;
            run.compare(&format!("{conv} enumerated"), &named_convolute(conv, 2)?, &closed_fn, bound.min(300))?;
        }
        "convolute-homomorphisms" => {
            let r = r.max(2);
            for seed in 0..3u64 {
                let f = crate::random::multiplicative(seed, r);
                let g = crate::random::multiplicative(seed + 100, r);
                for kind in ConvoluteKind::ALL {
                    run.checks += 1;
                    if !homomorphism_check(kind, &f, &g, bound)? && run.counterexample.is_none() {
                        run.counterexample = Some(Counterexample {
                            check: format!("psi_{}", kind.name()),
                            args: vec![],
                            lhs: f.name().to_string(),
                            rhs: g.name().to_string(),
                        });
                    }
                }
            }
        }
        "bell-unitary-sum" => {
            let names = ["one", "id", "sigma", "phi", "mu", "tau"];
            for a in names {
                for b in names {
                    for p in [2u64, 3, 5] {
                        run.checks += 1;
                        let ok = crate::series::bell::unitary_bell_sum_check(&classical(a, None)?, &classical(b, None)?, p, bound.min(8) as u32)?;
                        if !ok && run.counterexample.is_none() {
                            run.counterexample = Some(Counterexample { check: format!("{a} x {b}"), args: vec![p], lhs: "f x g".into(), rhs: "f + g".into() });
                        }
                    }
                }
            }
        }
        _ => return Err(Error::UnknownIdentity(name.to_string())),
    }
    Ok(run.report())
}

/// Two expressions at arity `r`, compared on `[1,B]^r`.
pub fn verify_pair(lhs: &ArithFn, rhs: &ArithFn, bound: u64) -> Result<VerifyReport> {
    if lhs.arity() != rhs.arity() {
        return Err(Error::ArityMismatch { expected: lhs.arity(), found: rhs.arity() });
    }
    let mut run = Run::new(&format!("{} = {}", lhs.name(), rhs.name()), bound, lhs.arity());
    run.compare("pair", lhs, rhs, bound)?;
    Ok(run.report())
}
