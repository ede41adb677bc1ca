//! Convolute operators collapsing a function of r variables to one variable.
//!
//! `convolute` enumerates per prime (compositions of `v_p(n)` into r parts,
//! or tuples with maximum `v_p(n)` for the lcm kind) when the input is
//! multiplicative; `convolute_definitional` enumerates ordered r-tuples globally
//! and serves as the oracle.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{first_disagreement, ArithFn, Class, LocalFactor};
use crate::catalog::classical::{classical, mu, phi, tau, tau_k};
use crate::catalog::several::{gcd_fn, lcm_fn, one_fn, ramanujan_fn};
use crate::convolution::{convolve, ConvolutionKind};
use crate::error::{Error, Result};
use crate::numbers::{big, binomial, factor, factorial, iroot, isqrt, rat, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConvoluteKind {
    Dir,
    Unit,
    Gcd,
    Lcm,
    Binom,
}

impl ConvoluteKind {
    pub const ALL: [ConvoluteKind; 5] = [ConvoluteKind::Dir, ConvoluteKind::Unit, ConvoluteKind::Gcd, ConvoluteKind::Lcm, ConvoluteKind::Binom];

    pub fn name(self) -> &'static str {
        match self {
            ConvoluteKind::Dir => "dir",
            ConvoluteKind::Unit => "unit",
            ConvoluteKind::Gcd => "gcd",
            ConvoluteKind::Lcm => "lcm",
            ConvoluteKind::Binom => "binom",
        }
    }

    pub fn from_name(s: &str) -> Option<ConvoluteKind> {
        ConvoluteKind::ALL.into_iter().find(|k| k.name() == s || (s == "dirichlet" && *k == ConvoluteKind::Dir))
    }

    /// Convolution on r variables whose image under this convolute is `target_kind`.
    pub fn source_convolution(self) -> ConvolutionKind {
        match self {
            ConvoluteKind::Dir => ConvolutionKind::Dirichlet,
            ConvoluteKind::Unit => ConvolutionKind::Unitary,
            ConvoluteKind::Gcd => ConvolutionKind::Gcd,
            ConvoluteKind::Lcm => ConvolutionKind::Lcm,
            ConvoluteKind::Binom => ConvolutionKind::Binomial,
        }
    }

    /// One-variable convolution the image lands in; the gcd convolute maps to the unitary one.
    pub fn target_convolution(self) -> ConvolutionKind {
        match self {
            ConvoluteKind::Gcd => ConvolutionKind::Unitary,
            other => other.source_convolution(),
        }
    }
}

/// Visits `(d, weight)` for every ordered r-tuple admitted by `kind` at `n`.
pub fn for_each_convolute_tuple(kind: ConvoluteKind, r: usize, n: u64, mut visit: impl FnMut(&[u64], &BigInt)) {
    let one = BigInt::one();
    match kind {
        ConvoluteKind::Lcm => {
            let divs = factor(n).divisors();
            let lists = vec![divs; r];
            crate::numbers::for_each_combination(&lists, |d| {
                if d.iter().fold(1u64, |a, &b| a.lcm(&b)) == n {
                    visit(d, &one);
                }
            });
        }
        _ => {
            let nfac = factor(n);
            let mut cur = Vec::with_capacity(r);
            ordered_factorizations(n, r, &mut cur, &mut |d| {
                let admissible = match kind {
                    ConvoluteKind::Unit => (0..r).all(|i| (i + 1..r).all(|j| d[i].gcd(&d[j]) == 1)),
                    ConvoluteKind::Gcd => d.iter().fold(0u64, |a, &b| a.gcd(&b)) == 1,
                    _ => true,
                };
                if !admissible {
                    return;
                }
                if kind == ConvoluteKind::Binom {
                    let mut w = BigInt::one();
                    for &(p, nu) in &nfac.factors {
                        let mut den = BigInt::one();
                        for &x in d {
                            den *= factorial(factor(x).exponent(p) as u64);
                        }
                        w *= factorial(nu as u64) / den;
                    }
                    visit(d, &w);
                } else {
                    visit(d, &one);
                }
            });
        }
    }
}

fn ordered_factorizations(n: u64, r: usize, cur: &mut Vec<u64>, visit: &mut dyn FnMut(&[u64])) {
    if cur.len() + 1 == r {
        cur.push(n);
        visit(cur);
        cur.pop();
        return;
    }
    for d in factor(n).divisors() {
        cur.push(d);
        ordered_factorizations(n / d, r, cur, visit);
        cur.pop();
    }
}

/// Global enumeration of the convolute sum, for any `f`.
pub fn convolute_definitional(kind: ConvoluteKind, f: &ArithFn) -> ArithFn {
    let r = f.arity();
    if r == 1 {
        return f.clone();
    }
    let g = f.clone();
    ArithFn::new(format!("psi_{}:definitional({})", kind.name(), f.name()), 1, Class::General, move |t| {
        let mut acc = Rational::zero();
        for_each_convolute_tuple(kind, r, t[0], |d, w| {
            let v = g.value(d);
            if !v.is_zero() {
                acc += Rational::from_integer(w.clone()) * v;
            }
        });
        acc
    })
    .memoized()
}

/// Exponent tuples at one prime: `visit(a, weight)`.
fn for_each_local_tuple(kind: ConvoluteKind, r: usize, nu: u32, visit: &mut dyn FnMut(&[u32], &BigInt)) {
    let one = BigInt::one();
    match kind {
        ConvoluteKind::Unit => {
            for i in 0..r {
                let mut a = vec![0u32; r];
                a[i] = nu;
                visit(&a, &one);
            }
        }
        ConvoluteKind::Lcm => {
            let lists: Vec<Vec<u64>> = vec![(0..=nu as u64).collect(); r];
            crate::numbers::for_each_combination(&lists, |a| {
                if a.iter().copied().max() == Some(nu as u64) {
                    let a: Vec<u32> = a.iter().map(|&x| x as u32).collect();
                    visit(&a, &one);
                }
            });
        }
        _ => {
            let mut cur = Vec::with_capacity(r);
            compositions(nu, r, &mut cur, &mut |a| match kind {
                ConvoluteKind::Gcd if a.iter().all(|&x| x > 0) => {}
                ConvoluteKind::Binom => {
                    let den: BigInt = a.iter().map(|&x| factorial(x as u64)).product();
                    visit(a, &(factorial(nu as u64) / den));
                }
                _ => visit(a, &one),
            });
        }
    }
}

fn compositions(nu: u32, r: usize, cur: &mut Vec<u32>, visit: &mut dyn FnMut(&[u32])) {
    if cur.len() + 1 == r {
        cur.push(nu);
        visit(cur);
        cur.pop();
        return;
    }
    for a in 0..=nu {
        cur.push(a);
        compositions(nu - a, r, cur, visit);
        cur.pop();
    }
}

/// `Psi_kind(f)`; per-prime composition for multiplicative `f`, global otherwise.
pub fn convolute(kind: ConvoluteKind, f: &ArithFn) -> Result<ArithFn> {
    let r = f.arity();
    if r == 1 {
        return Ok(f.clone());
    }
    if !f.class().is_multiplicative() {
        return Ok(convolute_definitional(kind, f).renamed(format!("psi_{}({})", kind.name(), f.name())));
    }
    let lf = f.local_factor()?;
    let local = LocalFactor::new(1, move |p, nu| {
        let mut acc = Rational::zero();
        for_each_local_tuple(kind, r, nu[0], &mut |a, w| {
            let v = lf.value(p, a);
            if !v.is_zero() {
                acc += Rational::from_integer(w.clone()) * v;
            }
        });
        acc
    });
    let class = if kind == ConvoluteKind::Binom && f.class() == Class::Completely { Class::Completely } else { Class::Multiplicative };
    Ok(ArithFn::from_local(format!("psi_{}({})", kind.name(), f.name()), class, local).memoized())
}

/// `F(n, 1, .., 1) = f(n)` and zero elsewhere.
pub fn lift(f: &ArithFn, r: usize) -> Result<ArithFn> {
    if f.arity() != 1 {
        return Err(Error::ArityMismatch { expected: 1, found: f.arity() });
    }
    let g = f.clone();
    let out = ArithFn::new(format!("lift({}, {r})", f.name()), r, f.class(), move |t| {
        if t[1..].iter().all(|&x| x == 1) { g.value(&t[..1]) } else { Rational::zero() }
    });
    if f.class().is_multiplicative() {
        let l = f.local_factor()?;
        return Ok(out.with_local(LocalFactor::new(r, move |p, nu| {
            if nu[1..].iter().all(|&e| e == 0) { l.value(p, &nu[..1]) } else { Rational::zero() }
        })));
    }
    Ok(out)
}

/// The counting functions: number of terms of each convolute sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CountFunction {
    /// `tau_r(n) = prod_p C(v + r - 1, r - 1)`
    Tau,
    /// `H_r(n) = r^omega(n)`
    H,
    /// `N_r(n) = prod_p (C(v + r - 1, r - 1) - C(v - 1, r - 1))`
    N,
    /// `M_r(n) = prod_p ((v + 1)^r - v^r)`
    M,
    /// `Q_r(n) = r^Omega(n)`
    Q,
}

impl CountFunction {
    pub const ALL: [CountFunction; 5] = [CountFunction::Tau, CountFunction::H, CountFunction::N, CountFunction::M, CountFunction::Q];

    pub fn convolute_kind(self) -> ConvoluteKind {
        match self {
            CountFunction::Tau => ConvoluteKind::Dir,
            CountFunction::H => ConvoluteKind::Unit,
            CountFunction::N => ConvoluteKind::Gcd,
            CountFunction::M => ConvoluteKind::Lcm,
            CountFunction::Q => ConvoluteKind::Binom,
        }
    }

    pub fn closed_form(self, r: usize, n: u64) -> BigInt {
        let fac = factor(n);
        let r64 = r as u64;
        match self {
            CountFunction::Tau => tau_k(r as u32, n),
            CountFunction::H => BigInt::from(r).pow(fac.omega()),
            CountFunction::N => fac
                .factors
                .iter()
                .map(|&(_, v)| {
                    let v = v as u64;
                    binomial(v + r64 - 1, r64 - 1) - if v >= 1 { binomial(v - 1, r64 - 1) } else { BigInt::zero() }
                })
                .product(),
            CountFunction::M => fac
                .factors
                .iter()
                .map(|&(_, v)| BigInt::from(v + 1).pow(r as u32) - BigInt::from(v).pow(r as u32))
                .product(),
            CountFunction::Q => BigInt::from(r).pow(fac.big_omega()),
        }
    }

    /// Second closed route where one is known: `N_r = sum_{a^r b = n} mu(a) tau_r(b)`,
    /// `M_r = sum_{ab = n} mu(a) tau(b)^r`.
    pub fn sum_form(self, r: usize, n: u64) -> Option<BigInt> {
        match self {
            CountFunction::N => Some(
                (1..=iroot(n, r as u32))
                    .filter(|a| n.is_multiple_of(a.pow(r as u32)))
                    .map(|a| BigInt::from(mu(a)) * tau_k(r as u32, n / a.pow(r as u32)))
                    .sum(),
            ),
            CountFunction::M => Some(
                factor(n).divisors().into_iter().map(|a| BigInt::from(mu(a)) * BigInt::from(tau(n / a)).pow(r as u32)).sum(),
            ),
            _ => None,
        }
    }
}

/// Closed-form one-variable functions `tau_r, H_r, N_r, M_r, Q_r`.
pub fn count_functions(r: usize) -> Vec<(CountFunction, ArithFn)> {
    CountFunction::ALL
        .into_iter()
        .map(|c| {
            let f = ArithFn::new(format!("{c:?}_{r}"), 1, Class::Multiplicative, move |t| big(c.closed_form(r, t[0])));
            (c, f)
        })
        .collect()
}

/// Four evaluators for `sum g(gcd(d_1..d_r))` over `d_1...d_r = n` and over `lcm = n`.
#[derive(Debug, Clone)]
pub struct GcdConvoluteRoutes {
    pub dir_direct: ArithFn,
    pub dir_closed: ArithFn,
    pub lcm_direct: ArithFn,
    pub lcm_closed: ArithFn,
}

/// Both routes for the Dirichlet and lcm convolutes of `g(gcd)`.
pub fn g_gcd_convolutes(g: &ArithFn, r: usize) -> Result<GcdConvoluteRoutes> {
    if r < 2 {
        return Err(Error::InvalidArgument("g_gcd_convolutes needs r >= 2".into()));
    }
    let composite = g.of_gcd(r)?;
    let mu1 = classical("mu", None)?;
    let mu_g = convolve(ConvolutionKind::Dirichlet, &mu1, g)?;
    let mg = mu_g.clone();
    let dir_closed = ArithFn::new(format!("dir_closed({})", g.name()), 1, Class::General, move |t| {
        let n = t[0];
        let mut acc = Rational::zero();
        for a in 1..=iroot(n, r as u32) {
            let ar = a.pow(r as u32);
            if n % ar == 0 {
                acc += mg.value(&[a]) * big(tau_k(r as u32, n / ar));
            }
        }
        acc
    });
    let tau_pow = {
        let r = r as u32;
        ArithFn::new(format!("tau^{r}"), 1, Class::Multiplicative, move |t| big(BigInt::from(tau(t[0])).pow(r)))
    };
    let lcm_closed = convolve(ConvolutionKind::Dirichlet, &convolve(ConvolutionKind::Dirichlet, &mu_g, &mu1)?, &tau_pow)?;
    Ok(GcdConvoluteRoutes {
        dir_direct: convolute_definitional(ConvoluteKind::Dir, &composite),
        dir_closed,
        lcm_direct: convolute_definitional(ConvoluteKind::Lcm, &composite),
        lcm_closed,
    })
}

/// Names of the one-variable convolutes of special functions.
pub const NAMED_CONVOLUTES: &[&str] = &["g", "ell", "parabolic", "cyc", "a", "b", "h"];

/// `g_r`, `ell_r`, `N`, `c`, `a`, `b`, `h` by definitional enumeration; `r` applies to `g` and `ell`.
pub fn named_convolute(name: &str, r: usize) -> Result<ArithFn> {
    let phi = classical("phi", None)?;
    let f = match name {
        "g" => convolute_definitional(ConvoluteKind::Dir, &gcd_fn(r)),
        "ell" => convolute_definitional(ConvoluteKind::Dir, &lcm_fn(r)),
        "parabolic" => convolute_definitional(ConvoluteKind::Dir, &phi.of_gcd(2)?),
        "cyc" => convolute_definitional(ConvoluteKind::Lcm, &gcd_fn(2)),
        "a" => convolute_definitional(ConvoluteKind::Dir, &ramanujan_fn()),
        "b" => convolute_definitional(ConvoluteKind::Unit, &ramanujan_fn()),
        "h" => convolute_definitional(ConvoluteKind::Lcm, &ramanujan_fn()),
        _ => return Err(Error::UnknownFunction(name.to_string())),
    };
    let label = if matches!(name, "g" | "ell") { format!("{name}_{r}") } else { name.to_string() };
    Ok(f.renamed(label).with_class(Class::Multiplicative))
}

/// Values of the named convolutes at `n` (with `r` for `g_r`, `ell_r`).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NamedConvoluteValues {
    pub n: u64,
    pub g_r: String,
    pub ell_r: String,
    pub parabolic: String,
    pub cyc: String,
    pub a: String,
    pub b: String,
    pub h: String,
}

pub fn named_convolutes(n: u64, r: usize) -> Result<NamedConvoluteValues> {
    let v = |name: &str| -> Result<String> { Ok(named_convolute(name, r)?.value(&[n]).to_string()) };
    Ok(NamedConvoluteValues {
        n,
        g_r: v("g")?,
        ell_r: v("ell")?,
        parabolic: v("parabolic")?,
        cyc: v("cyc")?,
        a: v("a")?,
        b: v("b")?,
        h: v("h")?,
    })
}

/// `a(n) = sqrt(n)` on squares, else 0.
pub fn a_closed(n: u64) -> u64 {
    let s = isqrt(n);
    if s * s == n { s } else { 0 }
}

/// `b(n) = 1` on squarefull `n`.
pub fn b_closed(n: u64) -> u64 {
    factor(n).is_squarefull() as u64
}

/// `h(n) = phi(n)`
pub fn h_closed(n: u64) -> u64 {
    phi(n)
}

/// `g_r(n) = sum_{a^r b = n} phi(a) tau_r(b)`
pub fn g_closed(r: usize, n: u64) -> BigInt {
    (1..=iroot(n, r as u32))
        .filter(|a| n.is_multiple_of(a.pow(r as u32)))
        .map(|a| BigInt::from(phi(a)) * tau_k(r as u32, n / a.pow(r as u32)))
        .sum()
}

/// One lcm-convolute identity at a point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub n: u64,
    pub lhs: String,
    pub rhs: String,
    pub holds: bool,
}

fn check(name: &str, n: u64, lhs: Rational, rhs: Rational) -> IdentityCheck {
    IdentityCheck { name: name.to_string(), n, holds: lhs == rhs, lhs: lhs.to_string(), rhs: rhs.to_string() }
}

/// The lcm-convolute corollaries at `n`: two for `r` variables, five for pairs
/// (the sigma identity carries two right-hand sides).
pub fn lcm_convolute_identities(n: u64, r: usize) -> Result<Vec<IdentityCheck>> {
    let gcd_sum = |g: &ArithFn, r: usize| -> Result<Rational> {
        Ok(convolute_definitional(ConvoluteKind::Lcm, &g.of_gcd(r)?).value(&[n]))
    };
    let id = classical("id", None)?;
    let tau_f = classical("tau", None)?;
    let phi_f = classical("phi", None)?;
    let psi_f = classical("psi", None)?;
    let sigma_f = classical("sigma", None)?;
    let beta_f = classical("beta", None)?;
    let mu_f = classical("mu", None)?;
    let lambda_f = classical("lambda", None)?;
    let sq = |f: &ArithFn| f.mul(f);
    let dir = |f: &ArithFn, g: &ArithFn| convolve(ConvolutionKind::Dirichlet, f, g);

    let m_r = ArithFn::new("M_r", 1, Class::Multiplicative, move |t| big(CountFunction::M.closed_form(r, t[0])));
    let mut out = vec![
        check("lcm-gcd-sum", n, gcd_sum(&id, r)?, dir(&phi_f, &m_r)?.value(&[n])),
        check("lcm-tau-gcd", n, gcd_sum(&tau_f, r)?, big(BigInt::from(tau(n)).pow(r as u32))),
        check("lcm-phi-gcd", n, gcd_sum(&phi_f, 2)?, psi_f.value(&[n])),
        check("lcm-sigma-gcd-tau-psi", n, gcd_sum(&sigma_f, 2)?, dir(&tau_f, &psi_f)?.value(&[n])),
        check("lcm-sigma-gcd-phi-tau2", n, gcd_sum(&sigma_f, 2)?, dir(&phi_f, &sq(&tau_f)?)?.value(&[n])),
        check("lcm-beta-gcd", n, gcd_sum(&beta_f, 2)?, sigma_f.value(&[n])),
        check("lcm-mu-gcd", n, gcd_sum(&mu_f, 2)?, rat(crate::catalog::classical::is_squarefree(n) as i64)),
        check("lcm-lambda-gcd", n, gcd_sum(&lambda_f, 2)?, rat(1)),
    ];
    out.push(check("lcm-sigma-gcd-subgroups", n, gcd_sum(&sigma_f, 2)?, crate::catalog::several::s_fn().value(&[n, n])));
    Ok(out)
}

/// Whether the homomorphism equation for `kind` holds on `[1,B]`.
pub fn homomorphism_check(kind: ConvoluteKind, f: &ArithFn, g: &ArithFn, bound: u64) -> Result<bool> {
    let lhs = convolute_definitional(kind, &convolve(kind.source_convolution(), f, g)?);
    let rhs = convolve(kind.target_convolution(), &convolute_definitional(kind, f), &convolute_definitional(kind, g))?;
    Ok(first_disagreement(&lhs, &rhs, bound)?.is_none())
}

/// `Psi_lcm(f) = diag(f * 1_r) * mu`.
pub fn lcm_convolute_via_dirichlet(f: &ArithFn) -> Result<ArithFn> {
    let r = f.arity();
    let inner = convolve(ConvolutionKind::Dirichlet, f, &one_fn(r))?;
    let diag = crate::arith::diagonal(&inner);
    convolve(ConvolutionKind::Dirichlet, &diag, &classical("mu", None)?)
}
