//! Prefix expression language over the catalog, e.g. `dir(one, mu_r)`, `psi_lcm(at_gcd(sigma))`.
//!
//! Expressions are arity-polymorphic: names like `one` or `gcd` take the arity
//! of their context, which `build` supplies.

use crate::arith::{diagonal, from_one_variable_product, ArithFn, Class};
use crate::catalog::{self, Arity};
use crate::convolute::{convolute, lift, ConvoluteKind};
use crate::convolution::{convolve, inverse, mobius, ConvolutionKind};
use crate::error::{Error, Result};
use crate::numbers::rat;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Name { name: String, pos: usize },
    Int { value: i64, pos: usize },
    Call { name: String, pos: usize, args: Vec<Expr> },
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

fn perr(pos: usize, msg: impl Into<String>) -> Error {
    Error::Parse { pos, msg: msg.into() }
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn expr(&mut self) -> Result<Expr> {
        let start = {
            self.skip_ws();
            self.pos
        };
        let rest = &self.src[start..];
        let first = rest.chars().next().ok_or_else(|| perr(start, "unexpected end of input"))?;
        if first == '-' || first.is_ascii_digit() {
            let len = 1 + rest[1..].find(|c: char| !c.is_ascii_digit()).unwrap_or(rest.len() - 1);
            let value = rest[..len].parse::<i64>().map_err(|e| perr(start, format!("bad integer: {e}")))?;
            self.pos = start + len;
            return Ok(Expr::Int { value, pos: start });
        }
        if !(first.is_ascii_alphabetic() || first == '_') {
            return Err(perr(start, format!("unexpected '{first}'")));
        }
        let len = rest.find(|c: char| !(c.is_ascii_alphanumeric() || c == '_')).unwrap_or(rest.len());
        let name = rest[..len].to_string();
        self.pos = start + len;
        if self.peek() != Some('(') {
            return Ok(Expr::Name { name, pos: start });
        }
        self.pos += 1;
        let mut args = Vec::new();
        if self.peek() == Some(')') {
            return Err(perr(self.pos, "empty argument list"));
        }
        loop {
            args.push(self.expr()?);
            match self.peek() {
                Some(',') => self.pos += 1,
                Some(')') => {
                    self.pos += 1;
                    break;
                }
                Some(c) => return Err(perr(self.pos, format!("expected ',' or ')', found '{c}'"))),
                None => return Err(perr(self.pos, "unclosed '('")),
            }
        }
        Ok(Expr::Call { name, pos: start, args })
    }
}

/// Context for building: the box used by eager inverses.
#[derive(Debug, Clone, Copy)]
pub struct BuildContext {
    pub inverse_box: u64,
}

impl Default for BuildContext {
    fn default() -> Self {
        BuildContext { inverse_box: 12 }
    }
}

const MOBIUS_NAMES: &[(&str, ConvolutionKind)] = &[
    ("mu_r", ConvolutionKind::Dirichlet),
    ("mu_unitary_r", ConvolutionKind::Unitary),
    ("mu_gcd_r", ConvolutionKind::Gcd),
    ("mu_lcm_r", ConvolutionKind::Lcm),
    ("lambda_r", ConvolutionKind::Binomial),
];

const POINTWISE: &[&str] = &["mul", "add", "sub", "div"];

fn convolution_kind(name: &str) -> Option<ConvolutionKind> {
    match name {
        "dir" | "dirichlet" => Some(ConvolutionKind::Dirichlet),
        "unit" | "unitary" => Some(ConvolutionKind::Unitary),
        "gcd" => Some(ConvolutionKind::Gcd),
        "lcm" => Some(ConvolutionKind::Lcm),
        "binom" | "binomial" => Some(ConvolutionKind::Binomial),
        _ => None,
    }
}

impl Expr {
    pub fn parse(src: &str) -> Result<Expr> {
        let mut p = Parser { src, pos: 0 };
        let e = p.expr()?;
        if let Some(c) = p.peek() {
            return Err(perr(p.pos, format!("trailing input starting at '{c}'")));
        }
        Ok(e)
    }

    pub fn pos(&self) -> usize {
        match self {
            Expr::Name { pos, .. } | Expr::Int { pos, .. } | Expr::Call { pos, .. } => *pos,
        }
    }

    fn as_int(&self) -> Option<i64> {
        match self {
            Expr::Int { value, .. } => Some(*value),
            _ => None,
        }
    }

    /// Arity forced by the expression itself, if any.
    pub fn natural_arity(&self) -> Option<usize> {
        match self {
            Expr::Int { .. } => None,
            Expr::Name { name, .. } => match catalog::arity_rule(name) {
                Some(Arity::Fixed(k)) => Some(k),
                _ => None,
            },
            Expr::Call { name, args, .. } => {
                if name.starts_with("psi_") || name == "diag" || (args.len() == 1 && args[0].as_int().is_some()) {
                    return Some(1);
                }
                match name.as_str() {
                    "tensor" => Some(args.len()),
                    "lift" => args.get(1).and_then(Expr::as_int).map(|k| k as usize),
                    "at_gcd" | "at_lcm" | "mobius" => None,
                    "inv" => args.get(1).and_then(Expr::natural_arity),
                    _ => args.iter().find_map(Expr::natural_arity),
                }
            }
        }
    }

    /// The function at arity `r`.
    pub fn build(&self, r: usize, ctx: &BuildContext) -> Result<ArithFn> {
        if r == 0 {
            return Err(Error::NonPositive("arity".into()));
        }
        match self {
            Expr::Int { value, .. } => {
                let v = *value;
                let class = if v == 1 { Class::Completely } else { Class::General };
                Ok(ArithFn::new(v.to_string(), r, class, move |_| rat(v)))
            }
            Expr::Name { name, .. } => {
                if let Some(&(_, kind)) = MOBIUS_NAMES.iter().find(|(n, _)| n == name) {
                    return Ok(mobius(kind, r));
                }
                catalog::function(name, r, None)
            }
            Expr::Call { name, pos, args } => self.build_call(name, *pos, args, r, ctx),
        }
    }

    fn build_call(&self, name: &str, pos: usize, args: &[Expr], r: usize, ctx: &BuildContext) -> Result<ArithFn> {
        let arity_err = |want: &str| perr(pos, format!("{name} expects {want}, got {} argument(s)", args.len()));
        let need_one = || -> Result<()> {
            if r != 1 {
                return Err(Error::ArityMismatch { expected: r, found: 1 });
            }
            Ok(())
        };
        if let Some(kind) = convolution_kind(name) {
            if args.len() != 2 {
                return Err(arity_err("two functions"));
            }
            return convolve(kind, &args[0].build(r, ctx)?, &args[1].build(r, ctx)?);
        }
        if let Some(kind) = name.strip_prefix("psi_").and_then(ConvoluteKind::from_name) {
            need_one()?;
            let inner = match args {
                [f] => f.natural_arity().unwrap_or(2),
                [_, k] => k.as_int().filter(|&k| k >= 1).ok_or_else(|| perr(k.pos(), "arity must be a positive integer"))? as usize,
                _ => return Err(arity_err("a function and an optional arity")),
            };
            return convolute(kind, &args[0].build(inner, ctx)?);
        }
        if POINTWISE.contains(&name) {
            if args.len() != 2 {
                return Err(arity_err("two functions"));
            }
            let (f, g) = (args[0].build(r, ctx)?, args[1].build(r, ctx)?);
            return match name {
                "mul" => f.mul(&g),
                "add" => f.add(&g),
                "sub" => f.sub(&g),
                _ => f.div(&g),
            };
        }
        match name {
            "inv" => {
                let [kind, f] = args else { return Err(arity_err("a convolution name and a function")) };
                let kind = match kind {
                    Expr::Name { name, .. } => convolution_kind(name),
                    _ => None,
                }
                .ok_or_else(|| perr(kind.pos(), "expected dir, unit, gcd, lcm or binom"))?;
                inverse(kind, &f.build(r, ctx)?, ctx.inverse_box)
            }
            "mobius" => {
                let [Expr::Name { name: k, pos: kp }] = args else { return Err(arity_err("a convolution name")) };
                let kind = convolution_kind(k).ok_or_else(|| perr(*kp, "expected dir, unit, gcd, lcm or binom"))?;
                Ok(mobius(kind, r))
            }
            "lift" => {
                if let Some(k) = args.get(1).and_then(Expr::as_int) {
                    if k as usize != r {
                        return Err(Error::ArityMismatch { expected: r, found: k as usize });
                    }
                }
                if args.is_empty() || args.len() > 2 {
                    return Err(arity_err("a function and an optional arity"));
                }
                lift(&args[0].build(1, ctx)?, r)
            }
            "diag" => {
                need_one()?;
                let inner = match args {
                    [f] => f.natural_arity().unwrap_or(2),
                    [_, k] => k.as_int().filter(|&k| k >= 1).ok_or_else(|| perr(k.pos(), "arity must be a positive integer"))? as usize,
                    _ => return Err(arity_err("a function and an optional arity")),
                };
                Ok(diagonal(&args[0].build(inner, ctx)?))
            }
            "tensor" => {
                if args.len() != r {
                    return Err(Error::ArityMismatch { expected: r, found: args.len() });
                }
                let parts = args.iter().map(|a| a.build(1, ctx)).collect::<Result<Vec<_>>>()?;
                from_one_variable_product(&parts)
            }
            "at_gcd" | "at_lcm" => {
                let [g] = args else { return Err(arity_err("one function")) };
                let g = g.build(1, ctx)?;
                if name == "at_gcd" { g.of_gcd(r) } else { g.of_lcm(r) }
            }
            _ => {
                // catalog family with an integer parameter: sigma(2), jordan(3), power(2)
                if let [Expr::Int { value, .. }] = args {
                    need_one()?;
                    return catalog::classical(name, Some(*value));
                }
                if catalog::arity_rule(name).is_some() {
                    return Err(perr(pos, format!("{name} takes no function arguments")));
                }
                Err(Error::UnknownFunction(name.to_string()))
            }
        }
    }
}

/// Parses and builds at arity `r`.
pub fn build(src: &str, r: usize, ctx: &BuildContext) -> Result<ArithFn> {
    Expr::parse(src)?.build(r, ctx)
}

/// `r` from the expression if forced, else `default`.
pub fn build_natural(src: &str, default: usize, ctx: &BuildContext) -> Result<ArithFn> {
    let e = Expr::parse(src)?;
    let r = e.natural_arity().unwrap_or(default);
    e.build(r, ctx)
}
