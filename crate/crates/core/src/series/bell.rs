//! Truncated Bell series `f_(p)(x_1, .., x_r) = sum f(p^e) x^e`, every `e_i <= D`.

use std::fmt;

use num_traits::Zero;
use rug::Float;
use serde::Serialize;

use crate::arith::ArithFn;
use crate::convolution::{convolve, ConvolutionKind};
use crate::error::{Error, Result};
use crate::numbers::{is_prime, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BellSeries {
    pub p: u64,
    pub arity: usize,
    pub degree: u32,
    /// Dense table in mixed radix `D + 1`, first exponent most significant.
    coeffs: Vec<Rational>,
}

fn radix_index(e: &[u32], degree: u32) -> usize {
    e.iter().fold(0usize, |acc, &x| acc * (degree as usize + 1) + x as usize)
}

fn radix_digits(mut idx: usize, arity: usize, degree: u32) -> Vec<u32> {
    let base = degree as usize + 1;
    let mut e = vec![0u32; arity];
    for slot in e.iter_mut().rev() {
        *slot = (idx % base) as u32;
        idx /= base;
    }
    e
}

impl BellSeries {
    pub fn zero(p: u64, arity: usize, degree: u32) -> BellSeries {
        BellSeries { p, arity, degree, coeffs: vec![Rational::zero(); (degree as usize + 1).pow(arity as u32)] }
    }

    pub fn coeff(&self, e: &[u32]) -> &Rational {
        &self.coeffs[radix_index(e, self.degree)]
    }

    pub fn set(&mut self, e: &[u32], v: Rational) {
        let i = radix_index(e, self.degree);
        self.coeffs[i] = v;
    }

    /// `(exponents, coefficient)` in lexicographic order.
    pub fn terms(&self) -> impl Iterator<Item = (Vec<u32>, &Rational)> + '_ {
        self.coeffs.iter().enumerate().map(|(i, c)| (radix_digits(i, self.arity, self.degree), c))
    }

    fn compatible(&self, other: &BellSeries) -> Result<()> {
        if (self.p, self.arity, self.degree) != (other.p, other.arity, other.degree) {
            return Err(Error::SeriesMismatch(format!(
                "(p, r, D) = ({}, {}, {}) vs ({}, {}, {})",
                self.p, self.arity, self.degree, other.p, other.arity, other.degree
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &BellSeries) -> Result<BellSeries> {
        self.compatible(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(BellSeries { coeffs, ..self.clone() })
    }

    /// Value at `x`; the bridge to Euler factors takes `x_i = p^{-z_i}`.
    pub fn evaluate(&self, x: &[Float]) -> Float {
        let prec = x.first().map_or(64, Float::prec);
        let mut acc = Float::with_val(prec, 0);
        for (e, c) in self.terms() {
            if c.is_zero() {
                continue;
            }
            let mut t = crate::series::zeta::to_float(c, prec);
            for (xi, &k) in x.iter().zip(&e) {
                if k > 0 {
                    t *= Float::with_val(prec, rug::ops::Pow::pow(xi, k));
                }
            }
            acc += t;
        }
        acc
    }
}

impl fmt::Display for BellSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (e, c) in self.terms() {
            if !c.is_zero() {
                let e: Vec<String> = e.iter().map(u32::to_string).collect();
                writeln!(f, "({})\t{}", e.join(","), c)?;
            }
        }
        Ok(())
    }
}

/// JSON shape of a Bell series: nonzero coefficients only.
#[derive(Debug, Clone, Serialize)]
pub struct BellDump {
    pub p: u64,
    pub arity: usize,
    pub degree: u32,
    pub coefficients: Vec<(Vec<u32>, String)>,
}

impl From<&BellSeries> for BellDump {
    fn from(b: &BellSeries) -> BellDump {
        BellDump {
            p: b.p,
            arity: b.arity,
            degree: b.degree,
            coefficients: b.terms().filter(|(_, c)| !c.is_zero()).map(|(e, c)| (e, c.to_string())).collect(),
        }
    }
}

pub fn bell_series(f: &ArithFn, p: u64, degree: u32) -> Result<BellSeries> {
    if !f.class().is_multiplicative() {
        return Err(Error::NotMultiplicative(f.name().to_string()));
    }
    if !is_prime(p) {
        return Err(Error::InvalidArgument(format!("{p} is not prime")));
    }
    let lf = f.local_factor()?;
    let mut out = BellSeries::zero(p, f.arity(), degree);
    for i in 0..out.coeffs.len() {
        let e = radix_digits(i, f.arity(), degree);
        out.coeffs[i] = lf.value(p, &e);
    }
    Ok(out)
}

/// Truncated product in the box `e_i <= D`.
pub fn bell_multiply(a: &BellSeries, b: &BellSeries) -> Result<BellSeries> {
    a.compatible(b)?;
    let mut out = BellSeries::zero(a.p, a.arity, a.degree);
    for (i, ca) in a.coeffs.iter().enumerate() {
        if ca.is_zero() {
            continue;
        }
        let ea = radix_digits(i, a.arity, a.degree);
        for (j, cb) in b.coeffs.iter().enumerate() {
            if cb.is_zero() {
                continue;
            }
            let eb = radix_digits(j, a.arity, a.degree);
            let e: Vec<u32> = ea.iter().zip(&eb).map(|(x, y)| x + y).collect();
            if e.iter().all(|&x| x <= a.degree) {
                let k = radix_index(&e, a.degree);
                out.coeffs[k] += ca * cb;
            }
        }
    }
    Ok(out)
}

/// `(f x g)_(p) = f_(p) + g_(p)` at degrees `1..=D`; degree 0 is excluded.
pub fn unitary_bell_sum_check(f: &ArithFn, g: &ArithFn, p: u64, degree: u32) -> Result<bool> {
    for h in [f, g] {
        if h.arity() != 1 {
            return Err(Error::ArityMismatch { expected: 1, found: h.arity() });
        }
    }
    let prod = bell_series(&convolve(ConvolutionKind::Unitary, f, g)?, p, degree)?;
    let sum = bell_series(f, p, degree)?.add(&bell_series(g, p, degree)?)?;
    Ok((1..=degree).all(|e| prod.coeff(&[e]) == sum.coeff(&[e])))
}
