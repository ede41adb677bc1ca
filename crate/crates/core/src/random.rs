//! Deterministic pseudo-random arithmetic functions, hashed from a seed and the arguments.

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

use crate::arith::{from_one_variable_product, ArithFn, Class, LocalFactor};
use crate::numbers::rat;

fn hash_of(parts: impl Hash) -> u64 {
    let mut h = DefaultHasher::new();
    parts.hash(&mut h);
    h.finish()
}

/// Integer in `[-spread, spread]`.
fn small(seed: u64, salt: &str, key: impl Hash, spread: i64) -> i64 {
    (hash_of((seed, salt, key)) % (2 * spread as u64 + 1)) as i64 - spread
}

/// Values in `[-3, 3]`, no structure.
pub fn general(seed: u64, r: usize) -> ArithFn {
    ArithFn::new(format!("general#{seed}"), r, Class::General, move |t| rat(small(seed, "g", t, 3)))
}

/// `f(1..1) = 1`, other values in `[-3, 3]`: invertible for every convolution but lcm.
pub fn invertible(seed: u64, r: usize) -> ArithFn {
    ArithFn::new(format!("invertible#{seed}"), r, Class::General, move |t| {
        if t.iter().all(|&n| n == 1) { rat(1) } else { rat(small(seed, "i", t, 3)) }
    })
}

/// Local values in `[-3, 3]` at every prime and nonzero exponent tuple.
pub fn multiplicative(seed: u64, r: usize) -> ArithFn {
    ArithFn::from_local(
        format!("multiplicative#{seed}"),
        Class::Multiplicative,
        LocalFactor::new(r, move |p, nu| rat(small(seed, "m", (p, nu), 3))),
    )
}

/// Product of `r` random one-variable multiplicative functions.
pub fn firmly(seed: u64, r: usize) -> ArithFn {
    let parts: Vec<ArithFn> = (0..r as u64).map(|i| multiplicative(hash_of((seed, "f", i)), 1)).collect();
    from_one_variable_product(&parts).expect("one-variable parts").renamed(format!("firmly#{seed}"))
}

/// `f(p^nu) = prod_i a_{p,i}^{nu_i}` with `a` in `[-2, 2]`.
pub fn completely(seed: u64, r: usize) -> ArithFn {
    let local = LocalFactor::new(r, move |p, nu| {
        let mut v = rat(1);
        for (i, &e) in nu.iter().enumerate() {
            v *= num_traits::Pow::pow(rat(small(seed, "c", (p, i), 2)), e);
        }
        v
    });
    ArithFn::from_local(format!("completely#{seed}"), Class::Completely, local)
}
