//! Perfect tuples: `sigma(n_1..n_r) = 2 gcd(n_1..n_r)`.

use rayon::prelude::*;

use crate::catalog::several::sigma_r_representation;
use crate::error::{Error, Result};
use crate::numbers::{gcd, rat};

/// Nondecreasing representatives in `[1,B]^r`; every permutation of a hit is a hit.
pub fn search_perfect_tuples(r: usize, bound: u64) -> Result<Vec<Vec<u64>>> {
    if r == 0 || bound == 0 {
        return Err(Error::NonPositive("r and B".into()));
    }
    let rows: Vec<Vec<Vec<u64>>> = (1..=bound)
        .into_par_iter()
        .map(|first| {
            let mut hits = Vec::new();
            let mut t = vec![first; r];
            loop {
                if is_perfect(&t) {
                    hits.push(t.clone());
                }
                // next nondecreasing tuple with fixed first entry
                let mut i = r;
                loop {
                    if i == 1 {
                        return hits;
                    }
                    i -= 1;
                    if t[i] < bound {
                        t[i] += 1;
                        let v = t[i];
                        for slot in &mut t[i + 1..] {
                            *slot = v;
                        }
                        break;
                    }
                }
            }
        })
        .collect();
    Ok(rows.concat())
}

pub fn is_perfect(t: &[u64]) -> bool {
    sigma_r_representation(t) == rat(2 * gcd(t).expect("nonempty") as i64)
}
