//! Bounded search for `x^p = 2 y^2 - 1` with `p` an odd prime.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{is_perfect_power, is_prime_u64};
use crate::{decimal, Error, Natural, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LjunggrenSolution {
    #[serde(with = "decimal")]
    pub p: u32,
    #[serde(with = "decimal")]
    pub x: Natural,
    #[serde(with = "decimal")]
    pub y: Natural,
}

impl LjunggrenSolution {
    pub fn is_valid(&self) -> bool {
        let lhs = num_traits::pow(self.x.clone(), self.p as usize);
        lhs == &self.y * &self.y * 2u32 - 1u32
    }
}

/// Default `y` bound used by the command-line front end.
pub fn default_y_max(p: u32) -> u64 {
    if p == 3 {
        1_000_000
    } else {
        100_000
    }
}

/// Floor `p`-th root of a `u128`, exact.
fn iroot_u128(n: u128, p: u32) -> u128 {
    let mut r = (n as f64).powf(1.0 / p as f64) as u128;
    let pow = |r: u128| r.checked_pow(p);
    while pow(r).is_none_or(|v| v > n) {
        r -= 1;
    }
    while pow(r + 1).is_some_and(|v| v <= n) {
        r += 1;
    }
    r
}

fn candidate(p: u32, y: u64) -> Option<LjunggrenSolution> {
    let y_big = Natural::from(y);
    let x = match (y as u128)
        .checked_mul(y as u128)
        .and_then(|s| s.checked_mul(2))
    {
        Some(twice) => {
            let target = twice - 1;
            let r = iroot_u128(target, p);
            if r.pow(p) != target {
                return None;
            }
            Natural::from(r)
        }
        None => is_perfect_power(&(&y_big * &y_big * 2u32 - 1u32), p)?,
    };
    Some(LjunggrenSolution { p, x, y: y_big })
}

/// All solutions with `1 <= y <= y_max`, ascending in `y`.
pub fn search_ljunggren(p: u32, y_max: u64) -> Result<Vec<LjunggrenSolution>> {
    if p < 3 || !is_prime_u64(p as u64) {
        return Err(Error::domain(format!(
            "exponent p = {p} must be an odd prime"
        )));
    }
    if y_max == 0 {
        return Err(Error::domain("y_max must be >= 1"));
    }
    let found: Vec<LjunggrenSolution> = (1..=y_max)
        .into_par_iter()
        .filter_map(|y| candidate(p, y))
        .collect();
    for s in &found {
        if !s.is_valid() {
            return Err(Error::Internal(format!("spurious solution {s:?}")));
        }
    }
    Ok(found)
}
