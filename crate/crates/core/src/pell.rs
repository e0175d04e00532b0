//! The Pell equation `u^2 - d v^2 = 1`.
//!
//! The fundamental solution comes from the continued-fraction expansion of
//! `sqrt(d)` carried out in integers only (the PQa iteration). Later
//! solutions follow from the linear recurrence
//!
//! ```text
//! u_{k+1} = u_1 u_k + d v_1 v_k
//! v_{k+1} = u_1 v_k + v_1 u_k
//! ```
//!
//! which is the same as expanding `(u_1 + v_1 sqrt(d))^k`.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{is_perfect_square, isqrt};
use crate::{decimal, Error, Natural, Result};

/// Smallest positive solution of `u^2 - d v^2 = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PellFundamental {
    #[serde(with = "decimal")]
    pub d: Natural,
    #[serde(with = "decimal")]
    pub u1: Natural,
    #[serde(with = "decimal")]
    pub v1: Natural,
}

/// The `k`-th solution `(u_k, v_k)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PellPoint {
    #[serde(with = "decimal")]
    pub d: Natural,
    #[serde(with = "decimal")]
    pub k: u64,
    #[serde(with = "decimal")]
    pub u: Natural,
    #[serde(with = "decimal")]
    pub v: Natural,
}

impl PellPoint {
    /// Whether `u^2 - d v^2 = 1` holds.
    pub fn satisfies_equation(&self) -> bool {
        is_solution(&self.d, &self.u, &self.v)
    }
}

fn is_solution(d: &Natural, u: &Natural, v: &Natural) -> bool {
    u * u == d * v * v + 1u32
}

/// Rejects `d < 2` and perfect squares.
pub fn check_d(d: &Natural) -> Result<()> {
    if *d < Natural::from(2u32) || is_perfect_square(d).is_some() {
        return Err(Error::PellDegenerate(d.clone()));
    }
    Ok(())
}

/// Fundamental solution via the continued fraction of `sqrt(d)`.
pub fn fundamental_solution(d: &Natural) -> Result<PellFundamental> {
    check_d(d)?;
    let a0 = isqrt(d);
    // Complete quotient (p + sqrt(d)) / q, starting at sqrt(d) itself.
    let mut p = Natural::zero();
    let mut q = Natural::one();
    // Convergents h/k with the usual (1, 0) / (0, 1) seeds.
    let (mut h_prev, mut h) = (Natural::zero(), Natural::one());
    let (mut k_prev, mut k) = (Natural::one(), Natural::zero());
    loop {
        let a = (&p + &a0) / &q;
        let h_next = &a * &h + &h_prev;
        let k_next = &a * &k + &k_prev;
        h_prev = std::mem::replace(&mut h, h_next);
        k_prev = std::mem::replace(&mut k, k_next);
        if is_solution(d, &h, &k) {
            break;
        }
        p = &a * &q - &p;
        q = (d - &p * &p) / &q;
    }
    let sol = PellFundamental {
        d: d.clone(),
        u1: h,
        v1: k,
    };
    if !is_solution(&sol.d, &sol.u1, &sol.v1) || sol.v1.is_zero() {
        return Err(Error::Internal(format!(
            "continued fraction failed for d = {d}"
        )));
    }
    Ok(sol)
}

impl PellFundamental {
    /// All solutions `(u_k, v_k)` for `k = 1, 2, ...`.
    pub fn iter(&self) -> PellSequence<'_> {
        PellSequence {
            base: self,
            k: 0,
            u: Natural::one(),
            v: Natural::zero(),
        }
    }

    /// The `k`-th solution, `k >= 1`.
    pub fn point(&self, k: u64) -> Result<PellPoint> {
        if k == 0 {
            return Err(Error::domain("Pell index k must be >= 1"));
        }
        Ok(self
            .iter()
            .nth((k - 1) as usize)
            .expect("sequence is infinite"))
    }

    /// Index `k` with `u_k = target`, if any.
    pub fn index_of_u(&self, target: &Natural) -> Option<u64> {
        for point in self.iter() {
            if point.u == *target {
                return Some(point.k);
            }
            if point.u > *target {
                return None;
            }
        }
        unreachable!("sequence is infinite")
    }
}

/// Infinite iterator over successive Pell solutions.
#[derive(Debug, Clone)]
pub struct PellSequence<'a> {
    base: &'a PellFundamental,
    k: u64,
    u: Natural,
    v: Natural,
}

impl Iterator for PellSequence<'_> {
    type Item = PellPoint;

    fn next(&mut self) -> Option<PellPoint> {
        let PellFundamental { d, u1, v1 } = self.base;
        let u = u1 * &self.u + d * v1 * &self.v;
        let v = u1 * &self.v + v1 * &self.u;
        self.u = u;
        self.v = v;
        self.k += 1;
        Some(PellPoint {
            d: d.clone(),
            k: self.k,
            u: self.u.clone(),
            v: self.v.clone(),
        })
    }
}

/// The `k`-th solution of `u^2 - d v^2 = 1`.
pub fn solution_at(d: &Natural, k: u64) -> Result<PellPoint> {
    fundamental_solution(d)?.point(k)
}

/// Index `k >= 1` with `u_k = target`.
pub fn index_of_u(d: &Natural, target: &Natural) -> Result<Option<u64>> {
    if target.is_zero() {
        return Err(Error::domain("index_of_u: U must be >= 1"));
    }
    Ok(fundamental_solution(d)?.index_of_u(target))
}
