//! Divisibility laws of the Pell solution sequences.
//!
//! For a fixed non-square `d` the coordinates `u_k`, `v_k` of successive
//! solutions of `u^2 - d v^2 = 1` obey:
//!
//! 1. for even `k`, every prime factor of `u_k` is `±1 (mod 8)`;
//! 2. for odd `k`, `u_1 | u_k` and `u_k / u_1` is odd;
//! 3. for `q` in `{2, 3, 5}`, `q | u_k` implies `q | u_1`;
//!
//! and, for parity, `2 | u_r`, `2 ∤ u_s` forces `r` odd and `s` even.
//! Finally `v_n` has a primitive prime divisor (one dividing no earlier
//! `v_m`) for every `n > 6`.
//!
//! The checkers below evaluate these statements on concrete sequences and
//! report every failure as a [`LemmaViolation`].

use std::fmt;

use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{factorize, factorize_partial};
use crate::pell::{fundamental_solution, PellPoint};
use crate::{decimal, Error, Natural, Result};

/// Rho iterations per polynomial spent on each composite piece of an even
/// `u_k` before falling back to the square-root-of-2 certificate.
const LEMMA1_RHO_BUDGET: u64 = 1 << 14;

/// Default index above which a primitive divisor is required.
pub const CARMICHAEL_BOUND: u64 = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum LemmaId {
    /// Even index: prime factors of `u_k` are `±1 (mod 8)`.
    L1P1,
    /// Odd index: `u_1 | u_k`, quotient odd.
    L1P2,
    /// Small primes `2, 3, 5` dividing `u_k` divide `u_1`.
    L1P3,
    /// Parity of `u_k` against parity of `k`.
    L3,
    /// Missing primitive divisor of `v_n`.
    #[serde(rename = "CARMICHAEL")]
    Carmichael,
}

impl fmt::Display for LemmaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LemmaId::L1P1 => "L1P1",
            LemmaId::L1P2 => "L1P2",
            LemmaId::L1P3 => "L1P3",
            LemmaId::L3 => "L3",
            LemmaId::Carmichael => "CARMICHAEL",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaViolation {
    pub lemma_id: LemmaId,
    #[serde(with = "decimal")]
    pub d: Natural,
    #[serde(with = "decimal")]
    pub k: u64,
    pub detail: String,
}

/// Primitive prime divisors of `v_n`, ascending.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimitiveDivisorSet {
    #[serde(with = "decimal")]
    pub d: Natural,
    #[serde(with = "decimal")]
    pub n: u64,
    #[serde(with = "decimal::seq")]
    pub primes: Vec<Natural>,
}

/// Outcome of a primitive-divisor scan over `1..=n_max`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CarmichaelScan {
    /// Indices above the bound whose `v_n` has no primitive divisor.
    pub violations: Vec<LemmaViolation>,
    /// Indices at or below the bound without a primitive divisor.
    pub notes: Vec<u64>,
}

fn first_points(d: &Natural, count: u64) -> Result<Vec<PellPoint>> {
    if count == 0 {
        return Err(Error::domain("index bound must be >= 1"));
    }
    let base = fundamental_solution(d)?;
    Ok(base.iter().take(count as usize).collect())
}

fn violation(lemma_id: LemmaId, d: &Natural, k: u64, detail: String) -> LemmaViolation {
    LemmaViolation {
        lemma_id,
        d: d.clone(),
        k,
        detail,
    }
}

/// Checks the three divisibility properties of `u_k` for `k <= k_max`.
pub fn check_lemma1(d: &Natural, k_max: u64) -> Result<Vec<LemmaViolation>> {
    let points = first_points(d, k_max)?;
    let u1 = &points[0].u;
    let mut out = Vec::new();
    for point in &points {
        let (k, uk) = (point.k, &point.u);
        if k % 2 == 0 {
            let half = &points[(k / 2 - 1) as usize].u;
            out.extend(even_index_prime_residues(d, k, uk, half)?);
        } else {
            let (quotient, rem) = uk.div_rem(u1);
            if !rem.is_zero() {
                out.push(violation(
                    LemmaId::L1P2,
                    d,
                    k,
                    format!("u_1 = {u1} does not divide u_{k} = {uk}"),
                ));
            } else if quotient.is_even() {
                out.push(violation(
                    LemmaId::L1P2,
                    d,
                    k,
                    format!("u_{k} / u_1 = {quotient} is even"),
                ));
            }
        }
        for q in [2u32, 3, 5] {
            if (uk % q).is_zero() && !(u1 % q).is_zero() {
                out.push(violation(
                    LemmaId::L1P3,
                    d,
                    k,
                    format!("{q} divides u_{k} but not u_1 = {u1}"),
                ));
            }
        }
    }
    Ok(out)
}

/// Property 1 for one even index. Primes found by (bounded) factoring are
/// checked mod 8 directly. A composite piece `c` that resists factoring is
/// settled by the witness `s = 2 u_{k/2}`: `s^2 = 2 (u_k + 1) ≡ 2 (mod c)`,
/// so 2 is a quadratic residue modulo every prime of `c`, which happens
/// exactly for primes `±1 (mod 8)`.
fn even_index_prime_residues(
    d: &Natural,
    k: u64,
    uk: &Natural,
    half: &Natural,
) -> Result<Vec<LemmaViolation>> {
    let mut out = Vec::new();
    let partial = factorize_partial(uk, LEMMA1_RHO_BUDGET)?;
    for (p, _) in &partial.prime_factors {
        let r = (p % 8u32).to_u32().expect("residue below 8");
        if r != 1 && r != 7 {
            out.push(violation(
                LemmaId::L1P1,
                d,
                k,
                format!("prime {p} ≡ {r} (mod 8) divides u_{k}"),
            ));
        }
    }
    for c in &partial.composite_cofactors {
        let s = (half * 2u32) % c;
        let certified = c.is_odd() && (&s * &s) % c == Natural::from(2u32) % c;
        if !certified {
            out.push(violation(
                LemmaId::L1P1,
                d,
                k,
                format!("unfactored part {c} of u_{k} has no square root of 2"),
            ));
        }
    }
    Ok(out)
}

/// Checks the parity rule on `u_1 ..= u_{k_max}`.
pub fn check_lemma3(d: &Natural, k_max: u64) -> Result<Vec<LemmaViolation>> {
    let points = first_points(d, k_max)?;
    let has_even = points.iter().any(|p| p.u.is_even());
    let has_odd = points.iter().any(|p| p.u.is_odd());
    if !(has_even && has_odd) {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for p in &points {
        let u_even = p.u.is_even();
        let k_even = p.k % 2 == 0;
        if u_even == k_even {
            let detail = if u_even {
                format!("u_{} = {} is even at an even index", p.k, p.u)
            } else {
                format!("u_{} = {} is odd at an odd index", p.k, p.u)
            };
            out.push(violation(LemmaId::L3, d, p.k, detail));
        }
    }
    Ok(out)
}

/// `v_n` with every prime that divides some earlier `v_m` removed.
///
/// Exact without factoring: strips `gcd` with each earlier term until it
/// stabilizes at 1.
fn primitive_part(vs: &[Natural], n: usize) -> Natural {
    let mut rest = vs[n - 1].clone();
    for earlier in &vs[..n - 1] {
        let mut g = rest.gcd(earlier);
        while !g.is_one() {
            rest /= &g;
            g = rest.gcd(&g);
        }
    }
    rest
}

fn v_terms(d: &Natural, count: u64) -> Result<Vec<Natural>> {
    Ok(first_points(d, count)?.into_iter().map(|p| p.v).collect())
}

/// The primitive prime divisors of `v_n`.
pub fn primitive_divisors(d: &Natural, n: u64) -> Result<PrimitiveDivisorSet> {
    let vs = v_terms(d, n)?;
    let rest = primitive_part(&vs, n as usize);
    let primes: Vec<Natural> = if rest.is_one() {
        Vec::new()
    } else {
        factorize(&rest)?.primes().cloned().collect()
    };
    let vn = &vs[n as usize - 1];
    for p in &primes {
        let fresh = (vn % p).is_zero() && vs[..n as usize - 1].iter().all(|v| !(v % p).is_zero());
        if !fresh {
            return Err(Error::Internal(format!(
                "{p} is not a primitive divisor of v_{n}"
            )));
        }
    }
    Ok(PrimitiveDivisorSet {
        d: d.clone(),
        n,
        primes,
    })
}

/// Scans `v_1 ..= v_{n_max}` for primitive divisors. Indices above `bound`
/// lacking one are violations; those at or below are notes.
pub fn carmichael_scan(d: &Natural, n_max: u64, bound: u64) -> Result<CarmichaelScan> {
    if n_max <= bound {
        return Err(Error::domain(format!(
            "n_max = {n_max} must exceed the bound {bound}"
        )));
    }
    let vs = v_terms(d, n_max)?;
    let mut scan = CarmichaelScan::default();
    for n in 1..=n_max {
        if !primitive_part(&vs, n as usize).is_one() {
            continue;
        }
        if n > bound {
            scan.violations.push(violation(
                LemmaId::Carmichael,
                d,
                n,
                format!(
                    "v_{n} = {} has no primitive prime divisor",
                    vs[n as usize - 1]
                ),
            ));
        } else {
            scan.notes.push(n);
        }
    }
    Ok(scan)
}

/// Primitive divisors exist for every `6 < n <= n_max`.
pub fn check_carmichael(d: &Natural, n_max: u64) -> Result<Vec<LemmaViolation>> {
    Ok(carmichael_scan(d, n_max, CARMICHAEL_BOUND)?.violations)
}
