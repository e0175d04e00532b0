//! Evaluation, decomposition and bounded verification for
//! `(a^n - 1)(b^n - 1) = x^2`.
//!
//! Any solution splits along `D = gcd(a^n - 1, b^n - 1)`: the cofactors
//! `(a^n - 1)/D` and `(b^n - 1)/D` are coprime with a square product, so
//! each is a square, giving
//!
//! ```text
//! a^n - 1 = D y^2,   b^n - 1 = D z^2,   x = D y z.
//! ```
//!
//! [`decompose`] returns that split, or an [`Obstruction`] naming the
//! cofactor that is not a square. [`verify_scope`] sweeps every pair that
//! satisfies one of the known theorem hypotheses and sorts what it finds
//! into permitted exceptions and violations.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::SQUARE_FILTER_MODULUS;
use crate::arith::{is_perfect_power, is_perfect_square, is_prime_u64, square_residue_filter};
use crate::{decimal, Error, Natural, Result};

/// A verified solution together with its forced decomposition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionCertificate {
    #[serde(with = "decimal")]
    pub a: Natural,
    #[serde(with = "decimal")]
    pub b: Natural,
    #[serde(with = "decimal")]
    pub n: u32,
    #[serde(with = "decimal")]
    pub x: Natural,
    /// `gcd(a^n - 1, b^n - 1)`.
    #[serde(rename = "D", with = "decimal")]
    pub d: Natural,
    #[serde(with = "decimal")]
    pub y: Natural,
    #[serde(with = "decimal")]
    pub z: Natural,
}

impl SolutionCertificate {
    /// Re-checks every defining identity with exact arithmetic.
    pub fn validate(&self) -> Result<()> {
        let two = Natural::from(2u32);
        if self.a < two || self.b < two || self.a == self.b || self.n == 0 {
            return Err(Error::domain(format!(
                "certificate has invalid (a, b, n) = ({}, {}, {})",
                self.a, self.b, self.n
            )));
        }
        let am = power_minus_one(&self.a, self.n);
        let bm = power_minus_one(&self.b, self.n);
        let checks = [
            (&am * &bm == &self.x * &self.x, "(a^n - 1)(b^n - 1) = x^2"),
            (am.gcd(&bm) == self.d, "D = gcd(a^n - 1, b^n - 1)"),
            (am == &self.d * &self.y * &self.y, "a^n - 1 = D y^2"),
            (bm == &self.d * &self.z * &self.z, "b^n - 1 = D z^2"),
            (self.x == &self.d * &self.y * &self.z, "x = D y z"),
        ];
        match checks.iter().find(|(ok, _)| !ok) {
            None => Ok(()),
            Some((_, what)) => Err(Error::Internal(format!(
                "certificate ({}, {}, {}) fails {what}",
                self.a, self.b, self.n
            ))),
        }
    }

    fn sort_key(&self) -> (&Natural, &Natural, u32) {
        (&self.a, &self.b, self.n)
    }
}

/// Which gcd cofactor fails to be a perfect square.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NonSquareSide {
    A,
    B,
    Both,
}

/// Non-solution certificate: with `D = gcd(a^n - 1, b^n - 1)`, at least one
/// of the coprime cofactors is not a square.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Obstruction {
    #[serde(with = "decimal")]
    pub a: Natural,
    #[serde(with = "decimal")]
    pub b: Natural,
    #[serde(with = "decimal")]
    pub n: u32,
    #[serde(rename = "D", with = "decimal")]
    pub d: Natural,
    /// `(a^n - 1) / D`
    #[serde(with = "decimal")]
    pub a_quotient: Natural,
    /// `(b^n - 1) / D`
    #[serde(with = "decimal")]
    pub b_quotient: Natural,
    pub non_square: NonSquareSide,
}

impl Obstruction {
    /// Re-checks the obstruction: `D` is the gcd, the quotients are exact,
    /// and the named side(s) really are non-squares.
    pub fn validate(&self) -> bool {
        let am = power_minus_one(&self.a, self.n);
        let bm = power_minus_one(&self.b, self.n);
        if am.gcd(&bm) != self.d
            || &self.d * &self.a_quotient != am
            || &self.d * &self.b_quotient != bm
        {
            return false;
        }
        let a_sq = is_perfect_square(&self.a_quotient).is_some();
        let b_sq = is_perfect_square(&self.b_quotient).is_some();
        match self.non_square {
            NonSquareSide::A => !a_sq && b_sq,
            NonSquareSide::B => a_sq && !b_sq,
            NonSquareSide::Both => !a_sq && !b_sq,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Decomposition {
    /// `a^n - 1 = D y^2`, `b^n - 1 = D z^2`.
    Split {
        d: Natural,
        y: Natural,
        z: Natural,
    },
    Obstructed(Obstruction),
}

fn power_minus_one(base: &Natural, n: u32) -> Natural {
    num_traits::pow(base.clone(), n as usize) - 1u32
}

fn check_instance(a: &Natural, b: &Natural, n: u32) -> Result<()> {
    let two = Natural::from(2u32);
    if *a < two || *b < two {
        return Err(Error::domain(format!(
            "a = {a} and b = {b} must both be >= 2"
        )));
    }
    if a == b {
        return Err(Error::domain(format!("a and b must differ (both are {a})")));
    }
    if n == 0 {
        return Err(Error::domain("exponent n must be >= 1"));
    }
    Ok(())
}

fn pow_mod(base: u64, mut exp: u32, m: u64) -> u64 {
    let mut acc = 1 % m;
    let mut base = base % m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc
}

/// `(a^n - 1)(b^n - 1) mod M` for the square filter, without big products.
fn product_residue(a: &Natural, b: &Natural, n: u32) -> u64 {
    let m = SQUARE_FILTER_MODULUS;
    let residue = |v: &Natural| {
        let r = (v % m).to_u64().expect("residue below modulus");
        (pow_mod(r, n, m) + m - 1) % m
    };
    residue(a) * residue(b) % m
}

/// Checks whether `(a^n - 1)(b^n - 1)` is a perfect square and, if so,
/// returns the full certificate.
pub fn evaluate(a: &Natural, b: &Natural, n: u32) -> Result<Option<SolutionCertificate>> {
    check_instance(a, b, n)?;
    // Residue rejection only; acceptance always goes through isqrt.
    if !square_residue_filter(product_residue(a, b, n)) {
        return Ok(None);
    }
    let am = power_minus_one(a, n);
    let bm = power_minus_one(b, n);
    let Some(x) = is_perfect_square(&(&am * &bm)) else {
        return Ok(None);
    };
    match decompose(a, b, n)? {
        Decomposition::Split { d, y, z } => {
            let cert = SolutionCertificate {
                a: a.clone(),
                b: b.clone(),
                n,
                x,
                d,
                y,
                z,
            };
            cert.validate()?;
            Ok(Some(cert))
        }
        Decomposition::Obstructed(o) => Err(Error::Internal(format!(
            "({a}, {b}, {n}) is a square product but the gcd split is obstructed: {o:?}"
        ))),
    }
}

/// Splits along `D = gcd(a^n - 1, b^n - 1)`.
pub fn decompose(a: &Natural, b: &Natural, n: u32) -> Result<Decomposition> {
    check_instance(a, b, n)?;
    let am = power_minus_one(a, n);
    let bm = power_minus_one(b, n);
    let d = am.gcd(&bm);
    let a_quotient = &am / &d;
    let b_quotient = &bm / &d;
    let y = is_perfect_square(&a_quotient);
    let z = is_perfect_square(&b_quotient);
    let non_square = match (y, z) {
        (Some(y), Some(z)) => return Ok(Decomposition::Split { d, y, z }),
        (None, Some(_)) => NonSquareSide::A,
        (Some(_), None) => NonSquareSide::B,
        (None, None) => NonSquareSide::Both,
    };
    Ok(Decomposition::Obstructed(Obstruction {
        a: a.clone(),
        b: b.clone(),
        n,
        d,
        a_quotient,
        b_quotient,
        non_square,
    }))
}

/// Hypotheses of the known results, each a condition on `(a, b)` (and for
/// [`ScopeTag::Cohn4n`] a restriction on `n`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ScopeTag {
    /// `a ≡ 2 (mod 3)`, `b ≡ 0 (mod 3)`: only `n = 2` can solve.
    #[serde(rename = "thm1-case1")]
    Thm1Case1,
    /// `a ≡ 3 (mod 4)`, `b` even: only `n = 2` can solve.
    #[serde(rename = "thm1-case2")]
    Thm1Case2,
    /// `a ≡ 4 (mod 5)`, `b ≡ 0 (mod 5)`: only `n = 2` can solve.
    #[serde(rename = "thm1-case3")]
    Thm1Case3,
    /// `a` even, `b` prime with `b ≡ 3 (mod 8)`: no solutions.
    #[serde(rename = "thm2")]
    Thm2,
    /// `4 | n`: only `{13, 239}` with `n = 4`.
    #[serde(rename = "cohn-4n")]
    Cohn4n,
    /// `b = a^k`, `k >= 2`: only `(a, n, k)` in `{(2,3,2), (3,1,5), (7,1,4)}`
    /// once `kn > 2`.
    #[serde(rename = "power-pair")]
    PowerPair,
}

impl ScopeTag {
    pub const ALL: [ScopeTag; 6] = [
        ScopeTag::Thm1Case1,
        ScopeTag::Thm1Case2,
        ScopeTag::Thm1Case3,
        ScopeTag::Thm2,
        ScopeTag::Cohn4n,
        ScopeTag::PowerPair,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ScopeTag::Thm1Case1 => "thm1-case1",
            ScopeTag::Thm1Case2 => "thm1-case2",
            ScopeTag::Thm1Case3 => "thm1-case3",
            ScopeTag::Thm2 => "thm2",
            ScopeTag::Cohn4n => "cohn-4n",
            ScopeTag::PowerPair => "power-pair",
        }
    }

    /// Whether the ordered pair `(a, b)` satisfies this tag's conditions.
    /// [`ScopeTag::Cohn4n`] constrains only `n` and admits every pair.
    pub fn admits(self, a: &Natural, b: &Natural) -> bool {
        let m = |v: &Natural, q: u32| (v % q).to_u32().expect("small residue");
        match self {
            ScopeTag::Thm1Case1 => m(a, 3) == 2 && m(b, 3) == 0,
            ScopeTag::Thm1Case2 => m(a, 4) == 3 && m(b, 2) == 0,
            ScopeTag::Thm1Case3 => m(a, 5) == 4 && m(b, 5) == 0,
            ScopeTag::Thm2 => scope_theorem2(a, b),
            ScopeTag::Cohn4n => a != b,
            ScopeTag::PowerPair => power_exponent(a, b).is_some(),
        }
    }

    /// Default sweep bounds; they reproduce the acceptance sweeps.
    pub fn default_bounds(self) -> Bounds {
        match self {
            ScopeTag::Thm1Case1 | ScopeTag::Thm1Case2 | ScopeTag::Thm1Case3 | ScopeTag::Thm2 => {
                Bounds::new(40, 40, 12)
            }
            ScopeTag::Cohn4n => Bounds::new(250, 250, 12),
            ScopeTag::PowerPair => Bounds::new(100, 10_000, 10),
        }
    }
}

impl fmt::Display for ScopeTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ScopeTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ScopeTag::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| Error::domain(format!("unknown scope {s:?}")))
    }
}

/// First matching case of the three congruence hypotheses, tested in order.
pub fn scope_theorem1(a: &Natural, b: &Natural) -> Option<ScopeTag> {
    [
        ScopeTag::Thm1Case1,
        ScopeTag::Thm1Case2,
        ScopeTag::Thm1Case3,
    ]
    .into_iter()
    .find(|t| t.admits(a, b))
}

/// `a` even, `b` prime, `b ≡ 3 (mod 8)`.
pub fn scope_theorem2(a: &Natural, b: &Natural) -> bool {
    a.is_even() && (b % 8u32).to_u32() == Some(3) && crate::arith::is_prime(b)
}

/// `k >= 2` with `b = a^k`, if any.
pub fn power_exponent(a: &Natural, b: &Natural) -> Option<u32> {
    if *a < Natural::from(2u32) || b <= a {
        return None;
    }
    let max_k = b.bits() as u32;
    (2..=max_k).find(|&k| is_perfect_power(b, k).as_ref() == Some(a))
}

/// Inclusive sweep bounds: `2 <= a <= a_max`, `2 <= b <= b_max`,
/// `1 <= n <= n_max`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bounds {
    #[serde(with = "decimal")]
    pub a_max: u64,
    #[serde(with = "decimal")]
    pub b_max: u64,
    #[serde(with = "decimal")]
    pub n_max: u32,
}

impl Bounds {
    pub fn new(a_max: u64, b_max: u64, n_max: u32) -> Self {
        Bounds {
            a_max,
            b_max,
            n_max,
        }
    }
}

/// Outcome of a bounded sweep over one scope.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub scope: ScopeTag,
    pub bounds: Bounds,
    /// Solutions the scope permits.
    pub expected_exceptions: Vec<SolutionCertificate>,
    /// Solutions the scope forbids; empty when the result holds.
    pub violations: Vec<SolutionCertificate>,
    #[serde(with = "decimal")]
    pub pairs_checked: u64,
    #[serde(with = "decimal")]
    pub instances_checked: u64,
}

impl VerificationReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

fn cmp_certificates(x: &SolutionCertificate, y: &SolutionCertificate) -> Ordering {
    x.sort_key().cmp(&y.sort_key())
}

/// Partial result of one shard; merging is concatenate-and-sort.
#[derive(Default)]
struct ShardResult {
    found: Vec<SolutionCertificate>,
    pairs: u64,
    instances: u64,
}

impl ShardResult {
    fn merge(mut self, other: ShardResult) -> ShardResult {
        self.found.extend(other.found);
        self.pairs += other.pairs;
        self.instances += other.instances;
        self
    }
}

/// Runs `work` over `items` split into `shards` contiguous chunks processed
/// in parallel, then sorts the merged certificates.
fn sharded<T, F>(items: &[T], shards: usize, work: F) -> ShardResult
where
    T: Sync,
    F: Fn(&T) -> ShardResult + Sync,
{
    let shards = shards.max(1);
    let chunk = items.len().div_ceil(shards).max(1);
    let mut merged = items
        .par_chunks(chunk)
        .map(|part| {
            part.iter()
                .map(&work)
                .fold(ShardResult::default(), ShardResult::merge)
        })
        .reduce(ShardResult::default, ShardResult::merge);
    merged.found.sort_by(cmp_certificates);
    merged
}

fn scan_pair(a: u64, b: u64, exponents: &[u32]) -> ShardResult {
    let (a, b) = (Natural::from(a), Natural::from(b));
    let found = exponents
        .iter()
        .filter_map(|&n| evaluate(&a, &b, n).expect("sweep pairs are valid"))
        .collect();
    ShardResult {
        found,
        pairs: 1,
        instances: exponents.len() as u64,
    }
}

/// Every certificate with `2 <= a < b`, `a <= a_max`, `b <= b_max`,
/// `1 <= n <= n_max`, ordered by `(a, b, n)`.
pub fn search(bounds: Bounds) -> Vec<SolutionCertificate> {
    search_sharded(bounds, 1)
}

/// [`search`] split over `shards` parallel workers. The output does not
/// depend on `shards`.
pub fn search_sharded(bounds: Bounds, shards: usize) -> Vec<SolutionCertificate> {
    let pairs: Vec<(u64, u64)> = (2..=bounds.a_max)
        .flat_map(|a| (a + 1..=bounds.b_max).map(move |b| (a, b)))
        .collect();
    let exponents: Vec<u32> = (1..=bounds.n_max).collect();
    sharded(&pairs, shards, |&(a, b)| scan_pair(a, b, &exponents)).found
}

/// Ordered pairs `(a, b)` within bounds that a scope admits.
fn scope_pairs(scope: ScopeTag, bounds: Bounds) -> Vec<(u64, u64)> {
    match scope {
        ScopeTag::Cohn4n => (2..=bounds.a_max)
            .flat_map(|a| (a + 1..=bounds.b_max).map(move |b| (a, b)))
            .collect(),
        ScopeTag::PowerPair => {
            let mut pairs = Vec::new();
            for a in 2..=bounds.a_max {
                let mut b = a as u128 * a as u128;
                while b <= bounds.b_max as u128 {
                    pairs.push((a, b as u64));
                    b *= a as u128;
                }
            }
            pairs.sort_unstable();
            pairs
        }
        ScopeTag::Thm2 => {
            // Only primes b ≡ 3 (mod 8) qualify; test primality once per b.
            let bs: Vec<u64> = (2..=bounds.b_max)
                .filter(|&b| b % 8 == 3 && is_prime_u64(b))
                .collect();
            (2..=bounds.a_max)
                .filter(|a| a % 2 == 0)
                .flat_map(|a| bs.iter().filter(move |&&b| b != a).map(move |&b| (a, b)))
                .collect()
        }
        _ => (2..=bounds.a_max)
            .flat_map(|a| (2..=bounds.b_max).map(move |b| (a, b)))
            .filter(|&(a, b)| a != b && scope.admits(&Natural::from(a), &Natural::from(b)))
            .collect(),
    }
}

/// Whether a found solution is permitted by the scope's result.
fn permitted(scope: ScopeTag, cert: &SolutionCertificate) -> bool {
    match scope {
        ScopeTag::Thm1Case1 | ScopeTag::Thm1Case2 | ScopeTag::Thm1Case3 => cert.n == 2,
        ScopeTag::Thm2 => false,
        ScopeTag::Cohn4n => {
            let pair = (cert.a.to_u64(), cert.b.to_u64());
            cert.n == 4 && (pair == (Some(13), Some(239)) || pair == (Some(239), Some(13)))
        }
        ScopeTag::PowerPair => {
            let k = power_exponent(&cert.a, &cert.b).expect("power-pair scope");
            let a = cert.a.to_u64();
            // k n <= 2 lies outside the result (k = 2, n = 1).
            k as u64 * cert.n as u64 <= 2
                || [(2, 3, 2), (3, 1, 5), (7, 1, 4)].contains(&(a.unwrap_or(0), cert.n, k))
        }
    }
}

/// Sweeps every in-scope pair and classifies each solution found.
pub fn verify_scope(scope: ScopeTag, bounds: Bounds) -> VerificationReport {
    verify_scope_sharded(scope, bounds, 1)
}

/// [`verify_scope`] split over `shards` parallel workers. The report does
/// not depend on `shards`.
pub fn verify_scope_sharded(scope: ScopeTag, bounds: Bounds, shards: usize) -> VerificationReport {
    let pairs = scope_pairs(scope, bounds);
    let exponents: Vec<u32> = match scope {
        ScopeTag::Cohn4n => (4..=bounds.n_max).step_by(4).collect(),
        _ => (1..=bounds.n_max).collect(),
    };
    let result = sharded(&pairs, shards, |&(a, b)| scan_pair(a, b, &exponents));
    let (expected_exceptions, violations) = result
        .found
        .into_iter()
        .partition(|cert| permitted(scope, cert));
    VerificationReport {
        scope,
        bounds,
        expected_exceptions,
        violations,
        pairs_checked: result.pairs,
        instances_checked: result.instances,
    }
}

impl fmt::Display for SolutionCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}^{n} - 1)({}^{n} - 1) = {}^2  [D = {}, y = {}, z = {}]",
            self.a,
            self.b,
            self.x,
            self.d,
            self.y,
            self.z,
            n = self.n
        )
    }
}

impl Decomposition {
    pub fn is_split(&self) -> bool {
        matches!(self, Decomposition::Split { .. })
    }
}
