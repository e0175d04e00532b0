use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::prime::{is_prime, is_prime_u64, small_primes};
use super::roots::is_perfect_square;
use crate::{Error, Natural, Result};

/// Exact prime factorization: primes strictly ascending, exponents >= 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    factors: Vec<(Natural, u32)>,
}

impl Factorization {
    pub fn factors(&self) -> &[(Natural, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = &Natural> + '_ {
        self.factors.iter().map(|(p, _)| p)
    }

    pub fn exponent_of(&self, p: &Natural) -> u32 {
        self.factors
            .iter()
            .find(|(q, _)| q == p)
            .map_or(0, |&(_, e)| e)
    }

    /// Re-multiplies the factors.
    pub fn product(&self) -> Natural {
        self.factors.iter().fold(Natural::one(), |acc, (p, e)| {
            acc * num_traits::pow(p.clone(), *e as usize)
        })
    }

    fn from_map(map: BTreeMap<Natural, u32>) -> Self {
        Factorization {
            factors: map.into_iter().collect(),
        }
    }
}

impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (p, e)) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str(" * ")?;
            }
            if *e == 1 {
                write!(f, "{p}")?;
            } else {
                write!(f, "{p}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Result of a factorization attempt with a bounded rho budget.
///
/// `prime_factors` holds the primes found; `composite_cofactors` holds the
/// composite pieces that resisted splitting. Their combined product is the
/// original input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialFactorization {
    pub prime_factors: Vec<(Natural, u32)>,
    pub composite_cofactors: Vec<Natural>,
}

impl PartialFactorization {
    pub fn is_complete(&self) -> bool {
        self.composite_cofactors.is_empty()
    }
}

/// `n = squarefree * cofactor^2` with `squarefree` free of square divisors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquarefreeDecomposition {
    pub squarefree: Natural,
    pub cofactor: Natural,
}

/// Exact factorization of `n >= 2`.
///
/// Trial division by the primes up to 10^5, then Brent's variant of
/// Pollard rho on whatever remains, with primality gating every split.
pub fn factorize(n: &Natural) -> Result<Factorization> {
    if *n < Natural::from(2u32) {
        return Err(Error::domain(format!("factorize: n = {n} must be >= 2")));
    }
    let mut map = BTreeMap::new();
    let rest = trial_divide(n, &mut map);
    if !rest.is_one() {
        split_fully(rest, &mut map);
    }
    let f = Factorization::from_map(map);
    if f.product() != *n {
        return Err(Error::Internal(format!(
            "factorization of {n} does not re-multiply"
        )));
    }
    Ok(f)
}

/// Like [`factorize`], but gives up on a composite piece after
/// `rho_iterations` steps of each of a few rho polynomials.
pub fn factorize_partial(n: &Natural, rho_iterations: u64) -> Result<PartialFactorization> {
    if *n < Natural::from(2u32) {
        return Err(Error::domain(format!("factorize: n = {n} must be >= 2")));
    }
    let mut map = BTreeMap::new();
    let mut stuck = Vec::new();
    let rest = trial_divide(n, &mut map);
    let mut work = vec![rest];
    while let Some(m) = work.pop() {
        if m.is_one() {
            continue;
        }
        if is_prime(&m) {
            *map.entry(m).or_insert(0) += 1;
            continue;
        }
        match find_factor(&m, Some(rho_iterations)) {
            Some(f) => {
                work.push(&m / &f);
                work.push(f);
            }
            None => stuck.push(m),
        }
    }
    stuck.sort();
    Ok(PartialFactorization {
        prime_factors: map.into_iter().collect(),
        composite_cofactors: stuck,
    })
}

/// Square-free decomposition of `n >= 1`.
pub fn squarefree_decompose(n: &Natural) -> Result<SquarefreeDecomposition> {
    if n.is_zero() {
        return Err(Error::domain("squarefree_decompose: n must be >= 1"));
    }
    if n.is_one() {
        return Ok(SquarefreeDecomposition {
            squarefree: Natural::one(),
            cofactor: Natural::one(),
        });
    }
    let f = factorize(n)?;
    let mut squarefree = Natural::one();
    let mut cofactor = Natural::one();
    for (p, e) in f.factors() {
        if e % 2 == 1 {
            squarefree *= p;
        }
        cofactor *= num_traits::pow(p.clone(), (e / 2) as usize);
    }
    Ok(SquarefreeDecomposition {
        squarefree,
        cofactor,
    })
}

/// Strips every prime below the sieve limit; returns the cofactor.
fn trial_divide(n: &Natural, map: &mut BTreeMap<Natural, u32>) -> Natural {
    if let Some(small) = n.to_u64() {
        let mut rest = small;
        for &p in small_primes() {
            let p = p as u64;
            if p * p > rest {
                break;
            }
            let mut e = 0;
            while rest % p == 0 {
                rest /= p;
                e += 1;
            }
            if e > 0 {
                map.insert(Natural::from(p), e);
            }
        }
        return Natural::from(rest);
    }
    let mut rest = n.clone();
    for &p in small_primes() {
        let (q, r) = rest.div_rem(&Natural::from(p));
        if !r.is_zero() {
            continue;
        }
        rest = q;
        let mut e = 1;
        loop {
            let (q, r) = rest.div_rem(&Natural::from(p));
            if !r.is_zero() {
                break;
            }
            rest = q;
            e += 1;
        }
        map.insert(Natural::from(p), e);
        if rest.is_one() {
            break;
        }
    }
    rest
}

fn split_fully(n: Natural, map: &mut BTreeMap<Natural, u32>) {
    let mut work = vec![n];
    while let Some(m) = work.pop() {
        if m.is_one() {
            continue;
        }
        if is_prime(&m) {
            *map.entry(m).or_insert(0) += 1;
            continue;
        }
        let f = find_factor(&m, None).expect("unbounded rho always splits a composite");
        work.push(&m / &f);
        work.push(f);
    }
}

/// A non-trivial factor of the composite `n`, or `None` once the budget
/// is exhausted on every polynomial tried.
fn find_factor(n: &Natural, budget: Option<u64>) -> Option<Natural> {
    if let Some(r) = is_perfect_square(n) {
        return Some(r);
    }
    if let Some(small) = n.to_u64() {
        for c in 1..=64u64 {
            if let Some(f) = brent_u64(small, c, budget) {
                return Some(Natural::from(f));
            }
        }
        return None;
    }
    let attempts = if budget.is_some() { 3 } else { u64::MAX };
    (1..=attempts).find_map(|c| brent_big(n, c, budget))
}

/// Batch size for accumulating |x - y| products before each gcd.
const RHO_BATCH: u64 = 128;

fn brent_u64(n: u64, c: u64, budget: Option<u64>) -> Option<u64> {
    debug_assert!(!is_prime_u64(n));
    if n.is_multiple_of(2) {
        return Some(2);
    }
    let f = |x: u64| ((x as u128 * x as u128 + c as u128) % n as u128) as u64;
    let limit = budget.unwrap_or(u64::MAX);
    let (mut y, mut x, mut ys) = (2u64, 2u64, 2u64);
    let mut q = 1u64;
    let mut g = 1u64;
    let mut r = 1u64;
    let mut steps = 0u64;
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0;
        while k < r && g == 1 {
            ys = y;
            for _ in 0..RHO_BATCH.min(r - k) {
                y = f(y);
                q = ((q as u128 * x.abs_diff(y) as u128) % n as u128) as u64;
            }
            g = q.gcd(&n);
            k += RHO_BATCH;
        }
        steps += 2 * r;
        r *= 2;
        if g == 1 && steps > limit {
            return None;
        }
    }
    if g == n {
        loop {
            ys = f(ys);
            g = x.abs_diff(ys).gcd(&n);
            if g > 1 {
                break;
            }
        }
    }
    (g != n).then_some(g)
}

fn brent_big(n: &Natural, c: u64, budget: Option<u64>) -> Option<Natural> {
    if n.is_even() {
        return Some(Natural::from(2u32));
    }
    let c = Natural::from(c);
    let f = |x: &Natural| (x * x + &c) % n;
    let diff = |a: &Natural, b: &Natural| if a > b { a - b } else { b - a };
    let limit = budget.unwrap_or(u64::MAX);
    let mut y = Natural::from(2u32);
    let mut x = y.clone();
    let mut ys = y.clone();
    let mut q = Natural::one();
    let mut g = Natural::one();
    let mut r = 1u64;
    let mut steps = 0u64;
    while g.is_one() {
        x = y.clone();
        for _ in 0..r {
            y = f(&y);
        }
        let mut k = 0;
        while k < r && g.is_one() {
            ys = y.clone();
            for _ in 0..RHO_BATCH.min(r - k) {
                y = f(&y);
                q = q * diff(&x, &y) % n;
            }
            g = q.gcd(n);
            k += RHO_BATCH;
        }
        steps += 2 * r;
        r *= 2;
        if g.is_one() && steps > limit {
            return None;
        }
    }
    if g == *n {
        loop {
            ys = f(&ys);
            g = diff(&x, &ys).gcd(n);
            if !g.is_one() {
                break;
            }
        }
    }
    (g != *n).then_some(g)
}
