use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::roots::is_perfect_square;
use crate::Natural;

/// Trial-division limit; also the sieve bound used by the factorizer.
pub(crate) const SIEVE_LIMIT: u32 = 100_000;

/// Miller-Rabin witnesses that are deterministic for every n < 2^64.
const U64_MR_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Fixed strong-probable-prime bases used above 2^64: the first 40 primes.
/// A strong Lucas round follows them, making the test a strengthened BPSW.
pub const BIG_MR_BASES: [u32; 40] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
    101, 103, 107, 109, 113, 127, 131, 137, 139, 149, 151, 157, 163, 167, 173,
];

/// All primes up to 100 000, ascending.
pub fn small_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let limit = SIEVE_LIMIT as usize;
        let mut composite = vec![false; limit + 1];
        let mut primes = Vec::new();
        for i in 2..=limit {
            if !composite[i] {
                primes.push(i as u32);
                let mut j = i * i;
                while j <= limit {
                    composite[j] = true;
                    j += i;
                }
            }
        }
        primes
    })
}

/// Exact primality test for arbitrary naturals.
///
/// Deterministic below 2^64. Above, 40 strong probable-prime rounds with
/// the fixed bases in [`BIG_MR_BASES`] plus one strong Lucas round.
pub fn is_prime(n: &Natural) -> bool {
    match n.to_u64() {
        Some(v) => is_prime_u64(v),
        None => is_prime_big(n),
    }
}

#[inline]
fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &U64_MR_BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &U64_MR_BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn is_prime_big(n: &Natural) -> bool {
    for &p in &small_primes()[..168] {
        if (n % p).is_zero() {
            return false;
        }
    }
    let n_minus_1 = n - 1u32;
    let s = n_minus_1.trailing_zeros().expect("n > 1");
    let d = &n_minus_1 >> s;
    'witness: for &a in &BIG_MR_BASES {
        let mut x = Natural::from(a).modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = &x * &x % n;
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    strong_lucas_probable_prime(n)
}

/// Jacobi symbol (a / n) for odd positive n.
fn jacobi(a: &BigInt, n: &Natural) -> i32 {
    let mut n = BigInt::from(n.clone());
    let mut a = a.mod_floor(&n);
    let mut result = 1;
    while !a.is_zero() {
        while a.is_even() {
            a >>= 1;
            let r = (&n % 8u32).to_u32().unwrap();
            if r == 3 || r == 5 {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if (&a % 4u32).to_u32() == Some(3) && (&n % 4u32).to_u32() == Some(3) {
            result = -result;
        }
        a = a.mod_floor(&n);
    }
    if n.is_one() {
        result
    } else {
        0
    }
}

/// Strong Lucas probable-prime test with Selfridge's parameter choice
/// (first D in 5, -7, 9, -11, ... with (D/n) = -1; P = 1, Q = (1 - D)/4).
/// `n` must be odd and free of small factors.
fn strong_lucas_probable_prime(n: &Natural) -> bool {
    if is_perfect_square(n).is_some() {
        return false;
    }
    let n_int = BigInt::from(n.clone());
    let mut d_abs = 5i64;
    let d = loop {
        let candidate = if d_abs % 4 == 1 { d_abs } else { -d_abs };
        match jacobi(&BigInt::from(candidate), n) {
            -1 => break candidate,
            0 if BigInt::from(candidate).abs() != n_int => return false,
            _ => d_abs += 2,
        }
    };
    let p = BigInt::one();
    let q = BigInt::from((1 - d) / 4);
    let dd = BigInt::from(d);

    let reduce = |x: BigInt| x.mod_floor(&n_int);
    let half = |x: BigInt| {
        let x = if x.is_odd() { x + &n_int } else { x };
        (x >> 1u32).mod_floor(&n_int)
    };

    let n_plus_1 = n + 1u32;
    let s = n_plus_1.trailing_zeros().expect("n + 1 > 0");
    let odd = &n_plus_1 >> s;

    // Left-to-right ladder over the bits of `odd`, starting from index 1.
    let mut u = BigInt::one();
    let mut v = p.clone();
    let mut qk = reduce(q.clone());
    let bits = odd.bits();
    for i in (0..bits - 1).rev() {
        u = reduce(&u * &v);
        v = reduce(&v * &v - (&qk << 1u32));
        qk = reduce(&qk * &qk);
        if odd.bit(i) {
            let u_next = half(&p * &u + &v);
            let v_next = half(&dd * &u + &p * &v);
            u = u_next;
            v = v_next;
            qk = reduce(&qk * &q);
        }
    }
    if u.is_zero() || v.is_zero() {
        return true;
    }
    for _ in 1..s {
        v = reduce(&v * &v - (&qk << 1u32));
        if v.is_zero() {
            return true;
        }
        qk = reduce(&qk * &qk);
    }
    false
}
