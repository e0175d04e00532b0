use std::sync::OnceLock;

use num_traits::{One, ToPrimitive, Zero};

use crate::Natural;

/// Moduli whose quadratic-residue tables reject most non-squares cheaply.
const FILTER_MODULI: [u64; 4] = [64, 63, 65, 11];

/// Product of [`FILTER_MODULI`]; reduce a value modulo this once and feed
/// the residue to [`square_residue_filter`].
pub(crate) const SQUARE_FILTER_MODULUS: u64 = 64 * 63 * 65 * 11;

fn residue_tables() -> &'static [Vec<bool>; 4] {
    static TABLES: OnceLock<[Vec<bool>; 4]> = OnceLock::new();
    TABLES.get_or_init(|| {
        FILTER_MODULI.map(|m| {
            let mut table = vec![false; m as usize];
            for r in 0..m {
                table[((r * r) % m) as usize] = true;
            }
            table
        })
    })
}

/// Returns `false` when a number congruent to `residue` modulo
/// 64·63·65·11 cannot be a perfect square. A `true` answer proves nothing.
pub fn square_residue_filter(residue: u64) -> bool {
    let tables = residue_tables();
    FILTER_MODULI
        .iter()
        .zip(tables.iter())
        .all(|(&m, table)| table[(residue % m) as usize])
}

/// Floor square root: the unique `r` with `r^2 <= n < (r+1)^2`.
pub fn isqrt(n: &Natural) -> Natural {
    // Newton iteration from num-bigint, then corrected against the
    // defining inequalities so the postcondition never rests on it.
    let mut r = n.sqrt();
    while &r * &r > *n {
        r -= 1u32;
    }
    loop {
        let next = &r + 1u32;
        if &next * &next <= *n {
            r = next;
        } else {
            return r;
        }
    }
}

/// Floor `k`-th root, `k >= 1`.
pub fn iroot(n: &Natural, k: u32) -> Natural {
    assert!(k >= 1, "iroot: k must be positive");
    if k == 1 || n.is_zero() || n.is_one() {
        return n.clone();
    }
    let mut r = n.nth_root(k);
    while num_traits::pow(r.clone(), k as usize) > *n {
        r -= 1u32;
    }
    loop {
        let next = &r + 1u32;
        if num_traits::pow(next.clone(), k as usize) <= *n {
            r = next;
        } else {
            return r;
        }
    }
}

/// The square root of `n` if `n` is a perfect square.
pub fn is_perfect_square(n: &Natural) -> Option<Natural> {
    let residue = (n % SQUARE_FILTER_MODULUS)
        .to_u64()
        .expect("residue below modulus");
    if !square_residue_filter(residue) {
        return None;
    }
    let r = isqrt(n);
    (&r * &r == *n).then_some(r)
}

/// The `k`-th root of `n` if `n` is a perfect `k`-th power.
pub fn is_perfect_power(n: &Natural, k: u32) -> Option<Natural> {
    if k == 2 {
        return is_perfect_square(n);
    }
    let r = iroot(n, k);
    (num_traits::pow(r.clone(), k as usize) == *n).then_some(r)
}
