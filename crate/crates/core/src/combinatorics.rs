//! Exact combinatorial helpers: binomials, subset and permutation
//! enumeration, and the binomial-ratio coefficients that appear in front
//! of the symmetric functions.
//!
//! Ratios such as `C(n,k)/C(2n,2k)` are formed over exact rationals and
//! converted to `f64` at the very end; forming them in floating point
//! loses digits already for moderate `n`.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, ToPrimitive, Zero};

/// Exact binomial coefficient as `u128`. Panics on overflow, which is
/// unreachable for the matrix sizes this crate handles (`n ≤ 64`).
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Binomial coefficient as an exact big rational.
pub fn binomial_big(n: u64, k: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(binomial(n, k)))
}

/// The coefficient `C(n,k) / C(2n,2k)` as an exact rational.
pub fn sigma_coefficient(n: u64, k: u64) -> BigRational {
    if binomial(2 * n, 2 * k) == 0 {
        return BigRational::zero();
    }
    binomial_big(n, k) / binomial_big(2 * n, 2 * k)
}

/// `C(n,k) / C(2n,2k)` rounded to `f64`, for the numeric modules.
pub fn sigma_coefficient_f64(n: u64, k: u64) -> f64 {
    sigma_coefficient(n, k).to_f64().unwrap_or(0.0)
}

/// Exact factorial as a big rational.
pub fn factorial_big(n: u64) -> BigRational {
    let mut acc = BigRational::one();
    for i in 2..=n {
        acc *= BigRational::from_integer(BigInt::from(i));
    }
    acc
}

/// Visits every `k`-subset of `0..n` in increasing lexicographic order.
///
/// The visitor receives the subset as a sorted slice. No allocation per
/// subset; the buffer is reused.
pub fn for_each_subset<F: FnMut(&[usize])>(n: usize, k: usize, mut visit: F) {
    if k > n {
        return;
    }
    if k == 0 {
        visit(&[]);
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        visit(&idx);
        // advance to the lexicographic successor
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Collects every `k`-subset of `0..n` (test and oracle convenience).
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for_each_subset(n, k, |s| out.push(s.to_vec()));
    out
}

/// Visits all permutations of `0..n` together with their signs, using
/// Heap's algorithm. Each swap flips the sign.
pub fn for_each_permutation<F: FnMut(&[usize], i32)>(n: usize, mut visit: F) {
    let mut perm: Vec<usize> = (0..n).collect();
    let mut c = vec![0usize; n];
    let mut sign = 1i32;
    visit(&perm, sign);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            sign = -sign;
            visit(&perm, sign);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}
