//! Closed forms for `S = Z` and `S = P`.
//!
//! These serve as fast paths for the exponent sequences and as oracles the
//! greedy engine is checked against.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::intsets::SetDescriptor;
use crate::numerics::{digit_sum, floor_sum, omega, totient};

/// `Σ_{i>=1} floor(n / (d b^(i-1)))`, the shared shape of every closed form
/// here. Stops at the first vanishing term.
fn geometric_floor_sum(n: u64, d: u64, b: u64) -> u64 {
    let mut total = 0;
    let mut denom = d as u128;
    let n = n as u128;
    while denom <= n {
        total += (n / denom) as u64;
        denom *= b as u128;
    }
    total
}

/// `α_k(Z, b) = Σ_{i>=1} floor(k / b^i)`.
pub fn alpha_z(k: u64, b: u64) -> u64 {
    assert!(b >= 2, "alpha_z needs b >= 2");
    geometric_floor_sum(k, b, b)
}

/// `α_k(P, b) = Σ_{l>=1} floor((k - ω(b)) / (b^(l-1) φ(b)))`, zero when
/// `k < ω(b)`.
pub fn alpha_p(k: u64, b: u64) -> u64 {
    assert!(b >= 2, "alpha_p needs b >= 2");
    let w = omega(b);
    if k < w {
        return 0;
    }
    geometric_floor_sum(k - w, totient(b), b)
}

/// Exponent of `b` in the generalized binomial coefficient of `(Z, N)`, from
/// the floor sums.
pub fn beta_floor(k: u64, l: u64, b: u64) -> u64 {
    assert!(l <= k && b >= 2);
    alpha_z(k, b) - alpha_z(l, b) - alpha_z(k - l, b)
}

/// The same exponent from digit sums: `(d_b(l) + d_b(k-l) - d_b(k)) / (b-1)`.
pub fn beta_digit(k: u64, l: u64, b: u64) -> u64 {
    assert!(l <= k && b >= 2);
    let num = digit_sum(l, b) + digit_sum(k - l, b) - digit_sum(k, b);
    debug_assert_eq!(num % (b - 1), 0);
    num / (b - 1)
}

/// Minimum of `Σ C(n_i, 2)` over `n_1 + ... + n_m = k`, `n_i >= 0`.
pub fn partition_min(k: u64, m: u64) -> u64 {
    floor_sum(k, m)
}

/// The minimizing part sizes: `k - m q` parts of size `q + 1` and the rest
/// of size `q`, where `q = floor(k / m)`. Largest first.
pub fn equality_profile(k: u64, m: u64) -> Vec<u64> {
    assert!(m >= 1);
    let q = k / m;
    let big = k - m * q;
    let mut parts = vec![q + 1; big as usize];
    parts.extend(std::iter::repeat_n(q, (m - big) as usize));
    parts
}

/// Right-hand side of the lower bound on `Σ_{j<=k} α_j` for `P`-test
/// sequences: `Σ_{j=ω(b)}^{k} Σ_l floor((j - ω(b)) / (b^(l-1) φ(b)))`.
pub fn p_test_lower_bound(k: u64, b: u64) -> Result<u64> {
    let w = omega(b);
    if k < w {
        return Err(Error::domain(format!("k = {k} is below ω({b}) = {w}")));
    }
    let phi = totient(b);
    Ok((w..=k).map(|j| geometric_floor_sum(j - w, phi, b)).sum())
}

/// The prefix of a `b`-ordering of the primes built from residue classes:
/// the prime divisors of `b` ascending, then for each `r` in `1..b^e` with
/// `gcd(r, b) = 1`, ascending, the least prime `≡ r (mod b^e)`.
///
/// Has `ω(b) + φ(b^e)` terms; exponents match [`alpha_p`] on all of them.
/// Searches stop at `prime_cap` and report exhaustion.
pub fn prime_witness_sequence(b: u64, e: u32, prime_cap: i64) -> Result<Vec<i64>> {
    assert!(b >= 2 && e >= 1);
    let modulus = (b as i128)
        .checked_pow(e)
        .filter(|m| *m <= i64::MAX as i128)
        .ok_or_else(|| Error::domain(format!("{b}^{e} is too large")))?;
    let mut seq: Vec<i64> = crate::numerics::factorize(b)
        .into_iter()
        .map(|(p, _)| p as i64)
        .collect();
    let none = BTreeSet::new();
    for r in 1..modulus {
        if num_integer::gcd(r, b as i128) != 1 {
            continue;
        }
        let p = SetDescriptor::Primes.pick_in_class_capped(r, modulus, &none, prime_cap)?;
        seq.push(p);
    }
    Ok(seq)
}
