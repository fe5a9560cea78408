//! Extended naturals, `b`-adic valuations and digits, and the small
//! arithmetic functions (totient, distinct prime count, digit sums,
//! floor sums) that the closed forms are built from.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::Add;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An element of `N ∪ {+∞}`.
///
/// Finite values are unbounded. Addition saturates at infinity and the order
/// places infinity above every finite value.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ExtNat {
    Finite(BigUint),
    Infinite,
}

impl ExtNat {
    pub fn zero() -> Self {
        ExtNat::Finite(BigUint::zero())
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtNat::Finite(_))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtNat::Infinite)
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, ExtNat::Finite(n) if n.is_zero())
    }

    pub fn finite(&self) -> Option<&BigUint> {
        match self {
            ExtNat::Finite(n) => Some(n),
            ExtNat::Infinite => None,
        }
    }

    /// The finite value as a `u64`, if it is finite and fits.
    pub fn to_u64(&self) -> Option<u64> {
        self.finite().and_then(|n| n.to_u64())
    }

    /// `self - rhs`, defined only when `self` is finite and `rhs <= self`.
    pub fn checked_sub(&self, rhs: &ExtNat) -> Result<ExtNat> {
        match (self, rhs) {
            (ExtNat::Infinite, _) => Err(Error::domain("cannot subtract from infinity")),
            (ExtNat::Finite(_), ExtNat::Infinite) => {
                Err(Error::domain("cannot subtract infinity from a finite value"))
            }
            (ExtNat::Finite(m), ExtNat::Finite(n)) => {
                if n > m {
                    Err(Error::domain(format!("{n} exceeds {m} in subtraction")))
                } else {
                    Ok(ExtNat::Finite(m - n))
                }
            }
        }
    }

    /// Plain-text rendering with `inf` for infinity, for CSV and JSON.
    pub fn to_plain(&self) -> String {
        match self {
            ExtNat::Finite(n) => n.to_string(),
            ExtNat::Infinite => "inf".to_string(),
        }
    }

    pub fn parse_plain(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "inf" || s == "∞" {
            return Ok(ExtNat::Infinite);
        }
        s.parse::<BigUint>()
            .map(ExtNat::Finite)
            .map_err(|_| Error::Parse(format!("not an extended natural: `{s}`")))
    }
}

impl From<u64> for ExtNat {
    fn from(n: u64) -> Self {
        ExtNat::Finite(BigUint::from(n))
    }
}

impl From<Option<u64>> for ExtNat {
    /// `None` maps to infinity.
    fn from(n: Option<u64>) -> Self {
        match n {
            Some(n) => ExtNat::from(n),
            None => ExtNat::Infinite,
        }
    }
}

impl PartialOrd for ExtNat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtNat {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtNat::Infinite, ExtNat::Infinite) => Ordering::Equal,
            (ExtNat::Infinite, _) => Ordering::Greater,
            (_, ExtNat::Infinite) => Ordering::Less,
            (ExtNat::Finite(a), ExtNat::Finite(b)) => a.cmp(b),
        }
    }
}

impl Add for ExtNat {
    type Output = ExtNat;

    fn add(self, rhs: ExtNat) -> ExtNat {
        match (self, rhs) {
            (ExtNat::Finite(a), ExtNat::Finite(b)) => ExtNat::Finite(a + b),
            _ => ExtNat::Infinite,
        }
    }
}

impl<'a> Add<&'a ExtNat> for &'a ExtNat {
    type Output = ExtNat;

    fn add(self, rhs: &ExtNat) -> ExtNat {
        match (self, rhs) {
            (ExtNat::Finite(a), ExtNat::Finite(b)) => ExtNat::Finite(a + b),
            _ => ExtNat::Infinite,
        }
    }
}

impl Sum for ExtNat {
    fn sum<I: Iterator<Item = ExtNat>>(iter: I) -> ExtNat {
        iter.fold(ExtNat::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a ExtNat> for ExtNat {
    fn sum<I: Iterator<Item = &'a ExtNat>>(iter: I) -> ExtNat {
        iter.fold(ExtNat::zero(), |acc, x| &acc + x)
    }
}

impl fmt::Display for ExtNat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtNat::Finite(n) => write!(f, "{n}"),
            ExtNat::Infinite => write!(f, "∞"),
        }
    }
}

impl Serialize for ExtNat {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self.to_u64() {
            Some(n) => serializer.serialize_u64(n),
            None => serializer.serialize_str(&self.to_plain()),
        }
    }
}

impl<'de> Deserialize<'de> for ExtNat {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(u64),
            Text(String),
        }
        match Repr::deserialize(deserializer)? {
            Repr::Num(n) => Ok(ExtNat::from(n)),
            Repr::Text(s) => ExtNat::parse_plain(&s).map_err(serde::de::Error::custom),
        }
    }
}

/// `ord_b(a)`: the largest `k` with `b^k | a` for `b >= 2`, extended to
/// `b = 0` (infinite at `a = 0`, else zero) and `b = 1` (always infinite).
pub fn ord_b(b: u64, a: i128) -> ExtNat {
    ExtNat::from(ord_b_small(b, a))
}

/// [`ord_b`] with `None` standing for infinity.
pub fn ord_b_small(b: u64, a: i128) -> Option<u64> {
    match b {
        0 => (a != 0).then_some(0),
        1 => None,
        _ => {
            if a == 0 {
                return None;
            }
            let b = b as i128;
            let mut a = a;
            let mut k = 0;
            while a % b == 0 {
                a /= b;
                k += 1;
            }
            Some(k)
        }
    }
}

/// The first `len` base-`b` digits of an integer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DigitExpansion {
    pub base: u64,
    pub digits: Vec<u64>,
}

impl DigitExpansion {
    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    /// `Σ d_i b^i` over the stored digits.
    pub fn reconstruct(&self) -> num_bigint::BigInt {
        let b = num_bigint::BigInt::from(self.base);
        self.digits
            .iter()
            .rev()
            .fold(num_bigint::BigInt::zero(), |acc, &d| acc * &b + d)
    }
}

/// The digits `d_k = floor(a / b^k) - b * floor(a / b^(k+1))`, `0 <= k < count`.
///
/// Negative `a` has infinitely many nonzero digits; the expansion is cut at
/// `count`.
pub fn digits(a: i128, b: u64, count: usize) -> Result<DigitExpansion> {
    if b < 2 {
        return Err(Error::domain(format!("digit base must be >= 2, got {b}")));
    }
    let bb = b as i128;
    let mut q = a;
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let next = q.div_euclid(bb);
        out.push((q - bb * next) as u64);
        q = next;
    }
    Ok(DigitExpansion { base: b, digits: out })
}

/// Sum of the base-`b` digits of `n`.
pub fn digit_sum(n: u64, b: u64) -> u64 {
    assert!(b >= 2, "digit base must be >= 2");
    let mut n = n;
    let mut s = 0;
    while n > 0 {
        s += n % b;
        n /= b;
    }
    s
}

/// `Σ_{j=1}^{n-1} d_b(j)`.
pub fn cumulative_digit_sum(n: u64, b: u64) -> u64 {
    (1..n).map(|j| digit_sum(j, b)).sum()
}

/// Prime factorization by trial division, primes ascending.
pub fn factorize(n: u64) -> Vec<(u64, u32)> {
    let mut n = n;
    let mut out = Vec::new();
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Euler's totient. `totient(0)` is taken as 0.
pub fn totient(b: u64) -> u64 {
    if b == 0 {
        return 0;
    }
    factorize(b)
        .into_iter()
        .fold(b, |acc, (p, _)| acc / p * (p - 1))
}

/// Number of distinct prime divisors.
pub fn omega(b: u64) -> u64 {
    factorize(b).len() as u64
}

/// `Σ_{i=0}^{k-1} floor(i/m)`, summed block by block: the `q = floor(k/m)`
/// complete blocks contribute `m * C(q, 2)` and the partial block of length
/// `k - m q` contributes `q` per term.
pub fn floor_sum(k: u64, m: u64) -> u64 {
    assert!(m >= 1, "floor_sum modulus must be positive");
    let q = k / m;
    let r = k - m * q;
    m * binom2(q) + r * q
}

/// `C(n, 2)`.
pub fn binom2(n: u64) -> u64 {
    n * n.saturating_sub(1) / 2
}

const MR_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
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

/// Deterministic Miller-Rabin, exact on the whole `i64` range.
pub fn is_prime(n: i64) -> bool {
    if n < 2 {
        return false;
    }
    let n = n as u64;
    for p in MR_BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in MR_BASES {
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

/// Primes `p <= n` in increasing order (sieve of Eratosthenes).
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        out.push(i as u64);
        let mut j = i * i;
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    out
}
