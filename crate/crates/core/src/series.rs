//! Truncated power series over `Q`, `t`-orderings of finite subsets of
//! `Q[[t]]`, and the max–min check for their exponent sequences.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{digits, ExtNat};
use crate::ordering::TieBreak;

/// `c_0 + c_1 t + ... + c_{D-1} t^{D-1}`, known modulo `t^D`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TruncatedSeries {
    coeffs: Vec<BigRational>,
}

impl TruncatedSeries {
    pub fn zero(cap: usize) -> Self {
        assert!(cap >= 1, "series cap must be positive");
        TruncatedSeries { coeffs: vec![BigRational::zero(); cap] }
    }

    pub fn one(cap: usize) -> Self {
        Self::constant(BigRational::one(), cap)
    }

    pub fn constant(c: BigRational, cap: usize) -> Self {
        let mut s = Self::zero(cap);
        s.coeffs[0] = c;
        s
    }

    /// `t^j`, or zero when `j >= cap`.
    pub fn monomial(j: usize, cap: usize) -> Self {
        let mut s = Self::zero(cap);
        if j < cap {
            s.coeffs[j] = BigRational::one();
        }
        s
    }

    /// Integer coefficients `c_0, c_1, ...`; extra ones are dropped, missing
    /// ones are zero.
    pub fn from_integers(coeffs: &[i64], cap: usize) -> Self {
        let mut s = Self::zero(cap);
        for (slot, &c) in s.coeffs.iter_mut().zip(coeffs) {
            *slot = BigRational::from_integer(BigInt::from(c));
        }
        s
    }

    pub fn from_rationals(coeffs: Vec<BigRational>, cap: usize) -> Self {
        let mut s = Self::zero(cap);
        for (slot, c) in s.coeffs.iter_mut().zip(coeffs) {
            *slot = c;
        }
        s
    }

    pub fn cap(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn truncate(&self, cap: usize) -> Self {
        let mut s = Self::zero(cap);
        for (slot, c) in s.coeffs.iter_mut().zip(&self.coeffs) {
            *slot = c.clone();
        }
        s
    }

    pub fn ord_t(&self) -> TOrderValue {
        ord_t(self)
    }
}

impl Add for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn add(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        let cap = self.cap().min(rhs.cap());
        TruncatedSeries { coeffs: (0..cap).map(|i| &self.coeffs[i] + &rhs.coeffs[i]).collect() }
    }
}

impl Sub for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn sub(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        let cap = self.cap().min(rhs.cap());
        TruncatedSeries { coeffs: (0..cap).map(|i| &self.coeffs[i] - &rhs.coeffs[i]).collect() }
    }
}

impl Mul for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn mul(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        let cap = self.cap().min(rhs.cap());
        let mut out = TruncatedSeries::zero(cap);
        for (i, a) in self.coeffs.iter().take(cap).enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().take(cap - i).enumerate() {
                if !b.is_zero() {
                    out.coeffs[i + j] += a * b;
                }
            }
        }
        out
    }
}

impl Neg for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn neg(self) -> TruncatedSeries {
        TruncatedSeries { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

fn write_coeff(f: &mut fmt::Formatter<'_>, c: &BigRational) -> fmt::Result {
    if c.is_integer() {
        write!(f, "{}", c.numer())
    } else {
        write!(f, "{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let magnitude = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
            }
            first = false;
            if i == 0 || !magnitude.is_one() {
                write_coeff(f, &magnitude)?;
            }
            match i {
                0 => {}
                1 => write!(f, "t")?,
                _ => write!(f, "t^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(t^{})", self.cap())
    }
}

/// `ord_t` of a truncated series.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum TOrderValue {
    Exact(u64),
    /// Every coefficient below the cap vanishes.
    AtLeastCap,
}

pub fn ord_t(f: &TruncatedSeries) -> TOrderValue {
    f.coeffs
        .iter()
        .position(|c| !c.is_zero())
        .map_or(TOrderValue::AtLeastCap, |i| TOrderValue::Exact(i as u64))
}

/// A sum of `ord_t` values, some of which may be truncated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SeriesExponent {
    Exact(u64),
    /// At least this much; truncation hides the rest.
    AtLeast(u64),
    Infinite,
}

impl SeriesExponent {
    pub fn zero() -> Self {
        SeriesExponent::Exact(0)
    }

    fn from_order(v: TOrderValue, cap: usize) -> Self {
        match v {
            TOrderValue::Exact(v) => SeriesExponent::Exact(v),
            TOrderValue::AtLeastCap => SeriesExponent::AtLeast(cap as u64),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, SeriesExponent::Exact(_))
    }

    /// Compares two values, or reports that truncation leaves it undecided.
    pub fn try_cmp(&self, other: &Self) -> Result<Ordering> {
        use SeriesExponent::*;
        let undecided = || Error::CapTooSmall {
            cap: 0,
            context: format!("cannot order {self} and {other}"),
        };
        match (*self, *other) {
            (Exact(a), Exact(b)) => Ok(a.cmp(&b)),
            (Infinite, Infinite) => Ok(Ordering::Equal),
            (Infinite, Exact(_)) => Ok(Ordering::Greater),
            (Exact(_), Infinite) => Ok(Ordering::Less),
            (AtLeast(a), Exact(b)) if a > b => Ok(Ordering::Greater),
            (Exact(a), AtLeast(b)) if b > a => Ok(Ordering::Less),
            _ => Err(undecided()),
        }
    }

    /// Whether the two values can be equal given what truncation hides.
    pub fn consistent_with(&self, other: &Self) -> bool {
        use SeriesExponent::*;
        match (*self, *other) {
            (Exact(a), Exact(b)) => a == b,
            (AtLeast(a), Exact(b)) | (Exact(b), AtLeast(a)) => b >= a,
            (Infinite, Exact(_)) | (Exact(_), Infinite) => false,
            _ => true,
        }
    }

    pub fn to_ext_nat(&self) -> Option<ExtNat> {
        match *self {
            SeriesExponent::Exact(v) => Some(ExtNat::from(v)),
            SeriesExponent::Infinite => Some(ExtNat::Infinite),
            SeriesExponent::AtLeast(_) => None,
        }
    }
}

impl Add for SeriesExponent {
    type Output = SeriesExponent;
    fn add(self, rhs: SeriesExponent) -> SeriesExponent {
        use SeriesExponent::*;
        match (self, rhs) {
            (Infinite, _) | (_, Infinite) => Infinite,
            (Exact(a), Exact(b)) => Exact(a + b),
            (Exact(a) | AtLeast(a), Exact(b) | AtLeast(b)) => AtLeast(a + b),
        }
    }
}

impl fmt::Display for SeriesExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeriesExponent::Exact(v) => write!(f, "{v}"),
            SeriesExponent::AtLeast(v) => write!(f, ">={v}"),
            SeriesExponent::Infinite => write!(f, "∞"),
        }
    }
}

/// `φ_b(a)`: the series whose coefficients are the base-`b` digits of `a`.
pub fn phi_b(a: i64, b: u64, cap: usize) -> Result<TruncatedSeries> {
    if b < 2 {
        return Err(Error::domain("phi_b needs b >= 2"));
    }
    let expansion = digits(a as i128, b, cap)?;
    let coeffs: Vec<i64> = expansion.digits.iter().map(|&d| d as i64).collect();
    Ok(TruncatedSeries::from_integers(&coeffs, cap))
}

/// Checks `ord_t(φ_b(a1) - φ_b(a2)) = ord_b(a1 - a2)`, reading a vanishing
/// truncated difference as "at least `cap`".
pub fn congruence_check(b: u64, a1: i64, a2: i64, cap: usize) -> Result<bool> {
    let lhs = ord_t(&(&phi_b(a1, b, cap)? - &phi_b(a2, b, cap)?));
    let rhs = crate::numerics::ord_b(b, a1 as i128 - a2 as i128);
    Ok(match lhs {
        TOrderValue::Exact(v) => rhs == ExtNat::from(v),
        TOrderValue::AtLeastCap => rhs >= ExtNat::from(cap as u64),
    })
}

/// A polynomial in `x` with truncated-series coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesPolynomial {
    /// `c_0(t), ..., c_n(t)`; no trailing zero coefficients.
    coeffs: Vec<TruncatedSeries>,
    cap: usize,
}

impl SeriesPolynomial {
    pub fn new(coeffs: Vec<TruncatedSeries>) -> Self {
        let cap = coeffs.iter().map(TruncatedSeries::cap).min().unwrap_or(1);
        let mut coeffs: Vec<TruncatedSeries> = coeffs.into_iter().map(|c| c.truncate(cap)).collect();
        while coeffs.last().is_some_and(TruncatedSeries::is_zero) {
            coeffs.pop();
        }
        SeriesPolynomial { coeffs, cap }
    }

    pub fn constant(c: TruncatedSeries) -> Self {
        Self::new(vec![c])
    }

    /// The polynomial `x`.
    pub fn x(cap: usize) -> Self {
        Self::new(vec![TruncatedSeries::zero(cap), TruncatedSeries::one(cap)])
    }

    pub fn coeffs(&self) -> &[TruncatedSeries] {
        &self.coeffs
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_t_primitive(&self) -> bool {
        is_t_primitive(self)
    }
}

impl Mul for &SeriesPolynomial {
    type Output = SeriesPolynomial;
    fn mul(self, rhs: &SeriesPolynomial) -> SeriesPolynomial {
        let cap = self.cap.min(rhs.cap);
        if self.coeffs.is_empty() || rhs.coeffs.is_empty() {
            return SeriesPolynomial { coeffs: Vec::new(), cap };
        }
        let mut out = vec![TruncatedSeries::zero(cap); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        SeriesPolynomial::new(out)
    }
}

impl fmt::Display for SeriesPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| {
                let c = c.to_string();
                let c = c.trim_end_matches(&format!(" + O(t^{})", self.cap)).to_string();
                match i {
                    0 => format!("({c})"),
                    1 => format!("({c})·x"),
                    _ => format!("({c})·x^{i}"),
                }
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

/// `q_k(x; t) = Π_j (x - f_j(t))`.
pub fn build_qk(prefix: &[TruncatedSeries], cap: usize) -> SeriesPolynomial {
    let cap = prefix.iter().map(TruncatedSeries::cap).fold(cap, usize::min);
    prefix.iter().fold(SeriesPolynomial::constant(TruncatedSeries::one(cap)), |acc, f| {
        let linear = SeriesPolynomial::new(vec![-f, TruncatedSeries::one(cap)]);
        &acc * &linear
    })
}

/// `p(f(t); t)` by Horner's rule.
pub fn eval_poly(p: &SeriesPolynomial, f: &TruncatedSeries) -> TruncatedSeries {
    let cap = p.cap.min(f.cap());
    p.coeffs
        .iter()
        .rev()
        .fold(TruncatedSeries::zero(cap), |acc, c| &(&acc * f) + c)
}

/// Some `x`-coefficient has a nonzero constant term.
pub fn is_t_primitive(p: &SeriesPolynomial) -> bool {
    p.coeffs.iter().any(|c| !c.coeffs[0].is_zero())
}

#[derive(Clone, Debug, Serialize)]
pub struct TOrdering {
    /// Positions in `U` of the chosen elements.
    pub indices: Vec<usize>,
    pub exponents: Vec<SeriesExponent>,
}

#[derive(Clone, Debug)]
pub struct TOrderingOptions {
    pub policy: TieBreak,
    /// Index in `U` of the first element.
    pub start: Option<usize>,
}

impl Default for TOrderingOptions {
    fn default() -> Self {
        TOrderingOptions { policy: TieBreak::Canonical, start: None }
    }
}

fn difference_order(u: &[TruncatedSeries], i: usize, j: usize) -> SeriesExponent {
    if i == j || u[i] == u[j] {
        return SeriesExponent::Infinite;
    }
    let cap = u[i].cap().min(u[j].cap());
    SeriesExponent::from_order(ord_t(&(&u[i] - &u[j])), cap)
}

/// A greedy `t`-ordering of the finite list `U`. List position is the
/// canonical order; identical entries count as one element.
pub fn t_ordering(u: &[TruncatedSeries], k: usize, opts: &TOrderingOptions) -> Result<TOrdering> {
    if u.is_empty() {
        return Err(Error::EmptySet);
    }
    let mut rng = match opts.policy {
        TieBreak::Canonical => None,
        TieBreak::Seeded(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
    };
    let start = match (opts.start, rng.as_mut()) {
        (Some(s), _) if s >= u.len() => {
            return Err(Error::domain(format!("start index {s} is outside U")));
        }
        (Some(s), _) => s,
        (None, Some(rng)) => rng.gen_range(0..u.len()),
        (None, None) => 0,
    };
    let mut out = TOrdering { indices: vec![start], exponents: vec![SeriesExponent::zero()] };
    for _ in 0..k {
        let values: Vec<SeriesExponent> = (0..u.len())
            .map(|cand| {
                out.indices
                    .iter()
                    .fold(SeriesExponent::zero(), |acc, &j| acc + difference_order(u, cand, j))
            })
            .collect();
        let exact_min = values
            .iter()
            .filter_map(|v| match v {
                SeriesExponent::Exact(x) => Some(*x),
                _ => None,
            })
            .min();
        let hidden = values.iter().enumerate().find_map(|(i, v)| match (v, exact_min) {
            (SeriesExponent::AtLeast(a), Some(m)) if *a <= m => Some((i, *v)),
            (SeriesExponent::AtLeast(_), None) => Some((i, *v)),
            _ => None,
        });
        if let Some((i, v)) = hidden {
            return Err(Error::CapTooSmall {
                cap: u[i].cap(),
                context: format!("t-ordering step {}: candidate {i} has value {v}", out.indices.len()),
            });
        }
        let best = exact_min.map_or(SeriesExponent::Infinite, SeriesExponent::Exact);
        let minimizers: Vec<usize> = (0..u.len()).filter(|&i| values[i] == best).collect();
        let pick = if best == SeriesExponent::Infinite {
            0
        } else {
            match rng.as_mut() {
                Some(rng) => *minimizers.choose(rng).expect("nonempty"),
                None => minimizers[0],
            }
        };
        out.indices.push(pick);
        out.exponents.push(best);
    }
    Ok(out)
}

/// A random `t`-primitive polynomial of degree `k` in `x`: integer
/// coefficients in `[-3, 3]` on `x^i t^j`, `j <= 3`, rejection-sampled.
pub fn random_primitive(k: usize, cap: usize, rng: &mut impl Rng) -> SeriesPolynomial {
    loop {
        let coeffs: Vec<TruncatedSeries> = (0..=k)
            .map(|_| {
                let c: Vec<i64> = (0..4).map(|_| rng.gen_range(-3..=3)).collect();
                TruncatedSeries::from_integers(&c, cap)
            })
            .collect();
        let p = SeriesPolynomial::new(coeffs);
        if p.degree() == Some(k) && is_t_primitive(&p) {
            return p;
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SampleViolation {
    pub polynomial: String,
    pub min_order: SeriesExponent,
}

#[derive(Clone, Debug, Serialize)]
pub struct MaxMinReport {
    pub k: usize,
    pub alpha_k: SeriesExponent,
    /// `min_f ord_t(q_k(f))`.
    pub witness_min: SeriesExponent,
    pub witness_equal: bool,
    pub samples: usize,
    pub violations: Vec<SampleViolation>,
}

impl MaxMinReport {
    pub fn passed(&self) -> bool {
        self.witness_equal && self.violations.is_empty()
    }
}

fn min_order_over(p: &SeriesPolynomial, u: &[TruncatedSeries]) -> Result<SeriesExponent> {
    let mut exact: Option<u64> = None;
    let mut hidden: Option<u64> = None;
    for f in u {
        let value = eval_poly(p, f);
        match ord_t(&value) {
            TOrderValue::Exact(v) => exact = Some(exact.map_or(v, |e| e.min(v))),
            TOrderValue::AtLeastCap => {
                let c = value.cap() as u64;
                hidden = Some(hidden.map_or(c, |h| h.min(c)));
            }
        }
    }
    match (exact, hidden) {
        (Some(e), Some(h)) if h <= e => Err(Error::CapTooSmall {
            cap: h as usize,
            context: format!("minimum of ord_t over U is hidden below {e}"),
        }),
        (Some(e), _) => Ok(SeriesExponent::Exact(e)),
        (None, Some(h)) => Ok(SeriesExponent::AtLeast(h)),
        (None, None) => unreachable!("U is nonempty"),
    }
}

/// Checks `α_k(U) = min_f ord_t(q_k(f))` and, for `samples` random
/// primitive polynomials `p` of degree `k`, `min_f ord_t(p(f)) <= α_k(U)`.
pub fn maxmin_check(u: &[TruncatedSeries], k: usize, samples: usize, seed: u64) -> Result<MaxMinReport> {
    let ordering = t_ordering(u, k, &TOrderingOptions::default())?;
    let alpha_k = ordering.exponents[k];
    let prefix: Vec<TruncatedSeries> = ordering.indices[..k].iter().map(|&i| u[i].clone()).collect();
    let cap = u.iter().map(TruncatedSeries::cap).min().expect("nonempty");
    let qk = build_qk(&prefix, cap);
    let witness_min = min_order_over(&qk, u)?;
    let witness_equal = witness_min.consistent_with(&alpha_k);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = Vec::new();
    for _ in 0..samples {
        let p = random_primitive(k, cap, &mut rng);
        let m = min_order_over(&p, u)?;
        let exceeds = match alpha_k {
            SeriesExponent::Infinite => false,
            _ => m.try_cmp(&alpha_k).map_err(|_| Error::CapTooSmall {
                cap,
                context: format!("sample bound {m} vs α_{k} = {alpha_k}"),
            })? == Ordering::Greater,
        };
        if exceeds {
            violations.push(SampleViolation { polynomial: p.to_string(), min_order: m });
        }
    }
    Ok(MaxMinReport { k, alpha_k, witness_min, witness_equal, samples, violations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intsets::SetDescriptor;
    use crate::ordering::{exponent_sequence, EngineOptions};

    fn series(c: &[i64], cap: usize) -> TruncatedSeries {
        TruncatedSeries::from_integers(c, cap)
    }

    fn phi_set(set: &[i64], b: u64, cap: usize) -> Vec<TruncatedSeries> {
        set.iter().map(|&a| phi_b(a, b, cap).unwrap()).collect()
    }

    #[test]
    fn ord_t_examples() {
        assert_eq!(ord_t(&series(&[0, 0, 1, 1], 8)), TOrderValue::Exact(2));
        assert_eq!(ord_t(&TruncatedSeries::zero(8)), TOrderValue::AtLeastCap);
        assert_eq!(ord_t(&series(&[3, -1], 8)), TOrderValue::Exact(0));
    }

    #[test]
    fn arithmetic_truncates_to_smaller_cap() {
        let a = series(&[1, 1], 3);
        let b = series(&[1, -1, 0, 0, 5], 6);
        assert_eq!(&a * &b, series(&[1, 0, -1], 3));
        assert_eq!((&a + &b).cap(), 3);
        let half = TruncatedSeries::constant(BigRational::new(1.into(), 2.into()), 4);
        assert_eq!(&(&half + &half), &TruncatedSeries::one(4));
        assert_eq!(series(&[1, -1, 0, 3], 5).to_string(), "1 - t + 3t^3 + O(t^5)");
        assert_eq!(TruncatedSeries::zero(2).to_string(), "0 + O(t^2)");
    }

    #[test]
    fn phi_examples() {
        assert_eq!(phi_b(10, 3, 4).unwrap(), series(&[1, 0, 1, 0], 4));
        assert_eq!(phi_b(-1, 2, 4).unwrap(), series(&[1, 1, 1, 1], 4));
        for b in 2..7 {
            assert!(phi_b(0, b, 5).unwrap().is_zero());
            assert_eq!(phi_b(1, b, 5).unwrap(), TruncatedSeries::one(5));
        }
        assert!(phi_b(3, 1, 4).is_err());
    }

    #[test]
    fn congruence_examples() {
        assert!(congruence_check(10, 123, 23, 6).unwrap());
        assert!(congruence_check(7, 40, 40, 6).unwrap());
        assert!(congruence_check(2, 3, 2, 6).unwrap());
        for b in 2..=10u64 {
            for a1 in -60..60 {
                for a2 in [-17i64, 0, 5, 64] {
                    assert!(congruence_check(b, a1, a2, 12).unwrap(), "b={b} {a1} {a2}");
                }
            }
        }
    }

    #[test]
    fn qk_and_evaluation() {
        let cap = 6;
        let one = SeriesPolynomial::constant(TruncatedSeries::one(cap));
        assert_eq!(build_qk(&[], cap), one);
        let f = series(&[2, 1], cap);
        let q1 = build_qk(std::slice::from_ref(&f), cap);
        assert_eq!(q1, SeriesPolynomial::new(vec![-&f, TruncatedSeries::one(cap)]));

        let x2 = &SeriesPolynomial::x(cap) * &SeriesPolynomial::x(cap);
        assert_eq!(eval_poly(&x2, &TruncatedSeries::monomial(1, cap)), TruncatedSeries::monomial(2, cap));
        let c = series(&[4, 0, -2], cap);
        assert_eq!(eval_poly(&SeriesPolynomial::constant(c.clone()), &f), c);

        let prefix = phi_set(&[3, 7, 12], 2, cap);
        let q = build_qk(&prefix, cap);
        assert_eq!(q.degree(), Some(3));
        for f in &prefix {
            assert_eq!(ord_t(&eval_poly(&q, f)), TOrderValue::AtLeastCap);
        }
    }

    #[test]
    fn primitivity() {
        let cap = 5;
        let q = build_qk(&phi_set(&[0, 1, 2, 9], 3, cap), cap);
        assert!(is_t_primitive(&q));
        let p = SeriesPolynomial::new(vec![TruncatedSeries::monomial(2, cap), TruncatedSeries::monomial(1, cap)]);
        assert!(!is_t_primitive(&p));
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let a = random_primitive(2, cap, &mut rng);
            let b = random_primitive(3, cap, &mut rng);
            assert!(is_t_primitive(&(&a * &b)));
            assert_eq!((&a * &b).degree(), Some(5));
        }
    }

    #[test]
    fn t_ordering_examples() {
        let u = phi_set(&[0, 1, 2, 3, 4, 5], 6, 6);
        let ord = t_ordering(&u, 5, &TOrderingOptions::default()).unwrap();
        assert_eq!(ord.exponents, vec![SeriesExponent::Exact(0); 6]);

        let single = vec![series(&[1, 2], 4)];
        let ord = t_ordering(&single, 3, &TOrderingOptions::default()).unwrap();
        assert_eq!(
            ord.exponents,
            vec![SeriesExponent::Exact(0), SeriesExponent::Infinite, SeriesExponent::Infinite, SeriesExponent::Infinite]
        );

        let u = phi_set(&(0..16).collect::<Vec<_>>(), 2, 8);
        let ord = t_ordering(&u, 15, &TOrderingOptions::default()).unwrap();
        for w in ord.exponents.windows(2) {
            assert_ne!(w[0].try_cmp(&w[1]).unwrap(), Ordering::Greater);
        }
    }

    #[test]
    fn t_ordering_reports_undecidable_caps() {
        // 0 is known to three binary digits, where it agrees with 8
        let u = vec![phi_b(0, 2, 3).unwrap(), phi_b(8, 2, 5).unwrap(), phi_b(1, 2, 5).unwrap()];
        assert!(t_ordering(&u, 1, &TOrderingOptions::default()).is_ok());
        assert!(matches!(
            t_ordering(&u, 2, &TOrderingOptions::default()),
            Err(Error::CapTooSmall { .. })
        ));
    }

    #[test]
    fn transport_matches_integer_orderings() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..40 {
            let b = rng.gen_range(2..=10u64);
            let n = rng.gen_range(1..=10usize);
            let mut set: Vec<i64> = (0..n).map(|_| rng.gen_range(-200..200)).collect();
            set.sort_unstable();
            set.dedup();
            let k = set.len() - 1;
            let s = SetDescriptor::finite(set.iter().copied());
            let expected = exponent_sequence(&s, b, k, &EngineOptions::default()).unwrap().values;
            let u = phi_set(&set, b, 24);
            let got = t_ordering(&u, k, &TOrderingOptions::default()).unwrap();
            let got: Vec<ExtNat> = got.exponents.iter().map(|e| e.to_ext_nat().unwrap()).collect();
            assert_eq!(got, expected, "set={set:?} b={b}");
        }
    }

    #[test]
    fn maxmin_examples() {
        let u = phi_set(&[0, 1, 2, 3, 4, 5], 6, 6);
        let report = maxmin_check(&u, 4, 30, 1).unwrap();
        assert_eq!(report.alpha_k, SeriesExponent::Exact(0));
        assert!(report.passed(), "{report:?}");

        let u = phi_set(&(0..12).collect::<Vec<_>>(), 2, 10);
        for k in 0..12 {
            let report = maxmin_check(&u, k, 25, k as u64).unwrap();
            assert!(report.passed(), "k={k} {report:?}");
        }
        let report = maxmin_check(&u, 0, 10, 3).unwrap();
        assert_eq!(report.alpha_k, SeriesExponent::Exact(0));
        assert_eq!(report.witness_min, SeriesExponent::Exact(0));
    }

    #[test]
    fn seeded_t_orderings_share_exponents() {
        let u = phi_set(&[-9, -4, 0, 3, 6, 7, 12, 27, 30, 81], 3, 12);
        let reference = t_ordering(&u, 9, &TOrderingOptions::default()).unwrap().exponents;
        for seed in 0..25 {
            let opts = TOrderingOptions { policy: TieBreak::Seeded(seed), start: None };
            assert_eq!(t_ordering(&u, 9, &opts).unwrap().exponents, reference, "seed={seed}");
        }
    }
}
