//! Factored numbers and the generalized factorials, integers and binomial
//! coefficients of a pair `(S, T)`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Pow, Zero};
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::closedforms::beta_floor;
use crate::error::{Error, Result};
use crate::intsets::SetDescriptor;
use crate::numerics::{cumulative_digit_sum, digit_sum, factorize, is_prime, omega, totient, ExtNat};
use crate::ordering::{exponent_sequence, pairwise_valuation_sum, EngineOptions, TestSequence};

/// `Π b^{e_b}` over bases `b >= 0`, with `b^∞ = 0` for `b = 0` and `b >= 2`,
/// `1^∞ = 1` and `0^0 = 1`.
///
/// Stored normalized: no zero exponents, no base 1, and every zero value is
/// the single entry `0^∞`. Equality compares bases and exponents, so `4` and
/// `2^2` differ until both are refined to primes.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct FactoredNumber {
    exponents: BTreeMap<u64, ExtNat>,
}

impl FactoredNumber {
    pub fn one() -> Self {
        FactoredNumber::default()
    }

    pub fn zero() -> Self {
        FactoredNumber { exponents: BTreeMap::from([(0, ExtNat::Infinite)]) }
    }

    pub fn from_exponents(pairs: impl IntoIterator<Item = (u64, ExtNat)>) -> Self {
        let mut out = FactoredNumber::one();
        for (b, e) in pairs {
            out.multiply_power(b, e);
        }
        out
    }

    pub fn from_u64_exponents(pairs: &[(u64, u64)]) -> Self {
        Self::from_exponents(pairs.iter().map(|&(b, e)| (b, ExtNat::from(e))))
    }

    /// Multiplies in `b^e`.
    pub fn multiply_power(&mut self, b: u64, e: ExtNat) {
        if self.is_zero() || e.is_zero() || b == 1 {
            return;
        }
        if b == 0 || e.is_infinite() {
            *self = FactoredNumber::zero();
            return;
        }
        let slot = self.exponents.entry(b).or_insert_with(ExtNat::zero);
        *slot = &*slot + &e;
    }

    pub fn is_zero(&self) -> bool {
        self.exponents.contains_key(&0)
    }

    pub fn is_one(&self) -> bool {
        self.exponents.is_empty()
    }

    /// Bases with nonzero exponent, ascending, with their exponents.
    pub fn exponents(&self) -> &BTreeMap<u64, ExtNat> {
        &self.exponents
    }

    pub fn exponent(&self, b: u64) -> ExtNat {
        self.exponents.get(&b).cloned().unwrap_or_else(ExtNat::zero)
    }

    pub fn to_decimal(&self) -> BigUint {
        to_decimal(self)
    }

    pub fn refine_to_primes(&self) -> FactoredNumber {
        refine_to_primes(self)
    }

    pub fn mul(&self, other: &FactoredNumber) -> FactoredNumber {
        let mut out = self.clone();
        for (&b, e) in &other.exponents {
            out.multiply_power(b, e.clone());
        }
        out
    }

    /// True when every base is prime.
    pub fn is_prime_factored(&self) -> bool {
        self.exponents.keys().all(|&b| b <= i64::MAX as u64 && is_prime(b as i64))
    }
}

impl fmt::Display for FactoredNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        if self.is_one() {
            return write!(f, "1");
        }
        let terms: Vec<String> = self
            .exponents
            .iter()
            .map(|(b, e)| if e == &ExtNat::from(1) { b.to_string() } else { format!("{b}^{e}") })
            .collect();
        write!(f, "{}", terms.join(" * "))
    }
}

impl FromStr for FactoredNumber {
    type Err = Error;

    /// Parses `2^24 * 3^10 * 7`, `0` or `1`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("malformed factored number `{s}`"));
        let mut out = FactoredNumber::one();
        for term in s.split('*') {
            let term = term.trim();
            let (base, exp) = match term.split_once('^') {
                Some((b, e)) => (b.trim(), ExtNat::parse_plain(e.trim()).map_err(|_| bad())?),
                None => (term, ExtNat::from(1)),
            };
            let base: u64 = base.parse().map_err(|_| bad())?;
            out.multiply_power(base, exp);
        }
        Ok(out)
    }
}

impl Serialize for FactoredNumber {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

pub fn to_decimal(f: &FactoredNumber) -> BigUint {
    if f.is_zero() {
        return BigUint::zero();
    }
    f.exponents.iter().fold(BigUint::one(), |acc, (&b, e)| {
        let e = e.finite().expect("normalized exponents are finite");
        acc * Pow::pow(BigUint::from(b), e)
    })
}

pub fn refine_to_primes(f: &FactoredNumber) -> FactoredNumber {
    if f.is_zero() {
        return FactoredNumber::zero();
    }
    let mut out = FactoredNumber::one();
    for (&b, e) in &f.exponents {
        let e = e.finite().expect("normalized exponents are finite");
        for (p, k) in factorize(b) {
            out.multiply_power(p, ExtNat::Finite(e * BigUint::from(k)));
        }
    }
    out
}

/// Per-base comparison of exponents; every number divides zero.
pub fn exponentwise_divides(a: &FactoredNumber, b: &FactoredNumber) -> bool {
    if b.is_zero() {
        return true;
    }
    if a.is_zero() {
        return false;
    }
    a.exponents.iter().all(|(base, e)| e <= &b.exponent(*base))
}

/// Divisibility of the values.
pub fn integer_divides(a: &FactoredNumber, b: &FactoredNumber) -> bool {
    exponentwise_divides(&refine_to_primes(a), &refine_to_primes(b))
}

/// An upper cutoff for a base range.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Cutoff {
    Explicit(u64),
    /// Chosen so that every omitted base contributes exponent 0; known for
    /// the integers and the primes only.
    Auto,
}

/// The base set `T`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum BaseSet {
    ExplicitList(Vec<u64>),
    /// `lo..=hi`.
    Range { lo: u64, hi: u64 },
    PrimesUpTo(Cutoff),
    /// `2..=cutoff`.
    BasesUpTo(Cutoff),
}

impl BaseSet {
    /// Parses `list:2,3,6`, `range:2..12`, `primes:20`, `primes:auto`,
    /// `upto:12` or `upto:auto`.
    pub fn parse(spec: &str) -> Result<Self> {
        let bad = |why: &str| Error::Parse(format!("base set `{spec}`: {why}"));
        let cutoff = |s: &str| -> Result<Cutoff> {
            if s == "auto" {
                Ok(Cutoff::Auto)
            } else {
                s.parse().map(Cutoff::Explicit).map_err(|_| bad("bad cutoff"))
            }
        };
        if let Some(rest) = spec.strip_prefix("list:") {
            let bases = if rest.trim().is_empty() {
                Vec::new()
            } else {
                rest.split(',')
                    .map(|s| s.trim().parse::<u64>().map_err(|_| bad("bases must be nonnegative integers")))
                    .collect::<Result<Vec<_>>>()?
            };
            Ok(BaseSet::ExplicitList(bases))
        } else if let Some(rest) = spec.strip_prefix("range:") {
            let (lo, hi) = rest.split_once("..").ok_or_else(|| bad("expected lo..hi"))?;
            let lo = lo.trim().parse().map_err(|_| bad("bad lower end"))?;
            let hi = hi.trim().parse().map_err(|_| bad("bad upper end"))?;
            Ok(BaseSet::Range { lo, hi })
        } else if let Some(rest) = spec.strip_prefix("primes:") {
            Ok(BaseSet::PrimesUpTo(cutoff(rest.trim())?))
        } else if let Some(rest) = spec.strip_prefix("upto:") {
            Ok(BaseSet::BasesUpTo(cutoff(rest.trim())?))
        } else {
            Err(bad("expected list:, range:, primes: or upto:"))
        }
    }

    /// The finite list of bases used for the `k`-th factorial of `S`.
    pub fn resolve(&self, set: &SetDescriptor, k: u64) -> Result<Vec<u64>> {
        let mut bases = match self {
            BaseSet::ExplicitList(v) => v.clone(),
            BaseSet::Range { lo, hi } => (*lo..=*hi).collect(),
            BaseSet::PrimesUpTo(c) => {
                let top = auto_cutoff(*c, set, k)?;
                (2..=top).filter(|&b| is_prime(b as i64)).collect()
            }
            BaseSet::BasesUpTo(c) => (2..=auto_cutoff(*c, set, k)?).collect(),
        };
        bases.sort_unstable();
        bases.dedup();
        Ok(bases)
    }

    pub fn label(&self) -> String {
        let cut = |c: &Cutoff| match c {
            Cutoff::Explicit(n) => n.to_string(),
            Cutoff::Auto => "auto".into(),
        };
        match self {
            BaseSet::ExplicitList(v) => {
                format!("list:{}", v.iter().map(u64::to_string).collect::<Vec<_>>().join(","))
            }
            BaseSet::Range { lo, hi } => format!("range:{lo}..{hi}"),
            BaseSet::PrimesUpTo(c) => format!("primes:{}", cut(c)),
            BaseSet::BasesUpTo(c) => format!("upto:{}", cut(c)),
        }
    }
}

impl fmt::Display for BaseSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// Largest base that can carry a nonzero exponent in `k!_{S,N}`.
fn auto_cutoff(c: Cutoff, set: &SetDescriptor, k: u64) -> Result<u64> {
    match (c, set) {
        (Cutoff::Explicit(n), _) => Ok(n),
        (Cutoff::Auto, SetDescriptor::Integers) => Ok(k),
        (Cutoff::Auto, SetDescriptor::Primes) => {
            // φ(b) >= sqrt(b/2), so φ(b) <= k forces b <= 2k^2
            let limit = 2 * k * k + 2;
            Ok((2..=limit).filter(|&b| totient(b) + omega(b) <= k).max().unwrap_or(1))
        }
        (Cutoff::Auto, _) => Err(Error::domain(format!(
            "automatic base cutoff is only available for Z and P; give an explicit cutoff for {set}"
        ))),
    }
}

/// A factored result together with how it was obtained.
#[derive(Clone, Debug, Serialize)]
pub struct Computed {
    pub value: FactoredNumber,
    /// The resolved base set.
    pub bases: Vec<u64>,
    /// False when some exponent came from a window-limited search.
    pub certified: bool,
}

type ExponentTable = Vec<(u64, Vec<ExtNat>)>;

/// `α_0(S, b), ..., α_k(S, b)` for each base, in base order.
fn exponent_table(
    set: &SetDescriptor,
    bases: &[u64],
    k: usize,
    opts: &EngineOptions,
) -> Result<(ExponentTable, bool)> {
    let rows: Vec<Result<(u64, Vec<ExtNat>, bool)>> = bases
        .par_iter()
        .map(|&b| {
            let seq = exponent_sequence(set, b, k, opts)?;
            Ok((b, seq.values, seq.certified))
        })
        .collect();
    let mut table = Vec::with_capacity(rows.len());
    let mut certified = true;
    for row in rows {
        let (b, values, c) = row?;
        certified &= c;
        table.push((b, values));
    }
    Ok((table, certified))
}

/// `k!_{S,T} = Π_{b∈T} b^{α_k(S,b)}`.
pub fn factorial(set: &SetDescriptor, t: &BaseSet, k: u64, opts: &EngineOptions) -> Result<Computed> {
    let bases = t.resolve(set, k)?;
    let (table, certified) = exponent_table(set, &bases, k as usize, opts)?;
    let value = FactoredNumber::from_exponents(table.into_iter().map(|(b, v)| (b, v[k as usize].clone())));
    Ok(Computed { value, bases, certified })
}

/// `[n]_{S,T} = n!_{S,T} / (n-1)!_{S,T}`, and `0` once `n >= |S|`.
pub fn gen_integer(set: &SetDescriptor, t: &BaseSet, n: u64, opts: &EngineOptions) -> Result<Computed> {
    if n == 0 {
        return Err(Error::domain("generalized integers start at n = 1"));
    }
    let bases = t.resolve(set, n)?;
    if set.size().is_some_and(|size| n >= size as u64) {
        return Ok(Computed { value: FactoredNumber::zero(), bases, certified: true });
    }
    // 1^x = 1 whatever x is, and α_n(S, 1) = ∞
    let used: Vec<u64> = bases.iter().copied().filter(|&b| b != 1).collect();
    let (table, certified) = exponent_table(set, &used, n as usize, opts)?;
    let mut value = FactoredNumber::one();
    for (b, v) in table {
        value.multiply_power(b, v[n as usize].checked_sub(&v[n as usize - 1])?);
    }
    Ok(Computed { value, bases, certified })
}

/// `binom(k, l)_{S,T} = k!_{S,T} / (l!_{S,T} (k-l)!_{S,T})` for `k < |S|`.
pub fn gen_binomial(
    set: &SetDescriptor,
    t: &BaseSet,
    k: u64,
    l: u64,
    opts: &EngineOptions,
) -> Result<Computed> {
    if l > k {
        return Err(Error::domain(format!("binomial needs l <= k, got k = {k}, l = {l}")));
    }
    if set.size().is_some_and(|size| k >= size as u64) {
        return Err(Error::domain(format!("binomial needs k < |S| = {}", set.cardinality())));
    }
    let bases = t.resolve(set, k)?;
    let used: Vec<u64> = bases.iter().copied().filter(|&b| b != 1).collect();
    let (table, certified) = exponent_table(set, &used, k as usize, opts)?;
    let mut value = FactoredNumber::one();
    for (b, v) in table {
        let (k, l) = (k as usize, l as usize);
        let e = v[k].checked_sub(&(&v[l] + &v[k - l]))?;
        value.multiply_power(b, e);
    }
    Ok(Computed { value, bases, certified })
}

/// Outcome of comparing `Π_b b^{γ(S,b,s)}` with `Π_{i<=n} i!_{S,T}`.
#[derive(Clone, Debug, Serialize)]
pub struct PairwiseReport {
    pub pairwise: FactoredNumber,
    pub factorial_product: FactoredNumber,
    /// The factorial product divides the pairwise product, base by base.
    pub divides: bool,
    pub equal: bool,
    pub certified: bool,
}

pub fn pairwise_multiple_check(
    set: &SetDescriptor,
    t: &BaseSet,
    seq: &TestSequence,
    opts: &EngineOptions,
) -> Result<PairwiseReport> {
    if seq.is_empty() {
        return Err(Error::domain("empty test sequence"));
    }
    let n = seq.len() - 1;
    let bases = t.resolve(set, n as u64)?;
    let used: Vec<u64> = bases.iter().copied().filter(|&b| b != 1).collect();
    let (table, certified) = exponent_table(set, &used, n, opts)?;
    let mut pairwise = FactoredNumber::one();
    let mut factorial_product = FactoredNumber::one();
    for (b, v) in table {
        pairwise.multiply_power(b, pairwise_valuation_sum(seq.elements(), b));
        factorial_product.multiply_power(b, v.iter().sum());
    }
    Ok(PairwiseReport {
        divides: exponentwise_divides(&factorial_product, &pairwise),
        equal: factorial_product == pairwise,
        pairwise,
        factorial_product,
        certified,
    })
}

/// `ν̄(n, b) = (2 S_b(n) - (n - 1) d_b(n)) / (b - 1)` with
/// `S_b(n) = Σ_{j<n} d_b(j)`.
pub fn nu_bar(n: u64, b: u64) -> Result<u64> {
    if n == 0 || b < 2 {
        return Err(Error::domain("nu_bar needs n >= 1 and b >= 2"));
    }
    let num = 2 * cumulative_digit_sum(n, b) as i128 - (n as i128 - 1) * digit_sum(n, b) as i128;
    if num < 0 || num % (b as i128 - 1) != 0 {
        return Err(Error::CrossCheck(format!("nu_bar({n}, {b}) is not a nonnegative integer")));
    }
    Ok((num / (b as i128 - 1)) as u64)
}

/// `Π_{b=2}^{x} b^{ν̄(n,b)}`.
pub fn partial_row_product(n: u64, x: u64) -> Result<FactoredNumber> {
    if n == 0 || x > n.max(1) {
        return Err(Error::domain(format!("partial row product needs 1 <= n and x <= n, got n = {n}, x = {x}")));
    }
    let mut out = FactoredNumber::one();
    for b in 2..=x {
        out.multiply_power(b, ExtNat::from(nu_bar(n, b)?));
    }
    Ok(out)
}

/// Product of the row `binom(n, 0)_{Z,N}, ..., binom(n, n)_{Z,N}`, from the
/// digit formula, checked against the product of the binomials themselves.
pub fn row_product(n: u64) -> Result<FactoredNumber> {
    let from_digits = partial_row_product(n, n)?;
    let mut direct = FactoredNumber::one();
    for b in 2..=n {
        let e: u64 = (0..=n).map(|l| beta_floor(n, l, b)).sum();
        direct.multiply_power(b, ExtNat::from(e));
    }
    if direct != from_digits {
        return Err(Error::CrossCheck(format!(
            "row {n}: digit formula gives {from_digits}, binomials give {direct}"
        )));
    }
    Ok(from_digits)
}

/// `k!_{P,T}` from the closed form; `T` may not contain 0.
pub fn factorial_p(k: u64, t: &BaseSet) -> Result<FactoredNumber> {
    let bases = t.resolve(&SetDescriptor::Primes, k)?;
    if bases.contains(&0) {
        return Err(Error::domain("the closed form for P needs 0 outside T"));
    }
    let mut out = FactoredNumber::one();
    for b in bases {
        let e = if b == 1 {
            if k == 0 { ExtNat::zero() } else { ExtNat::Infinite }
        } else {
            ExtNat::from(crate::closedforms::alpha_p(k, b))
        };
        out.multiply_power(b, e);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_integer::Integer;

    fn opts() -> EngineOptions {
        EngineOptions::default()
    }

    fn upto(n: u64) -> BaseSet {
        BaseSet::BasesUpTo(Cutoff::Explicit(n))
    }

    fn dec(f: &FactoredNumber) -> String {
        f.to_decimal().to_string()
    }

    #[test]
    fn normalization_and_conventions() {
        assert_eq!(FactoredNumber::from_u64_exponents(&[(2, 0), (3, 0)]), FactoredNumber::one());
        assert_eq!(FactoredNumber::from_exponents([(1, ExtNat::Infinite)]), FactoredNumber::one());
        assert!(FactoredNumber::from_exponents([(5, ExtNat::Infinite)]).is_zero());
        assert!(FactoredNumber::from_exponents([(0, ExtNat::Infinite)]).is_zero());
        assert_eq!(FactoredNumber::from_u64_exponents(&[(0, 0)]), FactoredNumber::one());
        assert!(FactoredNumber::from_u64_exponents(&[(0, 2)]).is_zero());
        assert_eq!(FactoredNumber::one().to_string(), "1");
        assert_eq!(FactoredNumber::zero().to_string(), "0");
    }

    #[test]
    fn text_format_round_trips() {
        let f = FactoredNumber::from_u64_exponents(&[(2, 24), (3, 10), (5, 3), (7, 1), (11, 1)]);
        assert_eq!(f.to_string(), "2^24 * 3^10 * 5^3 * 7 * 11");
        assert_eq!("2^24 * 3^10 * 5^3 * 7 * 11".parse::<FactoredNumber>().unwrap(), f);
        assert_eq!("0".parse::<FactoredNumber>().unwrap(), FactoredNumber::zero());
        assert_eq!("1".parse::<FactoredNumber>().unwrap(), FactoredNumber::one());
        assert!("2^x".parse::<FactoredNumber>().is_err());
    }

    #[test]
    fn decimal_and_refinement() {
        assert_eq!(dec(&FactoredNumber::from_u64_exponents(&[(2, 7), (3, 3)])), "3456");
        assert_eq!(dec(&FactoredNumber::one()), "1");
        assert_eq!(dec(&FactoredNumber::zero()), "0");
        let six_sq = FactoredNumber::from_u64_exponents(&[(6, 2)]);
        assert_eq!(refine_to_primes(&six_sq), FactoredNumber::from_u64_exponents(&[(2, 2), (3, 2)]));
        let primes = FactoredNumber::from_u64_exponents(&[(2, 5), (7, 1)]);
        assert_eq!(refine_to_primes(&primes), primes);
    }

    #[test]
    fn factorial_examples() {
        let z = SetDescriptor::Integers;
        let f = factorial(&z, &upto(12), 12, &opts()).unwrap();
        assert_eq!(
            refine_to_primes(&f.value),
            FactoredNumber::from_u64_exponents(&[(2, 24), (3, 10), (5, 3), (7, 1), (11, 1)])
        );
        assert_eq!(dec(&f.value), "9535274090496000");
        assert!(f.certified);
        for set in [z.clone(), SetDescriptor::Primes, SetDescriptor::finite([1, 4, 9])] {
            assert!(factorial(&set, &upto(10), 0, &opts()).unwrap().value.is_one());
            assert!(factorial(&set, &BaseSet::ExplicitList(vec![]), 3, &opts()).unwrap().value.is_one());
        }
        let mut plain = BigUint::one();
        for k in 1..=20u64 {
            plain *= k;
            let f = factorial(&z, &BaseSet::PrimesUpTo(Cutoff::Explicit(k)), k, &opts()).unwrap();
            assert_eq!(f.value.to_decimal(), plain, "k={k}");
        }
    }

    #[test]
    fn integer_examples() {
        let z = SetDescriptor::Integers;
        assert_eq!(dec(&gen_integer(&z, &upto(12), 12, &opts()).unwrap().value), "3456");
        assert_eq!(
            refine_to_primes(&gen_integer(&z, &upto(60), 60, &opts()).unwrap().value),
            FactoredNumber::from_u64_exponents(&[(2, 13), (3, 6), (5, 6)])
        );
        let s = SetDescriptor::finite([0, 3, 7]);
        assert!(gen_integer(&s, &upto(6), 3, &opts()).unwrap().value.is_zero());
        assert!(gen_integer(&s, &upto(6), 5, &opts()).unwrap().value.is_zero());
        assert!(gen_integer(&z, &upto(6), 0, &opts()).is_err());
    }

    #[test]
    fn telescoping() {
        for set in [SetDescriptor::Integers, SetDescriptor::Primes, SetDescriptor::progression(1, 3).unwrap()] {
            let t = upto(9);
            let mut product = FactoredNumber::one();
            for n in 1..=9 {
                product = product.mul(&gen_integer(&set, &t, n, &opts()).unwrap().value);
                assert_eq!(product, factorial(&set, &t, n, &opts()).unwrap().value, "{set} n={n}");
            }
        }
    }

    #[test]
    fn binomial_examples() {
        let z = SetDescriptor::Integers;
        let c = gen_binomial(&z, &upto(10), 10, 5, &opts()).unwrap().value;
        assert_eq!(dec(&c), "1088640");
        assert_eq!(refine_to_primes(&c), FactoredNumber::from_u64_exponents(&[(2, 7), (3, 5), (5, 1), (7, 1)]));
        assert_eq!(dec(&gen_binomial(&z, &upto(8), 8, 4, &opts()).unwrap().value), "3360");
        assert!(gen_binomial(&z, &upto(8), 8, 0, &opts()).unwrap().value.is_one());
        let s = SetDescriptor::finite([0, 1, 2]);
        assert!(gen_binomial(&s, &upto(4), 3, 1, &opts()).is_err());
        assert!(gen_binomial(&z, &upto(4), 3, 4, &opts()).is_err());
    }

    #[test]
    fn bhargava_reduction_to_ordinary_binomials() {
        let z = SetDescriptor::Integers;
        for k in 0..=20u64 {
            let t = BaseSet::PrimesUpTo(Cutoff::Explicit(k.max(2)));
            let mut expected = BigUint::one();
            for l in 0..=k {
                let c = gen_binomial(&z, &t, k, l, &opts()).unwrap().value;
                assert_eq!(c.to_decimal(), expected, "k={k} l={l}");
                expected = expected * (k - l) / (l + 1);
            }
        }
    }

    #[test]
    fn knuth_wilf_gcd() {
        let z = SetDescriptor::Integers;
        let t = BaseSet::BasesUpTo(Cutoff::Auto);
        let four = gen_integer(&z, &t, 4, &opts()).unwrap().value.to_decimal();
        let six = gen_integer(&z, &t, 6, &opts()).unwrap().value.to_decimal();
        let two = gen_integer(&z, &t, 2, &opts()).unwrap().value.to_decimal();
        assert_eq!((four.clone(), six.clone()), (BigUint::from(16u32), BigUint::from(36u32)));
        assert_eq!(four.gcd(&six), BigUint::from(4u32));
        assert_eq!(two, BigUint::from(2u32));
    }

    #[test]
    fn divisibility_examples() {
        let z = SetDescriptor::Integers;
        let small = factorial(&z, &BaseSet::ExplicitList(vec![2, 3]), 9, &opts()).unwrap().value;
        let big = factorial(&z, &upto(9), 9, &opts()).unwrap().value;
        assert!(exponentwise_divides(&small, &big));
        assert!(!exponentwise_divides(&big, &small));
        let sub = SetDescriptor::progression(0, 2).unwrap();
        let f_sub = factorial(&sub, &upto(9), 6, &opts()).unwrap().value;
        let f_z = factorial(&SetDescriptor::Naturals, &upto(9), 6, &opts()).unwrap().value;
        assert!(exponentwise_divides(&f_z, &f_sub));
        let a = FactoredNumber::from_u64_exponents(&[(4, 1)]);
        let b = FactoredNumber::from_u64_exponents(&[(2, 3)]);
        assert!(!exponentwise_divides(&a, &b));
        assert!(integer_divides(&a, &b));
        assert!(exponentwise_divides(&b, &FactoredNumber::zero()));
        assert!(!exponentwise_divides(&FactoredNumber::zero(), &b));
    }

    #[test]
    fn pairwise_examples() {
        let z = SetDescriptor::Integers;
        let t = upto(10);
        let seq = TestSequence::new((0..6).collect(), &z).unwrap();
        let r = pairwise_multiple_check(&z, &t, &seq, &opts()).unwrap();
        assert!(r.divides && r.equal);
        let seq = TestSequence::new(vec![3, 14, -6, 22, 0], &z).unwrap();
        assert!(pairwise_multiple_check(&z, &t, &seq, &opts()).unwrap().divides);
        let single = TestSequence::new(vec![8], &z).unwrap();
        let r = pairwise_multiple_check(&z, &t, &single, &opts()).unwrap();
        assert!(r.equal && r.pairwise.is_one());
    }

    #[test]
    fn row_products() {
        assert_eq!(dec(&row_product(2).unwrap()), "2");
        assert_eq!(dec(&row_product(4).unwrap()), "6144");
        assert!(row_product(1).unwrap().is_one());
        for n in 1..=60 {
            assert_eq!(partial_row_product(n, n).unwrap(), row_product(n).unwrap());
            for b in 2..=n {
                let sum: u64 = (0..=n).map(|l| beta_floor(n, l, b)).sum();
                assert_eq!(nu_bar(n, b).unwrap(), sum, "n={n} b={b}");
            }
        }
        assert_eq!(
            partial_row_product(10, 2).unwrap(),
            FactoredNumber::from_u64_exponents(&[(2, nu_bar(10, 2).unwrap())])
        );
        assert!(partial_row_product(5, 6).is_err());
    }

    #[test]
    fn row_product_matches_table_row() {
        let z = SetDescriptor::Integers;
        for n in 1..=10u64 {
            let product = (0..=n).fold(FactoredNumber::one(), |acc, l| {
                acc.mul(&gen_binomial(&z, &upto(n), n, l, &opts()).unwrap().value)
            });
            assert_eq!(product.to_decimal(), row_product(n).unwrap().to_decimal(), "n={n}");
        }
    }

    #[test]
    fn prime_factorials() {
        let primes = BaseSet::PrimesUpTo(Cutoff::Explicit(50));
        assert_eq!(dec(&factorial_p(3, &primes).unwrap()), "24");
        assert!(factorial_p(1, &upto(40)).unwrap().is_one());
        assert!(factorial_p(2, &BaseSet::ExplicitList(vec![5, 7, 11])).unwrap().is_one());
        assert!(factorial_p(3, &BaseSet::ExplicitList(vec![0, 2])).is_err());
        let p = SetDescriptor::Primes;
        for k in 0..=12 {
            let t = BaseSet::BasesUpTo(Cutoff::Auto);
            assert_eq!(factorial_p(k, &t).unwrap(), factorial(&p, &t, k, &opts()).unwrap().value, "k={k}");
        }
    }

    #[test]
    fn base_sets() {
        let z = SetDescriptor::Integers;
        assert_eq!(BaseSet::parse("list:0,1,6").unwrap().resolve(&z, 3).unwrap(), vec![0, 1, 6]);
        assert_eq!(BaseSet::parse("range:3..5").unwrap().resolve(&z, 3).unwrap(), vec![3, 4, 5]);
        assert_eq!(BaseSet::parse("primes:auto").unwrap().resolve(&z, 10).unwrap(), vec![2, 3, 5, 7]);
        assert_eq!(BaseSet::parse("upto:auto").unwrap().resolve(&z, 4).unwrap(), vec![2, 3, 4]);
        assert_eq!(
            BaseSet::parse("upto:auto").unwrap().resolve(&SetDescriptor::Primes, 4).unwrap(),
            vec![2, 3, 4, 5, 6]
        );
        assert!(BaseSet::parse("upto:auto").unwrap().resolve(&SetDescriptor::Naturals, 4).is_err());
        assert!(BaseSet::parse("list:-2").is_err());
        assert!(BaseSet::parse("bases").is_err());
    }

    #[test]
    fn progressions_can_have_first_factorial_above_one() {
        let s = SetDescriptor::progression(0, 6).unwrap();
        let f = factorial(&s, &upto(6), 1, &opts()).unwrap().value;
        assert_eq!(f, FactoredNumber::from_u64_exponents(&[(2, 1), (3, 1), (6, 1)]));
        assert_eq!(dec(&f), "36");
    }
}
