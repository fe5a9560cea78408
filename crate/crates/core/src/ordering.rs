//! The greedy `b`-ordering engine and the evaluators for test sequences.
//!
//! A `b`-ordering of `S` picks each next element to minimize
//! `Σ_j ord_b(a' - a_j)` over the elements already chosen. For finite sets the
//! minimization is an exhaustive scan. For the built-in infinite sets it is a
//! best-first search over residue classes `r mod b^l`:
//!
//! * the weight of a class is `Σ_{i<=l} #{j : a_j ≡ r (mod b^i)}`, a lower
//!   bound for the value of every element of the class;
//! * a class holding none of the chosen elements is exact: every member has
//!   value equal to the weight of its parent;
//! * classes the set meets only finitely often are evaluated member by member.
//!
//! A step is certified when every class whose bound does not exceed the
//! minimum was resolved. Search depth is capped; on hitting the cap the
//! engine falls back to a windowed scan and marks the step uncertified.

use std::cmp::{Ordering, Reverse};
use std::collections::{BTreeSet, BinaryHeap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::closedforms::{alpha_p, alpha_z};
use crate::error::{Error, Result};
use crate::intsets::{canonical_cmp, ResidueStatus, SetDescriptor, DEFAULT_PRIME_SEARCH_CAP};
use crate::numerics::{ord_b_small, ExtNat};

/// How to choose among several minimizers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum TieBreak {
    /// Smallest in canonical order (`0, 1, -1, 2, -2, ...`).
    Canonical,
    /// Uniformly random among the minimizers found, from a seeded stream.
    Seeded(u64),
}

impl TieBreak {
    pub fn label(&self) -> String {
        match self {
            TieBreak::Canonical => "canonical".into(),
            TieBreak::Seeded(seed) => format!("seeded:{seed}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct EngineOptions {
    pub policy: TieBreak,
    /// Forced first element; must lie in the set.
    pub start: Option<i64>,
    /// Deepest residue level `l` (classes mod `b^l`) the search may open.
    pub max_level: u32,
    /// Bound `|a| <= window` for fallback scans.
    pub window: u64,
    /// Largest prime scanned when searching a residue class of the primes.
    pub prime_cap: i64,
    /// Run the greedy engine even where a closed form exists.
    pub force_greedy: bool,
    /// Where a closed form is used, also run the greedy engine and compare.
    pub cross_check: bool,
}

impl Default for EngineOptions {
    fn default() -> Self {
        EngineOptions {
            policy: TieBreak::Canonical,
            start: None,
            max_level: 12,
            window: 10_000,
            prime_cap: DEFAULT_PRIME_SEARCH_CAP,
            force_greedy: false,
            cross_check: false,
        }
    }
}

/// A finite sequence of elements drawn from a set, repetitions allowed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TestSequence {
    elements: Vec<i64>,
}

impl TestSequence {
    pub fn new(elements: Vec<i64>, set: &SetDescriptor) -> Result<Self> {
        if let Some(bad) = elements.iter().find(|&&a| !set.contains(a)) {
            return Err(Error::domain(format!("{bad} is not an element of {set}")));
        }
        Ok(TestSequence { elements })
    }

    pub fn elements(&self) -> &[i64] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

/// Outcome of one greedy step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepResult {
    pub element: i64,
    pub value: ExtNat,
    /// The minimum is proven global over the whole set.
    pub certified: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct BOrdering {
    pub base: u64,
    pub elements: Vec<i64>,
    pub exponents: Vec<ExtNat>,
    pub certified: Vec<bool>,
    pub policy: TieBreak,
}

impl BOrdering {
    pub fn is_certified(&self) -> bool {
        self.certified.iter().all(|&c| c)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Source {
    ClosedForm,
    Greedy,
}

/// The invariants `α_0(S, b), ..., α_k(S, b)`.
#[derive(Clone, Debug, Serialize)]
pub struct ExponentSequence {
    pub base: u64,
    pub values: Vec<ExtNat>,
    /// False when some step was only minimized over a window.
    pub certified: bool,
    pub source: Source,
}

impl ExponentSequence {
    /// True when the values came from a windowed scan and may not be global.
    pub fn window_limited(&self) -> bool {
        !self.certified
    }
}

fn sum_small(values: impl Iterator<Item = Option<u64>>) -> Option<u64> {
    let mut total = 0u64;
    for v in values {
        total = total.checked_add(v?)?;
    }
    Some(total)
}

/// `α_i(S, b, a) = Σ_{j<i} ord_b(a_i - a_j)` for every prefix of the sequence.
pub fn evaluate_test_sequence(seq: &[i64], b: u64) -> Vec<ExtNat> {
    (0..seq.len())
        .map(|i| {
            ExtNat::from(sum_small(
                (0..i).map(|j| ord_b_small(b, seq[i] as i128 - seq[j] as i128)),
            ))
        })
        .collect()
}

fn ord_b_big(b: u64, a: &BigInt) -> ExtNat {
    if a.is_zero() {
        return ExtNat::Infinite;
    }
    let b = BigInt::from(b);
    let mut a = a.abs();
    let mut k = 0u64;
    loop {
        let (q, r) = a.div_rem(&b);
        if !r.is_zero() {
            break;
        }
        a = q;
        k += 1;
    }
    ExtNat::from(k)
}

/// `α*_i = ord_b(Π_{j<i} (a_i - a_j))` for every prefix of the sequence.
pub fn evaluate_multiplicative(seq: &[i64], b: u64) -> Result<Vec<ExtNat>> {
    if b < 2 {
        return Err(Error::domain("multiplicative evaluation needs b >= 2"));
    }
    Ok((0..seq.len())
        .map(|i| {
            let product = (0..i).fold(BigInt::one(), |acc, j| {
                acc * BigInt::from(seq[i] as i128 - seq[j] as i128)
            });
            if i == 0 {
                ExtNat::zero()
            } else {
                ord_b_big(b, &product)
            }
        })
        .collect())
}

/// `γ(S, b, a) = Σ_{i<j} ord_b(a_i - a_j)`.
pub fn pairwise_valuation_sum(seq: &[i64], b: u64) -> ExtNat {
    ExtNat::from(sum_small((0..seq.len()).flat_map(|j| {
        (0..j).map(move |i| ord_b_small(b, seq[i] as i128 - seq[j] as i128))
    })))
}

/// One greedy step: the next element after `prefix`.
///
/// With a seeded policy the random stream is derived from the seed and the
/// prefix length, so the call is deterministic.
pub fn greedy_step(
    set: &SetDescriptor,
    b: u64,
    prefix: &[i64],
    opts: &EngineOptions,
) -> Result<StepResult> {
    let mut engine = Greedy::new(set, b, opts)?;
    for &a in prefix {
        if !set.contains(a) {
            return Err(Error::domain(format!("{a} is not an element of {set}")));
        }
        engine.push(a);
    }
    engine.step()
}

/// `k + 1` terms of a `b`-ordering of `S` built by repeated greedy steps.
pub fn b_ordering(set: &SetDescriptor, b: u64, k: usize, opts: &EngineOptions) -> Result<BOrdering> {
    let mut engine = Greedy::new(set, b, opts)?;
    let mut out = BOrdering {
        base: b,
        elements: Vec::with_capacity(k + 1),
        exponents: Vec::with_capacity(k + 1),
        certified: Vec::with_capacity(k + 1),
        policy: opts.policy,
    };
    for _ in 0..=k {
        let step = engine.step()?;
        engine.push(step.element);
        out.elements.push(step.element);
        out.exponents.push(step.value);
        out.certified.push(step.certified);
    }
    Ok(out)
}

/// The invariants `α_0(S,b), ..., α_k(S,b)`, from a closed form where one is
/// known and from the greedy engine otherwise.
pub fn exponent_sequence(
    set: &SetDescriptor,
    b: u64,
    k: usize,
    opts: &EngineOptions,
) -> Result<ExponentSequence> {
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    let closed: Option<Vec<ExtNat>> = if opts.force_greedy {
        None
    } else {
        match (b, set) {
            (0, _) => set.size().map_or(Some(vec![ExtNat::zero(); k + 1]), |n| {
                Some(
                    (0..=k)
                        .map(|i| if i < n { ExtNat::zero() } else { ExtNat::Infinite })
                        .collect(),
                )
            }),
            (1, _) => Some(
                (0..=k)
                    .map(|i| if i == 0 { ExtNat::zero() } else { ExtNat::Infinite })
                    .collect(),
            ),
            (_, SetDescriptor::Integers) => {
                Some((0..=k as u64).map(|i| ExtNat::from(alpha_z(i, b))).collect())
            }
            (_, SetDescriptor::Primes) => {
                Some((0..=k as u64).map(|i| ExtNat::from(alpha_p(i, b))).collect())
            }
            _ => None,
        }
    };
    match closed {
        Some(values) => {
            if opts.cross_check {
                let greedy = b_ordering(set, b, k, opts)?;
                if greedy.exponents != values {
                    return Err(Error::CrossCheck(format!(
                        "closed form and greedy disagree for {set}, b = {b}"
                    )));
                }
            }
            Ok(ExponentSequence { base: b, values, certified: true, source: Source::ClosedForm })
        }
        None => {
            let ordering = b_ordering(set, b, k, opts)?;
            Ok(ExponentSequence {
                base: b,
                certified: ordering.is_certified(),
                values: ordering.exponents,
                source: Source::Greedy,
            })
        }
    }
}

/// Result of comparing a test sequence's partial sums with the invariants.
#[derive(Clone, Debug, Serialize)]
pub struct MajorizationReport {
    pub base: u64,
    /// `Σ_{k=1}^{m} α_k(S, b, s)` for `m = 0..n`.
    pub sequence_partial_sums: Vec<ExtNat>,
    /// `Σ_{k=1}^{m} α_k(S, b)` for `m = 0..n`.
    pub invariant_partial_sums: Vec<ExtNat>,
    pub equal_at: Vec<usize>,
    /// Prefix lengths where the test sequence falls below the invariants.
    pub violations: Vec<usize>,
    pub certified: bool,
}

impl MajorizationReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

fn partial_sums(values: &[ExtNat]) -> Vec<ExtNat> {
    let mut acc = ExtNat::zero();
    values
        .iter()
        .enumerate()
        .map(|(i, v)| {
            if i > 0 {
                acc = &acc + v;
            }
            acc.clone()
        })
        .collect()
}

/// Checks that the exponents of `seq` weakly majorize the invariants of `S`.
pub fn check_majorization(
    set: &SetDescriptor,
    b: u64,
    seq: &TestSequence,
    opts: &EngineOptions,
) -> Result<MajorizationReport> {
    if b < 2 {
        return Err(Error::domain("majorization is stated for b >= 2"));
    }
    if seq.is_empty() {
        return Err(Error::domain("empty test sequence"));
    }
    let n = seq.len() - 1;
    let values = evaluate_test_sequence(seq.elements(), b);
    let invariants = exponent_sequence(set, b, n, opts)?;
    let lhs = partial_sums(&values);
    let rhs = partial_sums(&invariants.values);
    let mut equal_at = Vec::new();
    let mut violations = Vec::new();
    for m in 0..=n {
        match lhs[m].cmp(&rhs[m]) {
            Ordering::Equal => equal_at.push(m),
            Ordering::Less => violations.push(m),
            Ordering::Greater => {}
        }
    }
    Ok(MajorizationReport {
        base: b,
        sequence_partial_sums: lhs,
        invariant_partial_sums: rhs,
        equal_at,
        violations,
        certified: invariants.certified,
    })
}

/// A residue class `residue mod modulus`, `modulus = b^level`, with the
/// indices of chosen elements it contains.
struct Node {
    weight: u64,
    level: u32,
    residue: i128,
    modulus: i128,
    members: Vec<usize>,
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.key() == other.key()
    }
}

impl Eq for Node {}

impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Node {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl Node {
    fn key(&self) -> (u64, u32, i128) {
        (self.weight, self.level, self.residue)
    }
}

/// Candidate minimizers collected during one step.
struct Best {
    value: Option<u64>,
    candidates: Vec<i64>,
}

impl Best {
    fn new() -> Self {
        Best { value: None, candidates: Vec::new() }
    }

    /// `value = None` means infinite.
    fn offer(&mut self, a: i64, value: Option<u64>) {
        let Some(v) = value else { return };
        match self.value {
            Some(cur) if v > cur => {}
            Some(cur) if v == cur => {
                if !self.candidates.contains(&a) {
                    self.candidates.push(a);
                }
            }
            _ => {
                self.value = Some(v);
                self.candidates.clear();
                self.candidates.push(a);
            }
        }
    }
}

struct Greedy<'a> {
    set: &'a SetDescriptor,
    base: u64,
    opts: &'a EngineOptions,
    prefix: Vec<i64>,
    chosen: BTreeSet<i64>,
    seed: Option<u64>,
}

impl<'a> Greedy<'a> {
    fn new(set: &'a SetDescriptor, base: u64, opts: &'a EngineOptions) -> Result<Self> {
        if set.is_empty() {
            return Err(Error::EmptySet);
        }
        if let Some(s) = opts.start {
            if !set.contains(s) {
                return Err(Error::domain(format!("start element {s} is not in {set}")));
            }
        }
        let seed = match opts.policy {
            TieBreak::Canonical => None,
            TieBreak::Seeded(s) => Some(s),
        };
        Ok(Greedy { set, base, opts, prefix: Vec::new(), chosen: BTreeSet::new(), seed })
    }

    fn push(&mut self, a: i64) {
        self.prefix.push(a);
        self.chosen.insert(a);
    }

    fn rng(&self) -> Option<ChaCha8Rng> {
        self.seed.map(|s| {
            ChaCha8Rng::seed_from_u64(s ^ (self.prefix.len() as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
        })
    }

    fn choose(&self, mut candidates: Vec<i64>) -> i64 {
        debug_assert!(!candidates.is_empty());
        match self.rng() {
            Some(mut rng) => {
                candidates.sort_by(|&a, &b| canonical_cmp(a, b));
                *candidates.choose(&mut rng).expect("nonempty")
            }
            None => candidates
                .into_iter()
                .min_by(|&a, &b| canonical_cmp(a, b))
                .expect("nonempty"),
        }
    }

    fn value_of(&self, a: i64) -> Option<u64> {
        if self.chosen.contains(&a) {
            return None;
        }
        sum_small(self.prefix.iter().map(|&c| ord_b_small(self.base, a as i128 - c as i128)))
    }

    /// Elements to choose the first term from.
    fn first_pool(&self) -> Result<Vec<i64>> {
        if let Some(s) = self.opts.start {
            return Ok(vec![s]);
        }
        if self.seed.is_some() {
            if let Some(n) = self.set.size() {
                let pool = match self.set {
                    SetDescriptor::Finite(v) => v.clone(),
                    _ => self.set.enumerate(self.window_bound())?,
                };
                if pool.len() == n {
                    return Ok(pool);
                }
            }
        }
        Ok(vec![self.set.first()?])
    }

    fn window_bound(&self) -> u64 {
        match self.set {
            SetDescriptor::Custom(c) => c.cap().min(self.opts.window),
            _ => self.opts.window,
        }
    }

    /// The whole set when it is finite and explicitly listable.
    fn finite_elements(&self) -> Result<Option<Vec<i64>>> {
        match self.set {
            SetDescriptor::Finite(v) => {
                let mut v = v.clone();
                v.sort_by(|&a, &b| canonical_cmp(a, b));
                Ok(Some(v))
            }
            SetDescriptor::Custom(c) => match self.set.size() {
                Some(n) => {
                    let all = self.set.enumerate(c.cap())?;
                    Ok((all.len() == n).then_some(all))
                }
                None => Ok(None),
            },
            _ => Ok(None),
        }
    }

    fn step(&mut self) -> Result<StepResult> {
        if self.prefix.is_empty() {
            let element = self.choose(self.first_pool()?);
            return Ok(StepResult { element, value: ExtNat::zero(), certified: true });
        }
        match self.base {
            0 => self.step_distinct(),
            1 => {
                let element = self.choose(self.first_pool_ignoring_start()?);
                Ok(StepResult { element, value: ExtNat::Infinite, certified: true })
            }
            _ => match self.finite_elements()? {
                Some(all) => Ok(self.scan(&all, true)),
                None => match self.set {
                    SetDescriptor::Custom(_) => {
                        let window = self.set.enumerate(self.window_bound())?;
                        Ok(self.scan(&window, false))
                    }
                    _ => self.branch_and_bound(),
                },
            },
        }
    }

    fn first_pool_ignoring_start(&self) -> Result<Vec<i64>> {
        if self.seed.is_some() {
            if let Some(all) = self.finite_elements()? {
                return Ok(all);
            }
        }
        Ok(vec![self.set.first()?])
    }

    /// `b = 0`: any element not yet chosen has value 0.
    fn step_distinct(&self) -> Result<StepResult> {
        let want = if self.seed.is_some() { 8 } else { 1 };
        let (pool, certified) = match self.finite_elements()? {
            Some(all) => (all, true),
            None => {
                let certified = !matches!(self.set, SetDescriptor::Custom(_));
                let mut bound = (self.prefix.len() as u64 + 16).max(64);
                loop {
                    let pool = self.set.enumerate(bound.min(self.window_bound().max(bound)))?;
                    let fresh = pool.iter().filter(|a| !self.chosen.contains(a)).count();
                    if fresh >= want || !certified {
                        break (pool, certified);
                    }
                    bound *= 2;
                }
            }
        };
        let fresh: Vec<i64> = pool.iter().copied().filter(|a| !self.chosen.contains(a)).take(want).collect();
        if fresh.is_empty() {
            return Ok(StepResult { element: self.set.first()?, value: ExtNat::Infinite, certified });
        }
        let element = self.choose(fresh);
        Ok(StepResult { element, value: ExtNat::zero(), certified })
    }

    /// Exhaustive minimization over `pool`, which is in canonical order.
    fn scan(&self, pool: &[i64], certified: bool) -> StepResult {
        let mut best = Best::new();
        for &a in pool {
            let v = self.value_of(a);
            best.offer(a, v);
            if v == Some(0) && self.seed.is_none() {
                break;
            }
        }
        self.finish(best, certified)
    }

    fn finish(&self, best: Best, certified: bool) -> StepResult {
        match best.value {
            Some(v) => StepResult {
                element: self.choose(best.candidates),
                value: ExtNat::from(v),
                certified,
            },
            None => StepResult {
                element: self.set.first().expect("nonempty set"),
                value: ExtNat::Infinite,
                certified,
            },
        }
    }

    fn branch_and_bound(&self) -> Result<StepResult> {
        let b = self.base as i128;
        let none = BTreeSet::new();
        let mut heap = BinaryHeap::new();
        heap.push(Reverse(Node {
            weight: 0,
            level: 0,
            residue: 0,
            modulus: 1,
            members: (0..self.prefix.len()).collect(),
        }));
        let mut best = Best::new();
        let mut unresolved = false;

        while let Some(Reverse(node)) = heap.pop() {
            if matches!(best.value, Some(v) if node.weight > v) {
                break;
            }
            if node.level > 0 {
                match self.set.residue_status(node.residue, node.modulus) {
                    ResidueStatus::Empty => continue,
                    ResidueStatus::FiniteOnly(members) => {
                        for a in members {
                            best.offer(a, self.value_of(a));
                        }
                        continue;
                    }
                    ResidueStatus::Unknown => {
                        unresolved = true;
                        continue;
                    }
                    ResidueStatus::Infinite => {}
                }
                if node.members.is_empty() {
                    match self.set.pick_in_class_capped(
                        node.residue,
                        node.modulus,
                        &none,
                        self.opts.prime_cap,
                    ) {
                        Ok(a) => best.offer(a, Some(node.weight)),
                        Err(Error::NotFound { .. }) => {}
                        Err(Error::SearchExhausted { .. }) => unresolved = true,
                        Err(e) => return Err(e),
                    }
                    continue;
                }
            }
            if node.level >= self.opts.max_level {
                unresolved = true;
                continue;
            }
            let Some(child_modulus) = node.modulus.checked_mul(b) else {
                unresolved = true;
                continue;
            };
            for i in 0..b {
                let residue = node.residue + i * node.modulus;
                let members: Vec<usize> = node
                    .members
                    .iter()
                    .copied()
                    .filter(|&j| (self.prefix[j] as i128).rem_euclid(child_modulus) == residue)
                    .collect();
                heap.push(Reverse(Node {
                    weight: node.weight + members.len() as u64,
                    level: node.level + 1,
                    residue,
                    modulus: child_modulus,
                    members,
                }));
            }
        }

        if !unresolved && best.value.is_some() {
            return Ok(self.finish(best, true));
        }
        // Fall back to a window, keeping whatever the search found.
        let window = self.set.enumerate(self.window_bound())?;
        for a in window {
            best.offer(a, self.value_of(a));
        }
        Ok(self.finish(best, false))
    }
}

/// Random finite test sequence drawn from `pool` (used by the harnesses).
pub fn random_test_sequence(pool: &[i64], len: usize, rng: &mut impl Rng) -> Vec<i64> {
    (0..len).map(|_| pool[rng.gen_range(0..pool.len())]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts() -> EngineOptions {
        EngineOptions::default()
    }

    fn nat(values: &[Option<u64>]) -> Vec<ExtNat> {
        values.iter().map(|&v| ExtNat::from(v)).collect()
    }

    fn fin(values: &[u64]) -> Vec<ExtNat> {
        values.iter().map(|&v| ExtNat::from(v)).collect()
    }

    /// Minimum of `Σ_j ord_b(a - a_j)` over a finite window, independent of
    /// the engine.
    fn window_min(pool: &[i64], prefix: &[i64], b: u64) -> Option<u64> {
        pool.iter()
            .filter_map(|&a| {
                prefix
                    .iter()
                    .map(|&c| ord_b_small(b, a as i128 - c as i128))
                    .sum::<Option<u64>>()
            })
            .min()
    }

    #[test]
    fn test_sequence_examples() {
        assert_eq!(evaluate_test_sequence(&[0, 1, 2, 5], 6), fin(&[0, 0, 0, 0]));
        assert_eq!(evaluate_test_sequence(&[7, 7], 2), nat(&[Some(0), None]));
        assert_eq!(evaluate_test_sequence(&[0, 1, 2, 3, 4], 2), fin(&[0, 0, 1, 1, 3]));
        assert_eq!(evaluate_test_sequence(&[3, 3, 4], 0), nat(&[Some(0), None, Some(0)]));
    }

    #[test]
    fn multiplicative_examples() {
        assert_eq!(evaluate_multiplicative(&[0, 1, 2, 5], 6).unwrap()[3], ExtNat::from(1));
        assert_eq!(evaluate_multiplicative(&[0, 2, 4, 5], 6).unwrap()[3], ExtNat::from(0));
        for seq in [[3, 8, -4, 11, 30], [1, 2, 4, 8, 16]] {
            assert_eq!(evaluate_multiplicative(&seq, 5).unwrap(), evaluate_test_sequence(&seq, 5));
        }
        assert!(evaluate_multiplicative(&[1, 2], 1).is_err());
    }

    #[test]
    fn pairwise_examples() {
        assert_eq!(pairwise_valuation_sum(&[0, 1, 2], 2), ExtNat::from(1));
        assert_eq!(pairwise_valuation_sum(&[0, 6, 12], 6), ExtNat::from(3));
        assert_eq!(pairwise_valuation_sum(&[12, 0, 6], 6), ExtNat::from(3));
        let seq = [4, -9, 17, 0, 22, 5];
        let total: ExtNat = evaluate_test_sequence(&seq, 3).into_iter().sum();
        assert_eq!(pairwise_valuation_sum(&seq, 3), total);
    }

    #[test]
    fn greedy_step_examples() {
        let z = SetDescriptor::Integers;
        let step = greedy_step(&z, 2, &[0, 1], &opts()).unwrap();
        assert_eq!(step, StepResult { element: -1, value: ExtNat::from(1), certified: true });
        let pool = z.enumerate(500).unwrap();
        assert_eq!(window_min(&pool, &[0, 1], 2), Some(1));
        assert_eq!(evaluate_test_sequence(&[0, 1, 2], 2)[2], ExtNat::from(1));

        let first = greedy_step(&SetDescriptor::Primes, 5, &[], &opts()).unwrap();
        assert_eq!(first, StepResult { element: 2, value: ExtNat::zero(), certified: true });

        // Oracle: scan primes below 10^3.
        let primes: Vec<i64> = SetDescriptor::Primes.enumerate(1000).unwrap();
        let prefix = [2, 3, 5, 7];
        assert_eq!(window_min(&primes, &prefix, 2), Some(4));
        let step = greedy_step(&SetDescriptor::Primes, 2, &prefix, &opts()).unwrap();
        assert_eq!(step, StepResult { element: 17, value: ExtNat::from(4), certified: true });
    }

    #[test]
    fn greedy_step_rejects_bad_input() {
        assert!(matches!(
            greedy_step(&SetDescriptor::finite([]), 2, &[], &opts()),
            Err(Error::EmptySet)
        ));
        assert!(greedy_step(&SetDescriptor::Primes, 2, &[4], &opts()).is_err());
    }

    #[test]
    fn b_ordering_examples() {
        for b in 2..=7 {
            let ord = b_ordering(&SetDescriptor::Integers, b, 30, &opts()).unwrap();
            let expected: Vec<ExtNat> = (0..=30).map(|k| ExtNat::from(alpha_z(k, b))).collect();
            assert_eq!(ord.exponents, expected, "b={b}");
            assert!(ord.is_certified());
        }
        let s = SetDescriptor::finite(0..=5);
        let ord = b_ordering(&s, 6, 5, &opts()).unwrap();
        assert_eq!(ord.exponents, fin(&[0, 0, 0, 0, 0, 0]));
        let ord = b_ordering(&s, 2, 5, &opts()).unwrap();
        assert_eq!(ord.exponents, fin(&[0, 0, 1, 1, 3, 3]));
        let ord = b_ordering(&s, 0, 8, &opts()).unwrap();
        let expected: Vec<ExtNat> =
            (0..=8).map(|k| if k < 6 { ExtNat::zero() } else { ExtNat::Infinite }).collect();
        assert_eq!(ord.exponents, expected);
        let ord = b_ordering(&SetDescriptor::Primes, 0, 4, &opts()).unwrap();
        assert_eq!(ord.elements, vec![2, 3, 5, 7, 11]);
        assert_eq!(ord.exponents, fin(&[0, 0, 0, 0, 0]));
    }

    #[test]
    fn brute_force_all_orderings_of_small_set() {
        // Every permutation of {0..5}: the greedy ones share one exponent sequence.
        fn perms(items: &mut Vec<i64>, k: usize, out: &mut Vec<Vec<i64>>) {
            if k == items.len() {
                out.push(items.clone());
                return;
            }
            for i in k..items.len() {
                items.swap(k, i);
                perms(items, k + 1, out);
                items.swap(k, i);
            }
        }
        let mut all = Vec::new();
        perms(&mut (0..=5).collect(), 0, &mut all);
        let s = SetDescriptor::finite(0..=5);
        for b in [2u64, 3, 4, 6] {
            let mut greedy_sequences = BTreeSet::new();
            for p in &all {
                let values = evaluate_test_sequence(p, b);
                let greedy = (1..p.len()).all(|i| {
                    let best = p[i..]
                        .iter()
                        .map(|&a| (0..i).map(|j| ord_b_small(b, (a - p[j]) as i128)).sum::<Option<u64>>())
                        .min()
                        .unwrap();
                    values[i].to_u64() == best
                });
                if greedy {
                    greedy_sequences.insert(values);
                }
            }
            let engine = b_ordering(&s, b, 5, &opts()).unwrap().exponents;
            assert_eq!(greedy_sequences.into_iter().collect::<Vec<_>>(), vec![engine], "b={b}");
        }
    }

    #[test]
    fn exponent_sequence_examples() {
        let z = exponent_sequence(&SetDescriptor::Integers, 2, 4, &opts()).unwrap();
        assert_eq!(z.values, fin(&[0, 0, 1, 1, 3]));
        assert_eq!(z.source, Source::ClosedForm);
        let forced = EngineOptions { force_greedy: true, ..opts() };
        let g = exponent_sequence(&SetDescriptor::Integers, 2, 4, &forced).unwrap();
        assert_eq!(g.values, z.values);
        assert_eq!(g.source, Source::Greedy);

        let p = exponent_sequence(&SetDescriptor::Primes, 2, 3, &opts()).unwrap();
        assert_eq!(p.values, fin(&[0, 0, 1, 3]));
        let pg = exponent_sequence(&SetDescriptor::Primes, 2, 3, &forced).unwrap();
        assert_eq!(pg.values, p.values);
        assert!(pg.certified);

        let ones = exponent_sequence(&SetDescriptor::Primes, 1, 3, &opts()).unwrap();
        assert_eq!(ones.values, nat(&[Some(0), None, None, None]));
        let g1 = exponent_sequence(&SetDescriptor::Primes, 1, 3, &forced).unwrap();
        assert_eq!(g1.values, ones.values);

        let checked = EngineOptions { cross_check: true, ..opts() };
        assert!(exponent_sequence(&SetDescriptor::Primes, 3, 12, &checked).is_ok());
    }

    #[test]
    fn naturals_share_the_integer_invariants() {
        for b in 2..=6 {
            let n = exponent_sequence(&SetDescriptor::Naturals, b, 40, &opts()).unwrap();
            let z = exponent_sequence(&SetDescriptor::Integers, b, 40, &opts()).unwrap();
            assert_eq!(n.values, z.values, "b={b}");
            assert!(n.certified);
        }
    }

    #[test]
    fn progression_matches_window_oracle() {
        let s = SetDescriptor::progression(3, 4).unwrap();
        for b in [2u64, 3, 6] {
            let ord = b_ordering(&s, b, 20, &opts()).unwrap();
            assert!(ord.is_certified());
            let pool = s.enumerate(5000).unwrap();
            for k in 1..=20 {
                let best = window_min(&pool, &ord.elements[..k], b);
                assert_eq!(ord.exponents[k].to_u64(), best, "b={b} k={k}");
            }
        }
    }

    #[test]
    fn progression_first_factorial_can_exceed_one() {
        // differences of ap:0,6 are multiples of 6
        let s = SetDescriptor::progression(0, 6).unwrap();
        let two = exponent_sequence(&s, 2, 1, &opts()).unwrap();
        let six = exponent_sequence(&s, 6, 1, &opts()).unwrap();
        assert_eq!(two.values[1], ExtNat::from(1));
        assert_eq!(six.values[1], ExtNat::from(1));
    }

    #[test]
    fn custom_sets_are_window_limited() {
        use crate::intsets::CustomSet;
        let squares = SetDescriptor::Custom(CustomSet::new("squares", 400, None, |a| {
            a >= 0 && ((a as f64).sqrt().round() as i64).pow(2) == a
        }));
        let seq = exponent_sequence(&squares, 2, 5, &opts()).unwrap();
        assert!(seq.window_limited());
        let finite = SetDescriptor::Custom(CustomSet::new("small", 10, Some(4), |a| (0..4).contains(&a)));
        let seq = exponent_sequence(&finite, 2, 3, &opts()).unwrap();
        assert!(seq.certified);
        assert_eq!(seq.values, exponent_sequence(&SetDescriptor::finite(0..4), 2, 3, &opts()).unwrap().values);
    }

    #[test]
    fn level_cap_falls_back_to_window() {
        let shallow = EngineOptions { max_level: 1, ..opts() };
        let ord = b_ordering(&SetDescriptor::Integers, 2, 6, &shallow).unwrap();
        assert!(!ord.is_certified());
        let expected: Vec<ExtNat> = (0..=6).map(|k| ExtNat::from(alpha_z(k, 2))).collect();
        assert_eq!(ord.exponents, expected);
    }

    #[test]
    fn exhausted_finite_set_repeats_first_element() {
        let s = SetDescriptor::finite([4, -1, 9]);
        let ord = b_ordering(&s, 2, 5, &opts()).unwrap();
        assert_eq!(&ord.elements[3..], &[-1, -1, -1]);
        assert!(ord.exponents[3..].iter().all(ExtNat::is_infinite));
    }

    #[test]
    fn seeded_orderings_agree() {
        let s = SetDescriptor::finite([-7, -3, 0, 2, 5, 8, 12, 13, 20, 31]);
        let reference = exponent_sequence(&s, 4, 11, &opts()).unwrap().values;
        for seed in 0..20 {
            let start = s.enumerate(100).unwrap()[seed as usize % 10];
            let o = EngineOptions { policy: TieBreak::Seeded(seed), start: Some(start), ..opts() };
            let ord = b_ordering(&s, 4, 11, &o).unwrap();
            assert_eq!(ord.elements[0], start);
            assert_eq!(ord.exponents, reference, "seed={seed}");
        }
    }

    #[test]
    fn majorization_examples() {
        let z = SetDescriptor::Integers;
        let ord = b_ordering(&z, 2, 8, &opts()).unwrap();
        let seq = TestSequence::new(ord.elements.clone(), &z).unwrap();
        let report = check_majorization(&z, 2, &seq, &opts()).unwrap();
        assert!(report.holds());
        assert_eq!(report.equal_at, (0..=8).collect::<Vec<_>>());

        let seq = TestSequence::new(vec![5, 4, 3, 2, 1, 0], &z).unwrap();
        let report = check_majorization(&z, 2, &seq, &opts()).unwrap();
        assert!(report.holds());
        assert_eq!(report.equal_at, (0..=5).collect::<Vec<_>>());
        let seq = TestSequence::new(vec![0, 4, 8, 1], &z).unwrap();
        let report = check_majorization(&z, 2, &seq, &opts()).unwrap();
        assert!(report.holds());
        assert_eq!(report.sequence_partial_sums, fin(&[0, 2, 7, 7]));
        assert_eq!(report.equal_at, vec![0]);

        let single = TestSequence::new(vec![3], &z).unwrap();
        let report = check_majorization(&z, 3, &single, &opts()).unwrap();
        assert_eq!(report.equal_at, vec![0]);
        assert!(TestSequence::new(vec![4], &SetDescriptor::Primes).is_err());
    }
}
