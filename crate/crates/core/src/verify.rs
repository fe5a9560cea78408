//! Randomized and exhaustive checks of the invariants, grouped into suites.
//!
//! Parameters for every instance are drawn up front from a seeded stream, so
//! a `(suite, seed, scale)` triple always produces the same instances and the
//! same report. Instances run in parallel and are reported in index order.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::closedforms::{
    alpha_p, alpha_z, beta_digit, beta_floor, equality_profile, partition_min, p_test_lower_bound,
    prime_witness_sequence,
};
use crate::error::{Error, Result};
use crate::factorials::{
    exponentwise_divides, factorial, factorial_p, gen_binomial, gen_integer, nu_bar, pairwise_multiple_check,
    row_product, BaseSet, Cutoff, FactoredNumber,
};
use crate::intsets::SetDescriptor;
use crate::numerics::{binom2, floor_sum, omega, ord_b_small, totient, ExtNat};
use crate::ordering::{
    b_ordering, check_majorization, evaluate_multiplicative, evaluate_test_sequence, exponent_sequence,
    EngineOptions, TestSequence, TieBreak,
};
use crate::series::{maxmin_check, phi_b, t_ordering, SeriesExponent, TOrderingOptions, TruncatedSeries};
use crate::tables;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    WellDefinedness,
    Majorization,
    Superadditivity,
    Monotonicity,
    Divisibility,
    Transport,
    Maxmin,
    ClosedForms,
    Tables,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Suite::WellDefinedness,
        Suite::Majorization,
        Suite::Superadditivity,
        Suite::Monotonicity,
        Suite::Divisibility,
        Suite::Transport,
        Suite::Maxmin,
        Suite::ClosedForms,
        Suite::Tables,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::WellDefinedness => "well-definedness",
            Suite::Majorization => "majorization",
            Suite::Superadditivity => "superadditivity",
            Suite::Monotonicity => "monotonicity",
            Suite::Divisibility => "divisibility",
            Suite::Transport => "transport",
            Suite::Maxmin => "maxmin",
            Suite::ClosedForms => "closed-forms",
            Suite::Tables => "tables",
        }
    }

    /// Parses a suite name; `all` expands to every suite.
    pub fn parse_selection(name: &str) -> Result<Vec<Suite>> {
        if name == "all" {
            return Ok(Suite::ALL.to_vec());
        }
        Ok(vec![name.parse()?])
    }

    fn stream_id(&self) -> u64 {
        Suite::ALL.iter().position(|s| s == self).expect("listed") as u64 + 1
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite `{s}`")))
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Multiplies the number of random instances.
    pub scale: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { seed: 0, scale: 1 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Instance {
    pub index: usize,
    pub description: String,
    pub passed: bool,
    pub counterexample: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub passed: bool,
    pub instances: Vec<Instance>,
}

impl SuiteReport {
    pub fn failures(&self) -> impl Iterator<Item = &Instance> {
        self.instances.iter().filter(|i| !i.passed)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub config: VerifyConfig,
    pub passed: bool,
    pub suites: Vec<SuiteReport>,
}

type Outcome = std::result::Result<(), String>;

struct Case {
    description: String,
    run: Box<dyn Fn() -> Outcome + Send + Sync>,
}

fn case(description: impl Into<String>, run: impl Fn() -> Outcome + Send + Sync + 'static) -> Case {
    Case { description: description.into(), run: Box::new(run) }
}

fn lib<T>(r: Result<T>) -> std::result::Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

pub fn run(suites: &[Suite], config: VerifyConfig) -> VerifyReport {
    let reports: Vec<SuiteReport> = suites.iter().map(|&s| run_suite(s, config)).collect();
    VerifyReport { config, passed: reports.iter().all(|r| r.passed), suites: reports }
}

pub fn run_suite(suite: Suite, config: VerifyConfig) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(suite.stream_id());
    let scale = config.scale.max(1);
    let cases = match suite {
        Suite::WellDefinedness => well_definedness(&mut rng, scale),
        Suite::Majorization => majorization(&mut rng, scale),
        Suite::Superadditivity => superadditivity(&mut rng, scale),
        Suite::Monotonicity => monotonicity(&mut rng, scale),
        Suite::Divisibility => divisibility(&mut rng, scale),
        Suite::Transport => transport(&mut rng, scale),
        Suite::Maxmin => maxmin(&mut rng, scale),
        Suite::ClosedForms => closed_forms(),
        Suite::Tables => tables_suite(),
    };
    let instances: Vec<Instance> = cases
        .into_par_iter()
        .enumerate()
        .map(|(index, c)| {
            let outcome = (c.run)();
            Instance {
                index,
                description: c.description,
                passed: outcome.is_ok(),
                counterexample: outcome.err(),
            }
        })
        .collect();
    SuiteReport { suite, passed: instances.iter().all(|i| i.passed), instances }
}

/// Distinct integers in `[-50, 50]`, between 1 and `max_len` of them.
pub fn random_finite_set(rng: &mut impl Rng, max_len: usize) -> Vec<i64> {
    let len = rng.gen_range(1..=max_len);
    let mut pool: Vec<i64> = (-50..=50).collect();
    pool.shuffle(rng);
    let mut v = pool[..len].to_vec();
    v.sort_unstable();
    v
}

fn random_infinite_set(rng: &mut impl Rng) -> SetDescriptor {
    match rng.gen_range(0..4) {
        0 => SetDescriptor::Integers,
        1 => SetDescriptor::Naturals,
        2 => SetDescriptor::Primes,
        _ => SetDescriptor::progression(rng.gen_range(-10..=10), rng.gen_range(1..=6)).expect("step >= 1"),
    }
}

fn random_set(rng: &mut impl Rng) -> SetDescriptor {
    if rng.gen_bool(0.5) {
        SetDescriptor::finite(random_finite_set(rng, 12))
    } else {
        random_infinite_set(rng)
    }
}

/// Elements to draw test sequences from.
fn sample_pool(set: &SetDescriptor) -> Vec<i64> {
    match set {
        SetDescriptor::Finite(v) => v.clone(),
        SetDescriptor::Primes => set.enumerate(200).expect("built-in"),
        _ => set.enumerate(60).expect("built-in"),
    }
}

fn show(values: &[ExtNat]) -> String {
    values.iter().map(ExtNat::to_string).collect::<Vec<_>>().join(",")
}

fn opts() -> EngineOptions {
    EngineOptions::default()
}

fn well_definedness(rng: &mut ChaCha8Rng, scale: usize) -> Vec<Case> {
    (0..100 * scale)
        .map(|_| {
            let set = random_finite_set(rng, 12);
            let b = rng.gen_range(2..=12u64);
            let seeds: Vec<u64> = (0..5).map(|_| rng.gen()).collect();
            let mut starts = set.clone();
            starts.shuffle(rng);
            let description = format!("S = {set:?}, b = {b}, 6 orderings");
            case(description, move || {
                let s = SetDescriptor::finite(set.iter().copied());
                let k = set.len() + 1;
                let reference = lib(b_ordering(&s, b, k, &opts()))?;
                for (i, &seed) in seeds.iter().enumerate() {
                    let o = EngineOptions {
                        policy: TieBreak::Seeded(seed),
                        start: Some(starts[i % starts.len()]),
                        ..opts()
                    };
                    let other = lib(b_ordering(&s, b, k, &o))?;
                    if other.exponents != reference.exponents {
                        return Err(format!(
                            "ordering {:?} gives [{}], ordering {:?} gives [{}]",
                            reference.elements,
                            show(&reference.exponents),
                            other.elements,
                            show(&other.exponents)
                        ));
                    }
                }
                Ok(())
            })
        })
        .collect()
}

fn majorization(rng: &mut ChaCha8Rng, scale: usize) -> Vec<Case> {
    let mut cases = Vec::new();
    for _ in 0..200 * scale {
        let set = random_set(rng);
        let b = rng.gen_range(2..=12u64);
        let pool = sample_pool(&set);
        let len = rng.gen_range(1..=10);
        let seq: Vec<i64> = (0..len).map(|_| *pool.choose(rng).expect("nonempty")).collect();
        cases.push(case(format!("S = {set}, b = {b}, seq = {seq:?}"), move || {
            let t = lib(TestSequence::new(seq.clone(), &set))?;
            let report = lib(check_majorization(&set, b, &t, &opts()))?;
            ensure(report.holds(), || {
                format!(
                    "partial sums [{}] fall below invariants [{}] at {:?}",
                    show(&report.sequence_partial_sums),
                    show(&report.invariant_partial_sums),
                    report.violations
                )
            })
        }));
    }
    for _ in 0..50 * scale {
        let b = rng.gen_range(2..=12u64);
        let primes = SetDescriptor::Primes.enumerate(300).expect("built-in");
        let len = rng.gen_range(omega(b) as usize + 1..=12);
        let seq: Vec<i64> = (0..len).map(|_| *primes.choose(rng).expect("nonempty")).collect();
        cases.push(case(format!("P-test bound, b = {b}, seq = {seq:?}"), move || {
            let k = seq.len() as u64 - 1;
            let total: ExtNat = evaluate_test_sequence(&seq, b).into_iter().sum();
            let bound = lib(p_test_lower_bound(k, b))?;
            ensure(total >= ExtNat::from(bound), || format!("sum {total} < bound {bound}"))
        }));
    }
    for _ in 0..50 * scale {
        let b = rng.gen_range(2..=12u64);
        let seq: Vec<i64> = (0..rng.gen_range(1..=8)).map(|_| rng.gen_range(-40..=40)).collect();
        cases.push(case(format!("additive vs multiplicative, b = {b}, seq = {seq:?}"), move || {
            let add = evaluate_test_sequence(&seq, b);
            let mult = lib(evaluate_multiplicative(&seq, b))?;
            let prime = crate::numerics::is_prime(b as i64);
            for (i, (a, m)) in add.iter().zip(&mult).enumerate() {
                if a > m || (prime && a != m) {
                    return Err(format!("index {i}: additive {a}, multiplicative {m}"));
                }
            }
            Ok(())
        }));
    }
    for b in 2..=12u64 {
        cases.push(case(format!("natural order 0..40 is a {b}-ordering of Z"), move || {
            let seq: Vec<i64> = (0..=40).collect();
            let t = lib(TestSequence::new(seq, &SetDescriptor::Integers))?;
            let report = lib(check_majorization(&SetDescriptor::Integers, b, &t, &opts()))?;
            ensure(report.equal_at.len() == 41, || format!("equality only at {:?}", report.equal_at))
        }));
    }
    cases
}

fn superadditivity(rng: &mut ChaCha8Rng, scale: usize) -> Vec<Case> {
    let mut cases = Vec::new();
    for _ in 0..60 * scale {
        let set = random_set(rng);
        let b = rng.gen_range(2..=12u64);
        let k = 16;
        cases.push(case(format!("superadditive, S = {set}, b = {b}, k <= {k}"), move || {
            let a = lib(exponent_sequence(&set, b, k, &opts()))?.values;
            for i in 0..=k {
                for j in 0..=k - i {
                    if a[i + j] < &a[i] + &a[j] {
                        return Err(format!("α_{} = {} < α_{i} + α_{j} = {} + {}", i + j, a[i + j], a[i], a[j]));
                    }
                }
            }
            Ok(())
        }));
    }
    for _ in 0..40 * scale {
        let big = random_finite_set(rng, 12);
        let mut small = big.clone();
        small.shuffle(rng);
        small.truncate(rng.gen_range(1..=big.len()));
        small.sort_unstable();
        let b = rng.gen_range(2..=12u64);
        cases.push(case(format!("antitone, {small:?} ⊆ {big:?}, b = {b}"), move || {
            let k = big.len() + 1;
            let a1 = lib(exponent_sequence(&SetDescriptor::finite(small.iter().copied()), b, k, &opts()))?.values;
            let a2 = lib(exponent_sequence(&SetDescriptor::finite(big.iter().copied()), b, k, &opts()))?.values;
            ensure(a1.iter().zip(&a2).all(|(x, y)| x >= y), || format!("[{}] vs [{}]", show(&a1), show(&a2)))
        }));
    }
    let nested = [
        (SetDescriptor::Primes, SetDescriptor::Naturals),
        (SetDescriptor::Naturals, SetDescriptor::Integers),
        (SetDescriptor::progression(1, 4).expect("valid"), SetDescriptor::progression(1, 2).expect("valid")),
        (SetDescriptor::progression(0, 3).expect("valid"), SetDescriptor::Naturals),
    ];
    for (s1, s2) in nested {
        for b in [2u64, 3, 6, 10] {
            let (s1, s2) = (s1.clone(), s2.clone());
            cases.push(case(format!("antitone, {s1} ⊆ {s2}, b = {b}"), move || {
                let a1 = lib(exponent_sequence(&s1, b, 20, &opts()))?.values;
                let a2 = lib(exponent_sequence(&s2, b, 20, &opts()))?.values;
                ensure(a1.iter().zip(&a2).all(|(x, y)| x >= y), || format!("[{}] vs [{}]", show(&a1), show(&a2)))
            }));
        }
    }
    for _ in 0..30 * scale {
        let set = random_set(rng);
        let b = rng.gen_range(2..=12u64);
        cases.push(case(format!("extreme bounds, S = {set}, b = {b}"), move || {
            let k = 14;
            let lo = lib(exponent_sequence(&set, 0, k, &opts()))?.values;
            let mid = lib(exponent_sequence(&set, b, k, &opts()))?.values;
            let hi = lib(exponent_sequence(&set, 1, k, &opts()))?.values;
            for i in 0..=k {
                if !(lo[i] <= mid[i] && mid[i] <= hi[i]) {
                    return Err(format!("k = {i}: {} <= {} <= {} fails", lo[i], mid[i], hi[i]));
                }
            }
            Ok(())
        }));
    }
    for _ in 0..30 * scale {
        let u = random_series_set(rng);
        cases.push(case(format!("t-superadditive, |U| = {}", u.len()), move || {
            let k = u.len() - 1;
            let e = lib(t_ordering(&u, k, &TOrderingOptions::default()))?.exponents;
            for i in 0..=k {
                for j in 0..=k - i {
                    if exact(e[i + j])? < exact(e[i])? + exact(e[j])? {
                        return Err(format!("α_{} = {} < {} + {}", i + j, e[i + j], e[i], e[j]));
                    }
                }
            }
            Ok(())
        }));
    }
    for _ in 0..20 * scale {
        let u = random_series_set(rng);
        let mut sub = u.clone();
        sub.shuffle(rng);
        sub.truncate(rng.gen_range(1..=u.len()));
        cases.push(case(format!("t-antitone, |U1| = {}, |U2| = {}", sub.len(), u.len()), move || {
            let k = sub.len() - 1;
            let e1 = lib(t_ordering(&sub, k, &TOrderingOptions::default()))?.exponents;
            let e2 = lib(t_ordering(&u, k, &TOrderingOptions::default()))?.exponents;
            for i in 0..=k {
                if exact(e1[i])? < exact(e2[i])? {
                    return Err(format!("k = {i}: {} < {}", e1[i], e2[i]));
                }
            }
            Ok(())
        }));
    }
    cases
}

fn exact(e: SeriesExponent) -> std::result::Result<u64, String> {
    match e {
        SeriesExponent::Exact(v) => Ok(v),
        other => Err(format!("expected an exact exponent, got {other}")),
    }
}

/// Distinct polynomials in `t` of degree below 6 with small integer
/// coefficients, with a cap high enough that no comparison is truncated.
fn random_series_set(rng: &mut impl Rng) -> Vec<TruncatedSeries> {
    let n = rng.gen_range(2..=8);
    let cap = 2 + 6 * n;
    let mut seen = BTreeSet::new();
    while seen.len() < n {
        let c: Vec<i64> = (0..6).map(|_| rng.gen_range(-2..=2)).collect();
        seen.insert(c);
    }
    let mut u: Vec<TruncatedSeries> = seen.into_iter().map(|c| TruncatedSeries::from_integers(&c, cap)).collect();
    u.shuffle(rng);
    u
}

fn monotonicity(rng: &mut ChaCha8Rng, scale: usize) -> Vec<Case> {
    let mut cases = Vec::new();
    for _ in 0..80 * scale {
        let set = random_set(rng);
        let b = rng.gen_range(0..=12u64);
        cases.push(case(format!("monotone, S = {set}, b = {b}"), move || {
            let a = lib(exponent_sequence(&set, b, 20, &opts()))?.values;
            ensure(a.windows(2).all(|w| w[0] <= w[1]), || format!("[{}]", show(&a)))
        }));
    }
    for _ in 0..30 * scale {
        let u = random_series_set(rng);
        cases.push(case(format!("t-monotone, |U| = {}", u.len()), move || {
            let e = lib(t_ordering(&u, u.len() - 1, &TOrderingOptions::default()))?.exponents;
            for w in e.windows(2) {
                if exact(w[0])? > exact(w[1])? {
                    return Err(format!("{} > {}", w[0], w[1]));
                }
            }
            Ok(())
        }));
    }
    cases
}

fn random_base_set(rng: &mut impl Rng) -> BaseSet {
    match rng.gen_range(0..3) {
        0 => BaseSet::BasesUpTo(Cutoff::Explicit(rng.gen_range(2..=12))),
        1 => BaseSet::PrimesUpTo(Cutoff::Explicit(rng.gen_range(2..=13))),
        _ => {
            let n = rng.gen_range(1..=5);
            BaseSet::ExplicitList((0..n).map(|_| rng.gen_range(0..=12)).collect())
        }
    }
}

fn divisibility(rng: &mut ChaCha8Rng, scale: usize) -> Vec<Case> {
    let mut cases = Vec::new();
    for _ in 0..60 * scale {
        let set = random_set(rng);
        let t = random_base_set(rng);
        let k = rng.gen_range(0..=10u64);
        let l = rng.gen_range(0..=k);
        cases.push(case(format!("integrality, S = {set}, T = {t}, k = {k}, l = {l}"), move || {
            if set.size().is_some_and(|n| k >= n as u64) {
                return Ok(());
            }
            lib(gen_binomial(&set, &t, k, l, &opts()))?;
            if k >= 1 {
                lib(gen_integer(&set, &t, k, &opts()))?;
            }
            let mut product = FactoredNumber::one();
            for n in 1..=k {
                product = product.mul(&lib(gen_integer(&set, &t, n, &opts()))?.value);
            }
            let f = lib(factorial(&set, &t, k, &opts()))?.value;
            ensure(product == f, || format!("Π [n] = {product}, k! = {f}"))
        }));
    }
    for _ in 0..30 * scale {
        let set = random_set(rng);
        let top = rng.gen_range(3..=12u64);
        let sub: Vec<u64> = (2..=top).filter(|_| rng.gen_bool(0.5)).collect();
        let k = rng.gen_range(0..=10u64);
        cases.push(case(format!("T-monotone, S = {set}, {sub:?} ⊆ 2..{top}, k = {k}"), move || {
            let small = lib(factorial(&set, &BaseSet::ExplicitList(sub.clone()), k, &opts()))?.value;
            let big = lib(factorial(&set, &BaseSet::Range { lo: 2, hi: top }, k, &opts()))?.value;
            ensure(exponentwise_divides(&small, &big), || format!("{small} does not divide {big}"))
        }));
    }
    for _ in 0..30 * scale {
        let big = random_finite_set(rng, 12);
        let mut small = big.clone();
        small.shuffle(rng);
        small.truncate(rng.gen_range(1..=big.len()));
        small.sort_unstable();
        let k = rng.gen_range(0..=small.len() as u64);
        cases.push(case(format!("S-antitone, {small:?} ⊆ {big:?}, k = {k}"), move || {
            let t = BaseSet::Range { lo: 0, hi: 12 };
            let f1 = lib(factorial(&SetDescriptor::finite(small.iter().copied()), &t, k, &opts()))?.value;
            let f2 = lib(factorial(&SetDescriptor::finite(big.iter().copied()), &t, k, &opts()))?.value;
            ensure(exponentwise_divides(&f2, &f1), || format!("{f2} does not divide {f1}"))
        }));
    }
    for _ in 0..40 * scale {
        let set = random_set(rng);
        let t = random_base_set(rng);
        let pool = sample_pool(&set);
        let seq: Vec<i64> = (0..rng.gen_range(1..=6)).map(|_| *pool.choose(rng).expect("nonempty")).collect();
        cases.push(case(format!("pairwise multiple, S = {set}, T = {t}, seq = {seq:?}"), move || {
            let s = lib(TestSequence::new(seq.clone(), &set))?;
            let r = lib(pairwise_multiple_check(&set, &t, &s, &opts()))?;
            ensure(r.divides, || format!("{} does not divide {}", r.factorial_product, r.pairwise))
        }));
    }
    cases.push(case("gcd([4], [6]) = 4 while [2] = 2 for (Z, N)", || {
        let (z, t) = (SetDescriptor::Integers, BaseSet::BasesUpTo(Cutoff::Auto));
        let at = |n| lib(gen_integer(&z, &t, n, &opts())).map(|c| c.value.to_decimal());
        let (two, four, six) = (at(2)?, at(4)?, at(6)?);
        ensure(four.gcd(&six) == BigUint::from(4u32) && two == BigUint::from(2u32), || {
            format!("[2] = {two}, [4] = {four}, [6] = {six}")
        })
    }));
    cases.push(case("every row binomial of (Z, N) is integral for k <= 30", || {
        let z = SetDescriptor::Integers;
        for k in 0..=30 {
            for l in 0..=k {
                lib(gen_binomial(&z, &BaseSet::BasesUpTo(Cutoff::Auto), k, l, &opts()))?;
            }
        }
        Ok(())
    }));
    cases.push(case("row products: digit formula equals Σ β for n <= 200", || {
        for n in 1..=200u64 {
            lib(row_product(n))?;
            for b in 2..=n {
                let direct: u64 = (0..=n).map(|l| beta_floor(n, l, b)).sum();
                let formula = lib(nu_bar(n, b))?;
                if direct != formula {
                    return Err(format!("n = {n}, b = {b}: Σ β = {direct}, ν̄ = {formula}"));
                }
            }
        }
        Ok(())
    }));
    cases
}

fn transport(rng: &mut ChaCha8Rng, scale: usize) -> Vec<Case> {
    let mut cases = Vec::new();
    for _ in 0..60 * scale {
        let set = random_finite_set(rng, 12);
        let b = rng.gen_range(2..=10u64);
        cases.push(case(format!("transport, S = {set:?}, b = {b}"), move || {
            let k = set.len() - 1;
            let expected = lib(exponent_sequence(&SetDescriptor::finite(set.iter().copied()), b, k, &opts()))?.values;
            let mut cap = 2 + set
                .iter()
                .flat_map(|&x| set.iter().filter_map(move |&y| ord_b_small(b, (x - y) as i128)))
                .max()
                .unwrap_or(0) as usize;
            loop {
                let u: Vec<TruncatedSeries> = set.iter().map(|&a| phi_b(a, b, cap)).collect::<Result<_>>().map_err(|e| e.to_string())?;
                match t_ordering(&u, k, &TOrderingOptions::default()) {
                    Ok(ord) => {
                        let got: Vec<ExtNat> = ord
                            .exponents
                            .iter()
                            .map(|e| e.to_ext_nat().ok_or_else(|| format!("truncated exponent {e}")))
                            .collect::<std::result::Result<_, _>>()?;
                        return ensure(got == expected, || format!("[{}] vs [{}]", show(&got), show(&expected)));
                    }
                    Err(Error::CapTooSmall { .. }) if cap < 256 => cap *= 2,
                    Err(e) => return Err(e.to_string()),
                }
            }
        }));
    }
    for _ in 0..20 * scale {
        let b = rng.gen_range(2..=10u64);
        let pairs: Vec<(i64, i64)> =
            (0..50).map(|_| (rng.gen_range(-10_000..=10_000), rng.gen_range(-10_000..=10_000))).collect();
        cases.push(case(format!("digit map preserves valuations, b = {b}, 50 pairs"), move || {
            for &(x, y) in &pairs {
                if !lib(crate::series::congruence_check(b, x, y, 24))? {
                    return Err(format!("b = {b}, a1 = {x}, a2 = {y}"));
                }
            }
            Ok(())
        }));
    }
    cases
}

fn maxmin(rng: &mut ChaCha8Rng, scale: usize) -> Vec<Case> {
    let mut cases = Vec::new();
    for i in 0..60 * scale {
        let u = if i % 2 == 0 {
            random_series_set(rng)
        } else {
            let set = random_finite_set(rng, 8);
            let b = rng.gen_range(2..=10u64);
            let cap = 2 + 8 * set.len();
            set.iter().map(|&a| phi_b(a, b, cap).expect("b >= 2")).collect()
        };
        let u = with_sufficient_cap(u);
        let k = rng.gen_range(0..u.len());
        let seed: u64 = rng.gen();
        let variants: Vec<(u64, usize)> = (0..5).map(|_| (rng.gen(), rng.gen_range(0..u.len()))).collect();
        cases.push(case(format!("max-min and invariance, |U| = {}, k = {k}", u.len()), move || {
            let report = lib(maxmin_check(&u, k, 20, seed))?;
            if !report.passed() {
                return Err(format!(
                    "α_k = {}, witness min = {}, violations = {:?}",
                    report.alpha_k, report.witness_min, report.violations
                ));
            }
            let reference = lib(t_ordering(&u, u.len() - 1, &TOrderingOptions::default()))?.exponents;
            for &(s, start) in &variants {
                let o = TOrderingOptions { policy: TieBreak::Seeded(s), start: Some(start) };
                let e = lib(t_ordering(&u, u.len() - 1, &o))?.exponents;
                if e != reference {
                    return Err(format!("start {start}, seed {s}: {e:?} vs {reference:?}"));
                }
            }
            Ok(())
        }));
    }
    cases
}

/// Truncates `U` to `2 + max_f Σ_g ord_t(f - g)`, which bounds every
/// exponent the max–min check can meet. Only ever lowers caps.
fn with_sufficient_cap(u: Vec<TruncatedSeries>) -> Vec<TruncatedSeries> {
    let total = |f: &TruncatedSeries| -> usize {
        u.iter()
            .filter(|g| *g != f)
            .map(|g| match crate::series::ord_t(&(f - g)) {
                crate::series::TOrderValue::Exact(v) => v as usize,
                crate::series::TOrderValue::AtLeastCap => f.cap().min(g.cap()),
            })
            .sum()
    };
    let cap = 2 + u.iter().map(total).max().unwrap_or(0);
    u.iter().map(|f| f.truncate(cap.min(f.cap()))).collect()
}

fn closed_forms() -> Vec<Case> {
    let mut cases = Vec::new();
    for b in 2..=12u64 {
        cases.push(case(format!("greedy over Z equals the floor sums, b = {b}, k <= 100"), move || {
            let o = EngineOptions { force_greedy: true, ..opts() };
            let seq = lib(exponent_sequence(&SetDescriptor::Integers, b, 100, &o))?;
            ensure(seq.certified, || "uncertified step".into())?;
            for (k, v) in seq.values.iter().enumerate() {
                if *v != ExtNat::from(alpha_z(k as u64, b)) {
                    return Err(format!("k = {k}: greedy {v}, closed form {}", alpha_z(k as u64, b)));
                }
            }
            Ok(())
        }));
    }
    for b in 2..=12u64 {
        cases.push(case(format!("greedy over P equals the closed form, b = {b}, k <= 40"), move || {
            let o = EngineOptions { force_greedy: true, ..opts() };
            let seq = lib(exponent_sequence(&SetDescriptor::Primes, b, 40, &o))?;
            ensure(seq.certified, || "uncertified step".into())?;
            for (k, v) in seq.values.iter().enumerate() {
                if *v != ExtNat::from(alpha_p(k as u64, b)) {
                    return Err(format!("k = {k}: greedy {v}, closed form {}", alpha_p(k as u64, b)));
                }
            }
            Ok(())
        }));
        cases.push(case(format!("residue-class witness attains α(P, {b})"), move || {
            let e = if b <= 3 { 3 } else { 2 };
            let seq = lib(prime_witness_sequence(b, e, 1 << 32))?;
            let values = evaluate_test_sequence(&seq, b);
            for (k, v) in values.iter().enumerate() {
                if *v != ExtNat::from(alpha_p(k as u64, b)) {
                    return Err(format!("k = {k}: witness {v}, closed form {}", alpha_p(k as u64, b)));
                }
            }
            Ok(())
        }));
    }
    cases.push(case("3!_{P,P} = 24", || {
        let f = lib(factorial_p(3, &BaseSet::PrimesUpTo(Cutoff::Auto)))?;
        let g = lib(factorial(&SetDescriptor::Primes, &BaseSet::PrimesUpTo(Cutoff::Explicit(50)), 3, &opts()))?.value;
        ensure(f.to_decimal() == BigUint::from(24u32) && f == g, || format!("{f} and {g}"))
    }));
    cases.push(case("α_k(P, b) = 0 exactly when φ(b) + ω(b) > k", || {
        for b in 2..=500u64 {
            let threshold = totient(b) + omega(b);
            for k in 0..=threshold {
                if (alpha_p(k, b) == 0) != (k < threshold) {
                    return Err(format!("b = {b}, k = {k}"));
                }
            }
        }
        Ok(())
    }));
    cases.push(case("k!_{Z,P} = k! for k <= 20", || {
        let mut plain = BigUint::from(1u32);
        for k in 0..=20u64 {
            if k > 0 {
                plain *= k;
            }
            let t = BaseSet::PrimesUpTo(Cutoff::Explicit(k));
            let f = lib(factorial(&SetDescriptor::Integers, &t, k, &opts()))?.value;
            if f.to_decimal() != plain {
                return Err(format!("k = {k}: {f}"));
            }
        }
        Ok(())
    }));
    cases.push(case("[n]_{Z,N} carries exponent ord_b(n) on each base b, n <= 60", || {
        for n in 1..=60u64 {
            let v = lib(gen_integer(&SetDescriptor::Integers, &BaseSet::BasesUpTo(Cutoff::Auto), n, &opts()))?.value;
            for b in 2..=n {
                let want = ExtNat::from(ord_b_small(b, n as i128));
                if v.exponent(b) != want {
                    return Err(format!("n = {n}, b = {b}: {} vs {want}", v.exponent(b)));
                }
            }
        }
        Ok(())
    }));
    cases.push(case("floor and digit forms of β agree, k <= 300, b <= 30", || {
        for b in 2..=30 {
            for k in 0..=300 {
                for l in 0..=k {
                    if beta_floor(k, l, b) != beta_digit(k, l, b) {
                        return Err(format!("k = {k}, l = {l}, b = {b}"));
                    }
                }
            }
        }
        Ok(())
    }));
    cases.push(case("partition minimum and profile, k <= 12, m <= 6", || {
        for k in 0..=12 {
            for m in 1..=6 {
                let (best, minimizers) = brute_partitions(k, m);
                if partition_min(k, m) != best {
                    return Err(format!("k = {k}, m = {m}: {} vs {best}", partition_min(k, m)));
                }
                if minimizers.iter().any(|p| *p != equality_profile(k, m)) {
                    return Err(format!("k = {k}, m = {m}: minimizers {minimizers:?}"));
                }
            }
        }
        Ok(())
    }));
    cases.push(case("floor sum against direct summation, k <= 200, m <= 50", || {
        for k in 0..=200u64 {
            for m in 1..=50u64 {
                let direct: u64 = (0..k).map(|i| i / m).sum();
                let q = k / m;
                let weighted = (k - m * q) * binom2(q + 1) + (m + m * q - k) * binom2(q);
                if floor_sum(k, m) != direct || weighted != direct {
                    return Err(format!("k = {k}, m = {m}"));
                }
            }
        }
        Ok(())
    }));
    cases
}

/// Minimum of `Σ C(n_i, 2)` over compositions of `k` into `m` parts, and the
/// minimizing parts sorted largest first.
fn brute_partitions(k: u64, m: u64) -> (u64, BTreeSet<Vec<u64>>) {
    fn rec(k: u64, m: u64, cur: &mut Vec<u64>, best: &mut (u64, BTreeSet<Vec<u64>>)) {
        if m == 1 {
            cur.push(k);
            let cost: u64 = cur.iter().map(|&n| binom2(n)).sum();
            let mut sorted = cur.clone();
            sorted.sort_unstable_by(|a, b| b.cmp(a));
            if cost < best.0 {
                *best = (cost, BTreeSet::from([sorted]));
            } else if cost == best.0 {
                best.1.insert(sorted);
            }
            cur.pop();
            return;
        }
        for first in 0..=k {
            cur.push(first);
            rec(k - first, m - 1, cur, best);
            cur.pop();
        }
    }
    let mut best = (u64::MAX, BTreeSet::new());
    rec(k, m, &mut Vec::new(), &mut best);
    best
}

fn tables_suite() -> Vec<Case> {
    (1..=4u8)
        .map(|which| {
            case(format!("table {which} reproduces byte for byte"), move || {
                let check = lib(tables::check(which))?;
                ensure(check.matches, || check.diff.join("\n"))
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert_eq!(Suite::parse_selection("all").unwrap().len(), 9);
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn reports_are_deterministic() {
        let config = VerifyConfig { seed: 7, scale: 1 };
        let a = serde_json::to_string(&run_suite(Suite::Monotonicity, config)).unwrap();
        let b = serde_json::to_string(&run_suite(Suite::Monotonicity, config)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn tables_suite_passes() {
        assert!(run_suite(Suite::Tables, VerifyConfig::default()).passed);
    }
}
