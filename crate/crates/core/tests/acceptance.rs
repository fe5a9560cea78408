//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion.

use std::time::{Duration, Instant};

use bfactorial::closedforms::{alpha_p, alpha_z, equality_profile, partition_min};
use bfactorial::factorials::{factorial, gen_binomial, gen_integer, BaseSet, Cutoff};
use bfactorial::numerics::{binom2, floor_sum};
use bfactorial::ordering::{evaluate_multiplicative, evaluate_test_sequence, exponent_sequence, EngineOptions};
use bfactorial::tables;
use bfactorial::verify::{run_suite, Suite, VerifyConfig};
use bfactorial::{ExtNat, SetDescriptor};
use num_bigint::BigUint;
use num_integer::Integer;

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict, Duration);

fn greedy() -> EngineOptions {
    EngineOptions { force_greedy: true, ..EngineOptions::default() }
}

fn table_reproduction() -> Verdict {
    for which in 1..=4 {
        let check = tables::check(which).map_err(|e| e.to_string())?;
        if !check.matches {
            return Err(format!("table {which} differs:\n{}", check.diff.join("\n")));
        }
    }
    Ok("tables 1-4 byte-identical".into())
}

fn legendre() -> Verdict {
    let mut plain = BigUint::from(1u32);
    for k in 0..=20u64 {
        if k > 0 {
            plain *= k;
        }
        let t = BaseSet::PrimesUpTo(Cutoff::Explicit(k));
        let f = factorial(&SetDescriptor::Integers, &t, k, &EngineOptions::default()).map_err(|e| e.to_string())?;
        if f.value.to_decimal() != plain {
            return Err(format!("k = {k}: got {}", f.value));
        }
    }
    Ok("k!_{Z,P} = k! for 0 <= k <= 20".into())
}

fn greedy_against(set: SetDescriptor, k: usize, closed: fn(u64, u64) -> u64) -> Verdict {
    for b in 2..=12u64 {
        let seq = exponent_sequence(&set, b, k, &greedy()).map_err(|e| e.to_string())?;
        if !seq.certified {
            return Err(format!("b = {b}: uncertified step"));
        }
        for (i, v) in seq.values.iter().enumerate() {
            if *v != ExtNat::from(closed(i as u64, b)) {
                return Err(format!("b = {b}, k = {i}: greedy {v}, closed form {}", closed(i as u64, b)));
            }
        }
    }
    Ok(format!("{set}: 2 <= b <= 12, 0 <= k <= {k}, all steps certified"))
}

fn primes_closed_form() -> Verdict {
    let summary = greedy_against(SetDescriptor::Primes, 40, alpha_p)?;
    let t = BaseSet::PrimesUpTo(Cutoff::Explicit(50));
    let f = factorial(&SetDescriptor::Primes, &t, 3, &greedy()).map_err(|e| e.to_string())?;
    if f.value.to_decimal() != BigUint::from(24u32) {
        return Err(format!("3!_(P,P) = {}", f.value));
    }
    Ok(format!("{summary}; 3!_(P,P) = 24"))
}

fn suite(s: Suite, seed: u64) -> Result<usize, String> {
    let report = run_suite(s, VerifyConfig { seed, scale: 1 });
    let failure = report
        .failures()
        .next()
        .map(|f| format!("{s}: {} ({})", f.description, f.counterexample.clone().unwrap_or_default()));
    failure.map_or(Ok(report.instances.len()), Err)
}

fn well_definedness() -> Verdict {
    let n = suite(Suite::WellDefinedness, 7)?;
    if n < 100 {
        return Err(format!("only {n} sets"));
    }
    Ok(format!("{n} random sets, 6 orderings each, identical exponents"))
}

fn multiplicative_ordering_counterexample() -> Verdict {
    let additive = evaluate_test_sequence(&[0, 1, 2, 5], 6);
    let mult = evaluate_multiplicative(&[0, 1, 2, 5], 6).map_err(|e| e.to_string())?;
    let other = evaluate_multiplicative(&[0, 2, 4, 5], 6).map_err(|e| e.to_string())?;
    let want = (ExtNat::from(0), ExtNat::from(1), ExtNat::from(0));
    let got = (additive[3].clone(), mult[3].clone(), other[3].clone());
    if got != want {
        return Err(format!("got α_3 = {}, α*_3 = {}, α*_3' = {}", got.0, got.1, got.2));
    }
    Ok("α_3 = 0, α*_3 = 1 for (0,1,2,5); α*_3 = 0 for (0,2,4,5)".into())
}

fn property_suites() -> Verdict {
    let mut counts = Vec::new();
    for s in [
        Suite::Majorization,
        Suite::Superadditivity,
        Suite::Monotonicity,
        Suite::Divisibility,
        Suite::Transport,
        Suite::Maxmin,
    ] {
        counts.push(format!("{s} {}", suite(s, 7)?));
    }
    Ok(counts.join(", "))
}

fn knuth_wilf() -> Verdict {
    let z = SetDescriptor::Integers;
    let t = BaseSet::BasesUpTo(Cutoff::Auto);
    let opts = EngineOptions::default();
    let at = |n| gen_integer(&z, &t, n, &opts).map(|c| c.value.to_decimal()).map_err(|e| e.to_string());
    let (two, four, six) = (at(2)?, at(4)?, at(6)?);
    let g = four.gcd(&six);
    if (four.clone(), six.clone(), g.clone(), two.clone())
        != (16u32.into(), 36u32.into(), 4u32.into(), 2u32.into())
    {
        return Err(format!("[2] = {two}, [4] = {four}, [6] = {six}, gcd = {g}"));
    }
    for k in 0..=30 {
        for l in 0..=k {
            gen_binomial(&z, &t, k, l, &opts).map_err(|e| format!("k = {k}, l = {l}: {e}"))?;
        }
    }
    Ok("gcd([4],[6]) = 4 != 2 = [2]; rows k <= 30 integral".into())
}

fn partitions() -> Verdict {
    fn brute(k: u64, m: u64) -> (u64, Vec<Vec<u64>>) {
        let mut best = (u64::MAX, Vec::new());
        let mut parts = vec![0u64; m as usize];
        fn rec(i: usize, left: u64, parts: &mut Vec<u64>, best: &mut (u64, Vec<Vec<u64>>)) {
            if i + 1 == parts.len() {
                parts[i] = left;
                let cost = parts.iter().map(|&n| binom2(n)).sum::<u64>();
                let mut sorted = parts.clone();
                sorted.sort_unstable_by(|a, b| b.cmp(a));
                if cost < best.0 {
                    *best = (cost, vec![sorted]);
                } else if cost == best.0 {
                    best.1.push(sorted);
                }
                return;
            }
            for first in 0..=left {
                parts[i] = first;
                rec(i + 1, left - first, parts, best);
            }
        }
        rec(0, k, &mut parts, &mut best);
        best
    }
    for k in 0..=12 {
        for m in 1..=6 {
            let (best, minimizers) = brute(k, m);
            if partition_min(k, m) != best || floor_sum(k, m) != best {
                return Err(format!("k = {k}, m = {m}: minimum {best}, formula {}", partition_min(k, m)));
            }
            if minimizers.iter().any(|p| *p != equality_profile(k, m)) {
                return Err(format!("k = {k}, m = {m}: minimizers {minimizers:?}"));
            }
        }
    }
    for k in 0..=200u64 {
        for m in 1..=50u64 {
            let direct: u64 = (0..k).map(|i| i / m).sum();
            if floor_sum(k, m) != direct {
                return Err(format!("floor sum k = {k}, m = {m}"));
            }
        }
    }
    // k floor(k/m) - m C(floor(k/m), 2) as printed
    let printed = 7 * (7 / 3) - 3 * binom2(7 / 3);
    if printed == floor_sum(7, 3) {
        return Err("printed compact identity unexpectedly agrees at (7, 3)".into());
    }
    Ok(format!(
        "partitions k <= 12, m <= 6; floor sum k <= 200, m <= 50; printed compact form gives {printed} at (7,3), direct sum {}",
        floor_sum(7, 3)
    ))
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 9] = [
        ("table reproduction", table_reproduction, Duration::from_secs(1)),
        ("Legendre reduction", legendre, Duration::from_secs(1)),
        ("greedy vs closed form over Z", || greedy_against(SetDescriptor::Integers, 100, alpha_z), Duration::from_secs(30)),
        ("greedy vs closed form over P", primes_closed_form, Duration::from_secs(120)),
        ("well-definedness", well_definedness, Duration::from_secs(60)),
        ("multiplicative ordering counterexample", multiplicative_ordering_counterexample, Duration::from_secs(1)),
        ("property suites", property_suites, Duration::from_secs(300)),
        ("Knuth-Wilf counterexample", knuth_wilf, Duration::from_secs(30)),
        ("partition and floor-sum oracles", partitions, Duration::from_secs(30)),
    ];
    let mut failed = Vec::new();
    for (i, (name, check, limit)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let verdict = check();
        let elapsed = start.elapsed();
        let verdict = match verdict {
            Ok(msg) if elapsed > limit => Err(format!("{msg}; took {elapsed:.2?}, limit {limit:?}")),
            other => other,
        };
        match verdict {
            Ok(msg) => println!("criterion {}: PASS  {name} ({elapsed:.2?}): {msg}", i + 1),
            Err(msg) => {
                println!("criterion {}: FAIL  {name} ({elapsed:.2?}): {msg}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
