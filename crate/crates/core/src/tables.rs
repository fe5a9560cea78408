//! The four appendix tables for `(Z, N)`, rendered from the calculators and
//! compared against stored copies.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::factorials::{factorial, gen_binomial, gen_integer, BaseSet, Cutoff, FactoredNumber};
use crate::intsets::SetDescriptor;
use crate::numerics::ExtNat;
use crate::ordering::EngineOptions;

const GOLDEN: [&str; 4] = [
    include_str!("../golden/table1.txt"),
    include_str!("../golden/table2.txt"),
    include_str!("../golden/table3.txt"),
    include_str!("../golden/table4.txt"),
];

/// `1234567` as `1,234,567`.
pub fn with_commas(digits: &str) -> String {
    let mut out = String::with_capacity(digits.len() + digits.len() / 3);
    for (i, c) in digits.chars().enumerate() {
        if i > 0 && (digits.len() - i).is_multiple_of(3) {
            out.push(',');
        }
        out.push(c);
    }
    out
}

/// Prime factorization in table style (`2^{14}×5^4`), terms joined by `sep`.
pub fn table_form(f: &FactoredNumber, sep: &str) -> String {
    let f = f.refine_to_primes();
    if f.is_zero() {
        return "0".into();
    }
    if f.is_one() {
        return "1".into();
    }
    f.exponents()
        .iter()
        .map(|(p, e)| {
            if *e == ExtNat::from(1) {
                p.to_string()
            } else if e.to_u64().is_some_and(|e| e < 10) {
                format!("{p}^{e}")
            } else {
                format!("{p}^{{{e}}}")
            }
        })
        .collect::<Vec<_>>()
        .join(sep)
}

fn decimal(f: &FactoredNumber) -> String {
    with_commas(&f.to_decimal().to_string())
}

fn upto(n: u64) -> BaseSet {
    BaseSet::BasesUpTo(Cutoff::Explicit(n.max(1)))
}

/// Renders table `which` (1 to 4).
pub fn render(which: u8) -> Result<String> {
    let z = SetDescriptor::Integers;
    let opts = EngineOptions::default();
    let mut out = String::new();
    match which {
        1 => {
            out.push_str("# [n]_{Z,N}: decimal = factored for 1 <= n <= 40, factored only for 41 <= n <= 60\n");
            for n in 1..=60 {
                let v = gen_integer(&z, &upto(n), n, &opts)?.value;
                if n <= 40 {
                    out.push_str(&format!("{n}\t{} = {}\n", decimal(&v), table_form(&v, "×")));
                } else {
                    out.push_str(&format!("{n}\t{}\n", table_form(&v, "×")));
                }
            }
        }
        2 => {
            out.push_str("# k!_{Z,N}: decimal = factored for 0 <= k <= 19\n");
            for k in 0..=19 {
                let v = factorial(&z, &upto(k), k, &opts)?.value;
                out.push_str(&format!("{k}\t{} = {}\n", decimal(&v), table_form(&v, "×")));
            }
        }
        3 | 4 => {
            if which == 3 {
                out.push_str("# binomial(k, l)_{Z,N} in decimal, row k lists l = 0..k, 0 <= k <= 10\n");
            } else {
                out.push_str(
                    "# binomial(k, l)_{Z,N} in prime-factored form, row k lists l = 0..min(k, 7), 0 <= k <= 10\n",
                );
            }
            for k in 0..=10u64 {
                let last = if which == 3 { k } else { k.min(7) };
                let mut row = vec![k.to_string()];
                for l in 0..=last {
                    let v = gen_binomial(&z, &upto(k), k, l, &opts)?.value;
                    row.push(if which == 3 { decimal(&v) } else { table_form(&v, "·") });
                }
                out.push_str(&row.join("\t"));
                out.push('\n');
            }
        }
        _ => return Err(Error::domain(format!("there is no table {which}; choose 1 to 4"))),
    }
    Ok(out)
}

/// The stored copy of table `which`.
pub fn golden(which: u8) -> Result<&'static str> {
    match which {
        1..=4 => Ok(GOLDEN[which as usize - 1]),
        _ => Err(Error::domain(format!("there is no table {which}; choose 1 to 4"))),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TableCheck {
    pub table: u8,
    pub matches: bool,
    /// `-expected` / `+rendered` line pairs for differing lines.
    pub diff: Vec<String>,
}

/// Renders table `which` and compares it byte for byte with the stored copy.
pub fn check(which: u8) -> Result<TableCheck> {
    let rendered = render(which)?;
    let expected = golden(which)?;
    let mut diff = Vec::new();
    let (a, b): (Vec<&str>, Vec<&str>) = (expected.lines().collect(), rendered.lines().collect());
    for i in 0..a.len().max(b.len()) {
        let (x, y) = (a.get(i).copied(), b.get(i).copied());
        if x != y {
            diff.push(format!("line {}:", i + 1));
            diff.push(format!("-{}", x.unwrap_or("<missing>")));
            diff.push(format!("+{}", y.unwrap_or("<missing>")));
        }
    }
    Ok(TableCheck { table: which, matches: rendered == expected, diff })
}
