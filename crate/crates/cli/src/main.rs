//! `bfact`: generalized factorials, b-exponent sequences and the
//! verification harness from the command line.

mod output;

use std::fmt::Write as _;
use std::process::ExitCode;

use bfactorial::factorials::{
    factorial, gen_binomial, gen_integer, partial_row_product, row_product, BaseSet, Computed, Cutoff,
    FactoredNumber,
};
use bfactorial::ordering::{exponent_sequence, EngineOptions, Source, TieBreak};
use bfactorial::tables;
use bfactorial::verify::{self, Suite, VerifyConfig};
use bfactorial::{Error, SetDescriptor};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::Value;

use output::{Cell, Config, Format, Report};

const PASS: u8 = 0;
const PROPERTY_FAILURE: u8 = 1;
const USAGE: u8 = 2;
const UNCERTIFIED: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "bfact", version, about = "Generalized factorials from b-orderings")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Seed for `verify` and for the seeded tie-break.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[arg(long, global = true, value_enum, default_value_t = TieBreakArg::Canonical)]
    tie_break: TieBreakArg,

    /// Bound |a| <= window for fallback scans.
    #[arg(long, global = true, default_value_t = EngineOptions::default().window)]
    window: u64,

    /// Deepest residue level the branch-and-bound search may open.
    #[arg(long, global = true, default_value_t = EngineOptions::default().max_level)]
    max_level: u32,

    /// Largest prime scanned inside one residue class of P.
    #[arg(long, global = true, default_value_t = EngineOptions::default().prime_cap)]
    prime_cap: i64,

    /// Use the greedy engine even where a closed form is known.
    #[arg(long, global = true)]
    force_greedy: bool,

    /// Print results that rest on a window-limited search instead of failing.
    #[arg(long, global = true)]
    allow_uncertified: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum TieBreakArg {
    Canonical,
    Seeded,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// The b-exponent sequence α_0(S,b), ..., α_k(S,b).
    Exponents {
        #[arg(long)]
        set: String,
        #[arg(long)]
        base: u64,
        #[arg(long)]
        k: usize,
    },
    /// The generalized factorial k!_{S,T}.
    Factorial {
        #[arg(long)]
        set: String,
        /// `auto`, `list:..`, `range:lo..hi`, `primes:N|auto` or `upto:N|auto`.
        #[arg(long, default_value = "auto")]
        bases: String,
        #[arg(long)]
        k: u64,
    },
    /// The generalized integer [n]_{S,T}.
    Integer {
        #[arg(long)]
        set: String,
        #[arg(long, default_value = "auto")]
        bases: String,
        #[arg(long)]
        n: u64,
    },
    /// The generalized binomial coefficient (k choose l)_{S,T}.
    Binomial {
        #[arg(long)]
        set: String,
        #[arg(long, default_value = "auto")]
        bases: String,
        #[arg(long)]
        k: u64,
        #[arg(long)]
        l: u64,
    },
    /// Regenerates a stored table for (Z, N) and compares it with the stored copy.
    Tables {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=4))]
        which: u8,
    },
    /// Product of row n of the (Z, N) Pascal triangle, or its part over bases 2..=x.
    Rowproduct {
        n: u64,
        #[arg(long)]
        x: Option<u64>,
    },
    /// Runs property suites and reports every checked instance.
    Verify {
        /// A suite name or `all`.
        #[arg(long, default_value = "all")]
        suite: String,
        /// Multiplies the number of random instances.
        #[arg(long, default_value_t = 1)]
        scale: usize,
    },
}

/// A failed run: exit code and message for stderr.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Domain(_) | Error::Parse(_) | Error::EmptySet | Error::EnumerationCap { .. } | Error::Io(_) => {
                USAGE
            }
            Error::SearchExhausted { .. } | Error::CapTooSmall { .. } => UNCERTIFIED,
            Error::NotFound { .. } | Error::CrossCheck(_) => PROPERTY_FAILURE,
        };
        Failure { code, message: e.to_string() }
    }
}

/// What a command produced: the report, and the exit code to use after printing it.
struct Outcome {
    report: Report,
    code: u8,
    note: Option<String>,
}

impl Outcome {
    fn ok(report: Report) -> Self {
        Outcome { report, code: PASS, note: None }
    }
}

fn engine_options(cli: &Cli) -> EngineOptions {
    EngineOptions {
        policy: match cli.tie_break {
            TieBreakArg::Canonical => TieBreak::Canonical,
            TieBreakArg::Seeded => TieBreak::Seeded(cli.seed),
        },
        window: cli.window,
        max_level: cli.max_level,
        prime_cap: cli.prime_cap,
        force_greedy: cli.force_greedy,
        ..EngineOptions::default()
    }
}

fn parse_bases(spec: &str) -> Result<BaseSet, Error> {
    if spec == "auto" {
        Ok(BaseSet::BasesUpTo(Cutoff::Auto))
    } else {
        BaseSet::parse(spec)
    }
}

fn config(cli: &Cli) -> Config {
    let mut c = Config::default();
    let (name, params): (&str, Vec<(&str, Value)>) = match &cli.command {
        Command::Exponents { set, base, k } => {
            ("exponents", vec![("set", set.as_str().into()), ("base", (*base).into()), ("k", (*k).into())])
        }
        Command::Factorial { set, bases, k } => (
            "factorial",
            vec![("set", set.as_str().into()), ("bases", bases.as_str().into()), ("k", (*k).into())],
        ),
        Command::Integer { set, bases, n } => (
            "integer",
            vec![("set", set.as_str().into()), ("bases", bases.as_str().into()), ("n", (*n).into())],
        ),
        Command::Binomial { set, bases, k, l } => (
            "binomial",
            vec![
                ("set", set.as_str().into()),
                ("bases", bases.as_str().into()),
                ("k", (*k).into()),
                ("l", (*l).into()),
            ],
        ),
        Command::Tables { which } => ("tables", vec![("which", (*which).into())]),
        Command::Rowproduct { n, x } => ("rowproduct", vec![("n", (*n).into()), ("x", (*x).into())]),
        Command::Verify { suite, scale } => {
            ("verify", vec![("suite", suite.as_str().into()), ("scale", (*scale).into())])
        }
    };
    c.set("command", name);
    for (k, v) in params {
        c.set(k, v);
    }
    c.set("format", cli.format.name());
    c.set("seed", cli.seed);
    c.set("tie_break", engine_options(cli).policy.label());
    c.set("window", cli.window);
    c.set("max_level", cli.max_level);
    c.set("prime_cap", cli.prime_cap);
    c.set("force_greedy", cli.force_greedy);
    c.set("allow_uncertified", cli.allow_uncertified);
    c
}

fn value_columns() -> Vec<&'static str> {
    vec!["decimal", "factored", "by_base", "table_form", "bases", "certified"]
}

fn value_cells(c: &Computed) -> Vec<Cell> {
    let bases: Vec<String> = c.bases.iter().map(u64::to_string).collect();
    vec![
        Cell::Decimal(c.value.to_decimal().to_string()),
        Cell::Text(c.value.refine_to_primes().to_string()),
        Cell::Text(c.value.to_string()),
        Cell::Text(tables::table_form(&c.value, "×")),
        Cell::Text(bases.join(",")),
        Cell::Bool(c.certified),
    ]
}

fn gate(cli: &Cli, certified: bool, report: Report) -> Result<Outcome, Failure> {
    if certified || cli.allow_uncertified {
        let note = (!certified).then(|| "warning: result rests on a window-limited search".to_string());
        return Ok(Outcome { report, code: PASS, note });
    }
    Err(Failure {
        code: UNCERTIFIED,
        message: "result rests on a window-limited search and is not certified; \
                  raise --window/--max-level or pass --allow-uncertified"
            .into(),
    })
}

fn computed(cli: &Cli, params: Vec<(&'static str, Cell)>, c: Computed) -> Result<Outcome, Failure> {
    let mut columns: Vec<&'static str> = params.iter().map(|(n, _)| *n).collect();
    columns.extend(value_columns());
    let mut row: Vec<Cell> = params.into_iter().map(|(_, v)| v).collect();
    row.extend(value_cells(&c));
    gate(cli, c.certified, Report { columns, rows: vec![row], body: None })
}

fn ln_value(f: &FactoredNumber) -> Cell {
    if f.is_zero() {
        return Cell::Text("-inf".into());
    }
    let ln: f64 = f
        .exponents()
        .iter()
        .map(|(&b, e)| (b as f64).ln() * e.to_u64().expect("finite exponent") as f64)
        .sum();
    Cell::Text(format!("{ln:.6}"))
}

fn execute(cli: &Cli) -> Result<Outcome, Failure> {
    let opts = engine_options(cli);
    match &cli.command {
        Command::Exponents { set, base, k } => {
            let s = SetDescriptor::parse(set)?;
            let seq = exponent_sequence(&s, *base, *k, &opts)?;
            let source = match seq.source {
                Source::ClosedForm => "closed-form",
                Source::Greedy => "greedy",
            };
            let rows = seq
                .values
                .iter()
                .enumerate()
                .map(|(i, v)| {
                    vec![
                        Cell::Int(i as i64),
                        Cell::Ext(v.clone()),
                        Cell::Bool(seq.certified),
                        Cell::Text(source.into()),
                    ]
                })
                .collect();
            let report = Report { columns: vec!["i", "alpha", "certified", "source"], rows, body: None };
            gate(cli, seq.certified, report)
        }
        Command::Factorial { set, bases, k } => {
            let (s, t) = (SetDescriptor::parse(set)?, parse_bases(bases)?);
            let c = factorial(&s, &t, *k, &opts)?;
            computed(cli, vec![("k", Cell::Int(*k as i64))], c)
        }
        Command::Integer { set, bases, n } => {
            let (s, t) = (SetDescriptor::parse(set)?, parse_bases(bases)?);
            let c = gen_integer(&s, &t, *n, &opts)?;
            computed(cli, vec![("n", Cell::Int(*n as i64))], c)
        }
        Command::Binomial { set, bases, k, l } => {
            let (s, t) = (SetDescriptor::parse(set)?, parse_bases(bases)?);
            let c = gen_binomial(&s, &t, *k, *l, &opts)?;
            computed(cli, vec![("k", Cell::Int(*k as i64)), ("l", Cell::Int(*l as i64))], c)
        }
        Command::Tables { which } => {
            let check = tables::check(*which)?;
            let rendered = tables::render(*which)?;
            let report = Report {
                columns: vec!["table", "matches", "text"],
                rows: vec![vec![Cell::Int(*which as i64), Cell::Bool(check.matches), Cell::Text(rendered.clone())]],
                body: Some(rendered),
            };
            if check.matches {
                Ok(Outcome::ok(report))
            } else {
                let note = format!("table {which} differs from the stored copy:\n{}", check.diff.join("\n"));
                Ok(Outcome { report, code: PROPERTY_FAILURE, note: Some(note) })
            }
        }
        Command::Rowproduct { n, x } => {
            let value = match x {
                Some(x) => partial_row_product(*n, *x)?,
                None => row_product(*n)?,
            };
            let row = vec![
                Cell::Int(*n as i64),
                Cell::Int(x.unwrap_or(*n) as i64),
                Cell::Text(value.to_string()),
                Cell::Text(value.refine_to_primes().to_string()),
                Cell::Decimal(value.to_decimal().to_string()),
                ln_value(&value),
            ];
            Ok(Outcome::ok(Report {
                columns: vec!["n", "x", "by_base", "factored", "decimal", "ln"],
                rows: vec![row],
                body: None,
            }))
        }
        Command::Verify { suite, scale } => {
            let suites = Suite::parse_selection(suite)?;
            let report = verify::run(&suites, VerifyConfig { seed: cli.seed, scale: *scale });
            let mut body = String::new();
            let mut rows = Vec::new();
            for s in &report.suites {
                let failures = s.failures().count();
                let verdict = if s.passed { "PASS" } else { "FAIL" };
                let _ = writeln!(body, "{}: {verdict} ({} instances, {failures} failed)", s.suite, s.instances.len());
                for inst in &s.instances {
                    if !inst.passed {
                        let why = inst.counterexample.as_deref().unwrap_or("");
                        let _ = writeln!(body, "  #{} {}: {why}", inst.index, inst.description);
                    }
                    rows.push(vec![
                        Cell::Text(s.suite.name().into()),
                        Cell::Int(inst.index as i64),
                        Cell::Text(inst.description.clone()),
                        Cell::Bool(inst.passed),
                        Cell::Text(inst.counterexample.clone().unwrap_or_default()),
                    ]);
                }
            }
            let _ = writeln!(body, "overall: {}", if report.passed { "PASS" } else { "FAIL" });
            let code = if report.passed { PASS } else { PROPERTY_FAILURE };
            Ok(Outcome {
                report: Report {
                    columns: vec!["suite", "index", "description", "passed", "counterexample"],
                    rows,
                    body: Some(body),
                },
                code,
                note: None,
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(outcome) => {
            print!("{}", output::render(cli.format, &config(&cli), &outcome.report));
            if let Some(note) = outcome.note {
                eprintln!("{note}");
            }
            ExitCode::from(outcome.code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
