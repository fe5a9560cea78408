//! Subsets of the integers: membership, enumeration in canonical order and
//! residue-class knowledge.
//!
//! The canonical order sorts by absolute value, nonnegative before negative:
//! `0, 1, -1, 2, -2, ...`. Every tie-break downstream uses it.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;
use std::sync::Arc;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::numerics::{is_prime, primes_up_to, ExtNat};

/// Sort key for the canonical order.
pub fn canonical_key(a: i64) -> (u64, bool) {
    (a.unsigned_abs(), a < 0)
}

pub fn canonical_cmp(a: i64, b: i64) -> Ordering {
    canonical_key(a).cmp(&canonical_key(b))
}

/// Largest value scanned when looking for a prime in an infinite residue class.
pub const DEFAULT_PRIME_SEARCH_CAP: i64 = 1 << 40;

type Predicate = Arc<dyn Fn(i64) -> bool + Send + Sync>;

/// A set given only by a membership test, enumerated by scanning.
#[derive(Clone)]
pub struct CustomSet {
    name: String,
    predicate: Predicate,
    /// Enumeration refuses bounds above this.
    cap: u64,
    /// `None` for infinite sets.
    cardinality: Option<usize>,
}

impl CustomSet {
    pub fn new(
        name: impl Into<String>,
        cap: u64,
        cardinality: Option<usize>,
        predicate: impl Fn(i64) -> bool + Send + Sync + 'static,
    ) -> Self {
        CustomSet {
            name: name.into(),
            predicate: Arc::new(predicate),
            cap,
            cardinality,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn cap(&self) -> u64 {
        self.cap
    }
}

impl fmt::Debug for CustomSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomSet")
            .field("name", &self.name)
            .field("cap", &self.cap)
            .field("cardinality", &self.cardinality)
            .finish()
    }
}

/// A nonempty-or-empty subset `S` of the integers.
#[derive(Clone, Debug)]
pub enum SetDescriptor {
    /// Sorted, deduplicated.
    Finite(Vec<i64>),
    Integers,
    Naturals,
    Primes,
    /// `{first, first + step, first + 2 step, ...}` with `step >= 1`.
    Progression { first: i64, step: i64 },
    Custom(CustomSet),
}

/// What is known about `S ∩ (r mod m)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ResidueStatus {
    Empty,
    /// Every member of the class, in canonical order.
    FiniteOnly(Vec<i64>),
    Infinite,
    Unknown,
}

impl SetDescriptor {
    pub fn finite(elements: impl IntoIterator<Item = i64>) -> Self {
        let set: BTreeSet<i64> = elements.into_iter().collect();
        SetDescriptor::Finite(set.into_iter().collect())
    }

    pub fn progression(first: i64, step: i64) -> Result<Self> {
        if step < 1 {
            return Err(Error::domain(format!("progression step must be positive, got {step}")));
        }
        Ok(SetDescriptor::Progression { first, step })
    }

    /// Parses the set grammar:
    /// `Z | N | P | ap:<first>,<step> | list:<c1>,... | range:<lo>..<hi> | file:<path>`.
    pub fn parse(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        match spec {
            "Z" => return Ok(SetDescriptor::Integers),
            "N" => return Ok(SetDescriptor::Naturals),
            "P" => return Ok(SetDescriptor::Primes),
            _ => {}
        }
        let (kind, rest) = spec
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("unknown set spec `{spec}`")))?;
        let int = |s: &str| -> Result<i64> {
            s.trim()
                .parse::<i64>()
                .map_err(|_| Error::Parse(format!("bad integer `{s}` in set spec `{spec}`")))
        };
        match kind {
            "ap" => {
                let (first, step) = rest
                    .split_once(',')
                    .ok_or_else(|| Error::Parse(format!("expected ap:<first>,<step>, got `{spec}`")))?;
                SetDescriptor::progression(int(first)?, int(step)?)
            }
            "list" => {
                let items = rest
                    .split(',')
                    .filter(|s| !s.trim().is_empty())
                    .map(int)
                    .collect::<Result<Vec<_>>>()?;
                Ok(SetDescriptor::finite(items))
            }
            "range" => {
                let (lo, hi) = rest
                    .split_once("..")
                    .ok_or_else(|| Error::Parse(format!("expected range:<lo>..<hi>, got `{spec}`")))?;
                let (lo, hi) = (int(lo)?, int(hi)?);
                if hi < lo {
                    return Err(Error::Parse(format!("empty range `{spec}`")));
                }
                if hi - lo > 10_000_000 {
                    return Err(Error::Parse(format!("range `{spec}` too large")));
                }
                Ok(SetDescriptor::finite(lo..=hi))
            }
            "file" => SetDescriptor::from_file(Path::new(rest)),
            _ => Err(Error::Parse(format!("unknown set kind `{kind}`"))),
        }
    }

    /// One integer per line; blank lines and `#` comments are skipped.
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        let mut items = Vec::new();
        for (no, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let v = line.parse::<i64>().map_err(|_| {
                Error::Parse(format!("{}:{}: not an integer: `{line}`", path.display(), no + 1))
            })?;
            items.push(v);
        }
        Ok(SetDescriptor::finite(items))
    }

    /// Short label used in reports, e.g. `Z`, `P`, `list:0,1,2`.
    pub fn label(&self) -> String {
        match self {
            SetDescriptor::Finite(v) => {
                let items: Vec<String> = v.iter().map(i64::to_string).collect();
                format!("list:{}", items.join(","))
            }
            SetDescriptor::Integers => "Z".into(),
            SetDescriptor::Naturals => "N".into(),
            SetDescriptor::Primes => "P".into(),
            SetDescriptor::Progression { first, step } => format!("ap:{first},{step}"),
            SetDescriptor::Custom(c) => format!("custom:{}", c.name),
        }
    }

    /// `None` when the set is infinite.
    pub fn size(&self) -> Option<usize> {
        match self {
            SetDescriptor::Finite(v) => Some(v.len()),
            SetDescriptor::Custom(c) => c.cardinality,
            _ => None,
        }
    }

    pub fn cardinality(&self) -> ExtNat {
        ExtNat::from(self.size().map(|n| n as u64))
    }

    pub fn is_empty(&self) -> bool {
        self.size() == Some(0)
    }

    pub fn contains(&self, a: i64) -> bool {
        match self {
            SetDescriptor::Finite(v) => v.binary_search(&a).is_ok(),
            SetDescriptor::Integers => true,
            SetDescriptor::Naturals => a >= 0,
            SetDescriptor::Primes => is_prime(a),
            SetDescriptor::Progression { first, step } => a >= *first && (a - first) % step == 0,
            SetDescriptor::Custom(c) => (c.predicate)(a),
        }
    }

    /// All elements with `|a| <= bound`, in canonical order.
    pub fn enumerate(&self, bound: u64) -> Result<Vec<i64>> {
        let bound_i = i64::try_from(bound).unwrap_or(i64::MAX);
        let mut out: Vec<i64> = match self {
            SetDescriptor::Finite(v) => v
                .iter()
                .copied()
                .filter(|a| a.unsigned_abs() <= bound)
                .collect(),
            SetDescriptor::Integers => {
                let mut out = vec![0];
                for a in 1..=bound_i {
                    out.push(a);
                    out.push(-a);
                }
                return Ok(out);
            }
            SetDescriptor::Naturals => (0..=bound_i).collect(),
            SetDescriptor::Primes => primes_up_to(bound).into_iter().map(|p| p as i64).collect(),
            SetDescriptor::Progression { first, step } => {
                if *first > bound_i {
                    Vec::new()
                } else {
                    let start = if *first >= -bound_i {
                        *first
                    } else {
                        // first + step*t >= -bound
                        let t = Integer::div_ceil(&(-bound_i - first), step);
                        first + step * t
                    };
                    (0..)
                        .map(|t| start + step * t)
                        .take_while(|&a| a <= bound_i)
                        .collect()
                }
            }
            SetDescriptor::Custom(c) => {
                if bound > c.cap {
                    return Err(Error::EnumerationCap {
                        set: c.name.clone(),
                        requested: bound,
                        cap: c.cap,
                    });
                }
                let mut out = Vec::new();
                for a in 0..=bound_i {
                    if (c.predicate)(a) {
                        out.push(a);
                    }
                    if a > 0 && (c.predicate)(-a) {
                        out.push(-a);
                    }
                }
                return Ok(out);
            }
        };
        out.sort_by(|&a, &b| canonical_cmp(a, b));
        Ok(out)
    }

    /// The canonical first element.
    pub fn first(&self) -> Result<i64> {
        match self {
            SetDescriptor::Finite(v) => v
                .iter()
                .copied()
                .min_by(|&a, &b| canonical_cmp(a, b))
                .ok_or(Error::EmptySet),
            SetDescriptor::Integers | SetDescriptor::Naturals => Ok(0),
            SetDescriptor::Primes => Ok(2),
            SetDescriptor::Progression { first, step } => {
                if *first >= 0 {
                    Ok(*first)
                } else {
                    // Closest members to zero on either side.
                    let t = Integer::div_ceil(&(-first), step);
                    let above = first + step * t;
                    let below = above - step;
                    Ok(if below >= *first && canonical_cmp(below, above).is_lt() {
                        below
                    } else {
                        above
                    })
                }
            }
            SetDescriptor::Custom(c) => self
                .enumerate(c.cap)?
                .first()
                .copied()
                .ok_or(Error::EmptySet),
        }
    }

    /// Residue-class knowledge for `S ∩ (r mod m)`, `0 <= r < m`, `m >= 2`.
    pub fn residue_status(&self, r: i128, m: i128) -> ResidueStatus {
        debug_assert!(m >= 2 && (0..m).contains(&r));
        match self {
            SetDescriptor::Finite(v) => {
                let mut members: Vec<i64> = v
                    .iter()
                    .copied()
                    .filter(|&a| (a as i128).rem_euclid(m) == r)
                    .collect();
                if members.is_empty() {
                    ResidueStatus::Empty
                } else {
                    members.sort_by(|&a, &b| canonical_cmp(a, b));
                    ResidueStatus::FiniteOnly(members)
                }
            }
            SetDescriptor::Integers | SetDescriptor::Naturals => ResidueStatus::Infinite,
            SetDescriptor::Progression { first, step } => {
                let g = (*step as i128).gcd(&m);
                if (r - *first as i128).rem_euclid(g) == 0 {
                    ResidueStatus::Infinite
                } else {
                    ResidueStatus::Empty
                }
            }
            SetDescriptor::Primes => {
                let g = r.gcd(&m);
                if g == 1 {
                    ResidueStatus::Infinite
                } else if g <= i64::MAX as i128 && is_prime(g as i64) && g % m == r {
                    // any prime p ≡ r (mod m) is divisible by g, so p = g
                    ResidueStatus::FiniteOnly(vec![g as i64])
                } else {
                    ResidueStatus::Empty
                }
            }
            SetDescriptor::Custom(_) => ResidueStatus::Unknown,
        }
    }

    /// An element of `S ∩ (r mod m)` outside `exclude`, smallest in canonical
    /// order among those findable.
    pub fn pick_in_class(&self, r: i128, m: i128, exclude: &BTreeSet<i64>) -> Result<i64> {
        self.pick_in_class_capped(r, m, exclude, DEFAULT_PRIME_SEARCH_CAP)
    }

    pub fn pick_in_class_capped(
        &self,
        r: i128,
        m: i128,
        exclude: &BTreeSet<i64>,
        prime_cap: i64,
    ) -> Result<i64> {
        let not_found = || Error::NotFound { residue: r, modulus: m };
        let r = r.rem_euclid(m);
        match self.residue_status(r, m) {
            ResidueStatus::Empty => Err(not_found()),
            ResidueStatus::FiniteOnly(members) => members
                .into_iter()
                .find(|a| !exclude.contains(a))
                .ok_or_else(not_found),
            ResidueStatus::Unknown => {
                let SetDescriptor::Custom(c) = self else {
                    unreachable!("only custom sets have unknown residues")
                };
                self.enumerate(c.cap)?
                    .into_iter()
                    .find(|&a| (a as i128).rem_euclid(m) == r && !exclude.contains(&a))
                    .ok_or_else(not_found)
            }
            ResidueStatus::Infinite => match self {
                SetDescriptor::Integers => {
                    let lowest = first_in_window(r, m, -(i64::MAX as i128), not_found)?;
                    pick_from_progression(lowest, m, exclude, not_found)
                }
                SetDescriptor::Naturals => {
                    let lowest = first_in_window(r, m, 0, not_found)?;
                    pick_from_progression(lowest, m, exclude, not_found)
                }
                SetDescriptor::Progression { first, step } => {
                    // first + step*t ≡ r (mod m)  <=>  (step/g) t ≡ (r-first)/g (mod m/g)
                    let (first, step) = (*first as i128, *step as i128);
                    let g = step.gcd(&m);
                    let modulus = m / g;
                    let rhs = (r - first).div_euclid(g).rem_euclid(modulus);
                    let inv = mod_inverse((step / g).rem_euclid(modulus), modulus)
                        .ok_or_else(not_found)?;
                    let t0 = (rhs * inv).rem_euclid(modulus);
                    let lowest = first + step * t0;
                    let lcm_step = step * modulus;
                    let lowest = i64::try_from(lowest).map_err(|_| not_found())?;
                    pick_from_one_sided(lowest, lcm_step, exclude, not_found)
                }
                SetDescriptor::Primes => {
                    let mut p = r;
                    while p <= prime_cap as i128 {
                        let candidate = p as i64;
                        if is_prime(candidate) && !exclude.contains(&candidate) {
                            return Ok(candidate);
                        }
                        p += m;
                    }
                    Err(Error::SearchExhausted { residue: r, modulus: m, cap: prime_cap })
                }
                _ => unreachable!("finite and custom sets never report infinite classes"),
            },
        }
    }
}

impl fmt::Display for SetDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

fn mod_inverse(a: i128, m: i128) -> Option<i128> {
    if m == 1 {
        return Some(0);
    }
    let e = a.extended_gcd(&m);
    (e.gcd == 1).then(|| e.x.rem_euclid(m))
}

fn first_in_window(
    r: i128,
    m: i128,
    floor: i128,
    not_found: impl Fn() -> Error,
) -> Result<i128> {
    // smallest member of r mod m that is >= floor
    let t = (floor - r).div_euclid(m) + i128::from((floor - r).rem_euclid(m) != 0);
    let v = r + m * t;
    if v > i64::MAX as i128 {
        return Err(not_found());
    }
    Ok(v)
}

/// Canonical-first member of the two-sided class containing `lowest` (step
/// `m`), or of its nonnegative part when `lowest >= 0`.
fn pick_from_progression(
    lowest: i128,
    m: i128,
    exclude: &BTreeSet<i64>,
    not_found: impl Fn() -> Error,
) -> Result<i64> {
    if lowest >= 0 {
        let start = i64::try_from(lowest).map_err(|_| not_found())?;
        return pick_from_one_sided(start, m, exclude, not_found);
    }
    // two-sided class: members r0 + m t for all t, r0 in [0, m)
    let r0 = lowest.rem_euclid(m);
    let mut pos = r0;
    let mut neg = r0 - m;
    loop {
        let (take_pos, value) = if pos <= -neg { (true, pos) } else { (false, neg) };
        let Ok(v) = i64::try_from(value) else {
            return Err(not_found());
        };
        if !exclude.contains(&v) {
            return Ok(v);
        }
        if take_pos {
            pos += m;
        } else {
            neg -= m;
        }
    }
}

fn pick_from_one_sided(
    lowest: i64,
    step: i128,
    exclude: &BTreeSet<i64>,
    not_found: impl Fn() -> Error,
) -> Result<i64> {
    // members lowest + step*t, t >= 0, taken in canonical order
    let lowest = lowest as i128;
    let mut pos = if lowest >= 0 {
        lowest
    } else {
        lowest + step * ((-lowest).div_euclid(step) + i128::from((-lowest).rem_euclid(step) != 0))
    };
    let mut neg = pos - step;
    loop {
        let neg_ok = neg >= lowest;
        let (take_pos, value) = if !neg_ok || pos <= -neg { (true, pos) } else { (false, neg) };
        let Ok(v) = i64::try_from(value) else {
            return Err(not_found());
        };
        if !exclude.contains(&v) {
            return Ok(v);
        }
        if take_pos {
            pos += step;
        } else {
            neg -= step;
        }
    }
}
