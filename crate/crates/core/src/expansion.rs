//! The cyclotomic expansion `W = prod (1 - X^n Y^m)^{c_{n,m}}` up to a
//! `Y`-degree bound, strip pairs, and arithmetic progressions of nonzero
//! exponents along lines of slope `beta`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::poly::Monomial;
use crate::series::TruncatedSeries;
use crate::slope::Slope;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExpansionError {
    #[error("series does not start with constant term 1")]
    NotNormalized,
    #[error("exponent at ({n},{m}) lies beyond the slope bound of the input")]
    BoundOverflow { n: u32, m: u32 },
    #[error("no line of slope beta has three slots below Y^{bound}")]
    TruncationInsufficient { bound: u32 },
}

/// Order in which monomials are eliminated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PeelOrder {
    /// `m` ascending, then `n` ascending.
    Graded,
    /// `n` ascending, then `m` ascending.
    XMajor,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycloExpansion {
    /// Nonzero exponents `c_{n,m}` for `m <= bound`.
    pub c: BTreeMap<Monomial, BigInt>,
    pub bound: u32,
}

impl CycloExpansion {
    pub fn get(&self, n: u32, m: u32) -> BigInt {
        self.c.get(&Monomial::new(n, m)).cloned().unwrap_or_default()
    }

    /// `prod (1 - X^n Y^m)^{c_{n,m}}` modulo `Y^{bound+1}`.
    pub fn reconstruct(&self) -> TruncatedSeries {
        let mut s = TruncatedSeries::one(self.bound);
        for (mono, c) in &self.c {
            s.mul_binomial_power_in_place(mono.n, mono.m, c);
        }
        s
    }

    /// Keys with `m <= bound`.
    pub fn restrict(&self, bound: u32) -> CycloExpansion {
        CycloExpansion {
            c: self.c.iter().filter(|(k, _)| k.m <= bound).map(|(k, v)| (*k, v.clone())).collect(),
            bound: bound.min(self.bound),
        }
    }
}

/// Peel in graded order.
pub fn peel(s: &TruncatedSeries) -> Result<CycloExpansion, ExpansionError> {
    peel_with_order(s, PeelOrder::Graded)
}

/// Eliminate monomials one at a time: a residual coefficient `a` at
/// `(n, m)` records `c_{n,m} = -a` and multiplies the residual by
/// `(1 - X^n Y^m)^a`.
pub fn peel_with_order(s: &TruncatedSeries, order: PeelOrder) -> Result<CycloExpansion, ExpansionError> {
    if s.row(0).len() != 1 || !s.row(0)[0].is_one() {
        return Err(ExpansionError::NotNormalized);
    }
    let bound = s.bound();
    let slope_max = s.terms().filter_map(|(mono, _)| mono.slope()).max().unwrap_or(Slope::integer(0));
    let width = |m: u32| (m as u64 * slope_max.num() / slope_max.den()) as u32;
    let mut residual = s.clone();
    let mut c = BTreeMap::new();
    let mut visit = |n: u32, m: u32, residual: &mut TruncatedSeries| {
        let a = residual.coeff(n, m);
        if !a.is_zero() {
            residual.mul_binomial_power_in_place(n, m, &a);
            c.insert(Monomial::new(n, m), -a);
        }
    };
    match order {
        PeelOrder::Graded => {
            for m in 1..=bound {
                for n in 0..=width(m) {
                    visit(n, m, &mut residual);
                }
            }
        }
        PeelOrder::XMajor => {
            for n in 0..=width(bound) {
                for m in 1..=bound {
                    visit(n, m, &mut residual);
                }
            }
        }
    }
    if let Some((mono, _)) = residual.terms().find(|(mono, _)| mono.m >= 1) {
        return Err(ExpansionError::BoundOverflow { n: mono.n, m: mono.m });
    }
    Ok(CycloExpansion { c, bound })
}

/// Keys with `c_{n,m} != 0` and `n/m < beta < (n+1)/m`.
pub fn strip_pairs(e: &CycloExpansion, beta: Slope) -> Vec<Monomial> {
    e.c.keys().copied().filter(|k| is_strip_pair(*k, beta)).collect()
}

pub fn is_strip_pair(k: Monomial, beta: Slope) -> bool {
    use core::cmp::Ordering::{Greater, Less};
    k.m >= 1 && beta.cmp_ratio(k.n as u64, k.m as u64) == Less && beta.cmp_ratio(k.n as u64 + 1, k.m as u64) == Greater
}

/// Arithmetic progression of nonzero exponents on one line
/// `l*n - k*m = offset`, ending within one period of the truncation frontier.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Progression {
    pub offset: i64,
    /// Step between hits, in units of the primitive direction `(k, l)`.
    pub period: u32,
    /// Consecutive nonzero slots counted back from the frontier.
    pub hits: u32,
    pub first: Monomial,
    pub last: Monomial,
    /// Keys with `l*n - k*m > offset`.
    pub keys_right: usize,
}

impl Progression {
    /// Step vector `period * (k, l)`.
    pub fn step(&self, direction: (u32, u32)) -> (u32, u32) {
        (self.period * direction.0, self.period * direction.1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RayReport {
    pub direction: (u32, u32),
    /// Offsets of every line carrying a key, with its key count.
    pub lines: Vec<(i64, usize)>,
    pub progressions: Vec<Progression>,
}

impl RayReport {
    /// Progressions on lines strictly between `n/m = beta` and `(n+1)/m = beta`.
    pub fn strip_progressions(&self) -> impl Iterator<Item = &Progression> {
        let l = self.direction.1 as i64;
        self.progressions.iter().filter(move |p| -l < p.offset && p.offset < 0)
    }
}

/// Lattice points `(n, m)` with `1 <= m <= bound`, `n >= 0` on `l*n - k*m = offset`.
fn line_slots(offset: i64, k: u32, l: u32, bound: u32) -> Vec<Monomial> {
    (1..=bound)
        .filter_map(|m| {
            let num = offset + k as i64 * m as i64;
            (num >= 0 && num % l as i64 == 0).then(|| Monomial::new((num / l as i64) as u32, m))
        })
        .collect()
}

/// Group keys by lines parallel to `(k, l)` and find progressions that
/// reach the frontier with at least three consecutive hits.
pub fn detect_progressions(e: &CycloExpansion, beta: Slope) -> Result<RayReport, ExpansionError> {
    let (k, l) = (beta.num() as u32, beta.den() as u32);
    let offset_of = |mono: &Monomial| l as i64 * mono.n as i64 - k as i64 * mono.m as i64;
    let mut lines: BTreeMap<i64, usize> = BTreeMap::new();
    for key in e.c.keys() {
        *lines.entry(offset_of(key)).or_insert(0) += 1;
    }
    for offset in 1 - l as i64..0 {
        lines.entry(offset).or_insert(0);
    }
    let mut progressions = Vec::new();
    let mut resolvable = false;
    for &offset in lines.keys() {
        let slots = line_slots(offset, k, l, e.bound);
        if slots.len() >= 3 {
            resolvable = true;
        }
        let hit: Vec<bool> = slots.iter().map(|s| e.c.contains_key(s)).collect();
        if let Some((period, hits, first, last)) = best_progression(&hit) {
            progressions.push(Progression {
                offset,
                period,
                hits,
                first: slots[first],
                last: slots[last],
                keys_right: e.c.keys().filter(|key| offset_of(key) > offset).count(),
            });
        }
    }
    if !resolvable {
        return Err(ExpansionError::TruncationInsufficient { bound: e.bound });
    }
    Ok(RayReport { direction: (k, l), lines: lines.into_iter().filter(|(_, n)| *n > 0).collect(), progressions })
}

/// Smallest period `d` (then most hits) such that the last slot of some
/// residue class mod `d` starts a backward run of at least three hits.
fn best_progression(hit: &[bool]) -> Option<(u32, u32, usize, usize)> {
    let n = hit.len();
    for d in 1..=n / 3 {
        let mut best: Option<(u32, usize, usize)> = None;
        for last in n.saturating_sub(d)..n {
            let mut count = 0u32;
            let mut j = last as isize;
            while j >= 0 && hit[j as usize] {
                count += 1;
                j -= d as isize;
            }
            if count >= 3 && best.is_none_or(|(c, _, _)| count > c) {
                let first = last - (count as usize - 1) * d;
                best = Some((count, first, last));
            }
        }
        if let Some((count, first, last)) = best {
            return Some((d as u32, count, first, last));
        }
    }
    None
}

/// Three-valued evidence for infinitely many strip pairs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StripVerdict {
    ProvenFinite,
    ExtrapolatedInfinite,
    Inconclusive,
}

impl StripVerdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            StripVerdict::ProvenFinite => "proven-finite",
            StripVerdict::ExtrapolatedInfinite => "extrapolated-infinite",
            StripVerdict::Inconclusive => "inconclusive",
        }
    }
}

/// Integral `beta` leaves no integer strictly between `beta*m - 1` and
/// `beta*m`; a cyclotomic `W` has a finite expansion. Otherwise a strip
/// line with a frontier progression counts as extrapolated-infinite.
pub fn strip_verdict(report: Option<&RayReport>, beta: Slope, w_cyclotomic: bool) -> StripVerdict {
    if beta.is_integer() || w_cyclotomic {
        return StripVerdict::ProvenFinite;
    }
    match report {
        Some(r) if r.strip_progressions().next().is_some() => StripVerdict::ExtrapolatedInfinite,
        _ => StripVerdict::Inconclusive,
    }
}
