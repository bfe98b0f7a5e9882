//! Zeros of the local factors `W(p, p^{-s})`, prime-range scans, and the
//! finite set of primes where numerator and denominator share a zero.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::poly::{BivariateRational, PolyError};
use crate::primes::primes_in_range;
use crate::roots::{find_roots, is_converged, RootError, TOLERANCE};
use crate::slope::Slope;
use crate::upoly::{to_f64, UPoly};

pub const DEFAULT_MARGIN_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LocalZeroError {
    #[error("root finding diverged at p = {p}")]
    RootFindingDiverged { p: u64 },
    #[error("every root of P({p}, y) is shared with Q({p}, y)")]
    AllRootsCancelled { p: u64 },
    #[error("{skipped} of {scanned} primes failed root finding (limit 1%)")]
    TooManySkipped { skipped: usize, scanned: usize },
    #[error("prime bound {0} is below the minimum of 100")]
    BoundTooSmall(u64),
}

/// Roots of `P(p, y)` after exact cancellation of any common factor with
/// `Q(p, y)`, with the real parts `Re s = -ln|y| / ln p` they induce.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalZeroRecord {
    pub p: u64,
    /// Roots with multiplicity, sorted by `(|y|, arg y)`.
    pub roots: Vec<(Complex64, usize)>,
    pub re_s: Vec<f64>,
    pub max_re_s: Option<f64>,
    /// `max_re_s - beta`.
    pub margin: Option<f64>,
}

/// `P(p, y) / gcd(P(p, y), Q(p, y))` and whether the gcd was nontrivial.
fn reduced_numerator(w: &BivariateRational, p: u64) -> (UPoly, bool) {
    let x = BigInt::from(p);
    let pp = w.num().eval_x(&x);
    let qp = w.den().eval_x(&x);
    let g = pp.gcd(&qp);
    if g.degree().unwrap_or(0) == 0 {
        (pp, false)
    } else {
        (pp.div_exact(&g).expect("gcd divides"), true)
    }
}

fn float_coeffs(p: &UPoly) -> Vec<f64> {
    p.coeffs().iter().map(to_f64).collect()
}

/// Roots of an exact integer polynomial with multiplicities, via its
/// square-free decomposition.
pub fn roots_with_multiplicity(f: &UPoly) -> Result<Vec<(Complex64, usize)>, RootError> {
    let mut out = Vec::new();
    for (part, mult) in f.squarefree_decomposition() {
        let coeffs = float_coeffs(&part);
        let roots = find_roots(&coeffs)?;
        if !roots.iter().all(|z| is_converged(&coeffs, *z, TOLERANCE * 1e3)) {
            return Err(RootError::Diverged(crate::roots::MAX_ITERATIONS));
        }
        out.extend(roots.into_iter().map(|z| (z, mult)));
    }
    out.sort_by(|a, b| a.0.norm().total_cmp(&b.0.norm()).then(a.0.arg().total_cmp(&b.0.arg())));
    Ok(out)
}

/// Local zeros at one prime.
pub fn local_roots(w: &BivariateRational, p: u64, beta: Slope) -> Result<LocalZeroRecord, LocalZeroError> {
    let (num, cancelled) = reduced_numerator(w, p);
    if num.degree().unwrap_or(0) == 0 {
        if cancelled {
            return Err(LocalZeroError::AllRootsCancelled { p });
        }
        return Ok(LocalZeroRecord { p, roots: Vec::new(), re_s: Vec::new(), max_re_s: None, margin: None });
    }
    let roots = roots_with_multiplicity(&num).map_err(|_| LocalZeroError::RootFindingDiverged { p })?;
    let ln_p = libm::log(p as f64);
    let re_s: Vec<f64> = roots.iter().map(|(y, _)| -libm::log(y.norm()) / ln_p).collect();
    let max_re_s = re_s.iter().copied().reduce(f64::max);
    let margin = max_re_s.map(|m| m - beta.to_f64());
    Ok(LocalZeroRecord { p, roots, re_s, max_re_s, margin })
}

/// Poles at one prime: roots of `Q(p, y)` after cancellation against `P(p, y)`.
pub fn local_poles(w: &BivariateRational, p: u64, beta: Slope) -> Result<LocalZeroRecord, LocalZeroError> {
    local_roots(&w.inverse(), p, beta)
}

/// Counts for primes in `[2^k, 2^{k+1})`.
#[derive(Clone, Debug, PartialEq)]
pub struct DyadicBlock {
    pub k: u32,
    pub scanned: usize,
    pub positive: usize,
    pub max_margin: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScanSummary {
    pub prime_bound: u64,
    pub margin_tol: f64,
    pub count_scanned: usize,
    pub count_positive: usize,
    pub density: f64,
    pub trend: Vec<DyadicBlock>,
    pub skipped: Vec<u64>,
    pub max_margin: Option<f64>,
    /// Primes with a zero right of `beta` (margin above tolerance).
    pub exceptional: Vec<u64>,
}

/// Partial scan over a sub-range; merging is order-independent.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ScanPartial {
    blocks: BTreeMap<u32, (usize, usize, Option<f64>)>,
    skipped: Vec<u64>,
    exceptional: Vec<u64>,
}

fn fmax(a: Option<f64>, b: Option<f64>) -> Option<f64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.max(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

impl ScanPartial {
    pub fn merge(mut self, other: ScanPartial) -> ScanPartial {
        for (k, (s, pos, mx)) in other.blocks {
            let e = self.blocks.entry(k).or_insert((0, 0, None));
            e.0 += s;
            e.1 += pos;
            e.2 = fmax(e.2, mx);
        }
        self.skipped.extend(other.skipped);
        self.exceptional.extend(other.exceptional);
        self
    }

    pub fn finish(mut self, prime_bound: u64, margin_tol: f64) -> Result<ScanSummary, LocalZeroError> {
        self.skipped.sort_unstable();
        self.exceptional.sort_unstable();
        let scanned: usize = self.blocks.values().map(|b| b.0).sum::<usize>() + self.skipped.len();
        let positive: usize = self.blocks.values().map(|b| b.1).sum();
        if self.skipped.len() * 100 >= scanned.max(1) && !self.skipped.is_empty() {
            return Err(LocalZeroError::TooManySkipped { skipped: self.skipped.len(), scanned });
        }
        let trend: Vec<DyadicBlock> = self
            .blocks
            .into_iter()
            .map(|(k, (scanned, positive, max_margin))| DyadicBlock { k, scanned, positive, max_margin })
            .collect();
        let max_margin = trend.iter().fold(None, |acc, b| fmax(acc, b.max_margin));
        Ok(ScanSummary {
            prime_bound,
            margin_tol,
            count_scanned: scanned,
            count_positive: positive,
            density: if scanned == 0 { 0.0 } else { positive as f64 / scanned as f64 },
            trend,
            skipped: self.skipped,
            max_margin,
            exceptional: self.exceptional,
        })
    }
}

/// Scan the primes in `[lo, hi)`.
pub fn scan_range(w: &BivariateRational, beta: Slope, lo: u64, hi: u64, margin_tol: f64) -> ScanPartial {
    let mut part = ScanPartial::default();
    for p in primes_in_range(lo, hi) {
        let k = 63 - p.leading_zeros();
        match local_roots(w, p, beta) {
            Ok(rec) => {
                let positive = rec.margin.is_some_and(|m| m > margin_tol);
                let e = part.blocks.entry(k).or_insert((0, 0, None));
                e.0 += 1;
                e.1 += positive as usize;
                e.2 = fmax(e.2, rec.margin);
                if positive {
                    part.exceptional.push(p);
                }
            }
            Err(_) => part.skipped.push(p),
        }
    }
    part
}

/// Scan all primes up to `bound`.
pub fn scan_primes(w: &BivariateRational, beta: Slope, bound: u64, margin_tol: f64) -> Result<ScanSummary, LocalZeroError> {
    if bound < 100 {
        return Err(LocalZeroError::BoundTooSmall(bound));
    }
    scan_range(w, beta, 2, bound + 1, margin_tol).finish(bound, margin_tol)
}

/// Three-valued reading of a scan.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ScanVerdict {
    /// Density above threshold and positive margins in the top dyadic block.
    Present,
    /// No positive margin in the top block and density below threshold.
    Absent,
    Ambiguous,
}

impl ScanVerdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            ScanVerdict::Present => "present",
            ScanVerdict::Absent => "absent",
            ScanVerdict::Ambiguous => "ambiguous",
        }
    }
}

impl ScanSummary {
    pub fn top_block(&self) -> Option<&DyadicBlock> {
        self.trend.iter().rev().find(|b| b.scanned > 0)
    }

    pub fn verdict(&self, density_threshold: f64) -> ScanVerdict {
        let top_positive = self.top_block().is_some_and(|b| b.positive > 0);
        if self.density > density_threshold && top_positive {
            ScanVerdict::Present
        } else if !top_positive && self.density < density_threshold {
            ScanVerdict::Absent
        } else {
            ScanVerdict::Ambiguous
        }
    }
}

/// Candidate and verified primes where `P(p, .)` and `Q(p, .)` share a root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommonZeroReport {
    /// `Res_Y(P, Q)` as a polynomial in `X` (absent when `P` or `Q` is constant in `Y`).
    pub resultant: Option<UPoly>,
    pub candidates: Vec<u64>,
    pub verified: Vec<u64>,
}

/// Largest candidate examined when factoring a resultant value.
const CANDIDATE_CAP: u64 = 1_000_000;

/// Primes `p` where `P(p, .)` and `Q(p, .)` have a common complex root.
/// Such `p` are integer roots of `Res_Y(P, Q)`, hence divisors of its
/// lowest nonzero coefficient; each candidate is verified by an exact gcd.
pub fn common_zero_primes(w: &BivariateRational) -> CommonZeroReport {
    let res = match w.num().resultant_in_y(w.den()) {
        Ok(r) => r,
        Err(PolyError::ConstantInY) => {
            return CommonZeroReport { resultant: None, candidates: Vec::new(), verified: Vec::new() };
        }
        Err(PolyError::ZeroResultant) => unreachable!("normalized W has coprime parts"),
    };
    let low = res.coeffs().iter().position(|c| !c.is_zero()).expect("nonzero resultant");
    let trailing = res.coeffs()[low].abs();
    let cap = cauchy_bound(&res, low).min(CANDIDATE_CAP);
    let candidates: Vec<u64> = if res.is_constant() {
        primes_in_range(2, cap.max(2) + 1).into_iter().filter(|&p| trailing.is_multiple_of(&BigInt::from(p))).collect()
    } else {
        primes_in_range(2, cap + 1)
            .into_iter()
            .filter(|&p| trailing.is_multiple_of(&BigInt::from(p)) && res.eval(&BigInt::from(p)).is_zero())
            .collect()
    };
    let verified = candidates
        .iter()
        .copied()
        .filter(|&p| {
            let x = BigInt::from(p);
            w.num().eval_x(&x).gcd(&w.den().eval_x(&x)).degree().unwrap_or(0) > 0
        })
        .collect();
    CommonZeroReport { resultant: Some(res), candidates, verified }
}

/// `1 + max |c_i / c_d|` for the polynomial with its `X^low` factor removed;
/// for a constant, its absolute value.
fn cauchy_bound(res: &UPoly, low: usize) -> u64 {
    let coeffs = &res.coeffs()[low..];
    let lead = coeffs.last().expect("nonzero").abs();
    if coeffs.len() == 1 {
        return lead.to_u64().unwrap_or(u64::MAX);
    }
    let max = coeffs[..coeffs.len() - 1].iter().map(|c| c.abs()).max().unwrap_or_default();
    (max.div_ceil(&lead) + 1u32).to_u64().unwrap_or(u64::MAX)
}
