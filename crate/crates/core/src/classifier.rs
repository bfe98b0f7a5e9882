//! The five-case decision for `D(s) = prod_p W(p, p^{-s})`, with an evidence
//! ledger and the resulting obstructing set.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::cyclo::{is_cyclotomic_bivariate, is_cyclotomic_univariate, CycloFactorization};
use crate::expansion::{detect_progressions, peel, strip_pairs, strip_verdict, CycloExpansion, ExpansionError, RayReport, StripVerdict};
use crate::geometry::{compute_alpha_beta, ghost, Abscissae, GeometryError, GhostRay};
use crate::local_zeros::{common_zero_primes, scan_primes, CommonZeroReport, LocalZeroError, ScanSummary, ScanVerdict};
use crate::poly::{BivariateRational, Monomial};
use crate::series::{SeriesError, TruncatedSeries};
use crate::slope::Slope;

/// Largest truncation the classifier escalates to on its own.
pub const MAX_YDEG: u32 = 192;

#[derive(Clone, Debug, PartialEq)]
pub struct ClassifierConfig {
    pub ydeg_bound: u32,
    pub prime_bound: u64,
    pub margin_tol: f64,
    pub density_threshold: f64,
}

impl Default for ClassifierConfig {
    fn default() -> Self {
        ClassifierConfig { ydeg_bound: 24, prime_bound: 10_000, margin_tol: 1e-6, density_threshold: 0.1 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("truncation bound {0} is below the minimum of 4")]
    BoundTooSmall(u32),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Expansion(#[from] ExpansionError),
    #[error(transparent)]
    Scan(#[from] LocalZeroError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Obstructing {
    /// No obstructing point on `Re s = beta`.
    None,
    SinglePoint(Slope),
    WholeLine(Slope),
}

impl Obstructing {
    pub fn as_str(&self) -> &'static str {
        match self {
            Obstructing::None => "none",
            Obstructing::SinglePoint(_) => "single-point",
            Obstructing::WholeLine(_) => "whole-line",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Holds,
    Fails,
    Unknown,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Holds => "holds",
            Status::Fails => "fails",
            Status::Unknown => "unknown",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Evidence {
    pub predicate: &'static str,
    pub status: Status,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CaseReport {
    pub w: BivariateRational,
    /// `None` when the evidence does not single out one case.
    pub case_id: Option<u8>,
    /// Cases still compatible with the evidence when `case_id` is unset.
    pub candidates: Vec<u8>,
    pub alpha: Slope,
    pub beta: Slope,
    pub cancellation_possible: bool,
    pub ghost: GhostRay,
    /// `None` if the ray series could not be identified as rational.
    pub ghost_cyclotomic: Option<bool>,
    pub cyclo: CycloFactorization,
    pub expansion: CycloExpansion,
    pub strip_pairs: Vec<Monomial>,
    pub ray_report: Option<RayReport>,
    pub strip_verdict: StripVerdict,
    pub scan: ScanSummary,
    pub scan_verdict: ScanVerdict,
    pub common_zeros: CommonZeroReport,
    pub obstructing: Option<Obstructing>,
    pub evidence: Vec<Evidence>,
    pub warnings: Vec<String>,
    /// `(M, prime_bound)` actually used.
    pub truncation: (u32, u64),
}

impl CaseReport {
    pub fn w_cyclotomic(&self) -> bool {
        self.cyclo.is_cyclotomic
    }

    pub fn is_decided(&self) -> bool {
        self.case_id.is_some()
    }
}

/// Expand at the smallest admissible truncation, doubling while the
/// abscissae have not stabilized, then widen to `8 * den(beta)`.
pub fn expand_stable(w: &BivariateRational, start: u32) -> Result<(TruncatedSeries, Abscissae), ClassifyError> {
    let mut bound = start;
    loop {
        let s = TruncatedSeries::expand(w, bound)?;
        match compute_alpha_beta(&s, w) {
            Ok(ab) => {
                let wanted = (8 * ab.beta.den() as u32).min(MAX_YDEG);
                if wanted <= bound {
                    return Ok((s, ab));
                }
                let s = TruncatedSeries::expand(w, wanted)?;
                let ab = compute_alpha_beta(&s, w)?;
                return Ok((s, ab));
            }
            Err(GeometryError::TruncationInsufficient { .. }) if bound < MAX_YDEG => {
                bound = (bound * 2).min(MAX_YDEG);
            }
            Err(e) => return Err(e.into()),
        }
    }
}

/// Classify with the sequential prime scan.
pub fn classify(w: &BivariateRational, config: &ClassifierConfig) -> Result<CaseReport, ClassifyError> {
    classify_with_scan(w, config, |w, beta| scan_primes(w, beta, config.prime_bound, config.margin_tol))
}

/// Classify, delegating the prime scan to `scan` (e.g. a parallel one).
pub fn classify_with_scan<F>(w: &BivariateRational, config: &ClassifierConfig, scan: F) -> Result<CaseReport, ClassifyError>
where
    F: FnOnce(&BivariateRational, Slope) -> Result<ScanSummary, LocalZeroError>,
{
    if config.ydeg_bound < 4 {
        return Err(ClassifyError::BoundTooSmall(config.ydeg_bound));
    }
    if w.is_one() {
        return Err(GeometryError::DegenerateInput.into());
    }
    let start = config.ydeg_bound.max(2 * w.ydeg());
    let (series, ab) = expand_stable(w, start)?;
    let (alpha, beta) = (ab.alpha, ab.beta);
    let bound = series.bound();
    let mut warnings = Vec::new();
    if bound > config.ydeg_bound {
        warnings.push(format!("truncation raised from Y^{} to Y^{}", config.ydeg_bound, bound));
    }

    let cyclo = is_cyclotomic_bivariate(w);
    let ghost = ghost(&series, beta)?;
    let ghost_cyclotomic = ghost.reconstructed.then(|| is_cyclotomic_univariate(&ghost.num, &ghost.den).is_cyclotomic);
    if !ghost.reconstructed {
        warnings.push(format!("ray series along {beta} not identified from {} terms", ghost.terms.len()));
    }
    let expansion = peel(&series)?;
    let pairs = strip_pairs(&expansion, beta);
    let ray_report = match detect_progressions(&expansion, beta) {
        Ok(r) => Some(r),
        Err(ExpansionError::TruncationInsufficient { bound }) => {
            warnings.push(format!("strip lines too short at Y^{bound} for progression detection"));
            None
        }
        Err(e) => return Err(e.into()),
    };
    let strip = strip_verdict(ray_report.as_ref(), beta, cyclo.is_cyclotomic);
    let scan = scan(w, beta)?;
    let scan_verdict = scan.verdict(config.density_threshold);
    let common_zeros = common_zero_primes(w);
    if !common_zeros.verified.is_empty() {
        warnings.push(format!("P and Q share local zeros at p in {:?}", common_zeros.verified));
    }

    let (case_id, candidates) = decide(cyclo.is_cyclotomic, ghost_cyclotomic, strip, scan_verdict);
    let obstructing = case_id.map(|c| obstructing_for(c, beta));

    let evidence = vec![
        Evidence {
            predicate: "w-cyclotomic",
            status: if cyclo.is_cyclotomic { Status::Holds } else { Status::Fails },
            detail: format!("{} binomial factors identified", cyclo.factors.len()),
        },
        Evidence {
            predicate: "ghost-not-cyclotomic",
            status: match ghost_cyclotomic {
                Some(true) => Status::Fails,
                Some(false) => Status::Holds,
                None => Status::Unknown,
            },
            detail: if ghost.reconstructed {
                format!("ray ({}, {}) series ({}) / ({})", ghost.direction.0, ghost.direction.1, ghost.num, ghost.den)
            } else {
                String::from("ray series not reconstructed")
            },
        },
        Evidence {
            predicate: "strip-infinite",
            status: match strip {
                StripVerdict::ExtrapolatedInfinite => Status::Holds,
                StripVerdict::ProvenFinite => Status::Fails,
                StripVerdict::Inconclusive => Status::Unknown,
            },
            detail: format!("{}; {} strip pairs up to Y^{bound}", strip.as_str(), pairs.len()),
        },
        Evidence {
            predicate: "local-zeros-right-of-beta",
            status: match scan_verdict {
                ScanVerdict::Present => Status::Holds,
                ScanVerdict::Absent => Status::Fails,
                ScanVerdict::Ambiguous => Status::Unknown,
            },
            detail: format!(
                "density {:.4} over {} primes up to {}",
                scan.density, scan.count_scanned, scan.prime_bound
            ),
        },
    ];

    Ok(CaseReport {
        w: w.clone(),
        case_id,
        candidates,
        alpha,
        beta,
        cancellation_possible: ab.cancellation_possible,
        ghost,
        ghost_cyclotomic,
        cyclo,
        expansion,
        strip_pairs: pairs,
        ray_report,
        strip_verdict: strip,
        scan,
        scan_verdict,
        common_zeros,
        obstructing,
        evidence,
        warnings,
        truncation: (bound, config.prime_bound),
    })
}

/// Predicates in order; anything not pinned down returns the remaining candidates.
fn decide(w_cyclo: bool, ghost_cyclo: Option<bool>, strip: StripVerdict, scan: ScanVerdict) -> (Option<u8>, Vec<u8>) {
    if w_cyclo {
        return (Some(1), vec![1]);
    }
    match ghost_cyclo {
        Some(false) => return (Some(2), vec![2]),
        None => return (None, vec![2, 3, 4, 5]),
        Some(true) => {}
    }
    match (strip, scan) {
        (StripVerdict::ExtrapolatedInfinite, _) => (Some(3), vec![3]),
        (StripVerdict::ProvenFinite, ScanVerdict::Present) => (Some(4), vec![4]),
        (StripVerdict::ProvenFinite, ScanVerdict::Absent) => (Some(5), vec![5]),
        (StripVerdict::ProvenFinite, ScanVerdict::Ambiguous) => (None, vec![4, 5]),
        (StripVerdict::Inconclusive, ScanVerdict::Present) => (None, vec![3, 4]),
        (StripVerdict::Inconclusive, ScanVerdict::Absent) => (None, vec![3, 5]),
        (StripVerdict::Inconclusive, ScanVerdict::Ambiguous) => (None, vec![3, 4, 5]),
    }
}

fn obstructing_for(case: u8, beta: Slope) -> Obstructing {
    match case {
        2 | 4 => Obstructing::WholeLine(beta),
        3 => Obstructing::SinglePoint(beta),
        _ => Obstructing::None,
    }
}

/// Human-readable summary of the obstructing set and continuation domain.
#[derive(Clone, Debug, PartialEq)]
pub struct ObstructingDescription {
    pub kind: &'static str,
    pub continuation: String,
    pub text: String,
}

impl fmt::Display for ObstructingDescription {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

pub fn obstructing_description(r: &CaseReport) -> ObstructingDescription {
    let beta = r.beta;
    let continuation = format!("meromorphic in Re s > {beta}");
    let (kind, text) = match (r.case_id, r.obstructing) {
        (Some(1), _) => ("none", String::from("entire plane, finite ζ-product")),
        (Some(5), _) => (
            "none",
            format!("no point of Re s = {beta} is obstructing; continuation beyond the line is not established"),
        ),
        (Some(3), _) => (
            "single-point",
            format!("{beta} is the only obstructing point on Re s = {beta}; continuation beyond depends on the zeros of ζ"),
        ),
        (Some(_), _) => ("whole-line", format!("every point of Re s = {beta} obstructing")),
        (None, _) => {
            let gaps: Vec<&str> = r.evidence.iter().filter(|e| e.status == Status::Unknown).map(|e| e.predicate).collect();
            ("undecided", format!("candidate cases {:?}; unresolved predicates {:?}", r.candidates, gaps))
        }
    };
    ObstructingDescription { kind, continuation, text }
}
