//! JSON and CSV renderings of reports.

use std::io::Write;

use euler_horizon_core::analytic::SingularityAtlas;
use euler_horizon_core::classifier::{obstructing_description, CaseReport, Obstructing};
use euler_horizon_core::expansion::CycloExpansion;
use euler_horizon_core::local_zeros::{LocalZeroRecord, ScanSummary};
use euler_horizon_core::Slope;
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::Value;

/// Path of the published schema, relative to the crate root.
pub const SCHEMA_PATH: &str = "schema/report.schema.json";

#[derive(Serialize)]
pub struct Fraction {
    pub num: u64,
    pub den: u64,
}

impl From<Slope> for Fraction {
    fn from(s: Slope) -> Self {
        Fraction { num: s.num(), den: s.den() }
    }
}

#[derive(Serialize)]
pub struct Normalized {
    pub num: String,
    pub den: String,
}

#[derive(Serialize)]
pub struct Ghost {
    pub direction: [u32; 2],
    pub ray_num: String,
    pub ray_den: String,
    pub reconstructed: bool,
    pub cyclotomic: Option<bool>,
}

#[derive(Serialize)]
pub struct Factor {
    pub n: u32,
    pub m: u32,
    pub exponent: Value,
}

#[derive(Serialize)]
pub struct WCyclotomic {
    pub flag: bool,
    pub factors: Vec<Factor>,
}

#[derive(Serialize)]
pub struct Expansion {
    pub truncation: u32,
    pub c: Vec<Factor>,
}

#[derive(Serialize)]
pub struct ProgressionOut {
    pub offset: i64,
    pub period: u32,
    pub hits: u32,
    pub first: [u32; 2],
    pub last: [u32; 2],
    pub step: [u32; 2],
}

#[derive(Serialize)]
pub struct Strip {
    pub verdict: &'static str,
    pub pairs: Vec<[u32; 2]>,
    pub progressions: Vec<ProgressionOut>,
}

#[derive(Serialize)]
pub struct Block {
    pub k: u32,
    pub scanned: usize,
    pub positive: usize,
    pub max_margin: Option<f64>,
}

#[derive(Serialize)]
pub struct Scan {
    pub bound: u64,
    pub margin_tol: f64,
    pub scanned: usize,
    pub positive: usize,
    pub density: f64,
    pub verdict: &'static str,
    pub max_margin: Option<f64>,
    pub skipped: Vec<u64>,
    pub trend: Vec<Block>,
}

#[derive(Serialize)]
pub struct CommonZeros {
    pub resultant: Option<String>,
    pub candidates: Vec<u64>,
    pub verified: Vec<u64>,
}

#[derive(Serialize)]
pub struct ObstructingOut {
    pub kind: &'static str,
    pub point: Option<Fraction>,
    pub description: String,
    pub continuation: String,
}

#[derive(Serialize)]
pub struct EvidenceOut {
    pub predicate: &'static str,
    pub status: &'static str,
    pub detail: String,
}

#[derive(Serialize)]
pub struct Report {
    pub expr: String,
    pub normalized: Normalized,
    pub alpha: Fraction,
    pub beta: Fraction,
    pub ghost: Ghost,
    pub w_cyclotomic: WCyclotomic,
    pub expansion: Expansion,
    pub strip: Strip,
    pub scan: Scan,
    pub common_zero_primes: CommonZeros,
    pub case: Option<u8>,
    pub candidates: Vec<u8>,
    pub obstructing: ObstructingOut,
    pub evidence: Vec<EvidenceOut>,
    pub warnings: Vec<String>,
}

/// Integers that fit in `i64` as numbers, larger ones as decimal strings.
fn integer(c: &BigInt) -> Value {
    match c.to_i64() {
        Some(v) => Value::from(v),
        None => Value::from(c.to_string()),
    }
}

fn scan_out(scan: &ScanSummary, verdict: &'static str) -> Scan {
    Scan {
        bound: scan.prime_bound,
        margin_tol: scan.margin_tol,
        scanned: scan.count_scanned,
        positive: scan.count_positive,
        density: scan.density,
        verdict,
        max_margin: scan.max_margin,
        skipped: scan.skipped.clone(),
        trend: scan
            .trend
            .iter()
            .map(|b| Block { k: b.k, scanned: b.scanned, positive: b.positive, max_margin: b.max_margin })
            .collect(),
    }
}

pub fn expansion_factors(e: &CycloExpansion) -> Vec<Factor> {
    e.c.iter().map(|(k, c)| Factor { n: k.n, m: k.m, exponent: integer(c) }).collect()
}

impl Report {
    pub fn new(expr: &str, r: &CaseReport) -> Report {
        let description = obstructing_description(r);
        let point = match r.obstructing {
            Some(Obstructing::SinglePoint(b)) | Some(Obstructing::WholeLine(b)) => Some(b.into()),
            _ => None,
        };
        let direction = r.ray_report.as_ref().map_or(r.ghost.direction, |rr| rr.direction);
        Report {
            expr: expr.to_string(),
            normalized: Normalized { num: r.w.num().to_string(), den: r.w.den().to_string() },
            alpha: r.alpha.into(),
            beta: r.beta.into(),
            ghost: Ghost {
                direction: [r.ghost.direction.0, r.ghost.direction.1],
                ray_num: r.ghost.num.to_string(),
                ray_den: r.ghost.den.to_string(),
                reconstructed: r.ghost.reconstructed,
                cyclotomic: r.ghost_cyclotomic,
            },
            w_cyclotomic: WCyclotomic {
                flag: r.cyclo.is_cyclotomic,
                factors: r.cyclo.factors.iter().map(|(k, e)| Factor { n: k.n, m: k.m, exponent: Value::from(*e) }).collect(),
            },
            expansion: Expansion { truncation: r.expansion.bound, c: expansion_factors(&r.expansion) },
            strip: Strip {
                verdict: r.strip_verdict.as_str(),
                pairs: r.strip_pairs.iter().map(|k| [k.n, k.m]).collect(),
                progressions: r
                    .ray_report
                    .iter()
                    .flat_map(|rr| rr.strip_progressions())
                    .map(|p| {
                        let step = p.step(direction);
                        ProgressionOut {
                            offset: p.offset,
                            period: p.period,
                            hits: p.hits,
                            first: [p.first.n, p.first.m],
                            last: [p.last.n, p.last.m],
                            step: [step.0, step.1],
                        }
                    })
                    .collect(),
            },
            scan: scan_out(&r.scan, r.scan_verdict.as_str()),
            common_zero_primes: CommonZeros {
                resultant: r.common_zeros.resultant.as_ref().map(|p| p.to_string()),
                candidates: r.common_zeros.candidates.clone(),
                verified: r.common_zeros.verified.clone(),
            },
            case: r.case_id,
            candidates: r.candidates.clone(),
            obstructing: ObstructingOut {
                kind: description.kind,
                point,
                description: description.text,
                continuation: description.continuation,
            },
            evidence: r
                .evidence
                .iter()
                .map(|e| EvidenceOut { predicate: e.predicate, status: e.status.as_str(), detail: e.detail.clone() })
                .collect(),
            warnings: r.warnings.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

#[derive(Serialize)]
pub struct AtlasSummary {
    pub beta: Fraction,
    pub t: f64,
    pub n_pm: u64,
    pub entries: usize,
    pub c1: f64,
    pub c2: f64,
    pub estimate: f64,
    pub accumulation: bool,
    pub cancellations: usize,
    pub conditional_on_rh: bool,
}

impl AtlasSummary {
    pub fn new(a: &SingularityAtlas) -> Self {
        AtlasSummary {
            beta: a.beta.into(),
            t: a.t_max,
            n_pm: a.n_pm,
            entries: a.entries.len(),
            c1: a.estimate.0,
            c2: a.estimate.1,
            estimate: if a.t_max > 1.0 { a.estimate_at(a.t_max) } else { 0.0 },
            accumulation: a.accumulation,
            cancellations: a.cancellations,
            conditional_on_rh: a.entries.iter().any(|e| e.conditional),
        }
    }
}

pub fn write_expansion_csv<W: Write>(out: W, e: &CycloExpansion) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["n", "m", "c"])?;
    for (k, c) in &e.c {
        w.write_record([k.n.to_string(), k.m.to_string(), c.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_atlas_csv<W: Write>(out: W, a: &SingularityAtlas) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["re", "im", "kind", "multiplicity", "source", "conditional_flag"])?;
    for e in &a.entries {
        let sources: Vec<String> = e
            .sources
            .iter()
            .map(|s| match s {
                euler_horizon_core::analytic::AtlasSource::LocalFactor { p } => format!("{}({p})", s.label()),
                euler_horizon_core::analytic::AtlasSource::ZetaPole { n, m }
                | euler_horizon_core::analytic::AtlasSource::ZetaNontrivialZero { n, m }
                | euler_horizon_core::analytic::AtlasSource::ZetaTrivialZero { n, m } => {
                    format!("{}({n},{m})", s.label())
                }
            })
            .collect();
        w.write_record([
            format!("{:.12}", e.s.re),
            format!("{:.12}", e.s.im),
            e.kind().as_str().to_string(),
            e.multiplicity().to_string(),
            sources.join(";"),
            e.conditional.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_zeros_csv<W: Write>(out: W, records: &[LocalZeroRecord], beta: Slope) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["p", "root_re", "root_im", "multiplicity", "re_s", "margin"])?;
    for rec in records {
        for ((y, mult), re) in rec.roots.iter().zip(&rec.re_s) {
            w.write_record([
                rec.p.to_string(),
                format!("{:.15e}", y.re),
                format!("{:.15e}", y.im),
                mult.to_string(),
                format!("{:.12}", re),
                format!("{:.12}", re - beta.to_f64()),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}
