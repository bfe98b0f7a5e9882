//! Built-in examples with pinned outcomes.

use std::collections::BTreeMap;

use euler_horizon_core::classifier::CaseReport;
use euler_horizon_core::{Monomial, Slope};

#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub id: &'static str,
    pub expr: &'static str,
    pub expected_case: u8,
    pub expected_beta: (u64, u64),
    pub notes: &'static str,
    /// Exact cyclotomic factors `(n, m, e)` when `W` is a finite product.
    pub factors: &'static [(u32, u32, i64)],
    /// Ray direction and ray series coefficients expected for the ghost.
    pub ghost: Option<((u32, u32), &'static [i64])>,
}

#[derive(Clone, Debug)]
pub struct Unsupported {
    pub id: &'static str,
    pub reason: &'static str,
}

pub const ENTRIES: &[CorpusEntry] = &[
    CorpusEntry {
        id: "ex51",
        expr: "(1+Y)*(1+X*Y)",
        expected_case: 1,
        expected_beta: (1, 1),
        notes: "zeta(s)zeta(s-1)/(zeta(2s)zeta(2s-2)); continues to the whole plane",
        factors: &[(0, 1, -1), (1, 1, -1), (0, 2, 1), (2, 2, 1)],
        ghost: None,
    },
    CorpusEntry {
        id: "ex52a",
        expr: "1 + 2*Y/(1-2*Y)",
        expected_case: 2,
        expected_beta: (0, 1),
        notes: "W = 1/(1-2Y); the ray series 1/(1-2T) is not cyclotomic",
        factors: &[],
        ghost: Some(((0, 1), &[1, 2, 4, 8])),
    },
    CorpusEntry {
        id: "ex53a",
        expr: "1+X^3*Y^3+X^4*Y^3+X^6*Y^5+X^7*Y^5+X^10*Y^8",
        expected_case: 3,
        expected_beta: (7, 5),
        notes: "ghost 1+X^7Y^5 does not divide W; 7/5 is an essential singularity; case number derived",
        factors: &[],
        ghost: Some(((7, 5), &[1, 1, 0, 0])),
    },
    CorpusEntry {
        id: "ex53b",
        expr: "1+Y+X*Y^2",
        expected_case: 3,
        expected_beta: (1, 2),
        notes: "not cyclotomic; 1/2 is the only obstructing point",
        factors: &[],
        ghost: Some(((1, 2), &[1, 1, 0, 0])),
    },
    CorpusEntry {
        id: "ex54a",
        expr: "1+(X+X^2+X^3+X^4)*Y+X^5*Y^2",
        expected_case: 4,
        expected_beta: (4, 1),
        notes: "local zeros right of Re s = 4 at a positive proportion of primes; the whole line is obstructing",
        factors: &[],
        ghost: Some(((4, 1), &[1, 1, 0, 0])),
    },
    CorpusEntry {
        id: "ex55",
        expr: "1+Y-X^2*Y",
        expected_case: 5,
        expected_beta: (2, 1),
        notes: "D(s) = D*(s)/zeta(s-2); no point of Re s = 2 is obstructing",
        factors: &[],
        ghost: Some(((2, 1), &[1, -1, 0, 0])),
    },
];

pub const UNSUPPORTED: &[Unsupported] = &[
    Unsupported { id: "ex52b", reason: "the 14-monomial polynomial is not given explicitly" },
    Unsupported { id: "ex54b", reason: "contains Y^-2 terms, outside the W(X, 0) = 1 setting" },
];

pub fn find(id: &str) -> Option<&'static CorpusEntry> {
    ENTRIES.iter().find(|e| e.id == id)
}

/// Mismatches between a report and the pinned values; empty when all agree.
pub fn check(entry: &CorpusEntry, report: &CaseReport) -> Vec<String> {
    let mut problems = Vec::new();
    if report.case_id != Some(entry.expected_case) {
        problems.push(format!("case {:?}, expected {}", report.case_id, entry.expected_case));
    }
    let beta = Slope::new(entry.expected_beta.0, entry.expected_beta.1);
    if report.beta != beta {
        problems.push(format!("beta {}, expected {beta}", report.beta));
    }
    if !entry.factors.is_empty() {
        let expected: BTreeMap<Monomial, i64> =
            entry.factors.iter().map(|&(n, m, e)| (Monomial::new(n, m), e)).collect();
        if report.cyclo.factors != expected {
            problems.push(format!("factors {:?}", report.cyclo.factors));
        }
    }
    if let Some((direction, prefix)) = entry.ghost {
        let terms: Vec<i64> = report.ghost.terms.iter().take(prefix.len()).map(|t| i64::try_from(t).unwrap_or(i64::MAX)).collect();
        if report.ghost.direction != direction || terms != prefix {
            problems.push(format!("ghost {:?} {:?}", report.ghost.direction, terms));
        }
    }
    problems
}
