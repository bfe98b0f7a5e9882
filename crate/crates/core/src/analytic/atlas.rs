//! Zeros and poles of `D(s)` right of `beta` up to height `T`.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{Signed, ToPrimitive};
use thiserror::Error;

use crate::classifier::CaseReport;
use crate::local_zeros::{local_poles, local_roots};
use crate::poly::Monomial;
use crate::slope::Slope;

/// Entries closer than this are treated as one point.
pub const MERGE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AtlasError {
    #[error("a table of zeta zero ordinates is required")]
    MissingZerosFile,
    #[error("zeta zero ordinates are needed up to {needed}, the table ends at {available}")]
    ZerosTableTooShort { needed: f64, available: f64 },
    #[error("the atlas needs a decided case")]
    Undecided,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum AtlasSource {
    ZetaPole { n: u32, m: u32 },
    ZetaNontrivialZero { n: u32, m: u32 },
    ZetaTrivialZero { n: u32, m: u32 },
    LocalFactor { p: u64 },
}

impl AtlasSource {
    pub fn label(&self) -> &'static str {
        match self {
            AtlasSource::ZetaPole { .. } => "zeta-pole",
            AtlasSource::ZetaNontrivialZero { .. } => "zeta-nontrivial-zero",
            AtlasSource::ZetaTrivialZero { .. } => "zeta-trivial-zero",
            AtlasSource::LocalFactor { .. } => "local-factor",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Zero,
    Pole,
}

impl Kind {
    pub fn as_str(&self) -> &'static str {
        match self {
            Kind::Zero => "zero",
            Kind::Pole => "pole",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AtlasEntry {
    pub s: Complex64,
    /// Signed order: positive for zeros, negative for poles.
    pub order: i64,
    pub sources: Vec<AtlasSource>,
    /// Placed on `Re rho = 1/2`.
    pub conditional: bool,
    /// Several sources coincide here.
    pub merged: bool,
}

impl AtlasEntry {
    pub fn kind(&self) -> Kind {
        if self.order > 0 {
            Kind::Zero
        } else {
            Kind::Pole
        }
    }

    pub fn multiplicity(&self) -> u64 {
        self.order.unsigned_abs()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SingularityAtlas {
    pub beta: Slope,
    pub t_max: f64,
    /// Sorted by imaginary part, then real part.
    pub entries: Vec<AtlasEntry>,
    /// Multiplicity-weighted count of entries.
    pub n_pm: u64,
    /// `(c1, c2)` in `N(T) ~ c1 T log T + c2 T`.
    pub estimate: (f64, f64),
    /// Only the entries visible at the current truncation; more accumulate
    /// toward `Re s = beta`.
    pub accumulation: bool,
    /// Coinciding entries whose orders cancelled.
    pub cancellations: usize,
}

impl SingularityAtlas {
    pub fn estimate_at(&self, t: f64) -> f64 {
        self.estimate.0 * t * libm::log(t) + self.estimate.1 * t
    }
}

struct Builder {
    beta: f64,
    t: f64,
    raw: Vec<AtlasEntry>,
}

impl Builder {
    fn push(&mut self, s: Complex64, order: i64, source: AtlasSource, conditional: bool) {
        let visible = s.im == 0.0 || s.im.abs() < self.t;
        if order != 0 && s.re > self.beta && visible {
            self.raw.push(AtlasEntry { s, order, sources: alloc::vec![source], conditional, merged: false });
        }
    }

    /// Entries of `zeta(ms - n)^e` right of `beta`.
    fn zeta_factor(&mut self, mono: Monomial, e: i64, zeros: &[f64]) {
        let (n, m) = (mono.n as f64, mono.m as f64);
        let (nn, mm) = (mono.n, mono.m);
        self.push(Complex64::new((n + 1.0) / m, 0.0), -e, AtlasSource::ZetaPole { n: nn, m: mm }, false);
        let mut k = 1.0;
        while (n - 2.0 * k) / m > self.beta {
            self.push(Complex64::new((n - 2.0 * k) / m, 0.0), e, AtlasSource::ZetaTrivialZero { n: nn, m: mm }, false);
            k += 1.0;
        }
        if (n + 0.5) / m > self.beta {
            let t = self.t;
            for &g in zeros.iter().take_while(|g| **g / m < t) {
                for sign in [1.0, -1.0] {
                    let s = Complex64::new((n + 0.5) / m, sign * g / m);
                    self.push(s, e, AtlasSource::ZetaNontrivialZero { n: nn, m: mm }, true);
                }
            }
        }
    }

    /// `s0 + 2 pi i k / ln p` for every `k` with `|Im| < T`.
    fn lattice(&mut self, p: u64, s0: Complex64, order: i64) {
        let step = 2.0 * PI / libm::log(p as f64);
        let base = s0.im - step * libm::round(s0.im / step);
        let k_max = libm::ceil(self.t / step) as i64 + 1;
        for k in -k_max..=k_max {
            let s = Complex64::new(s0.re, base + k as f64 * step);
            self.push(s, order, AtlasSource::LocalFactor { p }, false);
        }
    }

    fn finish(mut self) -> (Vec<AtlasEntry>, usize) {
        self.raw.sort_by(|a, b| a.s.im.total_cmp(&b.s.im).then(a.s.re.total_cmp(&b.s.re)));
        let mut out: Vec<AtlasEntry> = Vec::new();
        let mut taken = alloc::vec![false; self.raw.len()];
        let mut cancellations = 0;
        for i in 0..self.raw.len() {
            if taken[i] {
                continue;
            }
            let mut entry = self.raw[i].clone();
            for j in i + 1..self.raw.len() {
                if self.raw[j].s.im - entry.s.im > MERGE_TOL {
                    break;
                }
                if !taken[j] && (self.raw[j].s - entry.s).norm() < MERGE_TOL {
                    taken[j] = true;
                    entry.order += self.raw[j].order;
                    entry.sources.extend(self.raw[j].sources.iter().copied());
                    entry.conditional |= self.raw[j].conditional;
                    entry.merged = true;
                }
            }
            if entry.order == 0 {
                cancellations += 1;
            } else {
                out.push(entry);
            }
        }
        (out, cancellations)
    }
}

fn small(c: &BigInt) -> i64 {
    c.to_i64().unwrap_or(if c.is_negative() { i64::MIN } else { i64::MAX })
}

/// Enumerate zeros and poles in `Re s > beta`, `|Im s| < t`; real entries are
/// always included. `zeros` holds positive ordinates of zeta zeros.
pub fn build_atlas(report: &CaseReport, t: f64, zeros: Option<&[f64]>) -> Result<SingularityAtlas, AtlasError> {
    let case = report.case_id.ok_or(AtlasError::Undecided)?;
    let exact = matches!(case, 1 | 5);
    let beta = report.beta.to_f64();
    let factors: Vec<(Monomial, i64)> = if case == 1 {
        report.cyclo.factors.iter().map(|(k, e)| (*k, *e)).collect()
    } else {
        report.expansion.c.iter().map(|(k, c)| (*k, small(c))).collect()
    };
    // zeta(ms - n)^{-c} contributes nontrivial zeros when (n + 1/2)/m > beta
    let needs_zeros: Vec<&(Monomial, i64)> =
        factors.iter().filter(|(k, _)| (k.n as f64 + 0.5) / k.m as f64 > beta).collect();
    let needed = needs_zeros.iter().map(|(k, _)| k.m as f64 * t).fold(0.0, f64::max);
    let table: &[f64] = match zeros {
        Some(z) => z,
        None if needed > 0.0 && !needs_zeros.is_empty() => return Err(AtlasError::MissingZerosFile),
        None => &[],
    };
    let available = table.last().copied().unwrap_or(0.0);
    if exact && !needs_zeros.is_empty() && available < needed {
        return Err(AtlasError::ZerosTableTooShort { needed, available });
    }

    let mut b = Builder { beta, t, raw: Vec::new() };
    let mut c1 = 0.0;
    let mut c2 = 0.0;
    for &(mono, c) in &factors {
        b.zeta_factor(mono, -c, table);
    }
    for (mono, c) in needs_zeros {
        let m = mono.m as f64;
        c1 += c.unsigned_abs() as f64 * m / PI;
        c2 += c.unsigned_abs() as f64 * (m / PI) * (libm::log(m / (2.0 * PI)) - 1.0);
    }
    if exact {
        let tol = report.scan.margin_tol;
        let mut add_local = |p: u64, rec: crate::local_zeros::LocalZeroRecord, sign: i64, b: &mut Builder| {
            let ln_p = libm::log(p as f64);
            for ((y, mult), re) in rec.roots.iter().zip(&rec.re_s) {
                if *re > beta + tol {
                    let s0 = Complex64::new(*re, -y.arg() / ln_p);
                    b.lattice(p, s0, sign * *mult as i64);
                    c2 += *mult as f64 * ln_p / PI;
                }
            }
        };
        for &p in &report.scan.exceptional {
            if let Ok(rec) = local_roots(&report.w, p, report.beta) {
                add_local(p, rec, 1, &mut b);
            }
        }
        if !report.w.is_polynomial() {
            for p in crate::primes::primes_up_to(report.scan.prime_bound) {
                if let Ok(rec) = local_poles(&report.w, p, report.beta) {
                    add_local(p, rec, -1, &mut b);
                }
            }
        }
    }
    let (entries, cancellations) = b.finish();
    let n_pm = entries.iter().map(AtlasEntry::multiplicity).sum();
    Ok(SingularityAtlas {
        beta: report.beta,
        t_max: t,
        entries,
        n_pm,
        estimate: (c1, c2),
        accumulation: !exact,
        cancellations,
    })
}
