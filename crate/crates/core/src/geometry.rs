//! Support sets, extremal points of the convex cone, the abscissae `alpha`
//! and `beta`, and the ghost (main part) on the ray of slope `beta`.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::poly::{BivariateRational, Monomial};
use crate::series::TruncatedSeries;
use crate::slope::Slope;
use crate::upoly::UPoly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("W = 1 has no monomial with positive Y-degree")]
    DegenerateInput,
    #[error("truncation at Y^{bound} is too short: the maximum has not stabilized")]
    TruncationInsufficient { bound: u32 },
    #[error("only {available} ray coefficients available; at least 2 are needed")]
    ReconstructionAmbiguous { available: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Abscissae {
    /// Abscissa of absolute convergence, `max (n+1)/m`.
    pub alpha: Slope,
    /// Abscissa of meromorphic continuation, `max n/m`.
    pub beta: Slope,
    /// The series maxima fall short of the bounds read off the monomials of
    /// `P` and `Q`, so coefficients cancel.
    pub cancellation_possible: bool,
}

/// `alpha` and `beta` from the truncated expansion, certified against the
/// monomials of `P` and `Q`: every series term is a product of those
/// monomials, so neither maximum can exceed the corresponding bound.
pub fn compute_alpha_beta(s: &TruncatedSeries, w: &BivariateRational) -> Result<Abscissae, GeometryError> {
    let bound = s.bound();
    let pts: Vec<Monomial> = s.terms().map(|(m, _)| m).filter(|m| m.m >= 1).collect();
    if pts.is_empty() {
        return Err(GeometryError::DegenerateInput);
    }
    let half = bound / 2;
    let max_over = |f: fn(&Monomial) -> Option<Slope>, upto: u32| {
        pts.iter().filter(|p| p.m <= upto).filter_map(f).max()
    };
    let beta = max_over(Monomial::slope, bound).expect("nonempty");
    let alpha = max_over(Monomial::pole_abscissa, bound).expect("nonempty");
    if max_over(Monomial::slope, half) != Some(beta) || max_over(Monomial::pole_abscissa, half) != Some(alpha) {
        return Err(GeometryError::TruncationInsufficient { bound });
    }
    let beta_bound = w.slope_bound().expect("nondegenerate");
    let alpha_bound = w.pole_abscissa_bound().expect("nondegenerate");
    debug_assert!(beta <= beta_bound && alpha <= alpha_bound);
    Ok(Abscissae { alpha, beta, cancellation_possible: beta < beta_bound || alpha < alpha_bound })
}

/// A linear functional `(u, v)` acting as `u*n + v*m`.
pub type Functional = (i64, i64);

fn apply(phi: Functional, p: (i64, i64)) -> i128 {
    phi.0 as i128 * p.0 as i128 + phi.1 as i128 * p.1 as i128
}

/// A functional `phi` with `0 < phi(a) < phi(b)` for every other `b`, if one
/// exists. Such a `phi` is a tangent meeting the closed cone only at `a`.
pub fn extremal_witness(a: Monomial, others: &[Monomial]) -> Option<Functional> {
    let pa = (a.n as i64, a.m as i64);
    let constraints: Vec<(i64, i64)> = core::iter::once(pa)
        .chain(others.iter().filter(|b| **b != a).map(|b| (b.n as i64 - pa.0, b.m as i64 - pa.1)))
        .collect();
    let feasible = |phi: Functional| constraints.iter().all(|&v| apply(phi, v) > 0);
    let mut candidates: Vec<Functional> = constraints.clone();
    let perps: Vec<Functional> = constraints.iter().flat_map(|&(x, y)| [(-y, x), (y, -x)]).collect();
    for (i, p) in perps.iter().enumerate() {
        for q in &perps[i + 1..] {
            candidates.push((p.0 + q.0, p.1 + q.1));
        }
    }
    candidates.into_iter().find(|&phi| phi != (0, 0) && feasible(phi))
}

/// Points of the set that are extremal for the cone generated under
/// scaling by `lambda >= 1` and convex combination, sorted by `m` then `n`.
pub fn extremal_points(points: &[Monomial]) -> Vec<Monomial> {
    let mut pts: Vec<Monomial> = points.iter().copied().filter(|p| *p != Monomial::ONE).collect();
    pts.sort();
    pts.dedup();
    pts.iter().copied().filter(|&a| extremal_witness(a, &pts).is_some()).collect()
}

/// The ray series of slope `beta`: `u(T) = sum_j a_{jk, jl} T^j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GhostRay {
    /// Primitive direction `(k, l)` with `k/l = beta`.
    pub direction: (u32, u32),
    /// Collected coefficients `a_{jk, jl}` for `j = 0..`.
    pub terms: Vec<BigInt>,
    pub num: UPoly,
    pub den: UPoly,
    /// False when no recurrence of admissible order fits and `num` is the
    /// polynomial truncation.
    pub reconstructed: bool,
}

impl GhostRay {
    /// Coefficients of `num/den` up to `T^(len-1)`.
    pub fn expand(&self, len: usize) -> Vec<BigInt> {
        series_quotient(&self.num, &self.den, len)
    }
}

/// Power series of `n/d` (with `d(0) = 1`) to `len` terms.
pub fn series_quotient(n: &UPoly, d: &UPoly, len: usize) -> Vec<BigInt> {
    let mut out: Vec<BigInt> = Vec::with_capacity(len);
    for j in 0..len {
        let mut v = n.coeff(j);
        for i in 1..=j.min(d.degree().unwrap_or(0)) {
            v -= d.coeff(i) * &out[j - i];
        }
        out.push(v);
    }
    out
}

/// Collect the ray coefficients and reconstruct the minimal rational
/// function through Berlekamp–Massey over the rationals.
pub fn ghost(s: &TruncatedSeries, beta: Slope) -> Result<GhostRay, GeometryError> {
    let (k, l) = (beta.num() as u32, beta.den() as u32);
    let count = (s.bound() / l) as usize + 1;
    let terms: Vec<BigInt> = (0..count as u32).map(|j| s.coeff(j * k, j * l)).collect();
    if terms.len() < 2 {
        return Err(GeometryError::ReconstructionAmbiguous { available: terms.len() });
    }
    let (num, den, reconstructed) = match reconstruct(&terms) {
        Some((n, d)) => (n, d, true),
        None => (UPoly::from_coeffs(terms.clone()), UPoly::one(), false),
    };
    Ok(GhostRay { direction: (k, l), terms, num, den, reconstructed })
}

/// Minimal `N/D` with `D(0) = 1`, integral, matching all terms; `None` if
/// the recurrence order exceeds half the available terms.
pub fn reconstruct(terms: &[BigInt]) -> Option<(UPoly, UPoly)> {
    let seq: Vec<BigRational> = terms.iter().map(|t| BigRational::from_integer(t.clone())).collect();
    let (conn, order) = berlekamp_massey(&seq);
    if 2 * order > seq.len() {
        return None;
    }
    let denom_lcm = conn.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    if !denom_lcm.is_one() {
        return None;
    }
    let den = UPoly::from_coeffs(conn.iter().map(|c| c.numer().clone()).collect());
    let num = den.mul(&UPoly::from_coeffs(terms.to_vec())).truncate(order.max(1));
    if series_quotient(&num, &den, terms.len()) != terms {
        return None;
    }
    Some((num, den))
}

/// Connection polynomial `C` (with `C(0) = 1`) and linear complexity `L`:
/// `sum_{i=0}^{L} C_i s_{j-i} = 0` for all `j >= L`.
fn berlekamp_massey(seq: &[BigRational]) -> (Vec<BigRational>, usize) {
    let mut c = vec![BigRational::one()];
    let mut b = vec![BigRational::one()];
    let mut order = 0usize;
    let mut shift = 1usize;
    let mut last = BigRational::one();
    for n in 0..seq.len() {
        let mut d = seq[n].clone();
        for i in 1..=order.min(c.len() - 1) {
            d += &c[i] * &seq[n - i];
        }
        if d.is_zero() {
            shift += 1;
            continue;
        }
        let coef = &d / &last;
        let mut next = c.clone();
        if next.len() < b.len() + shift {
            next.resize(b.len() + shift, BigRational::zero());
        }
        for (i, bi) in b.iter().enumerate() {
            next[i + shift] -= &coef * bi;
        }
        if 2 * order <= n {
            b = c;
            order = n + 1 - order;
            last = d;
            shift = 1;
        } else {
            shift += 1;
        }
        c = next;
    }
    while c.len() > 1 && c.last().is_some_and(Zero::is_zero) {
        c.pop();
    }
    (c, order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_expression;

    fn setup(text: &str, bound: u32) -> (BivariateRational, TruncatedSeries) {
        let w = parse_expression(text).unwrap();
        let s = TruncatedSeries::expand(&w, bound).unwrap();
        (w, s)
    }

    fn mono(pts: &[(u32, u32)]) -> Vec<Monomial> {
        pts.iter().map(|&(n, m)| Monomial::new(n, m)).collect()
    }

    #[test]
    fn abscissae_of_corpus_examples() {
        let (w, s) = setup("(1+Y)*(1+X*Y)", 8);
        let ab = compute_alpha_beta(&s, &w).unwrap();
        assert_eq!((ab.alpha, ab.beta), (Slope::integer(2), Slope::integer(1)));
        let (w, s) = setup("1+X^3*Y^3+X^4*Y^3+X^6*Y^5+X^7*Y^5+X^10*Y^8", 24);
        let ab = compute_alpha_beta(&s, &w).unwrap();
        assert_eq!((ab.alpha, ab.beta), (Slope::new(5, 3), Slope::new(7, 5)));
        let (w, s) = setup("1+(X+X^2+X^3+X^4)*Y+X^5*Y^2", 8);
        let ab = compute_alpha_beta(&s, &w).unwrap();
        assert_eq!((ab.alpha, ab.beta), (Slope::integer(5), Slope::integer(4)));
        assert!(!ab.cancellation_possible);
    }

    #[test]
    fn short_truncation_is_rejected() {
        let (w, s) = setup("1+X^3*Y^3+X^4*Y^3+X^6*Y^5+X^7*Y^5+X^10*Y^8", 6);
        assert_eq!(compute_alpha_beta(&s, &w), Err(GeometryError::TruncationInsufficient { bound: 6 }));
    }

    #[test]
    fn extremal_examples() {
        assert_eq!(extremal_points(&mono(&[(0, 1), (1, 1), (1, 2)])), mono(&[(0, 1), (1, 1)]));
        assert_eq!(extremal_points(&mono(&[(2, 3)])), mono(&[(2, 3)]));
        assert_eq!(extremal_points(&mono(&[(1, 1), (2, 2), (3, 3)])), mono(&[(1, 1)]));
    }

    #[test]
    fn ghost_examples() {
        let (_, s) = setup("1+X^3*Y^3+X^4*Y^3+X^6*Y^5+X^7*Y^5+X^10*Y^8", 40);
        let g = ghost(&s, Slope::new(7, 5)).unwrap();
        assert_eq!(g.direction, (7, 5));
        assert!(g.reconstructed);
        assert_eq!((g.num.clone(), g.den.clone()), (UPoly::from_i64(&[1, 1]), UPoly::one()));

        let (_, s) = setup("1/(1-2*Y)", 16);
        let g = ghost(&s, Slope::integer(0)).unwrap();
        assert_eq!(g.direction, (0, 1));
        assert_eq!((g.num.clone(), g.den.clone()), (UPoly::one(), UPoly::from_i64(&[1, -2])));

        let (_, s) = setup("(1+Y)*(1+X*Y)", 16);
        let g = ghost(&s, Slope::integer(1)).unwrap();
        assert_eq!((g.num, g.den), (UPoly::from_i64(&[1, 1]), UPoly::one()));
    }

    #[test]
    fn ghost_needs_two_terms() {
        let (_, s) = setup("1+X^7*Y^5", 4);
        assert_eq!(ghost(&s, Slope::new(7, 5)), Err(GeometryError::ReconstructionAmbiguous { available: 1 }));
    }

    #[test]
    fn unidentifiable_recurrence_falls_back() {
        let terms: Vec<BigInt> = [1, 0, 0, 5].iter().map(|&v| BigInt::from(v)).collect();
        assert!(reconstruct(&terms).is_none());
        let fib: Vec<BigInt> = [1, 1, 2, 3, 5, 8, 13, 21].iter().map(|&v| BigInt::from(v)).collect();
        let (n, d) = reconstruct(&fib).unwrap();
        assert_eq!((n, d), (UPoly::one(), UPoly::from_i64(&[1, -1, -1])));
    }
}
