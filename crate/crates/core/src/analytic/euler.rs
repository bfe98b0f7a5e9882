//! Truncated Euler products `prod_{p <= B} W(p, p^{-s})` and the factored
//! form `prod zeta(ms - n)^{-c} * remainder`.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::Zero;
use thiserror::Error;

use super::zeta::{ln_1p, zeta};
use crate::expansion::CycloExpansion;
use crate::poly::{BivariateRational, Monomial, SparsePoly};
use crate::primes::primes_up_to;
use crate::slope::Slope;
use crate::upoly::to_f64;

/// Constant in `pi(x) < 1.25506 x / ln x` for `x > 1`.
const PRIME_COUNT_CONSTANT: f64 = 1.25506;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("Re s = {sigma} is not right of the abscissa of convergence {alpha}")]
    ConvergenceDomain { sigma: f64, alpha: Slope },
    #[error("local factor at p = {p} vanishes")]
    LocalFactorZero { p: u64 },
    #[error("local factor at p = {p} has a pole")]
    LocalFactorPole { p: u64 },
    #[error("zeta({m}s - {n}) is evaluated at its pole")]
    FactorPole { n: u32, m: u32 },
    #[error("Re s = {sigma} is not right of the remainder abscissa {sigma0}")]
    DomainError { sigma: f64, sigma0: Slope },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EulerValue {
    pub value: Complex64,
    /// Bound on `|D(s) - value| / |value|` from the primes above the
    /// cutoff; `None` when the monomial bound does not cover `s`.
    pub tail_bound: Option<f64>,
    pub prime_bound: u64,
}

/// Nonconstant terms `(a, n, m)` of a polynomial with constant term 1.
fn shifted_terms(p: &SparsePoly) -> Vec<(f64, u32, u32)> {
    p.terms().filter(|(k, _)| k.m > 0).map(|(k, c)| (to_f64(c), k.n, k.m)).collect()
}

/// `P(p, p^{-s}) - 1` from its nonconstant terms.
fn local_offset(terms: &[(f64, u32, u32)], ln_p: f64, s: Complex64) -> Complex64 {
    terms
        .iter()
        .map(|&(a, n, m)| a * ((n as f64 - s * m as f64) * ln_p).exp())
        .sum()
}

/// `sum_{p > B} p^{-gamma} <= 1.25506 gamma B^{1-gamma} / ((gamma - 1) ln B)`.
fn prime_power_tail(gamma: f64, bound: f64) -> f64 {
    PRIME_COUNT_CONSTANT * gamma * libm::pow(bound, 1.0 - gamma) / ((gamma - 1.0) * libm::log(bound))
}

/// For `p > B`, `|P - 1| <= u(p)` with `u(p) = sum |a| p^{n - m sigma}`; while
/// `u <= 1/2`, `|ln P| <= 2u`. Summing over primes bounds the log of the tail.
fn tail_bound(terms: &[(f64, u32, u32)], sigma: f64, bound: u64) -> Option<f64> {
    let b = bound as f64;
    let mut at_bound = 0.0;
    let mut log_tail = 0.0;
    for &(a, n, m) in terms {
        let gamma = m as f64 * sigma - n as f64;
        if gamma <= 1.0 {
            return None;
        }
        at_bound += a.abs() * libm::pow(b, -gamma);
        log_tail += 2.0 * a.abs() * prime_power_tail(gamma, b);
    }
    (at_bound <= 0.5).then_some(log_tail)
}

/// `prod_{p <= bound} W(p, p^{-s})` with a relative tail bound.
pub fn euler_eval(w: &BivariateRational, alpha: Slope, s: Complex64, prime_bound: u64) -> Result<EulerValue, EvalError> {
    if !w.is_one() && s.re <= alpha.to_f64() {
        return Err(EvalError::ConvergenceDomain { sigma: s.re, alpha });
    }
    let num = shifted_terms(w.num());
    let den = shifted_terms(w.den());
    let mut log = Complex64::zero();
    for p in primes_up_to(prime_bound) {
        let ln_p = libm::log(p as f64);
        let u = local_offset(&num, ln_p, s);
        let v = local_offset(&den, ln_p, s);
        let scale = 1.0 + u.norm();
        if (u + 1.0).norm() <= 1e-14 * scale {
            return Err(EvalError::LocalFactorZero { p });
        }
        if (v + 1.0).norm() <= 1e-14 * (1.0 + v.norm()) {
            return Err(EvalError::LocalFactorPole { p });
        }
        log += ln_1p(u) - ln_1p(v);
    }
    let tail = tail_bound(&num, s.re, prime_bound.max(2))
        .zip(tail_bound(&den, s.re, prime_bound.max(2)))
        .map(|(a, b)| libm::expm1(a + b));
    Ok(EulerValue { value: log.exp(), tail_bound: tail, prime_bound })
}

/// `D(s) = prod zeta(ms - n)^{-c} * R(s)`, with `R` the Euler product of
/// `W / prod (1 - X^n Y^m)^c` over the peeled keys.
#[derive(Clone, Debug, PartialEq)]
pub struct ZetaFactorForm {
    pub factors: Vec<(Monomial, BigInt)>,
    /// `R` is supported in `m > bound`, so it converges for `Re s > sigma0`.
    pub remainder_start: Slope,
    pub bound: u32,
}

impl ZetaFactorForm {
    pub fn from_expansion(e: &CycloExpansion, w: &BivariateRational) -> Self {
        let slope = w.slope_bound().unwrap_or(Slope::integer(0));
        let frontier = e.bound as u64 + 1;
        // largest n on row `frontier` with n/m <= slope
        let n_max = slope.num() * frontier / slope.den();
        ZetaFactorForm {
            factors: e.c.iter().map(|(k, c)| (*k, c.clone())).collect(),
            remainder_start: Slope::new(n_max + 1, frontier),
            bound: e.bound,
        }
    }

    pub fn empty() -> Self {
        ZetaFactorForm { factors: Vec::new(), remainder_start: Slope::integer(0), bound: 0 }
    }
}

/// Evaluate the factored form; the remainder runs over primes up to `prime_bound`.
pub fn factored_eval(form: &ZetaFactorForm, w: &BivariateRational, s: Complex64, prime_bound: u64) -> Result<Complex64, EvalError> {
    if !form.factors.is_empty() && s.re <= form.remainder_start.to_f64() {
        return Err(EvalError::DomainError { sigma: s.re, sigma0: form.remainder_start });
    }
    let mut log = Complex64::zero();
    let factors: Vec<(f64, u32, u32)> = form.factors.iter().map(|(k, c)| (to_f64(c), k.n, k.m)).collect();
    for &(c, n, m) in &factors {
        let z = s * m as f64 - n as f64;
        let value = zeta(z).map_err(|_| EvalError::FactorPole { n, m })?;
        log -= value.ln() * c;
    }
    let num = shifted_terms(w.num());
    let den = shifted_terms(w.den());
    for p in primes_up_to(prime_bound) {
        let ln_p = libm::log(p as f64);
        log += ln_1p(local_offset(&num, ln_p, s)) - ln_1p(local_offset(&den, ln_p, s));
        for &(c, n, m) in &factors {
            let x = ((n as f64 - s * m as f64) * ln_p).exp();
            log -= ln_1p(-x) * c;
        }
    }
    Ok(log.exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expansion::peel;
    use crate::parse::parse_expression;
    use crate::series::TruncatedSeries;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn form(text: &str, bound: u32) -> (BivariateRational, ZetaFactorForm) {
        let w = parse_expression(text).unwrap();
        let e = peel(&TruncatedSeries::expand(&w, bound).unwrap()).unwrap();
        let f = ZetaFactorForm::from_expansion(&e, &w);
        (w, f)
    }

    #[test]
    fn product_of_zetas() {
        let w = parse_expression("(1+Y)*(1+X*Y)").unwrap();
        let z = |x: f64| zeta(c(x, 0.0)).unwrap();
        let exact = z(3.0) * z(2.0) / (z(6.0) * z(4.0));
        let e = euler_eval(&w, Slope::integer(2), c(3.0, 0.0), 100_000).unwrap();
        assert!((e.value - exact).norm() / exact.norm() < 1e-4);
        let tail = e.tail_bound.unwrap();
        assert!((e.value - exact).norm() / exact.norm() <= tail && tail < 1e-4);
        let (w, f) = form("(1+Y)*(1+X*Y)", 8);
        assert!((factored_eval(&f, &w, c(3.0, 0.0), 100).unwrap() - exact).norm() < 1e-13);
    }

    #[test]
    fn trivial_inputs() {
        let one = BivariateRational::one();
        let e = euler_eval(&one, Slope::integer(0), c(0.3, 2.0), 1000).unwrap();
        assert_eq!(e.value, c(1.0, 0.0));
        let w = parse_expression("1+Y-X^2*Y").unwrap();
        let s = c(4.0, 1.0);
        let direct = euler_eval(&w, Slope::integer(3), s, 1000).unwrap().value;
        assert!((factored_eval(&ZetaFactorForm::empty(), &w, s, 1000).unwrap() - direct).norm() < 1e-14);
    }

    #[test]
    fn domain_errors() {
        let w = parse_expression("1+Y-X^2*Y").unwrap();
        assert!(matches!(euler_eval(&w, Slope::integer(3), c(3.0, 0.0), 100), Err(EvalError::ConvergenceDomain { .. })));
        // 1 - 2 * 2^{-s} vanishes at s = 1
        let w = parse_expression("1-2*Y").unwrap();
        assert_eq!(euler_eval(&w, Slope::integer(0), c(1.0, 0.0), 10), Err(EvalError::LocalFactorZero { p: 2 }));
        let (w, f) = form("1+Y-X^2*Y", 8);
        assert!(matches!(factored_eval(&f, &w, c(2.05, 0.0), 100), Err(EvalError::DomainError { .. })));
        assert_eq!(factored_eval(&f, &w, c(3.0, 0.0), 100), Err(EvalError::FactorPole { n: 2, m: 1 }));
    }

    #[test]
    fn factored_form_matches_euler_product() {
        let (w, f) = form("1+Y-X^2*Y", 24);
        assert_eq!(f.remainder_start, Slope::new(51, 25));
        let s = c(4.0, 0.0);
        let e = euler_eval(&w, Slope::integer(3), s, 100_000).unwrap();
        let fv = factored_eval(&f, &w, s, 100_000).unwrap();
        assert!((e.value - fv).norm() / fv.norm() < 1e-4);
        assert!((e.value - fv).norm() / fv.norm() <= e.tail_bound.unwrap());
    }

    #[test]
    fn peel_depth_does_not_change_value() {
        let (w, f13) = form("1+Y+X*Y^2", 13);
        let (_, f21) = form("1+Y+X*Y^2", 21);
        let s = c(1.5, 0.0);
        let a = factored_eval(&f13, &w, s, 10_000).unwrap();
        let b = factored_eval(&f21, &w, s, 10_000).unwrap();
        assert!((a - b).norm() / b.norm() < 1e-6);
    }
}
