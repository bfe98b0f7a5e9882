//! Riemann zeta by Euler–Maclaurin summation, and the complex gamma function
//! by the Lanczos approximation.

use core::f64::consts::PI;

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum ZetaError {
    #[error("zeta has a pole at s = 1")]
    PoleAtOne,
}

/// `B_{2k}` for `k = 1..=15` as exact fractions.
const BERNOULLI: [(f64, f64); 15] = [
    (1.0, 6.0),
    (-1.0, 30.0),
    (1.0, 42.0),
    (-1.0, 30.0),
    (5.0, 66.0),
    (-691.0, 2730.0),
    (7.0, 6.0),
    (-3617.0, 510.0),
    (43867.0, 798.0),
    (-174611.0, 330.0),
    (854513.0, 138.0),
    (-236364091.0, 2730.0),
    (8553103.0, 6.0),
    (-23749461029.0, 870.0),
    (8615841276005.0, 14322.0),
];

/// Cutoffs for the Euler–Maclaurin sum.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ZetaConfig {
    /// Lower bound on the number of summed terms `N`.
    pub min_terms: usize,
    /// Number of Bernoulli corrections, at most 15.
    pub corrections: usize,
}

impl Default for ZetaConfig {
    fn default() -> Self {
        ZetaConfig { min_terms: 10, corrections: 15 }
    }
}

pub fn zeta(s: Complex64) -> Result<Complex64, ZetaError> {
    zeta_with(s, &ZetaConfig::default())
}

pub fn zeta_with(s: Complex64, config: &ZetaConfig) -> Result<Complex64, ZetaError> {
    if (s - 1.0).norm() < 1e-14 {
        return Err(ZetaError::PoleAtOne);
    }
    if s.re < 0.0 {
        // zeta(s) = 2^s pi^(s-1) sin(pi s / 2) Gamma(1 - s) zeta(1 - s)
        let half = s * (PI / 2.0);
        if s.im == 0.0 && s.re % 2.0 == 0.0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let log_factor = s * core::f64::consts::LN_2 + (s - 1.0) * libm::log(PI) + ln_gamma(1.0 - s) + ln_sin(half);
        return Ok(log_factor.exp() * euler_maclaurin(1.0 - s, config));
    }
    Ok(euler_maclaurin(s, config))
}

fn euler_maclaurin(s: Complex64, config: &ZetaConfig) -> Complex64 {
    let k_max = config.corrections.min(BERNOULLI.len());
    // keeps |s + 2k| / (2 pi N) below 1/4 for every correction term
    let n = config.min_terms.max(libm::ceil(2.0 * (s.norm() + 2.0 * k_max as f64) / PI) as usize);
    let mut sum = Complex64::new(0.0, 0.0);
    for j in 1..n {
        sum += (-s * libm::log(j as f64)).exp();
    }
    let ln_n = libm::log(n as f64);
    let n_pow = (-s * ln_n).exp();
    sum += n_pow * n as f64 / (s - 1.0) + n_pow * 0.5;
    // term_k = B_2k / (2k)! * s (s+1) ... (s+2k-2) * N^(-s-2k+1)
    let mut rising = s;
    let mut power = n_pow / n as f64;
    let mut factorial = 2.0;
    for (k, &(bn, bd)) in BERNOULLI.iter().enumerate().take(k_max) {
        if k > 0 {
            let a = 2.0 * k as f64;
            rising = rising * (s + (a - 1.0)) * (s + a);
            power /= (n * n) as f64;
            factorial *= (2 * k + 1) as f64 * (2 * k + 2) as f64;
        }
        sum += rising * power * (bn / bd / factorial);
    }
    sum
}

/// `ln sin z` for any `z`, avoiding overflow for large `|Im z|`.
fn ln_sin(z: Complex64) -> Complex64 {
    let i = Complex64::new(0.0, 1.0);
    if z.im > 20.0 {
        // sin z = e^{-iz} (1 - e^{2iz}) / (-2i)
        -i * z - Complex64::new(0.0, -2.0).ln() + ln_1p(-(i * z * 2.0).exp())
    } else if z.im < -20.0 {
        i * z - Complex64::new(0.0, 2.0).ln() + ln_1p(-(-i * z * 2.0).exp())
    } else {
        z.sin().ln()
    }
}

/// `ln(1 + u)`, accurate for small `|u|`.
pub fn ln_1p(u: Complex64) -> Complex64 {
    if u.norm() < 1e-4 {
        let u2 = u * u;
        u - u2 * 0.5 + u2 * u / 3.0 - u2 * u2 * 0.25
    } else {
        (u + 1.0).ln()
    }
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// `ln Gamma(z)` on some branch; exponentiate for `Gamma(z)`.
pub fn ln_gamma(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        // Gamma(z) Gamma(1 - z) = pi / sin(pi z)
        return Complex64::new(libm::log(PI), 0.0) - ln_sin(z * PI) - ln_gamma(1.0 - z);
    }
    let z = z - 1.0;
    let mut x = Complex64::new(LANCZOS[0], 0.0);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        x += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * libm::log(2.0 * PI) + (z + 0.5) * t.ln() - t + x.ln()
}

pub fn gamma(z: Complex64) -> Complex64 {
    ln_gamma(z).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm()
    }

    #[test]
    fn special_values() {
        assert!(rel(zeta(c(2.0, 0.0)).unwrap(), c(PI * PI / 6.0, 0.0)) < 1e-13);
        assert!(rel(zeta(c(4.0, 0.0)).unwrap(), c(PI.powi(4) / 90.0, 0.0)) < 1e-13);
        assert!((zeta(c(0.0, 0.0)).unwrap() - c(-0.5, 0.0)).norm() < 1e-13);
        assert!((zeta(c(-1.0, 0.0)).unwrap() - c(-1.0 / 12.0, 0.0)).norm() < 1e-13);
        assert_eq!(zeta(c(-4.0, 0.0)).unwrap(), c(0.0, 0.0));
        assert_eq!(zeta(c(1.0, 0.0)), Err(ZetaError::PoleAtOne));
    }

    #[test]
    fn direct_summation_at_three() {
        let n = 100_000u64;
        let partial: f64 = (1..n).map(|k| 1.0 / (k as f64).powi(3)).sum();
        // tail by Euler–Maclaurin's first two terms
        let nf = n as f64;
        let oracle = partial + 1.0 / (2.0 * nf * nf) + 0.5 / nf.powi(3);
        assert!((zeta(c(3.0, 0.0)).unwrap().re - oracle).abs() < 1e-10);
        assert!((oracle - 1.202_056_903_2).abs() < 1e-10);
    }

    #[test]
    fn first_nontrivial_zero() {
        let z = zeta(c(0.5, 14.134_725_141_734_693)).unwrap();
        assert!(z.norm() < 1e-10, "{z}");
        let far = zeta(c(0.5, 1000.0)).unwrap();
        let near = zeta_with(c(0.5, 1000.0), &ZetaConfig { min_terms: 3000, corrections: 15 }).unwrap();
        assert!(rel(far, near) < 1e-10);
    }

    #[test]
    fn functional_equation_at_random_points() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..5 {
            let s = c(rng.gen_range(-3.0..4.0), rng.gen_range(-30.0..30.0));
            let lhs = zeta(s).unwrap();
            let rhs = (s * core::f64::consts::LN_2).exp()
                * ((s - 1.0) * libm::log(PI)).exp()
                * (s * PI / 2.0).sin()
                * gamma(1.0 - s)
                * zeta(1.0 - s).unwrap();
            assert!(rel(lhs, rhs) < 1e-8, "s = {s}: {lhs} vs {rhs}");
        }
    }

    #[test]
    fn gamma_values() {
        assert!(rel(gamma(c(5.0, 0.0)), c(24.0, 0.0)) < 1e-13);
        assert!(rel(gamma(c(0.5, 0.0)), c(libm::sqrt(PI), 0.0)) < 1e-13);
        assert!(rel(gamma(c(-0.5, 0.0)), c(-2.0 * libm::sqrt(PI), 0.0)) < 1e-13);
        // |Gamma(1/2 + it)|^2 = pi / cosh(pi t)
        let g = gamma(c(0.5, 3.0));
        assert!((g.norm_sqr() - PI / libm::cosh(3.0 * PI)).abs() / g.norm_sqr() < 1e-12);
    }
}
