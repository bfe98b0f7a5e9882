//! Complex roots of polynomials with real coefficients: Aberth–Ehrlich
//! simultaneous iteration, with a companion-matrix QR fallback.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
use thiserror::Error;

pub const TOLERANCE: f64 = 1e-12;
pub const MAX_ITERATIONS: usize = 200;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RootError {
    #[error("root iteration did not converge within {0} iterations")]
    Diverged(usize),
    #[error("polynomial is identically zero")]
    ZeroPolynomial,
}

fn horner(coeffs: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// `sum |c_i| |z|^i`, the scale against which residuals are measured.
fn magnitude(coeffs: &[f64], z: Complex64) -> f64 {
    let r = z.norm();
    coeffs.iter().rev().fold(0.0, |acc, c| acc * r + libm::fabs(*c))
}

/// Whether `|p(z)|` is within the tolerance relative to the coefficient scale.
pub fn is_converged(coeffs: &[f64], z: Complex64, tol: f64) -> bool {
    horner(coeffs, z).0.norm() <= tol * magnitude(coeffs, z)
}

fn trimmed(coeffs: &[f64]) -> Result<&[f64], RootError> {
    let len = coeffs.iter().rposition(|c| *c != 0.0).ok_or(RootError::ZeroPolynomial)? + 1;
    Ok(&coeffs[..len])
}

/// Aberth–Ehrlich iteration from points on the Cauchy-bound circle.
/// Coefficients are given lowest degree first.
pub fn aberth(coeffs: &[f64]) -> Result<Vec<Complex64>, RootError> {
    let coeffs = trimmed(coeffs)?;
    let n = coeffs.len() - 1;
    if n == 0 {
        return Ok(Vec::new());
    }
    let lead = coeffs[n];
    let radius = 1.0 + coeffs[..n].iter().map(|c| libm::fabs(c / lead)).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(radius, 2.0 * PI * k as f64 / n as f64 + 0.4))
        .collect();
    let mut done = vec![false; n];
    for _ in 0..MAX_ITERATIONS {
        for k in 0..n {
            if done[k] {
                continue;
            }
            let (p, dp) = horner(coeffs, z[k]);
            if p.norm() <= TOLERANCE * magnitude(coeffs, z[k]) {
                done[k] = true;
                continue;
            }
            let ratio = p / dp;
            let repulsion: Complex64 = (0..n).filter(|&j| j != k).map(|j| (z[k] - z[j]).inv()).sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if step.is_finite() {
                z[k] -= step;
            } else {
                z[k] += Complex64::from_polar(radius * 1e-3, k as f64);
            }
        }
        if done.iter().all(|d| *d) {
            return Ok(z);
        }
    }
    Err(RootError::Diverged(MAX_ITERATIONS))
}

/// Eigenvalues of the companion matrix by shifted QR on Hessenberg form,
/// followed by Newton polishing.
pub fn companion_roots(coeffs: &[f64]) -> Result<Vec<Complex64>, RootError> {
    let coeffs = trimmed(coeffs)?;
    let n = coeffs.len() - 1;
    if n == 0 {
        return Ok(Vec::new());
    }
    let lead = coeffs[n];
    let mut h = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for (j, c) in coeffs[..n].iter().enumerate() {
        h[0][n - 1 - j] = Complex64::new(-c / lead, 0.0);
    }
    for i in 1..n {
        h[i][i - 1] = Complex64::new(1.0, 0.0);
    }
    let mut eig = hessenberg_eigenvalues(h)?;
    for z in eig.iter_mut() {
        for _ in 0..8 {
            let (p, dp) = horner(coeffs, *z);
            let step = p / dp;
            if !step.is_finite() || step.norm() <= f64::EPSILON * z.norm() {
                break;
            }
            *z -= step;
        }
    }
    Ok(eig)
}

fn hessenberg_eigenvalues(mut h: Vec<Vec<Complex64>>) -> Result<Vec<Complex64>, RootError> {
    let n = h.len();
    let mut out = Vec::with_capacity(n);
    let mut hi = n;
    let mut iterations = 0;
    while hi > 0 {
        if hi == 1 {
            out.push(h[0][0]);
            break;
        }
        let mut lo = hi - 1;
        while lo > 0 {
            let s = h[lo - 1][lo - 1].norm() + h[lo][lo].norm();
            if h[lo][lo - 1].norm() <= f64::EPSILON * s.max(f64::MIN_POSITIVE) {
                h[lo][lo - 1] = Complex64::new(0.0, 0.0);
                break;
            }
            lo -= 1;
        }
        if lo == hi - 1 {
            out.push(h[hi - 1][hi - 1]);
            hi -= 1;
            iterations = 0;
            continue;
        }
        iterations += 1;
        if iterations > 30 * n.max(10) {
            return Err(RootError::Diverged(iterations));
        }
        let shift = if iterations % 11 == 0 {
            h[hi - 1][hi - 1] + h[hi - 1][hi - 2].norm() * 0.75
        } else {
            wilkinson_shift(h[hi - 2][hi - 2], h[hi - 2][hi - 1], h[hi - 1][hi - 2], h[hi - 1][hi - 1])
        };
        qr_step(&mut h, lo, hi, shift);
    }
    Ok(out)
}

fn wilkinson_shift(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let tr = a + d;
    let det = a * d - b * c;
    let disc = (tr * tr * 0.25 - det).sqrt();
    let l1 = tr * 0.5 + disc;
    let l2 = tr * 0.5 - disc;
    if (l1 - d).norm() < (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// One explicit shifted QR step on the active block `lo..hi` via Givens rotations.
fn qr_step(h: &mut [Vec<Complex64>], lo: usize, hi: usize, shift: Complex64) {
    let n = h.len();
    for i in lo..hi {
        h[i][i] -= shift;
    }
    let mut rotations = Vec::with_capacity(hi - lo);
    for k in lo..hi - 1 {
        let (a, b) = (h[k][k], h[k + 1][k]);
        let r = libm::hypot(a.norm(), b.norm());
        let (c, s) = if r == 0.0 { (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)) } else { (a / r, b / r) };
        for j in k..n {
            let (x, y) = (h[k][j], h[k + 1][j]);
            h[k][j] = c.conj() * x + s.conj() * y;
            h[k + 1][j] = -s * x + c * y;
        }
        rotations.push((c, s));
    }
    for (idx, (c, s)) in rotations.into_iter().enumerate() {
        let k = lo + idx;
        for row in h.iter_mut().take(hi.min(k + 2) + 1) {
            let (x, y) = (row[k], row[k + 1]);
            row[k] = x * c + y * s;
            row[k + 1] = -x * s.conj() + y * c.conj();
        }
    }
    for i in lo..hi {
        h[i][i] += shift;
    }
}

/// All complex roots: Aberth first, then the companion matrix if Aberth
/// does not converge.
pub fn find_roots(coeffs: &[f64]) -> Result<Vec<Complex64>, RootError> {
    match aberth(coeffs) {
        Ok(r) => Ok(r),
        Err(RootError::Diverged(_)) => companion_roots(coeffs),
        Err(e) => Err(e),
    }
}

/// Sort by modulus, then argument.
pub fn sort_roots(roots: &mut [Complex64]) {
    roots.sort_by(|a, b| a.norm().total_cmp(&b.norm()).then(a.arg().total_cmp(&b.arg())));
}
