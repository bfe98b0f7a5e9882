//! Cyclotomicity of univariate ray series and of bivariate rational
//! functions, with factors normalized to `(1 - T^d)^e` and
//! `(1 - X^a Y^b)^e`.
//!
//! For the bivariate test, the leading form of `W` with respect to the
//! weight `l*n - k*m` is multiplicative. For `W = prod (1 - X^a Y^b)^e` it
//! equals a signed monomial times `prod_{a/b = k/l} (1 - X^a Y^b)^e`, so the
//! factors of each slope are read off from the leading forms of `P` and `Q`.
//! Only slopes along which `P` or `Q` has two monomials can contribute.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};

use crate::poly::{BivariateRational, Monomial, SparsePoly};
use crate::primes::{divisors, mobius, totient};
use crate::upoly::UPoly;

/// `Phi_d`, with the convention `Phi_1 = 1 - T` so that `Phi_d(0) = 1`.
pub fn cyclotomic_polynomial(d: u64) -> UPoly {
    let mut num = UPoly::one();
    let mut den = UPoly::one();
    for e in divisors(d) {
        match mobius(d / e) {
            1 => num = num.mul(&UPoly::one_minus_power(e as usize)),
            -1 => den = den.mul(&UPoly::one_minus_power(e as usize)),
            _ => {}
        }
    }
    num.div_exact(&den).expect("cyclotomic product is a polynomial")
}

/// Result of the univariate test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnivariateCyclo {
    pub is_cyclotomic: bool,
    /// Exponents `e_d` with `u = prod (1 - T^d)^{e_d}` when cyclotomic.
    pub exponents: BTreeMap<u64, i64>,
}

/// Exponents of `Phi_d` dividing `f` (with `f(0) = 1`); `None` if a
/// non-cyclotomic factor remains.
fn phi_multiplicities(f: &UPoly) -> Option<BTreeMap<u64, i64>> {
    let mut rest = f.clone();
    let mut mult = BTreeMap::new();
    let deg = f.degree().unwrap_or(0) as u64;
    let mut d = 1u64;
    while d <= 2 * deg * deg + 2 {
        let remaining = rest.degree().unwrap_or(0) as u64;
        if remaining == 0 {
            break;
        }
        if totient(d) <= remaining {
            let phi = cyclotomic_polynomial(d);
            while let Some(q) = rest.div_exact(&phi) {
                rest = q;
                *mult.entry(d).or_insert(0) += 1;
            }
        }
        d += 1;
    }
    rest.is_one().then_some(mult)
}

/// Rewrite `prod Phi_d^{m_d}` as `prod (1 - T^e)^{b_e}` by Möbius inversion.
fn to_binomial_exponents(phi_mult: &BTreeMap<u64, i64>) -> BTreeMap<u64, i64> {
    let mut out: BTreeMap<u64, i64> = BTreeMap::new();
    for (&d, &m) in phi_mult {
        for e in divisors(d) {
            let mu = mobius(d / e);
            if mu != 0 {
                *out.entry(e).or_insert(0) += m * mu;
            }
        }
    }
    out.retain(|_, v| *v != 0);
    out
}

/// Whether `num/den` (both with constant term 1) is a product of
/// cyclotomic polynomials and their inverses.
pub fn is_cyclotomic_univariate(num: &UPoly, den: &UPoly) -> UnivariateCyclo {
    let not = UnivariateCyclo { is_cyclotomic: false, exponents: BTreeMap::new() };
    let Some((n, d)) = reduce_pair(num, den) else {
        return not;
    };
    match (phi_multiplicities(&n), phi_multiplicities(&d)) {
        (Some(a), Some(b)) => {
            let mut merged = a;
            for (k, v) in b {
                *merged.entry(k).or_insert(0) -= v;
            }
            UnivariateCyclo { is_cyclotomic: true, exponents: to_binomial_exponents(&merged) }
        }
        _ => not,
    }
}

/// Cancel the gcd of `num/den` and rescale both to constant term `+1`;
/// `None` if the constant terms are not units after cancellation.
fn reduce_pair(num: &UPoly, den: &UPoly) -> Option<(UPoly, UPoly)> {
    let g = num.gcd(den);
    let mut n = num.div_exact(&g)?;
    let mut d = den.div_exact(&g)?;
    let (n0, d0) = (n.coeff(0), d.coeff(0));
    if !n0.abs().is_one() || !d0.abs().is_one() {
        return None;
    }
    if n0.is_negative() {
        n = n.neg();
    }
    if d0.is_negative() {
        d = d.neg();
    }
    Some((n, d))
}

/// Outcome of the bivariate test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycloFactorization {
    /// Exponents `e` of `(1 - X^a Y^b)^e`; denominator factors are negative.
    pub factors: BTreeMap<Monomial, i64>,
    pub is_cyclotomic: bool,
    /// `W` divided by the factors found, when not cyclotomic.
    pub residual: Option<BivariateRational>,
}

/// `prod (1 - X^a Y^b)^e` as a reduced quotient of polynomials.
pub fn binomial_product(factors: &BTreeMap<Monomial, i64>) -> (SparsePoly, SparsePoly) {
    let mut num = SparsePoly::one();
    let mut den = SparsePoly::one();
    for (mono, &e) in factors {
        let b = SparsePoly::binomial(mono.n, mono.m).pow(e.unsigned_abs() as u32);
        if e > 0 {
            num = num.mul(&b);
        } else {
            den = den.mul(&b);
        }
    }
    (num, den)
}

/// Primitive directions `(k, l)` with `l >= 1`, `k >= 0` joining two monomials of `p`.
fn edge_directions(p: &SparsePoly, out: &mut BTreeSet<(u32, u32)>) {
    let monos: Vec<Monomial> = p.monomials().collect();
    for (i, a) in monos.iter().enumerate() {
        for b in &monos[i + 1..] {
            let (lo, hi) = if a.m <= b.m { (a, b) } else { (b, a) };
            if hi.m == lo.m || hi.n < lo.n {
                continue;
            }
            let (dn, dm) = (hi.n - lo.n, hi.m - lo.m);
            let g = dn.gcd(&dm);
            out.insert((dn / g, dm / g));
        }
    }
}

/// Decide whether `W` is a finite product of binomials `(1 - X^a Y^b)^{±1}`.
pub fn is_cyclotomic_bivariate(w: &BivariateRational) -> CycloFactorization {
    let mut dirs = BTreeSet::new();
    edge_directions(w.num(), &mut dirs);
    edge_directions(w.den(), &mut dirs);
    let mut factors: BTreeMap<Monomial, i64> = BTreeMap::new();
    let mut failed = false;
    for &(k, l) in &dirs {
        let (_, f) = w.num().leading_form(k, l).expect("nonzero numerator");
        let (_, g) = w.den().leading_form(k, l).expect("nonzero denominator");
        let uni = is_cyclotomic_univariate(&f, &g);
        if !uni.is_cyclotomic {
            failed = true;
            continue;
        }
        for (d, e) in uni.exponents {
            let mono = Monomial::new(k * d as u32, l * d as u32);
            *factors.entry(mono).or_insert(0) += e;
        }
    }
    factors.retain(|_, e| *e != 0);
    let (a, b) = binomial_product(&factors);
    let exact = !failed && a.mul(w.den()) == b.mul(w.num());
    let residual = (!exact).then(|| {
        BivariateRational::normalize(w.num().mul(&b), w.den().mul(&a)).expect("quotient of normalized functions")
    });
    CycloFactorization { factors, is_cyclotomic: exact, residual }
}

/// `(1 - T^d)^e` factors lifted to `(1 - X^{dk} Y^{dl})^e`.
pub fn lift_exponents(exponents: &BTreeMap<u64, i64>, k: u32, l: u32) -> BTreeMap<Monomial, BigInt> {
    exponents
        .iter()
        .map(|(&d, &e)| (Monomial::new(k * d as u32, l * d as u32), BigInt::from(e)))
        .collect()
}
