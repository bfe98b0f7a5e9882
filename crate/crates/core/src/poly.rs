//! Exact sparse bivariate polynomials over the integers and the normalized
//! rational functions `W = P/Q` built from them.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::fmt::Write as _;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::slope::Slope;
use crate::upoly::{to_f64, UPoly};

/// Exponent pair `X^n Y^m`. Ordered by `m` first, then `n`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Monomial {
    pub n: u32,
    pub m: u32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { n: 0, m: 0 };

    pub const fn new(n: u32, m: u32) -> Self {
        Monomial { n, m }
    }

    pub fn slope(&self) -> Option<Slope> {
        (self.m > 0).then(|| Slope::new(self.n as u64, self.m as u64))
    }

    /// `(n+1)/m`, the real point where `zeta(m s - n)` has its pole.
    pub fn pole_abscissa(&self) -> Option<Slope> {
        (self.m > 0).then(|| Slope::new(self.n as u64 + 1, self.m as u64))
    }

    fn divides(&self, other: &Monomial) -> bool {
        self.n <= other.n && self.m <= other.m
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.m, self.n).cmp(&(other.m, other.n))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("resultant vanishes identically: inputs share a factor")]
    ZeroResultant,
    #[error("polynomial has degree zero in Y")]
    ConstantInY,
}

/// Finite map from monomials to nonzero integer coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct SparsePoly {
    terms: BTreeMap<Monomial, BigInt>,
}

impl SparsePoly {
    pub fn zero() -> Self {
        SparsePoly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::term(c, 0, 0)
    }

    pub fn term(c: BigInt, n: u32, m: u32) -> Self {
        let mut p = Self::zero();
        p.add_term(Monomial::new(n, m), c);
        p
    }

    pub fn x() -> Self {
        Self::term(BigInt::one(), 1, 0)
    }

    pub fn y() -> Self {
        Self::term(BigInt::one(), 0, 1)
    }

    /// `1 - X^n Y^m`.
    pub fn binomial(n: u32, m: u32) -> Self {
        let mut p = Self::one();
        p.add_term(Monomial::new(n, m), -BigInt::one());
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, BigInt)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (mono, c) in terms {
            p.add_term(mono, c);
        }
        p
    }

    /// Convenience constructor from `(coefficient, n, m)` triples.
    pub fn from_i64(terms: &[(i64, u32, u32)]) -> Self {
        Self::from_terms(terms.iter().map(|&(c, n, m)| (Monomial::new(n, m), BigInt::from(c))))
    }

    pub fn add_term(&mut self, mono: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(mono).or_default();
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&mono);
        }
    }

    /// Terms in canonical order (`m` ascending, then `n` ascending).
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn monomials(&self) -> impl Iterator<Item = Monomial> + '_ {
        self.terms.keys().copied()
    }

    pub fn coeff(&self, mono: Monomial) -> BigInt {
        self.terms.get(&mono).cloned().unwrap_or_default()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.coeff(Monomial::ONE).is_one()
    }

    pub fn ydeg(&self) -> u32 {
        self.terms.keys().map(|k| k.m).max().unwrap_or(0)
    }

    pub fn xdeg(&self) -> u32 {
        self.terms.keys().map(|k| k.n).max().unwrap_or(0)
    }

    /// Largest `n/m` over monomials with `m >= 1`.
    pub fn max_slope(&self) -> Option<Slope> {
        self.terms.keys().filter_map(Monomial::slope).max()
    }

    /// Largest `(n+1)/m` over monomials with `m >= 1`.
    pub fn max_pole_abscissa(&self) -> Option<Slope> {
        self.terms.keys().filter_map(Monomial::pole_abscissa).max()
    }

    pub fn max_abs_coeff(&self) -> BigInt {
        self.terms.values().map(|c| c.abs()).max().unwrap_or_default()
    }

    pub fn neg(&self) -> Self {
        SparsePoly { terms: self.terms.iter().map(|(k, v)| (*k, -v)).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, v) in &other.terms {
            out.add_term(*k, v.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                out.add_term(Monomial::new(a.n + b.n, a.m + b.m), ca * cb);
            }
        }
        out
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::from_terms(self.terms.iter().map(|(k, v)| (*k, v * c)))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Non-negative gcd of all coefficients.
    pub fn content(&self) -> BigInt {
        self.terms.values().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// `W(X, 0)` as a polynomial in `X`.
    pub fn at_y0(&self) -> UPoly {
        self.y_coeff(0)
    }

    /// Coefficient of `Y^m`, as a polynomial in `X`.
    pub fn y_coeff(&self, m: u32) -> UPoly {
        let row: Vec<(usize, BigInt)> = self
            .terms
            .range(Monomial::new(0, m)..=Monomial::new(u32::MAX, m))
            .map(|(k, v)| (k.n as usize, v.clone()))
            .collect();
        let len = row.last().map_or(0, |(n, _)| n + 1);
        let mut coeffs = vec![BigInt::zero(); len];
        for (n, v) in row {
            coeffs[n] = v;
        }
        UPoly::from_coeffs(coeffs)
    }

    /// Coefficients in `Y` over `Z[X]`, index `m`.
    pub fn to_y_coeffs(&self) -> Vec<UPoly> {
        if self.is_zero() {
            return Vec::new();
        }
        (0..=self.ydeg()).map(|m| self.y_coeff(m)).collect()
    }

    pub fn from_y_coeffs(rows: &[UPoly]) -> Self {
        let mut p = Self::zero();
        for (m, row) in rows.iter().enumerate() {
            for (n, c) in row.coeffs().iter().enumerate() {
                p.add_term(Monomial::new(n as u32, m as u32), c.clone());
            }
        }
        p
    }

    /// `P(x0, Y)` as a polynomial in `Y`.
    pub fn eval_x(&self, x0: &BigInt) -> UPoly {
        UPoly::from_coeffs(self.to_y_coeffs().iter().map(|row| row.eval(x0)).collect())
    }

    /// `P(x, y)` for a real `x` and complex `y`.
    pub fn eval_complex(&self, x: f64, y: Complex64) -> Complex64 {
        self.terms.iter().fold(Complex64::new(0.0, 0.0), |acc, (k, c)| {
            acc + y.powu(k.m) * (to_f64(c) * libm::pow(x, k.n as f64))
        })
    }

    /// The univariate polynomial `f(T)` collecting the terms on the ray
    /// through the primitive direction `(k, l)`: `X^{jk} Y^{jl} -> T^j`.
    pub fn restrict_to_ray(&self, k: u32, l: u32) -> UPoly {
        let mut coeffs: Vec<BigInt> = Vec::new();
        for (mono, c) in &self.terms {
            if (mono.n as u64) * (l as u64) != (mono.m as u64) * (k as u64) {
                continue;
            }
            let j = if l > 0 { mono.m / l } else { mono.n / k.max(1) } as usize;
            if coeffs.len() <= j {
                coeffs.resize(j + 1, BigInt::zero());
            }
            coeffs[j] += c;
        }
        UPoly::from_coeffs(coeffs)
    }

    /// Terms maximizing the weight `l*n - k*m`, written as
    /// `X^{n0} Y^{m0} f(X^k Y^l)` with `f(0) != 0`. `(k, l)` must be
    /// primitive with `l >= 1`. Returns `None` for the zero polynomial.
    pub fn leading_form(&self, k: u32, l: u32) -> Option<(Monomial, UPoly)> {
        let weight = |mono: &Monomial| l as i64 * mono.n as i64 - k as i64 * mono.m as i64;
        let top = self.terms.keys().map(weight).max()?;
        let on_line: Vec<(&Monomial, &BigInt)> = self.terms.iter().filter(|(mono, _)| weight(mono) == top).collect();
        let base = *on_line.iter().map(|(mono, _)| *mono).min_by_key(|mono| mono.m)?;
        let mut coeffs = Vec::new();
        for (mono, c) in on_line {
            let j = ((mono.m - base.m) / l) as usize;
            if coeffs.len() <= j {
                coeffs.resize(j + 1, BigInt::zero());
            }
            coeffs[j] = c.clone();
        }
        Some((base, UPoly::from_coeffs(coeffs)))
    }

    /// `f(X^k Y^l)`.
    pub fn substitute_monomial(f: &UPoly, k: u32, l: u32) -> Self {
        Self::from_terms(
            f.coeffs()
                .iter()
                .enumerate()
                .map(|(j, c)| (Monomial::new(k * j as u32, l * j as u32), c.clone())),
        )
    }

    /// Exact quotient in `Z[X, Y]`, or `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        let (lt_d, lc_d) = d.terms.iter().next_back()?;
        let mut r = self.clone();
        let mut q = Self::zero();
        while let Some((lt_r, lc_r)) = r.terms.iter().next_back() {
            if !lt_d.divides(lt_r) {
                return None;
            }
            let (c, rem) = lc_r.div_rem(lc_d);
            if !rem.is_zero() {
                return None;
            }
            let t = Self::term(c, lt_r.n - lt_d.n, lt_r.m - lt_d.m);
            r = r.sub(&t.mul(d));
            q = q.add(&t);
        }
        Some(q)
    }

    /// Greatest common divisor in `Z[X, Y]` (including integer content).
    /// The sign is normalized so that the leading term is positive.
    pub fn gcd(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.normalize_sign();
        }
        if other.is_zero() {
            return self.normalize_sign();
        }
        let a = self.to_y_coeffs();
        let b = other.to_y_coeffs();
        let ca = ycontent(&a);
        let cb = ycontent(&b);
        let c = ca.gcd(&cb);
        let mut a = ydiv(&a, &ca);
        let mut b = ydiv(&b, &cb);
        if a.len() < b.len() {
            core::mem::swap(&mut a, &mut b);
        }
        while !b.is_empty() {
            let r = yprem(&a, &b);
            a = b;
            b = if r.is_empty() { r } else { ydiv(&r, &ycontent(&r)) };
        }
        let a = ydiv(&a, &ycontent(&a));
        let g = Self::from_y_coeffs(&a).mul(&Self::from_y_coeffs(&[c]));
        g.normalize_sign()
    }

    fn normalize_sign(&self) -> Self {
        match self.terms.values().next_back() {
            Some(c) if c.is_negative() => self.neg(),
            _ => self.clone(),
        }
    }

    /// Resultant with respect to `Y`, as a polynomial in `X`
    /// (determinant of the Sylvester matrix).
    pub fn resultant_in_y(&self, other: &Self) -> Result<UPoly, PolyError> {
        let a = self.to_y_coeffs();
        let b = other.to_y_coeffs();
        if a.len() < 2 || b.len() < 2 {
            return Err(PolyError::ConstantInY);
        }
        let res = sylvester_determinant(&a, &b);
        if res.is_zero() {
            Err(PolyError::ZeroResultant)
        } else {
            Ok(res)
        }
    }
}

/// Positive-leading gcd of the `Z[X]` coefficients.
fn ycontent(p: &[UPoly]) -> UPoly {
    let g = p.iter().fold(UPoly::zero(), |g, c| g.gcd(c));
    if g.lc().is_negative() {
        g.neg()
    } else {
        g
    }
}

fn ydiv(p: &[UPoly], c: &UPoly) -> Vec<UPoly> {
    p.iter().map(|row| row.div_exact(c).expect("content divides")).collect()
}

fn ytrim(mut p: Vec<UPoly>) -> Vec<UPoly> {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

/// Pseudo-remainder of `a` by `b` in `Z[X][Y]`.
fn yprem(a: &[UPoly], b: &[UPoly]) -> Vec<UPoly> {
    let db = b.len() - 1;
    let lb = &b[db];
    let mut r: Vec<UPoly> = a.to_vec();
    while r.len() > db {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        let shift = dr - db;
        for (i, row) in r.iter_mut().enumerate() {
            *row = row.mul(lb);
            if i >= shift {
                *row = row.sub(&b[i - shift].mul(&lr));
            }
        }
        r = ytrim(r);
    }
    r
}

/// Bareiss fraction-free determinant of the Sylvester matrix of `a`, `b`
/// (coefficients indexed by `Y`-degree) over `Z[X]`.
fn sylvester_determinant(a: &[UPoly], b: &[UPoly]) -> UPoly {
    let da = a.len() - 1;
    let db = b.len() - 1;
    let n = da + db;
    let mut mat = vec![vec![UPoly::zero(); n]; n];
    for i in 0..db {
        for (j, c) in a.iter().rev().enumerate() {
            mat[i][i + j] = c.clone();
        }
    }
    for i in 0..da {
        for (j, c) in b.iter().rev().enumerate() {
            mat[db + i][i + j] = c.clone();
        }
    }
    bareiss_det(mat)
}

pub(crate) fn bareiss_det(mut mat: Vec<Vec<UPoly>>) -> UPoly {
    let n = mat.len();
    if n == 0 {
        return UPoly::one();
    }
    let mut negate = false;
    let mut prev = UPoly::one();
    for k in 0..n.saturating_sub(1) {
        if mat[k][k].is_zero() {
            match (k + 1..n).find(|&i| !mat[i][k].is_zero()) {
                Some(i) => {
                    mat.swap(k, i);
                    negate = !negate;
                }
                None => return UPoly::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = mat[i][j].mul(&mat[k][k]).sub(&mat[i][k].mul(&mat[k][j]));
                mat[i][j] = num.div_exact(&prev).expect("Bareiss division is exact");
            }
            mat[i][k] = UPoly::zero();
        }
        prev = mat[k][k].clone();
    }
    let det = mat[n - 1][n - 1].clone();
    if negate {
        det.neg()
    } else {
        det
    }
}

impl fmt::Display for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (mono, c) in &self.terms {
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    f.write_char('-')?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let mut factors: Vec<String> = Vec::new();
            if !abs.is_one() || *mono == Monomial::ONE {
                factors.push(alloc::format!("{abs}"));
            }
            match mono.n {
                0 => {}
                1 => factors.push("X".into()),
                n => factors.push(alloc::format!("X^{n}")),
            }
            match mono.m {
                0 => {}
                1 => factors.push("Y".into()),
                m => factors.push(alloc::format!("Y^{m}")),
            }
            f.write_str(&factors.join("*"))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NormalizationError {
    #[error("denominator is identically zero")]
    DivisionByZeroPoly,
    #[error("W(X,0) must equal 1 with integral P(X,0) = Q(X,0) = 1; got numerator constant part {num} and denominator constant part {den}")]
    NotNormalizable { num: String, den: String },
}

/// `W = P/Q` with `gcd(P, Q) = 1` and `P(X, 0) = Q(X, 0) = 1`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct BivariateRational {
    num: SparsePoly,
    den: SparsePoly,
}

impl BivariateRational {
    /// Cancel the common factor of `num/den` and scale both constant terms to
    /// `+1`; rejects inputs where that is impossible.
    pub fn normalize(num: SparsePoly, den: SparsePoly) -> Result<Self, NormalizationError> {
        if den.is_zero() {
            return Err(NormalizationError::DivisionByZeroPoly);
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_one() || g.is_zero() {
            (num, den)
        } else {
            (
                num.div_exact(&g).expect("gcd divides numerator"),
                den.div_exact(&g).expect("gcd divides denominator"),
            )
        };
        let p0 = num.at_y0();
        let q0 = den.at_y0();
        let unit = |u: &UPoly| u.is_constant() && !u.is_zero() && u.lc().abs().is_one();
        if !(unit(&p0) && unit(&q0) && p0 == q0) {
            return Err(NormalizationError::NotNormalizable {
                num: alloc::format!("{p0}"),
                den: alloc::format!("{q0}"),
            });
        }
        let (num, den) = if p0.lc().is_negative() { (num.neg(), den.neg()) } else { (num, den) };
        Ok(BivariateRational { num, den })
    }

    pub fn from_polynomial(p: SparsePoly) -> Result<Self, NormalizationError> {
        Self::normalize(p, SparsePoly::one())
    }

    pub fn one() -> Self {
        BivariateRational { num: SparsePoly::one(), den: SparsePoly::one() }
    }

    pub fn num(&self) -> &SparsePoly {
        &self.num
    }

    pub fn den(&self) -> &SparsePoly {
        &self.den
    }

    /// `W = 1`: no monomial with `m >= 1`.
    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn inverse(&self) -> Self {
        BivariateRational { num: self.den.clone(), den: self.num.clone() }
    }

    pub fn ydeg(&self) -> u32 {
        self.num.ydeg().max(self.den.ydeg())
    }

    /// Mediant bound on `beta`: the largest `n/m` over monomials of `P` and `Q`.
    pub fn slope_bound(&self) -> Option<Slope> {
        self.num.max_slope().max(self.den.max_slope())
    }

    /// Mediant bound on `alpha`: the largest `(n+1)/m` over monomials of `P` and `Q`.
    pub fn pole_abscissa_bound(&self) -> Option<Slope> {
        self.num.max_pole_abscissa().max(self.den.max_pole_abscissa())
    }

    /// `W(x, y)` for real `x` and complex `y`.
    pub fn eval_complex(&self, x: f64, y: Complex64) -> Complex64 {
        self.num.eval_complex(x, y) / self.den.eval_complex(x, y)
    }
}

impl fmt::Display for BivariateRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}
