//! Power series in `Y` with polynomial-in-`X` coefficients, truncated at
//! `Y^M`, over the integers.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::poly::{BivariateRational, Monomial, SparsePoly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("W = 1 has no monomial with positive Y-degree")]
    DegenerateInput,
    #[error("Y-degree bound must be at least 1")]
    BoundTooSmall,
}

/// Coefficients `a_{n,m}` for `m <= M`, stored densely per `m`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TruncatedSeries {
    rows: Vec<Vec<BigInt>>,
}

fn trim(row: &mut Vec<BigInt>) {
    while row.last().is_some_and(Zero::is_zero) {
        row.pop();
    }
}

fn add_into(row: &mut Vec<BigInt>, n: usize, c: &BigInt) {
    if row.len() <= n {
        row.resize(n + 1, BigInt::zero());
    }
    row[n] += c;
}

/// Coefficients of `(1 - T)^e` up to `T^kmax`, via `h_{k+1} = h_k (k - e)/(k + 1)`.
pub fn binomial_power_coeffs(e: &BigInt, kmax: usize) -> Vec<BigInt> {
    let mut h = Vec::with_capacity(kmax + 1);
    h.push(BigInt::one());
    for k in 0..kmax {
        let next = &h[k] * (BigInt::from(k) - e) / BigInt::from(k + 1);
        if next.is_zero() {
            break;
        }
        h.push(next);
    }
    h
}

impl TruncatedSeries {
    /// The series `1` with bound `M`.
    pub fn one(bound: u32) -> Self {
        let mut rows = vec![Vec::new(); bound as usize + 1];
        rows[0] = vec![BigInt::one()];
        TruncatedSeries { rows }
    }

    /// A polynomial reduced modulo `Y^{M+1}`.
    pub fn from_poly(p: &SparsePoly, bound: u32) -> Self {
        let mut rows = vec![Vec::new(); bound as usize + 1];
        for (mono, c) in p.terms() {
            if mono.m <= bound {
                add_into(&mut rows[mono.m as usize], mono.n as usize, c);
            }
        }
        rows.iter_mut().for_each(trim);
        TruncatedSeries { rows }
    }

    /// Expansion of `W = P/Q` modulo `Y^{M+1}`. `1/Q` is the geometric
    /// series `sum (1 - Q)^k`, evaluated by Horner's rule.
    pub fn expand(w: &BivariateRational, bound: u32) -> Result<Self, SeriesError> {
        if bound == 0 {
            return Err(SeriesError::BoundTooSmall);
        }
        if w.is_one() {
            return Err(SeriesError::DegenerateInput);
        }
        let r = SparsePoly::one().sub(w.den());
        let mut inv = Self::one(bound);
        if !r.is_zero() {
            for _ in 0..bound {
                inv = inv.mul_poly(&r).add(&Self::one(bound));
            }
        }
        Ok(inv.mul_poly(w.num()))
    }

    pub fn bound(&self) -> u32 {
        (self.rows.len() - 1) as u32
    }

    pub fn coeff(&self, n: u32, m: u32) -> BigInt {
        self.rows
            .get(m as usize)
            .and_then(|row| row.get(n as usize))
            .cloned()
            .unwrap_or_default()
    }

    /// Coefficients of `Y^m` indexed by the `X`-exponent.
    pub fn row(&self, m: u32) -> &[BigInt] {
        &self.rows[m as usize]
    }

    /// Nonzero coefficients in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (Monomial, &BigInt)> {
        self.rows.iter().enumerate().flat_map(|(m, row)| {
            row.iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(move |(n, c)| (Monomial::new(n as u32, m as u32), c))
        })
    }

    pub fn is_one(&self) -> bool {
        self.rows[0].len() == 1 && self.rows[0][0].is_one() && self.rows[1..].iter().all(Vec::is_empty)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut rows = self.rows.clone();
        for (row, orow) in rows.iter_mut().zip(&other.rows) {
            for (n, c) in orow.iter().enumerate() {
                add_into(row, n, c);
            }
            trim(row);
        }
        TruncatedSeries { rows }
    }

    /// Product with a polynomial, truncated at the same bound.
    pub fn mul_poly(&self, p: &SparsePoly) -> Self {
        let bound = self.rows.len();
        let mut rows = vec![Vec::new(); bound];
        for (mono, c) in p.terms() {
            let (dn, dm) = (mono.n as usize, mono.m as usize);
            for (m, row) in self.rows.iter().enumerate() {
                if m + dm >= bound {
                    break;
                }
                for (n, a) in row.iter().enumerate() {
                    if !a.is_zero() {
                        add_into(&mut rows[m + dm], n + dn, &(a * c));
                    }
                }
            }
        }
        rows.iter_mut().for_each(trim);
        TruncatedSeries { rows }
    }

    /// Product of two series with the same bound.
    pub fn mul(&self, other: &Self) -> Self {
        let bound = self.rows.len();
        let mut rows = vec![Vec::new(); bound];
        for (m1, r1) in self.rows.iter().enumerate() {
            for (m2, r2) in other.rows.iter().enumerate().take(bound - m1) {
                for (n1, a) in r1.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
                    for (n2, b) in r2.iter().enumerate().filter(|(_, b)| !b.is_zero()) {
                        add_into(&mut rows[m1 + m2], n1 + n2, &(a * b));
                    }
                }
            }
        }
        rows.iter_mut().for_each(trim);
        TruncatedSeries { rows }
    }

    /// `self * (1 - X^n Y^m)^e`, exact modulo `Y^{M+1}`. Panics if `m == 0`.
    pub fn mul_binomial_power(&self, n: u32, m: u32, e: &BigInt) -> Self {
        let mut out = self.clone();
        out.mul_binomial_power_in_place(n, m, e);
        out
    }

    /// In-place form of [`mul_binomial_power`](Self::mul_binomial_power).
    /// Rows are updated from the top down, so every update reads rows that
    /// still hold their old values.
    pub fn mul_binomial_power_in_place(&mut self, n: u32, m: u32, e: &BigInt) {
        assert!(m >= 1, "binomial factor must involve Y");
        if e.is_zero() {
            return;
        }
        let (n, m) = (n as usize, m as usize);
        let top = self.rows.len() - 1;
        let h = binomial_power_coeffs(e, top / m);
        for t in (m..=top).rev() {
            let mut row = core::mem::take(&mut self.rows[t]);
            for (k, hk) in h.iter().enumerate().skip(1) {
                if k * m > t {
                    break;
                }
                for (j, a) in self.rows[t - k * m].iter().enumerate() {
                    if !a.is_zero() {
                        add_into(&mut row, j + k * n, &(a * hk));
                    }
                }
            }
            trim(&mut row);
            self.rows[t] = row;
        }
    }
}
