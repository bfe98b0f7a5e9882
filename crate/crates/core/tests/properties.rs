use std::collections::BTreeMap;

use euler_horizon_core::cyclo::{binomial_product, is_cyclotomic_bivariate};
use euler_horizon_core::expansion::{peel, peel_with_order, PeelOrder};
use euler_horizon_core::geometry::{extremal_witness, reconstruct};
use euler_horizon_core::{BivariateRational, Monomial, SparsePoly, TruncatedSeries};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

/// Polynomial `1 + sum c X^n Y^m` with `1 <= m`, `n, m <= 4`.
fn unit_poly(max_terms: usize) -> impl Strategy<Value = SparsePoly> {
    prop::collection::vec((-3i64..=3, 0u32..=4, 1u32..=4), 0..max_terms).prop_map(|terms| {
        let mut p = SparsePoly::one();
        for (c, n, m) in terms {
            p = p.add(&SparsePoly::term(BigInt::from(c), n, m));
        }
        p
    })
}

fn rational() -> impl Strategy<Value = BivariateRational> {
    (unit_poly(4), unit_poly(4))
        .prop_filter_map("degenerate", |(p, q)| BivariateRational::normalize(p, q).ok().filter(|w| !w.is_one()))
}

/// Exact Sylvester determinant by fraction-field elimination.
fn sylvester_det(f: &[BigInt], g: &[BigInt]) -> BigInt {
    let (df, dg) = (f.len() - 1, g.len() - 1);
    let size = df + dg;
    if size == 0 {
        return BigInt::one();
    }
    let mut rows: Vec<Vec<BigRational>> = Vec::new();
    for (coeffs, copies) in [(f, dg), (g, df)] {
        for shift in 0..copies {
            let mut row = vec![BigRational::zero(); size];
            for (i, c) in coeffs.iter().rev().enumerate() {
                row[shift + i] = BigRational::from_integer(c.clone());
            }
            rows.push(row);
        }
    }
    let mut det = BigRational::one();
    for col in 0..size {
        let Some(pivot) = (col..size).find(|&r| !rows[r][col].is_zero()) else {
            return BigInt::zero();
        };
        if pivot != col {
            rows.swap(pivot, col);
            det = -det;
        }
        let p = rows[col][col].clone();
        det *= &p;
        for r in col + 1..size {
            let factor = &rows[r][col] / &p;
            for c in col..size {
                let v = &rows[col][c] * &factor;
                rows[r][c] -= v;
            }
        }
    }
    assert!(det.is_integer());
    det.to_integer()
}

/// `y`-coefficients of `p(x0, y)` up to the formal `y`-degree.
fn y_coeffs_at(p: &SparsePoly, x0: i64) -> Vec<BigInt> {
    p.to_y_coeffs().iter().map(|c| c.eval(&BigInt::from(x0))).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn series_times_inverse_is_one(w in rational()) {
        let s = TruncatedSeries::expand(&w, 10).unwrap();
        let inv = TruncatedSeries::expand(&w.inverse(), 10).unwrap();
        prop_assert!(s.mul(&inv).is_one());
    }

    #[test]
    fn binomial_powers_cancel(w in rational(), n in 0u32..4, m in 1u32..4, e in -5i64..=5) {
        let s = TruncatedSeries::expand(&w, 10).unwrap();
        let e = BigInt::from(e);
        let back = s.mul_binomial_power(n, m, &e).mul_binomial_power(n, m, &-e);
        prop_assert_eq!(back, s);
    }

    #[test]
    fn resultant_matches_sylvester(p in unit_poly(4), q in unit_poly(4)) {
        prop_assume!(p.ydeg() > 0 && q.ydeg() > 0);
        let res = p.resultant_in_y(&q);
        for x0 in -10i64..10 {
            let expected = sylvester_det(&y_coeffs_at(&p, x0), &y_coeffs_at(&q, x0));
            match &res {
                Ok(r) => prop_assert_eq!(r.eval(&BigInt::from(x0)), expected),
                Err(_) => prop_assert!(expected.is_zero()),
            }
        }
    }

    #[test]
    fn peel_reconstructs(w in rational()) {
        let s = TruncatedSeries::expand(&w, 12).unwrap();
        let e = peel(&s).unwrap();
        prop_assert_eq!(e.reconstruct(), s.clone());
        prop_assert_eq!(peel_with_order(&s, PeelOrder::XMajor).unwrap(), e.clone());
        let short = peel(&TruncatedSeries::expand(&w, 6).unwrap()).unwrap();
        prop_assert_eq!(short, e.restrict(6));
    }

    #[test]
    fn binomial_products_round_trip(
        raw in prop::collection::btree_map((0u32..4, 1u32..4), prop_oneof![-2i64..=-1, 1i64..=2], 1..4)
    ) {
        let factors: BTreeMap<Monomial, i64> = raw.into_iter().map(|((n, m), e)| (Monomial::new(n, m), e)).collect();
        let (num, den) = binomial_product(&factors);
        let w = BivariateRational::normalize(num, den).unwrap();
        let r = is_cyclotomic_bivariate(&w);
        prop_assert!(r.is_cyclotomic);
        prop_assert_eq!(r.factors, factors);
    }

    #[test]
    fn rational_sequences_are_recovered(
        num in prop::collection::vec(-4i64..=4, 1..4),
        den in prop::collection::vec(-3i64..=3, 1..3),
    ) {
        let n = euler_horizon_core::UPoly::from_i64(&num);
        let mut d_coeffs = vec![1i64];
        d_coeffs.extend(den);
        let d = euler_horizon_core::UPoly::from_i64(&d_coeffs);
        let terms = euler_horizon_core::geometry::series_quotient(&n, &d, 16);
        let (rn, rd) = reconstruct(&terms).expect("order within half the terms");
        // N/D == RN/RD as power series
        prop_assert_eq!(n.mul(&rd), rn.mul(&d));
    }

    #[test]
    fn extremal_witnesses_separate(points in prop::collection::btree_set((0u32..6, 0u32..6), 2..8)) {
        let pts: Vec<Monomial> = points.into_iter().filter(|&(n, m)| n + m > 0).map(|(n, m)| Monomial::new(n, m)).collect();
        for (i, &a) in pts.iter().enumerate() {
            let others: Vec<Monomial> = pts.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, b)| *b).collect();
            if let Some((u, v)) = extremal_witness(a, &others) {
                let phi = |p: Monomial| u * p.n as i64 + v * p.m as i64;
                prop_assert!(phi(a) > 0);
                for b in &others {
                    prop_assert!(phi(a) < phi(*b));
                }
            }
        }
    }
}

#[test]
fn extremal_points_exist() {
    let pts = [Monomial::new(1, 1), Monomial::new(2, 1), Monomial::new(0, 2), Monomial::new(3, 3)];
    let extremal = euler_horizon_core::geometry::extremal_points(&pts);
    assert!(extremal.contains(&Monomial::new(1, 1)));
    assert!(!extremal.contains(&Monomial::new(3, 3)));
}
