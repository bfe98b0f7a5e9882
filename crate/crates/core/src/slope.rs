use core::cmp::Ordering;
use core::fmt;

use num_integer::Integer;

/// A non-negative rational `num/den` in lowest terms.
///
/// Abscissae and ray directions are always ratios of lattice coordinates, so
/// they are kept exact.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Slope {
    num: u64,
    den: u64,
}

impl Slope {
    /// Panics if `den == 0`.
    pub fn new(num: u64, den: u64) -> Self {
        assert!(den != 0, "slope with zero denominator");
        let g = num.gcd(&den);
        Slope { num: num / g, den: den / g }
    }

    pub fn integer(n: u64) -> Self {
        Slope { num: n, den: 1 }
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    pub fn is_integer(&self) -> bool {
        self.den == 1
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// `self + 1/d`.
    pub fn plus_reciprocal(&self, d: u64) -> Slope {
        Slope::new(self.num * d + self.den, self.den * d)
    }

    /// Sign of `n*den - num*m`, i.e. compares `n/m` against this slope.
    pub fn cmp_ratio(&self, n: u64, m: u64) -> Ordering {
        (n as u128 * self.den as u128).cmp(&(self.num as u128 * m as u128))
    }
}

impl Ord for Slope {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num as u128 * other.den as u128).cmp(&(other.num as u128 * self.den as u128))
    }
}

impl PartialOrd for Slope {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}
