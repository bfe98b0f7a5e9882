//! Prime sieves and small arithmetic functions.

use alloc::vec;
use alloc::vec::Vec;

/// All primes `<= n` (sieve of Eratosthenes over odd numbers).
pub fn primes_up_to(n: u64) -> Vec<u64> {
    primes_in_range(2, n + 1)
}

/// Primes in `[lo, hi)`, sieved segment-wise with base primes up to `sqrt(hi)`.
pub fn primes_in_range(lo: u64, hi: u64) -> Vec<u64> {
    let lo = lo.max(2);
    if hi <= lo {
        return Vec::new();
    }
    let root = isqrt(hi - 1);
    let base = if root < 2 { Vec::new() } else { small_sieve(root) };
    let mut out = Vec::new();
    const SEGMENT: u64 = 1 << 16;
    let mut start = lo;
    while start < hi {
        let end = (start + SEGMENT).min(hi);
        let mut composite = vec![false; (end - start) as usize];
        for &p in &base {
            let first = (p * p).max(start.div_ceil(p) * p);
            let mut k = first;
            while k < end {
                composite[(k - start) as usize] = true;
                k += p;
            }
        }
        out.extend((start..end).filter(|&k| !composite[(k - start) as usize]));
        start = end;
    }
    out
}

fn small_sieve(n: u64) -> Vec<u64> {
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut k = i * i;
            while k <= n {
                composite[k] = true;
                k += i;
            }
        }
    }
    out
}

pub fn isqrt(n: u64) -> u64 {
    let mut r = libm::sqrt(n as f64) as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Prime factorization as `(p, exponent)` pairs by trial division.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn mobius(n: u64) -> i64 {
    let f = factorize(n);
    if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

pub fn totient(n: u64) -> u64 {
    factorize(n).iter().fold(n, |acc, &(p, _)| acc / p * (p - 1))
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut out: Vec<u64> = (1..=isqrt(n)).filter(|d| n % d == 0).flat_map(|d| [d, n / d]).collect();
    out.sort_unstable();
    out.dedup();
    out
}
