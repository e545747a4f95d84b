//! Small-integer number theory: factorization, divisors, Möbius function,
//! primorials and gcd index classes.
//!
//! Everything here is trial division. The largest values touched are the
//! candidate orders of the k-audit (a few million), so nothing cleverer is
//! needed.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumberTheoryError {
    #[error("expected a positive integer, got {0}")]
    NotPositive(u64),
    #[error("primorial index {0} outside 1..=20")]
    OutOfRange(u32),
    #[error("order {0} is too small, need n >= 2")]
    OrderTooSmall(u64),
}

/// Canonical prime factorization, primes ascending.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Factorization {
    pub value: u64,
    pub factors: Vec<(u64, u32)>,
}

impl Factorization {
    /// Number of distinct primes.
    pub fn r(&self) -> u32 {
        self.factors.len() as u32
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }

    pub fn product(&self) -> u64 {
        self.factors.iter().map(|&(p, e)| p.pow(e)).product()
    }
}

impl fmt::Display for Factorization {
    /// `2^3*3*5`; `1` for the empty product.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("1");
        }
        for (i, &(p, e)) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            if e == 1 {
                write!(f, "{p}")?;
            } else {
                write!(f, "{p}^{e}")?;
            }
        }
        Ok(())
    }
}

pub fn factorize(v: u64) -> Result<Factorization, NumberTheoryError> {
    if v == 0 {
        return Err(NumberTheoryError::NotPositive(v));
    }
    let mut factors = Vec::new();
    let mut rest = v;
    let mut push = |p: u64, rest: &mut u64| {
        let mut e = 0;
        while *rest % p == 0 {
            *rest /= p;
            e += 1;
        }
        if e > 0 {
            factors.push((p, e));
        }
    };
    push(2, &mut rest);
    push(3, &mut rest);
    // 6k ± 1 wheel
    let mut p = 5;
    while p * p <= rest {
        push(p, &mut rest);
        push(p + 2, &mut rest);
        p += 6;
    }
    if rest > 1 {
        factors.push((rest, 1));
    }
    Ok(Factorization { value: v, factors })
}

pub fn mobius(v: u64) -> Result<i8, NumberTheoryError> {
    let f = factorize(v)?;
    Ok(if !f.is_squarefree() {
        0
    } else if f.factors.len() % 2 == 0 {
        1
    } else {
        -1
    })
}

pub fn divisors(v: u64) -> Result<Vec<u64>, NumberTheoryError> {
    let f = factorize(v)?;
    let mut out = vec![1u64];
    for &(p, e) in &f.factors {
        let len = out.len();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                out.push(out[i] * pk);
            }
        }
    }
    out.sort_unstable();
    Ok(out)
}

pub fn is_prime(v: u64) -> bool {
    v >= 2 && factorize(v).map(|f| f.factors == [(v, 1)]).unwrap_or(false)
}

const FIRST_PRIMES: [u128; 20] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71,
];

/// Product of the first `r` primes, `1 <= r <= 20`. `p_20#` is about `5.6e26`,
/// hence `u128`.
pub fn primorial(r: u32) -> Result<u128, NumberTheoryError> {
    if !(1..=20).contains(&r) {
        return Err(NumberTheoryError::OutOfRange(r));
    }
    Ok(FIRST_PRIMES[..r as usize].iter().product())
}

/// Partition of `1..n` by `gcd(j, n)`, keyed by the divisor `m < n`.
pub fn gcd_classes(n: u64) -> Result<BTreeMap<u64, Vec<u64>>, NumberTheoryError> {
    if n < 2 {
        return Err(NumberTheoryError::OrderTooSmall(n));
    }
    let mut classes: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
    for m in divisors(n)? {
        if m < n {
            classes.insert(m, Vec::new());
        }
    }
    for j in 1..n {
        classes.get_mut(&gcd(j, n)).expect("gcd divides n").push(j);
    }
    Ok(classes)
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Exact integer square root when `v` is a perfect square.
pub fn exact_sqrt(v: u64) -> Option<u64> {
    let mut r = (v as f64).sqrt() as u64;
    while r * r > v {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= v {
        r += 1;
    }
    (r * r == v).then_some(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorize_examples() {
        let f = factorize(120).unwrap();
        assert_eq!(f.factors, vec![(2, 3), (3, 1), (5, 1)]);
        assert_eq!(f.r(), 3);
        assert_eq!(f.to_string(), "2^3*3*5");
        let f = factorize(924).unwrap();
        assert_eq!(f.factors, vec![(2, 2), (3, 1), (7, 1), (11, 1)]);
        assert_eq!(f.r(), 4);
        let f = factorize(1).unwrap();
        assert!(f.factors.is_empty());
        assert_eq!(f.r(), 0);
        assert_eq!(factorize(0), Err(NumberTheoryError::NotPositive(0)));
        assert_eq!(factorize(9_699_691).unwrap().product(), 9_699_691);
    }

    #[test]
    fn mobius_examples() {
        assert_eq!(mobius(30).unwrap(), -1);
        assert_eq!(mobius(15).unwrap(), 1);
        assert_eq!(mobius(4).unwrap(), 0);
        assert_eq!(mobius(1).unwrap(), 1);
        assert!(mobius(0).is_err());
    }

    #[test]
    fn divisor_examples() {
        assert_eq!(
            divisors(120).unwrap(),
            vec![1, 2, 3, 4, 5, 6, 8, 10, 12, 15, 20, 24, 30, 40, 60, 120]
        );
        assert_eq!(divisors(924).unwrap().len(), 24);
        assert_eq!(divisors(1).unwrap(), vec![1]);
        assert!(divisors(0).is_err());
    }

    #[test]
    fn primorial_examples() {
        assert_eq!(primorial(8).unwrap(), 9_699_690);
        assert_eq!(primorial(1).unwrap(), 2);
        assert_eq!(primorial(3).unwrap(), 30);
        assert_eq!(primorial(0), Err(NumberTheoryError::OutOfRange(0)));
        assert_eq!(primorial(21), Err(NumberTheoryError::OutOfRange(21)));
    }

    #[test]
    fn gcd_class_examples() {
        let c = gcd_classes(120).unwrap();
        let low: Vec<u64> = c[&4].iter().copied().filter(|&j| j <= 60).collect();
        assert_eq!(low, vec![4, 28, 44, 52]);
        assert_eq!(c[&4], vec![4, 28, 44, 52, 68, 76, 92, 116]);

        let c = gcd_classes(6).unwrap();
        assert_eq!(c.len(), 3);
        assert_eq!(c[&1], vec![1, 5]);
        assert_eq!(c[&2], vec![2, 4]);
        assert_eq!(c[&3], vec![3]);

        let c = gcd_classes(4).unwrap();
        assert_eq!(c[&1], vec![1, 3]);
        assert_eq!(c[&2], vec![2]);
        assert_eq!(gcd_classes(1), Err(NumberTheoryError::OrderTooSmall(1)));
    }

    #[test]
    fn sqrt_and_primes() {
        assert_eq!(exact_sqrt(144), Some(12));
        assert_eq!(exact_sqrt(24), None);
        assert_eq!(exact_sqrt(0), Some(0));
        assert!(is_prime(2) && is_prime(47) && !is_prime(1) && !is_prime(49));
    }
}
