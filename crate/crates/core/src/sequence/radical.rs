//! Radical inverses, optionally with a digit permutation applied.

use crate::error::{invalid, Result};

/// Largest integer below which every `f64` integer is exact.
const EXACT_LIMIT: u128 = 1 << 53;

/// Base-`base` digit reversal of `k` placed after the radix point.
///
/// `k = sum a_j base^j` maps to `sum a_j base^-(j+1)`. The result is
/// correctly rounded whenever `base^digits(k) < 2^53`.
pub fn radix_inverse(k: u64, base: u64) -> Result<f64> {
    if base < 2 {
        return Err(invalid(format!("radix_inverse base must be >= 2, got {base}")));
    }
    Ok(permuted_radix_inverse(k, base, None))
}

/// Radical inverse of `k` with `perm` applied to every significant digit.
///
/// `perm` must be a permutation of `0..base` with `perm[0] == 0`.
pub fn scrambled_radix_inverse(k: u64, base: u64, perm: &[u64]) -> Result<f64> {
    if base < 2 {
        return Err(invalid(format!("radix_inverse base must be >= 2, got {base}")));
    }
    check_digit_permutation(base, perm)?;
    Ok(permuted_radix_inverse(k, base, Some(perm)))
}

pub(crate) fn check_digit_permutation(base: u64, perm: &[u64]) -> Result<()> {
    if perm.len() as u64 != base {
        return Err(invalid(format!(
            "digit permutation for base {base} has {} entries",
            perm.len()
        )));
    }
    if perm[0] != 0 {
        return Err(invalid("digit permutation must fix 0"));
    }
    let mut seen = vec![false; perm.len()];
    for &p in perm {
        if p >= base || std::mem::replace(&mut seen[p as usize], true) {
            return Err(invalid(format!("{perm:?} is not a permutation of 0..{base}")));
        }
    }
    Ok(())
}

pub(crate) fn permuted_radix_inverse(mut k: u64, base: u64, perm: Option<&[u64]>) -> f64 {
    let digit = |a: u64| perm.map_or(a, |p| p[a as usize]);
    let b = base as u128;
    let mut numerator: u128 = 0;
    let mut denominator: u128 = 1;
    let mut digits = Vec::new();
    while k > 0 {
        let a = digit(k % base);
        digits.push(a);
        numerator = numerator * b + a as u128;
        denominator = denominator.saturating_mul(b);
        k /= base;
    }
    if denominator <= EXACT_LIMIT {
        return numerator as f64 / denominator as f64;
    }
    // Too many digits for an exact ratio: nested evaluation from the least
    // significant reversed digit outwards.
    let inv = 1.0 / base as f64;
    let value = digits
        .iter()
        .rev()
        .fold(0.0, |acc, &a| (acc + a as f64) * inv);
    super::below_one(value)
}

/// The first `count` primes in ascending order.
pub fn first_primes(count: usize) -> Vec<u64> {
    let mut primes: Vec<u64> = Vec::with_capacity(count);
    let mut candidate = 2u64;
    while primes.len() < count {
        if primes
            .iter()
            .take_while(|&&p| p * p <= candidate)
            .all(|&p| !candidate.is_multiple_of(p))
        {
            primes.push(candidate);
        }
        candidate += 1;
    }
    primes
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub(crate) fn check_bases(bases: &[u64]) -> Result<()> {
    for (i, &p) in bases.iter().enumerate() {
        if p < 2 {
            return Err(invalid(format!("radical-inverse base {p} must be >= 2")));
        }
        if let Some(&q) = bases[..i].iter().find(|&&q| gcd(p, q) != 1) {
            return Err(invalid(format!("bases {q} and {p} are not coprime")));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn radix_inverse_examples() {
        assert_eq!(radix_inverse(1, 2).unwrap(), 0.5);
        assert_eq!(radix_inverse(0, 7).unwrap(), 0.0);
        // 5 = 12 in base 3, reversed: 2/3 + 1/9
        assert_eq!(radix_inverse(5, 3).unwrap(), 7.0 / 9.0);
        assert_eq!(radix_inverse(6, 2).unwrap(), 0.375);
    }

    #[test]
    fn rejects_small_base() {
        assert!(radix_inverse(3, 1).is_err());
        assert!(radix_inverse(3, 0).is_err());
    }

    #[test]
    fn scrambled_example() {
        // 5 = (a0, a1) = (2, 1); pi = (0 2 1) maps them to (1, 2): 1/3 + 2/9
        let v = scrambled_radix_inverse(5, 3, &[0, 2, 1]).unwrap();
        assert_eq!(v, 5.0 / 9.0);
        assert_eq!(
            scrambled_radix_inverse(5, 3, &[0, 1, 2]).unwrap(),
            radix_inverse(5, 3).unwrap()
        );
        assert!(scrambled_radix_inverse(5, 3, &[1, 0, 2]).is_err());
        assert!(scrambled_radix_inverse(5, 3, &[0, 1, 1]).is_err());
    }

    #[test]
    fn long_expansions_stay_below_one() {
        let v = radix_inverse(u64::MAX, 2).unwrap();
        assert!(v < 1.0 && v > 0.999);
        let v = radix_inverse(u64::MAX, 3).unwrap();
        assert!((0.0..1.0).contains(&v));
        // digits beyond 2^53 fall back to the nested evaluation
        let w = radix_inverse(3u64.pow(40) - 1, 3).unwrap();
        assert!((w - (1.0 - 3f64.powi(-40))).abs() < 1e-15);
    }

    #[test]
    fn primes() {
        assert_eq!(first_primes(8), vec![2, 3, 5, 7, 11, 13, 17, 19]);
        assert!(check_bases(&[2, 3, 5]).is_ok());
        assert!(check_bases(&[2, 9, 4]).is_err());
        assert!(check_bases(&[4, 9, 25]).is_ok());
    }
}
