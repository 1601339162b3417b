//! Small integer helpers: primality, factorization, binomials.

use crate::group::GroupError;

pub fn is_prime(n: usize) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Smallest prime dividing `n`; `n` must be at least 2.
pub fn smallest_prime_divisor(n: usize) -> Result<usize, GroupError> {
    if n < 2 {
        return Err(GroupError::InvalidParameters(format!(
            "smallest prime divisor undefined for n = {n}"
        )));
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return Ok(d);
        }
        d += 1;
    }
    Ok(n)
}

/// Distinct prime divisors in increasing order.
pub fn prime_divisors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// A composite number is an integer greater than 1 that is not prime.
pub fn is_composite(n: usize) -> bool {
    n > 1 && !is_prime(n)
}

pub fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

pub fn pow_mod(base: usize, mut exp: usize, m: usize) -> usize {
    if m == 1 {
        return 0;
    }
    let mut b = (base % m) as u128;
    let mut acc = 1u128;
    let m = m as u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as usize
}

/// Binomial coefficient, saturating at `u64::MAX`.
pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smallest_prime_examples() {
        assert_eq!(smallest_prime_divisor(27).unwrap(), 3);
        assert_eq!(smallest_prime_divisor(14).unwrap(), 2);
        assert_eq!(smallest_prime_divisor(35).unwrap(), 5);
        assert_eq!(smallest_prime_divisor(2).unwrap(), 2);
        assert_eq!(smallest_prime_divisor(97).unwrap(), 97);
        assert!(smallest_prime_divisor(1).is_err());
        assert!(smallest_prime_divisor(0).is_err());
    }

    #[test]
    fn divisors_and_composites() {
        assert_eq!(prime_divisors(45), vec![3, 5]);
        assert_eq!(prime_divisors(64), vec![2]);
        assert!(is_composite(9));
        assert!(!is_composite(7));
        assert!(!is_composite(1));
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(26, 10), 5_311_735);
        assert_eq!(binomial(14, 6), 3003);
        assert_eq!(binomial(20, 8), 125_970);
        assert_eq!(binomial(3, 5), 0);
        assert_eq!(binomial(5, 0), 1);
    }

    #[test]
    fn modular_power() {
        assert_eq!(pow_mod(4, 3, 9), 1);
        assert_eq!(pow_mod(2, 3, 7), 1);
        assert_eq!(pow_mod(3, 0, 1), 0);
    }
}
