//! Integer factorization: trial division, Miller–Rabin, and Pollard's rho
//! with Brent's cycle detection.
//!
//! Values below 2^64 take a native path where Miller–Rabin with the first
//! twelve prime bases is deterministic. Larger cofactors use the same bases
//! on `BigUint`; primes found there are flagged as probable.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{ensure, Result};

/// Witness set; deterministic for every n < 3.3·10^24, hence for all u64.
pub const MR_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

const TRIAL_LIMIT: u64 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeFactor {
    pub prime: BigUint,
    pub exponent: u32,
    /// Set when primality rests on Miller–Rabin beyond the deterministic range.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub probable: bool,
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut result = 1;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            result = mul_mod(result, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    result
}

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_BASES {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &MR_BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Miller–Rabin over `MR_BASES`; exact below 2^64, probable above.
pub fn is_probable_prime(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    if n.is_even() {
        return false;
    }
    let one = BigUint::one();
    let n1 = n - &one;
    let s = n1.trailing_zeros().unwrap_or(0);
    let d = &n1 >> s;
    'witness: for &a in &MR_BASES {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x == one || x == n1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// One nontrivial divisor of an odd composite `n`, by Pollard–Brent.
fn rho_brent_u64(n: u64) -> u64 {
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut ys) = (0u64, 2u64, 0u64);
        let (mut g, mut r, mut q) = (1u64, 1u64, 1u64);
        let m = 128;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..m.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = gcd_u64(q, n);
                k += m;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = gcd_u64(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
        c += 1;
    }
}

fn rho_brent_big(n: &BigUint) -> BigUint {
    let mut c = BigUint::one();
    loop {
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut x = BigUint::zero();
        let mut y = BigUint::from(2u32);
        let mut ys = BigUint::zero();
        let mut g = BigUint::one();
        let mut q = BigUint::one();
        let mut r: u64 = 1;
        let m: u64 = 128;
        while g.is_one() {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g.is_one() {
                ys = y.clone();
                for _ in 0..m.min(r - k) {
                    y = f(&y);
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = (q * diff) % n;
                }
                g = q.gcd(n);
                k += m;
            }
            r *= 2;
        }
        if &g == n {
            loop {
                ys = f(&ys);
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(n);
                if !g.is_one() {
                    break;
                }
            }
        }
        if &g != n {
            return g;
        }
        c += 1u32;
    }
}

fn split_u64(n: u64, out: &mut Vec<(BigUint, bool)>) {
    if n == 1 {
        return;
    }
    if is_prime_u64(n) {
        out.push((BigUint::from(n), false));
        return;
    }
    let d = rho_brent_u64(n);
    split_u64(d, out);
    split_u64(n / d, out);
}

fn split(n: BigUint, out: &mut Vec<(BigUint, bool)>) {
    if let Some(small) = n.to_u64() {
        split_u64(small, out);
        return;
    }
    if is_probable_prime(&n) {
        out.push((n, true));
        return;
    }
    let d = rho_brent_big(&n);
    let rest = &n / &d;
    split(d, out);
    split(rest, out);
}

/// Complete factorization of `|n|` as ascending `(prime, exponent)` pairs.
pub fn factorize(n: &BigInt) -> Result<Vec<PrimeFactor>> {
    let mut m = n.magnitude().clone();
    ensure!(m >= BigUint::from(2u32), InvalidInput, "cannot factor {n}: |n| < 2");

    let mut found: Vec<(BigUint, bool)> = Vec::new();
    let mut q = 2u64;
    while q <= TRIAL_LIMIT {
        if m.to_u64().is_some_and(|small| q * q > small) {
            break;
        }
        while (&m % q).is_zero() {
            m /= q;
            found.push((BigUint::from(q), false));
        }
        q += if q == 2 { 1 } else { 2 };
    }
    split(m, &mut found);

    found.sort();
    let mut out: Vec<PrimeFactor> = Vec::new();
    for (p, probable) in found {
        match out.last_mut() {
            Some(last) if last.prime == p => last.exponent += 1,
            _ => out.push(PrimeFactor { prime: p, exponent: 1, probable }),
        }
    }
    Ok(out)
}

/// Factorization of a `u64` as `(prime, exponent)` pairs.
pub fn factorize_u64(n: u64) -> Vec<(u64, u32)> {
    if n < 2 {
        return Vec::new();
    }
    factorize(&BigInt::from(n))
        .expect("n >= 2")
        .into_iter()
        .map(|f| (f.prime.to_u64().expect("factor of a u64"), f.exponent))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pairs(n: i64) -> Vec<(u64, u32)> {
        factorize(&BigInt::from(n))
            .unwrap()
            .into_iter()
            .map(|f| (f.prime.to_u64().unwrap(), f.exponent))
            .collect()
    }

    #[test]
    fn table_values() {
        assert_eq!(pairs(15503), vec![(37, 1), (419, 1)]);
        assert_eq!(pairs(3161869), vec![(59, 1), (53591, 1)]);
        assert_eq!(pairs(-4079), vec![(4079, 1)]);
        assert_eq!(pairs(4), vec![(2, 2)]);
    }

    #[test]
    fn rejects_units_and_zero() {
        assert!(factorize(&BigInt::from(1)).is_err());
        assert!(factorize(&BigInt::from(-1)).is_err());
        assert!(factorize(&BigInt::from(0)).is_err());
    }

    #[test]
    fn semiprime_beyond_trial_division() {
        // 1000003 · 1000033, both past the trial limit
        let f = pairs(1_000_003 * 1_000_033);
        assert_eq!(f, vec![(1_000_003, 1), (1_000_033, 1)]);
    }

    #[test]
    fn big_composite_with_probable_factor() {
        // 1000003 · (2^89 - 1), the latter a Mersenne prime
        let m89 = (BigUint::one() << 89u32) - 1u32;
        let n = BigInt::from(&m89 * 1_000_003u32) * 9;
        let f = factorize(&n).unwrap();
        assert_eq!(f.len(), 3);
        assert_eq!(f[0].prime, BigUint::from(3u32));
        assert_eq!(f[0].exponent, 2);
        assert_eq!(f[1].prime, BigUint::from(1_000_003u32));
        assert!(!f[1].probable);
        assert_eq!(f[2].prime, m89);
        assert!(f[2].probable);
    }

    #[test]
    fn miller_rabin_against_sieve() {
        let n = 20_000usize;
        let mut sieve = vec![true; n];
        sieve[0] = false;
        sieve[1] = false;
        for i in 2..n {
            if sieve[i] {
                for j in (i * i..n).step_by(i) {
                    sieve[j] = false;
                }
            }
        }
        for (i, &prime) in sieve.iter().enumerate() {
            assert_eq!(is_prime_u64(i as u64), prime, "{i}");
        }
        // strong pseudoprime to bases 2..=11
        assert!(!is_prime_u64(2_152_302_898_747));
        assert!(is_prime_u64(18_446_744_073_709_551_557));
    }
}
