//! Norm of `g = 3h + 2`, where `h = α + α⁻¹` for a primitive complex `k`-th
//! root of unity `α`, together with the arithmetic facts used to pick the
//! prime `p` for the matrix construction.
//!
//! With `Ψ_k(x) = Σ a_j x^j` of degree `r = φ(k)/2`, the norm is the integer
//! `N(g) = Σ_j (−3)^(r−j)·2^j·a_j`.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{ensure, Error, Result};
use crate::factor::{factorize, is_prime_u64, PrimeFactor};
use crate::intpoly::{euler_phi, real_cyclotomic, IntPoly};

/// A prime factor of `N(g)` that satisfies every congruence the matrix
/// construction needs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdmissiblePrime {
    pub p: BigUint,
    pub residue_2k: u64,
    pub residue_12: u64,
    /// `+1` if `p ≡ 1 (mod 2k)`, `−1` if `p ≡ −1 (mod 2k)`.
    pub epsilon: i8,
}

impl AdmissiblePrime {
    pub fn p_u64(&self) -> Option<u64> {
        self.p.to_u64()
    }
}

/// Congruence evidence for one prime factor, whether or not it passes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeCheck {
    pub p: BigUint,
    pub at_least_5: bool,
    pub residue_2k: u64,
    pub residue_12: u64,
    pub pm1_mod_2k: bool,
    pub pm1_mod_12: bool,
}

impl PrimeCheck {
    pub fn new(p: &BigUint, k: u64) -> Self {
        let residue_2k = (p % (2 * k)).to_u64().unwrap();
        let residue_12 = (p % 12u32).to_u64().unwrap();
        PrimeCheck {
            p: p.clone(),
            at_least_5: *p >= BigUint::from(5u32),
            residue_2k,
            residue_12,
            pm1_mod_2k: residue_2k == 1 || residue_2k == 2 * k - 1,
            pm1_mod_12: residue_12 == 1 || residue_12 == 11,
        }
    }

    pub fn passes(&self) -> bool {
        self.at_least_5 && self.pm1_mod_2k && self.pm1_mod_12
    }

    fn admissible(&self, k: u64) -> Option<AdmissiblePrime> {
        self.passes().then(|| AdmissiblePrime {
            p: self.p.clone(),
            residue_2k: self.residue_2k,
            residue_12: self.residue_12,
            epsilon: if self.residue_2k == 1 { 1 } else { -1 },
        })
        .filter(|_| self.p != BigUint::from(k))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormReport {
    pub k: u64,
    pub r: u64,
    pub psi: IntPoly,
    pub norm: BigInt,
    pub factorization: Vec<PrimeFactor>,
    pub checks: Vec<PrimeCheck>,
    pub admissible: Vec<AdmissiblePrime>,
}

impl NormReport {
    /// Computes the norm, factors it, and classifies every prime factor.
    ///
    /// For prime `k ≥ 5` every factor is required to pass; a failure there is
    /// an arithmetic bug and is reported as such. For composite `k` the checks
    /// are only recorded.
    pub fn compute(k: u64) -> Result<Self> {
        ensure!(k % 2 == 1 && k >= 3, InvalidInput, "k must be odd and >= 3, got {k}");
        let psi = real_cyclotomic(k)?;
        let norm = norm_from_psi(&psi);
        let factorization = if norm.magnitude() >= &BigUint::from(2u32) {
            factorize(&norm)?
        } else {
            Vec::new()
        };
        let checks: Vec<PrimeCheck> = factorization
            .iter()
            .map(|f| PrimeCheck::new(&f.prime, k))
            .collect();
        if k >= 5 && is_prime_u64(k) {
            for c in &checks {
                ensure!(
                    c.passes(),
                    Internal,
                    "prime factor {} of N(g) for prime k={k} fails the congruences",
                    c.p
                );
                ensure!(c.p != BigUint::from(k), Internal, "k divides N(g) for k={k}");
            }
        }
        let admissible = checks.iter().filter_map(|c| c.admissible(k)).collect();
        Ok(NormReport {
            k,
            r: euler_phi(k) / 2,
            psi,
            norm,
            factorization,
            checks,
            admissible,
        })
    }

    /// Product of the prime powers; equals `|N(g)|` for `|N(g)| ≥ 2`.
    pub fn factor_product(&self) -> BigUint {
        self.factorization
            .iter()
            .fold(BigUint::one(), |acc, f| acc * f.prime.pow(f.exponent))
    }

    /// Default prime choice: the smallest admissible one.
    pub fn smallest_admissible(&self) -> Option<&AdmissiblePrime> {
        self.admissible.iter().min_by(|a, b| a.p.cmp(&b.p))
    }
}

fn norm_from_psi(psi: &IntPoly) -> BigInt {
    let r = psi.degree().unwrap_or(0);
    let three = BigInt::from(-3);
    psi.coeffs()
        .iter()
        .enumerate()
        .map(|(j, a)| three.pow((r - j) as u32) * (BigInt::one() << j) * a)
        .sum()
}

/// `N(g)` for odd `k ≥ 3`.
pub fn norm_g(k: u64) -> Result<BigInt> {
    ensure!(k % 2 == 1 && k >= 3, InvalidInput, "k must be odd and >= 3, got {k}");
    Ok(norm_from_psi(&real_cyclotomic(k)?))
}

/// The two sides of the mod-9 congruence together with the prime-`k`
/// specialization `N(g) ≡ −2^((k−3)/2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mod9Evidence {
    pub norm_mod9: u32,
    pub two_term_mod9: u32,
    pub specialized_mod9: u32,
}

impl Mod9Evidence {
    pub fn holds(&self) -> bool {
        self.norm_mod9 == self.two_term_mod9 && self.norm_mod9 == self.specialized_mod9
    }
}

fn mod9(x: &BigInt) -> u32 {
    x.mod_floor(&BigInt::from(9)).to_u32().unwrap()
}

pub fn norm_mod9_evidence(k: u64) -> Result<Mod9Evidence> {
    ensure!(
        k >= 5 && is_prime_u64(k),
        InvalidInput,
        "mod-9 check is stated for odd primes k >= 5, got {k}"
    );
    let psi = real_cyclotomic(k)?;
    let r = psi.degree().unwrap();
    let norm = norm_from_psi(&psi);
    let two = BigInt::from(2);
    let two_term = two.pow(r as u32) - BigInt::from(3) * two.pow(r as u32 - 1) * psi.coeff(r - 1);
    let specialized = -two.pow(((k - 3) / 2) as u32);
    Ok(Mod9Evidence {
        norm_mod9: mod9(&norm),
        two_term_mod9: mod9(&two_term),
        specialized_mod9: mod9(&specialized),
    })
}

pub fn norm_mod9_check(k: u64) -> Result<bool> {
    Ok(norm_mod9_evidence(k)?.holds())
}

/// `N(g) ∉ {0, ±1}` and `gcd(N(g), 6) = 1`.
pub fn unit_check(k: u64) -> Result<bool> {
    let n = norm_g(k)?;
    Ok(n.abs() > BigInt::one() && n.gcd(&BigInt::from(6)).is_one())
}

pub fn admissible_primes(k: u64) -> Result<Vec<AdmissiblePrime>> {
    ensure!(k % 2 == 1 && k >= 5, InvalidInput, "k must be odd and >= 5, got {k}");
    Ok(NormReport::compute(k)?.admissible)
}

/// Chooses the prime used by the construction: `requested` if given (it must
/// be admissible), otherwise the smallest admissible factor.
pub fn select_prime(report: &NormReport, requested: Option<u64>) -> Result<AdmissiblePrime> {
    match requested {
        Some(p) => report
            .admissible
            .iter()
            .find(|a| a.p == BigUint::from(p))
            .cloned()
            .ok_or_else(|| {
                Error::InvalidInput(format!(
                    "{p} is not an admissible prime factor of N(g) = {} for k = {}",
                    report.norm, report.k
                ))
            }),
        None => report.smallest_admissible().cloned().ok_or_else(|| {
            Error::InvalidInput(format!(
                "N(g) = {} has no admissible prime factor for k = {}",
                report.norm, report.k
            ))
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn norms_from_the_table() {
        assert_eq!(norm_g(5).unwrap(), BigInt::from(-11));
        assert_eq!(norm_g(9).unwrap(), BigInt::from(-73));
        assert_eq!(norm_g(29).unwrap(), BigInt::from(3161869));
    }

    #[test]
    fn norm_for_k3_is_minus_one() {
        // h = -1, g = -1: a unit, consistent with there being no valency-3 map
        assert_eq!(norm_g(3).unwrap(), BigInt::from(-1));
        assert!(!unit_check(3).unwrap());
    }

    #[test]
    fn mod9_examples() {
        let e5 = norm_mod9_evidence(5).unwrap();
        assert_eq!((e5.norm_mod9, e5.two_term_mod9, e5.specialized_mod9), (7, 7, 7));
        let e7 = norm_mod9_evidence(7).unwrap();
        assert_eq!(e7.norm_mod9, 5);
        assert!(e7.holds());
        assert!(norm_mod9_check(13).unwrap());
        assert!(norm_mod9_check(9).is_err());
        assert!(norm_mod9_check(3).is_err());
    }

    #[test]
    fn unit_check_examples() {
        assert!(unit_check(5).unwrap());
        assert!(unit_check(7).unwrap());
        assert!(unit_check(11).unwrap());
    }

    #[test]
    fn admissible_examples() {
        let a5 = admissible_primes(5).unwrap();
        assert_eq!(a5.len(), 1);
        assert_eq!(a5[0].p, BigUint::from(11u32));
        assert_eq!((a5[0].residue_2k, a5[0].residue_12, a5[0].epsilon), (1, 11, 1));

        let a19 = admissible_primes(19).unwrap();
        let got: Vec<_> = a19
            .iter()
            .map(|a| (a.p.to_u64().unwrap(), a.residue_2k, a.residue_12, a.epsilon))
            .collect();
        assert_eq!(got, vec![(37, 37, 1, -1), (419, 1, 11, 1)]);

        let a9 = admissible_primes(9).unwrap();
        assert_eq!(a9[0].p, BigUint::from(73u32));
        assert_eq!((a9[0].residue_2k, a9[0].residue_12), (1, 1));
    }

    #[test]
    fn composite_k_reports_without_asserting() {
        for k in [9u64, 15, 21, 25, 27, 33, 35, 45] {
            let rep = NormReport::compute(k).unwrap();
            assert_eq!(rep.checks.len(), rep.factorization.len());
        }
    }

    #[test]
    fn select_prime_policy() {
        let rep = NormReport::compute(19).unwrap();
        assert_eq!(select_prime(&rep, None).unwrap().p, BigUint::from(37u32));
        assert_eq!(select_prime(&rep, Some(419)).unwrap().p, BigUint::from(419u32));
        assert!(select_prime(&rep, Some(13)).is_err());
    }
}
