//! Dense univariate polynomials with exact integer coefficients.
//!
//! Besides ring arithmetic this module builds the two polynomial families the
//! construction depends on: the cyclotomic polynomial `Φ_k` and the real
//! cyclotomic polynomial `Ψ_k`, the minimal polynomial of `2cos(2π/k)`.
//! Everything is exact; no step rounds.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{ensure, Error, Result};

/// Polynomial `Σ coeffs[j]·x^j`, stored with no trailing zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    /// Builds a polynomial from coefficients in ascending degree order.
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// `c·x^n`.
    pub fn monomial(c: BigInt, n: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); n + 1];
        coeffs[n] = c;
        Self::new(coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Coefficient of `x^j` (zero past the degree).
    pub fn coeff(&self, j: usize) -> BigInt {
        self.coeffs.get(j).cloned().unwrap_or_default()
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(One::is_one)
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Gcd of the coefficients (non-negative); zero for the zero polynomial.
    pub fn content(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::zero(), |acc, c| acc.gcd(c))
    }

    fn div_scalar_exact(&self, c: &BigInt) -> Result<Self> {
        let mut out = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            let (q, r) = a.div_rem(c);
            ensure!(r.is_zero(), Internal, "coefficient {a} not divisible by {c}");
            out.push(q);
        }
        Ok(Self::new(out))
    }

    /// Quotient and remainder for a divisor whose leading coefficient is a unit.
    pub fn div_rem_monic(&self, divisor: &IntPoly) -> Result<(IntPoly, IntPoly)> {
        let dd = divisor
            .degree()
            .ok_or_else(|| Error::InvalidInput("division by the zero polynomial".into()))?;
        let lc = divisor.leading().unwrap();
        ensure!(
            lc.abs().is_one(),
            InvalidInput,
            "divisor leading coefficient {lc} is not a unit"
        );
        let mut rem = self.coeffs.clone();
        let Some(nd) = self.degree().filter(|&nd| nd >= dd) else {
            return Ok((IntPoly::zero(), self.clone()));
        };
        let mut quot = vec![BigInt::zero(); nd - dd + 1];
        for i in (0..=nd - dd).rev() {
            let q = &rem[i + dd] * lc;
            if q.is_zero() {
                continue;
            }
            for (j, c) in divisor.coeffs.iter().enumerate() {
                rem[i + j] -= &q * c;
            }
            quot[i] = q;
        }
        Ok((IntPoly::new(quot), IntPoly::new(rem)))
    }

    /// Exact division; fails if the remainder is nonzero.
    pub fn div_exact(&self, divisor: &IntPoly) -> Result<IntPoly> {
        let (q, r) = self.div_rem_monic(divisor)?;
        ensure!(r.is_zero(), Internal, "inexact division, remainder {r}");
        Ok(q)
    }

    /// Pseudo-remainder `prem(self, b) = lc(b)^(deg self - deg b + 1)·self mod b`.
    pub fn pseudo_rem(&self, b: &IntPoly) -> Result<IntPoly> {
        let db = b
            .degree()
            .ok_or_else(|| Error::InvalidInput("pseudo-division by zero".into()))?;
        let Some(da) = self.degree().filter(|&da| da >= db) else {
            return Ok(self.clone());
        };
        let lc = b.leading().unwrap();
        let mut rem = self.coeffs.clone();
        let mut steps = da - db + 1;
        for i in (db..=da).rev() {
            let lead = rem[i].clone();
            for c in rem.iter_mut().take(i + 1) {
                *c *= lc;
            }
            if !lead.is_zero() {
                for (j, bc) in b.coeffs.iter().enumerate() {
                    rem[i - db + j] -= &lead * bc;
                }
            }
            rem.truncate(i);
            steps -= 1;
        }
        debug_assert_eq!(steps, 0);
        Ok(IntPoly::new(rem))
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (j, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            match (j, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (1, true) => write!(f, "x")?,
                (1, false) => write!(f, "{a}x")?,
                (_, true) => write!(f, "x^{j}")?,
                (_, false) => write!(f, "{a}x^{j}")?,
            }
        }
        Ok(())
    }
}

impl Add for &IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new((0..n).map(|j| self.coeff(j) + rhs.coeff(j)).collect())
    }
}

impl Sub for &IntPoly {
    type Output = IntPoly;
    fn sub(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new((0..n).map(|j| self.coeff(j) - rhs.coeff(j)).collect())
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: &IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }
}

/// Euler's totient.
pub fn euler_phi(mut n: u64) -> u64 {
    let mut result = n;
    let mut q = 2;
    while q * q <= n {
        if n % q == 0 {
            while n % q == 0 {
                n /= q;
            }
            result -= result / q;
        }
        q += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

fn cyclotomic_memo(k: u64, memo: &mut HashMap<u64, IntPoly>) -> Result<IntPoly> {
    if let Some(p) = memo.get(&k) {
        return Ok(p.clone());
    }
    let mut num = IntPoly::monomial(BigInt::one(), k as usize);
    num = &num - &IntPoly::one();
    for d in (1..k).filter(|d| k % d == 0) {
        let phi_d = cyclotomic_memo(d, memo)?;
        num = num.div_exact(&phi_d)?;
    }
    memo.insert(k, num.clone());
    Ok(num)
}

/// The `k`-th cyclotomic polynomial `Φ_k`, by exact division of `y^k − 1`
/// by `Φ_d` for every proper divisor `d` of `k`.
pub fn cyclotomic(k: u64) -> Result<IntPoly> {
    ensure!(k >= 1, InvalidInput, "cyclotomic index must be positive");
    cyclotomic_memo(k, &mut HashMap::new())
}

fn binomial_row(j: usize) -> Vec<BigInt> {
    let mut row = vec![BigInt::one()];
    for i in 0..j {
        let next = &row[i] * BigInt::from(j - i) / BigInt::from(i + 1);
        row.push(next);
    }
    row
}

/// Expands `y^r·P(y + 1/y)` as a polynomial in `y` (requires `deg P ≤ r`).
pub fn palindromic_expansion(poly: &IntPoly, r: usize) -> IntPoly {
    let mut out = vec![BigInt::zero(); 2 * r + 1];
    for (j, a) in poly.coeffs().iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        // (y + 1/y)^j = Σ_i C(j,i) y^(j − 2i)
        for (i, c) in binomial_row(j).iter().enumerate() {
            out[r + j - 2 * i] += a * c;
        }
    }
    IntPoly::new(out)
}

/// The real cyclotomic polynomial `Ψ_k`: monic of degree `r = φ(k)/2` with
/// `Φ_k(y) = y^r·Ψ_k(y + 1/y)`.
///
/// Coefficients are recovered top-down by triangular matching against `Φ_k`,
/// then the full identity is re-expanded and compared.
pub fn real_cyclotomic(k: u64) -> Result<IntPoly> {
    ensure!(k >= 3, InvalidInput, "real cyclotomic polynomial needs k >= 3, got {k}");
    let phi = cyclotomic(k)?;
    let r = (euler_phi(k) / 2) as usize;
    let mut a = vec![BigInt::zero(); r + 1];
    for m in (0..=r).rev() {
        let mut acc = phi.coeff(r + m);
        for j in (m + 2..=r).step_by(2) {
            let i = (j - m) / 2;
            acc -= &a[j] * &binomial_row(j)[i];
        }
        a[m] = acc;
    }
    let psi = IntPoly::new(a);
    let check = palindromic_expansion(&psi, r);
    ensure!(
        check == phi,
        Internal,
        "coefficient matching for Psi_{k} left residue {}",
        &phi - &check
    );
    Ok(psi)
}

/// Resultant with the convention `Res(f, g) = lc(f)^deg(g) · Π_{f(β)=0} g(β)`,
/// which agrees with the Sylvester determinant.
///
/// Computed with the subresultant pseudo-remainder sequence, so every
/// intermediate division is exact.
pub fn resultant(f: &IntPoly, g: &IntPoly) -> Result<BigInt> {
    let (Some(df), Some(dg)) = (f.degree(), g.degree()) else {
        return Err(Error::InvalidInput("resultant of the zero polynomial".into()));
    };
    if dg == 0 {
        return Ok(g.coeff(0).pow(df as u32));
    }
    if df == 0 {
        return Ok(f.coeff(0).pow(dg as u32));
    }

    let ca = f.content();
    let cb = g.content();
    let mut a = f.div_scalar_exact(&ca)?;
    let mut b = g.div_scalar_exact(&cb)?;
    let t = ca.pow(dg as u32) * cb.pow(df as u32);
    let mut sign = BigInt::one();
    if df < dg {
        std::mem::swap(&mut a, &mut b);
        if df % 2 == 1 && dg % 2 == 1 {
            sign = -sign;
        }
    }

    let mut gg = BigInt::one();
    let mut h = BigInt::one();
    loop {
        let da = a.degree().unwrap();
        let db = b.degree().unwrap();
        let delta = da - db;
        if da % 2 == 1 && db % 2 == 1 {
            sign = -sign;
        }
        let r = a.pseudo_rem(&b)?;
        a = b;
        if r.is_zero() {
            return Ok(BigInt::zero());
        }
        b = r.div_scalar_exact(&(&gg * h.pow(delta as u32)))?;
        gg = a.leading().unwrap().clone();
        h = if delta == 0 {
            h
        } else {
            let num = gg.pow(delta as u32);
            let den = h.pow(delta as u32 - 1);
            let (q, rem) = num.div_rem(&den);
            ensure!(rem.is_zero(), Internal, "subresultant h-update inexact");
            q
        };
        if b.degree() == Some(0) {
            break;
        }
    }
    let da = a.degree().unwrap() as u32;
    let num = b.coeff(0).pow(da);
    let den = h.pow(da - 1);
    let (q, rem) = num.div_rem(&den);
    ensure!(rem.is_zero(), Internal, "subresultant final step inexact");
    Ok(sign * t * q)
}
