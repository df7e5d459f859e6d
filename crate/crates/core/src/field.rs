//! Arithmetic in `GF(p)` and `GF(p²) = GF(p)[t]/(t² − ν)`.
//!
//! Elements of either field are pairs `a0 + a1·t` of canonical residues; in a
//! degree-1 context `a1` is always zero. All searches (nonresidues, square
//! roots, root choice) scan in a fixed order so that results are reproducible.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{ensure, Error, Result};
use crate::factor::{factorize_u64, is_prime_u64, mul_mod, pow_mod};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FieldElem {
    pub a0: u64,
    pub a1: u64,
}

impl FieldElem {
    pub const fn base(a0: u64) -> Self {
        FieldElem { a0, a1: 0 }
    }

    pub fn is_base(&self) -> bool {
        self.a1 == 0
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a0, self.a1) {
            (a0, 0) => write!(f, "{a0}"),
            (0, 1) => write!(f, "t"),
            (0, a1) => write!(f, "{a1}t"),
            (a0, 1) => write!(f, "{a0}+t"),
            (a0, a1) => write!(f, "{a0}+{a1}t"),
        }
    }
}

/// Euler's criterion for `a` modulo an odd prime `p`: `−1`, `0` or `+1`.
pub fn legendre(a: i64, p: u64) -> i8 {
    let a = (a as i128).rem_euclid(p as i128) as u64;
    if a == 0 {
        return 0;
    }
    if pow_mod(a, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// Smallest positive quadratic nonresidue modulo an odd prime.
pub fn smallest_nonresidue(p: u64) -> u64 {
    (2..p).find(|&a| legendre(a as i64, p) == -1).expect("odd prime has a nonresidue")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldCtx {
    p: u64,
    degree: u8,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    nonresidue: Option<u64>,
}

impl FieldCtx {
    /// `GF(p)`.
    pub fn prime(p: u64) -> Result<Self> {
        ensure!(p % 2 == 1 && is_prime_u64(p), InvalidInput, "{p} is not an odd prime");
        ensure!(p < 1 << 62, InvalidInput, "{p} is too large for native field arithmetic");
        Ok(FieldCtx { p, degree: 1, nonresidue: None })
    }

    /// `GF(p²)` with `ν` the smallest positive nonresidue mod `p`.
    pub fn quadratic(p: u64) -> Result<Self> {
        let base = Self::prime(p)?;
        Ok(FieldCtx { nonresidue: Some(smallest_nonresidue(p)), degree: 2, ..base })
    }

    /// Rebuilds a context from stored parts, validating them.
    pub fn from_parts(p: u64, degree: u8, nonresidue: Option<u64>) -> Result<Self> {
        let base = Self::prime(p)?;
        match (degree, nonresidue) {
            (1, None) => Ok(base),
            (2, Some(nu)) => {
                ensure!(
                    nu < p && legendre(nu as i64, p) == -1,
                    Verification,
                    "{nu} is not a quadratic nonresidue mod {p}"
                );
                Ok(FieldCtx { degree: 2, nonresidue: Some(nu), ..base })
            }
            _ => Err(Error::InvalidInput(format!(
                "field degree {degree} with nonresidue {nonresidue:?} is not a valid description"
            ))),
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u8 {
        self.degree
    }

    pub fn nonresidue(&self) -> Option<u64> {
        self.nonresidue
    }

    /// Number of field elements.
    pub fn size(&self) -> u128 {
        (self.p as u128).pow(self.degree as u32)
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem::base(0)
    }

    pub fn one(&self) -> FieldElem {
        FieldElem::base(1)
    }

    pub fn from_i64(&self, a: i64) -> FieldElem {
        FieldElem::base((a as i128).rem_euclid(self.p as i128) as u64)
    }

    pub fn contains(&self, a: FieldElem) -> bool {
        a.a0 < self.p && a.a1 < self.p && (self.degree == 2 || a.a1 == 0)
    }

    /// `a0 + a1·p`; the order used whenever a canonical choice is needed.
    pub fn encode(&self, a: FieldElem) -> u128 {
        a.a0 as u128 + a.a1 as u128 * self.p as u128
    }

    pub fn decode(&self, e: u128) -> FieldElem {
        let p = self.p as u128;
        FieldElem { a0: (e % p) as u64, a1: (e / p) as u64 }
    }

    #[inline]
    fn add_mod(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    fn sub_mod(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        FieldElem { a0: self.add_mod(a.a0, b.a0), a1: self.add_mod(a.a1, b.a1) }
    }

    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        FieldElem { a0: self.sub_mod(a.a0, b.a0), a1: self.sub_mod(a.a1, b.a1) }
    }

    pub fn neg(&self, a: FieldElem) -> FieldElem {
        self.sub(self.zero(), a)
    }

    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        let p = self.p;
        if a.a1 == 0 && b.a1 == 0 {
            return FieldElem::base(mul_mod(a.a0, b.a0, p));
        }
        let nu = self.nonresidue.unwrap_or(0);
        let c0 = (a.a0 as u128 * b.a0 as u128
            + mul_mod(nu, mul_mod(a.a1, b.a1, p), p) as u128)
            % p as u128;
        let c1 = (a.a0 as u128 * b.a1 as u128 + a.a1 as u128 * b.a0 as u128) % p as u128;
        FieldElem { a0: c0 as u64, a1: c1 as u64 }
    }

    pub fn square(&self, a: FieldElem) -> FieldElem {
        self.mul(a, a)
    }

    pub fn pow(&self, mut a: FieldElem, mut e: u128) -> FieldElem {
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        acc
    }

    /// Norm to `GF(p)`: `a0² − ν·a1²` (just `a0` in degree 1).
    pub fn norm(&self, a: FieldElem) -> u64 {
        let p = self.p;
        let nu = self.nonresidue.unwrap_or(0);
        self.sub_mod(mul_mod(a.a0, a.a0, p), mul_mod(nu, mul_mod(a.a1, a.a1, p), p))
    }

    pub fn inv(&self, a: FieldElem) -> Option<FieldElem> {
        if a == self.zero() {
            return None;
        }
        let p = self.p;
        if a.a1 == 0 {
            return Some(FieldElem::base(pow_mod(a.a0, p - 2, p)));
        }
        let n_inv = pow_mod(self.norm(a), p - 2, p);
        Some(FieldElem {
            a0: mul_mod(a.a0, n_inv, p),
            a1: mul_mod(self.sub_mod(0, a.a1), n_inv, p),
        })
    }

    pub fn div(&self, a: FieldElem, b: FieldElem) -> Option<FieldElem> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }

    /// Euler's criterion in the whole field (zero counts as a square).
    pub fn is_square(&self, a: FieldElem) -> bool {
        a == self.zero() || self.pow(a, (self.size() - 1) / 2) == self.one()
    }

    /// Every element of `GF(p)` is a square in `GF(p²)`, so there the scan
    /// starts at `t`.
    fn first_nonsquare(&self) -> FieldElem {
        let start = if self.degree == 1 { 2 } else { self.p as u128 };
        (start..self.size())
            .map(|e| self.decode(e))
            .find(|&z| !self.is_square(z))
            .expect("finite field of odd order has a nonsquare")
    }

    /// Tonelli–Shanks in the cyclic group of order `|F| − 1`. Returns one of
    /// the two roots; `None` for nonsquares.
    pub fn sqrt(&self, a: FieldElem) -> Option<FieldElem> {
        if a == self.zero() {
            return Some(a);
        }
        if !self.is_square(a) {
            return None;
        }
        let q1 = self.size() - 1;
        let s = q1.trailing_zeros();
        let t = q1 >> s;
        let mut c = self.pow(self.first_nonsquare(), t);
        let mut x = self.pow(a, t.div_ceil(2));
        let mut b = self.pow(a, t);
        let mut m = s;
        while b != self.one() {
            let mut i = 0;
            let mut bb = b;
            while bb != self.one() {
                bb = self.square(bb);
                i += 1;
            }
            debug_assert!(i < m);
            let mut w = c;
            for _ in 0..m - i - 1 {
                w = self.square(w);
            }
            x = self.mul(x, w);
            c = self.square(w);
            b = self.mul(b, c);
            m = i;
        }
        Some(x)
    }

    /// Prime factorization of `|F*| = |F| − 1`.
    fn unit_group_factors(&self) -> Vec<(u128, u32)> {
        let p = self.p;
        let mut merged: Vec<(u128, u32)> = Vec::new();
        let parts: Vec<u64> = if self.degree == 1 { vec![p - 1] } else { vec![p - 1, p + 1] };
        for part in parts {
            for (q, e) in factorize_u64(part) {
                match merged.iter_mut().find(|(r, _)| *r == q as u128) {
                    Some(entry) => entry.1 += e,
                    None => merged.push((q as u128, e)),
                }
            }
        }
        merged
    }

    /// Multiplicative order, by descent from `|F| − 1` over its prime factors.
    pub fn element_order(&self, a: FieldElem) -> Result<u128> {
        ensure!(a != self.zero(), InvalidInput, "zero has no multiplicative order");
        let mut ord = self.size() - 1;
        for (q, _) in self.unit_group_factors() {
            while ord % q == 0 && self.pow(a, ord / q) == self.one() {
                ord /= q;
            }
        }
        Ok(ord)
    }
}

/// `ζ` together with the field it lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZetaSolution {
    pub ctx: FieldCtx,
    pub epsilon: i8,
    /// Root of `3ζ² + 2ζ + 3` with the smaller encoding.
    pub zeta: FieldElem,
    /// The other root, `ζ⁻¹`.
    pub zeta_inv: FieldElem,
}

/// Solves `3(ζ + ζ⁻¹) + 2 = 0` for a primitive `k`-th root of unity `ζ`,
/// working in `GF(p)` when `p ≡ 1 (mod 2k)` and in `GF(p²)` when
/// `p ≡ −1 (mod 2k)`.
pub fn solve_zeta(k: u64, p: u64) -> Result<ZetaSolution> {
    ensure!(k % 2 == 1 && k >= 5, InvalidInput, "k must be odd and >= 5, got {k}");
    ensure!(p >= 5 && is_prime_u64(p), InvalidInput, "{p} is not a prime >= 5");
    let epsilon = match p % (2 * k) {
        1 => 1,
        r if r == 2 * k - 1 => -1,
        r => {
            return Err(Error::InvalidInput(format!(
                "p = {p} is not ±1 mod 2k = {} (residue {r})",
                2 * k
            )))
        }
    };
    // 3ζ² + 2ζ + 3 = 0 has discriminant −32; roots are in GF(p) iff −2 is a square.
    let disc_is_square = legendre(-32, p) == 1;
    ensure!(
        disc_is_square == (epsilon == 1),
        Verification,
        "discriminant -32 is {} mod {p}, inconsistent with p ≡ {epsilon} (mod {})",
        if disc_is_square { "a square" } else { "a nonsquare" },
        2 * k
    );
    let ctx = if epsilon == 1 { FieldCtx::prime(p)? } else { FieldCtx::quadratic(p)? };
    let root = ctx.sqrt(ctx.from_i64(-32)).ok_or_else(|| {
        Error::Internal(format!("no square root of -32 in GF({p}^{})", ctx.degree()))
    })?;
    let six_inv = ctx.inv(ctx.from_i64(6)).unwrap();
    let minus_two = ctx.from_i64(-2);
    let r1 = ctx.mul(ctx.add(minus_two, root), six_inv);
    let r2 = ctx.mul(ctx.sub(minus_two, root), six_inv);

    ensure!(ctx.mul(r1, r2) == ctx.one(), Verification, "roots are not mutually inverse");
    for r in [r1, r2] {
        ensure!(condition_holds(&ctx, r), Verification, "3(ζ+ζ⁻¹)+2 ≠ 0 at ζ = {r}");
        let ord = ctx.element_order(r)?;
        ensure!(
            ord == k as u128,
            Verification,
            "root {r} has order {ord}, not {k}, in GF({p}^{})",
            ctx.degree()
        );
    }
    let (zeta, zeta_inv) =
        if ctx.encode(r1) <= ctx.encode(r2) { (r1, r2) } else { (r2, r1) };
    Ok(ZetaSolution { ctx, epsilon, zeta, zeta_inv })
}

/// `3(ζ + ζ⁻¹) + 2 = 0`.
pub fn condition_holds(ctx: &FieldCtx, zeta: FieldElem) -> bool {
    let Some(inv) = ctx.inv(zeta) else { return false };
    let s = ctx.add(zeta, inv);
    ctx.add(ctx.mul(ctx.from_i64(3), s), ctx.from_i64(2)) == ctx.zero()
}

pub fn find_zeta(k: u64, p: u64) -> Result<(FieldElem, FieldCtx)> {
    let sol = solve_zeta(k, p)?;
    Ok((sol.zeta, sol.ctx))
}

/// `ξ = −ζ^((k+1)/2)`, a primitive `2k`-th root of unity with `ξ² = ζ`.
pub fn xi_from_zeta(zeta: FieldElem, k: u64, ctx: &FieldCtx) -> Result<FieldElem> {
    ensure!(k % 2 == 1, InvalidInput, "k must be odd");
    ensure!(ctx.contains(zeta), InvalidInput, "{zeta} is not an element of the field");
    let ord = ctx.element_order(zeta)?;
    ensure!(ord == k as u128, Verification, "ζ = {zeta} has order {ord}, not {k}");
    let xi = ctx.neg(ctx.pow(zeta, ((k + 1) / 2) as u128));
    ensure!(ctx.square(xi) == zeta, Internal, "ξ² ≠ ζ");
    let ord_xi = ctx.element_order(xi)?;
    ensure!(ord_xi == 2 * k as u128, Verification, "ξ has order {ord_xi}, not {}", 2 * k);
    Ok(xi)
}
