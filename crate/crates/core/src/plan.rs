//! Splitting an odd valency `m` into a base valency `d` that the matrix
//! construction handles directly (a prime `≥ 5`, or `9`) and an odd lift
//! factor `n`.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use num_bigint::BigUint;

use crate::dec;
use crate::error::{ensure, Result};
use crate::factor::{factorize_u64, is_prime_u64};
use crate::norm::NormReport;
use crate::psl2::psl2_order;

/// Largest base valency whose prime is looked up; beyond this factoring
/// `N(g)` stops being cheap.
pub const RESOLVE_LIMIT: u64 = 43;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasePrime {
    pub p: u64,
    #[serde(with = "dec")]
    pub group_order: BigUint,
    /// `1 + |G|/4`.
    #[serde(with = "dec")]
    pub exponent: BigUint,
    /// Order of the lifted group written as `n^e·|G|`.
    pub lifted_order: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiftPlan {
    pub m: u64,
    pub d: u64,
    pub n: u64,
    /// Command that produces the base certificate.
    pub base_certificate_ref: String,
    pub predicted_group: String,
    pub base: Option<BasePrime>,
}

impl LiftPlan {
    pub fn is_valid(&self) -> bool {
        let d_ok = self.d == 9 || (self.d >= 5 && is_prime_u64(self.d));
        self.m == self.d * self.n && self.n % 2 == 1 && d_ok
    }
}

/// `(d, n)` for odd `m ≥ 5`.
pub fn decompose(m: u64) -> Result<(u64, u64)> {
    ensure!(m % 2 == 1, InvalidInput, "valency {m} is even; only odd valencies are planned");
    ensure!(m != 3, InvalidInput, "no trinity map of valency 3 exists");
    ensure!(m >= 5, InvalidInput, "valency must be at least 5, got {m}");
    let factors = factorize_u64(m);
    if let Some(&(q, _)) = factors.iter().rev().find(|(q, _)| *q >= 5) {
        return Ok((q, m / q));
    }
    // Only 3 divides m, and m ≥ 9.
    Ok((9, m / 9))
}

fn base_prime(d: u64) -> Result<Option<u64>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Option<u64>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(&p) = cache.lock().unwrap().get(&d) {
        return Ok(p);
    }
    let p = NormReport::compute(d)?.smallest_admissible().and_then(|a| a.p_u64());
    cache.lock().unwrap().insert(d, p);
    Ok(p)
}

pub fn plan(m: u64) -> Result<LiftPlan> {
    let (d, n) = decompose(m)?;
    let base = if d <= RESOLVE_LIMIT {
        base_prime(d)?.map(|p| {
            let group_order = psl2_order(p);
            let exponent: BigUint = &group_order / 4u32 + 1u32;
            BasePrime {
                p,
                lifted_order: format!("{n}^{exponent}·{group_order}"),
                group_order,
                exponent,
            }
        })
    } else {
        None
    };
    let group = match &base {
        Some(b) => format!("PSL(2,{})", b.p),
        None => "G".to_string(),
    };
    let predicted_group = match (&base, n) {
        (_, 1) => group,
        (Some(b), _) => format!("(Z_{n})^{} ⋊ {group}", b.exponent),
        (None, _) => format!("(Z_{n})^(1+|G|/4) ⋊ {group}"),
    };
    Ok(LiftPlan {
        m,
        d,
        n,
        base_certificate_ref: format!("construct {d}"),
        predicted_group,
        base,
    })
}
