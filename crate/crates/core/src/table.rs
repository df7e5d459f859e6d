//! The `N(g)` table for a range of odd `k`, with the published rows for
//! `5 ≤ k ≤ 29` embedded as a reference.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::dec;
use crate::error::{ensure, Result};
use crate::norm::NormReport;

/// `(k, N(g), prime factors of |N(g)| with multiplicity)`.
pub const REFERENCE: [(u64, i64, &[u64]); 13] = [
    (5, -11, &[11]),
    (7, -13, &[13]),
    (9, -73, &[73]),
    (11, 263, &[263]),
    (13, -131, &[131]),
    (15, -239, &[239]),
    (17, -4079, &[4079]),
    (19, 15503, &[37, 419]),
    (21, 5209, &[5209]),
    (23, -4093, &[4093]),
    (25, 56149, &[56149]),
    (27, -16417, &[16417]),
    (29, 3161869, &[59, 53591]),
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub k: u64,
    #[serde(with = "dec")]
    pub norm: BigInt,
    /// Prime factors with multiplicity, ascending.
    pub factors: Vec<String>,
    /// Every factor satisfies the congruences.
    pub congruences_hold: bool,
    /// `None` outside the reference range.
    pub matches_reference: Option<bool>,
}

impl TableRow {
    pub fn compute(k: u64) -> Result<Self> {
        let rep = NormReport::compute(k)?;
        let mut factors = Vec::new();
        for f in &rep.factorization {
            for _ in 0..f.exponent {
                factors.push(f.prime.to_string());
            }
        }
        let congruences_hold = rep.checks.iter().all(|c| c.passes());
        let matches_reference = REFERENCE.iter().find(|r| r.0 == k).map(|&(_, n, fs)| {
            rep.norm == BigInt::from(n) && factors.iter().cloned().eq(fs.iter().map(u64::to_string))
        });
        Ok(TableRow { k, norm: rep.norm, factors, congruences_hold, matches_reference })
    }

    /// `prime` for a single prime factor, otherwise `a × b × ...`.
    pub fn factor_string(&self) -> String {
        match self.factors.len() {
            0 => "unit".into(),
            1 => "prime".into(),
            _ => self.factors.join(" × "),
        }
    }

    pub fn signed_norm(&self) -> String {
        if self.norm > BigInt::from(0) {
            format!("+{}", self.norm)
        } else {
            self.norm.to_string()
        }
    }
}

/// Rows for every odd `k` in `from..=to`.
pub fn table(from: u64, to: u64) -> Result<Vec<TableRow>> {
    ensure!(from >= 3 && from <= to, InvalidInput, "need 3 <= from <= to, got {from}..{to}");
    let start = from | 1;
    (start..=to).step_by(2).map(TableRow::compute).collect()
}

/// Rows that disagree with the reference.
pub fn mismatches(rows: &[TableRow]) -> Vec<u64> {
    rows.iter().filter(|r| r.matches_reference == Some(false)).map(|r| r.k).collect()
}
