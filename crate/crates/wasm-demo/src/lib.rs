//! Browser bindings. Every export returns a JSON string; errors become
//! JavaScript exceptions carrying the message.

use serde_json::json;
use trinity_core::certificate;
use trinity_core::flagmap::toys;
use trinity_core::lift::{self, CornerVoltage, DEFAULT_LIFT_BUDGET};
use trinity_core::{plan, table, Result};
use wasm_bindgen::prelude::*;

/// Flag-level checks in the browser stop at this group order.
pub const BROWSER_GROUP_BUDGET: u64 = 200_000;

pub fn table_json(from: u64, to: u64) -> Result<String> {
    let rows = table::table(from, to)?;
    Ok(json!({ "rows": rows, "mismatches": table::mismatches(&rows) }).to_string())
}

pub fn plan_json(m: u64) -> Result<String> {
    Ok(serde_json::to_string(&plan::plan(m)?).unwrap())
}

pub fn construct_json(k: u64) -> Result<String> {
    let cert = certificate::construct(k, None, BROWSER_GROUP_BUDGET)?;
    let report = certificate::verify(&cert, BROWSER_GROUP_BUDGET)?;
    Ok(json!({
        "certificate": serde_json::from_str::<serde_json::Value>(&cert.to_json()).unwrap(),
        "verified": report.passed(),
        "flag_level": report.flag_level,
    })
    .to_string())
}

/// Orbit orders of the lift of the valency-`k` map, or of a named toy when
/// `toy` is non-empty.
pub fn lift_json(k: u64, toy: &str, n: u32) -> Result<String> {
    let base = if toy.is_empty() {
        certificate::construct(k, None, BROWSER_GROUP_BUDGET)?.regular_map(BROWSER_GROUP_BUDGET)?
    } else {
        toys::by_name(toy)?
    };
    let cv = CornerVoltage::assign(&base, n)?;
    let orbits = lift::orbit_report(&base, &cv)?;
    let exhaustive = lift::component_bfs(&base, &cv, DEFAULT_LIFT_BUDGET / 10).ok();
    Ok(json!({ "base_flags": base.flag_count(), "orbits": orbits, "exhaustive": exhaustive }).to_string())
}

fn js<T>(r: Result<T>) -> std::result::Result<T, JsError> {
    r.map_err(|e| JsError::new(&e.to_string()))
}

#[wasm_bindgen]
pub fn norm_table(from: u32, to: u32) -> std::result::Result<String, JsError> {
    js(table_json(from as u64, to as u64))
}

#[wasm_bindgen]
pub fn plan_valency(m: u32) -> std::result::Result<String, JsError> {
    js(plan_json(m as u64))
}

#[wasm_bindgen]
pub fn construct(k: u32) -> std::result::Result<String, JsError> {
    js(construct_json(k as u64))
}

#[wasm_bindgen]
pub fn lift_orbits(k: u32, toy: &str, n: u32) -> std::result::Result<String, JsError> {
    js(lift_json(k as u64, toy, n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exports_produce_json() {
        let t: serde_json::Value = serde_json::from_str(&table_json(5, 9).unwrap()).unwrap();
        assert_eq!(t["rows"][2]["norm"], "-73");
        let p: serde_json::Value = serde_json::from_str(&plan_json(45).unwrap()).unwrap();
        assert_eq!((p["d"].as_u64(), p["n"].as_u64()), (Some(5), Some(9)));
        let c: serde_json::Value = serde_json::from_str(&construct_json(7).unwrap()).unwrap();
        assert_eq!(c["verified"], true);
        let l: serde_json::Value = serde_json::from_str(&lift_json(5, "", 3).unwrap()).unwrap();
        assert_eq!(l["orbits"]["xyz"], 15);
        assert!(l["exhaustive"].is_null());
        let toy: serde_json::Value = serde_json::from_str(&lift_json(0, "z2cubed", 3).unwrap()).unwrap();
        assert_eq!(toy["exhaustive"]["component_count"], 3);
    }

    #[test]
    fn errors_propagate() {
        assert!(construct_json(3).is_err());
        assert!(plan_json(4).is_err());
        assert!(lift_json(5, "", 2).is_err());
    }
}
