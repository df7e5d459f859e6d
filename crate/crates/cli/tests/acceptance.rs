//! Acceptance run: one line per criterion, `PASS` or `FAIL`, with the
//! measured time against its limit. All comparisons are exact; the only
//! tolerances are the time limits below.

use std::path::Path;
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use serde_json::Value;
use trinity_core::certificate::{self, Certificate, DEFAULT_GROUP_BUDGET};
use trinity_core::factor::is_prime_u64;
use trinity_core::flagmap::{toys, RegularMap, Trinity};
use trinity_core::intpoly::{cyclotomic, palindromic_expansion, real_cyclotomic, resultant, IntPoly};
use trinity_core::lift::{self, CornerVoltage, DEFAULT_LIFT_BUDGET};
use trinity_core::norm::{norm_mod9_check, unit_check, NormReport};
use trinity_core::psl2::MapSeed;

const LIMIT_TABLE: Duration = Duration::from_secs(10);
const LIMIT_CONGRUENCE: Duration = Duration::from_secs(10);
const LIMIT_K5: Duration = Duration::from_secs(30);
const LIMIT_K9: Duration = Duration::from_secs(300);
const LIMIT_K7: Duration = Duration::from_secs(60);
const LIMIT_TOY_LIFT: Duration = Duration::from_secs(10);
const LIMIT_ORBIT: Duration = Duration::from_secs(10);
const LIMIT_PLANNER: Duration = Duration::from_secs(5);
const LIMIT_PROPERTIES: Duration = Duration::from_secs(120);

type Check = Result<(), String>;

macro_rules! expect {
    ($cond:expr, $($arg:tt)+) => {
        if !$cond {
            return Err(format!($($arg)+));
        }
    };
}

fn trinity(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_trinity")).args(args).output().expect("binary runs")
}

fn trinity_json(args: &[&str]) -> Result<(i32, Value), String> {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let out = trinity(&full);
    let code = out.status.code().unwrap_or(-1);
    let v = serde_json::from_slice(&out.stdout).map_err(|e| format!("{args:?}: bad JSON output: {e}"))?;
    Ok((code, v))
}

fn flag_map(cert: &Certificate) -> RegularMap {
    cert.regular_map(DEFAULT_GROUP_BUDGET).unwrap()
}

const BOTH: Trinity = Trinity { self_dual: true, self_petrie: true };

fn criterion_1() -> Check {
    let (code, v) = trinity_json(&["table", "5", "29"])?;
    expect!(code == 0, "table exited with {code}");
    let expected: [(&str, &[&str]); 13] = [
        ("-11", &["11"]),
        ("-13", &["13"]),
        ("-73", &["73"]),
        ("263", &["263"]),
        ("-131", &["131"]),
        ("-239", &["239"]),
        ("-4079", &["4079"]),
        ("15503", &["37", "419"]),
        ("5209", &["5209"]),
        ("-4093", &["4093"]),
        ("56149", &["56149"]),
        ("-16417", &["16417"]),
        ("3161869", &["59", "53591"]),
    ];
    let rows = v["rows"].as_array().ok_or("no rows")?;
    expect!(rows.len() == 13, "{} rows", rows.len());
    for (row, (k, (norm, factors))) in rows.iter().zip((5..).step_by(2).zip(expected)) {
        expect!(row["k"] == k, "row k {}", row["k"]);
        expect!(row["norm"] == norm, "k={k}: N(g) = {}", row["norm"]);
        let got: Vec<&str> = row["factors"].as_array().unwrap().iter().map(|f| f.as_str().unwrap()).collect();
        expect!(got == factors, "k={k}: factors {got:?}");
    }
    Ok(())
}

fn criterion_2() -> Check {
    for k in (5u64..=29).step_by(2) {
        let rep = NormReport::compute(k).map_err(|e| e.to_string())?;
        for c in &rep.checks {
            expect!(c.passes(), "k={k}: factor {} fails (mod 2k {}, mod 12 {})", c.p, c.residue_2k, c.residue_12);
        }
        if is_prime_u64(k) {
            expect!(norm_mod9_check(k).unwrap(), "k={k}: mod-9 congruence fails");
            expect!(unit_check(k).unwrap(), "k={k}: N(g) is a unit or shares a factor with 6");
        }
    }
    Ok(())
}

fn criterion_3() -> Check {
    let seed = MapSeed::build(5, 11).map_err(|e| e.to_string())?;
    let ring = seed.ring();
    expect!(ring.proj_order(&seed.r) == 5 && ring.proj_order(&seed.s) == 5, "ord R, S");
    expect!(ring.proj_order(&ring.proj_mul(&seed.r, &seed.s)) == 2, "ord RS");
    expect!(seed.minus_d_is_square, "−D not a square");
    let cert = certificate::construct(5, None, DEFAULT_GROUP_BUDGET).map_err(|e| e.to_string())?;
    expect!(cert.p == 11 && cert.group_order == 660u32.into(), "p {} order {}", cert.p, cert.group_order);
    let inv = cert.invariants.ok_or("no invariants")?;
    expect!(
        (inv.vertices, inv.edges, inv.faces, inv.euler_char, inv.orientable) == (66, 165, 66, -33, false),
        "invariants {inv:?}"
    );
    expect!(cert.flag_check == Some(BOTH), "flag check {:?}", cert.flag_check);
    let map = flag_map(&cert);
    let t = map.trinity_check().unwrap();
    expect!(
        cert.duality_witness.is_some() == t.self_dual && cert.petrie_witness.is_some() == t.self_petrie,
        "matrix witnesses disagree with flag-level answers"
    );
    Ok(())
}

fn criterion_4() -> Check {
    let cert = certificate::construct(9, None, DEFAULT_GROUP_BUDGET).map_err(|e| e.to_string())?;
    expect!(cert.p == 73, "p = {}", cert.p);
    expect!(cert.zeta.a1 == 0 && [16, 32].contains(&cert.zeta.a0), "zeta = {:?}", cert.zeta);
    expect!(cert.group_order == 194472u32.into(), "order {}", cert.group_order);
    expect!(cert.invariants.map(|i| i.flags) == Some(194472), "flags");
    expect!(cert.flag_check == Some(BOTH), "flag check {:?}", cert.flag_check);
    Ok(())
}

fn criterion_5() -> Check {
    let cert = certificate::construct(7, None, DEFAULT_GROUP_BUDGET).map_err(|e| e.to_string())?;
    expect!(cert.p == 13 && cert.epsilon == -1, "p {} epsilon {}", cert.p, cert.epsilon);
    expect!(cert.field.degree == 2, "field degree {}", cert.field.degree);
    expect!(cert.zeta.a1 != 0, "zeta lies in the prime field");
    expect!(cert.group_order == 1092u32.into(), "order {}", cert.group_order);
    expect!(cert.flag_check == Some(BOTH), "flag check {:?}", cert.flag_check);
    Ok(())
}

fn criterion_6() -> Check {
    let base = toys::z2_cubed();
    let bi = base.invariants();
    expect!((bi.type_k, bi.type_l) == (2, 2) && base.trinity_check().unwrap() == BOTH, "base");
    let cv = CornerVoltage::assign(&base, 3).unwrap();
    let rep = lift::component_bfs(&base, &cv, DEFAULT_LIFT_BUDGET).map_err(|e| e.to_string())?;
    expect!(rep.total_flags == 648, "total {}", rep.total_flags);
    expect!(rep.component_count == 3 && rep.homogeneous && rep.size == 216, "components {:?}", (rep.component_count, rep.size));
    expect!(rep.count_matches_prediction(), "predicted {}", rep.predicted_count);
    let ci = rep.invariants;
    expect!((ci.type_k, ci.type_l, ci.petrie_len) == (6, 6, 6), "type {ci:?}");
    expect!(rep.regular && rep.trinity == BOTH, "regular {} trinity {:?}", rep.regular, rep.trinity);
    expect!(rep.translation_group_order == 27 && rep.semidirect_certified, "translations {}", rep.translation_group_order);
    expect!(rep.group_order_predicted == 216u32.into(), "group order {}", rep.group_order_predicted);
    Ok(())
}

fn criterion_7(dir: &Path) -> Check {
    let path = dir.join("k5.json");
    let out = trinity(&["construct", "5", "--out", path.to_str().unwrap()]);
    expect!(out.status.success(), "construct 5 failed");
    let (code, v) = trinity_json(&["lift", "--base", path.to_str().unwrap(), "--n", "3", "--mode", "orbit"])?;
    expect!(code == 0, "lift exited with {code}");
    let o = &v["orders"];
    let got = [&o["yz"], &o["zx"], &o["xy"], &o["xyz"]].map(|x| x.as_u64().unwrap_or(0));
    expect!(got == [15, 15, 2, 15], "orders {got:?}");
    Ok(())
}

fn criterion_8() -> Check {
    for m in (5u64..=9999).step_by(2) {
        let p = trinity_core::plan::plan(m).map_err(|e| format!("m={m}: {e}"))?;
        expect!(p.is_valid() && p.d * p.n == m, "m={m}: {:?}", (p.d, p.n));
    }
    let out = trinity(&["plan", "3"]);
    expect!(out.status.code() == Some(2), "plan 3 exited with {:?}", out.status.code());
    let (code, v) = trinity_json(&["plan", "9999"])?;
    expect!(code == 0 && v["d"].as_u64().unwrap() * v["n"].as_u64().unwrap() == 9999, "plan 9999 via the binary");
    Ok(())
}

fn criterion_9(dir: &Path) -> Check {
    for k in 3..=200 {
        let psi = real_cyclotomic(k).unwrap();
        let r = psi.degree().unwrap();
        expect!(palindromic_expansion(&psi, r) == cyclotomic(k).unwrap(), "Φ/Ψ identity fails at k={k}");
    }
    let q = IntPoly::from_i64s(&[3, 2, 3]);
    for k in (5u64..=97).filter(|&k| is_prime_u64(k)) {
        let res = resultant(&cyclotomic(k).unwrap(), &q).unwrap();
        let n = trinity_core::norm::norm_g(k).unwrap();
        expect!(res == &n * &n, "resultant mismatch at k={k}");
    }
    let mut maps: Vec<RegularMap> = toys::NAMES.iter().map(|n| toys::by_name(n).unwrap()).collect();
    for k in [5, 7] {
        maps.push(flag_map(&certificate::construct(k, None, DEFAULT_GROUP_BUDGET).unwrap()));
    }
    for m in &maps {
        expect!(m.dual().dual() == *m && m.petrie().petrie() == *m, "dual/petrie not involutive");
        let e = m.invariants().edges;
        expect!(m.dual().invariants().edges == e && m.petrie().invariants().edges == e, "edge count changed");
    }

    // Negative controls through the binary.
    let good = dir.join("k5.json");
    let text = std::fs::read_to_string(&good).map_err(|e| e.to_string())?;
    let mut cert: Value = serde_json::from_str(&text).unwrap();
    expect!(trinity(&["verify", good.to_str().unwrap()]).status.code() == Some(0), "clean certificate rejected");

    let entry = cert["R"]["b"]["a0"].as_str().unwrap().parse::<u64>().unwrap();
    cert["R"]["b"]["a0"] = Value::String(((entry + 1) % 11).to_string());
    let perturbed = dir.join("perturbed.json");
    std::fs::write(&perturbed, cert.to_string()).unwrap();
    let (code, v) = trinity_json(&["verify", perturbed.to_str().unwrap()])?;
    let failed: Vec<&str> = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["passed"] == false)
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    expect!(code == 1 && failed.contains(&"R and S match the generator formulas"), "perturbed: {code} {failed:?}");

    let mut cert: Value = serde_json::from_str(&text).unwrap();
    cert["p"] = Value::String("13".into());
    cert["field"]["p"] = Value::String("13".into());
    let wrong_p = dir.join("wrong_p.json");
    std::fs::write(&wrong_p, cert.to_string()).unwrap();
    let (code, v) = trinity_json(&["verify", wrong_p.to_str().unwrap()])?;
    let failed = v["checks"].as_array().unwrap().iter().any(|c| c["name"] == "p ≡ ±1 (mod 2k)" && c["passed"] == false);
    expect!(code == 1 && failed, "wrong p residue not flagged");

    let broken = dir.join("broken.json");
    std::fs::write(&broken, &text[..text.len() / 2]).unwrap();
    expect!(trinity(&["verify", broken.to_str().unwrap()]).status.code() == Some(2), "malformed file not exit 2");
    Ok(())
}

fn main() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let criteria: Vec<(&str, Duration, Box<dyn Fn() -> Check + '_>)> = vec![
        ("norm table 5..29", LIMIT_TABLE, Box::new(criterion_1)),
        ("congruence suite", LIMIT_CONGRUENCE, Box::new(criterion_2)),
        ("end to end k=5", LIMIT_K5, Box::new(criterion_3)),
        ("end to end k=9", LIMIT_K9, Box::new(criterion_4)),
        ("end to end k=7", LIMIT_K7, Box::new(criterion_5)),
        ("toy lift exhaustive", LIMIT_TOY_LIFT, Box::new(criterion_6)),
        ("orbit orders k=5, n=3", LIMIT_ORBIT, Box::new(move || criterion_7(d))),
        ("planner totality", LIMIT_PLANNER, Box::new(criterion_8)),
        ("property suites", LIMIT_PROPERTIES, Box::new(move || criterion_9(d))),
    ];
    let mut failures = Vec::new();
    for (i, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = run();
        let elapsed = start.elapsed();
        let result = result.and_then(|()| {
            if elapsed <= *limit {
                Ok(())
            } else {
                Err(format!("took {elapsed:.2?}, limit {limit:?}"))
            }
        });
        match &result {
            Ok(()) => println!("PASS {} {name} ({elapsed:.2?} of {limit:?})", i + 1),
            Err(e) => {
                println!("FAIL {} {name}: {e}", i + 1);
                failures.push(i + 1);
            }
        }
    }
    if !failures.is_empty() {
        eprintln!("failed criteria: {failures:?}");
        std::process::exit(1);
    }
}
