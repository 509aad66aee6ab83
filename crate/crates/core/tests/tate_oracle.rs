// SPDX-License-Identifier: Apache-2.0
//! Tate's algorithm and minimal models against frozen reference data.

use selmer3::curves::{global_reduction, minimal_model, tate_algorithm, WeierstrassCurve};
use serde_json::Value;

fn load(name: &str) -> Vec<Value> {
    let path = format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    let text = std::fs::read_to_string(path).expect("fixture present");
    serde_json::from_str(&text).expect("valid json")
}

fn curve(v: &Value) -> WeierstrassCurve {
    let a: Vec<String> = v.as_array().unwrap().iter().map(|x| x.as_str().unwrap().to_string()).collect();
    a.join(",").parse().unwrap()
}

fn check(entry: &Value) -> Result<(), String> {
    let e = curve(&entry["ainvs"]);
    let (m, _) = minimal_model(&e);
    let want = curve(&entry["minimal"]);
    if m != want {
        return Err(format!("{e}: minimal model {m}, expected {want}"));
    }
    let (cond, _) = global_reduction(&e);
    if cond.to_string() != entry["conductor"].as_str().unwrap() {
        return Err(format!("{e}: conductor {cond}"));
    }
    for l in entry["local"].as_array().unwrap() {
        let p = l["p"].as_u64().unwrap();
        let ld = tate_algorithm(&e, p);
        let got = (ld.kodaira.to_string(), ld.conductor_exp, ld.tamagawa, ld.v_delta_min);
        let exp = (
            l["kodaira"].as_str().unwrap().to_string(),
            l["f"].as_u64().unwrap() as u32,
            l["c"].as_u64().unwrap() as u32,
            l["vdelta_min"].as_u64().unwrap() as u32,
        );
        if got != exp {
            return Err(format!("{e} at {p}: got {got:?}, expected {exp:?}"));
        }
    }
    Ok(())
}

#[test]
fn named_fleet_matches_reference() {
    let fleet = load("tate_fleet.json");
    assert!(fleet.len() >= 20);
    let errs: Vec<String> = fleet.iter().filter_map(|e| check(e).err()).collect();
    assert!(errs.is_empty(), "{errs:#?}");
}

#[test]
fn random_fleet_matches_reference() {
    let fleet = load("tate_random.json");
    let errs: Vec<String> = fleet.iter().filter_map(|e| check(e).err()).collect();
    assert!(errs.is_empty(), "{} failures, first: {:#?}", errs.len(), &errs[..errs.len().min(5)]);
}
