// SPDX-License-Identifier: Apache-2.0
//! Run configuration: a TOML key-value file, then environment, then flags.

use crate::arith::{LocalSquareclassProfile, Place};
use crate::curves::{extract_isogeny_model_at, ThreeIsogenyModel, WeierstrassCurve};
use crate::globalsel::Restriction;
use crate::localsel::{support, CaseBReading};
use serde::Deserialize;
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use super::CliError;

/// Largest height bound accepted unless `x_cap` is raised explicitly.
pub const DEFAULT_X_CAP: u64 = 1_000_000;

/// Keys accepted in the config file. Every key is optional.
#[derive(Debug, Clone, Default, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    /// a-invariants, `"a1,a2,a3,a4,a6"` or `"a4,a6"`.
    pub curve: Option<String>,
    /// `"(D,a,b)"`.
    pub model: Option<String>,
    pub kernel: Option<usize>,
    pub x: Option<u64>,
    pub x_cap: Option<u64>,
    /// Place → allowed local class representatives.
    pub sigma: Option<BTreeMap<String, Vec<i64>>>,
    pub disc_bound: Option<u64>,
    pub twisting_factor: Option<u64>,
    pub max_escalations: Option<u32>,
    pub audit: Option<bool>,
    pub case_b: Option<String>,
    pub cache: Option<PathBuf>,
    pub csv: Option<PathBuf>,
    pub checkpoints: Option<u64>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }
}

/// Everything a command needs after merging file, environment and flags.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub model: ThreeIsogenyModel,
    /// The Weierstrass input, when the curve was given that way.
    pub curve: Option<WeierstrassCurve>,
    pub x: Option<u64>,
    pub x_cap: u64,
    pub sigma: Option<Restriction>,
    pub disc_bound: u64,
    pub twisting_factor: Option<u64>,
    pub max_escalations: u32,
    pub audit: bool,
    pub case_b: CaseBReading,
    pub cache: Option<PathBuf>,
    pub csv: Option<PathBuf>,
    pub checkpoints: u64,
}

/// Parses `--sigma` JSON such as `{"3": [1, 2], "inf": [-1]}`.
pub fn parse_sigma_json(text: &str) -> Result<BTreeMap<String, Vec<i64>>, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Config(format!("sigma: {e}")))
}

/// Checks a restriction against the support of `m`.
pub fn restriction(m: &ThreeIsogenyModel, raw: &BTreeMap<String, Vec<i64>>) -> Result<Restriction, CliError> {
    let sup = support(m);
    let mut out = Restriction::new();
    for (k, reps) in raw {
        let place: Place = k.parse().map_err(CliError::Config)?;
        if !sup.contains(&place) {
            return Err(CliError::Config(format!("sigma: {place} is not a support place")));
        }
        let prof = LocalSquareclassProfile::new(place);
        if let Some(r) = reps.iter().find(|r| !prof.classes.contains(r)) {
            return Err(CliError::Config(format!(
                "sigma: {r} is not a class representative at {place} (expected one of {:?})",
                prof.classes
            )));
        }
        out.insert(place, reps.clone());
    }
    Ok(out)
}

pub fn parse_case_b(s: &str) -> Result<CaseBReading, CliError> {
    match s {
        "full" | "full-three-torsion" => Ok(CaseBReading::FullThreeTorsion),
        "kernel" | "kernel-only" => Ok(CaseBReading::KernelOnly),
        _ => Err(CliError::Config(format!("case_b: expected full or kernel, got {s}"))),
    }
}

/// Resolves the curve input to a model.
pub fn model_from_input(
    curve: Option<&str>,
    model: Option<&str>,
    kernel: usize,
) -> Result<(ThreeIsogenyModel, Option<WeierstrassCurve>), CliError> {
    match (curve, model) {
        (Some(_), Some(_)) => Err(CliError::Config("give either a curve or a model, not both".into())),
        (None, None) => Err(CliError::Config("no curve given (use --curve or --model)".into())),
        (Some(c), None) => {
            let e: WeierstrassCurve = c.parse()?;
            Ok((extract_isogeny_model_at(&e, kernel)?, Some(e)))
        }
        (None, Some(m)) => Ok((m.parse()?, None)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_config_parses() {
        let c = FileConfig::parse(
            "curve = \"0,1,1,1,0\"\nx = 500\naudit = true\n[sigma]\n\"3\" = [1, -1]\ninf = [-1]\n",
        )
        .unwrap();
        assert_eq!(c.x, Some(500));
        assert_eq!(c.audit, Some(true));
        assert_eq!(c.sigma.unwrap()["inf"], vec![-1]);
        assert!(FileConfig::parse("nonsense = 1").is_err());
    }

    #[test]
    fn restriction_is_checked() {
        let m = ThreeIsogenyModel::from_ints(1, (1, 1), (1, 2)).unwrap();
        let ok = parse_sigma_json(r#"{"19": [1, 2], "inf": [-1]}"#).unwrap();
        assert_eq!(restriction(&m, &ok).unwrap().len(), 2);
        let bad_place = parse_sigma_json(r#"{"5": [1]}"#).unwrap();
        assert!(restriction(&m, &bad_place).is_err());
        let bad_rep = parse_sigma_json(r#"{"19": [3]}"#).unwrap();
        assert!(restriction(&m, &bad_rep).is_err());
    }

    #[test]
    fn both_inputs_agree() {
        let (a, _) = model_from_input(Some("0,1,1,1,0"), None, 0).unwrap();
        let (b, _) = model_from_input(None, Some(&a.to_string()), 0).unwrap();
        assert_eq!(a, b);
    }
}
