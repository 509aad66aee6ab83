// SPDX-License-Identifier: Apache-2.0
//! Empirical averages of `|Sel_φ(E_s)|` over squarefree `s` ordered by `|s|`.

use super::selmer::{DescentConfig, DescentContext};
use super::DescentError;
use crate::arith::{pow3, squarefree_sorted, Int, Rat, Squareclass};
use crate::curves::ThreeIsogenyModel;
use crate::globalsel::{average_selmer_size, classify_twists, GlobalError, Restriction, TwistClassification};
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SweepError {
    #[error(transparent)]
    Descent(#[from] DescentError),
    #[error(transparent)]
    Global(#[from] GlobalError),
    #[error("cache {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("cache {path}, line {line}: {msg}")]
    BadCache { path: PathBuf, line: usize, msg: String },
}

/// One JSONL cache record.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheLine {
    pub model: String,
    pub s: i64,
    pub sel_phi: u64,
    pub sel_phihat: u64,
    pub t: i64,
    pub consistent: bool,
}

#[derive(Debug, Clone, Default)]
pub struct SweepConfig {
    pub x: u64,
    pub restriction: Option<Restriction>,
    pub cache: Option<PathBuf>,
    pub descent: DescentConfig,
    /// Rows in the convergence series; the last row is always `X`.
    pub checkpoints: u64,
    /// Twists computed between cache flushes.
    pub chunk: usize,
}

/// Twists sharing one tuple of local classes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stratum {
    pub classes: Vec<i64>,
    pub t: i64,
    pub count: u64,
    #[serde(with = "crate::arith::rat_string")]
    pub average: Rat,
    /// `1 + 3^t`.
    #[serde(with = "crate::arith::rat_string")]
    pub prediction: Rat,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesRow {
    pub x: u64,
    pub count: u64,
    #[serde(with = "crate::arith::rat_string")]
    pub running_average: Rat,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepReport {
    pub model: String,
    pub x: u64,
    pub count: u64,
    #[serde(with = "crate::arith::rat_string")]
    pub average: Rat,
    #[serde(with = "crate::arith::rat_string")]
    pub prediction: Rat,
    pub consistent: u64,
    pub inconsistent: Vec<i64>,
    pub computed: u64,
    pub strata: Vec<Stratum>,
    pub series: Vec<SeriesRow>,
}

impl SweepReport {
    /// `X,running_average,prediction` with exact fractions.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("X,running_average,prediction\n");
        for r in &self.series {
            out.push_str(&format!("{},{},{}\n", r.x, r.running_average, self.prediction));
        }
        out
    }

    pub fn all_consistent(&self) -> bool {
        self.inconsistent.is_empty()
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> SweepError + '_ {
    move |source| SweepError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Cached records for `model`, keyed by `s`. Lines for other models are kept
/// in the file but ignored here.
pub fn read_cache(path: &Path, model: &str) -> Result<BTreeMap<i64, CacheLine>, SweepError> {
    let mut out = BTreeMap::new();
    if !path.exists() {
        return Ok(out);
    }
    let file = File::open(path).map_err(io_err(path))?;
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(io_err(path))?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: CacheLine = serde_json::from_str(&line).map_err(|e| SweepError::BadCache {
            path: path.to_path_buf(),
            line: i + 1,
            msg: e.to_string(),
        })?;
        if rec.model == model {
            out.insert(rec.s, rec);
        }
    }
    Ok(out)
}

fn append_cache(path: &Path, recs: &[CacheLine]) -> Result<(), SweepError> {
    let mut f = OpenOptions::new().create(true).append(true).open(path).map_err(io_err(path))?;
    let mut buf = String::new();
    for r in recs {
        buf.push_str(&serde_json::to_string(r).expect("plain record"));
        buf.push('\n');
    }
    f.write_all(buf.as_bytes()).map_err(io_err(path))?;
    f.flush().map_err(io_err(path))
}

/// Squarefree `s` with `|s| ≤ X` admitted by the restriction, in sweep order.
pub fn sweep_twists(tc: &TwistClassification, x: u64, r: Option<&Restriction>) -> Result<Vec<i64>, SweepError> {
    let allowed = tc.restricted(r)?;
    Ok(squarefree_sorted(x)
        .into_iter()
        .filter(|&s| {
            let tup = tc.tuple_of(Squareclass::new(s).expect("squarefree"));
            allowed.iter().any(|a| a.classes == tup.classes)
        })
        .collect())
}

pub fn sweep(m: &ThreeIsogenyModel, cfg: &SweepConfig) -> Result<SweepReport, SweepError> {
    let tc = classify_twists(m, &cfg.descent.local).map_err(GlobalError::from)?;
    let prediction = average_selmer_size(&tc, cfg.restriction.as_ref())?;
    let twists = sweep_twists(&tc, cfg.x, cfg.restriction.as_ref())?;
    let name = m.to_string();
    let mut cache = match &cfg.cache {
        Some(p) => read_cache(p, &name)?,
        None => BTreeMap::new(),
    };
    let missing: Vec<i64> = twists.iter().copied().filter(|s| !cache.contains_key(s)).collect();
    let ctx = DescentContext::new(m.clone(), cfg.descent.clone());
    let chunk = cfg.chunk.max(1);
    for part in missing.chunks(chunk) {
        let recs: Vec<CacheLine> = part
            .par_iter()
            .map(|&s| {
                let r = ctx.selmer_size(Squareclass::new(s).expect("squarefree"))?;
                Ok(CacheLine {
                    model: name.clone(),
                    s,
                    sel_phi: r.sel_phi_size,
                    sel_phihat: r.sel_phihat_size,
                    t: r.t,
                    consistent: r.cassels_consistent,
                })
            })
            .collect::<Result<_, DescentError>>()?;
        if let Some(p) = &cfg.cache {
            append_cache(p, &recs)?;
        }
        cache.extend(recs.into_iter().map(|r| (r.s, r)));
    }
    Ok(summarise(&tc, cfg, &twists, &cache, prediction, missing.len() as u64))
}

fn summarise(
    tc: &TwistClassification,
    cfg: &SweepConfig,
    twists: &[i64],
    cache: &BTreeMap<i64, CacheLine>,
    prediction: Rat,
    computed: u64,
) -> SweepReport {
    let checkpoints = cfg.checkpoints.max(1);
    let step = cfg.x.div_ceil(checkpoints).max(1);
    let mut series = Vec::new();
    let mut strata: BTreeMap<Vec<i64>, (i64, u64, u64)> = BTreeMap::new();
    let (mut count, mut total, mut consistent) = (0u64, 0u64, 0u64);
    let mut inconsistent = Vec::new();
    let mut next = step.min(cfg.x);
    let ratio = |tot: u64, n: u64| {
        if n == 0 {
            Rat::zero()
        } else {
            Rat::new(Int::from(tot), Int::from(n))
        }
    };
    let mut push_rows = |upto: u64, count: u64, total: u64, next: &mut u64| {
        while *next < upto {
            series.push(SeriesRow {
                x: *next,
                count,
                running_average: ratio(total, count),
            });
            *next = (*next + step).min(cfg.x);
        }
    };
    for &s in twists {
        let rec = &cache[&s];
        push_rows(s.unsigned_abs(), count, total, &mut next);
        count += 1;
        total += rec.sel_phi;
        if rec.consistent {
            consistent += 1;
        } else {
            inconsistent.push(s);
        }
        let tup = tc.tuple_of(Squareclass::new(s).expect("squarefree"));
        let e = strata.entry(tup.classes.clone()).or_insert((tup.t, 0, 0));
        e.1 += 1;
        e.2 += rec.sel_phi;
    }
    push_rows(cfg.x, count, total, &mut next);
    series.push(SeriesRow {
        x: cfg.x,
        count,
        running_average: ratio(total, count),
    });
    series.dedup_by_key(|r| r.x);
    SweepReport {
        model: tc.model.to_string(),
        x: cfg.x,
        count,
        average: ratio(total, count),
        prediction,
        consistent,
        inconsistent,
        computed,
        strata: strata
            .into_iter()
            .map(|(classes, (t, n, tot))| Stratum {
                classes,
                t,
                count: n,
                average: ratio(tot, n),
                prediction: Rat::one() + pow3(t),
            })
            .collect(),
        series,
    }
}

/// `|a/b − 1| ≤ tol`.
pub fn within(a: &Rat, b: &Rat, tol: &Rat) -> bool {
    let d = a / b - Rat::one();
    d <= *tol && -d <= *tol
}
