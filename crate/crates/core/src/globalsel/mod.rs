// SPDX-License-Identifier: Apache-2.0
//! Global Selmer ratios across a twist family and the exact statistics they
//! determine.
//!
//! The logarithmic ratio `t(φ_s) = Σ_v ord₃ c_v(φ_s)` is a finite sum over the
//! support places, and each summand depends only on the class of `s` in
//! `ℚ_v*/ℚ_v*²`. The family is therefore partitioned by tuples of local
//! classes, and each tuple carries the product of the local densities.

use crate::arith::{pow3, LocalSquareclassProfile, Place, Rat, Squareclass};
use crate::curves::ThreeIsogenyModel;
use crate::localsel::{local_ratio_table, LocalConfig, LocalError, LocalRatioTable, LocalSelmer, SelmerRatio};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GlobalError {
    #[error(transparent)]
    Local(#[from] LocalError),
    #[error("restriction mentions {0}, which is outside the support")]
    OutsideSupport(Place),
    #[error("restriction at {place} names {rep}, which is not a local class representative")]
    UnknownClass { place: Place, rep: i64 },
    #[error("restriction has density zero")]
    EmptyRestriction,
}

/// Allowed local classes at some support places; unrestricted elsewhere.
pub type Restriction = BTreeMap<Place, Vec<i64>>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TupleEntry {
    /// One representative per support place, in support order.
    pub classes: Vec<i64>,
    #[serde(with = "crate::arith::rat_string")]
    pub density: Rat,
    pub t: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistClassification {
    pub model: ThreeIsogenyModel,
    pub support: Vec<Place>,
    pub tuples: Vec<TupleEntry>,
    pub table: LocalRatioTable,
}

pub fn global_ratio(m: &ThreeIsogenyModel, s: Squareclass, cfg: &LocalConfig) -> Result<SelmerRatio, LocalError> {
    let ls = LocalSelmer::new(m.clone(), *cfg);
    global_ratio_with(&ls, s)
}

/// As [`global_ratio`], reusing a memo table.
pub fn global_ratio_with(ls: &LocalSelmer, s: Squareclass) -> Result<SelmerRatio, LocalError> {
    let mut t = 0;
    for place in crate::localsel::support(ls.model()) {
        t += ls.c_local(s, place)?.exponent();
    }
    Ok(SelmerRatio(t))
}

pub fn classify_twists(m: &ThreeIsogenyModel, cfg: &LocalConfig) -> Result<TwistClassification, LocalError> {
    let table = local_ratio_table(m, cfg)?;
    let support = table.support.clone();
    let mut tuples = vec![TupleEntry {
        classes: vec![],
        density: Rat::one(),
        t: 0,
    }];
    for &place in &support {
        let prof = LocalSquareclassProfile::new(place);
        let mut next = Vec::with_capacity(tuples.len() * prof.classes.len());
        for tup in &tuples {
            for (i, &rep) in prof.classes.iter().enumerate() {
                let dens = prof.density[i];
                let c = table.get(place, rep).expect("table covers the support");
                let mut classes = tup.classes.clone();
                classes.push(rep);
                next.push(TupleEntry {
                    classes,
                    density: &tup.density * Rat::new((*dens.numer()).into(), (*dens.denom()).into()),
                    t: tup.t + c.exponent(),
                });
            }
        }
        tuples = next;
    }
    Ok(TwistClassification {
        model: m.clone(),
        support,
        tuples,
        table,
    })
}

impl TwistClassification {
    fn check(&self, r: &Restriction) -> Result<(), GlobalError> {
        for (place, reps) in r {
            if !self.support.contains(place) {
                return Err(GlobalError::OutsideSupport(*place));
            }
            let prof = LocalSquareclassProfile::new(*place);
            if let Some(&rep) = reps.iter().find(|x| !prof.classes.contains(x)) {
                return Err(GlobalError::UnknownClass { place: *place, rep });
            }
        }
        Ok(())
    }

    fn admits(&self, tup: &TupleEntry, r: &Restriction) -> bool {
        self.support
            .iter()
            .zip(&tup.classes)
            .all(|(place, rep)| r.get(place).is_none_or(|v| v.contains(rep)))
    }

    /// Tuples in the restriction, with densities renormalised to sum to 1.
    pub fn restricted(&self, r: Option<&Restriction>) -> Result<Vec<TupleEntry>, GlobalError> {
        let empty = Restriction::new();
        let r = r.unwrap_or(&empty);
        self.check(r)?;
        let kept: Vec<&TupleEntry> = self.tuples.iter().filter(|t| self.admits(t, r)).collect();
        let total: Rat = kept.iter().map(|t| t.density.clone()).sum();
        if total.is_zero() {
            return Err(GlobalError::EmptyRestriction);
        }
        Ok(kept
            .into_iter()
            .map(|t| TupleEntry {
                density: &t.density / &total,
                ..t.clone()
            })
            .collect())
    }

    /// `μ(T_m)` with `T_m = {s : t(φ_s) = m}`.
    pub fn signed_densities(&self) -> BTreeMap<i64, Rat> {
        let mut out: BTreeMap<i64, Rat> = BTreeMap::new();
        for t in &self.tuples {
            *out.entry(t.t).or_insert_with(Rat::zero) += &t.density;
        }
        out
    }

    /// `μ(T_m)` with `T_m = {s : |t(φ_s)| = m}`.
    pub fn unsigned_densities(&self) -> BTreeMap<u64, Rat> {
        let mut out: BTreeMap<u64, Rat> = BTreeMap::new();
        for t in &self.tuples {
            *out.entry(t.t.unsigned_abs()).or_insert_with(Rat::zero) += &t.density;
        }
        out
    }

    /// Tuple containing a given twist.
    pub fn tuple_of(&self, s: Squareclass) -> &TupleEntry {
        let key: Vec<i64> = self
            .support
            .iter()
            .map(|&p| crate::arith::local_squareclass(s, p).rep)
            .collect();
        self.tuples.iter().find(|t| t.classes == key).expect("every class occurs")
    }
}

/// `1 + avg c(φ_s)`.
pub fn average_selmer_size(tc: &TwistClassification, r: Option<&Restriction>) -> Result<Rat, GlobalError> {
    let tuples = tc.restricted(r)?;
    Ok(Rat::one() + tuples.iter().map(|t| &t.density * pow3(t.t)).sum::<Rat>())
}

/// `avg(|t| + 3^{−|t|})`.
pub fn average_rank_bound(tc: &TwistClassification, r: Option<&Restriction>) -> Result<Rat, GlobalError> {
    let tuples = tc.restricted(r)?;
    Ok(tuples
        .iter()
        .map(|t| {
            let m = t.t.abs();
            &t.density * (Rat::from_integer(m.into()) + pow3(-m))
        })
        .sum())
}

/// Lower bounds `(μ(T₀)/2, 5μ(T₁)/6)` for the proportions of rank 0 and of
/// 3-Selmer rank 1.
pub fn rank0_and_selmer1_proportions(tc: &TwistClassification) -> (Rat, Rat) {
    let u = tc.unsigned_densities();
    let get = |m: u64| u.get(&m).cloned().unwrap_or_else(Rat::zero);
    (get(0) / Rat::from_integer(2.into()), get(1) * Rat::new(5.into(), 6.into()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TupleRow {
    pub classes: BTreeMap<String, i64>,
    pub density: String,
    pub t: i64,
}

/// Exact summary, every number rendered as a string.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DensityReport {
    pub model: String,
    pub support: Vec<String>,
    pub tuples: Vec<TupleRow>,
    pub densities: BTreeMap<String, String>,
    pub densities_unsigned: BTreeMap<String, String>,
    pub avg_selmer: String,
    pub avg_rank_bound: String,
    pub proportions: [String; 2],
}

pub fn density_report(tc: &TwistClassification, r: Option<&Restriction>) -> Result<DensityReport, GlobalError> {
    let restricted = tc.restricted(r)?;
    let sub = TwistClassification {
        tuples: restricted.clone(),
        ..tc.clone()
    };
    let (p0, p1) = rank0_and_selmer1_proportions(&sub);
    Ok(DensityReport {
        model: tc.model.to_string(),
        support: tc.support.iter().map(|p| p.to_string()).collect(),
        tuples: restricted
            .iter()
            .map(|t| TupleRow {
                classes: tc.support.iter().map(|p| p.to_string()).zip(t.classes.iter().copied()).collect(),
                density: t.density.to_string(),
                t: t.t,
            })
            .collect(),
        densities: sub.signed_densities().into_iter().map(|(k, v)| (k.to_string(), v.to_string())).collect(),
        densities_unsigned: sub
            .unsigned_densities()
            .into_iter()
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .collect(),
        avg_selmer: average_selmer_size(tc, r)?.to_string(),
        avg_rank_bound: average_rank_bound(tc, r)?.to_string(),
        proportions: [p0.to_string(), p1.to_string()],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn m19() -> ThreeIsogenyModel {
        ThreeIsogenyModel::from_ints(1, (1, 1), (1, 2)).unwrap()
    }

    #[test]
    fn headline_numbers() {
        let tc = classify_twists(&m19(), &LocalConfig::default()).unwrap();
        let ud = tc.unsigned_densities();
        assert_eq!(ud.get(&0), Some(&rat(1, 2)), "{ud:?}");
        assert_eq!(ud.get(&1), Some(&rat(1, 2)));
        assert_eq!(ud.len(), 2);
        let sd = tc.signed_densities();
        assert_eq!(sd.get(&-1), Some(&rat(21, 80)));
        assert_eq!(sd.get(&1), Some(&rat(19, 80)));
        assert_eq!(average_selmer_size(&tc, None).unwrap(), rat(23, 10));
        assert_eq!(average_rank_bound(&tc, None).unwrap(), rat(7, 6));
        assert_eq!(rank0_and_selmer1_proportions(&tc), (rat(1, 4), rat(5, 12)));
        assert_eq!(tc.tuples.len(), 32);
    }

    #[test]
    fn densities_sum_to_one() {
        for (d, a, b) in [(1, (1, 1), (1, 2)), (-3, (0, 1), (2, 1)), (5, (1, 1), (3, 1)), (-2, (1, 3), (1, 1))] {
            let m = ThreeIsogenyModel::from_ints(d, a, b).unwrap();
            let tc = classify_twists(&m, &LocalConfig::default()).unwrap();
            let total: Rat = tc.signed_densities().values().cloned().sum();
            assert_eq!(total, Rat::one());
        }
    }

    #[test]
    fn dual_negates() {
        let cfg = LocalConfig::default();
        let tc = classify_twists(&m19(), &cfg).unwrap();
        let td = classify_twists(&m19().dual(), &cfg).unwrap();
        let a = tc.signed_densities();
        let b: BTreeMap<i64, Rat> = td.signed_densities().into_iter().map(|(k, v)| (-k, v)).collect();
        assert_eq!(a, b);
    }

    #[test]
    fn restrictions() {
        let tc = classify_twists(&m19(), &LocalConfig::default()).unwrap();
        let tup = tc.tuples[5].clone();
        let r: Restriction = tc.support.iter().copied().zip(tup.classes.iter().map(|&c| vec![c])).collect();
        assert_eq!(average_selmer_size(&tc, Some(&r)).unwrap(), Rat::one() + pow3(tup.t));
        let bad: Restriction = [(Place::Finite(5), vec![1])].into_iter().collect();
        assert_eq!(average_selmer_size(&tc, Some(&bad)), Err(GlobalError::OutsideSupport(Place::Finite(5))));
        let unknown: Restriction = [(Place::Finite(19), vec![7])].into_iter().collect();
        assert!(matches!(average_selmer_size(&tc, Some(&unknown)), Err(GlobalError::UnknownClass { .. })));
        let empty: Restriction = [(Place::Finite(19), vec![])].into_iter().collect();
        assert_eq!(average_rank_bound(&tc, Some(&empty)), Err(GlobalError::EmptyRestriction));
    }

    #[test]
    fn tuple_t_matches_direct_sum() {
        let cfg = LocalConfig::default();
        let tc = classify_twists(&m19(), &cfg).unwrap();
        for s in crate::arith::squarefree_sorted(200) {
            let s = Squareclass::new(s).unwrap();
            assert_eq!(tc.tuple_of(s).t, global_ratio(&m19(), s, &cfg).unwrap().exponent());
        }
    }
}
