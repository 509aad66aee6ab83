// SPDX-License-Identifier: Apache-2.0
//! Local Selmer ratios `c_v(φ_s) = |E′_s(ℚ_v)/φE_s(ℚ_v)| / |E_s[φ](ℚ_v)|`.

use crate::arith::{
    local_squareclass, padic_valuation, ArithError, Int, LocalSquareclassProfile, Place, Rat, Squareclass,
};
use crate::curves::{global_reduction, isogeny_alpha_at_3, tate_algorithm, CurveError, Kodaira, Split, ThreeIsogenyModel};
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::RwLock;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LocalError {
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error("prime 3 must go through c_3")]
    PrimeIsThree,
    #[error("{0}")]
    Table(String),
}

/// `c = 3^exponent`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct SelmerRatio(pub i64);

impl SelmerRatio {
    pub const ONE: SelmerRatio = SelmerRatio(0);
    pub fn exponent(self) -> i64 {
        self.0
    }
    pub fn value(self) -> Rat {
        crate::arith::pow3(self.0)
    }
}

impl fmt::Display for SelmerRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

/// Which torsion group decides case (b) of the away-from-3 rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum CaseBReading {
    /// `c = 3` iff `E[3](ℚ_p) = 0`.
    #[default]
    FullThreeTorsion,
    /// `c = 3` iff `E[φ](ℚ_p) = 0`.
    KernelOnly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct LocalConfig {
    pub case_b: CaseBReading,
}

fn v(x: &Rat, p: u64) -> i64 {
    padic_valuation(x, &Int::from(p)).expect("nonzero")
}

fn v3_int(n: u32) -> i64 {
    let mut n = n;
    let mut e = 0;
    while n % 3 == 0 {
        n /= 3;
        e += 1;
    }
    e
}

pub fn c_infinity(m: &ThreeIsogenyModel, s: Squareclass) -> SelmerRatio {
    if (m.d() * s.rep()).is_positive() {
        SelmerRatio(-1)
    } else {
        SelmerRatio::ONE
    }
}

/// `v₃(c(E′_s)/c(E_s))` at `p`, from Tate's algorithm on both curves.
pub fn tamagawa_ratio_exponent(m: &ThreeIsogenyModel, s: Squareclass, p: u64) -> i64 {
    let t = m.twist(s);
    let e = tate_algorithm(&t.curve(), p);
    let ep = tate_algorithm(&t.dual().curve(), p);
    v3_int(ep.tamagawa) - v3_int(e.tamagawa)
}

pub fn c_p_away_from_3(
    m: &ThreeIsogenyModel,
    s: Squareclass,
    p: u64,
    cfg: &LocalConfig,
) -> Result<SelmerRatio, LocalError> {
    if p == 3 {
        return Err(LocalError::PrimeIsThree);
    }
    let t = m.twist(s);
    let e = t.curve();
    let ld = tate_algorithm(&e, p);
    let exp = match ld.kodaira {
        Kodaira::In(n) if ld.split == Split::Split => {
            let ldp = tate_algorithm(&t.dual().curve(), p);
            let Kodaira::In(np) = ldp.kodaira else {
                return Err(LocalError::Table(format!("isogenous curve is {} at {p}", ldp.kodaira)));
            };
            debug_assert_eq!(-(n as i64), v(&e.j(), p));
            match (np * 3 == n, n * 3 == np) {
                (true, _) => -1,
                (_, true) => 1,
                _ => return Err(LocalError::Table(format!("v(j) = -{n}, v(j') = -{np} at {p}"))),
            }
        }
        Kodaira::IV | Kodaira::IVStar if p % 3 != 1 => {
            let trivial = match cfg.case_b {
                // additive reduction at p ≠ 3: E(ℚ_p)[3] injects into the component group
                CaseBReading::FullThreeTorsion => ld.tamagawa != 3,
                CaseBReading::KernelOnly => t.torsion_kernel_sizes_local(Place::Finite(p)).0 == 1,
            };
            if trivial {
                1
            } else {
                -1
            }
        }
        _ => 0,
    };
    Ok(SelmerRatio(exp))
}

pub fn c_3(m: &ThreeIsogenyModel, s: Squareclass) -> Result<SelmerRatio, LocalError> {
    let t = m.twist(s);
    let e = t.curve();
    let ld = tate_algorithm(&e, 3);
    let ldp = tate_algorithm(&t.dual().curve(), 3);
    let ratio = v3_int(ldp.tamagawa) - v3_int(ld.tamagawa);
    let j = e.j();
    let potentially_good = j.is_zero() || v(&j, 3) >= 0;
    let ordinary = potentially_good && !j.is_zero() && v(&j, 3) == 0;
    let expected = if ordinary {
        Some(0)
    } else if !potentially_good {
        match (ld.kodaira, ldp.kodaira, ld.split) {
            (Kodaira::In(n), Kodaira::In(np), Split::Split) => Some(if np > n { 1 } else { -1 }),
            _ => Some(0),
        }
    } else {
        None
    };
    if let Some(x) = expected {
        if x != ratio {
            return Err(LocalError::Table(format!(
                "Tamagawa ratio 3^{ratio} at 3 for {} reduction, expected 3^{x}",
                ld.kodaira
            )));
        }
    }
    let alpha = isogeny_alpha_at_3(&t)?;
    Ok(SelmerRatio(ratio + alpha.exponent))
}

pub fn c_local(m: &ThreeIsogenyModel, s: Squareclass, place: Place, cfg: &LocalConfig) -> Result<SelmerRatio, LocalError> {
    match place {
        Place::Infinity => Ok(c_infinity(m, s)),
        Place::Finite(3) => c_3(m, s),
        Place::Finite(p) => c_p_away_from_3(m, s, p, cfg),
    }
}

/// Places where some twist can have a nontrivial local ratio: `p | 3·N_E` and `∞`.
pub fn support(m: &ThreeIsogenyModel) -> Vec<Place> {
    let (cond, _) = global_reduction(&m.curve());
    let mut ps: Vec<u64> = crate::arith::factor(&(cond * Int::from(3)))
        .expect("nonzero")
        .into_iter()
        .map(|(p, _)| num_traits::ToPrimitive::to_u64(&p).expect("small prime"))
        .collect();
    ps.sort_unstable();
    ps.into_iter().map(Place::Finite).chain([Place::Infinity]).collect()
}

/// One entry per (place, local class) over the support.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalRatioTable {
    pub support: Vec<Place>,
    pub entries: BTreeMap<Place, Vec<(i64, SelmerRatio)>>,
}

impl LocalRatioTable {
    pub fn get(&self, place: Place, rep: i64) -> Option<SelmerRatio> {
        self.entries
            .get(&place)?
            .iter()
            .find(|(r, _)| *r == rep)
            .map(|&(_, c)| c)
    }
}

pub fn local_ratio_table(m: &ThreeIsogenyModel, cfg: &LocalConfig) -> Result<LocalRatioTable, LocalError> {
    let support = support(m);
    let mut entries = BTreeMap::new();
    for &place in &support {
        let prof = LocalSquareclassProfile::new(place);
        let mut row = Vec::new();
        for &rep in &prof.classes {
            row.push((rep, c_local(m, Squareclass::new(rep)?, place, cfg)?));
        }
        entries.insert(place, row);
    }
    Ok(LocalRatioTable { support, entries })
}

/// Memoised local ratios for one model, keyed by local squareclass.
#[derive(Debug)]
pub struct LocalSelmer {
    model: ThreeIsogenyModel,
    cfg: LocalConfig,
    memo: RwLock<HashMap<(Place, i64), SelmerRatio>>,
}

impl LocalSelmer {
    pub fn new(model: ThreeIsogenyModel, cfg: LocalConfig) -> Self {
        LocalSelmer {
            model,
            cfg,
            memo: RwLock::new(HashMap::new()),
        }
    }

    pub fn model(&self) -> &ThreeIsogenyModel {
        &self.model
    }

    pub fn c_local(&self, s: Squareclass, place: Place) -> Result<SelmerRatio, LocalError> {
        let key = (place, local_squareclass(s, place).rep);
        if let Some(&c) = self.memo.read().expect("memo lock").get(&key) {
            return Ok(c);
        }
        let c = c_local(&self.model, Squareclass::new(key.1)?, place, &self.cfg)?;
        self.memo.write().expect("memo lock").insert(key, c);
        Ok(c)
    }
}

impl ThreeIsogenyModel {
    /// `(|E[φ](ℚ_v)|, |E′[φ̂](ℚ_v)|)`.
    pub fn torsion_kernel_sizes_local(&self, place: Place) -> (u32, u32) {
        let d = Rat::from_integer(self.d().clone());
        let sq = |x: &Rat| crate::arith::is_square_in_qp(x, place);
        let k = if sq(&d) { 3 } else { 1 };
        let kd = if sq(&(Rat::from_integer((-3).into()) * d)) { 3 } else { 1 };
        (k, kd)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m19() -> ThreeIsogenyModel {
        ThreeIsogenyModel::from_ints(1, (1, 1), (1, 2)).unwrap()
    }

    fn sc(s: i64) -> Squareclass {
        Squareclass::new(s).unwrap()
    }

    #[test]
    fn infinity_examples() {
        let one = ThreeIsogenyModel::from_ints(1, (0, 1), (1, 1)).unwrap();
        assert_eq!(c_infinity(&one, sc(1)), SelmerRatio(-1));
        assert_eq!(c_infinity(&one, sc(-1)), SelmerRatio(0));
        let m3 = ThreeIsogenyModel::from_ints(-3, (0, 1), (1, 1)).unwrap();
        assert_eq!(c_infinity(&m3, sc(-1)), SelmerRatio(-1));
        assert_eq!(SelmerRatio(-1).to_string(), "1/3");
    }

    #[test]
    fn good_primes_are_trivial() {
        let cfg = LocalConfig::default();
        for s in [1, -1, 2, -2, 5, 7, 10, -14, 21] {
            for p in [2, 5, 7, 11, 13] {
                assert_eq!(c_p_away_from_3(&m19(), sc(s), p, &cfg).unwrap(), SelmerRatio::ONE, "s={s} p={p}");
            }
        }
    }

    #[test]
    fn memo_agrees_with_direct() {
        let ls = LocalSelmer::new(m19(), LocalConfig::default());
        for s in [1, -1, 2, 3, -3, 19, -19, 38, 57, -57, 11, 13] {
            for place in support(&m19()) {
                let direct = c_local(&m19(), sc(s), place, &LocalConfig::default()).unwrap();
                assert_eq!(ls.c_local(sc(s), place).unwrap(), direct, "s={s} at {place}");
            }
        }
    }

    #[test]
    fn support_of_19a3() {
        assert_eq!(support(&m19()), vec![Place::Finite(3), Place::Finite(19), Place::Infinity]);
    }

    #[test]
    fn product_rule_at_3() {
        for s in [1, -1, 2, -2, 3, -3, 6, -6, 5, 15] {
            let a = c_3(&m19(), sc(s)).unwrap();
            let b = c_3(&m19().dual(), sc(s)).unwrap();
            assert_eq!(a.0 + b.0, 1, "s = {s}");
        }
    }
}
