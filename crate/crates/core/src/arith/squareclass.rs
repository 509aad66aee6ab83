// SPDX-License-Identifier: Apache-2.0
//! Squareclasses of ℚ* and of its completions.

use super::{factor_u64, mod_floor_i64, mod_pow_u64, val_int, ArithError, Int, Rat};
use num_rational::Ratio;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Class of ℚ*/ℚ*², represented by its unique squarefree integer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "i64", into = "i64")]
pub struct Squareclass(i64);

impl Squareclass {
    pub fn new(rep: i64) -> Result<Self, ArithError> {
        if rep == 0 {
            return Err(ArithError::Zero);
        }
        if factor_u64(rep.unsigned_abs()).iter().any(|&(_, e)| e > 1) {
            return Err(ArithError::NotSquarefree(rep.to_string()));
        }
        Ok(Squareclass(rep))
    }

    /// The class of an arbitrary nonzero rational.
    pub fn of_rational(x: &Rat) -> Result<Self, ArithError> {
        let s = super::squarefree_part_rat(x)?;
        Squareclass::new(s.to_i64().ok_or(ArithError::NotSquarefree(s.to_string()))?)
    }

    pub const ONE: Squareclass = Squareclass(1);

    pub fn rep(self) -> i64 {
        self.0
    }

    pub fn as_int(self) -> Int {
        Int::from(self.0)
    }

    /// `|s|` as the height over ℚ.
    pub fn height(self) -> u64 {
        self.0.unsigned_abs()
    }
}

impl TryFrom<i64> for Squareclass {
    type Error = ArithError;
    fn try_from(v: i64) -> Result<Self, Self::Error> {
        Squareclass::new(v)
    }
}

impl From<Squareclass> for i64 {
    fn from(s: Squareclass) -> i64 {
        s.0
    }
}

impl fmt::Display for Squareclass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A place of ℚ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Place {
    Finite(u64),
    Infinity,
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Finite(p) => write!(f, "{p}"),
            Place::Infinity => write!(f, "inf"),
        }
    }
}

impl std::str::FromStr for Place {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "inf" | "infinity" | "oo" => Ok(Place::Infinity),
            t => t
                .parse::<u64>()
                .ok()
                .filter(|&p| p >= 2 && factor_u64(p) == vec![(p, 1)])
                .map(Place::Finite)
                .ok_or_else(|| format!("not a place: {t}")),
        }
    }
}

/// A class of ℚ_v*/ℚ_v*², by its canonical representative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LocalClass {
    pub place: Place,
    pub rep: i64,
}

/// Legendre symbol `(a/p)` for an odd prime `p`.
pub fn legendre(a: &Int, p: u64) -> i32 {
    let r = mod_floor_i64(a, p);
    if r == 0 {
        return 0;
    }
    if mod_pow_u64(r, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// Least positive quadratic non-residue modulo an odd prime.
pub fn least_nonresidue(p: u64) -> u64 {
    (2..p)
        .find(|&u| mod_pow_u64(u, (p - 1) / 2, p) == p - 1)
        .expect("odd prime has a non-residue")
}

/// Canonical class of a nonzero rational at `place`.
pub fn local_class_of(x: &Rat, place: Place) -> Result<LocalClass, ArithError> {
    if x.is_zero() {
        return Err(ArithError::Zero);
    }
    let rep = match place {
        Place::Infinity => {
            if x.is_positive() {
                1
            } else {
                -1
            }
        }
        Place::Finite(p) => {
            let pp = Int::from(p);
            let (mut n, mut d) = (x.numer().clone(), x.denom().clone());
            let vn = val_int(&n, &pp);
            let vd = val_int(&d, &pp);
            n /= num_traits::pow(pp.clone(), vn as usize);
            d /= num_traits::pow(pp.clone(), vd as usize);
            let odd_v = (vn as i64 - vd as i64).rem_euclid(2) == 1;
            // unit part u = n/d; its class is that of n·d
            let u = n * d;
            let pi = if odd_v { p as i64 } else { 1 };
            if p == 2 {
                (mod_floor_i64(&u, 8) as i64) * pi
            } else if legendre(&u, p) == 1 {
                pi
            } else {
                least_nonresidue(p) as i64 * pi
            }
        }
    };
    Ok(LocalClass { place, rep })
}

/// Image of a global squareclass in ℚ_v*/ℚ_v*².
pub fn local_squareclass(s: Squareclass, place: Place) -> LocalClass {
    local_class_of(&Rat::from_integer(s.as_int()), place).expect("nonzero")
}

/// Whether `x` is a nonzero square in ℚ_v.
pub fn is_square_in_qp(x: &Rat, place: Place) -> bool {
    matches!(local_class_of(x, place), Ok(c) if c.rep == 1)
}

/// The classes of ℚ_v*/ℚ_v*² with their densities among squarefree
/// integers ordered by absolute value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalSquareclassProfile {
    pub place: Place,
    pub classes: Vec<i64>,
    pub density: Vec<Ratio<i64>>,
}

impl LocalSquareclassProfile {
    pub fn new(place: Place) -> Self {
        let (classes, density) = match place {
            Place::Infinity => (vec![1, -1], vec![Ratio::new(1, 2); 2]),
            Place::Finite(2) => (
                vec![1, 3, 5, 7, 2, 6, 10, 14],
                [vec![Ratio::new(1, 6); 4], vec![Ratio::new(1, 12); 4]].concat(),
            ),
            Place::Finite(p) => {
                let u = least_nonresidue(p) as i64;
                let p = p as i64;
                let unit = Ratio::new(p, 2 * (p + 1));
                let unif = Ratio::new(1, 2 * (p + 1));
                (vec![1, u, p, u * p], vec![unit, unit, unif, unif])
            }
        };
        LocalSquareclassProfile {
            place,
            classes,
            density,
        }
    }

    pub fn density_of(&self, rep: i64) -> Option<Ratio<i64>> {
        self.classes
            .iter()
            .position(|&c| c == rep)
            .map(|i| self.density[i])
    }
}

/// Squarefree integers with `1 ≤ |s| ≤ x`, ordered by `|s|` with the
/// negative one first.
pub fn squarefree_sorted(x: u64) -> Vec<i64> {
    let n = x as usize;
    let mut sf = vec![true; n + 1];
    let mut d = 2usize;
    while d * d <= n {
        let sq = d * d;
        let mut k = sq;
        while k <= n {
            sf[k] = false;
            k += sq;
        }
        d += 1;
    }
    let mut out = Vec::new();
    for (m, &ok) in sf.iter().enumerate().skip(1) {
        if ok {
            out.push(-(m as i64));
            out.push(m as i64);
        }
    }
    out
}
