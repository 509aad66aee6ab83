// SPDX-License-Identifier: Apache-2.0
//! Elliptic curves over ℚ carrying a rational 3-isogeny.
//!
//! A [`ThreeIsogenyModel`] `(D, a, b)` stands for `y² = x³ + D(ax + b)²`,
//! whose points `(0, ±b√D)` generate the kernel of the isogeny.

mod isogeny;
mod tate;

pub use isogeny::{isogeny_alpha_at_3, velu_image, AlphaAt3, AlphaCheck};
pub use tate::{
    global_reduction, minimal_model, minus_c6_square, tate_algorithm, Kodaira, LocalReductionData, Split,
};

use crate::arith::{
    factor, is_rational_square, poly::rational_roots, rat_int, rat_sqrt, squarefree_part,
    squarefree_part_rat, ArithError, Int, Rat, Squareclass,
};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CurveError {
    #[error("singular curve (discriminant zero)")]
    Singular,
    #[error("curve has no rational 3-isogeny")]
    NoRationalThreeIsogeny,
    #[error("curve has {0} rational 3-isogeny kernels; select one by index")]
    MultipleKernels(usize),
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("cannot parse {0:?}")]
    Parse(String),
    #[error("alpha at 3 disagrees with the reduction table: {0}")]
    InconsistentWithTable(String),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// Long Weierstrass equation `y² + a1·xy + a3·y = x³ + a2·x² + a4·x + a6`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeierstrassCurve {
    pub a1: Rat,
    pub a2: Rat,
    pub a3: Rat,
    pub a4: Rat,
    pub a6: Rat,
}

impl WeierstrassCurve {
    pub fn new(a1: Rat, a2: Rat, a3: Rat, a4: Rat, a6: Rat) -> Result<Self, CurveError> {
        let e = WeierstrassCurve { a1, a2, a3, a4, a6 };
        if e.disc().is_zero() {
            return Err(CurveError::Singular);
        }
        Ok(e)
    }

    pub fn from_ints(a: [i64; 5]) -> Result<Self, CurveError> {
        let [a1, a2, a3, a4, a6] = a.map(|v| rat_int(Int::from(v)));
        Self::new(a1, a2, a3, a4, a6)
    }

    pub fn ainvs(&self) -> [Rat; 5] {
        [
            self.a1.clone(),
            self.a2.clone(),
            self.a3.clone(),
            self.a4.clone(),
            self.a6.clone(),
        ]
    }

    pub fn b2(&self) -> Rat {
        &self.a1 * &self.a1 + Rat::from_integer(4.into()) * &self.a2
    }
    pub fn b4(&self) -> Rat {
        Rat::from_integer(2.into()) * &self.a4 + &self.a1 * &self.a3
    }
    pub fn b6(&self) -> Rat {
        &self.a3 * &self.a3 + Rat::from_integer(4.into()) * &self.a6
    }
    pub fn b8(&self) -> Rat {
        let (a1, a2, a3, a4, a6) = (&self.a1, &self.a2, &self.a3, &self.a4, &self.a6);
        a1 * a1 * a6 + Rat::from_integer(4.into()) * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
    }
    pub fn c4(&self) -> Rat {
        let b2 = self.b2();
        &b2 * &b2 - Rat::from_integer(24.into()) * self.b4()
    }
    pub fn c6(&self) -> Rat {
        let (b2, b4, b6) = (self.b2(), self.b4(), self.b6());
        -(&b2 * &b2 * &b2) + Rat::from_integer(36.into()) * &b2 * &b4
            - Rat::from_integer(216.into()) * b6
    }
    pub fn disc(&self) -> Rat {
        let (b2, b4, b6, b8) = (self.b2(), self.b4(), self.b6(), self.b8());
        -(&b2 * &b2 * &b8) - Rat::from_integer(8.into()) * &b4 * &b4 * &b4
            - Rat::from_integer(27.into()) * &b6 * &b6
            + Rat::from_integer(9.into()) * &b2 * &b4 * &b6
    }
    pub fn j(&self) -> Rat {
        let c4 = self.c4();
        &c4 * &c4 * &c4 / self.disc()
    }

    pub fn is_integral(&self) -> bool {
        self.ainvs().iter().all(|a| a.is_integer())
    }

    /// Applies `x = u²x' + r, y = u³y' + su²x' + t`.
    pub fn transform(&self, u: &Rat, r: &Rat, s: &Rat, t: &Rat) -> WeierstrassCurve {
        let (a1, a2, a3, a4, a6) = (&self.a1, &self.a2, &self.a3, &self.a4, &self.a6);
        let two = Rat::from_integer(2.into());
        let three = Rat::from_integer(3.into());
        let na1 = a1 + &two * s;
        let na2 = a2 - s * a1 + &three * r - s * s;
        let na3 = a3 + r * a1 + &two * t;
        let na4 = a4 - s * a3 + &two * r * a2 - (t + r * s) * a1 + &three * r * r - &two * s * t;
        let na6 = a6 + r * a4 + r * r * a2 + r * r * r - t * a3 - t * t - r * t * a1;
        let u2 = u * u;
        let u3 = &u2 * u;
        let u4 = &u2 * &u2;
        let u6 = &u3 * &u3;
        WeierstrassCurve {
            a1: na1 / u,
            a2: na2 / u2,
            a3: na3 / u3,
            a4: na4 / u4,
            a6: na6 / u6,
        }
    }

    /// Short model `y² = x³ + (b2/4)x² + (b4/2)x + b6/4` obtained by completing the square.
    pub fn completed_square(&self) -> [Rat; 3] {
        [
            self.b2() / Rat::from_integer(4.into()),
            self.b4() / Rat::from_integer(2.into()),
            self.b6() / Rat::from_integer(4.into()),
        ]
    }

    /// Quadratic twist by a nonzero rational `s`.
    pub fn quadratic_twist(&self, s: &Rat) -> WeierstrassCurve {
        let [c2, c4, c6] = self.completed_square();
        WeierstrassCurve {
            a1: Rat::zero(),
            a2: c2 * s,
            a3: Rat::zero(),
            a4: c4 * s * s,
            a6: c6 * s * s * s,
        }
    }

    /// Three-division polynomial `3x⁴ + b2x³ + 3b4x² + 3b6x + b8`, lowest degree first.
    pub fn psi3(&self) -> [Rat; 5] {
        let three = Rat::from_integer(3.into());
        [
            self.b8(),
            &three * self.b6(),
            &three * self.b4(),
            self.b2(),
            three,
        ]
    }
}

impl fmt::Display for WeierstrassCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a = self.ainvs().map(|x| x.to_string());
        write!(f, "[{}]", a.join(","))
    }
}

impl FromStr for WeierstrassCurve {
    type Err = CurveError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts = parse_rats(s)?;
        match parts.as_slice() {
            [a1, a2, a3, a4, a6] => Self::new(a1.clone(), a2.clone(), a3.clone(), a4.clone(), a6.clone()),
            [a4, a6] => Self::new(Rat::zero(), Rat::zero(), Rat::zero(), a4.clone(), a6.clone()),
            _ => Err(CurveError::Parse(s.to_string())),
        }
    }
}

/// Parses a comma-separated list of integers or fractions, brackets optional.
pub fn parse_rats(s: &str) -> Result<Vec<Rat>, CurveError> {
    s.trim()
        .trim_start_matches('[')
        .trim_end_matches(']')
        .split(',')
        .map(|t| parse_rat(t.trim()))
        .collect()
}

pub fn parse_rat(t: &str) -> Result<Rat, CurveError> {
    let err = || CurveError::Parse(t.to_string());
    match t.split_once('/') {
        Some((n, d)) => {
            let n: Int = n.trim().parse().map_err(|_| err())?;
            let d: Int = d.trim().parse().map_err(|_| err())?;
            if d.is_zero() {
                return Err(err());
            }
            Ok(Rat::new(n, d))
        }
        None => Ok(rat_int(t.parse().map_err(|_| err())?)),
    }
}

/// The model `y² = x³ + D(ax + b)²` with `D` squarefree and `b ≠ 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "ModelText", try_from = "ModelText")]
pub struct ThreeIsogenyModel {
    d: Int,
    a: Rat,
    b: Rat,
}

#[derive(Serialize, Deserialize)]
struct ModelText {
    d: String,
    a: String,
    b: String,
}

impl From<ThreeIsogenyModel> for ModelText {
    fn from(m: ThreeIsogenyModel) -> Self {
        ModelText {
            d: m.d.to_string(),
            a: m.a.to_string(),
            b: m.b.to_string(),
        }
    }
}

impl TryFrom<ModelText> for ThreeIsogenyModel {
    type Error = CurveError;
    fn try_from(t: ModelText) -> Result<Self, Self::Error> {
        let d = parse_rat(&t.d)?;
        if !d.is_integer() {
            return Err(CurveError::InvalidModel(t.d));
        }
        ThreeIsogenyModel::new(d.to_integer(), parse_rat(&t.a)?, parse_rat(&t.b)?)
    }
}

impl ThreeIsogenyModel {
    pub fn new(d: Int, a: Rat, b: Rat) -> Result<Self, CurveError> {
        if d.is_zero() || !crate::arith::is_squarefree(&d) {
            return Err(CurveError::InvalidModel(format!("D = {d} is not squarefree")));
        }
        Self::check(d, a, b)
    }

    fn check(d: Int, a: Rat, b: Rat) -> Result<Self, CurveError> {
        if b.is_zero() {
            return Err(CurveError::InvalidModel("b = 0".into()));
        }
        let m = ThreeIsogenyModel { d, a, b };
        if m.curve_disc().is_zero() {
            return Err(CurveError::Singular);
        }
        Ok(m)
    }

    /// Builds the model of `y² = x³ + D(ax + b)²` for any nonzero rational
    /// `D`, folding square factors of `D` into `a` and `b`.
    pub fn folded(d: &Rat, a: &Rat, b: &Rat) -> Result<Self, CurveError> {
        let s = squarefree_part_rat(d)?;
        let q = rat_sqrt(&(d / rat_int(s.clone()))).expect("quotient by squarefree part is a square");
        Self::check(s, a * &q, b * &q)
    }

    pub fn d(&self) -> &Int {
        &self.d
    }
    pub fn a(&self) -> &Rat {
        &self.a
    }
    pub fn b(&self) -> &Rat {
        &self.b
    }
    /// `D̂ = −3D`, unfolded.
    pub fn dhat(&self) -> Int {
        Int::from(-3) * &self.d
    }

    fn coeffs(&self) -> (Rat, Rat, Rat) {
        let d = rat_int(self.d.clone());
        let two = rat_int(2.into());
        (
            &d * &self.a * &self.a,
            two * &d * &self.a * &self.b,
            &d * &self.b * &self.b,
        )
    }

    fn curve_disc(&self) -> Rat {
        let (a2, a4, a6) = self.coeffs();
        WeierstrassCurve {
            a1: Rat::zero(),
            a2,
            a3: Rat::zero(),
            a4,
            a6,
        }
        .disc()
    }

    /// `y² = x³ + Da²x² + 2Dab·x + Db²`.
    pub fn curve(&self) -> WeierstrassCurve {
        let (a2, a4, a6) = self.coeffs();
        WeierstrassCurve::new(Rat::zero(), a2, Rat::zero(), a4, a6).expect("model is nonsingular")
    }

    /// Model of the isogenous curve `y² = x³ − 3D(ax + 3b − 4a³D/9)²`.
    pub fn dual(&self) -> ThreeIsogenyModel {
        let d = rat_int(self.d.clone());
        let bp = rat_int(3.into()) * &self.b
            - Rat::new(4.into(), 9.into()) * &self.a * &self.a * &self.a * &d;
        ThreeIsogenyModel::folded(&(rat_int((-3).into()) * d), &self.a, &bp)
            .expect("dual of a nonsingular model is nonsingular")
    }

    /// `E_s: y² = x³ + Ds(ax + bs)²`, refolded.
    pub fn twist(&self, s: Squareclass) -> ThreeIsogenyModel {
        let s = rat_int(s.as_int());
        ThreeIsogenyModel::folded(&(rat_int(self.d.clone()) * &s), &self.a, &(&self.b * &s))
            .expect("twist of a nonsingular model is nonsingular")
    }

    /// Twist by an arbitrary nonzero rational.
    pub fn twist_rat(&self, s: &Rat) -> ThreeIsogenyModel {
        ThreeIsogenyModel::folded(&(rat_int(self.d.clone()) * s), &self.a, &(&self.b * s))
            .expect("twist of a nonsingular model is nonsingular")
    }

    /// `(|E_s[φ](ℚ)|, |E′_s[φ̂](ℚ)|)`.
    pub fn torsion_kernel_sizes(&self, s: Squareclass) -> (u32, u32) {
        let ds = rat_int(&self.d * s.as_int());
        let k = if is_rational_square(&ds) { 3 } else { 1 };
        let kd = if is_rational_square(&(rat_int((-3).into()) * ds)) { 3 } else { 1 };
        (k, kd)
    }
}

impl fmt::Display for ThreeIsogenyModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.d, self.a, self.b)
    }
}

impl FromStr for ThreeIsogenyModel {
    type Err = CurveError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let v = parse_rats(s.trim().trim_start_matches('(').trim_end_matches(')'))?;
        match v.as_slice() {
            [d, a, b] => ThreeIsogenyModel::folded(d, a, b),
            _ => Err(CurveError::Parse(s.to_string())),
        }
    }
}

/// All rational 3-isogeny models of `E`, one per rational root of ψ₃,
/// ordered by `(|x₀|, x₀)`.
pub fn isogeny_kernels(e: &WeierstrassCurve) -> Vec<(Rat, ThreeIsogenyModel)> {
    let mut roots = rational_roots(&e.psi3());
    roots.sort_by(|x, y| x.abs().cmp(&y.abs()).then(x.cmp(y)));
    let [c2, c4, c6] = e.completed_square();
    roots
        .into_iter()
        .map(|x0| {
            // shift x ↦ x + x₀ in y² = x³ + c2x² + c4x + c6
            let three = rat_int(3.into());
            let n2 = &c2 + &three * &x0;
            let n4 = &c4 + rat_int(2.into()) * &c2 * &x0 + &three * &x0 * &x0;
            let n6 = &c6 + &c4 * &x0 + &c2 * &x0 * &x0 + &x0 * &x0 * &x0;
            assert_eq!(&n4 * &n4, rat_int(4.into()) * &n2 * &n6, "kernel shape");
            let d = squarefree_part_rat(&n6).expect("c6 nonzero at a 3-torsion point");
            let dd = rat_int(d.clone());
            let b = rat_sqrt(&(&n6 / &dd)).expect("c6/D is a square");
            let a = n4 / (rat_int(2.into()) * dd * &b);
            let m = ThreeIsogenyModel::new(d, a, b).expect("extracted model is valid");
            (x0, m)
        })
        .collect()
}

/// The unique rational 3-isogeny model of `E`.
pub fn extract_isogeny_model(e: &WeierstrassCurve) -> Result<ThreeIsogenyModel, CurveError> {
    let mut ks = isogeny_kernels(e);
    match ks.len() {
        0 => Err(CurveError::NoRationalThreeIsogeny),
        1 => Ok(ks.pop().unwrap().1),
        n => Err(CurveError::MultipleKernels(n)),
    }
}

/// Selects a kernel by index in the `(|x₀|, x₀)` order.
pub fn extract_isogeny_model_at(e: &WeierstrassCurve, index: usize) -> Result<ThreeIsogenyModel, CurveError> {
    let ks = isogeny_kernels(e);
    if ks.is_empty() {
        return Err(CurveError::NoRationalThreeIsogeny);
    }
    ks.into_iter()
        .nth(index)
        .map(|(_, m)| m)
        .ok_or(CurveError::MultipleKernels(index))
}

/// Primes dividing the conductor of `E`.
pub fn bad_primes(e: &WeierstrassCurve) -> Vec<Int> {
    let (emin, _) = minimal_model(e);
    let d = emin.disc().to_integer();
    factor(&d).expect("nonzero").into_iter().map(|(p, _)| p).collect()
}

/// Squarefree integer kernel of `Ds`.
pub fn squarefree_int(n: &Int) -> Int {
    squarefree_part(n).expect("nonzero").0
}

impl ThreeIsogenyModel {
    /// Convenience constructor for integer data.
    pub fn from_ints(d: i64, a: (i64, i64), b: (i64, i64)) -> Result<Self, CurveError> {
        ThreeIsogenyModel::folded(
            &rat_int(d.into()),
            &Rat::new(a.0.into(), a.1.into()),
            &Rat::new(b.0.into(), b.1.into()),
        )
    }

    pub fn is_one(&self) -> bool {
        self.d.is_one()
    }
}
