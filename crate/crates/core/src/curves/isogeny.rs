// SPDX-License-Identifier: Apache-2.0
//! The normalised 3-isogeny out of a model and its differential at 3.

use super::tate::minimal_model_with_shift;
use super::{tate_algorithm, CurveError, ThreeIsogenyModel, WeierstrassCurve};
use crate::arith::{padic_valuation, rat_int, Int, Rat};
use num_traits::Zero;
use serde::{Deserialize, Serialize};

/// Vélu quotient of `y² = x³ + D(ax+b)²` by `⟨(0, b√D)⟩`, normalised so that
/// the isogeny pulls the invariant differential back to itself.
pub fn velu_image(m: &ThreeIsogenyModel) -> WeierstrassCurve {
    let e = m.curve();
    // v = 2·a4 and w = 4·Db² for the kernel point at x = 0
    let v = rat_int(2.into()) * &e.a4;
    let w = rat_int(4.into()) * &e.a6;
    let a4 = &e.a4 - rat_int(5.into()) * &v;
    let a6 = &e.a6 - e.b2() * &v - rat_int(7.into()) * &w;
    WeierstrassCurve::new(Rat::zero(), e.a2.clone(), Rat::zero(), a4, a6).expect("isogenous curve is nonsingular")
}

/// What the reduction table says about α at 3.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum AlphaCheck {
    /// A decisive row applied and agreed with the differential computation.
    Agrees(String),
    /// No decisive row applies; the differential computation stands alone.
    Indecisive(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlphaAt3 {
    /// `α = 3^exponent`, exponent ∈ {0, 1}.
    pub exponent: i64,
    pub check: AlphaCheck,
}

fn v3(x: &Rat) -> i64 {
    padic_valuation(x, &Int::from(3)).expect("nonzero")
}

/// `α_{φ,ℚ₃} = |φ'(0)|⁻¹` measured on Néron differentials of minimal models.
pub fn isogeny_alpha_at_3(m: &ThreeIsogenyModel) -> Result<AlphaAt3, CurveError> {
    let e = m.curve();
    let ev = velu_image(m);
    let dual = m.dual().curve();
    debug_assert!(ev.c4() == dual.c4() && ev.c6() == dual.c6());
    let (emin, u, r) = minimal_model_with_shift(&e);
    let (evmin, uv, _) = minimal_model_with_shift(&ev);
    // φ*ω_V = ω, ω_min = u·ω, ω_V,min = u_V·ω_V
    let exponent = v3(&uv) - v3(&u);
    if !(0..=1).contains(&exponent) {
        return Err(CurveError::InconsistentWithTable(format!(
            "differential exponent {exponent} outside [0, 1]"
        )));
    }
    let j = e.j();
    let jp = ev.j();
    let vd = v3(&emin.disc());
    let vdp = v3(&evmin.disc());
    let table = if !j.is_zero() && v3(&j) < 0 {
        let (vj, vjp) = (v3(&j), v3(&jp));
        if vj == 3 * vjp {
            Some((0, "multiplicative, v(j) = 3v(j')"))
        } else if 3 * vj == vjp {
            Some((1, "multiplicative, 3v(j) = v(j')"))
        } else {
            return Err(CurveError::InconsistentWithTable(format!(
                "v(j) = {vj}, v(j') = {vjp} fit no multiplicative row"
            )));
        }
    } else if j.is_zero() || v3(&j) > 0 {
        match vd.cmp(&vdp) {
            std::cmp::Ordering::Less => Some((0, "potentially supersingular, v(Δ) < v(Δ')")),
            std::cmp::Ordering::Greater => Some((1, "potentially supersingular, v(Δ) > v(Δ')")),
            std::cmp::Ordering::Equal => None,
        }
    } else if tate_algorithm(&emin, 3).is_good() {
        // kernel x-coordinate on the minimal model is −r/u²
        let xk = -r / (&u * &u);
        let in_formal_group = !xk.is_zero() && v3(&xk) < 0;
        Some(if in_formal_group {
            (1, "ordinary, kernel in the formal group")
        } else {
            (0, "ordinary, kernel not in the formal group")
        })
    } else {
        None
    };
    let check = match table {
        Some((t, row)) if t == exponent => AlphaCheck::Agrees(row.to_string()),
        Some((t, row)) => {
            return Err(CurveError::InconsistentWithTable(format!(
                "{row}: table gives exponent {t}, differential gives {exponent}"
            )))
        }
        None if j.is_zero() || v3(&j) > 0 => AlphaCheck::Indecisive("potentially supersingular, v(Δ) = v(Δ')".into()),
        None => AlphaCheck::Indecisive("additive potentially ordinary".into()),
    };
    Ok(AlphaAt3 { exponent, check })
}
