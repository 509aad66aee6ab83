// SPDX-License-Identifier: Apache-2.0
//! Arithmetic in the étale algebra `ℚ[σ]/(σ² − Δ)` and the cube class
//! attached to a form of discriminant `Δ`.

use super::{IntForm, Matrix};
use crate::arith::{exact_cbrt, rat_sqrt, Int, Rat};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;

/// `x + y·σ` with `σ² = Δ`.
#[derive(Clone, PartialEq, Eq)]
pub struct MirrorElement {
    pub x: Rat,
    pub y: Rat,
    pub delta: Int,
}

impl fmt::Debug for MirrorElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}·√{}", self.x, self.y, self.delta)
    }
}

impl MirrorElement {
    pub fn new(x: Rat, y: Rat, delta: Int) -> Self {
        MirrorElement { x, y, delta }
    }
    pub fn rational(x: Rat, delta: Int) -> Self {
        MirrorElement::new(x, Rat::zero(), delta)
    }
    fn dr(&self) -> Rat {
        Rat::from_integer(self.delta.clone())
    }
    pub fn mul(&self, o: &Self) -> Self {
        debug_assert_eq!(self.delta, o.delta);
        MirrorElement::new(
            &self.x * &o.x + self.dr() * &self.y * &o.y,
            &self.x * &o.y + &self.y * &o.x,
            self.delta.clone(),
        )
    }
    pub fn conj(&self) -> Self {
        MirrorElement::new(self.x.clone(), -&self.y, self.delta.clone())
    }
    pub fn norm(&self) -> Rat {
        &self.x * &self.x - self.dr() * &self.y * &self.y
    }
    pub fn scale(&self, r: &Rat) -> Self {
        MirrorElement::new(&self.x * r, &self.y * r, self.delta.clone())
    }
    /// `self / o`, or `None` if `o` is a zero divisor.
    pub fn div(&self, o: &Self) -> Option<Self> {
        let n = o.norm();
        if n.is_zero() {
            return None;
        }
        Some(self.mul(&o.conj()).scale(&n.recip()))
    }
    pub fn cube(&self) -> Self {
        self.mul(self).mul(self)
    }
}

/// Integer roots of the monic cubic `T³ + pT + q`.
fn integer_roots_depressed(p: &Int, q: &Int) -> Vec<Int> {
    let g = |t: &Int| t * t * t + p * t + q;
    let bound = Int::one() + p.abs().max(q.abs());
    let mut pieces: Vec<(Int, Int, bool)> = Vec::new();
    if p.is_negative() {
        let s = (-p / Int::from(3)).sqrt();
        let s1 = &s + 1u32;
        pieces.push((-&bound, -&s1, true));
        pieces.push((-&s, s.clone(), false));
        pieces.push((s1, bound, true));
    } else {
        pieces.push((-&bound, bound, true));
    }
    let mut out = Vec::new();
    for (mut lo, mut hi, increasing) in pieces {
        if lo > hi {
            continue;
        }
        // smallest t in [lo, hi] with g(t) ≥ 0 (increasing) or ≤ 0 (decreasing)
        let ok = |t: &Int| {
            let v = g(t);
            if increasing {
                !v.is_negative()
            } else {
                !v.is_positive()
            }
        };
        if !ok(&hi) {
            continue;
        }
        while lo < hi {
            let mid = (&lo + &hi).div_floor(&Int::from(2));
            if ok(&mid) {
                hi = mid;
            } else {
                lo = mid + 1u32;
            }
        }
        if g(&lo).is_zero() && !out.contains(&lo) {
            out.push(lo);
        }
    }
    out
}

/// Whether `γ` is a cube in `ℚ[σ]/(σ² − Δ)`; zero divisors are not.
pub fn is_cube(gamma: &MirrorElement) -> bool {
    cube_root(gamma).is_some()
}

pub fn cube_root(gamma: &MirrorElement) -> Option<MirrorElement> {
    if gamma.norm().is_zero() {
        return None;
    }
    // clear denominators by a cube so that γ ∈ ℤ[σ]
    let l = gamma.x.denom().lcm(gamma.y.denom());
    let l3 = Rat::from_integer(&l * &l * &l);
    let g = gamma.scale(&l3);
    let (x, y) = (g.x.to_integer(), g.y.to_integer());
    let n = exact_cbrt(&(&x * &x - &g.delta * &y * &y))?;
    // κ = (T + wσ)/2 is integral over ℤ; its trace solves T³ − 3nT − 2x = 0
    let dr = Rat::from_integer(g.delta.clone());
    for t in integer_roots_depressed(&(Int::from(-3) * &n), &(Int::from(-2) * &x)) {
        let disc = Rat::from_integer(&t * &t - Int::from(4) * &n);
        let Some(w) = rat_sqrt(&(disc / &dr)) else {
            continue;
        };
        for w in [w.clone(), -w] {
            let half = Rat::new(1.into(), 2.into());
            let k = MirrorElement::new(Rat::from_integer(t.clone()) * &half, w * &half, g.delta.clone());
            if k.cube() == g {
                return Some(k.scale(&Rat::from_integer(l.clone()).recip()));
            }
        }
    }
    None
}

fn eval_form(f: &IntForm, x: &MirrorElement, y: &MirrorElement) -> MirrorElement {
    let c = |n: &Int| MirrorElement::rational(Rat::from_integer(n.clone()), x.delta.clone());
    let three = Int::from(3);
    let x2 = x.mul(x);
    let y2 = y.mul(y);
    let t0 = c(&f.a).mul(&x2).mul(x);
    let t1 = c(&(&three * &f.b)).mul(&x2).mul(y);
    let t2 = c(&(&three * &f.c)).mul(x).mul(&y2);
    let t3 = c(&f.d).mul(&y2).mul(y);
    let s = |p: MirrorElement, q: MirrorElement| MirrorElement::new(p.x + q.x, p.y + q.y, p.delta);
    s(s(t0, t1), s(t2, t3))
}

/// Value of `f` at the first root `(σ − B)/2A` of its Hessian, normalised so
/// that reducible forms land on cubes. An `SL₂(ℚ)` invariant modulo cubes.
pub fn delta_class(f: &IntForm) -> Option<MirrorElement> {
    let disc = f.disc();
    if disc.is_zero() {
        return None;
    }
    let mut g = f.clone();
    let mut k = 1i64;
    while g.hessian().a.is_zero() {
        g = f.substitute(&Matrix::new(1.into(), 0.into(), k.into(), 1.into()));
        k += 1;
    }
    let h = g.hessian();
    let x = MirrorElement::new(Rat::from_integer(-&h.b), Rat::one(), disc.clone());
    let y = MirrorElement::rational(Rat::from_integer(Int::from(2) * &h.a), disc.clone());
    let v = eval_form(&g, &x, &y);
    Some(v.scale(&Rat::from_integer(Int::from(8) * &disc).recip()))
}

/// `SL₂(ℚ)`-equivalence of two forms of equal nonzero discriminant.
pub fn rationally_equivalent(f1: &IntForm, f2: &IntForm) -> bool {
    if f1.disc() != f2.disc() {
        return false;
    }
    match (delta_class(f1), delta_class(f2)) {
        (Some(d1), Some(d2)) => d1.div(&d2).is_some_and(|q| is_cube(&q)),
        _ => false,
    }
}
