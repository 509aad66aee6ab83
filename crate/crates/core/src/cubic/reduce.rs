// SPDX-License-Identifier: Apache-2.0
//! Reduction theory for integral binary cubic forms under `SL₂(ℤ)`.
//!
//! Forms with `Disc < 0` have a definite Hessian and are reduced by reducing
//! it. Forms with `Disc > 0` have one complex root pair and are reduced by
//! moving the upper root into the standard fundamental domain. Ties are
//! broken by the lexicographically least coefficient vector.

use super::{BinaryCubicForm, IntForm, Matrix};
use crate::arith::{isqrt_i128, Int};
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use std::collections::BTreeSet;
use thiserror::Error;

/// Largest `|Disc|` accepted by [`enumerate_forms`] without an explicit bound.
pub const DEFAULT_DISC_BOUND: u64 = 100_000_000_000;

const EPS: f64 = 1e-9;
const PREFILTER: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumError {
    #[error("discriminant must be nonzero")]
    Zero,
    #[error("|disc| = {disc} exceeds the enumeration bound {bound}")]
    TooLarge { disc: String, bound: u64 },
    #[error("form is degenerate (discriminant 0)")]
    Degenerate,
}

fn m(a: i64, b: i64, c: i64, d: i64) -> Matrix<Int> {
    Matrix::new(a.into(), b.into(), c.into(), d.into())
}

fn to_f(x: &Int) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Roots of `A x³ + B x² + C x + D` (or of the quadratic when `A = 0`).
fn roots(c: [f64; 4]) -> Vec<Complex64> {
    if c[0] == 0.0 {
        let (a, b, cc) = (c[1], c[2], c[3]);
        let disc = Complex64::new(b * b - 4.0 * a * cc, 0.0).sqrt();
        return vec![(-b + disc) / (2.0 * a), (-b - disc) / (2.0 * a)];
    }
    let (b, cc, d) = (c[1] / c[0], c[2] / c[0], c[3] / c[0]);
    let p = |z: Complex64| ((z + b) * z + cc) * z + d;
    let dp = |z: Complex64| (3.0 * z + 2.0 * b) * z + cc;
    let r = 1.0 + b.abs().max(cc.abs()).max(d.abs());
    let seed = Complex64::new(0.4, 0.9);
    let mut z = [seed * r, seed * seed * r, seed * seed * seed * r];
    for _ in 0..2000 {
        let mut delta = 0.0f64;
        for i in 0..3 {
            let mut den = Complex64::new(1.0, 0.0);
            for j in 0..3 {
                if i != j {
                    den *= z[i] - z[j];
                }
            }
            let step = p(z[i]) / den;
            z[i] -= step;
            delta = delta.max(step.norm() / (1.0 + z[i].norm()));
        }
        if delta < 1e-15 {
            break;
        }
    }
    for zi in z.iter_mut() {
        for _ in 0..3 {
            let d = dp(*zi);
            if d.norm() == 0.0 {
                break;
            }
            *zi -= p(*zi) / d;
        }
    }
    z.to_vec()
}

/// The root of `f(x, 1)` in the upper half plane, for `Disc(f) > 0`.
fn upper_root(f: &IntForm) -> Complex64 {
    let c = [to_f(&f.a), 3.0 * to_f(&f.b), 3.0 * to_f(&f.c), to_f(&f.d)];
    let r = roots(c);
    let mut best = r[0];
    for z in r {
        if z.im > best.im {
            best = z;
        }
    }
    best
}

fn in_domain(z: Complex64, slack: f64) -> bool {
    z.re.abs() <= 0.5 + slack && z.norm_sqr() >= 1.0 - slack
}

fn mobius_inverse(g: &Matrix<Int>, z: Complex64) -> Complex64 {
    let (a, b, c, d) = (to_f(&g.a), to_f(&g.b), to_f(&g.c), to_f(&g.d));
    (z * d - b) / (z * (-c) + a)
}

fn words() -> Vec<Matrix<Int>> {
    let gens = [m(0, -1, 1, 0), m(1, 1, 0, 1), m(1, -1, 0, 1)];
    let mut out = vec![Matrix::identity()];
    let mut layer = vec![Matrix::<Int>::identity()];
    for _ in 0..4 {
        let mut next = Vec::new();
        for w in &layer {
            for g in &gens {
                let x = w.mul(g);
                let neg = Matrix::new(-&x.a, -&x.b, -&x.c, -&x.d);
                if !out.contains(&x) && !out.contains(&neg) {
                    out.push(x.clone());
                    next.push(x);
                }
            }
        }
        layer = next;
    }
    out
}

fn subst(f: &IntForm, g: &Matrix<Int>) -> IntForm {
    f.substitute(g)
}

fn canonical_definite(f: &IntForm) -> IntForm {
    let mut f = f.clone();
    loop {
        let h = f.hessian();
        let (p, q, r) = (h.a, h.b, h.c);
        let two_p = &p * Int::from(2);
        let k = (&p - &q).div_floor(&two_p);
        if !k.is_zero() {
            f = subst(&f, &Matrix::new(1.into(), k, 0.into(), 1.into()));
            continue;
        }
        if p > r || (p == r && q.is_negative()) {
            f = subst(&f, &m(0, -1, 1, 0));
            continue;
        }
        break;
    }
    let h = f.hessian();
    let (p, q, r) = (&h.a, &h.b, &h.c);
    let gen = if q.is_zero() && p == r {
        Some((m(0, -1, 1, 0), 4))
    } else if q == p && p == r {
        Some((m(0, -1, 1, 1), 6))
    } else {
        None
    };
    let mut cands = vec![f.clone(), f.neg()];
    if let Some((g, order)) = gen {
        let mut cur = f.clone();
        for _ in 1..order {
            cur = subst(&cur, &g);
            cands.push(cur.clone());
            cands.push(cur.neg());
        }
    }
    cands.into_iter().min().expect("nonempty")
}

fn canonical_indefinite(f: &IntForm) -> IntForm {
    let mut f = f.clone();
    for _ in 0..1_000 {
        let z = upper_root(&f);
        let k = z.re.round();
        if z.re.abs() > 0.5 + EPS {
            let k = Int::from(k as i128);
            f = subst(&f, &Matrix::new(1.into(), k, 0.into(), 1.into()));
            continue;
        }
        if z.norm_sqr() < 1.0 - EPS {
            f = subst(&f, &m(0, -1, 1, 0));
            continue;
        }
        break;
    }
    let z = upper_root(&f);
    let mut best: Option<IntForm> = None;
    for w in words() {
        if !in_domain(mobius_inverse(&w, z), PREFILTER) {
            continue;
        }
        let g = subst(&f, &w);
        if !in_domain(upper_root(&g), EPS) {
            continue;
        }
        for c in [g.neg(), g] {
            if best.as_ref().is_none_or(|b| c < *b) {
                best = Some(c);
            }
        }
    }
    best.unwrap_or(f)
}

/// Canonical representative of the `SL₂(ℤ)`-orbit of `f`.
pub fn canonical_reduce(f: &IntForm) -> Result<IntForm, EnumError> {
    let d = f.disc();
    if d.is_zero() {
        return Err(EnumError::Degenerate);
    }
    Ok(if d.is_negative() {
        canonical_definite(f)
    } else {
        canonical_indefinite(f)
    })
}

fn icbrt_floor_pos(n: i128) -> i128 {
    let mut x = (n as f64).cbrt() as i128;
    while x * x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

fn icbrt_ceil_pos(n: i128) -> i128 {
    let x = icbrt_floor_pos(n);
    if x * x * x == n {
        x
    } else {
        x + 1
    }
}

const fn square_mask(m: u64) -> u128 {
    let mut mask = 0u128;
    let mut x = 0;
    while x < m {
        mask |= 1 << ((x * x) % m);
        x += 1;
    }
    mask
}

const MASKS: [(u64, u128); 4] = [
    (64, square_mask(64)),
    (63, square_mask(63)),
    (65, square_mask(65)),
    (11, square_mask(11)),
];

fn sqrt_if_square(q: i128) -> Option<i128> {
    if q < 0 {
        return None;
    }
    if let Ok(u) = u64::try_from(q) {
        if MASKS.iter().any(|&(m, mask)| mask >> (u % m) & 1 == 0) {
            return None;
        }
    } else if !matches!(q & 15, 0 | 1 | 4 | 9) {
        return None;
    }
    let r = isqrt_i128(q);
    (r * r == q).then_some(r)
}

fn disc_i128(a: i128, b: i128, c: i128, d: i128) -> i128 {
    a * a * d * d - 3 * b * b * c * c + 4 * a * c * c * c + 4 * b * b * b * d - 6 * a * b * c * d
}

fn to_form(a: i128, b: i128, c: i128, d: i128) -> IntForm {
    BinaryCubicForm::new(a.into(), b.into(), c.into(), d.into())
}

/// Given `(a, b, P, εr)` with `a > 0`, recover `c` and `d`.
fn complete(a: i128, b: i128, p: i128, er: i128) -> Option<(i128, i128, i128)> {
    let cn = b * b - p;
    if cn % a != 0 {
        return None;
    }
    let c = cn / a;
    let qn = 2 * b * p + er;
    if qn % a != 0 {
        return None;
    }
    let q = qn / a;
    let dn = b * c - q;
    if dn % a != 0 {
        return None;
    }
    Some((c, dn / a, q))
}

fn enumerate_definite(delta: i128, out: &mut Vec<IntForm>) {
    let n = -delta;
    let pmax = isqrt_i128(n / 3);
    let mut a = 1i128;
    while a * a * n <= 4 * pmax * pmax * pmax {
        let pmin = icbrt_ceil_pos((a * a * n + 3) / 4).max(1);
        for p in pmin..=pmax {
            let Some(r) = sqrt_if_square(4 * p * p * p - a * a * n) else {
                continue;
            };
            for er in if r == 0 { vec![0] } else { vec![r, -r] } {
                let blo = (-a * p - er).div_euclid(2 * p) - 1;
                let bhi = (a * p - er).div_euclid(2 * p) + 1;
                for b in blo..=bhi {
                    let Some((c, d, q)) = complete(a, b, p, er) else {
                        continue;
                    };
                    let rr = c * c - b * d;
                    if q.abs() <= p && p <= rr && disc_i128(a, b, c, d) == delta {
                        out.push(to_form(a, b, c, d));
                    }
                }
            }
        }
        a += 1;
    }
    // a = 0: f = y(3bx² + 3cxy + dy²), Disc = b²(4bd − 3c²), P = b²
    let mut b = 1i128;
    while b * b <= pmax {
        if n % (b * b) == 0 {
            for c in -b..=b {
                let num = 3 * c * c - n / (b * b);
                if num % (4 * b) == 0 {
                    let d = num / (4 * b);
                    if c * c - b * d >= b * b {
                        out.push(to_form(0, b, c, d));
                    }
                }
            }
        }
        b += 1;
    }
}

fn enumerate_indefinite(delta: i128, out: &mut Vec<IntForm>) {
    let df = delta as f64;
    let amax = (16.0 * df).powf(0.25) as i128 + 1;
    let pmax = (df.sqrt() / 3.0) as i128 + 1;
    for a in 1..=amax {
        let l = (9.0 * df).powf(0.25) / a as f64;
        let bmax = (a as f64 * (l + 1.5) / 3.0) as i128 + 1;
        let pmin = -icbrt_floor_pos(a * a * delta / 4) - 1;
        for p in pmin..=pmax {
            let Some(r) = sqrt_if_square(4 * p * p * p + a * a * delta) else {
                continue;
            };
            for er in if r == 0 { vec![0] } else { vec![r, -r] } {
                for b in -bmax..=bmax {
                    let Some((c, d, _)) = complete(a, b, p, er) else {
                        continue;
                    };
                    if disc_i128(a, b, c, d) != delta {
                        continue;
                    }
                    let f = to_form(a, b, c, d);
                    if in_domain(upper_root(&f), PREFILTER) {
                        out.push(f);
                    }
                }
            }
        }
    }
    let mut b = 1i128;
    while b * b <= delta {
        if delta % (b * b) == 0 {
            for c in -b..=b {
                let num = delta / (b * b) + 3 * c * c;
                for sb in [b, -b] {
                    if num % (4 * sb) == 0 {
                        let f = to_form(0, sb, c, num / (4 * sb));
                        if in_domain(upper_root(&f), PREFILTER) {
                            out.push(f);
                        }
                    }
                }
            }
        }
        b += 1;
    }
}

/// Canonical representatives of every `SL₂(ℤ)`-class of integral forms with
/// discriminant `disc`, in increasing order.
pub fn enumerate_forms(disc: &Int, bound: Option<u64>) -> Result<Vec<IntForm>, EnumError> {
    if disc.is_zero() {
        return Err(EnumError::Zero);
    }
    let bound = bound.unwrap_or(DEFAULT_DISC_BOUND);
    let too_large = || EnumError::TooLarge {
        disc: disc.to_string(),
        bound,
    };
    let delta = disc.to_i128().ok_or_else(too_large)?;
    if delta.unsigned_abs() > bound as u128 {
        return Err(too_large());
    }
    let mut raw = Vec::new();
    if delta < 0 {
        enumerate_definite(delta, &mut raw);
    } else {
        enumerate_indefinite(delta, &mut raw);
    }
    let set: BTreeSet<IntForm> = raw
        .iter()
        .map(|f| canonical_reduce(f).expect("nondegenerate"))
        .collect();
    Ok(set.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int;
    use proptest::prelude::*;

    fn f(a: i64, b: i64, c: i64, d: i64) -> IntForm {
        IntForm::from_i64(a, b, c, d)
    }

    #[test]
    fn canonical_examples() {
        let r = canonical_reduce(&f(0, 1, 0, 1)).unwrap();
        assert_eq!(r, canonical_reduce(&f(0, -1, 0, -1)).unwrap());
        assert_eq!(r.disc(), int(4));
        let r2 = canonical_reduce(&f(1, 0, 0, 1)).unwrap();
        assert_eq!(r2.disc(), int(1));
        assert!(canonical_reduce(&f(1, 0, 0, 0)).is_err());
    }

    #[test]
    fn enumerate_rejects() {
        assert_eq!(enumerate_forms(&int(0), None), Err(EnumError::Zero));
        assert!(matches!(enumerate_forms(&int(1000), Some(10)), Err(EnumError::TooLarge { .. })));
    }

    #[test]
    fn class_counts_small() {
        // every listed class is a distinct orbit
        for d in [-108, -27, -3, 1, 4, 28, 81, -243, 229, -44] {
            let v = enumerate_forms(&int(d), None).unwrap();
            for x in &v {
                assert_eq!(x.disc(), int(d));
                assert_eq!(&canonical_reduce(x).unwrap(), x);
            }
        }
    }

    fn sl2() -> impl Strategy<Value = Matrix<Int>> {
        prop::collection::vec((0u8..3, -3i64..=3), 1..7).prop_map(|steps| {
            let mut g = Matrix::identity();
            for (kind, k) in steps {
                let e = match kind {
                    0 => m(1, k, 0, 1),
                    1 => m(1, 0, k, 1),
                    _ => m(0, -1, 1, 0),
                };
                g = g.mul(&e);
            }
            g
        })
    }

    proptest! {
        #[test]
        fn canonical_is_class_invariant(a in -9i64..=9, b in -9i64..=9, c in -9i64..=9, d in -9i64..=9, g in sl2()) {
            let x = f(a, b, c, d);
            prop_assume!(!x.disc().is_zero());
            let y = x.act(&g, false).unwrap();
            prop_assert_eq!(canonical_reduce(&x).unwrap(), canonical_reduce(&y).unwrap());
        }

        #[test]
        fn enumeration_contains_orbit(a in -6i64..=6, b in -6i64..=6, c in -6i64..=6, d in -6i64..=6) {
            let x = f(a, b, c, d);
            prop_assume!(!x.disc().is_zero());
            let v = enumerate_forms(&x.disc(), None).unwrap();
            prop_assert!(v.contains(&canonical_reduce(&x).unwrap()));
        }
    }
}
