// SPDX-License-Identifier: Apache-2.0
//! Tate's algorithm and global minimal models.

use super::WeierstrassCurve;
use crate::arith::{factor, legendre, rat_int, Int, Place, Rat};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Kodaira symbol of the special fibre.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Kodaira {
    I0,
    In(u32),
    II,
    III,
    IV,
    I0Star,
    InStar(u32),
    IVStar,
    IIIStar,
    IIStar,
}

impl Kodaira {
    /// Type after a ramified quadratic twist at an odd prime.
    pub fn twisted(self) -> Kodaira {
        use Kodaira::*;
        match self {
            I0 => I0Star,
            In(n) => InStar(n),
            II => IVStar,
            III => IIIStar,
            IV => IIStar,
            I0Star => I0,
            InStar(n) => In(n),
            IVStar => II,
            IIIStar => III,
            IIStar => IV,
        }
    }
}

impl fmt::Display for Kodaira {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kodaira::I0 => write!(f, "I0"),
            Kodaira::In(n) => write!(f, "I{n}"),
            Kodaira::II => write!(f, "II"),
            Kodaira::III => write!(f, "III"),
            Kodaira::IV => write!(f, "IV"),
            Kodaira::I0Star => write!(f, "I0*"),
            Kodaira::InStar(n) => write!(f, "I{n}*"),
            Kodaira::IVStar => write!(f, "IV*"),
            Kodaira::IIIStar => write!(f, "III*"),
            Kodaira::IIStar => write!(f, "II*"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Split {
    Split,
    Nonsplit,
    NotMultiplicative,
}

/// Local data at one prime.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalReductionData {
    pub p: u64,
    pub kodaira: Kodaira,
    pub tamagawa: u32,
    pub v_delta_min: u32,
    pub conductor_exp: u32,
    pub split: Split,
    /// Degree of the base field over ℚ_p; always 1 here.
    pub d: u32,
}

impl LocalReductionData {
    pub fn is_good(&self) -> bool {
        self.kodaira == Kodaira::I0
    }
}

fn v(x: &Int, p: &Int) -> u32 {
    if x.is_zero() {
        u32::MAX
    } else {
        crate::arith::val_int(x, p)
    }
}

/// Integral model with integer coefficients, carried through the algorithm.
#[derive(Clone, Debug)]
struct IntModel {
    a1: Int,
    a2: Int,
    a3: Int,
    a4: Int,
    a6: Int,
    // accumulated change of variables x = tu²·x' + tr from the input curve
    tu: Rat,
    tr: Rat,
}

impl IntModel {
    fn from_curve(e: &WeierstrassCurve) -> Self {
        let [a1, a2, a3, a4, a6] = e.ainvs().map(|x| {
            assert!(x.is_integer(), "integral model expected");
            x.to_integer()
        });
        IntModel {
            a1,
            a2,
            a3,
            a4,
            a6,
            tu: Rat::one(),
            tr: Rat::zero(),
        }
    }
    fn b2(&self) -> Int {
        &self.a1 * &self.a1 + 4 * &self.a2
    }
    fn b4(&self) -> Int {
        2 * &self.a4 + &self.a1 * &self.a3
    }
    fn b6(&self) -> Int {
        &self.a3 * &self.a3 + 4 * &self.a6
    }
    fn b8(&self) -> Int {
        &self.a1 * &self.a1 * &self.a6 + 4 * &self.a2 * &self.a6 - &self.a1 * &self.a3 * &self.a4
            + &self.a2 * &self.a3 * &self.a3
            - &self.a4 * &self.a4
    }
    fn c4(&self) -> Int {
        let b2 = self.b2();
        &b2 * &b2 - 24 * self.b4()
    }
    fn c6(&self) -> Int {
        let (b2, b4, b6) = (self.b2(), self.b4(), self.b6());
        -(&b2 * &b2 * &b2) + 36 * &b2 * &b4 - 216 * b6
    }
    fn disc(&self) -> Int {
        let (b2, b4, b6, b8) = (self.b2(), self.b4(), self.b6(), self.b8());
        -(&b2 * &b2 * &b8) - 8 * &b4 * &b4 * &b4 - 27 * &b6 * &b6 + 9 * &b2 * &b4 * &b6
    }
    fn rst(&mut self, r: &Int, s: &Int, t: &Int) {
        let (a1, a2, a3, a4, a6) = (&self.a1, &self.a2, &self.a3, &self.a4, &self.a6);
        let na1 = a1 + 2 * s;
        let na2 = a2 - s * a1 + 3 * r - s * s;
        let na3 = a3 + r * a1 + 2 * t;
        let na4 = a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t;
        let na6 = a6 + r * a4 + r * r * a2 + r * r * r - t * a3 - t * t - r * t * a1;
        self.tr += &self.tu * &self.tu * rat_int(r.clone());
        self.a1 = na1;
        self.a2 = na2;
        self.a3 = na3;
        self.a4 = na4;
        self.a6 = na6;
    }
    fn scale_down(&mut self, p: &Int) {
        let p2 = p * p;
        let p3 = &p2 * p;
        self.a1 /= p;
        self.a2 /= &p2;
        self.a3 /= &p3;
        self.a4 /= &(&p2 * &p2);
        self.a6 /= &(&p3 * &p3);
        self.tu *= rat_int(p.clone());
    }
    fn to_curve(&self) -> WeierstrassCurve {
        WeierstrassCurve::new(
            rat_int(self.a1.clone()),
            rat_int(self.a2.clone()),
            rat_int(self.a3.clone()),
            rat_int(self.a4.clone()),
            rat_int(self.a6.clone()),
        )
        .expect("nonsingular")
    }
}

/// Residue field helpers for a prime `p`.
struct Fp {
    p: Int,
}

impl Fp {
    fn red(&self, x: &Int) -> Int {
        x.mod_floor(&self.p)
    }
    fn inv(&self, x: &Int) -> Int {
        let e = x.extended_gcd(&self.p);
        assert!(e.gcd.is_one(), "not invertible mod p");
        e.x.mod_floor(&self.p)
    }
    /// Square root mod 2 or cube root mod 3: the Frobenius is the identity.
    fn root(&self, x: &Int) -> Int {
        self.red(x)
    }
    /// Does `aX² + bX + c` have a root mod p.
    fn quad_has_root(&self, a: &Int, b: &Int, c: &Int) -> bool {
        let (a, b, c) = (self.red(a), self.red(b), self.red(c));
        if self.p == Int::from(2) {
            return c.is_zero() || (&a + &b + &c).is_even();
        }
        if a.is_zero() {
            return !b.is_zero() || c.is_zero();
        }
        let disc = &b * &b - 4 * &a * &c;
        let pu = self.p.to_u64();
        match pu {
            Some(pu) => legendre(&disc, pu) >= 0,
            None => {
                let d = self.red(&disc);
                d.is_zero() || d.modpow(&((&self.p - 1u32) / 2u32), &self.p).is_one()
            }
        }
    }
    /// Number of roots mod p of the monic cubic `X³ + bX² + cX + d`.
    fn cubic_nroots(&self, b: &Int, c: &Int, d: &Int) -> u32 {
        let p = &self.p;
        if let Some(pu) = p.to_u64().filter(|&q| q < 1000) {
            return (0..pu)
                .filter(|&x| {
                    let x = Int::from(x);
                    self.red(&(((&x + b) * &x + c) * &x + d)).is_zero()
                })
                .count() as u32;
        }
        // gcd(X^p − X, cubic) has degree equal to the number of distinct roots;
        // the Tate step only calls this with distinct roots.
        let poly = [self.red(d), self.red(c), self.red(b), Int::one()];
        let xp = self.pow_x_mod(p, &poly);
        let mut g = xp;
        if g.len() < 2 {
            g.resize(2, Int::zero());
        }
        g[1] = self.red(&(&g[1] - 1));
        let g = self.poly_gcd(poly.to_vec(), g);
        (g.len() - 1) as u32
    }
    fn trim(&self, mut a: Vec<Int>) -> Vec<Int> {
        while a.len() > 1 && a.last().unwrap().is_zero() {
            a.pop();
        }
        a
    }
    fn mulmod(&self, a: &[Int], b: &[Int], m: &[Int]) -> Vec<Int> {
        let mut r = vec![Int::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                r[i + j] = self.red(&(&r[i + j] + x * y));
            }
        }
        self.rem(r, m)
    }
    fn rem(&self, mut a: Vec<Int>, m: &[Int]) -> Vec<Int> {
        let dm = m.len() - 1;
        let li = self.inv(&m[dm]);
        while a.len() > dm && a.len() > 1 {
            let top = a.len() - 1;
            let q = self.red(&(&a[top] * &li));
            for k in 0..=dm {
                let idx = top - dm + k;
                a[idx] = self.red(&(&a[idx] - &q * &m[k]));
            }
            a.pop();
        }
        self.trim(a)
    }
    fn pow_x_mod(&self, e: &Int, m: &[Int]) -> Vec<Int> {
        let mut result = vec![Int::one()];
        let mut base = self.rem(vec![Int::zero(), Int::one()], m);
        let mut e = e.clone();
        while !e.is_zero() {
            if e.is_odd() {
                result = self.mulmod(&result, &base, m);
            }
            base = self.mulmod(&base, &base, m);
            e >>= 1u32;
        }
        result
    }
    fn poly_gcd(&self, a: Vec<Int>, b: Vec<Int>) -> Vec<Int> {
        let (mut a, mut b) = (self.trim(a), self.trim(b));
        while !(b.len() == 1 && b[0].is_zero()) {
            let r = self.rem(a, &b);
            a = b;
            b = r;
        }
        a
    }
}

/// Output of the local algorithm, with the locally minimal model reached.
struct TateOutput {
    data: LocalReductionData,
    model: IntModel,
    scalings: u32,
}

fn tate_local(e0: &IntModel, p: &Int) -> TateOutput {
    let fp = Fp { p: p.clone() };
    let pu = p.to_u64().expect("prime fits in u64");
    let two = Int::from(2);
    let three = Int::from(3);
    let is2 = *p == two;
    let is3 = *p == three;
    let mut c = e0.clone();
    let mut scalings = 0;
    let pi = p.clone();
    let pi2 = p * p;
    let pi3 = &pi2 * p;
    let pi4 = &pi2 * &pi2;
    let half = if is2 { Int::zero() } else { fp.inv(&two) };
    let done = |kodaira, tamagawa, fexp: u32, vd: u32, split, model: IntModel, sc: u32| TateOutput {
        data: LocalReductionData {
            p: pu,
            kodaira,
            tamagawa,
            v_delta_min: vd,
            conductor_exp: fexp,
            split,
            d: 1,
        },
        model,
        scalings: sc,
    };
    loop {
        let vd = v(&c.disc(), p);
        if vd == 0 {
            return done(Kodaira::I0, 1, 0, 0, Split::NotMultiplicative, c, scalings);
        }
        // move the singular point to (0, 0)
        let (r, t) = if is2 {
            if v(&c.b2(), p) > 0 {
                let r = fp.root(&c.a4);
                let t = fp.root(&(((&r + &c.a2) * &r + &c.a4) * &r + &c.a6));
                (r, t)
            } else {
                let tmp = fp.inv(&c.a1);
                let r = &tmp * &c.a3;
                let t = &tmp * (&c.a4 + &r * &r);
                (r, t)
            }
        } else if is3 {
            let r = if v(&c.b2(), p) > 0 {
                fp.root(&-c.b6())
            } else {
                -fp.inv(&c.b2()) * c.b4()
            };
            let t = &c.a1 * &r + &c.a3;
            (r, t)
        } else {
            let r = if v(&c.c4(), p) > 0 {
                -fp.inv(&Int::from(12)) * c.b2()
            } else {
                -fp.inv(&(12 * c.c4())) * (c.c6() + c.b2() * c.c4())
            };
            let t = -&half * (&c.a1 * &r + &c.a3);
            (r, t)
        };
        let (r, t) = (fp.red(&r), fp.red(&t));
        c.rst(&r, &Int::zero(), &t);
        debug_assert!(v(&c.a3, p) > 0 && v(&c.a4, p) > 0 && v(&c.a6, p) > 0);

        if v(&c.b2(), p) == 0 {
            let split = fp.quad_has_root(&Int::one(), &c.a1, &-&c.a2);
            let tam = if split {
                vd
            } else if vd % 2 == 1 {
                1
            } else {
                2
            };
            let sp = if split { Split::Split } else { Split::Nonsplit };
            return done(Kodaira::In(vd), tam, 1, vd, sp, c, scalings);
        }
        if v(&c.a6, p) < 2 {
            return done(Kodaira::II, 1, vd, vd, Split::NotMultiplicative, c, scalings);
        }
        if v(&c.b8(), p) < 3 {
            return done(Kodaira::III, 2, vd - 1, vd, Split::NotMultiplicative, c, scalings);
        }
        if v(&c.b6(), p) < 3 {
            let a3t = fp.red(&(&c.a3 / &pi));
            let a6t = fp.red(&(&c.a6 / &pi2));
            let tam = if fp.quad_has_root(&Int::one(), &a3t, &-a6t) { 3 } else { 1 };
            return done(Kodaira::IV, tam, vd - 2, vd, Split::NotMultiplicative, c, scalings);
        }
        // p | a1, a2; p² | a3, a4; p³ | a6
        let (s, t) = if is2 {
            (fp.root(&c.a2), &pi * fp.root(&(&c.a6 / &pi2)))
        } else if is3 {
            (c.a1.clone(), c.a3.clone())
        } else {
            (-&c.a1 * &half, -&c.a3 * &half)
        };
        c.rst(&Int::zero(), &s, &t);
        debug_assert!(v(&c.a1, p) >= 1 && v(&c.a2, p) >= 1 && v(&c.a3, p) >= 2);
        debug_assert!(v(&c.a4, p) >= 2 && v(&c.a6, p) >= 3);

        let b = fp.red(&(&c.a2 / &pi));
        let cc = fp.red(&(&c.a4 / &pi2));
        let d = fp.red(&(&c.a6 / &pi3));
        let w = fp.red(
            &(27 * &d * &d - &b * &b * &cc * &cc + 4 * &b * &b * &b * &d - 18 * &b * &cc * &d
                + 4 * &cc * &cc * &cc),
        );
        let x = fp.red(&(3 * &cc - &b * &b));
        let sw = if !w.is_zero() {
            1
        } else if !x.is_zero() {
            2
        } else {
            3
        };
        if sw == 1 {
            let tam = 1 + fp.cubic_nroots(&b, &cc, &d);
            return done(Kodaira::I0Star, tam, vd - 4, vd, Split::NotMultiplicative, c, scalings);
        }
        if sw == 2 {
            let r = if is2 {
                fp.root(&cc)
            } else if is3 {
                &cc * fp.inv(&b)
            } else {
                (&b * &cc - 9 * &d) * fp.inv(&(2 * &x))
            };
            let r = &pi * fp.red(&r);
            c.rst(&r, &Int::zero(), &Int::zero());
            let mut ix = 3u32;
            let mut iy = 3u32;
            let mut mx = pi2.clone();
            let mut my = pi2.clone();
            let tam;
            loop {
                let a3t = fp.red(&(&c.a3 / &my));
                let a6t = fp.red(&(&c.a6 / (&mx * &my)));
                if fp.red(&(&a3t * &a3t + 4 * &a6t)) != Int::zero() {
                    tam = if fp.quad_has_root(&Int::one(), &a3t, &-&a6t) { 4 } else { 2 };
                    break;
                }
                let t = if is2 {
                    &my * fp.root(&a6t)
                } else {
                    &my * fp.red(&(-&a3t * &half))
                };
                c.rst(&Int::zero(), &Int::zero(), &t);
                my *= &pi;
                iy += 1;
                let a2t = fp.red(&(&c.a2 / &pi));
                let a4t = fp.red(&(&c.a4 / (&pi * &mx)));
                let a6t = fp.red(&(&c.a6 / (&mx * &my)));
                if fp.red(&(&a4t * &a4t - 4 * &a6t * &a2t)) != Int::zero() {
                    tam = if fp.quad_has_root(&a2t, &a4t, &a6t) { 4 } else { 2 };
                    break;
                }
                let r = if is2 {
                    &mx * fp.root(&(&a6t * fp.inv(&a2t)))
                } else {
                    &mx * fp.red(&(-&a4t * fp.inv(&(2 * &a2t))))
                };
                c.rst(&r, &Int::zero(), &Int::zero());
                mx *= &pi;
                ix += 1;
            }
            let n = ix + iy - 5;
            return done(
                Kodaira::InStar(n),
                tam,
                vd - ix - iy + 1,
                vd,
                Split::NotMultiplicative,
                c,
                scalings,
            );
        }
        // triple root
        let r = if is2 {
            b.clone()
        } else if is3 {
            fp.root(&-&d)
        } else {
            -&b * fp.inv(&three)
        };
        let r = &pi * fp.red(&r);
        c.rst(&r, &Int::zero(), &Int::zero());
        let a3t = fp.red(&(&c.a3 / &pi2));
        let a6t = fp.red(&(&c.a6 / &pi4));
        if fp.red(&(&a3t * &a3t + 4 * &a6t)) != Int::zero() {
            let tam = if fp.quad_has_root(&Int::one(), &a3t, &-&a6t) { 3 } else { 1 };
            return done(Kodaira::IVStar, tam, vd - 6, vd, Split::NotMultiplicative, c, scalings);
        }
        let t = if is2 {
            -&pi2 * fp.root(&a6t)
        } else {
            &pi2 * fp.red(&(-&a3t * &half))
        };
        c.rst(&Int::zero(), &Int::zero(), &t);
        if v(&c.a4, p) < 4 {
            return done(Kodaira::IIIStar, 2, vd - 7, vd, Split::NotMultiplicative, c, scalings);
        }
        if v(&c.a6, p) < 6 {
            return done(Kodaira::IIStar, 1, vd - 8, vd, Split::NotMultiplicative, c, scalings);
        }
        c.scale_down(p);
        scalings += 1;
    }
}

/// Integral model `a_i·L^i` with the least positive `L` making it integral.
fn integral_model(e: &WeierstrassCurve) -> (IntModel, Rat) {
    let a = e.ainvs();
    let weights = [1u32, 2, 3, 4, 6];
    let mut l = Int::one();
    let mut den = Int::one();
    for x in a.iter() {
        den = den.lcm(x.denom());
    }
    for (p, _) in factor(&den).expect("nonzero") {
        // smallest k with v_p(a_i) + k·w_i ≥ 0 for all i
        let mut k = 0u32;
        for (x, w) in a.iter().zip(weights) {
            if x.is_zero() {
                continue;
            }
            let vx = crate::arith::padic_valuation(x, &p).unwrap();
            if vx < 0 {
                k = k.max(((-vx) as u32).div_ceil(w));
            }
        }
        l *= num_traits::pow(p, k as usize);
    }
    let u = Rat::new(Int::one(), l);
    let m = e.transform(&u, &Rat::zero(), &Rat::zero(), &Rat::zero());
    let mut im = IntModel::from_curve(&m);
    im.tu = u.clone();
    (im, u)
}

/// Tate's algorithm at `p` for any model over ℚ.
pub fn tate_algorithm(e: &WeierstrassCurve, p: u64) -> LocalReductionData {
    let (m, _) = integral_model(e);
    tate_local(&m, &Int::from(p)).data
}

/// Global minimal model in reduced form, with `u` such that
/// `Δ(E_min) = u⁻¹²·Δ(E)`.
pub fn minimal_model(e: &WeierstrassCurve) -> (WeierstrassCurve, Rat) {
    let (m, u, _) = minimal_model_with_shift(e);
    (m, u)
}

/// As [`minimal_model`], also returning `r` in `x = u²x' + r`.
pub(crate) fn minimal_model_with_shift(e: &WeierstrassCurve) -> (WeierstrassCurve, Rat, Rat) {
    let (mut m, _) = integral_model(e);
    let d = m.disc();
    for (p, ex) in factor(&d).expect("nonzero") {
        if ex < 12 {
            continue;
        }
        let out = tate_local(&m, &p);
        if out.scalings > 0 {
            m = out.model;
        }
    }
    // a1, a3 ∈ {0, 1}, a2 ∈ {−1, 0, 1}
    let s = (m.a1.mod_floor(&Int::from(2)) - &m.a1) / 2;
    m.rst(&Int::zero(), &s, &Int::zero());
    let a2 = m.a2.clone();
    let r = -(&a2 + Int::one()).div_floor(&Int::from(3));
    m.rst(&r, &Int::zero(), &Int::zero());
    let t = ((&m.a3).mod_floor(&Int::from(2)) - &m.a3) / 2;
    m.rst(&Int::zero(), &Int::zero(), &t);
    let emin = m.to_curve();
    debug_assert_eq!(
        emin.disc() * num_traits::pow(m.tu.clone(), 12),
        e.disc(),
        "scaling relation"
    );
    (emin, m.tu, m.tr)
}

/// Local data at every prime dividing the minimal discriminant, plus the conductor.
pub fn global_reduction(e: &WeierstrassCurve) -> (Int, Vec<LocalReductionData>) {
    let (emin, _) = minimal_model(e);
    let d = emin.disc().to_integer();
    let mut cond = Int::one();
    let mut out = Vec::new();
    for (p, _) in factor(&d).expect("nonzero") {
        let pu = p.to_u64().expect("prime fits in u64");
        let ld = tate_algorithm(&emin, pu);
        cond *= num_traits::pow(p.clone(), ld.conductor_exp as usize);
        out.push(ld);
    }
    (cond, out)
}

/// Whether `−c6` of the minimal model is a square in ℚ_p.
pub fn minus_c6_square(e: &WeierstrassCurve, p: u64) -> bool {
    let (emin, _) = minimal_model(e);
    crate::arith::is_square_in_qp(&(-emin.c6()), Place::Finite(p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn curve(a: [i64; 5]) -> WeierstrassCurve {
        WeierstrassCurve::from_ints(a).unwrap()
    }

    #[test]
    fn good_reduction_example() {
        let ld = tate_algorithm(&curve([0, 0, 0, 0, 1]), 5);
        assert_eq!((ld.kodaira, ld.tamagawa, ld.v_delta_min), (Kodaira::I0, 1, 0));
    }

    #[test]
    fn split_flag_matches_c6_test() {
        let mut seen = 0;
        for a in [[0, 1, 1, 1, 0], [0, -1, 1, -10, -20], [1, 0, 1, 4, -6], [0, 0, 1, -1, 0], [1, -1, 1, -3, 3], [0, 1, 0, -1, 0]] {
            let e = curve(a);
            let (_, locs) = global_reduction(&e);
            for ld in locs {
                if ld.p > 2 && ld.split != Split::NotMultiplicative {
                    assert_eq!(ld.split == Split::Split, minus_c6_square(&e, ld.p), "{a:?} at {}", ld.p);
                    seen += 1;
                }
            }
        }
        assert!(seen >= 4);
    }

    #[test]
    fn conductor_19_curve() {
        let e = curve([0, 1, 1, 1, 0]);
        let ld = tate_algorithm(&e, 19);
        assert_eq!(ld.kodaira, Kodaira::In(1));
        assert_eq!((ld.tamagawa, ld.v_delta_min, ld.conductor_exp), (1, 1, 1));
        let (n, _) = global_reduction(&e);
        assert_eq!(n, Int::from(19));
    }

    #[test]
    fn minimal_model_of_x3_plus_16() {
        let e = curve([0, 0, 0, 0, 16]);
        let (m, u) = minimal_model(&e);
        assert_eq!(m, curve([0, 0, 1, 0, 0]));
        assert_eq!(u, rat(2, 1));
        let (m2, u2) = minimal_model(&m);
        assert_eq!((m2, u2), (m.clone(), rat(1, 1)));
        // scaling by 5 leaves the minimal discriminant alone
        let scaled = e.transform(&rat(1, 5), &rat(0, 1), &rat(0, 1), &rat(0, 1));
        assert_eq!(minimal_model(&scaled).0.disc(), m.disc());
        let frac = e.transform(&rat(7, 1), &rat(1, 3), &rat(0, 1), &rat(2, 1));
        assert_eq!(minimal_model(&frac).0.disc(), m.disc());
    }

    #[test]
    fn twist_table_involution() {
        for k in [Kodaira::I0, Kodaira::In(3), Kodaira::II, Kodaira::IIIStar, Kodaira::InStar(2)] {
            assert_eq!(k.twisted().twisted(), k);
        }
    }
}
