// SPDX-License-Identifier: Apache-2.0
//! Integer-matrix binary cubic forms `ax³ + 3bx²y + 3cxy² + dy³`, their
//! covariants, group actions and covering curves.

mod mirror;
mod reduce;

pub use mirror::{delta_class, is_cube, rationally_equivalent, MirrorElement};
pub use reduce::{canonical_reduce, enumerate_forms, EnumError, DEFAULT_DISC_BOUND};

use crate::arith::{poly::rational_roots, Int, Rat};
use num_traits::{FromPrimitive, Num, Zero};
use serde::{Deserialize, Serialize};
use std::fmt::{self, Debug};
use thiserror::Error;

/// Coefficient ring for forms: integers, rationals, machine integers.
pub trait Coeff: Clone + Num + FromPrimitive + Debug + PartialEq {}
impl<T: Clone + Num + FromPrimitive + Debug + PartialEq> Coeff for T {}

fn k<T: Coeff>(n: i64) -> T {
    T::from_i64(n).expect("small constant")
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CubicError {
    #[error("matrix is not invertible")]
    Singular,
    #[error("matrix determinant is {0}, expected 1 for the untwisted action")]
    NotUnimodular(String),
    #[error("norm of δ is not a rational cube")]
    NormNotCube,
    #[error("form is degenerate (discriminant 0)")]
    Degenerate,
}

/// `a·x³ + 3b·x²y + 3c·xy² + d·y³`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BinaryCubicForm<T> {
    pub a: T,
    pub b: T,
    pub c: T,
    pub d: T,
}

pub type IntForm = BinaryCubicForm<Int>;
pub type RatForm = BinaryCubicForm<Rat>;

impl<T: fmt::Display> fmt::Display for BinaryCubicForm<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}, {})", self.a, self.b, self.c, self.d)
    }
}

impl<T: fmt::Display> Debug for BinaryCubicForm<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `A·x² + B·xy + C·y²`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuadForm<T> {
    pub a: T,
    pub b: T,
    pub c: T,
}

impl<T: Coeff> QuadForm<T> {
    pub fn disc(&self) -> T {
        self.b.clone() * self.b.clone() - k::<T>(4) * self.a.clone() * self.c.clone()
    }
    pub fn as_binary(&self) -> BinaryForm<T> {
        BinaryForm {
            coeffs: vec![self.a.clone(), self.b.clone(), self.c.clone()],
        }
    }
    /// `q(αx + βy, γx + δy)`.
    pub fn act(&self, g: &Matrix<T>) -> QuadForm<T> {
        let r = self.as_binary().substitute(g);
        QuadForm {
            a: r.coeffs[0].clone(),
            b: r.coeffs[1].clone(),
            c: r.coeffs[2].clone(),
        }
    }
}

/// Homogeneous binary form; `coeffs[i]` multiplies `x^{n−i} y^i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryForm<T> {
    pub coeffs: Vec<T>,
}

impl<T: Coeff> BinaryForm<T> {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }
    pub fn zero(n: usize) -> Self {
        BinaryForm {
            coeffs: vec![T::zero(); n + 1],
        }
    }
    pub fn mul(&self, o: &Self) -> Self {
        let mut r = Self::zero(self.degree() + o.degree());
        for (i, x) in self.coeffs.iter().enumerate() {
            for (j, y) in o.coeffs.iter().enumerate() {
                r.coeffs[i + j] = r.coeffs[i + j].clone() + x.clone() * y.clone();
            }
        }
        r
    }
    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.degree(), o.degree());
        BinaryForm {
            coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(x, y)| x.clone() + y.clone()).collect(),
        }
    }
    pub fn scale(&self, s: &T) -> Self {
        BinaryForm {
            coeffs: self.coeffs.iter().map(|x| x.clone() * s.clone()).collect(),
        }
    }
    /// ∂/∂x.
    pub fn dx(&self) -> Self {
        let n = self.degree();
        BinaryForm {
            coeffs: (0..n).map(|i| self.coeffs[i].clone() * k::<T>((n - i) as i64)).collect(),
        }
    }
    /// ∂/∂y.
    pub fn dy(&self) -> Self {
        let n = self.degree();
        BinaryForm {
            coeffs: (1..=n).map(|i| self.coeffs[i].clone() * k::<T>(i as i64)).collect(),
        }
    }
    pub fn eval(&self, x: &T, y: &T) -> T {
        let n = self.degree();
        let mut acc = T::zero();
        for (i, c) in self.coeffs.iter().enumerate() {
            let mut t = c.clone();
            for _ in 0..(n - i) {
                t = t * x.clone();
            }
            for _ in 0..i {
                t = t * y.clone();
            }
            acc = acc + t;
        }
        acc
    }
    /// `F(αx + βy, γx + δy)`.
    pub fn substitute(&self, g: &Matrix<T>) -> Self {
        let n = self.degree();
        let lx = BinaryForm {
            coeffs: vec![g.a.clone(), g.b.clone()],
        };
        let ly = BinaryForm {
            coeffs: vec![g.c.clone(), g.d.clone()],
        };
        let mut out = Self::zero(n);
        for (i, c) in self.coeffs.iter().enumerate() {
            let mut t = BinaryForm { coeffs: vec![c.clone()] };
            for _ in 0..(n - i) {
                t = t.mul(&lx);
            }
            for _ in 0..i {
                t = t.mul(&ly);
            }
            out = out.add(&t);
        }
        out
    }
}

/// 2×2 matrix `[[a, b], [c, d]]` acting by `(x, y) ↦ (ax + by, cx + dy)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Matrix<T> {
    pub a: T,
    pub b: T,
    pub c: T,
    pub d: T,
}

impl<T: Coeff> Matrix<T> {
    pub fn new(a: T, b: T, c: T, d: T) -> Self {
        Matrix { a, b, c, d }
    }
    pub fn identity() -> Self {
        Matrix::new(T::one(), T::zero(), T::zero(), T::one())
    }
    pub fn det(&self) -> T {
        self.a.clone() * self.d.clone() - self.b.clone() * self.c.clone()
    }
    pub fn mul(&self, o: &Self) -> Self {
        Matrix::new(
            self.a.clone() * o.a.clone() + self.b.clone() * o.c.clone(),
            self.a.clone() * o.b.clone() + self.b.clone() * o.d.clone(),
            self.c.clone() * o.a.clone() + self.d.clone() * o.c.clone(),
            self.c.clone() * o.b.clone() + self.d.clone() * o.d.clone(),
        )
    }
}

impl<T: Coeff> BinaryCubicForm<T> {
    pub fn new(a: T, b: T, c: T, d: T) -> Self {
        BinaryCubicForm { a, b, c, d }
    }

    pub fn disc(&self) -> T {
        let (a, b, c, d) = (&self.a, &self.b, &self.c, &self.d);
        let sq = |x: &T| x.clone() * x.clone();
        sq(a) * sq(d) - k::<T>(3) * sq(b) * sq(c)
            + k::<T>(4) * a.clone() * c.clone() * sq(c)
            + k::<T>(4) * b.clone() * sq(b) * d.clone()
            - k::<T>(6) * a.clone() * b.clone() * c.clone() * d.clone()
    }

    /// `h = (b² − ac)x² + (bc − ad)xy + (c² − bd)y²`, i.e. `−(f_xx f_yy − f_xy²)/36`.
    pub fn hessian(&self) -> QuadForm<T> {
        let (a, b, c, d) = (&self.a, &self.b, &self.c, &self.d);
        QuadForm {
            a: b.clone() * b.clone() - a.clone() * c.clone(),
            b: b.clone() * c.clone() - a.clone() * d.clone(),
            c: c.clone() * c.clone() - b.clone() * d.clone(),
        }
    }

    pub fn as_binary(&self) -> BinaryForm<T> {
        BinaryForm {
            coeffs: vec![
                self.a.clone(),
                k::<T>(3) * self.b.clone(),
                k::<T>(3) * self.c.clone(),
                self.d.clone(),
            ],
        }
    }

    fn from_binary(g: &BinaryForm<T>) -> Self {
        BinaryCubicForm::new(
            g.coeffs[0].clone(),
            g.coeffs[1].clone() / k::<T>(3),
            g.coeffs[2].clone() / k::<T>(3),
            g.coeffs[3].clone(),
        )
    }

    /// `g = f_x h_y − f_y h_x`.
    pub fn jacobian_covariant(&self) -> BinaryForm<T> {
        let f = self.as_binary();
        let h = self.hessian().as_binary();
        let minus = k::<T>(-1);
        f.dx().mul(&h.dy()).add(&f.dy().mul(&h.dx()).scale(&minus))
    }

    /// `(g/3)² = Disc·f² + 4h³`, compared as `g² = 9·(Disc·f² + 4h³)`.
    pub fn syzygy_check(&self) -> bool {
        let g = self.jacobian_covariant();
        let f = self.as_binary();
        let h = self.hessian().as_binary();
        let lhs = g.mul(&g);
        let rhs = f
            .mul(&f)
            .scale(&self.disc())
            .add(&h.mul(&h).mul(&h).scale(&k::<T>(4)))
            .scale(&k::<T>(9));
        lhs == rhs
    }

    pub fn eval(&self, x: &T, y: &T) -> T {
        self.as_binary().eval(x, y)
    }

    /// `f(αx + βy, γx + δy)`, divided by `det g` when twisted.
    pub fn act(&self, g: &Matrix<T>, twisted: bool) -> Result<Self, CubicError> {
        let det = g.det();
        if det.is_zero() {
            return Err(CubicError::Singular);
        }
        if !twisted && det != T::one() {
            return Err(CubicError::NotUnimodular(format!("{det:?}")));
        }
        let mut r = self.as_binary().substitute(g);
        if twisted {
            r = BinaryForm {
                coeffs: r.coeffs.into_iter().map(|x| x / det.clone()).collect(),
            };
        }
        Ok(Self::from_binary(&r))
    }

    /// Substitution by any invertible matrix, no determinant normalisation.
    pub fn substitute(&self, g: &Matrix<T>) -> Self {
        Self::from_binary(&self.as_binary().substitute(g))
    }

    pub fn neg(&self) -> Self {
        BinaryCubicForm::new(
            T::zero() - self.a.clone(),
            T::zero() - self.b.clone(),
            T::zero() - self.c.clone(),
            T::zero() - self.d.clone(),
        )
    }
}

impl IntForm {
    pub fn from_i64(a: i64, b: i64, c: i64, d: i64) -> Self {
        BinaryCubicForm::new(a.into(), b.into(), c.into(), d.into())
    }

    pub fn to_rat(&self) -> RatForm {
        BinaryCubicForm::new(
            Rat::from_integer(self.a.clone()),
            Rat::from_integer(self.b.clone()),
            Rat::from_integer(self.c.clone()),
            Rat::from_integer(self.d.clone()),
        )
    }

    /// Whether `f` has a linear factor over ℚ.
    pub fn is_reducible_over_q(&self) -> bool {
        self.to_rat().is_reducible_over_q()
    }
}

impl RatForm {
    pub fn is_reducible_over_q(&self) -> bool {
        if self.a.is_zero() {
            return true;
        }
        let three = Rat::from_integer(3.into());
        let c = [self.d.clone(), &three * &self.c, &three * &self.b, self.a.clone()];
        !rational_roots(&c).is_empty()
    }

    /// The form as an integral form, if all coefficients are integers.
    pub fn to_int(&self) -> Option<IntForm> {
        let all = [&self.a, &self.b, &self.c, &self.d];
        all.iter().all(|x| x.is_integer()).then(|| {
            BinaryCubicForm::new(
                self.a.to_integer(),
                self.b.to_integer(),
                self.c.to_integer(),
                self.d.to_integer(),
            )
        })
    }
}

/// `3x²y + n·y³`, the representative of the identity class; `Disc = 4n`.
pub fn reducible_representative(n: &Int) -> IntForm {
    BinaryCubicForm::new(Int::zero(), 1.into(), Int::zero(), n.clone())
}

/// `(1/(2D))·Tr(δτ(x + τy)³)` for `δ = u + vτ`, `τ² = D`: the form `(v, u, vD, uD)`
/// of discriminant `4D·N(δ)²`.
pub fn delta_to_form(u: &Rat, v: &Rat, dhat: &Int) -> Result<RatForm, CubicError> {
    let dd = Rat::from_integer(dhat.clone());
    let norm = u * u - &dd * v * v;
    if norm.is_zero() || !crate::arith::is_rational_cube(&norm) {
        return Err(CubicError::NormNotCube);
    }
    let f = BinaryCubicForm::new(v.clone(), u.clone(), v * &dd, u * &dd);
    debug_assert_eq!(f.disc(), Rat::from_integer(4.into()) * dd * &norm * &norm);
    Ok(f)
}

/// Covering curve `f(x,y) + a·h(x,y)·z + b·z³ = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoveringCurve {
    /// Monomial order: x³, x²y, xy², y³, x²z, xyz, y²z, xz², yz², z³.
    pub coeffs: [Rat; 10],
    pub a: Rat,
    pub b: Rat,
    pub form: RatForm,
}

pub const MONOMIALS: [[u32; 3]; 10] = [
    [3, 0, 0],
    [2, 1, 0],
    [1, 2, 0],
    [0, 3, 0],
    [2, 0, 1],
    [1, 1, 1],
    [0, 2, 1],
    [1, 0, 2],
    [0, 1, 2],
    [0, 0, 3],
];

pub fn covering_curve(f: &RatForm, a: &Rat, b: &Rat) -> CoveringCurve {
    let h = f.hessian();
    let three = Rat::from_integer(3.into());
    let coeffs = [
        f.a.clone(),
        &three * &f.b,
        &three * &f.c,
        f.d.clone(),
        a * &h.a,
        a * &h.b,
        a * &h.c,
        Rat::zero(),
        Rat::zero(),
        b.clone(),
    ];
    CoveringCurve {
        coeffs,
        a: a.clone(),
        b: b.clone(),
        form: f.clone(),
    }
}

impl CoveringCurve {
    /// Value at a point `(x : y : z)`.
    pub fn eval(&self, p: &[Rat; 3]) -> Rat {
        let mut acc = Rat::zero();
        for (c, m) in self.coeffs.iter().zip(MONOMIALS) {
            if c.is_zero() {
                continue;
            }
            let mut t = c.clone();
            for (v, &e) in p.iter().zip(m.iter()) {
                for _ in 0..e {
                    t *= v;
                }
            }
            acc += t;
        }
        acc
    }

    /// The `z = 0` section, as a binary cubic in `(x, y)`.
    pub fn at_infinity(&self) -> RatForm {
        let three = Rat::from_integer(3.into());
        BinaryCubicForm::new(
            self.coeffs[0].clone(),
            &self.coeffs[1] / &three,
            &self.coeffs[2] / &three,
            self.coeffs[3].clone(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};
    use proptest::prelude::*;

    fn f(a: i64, b: i64, c: i64, d: i64) -> IntForm {
        IntForm::from_i64(a, b, c, d)
    }

    #[test]
    fn disc_examples() {
        assert_eq!(f(0, 1, 0, 7).disc(), int(28));
        assert_eq!(f(1, 0, 0, 1).disc(), int(1));
        assert_eq!(f(1, 0, 0, 0).disc(), int(0));
    }

    #[test]
    fn hessian_examples() {
        let h = f(0, 1, 0, 5).hessian();
        assert_eq!((h.a, h.b, h.c), (int(1), int(0), int(-5)));
        let h = f(1, 0, 0, 0).hessian();
        assert_eq!((h.a, h.b, h.c), (int(0), int(0), int(0)));
        // the sign making the syzygy hold gives −xy for x³ + y³
        let h = f(1, 0, 0, 1).hessian();
        assert_eq!((h.a, h.b, h.c), (int(0), int(-1), int(0)));
        assert!(f(1, 0, 0, 1).syzygy_check());
    }

    #[test]
    fn jacobian_examples() {
        let m = 7;
        let g = f(0, 1, 0, m).jacobian_covariant();
        assert_eq!(g.coeffs, vec![int(-6), int(0), int(-18 * m), int(0)]);
        assert_eq!(f(1, 0, 0, 0).jacobian_covariant().coeffs, vec![int(0); 4]);
        assert!(f(0, 1, 0, 7).syzygy_check());
        assert!(f(1, 0, 0, 0).syzygy_check());
        // (g/3)² = 4x⁶ + 24m·x⁴y² + 36m²·x²y⁴
        let g3 = BinaryForm {
            coeffs: g.coeffs.iter().map(|x| x / int(3)).collect(),
        };
        let sq = g3.mul(&g3);
        assert_eq!(sq.coeffs, [4, 0, 24 * m, 0, 36 * m * m, 0, 0].map(int).to_vec());
    }

    #[test]
    fn reducibility_examples() {
        assert!(f(0, 1, 0, 5).is_reducible_over_q());
        assert!(!f(1, 0, 0, 2).is_reducible_over_q());
        assert!(f(1, 0, 0, -8).is_reducible_over_q());
        let r = reducible_representative(&int(-27));
        assert_eq!(r.disc(), int(-108));
        assert_eq!(reducible_representative(&int(1)), f(0, 1, 0, 1));
    }

    #[test]
    fn delta_one_is_identity() {
        let dhat = int(-3);
        let g = delta_to_form(&rat(1, 1), &rat(0, 1), &dhat).unwrap();
        assert_eq!(g, reducible_representative(&dhat).to_rat());
        assert!(delta_to_form(&rat(2, 1), &rat(0, 1), &dhat).is_err());
    }

    #[test]
    fn action_examples() {
        let g0 = f(2, -1, 3, 5);
        assert_eq!(g0.act(&Matrix::identity(), false).unwrap(), g0);
        let m = Matrix::new(int(1), int(0), int(0), int(6));
        let t = f(0, 1, 0, 7).act(&m, true).unwrap();
        assert_eq!(t.disc(), int(28 * 36));
        assert!(g0.act(&Matrix::new(int(1), int(2), int(2), int(4)), true).is_err());
        assert!(g0.act(&Matrix::new(int(2), int(0), int(0), int(1)), false).is_err());
    }

    #[test]
    fn covering_curve_shape() {
        let form = f(0, 1, 0, 2).to_rat();
        let cc = covering_curve(&form, &rat(1, 1), &rat(1, 2));
        assert_eq!(cc.at_infinity(), form);
        assert!(cc.eval(&[rat(1, 1), rat(0, 1), rat(0, 1)]).is_zero());
    }

    fn coeffs() -> impl Strategy<Value = (i64, i64, i64, i64)> {
        (-50i64..=50, -50i64..=50, -50i64..=50, -50i64..=50)
    }

    fn sl2() -> impl Strategy<Value = Matrix<Int>> {
        // products of elementary matrices
        prop::collection::vec((0u8..3, -4i64..=4), 1..6).prop_map(|steps| {
            let mut m = Matrix::identity();
            for (kind, k) in steps {
                let e = match kind {
                    0 => Matrix::new(int(1), int(k), int(0), int(1)),
                    1 => Matrix::new(int(1), int(0), int(k), int(1)),
                    _ => Matrix::new(int(0), int(-1), int(1), int(0)),
                };
                m = m.mul(&e);
            }
            m
        })
    }

    proptest! {
        #[test]
        fn syzygy_holds((a, b, c, d) in coeffs()) {
            prop_assert!(f(a, b, c, d).syzygy_check());
        }

        #[test]
        fn disc_scales_by_det6((a, b, c, d) in coeffs(), m in (-3i64..=3, -3i64..=3, -3i64..=3, -3i64..=3)) {
            let g = Matrix::new(int(m.0), int(m.1), int(m.2), int(m.3));
            let form = f(a, b, c, d);
            let det = g.det();
            let r = form.substitute(&g);
            prop_assert_eq!(r.disc(), form.disc() * num_traits::pow(det, 6));
        }

        #[test]
        fn hessian_is_covariant((a, b, c, d) in coeffs(), g in sl2()) {
            let form = f(a, b, c, d);
            let lhs = form.act(&g, false).unwrap().hessian();
            let rhs = form.hessian().act(&g);
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn delta_form_disc(u in -40i64..40, v in -40i64..40, di in 0usize..6) {
            let dhat = int([-3, 6, -15, 21, -2, 5][di]);
            let dr = Rat::from_integer(dhat.clone());
            // force a cube norm by scaling: δ·N(δ) has norm N(δ)³
            let (u, v) = (rat(u, 1), rat(v, 1));
            let n = &u * &u - &dr * &v * &v;
            prop_assume!(!n.is_zero());
            let (u2, v2) = (&u * &n, &v * &n);
            let g = delta_to_form(&u2, &v2, &dhat).unwrap();
            let n2 = &u2 * &u2 - &dr * &v2 * &v2;
            prop_assert_eq!(g.disc(), Rat::from_integer(4.into()) * dr * &n2 * &n2);
            prop_assert!(g.syzygy_check());
        }
    }
}
