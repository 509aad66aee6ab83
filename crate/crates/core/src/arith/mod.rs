// SPDX-License-Identifier: Apache-2.0
//! Exact integer and rational arithmetic, factorization, valuations and
//! squareclass bookkeeping over ℚ and its completions.

mod factor;
pub mod poly;
mod squareclass;

pub use factor::{factor, factor_u64, is_probable_prime, prime_divisors};
pub use squareclass::{
    is_square_in_qp, least_nonresidue, legendre, local_class_of, local_squareclass,
    squarefree_sorted, LocalClass, LocalSquareclassProfile, Place, Squareclass,
};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Arbitrary-precision integer.
pub type Int = BigInt;
/// Arbitrary-precision rational.
pub type Rat = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("zero input where a nonzero value is required")]
    Zero,
    #[error("{0} is not a prime")]
    NotPrime(String),
    #[error("{0} is not squarefree")]
    NotSquarefree(String),
}

pub fn int(n: i64) -> Int {
    Int::from(n)
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(Int::from(n), Int::from(d))
}

pub fn rat_int(n: Int) -> Rat {
    Rat::from_integer(n)
}

/// Writes `n = s·m²` with `s` squarefree carrying the sign of `n`.
pub fn squarefree_part(n: &Int) -> Result<(Int, Int), ArithError> {
    if n.is_zero() {
        return Err(ArithError::Zero);
    }
    let mut s = if n.is_negative() { -Int::one() } else { Int::one() };
    let mut m = Int::one();
    for (p, e) in factor(n)? {
        if e % 2 == 1 {
            s *= &p;
        }
        m *= num_traits::pow(p, (e / 2) as usize);
    }
    Ok((s, m))
}

/// Squarefree part of a nonzero rational: the squarefree integer in the
/// same class of ℚ*/ℚ*².
pub fn squarefree_part_rat(x: &Rat) -> Result<Int, ArithError> {
    if x.is_zero() {
        return Err(ArithError::Zero);
    }
    let (s, _) = squarefree_part(&(x.numer() * x.denom()))?;
    Ok(s)
}

pub fn is_squarefree(n: &Int) -> bool {
    match factor(n) {
        Ok(f) => f.iter().all(|(_, e)| *e == 1),
        Err(_) => false,
    }
}

/// `v_p(n)` for a nonzero integer.
pub fn val_int(n: &Int, p: &Int) -> u32 {
    debug_assert!(!n.is_zero());
    let mut v = 0;
    let mut m = n.clone();
    loop {
        let (q, r) = m.div_rem(p);
        if !r.is_zero() {
            return v;
        }
        m = q;
        v += 1;
    }
}

/// `v_p(n)` normalised with `v(p) = 1`.
pub fn padic_valuation(x: &Rat, p: &Int) -> Result<i64, ArithError> {
    if x.is_zero() {
        return Err(ArithError::Zero);
    }
    Ok(val_int(x.numer(), p) as i64 - val_int(x.denom(), p) as i64)
}

/// Valuation that returns `None` for zero.
pub fn val_opt(x: &Rat, p: &Int) -> Option<i64> {
    padic_valuation(x, p).ok()
}

pub fn is_perfect_square(n: &Int) -> bool {
    if n.is_negative() {
        return false;
    }
    let r = n.sqrt();
    &r * &r == *n
}

pub fn exact_sqrt(n: &Int) -> Option<Int> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

pub fn exact_cbrt(n: &Int) -> Option<Int> {
    let r = n.cbrt();
    (&r * &r * &r == *n).then_some(r)
}

pub fn rat_sqrt(x: &Rat) -> Option<Rat> {
    Some(Rat::new(exact_sqrt(x.numer())?, exact_sqrt(x.denom())?))
}

pub fn rat_cbrt(x: &Rat) -> Option<Rat> {
    Some(Rat::new(exact_cbrt(x.numer())?, exact_cbrt(x.denom())?))
}

pub fn is_rational_square(x: &Rat) -> bool {
    !x.is_zero() && rat_sqrt(x).is_some()
}

pub fn is_rational_cube(x: &Rat) -> bool {
    rat_cbrt(x).is_some()
}

/// Floor square root of a nonnegative `i128`.
pub fn isqrt_i128(n: i128) -> i128 {
    debug_assert!(n >= 0);
    if n < 2 {
        return n;
    }
    let mut r = (n as f64).sqrt() as i128;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

pub fn sqrt_exact_i128(n: i128) -> Option<i128> {
    if n < 0 {
        return None;
    }
    let r = isqrt_i128(n);
    (r * r == n).then_some(r)
}

pub fn to_i64(n: &Int) -> Option<i64> {
    n.to_i64()
}

/// `3^e` as a rational, for any sign of `e`.
pub fn pow3(e: i64) -> Rat {
    let m = num_traits::pow(Int::from(3), e.unsigned_abs() as usize);
    if e >= 0 {
        rat_int(m)
    } else {
        Rat::new(Int::one(), m)
    }
}

/// Exact power of 3 exponent of a positive integer, if it is one.
pub fn log3_exact(n: u64) -> Option<u32> {
    if n == 0 {
        return None;
    }
    let mut m = n;
    let mut e = 0;
    while m % 3 == 0 {
        m /= 3;
        e += 1;
    }
    (m == 1).then_some(e)
}

pub fn mod_pow_u64(b: u64, mut e: u64, m: u64) -> u64 {
    let mut r: u128 = 1 % m as u128;
    let mut bb = (b % m) as u128;
    let mm = m as u128;
    while e > 0 {
        if e & 1 == 1 {
            r = r * bb % mm;
        }
        bb = bb * bb % mm;
        e >>= 1;
    }
    r as u64
}

/// Positive residue of `n` modulo `m`.
pub fn mod_floor_i64(n: &Int, m: u64) -> u64 {
    n.mod_floor(&Int::from(m)).to_u64().expect("residue fits")
}

/// Serde adapter writing a rational as its exact string `n` or `n/d`.
pub mod rat_string {
    use super::{parse_rat_str, Rat};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rat, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&r.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rat, D::Error> {
        let t = String::deserialize(d)?;
        parse_rat_str(&t).ok_or_else(|| serde::de::Error::custom(format!("not a rational: {t}")))
    }
}

/// Parses `n` or `n/d`.
pub fn parse_rat_str(t: &str) -> Option<Rat> {
    let t = t.trim();
    match t.split_once('/') {
        Some((n, d)) => {
            let n: Int = n.trim().parse().ok()?;
            let d: Int = d.trim().parse().ok()?;
            (!d.is_zero()).then(|| Rat::new(n, d))
        }
        None => Some(Rat::from_integer(t.parse().ok()?)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn squarefree_examples() {
        assert_eq!(squarefree_part(&int(18)).unwrap(), (int(2), int(3)));
        assert_eq!(squarefree_part(&int(-4)).unwrap(), (int(-1), int(2)));
        assert_eq!(squarefree_part(&int(-60)).unwrap(), (int(-15), int(2)));
        assert_eq!(squarefree_part(&int(0)), Err(ArithError::Zero));
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(padic_valuation(&rat(27, 2), &int(3)).unwrap(), 3);
        assert_eq!(padic_valuation(&rat(5, 1), &int(7)).unwrap(), 0);
        assert_eq!(padic_valuation(&rat(9, 49), &int(7)).unwrap(), -2);
        assert!(padic_valuation(&rat(0, 1), &int(7)).is_err());
    }

    #[test]
    fn roots() {
        assert_eq!(exact_cbrt(&int(-27)), Some(int(-3)));
        assert_eq!(exact_cbrt(&int(26)), None);
        assert_eq!(exact_sqrt(&int(49)), Some(int(7)));
        assert_eq!(sqrt_exact_i128(1 << 100), Some(1 << 50));
        assert_eq!(isqrt_i128((1 << 100) - 1), (1 << 50) - 1);
        assert_eq!(log3_exact(27), Some(3));
        assert_eq!(log3_exact(6), None);
    }

    proptest! {
        #[test]
        fn squarefree_recomposes(n in -1_000_000i64..1_000_000i64) {
            prop_assume!(n != 0);
            let (s, m) = squarefree_part(&int(n)).unwrap();
            prop_assert_eq!(&s * &m * &m, int(n));
            prop_assert!(is_squarefree(&s));
            prop_assert!(m > Int::zero());
        }

        #[test]
        fn valuation_is_additive(a in 1i64..100_000, b in 1i64..100_000, c in 1i64..100_000,
                                 d in 1i64..100_000, pi in 0usize..5) {
            let p = int([2, 3, 5, 7, 11][pi]);
            let x = rat(a, b);
            let y = rat(-c, d);
            let lhs = padic_valuation(&(&x * &y), &p).unwrap();
            let rhs = padic_valuation(&x, &p).unwrap() + padic_valuation(&y, &p).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
