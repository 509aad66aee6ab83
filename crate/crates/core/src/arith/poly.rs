// SPDX-License-Identifier: Apache-2.0
//! Rational roots of univariate polynomials.

use super::{factor, Int, Rat};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Evaluates `Σ c_i x^i` (coefficients in increasing degree).
pub fn eval(coeffs: &[Rat], x: &Rat) -> Rat {
    coeffs
        .iter()
        .rev()
        .fold(Rat::zero(), |acc, c| acc * x + c)
}

fn divisors(n: &Int) -> Vec<Int> {
    let mut ds = vec![Int::one()];
    for (p, e) in factor(n).expect("nonzero") {
        let mut next = Vec::with_capacity(ds.len() * (e as usize + 1));
        for d in &ds {
            let mut pk = Int::one();
            for _ in 0..=e {
                next.push(d * &pk);
                pk *= &p;
            }
        }
        ds = next;
    }
    ds.sort();
    ds
}

/// Distinct rational roots of a nonzero polynomial, sorted ascending.
pub fn rational_roots(coeffs: &[Rat]) -> Vec<Rat> {
    let mut c: Vec<Rat> = coeffs.to_vec();
    while c.last().is_some_and(|x| x.is_zero()) {
        c.pop();
    }
    if c.len() <= 1 {
        return Vec::new();
    }
    let mut roots = Vec::new();
    let lead_zeros = c.iter().take_while(|x| x.is_zero()).count();
    if lead_zeros > 0 {
        roots.push(Rat::zero());
        c.drain(..lead_zeros);
    }
    if c.len() > 1 {
        let l = c.iter().fold(Int::one(), |acc, x| acc.lcm(x.denom()));
        let ints: Vec<Int> = c.iter().map(|x| (x * Rat::from_integer(l.clone())).to_integer()).collect();
        let g = ints.iter().fold(Int::zero(), |acc, x| acc.gcd(x));
        let ints: Vec<Int> = ints.iter().map(|x| x / &g).collect();
        let c0 = ints[0].abs();
        let cn = ints.last().unwrap().abs();
        let (num, den) = (divisors(&c0), divisors(&cn));
        for q in &den {
            for p in &num {
                if !p.gcd(q).is_one() {
                    continue;
                }
                for sign in [-1i32, 1] {
                    let x = Rat::new(p * Int::from(sign), q.clone());
                    if eval(&c, &x).is_zero() {
                        roots.push(x);
                    }
                }
            }
        }
    }
    roots.sort();
    roots.dedup();
    roots
}
