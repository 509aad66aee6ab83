// SPDX-License-Identifier: Apache-2.0
//! Trial division followed by Miller–Rabin and Brent's variant of Pollard rho.

use super::{ArithError, Int};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

const TRIAL_LIMIT: u64 = 1_000_000;
const MR_BASES: [u64; 16] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53];

/// Prime factorisation of `|n|` with strictly increasing primes.
pub fn factor(n: &Int) -> Result<Vec<(Int, u32)>, ArithError> {
    if n.is_zero() {
        return Err(ArithError::Zero);
    }
    let mut m = n.abs();
    if let Some(small) = m.to_u64() {
        return Ok(factor_u64(small)
            .into_iter()
            .map(|(p, e)| (Int::from(p), e))
            .collect());
    }
    let mut out: Vec<(Int, u32)> = Vec::new();
    let mut d = 2u64;
    while d <= TRIAL_LIMIT {
        let dd = Int::from(d);
        if &dd * &dd > m {
            break;
        }
        let mut e = 0;
        loop {
            let (q, r) = m.div_rem(&dd);
            if !r.is_zero() {
                break;
            }
            m = q;
            e += 1;
        }
        if e > 0 {
            out.push((dd, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    let mut big: Vec<Int> = Vec::new();
    if !m.is_one() {
        split(m, &mut big);
    }
    big.sort();
    for p in big {
        match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        }
    }
    Ok(out)
}

/// Distinct prime divisors of `|n|`.
pub fn prime_divisors(n: &Int) -> Vec<Int> {
    factor(n)
        .map(|f| f.into_iter().map(|(p, _)| p).collect())
        .unwrap_or_default()
}

pub fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    if n <= 1 {
        return out;
    }
    let mut d = 2u64;
    while d * d <= n && d <= TRIAL_LIMIT {
        let mut e = 0;
        while n % d == 0 {
            n /= d;
            e += 1;
        }
        if e > 0 {
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        let mut rest = Vec::new();
        split(Int::from(n), &mut rest);
        rest.sort();
        for p in rest {
            let p = p.to_u64().expect("factor of u64");
            match out.last_mut() {
                Some((q, e)) if *q == p => *e += 1,
                _ => out.push((p, 1)),
            }
        }
    }
    out
}

fn split(n: Int, out: &mut Vec<Int>) {
    if n.is_one() {
        return;
    }
    if is_probable_prime(&n) {
        out.push(n);
        return;
    }
    if let Some(r) = perfect_power_root(&n) {
        let mut sub = Vec::new();
        split(r.0, &mut sub);
        for _ in 0..r.1 {
            out.extend(sub.iter().cloned());
        }
        return;
    }
    let d = rho(&n);
    let q = &n / &d;
    split(d, out);
    split(q, out);
}

fn perfect_power_root(n: &Int) -> Option<(Int, u32)> {
    let bits = n.bits() as u32;
    for k in 2..=bits.max(2) {
        let r = n.nth_root(k);
        if r <= Int::one() {
            break;
        }
        if num_traits::pow(r.clone(), k as usize) == *n {
            return Some((r, k));
        }
    }
    None
}

fn rho(n: &Int) -> Int {
    if n.is_even() {
        return Int::from(2);
    }
    let one = Int::one();
    for c in 1u64.. {
        let c = Int::from(c);
        let f = |x: &Int| (x * x + &c) % n;
        let mut y = Int::from(2);
        let mut r = 1u64;
        let mut q = Int::one();
        let mut g = Int::one();
        let mut x = y.clone();
        let mut ys = y.clone();
        while g == one {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g == one {
                ys = y.clone();
                for _ in 0..(128.min(r - k)) {
                    y = f(&y);
                    q = (q * (&x - &y).abs()) % n;
                }
                g = q.gcd(n);
                k += 128;
            }
            r *= 2;
        }
        if g == *n {
            loop {
                ys = f(&ys);
                g = (&x - &ys).abs().gcd(n);
                if g > one {
                    break;
                }
            }
        }
        if g != *n {
            return g;
        }
    }
    unreachable!()
}

/// Miller–Rabin with the first sixteen prime bases; deterministic below 3.3·10²⁴.
pub fn is_probable_prime(n: &Int) -> bool {
    let two = Int::from(2);
    if *n < two {
        return false;
    }
    for &p in &MR_BASES {
        let pp = Int::from(p);
        if *n == pp {
            return true;
        }
        if (n % &pp).is_zero() {
            return false;
        }
    }
    let nm1 = n - 1u32;
    let s = nm1.trailing_zeros().unwrap_or(0);
    let d = &nm1 >> s;
    'outer: for &a in &MR_BASES {
        let mut x = Int::from(a).modpow(&d, n);
        if x.is_one() || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == nm1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(n: i64) -> Vec<(i64, u32)> {
        factor(&Int::from(n))
            .unwrap()
            .into_iter()
            .map(|(p, e)| (p.to_i64().unwrap(), e))
            .collect()
    }

    #[test]
    fn examples() {
        assert_eq!(f(12), vec![(2, 2), (3, 1)]);
        assert_eq!(f(-1), vec![]);
        assert_eq!(f(26271), vec![(3, 3), (7, 1), (139, 1)]);
        assert!(factor(&Int::zero()).is_err());
    }

    #[test]
    fn large_semiprimes() {
        let p = Int::from(1_000_000_007u64);
        let q = Int::from(998_244_353u64);
        let r = Int::from(4_294_967_311u64);
        let n = &p * &q * &q * &r;
        let got = factor(&n).unwrap();
        assert_eq!(got, vec![(q.clone(), 2), (p.clone(), 1), (r.clone(), 1)]);
        let sq = &r * &r;
        assert_eq!(factor(&sq).unwrap(), vec![(r, 2)]);
    }

    #[test]
    fn oracle_against_naive() {
        for n in 1u64..5000 {
            let got = factor_u64(n);
            let mut m = n;
            let mut want = Vec::new();
            for d in 2..=n {
                let mut e = 0;
                while m % d == 0 {
                    m /= d;
                    e += 1;
                }
                if e > 0 {
                    want.push((d, e));
                }
            }
            assert_eq!(got, want, "n = {n}");
        }
    }
}
