// SPDX-License-Identifier: Apache-2.0
//! Search for `ℚ_p`-points on plane cubics by residue refinement and Hensel's
//! lemma.

use crate::arith::{Int, Place};
use crate::cubic::{CoveringCurve, MONOMIALS};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Soluble,
    Insoluble,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Witness {
    /// Primitive `(x : y : z)` with `v_p(F(x, y, z)) ≥ precision` and some
    /// partial derivative a unit after the same rescaling, so it lifts.
    Point {
        #[serde(with = "int_string")]
        x: Int,
        #[serde(with = "int_string")]
        y: Int,
        #[serde(with = "int_string")]
        z: Int,
        precision: u32,
    },
    /// Soluble for structural reasons; no search was run.
    Automatic(String),
    /// Every residue branch dies before the precision bound.
    NoPoint { precision: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalSolubilityCertificate {
    pub place: Place,
    pub verdict: Verdict,
    pub witness: Witness,
    /// Set when some branch reached the precision bound undecided. The
    /// verdict is then `Insoluble` unless another branch found a point.
    pub precision_exhausted: bool,
}

impl LocalSolubilityCertificate {
    pub fn automatic(place: Place, reason: &str) -> Self {
        LocalSolubilityCertificate {
            place,
            verdict: Verdict::Soluble,
            witness: Witness::Automatic(reason.to_string()),
            precision_exhausted: false,
        }
    }

    pub fn is_soluble(&self) -> bool {
        self.verdict == Verdict::Soluble
    }

    /// Rechecks a point witness against an integral cubic.
    pub fn verify(&self, cubic: &IntCubic) -> bool {
        match (&self.witness, self.place) {
            (Witness::Point { x, y, z, precision }, Place::Finite(p)) => {
                let pi = Int::from(p);
                let primitive = [x, y, z].iter().any(|c| !c.is_multiple_of(&pi));
                let v = cubic.eval(x, y, z);
                primitive && (v.is_zero() || crate::arith::val_int(&v, &pi) >= *precision)
            }
            (Witness::Automatic(_), _) => self.verdict == Verdict::Soluble,
            (Witness::NoPoint { .. }, _) => self.verdict == Verdict::Insoluble,
            _ => false,
        }
    }
}

mod int_string {
    use crate::arith::Int;
    use serde::{Deserialize, Deserializer, Serializer};
    pub fn serialize<S: Serializer>(n: &Int, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&n.to_string())
    }
    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Int, D::Error> {
        let t = String::deserialize(d)?;
        t.parse().map_err(serde::de::Error::custom)
    }
}

/// Ternary cubic with integer coefficients, monomials ordered as in
/// [`MONOMIALS`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntCubic {
    pub coeffs: [Int; 10],
}

impl IntCubic {
    /// Clears denominators and removes the content.
    pub fn from_covering(c: &CoveringCurve) -> Self {
        let l = c.coeffs.iter().fold(Int::one(), |l, q| l.lcm(q.denom()));
        let coeffs: [Int; 10] = std::array::from_fn(|i| (&c.coeffs[i] * crate::arith::rat_int(l.clone())).to_integer());
        let g = coeffs.iter().fold(Int::zero(), |g, c| g.gcd(c));
        IntCubic {
            coeffs: std::array::from_fn(|i| &coeffs[i] / &g),
        }
    }

    pub fn eval(&self, x: &Int, y: &Int, z: &Int) -> Int {
        let mut acc = Int::zero();
        for (c, m) in self.coeffs.iter().zip(MONOMIALS) {
            if c.is_zero() {
                continue;
            }
            acc += c * x.pow(m[0]) * y.pow(m[1]) * z.pow(m[2]);
        }
        acc
    }
}

/// Affine coordinate `offset + scale·t` for one projective coordinate, or a
/// constant when `scale = 0`.
#[derive(Debug, Clone)]
struct Coord {
    offset: Int,
    scale: Int,
}

/// Bivariate polynomial `Σ c[i][j] uⁱ vʲ` of total degree ≤ 3.
#[derive(Debug, Clone)]
struct Poly2 {
    c: [[Int; 4]; 4],
}

fn binom(n: usize, k: usize) -> i64 {
    [[1, 0, 0, 0], [1, 1, 0, 0], [1, 2, 1, 0], [1, 3, 3, 1]][n][k]
}

impl Poly2 {
    fn zero() -> Self {
        Poly2 {
            c: std::array::from_fn(|_| std::array::from_fn(|_| Int::zero())),
        }
    }

    /// `F(X, Y, Z)` with each of `X, Y, Z` affine in `u` or `v`.
    fn from_cubic(f: &IntCubic, xs: &[(Coord, usize); 3]) -> Self {
        let mut out = Poly2::zero();
        for (coef, m) in f.coeffs.iter().zip(MONOMIALS) {
            if coef.is_zero() {
                continue;
            }
            // product of (offset + scale·var)^e over the three coordinates
            let mut term = Poly2::zero();
            term.c[0][0] = coef.clone();
            for (k, &e) in m.iter().enumerate() {
                let (co, var) = &xs[k];
                for _ in 0..e {
                    term = term.mul_linear(&co.offset, &co.scale, *var);
                }
            }
            out.add_assign(&term);
        }
        out
    }

    fn mul_linear(&self, off: &Int, scale: &Int, var: usize) -> Self {
        let mut out = Poly2::zero();
        for i in 0..4 {
            for j in 0..4 {
                let c = &self.c[i][j];
                if c.is_zero() {
                    continue;
                }
                out.c[i][j] += c * off;
                if !scale.is_zero() {
                    let (ii, jj) = if var == 0 { (i + 1, j) } else { (i, j + 1) };
                    debug_assert!(ii < 4 && jj < 4);
                    out.c[ii][jj] += c * scale;
                }
            }
        }
        out
    }

    fn add_assign(&mut self, o: &Self) {
        for i in 0..4 {
            for j in 0..4 {
                self.c[i][j] += &o.c[i][j];
            }
        }
    }

    fn content_valuation(&self, p: &Int) -> Option<u32> {
        self.c
            .iter()
            .flatten()
            .filter(|c| !c.is_zero())
            .map(|c| crate::arith::val_int(c, p))
            .min()
    }

    fn divide(&mut self, q: &Int) {
        for row in self.c.iter_mut() {
            for c in row.iter_mut() {
                *c = &*c / q;
            }
        }
    }

    fn residues(&self, p: u64) -> Residues {
        Residues {
            c: std::array::from_fn(|i| std::array::from_fn(|j| crate::arith::mod_floor_i64(&self.c[i][j], p))),
            p,
        }
    }

    fn du(&self) -> Poly2 {
        let mut out = Poly2::zero();
        for i in 1..4 {
            for j in 0..4 {
                out.c[i - 1][j] = &self.c[i][j] * Int::from(i);
            }
        }
        out
    }

    fn dv(&self) -> Poly2 {
        let mut out = Poly2::zero();
        for i in 0..4 {
            for j in 1..4 {
                out.c[i][j - 1] = &self.c[i][j] * Int::from(j);
            }
        }
        out
    }

    /// `P(u0 + p·u, v0 + p·v)`.
    fn shift(&self, u0: u64, v0: u64, p: &Int) -> Poly2 {
        let (u0, v0) = (Int::from(u0), Int::from(v0));
        let mut out = Poly2::zero();
        // powers of the linear substitutes
        let pw = |base: &Int, n: usize, k: usize| -> Int { Int::from(binom(n, k)) * base.pow((n - k) as u32) * p.pow(k as u32) };
        for i in 0..4 {
            for j in 0..4 - i {
                let c = &self.c[i][j];
                if c.is_zero() {
                    continue;
                }
                for a in 0..=i {
                    let ca = pw(&u0, i, a);
                    for b in 0..=j {
                        out.c[a][b] += c * &ca * pw(&v0, j, b);
                    }
                }
            }
        }
        out
    }
}

struct Residues {
    c: [[u64; 4]; 4],
    p: u64,
}

impl Residues {
    fn eval(&self, u: u64, v: u64) -> u64 {
        let p = self.p;
        let mut acc = 0u64;
        let mut up = 1u64;
        for i in 0..4 {
            let mut vp = 1u64;
            for j in 0..4 - i {
                acc = (acc + self.c[i][j] * up % p * vp) % p;
                vp = vp * v % p;
            }
            up = up * u % p;
        }
        acc
    }
}

#[derive(Debug)]
enum Search {
    Found { u: Int, v: Int, precision: u32 },
    None,
    Exhausted,
}

/// Depth-first residue refinement on one affine chart; the current variables
/// relate to the chart's by `u_chart = origin.0 + scale·u`, likewise for `v`.
fn search(
    poly: Poly2,
    p: u64,
    depth: u32,
    max_depth: u32,
    acc_val: u32,
    origin: (&Int, &Int),
    scale: &Int,
) -> Search {
    let pi = Int::from(p);
    let mut poly = poly;
    let Some(cv) = poly.content_valuation(&pi) else {
        // identically zero: every point is a zero, the curve is reducible here
        return Search::Found {
            u: origin.0.clone(),
            v: origin.1.clone(),
            precision: acc_val + max_depth,
        };
    };
    let acc_val = acc_val + cv;
    if cv > 0 {
        poly.divide(&pi.pow(cv));
    }
    if depth > max_depth {
        return Search::Exhausted;
    }
    let (r, ru, rv) = (poly.residues(p), poly.du().residues(p), poly.dv().residues(p));
    let mut exhausted = false;
    let mut singular = Vec::new();
    for u0 in 0..p {
        for v0 in 0..p {
            if r.eval(u0, v0) != 0 {
                continue;
            }
            let (gu, gv) = (ru.eval(u0, v0), rv.eval(u0, v0));
            let u = origin.0 + scale * Int::from(u0);
            let v = origin.1 + scale * Int::from(v0);
            if gu != 0 || gv != 0 {
                return Search::Found { u, v, precision: acc_val + 1 };
            }
            singular.push((u0, v0, u, v));
        }
    }
    for (u0, v0, u, v) in singular {
        let sub = poly.shift(u0, v0, &pi);
        match search(sub, p, depth + 1, max_depth, acc_val, (&u, &v), &(scale * &pi)) {
            f @ Search::Found { .. } => return f,
            Search::Exhausted => exhausted = true,
            Search::None => {}
        }
    }
    if exhausted {
        Search::Exhausted
    } else {
        Search::None
    }
}

/// Looks for a `ℚ_p`-point on `F = 0`, refining residues at most
/// `max_depth` times.
pub fn find_point(f: &IntCubic, p: u64, max_depth: u32) -> LocalSolubilityCertificate {
    let pi = Int::from(p);
    let zero = Int::zero();
    let one = Int::one();
    let var = |s: &Int| Coord { offset: Int::zero(), scale: s.clone() };
    let cst = |c: &Int| Coord { offset: c.clone(), scale: Int::zero() };
    // P²(ℤ_p) = {(u : v : 1)} ∪ {(u : 1 : p·w)} ∪ {(1 : p·v : p·w)}
    let charts: [[(Coord, usize); 3]; 3] = [
        [(var(&one), 0), (var(&one), 1), (cst(&one), 0)],
        [(var(&one), 0), (cst(&one), 0), (var(&pi), 1)],
        [(cst(&one), 0), (var(&pi), 0), (var(&pi), 1)],
    ];
    let mut exhausted = false;
    for (k, chart) in charts.iter().enumerate() {
        let poly = Poly2::from_cubic(f, chart);
        match search(poly, p, 0, max_depth, 0, (&zero, &zero), &one) {
            Search::Found { u, v, precision } => {
                let (x, y, z) = match k {
                    0 => (u, v, one.clone()),
                    1 => (u, one.clone(), &pi * v),
                    _ => (one.clone(), &pi * u, &pi * v),
                };
                return LocalSolubilityCertificate {
                    place: Place::Finite(p),
                    verdict: Verdict::Soluble,
                    witness: Witness::Point { x, y, z, precision },
                    precision_exhausted: exhausted,
                };
            }
            Search::Exhausted => exhausted = true,
            Search::None => {}
        }
    }
    LocalSolubilityCertificate {
        place: Place::Finite(p),
        verdict: Verdict::Insoluble,
        witness: Witness::NoPoint { precision: max_depth + 1 },
        precision_exhausted: exhausted,
    }
}

impl IntCubic {
    pub fn is_nonzero(&self) -> bool {
        self.coeffs.iter().any(|c| !c.is_zero())
    }
    pub fn max_abs(&self) -> Int {
        self.coeffs.iter().map(|c| c.abs()).max().unwrap_or_default()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int;

    fn cubic(c: [i64; 10]) -> IntCubic {
        IntCubic { coeffs: c.map(int) }
    }

    #[test]
    fn fermat_cubic_has_points() {
        // x³ + y³ + z³ has (1 : −1 : 0)
        let f = cubic([1, 0, 0, 1, 0, 0, 0, 0, 0, 1]);
        for p in [2, 3, 5, 7, 13] {
            let c = find_point(&f, p, 8);
            assert!(c.is_soluble(), "p = {p}");
            assert!(c.verify(&f));
        }
    }

    #[test]
    fn selmer_cubic_is_everywhere_locally_soluble() {
        // 3x³ + 4y³ + 5z³: locally soluble everywhere, no rational point
        let f = cubic([3, 0, 0, 4, 0, 0, 0, 0, 0, 5]);
        for p in [2, 3, 5, 7, 11, 13, 19] {
            let c = find_point(&f, p, 10);
            assert!(c.is_soluble(), "p = {p}");
            assert!(c.verify(&f), "{c:?}");
        }
    }

    #[test]
    fn insoluble_diagonal_cubic() {
        // x³ + 7y³ + 49z³ has no nontrivial point in ℚ_7
        let f = cubic([1, 0, 0, 7, 0, 0, 0, 0, 0, 49]);
        let c = find_point(&f, 7, 8);
        assert_eq!(c.verdict, Verdict::Insoluble);
        assert!(!c.precision_exhausted);
        assert!(c.verify(&f));
        // and x³ + 2y³ + 4z³ at 2
        let g = cubic([1, 0, 0, 2, 0, 0, 0, 0, 0, 4]);
        assert_eq!(find_point(&g, 2, 8).verdict, Verdict::Insoluble);
    }

    #[test]
    fn witness_round_trips_through_json() {
        let f = cubic([3, 0, 0, 4, 0, 0, 0, 0, 0, 5]);
        let c = find_point(&f, 5, 8);
        let s = serde_json::to_string(&c).unwrap();
        let back: LocalSolubilityCertificate = serde_json::from_str(&s).unwrap();
        assert_eq!(back, c);
    }
}
