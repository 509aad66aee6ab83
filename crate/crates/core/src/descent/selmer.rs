// SPDX-License-Identifier: Apache-2.0
//! Selmer group sizes for one twist from integral binary cubic forms.

use super::padic::{find_point, IntCubic, LocalSolubilityCertificate};
use super::DescentError;
use crate::arith::{int, prime_divisors, rat_int, val_int, Int, Place, Rat, Squareclass};
use crate::cubic::{covering_curve, delta_class, enumerate_forms, is_cube, reducible_representative, IntForm, MirrorElement};
use crate::curves::{global_reduction, ThreeIsogenyModel};
use crate::globalsel::global_ratio_with;
use crate::localsel::{LocalConfig, LocalSelmer};
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DescentConfig {
    pub local: LocalConfig,
    /// Fixed twisting factor; `None` uses [`twisting_factor`].
    pub twisting_factor: Option<u64>,
    /// Rounds of doubling `N` after a Cassels mismatch.
    pub max_escalations: u32,
    /// Also search for points at primes dividing `s`.
    pub audit: bool,
    pub disc_bound: u64,
}

impl Default for DescentConfig {
    fn default() -> Self {
        DescentConfig {
            local: LocalConfig::default(),
            twisting_factor: None,
            max_escalations: 3,
            audit: false,
            disc_bound: crate::cubic::DEFAULT_DISC_BOUND,
        }
    }
}

/// Smallest `λ > 0` with `λa` and `λ³b` integral.
pub fn integral_scaling(a: &Rat, b: &Rat) -> Int {
    let mut l = a.denom().clone();
    for q in prime_divisors(b.denom()) {
        let e = val_int(b.denom(), &q);
        l = l.lcm(&q.pow(e.div_ceil(3)));
    }
    l
}

/// Default twisting factor: the radical of `2·N_E`. Selmer classes are
/// sought at every divisor of it.
pub fn twisting_factor(m: &ThreeIsogenyModel) -> u64 {
    let (cond, _) = global_reduction(&m.curve());
    let mut n = 2u64;
    for p in small_primes(&cond) {
        if n % p != 0 {
            n *= p;
        }
    }
    n
}

fn divisors(n: u64) -> Vec<u64> {
    let mut out = vec![1u64];
    for (p, e) in crate::arith::factor_u64(n) {
        let len = out.len();
        let mut q = 1;
        for _ in 0..e {
            q *= p;
            for i in 0..len {
                out.push(out[i] * q);
            }
        }
    }
    out.sort_unstable();
    out
}

/// One side of the descent: classes of the isogeny whose target is `target`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SideCount {
    pub size: u64,
    /// Discriminants `4·D·N²` that were enumerated.
    pub discs: Vec<String>,
    pub forms: usize,
    /// Locally soluble forms outside already-known classes.
    pub soluble_forms: usize,
    pub exhausted: usize,
    /// Classes among all enumerated forms, soluble or not.
    pub classes: u64,
    /// One locally soluble form per class, the identity first.
    pub representatives: Vec<String>,
    /// The same forms with the `N` they were found at.
    #[serde(skip)]
    pub forms_found: Vec<(u64, IntForm)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelmerCountReport {
    pub s: Squareclass,
    pub sel_phi_size: u64,
    pub sel_phihat_size: u64,
    /// `t(φ_s)` from the local ratios.
    pub t: i64,
    pub cassels_consistent: bool,
    pub uncertain_merges: u64,
    pub rank_upper_bound: u64,
    pub twisting_factor: u64,
    pub escalations: u32,
    pub diagnostics: Vec<String>,
}

/// Per-model data shared by all twists.
#[derive(Debug)]
pub struct DescentContext {
    pub model: ThreeIsogenyModel,
    pub cfg: DescentConfig,
    local: LocalSelmer,
    fixed_primes: BTreeSet<u64>,
}

fn small_primes(n: &Int) -> Vec<u64> {
    if n.is_zero() {
        return vec![];
    }
    prime_divisors(n).iter().map(|p| p.to_u64().expect("prime fits in u64")).collect()
}

impl DescentContext {
    pub fn new(model: ThreeIsogenyModel, cfg: DescentConfig) -> Self {
        let (cond, _) = global_reduction(&model.curve());
        let mut fixed: BTreeSet<u64> = [2, 3].into_iter().collect();
        fixed.extend(small_primes(&cond));
        fixed.extend(small_primes(model.d()));
        let local = LocalSelmer::new(model.clone(), cfg.local);
        DescentContext {
            model,
            cfg,
            local,
            fixed_primes: fixed,
        }
    }

    pub fn twisting_factor(&self) -> u64 {
        self.cfg.twisting_factor.unwrap_or_else(|| twisting_factor(&self.model))
    }

    /// Primes where solubility is searched for this twist and `N`.
    pub fn search_primes(&self, s: Squareclass, n: u64, target: &ThreeIsogenyModel) -> BTreeSet<u64> {
        let mut ps = self.fixed_primes.clone();
        ps.extend(crate::arith::factor_u64(n).into_iter().map(|(p, _)| p));
        ps.extend(small_primes(target.d()).into_iter().filter(|p| !s.as_int().is_multiple_of(&Int::from(*p))));
        if self.cfg.audit {
            ps.extend(small_primes(&s.as_int()));
        }
        ps
    }

    /// Counts classes of the 3-isogeny into `target` from forms of
    /// discriminant `4·D·N²` for every divisor `N` of `n0`, with coverings
    /// `f + a·h·z + b·N²·z³ = 0`. Classes are merged in `ℚ(√D)`, where the
    /// invariant of a form of discriminant `Δ = 4DN²` is read via `√Δ = 2N√D`.
    pub fn count_side(&self, s: Squareclass, target: &ThreeIsogenyModel, n0: u64) -> Result<SideCount, DescentError> {
        let mut reps: Vec<(u64, IntForm, MirrorElement)> = Vec::new();
        let mut seen: Vec<MirrorElement> = Vec::new();
        let (mut total, mut soluble, mut exhausted) = (0, 0, 0);
        let mut discs = Vec::new();
        for n in divisors(n0) {
            let nn = Int::from(n) * Int::from(n);
            let dn = target.d() * &nn;
            let disc = int(4) * &dn;
            let mut forms = enumerate_forms(&disc, Some(self.cfg.disc_bound))?;
            let identity = crate::cubic::canonical_reduce(&reducible_representative(&dn))?;
            if !forms.contains(&identity) {
                return Err(DescentError::IdentityMissing(identity.to_string()));
            }
            forms.sort_by_key(|f| f != &identity);
            total += forms.len();
            let primes = self.search_primes(s, n, target);
            for f in &forms {
                // the identity class is already known; other reducible forms lie in it
                if !reps.is_empty() && f.is_reducible_over_q() {
                    continue;
                }
                let delta = delta_class(f).ok_or(DescentError::Degenerate)?;
                let delta = MirrorElement::new(
                    delta.x,
                    delta.y * rat_int(Int::from(2 * n)),
                    target.d().clone(),
                );
                let same = |r: &MirrorElement| delta.div(r).is_some_and(|q| is_cube(&q));
                if !seen.iter().any(same) {
                    seen.push(delta.clone());
                }
                if reps.iter().any(|(_, _, r)| same(r)) {
                    continue;
                }
                let cover = self.covering(target, n, f);
                let mut ok = true;
                for &p in &primes {
                    let depth = 2 * val_int(&disc, &Int::from(p)) + 3;
                    let cert = find_point(&cover, p, depth);
                    if cert.precision_exhausted && !cert.is_soluble() {
                        exhausted += 1;
                    }
                    if !cert.is_soluble() {
                        ok = false;
                        break;
                    }
                }
                if ok {
                    soluble += 1;
                    reps.push((n, f.clone(), delta));
                }
            }
            discs.push(disc.to_string());
        }
        Ok(SideCount {
            size: reps.len() as u64,
            discs,
            forms: total,
            soluble_forms: soluble,
            exhausted,
            classes: seen.len() as u64,
            representatives: reps.iter().map(|(_, f, _)| f.to_string()).collect(),
            forms_found: reps.into_iter().map(|(n, f, _)| (n, f)).collect(),
        })
    }

    /// Integral covering curve of `f` for the isogeny into `target` at `N = n`.
    pub fn covering(&self, target: &ThreeIsogenyModel, n: u64, f: &IntForm) -> IntCubic {
        let lam = rat_int(integral_scaling(target.a(), target.b()));
        let a = target.a() * &lam;
        let b = target.b() * &lam * &lam * &lam * rat_int(Int::from(n * n));
        IntCubic::from_covering(&covering_curve(&f.to_rat(), &a, &b))
    }

    /// Local certificates for one form at every searched prime plus `∞`.
    pub fn certificates(&self, s: Squareclass, target: &ThreeIsogenyModel, n: u64, f: &IntForm) -> Vec<LocalSolubilityCertificate> {
        let cover = self.covering(target, n, f);
        let disc = f.disc();
        let mut out: Vec<_> = self
            .search_primes(s, n, target)
            .into_iter()
            .map(|p| find_point(&cover, p, 2 * val_int(&disc, &Int::from(p)) + 3))
            .collect();
        out.push(LocalSolubilityCertificate::automatic(Place::Infinity, "plane cubic over ℝ"));
        out
    }

    pub fn t(&self, s: Squareclass) -> Result<i64, DescentError> {
        Ok(global_ratio_with(&self.local, s)?.exponent())
    }

    /// Both sides at twisting factor `n`, with `t` and the Cassels verdict.
    pub fn sides(&self, s: Squareclass, n: u64) -> Result<(SideCount, SideCount, i64, bool), DescentError> {
        let es = self.model.twist(s);
        let phi = self.count_side(s, &es.dual(), n)?;
        let phihat = self.count_side(s, &es, n)?;
        let t = self.t(s)?;
        let (k, kd) = self.model.torsion_kernel_sizes(s);
        // 3^t·|Sel_φ̂|·|E[φ](ℚ)| = |Sel_φ|·|E′[φ̂](ℚ)|
        let lhs = crate::arith::pow3(t) * rat_int(Int::from(phihat.size * k as u64));
        let rhs = rat_int(Int::from(phi.size * kd as u64));
        Ok((phi, phihat, t, lhs == rhs))
    }

    pub fn selmer_size(&self, s: Squareclass) -> Result<SelmerCountReport, DescentError> {
        let mut n = self.twisting_factor();
        let mut diagnostics = Vec::new();
        let mut escalations = 0;
        loop {
            let (phi, phihat, t, ok) = self.sides(s, n)?;
            for (name, side) in [("phi", &phi), ("phihat", &phihat)] {
                if !is_power_of_3(side.size) {
                    diagnostics.push(format!("N = {n}: |Sel_{name}| = {} is not a power of 3", side.size));
                }
                if side.exhausted > 0 {
                    diagnostics.push(format!("N = {n}: {} forms hit the precision bound on the {name} side", side.exhausted));
                }
            }
            if ok || escalations >= self.cfg.max_escalations {
                if !ok {
                    diagnostics.push(format!(
                        "Cassels mismatch at N = {n}: |Sel_phi| = {}, |Sel_phihat| = {}, t = {t}",
                        phi.size, phihat.size
                    ));
                }
                let (k, kd) = self.model.torsion_kernel_sizes(s);
                let dims = log3(phi.size) + log3(phihat.size);
                let tors = log3(k as u64) + log3(kd as u64);
                return Ok(SelmerCountReport {
                    s,
                    sel_phi_size: phi.size,
                    sel_phihat_size: phihat.size,
                    t,
                    cassels_consistent: ok,
                    uncertain_merges: 0,
                    rank_upper_bound: dims.saturating_sub(tors),
                    twisting_factor: n,
                    escalations,
                    diagnostics,
                });
            }
            let next = if n % 3 == 0 { 2 * n } else { 3 * n };
            diagnostics.push(format!(
                "Cassels mismatch at N = {n} (|Sel_phi| = {}, |Sel_phihat| = {}, t = {t}); retrying with N = {next}",
                phi.size, phihat.size
            ));
            n = next;
            escalations += 1;
        }
    }
}

fn is_power_of_3(n: u64) -> bool {
    crate::arith::log3_exact(n).is_some()
}

fn log3(n: u64) -> u64 {
    crate::arith::log3_exact(n).map(u64::from).unwrap_or(0)
}

/// Report for a single twist.
pub fn selmer_size(m: &ThreeIsogenyModel, s: Squareclass, cfg: &DescentConfig) -> Result<SelmerCountReport, DescentError> {
    DescentContext::new(m.clone(), cfg.clone()).selmer_size(s)
}
