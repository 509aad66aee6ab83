// SPDX-License-Identifier: Apache-2.0
//! Acceptance checks, one line per criterion. With `SELMER3_ACCEPT_STRICT` set
//! the process exits nonzero if any criterion fails.
//!
//! `SELMER3_ACCEPT_X` lowers the sweep height for quick local runs; the
//! verdict line then says so and criterion 2 is reported as failing.

use num_traits::{One, Zero};
use rand::{rngs::StdRng, Rng, SeedableRng};
use selmer3::arith::{rat, rat_int, squarefree_sorted, Int, Place, Rat, Squareclass};
use selmer3::cubic::{canonical_reduce, enumerate_forms, IntForm};
use selmer3::curves::{
    global_reduction, isogeny_alpha_at_3, isogeny_kernels, minimal_model, tate_algorithm, Kodaira, ThreeIsogenyModel,
    WeierstrassCurve,
};
use selmer3::descent::{sweep, within, SweepConfig};
use selmer3::globalsel::{average_rank_bound, classify_twists, rank0_and_selmer1_proportions};
use selmer3::localsel::{c_3, c_local, LocalConfig};
use serde_json::Value;
use std::time::{Duration, Instant};

const SWEEP_X: u64 = 10_000;
const SWEEP_TOL: (i64, i64) = (1, 5);
const STRATUM_TOL: (i64, i64) = (1, 4);
const CLASSIFY_LIMIT: Duration = Duration::from_secs(5);
const SWEEP_LIMIT: Duration = Duration::from_secs(30 * 60);
const SYZYGY_FORMS: usize = 10_000;
const SYZYGY_LIMIT: Duration = Duration::from_secs(10);
const FORM_DISC_LIMIT: i64 = 500;

type Outcome = Result<String, String>;

fn m19() -> ThreeIsogenyModel {
    ThreeIsogenyModel::from_ints(1, (1, 1), (1, 2)).unwrap()
}

fn fixture(name: &str) -> Vec<Value> {
    let path = format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn curve_of(v: &Value) -> WeierstrassCurve {
    let a: Vec<&str> = v.as_array().unwrap().iter().map(|x| x.as_str().unwrap()).collect();
    a.join(",").parse().unwrap()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn criterion1() -> Outcome {
    let t0 = Instant::now();
    let tc = classify_twists(&m19(), &LocalConfig::default()).map_err(|e| e.to_string())?;
    let u = tc.unsigned_densities();
    let avg = average_rank_bound(&tc, None).map_err(|e| e.to_string())?;
    let (p0, p1) = rank0_and_selmer1_proportions(&tc);
    let el = t0.elapsed();
    let half = rat(1, 2);
    ensure(u.len() == 2 && u[&0] == half && u[&1] == half, || format!("mu(T_m) = {u:?}"))?;
    ensure(avg == rat(7, 6), || format!("average rank bound {avg}"))?;
    ensure(p0 == rat(1, 4) && p1 == rat(5, 12), || format!("proportions {p0}, {p1}"))?;
    ensure(el < CLASSIFY_LIMIT, || format!("took {el:?}"))?;
    Ok(format!("mu(T0) = mu(T1) = 1/2, rank bound 7/6, proportions 1/4 and 5/12 in {el:.2?}"))
}

/// Criteria 2 and 3 share one sweep.
fn criteria2_3() -> (Outcome, Outcome) {
    let x = std::env::var("SELMER3_ACCEPT_X")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(SWEEP_X);
    let t0 = Instant::now();
    let cfg = SweepConfig {
        x,
        checkpoints: 10,
        chunk: 512,
        ..Default::default()
    };
    let r = match sweep(&m19(), &cfg) {
        Ok(r) => r,
        Err(e) => return (Err(e.to_string()), Err(e.to_string())),
    };
    let el = t0.elapsed();
    let tol = rat(SWEEP_TOL.0, SWEEP_TOL.1);
    let stol = rat(STRATUM_TOL.0, STRATUM_TOL.1);
    let f = |q: &Rat| format!("{:.4}", num_traits::ToPrimitive::to_f64(q).unwrap_or(f64::NAN));
    let bad: Vec<String> = r
        .strata
        .iter()
        .filter(|s| !within(&s.average, &s.prediction, &stol))
        .map(|s| format!("{:?} (t={}, n={}): {} vs {}", s.classes, s.t, s.count, f(&s.average), s.prediction))
        .collect();
    let c2 = (|| {
        ensure(x == SWEEP_X, || format!("height bound lowered to {x}"))?;
        ensure(within(&r.average, &r.prediction, &tol), || {
            format!("average {} = {} vs prediction {}", r.average, f(&r.average), r.prediction)
        })?;
        ensure(bad.is_empty(), || {
            format!(
                "average {} vs {} ok; {} of {} strata outside 25%: {}",
                f(&r.average),
                r.prediction,
                bad.len(),
                r.strata.len(),
                bad.join("; ")
            )
        })?;
        ensure(el < SWEEP_LIMIT, || format!("took {el:?}"))?;
        Ok(format!(
            "{} twists, average |Sel_phi| = {} vs exact prediction {}; {} strata within 25% of 1 + 3^t; {el:.0?}",
            r.count,
            f(&r.average),
            r.prediction,
            r.strata.len()
        ))
    })();
    let c3 = if r.all_consistent() {
        Ok(format!("{} of {} twists consistent", r.consistent, r.count))
    } else {
        Err(format!("inconsistent at {:?}", r.inconsistent))
    };
    (c2, c3)
}

fn criterion4() -> Outcome {
    let t0 = Instant::now();
    let mut rng = StdRng::seed_from_u64(4);
    let mut degenerate = 0;
    let mut forms: Vec<IntForm> = (0..SYZYGY_FORMS)
        .map(|_| {
            let mut c = || rng.gen_range(-50i64..=50);
            IntForm::from_i64(c(), c(), c(), c())
        })
        .collect();
    // every coefficient box contains these degenerate shapes
    forms.extend([(0, 0, 0, 0), (1, 0, 0, 0), (0, 0, 0, -7), (1, 1, 1, 1), (8, 4, 2, 1), (0, 1, 0, 0), (0, 0, 3, 5)].map(
        |(a, b, c, d)| IntForm::from_i64(a, b, c, d),
    ));
    for f in &forms {
        if f.disc().is_zero() {
            degenerate += 1;
        }
        ensure(f.syzygy_check(), || format!("syzygy fails for {f}"))?;
    }
    let el = t0.elapsed();
    ensure(el < SYZYGY_LIMIT, || format!("took {el:?}"))?;
    Ok(format!("{} forms ({degenerate} with Disc = 0) in {el:.2?}", forms.len()))
}

fn criterion5() -> Outcome {
    let fleet = fixture("tate_fleet.json");
    ensure(fleet.len() >= 20, || format!("fleet has {} curves", fleet.len()))?;
    let mut kinds = std::collections::BTreeSet::new();
    for entry in &fleet {
        let e = curve_of(&entry["ainvs"]);
        let (cond, _) = global_reduction(&e);
        ensure(cond.to_string() == entry["conductor"].as_str().unwrap(), || format!("{e}: conductor {cond}"))?;
        let (m, _) = minimal_model(&e);
        ensure(m == curve_of(&entry["minimal"]), || format!("{e}: minimal model {m}"))?;
        for l in entry["local"].as_array().unwrap() {
            let p = l["p"].as_u64().unwrap();
            let ld = tate_algorithm(&e, p);
            let got = (ld.kodaira.to_string(), ld.tamagawa as u64, ld.v_delta_min as u64, ld.conductor_exp as u64);
            let want = (
                l["kodaira"].as_str().unwrap().to_string(),
                l["c"].as_u64().unwrap(),
                l["vdelta_min"].as_u64().unwrap(),
                l["f"].as_u64().unwrap(),
            );
            ensure(got == want, || format!("{e} at {p}: {got:?} vs {want:?}"))?;
            kinds.insert(kind(ld.kodaira));
        }
    }
    ensure(kinds.len() == 10, || format!("only {} Kodaira kinds covered: {kinds:?}", kinds.len()))?;
    Ok(format!("{} curves, all ten Kodaira kinds", fleet.len()))
}

fn kind(k: Kodaira) -> &'static str {
    match k {
        Kodaira::I0 => "I0",
        Kodaira::In(_) => "In",
        Kodaira::II => "II",
        Kodaira::III => "III",
        Kodaira::IV => "IV",
        Kodaira::I0Star => "I0*",
        Kodaira::InStar(_) => "In*",
        Kodaira::IVStar => "IV*",
        Kodaira::IIIStar => "III*",
        Kodaira::IIStar => "II*",
    }
}

fn criterion6() -> Outcome {
    let mut rng = StdRng::seed_from_u64(6);
    let mut curves = Vec::new();
    while curves.len() < 50 {
        let mut c = || rng.gen_range(-60i64..=60);
        let a = [c() % 2, c() % 3, c() % 2, c(), c()];
        if let Ok(e) = WeierstrassCurve::from_ints(a) {
            curves.push(e);
        }
    }
    let mut checks = 0;
    for e in &curves {
        for p in [3u64, 5, 7, 11, 13] {
            let before = tate_algorithm(e, p).kodaira;
            let after = tate_algorithm(&e.quadratic_twist(&rat_int(Int::from(p))), p).kodaira;
            ensure(after == before.twisted(), || format!("{e} at {p}: {before} twists to {after}"))?;
            checks += 1;
        }
    }
    Ok(format!("{} curves x 5 primes = {checks} twists match the table", curves.len()))
}

fn family_model(k: u32) -> ThreeIsogenyModel {
    let t = Int::from(4u64.pow(k) * 6561);
    ThreeIsogenyModel::folded(&rat_int(t + 27), &Rat::one(), &rat(4, 1)).unwrap()
}

fn isogeny_fleet() -> Vec<(String, ThreeIsogenyModel)> {
    let mut out = Vec::new();
    for entry in fixture("tate_fleet.json") {
        let e = curve_of(&entry["ainvs"]);
        let name = entry["name"].as_str().unwrap_or("?").to_string();
        for (i, (_, m)) in isogeny_kernels(&e).into_iter().enumerate() {
            out.push((format!("{name}#{i}"), m));
        }
    }
    out.extend((0..3).map(|k| (format!("E_{k}"), family_model(k))));
    out
}

fn criterion7() -> Outcome {
    let cfg = LocalConfig::default();
    let twists: Vec<i64> = squarefree_sorted(30);
    let fleet = isogeny_fleet();
    let (mut nontrivial, mut products) = (0, 0);
    for (name, m) in &fleet {
        for &s in &twists {
            let sc = Squareclass::new(s).unwrap();
            let et = m.twist(sc);
            let (cond_s, _) = global_reduction(&et.curve());
            let mut primes: Vec<u64> = selmer3::arith::prime_divisors(&(&cond_s * Int::from(2)))
                .iter()
                .map(|p| num_traits::ToPrimitive::to_u64(p).unwrap())
                .collect();
            primes.extend([5u64, 7, 11, 13, 17, 23, 29, 31]);
            primes.sort_unstable();
            primes.dedup();
            for p in primes.into_iter().filter(|&p| p != 3) {
                let c = c_local(m, sc, Place::Finite(p), &cfg).map_err(|e| format!("{name} s={s} p={p}: {e}"))?;
                ensure(c.exponent().abs() <= 1, || format!("{name} s={s}: c_{p} = {c}"))?;
                let good = !(&cond_s % Int::from(p)).is_zero() || cond_s.is_zero();
                ensure(!good || c.exponent() == 0, || format!("{name} s={s}: c_{p} = {c} at good p"))?;
                nontrivial += (c.exponent() != 0) as usize;
            }
            let (k, kd) = et.torsion_kernel_sizes_local(Place::Finite(3));
            if (k, kd) == (1, 1) {
                let a = isogeny_alpha_at_3(&et).map_err(|e| format!("{name} s={s}: {e}"))?;
                let ad = isogeny_alpha_at_3(&et.dual()).map_err(|e| format!("{name} s={s}: {e}"))?;
                ensure(a.exponent + ad.exponent == 1, || format!("{name} s={s}: alpha product 3^{}", a.exponent + ad.exponent))?;
                let c = c_3(m, sc).map_err(|e| format!("{name} s={s}: {e}"))?;
                let cd = c_3(&m.dual(), sc).map_err(|e| format!("{name} s={s}: {e}"))?;
                ensure(c.exponent() + cd.exponent() == 1, || {
                    format!("{name} s={s}: c_3 c_3' = 3^{}", c.exponent() + cd.exponent())
                })?;
                products += 1;
            }
        }
    }
    Ok(format!(
        "{} models x {} twists; {nontrivial} nontrivial c_p, {products} product checks at 3",
        fleet.len(),
        twists.len()
    ))
}

fn criterion8() -> Outcome {
    let mut failures = Vec::new();
    for k in 0..3u32 {
        if let Err(e) = family_checks(k) {
            failures.push(e);
        }
    }
    ensure(failures.is_empty(), || failures.join("; "))?;
    Ok("j, j' exact; c_p = 1 at bad p > 3 and t >= 0 for 50 twists each, k = 0, 1, 2".into())
}

fn family_checks(k: u32) -> Result<(), String> {
    let cfg = LocalConfig::default();
    let mut rng = StdRng::seed_from_u64(8 + u64::from(k));
    let pool = squarefree_sorted(5000);
    let tk = rat_int(Int::from(4u64.pow(k) * 6561));
    let m = family_model(k);
    let j = (&tk + rat(3, 1)).pow(3) * (&tk + rat(27, 1)) / &tk;
    let jp = (&tk + rat(27, 1)) * (&tk + rat(243, 1)).pow(3) / tk.pow(3);
    ensure(m.curve().j() == j, || format!("k={k}: j = {}", m.curve().j()))?;
    ensure(m.dual().curve().j() == jp, || format!("k={k}: j' = {}", m.dual().curve().j()))?;
    let (cond, _) = global_reduction(&m.curve());
    let bad: Vec<u64> = selmer3::arith::prime_divisors(&cond)
        .iter()
        .map(|p| num_traits::ToPrimitive::to_u64(p).unwrap())
        .filter(|&p| p > 3)
        .collect();
    let ls = selmer3::localsel::LocalSelmer::new(m.clone(), cfg);
    let mut negative = Vec::new();
    for _ in 0..50 {
        let s = pool[rng.gen_range(0..pool.len())];
        let sc = Squareclass::new(s).unwrap();
        for &p in &bad {
            let c = ls.c_local(sc, Place::Finite(p)).map_err(|e| e.to_string())?;
            ensure(c.exponent() == 0, || format!("k={k} s={s}: c_{p} = {c}"))?;
        }
        let t = selmer3::globalsel::global_ratio_with(&ls, sc).map_err(|e| e.to_string())?.exponent();
        if t < 0 {
            let c2 = ls.c_local(sc, Place::Finite(2)).map_err(|e| e.to_string())?;
            negative.push(format!("s={s} (c_2 = {c2})"));
        }
    }
    ensure(negative.is_empty(), || {
        format!("k={k}: t = -1 for {} of 50 twists, e.g. {}", negative.len(), negative[..negative.len().min(3)].join(", "))
    })
}

fn disc_i64(a: i64, b: i64, c: i64, d: i64) -> i64 {
    a * a * d * d - 3 * b * b * c * c + 4 * a * c * c * c + 4 * b * b * b * d - 6 * a * b * c * d
}

fn criterion9() -> Outcome {
    use std::collections::{BTreeMap, BTreeSet};
    // reduced forms with |Disc| <= 500 have |a|, |b|, |c| <= 12 and |d| <= 150
    let mut oracle: BTreeMap<i64, BTreeSet<IntForm>> = BTreeMap::new();
    for a in 0..=12i64 {
        for b in -12..=12i64 {
            for c in -12..=12i64 {
                for d in -150..=150i64 {
                    let dd = disc_i64(a, b, c, d);
                    if dd != 0 && dd.abs() <= FORM_DISC_LIMIT {
                        let f = canonical_reduce(&IntForm::from_i64(a, b, c, d)).map_err(|e| e.to_string())?;
                        oracle.entry(dd).or_default().insert(f);
                    }
                }
            }
        }
    }
    let (mut discs, mut classes) = (0, 0);
    for d in -FORM_DISC_LIMIT..=FORM_DISC_LIMIT {
        if d == 0 {
            continue;
        }
        let got: BTreeSet<IntForm> = enumerate_forms(&Int::from(d), None).map_err(|e| e.to_string())?.into_iter().collect();
        let want = oracle.remove(&d).unwrap_or_default();
        ensure(got == want, || format!("disc {d}: {} forms vs {} in the box", got.len(), want.len()))?;
        discs += 1;
        classes += got.len();
    }
    Ok(format!("{discs} discriminants, {classes} classes, exact set equality"))
}

fn main() {
    let mut failed = 0;
    let mut report = |n: u32, what: &str, o: Outcome| {
        match &o {
            Ok(msg) => println!("criterion {n} PASS {what}: {msg}"),
            Err(msg) => {
                failed += 1;
                println!("criterion {n} FAIL {what}: {msg}")
            }
        }
    };
    report(1, "19a3 headline densities", criterion1());
    let (c2, c3) = criteria2_3();
    report(2, "sweep average against prediction", c2);
    report(3, "Cassels identity on every swept twist", c3);
    report(4, "syzygy on random forms", criterion4());
    report(5, "Tate algorithm against reference tables", criterion5());
    report(6, "Kodaira twist law", criterion6());
    report(7, "local ratio structure", criterion7());
    report(8, "E_k family", criterion8());
    report(9, "form enumeration against box oracle", criterion9());
    if failed > 0 {
        println!("{failed} of 9 criteria failed");
        // the report is the result; a non-zero exit would stop later test targets
        if std::env::var_os("SELMER3_ACCEPT_STRICT").is_some() {
            std::process::exit(1);
        }
        return;
    }
    println!("all criteria passed");
}
