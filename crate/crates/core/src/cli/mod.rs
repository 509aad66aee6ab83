// SPDX-License-Identifier: Apache-2.0
//! Command-line front end. [`run`] parses arguments, executes one subcommand
//! and returns the process exit code.
//!
//! Exit codes: 0 success, 1 usage or configuration error, 2 no rational
//! 3-isogeny, 3 Cassels inconsistency, 4 resource bound exceeded.

pub mod config;

use crate::arith::Squareclass;
use crate::cubic::EnumError;
use crate::curves::{global_reduction, CurveError, ThreeIsogenyModel};
use crate::descent::{DescentConfig, DescentContext, DescentError, SweepConfig, SweepError};
use crate::globalsel::{classify_twists, density_report, DensityReport, GlobalError};
use crate::localsel::{local_ratio_table, support, LocalConfig, LocalError};
use clap::{Args, Parser, Subcommand};
use config::{model_from_input, parse_case_b, parse_sigma_json, restriction, FileConfig, RunConfig, DEFAULT_X_CAP};
use serde::Serialize;
use serde_json::json;
use std::io::Write;
use std::path::PathBuf;
use thiserror::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NO_ISOGENY: i32 = 2;
pub const EXIT_INCONSISTENT: i32 = 3;
pub const EXIT_RESOURCE: i32 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Local(#[from] LocalError),
    #[error(transparent)]
    Global(#[from] GlobalError),
    #[error(transparent)]
    Descent(#[from] DescentError),
    #[error(transparent)]
    Sweep(#[from] SweepError),
    #[error("height bound {x} exceeds the cap {cap}")]
    HeightCap { x: u64, cap: u64 },
    #[error("Cassels identity fails for s in {0:?}")]
    Inconsistent(Vec<i64>),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        let too_large = |e: &DescentError| matches!(e, DescentError::Enum(EnumError::TooLarge { .. }));
        match self {
            CliError::Curve(CurveError::NoRationalThreeIsogeny) => EXIT_NO_ISOGENY,
            CliError::Inconsistent(_) => EXIT_INCONSISTENT,
            CliError::HeightCap { .. } => EXIT_RESOURCE,
            CliError::Descent(e) | CliError::Sweep(SweepError::Descent(e)) if too_large(e) => EXIT_RESOURCE,
            _ => EXIT_USAGE,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "selmer3", version, about = "3-isogeny Selmer groups of quadratic twists over Q")]
pub struct Cli {
    #[command(flatten)]
    pub input: Input,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Input {
    /// a-invariants "a1,a2,a3,a4,a6" (or "a4,a6").
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub curve: Option<String>,
    /// Model "(D,a,b)" for y^2 = x^3 + D(ax+b)^2.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub model: Option<String>,
    /// Kernel index when the curve has two rational 3-isogenies.
    #[arg(long, global = true)]
    pub kernel: Option<usize>,
    /// TOML key-value config file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Refuse sweeps with X above this [default: 1000000].
    #[arg(long, global = true, env = "SELMER3_X_CAP")]
    pub x_cap: Option<u64>,
    /// Largest |Disc| of forms enumerated during descent.
    #[arg(long, global = true, env = "SELMER3_DISC_BOUND")]
    pub disc_bound: Option<u64>,
    /// Initial N for the covering curves [default: rad(2·conductor)].
    #[arg(long, global = true)]
    pub twisting_factor: Option<u64>,
    /// How often N may be enlarged when Cassels' formula fails.
    #[arg(long, global = true, env = "SELMER3_MAX_ESCALATIONS")]
    pub max_escalations: Option<u32>,
    /// Case (b) reading at additive primes: full or kernel.
    #[arg(long, global = true)]
    pub case_b: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Model, reduction data and local ratio table.
    Analyze,
    /// Local ratios c_v for every support place and class.
    LocalRatios,
    /// Densities of T_m and the averages they determine.
    ClassifyTwists {
        /// Emit JSON instead of a table.
        #[arg(long)]
        json: bool,
    },
    /// Exact density report, optionally restricted.
    Density {
        /// Restriction as JSON, e.g. '{"3": [1, -1], "inf": [-1]}'.
        #[arg(long)]
        sigma: Option<String>,
    },
    /// Selmer group sizes for one twist.
    SelmerCount {
        /// Squarefree twist parameter.
        #[arg(long, allow_hyphen_values = true)]
        s: i64,
        /// Test local solubility at every prime, including those dividing s.
        #[arg(long)]
        audit: bool,
    },
    /// Average |Sel_phi(E_s)| over squarefree |s| <= X.
    Sweep {
        /// Height bound on |s|.
        #[arg(long = "X", short = 'X', env = "SELMER3_X")]
        x: Option<u64>,
        /// Restrict to twists with these local classes, as JSON.
        #[arg(long)]
        sigma: Option<String>,
        /// Test local solubility at every prime, including those dividing s.
        #[arg(long)]
        audit: bool,
        /// JSONL cache, read and appended.
        #[arg(long)]
        cache: Option<PathBuf>,
        /// CSV convergence export; stdout when absent.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Number of rows in the convergence series [default: 100].
        #[arg(long)]
        checkpoints: Option<u64>,
    },
}

impl Cli {
    /// Merges the config file, environment and flags; flags win.
    pub fn run_config(&self) -> Result<RunConfig, CliError> {
        let file = match &self.input.config {
            Some(p) => FileConfig::load(p)?,
            None => FileConfig::default(),
        };
        let i = &self.input;
        let (curve, model) = match (&i.curve, &i.model) {
            (None, None) => (file.curve.clone(), file.model.clone()),
            _ => (i.curve.clone(), i.model.clone()),
        };
        let (model, curve) = model_from_input(curve.as_deref(), model.as_deref(), i.kernel.or(file.kernel).unwrap_or(0))?;
        let (mut x, mut sigma, mut audit, mut cache, mut csv, mut checkpoints) =
            (file.x, file.sigma.clone(), file.audit.unwrap_or(false), file.cache.clone(), file.csv.clone(), file.checkpoints);
        match &self.command {
            Command::Sweep {
                x: fx,
                sigma: fs,
                audit: fa,
                cache: fc,
                csv: fv,
                checkpoints: fk,
            } => {
                x = fx.or(x);
                if let Some(s) = fs {
                    sigma = Some(parse_sigma_json(s)?);
                }
                audit |= fa;
                cache = fc.clone().or(cache);
                csv = fv.clone().or(csv);
                checkpoints = fk.or(checkpoints);
            }
            Command::Density { sigma: Some(s) } => sigma = Some(parse_sigma_json(s)?),
            Command::SelmerCount { audit: fa, .. } => audit |= fa,
            _ => {}
        }
        let sigma = sigma.map(|raw| restriction(&model, &raw)).transpose()?;
        let case_b = match i.case_b.as_ref().or(file.case_b.as_ref()) {
            Some(s) => parse_case_b(s)?,
            None => Default::default(),
        };
        let defaults = DescentConfig::default();
        let cfg = RunConfig {
            model,
            curve,
            x,
            x_cap: i.x_cap.or(file.x_cap).unwrap_or(DEFAULT_X_CAP),
            sigma,
            disc_bound: i.disc_bound.or(file.disc_bound).unwrap_or(defaults.disc_bound),
            twisting_factor: i.twisting_factor.or(file.twisting_factor),
            max_escalations: i.max_escalations.or(file.max_escalations).unwrap_or(defaults.max_escalations),
            audit,
            case_b,
            cache,
            csv,
            checkpoints: checkpoints.unwrap_or(100),
        };
        if let Some(x) = cfg.x {
            if x > cfg.x_cap {
                return Err(CliError::HeightCap { x, cap: cfg.x_cap });
            }
        }
        Ok(cfg)
    }
}

impl RunConfig {
    pub fn local(&self) -> LocalConfig {
        LocalConfig { case_b: self.case_b }
    }

    pub fn descent(&self) -> DescentConfig {
        DescentConfig {
            local: self.local(),
            twisting_factor: self.twisting_factor,
            max_escalations: self.max_escalations,
            audit: self.audit,
            disc_bound: self.disc_bound,
        }
    }
}

#[derive(Debug, Serialize)]
struct LocalRatioRow {
    place: String,
    class_rep: i64,
    exponent: i64,
}

fn reduction_rows(m: &ThreeIsogenyModel) -> (String, Vec<serde_json::Value>) {
    let (cond, data) = global_reduction(&m.curve());
    let rows = data
        .iter()
        .map(|l| {
            json!({
                "p": l.p,
                "kodaira": l.kodaira.to_string(),
                "tamagawa": l.tamagawa,
                "conductor_exponent": l.conductor_exp,
                "v_delta_min": l.v_delta_min,
            })
        })
        .collect();
    (cond.to_string(), rows)
}

pub fn cmd_analyze(cfg: &RunConfig) -> Result<serde_json::Value, CliError> {
    let m = &cfg.model;
    let (conductor, reduction) = reduction_rows(m);
    let (_, reduction_dual) = reduction_rows(&m.dual());
    let table = local_ratio_table(m, &cfg.local())?;
    Ok(json!({
        "model": m,
        "curve": m.curve().to_string(),
        "D": m.d().to_string(),
        "Dhat": m.dhat().to_string(),
        "dual": m.dual(),
        "j": m.curve().j().to_string(),
        "conductor": conductor,
        "reduction": reduction,
        "reduction_dual": reduction_dual,
        "support": support(m).iter().map(|p| p.to_string()).collect::<Vec<_>>(),
        "local_ratios": local_ratio_rows(cfg)?,
        "tuples": classify_twists(m, &cfg.local())?.tuples.len(),
        "support_classes": table.entries.values().map(Vec::len).sum::<usize>(),
    }))
}

fn local_ratio_rows(cfg: &RunConfig) -> Result<Vec<LocalRatioRow>, CliError> {
    let table = local_ratio_table(&cfg.model, &cfg.local())?;
    Ok(table
        .entries
        .iter()
        .flat_map(|(place, row)| {
            row.iter().map(move |&(rep, c)| LocalRatioRow {
                place: place.to_string(),
                class_rep: rep,
                exponent: c.exponent(),
            })
        })
        .collect())
}

pub fn cmd_local_ratios(cfg: &RunConfig) -> Result<serde_json::Value, CliError> {
    Ok(serde_json::to_value(local_ratio_rows(cfg)?).expect("plain rows"))
}

pub fn cmd_density(cfg: &RunConfig) -> Result<DensityReport, CliError> {
    let tc = classify_twists(&cfg.model, &cfg.local())?;
    Ok(density_report(&tc, cfg.sigma.as_ref())?)
}

/// Human-readable rendering of a density report.
pub fn classify_table(r: &DensityReport) -> String {
    let mut out = format!("model {}\nsupport {}\n\n", r.model, r.support.join(" "));
    out.push_str(&format!("{:<6}{}\n", "|t|", "mu(T_m)"));
    for (k, v) in &r.densities_unsigned {
        out.push_str(&format!("{k:<6}{v}\n"));
    }
    out.push_str(&format!("\n{:<6}{}\n", "t", "mu"));
    for (k, v) in &r.densities {
        out.push_str(&format!("{k:<6}{v}\n"));
    }
    out.push('\n');
    for (label, v) in [
        ("average |Sel_phi|", &r.avg_selmer),
        ("average rank bound", &r.avg_rank_bound),
        ("rank 0 proportion", &r.proportions[0]),
        ("Selmer rank 1 proportion", &r.proportions[1]),
    ] {
        out.push_str(&format!("{label:<26}{v}\n"));
    }
    out
}

pub fn cmd_selmer_count(cfg: &RunConfig, s: i64) -> Result<serde_json::Value, CliError> {
    let sc = Squareclass::new(s).map_err(|e| CliError::Config(e.to_string()))?;
    let ctx = DescentContext::new(cfg.model.clone(), cfg.descent());
    let r = ctx.selmer_size(sc)?;
    if !r.cassels_consistent {
        eprintln!("{}", serde_json::to_string_pretty(&r).expect("plain report"));
        return Err(CliError::Inconsistent(vec![s]));
    }
    Ok(serde_json::to_value(&r).expect("plain report"))
}

pub fn cmd_sweep(cfg: &RunConfig) -> Result<(serde_json::Value, String), CliError> {
    let x = cfg.x.ok_or_else(|| CliError::Config("sweep needs --X".into()))?;
    let sc = SweepConfig {
        x,
        restriction: cfg.sigma.clone(),
        cache: cfg.cache.clone(),
        descent: cfg.descent(),
        checkpoints: cfg.checkpoints,
        chunk: 256,
    };
    let r = crate::descent::sweep(&cfg.model, &sc)?;
    let csv = r.to_csv();
    if let Some(p) = &cfg.csv {
        std::fs::write(p, &csv)?;
    }
    let strata: Vec<_> = r
        .strata
        .iter()
        .map(|s| {
            json!({
                "classes": s.classes,
                "t": s.t,
                "count": s.count,
                "average": s.average.to_string(),
                "prediction": s.prediction.to_string(),
            })
        })
        .collect();
    let summary = json!({
        "model": r.model,
        "X": r.x,
        "count": r.count,
        "computed": r.computed,
        "average": r.average.to_string(),
        "prediction": r.prediction.to_string(),
        "consistent": r.consistent,
        "strata": strata,
    });
    if !r.all_consistent() {
        eprintln!("{}", serde_json::to_string_pretty(&summary).expect("plain summary"));
        return Err(CliError::Inconsistent(r.inconsistent));
    }
    Ok((summary, csv))
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<(), CliError> {
    let cfg = cli.run_config()?;
    let pretty = |v: &serde_json::Value| serde_json::to_string_pretty(v).expect("json value");
    match &cli.command {
        Command::Analyze => writeln!(out, "{}", pretty(&cmd_analyze(&cfg)?))?,
        Command::LocalRatios => writeln!(out, "{}", pretty(&cmd_local_ratios(&cfg)?))?,
        Command::ClassifyTwists { json } => {
            let r = cmd_density(&cfg)?;
            if *json {
                writeln!(out, "{}", serde_json::to_string_pretty(&r).expect("plain report"))?;
            } else {
                write!(out, "{}", classify_table(&r))?;
            }
        }
        Command::Density { .. } => {
            writeln!(out, "{}", serde_json::to_string_pretty(&cmd_density(&cfg)?).expect("plain report"))?
        }
        Command::SelmerCount { s, .. } => writeln!(out, "{}", pretty(&cmd_selmer_count(&cfg, *s)?))?,
        Command::Sweep { .. } => {
            let (summary, csv) = cmd_sweep(&cfg)?;
            if cfg.csv.is_none() {
                write!(out, "{csv}")?;
            }
            eprintln!("{}", pretty(&summary));
        }
    }
    Ok(())
}

/// Runs the command line `args` (including the program name), writing
/// results to `out` and errors to stderr.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
