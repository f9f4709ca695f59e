mod figdata;
mod oracle_check;
mod params;
mod tables;

pub use figdata::figdata;
pub use oracle_check::oracle_check;
pub use params::params;
pub use tables::{moments, precision};

use crate::error::{CliError, CliResult};
use crate::sweep::SweepSpec;
use crate::RegimeArg;
use kerrmetro::estimation::FiniteDifference;
use kerrmetro::{
    classify_regime, precision_at, precision_no_damping, precision_strong_damping, Config,
    ModelParams, PrecisionPoint, Quadrature, Regime, RegimeThresholds,
};
use rayon::prelude::*;
use std::path::{Path, PathBuf};

pub struct Context {
    pub config: Config,
    pub base: ModelParams,
    pub omega: f64,
    pub warnings: Vec<String>,
    pub out: Option<PathBuf>,
    pub sweep: Option<SweepSpec>,
    /// `None` when `--quad` was not given.
    pub quads: Option<Vec<Quadrature>>,
    pub regime: Option<RegimeArg>,
    pub fit: bool,
}

impl Context {
    pub fn new(
        config: Option<&Path>,
        set: &[String],
        out: Option<PathBuf>,
        sweep: Option<SweepSpec>,
        quad: Option<&str>,
        regime: Option<RegimeArg>,
        fit: bool,
    ) -> CliResult<Self> {
        let mut cfg = match config {
            Some(p) => Config::load(p)?,
            None => Config::fiducial(),
        };
        for item in set {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| CliError::usage(format!("--set `{item}`: expected KEY=VALUE")))?;
            let v: f64 = v
                .trim()
                .parse()
                .map_err(|_| CliError::usage(format!("--set `{item}`: not a number")))?;
            cfg = cfg.with_entry(k.trim(), v)?;
        }
        let derived = cfg.derive()?;
        let quads = quad.map(parse_quads).transpose()?;
        Ok(Context {
            omega: cfg.device.omega,
            base: derived.params,
            warnings: derived.warnings,
            config: cfg,
            out,
            sweep,
            quads,
            regime,
            fit,
        })
    }

    pub fn quads_or(&self, default: &[Quadrature]) -> Vec<Quadrature> {
        self.quads.clone().unwrap_or_else(|| default.to_vec())
    }

    /// Provenance lines for CSV headers.
    pub fn provenance(&self) -> String {
        let mut s = format!("config: {}", self.config.summary());
        if let Some(sw) = &self.sweep {
            s.push_str(&format!("\nsweep: {sw}"));
        }
        if let Some(q) = &self.quads {
            let labels: Vec<&str> = q.iter().map(|q| q.label()).collect();
            s.push_str(&format!("\nquad: {}", labels.join(" ")));
        }
        if let Some(r) = self.regime {
            s.push_str(&format!("\nregime: {r:?}"));
        }
        s
    }

    /// Parameter points of the sweep, or the single configured point.
    pub fn points(&self) -> Vec<ModelParams> {
        match &self.sweep {
            Some(sw) => sw.values().into_iter().map(|v| sw.var.apply(&self.base, v)).collect(),
            None => vec![self.base],
        }
    }

    pub fn emit_warnings(&self) {
        for w in &self.warnings {
            eprintln!("warning: {w}");
        }
    }
}

fn parse_quads(s: &str) -> CliResult<Vec<Quadrature>> {
    if s == "all" {
        return Ok(Quadrature::ALL.to_vec());
    }
    s.split(',')
        .map(|q| {
            q.trim()
                .parse::<Quadrature>()
                .map_err(|_| CliError::usage(format!("--quad `{q}`: expected x+, x-, y+, y- or all")))
        })
        .collect()
}

fn undamped(mp: &ModelParams) -> bool {
    mp.damping_a == 0.0 && mp.damping_b == 0.0
}

/// Formula family for means and variances under `--regime auto`: the exact
/// undamped form without damping, the strong-damping form when its
/// conditions hold, the general path otherwise.
pub fn moments_regime(mp: &ModelParams, omega: f64, choice: RegimeArg) -> Regime {
    match choice {
        RegimeArg::General => Regime::General,
        RegimeArg::NoDamping => Regime::NoDamping,
        RegimeArg::StrongDamping => Regime::StrongDamping,
        RegimeArg::ShortTime => Regime::ShortTime,
        RegimeArg::Auto => {
            if undamped(mp) {
                Regime::NoDamping
            } else if classify_regime(mp, omega, &RegimeThresholds::default())
                .strong_damping
                .valid
            {
                Regime::StrongDamping
            } else {
                Regime::General
            }
        }
    }
}

/// Formula family for precision under `--regime auto`. The closed forms
/// assume β = 0.
pub fn precision_regime(mp: &ModelParams, omega: f64, choice: RegimeArg) -> Regime {
    match choice {
        RegimeArg::Auto => {
            let report = classify_regime(mp, omega, &RegimeThresholds::default());
            if mp.beta != 0.0 {
                Regime::General
            } else if report.strong_damping.valid {
                Regime::StrongDamping
            } else if undamped(mp) && report.short_time.valid {
                Regime::NoDamping
            } else {
                Regime::General
            }
        }
        other => moments_regime(mp, omega, other),
    }
}

pub fn precision_point(q: Quadrature, mp: &ModelParams, regime: Regime) -> CliResult<PrecisionPoint> {
    let p = match regime {
        Regime::NoDamping => precision_no_damping(q, mp.n, mp.gamma_t())?,
        Regime::StrongDamping => precision_strong_damping(q, mp.n, mp.gamma, mp.damping_a, mp.t)?,
        Regime::General | Regime::ShortTime => {
            precision_at(q, mp, regime, &FiniteDifference::default())?
        }
    };
    Ok(p)
}

/// Order-preserving parallel map with the first error surfaced.
pub fn par_map<T, U, F>(items: &[T], f: F) -> CliResult<Vec<U>>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> CliResult<U> + Sync + Send,
{
    items.par_iter().map(f).collect()
}

pub fn quad_labels(q: &[Quadrature]) -> String {
    q.iter().map(|q| q.label()).collect::<Vec<_>>().join(" ")
}
