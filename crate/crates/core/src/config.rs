//! Line-oriented `key = value` parameter files.
//!
//! ```text
//! # device (SI units)
//! length = 2e-6
//! width = 40e-9
//! mass = 1e-17
//! omega = 9.4e7
//! gap = 120e-9
//! geometry_factor = 1        # optional, default 1
//! c0 = 10e-18
//! v0 = 1
//! q_factor = 20000
//! chi_a = 4e13               # and/or critical_amplitude_a
//! critical_amplitude_a = 0.7e-9
//! chi_b = 0                  # and/or critical_amplitude_b
//! # operating point
//! n = 1e7
//! t = 1e-3
//! # optional overrides of derived rates (s^-1)
//! gamma = 1e-4
//! beta = 0
//! Gamma_a = 4700
//! Gamma_b = 4700
//! ```
//!
//! Keys are case-sensitive (`gamma` is the Kerr rate, `Gamma_a` a damping
//! rate). Unknown or repeated keys are rejected.

use crate::error::{Error, Result};
use crate::model::{derive_model_params, Derived, Nonlinearity, PhysicalParams};
use std::collections::BTreeMap;
use std::path::Path;

pub const KEYS: &[&str] = &[
    "length",
    "width",
    "mass",
    "omega",
    "gap",
    "geometry_factor",
    "c0",
    "v0",
    "q_factor",
    "chi_a",
    "critical_amplitude_a",
    "chi_b",
    "critical_amplitude_b",
    "n",
    "t",
    "gamma",
    "beta",
    "Gamma_a",
    "Gamma_b",
];

/// Overrides of the derived reduced rates.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Overrides {
    pub gamma: Option<f64>,
    pub beta: Option<f64>,
    pub damping_a: Option<f64>,
    pub damping_b: Option<f64>,
}

/// A parsed parameter file.
#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub device: PhysicalParams,
    pub n: f64,
    pub t: f64,
    pub overrides: Overrides,
    /// Raw key/value pairs in key order, for provenance lines.
    pub entries: BTreeMap<String, f64>,
}

impl Config {
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!("line {}: expected `key = value`", lineno + 1))
            })?;
            let key = key.trim();
            if !KEYS.contains(&key) {
                return Err(Error::Config(format!(
                    "line {}: unknown key `{key}`",
                    lineno + 1
                )));
            }
            let value: f64 = value.trim().parse().map_err(|_| {
                Error::Config(format!(
                    "line {}: `{}` is not a number",
                    lineno + 1,
                    value.trim()
                ))
            })?;
            if entries.insert(key.to_string(), value).is_some() {
                return Err(Error::Config(format!(
                    "line {}: duplicate key `{key}`",
                    lineno + 1
                )));
            }
        }
        Self::from_entries(entries)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    fn from_entries(entries: BTreeMap<String, f64>) -> Result<Self> {
        let req = |k: &str| {
            entries
                .get(k)
                .copied()
                .ok_or_else(|| Error::MissingKey(k.to_string()))
        };
        let opt = |k: &str| entries.get(k).copied();
        let nonlinearity = |suffix: &str| -> Result<Nonlinearity> {
            let nl = Nonlinearity {
                chi: opt(&format!("chi_{suffix}")),
                critical_amplitude: opt(&format!("critical_amplitude_{suffix}")),
            };
            if nl.chi.is_none() && nl.critical_amplitude.is_none() {
                return Err(Error::MissingKey(format!(
                    "chi_{suffix} or critical_amplitude_{suffix}"
                )));
            }
            Ok(nl)
        };
        let device = PhysicalParams {
            length: req("length")?,
            width: req("width")?,
            mass: req("mass")?,
            omega: req("omega")?,
            gap: req("gap")?,
            geometry_factor: opt("geometry_factor").unwrap_or(1.0),
            c0: req("c0")?,
            v0: req("v0")?,
            q_factor: req("q_factor")?,
            resonator_a: nonlinearity("a")?,
            resonator_b: nonlinearity("b")?,
        };
        device.validate()?;
        Ok(Config {
            device,
            n: req("n")?,
            t: req("t")?,
            overrides: Overrides {
                gamma: opt("gamma"),
                beta: opt("beta"),
                damping_a: opt("Gamma_a"),
                damping_b: opt("Gamma_b"),
            },
            entries,
        })
    }

    /// Copy with one key added or replaced, revalidated as a whole.
    pub fn with_entry(&self, key: &str, value: f64) -> Result<Self> {
        if !KEYS.contains(&key) {
            return Err(Error::Config(format!("unknown key `{key}`")));
        }
        if !value.is_finite() {
            return Err(Error::Config(format!("`{key}` must be finite")));
        }
        let mut entries = self.entries.clone();
        entries.insert(key.to_string(), value);
        Self::from_entries(entries)
    }

    /// Derived reduced model with overrides applied.
    pub fn derive(&self) -> Result<Derived> {
        let mut d = derive_model_params(&self.device, self.n, self.t)?;
        let o = &self.overrides;
        let p = &mut d.params;
        p.gamma = o.gamma.unwrap_or(p.gamma);
        p.beta = o.beta.unwrap_or(p.beta);
        p.damping_a = o.damping_a.unwrap_or(p.damping_a);
        p.damping_b = o.damping_b.unwrap_or(p.damping_b);
        p.validate()?;
        Ok(d)
    }

    /// The reference device at the fiducial operating point n = 10⁷,
    /// t = 1 ms, with the typical Kerr rate γ = 10⁻⁴ s⁻¹ and β = 0.
    pub fn fiducial() -> Self {
        let text = "\
length = 2e-6
width = 40e-9
mass = 1e-17
omega = 9.4e7
gap = 120e-9
c0 = 10e-18
v0 = 1
q_factor = 20000
chi_a = 4e13
chi_b = 0
n = 1e7
t = 1e-3
gamma = 1e-4
beta = 0
";
        Self::parse(text).expect("built-in fiducial config parses")
    }

    /// Single-line `key=value` rendering for CSV provenance comments.
    pub fn summary(&self) -> String {
        self.entries
            .iter()
            .map(|(k, v)| format!("{k}={v:e}"))
            .collect::<Vec<_>>()
            .join(" ")
    }
}
