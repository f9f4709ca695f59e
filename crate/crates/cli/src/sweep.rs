//! `VAR:MIN:MAX:COUNT:{lin|log}` grids over one model parameter.

use crate::error::{CliError, CliResult};
use kerrmetro::ModelParams;
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVar {
    N,
    Gamma,
    /// Both damping rates together.
    Damping,
    T,
}

impl SweepVar {
    pub fn label(self) -> &'static str {
        match self {
            SweepVar::N => "n",
            SweepVar::Gamma => "gamma",
            SweepVar::Damping => "Gamma",
            SweepVar::T => "t",
        }
    }

    pub fn apply(self, mp: &ModelParams, value: f64) -> ModelParams {
        let mut out = *mp;
        match self {
            SweepVar::N => out.n = value,
            SweepVar::Gamma => out.gamma = value,
            SweepVar::Damping => {
                out.damping_a = value;
                out.damping_b = value;
            }
            SweepVar::T => out.t = value,
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Lin,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    pub var: SweepVar,
    pub min: f64,
    pub max: f64,
    pub count: usize,
    pub spacing: Spacing,
}

impl SweepSpec {
    pub fn new(var: SweepVar, min: f64, max: f64, count: usize, spacing: Spacing) -> CliResult<Self> {
        if count < 2 {
            return Err(CliError::usage(format!("sweep count must be >= 2, got {count}")));
        }
        if !(min.is_finite() && max.is_finite() && min < max) {
            return Err(CliError::usage(format!("sweep needs min < max, got {min}..{max}")));
        }
        if spacing == Spacing::Log && min <= 0.0 {
            return Err(CliError::usage("log sweep needs min > 0"));
        }
        Ok(SweepSpec {
            var,
            min,
            max,
            count,
            spacing,
        })
    }

    /// Grid values, with both end points hit exactly.
    pub fn values(&self) -> Vec<f64> {
        let last = (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                if i == 0 {
                    return self.min;
                }
                if i == self.count - 1 {
                    return self.max;
                }
                let f = i as f64 / last;
                match self.spacing {
                    Spacing::Lin => self.min + f * (self.max - self.min),
                    Spacing::Log => (self.min.ln() + f * (self.max.ln() - self.min.ln())).exp(),
                }
            })
            .collect()
    }
}

impl fmt::Display for SweepSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let spacing = match self.spacing {
            Spacing::Lin => "lin",
            Spacing::Log => "log",
        };
        write!(
            f,
            "{}:{:e}:{:e}:{}:{spacing}",
            self.var.label(),
            self.min,
            self.max,
            self.count
        )
    }
}

impl FromStr for SweepSpec {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 5 {
            return Err(CliError::usage(format!(
                "sweep `{s}`: expected VAR:MIN:MAX:COUNT:{{lin|log}}"
            )));
        }
        let var = match parts[0] {
            "n" => SweepVar::N,
            "gamma" => SweepVar::Gamma,
            "Gamma" => SweepVar::Damping,
            "t" => SweepVar::T,
            other => {
                return Err(CliError::usage(format!(
                    "sweep variable `{other}` is not one of n, gamma, Gamma, t"
                )))
            }
        };
        let num = |x: &str| {
            x.parse::<f64>()
                .map_err(|_| CliError::usage(format!("sweep `{s}`: `{x}` is not a number")))
        };
        let count = parts[3]
            .parse::<usize>()
            .map_err(|_| CliError::usage(format!("sweep `{s}`: bad count `{}`", parts[3])))?;
        let spacing = match parts[4] {
            "lin" => Spacing::Lin,
            "log" => Spacing::Log,
            other => return Err(CliError::usage(format!("sweep spacing `{other}` is not lin or log"))),
        };
        SweepSpec::new(var, num(parts[1])?, num(parts[2])?, count, spacing)
    }
}
