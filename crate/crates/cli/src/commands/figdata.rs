use super::tables::{fits, param_fields, precision_fields, precision_table, FIT_HEADER, PRECISION_HEADER};
use super::{moments_regime, par_map, precision_regime, quad_labels, Context};
use crate::error::{CliError, CliResult};
use crate::output::{num, Csv};
use crate::sweep::{Spacing, SweepSpec, SweepVar};
use crate::RegimeArg;
use kerrmetro::{locate_fringe_boundaries, stats_for, ModelParams, Quadrature, Regime};
use std::f64::consts::TAU;

/// Damping values for the γ × Γ maps: 0 to 10⁴ s⁻¹ in 11 steps.
const MAP_DAMPING_MAX: f64 = 1e4;
const MAP_DAMPING_COUNT: usize = 11;
const FIG4_DAMPING: [f64; 2] = [0.0, 4700.0];
const FIG5_DAMPING: [f64; 3] = [0.0, 1000.0, 4700.0];
const FRINGE_SAMPLES: usize = 256;

fn damping_grid() -> Vec<f64> {
    (0..MAP_DAMPING_COUNT)
        .map(|i| MAP_DAMPING_MAX * i as f64 / (MAP_DAMPING_COUNT - 1) as f64)
        .collect()
}

/// The γ axis: `--sweep gamma:...` if given, else nγt over [0, 2π].
fn gamma_axis(ctx: &Context, count: usize) -> CliResult<SweepSpec> {
    match ctx.sweep {
        Some(s) if s.var == SweepVar::Gamma => Ok(s),
        Some(s) => Err(CliError::usage(format!(
            "this figure sweeps gamma; got a sweep over {}",
            s.var.label()
        ))),
        None => {
            let nt = ctx.base.n * ctx.base.t;
            if nt <= 0.0 {
                return Err(CliError::usage("figure needs n > 0 and t > 0"));
            }
            SweepSpec::new(SweepVar::Gamma, 0.0, TAU / nt, count, Spacing::Lin)
        }
    }
}

fn with_damping(mp: &ModelParams, damping: f64) -> ModelParams {
    ModelParams {
        damping_a: damping,
        damping_b: damping,
        ..*mp
    }
}

pub fn figdata(ctx: &Context, figure: &str) -> CliResult<()> {
    match figure {
        "2" | "3" => map(ctx, figure == "2"),
        "4" => precision_vs_gamma(ctx),
        "5" => precision_vs_n(ctx),
        other => Err(CliError::usage(format!("unknown figure `{other}` (expected 2, 3, 4 or 5)"))),
    }
}

/// Means (figure 2) or variances (figure 3) over nγt × Γ.
fn map(ctx: &Context, means: bool) -> CliResult<()> {
    ctx.emit_warnings();
    let quads = ctx.quads_or(&[Quadrature::XPlus, Quadrature::YPlus]);
    let choice = ctx.regime.unwrap_or(RegimeArg::General);
    let axis = gamma_axis(ctx, 201)?;
    let mut points = Vec::new();
    for damping in damping_grid() {
        for gamma in axis.values() {
            points.push(ModelParams {
                gamma,
                ..with_damping(&ctx.base, damping)
            });
        }
    }
    let rows = par_map(&points, |mp| {
        let regime = moments_regime(mp, ctx.omega, choice);
        let stats = stats_for(mp, regime)?;
        Ok(quads
            .iter()
            .map(|&q| {
                let mut r = param_fields(mp);
                r.push(num(mp.phase_shift()));
                r.push(q.label().to_string());
                if means {
                    r.push(num(stats.mean(q)));
                    r.push(num(stats.mean(q).abs()));
                } else {
                    r.push(num(stats.variance(q)));
                }
                r.push(regime.label().to_string());
                r
            })
            .collect::<Vec<_>>())
    })?;
    let (name, values): (&str, &[&str]) = if means {
        ("figure 2: output quadrature means over n gamma t and Gamma", &["mean", "abs_mean"])
    } else {
        ("figure 3: output quadrature variances over n gamma t and Gamma", &["variance"])
    };
    let mut csv = Csv::new("figdata", &ctx.provenance());
    csv.comment(name);
    let mut header = vec!["n", "gamma", "beta", "Gamma_a", "Gamma_b", "t", "phase", "quad"];
    header.extend_from_slice(values);
    header.push("regime");
    csv.row(&header);
    for r in rows.iter().flatten() {
        csv.row(r);
    }
    csv.emit(ctx.out.as_deref())?;
    Ok(())
}

/// The closed-form undamped precision is built on the short-time means, so
/// that is the mean model its fringe boundaries belong to.
fn fringe_regime(precision: Regime) -> Regime {
    match precision {
        Regime::NoDamping => Regime::ShortTime,
        other => other,
    }
}

fn precision_vs_gamma(ctx: &Context) -> CliResult<()> {
    ctx.emit_warnings();
    let quads = ctx.quads_or(&[Quadrature::XPlus, Quadrature::YPlus]);
    let choice = ctx.regime.unwrap_or(RegimeArg::Auto);
    let axis = gamma_axis(ctx, 401)?;
    let mut csv = Csv::new("figdata", &ctx.provenance());
    csv.comment(&format!(
        "figure 4: precision vs n gamma t for {} at Gamma in {{0, 4700}}",
        quad_labels(&quads)
    ));
    let mut header = PRECISION_HEADER.to_vec();
    header.insert(8, "phase");
    csv.row(&header);
    let mut fringes = Vec::new();
    for damping in FIG4_DAMPING {
        let base = with_damping(&ctx.base, damping);
        let points: Vec<ModelParams> = axis.values().into_iter().map(|g| axis.var.apply(&base, g)).collect();
        let table = precision_table(ctx, &points, &quads, choice)?;
        for (mp, p) in table.iter().flatten() {
            let mut r = precision_fields(mp, p);
            r.insert(8, num(mp.phase_shift()));
            csv.row(&r);
        }
        // one mean model per series, judged at the far end of the axis
        let far = points.last().copied().unwrap_or(base);
        let regime = fringe_regime(precision_regime(&far, ctx.omega, choice));
        let nt = base.n * base.t;
        let range = (axis.min * nt, axis.max * nt);
        for &q in &quads {
            for (i, b) in locate_fringe_boundaries(q, &base, range, regime, FRINGE_SAMPLES)?
                .into_iter()
                .enumerate()
            {
                fringes.push(vec![
                    num(damping),
                    q.label().to_string(),
                    i.to_string(),
                    num(b.gamma),
                    num(b.phase),
                    regime.label().to_string(),
                ]);
            }
        }
    }
    csv.comment("fringe boundaries: zeros of d<Z>/d(gamma t)");
    csv.row(&["Gamma", "quad", "index", "gamma", "phase", "regime"]);
    for r in fringes {
        csv.row(&r);
    }
    csv.emit(ctx.out.as_deref())?;
    Ok(())
}

fn precision_vs_n(ctx: &Context) -> CliResult<()> {
    ctx.emit_warnings();
    let quads = ctx.quads_or(&[Quadrature::XPlus, Quadrature::YPlus]);
    let choice = ctx.regime.unwrap_or(RegimeArg::Auto);
    let axis = match ctx.sweep {
        Some(s) if s.var == SweepVar::N => s,
        Some(s) => {
            return Err(CliError::usage(format!(
                "figure 5 sweeps n; got a sweep over {}",
                s.var.label()
            )))
        }
        None => SweepSpec::new(SweepVar::N, 1e5, 1e7, 41, Spacing::Log)?,
    };
    let mut csv = Csv::new("figdata", &ctx.provenance());
    csv.comment(&format!(
        "figure 5: precision vs n for {} at Gamma in {{0, 1000, 4700}}",
        quad_labels(&quads)
    ));
    csv.row(&PRECISION_HEADER);
    let mut fit_rows = Vec::new();
    for damping in FIG5_DAMPING {
        let base = with_damping(&ctx.base, damping);
        let points: Vec<ModelParams> = axis.values().into_iter().map(|n| axis.var.apply(&base, n)).collect();
        let table = precision_table(ctx, &points, &quads, choice)?;
        for (mp, p) in table.iter().flatten() {
            csv.row(&precision_fields(mp, p));
        }
        for mut r in fits(&table, &quads)? {
            r.insert(0, num(damping));
            fit_rows.push(r);
        }
    }
    csv.comment("scaling fits: ln delta = intercept + slope ln n");
    let mut header = vec!["Gamma"];
    header.extend_from_slice(&FIT_HEADER);
    csv.row(&header);
    for r in fit_rows {
        csv.row(&r);
    }
    csv.emit(ctx.out.as_deref())?;
    Ok(())
}
