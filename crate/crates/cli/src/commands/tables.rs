use super::{par_map, precision_point, precision_regime, moments_regime, Context};
use crate::error::{CliError, CliResult, EXIT_FIT};
use crate::output::{num, Csv};
use crate::sweep::SweepVar;
use crate::RegimeArg;
use kerrmetro::{fit_scaling_exponent, stats_for, ModelParams, Precision, PrecisionPoint, Quadrature};

pub fn param_fields(mp: &ModelParams) -> Vec<String> {
    vec![
        num(mp.n),
        num(mp.gamma),
        num(mp.beta),
        num(mp.damping_a),
        num(mp.damping_b),
        num(mp.t),
    ]
}

pub fn moments(ctx: &Context) -> CliResult<()> {
    ctx.emit_warnings();
    let quads = ctx.quads_or(&Quadrature::ALL);
    let choice = ctx.regime.unwrap_or(RegimeArg::Auto);
    let points = ctx.points();
    let rows = par_map(&points, |mp| {
        let regime = moments_regime(mp, ctx.omega, choice);
        let stats = stats_for(mp, regime)?;
        Ok(quads
            .iter()
            .map(|&q| {
                let mut r = param_fields(mp);
                r.extend([
                    q.label().to_string(),
                    num(stats.mean(q)),
                    num(stats.variance(q)),
                    regime.label().to_string(),
                ]);
                r
            })
            .collect::<Vec<_>>())
    })?;
    let mut csv = Csv::new("moments", &ctx.provenance());
    csv.row(&["n", "gamma", "beta", "Gamma_a", "Gamma_b", "t", "quad", "mean", "variance", "regime"]);
    for r in rows.iter().flatten() {
        csv.row(r);
    }
    csv.emit(ctx.out.as_deref())?;
    Ok(())
}

pub const PRECISION_HEADER: [&str; 12] = [
    "n", "gamma", "beta", "Gamma_a", "Gamma_b", "t", "quad", "gamma_t", "delta", "derivative",
    "sigma", "regime",
];

pub fn precision_fields(mp: &ModelParams, p: &PrecisionPoint) -> Vec<String> {
    let mut r = param_fields(mp);
    r.extend([
        p.quadrature.label().to_string(),
        num(p.gamma_t),
        p.delta.to_string(),
        num(p.derivative),
        num(p.sigma),
        p.regime.label().to_string(),
    ]);
    r
}

/// Precision at every point for every quadrature, in point-major order.
pub fn precision_table(
    ctx: &Context,
    points: &[ModelParams],
    quads: &[Quadrature],
    choice: RegimeArg,
) -> CliResult<Vec<Vec<(ModelParams, PrecisionPoint)>>> {
    par_map(points, |mp| {
        let regime = precision_regime(mp, ctx.omega, choice);
        quads
            .iter()
            .map(|&q| Ok((*mp, precision_point(q, mp, regime)?)))
            .collect()
    })
}

pub const FIT_HEADER: [&str; 5] = ["quad", "slope", "intercept", "stderr", "points_used"];

/// Fit δ ∝ n^slope per quadrature; fails with exit code 3.
pub fn fits(
    table: &[Vec<(ModelParams, PrecisionPoint)>],
    quads: &[Quadrature],
) -> CliResult<Vec<Vec<String>>> {
    quads
        .iter()
        .enumerate()
        .map(|(i, q)| {
            let pts: Vec<(f64, Precision)> = table.iter().map(|row| (row[i].0.n, row[i].1.delta)).collect();
            let fit = fit_scaling_exponent(&pts).map_err(|e| CliError {
                code: EXIT_FIT,
                message: format!("{q}: {e}"),
            })?;
            Ok(vec![
                q.label().to_string(),
                num(fit.slope),
                num(fit.intercept),
                num(fit.stderr),
                fit.points_used.to_string(),
            ])
        })
        .collect()
}

pub fn precision(ctx: &Context) -> CliResult<()> {
    ctx.emit_warnings();
    let quads = ctx.quads_or(&Quadrature::ALL);
    if ctx.fit && ctx.sweep.map(|s| s.var) != Some(SweepVar::N) {
        return Err(CliError::usage("--fit needs a sweep over n"));
    }
    let points = ctx.points();
    let table = precision_table(ctx, &points, &quads, ctx.regime.unwrap_or(RegimeArg::Auto))?;
    let fit_rows = if ctx.fit { Some(fits(&table, &quads)?) } else { None };
    let mut csv = Csv::new("precision", &ctx.provenance());
    csv.row(&PRECISION_HEADER);
    for (mp, p) in table.iter().flatten() {
        csv.row(&precision_fields(mp, p));
    }
    if let Some(rows) = fit_rows {
        csv.comment("scaling fits: ln delta = intercept + slope ln n");
        csv.row(&FIT_HEADER);
        for r in rows {
            csv.row(&r);
        }
    }
    csv.emit(ctx.out.as_deref())?;
    Ok(())
}
