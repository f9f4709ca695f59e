use super::{par_map, Context};
use crate::error::{CliError, CliResult};
use crate::output::{num, Csv};
use kerrmetro::oracle::{
    choose_cutoff, coherent_density, evolve_exact, evolve_lindblad, mode_moments_from_density,
    write_diagonal_csv, OracleConfig,
};
use kerrmetro::{mode_moments, Complex64, KerrPoint, ModeMoments};
use std::fs;
use std::path::Path;

pub const GRID_N: [f64; 4] = [1.0, 4.0, 9.0, 16.0];
pub const GRID_GT: [f64; 3] = [0.01, 0.1, 0.5];
pub const GRID_DAMPING_T: [f64; 3] = [0.0, 0.5, 2.0];

const ANALYTIC_TOL: f64 = 1e-6;
const ANALYTIC_FLOOR: f64 = 1e-9;
const PATHS_TOL: f64 = 1e-9;
const PATHS_FLOOR: f64 = 1e-12;
const REVIVAL_TOL: f64 = 1e-8;

/// |a - b| / (max(|a|, |b|) + floor/tol): at most `tol` exactly when
/// |a - b| ≤ tol·max(|a|, |b|) + floor.
fn scaled_err(a: f64, b: f64, tol: f64, floor: f64) -> f64 {
    (a - b).abs() / (a.abs().max(b.abs()) + floor / tol)
}

fn max_err(a: &ModeMoments, b: &ModeMoments, tol: f64, floor: f64) -> f64 {
    [
        scaled_err(a.first.re, b.first.re, tol, floor),
        scaled_err(a.first.im, b.first.im, tol, floor),
        scaled_err(a.s_x, b.s_x, tol, floor),
        scaled_err(a.s_y, b.s_y, tol, floor),
    ]
    .into_iter()
    .fold(0.0, f64::max)
}

struct PointResult {
    n: f64,
    g: f64,
    damping: f64,
    cutoff: usize,
    analytic_err: f64,
    paths_err: f64,
    revival_err: Option<f64>,
    pass: bool,
}

fn check_point(
    n: f64,
    g: f64,
    damping: f64,
    cfg: &OracleConfig,
    dump: Option<&Path>,
) -> CliResult<PointResult> {
    let t = 1.0;
    let analytic = mode_moments(&KerrPoint::new(n, g, damping, t)?)?;
    let amp = (0.5 * n).sqrt();
    let cutoff = cfg.cutoff.unwrap_or_else(|| choose_cutoff(amp, cfg.tail_tol));
    let rho0 = coherent_density(Complex64::new(amp, 0.0), cutoff, cfg.tail_tol)?;
    let stepped = evolve_lindblad(&rho0, g, damping, t, cfg)?;
    let exact = evolve_exact(&rho0, g, damping, t, cfg)?;
    let ms = mode_moments_from_density(&stepped, n, t);
    let me = mode_moments_from_density(&exact, n, t);
    let analytic_err = max_err(&analytic, &ms, ANALYTIC_TOL, ANALYTIC_FLOOR);
    let paths_err = max_err(&me, &ms, PATHS_TOL, PATHS_FLOOR);
    // Γ = 0: |√2⟨a⟩| = √n exp[-(n/2)(1 - cos 2gt)]
    let revival_err = (damping == 0.0).then(|| {
        let want = n.sqrt() * (-0.5 * n * (1.0 - (2.0 * g * t).cos())).exp();
        (ms.first.norm() - want).abs()
    });
    if let Some(dir) = dump {
        let name = format!("oracle_n{n}_g{g}_Gamma{damping}.csv");
        let mut buf = Vec::new();
        write_diagonal_csv(&mut buf, &exact, &me)?;
        fs::write(dir.join(name), buf)?;
    }
    let pass = analytic_err <= ANALYTIC_TOL
        && paths_err <= PATHS_TOL
        && revival_err.is_none_or(|e| e <= REVIVAL_TOL);
    Ok(PointResult {
        n,
        g,
        damping,
        cutoff,
        analytic_err,
        paths_err,
        revival_err,
        pass,
    })
}

pub fn oracle_check(ctx: &Context, cutoff: Option<usize>, dump: Option<&Path>) -> CliResult<()> {
    if let Some(dir) = dump {
        fs::create_dir_all(dir)?;
    }
    let cfg = OracleConfig {
        cutoff,
        ..OracleConfig::default()
    };
    cfg.validate()?;
    let mut grid = Vec::new();
    for &n in &GRID_N {
        for &gt in &GRID_GT {
            for &damping in &GRID_DAMPING_T {
                grid.push((n, gt, damping));
            }
        }
    }
    let results = par_map(&grid, |&(n, g, damping)| check_point(n, g, damping, &cfg, dump))?;

    let mut csv = Csv::new("oracle-check", "grid: n in {1,4,9,16}, gt in {0.01,0.1,0.5}, Gamma t in {0,0.5,2}, t = 1");
    csv.row(&[
        "n", "g", "Gamma", "t", "cutoff", "rel_err_analytic", "rel_err_paths", "revival_err", "status",
    ]);
    for r in &results {
        csv.row(&[
            num(r.n),
            num(r.g),
            num(r.damping),
            num(1.0),
            r.cutoff.to_string(),
            num(r.analytic_err),
            num(r.paths_err),
            r.revival_err.map(num).unwrap_or_default(),
            if r.pass { "PASS" } else { "FAIL" }.to_string(),
        ]);
    }
    let worst = results.iter().map(|r| r.analytic_err).fold(0.0, f64::max);
    let worst_paths = results.iter().map(|r| r.paths_err).fold(0.0, f64::max);
    let failed = results.iter().filter(|r| !r.pass).count();
    let verdict = if failed == 0 { "PASS" } else { "FAIL" };
    let summary = format!(
        "{verdict}: {} points, {failed} failed, max rel err {worst:.3e} (analytic vs stepped), {worst_paths:.3e} (stepped vs exact)",
        results.len()
    );
    csv.comment(&summary);
    csv.emit(ctx.out.as_deref())?;
    eprintln!("{summary}");
    if failed > 0 {
        return Err(CliError::oracle(format!("oracle check failed at {failed} points")));
    }
    Ok(())
}
