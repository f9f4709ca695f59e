//! Precision of estimating γt from a single quadrature measurement.
//!
//! For a measured quadrature Z the error propagation estimate is
//! `δ(γt) = ΔZ / |d<Z>/d(γt)|`, with t held fixed. The general path takes
//! ΔZ from [`output_stats`] and the derivative from a central difference
//! through the full analytic pipeline; closed forms are provided for the
//! undamped short-time and strong-damping regimes.

use crate::error::{ensure, Error, Result};
use crate::interferometer::{
    means_no_damping, means_short_time, means_strong_damping, output_stats,
    second_moments_no_damping, QuadValues, Quadrature, QuadratureStats, UNIT_VARIANCES,
};
use crate::kerr::{mode_moments, KerrPoint};
use crate::model::ModelParams;
use std::fmt;
use std::str::FromStr;

/// Derivatives smaller than this are treated as a fringe boundary.
pub const DERIVATIVE_FLOOR: f64 = 1e-30;

/// Which formula family produced a number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Regime {
    General,
    NoDamping,
    StrongDamping,
    ShortTime,
}

impl Regime {
    pub fn label(self) -> &'static str {
        match self {
            Regime::General => "general",
            Regime::NoDamping => "no_damping",
            Regime::StrongDamping => "strong_damping",
            Regime::ShortTime => "short_time",
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Regime {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.replace('-', "_").as_str() {
            "general" => Ok(Regime::General),
            "no_damping" => Ok(Regime::NoDamping),
            "strong_damping" => Ok(Regime::StrongDamping),
            "short_time" => Ok(Regime::ShortTime),
            _ => Err(Error::Domain(format!("unknown regime `{s}`"))),
        }
    }
}

/// Output statistics at `mp` using the formulas of `regime`.
///
/// Closed forms that only give means (short time, strong damping) report
/// the coherent-state variance 1.
pub fn stats_for(mp: &ModelParams, regime: Regime) -> Result<QuadratureStats> {
    mp.validate()?;
    let (n, t) = (mp.n, mp.t);
    match regime {
        Regime::General => {
            let a = mode_moments(&KerrPoint::new(n, mp.gamma, mp.damping_a, t)?)?;
            let b = mode_moments(&KerrPoint::new(n, mp.beta, mp.damping_b, t)?)?;
            output_stats(&a, &b)
        }
        Regime::NoDamping => {
            let mean = means_no_damping(n, mp.gamma, mp.beta, t);
            let second = second_moments_no_damping(n, mp.gamma, mp.beta, t);
            let var = QuadValues {
                x_plus: second.x_plus - mean.x_plus.powi(2),
                x_minus: second.x_minus - mean.x_minus.powi(2),
                y_plus: second.y_plus - mean.y_plus.powi(2),
                y_minus: second.y_minus - mean.y_minus.powi(2),
            };
            Ok(QuadratureStats { mean, var })
        }
        Regime::ShortTime => Ok(QuadratureStats {
            mean: means_short_time(n, mp.gamma, mp.beta, t),
            var: UNIT_VARIANCES,
        }),
        Regime::StrongDamping => Ok(QuadratureStats {
            mean: means_strong_damping(n, mp.gamma, mp.beta, mp.damping_a, mp.damping_b, t)?,
            var: UNIT_VARIANCES,
        }),
    }
}

/// Precision, or the flag for a vanishing derivative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Precision {
    Finite(f64),
    Infinite,
}

impl Precision {
    pub fn finite(self) -> Option<f64> {
        match self {
            Precision::Finite(v) => Some(v),
            Precision::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Precision::Infinite)
    }
}

impl fmt::Display for Precision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Precision::Finite(v) => write!(f, "{v:.16e}"),
            Precision::Infinite => f.write_str("inf"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrecisionPoint {
    pub quadrature: Quadrature,
    pub n: f64,
    pub gamma_t: f64,
    pub delta: Precision,
    /// d<Z>/d(γt).
    pub derivative: f64,
    /// ΔZ.
    pub sigma: f64,
    pub regime: Regime,
}

impl PrecisionPoint {
    fn new(
        quadrature: Quadrature,
        n: f64,
        gamma_t: f64,
        derivative: f64,
        sigma: f64,
        regime: Regime,
    ) -> Self {
        let delta = if derivative.abs() < DERIVATIVE_FLOOR {
            Precision::Infinite
        } else {
            Precision::Finite(sigma / derivative.abs())
        };
        PrecisionPoint {
            quadrature,
            n,
            gamma_t,
            delta,
            derivative,
            sigma,
            regime,
        }
    }

    /// Precision after averaging `shots` independent repetitions.
    pub fn with_shots(mut self, shots: u32) -> Self {
        if let Precision::Finite(v) = self.delta {
            self.delta = Precision::Finite(v / f64::from(shots.max(1)).sqrt());
        }
        self
    }
}

/// Central-difference settings for d<Z>/d(γt).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiniteDifference {
    /// Step in γt; `None` selects 10⁻³/n, which resolves fringes of
    /// angular frequency ≈ n in γt.
    pub step: Option<f64>,
    /// Combine steps h and h/2 as (4D(h/2) - D(h))/3.
    pub richardson: bool,
}

impl Default for FiniteDifference {
    fn default() -> Self {
        FiniteDifference {
            step: None,
            richardson: false,
        }
    }
}

impl FiniteDifference {
    pub fn with_step(step: f64) -> Self {
        FiniteDifference {
            step: Some(step),
            richardson: false,
        }
    }

    pub fn step_for(&self, n: f64) -> f64 {
        self.step
            .unwrap_or_else(|| if n > 0.0 { 1e-3 / n } else { 1e-3 })
    }
}

/// d<Z>/d(γt) at fixed t, n, β and damping rates.
pub fn mean_derivative(
    q: Quadrature,
    mp: &ModelParams,
    regime: Regime,
    fd: &FiniteDifference,
) -> Result<f64> {
    ensure(mp.t > 0.0, || "derivative in gamma t needs t > 0".to_string())?;
    let h = fd.step_for(mp.n);
    ensure(h > 0.0 && h.is_finite(), || format!("step must be > 0, got {h}"))?;
    let mean_at = |gamma_t: f64| -> Result<f64> {
        let shifted = ModelParams {
            gamma: gamma_t / mp.t,
            ..*mp
        };
        Ok(stats_for(&shifted, regime)?.mean(q))
    };
    let gt = mp.gamma_t();
    let central = |h: f64| -> Result<f64> { Ok((mean_at(gt + h)? - mean_at(gt - h)?) / (2.0 * h)) };
    let d = central(h)?;
    if fd.richardson {
        Ok((4.0 * central(0.5 * h)? - d) / 3.0)
    } else {
        Ok(d)
    }
}

/// Precision of the chosen formula family at `mp`.
pub fn precision_at(
    q: Quadrature,
    mp: &ModelParams,
    regime: Regime,
    fd: &FiniteDifference,
) -> Result<PrecisionPoint> {
    let stats = stats_for(mp, regime)?;
    let sigma = stats.variance(q).max(0.0).sqrt();
    let derivative = mean_derivative(q, mp, regime, fd)?;
    Ok(PrecisionPoint::new(q, mp.n, mp.gamma_t(), derivative, sigma, regime))
}

/// δ(γt) from the full damped moments.
pub fn precision_general(q: Quadrature, mp: &ModelParams, step: f64) -> Result<PrecisionPoint> {
    ensure(step > 0.0, || format!("step must be > 0, got {step}"))?;
    precision_at(q, mp, Regime::General, &FiniteDifference::with_step(step))
}

/// Relative change of δ when the difference step is halved.
pub fn step_sensitivity(q: Quadrature, mp: &ModelParams, regime: Regime, step: f64) -> Result<f64> {
    let a = precision_at(q, mp, regime, &FiniteDifference::with_step(step))?;
    let b = precision_at(q, mp, regime, &FiniteDifference::with_step(0.5 * step))?;
    match (a.delta, b.delta) {
        (Precision::Finite(x), Precision::Finite(y)) => Ok((x - y).abs() / y),
        (Precision::Infinite, Precision::Infinite) => Ok(0.0),
        _ => Ok(f64::INFINITY),
    }
}

fn trig_vanishes(value: f64, argument: f64) -> bool {
    value.abs() <= 4.0 * f64::EPSILON * argument.abs().max(1.0)
}

/// Undamped short-time precision: `1/(n^{3/2}|sin nγt|)` for X±,
/// `1/(n^{3/2}|cos nγt|)` for Y±, with unit ΔZ.
pub fn precision_no_damping(q: Quadrature, n: f64, gamma_t: f64) -> Result<PrecisionPoint> {
    ensure(n > 0.0, || format!("n must be > 0, got {n}"))?;
    let phase = n * gamma_t;
    let (trig, slope) = if q.is_x() {
        let s = phase.sin();
        (s, -s)
    } else {
        let c = phase.cos();
        (c, -c)
    };
    let derivative = n.powf(1.5) * slope;
    let mut point = PrecisionPoint::new(q, n, gamma_t, derivative, 1.0, Regime::NoDamping);
    if trig_vanishes(trig, phase) {
        point.delta = Precision::Infinite;
    }
    Ok(point)
}

/// Strong-damping precision
/// `Γt e^{Γt/2} / (n^{3/2}(1 - e^{-Γt}) |trig(nγ(1 - e^{-Γt})/Γ)|)`,
/// trig = sin for X±, cos for Y±.
pub fn precision_strong_damping(
    q: Quadrature,
    n: f64,
    gamma: f64,
    damping: f64,
    t: f64,
) -> Result<PrecisionPoint> {
    ensure(n > 0.0, || format!("n must be > 0, got {n}"))?;
    ensure(damping > 0.0 && t > 0.0, || {
        "strong-damping precision needs Gamma_a > 0 and t > 0".to_string()
    })?;
    let loss = -(-damping * t).exp_m1();
    let phase = n * gamma * loss / damping;
    let trig = if q.is_x() { phase.sin() } else { phase.cos() };
    // d<Z>/d(γt) = -√n e^{-Γt/2} trig(phase) · n(1 - e^{-Γt})/(Γt)
    let derivative =
        -n.sqrt() * (-0.5 * damping * t).exp() * trig * n * loss / (damping * t);
    let mut point =
        PrecisionPoint::new(q, n, gamma * t, derivative, 1.0, Regime::StrongDamping);
    if trig_vanishes(trig, phase) {
        point.delta = Precision::Infinite;
    }
    Ok(point)
}

/// A zero of d<Z>/d(γt).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FringeBoundary {
    pub gamma: f64,
    /// Nonlinear phase nγt at the boundary.
    pub phase: f64,
}

/// Zeros of the mean's γt-derivative over `phase_range` (in nγt units),
/// by sign-change bracketing on `samples` intervals followed by bisection.
/// The scan extends one interval past each end so boundaries sitting on the
/// range limits are bracketed too.
pub fn locate_fringe_boundaries(
    q: Quadrature,
    base: &ModelParams,
    phase_range: (f64, f64),
    regime: Regime,
    samples: usize,
) -> Result<Vec<FringeBoundary>> {
    let (lo, hi) = phase_range;
    ensure(lo.is_finite() && hi.is_finite() && lo < hi, || {
        format!("invalid search range [{lo}, {hi}]")
    })?;
    ensure(base.n > 0.0 && base.t > 0.0, || {
        "fringe search needs n > 0 and t > 0".to_string()
    })?;
    ensure(samples >= 2, || "need at least 2 samples".to_string())?;
    let nt = base.n * base.t;
    let fd = FiniteDifference::default();
    let slope = |phase: f64| -> Result<f64> {
        let mp = ModelParams {
            gamma: phase / nt,
            ..*base
        };
        mean_derivative(q, &mp, regime, &fd)
    };

    let width = (hi - lo) / samples as f64;
    let tol = 1e-13 * lo.abs().max(hi.abs()).max(1.0);
    let mut roots: Vec<f64> = Vec::new();
    let mut prev: Option<(f64, f64)> = None;
    for i in 0..=samples + 2 {
        let x = lo + (i as f64 - 1.0) * width;
        let fx = slope(x)?;
        if fx == 0.0 {
            roots.push(x);
        } else if let Some((xp, fp)) = prev {
            if fp != 0.0 && fp.signum() != fx.signum() {
                roots.push(bisect(&slope, xp, fp, x, tol)?);
            }
        }
        prev = Some((x, fx));
    }
    roots.sort_by(|a, b| a.total_cmp(b));
    roots.dedup_by(|a, b| (*a - *b).abs() <= 10.0 * tol);
    let keep = 1e-9 * (hi - lo) + tol;
    Ok(roots
        .into_iter()
        .filter(|&x| x >= lo - keep && x <= hi + keep)
        .map(|phase| FringeBoundary {
            gamma: phase / nt,
            phase,
        })
        .collect())
}

fn bisect(
    f: &impl Fn(f64) -> Result<f64>,
    mut a: f64,
    mut fa: f64,
    mut b: f64,
    tol: f64,
) -> Result<f64> {
    for _ in 0..200 {
        if (b - a).abs() <= tol {
            break;
        }
        let m = 0.5 * (a + b);
        let fm = f(m)?;
        if fm == 0.0 {
            return Ok(m);
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

/// Least-squares power law δ ∝ n^slope.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingFit {
    pub slope: f64,
    pub intercept: f64,
    /// Standard error of the slope.
    pub stderr: f64,
    pub points_used: usize,
}

/// Ordinary least squares of ln δ on ln n. Infinite and non-positive
/// points are dropped; fewer than three remaining is an error.
pub fn fit_scaling_exponent(points: &[(f64, Precision)]) -> Result<ScalingFit> {
    let data: Vec<(f64, f64)> = points
        .iter()
        .filter_map(|&(n, d)| match d {
            Precision::Finite(v) if v > 0.0 && v.is_finite() && n > 0.0 => Some((n.ln(), v.ln())),
            _ => None,
        })
        .collect();
    let m = data.len();
    if m < 3 {
        return Err(Error::Fit(format!(
            "{m} finite positive points, need at least 3"
        )));
    }
    let mf = m as f64;
    let mx = data.iter().map(|p| p.0).sum::<f64>() / mf;
    let my = data.iter().map(|p| p.1).sum::<f64>() / mf;
    let sxx: f64 = data.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = data.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return Err(Error::Fit("all points share the same n".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = data
        .iter()
        .map(|p| (p.1 - intercept - slope * p.0).powi(2))
        .sum();
    let stderr = if m > 2 {
        (rss / (mf - 2.0) / sxx).sqrt()
    } else {
        0.0
    };
    Ok(ScalingFit {
        slope,
        intercept,
        stderr,
        points_used: m,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn undamped(n: f64, phase: f64) -> ModelParams {
        let t = 1e-3;
        ModelParams::reduced(n, phase / (n * t), 0.0, 0.0, 0.0, t)
    }

    #[test]
    fn general_derivative_at_quarter_fringe() {
        // |d<X+>/d(γt)| = n^{3/2} |sin nγt| to leading order
        let n = 1e7;
        let mp = undamped(n, FRAC_PI_2);
        let p = precision_general(Quadrature::XPlus, &mp, 1e-3 / n).unwrap();
        assert!((p.derivative.abs() / n.powf(1.5) - 1.0).abs() < 1e-4);
        let delta = p.delta.finite().unwrap();
        assert!((delta - p.sigma / n.powf(1.5)).abs() / delta < 1e-4);
        // the Kerr shear leaves X+ anti-squeezed here: var ≈ 1 + 2(nγt)² sin²(nγt)
        let expect = 1.0 + 2.0 * FRAC_PI_2.powi(2);
        assert!((p.sigma.powi(2) - expect).abs() / expect < 1e-3, "{}", p.sigma);
    }

    #[test]
    fn central_fringe_is_flagged() {
        let mp = ModelParams::reduced(1e4, 0.0, 0.0, 0.0, 0.0, 1.0);
        let p = precision_general(Quadrature::XPlus, &mp, 1e-7).unwrap();
        assert_eq!(p.derivative, 0.0);
        assert!(p.delta.is_infinite());
    }

    #[test]
    fn no_damping_closed_form_values() {
        let n = 1e7;
        let p = precision_no_damping(Quadrature::YPlus, n, 0.0).unwrap();
        assert!((p.delta.finite().unwrap() - n.powf(-1.5)).abs() < 1e-25);
        let p = precision_no_damping(Quadrature::YPlus, n, 1.0 / n).unwrap();
        let d = p.delta.finite().unwrap();
        assert!((d - 1.0 / (n.powf(1.5) * 1f64.cos())).abs() / d < 1e-14);
        assert!((d - 5.85e-11).abs() < 0.01e-11);
        for m in 0..5 {
            let p = precision_no_damping(Quadrature::XPlus, n, m as f64 * PI / n).unwrap();
            assert!(p.delta.is_infinite(), "m = {m}");
        }
        assert!(precision_no_damping(Quadrature::XPlus, 0.0, 1.0).is_err());
    }

    #[test]
    fn no_damping_derivative_matches_general_path() {
        let n = 1e7;
        let mp = undamped(n, 1.0);
        let closed = precision_no_damping(Quadrature::YPlus, n, 1.0 / n).unwrap();
        let general = precision_general(Quadrature::YPlus, &mp, 1e-3 / n).unwrap();
        assert!((closed.derivative - general.derivative).abs() / closed.derivative.abs() < 1e-4);
    }

    #[test]
    fn strong_damping_closed_form() {
        let (n, gamma, damping, t) = (1e7, 1e-4, 4700.0, 1e-3);
        let p = precision_strong_damping(Quadrature::YPlus, n, gamma, damping, t).unwrap();
        let d = p.delta.finite().unwrap();
        assert!((d - 1.6e-9).abs() / 1.6e-9 < 0.01, "{d}");
        let mp = ModelParams::reduced(n, gamma, 0.0, damping, damping, t);
        let g = precision_general(Quadrature::YPlus, &mp, 1e-3 / n).unwrap();
        assert!((g.delta.finite().unwrap() - d).abs() / d < 0.03);

        // sin(phase) = 1
        let loss = 1.0 - (-damping * t as f64).exp();
        let gamma_q = FRAC_PI_2 * damping / (n * loss);
        let p = precision_strong_damping(Quadrature::XPlus, n, gamma_q, damping, t).unwrap();
        let expect = damping * t * (0.5 * damping * t as f64).exp() / (n.powf(1.5) * loss);
        assert!((p.delta.finite().unwrap() - expect).abs() / expect < 1e-12);
    }

    #[test]
    fn strong_damping_reduces_to_undamped_as_damping_vanishes() {
        let (n, gamma, t) = (1e6, 3e-4, 1e-3);
        let a = precision_strong_damping(Quadrature::YPlus, n, gamma, 1e-6, t).unwrap();
        let b = precision_no_damping(Quadrature::YPlus, n, gamma * t).unwrap();
        let (a, b) = (a.delta.finite().unwrap(), b.delta.finite().unwrap());
        assert!((a - b).abs() / b < 1e-8);
    }

    #[test]
    fn strong_damping_degrades_with_damping() {
        let (n, t) = (1e7, 1e-3);
        let phase = 0.7;
        let mut last = 0.0;
        for k in 0..40 {
            let damping = (2.0 + 0.25 * k as f64) / t;
            let loss = 1.0 - (-damping * t as f64).exp();
            let gamma = phase * damping / (n * loss);
            let d = precision_strong_damping(Quadrature::YPlus, n, gamma, damping, t)
                .unwrap()
                .delta
                .finite()
                .unwrap();
            assert!(d > last);
            last = d;
        }
    }

    #[test]
    fn shots_reduce_precision() {
        let p = precision_no_damping(Quadrature::YPlus, 100.0, 0.0).unwrap();
        let d1 = p.delta.finite().unwrap();
        let d4 = p.with_shots(4).delta.finite().unwrap();
        assert!((d4 - d1 / 2.0).abs() < 1e-18);
    }

    #[test]
    fn undamped_boundaries_short_time_are_exact() {
        let base = undamped(1000.0, 0.0);
        let b = locate_fringe_boundaries(Quadrature::XPlus, &base, (0.0, 2.0 * PI), Regime::ShortTime, 64)
            .unwrap();
        let phases: Vec<f64> = b.iter().map(|b| b.phase).collect();
        assert_eq!(phases.len(), 3, "{phases:?}");
        for (p, want) in phases.iter().zip([0.0, PI, 2.0 * PI]) {
            assert!((p - want).abs() < 1e-6, "{p} vs {want}");
        }
        let b = locate_fringe_boundaries(Quadrature::YPlus, &base, (0.0, 2.0 * PI), Regime::ShortTime, 64)
            .unwrap();
        let phases: Vec<f64> = b.iter().map(|b| b.phase).collect();
        assert_eq!(phases.len(), 2, "{phases:?}");
        assert!((phases[0] - FRAC_PI_2).abs() < 1e-6);
        assert!((phases[1] - 3.0 * FRAC_PI_2).abs() < 1e-6);
    }

    #[test]
    fn undamped_boundaries_general_path_shift_by_kerr_phase() {
        // phase (n+1)γt and modulus √n e^{-n sin²γt} move the zero of the
        // slope to nγt ≈ mπ(1 - 3/n)
        let n = 1000.0;
        let base = undamped(n, 0.0);
        let b = locate_fringe_boundaries(Quadrature::XPlus, &base, (0.0, 2.0 * PI), Regime::General, 64)
            .unwrap();
        assert_eq!(b.len(), 3);
        for (m, bd) in b.iter().enumerate() {
            let shift = m as f64 * PI - bd.phase;
            let want = 3.0 * m as f64 * PI / n;
            assert!((shift - want).abs() <= 0.05 * want, "{shift} vs {want}");
        }
    }

    #[test]
    fn damped_first_y_boundary_moves_out() {
        let (n, t, damping) = (1e7, 1e-3, 4700.0);
        let base = ModelParams::reduced(n, 0.0, 0.0, damping, damping, t);
        let b = locate_fringe_boundaries(Quadrature::YPlus, &base, (0.0, 10.0), Regime::StrongDamping, 64)
            .unwrap();
        let loss = 1.0 - (-damping * t as f64).exp();
        let want = FRAC_PI_2 * damping * t / loss;
        assert!((b[0].phase - want).abs() / want < 1e-6, "{:?} {want}", b);
        assert!(b[0].phase > FRAC_PI_2);
    }

    #[test]
    fn exact_power_law_fit() {
        let pts: Vec<(f64, Precision)> = (0..12)
            .map(|i| {
                let n = 10f64.powf(2.0 + 0.4 * i as f64);
                (n, Precision::Finite(3.7 * n.powf(-1.5)))
            })
            .collect();
        let fit = fit_scaling_exponent(&pts).unwrap();
        assert!((fit.slope + 1.5).abs() < 1e-12);
        assert!((fit.intercept - 3.7f64.ln()).abs() < 1e-10);
        assert!(fit.stderr < 1e-10);
        assert_eq!(fit.points_used, 12);
    }

    #[test]
    fn fit_excludes_infinite_and_needs_three() {
        let pts = [
            (1.0, Precision::Infinite),
            (2.0, Precision::Finite(1.0)),
            (3.0, Precision::Finite(0.5)),
            (4.0, Precision::Finite(-1.0)),
        ];
        assert!(matches!(fit_scaling_exponent(&pts), Err(Error::Fit(_))));
    }

    #[test]
    fn regime_labels_round_trip() {
        for r in [Regime::General, Regime::NoDamping, Regime::StrongDamping, Regime::ShortTime] {
            assert_eq!(r.label().parse::<Regime>().unwrap(), r);
        }
        assert_eq!("no-damping".parse::<Regime>().unwrap(), Regime::NoDamping);
    }
}
