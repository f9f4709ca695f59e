//! Closed-form statistics of a single damped Kerr mode.
//!
//! The mode starts in a coherent state of real amplitude α₀/√2 (one arm of
//! a balanced beamsplitter fed with amplitude α₀, n = α₀²) and evolves under
//! `H = ħg(a†a)²` with zero-temperature damping at rate Γ. Everything here
//! is in dimensionless quadrature units.
//!
//! Phase convention: the first moment rotates as `exp(-i(gt + nD₂/2))`,
//! i.e. it is the expectation `√2⟨a⟩` of the Lindblad evolution
//! `dρ/dt = -ig[(a†a)², ρ] + …` in [`crate::oracle`]. The conjugate
//! convention would flip the sign of every ⟨Y⟩ and leave moduli, second
//! moments and precisions unchanged.

use crate::error::{ensure, Error, Result};
use num_complex::Complex64;
use std::f64::consts::{FRAC_1_SQRT_2, PI};

/// Parameters of one arm: input photon bookkeeping `n` (the shared α₀²),
/// Kerr rate `g`, damping rate and evolution time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KerrPoint {
    pub n: f64,
    /// Kerr rate in s⁻¹. The sign selects the rotation sense.
    pub g: f64,
    pub damping: f64,
    pub t: f64,
}

impl KerrPoint {
    pub fn new(n: f64, g: f64, damping: f64, t: f64) -> Result<Self> {
        let kp = KerrPoint { n, g, damping, t };
        kp.validate()?;
        Ok(kp)
    }

    pub fn validate(&self) -> Result<()> {
        ensure(self.n.is_finite() && self.n >= 0.0, || {
            format!("n must be finite and >= 0, got {}", self.n)
        })?;
        ensure(self.g.is_finite(), || format!("g must be finite, got {}", self.g))?;
        ensure(self.damping >= 0.0, || {
            format!("damping must be >= 0, got {}", self.damping)
        })?;
        ensure(self.t.is_finite() && self.t >= 0.0, || {
            format!("t must be finite and >= 0, got {}", self.t)
        })
    }
}

/// First and second quadrature moments of one arm.
///
/// * `first` = √2 ∫ α Q d²α
/// * `s_x` = 2 ∫ (Re α)² Q d²α
/// * `s_y` = 2 ∫ (Im α)² Q d²α
///
/// Q-function moments are antinormally ordered, so a coherent state of
/// amplitude √(n/2) has `s_x = 1 + n` and `s_y = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeMoments {
    pub first: Complex64,
    pub s_x: f64,
    pub s_y: f64,
    pub n_total: f64,
    pub t: f64,
}

impl ModeMoments {
    /// Antinormally ordered moments of a coherent state √(n/2).
    pub fn coherent(n: f64, t: f64) -> Self {
        ModeMoments {
            first: Complex64::new(n.sqrt(), 0.0),
            s_x: 1.0 + n,
            s_y: 1.0,
            n_total: n,
            t,
        }
    }
}

/// `1 - exp(-w t)` for `w = damping + i·omega`, without cancellation at
/// small arguments.
fn one_minus_exp(damping: f64, omega: f64, t: f64) -> Complex64 {
    let b = omega * t;
    let decay = (-damping * t).exp();
    let half = (0.5 * b).sin();
    Complex64::new(
        2.0 * half * half - b.cos() * (-damping * t).exp_m1(),
        decay * b.sin(),
    )
}

/// The pair (C_r, D_r) with `C_r + i D_r = i·r·g ∫₀ᵗ e^{-(Γ + i r g)s} ds`.
///
/// This is the same quantity as
///
/// ```text
/// C_r = [1 - e^{-Γt}cos rgt - (Γ/rg) e^{-Γt} sin rgt] / (1 + (Γ/rg)²)
/// D_r = [Γ/rg + e^{-Γt} sin rgt - (Γ/rg) e^{-Γt} cos rgt] / (1 + (Γ/rg)²)
/// ```
///
/// evaluated in a form that stays accurate for `g → 0`, `Γ → 0` and
/// `rgt ≪ 1` (where the bracket above cancels to O((gt)²)).
pub fn cr_dr(r: u32, g: f64, damping: f64, t: f64) -> Result<(f64, f64)> {
    ensure(r == 2 || r == 4, || format!("r must be 2 or 4, got {r}"))?;
    ensure(damping >= 0.0, || format!("damping must be >= 0, got {damping}"))?;
    ensure(t >= 0.0, || format!("t must be >= 0, got {t}"))?;
    ensure(g.is_finite(), || format!("g must be finite, got {g}"))?;
    let rg = f64::from(r) * g;
    if rg == 0.0 || t == 0.0 {
        return Ok((0.0, 0.0));
    }
    if damping.is_infinite() {
        return Ok((0.0, 0.0));
    }
    let w = Complex64::new(damping, rg);
    let z = Complex64::new(0.0, rg) * one_minus_exp(damping, rg, t) / w;
    Ok((z.re, z.im))
}

fn c_and_d(r: u32, kp: &KerrPoint) -> (f64, f64) {
    cr_dr(r, kp.g, kp.damping, kp.t).expect("KerrPoint already validated")
}

/// `√2 ∫ α Q d²α = √n e^{-(Γt + nC₂)/2} e^{-i(gt + nD₂/2)}`.
///
/// The modulus is assembled in log space so that n ~ 10⁷ with
/// non-negligible nC₂ neither overflows nor underflows early.
pub fn first_moment(kp: &KerrPoint) -> Result<Complex64> {
    kp.validate()?;
    if kp.n == 0.0 || kp.damping.is_infinite() {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let (c2, d2) = c_and_d(2, kp);
    let log_mod = 0.5 * kp.n.ln() - 0.5 * (kp.damping * kp.t + kp.n * c2);
    let phase = -(kp.g * kp.t + 0.5 * kp.n * d2);
    Ok(Complex64::from_polar(log_mod.exp(), phase))
}

/// `(s_x, s_y) = 1 + (n/2)e^{-Γt} ± (n/2) e^{-Γt - nC₄/2} cos(4gt + nD₄/2)`,
/// upper sign for the real quadrature.
pub fn quadrature_second_moments(kp: &KerrPoint) -> Result<(f64, f64)> {
    kp.validate()?;
    if kp.damping.is_infinite() {
        return Ok((1.0, 1.0));
    }
    let (c4, d4) = c_and_d(4, kp);
    let decay = (-kp.damping * kp.t).exp();
    let base = 0.5 * kp.n * decay;
    let osc = 0.5 * kp.n * (-kp.damping * kp.t - 0.5 * kp.n * c4).exp()
        * (4.0 * kp.g * kp.t + 0.5 * kp.n * d4).cos();
    Ok((1.0 + base + osc, 1.0 + base - osc))
}

pub fn mode_moments(kp: &KerrPoint) -> Result<ModeMoments> {
    let first = first_moment(kp)?;
    let (s_x, s_y) = quadrature_second_moments(kp)?;
    Ok(ModeMoments {
        first,
        s_x,
        s_y,
        n_total: kp.n,
        t: kp.t,
    })
}

/// Hard cap on the per-index term count of the Q-function double series.
pub const Q_SERIES_MAX_TERMS: usize = 4096;

/// Husimi Q function of the damped Kerr mode at phase-space point `alpha`.
///
/// The initial state is the coherent state α₀/√2 (α₀ real). The function is
/// the double series
///
/// ```text
/// Q = e^{-|α|²}/π Σ_{p,q} (α*α₀/√2)^p (α α₀/√2)^q / (p! q!)
///       · f^{(p+q)/2} · exp[-α₀² (f + iδ) / (2(1 + iδ))]
/// f = exp[-Γt - 2igt(p-q)],   δ = 2g(p-q)/Γ
/// ```
///
/// with the Γ → 0 limit of `(f + iδ)/(1 + iδ)` taken analytically (it tends
/// to 1 for p ≠ q). Each index runs to
/// `ceil(x + 10√x + 20)`, `x = |α|α₀/√2`, and further until the Poisson tail
/// bound drops below `tail_tol`.
pub fn q_value(
    alpha: Complex64,
    alpha0: f64,
    g: f64,
    damping: f64,
    t: f64,
    tail_tol: f64,
) -> Result<f64> {
    q_value_with_limit(alpha, alpha0, g, damping, t, tail_tol, Q_SERIES_MAX_TERMS)
}

pub fn q_value_with_limit(
    alpha: Complex64,
    alpha0: f64,
    g: f64,
    damping: f64,
    t: f64,
    tail_tol: f64,
    max_terms: usize,
) -> Result<f64> {
    ensure(alpha0 >= 0.0 && alpha0.is_finite(), || {
        format!("alpha0 must be finite and >= 0, got {alpha0}")
    })?;
    ensure(tail_tol > 0.0, || format!("tail_tol must be > 0, got {tail_tol}"))?;
    KerrPoint::new(alpha0 * alpha0, g, damping, t)?;

    let amp = alpha0 * FRAC_1_SQRT_2;
    let x = alpha.norm() * amp;
    let p_max = series_length(x, tail_tol, max_terms)?;

    // Factorised pieces: coefficient of α*^p carries e^{-pΓt/2 - igtp²},
    // that of α^q carries e^{-qΓt/2 + igtq²}; only the last exponential
    // couples p and q, through k = p - q.
    let ca = alpha.conj() * amp;
    let cb = alpha * amp;
    let half_decay = (-0.5 * damping * t).exp();
    let norm = (-0.5 * alpha.norm_sqr()).exp();
    let mut left = Vec::with_capacity(p_max + 1);
    let mut right = Vec::with_capacity(p_max + 1);
    let (mut pa, mut pb) = (Complex64::new(norm, 0.0), Complex64::new(norm, 0.0));
    for p in 0..=p_max {
        if p > 0 {
            let scale = half_decay / p as f64;
            pa *= ca * scale;
            pb *= cb * scale;
        }
        let kerr = g * t * (p * p) as f64;
        left.push(pa * Complex64::from_polar(1.0, -kerr));
        right.push(pb * Complex64::from_polar(1.0, kerr));
    }
    let coupling: Vec<Complex64> = (0..=2 * p_max)
        .map(|i| {
            let k = i as f64 - p_max as f64;
            let f = Complex64::new(-damping * t, -2.0 * g * t * k).exp();
            let w = Complex64::new(damping, 2.0 * g * k);
            let ratio = if w.norm() == 0.0 {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(1.0, 0.0) + (f - 1.0) * damping / w
            };
            (-0.5 * alpha0 * alpha0 * ratio).exp()
        })
        .collect();

    let mut sum = Complex64::new(0.0, 0.0);
    for (p, l) in left.iter().enumerate() {
        for (q, r) in right.iter().enumerate() {
            sum += l * r * coupling[p + p_max - q];
        }
    }
    Ok(sum.re / PI)
}

fn series_length(x: f64, tail_tol: f64, max_terms: usize) -> Result<usize> {
    let mut p = (x + 10.0 * x.sqrt() + 20.0).ceil() as usize;
    // Poisson(x) tail beyond p, bounded by its first term times a geometric factor.
    let tail = |p: usize| -> f64 {
        let k = (p + 1) as f64;
        if k <= x {
            return 1.0;
        }
        let log_term = k * x.max(f64::MIN_POSITIVE).ln() - ln_factorial(p + 1) - x;
        log_term.exp() / (1.0 - x / (k + 1.0))
    };
    while tail(p) > tail_tol {
        if p >= max_terms {
            break;
        }
        p += 1;
    }
    if p > max_terms {
        return Err(Error::Truncation {
            needed: p,
            limit: max_terms,
        });
    }
    if tail(p) > tail_tol {
        return Err(Error::Truncation {
            needed: p + 1,
            limit: max_terms,
        });
    }
    Ok(p)
}

fn ln_factorial(k: usize) -> f64 {
    (1..=k).map(|i| (i as f64).ln()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn kp(n: f64, g: f64, damping: f64, t: f64) -> KerrPoint {
        KerrPoint::new(n, g, damping, t).unwrap()
    }

    /// Integral rg∫₀ᵗ e^{-(Γ+irg)s} ds (times i) by composite Gauss–Legendre.
    fn cr_dr_quadrature(r: u32, g: f64, damping: f64, t: f64) -> (f64, f64) {
        // 5-point Gauss–Legendre nodes/weights on [-1, 1]
        const X: [f64; 5] = [
            0.0,
            -0.538_469_310_105_683_1,
            0.538_469_310_105_683_1,
            -0.906_179_845_938_664,
            0.906_179_845_938_664,
        ];
        const W: [f64; 5] = [
            0.568_888_888_888_888_9,
            0.478_628_670_499_366_5,
            0.478_628_670_499_366_5,
            0.236_926_885_056_189_1,
            0.236_926_885_056_189_1,
        ];
        let rg = f64::from(r) * g;
        let panels = 2000;
        let h = t / panels as f64;
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..panels {
            let mid = (i as f64 + 0.5) * h;
            for (x, w) in X.iter().zip(W) {
                let s = mid + 0.5 * h * x;
                acc += w * 0.5 * h * Complex64::new(-damping * s, -rg * s).exp();
            }
        }
        let z = Complex64::new(0.0, rg) * acc;
        (z.re, z.im)
    }

    fn cr_dr_literal(r: u32, g: f64, damping: f64, t: f64) -> (f64, f64) {
        let rg = f64::from(r) * g;
        let q = damping / rg;
        let e = (-damping * t).exp();
        let pre = 1.0 / (1.0 + q * q);
        (
            pre * (1.0 - e * (rg * t).cos() - q * e * (rg * t).sin()),
            pre * (q + e * (rg * t).sin() - q * e * (rg * t).cos()),
        )
    }

    #[test]
    fn cr_dr_at_zero_time() {
        assert_eq!(cr_dr(2, 0.3, 0.1, 0.0).unwrap(), (0.0, 0.0));
        assert_eq!(cr_dr(4, 0.0, 0.1, 2.0).unwrap(), (0.0, 0.0));
    }

    #[test]
    fn cr_dr_undamped() {
        for (r, g, t) in [(2u32, 0.3, 1.7), (4, 1e-4, 1e-3), (2, 5.0, 0.9)] {
            let (c, d) = cr_dr(r, g, 0.0, t).unwrap();
            let b = f64::from(r) * g * t;
            let want = 2.0 * (0.5 * b).sin().powi(2);
            assert!((c - want).abs() <= 1e-14 * want);
            assert!((d - b.sin()).abs() < 1e-15);
        }
    }

    #[test]
    fn cr_dr_matches_quadrature_at_fiducial() {
        let (c, d) = cr_dr(2, 1e-4, 4700.0, 1e-3).unwrap();
        let (cq, dq) = cr_dr_quadrature(2, 1e-4, 4700.0, 1e-3);
        assert!(((c - cq) / cq).abs() < 1e-10, "{c} {cq}");
        assert!(((d - dq) / dq).abs() < 1e-10, "{d} {dq}");
    }

    #[test]
    fn cr_dr_matches_literal_bracket_form() {
        for (r, g, damping, t) in [(2u32, 0.1, 0.05, 1.0), (4, 0.5, 2.0, 1.0), (2, 0.05, 0.5, 3.0)] {
            let (c, d) = cr_dr(r, g, damping, t).unwrap();
            let (cl, dl) = cr_dr_literal(r, g, damping, t);
            assert!((c - cl).abs() < 1e-14 && (d - dl).abs() < 1e-14);
        }
    }

    #[test]
    fn cr_dr_rejects_bad_input() {
        assert!(cr_dr(3, 1.0, 1.0, 1.0).is_err());
        assert!(cr_dr(2, 1.0, -1.0, 1.0).is_err());
        assert!(cr_dr(2, 1.0, 1.0, -1.0).is_err());
    }

    #[test]
    fn weak_damping_limit_of_cr_dr() {
        for r in [2u32, 4] {
            for g in [0.01, 0.3, 2.0] {
                for t in [0.1, 1.0, 3.0] {
                    let (c, d) = cr_dr(r, g, 1e-9 * g, t).unwrap();
                    let b = f64::from(r) * g * t;
                    let (c0, d0) = (1.0 - b.cos(), b.sin());
                    assert!((c - c0).abs() <= 1e-6 * c0.abs().max(1e-9));
                    assert!((d - d0).abs() <= 1e-6 * d0.abs().max(1e-9));
                }
            }
        }
    }

    #[test]
    fn free_coherent_state_is_stationary() {
        for t in [0.0, 0.5, 10.0] {
            let f = first_moment(&kp(7.0, 0.0, 0.0, t)).unwrap();
            assert!((f - Complex64::new(7f64.sqrt(), 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn undamped_first_moment_closed_form() {
        let (n, g, t) = (9.0, 0.07, 1.3);
        let f = first_moment(&kp(n, g, 0.0, t)).unwrap();
        let modulus = n.sqrt() * (-n * (1.0 - (2.0 * g * t).cos()) / 2.0).exp();
        let phase = g * t + 0.5 * n * (2.0 * g * t).sin();
        assert!((f.norm() - modulus).abs() < 1e-14);
        assert!((f.arg() + phase).abs() < 1e-14);
    }

    #[test]
    fn initial_moments() {
        let m = mode_moments(&kp(5.0, 0.3, 0.2, 0.0)).unwrap();
        assert!((m.first.re - 5f64.sqrt()).abs() < 1e-15 && m.first.im == 0.0);
        assert!((m.s_x - 6.0).abs() < 1e-14 && (m.s_y - 1.0).abs() < 1e-14);
    }

    #[test]
    fn linear_damped_second_moments() {
        let (n, damping, t) = (4.0, 0.7, 1.1);
        let (sx, sy) = quadrature_second_moments(&kp(n, 0.0, damping, t)).unwrap();
        assert!((sx - (1.0 + n * (-damping * t).exp())).abs() < 1e-14);
        assert!((sy - 1.0).abs() < 1e-14);
    }

    #[test]
    fn fiducial_strong_damping_modulus() {
        let (n, g, damping, t) = (1e7, 1e-4, 4700.0, 1e-3);
        let m = mode_moments(&kp(n, g, damping, t)).unwrap();
        let (c2, _) = cr_dr(2, g, damping, t).unwrap();
        assert!(n * c2 < 1e-3);
        let envelope = n.sqrt() * (-damping * t / 2.0).exp();
        assert!((m.first.norm() - envelope).abs() / envelope < 0.01);
        assert!((m.first.norm() - envelope * (-n * c2 / 2.0).exp()).abs() / envelope < 1e-12);
    }

    #[test]
    fn decays_to_vacuum() {
        let m = mode_moments(&kp(50.0, 0.2, 1e4, 1.0)).unwrap();
        assert!(m.first.norm() < 1e-300);
        assert!((m.s_x - 1.0).abs() < 1e-12 && (m.s_y - 1.0).abs() < 1e-12);
        let m = mode_moments(&kp(50.0, 0.2, f64::INFINITY, 1.0)).unwrap();
        assert_eq!((m.first.norm(), m.s_x, m.s_y), (0.0, 1.0, 1.0));
    }

    #[test]
    fn q_at_zero_time_is_displaced_gaussian() {
        let a0 = 3.0;
        for alpha in [Complex64::new(0.0, 0.0), Complex64::new(2.0, -1.0), Complex64::new(-1.5, 0.5)] {
            let q = q_value(alpha, a0, 0.3, 0.1, 0.0, 1e-14).unwrap();
            let d = alpha - a0 * FRAC_1_SQRT_2;
            let exact = (-d.norm_sqr()).exp() / PI;
            assert!((q - exact).abs() < 1e-14, "{q} {exact}");
        }
    }

    #[test]
    fn q_undamped_is_pure_state_husimi() {
        // Q = |<α|ψ(t)>|²/π with ψ = Σ c_k e^{-igk²t}|k>
        let (a0, g, t) = (2.0, 0.13, 1.7);
        let amp = a0 * FRAC_1_SQRT_2;
        for alpha in [Complex64::new(1.0, 0.3), Complex64::new(-0.4, 1.2)] {
            let mut overlap = Complex64::new(0.0, 0.0);
            let mut term = Complex64::new(1.0, 0.0);
            for k in 0..80 {
                if k > 0 {
                    term *= alpha.conj() * amp / k as f64;
                }
                overlap += term * Complex64::from_polar(1.0, -g * t * (k * k) as f64);
            }
            let exact = overlap.norm_sqr() * (-alpha.norm_sqr() - amp * amp).exp() / PI;
            let q = q_value(alpha, a0, g, 0.0, t, 1e-14).unwrap();
            assert!((q - exact).abs() < 1e-13, "{q} {exact}");
        }
    }

    #[test]
    fn q_series_reports_truncation() {
        let err = q_value_with_limit(Complex64::new(30.0, 0.0), 30.0, 0.1, 0.1, 1.0, 1e-12, 64);
        assert!(matches!(err, Err(Error::Truncation { .. })));
    }

    proptest! {
        #[test]
        fn kerr_sign_conjugates_first_moment(
            n in 0.0f64..50.0, g in 0.0f64..2.0, damping in 0.0f64..3.0, t in 0.0f64..3.0
        ) {
            let a = first_moment(&kp(n, g, damping, t)).unwrap();
            let b = first_moment(&kp(n, -g, damping, t)).unwrap();
            prop_assert!((a - b.conj()).norm() <= 1e-12 * n.sqrt().max(1.0));
            let sa = quadrature_second_moments(&kp(n, g, damping, t)).unwrap();
            let sb = quadrature_second_moments(&kp(n, -g, damping, t)).unwrap();
            prop_assert!((sa.0 - sb.0).abs() <= 1e-12 * (1.0 + n));
            prop_assert!((sa.1 - sb.1).abs() <= 1e-12 * (1.0 + n));
        }

        #[test]
        fn envelope_and_positivity(
            n in 0.0f64..1e4, g in 0.0f64..5.0, damping in 0.0f64..5.0, t in 0.0f64..4.0
        ) {
            let k = kp(n, g, damping, t);
            let (c2, _) = cr_dr(2, g, damping, t).unwrap();
            prop_assert!(c2 >= -1e-15);
            let m = mode_moments(&k).unwrap();
            let bound = n.sqrt() * (-damping * t / 2.0).exp();
            prop_assert!(m.first.norm() <= bound * (1.0 + 1e-12) + 1e-300);
            prop_assert!(m.s_x >= 0.0 && m.s_y >= 0.0);
            prop_assert!(m.s_x + m.s_y >= m.first.norm_sqr() * (1.0 - 1e-12));
        }
    }
}
