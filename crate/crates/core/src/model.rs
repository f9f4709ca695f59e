//! Device parameters, the reduced interferometer model, and regime checks.
//!
//! A pair of flexural resonators with Duffing coefficients `chi_a`, `chi_b`
//! and a pulsed capacitive beamsplitter reduces, in the rotating frame, to
//!
//! ```text
//! H = ħγ (a†a)² + ħβ (b†b)² + ħκ P(t) (a†b + a b†)
//! ```
//!
//! with zero-temperature amplitude damping at `Γ = ω/Q` on both modes.
//! Pulses are instantaneous events; `pulse_duration = π/4κ` is kept only so
//! its validity can be checked.

use crate::error::{ensure, Result};
use std::f64::consts::PI;

/// Reduced Planck constant (CODATA), J·s.
pub const HBAR: f64 = 1.054_571_817e-34;

/// Relative mismatch between a supplied χ and the one implied by the
/// critical amplitude above which a warning is raised.
pub const CHI_CONSISTENCY_TOL: f64 = 0.10;

/// Duffing nonlinearity of one resonator, given directly or through the
/// bistability onset amplitude.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Nonlinearity {
    /// Duffing coefficient χ in m⁻².
    pub chi: Option<f64>,
    /// Critical (bistability) amplitude a_c in meters.
    pub critical_amplitude: Option<f64>,
}

impl Nonlinearity {
    pub fn from_chi(chi: f64) -> Self {
        Nonlinearity {
            chi: Some(chi),
            critical_amplitude: None,
        }
    }

    pub fn from_critical_amplitude(a_c: f64) -> Self {
        Nonlinearity {
            chi: None,
            critical_amplitude: Some(a_c),
        }
    }
}

/// Outcome of resolving a [`Nonlinearity`] to a single χ.
#[derive(Debug, Clone, PartialEq)]
pub struct ResolvedChi {
    pub chi: f64,
    pub warning: Option<String>,
}

/// Device-level description of the resonator pair (SI units).
#[derive(Debug, Clone, PartialEq)]
pub struct PhysicalParams {
    pub length: f64,
    pub width: f64,
    pub mass: f64,
    /// Angular frequency ω in rad/s.
    pub omega: f64,
    /// Lateral gap d in meters.
    pub gap: f64,
    /// Geometry factor f of the self-capacitance terms. Only the cross term
    /// x_a x_b survives in the reduced model, so this is stored but unused.
    pub geometry_factor: f64,
    /// Equilibrium capacitance C0 in farads.
    pub c0: f64,
    /// Bias voltage V0 in volts.
    pub v0: f64,
    pub q_factor: f64,
    pub resonator_a: Nonlinearity,
    pub resonator_b: Nonlinearity,
}

impl PhysicalParams {
    /// Parameter set of a 15 MHz, 10⁻¹⁷ kg doubly-clamped beam pair with
    /// χ = 4×10¹³ m⁻² on resonator a and a linear resonator b.
    pub fn reference_device() -> Self {
        PhysicalParams {
            length: 2e-6,
            width: 40e-9,
            mass: 1e-17,
            omega: 9.4e7,
            gap: 120e-9,
            geometry_factor: 1.0,
            c0: 10e-18,
            v0: 1.0,
            q_factor: 20_000.0,
            resonator_a: Nonlinearity {
                chi: Some(4e13),
                critical_amplitude: Some(0.7e-9),
            },
            resonator_b: Nonlinearity::from_chi(0.0),
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("length", self.length),
            ("width", self.width),
            ("mass", self.mass),
            ("omega", self.omega),
            ("gap", self.gap),
            ("geometry_factor", self.geometry_factor),
            ("c0", self.c0),
            ("v0", self.v0),
        ] {
            ensure(v.is_finite() && v > 0.0, || {
                format!("{name} must be finite and > 0, got {v}")
            })?;
        }
        ensure(self.q_factor.is_finite() && self.q_factor >= 1.0, || {
            format!("q_factor must be >= 1, got {}", self.q_factor)
        })?;
        Ok(())
    }

    pub fn ground_state_half_width(&self) -> f64 {
        (HBAR / (2.0 * self.mass * self.omega)).sqrt()
    }

    pub fn damping_rate(&self) -> f64 {
        self.omega / self.q_factor
    }

    pub fn beamsplitter_strength(&self) -> f64 {
        self.c0 * self.v0 * self.v0 / (2.0 * self.mass * self.omega * self.gap * self.gap)
    }

    pub fn resolve_chi(&self, which: Resonator) -> Result<ResolvedChi> {
        let nl = match which {
            Resonator::A => self.resonator_a,
            Resonator::B => self.resonator_b,
        };
        resolve_chi(nl, self.q_factor, which)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Resonator {
    A,
    B,
}

impl std::fmt::Display for Resonator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Resonator::A => "a",
            Resonator::B => "b",
        })
    }
}

fn resolve_chi(nl: Nonlinearity, q_factor: f64, which: Resonator) -> Result<ResolvedChi> {
    if let Some(chi) = nl.chi {
        ensure(chi.is_finite() && chi >= 0.0, || {
            format!("chi_{which} must be finite and >= 0, got {chi}")
        })?;
    }
    let from_ac = nl
        .critical_amplitude
        .map(|a_c| chi_from_critical_amplitude(a_c, q_factor))
        .transpose()?;
    match (nl.chi, from_ac) {
        (Some(chi), Some(implied)) => {
            let scale = chi.abs().max(implied.abs());
            let warning = ((chi - implied).abs() > CHI_CONSISTENCY_TOL * scale).then(|| {
                format!(
                    "resonator {which}: chi = {chi:.4e} m^-2 disagrees with 2*sqrt(3)/(9 a_c^2 Q) = {implied:.4e} m^-2 by more than {:.0}%; using chi",
                    CHI_CONSISTENCY_TOL * 100.0
                )
            });
            Ok(ResolvedChi { chi, warning })
        }
        (Some(chi), None) | (None, Some(chi)) => Ok(ResolvedChi { chi, warning: None }),
        (None, None) => Err(crate::Error::MissingKey(format!(
            "chi_{which} or critical_amplitude_{which}"
        ))),
    }
}

/// Duffing coefficient implied by the critical amplitude of forced
/// bistability: χ = 2√3 / (9 a_c² Q).
pub fn chi_from_critical_amplitude(a_c: f64, q_factor: f64) -> Result<f64> {
    ensure(a_c.is_finite() && a_c > 0.0, || {
        format!("critical amplitude must be > 0, got {a_c}")
    })?;
    ensure(q_factor.is_finite() && q_factor > 0.0, || {
        format!("quality factor must be > 0, got {q_factor}")
    })?;
    Ok(2.0 * 3f64.sqrt() / (9.0 * a_c * a_c * q_factor))
}

/// Reduced parameters of the two-mode Kerr interferometer.
///
/// Rates are in s⁻¹, `t` and `pulse_duration` in seconds, `delta_x` in meters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    /// Kerr coefficient of mode a (the estimated parameter).
    pub gamma: f64,
    /// Kerr coefficient of mode b.
    pub beta: f64,
    pub damping_a: f64,
    pub damping_b: f64,
    pub kappa: f64,
    pub delta_x: f64,
    /// Mean phonon number of the input coherent state, n = α₀².
    pub n: f64,
    /// Free evolution time between the two pulses.
    pub t: f64,
    pub pulse_duration: f64,
}

impl ModelParams {
    /// Reduced parameters with no device attached (κ and Δx unset).
    pub fn reduced(n: f64, gamma: f64, beta: f64, damping_a: f64, damping_b: f64, t: f64) -> Self {
        ModelParams {
            gamma,
            beta,
            damping_a,
            damping_b,
            kappa: 0.0,
            delta_x: 0.0,
            n,
            t,
            pulse_duration: 0.0,
        }
    }

    pub fn with_kappa(mut self, kappa: f64) -> Self {
        self.kappa = kappa;
        self.pulse_duration = pulse_duration(kappa);
        self
    }

    pub fn gamma_t(&self) -> f64 {
        self.gamma * self.t
    }

    /// Nonlinear phase shift nγt of mode a.
    pub fn phase_shift(&self) -> f64 {
        self.n * self.gamma * self.t
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("n", self.n),
            ("t", self.t),
            ("Gamma_a", self.damping_a),
            ("Gamma_b", self.damping_b),
            ("kappa", self.kappa),
        ] {
            ensure(v.is_finite() && v >= 0.0, || {
                format!("{name} must be finite and >= 0, got {v}")
            })?;
        }
        ensure(self.gamma.is_finite() && self.beta.is_finite(), || {
            "Kerr coefficients must be finite".to_string()
        })?;
        Ok(())
    }
}

fn pulse_duration(kappa: f64) -> f64 {
    if kappa > 0.0 {
        PI / (4.0 * kappa)
    } else {
        0.0
    }
}

/// Reduced parameters plus any χ-consistency warnings raised on the way.
#[derive(Debug, Clone, PartialEq)]
pub struct Derived {
    pub params: ModelParams,
    pub chi_a: f64,
    pub chi_b: f64,
    pub warnings: Vec<String>,
}

/// Maps the device description onto the reduced model at operating point
/// (n, t): Δx = √(ħ/2mω), γ = ¾ωχΔx², κ = C0V0²/(2mωd²), Γ = ω/Q.
pub fn derive_model_params(p: &PhysicalParams, n: f64, t: f64) -> Result<Derived> {
    p.validate()?;
    ensure(n.is_finite() && n >= 0.0, || format!("n must be >= 0, got {n}"))?;
    ensure(t.is_finite() && t >= 0.0, || format!("t must be >= 0, got {t}"))?;
    let a = p.resolve_chi(Resonator::A)?;
    let b = p.resolve_chi(Resonator::B)?;
    let dx = p.ground_state_half_width();
    let kerr = |chi: f64| 0.75 * p.omega * chi * dx * dx;
    let damping = p.damping_rate();
    let params = ModelParams {
        gamma: kerr(a.chi),
        beta: kerr(b.chi),
        damping_a: damping,
        damping_b: damping,
        kappa: 0.0,
        delta_x: dx,
        n,
        t,
        pulse_duration: 0.0,
    }
    .with_kappa(p.beamsplitter_strength());
    Ok(Derived {
        params,
        chi_a: a.chi,
        chi_b: b.chi,
        warnings: a.warning.into_iter().chain(b.warning).collect(),
    })
}

/// Numeric reading of "≪" and "≫".
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimeThresholds {
    /// `x ≪ y` holds when x/y is below this.
    pub much_less: f64,
    /// `x ≫ y` holds when x/y is above this.
    pub much_greater: f64,
}

impl Default for RegimeThresholds {
    fn default() -> Self {
        RegimeThresholds {
            much_less: 0.1,
            much_greater: 10.0,
        }
    }
}

/// A single inequality with the value it was judged on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Margin {
    pub name: &'static str,
    pub value: f64,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub valid: bool,
    pub margins: Vec<Margin>,
}

impl Check {
    fn new(margins: Vec<Margin>) -> Self {
        Check {
            valid: margins.iter().all(|m| m.ok),
            margins,
        }
    }
}

/// Which closed-form approximations apply at a parameter point.
#[derive(Debug, Clone, PartialEq)]
pub struct RegimeReport {
    /// n(γt)², n(βt)² ≪ 1.
    pub short_time: Check,
    /// Γ_a/(γ√n), Γ_b/(β√n) ≫ 1 and γt, βt, Γ_a t/n, Γ_b t/n ≪ 1.
    pub strong_damping: Check,
    /// κ/ω ≪ 1 and κt ≫ 1.
    pub pulse_assumptions: Check,
}

fn ratio(num: f64, den: f64) -> f64 {
    if den == 0.0 {
        if num == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        num / den
    }
}

pub fn classify_regime(mp: &ModelParams, omega: f64, th: &RegimeThresholds) -> RegimeReport {
    let less = |name, value: f64| Margin {
        name,
        value,
        ok: value < th.much_less,
    };
    let greater = |name, value: f64| Margin {
        name,
        value,
        ok: value > th.much_greater,
    };
    let n = mp.n;
    let sqrt_n = n.sqrt();

    let short_time = Check::new(vec![
        less("n(gamma t)^2", n * mp.gamma_t().powi(2)),
        less("n(beta t)^2", n * (mp.beta * mp.t).powi(2)),
    ]);

    // A mode with zero damping never satisfies Γ/γ ≫ √n, even when its
    // Kerr coefficient vanishes.
    let damping_ratio = |name, damping: f64, kerr: f64| {
        let value = if damping == 0.0 {
            0.0
        } else {
            ratio(damping, kerr.abs() * sqrt_n)
        };
        greater(name, value)
    };
    let strong_damping = Check::new(vec![
        damping_ratio("Gamma_a/(gamma sqrt n)", mp.damping_a, mp.gamma),
        damping_ratio("Gamma_b/(beta sqrt n)", mp.damping_b, mp.beta),
        less("gamma t", mp.gamma_t().abs()),
        less("beta t", (mp.beta * mp.t).abs()),
        less("Gamma_a t/n", ratio(mp.damping_a * mp.t, n)),
        less("Gamma_b t/n", ratio(mp.damping_b * mp.t, n)),
    ]);

    let pulse_assumptions = Check::new(vec![
        less("kappa/omega", ratio(mp.kappa, omega)),
        greater("kappa t", mp.kappa * mp.t),
    ]);

    RegimeReport {
        short_time,
        strong_damping,
        pulse_assumptions,
    }
}
