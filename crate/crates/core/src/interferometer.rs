//! Output quadratures of the two-arm interferometer.
//!
//! After the second pulse the measured quadratures are
//!
//! ```text
//! X± = (a + a† ± b ± b†)/√2,    Y± = -i(a - a† ± b ∓ b†)/√2
//! ```
//!
//! and since the arms evolve independently between the pulses, their means
//! and variances follow from the single-arm [`ModeMoments`]:
//!
//! ```text
//! <X±>  = Re f_a ± Re f_b
//! <X±²> = -1 + s_x,a + s_x,b ± 2 Re f_a Re f_b
//! ```
//!
//! and likewise for Y with imaginary parts. The closed forms below use the
//! same rotation convention as [`crate::kerr`], which puts an overall minus
//! sign on every `<Y±>` relative to `sin(…)`.

use crate::error::{ensure, Result};
use crate::kerr::ModeMoments;
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Quadrature {
    XPlus,
    XMinus,
    YPlus,
    YMinus,
}

impl Quadrature {
    pub const ALL: [Quadrature; 4] = [
        Quadrature::XPlus,
        Quadrature::XMinus,
        Quadrature::YPlus,
        Quadrature::YMinus,
    ];

    pub fn is_x(self) -> bool {
        matches!(self, Quadrature::XPlus | Quadrature::XMinus)
    }

    pub fn is_plus(self) -> bool {
        matches!(self, Quadrature::XPlus | Quadrature::YPlus)
    }

    pub fn label(self) -> &'static str {
        match self {
            Quadrature::XPlus => "x+",
            Quadrature::XMinus => "x-",
            Quadrature::YPlus => "y+",
            Quadrature::YMinus => "y-",
        }
    }
}

impl fmt::Display for Quadrature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Quadrature {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "x+" | "xp" | "x_plus" => Ok(Quadrature::XPlus),
            "x-" | "xm" | "x_minus" => Ok(Quadrature::XMinus),
            "y+" | "yp" | "y_plus" => Ok(Quadrature::YPlus),
            "y-" | "ym" | "y_minus" => Ok(Quadrature::YMinus),
            _ => Err(crate::Error::Domain(format!("unknown quadrature `{s}`"))),
        }
    }
}

/// One number per output quadrature.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct QuadValues {
    pub x_plus: f64,
    pub x_minus: f64,
    pub y_plus: f64,
    pub y_minus: f64,
}

impl QuadValues {
    pub fn get(&self, q: Quadrature) -> f64 {
        match q {
            Quadrature::XPlus => self.x_plus,
            Quadrature::XMinus => self.x_minus,
            Quadrature::YPlus => self.y_plus,
            Quadrature::YMinus => self.y_minus,
        }
    }

    fn from_fn(mut f: impl FnMut(Quadrature) -> f64) -> Self {
        QuadValues {
            x_plus: f(Quadrature::XPlus),
            x_minus: f(Quadrature::XMinus),
            y_plus: f(Quadrature::YPlus),
            y_minus: f(Quadrature::YMinus),
        }
    }

    /// Combine per-arm values: `(arm_a ± arm_b)` for the x and y parts.
    fn combine(xa: f64, xb: f64, ya: f64, yb: f64) -> Self {
        QuadValues {
            x_plus: xa + xb,
            x_minus: xa - xb,
            y_plus: ya + yb,
            y_minus: ya - yb,
        }
    }
}

/// Means and variances of X±, Y±.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureStats {
    pub mean: QuadValues,
    pub var: QuadValues,
}

impl QuadratureStats {
    pub fn mean(&self, q: Quadrature) -> f64 {
        self.mean.get(q)
    }

    pub fn variance(&self, q: Quadrature) -> f64 {
        self.var.get(q)
    }

    pub fn second_moment(&self, q: Quadrature) -> f64 {
        self.var.get(q) + self.mean.get(q).powi(2)
    }
}

/// Output statistics from the two arms' moments at a common time.
pub fn output_stats(a: &ModeMoments, b: &ModeMoments) -> Result<QuadratureStats> {
    let scale = a.t.abs().max(b.t.abs()).max(f64::MIN_POSITIVE);
    ensure((a.t - b.t).abs() <= 1e-12 * scale, || {
        format!("arm moments at different times: {} vs {}", a.t, b.t)
    })?;
    let (fa, fb) = (a.first, b.first);
    let mean = QuadValues::combine(fa.re, fb.re, fa.im, fb.im);
    let cross_x = 2.0 * fa.re * fb.re;
    let cross_y = 2.0 * fa.im * fb.im;
    let second = QuadValues {
        x_plus: -1.0 + a.s_x + b.s_x + cross_x,
        x_minus: -1.0 + a.s_x + b.s_x - cross_x,
        y_plus: -1.0 + a.s_y + b.s_y + cross_y,
        y_minus: -1.0 + a.s_y + b.s_y - cross_y,
    };
    // Expand the variance arm by arm: (s_a - f_a²) + (s_b - f_b²) - 1 keeps
    // the O(1) result free of the O(n) cancellation in second - mean².
    let var = QuadValues::from_fn(|q| {
        let (sa, sb, ma, mb) = if q.is_x() {
            (a.s_x, b.s_x, fa.re, fb.re)
        } else {
            (a.s_y, b.s_y, fa.im, fb.im)
        };
        let direct = (sa - ma * ma) + (sb - mb * mb) - 1.0;
        debug_assert!(
            (direct - (second.get(q) - mean.get(q).powi(2))).abs()
                <= 1e-12 * (1.0 + sa.abs() + sb.abs())
        );
        direct
    });
    Ok(QuadratureStats { mean, var })
}

/// Per-arm undamped first-moment modulus and phase at Kerr rate `g`.
fn undamped_arm(n: f64, g: f64, t: f64) -> (f64, f64) {
    let s = (g * t).sin();
    // 1 - cos 2gt = 2 sin² gt
    let modulus = n.sqrt() * (-n * s * s).exp();
    let phase = g * t + 0.5 * n * (2.0 * g * t).sin();
    (modulus, phase)
}

/// `<X±>`, `<Y±>` without damping.
pub fn means_no_damping(n: f64, gamma: f64, beta: f64, t: f64) -> QuadValues {
    let (ma, pa) = undamped_arm(n, gamma, t);
    let (mb, pb) = undamped_arm(n, beta, t);
    QuadValues::combine(ma * pa.cos(), mb * pb.cos(), -ma * pa.sin(), -mb * pb.sin())
}

/// `<X±²>`, `<Y±²>` without damping.
pub fn second_moments_no_damping(n: f64, gamma: f64, beta: f64, t: f64) -> QuadValues {
    let quartic = |g: f64| {
        let s = (2.0 * g * t).sin();
        0.5 * n * (-n * s * s).exp() * (4.0 * g * t + 0.5 * n * (4.0 * g * t).sin()).cos()
    };
    let (sg, sb) = ((gamma * t).sin(), (beta * t).sin());
    // n e^{-n(2 - cos 2γt - cos 2βt)/2}
    let envelope = n * (-n * (sg * sg + sb * sb)).exp();
    let pg = gamma * t + 0.5 * n * (2.0 * gamma * t).sin();
    let pb = beta * t + 0.5 * n * (2.0 * beta * t).sin();
    let diff = envelope * (pg - pb).cos();
    let sum = envelope * (pg + pb).cos();
    let qa = quartic(gamma) + quartic(beta);
    QuadValues {
        x_plus: 1.0 + n + qa + diff + sum,
        x_minus: 1.0 + n + qa - diff - sum,
        y_plus: 1.0 + n - qa + diff - sum,
        y_minus: 1.0 + n - qa - diff + sum,
    }
}

/// Classical-interferometer means, valid for n(γt)², n(βt)² ≪ 1.
pub fn means_short_time(n: f64, gamma: f64, beta: f64, t: f64) -> QuadValues {
    let r = n.sqrt();
    let (a, b) = (n * gamma * t, n * beta * t);
    QuadValues::combine(r * a.cos(), r * b.cos(), -r * a.sin(), -r * b.sin())
}

/// Means in the strong-damping regime, where each arm reduces to
/// `√n e^{-Γt/2} exp[-i (ng/Γ)(1 - e^{-Γt})]`. Quadrature variances there sit
/// at the coherent-state value 1.
pub fn means_strong_damping(
    n: f64,
    gamma: f64,
    beta: f64,
    damping_a: f64,
    damping_b: f64,
    t: f64,
) -> Result<QuadValues> {
    ensure(damping_a > 0.0 && damping_b > 0.0, || {
        "strong-damping closed form needs Gamma_a, Gamma_b > 0".to_string()
    })?;
    let arm = |g: f64, damping: f64| {
        let modulus = n.sqrt() * (-0.5 * damping * t).exp();
        let phase = n * g / damping * -(-damping * t).exp_m1();
        (modulus * phase.cos(), -modulus * phase.sin())
    };
    let (xa, ya) = arm(gamma, damping_a);
    let (xb, yb) = arm(beta, damping_b);
    Ok(QuadValues::combine(xa, xb, ya, yb))
}

/// Coherent-state variances used with the strong-damping and short-time
/// closed forms.
pub const UNIT_VARIANCES: QuadValues = QuadValues {
    x_plus: 1.0,
    x_minus: 1.0,
    y_plus: 1.0,
    y_minus: 1.0,
};
