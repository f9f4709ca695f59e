//! Truncated Fock-space master-equation reference.
//!
//! Evolves one mode under
//! `dρ/dt = -ig[(a†a)², ρ] + (Γ/2)(2aρa† - a†aρ - ρa†a)` with no use of the
//! closed forms. Two independent paths are provided: fixed-step RK4 with
//! step halving, and an exact solution along each diagonal of ρ (the Kerr
//! term is diagonal in the number basis and the dissipator only couples
//! ρ_{j,k} to ρ_{j+1,k+1}, so each diagonal is a small linear system with an
//! upper-bidiagonal generator).

use crate::error::{ensure, Error, Result};
use crate::kerr::ModeMoments;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use std::f64::consts::SQRT_2;
use std::io::Write;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Dense density matrix in the number basis |0⟩…|dim-1⟩, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl DensityMatrix {
    pub fn zeros(dim: usize) -> Result<Self> {
        ensure(dim >= 2, || format!("cutoff must be >= 2, got {dim}"))?;
        Ok(DensityMatrix {
            dim,
            data: vec![ZERO; dim * dim],
        })
    }

    pub fn vacuum(dim: usize) -> Result<Self> {
        let mut rho = Self::zeros(dim)?;
        rho.data[0] = Complex64::new(1.0, 0.0);
        Ok(rho)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, j: usize, k: usize) -> Complex64 {
        self.data[j * self.dim + k]
    }

    pub fn set(&mut self, j: usize, k: usize, v: Complex64) {
        self.data[j * self.dim + k] = v;
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|j| self.get(j, j)).sum()
    }

    pub fn populations(&self) -> Vec<f64> {
        (0..self.dim).map(|j| self.get(j, j).re).collect()
    }

    /// max |ρ_jk - conj ρ_kj|.
    pub fn hermiticity_error(&self) -> f64 {
        let mut worst = 0.0f64;
        for j in 0..self.dim {
            for k in j..self.dim {
                worst = worst.max((self.get(j, k) - self.get(k, j).conj()).norm());
            }
        }
        worst
    }

    /// Most negative eigenvalue (0 if none), for on-demand positivity checks.
    pub fn min_eigenvalue(&self) -> f64 {
        let m = DMatrix::from_fn(self.dim, self.dim, |j, k| {
            0.5 * (self.get(j, k) + self.get(k, j).conj())
        });
        m.symmetric_eigenvalues().iter().copied().fold(0.0, f64::min)
    }

    /// ⟨a⟩ = Σ √(j+1) ρ_{j+1,j}.
    pub fn expect_a(&self) -> Complex64 {
        (0..self.dim - 1)
            .map(|j| ((j + 1) as f64).sqrt() * self.get(j + 1, j))
            .sum()
    }

    /// ⟨a²⟩ = Σ √((j+1)(j+2)) ρ_{j+2,j}.
    pub fn expect_a2(&self) -> Complex64 {
        (0..self.dim.saturating_sub(2))
            .map(|j| (((j + 1) * (j + 2)) as f64).sqrt() * self.get(j + 2, j))
            .sum()
    }

    /// ⟨a†a⟩.
    pub fn expect_number(&self) -> f64 {
        (0..self.dim).map(|j| j as f64 * self.get(j, j).re).sum()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleConfig {
    /// Fixed cutoff; `None` uses [`choose_cutoff`].
    pub cutoff: Option<usize>,
    /// Largest allowed population outside / at the top of the basis.
    pub tail_tol: f64,
    /// Step halving stops once successive results differ by less than this
    /// (max elementwise).
    pub step_tol: f64,
    /// Allowed |tr ρ - 1| after evolution.
    pub trace_tol: f64,
    pub max_halvings: u32,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            cutoff: None,
            tail_tol: 1e-12,
            step_tol: 1e-9,
            trace_tol: 1e-9,
            max_halvings: 12,
        }
    }
}

impl OracleConfig {
    pub fn validate(&self) -> Result<()> {
        if let Some(c) = self.cutoff {
            ensure(c >= 2, || format!("cutoff must be >= 2, got {c}"))?;
        }
        for (name, v) in [
            ("tail_tol", self.tail_tol),
            ("step_tol", self.step_tol),
            ("trace_tol", self.trace_tol),
        ] {
            ensure(v > 0.0 && v.is_finite(), || format!("{name} must be > 0"))?;
        }
        Ok(())
    }

    pub fn cutoff_for(&self, amp: f64) -> usize {
        self.cutoff
            .unwrap_or_else(|| choose_cutoff(amp, self.tail_tol))
    }
}

/// Poisson weights e^{-λ} λ^j / j! for j < len, built by recurrence.
fn poisson_weights(mean: f64, len: usize) -> Vec<f64> {
    let mut w = Vec::with_capacity(len);
    let mut ln_p = -mean;
    for j in 0..len {
        if j > 0 {
            ln_p += if mean > 0.0 {
                mean.ln() - (j as f64).ln()
            } else {
                f64::NEG_INFINITY
            };
        }
        w.push(ln_p.exp());
    }
    w
}

/// Poisson mass at or beyond `from`, summed directly.
fn poisson_tail(mean: f64, from: usize) -> f64 {
    if mean == 0.0 {
        return if from == 0 { 1.0 } else { 0.0 };
    }
    let ln_mean = mean.ln();
    let mut ln_p = -mean;
    for j in 1..=from {
        ln_p += ln_mean - (j as f64).ln();
    }
    let mut sum = 0.0;
    let mut j = from;
    loop {
        let p = ln_p.exp();
        sum += p;
        j += 1;
        ln_p += ln_mean - (j as f64).ln();
        if (j as f64) > mean && p < 1e-18 * sum.max(f64::MIN_POSITIVE) {
            break;
        }
        if p == 0.0 && (j as f64) > mean {
            break;
        }
    }
    sum
}

/// Smallest N whose Poisson tail P(k ≥ N) for mean |amp|² is below
/// `tail_tol`, plus 20% headroom, at least 2.
pub fn choose_cutoff(amp: f64, tail_tol: f64) -> usize {
    let mean = amp * amp;
    let mut n = 1usize;
    while poisson_tail(mean, n) >= tail_tol {
        n += 1;
    }
    ((n as f64 * 1.2).ceil() as usize).max(2)
}

/// |amp⟩⟨amp| truncated to `cutoff` levels and renormalized. Fails with a
/// suggested cutoff when the discarded population exceeds `tail_tol`.
pub fn coherent_density(amp: Complex64, cutoff: usize, tail_tol: f64) -> Result<DensityMatrix> {
    let mut rho = DensityMatrix::zeros(cutoff)?;
    let mean = amp.norm_sqr();
    let tail = poisson_tail(mean, cutoff);
    if tail > tail_tol {
        return Err(Error::Cutoff {
            cutoff,
            population: tail,
            tail_tol,
            suggested: choose_cutoff(amp.norm(), tail_tol),
        });
    }
    let phase = if mean > 0.0 { amp / amp.norm() } else { Complex64::new(1.0, 0.0) };
    let weights = poisson_weights(mean, cutoff);
    let norm: f64 = weights.iter().sum();
    let c: Vec<Complex64> = weights
        .iter()
        .enumerate()
        .map(|(j, w)| (w / norm).sqrt() * phase.powu(j as u32))
        .collect();
    for j in 0..cutoff {
        for k in 0..cutoff {
            rho.set(j, k, c[j] * c[k].conj());
        }
    }
    Ok(rho)
}

fn check_inputs(rho: &DensityMatrix, g: f64, damping: f64, t: f64, cfg: &OracleConfig) -> Result<()> {
    cfg.validate()?;
    ensure(g.is_finite(), || format!("g must be finite, got {g}"))?;
    ensure(damping >= 0.0 && damping.is_finite(), || {
        format!("Gamma must be >= 0, got {damping}")
    })?;
    ensure(t >= 0.0 && t.is_finite(), || format!("t must be >= 0, got {t}"))?;
    check_top_level(rho, cfg.tail_tol)
}

fn check_top_level(rho: &DensityMatrix, tail_tol: f64) -> Result<()> {
    let top = rho.get(rho.dim - 1, rho.dim - 1).re;
    if top > tail_tol {
        return Err(Error::Cutoff {
            cutoff: rho.dim,
            population: top,
            tail_tol,
            suggested: 2 * rho.dim,
        });
    }
    Ok(())
}

fn check_trace(rho: &DensityMatrix, cfg: &OracleConfig) -> Result<()> {
    let drift = (rho.trace() - 1.0).norm();
    if drift > cfg.trace_tol {
        return Err(Error::Integrator(format!(
            "trace drift {drift:.3e} exceeds {:.1e}",
            cfg.trace_tol
        )));
    }
    Ok(())
}

/// Per-element coefficients of dρ/dt: ρ̇_jk = diag_jk ρ_jk + feed_jk ρ_{j+1,k+1}.
struct Generator {
    dim: usize,
    diag: Vec<Complex64>,
    feed: Vec<f64>,
}

impl Generator {
    fn new(dim: usize, g: f64, damping: f64) -> Self {
        let mut diag = Vec::with_capacity(dim * dim);
        let mut feed = Vec::with_capacity(dim * dim);
        for j in 0..dim {
            for k in 0..dim {
                let (jf, kf) = (j as f64, k as f64);
                diag.push(Complex64::new(-0.5 * damping * (jf + kf), -g * (jf * jf - kf * kf)));
                feed.push(if j + 1 < dim && k + 1 < dim {
                    damping * ((jf + 1.0) * (kf + 1.0)).sqrt()
                } else {
                    0.0
                });
            }
        }
        Generator { dim, diag, feed }
    }

    fn apply(&self, rho: &[Complex64], out: &mut [Complex64]) {
        let shift = self.dim + 1;
        let len = rho.len();
        for i in 0..len {
            let mut v = self.diag[i] * rho[i];
            if i + shift < len {
                v += self.feed[i] * rho[i + shift];
            }
            out[i] = v;
        }
    }
}

fn rk4_run(
    rho0: &DensityMatrix,
    g: f64,
    damping: f64,
    t: f64,
    steps: usize,
    tail_tol: f64,
) -> Result<DensityMatrix> {
    let dim = rho0.dim;
    let gen = Generator::new(dim, g, damping);
    let h = t / steps as f64;
    let mut y = rho0.data.clone();
    let len = y.len();
    let (mut k1, mut k2, mut k3, mut k4, mut tmp) = (
        vec![ZERO; len],
        vec![ZERO; len],
        vec![ZERO; len],
        vec![ZERO; len],
        vec![ZERO; len],
    );
    let top = (dim - 1) * dim + dim - 1;
    for _ in 0..steps {
        gen.apply(&y, &mut k1);
        for i in 0..len {
            tmp[i] = y[i] + 0.5 * h * k1[i];
        }
        gen.apply(&tmp, &mut k2);
        for i in 0..len {
            tmp[i] = y[i] + 0.5 * h * k2[i];
        }
        gen.apply(&tmp, &mut k3);
        for i in 0..len {
            tmp[i] = y[i] + h * k3[i];
        }
        gen.apply(&tmp, &mut k4);
        for i in 0..len {
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        if y[top].re > tail_tol {
            return Err(Error::Cutoff {
                cutoff: dim,
                population: y[top].re,
                tail_tol,
                suggested: 2 * dim,
            });
        }
    }
    Ok(DensityMatrix { dim, data: y })
}

/// Fixed-step RK4 with `Γh ≤ 10⁻²` and `|g|N²h ≤ 10⁻²`, halving the step
/// until successive results agree to `cfg.step_tol`.
pub fn evolve_lindblad(
    rho: &DensityMatrix,
    g: f64,
    damping: f64,
    t: f64,
    cfg: &OracleConfig,
) -> Result<DensityMatrix> {
    check_inputs(rho, g, damping, t, cfg)?;
    if t == 0.0 || (g == 0.0 && damping == 0.0) {
        return Ok(rho.clone());
    }
    let n2 = (rho.dim * rho.dim) as f64;
    let rate = damping.max(g.abs() * n2);
    let mut steps = ((t * rate / 1e-2).ceil() as usize).max(1);
    let mut prev = rk4_run(rho, g, damping, t, steps, cfg.tail_tol)?;
    for _ in 0..cfg.max_halvings {
        steps *= 2;
        let next = rk4_run(rho, g, damping, t, steps, cfg.tail_tol)?;
        let change = next.max_abs_diff(&prev);
        prev = next;
        if change < cfg.step_tol {
            check_trace(&prev, cfg)?;
            return Ok(prev);
        }
    }
    Err(Error::Integrator(format!(
        "no step convergence after {} halvings",
        cfg.max_halvings
    )))
}

/// Exact solution along each diagonal ρ_{m+p, m+q} (one of p, q zero):
/// the generator has diagonal `-ig((m+p)² - (m+q)²) - Γ(2m+p+q)/2` and
/// superdiagonal `Γ√((m+p+1)(m+q+1))`; its matrix exponential is taken
/// directly.
pub fn evolve_exact(
    rho: &DensityMatrix,
    g: f64,
    damping: f64,
    t: f64,
    cfg: &OracleConfig,
) -> Result<DensityMatrix> {
    check_inputs(rho, g, damping, t, cfg)?;
    let dim = rho.dim;
    let mut out = DensityMatrix::zeros(dim)?;
    for offset in 0..dim {
        for (p, q) in [(offset, 0), (0, offset)] {
            let len = dim - offset;
            let gen = DMatrix::from_fn(len, len, |r, c| {
                let (rp, rq) = ((r + p) as f64, (r + q) as f64);
                if r == c {
                    Complex64::new(-0.5 * damping * (rp + rq), -g * (rp * rp - rq * rq)) * t
                } else if c == r + 1 {
                    Complex64::new(damping * ((rp + 1.0) * (rq + 1.0)).sqrt() * t, 0.0)
                } else {
                    ZERO
                }
            });
            let x0 = DVector::from_fn(len, |m, _| rho.get(m + p, m + q));
            let x = gen.exp() * x0;
            for m in 0..len {
                out.set(m + p, m + q, x[m]);
            }
            if offset == 0 {
                break;
            }
        }
    }
    check_top_level(&out, cfg.tail_tol)?;
    check_trace(&out, cfg)?;
    Ok(out)
}

/// Quadrature moments in the conventions of [`ModeMoments`]:
/// `first = √2⟨a⟩`, `s_x = ⟨a†a⟩ + Re⟨a²⟩ + 1`, `s_y = ⟨a†a⟩ - Re⟨a²⟩ + 1`.
pub fn mode_moments_from_density(rho: &DensityMatrix, n_total: f64, t: f64) -> ModeMoments {
    let number = rho.expect_number();
    let a2 = rho.expect_a2().re;
    ModeMoments {
        first: SQRT_2 * rho.expect_a(),
        s_x: number + a2 + 1.0,
        s_y: number - a2 + 1.0,
        n_total,
        t,
    }
}

/// Which oracle path to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OraclePath {
    Stepped,
    Exact,
}

/// One arm started in the coherent state √(n/2) and evolved for `t`.
pub fn oracle_mode_moments(
    n: f64,
    g: f64,
    damping: f64,
    t: f64,
    path: OraclePath,
    cfg: &OracleConfig,
) -> Result<ModeMoments> {
    ensure(n >= 0.0 && n.is_finite(), || format!("n must be >= 0, got {n}"))?;
    let amp = (0.5 * n).sqrt();
    let rho0 = coherent_density(Complex64::new(amp, 0.0), cfg.cutoff_for(amp), cfg.tail_tol)?;
    let rho = match path {
        OraclePath::Stepped => evolve_lindblad(&rho0, g, damping, t, cfg)?,
        OraclePath::Exact => evolve_exact(&rho0, g, damping, t, cfg)?,
    };
    Ok(mode_moments_from_density(&rho, n, t))
}

/// Debug dump: moment comment lines followed by `k,population` rows.
pub fn write_diagonal_csv<W: Write>(
    mut w: W,
    rho: &DensityMatrix,
    moments: &ModeMoments,
) -> std::io::Result<()> {
    writeln!(
        w,
        "# first_re={:.16e} first_im={:.16e} s_x={:.16e} s_y={:.16e} trace={:.16e}",
        moments.first.re,
        moments.first.im,
        moments.s_x,
        moments.s_y,
        rho.trace().re
    )?;
    writeln!(w, "k,population")?;
    for (k, p) in rho.populations().iter().enumerate() {
        writeln!(w, "{k},{p:.16e}")?;
    }
    Ok(())
}
