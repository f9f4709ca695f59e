use super::Context;
use crate::error::CliResult;
use crate::output::{num, Csv};
use kerrmetro::{classify_regime, derive_model_params, RegimeThresholds};

pub fn params(ctx: &Context) -> CliResult<()> {
    ctx.emit_warnings();
    let device = derive_model_params(&ctx.config.device, ctx.base.n, ctx.base.t)?;
    let d = &device.params;
    let mp = &ctx.base;
    let mut csv = Csv::new("params", &ctx.provenance());
    csv.row(&["quantity", "value", "unit"]);
    let rows: [(&str, f64, &str); 16] = [
        ("delta_x", d.delta_x, "m"),
        ("chi_a", device.chi_a, "m^-2"),
        ("chi_b", device.chi_b, "m^-2"),
        ("gamma_device", d.gamma, "s^-1"),
        ("beta_device", d.beta, "s^-1"),
        ("kappa", d.kappa, "s^-1"),
        ("pulse_duration", d.pulse_duration, "s"),
        ("Gamma_device", d.damping_a, "s^-1"),
        ("n", mp.n, "1"),
        ("t", mp.t, "s"),
        ("gamma", mp.gamma, "s^-1"),
        ("beta", mp.beta, "s^-1"),
        ("Gamma_a", mp.damping_a, "s^-1"),
        ("Gamma_b", mp.damping_b, "s^-1"),
        ("gamma_t", mp.gamma_t(), "1"),
        ("phase_shift", mp.phase_shift(), "rad"),
    ];
    for (name, value, unit) in rows {
        csv.row(&[name.to_string(), num(value), unit.to_string()]);
    }
    let report = classify_regime(mp, ctx.omega, &RegimeThresholds::default());
    csv.comment("regime checks");
    csv.row(&["regime", "condition", "value", "ok"]);
    for (name, check) in [
        ("short_time", &report.short_time),
        ("strong_damping", &report.strong_damping),
        ("pulse", &report.pulse_assumptions),
    ] {
        for m in &check.margins {
            csv.row(&[name.to_string(), m.name.to_string(), num(m.value), m.ok.to_string()]);
        }
        csv.row(&[name.to_string(), "all".to_string(), String::new(), check.valid.to_string()]);
    }
    csv.emit(ctx.out.as_deref())?;
    Ok(())
}
