use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::process::{Command, Output};

fn kerrmetro(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kerrmetro"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

/// Data rows (no comments) of the first CSV table, as header + records.
fn table(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = text.lines().skip_while(|l| l.starts_with('#'));
    let header: Vec<String> = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines
        .take_while(|l| !l.starts_with('#'))
        .map(|l| l.split(',').map(String::from).collect())
        .collect();
    (header, rows)
}

/// Text after the comment line containing `marker`.
fn section<'a>(text: &'a str, marker: &str) -> &'a str {
    let start = text.find(marker).unwrap();
    let rest = &text[start..];
    &rest[rest.find('\n').unwrap() + 1..]
}

fn column(header: &[String], name: &str) -> usize {
    header.iter().position(|h| h == name).unwrap()
}

fn float(s: &str) -> f64 {
    s.parse().unwrap()
}

const DEVICE: &str = "\
length = 2e-6
width = 40e-9
mass = 1e-17
omega = 9.4e7
gap = 120e-9
c0 = 10e-18
v0 = 1
q_factor = 20000
chi_a = 4e13
chi_b = 0
n = 1e7
t = 1e-3
";

#[test]
fn params_reports_device_values() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("device.conf");
    std::fs::write(&path, DEVICE).unwrap();
    let o = kerrmetro(&["params", "--config", path.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let (h, rows) = table(&stdout(&o));
    let value = |name: &str| {
        float(&rows.iter().find(|r| r[0] == name).unwrap()[column(&h, "value")])
    };
    let within = |got: f64, want: f64| (got - want).abs() / want < 0.05;
    assert!(within(value("delta_x"), 2.4e-13));
    assert!(within(value("gamma"), 1.6e-4));
    assert!(within(value("kappa"), 3.7e5));
    assert!(within(value("Gamma_a"), 4.7e3));
}

#[test]
fn params_missing_key_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("device.conf");
    std::fs::write(&path, DEVICE.replace("mass = 1e-17\n", "")).unwrap();
    let o = kerrmetro(&["params", "--config", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("mass"));
}

#[test]
fn params_consistent_chi_and_amplitude_warn_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("device.conf");
    std::fs::write(&path, format!("{DEVICE}critical_amplitude_a = 0.7e-9\n")).unwrap();
    let o = kerrmetro(&["params", "--config", path.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(!stderr(&o).contains("warning"), "{}", stderr(&o));
}

#[test]
fn moments_degenerate_sweep_has_two_rows() {
    let o = kerrmetro(&["moments", "--sweep", "gamma:0:1e-4:2:lin", "--quad", "x+"]);
    assert!(o.status.success());
    let (h, rows) = table(&stdout(&o));
    assert_eq!(
        h.join(","),
        "n,gamma,beta,Gamma_a,Gamma_b,t,quad,mean,variance,regime"
    );
    assert_eq!(rows.len(), 2);
}

#[test]
fn moments_fringe_period_is_two_pi() {
    // n = 1e7, t = 1e-3, Γ = 0; nγt over [0, 6π]
    let max = 3.0 * TAU / 1e4;
    let sweep = format!("gamma:0:{max:e}:1201:lin");
    let o = kerrmetro(&[
        "moments", "--set", "Gamma_a=0", "--set", "Gamma_b=0", "--sweep", &sweep, "--quad", "x+",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let (h, rows) = table(&stdout(&o));
    let (g, m) = (column(&h, "gamma"), column(&h, "mean"));
    let pts: Vec<(f64, f64)> = rows.iter().map(|r| (float(&r[g]) * 1e4, float(&r[m]))).collect();
    let maxima: Vec<f64> = pts
        .windows(3)
        .filter(|w| w[1].1 > w[0].1 && w[1].1 >= w[2].1)
        .map(|w| w[1].0)
        .collect();
    assert_eq!(maxima.len(), 2, "{maxima:?}");
    assert!((maxima[1] - maxima[0] - TAU).abs() < 0.05);
}

#[test]
fn moments_heavy_damping_gives_coherent_variances() {
    // Γ/γ = 10⁴√n
    let o = kerrmetro(&[
        "moments", "--set", "n=10", "--set", "gamma=0.01", "--set", "t=1",
        "--set", "Gamma_a=316.22776601683796", "--set", "Gamma_b=316.22776601683796",
        "--regime", "general",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let (h, rows) = table(&stdout(&o));
    let v = column(&h, "variance");
    assert_eq!(rows.len(), 4);
    for r in rows {
        assert!((float(&r[v]) - 1.0).abs() < 1e-3);
    }
}

#[test]
fn precision_minima_are_displaced_by_quarter_period() {
    let max = TAU / 1e4;
    let sweep = format!("gamma:0:{max:e}:801:lin");
    let o = kerrmetro(&[
        "precision", "--set", "Gamma_a=0", "--set", "Gamma_b=0", "--sweep", &sweep, "--quad", "x+,y+",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let (h, rows) = table(&stdout(&o));
    let (q, g, d) = (column(&h, "quad"), column(&h, "gamma"), column(&h, "delta"));
    let minima = |label: &str| -> Vec<f64> {
        let s: Vec<(f64, f64)> = rows
            .iter()
            .filter(|r| r[q] == label)
            .map(|r| (float(&r[g]) * 1e4, float(&r[d])))
            .collect();
        s.windows(3)
            .filter(|w| w[1].1 < w[0].1 && w[1].1 <= w[2].1)
            .map(|w| w[1].0)
            .collect()
    };
    let (x, y) = (minima("x+"), minima("y+"));
    assert_eq!(x.len(), 2, "{x:?}");
    assert_eq!(y.len(), 1, "{y:?}");
    for (m, want) in x.iter().zip([FRAC_PI_2, 3.0 * FRAC_PI_2]) {
        assert!((m - want).abs() < 0.01);
    }
    assert!((y[0] - PI).abs() < 0.01);
    assert!(x[0] < y[0] && y[0] < x[1]);
}

#[test]
fn precision_fit_rows_and_infinite_cells() {
    let o = kerrmetro(&[
        "precision", "--set", "Gamma_a=0", "--set", "Gamma_b=0", "--sweep", "n:1e5:1e7:21:log",
        "--quad", "x+,y+", "--fit",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    let fit_block = section(&text, "# scaling fits");
    let (h, rows) = table(fit_block);
    assert_eq!(h.join(","), "quad,slope,intercept,stderr,points_used");
    let slope = |label: &str| float(&rows.iter().find(|r| r[0] == label).unwrap()[1]);
    assert!((slope("x+") + 2.5).abs() < 0.1);
    assert!(slope("y+") < -1.0 && slope("y+") > -2.0);

    let o = kerrmetro(&["precision", "--set", "gamma=0", "--set", "Gamma_a=0", "--set", "Gamma_b=0", "--quad", "x+"]);
    let (h, rows) = table(&stdout(&o));
    assert_eq!(rows[0][column(&h, "delta")], "inf");
}

#[test]
fn fit_without_finite_points_exits_3() {
    let o = kerrmetro(&[
        "precision", "--set", "gamma=0", "--sweep", "n:1e5:1e7:5:log", "--quad", "x+", "--fit",
    ]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["moments", "--sweep", "n:1:2:1:lin"][..],
        &["moments", "--sweep", "q:1:2:3:lin"],
        &["moments", "--quad", "z+"],
        &["precision", "--fit"],
        &["moments", "--set", "mass=-1"],
        &["moments", "--set", "nonsense=1"],
        &["figdata", "7"],
        &["frobnicate"],
    ] {
        let o = kerrmetro(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stderr(&o));
    }
}

#[test]
fn oracle_check_tiny_cutoff_exits_4() {
    let o = kerrmetro(&["oracle-check", "--cutoff", "3"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stderr(&o).contains("cutoff"));
}

#[test]
fn oracle_check_default_grid_passes() {
    let dir = tempfile::tempdir().unwrap();
    let dump = dir.path().join("dump");
    let out = dir.path().join("report.csv");
    let o = kerrmetro(&[
        "oracle-check", "--out", out.to_str().unwrap(), "--dump", dump.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = std::fs::read_to_string(&out).unwrap();
    let (h, rows) = table(&text);
    assert_eq!(rows.len(), 36);
    let (s, e, rev) = (
        column(&h, "status"),
        column(&h, "rel_err_analytic"),
        column(&h, "revival_err"),
    );
    for r in &rows {
        assert_eq!(r[s], "PASS");
        assert!(float(&r[e]) < 1e-6);
    }
    assert_eq!(rows.iter().filter(|r| !r[rev].is_empty()).count(), 12);
    assert_eq!(std::fs::read_dir(&dump).unwrap().count(), 36);
}

#[test]
fn figure_4_fringes_sit_on_quarter_periods() {
    let o = kerrmetro(&["figdata", "4"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    let block = section(&text, "# fringe boundaries");
    let (h, rows) = table(block);
    let (gc, qc, pc) = (column(&h, "Gamma"), column(&h, "quad"), column(&h, "phase"));
    let undamped: Vec<&Vec<String>> = rows.iter().filter(|r| float(&r[gc]) == 0.0).collect();
    assert_eq!(undamped.len(), 5);
    for r in undamped {
        let phase = float(&r[pc]);
        let m = (phase / FRAC_PI_2).round();
        assert!((phase - m * FRAC_PI_2).abs() < 1e-6);
        assert_eq!(m as i64 % 2 == 0, r[qc] == "x+");
    }
}

#[test]
fn figure_5_stays_below_one_radian() {
    let o = kerrmetro(&["figdata", "5"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let (h, rows) = table(&stdout(&o));
    let (n, gt) = (column(&h, "n"), column(&h, "gamma_t"));
    assert_eq!(rows.len(), 41 * 2 * 3);
    for r in &rows {
        assert!(float(&r[n]) * float(&r[gt]) <= 1.0 + 1e-12);
    }
}

#[test]
fn output_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for i in 0..2 {
        let path = dir.path().join(format!("run{i}.csv"));
        let threads = if i == 0 { "1" } else { "3" };
        let o = kerrmetro(&[
            "precision", "--sweep", "gamma:1e-6:1e-3:50:log", "--threads", threads,
            "--out", path.to_str().unwrap(),
        ]);
        assert!(o.status.success());
        outputs.push(std::fs::read(&path).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
    assert!(outputs[0].starts_with(b"# kerrmetro "));
}
