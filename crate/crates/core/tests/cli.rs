use std::process::{Command, Output};

fn ggmaj(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ggmaj"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

/// Parse `key,value` CSV into pairs, skipping the header.
fn record(out: &Output) -> Vec<(String, String)> {
    stdout(out)
        .lines()
        .skip(1)
        .map(|l| {
            let (k, v) = l.split_once(',').unwrap();
            (k.to_string(), v.to_string())
        })
        .collect()
}

fn field(out: &Output, key: &str) -> String {
    record(out)
        .into_iter()
        .find(|(k, _)| k == key)
        .unwrap_or_else(|| panic!("missing {key}"))
        .1
}

fn table(out: &Output) -> (Vec<String>, Vec<Vec<String>>) {
    let text = stdout(out);
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines
        .map(|l| l.split(',').map(String::from).collect())
        .collect();
    (header, rows)
}

#[test]
fn spectrum_reports_one_step_search() {
    let out = ggmaj(&["spectrum", "--n", "4", "--t", "0"]);
    assert!(out.status.success());
    let keys: Vec<String> = record(&out).into_iter().map(|(k, _)| k).collect();
    assert_eq!(
        keys,
        [
            "omega1",
            "omega2",
            "delta_omega",
            "abs_a1",
            "abs_a2",
            "delta_a",
            "sum_abs",
            "is_efficient"
        ]
    );
    let dw: f64 = field(&out, "delta_omega").parse().unwrap();
    let da: f64 = field(&out, "delta_a").parse().unwrap();
    assert!((dw.abs() - 2.0 * std::f64::consts::PI / 3.0).abs() < 1e-12);
    assert!((dw + da).abs() < 1e-12);
    assert_eq!(field(&out, "is_efficient"), "true");
}

#[test]
fn spectrum_rejects_identity_kernel() {
    let out = ggmaj(&["spectrum", "--n", "4", "--t", "pi"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("beta = delta = -1"));
}

#[test]
fn sweep_emits_one_row_per_grid_point() {
    let out = ggmaj(&["sweep", "--n", "16", "--grid-points", "10"]);
    assert!(out.status.success());
    let (header, rows) = table(&out);
    assert_eq!(
        header,
        [
            "t",
            "delta_omega",
            "delta_a",
            "abs_a1",
            "abs_a2",
            "degenerate"
        ]
    );
    assert_eq!(rows.len(), 10);
    // t = pi is the 6th point of a 10-point grid and is flagged rather than dropped
    assert_eq!(rows[5][5], "true");
    assert_eq!(rows[5][1], "");
}

#[test]
fn trajectory_of_one_step_search() {
    let out = ggmaj(&["trajectory", "--n", "4", "--t", "0", "--m-max", "1"]);
    let (header, rows) = table(&out);
    assert_eq!(header, ["m", "p_x0", "p_perp_each"]);
    assert_eq!(rows.len(), 2);
    let p: Vec<f64> = rows.iter().map(|r| r[1].parse().unwrap()).collect();
    assert!((p[0] - 0.25).abs() < 1e-12 && (p[1] - 1.0).abs() < 1e-12);
}

#[test]
fn lorenz_respects_stride() {
    let out = ggmaj(&[
        "lorenz", "--n", "4", "--t", "0", "--m-max", "4", "--stride", "2",
    ]);
    let (header, rows) = table(&out);
    assert_eq!(header, ["m", "k", "cumulant"]);
    let steps: Vec<&str> = rows.iter().map(|r| r[0].as_str()).collect();
    assert_eq!(
        steps,
        ["0", "0", "0", "0", "2", "2", "2", "2", "4", "4", "4", "4"]
    );
    for curve in rows.chunks(4) {
        assert!((curve[3][2].parse::<f64>().unwrap() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn steps_for_hundred_items() {
    let out = ggmaj(&["steps", "--n", "100"]);
    assert!(out.status.success());
    assert_eq!(field(&out, "M_exact"), field(&out, "M_argmax"));
    assert_eq!(field(&out, "M_approx"), "8");
    assert!(field(&out, "p_at_M").parse::<f64>().unwrap() > 0.99);
}

#[test]
fn verify_exit_codes() {
    let holds = ggmaj(&["verify", "--n", "100", "--t", "1"]);
    assert_eq!(holds.status.code(), Some(0));
    assert_eq!(field(&holds, "holds_overall"), "true");

    let broken = ggmaj(&["verify", "--n", "100", "--t", "1", "--g-offset", "5pi/6"]);
    assert_eq!(broken.status.code(), Some(1));
    assert_eq!(field(&broken, "holds_overall"), "false");
    assert!(field(&broken, "first_violation").parse::<usize>().is_ok());
}

#[test]
fn approx_error_over_several_sizes() {
    let out = ggmaj(&["approx-error", "--n", "50..500:50", "--grid-points", "64"]);
    assert!(out.status.success());
    let (header, rows) = table(&out);
    assert_eq!(
        header,
        [
            "n",
            "t",
            "exact_dw",
            "approx_dw",
            "abs_err",
            "rel_err_percent"
        ]
    );
    assert_eq!(rows.len(), 10 * 53);

    let single = ggmaj(&["approx-error", "--n", "1000"]);
    let (header, rows) = table(&single);
    assert_eq!(header[0], "t");
    assert!(rows
        .iter()
        .all(|r| r[4].parse::<f64>().unwrap().abs() < 1.0));
}

#[test]
fn exact_t_reaches_certainty() {
    let out = ggmaj(&["exact-t", "--n", "100", "--target-m", "8"]);
    assert!(out.status.success());
    let (header, rows) = table(&out);
    assert_eq!(header, ["t_star", "M", "ratio", "p_success"]);
    assert_eq!(rows[0][1], "8");
    assert!(rows[0][3].parse::<f64>().unwrap() >= 1.0 - 1e-8);

    let unreachable = ggmaj(&[
        "exact-t",
        "--n",
        "100",
        "--target-m",
        "8",
        "--t-lo",
        "0",
        "--t-hi",
        "0.1",
    ]);
    assert_eq!(unreachable.status.code(), Some(2));
}

#[test]
fn json_output_is_well_formed() {
    let out = ggmaj(&[
        "sweep",
        "--n",
        "16",
        "--grid-points",
        "4",
        "--format",
        "json",
    ]);
    let rows: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 4);
    assert!(rows[2]["delta_omega"].is_null());
    assert_eq!(rows[2]["degenerate"], serde_json::Value::Bool(true));

    let rec = ggmaj(&["steps", "--n", "100", "--format", "json"]);
    let rec: serde_json::Value = serde_json::from_slice(&rec.stdout).unwrap();
    assert_eq!(rec["M_approx"], 8);
}

#[test]
fn output_file_matches_stdout() {
    let path = std::env::temp_dir().join(format!("ggmaj-cli-{}.csv", std::process::id()));
    let to_file = ggmaj(&[
        "trajectory",
        "--n",
        "16",
        "--t",
        "0.5",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert!(to_file.status.success());
    let written = std::fs::read(&path).unwrap();
    std::fs::remove_file(&path).ok();
    assert_eq!(
        written,
        ggmaj(&["trajectory", "--n", "16", "--t", "0.5"]).stdout
    );
}

#[test]
fn output_is_deterministic() {
    let args = ["approx-error", "--n", "50..200:50", "--format", "json"];
    assert_eq!(ggmaj(&args).stdout, ggmaj(&args).stdout);
}

#[test]
fn invalid_usage_is_rejected() {
    assert_eq!(ggmaj(&["spectrum", "--n", "1"]).status.code(), Some(2));
    assert_eq!(
        ggmaj(&["spectrum", "--n", "4", "--t", "abc"]).status.code(),
        Some(2)
    );
    assert_eq!(
        ggmaj(&["lorenz", "--n", "4", "--stride", "0"])
            .status
            .code(),
        Some(2)
    );
}
