//! End-to-end runs of the installed binary: exit-code contract, output
//! formats, determinism, and the negative controls.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn blowup(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_blowup"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf8 stdout")
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).expect("utf8 stderr")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("no signal")
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_str(&stdout(o)).expect("stdout parses as JSON")
}

#[test]
fn coeffs_single_point_row() {
    let out = blowup(&["coeffs", "--alpha", "0.25", "--gamma", "3.0"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "alpha,gamma,cw_star,cs_star,cs_two_mode,tail_slack,crho1,crho2,r_star,phi"
    );
    let row: Vec<f64> = lines
        .next()
        .unwrap()
        .split(',')
        .map(|v| v.parse().unwrap())
        .collect();
    assert_eq!(row.len(), 10);
    assert_eq!(row[0], 0.25);
    assert_eq!(row[1], 3.0);
    assert!(row[2] >  0.5 && row[2] < 0.6, "cw_star {}", row[2]);
    assert!(row[3] < 0.0, "cs_star should be negative past the sign change");
    assert!(row[9] > 0.0 && row[9] < 6.0 / 7.0, "phi {}", row[9]);
}

#[test]
fn coeffs_grid_33_rows_all_phi_below_envelope() {
    let out = blowup(&["coeffs", "--alpha-grid", "0.01:0.33:33"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 33);
    for row in rows {
        let phi: f64 = row.split(',').last().unwrap().parse().unwrap();
        assert!(phi <= 6.0 / 7.0, "row {row}");
    }
    // in-range grid draws no warning
    assert!(stderr(&out).is_empty(), "{}", stderr(&out));
}

#[test]
fn coeffs_rejects_gamma_below_alpha() {
    let out = blowup(&["coeffs", "--alpha", "0.25", "--gamma", "0.1"]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("gamma"), "{}", stderr(&out));
}

#[test]
fn coeffs_json_format() {
    let out = blowup(&["coeffs", "--alpha", "0.2", "--format", "json"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let rows = json(&out);
    assert_eq!(rows.as_array().unwrap().len(), 1);
    assert_eq!(rows[0]["alpha"], 0.2);
    assert!(rows[0]["phi"].as_f64().unwrap() < 6.0 / 7.0);
}

#[test]
fn coeffs_tamper_negative_control_exits_3() {
    let out = blowup(&["coeffs", "--alpha", "0.25", "--tamper"]);
    assert_eq!(code(&out), 3);
    assert!(stderr(&out).contains("disagrees"), "{}", stderr(&out));
}

#[test]
fn coeffs_alpha_exact_records_rational_g() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("third.csv");
    let out = blowup(&[
        "coeffs",
        "--alpha-exact",
        "1/3",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let meta: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("third.csv.meta.json")).unwrap())
            .unwrap();
    assert_eq!(meta["run"]["exact"]["G"], "-2255905/17570592");
    assert_eq!(meta["run"]["exact"]["alpha"], "1/3");
}

#[test]
fn coeffs_small_alpha_cross_checks_converge() {
    // the radial-moment quadrature must survive the nearly non-integrable
    // s^(alpha-1) endpoint
    let out = blowup(&["coeffs", "--alpha", "0.005"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
}

#[test]
fn unknown_flag_is_a_config_error() {
    let out = blowup(&["coeffs", "--alpha", "0.2", "--frobnicate"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn certify_passes_and_reports_clauses() {
    let out = blowup(&["certify"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let report = json(&out);
    assert_eq!(report["overall"], "pass");
    let clauses = report["clauses"].as_array().unwrap();
    assert!(clauses.len() >= 14);
    let g0 = clauses.iter().find(|c| c["id"] == "g-at-zero").unwrap();
    assert_eq!(g0["lhs"], "35/4096");
    assert_eq!(g0["verdict"], "pass");
    assert!(clauses.iter().any(|c| c["id"] == "g13-cross-multiplication"));
}

#[test]
fn certify_tamper_exits_3_with_failing_clauses() {
    let out = blowup(&["certify", "--tamper"]);
    assert_eq!(code(&out), 3);
    let report = json(&out);
    assert_eq!(report["overall"], "fail");
    assert!(report["clauses"]
        .as_array()
        .unwrap()
        .iter()
        .any(|c| c["verdict"] == "fail"));
}

#[test]
fn solve_f_emits_solution_json() {
    let out = blowup(&["solve-f", "--alpha", "0.25", "--modes", "6"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let sol = json(&out);
    assert_eq!(sol["alpha"], 0.25);
    assert_eq!(sol["lambda"], 7.3125); // (alpha+2)(alpha+3)
    assert_eq!(sol["modes"].as_array().unwrap().len(), 6);
    assert_eq!(sol["modes"][0]["n"], 1);
    assert!(sol["tail_norm_sq"].as_f64().unwrap() >= 0.0);
}

#[test]
fn simulate_subcritical_fits_the_collapse_law() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("traj.csv");
    let out = blowup(&[
        "simulate",
        "--alpha",
        "0.2",
        "--J-stop",
        "1e-4",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));

    let fit = json(&out);
    assert_eq!(fit["regime"], "finite_time_collapse");
    let exponent = fit["exponent"].as_f64().unwrap();
    assert!((exponent - 2.5).abs() < 0.05, "exponent {exponent}");
    assert!((fit["exponent_expected"].as_f64().unwrap() - 2.5).abs() < 1e-12);
    assert!(fit["t_star"].as_f64().unwrap() > 0.0);
    assert!(fit["r_squared"].as_f64().unwrap() >= 0.999);

    // trajectory file: header plus monotone J column
    let text = fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "t,J,W");
    let js: Vec<f64> = lines
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert!(js.windows(2).all(|w| w[1] < w[0]), "J must decrease");
    assert!(*js.last().unwrap() <= 1e-4);

    // the fit JSON lands next to the trajectory and equals stdout
    let fit_file = fs::read_to_string(dir.path().join("traj.csv.fit.json")).unwrap();
    assert_eq!(fit_file, stdout(&out));

    // sidecar carries the resolved params and records which were defaulted
    let meta: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("traj.csv.meta.json")).unwrap())
            .unwrap();
    assert_eq!(meta["params"]["alpha"], 0.2);
    assert_eq!(meta["params"]["sigma_cut"], 0.8);
    assert_eq!(meta["params"]["sigma_max"], 1.2);
    assert_eq!(meta["params"]["quad_tol"], 1e-10);
    assert!(meta["defaults_applied"]
        .as_array()
        .unwrap()
        .contains(&serde_json::Value::String("gamma".into())));
}

#[test]
fn simulate_critical_alpha_decays_exponentially() {
    let out = blowup(&["simulate", "--alpha-exact", "1/3", "--t-max", "50"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let fit = json(&out);
    assert_eq!(fit["regime"], "exponential_decay");
    let got = fit["exponent"].as_f64().unwrap();
    let want = fit["exponent_expected"].as_f64().unwrap();
    assert!(want < 0.0);
    assert!((got - want).abs() < 0.02 * want.abs(), "{got} vs {want}");
    assert!(fit["t_star"].is_null());
}

#[test]
fn simulate_supercritical_decays_algebraically() {
    let out = blowup(&["simulate", "--alpha", "0.4"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let fit = json(&out);
    assert_eq!(fit["regime"], "algebraic_decay");
    assert!(fit["exponent"].as_f64().unwrap() < -2.0);
    assert_eq!(fit["exponent_expected"].as_f64().unwrap(), -1.0 / (3.0 * 0.4 - 1.0));
}

#[test]
fn simulate_rejects_bad_j_stop() {
    let out = blowup(&["simulate", "--alpha", "0.2", "--J-stop", "2.0"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn rate_fit_round_trips_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("traj.csv");
    let sim = blowup(&[
        "simulate",
        "--alpha",
        "0.1",
        "--J-stop",
        "1e-4",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(code(&sim), 0, "{}", stderr(&sim));

    // params come from the sidecar; nothing passed on the command line
    let refit = blowup(&["rate-fit", "--input", csv.to_str().unwrap()]);
    assert_eq!(code(&refit), 0, "{}", stderr(&refit));
    let fit = json(&refit);
    assert_eq!(fit["regime"], "finite_time_collapse");
    let expected = 1.0 / (1.0 - 0.3);
    let got = fit["exponent"].as_f64().unwrap();
    assert!(
        (got - expected).abs() < 0.02 * expected,
        "{got} vs {expected}"
    );
    assert_eq!(fit["alpha"], 0.1);

    // and the two fits agree to CSV precision
    let sim_fit = json(&sim);
    let a = sim_fit["exponent"].as_f64().unwrap();
    assert!((a - got).abs() < 1e-6 * got.abs());
}

#[test]
fn rate_fit_without_sidecar_needs_flags() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("orphan.csv");
    fs::write(&csv, "t,J,W\n0,1,-1\n1,0.5,-1\n").unwrap();
    let out = blowup(&["rate-fit", "--input", csv.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("sidecar"), "{}", stderr(&out));

    // with flags it proceeds to the fit stage (and fails there: 2 samples)
    let out = blowup(&[
        "rate-fit",
        "--input",
        csv.to_str().unwrap(),
        "--alpha",
        "0.2",
    ]);
    assert_eq!(code(&out), 2);
}

#[test]
fn scan_phi_grid_and_envelope() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("scan.csv");
    let out = blowup(&["scan-phi", "--out", csv.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 34); // header + 33 default grid points
    assert!(text.starts_with("alpha,gamma,"));
}

#[test]
fn scan_phi_warns_above_one_third_but_still_reports() {
    let out = blowup(&["scan-phi", "--alpha-grid", "0.30:0.40:3"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stderr(&out).contains("1/3"), "{}", stderr(&out));
    assert_eq!(stdout(&out).lines().count(), 4);
}

#[test]
fn scan_phi_rejects_malformed_grid() {
    for bad in ["0.1:0.3", "0.3:0.1:5", "0:0.3:5", "0.1:1.5:5", "a:b:c"] {
        let out = blowup(&["scan-phi", "--alpha-grid", bad]);
        assert_eq!(code(&out), 1, "grid `{bad}` should be rejected");
    }
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| -> (String, String) {
        let csv = dir.path().join(name);
        let out = blowup(&[
            "scan-phi",
            "--alpha-grid",
            "0.05:0.30:6",
            "--out",
            csv.to_str().unwrap(),
        ]);
        assert_eq!(code(&out), 0, "{}", stderr(&out));
        let meta = sidecar(&csv);
        (fs::read_to_string(&csv).unwrap(), meta)
    };
    let (a_data, a_meta) = run("a.csv");
    let (b_data, b_meta) = run("b.csv");
    assert_eq!(a_data, b_data);
    assert_eq!(a_meta, b_meta);
}

fn sidecar(data: &Path) -> String {
    let mut p = data.as_os_str().to_owned();
    p.push(".meta.json");
    fs::read_to_string(Path::new(&p)).unwrap()
}
