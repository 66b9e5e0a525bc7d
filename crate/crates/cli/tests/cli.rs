use std::f64::consts::PI;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_adjacent-fht"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

/// Header and parsed rows; empty cells become `None`.
fn parse_csv(text: &str) -> (String, Vec<Vec<Option<f64>>>) {
    let mut lines = text.lines();
    let header = lines.next().unwrap().to_string();
    let rows = lines
        .map(|l| {
            l.split(',')
                .map(|c| (!c.is_empty()).then(|| c.parse().unwrap()))
                .collect()
        })
        .collect();
    (header, rows)
}

fn column(rows: &[Vec<Option<f64>>], j: usize) -> Vec<f64> {
    rows.iter().map(|r| r[j].unwrap()).collect()
}

#[test]
fn spectrum_header_and_closed_form() {
    let (header, rows) = parse_csv(&stdout(&[
        "spectrum", "--a1", "-1", "--a2", "1", "--mu-min", "0.5", "--mu-max", "4", "--n", "8",
    ]));
    assert_eq!(
        header,
        "lambda,mu,rho1_numeric,rho2_numeric,rho1_asymptotic,rho2_asymptotic,rho_closed_form"
    );
    assert_eq!(rows.len(), 8);
    for r in &rows {
        let closed = r[6].unwrap();
        assert!((r[2].unwrap() - closed).abs() <= 1e-6);
        assert!((r[3].unwrap() - closed).abs() <= 1e-6);
    }
    // asymptotic columns start at mu = 1
    assert!(rows[0][4].is_none());
    assert!(rows[1][4].is_some());
}

#[test]
fn spectrum_nonsymmetric_asymptotics() {
    let (_, rows) = parse_csv(&stdout(&[
        "spectrum", "--a1", "-1", "--a2", "2", "--mu-min", "8", "--mu-max", "9", "--n", "2",
    ]));
    let r = &rows[0];
    assert_eq!(r[1], Some(8.0));
    assert!((r[2].unwrap() / r[4].unwrap() - 1.0).abs() <= 0.05);
    assert!((r[3].unwrap() / r[5].unwrap() - 1.0).abs() <= 0.05);
    assert!(r[6].is_none());
}

#[test]
fn spectrum_lambda_range() {
    let (_, rows) = parse_csv(&stdout(&[
        "spectrum",
        "--lambda-min",
        "1",
        "--lambda-max",
        "25",
        "--n",
        "3",
    ]));
    assert_eq!(column(&rows, 0), vec![1.0, 13.0, 25.0]);
    for r in &rows {
        let mu = (r[0].unwrap() - 0.25f64).sqrt();
        assert!((r[2].unwrap() - (PI * mu).tanh() / 2.0).abs() <= 1e-6);
    }
}

#[test]
fn sigma_slope_routes_and_constancy() {
    let out = run(&[
        "sigma", "--a1", "-1", "--a2", "1", "--mu-min", "1", "--mu-max", "6", "--n", "6",
    ]);
    assert!(out.status.success());
    let (header, rows) = parse_csv(&String::from_utf8(out.stdout).unwrap());
    assert_eq!(
        header,
        "lambda,mu,nu_quadrature,nu_coefficient,sigma,sigma_paper_asymptotic,constancy_defect,sigma_recomputed_asymptotic"
    );
    let mu = column(&rows, 1);
    let ln_sigma: Vec<f64> = column(&rows, 4).iter().map(|s| s.abs().ln()).collect();
    let (mm, ml) = (
        mu.iter().sum::<f64>() / 6.0,
        ln_sigma.iter().sum::<f64>() / 6.0,
    );
    let slope = mu
        .iter()
        .zip(&ln_sigma)
        .map(|(m, l)| (m - mm) * (l - ml))
        .sum::<f64>()
        / mu.iter().map(|m| (m - mm).powi(2)).sum::<f64>();
    assert!((slope / -PI - 1.0).abs() <= 0.01, "slope {slope}");
    for r in &rows {
        assert!((r[2].unwrap() / r[3].unwrap() - 1.0).abs() <= 1e-3);
        assert!(r[6].unwrap() <= 1e-4);
    }
    assert!(String::from_utf8_lossy(&out.stderr).contains("prefactor audit"));
}

#[test]
fn sigma_reports_both_prefactors() {
    let out = run(&[
        "sigma", "--a1", "-1", "--a2", "2", "--mu-min", "3", "--mu-max", "5", "--n", "3",
        "--format", "json",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\"sigma_paper_asymptotic\""));
    assert!(text.contains("\"sigma_recomputed_asymptotic\""));
    assert!(text.contains("\"audit_match\": \"recomputed\""));
    assert!(String::from_utf8_lossy(&out.stderr).contains("quadrature matches: recomputed"));
}

#[test]
fn eigenfunction_grid_and_endpoint() {
    let (header, rows) = parse_csv(&stdout(&[
        "eigenfunction",
        "--a1",
        "-1",
        "--a2",
        "2",
        "--lambda",
        "200",
        "--interval",
        "2",
        "--n",
        "50",
    ]));
    assert_eq!(
        header,
        "x,phi_exact_or_numeric,phi_wkb,phi_stationary_phase"
    );
    let x = column(&rows, 0);
    assert!(x.windows(2).all(|w| w[0] < w[1]));
    assert!(column(&rows, 1).iter().all(|v| v.is_finite()));
    let last = rows.last().unwrap();
    assert_eq!(last[0], Some(2.0));
    assert!((last[1].unwrap() - 1.0).abs() < 1e-12);
    // the endpoint is outside the WKB window
    assert!(last[2].is_none());
    assert!(rows[10][2].is_some());
    assert!(rows.iter().all(|r| r[3].is_none()));
}

#[test]
fn eigenfunction_symmetric_forms() {
    let (_, rows) = parse_csv(&stdout(&[
        "eigenfunction",
        "--lambda",
        "400.25",
        "--interval",
        "1",
        "--n",
        "20",
    ]));
    assert_eq!(rows[0][0], Some(-1.0));
    assert!((rows[0][1].unwrap() - 1.0).abs() < 1e-12);
    for r in rows.iter().filter(|r| r[3].is_some()) {
        let x = r[0].unwrap();
        if (-0.8..=-0.2).contains(&x) {
            assert!((r[1].unwrap() - r[3].unwrap()).abs() < 0.05, "{r:?}");
            assert!((r[1].unwrap() - r[2].unwrap()).abs() < 0.05, "{r:?}");
        }
    }
}

#[test]
fn svd_column_properties() {
    let (header, rows) = parse_csv(&stdout(&["svd", "--n", "200"]));
    assert_eq!(header, "k,singular_value");
    assert_eq!(rows.len(), 200);
    let s = column(&rows, 1);
    assert!(s.windows(2).all(|w| w[0] > w[1]));
    assert!(s.iter().all(|&v| v > 0.0 && v < 1.0));
    assert_eq!(
        column(&rows, 0),
        (0..200).map(|k| k as f64).collect::<Vec<_>>()
    );
}

#[test]
fn output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let paths: Vec<String> = (0..2)
        .map(|i| dir.path().join(format!("s{i}.json")).display().to_string())
        .collect();
    for p in &paths {
        stdout(&[
            "sigma", "--a1", "-1", "--a2", "2", "--mu-min", "1", "--mu-max", "4", "--n", "7",
            "--format", "json", "--out", p,
        ]);
    }
    let a = std::fs::read(&paths[0]).unwrap();
    assert!(!a.is_empty());
    assert_eq!(a, std::fs::read(&paths[1]).unwrap());
}

#[test]
fn json_mirrors_csv() {
    let csv = stdout(&["spectrum", "--mu-min", "1", "--mu-max", "2", "--n", "2"]);
    let json = stdout(&[
        "spectrum", "--mu-min", "1", "--mu-max", "2", "--n", "2", "--format", "json",
    ]);
    assert!(json.starts_with("{\n  \"config\": {"));
    assert!(json.contains("\"rows\": ["));
    for cell in csv
        .lines()
        .nth(1)
        .unwrap()
        .split(',')
        .filter(|c| !c.is_empty())
    {
        assert!(json.contains(cell), "{cell}");
    }
}

#[test]
fn exit_codes() {
    assert_eq!(
        run(&["spectrum", "--a1", "1", "--a2", "2", "--mu-min", "1", "--mu-max", "2"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["spectrum", "--mu-min", "1"]).status.code(), Some(2));
    assert_eq!(
        run(&["spectrum", "--lambda-min", "0.1", "--lambda-max", "2"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["svd", "--n", "3"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    // beyond μ ≈ 30 the quadrature route of ν sits at its noise floor
    let out = run(&["sigma", "--mu-min", "30", "--mu-max", "31", "--n", "2"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("lambda = 9.0025000000000000e2"));
}

#[test]
fn verify_passes_and_detects_corruption() {
    let out = run(&["verify"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(out.status.success(), "{text}");
    assert!(text.contains("21 of 21 checks passed"));
    assert!(!text.contains("FAIL"));
    let bad = run(&["verify", "--tolerance-scale", "1e-30"]);
    assert_ne!(bad.status.code(), Some(0));
    assert!(String::from_utf8(bad.stdout).unwrap().contains("FAIL"));
}
