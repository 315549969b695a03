use std::process::{Command, Output};

use gravwitness_cli::csv::{read_trace_csv, TRACE_HEADER};
use gravwitness_core::gravmodel::{evolve, ExperimentParams};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gravwitness"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn summary(out: &Output) -> String {
    stdout(out).lines().last().unwrap_or_default().to_string()
}

fn field(summary: &str, key: &str) -> f64 {
    summary
        .split_whitespace()
        .find_map(|kv| kv.strip_prefix(&format!("{key}=")))
        .unwrap_or_else(|| panic!("{key} missing in {summary}"))
        .parse()
        .unwrap()
}

#[test]
fn jump_under_m0m_convention() {
    let out = run(&["jump", "--convention", "m0m"]);
    assert_eq!(out.status.code(), Some(0));
    let s = summary(&out);
    assert!((field(&s, "t_jump") - 0.742).abs() < 1e-3, "{s}");
    assert!(
        (field(&s, "magnitude") + std::f64::consts::PI).abs() < 1e-9,
        "{s}"
    );
    assert!(s.contains("model=semiclassical"));
}

#[test]
fn quantum_model_reports_no_jump_with_success() {
    let out = run(&["jump", "--model", "quantum"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(summary(&out).starts_with("jump=none"));
}

#[test]
fn cp_ratio_between_invocations() {
    let low = summary(&run(&["cp", "--R", "1e-6", "--epsilon", "1.04"]));
    let high = summary(&run(&["cp", "--R", "1e-6", "--epsilon", "5.1"]));
    let ratio = field(&high, "V_cp") / field(&low, "V_cp");
    assert!((ratio / 1.9e3 - 1.0).abs() < 0.05, "{ratio}");
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["jump", "--set", "dx=5e-4"]).status.code(), Some(2));
    assert_eq!(run(&["jump", "--set", "mass=1"]).status.code(), Some(2));
    assert_eq!(run(&["cp", "--epsilon", "2"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["sweep"]).status.code(), Some(2));
    assert_eq!(run(&["trace", "--outputs", "svg"]).status.code(), Some(2));
    // spheres overlapping is a physics failure, not a usage one
    assert_eq!(
        run(&["cp", "--R", "1e-3", "--epsilon", "2"]).status.code(),
        Some(1)
    );
    assert_eq!(run(&["inflect"]).status.code(), Some(0));
    assert_eq!(run(&["calibrate"]).status.code(), Some(0));
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.cfg");
    std::fs::write(&path, "# heavier spheres\nconvention = m0m\nT = 1.0\n").unwrap();
    let cfg = path.to_str().unwrap();
    let s = summary(&run(&["jump", "--config", cfg]));
    assert!(s.contains("convention=M0TimesM"), "{s}");
    let s = summary(&run(&["jump", "--config", cfg, "--convention", "m0sq"]));
    assert!(
        s.starts_with("jump=none") && s.contains("convention=M0Squared"),
        "{s}"
    );
    assert_eq!(
        run(&["jump", "--config", "/nonexistent/x.cfg"])
            .status
            .code(),
        Some(2)
    );
}

fn nan_regions(rows: &[[f64; 10]], col: usize) -> usize {
    let mut regions = 0;
    let mut inside = false;
    for r in rows {
        if r[col].is_nan() && !inside {
            regions += 1;
        }
        inside = r[col].is_nan();
    }
    regions
}

#[test]
fn trace_rows_and_undefined_region() {
    let out = run(&["trace"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(text.lines().next(), Some(TRACE_HEADER));
    assert_eq!(text.lines().nth(1), Some("0,0,0,0,0,0,1,1,1,0"));
    let rows = read_trace_csv(&text).unwrap();
    assert!(rows.len() >= 2000);
    assert_eq!(nan_regions(&rows, 5), 1);
    assert_eq!(nan_regions(&rows, 4), 0);
}

#[test]
fn unwrapped_semiclassical_phase_follows_half_phi() {
    let rows = read_trace_csv(&stdout(&run(&["trace", "--unwrap"]))).unwrap();
    for r in rows.iter().filter(|r| r[5].is_finite()) {
        assert!(
            (r[5] - r[3] / 2.0).abs() < 1e-9,
            "t = {}: {} vs {}",
            r[0],
            r[5],
            r[3] / 2.0
        );
    }
}

/// One unit in the last printed (12th significant) digit.
fn print_ulp(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    10f64.powi(x.abs().log10().floor() as i32 - 11)
}

#[test]
fn trace_rows_round_trip_through_evolve() {
    let rows = read_trace_csv(&stdout(&run(&["trace", "--points", "200"]))).unwrap();
    let p = ExperimentParams::default();
    let columns = |t: f64| {
        let e = evolve(&p, t).unwrap();
        [
            e.t,
            e.phi1,
            e.phi2,
            e.phi_sc,
            e.phi_q.unwrap_or(f64::NAN),
            e.phi_c.unwrap_or(f64::NAN),
            e.vis_q_global,
            e.vis_q_reduced,
            e.vis_c,
            e.concurrence,
        ]
    };
    for r in &rows {
        let expected = columns(r[0]);
        // the printed t itself is rounded, which moves every column by up to
        // its slope times half a print ulp of t
        let h = (print_ulp(r[0]) / 2.0).min(p.t_total - r[0]);
        let shifted = columns(r[0] + h);
        for ((got, want), near) in r.iter().zip(expected).zip(shifted) {
            if want.is_nan() {
                assert!(got.is_nan());
            } else {
                let slack = if near.is_finite() {
                    (near - want).abs()
                } else {
                    0.0
                };
                assert!(
                    (got - want).abs() <= print_ulp(want) + slack + 1e-15,
                    "t = {}: {got} vs {want}",
                    r[0]
                );
            }
        }
    }
}

#[test]
fn svg_is_self_contained_xml() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("trace.csv");
    let out = run(&[
        "trace",
        "--outputs",
        "csv,svg",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(csv.exists());
    let svg = std::fs::read_to_string(dir.path().join("trace.svg")).unwrap();
    let doc = roxmltree::Document::parse(&svg).unwrap();
    assert_eq!(doc.root_element().tag_name().name(), "svg");
    for node in doc.descendants().filter(|n| n.is_element()) {
        assert!(!matches!(
            node.tag_name().name(),
            "image" | "script" | "use" | "foreignObject"
        ));
        for attr in node.attributes() {
            assert!(!attr.name().contains("href"), "{}", attr.name());
        }
    }
    let polylines = doc
        .descendants()
        .filter(|n| n.has_tag_name("polyline"))
        .count();
    assert!(polylines >= 5);
    assert!(doc
        .descendants()
        .any(|n| n.attribute("stroke-dasharray").is_some()));
}

#[test]
fn unwritable_output_fails() {
    let out = run(&["trace", "--out", "/nonexistent-dir/trace.csv"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cannot write"));
}

#[test]
fn sweep_separation_increases_jump_time() {
    let out = run(&[
        "sweep", "--param", "d", "--start", "300e-6", "--stop", "900e-6", "--count", "7", "--set",
        "T=10",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("param,value,scalar"));
    let values: Vec<f64> = lines
        .map(|l| l.rsplit(',').next().unwrap().parse().unwrap())
        .collect();
    assert_eq!(values.len(), 7);
    assert!(values.windows(2).all(|w| w[1] > w[0]), "{values:?}");
}

#[test]
fn sweep_with_two_points_and_nan_cells() {
    let out = run(&[
        "sweep", "--param", "dx", "--start", "1e-4", "--stop", "5e-4", "--count", "2",
    ]);
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 3);
    assert!(text.ends_with("dx,0.0005,NaN\n"), "{text}");
}

#[test]
fn outputs_are_identical_across_thread_counts() {
    let a = run(&["trace", "--threads", "1"]).stdout;
    let b = run(&["trace", "--threads", "4"]).stdout;
    let c = run(&["trace"]).stdout;
    assert_eq!(a, b);
    assert_eq!(a, c);
    let sweep = [
        "sweep", "--param", "m0", "--start", "1e-14", "--stop", "1e-13", "--scalar", "v_min",
    ];
    let s1 = run(&[&sweep[..], &["--threads", "1"]].concat()).stdout;
    let s4 = run(&[&sweep[..], &["--threads", "4"]].concat()).stdout;
    assert_eq!(s1, s4);
}
