use std::path::PathBuf;
use std::process::{Command, Output};

use starnode::report::PortraitReport;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_starnode"))
}

fn input(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("inputs")
        .join(name)
        .display()
        .to_string()
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn report(out: &Output) -> PortraitReport {
    PortraitReport::from_json(std::str::from_utf8(&out.stdout).unwrap()).unwrap()
}

#[test]
fn analyze_heteroclinic_fixture() {
    let out = run(&["analyze", &input("heteroclinic.json")]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = report(&out);
    assert_eq!(r.verdict.as_str(), "heteroclinic_cycle");
    assert_eq!(r.portrait.infinite.len(), 2);
    assert_eq!(r.portrait.finite.len(), 2);
    assert!((r.portrait.finite[0].y - 1.0).abs() < 1e-12 && (r.portrait.finite[1].y + 1.0).abs() < 1e-12);
}

#[test]
fn analyze_verify_epsilon_field() {
    let out = run(&["analyze", &input("eps_field.json"), "--verify"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = report(&out);
    assert_eq!(r.verdict.as_str(), "limit_cycle");
    let v = r.verification.expect("verification requested");
    assert!(v.agrees);
    let c = v.result.cycle.expect("cycle located");
    assert!((c.fixed_point_radius - 1.0).abs() < 1e-6);
}

#[test]
fn analyze_degenerate_canonical_form() {
    let out = run(&["analyze", &input("form_x_circle.json")]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["verdict"], "degenerate_continuum");
    assert_eq!(v["portrait"]["continuum"]["degenerate_case"], "b");
    assert_eq!(v["canonical_consistency"]["checks"][0]["status"], "MATCH");
}

#[test]
fn inline_input_and_tolerance_flags_are_recorded() {
    let out = run(&[
        "analyze",
        r#"{"lambda":-1,"degree":2,"Q1":[1,0,0],"Q2":[0,0,1]}"#,
        "--tol-root",
        "1e-8",
        "--tol-quad",
        "1e-9",
        "--seed",
        "7",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r.tolerances.root, 1e-8);
    assert_eq!(r.tolerances.quad, 1e-9);
    assert_eq!(r.seed, 7);
}

#[test]
fn analyze_is_deterministic() {
    let a = run(&["analyze", &input("heteroclinic.json"), "--verify", "--seed", "11"]);
    let b = run(&["analyze", &input("heteroclinic.json"), "--verify", "--seed", "11"]);
    assert_eq!(a.stdout, b.stdout);
    let r = report(&a);
    let again = PortraitReport::from_json(&r.to_json()).unwrap();
    assert_eq!(r, again);
}

#[test]
fn input_errors_exit_two() {
    for bad in [
        r#"{"lambda":1,"degree":3,"Q1":[0,0,-1],"Q2":[1,0,0,-1]}"#,
        r#"{"lambda":1,"degree":3"#,
        "/nonexistent/path.json",
        r#"{"canonical":{"form":"XI"}}"#,
    ] {
        let out = run(&["analyze", bad]);
        assert_eq!(out.status.code(), Some(2), "{bad}");
        assert!(!out.stderr.is_empty());
    }
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn portrait_svg_is_well_formed() {
    let dir = tempfile::tempdir().unwrap();
    for (name, extra) in [
        ("heteroclinic.json", "saddle-node"),
        ("eps_field.json", "limit-cycle"),
        ("form_x_circle.json", "equilibrium-curve"),
    ] {
        let svg = dir.path().join(format!("{name}.svg"));
        let out = run(&["portrait", &input(name), "--svg", svg.to_str().unwrap(), "--samples", "6"]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
        let text = std::fs::read_to_string(&svg).unwrap();
        let doc = roxmltree::Document::parse(&text).expect("well-formed XML");
        let boundary = doc
            .descendants()
            .filter(|n| n.has_tag_name("circle") && n.attribute("class") == Some("boundary"))
            .count();
        assert_eq!(boundary, 1);
        assert!(
            doc.descendants()
                .any(|n| n.attribute("class").is_some_and(|c| c.contains(extra))),
            "{name}: no {extra}"
        );
        let trajectories = doc
            .descendants()
            .filter(|n| n.attribute("class") == Some("trajectory"))
            .count();
        assert_eq!(trajectories, 6);
    }
}

#[test]
fn cycle_of_epsilon_field_is_drawn_at_half_radius() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("eps.svg");
    let out = run(&["portrait", &input("eps_field.json"), "--svg", svg.to_str().unwrap(), "--samples", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&svg).unwrap();
    let doc = roxmltree::Document::parse(&text).unwrap();
    let cyc = doc
        .descendants()
        .find(|n| n.attribute("class") == Some("limit-cycle"))
        .unwrap();
    for pt in cyc.attribute("points").unwrap().split_whitespace() {
        let (x, y) = pt.split_once(',').unwrap();
        let (x, y): (f64, f64) = (x.parse().unwrap(), y.parse().unwrap());
        let rd = (x - 200.0).hypot(y - 200.0) / 180.0;
        assert!((rd - 0.5).abs() < 1e-3, "{rd}");
    }
}

#[test]
fn sweep_writes_csv_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("sweep.csv");
    let out = run(&[
        "sweep",
        &input("heteroclinic.json"),
        "--eps-grid",
        "0.2,0.1,0.05,0.025,0,-0.1",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("eps,criterion_integral,cycle_found,cycle_mean_radius"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 6);
    for r in &rows[..4] {
        assert!(r[1].parse::<f64>().unwrap() < 0.0);
        assert_eq!(r[2], "true");
    }
    for r in &rows[4..] {
        assert_eq!(r[1], "");
        assert_eq!(r[2], "false");
    }
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(csv.with_extension("json")).unwrap()).unwrap();
    assert_eq!(summary["integrals_decrease_with_eps"], true);
    assert!(summary["rows"][5]["note"].as_str().unwrap().contains("polycycle persists"));
}

#[test]
fn sweep_needs_a_heteroclinic_base() {
    let out = run(&["sweep", &input("eps_field.json")]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn audit_canonical_degree_three() {
    let out = run(&["audit-canonical", "--degree", "3", "--grid=-1,0.5"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let ix = v["forms"].as_array().unwrap().iter().find(|f| f["form"] == "IX").unwrap();
    assert_eq!(ix["properties"]["count"]["MISMATCH"], 0);
    assert_eq!(ix["properties"]["angles"]["MISMATCH"], 0);
    assert_eq!(run(&["audit-canonical", "--degree", "4"]).status.code(), Some(2));
}

#[test]
fn audit_canonical_degree_two_flags_printed_forms() {
    let out = run(&["audit-canonical", "--degree", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let flagged = v["flagged"].as_array().unwrap();
    assert!(flagged.iter().any(|r| r["spec"]["form"] == "i"));
}
