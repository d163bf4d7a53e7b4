use coho_core::realform::{bundled_data_dir, load_bundled};
use coho_core::verify::{estimate_terms, parse_parabolic, witness_lambda, Status, VerificationReport};
use serde_json::Value;
use std::process::{Command, Output};

fn coho(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_coho"))
        .args(args)
        .env_remove("COHO_DATA_DIR")
        .output()
        .expect("coho runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn first_line(o: &Output) -> String {
    stdout(o).lines().next().unwrap_or_default().to_string()
}

#[test]
fn invariant_examples() {
    let o = coho(&["invariant", "su(3,2)", "rg"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(first_line(&o), "2");
    assert_eq!(first_line(&coho(&["invariant", "sl(2,R)", "q0"])), "1");
    assert_eq!(first_line(&coho(&["invariant", "sl(2,R)", "rgmu", "--mu=2"])), "1");
    assert_eq!(first_line(&coho(&["invariant", "sl(4,R)", "rprime"])), "3");
    assert_eq!(first_line(&coho(&["invariant", "compact:G2", "rg"])), "infinity");
}

#[test]
fn invariant_errors() {
    let o = coho(&["invariant", "sl(2,R)", "rgmu", "--mu=0"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("coroot"), "{}", stderr(&o));
    assert_eq!(coho(&["invariant", "sl(9,Q)", "rg"]).status.code(), Some(2));
    assert_eq!(coho(&["invariant", "sl(2,R)", "rgmu", "--mu=1/x"]).status.code(), Some(2));
}

#[test]
fn invariant_json_lines() {
    let o = coho(&["--format", "json-lines", "invariant", "G", "rg"]);
    let v: Value = serde_json::from_str(&first_line(&o)).unwrap();
    assert_eq!(v["value"], "3");
    assert_eq!(v["schema_version"], 1);
}

#[test]
fn langlands_examples() {
    let o = coho(&["langlands", "sl(3,R)", "--nu=2,1"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("P = P0") && out.contains("nu_plus = nu"), "{out}");
    let out = stdout(&coho(&["langlands", "sl(3,R)", "--nu=-1,-1"]));
    assert!(out.contains("P = G") && out.contains("nu_plus = (0,0)"), "{out}");
    let out = stdout(&coho(&["langlands", "sl(3,R)", "--nu=1,-1"]));
    assert!(out.contains("P = S={2}") && out.contains("nu_plus = (1/2,0)"), "{out}");
    assert_eq!(coho(&["langlands", "sl(3,R)", "--nu=1,2,3"]).status.code(), Some(2));
}

#[test]
fn tables_match_and_every_format_is_well_formed() {
    let o = coho(&["tables"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let md = stdout(&o);
    for t in ["## table1", "## table2", "## table3"] {
        assert!(md.contains(t), "{t}");
    }
    assert!(!md.contains("| no |"));
    let o = coho(&["--format", "json-lines", "tables"]);
    let lines: Vec<Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert!(lines.len() > 60);
    assert!(lines.iter().all(|v| v["schema_version"] == 1 && v["match"] != "no"));
    let o = coho(&["--format", "csv", "tables"]);
    let csv = stdout(&o);
    let width = csv_fields(csv.lines().next().unwrap());
    assert!(csv.lines().all(|l| csv_fields(l) == width), "{csv}");
    assert!(csv.contains("\"sl(3,R)\""));
}

/// Field count of one CSV line with double-quoted fields.
fn csv_fields(line: &str) -> usize {
    let mut quoted = false;
    let mut n = 1;
    for c in line.chars() {
        match c {
            '"' => quoted = !quoted,
            ',' if !quoted => n += 1,
            _ => {}
        }
    }
    n
}

#[test]
fn deep_tables_match_everywhere() {
    let o = coho(&["--deep", "--format", "json-lines", "tables"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().all(|l| l.contains("\"match\":\"yes\"")), "{}", stdout(&o));
}

fn copy_catalog() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    for e in std::fs::read_dir(bundled_data_dir()).unwrap() {
        let p = e.unwrap().path();
        std::fs::copy(&p, dir.path().join(p.file_name().unwrap())).unwrap();
    }
    dir
}

#[test]
fn corrupted_descriptor_exits_two() {
    let dir = copy_catalog();
    let p = dir.path().join("sl_3_r.toml");
    let text = std::fs::read_to_string(&p).unwrap().replace("dim_k = 3", "dim_k = 5");
    std::fs::write(&p, text).unwrap();
    let path = dir.path().to_str().unwrap();
    let o = coho(&["--data-dir", path, "tables"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("sl(3,R)"), "{}", stderr(&o));
    let o = Command::new(env!("CARGO_BIN_EXE_coho"))
        .args(["invariant", "G", "rg"])
        .env("COHO_DATA_DIR", path)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

fn reports(o: &Output) -> Vec<VerificationReport> {
    stdout(o).lines().map(|l| VerificationReport::from_json_line(l).unwrap()).collect()
}

#[test]
fn estimate_sweep_on_split_g2_passes_with_counts() {
    let o = coho(&["--format", "json-lines", "verify", "--suite", "estimate0", "--bound", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let rs = reports(&o);
    let g: Vec<_> = rs.iter().filter(|r| r.claim_id.starts_with("estimate0:G:")).collect();
    assert_eq!(g.len(), 3);
    for r in g {
        assert_eq!(r.status, Status::Pass);
        assert_eq!(r.stats["box_points"], 36);
        assert_eq!(r.stats["violations"], 0);
    }
}

fn without_clock(o: &Output) -> Vec<String> {
    reports(o)
        .into_iter()
        .map(|mut r| {
            r.wall_clock_ms = None;
            r.to_json_line()
        })
        .collect()
}

#[test]
fn verify_output_is_deterministic_across_job_counts() {
    let args = ["--format", "json-lines", "verify", "--suite", "estimate0", "--bound", "2"];
    let one = coho(&[&["--jobs", "1"][..], &args[..]].concat());
    let two = coho(&[&["--jobs", "2"][..], &args[..]].concat());
    assert_eq!(without_clock(&one), without_clock(&two));
}

#[test]
fn full_report_stream_parses_and_replays() {
    let o = coho(&["--format", "json-lines", "verify", "--suite", "all", "--samples", "20"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stderr(&o).contains("0 fail"), "{}", stderr(&o));
    let cat = load_bundled().unwrap();
    let rs = reports(&o);
    assert!(rs.len() > 3000);
    let mut replayed = 0;
    for r in rs.iter().filter(|r| r.claim_id.starts_with("estimate0:")) {
        let Some(lambda) = witness_lambda(r) else { continue };
        let rest = r.claim_id.strip_prefix("estimate0:").unwrap();
        let (form, tail) = rest.split_at(rest.find(":S=").unwrap());
        let s = parse_parabolic(tail[1..].split(':').next().unwrap()).unwrap();
        let t = estimate_terms(cat.get(form).unwrap(), &s, &lambda).unwrap();
        let w = r.witness.as_ref().unwrap();
        assert_eq!(w["count"].as_u64(), Some(t.count), "{}", r.claim_id);
        assert_eq!(w["r_m_lambda"].as_u64(), Some(t.r_m_lambda), "{}", r.claim_id);
        replayed += 1;
    }
    assert!(replayed >= 27);
}
