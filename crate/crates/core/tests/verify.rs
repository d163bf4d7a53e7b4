use coho_core::invariants::RgOptions;
use coho_core::realform::load_bundled;
use coho_core::verify::{
    estimate0_suite, estimate_terms, parse_parabolic, reproduce_tables, witness_lambda, Status,
    VerificationReport, REPORT_SCHEMA_VERSION,
};
use std::collections::BTreeSet;

fn parabolic_of(claim: &str) -> coho_core::rootsys::ParabolicSubset {
    let part = claim.split(':').find(|p| p.starts_with("S=")).unwrap();
    parse_parabolic(part).unwrap()
}

fn form_of(claim: &str) -> String {
    // claim ids are `suite:form:S=...:B=...`, and complex ids contain a colon
    let rest = claim.split_once(':').unwrap().1;
    rest[..rest.find(":S=").unwrap()].to_string()
}

#[test]
fn every_form_with_literature_values_gets_reports() {
    let cat = load_bundled().unwrap();
    let reports = reproduce_tables(&cat, RgOptions::deep());
    let ids: BTreeSet<&str> = reports.iter().map(|r| r.claim_id.as_str()).collect();
    for f in cat.iter().filter(|f| f.literature.is_some()) {
        let table = &f.literature.as_ref().unwrap().source;
        let table = table.split(':').next().unwrap();
        if f.literature_r_prime().is_some() {
            assert!(ids.contains(format!("{table}:{}:r_prime", f.id).as_str()), "{}", f.id);
        }
        if f.literature_r_g().is_some() {
            assert!(ids.contains(format!("{table}:{}:r_g", f.id).as_str()), "{}", f.id);
        }
    }
    assert!(reports.iter().all(|r| r.status == Status::Pass), "{reports:#?}");
}

#[test]
fn estimate_witnesses_replay_exactly() {
    let cat = load_bundled().unwrap();
    for r in estimate0_suite(&cat, 2) {
        let Some(lambda) = witness_lambda(&r) else { continue };
        let f = cat.get(&form_of(&r.claim_id)).unwrap();
        let s = parabolic_of(&r.claim_id);
        let t = estimate_terms(f, &s, &lambda).unwrap();
        let w = r.witness.as_ref().unwrap();
        assert_eq!(w["count"].as_u64(), Some(t.count), "{}", r.claim_id);
        assert_eq!(w["r_m_lambda"].as_u64(), Some(t.r_m_lambda), "{}", r.claim_id);
        assert_eq!(w["r_g"].as_u64(), Some(t.r_g), "{}", r.claim_id);
        if w["kind"] == "tightest" {
            let slack = (t.count + t.r_m_lambda) as i64 - t.r_g as i64;
            assert_eq!(r.stats["min_slack"].as_i64(), Some(slack), "{}", r.claim_id);
        }
    }
}

#[test]
fn replay_rejects_parameters_outside_the_hypotheses() {
    let cat = load_bundled().unwrap();
    let f = cat.get("sl(3,R)").unwrap();
    let s = parse_parabolic("S={1}").unwrap();
    assert!(estimate_terms(f, &s, &[0, 0]).is_err());
    assert!(estimate_terms(f, &s, &[1, 2, 3]).is_err());
}

fn strip_clock(mut r: VerificationReport) -> VerificationReport {
    r.wall_clock_ms = None;
    r
}

#[test]
fn reports_round_trip_and_are_deterministic() {
    let cat = load_bundled().unwrap();
    let a: Vec<_> = estimate0_suite(&cat, 2).into_iter().map(strip_clock).collect();
    let b: Vec<_> = estimate0_suite(&cat, 2).into_iter().map(strip_clock).collect();
    let la: Vec<String> = a.iter().map(|r| r.to_json_line()).collect();
    let lb: Vec<String> = b.iter().map(|r| r.to_json_line()).collect();
    assert_eq!(la, lb);
    for (r, line) in a.iter().zip(&la) {
        assert!(!line.contains('\n'));
        let back = VerificationReport::from_json_line(line).unwrap();
        assert_eq!(back.to_json_line(), *line);
        assert_eq!(back.schema_version, REPORT_SCHEMA_VERSION);
        assert_eq!(back.claim_id, r.claim_id);
    }
    let bumped = la[0].replace(
        &format!("\"schema_version\":{REPORT_SCHEMA_VERSION}"),
        "\"schema_version\":999",
    );
    assert!(VerificationReport::from_json_line(&bumped).is_err());
}
