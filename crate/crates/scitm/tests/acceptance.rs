//! Acceptance suite: one test per release criterion, each printing a
//! single PASS/FAIL line (run with `--nocapture` to see them).

mod common;

use std::collections::BTreeMap;
use std::process::Command;
use std::time::Instant;

use scitm::crimemap::default_mappings;
use scitm::engine::{
    count_by_category, count_by_system, default_rules, enumerate_threats, GeneratedThreat,
    SystemGroup, ThreatType,
};
use scitm::model::IndicatorGroup;
use scitm::parser::{emit_text, parse_model};
use scitm::report::percent_string;
use scitm::template::default_template;

use common::{oracle_enumerate, random_model, Rng};

fn criterion(n: u32, desc: &str, ok: bool) {
    println!("{}: criterion {n} — {desc}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "criterion {n} failed: {desc}");
}

fn triples(threats: &[GeneratedThreat]) -> Vec<(u8, String, String)> {
    threats
        .iter()
        .map(|t| (t.layer, t.subject.id.clone(), t.rule_id.clone()))
        .collect()
}

#[test]
fn criterion_01_oracle_equivalence() {
    let rules = default_rules();
    let started = Instant::now();
    let mut ok = true;
    for seed in 0..120u64 {
        let model = random_model(seed);
        let engine = triples(&enumerate_threats(&model, &rules).unwrap());
        let oracle = oracle_enumerate(&model, &rules);
        if engine != oracle {
            eprintln!("seed {seed}: engine {} vs oracle {}", engine.len(), oracle.len());
            ok = false;
        }
    }
    ok &= started.elapsed().as_secs() < 10;
    criterion(1, "brute-force oracle equivalence on 120 random models", ok);
}

#[test]
fn criterion_02_input_validation_equals_repudiation() {
    let threats = enumerate_threats(&default_template(), &default_rules()).unwrap();
    let count = |t: ThreatType| threats.iter().filter(|x| x.threat_type == t).count();
    let a = count(ThreatType::LackOfInputValidation);
    let b = count(ThreatType::DataRepudiation);
    criterion(
        2,
        "template counts: lack-of-input-validation == data-repudiation",
        a == b && a > 0,
    );
}

#[test]
fn criterion_03_resources_group_strictly_smallest() {
    let threats = enumerate_threats(&default_template(), &default_rules()).unwrap();
    let layer1: Vec<GeneratedThreat> =
        threats.into_iter().filter(|t| t.layer == 1).collect();
    let by_system = count_by_system(&layer1);
    let resources = by_system[&SystemGroup::Indicator(IndicatorGroup::Resources)];
    let ok = IndicatorGroup::ALL
        .into_iter()
        .filter(|g| *g != IndicatorGroup::Resources)
        .all(|g| by_system[&SystemGroup::Indicator(g)] > resources);
    criterion(3, "Resources layer-1 threat count strictly smallest", ok);
}

#[test]
fn criterion_04_mapping_tables_match_fixture() {
    let fixture: BTreeMap<String, serde_json::Value> =
        serde_json::from_str(include_str!("fixtures/tables.json")).unwrap();
    let mappings = default_mappings();
    let mut rows_ok = 0;
    for t in ThreatType::ALL {
        let row = &fixture[t.name()];
        let want_offences: Vec<u8> = row["offences"]
            .as_array()
            .unwrap()
            .iter()
            .map(|v| v.as_u64().unwrap() as u8)
            .collect();
        let got_offences: Vec<u8> = mappings
            .offences_for(t)
            .iter()
            .map(|a| a.number())
            .collect();
        let evidence = mappings.evidence_for(t);
        let want_evidence: Vec<(String, Vec<String>)> = row["evidence"]
            .as_array()
            .unwrap()
            .iter()
            .map(|pair| {
                let source = pair[0].as_str().unwrap().to_string();
                let items = pair[1]
                    .as_array()
                    .unwrap()
                    .iter()
                    .map(|v| v.as_str().unwrap().to_string())
                    .collect();
                (source, items)
            })
            .collect();
        let got_evidence: Vec<(String, Vec<String>)> = evidence
            .sources
            .iter()
            .map(|s| {
                let items = evidence
                    .items
                    .iter()
                    .filter(|i| i.source == *s)
                    .map(|i| i.name.clone())
                    .collect();
                (s.name().to_string(), items)
            })
            .collect();
        if want_offences == got_offences && want_evidence == got_evidence {
            rows_ok += 1;
        } else {
            eprintln!("row mismatch for {}", t.name());
        }
    }
    criterion(4, "offence and evidence tables match the committed fixture 12/12", rows_ok == 12);
}

#[test]
fn criterion_05_category_partition() {
    let rules = default_rules();
    let mut ok = true;
    let mut check = |threats: &[GeneratedThreat]| {
        let total = threats.len();
        let cat: usize = count_by_category(threats).values().sum();
        let sys: usize = count_by_system(threats).values().sum();
        ok &= cat == total && sys == total;
    };
    check(&enumerate_threats(&default_template(), &rules).unwrap());
    for seed in 0..100u64 {
        check(&enumerate_threats(&random_model(seed), &rules).unwrap());
    }
    criterion(5, "by_category and by_system both partition the total", ok);
}

#[test]
fn criterion_06_percentage_rounding() {
    let mut ok = percent_string(90, 1768) == "5.09";
    let mut rng = Rng::new(0x5c17);
    for _ in 0..1000 {
        let den = 1 + rng.below(1_000_000);
        let num = rng.below(den + 1);
        // independent exact route: hundredths of a percent with a
        // remainder-based half-up comparison
        let scaled = num as u128 * 10_000;
        let mut q = scaled / den as u128;
        let r = scaled % den as u128;
        if 2 * r >= den as u128 {
            q += 1;
        }
        let want = format!("{}.{:02}", q / 100, q % 100);
        if percent_string(num, den) != want {
            eprintln!("mismatch for {num}/{den}");
            ok = false;
        }
    }
    criterion(6, "two-decimal half-up percentages match exact rational arithmetic", ok);
}

#[test]
fn criterion_07_analyze_outputs_are_deterministic() {
    let bin = env!("CARGO_BIN_EXE_scitm");
    let dir = tempfile::tempdir().unwrap();
    let template_path = dir.path().join("sci.scm");
    let status = Command::new(bin)
        .args(["template", "--out"])
        .arg(&template_path)
        .status()
        .unwrap();
    assert!(status.success());
    let mut ok = true;
    for format in ["json", "md", "dot"] {
        let render = || {
            let out = Command::new(bin)
                .arg("analyze")
                .arg(&template_path)
                .args(["--format", format])
                .env("SOURCE_DATE_EPOCH", "1700000000")
                .output()
                .unwrap();
            assert!(out.status.success(), "{format} run failed");
            out.stdout
        };
        ok &= render() == render();
    }
    criterion(7, "analyze json/md/dot outputs byte-identical across runs", ok);
}

#[test]
fn criterion_08_parse_emit_roundtrip() {
    let mut ok = true;
    let mut check = |model: &scitm::model::LayeredModel| {
        let reparsed = parse_model(&emit_text(model)).unwrap();
        ok &= reparsed == *model;
    };
    check(&default_template());
    for seed in 0..100u64 {
        check(&random_model(seed));
    }
    criterion(8, "parse → emit → parse structural equality on template and 100 random models", ok);
}

#[test]
fn criterion_09_all_twelve_threat_types_fire() {
    let threats = enumerate_threats(&default_template(), &default_rules()).unwrap();
    let mut missing = Vec::new();
    for t in ThreatType::ALL {
        if !threats.iter().any(|x| x.threat_type == t) {
            missing.push(t.name());
        }
    }
    if !missing.is_empty() {
        eprintln!("missing types: {missing:?}");
    }
    criterion(9, "default rules generate all 12 taxonomy types on the template", missing.is_empty());
}

#[test]
fn criterion_10_template_scale() {
    let started = Instant::now();
    let threats = enumerate_threats(&default_template(), &default_rules()).unwrap();
    let elapsed = started.elapsed();
    let total = threats.len();
    criterion(
        10,
        "template analysis under 2 s with a four-digit threat count",
        elapsed.as_millis() < 2000 && (1000..=9999).contains(&total),
    );
}
