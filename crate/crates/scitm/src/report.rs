//! Report assembly and rendering.
//!
//! A [`Report`] pins everything an investigator needs in one immutable
//! artifact: the model digest, the rule-set and mapping versions, the
//! annotated threat list and summary statistics. Rendering is pure and
//! canonical, so identical inputs produce byte-identical JSON and
//! Markdown; only the `generated_at` timestamp varies, and it is
//! excluded from the report digest.

use std::collections::BTreeMap;

use chrono::{DateTime, SecondsFormat, Utc};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::crimemap::{annotate, AnnotatedThreat, EvidenceRow, MappingSet, OffenceArticle};
use crate::engine::{
    count_by_category, count_by_system, enumerate_threats, EngineError, RuleSet, StrideCategory,
    Subject, SystemGroup, ThreatType,
};
use crate::model::LayeredModel;
use crate::parser::emit_text;

/// Summary statistics over a threat list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StatsSummary {
    pub total: usize,
    pub by_category: BTreeMap<StrideCategory, usize>,
    pub by_system: BTreeMap<SystemGroup, usize>,
    /// Share of the total per system, as a two-decimal string ("5.09").
    pub by_system_pct: BTreeMap<SystemGroup, String>,
}

impl StatsSummary {
    pub fn from_threats(threats: &[crate::engine::GeneratedThreat]) -> Self {
        let total = threats.len();
        let by_system = count_by_system(threats);
        let by_system_pct = by_system
            .iter()
            .map(|(g, n)| (*g, percent_string(*n as u64, total as u64)))
            .collect();
        StatsSummary {
            total,
            by_category: count_by_category(threats),
            by_system,
            by_system_pct,
        }
    }
}

/// One annotated threat in report form. Field names match the JSON
/// schema; offences render as bare article numbers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportThreat {
    pub id: String,
    pub rule: String,
    pub category: StrideCategory,
    #[serde(rename = "type")]
    pub threat_type: ThreatType,
    pub subject: Subject,
    pub layer: u8,
    pub group: SystemGroup,
    pub offences: Vec<u8>,
    pub evidence: EvidenceRow,
}

impl From<&AnnotatedThreat> for ReportThreat {
    fn from(a: &AnnotatedThreat) -> Self {
        ReportThreat {
            id: a.threat.threat_id.clone(),
            rule: a.threat.rule_id.clone(),
            category: a.threat.category,
            threat_type: a.threat.threat_type,
            subject: a.threat.subject.clone(),
            layer: a.threat.layer,
            group: a.threat.system_group,
            offences: a.offences.iter().map(|o| o.number()).collect(),
            evidence: a.evidence.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    #[serde(rename = "model")]
    pub model_name: String,
    /// SHA-256 of the canonical model text.
    pub model_digest: String,
    pub ruleset_version: String,
    pub mapping_version: String,
    pub stats: StatsSummary,
    pub threats: Vec<ReportThreat>,
    /// RFC-3339 build timestamp; not part of the report digest.
    pub generated_at: String,
}

impl Report {
    /// Hex SHA-256 over the canonical JSON with `generated_at` removed.
    /// Two reports over the same model, rules and mappings share a
    /// digest regardless of when they were built.
    pub fn digest(&self) -> String {
        let mut value = serde_json::to_value(self).expect("report serializes");
        value.as_object_mut().unwrap().remove("generated_at");
        let canonical = serde_json::to_string(&value).expect("canonical json");
        let mut hasher = Sha256::new();
        hasher.update(canonical.as_bytes());
        hasher
            .finalize()
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }

    pub fn from_json(text: &str) -> Result<Report, serde_json::Error> {
        serde_json::from_str(text)
    }
}

/// SHA-256 of the canonical text emission of a model.
pub fn model_digest(model: &LayeredModel) -> String {
    let mut hasher = Sha256::new();
    hasher.update(emit_text(model).as_bytes());
    hasher
        .finalize()
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// `num/den` as a percentage with exactly two decimals, rounded half-up.
/// A zero denominator yields "0.00".
pub fn percent_string(num: u64, den: u64) -> String {
    if den == 0 {
        return "0.00".to_string();
    }
    // Thousandths of a percent, then half-up to hundredths.
    let milli = num as u128 * 100_000 / den as u128;
    let rounded = (milli + 5) / 10;
    format!("{}.{:02}", rounded / 100, rounded % 100)
}

/// Build timestamp: honours `SOURCE_DATE_EPOCH` for reproducible output.
pub fn build_timestamp() -> String {
    let now = match std::env::var("SOURCE_DATE_EPOCH")
        .ok()
        .and_then(|s| s.parse::<i64>().ok())
        .and_then(|secs| DateTime::<Utc>::from_timestamp(secs, 0))
    {
        Some(t) => t,
        None => Utc::now(),
    };
    now.to_rfc3339_opts(SecondsFormat::Secs, true)
}

/// Enumerate, annotate and summarize: the full analysis pipeline.
pub fn build_report(
    model: &LayeredModel,
    rules: &RuleSet,
    mappings: &MappingSet,
) -> Result<Report, EngineError> {
    let threats = enumerate_threats(model, rules)?;
    let stats = StatsSummary::from_threats(&threats);
    let annotated = annotate(&threats, mappings);
    Ok(Report {
        model_name: model.name.clone(),
        model_digest: model_digest(model),
        ruleset_version: rules.version.clone(),
        mapping_version: mappings.version.clone(),
        stats,
        threats: annotated.iter().map(ReportThreat::from).collect(),
        generated_at: build_timestamp(),
    })
}

/// Canonical JSON: keys sorted, arrays in report order, trailing newline.
pub fn render_json(report: &Report) -> String {
    let value = serde_json::to_value(report).expect("report serializes");
    let mut text = serde_json::to_string_pretty(&value).expect("report renders");
    text.push('\n');
    text
}

/// Human-readable Markdown rendering.
pub fn render_markdown(report: &Report) -> String {
    use std::fmt::Write;

    let mut out = String::new();
    let _ = writeln!(out, "# Threat Model Report: {}", report.model_name);
    let _ = writeln!(out);
    let _ = writeln!(out, "- Model digest: `{}`", report.model_digest);
    let _ = writeln!(out, "- Rule set version: {}", report.ruleset_version);
    let _ = writeln!(out, "- Mapping version: {}", report.mapping_version);
    let _ = writeln!(out, "- Generated: {}", report.generated_at);
    let _ = writeln!(out);
    let _ = writeln!(out, "## Summary");
    let _ = writeln!(out);
    let _ = writeln!(
        out,
        "{} threat{}.",
        report.stats.total,
        if report.stats.total == 1 { "" } else { "s" }
    );
    if report.stats.total > 0 {
        let _ = writeln!(out);
        let _ = writeln!(out, "| Category | Count |");
        let _ = writeln!(out, "|---|---|");
        for (cat, n) in &report.stats.by_category {
            let _ = writeln!(out, "| {} | {} |", cat.display(), n);
        }
        let _ = writeln!(out);
        let _ = writeln!(out, "| System | Count | Share |");
        let _ = writeln!(out, "|---|---|---|");
        for (sys, n) in &report.stats.by_system {
            let _ = writeln!(
                out,
                "| {} | {} | {}% |",
                sys.name(),
                n,
                report.stats.by_system_pct[sys]
            );
        }
        let _ = writeln!(out);
        let _ = writeln!(out, "## Threats");
        for threat in &report.threats {
            let _ = writeln!(out);
            let _ = writeln!(out, "### {}", threat.id);
            let _ = writeln!(out);
            let _ = writeln!(
                out,
                "- Category: {} — {}",
                threat.category.display(),
                threat.threat_type.display()
            );
            let _ = writeln!(
                out,
                "- Subject: {} `{}` (layer {}, system {})",
                match threat.subject.kind {
                    crate::engine::SubjectKind::Element => "element",
                    crate::engine::SubjectKind::Flow => "flow",
                },
                threat.subject.id,
                threat.layer,
                threat.group.name()
            );
            let offences: Vec<String> = threat
                .offences
                .iter()
                .map(|n| {
                    let art = OffenceArticle::from_number(*n).expect("valid article");
                    format!("Art. {} ({})", n, art.display())
                })
                .collect();
            let _ = writeln!(out, "- Offences: {}", offences.join(", "));
            let _ = writeln!(out, "- Evidence, in order of volatility:");
            for source in &threat.evidence.sources {
                let _ = writeln!(out, "  - {}:", source.display());
                for item in threat.evidence.items.iter().filter(|i| i.source == *source) {
                    let _ = writeln!(out, "    - [ ] {}", item.name);
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::crimemap::default_mappings;
    use crate::engine::default_rules;
    use crate::parser::parse_model;

    fn tiny() -> LayeredModel {
        parse_model(
            r#"model "Tiny"
layer 0 {
  process p "P"
  external e "E"
  store s "S"
  flow f1: e -> p "in"
  flow f2: p -> s "out"
  boundary b "B" { e }
}"#,
        )
        .unwrap()
    }

    #[test]
    fn percent_fixture_matches_published_figures() {
        assert_eq!(percent_string(90, 1768), "5.09");
        assert_eq!(percent_string(200, 1768), "11.31");
        assert_eq!(percent_string(1, 1), "100.00");
        assert_eq!(percent_string(0, 7), "0.00");
        assert_eq!(percent_string(1, 0), "0.00");
        assert_eq!(percent_string(1, 8), "12.50");
        // exact half rounds up
        assert_eq!(percent_string(1, 800), "0.13");
    }

    #[test]
    fn digest_ignores_timestamp() {
        let rules = default_rules();
        let maps = default_mappings();
        let mut a = build_report(&tiny(), &rules, &maps).unwrap();
        let mut b = a.clone();
        a.generated_at = "2001-01-01T00:00:00Z".to_string();
        b.generated_at = "2002-02-02T00:00:00Z".to_string();
        assert_eq!(a.digest(), b.digest());
    }

    #[test]
    fn digest_changes_with_threat_list() {
        let rules = default_rules();
        let maps = default_mappings();
        let full = build_report(&tiny(), &rules, &maps).unwrap();
        let mut trimmed = full.clone();
        trimmed.threats.pop();
        assert_ne!(full.digest(), trimmed.digest());
    }

    #[test]
    fn json_roundtrip_is_lossless() {
        let report = build_report(&tiny(), &default_rules(), &default_mappings()).unwrap();
        let text = render_json(&report);
        let back = Report::from_json(&text).unwrap();
        assert_eq!(back, report);
    }

    #[test]
    fn json_is_canonical() {
        let report = build_report(&tiny(), &default_rules(), &default_mappings()).unwrap();
        let a = render_json(&report);
        let b = render_json(&report);
        assert_eq!(a, b);
        assert!(a.starts_with("{\n"));
        // top-level keys in sorted order
        let gen = a.find("\"generated_at\"").unwrap();
        let model = a.find("\"model\"").unwrap();
        let stats = a.find("\"stats\"").unwrap();
        assert!(gen < model && model < stats);
    }

    #[test]
    fn empty_report_renders_zero_threats() {
        let model = parse_model("model \"Empty\"\nlayer 0 { }").unwrap();
        let report = build_report(&model, &default_rules(), &default_mappings()).unwrap();
        assert_eq!(report.stats.total, 0);
        assert!(report.stats.by_system.is_empty());
        let md = render_markdown(&report);
        assert!(md.contains("# Threat Model Report: Empty"));
        assert!(md.contains("0 threats."));
    }

    #[test]
    fn markdown_lists_offences_and_evidence() {
        let report = build_report(&tiny(), &default_rules(), &default_mappings()).unwrap();
        let md = render_markdown(&report);
        assert!(md.contains("| Category | Count |"));
        assert!(md.contains("Art. 6 (Misuse of Devices)"));
        assert!(md.contains("- [ ] network traffic"));
        assert_eq!(md, render_markdown(&report));
    }
}
