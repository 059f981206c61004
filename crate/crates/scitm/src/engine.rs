//! STRIDE threat enumeration over layered models.
//!
//! Rules are data, not code: a [`RuleSet`] is loaded from a rule file (or
//! the bundled default) and evaluated against every model in a
//! [`LayeredModel`]. Each rule pairs a structural [`SitePattern`] with a
//! threat type from the twelve-entry taxonomy; enumeration emits exactly
//! one [`GeneratedThreat`] per matched site, sorted canonically so that
//! identical inputs always produce identical output.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{DfdModel, Element, ElementKind, IndicatorGroup, LayeredModel};
use crate::validate::{is_valid, validate, Diagnostic};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StrideCategory {
    Spoofing,
    Tampering,
    Repudiation,
    InformationDisclosure,
    DenialOfService,
    ElevationOfPrivilege,
}

impl StrideCategory {
    pub const ALL: [StrideCategory; 6] = [
        StrideCategory::Spoofing,
        StrideCategory::Tampering,
        StrideCategory::Repudiation,
        StrideCategory::InformationDisclosure,
        StrideCategory::DenialOfService,
        StrideCategory::ElevationOfPrivilege,
    ];

    pub fn name(self) -> &'static str {
        match self {
            StrideCategory::Spoofing => "spoofing",
            StrideCategory::Tampering => "tampering",
            StrideCategory::Repudiation => "repudiation",
            StrideCategory::InformationDisclosure => "information-disclosure",
            StrideCategory::DenialOfService => "denial-of-service",
            StrideCategory::ElevationOfPrivilege => "elevation-of-privilege",
        }
    }

    pub fn display(self) -> &'static str {
        match self {
            StrideCategory::Spoofing => "Spoofing",
            StrideCategory::Tampering => "Tampering",
            StrideCategory::Repudiation => "Repudiation",
            StrideCategory::InformationDisclosure => "Information Disclosure",
            StrideCategory::DenialOfService => "Denial of Service",
            StrideCategory::ElevationOfPrivilege => "Elevation of Privilege",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.name() == s)
    }
}

/// The twelve-entry threat taxonomy. Each type belongs to exactly one
/// STRIDE category: 2 Spoofing, 1 Tampering, 1 Repudiation,
/// 2 Information Disclosure, 2 Denial of Service, 4 Elevation of
/// Privilege.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ThreatType {
    SpoofingOfProcess,
    SpoofingOfDataStore,
    LackOfInputValidation,
    DataRepudiation,
    DataFlowSniffing,
    WeakAccessControl,
    ProcessCrashOrStop,
    DataFlowInterrupted,
    EopRemoteCodeExecution,
    EopImpersonation,
    CrossSiteRequestForgery,
    EopExecutionFlowChange,
}

impl ThreatType {
    pub const ALL: [ThreatType; 12] = [
        ThreatType::SpoofingOfProcess,
        ThreatType::SpoofingOfDataStore,
        ThreatType::LackOfInputValidation,
        ThreatType::DataRepudiation,
        ThreatType::DataFlowSniffing,
        ThreatType::WeakAccessControl,
        ThreatType::ProcessCrashOrStop,
        ThreatType::DataFlowInterrupted,
        ThreatType::EopRemoteCodeExecution,
        ThreatType::EopImpersonation,
        ThreatType::CrossSiteRequestForgery,
        ThreatType::EopExecutionFlowChange,
    ];

    pub fn category(self) -> StrideCategory {
        match self {
            ThreatType::SpoofingOfProcess | ThreatType::SpoofingOfDataStore => {
                StrideCategory::Spoofing
            }
            ThreatType::LackOfInputValidation => StrideCategory::Tampering,
            ThreatType::DataRepudiation => StrideCategory::Repudiation,
            ThreatType::DataFlowSniffing | ThreatType::WeakAccessControl => {
                StrideCategory::InformationDisclosure
            }
            ThreatType::ProcessCrashOrStop | ThreatType::DataFlowInterrupted => {
                StrideCategory::DenialOfService
            }
            ThreatType::EopRemoteCodeExecution
            | ThreatType::EopImpersonation
            | ThreatType::CrossSiteRequestForgery
            | ThreatType::EopExecutionFlowChange => StrideCategory::ElevationOfPrivilege,
        }
    }

    /// Canonical kebab-case name, used in rule files and on the CLI.
    pub fn name(self) -> &'static str {
        match self {
            ThreatType::SpoofingOfProcess => "spoofing-of-process",
            ThreatType::SpoofingOfDataStore => "spoofing-of-data-store",
            ThreatType::LackOfInputValidation => "lack-of-input-validation",
            ThreatType::DataRepudiation => "data-repudiation",
            ThreatType::DataFlowSniffing => "data-flow-sniffing",
            ThreatType::WeakAccessControl => "weak-access-control",
            ThreatType::ProcessCrashOrStop => "process-crash-or-stop",
            ThreatType::DataFlowInterrupted => "data-flow-interrupted",
            ThreatType::EopRemoteCodeExecution => "eop-remote-code-execution",
            ThreatType::EopImpersonation => "eop-impersonation",
            ThreatType::CrossSiteRequestForgery => "cross-site-request-forgery",
            ThreatType::EopExecutionFlowChange => "eop-execution-flow-change",
        }
    }

    /// Long-form description as conventionally reported.
    pub fn display(self) -> &'static str {
        match self {
            ThreatType::SpoofingOfProcess => "Spoofing in various processes",
            ThreatType::SpoofingOfDataStore => "Spoofing of various source data stores",
            ThreatType::LackOfInputValidation => "Potential lack of input validation",
            ThreatType::DataRepudiation => "Potential data repudiation",
            ThreatType::DataFlowSniffing => "Data flow sniffing",
            ThreatType::WeakAccessControl => "Potential weak access control for a resource",
            ThreatType::ProcessCrashOrStop => "Potential process crash or stop",
            ThreatType::DataFlowInterrupted => "Data flow potentially interrupted",
            ThreatType::EopRemoteCodeExecution => {
                "Systems may be subject to elevation of privilege using remote code execution"
            }
            ThreatType::EopImpersonation => "Elevation using impersonation",
            ThreatType::CrossSiteRequestForgery => "Cross site request forgery",
            ThreatType::EopExecutionFlowChange => {
                "Elevation by changing execution flow in various systems"
            }
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|t| t.name() == s)
    }

    /// Parse a CLI name: the canonical kebab-case name or a long-form
    /// alias (e.g. `potential-data-repudiation`).
    pub fn parse_cli(s: &str) -> Option<Self> {
        if let Some(t) = Self::parse(s) {
            return Some(t);
        }
        match s {
            "spoofing-in-various-processes" => Some(ThreatType::SpoofingOfProcess),
            "spoofing-of-various-source-data-stores" => Some(ThreatType::SpoofingOfDataStore),
            "potential-lack-of-input-validation" => Some(ThreatType::LackOfInputValidation),
            "potential-data-repudiation" => Some(ThreatType::DataRepudiation),
            "potential-weak-access-control-for-a-resource" | "potential-weak-access-control" => {
                Some(ThreatType::WeakAccessControl)
            }
            "potential-process-crash-or-stop" => Some(ThreatType::ProcessCrashOrStop),
            "data-flow-potentially-interrupted" => Some(ThreatType::DataFlowInterrupted),
            "remote-code-execution" => Some(ThreatType::EopRemoteCodeExecution),
            "elevation-using-impersonation" => Some(ThreatType::EopImpersonation),
            "csrf" => Some(ThreatType::CrossSiteRequestForgery),
            "elevation-by-changing-execution-flow" => Some(ThreatType::EopExecutionFlowChange),
            _ => None,
        }
    }
}

/// Structural site selector: which elements or flows of a model a rule
/// applies to.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SitePattern {
    FlowIntoProcess,
    FlowFromProcess,
    FlowFromDataStore,
    FlowAny,
    ProcessAny,
    ProcessWithTag(String),
    DataStoreAny,
    ExternalEntitySource,
}

impl SitePattern {
    pub fn parse(s: &str) -> Option<Self> {
        if let Some(tag) = s.strip_prefix("process-with-tag:") {
            if tag.is_empty() {
                return None;
            }
            return Some(SitePattern::ProcessWithTag(tag.to_string()));
        }
        match s {
            "flow-into-process" => Some(SitePattern::FlowIntoProcess),
            "flow-from-process" => Some(SitePattern::FlowFromProcess),
            "flow-from-data-store" => Some(SitePattern::FlowFromDataStore),
            "flow-any" => Some(SitePattern::FlowAny),
            "process-any" => Some(SitePattern::ProcessAny),
            "data-store-any" => Some(SitePattern::DataStoreAny),
            "external-entity-source" => Some(SitePattern::ExternalEntitySource),
            _ => None,
        }
    }

    pub fn name(&self) -> String {
        match self {
            SitePattern::FlowIntoProcess => "flow-into-process".into(),
            SitePattern::FlowFromProcess => "flow-from-process".into(),
            SitePattern::FlowFromDataStore => "flow-from-data-store".into(),
            SitePattern::FlowAny => "flow-any".into(),
            SitePattern::ProcessAny => "process-any".into(),
            SitePattern::ProcessWithTag(tag) => format!("process-with-tag:{tag}"),
            SitePattern::DataStoreAny => "data-store-any".into(),
            SitePattern::ExternalEntitySource => "external-entity-source".into(),
        }
    }

    fn selects_flows(&self) -> bool {
        matches!(
            self,
            SitePattern::FlowIntoProcess
                | SitePattern::FlowFromProcess
                | SitePattern::FlowFromDataStore
                | SitePattern::FlowAny
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SubjectKind {
    Element,
    Flow,
}

/// The element or flow a generated threat is about.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Subject {
    pub kind: SubjectKind,
    pub id: String,
}

/// System attribution for per-system statistics: either one of the four
/// indicator groups or the dashboard (layer-0 core) bucket.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SystemGroup {
    Dashboard,
    Indicator(IndicatorGroup),
}

impl SystemGroup {
    pub fn name(self) -> &'static str {
        match self {
            SystemGroup::Dashboard => "dashboard",
            SystemGroup::Indicator(g) => g.name(),
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        if s == "dashboard" {
            return Some(SystemGroup::Dashboard);
        }
        IndicatorGroup::parse(s).map(SystemGroup::Indicator)
    }
}

impl Serialize for SystemGroup {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for SystemGroup {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        SystemGroup::parse(&s)
            .ok_or_else(|| serde::de::Error::custom(format!("unknown system group `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThreatRule {
    pub rule_id: String,
    pub category: StrideCategory,
    pub threat_type: ThreatType,
    pub site: SitePattern,
    pub requires_boundary_crossing: bool,
    pub title_template: String,
    #[serde(default)]
    pub description: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleSet {
    pub version: String,
    pub rules: Vec<ThreatRule>,
}

impl RuleSet {
    pub fn rule(&self, id: &str) -> Option<&ThreatRule> {
        self.rules.iter().find(|r| r.rule_id == id)
    }
}

/// STRIDE-per-element applicability: which site patterns a category may
/// legally target.
pub fn matrix_allows(category: StrideCategory, site: &SitePattern) -> bool {
    use SitePattern::*;
    match category {
        // Spoofing targets identities: processes, external-entity sources
        // and data-store sources.
        StrideCategory::Spoofing => matches!(
            site,
            ProcessAny
                | ProcessWithTag(_)
                | FlowFromProcess
                | FlowFromDataStore
                | ExternalEntitySource
                | DataStoreAny
        ),
        StrideCategory::Tampering
        | StrideCategory::Repudiation
        | StrideCategory::InformationDisclosure
        | StrideCategory::DenialOfService => !matches!(site, ExternalEntitySource),
        StrideCategory::ElevationOfPrivilege => {
            matches!(site, ProcessAny | ProcessWithTag(_) | FlowIntoProcess)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleError {
    #[error("line {line}: syntax error: expected {expected}")]
    Syntax { line: u32, expected: String },
    #[error("duplicate rule id `{0}`")]
    DuplicateRuleId(String),
    #[error("rule `{rule}`: unknown threat type `{name}`")]
    UnknownThreatType { rule: String, name: String },
    #[error("rule `{rule}`: category {category:?} does not match threat type {threat_type:?} (parent {parent:?})")]
    CategoryMismatch {
        rule: String,
        category: StrideCategory,
        threat_type: ThreatType,
        parent: StrideCategory,
    },
    #[error("rule `{rule}`: category {category:?} may not target site `{site}`")]
    MatrixViolation {
        rule: String,
        category: StrideCategory,
        site: String,
    },
}

/// Parse a rule file.
///
/// ```text
/// rule data-flow-sniffing {
///   category: information-disclosure;
///   type: data-flow-sniffing;
///   site: flow-any;
///   boundary: required;
///   title: "Data flow {subject} may be sniffed";
/// }
/// ```
pub fn load_rules(text: &str) -> Result<RuleSet, RuleError> {
    let mut rules: Vec<ThreatRule> = Vec::new();
    let mut version = String::from("0");
    let mut lines = text.lines().enumerate().peekable();
    while let Some((idx, raw)) = lines.next() {
        let line = strip_comment(raw);
        if line.is_empty() {
            continue;
        }
        let lineno = idx as u32 + 1;
        if let Some(rest) = line.strip_prefix("version") {
            version = rest.trim().trim_matches('"').to_string();
            continue;
        }
        let Some(rest) = line.strip_prefix("rule ") else {
            return Err(RuleError::Syntax {
                line: lineno,
                expected: "`rule <id> {` or `version`".into(),
            });
        };
        let Some(id) = rest.trim().strip_suffix('{').map(|s| s.trim().to_string()) else {
            return Err(RuleError::Syntax {
                line: lineno,
                expected: "`{` after rule id".into(),
            });
        };
        if rules.iter().any(|r| r.rule_id == id) {
            return Err(RuleError::DuplicateRuleId(id));
        }
        let mut category = None;
        let mut threat_type_name = None;
        let mut site = None;
        let mut boundary = false;
        let mut title = String::new();
        let mut description = String::new();
        let mut closed = false;
        for (idx, raw) in lines.by_ref() {
            let line = strip_comment(raw);
            let lineno = idx as u32 + 1;
            if line.is_empty() {
                continue;
            }
            if line == "}" {
                closed = true;
                break;
            }
            let Some((key, value)) = line.split_once(':') else {
                return Err(RuleError::Syntax {
                    line: lineno,
                    expected: "`<key>: <value>;`".into(),
                });
            };
            let value = value.trim().trim_end_matches(';').trim();
            match key.trim() {
                "category" => {
                    category = Some(StrideCategory::parse(value).ok_or(RuleError::Syntax {
                        line: lineno,
                        expected: "a STRIDE category name".into(),
                    })?)
                }
                "type" => threat_type_name = Some(value.to_string()),
                "site" => {
                    site = Some(SitePattern::parse(value).ok_or(RuleError::Syntax {
                        line: lineno,
                        expected: "a site pattern".into(),
                    })?)
                }
                "boundary" => {
                    boundary = match value {
                        "required" => true,
                        "any" => false,
                        _ => {
                            return Err(RuleError::Syntax {
                                line: lineno,
                                expected: "`required` or `any`".into(),
                            })
                        }
                    }
                }
                "title" => title = value.trim_matches('"').to_string(),
                "description" => description = value.trim_matches('"').to_string(),
                _ => {
                    return Err(RuleError::Syntax {
                        line: lineno,
                        expected: "category/type/site/boundary/title/description".into(),
                    })
                }
            }
        }
        if !closed {
            return Err(RuleError::Syntax {
                line: lineno,
                expected: "closing `}`".into(),
            });
        }
        let type_name = threat_type_name.ok_or(RuleError::Syntax {
            line: lineno,
            expected: "a `type:` entry".into(),
        })?;
        let threat_type = ThreatType::parse(&type_name).ok_or(RuleError::UnknownThreatType {
            rule: id.clone(),
            name: type_name,
        })?;
        let category = category.unwrap_or_else(|| threat_type.category());
        if category != threat_type.category() {
            return Err(RuleError::CategoryMismatch {
                rule: id,
                category,
                threat_type,
                parent: threat_type.category(),
            });
        }
        let site = site.ok_or(RuleError::Syntax {
            line: lineno,
            expected: "a `site:` entry".into(),
        })?;
        if !matrix_allows(category, &site) {
            return Err(RuleError::MatrixViolation {
                rule: id,
                category,
                site: site.name(),
            });
        }
        rules.push(ThreatRule {
            rule_id: id,
            category,
            threat_type,
            site,
            requires_boundary_crossing: boundary,
            title_template: title,
            description,
        });
    }
    Ok(RuleSet { version, rules })
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => line[..i].trim(),
        None => line.trim(),
    }
}

/// The bundled default rule set: one rule per taxonomy type.
pub fn default_rules() -> RuleSet {
    load_rules(DEFAULT_RULES_TEXT).expect("bundled rule set parses")
}

pub const DEFAULT_RULES_TEXT: &str = include_str!("../data/default.rules");

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratedThreat {
    /// Deterministic token: `<layer>:<subject id>:<rule id>`.
    pub threat_id: String,
    pub rule_id: String,
    pub category: StrideCategory,
    pub threat_type: ThreatType,
    pub subject: Subject,
    pub layer: u8,
    pub system_group: SystemGroup,
}

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("model has validation errors ({0} diagnostics)")]
    InvalidModel(usize),
}

/// Enumerate every threat the rule set generates over the model.
///
/// Fails if the model has validation errors. Output is sorted by
/// `(layer, subject id, rule id)`; identical inputs yield identical
/// lists.
pub fn enumerate_threats(
    model: &LayeredModel,
    rules: &RuleSet,
) -> Result<Vec<GeneratedThreat>, EngineError> {
    let diags = validate(model);
    if !is_valid(&diags) {
        let errors = diags
            .iter()
            .filter(|d| d.severity == crate::validate::Severity::Error)
            .count();
        return Err(EngineError::InvalidModel(errors));
    }
    let mut threats = Vec::new();
    for dfd in model.models() {
        let ctx = ModelIndex::new(dfd);
        for rule in &rules.rules {
            for subject in ctx.select(&rule.site) {
                if rule.requires_boundary_crossing && !ctx.subject_crosses(&subject) {
                    continue;
                }
                threats.push(GeneratedThreat {
                    threat_id: format!("{}:{}:{}", dfd.layer, subject.id, rule.rule_id),
                    rule_id: rule.rule_id.clone(),
                    category: rule.category,
                    threat_type: rule.threat_type,
                    system_group: ctx.attribute(&subject),
                    subject,
                    layer: dfd.layer,
                });
            }
        }
    }
    threats.sort_by(|a, b| {
        (a.layer, &a.subject.id, &a.rule_id).cmp(&(b.layer, &b.subject.id, &b.rule_id))
    });
    Ok(threats)
}

/// Validation wrapper that reports the offending diagnostics.
pub fn check_model(model: &LayeredModel) -> Result<(), Vec<Diagnostic>> {
    let diags = validate(model);
    if is_valid(&diags) {
        Ok(())
    } else {
        Err(diags)
    }
}

/// Per-model lookup tables used during enumeration.
struct ModelIndex<'a> {
    dfd: &'a DfdModel,
    crossing_flows: Vec<bool>,
}

impl<'a> ModelIndex<'a> {
    fn new(dfd: &'a DfdModel) -> Self {
        let crossing_flows = dfd.flows.iter().map(|f| dfd.flow_crosses(f)).collect();
        ModelIndex {
            dfd,
            crossing_flows,
        }
    }

    fn kind_of(&self, id: &str) -> Option<ElementKind> {
        self.dfd.element(id).map(|e| e.kind)
    }

    fn select(&self, site: &SitePattern) -> Vec<Subject> {
        let mut out = Vec::new();
        if site.selects_flows() {
            for f in &self.dfd.flows {
                let hit = match site {
                    SitePattern::FlowAny => true,
                    SitePattern::FlowIntoProcess => {
                        self.kind_of(&f.target) == Some(ElementKind::Process)
                    }
                    SitePattern::FlowFromProcess => {
                        self.kind_of(&f.source) == Some(ElementKind::Process)
                    }
                    SitePattern::FlowFromDataStore => {
                        self.kind_of(&f.source) == Some(ElementKind::DataStore)
                    }
                    _ => unreachable!(),
                };
                if hit {
                    out.push(Subject {
                        kind: SubjectKind::Flow,
                        id: f.id.clone(),
                    });
                }
            }
        } else {
            for e in &self.dfd.elements {
                let hit = match site {
                    SitePattern::ProcessAny => e.kind == ElementKind::Process,
                    SitePattern::ProcessWithTag(tag) => {
                        e.kind == ElementKind::Process && e.has_tag(tag)
                    }
                    SitePattern::DataStoreAny => e.kind == ElementKind::DataStore,
                    SitePattern::ExternalEntitySource => {
                        e.kind == ElementKind::ExternalEntity
                            && self.dfd.flows.iter().any(|f| f.source == e.id)
                    }
                    _ => unreachable!(),
                };
                if hit {
                    out.push(Subject {
                        kind: SubjectKind::Element,
                        id: e.id.clone(),
                    });
                }
            }
        }
        out
    }

    fn subject_crosses(&self, subject: &Subject) -> bool {
        match subject.kind {
            SubjectKind::Flow => self
                .dfd
                .flows
                .iter()
                .position(|f| f.id == subject.id)
                .map(|i| self.crossing_flows[i])
                .unwrap_or(false),
            // An element-sited rule with a boundary requirement fires when
            // any incident flow crosses a boundary.
            SubjectKind::Element => self
                .dfd
                .flows
                .iter()
                .enumerate()
                .any(|(i, f)| {
                    (f.source == subject.id || f.target == subject.id) && self.crossing_flows[i]
                }),
        }
    }

    fn attribute(&self, subject: &Subject) -> SystemGroup {
        let group = match subject.kind {
            SubjectKind::Element => self.dfd.element(&subject.id).and_then(|e| e.group),
            SubjectKind::Flow => {
                let flow = self.dfd.flow(&subject.id).expect("subject flow exists");
                self.element_group(&flow.source)
                    .or_else(|| self.element_group(&flow.target))
            }
        };
        group.map(SystemGroup::Indicator).unwrap_or(SystemGroup::Dashboard)
    }

    fn element_group(&self, id: &str) -> Option<IndicatorGroup> {
        self.dfd.element(id).and_then(|e: &Element| e.group)
    }
}

/// Threat counts per STRIDE category, zero-filled over all six.
pub fn count_by_category(threats: &[GeneratedThreat]) -> BTreeMap<StrideCategory, usize> {
    let mut out: BTreeMap<StrideCategory, usize> =
        StrideCategory::ALL.into_iter().map(|c| (c, 0)).collect();
    for t in threats {
        *out.get_mut(&t.category).unwrap() += 1;
    }
    out
}

/// Threat counts per system group; only groups that occur get an entry.
pub fn count_by_system(threats: &[GeneratedThreat]) -> BTreeMap<SystemGroup, usize> {
    let mut out = BTreeMap::new();
    for t in threats {
        *out.entry(t.system_group).or_insert(0) += 1;
    }
    out
}

/// A threat's taxonomy type (total; recorded at generation time).
pub fn classify(threat: &GeneratedThreat) -> ThreatType {
    threat.threat_type
}
