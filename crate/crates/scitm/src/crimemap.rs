//! Offence and forensic-evidence mappings.
//!
//! Associates every taxonomy threat type with Budapest Convention
//! offences (articles 2-7) and with forensic evidence sources and item
//! checklists ordered by volatility. The associations ship as versioned
//! data, not code constants, so legal revisions can land as data updates;
//! every report pins the mapping version it used.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::engine::{GeneratedThreat, ThreatType};

/// Substantive cybercrime offences of the Budapest Convention.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OffenceArticle {
    IllegalAccess,
    IllegalInterception,
    DataInterference,
    SystemInterference,
    MisuseOfDevices,
    ComputerRelatedForgery,
}

impl OffenceArticle {
    pub const ALL: [OffenceArticle; 6] = [
        OffenceArticle::IllegalAccess,
        OffenceArticle::IllegalInterception,
        OffenceArticle::DataInterference,
        OffenceArticle::SystemInterference,
        OffenceArticle::MisuseOfDevices,
        OffenceArticle::ComputerRelatedForgery,
    ];

    pub fn number(self) -> u8 {
        match self {
            OffenceArticle::IllegalAccess => 2,
            OffenceArticle::IllegalInterception => 3,
            OffenceArticle::DataInterference => 4,
            OffenceArticle::SystemInterference => 5,
            OffenceArticle::MisuseOfDevices => 6,
            OffenceArticle::ComputerRelatedForgery => 7,
        }
    }

    pub fn from_number(n: u8) -> Option<Self> {
        Self::ALL.into_iter().find(|a| a.number() == n)
    }

    pub fn display(self) -> &'static str {
        match self {
            OffenceArticle::IllegalAccess => "Illegal Access",
            OffenceArticle::IllegalInterception => "Illegal Interception",
            OffenceArticle::DataInterference => "Data Interference",
            OffenceArticle::SystemInterference => "System Interference",
            OffenceArticle::MisuseOfDevices => "Misuse of Devices",
            OffenceArticle::ComputerRelatedForgery => "Computer-related Forgery",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EvidenceSource {
    SciSystems,
    SciNetworkInfrastructure,
    AdversarialSystems,
    SciWebServers,
    UserDevices,
}

impl EvidenceSource {
    pub fn name(self) -> &'static str {
        match self {
            EvidenceSource::SciSystems => "sci-systems",
            EvidenceSource::SciNetworkInfrastructure => "sci-network-infrastructure",
            EvidenceSource::AdversarialSystems => "adversarial-systems",
            EvidenceSource::SciWebServers => "sci-web-servers",
            EvidenceSource::UserDevices => "user-devices",
        }
    }

    pub fn display(self) -> &'static str {
        match self {
            EvidenceSource::SciSystems => "SCI systems",
            EvidenceSource::SciNetworkInfrastructure => "SCI network infrastructure",
            EvidenceSource::AdversarialSystems => "Adversarial systems",
            EvidenceSource::SciWebServers => "SCI web servers",
            EvidenceSource::UserDevices => "User devices",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [
            EvidenceSource::SciSystems,
            EvidenceSource::SciNetworkInfrastructure,
            EvidenceSource::AdversarialSystems,
            EvidenceSource::SciWebServers,
            EvidenceSource::UserDevices,
        ]
        .into_iter()
        .find(|x| x.name() == s)
    }
}

/// Known evidence item names with their volatility rank (lower = more
/// volatile, so items should be acquired in ascending rank order).
/// Items sharing a rank form a tie group.
pub const VOLATILITY_RANKS: &[(&str, u8)] = &[
    ("network traffic", 1),
    ("device logs", 2),
    ("server logs", 2),
    ("system logs", 2),
    ("web server logs", 2),
    ("browser history", 3),
    ("device artifacts", 3),
    ("SCI data stores", 3),
    ("malicious binaries", 3),
    ("SCI executable programs", 3),
    ("memory images", 4),
    ("hard disk images", 5),
    ("devices used to commit crimes", 5),
];

pub fn volatility_rank(name: &str) -> Option<u8> {
    VOLATILITY_RANKS
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, r)| *r)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvidenceItem {
    pub name: String,
    pub source: EvidenceSource,
    pub volatility_rank: u8,
}

/// One threat type's evidence row: sources in table order and a checklist
/// grouped per source, volatility-ordered within each group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvidenceRow {
    pub sources: Vec<EvidenceSource>,
    pub items: Vec<EvidenceItem>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MappingSet {
    pub version: String,
    offences: BTreeMap<ThreatType, Vec<OffenceArticle>>,
    evidence: BTreeMap<ThreatType, EvidenceRow>,
}

impl MappingSet {
    /// Offences for a threat type, ordered by article number. Total over
    /// the taxonomy.
    pub fn offences_for(&self, t: ThreatType) -> &[OffenceArticle] {
        &self.offences[&t]
    }

    /// Evidence sources and volatility-ordered items for a threat type.
    pub fn evidence_for(&self, t: ThreatType) -> &EvidenceRow {
        &self.evidence[&t]
    }

    /// Hex SHA-256 over the canonical serialization of the mapping data.
    pub fn checksum(&self) -> String {
        use sha2::{Digest, Sha256};
        let mut hasher = Sha256::new();
        hasher.update(self.version.as_bytes());
        for t in ThreatType::ALL {
            hasher.update(t.name().as_bytes());
            for a in self.offences_for(t) {
                hasher.update([a.number()]);
            }
            let row = self.evidence_for(t);
            for s in &row.sources {
                hasher.update(s.name().as_bytes());
            }
            for item in &row.items {
                hasher.update(item.source.name().as_bytes());
                hasher.update(item.name.as_bytes());
                hasher.update([item.volatility_rank]);
            }
        }
        hex_string(&hasher.finalize())
    }
}

fn hex_string(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MappingError {
    #[error("line {line}: syntax error: expected {expected}")]
    Syntax { line: u32, expected: String },
    #[error("missing version header")]
    MissingVersion,
    #[error("unknown threat type `{0}`")]
    UnknownThreatType(String),
    #[error("duplicate stanza for `{0}`")]
    DuplicateThreat(String),
    #[error("no stanza for threat type `{0}`")]
    MissingThreat(String),
    #[error("threat `{threat}`: unknown offence article {article}")]
    UnknownArticle { threat: String, article: u32 },
    #[error("threat `{threat}`: unknown evidence source `{source_name}`")]
    UnknownSource { threat: String, source_name: String },
    #[error("threat `{threat}`: unknown evidence item `{item}`")]
    UnknownItem { threat: String, item: String },
    #[error("threat `{0}`: offence list is empty")]
    EmptyOffences(String),
    #[error("threat `{0}`: offence list lacks Misuse of Devices (Article 6)")]
    MissingArticleSix(String),
    #[error("threat `{threat}`: evidence listed for `{source_name}`, which is not in its source list")]
    ItemSourceNotListed { threat: String, source_name: String },
}

/// Parse a mapping data file.
///
/// ```text
/// version "1.0.0"
///
/// threat data-flow-sniffing {
///   offences: 2, 3, 6;
///   sources: sci-systems, adversarial-systems;
///   evidence sci-systems: device logs, server logs;
///   evidence adversarial-systems: memory images;
/// }
/// ```
///
/// Items are stably sorted by volatility rank within each source group,
/// so files may list a tie group in any order.
pub fn load_mappings(text: &str) -> Result<MappingSet, MappingError> {
    let mut version: Option<String> = None;
    let mut offences: BTreeMap<ThreatType, Vec<OffenceArticle>> = BTreeMap::new();
    let mut evidence: BTreeMap<ThreatType, EvidenceRow> = BTreeMap::new();

    let mut lines = text.lines().enumerate();
    while let Some((idx, raw)) = lines.next() {
        let line = strip_comment(raw);
        let lineno = idx as u32 + 1;
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("version") {
            version = Some(rest.trim().trim_matches('"').to_string());
            continue;
        }
        let Some(rest) = line.strip_prefix("threat ") else {
            return Err(MappingError::Syntax {
                line: lineno,
                expected: "`threat <type> {` or `version`".into(),
            });
        };
        let Some(name) = rest.trim().strip_suffix('{').map(str::trim) else {
            return Err(MappingError::Syntax {
                line: lineno,
                expected: "`{` after threat type".into(),
            });
        };
        let threat = ThreatType::parse(name)
            .ok_or_else(|| MappingError::UnknownThreatType(name.to_string()))?;
        if offences.contains_key(&threat) {
            return Err(MappingError::DuplicateThreat(name.to_string()));
        }

        let mut arts: Vec<OffenceArticle> = Vec::new();
        let mut sources: Vec<EvidenceSource> = Vec::new();
        let mut items: Vec<EvidenceItem> = Vec::new();
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
            if let Some(rest) = line.strip_prefix("offences:") {
                for part in rest.trim_end_matches(';').split(',') {
                    let n: u32 = part.trim().parse().map_err(|_| MappingError::Syntax {
                        line: lineno,
                        expected: "an article number".into(),
                    })?;
                    let art = OffenceArticle::from_number(n as u8).ok_or(
                        MappingError::UnknownArticle {
                            threat: name.to_string(),
                            article: n,
                        },
                    )?;
                    arts.push(art);
                }
            } else if let Some(rest) = line.strip_prefix("sources:") {
                for part in rest.trim_end_matches(';').split(',') {
                    let src = EvidenceSource::parse(part.trim()).ok_or_else(|| {
                        MappingError::UnknownSource {
                            threat: name.to_string(),
                            source_name: part.trim().to_string(),
                        }
                    })?;
                    sources.push(src);
                }
            } else if let Some(rest) = line.strip_prefix("evidence ") {
                let Some((src_name, list)) = rest.split_once(':') else {
                    return Err(MappingError::Syntax {
                        line: lineno,
                        expected: "`evidence <source>: <items>;`".into(),
                    });
                };
                let source = EvidenceSource::parse(src_name.trim()).ok_or_else(|| {
                    MappingError::UnknownSource {
                        threat: name.to_string(),
                        source_name: src_name.trim().to_string(),
                    }
                })?;
                if !sources.contains(&source) {
                    return Err(MappingError::ItemSourceNotListed {
                        threat: name.to_string(),
                        source_name: src_name.trim().to_string(),
                    });
                }
                for part in list.trim_end_matches(';').split(',') {
                    let item_name = part.trim();
                    if item_name.is_empty() {
                        continue;
                    }
                    let rank =
                        volatility_rank(item_name).ok_or_else(|| MappingError::UnknownItem {
                            threat: name.to_string(),
                            item: item_name.to_string(),
                        })?;
                    items.push(EvidenceItem {
                        name: item_name.to_string(),
                        source,
                        volatility_rank: rank,
                    });
                }
            } else {
                return Err(MappingError::Syntax {
                    line: lineno,
                    expected: "`offences:`, `sources:` or `evidence <source>:`".into(),
                });
            }
        }
        if !closed {
            return Err(MappingError::Syntax {
                line: lineno,
                expected: "closing `}`".into(),
            });
        }
        if arts.is_empty() {
            return Err(MappingError::EmptyOffences(name.to_string()));
        }
        if !arts.contains(&OffenceArticle::MisuseOfDevices) {
            return Err(MappingError::MissingArticleSix(name.to_string()));
        }
        arts.sort();
        arts.dedup();

        // Keep items grouped in source order, volatility-ordered inside
        // each group (stable, so ties keep file order).
        let mut ordered = Vec::with_capacity(items.len());
        for src in &sources {
            let mut group: Vec<EvidenceItem> =
                items.iter().filter(|i| i.source == *src).cloned().collect();
            group.sort_by_key(|i| i.volatility_rank);
            ordered.extend(group);
        }

        offences.insert(threat, arts);
        evidence.insert(
            threat,
            EvidenceRow {
                sources,
                items: ordered,
            },
        );
    }

    let version = version.ok_or(MappingError::MissingVersion)?;
    for t in ThreatType::ALL {
        if !offences.contains_key(&t) {
            return Err(MappingError::MissingThreat(t.name().to_string()));
        }
    }
    Ok(MappingSet {
        version,
        offences,
        evidence,
    })
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => line[..i].trim(),
        None => line.trim(),
    }
}

pub const DEFAULT_MAPPINGS_TEXT: &str = include_str!("../data/default.mappings");

/// The bundled offence/evidence tables.
pub fn default_mappings() -> MappingSet {
    load_mappings(DEFAULT_MAPPINGS_TEXT).expect("bundled mapping data parses")
}

/// A generated threat paired with its offence and evidence rows.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnnotatedThreat {
    #[serde(flatten)]
    pub threat: GeneratedThreat,
    pub offences: Vec<OffenceArticle>,
    pub evidence: EvidenceRow,
}

/// Annotate each threat with its offence set and evidence row, preserving
/// list order.
pub fn annotate(threats: &[GeneratedThreat], mappings: &MappingSet) -> Vec<AnnotatedThreat> {
    threats
        .iter()
        .map(|t| AnnotatedThreat {
            threat: t.clone(),
            offences: mappings.offences_for(t.threat_type).to_vec(),
            evidence: mappings.evidence_for(t.threat_type).clone(),
        })
        .collect()
}
