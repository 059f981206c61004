//! Threat modeling as code for smart city infrastructure.
//!
//! `scitm` parses a small text language describing layered data-flow
//! diagrams, validates the model, enumerates STRIDE threats from a
//! data-driven rule set, and annotates every threat with Budapest
//! Convention offences and a volatility-ordered forensic evidence
//! checklist. A reconstructed Smart City Infrastructure template ships
//! with the crate, and reports render as canonical JSON, Markdown or
//! Graphviz DOT.
//!
//! ```
//! use scitm::template::default_template;
//! use scitm::engine::default_rules;
//! use scitm::crimemap::default_mappings;
//! use scitm::report::build_report;
//!
//! let model = default_template();
//! let report = build_report(&model, &default_rules(), &default_mappings()).unwrap();
//! assert!(report.stats.total > 1000);
//! ```

pub mod crimemap;
pub mod dot;
pub mod engine;
pub mod model;
pub mod parser;
pub mod report;
pub mod template;
pub mod validate;

pub use crimemap::{annotate, default_mappings, load_mappings, AnnotatedThreat, MappingSet};
pub use engine::{
    default_rules, enumerate_threats, load_rules, GeneratedThreat, RuleSet, StrideCategory,
    ThreatType,
};
pub use model::{DfdModel, Element, ElementKind, IndicatorGroup, LayeredModel};
pub use parser::{emit_text, parse_model, ParseError};
pub use report::{build_report, render_json, render_markdown, Report};
pub use template::{default_assignment, default_template, instantiate_template, GroupAssignment};
pub use validate::{validate, Diagnostic, Severity};

/// The guide chapters double as doc-tests so their code samples stay
/// compilable against the current API.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/modeling-language.md")]
    mod modeling_language {}
    #[doc = include_str!("../../../book/src/validation-and-diagrams.md")]
    mod validation_and_diagrams {}
    #[doc = include_str!("../../../book/src/threat-enumeration.md")]
    mod threat_enumeration {}
    #[doc = include_str!("../../../book/src/smart-city-template.md")]
    mod smart_city_template {}
    #[doc = include_str!("../../../book/src/offences-and-evidence.md")]
    mod offences_and_evidence {}
    #[doc = include_str!("../../../book/src/reports-and-cli.md")]
    mod reports_and_cli {}
}
