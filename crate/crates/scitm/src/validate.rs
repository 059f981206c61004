//! Structural validation of layered models.
//!
//! [`validate`] re-checks every type invariant on an in-memory model, so
//! models built programmatically get the same guarantees as parsed ones.
//! Errors mean an invariant is broken; warnings flag suspicious but legal
//! structure (isolated elements, never-crossed boundaries, crossing
//! declarations that disagree with boundary membership).

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::model::{DfdModel, ElementKind, LayeredModel, MAX_LAYER};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Severity {
    Error,
    Warning,
}

impl std::fmt::Display for Severity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Severity::Error => "error",
            Severity::Warning => "warning",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub severity: Severity,
    pub code: String,
    pub message: String,
}

impl Diagnostic {
    fn error(code: &str, message: String) -> Self {
        Diagnostic {
            severity: Severity::Error,
            code: code.into(),
            message,
        }
    }

    fn warning(code: &str, message: String) -> Self {
        Diagnostic {
            severity: Severity::Warning,
            code: code.into(),
            message,
        }
    }
}

/// Validate a layered model. Returns an ordered diagnostic list; the list
/// contains no `Error` entries iff every type invariant holds.
pub fn validate(model: &LayeredModel) -> Vec<Diagnostic> {
    let mut out = Vec::new();

    if model.root.layer != 0 {
        out.push(Diagnostic::error(
            "layer-violation",
            format!("root model must sit at layer 0, found layer {}", model.root.layer),
        ));
    }

    // Global id uniqueness across elements, flows and boundaries.
    let mut seen: BTreeMap<&str, usize> = BTreeMap::new();
    for m in model.models() {
        for id in m
            .elements
            .iter()
            .map(|e| e.id.as_str())
            .chain(m.flows.iter().map(|f| f.id.as_str()))
            .chain(m.boundaries.iter().map(|b| b.id.as_str()))
        {
            *seen.entry(id).or_default() += 1;
        }
    }
    for (id, n) in &seen {
        if *n > 1 {
            out.push(Diagnostic::error(
                "duplicate-id",
                format!("id `{id}` declared {n} times"),
            ));
        }
    }

    for m in model.models() {
        validate_dfd(m, &mut out);
    }

    // Expansion discipline.
    let mut expanded: BTreeSet<&str> = BTreeSet::new();
    for exp in &model.expansions {
        if !expanded.insert(exp.parent.as_str()) {
            out.push(Diagnostic::error(
                "duplicate-expansion",
                format!("element `{}` is expanded more than once", exp.parent),
            ));
        }
        match model.element(&exp.parent) {
            None => out.push(Diagnostic::error(
                "dangling-reference",
                format!("expansion parent `{}` is not declared", exp.parent),
            )),
            Some(parent) => {
                if parent.kind != ElementKind::Process {
                    out.push(Diagnostic::error(
                        "expansion-parent-not-process",
                        format!("expansion parent `{}` is a {:?}", exp.parent, parent.kind),
                    ));
                }
                if exp.model.layer != parent.layer + 1 {
                    out.push(Diagnostic::error(
                        "layer-violation",
                        format!(
                            "expansion of `{}` (layer {}) must sit at layer {}, found {}",
                            exp.parent,
                            parent.layer,
                            parent.layer + 1,
                            exp.model.layer
                        ),
                    ));
                }
            }
        }
        if exp.model.layer > MAX_LAYER {
            out.push(Diagnostic::error(
                "layer-violation",
                format!("layer {} exceeds the maximum layer {MAX_LAYER}", exp.model.layer),
            ));
        }
    }

    out
}

fn validate_dfd(m: &DfdModel, out: &mut Vec<Diagnostic>) {
    for e in &m.elements {
        if e.layer != m.layer {
            out.push(Diagnostic::error(
                "layer-violation",
                format!(
                    "element `{}` carries layer {} but sits in a layer-{} model",
                    e.id, e.layer, m.layer
                ),
            ));
        }
    }

    for b in &m.boundaries {
        if b.members.is_empty() {
            out.push(Diagnostic::error(
                "empty-boundary",
                format!("boundary `{}` has no members", b.id),
            ));
        }
        for member in &b.members {
            if m.element(member).is_none() {
                out.push(Diagnostic::error(
                    "dangling-reference",
                    format!("boundary `{}` member `{member}` is not declared", b.id),
                ));
            }
        }
    }

    for f in &m.flows {
        if f.source == f.target {
            out.push(Diagnostic::error(
                "self-loop-flow",
                format!("flow `{}` has identical source and target", f.id),
            ));
        }
        for end in [&f.source, &f.target] {
            if m.element(end).is_none() {
                out.push(Diagnostic::error(
                    "dangling-reference",
                    format!("flow `{}` references undeclared element `{end}`", f.id),
                ));
            }
        }
        let mut endpoints_ok = true;
        for b in &f.crossed_boundaries {
            if m.boundary(b).is_none() {
                out.push(Diagnostic::error(
                    "dangling-reference",
                    format!("flow `{}` crosses undeclared boundary `{b}`", f.id),
                ));
                endpoints_ok = false;
            }
        }
        // Declared crossings are documentation; membership is the truth.
        if endpoints_ok && m.element(&f.source).is_some() && m.element(&f.target).is_some() {
            let derived = m.membership_differs(f);
            let declared = !f.crossed_boundaries.is_empty();
            if declared != derived {
                out.push(Diagnostic::warning(
                    "crossing-mismatch",
                    format!(
                        "flow `{}` declares crossing={declared} but boundary membership says {derived}",
                        f.id
                    ),
                ));
            }
        }
    }

    for e in &m.elements {
        let incident = m
            .flows
            .iter()
            .any(|f| f.source == e.id || f.target == e.id);
        if !incident {
            out.push(Diagnostic::warning(
                "isolated-element",
                format!("element `{}` has no incident flows", e.id),
            ));
        }
    }

    for b in &m.boundaries {
        let crossed = m.flows.iter().any(|f| {
            f.crossed_boundaries.contains(&b.id) || {
                let src_in = b.members.contains(&f.source);
                let dst_in = b.members.contains(&f.target);
                src_in != dst_in
            }
        });
        if !crossed {
            out.push(Diagnostic::warning(
                "boundary-never-crossed",
                format!("boundary `{}` is never crossed by any flow", b.id),
            ));
        }
    }
}

/// True iff the diagnostics contain no errors.
pub fn is_valid(diags: &[Diagnostic]) -> bool {
    diags.iter().all(|d| d.severity != Severity::Error)
}
