//! Layered data-flow-diagram model.
//!
//! A [`LayeredModel`] is a tree of [`DfdModel`]s: a compulsory layer-0
//! context model plus zero or more expansions, each refining one layer-N
//! process into a layer-N+1 model. All types are immutable after parsing
//! and safe to share across threads.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Deepest layer supported (layers 0 through 3).
pub const MAX_LAYER: u8 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ElementKind {
    Process,
    DataStore,
    ExternalEntity,
}

impl ElementKind {
    /// Keyword used in the model language.
    pub fn keyword(self) -> &'static str {
        match self {
            ElementKind::Process => "process",
            ElementKind::DataStore => "store",
            ElementKind::ExternalEntity => "external",
        }
    }
}

/// One of the four outcome-based indicator groups.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IndicatorGroup {
    CitizenServices,
    LivelihoodSupport,
    EssentialServices,
    Resources,
}

impl IndicatorGroup {
    pub const ALL: [IndicatorGroup; 4] = [
        IndicatorGroup::CitizenServices,
        IndicatorGroup::LivelihoodSupport,
        IndicatorGroup::EssentialServices,
        IndicatorGroup::Resources,
    ];

    pub fn name(self) -> &'static str {
        match self {
            IndicatorGroup::CitizenServices => "citizen-services",
            IndicatorGroup::LivelihoodSupport => "livelihood-support",
            IndicatorGroup::EssentialServices => "essential-services",
            IndicatorGroup::Resources => "resources",
        }
    }

    pub fn display(self) -> &'static str {
        match self {
            IndicatorGroup::CitizenServices => "Citizen Services",
            IndicatorGroup::LivelihoodSupport => "Livelihood Support",
            IndicatorGroup::EssentialServices => "Essential Services",
            IndicatorGroup::Resources => "Resources",
        }
    }

    pub fn parse(s: &str) -> Option<IndicatorGroup> {
        IndicatorGroup::ALL.into_iter().find(|g| g.name() == s)
    }
}

impl std::fmt::Display for IndicatorGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Element {
    pub id: String,
    pub kind: ElementKind,
    pub display_name: String,
    #[serde(default, skip_serializing_if = "BTreeSet::is_empty")]
    pub tags: BTreeSet<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<IndicatorGroup>,
    pub layer: u8,
}

impl Element {
    pub fn new(id: impl Into<String>, kind: ElementKind, display_name: impl Into<String>, layer: u8) -> Self {
        Element {
            id: id.into(),
            kind,
            display_name: display_name.into(),
            tags: BTreeSet::new(),
            group: None,
            layer,
        }
    }

    pub fn with_tag(mut self, tag: impl Into<String>) -> Self {
        self.tags.insert(tag.into());
        self
    }

    pub fn with_group(mut self, group: IndicatorGroup) -> Self {
        self.group = Some(group);
        self
    }

    pub fn has_tag(&self, tag: &str) -> bool {
        self.tags.contains(tag)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DataFlow {
    pub id: String,
    pub source: String,
    pub target: String,
    pub label: String,
    #[serde(default, skip_serializing_if = "BTreeSet::is_empty")]
    pub crossed_boundaries: BTreeSet<String>,
}

impl DataFlow {
    pub fn new(
        id: impl Into<String>,
        source: impl Into<String>,
        target: impl Into<String>,
        label: impl Into<String>,
    ) -> Self {
        DataFlow {
            id: id.into(),
            source: source.into(),
            target: target.into(),
            label: label.into(),
            crossed_boundaries: BTreeSet::new(),
        }
    }

    pub fn crossing(mut self, boundary: impl Into<String>) -> Self {
        self.crossed_boundaries.insert(boundary.into());
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrustBoundary {
    pub id: String,
    pub display_name: String,
    pub members: BTreeSet<String>,
}

impl TrustBoundary {
    pub fn new<I, S>(id: impl Into<String>, display_name: impl Into<String>, members: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        TrustBoundary {
            id: id.into(),
            display_name: display_name.into(),
            members: members.into_iter().map(Into::into).collect(),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("unknown flow `{0}`")]
pub struct UnknownFlow(pub String);

/// A single-layer data-flow diagram: a directed multigraph of elements,
/// flows and trust boundaries.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct DfdModel {
    pub layer: u8,
    pub elements: Vec<Element>,
    pub flows: Vec<DataFlow>,
    pub boundaries: Vec<TrustBoundary>,
}

impl DfdModel {
    pub fn new(layer: u8) -> Self {
        DfdModel {
            layer,
            ..Default::default()
        }
    }

    pub fn element(&self, id: &str) -> Option<&Element> {
        self.elements.iter().find(|e| e.id == id)
    }

    pub fn flow(&self, id: &str) -> Option<&DataFlow> {
        self.flows.iter().find(|f| f.id == id)
    }

    pub fn boundary(&self, id: &str) -> Option<&TrustBoundary> {
        self.boundaries.iter().find(|b| b.id == id)
    }

    /// Ids of every boundary the given element belongs to.
    pub fn boundary_membership(&self, element_id: &str) -> BTreeSet<&str> {
        self.boundaries
            .iter()
            .filter(|b| b.members.contains(element_id))
            .map(|b| b.id.as_str())
            .collect()
    }

    /// Whether a flow crosses a trust boundary.
    ///
    /// True iff the flow declares crossings or its endpoints have
    /// differing boundary membership. Mismatches between the declared set
    /// and membership are surfaced by [`validate`](crate::validate::validate)
    /// as a `crossing-mismatch` warning; membership is authoritative there.
    pub fn crosses_boundary(&self, flow_id: &str) -> Result<bool, UnknownFlow> {
        let flow = self
            .flow(flow_id)
            .ok_or_else(|| UnknownFlow(flow_id.to_string()))?;
        Ok(self.flow_crosses(flow))
    }

    /// Same check for a flow reference already in hand.
    pub fn flow_crosses(&self, flow: &DataFlow) -> bool {
        !flow.crossed_boundaries.is_empty() || self.membership_differs(flow)
    }

    /// Membership-derived crossing truth, ignoring the declared set.
    pub fn membership_differs(&self, flow: &DataFlow) -> bool {
        self.boundary_membership(&flow.source) != self.boundary_membership(&flow.target)
    }

    /// Sort elements, flows and boundaries by id. Parsing and template
    /// generation always produce canonical models; call this after
    /// building one by hand if you need structural comparison.
    pub fn canonicalize(&mut self) {
        self.elements.sort_by(|a, b| a.id.cmp(&b.id));
        self.flows.sort_by(|a, b| a.id.cmp(&b.id));
        self.boundaries.sort_by(|a, b| a.id.cmp(&b.id));
    }
}

/// One layer-expansion link: `parent` (a process at layer N) is refined by
/// `model` (at layer N+1).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Expansion {
    pub parent: String,
    pub model: DfdModel,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayeredModel {
    pub name: String,
    /// The compulsory layer-0 context model.
    pub root: DfdModel,
    pub expansions: Vec<Expansion>,
}

impl LayeredModel {
    pub fn new(name: impl Into<String>) -> Self {
        LayeredModel {
            name: name.into(),
            root: DfdModel::new(0),
            expansions: Vec::new(),
        }
    }

    /// Every model in the tree: the root followed by expansion children,
    /// in canonical (parent id) order.
    pub fn models(&self) -> impl Iterator<Item = &DfdModel> {
        std::iter::once(&self.root).chain(self.expansions.iter().map(|e| &e.model))
    }

    /// Models sitting at the given layer.
    pub fn models_at(&self, layer: u8) -> Vec<&DfdModel> {
        self.models().filter(|m| m.layer == layer).collect()
    }

    /// The model that declares the given element, if any.
    pub fn model_of_element(&self, element_id: &str) -> Option<&DfdModel> {
        self.models().find(|m| m.element(element_id).is_some())
    }

    pub fn element(&self, id: &str) -> Option<&Element> {
        self.models().find_map(|m| m.element(id))
    }

    pub fn element_count(&self) -> usize {
        self.models().map(|m| m.elements.len()).sum()
    }

    pub fn flow_count(&self) -> usize {
        self.models().map(|m| m.flows.len()).sum()
    }

    pub fn canonicalize(&mut self) {
        self.root.canonicalize();
        for exp in &mut self.expansions {
            exp.model.canonicalize();
        }
        self.expansions.sort_by(|a, b| a.parent.cmp(&b.parent));
    }
}
