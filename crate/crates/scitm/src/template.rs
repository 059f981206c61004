//! The bundled Smart City Infrastructure template.
//!
//! Instantiates a layered model from the nineteen ISO data-indicator
//! clauses (numbers 5-23): a layer-0 context model around the Smart City
//! System Dashboard plus one layer-1 model per indicator group, each
//! holding one subsystem instance per clause assigned to that group.
//!
//! The clause-to-group assignment is a reconstruction constrained by the
//! one hard fact available: the Resources group has the fewest
//! indicators. It ships as a data file users can override.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::model::{
    DataFlow, DfdModel, Element, ElementKind, Expansion, IndicatorGroup, LayeredModel,
    TrustBoundary,
};

/// The nineteen indicator clauses shared by the ISO measurement
/// standards.
pub const CLAUSES: [(u8, &str); 19] = [
    (5, "Economy"),
    (6, "Education"),
    (7, "Energy"),
    (8, "Environment and Climate Change"),
    (9, "Finance"),
    (10, "Governance"),
    (11, "Health"),
    (12, "Housing"),
    (13, "Population and Social Conditions"),
    (14, "Recreation"),
    (15, "Safety"),
    (16, "Solid Waste"),
    (17, "Sport and Culture"),
    (18, "Telecommunication"),
    (19, "Transportation"),
    (20, "Urban/Local Agriculture and Food Security"),
    (21, "Urban Planning"),
    (22, "Wastewater"),
    (23, "Water"),
];

pub fn clause_name(number: u8) -> Option<&'static str> {
    CLAUSES.iter().find(|(n, _)| *n == number).map(|(_, s)| *s)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AssignmentError {
    #[error("line {line}: expected `clause <n> -> <group>`")]
    Syntax { line: u32 },
    #[error("unknown clause number {0} (clauses run 5-23)")]
    UnknownClause(u8),
    #[error("unknown indicator group `{0}`")]
    UnknownGroup(String),
    #[error("clause {0} assigned more than once")]
    DuplicateClause(u8),
    #[error("clause {0} is unassigned")]
    MissingClause(u8),
    #[error("group {0} has no clauses")]
    EmptyGroup(IndicatorGroup),
    #[error("Resources must be strictly the smallest group, but |{0}| <= |Resources|")]
    ResourcesNotSmallest(IndicatorGroup),
}

/// A total assignment of the nineteen clauses to the four groups.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupAssignment {
    map: BTreeMap<u8, IndicatorGroup>,
}

impl GroupAssignment {
    /// Build and check an assignment: total over clauses 5-23, every
    /// group non-empty, Resources strictly smallest.
    pub fn new(map: BTreeMap<u8, IndicatorGroup>) -> Result<Self, AssignmentError> {
        for &n in map.keys() {
            if clause_name(n).is_none() {
                return Err(AssignmentError::UnknownClause(n));
            }
        }
        for (n, _) in CLAUSES {
            if !map.contains_key(&n) {
                return Err(AssignmentError::MissingClause(n));
            }
        }
        let mut sizes: BTreeMap<IndicatorGroup, usize> =
            IndicatorGroup::ALL.into_iter().map(|g| (g, 0)).collect();
        for g in map.values() {
            *sizes.get_mut(g).unwrap() += 1;
        }
        for (g, n) in &sizes {
            if *n == 0 {
                return Err(AssignmentError::EmptyGroup(*g));
            }
        }
        let resources = sizes[&IndicatorGroup::Resources];
        for (g, n) in &sizes {
            if *g != IndicatorGroup::Resources && *n <= resources {
                return Err(AssignmentError::ResourcesNotSmallest(*g));
            }
        }
        Ok(GroupAssignment { map })
    }

    pub fn group_of(&self, clause: u8) -> Option<IndicatorGroup> {
        self.map.get(&clause).copied()
    }

    /// Clause numbers of a group, ascending.
    pub fn clauses_of(&self, group: IndicatorGroup) -> Vec<u8> {
        self.map
            .iter()
            .filter(|(_, g)| **g == group)
            .map(|(n, _)| *n)
            .collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u8, IndicatorGroup)> + '_ {
        self.map.iter().map(|(n, g)| (*n, *g))
    }
}

pub const DEFAULT_ASSIGNMENT_TEXT: &str = include_str!("../data/default.assignment");

/// The shipped default assignment (5/5/5/4 split, Resources smallest).
pub fn default_assignment() -> GroupAssignment {
    load_assignment(DEFAULT_ASSIGNMENT_TEXT).expect("bundled assignment parses")
}

/// Parse an assignment file of `clause <n> -> <group>` lines.
pub fn load_assignment(text: &str) -> Result<GroupAssignment, AssignmentError> {
    let mut map = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = match raw.find('#') {
            Some(i) => raw[..i].trim(),
            None => raw.trim(),
        };
        if line.is_empty() {
            continue;
        }
        let lineno = idx as u32 + 1;
        let syntax = AssignmentError::Syntax { line: lineno };
        let rest = line.strip_prefix("clause ").ok_or(syntax.clone())?;
        let (num, group) = rest.split_once("->").ok_or(syntax.clone())?;
        let n: u8 = num.trim().parse().map_err(|_| syntax.clone())?;
        if clause_name(n).is_none() {
            return Err(AssignmentError::UnknownClause(n));
        }
        let group = IndicatorGroup::parse(group.trim())
            .ok_or_else(|| AssignmentError::UnknownGroup(group.trim().to_string()))?;
        if map.insert(n, group).is_some() {
            return Err(AssignmentError::DuplicateClause(n));
        }
    }
    GroupAssignment::new(map)
}

/// Per-clause subsystem skeleton: a sensor tier external entity, an
/// ingestion process, a readings store and an aggregator, wired
/// sensor -> ingestion -> store -> aggregator -> group hub, with the
/// sensor tier behind a trust boundary.
#[derive(Debug, Clone)]
pub struct SubsystemPattern {
    pub sensor_suffix: &'static str,
    pub ingestion_suffix: &'static str,
    pub store_suffix: &'static str,
    pub aggregator_suffix: &'static str,
}

impl Default for SubsystemPattern {
    fn default() -> Self {
        SubsystemPattern {
            sensor_suffix: "Sensors",
            ingestion_suffix: "Ingestion",
            store_suffix: "Readings Store",
            aggregator_suffix: "Aggregator",
        }
    }
}

/// Deterministic id slug from a clause name.
pub fn slug(name: &str) -> String {
    let mut out = String::new();
    let mut last_us = true;
    for c in name.chars() {
        if c.is_ascii_alphanumeric() {
            out.push(c.to_ascii_lowercase());
            last_us = false;
        } else if !last_us {
            out.push('_');
            last_us = true;
        }
    }
    while out.ends_with('_') {
        out.pop();
    }
    out
}

const MODEL_NAME: &str = "Smart City Infrastructure";

/// Instantiate the SCI template for an assignment.
pub fn instantiate_template(
    assignment: &GroupAssignment,
    pattern: &SubsystemPattern,
) -> LayeredModel {
    let mut model = LayeredModel::new(MODEL_NAME);
    model.root = layer0(assignment);
    for group in IndicatorGroup::ALL {
        model.expansions.push(Expansion {
            parent: gateway_id(group),
            model: layer1(group, assignment, pattern),
        });
    }
    model.canonicalize();
    model
}

/// Instantiate with the default assignment and pattern.
pub fn default_template() -> LayeredModel {
    instantiate_template(&default_assignment(), &SubsystemPattern::default())
}

fn gateway_id(group: IndicatorGroup) -> String {
    format!("{}_gateway", slug(group.display()))
}

fn layer0(assignment: &GroupAssignment) -> DfdModel {
    let _ = assignment;
    let mut m = DfdModel::new(0);
    m.elements.push(
        Element::new("dashboard", ElementKind::Process, "Smart City System Dashboard", 0)
            .with_tag("web-facing"),
    );
    m.elements
        .push(Element::new("operator", ElementKind::ExternalEntity, "Operator", 0));
    m.elements.push(Element::new(
        "city_agencies",
        ElementKind::ExternalEntity,
        "City Agencies",
        0,
    ));
    m.elements.push(Element::new(
        "central_store",
        ElementKind::DataStore,
        "Central Indicator Store",
        0,
    ));
    m.elements.push(Element::new(
        "audit_store",
        ElementKind::DataStore,
        "Audit Log Store",
        0,
    ));
    m.elements.push(Element::new(
        "identity",
        ElementKind::Process,
        "Identity and Access Service",
        0,
    ));
    m.elements.push(Element::new(
        "alert_dispatcher",
        ElementKind::Process,
        "Alert Dispatcher",
        0,
    ));
    for group in IndicatorGroup::ALL {
        m.elements.push(
            Element::new(
                gateway_id(group),
                ElementKind::Process,
                format!("{} Gateway", group.display()),
                0,
            )
            .with_group(group),
        );
    }
    m.boundaries.push(TrustBoundary::new(
        "public_internet",
        "Public Internet",
        ["operator", "city_agencies"],
    ));

    let mut flow = |id: &str, src: &str, dst: &str, label: &str, crosses: bool| {
        let mut f = DataFlow::new(id, src, dst, label);
        if crosses {
            f.crossed_boundaries.insert("public_internet".into());
        }
        m.flows.push(f);
    };
    for group in IndicatorGroup::ALL {
        let gw = gateway_id(group);
        flow(
            &format!("core_f_{}", slug(group.display())),
            &gw,
            "dashboard",
            "aggregated indicators",
            false,
        );
    }
    flow("core_f_archive", "dashboard", "central_store", "indicator archive writes", false);
    flow("core_f_history", "central_store", "dashboard", "historical indicator queries", false);
    flow("core_f_operator_in", "operator", "dashboard", "operator commands", true);
    flow("core_f_operator_out", "dashboard", "operator", "dashboards and alerts", true);
    flow("core_f_credentials", "operator", "identity", "operator credentials", true);
    flow("core_f_sessions", "identity", "dashboard", "session assertions", false);
    flow("core_f_audit_dash", "dashboard", "audit_store", "audit events", false);
    flow("core_f_audit_idp", "identity", "audit_store", "authentication events", false);
    flow("core_f_notify", "alert_dispatcher", "city_agencies", "incident notifications", true);
    flow("core_f_triggers", "dashboard", "alert_dispatcher", "alert triggers", false);
    flow("core_f_thresholds", "central_store", "alert_dispatcher", "threshold feeds", false);
    flow("core_f_agency_req", "city_agencies", "dashboard", "agency data requests", true);
    m
}

fn layer1(
    group: IndicatorGroup,
    assignment: &GroupAssignment,
    pattern: &SubsystemPattern,
) -> DfdModel {
    let g = slug(group.display());
    let mut m = DfdModel::new(1);
    let hub = format!("{g}_hub");
    m.elements.push(
        Element::new(&hub, ElementKind::Process, format!("{} Gateway Hub", group.display()), 1)
            .with_group(group),
    );
    m.elements.push(
        Element::new(
            format!("{g}_archive"),
            ElementKind::DataStore,
            format!("{} Indicator Archive", group.display()),
            1,
        )
        .with_group(group),
    );
    m.elements.push(
        Element::new(
            format!("{g}_analytics"),
            ElementKind::Process,
            format!("{} Analytics", group.display()),
            1,
        )
        .with_group(group),
    );
    m.elements.push(
        Element::new(
            format!("{g}_console"),
            ElementKind::ExternalEntity,
            format!("{} Maintenance Console", group.display()),
            1,
        )
        .with_group(group),
    );

    let mut sensor_ids = Vec::new();
    for clause in assignment.clauses_of(group) {
        let name = clause_name(clause).unwrap();
        let s = slug(name);
        let mk = |suffix: &str| format!("{name} {suffix}");
        m.elements.push(
            Element::new(
                format!("{s}_sensors"),
                ElementKind::ExternalEntity,
                mk(pattern.sensor_suffix),
                1,
            )
            .with_group(group),
        );
        m.elements.push(
            Element::new(
                format!("{s}_ingestion"),
                ElementKind::Process,
                mk(pattern.ingestion_suffix),
                1,
            )
            .with_group(group),
        );
        m.elements.push(
            Element::new(format!("{s}_store"), ElementKind::DataStore, mk(pattern.store_suffix), 1)
                .with_group(group),
        );
        m.elements.push(
            Element::new(
                format!("{s}_aggregator"),
                ElementKind::Process,
                mk(pattern.aggregator_suffix),
                1,
            )
            .with_group(group),
        );
        sensor_ids.push(format!("{s}_sensors"));

        let sensor_boundary = format!("{g}_sensor_perimeter");
        let mut flow = |id: String, src: String, dst: String, label: &str, crosses: bool| {
            let mut f = DataFlow::new(id, src, dst, label);
            if crosses {
                f.crossed_boundaries.insert(sensor_boundary.clone());
            }
            m.flows.push(f);
        };
        flow(
            format!("{s}_f1"),
            format!("{s}_sensors"),
            format!("{s}_ingestion"),
            "raw sensor readings",
            true,
        );
        flow(
            format!("{s}_f2"),
            format!("{s}_ingestion"),
            format!("{s}_store"),
            "validated readings",
            false,
        );
        flow(
            format!("{s}_f3"),
            format!("{s}_ingestion"),
            format!("{s}_aggregator"),
            "realtime updates",
            false,
        );
        flow(
            format!("{s}_f4"),
            format!("{s}_store"),
            format!("{s}_aggregator"),
            "historical readings",
            false,
        );
        flow(
            format!("{s}_f5"),
            format!("{s}_aggregator"),
            hub.clone(),
            "indicator summaries",
            false,
        );
        flow(
            format!("{s}_f6"),
            hub.clone(),
            format!("{s}_aggregator"),
            "indicator requests",
            false,
        );
        flow(
            format!("{s}_f7"),
            format!("{s}_aggregator"),
            format!("{s}_store"),
            "computed aggregates",
            false,
        );
        flow(
            format!("{s}_f8"),
            format!("{s}_ingestion"),
            format!("{s}_sensors"),
            "sensor configuration",
            true,
        );
    }

    m.boundaries.push(TrustBoundary::new(
        format!("{g}_sensor_perimeter"),
        format!("{} Sensor Perimeter", group.display()),
        sensor_ids,
    ));
    m.boundaries.push(TrustBoundary::new(
        format!("{g}_ops_perimeter"),
        format!("{} Operations Perimeter", group.display()),
        [format!("{g}_console")],
    ));

    let ops_boundary = format!("{g}_ops_perimeter");
    let mut flow = |id: String, src: String, dst: String, label: &str, crosses: bool| {
        let mut f = DataFlow::new(id, src, dst, label);
        if crosses {
            f.crossed_boundaries.insert(ops_boundary.clone());
        }
        m.flows.push(f);
    };
    flow(
        format!("{g}_g1"),
        hub.clone(),
        format!("{g}_archive"),
        "group indicator archive",
        false,
    );
    flow(
        format!("{g}_g2"),
        format!("{g}_archive"),
        format!("{g}_analytics"),
        "trend inputs",
        false,
    );
    flow(format!("{g}_g3"), format!("{g}_analytics"), hub.clone(), "trend reports", false);
    flow(
        format!("{g}_g4"),
        format!("{g}_console"),
        hub.clone(),
        "maintenance commands",
        true,
    );
    flow(format!("{g}_g5"), hub, format!("{g}_console"), "maintenance status", true);
    m
}

/// Canonical model-language source for a template (or any model).
pub fn emit_template(model: &LayeredModel) -> String {
    crate::parser::emit_text(model)
}
