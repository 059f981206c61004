//! Shared test helpers: a seeded random-model builder and an
//! independent brute-force threat oracle.
//!
//! The oracle re-derives the enumeration semantics with plain nested
//! loops and no shared code paths with the engine, so agreement between
//! the two is meaningful evidence rather than a tautology.

use std::collections::BTreeSet;

use scitm::engine::{RuleSet, SitePattern};
use scitm::model::{
    DataFlow, DfdModel, Element, ElementKind, Expansion, LayeredModel, TrustBoundary,
};

/// Small deterministic PRNG (xorshift64*), so corpus models are
/// reproducible from a seed without extra dependencies.
pub struct Rng(u64);

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng(seed.wrapping_mul(2685821657736338717).wrapping_add(1442695040888963407))
    }

    pub fn next(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.0 = x;
        x.wrapping_mul(2685821657736338717)
    }

    pub fn below(&mut self, n: u64) -> u64 {
        self.next() % n.max(1)
    }

    pub fn chance(&mut self, num: u64, den: u64) -> bool {
        self.below(den) < num
    }
}

fn random_dfd(rng: &mut Rng, prefix: &str, layer: u8, n_elements: u64) -> DfdModel {
    let mut dfd = DfdModel::new(layer);
    let n = n_elements.max(1);
    for i in 0..n {
        let kind = match rng.below(4) {
            0 => ElementKind::DataStore,
            1 => ElementKind::ExternalEntity,
            _ => ElementKind::Process,
        };
        let mut e = Element::new(format!("{prefix}e{i}"), kind, format!("E {i}"), layer);
        if kind == ElementKind::Process && rng.chance(1, 4) {
            e.tags.insert("web-facing".to_string());
        }
        dfd.elements.push(e);
    }
    // boundaries: up to two non-empty proper member subsets
    for b in 0..rng.below(3) {
        let mut members = BTreeSet::new();
        for i in 0..n {
            if rng.chance(1, 3) {
                members.insert(format!("{prefix}e{i}"));
            }
        }
        if members.is_empty() {
            members.insert(format!("{prefix}e{}", rng.below(n)));
        }
        dfd.boundaries.push(TrustBoundary::new(
            format!("{prefix}b{b}"),
            format!("B {b}"),
            members,
        ));
    }
    // flows between distinct elements; duplicates in routing are fine
    if n >= 2 {
        let n_flows = 1 + rng.below(2 * n);
        for i in 0..n_flows {
            let src = rng.below(n);
            let mut dst = rng.below(n);
            if dst == src {
                dst = (dst + 1) % n;
            }
            let mut flow = DataFlow::new(
                format!("{prefix}f{i}"),
                format!("{prefix}e{src}"),
                format!("{prefix}e{dst}"),
                format!("flow {i}"),
            );
            // sometimes document the membership-derived crossings
            if rng.chance(1, 2) {
                for b in &dfd.boundaries {
                    if b.members.contains(&flow.source) != b.members.contains(&flow.target) {
                        flow.crossed_boundaries.insert(b.id.clone());
                    }
                }
            }
            dfd.flows.push(flow);
        }
    }
    dfd
}

/// A random valid model with at most 12 elements, derived entirely from
/// the seed.
pub fn random_model(seed: u64) -> LayeredModel {
    let mut rng = Rng::new(seed);
    let n_root = 2 + rng.below(8);
    let mut model = LayeredModel::new(format!("random-{seed}"));
    model.root = random_dfd(&mut rng, "r", 0, n_root);
    let parent = model
        .root
        .elements
        .iter()
        .find(|e| e.kind == ElementKind::Process)
        .map(|e| e.id.clone());
    if let Some(parent) = parent {
        if rng.chance(1, 2) {
            let n_child = 1 + rng.below(3);
            model.expansions.push(Expansion {
                parent,
                model: random_dfd(&mut rng, "x", 1, n_child),
            });
        }
    }
    model.canonicalize();
    model
}

/// Brute-force enumeration: `(layer, subject id, rule id)` triples in
/// the engine's canonical order, computed with naive loops.
pub fn oracle_enumerate(model: &LayeredModel, rules: &RuleSet) -> Vec<(u8, String, String)> {
    let mut out = Vec::new();
    let mut dfds: Vec<&DfdModel> = vec![&model.root];
    dfds.extend(model.expansions.iter().map(|x| &x.model));
    for dfd in dfds {
        for rule in &rules.rules {
            match &rule.site {
                SitePattern::FlowAny
                | SitePattern::FlowIntoProcess
                | SitePattern::FlowFromProcess
                | SitePattern::FlowFromDataStore => {
                    for f in &dfd.flows {
                        let kind_of = |id: &str| {
                            dfd.elements.iter().find(|e| e.id == id).map(|e| e.kind)
                        };
                        let hit = match rule.site {
                            SitePattern::FlowAny => true,
                            SitePattern::FlowIntoProcess => {
                                kind_of(&f.target) == Some(ElementKind::Process)
                            }
                            SitePattern::FlowFromProcess => {
                                kind_of(&f.source) == Some(ElementKind::Process)
                            }
                            SitePattern::FlowFromDataStore => {
                                kind_of(&f.source) == Some(ElementKind::DataStore)
                            }
                            _ => unreachable!(),
                        };
                        if hit && (!rule.requires_boundary_crossing || oracle_crosses(dfd, f)) {
                            out.push((dfd.layer, f.id.clone(), rule.rule_id.clone()));
                        }
                    }
                }
                SitePattern::ProcessAny
                | SitePattern::ProcessWithTag(_)
                | SitePattern::DataStoreAny
                | SitePattern::ExternalEntitySource => {
                    for e in &dfd.elements {
                        let hit = match &rule.site {
                            SitePattern::ProcessAny => e.kind == ElementKind::Process,
                            SitePattern::ProcessWithTag(tag) => {
                                e.kind == ElementKind::Process && e.tags.contains(tag)
                            }
                            SitePattern::DataStoreAny => e.kind == ElementKind::DataStore,
                            SitePattern::ExternalEntitySource => {
                                e.kind == ElementKind::ExternalEntity
                                    && dfd.flows.iter().any(|f| f.source == e.id)
                            }
                            _ => unreachable!(),
                        };
                        let crossing_ok = !rule.requires_boundary_crossing
                            || dfd.flows.iter().any(|f| {
                                (f.source == e.id || f.target == e.id) && oracle_crosses(dfd, f)
                            });
                        if hit && crossing_ok {
                            out.push((dfd.layer, e.id.clone(), rule.rule_id.clone()));
                        }
                    }
                }
            }
        }
    }
    out.sort();
    out
}

fn oracle_crosses(dfd: &DfdModel, flow: &DataFlow) -> bool {
    if !flow.crossed_boundaries.is_empty() {
        return true;
    }
    dfd.boundaries
        .iter()
        .any(|b| b.members.contains(&flow.source) != b.members.contains(&flow.target))
}
