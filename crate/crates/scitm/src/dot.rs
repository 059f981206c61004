//! Deterministic DOT rendering of model layers.

use thiserror::Error;

use crate::model::{DfdModel, Element, ElementKind, LayeredModel};

#[derive(Debug, Error, PartialEq, Eq)]
#[error("no models at layer {0}")]
pub struct UnknownLayer(pub u8);

fn shape(kind: ElementKind) -> &'static str {
    match kind {
        ElementKind::Process => "ellipse",
        ElementKind::DataStore => "cylinder",
        ElementKind::ExternalEntity => "box",
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Render every model at the selected layer as a single digraph.
/// Processes are ellipses, data stores cylinders, external entities
/// boxes; trust boundaries become cluster subgraphs. Output is sorted by
/// id throughout and byte-stable.
pub fn render_dot(model: &LayeredModel, layer: u8) -> Result<String, UnknownLayer> {
    let models = model.models_at(layer);
    if models.is_empty() {
        return Err(UnknownLayer(layer));
    }
    let mut out = String::new();
    out.push_str(&format!(
        "digraph \"{} (layer {layer})\" {{\n  rankdir=LR;\n  node [fontname=\"Helvetica\"];\n",
        escape(&model.name)
    ));
    for m in &models {
        render_model(m, &mut out);
    }
    out.push_str("}\n");
    Ok(out)
}

fn node_line(e: &Element, pad: &str) -> String {
    format!(
        "{pad}\"{}\" [label=\"{}\", shape={}];\n",
        e.id,
        escape(&e.display_name),
        shape(e.kind)
    )
}

fn render_model(m: &DfdModel, out: &mut String) {
    let mut boundaries: Vec<_> = m.boundaries.iter().collect();
    boundaries.sort_by_key(|b| &b.id);
    let mut elements: Vec<_> = m.elements.iter().collect();
    elements.sort_by_key(|e| &e.id);

    // DOT clusters cannot share nodes: an element in several boundaries is
    // drawn inside the first (by id) boundary that contains it.
    let mut placed: Vec<&str> = Vec::new();
    for b in &boundaries {
        out.push_str(&format!(
            "  subgraph \"cluster_{}\" {{\n    label=\"{}\";\n    style=dashed;\n",
            b.id,
            escape(&b.display_name)
        ));
        for e in &elements {
            if b.members.contains(&e.id) && !placed.contains(&e.id.as_str()) {
                out.push_str(&node_line(e, "    "));
                placed.push(&e.id);
            }
        }
        out.push_str("  }\n");
    }
    for e in &elements {
        if !placed.contains(&e.id.as_str()) {
            out.push_str(&node_line(e, "  "));
        }
    }
    let mut flows: Vec<_> = m.flows.iter().collect();
    flows.sort_by_key(|f| &f.id);
    for f in flows {
        out.push_str(&format!(
            "  \"{}\" -> \"{}\" [label=\"{}\"];\n",
            f.source,
            f.target,
            escape(&f.label)
        ));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_model;

    #[test]
    fn minimal_model_has_one_node_statement() {
        let m = parse_model("model \"m\"\nlayer 0 {\n  process p \"P\"\n}\n").unwrap();
        let dot = render_dot(&m, 0).unwrap();
        assert_eq!(dot.matches("[label=").count(), 1);
        assert!(dot.contains("shape=ellipse"));
    }

    #[test]
    fn unknown_layer_is_an_error() {
        let m = parse_model("model \"m\"\nlayer 0 {\n  process p \"P\"\n}\n").unwrap();
        assert_eq!(render_dot(&m, 2), Err(UnknownLayer(2)));
    }

    #[test]
    fn rendering_is_deterministic() {
        let m = parse_model(
            "model \"m\"\nlayer 0 {\n  process a \"A\"\n  store s \"S\"\n  boundary z \"Z\" { a }\n  flow f: a -> s \"w\"\n}\n",
        )
        .unwrap();
        assert_eq!(render_dot(&m, 0).unwrap(), render_dot(&m, 0).unwrap());
    }

    #[test]
    fn boundary_members_land_in_clusters() {
        let m = parse_model(
            "model \"m\"\nlayer 0 {\n  process a \"A\"\n  external x \"X\"\n  boundary z \"Z\" { x }\n  flow f: x -> a \"in\"\n}\n",
        )
        .unwrap();
        let dot = render_dot(&m, 0).unwrap();
        let cluster_start = dot.find("subgraph \"cluster_z\"").unwrap();
        let cluster_end = dot[cluster_start..].find('}').unwrap() + cluster_start;
        assert!(dot[cluster_start..cluster_end].contains("\"x\""));
        assert!(!dot[cluster_start..cluster_end].contains("\"a\""));
    }
}
