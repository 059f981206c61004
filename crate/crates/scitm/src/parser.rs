//! The model-description language: parsing and canonical emission.
//!
//! The language is line-oriented UTF-8 text with block braces:
//!
//! ```text
//! model "Demo"
//!
//! layer 0 {
//!   external sensor "Sensor"
//!   process ingest "Ingestion" [tags: web-facing] [group: resources]
//!   store db "Readings"
//!   boundary edge "Edge" { sensor }
//!   flow f1: sensor -> ingest "raw readings" [crosses edge]
//!   flow f2: ingest -> db "validated readings"
//!   expand ingest into layer 1 model {
//!     process parse "Parser"
//!   }
//! }
//! ```
//!
//! `#` starts a comment. Parsing is total over valid documents and
//! position-reporting over invalid ones; emission is canonical (sorted by
//! id, fixed indentation) and reparses to a structurally equal model.

use std::collections::HashMap;

use thiserror::Error;

use crate::model::{
    DataFlow, DfdModel, Element, ElementKind, Expansion, IndicatorGroup, LayeredModel,
    TrustBoundary, MAX_LAYER,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("syntax error: expected {expected}, found {found}")]
    Syntax { expected: String, found: String },
    #[error("duplicate id `{0}`")]
    DuplicateId(String),
    #[error("reference to undeclared id `{0}`")]
    DanglingReference(String),
    #[error("{0}")]
    LayerViolation(String),
    #[error("document has no layer 0 model (layer 0 is compulsory)")]
    MissingLayer0,
    #[error("expansion parent `{0}` is not a process")]
    InvalidExpansionParent(String),
    #[error("element `{0}` is expanded more than once")]
    DuplicateExpansion(String),
    #[error("flow `{0}` has identical source and target")]
    SelfLoopFlow(String),
    #[error("boundary `{0}` has no members")]
    EmptyBoundary(String),
    #[error("unknown indicator group `{0}`")]
    UnknownGroup(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{col}: {kind}")]
pub struct ParseError {
    pub line: u32,
    pub col: u32,
    pub kind: ParseErrorKind,
}

impl ParseError {
    pub fn is_syntax(&self) -> bool {
        matches!(self.kind, ParseErrorKind::Syntax { .. })
    }

    /// Diagnostic code used by the CLI, e.g. `dangling-reference`.
    pub fn code(&self) -> &'static str {
        match self.kind {
            ParseErrorKind::Syntax { .. } => "syntax-error",
            ParseErrorKind::DuplicateId(_) => "duplicate-id",
            ParseErrorKind::DanglingReference(_) => "dangling-reference",
            ParseErrorKind::LayerViolation(_) => "layer-violation",
            ParseErrorKind::MissingLayer0 => "missing-layer0",
            ParseErrorKind::InvalidExpansionParent(_) => "expansion-parent-not-process",
            ParseErrorKind::DuplicateExpansion(_) => "duplicate-expansion",
            ParseErrorKind::SelfLoopFlow(_) => "self-loop-flow",
            ParseErrorKind::EmptyBoundary(_) => "empty-boundary",
            ParseErrorKind::UnknownGroup(_) => "unknown-group",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Str(String),
    Int(u32),
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Colon,
    Comma,
    Arrow,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Str(s) => format!("\"{s}\""),
            Tok::Int(n) => format!("`{n}`"),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
    line: u32,
    col: u32,
}

type Spanned = (Tok, u32, u32);

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            src: src.as_bytes(),
            pos: 0,
            line: 1,
            col: 1,
        }
    }

    fn bump(&mut self) -> Option<u8> {
        let c = *self.src.get(self.pos)?;
        self.pos += 1;
        if c == b'\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn err(&self, expected: &str, found: String) -> ParseError {
        ParseError {
            line: self.line,
            col: self.col,
            kind: ParseErrorKind::Syntax {
                expected: expected.into(),
                found,
            },
        }
    }

    fn tokenize(mut self) -> Result<Vec<Spanned>, ParseError> {
        let mut out = Vec::new();
        loop {
            // skip whitespace and comments
            while let Some(c) = self.peek() {
                if c == b'#' {
                    while let Some(c) = self.peek() {
                        if c == b'\n' {
                            break;
                        }
                        self.bump();
                    }
                } else if c.is_ascii_whitespace() {
                    self.bump();
                } else {
                    break;
                }
            }
            let (line, col) = (self.line, self.col);
            let Some(c) = self.peek() else {
                out.push((Tok::Eof, line, col));
                return Ok(out);
            };
            let tok = match c {
                b'{' => {
                    self.bump();
                    Tok::LBrace
                }
                b'}' => {
                    self.bump();
                    Tok::RBrace
                }
                b'[' => {
                    self.bump();
                    Tok::LBracket
                }
                b']' => {
                    self.bump();
                    Tok::RBracket
                }
                b':' => {
                    self.bump();
                    Tok::Colon
                }
                b',' => {
                    self.bump();
                    Tok::Comma
                }
                b'-' => {
                    self.bump();
                    match self.peek() {
                        Some(b'>') => {
                            self.bump();
                            Tok::Arrow
                        }
                        other => {
                            return Err(self.err(
                                "`->`",
                                other.map(|c| (c as char).to_string()).unwrap_or_else(|| "end of input".into()),
                            ))
                        }
                    }
                }
                b'"' => {
                    self.bump();
                    let mut s = String::new();
                    loop {
                        match self.bump() {
                            Some(b'"') => break,
                            Some(b'\n') | None => {
                                return Err(self.err("closing `\"`", "end of line".into()))
                            }
                            Some(c) => s.push(c as char),
                        }
                    }
                    Tok::Str(s)
                }
                b'0'..=b'9' => {
                    let mut n: u32 = 0;
                    while let Some(c @ b'0'..=b'9') = self.peek() {
                        n = n.saturating_mul(10).saturating_add((c - b'0') as u32);
                        self.bump();
                    }
                    Tok::Int(n)
                }
                c if c == b'_' || c.is_ascii_alphabetic() => {
                    let mut s = String::new();
                    while let Some(c) = self.peek() {
                        if c == b'_' || c == b'-' || c.is_ascii_alphanumeric() {
                            s.push(c as char);
                            self.bump();
                        } else {
                            break;
                        }
                    }
                    Tok::Ident(s)
                }
                other => return Err(self.err("a token", (other as char).to_string())),
            };
            out.push((tok, line, col));
        }
    }
}

struct Parser {
    toks: Vec<Spanned>,
    idx: usize,
    /// Declaration position of every id seen so far (global namespace).
    ids: HashMap<String, (u32, u32)>,
    expanded: HashMap<String, (u32, u32)>,
}

impl Parser {
    fn peek(&self) -> &Spanned {
        &self.toks[self.idx]
    }

    fn next(&mut self) -> Spanned {
        let t = self.toks[self.idx].clone();
        if self.idx + 1 < self.toks.len() {
            self.idx += 1;
        }
        t
    }

    fn error_at(&self, line: u32, col: u32, kind: ParseErrorKind) -> ParseError {
        ParseError { line, col, kind }
    }

    fn syntax(&self, expected: &str) -> ParseError {
        let (tok, line, col) = self.peek().clone();
        self.error_at(
            line,
            col,
            ParseErrorKind::Syntax {
                expected: expected.into(),
                found: tok.describe(),
            },
        )
    }

    fn expect_keyword(&mut self, kw: &str) -> Result<(), ParseError> {
        match self.peek() {
            (Tok::Ident(s), ..) if s == kw => {
                self.next();
                Ok(())
            }
            _ => Err(self.syntax(&format!("`{kw}`"))),
        }
    }

    fn expect_ident(&mut self, what: &str) -> Result<(String, u32, u32), ParseError> {
        match self.peek().clone() {
            (Tok::Ident(s), line, col) => {
                self.next();
                Ok((s, line, col))
            }
            _ => Err(self.syntax(what)),
        }
    }

    fn expect_string(&mut self, what: &str) -> Result<String, ParseError> {
        match self.peek().clone() {
            (Tok::Str(s), ..) => {
                self.next();
                Ok(s)
            }
            _ => Err(self.syntax(what)),
        }
    }

    fn expect_int(&mut self, what: &str) -> Result<(u32, u32, u32), ParseError> {
        match self.peek().clone() {
            (Tok::Int(n), line, col) => {
                self.next();
                Ok((n, line, col))
            }
            _ => Err(self.syntax(what)),
        }
    }

    fn expect_tok(&mut self, tok: Tok, what: &str) -> Result<(), ParseError> {
        if self.peek().0 == tok {
            self.next();
            Ok(())
        } else {
            Err(self.syntax(what))
        }
    }

    fn declare(&mut self, id: &str, line: u32, col: u32) -> Result<(), ParseError> {
        if self.ids.insert(id.to_string(), (line, col)).is_some() {
            return Err(self.error_at(line, col, ParseErrorKind::DuplicateId(id.to_string())));
        }
        Ok(())
    }

    fn parse_document(&mut self) -> Result<LayeredModel, ParseError> {
        if self.peek().0 == Tok::Eof {
            let (_, line, col) = *self.peek();
            return Err(self.error_at(line, col, ParseErrorKind::MissingLayer0));
        }
        self.expect_keyword("model")?;
        let name = self.expect_string("model name string")?;
        if self.peek().0 == Tok::Eof {
            let (_, line, col) = *self.peek();
            return Err(self.error_at(line, col, ParseErrorKind::MissingLayer0));
        }
        self.expect_keyword("layer")?;
        let (n, line, col) = self.expect_int("layer number")?;
        if n != 0 {
            return Err(self.error_at(
                line,
                col,
                ParseErrorKind::LayerViolation(format!(
                    "top-level layer must be 0, found {n}; deeper layers enter via `expand`"
                )),
            ));
        }
        self.expect_tok(Tok::LBrace, "`{`")?;
        let mut expansions = Vec::new();
        let root = self.parse_model_body(0, &mut expansions)?;
        match self.peek().clone() {
            (Tok::Eof, ..) => {}
            (Tok::Ident(s), line, col) if s == "layer" => {
                return Err(self.error_at(
                    line,
                    col,
                    ParseErrorKind::LayerViolation(
                        "only one top-level layer block is allowed".into(),
                    ),
                ));
            }
            _ => return Err(self.syntax("end of document")),
        }
        let mut model = LayeredModel::new(name);
        model.root = root;
        model.expansions = expansions;
        model.canonicalize();
        Ok(model)
    }

    /// Parse the body of a `{ ... }` model block (opening brace consumed).
    fn parse_model_body(
        &mut self,
        layer: u8,
        expansions: &mut Vec<Expansion>,
    ) -> Result<DfdModel, ParseError> {
        let mut model = DfdModel::new(layer);
        // References are resolved when the block closes, so declaration
        // order inside a block does not matter.
        let mut pending_refs: Vec<(String, u32, u32, RefKind)> = Vec::new();
        let mut local_expansions: Vec<(String, u32, u32)> = Vec::new();
        loop {
            match self.peek().clone() {
                (Tok::RBrace, ..) => {
                    self.next();
                    break;
                }
                (Tok::Ident(kw), line, col) => match kw.as_str() {
                    "process" | "store" | "external" => {
                        self.next();
                        let kind = match kw.as_str() {
                            "process" => ElementKind::Process,
                            "store" => ElementKind::DataStore,
                            _ => ElementKind::ExternalEntity,
                        };
                        let (id, il, ic) = self.expect_ident("element id")?;
                        let display = self.expect_string("display name string")?;
                        self.declare(&id, il, ic)?;
                        let mut element = Element::new(id, kind, display, layer);
                        self.parse_element_attrs(&mut element)?;
                        model.elements.push(element);
                    }
                    "boundary" => {
                        self.next();
                        let (id, il, ic) = self.expect_ident("boundary id")?;
                        let display = self.expect_string("display name string")?;
                        self.declare(&id, il, ic)?;
                        self.expect_tok(Tok::LBrace, "`{`")?;
                        let mut members = Vec::new();
                        loop {
                            match self.peek().clone() {
                                (Tok::RBrace, ..) => {
                                    self.next();
                                    break;
                                }
                                (Tok::Ident(m), ml, mc) => {
                                    self.next();
                                    pending_refs.push((m.clone(), ml, mc, RefKind::Element));
                                    members.push(m);
                                }
                                (Tok::Comma, ..) => {
                                    self.next();
                                }
                                _ => return Err(self.syntax("member id or `}`")),
                            }
                        }
                        if members.is_empty() {
                            return Err(self.error_at(il, ic, ParseErrorKind::EmptyBoundary(id)));
                        }
                        model.boundaries.push(TrustBoundary::new(id, display, members));
                    }
                    "flow" => {
                        self.next();
                        let (id, il, ic) = self.expect_ident("flow id")?;
                        self.expect_tok(Tok::Colon, "`:`")?;
                        let (src, sl, sc) = self.expect_ident("source element id")?;
                        self.expect_tok(Tok::Arrow, "`->`")?;
                        let (dst, dl, dc) = self.expect_ident("target element id")?;
                        let label = self.expect_string("flow label string")?;
                        self.declare(&id, il, ic)?;
                        if src == dst {
                            return Err(self.error_at(il, ic, ParseErrorKind::SelfLoopFlow(id)));
                        }
                        pending_refs.push((src.clone(), sl, sc, RefKind::Element));
                        pending_refs.push((dst.clone(), dl, dc, RefKind::Element));
                        let mut flow = DataFlow::new(id, src, dst, label);
                        if self.peek().0 == Tok::LBracket {
                            self.next();
                            self.expect_keyword("crosses")?;
                            loop {
                                match self.peek().clone() {
                                    (Tok::RBracket, ..) => {
                                        self.next();
                                        break;
                                    }
                                    (Tok::Ident(b), bl, bc) => {
                                        self.next();
                                        pending_refs.push((b.clone(), bl, bc, RefKind::Boundary));
                                        flow.crossed_boundaries.insert(b);
                                    }
                                    (Tok::Comma, ..) => {
                                        self.next();
                                    }
                                    _ => return Err(self.syntax("boundary id or `]`")),
                                }
                            }
                        }
                        model.flows.push(flow);
                    }
                    "expand" => {
                        self.next();
                        let (parent, pl, pc) = self.expect_ident("parent process id")?;
                        self.expect_keyword("into")?;
                        self.expect_keyword("layer")?;
                        let (n, nl, nc) = self.expect_int("layer number")?;
                        if n as u8 != layer + 1 {
                            return Err(self.error_at(
                                nl,
                                nc,
                                ParseErrorKind::LayerViolation(format!(
                                    "expansion of layer-{layer} process must target layer {}, found {n}",
                                    layer + 1
                                )),
                            ));
                        }
                        if n as u8 > MAX_LAYER {
                            return Err(self.error_at(
                                nl,
                                nc,
                                ParseErrorKind::LayerViolation(format!(
                                    "layer {n} exceeds the maximum layer {MAX_LAYER}"
                                )),
                            ));
                        }
                        if self.expanded.insert(parent.clone(), (pl, pc)).is_some() {
                            return Err(self.error_at(
                                pl,
                                pc,
                                ParseErrorKind::DuplicateExpansion(parent),
                            ));
                        }
                        self.expect_keyword("model")?;
                        self.expect_tok(Tok::LBrace, "`{`")?;
                        let child = self.parse_model_body(layer + 1, expansions)?;
                        local_expansions.push((parent.clone(), pl, pc));
                        expansions.push(Expansion {
                            parent,
                            model: child,
                        });
                    }
                    _ => {
                        let _ = (line, col);
                        return Err(self.syntax(
                            "`process`, `store`, `external`, `boundary`, `flow`, `expand` or `}`",
                        ));
                    }
                },
                _ => return Err(self.syntax("a declaration or `}`")),
            }
        }

        // Resolve references within this model.
        for (id, line, col, kind) in pending_refs {
            let ok = match kind {
                RefKind::Element => model.element(&id).is_some(),
                RefKind::Boundary => model.boundary(&id).is_some(),
            };
            if !ok {
                return Err(self.error_at(line, col, ParseErrorKind::DanglingReference(id)));
            }
        }
        for (parent, line, col) in local_expansions {
            match model.element(&parent) {
                None => {
                    return Err(self.error_at(line, col, ParseErrorKind::DanglingReference(parent)))
                }
                Some(e) if e.kind != ElementKind::Process => {
                    return Err(self.error_at(
                        line,
                        col,
                        ParseErrorKind::InvalidExpansionParent(parent),
                    ))
                }
                Some(_) => {}
            }
        }
        Ok(model)
    }

    fn parse_element_attrs(&mut self, element: &mut Element) -> Result<(), ParseError> {
        while self.peek().0 == Tok::LBracket {
            self.next();
            let (attr, _, _) = self.expect_ident("`tags` or `group`")?;
            self.expect_tok(Tok::Colon, "`:`")?;
            match attr.as_str() {
                "tags" => loop {
                    match self.peek().clone() {
                        (Tok::RBracket, ..) => {
                            self.next();
                            break;
                        }
                        (Tok::Ident(t), ..) => {
                            self.next();
                            element.tags.insert(t);
                        }
                        (Tok::Comma, ..) => {
                            self.next();
                        }
                        _ => return Err(self.syntax("tag name or `]`")),
                    }
                },
                "group" => {
                    let (g, gl, gc) = self.expect_ident("indicator group name")?;
                    let group = IndicatorGroup::parse(&g)
                        .ok_or_else(|| self.error_at(gl, gc, ParseErrorKind::UnknownGroup(g)))?;
                    element.group = Some(group);
                    self.expect_tok(Tok::RBracket, "`]`")?;
                }
                other => {
                    return Err(self.syntax(&format!("`tags` or `group`, found `{other}`")));
                }
            }
        }
        Ok(())
    }
}

enum RefKind {
    Element,
    Boundary,
}

/// Parse a complete model-language document.
pub fn parse_model(text: &str) -> Result<LayeredModel, ParseError> {
    let toks = Lexer::new(text).tokenize()?;
    let mut parser = Parser {
        toks,
        idx: 0,
        ids: HashMap::new(),
        expanded: HashMap::new(),
    };
    parser.parse_document()
}

/// Emit canonical model-language source. `parse_model(emit_text(m))`
/// yields a model structurally equal to `m` (after canonicalization);
/// output is byte-stable for a given model.
pub fn emit_text(model: &LayeredModel) -> String {
    let mut out = String::new();
    out.push_str(&format!("model \"{}\"\n\n", model.name));
    out.push_str("layer 0 {\n");
    emit_model_body(model, &model.root, 1, &mut out);
    out.push_str("}\n");
    out
}

fn indent(depth: usize) -> String {
    "  ".repeat(depth)
}

fn emit_model_body(layered: &LayeredModel, model: &DfdModel, depth: usize, out: &mut String) {
    let pad = indent(depth);
    let mut elements: Vec<&Element> = model.elements.iter().collect();
    elements.sort_by_key(|e| &e.id);
    for e in &elements {
        out.push_str(&format!(
            "{pad}{} {} \"{}\"",
            e.kind.keyword(),
            e.id,
            e.display_name
        ));
        if !e.tags.is_empty() {
            let tags: Vec<&str> = e.tags.iter().map(|s| s.as_str()).collect();
            out.push_str(&format!(" [tags: {}]", tags.join(",")));
        }
        if let Some(g) = e.group {
            out.push_str(&format!(" [group: {}]", g.name()));
        }
        out.push('\n');
    }
    let mut boundaries: Vec<&TrustBoundary> = model.boundaries.iter().collect();
    boundaries.sort_by_key(|b| &b.id);
    for b in &boundaries {
        let members: Vec<&str> = b.members.iter().map(|s| s.as_str()).collect();
        out.push_str(&format!(
            "{pad}boundary {} \"{}\" {{ {} }}\n",
            b.id,
            b.display_name,
            members.join(" ")
        ));
    }
    let mut flows: Vec<&DataFlow> = model.flows.iter().collect();
    flows.sort_by_key(|f| &f.id);
    for f in &flows {
        out.push_str(&format!(
            "{pad}flow {}: {} -> {} \"{}\"",
            f.id, f.source, f.target, f.label
        ));
        if !f.crossed_boundaries.is_empty() {
            let ids: Vec<&str> = f.crossed_boundaries.iter().map(|s| s.as_str()).collect();
            out.push_str(&format!(" [crosses {}]", ids.join(",")));
        }
        out.push('\n');
    }
    let mut expansions: Vec<&Expansion> = layered
        .expansions
        .iter()
        .filter(|x| model.element(&x.parent).is_some() && x.model.layer == model.layer + 1)
        .collect();
    expansions.sort_by_key(|x| &x.parent);
    for x in expansions {
        out.push_str(&format!(
            "{pad}expand {} into layer {} model {{\n",
            x.parent,
            model.layer + 1
        ));
        emit_model_body(layered, &x.model, depth + 1, out);
        out.push_str(&format!("{pad}}}\n"));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_document_is_missing_layer0() {
        let err = parse_model("").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::MissingLayer0);
    }

    #[test]
    fn comment_only_document_is_missing_layer0() {
        let err = parse_model("# nothing here\n").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::MissingLayer0);
    }

    #[test]
    fn minimal_model_parses() {
        let m = parse_model("model \"m\"\nlayer 0 {\n  process dashboard \"Dashboard\"\n}\n")
            .unwrap();
        assert_eq!(m.element_count(), 1);
        assert_eq!(m.flow_count(), 0);
        assert!(m.root.boundaries.is_empty());
    }

    #[test]
    fn dangling_flow_target_names_the_id() {
        let err = parse_model(
            "model \"m\"\nlayer 0 {\n  process a \"A\"\n  flow f: a -> b \"x\"\n}\n",
        )
        .unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::DanglingReference("b".into()));
        assert_eq!(err.line, 4);
    }

    #[test]
    fn duplicate_id_rejected_across_layers() {
        let err = parse_model(
            "model \"m\"\nlayer 0 {\n  process a \"A\"\n  expand a into layer 1 model {\n    store a \"A again\"\n  }\n}\n",
        )
        .unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::DuplicateId("a".into()));
    }

    #[test]
    fn expansion_must_step_one_layer() {
        let err = parse_model(
            "model \"m\"\nlayer 0 {\n  process a \"A\"\n  expand a into layer 2 model {\n  }\n}\n",
        )
        .unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::LayerViolation(_)));
    }

    #[test]
    fn expansion_parent_must_be_process() {
        let err = parse_model(
            "model \"m\"\nlayer 0 {\n  store s \"S\"\n  expand s into layer 1 model {\n  }\n}\n",
        )
        .unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::InvalidExpansionParent("s".into()));
    }

    #[test]
    fn syntax_error_reports_position() {
        let err = parse_model("model \"m\"\nlayer 0 {\n  process \"no id\"\n}\n").unwrap_err();
        assert!(err.is_syntax());
        assert_eq!(err.line, 3);
    }

    #[test]
    fn attrs_and_crossings_roundtrip() {
        let src = "model \"m\"\nlayer 0 {\n  process p \"P\" [tags: web-facing] [group: resources]\n  external x \"X\"\n  boundary edge \"Edge\" { x }\n  flow f: x -> p \"in\" [crosses edge]\n}\n";
        let m = parse_model(src).unwrap();
        let emitted = emit_text(&m);
        let reparsed = parse_model(&emitted).unwrap();
        assert_eq!(m, reparsed);
        assert_eq!(emitted, emit_text(&reparsed));
    }

    #[test]
    fn forward_references_within_block_resolve() {
        let src = "model \"m\"\nlayer 0 {\n  flow f: a -> b \"x\"\n  process a \"A\"\n  process b \"B\"\n}\n";
        assert!(parse_model(src).is_ok());
    }
}
