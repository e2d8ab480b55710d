//! Text, JSON and DOT formats for spaces, and trace files.
//!
//! Text grammar, one directive per line:
//!
//! ```text
//! # name: octahedron      optional document name
//! v a                     declares point a
//! e a b                   declares edge ab (and points a, b)
//! ```
//!
//! `#` starts a comment, blank lines are ignored, duplicate edges and
//! points are accepted with a warning. Serialization writes the name (if
//! any), then the isolated points as `v` lines, then the edges as `e` lines,
//! both in label order.
//!
//! The JSON mirror is `{"points": [...], "edges": [["a", "b"], ...]}` with
//! optional `"name"` and `"format_version"` members.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::space::{DigitalSpace, PointId};
use crate::transform::TransformStep;

pub const FORMAT_VERSION: u32 = 1;

const NAME_PRAGMA: &str = "name:";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpaceDocument {
    pub format_version: u32,
    pub space: DigitalSpace,
    pub name: Option<String>,
}

impl SpaceDocument {
    pub fn new(space: DigitalSpace) -> Self {
        SpaceDocument { format_version: FORMAT_VERSION, space, name: None }
    }

    pub fn named(space: DigitalSpace, name: impl Into<String>) -> Self {
        SpaceDocument { name: Some(name.into()), ..Self::new(space) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseWarning {
    pub line: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Parsed {
    pub document: SpaceDocument,
    pub warnings: Vec<ParseWarning>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Format {
    #[default]
    Text,
    Json,
}

impl Format {
    /// `.json` selects JSON; anything else is text.
    pub fn for_path(path: &Path) -> Format {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("json") => Format::Json,
            _ => Format::Text,
        }
    }
}

pub fn parse(input: &str, format: Format) -> Result<Parsed> {
    match format {
        Format::Text => parse_text(input),
        Format::Json => parse_json(input),
    }
}

pub fn serialize(doc: &SpaceDocument, format: Format) -> String {
    match format {
        Format::Text => serialize_text(doc),
        Format::Json => serialize_json(doc),
    }
}

struct Collector {
    points: BTreeSet<PointId>,
    edges: BTreeSet<(PointId, PointId)>,
    warnings: Vec<ParseWarning>,
}

impl Collector {
    fn new() -> Self {
        Collector { points: BTreeSet::new(), edges: BTreeSet::new(), warnings: Vec::new() }
    }

    fn point(&mut self, line: usize, p: PointId) {
        if !self.points.insert(p.clone()) {
            // Re-declaring a point that only appeared in an edge is harmless.
            if !self.edges.iter().any(|(a, b)| *a == p || *b == p) {
                self.warnings.push(ParseWarning { line, message: format!("duplicate point {p}") });
            }
        }
    }

    fn edge(&mut self, line: usize, a: PointId, b: PointId) -> Result<()> {
        if a == b {
            return Err(Error::Parse { line, reason: format!("self-loop on {a}") });
        }
        self.points.insert(a.clone());
        self.points.insert(b.clone());
        let key = if a < b { (a, b) } else { (b, a) };
        if self.edges.contains(&key) {
            self.warnings.push(ParseWarning { line, message: format!("duplicate edge {} {}", key.0, key.1) });
        } else {
            self.edges.insert(key);
        }
        Ok(())
    }

    fn finish(self, name: Option<String>) -> Parsed {
        let space = DigitalSpace::build(self.points, self.edges).expect("collector keeps edges over declared points");
        Parsed { document: SpaceDocument { name, ..SpaceDocument::new(space) }, warnings: self.warnings }
    }
}

fn label(line: usize, s: &str) -> Result<PointId> {
    PointId::new(s).map_err(|e| Error::Parse { line, reason: e.to_string() })
}

pub fn parse_text(input: &str) -> Result<Parsed> {
    let mut c = Collector::new();
    let mut name = None;
    for (i, raw) in input.lines().enumerate() {
        let line = i + 1;
        let (content, comment) = match raw.find('#') {
            Some(at) => (&raw[..at], Some(&raw[at + 1..])),
            None => (raw, None),
        };
        if content.trim().is_empty() {
            if let Some(n) = comment.and_then(|c| c.trim_start().strip_prefix(NAME_PRAGMA)) {
                let n = n.trim();
                if !n.is_empty() {
                    name = Some(n.to_string());
                }
            }
            continue;
        }
        let tokens: Vec<&str> = content.split_whitespace().collect();
        match tokens.as_slice() {
            ["v", p] => c.point(line, label(line, p)?),
            ["e", a, b] => c.edge(line, label(line, a)?, label(line, b)?)?,
            ["v", ..] => return Err(Error::Parse { line, reason: "expected `v <label>`".into() }),
            ["e", ..] => return Err(Error::Parse { line, reason: "expected `e <label> <label>`".into() }),
            [other, ..] => return Err(Error::Parse { line, reason: format!("unknown directive {other:?}") }),
            [] => unreachable!("blank lines are skipped"),
        }
    }
    Ok(c.finish(name))
}

pub fn serialize_text(doc: &SpaceDocument) -> String {
    let g = &doc.space;
    let mut out = String::new();
    if let Some(name) = &doc.name {
        let _ = writeln!(out, "# {NAME_PRAGMA} {name}");
    }
    for p in g.points() {
        if g.degree(p).expect("own point") == 0 {
            let _ = writeln!(out, "v {p}");
        }
    }
    for (a, b) in g.edges() {
        let _ = writeln!(out, "e {a} {b}");
    }
    out
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonDocument {
    #[serde(default)]
    format_version: Option<u32>,
    #[serde(default)]
    name: Option<String>,
    #[serde(default)]
    points: Vec<String>,
    #[serde(default)]
    edges: Vec<(String, String)>,
}

/// Edges may name points absent from `points`; those are declared implicitly.
/// Line numbers in errors and warnings are 1 for JSON input.
pub fn parse_json(input: &str) -> Result<Parsed> {
    let raw: JsonDocument =
        serde_json::from_str(input).map_err(|e| Error::Parse { line: e.line(), reason: e.to_string() })?;
    if let Some(v) = raw.format_version {
        if v != FORMAT_VERSION {
            return Err(Error::Parse { line: 1, reason: format!("unsupported format_version {v}") });
        }
    }
    let mut c = Collector::new();
    for p in &raw.points {
        c.point(1, label(1, p)?);
    }
    for (a, b) in &raw.edges {
        c.edge(1, label(1, a)?, label(1, b)?)?;
    }
    Ok(c.finish(raw.name))
}

/// Pretty-printed with one point list and one edge per line.
pub fn serialize_json(doc: &SpaceDocument) -> String {
    let g = &doc.space;
    let q = |s: &str| serde_json::to_string(s).expect("strings serialize");
    let mut out = String::from("{\n");
    let _ = writeln!(out, "  \"format_version\": {},", doc.format_version);
    if let Some(name) = &doc.name {
        let _ = writeln!(out, "  \"name\": {},", q(name));
    }
    let points: Vec<String> = g.points().iter().map(|p| q(p.as_str())).collect();
    let _ = writeln!(out, "  \"points\": [{}],", points.join(", "));
    let edges: Vec<String> = g.edges().map(|(a, b)| format!("    [{}, {}]", q(a.as_str()), q(b.as_str()))).collect();
    if edges.is_empty() {
        out.push_str("  \"edges\": []\n");
    } else {
        let _ = write!(out, "  \"edges\": [\n{}\n  ]\n", edges.join(",\n"));
    }
    out.push_str("}\n");
    out
}

fn dot_id(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Undirected DOT graph: every point in label order, then the edges in
/// the same order as [`serialize_text`].
pub fn export_dot(doc: &SpaceDocument) -> String {
    let g = &doc.space;
    let mut out = String::new();
    let _ = writeln!(out, "graph {} {{", dot_id(doc.name.as_deref().unwrap_or("G")));
    for p in g.points() {
        let _ = writeln!(out, "  {};", dot_id(p.as_str()));
    }
    for (a, b) in g.edges() {
        let _ = writeln!(out, "  {} -- {};", dot_id(a.as_str()), dot_id(b.as_str()));
    }
    out.push_str("}\n");
    out
}

/// One step per line in wire syntax; `#` comments and blank lines skipped.
pub fn parse_trace(input: &str) -> Result<Vec<TransformStep>> {
    let mut steps = Vec::new();
    for (i, raw) in input.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let step = content
            .parse()
            .map_err(|e: Error| Error::Parse { line: i + 1, reason: e.to_string() })?;
        steps.push(step);
    }
    Ok(steps)
}

pub fn serialize_trace(steps: &[TransformStep]) -> String {
    steps.iter().map(|s| format!("{s}\n")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::pid;

    fn doc(text: &str) -> SpaceDocument {
        parse_text(text).unwrap().document
    }

    #[test]
    fn parse_examples() {
        let k1 = doc("v a");
        assert_eq!(k1.space.points(), &[pid("a")]);
        let c4 = doc("e 1 2\ne 2 3\ne 3 4\ne 4 1");
        assert_eq!((c4.space.len(), c4.space.edge_count()), (4, 4));
        assert!(c4.space.adjacent(&pid("4"), &pid("1")));
        assert_eq!(parse_text("e a a").unwrap_err(), Error::Parse { line: 1, reason: "self-loop on a".into() });
    }

    #[test]
    fn serialize_examples() {
        assert_eq!(serialize_text(&doc("v a")), "v a\n");
        assert_eq!(serialize_text(&doc("e 1 2\ne 2 3\ne 3 4\ne 4 1")), "e 1 2\ne 1 4\ne 2 3\ne 3 4\n");
        assert_eq!(serialize_text(&doc("v b\nv a")), "v a\nv b\n");
        assert_eq!(serialize_text(&doc("e x y\nv z\nv x")), "v z\ne x y\n");
    }

    #[test]
    fn comments_blank_lines_and_names() {
        let text = "# name: wheel\n\n# a comment\ne v 1 # spoke\ne v 2\n   \ne 1 2\n";
        let d = doc(text);
        assert_eq!(d.name.as_deref(), Some("wheel"));
        assert_eq!(d.space.edge_count(), 3);
        let out = serialize_text(&d);
        assert_eq!(out, "# name: wheel\ne 1 2\ne 1 v\ne 2 v\n");
        assert_eq!(doc(&out), d);
    }

    #[test]
    fn duplicates_warn() {
        let p = parse_text("e a b\ne b a\nv c\nv c\nv a").unwrap();
        assert_eq!(p.document.space.edge_count(), 1);
        assert_eq!(
            p.warnings,
            vec![
                ParseWarning { line: 2, message: "duplicate edge a b".into() },
                ParseWarning { line: 4, message: "duplicate point c".into() },
            ]
        );
    }

    #[test]
    fn malformed_lines() {
        for (text, line) in [("v", 1), ("v a b", 1), ("e a", 1), ("e a b c", 1), ("x a", 1), ("v a\nq", 2), ("e a ->", 1)] {
            match parse_text(text) {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
    }

    #[test]
    fn json_mirror() {
        let c4 = doc("e 1 2\ne 2 3\ne 3 4\ne 4 1\nv 9");
        let json = serialize_json(&c4);
        let back = parse_json(&json).unwrap().document;
        assert_eq!(back, c4);
        let minimal = parse_json(r#"{"points":["a"],"edges":[["b","c"]]}"#).unwrap().document;
        assert_eq!(serialize_text(&minimal), "v a\ne b c\n");
        assert!(matches!(parse_json(r#"{"points":["a"],"extra":1}"#), Err(Error::Parse { .. })));
        assert!(matches!(parse_json(r#"{"edges":[["a","a"]]}"#), Err(Error::Parse { .. })));
        assert!(matches!(parse_json(r#"{"format_version":7}"#), Err(Error::Parse { .. })));
    }

    #[test]
    fn dot_export() {
        assert_eq!(export_dot(&doc("v a")), "graph \"G\" {\n  \"a\";\n}\n");
        let c4 = export_dot(&doc("e 1 2\ne 2 3\ne 3 4\ne 4 1"));
        assert_eq!(c4.matches(" -- ").count(), 4);
        assert_eq!(c4.lines().filter(|l| l.ends_with(';') && !l.contains("--")).count(), 4);
        let k3 = export_dot(&SpaceDocument::named(doc("e a b\ne b c\ne a c").space, "K3"));
        assert!(k3.starts_with("graph \"K3\" {\n"));
        assert_eq!(k3.matches(" -- ").count(), 3);
    }

    #[test]
    fn trace_files() {
        let text = "DSP a\n# note\n\nASP x : a b\nREP a b -> y\n";
        let steps = parse_trace(text).unwrap();
        assert_eq!(steps.len(), 3);
        assert_eq!(serialize_trace(&steps), "DSP a\nASP x : a b\nREP a b -> y\n");
        assert!(matches!(parse_trace("DSP a\nFOO b"), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn format_selection() {
        assert_eq!(Format::for_path(Path::new("x.json")), Format::Json);
        assert_eq!(Format::for_path(Path::new("x.ds")), Format::Text);
        assert_eq!(Format::for_path(Path::new("x")), Format::Text);
    }
}
