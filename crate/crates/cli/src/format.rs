//! The plain-text input format: `graph`, `map`, `sub` and `lamlang`
//! sections, one item per line, `#` comments.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use lamtool_core::graph_map::GraphSelfMap;
use lamtool_core::lamination::LaminaryLanguage;
use lamtool_core::marked_graph::{format_length, parse_length, EdgeSpec, MarkedMetricGraph};
use lamtool_core::substitution::Substitution;
use lamtool_core::words::{is_valid_name, EdgePath};
use thiserror::Error;

/// Name given to a graph whose header carries none.
pub const DEFAULT_GRAPH_NAME: &str = "g";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Clone, Debug)]
pub struct LanguageSection {
    pub graph_name: String,
    pub symmetric: bool,
    pub language: LaminaryLanguage,
}

/// Everything a file declares. At most one section of each kind.
#[derive(Clone, Debug, Default)]
pub struct InputFile {
    pub graph: Option<MarkedMetricGraph>,
    pub map: Option<GraphSelfMap>,
    pub sub: Option<Substitution>,
    pub lang: Option<LanguageSection>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    Graph,
    Map,
    Sub,
    Lang,
}

struct Token<'a> {
    text: &'a str,
    column: usize,
}

struct Line<'a> {
    number: usize,
    tokens: Vec<Token<'a>>,
}

impl Line<'_> {
    fn err(&self, index: usize, message: impl Into<String>) -> ParseError {
        let column = self.tokens.get(index).map_or(1, |t| t.column);
        ParseError {
            line: self.number,
            column,
            message: message.into(),
        }
    }

    fn text(&self, i: usize) -> &str {
        self.tokens.get(i).map_or("", |t| t.text)
    }

    fn expect_len(&self, n: usize, usage: &str) -> Result<(), ParseError> {
        if self.tokens.len() != n {
            return Err(self.err(0, format!("expected `{usage}`")));
        }
        Ok(())
    }

    fn name(&self, i: usize) -> Result<&str, ParseError> {
        let t = self.text(i);
        if !is_valid_name(t) {
            return Err(self.err(i, format!("invalid name `{t}`")));
        }
        Ok(t)
    }

    /// Path tokens from index `from` on, rejoined for the word parser.
    fn path_literal(&self, from: usize) -> Result<String, ParseError> {
        if self.tokens.len() <= from {
            return Err(self.err(0, "expected at least one edge token"));
        }
        for i in from..self.tokens.len() {
            let t = self.text(i);
            let bare = t.strip_suffix('\'').unwrap_or(t);
            if !is_valid_name(bare) {
                return Err(self.err(i, format!("invalid token `{t}`")));
            }
        }
        Ok(self.tokens[from..].iter().map(|t| t.text).collect::<Vec<_>>().join(" "))
    }

    fn equals(&self, i: usize) -> Result<(), ParseError> {
        if self.text(i) != "=" {
            return Err(self.err(i, format!("expected `=`, found `{}`", self.text(i))));
        }
        Ok(())
    }
}

fn lex(text: &str) -> Vec<Line<'_>> {
    text.lines()
        .enumerate()
        .filter_map(|(i, raw)| {
            let content = raw.split('#').next().unwrap_or("");
            let mut tokens = Vec::new();
            let mut start = None;
            for (pos, ch) in content.char_indices().chain(std::iter::once((content.len(), ' '))) {
                match (ch.is_whitespace(), start) {
                    (false, None) => start = Some(pos),
                    (true, Some(s)) => {
                        tokens.push(Token {
                            text: &content[s..pos],
                            column: content[..s].chars().count() + 1,
                        });
                        start = None;
                    }
                    _ => {}
                }
            }
            (!tokens.is_empty()).then_some(Line { number: i + 1, tokens })
        })
        .collect()
}

fn header_kind(line: &Line) -> Option<Kind> {
    match (line.text(0), line.tokens.len()) {
        ("graph", 1 | 2) => Some(Kind::Graph),
        ("map", 1) => Some(Kind::Map),
        ("sub", 1) => Some(Kind::Sub),
        ("lamlang", _) => Some(Kind::Lang),
        _ => None,
    }
}

pub fn parse(text: &str) -> Result<InputFile, ParseError> {
    let lines = lex(text);
    let mut sections: Vec<(usize, Kind)> = Vec::new();
    for (i, line) in lines.iter().enumerate() {
        if let Some(kind) = header_kind(line) {
            if let Some(&(j, _)) = sections.iter().find(|(_, k)| *k == kind) {
                return Err(line.err(0, format!("second `{}` section (first at line {})", line.text(0), lines[j].number)));
            }
            sections.push((i, kind));
        } else if sections.is_empty() {
            return Err(line.err(0, format!("expected a section header, found `{}`", line.text(0))));
        }
    }
    if sections.is_empty() {
        return Err(ParseError {
            line: 1,
            column: 1,
            message: "empty input".into(),
        });
    }
    let body = |s: usize| {
        let start = sections[s].0;
        let end = sections.get(s + 1).map_or(lines.len(), |x| x.0);
        (&lines[start], &lines[start + 1..end])
    };
    let mut input = InputFile::default();
    let order = [Kind::Graph, Kind::Map, Kind::Sub, Kind::Lang];
    for kind in order {
        let Some(s) = sections.iter().position(|(_, k)| *k == kind) else {
            continue;
        };
        let (header, content) = body(s);
        if content.is_empty() {
            return Err(header.err(0, "section has no content"));
        }
        match kind {
            Kind::Graph => input.graph = Some(parse_graph(header, content)?),
            Kind::Map => {
                let graph = input
                    .graph
                    .clone()
                    .ok_or_else(|| header.err(0, "`map` section needs a `graph` section"))?;
                input.map = Some(parse_map(graph, header, content)?);
            }
            Kind::Sub => input.sub = Some(parse_sub(header, content)?),
            Kind::Lang => {
                let graph = input
                    .graph
                    .clone()
                    .ok_or_else(|| header.err(0, "`lamlang` section needs a `graph` section"))?;
                input.lang = Some(parse_lang(graph, header, content)?);
            }
        }
    }
    Ok(input)
}

fn parse_graph(header: &Line, content: &[Line]) -> Result<MarkedMetricGraph, ParseError> {
    let name = if header.tokens.len() == 2 {
        header.name(1)?.to_string()
    } else {
        DEFAULT_GRAPH_NAME.to_string()
    };
    let mut vertices: Vec<String> = Vec::new();
    let mut edges = Vec::new();
    for line in content {
        match line.text(0) {
            "vertex" => {
                line.expect_len(2, "vertex NAME")?;
                let v = line.name(1)?;
                if vertices.iter().any(|x| x == v) {
                    return Err(line.err(1, format!("vertex `{v}` declared twice")));
                }
                vertices.push(v.to_string());
            }
            "edge" => {
                line.expect_len(5, "edge NAME ORIGIN TERMINUS LENGTH")?;
                let e = line.name(1)?;
                for i in [2, 3] {
                    let v = line.name(i)?;
                    if !vertices.iter().any(|x| x == v) {
                        return Err(line.err(i, format!("unknown vertex `{v}`")));
                    }
                }
                let len = parse_length(line.text(4)).map_err(|e| line.err(4, e.to_string()))?;
                edges.push((line, EdgeSpec::new(e, line.text(2), line.text(3), len)));
            }
            other => return Err(line.err(0, format!("unexpected `{other}` in graph section"))),
        }
    }
    let refs: Vec<&str> = vertices.iter().map(String::as_str).collect();
    let first = edges.first().map(|(l, _)| *l).unwrap_or(header);
    MarkedMetricGraph::new(&name, &refs, edges.into_iter().map(|(_, e)| e).collect())
        .map_err(|e| first.err(0, e.to_string()))
}

fn parse_map(graph: MarkedMetricGraph, header: &Line, content: &[Line]) -> Result<GraphSelfMap, ParseError> {
    let mut vmap: Vec<(String, String)> = Vec::new();
    let mut images: BTreeMap<String, String> = BTreeMap::new();
    for line in content {
        match line.text(0) {
            "vmap" => {
                line.expect_len(4, "vmap NAME = NAME")?;
                line.equals(2)?;
                let (v, w) = (line.name(1)?, line.name(3)?);
                for (i, x) in [(1, v), (3, w)] {
                    if graph.vertex_index(x).is_none() {
                        return Err(line.err(i, format!("unknown vertex `{x}`")));
                    }
                }
                if vmap.iter().any(|(x, _)| x == v) {
                    return Err(line.err(1, format!("vertex `{v}` mapped twice")));
                }
                vmap.push((v.to_string(), w.to_string()));
            }
            "map" => {
                let e = line.name(1)?;
                line.equals(2)?;
                if graph.alphabet().edge_index(e).is_none() {
                    return Err(line.err(1, format!("unknown edge `{e}`")));
                }
                let lit = line.path_literal(3)?;
                if images.insert(e.to_string(), lit).is_some() {
                    return Err(line.err(1, format!("edge `{e}` mapped twice")));
                }
            }
            other => return Err(line.err(0, format!("unexpected `{other}` in map section"))),
        }
    }
    let vrefs: Vec<(&str, &str)> = vmap.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    let irefs: Vec<(&str, &str)> = images.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    GraphSelfMap::from_literals(graph, &vrefs, &irefs).map_err(|e| header.err(0, e.to_string()))
}

fn parse_sub(header: &Line, content: &[Line]) -> Result<Substitution, ParseError> {
    let mut rules: Vec<(String, String)> = Vec::new();
    for line in content {
        if line.text(0) != "sub" {
            return Err(line.err(0, format!("unexpected `{}` in sub section", line.text(0))));
        }
        let x = line.name(1)?;
        line.equals(2)?;
        if line.tokens.len() < 4 {
            return Err(line.err(0, "expected `sub NAME = NAME+`"));
        }
        for i in 3..line.tokens.len() {
            line.name(i)?;
        }
        if rules.iter().any(|(y, _)| y == x) {
            return Err(line.err(1, format!("letter `{x}` given twice")));
        }
        rules.push((x.to_string(), line.path_literal(3)?));
    }
    let refs: Vec<(&str, &str)> = rules.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    Substitution::from_names(&refs).map_err(|e| header.err(0, e.to_string()))
}

fn parse_lang(graph: MarkedMetricGraph, header: &Line, content: &[Line]) -> Result<LanguageSection, ParseError> {
    header.expect_len(3, "lamlang NAME symmetric=0|1")?;
    let name = header.name(1)?;
    if name != graph.name() {
        return Err(header.err(1, format!("language refers to graph `{name}`, file declares `{}`", graph.name())));
    }
    let symmetric = match header.text(2) {
        "symmetric=0" => false,
        "symmetric=1" => true,
        other => return Err(header.err(2, format!("expected `symmetric=0` or `symmetric=1`, found `{other}`"))),
    };
    let mut paths = Vec::new();
    for line in content {
        let lit = line.path_literal(0)?;
        let p: EdgePath = graph.alphabet().parse_path(&lit).map_err(|e| line.err(0, e.to_string()))?;
        paths.push(p);
    }
    let language =
        LaminaryLanguage::user_supplied(graph, &paths, symmetric).map_err(|e| header.err(0, e.to_string()))?;
    Ok(LanguageSection {
        graph_name: name.to_string(),
        symmetric,
        language,
    })
}

/// Canonical text of a parsed file: sections in fixed order, vertices and
/// edges sorted, every vertex image spelled out, language members sorted by
/// length.
pub fn serialize(input: &InputFile) -> String {
    let mut out = String::new();
    let mut blocks: Vec<String> = Vec::new();
    if let Some(g) = &input.graph {
        let mut s = format!("graph {}\n", g.name());
        for v in g.vertices() {
            let _ = writeln!(s, "vertex {v}");
        }
        for e in g.edge_specs() {
            let _ = writeln!(s, "edge {} {} {} {}", e.name, e.origin, e.terminus, format_length(&e.length));
        }
        blocks.push(s);
    }
    if let Some(m) = &input.map {
        let g = m.graph();
        let mut s = String::from("map\n");
        for (i, v) in g.vertices().iter().enumerate() {
            let _ = writeln!(s, "vmap {v} = {}", g.vertices()[m.vertex_image(i)]);
        }
        for l in g.alphabet().positive_letters() {
            let _ = writeln!(s, "map {} = {}", g.alphabet().name(l), g.alphabet().format(m.image(l)));
        }
        blocks.push(s);
    }
    if let Some(sub) = &input.sub {
        let mut s = String::from("sub\n");
        for &l in sub.letters() {
            let _ = writeln!(s, "sub {} = {}", sub.alphabet().name(l), sub.format(sub.image(l)));
        }
        blocks.push(s);
    }
    if let Some(lang) = &input.lang {
        let mut s = format!("lamlang {} symmetric={}\n", lang.graph_name, u8::from(lang.symmetric));
        let a = lang.language.graph.alphabet();
        for w in lang.language.language.members() {
            let _ = writeln!(s, "{}", a.format(w));
        }
        blocks.push(s);
    }
    for (i, b) in blocks.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        out.push_str(b);
    }
    out
}
