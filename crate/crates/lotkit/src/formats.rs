//! Text formats: conjugation presentations, the line-based LOT file, and
//! Graphviz DOT export.
//!
//! Presentation grammar (tokens separated by whitespace or commas):
//!
//! ```text
//! presentation := "<" name* "|" relation* ">"
//! relation     := name name name "^-1" "=" name      -- k i k^-1 = j
//! ```
//!
//! LOT file:
//!
//! ```text
//! # comment
//! vertices: a b c
//! edge a b c        -- source target label
//! ```

use std::fmt::Write as _;

use lotkit_core::graph::{GraphError, LogGraph, RawEdge, RawLog, VertexId};
use lotkit_core::presentation::{LotPresentation, PresentationError, Relation};

/// Line and column are 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Position {
    pub offset: usize,
    pub line: usize,
    pub column: usize,
}

impl std::fmt::Display for Position {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("{at}: syntax error: expected {expected}, found {found}")]
    Syntax { at: Position, expected: String, found: String },
    #[error("{at}: relation is not of the form `k i k^-1 = j` with i != j")]
    NonConjugationRelation { at: Position },
    #[error("{at}: unknown generator {name:?}")]
    UnknownGenerator { at: Position, name: String },
    #[error("{at}: duplicate generator {name:?}")]
    DuplicateGenerator { at: Position, name: String },
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
    #[error(transparent)]
    Presentation(#[from] PresentationError),
}

impl ParseError {
    /// 1-based line of the error, when known.
    pub fn line(&self) -> Option<usize> {
        match self {
            ParseError::Syntax { at, .. }
            | ParseError::NonConjugationRelation { at }
            | ParseError::UnknownGenerator { at, .. }
            | ParseError::DuplicateGenerator { at, .. } => Some(at.line),
            ParseError::Line { line, .. } => Some(*line),
            ParseError::Presentation(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Name(String),
    Open,
    Close,
    Bar,
    Inverse,
    Equals,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Name(n) => format!("name {n:?}"),
            Tok::Open => "'<'".into(),
            Tok::Close => "'>'".into(),
            Tok::Bar => "'|'".into(),
            Tok::Inverse => "'^-1'".into(),
            Tok::Equals => "'='".into(),
            Tok::End => "end of input".into(),
        }
    }
}

struct Lexer<'a> {
    text: &'a str,
    offset: usize,
    line: usize,
    column: usize,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        Lexer { text, offset: 0, line: 1, column: 1 }
    }

    fn position(&self) -> Position {
        Position { offset: self.offset, line: self.line, column: self.column }
    }

    fn bump(&mut self, c: char) {
        self.offset += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.text[self.offset..].chars().next()
    }

    fn next_token(&mut self) -> Result<(Position, Tok), ParseError> {
        while let Some(c) = self.peek() {
            if c.is_whitespace() || c == ',' {
                self.bump(c);
            } else {
                break;
            }
        }
        let at = self.position();
        let Some(c) = self.peek() else { return Ok((at, Tok::End)) };
        let simple = match c {
            '<' => Some(Tok::Open),
            '>' => Some(Tok::Close),
            '|' => Some(Tok::Bar),
            '=' => Some(Tok::Equals),
            _ => None,
        };
        if let Some(tok) = simple {
            self.bump(c);
            return Ok((at, tok));
        }
        if c == '^' {
            if self.text[self.offset..].starts_with("^-1") {
                for ch in "^-1".chars() {
                    self.bump(ch);
                }
                return Ok((at, Tok::Inverse));
            }
            return Err(ParseError::Syntax { at, expected: "'^-1'".into(), found: format!("{c:?}") });
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = self.offset;
            while let Some(ch) = self.peek().filter(|ch| ch.is_ascii_alphanumeric() || *ch == '_') {
                self.bump(ch);
            }
            return Ok((at, Tok::Name(self.text[start..self.offset].to_string())));
        }
        Err(ParseError::Syntax { at, expected: "a name or one of < > | = ^-1".into(), found: format!("{c:?}") })
    }

    fn tokens(mut self) -> Result<Vec<(Position, Tok)>, ParseError> {
        let mut out = Vec::new();
        loop {
            let (at, tok) = self.next_token()?;
            let end = tok == Tok::End;
            out.push((at, tok));
            if end {
                return Ok(out);
            }
        }
    }
}

/// Parses `< a, b, c | c a c^-1 = b, a b a^-1 = c >`.
pub fn parse_presentation(text: &str) -> Result<LotPresentation, ParseError> {
    let tokens = Lexer::new(text).tokens()?;
    let mut pos = 0;
    let unexpected = |i: usize, expected: &str| {
        let (at, tok) = &tokens[i];
        ParseError::Syntax { at: *at, expected: expected.into(), found: tok.describe() }
    };
    if tokens[pos].1 != Tok::Open {
        return Err(unexpected(pos, "'<'"));
    }
    pos += 1;
    let mut generators: Vec<String> = Vec::new();
    loop {
        match &tokens[pos].1 {
            Tok::Name(n) => {
                if generators.contains(n) {
                    return Err(ParseError::DuplicateGenerator { at: tokens[pos].0, name: n.clone() });
                }
                generators.push(n.clone());
                pos += 1;
            }
            Tok::Bar => {
                pos += 1;
                break;
            }
            _ => return Err(unexpected(pos, "a generator name or '|'")),
        }
    }
    let mut relations = Vec::new();
    loop {
        let start = tokens[pos].0;
        match &tokens[pos].1 {
            Tok::Close => {
                pos += 1;
                break;
            }
            Tok::Name(_) => {}
            _ => return Err(unexpected(pos, "a relation or '>'")),
        }
        // Left side: a word of names, each optionally inverted.
        let mut word: Vec<(Position, String, bool)> = Vec::new();
        while let Tok::Name(n) = &tokens[pos].1 {
            let inverted = tokens[pos + 1].1 == Tok::Inverse;
            word.push((tokens[pos].0, n.clone(), inverted));
            pos += if inverted { 2 } else { 1 };
        }
        if tokens[pos].1 != Tok::Equals {
            return Err(unexpected(pos, "a name, '^-1' or '='"));
        }
        pos += 1;
        let Tok::Name(right) = &tokens[pos].1 else { return Err(unexpected(pos, "a name")) };
        let right_at = tokens[pos].0;
        pos += 1;
        if tokens[pos].1 == Tok::Inverse {
            return Err(ParseError::NonConjugationRelation { at: start });
        }
        let shape_ok = word.len() == 3 && !word[0].2 && !word[1].2 && word[2].2 && word[0].1 == word[2].1 && word[1].1 != *right;
        if !shape_ok {
            return Err(ParseError::NonConjugationRelation { at: start });
        }
        for (at, name) in word.iter().map(|(at, n, _)| (*at, n)).chain([(right_at, right)]) {
            if !generators.contains(name) {
                return Err(ParseError::UnknownGenerator { at, name: name.clone() });
            }
        }
        relations.push(Relation::new(word[0].1.clone(), word[1].1.clone(), right.clone()));
        if !matches!(tokens[pos].1, Tok::Name(_) | Tok::Close) {
            return Err(unexpected(pos, "',' followed by a relation, or '>'"));
        }
    }
    if tokens[pos].1 != Tok::End {
        return Err(unexpected(pos, "end of input"));
    }
    Ok(LotPresentation { generators, relations })
}

fn graph_error_line(err: &GraphError, vertices_line: usize, edge_lines: &[usize]) -> usize {
    match err {
        GraphError::UnknownVertex { edge, .. } | GraphError::SelfLoop { edge } | GraphError::DuplicateEdge { edge, .. } => {
            edge_lines[*edge]
        }
        _ => vertices_line,
    }
}

/// Parses the line-based LOT format into a candidate graph (which may still
/// violate simplicity).
pub fn parse_lot_raw(text: &str) -> Result<(RawLog, Vec<usize>, usize), ParseError> {
    let mut vertices: Option<(usize, Vec<String>)> = None;
    let mut edges = Vec::new();
    let mut edge_lines = Vec::new();
    for (i, raw_line) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw_line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let err = |message: String| ParseError::Line { line, message };
        if let Some(rest) = content.strip_prefix("vertices:") {
            if vertices.is_some() {
                return Err(err("second `vertices:` line".into()));
            }
            let names: Vec<String> = rest.split_whitespace().map(String::from).collect();
            if names.is_empty() {
                return Err(err("expected at least one vertex name after `vertices:`".into()));
            }
            if let Some(bad) = names.iter().find(|n| !lotkit_core::graph::is_valid_name(n)) {
                return Err(err(format!("invalid vertex name {bad:?}")));
            }
            if let Some((i, dup)) = names.iter().enumerate().find(|(i, n)| names[..*i].contains(n)) {
                return Err(err(format!("vertex {dup:?} listed twice (position {})", i + 1)));
            }
            vertices = Some((line, names));
            continue;
        }
        let mut words = content.split_whitespace();
        match words.next() {
            Some("edge") => {
                let Some((_, declared)) = &vertices else {
                    return Err(err("`edge` before the `vertices:` line".into()));
                };
                let parts: Vec<&str> = words.collect();
                let [s, t, l] = parts[..] else {
                    return Err(err(format!("expected `edge <source> <target> <label>`, found {} fields", parts.len())));
                };
                if let Some(unknown) = parts.iter().find(|n| !declared.iter().any(|d| d == *n)) {
                    return Err(err(format!("unknown vertex {unknown:?}")));
                }
                edges.push(RawEdge::new(s, t, l));
                edge_lines.push(line);
            }
            Some(word) => return Err(err(format!("expected `vertices:` or `edge`, found {word:?}"))),
            None => unreachable!("content is not empty"),
        }
    }
    let Some((vertices_line, names)) = vertices else {
        return Err(ParseError::Line { line: text.lines().count().max(1), message: "missing `vertices:` line".into() });
    };
    Ok((RawLog { vertices: names, edges }, edge_lines, vertices_line))
}

pub fn parse_lot_file(text: &str) -> Result<LogGraph, ParseError> {
    let (raw, edge_lines, vertices_line) = parse_lot_raw(text)?;
    LogGraph::from_raw(&raw)
        .map_err(|e| ParseError::Line { line: graph_error_line(&e, vertices_line, &edge_lines), message: e.to_string() })
}

/// Canonical LOT file text: vertices in graph order, then edges in order.
pub fn serialize_lot(g: &LogGraph) -> String {
    let mut out = String::from("vertices:");
    for name in g.names() {
        out.push(' ');
        out.push_str(name);
    }
    out.push('\n');
    for e in g.edges() {
        let _ = writeln!(out, "edge {} {} {}", g.name(e.source), g.name(e.target), g.name(e.label));
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputFormat {
    Presentation,
    Lot,
}

impl InputFormat {
    pub fn as_str(self) -> &'static str {
        match self {
            InputFormat::Presentation => "presentation",
            InputFormat::Lot => "lot",
        }
    }
}

/// A leading `<` (after whitespace) selects the presentation grammar.
pub fn detect_format(text: &str) -> InputFormat {
    if text.trim_start().starts_with('<') {
        InputFormat::Presentation
    } else {
        InputFormat::Lot
    }
}

/// Parses either format into a candidate graph.
pub fn parse_any(text: &str) -> Result<(InputFormat, RawLog), ParseError> {
    match detect_format(text) {
        InputFormat::Presentation => {
            let p = parse_presentation(text)?;
            let raw = RawLog {
                vertices: p.generators.clone(),
                edges: p.relations.iter().map(|r| RawEdge::new(&*r.left, &*r.right, &*r.conjugator)).collect(),
            };
            Ok((InputFormat::Presentation, raw))
        }
        InputFormat::Lot => Ok((InputFormat::Lot, parse_lot_raw(text)?.0)),
    }
}

/// Graphviz digraph with labeled edges; highlighted vertices are drawn as
/// double circles.
pub fn export_dot(g: &LogGraph, highlight: &[VertexId]) -> String {
    let mut out = String::from("digraph lot {\n");
    for v in g.vertices() {
        if highlight.contains(&v) {
            let _ = writeln!(out, "  \"{}\" [shape=doublecircle];", g.name(v));
        } else {
            let _ = writeln!(out, "  \"{}\";", g.name(v));
        }
    }
    for e in g.edges() {
        let _ = writeln!(out, "  \"{}\" -> \"{}\" [label=\"{}\"];", g.name(e.source), g.name(e.target), g.name(e.label));
    }
    out.push_str("}\n");
    out
}
