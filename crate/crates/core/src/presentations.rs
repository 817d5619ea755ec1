//! The three input classes and their text formats.
//!
//! * edge lists: `vertex <id>` and `edge <id> <src> <dst>` lines;
//! * {0,1} matrices: `matrix <n>` followed by `n` rows of digits;
//! * periodic presentations: `[stem]`, `[block]`, `[cross]` and
//!   `[stem-block]` sections describing a stem graph glued to infinitely
//!   many copies of a block graph.
//!
//! `#` starts a comment anywhere on a line. Declarations are
//! order-insensitive: an edge may name a vertex declared further down.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::path::Path as FsPath;

use serde::{Deserialize, Serialize};

use crate::error::ParseError;
use crate::graph::DirectedGraph;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Edgelist,
    Matrix,
    Periodic,
}

impl Format {
    /// `.ckg` edge list, `.mtx` matrix, `.period` periodic presentation.
    pub fn sniff(path: &FsPath) -> Option<Format> {
        match path.extension()?.to_str()? {
            "ckg" => Some(Format::Edgelist),
            "mtx" => Some(Format::Matrix),
            "period" => Some(Format::Periodic),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Format::Edgelist => "edgelist",
            Format::Matrix => "matrix",
            Format::Periodic => "periodic",
        }
    }
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "edgelist" => Ok(Format::Edgelist),
            "matrix" => Ok(Format::Matrix),
            "periodic" => Ok(Format::Periodic),
            other => Err(format!("unknown format `{other}`")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdjacencyMatrix {
    entries: Vec<Vec<bool>>,
}

impl AdjacencyMatrix {
    pub fn from_rows(rows: Vec<Vec<u8>>) -> Result<Self, String> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(format!("row {} has {} entries, expected {n}", i + 1, row.len()));
            }
            let mut out = Vec::with_capacity(n);
            for x in row {
                match x {
                    0 => out.push(false),
                    1 => out.push(true),
                    other => return Err(format!("entry {other} is not 0 or 1")),
                }
            }
            entries.push(out);
        }
        Ok(Self { entries })
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.entries[i][j]
    }

    pub fn successors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.entries[i]
            .iter()
            .enumerate()
            .filter(|(_, &x)| x)
            .map(|(j, _)| j)
    }

    pub fn zero_rows(&self) -> Vec<usize> {
        (0..self.dim())
            .filter(|&i| !self.entries[i].iter().any(|&x| x))
            .collect()
    }

    /// Vertex label of index `i` (1-based, as in the matrix file).
    pub fn label(i: usize) -> String {
        (i + 1).to_string()
    }

    /// The graph with vertex set `{1..n}` and an edge `i -> j` exactly when
    /// `A(i,j) = 1`.
    pub fn graph(&self) -> DirectedGraph {
        let mut g = DirectedGraph::new();
        for i in 0..self.dim() {
            g.add_vertex(&Self::label(i)).expect("fresh label");
        }
        for i in 0..self.dim() {
            for j in self.successors(i).collect::<Vec<_>>() {
                g.add_edge_between(&format!("e{}_{}", i + 1, j + 1), i, j)
                    .expect("fresh edge id");
            }
        }
        g
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Shift {
    Up,
    Down,
}

impl Shift {
    pub fn weight(self) -> i64 {
        match self {
            Shift::Up => 1,
            Shift::Down => -1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Direction {
    ToBlock,
    ToStem,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossEdge {
    pub id: String,
    pub source: usize,
    pub range: usize,
    pub shift: Shift,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StemBlockEdge {
    pub id: String,
    pub stem: usize,
    pub block: usize,
    pub direction: Direction,
}

/// Finite presentation of a locally finite infinite graph: the stem, copies
/// `1, 2, ...` of the block, cross edges joining consecutive copies
/// (`Up`: copy k to copy k+1, `Down`: copy k+1 to copy k), and stem edges
/// attached to copy 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodicPresentation {
    pub stem: DirectedGraph,
    pub block: DirectedGraph,
    pub cross: Vec<CrossEdge>,
    pub stem_block: Vec<StemBlockEdge>,
}

/// A vertex of the realized infinite graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RealizedVertex {
    Stem(usize),
    Block { vertex: usize, copy: u32 },
}

impl RealizedVertex {
    /// Stem vertices sit at the level of copy 1.
    pub fn level(self) -> u32 {
        match self {
            RealizedVertex::Stem(_) => 1,
            RealizedVertex::Block { copy, .. } => copy,
        }
    }
}

impl PeriodicPresentation {
    pub fn stem_len(&self) -> usize {
        self.stem.vertex_count()
    }

    pub fn block_len(&self) -> usize {
        self.block.vertex_count()
    }

    pub fn realized_id(&self, v: RealizedVertex) -> String {
        match v {
            RealizedVertex::Stem(s) => self.stem.vertex_id(s).to_string(),
            RealizedVertex::Block { vertex, copy } => {
                format!("{}@{}", self.block.vertex_id(vertex), copy)
            }
        }
    }

    /// Inverse of [`realized_id`](Self::realized_id).
    pub fn parse_realized_id(&self, id: &str) -> Option<RealizedVertex> {
        match id.split_once('@') {
            Some((b, k)) => {
                let copy: u32 = k.parse().ok().filter(|&c| c >= 1)?;
                Some(RealizedVertex::Block {
                    vertex: self.block.vertex(b)?,
                    copy,
                })
            }
            None => self.stem.vertex(id).map(RealizedVertex::Stem),
        }
    }

    /// Out-neighbours of a realized vertex, as `(edge label, range)`.
    pub fn realized_successors(&self, v: RealizedVertex) -> Vec<(String, RealizedVertex)> {
        let mut out = Vec::new();
        match v {
            RealizedVertex::Stem(s) => {
                for &e in self.stem.out_edges(s) {
                    let edge = self.stem.edge(e);
                    out.push((edge.id.clone(), RealizedVertex::Stem(edge.range)));
                }
                for sb in &self.stem_block {
                    if sb.stem == s && sb.direction == Direction::ToBlock {
                        out.push((sb.id.clone(), RealizedVertex::Block { vertex: sb.block, copy: 1 }));
                    }
                }
            }
            RealizedVertex::Block { vertex, copy } => {
                for &e in self.block.out_edges(vertex) {
                    let edge = self.block.edge(e);
                    out.push((
                        format!("{}@{}", edge.id, copy),
                        RealizedVertex::Block { vertex: edge.range, copy },
                    ));
                }
                for c in &self.cross {
                    if c.source != vertex {
                        continue;
                    }
                    match c.shift {
                        Shift::Up => out.push((
                            format!("{}@{}", c.id, copy),
                            RealizedVertex::Block { vertex: c.range, copy: copy + 1 },
                        )),
                        Shift::Down if copy >= 2 => out.push((
                            format!("{}@{}", c.id, copy),
                            RealizedVertex::Block { vertex: c.range, copy: copy - 1 },
                        )),
                        Shift::Down => {}
                    }
                }
                if copy == 1 {
                    for sb in &self.stem_block {
                        if sb.block == vertex && sb.direction == Direction::ToStem {
                            out.push((sb.id.clone(), RealizedVertex::Stem(sb.stem)));
                        }
                    }
                }
            }
        }
        out
    }

    /// In-neighbours of a realized vertex.
    pub fn realized_predecessors(&self, v: RealizedVertex) -> Vec<RealizedVertex> {
        let mut out = Vec::new();
        match v {
            RealizedVertex::Stem(s) => {
                out.extend(self.stem.predecessors(s).map(RealizedVertex::Stem));
                for sb in &self.stem_block {
                    if sb.stem == s && sb.direction == Direction::ToStem {
                        out.push(RealizedVertex::Block { vertex: sb.block, copy: 1 });
                    }
                }
            }
            RealizedVertex::Block { vertex, copy } => {
                out.extend(
                    self.block
                        .predecessors(vertex)
                        .map(|w| RealizedVertex::Block { vertex: w, copy }),
                );
                for c in &self.cross {
                    if c.range != vertex {
                        continue;
                    }
                    match c.shift {
                        Shift::Up if copy >= 2 => {
                            out.push(RealizedVertex::Block { vertex: c.source, copy: copy - 1 })
                        }
                        Shift::Up => {}
                        Shift::Down => {
                            out.push(RealizedVertex::Block { vertex: c.source, copy: copy + 1 })
                        }
                    }
                }
                if copy == 1 {
                    for sb in &self.stem_block {
                        if sb.block == vertex && sb.direction == Direction::ToBlock {
                            out.push(RealizedVertex::Stem(sb.stem));
                        }
                    }
                }
            }
        }
        out
    }

    /// Stem vertices emitting nothing, and block vertices whose realization
    /// at copy 1 or at copies >= 2 emits nothing.
    pub fn realized_sinks(&self) -> Vec<RealizedVertex> {
        let mut out = Vec::new();
        for s in 0..self.stem_len() {
            let v = RealizedVertex::Stem(s);
            if self.realized_successors(v).is_empty() {
                out.push(v);
            }
        }
        for b in 0..self.block_len() {
            for copy in [1, 2] {
                let v = RealizedVertex::Block { vertex: b, copy };
                if self.realized_successors(v).is_empty() {
                    out.push(v);
                }
            }
        }
        out
    }

    pub fn has_realized_sinks(&self) -> bool {
        !self.realized_sinks().is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ClassTag {
    Finite,
    Matrix,
    Periodic,
}

/// Hypothesis flags are always computed from the parsed object.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypothesisFlags {
    pub no_sinks: bool,
    pub locally_finite: bool,
    pub row_finite: bool,
    pub no_zero_rows: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphClass {
    pub tag: ClassTag,
    pub flags: HypothesisFlags,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Parsed {
    Finite(DirectedGraph),
    Matrix(AdjacencyMatrix),
    Periodic(PeriodicPresentation),
}

impl Parsed {
    pub fn class(&self) -> GraphClass {
        match self {
            Parsed::Finite(g) => {
                let sinks = g.has_sinks();
                GraphClass {
                    tag: ClassTag::Finite,
                    flags: HypothesisFlags {
                        no_sinks: !sinks,
                        locally_finite: true,
                        row_finite: true,
                        no_zero_rows: !sinks,
                    },
                }
            }
            Parsed::Matrix(a) => {
                let zero = !a.zero_rows().is_empty();
                GraphClass {
                    tag: ClassTag::Matrix,
                    flags: HypothesisFlags {
                        no_sinks: !zero,
                        locally_finite: true,
                        row_finite: true,
                        no_zero_rows: !zero,
                    },
                }
            }
            Parsed::Periodic(p) => {
                let sinks = p.has_realized_sinks();
                GraphClass {
                    tag: ClassTag::Periodic,
                    flags: HypothesisFlags {
                        no_sinks: !sinks,
                        locally_finite: true,
                        row_finite: true,
                        no_zero_rows: !sinks,
                    },
                }
            }
        }
    }

    /// The finite graph behind a finite or matrix input.
    pub fn finite_graph(&self) -> Option<DirectedGraph> {
        match self {
            Parsed::Finite(g) => Some(g.clone()),
            Parsed::Matrix(a) => Some(a.graph()),
            Parsed::Periodic(_) => None,
        }
    }
}

/// Tokens of one line with their 1-based columns, comment stripped.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let body = match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    };
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in body.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s, &body[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s, &body[s..]));
    }
    out.into_iter()
        .map(|(byte, tok)| (body[..byte].chars().count() + 1, tok))
        .collect()
}

struct PendingEdge<'a> {
    line: usize,
    toks: Vec<(usize, &'a str)>,
}

/// Collects `vertex`/`edge` lines and builds the graph once all vertices
/// are known.
#[derive(Default)]
struct GraphSection<'a> {
    vertices: Vec<(usize, usize, &'a str)>,
    edges: Vec<PendingEdge<'a>>,
}

impl<'a> GraphSection<'a> {
    fn accept(&mut self, line: usize, toks: Vec<(usize, &'a str)>) -> Result<(), ParseError> {
        let (col, kw) = toks[0];
        match kw {
            "vertex" => {
                if toks.len() != 2 {
                    return Err(ParseError::new(line, col, "expected `vertex <id>`"));
                }
                self.vertices.push((line, toks[1].0, toks[1].1));
                Ok(())
            }
            "edge" => {
                if toks.len() != 4 {
                    return Err(ParseError::new(line, col, "expected `edge <id> <src> <dst>`"));
                }
                self.edges.push(PendingEdge { line, toks });
                Ok(())
            }
            other => Err(ParseError::new(line, col, format!("unexpected keyword `{other}`"))),
        }
    }

    fn build(&self, edge_ids: &mut HashSet<String>, forbid_at: bool) -> Result<DirectedGraph, ParseError> {
        let mut g = DirectedGraph::new();
        for &(line, col, id) in &self.vertices {
            if forbid_at && id.contains('@') {
                return Err(ParseError::new(line, col, "ids in periodic presentations may not contain `@`"));
            }
            g.add_vertex(id)
                .map_err(|e| ParseError::new(line, col, e.to_string()))?;
        }
        for pe in &self.edges {
            let (id_col, id) = pe.toks[1];
            if forbid_at && id.contains('@') {
                return Err(ParseError::new(pe.line, id_col, "ids in periodic presentations may not contain `@`"));
            }
            if !edge_ids.insert(id.to_string()) {
                return Err(ParseError::new(pe.line, id_col, format!("duplicate edge id `{id}`")));
            }
            for &(col, v) in &pe.toks[2..4] {
                if g.vertex(v).is_none() {
                    return Err(ParseError::new(pe.line, col, format!("undeclared vertex `{v}`")));
                }
            }
            g.add_edge(id, pe.toks[2].1, pe.toks[3].1)
                .map_err(|e| ParseError::new(pe.line, id_col, e.to_string()))?;
        }
        Ok(g)
    }
}

pub fn parse(text: &str, format: Format) -> Result<Parsed, ParseError> {
    match format {
        Format::Edgelist => parse_edgelist(text).map(Parsed::Finite),
        Format::Matrix => parse_matrix(text).map(Parsed::Matrix),
        Format::Periodic => parse_periodic(text).map(Parsed::Periodic),
    }
}

pub fn parse_edgelist(text: &str) -> Result<DirectedGraph, ParseError> {
    let mut section = GraphSection::default();
    for (i, line) in text.lines().enumerate() {
        let toks = tokens(line);
        if toks.is_empty() {
            continue;
        }
        section.accept(i + 1, toks)?;
    }
    section.build(&mut HashSet::new(), false)
}

pub fn parse_matrix(text: &str) -> Result<AdjacencyMatrix, ParseError> {
    let mut dim: Option<usize> = None;
    let mut rows: Vec<Vec<u8>> = Vec::new();
    let mut last_line = 0;
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        last_line = line_no;
        let toks = tokens(line);
        if toks.is_empty() {
            continue;
        }
        match dim {
            None => {
                if toks[0].1 != "matrix" || toks.len() != 2 {
                    return Err(ParseError::new(line_no, toks[0].0, "expected `matrix <n>`"));
                }
                let n: usize = toks[1]
                    .1
                    .parse()
                    .map_err(|_| ParseError::new(line_no, toks[1].0, "matrix dimension is not a number"))?;
                dim = Some(n);
            }
            Some(n) => {
                if rows.len() == n {
                    return Err(ParseError::new(line_no, toks[0].0, "more rows than the declared dimension"));
                }
                if toks.len() != n {
                    let col = toks.get(n).map(|t| t.0).unwrap_or(toks[0].0);
                    return Err(ParseError::new(
                        line_no,
                        col,
                        format!("row has {} entries, expected {n}", toks.len()),
                    ));
                }
                let mut row = Vec::with_capacity(n);
                for (col, t) in toks {
                    match t {
                        "0" => row.push(0),
                        "1" => row.push(1),
                        other => {
                            return Err(ParseError::new(line_no, col, format!("entry `{other}` is not 0 or 1")))
                        }
                    }
                }
                rows.push(row);
            }
        }
    }
    let n = dim.ok_or_else(|| ParseError::new(last_line.max(1), 1, "missing `matrix <n>` header"))?;
    if rows.len() != n {
        return Err(ParseError::new(
            last_line.max(1),
            1,
            format!("expected {n} rows, found {}", rows.len()),
        ));
    }
    AdjacencyMatrix::from_rows(rows).map_err(|m| ParseError::new(1, 1, m))
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Section {
    None,
    Stem,
    Block,
    Cross,
    StemBlock,
}

pub fn parse_periodic(text: &str) -> Result<PeriodicPresentation, ParseError> {
    let mut section = Section::None;
    let mut stem = GraphSection::default();
    let mut block = GraphSection::default();
    let mut cross_lines: Vec<(usize, Vec<(usize, &str)>)> = Vec::new();
    let mut sb_lines: Vec<(usize, Vec<(usize, &str)>)> = Vec::new();
    let mut seen_block = false;

    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let toks = tokens(line);
        if toks.is_empty() {
            continue;
        }
        let (col, first) = toks[0];
        if first.starts_with('[') {
            if toks.len() != 1 {
                return Err(ParseError::new(line_no, toks[1].0, "unexpected text after section header"));
            }
            section = match first {
                "[stem]" => Section::Stem,
                "[block]" => {
                    seen_block = true;
                    Section::Block
                }
                "[cross]" => Section::Cross,
                "[stem-block]" => Section::StemBlock,
                other => return Err(ParseError::new(line_no, col, format!("unknown section `{other}`"))),
            };
            continue;
        }
        match section {
            Section::None => {
                return Err(ParseError::new(line_no, col, "content before the first section header"))
            }
            Section::Stem => stem.accept(line_no, toks)?,
            Section::Block => block.accept(line_no, toks)?,
            Section::Cross => {
                if first != "edge" || toks.len() != 5 {
                    return Err(ParseError::new(line_no, col, "expected `edge <id> <src> <dst> <+1|-1>`"));
                }
                cross_lines.push((line_no, toks));
            }
            Section::StemBlock => {
                if first != "edge" || toks.len() != 5 {
                    return Err(ParseError::new(
                        line_no,
                        col,
                        "expected `edge <id> <stem> <block> <to-block|to-stem>`",
                    ));
                }
                sb_lines.push((line_no, toks));
            }
        }
    }

    if !seen_block || block.vertices.is_empty() {
        let line = text.lines().count().max(1);
        return Err(ParseError::new(line, 1, "periodic presentation needs a nonempty [block] section"));
    }

    let mut edge_ids = HashSet::new();
    let stem = stem.build(&mut edge_ids, true)?;
    let block = block.build(&mut edge_ids, true)?;
    let mut shared_ids: HashSet<&str> = HashSet::new();
    for v in stem.vertex_ids() {
        shared_ids.insert(v);
    }
    for v in block.vertex_ids() {
        if shared_ids.contains(v.as_str()) {
            return Err(ParseError::new(1, 1, format!("vertex id `{v}` used in both stem and block")));
        }
    }

    let edge_id = |edge_ids: &mut HashSet<String>, line: usize, (col, id): (usize, &str)| {
        if id.contains('@') {
            return Err(ParseError::new(line, col, "ids in periodic presentations may not contain `@`"));
        }
        if !edge_ids.insert(id.to_string()) {
            return Err(ParseError::new(line, col, format!("duplicate edge id `{id}`")));
        }
        Ok(id.to_string())
    };
    let lookup = |g: &DirectedGraph, line: usize, (col, v): (usize, &str), what: &str| {
        g.vertex(v)
            .ok_or_else(|| ParseError::new(line, col, format!("undeclared {what} vertex `{v}`")))
    };

    let mut cross = Vec::new();
    for (line, toks) in cross_lines {
        let id = edge_id(&mut edge_ids, line, toks[1])?;
        let source = lookup(&block, line, toks[2], "block")?;
        let range = lookup(&block, line, toks[3], "block")?;
        let shift = match toks[4].1 {
            "+1" | "1" => Shift::Up,
            "-1" => Shift::Down,
            other => return Err(ParseError::new(line, toks[4].0, format!("shift `{other}` is not +1 or -1"))),
        };
        cross.push(CrossEdge { id, source, range, shift });
    }
    let mut stem_block = Vec::new();
    for (line, toks) in sb_lines {
        let id = edge_id(&mut edge_ids, line, toks[1])?;
        let s = lookup(&stem, line, toks[2], "stem")?;
        let b = lookup(&block, line, toks[3], "block")?;
        let direction = match toks[4].1 {
            "to-block" => Direction::ToBlock,
            "to-stem" => Direction::ToStem,
            other => {
                return Err(ParseError::new(
                    line,
                    toks[4].0,
                    format!("direction `{other}` is not to-block or to-stem"),
                ))
            }
        };
        stem_block.push(StemBlockEdge {
            id,
            stem: s,
            block: b,
            direction,
        });
    }
    Ok(PeriodicPresentation {
        stem,
        block,
        cross,
        stem_block,
    })
}

fn write_graph_lines(out: &mut String, g: &DirectedGraph) {
    for v in g.vertex_ids() {
        let _ = writeln!(out, "vertex {v}");
    }
    for e in g.edges() {
        let _ = writeln!(out, "edge {} {} {}", e.id, g.vertex_id(e.source), g.vertex_id(e.range));
    }
}

pub fn to_edgelist(g: &DirectedGraph) -> String {
    let mut out = String::new();
    write_graph_lines(&mut out, g);
    out
}

pub fn to_matrix_text(a: &AdjacencyMatrix) -> String {
    let mut out = format!("matrix {}\n", a.dim());
    for i in 0..a.dim() {
        let row: Vec<&str> = (0..a.dim()).map(|j| if a.get(i, j) { "1" } else { "0" }).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

pub fn to_periodic_text(p: &PeriodicPresentation) -> String {
    let mut out = String::from("[stem]\n");
    write_graph_lines(&mut out, &p.stem);
    out.push_str("[block]\n");
    write_graph_lines(&mut out, &p.block);
    out.push_str("[cross]\n");
    for c in &p.cross {
        let shift = match c.shift {
            Shift::Up => "+1",
            Shift::Down => "-1",
        };
        let _ = writeln!(
            out,
            "edge {} {} {} {shift}",
            c.id,
            p.block.vertex_id(c.source),
            p.block.vertex_id(c.range)
        );
    }
    out.push_str("[stem-block]\n");
    for sb in &p.stem_block {
        let dir = match sb.direction {
            Direction::ToBlock => "to-block",
            Direction::ToStem => "to-stem",
        };
        let _ = writeln!(
            out,
            "edge {} {} {} {dir}",
            sb.id,
            p.stem.vertex_id(sb.stem),
            p.block.vertex_id(sb.block)
        );
    }
    out
}

pub fn serialize(parsed: &Parsed) -> String {
    match parsed {
        Parsed::Finite(g) => to_edgelist(g),
        Parsed::Matrix(a) => to_matrix_text(a),
        Parsed::Periodic(p) => to_periodic_text(p),
    }
}

/// A finite piece of a realized periodic graph. Never a valid input to a
/// decision: it exists for tests, export and oracles.
#[derive(Clone, Debug)]
pub struct Truncation {
    pub graph: DirectedGraph,
    pub copies: u32,
    /// Realized vertex behind each truncation vertex index.
    pub origin: Vec<RealizedVertex>,
}

impl Truncation {
    pub const BANNER: &'static str = "TRUNCATED";

    pub fn index_of(&self, v: RealizedVertex, p: &PeriodicPresentation) -> Option<usize> {
        match v {
            RealizedVertex::Stem(s) => Some(s),
            RealizedVertex::Block { vertex, copy } => {
                if copy == 0 || copy > self.copies {
                    None
                } else {
                    Some(p.stem_len() + (copy as usize - 1) * p.block_len() + vertex)
                }
            }
        }
    }
}

/// Stem plus copies `1..=copies`; edges leaving the last copy are dropped.
pub fn realize_truncation(p: &PeriodicPresentation, copies: u32) -> Truncation {
    let copies = copies.max(1);
    let mut g = DirectedGraph::new();
    let mut origin = Vec::new();
    for s in 0..p.stem_len() {
        g.add_vertex(p.stem.vertex_id(s)).expect("unique");
        origin.push(RealizedVertex::Stem(s));
    }
    for copy in 1..=copies {
        for b in 0..p.block_len() {
            let v = RealizedVertex::Block { vertex: b, copy };
            g.add_vertex(&p.realized_id(v)).expect("unique");
            origin.push(v);
        }
    }
    let t = Truncation {
        graph: DirectedGraph::new(),
        copies,
        origin: Vec::new(),
    };
    let idx = |v: RealizedVertex| t.index_of(v, p);
    for &v in &origin {
        let src = idx(v).expect("in range");
        for (label, w) in p.realized_successors(v) {
            if let Some(dst) = idx(w) {
                g.add_edge_between(&label, src, dst).expect("unique edge labels");
            }
        }
    }
    Truncation {
        graph: g,
        copies,
        origin,
    }
}
