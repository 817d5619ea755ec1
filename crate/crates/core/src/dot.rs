//! Graphviz export. Vertices come out in input order, edges in id order of
//! insertion, so the text is stable across runs.

use std::fmt::Write;

use crate::graph::DirectedGraph;
use crate::presentations::{realize_truncation, Parsed, Truncation};

/// Copies of the block written out for periodic inputs when none is given.
pub const DEFAULT_DOT_COPIES: u32 = 4;

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

pub fn graph_to_dot(g: &DirectedGraph, name: &str) -> String {
    let mut out = format!("digraph {} {{\n", quote(name));
    for id in g.vertex_ids() {
        writeln!(out, "  {};", quote(id)).unwrap();
    }
    for e in g.edges() {
        writeln!(
            out,
            "  {} -> {} [label={}];",
            quote(g.vertex_id(e.source)),
            quote(g.vertex_id(e.range)),
            quote(&e.id)
        )
        .unwrap();
    }
    out.push_str("}\n");
    out
}

/// DOT text for any input; periodic presentations are cut after `copies`
/// copies and say so in a leading comment.
pub fn export_dot(input: &Parsed, copies: Option<u32>) -> String {
    match input {
        Parsed::Periodic(p) => {
            let k = copies.unwrap_or(DEFAULT_DOT_COPIES);
            let t = realize_truncation(p, k);
            format!(
                "// {}: copies 1..={} of the block; edges leaving the last copy are omitted\n{}",
                Truncation::BANNER,
                t.copies,
                graph_to_dot(&t.graph, "realized")
            )
        }
        other => graph_to_dot(&other.finite_graph().expect("finite input"), "G"),
    }
}
