//! Hereditary and saturated vertex sets, their lattice, and quotient graphs.
//!
//! Saturation only ever forces vertices that emit at least one edge; a sink
//! is never pulled into a set by saturation.

use std::collections::BTreeSet;

use crate::error::{GraphError, IdealError};
use crate::graph::DirectedGraph;

pub const DEFAULT_LATTICE_CAP: usize = 1 << 20;

pub type VertexSet = BTreeSet<usize>;

fn to_mask(n: usize, s: &VertexSet) -> Vec<bool> {
    let mut m = vec![false; n];
    for &v in s {
        m[v] = true;
    }
    m
}

fn from_mask(m: &[bool]) -> VertexSet {
    m.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i).collect()
}

pub fn ids_to_set(g: &DirectedGraph, ids: &[impl AsRef<str>]) -> Result<VertexSet, GraphError> {
    ids.iter()
        .map(|id| {
            g.vertex(id.as_ref())
                .ok_or_else(|| GraphError::UnknownVertex(id.as_ref().to_string()))
        })
        .collect()
}

pub fn set_to_ids(g: &DirectedGraph, s: &VertexSet) -> Vec<String> {
    s.iter().map(|&v| g.vertex_id(v).to_string()).collect()
}

pub fn is_hereditary(g: &DirectedGraph, s: &VertexSet) -> bool {
    g.edges()
        .iter()
        .all(|e| !s.contains(&e.source) || s.contains(&e.range))
}

pub fn is_saturated(g: &DirectedGraph, s: &VertexSet) -> bool {
    (0..g.vertex_count()).all(|v| {
        s.contains(&v) || g.is_sink(v) || g.successors(v).any(|w| !s.contains(&w))
    })
}

pub fn is_hereditary_saturated(g: &DirectedGraph, s: &VertexSet) -> bool {
    is_hereditary(g, s) && is_saturated(g, s)
}

pub fn hereditary_closure(g: &DirectedGraph, s: &VertexSet) -> VertexSet {
    from_mask(&g.reachable_from_set(s.iter().copied()))
}

/// Smallest saturated hereditary superset of a hereditary set.
pub fn saturate(g: &DirectedGraph, s: &VertexSet) -> Result<VertexSet, IdealError> {
    if !is_hereditary(g, s) {
        return Err(IdealError::NotHereditary);
    }
    let n = g.vertex_count();
    let mut inside = to_mask(n, s);
    // Count, for each vertex, the emitted edges whose range is still outside.
    let mut outside: Vec<usize> = (0..n)
        .map(|v| g.successors(v).filter(|&w| !inside[w]).count())
        .collect();
    let mut queue: Vec<usize> = (0..n)
        .filter(|&v| !inside[v] && !g.is_sink(v) && outside[v] == 0)
        .collect();
    while let Some(v) = queue.pop() {
        if inside[v] {
            continue;
        }
        inside[v] = true;
        for &e in g.in_edges(v) {
            let u = g.edge(e).source;
            outside[u] -= 1;
            if outside[u] == 0 && !inside[u] {
                queue.push(u);
            }
        }
    }
    Ok(from_mask(&inside))
}

/// Smallest hereditary saturated set containing `s`.
pub fn generated(g: &DirectedGraph, s: &VertexSet) -> VertexSet {
    saturate(g, &hereditary_closure(g, s)).expect("closure is hereditary")
}

/// All hereditary saturated sets, sorted by size and then lexicographically
/// by vertex index.
pub fn enumerate_hereditary_saturated(g: &DirectedGraph, cap: usize) -> Result<Vec<VertexSet>, IdealError> {
    let comps = g.strongly_connected_components();
    let k = comps.count();
    let nontrivial: Vec<bool> = (0..k).map(|c| g.is_nontrivial_component(&comps, c)).collect();
    let mut out: Vec<VertexSet> = Vec::new();
    let mut chosen = vec![false; k];

    // Components come in an order where successors precede predecessors,
    // so each decision only looks at components already fixed.
    fn rec(
        c: usize,
        g: &DirectedGraph,
        comps: &crate::graph::Components,
        nontrivial: &[bool],
        chosen: &mut Vec<bool>,
        out: &mut Vec<VertexSet>,
        cap: usize,
    ) -> Result<(), IdealError> {
        if c == comps.count() {
            if out.len() == cap {
                return Err(IdealError::CapExceeded(cap));
            }
            let set = (0..comps.count())
                .filter(|&d| chosen[d])
                .flat_map(|d| comps.members[d].iter().copied())
                .collect();
            out.push(set);
            return Ok(());
        }
        let succ = &comps.condensation[c];
        let may_include = succ.iter().all(|&d| chosen[d]);
        let emits = comps.members[c].iter().any(|&v| !g.is_sink(v));
        let must_include = may_include && !nontrivial[c] && emits;
        if may_include {
            chosen[c] = true;
            rec(c + 1, g, comps, nontrivial, chosen, out, cap)?;
            chosen[c] = false;
        }
        if !must_include {
            rec(c + 1, g, comps, nontrivial, chosen, out, cap)?;
        }
        Ok(())
    }

    rec(0, g, &comps, &nontrivial, &mut chosen, &mut out, cap)?;
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.iter().cmp(b.iter())));
    Ok(out)
}

/// Pairs `(i, j)` with `sets[i]` a proper subset of `sets[j]`.
pub fn lattice_order(sets: &[VertexSet]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (i, a) in sets.iter().enumerate() {
        for (j, b) in sets.iter().enumerate() {
            if i != j && a.len() < b.len() && a.is_subset(b) {
                out.push((i, j));
            }
        }
    }
    out
}

/// The graph on `F = E^0 \ H` with the edges whose range lies in `F`.
/// Returns the quotient and the map from quotient index to original index.
pub fn quotient_graph(g: &DirectedGraph, h: &VertexSet) -> Result<(DirectedGraph, Vec<usize>), IdealError> {
    if !is_hereditary(g, h) {
        return Err(IdealError::NotHereditary);
    }
    if !is_saturated(g, h) {
        return Err(IdealError::NotSaturated);
    }
    let keep: Vec<bool> = (0..g.vertex_count()).map(|v| !h.contains(&v)).collect();
    Ok(g.subgraph_on(&keep))
}
