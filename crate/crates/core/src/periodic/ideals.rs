//! Hereditary saturated sets made of whole vertex types: a set of stem and
//! block vertices standing for those stem vertices and every copy of those
//! block vertices.

use std::collections::BTreeSet;

use super::quotient::shift_quotient;
use crate::error::IdealError;
use crate::graph::DirectedGraph;
use crate::presentations::{CrossEdge, PeriodicPresentation, StemBlockEdge};

/// Quotient vertex indices: stem first, then block.
pub type TypeSet = BTreeSet<usize>;

/// Out-edge targets of a type, split by where the realized vertex sits.
struct Patterns {
    /// Stem vertices, or copy 1 of block vertices.
    first: Vec<Vec<usize>>,
    /// Copies 2 and up of block vertices (empty for stem vertices).
    higher: Vec<Vec<usize>>,
}

fn patterns(p: &PeriodicPresentation) -> Patterns {
    let q = shift_quotient(p);
    let n = q.len();
    let mut first = vec![Vec::new(); n];
    let mut higher = vec![Vec::new(); n];
    for (e, edge) in q.graph.edges().iter().enumerate() {
        let (u, v) = (edge.source, edge.range);
        if q.is_stem(u) || q.is_stem(v) {
            // Stem edges and edges into the stem only exist at copy 1.
            first[u].push(v);
        } else if q.weights[e] < 0 {
            higher[u].push(v);
        } else {
            first[u].push(v);
            higher[u].push(v);
        }
    }
    Patterns { first, higher }
}

pub fn is_type_hereditary(p: &PeriodicPresentation, h: &TypeSet) -> bool {
    let q = shift_quotient(p);
    h.iter().all(|&t| q.graph.successors(t).all(|v| h.contains(&v)))
}

fn saturated_with(pat: &Patterns, stem_len: usize, h: &TypeSet) -> bool {
    let forced = |targets: &Vec<usize>| !targets.is_empty() && targets.iter().all(|v| h.contains(v));
    (0..pat.first.len()).filter(|t| !h.contains(t)).all(|t| {
        !forced(&pat.first[t]) && (t < stem_len || !forced(&pat.higher[t]))
    })
}

pub fn is_type_saturated(p: &PeriodicPresentation, h: &TypeSet) -> bool {
    saturated_with(&patterns(p), p.stem_len(), h)
}

/// All presentation-level hereditary saturated sets, by brute force over
/// subsets of types.
pub fn presentation_hereditary_saturated(p: &PeriodicPresentation, max_types: usize) -> Result<Vec<TypeSet>, IdealError> {
    let q = shift_quotient(p);
    let n = q.len();
    if n > max_types {
        return Err(IdealError::CapExceeded(max_types));
    }
    let pat = patterns(p);
    let succ: Vec<u64> = (0..n)
        .map(|t| q.graph.successors(t).fold(0u64, |m, v| m | (1 << v)))
        .collect();
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << n) {
        let hereditary = (0..n).all(|t| mask & (1 << t) == 0 || succ[t] & !mask == 0);
        if !hereditary {
            continue;
        }
        let h: TypeSet = (0..n).filter(|&t| mask & (1 << t) != 0).collect();
        if saturated_with(&pat, p.stem_len(), &h) {
            out.push(h);
        }
    }
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(out)
}

pub fn type_ids(p: &PeriodicPresentation, h: &TypeSet) -> Vec<String> {
    let q = shift_quotient(p);
    h.iter().map(|&t| q.graph.vertex_id(t).to_string()).collect()
}

/// The presentation of the quotient graph: the removed types are dropped
/// together with every edge touching them.
pub fn quotient_presentation(p: &PeriodicPresentation, h: &TypeSet) -> PeriodicPresentation {
    let s = p.stem_len();
    let keep_stem: Vec<bool> = (0..s).map(|v| !h.contains(&v)).collect();
    let keep_block: Vec<bool> = (0..p.block_len()).map(|v| !h.contains(&(s + v))).collect();
    let (stem, stem_back) = p.stem.subgraph_on(&keep_stem);
    let (block, block_back) = p.block.subgraph_on(&keep_block);
    let index = |back: &[usize], old: usize| back.iter().position(|&x| x == old);
    let cross = p
        .cross
        .iter()
        .filter_map(|c| {
            Some(CrossEdge {
                id: c.id.clone(),
                source: index(&block_back, c.source)?,
                range: index(&block_back, c.range)?,
                shift: c.shift,
            })
        })
        .collect();
    let stem_block = p
        .stem_block
        .iter()
        .filter_map(|e| {
            Some(StemBlockEdge {
                id: e.id.clone(),
                stem: index(&stem_back, e.stem)?,
                block: index(&block_back, e.block)?,
                direction: e.direction,
            })
        })
        .collect();
    PeriodicPresentation {
        stem,
        block,
        cross,
        stem_block,
    }
}

/// The realized graph of a presentation without block vertices.
pub fn stem_only_graph(p: &PeriodicPresentation) -> Option<DirectedGraph> {
    (p.block_len() == 0).then(|| p.stem.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ideals;
    use crate::presentations::{parse_periodic, realize_truncation};

    #[test]
    fn example_ii_only_trivial() {
        let p = parse_periodic(
            "[stem]\nvertex s\n[block]\nvertex b\n[cross]\nedge up b b +1\nedge down b b -1\n[stem-block]\nedge in s b to-block\nedge out s b to-stem\n",
        )
        .unwrap();
        let sets = presentation_hereditary_saturated(&p, 20).unwrap();
        assert_eq!(sets.len(), 2);
    }

    #[test]
    fn matches_truncation_far_from_the_cut() {
        // a feeds c; both move both ways. {c} is hereditary and saturated.
        let p = parse_periodic(
            "[block]\nvertex a\nvertex c\nedge ac a c\n[cross]\nedge au a a +1\nedge ad a a -1\nedge cu c c +1\nedge cd c c -1\n",
        )
        .unwrap();
        let sets = presentation_hereditary_saturated(&p, 20).unwrap();
        assert_eq!(sets.len(), 3);
        // The realized set of {c} is hereditary and saturated away from the
        // top copy of a truncation.
        let t = realize_truncation(&p, 6);
        let h: ideals::VertexSet = (1..=6).map(|k| t.graph.vertex(&format!("c@{k}")).unwrap()).collect();
        assert!(ideals::is_hereditary(&t.graph, &h));
        let qp = quotient_presentation(&p, &sets[1]);
        assert_eq!(qp.block_len(), 1);
        assert_eq!(qp.cross.len(), 2);
    }

    #[test]
    fn down_only_copy_pattern_breaks_saturation() {
        // b's only edge is a downward one into t: copies 2+ of b are forced
        // into any set containing t, copy 1 of b is a sink.
        let p = parse_periodic("[block]\nvertex b\nvertex t\n[cross]\nedge d b t -1\nedge tu t t +1\n").unwrap();
        let h: TypeSet = [1].into();
        assert!(is_type_hereditary(&p, &h));
        assert!(!is_type_saturated(&p, &h));
    }
}
