//! Finite-graph verdicts: AF, torus corners, pure infiniteness and properly
//! infinite vertex projections.

use crate::graph::{Components, Cycle, DirectedGraph};
use crate::ideals::{self, VertexSet};
use crate::presentations::AdjacencyMatrix;
use crate::verdict::{Certificate, CornerCert, CycleCert, QuotientWitness, Verdict};

pub const COND_AF: &str = "AF iff the graph has no cycles";
pub const COND_PI: &str =
    "purely infinite iff every vertex connects to a cycle with an exit in every quotient by a hereditary saturated set";
pub const COND_PROPER: &str =
    "P_v properly infinite iff v connects to a cycle with an exit in every quotient by a hereditary saturated set not containing v";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusCorner {
    pub cycle: Cycle,
    pub period: usize,
}

/// Vertices in an order where every edge between distinct positions goes
/// forward. Only meaningful for acyclic graphs.
pub fn topological_order(g: &DirectedGraph) -> Option<Vec<usize>> {
    let n = g.vertex_count();
    let mut indeg: Vec<usize> = (0..n).map(|v| g.in_edges(v).len()).collect();
    let mut ready: std::collections::BTreeSet<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
    let mut out = Vec::with_capacity(n);
    while let Some(v) = ready.pop_first() {
        out.push(v);
        for w in g.successors(v).collect::<Vec<_>>() {
            indeg[w] -= 1;
            if indeg[w] == 0 {
                ready.insert(w);
            }
        }
    }
    (out.len() == n).then_some(out)
}

fn af_verdict(g: &DirectedGraph, classify_exit: bool) -> Verdict {
    match topological_order(g) {
        Some(order) => Verdict::yes(
            COND_AF,
            Certificate::TopologicalOrder {
                order: order.iter().map(|&v| g.vertex_id(v).to_string()).collect(),
            },
        ),
        None => {
            let c = g.find_cycle().expect("a graph without topological order has a cycle");
            Verdict::no(
                COND_AF,
                Certificate::Cycle {
                    cycle: CycleCert::of(g, &c),
                    has_exit: classify_exit.then(|| g.cycle_has_exit(&c)),
                },
            )
        }
    }
}

pub fn is_af(g: &DirectedGraph) -> Verdict {
    af_verdict(g, false).with_hypotheses(&["row-finite"])
}

/// For matrices the cycle in a NO answer is also classified: with an exit
/// it gives an infinite projection, without one a torus corner.
pub fn is_af_matrix(a: &AdjacencyMatrix) -> Verdict {
    if let Some(&z) = a.zero_rows().first() {
        return Verdict::unknown(COND_AF, format!("matrix has a zero row at index {}", z + 1));
    }
    af_verdict(&a.graph(), true).with_hypotheses(&["no zero rows"])
}

/// Exit-free cycles. Such a cycle makes up a whole strongly connected
/// component, so no cycle enumeration is needed.
pub fn torus_corners(g: &DirectedGraph) -> Vec<TorusCorner> {
    let comps = g.strongly_connected_components();
    exit_free_cycles(g, &comps)
        .into_iter()
        .map(|cycle| TorusCorner {
            period: cycle.len(),
            cycle,
        })
        .collect()
}

fn exit_free_cycles(g: &DirectedGraph, comps: &Components) -> Vec<Cycle> {
    let mut out: Vec<Cycle> = (0..comps.count())
        .filter(|&c| g.is_nontrivial_component(comps, c) && !g.component_cycles_have_exit(comps, c))
        .filter_map(|c| g.cycle_through(comps.members[c][0], comps))
        .collect();
    out.sort_by_key(|c| c.vertices.iter().min().copied());
    out
}

pub fn corners_certificate(g: &DirectedGraph, corners: &[TorusCorner]) -> Certificate {
    Certificate::TorusCorners {
        corners: corners
            .iter()
            .map(|t| CornerCert {
                cycle: CycleCert::of(g, &t.cycle),
                period: t.period,
            })
            .collect(),
    }
}

/// One cycle per strongly connected component whose cycles all have exits.
/// Every cycle inside such a component has an exit.
fn exit_cycles(g: &DirectedGraph) -> Vec<Cycle> {
    let comps = g.strongly_connected_components();
    (0..comps.count())
        .filter(|&c| g.component_cycles_have_exit(&comps, c))
        .filter_map(|c| g.cycle_through(comps.members[c][0], &comps))
        .collect()
}

/// An exit-free cycle reachable from `v`, when `v` reaches no cycle with an
/// exit in a sink-free graph.
fn obstruction_from(g: &DirectedGraph, v: usize) -> Option<Cycle> {
    let comps = g.strongly_connected_components();
    let reach = g.reachable_from(v);
    (0..g.vertex_count())
        .filter(|&w| reach[w])
        .find(|&w| g.is_nontrivial_component(&comps, comps.component_of[w]))
        .and_then(|w| g.cycle_through(w, &comps))
}

/// A vertex reaching no cycle with an exit, together with the exit-free
/// cycle it reaches. Only meaningful for graphs without sinks.
pub fn exit_obstruction(g: &DirectedGraph) -> Option<Certificate> {
    let good = g.connects_to_exit_cycle();
    let bad = (0..g.vertex_count()).find(|&v| !good[v])?;
    let cycle = obstruction_from(g, bad)?;
    Some(Certificate::QuotientObstruction {
        removed: Vec::new(),
        vertex: g.vertex_id(bad).to_string(),
        cycle: CycleCert::of(g, &cycle),
    })
}

fn hypothesis_refusal(g: &DirectedGraph, cond: &str) -> Option<Verdict> {
    g.has_sinks().then(|| {
        let sinks: Vec<&str> = g.sinks().iter().map(|&v| g.vertex_id(v)).collect();
        Verdict::unknown(cond, format!("requires a graph without sinks; sinks: {}", sinks.join(", ")))
    })
}

fn lattice(g: &DirectedGraph, cap: usize, cond: &str) -> Result<Vec<VertexSet>, Verdict> {
    ideals::enumerate_hereditary_saturated(g, cap)
        .map_err(|e| Verdict::unknown(cond, format!("lattice enumeration stopped: {e}")))
}

/// Pure infiniteness of a finite graph by checking every proper quotient.
pub fn is_purely_infinite(g: &DirectedGraph, cap: usize) -> Verdict {
    let hyps = ["finite", "locally finite", "no sinks"];
    if let Some(v) = hypothesis_refusal(g, COND_PI) {
        return v.with_hypotheses(&hyps);
    }
    let sets = match lattice(g, cap, COND_PI) {
        Ok(s) => s,
        Err(v) => return v.with_hypotheses(&hyps),
    };
    let mut witnesses = Vec::new();
    for h in sets.iter().filter(|h| h.len() < g.vertex_count()) {
        let (q, back) = ideals::quotient_graph(g, h).expect("enumerated sets are hereditary saturated");
        let good = q.connects_to_exit_cycle();
        if let Some(bad) = (0..q.vertex_count()).find(|&v| !good[v]) {
            return obstruction_verdict(g, h, &q, &back, bad, COND_PI).with_hypotheses(&hyps);
        }
        witnesses.push(QuotientWitness {
            removed: ideals::set_to_ids(g, h),
            exit_cycles: exit_cycles(&q).iter().map(|c| CycleCert::of(&q, c)).collect(),
        });
    }
    Verdict::yes(COND_PI, Certificate::ExitCycles { quotients: witnesses }).with_hypotheses(&hyps)
}

fn obstruction_verdict(
    g: &DirectedGraph,
    h: &VertexSet,
    q: &DirectedGraph,
    back: &[usize],
    bad: usize,
    cond: &str,
) -> Verdict {
    match obstruction_from(q, bad) {
        Some(c) => Verdict::no(
            cond,
            Certificate::QuotientObstruction {
                removed: ideals::set_to_ids(g, h),
                vertex: g.vertex_id(back[bad]).to_string(),
                cycle: CycleCert::of(q, &c),
            },
        ),
        None => Verdict::unknown(cond, "quotient has a sink; hypotheses not met"),
    }
}

pub fn properly_infinite_vertex(g: &DirectedGraph, v: usize, cap: usize) -> Verdict {
    let hyps = ["finite", "locally finite", "no sinks"];
    if let Some(r) = hypothesis_refusal(g, COND_PROPER) {
        return r.with_hypotheses(&hyps);
    }
    let sets = match lattice(g, cap, COND_PROPER) {
        Ok(s) => s,
        Err(r) => return r.with_hypotheses(&hyps),
    };
    let mut witnesses = Vec::new();
    for h in sets.iter().filter(|h| !h.contains(&v)) {
        let (q, back) = ideals::quotient_graph(g, h).expect("enumerated sets are hereditary saturated");
        let qv = back.iter().position(|&x| x == v).expect("v lies outside h");
        let good = q.connects_to_exit_cycle();
        if !good[qv] {
            return obstruction_verdict(g, h, &q, &back, qv, COND_PROPER).with_hypotheses(&hyps);
        }
        let reach = q.reachable_from(qv);
        let comps = q.strongly_connected_components();
        let target = (0..q.vertex_count())
            .find(|&w| reach[w] && q.component_cycles_have_exit(&comps, comps.component_of[w]))
            .expect("v connects to a cycle with an exit");
        let cycle = q.cycle_through(target, &comps).expect("nontrivial component");
        witnesses.push(QuotientWitness {
            removed: ideals::set_to_ids(g, h),
            exit_cycles: vec![CycleCert::of(&q, &cycle)],
        });
    }
    Verdict::yes(COND_PROPER, Certificate::ExitCycles { quotients: witnesses }).with_hypotheses(&hyps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ideals::DEFAULT_LATTICE_CAP;
    use crate::presentations::parse_matrix;
    use crate::verdict::VerdictValue;

    fn build(vs: &[&str], es: &[(&str, &str, &str)]) -> DirectedGraph {
        let mut g = DirectedGraph::new();
        for v in vs {
            g.add_vertex(v).unwrap();
        }
        for (id, s, r) in es {
            g.add_edge(id, s, r).unwrap();
        }
        g
    }

    fn o2() -> DirectedGraph {
        build(&["v"], &[("e", "v", "v"), ("f", "v", "v")])
    }

    #[test]
    fn af_examples() {
        let path = build(&["a", "b", "c"], &[("x", "a", "b"), ("y", "b", "c")]);
        assert!(is_af(&path).is_yes());
        assert!(is_af(&o2()).is_no());
        let a = parse_matrix("matrix 2\n1 1\n1 1\n").unwrap();
        let v = is_af_matrix(&a);
        assert!(v.is_no());
        assert!(matches!(v.certificate, Certificate::Cycle { has_exit: Some(true), .. }));
        let z = parse_matrix("matrix 2\n0 1\n0 0\n").unwrap();
        assert!(is_af_matrix(&z).is_unknown());
    }

    #[test]
    fn corners() {
        let l = build(&["v"], &[("e", "v", "v")]);
        let c = torus_corners(&l);
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].period, 1);
        assert!(torus_corners(&o2()).is_empty());
        let tri = build(&["a", "b", "c"], &[("x", "a", "b"), ("y", "b", "c"), ("z", "c", "a")]);
        assert_eq!(torus_corners(&tri)[0].period, 3);
    }

    #[test]
    fn pure_infiniteness() {
        assert!(is_purely_infinite(&o2(), DEFAULT_LATTICE_CAP).is_yes());
        let l = build(&["v"], &[("e", "v", "v")]);
        let v = is_purely_infinite(&l, DEFAULT_LATTICE_CAP);
        assert!(v.is_no());
        assert!(matches!(v.certificate, Certificate::QuotientObstruction { .. }));
        let uw = build(
            &["u", "w"],
            &[("e", "u", "u"), ("f", "u", "u"), ("g", "u", "w"), ("h", "w", "w")],
        );
        let v = is_purely_infinite(&uw, DEFAULT_LATTICE_CAP);
        match v.certificate {
            Certificate::QuotientObstruction { removed, vertex, .. } => {
                assert!(removed.is_empty());
                assert_eq!(vertex, "w");
            }
            other => panic!("{other:?}"),
        }
        let sinky = build(&["a", "b"], &[("x", "a", "b")]);
        assert_eq!(is_purely_infinite(&sinky, 16).value, VerdictValue::Unknown);
    }

    #[test]
    fn proper_vertices() {
        assert!(properly_infinite_vertex(&o2(), 0, DEFAULT_LATTICE_CAP).is_yes());
        let l = build(&["v"], &[("e", "v", "v")]);
        assert!(properly_infinite_vertex(&l, 0, DEFAULT_LATTICE_CAP).is_no());
        let uw = build(
            &["u", "w"],
            &[("e", "u", "u"), ("f", "u", "u"), ("g", "u", "w"), ("h", "w", "w")],
        );
        assert!(properly_infinite_vertex(&uw, 0, DEFAULT_LATTICE_CAP).is_yes());
        assert!(properly_infinite_vertex(&uw, 1, DEFAULT_LATTICE_CAP).is_no());
    }
}
