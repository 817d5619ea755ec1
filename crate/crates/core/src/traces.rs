//! Graph-traces on finite graphs, path counts, unital quotients, S^0 and the
//! stability dispatch.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::classify::topological_order;
use crate::error::GraphError;
use crate::exact_lp::{self, FeasibilityResult, RationalLinearSystem};
use crate::graph::DirectedGraph;
use crate::ideals::VertexSet;
use crate::periodic;
use crate::presentations::Parsed;
use crate::verdict::{Certificate, Verdict};
use crate::Rational;

pub const COND_TRACE: &str =
    "graph-trace: nonnegative weights with tau(v) equal to the sum of tau over the ranges of the edges leaving v, normalized to total 1";
pub const COND_UNITAL: &str = periodic::stability::COND_UNITAL;
pub const COND_STABLE_ACYCLIC: &str = "an acyclic graph gives a stable algebra iff it has no nonzero bounded graph-trace";
pub const COND_STABLE_FINITE: &str = "a finite nonempty vertex set gives a unital, hence non-stable, algebra";

/// A graph-trace, by vertex index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphTrace {
    pub values: Vec<Rational>,
}

impl GraphTrace {
    pub fn to_map(&self, g: &DirectedGraph) -> BTreeMap<String, String> {
        self.values
            .iter()
            .enumerate()
            .map(|(v, x)| (g.vertex_id(v).to_string(), x.to_string()))
            .collect()
    }

    /// The trace equation at every non-sink vertex.
    pub fn satisfies(&self, g: &DirectedGraph) -> bool {
        self.values.len() == g.vertex_count()
            && self.values.iter().all(|x| *x >= Rational::zero())
            && (0..g.vertex_count()).filter(|&v| !g.is_sink(v)).all(|v| {
                let sum: Rational = g.out_edges(v).iter().map(|&e| self.values[g.edge(e).range].clone()).sum();
                sum == self.values[v]
            })
    }
}

fn one() -> Rational {
    Rational::one()
}

/// Rows `tau(v) - sum tau(r(e)) = 0` for every non-sink `v`, by vertex.
pub fn trace_rows(g: &DirectedGraph) -> Vec<(usize, Vec<Rational>)> {
    let n = g.vertex_count();
    (0..n)
        .filter(|&v| !g.is_sink(v))
        .map(|v| {
            let mut row = vec![Rational::zero(); n];
            row[v] += one();
            for &e in g.out_edges(v) {
                row[g.edge(e).range] -= one();
            }
            (v, row)
        })
        .collect()
}

/// The trace equations plus the normalization row `sum tau = 1` (last).
pub fn trace_system(g: &DirectedGraph) -> (RationalLinearSystem, Vec<usize>) {
    let n = g.vertex_count();
    let rows = trace_rows(g);
    let labels: Vec<usize> = rows.iter().map(|(v, _)| *v).collect();
    let mut m: Vec<Vec<Rational>> = rows.into_iter().map(|(_, r)| r).collect();
    let mut b = vec![Rational::zero(); m.len()];
    m.push(vec![one(); n]);
    b.push(one());
    (RationalLinearSystem::new(n, m, b).expect("rectangular"), labels)
}

pub fn bounded_graph_trace(g: &DirectedGraph) -> (Verdict, Option<GraphTrace>) {
    let (sys, labels) = trace_system(g);
    match exact_lp::feasible_nonnegative(&sys) {
        FeasibilityResult::Feasible(x) => {
            let t = GraphTrace { values: x };
            (
                Verdict::yes(COND_TRACE, Certificate::Trace { values: t.to_map(g) }),
                Some(t),
            )
        }
        FeasibilityResult::Infeasible(y) => {
            let mut multipliers = BTreeMap::new();
            for (i, &v) in labels.iter().enumerate() {
                multipliers.insert(g.vertex_id(v).to_string(), y[i].to_string());
            }
            multipliers.insert("sum".to_string(), y[labels.len()].to_string());
            (Verdict::no(COND_TRACE, Certificate::Farkas { multipliers }), None)
        }
    }
}

/// Dimension of the linear span of the cone of graph-traces: the nullity
/// of the trace equations restricted to vertices some trace can charge.
pub fn trace_cone_dimension(g: &DirectedGraph) -> usize {
    let n = g.vertex_count();
    let rows: Vec<Vec<Rational>> = trace_rows(g).into_iter().map(|(_, r)| r).collect();
    let live: Vec<usize> = (0..n)
        .filter(|&i| {
            let mut m = rows.clone();
            let mut b = vec![Rational::zero(); m.len()];
            let mut unit = vec![Rational::zero(); n];
            unit[i] = one();
            m.push(unit);
            b.push(one());
            let sys = RationalLinearSystem::new(n, m, b).expect("rectangular");
            matches!(exact_lp::feasible_nonnegative(&sys), FeasibilityResult::Feasible(_))
        })
        .collect();
    if live.is_empty() {
        return 0;
    }
    let restricted: Vec<Vec<Rational>> = rows
        .iter()
        .map(|r| live.iter().map(|&i| r[i].clone()).collect())
        .collect();
    live.len() - exact_lp::rank(&restricted)
}

/// Number of paths from `v` to each sink.
pub fn path_counts(g: &DirectedGraph, v: usize) -> Result<BTreeMap<usize, BigInt>, GraphError> {
    let order = topological_order(g).ok_or(GraphError::Cyclic)?;
    let n = g.vertex_count();
    // ways[w][s]: paths from w to sink s, computed from the end of the order.
    let mut ways: Vec<BTreeMap<usize, BigInt>> = vec![BTreeMap::new(); n];
    for &w in order.iter().rev() {
        if g.is_sink(w) {
            ways[w].insert(w, BigInt::one());
            continue;
        }
        let mut acc: BTreeMap<usize, BigInt> = BTreeMap::new();
        for &e in g.out_edges(w) {
            for (s, c) in &ways[g.edge(e).range] {
                *acc.entry(*s).or_insert_with(BigInt::zero) += c;
            }
        }
        ways[w] = acc;
    }
    Ok(std::mem::take(&mut ways[v]))
}

/// `sum_i n_(v, v_i) tau(v_i)` over the sinks `v_i`; every graph-trace
/// satisfies `tau(v)` equal to this value.
pub fn path_count_identity(
    g: &DirectedGraph,
    v: usize,
    sink_values: &BTreeMap<usize, Rational>,
) -> Result<Rational, GraphError> {
    let counts = path_counts(g, v)?;
    Ok(counts
        .iter()
        .map(|(s, c)| Rational::from_integer(c.clone()) * sink_values.get(s).cloned().unwrap_or_else(Rational::zero))
        .sum())
}

pub fn has_unital_quotient_finite(g: &DirectedGraph) -> Verdict {
    let c = Certificate::Unital {
        vertex_count: g.vertex_count(),
    };
    if g.vertex_count() == 0 {
        Verdict::no(COND_UNITAL, c)
    } else {
        Verdict::yes(COND_UNITAL, c)
    }
}

pub fn has_unital_quotient(input: &Parsed) -> Verdict {
    match input {
        Parsed::Periodic(p) => periodic::has_unital_quotient(p),
        other => has_unital_quotient_finite(&other.finite_graph().expect("finite input")),
    }
}

/// S^0 of a finite graph: every vertex is left-finite, so these are the
/// vertices on infinite paths, i.e. those reaching a cycle. `S` keeps the
/// edges with range in S^0.
pub fn s0_subgraph(g: &DirectedGraph) -> (VertexSet, DirectedGraph) {
    let comps = g.strongly_connected_components();
    let on_cycle: Vec<usize> = (0..g.vertex_count())
        .filter(|&v| g.is_nontrivial_component(&comps, comps.component_of[v]))
        .collect();
    let reach = g.reaching_set(on_cycle);
    let set: VertexSet = (0..g.vertex_count()).filter(|&v| reach[v]).collect();
    let keep: Vec<bool> = reach.clone();
    let (s, _) = g.subgraph_on(&keep);
    (set, s)
}

pub fn is_stable_finite(g: &DirectedGraph) -> Verdict {
    if g.is_acyclic() {
        // Empty graphs land here too: no trace, and the zero algebra is stable.
        let (v, _) = bounded_graph_trace(g);
        return match v.certificate {
            Certificate::Trace { .. } => Verdict::no(COND_STABLE_ACYCLIC, v.certificate),
            other => Verdict::yes(COND_STABLE_ACYCLIC, other),
        }
        .with_hypotheses(&["locally finite", "acyclic"]);
    }
    Verdict::no(
        COND_STABLE_FINITE,
        Certificate::Unital {
            vertex_count: g.vertex_count(),
        },
    )
    .with_hypotheses(&["finite"])
}

pub fn is_stable(input: &Parsed) -> Verdict {
    match input {
        Parsed::Periodic(p) => periodic::periodic_is_stable(p).with_hypotheses(&["locally finite", "no sinks"]),
        other => is_stable_finite(&other.finite_graph().expect("finite input")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn build(n: usize, es: &[(usize, usize)]) -> DirectedGraph {
        let mut g = DirectedGraph::new();
        for i in 0..n {
            g.add_vertex(&format!("v{}", i + 1)).unwrap();
        }
        for (k, &(a, b)) in es.iter().enumerate() {
            g.add_edge_between(&format!("e{k}"), a, b).unwrap();
        }
        g
    }

    fn q(a: i64, b: i64) -> Rational {
        Rational::new(a.into(), b.into())
    }

    #[test]
    fn two_loops_no_trace() {
        let g = build(1, &[(0, 0), (0, 0)]);
        let (v, t) = bounded_graph_trace(&g);
        assert!(v.is_no() && t.is_none());
        let Certificate::Farkas { multipliers } = v.certificate else { panic!() };
        assert!(multipliers.contains_key("sum"));
        assert!(is_stable_finite(&g).is_no());
    }

    #[test]
    fn three_path_trace() {
        let g = build(3, &[(0, 1), (1, 2)]);
        let (v, t) = bounded_graph_trace(&g);
        assert!(v.is_yes());
        let t = t.unwrap();
        assert!(t.satisfies(&g));
        assert_eq!(t.values, vec![q(1, 3), q(1, 3), q(1, 3)]);
        let s = is_stable_finite(&g);
        assert!(s.is_no());
        assert!(matches!(s.certificate, Certificate::Trace { .. }));
    }

    #[test]
    fn single_loop_trace() {
        let g = build(1, &[(0, 0)]);
        let (_, t) = bounded_graph_trace(&g);
        assert_eq!(t.unwrap().values, vec![q(1, 1)]);
    }

    #[test]
    fn path_counts_examples() {
        let g = build(3, &[(0, 1), (1, 2)]);
        let sinks = BTreeMap::from([(2, q(1, 1))]);
        assert_eq!(path_count_identity(&g, 0, &sinks).unwrap(), q(1, 1));
        // Binary out-tree of depth 2.
        let t = build(7, &[(0, 1), (0, 2), (1, 3), (1, 4), (2, 5), (2, 6)]);
        let unit: BTreeMap<usize, Rational> = (3..7).map(|s| (s, q(1, 1))).collect();
        assert_eq!(path_count_identity(&t, 0, &unit).unwrap(), q(4, 1));
        assert_eq!(path_count_identity(&t, 5, &unit).unwrap(), q(1, 1));
        assert!(path_count_identity(&build(1, &[(0, 0)]), 0, &unit).is_err());
    }

    #[test]
    fn cone_dimension_counts_sinks() {
        let g = build(5, &[(0, 1), (0, 2), (1, 3), (2, 3), (2, 4)]);
        assert_eq!(trace_cone_dimension(&g), 2);
        assert_eq!(trace_cone_dimension(&build(1, &[(0, 0), (0, 0)])), 0);
    }

    #[test]
    fn s0_of_finite_graphs() {
        let g = build(3, &[(0, 1), (1, 1), (2, 0)]);
        assert_eq!(s0_subgraph(&g).0.len(), 3);
        let h = build(3, &[(0, 1), (1, 2)]);
        assert!(s0_subgraph(&h).0.is_empty());
    }

    #[test]
    fn unital() {
        assert!(has_unital_quotient_finite(&build(2, &[(0, 1)])).is_yes());
        assert!(has_unital_quotient_finite(&DirectedGraph::new()).is_no());
    }
}
