//! Pure infiniteness for periodic presentations. Only two situations are
//! decided: a strongly connected realized graph (YES), and an explicit
//! obstruction (NO). Everything else is UNKNOWN.

use std::collections::{BTreeMap, BTreeSet};

use super::ideals::stem_only_graph;
use super::left_infinite::{Analysis, LeftFiniteCycle};
use super::lift::{cycle_ids, Lift, State};
use super::stability::{left_finite_cycle_cert, realized_cycle_exists};
use crate::classify::{self, COND_PI};
use crate::graph::DirectedGraph;
use crate::presentations::PeriodicPresentation;
use crate::verdict::{Certificate, CornerCert, CycleCert, Verdict};

/// Default number of copies explored: stem size plus three block sizes.
pub fn default_depth(p: &PeriodicPresentation) -> u32 {
    ((p.stem_len() + 3 * p.block_len()) as u32).max(4)
}

/// Largest predecessor set whose full ideal lattice is examined.
const SMALL_QUOTIENT: usize = 16;

pub fn periodic_is_purely_infinite(p: &PeriodicPresentation, depth: Option<u32>, cap: usize) -> Verdict {
    if let Some(g) = stem_only_graph(p) {
        return classify::is_purely_infinite(&g, cap);
    }
    if p.has_realized_sinks() {
        let ids: Vec<String> = p.realized_sinks().into_iter().map(|v| p.realized_id(v)).collect();
        return Verdict::unknown(COND_PI, format!("requires a realized graph without sinks; sinks: {}", ids.join(", ")));
    }
    let depth = depth.unwrap_or_else(|| default_depth(p)).max(3);
    let cycle = realized_cycle_exists(p);
    if cycle.is_no() {
        // Without cycles no vertex connects to a cycle with an exit.
        return Verdict::no(COND_PI, cycle.certificate);
    }
    let a = Analysis::new(p);

    let corners = exit_free_cycles(&a, depth, 1);
    if !corners.is_empty() {
        return Verdict::no(COND_PI, Certificate::TorusCorners { corners });
    }

    if let Some(cert) = strongly_connected(&a, depth, &cycle) {
        return Verdict::yes(COND_PI, cert);
    }

    // A left-finite cycle gives a finite quotient on its predecessors.
    if let LeftFiniteCycle::Found(steps) = a.left_finite_cycle() {
        let start = steps.last().expect("nonempty").1;
        if let Some(left) = a.left_set(start, 100_000) {
            let g = finite_quotient(&a, &left);
            let sub = if left.len() <= SMALL_QUOTIENT {
                Some(classify::is_purely_infinite(&g, cap))
            } else {
                classify::exit_obstruction(&g).map(|c| Verdict::no(COND_PI, c))
            };
            if let Some(v) = sub.filter(|v| v.is_no()) {
                let mut parts = BTreeMap::new();
                parts.insert("left_finite_cycle".to_string(), left_finite_cycle_cert(&a, &steps));
                parts.insert("finite_quotient".to_string(), v.certificate);
                return Verdict::no(COND_PI, Certificate::Composite { parts });
            }
        }
    }
    Verdict::unknown(
        COND_PI,
        format!("neither strong connectivity nor an obstruction was found within {depth} copies"),
    )
}

/// Exit-free realized cycles, up to translation, at most `cap` of them.
///
/// Every vertex on such a cycle has out-degree 1, and out-degrees only
/// depend on the quotient vertex and on whether the copy is 1, so the
/// quotient walk visits each vertex at most twice and the cycle spans at
/// most `2n` levels. Searching `2n + 3` copies therefore finds one copy of
/// each. Cycles starting at copy 2 stand for all their translates; one
/// starting at copy 1 is only listed when shifting it up is not a cycle.
fn exit_free_cycles(a: &Analysis, depth: u32, cap: usize) -> Vec<CornerCert> {
    let n = a.n as u32;
    let lift = Lift::new(&a.quotient, depth.max(2 * n + 3));
    let mut used = vec![false; lift.state_count()];
    let mut found: Vec<Vec<(usize, State)>> = Vec::new();
    while let Some(steps) =
        lift.find_cycle(|s| lift.out_degree(s) == 1 && !used[lift.index(s).expect("in range")])
    {
        for &(_, s) in &steps {
            used[lift.index(s).expect("in range")] = true;
        }
        if steps.iter().map(|(_, s)| s.level).min().unwrap_or(1) <= 2 {
            found.push(steps);
        }
    }
    let states = |steps: &[(usize, State)], up: u32| -> BTreeSet<State> {
        steps
            .iter()
            .map(|&(_, s)| if s.q < a.quotient.stem_len { s } else { State { q: s.q, level: s.level + up } })
            .collect()
    };
    let high: Vec<BTreeSet<State>> = found
        .iter()
        .filter(|c| c.iter().all(|(_, s)| s.level != 1))
        .map(|c| states(c, 0))
        .collect();
    found
        .iter()
        .filter(|c| c.iter().all(|(_, s)| s.level != 1) || !high.contains(&states(c, 1)))
        .take(cap)
        .map(|steps| {
            let (vertices, edges) = cycle_ids(&lift, a.p, steps);
            CornerCert {
                period: vertices.len(),
                cycle: CycleCert { vertices, edges },
            }
        })
        .collect()
}

pub const COND_CORNERS: &str =
    "an exit-free cycle of length n gives a corner isomorphic to n x n matrices over continuous functions on the circle";

/// Exit-free cycles of the realized graph; YES when there is one.
pub fn periodic_torus_corners(p: &PeriodicPresentation, depth: Option<u32>, cap: usize) -> Verdict {
    let a = Analysis::new(p);
    let depth = depth.unwrap_or_else(|| default_depth(p));
    let corners = exit_free_cycles(&a, depth, cap);
    let value = if corners.is_empty() { Verdict::no } else { Verdict::yes };
    value(COND_CORNERS, Certificate::TorusCorners { corners })
}

/// The quotient by everything outside a finite predecessor-closed set.
fn finite_quotient(a: &Analysis, left: &[State]) -> DirectedGraph {
    let lift = Lift::new(&a.quotient, u32::MAX);
    let mut g = DirectedGraph::new();
    for &s in left {
        g.add_vertex(&lift.vertex_id(a.p, s)).expect("distinct states");
    }
    for (i, &s) in left.iter().enumerate() {
        for (e, t) in lift.successors_unbounded(s) {
            if let Ok(j) = left.binary_search(&t) {
                g.add_edge_between(&lift.edge_id(e, s), i, j).expect("distinct labels");
            }
        }
    }
    g
}

/// Strong connectivity of the realized graph, read off a truncation: all
/// block vertices at some level `h0 >= 2` form one class together with
/// their copies at `h0 + 1` using only levels `>= 2`, so by translation
/// every copy above `h0` lies in it; the finitely many vertices below are
/// checked directly.
fn strongly_connected(a: &Analysis, depth: u32, cycle: &Verdict) -> Option<Certificate> {
    let s = a.quotient.stem_len;
    let n = a.n;
    let lift = Lift::new(&a.quotient, depth);
    let top = (depth - 1).min(2 * n as u32 + 2);
    for h0 in 2..=top {
        let anchor = State { q: s, level: h0 };
        let fwd = lift.forward([anchor], |x| x.level >= 2);
        let bwd = lift.backward([anchor], |x| x.level >= 2);
        let in_class = |x: State| {
            let i = lift.index(x).expect("within depth");
            fwd[i] && bwd[i]
        };
        let row_ok = (s..n).all(|q| in_class(State { q, level: h0 }) && in_class(State { q, level: h0 + 1 }));
        if !row_ok {
            continue;
        }
        let fwd_all = lift.forward([anchor], |_| true);
        let bwd_all = lift.backward([anchor], |_| true);
        let low_ok = (0..lift.state_count())
            .filter(|&i| lift.state(i).level < h0)
            .all(|i| fwd_all[i] && bwd_all[i]);
        if !low_ok {
            continue;
        }
        let Certificate::Cycle { cycle, has_exit } = &cycle.certificate else {
            return None;
        };
        debug_assert_eq!(*has_exit, Some(true), "cycles of an infinite strongly connected graph have exits");
        return Some(Certificate::StronglyConnected {
            depth: h0,
            exit_cycle: cycle.clone(),
        });
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ideals::DEFAULT_LATTICE_CAP;
    use crate::presentations::parse_periodic;
    use crate::verdict::VerdictValue;

    fn verdict(s: &str) -> Verdict {
        periodic_is_purely_infinite(&parse_periodic(s).unwrap(), None, DEFAULT_LATTICE_CAP)
    }

    #[test]
    fn example_ii_purely_infinite() {
        let v = verdict(
            "[stem]\nvertex s\n[block]\nvertex b\n[cross]\nedge up b b +1\nedge down b b -1\n[stem-block]\nedge in s b to-block\nedge out s b to-stem\n",
        );
        assert_eq!(v.value, VerdictValue::Yes);
        assert!(matches!(v.certificate, Certificate::StronglyConnected { .. }));
    }

    #[test]
    fn ray_not_purely_infinite() {
        let v = verdict("[block]\nvertex b\n[cross]\nedge u b b +1\n");
        assert_eq!(v.value, VerdictValue::No);
        assert!(matches!(v.certificate, Certificate::Exhaustive { .. }));
    }

    #[test]
    fn exit_free_loop() {
        let v = verdict("[block]\nvertex b\nedge l b b\n");
        assert_eq!(v.value, VerdictValue::No);
        let Certificate::TorusCorners { corners } = v.certificate else { panic!() };
        assert_eq!(corners[0].period, 1);
    }

    #[test]
    fn corners_up_to_translation() {
        let p = parse_periodic("[block]\nvertex b\nedge l b b\n").unwrap();
        let v = periodic_torus_corners(&p, None, 10);
        let Certificate::TorusCorners { corners } = v.certificate else { panic!() };
        assert_eq!(corners.len(), 1);
        // A loop that only exists on copy 1 is its own family.
        let p = parse_periodic("[stem]\nvertex s\n[block]\nvertex b\n[cross]\nedge d b b -1\n[stem-block]\nedge o s b to-stem\nedge i s b to-block\n").unwrap();
        let v = periodic_torus_corners(&p, None, 10);
        let Certificate::TorusCorners { corners } = v.certificate else { panic!() };
        assert_eq!(corners.len(), 1);
        assert_eq!(corners[0].cycle.vertices, ["s", "b@1"]);
    }

    #[test]
    fn stem_loop_into_ray() {
        // The stem loop has an exit, but its predecessor set is just {s}
        // and in that quotient the loop has none.
        let v = verdict(
            "[stem]\nvertex s\nedge l s s\n[block]\nvertex b\n[cross]\nedge u b b +1\n[stem-block]\nedge in s b to-block\n",
        );
        assert_eq!(v.value, VerdictValue::No);
    }

    #[test]
    fn two_loops_everywhere() {
        // Each copy carries two loops and an up and a down edge.
        let v = verdict("[block]\nvertex b\nedge x b b\nedge y b b\n[cross]\nedge u b b +1\nedge d b b -1\n");
        assert_eq!(v.value, VerdictValue::Yes);
    }
}
