//! Realized cycles, unital quotients and stability for periodic
//! presentations.

use std::collections::{BTreeMap, HashMap};

use num_traits::{ToPrimitive, Zero};

use super::left_infinite::{Analysis, LeftFiniteCycle};
use super::lift::{cycle_ids, Lift, State};
use super::quotient::{shift_quotient, Mean};
use crate::graph::DirectedGraph;
use crate::perron::{self, Matrix, Poly};
use crate::presentations::PeriodicPresentation;
use crate::verdict::{Certificate, CycleCert, QuotientCycleCert, Verdict};
use crate::Rational;

pub const COND_CYCLE: &str = "a realized cycle is a closed path of zero net copy displacement";
pub const COND_UNITAL: &str =
    "a unital quotient exists iff the vertex set is finite or some cycle has finitely many predecessors";
pub const COND_STABLE: &str =
    "stable iff no cycle has finitely many predecessors and the left-finite part S^0 carries no nonzero bounded graph-trace";

/// Cap on the size of a printed predecessor set.
pub const LEFT_SET_CAP: usize = 200_000;

fn sink_refusal(p: &PeriodicPresentation, cond: &str) -> Option<Verdict> {
    p.has_realized_sinks().then(|| {
        let ids: Vec<String> = p.realized_sinks().into_iter().map(|v| p.realized_id(v)).collect();
        Verdict::unknown(cond, format!("requires a realized graph without sinks; sinks: {}", ids.join(", ")))
    })
}

/// Truncation depth that contains a copy of every realized cycle.
pub fn cycle_search_depth(p: &PeriodicPresentation) -> u32 {
    let n = (p.stem_len() + p.block_len()) as u32;
    n * n + 2
}

pub fn realized_cycle_exists(p: &PeriodicPresentation) -> Verdict {
    let q = shift_quotient(p);
    let depth = cycle_search_depth(p);
    let lift = Lift::new(&q, depth);
    match lift.find_cycle(|_| true) {
        Some(steps) => {
            let (vertices, edges) = cycle_ids(&lift, p, &steps);
            let has_exit = steps.iter().any(|&(_, s)| lift.out_degree(s) > 1);
            Verdict::yes(
                COND_CYCLE,
                Certificate::Cycle {
                    cycle: CycleCert { vertices, edges },
                    has_exit: Some(has_exit),
                },
            )
        }
        None => Verdict::no(
            COND_CYCLE,
            Certificate::Exhaustive {
                search: "realized cycles".into(),
                depth,
            },
        ),
    }
}

pub(crate) fn left_finite_cycle_cert(a: &Analysis, steps: &[(usize, State)]) -> Certificate {
    let lift = a.lift();
    let (vertices, edges) = cycle_ids(&lift, a.p, steps);
    let start = steps.last().expect("nonempty cycle").1;
    let left_set = a
        .left_set(start, LEFT_SET_CAP)
        .map(|set| set.into_iter().map(|s| lift.vertex_id(a.p, s)).collect())
        .unwrap_or_default();
    Certificate::LeftFiniteCycle {
        cycle: CycleCert { vertices, edges },
        left_set,
    }
}

pub fn has_unital_quotient(p: &PeriodicPresentation) -> Verdict {
    if let Some(v) = sink_refusal(p, COND_UNITAL) {
        return v;
    }
    let a = Analysis::new(p);
    match a.left_finite_cycle() {
        LeftFiniteCycle::Found(steps) => Verdict::yes(COND_UNITAL, left_finite_cycle_cert(&a, &steps)),
        LeftFiniteCycle::None => Verdict::no(
            COND_UNITAL,
            Certificate::Exhaustive {
                search: "cycles of left-finite vertices".into(),
                depth: a.exact_limit,
            },
        ),
        LeftFiniteCycle::Unknown(reason) => Verdict::unknown(COND_UNITAL, reason),
    }
}

/// The left-finite vertices on infinite left-finite paths.
#[derive(Clone, Debug)]
pub struct S0Report {
    /// Quotient vertices whose copies at or above `threshold - 1` lie in S^0.
    pub types: Vec<usize>,
    pub threshold: u32,
    /// Members of S^0 below `threshold`.
    pub low: Vec<State>,
}

impl S0Report {
    pub fn contains(&self, s: State) -> bool {
        if s.level + 1 >= self.threshold {
            self.types.binary_search(&s.q).is_ok()
        } else {
            self.low.binary_search(&s).is_ok()
        }
    }
}

pub enum S0 {
    Empty,
    Periodic(S0Report),
    Unknown(String),
}

/// S^0 for a presentation already known to have no left-finite cycle.
///
/// Without left-finite cycles an infinite left-finite path climbs forever,
/// so it ends in a block component with a positive cycle whose copies are
/// not left-infinite. From level `n + 2` up no path reaches the stem, and
/// membership depends on the quotient vertex only.
pub fn s0(a: &Analysis) -> S0 {
    let s = a.quotient.stem_len;
    let zero = Mean::from_integer(0);
    let positive: Vec<usize> = (0..a.block_sccs.len())
        .filter(|&c| a.block_sccs[c].max_mean > zero)
        .collect();
    let via_stem = positive.iter().find(|&&c| {
        let v = a.block_sccs[c].vertices[0];
        a.reach_full[v] && !a.reach_block[v] && !a.in_negative[v]
    });
    if let Some(&c) = via_stem {
        let v = a.block_sccs[c].vertices[0];
        return S0::Unknown(format!(
            "the upward component at {} is reached from the left-infinite part only through the stem",
            a.quotient.graph.vertex_id(v)
        ));
    }
    let targets: Vec<usize> = positive
        .iter()
        .flat_map(|&c| a.block_sccs[c].vertices.iter().copied())
        .filter(|&v| !a.reach_full[v])
        .collect();
    if targets.is_empty() {
        return S0::Empty;
    }
    let (block, _) = a.quotient.block_only();
    let reaching = block.graph.reaching_set(targets.iter().map(|&v| v - s));
    let types: Vec<usize> = (0..block.len())
        .filter(|&i| reaching[i] && !a.reach_full[s + i])
        .map(|i| s + i)
        .collect();
    let threshold = a.n as u32 + 3;
    let lift = a.lift();
    let seeds = types.iter().map(|&q| State { q, level: threshold });
    let back = lift.backward(seeds, |x| x.level <= threshold && !a.state_left_infinite(x));
    let mut low: Vec<State> = (0..lift.state_count())
        .filter(|&i| back[i])
        .map(|i| lift.state(i))
        .filter(|x| x.level < threshold)
        .collect();
    low.sort();
    S0::Periodic(S0Report { types, threshold, low })
}

pub fn periodic_is_stable(p: &PeriodicPresentation) -> Verdict {
    if let Some(v) = sink_refusal(p, COND_STABLE) {
        return v;
    }
    let a = Analysis::new(p);
    match a.left_finite_cycle() {
        LeftFiniteCycle::Found(steps) => return Verdict::no(COND_STABLE, left_finite_cycle_cert(&a, &steps)),
        LeftFiniteCycle::Unknown(reason) => return Verdict::unknown(COND_STABLE, reason),
        LeftFiniteCycle::None => {}
    }
    match s0(&a) {
        S0::Unknown(reason) => Verdict::unknown(COND_STABLE, reason),
        S0::Empty => Verdict::yes(COND_STABLE, left_infinite_cert(&a)),
        S0::Periodic(r) => perron_test(&a, &r),
    }
}

fn left_infinite_cert(a: &Analysis) -> Certificate {
    let negative_cycle = a
        .negative_cycle()
        .map(|(edges, weight)| QuotientCycleCert { edges, weight });
    let finite_region = a
        .finite_region()
        .iter()
        .enumerate()
        .filter(|&(_, &f)| f)
        .map(|(v, _)| a.quotient.graph.vertex_id(v).to_string())
        .collect();
    Certificate::LeftInfinite {
        negative_cycle,
        finite_region,
    }
}

fn q(x: i64) -> Rational {
    Rational::from_integer(x.into())
}

/// Bounded traces on S^0 through the level transfer matrix.
///
/// At levels at or above the threshold a trace is a sequence of vectors
/// `t_h` on the S^0 types with `(I - A0) t_h = A1 t_(h+1)`, that is
/// `t_h = M t_(h+1)`. A summable nonzero solution exists when some
/// irreducible block of `M` with no inflow has spectral radius above 1,
/// and none exists when the spectral radius of `M` is at most 1.
fn perron_test(a: &Analysis, r: &S0Report) -> Verdict {
    let k = r.types.len();
    let idx: HashMap<usize, usize> = r.types.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut a0: Matrix = vec![vec![q(0); k]; k];
    let mut a1: Matrix = vec![vec![q(0); k]; k];
    let g = &a.quotient.graph;
    for (e, edge) in g.edges().iter().enumerate() {
        let (Some(&i), Some(&j)) = (idx.get(&edge.source), idx.get(&edge.range)) else {
            continue;
        };
        match a.quotient.weights[e] {
            0 => a0[i][j] += q(1),
            1 => a1[i][j] += q(1),
            _ => {
                return Verdict::unknown(
                    COND_STABLE,
                    format!("the left-finite part uses the downward edge {}", edge.id),
                )
            }
        }
    }
    let mut sum = perron::identity(k);
    let mut power = perron::identity(k);
    for _ in 1..k.max(1) {
        power = perron::mat_mul(&power, &a0);
        sum = perron::mat_add(&sum, &power);
    }
    let m = perron::mat_mul(&sum, &a1);
    let (char_poly, _) = perron::char_poly_adjugate(&m);
    let types: Vec<String> = r.types.iter().map(|&v| g.vertex_id(v).to_string()).collect();
    let matrix: Vec<Vec<String>> = m.iter().map(|row| row.iter().map(|x| x.to_string()).collect()).collect();
    let base = |root_above_one, trace_direction, sample| Certificate::Perron {
        types: types.clone(),
        matrix: matrix.clone(),
        char_poly: char_poly.display(),
        root_above_one,
        trace_direction,
        sample,
    };

    // Support graph of M and its strongly connected components.
    let mut sg = DirectedGraph::new();
    for i in 0..k {
        sg.add_vertex(&i.to_string()).expect("fresh");
    }
    for i in 0..k {
        for j in 0..k {
            if !m[i][j].is_zero() {
                sg.add_edge_between(&format!("{i}>{j}"), i, j).expect("fresh");
            }
        }
    }
    let comps = sg.strongly_connected_components();
    let mut any_above = false;
    let mut chosen = None;
    for c in 0..comps.count() {
        let members = &comps.members[c];
        let sub: Matrix = members
            .iter()
            .map(|&i| members.iter().map(|&j| m[i][j].clone()).collect())
            .collect();
        if !perron::is_irreducible(&sub) {
            continue;
        }
        let (pc, bs) = perron::char_poly_adjugate(&sub);
        if perron::roots_above(&pc, &q(1)) == 0 {
            continue;
        }
        any_above = true;
        let inflow = (0..k).any(|i| !members.contains(&i) && members.iter().any(|&j| !m[i][j].is_zero()));
        if !inflow && chosen.is_none() {
            chosen = Some((members.clone(), pc, bs));
        }
    }
    if !any_above {
        return Verdict::yes(COND_STABLE, base(false, None, None));
    }
    let Some((members, pc, bs)) = chosen else {
        return Verdict::unknown(
            COND_STABLE,
            "the transfer matrix is reducible and every block with spectral radius above 1 receives inflow",
        );
    };

    // u = adjugate column of (x I - M_C), positive at the Perron root.
    let col = perron::adjugate_column(&bs, 0);
    let mut u = vec![Poly::zero(); k];
    for (pos, &i) in members.iter().enumerate() {
        u[i] = col[pos].rem(&pc);
    }
    if !symbolic_check(&a0, &a1, &u, &pc) || !realized_check(a, r, &idx, &u, &pc) {
        return Verdict::unknown(COND_STABLE, "transfer-matrix trace failed its symbolic check");
    }
    let bound: i64 = m
        .iter()
        .map(|row| row.iter().map(|x| x.to_integer().to_i64().unwrap_or(i64::MAX / 4)).sum::<i64>())
        .max()
        .unwrap_or(0);
    let sample = perron::integer_root_between(&pc, 2, bound.max(2)).map(|rho| {
        let rho_q = q(rho);
        let mut values = BTreeMap::new();
        let lift = a.lift();
        for h in r.threshold..r.threshold + 3 {
            let scale = num_traits::pow(rho_q.clone(), h as usize);
            for (i, &t) in r.types.iter().enumerate() {
                let id = lift.vertex_id(a.p, State { q: t, level: h });
                values.insert(id, (u[i].eval(&rho_q) / &scale).to_string());
            }
        }
        values
    });
    let direction = u.iter().map(|p| p.render("r")).collect();
    Verdict::no(COND_STABLE, base(true, Some(direction), sample))
}

/// `x (I - A0) u - A1 u` vanishes modulo the characteristic polynomial.
fn symbolic_check(a0: &Matrix, a1: &Matrix, u: &[Poly], p: &Poly) -> bool {
    let k = u.len();
    (0..k).all(|i| {
        let mut acc = u[i].mul(&Poly::x());
        for j in 0..k {
            acc = acc
                .sub(&u[j].mul(&Poly::x()).scale(&a0[i][j]))
                .sub(&u[j].scale(&a1[i][j]));
        }
        acc.rem(p).is_zero()
    })
}

/// The trace equation on realized copies at three consecutive levels from
/// the threshold, with `tau(q, h) = r^-h u_q(r)` and `r` a root of `p`.
fn realized_check(a: &Analysis, r: &S0Report, idx: &HashMap<usize, usize>, u: &[Poly], p: &Poly) -> bool {
    let lift = a.lift();
    (r.threshold..r.threshold + 3).all(|h| {
        r.types.iter().all(|&t| {
            let s = State { q: t, level: h };
            let mut rhs = Poly::zero();
            for (_, y) in lift.successors_unbounded(s) {
                if !r.contains(y) {
                    continue;
                }
                let uy = &u[idx[&y.q]];
                // Multiply through by r^(h+1).
                rhs = match y.level as i64 - h as i64 {
                    0 => rhs.add(&uy.mul(&Poly::x())),
                    1 => rhs.add(uy),
                    _ => return false,
                };
            }
            u[idx[&t]].mul(&Poly::x()).sub(&rhs).rem(p).is_zero()
        })
    })
}
