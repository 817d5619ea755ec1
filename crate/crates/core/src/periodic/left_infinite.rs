//! Left-infinite realized vertices.
//!
//! Let `N` be the block vertices lying in a strongly connected component of
//! the block part that has a negative cycle. With `n` quotient vertices:
//!
//! * a path between realized vertices at levels `a` and `b` can be chosen
//!   below level `max(a, b) + n^2` (cut out a rising and a falling loop at
//!   the same pair of quotient vertices);
//! * every `(p, h)` with `p` in `N` and `h >= T = 2n^2 + 2n + 1` is
//!   left-infinite, since a negative closed walk at `p` dips less than `T`;
//! * a left-infinite vertex is reached from some `(p, h)` with `p` in `N`
//!   and `h` in any window of `n + 1` consecutive levels above 1, by
//!   pigeonhole on the first visits of the levels.
//!
//! So left-infiniteness is decided exactly by one BFS from the seeds
//! `N x [T, T + n]` in a deep enough truncation.

use std::collections::VecDeque;

use super::lift::{Lift, State};
use super::quotient::{shift_quotient, Mean, MeanCycleReport, ShiftQuotient};
use crate::presentations::{PeriodicPresentation, RealizedVertex};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BlockClass {
    /// All copies above the analysis threshold are left-infinite.
    LeftInfinite,
    /// Every copy is left-finite.
    LeftFinite,
    /// Reached from the negative part only through the stem.
    Undetermined,
}

#[derive(Clone, Debug)]
pub struct BlockSccInfo {
    /// Quotient vertex indices.
    pub vertices: Vec<usize>,
    pub min_mean: Mean,
    pub max_mean: Mean,
}

pub enum LeftFiniteCycle {
    Found(Vec<(usize, State)>),
    None,
    Unknown(String),
}

pub struct Analysis<'a> {
    pub p: &'a PeriodicPresentation,
    pub quotient: ShiftQuotient,
    pub n: usize,
    pub seed_floor: u32,
    pub depth: u32,
    /// Highest level at which the left-infinite table is exact.
    pub exact_limit: u32,
    /// Nontrivial components of the block part.
    pub block_sccs: Vec<BlockSccInfo>,
    /// Per quotient vertex: index into `block_sccs`, if any.
    pub scc_of: Vec<Option<usize>>,
    pub in_negative: Vec<bool>,
    /// Reachable from `N` in the full quotient.
    pub reach_full: Vec<bool>,
    /// Reachable from `N` inside the block part.
    pub reach_block: Vec<bool>,
    left_inf: Vec<bool>,
}

impl<'a> Analysis<'a> {
    pub fn new(p: &'a PeriodicPresentation) -> Self {
        let quotient = shift_quotient(p);
        let n = quotient.len();
        let s = quotient.stem_len;
        let (block, _) = quotient.block_only();
        let report: MeanCycleReport = block.mean_cycles();
        let mut scc_of = vec![None; n];
        let block_sccs: Vec<BlockSccInfo> = report
            .components
            .iter()
            .enumerate()
            .map(|(i, c)| {
                for &v in &c.vertices {
                    scc_of[s + v] = Some(i);
                }
                BlockSccInfo {
                    vertices: c.vertices.iter().map(|&v| s + v).collect(),
                    min_mean: c.min_mean,
                    max_mean: c.max_mean,
                }
            })
            .collect();
        let in_negative: Vec<bool> = (0..n)
            .map(|v| scc_of[v].is_some_and(|c| block_sccs[c].min_mean < Mean::from_integer(0)))
            .collect();
        let negatives: Vec<usize> = (0..n).filter(|&v| in_negative[v]).collect();
        let reach_full = quotient.graph.reachable_from_set(negatives.iter().copied());
        let reach_block_local = block
            .graph
            .reachable_from_set(negatives.iter().map(|&v| v - s));
        let mut reach_block = vec![false; n];
        for (i, r) in reach_block_local.into_iter().enumerate() {
            reach_block[s + i] = r;
        }

        let n32 = n as u32;
        let seed_floor = 2 * n32 * n32 + 2 * n32 + 1;
        let exact_limit = seed_floor + 2 * n32 + n32 * n32 + 1;
        let depth = exact_limit + n32 * n32 + 1;
        let mut a = Self {
            p,
            quotient,
            n,
            seed_floor,
            depth,
            exact_limit,
            block_sccs,
            scc_of,
            in_negative,
            reach_full,
            reach_block,
            left_inf: Vec::new(),
        };
        a.left_inf = a.seed_closure(depth);
        a
    }

    pub fn lift(&self) -> Lift<'_> {
        Lift::new(&self.quotient, self.depth)
    }

    fn seeds(&self) -> Vec<State> {
        let mut out = Vec::new();
        for q in (0..self.n).filter(|&q| self.in_negative[q]) {
            for h in self.seed_floor..=self.seed_floor + self.n as u32 {
                out.push(State { q, level: h });
            }
        }
        out
    }

    fn seed_closure(&self, depth: u32) -> Vec<bool> {
        let lift = Lift::new(&self.quotient, depth);
        lift.forward(self.seeds(), |_| true)
    }

    /// Exact left-infiniteness of a realized state.
    pub fn state_left_infinite(&self, s: State) -> bool {
        if s.level <= self.exact_limit {
            let lift = self.lift();
            return self.left_inf[lift.index(s).expect("within depth")];
        }
        let n2 = (self.n * self.n) as u32;
        let depth = s.level.max(self.seed_floor + self.n as u32) + n2 + 1;
        let lift = Lift::new(&self.quotient, depth);
        let table = lift.forward(self.seeds(), |_| true);
        table[lift.index(s).expect("within depth")]
    }

    pub fn is_left_infinite(&self, v: RealizedVertex) -> bool {
        let s = self.lift().from_realized(v);
        self.state_left_infinite(s)
    }

    pub fn stem_left_infinite(&self) -> Vec<bool> {
        (0..self.quotient.stem_len)
            .map(|q| self.state_left_infinite(State { q, level: 1 }))
            .collect()
    }

    pub fn block_classes(&self) -> Vec<BlockClass> {
        (self.quotient.stem_len..self.n)
            .map(|q| {
                if self.reach_block[q] {
                    BlockClass::LeftInfinite
                } else if !self.reach_full[q] {
                    BlockClass::LeftFinite
                } else {
                    BlockClass::Undetermined
                }
            })
            .collect()
    }

    /// Quotient vertices all of whose realizations are left-finite.
    pub fn finite_region(&self) -> Vec<bool> {
        self.reach_full.iter().map(|r| !r).collect()
    }

    /// Predecessor closure of a left-finite state; `None` if it exceeds
    /// `cap` states.
    pub fn left_set(&self, s: State, cap: usize) -> Option<Vec<State>> {
        let lift = Lift::new(&self.quotient, u32::MAX);
        let mut seen = std::collections::BTreeSet::from([s]);
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            for (_, u) in lift.predecessors_unbounded(x) {
                if seen.insert(u) {
                    if seen.len() > cap {
                        return None;
                    }
                    queue.push_back(u);
                }
            }
        }
        Some(seen.into_iter().collect())
    }

    fn zero_capable(&self, c: usize) -> bool {
        let info = &self.block_sccs[c];
        info.min_mean <= Mean::from_integer(0) && info.max_mean >= Mean::from_integer(0)
    }

    /// Components that are reached from `N` only through the stem.
    fn via_stem_only(&self, c: usize) -> bool {
        let v = self.block_sccs[c].vertices[0];
        self.reach_full[v] && !self.reach_block[v] && !self.in_negative[v]
    }

    /// Searches for a realized cycle made of left-finite vertices.
    pub fn left_finite_cycle(&self) -> LeftFiniteCycle {
        let lift = self.lift();
        let limit = self.exact_limit;
        let found = lift.find_cycle(|s| {
            s.level <= limit && !self.left_inf[lift.index(s).expect("within depth")]
        });
        if let Some(c) = found {
            return LeftFiniteCycle::Found(c);
        }
        let residual: Vec<usize> = (0..self.block_sccs.len())
            .filter(|&c| self.zero_capable(c) && self.via_stem_only(c))
            .collect();
        if residual.is_empty() {
            LeftFiniteCycle::None
        } else {
            let names: Vec<&str> = residual
                .iter()
                .map(|&c| self.quotient.graph.vertex_id(self.block_sccs[c].vertices[0]))
                .collect();
            LeftFiniteCycle::Unknown(format!(
                "block components reached from the left-infinite part only through the stem (at {}) carry zero-displacement cycles",
                names.join(", ")
            ))
        }
    }

    /// A closed walk of negative weight in the block part, for certificates.
    pub fn negative_cycle(&self) -> Option<(Vec<String>, i64)> {
        let (block, back) = self.quotient.block_only();
        let report = block.mean_cycles();
        report
            .components
            .iter()
            .find(|c| c.min_mean < Mean::from_integer(0))
            .map(|c| {
                let ids = c
                    .min_cycle
                    .edges
                    .iter()
                    .map(|&e| self.quotient.graph.edge(back[e]).id.clone())
                    .collect();
                (ids, block.cycle_weight(&c.min_cycle))
            })
    }
}
