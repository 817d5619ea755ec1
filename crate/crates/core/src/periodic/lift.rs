//! Realized vertices of a periodic presentation as `(quotient vertex,
//! level)` states. A block vertex at level `k` is its copy `k`; stem
//! vertices live at level 1 only. A quotient edge of weight `w` joins
//! `(u, k)` to `(v, k + w)` whenever that target exists.

use std::collections::VecDeque;

use super::quotient::ShiftQuotient;
use crate::presentations::{PeriodicPresentation, RealizedVertex};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct State {
    pub q: usize,
    pub level: u32,
}

/// The realized graph cut off above `depth`.
pub struct Lift<'a> {
    pub quotient: &'a ShiftQuotient,
    pub depth: u32,
    stem: usize,
    block: usize,
}

impl<'a> Lift<'a> {
    pub fn new(quotient: &'a ShiftQuotient, depth: u32) -> Self {
        Self {
            quotient,
            depth: depth.max(1),
            stem: quotient.stem_len,
            block: quotient.len() - quotient.stem_len,
        }
    }

    pub fn state_count(&self) -> usize {
        self.stem + self.block * self.depth as usize
    }

    pub fn index(&self, s: State) -> Option<usize> {
        if s.q < self.stem {
            (s.level == 1).then_some(s.q)
        } else if s.level >= 1 && s.level <= self.depth && s.q < self.stem + self.block {
            Some(self.stem + (s.level as usize - 1) * self.block + (s.q - self.stem))
        } else {
            None
        }
    }

    pub fn state(&self, i: usize) -> State {
        if i < self.stem {
            State { q: i, level: 1 }
        } else {
            let k = i - self.stem;
            State {
                q: self.stem + k % self.block,
                level: (k / self.block) as u32 + 1,
            }
        }
    }

    fn exists(&self, q: usize, level: i64) -> bool {
        if self.quotient.is_stem(q) {
            level == 1
        } else {
            level >= 1
        }
    }

    /// Realized out-edges `(quotient edge, target)`, ignoring the cut-off.
    pub fn successors_unbounded(&self, s: State) -> impl Iterator<Item = (usize, State)> + '_ {
        let g = &self.quotient.graph;
        g.out_edges(s.q).iter().filter_map(move |&e| {
            let t = g.edge(e).range;
            let l = s.level as i64 + self.quotient.weights[e];
            self.exists(t, l).then_some((e, State { q: t, level: l as u32 }))
        })
    }

    pub fn successors(&self, s: State) -> impl Iterator<Item = (usize, State)> + '_ {
        self.successors_unbounded(s).filter(move |(_, t)| t.level <= self.depth)
    }

    pub fn predecessors_unbounded(&self, s: State) -> impl Iterator<Item = (usize, State)> + '_ {
        let g = &self.quotient.graph;
        g.in_edges(s.q).iter().filter_map(move |&e| {
            let u = g.edge(e).source;
            let l = s.level as i64 - self.quotient.weights[e];
            self.exists(u, l).then_some((e, State { q: u, level: l as u32 }))
        })
    }

    pub fn out_degree(&self, s: State) -> usize {
        self.successors_unbounded(s).count()
    }

    /// Forward BFS inside the truncation from `sources`, through states
    /// admitted by `allowed`.
    pub fn forward(&self, sources: impl IntoIterator<Item = State>, allowed: impl Fn(State) -> bool) -> Vec<bool> {
        let mut seen = vec![false; self.state_count()];
        let mut queue = VecDeque::new();
        for s in sources {
            if let Some(i) = self.index(s) {
                if allowed(s) && !seen[i] {
                    seen[i] = true;
                    queue.push_back(s);
                }
            }
        }
        while let Some(s) = queue.pop_front() {
            for (_, t) in self.successors(s) {
                let i = self.index(t).expect("within depth");
                if !seen[i] && allowed(t) {
                    seen[i] = true;
                    queue.push_back(t);
                }
            }
        }
        seen
    }

    /// Backward BFS inside the truncation.
    pub fn backward(&self, targets: impl IntoIterator<Item = State>, allowed: impl Fn(State) -> bool) -> Vec<bool> {
        let mut seen = vec![false; self.state_count()];
        let mut queue = VecDeque::new();
        for s in targets {
            if let Some(i) = self.index(s) {
                if allowed(s) && !seen[i] {
                    seen[i] = true;
                    queue.push_back(s);
                }
            }
        }
        while let Some(s) = queue.pop_front() {
            for (_, u) in self.predecessors_unbounded(s) {
                let Some(i) = self.index(u) else { continue };
                if !seen[i] && allowed(u) {
                    seen[i] = true;
                    queue.push_back(u);
                }
            }
        }
        seen
    }

    /// Shortest path of quotient edges from `from` to a state accepted by
    /// `target`, through allowed states.
    pub fn path(
        &self,
        from: State,
        target: impl Fn(State) -> bool,
        allowed: impl Fn(State) -> bool,
    ) -> Option<Vec<(usize, State)>> {
        let n = self.state_count();
        let mut via: Vec<Option<(usize, usize)>> = vec![None; n];
        let start = self.index(from)?;
        let mut seen = vec![false; n];
        seen[start] = true;
        let mut queue = VecDeque::from([from]);
        while let Some(s) = queue.pop_front() {
            let si = self.index(s).expect("in range");
            for (e, t) in self.successors(s) {
                let ti = self.index(t).expect("in range");
                if !allowed(t) {
                    continue;
                }
                if target(t) {
                    let mut out = vec![(e, t)];
                    let mut cur = si;
                    while cur != start {
                        let (pe, pi) = via[cur].expect("bfs tree");
                        out.push((pe, self.state(cur)));
                        cur = pi;
                    }
                    out.reverse();
                    return Some(out);
                }
                if !seen[ti] {
                    seen[ti] = true;
                    via[ti] = Some((e, si));
                    queue.push_back(t);
                }
            }
        }
        None
    }

    /// A simple cycle among allowed states, as `(edge, state entered)`
    /// steps starting and ending at the same state.
    pub fn find_cycle(&self, allowed: impl Fn(State) -> bool) -> Option<Vec<(usize, State)>> {
        let n = self.state_count();
        // 0 = unvisited, 1 = on stack, 2 = done
        let mut mark = vec![0u8; n];
        let mut parent: Vec<Option<(usize, usize)>> = vec![None; n];
        for root in 0..n {
            let rs = self.state(root);
            if mark[root] != 0 || !allowed(rs) {
                continue;
            }
            let mut stack: Vec<(usize, Vec<(usize, State)>, usize)> =
                vec![(root, self.successors(rs).collect(), 0)];
            mark[root] = 1;
            while let Some((v, succ, pos)) = stack.last_mut() {
                if *pos == succ.len() {
                    mark[*v] = 2;
                    stack.pop();
                    continue;
                }
                let (e, t) = succ[*pos];
                *pos += 1;
                let vi = *v;
                if !allowed(t) {
                    continue;
                }
                let ti = self.index(t).expect("in range");
                match mark[ti] {
                    0 => {
                        mark[ti] = 1;
                        parent[ti] = Some((e, vi));
                        stack.push((ti, self.successors(t).collect(), 0));
                    }
                    1 => {
                        let mut out = vec![(e, t)];
                        let mut cur = vi;
                        while cur != ti {
                            let (pe, pi) = parent[cur].expect("dfs tree");
                            out.push((pe, self.state(cur)));
                            cur = pi;
                        }
                        out.reverse();
                        return Some(out);
                    }
                    _ => {}
                }
            }
        }
        None
    }

    pub fn realized(&self, s: State) -> RealizedVertex {
        if self.quotient.is_stem(s.q) {
            RealizedVertex::Stem(s.q)
        } else {
            RealizedVertex::Block {
                vertex: s.q - self.stem,
                copy: s.level,
            }
        }
    }

    pub fn from_realized(&self, v: RealizedVertex) -> State {
        match v {
            RealizedVertex::Stem(s) => State { q: s, level: 1 },
            RealizedVertex::Block { vertex, copy } => State {
                q: self.stem + vertex,
                level: copy,
            },
        }
    }

    pub fn vertex_id(&self, p: &PeriodicPresentation, s: State) -> String {
        p.realized_id(self.realized(s))
    }

    /// Realized edge label for quotient edge `e` leaving `s`.
    pub fn edge_id(&self, e: usize, s: State) -> String {
        let id = &self.quotient.graph.edge(e).id;
        if self.quotient.block_edge[e] {
            format!("{id}@{}", s.level)
        } else {
            id.clone()
        }
    }
}

/// Realized vertex ids and edge labels of a cycle given as steps, listed
/// from the state the cycle closes on.
pub fn cycle_ids(lift: &Lift, p: &PeriodicPresentation, steps: &[(usize, State)]) -> (Vec<String>, Vec<String>) {
    let n = steps.len();
    let mut vertices = Vec::with_capacity(n);
    let mut edges = Vec::with_capacity(n);
    for i in 0..n {
        let from = steps[(i + n - 1) % n].1;
        vertices.push(lift.vertex_id(p, from));
        edges.push(lift.edge_id(steps[i].0, from));
    }
    (vertices, edges)
}
