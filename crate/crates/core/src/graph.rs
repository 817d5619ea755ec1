//! Finite directed graphs: vertices, edges with source and range maps,
//! paths, cycles, reachability and strongly connected components.
//!
//! Vertex and edge ids are opaque strings; internally everything is
//! addressed by dense indices in insertion order, which keeps every
//! traversal deterministic.

use std::collections::{BTreeSet, HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::GraphError;

/// Default cap on the number of simple cycles enumerated by
/// [`DirectedGraph::simple_cycles`].
pub const DEFAULT_CYCLE_CAP: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub id: String,
    pub source: usize,
    pub range: usize,
}

#[derive(Clone, Debug, Default)]
pub struct DirectedGraph {
    vertex_ids: Vec<String>,
    vertex_index: HashMap<String, usize>,
    edges: Vec<Edge>,
    edge_index: HashMap<String, usize>,
    out_edges: Vec<Vec<usize>>,
    in_edges: Vec<Vec<usize>>,
}

impl PartialEq for DirectedGraph {
    fn eq(&self, other: &Self) -> bool {
        self.vertex_ids == other.vertex_ids && self.edges == other.edges
    }
}

impl Eq for DirectedGraph {}

/// A nonempty sequence of chained edges, `s(e_{j+1}) = r(e_j)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    pub edges: Vec<usize>,
}

/// A path whose source equals its range. `vertices[i]` is the source of
/// `edges[i]`; for a simple cycle they are pairwise distinct.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cycle {
    pub edges: Vec<usize>,
    pub vertices: Vec<usize>,
}

impl Cycle {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn base(&self) -> usize {
        self.vertices[0]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeProfile {
    pub row_finite: bool,
    pub locally_finite: bool,
    pub sinks: BTreeSet<String>,
    pub has_zero_rows: bool,
}

/// Strongly connected components in reverse topological order of the
/// condensation (Tarjan order: a component is emitted after every
/// component it can reach).
#[derive(Clone, Debug)]
pub struct Components {
    pub component_of: Vec<usize>,
    pub members: Vec<Vec<usize>>,
    /// `condensation[c]` lists the components directly reachable from `c`.
    pub condensation: Vec<BTreeSet<usize>>,
}

impl Components {
    pub fn count(&self) -> usize {
        self.members.len()
    }
}

impl DirectedGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, id: &str) -> Result<usize, GraphError> {
        if self.vertex_index.contains_key(id) {
            return Err(GraphError::DuplicateVertex(id.to_string()));
        }
        let idx = self.vertex_ids.len();
        self.vertex_ids.push(id.to_string());
        self.vertex_index.insert(id.to_string(), idx);
        self.out_edges.push(Vec::new());
        self.in_edges.push(Vec::new());
        Ok(idx)
    }

    pub fn add_edge(&mut self, id: &str, source: &str, range: &str) -> Result<usize, GraphError> {
        let s = self
            .vertex(source)
            .ok_or_else(|| GraphError::UnknownVertex(source.to_string()))?;
        let r = self
            .vertex(range)
            .ok_or_else(|| GraphError::UnknownVertex(range.to_string()))?;
        self.add_edge_between(id, s, r)
    }

    pub fn add_edge_between(&mut self, id: &str, source: usize, range: usize) -> Result<usize, GraphError> {
        if self.edge_index.contains_key(id) {
            return Err(GraphError::DuplicateEdge(id.to_string()));
        }
        let n = self.vertex_count();
        if source >= n || range >= n {
            return Err(GraphError::UnknownVertex(format!("#{}", source.max(range))));
        }
        let idx = self.edges.len();
        self.edges.push(Edge {
            id: id.to_string(),
            source,
            range,
        });
        self.edge_index.insert(id.to_string(), idx);
        self.out_edges[source].push(idx);
        self.in_edges[range].push(idx);
        Ok(idx)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex(&self, id: &str) -> Option<usize> {
        self.vertex_index.get(id).copied()
    }

    pub fn edge_by_id(&self, id: &str) -> Option<usize> {
        self.edge_index.get(id).copied()
    }

    pub fn vertex_id(&self, v: usize) -> &str {
        &self.vertex_ids[v]
    }

    pub fn vertex_ids(&self) -> &[String] {
        &self.vertex_ids
    }

    pub fn edge(&self, e: usize) -> &Edge {
        &self.edges[e]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn out_edges(&self, v: usize) -> &[usize] {
        &self.out_edges[v]
    }

    pub fn in_edges(&self, v: usize) -> &[usize] {
        &self.in_edges[v]
    }

    pub fn successors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.out_edges[v].iter().map(move |&e| self.edges[e].range)
    }

    pub fn predecessors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.in_edges[v].iter().map(move |&e| self.edges[e].source)
    }

    pub fn is_sink(&self, v: usize) -> bool {
        self.out_edges[v].is_empty()
    }

    pub fn sinks(&self) -> Vec<usize> {
        (0..self.vertex_count()).filter(|&v| self.is_sink(v)).collect()
    }

    pub fn has_sinks(&self) -> bool {
        (0..self.vertex_count()).any(|v| self.is_sink(v))
    }

    /// Finite graphs are trivially row-finite and locally finite.
    pub fn degree_profile(&self) -> DegreeProfile {
        let sinks: BTreeSet<String> = self
            .sinks()
            .into_iter()
            .map(|v| self.vertex_ids[v].clone())
            .collect();
        DegreeProfile {
            row_finite: true,
            locally_finite: true,
            has_zero_rows: !sinks.is_empty(),
            sinks,
        }
    }

    /// Path validation: nonempty and chained.
    pub fn check_path(&self, edges: &[usize]) -> bool {
        !edges.is_empty()
            && edges.iter().all(|&e| e < self.edge_count())
            && edges
                .windows(2)
                .all(|w| self.edges[w[1]].source == self.edges[w[0]].range)
    }

    pub fn path_source(&self, p: &Path) -> usize {
        self.edges[p.edges[0]].source
    }

    pub fn path_range(&self, p: &Path) -> usize {
        self.edges[*p.edges.last().expect("nonempty path")].range
    }

    /// Builds a cycle from an edge sequence, checking chaining and closure.
    pub fn cycle_from_edges(&self, edges: Vec<usize>) -> Option<Cycle> {
        if !self.check_path(&edges) {
            return None;
        }
        let first = self.edges[edges[0]].source;
        let last = self.edges[*edges.last()?].range;
        if first != last {
            return None;
        }
        let vertices = edges.iter().map(|&e| self.edges[e].source).collect();
        Some(Cycle { edges, vertices })
    }

    pub fn is_simple_cycle(&self, c: &Cycle) -> bool {
        match self.cycle_from_edges(c.edges.clone()) {
            Some(rebuilt) if rebuilt.vertices == c.vertices => {
                let distinct: BTreeSet<usize> = c.vertices.iter().copied().collect();
                distinct.len() == c.vertices.len()
            }
            _ => false,
        }
    }

    /// `{v}` together with every vertex reachable from `v` by a path.
    pub fn reachable_from(&self, v: usize) -> Vec<bool> {
        self.reachable_from_set(std::iter::once(v))
    }

    pub fn reachable_from_set(&self, start: impl IntoIterator<Item = usize>) -> Vec<bool> {
        let mut seen = vec![false; self.vertex_count()];
        let mut queue = VecDeque::new();
        for v in start {
            if !seen[v] {
                seen[v] = true;
                queue.push_back(v);
            }
        }
        while let Some(u) = queue.pop_front() {
            for w in self.successors(u) {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        seen
    }

    /// Vertices that reach some vertex of `targets` (including the targets).
    pub fn reaching_set(&self, targets: impl IntoIterator<Item = usize>) -> Vec<bool> {
        let mut seen = vec![false; self.vertex_count()];
        let mut queue = VecDeque::new();
        for v in targets {
            if !seen[v] {
                seen[v] = true;
                queue.push_back(v);
            }
        }
        while let Some(u) = queue.pop_front() {
            for w in self.predecessors(u) {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        seen
    }

    pub fn reachable_ids(&self, id: &str) -> Result<BTreeSet<String>, GraphError> {
        let v = self
            .vertex(id)
            .ok_or_else(|| GraphError::UnknownVertex(id.to_string()))?;
        Ok(self
            .reachable_from(v)
            .iter()
            .enumerate()
            .filter(|(_, &r)| r)
            .map(|(w, _)| self.vertex_ids[w].clone())
            .collect())
    }

    /// BFS path (as edges) from `from` to any vertex satisfying `target`,
    /// moving only through vertices accepted by `allowed`. Returns `Some(vec![])`
    /// when `from` itself is a target.
    pub fn path_to(
        &self,
        from: usize,
        target: impl Fn(usize) -> bool,
        allowed: impl Fn(usize) -> bool,
    ) -> Option<Vec<usize>> {
        if target(from) {
            return Some(Vec::new());
        }
        let n = self.vertex_count();
        let mut via: Vec<Option<usize>> = vec![None; n];
        let mut seen = vec![false; n];
        seen[from] = true;
        let mut queue = VecDeque::from([from]);
        while let Some(u) = queue.pop_front() {
            for &e in &self.out_edges[u] {
                let w = self.edges[e].range;
                if seen[w] || !allowed(w) {
                    continue;
                }
                seen[w] = true;
                via[w] = Some(e);
                if target(w) {
                    let mut path = Vec::new();
                    let mut cur = w;
                    while cur != from {
                        let e = via[cur].expect("bfs tree");
                        path.push(e);
                        cur = self.edges[e].source;
                    }
                    path.reverse();
                    return Some(path);
                }
                queue.push_back(w);
            }
        }
        None
    }

    /// Iterative Tarjan.
    pub fn strongly_connected_components(&self) -> Components {
        let n = self.vertex_count();
        let mut index = vec![usize::MAX; n];
        let mut low = vec![0usize; n];
        let mut on_stack = vec![false; n];
        let mut stack = Vec::new();
        let mut component_of = vec![usize::MAX; n];
        let mut members: Vec<Vec<usize>> = Vec::new();
        let mut counter = 0;

        for root in 0..n {
            if index[root] != usize::MAX {
                continue;
            }
            // (vertex, next out-edge position)
            let mut call: Vec<(usize, usize)> = vec![(root, 0)];
            index[root] = counter;
            low[root] = counter;
            counter += 1;
            stack.push(root);
            on_stack[root] = true;

            while let Some(&mut (v, ref mut pos)) = call.last_mut() {
                if *pos < self.out_edges[v].len() {
                    let w = self.edges[self.out_edges[v][*pos]].range;
                    *pos += 1;
                    if index[w] == usize::MAX {
                        index[w] = counter;
                        low[w] = counter;
                        counter += 1;
                        stack.push(w);
                        on_stack[w] = true;
                        call.push((w, 0));
                    } else if on_stack[w] {
                        low[v] = low[v].min(index[w]);
                    }
                } else {
                    call.pop();
                    if let Some(&(parent, _)) = call.last() {
                        low[parent] = low[parent].min(low[v]);
                    }
                    if low[v] == index[v] {
                        let c = members.len();
                        let mut comp = Vec::new();
                        loop {
                            let w = stack.pop().expect("tarjan stack");
                            on_stack[w] = false;
                            component_of[w] = c;
                            comp.push(w);
                            if w == v {
                                break;
                            }
                        }
                        comp.sort_unstable();
                        members.push(comp);
                    }
                }
            }
        }

        let mut condensation = vec![BTreeSet::new(); members.len()];
        for e in &self.edges {
            let (a, b) = (component_of[e.source], component_of[e.range]);
            if a != b {
                condensation[a].insert(b);
            }
        }
        Components {
            component_of,
            members,
            condensation,
        }
    }

    /// Number of edges with both endpoints in component `c`.
    fn internal_edge_count(&self, comps: &Components, c: usize) -> usize {
        comps.members[c]
            .iter()
            .flat_map(|&v| self.out_edges[v].iter())
            .filter(|&&e| comps.component_of[self.edges[e].range] == c)
            .count()
    }

    pub fn is_nontrivial_component(&self, comps: &Components, c: usize) -> bool {
        self.internal_edge_count(comps, c) > 0
    }

    /// A nontrivial component all of whose cycles have an exit. This fails
    /// only for a component that is a single bare cycle emitting no other
    /// edge.
    pub fn component_cycles_have_exit(&self, comps: &Components, c: usize) -> bool {
        let internal = self.internal_edge_count(comps, c);
        if internal == 0 {
            return false;
        }
        let size = comps.members[c].len();
        if internal > size {
            return true;
        }
        comps.members[c]
            .iter()
            .any(|&v| self.out_edges[v].len() > 1 || comps.component_of[self.successors(v).next().unwrap_or(v)] != c)
    }

    pub fn is_acyclic(&self) -> bool {
        let comps = self.strongly_connected_components();
        (0..comps.count()).all(|c| !self.is_nontrivial_component(&comps, c))
    }

    /// Some simple cycle through `v`, provided `v` lies on one, staying
    /// inside `v`'s strongly connected component.
    pub fn cycle_through(&self, v: usize, comps: &Components) -> Option<Cycle> {
        let c = comps.component_of[v];
        for &e in &self.out_edges[v] {
            let w = self.edges[e].range;
            if comps.component_of[w] != c {
                continue;
            }
            if w == v {
                return self.cycle_from_edges(vec![e]);
            }
            if let Some(mut rest) = self.path_to(w, |x| x == v, |x| comps.component_of[x] == c) {
                let mut edges = vec![e];
                edges.append(&mut rest);
                return self.cycle_from_edges(edges);
            }
        }
        None
    }

    /// First simple cycle found in vertex order, if any.
    pub fn find_cycle(&self) -> Option<Cycle> {
        let comps = self.strongly_connected_components();
        (0..self.vertex_count())
            .filter(|&v| self.is_nontrivial_component(&comps, comps.component_of[v]))
            .find_map(|v| self.cycle_through(v, &comps))
    }

    /// True iff some cycle vertex emits an edge other than the cycle's own
    /// next edge.
    pub fn cycle_has_exit(&self, c: &Cycle) -> bool {
        c.vertices
            .iter()
            .zip(&c.edges)
            .any(|(&v, &next)| self.out_edges[v].iter().any(|&e| e != next))
    }

    /// All simple cycles, each rooted at its minimum-index vertex. Parallel
    /// edges give distinct cycles.
    pub fn simple_cycles(&self, cap: usize) -> Result<Vec<Cycle>, GraphError> {
        let n = self.vertex_count();
        let mut out = Vec::new();
        for s in 0..n {
            // Restrict to vertices >= s that lie in s's component of that subgraph.
            let allowed: Vec<bool> = (0..n).map(|v| v >= s).collect();
            let sub = self.restricted_reach(s, &allowed);
            let mut on_path = vec![false; n];
            let mut edge_stack: Vec<usize> = Vec::new();
            let mut iter_stack: Vec<(usize, usize)> = vec![(s, 0)];
            on_path[s] = true;
            while let Some(&mut (v, ref mut pos)) = iter_stack.last_mut() {
                if *pos < self.out_edges[v].len() {
                    let e = self.out_edges[v][*pos];
                    *pos += 1;
                    let w = self.edges[e].range;
                    if w == s {
                        edge_stack.push(e);
                        let vertices = edge_stack.iter().map(|&x| self.edges[x].source).collect();
                        out.push(Cycle {
                            edges: edge_stack.clone(),
                            vertices,
                        });
                        edge_stack.pop();
                        if out.len() > cap {
                            return Err(GraphError::CycleCapExceeded(cap));
                        }
                    } else if sub[w] && !on_path[w] {
                        on_path[w] = true;
                        edge_stack.push(e);
                        iter_stack.push((w, 0));
                    }
                } else {
                    on_path[v] = false;
                    iter_stack.pop();
                    if !iter_stack.is_empty() {
                        edge_stack.pop();
                    }
                }
            }
        }
        Ok(out)
    }

    /// Vertices that are both reachable from `s` and reach `s`, moving only
    /// through `allowed`.
    fn restricted_reach(&self, s: usize, allowed: &[bool]) -> Vec<bool> {
        let n = self.vertex_count();
        let bfs = |forward: bool| {
            let mut seen = vec![false; n];
            seen[s] = true;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                let next: Vec<usize> = if forward {
                    self.successors(u).collect()
                } else {
                    self.predecessors(u).collect()
                };
                for w in next {
                    if allowed[w] && !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
            seen
        };
        let f = bfs(true);
        let b = bfs(false);
        f.iter().zip(&b).map(|(&x, &y)| x && y).collect()
    }

    /// For every vertex: does it connect (by a path, possibly empty) to a
    /// vertex on a cycle that has an exit?
    pub fn connects_to_exit_cycle(&self) -> Vec<bool> {
        let comps = self.strongly_connected_components();
        let good: Vec<usize> = (0..self.vertex_count())
            .filter(|&v| self.component_cycles_have_exit(&comps, comps.component_of[v]))
            .collect();
        self.reaching_set(good)
    }

    /// The subgraph on `keep` with the edges whose range lies in `keep`
    /// and whose source lies in `keep`. Returns the graph and the map from
    /// new vertex index to old.
    pub fn subgraph_on(&self, keep: &[bool]) -> (DirectedGraph, Vec<usize>) {
        let mut g = DirectedGraph::new();
        let mut map_new = vec![usize::MAX; self.vertex_count()];
        let mut back = Vec::new();
        for v in 0..self.vertex_count() {
            if keep[v] {
                map_new[v] = g.add_vertex(&self.vertex_ids[v]).expect("unique ids");
                back.push(v);
            }
        }
        for e in &self.edges {
            if keep[e.source] && keep[e.range] {
                g.add_edge_between(&e.id, map_new[e.source], map_new[e.range])
                    .expect("unique edge ids");
            }
        }
        (g, back)
    }

    /// Boolean transitive closure of the adjacency relation (reflexive).
    pub fn closure_matrix(&self) -> Vec<Vec<bool>> {
        (0..self.vertex_count()).map(|v| self.reachable_from(v)).collect()
    }
}
