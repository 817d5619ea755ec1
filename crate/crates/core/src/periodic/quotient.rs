//! The shift quotient: stem and block vertices with each edge weighted by
//! the copy displacement it causes.

use num_rational::Ratio;

use crate::graph::{Components, Cycle, DirectedGraph};
use crate::presentations::{Direction, PeriodicPresentation};

#[derive(Clone, Debug)]
pub struct ShiftQuotient {
    /// Stem vertices first (indices `0..stem_len`), then block vertices.
    pub graph: DirectedGraph,
    pub weights: Vec<i64>,
    pub stem_len: usize,
    /// Which quotient edges come from block or cross edges.
    pub block_edge: Vec<bool>,
}

pub fn shift_quotient(p: &PeriodicPresentation) -> ShiftQuotient {
    let mut g = DirectedGraph::new();
    let s = p.stem_len();
    for v in p.stem.vertex_ids() {
        g.add_vertex(v).expect("unique");
    }
    for v in p.block.vertex_ids() {
        g.add_vertex(v).expect("stem and block ids are disjoint");
    }
    let mut weights = Vec::new();
    let mut block_edge = Vec::new();
    let mut add = |g: &mut DirectedGraph, id: &str, a: usize, b: usize, w: i64, blk: bool| {
        g.add_edge_between(id, a, b).expect("edge ids are unique");
        weights.push(w);
        block_edge.push(blk);
    };
    for e in p.stem.edges() {
        add(&mut g, &e.id, e.source, e.range, 0, false);
    }
    for e in p.block.edges() {
        add(&mut g, &e.id, s + e.source, s + e.range, 0, true);
    }
    for c in &p.cross {
        add(&mut g, &c.id, s + c.source, s + c.range, c.shift.weight(), true);
    }
    for sb in &p.stem_block {
        match sb.direction {
            Direction::ToBlock => add(&mut g, &sb.id, sb.stem, s + sb.block, 0, false),
            Direction::ToStem => add(&mut g, &sb.id, s + sb.block, sb.stem, 0, false),
        }
    }
    ShiftQuotient {
        graph: g,
        weights,
        stem_len: s,
        block_edge,
    }
}

impl ShiftQuotient {
    pub fn len(&self) -> usize {
        self.graph.vertex_count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_stem(&self, v: usize) -> bool {
        v < self.stem_len
    }

    pub fn cycle_weight(&self, c: &Cycle) -> i64 {
        c.edges.iter().map(|&e| self.weights[e]).sum()
    }

    /// The block part: block vertices with block and cross edges. Vertex
    /// `i` of the result is quotient vertex `stem_len + i`; edge `k` maps
    /// back through the returned table.
    pub fn block_only(&self) -> (ShiftQuotient, Vec<usize>) {
        let keep: Vec<bool> = (0..self.len()).map(|v| !self.is_stem(v)).collect();
        let (g, _) = self.graph.subgraph_on(&keep);
        let edge_back: Vec<usize> = g
            .edges()
            .iter()
            .map(|e| self.graph.edge_by_id(&e.id).expect("same ids"))
            .collect();
        let weights = edge_back.iter().map(|&e| self.weights[e]).collect();
        (
            ShiftQuotient {
                graph: g,
                weights,
                stem_len: 0,
                block_edge: vec![true; edge_back.len()],
            },
            edge_back,
        )
    }
}

pub type Mean = Ratio<i64>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentMeans {
    pub vertices: Vec<usize>,
    pub min_mean: Mean,
    pub max_mean: Mean,
    pub min_cycle: Cycle,
    pub max_cycle: Cycle,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeanCycleReport {
    /// Nontrivial strongly connected components only, in component order.
    pub components: Vec<ComponentMeans>,
}

/// Karp's minimum mean cycle on one strongly connected component, with a
/// witness cycle read off the tight edges of the reweighted graph.
fn karp_min(g: &DirectedGraph, w: &[i64], comps: &Components, c: usize) -> (Mean, Cycle) {
    let members = &comps.members[c];
    let k = members.len();
    let local: std::collections::HashMap<usize, usize> =
        members.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let inner: Vec<(usize, usize, i64, usize)> = members
        .iter()
        .flat_map(|&v| g.out_edges(v).iter().map(move |&e| (v, e)))
        .filter(|&(_, e)| comps.component_of[g.edge(e).range] == c)
        .map(|(v, e)| (local[&v], local[&g.edge(e).range], w[e], e))
        .collect();

    // d[j][v]: minimum weight of a walk with exactly j edges from vertex 0 to v.
    let mut d = vec![vec![None::<i64>; k]; k + 1];
    d[0][0] = Some(0);
    for j in 1..=k {
        for &(a, b, wt, _) in &inner {
            if let Some(x) = d[j - 1][a] {
                let y = x + wt;
                if d[j][b].is_none_or(|cur| y < cur) {
                    d[j][b] = Some(y);
                }
            }
        }
    }
    let mut best: Option<Mean> = None;
    for v in 0..k {
        let Some(dn) = d[k][v] else { continue };
        let mut worst: Option<Mean> = None;
        for j in 0..k {
            if let Some(dj) = d[j][v] {
                let m = Mean::new(dn - dj, (k - j) as i64);
                if worst.is_none_or(|x| m > x) {
                    worst = Some(m);
                }
            }
        }
        if let Some(m) = worst {
            if best.is_none_or(|b| m < b) {
                best = Some(m);
            }
        }
    }
    let mean = best.expect("nontrivial component has a cycle");

    // With w' = den*w - num every cycle has w' >= 0 and optimal ones 0.
    let (num, den) = (*mean.numer(), *mean.denom());
    let mut pot = vec![0i64; k];
    for _ in 0..k {
        let mut changed = false;
        for &(a, b, wt, _) in &inner {
            let y = pot[a] + den * wt - num;
            if y < pot[b] {
                pot[b] = y;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let tight: Vec<&(usize, usize, i64, usize)> = inner
        .iter()
        .filter(|&&(a, b, wt, _)| pot[a] + den * wt - num == pot[b])
        .collect();
    // A cycle in the tight subgraph: walk until a vertex repeats.
    let mut next: Vec<Option<(usize, usize)>> = vec![None; k];
    // Restrict to vertices lying on tight cycles by pruning tight sources
    // and sinks until stable.
    let mut alive = vec![true; k];
    loop {
        let mut outd = vec![0usize; k];
        let mut ind = vec![0usize; k];
        for &&(a, b, _, _) in &tight {
            if alive[a] && alive[b] {
                outd[a] += 1;
                ind[b] += 1;
            }
        }
        let mut changed = false;
        for v in 0..k {
            if alive[v] && (outd[v] == 0 || ind[v] == 0) {
                alive[v] = false;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    for &&(a, b, _, e) in &tight {
        if alive[a] && alive[b] && next[a].is_none() {
            next[a] = Some((b, e));
        }
    }
    let start = (0..k).find(|&v| alive[v]).expect("tight subgraph contains an optimal cycle");
    let mut seen = vec![usize::MAX; k];
    let mut order = Vec::new();
    let mut v = start;
    while seen[v] == usize::MAX {
        seen[v] = order.len();
        let (nv, e) = next[v].expect("alive vertices keep a tight out-edge");
        order.push(e);
        v = nv;
    }
    let edges = order[seen[v]..].to_vec();
    let cycle = g.cycle_from_edges(edges).expect("tight walk closes");
    (mean, cycle)
}

pub fn mean_cycles(g: &DirectedGraph, weights: &[i64]) -> MeanCycleReport {
    let comps = g.strongly_connected_components();
    let neg: Vec<i64> = weights.iter().map(|w| -w).collect();
    let components = (0..comps.count())
        .filter(|&c| g.is_nontrivial_component(&comps, c))
        .map(|c| {
            let (min_mean, min_cycle) = karp_min(g, weights, &comps, c);
            let (neg_max, max_cycle) = karp_min(g, &neg, &comps, c);
            ComponentMeans {
                vertices: comps.members[c].clone(),
                min_mean,
                max_mean: -neg_max,
                min_cycle,
                max_cycle,
            }
        })
        .collect();
    MeanCycleReport { components }
}

impl ShiftQuotient {
    pub fn mean_cycles(&self) -> MeanCycleReport {
        mean_cycles(&self.graph, &self.weights)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentations::parse_periodic;

    const EXAMPLE_II: &str = "[stem]\nvertex s\n[block]\nvertex b\n[cross]\nedge up b b +1\nedge down b b -1\n[stem-block]\nedge in s b to-block\nedge out s b to-stem\n";

    #[test]
    fn example_ii_quotient() {
        let p = parse_periodic(EXAMPLE_II).unwrap();
        let q = shift_quotient(&p);
        assert_eq!(q.len(), 2);
        let mut w = q.weights.clone();
        w.sort();
        assert_eq!(w, vec![-1, 0, 0, 1]);
        let r = q.mean_cycles();
        assert_eq!(r.components.len(), 1);
        assert_eq!(r.components[0].min_mean, Mean::from_integer(-1));
        assert_eq!(r.components[0].max_mean, Mean::from_integer(1));
        assert_eq!(q.cycle_weight(&r.components[0].min_cycle), -1);
    }

    #[test]
    fn zero_loop() {
        let p = parse_periodic("[block]\nvertex b\nedge l b b\n").unwrap();
        let r = shift_quotient(&p).mean_cycles();
        assert_eq!(r.components[0].min_mean, Mean::from_integer(0));
        assert_eq!(r.components[0].max_mean, Mean::from_integer(0));
    }

    #[test]
    fn mixed_lengths() {
        // a->b (+1), b->a (+1), a->a (-1): means 1 and -1.
        let p = parse_periodic(
            "[block]\nvertex a\nvertex b\n[cross]\nedge x a b +1\nedge y b a +1\nedge z a a -1\n",
        )
        .unwrap();
        let q = shift_quotient(&p);
        let r = q.mean_cycles();
        let c = &r.components[0];
        assert_eq!(c.min_mean, Mean::from_integer(-1));
        assert_eq!(c.max_mean, Mean::from_integer(1));
        assert_eq!(Mean::new(q.cycle_weight(&c.max_cycle), c.max_cycle.len() as i64), c.max_mean);
    }
}
