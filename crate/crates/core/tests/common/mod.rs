//! Random inputs and brute-force oracles shared by the integration tests.
//! Oracles work on plain adjacency data and never call the library's own
//! algorithms.
#![allow(dead_code)]

use std::collections::BTreeMap;

use ckdecide::presentations::{AdjacencyMatrix, PeriodicPresentation};
use ckdecide::DirectedGraph;
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// Graph on `v1..vn`; each ordered pair gets 0, 1 or 2 edges.
pub fn random_graph(r: &mut StdRng, n: usize, density: f64) -> DirectedGraph {
    let mut g = DirectedGraph::new();
    for i in 0..n {
        g.add_vertex(&format!("v{}", i + 1)).unwrap();
    }
    let mut k = 0;
    for a in 0..n {
        for b in 0..n {
            let mut m = 0;
            while m < 2 && r.random_bool(density) {
                g.add_edge_between(&format!("e{k}"), a, b).unwrap();
                k += 1;
                m += 1;
            }
        }
    }
    g
}

/// Random graph in which every vertex emits an edge.
pub fn random_no_sink_graph(r: &mut StdRng, n: usize, density: f64) -> DirectedGraph {
    let mut g = random_graph(r, n, density);
    let mut k = g.edge_count();
    for v in 0..n {
        if g.out_edges(v).is_empty() {
            let w = r.random_range(0..n);
            g.add_edge_between(&format!("x{k}"), v, w).unwrap();
            k += 1;
        }
    }
    g
}

/// Edges only go from lower to higher index, possibly doubled.
pub fn random_acyclic_graph(r: &mut StdRng, n: usize, density: f64) -> DirectedGraph {
    let mut g = DirectedGraph::new();
    for i in 0..n {
        g.add_vertex(&format!("v{}", i + 1)).unwrap();
    }
    let mut k = 0;
    for a in 0..n {
        for b in a + 1..n {
            for _ in 0..2 {
                if r.random_bool(density) {
                    g.add_edge_between(&format!("e{k}"), a, b).unwrap();
                    k += 1;
                }
            }
        }
    }
    g
}

pub fn random_matrix(r: &mut StdRng, n: usize, density: f64, no_zero_rows: bool) -> AdjacencyMatrix {
    loop {
        let rows: Vec<Vec<u8>> = (0..n)
            .map(|_| (0..n).map(|_| u8::from(r.random_bool(density))).collect())
            .collect();
        if !no_zero_rows || rows.iter().all(|row| row.contains(&1)) {
            return AdjacencyMatrix::from_rows(rows).unwrap();
        }
    }
}

/// `(source, range)` pairs, one per edge.
pub fn arcs(g: &DirectedGraph) -> Vec<(usize, usize)> {
    g.edges().iter().map(|e| (e.source, e.range)).collect()
}

/// Warshall closure, reflexive.
pub fn closure(n: usize, arcs: &[(usize, usize)]) -> Vec<Vec<bool>> {
    let mut m = vec![vec![false; n]; n];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = true;
    }
    for &(a, b) in arcs {
        m[a][b] = true;
    }
    for k in 0..n {
        for i in 0..n {
            if m[i][k] {
                for j in 0..n {
                    if m[k][j] {
                        m[i][j] = true;
                    }
                }
            }
        }
    }
    m
}

/// All subsets closed under edges and containing every non-sink whose
/// edges all land inside, straight from the definitions.
pub fn brute_hereditary_saturated(n: usize, arcs: &[(usize, usize)]) -> Vec<u32> {
    let mut out = Vec::new();
    for mask in 0u32..(1 << n) {
        let inside = |v: usize| mask & (1 << v) != 0;
        let hereditary = arcs.iter().all(|&(a, b)| !inside(a) || inside(b));
        let saturated = (0..n).all(|v| {
            let outs: Vec<usize> = arcs.iter().filter(|&&(a, _)| a == v).map(|&(_, b)| b).collect();
            inside(v) || outs.is_empty() || outs.iter().any(|&b| !inside(b))
        });
        if hereditary && saturated {
            out.push(mask);
        }
    }
    out
}

/// Number of paths from each vertex to each sink, by recursion over an
/// acyclic graph.
pub fn brute_path_counts(n: usize, arcs: &[(usize, usize)]) -> Vec<BTreeMap<usize, BigInt>> {
    fn go(v: usize, arcs: &[(usize, usize)], memo: &mut Vec<Option<BTreeMap<usize, BigInt>>>) -> BTreeMap<usize, BigInt> {
        if let Some(m) = &memo[v] {
            return m.clone();
        }
        let outs: Vec<usize> = arcs.iter().filter(|&&(a, _)| a == v).map(|&(_, b)| b).collect();
        let mut m = BTreeMap::new();
        if outs.is_empty() {
            m.insert(v, BigInt::from(1));
        }
        for w in outs {
            for (s, c) in go(w, arcs, memo) {
                *m.entry(s).or_insert_with(|| BigInt::from(0)) += c;
            }
        }
        memo[v] = Some(m.clone());
        m
    }
    let mut memo = vec![None; n];
    (0..n).map(|v| go(v, arcs, &mut memo)).collect()
}

/// Every simple cycle as a list of edge indices, found by depth-first
/// search from each start vertex through higher-numbered vertices only.
pub fn brute_simple_cycles(n: usize, arcs: &[(usize, usize)]) -> Vec<Vec<usize>> {
    fn dfs(
        start: usize,
        v: usize,
        arcs: &[(usize, usize)],
        on_path: &mut Vec<bool>,
        path: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        for (e, &(a, b)) in arcs.iter().enumerate() {
            if a != v || b < start {
                continue;
            }
            if b == start {
                let mut c = path.clone();
                c.push(e);
                out.push(c);
            } else if !on_path[b] {
                on_path[b] = true;
                path.push(e);
                dfs(start, b, arcs, on_path, path, out);
                path.pop();
                on_path[b] = false;
            }
        }
    }
    let mut out = Vec::new();
    for s in 0..n {
        let mut on_path = vec![false; n];
        on_path[s] = true;
        dfs(s, s, arcs, &mut on_path, &mut Vec::new(), &mut out);
    }
    out
}

/// Closed walks of each length `1..=max` at each vertex, by counting.
pub fn closed_walk_counts(n: usize, arcs: &[(usize, usize)], max: usize) -> Vec<Vec<u64>> {
    let mut out = vec![vec![0u64; max + 1]; n];
    for (x, row) in out.iter_mut().enumerate() {
        let mut cur = vec![0u64; n];
        cur[x] = 1;
        for slot in row.iter_mut().skip(1) {
            let mut next = vec![0u64; n];
            for &(a, b) in arcs {
                next[b] = next[b].saturating_add(cur[a]);
            }
            cur = next;
            *slot = cur[x];
        }
    }
    out
}

pub fn ratio(a: i64, b: i64) -> BigRational {
    BigRational::new(a.into(), b.into())
}

/// Random periodic presentation with small stem and block.
pub fn random_presentation(r: &mut StdRng, stem: usize, block: usize) -> PeriodicPresentation {
    let mut text = String::new();
    if stem > 0 {
        text.push_str("[stem]\n");
        for i in 0..stem {
            text.push_str(&format!("vertex s{i}\n"));
        }
        for a in 0..stem {
            for b in 0..stem {
                if r.random_bool(0.2) {
                    text.push_str(&format!("edge st{a}_{b} s{a} s{b}\n"));
                }
            }
        }
    }
    text.push_str("[block]\n");
    for i in 0..block {
        text.push_str(&format!("vertex b{i}\n"));
    }
    for a in 0..block {
        for b in 0..block {
            if r.random_bool(0.25) {
                text.push_str(&format!("edge bl{a}_{b} b{a} b{b}\n"));
            }
        }
    }
    text.push_str("[cross]\n");
    for a in 0..block {
        for b in 0..block {
            for (tag, sh) in [("u", "+1"), ("d", "-1")] {
                if r.random_bool(0.3) {
                    text.push_str(&format!("edge {tag}{a}_{b} b{a} b{b} {sh}\n"));
                }
            }
        }
    }
    if stem > 0 {
        text.push_str("[stem-block]\n");
        for s in 0..stem {
            for b in 0..block {
                if r.random_bool(0.3) {
                    text.push_str(&format!("edge in{s}_{b} s{s} b{b} to-block\n"));
                }
                if r.random_bool(0.2) {
                    text.push_str(&format!("edge out{s}_{b} s{s} b{b} to-stem\n"));
                }
            }
        }
    }
    ckdecide::presentations::parse_periodic(&text).unwrap()
}

/// Like [`random_presentation`], redrawn until no realized vertex is a sink.
pub fn random_sink_free_presentation(r: &mut StdRng, stem: usize, block: usize) -> PeriodicPresentation {
    loop {
        let p = random_presentation(r, stem, block);
        if !p.has_realized_sinks() {
            return p;
        }
    }
}
