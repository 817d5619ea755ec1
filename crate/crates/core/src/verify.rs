//! Independent re-checking of report certificates against a fresh parse of
//! the embedded input.
//!
//! Paths, cycles, traces, Farkas multipliers, predecessor-closed sets and
//! contraction witnesses are checked directly. Certificates that summarize
//! an exhaustive search or a transfer-matrix computation are checked by
//! recomputation, with the direct parts (cycles, sample traces) checked on
//! top.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::VerifyError;
use crate::exact_lp;
use crate::graph::DirectedGraph;
use crate::ideals::{self, DEFAULT_LATTICE_CAP};
use crate::periodic::stability::cycle_search_depth;
use crate::presentations::{parse, realize_truncation, AdjacencyMatrix, Format, Parsed, PeriodicPresentation, RealizedVertex};
use crate::report::{analyze, AnalysisReport, Check};
use crate::shiftspace::{verify_contraction, ContractionWitness, Cylinder};
use crate::traces;
use crate::verdict::{parse_rational, Certificate, CornerCert, CycleCert, QuotientWitness, Verdict, VerdictValue};
use crate::{Options, Rational};

type Outcome = Result<(), String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

#[derive(Clone, Debug, Default)]
pub struct VerifyOutcome {
    /// Per verdict key: `Ok` or the first failed check.
    pub results: BTreeMap<String, Result<(), String>>,
}

impl VerifyOutcome {
    pub fn all_ok(&self) -> bool {
        self.results.values().all(Result::is_ok)
    }
}

pub fn verify_report_json(text: &str) -> Result<VerifyOutcome, VerifyError> {
    let report: AnalysisReport = serde_json::from_str(text).map_err(|e| VerifyError::Json(e.to_string()))?;
    verify_report(&report)
}

pub fn verify_report(report: &AnalysisReport) -> Result<VerifyOutcome, VerifyError> {
    let format: Format = report
        .input
        .format
        .parse()
        .map_err(|_| VerifyError::Format(report.input.format.clone()))?;
    let input = parse(&report.input.canonical, format)?;
    let opts = Options {
        depth: report.options.depth,
        cycle_cap: report.options.cycle_cap,
        lattice_cap: DEFAULT_LATTICE_CAP,
    };
    let mut out = VerifyOutcome::default();
    for (key, v) in &report.verdicts {
        out.results.insert(key.clone(), verify_verdict(&input, key, v, &opts));
    }
    Ok(out)
}

/// Where cycles and paths live: a finite graph, or a realized periodic one.
#[derive(Clone, Copy)]
enum World<'a> {
    Graph(&'a DirectedGraph),
    Realized(&'a PeriodicPresentation),
}

impl World<'_> {
    /// `(edge label, target id)` for each edge out of `id`.
    fn successors(&self, id: &str) -> Option<Vec<(String, String)>> {
        match self {
            World::Graph(g) => {
                let v = g.vertex(id)?;
                Some(
                    g.out_edges(v)
                        .iter()
                        .map(|&e| (g.edge(e).id.clone(), g.vertex_id(g.edge(e).range).to_string()))
                        .collect(),
                )
            }
            World::Realized(p) => {
                let v = p.parse_realized_id(id)?;
                Some(
                    p.realized_successors(v)
                        .into_iter()
                        .map(|(l, w)| (l, p.realized_id(w)))
                        .collect(),
                )
            }
        }
    }
}

/// A simple closed path; returns whether some vertex on it has an exit.
fn check_cycle(w: World, c: &CycleCert) -> Result<bool, String> {
    let n = c.vertices.len();
    ensure(n > 0 && c.edges.len() == n, || "cycle needs as many edges as vertices".into())?;
    let distinct: BTreeSet<&String> = c.vertices.iter().collect();
    ensure(distinct.len() == n, || "cycle repeats a vertex".into())?;
    let mut exit = false;
    for i in 0..n {
        let succ = w
            .successors(&c.vertices[i])
            .ok_or_else(|| format!("unknown vertex {}", c.vertices[i]))?;
        let next = &c.vertices[(i + 1) % n];
        ensure(succ.iter().any(|(l, t)| *l == c.edges[i] && t == next), || {
            format!("no edge {} from {} to {next}", c.edges[i], c.vertices[i])
        })?;
        exit |= succ.len() > 1;
    }
    Ok(exit)
}

fn check_corners(w: World, corners: &[CornerCert]) -> Outcome {
    for c in corners {
        let exit = check_cycle(w, &c.cycle)?;
        ensure(!exit, || format!("cycle through {} has an exit", c.cycle.vertices[0]))?;
        ensure(c.period == c.cycle.vertices.len(), || "period differs from cycle length".into())?;
    }
    Ok(())
}

fn vertex_set(g: &DirectedGraph, ids: &[String]) -> Result<ideals::VertexSet, String> {
    ideals::ids_to_set(g, ids).map_err(|e| e.to_string())
}

/// `vertex`, outside the hereditary saturated set `removed`, reaches the
/// exit-free `cycle` but no cycle with an exit in the quotient.
fn check_obstruction(g: &DirectedGraph, removed: &[String], vertex: &str, cycle: &CycleCert) -> Outcome {
    let h = vertex_set(g, removed)?;
    ensure(ideals::is_hereditary_saturated(g, &h), || "removed set is not hereditary saturated".into())?;
    let v = g.vertex(vertex).ok_or_else(|| format!("unknown vertex {vertex}"))?;
    ensure(!h.contains(&v), || "obstructed vertex lies in the removed set".into())?;
    let (q, back) = ideals::quotient_graph(g, &h).map_err(|e| e.to_string())?;
    let exit = check_cycle(World::Graph(&q), cycle)?;
    ensure(!exit, || "obstruction cycle has an exit in the quotient".into())?;
    let qv = back.iter().position(|&x| x == v).expect("outside h");
    let target = q.vertex(&cycle.vertices[0]).expect("checked");
    ensure(q.reachable_from(qv)[target], || "vertex does not reach the obstruction cycle".into())?;
    ensure(!q.connects_to_exit_cycle()[qv], || "vertex reaches a cycle with an exit".into())
}

fn check_exit_cycles(g: &DirectedGraph, quotients: &[QuotientWitness]) -> Outcome {
    ensure(!g.has_sinks(), || "graph has sinks".into())?;
    let sets = ideals::enumerate_hereditary_saturated(g, DEFAULT_LATTICE_CAP).map_err(|e| e.to_string())?;
    let expected: BTreeSet<Vec<String>> = sets
        .iter()
        .filter(|h| h.len() < g.vertex_count())
        .map(|h| ideals::set_to_ids(g, h))
        .collect();
    let mut seen = BTreeSet::new();
    for w in quotients {
        let h = vertex_set(g, &w.removed)?;
        ensure(ideals::is_hereditary_saturated(g, &h), || "removed set is not hereditary saturated".into())?;
        let (q, _) = ideals::quotient_graph(g, &h).map_err(|e| e.to_string())?;
        let mut targets = Vec::new();
        for c in &w.exit_cycles {
            ensure(check_cycle(World::Graph(&q), c)?, || "listed cycle has no exit".into())?;
            targets.push(q.vertex(&c.vertices[0]).expect("checked"));
        }
        let reach = q.reaching_set(targets);
        ensure(reach.iter().all(|&b| b), || {
            format!("some vertex misses every listed cycle after removing {:?}", w.removed)
        })?;
        seen.insert(ideals::set_to_ids(g, &h));
    }
    ensure(seen == expected, || "listed quotients differ from the proper hereditary saturated sets".into())
}

fn rational(s: &str) -> Result<Rational, String> {
    parse_rational(s).ok_or_else(|| format!("not a rational: {s}"))
}

fn check_trace(g: &DirectedGraph, values: &BTreeMap<String, String>) -> Outcome {
    ensure(values.len() == g.vertex_count(), || "trace must give every vertex a value".into())?;
    let mut x = vec![Rational::from_integer(0.into()); g.vertex_count()];
    for (id, s) in values {
        let v = g.vertex(id).ok_or_else(|| format!("unknown vertex {id}"))?;
        x[v] = rational(s)?;
    }
    let (sys, _) = traces::trace_system(g);
    ensure(exact_lp::verify_witness(&sys, &x), || "values violate the trace equations".into())
}

fn check_farkas(g: &DirectedGraph, multipliers: &BTreeMap<String, String>) -> Outcome {
    let (sys, labels) = traces::trace_system(g);
    ensure(multipliers.len() == labels.len() + 1, || "one multiplier per equation expected".into())?;
    let mut y = Vec::with_capacity(labels.len() + 1);
    for &v in &labels {
        let s = multipliers
            .get(g.vertex_id(v))
            .ok_or_else(|| format!("missing multiplier for {}", g.vertex_id(v)))?;
        y.push(rational(s)?);
    }
    y.push(rational(multipliers.get("sum").ok_or("missing multiplier for the normalization")?)?);
    ensure(exact_lp::verify_farkas(&sys, &y), || "multipliers do not certify infeasibility".into())
}

fn check_lattice(g: &DirectedGraph, sets: &[Vec<String>]) -> Outcome {
    let mut listed = BTreeSet::new();
    for s in sets {
        let h = vertex_set(g, s)?;
        ensure(ideals::is_hereditary_saturated(g, &h), || format!("{s:?} is not hereditary saturated"))?;
        listed.insert(h);
    }
    let all = ideals::enumerate_hereditary_saturated(g, DEFAULT_LATTICE_CAP).map_err(|e| e.to_string())?;
    ensure(listed == all.into_iter().collect(), || "listed sets differ from the full lattice".into())
}

fn label_index(a: &AdjacencyMatrix, s: &str) -> Result<usize, String> {
    s.parse::<usize>()
        .ok()
        .filter(|&i| i >= 1 && i <= a.dim())
        .map(|i| i - 1)
        .ok_or_else(|| format!("not a matrix vertex: {s}"))
}

fn check_contractions(a: &AdjacencyMatrix, ws: &[crate::verdict::ContractionCert]) -> Outcome {
    let mut covered = BTreeSet::new();
    for w in ws {
        let v = label_index(a, &w.vertex)?;
        let word = w.word.iter().map(|s| label_index(a, s)).collect::<Result<Vec<_>, _>>()?;
        ensure(word.first() == Some(&v), || "witness cylinder must start at its vertex".into())?;
        let cyl = Cylinder::new(a, word).map_err(|e| e.to_string())?;
        let wit = ContractionWitness { w: cyl, n: w.n, m: w.m };
        ensure(verify_contraction(a, &wit), || format!("witness for {} does not contract", w.vertex))?;
        covered.insert(v);
    }
    ensure(covered.len() == a.dim(), || "some vertex has no witness".into())
}

/// The cycle is realized, sits inside `left_set`, and `left_set` is closed
/// under predecessors.
fn check_left_finite(p: &PeriodicPresentation, cycle: &CycleCert, left_set: &[String]) -> Result<DirectedGraph, String> {
    check_cycle(World::Realized(p), cycle)?;
    let set: BTreeSet<&str> = left_set.iter().map(String::as_str).collect();
    ensure(cycle.vertices.iter().all(|v| set.contains(v.as_str())), || "cycle leaves the left set".into())?;
    let mut g = DirectedGraph::new();
    for id in left_set {
        let v = p.parse_realized_id(id).ok_or_else(|| format!("unknown vertex {id}"))?;
        ensure(p.realized_id(v) == *id, || format!("non-canonical id {id}"))?;
        for u in p.realized_predecessors(v) {
            ensure(set.contains(p.realized_id(u).as_str()), || format!("predecessor of {id} outside the set"))?;
        }
        g.add_vertex(id).map_err(|e| e.to_string())?;
    }
    for id in left_set {
        for (l, t) in World::Realized(p).successors(id).expect("checked") {
            if set.contains(t.as_str()) {
                g.add_edge(&l, id, &t).map_err(|e| e.to_string())?;
            }
        }
    }
    Ok(g)
}

/// No realized cycle: a truncation tall enough to hold one of each is
/// acyclic.
fn check_no_realized_cycle(p: &PeriodicPresentation, depth: u32) -> Outcome {
    ensure(depth >= cycle_search_depth(p), || "search depth too small".into())?;
    ensure(realize_truncation(p, depth).graph.is_acyclic(), || "truncation has a cycle".into())
}

/// The connectivity claim behind a strongly connected certificate, redone
/// on a truncation tall enough for every connecting path.
fn check_strongly_connected(p: &PeriodicPresentation, h0: u32, exit_cycle: &CycleCert) -> Outcome {
    ensure(h0 >= 2 && p.block_len() > 0, || "bad anchor level".into())?;
    ensure(check_cycle(World::Realized(p), exit_cycle)?, || "cycle has no exit".into())?;
    let n = (p.stem_len() + p.block_len()) as u32;
    let t = realize_truncation(p, h0 + 2 + n * n);
    let at = |b: usize, k: u32| t.index_of(RealizedVertex::Block { vertex: b, copy: k }, p).expect("in range");
    let anchor = at(0, h0);
    let high: Vec<bool> = t.origin.iter().map(|v| v.level() >= 2).collect();
    let (sub, back) = t.graph.subgraph_on(&high);
    let sa = back.iter().position(|&x| x == anchor).expect("kept");
    let (f, b) = (sub.reachable_from(sa), sub.reaching_set([sa]));
    for k in [h0, h0 + 1] {
        for v in 0..p.block_len() {
            let i = back.iter().position(|&x| x == at(v, k)).expect("kept");
            ensure(f[i] && b[i], || format!("{} is not linked to the anchor above copy 1", t.graph.vertex_id(at(v, k))))?;
        }
    }
    let (f, b) = (t.graph.reachable_from(anchor), t.graph.reaching_set([anchor]));
    for (i, v) in t.origin.iter().enumerate() {
        if v.level() < h0 {
            ensure(f[i] && b[i], || format!("{} is not linked to the anchor", t.graph.vertex_id(i)))?;
        }
    }
    Ok(())
}

/// Trace equations on the sample wherever a vertex and all its successors
/// are sampled.
fn check_sample(p: &PeriodicPresentation, sample: &BTreeMap<String, String>) -> Outcome {
    let mut vals = BTreeMap::new();
    for (id, s) in sample {
        vals.insert(id.as_str(), rational(s)?);
    }
    let mut equations = 0;
    for (id, x) in &vals {
        let succ = World::Realized(p).successors(id).ok_or_else(|| format!("unknown vertex {id}"))?;
        if succ.is_empty() || !succ.iter().all(|(_, t)| vals.contains_key(t.as_str())) {
            continue;
        }
        let sum: Rational = succ.iter().map(|(_, t)| vals[t.as_str()].clone()).sum();
        ensure(&sum == x, || format!("trace equation fails at {id}"))?;
        equations += 1;
    }
    ensure(equations > 0, || "sample checks no equation".into())?;
    ensure(vals.values().all(|x| *x > Rational::from_integer(0.into())), || "sample must be positive".into())
}

fn check_for_key(key: &str) -> Option<Check> {
    Check::ALL.into_iter().find(|c| c.keys().contains(&key))
}

fn recompute(input: &Parsed, key: &str, v: &Verdict, opts: &Options) -> Outcome {
    let c = check_for_key(key).ok_or_else(|| format!("unknown verdict key {key}"))?;
    let (r, _) = analyze(input, &[c], opts, Format::Edgelist, None);
    ensure(r.verdicts.get(key) == Some(v), || "recomputation gives a different verdict".into())
}

fn expect(v: &Verdict, value: VerdictValue) -> Outcome {
    ensure(v.value == value, || format!("certificate supports {}, report says {}", value.as_str(), v.value.as_str()))
}

/// Checks one verdict against the parsed input.
pub fn verify_verdict(input: &Parsed, key: &str, v: &Verdict, opts: &Options) -> Outcome {
    use VerdictValue::{No, Unknown, Yes};
    let finite = input.finite_graph();
    let graph = || finite.as_ref().ok_or_else(|| "certificate needs a finite graph".to_string());
    let periodic = || match input {
        Parsed::Periodic(p) => Ok(p),
        _ => Err("certificate needs a periodic input".to_string()),
    };
    let world = || match input {
        Parsed::Periodic(p) => World::Realized(p),
        _ => World::Graph(finite.as_ref().expect("finite")),
    };
    match &v.certificate {
        Certificate::Refusal { .. } => expect(v, Unknown),
        Certificate::TopologicalOrder { order } => {
            expect(v, Yes)?;
            let g = graph()?;
            let pos: BTreeMap<&str, usize> = order.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
            ensure(pos.len() == g.vertex_count() && order.len() == pos.len(), || "order is not a permutation".into())?;
            for e in g.edges() {
                let (a, b) = (pos.get(g.vertex_id(e.source)), pos.get(g.vertex_id(e.range)));
                ensure(matches!((a, b), (Some(a), Some(b)) if a < b), || format!("edge {} goes backward", e.id))?;
            }
            Ok(())
        }
        Certificate::Cycle { cycle, has_exit } => {
            let exit = check_cycle(world(), cycle)?;
            ensure(has_exit.map_or(true, |h| h == exit), || "exit flag is wrong".into())?;
            expect(v, if key == "af" { No } else { Yes })
        }
        Certificate::TorusCorners { corners } => {
            check_corners(world(), corners)?;
            match key {
                "torus_corners" if corners.is_empty() => {
                    expect(v, No)?;
                    recompute(input, key, v, opts)
                }
                "torus_corners" => expect(v, Yes),
                _ => {
                    ensure(!corners.is_empty(), || "no corner given".into())?;
                    expect(v, No)
                }
            }
        }
        Certificate::ExitCycles { quotients } => {
            expect(v, Yes)?;
            check_exit_cycles(graph()?, quotients)
        }
        Certificate::QuotientObstruction { removed, vertex, cycle } => {
            expect(v, No)?;
            check_obstruction(graph()?, removed, vertex, cycle)
        }
        Certificate::Unital { vertex_count } => {
            let g = graph()?;
            ensure(*vertex_count == g.vertex_count(), || "vertex count differs".into())?;
            match key {
                "unital_quotient" => expect(v, if *vertex_count > 0 { Yes } else { No }),
                _ => {
                    ensure(*vertex_count > 0, || "the zero algebra is stable".into())?;
                    expect(v, No)
                }
            }
        }
        Certificate::Trace { values } => {
            let g = graph()?;
            check_trace(g, values)?;
            if key == "stable" {
                ensure(g.is_acyclic(), || "trace decides stability only for acyclic graphs".into())?;
                expect(v, No)
            } else {
                expect(v, Yes)
            }
        }
        Certificate::Farkas { multipliers } => {
            let g = graph()?;
            check_farkas(g, multipliers)?;
            if key == "stable" {
                ensure(g.is_acyclic(), || "no-trace decides stability only for acyclic graphs".into())?;
                expect(v, Yes)
            } else {
                expect(v, No)
            }
        }
        Certificate::Lattice { sets } => {
            expect(v, Yes)?;
            check_lattice(graph()?, sets)
        }
        Certificate::Contractions { witnesses } => {
            expect(v, Yes)?;
            match input {
                Parsed::Matrix(a) => check_contractions(a, witnesses),
                _ => Err("contraction witnesses need a matrix input".into()),
            }
        }
        Certificate::LeftFiniteCycle { cycle, left_set } => {
            check_left_finite(periodic()?, cycle, left_set)?;
            expect(v, if key == "unital_quotient" { Yes } else { No })
        }
        Certificate::Exhaustive { search, depth } => {
            let p = periodic()?;
            if search == "realized cycles" {
                check_no_realized_cycle(p, *depth)?;
                expect(v, if key == "af" { Yes } else { No })
            } else {
                recompute(input, key, v, opts)
            }
        }
        Certificate::LeftInfinite { .. } => {
            periodic()?;
            expect(v, Yes)?;
            recompute(input, key, v, opts)
        }
        Certificate::Perron { sample, .. } => {
            let p = periodic()?;
            if let Some(s) = sample {
                check_sample(p, s)?;
            }
            recompute(input, key, v, opts)
        }
        Certificate::StronglyConnected { depth, exit_cycle } => {
            expect(v, Yes)?;
            check_strongly_connected(periodic()?, *depth, exit_cycle)
        }
        Certificate::Composite { parts } => {
            expect(v, No)?;
            let p = periodic()?;
            let (Some(Certificate::LeftFiniteCycle { cycle, left_set }), Some(fq)) =
                (parts.get("left_finite_cycle"), parts.get("finite_quotient"))
            else {
                return Err("composite needs a left-finite cycle and a finite quotient".into());
            };
            let g = check_left_finite(p, cycle, left_set)?;
            match fq {
                Certificate::QuotientObstruction { removed, vertex, cycle } => check_obstruction(&g, removed, vertex, cycle),
                _ => Err("finite quotient part must be an obstruction".into()),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;


    fn report(text: &str, format: Format) -> AnalysisReport {
        let p = parse(text, format).unwrap();
        analyze(&p, &Check::ALL, &Options::default(), format, None).0
    }

    #[test]
    fn o2_verifies() {
        let r = report("vertex v\nedge e v v\nedge f v v\n", Format::Edgelist);
        let out = verify_report_json(&r.to_json()).unwrap();
        assert!(out.all_ok(), "{:?}", out.results);
    }

    #[test]
    fn tampered_value_rejected() {
        let mut r = report("vertex v\nedge e v v\nedge f v v\n", Format::Edgelist);
        r.verdicts.get_mut("af").unwrap().value = VerdictValue::Yes;
        assert!(verify_report(&r).unwrap().results["af"].is_err());
    }

    #[test]
    fn tampered_trace_rejected() {
        let mut r = report("vertex a\nvertex b\nedge e a b\n", Format::Edgelist);
        let v = r.verdicts.get_mut("graph_trace").unwrap();
        let Certificate::Trace { values } = &mut v.certificate else { panic!() };
        values.insert("a".into(), "1/3".into());
        assert!(verify_report(&r).unwrap().results["graph_trace"].is_err());
    }

    #[test]
    fn periodic_reports_verify() {
        for text in [
            "[stem]\nvertex s\n[block]\nvertex b\n[cross]\nedge up b b +1\nedge down b b -1\n[stem-block]\nedge in s b to-block\nedge out s b to-stem\n",
            "[block]\nvertex b\n[cross]\nedge l b b +1\nedge r b b +1\n",
            "[block]\nvertex b\n[cross]\nedge u b b +1\n",
            "[stem]\nvertex s\nedge l s s\n[block]\nvertex b\n[cross]\nedge u b b +1\n[stem-block]\nedge in s b to-block\n",
            "[block]\nvertex b\nedge l b b\n",
        ] {
            let r = report(text, Format::Periodic);
            let out = verify_report(&r).unwrap();
            assert!(out.all_ok(), "{text}\n{:?}", out.results);
        }
    }

    #[test]
    fn matrix_report_verifies() {
        let r = report("matrix 2\n1 1\n1 0\n", Format::Matrix);
        let out = verify_report(&r).unwrap();
        assert!(out.all_ok(), "{:?}", out.results);
        assert!(r.verdicts["contraction_witnesses"].is_yes());
    }

    #[test]
    fn garbage_rejected() {
        assert!(matches!(verify_report_json("{"), Err(VerifyError::Json(_))));
    }
}
