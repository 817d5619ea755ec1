//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Runs as a plain binary (`harness = false`).

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use ckdecide::graph::DEFAULT_CYCLE_CAP;
use ckdecide::ideals::{self, VertexSet, DEFAULT_LATTICE_CAP};
use ckdecide::periodic::{self, ideals as pideals, Analysis, BlockClass, S0};
use ckdecide::presentations::{parse, parse_periodic, realize_truncation, Format, Parsed};
use ckdecide::shiftspace::{self, CylinderRelation};
use ckdecide::verdict::parse_rational;
use ckdecide::{classify, traces, Certificate, DirectedGraph, Rational, VerdictValue};
use common::*;
use num_traits::{One, Zero};

type Outcome = Result<String, String>;

fn corpus() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

fn corpus_files() -> Vec<PathBuf> {
    let mut v: Vec<PathBuf> = fs::read_dir(corpus()).unwrap().map(|e| e.unwrap().path()).collect();
    v.sort();
    v
}

fn load(name: &str) -> Parsed {
    let path = corpus().join(name);
    let format = Format::sniff(&path).unwrap();
    parse(&fs::read_to_string(&path).unwrap(), format).unwrap()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed < limit, || format!("took {elapsed:?}, limit {limit:?}"))
}

fn o2() -> Outcome {
    let start = Instant::now();
    let g = load("o2.ckg").finite_graph().unwrap();
    let pi = classify::is_purely_infinite(&g, DEFAULT_CYCLE_CAP);
    let af = classify::is_af(&g);
    let st = traces::is_stable_finite(&g);
    let (tr, _) = traces::bounded_graph_trace(&g);
    within(start.elapsed(), Duration::from_secs(1))?;
    ensure(pi.is_yes(), || format!("pi {:?}", pi.value))?;
    ensure(af.is_no(), || format!("af {:?}", af.value))?;
    ensure(st.is_no() && matches!(st.certificate, Certificate::Unital { .. }), || format!("stable {st:?}"))?;
    ensure(tr.is_no(), || format!("trace {:?}", tr.value))?;
    Ok("pi yes, af no, stable no (unital), no bounded trace".into())
}

fn chain() -> Outcome {
    let start = Instant::now();
    let Parsed::Periodic(p) = load("chain.period") else { unreachable!() };
    let pi = periodic::periodic_is_purely_infinite(&p, None, DEFAULT_CYCLE_CAP);
    let st = periodic::periodic_is_stable(&p);
    let a = Analysis::new(&p);
    let s0 = periodic::s0(&a);
    within(start.elapsed(), Duration::from_secs(1))?;
    ensure(pi.is_yes(), || format!("pi {:?}", pi.value))?;
    ensure(st.is_yes(), || format!("stable {:?}", st.value))?;
    let Certificate::LeftInfinite { finite_region, .. } = &st.certificate else {
        return Err(format!("certificate {:?}", st.certificate));
    };
    ensure(finite_region.is_empty(), || format!("finite region {finite_region:?}"))?;
    ensure(matches!(s0, S0::Empty), || "S^0 not empty".into())?;
    ensure(a.block_classes().iter().all(|c| *c == BlockClass::LeftInfinite), || "block not left-infinite".into())?;
    ensure(a.stem_left_infinite().iter().all(|&x| x), || "stem not left-infinite".into())?;
    Ok("pi yes, stable yes, S^0 empty, all vertices left-infinite".into())
}

fn single_loop() -> Outcome {
    let g = load("single_loop.ckg").finite_graph().unwrap();
    let corners = classify::torus_corners(&g);
    ensure(corners.len() == 1 && corners[0].period == 1, || format!("corners {corners:?}"))?;
    ensure(classify::is_af(&g).is_no(), || "af not no".into())?;
    let pi = classify::is_purely_infinite(&g, DEFAULT_CYCLE_CAP);
    ensure(pi.is_no(), || format!("pi {:?}", pi.value))?;
    let exit_free = match &pi.certificate {
        Certificate::QuotientObstruction { removed, cycle, .. } => removed.is_empty() && cycle.vertices == ["v"],
        Certificate::TorusCorners { corners } => !corners.is_empty(),
        _ => false,
    };
    ensure(exit_free, || format!("certificate {:?}", pi.certificate))?;
    Ok("one corner of period 1, af no, pi no via exit-free cycle".into())
}

fn set_of(mask: u32, n: usize) -> VertexSet {
    (0..n).filter(|&v| mask & (1 << v) != 0).collect()
}

fn lattice() -> Outcome {
    let start = Instant::now();
    let mut r = rng(4);
    for i in 0..200 {
        let n = rand::Rng::random_range(&mut r, 1..=12);
        let g = random_graph(&mut r, n, (1.5 / n as f64).min(0.5));
        let ours: BTreeSet<VertexSet> = ideals::enumerate_hereditary_saturated(&g, DEFAULT_LATTICE_CAP)
            .map_err(|e| format!("graph {i}: {e}"))?
            .into_iter()
            .collect();
        let brute: BTreeSet<VertexSet> = brute_hereditary_saturated(n, &arcs(&g)).into_iter().map(|m| set_of(m, n)).collect();
        ensure(ours == brute, || format!("graph {i} (n={n}): {} vs {} sets", ours.len(), brute.len()))?;
    }
    within(start.elapsed(), Duration::from_secs(60))?;
    Ok("200 graphs match brute force".into())
}

fn pi_conjunction() -> Outcome {
    let mut r = rng(5);
    let mut yes = 0;
    for i in 0..200 {
        let n = rand::Rng::random_range(&mut r, 1..=8);
        let g = random_no_sink_graph(&mut r, n, 0.25);
        let pi = classify::is_purely_infinite(&g, DEFAULT_CYCLE_CAP).value;
        let per: Vec<VerdictValue> =
            (0..n).map(|v| classify::properly_infinite_vertex(&g, v, DEFAULT_CYCLE_CAP).value).collect();
        let conj = if per.iter().all(|&x| x == VerdictValue::Yes) {
            VerdictValue::Yes
        } else if per.contains(&VerdictValue::No) {
            VerdictValue::No
        } else {
            VerdictValue::Unknown
        };
        ensure(pi == conj, || format!("graph {i}: pi {pi:?}, vertices {per:?}"))?;
        yes += usize::from(pi == VerdictValue::Yes);
    }
    Ok(format!("200 graphs agree ({yes} purely infinite)"))
}

fn acyclic_traces() -> Outcome {
    let mut r = rng(6);
    for i in 0..100 {
        let n = rand::Rng::random_range(&mut r, 1..=10);
        let g = random_acyclic_graph(&mut r, n, 0.3);
        let sinks: Vec<usize> = (0..n).filter(|&v| g.out_edges(v).is_empty()).collect();
        let dim = traces::trace_cone_dimension(&g);
        ensure(dim == sinks.len(), || format!("graph {i}: dimension {dim}, sinks {}", sinks.len()))?;
        let (v, t) = traces::bounded_graph_trace(&g);
        // A finite acyclic graph always has a sink, so the oracle says feasible.
        ensure(v.is_yes(), || format!("graph {i}: {:?}", v.value))?;
        let t = t.ok_or("no trace returned")?;
        let counts = brute_path_counts(n, &arcs(&g));
        for u in 0..n {
            let expect: Rational = counts[u].iter().map(|(s, c)| Rational::from_integer(c.clone()) * &t.values[*s]).sum();
            ensure(t.values[u] == expect, || format!("graph {i}: vertex {u} is not a path-count sum"))?;
        }
        let total: Rational = t.values.iter().sum();
        ensure(total.is_one(), || format!("graph {i}: total {total}"))?;
    }
    Ok("100 graphs: feasible, dimension = sinks, values match path counts".into())
}

fn mean_cycles() -> Outcome {
    let mut r = rng(7);
    let mut checked = 0;
    for i in 0..200 {
        let s = rand::Rng::random_range(&mut r, 0..=3);
        let b = rand::Rng::random_range(&mut r, 1..=8 - s);
        let p = random_presentation(&mut r, s, b);
        let q = periodic::shift_quotient(&p);
        let g = &q.graph;
        let report = q.mean_cycles();
        let comps = g.strongly_connected_components();
        let cycles = brute_simple_cycles(g.vertex_count(), &arcs(g));
        let mean = |cy: &[usize]| num_rational::Ratio::new(cy.iter().map(|&e| q.weights[e]).sum::<i64>(), cy.len() as i64);
        let cyclic: BTreeSet<usize> = cycles.iter().map(|cy| comps.component_of[g.edge(cy[0]).source]).collect();
        let reported: BTreeSet<usize> = report.components.iter().map(|c| comps.component_of[c.vertices[0]]).collect();
        ensure(cyclic == reported, || format!("quotient {i}: cyclic components differ"))?;
        for c in &report.components {
            let comp = comps.component_of[c.vertices[0]];
            let means: Vec<_> = cycles.iter().filter(|cy| comps.component_of[g.edge(cy[0]).source] == comp).map(|cy| mean(cy)).collect();
            let (min, max) = (*means.iter().min().unwrap(), *means.iter().max().unwrap());
            ensure(c.min_mean == min && c.max_mean == max, || format!("quotient {i}: means {:?}/{:?} vs {min}/{max}", c.min_mean, c.max_mean))?;
            ensure(mean(&c.min_cycle.edges) == min && mean(&c.max_cycle.edges) == max, || format!("quotient {i}: witness cycle mean"))?;
            checked += 1;
        }
    }
    Ok(format!("200 quotients, {checked} components agree"))
}

/// Does `v` reach a vertex on a simple cycle with an exit?
fn reaches_exit_cycle(g: &DirectedGraph, v: usize) -> bool {
    let n = g.vertex_count();
    let reach = closure(n, &arcs(g));
    brute_simple_cycles(n, &arcs(g)).iter().any(|cy| {
        let on: BTreeSet<usize> = cy.iter().map(|&e| g.edge(e).source).collect();
        let has_exit = on.iter().any(|&x| g.out_edges(x).iter().any(|e| !cy.contains(e)));
        has_exit && on.iter().any(|&x| x == v || reach[v][x])
    })
}

fn contractions() -> Outcome {
    let mut r = rng(8);
    let mut witnesses = 0;
    for i in 0..50 {
        let n = rand::Rng::random_range(&mut r, 1..=6);
        let a = random_matrix(&mut r, n, 0.4, true);
        let g = a.graph();
        for v in 0..n {
            let pre = reaches_exit_cycle(&g, v);
            let w = shiftspace::contraction_witness(&a, v);
            ensure(pre == w.is_ok(), || format!("matrix {i} vertex {v}: precondition {pre}, witness {}", w.is_ok()))?;
            let Ok(w) = w else { continue };
            let x = shiftspace::shift_image(&a, &w.w, w.n).map_err(|e| e.to_string())?;
            let y = shiftspace::shift_image(&a, &w.w, w.m).map_err(|e| e.to_string())?;
            let rel = match (x.len(), y.len()) {
                (1, 1) => shiftspace::cylinder_compare(&a, x.first().unwrap(), y.first().unwrap()),
                _ => shiftspace::union_compare(&a, &x, &y),
            };
            ensure(rel == CylinderRelation::StrictSubset, || format!("matrix {i} vertex {v}: {rel:?}"))?;
            ensure(shiftspace::verify_contraction(&a, &w), || format!("matrix {i} vertex {v}: verify"))?;
            witnesses += 1;
        }
    }
    Ok(format!("{witnesses} witnesses, all verified"))
}

fn tree() -> Outcome {
    let Parsed::Periodic(p) = load("tree.period") else { unreachable!() };
    let st = periodic::periodic_is_stable(&p);
    ensure(st.is_no(), || format!("stable {:?}", st.value))?;
    let Certificate::Perron { matrix, root_above_one, sample, .. } = &st.certificate else {
        return Err(format!("certificate {:?}", st.certificate));
    };
    ensure(*matrix == vec![vec!["2".to_string()]] && *root_above_one, || format!("matrix {matrix:?}"))?;
    // tau_k = 2^-k on copy k; check the trace equation on copies 1..=3.
    let t = realize_truncation(&p, 4);
    let two = Rational::from_integer(2.into());
    let tau = |k: u32| Rational::one() / num_traits::pow(two.clone(), k as usize);
    let level = |i: usize| match t.origin[i] {
        ckdecide::presentations::RealizedVertex::Block { copy, .. } => copy,
        _ => unreachable!(),
    };
    for i in 0..t.graph.vertex_count() {
        let k = level(i);
        if k > 3 {
            continue;
        }
        let out: Rational = t.graph.out_edges(i).iter().map(|&e| tau(level(t.graph.edge(e).range))).sum();
        ensure(out == tau(k), || format!("copy {k}: {} vs {}", out, tau(k)))?;
    }
    if let Some(sample) = sample {
        let vals: BTreeMap<u32, Rational> = sample
            .iter()
            .map(|(id, x)| (id.trim_start_matches("b@").parse().unwrap(), parse_rational(x).unwrap()))
            .collect();
        let ks: Vec<u32> = vals.keys().copied().collect();
        ensure(ks.len() == 3 && ks.windows(2).all(|w| w[1] == w[0] + 1), || format!("sample copies {ks:?}"))?;
        ensure(ks.windows(2).all(|w| vals[&w[0]] == &two * &vals[&w[1]]), || "sample ratio is not 2".into())?;
        ensure(vals.values().all(|x| *x > Rational::zero()), || "sample not positive".into())?;
    }
    for k in 5..=20 {
        let t = realize_truncation(&p, k);
        let (v, _) = traces::bounded_graph_trace(&t.graph);
        ensure(v.is_yes(), || format!("depth {k}: {:?}", v.value))?;
    }
    Ok("stable no (root 2), 2^-k trace holds on copies 1..3, LP feasible at depths 5..20".into())
}

fn quotient_stability() -> Outcome {
    let mut stable = 0;
    let mut quotients = 0;
    for path in corpus_files() {
        if Format::sniff(&path) != Some(Format::Periodic) {
            continue;
        }
        let p = parse_periodic(&fs::read_to_string(&path).unwrap()).unwrap();
        if !periodic::periodic_is_stable(&p).is_yes() {
            continue;
        }
        stable += 1;
        for h in pideals::presentation_hereditary_saturated(&p, 16).map_err(|e| e.to_string())? {
            let q = pideals::quotient_presentation(&p, &h);
            let v = periodic::periodic_is_stable(&q);
            ensure(v.is_yes(), || format!("{}: quotient by {:?} is {:?}", path.display(), pideals::type_ids(&p, &h), v.value))?;
            quotients += 1;
        }
    }
    ensure(stable > 0, || "no stable periodic input in the corpus".into())?;
    Ok(format!("{stable} stable inputs, {quotients} quotients, 0 violations"))
}

fn determinism() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_ckdecide");
    let files = corpus_files();
    for path in &files {
        let run = || Command::new(bin).arg("analyze").arg(path).arg("--json").output().unwrap();
        let (a, b) = (run(), run());
        ensure(a.stdout == b.stdout && a.stderr == b.stderr && a.status == b.status, || {
            format!("{} differs between runs", path.display())
        })?;
    }
    Ok(format!("{} corpus files byte-identical", files.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("o2 single vertex with two loops", o2),
        ("example chain is stable and purely infinite", chain),
        ("single loop", single_loop),
        ("hereditary saturated sets vs brute force", lattice),
        ("pure infiniteness vs properly infinite vertices", pi_conjunction),
        ("graph traces on acyclic graphs", acyclic_traces),
        ("mean cycles vs enumeration", mean_cycles),
        ("contraction witnesses", contractions),
        ("binary splitting tree", tree),
        ("stability passes to quotients", quotient_stability),
        ("deterministic JSON", determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = f();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name} ({secs:.2}s): {detail}", i + 1),
            Err(e) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({secs:.2}s): {e}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
