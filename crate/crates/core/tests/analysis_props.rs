mod common;

use std::collections::BTreeMap;

use ckdecide::exact_lp::{self, FeasibilityResult, RationalLinearSystem};
use ckdecide::periodic::{self, ideals as pideals, Analysis};
use ckdecide::presentations::{parse_periodic, realize_truncation, RealizedVertex};
use ckdecide::traces;
use ckdecide::verdict::parse_rational;
use ckdecide::{Certificate, Rational};
use common::*;
use num_traits::{One, Zero};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn trace_witnesses_are_exact(seed in any::<u64>(), n in 0usize..=8) {
        let g = random_graph(&mut rng(seed), n, 0.15);
        let (v, t) = traces::bounded_graph_trace(&g);
        let (sys, _) = traces::trace_system(&g);
        match (&v.certificate, t) {
            (Certificate::Trace { .. }, Some(t)) => {
                prop_assert!(t.satisfies(&g));
                prop_assert_eq!(t.values.iter().cloned().sum::<Rational>(), Rational::one());
                prop_assert!(exact_lp::verify_witness(&sys, &t.values));
            }
            (Certificate::Farkas { multipliers }, None) => {
                let (_, labels) = traces::trace_system(&g);
                let mut y: Vec<Rational> = labels.iter().map(|&u| parse_rational(&multipliers[g.vertex_id(u)]).unwrap()).collect();
                y.push(parse_rational(&multipliers["sum"]).unwrap());
                prop_assert!(exact_lp::verify_farkas(&sys, &y));
            }
            _ => prop_assert!(false, "trace verdict without matching certificate"),
        }
    }

    #[test]
    fn acyclic_traces_are_path_count_sums(seed in any::<u64>(), n in 1usize..=10) {
        let g = random_acyclic_graph(&mut rng(seed), n, 0.3);
        let sinks: Vec<usize> = (0..n).filter(|&v| g.out_edges(v).is_empty()).collect();
        prop_assert_eq!(traces::trace_cone_dimension(&g), sinks.len());
        let (v, t) = traces::bounded_graph_trace(&g);
        prop_assert!(v.is_yes());
        let t = t.unwrap();
        let counts = brute_path_counts(n, &arcs(&g));
        for u in 0..n {
            let expect: Rational = counts[u].iter().map(|(s, c)| Rational::from_integer(c.clone()) * &t.values[*s]).sum();
            prop_assert_eq!(&t.values[u], &expect);
        }
    }

    #[test]
    fn simplex_answers_verify(seed in any::<u64>(), rows in 1usize..=4, cols in 1usize..=5) {
        let mut r = rng(seed);
        let m: Vec<Vec<i64>> = (0..rows).map(|_| (0..cols).map(|_| rand::Rng::random_range(&mut r, -2..=2)).collect()).collect();
        let b: Vec<i64> = (0..rows).map(|_| rand::Rng::random_range(&mut r, -2..=2)).collect();
        let sys = RationalLinearSystem::from_i64(&m, &b).unwrap();
        match exact_lp::feasible_nonnegative(&sys) {
            FeasibilityResult::Feasible(x) => prop_assert!(exact_lp::verify_witness(&sys, &x)),
            FeasibilityResult::Infeasible(y) => prop_assert!(exact_lp::verify_farkas(&sys, &y)),
        }
    }

    #[test]
    fn mean_cycles_match_enumeration(seed in any::<u64>(), n in 1usize..=6) {
        let mut r = rng(seed);
        let g = random_graph(&mut r, n, 0.2);
        let w: Vec<i64> = (0..g.edge_count()).map(|_| rand::Rng::random_range(&mut r, -1..=1)).collect();
        let report = periodic::quotient::mean_cycles(&g, &w);
        let comps = g.strongly_connected_components();
        for c in &report.components {
            let comp = comps.component_of[c.vertices[0]];
            let means: Vec<(i64, i64)> = brute_simple_cycles(n, &arcs(&g))
                .into_iter()
                .filter(|cy| comps.component_of[g.edge(cy[0]).source] == comp)
                .map(|cy| (cy.iter().map(|&e| w[e]).sum(), cy.len() as i64))
                .collect();
            let min = means.iter().map(|&(a, b)| num_rational::Ratio::new(a, b)).min().unwrap();
            let max = means.iter().map(|&(a, b)| num_rational::Ratio::new(a, b)).max().unwrap();
            prop_assert_eq!(c.min_mean, min);
            prop_assert_eq!(c.max_mean, max);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn left_infinite_matches_predecessor_counts(seed in any::<u64>(), s in 0usize..=1, b in 1usize..=3) {
        let p = random_presentation(&mut rng(seed), s, b);
        let a = Analysis::new(&p);
        let t30 = realize_truncation(&p, 30);
        let t40 = realize_truncation(&p, 40);
        let t50 = realize_truncation(&p, 50);
        let count = |t: &ckdecide::presentations::Truncation, v: RealizedVertex| {
            let i = t.index_of(v, &p).unwrap();
            t.graph.reaching_set([i]).iter().filter(|&&x| x).count()
        };
        let mut probes: Vec<RealizedVertex> = (0..p.stem_len()).map(RealizedVertex::Stem).collect();
        for copy in 1..=3 {
            probes.extend((0..p.block_len()).map(|vertex| RealizedVertex::Block { vertex, copy }));
        }
        for v in probes {
            if a.is_left_infinite(v) {
                prop_assert!(count(&t30, v) < count(&t50, v), "{} should gain predecessors", p.realized_id(v));
            } else {
                prop_assert_eq!(count(&t40, v), count(&t50, v), "{} should stabilize", p.realized_id(v));
            }
        }
    }

    #[test]
    fn stable_presentations_have_stable_quotients(seed in any::<u64>(), s in 0usize..=2, b in 1usize..=3) {
        let p = random_sink_free_presentation(&mut rng(seed), s, b);
        if periodic::periodic_is_stable(&p).is_yes() {
            prop_assert!(periodic::has_unital_quotient(&p).is_no());
            for h in pideals::presentation_hereditary_saturated(&p, 20).unwrap() {
                let q = pideals::quotient_presentation(&p, &h);
                prop_assert!(periodic::periodic_is_stable(&q).is_yes(), "quotient by {:?}", pideals::type_ids(&p, &h));
            }
        }
    }
}

/// Splitting trees with `k` upward edges per vertex: the Perron test finds
/// root `k` and the sampled trace satisfies the trace equation.
#[test]
fn splitting_trees_have_geometric_traces() {
    for k in 2..=4 {
        let mut text = String::from("[block]\nvertex b\n[cross]\n");
        for i in 0..k {
            text.push_str(&format!("edge e{i} b b +1\n"));
        }
        let p = parse_periodic(&text).unwrap();
        let v = periodic::periodic_is_stable(&p);
        assert!(v.is_no());
        let Certificate::Perron { sample: Some(sample), matrix, .. } = v.certificate else { panic!("{v:?}") };
        assert_eq!(matrix, vec![vec![k.to_string()]]);
        let vals: BTreeMap<u32, Rational> = sample
            .iter()
            .map(|(id, x)| (id.trim_start_matches("b@").parse().unwrap(), parse_rational(x).unwrap()))
            .collect();
        assert_eq!(vals.len(), 3);
        let levels: Vec<u32> = vals.keys().copied().collect();
        for w in levels.windows(2) {
            assert_eq!(vals[&w[0]], Rational::from_integer(k.into()) * &vals[&w[1]]);
        }
        assert!(vals.values().all(|x| *x > Rational::zero()));
    }
}

#[test]
fn stable_means_no_unital_quotient_on_finite_graphs() {
    for seed in 0..200 {
        let mut r = rng(seed);
        let n = rand::Rng::random_range(&mut r, 0..=6);
        let g = random_graph(&mut r, n, 0.2);
        if traces::is_stable_finite(&g).is_yes() {
            assert!(traces::has_unital_quotient_finite(&g).is_no());
            let (_, s) = traces::s0_subgraph(&g);
            assert!(traces::bounded_graph_trace(&s).0.is_no());
        }
    }
}
