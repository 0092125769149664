mod common;

use common::{arb_graph, oracle_gamma, oracle_gamma_set, small_family};
use graphsat::embedding::{cnf_count, is_empty_set, CnfSet, Term};
use graphsat::logic::graph_and;
use graphsat::rewrite::{
    check_completion, check_nonrecursive, decompose, drop_leaf, local_rewrite, vertex_assignment_set,
    ProcedureStatus,
};
use graphsat::sat::SatConfig;
use graphsat::MHGraph;
use num_traits::ToPrimitive;
use proptest::prelude::*;

fn small_enough(g: &MHGraph) -> bool {
    cnf_count(g).to_u64().is_some_and(|n| n <= 20_000)
}

fn rest_set(g: &MHGraph, v: u32) -> CnfSet {
    Term::from_multiset(g.rest(v)).to_cnf_set()
}

#[test]
fn rewrite_preserves_status_on_every_small_graph() {
    let mut checked = 0;
    for g in small_family(4, 5) {
        if !small_enough(&g) {
            continue;
        }
        let expected = oracle_gamma(&g);
        for v in g.vertices() {
            if g.degree(v) < 2 {
                continue;
            }
            let r = local_rewrite(&g, v).unwrap();
            assert_eq!(oracle_gamma_set(r.union().members()), expected, "{g} at {v}");
            checked += 1;
        }
    }
    assert!(checked > 1_000, "only {checked} rewrites checked");
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 1_000, max_global_rejects: 100_000, ..ProptestConfig::default() })]

    #[test]
    fn rewrite_preserves_status(g in arb_graph(5, 3, 4, 2), v in 1u32..=5) {
        prop_assume!(g.degree(v) >= 2 && small_enough(&g));
        let r = local_rewrite(&g, v).unwrap();
        prop_assert_eq!(oracle_gamma_set(r.union().members()), oracle_gamma(&g));
    }

    #[test]
    fn eliminating_a_vertex_preserves_status(g in arb_graph(4, 3, 4, 2), v in 1u32..=4) {
        prop_assume!(g.degree(v) >= 1 && small_enough(&g));
        let s = vertex_assignment_set(&g, v, &SatConfig::default()).unwrap();
        prop_assert_eq!(oracle_gamma_set(s.members()), oracle_gamma(&g));
    }

    #[test]
    fn rewrite_matches_its_definition(g in arb_graph(4, 3, 4, 2), v in 1u32..=4) {
        prop_assume!(g.degree(v) >= 2 && small_enough(&g));
        let star = g.star(v).unwrap();
        let by_definition = graph_and(
            &vertex_assignment_set(&star, v, &SatConfig::default()).unwrap(),
            &rest_set(&g, v),
        );
        let r = local_rewrite(&g, v).unwrap();
        prop_assert_eq!(oracle_gamma_set(r.union().members()), oracle_gamma_set(by_definition.members()));
    }

    #[test]
    fn dropping_a_leaf_preserves_status(g in arb_graph(5, 3, 4, 2), v in 1u32..=5) {
        prop_assume!(g.degree(v) == 1 && g.loops_at(v) == 0);
        let rest = drop_leaf(&g, v).unwrap();
        let expected = match rest.into_graph() {
            Some(h) => oracle_gamma(&h),
            None => true,
        };
        prop_assert_eq!(oracle_gamma(&g), expected);
    }

    #[test]
    fn decomposition_matches_the_oracle(g in arb_graph(6, 3, 6, 2)) {
        let status = decompose(&g, &SatConfig::default()).unwrap();
        prop_assert_eq!(status.is_sat(), oracle_gamma(&g));
    }

    #[test]
    fn procedures_never_contradict_the_oracle(g in arb_graph(5, 3, 4, 2), v in 1u32..=5) {
        prop_assume!(g.degree(v) >= 2 && small_enough(&g));
        let cfg = SatConfig::default();
        let expected = oracle_gamma(&g);
        match check_nonrecursive(&g, v, &cfg).unwrap().status {
            ProcedureStatus::TotallySat => prop_assert!(expected),
            ProcedureStatus::Unsat => prop_assert!(!expected),
            ProcedureStatus::Inconclusive => {}
        }
        match check_completion(&g, v, 1, &cfg).unwrap().status {
            ProcedureStatus::TotallySat => prop_assert!(expected),
            ProcedureStatus::Unsat => prop_assert!(!expected),
            ProcedureStatus::Inconclusive => {}
        }
    }
}

#[test]
fn rewriting_requires_degree_two() {
    let g: MHGraph = "(1,2),(2,3)".parse().unwrap();
    assert!(local_rewrite(&g, 1).is_err());
    assert!(local_rewrite(&g, 4).is_err());
    assert!(local_rewrite(&g, 2).is_ok());
    assert!(drop_leaf(&g, 2).is_err());
    assert_eq!(drop_leaf(&g, 1).unwrap(), "(2,3)".parse::<MHGraph>().unwrap().into_edges());
}

#[test]
fn loops_at_the_rewritten_vertex_are_kept() {
    // (1)^2 alone is unsatisfiable; the rewrite must not forget it
    let g: MHGraph = "(1)^2,(1,2)".parse().unwrap();
    assert!(!oracle_gamma(&g));
    let r = local_rewrite(&g, 1).unwrap();
    assert!(!oracle_gamma_set(r.union().members()));
    assert!(!is_empty_set(&g));
}
