//! Oracle checks shared by the property suites and the acceptance target.
//!
//! Every check is seed-fixed and returns the number of cases it verified,
//! or a description of the first violation.

use std::collections::BTreeSet;

use graphsat::cnf::{sigma, sigma_exhaustive};
use graphsat::embedding::{cnfs_on_graph, is_empty_set, Term};
use graphsat::logic::{equi_implies_abot, equi_implies_bot, gamma, graph_and, graph_or};
use graphsat::reduce::{RewriteOutcome, Rule};
use graphsat::rewrite::local_rewrite;
use graphsat::sat::{gamma_brute, gamma_cover, SatConfig};
use graphsat::{CnfSet, Edge, EdgeMultiset, Literal, MHGraph};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{arb_cnf, arb_graph, oracle_gamma, oracle_gamma_set, oracle_gamma_term, oracle_sigma, random_edge, small_family};

pub type Check = Result<usize, String>;
pub type NamedCheck = (&'static str, fn() -> Check);

pub const RANDOM_CASES: u32 = 1_000;
pub const SIGMA_CASES: u32 = 10_000;

fn runner(cases: u32) -> TestRunner {
    let config = Config {
        cases,
        max_global_rejects: 1_000_000,
        failure_persistence: None,
        ..Config::default()
    };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

/// Runs `body` on `cases` generated values, counting the accepted ones.
fn run<S: Strategy>(cases: u32, strategy: S, body: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Check
where
    S::Value: std::fmt::Debug,
{
    let accepted = std::cell::Cell::new(0usize);
    runner(cases)
        .run(&strategy, |v| {
            body(v)?;
            accepted.set(accepted.get() + 1);
            Ok(())
        })
        .map_err(|e| e.to_string())?;
    Ok(accepted.get())
}

// ---- CNF satisfiability ----

pub fn sigma_matches_truth_table() -> Check {
    run(SIGMA_CASES, arb_cnf(4, 6, 4), |x| {
        let expected = oracle_sigma(&x);
        prop_assert_eq!(sigma(&x), expected, "{}", x);
        prop_assert_eq!(sigma_exhaustive(&x).unwrap(), expected, "{}", x);
        Ok(())
    })
}

// ---- set-level logic ----

fn set(g: &MHGraph) -> CnfSet {
    CnfSet::Graph(g.clone())
}

/// The materialized set, so conjunction is pairwise rather than a multiset sum.
pub fn explicit(g: &MHGraph) -> CnfSet {
    CnfSet::explicit(cnfs_on_graph(g))
}

fn union(a: &CnfSet, b: &CnfSet) -> CnfSet {
    CnfSet::explicit(a.members().chain(b.members()))
}

fn nonempty_graph(n: u32) -> impl Strategy<Value = MHGraph> {
    arb_graph(n, 3, 2, 2).prop_filter("nonempty set", |g| !is_empty_set(g))
}

fn pair() -> impl Strategy<Value = (MHGraph, MHGraph)> {
    (nonempty_graph(4), nonempty_graph(4))
}

/// `g2`, or `g1` with `g2`'s edges added, so that containment cases occur.
fn maybe_extend(g1: &MHGraph, g2: MHGraph, extend: bool) -> MHGraph {
    if extend {
        g1.and(&g2)
    } else {
        g2
    }
}

pub fn gamma_is_multiplicative() -> Check {
    run(RANDOM_CASES, pair(), |(g1, g2)| {
        let u = union(&set(&g1), &set(&g2));
        let expected = oracle_gamma(&g1) && oracle_gamma(&g2);
        prop_assert_eq!(gamma(&u).unwrap(), expected);
        prop_assert_eq!(oracle_gamma_set(u.members()), expected);
        Ok(())
    })
}

/// Equal status exactly when the ⊥-criterion holds both ways.
pub fn bot_criterion_characterizes_status() -> Check {
    run(RANDOM_CASES, pair(), |(g1, g2)| {
        let (s1, s2) = (set(&g1), set(&g2));
        let both = equi_implies_bot(&s1, &s2) && equi_implies_bot(&s2, &s1);
        prop_assert_eq!(oracle_gamma(&g1) == oracle_gamma(&g2), both);
        Ok(())
    })
}

pub fn abot_implies_bot() -> Check {
    run(RANDOM_CASES, (pair(), any::<bool>()), |((g1, g2), extend)| {
        let g2 = maybe_extend(&g1, g2, extend);
        let (s1, s2) = (set(&g1), set(&g2));
        if equi_implies_abot(&s1, &s2).unwrap() {
            prop_assert!(equi_implies_bot(&s1, &s2));
        }
        Ok(())
    })
}

pub fn abot_survives_conjunction() -> Check {
    run(RANDOM_CASES, (pair(), nonempty_graph(4), any::<bool>()), |((g1, g2), g, extend)| {
        let g2 = maybe_extend(&g1, g2, extend);
        // graph conjunction is the multiset sum, which can exceed an edge's clause count
        prop_assume!(!is_empty_set(&g.and(&g1)) && !is_empty_set(&g.and(&g2)));
        let (s1, s2) = (set(&g1), set(&g2));
        if equi_implies_abot(&s1, &s2).unwrap() {
            let gs = set(&g);
            prop_assert!(equi_implies_abot(&graph_and(&gs, &s1), &graph_and(&gs, &s2)).unwrap());
        }
        Ok(())
    })
}

pub fn disjunction_abot_implies_each_side() -> Check {
    run(RANDOM_CASES, pair(), |(g1, g2)| {
        let (s1, s2) = (set(&g1), set(&g2));
        prop_assert!(equi_implies_abot(&graph_or(&s1, &s2), &s1).unwrap());
        Ok(())
    })
}

pub fn unsat_sides_give_an_unsat_disjunct() -> Check {
    run(RANDOM_CASES, pair(), |(g1, g2)| {
        if !oracle_gamma(&g1) && !oracle_gamma(&g2) {
            let or = graph_or(&set(&g1), &set(&g2));
            prop_assert!(or.members().any(|x| !oracle_sigma(&x)));
        }
        Ok(())
    })
}

pub fn sat_conjunct_makes_the_disjunction_sat() -> Check {
    run(RANDOM_CASES, (pair(), nonempty_graph(4)), |((g1, g2), g)| {
        if oracle_gamma(&g.and(&g1)) || oracle_gamma(&g.and(&g2)) {
            let or = graph_or(&set(&g1), &set(&g2));
            prop_assert!(oracle_gamma_set(graph_and(&set(&g), &or).members()));
        }
        Ok(())
    })
}

pub fn subgraph_abot_implies_supergraph() -> Check {
    run(RANDOM_CASES, (nonempty_graph(5), nonempty_graph(5)), |(g1, h)| {
        let g2 = g1.and(&h);
        prop_assume!(!is_empty_set(&g2));
        prop_assert!(equi_implies_abot(&set(&g1), &set(&g2)).unwrap());
        Ok(())
    })
}

fn single(vs: Vec<u32>) -> CnfSet {
    set(&MHGraph::new(EdgeMultiset::from_pairs([(Edge::new(vs).unwrap(), 1)])).unwrap())
}

pub fn edge_abot_implies_its_faces() -> Check {
    let strategy = (proptest::collection::btree_set(1u32..=6, 1..=4), 1u32..16);
    run(RANDOM_CASES, strategy, |(f, mask)| {
        let fv: Vec<u32> = f.into_iter().collect();
        let face: Vec<u32> = fv
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &v)| v)
            .collect();
        prop_assume!(!face.is_empty());
        prop_assert!(equi_implies_abot(&single(fv), &single(face)).unwrap());
        Ok(())
    })
}

pub fn graph_abot_implies_its_shavings() -> Check {
    let strategy = (arb_graph(5, 3, 3, 1), proptest::collection::vec(any::<u32>(), 3));
    run(RANDOM_CASES, strategy, |(g2, picks)| {
        let mut m = EdgeMultiset::new();
        for (i, (e, _)) in g2.iter().enumerate() {
            let vs = e.vertices();
            let mask = picks[i] % ((1 << vs.len()) - 1) + 1;
            let face = vs
                .iter()
                .enumerate()
                .filter(|(j, _)| mask >> j & 1 == 1)
                .map(|(_, &v)| v);
            m.insert(Edge::new(face).unwrap(), 1);
        }
        let g1 = MHGraph::new(m).unwrap();
        prop_assume!(g1.is_shaved_version(&g2) && !is_empty_set(&g1));
        prop_assert!(equi_implies_abot(&set(&g2), &set(&g1)).unwrap());
        Ok(())
    })
}

pub fn subgraph_is_absorbed_in_unions() -> Check {
    run(RANDOM_CASES, (pair(), nonempty_graph(4)), |((g1, h), s)| {
        let g2 = g1.and(&h);
        prop_assume!(g1.is_subgraph(&g2) && !is_empty_set(&s.and(&g2)));
        let left = union(&set(&s.and(&g1)), &set(&s.and(&g2)));
        prop_assert_eq!(oracle_gamma_set(left.members()), oracle_gamma(&s.and(&g2)));
        Ok(())
    })
}

fn edge_power(k: u32, m: u32) -> CnfSet {
    if m == 0 {
        return CnfSet::Top;
    }
    let e = Edge::new(1..=k).unwrap();
    CnfSet::Graph(MHGraph::new(EdgeMultiset::from_pairs([(e, m)])).unwrap())
}

/// `e^m ∨ e^n` is the union of `e^i` for `max(0, m + n − 2^k) ≤ i ≤ min(m, n)`,
/// with `e^0` the true set. Exhaustive over edge sizes 1..=3.
pub fn same_edge_disjunction() -> Check {
    let mut checked = 0;
    for k in 1..=3u32 {
        let full = 1u32 << k;
        for m in 1..=full {
            for n in 1..=full {
                let got = graph_or(&edge_power(k, m), &edge_power(k, n)).to_set();
                let lo = (m + n).saturating_sub(full);
                let want: BTreeSet<_> = (lo..=m.min(n)).flat_map(|i| edge_power(k, i).to_set()).collect();
                if got != want {
                    return Err(format!("k={k} m={m} n={n}: {} members, expected {}", got.len(), want.len()));
                }
                checked += 1;
            }
        }
    }
    Ok(checked)
}

/// Named set-level checks, in a fixed order.
pub fn logic_checks() -> Vec<NamedCheck> {
    vec![
        ("gamma multiplicative over unions", gamma_is_multiplicative),
        ("bot criterion both ways iff equal status", bot_criterion_characterizes_status),
        ("abot implies bot", abot_implies_bot),
        ("abot survives conjunction", abot_survives_conjunction),
        ("disjunction abot-implies each side", disjunction_abot_implies_each_side),
        ("unsat sides give an unsat disjunct", unsat_sides_give_an_unsat_disjunct),
        ("sat conjunct makes disjunction sat", sat_conjunct_makes_the_disjunction_sat),
        ("subgraph abot-implies supergraph", subgraph_abot_implies_supergraph),
        ("edge abot-implies its faces", edge_abot_implies_its_faces),
        ("graph abot-implies its shavings", graph_abot_implies_its_shavings),
        ("subgraph absorbed in unions", subgraph_is_absorbed_in_unions),
        ("same-edge disjunction formula", same_edge_disjunction),
    ]
}

// ---- graph satisfiability ----

/// Cover search and brute force agree with the oracle on every graph with
/// at most four vertices and total multiplicity at most five.
pub fn cover_matches_brute_exhaustively() -> Check {
    let cfg = SatConfig::default();
    let mut checked = 0;
    for g in small_family(4, 5) {
        let expected = oracle_gamma(&g);
        let cover = gamma_cover(&g, &cfg).map_err(|e| format!("{g}: {e}"))?;
        if cover.is_sat() != expected {
            return Err(format!("{g}: cover says {cover}, oracle says sat={expected}"));
        }
        match gamma_brute(&g, &cfg) {
            Ok(b) if b.is_sat() != expected => {
                return Err(format!("{g}: brute says {b}, oracle says sat={expected}"))
            }
            Ok(_) => checked += 1,
            Err(graphsat::Error::Budget { .. }) => {}
            Err(e) => return Err(format!("{g}: {e}")),
        }
    }
    Ok(checked)
}

/// The materialized local rewrite at every vertex of degree at least two
/// has the status of the graph, over every graph with at most four vertices
/// and total multiplicity at most five.
pub fn rewrite_matches_oracle_exhaustively() -> Check {
    let mut checked = 0;
    for g in small_family(4, 5) {
        let expected = oracle_gamma(&g);
        for v in g.vertices() {
            if g.degree(v) < 2 {
                continue;
            }
            let r = local_rewrite(&g, v).map_err(|e| format!("{g} at {v}: {e}"))?;
            if oracle_gamma_set(r.union().members()) != expected {
                return Err(format!("{g} at {v}: rewrite status differs"));
            }
            checked += 1;
        }
    }
    Ok(checked)
}

// ---- reduction rules in context ----

pub const CONTEXTS: usize = 1_000;

/// Context edges avoiding the anchor 1: up to three on pattern vertices
/// 2..=4 and up to three reaching new vertices 5..=7.
pub fn random_context(rng: &mut ChaCha8Rng) -> EdgeMultiset {
    let mut m = EdgeMultiset::new();
    for _ in 0..rng.gen_range(0..=3) {
        m.insert(random_edge(rng, 2..=4, 3), rng.gen_range(1..=2));
    }
    for _ in 0..rng.gen_range(0..=3) {
        let mut e = random_edge(rng, 2..=7, 2).vertices().to_vec();
        e.push(rng.gen_range(5..=7));
        m.insert(Edge::new(e).unwrap(), 1);
    }
    m
}

pub fn with_context(pattern: &MHGraph, context: &EdgeMultiset) -> MHGraph {
    MHGraph::new(pattern.edges().sum(context)).unwrap()
}

fn outcome_violation(g: &MHGraph, outcome: &RewriteOutcome) -> Option<String> {
    let expected = oracle_gamma(g);
    let all_sat = |ts: &[Term]| ts.iter().all(oracle_gamma_term);
    let mut allowed = g.vertices();
    allowed.remove(&1);
    let terms: Vec<&Term> = match outcome {
        RewriteOutcome::Exact(ts) => {
            if all_sat(ts) != expected {
                return Some(format!("{g} -> {outcome}: status differs"));
            }
            ts.iter().collect()
        }
        RewriteOutcome::Partial { lower, upper } => {
            if !all_sat(lower) && expected {
                return Some(format!("{g}: unsat lower bound on a sat graph"));
            }
            if all_sat(upper) && !expected {
                return Some(format!("{g}: sat upper bound on an unsat graph"));
            }
            lower.iter().chain(upper).collect()
        }
    };
    // replacements drop the anchor and add no vertex
    terms.into_iter().find_map(|t| match t {
        Term::Graph(h) if !h.vertices().is_subset(&allowed) => Some(format!("{g} -> {h}: vertices grew")),
        _ => None,
    })
}

/// Anchored patterns per rule, with the anchor at vertex 1.
pub fn rule_patterns(rule: Rule) -> &'static [&'static str] {
    match rule {
        Rule::Leaf => &["(1)", "(1)^2", "(1,2)", "(1,2)^2", "(1,2)^3", "(1,2)^4", "(1,2,3)", "(1,2,3)^5", "(1,2,3)^8"],
        Rule::Smooth => &["(1,2),(1,3)", "(1),(1,2)", "(1,2),(1,3,4)", "(1,2,3),(1,3,4)"],
        Rule::Tuck => &["(1,2),(1,2,3)", "(1,2),(1,2,3)^2", "(1,2)^2,(1,2,3)", "(1,2),(1,3),(1,2,3)"],
        Rule::Triple => &["(1,2,3),(1,2,4),(1,3,4)"],
    }
}

/// Checks `rule` at vertex 1 on each pattern inside `CONTEXTS` contexts.
pub fn rule_in_contexts(rule: Rule) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(rule as u64 + 1);
    let mut checked = 0;
    for p in rule_patterns(rule) {
        let pattern: MHGraph = p.parse().unwrap();
        for _ in 0..CONTEXTS {
            let g = with_context(&pattern, &random_context(&mut rng));
            let outcome = rule
                .apply(&g, 1)
                .ok_or_else(|| format!("{} does not fire on {g}", rule.name()))?;
            if let Some(v) = outcome_violation(&g, &outcome) {
                return Err(format!("{}: {v}", rule.name()));
            }
            checked += 1;
        }
    }
    Ok(checked)
}

/// The partial tuck's bounds hold one-sidedly and are not always exact.
pub fn partial_tuck_is_one_sided() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let pattern: MHGraph = "(1,2)^2,(1,2,3)".parse().unwrap();
    let mut inexact = 0;
    for _ in 0..CONTEXTS {
        let g = with_context(&pattern, &random_context(&mut rng));
        let outcome = Rule::Tuck.apply(&g, 1).ok_or_else(|| format!("tuck does not fire on {g}"))?;
        let RewriteOutcome::Partial { lower, upper } = &outcome else {
            return Err(format!("{g}: expected a partial outcome"));
        };
        if let Some(v) = outcome_violation(&g, &outcome) {
            return Err(v);
        }
        let expected = oracle_gamma(&g);
        let lower_sat = lower.iter().all(oracle_gamma_term);
        let upper_sat = upper.iter().all(oracle_gamma_term);
        inexact += usize::from(lower_sat != expected || upper_sat != expected);
    }
    if inexact == 0 {
        return Err("partial bounds were exact in every context".into());
    }
    Ok(CONTEXTS)
}

/// Truth-table models of each member, for sets over variables 1..=3.
pub fn models(s: &CnfSet) -> BTreeSet<u8> {
    s.members()
        .map(|x| {
            (0u8..8)
                .filter(|a| {
                    x.clauses().iter().all(|c| {
                        c.literals().iter().any(|l| match *l {
                            Literal::Top => true,
                            Literal::Bottom => false,
                            Literal::Pos(v) => a >> (v - 1) & 1 == 1,
                            Literal::Neg(v) => a >> (v - 1) & 1 == 0,
                        })
                    })
                })
                .fold(0u8, |m, a| m | 1 << a)
        })
        .collect()
}
