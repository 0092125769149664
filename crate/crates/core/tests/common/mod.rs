//! Independent oracles and generators shared by the integration tests.
//!
//! The oracles never call the library's decision procedures: CNFs are
//! evaluated by truth table, and graph satisfiability is decided by looking
//! for a choice of clauses whose falsifying assignments cover everything.

#![allow(dead_code)]

pub mod checks;

use std::collections::BTreeSet;

use graphsat::embedding::Term;
use graphsat::enumerate::{generate, GenerationFilter};
use graphsat::{Cnf, Edge, EdgeMultiset, Literal, MHGraph};
use proptest::prelude::*;
use rand::Rng;

/// Truth-table satisfiability.
pub fn oracle_sigma(x: &Cnf) -> bool {
    let vars: Vec<u32> = x
        .clauses()
        .iter()
        .flat_map(|c| c.literals().iter())
        .filter_map(|l| match l {
            Literal::Pos(v) | Literal::Neg(v) => Some(*v),
            _ => None,
        })
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    assert!(vars.len() <= 20, "oracle limited to 20 variables");
    (0u32..1 << vars.len()).any(|a| {
        let value = |v: u32| {
            let i = vars.iter().position(|&w| w == v).unwrap();
            a >> i & 1 == 1
        };
        x.clauses().iter().all(|c| {
            c.literals().iter().any(|l| match *l {
                Literal::Top => true,
                Literal::Bottom => false,
                Literal::Pos(v) => value(v),
                Literal::Neg(v) => !value(v),
            })
        })
    })
}

/// Total satisfiability of an explicit set: nonempty, every member
/// satisfiable.
pub fn oracle_gamma_set<I: IntoIterator<Item = Cnf>>(xs: I) -> bool {
    let mut any = false;
    for x in xs {
        any = true;
        if !oracle_sigma(&x) {
            return false;
        }
    }
    any
}

/// Total satisfiability of a graph on at most seven vertices.
pub fn oracle_gamma(g: &MHGraph) -> bool {
    let vs: Vec<u32> = g.vertices().into_iter().collect();
    let n = vs.len();
    assert!(n <= 7, "oracle limited to 7 vertices");
    let size = 1usize << n;
    let full: u128 = if size == 128 {
        u128::MAX
    } else {
        (1u128 << size) - 1
    };
    let mut edges = Vec::new();
    for (e, m) in g.iter() {
        let idx: Vec<usize> = e
            .vertices()
            .iter()
            .map(|v| vs.iter().position(|w| w == v).unwrap())
            .collect();
        let k = idx.len();
        if m as usize > 1 << k {
            // more copies than distinct clauses: no CNF lives on the graph
            return false;
        }
        let masks: Vec<u128> = (0..1usize << k)
            .map(|p| {
                (0..size)
                    .filter(|a| (0..k).all(|j| (a >> idx[j] & 1) == (p >> j & 1)))
                    .fold(0u128, |acc, a| acc | 1u128 << a)
            })
            .collect();
        edges.push((masks, m as usize, 1usize << (n - k)));
    }
    !covering_member(&edges, 0, 0, full)
}

fn covering_member(edges: &[(Vec<u128>, usize, usize)], i: usize, covered: u128, full: u128) -> bool {
    if covered == full {
        return true;
    }
    if i == edges.len() {
        return false;
    }
    let capacity: usize = edges[i..].iter().map(|(_, m, w)| m * w).sum();
    if capacity < (full & !covered).count_ones() as usize {
        return false;
    }
    let (masks, m, _) = &edges[i];
    choose(masks, *m, 0, covered, &mut |c| covering_member(edges, i + 1, c, full))
}

fn choose(masks: &[u128], m: usize, from: usize, acc: u128, k: &mut dyn FnMut(u128) -> bool) -> bool {
    if m == 0 {
        return k(acc);
    }
    (from..=masks.len() - m).any(|j| choose(masks, m - 1, j + 1, acc | masks[j], k))
}

pub fn oracle_gamma_term(t: &Term) -> bool {
    match t {
        Term::Top => true,
        Term::Bottom => false,
        Term::Graph(g) => oracle_gamma(g),
    }
}

pub fn graph(s: &str) -> MHGraph {
    s.parse().unwrap()
}

pub fn cnf(s: &str) -> Cnf {
    s.parse().unwrap()
}

/// Every graph (up to isomorphism, no isolated vertices) with at most
/// `vertices` vertices and total multiplicity at most `edges`.
pub fn small_family(vertices: usize, edges: u32) -> Vec<MHGraph> {
    let f = GenerationFilter {
        min_vertices: 1,
        max_vertices: vertices,
        max_edge_size: vertices,
        min_degree: 1,
        connected: false,
        mult_bound: false,
        max_edges: Some(edges),
        simple: false,
        budget: u64::MAX,
    };
    generate(&f)
        .unwrap()
        .filter_map(|g| g.graph)
        .collect()
}

/// Random graph with `1..=max_edges` edge entries of size at most
/// `max_size` over vertices `1..=n` and multiplicities up to `max_mult`.
pub fn random_graph<R: Rng>(rng: &mut R, n: u32, max_size: usize, max_edges: usize, max_mult: u32) -> MHGraph {
    let mut m = EdgeMultiset::new();
    let count = rng.gen_range(1..=max_edges);
    for _ in 0..count {
        m.insert(random_edge(rng, 1..=n, max_size), rng.gen_range(1..=max_mult));
    }
    MHGraph::new(m).unwrap()
}

pub fn random_edge<R: Rng>(rng: &mut R, vs: std::ops::RangeInclusive<u32>, max_size: usize) -> Edge {
    let pool: Vec<u32> = vs.collect();
    let k = rng.gen_range(1..=max_size.min(pool.len()));
    let mut chosen = BTreeSet::new();
    while chosen.len() < k {
        chosen.insert(pool[rng.gen_range(0..pool.len())]);
    }
    Edge::new(chosen).unwrap()
}

/// Proptest strategy for small graphs.
pub fn arb_graph(n: u32, max_size: usize, max_edges: usize, max_mult: u32) -> impl Strategy<Value = MHGraph> {
    let edge = (
        proptest::collection::btree_set(1..=n, 1..=max_size.min(n as usize)),
        1..=max_mult,
    );
    proptest::collection::vec(edge, 1..=max_edges).prop_map(|es| {
        let mut m = EdgeMultiset::new();
        for (vs, k) in es {
            m.insert(Edge::new(vs).unwrap(), k);
        }
        MHGraph::new(m).unwrap()
    })
}

/// Proptest strategy for small CNFs over variables `1..=vars`.
pub fn arb_cnf(vars: i32, max_clauses: usize, max_len: usize) -> impl Strategy<Value = Cnf> {
    let lit = (1..=vars, any::<bool>()).prop_map(|(v, neg)| if neg { -v } else { v });
    let clause = proptest::collection::vec(lit, 1..=max_len);
    proptest::collection::vec(clause, 1..=max_clauses).prop_map(|cs| {
        let refs: Vec<&[i32]> = cs.iter().map(|c| c.as_slice()).collect();
        Cnf::from_ints(&refs).unwrap()
    })
}
