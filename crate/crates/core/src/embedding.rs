//! Graphs as sets of CNFs.
//!
//! A vertex is the pair of its literals, an edge of size `k` is the set of
//! the `2^k` clauses picking one polarity per vertex, an edge of
//! multiplicity `n` is the set of conjunctions of `n` distinct such clauses,
//! and a graph is the product of its edges' sets under conjunction.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::cnf::{Clause, Cnf, Literal};
use crate::error::{Error, Result};
use crate::mhgraph::{Edge, EdgeMultiset, MHGraph};

/// A graph, or one of the two sentinel singletons `{(TRUE)}` / `{(FALSE)}`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum Term {
    Top,
    Bottom,
    Graph(MHGraph),
}

impl Term {
    /// An empty edge multiset stands for the neutral `{(TRUE)}`.
    pub fn from_multiset(m: EdgeMultiset) -> Term {
        m.into_graph().map_or(Term::Top, Term::Graph)
    }

    pub fn to_cnf_set(&self) -> CnfSet {
        match self {
            Term::Top => CnfSet::Top,
            Term::Bottom => CnfSet::Bottom,
            Term::Graph(g) => CnfSet::Graph(g.clone()),
        }
    }

    /// Conjunction with an edge multiset (the graph-level `∧`).
    pub fn and_multiset(&self, m: &EdgeMultiset) -> Term {
        match self {
            Term::Bottom => Term::Bottom,
            Term::Top => Term::from_multiset(m.clone()),
            Term::Graph(g) => Term::Graph(g.and_multiset(m)),
        }
    }

    pub fn as_graph(&self) -> Option<&MHGraph> {
        match self {
            Term::Graph(g) => Some(g),
            _ => None,
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Top => write!(f, "TRUE"),
            Term::Bottom => write!(f, "FALSE"),
            Term::Graph(g) => write!(f, "{g}"),
        }
    }
}

/// A set of CNFs: explicit, backed by a graph, a sentinel singleton, or
/// empty.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum CnfSet {
    Empty,
    Top,
    Bottom,
    Explicit(BTreeSet<Cnf>),
    Graph(MHGraph),
}

impl CnfSet {
    pub fn explicit<I: IntoIterator<Item = Cnf>>(xs: I) -> CnfSet {
        let set: BTreeSet<Cnf> = xs.into_iter().collect();
        if set.is_empty() {
            CnfSet::Empty
        } else {
            CnfSet::Explicit(set)
        }
    }

    pub fn from_term(t: &Term) -> CnfSet {
        t.to_cnf_set()
    }

    pub fn is_empty(&self) -> bool {
        match self {
            CnfSet::Empty => true,
            CnfSet::Explicit(s) => s.is_empty(),
            CnfSet::Graph(g) => is_empty_set(g),
            CnfSet::Top | CnfSet::Bottom => false,
        }
    }

    pub fn count(&self) -> BigUint {
        match self {
            CnfSet::Empty => BigUint::zero(),
            CnfSet::Top | CnfSet::Bottom => BigUint::one(),
            CnfSet::Explicit(s) => BigUint::from(s.len()),
            CnfSet::Graph(g) => cnf_count(g),
        }
    }

    /// Streams the members in a deterministic order.
    pub fn members(&self) -> Box<dyn Iterator<Item = Cnf> + Send + '_> {
        match self {
            CnfSet::Empty => Box::new(std::iter::empty()),
            CnfSet::Top => Box::new(std::iter::once(Cnf::top())),
            CnfSet::Bottom => Box::new(std::iter::once(Cnf::bottom())),
            CnfSet::Explicit(s) => Box::new(s.iter().cloned()),
            CnfSet::Graph(g) => Box::new(cnfs_on_graph(g)),
        }
    }

    /// Materializes the members.
    pub fn to_set(&self) -> BTreeSet<Cnf> {
        self.members().collect()
    }

    pub fn contains(&self, x: &Cnf) -> bool {
        match self {
            CnfSet::Empty => false,
            CnfSet::Top => x.is_top(),
            CnfSet::Bottom => x.is_bottom(),
            CnfSet::Explicit(s) => s.contains(x),
            CnfSet::Graph(g) => {
                !x.is_top()
                    && !x.is_bottom()
                    && supporting_graph(x).is_ok_and(|h| &h == g)
            }
        }
    }
}

/// The `2^k` clauses on an edge of size `k`, ordered with positive
/// polarities first and the first vertex varying slowest.
pub fn clauses_on_edge(e: &Edge) -> Vec<Clause> {
    let vs = e.vertices();
    let k = vs.len();
    assert!(k < 31, "edge too large to enumerate its clauses");
    (0u32..1 << k)
        .map(|bits| {
            let lits = vs
                .iter()
                .enumerate()
                .map(|(i, &v)| Literal::var(v, bits >> (k - 1 - i) & 1 == 0))
                .collect();
            Clause::from_sorted_unchecked(lits)
        })
        .collect()
}

/// Lexicographic `n`-combinations of `0..m`.
#[derive(Clone, Debug)]
struct Combinations {
    m: usize,
    idx: Vec<usize>,
}

impl Combinations {
    fn new(m: usize, n: usize) -> Option<Self> {
        (n <= m).then(|| Combinations {
            m,
            idx: (0..n).collect(),
        })
    }

    fn advance(&mut self) -> bool {
        let n = self.idx.len();
        let mut i = n;
        while i > 0 {
            i -= 1;
            if self.idx[i] < self.m - n + i {
                self.idx[i] += 1;
                for j in i + 1..n {
                    self.idx[j] = self.idx[j - 1] + 1;
                }
                return true;
            }
        }
        false
    }

    fn reset(&mut self) {
        for (j, x) in self.idx.iter_mut().enumerate() {
            *x = j;
        }
    }
}

/// All conjunctions of `n` distinct clauses on `e`.
pub fn cnfs_on_edge(n: u32, e: &Edge) -> Vec<Cnf> {
    let g = MHGraph::new(EdgeMultiset::from_pairs([(e.clone(), n)])).expect("nonempty");
    cnfs_on_graph(&g).collect()
}

/// Lazy enumeration of the CNFs living on a graph.
pub struct CnfsOnGraph {
    clauses: Vec<Vec<Clause>>,
    combos: Vec<Combinations>,
    started: bool,
    done: bool,
}

pub fn cnfs_on_graph(g: &MHGraph) -> CnfsOnGraph {
    let mut clauses = Vec::new();
    let mut combos = Vec::new();
    let mut done = false;
    for (e, n) in g.iter() {
        if e.len() >= 31 {
            done = true;
            break;
        }
        let cs = clauses_on_edge(e);
        match Combinations::new(cs.len(), n as usize) {
            Some(c) => combos.push(c),
            None => done = true,
        }
        clauses.push(cs);
    }
    CnfsOnGraph {
        clauses,
        combos,
        started: false,
        done,
    }
}

impl CnfsOnGraph {
    fn current(&self) -> Cnf {
        let mut out = Vec::new();
        for (cs, combo) in self.clauses.iter().zip(&self.combos) {
            out.extend(combo.idx.iter().map(|&i| cs[i].clone()));
        }
        // clauses of distinct edges have distinct variable sets, so no
        // reduction or merging can occur
        Cnf::from_reduced_clauses(out)
    }
}

impl Iterator for CnfsOnGraph {
    type Item = Cnf;

    fn next(&mut self) -> Option<Cnf> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(self.current());
        }
        // last edge varies fastest
        for i in (0..self.combos.len()).rev() {
            if self.combos[i].advance() {
                return Some(self.current());
            }
            self.combos[i].reset();
        }
        self.done = true;
        None
    }
}

pub fn binomial(m: &BigUint, n: u32) -> BigUint {
    let n_big = BigUint::from(n);
    if &n_big > m {
        return BigUint::zero();
    }
    let mut acc = BigUint::one();
    for i in 0..n {
        acc = acc * (m - BigUint::from(i)) / BigUint::from(i + 1);
    }
    acc
}

/// Number of CNFs on the graph: the product of `C(2^k, n)` over its edges.
pub fn cnf_count(g: &MHGraph) -> BigUint {
    g.iter()
        .map(|(e, n)| binomial(&(BigUint::one() << e.len()), n))
        .product()
}

/// True when some edge of size `k` has multiplicity above `2^k`, which is
/// exactly when the graph's CNF set is empty.
pub fn is_empty_set(g: &MHGraph) -> bool {
    g.iter().any(|(e, n)| e.len() < 32 && u64::from(n) > 1u64 << e.len())
}

/// The graph whose edges are the variable sets of the clauses of `x`.
pub fn supporting_graph(x: &Cnf) -> Result<MHGraph> {
    if x.is_top() || x.is_bottom() {
        return Err(Error::NoSupportingGraph);
    }
    let mut m = EdgeMultiset::new();
    for c in x.clauses() {
        m.insert(Edge::new(c.variables())?, 1);
    }
    MHGraph::new(m)
}

/// Like [`supporting_graph`], mapping the constants to their sentinels.
pub fn supporting_term(x: &Cnf) -> Term {
    if x.is_top() {
        Term::Top
    } else if x.is_bottom() {
        Term::Bottom
    } else {
        Term::Graph(supporting_graph(x).expect("non-constant"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> MHGraph {
        s.parse().unwrap()
    }

    fn cnf(s: &str) -> Cnf {
        s.parse().unwrap()
    }

    #[test]
    fn clauses_on_edges() {
        let cs = clauses_on_edge(&Edge::new([1, 2]).unwrap());
        let text: Vec<String> = cs.iter().map(|c| c.to_string()).collect();
        assert_eq!(text, ["(1,2)", "(1,-2)", "(-1,2)", "(-1,-2)"]);
        assert_eq!(clauses_on_edge(&Edge::new([1]).unwrap()).len(), 2);
        assert_eq!(clauses_on_edge(&Edge::new([1, 2, 3]).unwrap()).len(), 8);
    }

    #[test]
    fn cnfs_on_edges() {
        assert_eq!(cnfs_on_edge(2, &Edge::new([2, 3]).unwrap()).len(), 6);
        let all = cnfs_on_edge(4, &Edge::new([1, 2]).unwrap());
        assert_eq!(all.len(), 1);
        assert!(!crate::cnf::sigma(&all[0]));
        assert!(cnfs_on_edge(5, &Edge::new([1, 2]).unwrap()).is_empty());
    }

    #[test]
    fn cnfs_on_graphs() {
        let xs: BTreeSet<Cnf> = cnfs_on_graph(&g("(1,2)(1,3)")).collect();
        assert_eq!(xs.len(), 16);
        assert!(xs.contains(&cnf("(1,2)(1,3)")));
        assert!(xs.contains(&cnf("(-1,-2)(-1,-3)")));
        let loops: Vec<Cnf> = cnfs_on_graph(&g("(1)")).collect();
        assert_eq!(loops, vec![cnf("(1)"), cnf("(-1)")]);
        assert_eq!(cnfs_on_graph(&g("(1,2)^5")).count(), 0);
    }

    #[test]
    fn counts() {
        assert_eq!(cnf_count(&g("(1,2)(1,3)")), BigUint::from(16u32));
        assert_eq!(cnf_count(&g("(1,2,3)^2")), BigUint::from(28u32));
        assert_eq!(cnf_count(&g("(1)^3")), BigUint::zero());
        assert!(is_empty_set(&g("(1)^3")));
        assert!(is_empty_set(&g("(1,2,3)^9")));
        assert!(!is_empty_set(&g("(1,2)^4")));
    }

    #[test]
    fn supporting_graphs() {
        assert_eq!(supporting_graph(&cnf("(1,-2)(1,2)")).unwrap(), g("(1,2)^2"));
        assert_eq!(supporting_graph(&cnf("(-3)")).unwrap(), g("(3)"));
        assert_eq!(supporting_graph(&cnf("(1,2)(3)")).unwrap(), g("(1,2)(3)"));
        assert_eq!(supporting_graph(&Cnf::top()), Err(Error::NoSupportingGraph));
    }

    #[test]
    fn graph_sets_contain_their_members() {
        let s = CnfSet::Graph(g("(1,2)^2(2,3)"));
        for x in s.members() {
            assert!(s.contains(&x));
        }
        assert!(!s.contains(&cnf("(1,2)(2,3)")));
    }
}
