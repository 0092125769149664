//! Disjunction and conjunction of CNF sets, total satisfiability of general
//! sets, equi-implication checks, and bounded unions.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::cnf::{cnf_and_cnf, cnf_or_cnf, sigma, Cnf, Literal};
use crate::embedding::{supporting_term, CnfSet, Term};
use crate::error::{Error, Result};
use crate::sat::{self, SatConfig};

/// How a disjunction of two CNFs is brought back to normal form.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum Normalization {
    /// Distribute and drop tautological clauses only.
    #[default]
    Distributive,
    /// Additionally apply subsumption and merge clause pairs differing in
    /// one literal's polarity (see [`Cnf::simplified`]).
    Simplified,
}

impl Normalization {
    fn or(self, x: &Cnf, y: &Cnf) -> Cnf {
        let z = cnf_or_cnf(x, y);
        match self {
            Normalization::Distributive => z,
            Normalization::Simplified => z.simplified(),
        }
    }
}

/// `{x ∨ y : x ∈ s1, y ∈ s2}`, materialized.
pub fn graph_or(s1: &CnfSet, s2: &CnfSet) -> CnfSet {
    graph_or_with(s1, s2, Normalization::Distributive)
}

pub fn graph_or_with(s1: &CnfSet, s2: &CnfSet, norm: Normalization) -> CnfSet {
    if s1.is_empty() || s2.is_empty() {
        return CnfSet::Empty;
    }
    let right: Vec<Cnf> = s2.members().collect();
    let mut out = BTreeSet::new();
    for x in s1.members() {
        for y in &right {
            out.insert(norm.or(&x, y));
        }
    }
    CnfSet::explicit(out)
}

/// `{x ∧ y : x ∈ s1, y ∈ s2}`. Two graph-backed sets conjoin to the graph
/// of the multiset sum of their edges, without enumeration; this identifies
/// products that pick the same clause twice on a shared edge with members
/// of the summed graph, which does not change total satisfiability when the
/// sum is nonempty.
pub fn graph_and(s1: &CnfSet, s2: &CnfSet) -> CnfSet {
    if s1.is_empty() || s2.is_empty() {
        return CnfSet::Empty;
    }
    match (s1, s2) {
        (CnfSet::Top, s) | (s, CnfSet::Top) => s.clone(),
        (CnfSet::Bottom, _) | (_, CnfSet::Bottom) => CnfSet::Bottom,
        (CnfSet::Graph(a), CnfSet::Graph(b)) => CnfSet::Graph(a.and(b)),
        _ => {
            let right: Vec<Cnf> = s2.members().collect();
            let mut out = BTreeSet::new();
            for x in s1.members() {
                for y in &right {
                    out.insert(cnf_and_cnf(&x, y));
                }
            }
            CnfSet::explicit(out)
        }
    }
}

/// Total satisfiability of a set: nonempty, every member satisfiable.
pub fn gamma(s: &CnfSet) -> Result<bool> {
    gamma_with(s, &SatConfig::default())
}

pub fn gamma_with(s: &CnfSet, cfg: &SatConfig) -> Result<bool> {
    Ok(match s {
        CnfSet::Empty => false,
        CnfSet::Top => true,
        CnfSet::Bottom => false,
        CnfSet::Explicit(xs) => !xs.is_empty() && xs.iter().all(sigma),
        CnfSet::Graph(g) => sat::gamma(g, cfg)?.is_sat(),
    })
}

/// ⊥-criterion: every unsatisfiable member of `s1` is matched by some
/// unsatisfiable member of `s2`.
pub fn equi_implies_bot(s1: &CnfSet, s2: &CnfSet) -> bool {
    let s1_has_unsat = s1.members().any(|x| !sigma(&x));
    !s1_has_unsat || s2.members().any(|x| !sigma(&x))
}

/// Most variables the A⊥-criterion will enumerate assignments over.
pub const ABOT_VARIABLE_BOUND: usize = 12;

/// A⊥-criterion: every member of `s1` has a partner in `s2` that is falsified
/// by every total assignment falsifying it.
pub fn equi_implies_abot(s1: &CnfSet, s2: &CnfSet) -> Result<bool> {
    let xs: Vec<Cnf> = s1.members().collect();
    let ys: Vec<Cnf> = s2.members().collect();
    let vars: BTreeSet<u32> = xs.iter().chain(&ys).flat_map(|x| x.variables()).collect();
    if vars.len() > ABOT_VARIABLE_BOUND {
        return Err(Error::VariableBound(vars.len()));
    }
    let index: BTreeMap<u32, usize> = vars.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let n = vars.len();
    let targets: Vec<Vec<u64>> = ys.iter().map(|y| falsified(y, &index, n)).collect();
    Ok(xs.iter().all(|x| {
        let fx = falsified(x, &index, n);
        targets
            .iter()
            .any(|fy| fx.iter().zip(fy).all(|(a, b)| a & !b == 0))
    }))
}

/// Bitset of the total assignments (over `n` indexed variables) falsifying
/// `x`.
fn falsified(x: &Cnf, index: &BTreeMap<u32, usize>, n: usize) -> Vec<u64> {
    let size = 1usize << n;
    let mut bits = vec![0u64; size.div_ceil(64)];
    if x.is_top() {
        return bits;
    }
    if x.is_bottom() {
        for a in 0..size {
            bits[a / 64] |= 1 << (a % 64);
        }
        return bits;
    }
    // a clause is falsified when every literal is false
    let patterns: Vec<(usize, usize)> = x
        .clauses()
        .iter()
        .map(|c| {
            let mut mask = 0;
            let mut value = 0;
            for &l in c.literals() {
                let (v, falsifying_value) = match l {
                    Literal::Pos(v) => (v, 0),
                    Literal::Neg(v) => (v, 1),
                    _ => unreachable!("reduced clauses carry no constants"),
                };
                mask |= 1 << index[&v];
                value |= falsifying_value << index[&v];
            }
            (mask, value)
        })
        .collect();
    for a in 0..size {
        if patterns.iter().any(|&(m, v)| a & m == v) {
            bits[a / 64] |= 1 << (a % 64);
        }
    }
    bits
}

/// Lower and upper bounds, as unions of graphs and sentinels, on a set of
/// CNFs that need not itself be a union of graphs.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BoundedUnion {
    pub lower: Vec<Term>,
    pub upper: Vec<Term>,
    pub exact: bool,
}

impl BoundedUnion {
    /// Groups an explicit set by supporting graph. Every group's graph goes
    /// into the upper bound; the lower bound keeps those whose whole CNF set
    /// lies inside `s`.
    pub fn complete(s: &CnfSet) -> BoundedUnion {
        let mut groups: BTreeMap<Term, BTreeSet<Cnf>> = BTreeMap::new();
        for x in s.members() {
            groups.entry(supporting_term(&x)).or_default().insert(x);
        }
        let mut lower = Vec::new();
        let mut upper = Vec::new();
        for (t, xs) in groups {
            let full = match &t {
                Term::Top | Term::Bottom => true,
                Term::Graph(g) => {
                    let set = CnfSet::Graph(g.clone());
                    set.count() == num_bigint::BigUint::from(xs.len())
                        && set.members().all(|y| xs.contains(&y))
                }
            };
            if full {
                lower.push(t.clone());
            }
            upper.push(t);
        }
        let exact = lower == upper;
        BoundedUnion {
            lower,
            upper,
            exact,
        }
    }
}

impl fmt::Display for BoundedUnion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |ts: &[Term]| {
            if ts.is_empty() {
                "EMPTY".to_string()
            } else {
                ts.iter()
                    .map(|t| t.to_string())
                    .collect::<Vec<_>>()
                    .join(" | ")
            }
        };
        if self.exact {
            write!(f, "{}", join(&self.lower))
        } else {
            write!(f, "lower {} ; upper {}", join(&self.lower), join(&self.upper))
        }
    }
}

/// Disjunction of two graphs (or sentinels) bounded by graph unions.
pub fn bounded_or(t1: &Term, t2: &Term) -> BoundedUnion {
    bounded_or_with(t1, t2, Normalization::Distributive)
}

pub fn bounded_or_with(t1: &Term, t2: &Term, norm: Normalization) -> BoundedUnion {
    BoundedUnion::complete(&graph_or_with(&t1.to_cnf_set(), &t2.to_cnf_set(), norm))
}
