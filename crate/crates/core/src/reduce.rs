//! Satisfiability-preserving reduction rules and their fixpoint.
//!
//! Every rule inspects only the star of one anchor vertex and removes that
//! vertex, so rules commute with any context `s` of edges not touching it,
//! and repeated application terminates.

use std::collections::BTreeSet;
use std::fmt;

use crate::canon::canonical_form;
use crate::embedding::Term;
use crate::error::{Error, Result};
use crate::mhgraph::{Edge, EdgeMultiset, MHGraph, Vertex};
use crate::rewrite::decompose;
use crate::sat::{SatConfig, SatStatus};

/// Result of a rewrite.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum RewriteOutcome {
    /// The graph is totally satisfiable exactly when every replacement is.
    Exact(Vec<Term>),
    /// An unsatisfiable `lower` member makes the graph unsatisfiable; all
    /// `upper` members totally satisfiable make it totally satisfiable.
    Partial { lower: Vec<Term>, upper: Vec<Term> },
}

impl RewriteOutcome {
    pub fn is_exact(&self) -> bool {
        matches!(self, RewriteOutcome::Exact(_))
    }
}

impl fmt::Display for RewriteOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |ts: &[Term]| {
            ts.iter()
                .map(|t| t.to_string())
                .collect::<Vec<_>>()
                .join(" ; ")
        };
        match self {
            RewriteOutcome::Exact(ts) => write!(f, "exact: {}", join(ts)),
            RewriteOutcome::Partial { lower, upper } => {
                write!(f, "partial: lower {} | upper {}", join(lower), join(upper))
            }
        }
    }
}

/// The reduction rules, in the order the fixpoint tries them.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Rule {
    Leaf,
    Smooth,
    Tuck,
    Triple,
}

impl Rule {
    pub const ALL: [Rule; 4] = [Rule::Leaf, Rule::Smooth, Rule::Tuck, Rule::Triple];

    pub fn name(self) -> &'static str {
        match self {
            Rule::Leaf => "leaf",
            Rule::Smooth => "smooth",
            Rule::Tuck => "tuck",
            Rule::Triple => "triple",
        }
    }

    pub fn apply(self, g: &MHGraph, v: Vertex) -> Option<RewriteOutcome> {
        match self {
            Rule::Leaf => rule_leaf(g, v),
            Rule::Smooth => rule_smooth(g, v),
            Rule::Tuck => rule_tuck(g, v),
            Rule::Triple => rule_triple(g, v),
        }
    }
}

/// The star of `v` as (edge minus `v`, multiplicity), loops giving an empty
/// vertex list.
fn star_shape(g: &MHGraph, v: Vertex) -> Vec<(Vec<Vertex>, u32)> {
    g.iter()
        .filter(|(e, _)| e.contains(v))
        .map(|(e, n)| {
            (
                e.vertices().iter().copied().filter(|&u| u != v).collect(),
                n,
            )
        })
        .collect()
}

fn with_edges(rest: &EdgeMultiset, add: &[(&[Vertex], u32)]) -> Term {
    let mut m = rest.clone();
    for (vs, n) in add {
        m.insert(Edge::new(vs.iter().copied()).expect("nonempty edge"), *n);
    }
    Term::from_multiset(m)
}

/// A vertex in exactly one edge `e` of size `k` with multiplicity `n`: one
/// copy is dropped, `n < 2^k` copies become `⌊n/2⌋` copies of `e − v`, and
/// `n ≥ 2^k` copies are unsatisfiable.
pub fn rule_leaf(g: &MHGraph, v: Vertex) -> Option<RewriteOutcome> {
    let star = star_shape(g, v);
    let [(others, n)] = star.as_slice() else {
        return None;
    };
    let k = others.len() + 1;
    let rest = g.rest(v);
    let full = k < 32 && u64::from(*n) >= 1u64 << k;
    Some(RewriteOutcome::Exact(vec![if *n == 1 {
        Term::from_multiset(rest)
    } else if full {
        Term::Bottom
    } else {
        with_edges(&rest, &[(others, n / 2)])
    }]))
}

/// Two distinct single edges `e`, `f` meeting at a degree-2 vertex merge into
/// `(e ∪ f) − v`.
pub fn rule_smooth(g: &MHGraph, v: Vertex) -> Option<RewriteOutcome> {
    let star = star_shape(g, v);
    let [(a, 1), (b, 1)] = star.as_slice() else {
        return None;
    };
    let merged: BTreeSet<Vertex> = a.iter().chain(b).copied().collect();
    if merged.is_empty() {
        return None;
    }
    let merged: Vec<Vertex> = merged.into_iter().collect();
    Some(RewriteOutcome::Exact(vec![with_edges(
        &g.rest(v),
        &[(&merged, 1)],
    )]))
}

/// Tucking a fin `(v,a)` into a triangle `(v,a,b)`, in four shapes:
/// `(v,a)(v,a,b)` becomes `(a,b)`; `(v,a)(v,b)(v,a,b)` becomes the pair
/// `{(a), (b)}`; `(v,a)(v,a,b)^2` becomes `(a)`; and `(v,a)^2(v,a,b)` is
/// bounded below by `(a)` and above by `(a)(a,b)`.
pub fn rule_tuck(g: &MHGraph, v: Vertex) -> Option<RewriteOutcome> {
    let star = star_shape(g, v);
    let rest = g.rest(v);
    let is_pair = |x: &[Vertex], y: &[Vertex]| x.len() == 1 && y.len() == 2 && y.contains(&x[0]);
    match star.as_slice() {
        [(x, 1), (y, 1)] if is_pair(x, y) => {
            Some(RewriteOutcome::Exact(vec![with_edges(&rest, &[(y, 1)])]))
        }
        [(x, 1), (y, 2)] if is_pair(x, y) => {
            Some(RewriteOutcome::Exact(vec![with_edges(&rest, &[(x, 1)])]))
        }
        [(x, 2), (y, 1)] if is_pair(x, y) => Some(RewriteOutcome::Partial {
            lower: vec![with_edges(&rest, &[(x, 1)])],
            upper: vec![with_edges(&rest, &[(x, 1), (y, 1)])],
        }),
        [(x, 1), (z, 1), (y, 1)]
            if x.len() == 1 && z.len() == 1 && y.len() == 2 && y == &[x[0], z[0]] =>
        {
            Some(RewriteOutcome::Exact(vec![
                with_edges(&rest, &[(x, 1)]),
                with_edges(&rest, &[(z, 1)]),
            ]))
        }
        _ => None,
    }
}

/// Three triangles `(v,a,b)(v,a,c)(v,b,c)` around `v` open into the three
/// graphs with `(a,b)`, `(a,c)` and `(b,c)` respectively.
pub fn rule_triple(g: &MHGraph, v: Vertex) -> Option<RewriteOutcome> {
    let star = star_shape(g, v);
    let [(x, 1), (y, 1), (z, 1)] = star.as_slice() else {
        return None;
    };
    if x.len() != 2 || y.len() != 2 || z.len() != 2 {
        return None;
    }
    let all: BTreeSet<Vertex> = x.iter().chain(y).chain(z).copied().collect();
    if all.len() != 3 {
        return None;
    }
    let rest = g.rest(v);
    Some(RewriteOutcome::Exact(vec![
        with_edges(&rest, &[(x, 1)]),
        with_edges(&rest, &[(y, 1)]),
        with_edges(&rest, &[(z, 1)]),
    ]))
}

/// Which partial rewrites the fixpoint may use.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum PartialMode {
    /// Exact rules only.
    #[default]
    Off,
    /// Follow partial rules' lower bounds (sound for proving unsatisfiability).
    Lower,
    /// Follow partial rules' upper bounds (sound for proving satisfiability).
    Upper,
}

/// First applicable rule: rules in order, anchors in ascending order.
pub fn find_rule(g: &MHGraph, mode: PartialMode) -> Option<(Rule, Vertex, RewriteOutcome)> {
    let vertices = g.vertices();
    for rule in Rule::ALL {
        for &v in &vertices {
            match rule.apply(g, v) {
                Some(o @ RewriteOutcome::Exact(_)) => return Some((rule, v, o)),
                Some(o) if mode != PartialMode::Off => return Some((rule, v, o)),
                _ => {}
            }
        }
    }
    None
}

/// Residues of one fixpoint run.
struct Residues {
    terms: Vec<Term>,
    used_partial: bool,
}

fn run_fixpoint(g: &MHGraph, mode: PartialMode) -> Residues {
    let mut work = vec![Term::Graph(g.clone())];
    let mut done: BTreeSet<Term> = BTreeSet::new();
    let mut used_partial = false;
    while let Some(t) = work.pop() {
        let Term::Graph(h) = &t else {
            if t == Term::Bottom {
                done.insert(t);
            }
            continue;
        };
        match find_rule(h, mode) {
            None => {
                done.insert(canonical_term(h));
            }
            Some((_, _, RewriteOutcome::Exact(rs))) => work.extend(rs),
            Some((_, _, RewriteOutcome::Partial { lower, upper })) => {
                used_partial = true;
                work.extend(if mode == PartialMode::Lower { lower } else { upper });
            }
        }
    }
    Residues {
        terms: done.into_iter().collect(),
        used_partial,
    }
}

fn canonical_term(h: &MHGraph) -> Term {
    Term::Graph(canonical_form(h).map_or_else(|_| h.clone(), |c| c.to_graph()))
}

/// Applies the exact rules until none applies, branching over multi-graph
/// replacements. Residues are irreducible graphs (canonically labeled when
/// small enough) or `FALSE`; the graph is totally satisfiable exactly when
/// every residue is, and an empty residue list means `TRUE`.
pub fn reduce_fixpoint(g: &MHGraph) -> RewriteOutcome {
    RewriteOutcome::Exact(run_fixpoint(g, PartialMode::Off).terms)
}

/// Like [`reduce_fixpoint`], also following partial rules. When one fires
/// the outcome is partial, with the residues of the lower-bound run and of
/// the upper-bound run.
pub fn reduce_fixpoint_partial(g: &MHGraph) -> RewriteOutcome {
    let lower = run_fixpoint(g, PartialMode::Lower);
    if !lower.used_partial {
        return RewriteOutcome::Exact(lower.terms);
    }
    let upper = run_fixpoint(g, PartialMode::Upper);
    RewriteOutcome::Partial {
        lower: lower.terms,
        upper: upper.terms,
    }
}

/// Reduces exactly, then decides each residue by decomposition.
pub fn gamma_reduce_first(g: &MHGraph, cfg: &SatConfig) -> Result<SatStatus> {
    let RewriteOutcome::Exact(residues) = reduce_fixpoint(g) else {
        unreachable!("exact reduction");
    };
    for t in residues {
        cfg.check_deadline()?;
        let sat = match &t {
            Term::Top => true,
            Term::Bottom => false,
            Term::Graph(h) => decompose(h, cfg)?.is_sat(),
        };
        if !sat {
            return Ok(SatStatus::Unsat(None));
        }
    }
    Ok(SatStatus::TotallySat)
}

/// Replaces every copy of a simple edge `(a,b)` by the three triangles
/// `(a,b,c)(a,c,d)(b,c,d)` on two fresh vertices.
pub fn thicken(g: &MHGraph) -> Result<MHGraph> {
    if let Some((e, _)) = g.iter().find(|(e, _)| e.len() != 2) {
        return Err(Error::NotSimple(e.to_string()));
    }
    let mut fresh = g.vertices().last().copied().unwrap_or(0);
    let mut out = EdgeMultiset::new();
    for (e, n) in g.iter() {
        let (a, b) = (e.vertices()[0], e.vertices()[1]);
        for _ in 0..n {
            let (c, d) = (fresh + 1, fresh + 2);
            fresh += 2;
            for tri in [[a, b, c], [a, c, d], [b, c, d]] {
                out.insert(Edge::new(tri).expect("nonempty"), 1);
            }
        }
    }
    MHGraph::new(out)
}
