//! Local rewriting at a vertex and the procedures built on it.
//!
//! A graph `g` with a vertex `v` of degree at least 2 is equisatisfiable to
//! the union, over the 2-partitions `{h1, h2}` of the link of `v`, of
//! `(h1 ∨ h2) ∧ rest`. A vertex of degree 1 can simply be dropped together
//! with its edge.
//!
//! Loops at `v` vanish from the link, but they still constrain the rewrite:
//! under the assignment that falsifies a loop clause the whole side becomes
//! `FALSE`. Each loop copy therefore enters the partitions as a
//! [`LinkItem::Falsum`] token. A side holding one token is the `{(FALSE)}`
//! set; a side holding two is empty, since distinct loop clauses on one
//! vertex have opposite polarities and cannot share a side.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use parking_lot::Mutex;

use crate::canon::{canonical_form, CanonicalForm};
use crate::cnf::{assign, cnf_and_cnf, cnf_or_cnf, Assignment, Cnf, Literal};
use crate::embedding::{clauses_on_edge, cnf_count, is_empty_set, supporting_term, CnfSet, Term};
use crate::error::{Error, Result};
use crate::logic::{graph_and, graph_or};
use crate::mhgraph::{Edge, EdgeMultiset, MHGraph, TwoPartitions, Vertex};
use crate::sat::{gamma_direct, SatConfig, SatStatus};

/// `{x[v] ∨ x[¬v] : x ∈ g}`, straight from the definition.
pub fn vertex_assignment_set(g: &MHGraph, v: Vertex, cfg: &SatConfig) -> Result<CnfSet> {
    if g.degree(v) == 0 {
        return Err(Error::Degree {
            vertex: v,
            degree: 0,
            requirement: "the vertex must belong to an edge",
        });
    }
    let count = cnf_count(g);
    if count > cfg.brute_budget.into() {
        return Err(Error::Budget {
            what: "vertex assignment set",
            count: count.to_string(),
            budget: cfg.brute_budget,
        });
    }
    let pos = Assignment::new([Literal::Pos(v)])?;
    let neg = Assignment::new([Literal::Neg(v)])?;
    Ok(CnfSet::explicit(
        CnfSet::Graph(g.clone())
            .members()
            .map(|x| cnf_or_cnf(&assign(&x, &pos), &assign(&x, &neg))),
    ))
}

/// An element of a link as seen by the partitions.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum LinkItem {
    Edge(Edge),
    /// A loop copy at the rewritten vertex.
    Falsum,
}

/// Link items of `v` with multiplicities, loops included as tokens.
pub fn link_items(g: &MHGraph, v: Vertex) -> Vec<(LinkItem, u32)> {
    let mut items: Vec<(LinkItem, u32)> = g
        .iter()
        .filter(|(e, _)| e.contains(v))
        .filter_map(|(e, n)| e.without(v).map(|f| (LinkItem::Edge(f), n)))
        .collect();
    let loops = g.loops_at(v);
    if loops > 0 {
        items.push((LinkItem::Falsum, loops));
    }
    items
}

/// The CNF set of one side of a partition, `None` when it is empty.
fn side_term(side: &[(LinkItem, u32)]) -> Option<Term> {
    let tokens: u32 = side
        .iter()
        .filter(|(i, _)| *i == LinkItem::Falsum)
        .map(|(_, n)| n)
        .sum();
    match tokens {
        0 => Some(Term::from_multiset(EdgeMultiset::from_pairs(
            side.iter().filter_map(|(i, n)| match i {
                LinkItem::Edge(e) => Some((e.clone(), *n)),
                LinkItem::Falsum => None,
            }),
        ))),
        1 => Some(Term::Bottom),
        _ => None,
    }
}

/// One 2-partition of a link, as the CNF sets of its two sides.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Partition {
    pub first: Term,
    pub second: Term,
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{} ; {}}}", self.first, self.second)
    }
}

/// The 2-partitions of the link of `v` whose sides are both nonempty sets.
pub fn partitions(g: &MHGraph, v: Vertex) -> impl Iterator<Item = Partition> {
    TwoPartitions::new(link_items(g, v)).filter_map(|(a, b)| {
        Some(Partition {
            first: side_term(&a)?,
            second: side_term(&b)?,
        })
    })
}

fn require_rewritable(g: &MHGraph, v: Vertex) -> Result<()> {
    match g.degree(v) {
        0 => Err(Error::Degree {
            vertex: v,
            degree: 0,
            requirement: "the vertex must belong to an edge",
        }),
        1 => Err(Error::Degree {
            vertex: v,
            degree: 1,
            requirement: "drop the leaf edge instead of rewriting",
        }),
        _ => Ok(()),
    }
}

fn rest_set(g: &MHGraph, v: Vertex) -> CnfSet {
    Term::from_multiset(g.rest(v)).to_cnf_set()
}

/// The materialized rewrite, grouped by supporting graph.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct LocalRewriteResult {
    pub groups: BTreeMap<Term, BTreeSet<Cnf>>,
}

impl LocalRewriteResult {
    pub fn union(&self) -> CnfSet {
        CnfSet::explicit(self.groups.values().flatten().cloned())
    }

    pub fn terms(&self) -> impl Iterator<Item = &Term> + '_ {
        self.groups.keys()
    }
}

impl fmt::Display for LocalRewriteResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (t, xs) in &self.groups {
            writeln!(f, "{t}  [{}]", xs.len())?;
            for x in xs {
                writeln!(f, "    {x}")?;
            }
        }
        Ok(())
    }
}

/// Rewrites `g` at `v` (degree at least 2) into the union over link
/// partitions of `(h1 ∨ h2) ∧ rest`.
pub fn local_rewrite(g: &MHGraph, v: Vertex) -> Result<LocalRewriteResult> {
    require_rewritable(g, v)?;
    let rest = rest_set(g, v);
    let mut out = LocalRewriteResult::default();
    for p in partitions(g, v) {
        let or = graph_or(&p.first.to_cnf_set(), &p.second.to_cnf_set());
        for x in graph_and(&or, &rest).members() {
            out.groups.entry(supporting_term(&x)).or_default().insert(x);
        }
    }
    Ok(out)
}

/// Removes the single edge at a degree-1 vertex.
pub fn drop_leaf(g: &MHGraph, v: Vertex) -> Result<EdgeMultiset> {
    let d = g.degree(v);
    if d != 1 {
        return Err(Error::Degree {
            vertex: v,
            degree: d,
            requirement: "only a degree-1 vertex can be dropped",
        });
    }
    Ok(g.rest(v))
}

/// Vertex of minimum degree, smallest id on ties.
pub fn choose_vertex(g: &MHGraph) -> Vertex {
    g.vertices()
        .into_iter()
        .min_by_key(|&v| (g.degree(v), v))
        .expect("graphs have vertices")
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ProcedureStatus {
    TotallySat,
    Unsat,
    Inconclusive,
}

/// A decision taken by a procedure: the graph, the vertex rewritten, and the
/// partition examined.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TraceStep {
    pub graph: MHGraph,
    pub vertex: Vertex,
    pub partition: Option<Partition>,
    pub note: String,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ProcedureResult {
    pub status: ProcedureStatus,
    pub trace: Vec<TraceStep>,
}

fn child(side: &Term, rest: &EdgeMultiset) -> Term {
    side.and_multiset(rest)
}

fn term_status(t: &Term, cfg: &SatConfig) -> Result<bool> {
    Ok(match t {
        Term::Top => true,
        Term::Bottom => false,
        Term::Graph(h) => gamma_direct(h, cfg)?.is_sat(),
    })
}

/// Checks each partition's two children directly. A partition with both
/// children unsatisfiable makes the result inconclusive; otherwise the
/// graph is totally satisfiable.
pub fn check_nonrecursive(g: &MHGraph, v: Vertex, cfg: &SatConfig) -> Result<ProcedureResult> {
    require_rewritable(g, v)?;
    let mut trace = Vec::new();
    if is_empty_set(g) {
        return Ok(ProcedureResult {
            status: ProcedureStatus::Unsat,
            trace,
        });
    }
    let rest = g.rest(v);
    for p in partitions(g, v) {
        let c1 = child(&p.first, &rest);
        let c2 = child(&p.second, &rest);
        let sat = term_status(&c1, cfg)? || term_status(&c2, cfg)?;
        let doubly_unsat = !sat;
        trace.push(TraceStep {
            graph: g.clone(),
            vertex: v,
            partition: Some(p),
            note: if doubly_unsat {
                "both children unsatisfiable".into()
            } else {
                "a child is totally satisfiable".into()
            },
        });
        if doubly_unsat {
            return Ok(ProcedureResult {
                status: ProcedureStatus::Inconclusive,
                trace,
            });
        }
    }
    Ok(ProcedureResult {
        status: ProcedureStatus::TotallySat,
        trace,
    })
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
enum MemoKey {
    Canonical(CanonicalForm),
    Labeled(MHGraph),
}

fn memo_key(g: &MHGraph) -> MemoKey {
    canonical_form(g).map_or_else(|_| MemoKey::Labeled(g.clone()), MemoKey::Canonical)
}

struct Decomposer<'a> {
    cfg: &'a SatConfig,
    memo: Mutex<HashMap<MemoKey, bool>>,
}

impl Decomposer<'_> {
    fn status(&self, t: &Term, depth: usize) -> Result<bool> {
        match t {
            Term::Top => Ok(true),
            Term::Bottom => Ok(false),
            Term::Graph(h) => self.graph_status(h, depth),
        }
    }

    fn graph_status(&self, g: &MHGraph, depth: usize) -> Result<bool> {
        let key = memo_key(g);
        if let Some(&sat) = self.memo.lock().get(&key) {
            return Ok(sat);
        }
        if let (Some(cache), MemoKey::Canonical(k)) = (&self.cfg.cache, &key) {
            if let Some(sat) = cache.get(k) {
                return Ok(sat);
            }
        }
        let sat = self.run(g, depth)?.is_sat();
        self.memo.lock().insert(key.clone(), sat);
        if let (Some(cache), MemoKey::Canonical(k)) = (&self.cfg.cache, key) {
            cache.insert(k, sat);
        }
        Ok(sat)
    }

    fn run(&self, g: &MHGraph, depth: usize) -> Result<SatStatus> {
        self.cfg.check_deadline()?;
        if is_empty_set(g) {
            return Ok(SatStatus::Unsat(None));
        }
        if g.vertex_count() <= 3 || depth >= self.cfg.max_depth {
            return gamma_direct(g, self.cfg);
        }
        let v = choose_vertex(g);
        if g.degree(v) == 1 {
            let (leaf, _) = g
                .iter()
                .find(|(e, _)| e.contains(v))
                .expect("degree 1");
            let Some(rest) = g.rest(v).into_graph() else {
                return Ok(SatStatus::TotallySat);
            };
            return Ok(match self.run(&rest, depth + 1)? {
                SatStatus::TotallySat => SatStatus::TotallySat,
                SatStatus::Unsat(w) => SatStatus::Unsat(w.map(|w| {
                    let c = clauses_on_edge(leaf).swap_remove(0);
                    cnf_and_cnf(&w, &Cnf::new([c]).expect("one clause"))
                })),
            });
        }
        let rest = g.rest(v);
        for p in partitions(g, v) {
            if self.status(&child(&p.first, &rest), depth + 1)? {
                continue;
            }
            if self.status(&child(&p.second, &rest), depth + 1)? {
                continue;
            }
            // both children unsatisfiable: no conclusion from the rewrite
            return gamma_direct(g, self.cfg);
        }
        Ok(SatStatus::TotallySat)
    }
}

/// Recursive decomposition: a graph is totally satisfiable when every
/// partition of the link at its lowest-degree vertex has a totally
/// satisfiable child; when some partition has two unsatisfiable children
/// the graph is checked directly. Small graphs (at most three vertices) are
/// checked directly. Verdicts of subgraphs are memoized by canonical form.
pub fn decompose(g: &MHGraph, cfg: &SatConfig) -> Result<SatStatus> {
    let d = Decomposer {
        cfg,
        memo: Mutex::new(HashMap::new()),
    };
    d.run(g, 0)
}

/// Proves total satisfiability by graph completion: every graph supporting
/// some CNF of the rewrite must be totally satisfiable. Each completed graph
/// is itself checked by completion up to `depth` more levels, and directly
/// when that does not settle it.
pub fn check_completion(
    g: &MHGraph,
    v: Vertex,
    depth: usize,
    cfg: &SatConfig,
) -> Result<ProcedureResult> {
    require_rewritable(g, v)?;
    cfg.check_deadline()?;
    let rewrite = local_rewrite(g, v)?;
    let mut trace = Vec::new();
    for t in rewrite.terms() {
        let sat = match t {
            Term::Top => true,
            Term::Bottom => false,
            Term::Graph(h) => {
                let w = choose_completion_vertex(h);
                let by_completion = match (depth, w) {
                    (d, Some(w)) if d > 0 => {
                        check_completion(h, w, d - 1, cfg)?.status == ProcedureStatus::TotallySat
                    }
                    _ => false,
                };
                by_completion || gamma_direct(h, cfg)?.is_sat()
            }
        };
        trace.push(TraceStep {
            graph: g.clone(),
            vertex: v,
            partition: None,
            note: format!(
                "completed graph {t} is {}",
                if sat { "totally satisfiable" } else { "unsatisfiable" }
            ),
        });
        if !sat {
            return Ok(ProcedureResult {
                status: ProcedureStatus::Inconclusive,
                trace,
            });
        }
    }
    let status = if rewrite.groups.is_empty() {
        // nothing survives the rewrite: the graph's CNF set is empty
        ProcedureStatus::Unsat
    } else {
        ProcedureStatus::TotallySat
    };
    Ok(ProcedureResult { status, trace })
}

fn choose_completion_vertex(g: &MHGraph) -> Option<Vertex> {
    g.vertices()
        .into_iter()
        .filter(|&v| g.degree(v) >= 2)
        .min_by_key(|&v| (g.degree(v), v))
}
