//! Deciding total satisfiability of a graph.
//!
//! Three direct methods are provided: brute-force enumeration of the graph's
//! CNFs, a clause-selection cover search, and the translation of the whole
//! CNF set into one formula over fresh variables. [`gamma`] dispatches
//! between them and the recursive procedures of [`crate::rewrite`] and
//! [`crate::reduce`].

use std::collections::HashMap;
use std::fmt;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::sync::Arc;
use std::time::Instant;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use parking_lot::{Mutex, RwLock};
use rayon::prelude::*;

use crate::canon::{canonical_form, CanonicalForm};
use crate::cnf::{sigma, Clause, Cnf, Literal};
use crate::embedding::{cnf_count, cnfs_on_graph, is_empty_set};
use crate::error::{Error, Result};
use crate::mhgraph::{MHGraph, Vertex};

/// Outcome of a total-satisfiability check.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum SatStatus {
    TotallySat,
    /// An unsatisfiable member, when one exists and was recorded. Empty
    /// graphs and cache hits carry no witness.
    Unsat(Option<Cnf>),
}

impl SatStatus {
    pub fn is_sat(&self) -> bool {
        matches!(self, SatStatus::TotallySat)
    }

    pub fn witness(&self) -> Option<&Cnf> {
        match self {
            SatStatus::Unsat(w) => w.as_ref(),
            SatStatus::TotallySat => None,
        }
    }

    pub fn from_bool(sat: bool) -> Self {
        if sat {
            SatStatus::TotallySat
        } else {
            SatStatus::Unsat(None)
        }
    }

    pub fn label(&self) -> &'static str {
        if self.is_sat() {
            "SAT"
        } else {
            "UNSAT"
        }
    }
}

impl fmt::Display for SatStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Strategy {
    Brute,
    CoverSearch,
    Decompose,
    ReduceFirst,
    Auto,
}

impl Strategy {
    pub fn name(self) -> &'static str {
        match self {
            Strategy::Brute => "brute",
            Strategy::CoverSearch => "cover",
            Strategy::Decompose => "decompose",
            Strategy::ReduceFirst => "reduce",
            Strategy::Auto => "auto",
        }
    }
}

/// Knobs shared by the decision procedures.
#[derive(Clone, Debug)]
pub struct SatConfig {
    pub strategy: Strategy,
    /// Most CNFs the brute-force check will enumerate.
    pub brute_budget: u64,
    /// Most CNFs the fresh-variable translation will conjoin.
    pub tau_budget: u64,
    /// Most vertices the cover search accepts.
    pub cover_vertex_bound: usize,
    /// `Auto` uses a direct method up to this total multiplicity...
    pub auto_direct_max_edges: u32,
    /// ...and decomposition up to this one, reducing first beyond it.
    pub auto_decompose_max_edges: u32,
    /// Recursion depth of decomposition before falling back to a direct
    /// check.
    pub max_depth: usize,
    pub deadline: Option<Instant>,
    pub cache: Option<Arc<SatCache>>,
}

impl Default for SatConfig {
    fn default() -> Self {
        SatConfig {
            strategy: Strategy::Auto,
            brute_budget: 1_000_000,
            tau_budget: 1_000,
            cover_vertex_bound: 24,
            auto_direct_max_edges: 6,
            auto_decompose_max_edges: 20,
            max_depth: 32,
            deadline: None,
            cache: None,
        }
    }
}

impl SatConfig {
    pub fn with_strategy(strategy: Strategy) -> Self {
        SatConfig {
            strategy,
            ..Self::default()
        }
    }

    pub(crate) fn check_deadline(&self) -> Result<()> {
        match self.deadline {
            Some(d) if Instant::now() >= d => Err(Error::Timeout),
            _ => Ok(()),
        }
    }
}

/// Memo of verdicts keyed by canonical form, optionally persisted as lines
/// `<canonical-form>\t<SAT|UNSAT>`. Inserting the same verdict twice is
/// harmless, so concurrent writers need no coordination beyond the locks.
#[derive(Debug, Default)]
pub struct SatCache {
    map: RwLock<HashMap<CanonicalForm, bool>>,
    file: Option<Mutex<File>>,
}

impl SatCache {
    pub fn new() -> Self {
        Self::default()
    }

    /// Loads `path` if it exists and appends new verdicts to it.
    pub fn open(path: &Path) -> Result<Self> {
        let mut map = HashMap::new();
        if path.exists() {
            for (i, line) in BufReader::new(File::open(path)?).lines().enumerate() {
                let line = line?;
                if line.trim().is_empty() {
                    continue;
                }
                let (key, status) = line.split_once('\t').ok_or_else(|| {
                    Error::Invalid(format!("cache line {}: missing tab", i + 1))
                })?;
                let g: MHGraph = key.parse()?;
                let sat = match status.trim() {
                    "SAT" => true,
                    "UNSAT" => false,
                    other => {
                        return Err(Error::Invalid(format!(
                            "cache line {}: unknown status {other:?}",
                            i + 1
                        )))
                    }
                };
                map.insert(canonical_form(&g)?, sat);
            }
        }
        let file = OpenOptions::new().create(true).append(true).open(path)?;
        Ok(SatCache {
            map: RwLock::new(map),
            file: Some(Mutex::new(file)),
        })
    }

    pub fn get(&self, key: &CanonicalForm) -> Option<bool> {
        self.map.read().get(key).copied()
    }

    pub fn insert(&self, key: CanonicalForm, sat: bool) {
        let line = format!("{key}\t{}\n", if sat { "SAT" } else { "UNSAT" });
        let fresh = self.map.write().insert(key, sat).is_none();
        if fresh {
            if let Some(f) = &self.file {
                // best effort: a failed append only loses memoization
                let _ = f.lock().write_all(line.as_bytes());
            }
        }
    }

    pub fn len(&self) -> usize {
        self.map.read().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

fn budget_check(g: &MHGraph, budget: u64, what: &'static str) -> Result<BigUint> {
    let count = cnf_count(g);
    if count > BigUint::from(budget) {
        return Err(Error::Budget {
            what,
            count: count.to_string(),
            budget,
        });
    }
    Ok(count)
}

/// Enumerates every CNF on the graph and checks each one.
pub fn gamma_brute(g: &MHGraph, cfg: &SatConfig) -> Result<SatStatus> {
    budget_check(g, cfg.brute_budget, "brute-force enumeration")?;
    let mut members = cnfs_on_graph(g);
    let mut any = false;
    loop {
        cfg.check_deadline()?;
        let batch: Vec<Cnf> = members.by_ref().take(4096).collect();
        if batch.is_empty() {
            break;
        }
        any = true;
        if let Some(w) = batch.par_iter().find_first(|x| !sigma(x)) {
            return Ok(SatStatus::Unsat(Some(w.clone())));
        }
    }
    Ok(if any {
        SatStatus::TotallySat
    } else {
        SatStatus::Unsat(None)
    })
}

struct CoverEdge {
    // indices into the vertex list, ascending
    vars: Vec<usize>,
    cap: u32,
    chosen: Vec<bool>,
    forbidden: Vec<bool>,
}

impl CoverEdge {
    /// The clause on this edge falsified by assignment `a`: bit `k-1-i` of
    /// the pattern is the value of the edge's `i`-th vertex.
    fn falsified_by(&self, a: usize) -> usize {
        let k = self.vars.len();
        let mut p = 0;
        for (i, &v) in self.vars.iter().enumerate() {
            p |= (a >> v & 1) << (k - 1 - i);
        }
        p
    }

    fn fixed_bits(&self, p: usize) -> (usize, usize) {
        let k = self.vars.len();
        let mut mask = 0;
        let mut value = 0;
        for (i, &v) in self.vars.iter().enumerate() {
            mask |= 1 << v;
            value |= (p >> (k - 1 - i) & 1) << v;
        }
        (mask, value)
    }
}

struct Cover<'a> {
    n: usize,
    edges: Vec<CoverEdge>,
    covered: Vec<u32>,
    uncovered: usize,
    cfg: &'a SatConfig,
    nodes: u64,
}

impl Cover<'_> {
    fn toggle(&mut self, e: usize, p: usize, on: bool) {
        let (mask, value) = self.edges[e].fixed_bits(p);
        let free = ((1usize << self.n) - 1) & !mask;
        let mut s = 0usize;
        loop {
            let a = value | s;
            if on {
                self.covered[a] += 1;
                if self.covered[a] == 1 {
                    self.uncovered -= 1;
                }
            } else {
                self.covered[a] -= 1;
                if self.covered[a] == 0 {
                    self.uncovered += 1;
                }
            }
            if s == free {
                break;
            }
            s = (s.wrapping_sub(free)) & free;
        }
        let edge = &mut self.edges[e];
        edge.chosen[p] = on;
        if on {
            edge.cap -= 1;
        } else {
            edge.cap += 1;
        }
    }

    fn capacity_bound(&self) -> usize {
        self.edges
            .iter()
            .map(|e| (e.cap as usize) << (self.n - e.vars.len()))
            .sum()
    }

    fn options(&self, a: usize, out: &mut Vec<(usize, usize)>) {
        out.clear();
        for (i, e) in self.edges.iter().enumerate() {
            if e.cap == 0 {
                continue;
            }
            let p = e.falsified_by(a);
            if !e.chosen[p] && !e.forbidden[p] {
                out.push((i, p));
            }
        }
    }

    /// True when the chosen clauses can be extended to a full cover.
    fn search(&mut self) -> Result<bool> {
        self.nodes += 1;
        if self.nodes.is_multiple_of(1024) {
            self.cfg.check_deadline()?;
        }
        if self.uncovered == 0 {
            return Ok(true);
        }
        if self.capacity_bound() < self.uncovered {
            return Ok(false);
        }
        let mut best: Option<Vec<(usize, usize)>> = None;
        let mut opts = Vec::new();
        for a in 0..self.covered.len() {
            if self.covered[a] != 0 {
                continue;
            }
            self.options(a, &mut opts);
            if best.as_ref().is_none_or(|b| opts.len() < b.len()) {
                best = Some(opts.clone());
                if opts.len() <= 1 {
                    break;
                }
            }
        }
        let branch = best.expect("an uncovered assignment exists");
        let mut found = false;
        for &(e, p) in &branch {
            self.toggle(e, p, true);
            if self.search()? {
                found = true;
                break;
            }
            self.toggle(e, p, false);
            // later siblings may not reuse this clause: any cover with it
            // was already explored
            self.edges[e].forbidden[p] = true;
        }
        if !found {
            for &(e, p) in &branch {
                self.edges[e].forbidden[p] = false;
            }
        } else {
            for &(e, p) in &branch {
                if !self.edges[e].chosen[p] {
                    self.edges[e].forbidden[p] = false;
                }
            }
        }
        Ok(found)
    }
}

/// Searches for an unsatisfiable member directly: a CNF is unsatisfiable
/// exactly when the assignments falsifying its clauses cover all `2^n`
/// assignments, so the search picks clauses per edge (respecting
/// multiplicities) to cover the space.
pub fn gamma_cover(g: &MHGraph, cfg: &SatConfig) -> Result<SatStatus> {
    let vertices: Vec<Vertex> = g.vertices().into_iter().collect();
    let n = vertices.len();
    if n > cfg.cover_vertex_bound {
        return Err(Error::VertexBound {
            vertices: n,
            bound: cfg.cover_vertex_bound,
        });
    }
    if is_empty_set(g) {
        return Ok(SatStatus::Unsat(None));
    }
    let index: HashMap<Vertex, usize> = vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let edges: Vec<CoverEdge> = g
        .iter()
        .map(|(e, m)| CoverEdge {
            vars: e.vertices().iter().map(|v| index[v]).collect(),
            cap: m,
            chosen: vec![false; 1 << e.len()],
            forbidden: vec![false; 1 << e.len()],
        })
        .collect();
    let mut cover = Cover {
        n,
        edges,
        covered: vec![0; 1 << n],
        uncovered: 1 << n,
        cfg,
        nodes: 0,
    };
    if !cover.search()? {
        return Ok(SatStatus::TotallySat);
    }
    // fill the remaining multiplicities with any unused clauses
    let mut clauses = Vec::new();
    for ((e, _), ce) in g.iter().zip(&cover.edges) {
        let mut left = ce.cap;
        for p in 0..ce.chosen.len() {
            if ce.chosen[p] || left > 0 {
                if !ce.chosen[p] {
                    left -= 1;
                }
                clauses.push(clause_from_pattern(e.vertices(), p));
            }
        }
    }
    Ok(SatStatus::Unsat(Some(
        Cnf::new(clauses).expect("nonempty selection"),
    )))
}

fn clause_from_pattern(vs: &[Vertex], p: usize) -> Clause {
    let k = vs.len();
    let lits = vs
        .iter()
        .enumerate()
        .map(|(i, &v)| Literal::var(v, p >> (k - 1 - i) & 1 == 0))
        .collect::<Vec<_>>();
    Clause::new(lits).expect("nonempty")
}

/// Conjunction of all CNFs on the graph, each over its own fresh copy of
/// the variables. It is satisfiable exactly when the graph is totally
/// satisfiable.
pub fn tau_translate(g: &MHGraph, cfg: &SatConfig) -> Result<Cnf> {
    let count = budget_check(g, cfg.tau_budget, "fresh-variable translation")?;
    if count.to_u64() == Some(0) {
        return Ok(Cnf::bottom());
    }
    let vertices: Vec<Vertex> = g.vertices().into_iter().collect();
    let rank: HashMap<Vertex, u32> = vertices
        .iter()
        .enumerate()
        .map(|(i, &v)| (v, i as u32))
        .collect();
    let width = vertices.len() as u32;
    let mut clauses = Vec::new();
    for (j, x) in cnfs_on_graph(g).enumerate() {
        let offset = j as u32 * width + 1;
        for c in x.clauses() {
            let lits: Vec<Literal> = c
                .literals()
                .iter()
                .map(|&l| {
                    let v = rank[&l.variable().expect("variable literal")] + offset;
                    Literal::var(v, l.is_positive())
                })
                .collect();
            clauses.push(Clause::new(lits)?);
        }
    }
    Cnf::new(clauses)
}

/// The best direct check available: cover search within its vertex bound,
/// brute force otherwise.
pub fn gamma_direct(g: &MHGraph, cfg: &SatConfig) -> Result<SatStatus> {
    match gamma_cover(g, cfg) {
        Err(Error::VertexBound { .. }) => gamma_brute(g, cfg),
        r => r,
    }
}

fn run(g: &MHGraph, strategy: Strategy, cfg: &SatConfig) -> Result<SatStatus> {
    match strategy {
        Strategy::Brute => gamma_brute(g, cfg),
        Strategy::CoverSearch => gamma_cover(g, cfg),
        Strategy::Decompose => crate::rewrite::decompose(g, cfg),
        Strategy::ReduceFirst => crate::reduce::gamma_reduce_first(g, cfg),
        Strategy::Auto => unreachable!("resolved by the caller"),
    }
}

/// Decides total satisfiability with the configured strategy. `Auto` picks
/// by total multiplicity and falls back to the other methods when the first
/// choice refuses.
pub fn gamma(g: &MHGraph, cfg: &SatConfig) -> Result<SatStatus> {
    let key = cfg.cache.as_ref().and_then(|_| canonical_form(g).ok());
    if let (Some(cache), Some(k)) = (&cfg.cache, &key) {
        if let Some(sat) = cache.get(k) {
            return Ok(SatStatus::from_bool(sat));
        }
    }
    let order: Vec<Strategy> = if cfg.strategy == Strategy::Auto {
        let edges = g.total_multiplicity();
        let first = if edges <= cfg.auto_direct_max_edges {
            if cnf_count(g) <= BigUint::from(cfg.brute_budget) {
                Strategy::Brute
            } else {
                Strategy::CoverSearch
            }
        } else if edges <= cfg.auto_decompose_max_edges {
            Strategy::Decompose
        } else {
            Strategy::ReduceFirst
        };
        let mut order = vec![first];
        for s in [
            Strategy::CoverSearch,
            Strategy::Brute,
            Strategy::Decompose,
            Strategy::ReduceFirst,
        ] {
            if !order.contains(&s) {
                order.push(s);
            }
        }
        order
    } else {
        vec![cfg.strategy]
    };
    let mut last = None;
    for s in order {
        match run(g, s, cfg) {
            Ok(status) => {
                if let (Some(cache), Some(k)) = (&cfg.cache, key) {
                    cache.insert(k, status.is_sat());
                }
                return Ok(status);
            }
            Err(Error::Timeout) => return Err(Error::Timeout),
            Err(e) => last = Some(e),
        }
    }
    Err(last.expect("at least one strategy ran"))
}
