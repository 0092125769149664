//! Generation of small graphs up to isomorphism and their classification.
//!
//! Generation works on a fixed number `n` of vertex slots. A graph is a
//! vector of multiplicities indexed by the candidate edges on the slots, and
//! graphs are grown one edge at a time, keeping one representative per
//! isomorphism class at each total multiplicity. The representative key is
//! the smallest multiplicity vector over all slot permutations.

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};
use std::fmt;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_traits::Zero;
use rayon::prelude::*;

use crate::canon::{canonical_form, CanonicalForm};
use crate::catalog::{parse_graph_list, ListEntry};
use crate::embedding::Term;
use crate::error::{Error, Result};
use crate::mhgraph::{Edge, EdgeMultiset, MHGraph};
use crate::reduce::{reduce_fixpoint, RewriteOutcome};
use crate::sat::{gamma, gamma_direct, SatConfig, SatStatus};

/// Largest vertex count generated for multi-hypergraphs.
pub const MAX_MULTI_VERTICES: usize = 6;
/// Largest vertex count generated for simple graphs.
pub const MAX_SIMPLE_VERTICES: usize = 7;

/// Conjunctive filters on generated graphs.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GenerationFilter {
    pub min_vertices: usize,
    pub max_vertices: usize,
    pub max_edge_size: usize,
    /// Loops count once towards the degree of their vertex.
    pub min_degree: u32,
    pub connected: bool,
    /// Edges of size `k` have multiplicity below `2^k`.
    pub mult_bound: bool,
    /// Cap on total multiplicity.
    pub max_edges: Option<u32>,
    /// Plain graphs: edges of size two, multiplicity one.
    pub simple: bool,
    /// Refuse when the estimated number of generated graphs exceeds this.
    pub budget: u64,
}

impl Default for GenerationFilter {
    fn default() -> Self {
        GenerationFilter {
            min_vertices: 1,
            max_vertices: 5,
            max_edge_size: 3,
            min_degree: 2,
            connected: true,
            mult_bound: true,
            max_edges: None,
            simple: false,
            budget: 20_000_000,
        }
    }
}

impl GenerationFilter {
    /// Connected simple graphs with no degree requirement.
    pub fn simple_graphs(max_vertices: usize) -> Self {
        GenerationFilter {
            max_vertices,
            max_edge_size: 2,
            min_degree: 0,
            simple: true,
            ..Self::default()
        }
    }

    /// Connected multi-hypergraphs with the default edge filters.
    pub fn multi(max_vertices: usize) -> Self {
        GenerationFilter {
            max_vertices,
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if self.max_vertices == 0 || self.min_vertices == 0 || self.max_edge_size == 0 {
            return Err(Error::Invalid(
                "vertex and edge-size bounds must be positive".into(),
            ));
        }
        if self.max_edges == Some(0) {
            return Err(Error::Invalid("edge cap must be positive".into()));
        }
        let limit = if self.simple {
            MAX_SIMPLE_VERTICES
        } else {
            MAX_MULTI_VERTICES
        };
        if self.max_vertices > limit {
            return Err(Error::Budget {
                what: "generated graphs",
                count: format!("~{}", self.estimate()),
                budget: self.budget,
            });
        }
        Ok(())
    }

    /// Rough number of isomorphism classes generated: labeled multiplicity
    /// vectors divided by `n!`, summed over vertex counts.
    pub fn estimate(&self) -> BigUint {
        let mut total = BigUint::zero();
        for n in self.min_vertices..=self.max_vertices {
            let table = EdgeTable::new(n, self);
            // ways[t] = labeled vectors of total multiplicity t
            let cap_total = self.max_edges.map(|m| m as usize);
            let mut ways = vec![BigUint::from(1u32)];
            for &c in &table.caps {
                let c = c as usize;
                let len = match cap_total {
                    Some(m) => (ways.len() + c).min(m + 1),
                    None => ways.len() + c,
                };
                let mut next = vec![BigUint::zero(); len];
                for (t, w) in ways.iter().enumerate() {
                    for k in 0..=c {
                        if t + k < len {
                            next[t + k] += w;
                        }
                    }
                }
                ways = next;
            }
            let labeled: BigUint = ways.iter().sum();
            let fact: BigUint = (1..=n as u32).map(BigUint::from).product();
            total += labeled / fact;
        }
        total
    }
}

impl fmt::Display for GenerationFilter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "vertices={}..={} edge_size<={} min_degree={} connected={} mult_bound={} max_edges={} simple={}",
            self.min_vertices,
            self.max_vertices,
            self.max_edge_size,
            self.min_degree,
            self.connected,
            self.mult_bound,
            self.max_edges.map_or("none".to_string(), |m| m.to_string()),
            self.simple
        )
    }
}

/// Candidate edges on `n` slots and their permutation action.
struct EdgeTable {
    n: usize,
    /// Slot bitmask of each candidate edge, ordered by size then lexically.
    masks: Vec<u32>,
    caps: Vec<u8>,
    /// `perms[p][j]`: the edge sent to position `j` under permutation `p`.
    perms: Vec<Vec<u16>>,
}

impl EdgeTable {
    fn new(n: usize, f: &GenerationFilter) -> Self {
        let max_size = if f.simple { 2 } else { f.max_edge_size.min(n) };
        let mut edges: Vec<Vec<u32>> = (1..(1u32 << n))
            .filter(|m| {
                let k = m.count_ones() as usize;
                if f.simple {
                    k == 2
                } else {
                    k <= max_size
                }
            })
            .map(|m| (0..n as u32).filter(|i| m >> i & 1 == 1).collect())
            .collect();
        edges.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        let masks: Vec<u32> = edges
            .iter()
            .map(|vs| vs.iter().fold(0, |m, v| m | 1 << v))
            .collect();
        let caps = edges
            .iter()
            .map(|vs| {
                if f.simple {
                    1
                } else {
                    let unbounded = f.max_edges.unwrap_or(u8::MAX as u32).min(u8::MAX as u32);
                    if f.mult_bound {
                        (((1u32 << vs.len()) - 1).min(unbounded)) as u8
                    } else {
                        unbounded as u8
                    }
                }
            })
            .collect();
        let index: BTreeMap<u32, u16> = masks
            .iter()
            .enumerate()
            .map(|(i, &m)| (m, i as u16))
            .collect();
        let mut perms = Vec::new();
        let mut p: Vec<usize> = (0..n).collect();
        loop {
            let mut src = vec![0u16; masks.len()];
            for (i, &m) in masks.iter().enumerate() {
                let image = (0..n).filter(|&v| m >> v & 1 == 1).fold(0u32, |a, v| a | 1 << p[v]);
                src[index[&image] as usize] = i as u16;
            }
            perms.push(src);
            if !next_permutation(&mut p) {
                break;
            }
        }
        EdgeTable {
            n,
            masks,
            caps,
            perms,
        }
    }

    fn canonical(&self, counts: &[u8]) -> Box<[u8]> {
        let mut best: Option<&Vec<u16>> = None;
        for src in &self.perms {
            match best {
                None => best = Some(src),
                Some(b) => {
                    for j in 0..counts.len() {
                        let (x, y) = (counts[src[j] as usize], counts[b[j] as usize]);
                        if x != y {
                            if x < y {
                                best = Some(src);
                            }
                            break;
                        }
                    }
                }
            }
        }
        let b = best.expect("identity permutation");
        b.iter().map(|&i| counts[i as usize]).collect()
    }

    fn degrees(&self, counts: &[u8]) -> Vec<u32> {
        let mut deg = vec![0u32; self.n];
        for (i, &c) in counts.iter().enumerate() {
            if c > 0 {
                for (v, d) in deg.iter_mut().enumerate() {
                    if self.masks[i] >> v & 1 == 1 {
                        *d += c as u32;
                    }
                }
            }
        }
        deg
    }

    fn connected(&self, counts: &[u8]) -> bool {
        let mut reached = 1u32;
        loop {
            let before = reached;
            for (i, &c) in counts.iter().enumerate() {
                if c > 0 && self.masks[i] & reached != 0 {
                    reached |= self.masks[i];
                }
            }
            if reached == before {
                break;
            }
        }
        reached == (1u32 << self.n) - 1
    }

    fn accepts(&self, counts: &[u8], f: &GenerationFilter) -> bool {
        (!f.connected || self.connected(counts))
            && self.degrees(counts).iter().all(|&d| d >= f.min_degree)
    }

    fn graph(&self, counts: &[u8]) -> Option<MHGraph> {
        let mut m = EdgeMultiset::new();
        for (i, &c) in counts.iter().enumerate() {
            if c > 0 {
                let vs = (0..self.n as u32).filter(|v| self.masks[i] >> v & 1 == 1);
                m.insert(Edge::new(vs.map(|v| v + 1)).expect("nonempty"), c as u32);
            }
        }
        m.into_graph()
    }
}

fn next_permutation(xs: &mut [usize]) -> bool {
    let Some(i) = (1..xs.len()).rev().find(|&i| xs[i - 1] < xs[i]) else {
        return false;
    };
    let j = (i..xs.len()).rev().find(|&j| xs[j] > xs[i - 1]).expect("exists");
    xs.swap(i - 1, j);
    xs[i..].reverse();
    true
}

/// Isomorphism classes of `n`-vertex graphs in one level, by total
/// multiplicity; isolated vertices are allowed in intermediate levels.
fn grow(table: &EdgeTable, level: &[Box<[u8]>]) -> Vec<Box<[u8]>> {
    let next: HashSet<Box<[u8]>> = level
        .par_iter()
        .flat_map_iter(|counts| {
            let mut out = Vec::new();
            let mut c = counts.to_vec();
            for i in 0..c.len() {
                if c[i] < table.caps[i] {
                    c[i] += 1;
                    out.push(table.canonical(&c));
                    c[i] -= 1;
                }
            }
            out
        })
        .collect();
    let mut next: Vec<_> = next.into_iter().collect();
    next.sort_unstable();
    next
}

/// A generated graph on exactly `vertex_count` vertices. `graph` is `None`
/// for the edgeless graph; otherwise vertices it does not mention are
/// isolated.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GeneratedGraph {
    pub vertex_count: usize,
    pub graph: Option<MHGraph>,
}

impl fmt::Display for GeneratedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.graph {
            Some(g) => write!(f, "{g}"),
            None => write!(f, "EMPTY"),
        }?;
        let used = self.graph.as_ref().map_or(0, |g| g.vertex_count());
        if used < self.vertex_count {
            write!(f, " +{} isolated", self.vertex_count - used)?;
        }
        Ok(())
    }
}

/// Ordered producer of generated graphs: by vertex count, then total
/// multiplicity, then canonical form.
pub struct Generation {
    filter: GenerationFilter,
    n: usize,
    table: Option<EdgeTable>,
    level: Vec<Box<[u8]>>,
    depth: u32,
    pending: VecDeque<GeneratedGraph>,
}

impl Generation {
    fn advance(&mut self) -> bool {
        loop {
            match &self.table {
                None => {
                    if self.n > self.filter.max_vertices {
                        return false;
                    }
                    let table = EdgeTable::new(self.n, &self.filter);
                    self.level = vec![vec![0u8; table.masks.len()].into_boxed_slice()];
                    self.depth = 0;
                    self.table = Some(table);
                }
                Some(table) => {
                    if self.level.is_empty() || self.filter.max_edges == Some(self.depth) {
                        self.table = None;
                        self.n += 1;
                        continue;
                    }
                    self.level = grow(table, &self.level);
                    self.depth += 1;
                }
            }
            let table = self.table.as_ref().expect("set above");
            let mut batch: Vec<(Option<CanonicalForm>, GeneratedGraph)> = self
                .level
                .par_iter()
                .filter(|c| table.accepts(c, &self.filter))
                .map(|c| {
                    let g = table.graph(c);
                    let form = g.as_ref().map(|g| canonical_form(g).expect("small graph"));
                    let graph = form.as_ref().map(|f| f.to_graph());
                    (
                        form,
                        GeneratedGraph {
                            vertex_count: self.n,
                            graph,
                        },
                    )
                })
                .collect();
            batch.sort_by(|a, b| a.0.cmp(&b.0));
            self.pending.extend(batch.into_iter().map(|(_, g)| g));
            if !self.pending.is_empty() {
                return true;
            }
        }
    }
}

impl Iterator for Generation {
    type Item = GeneratedGraph;

    fn next(&mut self) -> Option<GeneratedGraph> {
        if self.pending.is_empty() && !self.advance() {
            return None;
        }
        self.pending.pop_front()
    }
}

fn check_budget(f: &GenerationFilter) -> Result<()> {
    f.validate()?;
    if f.min_vertices > f.max_vertices {
        return Ok(());
    }
    let est = f.estimate();
    if est > BigUint::from(f.budget) {
        return Err(Error::Budget {
            what: "generated graphs",
            count: format!("~{est}"),
            budget: f.budget,
        });
    }
    Ok(())
}

/// Every graph passing the filter, once per isomorphism class, canonically
/// labeled. Refuses requests beyond the supported vertex counts or whose
/// estimated size exceeds the filter's budget.
pub fn generate(f: &GenerationFilter) -> Result<Generation> {
    check_budget(f)?;
    Ok(Generation {
        filter: f.clone(),
        n: f.min_vertices,
        table: None,
        level: Vec::new(),
        depth: 0,
        pending: VecDeque::new(),
    })
}

/// Number of graphs [`generate`] would produce, per vertex count and total
/// multiplicity.
pub fn count_by_size(f: &GenerationFilter) -> Result<BTreeMap<(usize, u32), u64>> {
    check_budget(f)?;
    let mut out = BTreeMap::new();
    for n in f.min_vertices..=f.max_vertices {
        let table = EdgeTable::new(n, f);
        let mut level = vec![vec![0u8; table.masks.len()].into_boxed_slice()];
        let mut depth = 0;
        loop {
            let hits = level.par_iter().filter(|c| table.accepts(c, f)).count() as u64;
            if hits > 0 {
                out.insert((n, depth), hits);
            }
            if level.is_empty() || f.max_edges == Some(depth) {
                break;
            }
            level = grow(&table, &level);
            depth += 1;
        }
    }
    Ok(out)
}

pub fn count(f: &GenerationFilter) -> Result<u64> {
    Ok(count_by_size(f)?.values().sum())
}

/// Counts under the filter and under variants with one setting changed.
pub fn sensitivity(f: &GenerationFilter) -> Vec<(String, Result<u64>)> {
    let mut variants = vec![("as given".to_string(), f.clone())];
    let mut push = |name: String, g: GenerationFilter| variants.push((name, g));
    push(
        format!("connected={}", !f.connected),
        GenerationFilter {
            connected: !f.connected,
            ..f.clone()
        },
    );
    for d in [0, 1, 2, 3] {
        if d != f.min_degree {
            push(
                format!("min_degree={d}"),
                GenerationFilter {
                    min_degree: d,
                    ..f.clone()
                },
            );
        }
    }
    push(
        format!("mult_bound={}", !f.mult_bound),
        GenerationFilter {
            mult_bound: !f.mult_bound,
            ..f.clone()
        },
    );
    if f.max_vertices > 1 {
        push(
            format!("max_vertices={}", f.max_vertices - 1),
            GenerationFilter {
                max_vertices: f.max_vertices - 1,
                ..f.clone()
            },
        );
    }
    if let Some(m) = f.max_edges {
        for m2 in [m.saturating_sub(1), m + 1] {
            if m2 > 0 {
                push(
                    format!("max_edges={m2}"),
                    GenerationFilter {
                        max_edges: Some(m2),
                        ..f.clone()
                    },
                );
            }
        }
    }
    variants
        .into_iter()
        .map(|(name, g)| (name, count(&g)))
        .collect()
}

/// Verdict of the classification pipeline on one graph.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Classification {
    pub status: SatStatus,
    /// Irreducible residues with their verdicts; `FALSE` residues appear as
    /// unsatisfiable `Term::Bottom`.
    pub residues: Vec<(Term, bool)>,
}

impl Classification {
    /// Unsatisfiable irreducible residues: the minimal-criminal candidates.
    pub fn unsat_residues(&self) -> impl Iterator<Item = &MHGraph> + '_ {
        self.residues
            .iter()
            .filter(|(_, sat)| !sat)
            .filter_map(|(t, _)| t.as_graph())
    }
}

/// Reduces with the exact rules, then decides each irreducible residue
/// directly. The graph is totally satisfiable exactly when all residues are.
pub fn classify(g: &MHGraph, cfg: &SatConfig) -> Result<Classification> {
    let RewriteOutcome::Exact(terms) = reduce_fixpoint(g) else {
        unreachable!("exact reduction");
    };
    let mut residues = Vec::with_capacity(terms.len());
    for t in terms {
        let sat = match &t {
            Term::Top => true,
            Term::Bottom => false,
            Term::Graph(h) => decide(h, cfg)?.is_sat(),
        };
        residues.push((t, sat));
    }
    let status = if residues.iter().all(|(_, sat)| *sat) {
        SatStatus::TotallySat
    } else {
        SatStatus::Unsat(None)
    };
    Ok(Classification { status, residues })
}

fn decide(h: &MHGraph, cfg: &SatConfig) -> Result<SatStatus> {
    if let Some(cache) = &cfg.cache {
        if let Some(sat) = canonical_form(h).ok().and_then(|k| cache.get(&k)) {
            return Ok(SatStatus::from_bool(sat));
        }
    }
    let status = match gamma_direct(h, cfg) {
        Err(Error::Budget { .. }) | Err(Error::VertexBound { .. }) => gamma(h, cfg)?,
        r => r?,
    };
    if let (Some(cache), Ok(k)) = (&cfg.cache, canonical_form(h)) {
        cache.insert(k, status.is_sat());
    }
    Ok(status)
}

/// Outcome of checking one list entry.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ListOutcome {
    Unsat,
    NotUnsat,
    ParseError(String),
    Undecided(String),
}

#[derive(Clone, Debug)]
pub struct ListCheck {
    pub entry: ListEntry,
    pub outcome: ListOutcome,
}

/// Results of checking a list of graphs expected to be unsatisfiable.
#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub checks: Vec<ListCheck>,
}

impl VerifyReport {
    pub fn unsat_count(&self) -> usize {
        self.checks
            .iter()
            .filter(|c| c.outcome == ListOutcome::Unsat)
            .count()
    }

    pub fn all_unsat(&self) -> bool {
        !self.checks.is_empty() && self.unsat_count() == self.checks.len()
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let label = c
                .entry
                .index
                .map_or_else(|| format!("line {}", c.entry.line), |i| i.to_string());
            match &c.outcome {
                ListOutcome::Unsat => writeln!(f, "{label}: UNSAT {}", c.entry.text)?,
                ListOutcome::NotUnsat => writeln!(f, "{label}: NOT-UNSAT {}", c.entry.text)?,
                ListOutcome::ParseError(e) => writeln!(f, "{label}: PARSE-ERROR {e}")?,
                ListOutcome::Undecided(e) => writeln!(f, "{label}: UNDECIDED {e}")?,
            }
        }
        write!(f, "{}/{} UNSAT", self.unsat_count(), self.checks.len())
    }
}

/// Parses a list of graphs (one per line, optional leading index) and
/// checks each; parse failures are reported per line and the run goes on.
pub fn verify_known_unsat(text: &str, cfg: &SatConfig) -> VerifyReport {
    let checks = parse_graph_list(text)
        .into_par_iter()
        .map(|entry| {
            let outcome = match &entry.graph {
                Err(e) => ListOutcome::ParseError(e.to_string()),
                Ok(g) => match gamma(g, cfg) {
                    Ok(s) if s.is_sat() => ListOutcome::NotUnsat,
                    Ok(_) => ListOutcome::Unsat,
                    Err(e) => ListOutcome::Undecided(e.to_string()),
                },
            };
            ListCheck { entry, outcome }
        })
        .collect();
    VerifyReport { checks }
}

/// Summary of a classification run.
#[derive(Clone, Debug)]
pub struct ClassificationReport {
    pub filter: GenerationFilter,
    pub total: u64,
    pub sat: u64,
    pub unsat: u64,
    pub undecided: u64,
    /// Distinct unsatisfiable irreducible residues.
    pub unsat_residues: BTreeSet<CanonicalForm>,
    pub elapsed: Duration,
}

impl ClassificationReport {
    fn empty(filter: GenerationFilter) -> Self {
        ClassificationReport {
            filter,
            total: 0,
            sat: 0,
            unsat: 0,
            undecided: 0,
            unsat_residues: BTreeSet::new(),
            elapsed: Duration::ZERO,
        }
    }

    fn merge(mut self, other: Self) -> Self {
        self.total += other.total;
        self.sat += other.sat;
        self.unsat += other.unsat;
        self.undecided += other.undecided;
        self.unsat_residues.extend(other.unsat_residues);
        self
    }

    /// Machine-readable one-line summary.
    pub fn summary_line(&self) -> String {
        format!(
            "total={} sat={} unsat={} undecided={} unsat_residues={} seconds={:.3}",
            self.total,
            self.sat,
            self.unsat,
            self.undecided,
            self.unsat_residues.len(),
            self.elapsed.as_secs_f64()
        )
    }
}

impl fmt::Display for ClassificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "filter: {}", self.filter)?;
        writeln!(f, "{}", self.summary_line())?;
        for r in &self.unsat_residues {
            writeln!(f, "unsat residue: {r}")?;
        }
        Ok(())
    }
}

/// Generates and classifies every graph passing the filter. With a cache
/// in `cfg`, verdicts are persisted as they are found, so an interrupted
/// run resumes from where it stopped. Graphs that time out are counted as
/// undecided.
pub fn run_pipeline(f: &GenerationFilter, cfg: &SatConfig) -> Result<ClassificationReport> {
    let start = Instant::now();
    let graphs: Vec<GeneratedGraph> = generate(f)?.collect();
    let mut report = graphs
        .par_iter()
        .map(|gg| {
            let mut r = ClassificationReport::empty(f.clone());
            r.total = 1;
            let Some(g) = &gg.graph else {
                // the edgeless graph carries only the empty CNF
                r.sat = 1;
                return r;
            };
            match classify(g, cfg) {
                Ok(c) => {
                    if c.status.is_sat() {
                        r.sat = 1;
                    } else {
                        r.unsat = 1;
                    }
                    r.unsat_residues = c
                        .unsat_residues()
                        .filter_map(|h| canonical_form(h).ok())
                        .collect();
                }
                Err(_) => r.undecided = 1,
            }
            r
        })
        .reduce(|| ClassificationReport::empty(f.clone()), ClassificationReport::merge);
    report.elapsed = start.elapsed();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simple_counts() {
        // connected graphs on 1..=5 vertices: 1, 1, 2, 6, 21
        let by = count_by_size(&GenerationFilter::simple_graphs(5)).unwrap();
        let per_n = |n| by.iter().filter(|((m, _), _)| *m == n).map(|(_, c)| c).sum::<u64>();
        assert_eq!(
            (1..=5).map(per_n).collect::<Vec<_>>(),
            vec![1, 1, 2, 6, 21]
        );
    }

    #[test]
    fn one_vertex_with_default_filters_is_empty() {
        let f = GenerationFilter::multi(1);
        assert_eq!(generate(&f).unwrap().count(), 0);
    }

    #[test]
    fn refuses_large_requests() {
        assert!(matches!(
            generate(&GenerationFilter::multi(7)),
            Err(Error::Budget { .. })
        ));
        assert!(generate(&GenerationFilter::simple_graphs(0)).is_err());
        // unbounded multiplicities at five vertices are far beyond budget
        assert!(matches!(
            generate(&GenerationFilter::multi(5)),
            Err(Error::Budget { .. })
        ));
    }

    #[test]
    fn emitted_graphs_are_canonical_and_ordered() {
        let f = GenerationFilter {
            max_edges: Some(4),
            ..GenerationFilter::multi(3)
        };
        let gs: Vec<_> = generate(&f).unwrap().collect();
        assert!(!gs.is_empty());
        let keys: Vec<_> = gs
            .iter()
            .map(|g| {
                let h = g.graph.as_ref().unwrap();
                (g.vertex_count, h.total_multiplicity(), canonical_form(h).unwrap())
            })
            .collect();
        for (g, (_, _, k)) in gs.iter().zip(&keys) {
            assert_eq!(g.graph.as_ref().unwrap(), &k.to_graph());
        }
        assert!(keys.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn classify_examples() {
        let cfg = SatConfig::default();
        let c = classify(&"(1)(2)(1,2)".parse().unwrap(), &cfg).unwrap();
        assert!(!c.status.is_sat());
        let c = classify(&"(1,2)(1,3)(1,4)(2,3)(2,4)(1,3,4)".parse().unwrap(), &cfg).unwrap();
        assert!(!c.status.is_sat());
        let c = classify(&"(1,2,3)".parse().unwrap(), &cfg).unwrap();
        assert!(c.status.is_sat());
    }

    #[test]
    fn verify_flags_satisfiable_lines() {
        let r = verify_known_unsat("1 (1)²\n43 (2)², (3,5)\n(1,2)\n(1,", &SatConfig::default());
        let outcomes: Vec<_> = r.checks.iter().map(|c| c.outcome.clone()).collect();
        assert_eq!(outcomes[0], ListOutcome::Unsat);
        assert_eq!(outcomes[1], ListOutcome::Unsat);
        assert_eq!(outcomes[2], ListOutcome::NotUnsat);
        assert!(matches!(outcomes[3], ListOutcome::ParseError(_)));
        assert!(!r.all_unsat());
    }
}
