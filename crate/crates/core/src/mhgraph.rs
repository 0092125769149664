//! Looped multi-hypergraphs: edges are nonempty vertex sets, graphs are
//! nonempty multisets of edges.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Vertex ids are positive integers, shared with the variable ids of the
/// CNF embedding.
pub type Vertex = u32;

/// A nonempty set of vertices, stored sorted.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Edge(Vec<Vertex>);

impl Edge {
    pub fn new<I: IntoIterator<Item = Vertex>>(vs: I) -> Result<Self> {
        let mut v: Vec<Vertex> = vs.into_iter().collect();
        if v.is_empty() {
            return Err(Error::EmptyEdge);
        }
        if v.contains(&0) {
            return Err(Error::ZeroId);
        }
        v.sort_unstable();
        v.dedup();
        Ok(Edge(v))
    }

    pub(crate) fn from_sorted(v: Vec<Vertex>) -> Self {
        debug_assert!(!v.is_empty() && v.windows(2).all(|w| w[0] < w[1]));
        Edge(v)
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_loop(&self) -> bool {
        self.0.len() == 1
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    /// The edge with `v` deleted, or `None` when nothing would remain.
    pub fn without(&self, v: Vertex) -> Option<Edge> {
        let rest: Vec<Vertex> = self.0.iter().copied().filter(|&u| u != v).collect();
        (!rest.is_empty()).then_some(Edge(rest))
    }

    pub fn union(&self, other: &Edge) -> Edge {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        v.sort_unstable();
        v.dedup();
        Edge(v)
    }

    pub fn is_subset(&self, other: &Edge) -> bool {
        self.0.iter().all(|v| other.contains(*v))
    }

    pub fn relabel(&self, f: impl Fn(Vertex) -> Vertex) -> Edge {
        let mut v: Vec<Vertex> = self.0.iter().map(|&u| f(u)).collect();
        v.sort_unstable();
        v.dedup();
        Edge(v)
    }
}

impl Ord for Edge {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Edge {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

/// A possibly empty multiset of edges.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default, PartialOrd, Ord)]
pub struct EdgeMultiset {
    edges: BTreeMap<Edge, u32>,
}

impl EdgeMultiset {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs<I: IntoIterator<Item = (Edge, u32)>>(pairs: I) -> Self {
        let mut m = Self::new();
        for (e, n) in pairs {
            m.insert(e, n);
        }
        m
    }

    pub fn insert(&mut self, e: Edge, n: u32) {
        if n > 0 {
            *self.edges.entry(e).or_insert(0) += n;
        }
    }

    /// Removes up to `n` copies of `e`; returns how many were removed.
    pub fn remove(&mut self, e: &Edge, n: u32) -> u32 {
        let Some(m) = self.edges.get_mut(e) else {
            return 0;
        };
        let taken = n.min(*m);
        *m -= taken;
        if *m == 0 {
            self.edges.remove(e);
        }
        taken
    }

    pub fn multiplicity(&self, e: &Edge) -> u32 {
        self.edges.get(e).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Edge, u32)> + '_ {
        self.edges.iter().map(|(e, &n)| (e, n))
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Number of distinct edges.
    pub fn distinct_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn total_multiplicity(&self) -> u32 {
        self.edges.values().sum()
    }

    pub fn vertices(&self) -> BTreeSet<Vertex> {
        self.edges
            .keys()
            .flat_map(|e| e.vertices().iter().copied())
            .collect()
    }

    /// Multiset sum.
    pub fn sum(&self, other: &EdgeMultiset) -> EdgeMultiset {
        let mut out = self.clone();
        for (e, n) in other.iter() {
            out.insert(e.clone(), n);
        }
        out
    }

    pub fn is_submultiset(&self, other: &EdgeMultiset) -> bool {
        self.iter().all(|(e, n)| n <= other.multiplicity(e))
    }

    pub fn into_graph(self) -> Option<MHGraph> {
        (!self.is_empty()).then_some(MHGraph { edges: self })
    }
}

impl fmt::Display for EdgeMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "EMPTY");
        }
        for (i, (e, n)) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
            if n > 1 {
                write!(f, "^{n}")?;
            }
        }
        Ok(())
    }
}

/// A nonempty multiset of edges. Graphs order by total multiplicity, then
/// by their sorted edge lists.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MHGraph {
    edges: EdgeMultiset,
}

impl Ord for MHGraph {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_multiplicity()
            .cmp(&other.total_multiplicity())
            .then_with(|| self.edges.cmp(&other.edges))
    }
}

impl PartialOrd for MHGraph {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl MHGraph {
    pub fn new(edges: EdgeMultiset) -> Result<Self> {
        edges.into_graph().ok_or(Error::EmptyGraph)
    }

    /// Convenience constructor from vertex lists, one entry per edge copy.
    pub fn from_edges(edges: &[&[Vertex]]) -> Result<Self> {
        let mut m = EdgeMultiset::new();
        for e in edges {
            m.insert(Edge::new(e.iter().copied())?, 1);
        }
        Self::new(m)
    }

    pub fn edges(&self) -> &EdgeMultiset {
        &self.edges
    }

    pub fn into_edges(self) -> EdgeMultiset {
        self.edges
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Edge, u32)> + '_ {
        self.edges.iter()
    }

    pub fn vertices(&self) -> BTreeSet<Vertex> {
        self.edges.vertices()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices().len()
    }

    pub fn total_multiplicity(&self) -> u32 {
        self.edges.total_multiplicity()
    }

    /// Sum of multiplicities of the edges containing `v`; a loop copy counts
    /// once.
    pub fn degree(&self, v: Vertex) -> u32 {
        self.iter().filter(|(e, _)| e.contains(v)).map(|(_, n)| n).sum()
    }

    /// The edges containing `v`.
    pub fn star(&self, v: Vertex) -> Result<MHGraph> {
        let m = EdgeMultiset::from_pairs(
            self.iter()
                .filter(|(e, _)| e.contains(v))
                .map(|(e, n)| (e.clone(), n)),
        );
        m.into_graph().ok_or(Error::Degree {
            vertex: v,
            degree: 0,
            requirement: "the star needs at least one incident edge",
        })
    }

    /// Star edges with `v` deleted; loops at `v` vanish.
    pub fn link(&self, v: Vertex) -> Result<EdgeMultiset> {
        if self.degree(v) == 0 {
            return Err(Error::Degree {
                vertex: v,
                degree: 0,
                requirement: "the link needs at least one incident edge",
            });
        }
        Ok(EdgeMultiset::from_pairs(self.iter().filter_map(|(e, n)| {
            if e.contains(v) {
                e.without(v).map(|f| (f, n))
            } else {
                None
            }
        })))
    }

    /// Number of loop copies `(v)`.
    pub fn loops_at(&self, v: Vertex) -> u32 {
        self.edges.multiplicity(&Edge(vec![v]))
    }

    /// The edges not containing `v`.
    pub fn rest(&self, v: Vertex) -> EdgeMultiset {
        EdgeMultiset::from_pairs(
            self.iter()
                .filter(|(e, _)| !e.contains(v))
                .map(|(e, n)| (e.clone(), n)),
        )
    }

    pub fn is_subgraph(&self, h: &MHGraph) -> bool {
        self.edges.is_submultiset(&h.edges)
    }

    /// True when the edges of `self` can be matched one-to-one (copies
    /// counted separately) with those of `h`, each edge a subset of its
    /// partner.
    pub fn is_shaved_version(&self, h: &MHGraph) -> bool {
        if self.total_multiplicity() != h.total_multiplicity() {
            return false;
        }
        let items: Vec<(&Edge, u32)> = self.iter().collect();
        let targets: Vec<&Edge> = h.iter().map(|(e, _)| e).collect();
        let mut capacity: Vec<u32> = h.iter().map(|(_, n)| n).collect();
        fn place(
            i: usize,
            left: u32,
            items: &[(&Edge, u32)],
            targets: &[&Edge],
            capacity: &mut [u32],
        ) -> bool {
            if i == items.len() {
                return true;
            }
            if left == 0 {
                let next = items.get(i + 1).map_or(0, |x| x.1);
                return place(i + 1, next, items, targets, capacity);
            }
            for t in 0..targets.len() {
                if capacity[t] > 0 && items[i].0.is_subset(targets[t]) {
                    capacity[t] -= 1;
                    let ok = place(i, left - 1, items, targets, capacity);
                    capacity[t] += 1;
                    if ok {
                        return true;
                    }
                }
            }
            false
        }
        place(0, items[0].1, &items, &targets, &mut capacity)
    }

    /// Applies a vertex map; copies of edges that collide are merged.
    pub fn relabel(&self, f: impl Fn(Vertex) -> Vertex) -> MHGraph {
        MHGraph {
            edges: EdgeMultiset::from_pairs(self.iter().map(|(e, n)| (e.relabel(&f), n))),
        }
    }

    /// Multiset sum of two graphs.
    pub fn and(&self, other: &MHGraph) -> MHGraph {
        MHGraph {
            edges: self.edges.sum(&other.edges),
        }
    }

    pub fn and_multiset(&self, other: &EdgeMultiset) -> MHGraph {
        MHGraph {
            edges: self.edges.sum(other),
        }
    }

    pub fn is_simple(&self) -> bool {
        self.iter().all(|(e, _)| e.len() == 2)
    }
}

impl fmt::Display for MHGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.edges.fmt(f)
    }
}

/// Parses the graph grammar: edges `(1,2,3)` with an optional multiplicity
/// `^n` or Unicode superscript digits, separated by commas and/or
/// whitespace.
pub fn parse_graph(text: &str) -> Result<MHGraph> {
    let m = parse_edge_multiset(text)?;
    if m.is_empty() {
        return Err(Error::Parse {
            pos: 0,
            msg: "expected at least one edge".into(),
        });
    }
    MHGraph::new(m)
}

pub fn format_graph(g: &MHGraph) -> String {
    g.to_string()
}

fn superscript_digit(c: char) -> Option<u32> {
    match c {
        '⁰' => Some(0),
        '¹' => Some(1),
        '²' => Some(2),
        '³' => Some(3),
        '⁴' => Some(4),
        '⁵' => Some(5),
        '⁶' => Some(6),
        '⁷' => Some(7),
        '⁸' => Some(8),
        '⁹' => Some(9),
        _ => None,
    }
}

struct Parser<'a> {
    text: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.bump();
        }
    }

    fn err(&self, msg: &str) -> Error {
        Error::Parse {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn nat(&mut self) -> Result<u32> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.bump();
        }
        if start == self.pos {
            return Err(self.err("expected a number"));
        }
        self.text[start..self.pos].parse().map_err(|_| Error::Parse {
            pos: start,
            msg: "number out of range".into(),
        })
    }

    fn edge(&mut self) -> Result<(Edge, u32)> {
        if self.bump() != Some('(') {
            return Err(self.err("expected '('"));
        }
        let mut vs = Vec::new();
        loop {
            self.skip_ws();
            let at = self.pos;
            let v = self.nat()?;
            if v == 0 {
                return Err(Error::Parse {
                    pos: at,
                    msg: "vertex ids start at 1".into(),
                });
            }
            vs.push(v);
            self.skip_ws();
            match self.bump() {
                Some(',') => continue,
                Some(')') => break,
                _ => return Err(self.err("expected ',' or ')'")),
            }
        }
        let mult = if self.peek() == Some('^') {
            self.bump();
            self.nat()?
        } else if self.peek().and_then(superscript_digit).is_some() {
            let mut n: u32 = 0;
            while let Some(d) = self.peek().and_then(superscript_digit) {
                self.bump();
                n = n
                    .checked_mul(10)
                    .and_then(|n| n.checked_add(d))
                    .ok_or_else(|| self.err("multiplicity out of range"))?;
            }
            n
        } else {
            1
        };
        if mult == 0 {
            return Err(self.err("multiplicity must be positive"));
        }
        Ok((Edge::new(vs)?, mult))
    }
}

pub(crate) fn parse_edge_multiset(text: &str) -> Result<EdgeMultiset> {
    let mut p = Parser { text, pos: 0 };
    let mut m = EdgeMultiset::new();
    p.skip_ws();
    while p.peek().is_some() {
        if p.peek() == Some('(') && text[p.pos..].starts_with("()") {
            return Err(Error::Parse {
                pos: p.pos,
                msg: "edges must contain at least one vertex".into(),
            });
        }
        let (e, n) = p.edge()?;
        m.insert(e, n);
        p.skip_ws();
        if p.peek() == Some(',') {
            p.bump();
            p.skip_ws();
            if p.peek().is_none() {
                return Err(p.err("trailing ','"));
            }
        }
    }
    Ok(m)
}

impl FromStr for MHGraph {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_graph(s)
    }
}

/// Unordered 2-partitions of a multiset given as `(item, multiplicity)`
/// pairs: both sides nonempty, multiplicities may split, and each pair of
/// sub-multisets is produced once.
pub struct TwoPartitions<T> {
    items: Vec<(T, u32)>,
    counts: Vec<u32>,
    done: bool,
}

impl<T: Clone> TwoPartitions<T> {
    pub fn new(items: Vec<(T, u32)>) -> Self {
        let total: u32 = items.iter().map(|x| x.1).sum();
        let counts = vec![0; items.len()];
        TwoPartitions {
            items,
            counts,
            done: total < 2,
        }
    }

    fn advance(&mut self) -> bool {
        for (c, (_, m)) in self.counts.iter_mut().zip(&self.items) {
            if *c < *m {
                *c += 1;
                return true;
            }
            *c = 0;
        }
        false
    }
}

impl<T: Clone> Iterator for TwoPartitions<T> {
    type Item = (Vec<(T, u32)>, Vec<(T, u32)>);

    fn next(&mut self) -> Option<Self::Item> {
        while !self.done {
            if !self.advance() {
                self.done = true;
                return None;
            }
            let complement: Vec<u32> = self
                .counts
                .iter()
                .zip(&self.items)
                .map(|(c, (_, m))| m - c)
                .collect();
            let full = complement.iter().all(|&c| c == 0);
            // keep the representative whose count vector is the smaller one
            if full || reverse_lex(&self.counts, &complement) == Ordering::Greater {
                continue;
            }
            let side = |cs: &[u32]| -> Vec<(T, u32)> {
                cs.iter()
                    .zip(&self.items)
                    .filter(|(&c, _)| c > 0)
                    .map(|(&c, (t, _))| (t.clone(), c))
                    .collect()
            };
            return Some((side(&self.counts), side(&complement)));
        }
        None
    }
}

fn reverse_lex(a: &[u32], b: &[u32]) -> Ordering {
    a.iter().rev().cmp(b.iter().rev())
}

/// The 2-partitions of a link as pairs of edge multisets.
pub fn two_partitions_of_link(
    l: &EdgeMultiset,
) -> impl Iterator<Item = (EdgeMultiset, EdgeMultiset)> {
    let items: Vec<(Edge, u32)> = l.iter().map(|(e, n)| (e.clone(), n)).collect();
    TwoPartitions::new(items).map(|(a, b)| {
        (
            EdgeMultiset::from_pairs(a),
            EdgeMultiset::from_pairs(b),
        )
    })
}
