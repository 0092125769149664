//! Canonical labeling of small multi-hypergraphs.
//!
//! Vertices are first split into classes by iterated color refinement, which
//! only looks at isomorphism-invariant data, so classes can be ordered by
//! their signatures. The canonical form is the minimum relabeled edge list
//! over all labelings that give lower labels to lower classes.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::mhgraph::{Edge, EdgeMultiset, MHGraph, Vertex};

/// Default cap on the number of vertices canonicalized exhaustively.
pub const DEFAULT_VERTEX_BOUND: usize = 8;

/// Key identifying an isomorphism class: the graph relabeled onto `1..=n`
/// with its edge list minimal.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct CanonicalForm {
    edges: Vec<(Edge, u32)>,
}

impl CanonicalForm {
    pub fn edges(&self) -> &[(Edge, u32)] {
        &self.edges
    }

    pub fn to_graph(&self) -> MHGraph {
        MHGraph::new(EdgeMultiset::from_pairs(self.edges.iter().cloned()))
            .expect("canonical forms are nonempty")
    }

    pub fn vertex_count(&self) -> usize {
        self.edges
            .iter()
            .flat_map(|(e, _)| e.vertices().iter().copied())
            .max()
            .unwrap_or(0) as usize
    }
}

impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (e, n)) in self.edges.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
            if *n > 1 {
                write!(f, "^{n}")?;
            }
        }
        Ok(())
    }
}

pub fn canonical_form(g: &MHGraph) -> Result<CanonicalForm> {
    canonical_form_bounded(g, DEFAULT_VERTEX_BOUND)
}

pub fn canonical_form_bounded(g: &MHGraph, bound: usize) -> Result<CanonicalForm> {
    canonical_labeling(g, bound).map(|(c, _)| c)
}

type Signature = (usize, Vec<(usize, u32, Vec<usize>)>);
type Labeling = Vec<(Edge, u32)>;

/// Vertex classes after color refinement, listed in invariant order.
fn refine(n: usize, edges: &[(Vec<usize>, u32)]) -> Vec<Vec<usize>> {
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, (vs, _)) in edges.iter().enumerate() {
        for &v in vs {
            incident[v].push(i);
        }
    }
    let mut colors = vec![0usize; n];
    let mut classes = 0;
    loop {
        let sigs: Vec<Signature> = (0..n)
            .map(|v| {
                let mut around: Vec<(usize, u32, Vec<usize>)> = incident[v]
                    .iter()
                    .map(|&i| {
                        let (vs, m) = &edges[i];
                        let mut others: Vec<usize> = vs
                            .iter()
                            .filter(|&&u| u != v)
                            .map(|&u| colors[u])
                            .collect();
                        others.sort_unstable();
                        (vs.len(), *m, others)
                    })
                    .collect();
                around.sort_unstable();
                (colors[v], around)
            })
            .collect();
        let mut distinct: Vec<&Signature> = sigs.iter().collect();
        distinct.sort();
        distinct.dedup();
        let rank: BTreeMap<&Signature, usize> =
            distinct.iter().enumerate().map(|(i, s)| (*s, i)).collect();
        colors = sigs.iter().map(|s| rank[s]).collect();
        if distinct.len() == classes {
            break;
        }
        classes = distinct.len();
    }
    let mut out = vec![Vec::new(); classes];
    for v in 0..n {
        out[colors[v]].push(v);
    }
    out
}

fn next_permutation(xs: &mut [usize]) -> bool {
    if xs.len() < 2 {
        return false;
    }
    let mut i = xs.len() - 1;
    while i > 0 && xs[i - 1] >= xs[i] {
        i -= 1;
    }
    if i == 0 {
        xs.reverse();
        return false;
    }
    let mut j = xs.len() - 1;
    while xs[j] <= xs[i - 1] {
        j -= 1;
    }
    xs.swap(i - 1, j);
    xs[i..].reverse();
    true
}

/// Canonical form plus the map from original vertices to canonical labels.
pub fn canonical_labeling(
    g: &MHGraph,
    bound: usize,
) -> Result<(CanonicalForm, BTreeMap<Vertex, Vertex>)> {
    let vertices: Vec<Vertex> = g.vertices().into_iter().collect();
    let n = vertices.len();
    if n > bound {
        return Err(Error::VertexBound { vertices: n, bound });
    }
    let index: BTreeMap<Vertex, usize> =
        vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let edges: Vec<(Vec<usize>, u32)> = g
        .iter()
        .map(|(e, m)| (e.vertices().iter().map(|v| index[v]).collect(), m))
        .collect();
    let mut blocks = refine(n, &edges);

    let mut best: Option<(Labeling, Vec<u32>)> = None;
    let mut label = vec![0u32; n];
    loop {
        let mut next = 1u32;
        for b in &blocks {
            for &v in b {
                label[v] = next;
                next += 1;
            }
        }
        let mut relabeled: Vec<(Edge, u32)> = edges
            .iter()
            .map(|(vs, m)| {
                let mut l: Vec<Vertex> = vs.iter().map(|&v| label[v]).collect();
                l.sort_unstable();
                (Edge::from_sorted(l), *m)
            })
            .collect();
        relabeled.sort_unstable();
        if best.as_ref().is_none_or(|(b, _)| relabeled < *b) {
            best = Some((relabeled, label.clone()));
        }
        // odometer over the permutations of each block
        let mut advanced = false;
        for b in blocks.iter_mut() {
            if next_permutation(b) {
                advanced = true;
                break;
            }
        }
        if !advanced {
            break;
        }
    }
    let (edges, label) = best.expect("at least one labeling");
    let map = vertices
        .iter()
        .enumerate()
        .map(|(i, &v)| (v, label[i]))
        .collect();
    Ok((CanonicalForm { edges }, map))
}
