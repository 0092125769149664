//! Built-in reference data: the two-graph disjunction tables, surface
//! triangulations, complete uniform hypergraphs and the list of known
//! unsatisfiable graphs.

use std::collections::BTreeSet;
use std::fmt;

use crate::embedding::Term;
use crate::error::{Error, Result};
use crate::logic::{bounded_or_with, BoundedUnion, Normalization};
use crate::mhgraph::{Edge, EdgeMultiset, MHGraph, Vertex};

pub const KNOWN_UNSAT: &str = include_str!("../data/appendix_c.txt");

const TABLE_B1: &str = include_str!("../data/table_b1.txt");
const TABLE_B2: &str = include_str!("../data/table_b2.txt");
const TABLE_B3: &str = include_str!("../data/table_b3.txt");

/// The three disjunction tables: both operands single edges, one operand a
/// single edge and the other two edges, and the rows whose disjunction is
/// not a union of graphs.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Table {
    B1,
    B2,
    B3,
}

impl Table {
    pub const ALL: [Table; 3] = [Table::B1, Table::B2, Table::B3];

    pub fn name(self) -> &'static str {
        match self {
            Table::B1 => "b1",
            Table::B2 => "b2",
            Table::B3 => "b3",
        }
    }

    pub fn from_name(s: &str) -> Option<Table> {
        Table::ALL.into_iter().find(|t| t.name() == s)
    }

    /// The first two tables are stated after subsumption and resolution
    /// merging; the third keeps plain distributed clauses.
    pub fn normalization(self) -> Normalization {
        match self {
            Table::B1 | Table::B2 => Normalization::Simplified,
            Table::B3 => Normalization::Distributive,
        }
    }

    fn fixture(self) -> &'static str {
        match self {
            Table::B1 => TABLE_B1,
            Table::B2 => TABLE_B2,
            Table::B3 => TABLE_B3,
        }
    }
}

/// One table row. Bounds are kept as sets so rows compare independently of
/// the printed order of their components.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TableRow {
    pub left: Term,
    pub right: Term,
    pub lower: BTreeSet<Term>,
    pub upper: BTreeSet<Term>,
}

impl fmt::Display for TableRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |ts: &BTreeSet<Term>| {
            ts.iter()
                .map(letter_term)
                .collect::<Vec<_>>()
                .join(" ")
        };
        write!(
            f,
            "{} | {} | {} | {}",
            letter_term(&self.left),
            letter_term(&self.right),
            join(&self.lower),
            join(&self.upper)
        )
    }
}

fn letter_vertex(c: char) -> Result<Vertex> {
    match c {
        'a'..='z' => Ok(c as u32 - 'a' as u32 + 1),
        _ => Err(Error::Parse {
            pos: 0,
            msg: format!("expected a vertex letter, found {c:?}"),
        }),
    }
}

/// Parses the compact letter notation of the tables: `T` for true, otherwise
/// edges such as `ab^2` joined by `&`.
pub fn parse_letter_term(s: &str) -> Result<Term> {
    let s = s.trim();
    if s == "T" {
        return Ok(Term::Top);
    }
    let mut m = EdgeMultiset::new();
    for part in s.split('&') {
        let (letters, mult) = match part.split_once('^') {
            Some((l, n)) => (
                l,
                n.parse::<u32>().map_err(|_| Error::Parse {
                    pos: 0,
                    msg: format!("bad multiplicity in {part:?}"),
                })?,
            ),
            None => (part, 1),
        };
        let vs = letters.chars().map(letter_vertex).collect::<Result<Vec<_>>>()?;
        m.insert(Edge::new(vs)?, mult);
    }
    Ok(Term::from_multiset(m))
}

/// Inverse of [`parse_letter_term`].
pub fn letter_term(t: &Term) -> String {
    match t {
        Term::Top => "T".into(),
        Term::Bottom => "F".into(),
        Term::Graph(g) => g
            .iter()
            .map(|(e, n)| {
                let letters: String = e
                    .vertices()
                    .iter()
                    .map(|&v| char::from_u32('a' as u32 + v - 1).unwrap_or('?'))
                    .collect();
                if n > 1 {
                    format!("{letters}^{n}")
                } else {
                    letters
                }
            })
            .collect::<Vec<_>>()
            .join("&"),
    }
}

fn parse_term_list(s: &str) -> Result<BTreeSet<Term>> {
    s.split_whitespace().map(parse_letter_term).collect()
}

/// Rows as transcribed in the fixture files.
pub fn table_fixture(table: Table) -> Result<Vec<TableRow>> {
    let mut rows = Vec::new();
    for line in table.fixture().lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let cols: Vec<&str> = line.split('|').collect();
        if cols.len() != 4 {
            return Err(Error::Parse {
                pos: 0,
                msg: format!("expected four columns in {line:?}"),
            });
        }
        rows.push(TableRow {
            left: parse_letter_term(cols[0])?,
            right: parse_letter_term(cols[1])?,
            lower: parse_term_list(cols[2])?,
            upper: parse_term_list(cols[3])?,
        });
    }
    Ok(rows)
}

/// Computes the bounds of `left ∨ right` under the table's normalization.
pub fn compute_row(table: Table, left: &Term, right: &Term) -> TableRow {
    let BoundedUnion { lower, upper, .. } = bounded_or_with(left, right, table.normalization());
    TableRow {
        left: left.clone(),
        right: right.clone(),
        lower: lower.into_iter().collect(),
        upper: upper.into_iter().collect(),
    }
}

/// Recomputes every row of a table from its operands.
pub fn regenerate_table(table: Table) -> Result<Vec<TableRow>> {
    Ok(table_fixture(table)?
        .iter()
        .map(|r| compute_row(table, &r.left, &r.right))
        .collect())
}

/// Named triangulations as vertex triples.
pub const TRIANGULATIONS: &[(&str, &[&str])] = &[
    ("tetrahedron", &["abc", "acd", "abd", "bcd"]),
    (
        "prism-sym",
        &["123", "125", "134", "145", "236", "256", "346", "456"],
    ),
    (
        "prism-asym",
        &["123", "125", "136", "145", "146", "236", "256", "456"],
    ),
    ("mobius", &["124", "146", "235", "245", "346", "356"]),
    (
        "rp2",
        &[
            "123", "326", "461", "412", "526", "561", "153", "364", "425", "534",
        ],
    ),
    (
        "torus",
        &[
            "126", "267", "237", "371", "674", "745", "715", "156", "412", "452", "523", "563",
            "634", "431",
        ],
    ),
    (
        "torus-sub",
        &[
            "126", "267", "237", "371", "674", "745", "715", "156", "412", "452", "523", "563",
        ],
    ),
    (
        "klein242",
        &[
            "123", "372", "153", "175", "147", "162", "642", "168", "148", "248", "643", "374",
            "685", "653", "825", "275",
        ],
    ),
    (
        "klein242-sub",
        &[
            "123", "372", "153", "175", "147", "162", "642", "168", "148", "248", "643", "374",
            "685", "653",
        ],
    ),
];

/// Triangulations known to need hours of computation.
pub const LONG_RUNNING_TRIANGULATIONS: &[&str] = &["klein242"];

/// Builds a named triangulation. Letters `a`..`z` and digits `1`..`9` both
/// name vertices by position.
pub fn triangulation(name: &str) -> Option<MHGraph> {
    let (_, faces) = TRIANGULATIONS.iter().find(|(n, _)| *n == name)?;
    let vertex = |c: char| match c {
        'a'..='z' => c as u32 - 'a' as u32 + 1,
        _ => c.to_digit(10).expect("digit vertex"),
    };
    let mut m = EdgeMultiset::new();
    for f in faces.iter() {
        m.insert(Edge::new(f.chars().map(vertex)).expect("nonempty face"), 1);
    }
    Some(MHGraph::new(m).expect("nonempty triangulation"))
}

/// All `a`-subsets of `1..=b` as edges of multiplicity one.
pub fn complete_uniform(a: u32, b: u32) -> Result<MHGraph> {
    if a == 0 || a > b {
        return Err(Error::Invalid(format!(
            "complete uniform hypergraph needs 1 <= a <= b, got a={a} b={b}"
        )));
    }
    let mut edges = EdgeMultiset::new();
    let mut idx: Vec<u32> = (1..=a).collect();
    loop {
        edges.insert(Edge::new(idx.iter().copied())?, 1);
        // next combination in lexicographic order
        let Some(i) = (0..a as usize).rev().find(|&i| idx[i] < b - (a - 1 - i as u32)) else {
            break;
        };
        idx[i] += 1;
        for j in i + 1..a as usize {
            idx[j] = idx[j - 1] + 1;
        }
    }
    MHGraph::new(edges)
}

/// One graph of a known-unsatisfiable list.
#[derive(Clone, Debug)]
pub struct ListEntry {
    pub line: usize,
    pub index: Option<u32>,
    pub text: String,
    pub graph: Result<MHGraph>,
}

/// Parses a list with one graph per line and an optional leading index.
/// Blank lines and `#` comments are skipped; a line that fails to parse is
/// kept with its error.
pub fn parse_graph_list(text: &str) -> Vec<ListEntry> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let digits = line.len() - line.trim_start_matches(|c: char| c.is_ascii_digit()).len();
        let (index, body) = if digits > 0 {
            (line[..digits].parse().ok(), line[digits..].trim())
        } else {
            (None, line)
        };
        out.push(ListEntry {
            line: i + 1,
            index,
            text: body.to_string(),
            graph: body.parse(),
        });
    }
    out
}
