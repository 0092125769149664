//! Boolean formulae in conjunctive normal form.
//!
//! Literals are variables (positive integers), their negations, or the two
//! constants `TRUE`/`FALSE`. Every [`Cnf`] handed out by this module is
//! tautologically reduced, so `(TRUE)` and `(FALSE)` are the only
//! representations of constant formulae and structural equality is
//! meaningful.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A literal: a variable, a negated variable, or one of the two constants.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Literal {
    Top,
    Bottom,
    Pos(u32),
    Neg(u32),
}

impl Literal {
    /// Builds a variable literal from a signed integer (`-3` is the negation
    /// of variable 3).
    pub fn from_int(i: i32) -> Result<Self> {
        match i.cmp(&0) {
            Ordering::Greater => Ok(Literal::Pos(i as u32)),
            Ordering::Less => Ok(Literal::Neg(i.unsigned_abs())),
            Ordering::Equal => Err(Error::ZeroId),
        }
    }

    pub fn var(v: u32, positive: bool) -> Self {
        assert!(v >= 1, "variable ids start at 1");
        if positive {
            Literal::Pos(v)
        } else {
            Literal::Neg(v)
        }
    }

    pub fn negate(self) -> Self {
        match self {
            Literal::Top => Literal::Bottom,
            Literal::Bottom => Literal::Top,
            Literal::Pos(v) => Literal::Neg(v),
            Literal::Neg(v) => Literal::Pos(v),
        }
    }

    /// The variable underlying a non-constant literal.
    pub fn variable(self) -> Option<u32> {
        match self {
            Literal::Pos(v) | Literal::Neg(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_positive(self) -> bool {
        matches!(self, Literal::Pos(_))
    }

    fn key(self) -> (u32, u8) {
        match self {
            Literal::Top => (0, 0),
            Literal::Bottom => (0, 1),
            Literal::Pos(v) => (v, 0),
            Literal::Neg(v) => (v, 1),
        }
    }
}

impl Ord for Literal {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl PartialOrd for Literal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Literal::Top => write!(f, "TRUE"),
            Literal::Bottom => write!(f, "FALSE"),
            Literal::Pos(v) => write!(f, "{v}"),
            Literal::Neg(v) => write!(f, "-{v}"),
        }
    }
}

/// Negation on literals, mapping `TRUE` and `FALSE` onto each other.
pub fn negate(l: Literal) -> Literal {
    l.negate()
}

/// A disjunction of one or more literals with set semantics.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Clause {
    lits: Vec<Literal>,
}

enum Reduced {
    Top,
    Bottom,
    Lits(Clause),
}

impl Clause {
    pub fn new<I: IntoIterator<Item = Literal>>(lits: I) -> Result<Self> {
        let mut lits: Vec<Literal> = lits.into_iter().collect();
        if lits.is_empty() {
            return Err(Error::Invalid("a clause needs at least one literal".into()));
        }
        lits.sort();
        lits.dedup();
        Ok(Clause { lits })
    }

    pub fn from_ints(ints: &[i32]) -> Result<Self> {
        Clause::new(ints.iter().map(|&i| Literal::from_int(i)).collect::<Result<Vec<_>>>()?)
    }

    pub(crate) fn from_sorted_unchecked(lits: Vec<Literal>) -> Self {
        debug_assert!(!lits.is_empty());
        debug_assert!(lits.windows(2).all(|w| w[0] < w[1]));
        Clause { lits }
    }

    pub fn literals(&self) -> &[Literal] {
        &self.lits
    }

    pub fn len(&self) -> usize {
        self.lits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lits.is_empty()
    }

    /// Variables appearing in this clause, ascending.
    pub fn variables(&self) -> impl Iterator<Item = u32> + '_ {
        self.lits.iter().filter_map(|l| l.variable())
    }

    fn top() -> Self {
        Clause { lits: vec![Literal::Top] }
    }

    fn bottom() -> Self {
        Clause { lits: vec![Literal::Bottom] }
    }

    fn reduce(&self) -> Reduced {
        let mut out = Vec::with_capacity(self.lits.len());
        for &l in &self.lits {
            match l {
                Literal::Top => return Reduced::Top,
                Literal::Bottom => {}
                Literal::Pos(_) => out.push(l),
                Literal::Neg(v) => {
                    // Pos(v) sorts immediately before Neg(v).
                    if out.last() == Some(&Literal::Pos(v)) {
                        return Reduced::Top;
                    }
                    out.push(l);
                }
            }
        }
        if out.is_empty() {
            Reduced::Bottom
        } else {
            Reduced::Lits(Clause { lits: out })
        }
    }

    fn union(&self, other: &Clause) -> Clause {
        let mut lits = Vec::with_capacity(self.lits.len() + other.lits.len());
        lits.extend_from_slice(&self.lits);
        lits.extend_from_slice(&other.lits);
        lits.sort();
        lits.dedup();
        Clause { lits }
    }
}

impl Ord for Clause {
    fn cmp(&self, other: &Self) -> Ordering {
        self.lits
            .len()
            .cmp(&other.lits.len())
            .then_with(|| self.lits.cmp(&other.lits))
    }
}

impl PartialOrd for Clause {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, l) in self.lits.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, ")")
    }
}

/// A conjunction of one or more clauses, always tautologically reduced.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Cnf {
    clauses: Vec<Clause>,
}

impl Cnf {
    /// The trivially true formula `(TRUE)`.
    pub fn top() -> Self {
        Cnf {
            clauses: vec![Clause::top()],
        }
    }

    /// The trivially false formula `(FALSE)`.
    pub fn bottom() -> Self {
        Cnf {
            clauses: vec![Clause::bottom()],
        }
    }

    /// Conjunction of the given clauses, tautologically reduced.
    pub fn new<I: IntoIterator<Item = Clause>>(clauses: I) -> Result<Self> {
        let clauses: Vec<Clause> = clauses.into_iter().collect();
        if clauses.is_empty() {
            return Err(Error::Invalid("a Cnf needs at least one clause".into()));
        }
        Ok(tautologically_reduce(&clauses))
    }

    /// Convenience constructor: `Cnf::from_ints(&[&[1, -2], &[3]])`.
    pub fn from_ints(clauses: &[&[i32]]) -> Result<Self> {
        Cnf::new(
            clauses
                .iter()
                .map(|c| Clause::from_ints(c))
                .collect::<Result<Vec<_>>>()?,
        )
    }

    /// Builds a Cnf from clauses that are already free of constants and
    /// complementary pairs.
    pub(crate) fn from_reduced_clauses(mut clauses: Vec<Clause>) -> Self {
        if clauses.is_empty() {
            return Cnf::top();
        }
        clauses.sort();
        clauses.dedup();
        Cnf { clauses }
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn is_top(&self) -> bool {
        self.clauses.len() == 1 && self.clauses[0].lits == [Literal::Top]
    }

    pub fn is_bottom(&self) -> bool {
        self.clauses.len() == 1 && self.clauses[0].lits == [Literal::Bottom]
    }

    pub fn variables(&self) -> BTreeSet<u32> {
        self.clauses.iter().flat_map(|c| c.variables()).collect()
    }

    pub fn assign(&self, a: &Assignment) -> Cnf {
        assign(self, a)
    }

    /// Logical simplification by subsumption and by merging clause pairs that
    /// differ only in the polarity of one literal. Unlike tautological
    /// reduction this changes the syntax of the formula (not its meaning),
    /// so graph-level operations do not apply it implicitly.
    pub fn simplified(&self) -> Cnf {
        if self.is_top() || self.is_bottom() {
            return self.clone();
        }
        let mut set: BTreeSet<Clause> = self.clauses.iter().cloned().collect();
        loop {
            let mut changed = false;
            'merge: for c in set.iter() {
                for (i, &l) in c.lits.iter().enumerate() {
                    let mut other = c.lits.clone();
                    other[i] = l.negate();
                    other.sort();
                    let other = Clause { lits: other };
                    if set.contains(&other) {
                        let mut shorter = c.lits.clone();
                        shorter.remove(i);
                        let (c, shorter) = (c.clone(), shorter);
                        set.remove(&c);
                        set.remove(&other);
                        if shorter.is_empty() {
                            return Cnf::bottom();
                        }
                        set.insert(Clause { lits: shorter });
                        changed = true;
                        break 'merge;
                    }
                }
            }
            let snapshot: Vec<Clause> = set.iter().cloned().collect();
            for big in &snapshot {
                if snapshot
                    .iter()
                    .any(|small| small != big && is_subset(&small.lits, &big.lits))
                {
                    set.remove(big);
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        Cnf::from_reduced_clauses(set.into_iter().collect())
    }
}

fn is_subset(small: &[Literal], big: &[Literal]) -> bool {
    small.len() < big.len() && small.iter().all(|l| big.binary_search(l).is_ok())
}

impl Ord for Cnf {
    fn cmp(&self, other: &Self) -> Ordering {
        self.clauses
            .len()
            .cmp(&other.clauses.len())
            .then_with(|| self.clauses.cmp(&other.clauses))
    }
}

impl PartialOrd for Cnf {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Cnf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_top() {
            return write!(f, "TRUE");
        }
        if self.is_bottom() {
            return write!(f, "FALSE");
        }
        for c in &self.clauses {
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl FromStr for Cnf {
    type Err = Error;

    /// Parses the text form written by `Display`: `(1,-2)(3)`, `TRUE`, `FALSE`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        match t {
            "TRUE" => return Ok(Cnf::top()),
            "FALSE" => return Ok(Cnf::bottom()),
            _ => {}
        }
        let bytes = t.as_bytes();
        let mut clauses = Vec::new();
        let mut i = 0;
        let err = |pos: usize, msg: &str| Error::Parse {
            pos,
            msg: msg.to_string(),
        };
        while i < bytes.len() {
            if bytes[i].is_ascii_whitespace() {
                i += 1;
                continue;
            }
            if bytes[i] != b'(' {
                return Err(err(i, "expected '('"));
            }
            let close = t[i..]
                .find(')')
                .map(|j| i + j)
                .ok_or_else(|| err(i, "unclosed clause"))?;
            let mut lits = Vec::new();
            for tok in t[i + 1..close].split(',') {
                let tok = tok.trim();
                let lit = match tok {
                    "TRUE" => Literal::Top,
                    "FALSE" => Literal::Bottom,
                    _ => tok
                        .parse::<i32>()
                        .map_err(|_| err(i, "bad literal"))
                        .and_then(Literal::from_int)?,
                };
                lits.push(lit);
            }
            clauses.push(Clause::new(lits)?);
            i = close + 1;
        }
        Cnf::new(clauses)
    }
}

/// Applies the tautological reduction rules to a list of clauses until a
/// fixed point: clauses with `TRUE` or a complementary pair become `TRUE` and
/// are dropped, `FALSE` literals are removed, an emptied clause makes the
/// whole formula `(FALSE)`, and an empty conjunction is `(TRUE)`.
pub fn tautologically_reduce(clauses: &[Clause]) -> Cnf {
    let mut kept = Vec::with_capacity(clauses.len());
    for c in clauses {
        match c.reduce() {
            Reduced::Top => {}
            Reduced::Bottom => return Cnf::bottom(),
            Reduced::Lits(c) => kept.push(c),
        }
    }
    Cnf::from_reduced_clauses(kept)
}

/// A consistent set of variable literals.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Assignment {
    lits: BTreeMap<u32, bool>,
}

impl Assignment {
    pub fn new<I: IntoIterator<Item = Literal>>(lits: I) -> Result<Self> {
        let mut map = BTreeMap::new();
        for l in lits {
            let (v, pos) = match l {
                Literal::Pos(v) => (v, true),
                Literal::Neg(v) => (v, false),
                _ => return Err(Error::SentinelInAssignment),
            };
            if v == 0 {
                return Err(Error::ZeroId);
            }
            if let Some(&prev) = map.get(&v) {
                if prev != pos {
                    return Err(Error::InconsistentAssignment(v));
                }
            }
            map.insert(v, pos);
        }
        Ok(Assignment { lits: map })
    }

    pub fn from_ints(ints: &[i32]) -> Result<Self> {
        Assignment::new(ints.iter().map(|&i| Literal::from_int(i)).collect::<Result<Vec<_>>>()?)
    }

    pub fn value(&self, v: u32) -> Option<bool> {
        self.lits.get(&v).copied()
    }

    pub fn len(&self) -> usize {
        self.lits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lits.is_empty()
    }
}

/// `x[a]`: replaces assigned literals by `TRUE`, their negations by `FALSE`,
/// then reduces.
pub fn assign(x: &Cnf, a: &Assignment) -> Cnf {
    let clauses: Vec<Clause> = x
        .clauses
        .iter()
        .map(|c| {
            let lits: Vec<Literal> = c
                .lits
                .iter()
                .map(|&l| match l {
                    Literal::Pos(v) => match a.value(v) {
                        Some(true) => Literal::Top,
                        Some(false) => Literal::Bottom,
                        None => l,
                    },
                    Literal::Neg(v) => match a.value(v) {
                        Some(true) => Literal::Bottom,
                        Some(false) => Literal::Top,
                        None => l,
                    },
                    _ => l,
                })
                .collect();
            Clause::new(lits).expect("nonempty")
        })
        .collect();
    tautologically_reduce(&clauses)
}

/// Conjunction: union of the clause sets, reduced.
pub fn cnf_and_cnf(x: &Cnf, y: &Cnf) -> Cnf {
    if x.is_bottom() || y.is_bottom() {
        return Cnf::bottom();
    }
    if x.is_top() {
        return y.clone();
    }
    if y.is_top() {
        return x.clone();
    }
    let mut clauses = x.clauses.clone();
    clauses.extend(y.clauses.iter().cloned());
    Cnf::from_reduced_clauses(clauses)
}

/// Disjunction brought back to normal form by distributing every clause of
/// `y` across `x` and conjoining the results. No fresh variables are added.
pub fn cnf_or_cnf(x: &Cnf, y: &Cnf) -> Cnf {
    if x.is_top() || y.is_top() {
        return Cnf::top();
    }
    if x.is_bottom() {
        return y.clone();
    }
    if y.is_bottom() {
        return x.clone();
    }
    let mut out = Vec::with_capacity(x.clauses.len() * y.clauses.len());
    for cy in &y.clauses {
        for cx in &x.clauses {
            let u = cx.union(cy);
            if let Reduced::Lits(c) = u.reduce() {
                out.push(c);
            }
        }
    }
    Cnf::from_reduced_clauses(out)
}

/// Satisfiability of a finite Cnf, decided by unit-propagating backtracking.
pub fn sigma(x: &Cnf) -> bool {
    if x.is_top() {
        return true;
    }
    if x.is_bottom() {
        return false;
    }
    let mut index: BTreeMap<u32, usize> = BTreeMap::new();
    for v in x.variables() {
        let n = index.len();
        index.insert(v, n);
    }
    let clauses: Vec<Vec<i32>> = x
        .clauses
        .iter()
        .map(|c| {
            c.lits
                .iter()
                .map(|l| match *l {
                    Literal::Pos(v) => index[&v] as i32 + 1,
                    Literal::Neg(v) => -(index[&v] as i32 + 1),
                    _ => unreachable!("reduced clauses carry no constants"),
                })
                .collect()
        })
        .collect();
    let mut dpll = Dpll {
        clauses,
        values: vec![0; index.len() + 1],
        trail: Vec::new(),
    };
    dpll.solve()
}

struct Dpll {
    clauses: Vec<Vec<i32>>,
    // 0 unassigned, 1 true, -1 false; indexed by variable (1-based)
    values: Vec<i8>,
    trail: Vec<usize>,
}

impl Dpll {
    fn lit_value(&self, l: i32) -> i8 {
        let v = self.values[l.unsigned_abs() as usize];
        if l > 0 {
            v
        } else {
            -v
        }
    }

    fn set(&mut self, l: i32) {
        let var = l.unsigned_abs() as usize;
        self.values[var] = if l > 0 { 1 } else { -1 };
        self.trail.push(var);
    }

    /// Returns `Err(())` on conflict, otherwise the branching literal (0 when
    /// every clause is satisfied).
    fn propagate(&mut self) -> std::result::Result<i32, ()> {
        loop {
            let mut unit = None;
            let mut branch = 0;
            let mut best_len = usize::MAX;
            for c in &self.clauses {
                let mut free = 0;
                let mut last_free = 0;
                let mut sat = false;
                for &l in c {
                    match self.lit_value(l) {
                        1 => {
                            sat = true;
                            break;
                        }
                        0 => {
                            free += 1;
                            last_free = l;
                        }
                        _ => {}
                    }
                }
                if sat {
                    continue;
                }
                match free {
                    0 => return Err(()),
                    1 => {
                        unit = Some(last_free);
                        break;
                    }
                    n if n < best_len => {
                        best_len = n;
                        branch = last_free;
                    }
                    _ => {}
                }
            }
            match unit {
                Some(l) => self.set(l),
                None => return Ok(branch),
            }
        }
    }

    fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let v = self.trail.pop().unwrap();
            self.values[v] = 0;
        }
    }

    fn solve(&mut self) -> bool {
        let mark = self.trail.len();
        let branch = match self.propagate() {
            Err(()) => {
                self.undo_to(mark);
                return false;
            }
            Ok(0) => return true,
            Ok(l) => l,
        };
        for l in [branch, -branch] {
            let inner = self.trail.len();
            self.set(l);
            if self.solve() {
                return true;
            }
            self.undo_to(inner);
        }
        self.undo_to(mark);
        false
    }
}

/// Exhaustive-assignment satisfiability check, used as an oracle for
/// [`sigma`]. Refuses formulae over more than 20 variables.
pub fn sigma_exhaustive(x: &Cnf) -> Result<bool> {
    if x.is_top() {
        return Ok(true);
    }
    if x.is_bottom() {
        return Ok(false);
    }
    let vars: Vec<u32> = x.variables().into_iter().collect();
    if vars.len() > 20 {
        return Err(Error::VariableBound(vars.len()));
    }
    for bits in 0u32..(1u32 << vars.len()) {
        let a = Assignment {
            lits: vars
                .iter()
                .enumerate()
                .map(|(i, &v)| (v, bits >> i & 1 == 1))
                .collect(),
        };
        if assign(x, &a).is_top() {
            return Ok(true);
        }
    }
    Ok(false)
}
