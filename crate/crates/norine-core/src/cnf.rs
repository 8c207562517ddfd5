//! CNF formulas in DIMACS conventions: variables are numbered from 1, a
//! literal is a signed variable, and an instance is a conjunction of
//! disjunctive clauses.
//!
//! [`CnfInstance`] stores clauses in one flat literal pool instead of a
//! vector of vectors; the instances built here run to millions of clauses
//! and the pool keeps them cache-friendly and allocation-cheap.

use crate::error::{Error, Result};

/// A literal: a variable (>= 1) with a sign. Encoded as the signed DIMACS
/// integer, so it is never zero.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Lit(i32);

impl Lit {
    pub fn positive(var: u32) -> Lit {
        assert!(
            var >= 1 && var <= i32::MAX as u32,
            "variable {var} out of range"
        );
        Lit(var as i32)
    }

    pub fn negative(var: u32) -> Lit {
        assert!(
            var >= 1 && var <= i32::MAX as u32,
            "variable {var} out of range"
        );
        Lit(-(var as i32))
    }

    pub fn from_dimacs(code: i32) -> Result<Lit> {
        if code == 0 {
            return Err(Error::ZeroLiteral);
        }
        Ok(Lit(code))
    }

    pub fn var(self) -> u32 {
        self.0.unsigned_abs()
    }

    pub fn is_positive(self) -> bool {
        self.0 > 0
    }

    pub fn to_dimacs(self) -> i32 {
        self.0
    }
}

impl std::ops::Not for Lit {
    type Output = Lit;

    fn not(self) -> Lit {
        Lit(-self.0)
    }
}

impl std::fmt::Display for Lit {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A disjunction of literals. Guaranteed non-empty with no variable
/// appearing twice (in particular, no tautologies).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Clause {
    lits: Vec<Lit>,
}

impl Clause {
    pub fn new(lits: Vec<Lit>) -> Result<Clause> {
        if lits.is_empty() {
            return Err(Error::EmptyClause);
        }
        for (i, a) in lits.iter().enumerate() {
            if lits[..i].iter().any(|b| b.var() == a.var()) {
                return Err(Error::RepeatedVariable { var: a.var() });
            }
        }
        Ok(Clause { lits })
    }

    /// Skips the duplicate-variable scan; for construction sites that
    /// guarantee distinct variables structurally.
    pub(crate) fn new_unchecked(lits: Vec<Lit>) -> Clause {
        debug_assert!(Clause::new(lits.clone()).is_ok());
        Clause { lits }
    }

    pub fn unit(l: Lit) -> Clause {
        Clause { lits: vec![l] }
    }

    pub fn binary(a: Lit, b: Lit) -> Clause {
        assert_ne!(a.var(), b.var());
        Clause { lits: vec![a, b] }
    }

    pub fn literals(&self) -> &[Lit] {
        &self.lits
    }

    /// Number of literals; at least 1 by construction.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.lits.len()
    }
}

impl<'a> IntoIterator for &'a Clause {
    type Item = &'a Lit;
    type IntoIter = std::slice::Iter<'a, Lit>;

    fn into_iter(self) -> Self::IntoIter {
        self.lits.iter()
    }
}

/// A CNF formula: a declared variable count plus a clause list, with
/// optional comment lines carried through DIMACS round trips.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CnfInstance {
    num_vars: u32,
    comments: Vec<String>,
    pool: Vec<Lit>,
    ends: Vec<u32>,
}

impl CnfInstance {
    pub fn new(num_vars: u32) -> CnfInstance {
        CnfInstance {
            num_vars,
            comments: Vec::new(),
            pool: Vec::new(),
            ends: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> u32 {
        self.num_vars
    }

    pub fn num_clauses(&self) -> usize {
        self.ends.len()
    }

    pub(crate) fn reserve(&mut self, clauses: usize, literals: usize) {
        self.ends.reserve(clauses);
        self.pool.reserve(literals);
    }

    pub fn add(&mut self, clause: Clause) {
        self.push_lits(clause.literals());
    }

    /// Appends a clause given as a literal slice. The slice must satisfy the
    /// [`Clause`] invariants and stay within the declared variable count.
    pub fn push_lits(&mut self, lits: &[Lit]) {
        assert!(!lits.is_empty(), "empty clause");
        debug_assert!(lits.iter().all(|l| l.var() <= self.num_vars));
        self.pool.extend_from_slice(lits);
        self.ends.push(self.pool.len() as u32);
    }

    pub fn clause(&self, index: usize) -> &[Lit] {
        let start = if index == 0 {
            0
        } else {
            self.ends[index - 1] as usize
        };
        &self.pool[start..self.ends[index] as usize]
    }

    pub fn clauses(&self) -> impl Iterator<Item = &[Lit]> + '_ {
        (0..self.num_clauses()).map(move |i| self.clause(i))
    }

    pub fn push_comment(&mut self, line: impl Into<String>) {
        self.comments.push(line.into());
    }

    pub fn comments(&self) -> &[String] {
        &self.comments
    }

    /// Total literal count across all clauses.
    pub fn num_literals(&self) -> usize {
        self.pool.len()
    }
}
