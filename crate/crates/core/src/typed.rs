//! The sorted languages: well-formedness (unbounded, or below a sort bound
//! `n >= 4`), decoration of stratified plain formulas, erasure and uniform
//! sort shifts.

use std::fmt;

use thiserror::Error;

use crate::stratify::Stratification;
use crate::syntax::{Formula, Term, TypedVar, Var, Variable};

/// Sort bound of a sorted language.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SortBound {
    Unbounded,
    /// Sorts `0..n`, with `n >= 4`.
    Below(usize),
}

impl SortBound {
    pub fn below(n: usize) -> Result<Self, TypedError> {
        if n < 4 {
            return Err(TypedError::BoundTooSmall(n));
        }
        Ok(SortBound::Below(n))
    }

    pub fn admits(self, sort: usize) -> bool {
        match self {
            SortBound::Unbounded => true,
            SortBound::Below(n) => sort < n,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub enum TypedError {
    #[error("sort bound {0} is below the minimum of 4")]
    BoundTooSmall(usize),
    #[error("pair term {0} has no counterpart in the sorted language")]
    PairTerm(String),
    #[error("sethood atom {0} has no counterpart in the sorted language")]
    Sethood(String),
    #[error("no type assigned to variable {0}")]
    Uncovered(String),
    #[error("assignment violates the membership atom {0}")]
    NotAStratification(String),
}

/// A reason a sorted formula is not well-formed.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Violation {
    /// `x@j in y@k` with `k != j + 1`.
    NonAdjacentMembership { atom: String },
    /// `x@j = y@k` with `j != k`.
    MixedEquality { atom: String },
    /// A variable whose sort is not below the bound.
    SortOutOfBound { var: TypedVar, bound: usize },
    PairTerm { term: String },
    Sethood { atom: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NonAdjacentMembership { atom } => write!(f, "membership between non-adjacent sorts: {atom}"),
            Violation::MixedEquality { atom } => write!(f, "equality between different sorts: {atom}"),
            Violation::SortOutOfBound { var, bound } => write!(f, "variable {var} has sort >= {bound}"),
            Violation::PairTerm { term } => write!(f, "pair term {term}"),
            Violation::Sethood { atom } => write!(f, "sethood atom {atom}"),
        }
    }
}

/// Lists every violation of the sort discipline; empty means well-formed.
pub fn violations(f: &Formula<TypedVar>, bound: SortBound) -> Vec<Violation> {
    let mut out = Vec::new();
    collect_violations(f, bound, &mut out);
    out
}

pub fn check_wellformed(f: &Formula<TypedVar>, bound: SortBound) -> Result<(), Vec<Violation>> {
    let v = violations(f, bound);
    if v.is_empty() {
        Ok(())
    } else {
        Err(v)
    }
}

pub fn is_wellformed(f: &Formula<TypedVar>, bound: SortBound) -> bool {
    violations(f, bound).is_empty()
}

fn check_var(v: &TypedVar, bound: SortBound, out: &mut Vec<Violation>) {
    if let SortBound::Below(n) = bound {
        if v.level() >= n {
            out.push(Violation::SortOutOfBound { var: v.clone(), bound: n });
        }
    }
}

// Variables of an atom; pairs are reported and yield None.
fn atom_var<'a>(t: &'a Term<TypedVar>, bound: SortBound, out: &mut Vec<Violation>) -> Option<&'a TypedVar> {
    match t {
        Term::Var(v) => {
            check_var(v, bound, out);
            Some(v)
        }
        Term::Pair(..) => {
            out.push(Violation::PairTerm { term: t.to_string() });
            None
        }
    }
}

fn collect_violations(f: &Formula<TypedVar>, bound: SortBound, out: &mut Vec<Violation>) {
    match f {
        Formula::Mem(s, t) => {
            let (a, b) = (atom_var(s, bound, out), atom_var(t, bound, out));
            if let (Some(a), Some(b)) = (a, b) {
                if b.level() != a.level() + 1 {
                    out.push(Violation::NonAdjacentMembership { atom: f.to_string() });
                }
            }
        }
        Formula::Eq(s, t) => {
            let (a, b) = (atom_var(s, bound, out), atom_var(t, bound, out));
            if let (Some(a), Some(b)) = (a, b) {
                if a.level() != b.level() {
                    out.push(Violation::MixedEquality { atom: f.to_string() });
                }
            }
        }
        Formula::Set(_) => out.push(Violation::Sethood { atom: f.to_string() }),
        Formula::Not(g) => collect_violations(g, bound, out),
        Formula::Binary(_, l, r) => {
            collect_violations(l, bound, out);
            collect_violations(r, bound, out);
        }
        Formula::Quant(_, v, b) => {
            check_var(v, bound, out);
            collect_violations(b, bound, out);
        }
    }
}

/// Decorates a plain, alpha-separated formula with the types of a
/// stratification: `v` becomes `v@type(v)` and every membership atom
/// `s in t` becomes `s@k in t@(k+1)` with `k = type(s)`.
pub fn decorate(f: &Formula<Var>, strat: &Stratification) -> Result<Formula<TypedVar>, TypedError> {
    check_plain(f)?;
    check_memberships(f, strat)?;
    f.try_map_vars(&mut |v: &Var| {
        strat
            .var_type(v)
            .map(|k| TypedVar::new(v.name(), k))
            .ok_or_else(|| TypedError::Uncovered(v.to_string()))
    })
}

fn check_plain(f: &Formula<Var>) -> Result<(), TypedError> {
    match f {
        Formula::Mem(s, t) | Formula::Eq(s, t) => {
            for term in [s, t] {
                if term.is_pair() {
                    return Err(TypedError::PairTerm(term.to_string()));
                }
            }
            Ok(())
        }
        Formula::Set(_) => Err(TypedError::Sethood(f.to_string())),
        Formula::Not(g) => check_plain(g),
        Formula::Binary(_, l, r) => {
            check_plain(l)?;
            check_plain(r)
        }
        Formula::Quant(_, _, b) => check_plain(b),
    }
}

fn check_memberships(f: &Formula<Var>, strat: &Stratification) -> Result<(), TypedError> {
    match f {
        Formula::Mem(s, t) => {
            let (a, b) = (strat.get(s), strat.get(t));
            match (a, b) {
                (Some(a), Some(b)) if b == a + 1 => Ok(()),
                (None, _) => Err(TypedError::Uncovered(s.to_string())),
                (_, None) => Err(TypedError::Uncovered(t.to_string())),
                _ => Err(TypedError::NotAStratification(f.to_string())),
            }
        }
        Formula::Eq(s, t) => match (strat.get(s), strat.get(t)) {
            (Some(a), Some(b)) if a == b => Ok(()),
            (None, _) => Err(TypedError::Uncovered(s.to_string())),
            (_, None) => Err(TypedError::Uncovered(t.to_string())),
            _ => Err(TypedError::NotAStratification(f.to_string())),
        },
        Formula::Set(_) => Ok(()),
        Formula::Not(g) => check_memberships(g, strat),
        Formula::Binary(_, l, r) => {
            check_memberships(l, strat)?;
            check_memberships(r, strat)
        }
        Formula::Quant(_, _, b) => check_memberships(b, strat),
    }
}

/// Drops sorts.
pub fn erase(f: &Formula<TypedVar>) -> Formula<Var> {
    f.map_vars(&mut |v: &TypedVar| Var::new(v.name()))
}

/// The type assignment read off a sorted formula's variables.
pub fn induced_stratification(f: &Formula<TypedVar>) -> Stratification {
    let mut pairs = Vec::new();
    f.visit_variables(&mut |v: &TypedVar| pairs.push((Term::Var(Var::new(v.name())), v.level())));
    pairs.into_iter().collect()
}

/// Adds `k` to every sort.
pub fn shift(f: &Formula<TypedVar>, k: usize) -> Formula<TypedVar> {
    f.map_vars(&mut |v: &TypedVar| v.with_sort(v.level() + k))
}
