//! Formula trees shared by the untyped language (with its pairing and sethood
//! extensions) and the sorted language.
//!
//! A single [`Formula`] type is parameterised by its variable kind: [`Var`]
//! for untyped formulas, [`TypedVar`] for sorted ones. Operations that only
//! depend on binding structure (free variables, alpha-separation,
//! alpha-equivalence, printing) are written once.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::hash::Hash;

/// Words that can never be identifiers.
pub const RESERVED: [&str; 3] = ["in", "forall", "exists"];

/// Returns true for nonempty ASCII alphanumeric strings starting with a
/// letter that are not reserved words.
pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric()) && !RESERVED.contains(&s)
}

/// Behaviour common to untyped and sorted variables.
pub trait Variable: Clone + Eq + Ord + Hash + fmt::Debug + fmt::Display {
    /// Whether variables of this kind carry a sort.
    const TYPED: bool;

    fn name(&self) -> &str;

    fn sort(&self) -> Option<usize>;

    /// The same variable kind (and sort) under a different name.
    fn renamed(&self, name: String) -> Self;
}

/// An untyped variable.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Var(String);

impl Var {
    /// # Panics
    ///
    /// Panics if `name` is not a valid identifier.
    pub fn new(name: impl Into<String>) -> Self {
        let name = name.into();
        assert!(is_identifier(&name), "invalid identifier {name:?}");
        Var(name)
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl Variable for Var {
    const TYPED: bool = false;

    fn name(&self) -> &str {
        &self.0
    }

    fn sort(&self) -> Option<usize> {
        None
    }

    fn renamed(&self, name: String) -> Self {
        Var::new(name)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A variable of the sorted language, written `x@k`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct TypedVar {
    name: String,
    sort: usize,
}

impl TypedVar {
    /// # Panics
    ///
    /// Panics if `name` is not a valid identifier.
    pub fn new(name: impl Into<String>, sort: usize) -> Self {
        let name = name.into();
        assert!(is_identifier(&name), "invalid identifier {name:?}");
        TypedVar { name, sort }
    }

    pub fn level(&self) -> usize {
        self.sort
    }

    pub fn with_sort(&self, sort: usize) -> Self {
        TypedVar {
            name: self.name.clone(),
            sort,
        }
    }
}

impl Variable for TypedVar {
    const TYPED: bool = true;

    fn name(&self) -> &str {
        &self.name
    }

    fn sort(&self) -> Option<usize> {
        Some(self.sort)
    }

    fn renamed(&self, name: String) -> Self {
        TypedVar::new(name, self.sort)
    }
}

impl fmt::Display for TypedVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.name, self.sort)
    }
}

/// A term: a variable or a type-level pair of terms.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Term<V> {
    Var(V),
    Pair(Box<Term<V>>, Box<Term<V>>),
}

impl<V: Variable> Term<V> {
    pub fn var(v: V) -> Self {
        Term::Var(v)
    }

    pub fn pair(left: Term<V>, right: Term<V>) -> Self {
        Term::Pair(Box::new(left), Box::new(right))
    }

    pub fn as_var(&self) -> Option<&V> {
        match self {
            Term::Var(v) => Some(v),
            Term::Pair(..) => None,
        }
    }

    /// Every subterm, in pre-order (the term itself first).
    pub fn subterms(&self) -> Vec<&Term<V>> {
        let mut out = Vec::new();
        self.collect_subterms(&mut out);
        out
    }

    fn collect_subterms<'a>(&'a self, out: &mut Vec<&'a Term<V>>) {
        out.push(self);
        if let Term::Pair(l, r) = self {
            l.collect_subterms(out);
            r.collect_subterms(out);
        }
    }

    /// Variable occurrences, left to right.
    pub fn variables(&self) -> Vec<&V> {
        let mut out = Vec::new();
        self.visit_vars(&mut |v| out.push(v));
        out
    }

    fn visit_vars<'a>(&'a self, f: &mut impl FnMut(&'a V)) {
        match self {
            Term::Var(v) => f(v),
            Term::Pair(l, r) => {
                l.visit_vars(f);
                r.visit_vars(f);
            }
        }
    }

    pub fn map_vars<W>(&self, f: &mut impl FnMut(&V) -> W) -> Term<W> {
        match self {
            Term::Var(v) => Term::Var(f(v)),
            Term::Pair(l, r) => Term::Pair(Box::new(l.map_vars(f)), Box::new(r.map_vars(f))),
        }
    }

    pub fn try_map_vars<W, E>(&self, f: &mut impl FnMut(&V) -> Result<W, E>) -> Result<Term<W>, E> {
        Ok(match self {
            Term::Var(v) => Term::Var(f(v)?),
            Term::Pair(l, r) => Term::Pair(Box::new(l.try_map_vars(f)?), Box::new(r.try_map_vars(f)?)),
        })
    }

    pub fn is_pair(&self) -> bool {
        matches!(self, Term::Pair(..))
    }
}

impl<V: fmt::Display> fmt::Display for Term<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::Pair(l, r) => write!(f, "<{l},{r}>"),
        }
    }
}

/// Binary connectives.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Connective {
    And,
    Or,
    Implies,
    Iff,
}

impl Connective {
    pub const ALL: [Connective; 4] = [
        Connective::And,
        Connective::Or,
        Connective::Implies,
        Connective::Iff,
    ];

    pub fn symbol(self) -> &'static str {
        match self {
            Connective::And => "&",
            Connective::Or => "|",
            Connective::Implies => "->",
            Connective::Iff => "<->",
        }
    }
}

/// Quantifiers.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Quantifier {
    Forall,
    Exists,
}

impl Quantifier {
    pub fn keyword(self) -> &'static str {
        match self {
            Quantifier::Forall => "forall",
            Quantifier::Exists => "exists",
        }
    }

    pub fn dual(self) -> Self {
        match self {
            Quantifier::Forall => Quantifier::Exists,
            Quantifier::Exists => Quantifier::Forall,
        }
    }
}

/// A formula over variables of kind `V`.
///
/// With `V = Var` this is the untyped language with membership, equality,
/// the sethood predicate and pair terms; the plain language is the fragment
/// without the last two. With `V = TypedVar` it is the sorted language; pair
/// terms and sethood atoms are representable there but never well-formed.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Formula<V> {
    Mem(Term<V>, Term<V>),
    Eq(Term<V>, Term<V>),
    Set(Term<V>),
    Not(Box<Formula<V>>),
    Binary(Connective, Box<Formula<V>>, Box<Formula<V>>),
    Quant(Quantifier, V, Box<Formula<V>>),
}

impl<V: Variable> Formula<V> {
    pub fn mem(s: Term<V>, t: Term<V>) -> Self {
        Formula::Mem(s, t)
    }

    pub fn eq(s: Term<V>, t: Term<V>) -> Self {
        Formula::Eq(s, t)
    }

    pub fn set(t: Term<V>) -> Self {
        Formula::Set(t)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula<V>) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn binary(c: Connective, l: Formula<V>, r: Formula<V>) -> Self {
        Formula::Binary(c, Box::new(l), Box::new(r))
    }

    pub fn and(l: Formula<V>, r: Formula<V>) -> Self {
        Self::binary(Connective::And, l, r)
    }

    pub fn or(l: Formula<V>, r: Formula<V>) -> Self {
        Self::binary(Connective::Or, l, r)
    }

    pub fn implies(l: Formula<V>, r: Formula<V>) -> Self {
        Self::binary(Connective::Implies, l, r)
    }

    pub fn iff(l: Formula<V>, r: Formula<V>) -> Self {
        Self::binary(Connective::Iff, l, r)
    }

    pub fn forall(v: V, body: Formula<V>) -> Self {
        Formula::Quant(Quantifier::Forall, v, Box::new(body))
    }

    pub fn exists(v: V, body: Formula<V>) -> Self {
        Formula::Quant(Quantifier::Exists, v, Box::new(body))
    }

    /// Number of formula nodes plus term nodes.
    pub fn size(&self) -> usize {
        fn term_size<V>(t: &Term<V>) -> usize {
            match t {
                Term::Var(_) => 1,
                Term::Pair(l, r) => 1 + term_size(l) + term_size(r),
            }
        }
        match self {
            Formula::Mem(s, t) | Formula::Eq(s, t) => 1 + term_size(s) + term_size(t),
            Formula::Set(t) => 1 + term_size(t),
            Formula::Not(f) => 1 + f.size(),
            Formula::Binary(_, l, r) => 1 + l.size() + r.size(),
            Formula::Quant(_, _, b) => 2 + b.size(),
        }
    }

    /// Whether the formula uses only membership and equality between
    /// variables (no pair terms, no sethood atoms).
    pub fn is_plain(&self) -> bool {
        match self {
            Formula::Mem(s, t) | Formula::Eq(s, t) => !s.is_pair() && !t.is_pair(),
            Formula::Set(_) => false,
            Formula::Not(f) => f.is_plain(),
            Formula::Binary(_, l, r) => l.is_plain() && r.is_plain(),
            Formula::Quant(_, _, b) => b.is_plain(),
        }
    }

    /// Visits every variable occurrence, binders included, in textual order.
    pub fn visit_variables<'a>(&'a self, f: &mut impl FnMut(&'a V)) {
        match self {
            Formula::Mem(s, t) | Formula::Eq(s, t) => {
                s.visit_vars(f);
                t.visit_vars(f);
            }
            Formula::Set(t) => t.visit_vars(f),
            Formula::Not(g) => g.visit_variables(f),
            Formula::Binary(_, l, r) => {
                l.visit_variables(f);
                r.visit_variables(f);
            }
            Formula::Quant(_, v, b) => {
                f(v);
                b.visit_variables(f);
            }
        }
    }

    /// Distinct variables (free or bound) in order of first occurrence.
    pub fn variables_in_order(&self) -> Vec<V> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        self.visit_variables(&mut |v| {
            if seen.insert(v) {
                out.push(v.clone());
            }
        });
        out
    }

    /// Every identifier used anywhere in the formula.
    pub fn names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit_variables(&mut |v| {
            out.insert(v.name().to_string());
        });
        out
    }

    /// Binder variables in textual order (with repetitions).
    pub fn binders(&self) -> Vec<&V> {
        let mut out = Vec::new();
        self.visit_binders(&mut out);
        out
    }

    fn visit_binders<'a>(&'a self, out: &mut Vec<&'a V>) {
        match self {
            Formula::Mem(..) | Formula::Eq(..) | Formula::Set(_) => {}
            Formula::Not(g) => g.visit_binders(out),
            Formula::Binary(_, l, r) => {
                l.visit_binders(out);
                r.visit_binders(out);
            }
            Formula::Quant(_, v, b) => {
                out.push(v);
                b.visit_binders(out);
            }
        }
    }

    pub fn free_variables(&self) -> BTreeSet<V> {
        self.free_variables_in_order().into_iter().collect()
    }

    /// Free variables in order of first free occurrence, left to right.
    pub fn free_variables_in_order(&self) -> Vec<V> {
        let mut out = Vec::new();
        let mut bound = Vec::new();
        self.collect_free(&mut bound, &mut out);
        out
    }

    fn collect_free<'a>(&'a self, bound: &mut Vec<&'a V>, out: &mut Vec<V>) {
        let note = |v: &'a V, out: &mut Vec<V>| {
            if !bound.contains(&v) && !out.contains(v) {
                out.push(v.clone());
            }
        };
        match self {
            Formula::Mem(s, t) | Formula::Eq(s, t) => {
                for v in s.variables().into_iter().chain(t.variables()) {
                    note(v, out);
                }
            }
            Formula::Set(t) => {
                for v in t.variables() {
                    note(v, out);
                }
            }
            Formula::Not(g) => g.collect_free(bound, out),
            Formula::Binary(_, l, r) => {
                l.collect_free(bound, out);
                r.collect_free(bound, out);
            }
            Formula::Quant(_, v, b) => {
                bound.push(v);
                b.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    pub fn is_sentence(&self) -> bool {
        self.free_variables_in_order().is_empty()
    }

    /// Renames binders so that every binder introduces a variable distinct
    /// from all other binders and from every free variable. Fresh names
    /// append the smallest decimal index not used anywhere in the formula.
    pub fn alpha_separate(&self) -> Self {
        let mut used = self.names();
        let mut claimed: HashSet<V> = self.free_variables_in_order().into_iter().collect();
        let mut env = Vec::new();
        self.separate(&mut env, &mut used, &mut claimed)
    }

    fn separate(
        &self,
        env: &mut Vec<(V, V)>,
        used: &mut BTreeSet<String>,
        claimed: &mut HashSet<V>,
    ) -> Self {
        let lookup = |v: &V, env: &Vec<(V, V)>| {
            env.iter()
                .rev()
                .find(|(old, _)| old == v)
                .map_or_else(|| v.clone(), |(_, new)| new.clone())
        };
        match self {
            Formula::Mem(s, t) => Formula::Mem(s.map_vars(&mut |v| lookup(v, env)), t.map_vars(&mut |v| lookup(v, env))),
            Formula::Eq(s, t) => Formula::Eq(s.map_vars(&mut |v| lookup(v, env)), t.map_vars(&mut |v| lookup(v, env))),
            Formula::Set(t) => Formula::Set(t.map_vars(&mut |v| lookup(v, env))),
            Formula::Not(g) => Formula::not(g.separate(env, used, claimed)),
            Formula::Binary(c, l, r) => {
                let l = l.separate(env, used, claimed);
                let r = r.separate(env, used, claimed);
                Formula::binary(*c, l, r)
            }
            Formula::Quant(q, v, b) => {
                let new = if claimed.contains(v) {
                    let name = fresh_name(v.name(), used);
                    used.insert(name.clone());
                    v.renamed(name)
                } else {
                    v.clone()
                };
                claimed.insert(new.clone());
                env.push((v.clone(), new.clone()));
                let b = b.separate(env, used, claimed);
                env.pop();
                Formula::Quant(*q, new, Box::new(b))
            }
        }
    }

    /// Equality up to consistent renaming of bound variables. Binders must
    /// agree on sort.
    pub fn alpha_eq(&self, other: &Self) -> bool {
        alpha_eq_rec(self, other, &mut Vec::new())
    }

    pub fn map_vars<W>(&self, f: &mut impl FnMut(&V) -> W) -> Formula<W> {
        match self {
            Formula::Mem(s, t) => Formula::Mem(s.map_vars(f), t.map_vars(f)),
            Formula::Eq(s, t) => Formula::Eq(s.map_vars(f), t.map_vars(f)),
            Formula::Set(t) => Formula::Set(t.map_vars(f)),
            Formula::Not(g) => Formula::Not(Box::new(g.map_vars(f))),
            Formula::Binary(c, l, r) => Formula::Binary(*c, Box::new(l.map_vars(f)), Box::new(r.map_vars(f))),
            Formula::Quant(q, v, b) => {
                let v = f(v);
                Formula::Quant(*q, v, Box::new(b.map_vars(f)))
            }
        }
    }

    pub fn try_map_vars<W, E>(&self, f: &mut impl FnMut(&V) -> Result<W, E>) -> Result<Formula<W>, E> {
        Ok(match self {
            Formula::Mem(s, t) => Formula::Mem(s.try_map_vars(f)?, t.try_map_vars(f)?),
            Formula::Eq(s, t) => Formula::Eq(s.try_map_vars(f)?, t.try_map_vars(f)?),
            Formula::Set(t) => Formula::Set(t.try_map_vars(f)?),
            Formula::Not(g) => Formula::Not(Box::new(g.try_map_vars(f)?)),
            Formula::Binary(c, l, r) => {
                Formula::Binary(*c, Box::new(l.try_map_vars(f)?), Box::new(r.try_map_vars(f)?))
            }
            Formula::Quant(q, v, b) => {
                let v = f(v)?;
                Formula::Quant(*q, v, Box::new(b.try_map_vars(f)?))
            }
        })
    }

    /// Universal closure over `vars`, the first element outermost.
    pub fn close_universally(self, vars: &[V]) -> Self {
        vars.iter().rev().fold(self, |acc, v| Formula::forall(v.clone(), acc))
    }
}

/// `base` followed by the smallest decimal index giving a name not in `used`.
pub fn fresh_name(base: &str, used: &BTreeSet<String>) -> String {
    (0u64..)
        .map(|i| format!("{base}{i}"))
        .find(|n| !used.contains(n))
        .expect("unbounded index space")
}

fn alpha_eq_term<V: Variable>(a: &Term<V>, b: &Term<V>, env: &[(V, V)]) -> bool {
    match (a, b) {
        (Term::Var(x), Term::Var(y)) => {
            let ix = env.iter().rposition(|(l, _)| l == x);
            let iy = env.iter().rposition(|(_, r)| r == y);
            match (ix, iy) {
                (Some(i), Some(j)) => i == j,
                (None, None) => x == y,
                _ => false,
            }
        }
        (Term::Pair(a1, a2), Term::Pair(b1, b2)) => {
            alpha_eq_term(a1, b1, env) && alpha_eq_term(a2, b2, env)
        }
        _ => false,
    }
}

fn alpha_eq_rec<V: Variable>(a: &Formula<V>, b: &Formula<V>, env: &mut Vec<(V, V)>) -> bool {
    match (a, b) {
        (Formula::Mem(s1, t1), Formula::Mem(s2, t2)) | (Formula::Eq(s1, t1), Formula::Eq(s2, t2)) => {
            alpha_eq_term(s1, s2, env) && alpha_eq_term(t1, t2, env)
        }
        (Formula::Set(t1), Formula::Set(t2)) => alpha_eq_term(t1, t2, env),
        (Formula::Not(f), Formula::Not(g)) => alpha_eq_rec(f, g, env),
        (Formula::Binary(c1, l1, r1), Formula::Binary(c2, l2, r2)) => {
            c1 == c2 && alpha_eq_rec(l1, l2, env) && alpha_eq_rec(r1, r2, env)
        }
        (Formula::Quant(q1, x, f), Formula::Quant(q2, y, g)) => {
            if q1 != q2 || x.sort() != y.sort() {
                return false;
            }
            env.push((x.clone(), y.clone()));
            let ok = alpha_eq_rec(f, g, env);
            env.pop();
            ok
        }
        _ => false,
    }
}

// Printing precedence: higher binds tighter.
const PREC_QUANT: u8 = 0;
const PREC_IFF: u8 = 1;
const PREC_IMP: u8 = 2;
const PREC_OR: u8 = 3;
const PREC_AND: u8 = 4;
const PREC_ATOM: u8 = 5;

impl<V: Variable> Formula<V> {
    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, ctx: u8) -> fmt::Result {
        let (own, l_ctx, r_ctx) = match self {
            Formula::Binary(Connective::Iff, ..) => (PREC_IFF, PREC_IFF, PREC_IMP),
            Formula::Binary(Connective::Implies, ..) => (PREC_IMP, PREC_OR, PREC_IMP),
            Formula::Binary(Connective::Or, ..) => (PREC_OR, PREC_OR, PREC_AND),
            Formula::Binary(Connective::And, ..) => (PREC_AND, PREC_AND, PREC_ATOM),
            Formula::Quant(..) => (PREC_QUANT, PREC_QUANT, PREC_QUANT),
            _ => (PREC_ATOM, PREC_ATOM, PREC_ATOM),
        };
        let paren = own < ctx;
        if paren {
            f.write_str("(")?;
        }
        match self {
            Formula::Mem(s, t) => write!(f, "{s} in {t}")?,
            Formula::Eq(s, t) => write!(f, "{s} = {t}")?,
            Formula::Set(t) => write!(f, "S({t})")?,
            Formula::Not(g) => {
                f.write_str("~")?;
                if matches!(**g, Formula::Mem(..) | Formula::Eq(..)) {
                    f.write_str("(")?;
                    g.fmt_prec(f, PREC_QUANT)?;
                    f.write_str(")")?;
                } else {
                    g.fmt_prec(f, PREC_ATOM)?;
                }
            }
            Formula::Binary(c, l, r) => {
                l.fmt_prec(f, l_ctx)?;
                write!(f, " {} ", c.symbol())?;
                r.fmt_prec(f, r_ctx)?;
            }
            Formula::Quant(q, v, b) => {
                write!(f, "{} {v}. ", q.keyword())?;
                b.fmt_prec(f, PREC_QUANT)?;
            }
        }
        if paren {
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl<V: Variable> fmt::Display for Formula<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, PREC_QUANT)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_formula;

    fn p(s: &str) -> Formula<Var> {
        parse_formula(s).unwrap()
    }

    #[test]
    fn identifiers() {
        assert!(is_identifier("x"));
        assert!(is_identifier("x12y"));
        assert!(!is_identifier("1x"));
        assert!(!is_identifier(""));
        assert!(!is_identifier("in"));
        assert!(!is_identifier("x_y"));
    }

    #[test]
    fn free_variable_examples() {
        let names = |s: &str| -> Vec<String> {
            p(s).free_variables().into_iter().map(|v| v.as_str().to_string()).collect()
        };
        assert_eq!(names("x in y"), ["x", "y"]);
        assert_eq!(names("forall x. x in y"), ["y"]);
        assert!(names("forall x. exists y. x in y").is_empty());
        assert_eq!(names("x in y & (forall x. x = z)"), ["x", "y", "z"]);
    }

    #[test]
    fn printing() {
        let x = Term::var(Var::new("x"));
        let y = Term::var(Var::new("y"));
        let z = Term::var(Var::new("z"));
        assert_eq!(Formula::mem(x.clone(), y.clone()).to_string(), "x in y");
        let nested = Term::pair(x.clone(), Term::pair(y, z));
        assert_eq!(nested.to_string(), "<x,<y,z>>");
        let f = p("forall x. ~(x in x)");
        assert_eq!(f.to_string(), "forall x. ~(x in x)");
        assert_eq!(p("(a = a & b = c) & d = d").to_string(), "a = a & b = c & d = d");
        assert_eq!(p("a = a & (b = c & d = d)").to_string(), "a = a & (b = c & d = d)");
        assert_eq!(p("(a = a -> b = b) -> c = c").to_string(), "(a = a -> b = b) -> c = c");
        assert_eq!(p("a = a -> b = b -> c = c").to_string(), "a = a -> b = b -> c = c");
        assert_eq!(p("a = a & (forall x. x = x)").to_string(), "a = a & (forall x. x = x)");
        assert_eq!(p("~S(x) | ~~(x in y)").to_string(), "~S(x) | ~~(x in y)");
    }

    #[test]
    fn alpha_separate_examples() {
        let f = p("forall x. x in y");
        assert_eq!(f.alpha_separate(), f);

        let g = p("(forall x. x in a) & (forall x. x in b)").alpha_separate();
        assert_eq!(g.to_string(), "(forall x. x in a) & (forall x0. x0 in b)");

        let h = p("forall x. exists x. x in x").alpha_separate();
        assert_eq!(h.to_string(), "forall x. exists x0. x0 in x0");

        // a binder clashing with a free name is renamed
        let k = p("x in y & (exists x. x = y)").alpha_separate();
        assert_eq!(k.to_string(), "x in y & (exists x0. x0 = y)");

        // fresh names avoid names already present
        let m = p("x0 = x0 & (forall x. x in x) & (forall x. x = x)").alpha_separate();
        assert_eq!(m.to_string(), "x0 = x0 & (forall x. x in x) & (forall x1. x1 = x1)");
    }

    #[test]
    fn alpha_equivalence() {
        assert!(p("forall x. x in y").alpha_eq(&p("forall z. z in y")));
        assert!(!p("forall x. x in y").alpha_eq(&p("forall y. y in y")));
        assert!(!p("forall x. x in y").alpha_eq(&p("forall z. z in w")));
        assert!(p("forall x. forall y. x in y").alpha_eq(&p("forall y. forall x. y in x")));
        assert!(!p("forall x. forall y. x in y").alpha_eq(&p("forall y. forall x. x in y")));
        assert!(!p("forall x. x in x").alpha_eq(&p("exists x. x in x")));
    }

    #[test]
    fn typed_binders_must_agree_on_sort() {
        let a = Formula::forall(
            TypedVar::new("x", 0),
            Formula::eq(Term::var(TypedVar::new("x", 0)), Term::var(TypedVar::new("x", 0))),
        );
        let b = Formula::forall(
            TypedVar::new("y", 1),
            Formula::eq(Term::var(TypedVar::new("y", 1)), Term::var(TypedVar::new("y", 1))),
        );
        assert!(!a.alpha_eq(&b));
        assert!(a.alpha_eq(&a.map_vars(&mut |v: &TypedVar| v.renamed(format!("{}q", v.name())))));
    }
}
