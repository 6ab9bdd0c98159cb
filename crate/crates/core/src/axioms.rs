//! Axiom generation and recognition for the sorted theories (with or without
//! a sort bound) and for the untyped theories NFU without choice and NF.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use thiserror::Error;

use crate::godel::{decode_formula, DecodeError, GodelCode};
use crate::parser::{parse_formula, parse_typed_formula};
use crate::stratify::is_stratified;
use crate::syntax::{fresh_name, Connective, Formula, Quantifier, Term, TypedVar, Var, Variable};
use crate::typed::{is_wellformed, SortBound};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TheoryId {
    Tsti,
    /// The sorted theory truncated to sorts below `n`, `n >= 4`.
    TstiN(usize),
    NfuMinusAc,
    Nf,
}

#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub enum TheoryError {
    #[error("unknown theory `{0}` (expected tsti, tsti<n>, nfu or nf)")]
    Unknown(String),
    #[error("sort bound {0} is below the minimum of 4")]
    BoundTooSmall(usize),
}

impl TheoryId {
    pub fn tsti_n(n: usize) -> Result<Self, TheoryError> {
        if n < 4 {
            return Err(TheoryError::BoundTooSmall(n));
        }
        Ok(TheoryId::TstiN(n))
    }

    pub fn is_typed(self) -> bool {
        matches!(self, TheoryId::Tsti | TheoryId::TstiN(_))
    }

    pub fn sort_bound(self) -> Option<SortBound> {
        match self {
            TheoryId::Tsti => Some(SortBound::Unbounded),
            TheoryId::TstiN(n) => Some(SortBound::Below(n)),
            _ => None,
        }
    }
}

impl FromStr for TheoryId {
    type Err = TheoryError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "tsti" => Ok(TheoryId::Tsti),
            "nfu" => Ok(TheoryId::NfuMinusAc),
            "nf" => Ok(TheoryId::Nf),
            _ => match s.strip_prefix("tsti").map(str::parse::<usize>) {
                Some(Ok(n)) => TheoryId::tsti_n(n),
                _ => Err(TheoryError::Unknown(s.to_string())),
            },
        }
    }
}

impl fmt::Display for TheoryId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TheoryId::Tsti => write!(f, "tsti"),
            TheoryId::TstiN(n) => write!(f, "tsti{n}"),
            TheoryId::NfuMinusAc => write!(f, "nfu"),
            TheoryId::Nf => write!(f, "nf"),
        }
    }
}

/// Which scheme a recognized axiom belongs to.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum AxiomKind {
    Extensionality,
    Comprehension,
    Infinity,
    WeakExtensionality,
    Pairing,
    Sethood,
    StratifiedComprehension,
}

impl fmt::Display for AxiomKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            AxiomKind::Extensionality => "extensionality",
            AxiomKind::Comprehension => "comprehension",
            AxiomKind::Infinity => "infinity",
            AxiomKind::WeakExtensionality => "weak extensionality",
            AxiomKind::Pairing => "pairing",
            AxiomKind::Sethood => "sethood",
            AxiomKind::StratifiedComprehension => "stratified comprehension",
        };
        f.write_str(s)
    }
}

fn tv(name: &str, sort: usize) -> Term<TypedVar> {
    Term::var(TypedVar::new(name, sort))
}

/// `forall x@k+1. forall y@k+1. (x = y <-> forall z@k. (z in x <-> z in y))`
pub fn make_extensionality(k: usize) -> Formula<TypedVar> {
    let (x, y, z) = (TypedVar::new("x", k + 1), TypedVar::new("y", k + 1), TypedVar::new("z", k));
    let body = Formula::iff(
        Formula::eq(Term::var(x.clone()), Term::var(y.clone())),
        Formula::forall(
            z,
            Formula::iff(Formula::mem(tv("z", k), Term::var(x.clone())), Formula::mem(tv("z", k), Term::var(y.clone()))),
        ),
    );
    Formula::forall(x, Formula::forall(y, body))
}

/// `forall zs. exists y@k+1. forall x@k. (x in y <-> phi)`, where `zs` are
/// the free variables of `phi` other than `x` in first-occurrence order and
/// `y` is named apart from every name in `phi`.
pub fn make_comprehension(phi: &Formula<TypedVar>, x: &TypedVar) -> Formula<TypedVar> {
    let mut used = phi.names();
    used.insert(x.name().to_string());
    let y_name = if used.contains("y") { fresh_name("y", &used) } else { "y".to_string() };
    let y = TypedVar::new(y_name, x.level() + 1);
    let params: Vec<TypedVar> = phi.free_variables_in_order().into_iter().filter(|v| v != x).collect();
    let core = Formula::exists(
        y.clone(),
        Formula::forall(
            x.clone(),
            Formula::iff(Formula::mem(Term::var(x.clone()), Term::var(y)), phi.clone()),
        ),
    );
    core.close_universally(&params)
}

const PAIR: &str = "(forall u@1. (u@1 in P@2 <-> (forall w@0. (w@0 in u@1 <-> w@0 = A@0)) \
                    | (forall w@0. (w@0 in u@1 <-> w@0 = A@0 | w@0 = B@0))))";

fn kuratowski(p: &str, a: &str, b: &str) -> String {
    PAIR.replace("P@", &format!("{p}@")).replace("A@", &format!("{a}@")).replace("B@", &format!("{b}@"))
}

// `f` contains the pair <a, b>.
fn graph_has(a: &str, b: &str) -> String {
    format!("(exists p@2. (p@2 in f@3 & {}))", kuratowski("p", a, b))
}

fn infinity_text() -> String {
    let into = format!(
        "(forall p@2. (p@2 in f@3 -> (exists a@0. exists b@0. (a@0 in x@1 & b@0 in x@1 & {}))))",
        kuratowski("p", "a", "b")
    );
    let total = format!("(forall a@0. (a@0 in x@1 -> (exists b@0. (b@0 in x@1 & {}))))", graph_has("a", "b"));
    let functional = format!(
        "(forall a@0. forall b@0. forall c@0. ({} & {} -> b@0 = c@0))",
        graph_has("a", "b"),
        graph_has("a", "c")
    );
    let injective = format!(
        "(forall a@0. forall b@0. forall c@0. ({} & {} -> a@0 = b@0))",
        graph_has("a", "c"),
        graph_has("b", "c")
    );
    let not_onto = format!("(exists c@0. (c@0 in x@1 & ~(exists a@0. {})))", graph_has("a", "c"));
    format!("exists x@1. exists f@3. ({into} & {total} & {functional} & {injective} & {not_onto})")
}

/// The fixed Infinity sentence: some `f@3` is a set of Kuratowski pairs over
/// `x@1` that is total, functional and injective but not onto.
pub fn make_infinity() -> Formula<TypedVar> {
    static INFINITY: OnceLock<Formula<TypedVar>> = OnceLock::new();
    INFINITY
        .get_or_init(|| parse_typed_formula(&infinity_text()).expect("infinity sentence parses"))
        .clone()
}

fn untyped(text: &str) -> Formula<Var> {
    parse_formula(text).expect("axiom text parses")
}

pub fn weak_extensionality() -> Formula<Var> {
    untyped("forall x. forall y. (S(x) & S(y) -> (x = y <-> (forall z. (z in x <-> z in y))))")
}

pub fn pairing() -> Formula<Var> {
    untyped("forall x. forall y. forall z. forall w. (<x,y> = <w,z> -> x = w & y = z)")
}

pub fn every_object_is_a_set() -> Formula<Var> {
    untyped("forall x. S(x)")
}

#[derive(Clone, PartialEq, Eq, Debug, Error)]
#[error("{0} is not stratified")]
pub struct NotStratified(pub String);

/// `forall zs. exists y. (S(y) & forall x. (x in y <-> phi))`; `phi` must be
/// stratified.
pub fn make_stratified_comprehension(phi: &Formula<Var>, x: &Var) -> Result<Formula<Var>, NotStratified> {
    if !is_stratified(phi) {
        return Err(NotStratified(phi.to_string()));
    }
    let mut used = phi.names();
    used.insert(x.name().to_string());
    let y = Var::new(if used.contains("y") { fresh_name("y", &used) } else { "y".to_string() });
    let params: Vec<Var> = phi.free_variables_in_order().into_iter().filter(|v| v != x).collect();
    let core = Formula::exists(
        y.clone(),
        Formula::and(
            Formula::set(Term::var(y.clone())),
            Formula::forall(x.clone(), Formula::iff(Formula::mem(Term::var(x.clone()), Term::var(y)), phi.clone())),
        ),
    );
    Ok(core.close_universally(&params))
}

// Leading universal binders and the rest.
fn peel_foralls<V>(f: &Formula<V>) -> (Vec<&V>, &Formula<V>) {
    let mut zs = Vec::new();
    let mut cur = f;
    while let Formula::Quant(Quantifier::Forall, v, b) = cur {
        zs.push(v);
        cur = b;
    }
    (zs, cur)
}

// `exists y. G` with `G` handed to `inner`; returns `(x, y, phi)` when `inner`
// finds `forall x. (x in y <-> phi)`.
fn split_scheme<V: Variable>(f: &Formula<V>) -> Option<(Vec<&V>, &V, &V, &Formula<V>)> {
    let (zs, rest) = peel_foralls(f);
    let Formula::Quant(Quantifier::Exists, y, g) = rest else { return None };
    let inner = match (V::TYPED, g.as_ref()) {
        (true, inner) => inner,
        (false, Formula::Binary(Connective::And, s, inner)) => match s.as_ref() {
            Formula::Set(Term::Var(v)) if v == y => inner.as_ref(),
            _ => return None,
        },
        _ => return None,
    };
    let Formula::Quant(Quantifier::Forall, x, h) = inner else { return None };
    let Formula::Binary(Connective::Iff, m, phi) = h.as_ref() else { return None };
    match m.as_ref() {
        Formula::Mem(Term::Var(a), Term::Var(b)) if a == x && b == y && x != y => Some((zs, x, y, phi)),
        _ => None,
    }
}

// Parameters bound in first-occurrence order, witness not free.
fn closure_matches<V: Variable>(zs: &[&V], x: &V, y: &V, phi: &Formula<V>) -> bool {
    let free = phi.free_variables_in_order();
    if free.contains(y) {
        return false;
    }
    let params: Vec<&V> = free.iter().filter(|v| *v != x).collect();
    params.len() == zs.len() && params.iter().zip(zs).all(|(a, b)| *a == *b)
}

fn is_comprehension_instance(f: &Formula<TypedVar>) -> bool {
    match split_scheme(f) {
        Some((zs, x, y, phi)) => y.level() == x.level() + 1 && closure_matches(&zs, x, y, phi),
        None => false,
    }
}

fn is_stratified_comprehension(f: &Formula<Var>) -> bool {
    match split_scheme(f) {
        Some((zs, x, y, phi)) => closure_matches(&zs, x, y, phi) && is_stratified(phi) && is_stratified(f),
        None => false,
    }
}

/// The scheme `f` instantiates in `theory`, if any.
pub fn classify(f: &Formula<TypedVar>, theory: TheoryId) -> Option<AxiomKind> {
    let bound = theory.sort_bound()?;
    if !is_wellformed(f, bound) {
        return None;
    }
    if let Formula::Quant(Quantifier::Forall, v, _) = f {
        if v.level() >= 1 && f.alpha_eq(&make_extensionality(v.level() - 1)) {
            return Some(AxiomKind::Extensionality);
        }
    }
    if is_comprehension_instance(f) {
        return Some(AxiomKind::Comprehension);
    }
    if f.alpha_eq(&make_infinity()) {
        return Some(AxiomKind::Infinity);
    }
    None
}

pub fn is_axiom(f: &Formula<TypedVar>, theory: TheoryId) -> bool {
    classify(f, theory).is_some()
}

/// Decodes `code` and classifies the result. A code of the other language
/// is a well-formed sentence that is no axiom of `theory`; only codes
/// outside both images are errors.
pub fn classify_code(code: &GodelCode, theory: TheoryId) -> Result<Option<AxiomKind>, DecodeError> {
    if theory.is_typed() {
        match decode_formula::<TypedVar>(code) {
            Ok(f) => Ok(classify(&f, theory)),
            Err(e) => decode_formula::<Var>(code).map(|_| None).map_err(|_| e),
        }
    } else {
        match decode_formula::<Var>(code) {
            Ok(f) => Ok(classify_untyped(&f, theory)),
            Err(e) => decode_formula::<TypedVar>(code).map(|_| None).map_err(|_| e),
        }
    }
}

pub fn is_axiom_code(code: &GodelCode, theory: TheoryId) -> Result<bool, DecodeError> {
    classify_code(code, theory).map(|k| k.is_some())
}

pub fn classify_untyped(f: &Formula<Var>, theory: TheoryId) -> Option<AxiomKind> {
    if theory.is_typed() {
        return None;
    }
    if f.alpha_eq(&weak_extensionality()) {
        return Some(AxiomKind::WeakExtensionality);
    }
    if f.alpha_eq(&pairing()) {
        return Some(AxiomKind::Pairing);
    }
    if theory == TheoryId::Nf && f.alpha_eq(&every_object_is_a_set()) {
        return Some(AxiomKind::Sethood);
    }
    if is_stratified_comprehension(f) {
        return Some(AxiomKind::StratifiedComprehension);
    }
    None
}

pub fn is_axiom_untyped(f: &Formula<Var>, theory: TheoryId) -> bool {
    classify_untyped(f, theory).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::godel::{code_bits_bound, encode_formula, try_encode_formula};
    use crate::typed::{check_wellformed, erase};

    fn tp(s: &str) -> Formula<TypedVar> {
        parse_typed_formula(s).unwrap()
    }

    #[test]
    fn theory_names() {
        assert_eq!("tsti".parse(), Ok(TheoryId::Tsti));
        assert_eq!("tsti4".parse(), Ok(TheoryId::TstiN(4)));
        assert_eq!("tsti3".parse::<TheoryId>(), Err(TheoryError::BoundTooSmall(3)));
        assert!("zf".parse::<TheoryId>().is_err());
        for t in [TheoryId::Tsti, TheoryId::TstiN(7), TheoryId::NfuMinusAc, TheoryId::Nf] {
            assert_eq!(t.to_string().parse(), Ok(t));
        }
    }

    #[test]
    fn extensionality_shape_and_bounds() {
        assert_eq!(
            make_extensionality(0),
            tp("forall x@1. forall y@1. (x@1 = y@1 <-> (forall z@0. (z@0 in x@1 <-> z@0 in y@1)))")
        );
        let t4 = TheoryId::TstiN(4);
        assert!(is_axiom(&make_extensionality(2), t4));
        assert!(!is_axiom(&make_extensionality(3), t4));
        assert!(is_axiom(&make_extensionality(3), TheoryId::Tsti));
        assert!(is_axiom(&make_extensionality(1), TheoryId::Tsti));
        assert!(is_axiom_code(&encode_formula(&make_extensionality(1)), t4).unwrap());
        // renaming bound variables is harmless
        let renamed = tp("forall a@1. forall b@1. (a@1 = b@1 <-> (forall c@0. (c@0 in a@1 <-> c@0 in b@1)))");
        assert_eq!(classify(&renamed, t4), Some(AxiomKind::Extensionality));
    }

    #[test]
    fn comprehension_examples() {
        let x = TypedVar::new("x", 0);
        let empty = make_comprehension(&tp("~(x@0 = x@0)"), &x);
        assert_eq!(empty, tp("exists y@1. forall x@0. (x@0 in y@1 <-> ~(x@0 = x@0))"));
        assert!(is_axiom(&empty, TheoryId::TstiN(4)));

        let param = make_comprehension(&tp("x@0 in a@1"), &x);
        assert_eq!(param, tp("forall a@1. exists y@1. forall x@0. (x@0 in y@1 <-> x@0 in a@1)"));
        assert!(is_axiom(&param, TheoryId::Tsti));

        // a `y` already in phi forces a fresh witness name
        let clash = make_comprehension(&tp("x@0 = y@0"), &x);
        assert_eq!(clash, tp("forall y@0. exists y0@1. forall x@0. (x@0 in y0@1 <-> x@0 = y@0)"));
        assert!(is_axiom(&clash, TheoryId::Tsti));
    }

    #[test]
    fn comprehension_rejections() {
        let t = TheoryId::Tsti;
        // witness free in phi
        assert!(!is_axiom(&tp("forall y@1. exists y@1. forall x@0. (x@0 in y@1 <-> x@0 in y@1)"), t));
        assert!(!is_axiom(&tp("exists y@1. forall x@0. (x@0 in y@1 <-> x@0 in y@1)"), t));
        // witness at the wrong sort
        assert!(!is_axiom(&tp("exists y@2. forall x@0. (x@0 in y@2 <-> x@0 = x@0)"), t));
        // parameters out of order, missing, or extra
        let phi = "(x@0 in a@1 & x@0 in b@1)";
        assert!(is_axiom(&tp(&format!("forall a@1. forall b@1. exists y@1. forall x@0. (x@0 in y@1 <-> {phi})")), t));
        assert!(!is_axiom(&tp(&format!("forall b@1. forall a@1. exists y@1. forall x@0. (x@0 in y@1 <-> {phi})")), t));
        assert!(!is_axiom(&tp(&format!("forall a@1. exists y@1. forall x@0. (x@0 in y@1 <-> {phi})")), t));
        assert!(!is_axiom(&tp("forall c@1. exists y@1. forall x@0. (x@0 in y@1 <-> x@0 = x@0)"), t));
        // sides swapped
        assert!(!is_axiom(&tp("exists y@1. forall x@0. (x@0 = x@0 <-> x@0 in y@1)"), t));
        // above the bound
        let high = make_comprehension(&tp("x@3 = x@3"), &TypedVar::new("x", 3));
        assert!(!is_axiom(&high, TheoryId::TstiN(4)));
        assert!(is_axiom(&high, TheoryId::TstiN(5)));
        assert!(!is_axiom(&tp("x@0 in y@1"), t));
    }

    #[test]
    fn infinity_sentence() {
        let inf = make_infinity();
        assert!(inf.is_sentence());
        assert!(check_wellformed(&inf, SortBound::below(4).unwrap()).is_ok());
        let mut sorts = Vec::new();
        inf.visit_variables(&mut |v: &TypedVar| sorts.push(v.level()));
        assert_eq!(sorts.iter().max(), Some(&3));
        for n in 4..10 {
            assert_eq!(classify(&inf, TheoryId::TstiN(n)), Some(AxiomKind::Infinity));
        }
        // far too deep to encode: each nesting level quadruples the width
        assert!(code_bits_bound(&inf) > 1e9);
        assert!(try_encode_formula(&inf, 1 << 24).is_err());
        assert!(erase(&inf).is_plain());
        assert!(!is_axiom(&crate::typed::shift(&inf, 1), TheoryId::Tsti));
    }

    #[test]
    fn code_twenty_is_no_axiom() {
        assert!(!is_axiom_code(&GodelCode::from(20), TheoryId::TstiN(4)).unwrap());
        assert!(!is_axiom_code(&GodelCode::from(20), TheoryId::NfuMinusAc).unwrap());
        // tag 10 is no formula tag in either language
        assert!(is_axiom_code(&GodelCode::from(55), TheoryId::Tsti).is_err());
    }

    #[test]
    fn untyped_theories() {
        for t in [TheoryId::NfuMinusAc, TheoryId::Nf] {
            assert_eq!(classify_untyped(&pairing(), t), Some(AxiomKind::Pairing));
            assert_eq!(classify_untyped(&weak_extensionality(), t), Some(AxiomKind::WeakExtensionality));
        }
        assert!(is_axiom_untyped(&every_object_is_a_set(), TheoryId::Nf));
        assert!(!is_axiom_untyped(&every_object_is_a_set(), TheoryId::NfuMinusAc));
        assert!(!is_axiom_untyped(&pairing(), TheoryId::Tsti));

        let x = Var::new("x");
        let russell = parse_formula("~(x in x)").unwrap();
        assert!(make_stratified_comprehension(&russell, &x).is_err());
        let hand = parse_formula("exists y. (S(y) & (forall x. (x in y <-> ~(x in x))))").unwrap();
        assert!(!is_axiom_untyped(&hand, TheoryId::NfuMinusAc));

        let inst = make_stratified_comprehension(&parse_formula("x in a").unwrap(), &x).unwrap();
        assert_eq!(inst, parse_formula("forall a. exists y. (S(y) & (forall x. (x in y <-> x in a)))").unwrap());
        assert_eq!(classify_untyped(&inst, TheoryId::NfuMinusAc), Some(AxiomKind::StratifiedComprehension));

        let eq = parse_formula("forall a. exists y. (S(y) & (forall x. (x in y <-> x = a)))").unwrap();
        assert!(is_axiom_untyped(&eq, TheoryId::Nf));
        let free_witness = parse_formula("exists y. (S(y) & (forall x. (x in y <-> x = y)))").unwrap();
        assert!(!is_axiom_untyped(&free_witness, TheoryId::Nf));
        let no_sethood = parse_formula("forall a. exists y. (forall x. (x in y <-> x = a))").unwrap();
        assert!(!is_axiom_untyped(&no_sethood, TheoryId::Nf));
    }
}
