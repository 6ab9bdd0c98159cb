//! Gödel numbering of terms and formulas via Cantor pairing.
//!
//! Terms: `var_i ↦ π(0, i)`, `<s,t> ↦ π(1, π(#s, #t))`, sorted variable
//! `i` at sort `k` `↦ π(2, π(i, k))`. Formulas are `π(tag, payload)` with
//! tags 0 membership, 1 equality, 2 sethood, 3 negation, 4 conjunction,
//! 5 disjunction, 6 implication, 7 biconditional, 8 universal and
//! 9 existential; quantifier payloads are `π(#binder, #body)`.
//!
//! Variables are renumbered in order of first occurrence (binders included,
//! textual order) before encoding, so decoding yields the names `x0, x1, ..`
//! and rejects any code whose indices are not in that order.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use thiserror::Error;

use crate::syntax::{Connective, Formula, Quantifier, Term, TypedVar, Var, Variable};

/// A Gödel code.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct GodelCode(pub BigUint);

impl GodelCode {
    pub fn value(&self) -> &BigUint {
        &self.0
    }

    /// Number of decimal digits.
    pub fn digits(&self) -> usize {
        self.0.to_string().len()
    }
}

impl From<u64> for GodelCode {
    fn from(v: u64) -> Self {
        GodelCode(BigUint::from(v))
    }
}

impl fmt::Display for GodelCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl FromStr for GodelCode {
    type Err = num_bigint::ParseBigIntError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        BigUint::from_str(s.trim()).map(GodelCode)
    }
}

/// Which language a code is read in.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Language {
    Untyped,
    Typed,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum AnyFormula {
    Untyped(Formula<Var>),
    Typed(Formula<TypedVar>),
}

impl fmt::Display for AnyFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AnyFormula::Untyped(g) => write!(f, "{g}"),
            AnyFormula::Typed(g) => write!(f, "{g}"),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Error)]
#[error("malformed code at {path}: sub-payload {payload} {reason}")]
pub struct DecodeError {
    /// Location of the failing sub-payload, e.g. `formula.right.binder`.
    pub path: String,
    pub payload: BigUint,
    pub reason: String,
}

/// Cantor pairing `π(a, b) = (a + b)(a + b + 1)/2 + b`.
pub fn cantor_pair(a: &BigUint, b: &BigUint) -> BigUint {
    let s: BigUint = a + b;
    (&s * (&s + 1u32)) / 2u32 + b
}

fn isqrt_u128(n: u128) -> u128 {
    let mut r = (n as f64).sqrt() as u128;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Inverse of [`cantor_pair`].
pub fn cantor_unpair(z: &BigUint) -> (BigUint, BigUint) {
    if let Some(small) = z.to_u64() {
        let z = small as u128;
        let w = (isqrt_u128(8 * z + 1) - 1) / 2;
        let t = w * (w + 1) / 2;
        let b = z - t;
        let a = w - b;
        return (BigUint::from(a), BigUint::from(b));
    }
    let w: BigUint = ((z * 8u32 + 1u32).sqrt() - 1u32) / 2u32;
    let t: BigUint = &w * (&w + 1u32) / 2u32;
    let b = z - t;
    let a = w - &b;
    (a, b)
}

fn pair_u(a: u64, b: &BigUint) -> BigUint {
    cantor_pair(&BigUint::from(a), b)
}

/// Variable kinds with a term code.
pub trait CodedVariable: Variable {
    #[doc(hidden)]
    fn var_code(index: usize, v: &Self) -> BigUint;
    #[doc(hidden)]
    fn decode_var(
        tag: u64,
        payload: &BigUint,
        path: &str,
        seen: &mut Vec<Option<usize>>,
    ) -> Result<Self, DecodeError>;
}

fn malformed(path: &str, payload: &BigUint, reason: impl Into<String>) -> DecodeError {
    DecodeError {
        path: path.to_string(),
        payload: payload.clone(),
        reason: reason.into(),
    }
}

// `seen[i]` records the sort of variable `i`; indices must be introduced in order.
fn check_index(
    index: &BigUint,
    sort: Option<usize>,
    path: &str,
    payload: &BigUint,
    seen: &mut Vec<Option<usize>>,
) -> Result<usize, DecodeError> {
    let i = index
        .to_usize()
        .filter(|&i| i <= seen.len())
        .ok_or_else(|| malformed(path, payload, format!("has variable index {index} out of first-occurrence order")))?;
    if i == seen.len() {
        seen.push(sort);
    } else if seen[i] != sort {
        return Err(malformed(path, payload, format!("reuses variable index {i} at a different sort")));
    }
    Ok(i)
}

impl CodedVariable for Var {
    fn var_code(index: usize, _v: &Self) -> BigUint {
        pair_u(0, &BigUint::from(index))
    }

    fn decode_var(
        tag: u64,
        payload: &BigUint,
        path: &str,
        seen: &mut Vec<Option<usize>>,
    ) -> Result<Self, DecodeError> {
        if tag != 0 {
            return Err(malformed(path, payload, format!("has term tag {tag}, not an untyped variable")));
        }
        let i = check_index(payload, None, path, payload, seen)?;
        Ok(Var::new(format!("x{i}")))
    }
}

impl CodedVariable for TypedVar {
    fn var_code(index: usize, v: &Self) -> BigUint {
        let inner = cantor_pair(&BigUint::from(index), &BigUint::from(v.level()));
        pair_u(2, &inner)
    }

    fn decode_var(
        tag: u64,
        payload: &BigUint,
        path: &str,
        seen: &mut Vec<Option<usize>>,
    ) -> Result<Self, DecodeError> {
        if tag != 2 {
            return Err(malformed(path, payload, format!("has term tag {tag}, not a sorted variable")));
        }
        let (index, sort) = cantor_unpair(payload);
        let sort = sort
            .to_usize()
            .ok_or_else(|| malformed(path, payload, "has a sort too large to represent"))?;
        let i = check_index(&index, Some(sort), path, payload, seen)?;
        Ok(TypedVar::new(format!("x{i}"), sort))
    }
}

struct Encoder<V> {
    order: Vec<V>,
}

impl<V: CodedVariable> Encoder<V> {
    fn var(&self, v: &V) -> BigUint {
        let i = self.order.iter().position(|w| w == v).expect("variable was indexed");
        V::var_code(i, v)
    }

    fn term(&self, t: &Term<V>) -> BigUint {
        match t {
            Term::Var(v) => self.var(v),
            Term::Pair(l, r) => pair_u(1, &cantor_pair(&self.term(l), &self.term(r))),
        }
    }

    fn formula(&self, f: &Formula<V>) -> BigUint {
        match f {
            Formula::Mem(s, t) => pair_u(0, &cantor_pair(&self.term(s), &self.term(t))),
            Formula::Eq(s, t) => pair_u(1, &cantor_pair(&self.term(s), &self.term(t))),
            Formula::Set(t) => pair_u(2, &self.term(t)),
            Formula::Not(g) => pair_u(3, &self.formula(g)),
            Formula::Binary(c, l, r) => {
                let tag = match c {
                    Connective::And => 4,
                    Connective::Or => 5,
                    Connective::Implies => 6,
                    Connective::Iff => 7,
                };
                pair_u(tag, &cantor_pair(&self.formula(l), &self.formula(r)))
            }
            Formula::Quant(q, v, b) => {
                let tag = match q {
                    Quantifier::Forall => 8,
                    Quantifier::Exists => 9,
                };
                pair_u(tag, &cantor_pair(&self.var(v), &self.formula(b)))
            }
        }
    }
}

/// Encodes a formula after renumbering its variables by first occurrence.
pub fn encode_formula<V: CodedVariable>(f: &Formula<V>) -> GodelCode {
    let enc = Encoder {
        order: f.variables_in_order(),
    };
    GodelCode(enc.formula(f))
}

/// Upper bound on the bit length of `encode_formula(f)`. Each pairing at
/// most doubles the width, so codes grow doubly exponentially with depth.
pub fn code_bits_bound<V: CodedVariable>(f: &Formula<V>) -> f64 {
    let order = f.variables_in_order();
    let var = |v: &V| {
        let i = order.iter().position(|w| w == v).expect("indexed");
        V::var_code(i, v).bits() as f64
    };
    fn pair(a: f64, b: f64) -> f64 {
        2.0 * a.max(b) + 2.0
    }
    fn term<V: CodedVariable>(t: &Term<V>, var: &impl Fn(&V) -> f64) -> f64 {
        match t {
            Term::Var(v) => var(v),
            Term::Pair(l, r) => pair(1.0, pair(term(l, var), term(r, var))),
        }
    }
    fn formula<V: CodedVariable>(f: &Formula<V>, var: &impl Fn(&V) -> f64) -> f64 {
        let payload = match f {
            Formula::Mem(s, t) | Formula::Eq(s, t) => pair(term(s, var), term(t, var)),
            Formula::Set(t) => term(t, var),
            Formula::Not(g) => formula(g, var),
            Formula::Binary(_, l, r) => pair(formula(l, var), formula(r, var)),
            Formula::Quant(_, v, b) => pair(var(v), formula(b, var)),
        };
        pair(4.0, payload)
    }
    formula(f, &var)
}

#[derive(Clone, Copy, PartialEq, Debug, Error)]
#[error("code would need up to {bits:.3e} bits, above the cap of {cap} bits")]
pub struct CodeTooLarge {
    pub bits: f64,
    pub cap: u64,
}

/// [`encode_formula`] behind a size guard on [`code_bits_bound`].
pub fn try_encode_formula<V: CodedVariable>(f: &Formula<V>, max_bits: u64) -> Result<GodelCode, CodeTooLarge> {
    let bits = code_bits_bound(f);
    if bits > max_bits as f64 {
        return Err(CodeTooLarge { bits, cap: max_bits });
    }
    Ok(encode_formula(f))
}

/// Encodes a single term, variables numbered by first occurrence in it.
pub fn encode_term<V: CodedVariable>(t: &Term<V>) -> GodelCode {
    let mut order: Vec<V> = Vec::new();
    for v in t.variables() {
        if !order.contains(v) {
            order.push(v.clone());
        }
    }
    GodelCode(Encoder { order }.term(t))
}

struct Decoder {
    seen: Vec<Option<usize>>,
}

fn small(tag: &BigUint) -> Option<u64> {
    tag.to_u64()
}

impl Decoder {
    fn term<V: CodedVariable>(&mut self, code: &BigUint, path: &str) -> Result<Term<V>, DecodeError> {
        let (tag, payload) = cantor_unpair(code);
        match small(&tag) {
            Some(1) => {
                let (l, r) = cantor_unpair(&payload);
                let l = self.term(&l, &format!("{path}.left"))?;
                let r = self.term(&r, &format!("{path}.right"))?;
                Ok(Term::pair(l, r))
            }
            Some(t @ (0 | 2)) => Ok(Term::Var(V::decode_var(t, &payload, path, &mut self.seen)?)),
            _ => Err(malformed(path, code, format!("has unknown term tag {tag}"))),
        }
    }

    fn formula<V: CodedVariable>(&mut self, code: &BigUint, path: &str) -> Result<Formula<V>, DecodeError> {
        let (tag, payload) = cantor_unpair(code);
        let tag = match small(&tag) {
            Some(t) if t <= 9 => t,
            _ => return Err(malformed(path, code, format!("has unknown formula tag {tag}"))),
        };
        Ok(match tag {
            0 | 1 => {
                let (s, t) = cantor_unpair(&payload);
                let s = self.term(&s, &format!("{path}.left"))?;
                let t = self.term(&t, &format!("{path}.right"))?;
                if tag == 0 {
                    Formula::Mem(s, t)
                } else {
                    Formula::Eq(s, t)
                }
            }
            2 => Formula::Set(self.term(&payload, &format!("{path}.term"))?),
            3 => Formula::not(self.formula(&payload, &format!("{path}.body"))?),
            4..=7 => {
                let (l, r) = cantor_unpair(&payload);
                let l = self.formula(&l, &format!("{path}.left"))?;
                let r = self.formula(&r, &format!("{path}.right"))?;
                let c = [Connective::And, Connective::Or, Connective::Implies, Connective::Iff][(tag - 4) as usize];
                Formula::binary(c, l, r)
            }
            _ => {
                let (v, b) = cantor_unpair(&payload);
                let bpath = format!("{path}.binder");
                let v = match self.term::<V>(&v, &bpath)? {
                    Term::Var(v) => v,
                    Term::Pair(..) => return Err(malformed(&bpath, &v, "is a pair, not a variable")),
                };
                let b = self.formula(&b, &format!("{path}.body"))?;
                let q = if tag == 8 { Quantifier::Forall } else { Quantifier::Exists };
                Formula::Quant(q, v, Box::new(b))
            }
        })
    }
}

/// Decodes a formula code; the left inverse of [`encode_formula`] on
/// formulas whose variables are already named `x0, x1, ..` in first-occurrence
/// order.
pub fn decode_formula<V: CodedVariable>(code: &GodelCode) -> Result<Formula<V>, DecodeError> {
    Decoder { seen: Vec::new() }.formula(&code.0, "formula")
}

pub fn decode_any(code: &GodelCode, language: Language) -> Result<AnyFormula, DecodeError> {
    Ok(match language {
        Language::Untyped => AnyFormula::Untyped(decode_formula(code)?),
        Language::Typed => AnyFormula::Typed(decode_formula(code)?),
    })
}

/// Renames variables to `x0, x1, ..` in first-occurrence order; this is what
/// `decode(encode(f))` returns.
pub fn canonical_names<V: CodedVariable>(f: &Formula<V>) -> Formula<V> {
    let order = f.variables_in_order();
    f.map_vars(&mut |v| {
        let i = order.iter().position(|w| w == v).expect("indexed");
        v.renamed(format!("x{i}"))
    })
}
