//! Seeded random formulas for sampling-based checks.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::syntax::{Connective, Formula, Quantifier, Term, TypedVar, Var};

/// Shape of random untyped formulas.
#[derive(Clone, Debug)]
pub struct GenConfig {
    /// Connective/quantifier nesting; atoms sit at depth 0.
    pub max_depth: usize,
    pub names: Vec<String>,
    pub pairs: bool,
    pub sethood: bool,
    pub quantifiers: bool,
}

impl GenConfig {
    pub fn plain(names: &[&str], max_depth: usize) -> Self {
        GenConfig {
            max_depth,
            names: names.iter().map(|s| s.to_string()).collect(),
            pairs: false,
            sethood: false,
            quantifiers: true,
        }
    }
}

fn connective<R: Rng + ?Sized>(rng: &mut R) -> Connective {
    *Connective::ALL.choose(rng).expect("nonempty")
}

fn quantifier<R: Rng + ?Sized>(rng: &mut R) -> Quantifier {
    if rng.gen_bool(0.5) {
        Quantifier::Forall
    } else {
        Quantifier::Exists
    }
}

fn random_term<R: Rng + ?Sized>(rng: &mut R, cfg: &GenConfig, depth: usize) -> Term<Var> {
    if cfg.pairs && depth > 0 && rng.gen_bool(0.25) {
        return Term::pair(random_term(rng, cfg, depth - 1), random_term(rng, cfg, depth - 1));
    }
    Term::var(Var::new(cfg.names.choose(rng).expect("names nonempty").clone()))
}

pub fn random_formula<R: Rng + ?Sized>(rng: &mut R, cfg: &GenConfig) -> Formula<Var> {
    gen_untyped(rng, cfg, cfg.max_depth)
}

fn gen_untyped<R: Rng + ?Sized>(rng: &mut R, cfg: &GenConfig, depth: usize) -> Formula<Var> {
    let choice = if depth == 0 { 0 } else { rng.gen_range(0..4) };
    match choice {
        0 => match rng.gen_range(0..if cfg.sethood { 5 } else { 4 }) {
            0 | 1 => Formula::mem(random_term(rng, cfg, 1), random_term(rng, cfg, 1)),
            2 | 3 => Formula::eq(random_term(rng, cfg, 1), random_term(rng, cfg, 1)),
            _ => Formula::set(random_term(rng, cfg, 1)),
        },
        1 => Formula::not(gen_untyped(rng, cfg, depth - 1)),
        2 if cfg.quantifiers => {
            let v = Var::new(cfg.names.choose(rng).expect("names nonempty").clone());
            Formula::Quant(quantifier(rng), v, Box::new(gen_untyped(rng, cfg, depth - 1)))
        }
        _ => Formula::binary(connective(rng), gen_untyped(rng, cfg, depth - 1), gen_untyped(rng, cfg, depth - 1)),
    }
}

/// Shape of random well-formed sorted formulas.
#[derive(Clone, Debug)]
pub struct TypedGenConfig {
    /// Sorts used are `0..sorts`.
    pub sorts: usize,
    pub max_depth: usize,
    pub max_quantifier_depth: usize,
    /// Variables in scope at the root (they occur free if used).
    pub free: Vec<TypedVar>,
    /// Names for bound variables; reuse produces shadowing.
    pub binder_names: Vec<String>,
}

impl TypedGenConfig {
    pub fn new(sorts: usize, max_depth: usize, free: Vec<TypedVar>) -> Self {
        TypedGenConfig {
            sorts,
            max_depth,
            max_quantifier_depth: max_depth,
            free,
            binder_names: ["u", "v", "w"].iter().map(|s| s.to_string()).collect(),
        }
    }
}

pub fn random_typed_formula<R: Rng + ?Sized>(rng: &mut R, cfg: &TypedGenConfig) -> Formula<TypedVar> {
    let mut scope = cfg.free.clone();
    gen_typed(rng, cfg, cfg.max_depth, cfg.max_quantifier_depth, &mut scope)
}

fn typed_atom<R: Rng + ?Sized>(rng: &mut R, scope: &[TypedVar]) -> Formula<TypedVar> {
    let mut mems = Vec::new();
    let mut eqs = Vec::new();
    for a in scope {
        for b in scope {
            if b.level() == a.level() + 1 {
                mems.push((a, b));
            }
            if a.level() == b.level() {
                eqs.push((a, b));
            }
        }
    }
    let pick_mem = !mems.is_empty() && (eqs.is_empty() || rng.gen_bool(0.6));
    let (a, b) = if pick_mem { mems.choose(rng) } else { eqs.choose(rng) }.copied().expect("scope is nonempty");
    let (a, b) = (Term::var(a.clone()), Term::var(b.clone()));
    if pick_mem {
        Formula::mem(a, b)
    } else {
        Formula::eq(a, b)
    }
}

fn gen_typed<R: Rng + ?Sized>(
    rng: &mut R,
    cfg: &TypedGenConfig,
    depth: usize,
    quant: usize,
    scope: &mut Vec<TypedVar>,
) -> Formula<TypedVar> {
    let must_bind = scope.is_empty();
    let choice = if must_bind { 2 } else if depth == 0 { 0 } else { rng.gen_range(0..4) };
    match choice {
        0 => typed_atom(rng, scope),
        1 => Formula::not(gen_typed(rng, cfg, depth - 1, quant, scope)),
        2 if must_bind || quant > 0 => {
            let name = cfg.binder_names.choose(rng).expect("binder names nonempty").clone();
            let v = TypedVar::new(name, rng.gen_range(0..cfg.sorts));
            scope.push(v.clone());
            let body = gen_typed(rng, cfg, depth.saturating_sub(1), quant.saturating_sub(1), scope);
            scope.pop();
            Formula::Quant(quantifier(rng), v, Box::new(body))
        }
        _ => {
            let l = gen_typed(rng, cfg, depth - 1, quant, scope);
            let r = gen_typed(rng, cfg, depth - 1, quant, scope);
            Formula::binary(connective(rng), l, r)
        }
    }
}
