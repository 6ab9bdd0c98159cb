//! Tarskian satisfaction over finite structures, many-sorted or
//! single-sorted, and the finite models built from fragment layers.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::axioms::{make_comprehension, make_extensionality, make_infinity};
use crate::bfext::BfType;
use crate::fragment::{build_fragment, comprehension_witness, rank_partition, BfFragment, WitnessError};
use crate::generate::{random_typed_formula, TypedGenConfig};
use crate::hf::RankCapExceeded;
use crate::syntax::{Connective, Formula, Quantifier, Term, TypedVar, Variable};

/// Sorting discipline of a structure.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Sorts {
    /// Sorts `0..n`; membership only from sort `k` to sort `k + 1`.
    Many(usize),
    /// One domain, one binary relation.
    Single,
}

#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub enum StructureError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("sort {0} is out of range")]
    NoSuchSort(usize),
    #[error("element {1} is not in the domain of sort {0}")]
    NoSuchElement(usize, String),
    #[error("element {1} is declared twice at sort {0}")]
    Duplicate(usize, String),
}

/// A finite structure; elements are named by strings and addressed by
/// their index within their sort's domain.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FiniteStructure {
    sorts: Sorts,
    domains: Vec<Vec<String>>,
    // membership[k][a] lists the b in sort k+1 (or the one domain) with a in b
    membership: Vec<Vec<Vec<bool>>>,
}

impl FiniteStructure {
    pub fn new(sorts: Sorts, domains: Vec<Vec<String>>) -> Result<Self, StructureError> {
        let expected = match sorts {
            Sorts::Many(n) => n,
            Sorts::Single => 1,
        };
        if domains.len() != expected {
            return Err(StructureError::NoSuchSort(domains.len().min(expected)));
        }
        for (k, d) in domains.iter().enumerate() {
            let mut seen = std::collections::HashSet::new();
            for e in d {
                if !seen.insert(e) {
                    return Err(StructureError::Duplicate(k, e.clone()));
                }
            }
        }
        let relations = match sorts {
            Sorts::Many(n) => n.saturating_sub(1),
            Sorts::Single => 1,
        };
        let membership = (0..relations)
            .map(|k| {
                let rows = domains[k].len();
                let cols = domains[if sorts == Sorts::Single { 0 } else { k + 1 }].len();
                vec![vec![false; cols]; rows]
            })
            .collect();
        Ok(FiniteStructure { sorts, domains, membership })
    }

    pub fn sorts(&self) -> Sorts {
        self.sorts
    }

    pub fn sort_count(&self) -> usize {
        self.domains.len()
    }

    pub fn domain(&self, sort: usize) -> &[String] {
        &self.domains[sort]
    }

    pub fn element(&self, sort: usize, id: &str) -> Option<usize> {
        self.domains.get(sort)?.iter().position(|e| e == id)
    }

    fn upper_sort(&self, k: usize) -> usize {
        match self.sorts {
            Sorts::Many(_) => k + 1,
            Sorts::Single => 0,
        }
    }

    /// Adds `a in b` with `a` at sort `k` (for single-sorted structures, `k = 0`).
    pub fn add_membership(&mut self, k: usize, a: &str, b: &str) -> Result<(), StructureError> {
        if k >= self.membership.len() {
            return Err(StructureError::NoSuchSort(k));
        }
        let up = self.upper_sort(k);
        let ia = self.element(k, a).ok_or_else(|| StructureError::NoSuchElement(k, a.to_string()))?;
        let ib = self.element(up, b).ok_or_else(|| StructureError::NoSuchElement(up, b.to_string()))?;
        self.membership[k][ia][ib] = true;
        Ok(())
    }

    pub fn holds(&self, k: usize, a: usize, b: usize) -> bool {
        self.membership[k][a][b]
    }

    /// Members of element `b` of sort `k + 1`, as indices into sort `k`.
    pub fn extension(&self, k: usize, b: usize) -> Vec<usize> {
        (0..self.domains[k].len()).filter(|&a| self.membership[k][a][b]).collect()
    }
}

/// Reads `sorts <n>` or `sorts single`, then `elem <k> <id>` and
/// `mem <k> <id> <id>` lines. `#` starts a comment.
pub fn parse_structure(text: &str) -> Result<FiniteStructure, StructureError> {
    let mut sorts = None;
    let mut elems: Vec<(usize, usize, String)> = Vec::new();
    let mut mems: Vec<(usize, usize, String, String)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let err = |message: String| StructureError::Syntax { line, message };
        let words: Vec<&str> = raw.split('#').next().unwrap_or("").split_whitespace().collect();
        let num = |w: &str| w.parse::<usize>().map_err(|_| err(format!("expected a sort number, found `{w}`")));
        match words.as_slice() {
            [] => {}
            ["sorts", s] => {
                if sorts.is_some() {
                    return Err(err("second `sorts` line".into()));
                }
                sorts = Some(if *s == "single" { Sorts::Single } else { Sorts::Many(num(s)?) });
            }
            ["elem", k, id] => elems.push((line, num(k)?, id.to_string())),
            ["mem", k, a, b] => mems.push((line, num(k)?, a.to_string(), b.to_string())),
            _ => return Err(err("expected `sorts`, `elem` or `mem`".into())),
        }
    }
    let sorts = sorts.ok_or(StructureError::Syntax { line: 1, message: "missing `sorts` line".into() })?;
    let count = match sorts {
        Sorts::Many(n) => n,
        Sorts::Single => 1,
    };
    let mut domains = vec![Vec::new(); count];
    for (line, k, id) in elems {
        let d = domains
            .get_mut(k)
            .ok_or(StructureError::Syntax { line, message: format!("sort {k} is out of range") })?;
        d.push(id);
    }
    let mut m = FiniteStructure::new(sorts, domains)?;
    for (line, k, a, b) in mems {
        m.add_membership(k, &a, &b).map_err(|e| StructureError::Syntax { line, message: e.to_string() })?;
    }
    Ok(m)
}

impl fmt::Display for FiniteStructure {
    /// The format read by [`parse_structure`].
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sorts {
            Sorts::Many(n) => writeln!(f, "sorts {n}")?,
            Sorts::Single => writeln!(f, "sorts single")?,
        }
        for (k, d) in self.domains.iter().enumerate() {
            for e in d {
                writeln!(f, "elem {k} {e}")?;
            }
        }
        for (k, rel) in self.membership.iter().enumerate() {
            let up = self.upper_sort(k);
            for (a, row) in rel.iter().enumerate() {
                for (b, &m) in row.iter().enumerate() {
                    if m {
                        writeln!(f, "mem {k} {} {}", self.domains[k][a], self.domains[up][b])?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// Values of variables, as element indices in the variable's sort.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Assignment<V> {
    values: BTreeMap<V, usize>,
}

impl<V: Ord> Default for Assignment<V> {
    fn default() -> Self {
        Assignment { values: BTreeMap::new() }
    }
}

impl<V: Variable> Assignment<V> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, v: V, element: usize) -> Self {
        self.values.insert(v, element);
        self
    }

    pub fn insert(&mut self, v: V, element: usize) {
        self.values.insert(v, element);
    }

    pub fn get(&self, v: &V) -> Option<usize> {
        self.values.get(v).copied()
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub enum EvalError {
    #[error("free variable {0} has no value")]
    Unbound(String),
    #[error("sort mismatch: {0}")]
    SortMismatch(String),
    #[error("{0} has no interpretation in a membership structure")]
    Unsupported(String),
    #[error("value {value} of {var} is outside its domain")]
    ValueOutOfRange { var: String, value: usize },
}

enum Compiled {
    Mem { rel: usize, a: usize, b: usize },
    Eq(usize, usize),
    Not(Box<Compiled>),
    Binary(Connective, Box<Compiled>, Box<Compiled>),
    Quant { q: Quantifier, slot: usize, size: usize, body: Box<Compiled> },
}

fn term_var<V: Variable>(t: &Term<V>) -> Result<&V, EvalError> {
    match t {
        Term::Var(v) => Ok(v),
        Term::Pair(..) => Err(EvalError::Unsupported(format!("pair term {t}"))),
    }
}

struct Compiler<'m, V> {
    m: &'m FiniteStructure,
    scope: Vec<(V, usize)>,
    // one slot per free variable, then one per binder occurrence
    slot_sorts: Vec<usize>,
    free: HashMap<V, usize>,
}

impl<'m, V: Variable> Compiler<'m, V> {
    fn sort_of(&self, v: &V) -> Result<usize, EvalError> {
        match (self.m.sorts, v.sort()) {
            (Sorts::Single, _) => Ok(0),
            (Sorts::Many(n), Some(k)) if k < n => Ok(k),
            (Sorts::Many(n), Some(k)) => Err(EvalError::SortMismatch(format!("{v} has sort {k}, structure has {n} sorts"))),
            (Sorts::Many(_), None) => Err(EvalError::SortMismatch(format!("{v} carries no sort"))),
        }
    }

    fn slot(&mut self, v: &V) -> Result<usize, EvalError> {
        if let Some((_, s)) = self.scope.iter().rev().find(|(w, _)| w == v) {
            return Ok(*s);
        }
        if let Some(&s) = self.free.get(v) {
            return Ok(s);
        }
        let sort = self.sort_of(v)?;
        let s = self.slot_sorts.len();
        self.slot_sorts.push(sort);
        self.free.insert(v.clone(), s);
        Ok(s)
    }

    fn formula(&mut self, f: &Formula<V>) -> Result<Compiled, EvalError> {
        Ok(match f {
            Formula::Mem(s, t) => {
                let (a, b) = (self.slot(term_var(s)?)?, self.slot(term_var(t)?)?);
                let (ka, kb) = (self.slot_sorts[a], self.slot_sorts[b]);
                let rel = match self.m.sorts {
                    Sorts::Single => 0,
                    Sorts::Many(_) if kb == ka + 1 => ka,
                    Sorts::Many(_) => return Err(EvalError::SortMismatch(format!("{f} relates sorts {ka} and {kb}"))),
                };
                Compiled::Mem { rel, a, b }
            }
            Formula::Eq(s, t) => {
                let (a, b) = (self.slot(term_var(s)?)?, self.slot(term_var(t)?)?);
                if self.slot_sorts[a] != self.slot_sorts[b] {
                    return Err(EvalError::SortMismatch(format!("{f} equates different sorts")));
                }
                Compiled::Eq(a, b)
            }
            Formula::Set(_) => return Err(EvalError::Unsupported(format!("sethood atom {f}"))),
            Formula::Not(g) => Compiled::Not(Box::new(self.formula(g)?)),
            Formula::Binary(c, l, r) => Compiled::Binary(*c, Box::new(self.formula(l)?), Box::new(self.formula(r)?)),
            Formula::Quant(q, v, b) => {
                let sort = self.sort_of(v)?;
                let slot = self.slot_sorts.len();
                self.slot_sorts.push(sort);
                self.scope.push((v.clone(), slot));
                let body = self.formula(b)?;
                self.scope.pop();
                Compiled::Quant { q: *q, slot, size: self.m.domains[sort].len(), body: Box::new(body) }
            }
        })
    }
}

fn run(m: &FiniteStructure, c: &Compiled, vals: &mut [usize]) -> bool {
    match c {
        Compiled::Mem { rel, a, b } => m.membership[*rel][vals[*a]][vals[*b]],
        Compiled::Eq(a, b) => vals[*a] == vals[*b],
        Compiled::Not(g) => !run(m, g, vals),
        Compiled::Binary(conn, l, r) => {
            let l = run(m, l, vals);
            match conn {
                Connective::And => l && run(m, r, vals),
                Connective::Or => l || run(m, r, vals),
                Connective::Implies => !l || run(m, r, vals),
                Connective::Iff => l == run(m, r, vals),
            }
        }
        Compiled::Quant { q, slot, size, body } => {
            let want = *q == Quantifier::Exists;
            for e in 0..*size {
                vals[*slot] = e;
                if run(m, body, vals) == want {
                    return want;
                }
            }
            !want
        }
    }
}

/// A formula compiled against a structure, ready for repeated evaluation.
pub struct Evaluator<'m, V> {
    m: &'m FiniteStructure,
    code: Compiled,
    free: Vec<(V, usize, usize)>,
    slots: usize,
}

impl<'m, V: Variable> Evaluator<'m, V> {
    pub fn new(m: &'m FiniteStructure, f: &Formula<V>) -> Result<Self, EvalError> {
        let mut c = Compiler { m, scope: Vec::new(), slot_sorts: Vec::new(), free: HashMap::new() };
        let code = c.formula(f)?;
        let mut free: Vec<(V, usize, usize)> = c.free.into_iter().map(|(v, s)| (v, s, c.slot_sorts[s])).collect();
        free.sort();
        Ok(Evaluator { m, code, free, slots: c.slot_sorts.len() })
    }

    /// Free variables with their sorts.
    pub fn free_variables(&self) -> Vec<(&V, usize)> {
        self.free.iter().map(|(v, _, k)| (v, *k)).collect()
    }

    pub fn eval(&self, a: &Assignment<V>) -> Result<bool, EvalError> {
        let mut vals = vec![0; self.slots];
        for (v, slot, sort) in &self.free {
            let value = a.get(v).ok_or_else(|| EvalError::Unbound(v.to_string()))?;
            if value >= self.m.domains[*sort].len() {
                return Err(EvalError::ValueOutOfRange { var: v.to_string(), value });
            }
            vals[*slot] = value;
        }
        Ok(run(self.m, &self.code, &mut vals))
    }
}

/// Truth of `f` in `m` under `a`. Sorts are enforced in many-sorted
/// structures and ignored in single-sorted ones.
pub fn evaluate<V: Variable>(m: &FiniteStructure, f: &Formula<V>, a: &Assignment<V>) -> Result<bool, EvalError> {
    Evaluator::new(m, f)?.eval(a)
}

#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub enum ModelError {
    #[error("need 4 <= n <= max_rank + 1, got n = {n} with max_rank {max_rank}")]
    BadSortCount { n: usize, max_rank: usize },
    #[error(transparent)]
    RankCap(#[from] RankCapExceeded),
}

/// The finite analog of the type-theoretic model: sort `i` holds the
/// cumulative layer `<= i` of a fragment, membership is ℰ.
#[derive(Clone, Debug)]
pub struct TstModel {
    pub structure: FiniteStructure,
    pub fragment: BfFragment,
    /// `types[i][e]` is element `e` of sort `i`.
    pub types: Vec<Vec<BfType>>,
}

impl TstModel {
    pub fn sort_count(&self) -> usize {
        self.types.len()
    }

    pub fn index(&self, sort: usize, t: &BfType) -> Option<usize> {
        self.types.get(sort)?.binary_search(t).ok()
    }
}

pub fn build_tst_model(max_rank: usize, n: usize, cap: usize) -> Result<TstModel, ModelError> {
    if n < 4 || n > max_rank + 1 {
        return Err(ModelError::BadSortCount { n, max_rank });
    }
    let fragment = build_fragment(max_rank, cap)?;
    let layers = rank_partition(&fragment);
    let types: Vec<Vec<BfType>> = (0..n).map(|i| layers[&i].clone()).collect();
    let domains = types.iter().map(|d| d.iter().map(ToString::to_string).collect()).collect();
    let mut structure = FiniteStructure::new(Sorts::Many(n), domains).expect("layers are duplicate-free");
    for k in 0..n - 1 {
        for (b, t) in types[k + 1].iter().enumerate() {
            for pred in fragment.extension(t).expect("layer elements are in the fragment") {
                let a = types[k].binary_search(pred).expect("predecessors lie one layer down");
                structure.membership[k][a][b] = true;
            }
        }
    }
    Ok(TstModel { structure, fragment, types })
}

/// One sampled Comprehension instance.
#[derive(Clone, Debug)]
pub struct ComprehensionSample {
    pub instance: Formula<TypedVar>,
    /// The closed instance is true in the model.
    pub holds: bool,
    /// For one random parameter tuple, the element found by search whose
    /// extension is the defined subset equals the glued witness.
    pub witness_agrees: Result<bool, String>,
}

#[derive(Clone, Debug)]
pub struct TheoryReport {
    pub extensionality: Vec<(usize, bool)>,
    pub comprehension: Vec<ComprehensionSample>,
    pub infinity: bool,
}

impl TheoryReport {
    pub fn extensionality_passed(&self) -> usize {
        self.extensionality.iter().filter(|(_, ok)| *ok).count()
    }

    pub fn comprehension_passed(&self) -> usize {
        self.comprehension.iter().filter(|s| s.holds).count()
    }

    pub fn witnesses_agreeing(&self) -> usize {
        self.comprehension.iter().filter(|s| s.witness_agrees == Ok(true)).count()
    }

    /// Everything but Infinity holds, and Infinity fails.
    pub fn as_expected(&self) -> bool {
        self.extensionality_passed() == self.extensionality.len()
            && self.comprehension_passed() == self.comprehension.len()
            && self.witnesses_agreeing() == self.comprehension.len()
            && !self.infinity
    }

    pub fn to_tsv(&self) -> String {
        format!(
            "family\tpassed\ttotal\nextensionality\t{}\t{}\ncomprehension\t{}\t{}\ncomprehension-witness\t{}\t{}\ninfinity\t{}\t1\n",
            self.extensionality_passed(),
            self.extensionality.len(),
            self.comprehension_passed(),
            self.comprehension.len(),
            self.witnesses_agreeing(),
            self.comprehension.len(),
            u8::from(self.infinity),
        )
    }
}

impl fmt::Display for TheoryReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "extensionality: {}/{} levels true", self.extensionality_passed(), self.extensionality.len())?;
        writeln!(
            f,
            "comprehension: {}/{} sampled instances true, witnesses agree {}/{}",
            self.comprehension_passed(),
            self.comprehension.len(),
            self.witnesses_agreeing(),
            self.comprehension.len()
        )?;
        for s in self.comprehension.iter().filter(|s| !s.holds || s.witness_agrees != Ok(true)) {
            writeln!(f, "  failed: {} ({:?})", s.instance, s.witness_agrees)?;
        }
        if self.infinity {
            write!(f, "infinity: true (unexpected in a finite model)")
        } else {
            write!(f, "infinity: false (expected at finite scale: a finite set has no injective, non-surjective self-map)")
        }
    }
}

fn sample_comprehension<R: Rng>(
    rng: &mut R,
    model: &TstModel,
) -> Result<ComprehensionSample, EvalError> {
    let n = model.sort_count();
    let k = rng.gen_range(0..n - 1);
    let x = TypedVar::new("x", k);
    let params: Vec<TypedVar> =
        (0..rng.gen_range(0..=2)).map(|i| TypedVar::new(format!("z{i}"), rng.gen_range(0..n))).collect();
    let mut free = vec![x.clone()];
    free.extend(params.iter().cloned());
    let cfg = TypedGenConfig { max_quantifier_depth: 2, ..TypedGenConfig::new(n, 3, free) };
    let phi = random_typed_formula(rng, &cfg);
    let instance = make_comprehension(&phi, &x);
    let m = &model.structure;
    let holds = evaluate(m, &instance, &Assignment::new())?;

    // the subset defined by phi under random parameters
    let eval = Evaluator::new(m, &phi)?;
    let mut a = Assignment::new();
    for (v, sort) in eval.free_variables() {
        if *v != x {
            a.insert(v.clone(), rng.gen_range(0..m.domain(sort).len()));
        }
    }
    let mut subset = Vec::new();
    for e in 0..m.domain(k).len() {
        a.insert(x.clone(), e);
        if eval.eval(&a)? {
            subset.push(e);
        }
    }
    let searched = (0..m.domain(k + 1).len()).find(|&b| m.extension(k, b) == subset);
    let members: Vec<BfType> = subset.iter().map(|&e| model.types[k][e].clone()).collect();
    let witness_agrees = comprehension_witness(&model.fragment, k, &members)
        .map(|w| searched.map(|b| &model.types[k + 1][b]) == Some(&w))
        .map_err(|e: WitnessError| e.to_string());
    Ok(ComprehensionSample { instance, holds, witness_agrees })
}

/// Extensionality at every level, `samples` random Comprehension instances
/// (quantifier depth at most 2, up to two parameters), and Infinity.
pub fn check_theory(model: &TstModel, samples: usize, seed: u64) -> Result<TheoryReport, EvalError> {
    let m = &model.structure;
    let n = model.sort_count();
    let extensionality = (0..n - 1)
        .map(|k| evaluate(m, &make_extensionality(k), &Assignment::new()).map(|ok| (k, ok)))
        .collect::<Result<_, _>>()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let comprehension = (0..samples).map(|_| sample_comprehension(&mut rng, model)).collect::<Result<_, _>>()?;
    let infinity = evaluate(m, &make_infinity(), &Assignment::new())?;
    Ok(TheoryReport { extensionality, comprehension, infinity })
}

/// A uniformly random subset of `0..n`.
pub fn random_subset<R: Rng>(rng: &mut R, n: usize) -> Vec<usize> {
    (0..n).filter(|_| rng.gen_bool(0.5)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::{parse_formula, parse_typed_formula};
    use crate::syntax::Var;

    fn tp(s: &str) -> Formula<TypedVar> {
        parse_typed_formula(s).unwrap()
    }

    #[test]
    fn membership_atom() {
        let m = parse_structure("sorts 4\nelem 0 a\nelem 1 b\nelem 1 c\nmem 0 a b").unwrap();
        let f = tp("x@0 in y@1");
        let a = |y| Assignment::new().with(TypedVar::new("x", 0), 0).with(TypedVar::new("y", 1), y);
        assert_eq!(evaluate(&m, &f, &a(0)), Ok(true));
        assert_eq!(evaluate(&m, &f, &a(1)), Ok(false));
        assert!(matches!(evaluate(&m, &f, &Assignment::new()), Err(EvalError::Unbound(_))));
        assert!(matches!(evaluate(&m, &tp("x@0 in y@2"), &a(0)), Err(EvalError::SortMismatch(_))));
        assert!(matches!(evaluate(&m, &tp("x@0 = x@4"), &a(0)), Err(EvalError::SortMismatch(_))));
    }

    #[test]
    fn single_sorted_mode_ignores_sorts() {
        let m = parse_structure("sorts single\nelem 0 a\nelem 0 b\nmem 0 a b\nmem 0 b b").unwrap();
        let f = parse_formula("exists x. forall y. (x in y <-> y = y)").unwrap();
        assert_eq!(evaluate(&m, &f, &Assignment::<Var>::new()), Ok(false));
        let g = parse_formula("forall y. exists x. x in y").unwrap();
        assert_eq!(evaluate(&m, &g, &Assignment::new()), Ok(false));
        let h = parse_formula("exists y. forall x. x in y").unwrap();
        assert_eq!(evaluate(&m, &h, &Assignment::new()), Ok(true));
        assert!(matches!(evaluate(&m, &parse_formula("S(x)").unwrap(), &Assignment::new()), Err(EvalError::Unsupported(_))));
        let many = parse_structure("sorts 4\nelem 0 a").unwrap();
        assert!(matches!(evaluate(&many, &h, &Assignment::new()), Err(EvalError::SortMismatch(_))));
    }

    #[test]
    fn structure_text_round_trip() {
        let text = "sorts 4\nelem 0 a\nelem 1 b\nelem 1 c\nmem 0 a c\n";
        assert_eq!(parse_structure(text).unwrap().to_string(), text);
        assert!(parse_structure("sorts 4\nmem 0 a b").is_err());
        assert!(parse_structure("elem 0 a").is_err());
        assert!(parse_structure("sorts 2\nelem 5 a").is_err());
        assert!(parse_structure("sorts 2\nelem 0 a\nelem 0 a").is_err());
    }

    #[test]
    fn fragment_model_shape() {
        let model = build_tst_model(3, 4, 3).unwrap();
        let sizes: Vec<usize> = (0..4).map(|k| model.structure.domain(k).len()).collect();
        assert_eq!(sizes, [1, 2, 4, 16]);
        assert_eq!(model.structure.domain(0), ["{}"]);
        // every subset of sort 2 is an extension at sort 3
        let mut exts: Vec<Vec<usize>> = (0..16).map(|b| model.structure.extension(2, b)).collect();
        exts.sort();
        exts.dedup();
        assert_eq!(exts.len(), 16);
        assert!(matches!(build_tst_model(3, 5, 3), Err(ModelError::BadSortCount { .. })));
        assert!(matches!(build_tst_model(2, 3, 3), Err(ModelError::BadSortCount { .. })));
    }

    #[test]
    fn axioms_in_the_fragment_model() {
        let model = build_tst_model(3, 4, 3).unwrap();
        let m = &model.structure;
        for k in 0..3 {
            assert_eq!(evaluate(m, &make_extensionality(k), &Assignment::new()), Ok(true));
        }
        let empty = make_comprehension(&tp("~(x@0 = x@0)"), &TypedVar::new("x", 0));
        assert_eq!(evaluate(m, &empty, &Assignment::new()), Ok(true));
        assert_eq!(evaluate(m, &make_infinity(), &Assignment::new()), Ok(false));
    }

    #[test]
    fn theory_report() {
        let model = build_tst_model(3, 4, 3).unwrap();
        let r = check_theory(&model, 20, 0).unwrap();
        assert!(r.as_expected(), "{r}");
        assert!(r.to_string().contains("expected at finite scale"));
        assert!(r.to_tsv().starts_with("family\tpassed\ttotal\n"));
    }
}
