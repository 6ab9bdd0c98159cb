//! Independent reference implementations used by the integration suites.
//! None of these call the solver, the evaluator or the canonicalizer they
//! are checked against.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rand::Rng;
use stratset::bfext::BfextGraph;
use stratset::stratify::UnstratifiabilityWitness;
use stratset::syntax::{Connective, Formula, Quantifier, Term, TypedVar, Var, Variable};

// ---------------------------------------------------------------------------
// stratification

/// `(lower, upper, offset)`: `type(upper) = type(lower) + offset`.
pub type Edge = (Term<Var>, Term<Var>, i64);

fn add_term(t: &Term<Var>, terms: &mut BTreeSet<Term<Var>>, edges: &mut Vec<Edge>) {
    terms.insert(t.clone());
    if let Term::Pair(l, r) = t {
        for s in [&**l, &**r] {
            edges.push((s.clone(), t.clone(), 0));
            add_term(s, terms, edges);
        }
    }
}

/// Terms and type constraints of an alpha-separated formula, read directly
/// off the definition.
pub fn terms_and_edges(f: &Formula<Var>) -> (BTreeSet<Term<Var>>, Vec<Edge>) {
    let mut terms = BTreeSet::new();
    let mut edges = Vec::new();
    fn walk(f: &Formula<Var>, terms: &mut BTreeSet<Term<Var>>, edges: &mut Vec<Edge>) {
        match f {
            Formula::Mem(s, t) => {
                add_term(s, terms, edges);
                add_term(t, terms, edges);
                edges.push((s.clone(), t.clone(), 1));
            }
            Formula::Eq(s, t) => {
                add_term(s, terms, edges);
                add_term(t, terms, edges);
                edges.push((s.clone(), t.clone(), 0));
            }
            Formula::Set(t) => add_term(t, terms, edges),
            Formula::Not(g) => walk(g, terms, edges),
            Formula::Binary(_, l, r) => {
                walk(l, terms, edges);
                walk(r, terms, edges);
            }
            Formula::Quant(_, v, b) => {
                terms.insert(Term::Var(v.clone()));
                walk(b, terms, edges);
            }
        }
    }
    walk(f, &mut terms, &mut edges);
    (terms, edges)
}

/// Exhaustive search for a type assignment with values in `0..terms`,
/// component by component. Returns one with minimum 0 per component.
pub fn brute_force_stratify(f: &Formula<Var>) -> Option<BTreeMap<Term<Var>, usize>> {
    let (terms, edges) = terms_and_edges(f);
    let terms: Vec<Term<Var>> = terms.into_iter().collect();
    let bound = terms.len() as i64;
    let idx: HashMap<&Term<Var>, usize> = terms.iter().enumerate().map(|(i, t)| (t, i)).collect();
    let e: Vec<(usize, usize, i64)> = edges.iter().map(|(a, b, o)| (idx[a], idx[b], *o)).collect();
    let mut adj = vec![Vec::new(); terms.len()];
    for &(a, b, _) in &e {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut comp = vec![usize::MAX; terms.len()];
    let mut comps: Vec<Vec<usize>> = Vec::new();
    for s in 0..terms.len() {
        if comp[s] != usize::MAX {
            continue;
        }
        let c = comps.len();
        let mut order = vec![s];
        comp[s] = c;
        let mut k = 0;
        while k < order.len() {
            for &n in &adj[order[k]] {
                if comp[n] == usize::MAX {
                    comp[n] = c;
                    order.push(n);
                }
            }
            k += 1;
        }
        comps.push(order);
    }
    let mut types: Vec<Option<i64>> = vec![None; terms.len()];
    fn consistent(types: &[Option<i64>], e: &[(usize, usize, i64)]) -> bool {
        e.iter().all(|&(a, b, o)| match (types[a], types[b]) {
            (Some(x), Some(y)) => y == x + o,
            _ => true,
        })
    }
    fn search(order: &[usize], k: usize, bound: i64, types: &mut Vec<Option<i64>>, e: &[(usize, usize, i64)]) -> bool {
        if k == order.len() {
            return true;
        }
        for t in 0..bound {
            types[order[k]] = Some(t);
            if consistent(types, e) && search(order, k + 1, bound, types, e) {
                return true;
            }
        }
        types[order[k]] = None;
        false
    }
    for order in &comps {
        if !search(order, 0, bound, &mut types, &e) {
            return None;
        }
        let min = order.iter().map(|&i| types[i].unwrap()).min().unwrap();
        for &i in order {
            types[i] = Some(types[i].unwrap() - min);
        }
    }
    Some(terms.into_iter().zip(types.into_iter().map(|t| t.unwrap() as usize)).collect())
}

/// Checks a witness against the definition: consecutive steps chain, the
/// chain closes, every step is a constraint of the formula and the signed
/// offsets do not cancel.
pub fn witness_is_sound(f: &Formula<Var>, w: &UnstratifiabilityWitness) -> bool {
    let (_, edges) = terms_and_edges(f);
    if w.cycle.is_empty() {
        return false;
    }
    let mut total = 0i64;
    for (i, step) in w.cycle.iter().enumerate() {
        let c = &step.constraint;
        let known = edges.iter().any(|(a, b, o)| *a == c.lower && *b == c.upper && *o == c.offset as i64);
        if !known {
            return false;
        }
        let (from, to, d) = if step.forward {
            (&c.lower, &c.upper, c.offset as i64)
        } else {
            (&c.upper, &c.lower, -(c.offset as i64))
        };
        let next = &w.cycle[(i + 1) % w.cycle.len()];
        let next_from = if next.forward { &next.constraint.lower } else { &next.constraint.upper };
        if to != next_from {
            return false;
        }
        let _ = from;
        total += d;
    }
    total != 0
}

// ---------------------------------------------------------------------------
// exhaustive small formulas

fn v(n: &str) -> Term<Var> {
    Term::var(Var::new(n))
}

/// Atoms over `x, y, z`, plus atoms with one pair term over `x, y`.
pub fn small_atoms() -> Vec<Formula<Var>> {
    let names = ["x", "y", "z"];
    let mut out = Vec::new();
    for a in names {
        for b in names {
            out.push(Formula::mem(v(a), v(b)));
            out.push(Formula::eq(v(a), v(b)));
        }
    }
    for a in ["x", "y"] {
        for b in ["x", "y"] {
            let p = Term::pair(v(a), v(b));
            for c in ["x", "y"] {
                out.push(Formula::mem(p.clone(), v(c)));
                out.push(Formula::mem(v(c), p.clone()));
                out.push(Formula::eq(p.clone(), v(c)));
                out.push(Formula::eq(v(c), p.clone()));
            }
        }
    }
    out.push(Formula::set(v("x")));
    out.push(Formula::set(Term::pair(v("x"), v("y"))));
    out
}

fn unary_wrappers(f: &Formula<Var>) -> Vec<Formula<Var>> {
    let mut out = vec![Formula::not(f.clone())];
    for q in [Quantifier::Forall, Quantifier::Exists] {
        for n in ["x", "y", "z"] {
            out.push(Formula::Quant(q, Var::new(n), Box::new(f.clone())));
        }
    }
    out
}

/// Every formula with at most two connective/quantifier nodes and at most
/// two atoms drawn from [`small_atoms`].
pub fn exhaustive_suite() -> Vec<Formula<Var>> {
    let atoms = small_atoms();
    let mut out = atoms.clone();
    let mut one_unary = Vec::new();
    for a in &atoms {
        one_unary.extend(unary_wrappers(a));
    }
    out.extend(one_unary.iter().cloned());
    for u in &one_unary {
        out.extend(unary_wrappers(u));
    }
    for c in Connective::ALL {
        for a in &atoms {
            for b in &atoms {
                let bin = Formula::binary(c, a.clone(), b.clone());
                out.extend(unary_wrappers(&bin));
                out.push(bin);
            }
            for u in &one_unary {
                out.push(Formula::binary(c, a.clone(), u.clone()));
                out.push(Formula::binary(c, u.clone(), a.clone()));
            }
        }
    }
    out
}

pub fn term_count(f: &Formula<Var>) -> usize {
    terms_and_edges(&f.alpha_separate()).0.len()
}

// ---------------------------------------------------------------------------
// alpha-equivalence by renaming binders positionally

/// Renames the `i`-th binder (pre-order) to `bound{i}` and its bound
/// occurrences with it; free variables keep their names.
pub fn positional_names<V: Variable>(f: &Formula<V>) -> Formula<V> {
    fn term<V: Variable>(t: &Term<V>, env: &[(V, V)]) -> Term<V> {
        t.map_vars(&mut |x: &V| env.iter().rev().find(|(o, _)| o == x).map_or_else(|| x.clone(), |(_, n)| n.clone()))
    }
    fn go<V: Variable>(f: &Formula<V>, env: &mut Vec<(V, V)>, count: &mut usize) -> Formula<V> {
        match f {
            Formula::Mem(s, t) => Formula::Mem(term(s, env), term(t, env)),
            Formula::Eq(s, t) => Formula::Eq(term(s, env), term(t, env)),
            Formula::Set(t) => Formula::Set(term(t, env)),
            Formula::Not(g) => Formula::not(go(g, env, count)),
            Formula::Binary(c, l, r) => {
                let l = go(l, env, count);
                let r = go(r, env, count);
                Formula::binary(*c, l, r)
            }
            Formula::Quant(q, x, b) => {
                let fresh = x.renamed(format!("bound{count}"));
                *count += 1;
                env.push((x.clone(), fresh.clone()));
                let b = go(b, env, count);
                env.pop();
                Formula::Quant(*q, fresh, Box::new(b))
            }
        }
    }
    go(f, &mut Vec::new(), &mut 0)
}

// ---------------------------------------------------------------------------
// Gödel coding

/// Cantor pairing on u128, for small hand checks.
pub fn pi(a: u128, b: u128) -> u128 {
    (a + b) * (a + b + 1) / 2 + b
}

/// Variables renamed `x0, x1, ..` in first occurrence order (textual,
/// binders included).
pub fn first_occurrence_names<V: Variable>(f: &Formula<V>) -> Formula<V> {
    fn collect<V: Variable>(f: &Formula<V>, out: &mut Vec<V>) {
        let note = |t: &Term<V>, out: &mut Vec<V>| {
            for x in t.variables() {
                if !out.contains(x) {
                    out.push(x.clone());
                }
            }
        };
        match f {
            Formula::Mem(s, t) | Formula::Eq(s, t) => {
                note(s, out);
                note(t, out);
            }
            Formula::Set(t) => note(t, out),
            Formula::Not(g) => collect(g, out),
            Formula::Binary(_, l, r) => {
                collect(l, out);
                collect(r, out);
            }
            Formula::Quant(_, x, b) => {
                if !out.contains(x) {
                    out.push(x.clone());
                }
                collect(b, out);
            }
        }
    }
    let mut order = Vec::new();
    collect(f, &mut order);
    f.map_vars(&mut |x: &V| {
        let i = order.iter().position(|o| o == x).unwrap();
        x.renamed(format!("x{i}"))
    })
}

// ---------------------------------------------------------------------------
// graphs

/// Adjacency-matrix form: `m[a][b]` iff `(a, b)` is an edge.
pub fn matrix<N: Clone + Ord + std::fmt::Display>(g: &BfextGraph<N>) -> (Vec<Vec<bool>>, Option<usize>) {
    let nodes = g.nodes();
    let pos = |n: &N| nodes.iter().position(|m| m == n).unwrap();
    let mut m = vec![vec![false; nodes.len()]; nodes.len()];
    for (a, b) in g.edges() {
        m[pos(&a)][pos(&b)] = true;
    }
    (m, g.top().map(pos))
}

/// Tries every bijection between the carriers.
pub fn brute_force_isomorphic<N: Clone + Ord + std::fmt::Display>(g: &BfextGraph<N>, h: &BfextGraph<N>) -> bool {
    let (a, ta) = matrix(g);
    let (b, tb) = matrix(h);
    let n = a.len();
    if n != b.len() || ta.is_some() != tb.is_some() {
        return false;
    }
    let mut perm: Vec<usize> = (0..n).collect();
    fn heap(k: usize, perm: &mut Vec<usize>, test: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        if k <= 1 {
            return test(perm);
        }
        for i in 0..k {
            if heap(k - 1, perm, test) {
                return true;
            }
            let j = if k.is_multiple_of(2) { i } else { 0 };
            perm.swap(j, k - 1);
        }
        false
    }
    let mut test = |p: &[usize]| {
        if let (Some(x), Some(y)) = (ta, tb) {
            if p[x] != y {
                return false;
            }
        }
        (0..n).all(|i| (0..n).all(|j| a[i][j] == b[p[i]][p[j]]))
    };
    heap(n, &mut perm, &mut test)
}

/// A random certified topped graph on `1..=max_nodes` nodes: a random DAG
/// over `0..n` (edges only upward) whose last node reaches everything,
/// retried until extensional.
pub fn random_certified_graph<R: Rng>(rng: &mut R, max_nodes: usize) -> BfextGraph<String> {
    let n = rng.gen_range(1..=max_nodes);
    loop {
        let p = rng.gen_range(0.2..0.8);
        let names: Vec<String> = (0..n).map(|i| format!("n{i}")).collect();
        let mut edges = Vec::new();
        for b in 0..n {
            for a in 0..b {
                if rng.gen_bool(p) {
                    edges.push((names[a].clone(), names[b].clone()));
                }
            }
        }
        let g = BfextGraph::new(names.clone(), edges, Some(names[n - 1].clone())).unwrap();
        let g = g.seg(&names[n - 1]).unwrap();
        if g.len() == n && g.check().is_ok() {
            // shuffle labels so node names carry no structure
            let mut labels: Vec<usize> = (0..g.len()).collect();
            for i in (1..labels.len()).rev() {
                labels.swap(i, rng.gen_range(0..=i));
            }
            let nodes = g.nodes().to_vec();
            return g.relabel(|x| format!("v{}", labels[nodes.iter().position(|m| m == x).unwrap()]));
        }
    }
}

// ---------------------------------------------------------------------------
// truth tables

/// Structure as plain data: `domains[k]` elements of sort `k` (or the one
/// domain), `mem[k]` pairs of indices.
#[derive(Clone, Debug)]
pub struct RawStructure {
    pub single: bool,
    pub domains: Vec<usize>,
    pub mem: Vec<BTreeSet<(usize, usize)>>,
}

impl RawStructure {
    pub fn to_text(&self) -> String {
        let mut s = if self.single { "sorts single\n".to_string() } else { format!("sorts {}\n", self.domains.len()) };
        for (k, &n) in self.domains.iter().enumerate() {
            for e in 0..n {
                s.push_str(&format!("elem {k} e{k}_{e}\n"));
            }
        }
        for (k, rel) in self.mem.iter().enumerate() {
            let up = if self.single { 0 } else { k + 1 };
            for (a, b) in rel {
                s.push_str(&format!("mem {k} e{k}_{a} e{up}_{b}\n"));
            }
        }
        s
    }

    pub fn random<R: Rng>(rng: &mut R, single: bool, sorts: usize, max_elems: usize) -> Self {
        let count = if single { 1 } else { sorts };
        let domains: Vec<usize> = (0..count).map(|_| rng.gen_range(1..=max_elems)).collect();
        let relations = if single { 1 } else { sorts - 1 };
        let mem = (0..relations)
            .map(|k| {
                let up = if single { 0 } else { k + 1 };
                let mut rel = BTreeSet::new();
                for a in 0..domains[k] {
                    for b in 0..domains[up] {
                        if rng.gen_bool(0.4) {
                            rel.insert((a, b));
                        }
                    }
                }
                rel
            })
            .collect();
        RawStructure { single, domains, mem }
    }
}

/// Direct recursive truth with an explicit environment.
pub fn truth<V: Variable>(m: &RawStructure, f: &Formula<V>, env: &mut Vec<(V, usize)>) -> bool {
    let look = |t: &Term<V>, env: &Vec<(V, usize)>| -> (usize, usize) {
        let Term::Var(x) = t else { panic!("pair in truth-table oracle") };
        let val = env.iter().rev().find(|(y, _)| y == x).expect("bound").1;
        (if m.single { 0 } else { x.sort().unwrap() }, val)
    };
    match f {
        Formula::Mem(s, t) => {
            let ((k, a), (_, b)) = (look(s, env), look(t, env));
            m.mem[k].contains(&(a, b))
        }
        Formula::Eq(s, t) => look(s, env).1 == look(t, env).1,
        Formula::Set(_) => panic!("sethood in truth-table oracle"),
        Formula::Not(g) => !truth(m, g, env),
        Formula::Binary(c, l, r) => {
            let (l, r) = (truth(m, l, env), truth(m, r, env));
            match c {
                Connective::And => l && r,
                Connective::Or => l || r,
                Connective::Implies => !l || r,
                Connective::Iff => l == r,
            }
        }
        Formula::Quant(q, x, b) => {
            let sort = if m.single { 0 } else { x.sort().unwrap() };
            let mut results = (0..m.domains[sort]).map(|e| {
                env.push((x.clone(), e));
                let r = truth(m, b, env);
                env.pop();
                r
            });
            match q {
                Quantifier::Forall => results.all(|r| r),
                Quantifier::Exists => results.any(|r| r),
            }
        }
    }
}

/// Every assignment of the given variables over their domains.
pub fn all_assignments<V: Variable>(m: &RawStructure, vars: &[V]) -> Vec<Vec<(V, usize)>> {
    let mut out = vec![Vec::new()];
    for x in vars {
        let sort = if m.single { 0 } else { x.sort().unwrap() };
        out = out
            .into_iter()
            .flat_map(|a: Vec<(V, usize)>| {
                (0..m.domains[sort]).map(move |e| {
                    let mut a = a.clone();
                    a.push((x.clone(), e));
                    a
                })
            })
            .collect();
    }
    out
}

pub fn typed_vars(names: &[(&str, usize)]) -> Vec<TypedVar> {
    names.iter().map(|(n, k)| TypedVar::new(*n, *k)).collect()
}
