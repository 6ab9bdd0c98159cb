//! Stratification of untyped formulas.
//!
//! The terms of a formula are nodes; each immediate-subterm edge and each
//! equality atom asks for equal types, each membership atom `s in t` asks
//! for `type(t) = type(s) + 1`. Sethood atoms impose nothing. The resulting
//! difference constraints are solved with a union-find that stores, for each
//! node, its type offset relative to the class representative.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;

use crate::syntax::{Formula, Term, Var};

/// Where a constraint came from.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Origin {
    /// `s` is an immediate subterm of the pair `t`.
    Subterm,
    /// The atom `s in t`.
    Membership,
    /// The atom `s = t`.
    Equality,
}

/// `type(upper) = type(lower) + offset`, with `offset` 0 or 1.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Constraint {
    pub lower: Term<Var>,
    pub upper: Term<Var>,
    pub offset: u8,
    pub origin: Origin,
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.origin {
            Origin::Membership => write!(f, "{} in {}", self.lower, self.upper),
            Origin::Equality => write!(f, "{} = {}", self.lower, self.upper),
            Origin::Subterm => write!(f, "{} subterm of {}", self.lower, self.upper),
        }
    }
}

/// The distinct terms of a formula and the constraints between them.
#[derive(Clone, Debug)]
pub struct ConstraintSet {
    nodes: Vec<Term<Var>>,
    index: HashMap<Term<Var>, usize>,
    // node indices of each constraint, parallel to `constraints`
    edges: Vec<(usize, usize)>,
    constraints: Vec<Constraint>,
}

impl ConstraintSet {
    fn new() -> Self {
        ConstraintSet {
            nodes: Vec::new(),
            index: HashMap::new(),
            edges: Vec::new(),
            constraints: Vec::new(),
        }
    }

    fn node(&mut self, t: &Term<Var>) -> usize {
        if let Some(&i) = self.index.get(t) {
            return i;
        }
        let i = self.nodes.len();
        self.nodes.push(t.clone());
        self.index.insert(t.clone(), i);
        if let Term::Pair(l, r) = t {
            for sub in [&**l, &**r] {
                let j = self.node(sub);
                self.push(j, i, 0, Origin::Subterm);
            }
        }
        i
    }

    fn push(&mut self, lower: usize, upper: usize, offset: u8, origin: Origin) {
        // a pair term can contain the same subterm twice
        let duplicate_edge = origin == Origin::Subterm
            && self
                .constraints
                .iter()
                .zip(&self.edges)
                .any(|(c, e)| c.origin == Origin::Subterm && *e == (lower, upper));
        if duplicate_edge {
            return;
        }
        self.edges.push((lower, upper));
        self.constraints.push(Constraint {
            lower: self.nodes[lower].clone(),
            upper: self.nodes[upper].clone(),
            offset,
            origin,
        });
    }

    fn visit(&mut self, f: &Formula<Var>) {
        match f {
            Formula::Mem(s, t) => {
                let (a, b) = (self.node(s), self.node(t));
                self.push(a, b, 1, Origin::Membership);
            }
            Formula::Eq(s, t) => {
                let (a, b) = (self.node(s), self.node(t));
                self.push(a, b, 0, Origin::Equality);
            }
            Formula::Set(t) => {
                self.node(t);
            }
            Formula::Not(g) => self.visit(g),
            Formula::Binary(_, l, r) => {
                self.visit(l);
                self.visit(r);
            }
            Formula::Quant(_, v, b) => {
                self.node(&Term::Var(v.clone()));
                self.visit(b);
            }
        }
    }

    /// Distinct terms in order of first appearance.
    pub fn nodes(&self) -> &[Term<Var>] {
        &self.nodes
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }
}

/// Gathers the constraint set of an (alpha-separated) formula. Binder
/// variables count as terms of the formula even when they never occur in
/// an atom.
pub fn collect_constraints(f: &Formula<Var>) -> ConstraintSet {
    let mut cs = ConstraintSet::new();
    cs.visit(f);
    cs
}

/// A type assignment satisfying every constraint, with the least type in
/// each connected component equal to 0.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Stratification {
    assignment: BTreeMap<Term<Var>, usize>,
}

impl Stratification {
    pub fn get(&self, t: &Term<Var>) -> Option<usize> {
        self.assignment.get(t).copied()
    }

    pub fn var_type(&self, v: &Var) -> Option<usize> {
        self.get(&Term::Var(v.clone()))
    }

    pub fn assignment(&self) -> &BTreeMap<Term<Var>, usize> {
        &self.assignment
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    /// Whether every constraint of `cs` holds under this assignment.
    pub fn satisfies(&self, cs: &ConstraintSet) -> bool {
        cs.constraints.iter().all(|c| match (self.get(&c.lower), self.get(&c.upper)) {
            (Some(l), Some(u)) => u == l + c.offset as usize,
            _ => false,
        })
    }
}

impl FromIterator<(Term<Var>, usize)> for Stratification {
    fn from_iter<I: IntoIterator<Item = (Term<Var>, usize)>>(iter: I) -> Self {
        Stratification {
            assignment: iter.into_iter().collect(),
        }
    }
}

impl fmt::Display for Stratification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (t, k)) in self.assignment.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{t}:{k}")?;
        }
        Ok(())
    }
}

/// One step of a closed walk through the constraint graph.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CycleStep {
    pub constraint: Constraint,
    /// Traversed from `lower` to `upper` (adds the offset) or backwards
    /// (subtracts it).
    pub forward: bool,
}

impl CycleStep {
    pub fn from(&self) -> &Term<Var> {
        if self.forward {
            &self.constraint.lower
        } else {
            &self.constraint.upper
        }
    }

    pub fn to(&self) -> &Term<Var> {
        if self.forward {
            &self.constraint.upper
        } else {
            &self.constraint.lower
        }
    }

    pub fn delta(&self) -> i64 {
        let o = self.constraint.offset as i64;
        if self.forward {
            o
        } else {
            -o
        }
    }
}

/// A closed walk whose offsets sum to a nonzero value: replaying it yields
/// `type(t) = type(t) + d` with `d != 0`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct UnstratifiabilityWitness {
    pub cycle: Vec<CycleStep>,
}

impl UnstratifiabilityWitness {
    pub fn total_offset(&self) -> i64 {
        self.cycle.iter().map(CycleStep::delta).sum()
    }

    /// The walk is nonempty, consecutive, closed and has nonzero total.
    pub fn is_valid(&self) -> bool {
        let (Some(first), Some(last)) = (self.cycle.first(), self.cycle.last()) else {
            return false;
        };
        let chained = self.cycle.windows(2).all(|w| w[0].to() == w[1].from());
        chained && last.to() == first.from() && self.total_offset() != 0
    }
}

impl fmt::Display for UnstratifiabilityWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for step in &self.cycle {
            let sign = if step.delta() >= 0 { "+" } else { "" };
            writeln!(f, "{}  ({} -> {}: {sign}{})", step.constraint, step.from(), step.to(), step.delta())?;
        }
        write!(f, "total offset {}", self.total_offset())
    }
}

struct OffsetUnionFind {
    parent: Vec<usize>,
    // type(i) - type(parent(i))
    offset: Vec<i64>,
    size: Vec<usize>,
}

impl OffsetUnionFind {
    fn new(n: usize) -> Self {
        OffsetUnionFind {
            parent: (0..n).collect(),
            offset: vec![0; n],
            size: vec![1; n],
        }
    }

    /// Representative of `i` and `type(i) - type(rep)`.
    fn find(&mut self, i: usize) -> (usize, i64) {
        let p = self.parent[i];
        if p == i {
            return (i, 0);
        }
        let (root, to_root) = self.find(p);
        self.parent[i] = root;
        self.offset[i] += to_root;
        (root, self.offset[i])
    }

    /// Imposes `type(b) = type(a) + d`; false if it contradicts what is known.
    fn union(&mut self, a: usize, b: usize, d: i64) -> bool {
        let (ra, oa) = self.find(a);
        let (rb, ob) = self.find(b);
        if ra == rb {
            return ob == oa + d;
        }
        // type(rb) - type(ra) = oa + d - ob
        let shift = oa + d - ob;
        if self.size[ra] >= self.size[rb] {
            self.parent[rb] = ra;
            self.offset[rb] = shift;
            self.size[ra] += self.size[rb];
        } else {
            self.parent[ra] = rb;
            self.offset[ra] = -shift;
            self.size[rb] += self.size[ra];
        }
        true
    }
}

/// Solves a constraint set: the canonical stratification if one exists,
/// otherwise a cycle certifying that none does.
pub fn solve(cs: &ConstraintSet) -> Result<Stratification, UnstratifiabilityWitness> {
    let n = cs.nodes.len();
    let mut uf = OffsetUnionFind::new(n);
    // spanning forest of accepted constraints, for witness extraction
    let mut forest: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (ci, (&(a, b), c)) in cs.edges.iter().zip(&cs.constraints).enumerate() {
        let same_class = uf.find(a).0 == uf.find(b).0;
        if !uf.union(a, b, c.offset as i64) {
            return Err(witness(cs, &forest, ci));
        }
        if !same_class {
            forest[a].push((b, ci));
            forest[b].push((a, ci));
        }
    }
    let mut potential = vec![0i64; n];
    let mut low: HashMap<usize, i64> = HashMap::new();
    for (i, p) in potential.iter_mut().enumerate() {
        let (root, o) = uf.find(i);
        *p = o;
        let e = low.entry(root).or_insert(o);
        *e = (*e).min(o);
    }
    let assignment = cs
        .nodes
        .iter()
        .enumerate()
        .map(|(i, t)| {
            let root = uf.find(i).0;
            (t.clone(), (potential[i] - low[&root]) as usize)
        })
        .collect();
    Ok(Stratification { assignment })
}

fn witness(cs: &ConstraintSet, forest: &[Vec<(usize, usize)>], failing: usize) -> UnstratifiabilityWitness {
    let (a, b) = cs.edges[failing];
    // path a -> b through the forest
    let mut prev: Vec<Option<(usize, usize)>> = vec![None; cs.nodes.len()];
    let mut seen = vec![false; cs.nodes.len()];
    let mut queue = VecDeque::from([a]);
    seen[a] = true;
    while let Some(u) = queue.pop_front() {
        if u == b {
            break;
        }
        for &(w, ci) in &forest[u] {
            if !seen[w] {
                seen[w] = true;
                prev[w] = Some((u, ci));
                queue.push_back(w);
            }
        }
    }
    let mut path = Vec::new();
    let mut cur = b;
    while cur != a {
        let (u, ci) = prev[cur].expect("endpoints share a class");
        let (lower, _) = cs.edges[ci];
        path.push(CycleStep {
            constraint: cs.constraints[ci].clone(),
            forward: lower == u,
        });
        cur = u;
    }
    path.reverse();
    path.push(CycleStep {
        constraint: cs.constraints[failing].clone(),
        forward: false,
    });
    UnstratifiabilityWitness { cycle: path }
}

/// Alpha-separates, collects constraints and solves.
pub fn stratify(f: &Formula<Var>) -> Result<Stratification, UnstratifiabilityWitness> {
    solve(&collect_constraints(&f.alpha_separate()))
}

pub fn is_stratified(f: &Formula<Var>) -> bool {
    stratify(f).is_ok()
}

/// Re-checks the three stratification conditions atom by atom.
pub fn check_stratification(f: &Formula<Var>, s: &Stratification) -> bool {
    fn term_ok(t: &Term<Var>, s: &Stratification) -> bool {
        match t {
            Term::Var(_) => s.get(t).is_some(),
            Term::Pair(l, r) => {
                let k = s.get(t);
                k.is_some() && k == s.get(l) && k == s.get(r) && term_ok(l, s) && term_ok(r, s)
            }
        }
    }
    match f {
        Formula::Mem(a, b) => {
            term_ok(a, s) && term_ok(b, s) && s.get(b) == s.get(a).map(|k| k + 1)
        }
        Formula::Eq(a, b) => term_ok(a, s) && term_ok(b, s) && s.get(a) == s.get(b),
        Formula::Set(t) => term_ok(t, s),
        Formula::Not(g) => check_stratification(g, s),
        Formula::Binary(_, l, r) => check_stratification(l, s) && check_stratification(r, s),
        Formula::Quant(_, v, b) => s.var_type(v).is_some() && check_stratification(b, s),
    }
}
