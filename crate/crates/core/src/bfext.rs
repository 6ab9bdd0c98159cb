//! Finite well-founded extensional relations with an explicit carrier,
//! their segments, the T relabelling, and Mostowski collapse onto
//! hereditarily finite sets.
//!
//! An edge `(a, b)` reads "a is a predecessor of b" (a stands to b as a
//! member to a set). The carrier may contain isolated nodes; the one-node
//! graph with empty relation, topped at its node, represents the empty set.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::hf::HfSet;

#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub enum GraphError {
    #[error("edge endpoint {0} is not in the carrier")]
    UnknownEndpoint(String),
    #[error("top {0} is not in the carrier")]
    UnknownTop(String),
    #[error("node {0} is not in the carrier")]
    UnknownNode(String),
}

/// A finite relation on an explicit carrier, optionally topped.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BfextGraph<N> {
    nodes: Vec<N>,
    // predecessor lists, indexed like `nodes`, ascending
    preds: Vec<Vec<usize>>,
    top: Option<usize>,
}

impl<N: Clone + Ord + fmt::Display> BfextGraph<N> {
    pub fn new(
        nodes: impl IntoIterator<Item = N>,
        edges: impl IntoIterator<Item = (N, N)>,
        top: Option<N>,
    ) -> Result<Self, GraphError> {
        let nodes: Vec<N> = nodes.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        let index = |n: &N| nodes.binary_search(n).ok();
        let mut preds = vec![BTreeSet::new(); nodes.len()];
        for (a, b) in edges {
            let ia = index(&a).ok_or_else(|| GraphError::UnknownEndpoint(a.to_string()))?;
            let ib = index(&b).ok_or_else(|| GraphError::UnknownEndpoint(b.to_string()))?;
            preds[ib].insert(ia);
        }
        let top = match top {
            Some(t) => Some(index(&t).ok_or_else(|| GraphError::UnknownTop(t.to_string()))?),
            None => None,
        };
        let preds = preds.into_iter().map(|p| p.into_iter().collect()).collect();
        Ok(BfextGraph { nodes, preds, top })
    }

    /// Carrier in ascending order.
    pub fn nodes(&self) -> &[N] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn top(&self) -> Option<&N> {
        self.top.map(|i| &self.nodes[i])
    }

    /// Edges in ascending order of `(from, to)`.
    pub fn edges(&self) -> Vec<(N, N)> {
        let mut out: Vec<(N, N)> = self
            .preds
            .iter()
            .enumerate()
            .flat_map(|(b, ps)| ps.iter().map(move |&a| (a, b)))
            .map(|(a, b)| (self.nodes[a].clone(), self.nodes[b].clone()))
            .collect();
        out.sort();
        out
    }

    pub fn edge_count(&self) -> usize {
        self.preds.iter().map(Vec::len).sum()
    }

    fn index(&self, n: &N) -> Result<usize, GraphError> {
        self.nodes.binary_search(n).map_err(|_| GraphError::UnknownNode(n.to_string()))
    }

    pub fn predecessors(&self, n: &N) -> Result<Vec<&N>, GraphError> {
        Ok(self.preds[self.index(n)?].iter().map(|&i| &self.nodes[i]).collect())
    }

    pub fn has_edge(&self, a: &N, b: &N) -> bool {
        match (self.index(a), self.index(b)) {
            (Ok(a), Ok(b)) => self.preds[b].binary_search(&a).is_ok(),
            _ => false,
        }
    }

    // Smallest predecessor-closed index set containing `start`, ascending.
    fn down_closure(&self, start: usize) -> Vec<usize> {
        let mut seen = vec![false; self.len()];
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(i) = stack.pop() {
            for &p in &self.preds[i] {
                if !seen[p] {
                    seen[p] = true;
                    stack.push(p);
                }
            }
        }
        (0..self.len()).filter(|&i| seen[i]).collect()
    }

    fn restrict(&self, keep: &[usize], top: Option<usize>) -> Self {
        let mut new_index = vec![usize::MAX; self.len()];
        for (j, &i) in keep.iter().enumerate() {
            new_index[i] = j;
        }
        let preds = keep
            .iter()
            .map(|&i| self.preds[i].iter().filter(|&&p| new_index[p] != usize::MAX).map(|&p| new_index[p]).collect())
            .collect();
        BfextGraph {
            nodes: keep.iter().map(|&i| self.nodes[i].clone()).collect(),
            preds,
            top: top.map(|t| new_index[t]),
        }
    }

    /// The restriction to the downward closure of `a`, topped at `a`.
    pub fn seg(&self, a: &N) -> Result<Self, GraphError> {
        let i = self.index(a)?;
        Ok(self.restrict(&self.down_closure(i), Some(i)))
    }

    /// Same graph with a different top.
    pub fn with_top(&self, top: Option<&N>) -> Result<Self, GraphError> {
        let top = top.map(|t| self.index(t)).transpose()?;
        Ok(BfextGraph { top, ..self.clone() })
    }

    // Kahn order on predecessors; the nodes left over are exactly those that
    // are not well-founded.
    fn wellfounded_order(&self) -> (Vec<usize>, Vec<usize>) {
        let mut pending: Vec<usize> = self.preds.iter().map(Vec::len).collect();
        let mut succs = vec![Vec::new(); self.len()];
        for (b, ps) in self.preds.iter().enumerate() {
            for &a in ps {
                succs[a].push(b);
            }
        }
        let mut order: Vec<usize> = (0..self.len()).filter(|&i| pending[i] == 0).collect();
        let mut k = 0;
        while k < order.len() {
            for &b in &succs[order[k]] {
                pending[b] -= 1;
                if pending[b] == 0 {
                    order.push(b);
                }
            }
            k += 1;
        }
        let rest = (0..self.len()).filter(|&i| pending[i] > 0).collect();
        (order, rest)
    }

    /// Checks well-foundedness, extensionality and toppedness separately.
    pub fn check(&self) -> BfextReport<N> {
        let (_, rest) = self.wellfounded_order();
        let not_wellfounded = (!rest.is_empty()).then(|| rest.iter().map(|&i| self.nodes[i].clone()).collect());
        let mut by_preds: HashMap<&[usize], usize> = HashMap::new();
        let mut not_extensional = None;
        for (i, ps) in self.preds.iter().enumerate() {
            if let Some(&j) = by_preds.get(ps.as_slice()) {
                not_extensional = Some((self.nodes[j].clone(), self.nodes[i].clone()));
                break;
            }
            by_preds.insert(ps, i);
        }
        let top = match self.top {
            None => TopStatus::Untopped,
            Some(t) => {
                let closure = self.down_closure(t);
                if closure.len() == self.len() {
                    TopStatus::Topped
                } else {
                    let inside: BTreeSet<usize> = closure.into_iter().collect();
                    TopStatus::NotClosed {
                        outside: (0..self.len()).filter(|i| !inside.contains(i)).map(|i| self.nodes[i].clone()).collect(),
                    }
                }
            }
        };
        BfextReport { not_wellfounded, not_extensional, top }
    }

    /// Mostowski collapse of every node; requires well-foundedness only.
    pub fn collapse(&self) -> Result<BTreeMap<N, HfSet>, CanonError> {
        let (order, rest) = self.wellfounded_order();
        if !rest.is_empty() {
            return Err(CanonError::NotWellFounded);
        }
        let mut image: Vec<Option<HfSet>> = vec![None; self.len()];
        for i in order {
            let members = self.preds[i].iter().map(|&p| image[p].clone().expect("predecessor collapsed first"));
            image[i] = Some(HfSet::from_children(members));
        }
        Ok(self.nodes.iter().cloned().zip(image.into_iter().map(|s| s.expect("collapsed"))).collect())
    }

    /// The type of a certified topped graph: the collapse of its top.
    pub fn canonicalize(&self) -> Result<BfType, CanonError> {
        let report = self.check();
        let top = self.top.ok_or(CanonError::Untopped)?;
        if !report.is_ok() {
            return Err(CanonError::NotCertified(report.to_string()));
        }
        let images = self.collapse()?;
        Ok(BfType::new(images[&self.nodes[top]].clone()))
    }

    /// Relabels every node `x` as `ι(x)`.
    pub fn t_op(&self) -> BfextGraph<Iota<N>> {
        BfextGraph {
            nodes: self.nodes.iter().cloned().map(Iota).collect(),
            preds: self.preds.clone(),
            top: self.top,
        }
    }

    /// Renames nodes by a map that must be injective on the carrier.
    pub fn relabel<M: Clone + Ord + fmt::Display>(&self, f: impl Fn(&N) -> M) -> BfextGraph<M> {
        let edges = self.edges().into_iter().map(|(a, b)| (f(&a), f(&b))).collect::<Vec<_>>();
        let g = BfextGraph::new(self.nodes.iter().map(&f), edges, self.top().map(&f)).expect("endpoints are mapped");
        assert_eq!(g.len(), self.len(), "relabelling must be injective");
        g
    }
}

impl BfextGraph<HfSet> {
    /// The membership graph on the transitive closure of `s`, topped at `s`.
    pub fn of_set(s: &HfSet) -> Self {
        let nodes = s.transitive_closure();
        let edges: Vec<(HfSet, HfSet)> =
            nodes.iter().flat_map(|b| b.children().iter().map(move |a| (a.clone(), b.clone()))).collect();
        BfextGraph::new(nodes, edges, Some(s.clone())).expect("closure is transitive")
    }
}

/// Where the top stands.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum TopStatus<N> {
    Untopped,
    Topped,
    /// Nodes outside the downward closure of the top.
    NotClosed { outside: Vec<N> },
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BfextReport<N> {
    /// A nonempty node set without a minimal element.
    pub not_wellfounded: Option<Vec<N>>,
    /// Two distinct nodes with the same predecessors.
    pub not_extensional: Option<(N, N)>,
    pub top: TopStatus<N>,
}

impl<N> BfextReport<N> {
    pub fn is_ok(&self) -> bool {
        self.not_wellfounded.is_none()
            && self.not_extensional.is_none()
            && !matches!(self.top, TopStatus::NotClosed { .. })
    }
}

impl<N: fmt::Display> fmt::Display for BfextReport<N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[N]| v.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ");
        match &self.not_wellfounded {
            None => writeln!(f, "well-founded: yes")?,
            Some(b) => writeln!(f, "well-founded: no, no minimal element in {{{}}}", join(b))?,
        }
        match &self.not_extensional {
            None => writeln!(f, "extensional: yes")?,
            Some((a, b)) => writeln!(f, "extensional: no, {a} and {b} have the same predecessors")?,
        }
        match &self.top {
            TopStatus::Untopped => write!(f, "topped: no top"),
            TopStatus::Topped => write!(f, "topped: yes"),
            TopStatus::NotClosed { outside } => write!(f, "topped: no, outside the top's closure: {}", join(outside)),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub enum CanonError {
    #[error("graph has no top")]
    Untopped,
    #[error("graph is not well-founded")]
    NotWellFounded,
    #[error("graph is not a topped well-founded extensional relation:\n{0}")]
    NotCertified(String),
}

/// Node wrapper introduced by the T relabelling.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Iota<N>(pub N);

impl<N: fmt::Display> fmt::Display for Iota<N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ι({})", self.0)
    }
}

/// An isomorphism type of topped well-founded extensional relations,
/// represented by its collapse.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct BfType {
    canonical: HfSet,
}

impl BfType {
    pub fn new(canonical: HfSet) -> Self {
        BfType { canonical }
    }

    pub fn canonical(&self) -> &HfSet {
        &self.canonical
    }

    pub fn rank(&self) -> usize {
        self.canonical.rank()
    }

    /// A representative graph.
    pub fn representative(&self) -> BfextGraph<HfSet> {
        BfextGraph::of_set(&self.canonical)
    }
}

impl fmt::Display for BfType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.canonical.fmt(f)
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Error)]
#[error("line {line}: {message}")]
pub struct GraphParseError {
    pub line: usize,
    pub message: String,
}

/// Reads `node <id>`, `edge <id> <id>` and `top <id>` lines; blank lines and
/// `#` comments are skipped.
pub fn parse_graph(text: &str) -> Result<BfextGraph<String>, GraphParseError> {
    let mut nodes = Vec::new();
    let mut edges = Vec::new();
    let mut top = None;
    let mut last = 0;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        last = line;
        let err = |message: String| GraphParseError { line, message };
        let content = raw.split('#').next().unwrap_or("");
        let words: Vec<&str> = content.split_whitespace().collect();
        match words.as_slice() {
            [] => {}
            ["node", id] => nodes.push(id.to_string()),
            ["edge", a, b] => edges.push((a.to_string(), b.to_string())),
            ["top", id] => {
                if top.replace(id.to_string()).is_some() {
                    return Err(err("second `top` line".into()));
                }
            }
            _ => return Err(err(format!("expected `node <id>`, `edge <id> <id>` or `top <id>`, found `{}`", content.trim()))),
        }
    }
    BfextGraph::new(nodes, edges, top).map_err(|e| GraphParseError { line: last, message: e.to_string() })
}

impl<N: Clone + Ord + fmt::Display> fmt::Display for BfextGraph<N> {
    /// The line format read by [`parse_graph`].
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for n in &self.nodes {
            writeln!(f, "node {n}")?;
        }
        for (a, b) in self.edges() {
            writeln!(f, "edge {a} {b}")?;
        }
        if let Some(t) = self.top() {
            writeln!(f, "top {t}")?;
        }
        Ok(())
    }
}
