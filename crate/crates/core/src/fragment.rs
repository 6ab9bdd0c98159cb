//! Finite fragments of the structure of relation types under ℰ: all types
//! of rank at most `k`, built by closing under "union of representatives
//! plus a fresh top" rather than by reading off set codes.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::bfext::{BfType, BfextGraph};
use crate::hf::{check_rank, HfSet, RankCapExceeded};

/// Nodes of a glued graph: representative nodes, named by their collapse,
/// and one fresh top.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
enum Glued {
    Node(HfSet),
    Fresh,
}

impl fmt::Display for Glued {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Glued::Node(s) => s.fmt(f),
            Glued::Fresh => f.write_str("*"),
        }
    }
}

/// Union of the members' representatives with an edge from each member's
/// top to a fresh node; returns the fresh node's type.
fn glue<'a>(members: impl IntoIterator<Item = &'a BfType>) -> BfType {
    let mut nodes = BTreeSet::from([Glued::Fresh]);
    let mut edges = BTreeSet::new();
    for m in members {
        let rep = m.representative();
        nodes.extend(rep.nodes().iter().cloned().map(Glued::Node));
        edges.extend(rep.edges().into_iter().map(|(a, b)| (Glued::Node(a), Glued::Node(b))));
        edges.insert((Glued::Node(m.canonical().clone()), Glued::Fresh));
    }
    BfextGraph::new(nodes, edges, Some(Glued::Fresh))
        .expect("glued endpoints are declared")
        .canonicalize()
        .expect("a fresh top over certified segments is certified")
}

/// All types of rank at most `max_rank` with ℰ restricted to them.
#[derive(Clone, Debug)]
pub struct BfFragment {
    max_rank: usize,
    elements: Vec<BfType>,
    // ℰ-predecessors of each element, as ascending indices
    preds: Vec<Vec<usize>>,
}

#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub enum WitnessError {
    #[error("{0} is not an element of the fragment")]
    NotInFragment(String),
    #[error("{element} lies above layer {layer}")]
    AboveLayer { element: String, layer: usize },
    #[error("layer {0} + 1 exceeds the fragment's maximum rank {1}")]
    NoRoom(usize, usize),
}

pub fn build_fragment(max_rank: usize, cap: usize) -> Result<BfFragment, RankCapExceeded> {
    check_rank(max_rank, cap)?;
    let mut elements = vec![glue([])];
    for _ in 0..max_rank {
        let n = elements.len();
        let mut next: Vec<BfType> = (0u64..1 << n)
            .map(|bits| glue((0..n).filter(|i| bits >> i & 1 == 1).map(|i| &elements[i])))
            .collect();
        next.sort();
        next.dedup();
        elements = next;
    }
    let preds = elements
        .iter()
        .map(|a| {
            a.canonical()
                .children()
                .iter()
                .map(|c| elements.binary_search(&BfType::new(c.clone())).expect("fragment is transitive"))
                .collect()
        })
        .collect();
    Ok(BfFragment { max_rank, elements, preds })
}

impl BfFragment {
    pub fn max_rank(&self) -> usize {
        self.max_rank
    }

    /// Elements in ascending order.
    pub fn elements(&self) -> &[BfType] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn index_of(&self, t: &BfType) -> Option<usize> {
        self.elements.binary_search(t).ok()
    }

    pub fn contains(&self, t: &BfType) -> bool {
        self.index_of(t).is_some()
    }

    /// ℰ-predecessors of `t` inside the fragment.
    pub fn extension(&self, t: &BfType) -> Option<Vec<&BfType>> {
        let i = self.index_of(t)?;
        Some(self.preds[i].iter().map(|&p| &self.elements[p]).collect())
    }

    /// ℰ as ordered pairs (predecessor, element).
    pub fn e_edges(&self) -> Vec<(&BfType, &BfType)> {
        self.preds
            .iter()
            .enumerate()
            .flat_map(|(a, ps)| ps.iter().map(move |&b| (b, a)))
            .map(|(b, a)| (&self.elements[b], &self.elements[a]))
            .collect()
    }

    pub fn has_e_edge(&self, b: &BfType, a: &BfType) -> bool {
        match (self.index_of(b), self.index_of(a)) {
            (Some(b), Some(a)) => self.preds[a].binary_search(&b).is_ok(),
            _ => false,
        }
    }

    /// The fragment as a graph on its elements with relation ℰ, untopped.
    pub fn as_graph(&self) -> BfextGraph<BfType> {
        let edges: Vec<(BfType, BfType)> = self.e_edges().into_iter().map(|(b, a)| (b.clone(), a.clone())).collect();
        BfextGraph::new(self.elements.iter().cloned(), edges, None).expect("edges stay inside the fragment")
    }

    /// Distinct elements have distinct ℰ-predecessor sets.
    pub fn is_extensional(&self) -> bool {
        let distinct: BTreeSet<&Vec<usize>> = self.preds.iter().collect();
        distinct.len() == self.preds.len()
    }

    /// Layer of each element: 0 for ℰ-minimal ones, otherwise one more than
    /// the largest layer among its predecessors; `None` for elements no
    /// finite stage reaches.
    fn layers(&self) -> Vec<Option<usize>> {
        let mut layer: Vec<Option<usize>> = vec![None; self.len()];
        let mut changed = true;
        while changed {
            changed = false;
            for i in 0..self.len() {
                if layer[i].is_some() {
                    continue;
                }
                let ps: Option<Vec<usize>> = self.preds[i].iter().map(|&p| layer[p]).collect();
                if let Some(ps) = ps {
                    layer[i] = Some(ps.into_iter().map(|l| l + 1).max().unwrap_or(0));
                    changed = true;
                }
            }
        }
        layer
    }

    pub fn layer_of(&self, t: &BfType) -> Option<usize> {
        self.layers()[self.index_of(t)?]
    }
}

/// Cumulative layers: entry `k` holds every element all of whose
/// ℰ-predecessors lie in entry `k - 1` (entry 0: the ℰ-minimal elements).
pub fn rank_partition(f: &BfFragment) -> BTreeMap<usize, Vec<BfType>> {
    let layers = f.layers();
    let Some(top) = layers.iter().flatten().copied().max() else { return BTreeMap::new() };
    (0..=top)
        .map(|k| {
            let members = f.elements.iter().zip(&layers).filter(|(_, l)| matches!(l, Some(l) if *l <= k));
            (k, members.map(|(t, _)| t.clone()).collect())
        })
        .collect()
}

/// Whether the partition reaches every element.
pub fn is_well_founded(f: &BfFragment) -> bool {
    f.layers().iter().all(Option::is_some)
}

/// Per-element outcome of comparing `canonicalize(seg_ℰ(a))` with `a`.
#[derive(Clone, Debug)]
pub struct SegLemmaReport {
    pub results: Vec<(BfType, Result<BfType, String>)>,
}

impl SegLemmaReport {
    pub fn total(&self) -> usize {
        self.results.len()
    }

    pub fn passed(&self) -> usize {
        self.results.iter().filter(|(a, r)| r.as_ref() == Ok(a)).count()
    }

    pub fn failures(&self) -> Vec<&(BfType, Result<BfType, String>)> {
        self.results.iter().filter(|(a, r)| r.as_ref() != Ok(a)).collect()
    }

    pub fn all_pass(&self) -> bool {
        self.passed() == self.total()
    }
}

impl fmt::Display for SegLemmaReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "seg-lemma: {}/{} pass", self.passed(), self.total())?;
        for (a, r) in self.failures() {
            match r {
                Ok(got) => write!(f, "\n  {a}: segment collapses to {got}")?,
                Err(e) => write!(f, "\n  {a}: {e}")?,
            }
        }
        Ok(())
    }
}

/// For every element `a`: the ℰ-segment of `a` inside the fragment, topped
/// at `a`, collapses back to `a`.
pub fn verify_seg_lemma(f: &BfFragment) -> SegLemmaReport {
    let graph = f.as_graph();
    let results = f
        .elements
        .iter()
        .map(|a| {
            let r = graph.seg(a).map_err(|e| e.to_string()).and_then(|s| s.canonicalize().map_err(|e| e.to_string()));
            (a.clone(), r)
        })
        .collect();
    SegLemmaReport { results }
}

/// The type whose ℰ-extension is exactly `members`, built by gluing the
/// members' segments under a fresh top. Members must lie in layer `<= k`
/// and `k + 1` must not exceed the fragment's rank.
pub fn comprehension_witness(f: &BfFragment, k: usize, members: &[BfType]) -> Result<BfType, WitnessError> {
    if k + 1 > f.max_rank {
        return Err(WitnessError::NoRoom(k, f.max_rank));
    }
    let layers = f.layers();
    for m in members {
        let i = f.index_of(m).ok_or_else(|| WitnessError::NotInFragment(m.to_string()))?;
        if !matches!(layers[i], Some(l) if l <= k) {
            return Err(WitnessError::AboveLayer { element: m.to_string(), layer: k });
        }
    }
    Ok(glue(members))
}

/// One line per element: canonical rendering, layer, ℰ-predecessors.
pub fn export(f: &BfFragment) -> Vec<(String, usize, Vec<String>)> {
    let layers = f.layers();
    f.elements
        .iter()
        .zip(&layers)
        .zip(&f.preds)
        .map(|((t, l), ps)| {
            let preds = ps.iter().map(|&p| f.elements[p].to_string()).collect();
            (t.to_string(), l.expect("finite fragments are well-founded"), preds)
        })
        .collect()
}

/// The seg-based reading of `b ℰ a`: some immediate predecessor of the top
/// of `a`'s representative has a segment of type `b`.
pub fn e_edge_by_segments(b: &BfType, a: &BfType) -> bool {
    let rep = a.representative();
    let top = rep.top().expect("representatives are topped").clone();
    rep.predecessors(&top)
        .expect("top is a node")
        .into_iter()
        .any(|x| rep.seg(x).ok().and_then(|s| s.canonicalize().ok()).as_ref() == Some(b))
}
