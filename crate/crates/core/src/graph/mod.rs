//! Labeled digraphs with synthesis and degradation partial edges.

mod complementary;
mod scc;

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

pub use complementary::{complementary, ComplementaryDigraph, STAR};
pub use scc::{canonical_relabel, scc_decompose, SccDecomposition};

use crate::error::{Error, Result};
use crate::symexpr::RationalExpr;

/// Vertices, labeled core edges and the synthesis (`* -> v`) and degradation
/// (`v -> *`) partial edges.
///
/// Vertex identity is the name; indices follow insertion order. Parallel core
/// edges are merged by summing labels, and stored labels are never
/// structurally zero.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct LabeledDigraph {
    vertices: Vec<String>,
    index: BTreeMap<String, usize>,
    edges: BTreeMap<(usize, usize), RationalExpr>,
    synthesis: BTreeMap<usize, RationalExpr>,
    degradation: BTreeMap<usize, RationalExpr>,
}

impl LabeledDigraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns the index of `name`, adding the vertex if it is new.
    pub fn add_vertex(&mut self, name: &str) -> usize {
        if let Some(&i) = self.index.get(name) {
            return i;
        }
        let i = self.vertices.len();
        self.vertices.push(name.to_string());
        self.index.insert(name.to_string(), i);
        i
    }

    /// Adds `label` to the core edge `from -> to`, creating vertices as needed.
    pub fn add_edge(&mut self, from: &str, to: &str, label: RationalExpr) -> Result<()> {
        if from == to {
            return Err(Error::SelfLoop(from.to_string()));
        }
        let (i, j) = (self.add_vertex(from), self.add_vertex(to));
        let merged = match self.edges.remove(&(i, j)) {
            Some(old) => &old + &label,
            None => label,
        };
        if merged.is_zero() {
            return Err(Error::ZeroLabel(alloc::format!("edge {from} -> {to}")));
        }
        self.edges.insert((i, j), merged);
        Ok(())
    }

    pub fn add_synthesis(&mut self, vertex: &str, label: RationalExpr) -> Result<()> {
        let i = self.add_vertex(vertex);
        add_partial(&mut self.synthesis, i, label, || {
            alloc::format!("synthesis * -> {vertex}")
        })
    }

    pub fn add_degradation(&mut self, vertex: &str, label: RationalExpr) -> Result<()> {
        let i = self.add_vertex(vertex);
        add_partial(&mut self.degradation, i, label, || {
            alloc::format!("degradation {vertex} -> *")
        })
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertices
    }

    pub fn name(&self, i: usize) -> &str {
        &self.vertices[i]
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownVertex(name.to_string()))
    }

    /// Core edges as `((from, to), label)` in lexicographic index order.
    pub fn edges(&self) -> impl Iterator<Item = ((usize, usize), &RationalExpr)> {
        self.edges.iter().map(|(k, v)| (*k, v))
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn label(&self, from: usize, to: usize) -> Option<&RationalExpr> {
        self.edges.get(&(from, to))
    }

    pub fn synthesis(&self, i: usize) -> Option<&RationalExpr> {
        self.synthesis.get(&i)
    }

    pub fn degradation(&self, i: usize) -> Option<&RationalExpr> {
        self.degradation.get(&i)
    }

    pub fn synthesis_edges(&self) -> impl Iterator<Item = (usize, &RationalExpr)> {
        self.synthesis.iter().map(|(k, v)| (*k, v))
    }

    pub fn degradation_edges(&self) -> impl Iterator<Item = (usize, &RationalExpr)> {
        self.degradation.iter().map(|(k, v)| (*k, v))
    }

    pub fn has_partial_edges(&self) -> bool {
        !self.synthesis.is_empty() || !self.degradation.is_empty()
    }

    /// Out-neighbours of every vertex, ascending.
    pub fn successors(&self) -> Vec<Vec<usize>> {
        let mut adj = alloc::vec![Vec::new(); self.len()];
        for &(i, j) in self.edges.keys() {
            adj[i].push(j);
        }
        adj
    }

    pub fn predecessors(&self) -> Vec<Vec<usize>> {
        let mut adj = alloc::vec![Vec::new(); self.len()];
        for &(i, j) in self.edges.keys() {
            adj[j].push(i);
        }
        adj
    }

    /// Vertices reachable from `start` along core edges, `start` included.
    pub fn reachable_from(&self, start: usize) -> Vec<bool> {
        flood(&self.successors(), start)
    }

    /// Vertices that can reach `target` along core edges, `target` included.
    pub fn reaching(&self, target: usize) -> Vec<bool> {
        flood(&self.predecessors(), target)
    }

    /// `from ⟹ to`: a directed path exists (every vertex reaches itself).
    pub fn reaches(&self, from: &str, to: &str) -> Result<bool> {
        let (i, j) = (self.index_of(from)?, self.index_of(to)?);
        Ok(self.reachable_from(i)[j])
    }

    pub fn is_strongly_connected(&self) -> bool {
        if self.is_empty() {
            return true;
        }
        self.reachable_from(0).iter().all(|&r| r) && self.reaching(0).iter().all(|&r| r)
    }

    pub fn is_weakly_connected(&self) -> bool {
        if self.is_empty() {
            return true;
        }
        let mut adj = self.successors();
        for (j, preds) in self.predecessors().into_iter().enumerate() {
            adj[j].extend(preds);
        }
        flood(&adj, 0).iter().all(|&r| r)
    }

    /// Subgraph induced on `keep` (core edges only), vertices in the given
    /// order.
    pub fn induced(&self, keep: &[usize]) -> LabeledDigraph {
        let mut g = LabeledDigraph::new();
        for &v in keep {
            g.add_vertex(&self.vertices[v]);
        }
        let pos: BTreeMap<usize, usize> = keep.iter().enumerate().map(|(k, &v)| (v, k)).collect();
        for (&(i, j), label) in &self.edges {
            if let (Some(&a), Some(&b)) = (pos.get(&i), pos.get(&j)) {
                g.edges.insert((a, b), label.clone());
            }
        }
        g
    }

    /// The same network with vertex `v` moved to index `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> LabeledDigraph {
        assert_eq!(perm.len(), self.len(), "permutation length");
        let mut names = alloc::vec![String::new(); self.len()];
        for (v, &p) in perm.iter().enumerate() {
            names[p] = self.vertices[v].clone();
        }
        let remap = |m: &BTreeMap<usize, RationalExpr>| -> BTreeMap<usize, RationalExpr> {
            m.iter().map(|(&v, l)| (perm[v], l.clone())).collect()
        };
        LabeledDigraph {
            index: names.iter().enumerate().map(|(i, n)| (n.clone(), i)).collect(),
            vertices: names,
            edges: self
                .edges
                .iter()
                .map(|(&(i, j), l)| ((perm[i], perm[j]), l.clone()))
                .collect(),
            synthesis: remap(&self.synthesis),
            degradation: remap(&self.degradation),
        }
    }

    /// The same digraph with synthesis removed at the given vertices.
    pub fn without_synthesis(&self, vertices: &[usize]) -> LabeledDigraph {
        let mut g = self.clone();
        for v in vertices {
            g.synthesis.remove(v);
        }
        g
    }

    /// Drops the partial edges, keeping vertices and core edges.
    pub fn core(&self) -> LabeledDigraph {
        LabeledDigraph {
            vertices: self.vertices.clone(),
            index: self.index.clone(),
            edges: self.edges.clone(),
            synthesis: BTreeMap::new(),
            degradation: BTreeMap::new(),
        }
    }
}

fn add_partial<F: FnOnce() -> String>(
    map: &mut BTreeMap<usize, RationalExpr>,
    i: usize,
    label: RationalExpr,
    what: F,
) -> Result<()> {
    let merged = match map.remove(&i) {
        Some(old) => &old + &label,
        None => label,
    };
    if merged.is_zero() {
        return Err(Error::ZeroLabel(what()));
    }
    map.insert(i, merged);
    Ok(())
}

fn flood(adj: &[Vec<usize>], start: usize) -> Vec<bool> {
    let mut seen = alloc::vec![false; adj.len()];
    let mut stack = alloc::vec![start];
    seen[start] = true;
    while let Some(v) = stack.pop() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    seen
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    pub fn s(n: &str) -> RationalExpr {
        RationalExpr::symbol(n)
    }

    /// Three-vertex example: 1->2 a, 2->3 b, 3->1 c, 3->2 d.
    pub fn three_cycle() -> LabeledDigraph {
        let mut g = LabeledDigraph::new();
        g.add_edge("1", "2", s("a")).unwrap();
        g.add_edge("2", "3", s("b")).unwrap();
        g.add_edge("3", "1", s("c")).unwrap();
        g.add_edge("3", "2", s("d")).unwrap();
        g
    }

    /// Five-vertex worked example with synthesis g, k, l and degradation h, i.
    pub fn two_sinks(with_g: bool, with_l: bool) -> LabeledDigraph {
        let mut g = LabeledDigraph::new();
        for v in ["1", "2", "3", "4", "5"] {
            g.add_vertex(v);
        }
        g.add_edge("1", "2", s("a")).unwrap();
        g.add_edge("2", "1", s("b")).unwrap();
        g.add_edge("1", "3", s("c")).unwrap();
        g.add_edge("1", "4", s("d")).unwrap();
        g.add_edge("2", "4", s("e")).unwrap();
        g.add_edge("2", "5", s("f")).unwrap();
        g.add_degradation("2", s("h")).unwrap();
        g.add_degradation("3", s("i")).unwrap();
        g.add_synthesis("3", s("k")).unwrap();
        if with_g {
            g.add_synthesis("1", s("g")).unwrap();
        }
        if with_l {
            g.add_synthesis("5", s("l")).unwrap();
        }
        g
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    #[test]
    fn parallel_edges_merge_by_sum() {
        let mut g = LabeledDigraph::new();
        g.add_edge("1", "2", s("a")).unwrap();
        g.add_edge("1", "2", s("b")).unwrap();
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.label(0, 1).unwrap(), &(s("a") + s("b")));
    }

    #[test]
    fn self_loop_rejected() {
        let mut g = LabeledDigraph::new();
        assert_eq!(g.add_edge("1", "1", s("a")), Err(Error::SelfLoop("1".into())));
    }

    #[test]
    fn zero_label_rejected() {
        let mut g = LabeledDigraph::new();
        assert!(matches!(
            g.add_edge("1", "2", RationalExpr::zero()),
            Err(Error::ZeroLabel(_))
        ));
    }

    #[test]
    fn reachability() {
        let g = three_cycle();
        assert!(g.is_strongly_connected());
        let h = two_sinks(true, true);
        assert!(!h.is_strongly_connected());
        assert!(h.reaches("1", "5").unwrap());
        assert!(!h.reaches("4", "1").unwrap());
        assert_eq!(h.reaches("1", "9"), Err(Error::UnknownVertex("9".into())));
        assert!(h.is_weakly_connected());
    }

    #[test]
    fn permutation_round_trip() {
        let g = two_sinks(true, false);
        let perm = [4, 3, 2, 1, 0];
        let p = g.permuted(&perm);
        assert_eq!(p.name(0), "5");
        assert_eq!(p.label(4, 3), Some(&s("a")));
        assert_eq!(p.synthesis(4), Some(&s("g")));
        assert_eq!(p.permuted(&perm), g);
    }
}
