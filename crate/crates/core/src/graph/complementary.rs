use super::LabeledDigraph;
use crate::error::{Error, Result};

/// Name of the appended vertex.
pub const STAR: &str = "*";

/// The base network with an extra vertex `*` that carries every synthesis
/// edge as `* -> i` and every degradation edge as `i -> *`.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplementaryDigraph {
    graph: LabeledDigraph,
    star: usize,
}

impl ComplementaryDigraph {
    /// Ordinary digraph on `n + 1` vertices without partial edges.
    pub fn graph(&self) -> &LabeledDigraph {
        &self.graph
    }

    /// Index of `*`, always the last vertex.
    pub fn star(&self) -> usize {
        self.star
    }

    pub fn is_strongly_connected(&self) -> bool {
        self.graph.is_strongly_connected()
    }
}

pub fn complementary(g: &LabeledDigraph) -> Result<ComplementaryDigraph> {
    if !g.has_partial_edges() {
        return Err(Error::NoPartialEdges);
    }
    let mut h = g.core();
    let star = h.add_vertex(STAR);
    debug_assert_eq!(star, g.len(), "`*` must not be a vertex of the base network");
    for (i, label) in g.synthesis_edges() {
        h.add_edge(STAR, g.name(i), label.clone())?;
    }
    for (i, label) in g.degradation_edges() {
        h.add_edge(g.name(i), STAR, label.clone())?;
    }
    Ok(ComplementaryDigraph { graph: h, star })
}
