#![allow(dead_code)]

use proptest::prelude::*;
use steadykernel_core::{LabeledDigraph, RationalExpr};

pub fn s(name: &str) -> RationalExpr {
    RationalExpr::symbol(name)
}

/// Raw shape of a random network: a spanning tree (parent of each vertex
/// after the first, edge direction), extra edges, and partial-edge flags.
#[derive(Clone, Debug)]
pub struct Shape {
    pub n: usize,
    pub tree: Vec<(usize, bool)>,
    pub extra: Vec<(usize, usize)>,
    pub synthesis: Vec<bool>,
    pub degradation: Vec<bool>,
}

impl Shape {
    /// Weakly connected by construction; labels are `e{i}_{j}`, `s{v}` and
    /// `d{v}`.
    pub fn build(&self, partial: bool) -> LabeledDigraph {
        let mut g = LabeledDigraph::new();
        for v in 1..=self.n {
            g.add_vertex(&v.to_string());
        }
        let add = |g: &mut LabeledDigraph, i: usize, j: usize| {
            if i != j && g.label(i, j).is_none() {
                let label = s(&format!("e{}_{}", i + 1, j + 1));
                g.add_edge(&(i + 1).to_string(), &(j + 1).to_string(), label).unwrap();
            }
        };
        for (v, &(parent, down)) in self.tree.iter().enumerate() {
            let child = v + 1;
            let parent = parent % child;
            if down {
                add(&mut g, parent, child);
            } else {
                add(&mut g, child, parent);
            }
        }
        for &(i, j) in &self.extra {
            add(&mut g, i % self.n, j % self.n);
        }
        if partial {
            for v in 0..self.n {
                let name = (v + 1).to_string();
                if self.synthesis[v] {
                    g.add_synthesis(&name, s(&format!("s{}", v + 1))).unwrap();
                }
                if self.degradation[v] {
                    g.add_degradation(&name, s(&format!("d{}", v + 1))).unwrap();
                }
            }
        }
        g
    }
}

pub fn shape(max_vertices: usize, max_extra: usize) -> impl Strategy<Value = Shape> {
    (1..=max_vertices).prop_flat_map(move |n| {
        (
            proptest::collection::vec((0..n.max(1), any::<bool>()), n - 1),
            proptest::collection::vec((0..n, 0..n), 0..=max_extra),
            proptest::collection::vec(any::<bool>(), n),
            proptest::collection::vec(any::<bool>(), n),
        )
            .prop_map(move |(tree, extra, synthesis, degradation)| Shape {
                n,
                tree,
                extra,
                synthesis,
                degradation,
            })
    })
}

/// Digraph without partial edges.
pub fn digraph(max_vertices: usize, max_extra: usize) -> impl Strategy<Value = LabeledDigraph> {
    shape(max_vertices, max_extra).prop_map(|sh| sh.build(false))
}

/// Digraph with random synthesis and degradation.
pub fn network(max_vertices: usize, max_extra: usize) -> impl Strategy<Value = LabeledDigraph> {
    shape(max_vertices, max_extra).prop_map(|sh| sh.build(true))
}
