//! Rooted directed spanning trees and the Matrix-Tree Theorem.
//!
//! A spanning tree rooted at `r` gives every other vertex exactly one
//! outgoing edge such that all paths end at `r`. Enumeration is a
//! backtracking search over per-vertex edge choices: vertices are assigned in
//! index order, candidate edges in target order, and a choice is rejected as
//! soon as following the already chosen edges from its target returns to the
//! vertex being assigned. A reachability pre-filter returns no trees at once
//! when some vertex cannot reach the root. Cost is `O(#trees * n)` plus the
//! pruned dead ends; trees come out in lexicographic order of their edges.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::graph::{LabeledDigraph, SccDecomposition};
use crate::matrix::SymMatrix;
use crate::symexpr::RationalExpr;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpanningTree {
    pub root: usize,
    /// One `(from, to)` edge per non-root vertex, ascending by `from`.
    pub edges: Vec<(usize, usize)>,
}

impl SpanningTree {
    /// Product of the edge labels.
    pub fn weight(&self, g: &LabeledDigraph) -> RationalExpr {
        self.edges.iter().fold(RationalExpr::one(), |acc, &(i, j)| {
            &acc * g.label(i, j).expect("tree edge exists")
        })
    }

    /// Checks the rooted-tree conditions against `g`.
    pub fn is_valid(&self, g: &LabeledDigraph) -> bool {
        let n = g.len();
        if self.root >= n || self.edges.len() + 1 != n {
            return false;
        }
        let mut next = alloc::vec![None; n];
        for &(i, j) in &self.edges {
            if i == self.root || next[i].is_some() || g.label(i, j).is_none() {
                return false;
            }
            next[i] = Some(j);
        }
        (0..n).all(|start| {
            let mut v = start;
            for _ in 0..n {
                if v == self.root {
                    return true;
                }
                match next[v] {
                    Some(w) => v = w,
                    None => return false,
                }
            }
            v == self.root
        })
    }
}

struct Search<'a> {
    succ: &'a [Vec<usize>],
    root: usize,
    order: Vec<usize>,
    choice: Vec<Option<usize>>,
}

impl Search<'_> {
    fn closes_cycle(&self, v: usize, w: usize) -> bool {
        let mut x = w;
        loop {
            if x == v {
                return true;
            }
            if x == self.root {
                return false;
            }
            match self.choice[x] {
                Some(y) => x = y,
                None => return false,
            }
        }
    }

    fn run<S, E, V>(&mut self, depth: usize, state: &S, extend: &E, visit: &mut V)
    where
        E: Fn(&S, usize, usize) -> S,
        V: FnMut(&S, &[Option<usize>]),
    {
        if depth == self.order.len() {
            visit(state, &self.choice);
            return;
        }
        let v = self.order[depth];
        for k in 0..self.succ[v].len() {
            let w = self.succ[v][k];
            if self.closes_cycle(v, w) {
                continue;
            }
            self.choice[v] = Some(w);
            let next = extend(state, v, w);
            self.run(depth + 1, &next, extend, visit);
            self.choice[v] = None;
        }
    }
}

/// Folds a state along each spanning tree rooted at `root`: `extend` is
/// applied once per chosen edge, shared prefixes are extended only once, and
/// `visit` sees the final state of every tree.
fn walk_trees<S, E, V>(g: &LabeledDigraph, root: usize, seed: S, extend: E, mut visit: V)
where
    E: Fn(&S, usize, usize) -> S,
    V: FnMut(&S, &[Option<usize>]),
{
    if !g.reaching(root).iter().all(|&r| r) {
        return;
    }
    let succ = g.successors();
    let mut search = Search {
        succ: &succ,
        root,
        order: (0..g.len()).filter(|&v| v != root).collect(),
        choice: alloc::vec![None; g.len()],
    };
    search.run(0, &seed, &extend, &mut visit);
}

/// All spanning trees rooted at `root`, duplicate-free, in lexicographic edge
/// order. Empty when some vertex cannot reach `root`.
pub fn enumerate_rooted(g: &LabeledDigraph, root: usize) -> Result<Vec<SpanningTree>> {
    check_vertex(g, root)?;
    let mut out = Vec::new();
    walk_trees(
        g,
        root,
        (),
        |_, _, _| (),
        |_, choice| {
            out.push(SpanningTree {
                root,
                edges: choice
                    .iter()
                    .enumerate()
                    .filter_map(|(i, c)| c.map(|j| (i, j)))
                    .collect(),
            });
        },
    );
    Ok(out)
}

pub fn count_rooted(g: &LabeledDigraph, root: usize) -> Result<usize> {
    check_vertex(g, root)?;
    let mut count = 0;
    walk_trees(g, root, (), |_, _, _| (), |_, _| count += 1);
    Ok(count)
}

fn check_vertex(g: &LabeledDigraph, v: usize) -> Result<()> {
    if v >= g.len() {
        return Err(Error::UnknownVertex(alloc::format!("#{v}")));
    }
    Ok(())
}

/// `rho_root`: sum over spanning trees rooted at `root` of the product of
/// their edge labels.
pub fn rho_entry(g: &LabeledDigraph, root: usize) -> Result<RationalExpr> {
    check_vertex(g, root)?;
    let mut acc = RationalExpr::zero();
    walk_trees(
        g,
        root,
        RationalExpr::one(),
        |partial, i, j| partial * g.label(i, j).expect("search follows edges"),
        |product, _| acc = &acc + product,
    );
    Ok(acc)
}

/// The vector `(rho_1, ..., rho_n)`; spans the Laplacian kernel when `g` is
/// strongly connected.
pub fn rho(g: &LabeledDigraph) -> Vec<RationalExpr> {
    (0..g.len()).map(|i| rho_entry(g, i).expect("index in range")).collect()
}

/// Scales `v` so its entries sum to one.
pub fn normalize(v: &[RationalExpr]) -> Result<Vec<RationalExpr>> {
    let total: RationalExpr = v.iter().sum();
    let inv = total.recip()?;
    Ok(v.iter().map(|x| x * &inv).collect())
}

/// Signed minor of the Laplacian (delete row `i`, column `j`, zero-based)
/// from spanning trees rooted at `j`: `(-1)^(n+i+j-1) rho_j` in one-based
/// indices.
pub fn minor_mtt(g: &LabeledDigraph, i: usize, j: usize) -> Result<RationalExpr> {
    let n = g.len();
    if i >= n || j >= n {
        return Err(Error::IndexOutOfRange {
            row: i,
            col: j,
            rows: n,
            cols: n,
        });
    }
    let r = rho_entry(g, j)?;
    // One-based exponent n + (i+1) + (j+1) - 1 has the parity of n + i + j + 1.
    Ok(if (n + i + j + 1).is_multiple_of(2) { r } else { -r })
}

/// Determinant of the `(i, j)` deletion of `m` by fraction-free elimination.
pub fn minor_cofactor(m: &SymMatrix, i: usize, j: usize) -> Result<RationalExpr> {
    m.minor(i, j)
}

/// Kernel basis of the Laplacian: one column per terminal component of `d`,
/// holding that component's own rho entries on its vertices and zeros
/// elsewhere.
pub fn kernel_basis(g: &LabeledDigraph, d: &SccDecomposition) -> Vec<Vec<RationalExpr>> {
    d.terminal_components()
        .map(|(_, verts)| extended_rho(g, verts))
        .collect()
}

/// Rho vector of the subgraph induced on `verts`, extended by zeros to all of
/// `g`'s vertices.
pub fn extended_rho(g: &LabeledDigraph, verts: &[usize]) -> Vec<RationalExpr> {
    let sub = g.induced(verts);
    let local = rho(&sub);
    let mut col = alloc::vec![RationalExpr::zero(); g.len()];
    for (k, &v) in verts.iter().enumerate() {
        col[v] = local[k].clone();
    }
    col
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;
    use crate::graph::scc_decompose;
    use crate::laplacian::laplacian_matrix;

    fn labels(g: &LabeledDigraph, t: &SpanningTree) -> Vec<RationalExpr> {
        t.edges.iter().map(|&(i, j)| g.label(i, j).unwrap().clone()).collect()
    }

    #[test]
    fn three_cycle_trees() {
        let g = three_cycle();
        let t1 = enumerate_rooted(&g, 0).unwrap();
        assert_eq!(t1.len(), 1);
        assert_eq!(labels(&g, &t1[0]), [s("b"), s("c")]);
        let t2 = enumerate_rooted(&g, 1).unwrap();
        assert_eq!(t2.len(), 2);
        assert_eq!(labels(&g, &t2[0]), [s("a"), s("c")]);
        assert_eq!(labels(&g, &t2[1]), [s("a"), s("d")]);
        assert!(t1.iter().chain(&t2).all(|t| t.is_valid(&g)));
    }

    #[test]
    fn three_cycle_rho_and_minors() {
        let g = three_cycle();
        assert_eq!(
            rho(&g),
            [s("b") * s("c"), s("a") * s("d") + s("a") * s("c"), s("a") * s("b")]
        );
        assert_eq!(minor_mtt(&g, 1, 2).unwrap(), -(s("a") * s("b")));
        assert_eq!(minor_mtt(&g, 2, 1).unwrap(), -(s("a") * s("d")) - s("a") * s("c"));
        let l = laplacian_matrix(&g);
        assert_eq!(minor_cofactor(&l, 1, 2).unwrap(), -(s("a") * s("b")));
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(minor_mtt(&g, i, j).unwrap(), minor_cofactor(&l, i, j).unwrap());
            }
        }
        assert!(minor_mtt(&g, 3, 0).is_err());
    }

    #[test]
    fn two_cycle() {
        let mut g = LabeledDigraph::new();
        g.add_edge("1", "2", s("a")).unwrap();
        g.add_edge("2", "1", s("b")).unwrap();
        assert_eq!(rho(&g), [s("b"), s("a")]);
    }

    #[test]
    fn complete_digraph_three_trees_per_root() {
        let mut g = LabeledDigraph::new();
        for i in 1..=3 {
            for j in 1..=3 {
                if i != j {
                    let name = alloc::format!("e{i}{j}");
                    g.add_edge(&i.to_string(), &j.to_string(), s(&name)).unwrap();
                }
            }
        }
        for (root, r) in rho(&g).iter().enumerate() {
            assert_eq!(r.numerator().len(), 3);
            assert_eq!(count_rooted(&g, root).unwrap(), 3);
        }
    }

    #[test]
    fn unreachable_root_has_no_trees() {
        let g = two_sinks(false, false);
        // vertex 1 cannot be reached from the sink 4
        assert!(enumerate_rooted(&g, 0).unwrap().is_empty());
        assert!(rho_entry(&g, 0).unwrap().is_zero());
        assert!(enumerate_rooted(&g, 7).is_err());
    }

    #[test]
    fn kernel_of_strongly_connected() {
        let g = three_cycle();
        let d = scc_decompose(&g);
        let basis = kernel_basis(&g, &d);
        assert_eq!(basis, alloc::vec![rho(&g)]);
        let l = laplacian_matrix(&g);
        assert!(l.mul_vec(&basis[0]).unwrap().iter().all(RationalExpr::is_zero));
    }

    #[test]
    fn kernel_of_worked_example_core() {
        let g = two_sinks(true, true);
        let d = scc_decompose(&g);
        let basis = kernel_basis(&g, &d);
        assert_eq!(basis.len(), 3);
        for (col, v) in basis.iter().zip([2, 3, 4]) {
            for (i, e) in col.iter().enumerate() {
                assert_eq!(e.is_zero(), i != v);
            }
            assert_eq!(col[v], RationalExpr::one());
        }
    }
}
