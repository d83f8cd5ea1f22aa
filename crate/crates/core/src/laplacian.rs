//! Symbolic Laplacian, degradation and synthesis of a network, and the
//! `F = [[N, 0], [B, T]]` block partition.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::graph::{LabeledDigraph, SccDecomposition};
use crate::matrix::SymMatrix;
use crate::symexpr::RationalExpr;

/// Laplacian of the core digraph: entry `(i, j)` is the label of `j -> i`
/// and each diagonal entry is minus the sum of labels leaving that vertex.
/// Columns sum to zero.
pub fn laplacian_matrix(g: &LabeledDigraph) -> SymMatrix {
    let n = g.len();
    let mut m = SymMatrix::zeros(n, n);
    let mut out_sum = alloc::vec![RationalExpr::zero(); n];
    for ((j, i), label) in g.edges() {
        m.set(i, j, label.clone()).expect("in range");
        out_sum[j] = &out_sum[j] + label;
    }
    for (j, total) in out_sum.into_iter().enumerate() {
        m.set(j, j, -total).expect("in range");
    }
    m
}

/// The matrices of `dx/dt = (L - D) x + s`.
#[derive(Clone, Debug, PartialEq)]
pub struct SdSystem {
    pub graph: LabeledDigraph,
    pub laplacian: SymMatrix,
    pub degradation: SymMatrix,
    pub synthesis: Vec<RationalExpr>,
    pub f: SymMatrix,
}

impl SdSystem {
    pub fn len(&self) -> usize {
        self.synthesis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.synthesis.is_empty()
    }

    pub fn degradation_diag(&self) -> Vec<RationalExpr> {
        (0..self.len()).map(|i| self.degradation[(i, i)].clone()).collect()
    }
}

pub fn build_system(g: &LabeledDigraph) -> SdSystem {
    let n = g.len();
    let laplacian = laplacian_matrix(g);
    let d: Vec<RationalExpr> = (0..n)
        .map(|i| g.degradation(i).cloned().unwrap_or_else(RationalExpr::zero))
        .collect();
    let synthesis = (0..n)
        .map(|i| g.synthesis(i).cloned().unwrap_or_else(RationalExpr::zero))
        .collect();
    let degradation = SymMatrix::diagonal(&d);
    let f = laplacian.sub(&degradation).expect("same shape");
    SdSystem {
        graph: g.clone(),
        laplacian,
        degradation,
        synthesis,
        f,
    }
}

/// `F = [[N, 0], [B, T]]` where `T` collects the `k` degradation-free
/// terminal components (`u` vertices in total) in the lower right.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockPartition {
    pub n: SymMatrix,
    pub b: SymMatrix,
    pub t: SymMatrix,
    /// Number of components placed in `N`.
    pub r: usize,
    /// Number of degradation-free terminal components.
    pub k: usize,
    /// Canonical vertex indices of each degradation-free terminal component.
    pub terminal_vertex_sets: Vec<Vec<usize>>,
    pub s_prime: Vec<RationalExpr>,
    pub s_doubleprime: Vec<RationalExpr>,
}

impl BlockPartition {
    /// Size of `N`, i.e. `n - u`.
    pub fn split(&self) -> usize {
        self.n.rows()
    }

    /// Total vertex count.
    pub fn len(&self) -> usize {
        self.n.rows() + self.t.rows()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Reassembles `[[N, 0], [B, T]]`.
    pub fn assemble(&self) -> SymMatrix {
        let m = self.split();
        let n = self.len();
        SymMatrix::from_fn(n, n, |i, j| match (i < m, j < m) {
            (true, true) => self.n[(i, j)].clone(),
            (true, false) => RationalExpr::zero(),
            (false, true) => self.b[(i - m, j)].clone(),
            (false, false) => self.t[(i - m, j - m)].clone(),
        })
    }
}

/// Splits `F` of a canonically labeled system.
///
/// `d` must be the decomposition of `system.graph` itself, so its relabeling
/// is the identity and the degradation-free terminal components are last.
pub fn partition(system: &SdSystem, d: &SccDecomposition) -> Result<BlockPartition> {
    if !d.is_identity() {
        return Err(Error::InvalidParameter(
            "partition requires a canonically labeled system",
        ));
    }
    let n = system.len();
    let terminal_vertex_sets: Vec<Vec<usize>> = (0..d.len())
        .filter(|&c| d.is_degradation_free_terminal(c))
        .map(|c| d.components()[c].clone())
        .collect();
    let k = terminal_vertex_sets.len();
    let u: usize = terminal_vertex_sets.iter().map(Vec::len).sum();
    let m = n - u;
    let head: Vec<usize> = (0..m).collect();
    let tail: Vec<usize> = (m..n).collect();
    Ok(BlockPartition {
        n: system.f.submatrix(&head, &head),
        b: system.f.submatrix(&tail, &head),
        t: system.f.submatrix(&tail, &tail),
        r: d.len() - k,
        k,
        terminal_vertex_sets,
        s_prime: system.synthesis[..m].to_vec(),
        s_doubleprime: system.synthesis[m..].to_vec(),
    })
}
