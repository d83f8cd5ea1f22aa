use alloc::vec::Vec;

use crate::graph::LabeledDigraph;
use crate::laplacian::BlockPartition;
use crate::matrix::SymMatrix;
use crate::symexpr::RationalExpr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum ViolationKind {
    /// Synthesis on a vertex of a degradation-free terminal component
    /// (`s'' ≠ 0`).
    SynthesisInDegradationFreeTerminal,
    /// Synthesis that drains into a degradation-free terminal component
    /// (`B N⁻¹ s' ≠ 0`).
    SynthesisFeedsDegradationFreeTerminal,
}

/// One offending synthesis edge.
#[derive(Clone, Debug, PartialEq)]
pub struct Violation {
    pub kind: ViolationKind,
    /// Canonical vertex index carrying the synthesis edge.
    pub synthesis_vertex: usize,
    pub label: RationalExpr,
    /// Indices into [`BlockPartition::terminal_vertex_sets`] reached by it.
    pub terminal_components: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct ExistenceVerdict {
    pub violations: Vec<Violation>,
}

impl ExistenceVerdict {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }

    /// Canonical vertices whose synthesis must be removed.
    pub fn offending_vertices(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.violations.iter().map(|x| x.synthesis_vertex).collect();
        v.sort_unstable();
        v.dedup();
        v
    }
}

/// Evaluates both existence conditions symbolically given `N⁻¹`.
///
/// `−N⁻¹`, `B` and `s'` are entrywise non-negative, so the aggregate product
/// `B N⁻¹ s'` vanishes exactly when every per-vertex column `B N⁻¹ e_v` with
/// `s_v ≠ 0` does; each nonzero column is reported on its own.
pub fn check_existence_with(part: &BlockPartition, n_inv: &SymMatrix) -> ExistenceVerdict {
    let m = part.split();
    let component_of_tail = tail_components(part);
    let mut violations = Vec::new();

    for (v, label) in part.s_prime.iter().enumerate() {
        if label.is_zero() || m == 0 {
            continue;
        }
        let column = n_inv.column(v);
        let reached = part.b.mul_vec(&column).expect("shapes agree");
        let mut comps: Vec<usize> = reached
            .iter()
            .enumerate()
            .filter(|(_, e)| !e.is_zero())
            .map(|(row, _)| component_of_tail[row])
            .collect();
        comps.dedup();
        if !comps.is_empty() {
            violations.push(Violation {
                kind: ViolationKind::SynthesisFeedsDegradationFreeTerminal,
                synthesis_vertex: v,
                label: label.clone(),
                terminal_components: comps,
            });
        }
    }
    for (row, label) in part.s_doubleprime.iter().enumerate() {
        if !label.is_zero() {
            violations.push(Violation {
                kind: ViolationKind::SynthesisInDegradationFreeTerminal,
                synthesis_vertex: m + row,
                label: label.clone(),
                terminal_components: alloc::vec![component_of_tail[row]],
            });
        }
    }
    violations.sort_by_key(|v| v.synthesis_vertex);
    ExistenceVerdict { violations }
}

/// Component index of every row of the `T` block.
fn tail_components(part: &BlockPartition) -> Vec<usize> {
    let m = part.split();
    let mut out = alloc::vec![0; part.len() - m];
    for (c, verts) in part.terminal_vertex_sets.iter().enumerate() {
        for &v in verts {
            out[v - m] = c;
        }
    }
    out
}

/// Graph-only form of the second condition: canonical vertices with
/// synthesis in the `N` part from which some degradation-free terminal
/// vertex is reachable.
pub fn reachability_violations(g: &LabeledDigraph, part: &BlockPartition) -> Vec<usize> {
    let m = part.split();
    (0..m)
        .filter(|&v| g.synthesis(v).is_some())
        .filter(|&v| g.reachable_from(v)[m..].iter().any(|&r| r))
        .collect()
}
