//! Existence checks and exact steady states.
//!
//! The low-level functions work in canonical coordinates (see
//! [`crate::graph::canonical_relabel`]). [`Analysis`] runs the whole pipeline
//! on an arbitrary graph and reports steady states in the original vertex
//! order.

mod existence;
mod general;
mod strong;

use alloc::format;
use alloc::vec::Vec;

pub use existence::{check_existence_with, reachability_violations, ExistenceVerdict, Violation, ViolationKind};
pub use general::{build_rl, invert_n, steady_state_general, RlArtifacts};
pub use strong::{solve_dense_oracle, steady_state_strong};

use crate::error::{Error, Result};
use crate::graph::{canonical_relabel, complementary, scc_decompose, LabeledDigraph, SccDecomposition};
use crate::laplacian::{build_system, partition, BlockPartition, SdSystem};
use crate::symexpr::{RationalExpr, Symbol};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// `G*` is strongly connected; unique steady state from rho vectors.
    StrongComplementary,
    /// No degradation-free terminal component; unique steady state `-Q s`.
    GeneralUnique,
    /// The steady state depends on the initial condition.
    GeneralInitialDependent,
    NoSteadyState,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::StrongComplementary => "StrongComplementary",
            Mode::GeneralUnique => "GeneralUnique",
            Mode::GeneralInitialDependent => "GeneralInitialDependent",
            Mode::NoSteadyState => "NoSteadyState",
        }
    }
}

/// Which algorithm inverts the `N` block.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum InverseMethod {
    #[default]
    Mtt,
    Adjugate,
}

/// Structural multiplicity of the zero eigenvalue of `F`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Stability {
    /// Terminal components of the core graph.
    pub q: usize,
    /// Degradation-free terminal components.
    pub k: usize,
    pub alg0: usize,
    pub geo0: usize,
    /// Every trajectory of a valid system tends to its steady state, or
    /// grows without bound when existence fails.
    pub converges: bool,
}

pub fn stability_report(d: &SccDecomposition) -> Stability {
    let k = (0..d.len()).filter(|&c| d.is_degradation_free_terminal(c)).count();
    Stability {
        q: d.q(),
        k,
        alg0: k,
        geo0: k,
        converges: true,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EquilibriumReport {
    pub mode: Mode,
    /// Empty when there is no steady state.
    pub x_es: Vec<RationalExpr>,
    /// `R`, `L` and `Q`, in canonical coordinates; only on the general path.
    pub artifacts: Option<RlArtifacts>,
    pub verdict: ExistenceVerdict,
}

/// Existence verdict in canonical coordinates.
pub fn check_existence(part: &BlockPartition, method: InverseMethod) -> Result<ExistenceVerdict> {
    Ok(check_existence_with(part, &invert_n(part, method)?))
}

/// `F x + s`, entrywise.
pub fn residual(system: &SdSystem, x: &[RationalExpr]) -> Result<Vec<RationalExpr>> {
    let fx = system.f.mul_vec(x)?;
    Ok(fx.iter().zip(&system.synthesis).map(|(a, b)| a + b).collect())
}

/// `sum d_i x_i - sum s_i`.
pub fn balance_defect(system: &SdSystem, x: &[RationalExpr]) -> Result<RationalExpr> {
    if x.len() != system.len() {
        return Err(Error::ShapeMismatch("state length differs from vertex count"));
    }
    let outflow: RationalExpr = system.degradation_diag().iter().zip(x).map(|(d, xi)| d * xi).sum();
    let inflow: RationalExpr = system.synthesis.iter().sum();
    Ok(&outflow - &inflow)
}

/// The symbol naming the initial amount at original vertex `v` (zero-based):
/// `x0_1`, `x0_2`, ...
pub fn initial_symbol(v: usize) -> Symbol {
    Symbol::named(&format!("x0_{}", v + 1))
}

pub fn default_initial(n: usize) -> Vec<RationalExpr> {
    (0..n).map(|v| RationalExpr::var(initial_symbol(v))).collect()
}

/// A graph together with its canonical form and block partition.
#[derive(Clone, Debug)]
pub struct Analysis {
    pub graph: LabeledDigraph,
    pub system: SdSystem,
    pub decomposition: SccDecomposition,
    /// `relabel[v]` is the canonical index of original vertex `v`.
    pub relabel: Vec<usize>,
    pub canonical: LabeledDigraph,
    pub canonical_system: SdSystem,
    pub partition: BlockPartition,
}

impl Analysis {
    pub fn new(g: &LabeledDigraph) -> Result<Self> {
        let decomposition = scc_decompose(g);
        let (canonical, relabel) = canonical_relabel(g, &decomposition);
        let canonical_system = build_system(&canonical);
        let partition = partition(&canonical_system, &scc_decompose(&canonical))?;
        Ok(Analysis {
            graph: g.clone(),
            system: build_system(g),
            decomposition,
            relabel,
            canonical,
            canonical_system,
            partition,
        })
    }

    pub fn len(&self) -> usize {
        self.graph.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graph.is_empty()
    }

    pub fn stability(&self) -> Stability {
        stability_report(&self.decomposition)
    }

    pub fn complementary_strongly_connected(&self) -> bool {
        complementary(&self.graph).is_ok_and(|c| c.is_strongly_connected())
    }

    /// Original index of canonical vertex `c`.
    pub fn original_index(&self, c: usize) -> usize {
        self.relabel
            .iter()
            .position(|&r| r == c)
            .expect("relabel is a permutation")
    }

    /// Original vertices of each degradation-free terminal component, in the
    /// order used by violation reports and the columns of `R`.
    pub fn terminal_vertex_sets(&self) -> Vec<Vec<usize>> {
        self.partition
            .terminal_vertex_sets
            .iter()
            .map(|vs| {
                let mut out: Vec<usize> = vs.iter().map(|&c| self.original_index(c)).collect();
                out.sort_unstable();
                out
            })
            .collect()
    }

    /// Verdict with violating vertices given as original indices.
    pub fn check_existence(&self, method: InverseMethod) -> Result<ExistenceVerdict> {
        let mut verdict = check_existence(&self.partition, method)?;
        self.to_original_verdict(&mut verdict);
        Ok(verdict)
    }

    fn to_original_verdict(&self, verdict: &mut ExistenceVerdict) {
        for v in &mut verdict.violations {
            v.synthesis_vertex = self.original_index(v.synthesis_vertex);
        }
        verdict.violations.sort_by_key(|v| (v.synthesis_vertex, v.kind));
    }

    /// Steady state in original vertex order. `x0` is in original order and
    /// defaults to the symbols `x0_1..x0_n`; it only matters on the
    /// initial-dependent path.
    pub fn steady_state(&self, x0: Option<&[RationalExpr]>, method: InverseMethod) -> Result<EquilibriumReport> {
        if self.complementary_strongly_connected() {
            return steady_state_strong(&self.graph);
        }
        let x0 = match x0 {
            Some(v) if v.len() != self.len() => {
                return Err(Error::ShapeMismatch(
                    "initial condition length differs from vertex count",
                ))
            }
            Some(v) => v.to_vec(),
            None => default_initial(self.len()),
        };
        let mut x0_canon = alloc::vec![RationalExpr::zero(); self.len()];
        for (v, e) in x0.into_iter().enumerate() {
            x0_canon[self.relabel[v]] = e;
        }
        let mut report = steady_state_general(&self.canonical, &self.partition, &x0_canon, method)?;
        self.to_original_verdict(&mut report.verdict);
        if !report.x_es.is_empty() {
            report.x_es = self.relabel.iter().map(|&c| report.x_es[c].clone()).collect();
        }
        Ok(report)
    }

    /// Whether `x` satisfies `F x + s = 0` and the balance identity exactly.
    pub fn check_identities(&self, x: &[RationalExpr]) -> Result<(bool, bool)> {
        let res = residual(&self.system, x)?.iter().all(RationalExpr::is_zero);
        let bal = balance_defect(&self.system, x)?.is_zero();
        Ok((res, bal))
    }
}
