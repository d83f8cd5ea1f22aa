use alloc::vec::Vec;

use super::{EquilibriumReport, Mode};
use crate::error::{Error, Result};
use crate::graph::{complementary, LabeledDigraph};
use crate::laplacian::SdSystem;
use crate::spantree::rho_entry;
use crate::symexpr::RationalExpr;

/// `x_i = rho_i / rho_*` on the complementary digraph, which must be strongly
/// connected. Independent of the initial condition.
pub fn steady_state_strong(g: &LabeledDigraph) -> Result<EquilibriumReport> {
    let c = complementary(g)?;
    if !c.is_strongly_connected() {
        return Err(Error::NotStronglyConnected);
    }
    let h = c.graph();
    let denom = rho_entry(h, c.star())?.recip()?;
    let x_es = (0..g.len())
        .map(|i| Ok(&rho_entry(h, i)? * &denom))
        .collect::<Result<Vec<_>>>()?;
    Ok(EquilibriumReport {
        mode: Mode::StrongComplementary,
        x_es,
        artifacts: None,
        verdict: Default::default(),
    })
}

/// `x = -F⁻¹ s` by Cramer's rule over fraction-free determinants. Uses no
/// graph structure at all.
pub fn solve_dense_oracle(system: &SdSystem) -> Result<Vec<RationalExpr>> {
    let det = system.f.determinant()?;
    if det.is_zero() {
        return Err(Error::Singular);
    }
    let neg_s: Vec<RationalExpr> = system.synthesis.iter().map(|e| -e).collect();
    let n = system.len();
    (0..n)
        .map(|i| {
            let mut m = system.f.clone();
            for (r, e) in neg_s.iter().enumerate() {
                m.set(r, i, e.clone())?;
            }
            m.determinant()?.checked_div(&det)
        })
        .collect()
}
