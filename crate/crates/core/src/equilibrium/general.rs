use alloc::vec::Vec;

use super::existence::check_existence_with;
use super::{EquilibriumReport, InverseMethod, Mode};
use crate::error::{Error, Result};
use crate::graph::LabeledDigraph;
use crate::inverse::{invert_dense, invert_mtt, PerturbedMatrix};
use crate::laplacian::BlockPartition;
use crate::matrix::SymMatrix;
use crate::spantree::{extended_rho, normalize};
use crate::symexpr::RationalExpr;

/// Right and left kernel bases of `F` with `L R = I_k`, plus the padded
/// inverse `Q = [[N⁻¹, 0], [0, 0]]`.
#[derive(Clone, Debug, PartialEq)]
pub struct RlArtifacts {
    /// `n × k`, columns are the normalized extended rho vectors of the
    /// degradation-free terminal components.
    pub r: SymMatrix,
    /// `k × n`, `[X | U]`.
    pub l: SymMatrix,
    pub q: SymMatrix,
    /// `k × u` indicator of the transposed nonzero pattern of `V`.
    pub u: SymMatrix,
    /// `k × (n - u)`, `-U B N⁻¹`.
    pub x: SymMatrix,
    /// `u × k`, lower block of `R`.
    pub v: SymMatrix,
}

/// `N⁻¹` by the requested method. The empty matrix inverts to itself.
pub fn invert_n(part: &BlockPartition, method: InverseMethod) -> Result<SymMatrix> {
    if part.split() == 0 {
        return Ok(SymMatrix::zeros(0, 0));
    }
    match method {
        InverseMethod::Mtt => invert_mtt(&PerturbedMatrix::from_matrix(&part.n)?),
        InverseMethod::Adjugate => invert_dense(&part.n),
    }
}

/// Builds `R`, `L` and `Q` for a canonically labeled graph `g` and its
/// partition, given `N⁻¹`.
pub fn build_rl(g: &LabeledDigraph, part: &BlockPartition, n_inv: &SymMatrix) -> Result<RlArtifacts> {
    let n = part.len();
    let m = part.split();
    let u = n - m;
    let k = part.k;
    if n_inv.rows() != m || n_inv.cols() != m {
        return Err(Error::ShapeMismatch("N inverse does not match the partition"));
    }

    let mut v = SymMatrix::zeros(u, k);
    for (c, verts) in part.terminal_vertex_sets.iter().enumerate() {
        let normalized = normalize(&extended_rho(g, verts))?;
        for &vert in verts {
            v.set(vert - m, c, normalized[vert].clone())?;
        }
    }
    let u_mat = SymMatrix::from_fn(k, u, |c, row| {
        if v[(row, c)].is_zero() {
            RationalExpr::zero()
        } else {
            RationalExpr::one()
        }
    });
    let x = u_mat.mul(&part.b)?.mul(n_inv)?.neg();
    let l = SymMatrix::from_fn(k, n, |c, j| {
        if j < m {
            x[(c, j)].clone()
        } else {
            u_mat[(c, j - m)].clone()
        }
    });
    let r = SymMatrix::from_fn(n, k, |i, c| {
        if i < m {
            RationalExpr::zero()
        } else {
            v[(i - m, c)].clone()
        }
    });
    let q = SymMatrix::from_fn(n, n, |i, j| {
        if i < m && j < m {
            n_inv[(i, j)].clone()
        } else {
            RationalExpr::zero()
        }
    });
    Ok(RlArtifacts {
        r,
        l,
        q,
        u: u_mat,
        x,
        v,
    })
}

/// `x_ES = R L x₀ + (R L - I) Q s` in canonical order.
///
/// With `k = 0` the matrices `R` and `L` are empty, `R L` is the zero matrix
/// and the result is the unique `-Q s`.
pub fn steady_state_general(
    g: &LabeledDigraph,
    part: &BlockPartition,
    x0: &[RationalExpr],
    method: InverseMethod,
) -> Result<EquilibriumReport> {
    let n = part.len();
    if x0.len() != n {
        return Err(Error::ShapeMismatch(
            "initial condition length differs from vertex count",
        ));
    }
    let n_inv = invert_n(part, method)?;
    let verdict = check_existence_with(part, &n_inv);
    if !verdict.ok() {
        return Ok(EquilibriumReport {
            mode: Mode::NoSteadyState,
            x_es: Vec::new(),
            artifacts: None,
            verdict,
        });
    }
    let art = build_rl(g, part, &n_inv)?;
    let m = part.split();

    let w = n_inv.mul_vec(&part.s_prime)?;
    let mut qs = w.clone();
    qs.resize(n, RationalExpr::zero());

    let x_es = if part.k == 0 {
        qs.iter().map(|e| -e).collect()
    } else {
        let mut coeff = art.l.mul_vec(x0)?;
        let xw = art.x.mul_vec(&w)?;
        for (c, e) in coeff.iter_mut().zip(xw) {
            *c = &*c + &e;
        }
        let lifted = art.r.mul_vec(&coeff)?;
        lifted
            .iter()
            .zip(&qs)
            .enumerate()
            .map(|(i, (a, b))| if i < m { a - b } else { a.clone() })
            .collect()
    };
    Ok(EquilibriumReport {
        mode: if part.k == 0 {
            Mode::GeneralUnique
        } else {
            Mode::GeneralInitialDependent
        },
        x_es,
        artifacts: Some(art),
        verdict,
    })
}
