//! Inverses of nonsingular perturbed Laplacians `P = L(G) - Δ`.
//!
//! [`invert_mtt`] reads `P⁻¹` off steady states of the complementary digraph.
//! Every vertex gets a synthesis edge `* -> i` labeled by a probe symbol and
//! every `δ_i` becomes a degradation edge `i -> *`. The rho vector of that
//! digraph is computed once with symbolic probes. Column `i` of `P⁻¹` is
//! `p⁽⁰⁾ - p⁽ⁱ⁾`, where `p⁽ʲ⁾` is the steady state with probes bound to
//! all ones except a two at position `j` (none for `j = 0`). Trees rooted at
//! `*` never use a probe edge, so the denominator `rho_*` is shared by all
//! columns and computed once.
//!
//! [`invert_adjugate`] is the independent oracle `adj(P) / det(P)`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::graph::{scc_decompose, LabeledDigraph, STAR};
use crate::laplacian::laplacian_matrix;
use crate::matrix::SymMatrix;
use crate::spantree::rho_entry;
use crate::symexpr::{RationalExpr, Symbol};

#[derive(Clone, Debug, PartialEq)]
pub struct PerturbedMatrix {
    base_graph: LabeledDigraph,
    delta: Vec<RationalExpr>,
    matrix: SymMatrix,
}

impl PerturbedMatrix {
    /// `L(base_graph) - diag(delta)`.
    pub fn new(base_graph: LabeledDigraph, delta: Vec<RationalExpr>) -> Result<Self> {
        if delta.len() != base_graph.len() {
            return Err(Error::ShapeMismatch("delta length differs from vertex count"));
        }
        let matrix = laplacian_matrix(&base_graph)
            .sub(&SymMatrix::diagonal(&delta))
            .expect("same shape");
        Ok(PerturbedMatrix {
            base_graph,
            delta,
            matrix,
        })
    }

    /// Reads the digraph back from a matrix: off-diagonal entry `(i, j)` is
    /// the label of `j -> i` and `δ_j` is minus column `j`'s sum. Vertices are
    /// named `1..=n`.
    pub fn from_matrix(m: &SymMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::ShapeMismatch("perturbed matrix must be square"));
        }
        let n = m.rows();
        let names: Vec<alloc::string::String> = (1..=n).map(|i| format!("{i}")).collect();
        let mut g = LabeledDigraph::new();
        for name in &names {
            g.add_vertex(name);
        }
        let mut delta = Vec::with_capacity(n);
        for j in 0..n {
            let mut col_sum = RationalExpr::zero();
            for i in 0..n {
                let e = &m[(i, j)];
                col_sum = &col_sum + e;
                if i != j && !e.is_zero() {
                    if e.is_manifestly_negative() {
                        return Err(Error::InvalidParameter(
                            "off-diagonal entries of a perturbed Laplacian must be non-negative",
                        ));
                    }
                    g.add_edge(&names[j], &names[i], e.clone())?;
                }
            }
            let d = -col_sum;
            if d.is_manifestly_negative() {
                return Err(Error::InvalidParameter(
                    "column sums of a perturbed Laplacian must be non-positive",
                ));
            }
            delta.push(d);
        }
        Ok(PerturbedMatrix {
            base_graph: g,
            delta,
            matrix: m.clone(),
        })
    }

    pub fn base_graph(&self) -> &LabeledDigraph {
        &self.base_graph
    }

    pub fn delta(&self) -> &[RationalExpr] {
        &self.delta
    }

    pub fn matrix(&self) -> &SymMatrix {
        &self.matrix
    }

    /// Structural nonsingularity: every terminal component of the base graph
    /// has a vertex with nonzero `δ`.
    pub fn is_nonsingular(&self) -> bool {
        let d = scc_decompose(&self.base_graph);
        let ok = d
            .terminal_components()
            .all(|(_, verts)| verts.iter().any(|&v| !self.delta[v].is_zero()));
        ok
    }
}

/// `P⁻¹ = numerators / denominator` with a single shared denominator.
#[derive(Clone, Debug, PartialEq)]
pub struct FactoredInverse {
    pub numerators: SymMatrix,
    pub denominator: RationalExpr,
}

impl FactoredInverse {
    pub fn expand(&self) -> Result<SymMatrix> {
        let inv = self.denominator.recip()?;
        Ok(self.numerators.map(|e| e * &inv))
    }
}

fn probe_symbol(i: usize) -> Symbol {
    // `#` cannot occur in parsed identifiers.
    Symbol::named(&format!("#probe{i}"))
}

/// The probe-augmented complementary digraph, `*` at index `n`.
fn probe_digraph(p: &PerturbedMatrix) -> Result<LabeledDigraph> {
    let base = &p.base_graph;
    let mut h = base.core();
    h.add_vertex(STAR);
    for i in 0..base.len() {
        h.add_edge(STAR, base.name(i), RationalExpr::var(probe_symbol(i)))?;
        if !p.delta[i].is_zero() {
            h.add_edge(base.name(i), STAR, p.delta[i].clone())?;
        }
    }
    Ok(h)
}

/// Probe values: all ones, plus one more at `bump`.
fn probe_values(n: usize, bump: Option<usize>) -> BTreeMap<Symbol, RationalExpr> {
    (0..n)
        .map(|i| {
            let v = if Some(i) == bump { 2 } else { 1 };
            (probe_symbol(i), RationalExpr::from_int(v))
        })
        .collect()
}

pub fn invert_mtt_factored(p: &PerturbedMatrix) -> Result<FactoredInverse> {
    if !p.is_nonsingular() {
        return Err(Error::Singular);
    }
    let n = p.base_graph.len();
    let h = probe_digraph(p)?;
    let denominator = rho_entry(&h, n)?;
    if denominator.is_zero() {
        return Err(Error::Singular);
    }
    let rho: Vec<RationalExpr> = (0..n).map(|i| rho_entry(&h, i)).collect::<Result<_>>()?;
    let base = probe_values(n, None);
    let at_base: Vec<RationalExpr> = rho.iter().map(|r| r.substitute(&base)).collect::<Result<_>>()?;
    let mut numerators = SymMatrix::zeros(n, n);
    for j in 0..n {
        let bumped = probe_values(n, Some(j));
        for i in 0..n {
            let v = &at_base[i] - &rho[i].substitute(&bumped)?;
            numerators.set(i, j, v)?;
        }
    }
    Ok(FactoredInverse {
        numerators,
        denominator,
    })
}

/// Exact `P⁻¹` from spanning trees of the probe-augmented complementary
/// digraph.
pub fn invert_mtt(p: &PerturbedMatrix) -> Result<SymMatrix> {
    invert_mtt_factored(p)?.expand()
}

/// Exact `P⁻¹ = adj(P) / det(P)` with `adj(P)_ij = (-1)^(i+j) P_(ji)`.
pub fn invert_adjugate(p: &PerturbedMatrix) -> Result<SymMatrix> {
    invert_dense(&p.matrix)
}

/// Adjugate inverse of any square matrix.
pub fn invert_dense(m: &SymMatrix) -> Result<SymMatrix> {
    if !m.is_square() {
        return Err(Error::ShapeMismatch("inverse of a non-square matrix"));
    }
    let det = m.determinant()?;
    let inv_det = det.recip().map_err(|_| Error::Singular)?;
    let n = m.rows();
    let mut out = SymMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let minor = m.minor(j, i)?;
            let cof = if (i + j) % 2 == 0 { minor } else { -minor };
            out.set(i, j, &cof * &inv_det)?;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;

    fn mat(rows: Vec<Vec<RationalExpr>>) -> SymMatrix {
        SymMatrix::from_rows(rows).unwrap()
    }

    fn z() -> RationalExpr {
        RationalExpr::zero()
    }

    #[test]
    fn two_by_two_worked_example() {
        let p = PerturbedMatrix::from_matrix(&mat(alloc::vec![
            alloc::vec![-s("a"), z()],
            alloc::vec![s("a"), -s("b")],
        ]))
        .unwrap();
        assert_eq!(p.delta(), &[z(), s("b")]);
        let f = invert_mtt_factored(&p).unwrap();
        assert_eq!(f.denominator, s("a") * s("b"));
        let ab = s("a") * s("b");
        let expected = mat(alloc::vec![
            alloc::vec![-s("b") / ab.clone(), z()],
            alloc::vec![-s("a") / ab.clone(), -s("a") / ab.clone()],
        ]);
        assert_eq!(f.expand().unwrap(), expected);
        assert_eq!(invert_adjugate(&p).unwrap(), expected);
    }

    #[test]
    fn one_by_one() {
        let p = PerturbedMatrix::from_matrix(&mat(alloc::vec![alloc::vec![-s("a")]])).unwrap();
        let expected = mat(alloc::vec![alloc::vec![-RationalExpr::one() / s("a")]]);
        assert_eq!(invert_mtt(&p).unwrap(), expected);
    }

    #[test]
    fn negative_identity() {
        let m = mat(alloc::vec![
            alloc::vec![RationalExpr::from_int(-1), z()],
            alloc::vec![z(), RationalExpr::from_int(-1)],
        ]);
        let p = PerturbedMatrix::from_matrix(&m).unwrap();
        assert_eq!(invert_adjugate(&p).unwrap(), m);
        assert_eq!(invert_mtt(&p).unwrap(), m);
    }

    #[test]
    fn three_cycle_with_two_perturbations() {
        let mut g = LabeledDigraph::new();
        g.add_edge("1", "2", s("a")).unwrap();
        g.add_edge("2", "3", s("b")).unwrap();
        g.add_edge("3", "1", s("c")).unwrap();
        let p = PerturbedMatrix::new(g, alloc::vec![s("delta1"), s("delta2"), z()]).unwrap();
        let mtt = invert_mtt(&p).unwrap();
        assert_eq!(mtt, invert_adjugate(&p).unwrap());
        assert_eq!(p.matrix().mul(&mtt).unwrap(), SymMatrix::identity(3));
    }

    #[test]
    fn singular_is_rejected() {
        let p = PerturbedMatrix::new(three_cycle(), alloc::vec![z(), z(), z()]).unwrap();
        assert!(!p.is_nonsingular());
        assert_eq!(invert_mtt(&p), Err(Error::Singular));
        assert_eq!(invert_adjugate(&p), Err(Error::Singular));
    }
}
