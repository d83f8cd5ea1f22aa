mod common;

use common::{digraph, network, s, shape};
use proptest::prelude::*;
use steadykernel_core::equilibrium::{
    default_initial, steady_state_general, steady_state_strong, Analysis, InverseMethod, Mode,
};
use steadykernel_core::inverse::{invert_adjugate, invert_mtt, invert_mtt_factored, PerturbedMatrix};
use steadykernel_core::{LabeledDigraph, RationalExpr, SymMatrix};

/// `δ_v` on the vertices flagged by `mask`, at least one per terminal
/// component so the matrix is nonsingular.
fn perturbed(g: LabeledDigraph, mask: &[bool]) -> PerturbedMatrix {
    let d = steadykernel_core::graph::scc_decompose(&g);
    let mut on = mask.to_vec();
    for (_, comp) in d.terminal_components() {
        if comp.iter().all(|&v| !on[v]) {
            on[comp[0]] = true;
        }
    }
    let delta = (0..g.len())
        .map(|v| {
            if on[v] {
                s(&format!("delta{}", v + 1))
            } else {
                RationalExpr::zero()
            }
        })
        .collect();
    PerturbedMatrix::new(g, delta).unwrap()
}

fn perturbed_case() -> impl Strategy<Value = PerturbedMatrix> {
    shape(4, 6).prop_map(|sh| {
        let mask = sh.degradation.clone();
        perturbed(sh.build(false), &mask)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn tree_inverse_is_an_inverse(p in perturbed_case()) {
        prop_assert!(p.is_nonsingular());
        let inv = invert_mtt(&p).unwrap();
        let n = p.matrix().rows();
        prop_assert_eq!(p.matrix().mul(&inv).unwrap(), SymMatrix::identity(n));
        prop_assert_eq!(inv, invert_adjugate(&p).unwrap());
    }

    #[test]
    fn shared_denominator_is_free_of_probes(p in perturbed_case()) {
        // trees rooted at `*` never use a `* -> i` edge
        let f = invert_mtt_factored(&p).unwrap();
        prop_assert!(f.denominator.symbols().iter().all(|sym| !sym.name().starts_with('#')));
        prop_assert!(f.numerators.entries().all(|(_, _, e)| e.symbols().iter().all(|sym| !sym.name().starts_with('#'))));
        let n = p.matrix().rows();
        let det = p.matrix().determinant().unwrap();
        let signed = if n % 2 == 0 { det } else { -det };
        prop_assert_eq!(&f.denominator, &signed);
        prop_assert_eq!(f.expand().unwrap(), invert_mtt(&p).unwrap());
    }

    #[test]
    fn pure_laplacian_is_singular(g in digraph(4, 6)) {
        let p = PerturbedMatrix::new(g.clone(), vec![RationalExpr::zero(); g.len()]).unwrap();
        prop_assert!(!p.is_nonsingular());
        prop_assert!(invert_mtt(&p).is_err());
    }

    #[test]
    fn strong_and_general_paths_agree(g in network(4, 6)) {
        let a = Analysis::new(&g).unwrap();
        if a.complementary_strongly_connected() {
            let strong = steady_state_strong(&g).unwrap();
            prop_assert_eq!(strong.mode, Mode::StrongComplementary);
            prop_assert_eq!(a.partition.k, 0);
            let x0 = default_initial(g.len());
            let general = steady_state_general(&a.canonical, &a.partition, &x0, InverseMethod::Mtt).unwrap();
            prop_assert_eq!(general.mode, Mode::GeneralUnique);
            let mapped: Vec<RationalExpr> = a.relabel.iter().map(|&c| general.x_es[c].clone()).collect();
            prop_assert_eq!(strong.x_es, mapped);
        }
    }

    #[test]
    fn inverse_methods_agree_on_steady_states(g in network(4, 6)) {
        let a = Analysis::new(&g).unwrap();
        let mtt = a.steady_state(None, InverseMethod::Mtt).unwrap();
        let adj = a.steady_state(None, InverseMethod::Adjugate).unwrap();
        prop_assert_eq!(mtt.mode, adj.mode);
        prop_assert_eq!(&mtt.x_es, &adj.x_es);
        if mtt.mode != Mode::NoSteadyState {
            prop_assert_eq!(a.check_identities(&mtt.x_es).unwrap(), (true, true));
        }
    }
}
