//! Seeded random generators for property tests. Enabled by the `testkit`
//! feature.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::equilibrium::{Analysis, InverseMethod};
use crate::graph::{scc_decompose, LabeledDigraph};
use crate::inverse::PerturbedMatrix;
use crate::symexpr::{FloatBindings, RationalExpr, Symbol};

/// Seed used when `STEADYKERNEL_SEED` is not set.
pub const DEFAULT_SEED: u64 = 0x5eed_2024;

fn name(v: usize) -> String {
    format!("{}", v + 1)
}

fn edge_label(i: usize, j: usize) -> RationalExpr {
    RationalExpr::symbol(&format!("e{}_{}", i + 1, j + 1))
}

/// A weakly connected digraph on `1..=max_vertices` vertices with at most
/// `max_edges` edges, each labeled by its own symbol `e<from>_<to>`.
pub fn random_digraph<R: Rng + ?Sized>(rng: &mut R, max_vertices: usize, max_edges: usize) -> LabeledDigraph {
    let n = rng.gen_range(1..=max_vertices.max(1));
    let mut g = LabeledDigraph::new();
    for v in 0..n {
        g.add_vertex(&name(v));
    }
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    // random spanning tree with random orientations keeps it weakly connected
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    for k in 1..n {
        let a = order[k];
        let b = order[rng.gen_range(0..k)];
        pairs.push(if rng.gen_bool(0.5) { (a, b) } else { (b, a) });
    }
    let budget = max_edges.max(pairs.len());
    let mut extra: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
        .filter(|p| !pairs.contains(p))
        .collect();
    extra.shuffle(rng);
    let room = budget - pairs.len();
    let take = rng.gen_range(0..=room.min(extra.len()));
    pairs.extend(extra.into_iter().take(take));
    for (i, j) in pairs {
        g.add_edge(&name(i), &name(j), edge_label(i, j))
            .expect("distinct endpoints");
    }
    g
}

/// [`random_digraph`] plus synthesis `s<v>` and degradation `d<v>` edges,
/// each present with probability one half.
pub fn random_network<R: Rng + ?Sized>(rng: &mut R, max_vertices: usize, max_edges: usize) -> LabeledDigraph {
    let mut g = random_digraph(rng, max_vertices, max_edges);
    for v in 0..g.len() {
        if rng.gen_bool(0.5) {
            g.add_synthesis(&name(v), RationalExpr::symbol(&format!("s{}", v + 1)))
                .expect("vertex exists");
        }
        if rng.gen_bool(0.5) {
            g.add_degradation(&name(v), RationalExpr::symbol(&format!("d{}", v + 1)))
                .expect("vertex exists");
        }
    }
    g
}

/// A random network that has a steady state: offending synthesis edges are
/// dropped.
pub fn passing_network<R: Rng + ?Sized>(rng: &mut R, max_vertices: usize, max_edges: usize) -> LabeledDigraph {
    let g = random_network(rng, max_vertices, max_edges);
    let verdict = Analysis::new(&g)
        .and_then(|a| a.check_existence(InverseMethod::Mtt))
        .expect("generated networks are valid");
    g.without_synthesis(&verdict.offending_vertices())
}

/// A random network without a steady state: some degradation-free terminal
/// component receives synthesis.
pub fn violating_network<R: Rng + ?Sized>(rng: &mut R, max_vertices: usize, max_edges: usize) -> LabeledDigraph {
    let mut g = random_network(rng, max_vertices, max_edges);
    let d = scc_decompose(&g);
    let free: Vec<usize> = (0..d.len()).filter(|&c| d.is_degradation_free_terminal(c)).collect();
    let target = if let Some(&c) = free.choose(rng) {
        *d.components()[c].choose(rng).expect("components are nonempty")
    } else {
        // strip degradation from one terminal component
        let terminals: Vec<&[usize]> = d.terminal_components().map(|(_, v)| v).collect();
        let comp = *terminals.choose(rng).expect("a terminal component exists");
        let mut h = LabeledDigraph::new();
        for v in 0..g.len() {
            h.add_vertex(g.name(v));
        }
        for ((i, j), l) in g.edges() {
            h.add_edge(g.name(i), g.name(j), l.clone()).expect("copy");
        }
        for (v, l) in g.synthesis_edges() {
            h.add_synthesis(g.name(v), l.clone()).expect("copy");
        }
        for (v, l) in g.degradation_edges() {
            if !comp.contains(&v) {
                h.add_degradation(g.name(v), l.clone()).expect("copy");
            }
        }
        g = h;
        *comp.choose(rng).expect("components are nonempty")
    };
    if g.synthesis(target).is_none() {
        g.add_synthesis(&name(target), RationalExpr::symbol(&format!("s{}", target + 1)))
            .expect("vertex exists");
    }
    g
}

/// A nonsingular perturbed Laplacian: random digraph, `delta<v>` on a random
/// subset of vertices, and at least one perturbed vertex per terminal
/// component.
pub fn random_perturbed<R: Rng + ?Sized>(rng: &mut R, max_vertices: usize, max_edges: usize) -> PerturbedMatrix {
    let g = random_digraph(rng, max_vertices, max_edges);
    let delta_sym = |v: usize| RationalExpr::symbol(&format!("delta{}", v + 1));
    let mut delta: Vec<RationalExpr> = (0..g.len())
        .map(|v| {
            if rng.gen_bool(0.3) {
                delta_sym(v)
            } else {
                RationalExpr::zero()
            }
        })
        .collect();
    let d = scc_decompose(&g);
    for (_, verts) in d.terminal_components() {
        if verts.iter().all(|&v| delta[v].is_zero()) {
            let v = *verts.choose(rng).expect("components are nonempty");
            delta[v] = delta_sym(v);
        }
    }
    PerturbedMatrix::new(g, delta).expect("delta matches vertex count")
}

/// Binds every symbol to a value drawn uniformly from `[lo, hi)`.
pub fn random_bindings<R, I>(rng: &mut R, symbols: I, lo: f64, hi: f64) -> FloatBindings
where
    R: Rng + ?Sized,
    I: IntoIterator<Item = Symbol>,
{
    symbols.into_iter().map(|s| (s, rng.gen_range(lo..hi))).collect()
}

/// Every symbol used by the labels of `g`.
pub fn graph_symbols(g: &LabeledDigraph) -> alloc::collections::BTreeSet<Symbol> {
    g.edges()
        .map(|(_, l)| l)
        .chain(g.synthesis_edges().map(|(_, l)| l))
        .chain(g.degradation_edges().map(|(_, l)| l))
        .flat_map(|l| l.symbols())
        .collect()
}
