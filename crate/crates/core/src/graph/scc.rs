use alloc::collections::{BTreeSet, BinaryHeap};
use alloc::vec::Vec;
use core::cmp::Reverse;

use super::LabeledDigraph;

/// Strongly connected components in canonical order.
///
/// Non-terminal components come first in a topological order of the
/// condensation (ties broken by smallest vertex index), then terminal
/// components that carry degradation, then degradation-free terminal
/// components. Vertices inside a component are ascending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SccDecomposition {
    components: Vec<Vec<usize>>,
    terminal: Vec<bool>,
    degradation_free: Vec<bool>,
    component_of: Vec<usize>,
    relabel: Vec<usize>,
}

impl SccDecomposition {
    pub fn components(&self) -> &[Vec<usize>] {
        &self.components
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn is_terminal(&self, c: usize) -> bool {
        self.terminal[c]
    }

    pub fn terminal_flags(&self) -> &[bool] {
        &self.terminal
    }

    /// Terminal and without any degradation edge on its vertices.
    pub fn is_degradation_free_terminal(&self, c: usize) -> bool {
        self.terminal[c] && self.degradation_free[c]
    }

    pub fn component_of(&self, v: usize) -> usize {
        self.component_of[v]
    }

    /// `relabel[v]` is the canonical index of original vertex `v`.
    pub fn relabel(&self) -> &[usize] {
        &self.relabel
    }

    pub fn is_identity(&self) -> bool {
        self.relabel.iter().enumerate().all(|(i, &p)| i == p)
    }

    /// Number of non-terminal components.
    pub fn p(&self) -> usize {
        self.terminal.iter().filter(|t| !**t).count()
    }

    /// Number of terminal components.
    pub fn q(&self) -> usize {
        self.terminal.iter().filter(|t| **t).count()
    }

    pub fn terminal_components(&self) -> impl Iterator<Item = (usize, &[usize])> {
        self.components
            .iter()
            .enumerate()
            .filter(|(c, _)| self.terminal[*c])
            .map(|(c, v)| (c, v.as_slice()))
    }

    /// Distinct `(from, to)` component pairs joined by a core edge.
    pub fn condensation_edges(&self, g: &LabeledDigraph) -> BTreeSet<(usize, usize)> {
        g.edges()
            .map(|((i, j), _)| (self.component_of[i], self.component_of[j]))
            .filter(|(a, b)| a != b)
            .collect()
    }
}

struct Tarjan<'a> {
    adj: &'a [Vec<usize>],
    next: usize,
    index: Vec<Option<usize>>,
    low: Vec<usize>,
    on_stack: Vec<bool>,
    stack: Vec<usize>,
    comps: Vec<Vec<usize>>,
}

impl Tarjan<'_> {
    fn visit(&mut self, v: usize) {
        self.index[v] = Some(self.next);
        self.low[v] = self.next;
        self.next += 1;
        self.stack.push(v);
        self.on_stack[v] = true;
        for &w in self.adj[v].iter() {
            match self.index[w] {
                None => {
                    self.visit(w);
                    self.low[v] = self.low[v].min(self.low[w]);
                }
                Some(iw) if self.on_stack[w] => self.low[v] = self.low[v].min(iw),
                Some(_) => {}
            }
        }
        if Some(self.low[v]) == self.index[v] {
            let mut comp = Vec::new();
            loop {
                let w = self.stack.pop().expect("tarjan stack underflow");
                self.on_stack[w] = false;
                comp.push(w);
                if w == v {
                    break;
                }
            }
            comp.sort_unstable();
            self.comps.push(comp);
        }
    }
}

/// Lowlink decomposition followed by canonical ordering of the components.
pub fn scc_decompose(g: &LabeledDigraph) -> SccDecomposition {
    let n = g.len();
    let adj = g.successors();
    let mut t = Tarjan {
        adj: &adj,
        next: 0,
        index: alloc::vec![None; n],
        low: alloc::vec![0; n],
        on_stack: alloc::vec![false; n],
        stack: Vec::new(),
        comps: Vec::new(),
    };
    for v in 0..n {
        if t.index[v].is_none() {
            t.visit(v);
        }
    }
    let raw = t.comps;

    let mut raw_of = alloc::vec![0; n];
    for (c, comp) in raw.iter().enumerate() {
        for &v in comp {
            raw_of[v] = c;
        }
    }
    let m = raw.len();
    let mut succ: Vec<BTreeSet<usize>> = alloc::vec![BTreeSet::new(); m];
    let mut indeg = alloc::vec![0usize; m];
    for ((i, j), _) in g.edges() {
        let (a, b) = (raw_of[i], raw_of[j]);
        if a != b && succ[a].insert(b) {
            indeg[b] += 1;
        }
    }
    let terminal: Vec<bool> = succ.iter().map(BTreeSet::is_empty).collect();
    let degradation_free: Vec<bool> = raw
        .iter()
        .map(|comp| comp.iter().all(|&v| g.degradation(v).is_none()))
        .collect();

    // Predecessors of a non-terminal component are non-terminal, so Kahn's
    // algorithm over the non-terminal part alone is a valid prefix.
    let mut order = Vec::with_capacity(m);
    let mut ready: BinaryHeap<Reverse<(usize, usize)>> = (0..m)
        .filter(|&c| !terminal[c] && indeg[c] == 0)
        .map(|c| Reverse((raw[c][0], c)))
        .collect();
    while let Some(Reverse((_, c))) = ready.pop() {
        order.push(c);
        for &d in &succ[c] {
            indeg[d] -= 1;
            if indeg[d] == 0 && !terminal[d] {
                ready.push(Reverse((raw[d][0], d)));
            }
        }
    }
    let mut tail: Vec<usize> = (0..m).filter(|&c| terminal[c]).collect();
    tail.sort_by_key(|&c| (degradation_free[c], raw[c][0]));
    order.extend(tail);

    let components: Vec<Vec<usize>> = order.iter().map(|&c| raw[c].clone()).collect();
    let mut component_of = alloc::vec![0; n];
    let mut relabel = alloc::vec![0; n];
    let mut next = 0;
    for (c, comp) in components.iter().enumerate() {
        for &v in comp {
            component_of[v] = c;
            relabel[v] = next;
            next += 1;
        }
    }
    SccDecomposition {
        terminal: order.iter().map(|&c| terminal[c]).collect(),
        degradation_free: order.iter().map(|&c| degradation_free[c]).collect(),
        components,
        component_of,
        relabel,
    }
}

/// Applies the canonical relabeling of `d` to `g`.
///
/// Under the result the matrix `L(G) - D` is block lower-triangular with the
/// degradation-free terminal components in the lower right.
pub fn canonical_relabel(g: &LabeledDigraph, d: &SccDecomposition) -> (LabeledDigraph, Vec<usize>) {
    let perm = d.relabel.clone();
    (g.permuted(&perm), perm)
}
