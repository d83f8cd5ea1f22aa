//! Report types shared by the text and JSON outputs. Expressions are stored
//! in their canonical rendering, which the expression parser reads back.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use steadykernel_core::equilibrium::{Stability, ViolationKind};
use steadykernel_core::{RationalExpr, SymMatrix};

pub fn expr(e: &RationalExpr) -> String {
    e.to_string()
}

pub fn exprs(v: &[RationalExpr]) -> Vec<String> {
    v.iter().map(expr).collect()
}

pub fn matrix(m: &SymMatrix) -> Vec<Vec<String>> {
    (0..m.rows()).map(|i| exprs(m.row(i))).collect()
}

/// Right-pads every column to its widest cell.
pub fn aligned(rows: &[Vec<String>], indent: &str) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|c| {
            rows.iter()
                .filter_map(|r| r.get(c))
                .map(|s| s.chars().count())
                .max()
                .unwrap_or(0)
        })
        .collect();
    let mut out = String::new();
    for row in rows {
        out.push_str(indent);
        out.push('[');
        for (c, cell) in row.iter().enumerate() {
            let pad = widths[c] - cell.chars().count();
            let _ = write!(out, " {cell}{}", " ".repeat(pad));
        }
        out.push_str(" ]\n");
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilityJson {
    pub q: usize,
    pub k: usize,
    pub alg0: usize,
    pub geo0: usize,
    pub converges: bool,
}

impl From<Stability> for StabilityJson {
    fn from(s: Stability) -> Self {
        StabilityJson {
            q: s.q,
            k: s.k,
            alg0: s.alg0,
            geo0: s.geo0,
            converges: s.converges,
        }
    }
}

impl StabilityJson {
    fn text(&self) -> String {
        format!(
            "q={} k={} alg0={} geo0={} converges={}",
            self.q, self.k, self.alg0, self.geo0, self.converges
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentJson {
    pub vertices: Vec<String>,
    pub terminal: bool,
    pub degradation_free: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalyzeReport {
    pub vertices: Vec<String>,
    pub components: Vec<ComponentJson>,
    /// Vertices in canonical order.
    pub canonical_order: Vec<String>,
    pub weakly_connected: bool,
    pub complementary_strongly_connected: bool,
    pub stability: StabilityJson,
}

impl AnalyzeReport {
    pub fn text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "vertices: {}", self.vertices.join(" "));
        let _ = writeln!(out, "components:");
        for (i, c) in self.components.iter().enumerate() {
            let kind = match (c.terminal, c.degradation_free) {
                (false, _) => "non-terminal",
                (true, false) => "terminal",
                (true, true) => "terminal, degradation-free",
            };
            let _ = writeln!(out, "  C{} = {{{}}} ({kind})", i + 1, c.vertices.join(", "));
        }
        let _ = writeln!(out, "canonical order: {}", self.canonical_order.join(" "));
        let _ = writeln!(out, "weakly connected: {}", self.weakly_connected);
        let _ = writeln!(
            out,
            "complementary digraph strongly connected: {}",
            self.complementary_strongly_connected
        );
        let _ = writeln!(out, "stability: {}", self.stability.text());
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ViolationJson {
    pub kind: String,
    pub vertex: String,
    pub label: String,
    /// Degradation-free terminal components reached, by vertex names.
    pub terminal_components: Vec<Vec<String>>,
}

pub fn kind_name(k: ViolationKind) -> &'static str {
    match k {
        ViolationKind::SynthesisInDegradationFreeTerminal => "SynthesisInDegradationFreeTerminal",
        ViolationKind::SynthesisFeedsDegradationFreeTerminal => "SynthesisFeedsDegradationFreeTerminal",
    }
}

fn violations_text(out: &mut String, violations: &[ViolationJson]) {
    for v in violations {
        let comps: Vec<String> = v
            .terminal_components
            .iter()
            .map(|c| format!("{{{}}}", c.join(", ")))
            .collect();
        let what = match v.kind.as_str() {
            "SynthesisInDegradationFreeTerminal" => "lies in degradation-free terminal component",
            _ => "feeds degradation-free terminal component",
        };
        let _ = writeln!(out, "  * -> {} : {}  {what} {}", v.vertex, v.label, comps.join(" "));
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub ok: bool,
    pub violations: Vec<ViolationJson>,
    /// Synthesis vertices that reach a degradation-free terminal component
    /// from outside it, found by graph search alone.
    pub reachability: Vec<String>,
}

impl CheckReport {
    pub fn text(&self) -> String {
        let mut out = String::new();
        if self.ok {
            out.push_str("steady state exists\n");
        } else {
            let _ = writeln!(out, "no steady state: {} violation(s)", self.violations.len());
            violations_text(&mut out, &self.violations);
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatricesJson {
    /// Row order of `R` and `Q`, column order of `L` and `Q`.
    pub order: Vec<String>,
    #[serde(rename = "R")]
    pub r: Vec<Vec<String>>,
    #[serde(rename = "L")]
    pub l: Vec<Vec<String>>,
    #[serde(rename = "Q")]
    pub q: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SteadyStateReport {
    pub mode: String,
    pub violations: Vec<ViolationJson>,
    pub vertices: Vec<String>,
    pub x_es: Vec<String>,
    pub stability: StabilityJson,
    pub balance_ok: bool,
    pub residual_ok: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub numeric: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub matrices: Option<MatricesJson>,
}

impl SteadyStateReport {
    pub fn text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "mode: {}", self.mode);
        let _ = writeln!(out, "stability: {}", self.stability.text());
        if !self.violations.is_empty() {
            out.push_str("violations:\n");
            violations_text(&mut out, &self.violations);
            return out;
        }
        out.push_str("x_es:\n");
        for (i, (v, x)) in self.vertices.iter().zip(&self.x_es).enumerate() {
            let _ = write!(out, "  {v} = {x}");
            if let Some(n) = &self.numeric {
                let _ = write!(out, "  ~ {}", n[i]);
            }
            out.push('\n');
        }
        let _ = writeln!(out, "residual_ok: {}", self.residual_ok);
        let _ = writeln!(out, "balance_ok: {}", self.balance_ok);
        if let Some(m) = &self.matrices {
            let _ = writeln!(out, "order: {}", m.order.join(" "));
            for (name, rows) in [("R", &m.r), ("L", &m.l), ("Q", &m.q)] {
                let _ = writeln!(out, "{name}:");
                out.push_str(&aligned(rows, "  "));
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InverseReport {
    /// Row and column order.
    pub order: Vec<String>,
    pub matrix: Vec<Vec<String>>,
}

impl InverseReport {
    pub fn text(&self) -> String {
        let mut out = format!("order: {}\n", self.order.join(" "));
        if self.order.is_empty() {
            out.push_str("(empty)\n");
        }
        out.push_str(&aligned(&self.matrix, ""));
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelColumn {
    pub component: Vec<String>,
    pub vector: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelReport {
    pub vertices: Vec<String>,
    pub columns: Vec<KernelColumn>,
}

impl KernelReport {
    pub fn text(&self) -> String {
        let mut out = String::new();
        for c in &self.columns {
            let _ = writeln!(out, "{{{}}}: ({})", c.component.join(", "), c.vector.join(", "));
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeEdge {
    pub from: String,
    pub to: String,
    pub label: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeJson {
    pub root: String,
    pub edges: Vec<TreeEdge>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreesReport {
    pub trees: Vec<TreeJson>,
}

impl TreesReport {
    /// One tree per line: `root | from->to:label,...`.
    pub fn text(&self) -> String {
        let mut out = String::new();
        for t in &self.trees {
            let edges: Vec<String> = t
                .edges
                .iter()
                .map(|e| format!("{}->{}:{}", e.from, e.to, e.label))
                .collect();
            let _ = writeln!(out, "{} | {}", t.root, edges.join(","));
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimulateReport {
    pub vertices: Vec<String>,
    pub time: f64,
    pub steps: usize,
    pub dt: f64,
    pub state: Vec<f64>,
    pub error_estimate: f64,
    pub residual: f64,
    pub balance_defect: f64,
    pub diverged: bool,
    /// Exact steady state evaluated under the bindings, when one exists.
    pub steady_state: Option<Vec<f64>>,
    /// Relative max-norm distance from `state` to `steady_state`.
    pub distance: Option<f64>,
}

impl SimulateReport {
    pub fn text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "t = {} after {} steps of {}", self.time, self.steps, self.dt);
        if self.diverged {
            out.push_str("diverged\n");
        }
        for (i, v) in self.vertices.iter().enumerate() {
            let _ = write!(out, "  {v} = {}", self.state[i]);
            if let Some(ss) = &self.steady_state {
                let _ = write!(out, "  (steady state {})", ss[i]);
            }
            out.push('\n');
        }
        let _ = writeln!(out, "step-halving error estimate: {:e}", self.error_estimate);
        let _ = writeln!(out, "residual: {:e}", self.residual);
        let _ = writeln!(out, "balance defect: {:e}", self.balance_defect);
        if let Some(d) = self.distance {
            let _ = writeln!(out, "relative distance to steady state: {d:e}");
        }
        out
    }
}
