//! The `steadykernel` command line.
//!
//! Exit status is 0 on success, 2 when the network has no steady state
//! (`check`, `steady-state`) or a simulation diverges, and 1 on any input
//! or usage error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use steadykernel_core::equilibrium::{
    initial_symbol, reachability_violations, Analysis, EquilibriumReport, ExistenceVerdict, InverseMethod, Mode,
};
use steadykernel_core::graph::scc_decompose;
use steadykernel_core::inverse::{invert_adjugate, invert_mtt, PerturbedMatrix};
use steadykernel_core::laplacian::build_system;
use steadykernel_core::spantree::{enumerate_rooted, kernel_basis};
use steadykernel_core::symexpr::FloatBindings;
use steadykernel_core::verify::{self, NumericSystem};
use steadykernel_core::{Error as CoreError, LabeledDigraph, RationalExpr, Symbol};

use crate::expr::{is_identifier, parse_expr_at, ParseError};
use crate::network::{parse_delta, parse_network, ParseOptions};
use crate::render::{self, *};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{}: {err}", path.display())]
    Parse { path: PathBuf, err: ParseError },
    #[error("{0}")]
    Core(#[from] CoreError),
    #[error("{0}")]
    Usage(String),
    #[error("csv output: {0}")]
    Csv(#[from] csv::Error),
    #[error("json output: {0}")]
    Json(#[from] serde_json::Error),
    #[error("output: {0}")]
    Output(#[from] std::io::Error),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Mtt,
    Adjugate,
}

impl From<Method> for InverseMethod {
    fn from(m: Method) -> Self {
        match m {
            Method::Mtt => InverseMethod::Mtt,
            Method::Adjugate => InverseMethod::Adjugate,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "steadykernel",
    version,
    about = "Exact steady states of labeled digraphs with synthesis and degradation"
)]
pub struct Cli {
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    pub format: Format,
    /// Algorithm used for inverting the nonsingular block.
    #[arg(long, value_enum, global = true, default_value_t = Method::Mtt)]
    pub inverse: Method,
    /// Substitute `let` definitions into edge labels.
    #[arg(long, global = true)]
    pub expand: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Strongly connected components, terminal flags and canonical order.
    Analyze { file: PathBuf },
    /// Decide whether a steady state exists.
    Check { file: PathBuf },
    /// Exact steady state, numeric too when every symbol is bound.
    SteadyState {
        file: PathBuf,
        /// Numeric value for a label symbol; repeatable.
        #[arg(long, value_name = "NAME=VALUE", num_args = 1..)]
        bind: Vec<String>,
        /// Comma-separated initial amounts in file vertex order.
        #[arg(long, value_name = "EXPR,...")]
        x0: Option<String>,
        /// Also print the R, L and Q matrices.
        #[arg(long)]
        matrices: bool,
    },
    /// Inverse of the nonsingular block, or of `L - diag(delta)` with
    /// `--delta`.
    Invert {
        file: PathBuf,
        /// File of `VERTEX : EXPR` lines.
        #[arg(long)]
        delta: Option<PathBuf>,
    },
    /// Kernel basis of the Laplacian, one column per terminal component.
    Kernel { file: PathBuf },
    /// Rooted spanning trees.
    Trees {
        file: PathBuf,
        /// Only trees rooted at this vertex; all roots by default.
        #[arg(long)]
        root: Option<String>,
    },
    /// Integrate the bound system with fixed-step Runge-Kutta.
    Simulate {
        file: PathBuf,
        /// Numeric value for a label symbol; repeatable.
        #[arg(long, value_name = "NAME=VALUE", num_args = 1..)]
        bind: Vec<String>,
        /// Comma-separated initial amounts; zeros by default.
        #[arg(long, value_name = "V,...")]
        x0: Option<String>,
        /// Step size; 0.01 over the fastest diagonal rate by default.
        #[arg(long)]
        dt: Option<f64>,
        /// End time; 50 over the slowest nonzero diagonal rate by default.
        #[arg(long = "t-end")]
        t_end: Option<f64>,
        /// Write the trajectory as CSV.
        #[arg(long, value_name = "PATH")]
        csv: Option<PathBuf>,
    },
}

/// Parses `args` (including the program name), runs the command and returns
/// the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn load(path: &Path, expand: bool) -> Result<LabeledDigraph, CliError> {
    let text = read(path)?;
    parse_network(&text, ParseOptions { expand })
        .map(|n| n.graph)
        .map_err(|err| CliError::Parse {
            path: path.to_path_buf(),
            err,
        })
}

fn emit<S: serde::Serialize>(out: &mut dyn Write, format: Format, report: &S, text: String) -> Result<(), CliError> {
    match format {
        Format::Text => out.write_all(text.as_bytes())?,
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, report)?;
            out.write_all(b"\n")?;
        }
    }
    Ok(())
}

pub fn parse_bindings(items: &[String]) -> Result<FloatBindings, CliError> {
    let mut b = FloatBindings::new();
    for item in items {
        let (name, value) = item
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("binding `{item}` is not NAME=VALUE")))?;
        let name = name.trim();
        if !is_identifier(name) {
            return Err(CliError::Usage(format!("`{name}` is not an identifier")));
        }
        let v: f64 = value
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("binding `{item}` has no numeric value")))?;
        if !v.is_finite() {
            return Err(CliError::Usage(format!("binding `{item}` is not finite")));
        }
        b.insert(Symbol::named(name), v);
    }
    Ok(b)
}

fn parse_x0_exprs(text: &str, n: usize) -> Result<Vec<RationalExpr>, CliError> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != n {
        return Err(CliError::Usage(format!("--x0 needs {n} values, got {}", parts.len())));
    }
    parts
        .iter()
        .map(|p| parse_expr_at(p, 1, 0, None).map_err(|e| CliError::Usage(format!("--x0: {e}"))))
        .collect()
}

fn parse_x0_numbers(text: &str, n: usize) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != n {
        return Err(CliError::Usage(format!("--x0 needs {n} values, got {}", parts.len())));
    }
    parts
        .iter()
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| CliError::Usage(format!("--x0: `{p}` is not a number")))
        })
        .collect()
}

fn names(g: &LabeledDigraph, verts: &[usize]) -> Vec<String> {
    verts.iter().map(|&v| g.name(v).to_string()).collect()
}

fn violations_json(a: &Analysis, verdict: &ExistenceVerdict) -> Vec<ViolationJson> {
    let comps = a.terminal_vertex_sets();
    verdict
        .violations
        .iter()
        .map(|v| ViolationJson {
            kind: kind_name(v.kind).to_string(),
            vertex: a.graph.name(v.synthesis_vertex).to_string(),
            label: render::expr(&v.label),
            terminal_components: v
                .terminal_components
                .iter()
                .map(|&c| names(&a.graph, &comps[c]))
                .collect(),
        })
        .collect()
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<i32, CliError> {
    let method = InverseMethod::from(cli.inverse);
    match &cli.command {
        Command::Analyze { file } => {
            let g = load(file, cli.expand)?;
            let a = Analysis::new(&g)?;
            let d = &a.decomposition;
            let components = d
                .components()
                .iter()
                .enumerate()
                .map(|(c, verts)| ComponentJson {
                    vertices: names(&g, verts),
                    terminal: d.is_terminal(c),
                    degradation_free: d.is_degradation_free_terminal(c),
                })
                .collect();
            let order: Vec<usize> = (0..g.len()).map(|c| a.original_index(c)).collect();
            let report = AnalyzeReport {
                vertices: g.vertex_names().to_vec(),
                components,
                canonical_order: names(&g, &order),
                weakly_connected: g.is_weakly_connected(),
                complementary_strongly_connected: a.complementary_strongly_connected(),
                stability: a.stability().into(),
            };
            emit(out, cli.format, &report, report.text())?;
            Ok(0)
        }
        Command::Check { file } => {
            let g = load(file, cli.expand)?;
            let a = Analysis::new(&g)?;
            let verdict = a.check_existence(method)?;
            let reach: Vec<usize> = reachability_violations(&a.canonical, &a.partition)
                .into_iter()
                .map(|c| a.original_index(c))
                .collect();
            let report = CheckReport {
                ok: verdict.ok(),
                violations: violations_json(&a, &verdict),
                reachability: names(&g, &reach),
            };
            emit(out, cli.format, &report, report.text())?;
            Ok(if report.ok { 0 } else { 2 })
        }
        Command::SteadyState {
            file,
            bind,
            x0,
            matrices,
        } => {
            let g = load(file, cli.expand)?;
            let bindings = parse_bindings(bind)?;
            let a = Analysis::new(&g)?;
            let x0 = x0.as_deref().map(|t| parse_x0_exprs(t, g.len())).transpose()?;
            let report = a.steady_state(x0.as_deref(), method)?;
            let json = steady_state_json(&a, &report, &bindings, *matrices)?;
            emit(out, cli.format, &json, json.text())?;
            Ok(if report.mode == Mode::NoSteadyState { 2 } else { 0 })
        }
        Command::Invert { file, delta } => {
            let g = load(file, cli.expand)?;
            let report = match delta {
                Some(path) => {
                    let text = read(path)?;
                    let delta = parse_delta(&text, &g).map_err(|err| CliError::Parse {
                        path: path.clone(),
                        err,
                    })?;
                    let p = PerturbedMatrix::new(g.core(), delta)?;
                    let inv = match method {
                        InverseMethod::Mtt => invert_mtt(&p)?,
                        InverseMethod::Adjugate => invert_adjugate(&p)?,
                    };
                    InverseReport {
                        order: g.vertex_names().to_vec(),
                        matrix: render::matrix(&inv),
                    }
                }
                None => {
                    let a = Analysis::new(&g)?;
                    let inv = steadykernel_core::equilibrium::invert_n(&a.partition, method)?;
                    let order: Vec<usize> = (0..a.partition.split()).map(|c| a.original_index(c)).collect();
                    InverseReport {
                        order: names(&g, &order),
                        matrix: render::matrix(&inv),
                    }
                }
            };
            emit(out, cli.format, &report, report.text())?;
            Ok(0)
        }
        Command::Kernel { file } => {
            let g = load(file, cli.expand)?;
            let d = scc_decompose(&g);
            let columns = d
                .terminal_components()
                .zip(kernel_basis(&g, &d))
                .map(|((_, verts), col)| KernelColumn {
                    component: names(&g, verts),
                    vector: render::exprs(&col),
                })
                .collect();
            let report = KernelReport {
                vertices: g.vertex_names().to_vec(),
                columns,
            };
            emit(out, cli.format, &report, report.text())?;
            Ok(0)
        }
        Command::Trees { file, root } => {
            let g = load(file, cli.expand)?;
            let roots: Vec<usize> = match root {
                Some(r) => vec![g.index_of(r)?],
                None => (0..g.len()).collect(),
            };
            let mut trees = Vec::new();
            for r in roots {
                for t in enumerate_rooted(&g, r)? {
                    trees.push(TreeJson {
                        root: g.name(r).to_string(),
                        edges: t
                            .edges
                            .iter()
                            .map(|&(i, j)| TreeEdge {
                                from: g.name(i).to_string(),
                                to: g.name(j).to_string(),
                                label: render::expr(g.label(i, j).expect("tree edge exists")),
                            })
                            .collect(),
                    });
                }
            }
            let report = TreesReport { trees };
            emit(out, cli.format, &report, report.text())?;
            Ok(0)
        }
        Command::Simulate {
            file,
            bind,
            x0,
            dt,
            t_end,
            csv,
        } => {
            let g = load(file, cli.expand)?;
            let bindings = parse_bindings(bind)?;
            let (report, diverged) = simulate(&g, &bindings, x0.as_deref(), *dt, *t_end, csv.as_deref(), method)?;
            emit(out, cli.format, &report, report.text())?;
            Ok(if diverged { 2 } else { 0 })
        }
    }
}

fn steady_state_json(
    a: &Analysis,
    report: &EquilibriumReport,
    bindings: &FloatBindings,
    with_matrices: bool,
) -> Result<SteadyStateReport, CliError> {
    let exists = report.mode != Mode::NoSteadyState;
    let (residual_ok, balance_ok) = if exists {
        a.check_identities(&report.x_es)?
    } else {
        (false, false)
    };
    let numeric = if exists && !bindings.is_empty() {
        Some(
            report
                .x_es
                .iter()
                .map(|e| e.eval_f64(bindings))
                .collect::<Result<Vec<_>, _>>()?,
        )
    } else {
        None
    };
    let matrices = match (&report.artifacts, with_matrices) {
        (Some(art), true) => {
            let order: Vec<usize> = (0..a.len()).map(|c| a.original_index(c)).collect();
            Some(MatricesJson {
                order: names(&a.graph, &order),
                r: render::matrix(&art.r),
                l: render::matrix(&art.l),
                q: render::matrix(&art.q),
            })
        }
        _ => None,
    };
    Ok(SteadyStateReport {
        mode: report.mode.as_str().to_string(),
        violations: violations_json(a, &report.verdict),
        vertices: a.graph.vertex_names().to_vec(),
        x_es: render::exprs(&report.x_es),
        stability: a.stability().into(),
        balance_ok,
        residual_ok,
        numeric,
        matrices,
    })
}

/// Relative net inflow above which a run without a steady state is reported
/// as diverging.
const DIVERGENCE_TOL: f64 = 1e-6;

fn simulate(
    g: &LabeledDigraph,
    bindings: &FloatBindings,
    x0: Option<&str>,
    dt: Option<f64>,
    t_end: Option<f64>,
    csv_path: Option<&Path>,
    method: InverseMethod,
) -> Result<(SimulateReport, bool), CliError> {
    let sys = NumericSystem::bind(&build_system(g), bindings)?;
    let x0 = match x0 {
        Some(t) => parse_x0_numbers(t, g.len())?,
        None => vec![0.0; g.len()],
    };
    let dt = dt.unwrap_or_else(|| sys.default_dt());
    let t_end = t_end.unwrap_or_else(|| sys.default_horizon());

    let mut writer = match csv_path {
        Some(p) => {
            let mut w = csv::Writer::from_path(p)?;
            let mut header = vec!["t".to_string()];
            header.extend(g.vertex_names().iter().cloned());
            w.write_record(&header)?;
            Some(w)
        }
        None => None,
    };
    let mut csv_error = None;
    let mut last = (0.0, x0.clone());
    let result = verify::integrate_with(&sys, &x0, dt, t_end, None, |t, x| {
        last = (t, x.to_vec());
        if let Some(w) = writer.as_mut() {
            let mut row = vec![t.to_string()];
            row.extend(x.iter().map(f64::to_string));
            if let Err(e) = w.write_record(&row) {
                csv_error.get_or_insert(e);
            }
        }
    });
    if let Some(e) = csv_error {
        return Err(e.into());
    }
    if let Some(mut w) = writer {
        w.flush()?;
    }
    let (state, time, steps, error_estimate, diverged) = match result {
        Ok(r) => (r.state, r.time, r.steps, r.error_estimate, false),
        Err(CoreError::Diverged { time }) => (last.1, time, 0, f64::NAN, true),
        Err(e) => return Err(e.into()),
    };

    let a = Analysis::new(g)?;
    let exact = a.steady_state(None, method)?;
    let steady_state = if exact.mode == Mode::NoSteadyState {
        None
    } else {
        let mut b = bindings.clone();
        for (v, x) in x0.iter().enumerate() {
            b.insert(initial_symbol(v), *x);
        }
        Some(
            exact
                .x_es
                .iter()
                .map(|e| e.eval_f64(&b))
                .collect::<Result<Vec<_>, _>>()?,
        )
    };
    let distance = steady_state.as_ref().map(|ss| verify::relative_distance(&state, ss));
    // Without a steady state the surplus inflow accumulates linearly, which
    // never overflows; a net inflow at the end counts as divergence.
    let inflow: f64 = sys.synthesis().iter().sum();
    let piling_up = -verify::balance_defect(&sys, &state) > DIVERGENCE_TOL * (1.0 + inflow);
    let diverged = diverged || (steady_state.is_none() && piling_up);
    Ok((
        SimulateReport {
            vertices: g.vertex_names().to_vec(),
            time,
            steps,
            dt,
            residual: verify::residual(&sys, &state),
            balance_defect: verify::balance_defect(&sys, &state),
            state,
            error_estimate,
            diverged,
            steady_state,
            distance,
        },
        diverged,
    ))
}
