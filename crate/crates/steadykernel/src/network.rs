//! Network files.
//!
//! ```text
//! # comment
//! let v = Vmax / (Km + S)     # optional named label
//! 1 -> 2 : k_1
//! * -> 1 : s                  # synthesis
//! 2 -> * : v                  # degradation
//! ```
//!
//! Vertices are created in order of first appearance. Repeated edges are
//! merged by summing their labels. Names defined with `let` stay opaque
//! symbols unless expansion is requested.

use std::collections::BTreeMap;

use steadykernel_core::graph::STAR;
use steadykernel_core::{Error as CoreError, LabeledDigraph, RationalExpr};

use crate::expr::{is_identifier, parse_expr_at, Definitions, ParseError};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ParseOptions {
    /// Substitute `let` definitions into the labels that use them.
    pub expand: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Network {
    pub graph: LabeledDigraph,
    /// `let` definitions in file order.
    pub definitions: Vec<(String, RationalExpr)>,
}

/// Text before any `#`.
fn strip_comment(line: &str) -> &str {
    line.split('#').next().unwrap_or("")
}

fn leading_ws(s: &str) -> usize {
    s.chars().take_while(|c| c.is_whitespace()).count()
}

/// Character column (one-based) of byte offset `byte` in `line`.
fn column_of(line: &str, byte: usize) -> usize {
    line[..byte].chars().count() + 1
}

fn check_vertex_name(name: &str, line: usize, col: usize) -> Result<(), ParseError> {
    if name.is_empty() {
        return Err(ParseError::new(line, col, "missing vertex name"));
    }
    if name.contains(':') {
        return Err(ParseError::new(line, col, format!("vertex name `{name}` contains `:`")));
    }
    if name.chars().any(char::is_whitespace) {
        return Err(ParseError::new(
            line,
            col,
            format!("vertex name `{name}` contains whitespace"),
        ));
    }
    Ok(())
}

pub fn parse_network(text: &str, opts: ParseOptions) -> Result<Network, ParseError> {
    let mut graph = LabeledDigraph::new();
    let mut definitions = Vec::new();
    let mut defs = Definitions::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = strip_comment(raw);
        if line.trim().is_empty() {
            continue;
        }
        let definition = line.trim_start().strip_prefix("let ").filter(|_| !line.contains("->"));
        if let Some(rest) = definition {
            let body_start = line.len() - rest.len();
            let (name, _) = rest
                .split_once('=')
                .ok_or_else(|| ParseError::new(line_no, column_of(line, body_start), "expected `let NAME = EXPR`"))?;
            let name_col = column_of(line, body_start + leading_ws(name));
            let name = name.trim();
            if !is_identifier(name) {
                return Err(ParseError::new(
                    line_no,
                    name_col,
                    format!("`{name}` is not an identifier"),
                ));
            }
            if definitions.iter().any(|(d, _)| d == name) {
                return Err(ParseError::new(line_no, name_col, format!("`{name}` is defined twice")));
            }
            let expr_start = body_start + rest.find('=').expect("split found it") + 1;
            let value = parse_expr_at(
                &line[expr_start..],
                line_no,
                column_of(line, expr_start) - 1,
                Some(&defs),
            )?;
            definitions.push((name.to_string(), value.clone()));
            if opts.expand {
                defs.insert(name.to_string(), value);
            }
            continue;
        }

        let arrow = line
            .find("->")
            .ok_or_else(|| ParseError::new(line_no, leading_ws(line) + 1, "expected `FROM -> TO : EXPR`"))?;
        let after_arrow = arrow + 2;
        let colon = line[after_arrow..]
            .find(':')
            .map(|c| c + after_arrow)
            .ok_or_else(|| ParseError::new(line_no, column_of(line, after_arrow), "expected `:` before the label"))?;
        let from_col = leading_ws(line) + 1;
        let from = line[..arrow].trim();
        let to_col = column_of(line, after_arrow + leading_ws(&line[after_arrow..colon]));
        let to = line[after_arrow..colon].trim();
        check_vertex_name(from, line_no, from_col)?;
        check_vertex_name(to, line_no, to_col)?;
        if to.contains("->") {
            return Err(ParseError::new(line_no, to_col, "vertex names cannot contain `->`"));
        }

        let label_start = colon + 1;
        let label_col = column_of(line, label_start + leading_ws(&line[label_start..]));
        let label = parse_expr_at(
            &line[label_start..],
            line_no,
            column_of(line, label_start) - 1,
            Some(&defs),
        )?;
        if label.is_zero() {
            return Err(ParseError::new(
                line_no,
                label_col,
                "label is zero; omit the edge instead",
            ));
        }
        if label.is_manifestly_negative() {
            return Err(ParseError::new(
                line_no,
                label_col,
                "label is negative; reverse the edge and negate the label",
            ));
        }

        let result = match (from == STAR, to == STAR) {
            (true, true) => return Err(ParseError::new(line_no, from_col, "`* -> *` is not an edge")),
            (true, false) => graph.add_synthesis(to, label),
            (false, true) => graph.add_degradation(from, label),
            (false, false) => graph.add_edge(from, to, label),
        };
        result.map_err(|e| match e {
            CoreError::SelfLoop(v) => ParseError::new(line_no, from_col, format!("self-loop on `{v}`")),
            CoreError::ZeroLabel(what) => {
                ParseError::new(line_no, label_col, format!("labels of {what} cancel to zero"))
            }
            other => ParseError::new(line_no, from_col, other.to_string()),
        })?;
    }
    Ok(Network { graph, definitions })
}

/// `VERTEX : EXPR` lines giving the perturbation `δ` of each listed vertex;
/// unlisted vertices get zero.
pub fn parse_delta(text: &str, graph: &LabeledDigraph) -> Result<Vec<RationalExpr>, ParseError> {
    let mut delta: BTreeMap<usize, RationalExpr> = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = strip_comment(raw);
        if line.trim().is_empty() {
            continue;
        }
        let col = leading_ws(line) + 1;
        let colon = line
            .find(':')
            .ok_or_else(|| ParseError::new(line_no, col, "expected `VERTEX : EXPR`"))?;
        let name = line[..colon].trim();
        let v = graph
            .index_of(name)
            .map_err(|_| ParseError::new(line_no, col, format!("unknown vertex `{name}`")))?;
        let value = parse_expr_at(&line[colon + 1..], line_no, column_of(line, colon + 1) - 1, None)?;
        if value.is_manifestly_negative() {
            return Err(ParseError::new(line_no, col, "perturbations must be non-negative"));
        }
        if delta.insert(v, value).is_some() {
            return Err(ParseError::new(line_no, col, format!("`{name}` is listed twice")));
        }
    }
    Ok((0..graph.len())
        .map(|v| delta.remove(&v).unwrap_or_else(RationalExpr::zero))
        .collect())
}
