//! File formats, reports and the command-line front end for
//! `steadykernel-core`.

pub mod cli;
pub mod expr;
pub mod network;
pub mod render;

pub use expr::{parse_expr, ParseError};
pub use network::{parse_delta, parse_network, Network, ParseOptions};
