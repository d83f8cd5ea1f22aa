#![allow(dead_code)]

use std::path::PathBuf;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use steadykernel::{parse_expr, parse_network, ParseOptions};
use steadykernel_core::testkit::DEFAULT_SEED;
use steadykernel_core::{LabeledDigraph, RationalExpr};

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

pub fn fixture(name: &str) -> LabeledDigraph {
    let text = std::fs::read_to_string(fixture_path(name)).expect("fixture readable");
    parse_network(&text, ParseOptions::default())
        .expect("fixture parses")
        .graph
}

pub const FIXTURES: [&str; 5] = [
    "three_cycle.net",
    "two_sinks.net",
    "exocytosis.net",
    "exocytosis_rest.net",
    "glycolysis.net",
];

pub fn e(text: &str) -> RationalExpr {
    parse_expr(text).unwrap_or_else(|err| panic!("{text}: {err}"))
}

/// `STEADYKERNEL_SEED` when set, otherwise the fixed default.
pub fn seed() -> u64 {
    std::env::var("STEADYKERNEL_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_SEED)
}

pub fn rng(stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed());
    r.set_stream(stream);
    r
}
