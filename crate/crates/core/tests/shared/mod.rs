//! Test helpers shared by several integration test targets.
#![allow(dead_code)]

pub mod golden;
pub mod invariants;

use polyenc::corpus::{load_manifest, Entry};
use polyenc::syntax::Problem;
use polyenc::tptp::{parse, print};
use std::path::Path;

pub fn corpus() -> &'static Path {
    Path::new(concat!(env!("CARGO_MANIFEST_DIR"), "/../../corpus"))
}

pub fn entry(name: &str) -> Entry {
    load_manifest(corpus()).unwrap().into_iter().find(|e| e.name() == name).unwrap()
}

/// Parses printed text and checks it prints back identically.
pub fn round_trip(p: &Problem) -> Result<Problem, String> {
    let text = print(p);
    let q = parse(&text).map_err(|e| format!("{e}\n{text}"))?;
    let again = print(&q);
    if again != text {
        return Err(format!("print is not a fixpoint:\n{text}\n---\n{again}"));
    }
    Ok(q)
}
