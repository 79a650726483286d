//! Shared fixtures for smellscan tests and benchmarks.
//!
//! * `fixtures/labeled`: one file per smell at the threshold, one just over
//!   it and one clean, with hand-written expected findings in
//!   `labels.json`.
//! * `fixtures/loc`: small files for line-count cross-checks.
//! * `fixtures/projects`: tiny project trees.
//! * [`synth`]: generated projects whose LOC and per-smell counts match the
//!   published per-repository table row for row.

use std::path::PathBuf;

use serde::Deserialize;

pub mod oracle;
pub mod synth;
pub mod table2;

pub fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

pub fn labeled_dir() -> PathBuf {
    fixtures_dir().join("labeled")
}

pub fn loc_dir() -> PathBuf {
    fixtures_dir().join("loc")
}

pub fn project_dir(name: &str) -> PathBuf {
    fixtures_dir().join("projects").join(name)
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
pub struct ExpectedFinding {
    pub smell: String,
    pub line: usize,
    pub measured: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
pub struct Label {
    pub file: String,
    pub findings: Vec<ExpectedFinding>,
}

/// Hand-written expectations for the labeled corpus.
pub fn labels() -> Vec<Label> {
    let text =
        std::fs::read_to_string(labeled_dir().join("labels.json")).expect("labels.json is bundled");
    serde_json::from_str(&text).expect("labels.json is valid")
}

/// Every `.py` file in a fixture directory, sorted.
pub fn python_files(dir: &std::path::Path) -> Vec<PathBuf> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .expect("fixture dir exists")
        .map(|e| e.expect("readable entry").path())
        .filter(|p| p.extension().is_some_and(|ext| ext == "py"))
        .collect();
    files.sort();
    files
}
