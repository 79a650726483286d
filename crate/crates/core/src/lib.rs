//! Static detection of eight code smells in Python projects.
//!
//! The pipeline is `syntax` (parse, extract entities, count LOC) →
//! `metrics` (eight raw measurements) → `detect` (threshold comparison) →
//! `report` (file / project / corpus aggregation). `corpus` drives the
//! pipeline over directory trees.

pub mod corpus;
pub mod detect;
pub mod metrics;
pub mod report;
pub mod syntax;

pub use corpus::{scan_corpus, scan_project, ScanConfig, ScanError};
pub use detect::{
    detect_entity, detect_file, load_profile, ProfileError, Smell, SmellFinding, ThresholdProfile,
};
pub use metrics::{MetricKind, MetricOptions, MetricValue};
pub use report::{
    aggregate_project, rank_smells, serialize, summarize_corpus, CorpusSummary, FileReport, Format,
    ProjectReport, ReportError, SmellCounts,
};
pub use syntax::{
    count_loc, extract_entities, parse_file, parse_source, CodeEntity, SourceSpan, SourceUnit,
};
