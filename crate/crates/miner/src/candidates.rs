use std::path::Path;

use chrono::SecondsFormat;
use serde::Serialize;

use crate::{MinerError, RepoDescriptor};

#[derive(Serialize)]
struct Candidate<'a> {
    full_name: &'a str,
    stars: u64,
    clone_url: &'a str,
    last_push: String,
}

/// One compact JSON object per descriptor, in the given order.
pub fn candidate_lines(descriptors: &[RepoDescriptor]) -> String {
    let mut out = String::new();
    for d in descriptors {
        let candidate = Candidate {
            full_name: &d.full_name,
            stars: d.stars,
            clone_url: &d.clone_url,
            last_push: d.last_push.to_rfc3339_opts(SecondsFormat::Secs, true),
        };
        out.push_str(&serde_json::to_string(&candidate).expect("candidates serialize"));
        out.push('\n');
    }
    out
}

/// Writes the candidate list for manual curation.
pub fn emit_candidates(descriptors: &[RepoDescriptor], path: &Path) -> Result<(), MinerError> {
    std::fs::write(path, candidate_lines(descriptors))
        .map_err(|e| MinerError::io(format!("cannot write {}", path.display()), e))
}
