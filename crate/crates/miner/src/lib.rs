//! Repository selection: keyword search ranked by stars, an activity
//! filter, archive acquisition and a JSON-lines candidate file for manual
//! curation.
//!
//! All network traffic goes through [`Transport`], so every operation can
//! be replayed from a recorded transcript.

mod acquire;
mod candidates;
mod client;
mod transport;

use chrono::{DateTime, Months, NaiveDate, Utc};
use serde::{Deserialize, Serialize};

pub use acquire::{acquire, acquire_all, checkout_dir, REVISION_MARKER};
pub use candidates::{candidate_lines, emit_candidates};
pub use client::{Backoff, Client, DEFAULT_API_URL, TOKEN_ENV};
pub use transport::{HttpTransport, Interaction, ReplayTransport, Response, Transport};

/// Months of inactivity after which a repository no longer counts as active.
pub const DEFAULT_ACTIVE_MONTHS: u32 = 24;
pub const DEFAULT_ACQUIRE_LIMIT: usize = 4;

#[derive(Debug, thiserror::Error)]
pub enum MinerError {
    #[error("invalid query: {0}")]
    InvalidQuery(String),
    #[error("credentials rejected: {0}")]
    Credential(String),
    #[error("{message}{}", retry_after.map(|s| format!(" (retry after {s}s)")).unwrap_or_default())]
    Transient {
        message: String,
        retry_after: Option<u64>,
    },
    #[error("unexpected API response: {0}")]
    Protocol(String),
    #[error("{context}: {source}")]
    Io {
        context: String,
        source: std::io::Error,
    },
}

impl MinerError {
    pub(crate) fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        MinerError::Io {
            context: context.into(),
            source,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepoQuery {
    /// Alternatives; a repository matching any of them qualifies.
    pub keywords: Vec<String>,
    pub language: String,
    pub min_stars: u64,
    pub pushed_after: NaiveDate,
    pub max_results: usize,
}

impl RepoQuery {
    pub fn new(keywords: Vec<String>) -> Self {
        RepoQuery {
            keywords,
            language: "Python".to_string(),
            min_stars: 0,
            pushed_after: active_since(Utc::now().date_naive(), DEFAULT_ACTIVE_MONTHS),
            max_results: 20,
        }
    }

    pub fn validate(&self) -> Result<(), MinerError> {
        if self.keywords.iter().all(|k| k.trim().is_empty()) {
            return Err(MinerError::InvalidQuery(
                "at least one keyword is required".into(),
            ));
        }
        if self.max_results == 0 {
            return Err(MinerError::InvalidQuery(
                "max_results must be positive".into(),
            ));
        }
        Ok(())
    }

    /// The `q` parameter of the search endpoint.
    pub fn search_terms(&self) -> String {
        let keywords: Vec<String> = self
            .keywords
            .iter()
            .map(|k| k.trim())
            .filter(|k| !k.is_empty())
            .map(|k| {
                if k.contains(' ') {
                    format!("\"{k}\"")
                } else {
                    k.to_string()
                }
            })
            .collect();
        format!(
            "{} language:{} stars:>={} pushed:>={}",
            keywords.join(" OR "),
            self.language,
            self.min_stars,
            self.pushed_after.format("%Y-%m-%d")
        )
    }

    pub fn accepts(&self, repo: &RepoDescriptor) -> bool {
        repo.stars >= self.min_stars && repo.last_push.date_naive() >= self.pushed_after
    }
}

/// Start of the activity window ending at `today`.
pub fn active_since(today: NaiveDate, months: u32) -> NaiveDate {
    today
        .checked_sub_months(Months::new(months))
        .unwrap_or(NaiveDate::MIN)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepoDescriptor {
    pub full_name: String,
    pub clone_url: String,
    pub stars: u64,
    pub last_push: DateTime<Utc>,
    pub default_branch: String,
}

/// Stars descending, then name, so ties do not depend on page order.
pub fn rank_by_stars(repos: &mut [RepoDescriptor]) {
    repos.sort_by(|a, b| {
        b.stars
            .cmp(&a.stars)
            .then_with(|| a.full_name.cmp(&b.full_name))
    });
}
