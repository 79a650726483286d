use std::sync::Arc;
use std::time::Duration;

use chrono::{DateTime, Utc};
use serde::Deserialize;

use crate::transport::{Response, Transport};
use crate::{rank_by_stars, MinerError, RepoDescriptor, RepoQuery};

pub const DEFAULT_API_URL: &str = "https://api.github.com";
pub const TOKEN_ENV: &str = "GITHUB_TOKEN";

/// The search endpoint serves at most this many results per query.
const SEARCH_RESULT_CAP: usize = 1000;

/// Exponential backoff on rate-limit responses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Backoff {
    pub initial: Duration,
    pub max_retries: u32,
    pub max_delay: Duration,
}

impl Default for Backoff {
    fn default() -> Self {
        Backoff {
            initial: Duration::from_secs(2),
            max_retries: 5,
            max_delay: Duration::from_secs(120),
        }
    }
}

impl Backoff {
    pub fn none() -> Self {
        Backoff {
            initial: Duration::ZERO,
            max_retries: 0,
            max_delay: Duration::ZERO,
        }
    }

    fn delay(&self, attempt: u32, hint: Option<u64>) -> Duration {
        let exp = self.initial.saturating_mul(1u32 << attempt.min(16));
        let wait = hint.map(Duration::from_secs).map_or(exp, |h| h.max(exp));
        wait.min(self.max_delay)
    }
}

#[derive(Clone)]
pub struct Client {
    transport: Arc<dyn Transport>,
    api_url: String,
    token: Option<String>,
    backoff: Backoff,
    per_page: usize,
}

#[derive(Deserialize)]
struct SearchPage {
    total_count: u64,
    items: Vec<SearchItem>,
}

#[derive(Deserialize)]
struct SearchItem {
    full_name: String,
    clone_url: String,
    stargazers_count: u64,
    pushed_at: DateTime<Utc>,
    default_branch: String,
}

impl From<SearchItem> for RepoDescriptor {
    fn from(item: SearchItem) -> Self {
        RepoDescriptor {
            full_name: item.full_name,
            clone_url: item.clone_url,
            stars: item.stargazers_count,
            last_push: item.pushed_at,
            default_branch: item.default_branch,
        }
    }
}

impl Client {
    pub fn new(transport: Arc<dyn Transport>, api_url: impl Into<String>) -> Self {
        Client {
            transport,
            api_url: api_url.into().trim_end_matches('/').to_string(),
            token: None,
            backoff: Backoff::default(),
            per_page: 100,
        }
    }

    pub fn with_token(mut self, token: Option<String>) -> Self {
        self.token = token.filter(|t| !t.is_empty());
        self
    }

    /// Reads the token from the environment.
    pub fn with_env_token(self) -> Self {
        self.with_token(std::env::var(TOKEN_ENV).ok())
    }

    pub fn with_backoff(mut self, backoff: Backoff) -> Self {
        self.backoff = backoff;
        self
    }

    pub fn with_per_page(mut self, per_page: usize) -> Self {
        self.per_page = per_page.clamp(1, 100);
        self
    }

    pub fn api_url(&self) -> &str {
        &self.api_url
    }

    /// GET with authentication, rate-limit retries and status mapping.
    pub fn get(&self, url: &str, accept: &str) -> Result<Response, MinerError> {
        let auth = self.token.as_ref().map(|t| format!("Bearer {t}"));
        let mut headers = vec![("Accept", accept), ("X-GitHub-Api-Version", "2022-11-28")];
        if let Some(auth) = &auth {
            headers.push(("Authorization", auth.as_str()));
        }
        let mut attempt = 0;
        loop {
            let response = self.transport.get(url, &headers)?;
            match response.status {
                200..=299 => return Ok(response),
                401 => {
                    return Err(MinerError::Credential(format!(
                        "{url} answered 401; check {TOKEN_ENV}"
                    )))
                }
                403 | 429 if is_rate_limited(&response) => {
                    let hint = retry_after(&response);
                    if attempt >= self.backoff.max_retries {
                        return Err(MinerError::Transient {
                            message: format!("rate limit persisted after {attempt} retries"),
                            retry_after: hint,
                        });
                    }
                    std::thread::sleep(self.backoff.delay(attempt, hint));
                    attempt += 1;
                }
                403 => {
                    return Err(MinerError::Credential(format!(
                        "{url} answered 403 forbidden"
                    )))
                }
                500..=599 => {
                    return Err(MinerError::Transient {
                        message: format!("{url} answered {}", response.status),
                        retry_after: retry_after(&response),
                    })
                }
                status => return Err(MinerError::Protocol(format!("{url} answered {status}"))),
            }
        }
    }

    fn search_url(&self, query: &RepoQuery, page: usize) -> String {
        let params = url::form_urlencoded::Serializer::new(String::new())
            .append_pair("q", &query.search_terms())
            .append_pair("sort", "stars")
            .append_pair("order", "desc")
            .append_pair("per_page", &self.per_page.to_string())
            .append_pair("page", &page.to_string())
            .finish();
        format!("{}/search/repositories?{params}", self.api_url)
    }

    /// Pages through the search endpoint one request at a time, then keeps
    /// repositories passing the star and activity filters, best first.
    pub fn search(&self, query: &RepoQuery) -> Result<Vec<RepoDescriptor>, MinerError> {
        query.validate()?;
        let mut found: Vec<RepoDescriptor> = Vec::new();
        let mut page = 1;
        loop {
            let response =
                self.get(&self.search_url(query, page), "application/vnd.github+json")?;
            let parsed: SearchPage = serde_json::from_slice(&response.body)
                .map_err(|e| MinerError::Protocol(format!("search page {page}: {e}")))?;
            let received = parsed.items.len();
            found.extend(
                parsed
                    .items
                    .into_iter()
                    .map(RepoDescriptor::from)
                    .filter(|r| query.accepts(r)),
            );
            let seen = (page - 1) * self.per_page + received;
            let exhausted = received < self.per_page
                || seen as u64 >= parsed.total_count
                || seen >= SEARCH_RESULT_CAP;
            if exhausted || found.len() >= query.max_results {
                break;
            }
            page += 1;
        }
        rank_by_stars(&mut found);
        found.dedup_by(|a, b| a.full_name == b.full_name);
        found.truncate(query.max_results);
        Ok(found)
    }
}

fn is_rate_limited(r: &Response) -> bool {
    r.status == 429
        || r.header("x-ratelimit-remaining") == Some("0")
        || r.header("retry-after").is_some()
}

/// Seconds to wait, from `Retry-After` or the rate-limit reset time.
fn retry_after(r: &Response) -> Option<u64> {
    if let Some(s) = r.header("retry-after").and_then(|v| v.trim().parse().ok()) {
        return Some(s);
    }
    let reset: i64 = r.header("x-ratelimit-reset")?.trim().parse().ok()?;
    Some((reset - Utc::now().timestamp()).max(0) as u64)
}
