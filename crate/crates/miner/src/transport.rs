use std::collections::VecDeque;
use std::path::{Path, PathBuf};
use std::sync::Mutex;
use std::time::Duration;

use serde::Deserialize;

use crate::MinerError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Response {
    pub status: u16,
    /// Lower-cased names.
    pub headers: Vec<(String, String)>,
    pub body: Vec<u8>,
}

impl Response {
    pub fn header(&self, name: &str) -> Option<&str> {
        let name = name.to_ascii_lowercase();
        self.headers
            .iter()
            .find(|(k, _)| *k == name)
            .map(|(_, v)| v.as_str())
    }
}

/// A blocking GET. Implementations must be shareable across threads.
pub trait Transport: Send + Sync {
    fn get(&self, url: &str, headers: &[(&str, &str)]) -> Result<Response, MinerError>;
}

pub struct HttpTransport {
    client: reqwest::blocking::Client,
}

impl HttpTransport {
    pub fn new() -> Result<Self, MinerError> {
        let client = reqwest::blocking::Client::builder()
            .user_agent(concat!("smellscan/", env!("CARGO_PKG_VERSION")))
            .timeout(Duration::from_secs(120))
            .build()
            .map_err(|e| MinerError::Transient {
                message: e.to_string(),
                retry_after: None,
            })?;
        Ok(HttpTransport { client })
    }
}

impl Transport for HttpTransport {
    fn get(&self, url: &str, headers: &[(&str, &str)]) -> Result<Response, MinerError> {
        let mut request = self.client.get(url);
        for (k, v) in headers {
            request = request.header(*k, *v);
        }
        let response = request.send().map_err(|e| MinerError::Transient {
            message: format!("request to {url} failed: {e}"),
            retry_after: None,
        })?;
        let status = response.status().as_u16();
        let headers = response
            .headers()
            .iter()
            .map(|(k, v)| {
                (
                    k.as_str().to_ascii_lowercase(),
                    v.to_str().unwrap_or("").to_string(),
                )
            })
            .collect();
        let body = response
            .bytes()
            .map_err(|e| MinerError::Transient {
                message: format!("reading response from {url} failed: {e}"),
                retry_after: None,
            })?
            .to_vec();
        Ok(Response {
            status,
            headers,
            body,
        })
    }
}

/// One recorded exchange. The body is either inline JSON (a JSON string is
/// taken as raw text) or a file next to the transcript.
#[derive(Debug, Clone, Deserialize)]
pub struct Interaction {
    /// Path and query, e.g. `/search/repositories?q=...`.
    pub request: String,
    #[serde(default = "ok_status")]
    pub status: u16,
    #[serde(default)]
    pub headers: std::collections::BTreeMap<String, String>,
    #[serde(default)]
    pub body: Option<serde_json::Value>,
    #[serde(default)]
    pub body_file: Option<PathBuf>,
}

fn ok_status() -> u16 {
    200
}

#[derive(Debug, Deserialize)]
struct Transcript {
    interactions: Vec<Interaction>,
}

/// Serves recorded responses in order of appearance per request target and
/// logs every request. Unknown targets fail like an unreachable network.
pub struct ReplayTransport {
    base: PathBuf,
    pending: Mutex<Vec<(String, VecDeque<Interaction>)>>,
    log: Mutex<Vec<String>>,
}

impl ReplayTransport {
    pub fn from_file(path: impl AsRef<Path>) -> Result<Self, MinerError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| MinerError::io(format!("cannot read transcript {}", path.display()), e))?;
        let transcript: Transcript = serde_json::from_str(&text)
            .map_err(|e| MinerError::Protocol(format!("transcript {}: {e}", path.display())))?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok(Self::new(base, transcript.interactions))
    }

    pub fn new(base: PathBuf, interactions: Vec<Interaction>) -> Self {
        let mut pending: Vec<(String, VecDeque<Interaction>)> = Vec::new();
        for i in interactions {
            match pending.iter_mut().find(|(k, _)| *k == i.request) {
                Some((_, queue)) => queue.push_back(i),
                None => pending.push((i.request.clone(), VecDeque::from([i]))),
            }
        }
        ReplayTransport {
            base,
            pending: Mutex::new(pending),
            log: Mutex::new(Vec::new()),
        }
    }

    /// Request targets seen so far, in order.
    pub fn requests(&self) -> Vec<String> {
        self.log.lock().unwrap().clone()
    }

    fn body(&self, i: &Interaction) -> Result<Vec<u8>, MinerError> {
        if let Some(file) = &i.body_file {
            let path = self.base.join(file);
            return std::fs::read(&path)
                .map_err(|e| MinerError::io(format!("cannot read {}", path.display()), e));
        }
        Ok(match &i.body {
            None => Vec::new(),
            Some(serde_json::Value::String(s)) => s.clone().into_bytes(),
            Some(v) => serde_json::to_vec(v).expect("json values serialize"),
        })
    }
}

fn target_of(url: &str) -> String {
    match url::Url::parse(url) {
        Ok(u) => match u.query() {
            Some(q) => format!("{}?{q}", u.path()),
            None => u.path().to_string(),
        },
        Err(_) => url.to_string(),
    }
}

impl Transport for ReplayTransport {
    fn get(&self, url: &str, _headers: &[(&str, &str)]) -> Result<Response, MinerError> {
        let target = target_of(url);
        self.log.lock().unwrap().push(target.clone());
        let interaction = {
            let mut pending = self.pending.lock().unwrap();
            let queue = pending
                .iter_mut()
                .find(|(k, _)| *k == target)
                .map(|(_, q)| q);
            match queue {
                // The last recorded response for a target keeps answering.
                Some(q) if q.len() > 1 => q.pop_front(),
                Some(q) => q.front().cloned(),
                None => None,
            }
        };
        let Some(i) = interaction else {
            return Err(MinerError::Transient {
                message: format!("no recorded response for {target}"),
                retry_after: None,
            });
        };
        Ok(Response {
            status: i.status,
            headers: i
                .headers
                .iter()
                .map(|(k, v)| (k.to_ascii_lowercase(), v.clone()))
                .collect(),
            body: self.body(&i)?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn interaction(request: &str, status: u16) -> Interaction {
        Interaction {
            request: request.into(),
            status,
            headers: Default::default(),
            body: Some(serde_json::json!("x")),
            body_file: None,
        }
    }

    #[test]
    fn replays_in_order_and_repeats_the_last() {
        let t = ReplayTransport::new(
            PathBuf::new(),
            vec![interaction("/a?p=1", 403), interaction("/a?p=1", 200)],
        );
        let statuses: Vec<u16> = (0..3)
            .map(|_| t.get("https://host/a?p=1", &[]).unwrap().status)
            .collect();
        assert_eq!(statuses, [403, 200, 200]);
        assert_eq!(t.requests().len(), 3);
    }

    #[test]
    fn unknown_target_is_transient() {
        let t = ReplayTransport::new(PathBuf::new(), vec![]);
        assert!(matches!(
            t.get("http://h/x", &[]),
            Err(MinerError::Transient { .. })
        ));
    }
}
