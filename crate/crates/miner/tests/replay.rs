use std::collections::BTreeMap;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Duration;

use chrono::NaiveDate;
use sha2::{Digest, Sha256};
use smellscan_miner::{
    acquire, acquire_all, candidate_lines, checkout_dir, emit_candidates, Backoff, Client,
    MinerError, ReplayTransport, RepoDescriptor, RepoQuery, REVISION_MARKER,
};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn query(max_results: usize) -> RepoQuery {
    RepoQuery {
        keywords: vec!["q-learning".into()],
        language: "Python".into(),
        min_stars: 50,
        pushed_after: NaiveDate::from_ymd_opt(2023, 1, 1).unwrap(),
        max_results,
    }
}

fn quick_backoff(retries: u32) -> Backoff {
    Backoff {
        initial: Duration::ZERO,
        max_retries: retries,
        max_delay: Duration::ZERO,
    }
}

fn replay(name: &str) -> (Arc<ReplayTransport>, Client) {
    let transport = Arc::new(ReplayTransport::from_file(fixture(name)).unwrap());
    let client = Client::new(transport.clone(), "https://api.test")
        .with_per_page(10)
        .with_backoff(quick_backoff(3));
    (transport, client)
}

#[test]
fn three_pages_of_ten() {
    let (transport, client) = replay("search_3x10.json");
    let repos = client.search(&query(100)).unwrap();
    assert_eq!(repos.len(), 30);
    assert_eq!(transport.requests().len(), 3);
    assert!(transport
        .requests()
        .iter()
        .enumerate()
        .all(|(i, r)| r.ends_with(&format!("page={}", i + 1))));
    assert!(repos.windows(2).all(|w| w[0].stars >= w[1].stars));
    assert!(repos.iter().all(|r| r.stars >= 50));
}

#[test]
fn truncates_to_max_results() {
    let (transport, client) = replay("search_3x10.json");
    let repos = client.search(&query(20)).unwrap();
    assert_eq!(repos.len(), 20);
    assert_eq!(transport.requests().len(), 2);
    assert!(repos.windows(2).all(|w| w[0].stars >= w[1].stars));
}

#[test]
fn filters_on_stars_and_activity() {
    let (_, client) = replay("search_filtered.json");
    let q = query(10);
    let repos = client.search(&q).unwrap();
    let names: Vec<&str> = repos.iter().map(|r| r.full_name.as_str()).collect();
    assert_eq!(
        names,
        ["lab01/qlearn-01", "lab04/qlearn-04", "lab05/qlearn-05"]
    );
    assert!(repos.iter().all(|r| q.accepts(r)));
}

#[test]
fn retries_after_a_rate_limit() {
    let (transport, client) = replay("search_rate_limited_once.json");
    let repos = client.search(&query(10)).unwrap();
    assert_eq!(repos.len(), 10);
    assert_eq!(transport.requests().len(), 2);
}

#[test]
fn persistent_rate_limit_is_transient_with_retry_after() {
    let (transport, client) = replay("search_rate_limited.json");
    match client.search(&query(10)) {
        Err(MinerError::Transient { retry_after, .. }) => assert_eq!(retry_after, Some(30)),
        other => panic!("unexpected {other:?}"),
    }
    assert_eq!(transport.requests().len(), 4);
}

#[test]
fn unauthorized_is_a_credential_error() {
    let (_, client) = replay("search_unauthorized.json");
    assert!(matches!(
        client.search(&query(10)),
        Err(MinerError::Credential(_))
    ));
}

#[test]
fn malformed_body_is_a_protocol_error() {
    let (_, client) = replay("search_malformed.json");
    assert!(matches!(
        client.search(&query(10)),
        Err(MinerError::Protocol(_))
    ));
}

#[test]
fn unreachable_network_is_transient() {
    let (_, client) = replay("acquire.json");
    assert!(matches!(
        client.search(&query(10)),
        Err(MinerError::Transient { .. })
    ));
}

#[test]
fn candidate_file_matches_golden() {
    let (_, client) = replay("search_3x10.json");
    let repos = client.search(&query(100)).unwrap();
    let golden = std::fs::read_to_string(fixture("candidates.golden.jsonl")).unwrap();
    assert_eq!(candidate_lines(&repos), golden);

    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("candidates.jsonl");
    emit_candidates(&repos, &out).unwrap();
    let first = std::fs::read(&out).unwrap();
    emit_candidates(&repos, &out).unwrap();
    assert_eq!(first, std::fs::read(&out).unwrap());
    assert_eq!(first, golden.as_bytes());
}

#[test]
fn empty_result_gives_empty_file() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("none.jsonl");
    emit_candidates(&[], &out).unwrap();
    assert_eq!(std::fs::read(&out).unwrap(), b"");
}

fn descriptor() -> RepoDescriptor {
    RepoDescriptor {
        full_name: "lab01/qlearn-01".into(),
        clone_url: "https://github.com/lab01/qlearn-01.git".into(),
        stars: 2330,
        last_push: "2024-02-15T10:01:00Z".parse().unwrap(),
        default_branch: "main".into(),
    }
}

#[derive(serde::Deserialize)]
struct Manifest {
    archive_sha256: String,
    files: BTreeMap<String, String>,
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

#[test]
fn acquired_tree_matches_archive_manifest() {
    let manifest: Manifest =
        serde_json::from_str(&std::fs::read_to_string(fixture("qlearn-01.manifest.json")).unwrap())
            .unwrap();
    let archive = std::fs::read(fixture("qlearn-01.tar.gz")).unwrap();
    assert_eq!(hex(&Sha256::digest(&archive)), manifest.archive_sha256);

    let (transport, client) = replay("acquire.json");
    let tmp = tempfile::tempdir().unwrap();
    let dest = tmp.path().join("checkout");
    acquire(&client, &descriptor(), &dest).unwrap();

    let mut found = BTreeMap::new();
    for entry in walkdir(&dest) {
        let rel = entry
            .strip_prefix(&dest)
            .unwrap()
            .to_string_lossy()
            .replace('\\', "/");
        if rel != REVISION_MARKER {
            found.insert(rel, hex(&Sha256::digest(std::fs::read(&entry).unwrap())));
        }
    }
    assert_eq!(found, manifest.files);
    assert!(!dest.join("link.py").exists());
    assert_eq!(transport.requests().len(), 2);

    // Same revision again: only the revision lookup is issued.
    acquire(&client, &descriptor(), &dest).unwrap();
    assert_eq!(transport.requests().len(), 3);
    assert!(transport.requests()[2].contains("/commits/"));
}

fn walkdir(root: &std::path::Path) -> Vec<PathBuf> {
    let mut out = Vec::new();
    let mut stack = vec![root.to_path_buf()];
    while let Some(dir) = stack.pop() {
        for entry in std::fs::read_dir(dir).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                stack.push(path);
            } else {
                out.push(path);
            }
        }
    }
    out
}

#[test]
fn acquire_all_uses_checkout_dirs() {
    let (_, client) = replay("acquire.json");
    let tmp = tempfile::tempdir().unwrap();
    let repos = vec![descriptor()];
    let results = acquire_all(&client, &repos, tmp.path(), 4);
    assert_eq!(results.len(), 1);
    let path = results.into_iter().next().unwrap().unwrap();
    assert_eq!(path, checkout_dir(tmp.path(), &repos[0]));
    assert!(path.join("src/agent.py").is_file());
}

#[test]
fn unwritable_destination_is_an_io_error() {
    let (_, client) = replay("acquire.json");
    let tmp = tempfile::tempdir().unwrap();
    let blocker = tmp.path().join("file");
    std::fs::write(&blocker, "x").unwrap();
    let err = acquire(&client, &descriptor(), &blocker.join("sub/dest")).unwrap_err();
    assert!(matches!(err, MinerError::Io { .. }), "{err:?}");
}
