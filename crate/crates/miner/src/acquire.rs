use std::fs;
use std::io::Read;
use std::path::{Component, Path, PathBuf};

use flate2::read::GzDecoder;
use rayon::prelude::*;

use crate::client::Client;
use crate::{MinerError, RepoDescriptor};

/// File inside an acquired tree naming the revision it holds.
pub const REVISION_MARKER: &str = ".smellscan-revision";

/// Directory name for a repository under an acquisition root.
pub fn checkout_dir(root: &Path, repo: &RepoDescriptor) -> PathBuf {
    root.join(repo.full_name.replace('/', "__"))
}

fn head_revision(client: &Client, repo: &RepoDescriptor) -> Result<String, MinerError> {
    let url = format!(
        "{}/repos/{}/commits/{}",
        client.api_url(),
        repo.full_name,
        repo.default_branch
    );
    let response = client.get(&url, "application/vnd.github.sha")?;
    let sha = String::from_utf8_lossy(&response.body).trim().to_string();
    if sha.is_empty() || !sha.chars().all(|c| c.is_ascii_hexdigit()) {
        return Err(MinerError::Protocol(format!(
            "{}: bad revision `{sha}`",
            repo.full_name
        )));
    }
    Ok(sha)
}

/// Path of an archive member with its top-level directory removed, or
/// `None` for the top-level entry itself. Absolute and `..` paths are
/// rejected.
fn strip_top(path: &Path) -> Result<Option<PathBuf>, MinerError> {
    let mut out = PathBuf::new();
    for (i, component) in path.components().enumerate() {
        match component {
            Component::Normal(part) if i > 0 => out.push(part),
            Component::Normal(_) => {}
            Component::CurDir => {}
            _ => {
                return Err(MinerError::Protocol(format!(
                    "archive member escapes its root: {}",
                    path.display()
                )))
            }
        }
    }
    Ok((!out.as_os_str().is_empty()).then_some(out))
}

/// Unpacks a gzip tarball into `dest`, dropping the leading directory.
/// Only regular files and directories are materialized.
pub(crate) fn unpack(archive: impl Read, dest: &Path) -> Result<usize, MinerError> {
    let mut tar = tar::Archive::new(GzDecoder::new(archive));
    let bad = |e: std::io::Error| MinerError::Protocol(format!("corrupt archive: {e}"));
    let mut files = 0;
    for entry in tar.entries().map_err(bad)? {
        let mut entry = entry.map_err(bad)?;
        let path = entry.path().map_err(bad)?.into_owned();
        let Some(rel) = strip_top(&path)? else {
            continue;
        };
        let target = dest.join(&rel);
        match entry.header().entry_type() {
            tar::EntryType::Directory => {
                fs::create_dir_all(&target)
                    .map_err(|e| MinerError::io(target.display().to_string(), e))?;
            }
            tar::EntryType::Regular | tar::EntryType::Continuous => {
                if let Some(parent) = target.parent() {
                    fs::create_dir_all(parent)
                        .map_err(|e| MinerError::io(parent.display().to_string(), e))?;
                }
                let mut out = fs::File::create(&target)
                    .map_err(|e| MinerError::io(target.display().to_string(), e))?;
                std::io::copy(&mut entry, &mut out).map_err(bad)?;
                files += 1;
            }
            _ => {}
        }
    }
    Ok(files)
}

/// Materializes the default branch of `repo` at `dest`. A `dest` that
/// already holds the current revision is left untouched.
pub fn acquire(client: &Client, repo: &RepoDescriptor, dest: &Path) -> Result<PathBuf, MinerError> {
    let sha = head_revision(client, repo)?;
    let marker = dest.join(REVISION_MARKER);
    if fs::read_to_string(&marker).is_ok_and(|held| held.trim() == sha) {
        return Ok(dest.to_path_buf());
    }

    let url = format!(
        "{}/repos/{}/tarball/{sha}",
        client.api_url(),
        repo.full_name
    );
    let archive = client.get(&url, "application/vnd.github+json")?;

    let parent = dest
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    fs::create_dir_all(parent).map_err(|e| MinerError::io(parent.display().to_string(), e))?;
    let staging = tempfile::Builder::new()
        .prefix(".acquire-")
        .tempdir_in(parent)
        .map_err(|e| MinerError::io(parent.display().to_string(), e))?;
    unpack(archive.body.as_slice(), staging.path())?;
    fs::write(staging.path().join(REVISION_MARKER), format!("{sha}\n"))
        .map_err(|e| MinerError::io(staging.path().display().to_string(), e))?;

    if dest.exists() {
        fs::remove_dir_all(dest).map_err(|e| MinerError::io(dest.display().to_string(), e))?;
    }
    let staged = staging.keep();
    fs::rename(&staged, dest).map_err(|e| MinerError::io(dest.display().to_string(), e))?;
    Ok(dest.to_path_buf())
}

/// Acquires each repository under `root`, at most `limit` at a time.
/// Results follow the input order.
pub fn acquire_all(
    client: &Client,
    repos: &[RepoDescriptor],
    root: &Path,
    limit: usize,
) -> Vec<Result<PathBuf, MinerError>> {
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(limit.max(1))
        .build()
    {
        Ok(pool) => pool,
        Err(e) => {
            return repos
                .iter()
                .map(|_| {
                    Err(MinerError::Transient {
                        message: e.to_string(),
                        retry_after: None,
                    })
                })
                .collect()
        }
    };
    pool.install(|| {
        repos
            .par_iter()
            .map(|repo| acquire(client, repo, &checkout_dir(root, repo)))
            .collect()
    })
}
