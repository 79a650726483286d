//! Project directory walking and the per-file analysis pipeline.
//!
//! Files are analyzed independently, on a rayon pool when the `parallel`
//! feature is enabled and more than one job is requested, and always
//! reassembled in lexicographic path order so reports do not depend on the
//! worker count.

use std::path::{Component, Path, PathBuf};

use globset::{Glob, GlobBuilder, GlobSet, GlobSetBuilder};
use serde::Deserialize;
use walkdir::WalkDir;

use crate::detect::{detect_file, ThresholdProfile};
use crate::metrics::MetricOptions;
use crate::report::{
    aggregate_project, summarize_corpus, CorpusSummary, FileReport, ProjectReport, ReportError,
};
use crate::syntax::{count_loc, parse_file};

pub const DEFAULT_INCLUDE: &str = "**/*.py";

/// Hidden entries, virtual environments, installed packages and bytecode
/// caches. A path is excluded when it or any ancestor directory matches.
pub const DEFAULT_EXCLUDES: [&str; 6] = [
    "**/.*",
    "**/venv",
    "**/virtualenv",
    "**/site-packages",
    "**/__pycache__",
    "**/node_modules",
];

#[derive(Debug, thiserror::Error)]
pub enum ScanError {
    #[error("no project roots given")]
    NoRoots,
    #[error("cannot read project root {path}: {source}")]
    Root {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("invalid glob `{pattern}`: {message}")]
    Glob { pattern: String, message: String },
    #[error("invalid scan config: {0}")]
    Config(String),
    #[error("max_file_bytes must be positive")]
    ZeroMaxBytes,
    #[error("cannot start worker pool: {0}")]
    Pool(String),
    #[error(transparent)]
    Report(#[from] ReportError),
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScanConfig {
    pub roots: Vec<PathBuf>,
    pub include_glob: String,
    pub exclude_globs: Vec<String>,
    pub follow_symlinks: bool,
    pub max_file_bytes: u64,
    /// Worker threads; 0 means one per available core.
    pub jobs: usize,
    /// Leave a method's leading `self`/`cls` out of parameter counts.
    pub exclude_self: bool,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig {
            roots: Vec::new(),
            include_glob: DEFAULT_INCLUDE.to_string(),
            exclude_globs: DEFAULT_EXCLUDES.iter().map(|s| s.to_string()).collect(),
            follow_symlinks: false,
            max_file_bytes: 2_000_000,
            jobs: 0,
            exclude_self: false,
        }
    }
}

impl ScanConfig {
    /// Parse flat `key = value` text; unset keys keep their defaults.
    pub fn from_config_text(text: &str) -> Result<Self, ScanError> {
        let config: ScanConfig =
            toml::from_str(text).map_err(|e| ScanError::Config(e.message().to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), ScanError> {
        if self.max_file_bytes == 0 {
            return Err(ScanError::ZeroMaxBytes);
        }
        PathFilter::new(self).map(|_| ())
    }

    pub fn metric_options(&self) -> MetricOptions {
        MetricOptions {
            exclude_self: self.exclude_self,
        }
    }
}

fn glob(pattern: &str) -> Result<Glob, ScanError> {
    GlobBuilder::new(pattern)
        .literal_separator(true)
        .build()
        .map_err(|e| ScanError::Glob {
            pattern: pattern.to_string(),
            message: e.kind().to_string(),
        })
}

/// Compiled include/exclude rules over `/`-separated relative paths.
#[derive(Debug, Clone)]
pub struct PathFilter {
    include: GlobSet,
    exclude: GlobSet,
}

impl PathFilter {
    pub fn new(config: &ScanConfig) -> Result<Self, ScanError> {
        let build = |set: GlobSetBuilder| {
            set.build().map_err(|e| ScanError::Glob {
                pattern: String::new(),
                message: e.to_string(),
            })
        };
        let mut include = GlobSetBuilder::new();
        include.add(glob(&config.include_glob)?);
        let mut exclude = GlobSetBuilder::new();
        for pattern in &config.exclude_globs {
            exclude.add(glob(pattern)?);
        }
        Ok(PathFilter {
            include: build(include)?,
            exclude: build(exclude)?,
        })
    }

    /// True when the path itself (not its ancestors) matches an exclude glob.
    pub fn excludes_entry(&self, rel: &str) -> bool {
        self.exclude.is_match(rel)
    }

    /// True when the path or any of its ancestors matches an exclude glob.
    pub fn excludes(&self, rel: &str) -> bool {
        let mut prefix = String::new();
        for part in rel.split('/') {
            if !prefix.is_empty() {
                prefix.push('/');
            }
            prefix.push_str(part);
            if self.exclude.is_match(&prefix) {
                return true;
            }
        }
        false
    }

    pub fn selects(&self, rel: &str) -> bool {
        self.include.is_match(rel) && !self.excludes(rel)
    }
}

/// `/`-joined path of `path` relative to `root`.
pub fn relative_key(root: &Path, path: &Path) -> String {
    let rel = path.strip_prefix(root).unwrap_or(path);
    rel.components()
        .filter_map(|c| match c {
            Component::Normal(part) => Some(part.to_string_lossy().into_owned()),
            _ => None,
        })
        .collect::<Vec<_>>()
        .join("/")
}

/// Files under `root` selected by `config`, sorted by relative path, plus
/// warnings for skipped entries.
pub fn select_files(
    root: &Path,
    config: &ScanConfig,
) -> Result<(Vec<String>, Vec<String>), ScanError> {
    std::fs::read_dir(root).map_err(|source| ScanError::Root {
        path: root.to_path_buf(),
        source,
    })?;
    let filter = PathFilter::new(config)?;
    let mut files = Vec::new();
    let mut warnings = Vec::new();

    let walker = WalkDir::new(root)
        .follow_links(config.follow_symlinks)
        .sort_by_file_name()
        .into_iter()
        .filter_entry(|entry| {
            entry.depth() == 0 || !filter.excludes_entry(&relative_key(root, entry.path()))
        });
    for entry in walker {
        let entry = match entry {
            Ok(entry) => entry,
            Err(err) => {
                warnings.push(format!("skipping entry: {err}"));
                continue;
            }
        };
        if !entry.file_type().is_file() {
            continue;
        }
        let rel = relative_key(root, entry.path());
        if !filter.selects(&rel) {
            continue;
        }
        match entry.metadata() {
            Ok(meta) if meta.len() > config.max_file_bytes => warnings.push(format!(
                "{rel}: {} bytes exceeds max_file_bytes ({}), skipped",
                meta.len(),
                config.max_file_bytes
            )),
            _ => files.push(rel),
        }
    }
    files.sort();
    files.dedup();
    Ok((files, warnings))
}

/// Parse, measure and detect one file. The report's path is `rel`.
pub fn analyze_file(
    root: &Path,
    rel: &str,
    profile: &ThresholdProfile,
    options: MetricOptions,
) -> (FileReport, Vec<String>) {
    let mut unit = parse_file(root.join(rel));
    unit.path = PathBuf::from(rel);
    let mut warnings = std::mem::take(&mut unit.warnings);
    if !unit.parse_status.is_ok() {
        warnings.push(format!("{rel}: {}", unit.parse_status));
    }
    let findings = detect_file(&unit, profile, options);
    let report = FileReport {
        path: rel.to_string(),
        loc: count_loc(&unit) as u64,
        parse_status: unit.parse_status,
        findings,
    };
    (report, warnings)
}

/// Analyze files one after another on the calling thread.
pub fn analyze_sequential(
    root: &Path,
    files: &[String],
    profile: &ThresholdProfile,
    options: MetricOptions,
) -> Vec<(FileReport, Vec<String>)> {
    files
        .iter()
        .map(|rel| analyze_file(root, rel, profile, options))
        .collect()
}

/// Analyze files on a dedicated pool of `jobs` threads (0 = one per core).
/// Output order matches `files`.
#[cfg(feature = "parallel")]
pub fn analyze_parallel(
    root: &Path,
    files: &[String],
    profile: &ThresholdProfile,
    options: MetricOptions,
    jobs: usize,
) -> Result<Vec<(FileReport, Vec<String>)>, ScanError> {
    use rayon::prelude::*;

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| ScanError::Pool(e.to_string()))?;
    Ok(pool.install(|| {
        files
            .par_iter()
            .map(|rel| analyze_file(root, rel, profile, options))
            .collect()
    }))
}

/// Analyze the given relative paths, honoring `config.jobs`.
pub fn analyze_files(
    root: &Path,
    files: &[String],
    config: &ScanConfig,
    profile: &ThresholdProfile,
) -> Result<Vec<(FileReport, Vec<String>)>, ScanError> {
    let options = config.metric_options();
    #[cfg(feature = "parallel")]
    if config.jobs != 1 && files.len() > 1 {
        return analyze_parallel(root, files, profile, options, config.jobs);
    }
    Ok(analyze_sequential(root, files, profile, options))
}

/// Display name of a project root: its final path component.
pub fn project_name(root: &Path) -> String {
    let resolved = root.canonicalize().unwrap_or_else(|_| root.to_path_buf());
    resolved
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| resolved.display().to_string())
}

/// Analyze every selected file under `root` and aggregate.
pub fn scan_project(
    root: &Path,
    config: &ScanConfig,
    profile: &ThresholdProfile,
) -> Result<ProjectReport, ScanError> {
    if config.max_file_bytes == 0 {
        return Err(ScanError::ZeroMaxBytes);
    }
    let (files, mut warnings) = select_files(root, config)?;
    let analyzed = analyze_files(root, &files, config, profile)?;
    let mut reports = Vec::with_capacity(analyzed.len());
    for (report, file_warnings) in analyzed {
        warnings.extend(file_warnings);
        reports.push(report);
    }
    let mut project = aggregate_project(project_name(root), reports);
    warnings.append(&mut project.warnings);
    project.warnings = warnings;
    Ok(project)
}

/// One project report per root, then corpus statistics. `on_project` is
/// called as each project finishes.
pub fn scan_corpus_with(
    roots: &[PathBuf],
    config: &ScanConfig,
    profile: &ThresholdProfile,
    mut on_project: impl FnMut(&ProjectReport),
) -> Result<CorpusSummary, ScanError> {
    if roots.is_empty() {
        return Err(ScanError::NoRoots);
    }
    let mut projects = Vec::with_capacity(roots.len());
    for root in roots {
        let project = scan_project(root, config, profile)?;
        on_project(&project);
        projects.push(project);
    }
    Ok(summarize_corpus(projects)?)
}

pub fn scan_corpus(
    roots: &[PathBuf],
    config: &ScanConfig,
    profile: &ThresholdProfile,
) -> Result<CorpusSummary, ScanError> {
    scan_corpus_with(roots, config, profile, |_| {})
}

#[cfg(test)]
mod tests {
    use super::*;

    fn filter() -> PathFilter {
        PathFilter::new(&ScanConfig::default()).unwrap()
    }

    #[test]
    fn default_selection() {
        let f = filter();
        assert!(f.selects("a.py"));
        assert!(f.selects("pkg/sub/mod.py"));
        assert!(!f.selects("pkg/mod.pyc"));
        assert!(!f.selects(".hidden/a.py"));
        assert!(!f.selects("pkg/.git/hooks/x.py"));
        assert!(!f.selects("venv/lib/x.py"));
        assert!(!f.selects("env/lib/python3.9/site-packages/numpy/core.py"));
        assert!(!f.selects("src/__pycache__/m.py"));
        assert!(f.selects("envs/maze_env.py"));
    }

    #[test]
    fn config_text_overrides_defaults() {
        let cfg = ScanConfig::from_config_text(
            "exclude_globs = [\"**/tests\"]\nmax_file_bytes = 10\nfollow_symlinks = true\n",
        )
        .unwrap();
        assert_eq!(cfg.exclude_globs, vec!["**/tests".to_string()]);
        assert_eq!(cfg.max_file_bytes, 10);
        assert!(cfg.follow_symlinks);
        assert_eq!(cfg.include_glob, DEFAULT_INCLUDE);
    }

    #[test]
    fn bad_config_is_rejected() {
        assert!(matches!(
            ScanConfig::from_config_text("nope = 1"),
            Err(ScanError::Config(_))
        ));
        assert!(matches!(
            ScanConfig::from_config_text("max_file_bytes = 0"),
            Err(ScanError::ZeroMaxBytes)
        ));
        assert!(matches!(
            ScanConfig::from_config_text("include_glob = \"a[\""),
            Err(ScanError::Glob { .. })
        ));
    }

    #[test]
    fn relative_keys_use_forward_slashes() {
        let root = Path::new("/r");
        assert_eq!(relative_key(root, Path::new("/r/a/b.py")), "a/b.py");
    }
}
