//! `smellscan` command line.
//!
//! Exit codes: 0 success without findings, 1 success with findings,
//! 2 usage or configuration error, 3 runtime failure. Reports go to stdout,
//! everything else to stderr.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use chrono::{NaiveDate, Utc};
use clap::{Args, Parser, Subcommand};
use smellscan_core::report::{Format, Render};
use smellscan_core::{
    load_profile, scan_project, ProfileError, ScanConfig, ScanError, ThresholdProfile,
};
use smellscan_miner::{
    acquire_all, active_since, emit_candidates, Client, HttpTransport, MinerError, ReplayTransport,
    RepoQuery, Transport, DEFAULT_ACQUIRE_LIMIT, DEFAULT_ACTIVE_MONTHS, DEFAULT_API_URL,
};

pub const EXIT_CLEAN: u8 = 0;
pub const EXIT_FINDINGS: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_RUNTIME: u8 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "smellscan",
    version,
    about = "Detect code smells in Python projects"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Analyze one project and print its report.
    Analyze {
        path: PathBuf,
        #[command(flatten)]
        scan: ScanArgs,
    },
    /// Analyze several projects and print corpus statistics.
    Scan {
        roots: Vec<PathBuf>,
        /// File listing one project root per line.
        #[arg(long)]
        roots_file: Option<PathBuf>,
        #[command(flatten)]
        scan: ScanArgs,
    },
    /// Search for candidate repositories and write a JSON-lines file.
    Mine(MineArgs),
    /// Show or save the effective thresholds.
    Profile {
        #[arg(long, conflicts_with = "write")]
        print: bool,
        #[arg(long, value_name = "PATH")]
        write: Option<PathBuf>,
        #[arg(long, value_name = "PATH")]
        thresholds: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct ScanArgs {
    /// json, csv or table.
    #[arg(long, default_value = "json")]
    format: String,
    #[arg(long, value_name = "PATH")]
    thresholds: Option<PathBuf>,
    /// Worker threads (0 = available parallelism).
    #[arg(long)]
    jobs: Option<usize>,
    /// Leave a method's leading self/cls out of parameter counts.
    #[arg(long)]
    exclude_self: bool,
    #[arg(long, value_name = "PATH")]
    scan_config: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct MineArgs {
    /// Comma-separated alternatives.
    #[arg(long, value_delimiter = ',', required = true)]
    keywords: Vec<String>,
    #[arg(long, default_value_t = 0)]
    min_stars: u64,
    /// YYYY-MM-DD; defaults to the start of the activity window.
    #[arg(long)]
    pushed_after: Option<NaiveDate>,
    #[arg(long, default_value_t = DEFAULT_ACTIVE_MONTHS)]
    active_months: u32,
    #[arg(long, default_value_t = 20)]
    max: usize,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value = DEFAULT_API_URL)]
    api_url: String,
    /// Serve requests from a recorded transcript instead of the network.
    #[arg(long, value_name = "PATH")]
    replay: Option<PathBuf>,
    #[arg(long, default_value_t = 100)]
    per_page: usize,
    /// Also download every candidate under this directory.
    #[arg(long, value_name = "DIR")]
    acquire: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_ACQUIRE_LIMIT)]
    acquire_limit: usize,
}

#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn runtime(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_RUNTIME,
            message: message.into(),
        }
    }
}

impl From<ProfileError> for Failure {
    fn from(e: ProfileError) -> Self {
        Failure::usage(e.to_string())
    }
}

impl From<ScanError> for Failure {
    fn from(e: ScanError) -> Self {
        match e {
            ScanError::Pool(_) => Failure::runtime(e.to_string()),
            ScanError::Root { ref source, .. } if source.kind() != std::io::ErrorKind::NotFound => {
                Failure::runtime(e.to_string())
            }
            _ => Failure::usage(e.to_string()),
        }
    }
}

impl From<MinerError> for Failure {
    fn from(e: MinerError) -> Self {
        match e {
            MinerError::InvalidQuery(_) => Failure::usage(e.to_string()),
            _ => Failure::runtime(e.to_string()),
        }
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_USAGE
            } else {
                EXIT_CLEAN
            };
            let rendered = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(rendered.as_bytes());
            return code;
        }
    };
    match dispatch(cli.command, stdout, stderr) {
        Ok(code) => code,
        Err(failure) => {
            let _ = writeln!(stderr, "error: {}", failure.message);
            failure.code
        }
    }
}

fn dispatch(
    command: Command,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<u8, Failure> {
    match command {
        Command::Analyze { path, scan } => cmd_analyze(&path, &scan, stdout, stderr),
        Command::Scan {
            roots,
            roots_file,
            scan,
        } => cmd_scan(roots, roots_file.as_deref(), &scan, stdout, stderr),
        Command::Mine(args) => cmd_mine(&args, stdout, stderr),
        Command::Profile {
            print,
            write,
            thresholds,
        } => cmd_profile(
            print,
            write.as_deref(),
            thresholds.as_deref(),
            stdout,
            stderr,
        ),
    }
}

fn read_text(path: &Path, what: &str) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("cannot read {what} {}: {e}", path.display())))
}

fn profile_from(path: Option<&Path>) -> Result<ThresholdProfile, Failure> {
    match path {
        Some(p) => Ok(load_profile(Some(&read_text(p, "thresholds file")?))?),
        None => Ok(load_profile(None)?),
    }
}

fn scan_setup(scan: &ScanArgs) -> Result<(Format, ScanConfig, ThresholdProfile), Failure> {
    let format: Format = scan
        .format
        .parse()
        .map_err(|e: smellscan_core::ReportError| Failure::usage(e.to_string()))?;
    let mut config = match &scan.scan_config {
        Some(p) => ScanConfig::from_config_text(&read_text(p, "scan config")?)?,
        None => ScanConfig::default(),
    };
    if let Some(jobs) = scan.jobs {
        config.jobs = jobs;
    }
    config.exclude_self |= scan.exclude_self;
    Ok((format, config, profile_from(scan.thresholds.as_deref())?))
}

fn emit(stdout: &mut dyn Write, bytes: &[u8]) -> Result<(), Failure> {
    stdout
        .write_all(bytes)
        .and_then(|_| stdout.flush())
        .map_err(|e| Failure::runtime(format!("cannot write report: {e}")))
}

fn warn_all(stderr: &mut dyn Write, warnings: &[String]) {
    for w in warnings {
        let _ = writeln!(stderr, "warning: {w}");
    }
}

fn findings_code(total: u64) -> u8 {
    if total > 0 {
        EXIT_FINDINGS
    } else {
        EXIT_CLEAN
    }
}

fn cmd_analyze(
    path: &Path,
    scan: &ScanArgs,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<u8, Failure> {
    let (format, config, profile) = scan_setup(scan)?;
    let report = scan_project(path, &config, &profile)?;
    warn_all(stderr, &report.warnings);
    emit(stdout, &report.render(format))?;
    Ok(findings_code(report.total_findings))
}

/// Roots listed one per line; blank lines and `#` comments are skipped and
/// relative entries resolve against the file's directory.
fn read_roots_file(path: &Path) -> Result<Vec<PathBuf>, Failure> {
    let text = read_text(path, "roots file")?;
    let base = path.parent().unwrap_or(Path::new(""));
    Ok(text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| base.join(l))
        .collect())
}

fn cmd_scan(
    mut roots: Vec<PathBuf>,
    roots_file: Option<&Path>,
    scan: &ScanArgs,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<u8, Failure> {
    let (format, config, profile) = scan_setup(scan)?;
    if let Some(file) = roots_file {
        roots.extend(read_roots_file(file)?);
    }
    if roots.is_empty() {
        roots = config.roots.clone();
    }
    if roots.is_empty() {
        return Err(Failure::usage("no project roots given"));
    }
    let summary = smellscan_core::corpus::scan_corpus_with(&roots, &config, &profile, |p| {
        warn_all(stderr, &p.warnings);
        let _ = writeln!(
            stderr,
            "scanned {}: {} files, {} LOC, {} findings",
            p.project_name, p.num_files, p.total_loc, p.total_findings
        );
    })?;
    emit(stdout, &summary.render(format))?;
    Ok(findings_code(summary.totals.total_findings))
}

fn cmd_mine(
    args: &MineArgs,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<u8, Failure> {
    if args.max == 0 {
        return Err(Failure::usage("--max must be positive"));
    }
    let query = RepoQuery {
        keywords: args.keywords.clone(),
        language: "Python".into(),
        min_stars: args.min_stars,
        pushed_after: args
            .pushed_after
            .unwrap_or_else(|| active_since(Utc::now().date_naive(), args.active_months)),
        max_results: args.max,
    };
    query.validate()?;
    let transport: Arc<dyn Transport> = match &args.replay {
        Some(path) => {
            Arc::new(ReplayTransport::from_file(path).map_err(|e| Failure::usage(e.to_string()))?)
        }
        None => Arc::new(HttpTransport::new()?),
    };
    let client = Client::new(transport, args.api_url.clone())
        .with_env_token()
        .with_per_page(args.per_page);
    let repos = client.search(&query)?;
    emit_candidates(&repos, &args.out)?;
    let _ = writeln!(
        stderr,
        "wrote {} candidates to {}",
        repos.len(),
        args.out.display()
    );

    if let Some(dir) = &args.acquire {
        let mut failed = 0;
        for (repo, result) in
            repos
                .iter()
                .zip(acquire_all(&client, &repos, dir, args.acquire_limit))
        {
            match result {
                Ok(path) => {
                    let _ = writeln!(stdout, "{}", path.display());
                }
                Err(e) => {
                    failed += 1;
                    let _ = writeln!(stderr, "error: {}: {e}", repo.full_name);
                }
            }
        }
        if failed > 0 {
            return Err(Failure::runtime(format!("{failed} acquisitions failed")));
        }
    }
    Ok(EXIT_CLEAN)
}

fn cmd_profile(
    print: bool,
    write: Option<&Path>,
    thresholds: Option<&Path>,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<u8, Failure> {
    let profile = profile_from(thresholds)?;
    let text = profile.to_config_text();
    match write {
        Some(path) => {
            std::fs::write(path, &text)
                .map_err(|e| Failure::runtime(format!("cannot write {}: {e}", path.display())))?;
            let _ = writeln!(stderr, "wrote thresholds to {}", path.display());
        }
        None => {
            // Printing is the default action.
            let _ = print;
            emit(stdout, text.as_bytes())?;
        }
    }
    Ok(EXIT_CLEAN)
}
