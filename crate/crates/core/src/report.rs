//! Aggregation of findings into file, project and corpus reports, and their
//! JSON / CSV / table renderings.

use std::fmt::Write as _;
use std::ops::{Add, AddAssign, Index};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::detect::{Smell, SmellFinding};
use crate::syntax::{ParseStatus, SourceSpan};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ReportError {
    #[error("cannot summarize an empty corpus")]
    EmptyCorpus,
    #[error("unknown format `{0}` (expected json, csv or table)")]
    UnknownFormat(String),
}

/// Finding counts indexed by smell, in column order.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct SmellCounts([u64; 8]);

impl SmellCounts {
    pub fn new(counts: [u64; 8]) -> Self {
        SmellCounts(counts)
    }

    pub fn from_findings<'a>(findings: impl IntoIterator<Item = &'a SmellFinding>) -> Self {
        let mut counts = SmellCounts::default();
        for f in findings {
            counts.0[f.smell as usize] += 1;
        }
        counts
    }

    pub fn get(&self, smell: Smell) -> u64 {
        self.0[smell as usize]
    }

    pub fn total(&self) -> u64 {
        self.0.iter().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Smell, u64)> + '_ {
        Smell::ALL.into_iter().map(|s| (s, self.get(s)))
    }

    pub fn as_array(&self) -> [u64; 8] {
        self.0
    }
}

impl Index<Smell> for SmellCounts {
    type Output = u64;

    fn index(&self, smell: Smell) -> &u64 {
        &self.0[smell as usize]
    }
}

impl Add for SmellCounts {
    type Output = SmellCounts;

    fn add(mut self, rhs: SmellCounts) -> SmellCounts {
        self += rhs;
        self
    }
}

impl AddAssign for SmellCounts {
    fn add_assign(&mut self, rhs: SmellCounts) {
        for (a, b) in self.0.iter_mut().zip(rhs.0) {
            *a += b;
        }
    }
}

impl std::iter::Sum for SmellCounts {
    fn sum<I: Iterator<Item = SmellCounts>>(iter: I) -> Self {
        iter.fold(SmellCounts::default(), Add::add)
    }
}

#[allow(non_snake_case)]
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CountsDoc {
    LM: u64,
    LC: u64,
    LPL: u64,
    LMC: u64,
    LSC: u64,
    LTCE: u64,
    MNC: u64,
    LLF: u64,
}

impl Serialize for SmellCounts {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let [lm, lc, lpl, lmc, lsc, ltce, mnc, llf] = self.0;
        CountsDoc {
            LM: lm,
            LC: lc,
            LPL: lpl,
            LMC: lmc,
            LSC: lsc,
            LTCE: ltce,
            MNC: mnc,
            LLF: llf,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SmellCounts {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let d = CountsDoc::deserialize(deserializer)?;
        Ok(SmellCounts([
            d.LM, d.LC, d.LPL, d.LMC, d.LSC, d.LTCE, d.MNC, d.LLF,
        ]))
    }
}

/// Findings of a single file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FileReport {
    /// Relative to the project root, `/`-separated.
    pub path: String,
    pub loc: u64,
    pub parse_status: ParseStatus,
    pub findings: Vec<SmellFinding>,
}

impl FileReport {
    pub fn counts_by_smell(&self) -> SmellCounts {
        SmellCounts::from_findings(&self.findings)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProjectReport {
    pub project_name: String,
    pub num_files: u64,
    pub total_loc: u64,
    pub counts_by_smell: SmellCounts,
    pub total_findings: u64,
    /// Findings per 100 LOC, rounded half-up to two decimals.
    pub density_pct: f64,
    pub files: Vec<FileReport>,
    /// Diagnostics for stderr; not serialized.
    pub warnings: Vec<String>,
}

impl ProjectReport {
    /// Density at full precision, for statistics.
    pub fn exact_density_pct(&self) -> f64 {
        exact_density(self.total_findings, self.total_loc)
    }

    /// Per-file count of one smell, largest first (ties by path), omitting
    /// files without that smell.
    pub fn file_breakdown(&self, smell: Smell) -> Vec<(&str, u64)> {
        let mut rows: Vec<(&str, u64)> = self
            .files
            .iter()
            .map(|f| (f.path.as_str(), f.counts_by_smell().get(smell)))
            .filter(|&(_, n)| n > 0)
            .collect();
        rows.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
        rows
    }
}

fn exact_density(findings: u64, loc: u64) -> f64 {
    if loc == 0 {
        0.0
    } else {
        (findings as f64 * 100.0) / loc as f64
    }
}

/// `100 * findings / loc` rounded half-up to two decimals, computed in
/// integers so the rounding is exact.
pub fn density_pct(findings: u64, loc: u64) -> f64 {
    if loc == 0 {
        return 0.0;
    }
    let numerator = u128::from(findings) * 10_000;
    let hundredths = (2 * numerator + u128::from(loc)) / (2 * u128::from(loc));
    hundredths as f64 / 100.0
}

/// Half-up rounding of a non-negative value to two decimals.
pub fn round2(x: f64) -> f64 {
    (x * 100.0).round() / 100.0
}

/// Sum a project's file reports. Failed files contribute LOC only.
pub fn aggregate_project(name: impl Into<String>, files: Vec<FileReport>) -> ProjectReport {
    let project_name = name.into();
    let counts: SmellCounts = files.iter().map(FileReport::counts_by_smell).sum();
    let total_loc: u64 = files.iter().map(|f| f.loc).sum();
    let total_findings = counts.total();
    let mut warnings = Vec::new();
    if files.is_empty() {
        warnings.push(format!("{project_name}: no Python files found"));
    }
    if total_loc == 0 {
        warnings.push(format!(
            "{project_name}: total LOC is 0, density reported as 0.00"
        ));
    }
    ProjectReport {
        num_files: files.len() as u64,
        total_loc,
        counts_by_smell: counts,
        total_findings,
        density_pct: density_pct(total_findings, total_loc),
        files,
        warnings,
        project_name,
    }
}

/// A project known only by its table row: counts and LOC, no files.
pub fn project_from_counts(
    name: impl Into<String>,
    num_files: u64,
    total_loc: u64,
    counts: SmellCounts,
) -> ProjectReport {
    let total_findings = counts.total();
    ProjectReport {
        project_name: name.into(),
        num_files,
        total_loc,
        counts_by_smell: counts,
        total_findings,
        density_pct: density_pct(total_findings, total_loc),
        files: Vec::new(),
        warnings: Vec::new(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorpusTotals {
    pub num_files: u64,
    pub total_loc: u64,
    pub counts_by_smell: SmellCounts,
    pub total_findings: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorpusSummary {
    pub projects: Vec<ProjectReport>,
    /// Unweighted mean of per-project densities.
    pub mean_density_pct: f64,
    /// Sample standard deviation (n - 1) of per-project densities.
    pub stddev_density_pct: f64,
    /// Set when there is a single project and the deviation is undefined.
    pub degenerate_sample: bool,
    pub max_density_project: String,
    pub totals: CorpusTotals,
}

impl CorpusSummary {
    pub fn findings_per_file(&self) -> f64 {
        if self.totals.num_files == 0 {
            0.0
        } else {
            self.totals.total_findings as f64 / self.totals.num_files as f64
        }
    }
}

/// Corpus statistics over per-project densities.
pub fn summarize_corpus(projects: Vec<ProjectReport>) -> Result<CorpusSummary, ReportError> {
    if projects.is_empty() {
        return Err(ReportError::EmptyCorpus);
    }
    let densities: Vec<f64> = projects
        .iter()
        .map(ProjectReport::exact_density_pct)
        .collect();
    let n = densities.len() as f64;
    let mean = densities.iter().sum::<f64>() / n;
    let degenerate_sample = projects.len() < 2;
    let stddev = if degenerate_sample {
        0.0
    } else {
        (densities.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
    };

    let max_density_project = projects
        .iter()
        .zip(&densities)
        .max_by(|(pa, da), (pb, db)| {
            da.total_cmp(db)
                .then_with(|| pb.project_name.cmp(&pa.project_name))
        })
        .map(|(p, _)| p.project_name.clone())
        .expect("non-empty");

    let totals = CorpusTotals {
        num_files: projects.iter().map(|p| p.num_files).sum(),
        total_loc: projects.iter().map(|p| p.total_loc).sum(),
        counts_by_smell: projects.iter().map(|p| p.counts_by_smell).sum(),
        total_findings: projects.iter().map(|p| p.total_findings).sum(),
    };

    Ok(CorpusSummary {
        projects,
        mean_density_pct: mean,
        stddev_density_pct: stddev,
        degenerate_sample,
        max_density_project,
        totals,
    })
}

/// Anything that carries per-smell totals.
pub trait SmellTotals {
    fn smell_counts(&self) -> SmellCounts;
}

impl SmellTotals for SmellCounts {
    fn smell_counts(&self) -> SmellCounts {
        *self
    }
}

impl SmellTotals for ProjectReport {
    fn smell_counts(&self) -> SmellCounts {
        self.counts_by_smell
    }
}

impl SmellTotals for CorpusSummary {
    fn smell_counts(&self) -> SmellCounts {
        self.totals.counts_by_smell
    }
}

/// Smells by descending count; equal counts keep column order.
pub fn rank_smells(report: &impl SmellTotals) -> Vec<(Smell, u64)> {
    let mut ranked: Vec<(Smell, u64)> = report.smell_counts().iter().collect();
    ranked.sort_by_key(|&(_, n)| std::cmp::Reverse(n));
    ranked
}

// ---------------------------------------------------------------------------
// Serialization

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Table,
}

impl FromStr for Format {
    type Err = ReportError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "table" | "text" => Ok(Format::Table),
            _ => Err(ReportError::UnknownFormat(s.to_string())),
        }
    }
}

#[derive(Serialize, Deserialize, Debug, PartialEq)]
#[serde(deny_unknown_fields)]
struct FindingDoc {
    smell: Smell,
    line: usize,
    col: usize,
    measured: u64,
    threshold: u64,
    entity: Option<String>,
}

#[derive(Serialize, Deserialize, Debug, PartialEq)]
#[serde(deny_unknown_fields)]
struct FileDoc {
    path: String,
    loc: u64,
    parse_status: ParseStatus,
    findings: Vec<FindingDoc>,
}

#[derive(Serialize, Deserialize, Debug, PartialEq)]
#[serde(deny_unknown_fields)]
struct ProjectDoc {
    project: String,
    num_files: u64,
    total_loc: u64,
    smells: SmellCounts,
    total_findings: u64,
    density_pct: f64,
    files: Vec<FileDoc>,
}

#[derive(Serialize, Deserialize, Debug, PartialEq)]
#[serde(deny_unknown_fields)]
struct TotalsDoc {
    num_files: u64,
    total_loc: u64,
    smells: SmellCounts,
    total_findings: u64,
    density_pct: f64,
}

#[derive(Serialize, Deserialize, Debug, PartialEq)]
#[serde(deny_unknown_fields)]
struct CorpusDoc {
    projects: Vec<ProjectDoc>,
    totals: TotalsDoc,
    mean_density_pct: f64,
    stddev_density_pct: f64,
    degenerate_sample: bool,
    max_density_project: String,
    findings_per_file: f64,
}

impl From<&ProjectReport> for ProjectDoc {
    fn from(p: &ProjectReport) -> Self {
        ProjectDoc {
            project: p.project_name.clone(),
            num_files: p.num_files,
            total_loc: p.total_loc,
            smells: p.counts_by_smell,
            total_findings: p.total_findings,
            density_pct: p.density_pct,
            files: p
                .files
                .iter()
                .map(|f| FileDoc {
                    path: f.path.clone(),
                    loc: f.loc,
                    parse_status: f.parse_status.clone(),
                    findings: f
                        .findings
                        .iter()
                        .map(|x| FindingDoc {
                            smell: x.smell,
                            line: x.span.start_line,
                            col: x.span.start_col,
                            measured: x.measured,
                            threshold: x.threshold,
                            entity: x.entity_name.clone(),
                        })
                        .collect(),
                })
                .collect(),
        }
    }
}

impl From<ProjectDoc> for ProjectReport {
    fn from(d: ProjectDoc) -> Self {
        let files = d
            .files
            .into_iter()
            .map(|f| {
                let findings = f
                    .findings
                    .into_iter()
                    .map(|x| SmellFinding {
                        smell: x.smell,
                        file: f.path.clone().into(),
                        span: SourceSpan::point(x.line, x.col),
                        entity_name: x.entity,
                        measured: x.measured,
                        threshold: x.threshold,
                    })
                    .collect();
                FileReport {
                    path: f.path,
                    loc: f.loc,
                    parse_status: f.parse_status,
                    findings,
                }
            })
            .collect();
        ProjectReport {
            project_name: d.project,
            num_files: d.num_files,
            total_loc: d.total_loc,
            counts_by_smell: d.smells,
            total_findings: d.total_findings,
            density_pct: d.density_pct,
            files,
            warnings: Vec::new(),
        }
    }
}

impl From<&CorpusSummary> for CorpusDoc {
    fn from(c: &CorpusSummary) -> Self {
        CorpusDoc {
            projects: c.projects.iter().map(ProjectDoc::from).collect(),
            totals: TotalsDoc {
                num_files: c.totals.num_files,
                total_loc: c.totals.total_loc,
                smells: c.totals.counts_by_smell,
                total_findings: c.totals.total_findings,
                density_pct: density_pct(c.totals.total_findings, c.totals.total_loc),
            },
            mean_density_pct: round2(c.mean_density_pct),
            stddev_density_pct: round2(c.stddev_density_pct),
            degenerate_sample: c.degenerate_sample,
            max_density_project: c.max_density_project.clone(),
            findings_per_file: round2(c.findings_per_file()),
        }
    }
}

impl From<CorpusDoc> for CorpusSummary {
    fn from(d: CorpusDoc) -> Self {
        CorpusSummary {
            projects: d.projects.into_iter().map(ProjectReport::from).collect(),
            mean_density_pct: d.mean_density_pct,
            stddev_density_pct: d.stddev_density_pct,
            degenerate_sample: d.degenerate_sample,
            max_density_project: d.max_density_project,
            totals: CorpusTotals {
                num_files: d.totals.num_files,
                total_loc: d.totals.total_loc,
                counts_by_smell: d.totals.smells,
                total_findings: d.totals.total_findings,
            },
        }
    }
}

fn to_pretty_json<T: Serialize>(doc: &T) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(doc).expect("report documents always serialize");
    out.push(b'\n');
    out
}

impl ProjectReport {
    pub fn to_json(&self) -> Vec<u8> {
        to_pretty_json(&ProjectDoc::from(self))
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str::<ProjectDoc>(text).map(Into::into)
    }
}

impl CorpusSummary {
    pub fn to_json(&self) -> Vec<u8> {
        to_pretty_json(&CorpusDoc::from(self))
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str::<CorpusDoc>(text).map(Into::into)
    }
}

const CSV_HEADER: [&str; 12] = [
    "Project", "NumFiles", "LOCs", "LM", "LC", "LPL", "LMC", "LSC", "LTCE", "MNC", "LLF", "Total",
];

fn csv_row(name: &str, files: u64, loc: u64, counts: &SmellCounts) -> Vec<String> {
    let mut row = vec![name.to_string(), files.to_string(), loc.to_string()];
    row.extend(counts.iter().map(|(_, n)| n.to_string()));
    row.push(counts.total().to_string());
    row
}

fn write_csv(rows: Vec<Vec<String>>) -> Vec<u8> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(CSV_HEADER).expect("in-memory write");
    for row in rows {
        writer.write_record(row).expect("in-memory write");
    }
    writer.into_inner().expect("in-memory flush")
}

fn table_lines(rows: &[Vec<String>], out: &mut String) {
    let mut header: Vec<String> = CSV_HEADER.iter().map(|s| s.to_string()).collect();
    header.push("Density%".into());
    let mut widths: Vec<usize> = header.iter().map(String::len).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let render = |row: &[String], out: &mut String| {
        let cells: Vec<String> = row
            .iter()
            .zip(&widths)
            .enumerate()
            .map(|(i, (cell, &w))| {
                if i == 0 {
                    format!("{cell:<w$}")
                } else {
                    format!("{cell:>w$}")
                }
            })
            .collect();
        out.push_str(cells.join("  ").trim_end());
        out.push('\n');
    };
    render(&header, out);
    let rule: usize = widths.iter().sum::<usize>() + 2 * (widths.len() - 1);
    out.push_str(&"-".repeat(rule));
    out.push('\n');
    for row in rows {
        render(row, out);
    }
}

fn table_row(name: &str, files: u64, loc: u64, counts: &SmellCounts, density: f64) -> Vec<String> {
    let mut row = csv_row(name, files, loc, counts);
    row.push(format!("{density:.2}"));
    row
}

impl ProjectReport {
    pub fn to_csv(&self) -> Vec<u8> {
        write_csv(vec![csv_row(
            &self.project_name,
            self.num_files,
            self.total_loc,
            &self.counts_by_smell,
        )])
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let summary = table_row(
            &self.project_name,
            self.num_files,
            self.total_loc,
            &self.counts_by_smell,
            self.density_pct,
        );
        table_lines(&[summary], &mut out);

        let smelly: Vec<&FileReport> = self
            .files
            .iter()
            .filter(|f| !f.findings.is_empty())
            .collect();
        if !smelly.is_empty() {
            out.push('\n');
            let rows: Vec<Vec<String>> = smelly
                .iter()
                .map(|f| {
                    let counts = f.counts_by_smell();
                    table_row(
                        &f.path,
                        1,
                        f.loc,
                        &counts,
                        density_pct(counts.total(), f.loc),
                    )
                })
                .collect();
            table_lines(&rows, &mut out);
            out.push('\n');
            for f in smelly {
                for x in &f.findings {
                    let _ = writeln!(
                        out,
                        "{}:{}:{}: {} {} (measured {}, threshold {})",
                        f.path,
                        x.span.start_line,
                        x.span.start_col,
                        x.smell,
                        x.entity_name.as_deref().unwrap_or("-"),
                        x.measured,
                        x.threshold
                    );
                }
            }
        }
        for f in self.files.iter().filter(|f| !f.parse_status.is_ok()) {
            let _ = writeln!(out, "{}: {}", f.path, f.parse_status);
        }
        out
    }
}

impl CorpusSummary {
    pub fn to_csv(&self) -> Vec<u8> {
        let mut rows: Vec<Vec<String>> = self
            .projects
            .iter()
            .map(|p| {
                csv_row(
                    &p.project_name,
                    p.num_files,
                    p.total_loc,
                    &p.counts_by_smell,
                )
            })
            .collect();
        rows.push(csv_row(
            "Total",
            self.totals.num_files,
            self.totals.total_loc,
            &self.totals.counts_by_smell,
        ));
        write_csv(rows)
    }

    pub fn to_table(&self) -> String {
        let mut rows: Vec<Vec<String>> = self
            .projects
            .iter()
            .map(|p| {
                table_row(
                    &p.project_name,
                    p.num_files,
                    p.total_loc,
                    &p.counts_by_smell,
                    p.density_pct,
                )
            })
            .collect();
        rows.push(table_row(
            "Total",
            self.totals.num_files,
            self.totals.total_loc,
            &self.totals.counts_by_smell,
            density_pct(self.totals.total_findings, self.totals.total_loc),
        ));
        let mut out = String::new();
        table_lines(&rows, &mut out);
        out.push('\n');
        let _ = writeln!(
            out,
            "mean density:      {:.2}%",
            round2(self.mean_density_pct)
        );
        let stddev_note = if self.degenerate_sample {
            " (single project)"
        } else {
            ""
        };
        let _ = writeln!(
            out,
            "stddev density:    {:.2}%{stddev_note}",
            round2(self.stddev_density_pct)
        );
        let _ = writeln!(out, "max density:       {}", self.max_density_project);
        let _ = writeln!(
            out,
            "findings per file: {:.2}",
            round2(self.findings_per_file())
        );
        let ranked: Vec<String> = rank_smells(self)
            .into_iter()
            .take(4)
            .map(|(s, n)| format!("{s} ({n})"))
            .collect();
        let _ = writeln!(out, "most frequent:     {}", ranked.join(", "));
        out
    }
}

/// A report that can be rendered in every output format.
pub trait Render {
    fn render(&self, format: Format) -> Vec<u8>;
}

impl Render for ProjectReport {
    fn render(&self, format: Format) -> Vec<u8> {
        match format {
            Format::Json => self.to_json(),
            Format::Csv => self.to_csv(),
            Format::Table => self.to_table().into_bytes(),
        }
    }
}

impl Render for CorpusSummary {
    fn render(&self, format: Format) -> Vec<u8> {
        match format {
            Format::Json => self.to_json(),
            Format::Csv => self.to_csv(),
            Format::Table => self.to_table().into_bytes(),
        }
    }
}

/// Render `report` in the named format.
pub fn serialize(report: &impl Render, format: &str) -> Result<Vec<u8>, ReportError> {
    Ok(report.render(format.parse()?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::path::PathBuf;

    fn finding(smell: Smell, line: usize) -> SmellFinding {
        SmellFinding {
            smell,
            file: PathBuf::from("a.py"),
            span: SourceSpan::point(line, 4),
            entity_name: Some("f".into()),
            measured: 99,
            threshold: 1,
        }
    }

    fn file(path: &str, loc: u64, findings: Vec<SmellFinding>) -> FileReport {
        FileReport {
            path: path.into(),
            loc,
            parse_status: ParseStatus::Ok,
            findings,
        }
    }

    fn counts_project(name: &str, findings: u64, loc: u64) -> ProjectReport {
        project_from_counts(
            name,
            1,
            loc,
            SmellCounts::new([findings, 0, 0, 0, 0, 0, 0, 0]),
        )
    }

    #[test]
    fn density_examples() {
        let p = aggregate_project(
            "x",
            vec![file("a.py", 243, vec![finding(Smell::LM, 1); 55])],
        );
        assert_eq!(p.density_pct, 22.63);
        let p = aggregate_project("x", vec![file("a.py", 100, vec![])]);
        assert_eq!(p.density_pct, 0.0);
        assert_eq!(density_pct(300, 8172), 3.67);
    }

    #[test]
    fn density_rounds_half_up() {
        // 1/8 % = 0.125 -> 0.13; 1/16 % rounds from 0.0625 to 0.06.
        assert_eq!(density_pct(1, 800), 0.13);
        assert_eq!(density_pct(1, 1600), 0.06);
        assert_eq!(density_pct(1, 200_000), 0.0);
        assert_eq!(density_pct(1, 40_000), 0.0);
        assert_eq!(density_pct(1, 20_000), 0.01);
    }

    #[test]
    fn zero_loc_project_warns() {
        let p = aggregate_project("empty", vec![]);
        assert_eq!(p.num_files, 0);
        assert_eq!(p.density_pct, 0.0);
        assert_eq!(p.warnings.len(), 2);
    }

    #[test]
    fn failed_files_count_loc_only() {
        let mut broken = file("b.py", 7, vec![]);
        broken.parse_status = ParseStatus::Failed("bad".into());
        let p = aggregate_project(
            "x",
            vec![file("a.py", 3, vec![finding(Smell::MNC, 1)]), broken],
        );
        assert_eq!((p.num_files, p.total_loc, p.total_findings), (2, 10, 1));
    }

    #[test]
    fn corpus_of_two() {
        let s = summarize_corpus(vec![
            counts_project("a", 10, 100),
            counts_project("b", 20, 100),
        ])
        .unwrap();
        assert_eq!(s.mean_density_pct, 15.0);
        assert_eq!(round2(s.stddev_density_pct), 7.07);
        assert!(!s.degenerate_sample);
        assert_eq!(s.max_density_project, "b");
    }

    #[test]
    fn single_project_is_degenerate() {
        let s = summarize_corpus(vec![counts_project("a", 3, 42)]).unwrap();
        assert_eq!(s.stddev_density_pct, 0.0);
        assert!(s.degenerate_sample);
        assert_eq!(summarize_corpus(vec![]), Err(ReportError::EmptyCorpus));
    }

    #[test]
    fn max_density_ties_go_to_first_name() {
        let s = summarize_corpus(vec![
            counts_project("zeta", 3, 42),
            counts_project("alpha", 6, 84),
            counts_project("mid", 1, 100),
        ])
        .unwrap();
        assert_eq!(s.max_density_project, "alpha");
    }

    #[test]
    fn ranking_keeps_column_order_on_ties() {
        let zero = SmellCounts::default();
        let order: Vec<Smell> = rank_smells(&zero).into_iter().map(|(s, _)| s).collect();
        assert_eq!(order, Smell::ALL.to_vec());

        let github = SmellCounts::new([288, 217, 145, 84, 105, 41, 176, 12]);
        let top: Vec<Smell> = rank_smells(&github)
            .into_iter()
            .take(4)
            .map(|(s, _)| s)
            .collect();
        assert_eq!(top, vec![Smell::LM, Smell::LC, Smell::MNC, Smell::LPL]);
    }

    #[test]
    fn json_has_all_smell_keys_in_order() {
        let p = aggregate_project("clean", vec![file("a.py", 5, vec![])]);
        let text = String::from_utf8(p.to_json()).unwrap();
        let positions: Vec<usize> = Smell::ALL
            .iter()
            .map(|s| text.find(&format!("\"{s}\": 0")).expect("key present"))
            .collect();
        assert!(positions.windows(2).all(|w| w[0] < w[1]));
        let keys = [
            "\"project\"",
            "\"num_files\"",
            "\"total_loc\"",
            "\"smells\"",
            "\"total_findings\"",
            "\"density_pct\"",
            "\"files\"",
        ];
        let key_pos: Vec<usize> = keys.iter().map(|k| text.find(k).unwrap()).collect();
        assert!(key_pos.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn corpus_csv_has_total_row() {
        let s =
            summarize_corpus(vec![counts_project("a", 1, 10), counts_project("b", 2, 10)]).unwrap();
        let csv = String::from_utf8(s.to_csv()).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(
            lines[0],
            "Project,NumFiles,LOCs,LM,LC,LPL,LMC,LSC,LTCE,MNC,LLF,Total"
        );
        assert_eq!(lines.len(), 4);
        assert_eq!(lines[3], "Total,2,20,3,0,0,0,0,0,0,0,3");
    }

    #[test]
    fn unknown_format_is_rejected() {
        let p = aggregate_project("x", vec![]);
        assert_eq!(
            serialize(&p, "xml"),
            Err(ReportError::UnknownFormat("xml".into()))
        );
        assert!(serialize(&p, "table").is_ok());
    }

    #[test]
    fn file_breakdown_sorts_by_count() {
        let p = aggregate_project(
            "deer",
            vec![
                file("b.py", 10, vec![finding(Smell::MNC, 1)]),
                file(
                    "a.py",
                    10,
                    vec![finding(Smell::MNC, 1), finding(Smell::MNC, 2)],
                ),
                file("c.py", 10, vec![finding(Smell::LM, 1)]),
                file("d.py", 10, vec![finding(Smell::MNC, 3)]),
            ],
        );
        assert_eq!(
            p.file_breakdown(Smell::MNC),
            vec![("a.py", 2), ("b.py", 1), ("d.py", 1)]
        );
    }

    fn arb_project() -> impl Strategy<Value = ProjectReport> {
        let arb_file = (
            "[a-z]{1,6}\\.py",
            0u64..500,
            prop::collection::vec((0usize..8, 1usize..200, 0usize..80), 0..6),
            any::<bool>(),
        )
            .prop_map(|(path, loc, raw, ok)| FileReport {
                path,
                loc,
                parse_status: if ok {
                    ParseStatus::Ok
                } else {
                    ParseStatus::Failed("x at 1:0".into())
                },
                findings: raw
                    .into_iter()
                    .map(|(s, line, col)| SmellFinding {
                        smell: Smell::ALL[s],
                        file: PathBuf::new(),
                        span: SourceSpan::point(line, col),
                        entity_name: (col % 2 == 0).then(|| format!("n{col}")),
                        measured: line as u64 + 1,
                        threshold: 1,
                    })
                    .collect(),
            });
        ("[A-Za-z_ ,]{1,10}", prop::collection::vec(arb_file, 0..5))
            .prop_map(|(name, files)| aggregate_project(name, files))
    }

    proptest! {
        #[test]
        fn conservation(p in arb_project()) {
            let per_file: u64 = p.files.iter().map(|f| f.findings.len() as u64).sum();
            prop_assert_eq!(per_file, p.total_findings);
            prop_assert_eq!(p.counts_by_smell.total(), p.total_findings);
        }

        #[test]
        fn json_round_trip_is_byte_identical(p in arb_project()) {
            let first = p.to_json();
            let reparsed = ProjectReport::from_json(std::str::from_utf8(&first).unwrap()).unwrap();
            prop_assert_eq!(reparsed.to_json(), first);
        }

        #[test]
        fn serialized_density_recomputes(findings in 0u64..5000, loc in 1u64..100_000) {
            let p = project_from_counts("p", 1, loc, SmellCounts::new([findings, 0, 0, 0, 0, 0, 0, 0]));
            let doc: serde_json::Value = serde_json::from_slice(&p.to_json()).unwrap();
            let serialized = doc["density_pct"].as_f64().unwrap();
            let recomputed = 100.0 * doc["total_findings"].as_f64().unwrap() / doc["total_loc"].as_f64().unwrap();
            prop_assert!((serialized - recomputed).abs() <= 0.005 + 1e-9);
        }

        #[test]
        fn corpus_json_round_trip(projects in prop::collection::vec(arb_project(), 1..4)) {
            let s = summarize_corpus(projects).unwrap();
            let first = s.to_json();
            let reparsed = CorpusSummary::from_json(std::str::from_utf8(&first).unwrap()).unwrap();
            prop_assert_eq!(reparsed.to_json(), first);
        }
    }
}
