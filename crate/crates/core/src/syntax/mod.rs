//! Python source parsing and extraction of measurable code entities.
//!
//! A [`SourceUnit`] owns the raw text of one file together with its line
//! index and (when the file is valid Python 3) its syntax tree. The
//! [`extract_entities`] pass walks that tree once and produces every
//! construct the metric layer measures.

mod extract;
mod lines;

use std::fmt;
use std::path::{Path, PathBuf};

use rustpython_parser::{ast, Parse};
use serde::{Deserialize, Serialize};

pub use extract::extract_entities;
pub use lines::{code_line_mask, LineIndex};

/// Outcome of parsing one file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseStatus {
    Ok,
    Failed(String),
}

impl ParseStatus {
    pub fn is_ok(&self) -> bool {
        matches!(self, ParseStatus::Ok)
    }
}

impl fmt::Display for ParseStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseStatus::Ok => f.write_str("ok"),
            ParseStatus::Failed(msg) => write!(f, "failed: {msg}"),
        }
    }
}

impl std::str::FromStr for ParseStatus {
    type Err = std::convert::Infallible;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "ok" => ParseStatus::Ok,
            other => ParseStatus::Failed(
                other
                    .strip_prefix("failed: ")
                    .or_else(|| other.strip_prefix("failed"))
                    .unwrap_or(other)
                    .to_string(),
            ),
        })
    }
}

impl Serialize for ParseStatus {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ParseStatus {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        Ok(s.parse().unwrap_or_else(|never| match never {}))
    }
}

/// One source file, parsed or not.
#[derive(Debug)]
pub struct SourceUnit {
    pub path: PathBuf,
    pub text: String,
    pub index: LineIndex,
    pub tree: Option<ast::Suite>,
    pub parse_status: ParseStatus,
    /// Non-fatal diagnostics, e.g. lossy UTF-8 decoding.
    pub warnings: Vec<String>,
}

impl SourceUnit {
    /// Physical lines of the file, each including its terminator.
    /// Concatenating them reproduces `text` exactly.
    pub fn lines(&self) -> impl Iterator<Item = &str> + '_ {
        self.index.lines(&self.text)
    }

    pub fn line_count(&self) -> usize {
        self.index.line_count()
    }

    /// Byte offset at which the parser input starts (non-zero only when the
    /// file begins with a byte-order mark).
    pub(crate) fn parse_offset(&self) -> usize {
        if self.text.starts_with('\u{feff}') {
            '\u{feff}'.len_utf8()
        } else {
            0
        }
    }
}

/// Read and parse one file. Never fails: I/O and grammar errors are
/// recorded in the unit's `parse_status`.
pub fn parse_file(path: impl AsRef<Path>) -> SourceUnit {
    let path = path.as_ref();
    match std::fs::read(path) {
        Ok(bytes) => {
            let mut warnings = Vec::new();
            let text = match String::from_utf8(bytes) {
                Ok(text) => text,
                Err(err) => {
                    warnings.push(format!(
                        "{}: invalid UTF-8 at byte {}, decoded lossily",
                        path.display(),
                        err.utf8_error().valid_up_to()
                    ));
                    String::from_utf8_lossy(err.as_bytes()).into_owned()
                }
            };
            let mut unit = parse_source(path, text);
            unit.warnings.splice(0..0, warnings);
            unit
        }
        Err(err) => SourceUnit {
            path: path.to_path_buf(),
            text: String::new(),
            index: LineIndex::new(""),
            tree: None,
            parse_status: ParseStatus::Failed(format!("io error: {err}")),
            warnings: Vec::new(),
        },
    }
}

/// Parse in-memory source text as a Python 3 module.
pub fn parse_source(path: impl Into<PathBuf>, text: impl Into<String>) -> SourceUnit {
    let path = path.into();
    let text = text.into();
    let index = LineIndex::new(&text);
    let mut unit = SourceUnit {
        path,
        text,
        index,
        tree: None,
        parse_status: ParseStatus::Ok,
        warnings: Vec::new(),
    };
    let source = &unit.text[unit.parse_offset()..];
    let label = unit.path.to_string_lossy().into_owned();
    // The parser is third-party code; a panic on exotic input must only
    // fail this file.
    let parsed = std::panic::catch_unwind(|| ast::Suite::parse(source, &label));
    match parsed {
        Ok(Ok(suite)) => unit.tree = Some(suite),
        Ok(Err(err)) => {
            let offset = usize::from(err.offset) + unit.parse_offset();
            let (line, col) = unit.index.position(&unit.text, offset);
            unit.parse_status = ParseStatus::Failed(format!("{} at {line}:{col}", err.error));
        }
        Err(_) => {
            unit.parse_status = ParseStatus::Failed("parser panicked".to_string());
        }
    }
    unit
}

/// Number of physical lines that hold code: neither blank nor
/// comment-only. Lines covered by a string literal count as code. Works
/// on failed parses too since it only scans text.
pub fn count_loc(unit: &SourceUnit) -> usize {
    code_line_mask(&unit.text)
        .iter()
        .filter(|&&code| code)
        .count()
}

/// Location of a construct in its file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SourceSpan {
    /// 1-based.
    pub start_line: usize,
    /// 0-based, in characters.
    pub start_col: usize,
    pub end_line: usize,
    pub end_col: usize,
    /// Characters between the two endpoints.
    pub char_length: usize,
    pub start_byte: usize,
    pub end_byte: usize,
}

impl SourceSpan {
    pub fn from_bytes(text: &str, index: &LineIndex, start: usize, end: usize) -> Self {
        let (start_line, start_col) = index.position(text, start);
        let (end_line, end_col) = index.position(text, end);
        SourceSpan {
            start_line,
            start_col,
            end_line,
            end_col,
            char_length: text[start..end].chars().count(),
            start_byte: start,
            end_byte: end,
        }
    }

    /// A span known only by its start point (e.g. read back from a report).
    pub fn point(line: usize, col: usize) -> Self {
        SourceSpan {
            start_line: line,
            start_col: col,
            end_line: line,
            end_col: col,
            char_length: 0,
            start_byte: 0,
            end_byte: 0,
        }
    }

    pub fn contains(&self, other: &SourceSpan) -> bool {
        self.start_byte <= other.start_byte && other.end_byte <= self.end_byte
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct EntityId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ParamKind {
    PositionalOnly,
    Positional,
    VarPositional,
    KeywordOnly,
    VarKeyword,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Param {
    pub name: String,
    pub kind: ParamKind,
    pub has_default: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ContainerKind {
    List,
    Tuple,
    Set,
    Dict,
    ListComp,
    SetComp,
    DictComp,
}

/// A measurable construct and its kind-specific payload.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum EntityKind {
    FunctionDef {
        params: Vec<Param>,
        /// 1 + number of enclosing function definitions.
        def_depth: u32,
        /// Declared directly in a class body.
        is_method: bool,
    },
    ClassDef,
    Lambda {
        params: Vec<Param>,
        def_depth: u32,
    },
    TernaryExpr,
    ContainerExpr {
        kind: ContainerKind,
        /// Position in the container nesting, 1 for an outermost container.
        level: u32,
        /// Deepest nesting reached inside this container, counting itself.
        depth: u32,
    },
    AccessChain {
        /// Dot-operator links in the maximal chain.
        links: u32,
    },
}

impl EntityKind {
    pub fn label(&self) -> &'static str {
        match self {
            EntityKind::FunctionDef { .. } => "FunctionDef",
            EntityKind::ClassDef => "ClassDef",
            EntityKind::Lambda { .. } => "Lambda",
            EntityKind::TernaryExpr => "TernaryExpr",
            EntityKind::ContainerExpr { .. } => "ContainerExpr",
            EntityKind::AccessChain { .. } => "AccessChain",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeEntity {
    pub id: EntityId,
    pub kind: EntityKind,
    pub name: Option<String>,
    pub span: SourceSpan,
    pub parent: Option<EntityId>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_parses_with_no_entities() {
        let unit = parse_source("empty.py", "");
        assert_eq!(unit.parse_status, ParseStatus::Ok);
        assert!(extract_entities(&unit).is_empty());
        assert_eq!(count_loc(&unit), 0);
    }

    #[test]
    fn python2_print_is_rejected() {
        let unit = parse_source("old.py", "print \"x\"\n");
        assert!(matches!(unit.parse_status, ParseStatus::Failed(_)));
        assert!(extract_entities(&unit).is_empty());
    }

    #[test]
    fn missing_file_is_a_failed_unit() {
        let unit = parse_file("/definitely/not/here.py");
        match &unit.parse_status {
            ParseStatus::Failed(msg) => assert!(msg.starts_with("io error")),
            ParseStatus::Ok => panic!("expected failure"),
        }
    }

    #[test]
    fn invalid_utf8_is_decoded_lossily_with_warning() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("latin1.py");
        std::fs::write(&path, b"x = '\xe9'\n").unwrap();
        let unit = parse_file(&path);
        assert_eq!(unit.parse_status, ParseStatus::Ok);
        assert_eq!(unit.warnings.len(), 1);
        assert!(unit.text.contains('\u{fffd}'));
    }

    #[test]
    fn byte_order_mark_is_tolerated() {
        let unit = parse_source("bom.py", "\u{feff}def f(): pass\n");
        assert_eq!(unit.parse_status, ParseStatus::Ok);
        let entities = extract_entities(&unit);
        assert_eq!(entities.len(), 1);
        assert_eq!(entities[0].span.start_line, 1);
    }

    #[test]
    fn parse_status_text_round_trips() {
        for status in [
            ParseStatus::Ok,
            ParseStatus::Failed("bad token at 1:6".into()),
        ] {
            let parsed: ParseStatus = status.to_string().parse().unwrap();
            assert_eq!(parsed, status);
        }
    }

    #[test]
    fn count_loc_examples() {
        let blank = parse_source("a.py", "\n\n\n\n\n");
        assert_eq!(count_loc(&blank), 0);
        let mixed = parse_source("b.py", "# header\nx = 1\n\ny = 2\n");
        assert_eq!(count_loc(&mixed), 2);
        let multi = parse_source("c.py", "s = \"\"\"one\ntwo\nthree\"\"\"\n");
        assert_eq!(count_loc(&multi), 3);
    }

    #[test]
    fn count_loc_works_on_failed_parse() {
        let unit = parse_source("bad.py", "print \"x\"\n# c\n\nprint \"y\"\n");
        assert!(!unit.parse_status.is_ok());
        assert_eq!(count_loc(&unit), 2);
    }

    #[test]
    fn span_lengths_are_characters() {
        let text = "s = 'héllo'\n";
        let index = LineIndex::new(text);
        let start = text.find('\'').unwrap();
        let span = SourceSpan::from_bytes(text, &index, start, text.len() - 1);
        assert_eq!(span.char_length, 7);
        assert_eq!(span.start_col, 4);
        assert_eq!(span.end_col, 11);
    }
}
