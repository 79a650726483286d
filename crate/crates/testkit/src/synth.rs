//! Synthetic projects that reproduce a table row exactly: same file count,
//! same LOC, same per-smell counts under the default thresholds.
//!
//! File 0 holds the structural smells (long/nested functions, classes,
//! parameter lists). One-line expression smells are spread round-robin over
//! all files, and filler assignments bring every file up to its share of
//! the LOC budget.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use crate::table2::Row;

const LM: usize = 0;
const LC: usize = 1;
const LPL: usize = 2;
const LMC: usize = 3;
const LSC: usize = 4;
const LTCE: usize = 5;
const MNC: usize = 6;
const LLF: usize = 7;

const FUNCTION_LOC_LIMIT: u64 = 38;
const CLASS_LOC_LIMIT: u64 = 29;
const CLOSURE_LIMIT: u64 = 3;
const MAX_CLASS_CHAIN: u64 = 8;

const LONG_PARAMS: &str = "a, b, c, d, e, f";
const LONG_CHAIN: &str = "agent.env.state.buffer.sample.batch.size";
const LONG_TERNARY: &str =
    "left_operand_value if some_condition_flag_is_set else right_operand_value";
const DEEP_CONTAINER: &str = "[[[[0]]]]";
const LONG_LAMBDA: &str = "lambda state, action: state * action + state - action * state + 1";

/// Nested functions `depth` deep; the outermost `long` of them exceed the
/// function LOC limit.
#[derive(Debug, Clone, Copy)]
struct Tower {
    depth: u64,
    long: u64,
}

impl Tower {
    fn body_lines(&self) -> u64 {
        if self.long == 0 {
            1
        } else {
            FUNCTION_LOC_LIMIT + self.long - self.depth
        }
    }

    fn loc(&self) -> u64 {
        self.depth + self.body_lines()
    }
}

fn plan_towers(lm: u64, lsc: u64) -> Vec<Tower> {
    let mut towers = Vec::new();
    let mut left = lm;
    if lsc > 0 {
        let depth = CLOSURE_LIMIT + lsc;
        let long = left.min(depth);
        left -= long;
        towers.push(Tower { depth, long });
    }
    while left > 0 {
        let long = left.min(CLOSURE_LIMIT);
        left -= long;
        towers.push(Tower { depth: long, long });
    }
    towers
}

fn indent(level: u64) -> String {
    "    ".repeat(level as usize)
}

struct Emitter {
    lines: Vec<String>,
    long_params_left: u64,
    next_id: usize,
}

impl Emitter {
    fn id(&mut self) -> usize {
        self.next_id += 1;
        self.next_id
    }

    fn tower(&mut self, level: u64, tower: Tower) {
        let id = self.id();
        for k in 0..tower.depth {
            let params = if self.long_params_left > 0 {
                self.long_params_left -= 1;
                LONG_PARAMS
            } else {
                ""
            };
            self.lines
                .push(format!("{}def step_{id}_{k}({params}):", indent(level + k)));
        }
        for j in 0..tower.body_lines() {
            self.lines
                .push(format!("{}v{j} = {j}", indent(level + tower.depth)));
        }
    }

    fn class_chain(&mut self, classes: u64, tower: Option<Tower>) {
        let id = self.id();
        for k in 0..classes {
            self.lines
                .push(format!("{}class Model{id}_{k}:", indent(k)));
        }
        let mut content = 0;
        if let Some(t) = tower {
            self.tower(classes, t);
            content = t.loc();
        }
        for j in content..CLASS_LOC_LIMIT {
            self.lines.push(format!("{}attr{j} = {j}", indent(classes)));
        }
    }
}

/// Lines of every file of a synthetic project for `row`.
pub fn project_sources(row: &Row) -> Result<Vec<Vec<String>>, String> {
    let c = row.counts;
    let files = row.files.max(1) as usize;
    let towers = plan_towers(c[LM], c[LSC]);
    let functions: u64 = towers.iter().map(|t| t.depth).sum();

    let mut em = Emitter {
        lines: Vec::new(),
        long_params_left: c[LPL],
        next_id: 0,
    };

    let mut chains = Vec::new();
    let mut classes_left = c[LC];
    while classes_left > 0 {
        let n = classes_left.min(MAX_CLASS_CHAIN);
        classes_left -= n;
        chains.push(n);
    }
    // Shallow towers are wrapped in classes first to keep indentation low.
    let mut unwrapped: Vec<Tower> = towers.clone();
    for &n in &chains {
        em.class_chain(n, unwrapped.pop());
    }
    for t in unwrapped {
        em.tower(0, t);
    }
    for k in functions..c[LPL] {
        em.lines
            .push(format!("def configure_{k}({LONG_PARAMS}): pass"));
    }

    let mut out = vec![Vec::new(); files];
    out[0] = std::mem::take(&mut em.lines);

    let mut slot = 0;
    let mut push = |line: String| {
        out[slot % files].push(line);
        slot += 1;
    };
    for i in 0..c[LMC] {
        push(format!("c{i} = {LONG_CHAIN}"));
    }
    for i in 0..c[LTCE] {
        push(format!("t{i} = {LONG_TERNARY}"));
    }
    for i in 0..c[MNC] {
        push(format!("g{i} = {DEEP_CONTAINER}"));
    }
    for i in 0..c[LLF] {
        push(format!("f{i} = {LONG_LAMBDA}"));
    }

    let used: u64 = out.iter().map(|f| f.len() as u64).sum();
    if used > row.loc {
        return Err(format!(
            "{}: needs {used} lines, budget is {}",
            row.name, row.loc
        ));
    }
    let mut filler = row.loc - used;
    let mut k = 0;
    while filler > 0 {
        let file = &mut out[k % files];
        file.push(format!("k{} = {}", file.len(), k));
        filler -= 1;
        k += 1;
    }
    Ok(out)
}

pub fn file_name(index: usize) -> String {
    format!("module_{index:03}.py")
}

/// Writes the project for `row` into `dir` and returns the file paths.
pub fn write_project(dir: &Path, row: &Row) -> io::Result<Vec<PathBuf>> {
    let sources = project_sources(row).map_err(io::Error::other)?;
    fs::create_dir_all(dir)?;
    let mut paths = Vec::with_capacity(sources.len());
    for (i, lines) in sources.iter().enumerate() {
        let path = dir.join(file_name(i));
        let mut text = lines.join("\n");
        if !text.is_empty() {
            text.push('\n');
        }
        fs::write(&path, text)?;
        paths.push(path);
    }
    Ok(paths)
}

/// Directory-safe form of a project name.
pub fn dir_name(name: &str) -> String {
    name.replace(' ', "_")
}

/// Writes every row under `root`, one directory per row.
pub fn write_corpus<'r>(
    root: &Path,
    rows: impl IntoIterator<Item = &'r Row>,
) -> io::Result<Vec<PathBuf>> {
    rows.into_iter()
        .map(|row| {
            let dir = root.join(dir_name(row.name));
            write_project(&dir, row).map(|_| dir)
        })
        .collect()
}
