//! Independent recounts used to cross-check the analyzer.

fn indent_of(line: &str) -> usize {
    line.len() - line.trim_start().len()
}

fn is_code(line: &str) -> bool {
    let t = line.trim();
    !t.is_empty() && !t.starts_with('#')
}

/// Code lines of the block whose header starts on `header` (0-based),
/// found by indentation alone. Valid for sources without multi-line
/// strings that contain blank or dedented lines.
pub fn block_loc(lines: &[&str], header: usize) -> u64 {
    let base = indent_of(lines[header]);
    let mut end = header;
    while !lines[end].trim_end().ends_with(':') {
        end += 1;
    }
    let mut last = end;
    for (j, line) in lines.iter().enumerate().skip(end + 1) {
        if !is_code(line) {
            continue;
        }
        if indent_of(line) <= base {
            break;
        }
        last = j;
    }
    lines[header..=last].iter().filter(|l| is_code(l)).count() as u64
}

/// Headers (0-based line, keyword) of every `def`/`class` in the text.
pub fn block_headers(lines: &[&str]) -> Vec<(usize, &'static str)> {
    lines
        .iter()
        .enumerate()
        .filter_map(|(i, l)| {
            let t = l.trim_start();
            if t.starts_with("def ") || t.starts_with("async def ") {
                Some((i, "def"))
            } else if t.starts_with("class ") {
                Some((i, "class"))
            } else {
                None
            }
        })
        .collect()
}
