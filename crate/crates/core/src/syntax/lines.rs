/// Byte offsets of physical line starts. `\n`, `\r\n` and a lone `\r` all
/// terminate a line, matching the Python tokenizer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineIndex {
    starts: Vec<usize>,
    len: usize,
}

impl LineIndex {
    pub fn new(text: &str) -> Self {
        let bytes = text.as_bytes();
        let mut starts = vec![0];
        let mut i = 0;
        while i < bytes.len() {
            match bytes[i] {
                b'\n' => starts.push(i + 1),
                b'\r' if bytes.get(i + 1) == Some(&b'\n') => {
                    starts.push(i + 2);
                    i += 1;
                }
                b'\r' => starts.push(i + 1),
                _ => {}
            }
            i += 1;
        }
        // A trailing terminator does not open a new (empty) line.
        if starts.len() > 1 && *starts.last().unwrap() == text.len() {
            starts.pop();
        }
        if text.is_empty() {
            starts.clear();
        }
        LineIndex {
            starts,
            len: text.len(),
        }
    }

    pub fn line_count(&self) -> usize {
        self.starts.len()
    }

    /// Byte range of a 1-based line, terminator included.
    pub fn line_range(&self, line: usize) -> std::ops::Range<usize> {
        let start = self.starts[line - 1];
        let end = self.starts.get(line).copied().unwrap_or(self.len);
        start..end
    }

    pub fn lines<'t>(&'t self, text: &'t str) -> impl Iterator<Item = &'t str> + 't {
        (1..=self.line_count()).map(move |line| &text[self.line_range(line)])
    }

    /// 1-based line and 0-based character column of a byte offset.
    pub fn position(&self, text: &str, offset: usize) -> (usize, usize) {
        if self.starts.is_empty() {
            return (1, 0);
        }
        let line = self.starts.partition_point(|&s| s <= offset).max(1);
        let start = self.starts[line - 1];
        let col = text[start..offset.min(text.len())].chars().count();
        (line, col)
    }
}

#[derive(Clone, Copy)]
enum ScanState {
    Code,
    Str { quote: char, triple: bool },
}

/// For each physical line: does it hold code? Blank and comment-only lines
/// do not; any line touched by a string literal does.
pub fn code_line_mask(text: &str) -> Vec<bool> {
    let index = LineIndex::new(text);
    let mut mask = Vec::with_capacity(index.line_count());
    let mut state = ScanState::Code;

    for line in index.lines(text) {
        let body = line.trim_end_matches(['\n', '\r']);
        let mut has_code = matches!(state, ScanState::Str { .. });
        let mut chars = body.chars().peekable();
        let mut escaped_eol = false;

        while let Some(c) = chars.next() {
            match state {
                ScanState::Code => match c {
                    '#' => break,
                    '"' | '\'' => {
                        has_code = true;
                        let mut rest = chars.clone();
                        let triple = rest.next() == Some(c) && rest.next() == Some(c);
                        if triple {
                            chars.next();
                            chars.next();
                        }
                        state = ScanState::Str { quote: c, triple };
                    }
                    c if c.is_whitespace() => {}
                    _ => has_code = true,
                },
                ScanState::Str { quote, triple } => match c {
                    '\\' => {
                        if chars.next().is_none() {
                            escaped_eol = true;
                        }
                    }
                    c if c == quote => {
                        if !triple {
                            state = ScanState::Code;
                        } else {
                            let mut rest = chars.clone();
                            if rest.next() == Some(quote) && rest.next() == Some(quote) {
                                chars.next();
                                chars.next();
                                state = ScanState::Code;
                            }
                        }
                    }
                    _ => {}
                },
            }
        }

        // An unterminated single-quoted string ends with its line.
        if let ScanState::Str { triple: false, .. } = state {
            if !escaped_eol {
                state = ScanState::Code;
            }
        }
        mask.push(has_code);
    }
    mask
}
