//! Line-oriented text formats: kernel files, LUT files and histogram CSV.

use std::fmt::Write;

use grayfilter_core::{Histogram, Kernel, Lut, GRAY_LEVELS};

/// Malformed text input, located by 1-based line number.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct TextError {
    pub line: usize,
    pub message: String,
}

fn err<T>(line: usize, message: impl Into<String>) -> Result<T, TextError> {
    Err(TextError {
        line,
        message: message.into(),
    })
}

/// Non-blank lines with their 1-based numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| !l.trim().is_empty())
}

fn odd_dimension(token: &str, line: usize, what: &str) -> Result<usize, TextError> {
    match token.parse::<usize>() {
        Ok(v) if v % 2 == 1 => Ok(v),
        Ok(v) => err(line, format!("{what} must be odd and positive, got {v}")),
        Err(_) => err(line, format!("{what} must be a positive integer, got {token:?}")),
    }
}

/// Parses `"kheight kwidth"` followed by `kheight` rows of `kwidth` reals.
/// Blank lines are ignored.
pub fn parse_kernel(text: &str) -> Result<Kernel, TextError> {
    let mut lines = content_lines(text);
    let Some((header_line, header)) = lines.next() else {
        return err(1, "empty kernel file, expected \"kheight kwidth\"");
    };
    let dims: Vec<&str> = header.split_whitespace().collect();
    if dims.len() != 2 {
        return err(header_line, "expected \"kheight kwidth\"");
    }
    let height = odd_dimension(dims[0], header_line, "kheight")?;
    let width = odd_dimension(dims[1], header_line, "kwidth")?;

    let mut coeffs = Vec::with_capacity(width.saturating_mul(height).min(1 << 20));
    let mut first_row_line = header_line + 1;
    let mut last_line = header_line;
    for row in 0..height {
        let Some((line, content)) = lines.next() else {
            return err(last_line + 1, format!("expected {height} coefficient rows, found {row}"));
        };
        if row == 0 {
            first_row_line = line;
        }
        last_line = line;
        let before = coeffs.len();
        for token in content.split_whitespace() {
            match token.parse::<f64>() {
                Ok(v) if v.is_finite() => coeffs.push(v),
                _ => return err(line, format!("not a finite decimal number: {token:?}")),
            }
        }
        let found = coeffs.len() - before;
        if found != width {
            return err(line, format!("expected {width} coefficients, found {found}"));
        }
    }
    if let Some((line, _)) = lines.next() {
        return err(line, format!("unexpected content after {height} coefficient rows"));
    }
    Kernel::new(width, height, coeffs).or_else(|e| err(first_row_line, e.to_string()))
}

/// Parses exactly 256 whitespace-separated gray levels; entry `i` is the
/// output for input level `i`.
pub fn parse_lut(text: &str) -> Result<Lut, TextError> {
    let mut table = Vec::with_capacity(GRAY_LEVELS);
    let mut last_line = 1;
    for (line, content) in content_lines(text) {
        last_line = line;
        for token in content.split_whitespace() {
            let Ok(v) = token.parse::<u8>() else {
                return err(line, format!("expected a gray level 0..=255, got {token:?}"));
            };
            if table.len() == GRAY_LEVELS {
                return err(line, "more than 256 table entries");
            }
            table.push(v);
        }
    }
    if table.len() != GRAY_LEVELS {
        return err(last_line, format!("expected 256 table entries, found {}", table.len()));
    }
    Ok(Lut::from_slice(&table).expect("length checked"))
}

/// Header `level,count` followed by one line per gray level, 257 lines in all.
pub fn histogram_csv(h: &Histogram) -> String {
    let mut out = String::with_capacity(16 + GRAY_LEVELS * 8);
    out.push_str("level,count\n");
    for (level, count) in h.bins().iter().enumerate() {
        let _ = writeln!(out, "{level},{count}");
    }
    out
}
