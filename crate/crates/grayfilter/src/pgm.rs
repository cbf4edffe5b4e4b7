//! PGM reading and writing, plain (`P2`) and raw (`P5`), maxval 255 only.
//!
//! Writers emit one canonical form: magic line, `"width height"` line,
//! `"255"` line, then the raster (`P2`: one text row per image row).

use std::fmt;
use std::str::FromStr;

use grayfilter_core::{Image, MAX_GRAY};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum PgmFormat {
    /// ASCII decimals.
    P2,
    /// Raw bytes.
    #[default]
    P5,
}

impl FromStr for PgmFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "p2" => Ok(PgmFormat::P2),
            "p5" => Ok(PgmFormat::P5),
            _ => Err(format!("unknown PGM format {s:?}, expected p2 or p5")),
        }
    }
}

/// Malformed input, located by byte offset.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("byte {offset}: {message}")]
pub struct PgmError {
    pub offset: usize,
    pub message: String,
}

fn err<T>(offset: usize, message: impl Into<String>) -> Result<T, PgmError> {
    Err(PgmError {
        offset,
        message: message.into(),
    })
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    /// Skips whitespace and, when `comments` is set, `#` comments running to
    /// the end of the line.
    fn skip_blank(&mut self, comments: bool) {
        while let Some(b) = self.peek() {
            if b.is_ascii_whitespace() {
                self.pos += 1;
            } else if comments && b == b'#' {
                while let Some(c) = self.peek() {
                    self.pos += 1;
                    if c == b'\n' || c == b'\r' {
                        break;
                    }
                }
            } else {
                break;
            }
        }
    }

    /// Reads an unsigned decimal that must end at whitespace, a comment, or
    /// (if `eof_ok`) the end of input.
    /// Returns the token's offset with its value.
    fn number(&mut self, what: &str, comments: bool, eof_ok: bool) -> Result<(usize, u64), PgmError> {
        self.skip_blank(comments);
        let start = self.pos;
        let mut value: u64 = 0;
        while let Some(b) = self.peek().filter(u8::is_ascii_digit) {
            value = match value.checked_mul(10).and_then(|v| v.checked_add(u64::from(b - b'0'))) {
                Some(v) => v,
                None => return err(start, format!("{what} is too large")),
            };
            self.pos += 1;
        }
        if self.pos == start {
            return match self.peek() {
                None => err(start, format!("unexpected end of data, expected {what}")),
                Some(_) => err(start, format!("expected decimal {what}")),
            };
        }
        match self.peek() {
            Some(b) if b.is_ascii_whitespace() || (comments && b == b'#') => Ok((start, value)),
            None if eof_ok => Ok((start, value)),
            None => err(self.pos, format!("unexpected end of data after {what}")),
            Some(_) => err(self.pos, format!("expected decimal {what}")),
        }
    }
}

pub fn read_pgm(bytes: &[u8]) -> Result<Image, PgmError> {
    let format = match bytes.get(..2) {
        Some(b"P2") => PgmFormat::P2,
        Some(b"P5") => PgmFormat::P5,
        _ => return err(0, "bad magic, expected P2 or P5"),
    };
    let mut cur = Cursor { bytes, pos: 2 };
    match cur.peek() {
        Some(b) if b.is_ascii_whitespace() || b == b'#' => {}
        None => return err(2, "unexpected end of data after magic"),
        Some(_) => return err(2, "bad magic, expected P2 or P5"),
    }

    let (width_at, width) = cur.number("width", true, false)?;
    let (_, height) = cur.number("height", true, false)?;
    if width == 0 || height == 0 {
        return err(width_at, format!("dimensions must be at least 1x1, got {width}x{height}"));
    }
    let (maxval_at, maxval) = cur.number("maxval", true, false)?;
    if maxval != u64::from(MAX_GRAY) {
        return err(maxval_at, format!("maxval must be 255, got {maxval}"));
    }
    let count = usize::try_from(width)
        .ok()
        .zip(usize::try_from(height).ok())
        .and_then(|(w, h)| w.checked_mul(h));
    let Some(count) = count else {
        return err(width_at, "image is too large");
    };
    let (width, height) = (width as usize, height as usize);

    let pixels = match format {
        PgmFormat::P5 => {
            // exactly one whitespace byte separates maxval from the raster
            let start = cur.pos + 1;
            let available = bytes.len().saturating_sub(start);
            if available < count {
                return err(
                    bytes.len(),
                    format!("truncated raster: expected {count} bytes, found {available}"),
                );
            }
            bytes[start..start + count].to_vec()
        }
        PgmFormat::P2 => {
            let mut pixels = Vec::with_capacity(count.min(1 << 24));
            for i in 0..count {
                cur.skip_blank(false);
                let at = cur.pos;
                let (_, v) = cur.number("pixel value", false, true).map_err(|e| {
                    if at >= bytes.len() {
                        PgmError {
                            offset: at,
                            message: format!("truncated raster: expected {count} values, found {i}"),
                        }
                    } else {
                        e
                    }
                })?;
                if v > maxval {
                    return err(at, format!("pixel value {v} exceeds maxval {maxval}"));
                }
                pixels.push(v as u8);
            }
            cur.skip_blank(false);
            if cur.pos < bytes.len() {
                return err(cur.pos, "unexpected data after raster");
            }
            pixels
        }
    };
    Image::new(width, height, pixels).map_err(|e| PgmError {
        offset: 0,
        message: e.to_string(),
    })
}

pub fn write_pgm(img: &Image, format: PgmFormat) -> Vec<u8> {
    let (w, h) = img.dimensions();
    let magic = match format {
        PgmFormat::P2 => "P2",
        PgmFormat::P5 => "P5",
    };
    let mut out = format!("{magic}\n{w} {h}\n{MAX_GRAY}\n").into_bytes();
    match format {
        PgmFormat::P5 => out.extend_from_slice(img.pixels()),
        PgmFormat::P2 => {
            out.reserve(img.pixels().len() * 4);
            for y in 0..h {
                let row = img.row(y);
                for (x, v) in row.iter().enumerate() {
                    if x > 0 {
                        out.push(b' ');
                    }
                    out.extend_from_slice(v.to_string().as_bytes());
                }
                out.push(b'\n');
            }
        }
    }
    out
}

impl fmt::Display for PgmFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PgmFormat::P2 => "p2",
            PgmFormat::P5 => "p5",
        })
    }
}
