//! Portable graymap codec: binary `P5` and ASCII `P2`, maxval up to 65535.
//!
//! 16-bit binary samples are most-significant-byte first, per the
//! portable-graymap convention. Header comments (`#` to end of line) are
//! honored wherever whitespace is allowed.

use std::io::Write;

use super::CodecError;
use crate::raster::{BitDepth, GrayImage};

/// On-disk encoding variant of a portable graymap.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PgmFlavor {
    /// `P5`, raw bytes.
    Binary,
    /// `P2`, ASCII decimal samples.
    Ascii,
}

fn malformed(detail: impl Into<String>) -> CodecError {
    CodecError::Malformed {
        format: "pgm",
        detail: detail.into(),
    }
}

/// Header token scanner: skips whitespace and `#` comments.
struct TokenScanner<'a> {
    data: &'a [u8],
    pos: usize,
}

impl<'a> TokenScanner<'a> {
    fn new(data: &'a [u8], pos: usize) -> Self {
        TokenScanner { data, pos }
    }

    fn skip_separators(&mut self) {
        while self.pos < self.data.len() {
            match self.data[self.pos] {
                b' ' | b'\t' | b'\r' | b'\n' | 0x0b | 0x0c => self.pos += 1,
                b'#' => {
                    while self.pos < self.data.len() && self.data[self.pos] != b'\n' {
                        self.pos += 1;
                    }
                }
                _ => break,
            }
        }
    }

    fn next_number(&mut self) -> Result<u32, CodecError> {
        self.skip_separators();
        let start = self.pos;
        while self.pos < self.data.len() && self.data[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            if self.pos >= self.data.len() {
                return Err(CodecError::Truncated("header ended early".to_string()));
            }
            return Err(malformed(format!(
                "expected a decimal number at byte {start}"
            )));
        }
        std::str::from_utf8(&self.data[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| malformed("number out of range"))
    }
}

/// Decode a P5 or P2 graymap from a byte buffer.
pub fn read_pgm(data: &[u8]) -> Result<GrayImage, CodecError> {
    let binary = match data.get(..2) {
        Some(b"P5") => true,
        Some(b"P2") => false,
        _ => return Err(CodecError::UnsupportedFormat("not a P2/P5 graymap".into())),
    };
    let mut scan = TokenScanner::new(data, 2);
    let width = scan.next_number()?;
    let height = scan.next_number()?;
    let maxval = scan.next_number()?;
    if width == 0 || height == 0 {
        return Err(malformed("zero width or height"));
    }
    if maxval == 0 {
        return Err(malformed("maxval must be positive"));
    }
    if maxval > 65535 {
        return Err(CodecError::DepthTooLarge(maxval));
    }
    let bit_depth = if maxval <= 255 {
        BitDepth::Eight
    } else {
        BitDepth::Sixteen
    };
    let count = width as usize * height as usize;
    let mut pixels = Vec::with_capacity(count);

    if binary {
        // Exactly one whitespace byte separates the header from raster data.
        if scan.pos >= data.len() {
            return Err(CodecError::Truncated("no raster data".to_string()));
        }
        if !data[scan.pos].is_ascii_whitespace() {
            return Err(malformed("missing whitespace before raster data"));
        }
        let body = &data[scan.pos + 1..];
        if maxval <= 255 {
            if body.len() < count {
                return Err(CodecError::Truncated(format!(
                    "expected {count} samples, found {}",
                    body.len()
                )));
            }
            pixels.extend(body[..count].iter().map(|&b| b as u16));
        } else {
            if body.len() < 2 * count {
                return Err(CodecError::Truncated(format!(
                    "expected {} bytes of 16-bit samples, found {}",
                    2 * count,
                    body.len()
                )));
            }
            pixels.extend(
                body[..2 * count]
                    .chunks_exact(2)
                    .map(|c| u16::from_be_bytes([c[0], c[1]])),
            );
        }
    } else {
        for _ in 0..count {
            let v = scan.next_number().map_err(|e| match e {
                CodecError::Truncated(_) => {
                    CodecError::Truncated(format!("fewer than {count} ASCII samples"))
                }
                other => other,
            })?;
            pixels.push(v as u16);
        }
    }

    if let Some(&bad) = pixels.iter().find(|&&v| v as u32 > maxval) {
        return Err(malformed(format!("sample {bad} exceeds maxval {maxval}")));
    }
    GrayImage::from_pixels(width, height, bit_depth, pixels)
        .map_err(|e| malformed(e.to_string()))
}

/// Encode a graymap. The written maxval is the full scale of the image's
/// bit depth (255 or 65535); pixel values are preserved exactly.
pub fn write_pgm(
    img: &GrayImage,
    out: &mut impl Write,
    flavor: PgmFlavor,
) -> Result<(), CodecError> {
    let maxval = img.max_value();
    match flavor {
        PgmFlavor::Binary => {
            write!(out, "P5\n{} {}\n{}\n", img.width(), img.height(), maxval)?;
            match img.bit_depth() {
                BitDepth::Eight => {
                    let bytes: Vec<u8> = img.pixels().iter().map(|&v| v as u8).collect();
                    out.write_all(&bytes)?;
                }
                BitDepth::Sixteen => {
                    let mut bytes = Vec::with_capacity(img.pixel_count() * 2);
                    for &v in img.pixels() {
                        bytes.extend_from_slice(&v.to_be_bytes());
                    }
                    out.write_all(&bytes)?;
                }
            }
        }
        PgmFlavor::Ascii => {
            write!(out, "P2\n{} {}\n{}\n", img.width(), img.height(), maxval)?;
            for y in 0..img.height() {
                let row: Vec<String> = img.row(y).iter().map(|v| v.to_string()).collect();
                writeln!(out, "{}", row.join(" "))?;
            }
        }
    }
    Ok(())
}
