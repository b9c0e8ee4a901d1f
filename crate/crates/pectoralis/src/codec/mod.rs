//! Lossless image codecs: portable graymap (P5/P2) and single-channel PNG.
//!
//! Both formats round-trip 8- and 16-bit grayscale pixel data bit-exactly.
//! Color inputs are rejected rather than converted; mammogram rasters are
//! single-channel and a silent conversion would hide data errors.

mod pgm;
mod png;

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::raster::{BinaryMask, GrayImage};
use thiserror::Error;

pub use pgm::{read_pgm, write_pgm, PgmFlavor};
pub use png::{read_png, write_png, write_rgb_png};

/// Errors raised by the image codecs.
#[derive(Debug, Error)]
pub enum CodecError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("unsupported image format: {0}")]
    UnsupportedFormat(String),
    #[error("truncated file: {0}")]
    Truncated(String),
    #[error("sample depth too large: maxval {0} exceeds 16 bits")]
    DepthTooLarge(u32),
    #[error("malformed {format} data: {detail}")]
    Malformed { format: &'static str, detail: String },
    #[error("color images are not supported (got {0}); supply a single-channel raster")]
    ColorUnsupported(String),
}

/// Detected on-disk format, by magic bytes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ImageFormat {
    /// Binary portable graymap, magic `P5`.
    PgmBinary,
    /// ASCII portable graymap, magic `P2`.
    PgmAscii,
    /// Portable network graphics.
    Png,
}

const PNG_SIGNATURE: [u8; 8] = [0x89, b'P', b'N', b'G', b'\r', b'\n', 0x1a, b'\n'];

/// Sniff the format from leading magic bytes.
pub fn detect_format(data: &[u8]) -> Result<ImageFormat, CodecError> {
    if data.starts_with(&PNG_SIGNATURE) {
        return Ok(ImageFormat::Png);
    }
    match data.get(..2) {
        Some(b"P5") => Ok(ImageFormat::PgmBinary),
        Some(b"P2") => Ok(ImageFormat::PgmAscii),
        Some(magic @ (b"P1" | b"P3" | b"P4" | b"P6" | b"P7")) => Err(CodecError::UnsupportedFormat(
            format!("portable anymap `{}` (only graymaps P2/P5 are supported)", String::from_utf8_lossy(magic)),
        )),
        _ => Err(CodecError::UnsupportedFormat(
            "unrecognized magic bytes".to_string(),
        )),
    }
}

/// Read a grayscale image, inferring the format from file content.
pub fn read_image(path: impl AsRef<Path>) -> Result<GrayImage, CodecError> {
    let mut data = Vec::new();
    let mut reader = BufReader::new(File::open(path.as_ref())?);
    reader.read_to_end(&mut data)?;
    read_image_bytes(&data)
}

/// Decode a grayscale image from an in-memory buffer.
pub fn read_image_bytes(data: &[u8]) -> Result<GrayImage, CodecError> {
    match detect_format(data)? {
        ImageFormat::PgmBinary | ImageFormat::PgmAscii => read_pgm(data),
        ImageFormat::Png => read_png(data),
    }
}

/// Write a grayscale image, choosing the codec from the file extension:
/// `.pgm`/`.pnm` write binary P5, `.png` writes PNG.
pub fn write_image(img: &GrayImage, path: impl AsRef<Path>) -> Result<(), CodecError> {
    let path = path.as_ref();
    let ext = path
        .extension()
        .and_then(|e| e.to_str())
        .map(|e| e.to_ascii_lowercase())
        .unwrap_or_default();
    let mut out = BufWriter::new(File::create(path)?);
    match ext.as_str() {
        "pgm" | "pnm" => write_pgm(img, &mut out, PgmFlavor::Binary),
        "png" => write_png(img, &mut out),
        other => Err(CodecError::UnsupportedFormat(format!(
            "cannot choose output codec for extension `.{other}` (use .pgm or .png)"
        ))),
    }?;
    out.flush()?;
    Ok(())
}

/// Write a binary mask as an image (false -> 0, true -> full scale).
pub fn write_mask(mask: &BinaryMask, path: impl AsRef<Path>) -> Result<(), CodecError> {
    let img = mask_to_image(mask);
    write_image(&img, path)
}

/// Render a mask as an 8-bit image, 0/255.
pub fn mask_to_image(mask: &BinaryMask) -> GrayImage {
    let pixels = mask.bits().iter().map(|&b| if b { 255 } else { 0 }).collect();
    GrayImage::from_pixels(
        mask.width(),
        mask.height(),
        crate::raster::BitDepth::Eight,
        pixels,
    )
    .expect("mask buffer length matches its dimensions")
}

/// Read an image and binarize it: any non-zero pixel becomes true.
pub fn read_mask(path: impl AsRef<Path>) -> Result<BinaryMask, CodecError> {
    let img = read_image(path)?;
    Ok(image_to_mask(&img))
}

/// Binarize an image: non-zero pixels become true.
pub fn image_to_mask(img: &GrayImage) -> BinaryMask {
    BinaryMask::from_bits(
        img.width(),
        img.height(),
        img.pixels().iter().map(|&v| v != 0).collect(),
    )
    .expect("image buffer length matches its dimensions")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::raster::BitDepth;

    #[test]
    fn detect_rejects_unknown_magic() {
        assert!(matches!(
            detect_format(b"GIF89a"),
            Err(CodecError::UnsupportedFormat(_))
        ));
        assert!(matches!(
            detect_format(b"P6\n1 1\n255\n\xff\xff\xff"),
            Err(CodecError::UnsupportedFormat(_))
        ));
    }

    #[test]
    fn write_read_roundtrip_by_extension() {
        let dir = tempfile::tempdir().unwrap();
        let img =
            GrayImage::from_pixels(4, 4, BitDepth::Eight, (0u16..16).collect()).unwrap();
        for name in ["a.pgm", "a.png"] {
            let p = dir.path().join(name);
            write_image(&img, &p).unwrap();
            let back = read_image(&p).unwrap();
            assert_eq!(back, img, "round trip failed for {name}");
        }
    }

    #[test]
    fn sixteen_bit_file_reports_depth() {
        let dir = tempfile::tempdir().unwrap();
        let img =
            GrayImage::from_pixels(2, 2, BitDepth::Sixteen, vec![0, 300, 65535, 4096]).unwrap();
        for name in ["b.pgm", "b.png"] {
            let p = dir.path().join(name);
            write_image(&img, &p).unwrap();
            let back = read_image(&p).unwrap();
            assert_eq!(back.bit_depth(), BitDepth::Sixteen);
            assert_eq!(back, img);
        }
    }

    #[test]
    fn missing_file_is_io_error() {
        assert!(matches!(
            read_image("/nonexistent/nowhere.pgm"),
            Err(CodecError::Io(_))
        ));
    }

    #[test]
    fn mask_image_roundtrip() {
        let m = BinaryMask::from_fn(3, 2, |x, y| (x + y) % 2 == 0);
        assert_eq!(image_to_mask(&mask_to_image(&m)), m);
    }
}
