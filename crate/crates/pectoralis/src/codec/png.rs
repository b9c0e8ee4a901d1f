//! Single-channel PNG, 8- and 16-bit, via the `image` crate.

use std::io::{Cursor, Write};

use image::{DynamicImage, ImageBuffer, Luma, Rgb};

use super::CodecError;
use crate::raster::{BitDepth, GrayImage};

fn decode_error(e: image::ImageError) -> CodecError {
    CodecError::Malformed {
        format: "png",
        detail: e.to_string(),
    }
}

/// Decode a grayscale PNG. Color and alpha-bearing images are rejected.
pub fn read_png(data: &[u8]) -> Result<GrayImage, CodecError> {
    let dynamic = image::load_from_memory_with_format(data, image::ImageFormat::Png)
        .map_err(decode_error)?;
    match dynamic {
        DynamicImage::ImageLuma8(buf) => {
            let (w, h) = buf.dimensions();
            let pixels = buf.into_raw().into_iter().map(u16::from).collect();
            GrayImage::from_pixels(w, h, BitDepth::Eight, pixels).map_err(|e| CodecError::Malformed {
                format: "png",
                detail: e.to_string(),
            })
        }
        DynamicImage::ImageLuma16(buf) => {
            let (w, h) = buf.dimensions();
            GrayImage::from_pixels(w, h, BitDepth::Sixteen, buf.into_raw()).map_err(|e| {
                CodecError::Malformed {
                    format: "png",
                    detail: e.to_string(),
                }
            })
        }
        other => Err(CodecError::ColorUnsupported(format!("{:?}", other.color()))),
    }
}

/// Encode a grayscale PNG at the image's native bit depth.
pub fn write_png(img: &GrayImage, out: &mut impl Write) -> Result<(), CodecError> {
    let mut bytes = Cursor::new(Vec::new());
    match img.bit_depth() {
        BitDepth::Eight => {
            let raw: Vec<u8> = img.pixels().iter().map(|&v| v as u8).collect();
            let buf: ImageBuffer<Luma<u8>, _> =
                ImageBuffer::from_raw(img.width(), img.height(), raw)
                    .expect("pixel buffer length matches dimensions");
            buf.write_to(&mut bytes, image::ImageFormat::Png)
                .map_err(decode_error)?;
        }
        BitDepth::Sixteen => {
            let buf: ImageBuffer<Luma<u16>, _> =
                ImageBuffer::from_raw(img.width(), img.height(), img.pixels().to_vec())
                    .expect("pixel buffer length matches dimensions");
            buf.write_to(&mut bytes, image::ImageFormat::Png)
                .map_err(decode_error)?;
        }
    }
    out.write_all(bytes.get_ref())?;
    Ok(())
}

/// Encode an interleaved 8-bit RGB buffer (row-major, 3 bytes per pixel).
pub fn write_rgb_png(
    width: u32,
    height: u32,
    rgb: &[u8],
    out: &mut impl Write,
) -> Result<(), CodecError> {
    let buf: ImageBuffer<Rgb<u8>, _> = ImageBuffer::from_raw(width, height, rgb.to_vec())
        .expect("rgb buffer length matches dimensions");
    let mut bytes = Cursor::new(Vec::new());
    buf.write_to(&mut bytes, image::ImageFormat::Png)
        .map_err(decode_error)?;
    out.write_all(bytes.get_ref())?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_both_depths() {
        for depth in [BitDepth::Eight, BitDepth::Sixteen] {
            let max = depth.max_value();
            let pixels: Vec<u16> = (0..12u16).map(|i| (i * 97) % (max / 2) + max / 2).collect();
            let img = GrayImage::from_pixels(4, 3, depth, pixels).unwrap();
            let mut buf = Vec::new();
            write_png(&img, &mut buf).unwrap();
            let back = read_png(&buf).unwrap();
            assert_eq!(back, img);
        }
    }

    #[test]
    fn color_png_is_rejected() {
        let rgb: ImageBuffer<Rgb<u8>, Vec<u8>> = ImageBuffer::from_fn(2, 2, |x, y| {
            Rgb([x as u8 * 100, y as u8 * 100, 50])
        });
        let mut bytes = Cursor::new(Vec::new());
        rgb.write_to(&mut bytes, image::ImageFormat::Png).unwrap();
        assert!(matches!(
            read_png(bytes.get_ref()),
            Err(CodecError::ColorUnsupported(_))
        ));
    }

    #[test]
    fn garbage_png_is_malformed() {
        let mut data = Vec::from(&b"\x89PNG\r\n\x1a\n"[..]);
        data.extend_from_slice(&[0u8; 16]);
        assert!(matches!(
            read_png(&data),
            Err(CodecError::Malformed { .. })
        ));
    }
}
