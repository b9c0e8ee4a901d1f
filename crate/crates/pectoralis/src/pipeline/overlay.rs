//! Visual overlay: windowed grayscale base, red-tinted muscle, yellow
//! boundary curve.

use crate::raster::GrayImage;

use super::SegmentationResult;

/// Plain interleaved 8-bit RGB raster.
#[derive(Clone, Debug)]
pub struct RgbImage {
    pub width: u32,
    pub height: u32,
    /// `3 * width * height` bytes, row-major, RGB order.
    pub data: Vec<u8>,
}

const TINT_ALPHA: f64 = 0.4;

/// Render `result` over a grayscale base (normally the windowed stage
/// image). The base is scaled to 8 bits; pectoral pixels are blended
/// toward red at a fixed alpha, then the boundary is drawn in pure
/// yellow, one pixel wide, on top.
pub fn render_overlay(base: &GrayImage, result: &SegmentationResult) -> RgbImage {
    assert!(
        result.pectoral.matches_image(base),
        "overlay base and result dimensions differ"
    );
    let w = base.width();
    let h = base.height();
    let max = base.max_value() as f64;
    let mut data = vec![0u8; 3 * w as usize * h as usize];

    for (i, &v) in base.pixels().iter().enumerate() {
        let g = ((v as f64) * 255.0 / max).round() as u8;
        let (r, gr, b) = if result.pectoral.bits()[i] {
            let dim = ((1.0 - TINT_ALPHA) * g as f64).round() as u8;
            let red = ((1.0 - TINT_ALPHA) * g as f64 + TINT_ALPHA * 255.0).round() as u8;
            (red, dim, dim)
        } else {
            (g, g, g)
        };
        data[3 * i] = r;
        data[3 * i + 1] = gr;
        data[3 * i + 2] = b;
    }
    for &(x, y) in &result.boundary {
        let i = (y * w + x) as usize;
        data[3 * i] = 255;
        data[3 * i + 1] = 255;
        data[3 * i + 2] = 0;
    }
    RgbImage {
        width: w,
        height: h,
        data,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pipeline::{SegmentationResult, StageThresholds, StageTimings};
    use crate::raster::{BinaryMask, BitDepth, Orientation};

    fn result_with(pectoral: BinaryMask, boundary: Vec<(u32, u32)>) -> SegmentationResult {
        SegmentationResult {
            found: !pectoral.is_empty(),
            pectoral,
            boundary,
            orientation: Orientation::Left,
            stats: None,
            thresholds: StageThresholds {
                breast_otsu: 0,
                marker_otsu: None,
                kapur: None,
            },
            timings: StageTimings::default(),
            stages: None,
        }
    }

    #[test]
    fn empty_result_is_pure_grayscale() {
        let base = GrayImage::from_pixels(2, 2, BitDepth::Eight, vec![0, 85, 170, 255]).unwrap();
        let rgb = render_overlay(&base, &result_with(BinaryMask::empty(2, 2), vec![]));
        for px in rgb.data.chunks(3) {
            assert_eq!(px[0], px[1]);
            assert_eq!(px[1], px[2]);
        }
        assert_eq!(rgb.data[3], 85);
    }

    #[test]
    fn mask_pixels_lean_red_boundary_is_yellow() {
        let base = GrayImage::from_pixels(2, 1, BitDepth::Eight, vec![100, 100]).unwrap();
        let mut m = BinaryMask::empty(2, 1);
        m.set(0, 0, true);
        m.set(1, 0, true);
        let rgb = render_overlay(&base, &result_with(m, vec![(1, 0)]));
        assert!(rgb.data[0] > rgb.data[2], "red channel must dominate blue");
        assert_eq!(&rgb.data[3..6], &[255, 255, 0]);
    }

    #[test]
    fn sixteen_bit_base_scales() {
        let base =
            GrayImage::from_pixels(1, 1, BitDepth::Sixteen, vec![65535]).unwrap();
        let rgb = render_overlay(&base, &result_with(BinaryMask::empty(1, 1), vec![]));
        assert_eq!(&rgb.data, &[255, 255, 255]);
    }
}
