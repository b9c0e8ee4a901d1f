//! Individual pipeline stages, callable on their own for inspection.

use crate::morphology::{connected_components, fill_holes};
use crate::raster::{min_max, BinaryMask, GrayImage, Histogram, Orientation};
use crate::threshold::{apply_threshold, otsu_threshold};

use super::{PipelineConfig, PipelineError};

/// Breast-plus-pectoral region: Otsu foreground, largest connected
/// component, holes filled. Applies `cfg.invert_input` first.
pub fn segment_breast(img: &GrayImage, cfg: &PipelineConfig) -> Result<BinaryMask, PipelineError> {
    if cfg.invert_input {
        breast_core(&img.inverted(), cfg).map(|(m, _)| m)
    } else {
        breast_core(img, cfg).map(|(m, _)| m)
    }
}

/// Same as [`segment_breast`] but on an already-inverted image, also
/// reporting the Otsu threshold used.
pub(crate) fn breast_core(
    img: &GrayImage,
    cfg: &PipelineConfig,
) -> Result<(BinaryMask, u16), PipelineError> {
    let hist = Histogram::of(img, None).map_err(PipelineError::breast)?;
    let t = otsu_threshold(&hist).map_err(PipelineError::breast)?;
    let fg = apply_threshold(img, t.threshold, None).map_err(PipelineError::breast)?;
    // Otsu leaves both classes non-empty, so a largest component exists.
    let labeling = connected_components(&fg, cfg.connectivity);
    let largest = labeling
        .largest()
        .expect("thresholded foreground is non-empty");
    let breast = fill_holes(&labeling.mask_of(largest.id), cfg.connectivity);
    Ok((breast, t.threshold))
}

/// Which side the chest wall is on: the half of the columns holding more
/// breast pixels. The middle column of an odd-width image counts for
/// neither side, so mirroring the mask mirrors the answer; an exact tie
/// reads as Right.
pub fn detect_orientation(breast: &BinaryMask) -> Orientation {
    let w = breast.width();
    let half = w / 2;
    let mut left = 0u64;
    let mut right = 0u64;
    for (x, _) in breast.iter_true() {
        if x < half {
            left += 1;
        } else if x >= w - half {
            right += 1;
        }
    }
    if left > right {
        Orientation::Left
    } else {
        Orientation::Right
    }
}

/// Linear intensity window over the breast region.
///
/// The lower bound is the breast minimum; the upper bound sits at
/// `cfg.window_upper_percentile` along the breast range (or at that
/// histogram quantile, per `cfg.window_mode`). Values map linearly onto
/// the full scale and clamp at the ends; everything outside the breast
/// goes to 0. Pushing the upper bound below the maximum saturates the
/// brightest structures, which is what lets the marker and the
/// reconstruction treat the pectoral muscle as a plateau.
pub fn apply_window(
    img: &GrayImage,
    breast: &BinaryMask,
    cfg: &PipelineConfig,
) -> Result<GrayImage, PipelineError> {
    let (lo, hi_all) = min_max(img, breast).map_err(PipelineError::window)?;
    let hi = match cfg.window_mode {
        super::WindowMode::RangeFraction => {
            lo + (cfg.window_upper_percentile * (hi_all - lo) as f64).round() as u16
        }
        super::WindowMode::HistogramPercentile => {
            let hist = Histogram::of(img, Some(breast)).map_err(PipelineError::window)?;
            let total = hist.total();
            let target = ((cfg.window_upper_percentile * total as f64).ceil() as u64).max(1);
            let mut cum = 0u64;
            let mut q = lo;
            for (v, &c) in hist.counts().iter().enumerate() {
                cum += c;
                if cum >= target {
                    q = v as u16;
                    break;
                }
            }
            q
        }
    };
    if hi <= lo {
        return Err(PipelineError::new(
            "windowing",
            format!("flat breast region: window [{lo}, {hi}] has zero width"),
        ));
    }

    let max = img.max_value();
    let scale = max as f64 / (hi - lo) as f64;
    let pixels = img
        .pixels()
        .iter()
        .zip(breast.bits())
        .map(|(&v, &inside)| {
            if !inside {
                0
            } else {
                let stretched = ((v.saturating_sub(lo)) as f64 * scale).round();
                stretched.clamp(0.0, max as f64) as u16
            }
        })
        .collect();
    Ok(GrayImage::from_pixels(img.width(), img.height(), img.bit_depth(), pixels)
        .expect("windowed pixels stay in range"))
}

/// Marker for the geodesic reconstruction: the Otsu foreground of the
/// top rows, carrying its windowed intensities; zero elsewhere. A blank
/// strip (single-valued histogram) degrades to a one-pixel marker at the
/// orientation-side top corner, whose value there is typically 0 and
/// leads to the no-pectoral-found outcome downstream.
///
/// Returns the marker and the strip's Otsu threshold (None on fallback).
pub fn build_marker(
    windowed: &GrayImage,
    orient: Orientation,
    cfg: &PipelineConfig,
) -> (GrayImage, Option<u16>) {
    let w = windowed.width();
    let h = windowed.height();
    let strip_rows = cfg.marker_rows(h);
    let strip = BinaryMask::from_fn(w, h, |_, y| y < strip_rows);
    let hist = Histogram::of(windowed, Some(&strip)).expect("strip mask matches image");

    let mut pixels = vec![0u16; (w as usize) * (h as usize)];
    match otsu_threshold(&hist) {
        Ok(t) => {
            for y in 0..strip_rows {
                let row = windowed.row(y);
                for x in 0..w {
                    if row[x as usize] > t.threshold {
                        pixels[(y * w + x) as usize] = row[x as usize];
                    }
                }
            }
            let marker =
                GrayImage::from_pixels(w, h, windowed.bit_depth(), pixels).expect("values copied");
            (marker, Some(t.threshold))
        }
        Err(_) => {
            let corner_x = orient.chest_wall_column(w);
            pixels[corner_x as usize] = windowed.get(corner_x, 0);
            let marker =
                GrayImage::from_pixels(w, h, windowed.bit_depth(), pixels).expect("values copied");
            (marker, None)
        }
    }
}
