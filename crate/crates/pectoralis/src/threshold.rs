//! Automatic global threshold selectors.
//!
//! Two selectors drive the pipeline: Otsu's between-class-variance
//! criterion (marker construction) and Kapur's maximum-entropy criterion
//! (pectoral segmentation). Both partition intensities into a low class
//! `{v <= t}` and a high class `{v > t}`, consider only thresholds where
//! both classes are non-empty, and break ties toward the smallest
//! maximizing threshold so results are reproducible across platforms.

use thiserror::Error;

use crate::raster::{BinaryMask, GrayImage, Histogram, RasterError};

/// Errors from threshold selection.
#[derive(Debug, Error)]
pub enum ThresholdError {
    #[error("degenerate histogram: {occupied} occupied bin(s), need at least 2")]
    DegenerateHistogram { occupied: usize },
}

/// A selected threshold together with the objective value it attains.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThresholdResult {
    /// Chosen threshold; the low class is `{v <= threshold}`.
    pub threshold: u16,
    /// Between-class variance (Otsu) or total class entropy (Kapur) at the
    /// chosen threshold.
    pub objective: f64,
}

fn occupied_range(h: &Histogram) -> Result<(u16, u16), ThresholdError> {
    let occupied = h.occupied_bins();
    if occupied < 2 {
        return Err(ThresholdError::DegenerateHistogram { occupied });
    }
    // Safe: occupied >= 2 implies both bounds exist.
    Ok((h.first_occupied().unwrap(), h.last_occupied().unwrap()))
}

/// Between-class variance for a split carrying exact integer tallies.
///
/// `n0`/`s0` are the population and intensity sum of the low class,
/// `n1`/`s1` of the high class. Algebraically equal to
/// `w0*w1*(mu0 - mu1)^2` with normalized weights, but evaluated as
/// `(s0*n1 - s1*n0)^2 / (n0*n1*N^2)` so both classes' statistics stay
/// in exact integer arithmetic until the final conversion.
fn between_class_variance(n0: u64, s0: u64, n1: u64, s1: u64) -> f64 {
    debug_assert!(n0 > 0 && n1 > 0);
    let cross = s0 as i128 * n1 as i128 - s1 as i128 * n0 as i128;
    let cross = cross as f64;
    let total = (n0 + n1) as f64;
    cross * cross / (n0 as f64 * n1 as f64 * total * total)
}

/// Otsu's method: the threshold maximizing between-class variance.
///
/// Requires at least two occupied bins; ties break toward the smallest
/// maximizing threshold.
pub fn otsu_threshold(h: &Histogram) -> Result<ThresholdResult, ThresholdError> {
    let (lo, hi) = occupied_range(h)?;
    let counts = h.counts();
    let total_n: u64 = counts.iter().sum();
    let total_s: u64 = counts
        .iter()
        .enumerate()
        .map(|(v, &c)| v as u64 * c)
        .sum();

    let mut n0 = 0u64;
    let mut s0 = 0u64;
    let mut best_t = lo;
    let mut best_obj = f64::NEG_INFINITY;
    // Both classes are non-empty exactly for t in [lo, hi).
    for t in lo..hi {
        n0 += counts[t as usize];
        s0 += t as u64 * counts[t as usize];
        let n1 = total_n - n0;
        let s1 = total_s - s0;
        let obj = between_class_variance(n0, s0, n1, s1);
        if obj > best_obj {
            best_obj = obj;
            best_t = t;
        }
    }
    Ok(ThresholdResult {
        threshold: best_t,
        objective: best_obj,
    })
}

/// Kapur's maximum-entropy method: the threshold maximizing the sum of
/// Shannon entropies of the two classes (natural logarithm).
///
/// Zero-count bins contribute nothing. Requires at least two occupied
/// bins; ties break toward the smallest maximizing threshold.
pub fn kapur_threshold(h: &Histogram) -> Result<ThresholdResult, ThresholdError> {
    let (lo, hi) = occupied_range(h)?;
    let counts = h.counts();
    let total_n: u64 = counts.iter().sum();
    // The class entropy -sum (c/C) ln(c/C) over class bins equals
    // ln C - (sum c ln c)/C, which lets one prefix sum serve every split.
    let total_clogc: f64 = counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| c as f64 * (c as f64).ln())
        .sum();

    let mut n0 = 0u64;
    let mut clogc0 = 0.0f64;
    let mut best_t = lo;
    let mut best_obj = f64::NEG_INFINITY;
    for t in lo..hi {
        let c = counts[t as usize];
        if c > 0 {
            n0 += c;
            clogc0 += c as f64 * (c as f64).ln();
        }
        let n1 = total_n - n0;
        let h_low = (n0 as f64).ln() - clogc0 / n0 as f64;
        let h_high = (n1 as f64).ln() - (total_clogc - clogc0) / n1 as f64;
        let obj = h_low + h_high;
        if obj > best_obj {
            best_obj = obj;
            best_t = t;
        }
    }
    Ok(ThresholdResult {
        threshold: best_t,
        objective: best_obj,
    })
}

/// Binarize: true exactly where `pixel > t` (and inside `roi`, if given).
///
/// The threshold must be representable at the image's bit depth.
pub fn apply_threshold(
    img: &GrayImage,
    t: u16,
    roi: Option<&BinaryMask>,
) -> Result<BinaryMask, RasterError> {
    assert!(
        t <= img.max_value(),
        "threshold {t} out of range for bit depth"
    );
    if let Some(mask) = roi {
        if !mask.matches_image(img) {
            return Err(RasterError::DimensionMismatch {
                expected_width: img.width(),
                expected_height: img.height(),
                width: mask.width(),
                height: mask.height(),
            });
        }
    }
    let bits = match roi {
        None => img.pixels().iter().map(|&v| v > t).collect(),
        Some(mask) => img
            .pixels()
            .iter()
            .zip(mask.bits())
            .map(|(&v, &m)| m && v > t)
            .collect(),
    };
    Ok(BinaryMask::from_bits(img.width(), img.height(), bits)
        .expect("mask buffer length matches image dimensions"))
}
