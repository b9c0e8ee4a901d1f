//! The end-to-end segmentation pipeline.
//!
//! Stage order: breast segmentation, orientation detection, intensity
//! windowing, marker construction, geodesic reconstruction, maximum
//! entropy thresholding, morphological cleanup, corner-component
//! selection, boundary extraction. Each stage is also callable on its
//! own; [`segment_pectoral`] runs them all.

mod boundary;
mod config;
mod overlay;
mod stages;

pub use boundary::{extract_boundary, pectoral_stats, PectoralStats};
pub use config::{BreastThreshold, ConfigError, PipelineConfig, WindowMode};
pub use overlay::{render_overlay, RgbImage};
pub use stages::{apply_window, build_marker, detect_orientation, segment_breast};

use std::borrow::Cow;
use std::time::Instant;

use serde::Serialize;

use crate::morphology::{close, connected_components, disk_se, fill_holes, open, reconstruct};
use crate::raster::{BinaryMask, GrayImage, Histogram, Orientation};
use crate::threshold::{apply_threshold, kapur_threshold};

/// A stage-tagged pipeline failure.
#[derive(Debug)]
pub struct PipelineError {
    stage: &'static str,
    message: String,
}

impl PipelineError {
    pub(crate) fn new(stage: &'static str, message: impl Into<String>) -> Self {
        PipelineError {
            stage,
            message: message.into(),
        }
    }

    pub(crate) fn breast(e: impl std::fmt::Display) -> Self {
        Self::new("breast-segmentation", e.to_string())
    }

    pub(crate) fn window(e: impl std::fmt::Display) -> Self {
        Self::new("windowing", e.to_string())
    }

    /// Which stage failed, as a stable kebab-case name.
    pub fn stage(&self) -> &'static str {
        self.stage
    }
}

impl std::fmt::Display for PipelineError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.stage, self.message)
    }
}

impl std::error::Error for PipelineError {}

/// Thresholds the run settled on, for reports and debugging.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct StageThresholds {
    /// Otsu split between background and breast.
    pub breast_otsu: u16,
    /// Otsu split inside the marker strip; None when the strip was blank
    /// and the corner-pixel fallback fired.
    pub marker_otsu: Option<u16>,
    /// Kapur entropy threshold on the reconstructed image; None when the
    /// reconstructed breast was degenerate (no-pectoral-found outcome).
    pub kapur: Option<u16>,
}

/// Wall-clock per stage, milliseconds.
#[derive(Clone, Copy, Debug, Default, Serialize)]
pub struct StageTimings {
    pub breast_ms: f64,
    pub window_ms: f64,
    pub marker_ms: f64,
    pub reconstruct_ms: f64,
    pub threshold_ms: f64,
    pub cleanup_ms: f64,
    pub select_ms: f64,
    pub boundary_ms: f64,
    pub total_ms: f64,
}

/// Intermediate rasters, captured by [`segment_pectoral_staged`].
#[derive(Clone, Debug)]
pub struct StageImages {
    pub breast: BinaryMask,
    pub windowed: GrayImage,
    pub marker: GrayImage,
    pub reconstructed: GrayImage,
    pub candidate: BinaryMask,
    pub closed: BinaryMask,
    pub opened: BinaryMask,
}

/// Everything a segmentation run produces.
#[derive(Clone, Debug)]
pub struct SegmentationResult {
    /// False when no plausible pectoral region was found; the mask is
    /// then empty and stats are absent, but orientation and thresholds
    /// still describe the attempt.
    pub found: bool,
    pub pectoral: BinaryMask,
    /// Interface polyline, ordered top to bottom (see
    /// [`extract_boundary`]).
    pub boundary: Vec<(u32, u32)>,
    pub orientation: Orientation,
    pub stats: Option<PectoralStats>,
    pub thresholds: StageThresholds,
    pub timings: StageTimings,
    pub stages: Option<StageImages>,
}

/// Run the full pipeline.
pub fn segment_pectoral(
    img: &GrayImage,
    cfg: &PipelineConfig,
) -> Result<SegmentationResult, PipelineError> {
    run(img, cfg, false)
}

/// Same as [`segment_pectoral`], additionally keeping every intermediate
/// raster in `result.stages` (for debug dumps; costs memory).
pub fn segment_pectoral_staged(
    img: &GrayImage,
    cfg: &PipelineConfig,
) -> Result<SegmentationResult, PipelineError> {
    run(img, cfg, true)
}

fn run(
    img: &GrayImage,
    cfg: &PipelineConfig,
    capture: bool,
) -> Result<SegmentationResult, PipelineError> {
    cfg.validate()
        .map_err(|e| PipelineError::new("config", e.to_string()))?;

    let work: Cow<'_, GrayImage> = if cfg.invert_input {
        Cow::Owned(img.inverted())
    } else {
        Cow::Borrowed(img)
    };
    let work = work.as_ref();

    let start = Instant::now();
    let mut last = Instant::now();
    let mut lap = move || {
        let ms = last.elapsed().as_secs_f64() * 1e3;
        last = Instant::now();
        ms
    };
    let mut timings = StageTimings::default();

    let (breast, breast_otsu) = stages::breast_core(work, cfg)?;
    let orientation = detect_orientation(&breast);
    timings.breast_ms = lap();

    let windowed = apply_window(work, &breast, cfg)?;
    timings.window_ms = lap();

    let (marker, marker_otsu) = build_marker(&windowed, orientation, cfg);
    timings.marker_ms = lap();

    let reconstructed = reconstruct(&marker, &windowed, cfg.connectivity)
        .map_err(|e| PipelineError::new("reconstruction", e.to_string()))?;
    timings.reconstruct_ms = lap();

    let mut thresholds = StageThresholds {
        breast_otsu,
        marker_otsu,
        kapur: None,
    };

    let recon_hist = Histogram::of(&reconstructed, Some(&breast))
        .map_err(|e| PipelineError::new("thresholding", e.to_string()))?;
    let kapur = match kapur_threshold(&recon_hist) {
        Ok(t) => t,
        Err(_) => {
            // Nothing to threshold: the reconstruction is flat inside the
            // breast, which is what an absent muscle looks like.
            timings.threshold_ms = lap();
            timings.total_ms = start.elapsed().as_secs_f64() * 1e3;
            return Ok(not_found(
                work, &breast, windowed, marker, reconstructed, None, orientation, thresholds,
                timings, capture,
            ));
        }
    };
    thresholds.kapur = Some(kapur.threshold);
    let candidate = apply_threshold(&reconstructed, kapur.threshold, Some(&breast))
        .map_err(|e| PipelineError::new("thresholding", e.to_string()))?;
    timings.threshold_ms = lap();

    let closed = close(&candidate, &disk_se(cfg.close_radius_px(img.width())));
    let opened = open(&closed, &disk_se(cfg.open_radius_px(img.width())));
    // Closing can spill past the breast outline; the muscle is breast
    // tissue by definition, so clip before selecting.
    let cleaned = opened.intersect(&breast);
    timings.cleanup_ms = lap();

    let labeling = connected_components(&cleaned, cfg.connectivity);
    let chosen = select_corner_component(&labeling, &cleaned, orientation, cfg);
    timings.select_ms = lap();

    let Some(id) = chosen else {
        timings.total_ms = start.elapsed().as_secs_f64() * 1e3;
        return Ok(not_found(
            work,
            &breast,
            windowed,
            marker,
            reconstructed,
            Some((candidate, closed, opened)),
            orientation,
            thresholds,
            timings,
            capture,
        ));
    };
    // Texture dips inside the muscle can dip under the threshold in
    // patches wider than the closing disk. The muscle is a solid region
    // and the boundary must trace only the muscle/breast interface, so
    // enclosed holes are filled outright.
    let pectoral = fill_holes(&labeling.mask_of(id), cfg.connectivity);

    let boundary = extract_boundary(&pectoral, orientation);
    let stats = pectoral_stats(work, &pectoral)
        .expect("selected component is a non-empty in-bounds mask");
    timings.boundary_ms = lap();
    timings.total_ms = start.elapsed().as_secs_f64() * 1e3;

    let stages = capture.then(|| StageImages {
        breast,
        windowed,
        marker,
        reconstructed,
        candidate,
        closed,
        opened,
    });

    Ok(SegmentationResult {
        found: true,
        pectoral,
        boundary,
        orientation,
        stats: Some(stats),
        thresholds,
        timings,
        stages,
    })
}

/// The cleaned-up component that reaches into the top strip on the
/// chest-wall side; the biggest one wins when several do.
fn select_corner_component(
    labeling: &crate::morphology::Labeling,
    cleaned: &BinaryMask,
    orientation: Orientation,
    cfg: &PipelineConfig,
) -> Option<u32> {
    let w = cleaned.width();
    let h = cleaned.height();
    let strip_rows = cfg.marker_rows(h);
    let half = w.div_ceil(2);
    let (x_lo, x_hi) = match orientation {
        Orientation::Left => (0, half),
        Orientation::Right => (w - half, w),
    };
    let mut best: Option<&crate::morphology::Component> = None;
    for y in 0..strip_rows.min(h) {
        for x in x_lo..x_hi {
            let id = labeling.label_at(x, y);
            if id == 0 {
                continue;
            }
            let c = &labeling.components()[(id - 1) as usize];
            let better = match best {
                None => true,
                Some(b) => {
                    c.pixel_count > b.pixel_count
                        || (c.pixel_count == b.pixel_count && c.id < b.id)
                }
            };
            if better {
                best = Some(c);
            }
        }
    }
    best.map(|c| c.id)
}

#[allow(clippy::too_many_arguments)]
fn not_found(
    work: &GrayImage,
    breast: &BinaryMask,
    windowed: GrayImage,
    marker: GrayImage,
    reconstructed: GrayImage,
    cleanup: Option<(BinaryMask, BinaryMask, BinaryMask)>,
    orientation: Orientation,
    thresholds: StageThresholds,
    timings: StageTimings,
    capture: bool,
) -> SegmentationResult {
    let (w, h) = (work.width(), work.height());
    let stages = capture.then(|| {
        let (candidate, closed, opened) = cleanup.unwrap_or_else(|| {
            (
                BinaryMask::empty(w, h),
                BinaryMask::empty(w, h),
                BinaryMask::empty(w, h),
            )
        });
        StageImages {
            breast: breast.clone(),
            windowed,
            marker,
            reconstructed,
            candidate,
            closed,
            opened,
        }
    });
    SegmentationResult {
        found: false,
        pectoral: BinaryMask::empty(w, h),
        boundary: Vec::new(),
        orientation,
        stats: None,
        thresholds,
        timings,
        stages,
    }
}
