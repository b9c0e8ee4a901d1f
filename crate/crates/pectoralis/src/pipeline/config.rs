//! Pipeline tuning knobs.
//!
//! Every scale-dependent quantity is a fraction of the image, so one
//! config works for film scans and raw digital images of any resolution.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::morphology::Connectivity;

/// How the upper window bound is read from the breast intensities.
///
/// The dampening step wants the upper bound at "75 percent of the pixel
/// value range", which has two defensible readings; both are available
/// and the range reading is the default.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WindowMode {
    /// Upper bound = lo + fraction * (max - lo): a point along the range.
    RangeFraction,
    /// Upper bound = the fraction-quantile of the breast histogram.
    HistogramPercentile,
}

impl std::str::FromStr for WindowMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "range_fraction" | "range-fraction" => Ok(WindowMode::RangeFraction),
            "histogram_percentile" | "histogram-percentile" => Ok(WindowMode::HistogramPercentile),
            other => Err(format!(
                "window mode must be range_fraction or histogram_percentile, got {other:?}"
            )),
        }
    }
}

/// Selector used to split breast from background.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BreastThreshold {
    Otsu,
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{field} must be strictly between 0 and 1, got {value}")]
    FractionOutOfRange { field: &'static str, value: f64 },
}

/// All pipeline parameters. `Default` gives the values the method was
/// tuned with; per-image overrides go through the CLI or a config file.
#[derive(Clone, Debug, Serialize)]
pub struct PipelineConfig {
    /// Fraction of image height treated as the "first few lines" when
    /// building the marker.
    pub marker_rows_fraction: f64,
    /// Fraction for the window's upper bound (see [`WindowMode`]).
    pub window_upper_percentile: f64,
    /// Reading of `window_upper_percentile`.
    pub window_mode: WindowMode,
    /// Closing disk radius as a fraction of image width.
    pub close_radius_fraction: f64,
    /// Opening disk radius as a fraction of image width.
    pub open_radius_fraction: f64,
    /// Adjacency for reconstruction and component labeling.
    pub connectivity: Connectivity,
    /// Invert intensities first (for representations where tissue is dark).
    pub invert_input: bool,
    /// Breast/background split method.
    pub breast_threshold: BreastThreshold,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            marker_rows_fraction: 0.04,
            window_upper_percentile: 0.75,
            window_mode: WindowMode::RangeFraction,
            close_radius_fraction: 0.01,
            open_radius_fraction: 0.02,
            connectivity: Connectivity::Eight,
            invert_input: false,
            breast_threshold: BreastThreshold::Otsu,
        }
    }
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        let fractions = [
            ("marker_rows_fraction", self.marker_rows_fraction),
            ("window_upper_percentile", self.window_upper_percentile),
            ("close_radius_fraction", self.close_radius_fraction),
            ("open_radius_fraction", self.open_radius_fraction),
        ];
        for (field, value) in fractions {
            if !(value > 0.0 && value < 1.0) {
                return Err(ConfigError::FractionOutOfRange { field, value });
            }
        }
        Ok(())
    }

    /// Marker strip height in rows: ceil(fraction * height), at least 1.
    pub(crate) fn marker_rows(&self, height: u32) -> u32 {
        ((self.marker_rows_fraction * height as f64).ceil() as u32).clamp(1, height)
    }

    /// Disk radii in pixels; rounding never drops below one pixel, so the
    /// cleanup stays a real operation on small test images.
    pub(crate) fn close_radius_px(&self, width: u32) -> u32 {
        ((self.close_radius_fraction * width as f64).round() as u32).max(1)
    }

    pub(crate) fn open_radius_px(&self, width: u32) -> u32 {
        ((self.open_radius_fraction * width as f64).round() as u32).max(1)
    }
}
