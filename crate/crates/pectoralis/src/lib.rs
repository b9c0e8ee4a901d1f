//! Pectoral muscle segmentation for MLO-view mammograms.
//!
//! The pectoral muscle shows up in a mediolateral-oblique mammogram as a
//! bright, roughly triangular region in the top corner on the chest-wall
//! side. Its fibrous texture mimics dense parenchyma, so leaving it in
//! place skews density scoring and breast-region statistics. This crate
//! segments that region and reports its boundary, which may be curved.
//!
//! The pipeline:
//!
//! 1. intensity windowing to stretch the upper range where the muscle
//!    lives,
//! 2. a marker built from the top rows by Otsu thresholding,
//! 3. grayscale geodesic reconstruction by dilation of the marker under
//!    the windowed image, which suppresses structures not connected to
//!    the marker,
//! 4. Kapur maximum-entropy thresholding of the reconstructed image,
//! 5. morphological close/open cleanup and selection of the component
//!    touching the expected corner.
//!
//! The [`phantom`] module generates synthetic mammogram-like rasters with
//! known ground truth so the whole chain can be validated quantitatively.
//!
//! Most callers want [`pipeline::segment_pectoral`] on an image loaded
//! through [`codec::read_image`], or the `pectoralis` binary which wraps
//! the same entry points.

pub mod batch;
pub mod codec;
pub mod kv;
pub mod morphology;
pub mod phantom;
pub mod pipeline;
pub mod raster;
pub mod threshold;

pub use pipeline::{segment_pectoral, PipelineConfig, PipelineError, SegmentationResult};
pub use raster::{BinaryMask, BitDepth, GrayImage, Histogram, Orientation};
pub use threshold::{apply_threshold, kapur_threshold, otsu_threshold, ThresholdResult};
