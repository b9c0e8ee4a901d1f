//! Synthetic MLO-view phantoms with exact ground truth, plus the
//! metrics and error taxonomy the validation suites score against.
//!
//! A phantom is a dark field, a bright breast half-disc on the
//! chest-wall edge, a brighter pectoral wedge in the top corner, and
//! optional dense blobs inside the breast (the classic confounder for
//! muscle segmentation). Geometry is exact by construction, so the
//! generator returns pixel-true masks alongside the image.

mod suite;
mod textspec;

pub use suite::{suite_specs, SuitePreset};
pub use textspec::{format_spec, parse_spec};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::Serialize;
use thiserror::Error;

use crate::kv::KvError;
use crate::morphology::{dilate, disk_se, erode};
use crate::raster::{BinaryMask, BitDepth, GrayImage, Orientation, RasterError};

/// Fraction of the height where a straight edge meets the chest wall.
const STRAIGHT_EXIT_FRAC: f64 = 0.75;
/// Breast half-disc: center height and radius as fractions of height.
const DISC_CY_FRAC: f64 = 0.45;
const DISC_R_FRAC: f64 = 0.42;
/// No part of the edge may come closer than this to the far side; a
/// muscle spanning the full width is not a valid MLO view.
const EDGE_LIMIT_FRAC: f64 = 0.9;

// Fibrous-texture parameters. The tissue gets low-frequency plane
// waves; the muscle gets faint striation waves plus small isolated
// pits on a jittered grid. Pit floors stay above the tissue by
// construction (depth is capped at a fraction of the muscle-tissue
// gap), and pits never touch each other, so flooding during
// reconstruction is never dammed. The pits' downward tail is what
// pins the entropy cut below the muscle mode, so the cut inevitably
// slices through some pit cores; confining the cores to the wedge
// interior (PIT_EDGE_MARGIN) guarantees every core lost that way is
// an enclosed hole the pipeline can fill, never a notch in the
// traced boundary. The striations keep the muscle mode spread over
// many bins even at zero noise; without them the unpitted majority
// lands in a single bin, and a point mass contributes no entropy for
// the threshold criterion to work against.
const TISSUE_WAVE_AMP: f64 = 4.0;
const MUSCLE_WAVE_AMP: f64 = 3.0;
const TISSUE_WAVE_COUNT: usize = 8;
const PIT_CELL: u32 = 12;
const PIT_PRESENCE: f64 = 0.9;
const PIT_SIGMA_LO: f64 = 1.6;
const PIT_SIGMA_HI: f64 = 2.6;
const PIT_DEPTH_FLOOR: f64 = 6.0;
const PIT_DEPTH_GAP_FRAC: f64 = 0.42;
/// Pit cores spawn only this deep inside the muscle wedge, in pixels.
/// Must exceed the pipeline's opening radius by a comfortable factor:
/// the opening erodes the wedge from every side (image edges included)
/// and re-grows it from the surviving interior, so a sub-threshold pit
/// slope inside that re-growth band would leave a permanent notch.
const PIT_EDGE_MARGIN: u32 = 14;
/// Muscle rows/columns this close to the top edge or the chest wall
/// carry no texture modulation at all. An entropy cut always lands
/// somewhere inside the texture's dim tail, and a dim pixel on the
/// image border becomes a gap no closing or hole-filling can repair;
/// keeping the border band solid is the generator's guarantee that
/// such gaps stay interior.
const TEXTURE_CALM_BAND: u32 = 8;
/// Skin line thickness along the air interface, in pixels.
const SKIN_THICKNESS: u32 = 2;
const WAVE_SEED_SALT: u64 = 0x9e37_79b9_7f4a_7c15;
const PIT_SEED_SALT: u64 = 0x6a09_e667_f3bc_c909;
const STRIATION_SEED_SALT: u64 = 0xbb67_ae85_84ca_a73b;

/// The muscle boundary, as horizontal distance from the chest wall.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PectoralEdge {
    /// Line at `angle_deg` from the horizontal, meeting the chest wall
    /// at 3/4 height. 90 degrees degenerates to a zero-area muscle
    /// (the absent-muscle case).
    Straight { angle_deg: f64 },
    /// Quadratic `d(y) = c0 + c1*y + c2*y^2`, in pixels. Rows where
    /// `d(y) <= 0` carry no muscle.
    Curved { c0: f64, c1: f64, c2: f64 },
}

/// A dense-tissue disc, clipped to the breast and never painted over
/// the muscle. Coordinates are in the final image frame.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Blob {
    pub cx: f64,
    pub cy: f64,
    pub radius: f64,
    pub intensity: u16,
}

/// How the generator fills the regions it draws.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Texture {
    /// Flat levels plus optional noise. Analytically convenient, but a
    /// constant-level wedge occupies a single histogram bin after
    /// windowing, which no entropy criterion can anchor a threshold
    /// next to. Best for geometry and determinism tests.
    #[default]
    Plain,
    /// Realistic intensity structure: low-frequency waves in the dense
    /// tissue, faint striations and fibrous pits in the muscle, and a
    /// maximum-brightness skin line along the air interface (so
    /// windowing never saturates the muscle into one bin). Validation
    /// suites use this.
    Fibrous,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PhantomSpec {
    pub width: u32,
    pub height: u32,
    pub orientation: Orientation,
    pub edge: PectoralEdge,
    pub pectoral_level: u16,
    pub breast_level: u16,
    pub background_level: u16,
    pub blobs: Vec<Blob>,
    pub texture: Texture,
    /// Gaussian noise, in intensity units, applied to every pixel.
    pub noise_sigma: f64,
    pub seed: u64,
}

impl Default for PhantomSpec {
    fn default() -> Self {
        PhantomSpec {
            width: 256,
            height: 256,
            orientation: Orientation::Left,
            edge: PectoralEdge::Straight { angle_deg: 60.0 },
            pectoral_level: 200,
            breast_level: 120,
            background_level: 10,
            blobs: Vec::new(),
            texture: Texture::Plain,
            noise_sigma: 0.0,
            seed: 0,
        }
    }
}

#[derive(Debug, Error)]
pub enum PhantomError {
    #[error("invalid phantom spec: {0}")]
    InvalidSpec(String),
    #[error(transparent)]
    Kv(#[from] KvError),
}

fn invalid(msg: impl Into<String>) -> PhantomError {
    PhantomError::InvalidSpec(msg.into())
}

impl PhantomSpec {
    /// Depth is inferred from the brightest level in the spec.
    pub fn bit_depth(&self) -> BitDepth {
        let blob_max = self.blobs.iter().map(|b| b.intensity).max().unwrap_or(0);
        let top = self
            .pectoral_level
            .max(self.breast_level)
            .max(self.background_level)
            .max(blob_max);
        if top <= u8::MAX as u16 {
            BitDepth::Eight
        } else {
            BitDepth::Sixteen
        }
    }

    pub fn validate(&self) -> Result<(), PhantomError> {
        if self.width < 16 || self.height < 16 {
            return Err(invalid("image must be at least 16x16"));
        }
        if self.pectoral_level <= self.breast_level {
            return Err(invalid(format!(
                "pectoral_level {} must exceed breast_level {}",
                self.pectoral_level, self.breast_level
            )));
        }
        if self.background_level >= self.breast_level {
            return Err(invalid(format!(
                "background_level {} must be below breast_level {}",
                self.background_level, self.breast_level
            )));
        }
        if !self.noise_sigma.is_finite() || self.noise_sigma < 0.0 {
            return Err(invalid(format!("noise_sigma {} invalid", self.noise_sigma)));
        }
        match self.edge {
            PectoralEdge::Straight { angle_deg } => {
                if !(angle_deg > 0.0 && angle_deg <= 90.0) {
                    return Err(invalid(format!(
                        "angle_deg {angle_deg} outside (0, 90]"
                    )));
                }
            }
            PectoralEdge::Curved { c0, c1, c2 } => {
                if ![c0, c1, c2].iter().all(|c| c.is_finite()) {
                    return Err(invalid("curved edge coefficients must be finite"));
                }
            }
        }
        for (i, b) in self.blobs.iter().enumerate() {
            if !(b.radius > 0.0 && b.radius.is_finite())
                || !b.cx.is_finite()
                || !b.cy.is_finite()
            {
                return Err(invalid(format!("blob {i}: bad geometry")));
            }
            if b.intensity < self.breast_level {
                return Err(invalid(format!(
                    "blob {i}: intensity {} below breast_level {}",
                    b.intensity, self.breast_level
                )));
            }
        }
        let limit = EDGE_LIMIT_FRAC * self.width as f64;
        if DISC_R_FRAC * self.height as f64 >= limit {
            return Err(invalid("image too narrow for the breast disc"));
        }
        let d = self.edge_profile();
        for y in 0..self.height {
            let v = d(y as f64 + 0.5);
            if v >= limit {
                return Err(invalid(format!(
                    "pectoral edge exits the side of the image at row {y} \
                     (reach {v:.1}px, limit {limit:.1}px)"
                )));
            }
        }
        Ok(())
    }

    /// Edge distance from the chest wall as a function of y, in the
    /// chest-on-the-left frame.
    fn edge_profile(&self) -> Box<dyn Fn(f64) -> f64> {
        match self.edge {
            PectoralEdge::Straight { angle_deg } => {
                let exit_y = STRAIGHT_EXIT_FRAC * self.height as f64;
                let x_top = if angle_deg >= 90.0 {
                    0.0
                } else {
                    exit_y / angle_deg.to_radians().tan()
                };
                Box::new(move |y| x_top * (1.0 - y / exit_y))
            }
            PectoralEdge::Curved { c0, c1, c2 } => {
                Box::new(move |y| c0 + y * (c1 + y * c2))
            }
        }
    }
}

/// Sum of low-frequency plane-wave cosines, roughly unit spread.
fn wave_field(w: u32, h: u32, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let min_dim = w.min(h) as f64;
    let waves: Vec<(f64, f64, f64)> = (0..TISSUE_WAVE_COUNT)
        .map(|_| {
            let theta: f64 = rng.random_range(0.0..std::f64::consts::PI);
            let lambda: f64 = rng.random_range(0.25..0.6) * min_dim;
            let phase: f64 = rng.random_range(0.0..std::f64::consts::TAU);
            (theta, lambda, phase)
        })
        .collect();
    let mut out = vec![0.0; (w as usize) * (h as usize)];
    for y in 0..h {
        for x in 0..w {
            let mut v = 0.0;
            for &(theta, lambda, phase) in &waves {
                let proj = x as f64 * theta.cos() + y as f64 * theta.sin();
                v += (std::f64::consts::TAU * proj / lambda + phase).cos();
            }
            out[(y * w + x) as usize] = v / (TISSUE_WAVE_COUNT as f64).sqrt();
        }
    }
    out
}

/// One small Gaussian pit per jittered grid cell (with gaps), cores
/// restricted to `zone`. Deep pit cores stay isolated, so the dim
/// spots never chain into a barrier that could dam a geodesic flood.
/// The rng draws are identical for every cell whether or not it
/// paints, so shrinking the zone never reshuffles the other pits.
fn pit_field(w: u32, h: u32, seed: u64, max_depth: f64, zone: &BinaryMask) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = vec![0.0; (w as usize) * (h as usize)];
    let hi = max_depth.max(PIT_DEPTH_FLOOR + 1.0);
    let mut gy = 0;
    while gy * PIT_CELL < h {
        let mut gx = 0;
        while gx * PIT_CELL < w {
            let present: f64 = rng.random_range(0.0..1.0);
            let cell = PIT_CELL as f64;
            let cx: f64 = (gx * PIT_CELL) as f64 + rng.random_range(3.0..cell - 3.0);
            let cy: f64 = (gy * PIT_CELL) as f64 + rng.random_range(3.0..cell - 3.0);
            let sgm: f64 = rng.random_range(PIT_SIGMA_LO..PIT_SIGMA_HI);
            let depth: f64 = rng.random_range(PIT_DEPTH_FLOOR..hi);
            let (icx, icy) = (cx.round() as i64, cy.round() as i64);
            let in_zone = icx >= 0
                && icx < w as i64
                && icy >= 0
                && icy < h as i64
                && zone.get(icx as u32, icy as u32);
            if present < PIT_PRESENCE && in_zone {
                let r = (3.0 * sgm).ceil() as i64;
                for y in (icy - r).max(0)..=(icy + r).min(h as i64 - 1) {
                    for x in (icx - r).max(0)..=(icx + r).min(w as i64 - 1) {
                        let dx = x as f64 - cx;
                        let dy = y as f64 - cy;
                        out[(y as u32 * w + x as u32) as usize] +=
                            depth * (-(dx * dx + dy * dy) / (2.0 * sgm * sgm)).exp();
                    }
                }
            }
            gx += 1;
        }
        gy += 1;
    }
    out
}

/// Render a spec into an image plus its exact pectoral and breast masks.
///
/// Deterministic: the same spec always yields bit-identical output
/// (noise comes from a ChaCha8 stream seeded by `spec.seed`). A `Right`
/// phantom is the exact mirror of the `Left` one with the same seed.
pub fn generate_phantom(
    spec: &PhantomSpec,
) -> Result<(GrayImage, BinaryMask, BinaryMask), PhantomError> {
    spec.validate()?;
    let (w, h) = (spec.width, spec.height);
    let depth = spec.bit_depth();
    let d = spec.edge_profile();
    let disc_cy = DISC_CY_FRAC * h as f64;
    let disc_r2 = (DISC_R_FRAC * h as f64).powi(2);

    // work in the chest-on-the-left frame; mirror at the end
    let blobs: Vec<Blob> = spec
        .blobs
        .iter()
        .map(|b| match spec.orientation {
            Orientation::Left => *b,
            Orientation::Right => Blob {
                cx: w as f64 - b.cx,
                ..*b
            },
        })
        .collect();

    let n = w as usize * h as usize;
    let mut levels: Vec<u16> = Vec::with_capacity(n);
    let mut wedge_bits: Vec<bool> = Vec::with_capacity(n);
    let mut breast_bits: Vec<bool> = Vec::with_capacity(n);
    for y in 0..h {
        let py = y as f64 + 0.5;
        let edge_x = d(py);
        let dy2 = (py - disc_cy).powi(2);
        for x in 0..w {
            let px = x as f64 + 0.5;
            let in_wedge = px < edge_x;
            let in_disc = px * px + dy2 <= disc_r2;
            let level = if in_wedge {
                spec.pectoral_level
            } else if in_disc {
                let mut v = spec.breast_level;
                for b in &blobs {
                    if (px - b.cx).powi(2) + (py - b.cy).powi(2) <= b.radius * b.radius {
                        v = v.max(b.intensity);
                    }
                }
                v
            } else {
                spec.background_level
            };
            levels.push(level);
            wedge_bits.push(in_wedge);
            breast_bits.push(in_wedge || in_disc);
        }
    }

    if spec.texture == Texture::Fibrous {
        let max = depth.max_value() as f64;
        let gap = (spec.pectoral_level - spec.breast_level) as f64;
        let waves = wave_field(w, h, spec.seed ^ WAVE_SEED_SALT);
        let striations = wave_field(w, h, spec.seed ^ STRIATION_SEED_SALT);
        let wedge = BinaryMask::from_bits(w, h, wedge_bits.clone()).expect("sized");
        let pit_zone = erode(&wedge, &disk_se(PIT_EDGE_MARGIN));
        let pits = pit_field(w, h, spec.seed ^ PIT_SEED_SALT, PIT_DEPTH_GAP_FRAC * gap, &pit_zone);
        let shape = BinaryMask::from_bits(w, h, breast_bits.clone()).expect("sized");
        // skin: breast pixels within SKIN_THICKNESS of in-image background
        let skin = dilate(&shape.complement(), &disk_se(SKIN_THICKNESS)).intersect(&shape);
        let pit_cap = PIT_DEPTH_GAP_FRAC * gap;
        for y in 0..h {
            for x in 0..w {
                let i = (y * w + x) as usize;
                if skin.get(x, y) {
                    levels[i] = depth.max_value();
                } else if wedge_bits[i] {
                    if x < TEXTURE_CALM_BAND || y < TEXTURE_CALM_BAND {
                        continue;
                    }
                    let v = levels[i] as f64 + MUSCLE_WAVE_AMP * striations[i]
                        - pits[i].min(pit_cap);
                    levels[i] = v.round().clamp(0.0, max) as u16;
                } else if breast_bits[i] {
                    let v = levels[i] as f64 + TISSUE_WAVE_AMP * waves[i];
                    levels[i] = v.round().clamp(0.0, max) as u16;
                }
            }
        }
    }

    if spec.noise_sigma > 0.0 {
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
        let normal = Normal::new(0.0, spec.noise_sigma).expect("sigma validated");
        let max = depth.max_value() as f64;
        for v in &mut levels {
            let noisy = (*v as f64 + normal.sample(&mut rng)).round();
            *v = noisy.clamp(0.0, max) as u16;
        }
    }

    let mut img = GrayImage::from_pixels(w, h, depth, levels).expect("levels fit the depth");
    let mut pectoral = BinaryMask::from_bits(w, h, wedge_bits).expect("sized to the image");
    let mut breast = BinaryMask::from_bits(w, h, breast_bits).expect("sized to the image");
    if spec.orientation == Orientation::Right {
        img = img.flipped_horizontal();
        pectoral = pectoral.flipped_horizontal();
        breast = breast.flipped_horizontal();
    }
    Ok((img, pectoral, breast))
}

/// Segmentation outcome taxonomy. `Correct` demands both overshoot and
/// undershoot stay within 5% of the truth area, which forces
/// dice >= 0.95.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorClass {
    Correct,
    /// Extra tissue claimed as muscle (over 5% of truth area).
    DenseAsMuscle,
    /// Muscle left out of the prediction (over 5% of truth area).
    MuscleAsBreast,
    Both,
    /// Empty prediction against a non-empty truth.
    NoPectoralFound,
}

impl std::fmt::Display for ErrorClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            ErrorClass::Correct => "correct",
            ErrorClass::DenseAsMuscle => "dense_as_muscle",
            ErrorClass::MuscleAsBreast => "muscle_as_breast",
            ErrorClass::Both => "both",
            ErrorClass::NoPectoralFound => "no_pectoral_found",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct EvalReport {
    /// 2|A∩B| / (|A|+|B|); defined as 1.0 when both masks are empty.
    pub dice: f64,
    /// Symmetric mean nearest-neighbour distance between the two masks'
    /// inner contours, in pixels. NaN when either contour is empty.
    pub boundary_mean_distance: f64,
    pub error_class: ErrorClass,
}

/// Score a predicted mask against ground truth.
pub fn evaluate(pred: &BinaryMask, truth: &BinaryMask) -> Result<EvalReport, RasterError> {
    if pred.width() != truth.width() || pred.height() != truth.height() {
        return Err(RasterError::DimensionMismatch {
            expected_width: truth.width(),
            expected_height: truth.height(),
            width: pred.width(),
            height: pred.height(),
        });
    }
    let p = pred.count_true() as u64;
    let t = truth.count_true() as u64;
    let inter = pred.intersect(truth).count_true() as u64;

    let boundary_mean_distance =
        mean_boundary_distance(&inner_contour(pred), &inner_contour(truth));

    let (dice, error_class) = if t == 0 && p == 0 {
        (1.0, ErrorClass::Correct)
    } else if p == 0 {
        (0.0, ErrorClass::NoPectoralFound)
    } else if t == 0 {
        (0.0, ErrorClass::DenseAsMuscle)
    } else {
        let dice = 2.0 * inter as f64 / (p + t) as f64;
        // strict 5% of truth area, in exact integer arithmetic
        let over = 20 * (p - inter) > t;
        let under = 20 * (t - inter) > t;
        let class = match (over, under) {
            (true, true) => ErrorClass::Both,
            (true, false) => ErrorClass::DenseAsMuscle,
            (false, true) => ErrorClass::MuscleAsBreast,
            (false, false) => ErrorClass::Correct,
        };
        (dice, class)
    };
    Ok(EvalReport {
        dice,
        boundary_mean_distance,
        error_class,
    })
}

/// True pixels with at least one false 4-neighbour inside the image.
fn inner_contour(mask: &BinaryMask) -> Vec<(u32, u32)> {
    let (w, h) = (mask.width(), mask.height());
    let mut out = Vec::new();
    for y in 0..h {
        for x in 0..w {
            if !mask.get(x, y) {
                continue;
            }
            let exposed = (x > 0 && !mask.get(x - 1, y))
                || (x + 1 < w && !mask.get(x + 1, y))
                || (y > 0 && !mask.get(x, y - 1))
                || (y + 1 < h && !mask.get(x, y + 1));
            if exposed {
                out.push((x, y));
            }
        }
    }
    out
}

/// Symmetric mean nearest-neighbour distance between two point sets,
/// in pixels. NaN when either set is empty.
pub fn mean_boundary_distance(a: &[(u32, u32)], b: &[(u32, u32)]) -> f64 {
    if a.is_empty() || b.is_empty() {
        return f64::NAN;
    }
    let one_way = |src: &[(u32, u32)], dst: &[(u32, u32)]| {
        let total: f64 = src
            .iter()
            .map(|&(x, y)| {
                dst.iter()
                    .map(|&(bx, by)| {
                        let dx = x as f64 - bx as f64;
                        let dy = y as f64 - by as f64;
                        dx * dx + dy * dy
                    })
                    .fold(f64::INFINITY, f64::min)
                    .sqrt()
            })
            .sum();
        total / src.len() as f64
    };
    0.5 * (one_way(a, b) + one_way(b, a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pipeline::extract_boundary;

    fn rect_mask(w: u32, h: u32, x0: u32, y0: u32, x1: u32, y1: u32) -> BinaryMask {
        BinaryMask::from_fn(w, h, |x, y| x >= x0 && x < x1 && y >= y0 && y < y1)
    }

    #[test]
    fn same_spec_is_bit_identical() {
        let spec = PhantomSpec {
            noise_sigma: 8.0,
            seed: 99,
            blobs: vec![Blob {
                cx: 40.0,
                cy: 150.0,
                radius: 9.0,
                intensity: 170,
            }],
            ..PhantomSpec::default()
        };
        let (a_img, a_pec, a_br) = generate_phantom(&spec).unwrap();
        let (b_img, b_pec, b_br) = generate_phantom(&spec).unwrap();
        assert_eq!(a_img, b_img);
        assert_eq!(a_pec, b_pec);
        assert_eq!(a_br, b_br);

        let other = PhantomSpec { seed: 100, ..spec };
        let (c_img, _, _) = generate_phantom(&other).unwrap();
        assert_ne!(a_img, c_img, "different seeds must differ");
    }

    #[test]
    fn straight_wedge_area_matches_the_triangle() {
        let spec = PhantomSpec::default(); // 60 degrees, noise-free
        let (_, pectoral, _) = generate_phantom(&spec).unwrap();
        let exit_y = STRAIGHT_EXIT_FRAC * 256.0;
        let x_top = exit_y / 60f64.to_radians().tan();
        let area = 0.5 * x_top * exit_y;
        let perimeter = x_top + exit_y + (x_top * x_top + exit_y * exit_y).sqrt();
        let count = pectoral.count_true() as f64;
        assert!(
            (count - area).abs() <= perimeter,
            "count {count} vs analytic {area} (slack {perimeter})"
        );
    }

    #[test]
    fn masks_nest_and_blobs_avoid_the_muscle() {
        let blob_level = 180;
        let spec = PhantomSpec {
            blobs: vec![
                Blob {
                    cx: 30.0,
                    cy: 60.0, // straddles the wedge edge
                    radius: 14.0,
                    intensity: blob_level,
                },
                Blob {
                    cx: 50.0,
                    cy: 170.0,
                    radius: 10.0,
                    intensity: blob_level,
                },
            ],
            ..PhantomSpec::default()
        };
        let (img, pectoral, breast) = generate_phantom(&spec).unwrap();
        assert!(pectoral.is_subset_of(&breast));
        assert!(!pectoral.is_empty());
        for y in 0..img.height() {
            for x in 0..img.width() {
                if img.get(x, y) == blob_level {
                    assert!(breast.get(x, y), "blob outside breast at ({x},{y})");
                    assert!(!pectoral.get(x, y), "blob painted over muscle at ({x},{y})");
                }
            }
        }
    }

    #[test]
    fn right_phantom_is_the_mirror_of_left() {
        let left = PhantomSpec {
            noise_sigma: 5.0,
            seed: 7,
            blobs: vec![Blob {
                cx: 45.0,
                cy: 140.0,
                radius: 8.0,
                intensity: 160,
            }],
            ..PhantomSpec::default()
        };
        let right = PhantomSpec {
            orientation: Orientation::Right,
            blobs: vec![Blob {
                cx: 256.0 - 45.0,
                ..left.blobs[0]
            }],
            ..left.clone()
        };
        let (li, lp, lb) = generate_phantom(&left).unwrap();
        let (ri, rp, rb) = generate_phantom(&right).unwrap();
        assert_eq!(ri, li.flipped_horizontal());
        assert_eq!(rp, lp.flipped_horizontal());
        assert_eq!(rb, lb.flipped_horizontal());

        // texture is painted in the chest-on-the-left frame, so the
        // mirror stays exact for fibrous phantoms too
        let fl = PhantomSpec {
            texture: Texture::Fibrous,
            ..left
        };
        let fr = PhantomSpec {
            texture: Texture::Fibrous,
            ..right
        };
        let (fli, _, _) = generate_phantom(&fl).unwrap();
        let (fri, _, _) = generate_phantom(&fr).unwrap();
        assert_eq!(fri, fli.flipped_horizontal());
        assert_eq!(generate_phantom(&fl).unwrap().0, fli);
    }

    #[test]
    fn fibrous_texture_stays_inside_its_bands() {
        let spec = PhantomSpec {
            texture: Texture::Fibrous,
            ..PhantomSpec::default()
        };
        let (img, pect, breast) = generate_phantom(&spec).unwrap();
        let pit_cap = (PIT_DEPTH_GAP_FRAC
            * (spec.pectoral_level - spec.breast_level) as f64)
            .ceil() as u16;
        let wave_cap = (TISSUE_WAVE_AMP * (TISSUE_WAVE_COUNT as f64).sqrt()).ceil() as u16;
        let striation_cap = (MUSCLE_WAVE_AMP * (TISSUE_WAVE_COUNT as f64).sqrt()).ceil() as u16;
        let mut skin_pixels = 0usize;
        for y in 0..spec.height {
            for x in 0..spec.width {
                let v = img.get(x, y);
                if !breast.get(x, y) {
                    assert_eq!(v, spec.background_level, "background moved at {x},{y}");
                } else if v == img.max_value() {
                    skin_pixels += 1;
                } else if pect.get(x, y) {
                    assert!(
                        v <= spec.pectoral_level + striation_cap
                            && v + pit_cap + striation_cap >= spec.pectoral_level,
                        "muscle texture out of band at {x},{y}: {v}"
                    );
                } else {
                    assert!(
                        v + wave_cap >= spec.breast_level
                            && v <= spec.breast_level + wave_cap,
                        "tissue wave too large at {x},{y}: {v}"
                    );
                }
            }
        }
        // the skin line is a thin arc: present, but a sliver of the shape
        assert!(skin_pixels > 100, "no skin line rendered");
        assert!(skin_pixels < breast.count_true() / 10);
    }

    #[test]
    fn ninety_degrees_means_no_muscle() {
        let spec = PhantomSpec {
            edge: PectoralEdge::Straight { angle_deg: 90.0 },
            ..PhantomSpec::default()
        };
        let (img, pectoral, breast) = generate_phantom(&spec).unwrap();
        assert!(pectoral.is_empty());
        assert!(!breast.is_empty());
        assert_eq!(img.get(3, 120), 120, "disc still present");
    }

    #[test]
    fn bad_specs_are_refused() {
        let base = PhantomSpec::default();
        let cases = [
            PhantomSpec {
                pectoral_level: 120,
                ..base.clone()
            },
            PhantomSpec {
                background_level: 130,
                ..base.clone()
            },
            PhantomSpec {
                noise_sigma: -1.0,
                ..base.clone()
            },
            PhantomSpec {
                width: 8,
                ..base.clone()
            },
            // 10 degrees from horizontal reaches ~1089px into a 256px image
            PhantomSpec {
                edge: PectoralEdge::Straight { angle_deg: 10.0 },
                ..base.clone()
            },
            PhantomSpec {
                edge: PectoralEdge::Curved {
                    c0: 250.0,
                    c1: 0.0,
                    c2: 0.0,
                },
                ..base.clone()
            },
            PhantomSpec {
                blobs: vec![Blob {
                    cx: 40.0,
                    cy: 150.0,
                    radius: 5.0,
                    intensity: 50, // below breast level
                }],
                ..base.clone()
            },
        ];
        for (i, spec) in cases.iter().enumerate() {
            assert!(
                matches!(generate_phantom(spec), Err(PhantomError::InvalidSpec(_))),
                "case {i} should be invalid"
            );
        }
    }

    #[test]
    fn depth_follows_the_brightest_level() {
        assert_eq!(PhantomSpec::default().bit_depth(), BitDepth::Eight);
        let deep = PhantomSpec {
            pectoral_level: 52000,
            breast_level: 30000,
            background_level: 2000,
            ..PhantomSpec::default()
        };
        assert_eq!(deep.bit_depth(), BitDepth::Sixteen);
        let (img, _, _) = generate_phantom(&deep).unwrap();
        assert_eq!(img.max_value(), u16::MAX);
    }

    #[test]
    fn curved_truth_boundary_defeats_a_line_fit() {
        // x_top 100, bulge 20px at mid-run
        let exit_y = 192.0;
        let bulge = 20.0;
        let spec = PhantomSpec {
            edge: PectoralEdge::Curved {
                c0: 100.0,
                c1: (4.0 * bulge - 100.0) / exit_y,
                c2: -4.0 * bulge / (exit_y * exit_y),
            },
            ..PhantomSpec::default()
        };
        let (_, pectoral, _) = generate_phantom(&spec).unwrap();
        let boundary = extract_boundary(&pectoral, Orientation::Left);
        assert!(boundary.len() > 50);

        // least-squares x = a + b*y over the boundary
        let n = boundary.len() as f64;
        let (mut sy, mut sx, mut syy, mut sxy) = (0.0, 0.0, 0.0, 0.0);
        for &(x, y) in &boundary {
            let (xf, yf) = (x as f64, y as f64);
            sy += yf;
            sx += xf;
            syy += yf * yf;
            sxy += xf * yf;
        }
        let slope = (n * sxy - sy * sx) / (n * syy - sy * sy);
        let intercept = (sx - slope * sy) / n;
        let rss: f64 = boundary
            .iter()
            .map(|&(x, y)| (x as f64 - (intercept + slope * y as f64)).powi(2))
            .sum();
        let rms = (rss / n).sqrt();
        assert!(rms > 2.0, "line residual {rms:.2}px, want > 2px of curvature");
    }

    #[test]
    fn evaluate_identical_masks() {
        let m = rect_mask(60, 60, 5, 5, 25, 45);
        let r = evaluate(&m, &m).unwrap();
        assert_eq!(r.dice, 1.0);
        assert_eq!(r.error_class, ErrorClass::Correct);
        assert_eq!(r.boundary_mean_distance, 0.0);
    }

    #[test]
    fn evaluate_empty_prediction() {
        let truth = rect_mask(40, 40, 2, 2, 20, 30);
        let none = BinaryMask::empty(40, 40);
        let r = evaluate(&none, &truth).unwrap();
        assert_eq!(r.dice, 0.0);
        assert_eq!(r.error_class, ErrorClass::NoPectoralFound);
        assert!(r.boundary_mean_distance.is_nan());

        // and the reverse: prediction with no truth is pure overshoot
        let r = evaluate(&truth, &none).unwrap();
        assert_eq!(r.dice, 0.0);
        assert_eq!(r.error_class, ErrorClass::DenseAsMuscle);

        let r = evaluate(&none, &none).unwrap();
        assert_eq!(r.dice, 1.0);
        assert_eq!(r.error_class, ErrorClass::Correct);
    }

    #[test]
    fn disjoint_ten_percent_blob_is_dense_as_muscle() {
        // truth 1000px; prediction adds a disjoint 100px block
        let truth = rect_mask(80, 80, 0, 0, 20, 50);
        let pred = truth.union(&rect_mask(80, 80, 50, 50, 60, 60));
        let r = evaluate(&pred, &truth).unwrap();
        assert_eq!(r.dice, 2000.0 / 2100.0);
        assert_eq!(r.error_class, ErrorClass::DenseAsMuscle);
    }

    #[test]
    fn five_percent_exactly_still_counts_correct() {
        // overshoot of exactly 5% must not trip the strict threshold
        let truth = rect_mask(80, 80, 0, 0, 20, 50);
        let pred = truth.union(&rect_mask(80, 80, 50, 50, 60, 55));
        let r = evaluate(&pred, &truth).unwrap();
        assert_eq!(r.error_class, ErrorClass::Correct);
        assert!(r.dice >= 0.95);
    }

    #[test]
    fn undershoot_and_both_classes() {
        let truth = rect_mask(80, 80, 0, 0, 20, 50); // 1000px
        let shrunk = rect_mask(80, 80, 0, 0, 20, 42); // missing 160px
        let r = evaluate(&shrunk, &truth).unwrap();
        assert_eq!(r.error_class, ErrorClass::MuscleAsBreast);

        let both = shrunk.union(&rect_mask(80, 80, 50, 50, 62, 60));
        let r = evaluate(&both, &truth).unwrap();
        assert_eq!(r.error_class, ErrorClass::Both);
    }

    #[test]
    fn dice_is_symmetric() {
        let a = rect_mask(50, 50, 3, 3, 30, 40);
        let b = rect_mask(50, 50, 10, 8, 45, 35);
        let ab = evaluate(&a, &b).unwrap();
        let ba = evaluate(&b, &a).unwrap();
        assert_eq!(ab.dice, ba.dice);
        assert_eq!(ab.boundary_mean_distance, ba.boundary_mean_distance);
    }

    #[test]
    fn evaluate_rejects_mismatched_dimensions() {
        let a = BinaryMask::empty(10, 10);
        let b = BinaryMask::empty(10, 11);
        assert!(matches!(
            evaluate(&a, &b),
            Err(RasterError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn point_set_distance() {
        assert_eq!(mean_boundary_distance(&[(0, 0)], &[(3, 4)]), 5.0);
        assert_eq!(mean_boundary_distance(&[(2, 2)], &[(2, 2)]), 0.0);
        assert!(mean_boundary_distance(&[], &[(1, 1)]).is_nan());
        // asymmetric sets: each direction averaged separately
        let a = [(0, 0), (10, 0)];
        let b = [(0, 0)];
        let d = mean_boundary_distance(&a, &b);
        assert_eq!(d, 0.5 * (5.0 + 0.0));
    }
}
