//! Built-in phantom suites: reproducible case streams for validation
//! and acceptance runs.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Blob, PectoralEdge, PhantomSpec, Texture, DISC_CY_FRAC, DISC_R_FRAC, STRAIGHT_EXIT_FRAC};
use crate::raster::Orientation;

const CASE_W: u32 = 256;
const CASE_H: u32 = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SuitePreset {
    Straight,
    Curved,
    /// Alternates straight and curved, so an even count splits half and
    /// half.
    Mixed,
}

impl std::fmt::Display for SuitePreset {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SuitePreset::Straight => "straight",
            SuitePreset::Curved => "curved",
            SuitePreset::Mixed => "mixed",
        })
    }
}

impl std::str::FromStr for SuitePreset {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "straight" => Ok(SuitePreset::Straight),
            "curved" => Ok(SuitePreset::Curved),
            "mixed" => Ok(SuitePreset::Mixed),
            other => Err(format!(
                "unknown preset `{other}` (expected straight/curved/mixed)"
            )),
        }
    }
}

/// Deterministic spec stream: same preset, count, and seed always yield
/// the same specs. Orientation, levels, geometry, blob layout, and
/// per-case noise seeds are all drawn from one ChaCha8 stream.
pub fn suite_specs(preset: SuitePreset, count: u32, seed: u64) -> Vec<PhantomSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let curved = match preset {
                SuitePreset::Straight => false,
                SuitePreset::Curved => true,
                SuitePreset::Mixed => i % 2 == 1,
            };
            random_case(&mut rng, curved)
        })
        .collect()
}

// Level and geometry ranges. Gaps keep the three tissue classes apart
// at the noise ceiling; the pectoral ceiling leaves windowing headroom
// below the skin line. The angle ceiling and x_top floor keep the
// muscle the dominant mass in the breast (roughly 60%): the entropy
// objective is nearly flat between the between-mode cut and a cut
// inside the tissue mode, and at the noise ceiling only a heavier
// high class keeps the argmax on the right side.
const BG_RANGE: (u16, u16) = (5, 18);
const BREAST_RANGE: (u16, u16) = (100, 120);
const GAP_RANGE: (u16, u16) = (55, 65);
const ANGLE_RANGE: (f64, f64) = (43.0, 56.0);
const XTOP_FRAC_RANGE: (f64, f64) = (0.40, 0.52);
const BULGE_FRAC_RANGE: (f64, f64) = (0.06, 0.12);
/// Blob edge standoff: blob must clear the muscle edge by this many
/// pixels beyond its radius, so closing can never bridge the two.
const BLOB_EDGE_CLEARANCE: f64 = 12.0;

fn random_case(rng: &mut ChaCha8Rng, curved: bool) -> PhantomSpec {
    let w = CASE_W as f64;
    let h = CASE_H as f64;
    let orientation = if rng.random::<bool>() {
        Orientation::Left
    } else {
        Orientation::Right
    };
    let background_level: u16 = rng.random_range(BG_RANGE.0..=BG_RANGE.1);
    let breast_level: u16 = rng.random_range(BREAST_RANGE.0..=BREAST_RANGE.1);
    let gap = rng.random_range(GAP_RANGE.0..=GAP_RANGE.1);
    let pectoral_level = breast_level + gap;

    let exit_y = STRAIGHT_EXIT_FRAC * h;
    let edge = if curved {
        // base line from (x_top, 0) to the chest wall at 3/4 height,
        // plus a parabolic bulge peaking mid-run; stays a pure quadratic
        let x_top = rng.random_range(XTOP_FRAC_RANGE.0..=XTOP_FRAC_RANGE.1) * w;
        let bulge = rng.random_range(BULGE_FRAC_RANGE.0..=BULGE_FRAC_RANGE.1) * w;
        PectoralEdge::Curved {
            c0: x_top,
            c1: (4.0 * bulge - x_top) / exit_y,
            c2: -4.0 * bulge / (exit_y * exit_y),
        }
    } else {
        PectoralEdge::Straight {
            angle_deg: rng.random_range(ANGLE_RANGE.0..=ANGLE_RANGE.1),
        }
    };
    // edge reach in the chest-on-the-left frame, for blob standoff
    let edge_reach = |y: f64| -> f64 {
        match edge {
            PectoralEdge::Straight { angle_deg } => {
                (exit_y / angle_deg.to_radians().tan()) * (1.0 - y / exit_y)
            }
            PectoralEdge::Curved { c0, c1, c2 } => c0 + y * (c1 + y * c2),
        }
        .max(0.0)
    };

    let n_blobs = rng.random_range(0..=3u32);
    let mut blobs = Vec::new();
    for _ in 0..n_blobs {
        // uniform over the in-image half of the disc, pulled in from
        // the rim so blobs sit in tissue, not on the skin line
        let rho = 0.8 * DISC_R_FRAC * h * rng.random_range(0.0..1.0f64).sqrt();
        let theta = rng.random_range(-std::f64::consts::FRAC_PI_2..std::f64::consts::FRAC_PI_2);
        let cx_left = rho * theta.cos();
        let cy = DISC_CY_FRAC * h + rho * theta.sin();
        let radius = rng.random_range(0.02..=0.06) * w;
        // blobs stay on the upper flank of the tissue mode; brighter and
        // they would pool between the modes and blur the threshold valley
        let intensity = breast_level + rng.random_range(gap / 8..=gap / 5);
        // a blob hugging the muscle edge would weld onto it during
        // cleanup; skip draws that land too close
        if cx_left < edge_reach(cy) + radius + BLOB_EDGE_CLEARANCE {
            continue;
        }
        let cx = match orientation {
            Orientation::Left => cx_left,
            Orientation::Right => w - cx_left,
        };
        blobs.push(Blob {
            cx,
            cy,
            radius,
            intensity,
        });
    }

    let noise_sigma = rng.random_range(0.0..=0.05) * 255.0;
    let seed = rng.next_u64();

    PhantomSpec {
        width: CASE_W,
        height: CASE_H,
        orientation,
        edge,
        pectoral_level,
        breast_level,
        background_level,
        blobs,
        texture: Texture::Fibrous,
        noise_sigma,
        seed,
    }
}
