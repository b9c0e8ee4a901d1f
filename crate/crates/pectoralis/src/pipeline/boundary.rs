//! Boundary polyline extraction and region statistics.

use serde::Serialize;

use crate::raster::{BinaryMask, GrayImage, Orientation, RasterError};

/// Ordered boundary of the pectoral mask: every pectoral pixel with at
/// least one in-image non-pectoral 8-neighbor, excluding pixels on the
/// top image edge and on the chest-wall column. What remains is the
/// muscle/breast interface, the curve a reader would draw.
///
/// Ordering is top to bottom; within a row, away from the boundary's
/// descent toward the chest wall (x descending for a Left orientation,
/// ascending for Right), so the list reads as one continuous trace.
pub fn extract_boundary(pectoral: &BinaryMask, orient: Orientation) -> Vec<(u32, u32)> {
    let w = pectoral.width();
    let h = pectoral.height();
    let wall = orient.chest_wall_column(w);
    let mut pts: Vec<(u32, u32)> = Vec::new();
    for (x, y) in pectoral.iter_true() {
        if y == 0 || x == wall {
            continue;
        }
        let mut exposed = false;
        'scan: for dy in -1i64..=1 {
            for dx in -1i64..=1 {
                if dx == 0 && dy == 0 {
                    continue;
                }
                let nx = x as i64 + dx;
                let ny = y as i64 + dy;
                if nx < 0 || nx >= w as i64 || ny < 0 || ny >= h as i64 {
                    continue;
                }
                if !pectoral.get(nx as u32, ny as u32) {
                    exposed = true;
                    break 'scan;
                }
            }
        }
        if exposed {
            pts.push((x, y));
        }
    }
    match orient {
        Orientation::Left => pts.sort_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0))),
        Orientation::Right => pts.sort_by(|a, b| a.1.cmp(&b.1).then(a.0.cmp(&b.0))),
    }
    pts
}

/// Area and mean intensity of the segmented muscle, measured on the
/// image as segmented (pre-windowing).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PectoralStats {
    pub area: u64,
    pub mean_intensity: f64,
}

pub fn pectoral_stats(
    original: &GrayImage,
    pectoral: &BinaryMask,
) -> Result<PectoralStats, RasterError> {
    if !pectoral.matches_image(original) {
        return Err(RasterError::DimensionMismatch {
            expected_width: original.width(),
            expected_height: original.height(),
            width: pectoral.width(),
            height: pectoral.height(),
        });
    }
    if pectoral.is_empty() {
        return Err(RasterError::EmptyRoi);
    }
    let mut sum = 0u64;
    let mut n = 0u64;
    for (&v, &inside) in original.pixels().iter().zip(pectoral.bits()) {
        if inside {
            sum += v as u64;
            n += 1;
        }
    }
    Ok(PectoralStats {
        area: n,
        mean_intensity: sum as f64 / n as f64,
    })
}
