//! Grayscale geodesic reconstruction by dilation.
//!
//! The reconstruction of a marker under a mask image is the limit of
//! repeatedly dilating the marker by the unit ball of the chosen
//! connectivity and clamping below the mask. Peaks of the mask that the
//! marker cannot reach through connected non-decreasing paths are
//! flattened, which is what lets a top-edge marker isolate the pectoral
//! wedge from the rest of the breast.
//!
//! Direct iteration converges slowly on large rasters, so this runs the
//! two-sweep + queue formulation: one raster sweep, one anti-raster sweep
//! that also seeds a FIFO queue with unstable boundary pixels, then local
//! propagation until the queue drains. The result equals the iterated
//! fixed point exactly.

use std::collections::VecDeque;

use crate::raster::{GrayImage, RasterError};

use super::Connectivity;

/// Reconstruction of `marker` under `mask`. The marker is clamped to the
/// mask pointwise first, so callers need not pre-enforce `marker <= mask`.
///
/// Both images must share dimensions and bit depth.
pub fn reconstruct(
    marker: &GrayImage,
    mask: &GrayImage,
    conn: Connectivity,
) -> Result<GrayImage, RasterError> {
    if !marker.same_dimensions_as(mask) {
        return Err(RasterError::DimensionMismatch {
            expected_width: mask.width(),
            expected_height: mask.height(),
            width: marker.width(),
            height: marker.height(),
        });
    }
    assert_eq!(
        marker.bit_depth(),
        mask.bit_depth(),
        "marker and mask bit depths differ"
    );

    let w = mask.width() as i64;
    let h = mask.height() as i64;
    let i = mask.pixels();
    let mut j: Vec<u16> = marker
        .pixels()
        .iter()
        .zip(i)
        .map(|(&m, &b)| m.min(b))
        .collect();

    let at = |x: i64, y: i64| (y * w + x) as usize;

    // Raster sweep: pull values forward from already-visited neighbors.
    for y in 0..h {
        for x in 0..w {
            let mut v = j[at(x, y)];
            for &(dx, dy) in conn.forward_neighbors() {
                let (nx, ny) = (x + dx as i64, y + dy as i64);
                if nx >= 0 && nx < w && ny >= 0 && ny < h {
                    v = v.max(j[at(nx, ny)]);
                }
            }
            j[at(x, y)] = v.min(i[at(x, y)]);
        }
    }

    // Anti-raster sweep, queueing pixels whose influence is not settled.
    let mut fifo: VecDeque<usize> = VecDeque::new();
    for y in (0..h).rev() {
        for x in (0..w).rev() {
            let mut v = j[at(x, y)];
            for &(dx, dy) in conn.backward_neighbors() {
                let (nx, ny) = (x + dx as i64, y + dy as i64);
                if nx >= 0 && nx < w && ny >= 0 && ny < h {
                    v = v.max(j[at(nx, ny)]);
                }
            }
            let v = v.min(i[at(x, y)]);
            j[at(x, y)] = v;
            for &(dx, dy) in conn.backward_neighbors() {
                let (nx, ny) = (x + dx as i64, y + dy as i64);
                if nx >= 0 && nx < w && ny >= 0 && ny < h {
                    let q = at(nx, ny);
                    if j[q] < v && j[q] < i[q] {
                        fifo.push_back(at(x, y));
                        break;
                    }
                }
            }
        }
    }

    // Queue phase: propagate until stable.
    while let Some(p) = fifo.pop_front() {
        let (x, y) = ((p as i64) % w, (p as i64) / w);
        let vp = j[p];
        for &(dx, dy) in conn.neighbors() {
            let (nx, ny) = (x + dx as i64, y + dy as i64);
            if nx >= 0 && nx < w && ny >= 0 && ny < h {
                let q = at(nx, ny);
                if j[q] < vp && j[q] != i[q] {
                    j[q] = vp.min(i[q]);
                    fifo.push_back(q);
                }
            }
        }
    }

    Ok(GrayImage::from_pixels(mask.width(), mask.height(), mask.bit_depth(), j)
        .expect("reconstruction preserves dimensions and range"))
}
