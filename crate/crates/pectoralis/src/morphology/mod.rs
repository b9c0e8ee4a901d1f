//! Binary morphology with disk structuring elements, grayscale geodesic
//! reconstruction, and connected-component labeling.
//!
//! Pixels outside the raster are treated as false everywhere: dilation
//! never wraps or reflects, and erosion fails wherever the disk sticks
//! out of the image.

mod components;
mod distance;
mod reconstruct;

pub use components::{connected_components, fill_holes, Component, Labeling};
pub use reconstruct::reconstruct;

use serde::{Deserialize, Serialize};

use crate::raster::BinaryMask;
use distance::squared_edt;

/// Pixel adjacency for reconstruction and component labeling.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Connectivity {
    #[serde(rename = "4")]
    Four,
    #[serde(rename = "8")]
    Eight,
}

impl Connectivity {
    /// Full neighborhood offsets.
    pub fn neighbors(self) -> &'static [(i32, i32)] {
        match self {
            Connectivity::Four => &[(-1, 0), (1, 0), (0, -1), (0, 1)],
            Connectivity::Eight => &[
                (-1, -1),
                (0, -1),
                (1, -1),
                (-1, 0),
                (1, 0),
                (-1, 1),
                (0, 1),
                (1, 1),
            ],
        }
    }

    /// Neighbors that precede a pixel in raster order.
    pub(crate) fn forward_neighbors(self) -> &'static [(i32, i32)] {
        match self {
            Connectivity::Four => &[(-1, 0), (0, -1)],
            Connectivity::Eight => &[(-1, 0), (-1, -1), (0, -1), (1, -1)],
        }
    }

    /// Neighbors that follow a pixel in raster order.
    pub(crate) fn backward_neighbors(self) -> &'static [(i32, i32)] {
        match self {
            Connectivity::Four => &[(1, 0), (0, 1)],
            Connectivity::Eight => &[(1, 0), (1, 1), (0, 1), (-1, 1)],
        }
    }

    /// The matching background connectivity (Jordan pairing): 8-connected
    /// foreground goes with 4-connected background and vice versa.
    pub fn dual(self) -> Connectivity {
        match self {
            Connectivity::Four => Connectivity::Eight,
            Connectivity::Eight => Connectivity::Four,
        }
    }
}

impl std::fmt::Display for Connectivity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Connectivity::Four => "4",
            Connectivity::Eight => "8",
        })
    }
}

impl std::str::FromStr for Connectivity {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "4" => Ok(Connectivity::Four),
            "8" => Ok(Connectivity::Eight),
            other => Err(format!("connectivity must be 4 or 8, got {other:?}")),
        }
    }
}

/// A centered disk structuring element.
///
/// Only disks are supported; the radius is kept so dilation and erosion
/// can run through the distance transform instead of stamping offsets.
#[derive(Clone, Debug)]
pub struct StructuringElement {
    radius: u32,
    offsets: Vec<(i32, i32)>,
}

impl StructuringElement {
    pub fn radius(&self) -> u32 {
        self.radius
    }

    /// All offsets `(dx, dy)` with `dx^2 + dy^2 <= radius^2`, raster order.
    pub fn offsets(&self) -> &[(i32, i32)] {
        &self.offsets
    }

    pub fn contains(&self, dx: i32, dy: i32) -> bool {
        let r2 = self.radius as i64 * self.radius as i64;
        (dx as i64 * dx as i64 + dy as i64 * dy as i64) <= r2
    }
}

/// Disk of the given radius; radius 0 is the single-pixel identity element.
pub fn disk_se(radius: u32) -> StructuringElement {
    let r = radius as i64;
    let mut offsets = Vec::new();
    for dy in -r..=r {
        for dx in -r..=r {
            if dx * dx + dy * dy <= r * r {
                offsets.push((dx as i32, dy as i32));
            }
        }
    }
    StructuringElement { radius, offsets }
}

/// Minkowski dilation: true wherever the disk centered there meets `mask`.
pub fn dilate(mask: &BinaryMask, se: &StructuringElement) -> BinaryMask {
    if mask.is_empty() || se.radius == 0 {
        return mask.clone();
    }
    let r2 = effective_r2(mask, se);
    let d2 = squared_edt(mask);
    BinaryMask::from_bits(
        mask.width(),
        mask.height(),
        d2.iter().map(|&d| d as u64 <= r2).collect(),
    )
    .expect("distance map matches mask dimensions")
}

/// Erosion: true where the whole disk fits inside `mask` (and inside the
/// image; outside pixels count as false).
pub fn erode(mask: &BinaryMask, se: &StructuringElement) -> BinaryMask {
    if se.radius == 0 {
        return mask.clone();
    }
    let w = mask.width();
    let h = mask.height();
    let r = se.radius.min(mask.width() + mask.height()) as u64;
    let fits_inside = |x: u32, y: u32| {
        let margin = (x + 1).min(w - x).min(y + 1).min(h - y) as u64;
        margin > r
    };
    let complement = mask.complement();
    if complement.is_empty() {
        return BinaryMask::from_fn(w, h, fits_inside);
    }
    let r2 = effective_r2(mask, se);
    let d2 = squared_edt(&complement);
    BinaryMask::from_fn(w, h, |x, y| {
        fits_inside(x, y) && d2[(y * w + x) as usize] as u64 > r2
    })
}

/// Opening: erosion then dilation. Removes structures thinner than the
/// disk; always a subset of the input, and applying it twice changes
/// nothing.
pub fn open(mask: &BinaryMask, se: &StructuringElement) -> BinaryMask {
    dilate(&erode(mask, se), se)
}

/// Closing: dilation then erosion. Fills gaps narrower than the disk.
///
/// The erosion step here treats out-of-image pixels as foreground (the
/// adjoint of the cropped dilation), unlike standalone [`erode`]. That
/// keeps closing extensive and idempotent on the raster; with the
/// standalone convention a closing would eat the border ring of any mask
/// that touches the edge.
pub fn close(mask: &BinaryMask, se: &StructuringElement) -> BinaryMask {
    erode_adjoint(&dilate(mask, se), se)
}

/// Erosion with out-of-image pixels treated as foreground: true where
/// every in-image pixel under the disk is true.
fn erode_adjoint(mask: &BinaryMask, se: &StructuringElement) -> BinaryMask {
    if se.radius == 0 {
        return mask.clone();
    }
    let complement = mask.complement();
    if complement.is_empty() {
        return mask.clone();
    }
    let r2 = effective_r2(mask, se);
    let d2 = squared_edt(&complement);
    BinaryMask::from_bits(
        mask.width(),
        mask.height(),
        d2.iter().map(|&d| d as u64 > r2).collect(),
    )
    .expect("distance map matches mask dimensions")
}

/// Squared radius, with the radius capped at `w + h` so the square stays
/// clear of the distance map's sentinel values. Beyond the cap dilation
/// is already all-true and erosion all-false, so capping changes nothing.
fn effective_r2(mask: &BinaryMask, se: &StructuringElement) -> u64 {
    let r = se.radius.min(mask.width() + mask.height()) as u64;
    r * r
}
