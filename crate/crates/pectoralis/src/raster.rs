//! Fundamental raster types: grayscale images, binary masks, histograms.
//!
//! Pixels are stored row-major with the origin at the top-left corner and
//! `y` increasing downward. Intensities are widened to `u16` internally so
//! one kernel codebase serves both 8-bit film scans and 16-bit digital
//! raws; [`BitDepth`] is retained for codec fidelity.

use thiserror::Error;

/// Sample depth of a grayscale raster.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BitDepth {
    Eight,
    Sixteen,
}

impl BitDepth {
    /// Largest representable intensity (`2^depth - 1`).
    #[inline]
    pub fn max_value(self) -> u16 {
        match self {
            BitDepth::Eight => u8::MAX as u16,
            BitDepth::Sixteen => u16::MAX,
        }
    }

    /// Number of histogram bins (`2^depth`).
    #[inline]
    pub fn bin_count(self) -> usize {
        self.max_value() as usize + 1
    }

    /// Bits per sample.
    #[inline]
    pub fn bits(self) -> u8 {
        match self {
            BitDepth::Eight => 8,
            BitDepth::Sixteen => 16,
        }
    }
}

/// Which vertical image edge the chest wall (and pectoral muscle) touches.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Left,
    Right,
}

impl Orientation {
    /// The opposite side.
    #[inline]
    pub fn flipped(self) -> Orientation {
        match self {
            Orientation::Left => Orientation::Right,
            Orientation::Right => Orientation::Left,
        }
    }

    /// Column index of the chest-wall edge for an image of the given width.
    #[inline]
    pub fn chest_wall_column(self, width: u32) -> u32 {
        match self {
            Orientation::Left => 0,
            Orientation::Right => width - 1,
        }
    }
}

impl std::fmt::Display for Orientation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Orientation::Left => write!(f, "left"),
            Orientation::Right => write!(f, "right"),
        }
    }
}

impl std::str::FromStr for Orientation {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "left" | "l" => Ok(Orientation::Left),
            "right" | "r" => Ok(Orientation::Right),
            other => Err(format!("unknown orientation `{other}` (expected left/right)")),
        }
    }
}

/// Errors from raster construction and queries.
#[derive(Debug, Error)]
pub enum RasterError {
    #[error("dimension mismatch: expected {expected_width}x{expected_height}, got {width}x{height}")]
    DimensionMismatch {
        expected_width: u32,
        expected_height: u32,
        width: u32,
        height: u32,
    },
    #[error("pixel buffer length {len} does not equal width*height = {expected}")]
    BadBufferLength { len: usize, expected: usize },
    #[error("pixel value {value} exceeds maximum {max} for the declared bit depth")]
    PixelOutOfRange { value: u16, max: u16 },
    #[error("region of interest is empty")]
    EmptyRoi,
    #[error("image dimensions must be at least 1x1")]
    ZeroDimension,
}

/// A 2-D grayscale raster of unsigned intensities.
///
/// Every pixel is guaranteed to be `<= bit_depth.max_value()`.
#[derive(Clone, PartialEq, Eq)]
pub struct GrayImage {
    width: u32,
    height: u32,
    bit_depth: BitDepth,
    pixels: Vec<u16>,
}

impl std::fmt::Debug for GrayImage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GrayImage")
            .field("width", &self.width)
            .field("height", &self.height)
            .field("bit_depth", &self.bit_depth)
            .finish_non_exhaustive()
    }
}

impl GrayImage {
    /// All-zero image.
    pub fn new(width: u32, height: u32, bit_depth: BitDepth) -> Result<Self, RasterError> {
        if width == 0 || height == 0 {
            return Err(RasterError::ZeroDimension);
        }
        Ok(GrayImage {
            width,
            height,
            bit_depth,
            pixels: vec![0; width as usize * height as usize],
        })
    }

    /// Build from a row-major pixel buffer, validating length and range.
    pub fn from_pixels(
        width: u32,
        height: u32,
        bit_depth: BitDepth,
        pixels: Vec<u16>,
    ) -> Result<Self, RasterError> {
        if width == 0 || height == 0 {
            return Err(RasterError::ZeroDimension);
        }
        let expected = width as usize * height as usize;
        if pixels.len() != expected {
            return Err(RasterError::BadBufferLength {
                len: pixels.len(),
                expected,
            });
        }
        let max = bit_depth.max_value();
        if let Some(&bad) = pixels.iter().find(|&&v| v > max) {
            return Err(RasterError::PixelOutOfRange { value: bad, max });
        }
        Ok(GrayImage {
            width,
            height,
            bit_depth,
            pixels,
        })
    }

    #[inline]
    pub fn width(&self) -> u32 {
        self.width
    }

    #[inline]
    pub fn height(&self) -> u32 {
        self.height
    }

    #[inline]
    pub fn bit_depth(&self) -> BitDepth {
        self.bit_depth
    }

    /// Largest intensity representable at this image's depth.
    #[inline]
    pub fn max_value(&self) -> u16 {
        self.bit_depth.max_value()
    }

    #[inline]
    pub fn pixel_count(&self) -> usize {
        self.pixels.len()
    }

    #[inline]
    pub fn pixels(&self) -> &[u16] {
        &self.pixels
    }

    #[inline]
    fn idx(&self, x: u32, y: u32) -> usize {
        debug_assert!(x < self.width && y < self.height);
        y as usize * self.width as usize + x as usize
    }

    #[inline]
    pub fn get(&self, x: u32, y: u32) -> u16 {
        self.pixels[self.idx(x, y)]
    }

    /// Set a pixel. The value must respect the declared depth.
    #[inline]
    pub fn set(&mut self, x: u32, y: u32, value: u16) {
        debug_assert!(value <= self.bit_depth.max_value());
        let i = self.idx(x, y);
        self.pixels[i] = value;
    }

    #[inline]
    pub fn row(&self, y: u32) -> &[u16] {
        let start = y as usize * self.width as usize;
        &self.pixels[start..start + self.width as usize]
    }

    /// True when `other` has identical dimensions.
    #[inline]
    pub fn same_dimensions_as(&self, other: &GrayImage) -> bool {
        self.width == other.width && self.height == other.height
    }

    /// Photometric inversion: `v -> max - v`.
    pub fn inverted(&self) -> GrayImage {
        let max = self.max_value();
        GrayImage {
            width: self.width,
            height: self.height,
            bit_depth: self.bit_depth,
            pixels: self.pixels.iter().map(|&v| max - v).collect(),
        }
    }

    /// Mirror around the vertical axis.
    pub fn flipped_horizontal(&self) -> GrayImage {
        let mut out = self.clone();
        for y in 0..self.height {
            let row = &self.pixels
                [y as usize * self.width as usize..(y as usize + 1) * self.width as usize];
            let out_row = &mut out.pixels
                [y as usize * self.width as usize..(y as usize + 1) * self.width as usize];
            for (i, &v) in row.iter().rev().enumerate() {
                out_row[i] = v;
            }
        }
        out
    }
}

/// A 2-D boolean raster, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct BinaryMask {
    width: u32,
    height: u32,
    bits: Vec<bool>,
}

impl std::fmt::Debug for BinaryMask {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("BinaryMask")
            .field("width", &self.width)
            .field("height", &self.height)
            .field("population", &self.count_true())
            .finish()
    }
}

impl BinaryMask {
    /// Mask filled with a constant value.
    pub fn filled(width: u32, height: u32, value: bool) -> BinaryMask {
        BinaryMask {
            width,
            height,
            bits: vec![value; width as usize * height as usize],
        }
    }

    /// All-false mask.
    pub fn empty(width: u32, height: u32) -> BinaryMask {
        BinaryMask::filled(width, height, false)
    }

    /// Build from a row-major boolean buffer.
    pub fn from_bits(width: u32, height: u32, bits: Vec<bool>) -> Result<Self, RasterError> {
        let expected = width as usize * height as usize;
        if bits.len() != expected {
            return Err(RasterError::BadBufferLength {
                len: bits.len(),
                expected,
            });
        }
        Ok(BinaryMask {
            width,
            height,
            bits,
        })
    }

    /// Evaluate a predicate at every pixel.
    pub fn from_fn(width: u32, height: u32, mut f: impl FnMut(u32, u32) -> bool) -> BinaryMask {
        let mut bits = Vec::with_capacity(width as usize * height as usize);
        for y in 0..height {
            for x in 0..width {
                bits.push(f(x, y));
            }
        }
        BinaryMask {
            width,
            height,
            bits,
        }
    }

    #[inline]
    pub fn width(&self) -> u32 {
        self.width
    }

    #[inline]
    pub fn height(&self) -> u32 {
        self.height
    }

    #[inline]
    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    #[inline]
    fn idx(&self, x: u32, y: u32) -> usize {
        debug_assert!(x < self.width && y < self.height);
        y as usize * self.width as usize + x as usize
    }

    #[inline]
    pub fn get(&self, x: u32, y: u32) -> bool {
        self.bits[self.idx(x, y)]
    }

    #[inline]
    pub fn set(&mut self, x: u32, y: u32, value: bool) {
        let i = self.idx(x, y);
        self.bits[i] = value;
    }

    /// Number of true pixels.
    pub fn count_true(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.bits.iter().any(|&b| b)
    }

    #[inline]
    pub fn same_dimensions_as(&self, other: &BinaryMask) -> bool {
        self.width == other.width && self.height == other.height
    }

    #[inline]
    pub fn matches_image(&self, img: &GrayImage) -> bool {
        self.width == img.width() && self.height == img.height()
    }

    /// Coordinates of all true pixels in raster order.
    pub fn iter_true(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        let w = self.width;
        self.bits
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(move |(i, _)| ((i as u32) % w, (i as u32) / w))
    }

    /// Pixelwise AND. Panics if dimensions differ.
    pub fn intersect(&self, other: &BinaryMask) -> BinaryMask {
        assert!(self.same_dimensions_as(other), "mask dimension mismatch");
        BinaryMask {
            width: self.width,
            height: self.height,
            bits: self
                .bits
                .iter()
                .zip(&other.bits)
                .map(|(&a, &b)| a && b)
                .collect(),
        }
    }

    /// Pixelwise OR. Panics if dimensions differ.
    pub fn union(&self, other: &BinaryMask) -> BinaryMask {
        assert!(self.same_dimensions_as(other), "mask dimension mismatch");
        BinaryMask {
            width: self.width,
            height: self.height,
            bits: self
                .bits
                .iter()
                .zip(&other.bits)
                .map(|(&a, &b)| a || b)
                .collect(),
        }
    }

    /// Pixelwise NOT.
    pub fn complement(&self) -> BinaryMask {
        BinaryMask {
            width: self.width,
            height: self.height,
            bits: self.bits.iter().map(|&b| !b).collect(),
        }
    }

    /// True iff every true pixel of `self` is also true in `other`.
    pub fn is_subset_of(&self, other: &BinaryMask) -> bool {
        self.same_dimensions_as(other)
            && self
                .bits
                .iter()
                .zip(&other.bits)
                .all(|(&a, &b)| !a || b)
    }

    /// Mirror around the vertical axis.
    pub fn flipped_horizontal(&self) -> BinaryMask {
        let mut out = self.clone();
        for y in 0..self.height {
            for x in 0..self.width {
                out.set(x, y, self.get(self.width - 1 - x, y));
            }
        }
        out
    }
}

/// Intensity-frequency table; `counts[v]` tallies pixels of intensity `v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Histogram {
    counts: Vec<u64>,
}

impl Histogram {
    /// Tally pixel intensities, optionally restricted to a region of interest.
    ///
    /// Bin count equals `2^bit_depth` of the source image. Returns an error
    /// when the roi dimensions do not match the image.
    pub fn of(img: &GrayImage, roi: Option<&BinaryMask>) -> Result<Histogram, RasterError> {
        let mut counts = vec![0u64; img.bit_depth().bin_count()];
        match roi {
            None => {
                for &v in img.pixels() {
                    counts[v as usize] += 1;
                }
            }
            Some(mask) => {
                if !mask.matches_image(img) {
                    return Err(RasterError::DimensionMismatch {
                        expected_width: img.width(),
                        expected_height: img.height(),
                        width: mask.width(),
                        height: mask.height(),
                    });
                }
                for (&v, &m) in img.pixels().iter().zip(mask.bits()) {
                    if m {
                        counts[v as usize] += 1;
                    }
                }
            }
        }
        Ok(Histogram { counts })
    }

    /// Build directly from raw bin counts (used by tests and generators).
    pub fn from_counts(counts: Vec<u64>) -> Histogram {
        Histogram { counts }
    }

    #[inline]
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    #[inline]
    pub fn bin_count(&self) -> usize {
        self.counts.len()
    }

    /// Total number of tallied pixels.
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Number of bins with a non-zero count.
    pub fn occupied_bins(&self) -> usize {
        self.counts.iter().filter(|&&c| c > 0).count()
    }

    /// Smallest intensity with a non-zero count.
    pub fn first_occupied(&self) -> Option<u16> {
        self.counts.iter().position(|&c| c > 0).map(|i| i as u16)
    }

    /// Largest intensity with a non-zero count.
    pub fn last_occupied(&self) -> Option<u16> {
        self.counts
            .iter()
            .rposition(|&c| c > 0)
            .map(|i| i as u16)
    }
}

/// Minimum and maximum intensity over a region of interest.
///
/// The roi must be non-empty and match the image dimensions.
pub fn min_max(img: &GrayImage, roi: &BinaryMask) -> Result<(u16, u16), RasterError> {
    if !roi.matches_image(img) {
        return Err(RasterError::DimensionMismatch {
            expected_width: img.width(),
            expected_height: img.height(),
            width: roi.width(),
            height: roi.height(),
        });
    }
    let mut lo = u16::MAX;
    let mut hi = 0u16;
    let mut seen = false;
    for (&v, &m) in img.pixels().iter().zip(roi.bits()) {
        if m {
            seen = true;
            lo = lo.min(v);
            hi = hi.max(v);
        }
    }
    if !seen {
        return Err(RasterError::EmptyRoi);
    }
    Ok((lo, hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn img(w: u32, h: u32, px: &[u16]) -> GrayImage {
        GrayImage::from_pixels(w, h, BitDepth::Eight, px.to_vec()).unwrap()
    }

    #[test]
    fn histogram_whole_image_tally() {
        let i = img(2, 1, &[3, 3]);
        let h = Histogram::of(&i, None).unwrap();
        assert_eq!(h.counts()[3], 2);
        assert_eq!(h.total(), 2);
        assert!(h.counts().iter().enumerate().all(|(v, &c)| v == 3 || c == 0));
    }

    #[test]
    fn histogram_empty_roi_is_all_zero() {
        let i = img(3, 3, &[1; 9]);
        let roi = BinaryMask::empty(3, 3);
        let h = Histogram::of(&i, Some(&roi)).unwrap();
        assert_eq!(h.total(), 0);
    }

    #[test]
    fn histogram_middle_row_roi() {
        // 3x3 image with values 0..8; roi covering the middle row.
        let i = img(3, 3, &[0, 1, 2, 3, 4, 5, 6, 7, 8]);
        let roi = BinaryMask::from_fn(3, 3, |_, y| y == 1);
        let h = Histogram::of(&i, Some(&roi)).unwrap();
        assert_eq!(h.counts()[3], 1);
        assert_eq!(h.counts()[4], 1);
        assert_eq!(h.counts()[5], 1);
        assert_eq!(h.total(), 3);
    }

    #[test]
    fn histogram_roi_dimension_mismatch() {
        let i = img(3, 3, &[0; 9]);
        let roi = BinaryMask::empty(2, 3);
        assert!(matches!(
            Histogram::of(&i, Some(&roi)),
            Err(RasterError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn min_max_constant_image() {
        let i = img(2, 2, &[7, 7, 7, 7]);
        let roi = BinaryMask::filled(2, 2, true);
        assert_eq!(min_max(&i, &roi).unwrap(), (7, 7));
    }

    #[test]
    fn min_max_two_values() {
        let i = img(2, 1, &[10, 200]);
        let roi = BinaryMask::filled(2, 1, true);
        assert_eq!(min_max(&i, &roi).unwrap(), (10, 200));
    }

    #[test]
    fn min_max_empty_roi_errors() {
        let i = img(2, 1, &[1, 2]);
        let roi = BinaryMask::empty(2, 1);
        assert!(matches!(min_max(&i, &roi), Err(RasterError::EmptyRoi)));
    }

    #[test]
    fn from_pixels_validates_range() {
        let r = GrayImage::from_pixels(1, 1, BitDepth::Eight, vec![300]);
        assert!(matches!(r, Err(RasterError::PixelOutOfRange { .. })));
        assert!(GrayImage::from_pixels(1, 1, BitDepth::Sixteen, vec![300]).is_ok());
    }

    #[test]
    fn from_pixels_validates_length() {
        let r = GrayImage::from_pixels(2, 2, BitDepth::Eight, vec![0; 3]);
        assert!(matches!(r, Err(RasterError::BadBufferLength { .. })));
    }

    #[test]
    fn mask_set_operations() {
        let a = BinaryMask::from_fn(2, 2, |x, _| x == 0);
        let b = BinaryMask::from_fn(2, 2, |_, y| y == 0);
        assert_eq!(a.intersect(&b).count_true(), 1);
        assert_eq!(a.union(&b).count_true(), 3);
        assert_eq!(a.complement().count_true(), 2);
        assert!(a.intersect(&b).is_subset_of(&a));
    }

    #[test]
    fn orientation_roundtrip() {
        assert_eq!("left".parse::<Orientation>().unwrap(), Orientation::Left);
        assert_eq!(Orientation::Right.flipped(), Orientation::Left);
        assert_eq!(Orientation::Right.chest_wall_column(10), 9);
    }

    #[test]
    fn flip_horizontal_involution() {
        let i = img(3, 2, &[1, 2, 3, 4, 5, 6]);
        assert_eq!(i.flipped_horizontal().flipped_horizontal(), i);
        assert_eq!(i.flipped_horizontal().get(0, 0), 3);
    }
}
