//! Exact squared Euclidean distance transform (Meijster's algorithm).
//!
//! Disk dilation and erosion reduce to thresholding this transform at the
//! squared radius, which keeps large-radius operations linear in pixel
//! count instead of linear in pixel count times disk area. All arithmetic
//! is integral, so the reduction is exact, not an approximation.

use crate::raster::BinaryMask;

/// Columns with no feature pixel get this vertical distance. It only has
/// to exceed any true in-image distance, and `w + h` does.
fn column_sentinel(w: u32, h: u32) -> i64 {
    (w + h) as i64
}

/// Squared Euclidean distance from each pixel to the nearest true pixel
/// of `mask`, row-major. Pixels of an all-false mask get values larger
/// than any in-image squared distance.
///
/// Two passes: per-column nearest vertical distances, then a per-row
/// lower-envelope scan over the parabolas those distances define.
pub(crate) fn squared_edt(mask: &BinaryMask) -> Vec<u32> {
    let w = mask.width() as usize;
    let h = mask.height() as usize;
    assert!(
        mask.width() + mask.height() <= 40_000,
        "raster too large for the distance transform"
    );
    if w == 0 || h == 0 {
        return Vec::new();
    }
    let inf = column_sentinel(mask.width(), mask.height());

    // Phase 1: g[x + y*w] = vertical distance to the nearest feature in
    // column x (down sweep, then up sweep).
    let mut g = vec![0i64; w * h];
    for x in 0..w {
        g[x] = if mask.get(x as u32, 0) { 0 } else { inf };
        for y in 1..h {
            g[y * w + x] = if mask.get(x as u32, y as u32) {
                0
            } else {
                // Sentinel stays put: inf + 1 still dominates real distances.
                g[(y - 1) * w + x] + 1
            };
        }
        for y in (0..h - 1).rev() {
            if g[(y + 1) * w + x] < g[y * w + x] {
                g[y * w + x] = g[(y + 1) * w + x] + 1;
            }
        }
    }

    // Phase 2: per row, minimize f(x, i) = (x-i)^2 + g(i)^2 over columns i
    // by maintaining the lower envelope of the parabolas.
    let mut out = vec![0u32; w * h];
    let mut s = vec![0i64; w]; // column of the parabola owning each segment
    let mut t = vec![0i64; w]; // where that segment starts
    for y in 0..h {
        let row = &g[y * w..(y + 1) * w];
        let f = |x: i64, i: i64| -> i64 {
            let gi = row[i as usize];
            (x - i) * (x - i) + gi * gi
        };
        // Largest x where parabola i still beats parabola u (i < u).
        let sep = |i: i64, u: i64| -> i64 {
            let gi = row[i as usize];
            let gu = row[u as usize];
            (u * u - i * i + gu * gu - gi * gi).div_euclid(2 * (u - i))
        };

        let mut q: isize = 0;
        s[0] = 0;
        t[0] = 0;
        for u in 1..w as i64 {
            while q >= 0 && f(t[q as usize], s[q as usize]) > f(t[q as usize], u) {
                q -= 1;
            }
            if q < 0 {
                q = 0;
                s[0] = u;
                t[0] = 0;
            } else {
                let start = 1 + sep(s[q as usize], u);
                if start < w as i64 {
                    q += 1;
                    s[q as usize] = u;
                    t[q as usize] = start;
                }
            }
        }
        for x in (0..w as i64).rev() {
            out[y * w + x as usize] = f(x, s[q as usize]) as u32;
            if x == t[q as usize] {
                q -= 1;
            }
        }
    }
    out
}
