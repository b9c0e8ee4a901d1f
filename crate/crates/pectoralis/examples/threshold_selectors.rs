//! Otsu vs Kapur on synthetic histograms.
//!
//!     cargo run --example threshold_selectors
//!
//! Builds count tables directly (no image needed), runs both selectors,
//! and prints the chosen cuts with their objective values. The two
//! criteria agree on a balanced bimodal table and drift apart once one
//! mode dominates the pixel count; the last table is degenerate on
//! purpose to show the error path.

use pectoralis::raster::Histogram;
use pectoralis::threshold::{kapur_threshold, otsu_threshold};

/// Add a gaussian bump of total mass ~`m` centered at `mu`.
fn bump(counts: &mut [u64], m: f64, mu: f64, sigma: f64) {
    for (v, c) in counts.iter_mut().enumerate() {
        let z = (v as f64 - mu) / sigma;
        *c += (m / (sigma * (2.0 * std::f64::consts::PI).sqrt())
            * (-0.5 * z * z).exp())
        .round() as u64;
    }
}

fn main() {
    let mut balanced = vec![0u64; 256];
    bump(&mut balanced, 60_000.0, 70.0, 9.0);
    bump(&mut balanced, 60_000.0, 180.0, 9.0);

    // 20x more mass in the dark mode; Otsu pulls toward it, Kapur's
    // entropy sum cares about mode shape rather than raw mass.
    let mut lopsided = vec![0u64; 256];
    bump(&mut lopsided, 200_000.0, 60.0, 14.0);
    bump(&mut lopsided, 10_000.0, 190.0, 7.0);

    for (name, counts) in [("balanced", balanced), ("lopsided", lopsided)] {
        let h = Histogram::from_counts(counts);
        let otsu = otsu_threshold(&h).expect("two occupied bins");
        let kapur = kapur_threshold(&h).expect("two occupied bins");
        println!(
            "{name:>9}:  otsu t={:3} (variance {:8.1})   kapur t={:3} (entropy {:.4})",
            otsu.threshold, otsu.objective, kapur.threshold, kapur.objective
        );
    }

    // A single occupied bin admits no split where both classes are
    // non-empty.
    let flat = Histogram::from_counts(vec![0, 0, 42, 0]);
    match otsu_threshold(&flat) {
        Ok(r) => println!("unexpected success: {r:?}"),
        Err(e) => println!(" flatline:  {e}"),
    }
}
