//! Geodesic reconstruction by dilation on a toy relief.
//!
//!     cargo run --example reconstruction_demo
//!
//! The relief holds two domes joined by a low saddle. The marker keeps a
//! single pixel at the left dome's peak and is zero everywhere else.
//! Reconstruction regrows everything reachable from that pixel without
//! ever exceeding the relief, so the left dome comes back exactly while
//! the right dome is clipped to the saddle level: this selective
//! dampening is what lets the pipeline keep the corner component bright
//! and flatten everything not connected to it.

use pectoralis::morphology::{reconstruct, Connectivity};
use pectoralis::raster::{BitDepth, GrayImage};

const W: u32 = 30;
const H: u32 = 11;

fn dome(cx: f64, cy: f64, peak: f64, radius: f64, x: u32, y: u32) -> f64 {
    let d = ((x as f64 - cx).powi(2) + (y as f64 - cy).powi(2)).sqrt();
    (peak * (1.0 - d / radius)).max(0.0)
}

fn render(title: &str, img: &GrayImage) {
    // 0..=9 maps onto a ten-step ramp
    let ramp: &[u8] = b" .:-=+*#%@";
    println!("{title}");
    for y in 0..img.height() {
        let row: String = (0..img.width())
            .map(|x| ramp[(img.get(x, y) as usize).min(9)] as char)
            .collect();
        println!("  |{row}|");
    }
}

fn main() {
    let mut relief = GrayImage::new(W, H, BitDepth::Eight).expect("small image");
    for y in 0..H {
        for x in 0..W {
            let v = dome(7.0, 5.0, 9.0, 9.0, x, y).max(dome(21.0, 5.0, 7.0, 8.0, x, y));
            relief.set(x, y, v.round() as u16);
        }
    }

    let mut marker = GrayImage::new(W, H, BitDepth::Eight).expect("small image");
    marker.set(7, 5, 255); // clamped to the relief on entry

    let rec = reconstruct(&marker, &relief, Connectivity::Eight).expect("same shape");

    render("relief (two domes, saddle between):", &relief);
    render("marker (one pixel on the left peak):", &marker);
    render("reconstruction (right dome clipped to the saddle):", &rec);

    // along the ridge row, the lowest point between the peaks
    let saddle = (7..=21).map(|x| relief.get(x, 5)).min().unwrap();
    let right_peak_after = rec.get(21, 5);
    println!(
        "right peak: {} before, {right_peak_after} after (saddle level {saddle})",
        relief.get(21, 5)
    );
    assert_eq!(right_peak_after, saddle);
}
