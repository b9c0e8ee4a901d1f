//! Trace the muscle boundary on a curved phantom and compare it to the
//! analytic edge.
//!
//!     cargo run --example boundary_trace
//!
//! Generates a noise-free curved-edge phantom (the edge is the quadratic
//! d(y) = c0 + c1*y + c2*y^2, distance from the chest wall), segments
//! it, and prints the detected boundary column next to the analytic one
//! every 16 rows. Finishes with the region statistics the CLI reports.

use pectoralis::phantom::{generate_phantom, PectoralEdge, PhantomSpec, Texture};
use pectoralis::pipeline::{pectoral_stats, segment_pectoral, PipelineConfig};
use pectoralis::raster::Orientation;

fn main() {
    let (c0, c1, c2) = (110.0, -0.35, -0.0009);
    let spec = PhantomSpec {
        width: 256,
        height: 256,
        orientation: Orientation::Left,
        edge: PectoralEdge::Curved { c0, c1, c2 },
        pectoral_level: 170,
        breast_level: 110,
        background_level: 8,
        blobs: vec![],
        texture: Texture::Fibrous,
        noise_sigma: 0.0,
        seed: 5,
    };
    let (img, truth, _breast) = generate_phantom(&spec).expect("valid spec");
    let res = segment_pectoral(&img, &PipelineConfig::default()).expect("pipeline");
    assert!(res.found, "phantom muscle should be found");

    println!("row   detected x   analytic d(y)   error");
    let mut worst = 0.0f64;
    for &(x, y) in &res.boundary {
        let d = c0 + (y as f64 + 0.5) * (c1 + (y as f64 + 0.5) * c2);
        let err = (x as f64 + 0.5 - d).abs();
        worst = worst.max(err);
        if y % 16 == 0 {
            println!("{y:3}   {x:10}   {d:13.1}   {err:5.2}");
        }
    }
    println!("boundary vertices: {}", res.boundary.len());
    println!("worst row error:   {worst:.2} px");

    let stats = pectoral_stats(&img, &res.pectoral).expect("non-empty mask");
    println!(
        "area {} px (truth {}), mean intensity {:.1} (painted level {})",
        stats.area,
        truth.count_true(),
        stats.mean_intensity,
        spec.pectoral_level
    );
}
