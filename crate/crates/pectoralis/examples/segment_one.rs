//! Segment a single image and write the artifacts.
//!
//!     cargo run --example segment_one [IMAGE]
//!
//! With no argument, a curved-edge phantom stands in for the input, and
//! the result is also scored against its ground truth.

use pectoralis::codec::{read_image, write_mask};
use pectoralis::phantom::{evaluate, generate_phantom, suite_specs, SuitePreset};
use pectoralis::pipeline::{segment_pectoral, PipelineConfig};

fn main() {
    let out = std::path::Path::new("target/example_out/segment_one");
    std::fs::create_dir_all(out).expect("create output dir");

    let arg = std::env::args().nth(1);
    let (img, truth) = match &arg {
        Some(path) => (read_image(path).expect("readable image"), None),
        None => {
            let spec = &suite_specs(SuitePreset::Curved, 1, 42)[0];
            let (img, truth, _) = generate_phantom(spec).expect("valid spec");
            (img, Some(truth))
        }
    };

    let cfg = PipelineConfig::default();
    let result = segment_pectoral(&img, &cfg).expect("pipeline");

    println!("input:        {}", arg.as_deref().unwrap_or("built-in curved phantom"));
    println!("orientation:  {:?}", result.orientation);
    println!("found:        {}", result.found);
    println!("thresholds:   {:?}", result.thresholds);
    if let Some(stats) = result.stats {
        println!("area:         {} px", stats.area);
        println!("mean level:   {:.1}", stats.mean_intensity);
    }
    println!("boundary:     {} vertices", result.boundary.len());
    if let Some(truth) = truth {
        let score = evaluate(&result.pectoral, &truth).expect("same dimensions");
        println!("dice:         {:.4} ({})", score.dice, score.error_class);
    }

    let mask_path = out.join("mask.pgm");
    write_mask(&result.pectoral, &mask_path).expect("write mask");
    println!("mask:         {}", mask_path.display());
}
