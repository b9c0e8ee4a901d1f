//! Why a curve, not a line: segment curved phantoms, then score the
//! pipeline's boundary against the best straight edge.
//!
//!     cargo run --example curved_vs_line
//!
//! For each noise-free curved phantom, the truth edge d(y) is sampled
//! over the muscle rows and a least-squares line is fit to it; the line
//! is rasterized into a wedge mask the same way the phantom rasterizes
//! its edge. Both that mask and the pipeline's output are scored with
//! the same symmetric contour distance, so the printout is a direct
//! answer to "would a straight-line model have been enough?".

use pectoralis::phantom::{evaluate, generate_phantom, suite_specs, PectoralEdge, SuitePreset};
use pectoralis::pipeline::{segment_pectoral, PipelineConfig};
use pectoralis::raster::{BinaryMask, Orientation};

fn main() {
    let mut specs = suite_specs(SuitePreset::Curved, 6, 11);
    for s in &mut specs {
        s.noise_sigma = 0.0;
    }

    println!("case  bulge(px)  pipeline(px)  best line(px)");
    for (i, spec) in specs.iter().enumerate() {
        let (c0, c1, c2) = match spec.edge {
            PectoralEdge::Curved { c0, c1, c2 } => (c0, c1, c2),
            PectoralEdge::Straight { .. } => unreachable!("curved preset"),
        };
        let d = |y: f64| c0 + y * (c1 + y * c2);

        let (img, truth, _) = generate_phantom(spec).expect("valid spec");
        let res = segment_pectoral(&img, &PipelineConfig::default()).expect("pipeline");

        // least-squares x = a + b*y over the rows that carry muscle
        let samples: Vec<(f64, f64)> = (0..spec.height)
            .map(|y| y as f64 + 0.5)
            .map(|py| (py, d(py)))
            .filter(|&(_, x)| x > 0.0)
            .collect();
        let n = samples.len() as f64;
        let (sy, sx, syy, sxy) = samples.iter().fold((0.0, 0.0, 0.0, 0.0), |acc, &(y, x)| {
            (acc.0 + y, acc.1 + x, acc.2 + y * y, acc.3 + x * y)
        });
        let b = (n * sxy - sy * sx) / (n * syy - sy * sy);
        let a = (sx - b * sy) / n;

        let w = spec.width as f64;
        let line_mask = BinaryMask::from_fn(spec.width, spec.height, |x, y| {
            let wall_dist = match spec.orientation {
                Orientation::Left => x as f64 + 0.5,
                Orientation::Right => w - (x as f64 + 0.5),
            };
            wall_dist < a + b * (y as f64 + 0.5)
        });

        let pipe = evaluate(&res.pectoral, &truth).expect("same shape");
        let line = evaluate(&line_mask, &truth).expect("same shape");

        // mid-span sag of the quadratic relative to its chord; how much
        // curvature the line has to ignore
        let span = samples.last().expect("muscle rows").0 - samples[0].0;
        let bulge = c2.abs() * span * span / 4.0;
        println!(
            "{i:4}  {bulge:9.1}  {:12.2}  {:13.2}",
            pipe.boundary_mean_distance, line.boundary_mean_distance
        );
        assert!(
            pipe.boundary_mean_distance < line.boundary_mean_distance,
            "case {i}: the curve tracker should beat any straight edge"
        );
    }
    println!("pipeline boundary beat the least-squares line on every case");
}
