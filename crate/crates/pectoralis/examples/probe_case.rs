//! scratch probe, not part of the example set
use pectoralis::phantom::{evaluate, generate_phantom, suite_specs, PectoralEdge, SuitePreset};
use pectoralis::pipeline::{segment_pectoral, PipelineConfig};
use pectoralis::raster::{BinaryMask, Orientation};

fn main() {
    let mut specs = suite_specs(SuitePreset::Curved, 60, 11);
    for s in &mut specs {
        s.noise_sigma = 0.0;
    }
    let mut fails = 0;
    let mut min_margin = f64::INFINITY;
    let mut worst = 0usize;
    for (i, spec) in specs.iter().enumerate() {
        let (c0, c1, c2) = match spec.edge {
            PectoralEdge::Curved { c0, c1, c2 } => (c0, c1, c2),
            PectoralEdge::Straight { .. } => unreachable!("curved preset"),
        };
        let d = |y: f64| c0 + y * (c1 + y * c2);
        let (img, truth, _) = generate_phantom(spec).expect("valid");
        let res = segment_pectoral(&img, &PipelineConfig::default()).expect("pipeline");

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
        let margin = line.boundary_mean_distance - pipe.boundary_mean_distance;
        if margin < min_margin {
            min_margin = margin;
            worst = i;
        }
        if margin <= 0.0 {
            fails += 1;
            println!(
                "case {i:3} FAIL margin {margin:+.2} pipe {:.2} line {:.2} dice {:.4} {:?} t {:?}",
                pipe.boundary_mean_distance,
                line.boundary_mean_distance,
                pipe.dice,
                pipe.error_class,
                res.thresholds.kapur,
            );
        }
    }
    println!("60 cases, {fails} fails, min margin {min_margin:+.2} at case {worst}");
}
