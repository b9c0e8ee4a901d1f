//! End-to-end behaviour on synthetic phantoms: the pipeline against
//! ground truth the generator knows exactly.

use pectoralis::phantom::{
    evaluate, generate_phantom, suite_specs, ErrorClass, PectoralEdge, PhantomSpec, SuitePreset,
};
use pectoralis::pipeline::{segment_pectoral, segment_pectoral_staged, PipelineConfig};
use pectoralis::raster::Orientation;

fn cfg() -> PipelineConfig {
    PipelineConfig::default()
}

#[test]
fn breast_mask_matches_generator_truth() {
    for spec in suite_specs(SuitePreset::Mixed, 12, 31) {
        let (img, _, truth_breast) = generate_phantom(&spec).unwrap();
        let r = segment_pectoral_staged(&img, &cfg()).unwrap();
        let breast = &r.stages.as_ref().unwrap().breast;
        let score = evaluate(breast, &truth_breast).unwrap();
        assert!(
            score.dice >= 0.99,
            "breast dice {:.4} on sigma={:.1}",
            score.dice,
            spec.noise_sigma
        );
    }
}

#[test]
fn breast_mask_touches_exactly_one_vertical_edge() {
    use pectoralis::morphology::{connected_components, Connectivity};
    for spec in suite_specs(SuitePreset::Mixed, 12, 57) {
        let (img, _, _) = generate_phantom(&spec).unwrap();
        let r = segment_pectoral_staged(&img, &cfg()).unwrap();
        let breast = &r.stages.as_ref().unwrap().breast;
        let labels = connected_components(breast, Connectivity::Eight);
        assert_eq!(labels.components().len(), 1);
        let h = breast.height();
        let w = breast.width();
        let left = (0..h).any(|y| breast.get(0, y));
        let right = (0..h).any(|y| breast.get(w - 1, y));
        assert!(
            left != right,
            "breast must touch exactly one vertical edge (left={left}, right={right})"
        );
    }
}

#[test]
fn orientation_is_read_off_every_phantom() {
    for spec in suite_specs(SuitePreset::Mixed, 30, 5) {
        let (img, _, _) = generate_phantom(&spec).unwrap();
        let r = segment_pectoral(&img, &cfg()).unwrap();
        assert_eq!(r.orientation, spec.orientation, "spec: {spec:?}");
    }
}

#[test]
fn marker_sits_inside_the_top_strip() {
    let spec = PhantomSpec::default(); // clean wedge into the top-left corner
    let (img, _, _) = generate_phantom(&spec).unwrap();
    let r = segment_pectoral_staged(&img, &cfg()).unwrap();
    let s = r.stages.as_ref().unwrap();
    let strip_rows = (0.04f64 * img.height() as f64).ceil() as u32;
    let mut nonzero = 0u32;
    for y in 0..img.height() {
        for x in 0..img.width() {
            if s.marker.get(x, y) > 0 {
                nonzero += 1;
                assert!(y < strip_rows, "marker pixel below the strip at ({x},{y})");
            }
        }
    }
    assert!(nonzero > 0, "marker must not be empty on a wedge phantom");
}

#[test]
fn straight_edge_recovers_at_dice_097() {
    let spec = PhantomSpec::default();
    let (img, truth, _) = generate_phantom(&spec).unwrap();
    let r = segment_pectoral(&img, &cfg()).unwrap();
    assert!(r.found);
    let score = evaluate(&r.pectoral, &truth).unwrap();
    assert!(score.dice >= 0.97, "dice {:.4}", score.dice);
    assert_eq!(score.error_class, ErrorClass::Correct);
}

#[test]
fn curved_edge_recovers_and_beats_a_line_fit() {
    // noticeable bulge, no noise: the curve is the whole story
    let exit_y = 192.0;
    let bulge = 24.0;
    let spec = PhantomSpec {
        edge: PectoralEdge::Curved {
            c0: 96.0,
            c1: (4.0 * bulge - 96.0) / exit_y,
            c2: -4.0 * bulge / (exit_y * exit_y),
        },
        ..PhantomSpec::default()
    };
    let (img, truth, _) = generate_phantom(&spec).unwrap();
    let r = segment_pectoral(&img, &cfg()).unwrap();
    assert!(r.found);
    let score = evaluate(&r.pectoral, &truth).unwrap();
    assert!(score.dice >= 0.95, "dice {:.4}", score.dice);

    // line-fit oracle: best least-squares straight boundary, scored with
    // the same symmetric mean distance as the pipeline's boundary
    use pectoralis::phantom::mean_boundary_distance;
    use pectoralis::pipeline::extract_boundary;
    let truth_boundary = extract_boundary(&truth, Orientation::Left);
    let n = truth_boundary.len() as f64;
    let (mut sy, mut sx, mut syy, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for &(x, y) in &truth_boundary {
        sy += y as f64;
        sx += x as f64;
        syy += (y as f64) * (y as f64);
        sxy += (x as f64) * (y as f64);
    }
    let slope = (n * sxy - sy * sx) / (n * syy - sy * sy);
    let intercept = (sx - slope * sy) / n;
    let y_lo = truth_boundary.iter().map(|p| p.1).min().unwrap();
    let y_hi = truth_boundary.iter().map(|p| p.1).max().unwrap();
    let line: Vec<(u32, u32)> = (y_lo..=y_hi)
        .map(|y| {
            let x = (intercept + slope * y as f64).round().max(0.0) as u32;
            (x.min(img.width() - 1), y)
        })
        .collect();

    let pipeline_d = mean_boundary_distance(&r.boundary, &truth_boundary);
    let line_d = mean_boundary_distance(&line, &truth_boundary);
    assert!(
        pipeline_d < line_d,
        "pipeline {pipeline_d:.2}px should beat the line fit {line_d:.2}px"
    );
}

#[test]
fn zero_area_muscle_flags_not_found() {
    let spec = PhantomSpec {
        edge: PectoralEdge::Straight { angle_deg: 90.0 },
        blobs: vec![pectoralis::phantom::Blob {
            cx: 40.0,
            cy: 150.0,
            radius: 10.0,
            intensity: 180,
        }],
        ..PhantomSpec::default()
    };
    let (img, truth, _) = generate_phantom(&spec).unwrap();
    assert!(truth.is_empty());
    let r = segment_pectoral(&img, &cfg()).unwrap();
    assert!(!r.found);
    assert!(r.pectoral.is_empty());
    let score = evaluate(&r.pectoral, &truth).unwrap();
    assert_eq!(score.error_class, ErrorClass::Correct);
    assert_eq!(score.dice, 1.0);
}

#[test]
fn pectoral_nests_inside_breast_and_reconstruction_dampens() {
    for spec in suite_specs(SuitePreset::Mixed, 10, 99) {
        let (img, _, _) = generate_phantom(&spec).unwrap();
        let r = segment_pectoral_staged(&img, &cfg()).unwrap();
        let s = r.stages.as_ref().unwrap();
        assert!(r.pectoral.is_subset_of(&s.breast));
        for (rv, wv) in s.reconstructed.pixels().iter().zip(s.windowed.pixels()) {
            assert!(rv <= wv, "reconstruction must stay under its mask");
        }
    }
}

#[test]
fn mirrored_phantom_gives_mirrored_segmentation() {
    let spec = PhantomSpec {
        noise_sigma: 6.0,
        seed: 3,
        ..PhantomSpec::default()
    };
    let mirrored = PhantomSpec {
        orientation: Orientation::Right,
        ..spec.clone()
    };
    let (li, _, _) = generate_phantom(&spec).unwrap();
    let (ri, _, _) = generate_phantom(&mirrored).unwrap();
    assert_eq!(ri, li.flipped_horizontal());

    let a = segment_pectoral(&li, &cfg()).unwrap();
    let b = segment_pectoral(&ri, &cfg()).unwrap();
    assert_eq!(a.found, b.found);
    assert_eq!(b.pectoral, a.pectoral.flipped_horizontal());
}

#[test]
fn small_mixed_suite_scores_mostly_correct() {
    // a fast forecast of the 200-case acceptance run
    let specs = suite_specs(SuitePreset::Mixed, 30, 2024);
    let mut correct = 0;
    let mut classes = Vec::new();
    for spec in &specs {
        let (img, truth, _) = generate_phantom(spec).unwrap();
        let r = segment_pectoral(&img, &cfg()).unwrap();
        let score = evaluate(&r.pectoral, &truth).unwrap();
        if score.error_class == ErrorClass::Correct {
            correct += 1;
        } else {
            classes.push((score.error_class, score.dice));
        }
    }
    assert!(
        correct >= 25,
        "only {correct}/30 correct; misses: {classes:?}"
    );
}
