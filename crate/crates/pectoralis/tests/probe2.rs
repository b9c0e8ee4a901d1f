use pectoralis::phantom::{evaluate, generate_phantom, suite_specs, ErrorClass, SuitePreset};
use pectoralis::pipeline::{segment_pectoral, PipelineConfig};
use rayon::prelude::*;

#[test]
fn probe2() {
    for seed in [2024u64, 7, 99, 31337] {
        let specs = suite_specs(SuitePreset::Mixed, 200, seed);
        let results: Vec<(usize, f64, ErrorClass, f64)> = specs
            .par_iter()
            .enumerate()
            .map(|(i, spec)| {
                let (img, truth, _) = generate_phantom(spec).unwrap();
                let r = segment_pectoral(&img, &PipelineConfig::default()).unwrap();
                let s = evaluate(&r.pectoral, &truth).unwrap();
                (i, spec.noise_sigma, s.error_class, s.dice)
            })
            .collect();
        let correct: Vec<_> = results.iter().filter(|r| r.2 == ErrorClass::Correct).collect();
        let mean_dice: f64 = correct.iter().map(|r| r.3).sum::<f64>() / correct.len() as f64;
        println!(
            "seed {seed}: {}/200 correct, mean dice over correct = {:.4}",
            correct.len(),
            mean_dice
        );
        for (i, sigma, class, dice) in results.iter().filter(|r| r.2 != ErrorClass::Correct) {
            println!("   case {i}: {class:?} dice={dice:.3} sigma={sigma:.1}");
        }
    }
}
