//! Run a 30-case validation suite through the batch runner.
//!
//!     cargo run --example batch_validate
//!
//! Equivalent to `pectoralis validate --suite mixed --count 30`, but via
//! the library API: build the case list, run it across all cores, then
//! write the same report.json / summary.csv pair the CLI produces.

use pectoralis::batch::{run_batch, suite_cases, write_csv, write_json, BatchOptions};
use pectoralis::phantom::SuitePreset;
use pectoralis::pipeline::PipelineConfig;

fn main() {
    let out = std::path::Path::new("target/example_out/batch_validate");
    std::fs::create_dir_all(out).expect("create output dir");

    let cases = suite_cases(SuitePreset::Mixed, 30, 2024);
    let report = run_batch(&cases, &PipelineConfig::default(), BatchOptions::default());

    let agg = &report.aggregate;
    println!("cases:      {}", agg.count);
    println!("correct:    {}", agg.correct);
    println!(
        "errors:     {} dense-as-muscle, {} muscle-as-breast, {} both, {} none-found, {} failed",
        agg.dense_as_muscle, agg.muscle_as_breast, agg.both, agg.no_pectoral_found, agg.failed
    );
    println!("error rate: {:.3}", agg.error_rate);
    if let Some(d) = agg.mean_dice_correct {
        println!("mean dice over correct cases: {d:.4}");
    }

    // slowest three cases, from the per-case wall-clock timings
    let mut by_time: Vec<_> = report
        .cases
        .iter()
        .filter_map(|c| c.timings.as_ref().map(|t| (t.total_ms, &c.path)))
        .collect();
    by_time.sort_by(|a, b| b.0.total_cmp(&a.0));
    for (ms, path) in by_time.iter().take(3) {
        println!("slow case:  {path}  {ms:.1} ms");
    }

    let json = out.join("report.json");
    write_json(&report, &json).expect("write report");
    let csv = out.join("summary.csv");
    write_csv(&report, &csv).expect("write summary");
    println!("wrote {} and {}", json.display(), csv.display());
}
