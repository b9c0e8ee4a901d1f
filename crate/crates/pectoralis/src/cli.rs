//! Argument parsing and command plumbing for the `pectoralis` binary.
//!
//! Exit codes: 0 success, 1 error, 2 clean run that found no pectoral
//! muscle (segment only). Standard output carries only the paths of the
//! primary artifacts; everything else goes to standard error.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use pectoralis::batch::{
    directory_cases, run_batch, suite_cases, write_csv, write_json, BatchOptions,
};
use pectoralis::codec::{read_image, write_image, write_mask, write_rgb_png};
use pectoralis::kv::KvFile;
use pectoralis::morphology::Connectivity;
use pectoralis::phantom::{format_spec, generate_phantom, parse_spec, suite_specs, SuitePreset};
use pectoralis::pipeline::{
    render_overlay, segment_pectoral, segment_pectoral_staged, PectoralStats, PipelineConfig,
    SegmentationResult, StageThresholds, StageTimings, WindowMode,
};
use pectoralis::raster::Orientation;

#[derive(Parser)]
#[command(
    name = "pectoralis",
    about = "Pectoral muscle segmentation for MLO-view mammograms",
    version
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Segment one image: mask, boundary polyline, overlay, stats.
    Segment(SegmentArgs),
    /// Run a batch and write a JSON report plus a CSV summary.
    Validate(ValidateArgs),
    /// Generate phantom images with ground-truth masks.
    Phantom(PhantomArgs),
}

/// Pipeline overrides shared by segment and validate. Precedence:
/// defaults, then --config file entries, then explicit flags.
#[derive(Args)]
struct PipelineArgs {
    /// Key=value config file (keys match the JSON config field names)
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Marker strip height as a fraction of image height (0..1)
    #[arg(long, value_name = "FRACTION")]
    marker_rows: Option<f64>,
    /// Upper window bound parameter (0..1)
    #[arg(long, value_name = "FRACTION")]
    window_percentile: Option<f64>,
    /// How the upper bound parameter is read
    #[arg(long, value_name = "MODE")]
    window_mode: Option<WindowMode>,
    /// Closing disk radius as a fraction of image width (0..1)
    #[arg(long, value_name = "FRACTION")]
    close_radius: Option<f64>,
    /// Opening disk radius as a fraction of image width (0..1)
    #[arg(long, value_name = "FRACTION")]
    open_radius: Option<f64>,
    /// Pixel adjacency for reconstruction and labeling
    #[arg(long, value_parser = parse_connectivity)]
    connectivity: Option<Connectivity>,
    /// Invert intensities first (film-style images where tissue is dark)
    #[arg(long)]
    invert: bool,
}

fn parse_connectivity(s: &str) -> Result<Connectivity, String> {
    match s {
        "4" => Ok(Connectivity::Four),
        "8" => Ok(Connectivity::Eight),
        other => Err(format!("connectivity must be 4 or 8, got {other}")),
    }
}

const CONFIG_KEYS: &[&str] = &[
    "marker_rows_fraction",
    "window_upper_percentile",
    "window_mode",
    "close_radius_fraction",
    "open_radius_fraction",
    "connectivity",
    "invert_input",
];

impl PipelineArgs {
    fn build(&self) -> Result<PipelineConfig, String> {
        let mut cfg = PipelineConfig::default();
        if let Some(path) = &self.config {
            let ctx = |e: &dyn std::fmt::Display| format!("config {}: {e}", path.display());
            let text = std::fs::read_to_string(path).map_err(|e| ctx(&e))?;
            let kv = KvFile::parse(&text).map_err(|e| ctx(&e))?;
            kv.check_known(CONFIG_KEYS).map_err(|e| ctx(&e))?;
            const FRACTION: &str = "a number strictly between 0 and 1";
            if let Some(v) = kv
                .get_parsed::<f64>("marker_rows_fraction", FRACTION)
                .map_err(|e| ctx(&e))?
            {
                cfg.marker_rows_fraction = v;
            }
            if let Some(v) = kv
                .get_parsed::<f64>("window_upper_percentile", FRACTION)
                .map_err(|e| ctx(&e))?
            {
                cfg.window_upper_percentile = v;
            }
            if let Some(v) = kv
                .get_parsed::<WindowMode>("window_mode", "range_fraction or histogram_percentile")
                .map_err(|e| ctx(&e))?
            {
                cfg.window_mode = v;
            }
            if let Some(v) = kv
                .get_parsed::<f64>("close_radius_fraction", FRACTION)
                .map_err(|e| ctx(&e))?
            {
                cfg.close_radius_fraction = v;
            }
            if let Some(v) = kv
                .get_parsed::<f64>("open_radius_fraction", FRACTION)
                .map_err(|e| ctx(&e))?
            {
                cfg.open_radius_fraction = v;
            }
            if let Some(v) = kv.get("connectivity") {
                cfg.connectivity = parse_connectivity(v).map_err(|e| ctx(&e))?;
            }
            if let Some(v) = kv
                .get_parsed::<bool>("invert_input", "true or false")
                .map_err(|e| ctx(&e))?
            {
                cfg.invert_input = v;
            }
        }
        if let Some(v) = self.marker_rows {
            cfg.marker_rows_fraction = v;
        }
        if let Some(v) = self.window_percentile {
            cfg.window_upper_percentile = v;
        }
        if let Some(v) = self.window_mode {
            cfg.window_mode = v;
        }
        if let Some(v) = self.close_radius {
            cfg.close_radius_fraction = v;
        }
        if let Some(v) = self.open_radius {
            cfg.open_radius_fraction = v;
        }
        if let Some(v) = self.connectivity {
            cfg.connectivity = v;
        }
        if self.invert {
            cfg.invert_input = true;
        }
        cfg.validate().map_err(|e| e.to_string())?;
        Ok(cfg)
    }
}

#[derive(Args)]
struct SegmentArgs {
    /// Input image (PGM or PNG)
    input: PathBuf,
    /// Output directory (created if missing)
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Also write every intermediate raster under <out>/stages/
    #[arg(long)]
    dump_stages: bool,
    /// Leave wall-clock timings out of stats.json
    #[arg(long)]
    no_timing: bool,
    #[command(flatten)]
    pipeline: PipelineArgs,
}

#[derive(Args)]
struct ValidateArgs {
    /// Directory of images (with optional <stem>.truth.<ext> masks)
    #[arg(long, conflicts_with_all = ["suite", "count", "seed"])]
    dir: Option<PathBuf>,
    /// Built-in phantom suite to run instead of a directory
    #[arg(long, default_value = "mixed")]
    suite: SuitePreset,
    /// Number of suite cases
    #[arg(long, default_value_t = 200)]
    count: u32,
    /// Suite stream seed
    #[arg(long, default_value_t = 2024)]
    seed: u64,
    /// Output directory for report.json and summary.csv
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Worker count (0 = one per core)
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    /// Leave wall-clock timings out of the report (byte-identical reruns)
    #[arg(long)]
    no_timing: bool,
    #[command(flatten)]
    pipeline: PipelineArgs,
}

#[derive(Args)]
struct PhantomArgs {
    /// Built-in suite preset to draw cases from
    #[arg(long, default_value = "mixed", conflicts_with = "spec")]
    preset: SuitePreset,
    /// Generate from this spec file instead of a preset (seed stepped
    /// per case)
    #[arg(long, value_name = "FILE")]
    spec: Option<PathBuf>,
    /// How many image/truth pairs to write
    #[arg(long, default_value_t = 10)]
    count: u32,
    /// Base seed
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory (created if missing)
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

pub fn run() -> ExitCode {
    match Cli::parse().cmd {
        Cmd::Segment(args) => cmd_segment(&args),
        Cmd::Validate(args) => cmd_validate(&args),
        Cmd::Phantom(args) => cmd_phantom(&args),
    }
    .unwrap_or_else(|e| {
        eprintln!("error: {e}");
        ExitCode::from(1)
    })
}

/// stats.json payload for a single-image run.
#[derive(Serialize)]
struct SegmentStats {
    input: String,
    found: bool,
    orientation: Orientation,
    thresholds: StageThresholds,
    area: u64,
    mean_intensity: Option<f64>,
    boundary_points: usize,
    stats: Option<PectoralStats>,
    #[serde(skip_serializing_if = "Option::is_none")]
    timings: Option<StageTimings>,
}

fn cmd_segment(args: &SegmentArgs) -> Result<ExitCode, String> {
    let cfg = args.pipeline.build()?;
    let img = read_image(&args.input).map_err(|e| format!("{}: {e}", args.input.display()))?;
    let result = if args.dump_stages {
        segment_pectoral_staged(&img, &cfg)
    } else {
        segment_pectoral(&img, &cfg)
    }
    .map_err(|e| e.to_string())?;

    std::fs::create_dir_all(&args.out).map_err(|e| format!("{}: {e}", args.out.display()))?;
    let stem = args
        .input
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("image");
    let path_for = |suffix: &str| args.out.join(format!("{stem}.{suffix}"));

    let mask_path = path_for("mask.pgm");
    write_mask(&result.pectoral, &mask_path).map_err(|e| e.to_string())?;

    let boundary_path = path_for("boundary.txt");
    let mut bf = BufWriter::new(File::create(&boundary_path).map_err(|e| e.to_string())?);
    for &(x, y) in &result.boundary {
        writeln!(bf, "{x} {y}").map_err(|e| e.to_string())?;
    }
    bf.flush().map_err(|e| e.to_string())?;

    let overlay_path = path_for("overlay.png");
    let base = result
        .stages
        .as_ref()
        .map(|s| &s.windowed)
        .unwrap_or(&img);
    let rgb = render_overlay(base, &result);
    let mut of = BufWriter::new(File::create(&overlay_path).map_err(|e| e.to_string())?);
    write_rgb_png(rgb.width, rgb.height, &rgb.data, &mut of).map_err(|e| e.to_string())?;
    of.flush().map_err(|e| e.to_string())?;

    let stats_path = path_for("stats.json");
    let stats = SegmentStats {
        input: args.input.display().to_string(),
        found: result.found,
        orientation: result.orientation,
        thresholds: result.thresholds,
        area: result.stats.map(|s| s.area).unwrap_or(0),
        mean_intensity: result.stats.map(|s| s.mean_intensity),
        boundary_points: result.boundary.len(),
        stats: result.stats,
        timings: (!args.no_timing).then_some(result.timings),
    };
    let mut sf = BufWriter::new(File::create(&stats_path).map_err(|e| e.to_string())?);
    serde_json::to_writer_pretty(&mut sf, &stats).map_err(|e| e.to_string())?;
    sf.write_all(b"\n").and_then(|_| sf.flush()).map_err(|e| e.to_string())?;

    if args.dump_stages {
        dump_stages(&result, &args.out.join("stages"))?;
    }

    println!("{}", stats_path.display());
    Ok(if result.found {
        ExitCode::SUCCESS
    } else {
        eprintln!("no pectoral muscle found; wrote an empty mask");
        ExitCode::from(2)
    })
}

fn dump_stages(result: &SegmentationResult, dir: &Path) -> Result<(), String> {
    let stages = result
        .stages
        .as_ref()
        .expect("dump_stages runs the staged pipeline");
    std::fs::create_dir_all(dir).map_err(|e| format!("{}: {e}", dir.display()))?;
    let write_err = |e: pectoralis::codec::CodecError| e.to_string();
    write_mask(&stages.breast, dir.join("breast.pgm")).map_err(write_err)?;
    write_image(&stages.windowed, dir.join("windowed.pgm")).map_err(write_err)?;
    write_image(&stages.marker, dir.join("marker.pgm")).map_err(write_err)?;
    write_image(&stages.reconstructed, dir.join("reconstructed.pgm")).map_err(write_err)?;
    write_mask(&stages.candidate, dir.join("candidate.pgm")).map_err(write_err)?;
    write_mask(&stages.closed, dir.join("closed.pgm")).map_err(write_err)?;
    write_mask(&stages.opened, dir.join("opened.pgm")).map_err(write_err)?;
    Ok(())
}

fn cmd_validate(args: &ValidateArgs) -> Result<ExitCode, String> {
    let cfg = args.pipeline.build()?;
    let cases = match &args.dir {
        Some(dir) => directory_cases(dir).map_err(|e| format!("{}: {e}", dir.display()))?,
        None => suite_cases(args.suite, args.count, args.seed),
    };
    let report = run_batch(
        &cases,
        &cfg,
        BatchOptions {
            jobs: args.jobs,
            timing: !args.no_timing,
        },
    );

    std::fs::create_dir_all(&args.out).map_err(|e| format!("{}: {e}", args.out.display()))?;
    let report_path = args.out.join("report.json");
    write_json(&report, &report_path).map_err(|e| e.to_string())?;
    write_csv(&report, &args.out.join("summary.csv")).map_err(|e| e.to_string())?;

    let a = &report.aggregate;
    eprintln!(
        "{} cases: {} correct, error rate {:.4}, {} failed",
        a.count, a.correct, a.error_rate, a.failed
    );
    println!("{}", report_path.display());
    Ok(ExitCode::SUCCESS)
}

/// manifest.json payload for a phantom run.
#[derive(Serialize)]
struct Manifest {
    source: String,
    count: u32,
    seed: u64,
    cases: Vec<ManifestCase>,
}

#[derive(Serialize)]
struct ManifestCase {
    index: u32,
    image: String,
    truth: String,
    spec: String,
}

fn cmd_phantom(args: &PhantomArgs) -> Result<ExitCode, String> {
    let (source, specs) = match &args.spec {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| format!("{}: {e}", path.display()))?;
            let base = parse_spec(&text).map_err(|e| format!("{}: {e}", path.display()))?;
            let seed0 = args.seed.unwrap_or(base.seed);
            let specs = (0..args.count)
                .map(|i| {
                    let mut s = base.clone();
                    s.seed = seed0.wrapping_add(i as u64);
                    s
                })
                .collect::<Vec<_>>();
            (format!("spec:{}", path.display()), specs)
        }
        None => {
            let seed = args.seed.unwrap_or(1);
            (
                format!("preset:{}", args.preset),
                suite_specs(args.preset, args.count, seed),
            )
        }
    };

    std::fs::create_dir_all(&args.out).map_err(|e| format!("{}: {e}", args.out.display()))?;
    let mut cases = Vec::with_capacity(specs.len());
    for (i, spec) in specs.iter().enumerate() {
        let (img, truth, _) = generate_phantom(spec).map_err(|e| format!("case {i}: {e}"))?;
        let image_name = format!("case_{i:03}.pgm");
        let truth_name = format!("case_{i:03}.truth.pgm");
        write_image(&img, args.out.join(&image_name)).map_err(|e| e.to_string())?;
        write_mask(&truth, args.out.join(&truth_name)).map_err(|e| e.to_string())?;
        cases.push(ManifestCase {
            index: i as u32,
            image: image_name,
            truth: truth_name,
            spec: format_spec(spec),
        });
    }

    let manifest = Manifest {
        source,
        count: args.count,
        seed: args.seed.unwrap_or_else(|| match &args.spec {
            Some(_) => specs.first().map(|s| s.seed).unwrap_or(0),
            None => 1,
        }),
        cases,
    };
    let manifest_path = args.out.join("manifest.json");
    let mut mf = BufWriter::new(File::create(&manifest_path).map_err(|e| e.to_string())?);
    serde_json::to_writer_pretty(&mut mf, &manifest).map_err(|e| e.to_string())?;
    mf.write_all(b"\n").and_then(|_| mf.flush()).map_err(|e| e.to_string())?;

    println!("{}", manifest_path.display());
    Ok(ExitCode::SUCCESS)
}
