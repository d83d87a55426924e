use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use bsod::baselines::{flag_top_fraction, iforest_scores, lof_scores, IForestConfig, LofConfig};
use bsod::bench::{
    precision_recall, render_report, run_grid, DatasetKind, GridConfig, Method, ReportFormat,
};
use bsod::datasets::{gen_circle, gen_moons, load_csv, save_csv, LabeledDataset};
use bsod::detector::{bsod_detect, BsodConfig};

#[derive(Parser)]
#[command(
    name = "bsod",
    about = "Boosted spectral outlier detection toolkit",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a labeled synthetic dataset as CSV
    Generate(GenerateArgs),
    /// Run an outlier detector on a CSV dataset
    Detect(DetectArgs),
    /// Run the benchmark grid and write report files
    Bench(BenchArgs),
    /// Join a dataset with detection results for plotting
    PlotData(PlotDataArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum DatasetChoice {
    Circle,
    Moons,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodChoice {
    Bsod,
    Lof,
    Iforest,
}

fn contamination_in_unit_interval(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if v > 0.0 && v < 1.0 {
        Ok(v)
    } else {
        Err(format!("contamination must lie in (0, 1), got {v}"))
    }
}

fn positive_float(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(format!("value must be positive, got {v}"))
    }
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, value_enum)]
    dataset: DatasetChoice,
    #[arg(long, default_value_t = 10_000)]
    n_inliers: usize,
    #[arg(long, value_parser = contamination_in_unit_interval)]
    contamination: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct DetectArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, value_enum)]
    method: MethodChoice,
    #[arg(long, value_parser = contamination_in_unit_interval)]
    contamination: f64,
    #[arg(long, default_value_t = 0.5, value_parser = positive_float)]
    eps: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    /// Write per-round JSON trace (bsod only)
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// Flat key-value config file overriding the default grid
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    out_dir: PathBuf,
    #[arg(long, default_value_t = 5)]
    seeds: u64,
}

#[derive(Args)]
struct PlotDataArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    results: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Generate(args) => cmd_generate(args),
        Command::Detect(args) => cmd_detect(args),
        Command::Bench(args) => cmd_bench(args),
        Command::PlotData(args) => cmd_plot_data(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn cmd_generate(args: GenerateArgs) -> Result<(), Box<dyn std::error::Error>> {
    let dataset = match args.dataset {
        DatasetChoice::Circle => gen_circle(args.n_inliers, args.contamination, args.seed)?,
        DatasetChoice::Moons => gen_moons(args.n_inliers, args.contamination, args.seed)?,
    };
    save_csv(&dataset, &args.out)?;
    println!(
        "realized_contamination={}",
        dataset.contamination.unwrap_or(f64::NAN)
    );
    Ok(())
}

fn cmd_detect(args: DetectArgs) -> Result<(), Box<dyn std::error::Error>> {
    let dataset: LabeledDataset = load_csv(&args.input)?;
    let n = dataset.points.len();

    let (scores, flagged): (Vec<f64>, Vec<usize>) = match args.method {
        MethodChoice::Bsod => {
            let mut config = BsodConfig::new(args.contamination)?;
            config.eps = args.eps;
            config.seed = args.seed;
            let result = bsod_detect(&dataset.points, &config)?;
            if let Some(trace_path) = &args.trace {
                std::fs::write(trace_path, serde_json::to_string_pretty(&result.rounds)?)?;
            }
            let mut flagged = result.outlier_indices.clone();
            flagged.sort_unstable();
            (result.scores, flagged)
        }
        MethodChoice::Lof => {
            let scores = lof_scores(&dataset.points, &LofConfig::default())?;
            let flagged = flag_top_fraction(&scores, args.contamination)?;
            (scores, flagged)
        }
        MethodChoice::Iforest => {
            let config = IForestConfig {
                seed: args.seed,
                ..Default::default()
            };
            let scores = iforest_scores(&dataset.points, &config)?;
            let flagged = flag_top_fraction(&scores, args.contamination)?;
            (scores, flagged)
        }
    };

    let mut out = String::from("index,score,flagged\n");
    let mut is_flagged = vec![false; n];
    for &i in &flagged {
        is_flagged[i] = true;
    }
    for i in 0..n {
        out.push_str(&format!(
            "{},{:.16e},{}\n",
            i, scores[i], is_flagged[i] as u8
        ));
    }
    std::fs::write(&args.out, out)?;

    if let Some(labels) = &dataset.labels {
        let (p, r) = precision_recall(&flagged, labels)?;
        println!("precision={p:.4}");
        println!("recall={r:.4}");
    }
    Ok(())
}

/// Flat key-value bench config: one `key = value` per line, `#` comments.
/// Keys: datasets, contaminations, methods (comma-separated lists),
/// n_inliers, seeds (count or comma-separated list), eps.
fn parse_bench_config(text: &str, base: GridConfig) -> Result<GridConfig, String> {
    let mut config = base;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("line {}: expected `key = value`", i + 1))?;
        let (key, value) = (key.trim(), value.trim());
        let bad = |msg: &str| format!("line {}: {msg}", i + 1);
        match key {
            "datasets" => {
                config.datasets = value
                    .split(',')
                    .map(|s| DatasetKind::parse(s.trim()).ok_or_else(|| bad("unknown dataset")))
                    .collect::<Result<_, _>>()?;
            }
            "contaminations" => {
                config.contaminations = value
                    .split(',')
                    .map(|s| {
                        s.trim()
                            .parse::<f64>()
                            .map_err(|_| bad("bad contamination"))
                    })
                    .collect::<Result<_, _>>()?;
            }
            "methods" => {
                config.methods = value
                    .split(',')
                    .map(|s| Method::parse(s.trim()).ok_or_else(|| bad("unknown method")))
                    .collect::<Result<_, _>>()?;
            }
            "n_inliers" => {
                config.n_inliers = value.parse().map_err(|_| bad("bad n_inliers"))?;
            }
            "seeds" => {
                config.seeds = if value.contains(',') {
                    value
                        .split(',')
                        .map(|s| s.trim().parse::<u64>().map_err(|_| bad("bad seed")))
                        .collect::<Result<_, _>>()?
                } else {
                    let count: u64 = value.parse().map_err(|_| bad("bad seeds"))?;
                    (0..count).collect()
                };
            }
            "eps" => {
                config.eps = value.parse().map_err(|_| bad("bad eps"))?;
            }
            other => return Err(bad(&format!("unknown key `{other}`"))),
        }
    }
    Ok(config)
}

fn cmd_bench(args: BenchArgs) -> Result<(), Box<dyn std::error::Error>> {
    let mut config = GridConfig {
        seeds: (0..args.seeds).collect(),
        ..Default::default()
    };
    if let Some(path) = &args.config {
        let text = std::fs::read_to_string(path)?;
        config = parse_bench_config(&text, config)?;
    }
    let report = run_grid(&config);
    std::fs::create_dir_all(&args.out_dir)?;
    let md = render_report(&report, ReportFormat::Markdown)?;
    std::fs::write(
        args.out_dir.join("report.csv"),
        render_report(&report, ReportFormat::Csv)?,
    )?;
    std::fs::write(args.out_dir.join("report.md"), &md)?;
    std::fs::write(
        args.out_dir.join("report.json"),
        render_report(&report, ReportFormat::Json)?,
    )?;
    print!("{md}");
    Ok(())
}

fn cmd_plot_data(args: PlotDataArgs) -> Result<(), Box<dyn std::error::Error>> {
    let dataset = load_csv(&args.input)?;
    let results = std::fs::read_to_string(&args.results)?;
    let mut flagged = Vec::new();
    for (i, line) in results.lines().enumerate() {
        if i == 0 {
            if line != "index,score,flagged" {
                return Err(format!("bad results header at line 1: `{line}`").into());
            }
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 3 {
            return Err(format!("line {}: expected 3 fields", i + 1).into());
        }
        flagged.push(fields[2].trim() == "1");
    }
    let n = dataset.points.len();
    if flagged.len() != n {
        return Err(bsod::Error::RowCountMismatch {
            left: n,
            right: flagged.len(),
        }
        .into());
    }
    let mut out = String::from("x0,x1,true_label,flagged\n");
    for (i, row) in dataset.points.rows().enumerate() {
        let label = dataset.labels.as_ref().map(|l| l[i] as u8).unwrap_or(0);
        out.push_str(&format!(
            "{:.16e},{:.16e},{},{}\n",
            row[0],
            row.get(1).copied().unwrap_or(0.0),
            label,
            flagged[i] as u8
        ));
    }
    std::fs::write(&args.out, out)?;
    Ok(())
}
