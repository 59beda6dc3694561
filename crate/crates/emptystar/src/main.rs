//! Command-line front end: one-shot analysis of point-set files, experiment
//! sweeps, constant tables, Monte-Carlo integrals, SVG star renderings, and
//! point-set generation.
//!
//! Exit codes: 0 success, 2 validation error, 1 internal error. All outputs
//! are pure functions of flags + seed at the byte level; existing output
//! files are never overwritten without --force.

use clap::{Args, Parser, Subcommand};
use emptystar::bodies::ConvexBody;
use emptystar::enumerate::{count_empty_simplices, deg_k_max, star};
use emptystar::experiments::{poisson_gof, run_sweep, ExperimentConfig, Quantity};
use emptystar::geom::io;
use emptystar::integrals;
use emptystar::svg::render_star;
use emptystar::{Error, Result};
use serde_json::json;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "emptystar", version, about = "Empty-simplex statistics and experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze a point-set file: N, degrees, maximal star witness.
    Analyze(AnalyzeArgs),
    /// Run a seeded Monte-Carlo sweep over n; writes CSV + summary JSON.
    Sweep(SweepArgs),
    /// Print the closed-form constant table for one dimension.
    Constants(ConstantsArgs),
    /// Monte-Carlo section-integral of a body.
    Integral(IntegralArgs),
    /// Render the maximal star of a planar point-set file as SVG.
    StarSvg(StarSvgArgs),
    /// Generate a uniform sample from a body into a point-set file.
    Gen(GenArgs),
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Point-set file (format: "d n" header then coordinate rows).
    #[arg(long)]
    input: PathBuf,
    /// Tuple size for per-tuple degrees and the witness (1..=d).
    #[arg(long)]
    k: Option<usize>,
}

#[derive(Args)]
struct SweepArgs {
    /// One of: empty-count, max-degree, typical-degree, deg1-profile,
    /// n-gamma, poisson-gof.
    #[arg(long)]
    quantity: String,
    /// Body spec: disk, square, ball3, cube3, ellipse:a,b, polygon:path.
    #[arg(long)]
    body: String,
    /// Dimension; must match the body spec.
    #[arg(long)]
    dim: usize,
    /// Comma-separated strictly increasing n values.
    #[arg(long, value_delimiter = ',')]
    n: Vec<usize>,
    /// Trials per n.
    #[arg(long, default_value_t = 100)]
    trials: usize,
    /// Tuple size for max-degree / typical-degree.
    #[arg(long)]
    k: Option<usize>,
    /// Close-base parameter for n-gamma / poisson-gof.
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output prefix; writes <out>.csv and <out>.json.
    #[arg(long)]
    out: PathBuf,
    /// Overwrite existing output files.
    #[arg(long)]
    force: bool,
}

#[derive(Args)]
struct ConstantsArgs {
    #[arg(long)]
    dim: usize,
}

#[derive(Args)]
struct IntegralArgs {
    #[arg(long)]
    body: String,
    /// Moment exponent m in the section integral.
    #[arg(long)]
    m: usize,
    #[arg(long, default_value_t = 1_000_000)]
    samples: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct StarSvgArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    force: bool,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    body: String,
    #[arg(long)]
    dim: usize,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    force: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Ok(threads) = std::env::var("EMPTYSTAR_THREADS") {
        if let Ok(t) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
        }
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_validation() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Analyze(a) => analyze(a),
        Command::Sweep(a) => sweep(a),
        Command::Constants(a) => constants(a),
        Command::Integral(a) => integral(a),
        Command::StarSvg(a) => star_svg(a),
        Command::Gen(a) => gen(a),
    }
}

fn guard_overwrite(path: &Path, force: bool) -> Result<()> {
    if path.exists() && !force {
        return Err(Error::WouldOverwrite(path.display().to_string()));
    }
    Ok(())
}

fn body_for(spec: &str, dim: usize) -> Result<ConvexBody> {
    let body = ConvexBody::parse_spec(spec)?;
    if body.dim() != dim {
        return Err(Error::invalid(format!(
            "body '{spec}' has dimension {}, but --dim {dim} was given",
            body.dim()
        )));
    }
    Ok(body)
}

fn analyze(a: AnalyzeArgs) -> Result<()> {
    let ps = io::load_point_set(&a.input)?;
    let report = count_empty_simplices(&ps, a.k)?;
    let mut v = serde_json::to_value(&report).expect("json");
    v["schema_version"] = json!("1");
    if let Some((witness, _)) = &report.witness_max {
        let spikes = star(witness, &ps)?;
        v["witness_star"] = json!(spikes
            .iter()
            .map(|s| s.indices().to_vec())
            .collect::<Vec<_>>());
    }
    println!("{}", serde_json::to_string_pretty(&v).expect("json"));
    Ok(())
}

fn sweep(a: SweepArgs) -> Result<()> {
    eprintln!("seed: {}", a.seed);
    let quantity = Quantity::parse(&a.quantity, a.k)?;
    let config = ExperimentConfig {
        quantity,
        body: body_for(&a.body, a.dim)?,
        n_values: a.n.clone(),
        trials: a.trials,
        gamma: a.gamma,
        seed: a.seed,
    };
    let csv_path = a.out.with_extension("csv");
    let json_path = a.out.with_extension("json");
    guard_overwrite(&csv_path, a.force)?;
    guard_overwrite(&json_path, a.force)?;
    let output = run_sweep(&config)?;
    std::fs::write(&csv_path, output.to_csv())?;
    let mut summary = output.to_summary_json();
    if quantity == Quantity::PoissonGof {
        let rows = poisson_gof(&config)?;
        let mut v: serde_json::Value = serde_json::from_str(&summary).expect("json");
        v["poisson_gof"] = serde_json::to_value(&rows).expect("json");
        summary = serde_json::to_string_pretty(&v).expect("json");
    }
    std::fs::write(&json_path, &summary)?;
    println!("{summary}");
    Ok(())
}

fn constants(a: ConstantsArgs) -> Result<()> {
    let table = integrals::constant_table(a.dim)?;
    let mut v = serde_json::to_value(&table).expect("json");
    v["schema_version"] = json!("1");
    println!("{}", serde_json::to_string_pretty(&v).expect("json"));
    Ok(())
}

fn integral(a: IntegralArgs) -> Result<()> {
    eprintln!("seed: {}", a.seed);
    let body = ConvexBody::parse_spec(&a.body)?;
    let est = integrals::section_integral(&body, a.m, a.samples, a.seed)?;
    let closed_form = match &body {
        ConvexBody::Ball { dim, radius } => {
            Some(integrals::ball_section_moment_closed(*dim, *radius, a.m)?)
        }
        // The classical inequality is an equality for every planar body at
        // m = d+1 = 3.
        _ if body.dim() == 2 && a.m == 3 => Some(
            integrals::constant_table(2)?.section_ineq_c * body.volume().powi(2),
        ),
        _ => None,
    };
    let v = json!({
        "schema_version": "1",
        "quantity": format!("section_integral(m={})", a.m),
        "d": body.dim(),
        "body": body.to_string(),
        "samples": est.samples,
        "seed": est.seed,
        "mean": est.mean,
        "stderr": est.stderr,
        "ci95": est.ci95,
        "closed_form": closed_form,
    });
    println!("{}", serde_json::to_string_pretty(&v).expect("json"));
    Ok(())
}

fn star_svg(a: StarSvgArgs) -> Result<()> {
    guard_overwrite(&a.out, a.force)?;
    let ps = io::load_point_set(&a.input)?;
    if ps.dim() != 2 {
        return Err(Error::invalid("star-svg requires a planar point set"));
    }
    let (degree, witness) = deg_k_max(&ps, a.k)?;
    let spikes = star(&witness, &ps)?;
    let svg = render_star(&ps, &witness, &spikes, degree)?;
    std::fs::write(&a.out, svg)?;
    eprintln!(
        "wrote {} (k={}, degree={degree}, witness {:?})",
        a.out.display(),
        a.k,
        witness.indices()
    );
    Ok(())
}

fn gen(a: GenArgs) -> Result<()> {
    eprintln!("seed: {}", a.seed);
    if a.n == 0 {
        return Err(Error::invalid("--n must be >= 1"));
    }
    guard_overwrite(&a.out, a.force)?;
    let body = body_for(&a.body, a.dim)?;
    let mut rng = emptystar::rng::RngStream::new(a.seed, 0);
    let ps = body.sample_uniform(&mut rng, a.n)?;
    io::save_point_set(&ps, &a.out)?;
    Ok(())
}
