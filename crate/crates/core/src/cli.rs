//! Command-line front end.
//!
//! Precedence is flag > config file > built-in defaults. Exit codes: 0 on
//! success, 2 when the configuration or a flag value is invalid, 1 on any
//! other failure.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::experiments::{
    fmt_sig10, run_sweep, to_csv, Configuration, CsvTable, ExperimentKind, SweepResult, SweepSpec,
};
use crate::plot::{render_plots, render_table};
use crate::topology::SimConfig;

pub const OUT_DIR_ENV: &str = "RISCOMP_OUT";

#[derive(Debug, Parser)]
#[command(
    name = "riscomp",
    version,
    about = "Monte Carlo simulator for RIS-assisted CoMP-NOMA downlinks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Energy efficiency vs. number of cooperating BSs.
    #[command(name = "sweep-j")]
    SweepJ(RunArgs),
    /// Energy efficiency vs. RIS elements per surface.
    #[command(name = "sweep-k")]
    SweepK(RunArgs),
    /// Outage sum rate vs. transmit power, with the OMA baseline.
    #[command(name = "sweep-pt")]
    SweepPt(RunArgs),
    /// Energy efficiency over transmit power and rate threshold.
    Contour(RunArgs),
    /// Outage sum rate vs. the fraction of cancellation elements.
    #[command(name = "split-ratio")]
    SplitRatio(RunArgs),
    /// A single operating point.
    Point(RunArgs),
    /// Resolve and check the configuration, then print it.
    Validate(ValidateArgs),
    /// Re-render the plot of an existing sweep CSV.
    Replot(ReplotArgs),
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// TOML file overriding the default parameters.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output directory [default: $RISCOMP_OUT or ./results].
    #[arg(long, env = OUT_DIR_ENV, default_value = "results")]
    pub out: PathBuf,
    /// Master seed of the fading streams.
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Monte Carlo trials per grid point.
    #[arg(long, default_value_t = 10_000)]
    pub trials: u64,
    /// Worker threads for the trial pool [default: all cores].
    #[arg(long)]
    pub workers: Option<usize>,
    #[arg(long, overrides_with = "no_plot")]
    pub plot: bool,
    /// Write the CSV only.
    #[arg(long = "no-plot", overrides_with = "plot")]
    pub no_plot: bool,
    /// Cooperating BSs; a list replaces the J grid where J is an axis.
    #[arg(long, value_delimiter = ',')]
    pub coop: Vec<usize>,
    /// RIS elements per surface.
    #[arg(long, value_delimiter = ',')]
    pub elements: Vec<usize>,
    /// Transmit power in dBm.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub pt: Vec<f64>,
    /// Target rate of both users in bps/Hz.
    #[arg(long, value_delimiter = ',')]
    pub rth: Vec<f64>,
    /// Fraction of cancellation elements on every surface.
    #[arg(long, value_delimiter = ',')]
    pub ratio: Vec<f64>,
    /// Curves to compute: none, random, eo, ec, no-comp, oma.
    #[arg(long, value_delimiter = ',')]
    pub scheme: Vec<String>,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReplotArgs {
    /// Sweep CSV written by one of the run subcommands.
    pub csv: PathBuf,
    /// Image path [default: the CSV path with an .svg extension].
    #[arg(long)]
    pub output: Option<PathBuf>,
}

/// Provenance record written next to every CSV.
#[derive(Debug, Serialize)]
pub struct RunManifest<'a> {
    pub subcommand: &'a str,
    pub config_path: Option<&'a Path>,
    pub out_dir: &'a Path,
    pub seed: u64,
    pub trials: u64,
    pub workers: usize,
    pub plot: bool,
    pub config_hash: &'a str,
    pub code_version: &'a str,
    pub config: &'a SimConfig,
    pub spec: &'a SweepSpec,
    pub files: Vec<String>,
}

/// Parses `argv` and runs it; the return value is the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match dispatch(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_config() {
                2
            } else {
                1
            }
        }
    }
}

fn dispatch(command: Command) -> Result<()> {
    let (kind, args) = match command {
        Command::Validate(a) => return validate(a.config.as_deref()),
        Command::Replot(a) => return replot(&a),
        Command::SweepJ(a) => (ExperimentKind::Coop, a),
        Command::SweepK(a) => (ExperimentKind::Elements, a),
        Command::SweepPt(a) => (ExperimentKind::Power, a),
        Command::Contour(a) => (ExperimentKind::Contour, a),
        Command::SplitRatio(a) => (ExperimentKind::Split, a),
        Command::Point(a) => (ExperimentKind::Point, a),
    };
    run_experiment(kind, &args)
}

fn load_config(path: Option<&Path>) -> Result<SimConfig> {
    match path {
        None => Ok(SimConfig::default()),
        Some(p) => {
            let text = fs::read_to_string(p)
                .map_err(|e| Error::config("--config", format!("cannot read {}: {e}", p.display())))?;
            SimConfig::from_toml_str(&text)
        }
    }
}

fn validate(path: Option<&Path>) -> Result<()> {
    let config = load_config(path)?;
    let topology = config.build()?;
    print!("{}", topology.describe());
    Ok(())
}

fn replot(args: &ReplotArgs) -> Result<()> {
    let table = CsvTable::parse(&fs::read_to_string(&args.csv)?)?;
    let output = args.output.clone().unwrap_or_else(|| args.csv.with_extension("svg"));
    render_table(&table, &output)?;
    println!("wrote {}", output.display());
    Ok(())
}

fn single<T: Copy>(flag: &str, values: &[T]) -> Result<Option<T>> {
    match values {
        [] => Ok(None),
        [v] => Ok(Some(*v)),
        _ => Err(Error::config(flag, "takes a single value for this subcommand")),
    }
}

/// Applies flag overrides to the config and the sweep grids. A flag naming one
/// of the experiment's axes replaces that grid; any other flag must carry a
/// single value and sets the base parameter.
fn resolve(kind: ExperimentKind, args: &RunArgs, config: &mut SimConfig) -> Result<SweepSpec> {
    if args.trials == 0 {
        return Err(Error::config("--trials", "must be positive"));
    }
    if args.workers == Some(0) {
        return Err(Error::config("--workers", "must be positive"));
    }
    if let Some(r) = args.ratio.iter().find(|r| !(0.0..=1.0).contains(*r)) {
        return Err(Error::config("--ratio", format!("{r} is outside [0, 1]")));
    }
    if let Some(r) = args.rth.iter().find(|r| !(**r > 0.0)) {
        return Err(Error::config("--rth", format!("{r} is not a positive rate")));
    }
    let mut spec = SweepSpec::defaults(kind, args.trials, args.seed);
    let axes = kind.axis_names();
    let is_axis = |name: &str| kind != ExperimentKind::Point && axes.contains(&name);

    if is_axis("coop") && !args.coop.is_empty() {
        spec.coop = args.coop.clone();
    } else if let Some(j) = single("--coop", &args.coop)? {
        config.coop = j;
    }
    if is_axis("elements") && !args.elements.is_empty() {
        spec.elements = args.elements.clone();
    } else if let Some(k) = single("--elements", &args.elements)? {
        config.ris_elements = k;
    } else if kind == ExperimentKind::Split {
        // Surface size of the reference split-ratio study.
        config.ris_elements = 72;
    }
    if is_axis("pt_dbm") && !args.pt.is_empty() {
        spec.pt_dbm = args.pt.clone();
    } else if let Some(p) = single("--pt", &args.pt)? {
        config.pt_dbm = p;
    }
    if is_axis("rate_threshold") && !args.rth.is_empty() {
        spec.rate_threshold = args.rth.clone();
    } else if let Some(r) = single("--rth", &args.rth)? {
        config.rate_center = r;
        config.rate_edge = r;
    }
    if is_axis("split_ratio") && !args.ratio.is_empty() {
        spec.split_ratio = args.ratio.clone();
    } else if !args.ratio.is_empty() {
        return Err(Error::config("--ratio", "only applies to split-ratio"));
    }
    if !args.scheme.is_empty() {
        spec.configurations = args
            .scheme
            .iter()
            .map(|s| {
                s.parse::<Configuration>()
                    .map_err(|_| Error::config("--scheme", format!("unknown scheme `{s}`")))
            })
            .collect::<Result<_>>()?;
    }
    for (flag, grid) in [("--coop", &spec.coop), ("--elements", &spec.elements)] {
        if grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::config(flag, "grid must be strictly increasing"));
        }
    }
    for (flag, grid) in [
        ("--pt", &spec.pt_dbm),
        ("--rth", &spec.rate_threshold),
        ("--ratio", &spec.split_ratio),
    ] {
        if grid.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::config(flag, "grid must be strictly increasing"));
        }
    }
    if kind == ExperimentKind::Coop || kind == ExperimentKind::Split {
        if let Some(&j) = spec.coop.iter().find(|&&j| j == 0 || j > config.cells) {
            return Err(Error::config("--coop", format!("{j} is outside 1..={}", config.cells)));
        }
    }
    Ok(spec)
}

fn run_experiment(kind: ExperimentKind, args: &RunArgs) -> Result<()> {
    let mut config = load_config(args.config.as_deref())?;
    let spec = resolve(kind, args, &mut config)?;
    let template = config.build()?;
    let plot = !args.no_plot;

    fs::create_dir_all(&args.out)
        .map_err(|e| Error::config("--out", format!("cannot create {}: {e}", args.out.display())))?;

    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = args.workers {
        pool = pool.num_threads(n);
    }
    let pool = pool.build().map_err(|e| Error::InvalidArgument(e.to_string()))?;
    let workers = pool.current_num_threads();
    let result = pool.install(|| run_sweep(&template, &spec))?;

    for line in summary_lines(&result) {
        println!("{line}");
    }

    let mut files = Vec::new();
    let csv_path = args.out.join(format!("{}.csv", kind.id()));
    fs::write(&csv_path, to_csv(&result)?)?;
    files.push(file_name(&csv_path));
    if plot {
        files.push(file_name(&render_plots(&result, &args.out)?));
    }
    let manifest = RunManifest {
        subcommand: kind.id(),
        config_path: args.config.as_deref(),
        out_dir: &args.out,
        seed: args.seed,
        trials: args.trials,
        workers,
        plot,
        config_hash: &result.provenance.config_hash,
        code_version: &result.provenance.code_version,
        config: &config,
        spec: &spec,
        files,
    };
    fs::write(
        args.out.join("manifest.json"),
        serde_json::to_string_pretty(&manifest)? + "\n",
    )?;
    eprintln!("wrote {}", csv_path.display());
    Ok(())
}

fn file_name(p: &Path) -> String {
    p.file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}

pub fn summary_lines(result: &SweepResult) -> Vec<String> {
    let names = result.axis_names();
    result
        .records
        .iter()
        .map(|r| {
            let axes: Vec<String> = names.iter().zip(&r.axes).map(|(n, v)| format!("{n}={v}")).collect();
            format!(
                "{} {} scheme={} p_out_edge={} outage_sum_rate={} ee={} ({:.2}s)",
                result.kind.id(),
                axes.join(" "),
                r.scheme,
                fmt_sig10(r.estimates.edge.p_out),
                fmt_sig10(r.outage_sum_rate),
                fmt_sig10(r.energy_efficiency),
                r.wall_time.as_secs_f64()
            )
        })
        .collect()
}
