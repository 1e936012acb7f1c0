use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use wbenum::acm::build_acm;
use wbenum::export;
use wbenum::harness::{figure_scenarios, run_sweep_with_threads, sample_results};
use wbenum::pipeline::{run, Strategy};
use wbenum::spectral::{correlation_from_periodogram, wideband_periodogram};
use wbenum::synth::synthesize;
use wbenum::{ArrayGeometry, Config, CriterionKind, Error, Scenario64, Sweep64, UGrid};

#[derive(Parser)]
#[command(name = "wbenum", version, about = "Wideband source enumeration on sparse linear arrays")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Pretty,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Print the difference coarray of an array.
    Coarray {
        /// Preset (mra6, nested:N1,N2, coprime:A,B) or sensor positions such as 0,1,4,6.
        #[arg(long)]
        geometry: String,
        #[arg(long, value_enum, default_value = "pretty")]
        format: Format,
    },
    /// Run one enumeration on a scenario file and print the result as JSON.
    Enumerate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        strategy: Option<Strategy>,
        #[arg(long)]
        criterion: Option<CriterionKind>,
        /// Write the criterion curve here as CSV.
        #[arg(long)]
        curve_csv: Option<PathBuf>,
        /// Write periodogram, correlation and ACM CSVs of the averaged-periodogram chain here.
        #[arg(long)]
        export_dir: Option<PathBuf>,
    },
    /// Monte Carlo detection sweep from a preset or a scenario file.
    Sweep {
        #[arg(long, conflicts_with = "config", required_unless_present = "config")]
        preset: Option<String>,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Worker threads; defaults to the number of CPUs.
        #[arg(long)]
        threads: Option<usize>,
    },
}

#[derive(Debug)]
enum Failure {
    Lib(Error),
    Output(io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Output(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_config() { 2 } else { 3 })
        }
        Err(Failure::Output(e)) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn dispatch(command: Command) -> Result<(), Failure> {
    match command {
        Command::Coarray { geometry, format } => coarray(&geometry, format),
        Command::Enumerate {
            config,
            seed,
            strategy,
            criterion,
            curve_csv,
            export_dir,
        } => enumerate(&config, seed, strategy, criterion, curve_csv, export_dir),
        Command::Sweep {
            preset,
            config,
            trials,
            seed,
            out,
            threads,
        } => sweep(preset, config, trials, seed, &out, threads),
    }
}

fn create(path: &Path) -> Result<BufWriter<File>, Failure> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    Ok(BufWriter::new(File::create(path)?))
}

fn coarray(spec: &str, format: Format) -> Result<(), Failure> {
    let geometry: ArrayGeometry = spec.parse()?;
    let coarray = geometry.coarray();
    let stdout = io::stdout();
    match format {
        Format::Csv => export::write_coarray(stdout.lock(), &coarray)?,
        Format::Pretty => {
            let mut out = stdout.lock();
            let p = coarray.contiguous_p() as i64;
            writeln!(out, "positions: {geometry}")?;
            writeln!(out, "sensors: {}", geometry.sensor_count())?;
            writeln!(out, "contiguous lags: [{}, {}]", 1 - p, p - 1)?;
            writeln!(out, "P: {p}")?;
            writeln!(out, "{:>6} {:>6}", "lag", "weight")?;
            for (k, w) in coarray.weights() {
                let mark = if k.abs() < p { "" } else { "  (outside contiguous segment)" };
                writeln!(out, "{k:>6} {w:>6}{mark}")?;
            }
        }
    }
    Ok(())
}

fn enumerate(
    path: &Path,
    seed: Option<u64>,
    strategy: Option<Strategy>,
    criterion: Option<CriterionKind>,
    curve_csv: Option<PathBuf>,
    export_dir: Option<PathBuf>,
) -> Result<(), Failure> {
    let config = Config::load(path)?;
    let scenario: Scenario64 = config.scenario()?;
    let options = config.options();
    let seed = seed.unwrap_or(config.processing.seed);
    let strategy = strategy.unwrap_or(config.processing.strategy);
    let criterion = criterion.unwrap_or(config.processing.criterion);

    let result = run(&scenario, strategy, criterion, seed, &options)?;
    let json = serde_json::to_string_pretty(&result).map_err(io::Error::other)?;
    println!("{json}");

    if let Some(path) = curve_csv {
        export::write_curve(create(&path)?, &result.curve)?;
    }
    if let Some(dir) = export_dir {
        let x = synthesize(&scenario, seed)?;
        let grid = UGrid::new(options.grid_size)?;
        let periodogram = wideband_periodogram(&x, &grid)?;
        let r = correlation_from_periodogram(&periodogram, &scenario.array.geometry.coarray())?;
        let acm = build_acm(&r, options.ap_acm);
        export::write_periodogram(create(&dir.join("periodogram.csv"))?, &periodogram)?;
        export::write_correlation(create(&dir.join("correlation.csv"))?, &r)?;
        export::write_acm(create(&dir.join("acm.csv"))?, &acm)?;
        export::write_curve(create(&dir.join("curve.csv"))?, &result.curve)?;
    }
    Ok(())
}

fn sweep(
    preset: Option<String>,
    config: Option<PathBuf>,
    trials: Option<usize>,
    seed: Option<u64>,
    out: &Path,
    threads: Option<usize>,
) -> Result<(), Failure> {
    let mut sweeps: Vec<Sweep64> = match (preset, config) {
        (Some(name), _) => figure_scenarios(&name)?,
        (None, Some(path)) => {
            let config = Config::load(&path)?;
            let sweep = config
                .sweep()?
                .ok_or_else(|| Error::Config(format!("{} has no [sweep] section", path.display())))?;
            vec![sweep]
        }
        (None, None) => unreachable!("clap requires --preset or --config"),
    };
    for s in &mut sweeps {
        if let Some(t) = trials {
            s.trials = t;
        }
        if let Some(seed) = seed {
            s.master_seed = seed;
        }
    }
    let threads = threads.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    if threads == 0 {
        return Err(Error::Config("--threads must be at least 1".into()).into());
    }
    fs::create_dir_all(out)?;

    for s in &sweeps {
        let stats = run_sweep_with_threads(s, threads)?;
        for m in &stats.methods {
            export::write_detection(create(&out.join(format!("{}_{}.csv", s.name, m.method.label())))?, m)?;
        }
        let mut svg = create(&out.join(format!("{}.svg", s.name)))?;
        svg.write_all(export::detection_svg(&stats).as_bytes())?;
        svg.flush()?;

        if s.grid.len() <= 2 {
            for (value, results) in sample_results(s)? {
                for r in results {
                    let name = format!("{}_{}_{}_{}_curve.csv", s.name, value, r.strategy, r.criterion.name());
                    export::write_curve(create(&out.join(name))?, &r.curve)?;
                }
            }
        }

        println!("{} ({} = {:?}, {} trials, D = {})", s.name, s.parameter, s.grid, s.trials, stats.true_count);
        for m in &stats.methods {
            let ps: Vec<String> = m.points.iter().map(|p| format!("{:.3}", p.p_detect)).collect();
            println!("  {:<12} {}", m.method.to_string(), ps.join(" "));
        }
    }
    Ok(())
}
