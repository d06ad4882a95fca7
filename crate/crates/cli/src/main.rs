use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use contframe::linalg::LinearOperator;
use contframe::localization::{spectrogram, wavelet_mask};
use contframe::{frame_operator, gabor_frame, wavelet_frame, CMatrix, Symbol, WaveletGrid, WindowPreset};
use contframe_cli::{describe, run, CliError, ExperimentConfig, OutputFormat};

#[derive(Parser)]
#[command(
    name = "contframe",
    version,
    about = "Run continuous-frame experiments and export operators"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a JSON config.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Report path (overrides the config's output.path).
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<OutputFormat>,
        /// Seed (overrides the config's seed).
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        quiet: bool,
    },
    /// Print the parameter schema and the claims an experiment verifies.
    Describe { name: String },
    /// Write a matrix or grid as CSV.
    Export {
        #[arg(value_enum)]
        kind: ExportKind,
        /// Window preset name.
        #[arg(long, default_value = "gauss")]
        window: String,
        /// Signal preset for spectrograms.
        #[arg(long, default_value = "delta")]
        signal: String,
        /// Signal length N for Gabor exports.
        #[arg(long, default_value_t = 16)]
        size: usize,
        /// Scale band [lo, hi] kept by the wavelet mask.
        #[arg(long, num_args = 2, default_values_t = [0.5, 2.0])]
        band: Vec<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ExportKind {
    /// Frame operator of the Gabor system of a preset window.
    FrameOperator,
    /// |V_g f|² on Z_N × Z_N, rows indexed by time.
    Spectrogram,
    /// Scale-band indicator on the reference wavelet grid (translation × scale).
    WaveletMask,
}

fn write_or_print(path: Option<&Path>, text: &str, quiet: bool) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| CliError::io(p, e)),
        None => {
            if !quiet {
                print!("{text}");
            }
            Ok(())
        }
    }
}

fn run_command(
    config: &Path,
    out: Option<PathBuf>,
    format: Option<OutputFormat>,
    seed: Option<u64>,
    quiet: bool,
) -> Result<bool, CliError> {
    let text = fs::read_to_string(config).map_err(|e| CliError::io(config, e))?;
    let mut cfg = ExperimentConfig::from_json(&text)?;
    if seed.is_some() {
        cfg.seed = seed;
    }
    if out.is_some() {
        cfg.output.path = out;
    }
    if let Some(f) = format {
        cfg.output.format = f;
    }
    let report = run(&cfg)?;
    let body = match cfg.output.format {
        OutputFormat::Json => report.to_json_string(),
        OutputFormat::Csv => report.to_csv(),
    };
    write_or_print(cfg.output.path.as_deref(), &body, quiet)?;
    if !quiet {
        for c in report.failures() {
            eprintln!(
                "FAIL {}: computed {:e}, expected {:e} (tol {:e})",
                c.name, c.computed, c.expected, c.tolerance
            );
        }
        let passed = report.checks.iter().filter(|c| c.pass).count();
        eprintln!("{}: {passed}/{} checks passed", report.experiment, report.checks.len());
    }
    Ok(report.pass())
}

fn export(kind: ExportKind, window: &str, signal: &str, size: usize, band: &[f64]) -> Result<String, CliError> {
    let g = window.parse::<WindowPreset>()?;
    let matrix: CMatrix = match kind {
        ExportKind::FrameOperator => frame_operator(gabor_frame(&g.discrete(size))?.frame()).into(),
        ExportKind::Spectrogram => {
            let f = signal.parse::<WindowPreset>()?.discrete(size);
            spectrogram(&f, &g.discrete(size))?
        }
        ExportKind::WaveletMask => {
            let grid = WaveletGrid::reference();
            let space = wavelet_frame(&WindowPreset::MexicanHat, &grid)?.space()?;
            let (lo, hi) = (band[0], band[1]);
            let m = Symbol::from_fn(space, |x| {
                let a = x[1].abs();
                if (lo..=hi).contains(&a) { 1.0 } else { 0.0 }.into()
            })?;
            wavelet_mask(&m, &grid)?
        }
    };
    Ok(LinearOperator::new(matrix)?.to_csv())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run {
            config,
            out,
            format,
            seed,
            quiet,
        } => run_command(&config, out, format, seed, quiet),
        Command::Describe { name } => describe(&name).map(|text| {
            println!("{text}");
            true
        }),
        Command::Export {
            kind,
            window,
            signal,
            size,
            band,
            out,
        } => {
            export(kind, &window, &signal, size, &band).and_then(|csv| write_or_print(out.as_deref(), &csv, false).map(|_| true))
        }
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
