//! `sign-spectra` command-line tool.
//!
//! Exit codes: 0 success, 1 verification failed, 2 usage error,
//! 3 numerical error, 4 I/O error.

use std::fmt;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use sign_spectra::io::{density_to_json, embedding_to_json, json_string, render_cloud, Format, RunManifest};
use sign_spectra::{
    density_report, enumerate_sigma, enumerate_sigma_accumulated, finite_eigenvalues, gauge_normalize_finite,
    gauge_normalize_periodic, periodic_spectrum, verify_embedding, Cloud64, EnumerationOptions, Error,
    PeriodicOperatorSpec, SignVector,
};

const DEFAULT_ROOT_TOL: f64 = 1e-10;
const DEFAULT_EMBED_TOL: f64 = 1e-8;

#[derive(Parser, Debug)]
#[command(name = "sign-spectra", version, about = "Spectra of tridiagonal sign matrices and periodic sign operators")]
struct Cli {
    /// Tolerance: root-finder residual bound, or the verification bound for `embed`.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Largest n accepted by exhaustive enumeration.
    #[arg(long, global = true, default_value_t = sign_spectra::finite::DEFAULT_ENUMERATION_CAP)]
    cap: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Gauge-normalize a sign pattern so the superdiagonal is all ones.
    Normalize {
        #[arg(long, allow_hyphen_values = true)]
        k: String,
        /// Superdiagonal signs (default: all ones).
        #[arg(long, allow_hyphen_values = true)]
        l: Option<String>,
        /// Treat the patterns as one period of a bi-infinite operator.
        #[arg(long)]
        periodic: bool,
    },
    /// Eigenvalues of one finite matrix, or sampled spectrum of one periodic operator.
    Spectrum {
        #[arg(long, value_enum, default_value_t = Mode::Finite)]
        mode: Mode,
        #[arg(long, allow_hyphen_values = true)]
        k: String,
        #[arg(long, allow_hyphen_values = true)]
        l: Option<String>,
        /// Number of phase samples on [0, pi] (periodic mode).
        #[arg(long, default_value_t = 257)]
        samples: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Union of the spectra of all 2^n sign matrices of size n + 1.
    Enumerate {
        #[arg(long)]
        n: usize,
        /// Include all sizes up to n.
        #[arg(long)]
        accumulate: bool,
        /// Keep one point per grid cell of side --dedup-step.
        #[arg(long)]
        dedup: bool,
        #[arg(long, default_value_t = 1e-9)]
        dedup_step: f64,
        /// Solve one matrix per reversal pair.
        #[arg(long)]
        canonical: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Embed symbol eigenvalues at roots of unity into a finite sign matrix and verify.
    Embed {
        #[arg(long, allow_hyphen_values = true)]
        k: String,
        #[arg(long)]
        n: usize,
        /// Also compute eigenvectors with vanishing first entry.
        #[arg(long)]
        witness: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Directed Hausdorff distances from periodic spectra and the unit disk to finite spectra.
    Density {
        #[arg(long, default_value_t = 10)]
        max_n: usize,
        #[arg(long, default_value_t = 4)]
        max_m: usize,
        #[arg(long, default_value_t = 65)]
        samples: usize,
        #[arg(long, default_value_t = 0.25)]
        disk_step: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Finite,
    Periodic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
    Svg,
}

#[derive(Args, Debug)]
struct OutputArgs {
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format (default: from the file extension, else csv).
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
}

impl OutputArgs {
    fn format(&self) -> Format {
        match self.format {
            Some(FormatArg::Csv) => Format::Csv,
            Some(FormatArg::Json) => Format::Json,
            Some(FormatArg::Svg) => Format::Svg,
            None => self
                .out
                .as_ref()
                .and_then(|p| p.extension())
                .and_then(|e| e.to_str())
                .and_then(|e| e.parse().ok())
                .unwrap_or(Format::Csv),
        }
    }
}

enum Failure {
    Verification(String),
    Usage(String),
    Numerical(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Verification(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Numerical(_) => 3,
            Failure::Io(_) => 4,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Verification(m) => write!(f, "verification failed: {m}"),
            Failure::Usage(m) => write!(f, "{m}"),
            Failure::Numerical(m) => write!(f, "numerical error: {m}"),
            Failure::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. }
            | Error::Dimension { .. }
            | Error::Argument(_)
            | Error::OracleTooLarge { .. }
            | Error::CapExceeded { .. }
            | Error::OddParity => Failure::Usage(e.to_string()),
            Error::Convergence { .. } | Error::NumericalConsistency { .. } | Error::WitnessDegenerate { .. } => {
                Failure::Numerical(e.to_string())
            }
        }
    }
}

type Outcome = Result<(), Failure>;

fn parse_signs(flag: &str, text: &str) -> Result<SignVector, Failure> {
    text.parse()
        .map_err(|e: Error| Failure::Usage(format!("--{flag}: {e}")))
}

fn check_tol(tol: f64) -> Result<f64, Failure> {
    if tol.is_finite() && tol > 0.0 {
        Ok(tol)
    } else {
        Err(Failure::Usage(format!("--tol must be a positive number, got {tol}")))
    }
}

/// Writes `text` to `out` (recording it in a manifest next to it) or stdout.
fn emit(out: Option<&Path>, text: &str, manifest: &mut RunManifest, started: Instant) -> Outcome {
    match out {
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| Failure::Io(e.to_string()))
        }
        Some(path) => {
            manifest
                .write_output(path, text.as_bytes())
                .map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
            manifest.wall_time_secs = started.elapsed().as_secs_f64();
            let mpath = RunManifest::path_for(path);
            std::fs::write(&mpath, json_string(&manifest.to_json()))
                .map_err(|e| Failure::Io(format!("{}: {e}", mpath.display())))
        }
    }
}

fn normalize(k: &str, l: Option<&str>, periodic: bool) -> Outcome {
    let k = parse_signs("k", k)?;
    let l = match l {
        Some(l) => parse_signs("l", l)?,
        None => SignVector::ones(k.len()).expect("nonempty"),
    };
    if periodic {
        let spec = PeriodicOperatorSpec::new(k, l)?;
        let out = gauge_normalize_periodic(&spec);
        println!("{}", out.k());
        if out.period() != spec.period() {
            println!("period doubled: {} -> {}", spec.period(), out.period());
        }
    } else {
        println!("{}", gauge_normalize_finite(&k, &l)?);
    }
    Ok(())
}

fn spectrum(cli: &Cli, mode: Mode, k: &str, l: Option<&str>, samples: usize, output: &OutputArgs) -> Outcome {
    let started = Instant::now();
    let tol = check_tol(cli.tol.unwrap_or(DEFAULT_ROOT_TOL))?;
    let k_in = parse_signs("k", k)?;
    let l_in = l.map(|l| parse_signs("l", l)).transpose()?;
    let (k_norm, mut cloud): (SignVector, Cloud64) = match mode {
        Mode::Finite => {
            let k = match &l_in {
                Some(l) => gauge_normalize_finite(&k_in, l)?,
                None => k_in.clone(),
            };
            let c = finite_eigenvalues(&k, tol)?;
            (k, c)
        }
        Mode::Periodic => {
            let k = match &l_in {
                Some(l) => gauge_normalize_periodic(&PeriodicOperatorSpec::new(k_in.clone(), l.clone())?).k().clone(),
                None => k_in.clone(),
            };
            let c = periodic_spectrum(&k, samples, tol)?;
            (k, c)
        }
    };
    cloud.sort();
    let mode_name = match mode {
        Mode::Finite => "finite",
        Mode::Periodic => "periodic",
    };
    let mut params = json!({
        "mode": mode_name,
        "k": k_in.to_string(),
        "k_normalized": k_norm.to_string(),
        "tol": tol,
    });
    if let Some(l) = &l_in {
        params["l"] = json!(l.to_string());
    }
    if mode == Mode::Periodic {
        params["samples"] = json!(samples);
    }
    let text = render_cloud(&cloud, output.format(), params.clone());
    let mut manifest = RunManifest::new("spectrum", params);
    emit(output.out.as_deref(), &text, &mut manifest, started)
}

fn enumerate(cli: &Cli, n: usize, accumulate: bool, dedup: Option<f64>, canonical: bool, output: &OutputArgs) -> Outcome {
    let started = Instant::now();
    let tol = check_tol(cli.tol.unwrap_or(DEFAULT_ROOT_TOL))?;
    let opts = EnumerationOptions { cap: cli.cap, canonical };
    let mut cloud: Cloud64 = if accumulate {
        enumerate_sigma_accumulated(n, tol, opts)?
    } else {
        enumerate_sigma(n, tol, opts)?
    };
    if let Some(step) = dedup {
        if !(step > 0.0) {
            return Err(Failure::Usage("--dedup-step must be positive".into()));
        }
        cloud.grid_dedup(step);
    }
    let elapsed = started.elapsed().as_secs_f64();
    eprintln!("{} points in {elapsed:.3}s", cloud.len());
    let mut params = json!({
        "n": n,
        "accumulate": accumulate,
        "canonical": canonical,
        "cap": cli.cap,
        "tol": tol,
    });
    if let Some(step) = dedup {
        params["dedup_step"] = json!(step);
    }
    let text = render_cloud(&cloud, output.format(), params.clone());
    let mut manifest = RunManifest::new("enumerate", params);
    emit(output.out.as_deref(), &text, &mut manifest, started)
}

fn embed(cli: &Cli, k: &str, n: usize, witness: bool, out: Option<&Path>) -> Outcome {
    let started = Instant::now();
    let tol = check_tol(cli.tol.unwrap_or(DEFAULT_EMBED_TOL))?;
    let k = parse_signs("k", k)?;
    if n < 3 {
        return Err(Failure::Usage(format!("--n must be at least 3, got {n}")));
    }
    let result = verify_embedding::<f64>(&k, n, tol, witness)?;
    let text = json_string(&embedding_to_json(&result));
    let params = json!({ "k": k.to_string(), "n": n, "tol": tol, "witness": witness });
    let mut manifest = RunManifest::new("embed", params);
    emit(out, &text, &mut manifest, started)?;
    if result.verified {
        Ok(())
    } else {
        let (i, r) = result.worst_residual().expect("a failing result has targets");
        Err(Failure::Verification(format!(
            "target {} ({}) has residual {r:e} > {tol:e}",
            i,
            result.targets.points()[i].tag
        )))
    }
}

fn density(cli: &Cli, max_n: usize, max_m: usize, samples: usize, disk_step: f64, out: Option<&Path>) -> Outcome {
    let started = Instant::now();
    let tol = check_tol(cli.tol.unwrap_or(DEFAULT_ROOT_TOL))?;
    let opts = EnumerationOptions { cap: cli.cap, canonical: true };
    let report = density_report(max_n, max_m, samples, disk_step, tol, opts)?;
    let text = json_string(&density_to_json(&report));
    let params = json!({
        "max_n": max_n,
        "max_m": max_m,
        "samples": samples,
        "disk_step": disk_step,
        "tol": tol,
        "cap": cli.cap,
    });
    let mut manifest = RunManifest::new("density", params);
    emit(out, &text, &mut manifest, started)?;
    if let Some(path) = out {
        // timing is kept out of the report itself so that it stays reproducible
        let mpath = RunManifest::path_for(path);
        let mut m = manifest.to_json();
        m["timing"] = serde_json::to_value(&report.timing).unwrap_or(Value::Null);
        std::fs::write(&mpath, json_string(&m)).map_err(|e| Failure::Io(format!("{}: {e}", mpath.display())))?;
    }
    if report.is_monotone(1e-12) {
        Ok(())
    } else {
        Err(Failure::Verification("distances are not nonincreasing in n".into()))
    }
}

fn run(cli: &Cli) -> Outcome {
    if let Some(t) = cli.threads {
        if t == 0 {
            return Err(Failure::Usage("--threads must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| Failure::Usage(e.to_string()))?;
    }
    match &cli.command {
        Command::Normalize { k, l, periodic } => normalize(k, l.as_deref(), *periodic),
        Command::Spectrum { mode, k, l, samples, output } => spectrum(cli, *mode, k, l.as_deref(), *samples, output),
        Command::Enumerate {
            n,
            accumulate,
            dedup,
            dedup_step,
            canonical,
            output,
        } => enumerate(cli, *n, *accumulate, dedup.then_some(*dedup_step), *canonical, output),
        Command::Embed { k, n, witness, out } => embed(cli, k, *n, *witness, out.as_deref()),
        Command::Density {
            max_n,
            max_m,
            samples,
            disk_step,
            out,
        } => density(cli, *max_n, *max_m, *samples, *disk_step, out.as_deref()),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("sign-spectra: {f}");
            ExitCode::from(f.code())
        }
    }
}
