//! `iqr` command line front end.
//!
//! Exit codes: 0 success, 1 usage or validation error, 2 computation failure.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use iqr::experiments::{apply_overrides, parse_config_str, parse_config_value, run_experiment};
use iqr::iqr::iqr_truncation;
use iqr::operator::registry::{operator_from_id, parse_complex, GALLERY};
use iqr::operator::ColumnOracle;
use iqr::spectra::pseudospectrum::{pseudospectrum_grid_with, PseudospecOptions, Region};
use iqr::spectra::{finite_section_spectrum, schur_eigenvalues};
use iqr::towers::{
    delta1_extremal, delta1_invariant_subspace, sigma1_spectrum, Delta1Input, GFunction, Sigma1Input, TowerReport,
};
use iqr::{Error, C64};

#[derive(Parser, Debug)]
#[command(name = "iqr", version, about = "Infinite-dimensional QR and spectral computations on l2(N)")]
struct Cli {
    /// Output directory (the IQR_OUT environment variable takes precedence).
    #[arg(long, global = true, default_value = "iqr_out")]
    out: PathBuf,
    /// Worker threads for parallel stages (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct OpArgs {
    /// Gallery identifier, e.g. `schrodinger_t1`, `laurent:a3`, `hatano_nelson:g=0.5,seed=42`.
    #[arg(long)]
    op: String,
    /// Work with `T + shift` and shift results back; `0.2`, `0.2+0.1i` or `-1i`.
    #[arg(long, allow_hyphen_values = true)]
    shift: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Eigenvalues of `P_m T_n P_m` after `n` IQR steps.
    Iqr {
        #[command(flatten)]
        op: OpArgs,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
    },
    /// Eigenvalues of the finite section `P_m T P_m`.
    FiniteSection {
        #[command(flatten)]
        op: OpArgs,
        #[arg(long)]
        m: usize,
    },
    /// Smallest-singular-value grid and epsilon-pseudospectrum mask.
    Pseudospec {
        #[command(flatten)]
        op: OpArgs,
        #[arg(long)]
        eps: f64,
        /// Truncation size of the rectangular sections.
        #[arg(long, default_value_t = 200)]
        m: usize,
        /// `re_min,re_max,im_min,im_max`; defaults to a square containing the norm bound.
        #[arg(long, allow_hyphen_values = true)]
        region: Option<String>,
        /// `nx,ny`.
        #[arg(long, default_value = "41,41")]
        resolution: String,
        /// Accept epsilon below the floor where rounding dominates.
        #[arg(long = "unsafe")]
        allow_unsafe: bool,
    },
    /// Tower algorithms with certified error radii.
    #[command(subcommand)]
    Tower(Tower),
    /// Run a configured experiment.
    Experiment {
        /// JSON configuration file.
        #[arg(long)]
        config: PathBuf,
        /// Use the larger figure-scale parameters for known operators.
        #[arg(long)]
        paper_scale: bool,
        /// `key=value` overrides applied after the file (values parsed as JSON).
        overrides: Vec<String>,
    },
    /// List gallery identifiers.
    GalleryList,
}

#[derive(Subcommand, Debug)]
enum Tower {
    /// Points within 2^-n of the spectrum.
    Sigma1 {
        #[arg(long)]
        op: String,
        /// `identity` or `scaled:<c>`.
        #[arg(long, default_value = "identity")]
        g: String,
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 10_000)]
        guard: usize,
    },
    /// The `k` extremal eigenpairs to within 2^-n.
    Delta1 {
        #[arg(long)]
        op: String,
        #[arg(long)]
        k: usize,
        /// Asserted rate bound `t` in (0, 1).
        #[arg(long)]
        rate: f64,
        /// Asserted bound `L` on the norm and the angle constant.
        #[arg(long)]
        l: f64,
        #[arg(long)]
        n: u32,
    },
    /// Frame of the dominant invariant subspace to within 2^-n.
    Subspace {
        #[arg(long)]
        op: String,
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        rate: f64,
        #[arg(long)]
        l: f64,
        #[arg(long)]
        n: u32,
    },
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidInput(_)
            | Error::InvalidProfile(_)
            | Error::UnknownOperator { .. }
            | Error::Config(_)
            | Error::EpsilonFloor { .. } => 1,
            _ => 2,
        };
        Failure { code, message: e.to_string() }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: 1, message: message.into() }
}

type Outcome = std::result::Result<(), Failure>;

fn operator(op: &OpArgs) -> std::result::Result<(ColumnOracle, C64), Failure> {
    let t = operator_from_id(&op.op)?;
    let shift = match &op.shift {
        Some(s) => parse_complex(s)?,
        None => C64::new(0.0, 0.0),
    };
    Ok((t, shift))
}

fn points_csv(points: &[C64]) -> String {
    let mut s = String::from("re,im\n");
    for z in points {
        let _ = writeln!(s, "{:e},{:e}", z.re, z.im);
    }
    s
}

fn write(out: &Path, name: &str, body: &str) -> std::result::Result<PathBuf, Failure> {
    fs::create_dir_all(out).map_err(Error::from)?;
    let p = out.join(name);
    fs::write(&p, body).map_err(Error::from)?;
    Ok(p)
}

/// Writes a line to stdout; a closed pipe (`| head`) is not an error.
fn say(line: &str) {
    let _ = writeln!(std::io::stdout().lock(), "{line}");
}

fn print_json(v: &Value) {
    say(&serde_json::to_string_pretty(v).expect("json values serialize"));
}

fn parse_list<const N: usize>(s: &str, what: &str) -> std::result::Result<[f64; N], Failure> {
    let v: Vec<f64> = s
        .split(',')
        .map(|x| x.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| usage(format!("{what}: expected {N} comma-separated numbers, got `{s}`")))?;
    v.try_into().map_err(|_| usage(format!("{what}: expected {N} comma-separated numbers, got `{s}`")))
}

fn run_iqr(op: &OpArgs, m: usize, n: usize, out: &Path) -> Outcome {
    let (t, shift) = operator(op)?;
    let (block, win) = iqr_truncation(&t.shifted(shift), m, n)?;
    let points: Vec<C64> = schur_eigenvalues(&block)?.into_iter().map(|z| z - shift).collect();
    let name = format!("iqr_{m}_{n}.csv");
    let path = write(out, &name, &points_csv(&points))?;
    print_json(&json!({
        "operator": t.name(), "m": m, "n": n, "shift": [shift.re, shift.im],
        "window_size": win.window_size, "points": path.display().to_string(),
    }));
    Ok(())
}

fn run_finite_section(op: &OpArgs, m: usize, out: &Path) -> Outcome {
    let (t, shift) = operator(op)?;
    let est = finite_section_spectrum(&t.shifted(shift), m)?;
    let points: Vec<C64> = est.points.iter().map(|z| z - shift).collect();
    let path = write(out, &format!("finite_section_{m}.csv"), &points_csv(&points))?;
    print_json(&json!({"operator": t.name(), "m": m, "points": path.display().to_string()}));
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn run_pseudospec(
    op: &OpArgs,
    eps: f64,
    m: usize,
    region: &Option<String>,
    resolution: &str,
    allow_unsafe: bool,
    out: &Path,
) -> Outcome {
    let (t, shift) = operator(op)?;
    let opts = PseudospecOptions { allow_unsafe, ..Default::default() };
    // validate before building anything expensive
    iqr::spectra::pseudospectrum::check_epsilon(eps, &opts)?;
    let region = match region {
        Some(r) => {
            let [re_min, re_max, im_min, im_max] = parse_list::<4>(r, "--region")?;
            Region { re_min, re_max, im_min, im_max }
        }
        None => {
            let nb = t.metadata().and_then(|m| m.norm_bound).unwrap_or(2.0);
            Region::square(nb + 1.0)
        }
    };
    let [nx, ny] = parse_list::<2>(resolution, "--resolution")?;
    if nx.fract() != 0.0 || ny.fract() != 0.0 || nx < 1.0 || ny < 1.0 {
        return Err(usage(format!("--resolution: expected positive integers, got `{resolution}`")));
    }
    let shifted = Region {
        re_min: region.re_min + shift.re,
        re_max: region.re_max + shift.re,
        im_min: region.im_min + shift.im,
        im_max: region.im_max + shift.im,
    };
    let mut grid = pseudospectrum_grid_with(&t.shifted(shift), shifted, (nx as usize, ny as usize), eps, m, &opts)?;
    grid.region = region;
    let path = out.join(format!("pseudospec_{m}.csv"));
    fs::create_dir_all(out).map_err(Error::from)?;
    grid.write_csv(&path)?;
    let inside = grid.mask().iter().filter(|&&b| b).count();
    print_json(&json!({
        "operator": t.name(), "epsilon": eps, "m": m, "resolution": [nx as usize, ny as usize],
        "inside": inside, "grid": path.display().to_string(),
    }));
    Ok(())
}

fn emit_report(report: &TowerReport, out: &Path, name: &str) -> Outcome {
    let text = report.to_json();
    write(out, name, &text)?;
    say(&text);
    Ok(())
}

fn run_tower(t: &Tower, out: &Path) -> Outcome {
    match t {
        Tower::Sigma1 { op, g, n, guard } => {
            let input = Sigma1Input { t: operator_from_id(op)?, g: GFunction::parse(g)?, n: *n, guard: *guard };
            let (_, report) = sigma1_spectrum(&input)?;
            emit_report(&report, out, "tower_sigma1.json")
        }
        Tower::Delta1 { op, k, rate, l, n } => {
            let res = delta1_extremal(&Delta1Input { t: operator_from_id(op)?, k: *k, rate: *rate, l: *l, n: *n })?;
            emit_report(&res.report, out, "tower_delta1.json")
        }
        Tower::Subspace { op, dim, rate, l, n } => {
            let (frame, mut report) = delta1_invariant_subspace(&operator_from_id(op)?, *dim, *rate, *l, *n)?;
            // frames are part of the output here; store them via the report inputs
            report.inputs["frame"] = json!(frame
                .vectors()
                .iter()
                .map(|v| v.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>())
                .collect::<Vec<_>>());
            emit_report(&report, out, "tower_subspace.json")
        }
    }
}

fn run_config(config: &Path, paper_scale: bool, overrides: &[String], out: &Path) -> Outcome {
    let text = fs::read_to_string(config).map_err(|e| usage(format!("cannot read {}: {e}", config.display())))?;
    let mut cfg = parse_config_str(&text)?;
    if paper_scale {
        cfg.paper_scale();
    }
    let cfg = parse_config_value(&apply_overrides(&cfg.to_json(), overrides)?)?;
    let summary = run_experiment(&cfg, out)?;
    print_json(&json!({
        "out_dir": summary.out_dir.display().to_string(),
        "artifacts": summary.artifacts.iter().map(|p| p.display().to_string()).collect::<Vec<_>>(),
    }));
    Ok(())
}

fn run(cli: Cli) -> Outcome {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(usage("--threads must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| usage(format!("cannot configure threads: {e}")))?;
    }
    let out = std::env::var_os("IQR_OUT").map(PathBuf::from).unwrap_or(cli.out);
    match &cli.command {
        Command::Iqr { op, m, n } => run_iqr(op, *m, *n, &out),
        Command::FiniteSection { op, m } => run_finite_section(op, *m, &out),
        Command::Pseudospec { op, eps, m, region, resolution, allow_unsafe } => {
            run_pseudospec(op, *eps, *m, region, resolution, *allow_unsafe, &out)
        }
        Command::Tower(t) => run_tower(t, &out),
        Command::Experiment { config, paper_scale, overrides } => run_config(config, *paper_scale, overrides, &out),
        Command::GalleryList => {
            for (id, what) in GALLERY {
                say(&format!("{id:<34} {what}"));
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
