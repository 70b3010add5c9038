use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use subrad::cache::write_atomic;
use subrad::config::{parse_number, parse_polarization, SweepConfig};
use subrad::eval::{evaluate, EvalContext, ResultRow, CSV_HEADER};
use subrad::figures::{figure, FigureId};
use subrad::sweep::{run_sweep, thread_pool, SweepOptions};
use subrad::validate::{self, ValidateOptions};
use subrad::{bench, CliError};
use subrad_core::{LatticeSpec, Method, ModeVector, QuadratureSpec, Vec3};

#[derive(Parser)]
#[command(name = "subrad", version, about = "Collective decay rates of Bloch modes in atomic lattices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one mode with one or more methods.
    Point(PointArgs),
    /// Run a k-grid sweep from a key=value config file.
    Sweep(SweepArgs),
    /// Emit the data behind a figure (or `all`).
    Figure(FigureArgs),
    /// Run the cross-method checks; exit status 1 on any failure.
    Validate(ValidateArgs),
    /// Time representative evaluations.
    Bench(BenchArgs),
}

#[derive(Args)]
struct PointArgs {
    #[arg(long)]
    dim: u8,
    /// Lattice step k₀d; a trailing `pi` is allowed (`0.4pi`).
    #[arg(long)]
    k0d: String,
    /// Atoms per axis, one value per dimension.
    #[arg(long, num_args = 1..=3, required = true)]
    n: Vec<usize>,
    #[arg(long, num_args = 3, allow_negative_numbers = true, default_values = ["0", "0", "1"])]
    pol: Vec<String>,
    /// Mode vector in units of k₀, one value per dimension.
    #[arg(long, num_args = 1..=3, allow_negative_numbers = true, required = true)]
    k: Vec<String>,
    /// Method tags, repeatable or comma separated.
    #[arg(long, required = true, value_delimiter = ',')]
    method: Vec<String>,
    #[arg(long)]
    ntheta: Option<usize>,
    #[arg(long)]
    nphi: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args)]
struct SweepArgs {
    config: PathBuf,
    /// Output CSV; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads; 0 picks one per core.
    #[arg(long, default_value_t = 0)]
    workers: usize,
    /// Record wall_time_ms (disables the cache).
    #[arg(long)]
    timing: bool,
    /// Overrides both the config file and SUBRAD_CACHE_DIR.
    #[arg(long)]
    cache_dir: Option<PathBuf>,
}

#[derive(Args)]
struct FigureArgs {
    /// fig1a, fig1b, fig2a, fig2b, fig3, fig4a, fig4b, fig5 or all.
    id: String,
    /// Directory for `<id>.csv`; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    workers: usize,
}

#[derive(Args)]
struct ValidateArgs {
    #[arg(long, default_value_t = 8)]
    max_side_2d: usize,
    #[arg(long, default_value_t = 4)]
    max_side_3d: usize,
    /// Scale the pair rate by 1 + this, to check that the suite notices.
    #[arg(long, default_value_t = 0.0)]
    perturb_pair_rate: f64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, default_value_t = 5)]
    repeats: usize,
}

fn point(args: &PointArgs) -> Result<String, CliError> {
    let dim = args.dim as usize;
    if !(1..=3).contains(&dim) {
        return Err(CliError::Config(format!("--dim must be 1, 2 or 3, got {dim}")));
    }
    if args.n.len() != dim || args.k.len() != dim {
        return Err(CliError::Config(format!("--n and --k need exactly {dim} values")));
    }
    let k0d = parse_number(&args.k0d).map_err(CliError::Config)?;
    let mut counts = [1; 3];
    counts[..dim].copy_from_slice(&args.n);
    let lattice = LatticeSpec::new(args.dim, k0d, counts)?;
    let polarization = parse_polarization(&args.pol.join(" "))?;
    let mut k = Vec3::zeros();
    for (a, v) in args.k.iter().enumerate() {
        k[a] = parse_number(v).map_err(CliError::Config)?;
    }
    let mode = ModeVector::extended(k, &lattice)?;
    let methods = args
        .method
        .iter()
        .map(|m| Method::from_str(m.trim()).map_err(|_| CliError::Config(format!("unknown method `{m}`"))))
        .collect::<Result<Vec<_>, _>>()?;
    let mut quadrature = QuadratureSpec::finite_integral();
    quadrature.n_theta = args.ntheta.unwrap_or(quadrature.n_theta);
    quadrature.n_phi = args.nphi.unwrap_or(quadrature.n_phi);
    quadrature.tol_rel = args.tol.unwrap_or(quadrature.tol_rel);
    quadrature.validate()?;

    let ctx = EvalContext { lattice: &lattice, polarization: &polarization, quadrature: &quadrature };
    let zone = k * (k0d / std::f64::consts::PI);
    let mut out = format!("{CSV_HEADER}\n");
    for method in methods {
        let row = ResultRow { k: [zone.x, zone.y, zone.z], method, outcome: evaluate(method, &mode, &ctx), wall_time_ms: None };
        out.push_str(&row.to_csv());
        out.push('\n');
    }
    Ok(out)
}

fn emit(out: Option<&PathBuf>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => write_atomic(path, text.as_bytes()),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Point(args) => emit(None, &point(&args)?),
        Command::Sweep(args) => {
            let text = std::fs::read_to_string(&args.config)
                .map_err(|source| CliError::Unreadable { path: args.config.clone(), source })?;
            let config = SweepConfig::parse(&text)?;
            let opts = SweepOptions { workers: args.workers, timing: args.timing, cache_dir: args.cache_dir };
            let (csv, stats) = run_sweep(&config, &opts)?;
            eprintln!(
                "{} points, {} method(s) from cache, {} computed",
                stats.points, stats.cached_methods, stats.computed_methods
            );
            emit(args.out.as_ref(), &csv)
        }
        Command::Figure(args) => {
            let ids = if args.id == "all" { FigureId::ALL.to_vec() } else { vec![FigureId::from_str(&args.id)?] };
            if let Some(dir) = &args.out {
                std::fs::create_dir_all(dir).map_err(|source| CliError::Unwritable { path: dir.clone(), source })?;
            } else if ids.len() > 1 {
                return Err(CliError::Config("`figure all` needs --out".into()));
            }
            let pool = thread_pool(args.workers);
            for id in ids {
                let csv = pool.install(|| figure(id)).to_csv();
                emit(args.out.as_ref().map(|d| d.join(format!("{}.csv", id.name()))).as_ref(), &csv)?;
            }
            Ok(())
        }
        Command::Validate(args) => {
            let report = validate::run(&ValidateOptions {
                max_side_2d: args.max_side_2d,
                max_side_3d: args.max_side_3d,
                perturb_pair_rate: args.perturb_pair_rate,
                seed: args.seed,
            });
            println!("{report}");
            match report.failures() {
                0 => Ok(()),
                n => Err(CliError::ValidationFailed(n)),
            }
        }
        Command::Bench(args) => {
            println!("case,repeats,mean_ms");
            for r in bench::run(args.repeats) {
                println!("{},{},{:.3}", r.name, r.repeats, r.mean_ms);
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("subrad: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
