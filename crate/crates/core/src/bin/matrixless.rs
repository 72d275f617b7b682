use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use matrixless::harness::{
    approximate_spectrum, parse_epsilon, parse_f_series, parse_sizes, run_errors, run_precompute, validate_cache,
    write_approx_csv, write_figure_csv, write_table_csv, Cache, ErrorsConfig, RunConfig,
};
use matrixless::{Precision, Result, SymbolParams};

#[derive(Parser)]
#[command(name = "matrixless", version, about = "Matrix-less eigenvalue approximation for Hessenberg Toeplitz matrices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute dense spectra on the grid and write the coefficient cache.
    Precompute(PrecomputeArgs),
    /// Approximate all eigenvalues of T_n from a cache.
    Approx(ApproxArgs),
    /// Error tables and per-index figure data against the dense solver.
    Errors(ErrorsArgs),
    /// Consistency checks on a cache.
    Validate(ValidateArgs),
}

#[derive(Args)]
struct PrecomputeArgs {
    #[arg(long, default_value_t = 0.75)]
    alpha: f64,
    /// Coefficients of f, comma separated (e.g. `1,0.3-0.2i`).
    #[arg(long = "f", default_value = "1")]
    f: String,
    #[arg(long, default_value_t = 100)]
    n1: usize,
    #[arg(long, default_value_t = 7)]
    levels_inner: usize,
    #[arg(long, default_value_t = 5)]
    levels_extreme: usize,
    #[arg(long, default_value_t = 25)]
    j0: usize,
    /// Sizes for the extreme fit (default n1, 2 n1, ...).
    #[arg(long)]
    extreme_sizes: Option<String>,
    /// Regime split, checked against --n when given.
    #[arg(long, default_value = "1/30")]
    eps: String,
    /// Target sizes to check the configuration against.
    #[arg(long)]
    n: Option<String>,
    #[arg(long, default_value = "hw")]
    precision: Precision,
    #[arg(long, alias = "out")]
    cache: PathBuf,
}

#[derive(Args)]
struct ApproxArgs {
    #[arg(long)]
    cache: PathBuf,
    /// One size, or a comma-separated list (then --out is a directory).
    #[arg(long)]
    n: String,
    /// Inner levels (default: all in the cache).
    #[arg(long)]
    k: Option<usize>,
    /// Extreme terms (default: all in the cache).
    #[arg(long)]
    k_extreme: Option<usize>,
    #[arg(long, default_value = "1/30")]
    eps: String,
    /// CSV output; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ErrorsArgs {
    #[arg(long)]
    cache: PathBuf,
    #[arg(long, default_value = "256,512,1024")]
    n: String,
    /// Table rows cover k = 1..=K; the figure data uses K for both regimes.
    #[arg(long, default_value_t = 4)]
    k: usize,
    /// Regime split for the figure data.
    #[arg(long, default_value = "1/30")]
    eps: String,
    /// Output directory for table.csv and figure_n<N>.csv.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ValidateArgs {
    #[arg(long)]
    cache: PathBuf,
    #[arg(long, default_value = "1/8")]
    eps: String,
}

fn precompute(args: PrecomputeArgs) -> Result<()> {
    let symbol = SymbolParams::new(args.alpha, parse_f_series(&args.f)?)?;
    let mut cfg = RunConfig::new(symbol, args.n1);
    cfg.k_inner = args.levels_inner;
    cfg.k_extreme = args.levels_extreme;
    cfg.j0 = args.j0;
    cfg.epsilon = parse_epsilon(&args.eps)?;
    cfg.extreme_sizes = args.extreme_sizes.as_deref().map(parse_sizes).transpose()?;
    cfg.precision = args.precision;
    cfg.validate()?;
    if let Some(n) = &args.n {
        cfg.check_targets(&parse_sizes(n)?)?;
    }
    let cache = run_precompute(&cfg)?;
    cache.write(&args.cache)?;
    eprintln!(
        "wrote {} ({} x {} inner coefficients, {} extreme indices)",
        args.cache.display(),
        cache.k_inner - 1,
        cache.n1,
        cache.j0
    );
    Ok(())
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn approx(args: ApproxArgs) -> Result<()> {
    let cache = Cache::read(&args.cache)?;
    let sizes = parse_sizes(&args.n)?;
    let eps = parse_epsilon(&args.eps)?;
    let k1 = args.k.unwrap_or(cache.k_inner);
    let k2 = args.k_extreme.unwrap_or(cache.k_extreme);
    if sizes.len() > 1 {
        let dir = args.out.ok_or_else(|| {
            matrixless::Error::InvalidParameter("several sizes need --out <directory>".into())
        })?;
        std::fs::create_dir_all(&dir)?;
        for n in sizes {
            let values = approximate_spectrum(&cache, n, k1, k2, eps)?;
            write_approx_csv(output(Some(&dir.join(format!("approx_n{n}.csv"))))?, &values)?;
        }
        return Ok(());
    }
    let values = approximate_spectrum(&cache, sizes[0], k1, k2, eps)?;
    write_approx_csv(output(args.out.as_deref())?, &values)
}

fn errors(args: ErrorsArgs) -> Result<()> {
    let cache = Cache::read(&args.cache)?;
    let cfg = ErrorsConfig {
        sizes: parse_sizes(&args.n)?,
        k_table: args.k,
        table_epsilon: 0.125,
        k1: args.k,
        k2: args.k.min(cache.k_extreme),
        epsilon: parse_epsilon(&args.eps)?,
    };
    let tables = run_errors(&cache, &cfg)?;
    std::fs::create_dir_all(&args.out)?;
    write_table_csv(output(Some(&args.out.join("table.csv")))?, &tables.rows)?;
    for report in &tables.reports {
        write_figure_csv(output(Some(&args.out.join(format!("figure_n{}.csv", report.n))))?, report)?;
    }
    for row in &tables.rows {
        println!("k={} n={} AE_max={:.4e} normalized={:.4}", row.k, row.n, row.ae_max, row.ae_normalized);
    }
    Ok(())
}

fn validate(args: ValidateArgs) -> Result<bool> {
    let cache = Cache::read(&args.cache)?;
    let v = validate_cache(&cache, parse_epsilon(&args.eps)?)?;
    let first_ok = v.first_coefficient.0 <= 1e-2;
    println!("table complete: yes");
    println!(
        "first coefficient vs analytic: max relative deviation {:.3e} at j1={} ({})",
        v.first_coefficient.0,
        v.first_coefficient.1,
        if first_ok { "ok" } else { "too large" }
    );
    if let Some(r) = v.conjugate_residual {
        println!("c_1 mirror residual (modulo 2 pi i): {r:.3e}");
    }
    println!("self-consistency at n = n1: max inner error {:.3e}", v.self_consistency);
    Ok(first_ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Precompute(a) => precompute(a).map(|_| true),
        Command::Approx(a) => approx(a).map(|_| true),
        Command::Errors(a) => errors(a).map(|_| true),
        Command::Validate(a) => validate(a),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
