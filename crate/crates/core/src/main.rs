use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use canonkern::dump::{self, Member};
use canonkern::specfun::EigenState;
use canonkern::suite::{self, SuiteConfig};
use canonkern::{Params, PotentialFamily};

#[derive(Parser)]
#[command(name = "canonkern", version, about = "Form-preserving canonical transformations and their quantum kernels")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the verification suite and write a JSON report.
    Run {
        /// Configuration file with flat dotted keys.
        #[arg(long)]
        config: PathBuf,
        /// Worker threads (default: available parallelism).
        #[arg(long)]
        jobs: Option<usize>,
        /// Report path; overrides `report.out`. Without either the report goes to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tabulate a kernel, an eigenfunction or a phase-space map as CSV.
    Dump(DumpArgs),
    /// List the available checks.
    ListChecks,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Kernel,
    Eigenfunction,
    PhaseMap,
}

#[derive(Args)]
struct DumpArgs {
    #[arg(long, value_enum)]
    kind: Kind,
    #[arg(long, value_parser = parse_family)]
    family: PotentialFamily,
    /// Rotation angle (quadratic family).
    #[arg(long, allow_hyphen_values = true)]
    theta: Option<f64>,
    /// Translation parameter (linear family).
    #[arg(long, allow_hyphen_values = true)]
    nu: Option<f64>,
    /// Real part of μ.
    #[arg(long, allow_hyphen_values = true)]
    mu: Option<f64>,
    /// Imaginary part of μ.
    #[arg(long, allow_hyphen_values = true)]
    mu_im: Option<f64>,
    /// Oscillator level.
    #[arg(long)]
    n: Option<u32>,
    /// Energy (linear family).
    #[arg(long, allow_hyphen_values = true)]
    energy: Option<f64>,
    /// Wavenumber (exponential family).
    #[arg(long)]
    k: Option<f64>,
    /// Mathieu label (sinusoidal family).
    #[arg(long, allow_hyphen_values = true)]
    s: Option<i32>,
    /// Points per axis.
    #[arg(long, default_value_t = 50)]
    grid: usize,
    #[arg(long, default_value_t = -3.0, allow_hyphen_values = true)]
    lo: f64,
    #[arg(long, default_value_t = 3.0, allow_hyphen_values = true)]
    hi: f64,
    #[arg(long, default_value_t = 1.0)]
    m: f64,
    #[arg(long, default_value_t = 1.0)]
    hbar: f64,
    #[arg(long, default_value_t = 1.0)]
    lambda: f64,
    #[arg(long, default_value_t = 1.0)]
    a: f64,
    #[arg(long)]
    out: PathBuf,
}

fn parse_family(s: &str) -> Result<PotentialFamily, String> {
    PotentialFamily::from_name(s).ok_or_else(|| {
        let names: Vec<_> = PotentialFamily::ALL.iter().map(|f| f.name()).collect();
        format!("unknown family {s} (expected one of {})", names.join(", "))
    })
}

fn member(args: &DumpArgs) -> Result<Member, String> {
    match (args.theta, args.nu, args.mu, args.mu_im) {
        (Some(t), None, None, None) => Ok(Member::Theta(t)),
        (None, Some(nu), None, None) => Ok(Member::Nu(nu)),
        (None, None, re, im) if re.is_some() || im.is_some() => {
            Ok(Member::Mu(Complex64::new(re.unwrap_or(0.0), im.unwrap_or(0.0))))
        }
        _ => Err("give exactly one of --theta, --nu or --mu/--mu-im".into()),
    }
}

fn state(args: &DumpArgs) -> Result<EigenState, String> {
    let missing = |flag: &str| format!("--{flag} is required for the {} family", args.family);
    match args.family {
        PotentialFamily::Quadratic => Ok(EigenState::Oscillator { n: args.n.ok_or_else(|| missing("n"))? }),
        PotentialFamily::Linear => Ok(EigenState::Linear { energy: args.energy.ok_or_else(|| missing("energy"))? }),
        PotentialFamily::Exponential => Ok(EigenState::Exponential { k: args.k.ok_or_else(|| missing("k"))? }),
        PotentialFamily::Sinusoidal => Ok(EigenState::Sinusoidal { s: args.s.ok_or_else(|| missing("s"))? }),
        f => Err(format!("no eigenfunctions are implemented for the {f} family")),
    }
}

fn run_dump(args: &DumpArgs) -> Result<(), String> {
    let params = Params::new(args.m, args.hbar, args.lambda, args.a).map_err(|e| e.to_string())?;
    let table = match args.kind {
        Kind::Kernel => {
            let gf = dump::member_gf(args.family, member(args)?, &params).map_err(|e| e.to_string())?;
            dump::kernel_table(&gf, args.grid, args.lo, args.hi)
        }
        Kind::PhaseMap => {
            let gf = dump::member_gf(args.family, member(args)?, &params).map_err(|e| e.to_string())?;
            dump::phase_map_table(&gf, args.grid, args.lo, args.hi)
        }
        Kind::Eigenfunction => dump::eigenfunction_table(state(args)?, &params, args.grid, args.lo, args.hi),
    }
    .map_err(|e| e.to_string())?;
    if table.skipped > 0 {
        eprintln!("{} grid points have no unique image and were left out", table.skipped);
    }
    dump::write_csv_file(&table, &args.out)
}

fn run(config: PathBuf, jobs: Option<usize>, out: Option<PathBuf>) -> ExitCode {
    let text = match std::fs::read_to_string(&config) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {}: {e}", config.display());
            return ExitCode::from(2);
        }
    };
    let cfg = match SuiteConfig::from_toml_str(&text) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {}: {e}", config.display());
            return ExitCode::from(2);
        }
    };
    if jobs == Some(0) {
        eprintln!("error: --jobs must be positive");
        return ExitCode::from(2);
    }
    let report = match suite::run_suite(&cfg, jobs) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let json = report.to_json();
    match out.or(cfg.output) {
        Some(path) => {
            if let Err(e) = std::fs::write(&path, &json) {
                eprintln!("error: {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{json}"),
    }
    eprintln!("{} of {} checks passed", report.summary.passed, report.summary.total);
    for name in &report.summary.failed {
        eprintln!("FAILED {name}");
    }
    if report.all_passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match cli.command {
        Command::Run { config, jobs, out } => run(config, jobs, out),
        Command::Dump(args) => match run_dump(&args) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(2)
            }
        },
        Command::ListChecks => {
            for c in suite::registry() {
                println!("{:<32} criterion {:>2}  {}", c.name, c.criterion, c.description);
            }
            ExitCode::SUCCESS
        }
    }
}
