use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use shubinlab::bornjordan::{bj_covariance_residual, bj_self_adjoint_defect, cubic_test_symbol, op_bj};
use shubinlab::config::{parse_tau_list, Format, RunConfig};
use shubinlab::gridfield::{fmt17, Signal};
use shubinlab::intertwine::intertwine_residual;
use shubinlab::ordering::{order_bj, order_tau, order_weyl};
use shubinlab::report::Report;
use shubinlab::shubin::{adjoint_check, marginal_residuals, op_tau_kernel, wigner_tau, QuadSpec, SymbolSpec};
use shubinlab::sympcore::{generator, Generator};
use shubinlab::verify::{self, Context};
use shubinlab::{LabError, Symbol};

#[derive(Parser)]
#[command(name = "shubinlab", version, about = "tau-quantization, intertwiners and Born-Jordan operators on a phase-space grid")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Flat `key = value` config file; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Grid size (power of two).
    #[arg(short = 'N', global = true)]
    n: Option<usize>,
    /// Window length (default sqrt(N)).
    #[arg(short = 'L', global = true)]
    l: Option<f64>,
    /// Comma separated tau values.
    #[arg(long, global = true)]
    tau_list: Option<String>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    output_dir: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<FormatArg>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate W_tau(f, f) and its marginal residuals.
    Wigner {
        #[arg(long, value_enum)]
        signal: SignalArg,
        #[arg(long, default_value_t = 0.5)]
        tau: f64,
        /// Gaussian width.
        #[arg(long, default_value_t = 1.0)]
        width: f64,
        /// Hermite index.
        #[arg(long, default_value_t = 3)]
        k: usize,
        /// Chirp rate.
        #[arg(long, default_value_t = 0.5)]
        alpha: f64,
        /// Distance between the two Gaussians.
        #[arg(long, default_value_t = 3.0)]
        separation: f64,
    },
    /// Build the operator kernel of a symbol.
    Quantize {
        #[arg(long, value_enum, default_value_t = SymbolArg::Gaussian)]
        symbol: SymbolArg,
        /// tau value; ignored with --bj.
        #[arg(long, default_value_t = 0.5)]
        tau: f64,
        /// Born-Jordan quantization instead of Op_tau.
        #[arg(long)]
        bj: bool,
    },
    /// Run a verification suite and write a JSON report.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
    },
    /// Covariance residuals of J, M(2), V(1) under tau-quantization and Born-Jordan.
    CovarianceScan,
    /// Exact Weyl, tau and Born-Jordan orderings of x^m p^l.
    OrderingTable {
        #[arg(long, default_value_t = 3)]
        max: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SignalArg {
    Gaussian,
    Hermite,
    Chirp,
    TwoGaussian,
}

#[derive(Clone, Copy, ValueEnum)]
enum SymbolArg {
    Gaussian,
    Tilted,
    Cubic,
    X2p2,
}

impl SymbolArg {
    fn spec(self) -> Symbol {
        match self {
            SymbolArg::Gaussian => SymbolSpec::standard_gaussian(),
            SymbolArg::Tilted => SymbolSpec::gaussian([[1.0, 0.3], [0.3, 2.0]], [0.3, -0.2]),
            SymbolArg::Cubic => cubic_test_symbol(),
            SymbolArg::X2p2 => SymbolSpec::monomial(2, 2),
        }
    }

    fn name(self) -> &'static str {
        match self {
            SymbolArg::Gaussian => "gaussian",
            SymbolArg::Tilted => "tilted",
            SymbolArg::Cubic => "cubic",
            SymbolArg::X2p2 => "x2p2",
        }
    }
}

enum Failure {
    Usage(String),
    Contract,
    Runtime(String),
}

impl From<LabError> for Failure {
    fn from(e: LabError) -> Self {
        match e {
            LabError::Validation(_) => Failure::Usage(e.to_string()),
            other => Failure::Runtime(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

fn build_config(c: &Common) -> Result<RunConfig, LabError> {
    let mut cfg = match &c.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(n) = c.n {
        cfg.n = n;
    }
    if c.l.is_some() {
        cfg.l = c.l;
    }
    if let Some(t) = &c.tau_list {
        cfg.tau_list = parse_tau_list(t)?;
    }
    if let Some(s) = c.seed {
        cfg.seed = s;
    }
    if let Some(d) = &c.output_dir {
        cfg.output_dir = d.clone();
    }
    if let Some(f) = c.format {
        cfg.format = match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        };
    }
    cfg.validate()?;
    Ok(cfg)
}

fn out_path(cfg: &RunConfig, name: &str) -> Result<PathBuf, Failure> {
    fs::create_dir_all(&cfg.output_dir)?;
    Ok(cfg.output_dir.join(name))
}

fn write_json(path: &Path, value: &serde_json::Value) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Failure::Runtime(e.to_string()))?;
    fs::write(path, text + "\n")?;
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_wigner(cfg: &RunConfig, signal: SignalArg, tau: f64, width: f64, k: usize, alpha: f64, separation: f64) -> Result<(), Failure> {
    if !(0.0..=1.0).contains(&tau) {
        return Err(Failure::Usage(format!("tau = {tau} is outside [0, 1]")));
    }
    let (name, sig) = match signal {
        SignalArg::Gaussian => ("gaussian", Signal::Gaussian { width, center: 0.0, freq: 0.0 }),
        SignalArg::Hermite => ("hermite", Signal::Hermite(k)),
        SignalArg::Chirp => ("chirp", Signal::Chirp(alpha)),
        SignalArg::TwoGaussian => ("two-gaussian", Signal::TwoGaussian { separation }),
    };
    let grid = cfg.grid()?;
    let f = sig.sample(&grid);
    let w = wigner_tau(&f, &f, tau);
    let (rx, rp) = marginal_residuals(&w, &f);
    let max_imag = w.data.iter().fold(0.0f64, |m, v| m.max(v.im.abs()));
    let peak = w.max_abs();
    let stem = format!("wigner-{name}-tau{tau}");
    let table = out_path(cfg, &format!("{stem}.csv"))?;
    w.write_csv_file(&table)?;
    let summary = json!({
        "signal": name,
        "tau": tau,
        "N": grid.n(),
        "L": grid.l(),
        "marginal_x_residual": rx,
        "marginal_p_residual": rp,
        "max_imag": max_imag,
        "peak": peak,
        "table": table.display().to_string(),
    });
    write_json(&out_path(cfg, &format!("{stem}-marginals.json"))?, &summary)?;
    println!("wrote {}", table.display());
    println!("marginal residuals: x {} p {}", fmt17(rx), fmt17(rp));
    println!("max |Im W| = {}  peak |W| = {}", fmt17(max_imag), fmt17(peak));
    Ok(())
}

fn cmd_quantize(cfg: &RunConfig, symbol: SymbolArg, tau: f64, bj: bool) -> Result<(), Failure> {
    let grid = cfg.grid()?;
    let a = symbol.spec();
    let (op, label, defect) = if bj {
        (op_bj(&a, &grid)?, "bj".to_string(), bj_self_adjoint_defect(&a, &grid)?)
    } else {
        (op_tau_kernel(&a, tau, &grid, QuadSpec::default())?, format!("tau{tau}"), adjoint_check(&a, tau, &grid)?)
    };
    let path = out_path(cfg, &format!("quantize-{}-{label}.csv", symbol.name()))?;
    op.write_csv(fs::File::create(&path)?)?;
    println!("wrote {}", path.display());
    println!("Frobenius norm {}", fmt17(op.fro_norm()));
    println!("{} residual {}", if bj { "self-adjointness" } else { "adjoint law" }, fmt17(defect));
    Ok(())
}

fn cmd_verify(cfg: &RunConfig, suite: &str) -> Result<(), Failure> {
    let ctx = Context::new(cfg)?;
    let checks = verify::run_suite(suite, &ctx)
        .ok_or_else(|| Failure::Usage(format!("unknown suite `{suite}` (one of {})", verify::SUITES.join(", "))))?;
    let report = Report::new(cfg.clone(), checks);
    for c in &report.checks {
        println!("{}", c.line());
    }
    let path = out_path(cfg, &format!("verify-{suite}.json"))?;
    fs::write(&path, report.to_json() + "\n")?;
    let failed = report.checks.iter().filter(|c| !c.pass).count();
    println!("{} of {} checks pass; report {}", report.checks.len() - failed, report.checks.len(), path.display());
    if report.pass {
        Ok(())
    } else {
        Err(Failure::Contract)
    }
}

fn cmd_covariance_scan(cfg: &RunConfig) -> Result<(), Failure> {
    let grid = cfg.grid()?;
    let a = cubic_test_symbol();
    let kinds = [Generator::J, Generator::m_scalar(2.0), Generator::v_scalar(1.0)];
    let path = out_path(cfg, "covariance-scan.csv")?;
    let mut w = fs::File::create(&path)?;
    writeln!(w, "generator,quantization,residual,note")?;
    let row = |w: &mut fs::File, g: &str, q: &str, r: shubinlab::Result<f64>| -> std::io::Result<()> {
        let (val, note) = match r {
            Ok(v) => (fmt17(v), String::new()),
            Err(e) => (String::new(), format!("\"{}\"", e.to_string().replace('"', "\"\""))),
        };
        println!("{g:>6} {q:>8} {val:>24} {note}");
        writeln!(w, "{g},{q},{val},{note}")
    };
    for kind in &kinds {
        let label = kind.label();
        let s = generator(kind, 1)?;
        for &tau in &cfg.tau_list {
            row(&mut w, &label, &format!("tau={tau}"), intertwine_residual(&s, tau, &a, &grid))?;
        }
        row(&mut w, &label, "BJ", bj_covariance_residual(kind, &a, &grid))?;
    }
    println!("wrote {}", path.display());
    Ok(())
}

fn cmd_ordering_table(cfg: &RunConfig, max: usize) -> Result<(), Failure> {
    let mut text = String::from("m,l,weyl,tau,bj\n");
    for m in 0..=max {
        for l in 0..=max {
            text.push_str(&format!("{m},{l},\"{}\",\"{}\",\"{}\"\n", order_weyl(m, l), order_tau(m, l), order_bj(m, l)));
        }
    }
    print!("{text}");
    if cfg.format == Format::Csv {
        fs::write(out_path(cfg, "ordering-table.csv")?, &text)?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    let cfg = build_config(&cli.common).map_err(|e| Failure::Usage(e.to_string()))?;
    match cli.command {
        Command::Wigner { signal, tau, width, k, alpha, separation } => cmd_wigner(&cfg, signal, tau, width, k, alpha, separation),
        Command::Quantize { symbol, tau, bj } => cmd_quantize(&cfg, symbol, tau, bj),
        Command::Verify { suite } => cmd_verify(&cfg, &suite),
        Command::CovarianceScan => cmd_covariance_scan(&cfg),
        Command::OrderingTable { max } => cmd_ordering_table(&cfg, max),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Contract) => ExitCode::from(1),
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}
