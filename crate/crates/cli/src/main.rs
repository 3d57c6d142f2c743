use std::collections::HashMap;
use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use jacobi_theta::grid::{self, Spacing};
use jacobi_theta::properties::SignSummary;
use jacobi_theta::verify::{run_suites, VerificationReport};
use jacobi_theta::{
    constants, par, theta_nonmonotonicity_scan, EllipticConstants, Error as ThetaError, Modulus,
    Suite, ThetaKind,
};

mod format;

use format::sig;

#[derive(Parser)]
#[command(name = "jtheta", version, about = "Jacobi elliptic and theta functions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one function at a single point.
    Eval(EvalArgs),
    /// Tabulate Θ(λK)/Θ(μK) and its k-derivative over a modulus grid (CSV).
    Sweep(SweepArgs),
    /// Run verification suites and write a structured report.
    Verify(VerifyArgs),
    /// Count sign changes of dΘ(λK)/dk over a modulus grid for a range of λ (CSV).
    NonmonoScan(ScanArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Function {
    #[value(name = "K")]
    BigK,
    #[value(name = "E")]
    BigE,
    #[value(name = "Kprime")]
    BigKPrime,
    #[value(name = "Eprime")]
    BigEPrime,
    Nome,
    Sn,
    Cn,
    Dn,
    Zn,
    Theta,
    #[value(name = "H")]
    H,
    #[value(name = "H1")]
    H1,
    Theta1,
    ThetaRatio,
    RatioDk,
    DthetaDk,
    G,
    #[value(name = "h")]
    HAux,
    F,
    FSecond,
}

#[derive(Args)]
struct EvalArgs {
    function: Function,
    /// Argument u.
    #[arg(long, conflicts_with = "lambda", allow_hyphen_values = true)]
    u: Option<f64>,
    /// Argument as a multiple of K (u = λK); also λ for ratios and f.
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    mu: Option<f64>,
    #[arg(long, conflicts_with = "k_prime")]
    k: Option<f64>,
    /// Complementary modulus, for moduli very close to 1.
    #[arg(long)]
    k_prime: Option<f64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SpacingArg {
    Linear,
    Logc,
}

impl From<SpacingArg> for Spacing {
    fn from(s: SpacingArg) -> Self {
        match s {
            SpacingArg::Linear => Spacing::Linear,
            SpacingArg::Logc => Spacing::LogComplementary,
        }
    }
}

#[derive(Args)]
struct GridArgs {
    #[arg(long, default_value_t = 0.01)]
    k_min: f64,
    #[arg(long, default_value_t = 0.99)]
    k_max: f64,
    #[arg(long, default_value_t = 50)]
    points: usize,
    #[arg(long, value_enum, default_value = "linear")]
    spacing: SpacingArg,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, allow_hyphen_values = true)]
    lambda: f64,
    #[arg(long, allow_hyphen_values = true)]
    mu: f64,
    #[command(flatten)]
    grid: GridArgs,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// all | identities | lemma1 | lemma2 | lemma3 | lemma4 | heat | thm1-mono |
    /// thm1-asym | thm1-convex | eq1 | nonmono | sn-zn-monotone
    #[arg(long, default_value = "all")]
    suite: String,
    /// Override a report tolerance, e.g. `--tol heat/residual=1e-10`.
    #[arg(long = "tol", value_name = "NAME=VALUE")]
    tol: Vec<String>,
    /// Structured (JSON) report path.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ScanArgs {
    #[arg(long, default_value_t = 0.5)]
    lambda_min: f64,
    #[arg(long, default_value_t = 0.6)]
    lambda_max: f64,
    #[arg(long, default_value_t = 11)]
    lambda_points: usize,
    #[command(flatten)]
    grid: GridArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Exit status: 1 for domain or verification failures, 2 for usage errors.
enum Failure {
    Usage(String),
    Runtime(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Runtime(e)
    }
}

impl From<ThetaError> for Failure {
    fn from(e: ThetaError) -> Self {
        match e {
            ThetaError::InvalidArgument(msg) => Failure::Usage(msg),
            other => Failure::Runtime(other.into()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Eval(args) => eval(args),
        Command::Sweep(args) => sweep(args),
        Command::Verify(args) => verify(args),
        Command::NonmonoScan(args) => nonmono_scan(args),
    };
    match result {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn modulus_from(k: Option<f64>, k_prime: Option<f64>) -> Result<Modulus, Failure> {
    match (k, k_prime) {
        (Some(k), None) => Ok(Modulus::new(k)?),
        (None, Some(kp)) => Ok(Modulus::from_complementary(kp)?),
        _ => Err(Failure::Usage("exactly one of --k or --k-prime is required".into())),
    }
}

fn eval(args: EvalArgs) -> Result<ExitCode, Failure> {
    let m = modulus_from(args.k, args.k_prime)?;
    let c = constants(m);
    let u = || -> Result<f64, Failure> {
        match (args.u, args.lambda) {
            (Some(u), _) => Ok(u),
            (None, Some(l)) => Ok(l * c.big_k),
            (None, None) => Err(Failure::Usage("this function needs --u or --lambda".into())),
        }
    };
    let need = |x: Option<f64>, flag: &str| x.ok_or_else(|| Failure::Usage(format!("this function needs --{flag}")));
    let theta = |kind: ThetaKind| -> Result<f64, Failure> { Ok(c.theta(kind, u()?)?.value) };
    let value = match args.function {
        Function::BigK => c.big_k,
        Function::BigE => c.big_e,
        Function::BigKPrime => c.big_k_prime,
        Function::BigEPrime => c.big_e_prime,
        Function::Nome => c.nome,
        Function::Sn => c.sn_cn_dn(u()?).0,
        Function::Cn => c.sn_cn_dn(u()?).1,
        Function::Dn => c.sn_cn_dn(u()?).2,
        Function::Zn => c.zn(u()?)?,
        Function::Theta => theta(ThetaKind::Theta)?,
        Function::H => theta(ThetaKind::H)?,
        Function::H1 => theta(ThetaKind::H1)?,
        Function::Theta1 => theta(ThetaKind::Theta1)?,
        Function::ThetaRatio => c.ratio(need(args.lambda, "lambda")?, need(args.mu, "mu")?)?,
        Function::RatioDk => c.ratio_dk(need(args.lambda, "lambda")?, need(args.mu, "mu")?)?,
        Function::DthetaDk => c.dtheta_dk_at(ThetaKind::Theta, need(args.lambda, "lambda")?)?,
        Function::G => c.g(u()?)?,
        Function::HAux => jacobi_theta::h(u()?, m)?,
        Function::F => jacobi_theta::convexity_f(need(args.mu, "mu")?, need(args.lambda, "lambda")?, m)?,
        Function::FSecond => {
            jacobi_theta::convexity_f_second(need(args.mu, "mu")?, need(args.lambda, "lambda")?, m)?
        }
    };
    println!("{}", sig(value));
    Ok(ExitCode::SUCCESS)
}

fn output(path: &Option<PathBuf>) -> Result<Box<dyn Write>, Failure> {
    Ok(match path {
        Some(p) => Box::new(
            File::create(p).with_context(|| format!("cannot write {}", p.display()))?,
        ),
        None => Box::new(io::stdout().lock()),
    })
}

fn csv_writer(path: &Option<PathBuf>) -> Result<csv::Writer<Box<dyn Write>>, Failure> {
    Ok(csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(output(path)?))
}

fn k_grid(g: &GridArgs) -> Result<Vec<Modulus>, Failure> {
    Ok(grid::k_grid(g.k_min, g.k_max, g.points, g.spacing.into())?)
}

fn sweep(args: SweepArgs) -> Result<ExitCode, Failure> {
    let moduli = k_grid(&args.grid)?;
    let (lambda, mu) = (args.lambda, args.mu);
    let rows = par::map(&moduli, |&m| -> Result<[f64; 6], ThetaError> {
        let c: EllipticConstants = constants(m);
        Ok([
            m.k(),
            m.k_prime(),
            c.ratio(lambda, mu)?,
            c.ratio_dk(lambda, mu)?,
            c.theta(ThetaKind::Theta, lambda * c.big_k)?.value,
            c.theta(ThetaKind::Theta, mu * c.big_k)?.value,
        ])
    });
    let mut w = csv_writer(&args.out)?;
    let io_err = |e: csv::Error| Failure::Runtime(e.into());
    w.write_record(["k", "k_prime", "ratio", "ratio_dk", "theta_lambda", "theta_mu"])
        .map_err(io_err)?;
    for row in rows {
        w.write_record(row?.iter().map(|&x| sig(x))).map_err(io_err)?;
    }
    w.flush().context("flushing CSV")?;
    Ok(ExitCode::SUCCESS)
}

fn parse_overrides(items: &[String]) -> Result<HashMap<String, f64>, Failure> {
    items
        .iter()
        .map(|item| {
            let (name, value) = item
                .split_once('=')
                .ok_or_else(|| Failure::Usage(format!("--tol expects NAME=VALUE, got {item:?}")))?;
            let value: f64 = value
                .parse()
                .map_err(|_| Failure::Usage(format!("--tol value {value:?} is not a number")))?;
            Ok((name.to_string(), value))
        })
        .collect()
}

fn verify(args: VerifyArgs) -> Result<ExitCode, Failure> {
    let suites = Suite::select(&args.suite)?;
    let overrides = parse_overrides(&args.tol)?;
    let reports: Vec<VerificationReport> = run_suites(&suites, &overrides)?;
    for r in &reports {
        println!("{}", r.to_line());
        for d in &r.details {
            println!("    {d}");
        }
    }
    if let Some(path) = &args.out {
        let mut f = output(&Some(path.clone()))?;
        serde_json::to_writer_pretty(&mut f, &reports).context("writing report")?;
        writeln!(f).context("writing report")?;
    }
    let passed = reports.iter().all(|r| r.passed);
    Ok(if passed { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn sign_label(s: jacobi_theta::Sign) -> String {
    s.symbol().to_string()
}

fn nonmono_scan(args: ScanArgs) -> Result<ExitCode, Failure> {
    let (lo, hi) = (args.lambda_min, args.lambda_max);
    if !(lo > 0.0 && lo <= hi && hi < 1.0) || args.lambda_points == 0 {
        return Err(Failure::Usage(format!(
            "lambda range must satisfy 0 < min <= max < 1 with at least one point, got [{lo}, {hi}]"
        )));
    }
    let moduli = k_grid(&args.grid)?;
    let lambdas = grid::linspace(lo, hi, args.lambda_points);
    let mut w = csv_writer(&args.out)?;
    let io_err = |e: csv::Error| Failure::Runtime(e.into());
    w.write_record(["lambda", "sign_changes", "first_sign", "last_sign"])
        .map_err(io_err)?;
    for lambda in lambdas {
        let signs = theta_nonmonotonicity_scan(lambda, &moduli)?;
        let s = SignSummary::from_signs(&signs).expect("grid has at least two points");
        w.write_record([sig(lambda), s.changes.to_string(), sign_label(s.first), sign_label(s.last)])
            .map_err(io_err)?;
    }
    w.flush().context("flushing CSV")?;
    Ok(ExitCode::SUCCESS)
}
