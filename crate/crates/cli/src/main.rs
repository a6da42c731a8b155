//! `theta-deriv`: orbits, derivations and numeric verification from the shell.

use std::fmt::Write as _;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use theta_deriv::golden;
use theta_deriv::verify::{
    check_expression, check_fundamental, cross_check_quoted_identities, default_taus,
    relation_suite, render_table, ResidualReport, SuiteTolerances, EXPRESSION_TOL, FUNDAMENTAL_TOL,
    QUOTED_TOL,
};
use theta_deriv::{
    char_chain, element_orbits, orbit_of, parse_rational, partition, solve_chain, Characteristic,
    Engine64, EngineError, FactorForm, OrbitError, ParseError, SolverError, SolverOptions, Tau64,
    ThetaExpression,
};

/// `println!` that exits quietly when stdout is closed (e.g. piped into `head`).
macro_rules! out {
    ($($arg:tt)*) => {{
        use std::io::Write as _;
        if let Err(e) = writeln!(std::io::stdout(), $($arg)*) {
            if e.kind() == std::io::ErrorKind::BrokenPipe {
                std::process::exit(0);
            }
        }
    }};
}

macro_rules! outp {
    ($($arg:tt)*) => {{
        use std::io::Write as _;
        if let Err(e) = write!(std::io::stdout(), $($arg)*) {
            if e.kind() == std::io::ErrorKind::BrokenPipe {
                std::process::exit(0);
            }
        }
    }};
}

const EXIT_VERIFY: u8 = 1;
const EXIT_DEGENERATE: u8 = 2;
const EXIT_INPUT: u8 = 3;
const EXIT_CAP: u8 = 4;

#[derive(Parser, Debug)]
#[command(
    name = "theta-deriv",
    version,
    about = "Exact theta-constant expressions for theta derivatives with rational characteristics",
    after_help = "Exit codes: 0 ok, 1 verification failure, 2 degenerate characteristic, \
                  3 bad input, 4 resource cap exceeded."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    config: Config,
}

#[derive(Args, Debug, Clone)]
struct Config {
    /// Sample point in the upper half-plane, e.g. `0.3+1.7i` (repeatable).
    /// Defaults to i, 2i, 0.3+1.7i, -0.4+0.9i, 0.1+0.6i.
    #[arg(long = "tau", global = true, value_parser = parse_tau)]
    taus: Vec<Tau64>,
    /// Relative tolerance override for residual checks.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Seed for randomized checks.
    #[arg(long, global = true, env = "THETA_DERIV_SEED", default_value_t = 42)]
    seed: u64,
    /// Replace θ'[1/2;1/2] by −π θ[0;0] θ[1/2;0] θ[0;1/2].
    #[arg(long, global = true)]
    jacobi: bool,
    /// Represent each theta-constant factor by one member of {c, −c} mod 1.
    #[arg(long, global = true)]
    half_range: bool,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Refuse characteristics whose period exceeds this.
    #[arg(long, global = true, default_value_t = theta_deriv::solver::DEFAULT_MAX_PERIOD)]
    max_period: usize,
    /// Print the effective configuration to stderr.
    #[arg(long, short, global = true)]
    verbose: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Text,
    Json,
    Latex,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Orbits of x ↦ 3x mod 1: `orbit 13` splits P(13), `orbit 1/6` follows one value.
    Orbit { value: String },
    /// Partition of {m/p : 1 ≤ m < p} into orbits (p not divisible by 3).
    Partition { p: u64 },
    /// The chain c, 3c, 9c, … reduced into [0,1)², with tail and core.
    Chain { ep: String, e: String },
    /// Expression for θ'[ep;e](0,τ), certified numerically.
    Derive { ep: String, e: String },
    /// Residual checks of the fundamental identity and the derived expression.
    Verify { ep: String, e: String },
    /// Reference corpus, quoted identities and randomized relation checks.
    Suite {
        /// Cases per relation in the randomized part.
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
}

#[derive(Debug)]
enum Failure {
    Input(String),
    Degenerate(String),
    Cap(String),
    Verification,
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Verification => EXIT_VERIFY,
            Failure::Degenerate(_) => EXIT_DEGENERATE,
            Failure::Input(_) => EXIT_INPUT,
            Failure::Cap(_) => EXIT_CAP,
        }
    }
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<OrbitError> for Failure {
    fn from(e: OrbitError) -> Self {
        match e {
            OrbitError::IterationCap(_) => Failure::Cap(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

impl From<EngineError> for Failure {
    fn from(e: EngineError) -> Self {
        match e {
            EngineError::TruncationExceeded { .. } => Failure::Cap(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

impl From<SolverError> for Failure {
    fn from(e: SolverError) -> Self {
        match e {
            SolverError::DegenerateIdentity { .. } => Failure::Degenerate(e.to_string()),
            SolverError::PeriodTooLarge { .. } => Failure::Cap(e.to_string()),
            SolverError::Orbit(o) => o.into(),
            SolverError::Expr(_) => Failure::Input(e.to_string()),
        }
    }
}

fn parse_tau(s: &str) -> Result<Tau64, String> {
    s.parse::<Tau64>().map_err(|e| e.to_string())
}

fn parse_characteristic(ep: &str, e: &str) -> Result<Characteristic, Failure> {
    Ok(Characteristic::new(parse_rational(ep)?, parse_rational(e)?))
}

impl Config {
    fn taus(&self) -> Vec<Tau64> {
        if self.taus.is_empty() {
            default_taus()
        } else {
            self.taus.clone()
        }
    }

    fn solver_options(&self) -> SolverOptions {
        SolverOptions {
            max_period: self.max_period,
            factor_form: if self.half_range {
                FactorForm::Class
            } else {
                FactorForm::Plain
            },
            jacobi: self.jacobi,
        }
    }

    fn describe(&self) -> String {
        let taus: Vec<String> = self.taus().iter().map(ToString::to_string).collect();
        format!(
            "config: tau=[{}] tol={} seed={} jacobi={} half_range={} format={:?} max_period={}",
            taus.join(", "),
            self.tol.map_or("default".to_string(), |t| format!("{t:e}")),
            self.seed,
            self.jacobi,
            self.half_range,
            self.format,
            self.max_period
        )
    }
}

fn print_reports(reports: &[ResidualReport], format: Format) {
    match format {
        Format::Json => {
            for r in reports {
                out!("{}", r.to_json_line());
            }
        }
        _ => outp!("{}", render_table(reports)),
    }
}

fn summarize(reports: &[ResidualReport], format: Format) -> Result<(), Failure> {
    let failed = reports.iter().filter(|r| !r.pass).count();
    if format != Format::Json {
        out!("{} checks, {} failed", reports.len(), failed);
    }
    if failed == 0 {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn cmd_orbit(value: &str, format: Format) -> Result<(), Failure> {
    if let Ok(p) = value.parse::<u64>() {
        if p < 2 {
            return Err(OrbitError::TooSmall(p).into());
        }
        let orbits = if p % 3 == 0 {
            element_orbits(p)
        } else {
            partition(p)?
        };
        match format {
            Format::Json => {
                let v: Vec<_> = orbits.iter().map(|o| o.to_json()).collect();
                out!("{}", json!({ "p": p, "orbits": v }));
            }
            _ => {
                for o in &orbits {
                    out!("{{{o}}}  size {} ({})", o.len(), kind_label(o));
                }
            }
        }
        return Ok(());
    }
    let x = parse_rational(value)?;
    let o = orbit_of(&x);
    match format {
        Format::Json => out!("{}", o.to_json()),
        _ => out!("{{{o}}}  size {} ({})", o.len(), kind_label(&o)),
    }
    Ok(())
}

fn kind_label(o: &theta_deriv::Orbit) -> &'static str {
    match o.kind {
        theta_deriv::OrbitKind::Periodic => "periodic",
        theta_deriv::OrbitKind::StationaryTerminated => "stationary",
        theta_deriv::OrbitKind::MergesIntoPeriodic => "merges into a cycle",
    }
}

fn cmd_partition(p: u64, format: Format) -> Result<(), Failure> {
    let orbits = partition(p)?;
    match format {
        Format::Json => {
            let v: Vec<_> = orbits.iter().map(|o| o.to_json()).collect();
            out!("{}", json!({ "p": p, "orbits": v }));
        }
        _ => {
            for o in &orbits {
                out!("{{{o}}}  size {}", o.len());
            }
        }
    }
    Ok(())
}

fn cmd_chain(c: &Characteristic, format: Format) -> Result<(), Failure> {
    let chain = char_chain(c)?;
    match format {
        Format::Json => out!("{}", chain.to_json()),
        _ => out!("{chain}"),
    }
    Ok(())
}

fn certify(
    engine: &Engine64,
    e: &ThetaExpression,
    taus: &[Tau64],
    tol: f64,
) -> Result<Vec<ResidualReport>, Failure> {
    taus.iter()
        .map(|t| check_expression(engine, e, t, tol).map_err(Failure::from))
        .collect()
}

fn cmd_derive(c: &Characteristic, cfg: &Config) -> Result<(), Failure> {
    let e = solve_chain(c, &cfg.solver_options())?;
    let engine = Engine64::default();
    let tol = cfg.tol.unwrap_or(EXPRESSION_TOL);
    let taus = cfg.taus();
    let reports = certify(&engine, &e, &taus, tol)?;
    let max = reports.iter().map(|r| r.residual).fold(0.0, f64::max);
    let pass = reports.iter().all(|r| r.pass);
    match cfg.format {
        Format::Text => {
            out!("θ'[{}] = {e}", bracket(c));
            out!(
                "max residual {max:.3e} over {} tau (tol {tol:e}){}",
                taus.len(),
                if pass { "" } else { ": FAILED" }
            );
        }
        Format::Latex => {
            out!("{}", e.to_latex());
            out!(
                "% max residual {max:.3e} over {} tau (tol {tol:e})",
                taus.len()
            );
        }
        Format::Json => {
            let mut v = e.to_json();
            v["certification"] = json!({
                "max_residual": max,
                "tolerance": tol,
                "pass": pass,
                "tau": taus.iter().map(ToString::to_string).collect::<Vec<_>>(),
            });
            out!(
                "{}",
                serde_json::to_string_pretty(&v).expect("serializable")
            );
        }
    }
    if pass {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn bracket(c: &Characteristic) -> String {
    c.to_string().replace(',', ";")
}

fn cmd_verify(c: &Characteristic, cfg: &Config) -> Result<(), Failure> {
    let engine = Engine64::default();
    let taus = cfg.taus();
    let mut reports = Vec::new();
    for t in &taus {
        let mut r =
            check_fundamental(&engine, &c.to_real(), t, cfg.tol.unwrap_or(FUNDAMENTAL_TOL))?;
        r.characteristic = c.to_string();
        reports.push(r);
    }
    match solve_chain(c, &cfg.solver_options()) {
        Ok(e) => reports.extend(certify(
            &engine,
            &e,
            &taus,
            cfg.tol.unwrap_or(EXPRESSION_TOL),
        )?),
        Err(SolverError::DegenerateIdentity { .. }) => {
            if cfg.format != Format::Json {
                out!(
                    "θ'[{}] is not derivable from the identity; checked the identity only",
                    bracket(c)
                );
            }
        }
        Err(e) => return Err(e.into()),
    }
    print_reports(&reports, cfg.format);
    summarize(&reports, cfg.format)
}

fn cmd_suite(samples: usize, cfg: &Config) -> Result<(), Failure> {
    if samples == 0 {
        return Err(Failure::Input("--samples must be at least 1".into()));
    }
    let engine = Engine64::default();
    let taus = cfg.taus();
    let opts = SolverOptions {
        jacobi: true,
        ..cfg.solver_options()
    };
    let mut reports = Vec::new();
    let mut notes = String::new();
    let (mut matched, mut refused) = (0, 0);
    for entry in golden::entries() {
        match (&entry.expression, solve_chain(&entry.target, &opts)) {
            (Some(expected), Ok(got)) => {
                let same = got.equivalent(expected).unwrap_or(false);
                if same {
                    matched += 1;
                } else {
                    let _ = writeln!(notes, "mismatch for [{}]", bracket(&entry.target));
                }
                for t in &taus {
                    let mut r =
                        check_expression(&engine, &got, t, cfg.tol.unwrap_or(EXPRESSION_TOL))?;
                    r.identity = format!("golden-{}", entry.group);
                    r.pass &= same;
                    reports.push(r);
                }
            }
            (None, Err(SolverError::DegenerateIdentity { .. })) => refused += 1,
            (_, other) => {
                let _ = writeln!(
                    notes,
                    "unexpected outcome for [{}]: {:?}",
                    bracket(&entry.target),
                    other.err()
                );
                reports.push(ResidualReport::compare(
                    format!("golden-{}", entry.group),
                    entry.target.to_string(),
                    &taus[0],
                    num_complex::Complex64::new(1.0, 0.0),
                    num_complex::Complex64::new(0.0, 0.0),
                    0.0,
                ));
            }
        }
        for t in &taus {
            let mut r = check_fundamental(&engine, &entry.target.to_real(), t, FUNDAMENTAL_TOL)?;
            r.characteristic = entry.target.to_string();
            reports.push(r);
        }
    }
    for t in &taus {
        reports.extend(cross_check_quoted_identities(
            &engine,
            t,
            cfg.tol.unwrap_or(QUOTED_TOL),
        )?);
    }
    reports.extend(relation_suite(
        &engine,
        samples,
        cfg.seed,
        &SuiteTolerances::default(),
    )?);
    print_reports(&reports, cfg.format);
    if cfg.format != Format::Json {
        outp!("{notes}");
        out!("reference corpus: {matched} expressions reproduced, {refused} degenerate targets refused");
    }
    summarize(&reports, cfg.format)
}

fn run(cli: Cli) -> Result<(), Failure> {
    let cfg = &cli.config;
    if cfg.verbose {
        eprintln!("{}", cfg.describe());
    }
    match &cli.command {
        Command::Orbit { value } => cmd_orbit(value, cfg.format),
        Command::Partition { p } => cmd_partition(*p, cfg.format),
        Command::Chain { ep, e } => cmd_chain(&parse_characteristic(ep, e)?, cfg.format),
        Command::Derive { ep, e } => cmd_derive(&parse_characteristic(ep, e)?, cfg),
        Command::Verify { ep, e } => cmd_verify(&parse_characteristic(ep, e)?, cfg),
        Command::Suite { samples } => cmd_suite(*samples, cfg),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Input(m) => eprintln!("error: {m}"),
                Failure::Degenerate(m) => eprintln!("degenerate: {m}"),
                Failure::Cap(m) => eprintln!("limit: {m}"),
                Failure::Verification => eprintln!("verification failed"),
            }
            ExitCode::from(f.code())
        }
    }
}
