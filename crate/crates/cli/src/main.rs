//! `palindrome-lab`: command-line front end over the core library.

mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::{Serialize, Serializer};

use palindrome_lab::census::{
    equidistribution_discrepancy, q_fixed_length, q_star_direct, q_star_mobius, q_star_record, s_b, s_b_cost,
};
use palindrome_lab::digits::to_digits;
use palindrome_lab::enumerate::{stream_fixed_length, stream_up_to};
use palindrome_lab::expsum::{
    additive_character, check_identity, count_critical_points, k2_full, k2_q_average, poisson_check,
};
use palindrome_lab::harness::acceptance::{run_all, DEFAULT_SEED};
use palindrome_lab::harness::{asymptotic_report, cartesian_grid, fit_prop1, fit_prop2_prop3, fit_vdc, power_grid};
use palindrome_lab::oscillate::random::{first_derivative_specs, second_derivative_specs};
use palindrome_lab::oscillate::{
    check_first_derivative_bound, check_second_derivative_bound, fit_nonstationary_family, fourier_transform,
    linear_phase_family, SmoothBump, Triangle,
};
use palindrome_lab::report::round_sig12;
use palindrome_lab::{AcceptanceOptions, Base, BoundFit, CensusRecord, CompactFunction, ExpSumParams, SbStrategy};

use output::{emit, render, Format};

#[derive(Debug, Parser)]
#[command(name = "palindrome-lab", version, about = "Square-free palindromes and the exponential sums behind them")]
struct Cli {
    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Worker threads (defaults to the number of CPUs).
    #[arg(long, global = true, env = "PALINDROME_LAB_THREADS", value_parser = clap::value_parser!(u32).range(1..))]
    threads: Option<u32>,
    /// Seed for every randomized family.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List palindromes, one per line.
    Enumerate(EnumerateArgs),
    /// Square-free census with the Möbius cross-check.
    Census(CensusArgs),
    /// Count palindromes with a square divisor d², d in [D, 2D].
    Sbd(SbdArgs),
    /// Evaluate a quadratic Kloosterman sum.
    K2(K2Args),
    /// Compare both sides of twisted Poisson summation.
    Poisson(PoissonArgs),
    /// Oscillatory integral bounds and Fourier transforms.
    Oscillate(OscillateArgs),
    /// Smoothed Weyl–van der Corput inequality over the test families.
    Vdc(VdcArgs),
    /// Residue-class discrepancy modulo square moduli.
    Discrepancy(DiscrepancyArgs),
    /// Run the acceptance suite; exits 0 iff every criterion passes.
    VerifyAll(VerifyArgs),
}

fn parse_base(s: &str) -> Result<Base, String> {
    let b: u32 = s.parse().map_err(|e| format!("{e}"))?;
    Base::new(b).map_err(|e| e.to_string())
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("scope").required(true).args(["max", "digits"])))]
struct EnumerateArgs {
    #[arg(long, value_parser = parse_base)]
    base: Base,
    /// All palindromes up to this bound.
    #[arg(long)]
    max: Option<u128>,
    /// All palindromes with exactly this many digits.
    #[arg(long)]
    digits: Option<u32>,
    /// Keep only n with gcd(n, b³ - b) = 1.
    #[arg(long)]
    restricted: bool,
    /// Add a column with the base-b digits.
    #[arg(long)]
    render: bool,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("scope").required(true).args(["max", "digits"])))]
struct CensusArgs {
    #[arg(long, value_parser = parse_base)]
    base: Base,
    /// Restricted census up to each bound (comma separated).
    #[arg(long, value_delimiter = ',')]
    max: Vec<u128>,
    /// Unrestricted census over palindromes of this length.
    #[arg(long)]
    digits: Option<u32>,
    /// Append unrestricted rows for every length up to log_b(max).
    #[arg(long, requires = "max")]
    table: bool,
    #[arg(long, hide = true)]
    inject_fault: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FitKind {
    None,
    Prop1,
    Prop23,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("dyadic").required(true).args(["d", "d_power"])))]
struct SbdArgs {
    #[arg(long, value_parser = parse_base)]
    base: Base,
    /// Bounds x (comma separated).
    #[arg(long, value_delimiter = ',', required = true)]
    max: Vec<u128>,
    /// Dyadic starts D (comma separated).
    #[arg(long, value_delimiter = ',')]
    d: Vec<u128>,
    /// D = ⌈x^(p/q)⌉ for each x, given as p/q.
    #[arg(long)]
    d_power: Option<String>,
    #[arg(long, value_enum, default_value_t = StrategyArg::Auto)]
    strategy: StrategyArg,
    /// Fit the constant of a bound shape instead of listing counts.
    #[arg(long, value_enum, default_value_t = FitKind::None)]
    fit: FitKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StrategyArg {
    Scan,
    Multiples,
    Auto,
}

impl From<StrategyArg> for SbStrategy {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::Scan => SbStrategy::Scan,
            StrategyArg::Multiples => SbStrategy::Multiples,
            StrategyArg::Auto => SbStrategy::Auto,
        }
    }
}

#[derive(Debug, Args)]
struct K2Args {
    #[arg(long, allow_hyphen_values = true, default_value_t = 0)]
    a1: i64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0)]
    a2: i64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0)]
    a3: i64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0)]
    q: i64,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    c: u64,
    /// Also evaluate through the stationary phase identity.
    #[arg(long)]
    check_identity: bool,
    /// Report Σ_{|q| <= Q} |K₂(a1, a2, -a2, q; c)| for this Q instead.
    #[arg(long)]
    average: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FunctionArg {
    Triangle,
    Psi,
    Phi,
}

impl FunctionArg {
    fn function(self) -> Box<dyn CompactFunction> {
        match self {
            FunctionArg::Triangle => Box::new(Triangle),
            FunctionArg::Psi => Box::new(SmoothBump::psi()),
            FunctionArg::Phi => Box::new(SmoothBump::phi()),
        }
    }
}

#[derive(Debug, Args)]
struct PoissonArgs {
    #[arg(long, value_enum)]
    demo: FunctionArg,
    /// Period of the weight g(n) = e(h·n/q).
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    q: u64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 1)]
    h: i64,
    /// Target for the truncated tail of the dual sum.
    #[arg(long, default_value_t = 1e-10)]
    tolerance: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OscCheck {
    /// Randomized first-derivative bound 4M/m.
    First,
    /// Randomized second-derivative bound 8KM/√r.
    Second,
    /// Non-stationary decay over the linear-phase family.
    Decay,
    /// Fourier transform of a test function.
    Transform,
}

#[derive(Debug, Args)]
struct OscillateArgs {
    #[arg(long, value_enum)]
    check: OscCheck,
    /// Specs per randomized family.
    #[arg(long, default_value_t = 100)]
    count: usize,
    /// Integration-by-parts order for the decay check.
    #[arg(long, default_value_t = 2)]
    order: u32,
    /// Phase slopes for the decay check.
    #[arg(long, value_delimiter = ',', default_value = "10,30,100,300,1000")]
    lambdas: Vec<f64>,
    #[arg(long, value_enum, default_value_t = FunctionArg::Psi)]
    function: FunctionArg,
    /// Frequencies for the transform.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "0,1,2,4,8,16")]
    k: Vec<f64>,
}

#[derive(Debug, Args)]
struct VdcArgs {
    /// Dyadic scales D (comma separated).
    #[arg(long, value_delimiter = ',', default_value = "100,400,1600")]
    d: Vec<u64>,
}

#[derive(Debug, Args)]
struct DiscrepancyArgs {
    #[arg(long, value_parser = parse_base)]
    base: Base,
    #[arg(long)]
    max: u128,
    #[arg(long)]
    d_max: u128,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Shorter residue-solver sweep.
    #[arg(long)]
    quick: bool,
}

/// A finished report and, if a check failed, what failed.
struct Report {
    bytes: Vec<u8>,
    failure: Option<String>,
}

impl Report {
    fn ok(bytes: Vec<u8>) -> Self {
        Report { bytes, failure: None }
    }

    fn checked(bytes: Vec<u8>, failures: Vec<String>) -> Self {
        let failure = if failures.is_empty() { None } else { Some(failures.join("; ")) };
        Report { bytes, failure }
    }
}

fn sig12<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
    palindrome_lab::report::sig12(v, s)
}

fn opt_sig12<S: Serializer>(v: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(x) => s.serialize_some(&round_sig12(*x)),
        None => s.serialize_none(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            if let Err(e) = emit(&report.bytes, cli.output.as_deref()) {
                eprintln!("error: {e:#}");
                return ExitCode::from(1);
            }
            match report.failure {
                None => ExitCode::SUCCESS,
                Some(f) => {
                    eprintln!("check failed: {f}");
                    ExitCode::from(1)
                }
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: &Cli) -> Result<Report> {
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(t) = cli.threads {
        pool = pool.num_threads(t as usize);
    }
    let pool = pool.build().context("building the worker pool")?;
    pool.install(|| match &cli.command {
        Command::Enumerate(a) => cmd_enumerate(a, cli.format),
        Command::Census(a) => cmd_census(a, cli.format),
        Command::Sbd(a) => cmd_sbd(a, cli.format),
        Command::K2(a) => cmd_k2(a, cli.format),
        Command::Poisson(a) => cmd_poisson(a, cli.format),
        Command::Oscillate(a) => cmd_oscillate(a, cli.format, cli.seed),
        Command::Vdc(a) => cmd_vdc(a, cli.format, cli.seed),
        Command::Discrepancy(a) => cmd_discrepancy(a, cli.format),
        Command::VerifyAll(a) => cmd_verify_all(a, cli.format, cli.seed),
    })
}

#[derive(Serialize)]
struct PalindromeRow {
    n: u128,
    #[serde(skip_serializing_if = "Option::is_none")]
    digits: Option<String>,
}

fn cmd_enumerate(a: &EnumerateArgs, format: Format) -> Result<Report> {
    let stream = match (a.max, a.digits) {
        (Some(x), None) => stream_up_to(a.base, x, a.restricted)?,
        (None, Some(n)) => stream_fixed_length(a.base, n, a.restricted)?,
        _ => unreachable!("clap enforces exactly one scope"),
    };
    let rows: Vec<PalindromeRow> =
        stream.map(|n| PalindromeRow { n, digits: a.render.then(|| to_digits(n, a.base).render()) }).collect();
    let bytes = match format {
        // bare lines, no header
        Format::Csv => {
            let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
            for r in &rows {
                w.serialize(r)?;
            }
            w.into_inner().map_err(|e| anyhow!("flushing CSV output: {e}"))?
        }
        Format::Json => render(&rows, format)?,
    };
    Ok(Report::ok(bytes))
}

fn cmd_census(a: &CensusArgs, format: Format) -> Result<Report> {
    let mut rows: Vec<CensusRecord> = Vec::new();
    let mut failures = Vec::new();
    for &x in &a.max {
        let direct = q_star_direct(a.base, x)?;
        let mut mobius = q_star_mobius(a.base, x)?;
        if a.inject_fault {
            mobius += 1;
        }
        if direct != mobius {
            failures.push(format!("Möbius identity at b={} x={x}: direct {direct} != mobius {mobius}", a.base));
        }
        if !a.table {
            rows.push(q_star_record(a.base, x)?);
        }
    }
    if a.table {
        let report = asymptotic_report(a.base, &a.max)?;
        if report.aborted {
            eprintln!("note: palindrome budget reached, table is partial");
        }
        rows.extend(report.records);
    }
    if let Some(n) = a.digits {
        rows.push(q_fixed_length(a.base, n)?);
    }
    Ok(Report::checked(render(&rows, format)?, failures))
}

#[derive(Serialize)]
struct SbdRow {
    base: u32,
    x: u128,
    d: u128,
    strategy: &'static str,
    count: u128,
    scan_probes: u128,
    multiples_probes: u128,
}

#[derive(Serialize)]
struct FitRow<'a> {
    label: &'a str,
    base: u32,
    x: u128,
    d: u128,
    count: u128,
    #[serde(serialize_with = "sig12")]
    shape: f64,
    #[serde(serialize_with = "sig12")]
    ratio: f64,
    strategies_agree: bool,
    #[serde(serialize_with = "sig12")]
    fitted_constant: f64,
    stable: bool,
    #[serde(serialize_with = "sig12")]
    growth: f64,
    aborted: bool,
}

fn fit_rows(fit: &BoundFit) -> Vec<FitRow<'_>> {
    fit.points
        .iter()
        .map(|p| FitRow {
            label: &fit.label,
            base: fit.base,
            x: p.x,
            d: p.d,
            count: p.count,
            shape: p.shape,
            ratio: p.ratio,
            strategies_agree: p.strategies_agree,
            fitted_constant: fit.fitted_constant,
            stable: fit.stable,
            growth: fit.growth,
            aborted: fit.aborted,
        })
        .collect()
}

fn parse_ratio(s: &str) -> Result<(u32, u32)> {
    let (p, q) = s.split_once('/').ok_or_else(|| anyhow!("expected p/q, got {s:?}"))?;
    let (p, q): (u32, u32) = (p.trim().parse()?, q.trim().parse()?);
    if p == 0 || q == 0 {
        bail!("p/q must have positive parts, got {s:?}");
    }
    Ok((p, q))
}

fn cmd_sbd(a: &SbdArgs, format: Format) -> Result<Report> {
    let grid = match &a.d_power {
        Some(r) => {
            let (p, q) = parse_ratio(r)?;
            power_grid(&a.max, p, q)
        }
        None => cartesian_grid(&a.max, &a.d),
    };
    let fits = match a.fit {
        FitKind::None => {
            let mut rows = Vec::with_capacity(grid.len());
            for &(x, d) in &grid {
                let (scan_probes, multiples_probes) = s_b_cost(a.base, x, d);
                let strategy = match a.strategy {
                    StrategyArg::Scan => "scan",
                    StrategyArg::Multiples => "multiples",
                    StrategyArg::Auto if scan_probes <= multiples_probes => "scan",
                    StrategyArg::Auto => "multiples",
                };
                let count = s_b(a.base, x, d, a.strategy.into())?;
                rows.push(SbdRow { base: a.base.get(), x, d, strategy, count, scan_probes, multiples_probes });
            }
            return Ok(Report::ok(render(&rows, format)?));
        }
        FitKind::Prop1 => vec![fit_prop1(a.base, &grid)?],
        FitKind::Prop23 => {
            let (second, third) = fit_prop2_prop3(a.base, &grid)?;
            vec![second, third]
        }
    };
    let mut failures = Vec::new();
    for fit in &fits {
        for note in &fit.notes {
            eprintln!("note: {}: {note}", fit.label);
        }
        if !fit.strategies_agree() {
            failures.push(format!("{}: scan and multiples strategies disagree", fit.label));
        }
    }
    let rows: Vec<FitRow> = fits.iter().flat_map(fit_rows).collect();
    Ok(Report::checked(render(&rows, format)?, failures))
}

#[derive(Serialize)]
struct K2Row {
    a1: i64,
    a2: i64,
    a3: i64,
    q: i64,
    c: u64,
    #[serde(serialize_with = "sig12")]
    re: f64,
    #[serde(serialize_with = "sig12")]
    im: f64,
    #[serde(serialize_with = "sig12")]
    abs: f64,
    critical_points: Option<u64>,
    #[serde(serialize_with = "opt_sig12")]
    stationary_re: Option<f64>,
    #[serde(serialize_with = "opt_sig12")]
    stationary_im: Option<f64>,
    #[serde(serialize_with = "opt_sig12")]
    diff: Option<f64>,
}

#[derive(Serialize)]
struct K2AverageRow {
    m: i64,
    a: i64,
    big_q: u64,
    c: u64,
    #[serde(serialize_with = "sig12")]
    sum: f64,
}

fn cmd_k2(a: &K2Args, format: Format) -> Result<Report> {
    if let Some(big_q) = a.average {
        let sum = k2_q_average(a.a1, a.a2, big_q, a.c)?;
        let row = K2AverageRow { m: a.a1, a: a.a2, big_q, c: a.c, sum };
        return Ok(Report::ok(render(&[row], format)?));
    }
    let p = ExpSumParams::new(a.a1, a.a2, a.a3, a.q, a.c)?;
    let value = k2_full(&p);
    let critical_points = if a.c >= 2 { Some(count_critical_points(&p)?) } else { None };
    let mut row = K2Row {
        a1: p.a1,
        a2: p.a2,
        a3: p.a3,
        q: p.q,
        c: p.c,
        re: value.re,
        im: value.im,
        abs: value.norm(),
        critical_points,
        stationary_re: None,
        stationary_im: None,
        diff: None,
    };
    let mut failures = Vec::new();
    if a.check_identity {
        if a.c < 2 {
            bail!("--check-identity needs c >= 2");
        }
        let r = check_identity(&p)?;
        row.stationary_re = Some(r.stationary.re);
        row.stationary_im = Some(r.stationary.im);
        row.diff = Some(r.diff);
        if !r.ok {
            failures.push(format!("stationary phase identity: diff {} >= {}", r.diff, r.tolerance));
        }
    }
    Ok(Report::checked(render(&[row], format)?, failures))
}

#[derive(Serialize)]
struct PoissonRow {
    function: String,
    q: u64,
    h: i64,
    #[serde(serialize_with = "sig12")]
    lhs_re: f64,
    #[serde(serialize_with = "sig12")]
    lhs_im: f64,
    #[serde(serialize_with = "sig12")]
    rhs_re: f64,
    #[serde(serialize_with = "sig12")]
    rhs_im: f64,
    #[serde(serialize_with = "sig12")]
    diff: f64,
    m_cut: u64,
    decay_order: u32,
    #[serde(serialize_with = "sig12")]
    tail_bound: f64,
    tail_within_tolerance: bool,
}

/// Agreement required of the two sides.
const POISSON_ACCEPT: f64 = 1e-8;

fn cmd_poisson(a: &PoissonArgs, format: Format) -> Result<Report> {
    let f = a.demo.function();
    let g = additive_character(a.h, a.q);
    let r = poisson_check(f.as_ref(), &g, a.tolerance)?;
    let name = format!("{:?}", a.demo).to_lowercase();
    if !r.tail_within_tolerance {
        eprintln!("note: tail bound {:e} exceeds the tolerance at M = {}", r.tail_bound, r.m_cut);
    }
    let failures = if r.diff < POISSON_ACCEPT {
        Vec::new()
    } else {
        vec![format!("|LHS - RHS| = {:e} >= {POISSON_ACCEPT:e}", r.diff)]
    };
    let row = PoissonRow {
        function: name,
        q: r.q,
        h: a.h,
        lhs_re: r.lhs.re,
        lhs_im: r.lhs.im,
        rhs_re: r.rhs.re,
        rhs_im: r.rhs.im,
        diff: r.diff,
        m_cut: r.m_cut,
        decay_order: r.decay_order,
        tail_bound: r.tail_bound,
        tail_within_tolerance: r.tail_within_tolerance,
    };
    Ok(Report::checked(render(&[row], format)?, failures))
}

#[derive(Serialize)]
struct TransformRow {
    function: String,
    #[serde(serialize_with = "sig12")]
    k: f64,
    #[serde(serialize_with = "sig12")]
    re: f64,
    #[serde(serialize_with = "sig12")]
    im: f64,
    #[serde(serialize_with = "sig12")]
    abs: f64,
}

fn cmd_oscillate(a: &OscillateArgs, format: Format, seed: u64) -> Result<Report> {
    use rayon::prelude::*;
    match a.check {
        OscCheck::First => {
            let specs = first_derivative_specs(seed, a.count);
            let rows =
                specs.par_iter().map(|(s, m)| check_first_derivative_bound(s, *m)).collect::<Result<Vec<_>, _>>()?;
            let failures =
                rows.iter().filter(|r| !r.holds).map(|r| format!("{} violates {}", r.label, r.bound)).collect();
            Ok(Report::checked(render(&rows, format)?, failures))
        }
        OscCheck::Second => {
            let specs = second_derivative_specs(seed, a.count);
            let rows = specs
                .par_iter()
                .map(|(s, r, k)| check_second_derivative_bound(s, *r, *k))
                .collect::<Result<Vec<_>, _>>()?;
            let failures =
                rows.iter().filter(|r| !r.holds).map(|r| format!("{} violates {}", r.label, r.bound)).collect();
            Ok(Report::checked(render(&rows, format)?, failures))
        }
        OscCheck::Decay => {
            let fit = fit_nonstationary_family(&linear_phase_family(&a.lambdas), a.order)?;
            let failures = if fit.bounded {
                Vec::new()
            } else {
                vec![format!("decay ratio grows along the family (constant {})", fit.fitted_constant)]
            };
            Ok(Report::checked(render(&fit.reports, format)?, failures))
        }
        OscCheck::Transform => {
            let f = a.function.function();
            let name = format!("{:?}", a.function).to_lowercase();
            let rows =
                a.k.iter()
                    .map(|&k| {
                        let v: Complex64 = fourier_transform(f.as_ref(), k)?;
                        Ok(TransformRow { function: name.clone(), k, re: v.re, im: v.im, abs: v.norm() })
                    })
                    .collect::<Result<Vec<_>>>()?;
            Ok(Report::ok(render(&rows, format)?))
        }
    }
}

fn cmd_vdc(a: &VdcArgs, format: Format, seed: u64) -> Result<Report> {
    let fit = fit_vdc(&a.d, seed)?;
    let failures =
        if fit.within_envelope { Vec::new() } else { vec![format!("fitted constant {} exceeds 4", fit.constant)] };
    Ok(Report::checked(render(&fit.reports, format)?, failures))
}

#[derive(Serialize)]
struct DiscrepancyRow {
    base: u32,
    x: u128,
    d_max: u128,
    #[serde(serialize_with = "sig12")]
    discrepancy: f64,
}

fn cmd_discrepancy(a: &DiscrepancyArgs, format: Format) -> Result<Report> {
    let discrepancy = equidistribution_discrepancy(a.base, a.max, a.d_max)?;
    let row = DiscrepancyRow { base: a.base.get(), x: a.max, d_max: a.d_max, discrepancy };
    Ok(Report::ok(render(&[row], format)?))
}

fn cmd_verify_all(a: &VerifyArgs, format: Format, seed: u64) -> Result<Report> {
    let outcomes = run_all(&AcceptanceOptions { quick: a.quick, seed });
    let failures = outcomes
        .iter()
        .filter(|o| !o.passed)
        .map(|o| format!("criterion {} ({}): {}", o.id, o.name, o.detail))
        .collect();
    Ok(Report::checked(render(&outcomes, format)?, failures))
}
