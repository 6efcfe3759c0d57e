//! Command-line front end. Every subcommand is a thin adapter over the
//! library; values pass through as exact rationals and are only rendered
//! at the very end. Exit codes: 0 success (claims verified), 1 a checked
//! claim is false, 2 usage or input error.

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use phicube_core::bounds::{
    dictator_regime_check, lemma1_check, level1_argmax_scan, p0_bound, verify_small_p_optimality,
    ScanStrategy,
};
use phicube_core::erasure::{phi_report, stab_poly, stab_via_erasure};
use phicube_core::fourier::FourierExpansion;
use phicube_core::mc::{estimate_phi, estimate_sq, McConfig};
use phicube_core::search::{argmax_phi_with, ArgmaxOptions, CandidateFamily};
use phicube_core::symmetry::canonical_form_with;
use phicube_core::{
    rat, BooleanFunction, FunctionSpec, PhiReport, Rational, RationalPoly, SearchReport,
};

#[derive(Parser)]
#[command(
    name = "phicube",
    version,
    about = "Exact analysis of Boolean functions under random erasures",
    long_about = "Computes phi_p(f) = E|f(z)| and related quantities exactly, where z reveals \
                  each input coordinate with probability p and erases it to 0 otherwise. \
                  Includes exhaustive searches, optimality certificates, and a Monte Carlo \
                  cross-check."
)]
struct Cli {
    /// Output format; csv is only available for `curve`
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    out: Format,
    /// Worker threads for search and Monte Carlo (default: all cores, or
    /// the PHICUBE_WORKERS environment variable)
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Significant digits for non-terminating decimals in text and csv
    #[arg(long, global = true, default_value_t = 12)]
    digits: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Recompute the two phi values that separate sgn(x1-3x2+x3-x4+3x5)
    /// from 5-bit majority and verify the strict inequality
    VerifyCounterexample {
        /// Evaluation point (default 2/5; the inequality is only asserted
        /// there)
        #[arg(long)]
        p: Option<String>,
    },
    /// phi_p(f), exactly
    Phi {
        #[arg(long = "fn")]
        spec: String,
        #[arg(long)]
        p: String,
    },
    /// The full polynomial p -> phi_p(f)
    PhiPoly {
        #[arg(long = "fn")]
        spec: String,
    },
    /// E[f(z)^2] at p, exactly
    Stab {
        #[arg(long = "fn")]
        spec: String,
        #[arg(long)]
        p: String,
    },
    /// The noise stability polynomial of f
    StabPoly {
        #[arg(long = "fn")]
        spec: String,
    },
    /// Fourier expansion of f
    Fourier {
        #[arg(long = "fn")]
        spec: String,
    },
    /// Exact argmax of phi_p over a candidate family
    Search {
        #[command(subcommand)]
        family: SearchCmd,
    },
    /// Optimality certificates and threshold bounds
    Bounds {
        #[command(subcommand)]
        check: BoundsCmd,
    },
    /// Monte Carlo estimate of phi_p or E[f(z)^2]
    Mc {
        #[arg(long = "fn")]
        spec: String,
        #[arg(long)]
        p: String,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Quantity to estimate
        #[arg(long, value_enum, default_value_t = McStat::Phi)]
        stat: McStat,
    },
    /// phi along a grid of p values for one or more functions
    Curve {
        /// Repeat for several functions; with exactly two, a difference
        /// column (first minus second) is included
        #[arg(long = "fn", required = true)]
        specs: Vec<String>,
        /// start:end:step, each an exact rational (default 0:1:1/100)
        #[arg(long)]
        grid: Option<String>,
    },
    /// Canonical form of f under coordinate permutations and sign flips
    Canon {
        #[arg(long = "fn")]
        spec: String,
        /// Also allow output negation in the symmetry group
        #[arg(long)]
        negate: bool,
    },
}

#[derive(Subcommand)]
enum SearchCmd {
    /// All odd functions on n bits (n odd, n <= 5)
    Odd {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        p: String,
        #[command(flatten)]
        opts: SearchFlags,
    },
    /// Threshold functions with weights in +-{1..max-weight}^n
    Ltf {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        p: String,
        #[arg(long, default_value_t = 3)]
        max_weight: i64,
        #[command(flatten)]
        opts: SearchFlags,
    },
}

#[derive(Args)]
struct SearchFlags {
    /// Collapse the family and the argmax set to canonical forms
    #[arg(long)]
    dedupe: bool,
    /// Shortlist by float score first, then confirm exactly
    #[arg(long)]
    prefilter: bool,
    /// Emit JSON-lines progress to stderr
    #[arg(long)]
    progress: bool,
    /// Resumable checkpoint file (exact scans only)
    #[arg(long)]
    checkpoint: Option<PathBuf>,
}

#[derive(Subcommand)]
enum BoundsCmd {
    /// |phi_p(f) - p sum|fhat(i)|| against the quadratic error bound
    Lemma1 {
        #[arg(long = "fn")]
        spec: String,
        #[arg(long)]
        p: String,
    },
    /// The level-1 gap delta_n between majority and the runner-up
    Lemma2 {
        #[arg(long)]
        n: u32,
        #[arg(long, value_enum, default_value_t = Strategy::Pointwise)]
        strategy: Strategy,
    },
    /// The threshold p0(n) below which majority is uniquely optimal
    P0 {
        #[arg(long)]
        n: u32,
    },
    /// Verify strict optimality of majority at sample points below p0(n)
    Smallp {
        #[arg(long)]
        n: u32,
        /// Repeat for several samples; each must lie below p0(n)
        #[arg(long = "p", required = true)]
        samples: Vec<String>,
    },
    /// Verify that dictators attain the maximum p for p >= 1/2
    Dictator {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        p: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Strategy {
    /// Enumerate every function on n bits (n <= 3 cheap, n = 5 is 2^32)
    Full,
    /// The direct flip-cost argument at majority
    Pointwise,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum McStat {
    Phi,
    Sq,
}

enum Failure {
    Usage(String),
    Input(phicube_core::Error),
}

impl From<phicube_core::Error> for Failure {
    fn from(e: phicube_core::Error) -> Self {
        Failure::Input(e)
    }
}

type CmdResult = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let workers = cli.workers.or_else(|| {
        std::env::var("PHICUBE_WORKERS")
            .ok()
            .and_then(|v| v.parse().ok())
    });
    if let Some(w) = workers {
        // a failure here means a pool already exists, which is fine
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(w.max(1))
            .build_global();
    }
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Input(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> CmdResult {
    if cli.out == Format::Csv && !matches!(cli.command, Command::Curve { .. }) {
        return Err(Failure::Usage(
            "csv output is only available for `curve`".to_string(),
        ));
    }
    match &cli.command {
        Command::VerifyCounterexample { p } => cmd_verify(cli, p.as_deref()),
        Command::Phi { spec, p } => cmd_phi(cli, spec, Some(p)),
        Command::PhiPoly { spec } => cmd_phi(cli, spec, None),
        Command::Stab { spec, p } => cmd_stab(cli, spec, p),
        Command::StabPoly { spec } => cmd_stab_poly(cli, spec),
        Command::Fourier { spec } => cmd_fourier(cli, spec),
        Command::Search { family } => cmd_search(cli, family),
        Command::Bounds { check } => cmd_bounds(cli, check),
        Command::Mc {
            spec,
            p,
            samples,
            seed,
            stat,
        } => cmd_mc(cli, spec, p, *samples, *seed, *stat),
        Command::Curve { specs, grid } => cmd_curve(cli, specs, grid.as_deref()),
        Command::Canon { spec, negate } => cmd_canon(cli, spec, *negate),
    }
}

fn parse_spec(input: &str) -> Result<(FunctionSpec, BooleanFunction), Failure> {
    let spec = FunctionSpec::parse(input)?;
    let f = spec.to_function()?;
    Ok((spec, f))
}

fn parse_p(input: &str) -> Result<Rational, Failure> {
    Ok(Rational::parse(input)?)
}

fn warn_if_biased(spec: &str, f: &BooleanFunction) {
    if !f.is_unbiased() {
        eprintln!(
            "warning: {spec} is biased (E[f] != 0); optimality statements here \
             concern unbiased functions"
        );
    }
}

fn print_json<T: Serialize>(value: &T) {
    let rendered = serde_json::to_string_pretty(value).expect("reports serialize");
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    checked(writeln!(out, "{rendered}"));
}

/// "= d" when the decimal terminates, "~ d" when rounded.
fn decimal(r: &Rational, digits: usize) -> String {
    let (d, exact) = r.decimal(digits);
    if exact {
        format!("= {d}")
    } else {
        format!("~ {d} (approx)")
    }
}

#[derive(Serialize)]
struct CounterexampleCertificate {
    p: Rational,
    f_spec: String,
    maj_spec: String,
    phi_f: Rational,
    phi_maj: Rational,
    phi_f_decimal: String,
    phi_maj_decimal: String,
    margin: Rational,
    phi_poly_f: RationalPoly,
    phi_poly_maj: RationalPoly,
    polys_match_expected: bool,
    routes_agree: bool,
    f_beats_majority: bool,
    inequality_asserted: bool,
    verified: bool,
}

fn cmd_verify(cli: &Cli, p: Option<&str>) -> CmdResult {
    let default_p = p.is_none();
    let p = match p {
        Some(s) => parse_p(s)?,
        None => rat(2, 5),
    };
    let (f_spec, f) = parse_spec("ltf:1,-3,1,-1,3")?;
    let (maj_spec, maj) = parse_spec("maj:5")?;

    let poly_f = phicube_core::erasure::phi_poly(&f);
    let poly_maj = phicube_core::erasure::phi_poly(&maj);
    let expected_f =
        RationalPoly::from_pairs(&[(0, 1), (7, 4), (-11, 4), (7, 2), (-5, 2), (1, 1)])?;
    let expected_maj =
        RationalPoly::from_pairs(&[(0, 1), (15, 8), (-15, 4), (25, 4), (-45, 8), (9, 4)])?;
    let polys_match_expected = poly_f == expected_f && poly_maj == expected_maj;

    let phi_f = poly_f.eval(&p);
    let phi_maj = poly_maj.eval(&p);
    // independent route: restriction averaging over the truth tables
    let routes_agree = phicube_core::erasure::phi_at(&f, &p)? == phi_f
        && phicube_core::erasure::phi_at(&maj, &p)? == phi_maj;

    let f_beats_majority = phi_f > phi_maj;
    let verified = polys_match_expected && routes_agree && (f_beats_majority || !default_p);

    let cert = CounterexampleCertificate {
        p: p.clone(),
        f_spec: f_spec.to_string(),
        maj_spec: maj_spec.to_string(),
        phi_f_decimal: phi_f.decimal(cli.digits).0,
        phi_maj_decimal: phi_maj.decimal(cli.digits).0,
        margin: &phi_f - &phi_maj,
        phi_f,
        phi_maj,
        phi_poly_f: poly_f,
        phi_poly_maj: poly_maj,
        polys_match_expected,
        routes_agree,
        f_beats_majority,
        inequality_asserted: default_p,
        verified,
    };

    match cli.out {
        Format::Json => print_json(&cert),
        _ => {
            println!(
                "phi_{{{}}}({}) = {} {}",
                cert.p,
                cert.f_spec,
                cert.phi_f,
                decimal(&cert.phi_f, cli.digits)
            );
            println!(
                "phi_{{{}}}({})          = {} {}",
                cert.p,
                cert.maj_spec,
                cert.phi_maj,
                decimal(&cert.phi_maj, cli.digits)
            );
            println!(
                "margin = {} {}",
                cert.margin,
                decimal(&cert.margin, cli.digits)
            );
            println!(
                "phi polynomials match the expected quintics: {}",
                if cert.polys_match_expected { "yes" } else { "NO" }
            );
            println!(
                "table-averaging route agrees with polynomial route: {}",
                if cert.routes_agree { "yes" } else { "NO" }
            );
            if cert.inequality_asserted {
                println!(
                    "verdict: {}",
                    if cert.verified {
                        "counterexample confirmed; the threshold function beats majority at p = 2/5"
                    } else {
                        "FAILED"
                    }
                );
            } else {
                println!(
                    "ordering at p = {}: {}",
                    cert.p,
                    if cert.f_beats_majority {
                        "threshold function ahead"
                    } else if cert.margin.is_zero() {
                        "exact tie"
                    } else {
                        "majority ahead"
                    }
                );
            }
        }
    }
    Ok(if cert.verified { 0 } else { 1 })
}

fn print_phi_report(report: &PhiReport, digits: usize) {
    println!("function: {}  (n = {})", report.spec, report.n);
    println!("phi(p) = {}", report.phi_poly);
    if let (Some(p), Some(value)) = (&report.p, &report.value) {
        println!("phi_{{{}}} = {} {}", p, value, decimal(value, digits));
    }
}

fn cmd_phi(cli: &Cli, spec: &str, p: Option<&str>) -> CmdResult {
    let (spec, f) = parse_spec(spec)?;
    warn_if_biased(&spec.to_string(), &f);
    let p = p.map(parse_p).transpose()?;
    let report = phi_report(&spec, p.as_ref())?;
    match cli.out {
        Format::Json => print_json(&report),
        _ => print_phi_report(&report, cli.digits),
    }
    Ok(0)
}

#[derive(Serialize)]
struct StabReport {
    spec: String,
    n: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    stab_poly: Option<RationalPoly>,
    #[serde(skip_serializing_if = "Option::is_none")]
    p: Option<Rational>,
    #[serde(skip_serializing_if = "Option::is_none")]
    stab_at_p: Option<Rational>,
    #[serde(skip_serializing_if = "Option::is_none")]
    decimal: Option<String>,
}

fn cmd_stab(cli: &Cli, spec: &str, p: &str) -> CmdResult {
    let (spec, f) = parse_spec(spec)?;
    warn_if_biased(&spec.to_string(), &f);
    let p = parse_p(p)?;
    let value = stab_via_erasure(&f, &p)?;
    let report = StabReport {
        spec: spec.to_string(),
        n: f.n(),
        stab_poly: None,
        p: Some(p),
        decimal: Some(value.decimal(cli.digits).0),
        stab_at_p: Some(value),
    };
    match cli.out {
        Format::Json => print_json(&report),
        _ => {
            let value = report.stab_at_p.as_ref().expect("set above");
            println!("function: {}  (n = {})", report.spec, report.n);
            println!(
                "stab_{{{}}} = {} {}",
                report.p.as_ref().expect("set above"),
                value,
                decimal(value, cli.digits)
            );
        }
    }
    Ok(0)
}

fn cmd_stab_poly(cli: &Cli, spec: &str) -> CmdResult {
    let (spec, f) = parse_spec(spec)?;
    let poly = stab_poly(&f);
    let report = StabReport {
        spec: spec.to_string(),
        n: f.n(),
        stab_poly: Some(poly),
        p: None,
        stab_at_p: None,
        decimal: None,
    };
    match cli.out {
        Format::Json => print_json(&report),
        _ => {
            println!("function: {}  (n = {})", report.spec, report.n);
            println!("stab(p) = {}", report.stab_poly.as_ref().expect("set above"));
        }
    }
    Ok(0)
}

fn cmd_fourier(cli: &Cli, spec: &str) -> CmdResult {
    let (spec, f) = parse_spec(spec)?;
    let w = FourierExpansion::from_function(&f);
    match cli.out {
        Format::Json => {
            #[derive(Serialize)]
            struct FourierReport {
                spec: String,
                expansion: FourierExpansion,
            }
            print_json(&FourierReport {
                spec: spec.to_string(),
                expansion: w,
            })
        }
        _ => {
            println!("function: {}  (n = {})", spec, f.n());
            for level in 0..=f.n() {
                let mut groups: BTreeMap<Rational, u32> = BTreeMap::new();
                for mask in 0..f.num_points() {
                    if (mask as u32).count_ones() == level {
                        let c = w.coeff(mask);
                        if !c.is_zero() {
                            *groups.entry(c).or_insert(0) += 1;
                        }
                    }
                }
                if groups.is_empty() {
                    continue;
                }
                let rendered: Vec<String> = groups
                    .iter()
                    .map(|(value, count)| format!("{value} x{count}"))
                    .collect();
                println!("level {level}: {}", rendered.join(", "));
            }
        }
    }
    Ok(0)
}

fn print_search_report(report: &SearchReport, digits: usize) {
    println!("family: {}", report.family);
    println!(
        "best phi_{{{}}} = {} {}",
        report.p,
        report.best_value,
        decimal(&report.best_value, digits)
    );
    println!("argmax ({} maximizer(s) before dedupe):", report.argmax_count);
    for spec in &report.argmax {
        println!("  {spec}");
    }
    if let Some(margin) = &report.margin_over_majority {
        println!("margin over majority = {} {}", margin, decimal(margin, digits));
    }
    println!(
        "scanned {} candidates in {:.3}s{}",
        report.candidates_scanned,
        report.wall_time_secs.unwrap_or(0.0),
        if report.complete { "" } else { " (incomplete)" }
    );
}

fn cmd_search(cli: &Cli, family: &SearchCmd) -> CmdResult {
    let (family, p, flags) = match family {
        SearchCmd::Odd { n, p, opts } => (CandidateFamily::odd_all(*n, opts.dedupe), p, opts),
        SearchCmd::Ltf {
            n,
            p,
            max_weight,
            opts,
        } => (CandidateFamily::ltf(*n, *max_weight, opts.dedupe), p, opts),
    };
    let p = parse_p(p)?;
    let mut options = ArgmaxOptions {
        prefilter: flags.prefilter,
        progress: if flags.progress {
            Some(Box::new(std::io::stderr()))
        } else {
            None
        },
        checkpoint: flags.checkpoint.clone(),
        ..ArgmaxOptions::default()
    };
    let report = argmax_phi_with(&family, &p, &mut options)?;
    match cli.out {
        Format::Json => print_json(&report),
        _ => print_search_report(&report, cli.digits),
    }
    Ok(0)
}

fn cmd_bounds(cli: &Cli, check: &BoundsCmd) -> CmdResult {
    match check {
        BoundsCmd::Lemma1 { spec, p } => {
            let (spec, f) = parse_spec(spec)?;
            let p = parse_p(p)?;
            let cert = lemma1_check(&f, &p)?;
            match cli.out {
                Format::Json => print_json(&cert),
                _ => {
                    println!("function: {}  (n = {})", spec, cert.n);
                    println!(
                        "phi_{{{}}} = {}, level-1 sum = {}",
                        cert.p, cert.phi, cert.level1_sum
                    );
                    println!(
                        "residual |phi - p*sum| = {} {}",
                        cert.residual,
                        decimal(&cert.residual, cli.digits)
                    );
                    println!(
                        "quadratic bound holds: {}",
                        if cert.bound_holds { "yes" } else { "NO" }
                    );
                }
            }
            Ok(if cert.bound_holds { 0 } else { 1 })
        }
        BoundsCmd::Lemma2 { n, strategy } => {
            let strategy = match strategy {
                Strategy::Full => ScanStrategy::Full,
                Strategy::Pointwise => ScanStrategy::Pointwise,
            };
            let report = level1_argmax_scan(*n, strategy)?;
            match cli.out {
                Format::Json => print_json(&report),
                _ => {
                    println!("n = {}, method = {}", report.n, report.method);
                    println!(
                        "max level-1 sum = {} at {}",
                        report.max_level1_sum, report.argmax_spec
                    );
                    println!(
                        "gap to runner-up delta = {} {}",
                        report.delta_n,
                        decimal(&report.delta_n, cli.digits)
                    );
                    println!(
                        "runner-ups: {} function(s), e.g. {}",
                        report.runner_up_count,
                        report
                            .runner_up_specs
                            .first()
                            .map(String::as_str)
                            .unwrap_or("-")
                    );
                }
            }
            Ok(0)
        }
        BoundsCmd::P0 { n } => {
            let p0 = p0_bound(*n)?;
            match cli.out {
                Format::Json => {
                    #[derive(Serialize)]
                    struct P0Report {
                        n: u32,
                        p0: Rational,
                        decimal: String,
                    }
                    print_json(&P0Report {
                        n: *n,
                        decimal: p0.decimal(12).0,
                        p0,
                    });
                }
                _ => println!("p0({}) = {} {}", n, p0, decimal(&p0, cli.digits)),
            }
            Ok(0)
        }
        BoundsCmd::Smallp { n, samples } => {
            let samples: Vec<Rational> = samples
                .iter()
                .map(|s| parse_p(s))
                .collect::<Result<_, _>>()?;
            let report = verify_small_p_optimality(*n, &samples)?;
            match cli.out {
                Format::Json => print_json(&report),
                _ => {
                    println!("n = {}, p0 = {}", report.n, report.p0);
                    let rendered: Vec<String> =
                        report.samples.iter().map(|s| s.to_string()).collect();
                    println!("samples: {}", rendered.join(", "));
                    println!(
                        "majority strictly beats all {} competitors at every sample: {}",
                        report.competitors,
                        if report.all_strict { "yes" } else { "NO" }
                    );
                    println!(
                        "tightest margin {} {} against {} at p = {}",
                        report.min_margin,
                        decimal(&report.min_margin, cli.digits),
                        report.min_margin_spec,
                        report.min_margin_p
                    );
                }
            }
            Ok(if report.all_strict { 0 } else { 1 })
        }
        BoundsCmd::Dictator { n, p } => {
            let p = parse_p(p)?;
            let report = dictator_regime_check(*n, &p)?;
            match cli.out {
                Format::Json => print_json(&report),
                _ => {
                    println!("n = {}, p = {}", report.n, report.p);
                    println!(
                        "max phi over odd functions = {} {}",
                        report.max_phi,
                        decimal(&report.max_phi, cli.digits)
                    );
                    println!("maximizers: {} function(s)", report.argmax_count);
                    println!(
                        "dictators attain the maximum p: {}",
                        if report.dictators_attain { "yes" } else { "NO" }
                    );
                }
            }
            Ok(if report.dictators_attain { 0 } else { 1 })
        }
    }
}

fn cmd_mc(cli: &Cli, spec: &str, p: &str, samples: u64, seed: u64, stat: McStat) -> CmdResult {
    let (spec, f) = parse_spec(spec)?;
    warn_if_biased(&spec.to_string(), &f);
    // decimal p strings become exact rationals first, then one float
    let p = parse_p(p)?.to_f64();
    let config = McConfig::new(p, samples, seed)?;
    let estimate = match stat {
        McStat::Phi => estimate_phi(&f, &config),
        McStat::Sq => estimate_sq(&f, &config),
    };
    match cli.out {
        Format::Json => print_json(&estimate),
        _ => {
            let name = match stat {
                McStat::Phi => "phi",
                McStat::Sq => "E[f(z)^2]",
            };
            println!("function: {}  (n = {})", spec, f.n());
            println!(
                "{name} estimate = {:.9} +- {:.9} (std error, {} samples, seed {}, {})",
                estimate.mean, estimate.std_error, estimate.samples, estimate.seed, estimate.rng
            );
        }
    }
    Ok(0)
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// A consumer closing the pipe (`curve ... | head`) is a normal way to stop.
fn checked(result: std::io::Result<()>) {
    if let Err(e) = result {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        panic!("stdout: {e}");
    }
}

fn parse_grid(input: &str) -> Result<(Rational, Rational, Rational), Failure> {
    let parts: Vec<&str> = input.split(':').collect();
    if parts.len() != 3 {
        return Err(Failure::Usage(format!(
            "grid must be start:end:step, got {input:?}"
        )));
    }
    let start = parse_p(parts[0])?;
    let end = parse_p(parts[1])?;
    let step = Rational::parse(parts[2])?;
    if step <= Rational::zero() {
        return Err(Failure::Usage(format!("grid step must be positive, got {}", parts[2])));
    }
    if end < start {
        return Err(Failure::Usage(format!(
            "grid end {} is below start {}",
            parts[1], parts[0]
        )));
    }
    Ok((start, end, step))
}

fn cmd_curve(cli: &Cli, specs: &[String], grid: Option<&str>) -> CmdResult {
    let (start, end, step) = match grid {
        Some(g) => parse_grid(g)?,
        None => (Rational::zero(), Rational::one(), rat(1, 100)),
    };
    let mut functions = Vec::new();
    for input in specs {
        let (spec, f) = parse_spec(input)?;
        warn_if_biased(&spec.to_string(), &f);
        functions.push((spec.to_string(), phicube_core::erasure::phi_poly(&f)));
    }
    let with_diff = functions.len() == 2;

    let mut rows: Vec<(Rational, Vec<Rational>)> = Vec::new();
    let mut p = start;
    while p <= end {
        let values: Vec<Rational> = functions.iter().map(|(_, poly)| poly.eval(&p)).collect();
        rows.push((p.clone(), values));
        p = &p + &step;
    }

    match cli.out {
        Format::Json => {
            #[derive(Serialize)]
            struct CurveRow {
                p: Rational,
                values: Vec<Rational>,
                #[serde(skip_serializing_if = "Option::is_none")]
                diff: Option<Rational>,
            }
            #[derive(Serialize)]
            struct CurveReport {
                functions: Vec<String>,
                rows: Vec<CurveRow>,
            }
            let report = CurveReport {
                functions: functions.iter().map(|(s, _)| s.clone()).collect(),
                rows: rows
                    .into_iter()
                    .map(|(p, values)| CurveRow {
                        diff: with_diff.then(|| &values[0] - &values[1]),
                        p,
                        values,
                    })
                    .collect(),
            };
            print_json(&report);
        }
        Format::Csv => {
            let stdout = std::io::stdout();
            let mut out = stdout.lock();
            let mut header: Vec<String> = vec!["p".to_string()];
            for (spec, _) in &functions {
                header.push(csv_field(&format!("phi({spec})")));
            }
            if with_diff {
                header.push("diff".to_string());
            }
            checked(writeln!(out, "{}", header.join(",")));
            for (p, values) in &rows {
                let mut cells = vec![p.decimal(cli.digits).0];
                for v in values {
                    cells.push(v.decimal(cli.digits).0);
                }
                if with_diff {
                    cells.push((&values[0] - &values[1]).decimal(cli.digits).0);
                }
                checked(writeln!(out, "{}", cells.join(",")));
            }
        }
        Format::Text => {
            let stdout = std::io::stdout();
            let mut out = stdout.lock();
            for (spec, _) in &functions {
                checked(writeln!(out, "function: {spec}"));
            }
            for (p, values) in &rows {
                let rendered: Vec<String> = values
                    .iter()
                    .map(|v| v.decimal(cli.digits).0)
                    .collect();
                if with_diff {
                    let d = &values[0] - &values[1];
                    checked(writeln!(
                        out,
                        "p = {p}: {}  diff {}",
                        rendered.join("  "),
                        d.decimal(cli.digits).0
                    ));
                } else {
                    checked(writeln!(out, "p = {p}: {}", rendered.join("  ")));
                }
            }
        }
    }
    Ok(0)
}

fn cmd_canon(cli: &Cli, spec: &str, negate: bool) -> CmdResult {
    let (spec, f) = parse_spec(spec)?;
    let canon = canonical_form_with(&f, negate)?;
    let canon_spec = FunctionSpec::from_function(&canon).to_string();
    let is_self = canon.table() == f.table();
    match cli.out {
        Format::Json => {
            #[derive(Serialize)]
            struct CanonReport {
                input: String,
                canonical: String,
                self_canonical: bool,
                output_negation_allowed: bool,
            }
            print_json(&CanonReport {
                input: spec.to_string(),
                canonical: canon_spec,
                self_canonical: is_self,
                output_negation_allowed: negate,
            });
        }
        _ => {
            println!("input:     {spec}");
            println!("canonical: {canon_spec}");
            println!(
                "the input {} its class representative",
                if is_self { "is" } else { "is not" }
            );
        }
    }
    Ok(0)
}
