#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod output;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use kdist::approx::{self, Metric};
use kdist::checks::{self, CheckOptions, Suite};
use kdist::dist::GRAMMAR;
use kdist::sampling::{self, Representation};
use kdist::{Dist64, Distribution, Error};

use output::{num, opt_num, Format, Meta, Sink};

const EXIT_OK: u8 = 0;
const EXIT_USAGE: u8 = 1;
const EXIT_PARTIAL: u8 = 2;
const EXIT_AMBIGUOUS: u8 = 3;
const EXIT_CHECK_FAILED: u8 = 4;

/// Bessel-distribution toolkit: evaluation, quantile tables, λ fits, sampling, self-checks.
#[derive(Debug, Parser)]
#[command(name = "kdist", version, after_help = GRAMMAR_HELP)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

const GRAMMAR_HELP: &str = "Distribution specs: family:key=value[,key=value...]\n  \
    bessel:sigma=S | laplace:s=S | laplace:lambda=L[,sigma=S][,theta=T] | martinmaas:s=S\n  \
    gal:sigma=S,tau=T | laplacemean:n=N,s=S | normal:sigma=S     (values may be sqrt(x))";

#[derive(Debug, Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write to this file instead of standard output.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Function {
    Pdf,
    Cdf,
    Sf,
    Quantile,
    Chf,
    Mgf,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate pdf, cdf, sf, quantile, ch.f. or m.g.f. at a list of points.
    Eval {
        #[arg(long, value_parser = parse_dist)]
        dist: Dist64,
        #[arg(long = "fn", value_enum)]
        function: Function,
        /// Comma-separated values, or start:stop:count for an inclusive linear grid.
        #[arg(long, allow_hyphen_values = true, value_parser = parse_points)]
        points: Points,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// One-sided critical values (1 − α quantiles) with deviations from a reference law.
    Table {
        /// Tail probabilities; defaults to 0.5,0.317,0.1,0.05,0.01.
        #[arg(long, value_delimiter = ',')]
        alphas: Option<Vec<f64>>,
        /// A column law; repeat for several. Defaults to the Bessel/Laplace/Martin–Maas set.
        #[arg(long = "column", value_parser = parse_dist)]
        columns: Vec<Dist64>,
        /// Index of the reference column for the percent deviations.
        #[arg(long, default_value_t = 0)]
        reference: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Fit λ of CL(0, σ/λ) to K(σ) by minimizing a distance.
    Fit {
        #[arg(long, value_parser = parse_metric)]
        metric: Metric,
        #[arg(long, default_value_t = 1.0)]
        sigma: f64,
        /// Search bracket lo,hi for λ.
        #[arg(long, value_parser = parse_pair, default_value = "1.0,2.5")]
        bracket: (f64, f64),
        #[command(flatten)]
        out: OutputArgs,
    },
    /// KS or Wasserstein distance between two laws.
    Distance {
        #[arg(long, value_parser = parse_metric)]
        metric: Metric,
        #[arg(long = "dist", value_parser = parse_dist, num_args = 1, required = true)]
        dists: Vec<Dist64>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Points where two densities cross.
    Crossings {
        #[arg(long = "dist", value_parser = parse_dist, required = true)]
        dists: Vec<Dist64>,
        /// Search interval lo,hi.
        #[arg(long, value_parser = parse_pair, allow_hyphen_values = true, default_value = "0,10")]
        domain: (f64, f64),
        #[arg(long, default_value_t = 10_000)]
        grid: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Seeded sample through one of the representations of a law.
    Sample {
        #[arg(long, value_parser = parse_dist)]
        dist: Dist64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        seed: u64,
        /// product, chi_mixture, difference, normal_mixture, gamma_mixture, direct_sum,
        /// gamma_difference, square, inverse_cdf or divisible:a=<a>; defaults per family.
        #[arg(long, value_parser = parse_representation)]
        representation: Option<Representation>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Run the oracle-parity and sampling self-check suites.
    Check {
        #[arg(long, value_parser = parse_suite, default_value = "all")]
        suite: Suite,
        /// Relative error injected into K0, to demonstrate that the suites catch it.
        #[arg(long, hide = true, default_value_t = 0.0)]
        perturb_k0: f64,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Debug, Clone)]
struct Points(Vec<f64>);

fn parse_dist(s: &str) -> Result<Dist64, String> {
    s.parse::<Dist64>().map_err(|e| match e {
        Error::Parse { ref detail, .. } if detail.contains("grammar") || detail.contains("expected") => e.to_string(),
        _ => format!("{e}; grammar: {GRAMMAR}"),
    })
}

fn parse_metric(s: &str) -> Result<Metric, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_representation(s: &str) -> Result<Representation, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_pair(s: &str) -> Result<(f64, f64), String> {
    let bad = || format!("expected lo,hi with lo < hi, got {s:?}");
    let (a, b) = s.split_once(',').ok_or_else(bad)?;
    let lo: f64 = a.trim().parse().map_err(|_| bad())?;
    let hi: f64 = b.trim().parse().map_err(|_| bad())?;
    if !(lo < hi) {
        return Err(bad());
    }
    Ok((lo, hi))
}

fn parse_points(s: &str) -> Result<Points, String> {
    let bad = |what: &str| format!("invalid points {s:?}: {what}; use a,b,c or start:stop:count");
    if s.contains(':') {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(bad("a range needs exactly start:stop:count"));
        }
        let a: f64 = parts[0].trim().parse().map_err(|_| bad("bad start"))?;
        let b: f64 = parts[1].trim().parse().map_err(|_| bad("bad stop"))?;
        let n: usize = parts[2].trim().parse().map_err(|_| bad("bad count"))?;
        if n == 0 {
            return Err(bad("count must be >= 1"));
        }
        if n == 1 {
            return Ok(Points(vec![a]));
        }
        return Ok(Points((0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()));
    }
    s.split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|_| bad("not a number")))
        .collect::<Result<Vec<_>, _>>()
        .map(Points)
}

fn command_line() -> String {
    let mut parts = vec!["kdist".to_string()];
    parts.extend(std::env::args().skip(1));
    parts.join(" ")
}

#[derive(Debug, Serialize)]
struct EvalRow {
    x: f64,
    value: Option<f64>,
    error: Option<String>,
}

#[derive(Debug, Serialize)]
struct EvalData {
    dist: Dist64,
    function: Function,
    rows: Vec<EvalRow>,
}

#[derive(Debug, Serialize)]
struct DistanceData {
    metric: Metric,
    d1: Dist64,
    d2: Dist64,
    distance: f64,
}

#[derive(Debug, Serialize)]
struct CrossingsData {
    d1: Dist64,
    d2: Dist64,
    domain: (f64, f64),
    crossings: Vec<f64>,
}

#[derive(Debug, Serialize)]
struct CheckData {
    passed: bool,
    checks: Vec<checks::CheckOutcome>,
}

fn evaluate(d: &Dist64, f: Function, x: f64) -> kdist::Result<f64> {
    match f {
        Function::Pdf => d.pdf(x),
        Function::Cdf => d.cdf(x),
        Function::Sf => d.sf(x),
        Function::Quantile => d.quantile(x),
        Function::Chf => d.chf(x),
        Function::Mgf => d.mgf(x),
    }
}

fn run(cli: Cli) -> kdist::Result<u8> {
    let cmd = command_line();
    match cli.command {
        Command::Eval { dist, function, points, out } => {
            let rows: Vec<EvalRow> = points
                .0
                .iter()
                .map(|&x| match evaluate(&dist, function, x) {
                    Ok(v) => EvalRow { x, value: Some(v), error: None },
                    Err(e) => EvalRow { x, value: None, error: Some(e.to_string()) },
                })
                .collect();
            let partial = rows.iter().any(|r| r.error.is_some());
            for r in rows.iter().filter(|r| r.error.is_some()) {
                eprintln!("kdist: x = {}: {}", r.x, r.error.as_deref().unwrap_or(""));
            }
            let data = EvalData { dist, function, rows };
            let meta = Meta::new(cmd, vec![]);
            let sink = Sink::open(out.output.as_ref())?;
            match out.format {
                Format::Json => sink.json(&meta, &data)?,
                Format::Csv => sink.csv(&meta, |w| {
                    let mut wtr = csv::Writer::from_writer(w);
                    wtr.write_record(["x", "value", "error"])?;
                    for r in &data.rows {
                        wtr.write_record([num(r.x), opt_num(r.value), r.error.clone().unwrap_or_default()])?;
                    }
                    wtr.flush()?;
                    Ok(())
                })?,
            }
            Ok(if partial { EXIT_PARTIAL } else { EXIT_OK })
        }
        Command::Table { alphas, columns, reference, out } => {
            let alphas = alphas.unwrap_or_else(|| approx::DEFAULT_ALPHAS.to_vec());
            let columns = if columns.is_empty() { approx::default_columns() } else { columns };
            let table = approx::quantile_table(&alphas, &columns, reference)?;
            emit(out, Meta::new(cmd, vec![]), &table, |w| table.write_csv(w))?;
            Ok(EXIT_OK)
        }
        Command::Fit { metric, sigma, bracket, out } => {
            let fit = approx::fit_lambda(sigma, metric, bracket)?;
            emit(out, Meta::new(cmd, vec![]), &fit, |w| {
                let mut wtr = csv::Writer::from_writer(w);
                wtr.write_record([
                    "lambda_star",
                    "distance_star",
                    "metric",
                    "sigma",
                    "iterations",
                    "bracket_lo",
                    "bracket_hi",
                ])?;
                wtr.write_record([
                    num(fit.lambda_star),
                    num(fit.distance_star),
                    fit.metric.to_string(),
                    num(fit.sigma),
                    fit.iterations.to_string(),
                    num(fit.bracket.0),
                    num(fit.bracket.1),
                ])?;
                wtr.flush()?;
                Ok(())
            })?;
            Ok(EXIT_OK)
        }
        Command::Distance { metric, dists, out } => {
            let [d1, d2] = two(dists)?;
            let distance = metric.distance(&d1, &d2)?;
            let data = DistanceData { metric, d1, d2, distance };
            emit(out, Meta::new(cmd, vec![]), &data, |w| {
                let mut wtr = csv::Writer::from_writer(w);
                wtr.write_record(["metric", "d1", "d2", "distance"])?;
                wtr.write_record([metric.to_string(), d1.to_string(), d2.to_string(), num(distance)])?;
                wtr.flush()?;
                Ok(())
            })?;
            Ok(EXIT_OK)
        }
        Command::Crossings { dists, domain, grid, out } => {
            let [d1, d2] = two(dists)?;
            let crossings = approx::pdf_crossings_with(&d1, &d2, domain, grid)?;
            let data = CrossingsData { d1, d2, domain, crossings };
            emit(out, Meta::new(cmd, vec![]), &data, |w| {
                let mut wtr = csv::Writer::from_writer(w);
                wtr.write_record(["crossing"])?;
                for c in &data.crossings {
                    wtr.write_record([num(*c)])?;
                }
                wtr.flush()?;
                Ok(())
            })?;
            Ok(EXIT_OK)
        }
        Command::Sample { dist, n, seed, representation, out } => {
            let r = representation.unwrap_or_else(|| Representation::default_for(&dist));
            let batch = sampling::sample(&dist, r, n, seed)?;
            emit(out, Meta::new(cmd, vec![seed]), &batch, |w| batch.write_csv(w))?;
            Ok(EXIT_OK)
        }
        Command::Check { suite, perturb_k0, out } => {
            let opts = CheckOptions { k0_perturbation: perturb_k0 };
            let outcomes = checks::run(suite, &opts);
            let passed = outcomes.iter().all(|o| o.passed);
            for o in outcomes.iter().filter(|o| !o.passed) {
                eprintln!("kdist: check failed: {} ({})", o.name, o.detail);
            }
            let data = CheckData { passed, checks: outcomes };
            emit(out, Meta::new(cmd, vec![]), &data, |w| {
                let mut wtr = csv::Writer::from_writer(w);
                wtr.write_record(["suite", "name", "passed", "observed", "tolerance", "detail"])?;
                for o in &data.checks {
                    wtr.write_record([
                        o.suite.to_string(),
                        o.name.clone(),
                        o.passed.to_string(),
                        num(o.observed),
                        num(o.tolerance),
                        o.detail.clone(),
                    ])?;
                }
                wtr.flush()?;
                Ok(())
            })?;
            Ok(if passed { EXIT_OK } else { EXIT_CHECK_FAILED })
        }
    }
}

fn two(dists: Vec<Dist64>) -> kdist::Result<[Dist64; 2]> {
    <[Dist64; 2]>::try_from(dists).map_err(|v| Error::Parse {
        input: format!("{} --dist arguments", v.len()),
        detail: "exactly two --dist arguments are required".into(),
    })
}

fn emit<T, F>(out: OutputArgs, meta: Meta, data: &T, csv_body: F) -> kdist::Result<()>
where
    T: Serialize,
    F: FnOnce(&mut dyn Write) -> kdist::Result<()>,
{
    let sink = Sink::open(out.output.as_ref())?;
    match out.format {
        Format::Json => sink.json(&meta, data),
        Format::Csv => sink.csv(&meta, csv_body),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { EXIT_OK });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("kdist: {e}");
            ExitCode::from(match e {
                Error::Ambiguous { .. } => EXIT_AMBIGUOUS,
                _ => EXIT_USAGE,
            })
        }
    }
}
