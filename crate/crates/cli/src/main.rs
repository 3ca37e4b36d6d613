//! `tmprod`: evaluate and verify Thue-Morse products from the command line.

mod report;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use tmprod_core::{
    allouche_cohen_series, builtin_catalog, catalog_json, dirichlet_s, emit_plot_grid, eval_f,
    eval_h, find_identity, h0_four_ways, truncated_h, verify_identity, write_plot_csv, Error,
    EvalConfig, EvalMethod, SeriesVariant, ValueWithError,
};

use report::RunReport;

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_DOMAIN: u8 = 3;

#[derive(Parser)]
#[command(name = "tmprod", version, about = "Certified Thue-Morse infinite products")]
struct Cli {
    /// Print a JSON report instead of a table.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Direct,
    Blocked,
    Series,
}

impl From<Method> for EvalMethod {
    fn from(m: Method) -> Self {
        match m {
            Method::Direct => EvalMethod::Direct,
            Method::Blocked => EvalMethod::Blocked,
            Method::Series => EvalMethod::Series,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Variant {
    /// sum_{n>=2} u_n / (n+a)^k
    S,
    /// sum_{n>=0} u_n / (n+1)^k
    Shifted,
    /// sum_{n>=1} u_n / n^k
    Plain,
}

#[derive(clap::Args)]
struct EvalArgs {
    #[arg(long, default_value_t = 1e-10)]
    eps: f64,
    #[arg(long, value_enum, default_value = "blocked")]
    method: Method,
    #[arg(long, default_value_t = 3)]
    level: u32,
}

#[derive(Subcommand)]
enum Command {
    /// f(b, c) = prod_{n>=1} ((n+b)/(n+c))^{u_n}
    #[command(allow_negative_numbers = true)]
    EvalF {
        #[arg(long)]
        b: f64,
        #[arg(long)]
        c: f64,
        #[command(flatten)]
        eval: EvalArgs,
    },
    /// h(x) = prod_{n>=1} ((2n+x)/(2n+1+x))^{u_n}
    #[command(allow_negative_numbers = true)]
    EvalH {
        #[arg(long)]
        x: f64,
        #[command(flatten)]
        eval: EvalArgs,
    },
    /// Check closed-form identities from the catalog.
    Verify {
        #[arg(long, conflicts_with = "name", required_unless_present = "name")]
        all: bool,
        #[arg(long)]
        name: Option<String>,
        #[arg(long, default_value_t = 1e-8)]
        eps: f64,
    },
    /// Grid of h truncated after `trunc` factors, as CSV.
    #[command(allow_negative_numbers = true)]
    PlotH {
        #[arg(long, default_value_t = -1.5)]
        min: f64,
        #[arg(long, default_value_t = 4.0)]
        max: f64,
        #[arg(long, default_value_t = 0.01)]
        step: f64,
        #[arg(long, default_value_t = 100)]
        trunc: u64,
        /// Write the CSV here; without it the CSV goes to stdout and the report to stderr.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// h(0) by four independent series, checked against direct evaluation.
    H0 {
        #[arg(long, default_value_t = 1e-10)]
        eps: f64,
    },
    /// Thue-Morse Dirichlet sums.
    #[command(allow_negative_numbers = true)]
    Dirichlet {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        k: u32,
        #[arg(long, default_value_t = 0.0)]
        a: f64,
        #[arg(long, value_enum, default_value = "s")]
        variant: Variant,
        #[arg(long, default_value_t = 1e-12)]
        eps: f64,
    },
    /// Print the identity catalog as JSON.
    Catalog,
}

enum Failure {
    Usage(String),
    Library(Error),
    Io(io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Config(msg) => Failure::Usage(msg),
            other => Failure::Library(other),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

fn max_blocks() -> Result<Option<u64>, Failure> {
    match std::env::var("TMPROD_MAX_BLOCKS") {
        Ok(s) => s
            .trim()
            .parse::<u64>()
            .ok()
            .filter(|&n| n > 0)
            .map(Some)
            .ok_or_else(|| Failure::Usage(format!("TMPROD_MAX_BLOCKS={s:?} is not a positive integer"))),
        Err(_) => Ok(None),
    }
}

fn config(eval: &EvalArgs) -> Result<EvalConfig, Failure> {
    let mut cfg = EvalConfig {
        method: eval.method.into(),
        level: eval.level,
        target_eps: eval.eps,
        ..EvalConfig::default()
    };
    if let Some(cap) = max_blocks()? {
        cfg.n_max = cfg.n_max.min(cap);
    }
    cfg.validate()?;
    Ok(cfg)
}

fn echo_eval(report: &mut RunReport, eval: &EvalArgs) {
    report.real("eps", eval.eps);
    report.input("method", EvalMethod::from(eval.method));
    report.input("level", eval.level);
}

fn warn_budget(v: &ValueWithError, eps: f64) {
    if v.budget_exceeded {
        eprintln!("warning: block budget exhausted; error bound is above the requested {eps:e}");
    }
}

fn agree(a: &ValueWithError, b: &ValueWithError) -> bool {
    (a.value - b.value).abs() <= a.abs_error + b.abs_error
}

/// Builds the report; plot-h also writes its CSV along the way.
fn run(command: Command) -> Result<RunReport, Failure> {
    let report = match command {
        Command::EvalF { b, c, eval } => {
            let mut r = RunReport::new("eval-f");
            r.real("b", b).real("c", c);
            echo_eval(&mut r, &eval);
            let v = eval_f(b, c, &config(&eval)?)?;
            warn_budget(&v, eval.eps);
            r.push("f(b,c)", &v);
            r
        }
        Command::EvalH { x, eval } => {
            let mut r = RunReport::new("eval-h");
            r.real("x", x);
            echo_eval(&mut r, &eval);
            let v = eval_h(x, &config(&eval)?)?;
            warn_budget(&v, eval.eps);
            r.push("h(x)", &v);
            r
        }
        Command::Verify { all, name, eps } => {
            let mut r = RunReport::new("verify");
            r.real("eps", eps);
            let ids = if all {
                r.input("all", true);
                builtin_catalog()
            } else {
                let name = name.expect("clap requires --all or --name");
                r.input("name", &name);
                match find_identity(&name) {
                    Some(id) => vec![id],
                    None => return Err(Failure::Usage(format!("no identity named {name:?}"))),
                }
            };
            if !(eps.is_finite() && eps > 0.0) {
                return Err(Failure::Usage(format!("--eps must be positive, got {eps}")));
            }
            let mut pass = true;
            for id in &ids {
                let rep = verify_identity(id, eps);
                pass &= rep.pass;
                let v = rep.computed.unwrap_or_else(|| ValueWithError::with_error(f64::NAN, f64::INFINITY));
                r.push(format!("{} [{}]", id.name, if rep.pass { "pass" } else { "fail" }), &v);
                r.push(format!("{} target", id.name), &ValueWithError::exact(rep.target_value));
            }
            r.pass = Some(pass);
            r
        }
        Command::PlotH { min, max, step, trunc, out } => {
            let mut r = RunReport::new("plot-h");
            r.real("min", min).real("max", max).real("step", step).input("trunc", trunc);
            if let Some(path) = &out {
                r.input("out", path.display());
            }
            let rows = emit_plot_grid(min, max, step, trunc)?;
            match &out {
                Some(path) => {
                    let mut w = BufWriter::new(File::create(path)?);
                    write_plot_csv(&rows, &mut w)?;
                    w.flush()?;
                }
                None => {
                    let stdout = io::stdout();
                    let mut w = BufWriter::new(stdout.lock());
                    write_plot_csv(&rows, &mut w)?;
                    w.flush()?;
                }
            }
            r.push("rows", &ValueWithError::exact(rows.len() as f64));
            // the tail after `trunc` changes log h by at most 2 |log(1 - 1/(2 trunc + 3 + x))|
            let bracket = |x: f64| -2.0 * (-1.0 / (2.0 * trunc as f64 + 3.0 + x)).ln_1p();
            for x in [0.5, 1.0] {
                if x >= min && x <= max {
                    let v = truncated_h(x, trunc)?;
                    let mut row = ValueWithError::with_error(v, v * bracket(x).exp_m1());
                    row.certified = true;
                    r.push(format!("h_trunc({x})"), &row);
                }
            }
            r.pass = Some(rows.iter().all(|row| {
                let s = bracket(row.x).exp();
                row.h * s > 1.0 && row.h / s < ((row.x + 3.0) / (row.x + 2.0)).powi(2)
            }));
            r
        }
        Command::H0 { eps } => {
            let mut r = RunReport::new("h0");
            r.real("eps", eps);
            let routes = h0_four_ways(eps)?;
            let direct = eval_h(0.0, &EvalConfig::with_eps(eps))?;
            let labels = ["series about 1", "series about 0 at 1", "odd-index series", "even-index series"];
            for (label, v) in labels.iter().zip(&routes) {
                r.push(*label, v);
            }
            r.push("eval_h(0)", &direct);
            let pairwise = routes.iter().all(|a| routes.iter().all(|b| agree(a, b)));
            r.pass = Some(pairwise && routes.iter().all(|a| agree(a, &direct)));
            r
        }
        Command::Dirichlet { k, a, variant, eps } => {
            let mut r = RunReport::new("dirichlet");
            r.input("k", k).real("a", a);
            let v = match variant {
                Variant::S => {
                    r.input("variant", "s");
                    dirichlet_s(k, a, eps)?
                }
                Variant::Shifted | Variant::Plain => {
                    let v = if matches!(variant, Variant::Shifted) {
                        SeriesVariant::Shifted
                    } else {
                        SeriesVariant::Plain
                    };
                    r.input("variant", v);
                    if a != 0.0 {
                        return Err(Failure::Usage(format!("--a applies only to variant s, got {a}")));
                    }
                    allouche_cohen_series(v, k, eps)?
                }
            };
            r.real("eps", eps);
            r.push(format!("k={k}"), &v);
            r
        }
        Command::Catalog => unreachable!("handled before dispatch"),
    };
    Ok(report)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    if let Command::Catalog = cli.command {
        return match writeln!(io::stdout().lock(), "{}", catalog_json()) {
            Err(e) if e.kind() != io::ErrorKind::BrokenPipe => {
                eprintln!("error: {e}");
                ExitCode::from(EXIT_DOMAIN)
            }
            _ => ExitCode::SUCCESS,
        };
    }
    // plot-h without --out owns stdout for the CSV
    let report_to_stderr = matches!(cli.command, Command::PlotH { out: None, .. });
    let started = Instant::now();
    let mut report = match run(cli.command) {
        Ok(r) => r,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(EXIT_USAGE);
        }
        Err(Failure::Library(e)) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_DOMAIN);
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_DOMAIN);
        }
    };
    report.elapsed_ms = started.elapsed().as_millis() as u64;
    let written = if report_to_stderr {
        emit(&report, cli.json, io::stderr().lock())
    } else {
        emit(&report, cli.json, io::stdout().lock())
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(EXIT_DOMAIN);
    }
    match report.pass {
        Some(false) => ExitCode::from(EXIT_FAIL),
        _ => ExitCode::SUCCESS,
    }
}

fn emit(report: &RunReport, json: bool, out: impl Write) -> io::Result<()> {
    if json {
        report.write_json(out)
    } else {
        report.write_table(out)
    }
}
