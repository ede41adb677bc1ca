//! Command-line front end; the binary only forwards to [`main_entry`].

use std::ffi::OsString;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::arith::{box_tuples, ArithFn};
use crate::asymptotics::density::{density_report, DensityPredicate};
use crate::asymptotics::mean::{mean_value_dirichlet, mean_value_unitary, MEAN_VALUE_DEGREE};
use crate::asymptotics::perfect::search_perfect_tuples;
use crate::asymptotics::tables::{partial_sum_table, table_csv, TableTarget};
use crate::convolute::{convolute, ConvoluteKind};
use crate::convolution::{convolve, ConvolutionKind};
use crate::error::{Error, Result};
use crate::expr::{BuildContext, Expr};
use crate::identities::{verify_identity, verify_pair, VerifyReport};
use crate::series::bell::{bell_series, BellDump};
use crate::series::euler::{dirichlet_partial_sum, euler_product, format_float, EulerConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Plain,
}

fn parse_count(s: &str) -> std::result::Result<u64, String> {
    if let Ok(v) = s.parse::<u64>() {
        return Ok(v);
    }
    let v: f64 = s.parse().map_err(|_| format!("not a count: {s}"))?;
    if v < 1.0 || v.fract() != 0.0 || v > 1e15 {
        return Err(format!("not a positive integer: {s}"));
    }
    Ok(v as u64)
}

/// Flags shared by every subcommand.
#[derive(Debug, Clone, Args)]
pub struct GlobalOpts {
    /// Box side B for exhaustive checks, tables and empirical counts.
    #[arg(short = 'B', long = "box", global = true, value_parser = parse_count)]
    pub box_side: Option<u64>,
    /// Prime cutoff P of Euler products (accepts 1e6).
    #[arg(short = 'P', long = "primes", global = true, value_parser = parse_count, default_value = "100000")]
    pub primes: u64,
    /// Local degree cutoff D of Euler factors.
    #[arg(long, global = true)]
    pub degree: Option<u32>,
    /// Significant decimal digits of real arithmetic.
    #[arg(long, global = true, default_value_t = 50)]
    pub precision: u32,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Number of variables r.
    #[arg(short = 'r', global = true)]
    pub r: Option<usize>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Exact value of an expression at a tuple; the tuple length sets the arity.
    Eval { expr: String, #[arg(required = true)] args: Vec<u64> },
    /// A named identity, or equality of two expressions, on [1,B]^r.
    Verify { target: String, other: Option<String> },
    /// Value (or table over the box) of f <kind> g.
    Convolve { kind: String, f: String, g: String, args: Vec<u64> },
    /// Value (or table for n <= B) of the convolute Psi_kind(f), f of r variables.
    Convolute { kind: String, f: String, args: Vec<u64> },
    /// Truncated Bell series at a prime.
    Bell {
        expr: String,
        #[arg(short = 'p', long = "prime", default_value_t = 2)]
        p: u64,
    },
    /// Euler product of the multiple Dirichlet series at real z.
    Dirichlet {
        expr: String,
        #[arg(long, value_delimiter = ',', required = true)]
        z: Vec<f64>,
        /// Also sum directly over [1,N]^r.
        #[arg(long, value_parser = parse_count)]
        partial: Option<u64>,
    },
    /// Analytic density against the exact count on [1,B]^r.
    Density { predicate: String },
    /// Mean value by its Euler product.
    MeanValue {
        expr: String,
        /// Unitary (Wintner-type) kernel instead of the Dirichlet one.
        #[arg(long)]
        unitary: bool,
    },
    /// Exact partial sums against main terms, as CSV by default.
    Table {
        target: String,
        #[arg(long, value_delimiter = ',', value_parser = parse_count)]
        xs: Vec<u64>,
    },
    /// Perfect r-tuples in [1,B]^r, nondecreasing representatives.
    SearchPerfect,
}

#[derive(Debug, Clone, Parser)]
#[command(name = "mularith", version, about = "Arithmetic functions of several variables")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

/// Resolved configuration of one run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RunConfig {
    pub digits: u32,
    pub primes: u64,
    pub degree: Option<u32>,
    pub box_side: Option<u64>,
    pub format: Option<Format>,
    pub threads: Option<usize>,
}

impl RunConfig {
    pub fn from_opts(g: &GlobalOpts) -> Result<RunConfig> {
        if g.precision == 0 || g.primes == 0 || g.degree == Some(0) || g.threads == Some(0) || g.box_side == Some(0) || g.r == Some(0) {
            return Err(Error::NonPositive("flags must be positive".into()));
        }
        Ok(RunConfig { digits: g.precision, primes: g.primes, degree: g.degree, box_side: g.box_side, format: g.format, threads: g.threads })
    }

    pub fn euler(&self, default_degree: u32) -> EulerConfig {
        EulerConfig { primes: self.primes, degree: self.degree.unwrap_or(default_degree), digits: self.digits, ..EulerConfig::default() }
    }

    fn box_or(&self, default: u64) -> u64 {
        self.box_side.unwrap_or(default)
    }

    fn format_or(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }
}

/// Output text and exit status.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub code: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Outcome {
        Outcome { stdout, code: 0 }
    }
}

fn json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

fn ctx(cfg: &RunConfig) -> BuildContext {
    BuildContext { inverse_box: cfg.box_or(12) }
}

fn build_at(src: &str, r: Option<usize>, fallback: usize, cfg: &RunConfig) -> Result<ArithFn> {
    let e = Expr::parse(src)?;
    let arity = r.or_else(|| e.natural_arity()).unwrap_or(fallback);
    e.build(arity, &ctx(cfg))
}

#[derive(Serialize)]
struct ValueOut<'a> {
    expr: &'a str,
    args: &'a [u64],
    value: String,
}

fn values(label: &str, f: &ArithFn, points: Vec<Vec<u64>>, fmt: Format) -> Result<String> {
    let rows: Vec<(Vec<u64>, String)> = points.into_iter().map(|t| { let v = f.eval(&t)?; Ok((t, v.to_string())) }).collect::<Result<_>>()?;
    Ok(match fmt {
        Format::Plain => rows.iter().map(|(t, v)| if rows.len() == 1 { format!("{v}\n") } else { format!("{t:?}\t{v}\n") }).collect(),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let r = f.arity();
            let mut head: Vec<String> = (1..=r).map(|i| format!("n{i}")).collect();
            head.push("value".into());
            w.write_record(&head).map_err(|e| Error::InvalidArgument(e.to_string()))?;
            for (t, v) in &rows {
                let mut rec: Vec<String> = t.iter().map(u64::to_string).collect();
                rec.push(v.clone());
                w.write_record(&rec).map_err(|e| Error::InvalidArgument(e.to_string()))?;
            }
            String::from_utf8(w.into_inner().map_err(|e| Error::InvalidArgument(e.to_string()))?).expect("utf-8")
        }
        Format::Json => {
            let out: Vec<ValueOut> = rows.iter().map(|(t, v)| ValueOut { expr: label, args: t, value: v.clone() }).collect();
            if out.len() == 1 { json(&out[0]) } else { json(&out) }
        }
    })
}

fn verify_text(rep: &VerifyReport, fmt: Format) -> String {
    match fmt {
        Format::Plain => match &rep.counterexample {
            None => format!("pass: {} ({} checks, box {})\n", rep.identity, rep.checks, rep.bound),
            Some(c) => format!("fail: {} [{}] at {:?}: {} != {}\n", rep.identity, c.check, c.args, c.lhs, c.rhs),
        },
        _ => json(rep),
    }
}

/// Runs one parsed command.
pub fn execute(cli: &Cli) -> Result<Outcome> {
    let cfg = RunConfig::from_opts(&cli.global)?;
    if let Some(n) = cfg.threads {
        // a second global pool in the same process keeps the first
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let r = cli.global.r;
    match &cli.command {
        Command::Eval { expr, args } => {
            let f = Expr::parse(expr)?.build(args.len(), &ctx(&cfg))?;
            Ok(Outcome::ok(values(expr, &f, vec![args.clone()], cfg.format_or(Format::Json))?))
        }
        Command::Verify { target, other } => {
            let bound = cfg.box_or(20);
            let rep = match other {
                None => verify_identity(target, r.unwrap_or(2), bound)?,
                Some(rhs) => {
                    let (a, b) = (Expr::parse(target)?, Expr::parse(rhs)?);
                    let arity = r.or_else(|| a.natural_arity()).or_else(|| b.natural_arity()).unwrap_or(1);
                    verify_pair(&a.build(arity, &ctx(&cfg))?, &b.build(arity, &ctx(&cfg))?, bound)?
                }
            };
            Ok(Outcome { code: if rep.pass { 0 } else { 1 }, stdout: verify_text(&rep, cfg.format_or(Format::Json)) })
        }
        Command::Convolve { kind, f, g, args } => {
            let kind = ConvolutionKind::from_name(kind).ok_or_else(|| Error::InvalidArgument(format!("unknown convolution {kind}")))?;
            let (ef, eg) = (Expr::parse(f)?, Expr::parse(g)?);
            let arity = if args.is_empty() { r.or_else(|| ef.natural_arity()).or_else(|| eg.natural_arity()).unwrap_or(2) } else { args.len() };
            let h = convolve(kind, &ef.build(arity, &ctx(&cfg))?, &eg.build(arity, &ctx(&cfg))?)?;
            let points = if args.is_empty() { box_tuples(arity, cfg.box_or(6)) } else { vec![args.clone()] };
            Ok(Outcome::ok(values(&format!("{}({f}, {g})", kind.name()), &h, points, cfg.format_or(Format::Json))?))
        }
        Command::Convolute { kind, f, args } => {
            let k = ConvoluteKind::from_name(kind).ok_or_else(|| Error::InvalidArgument(format!("unknown convolute {kind}")))?;
            let inner = build_at(f, r, 2, &cfg)?;
            let h = convolute(k, &inner)?;
            let points = if args.is_empty() { (1..=cfg.box_or(20)).map(|n| vec![n]).collect() } else { args.iter().map(|&n| vec![n]).collect() };
            Ok(Outcome::ok(values(&format!("psi_{kind}({f})"), &h, points, cfg.format_or(Format::Json))?))
        }
        Command::Bell { expr, p } => {
            let f = build_at(expr, r, 1, &cfg)?;
            let b = bell_series(&f, *p, cfg.degree.unwrap_or(6))?;
            Ok(Outcome::ok(match cfg.format_or(Format::Json) {
                Format::Plain | Format::Csv => b.to_string(),
                Format::Json => json(&BellDump::from(&b)),
            }))
        }
        Command::Dirichlet { expr, z, partial } => {
            let f = Expr::parse(expr)?.build(z.len(), &ctx(&cfg))?;
            let res = euler_product(&f, z, &cfg.euler(EulerConfig::default().degree))?;
            let text = match partial {
                None => json(&res),
                Some(n) => {
                    #[derive(Serialize)]
                    struct Both<'a> {
                        euler: &'a crate::series::euler::EulerProductResult,
                        partial_sum: String,
                        partial_cutoff: u64,
                    }
                    let s = dirichlet_partial_sum(&f, z, *n, cfg.digits)?;
                    json(&Both { euler: &res, partial_sum: format_float(&s, cfg.digits), partial_cutoff: *n })
                }
            };
            Ok(Outcome::ok(text))
        }
        Command::Density { predicate } => {
            let pred = DensityPredicate::from_name(predicate)?;
            let rep = density_report(pred, r.unwrap_or(2), cfg.box_or(300), &cfg.euler(EulerConfig::default().degree))?;
            Ok(Outcome::ok(match cfg.format_or(Format::Json) {
                Format::Plain => format!(
                    "{} r={}: analytic {} empirical {} (B={}) gap {:.3e}\n",
                    pred.name(),
                    rep.r,
                    format_float(&rep.analytic.value, 15),
                    crate::asymptotics::density::rational_to_f64(&rep.empirical),
                    rep.box_side,
                    rep.gap
                ),
                _ => json(&rep),
            }))
        }
        Command::MeanValue { expr, unitary } => {
            let f = build_at(expr, r, 2, &cfg)?;
            let ec = cfg.euler(MEAN_VALUE_DEGREE);
            let res = if *unitary { mean_value_unitary(&f, &ec)? } else { mean_value_dirichlet(&f, &ec)? };
            Ok(Outcome::ok(match cfg.format_or(Format::Json) {
                Format::Plain => format!("{}\n", format_float(&res.value, cfg.digits)),
                _ => json(&res),
            }))
        }
        Command::Table { target, xs } => {
            let t = TableTarget::parse(target, r.unwrap_or(3) as u32)?;
            let xs = if xs.is_empty() { default_xs(t) } else { xs.clone() };
            let rows = partial_sum_table(t, &xs)?;
            Ok(Outcome::ok(match cfg.format_or(Format::Csv) {
                Format::Json => json(&rows),
                Format::Plain => rows.iter().map(|row| format!("{}\t{:.6}\n", row.x, row.ratio())).collect(),
                Format::Csv => table_csv(&rows)?,
            }))
        }
        Command::SearchPerfect => {
            let hits = search_perfect_tuples(r.unwrap_or(1), cfg.box_or(100))?;
            Ok(Outcome::ok(match cfg.format_or(Format::Json) {
                Format::Plain | Format::Csv => hits.iter().map(|t| format!("{t:?}\n")).collect(),
                Format::Json => json(&hits),
            }))
        }
    }
}

/// Default abscissae per target: decades for pair sums, the acceptance grids otherwise.
pub fn default_xs(t: TableTarget) -> Vec<u64> {
    match t {
        TableTarget::GcdR(_) => vec![75, 150, 300],
        TableTarget::G2 => vec![25_000, 50_000, 100_000],
        TableTarget::S2 | TableTarget::C2 => vec![750, 1500, 3000],
        _ => vec![50, 500, 5000],
    }
}

/// Exit status for a library error: 3 for divergence, 2 otherwise.
pub fn error_code(e: &Error) -> i32 {
    match e {
        Error::Divergent(_) => 3,
        _ => 2,
    }
}

/// Parses `args` (program name first), runs, prints, and returns the exit status.
pub fn main_entry<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(out) => {
            print!("{}", out.stdout);
            out.code
        }
        Err(e) => {
            eprintln!("error: {e}");
            error_code(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> Result<Outcome> {
        let mut full = vec!["mularith"];
        full.extend_from_slice(args);
        execute(&Cli::try_parse_from(full).expect("parses"))
    }

    #[test]
    fn eval_examples() {
        assert_eq!(run(&["eval", "sigma_r", "3", "3", "--format", "plain"]).unwrap().stdout, "6\n");
        assert_eq!(run(&["eval", "dir(one, one)", "4", "6", "--format", "plain"]).unwrap().stdout, "12\n");
        assert!(run(&["eval", "delta", "1", "1"]).unwrap().stdout.contains("\"value\": \"1\""));
    }

    #[test]
    fn verify_codes() {
        assert_eq!(run(&["verify", "lcm-via-dirichlet", "--box", "8"]).unwrap().code, 0);
        let bad = run(&["verify", "tau", "sigma", "--box", "10"]).unwrap();
        assert_eq!(bad.code, 1);
        assert!(bad.stdout.contains("\"args\": [\n      2\n    ]"));
        assert!(matches!(run(&["verify", "nope"]), Err(Error::UnknownIdentity(_))));
    }

    #[test]
    fn counts_accept_scientific() {
        assert_eq!(parse_count("1e6"), Ok(1_000_000));
        assert_eq!(parse_count("2000"), Ok(2000));
        assert!(parse_count("1.5").is_err());
    }

    #[test]
    fn divergence_code() {
        let e = run(&["dirichlet", "one", "--z", "1", "-P", "1000"]).unwrap_err();
        assert_eq!(error_code(&e), 3);
    }
}
