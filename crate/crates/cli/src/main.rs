use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_rational::BigRational;

use cherednik_core::field::parse_rational;
use cherednik_core::isotypic::{a_power_table, isotypic_table};
use cherednik_core::{
    expr, gr_comparison, run_suite, BoundMode, Character, DimensionTable, Error, Field,
    GrComparison, GrOptions, Param, RatFunc, Side, SuiteOptions,
};

#[derive(Parser)]
#[command(name = "cherednik", version, about = "Exact computations with type-A rational Cherednik algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Parse an operator expression and print its normal form.
    Eval {
        #[arg(long, value_parser = rank)]
        n: usize,
        #[arg(long)]
        expr: String,
        /// Apply the operator to this function.
        #[arg(long)]
        apply: Option<String>,
        /// Specialize the parameter, written as p/q.
        #[arg(long, value_parser = rational)]
        c: Option<BigRational>,
    },
    /// Print the principal symbol, and the spherical scalar symbol when defined.
    Symbol {
        #[arg(long, value_parser = rank)]
        n: usize,
        #[arg(long)]
        expr: String,
    },
    /// Dimensions of an isotypic component, or of A^m when --m is given.
    Hilbert {
        #[arg(long, value_parser = rank)]
        n: usize,
        #[arg(long)]
        isotype: Character,
        #[arg(long)]
        m: Option<u32>,
        #[arg(long, value_parser = degree_pair)]
        maxdeg: (u32, u32),
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Compare the associated graded of a shift bimodule with its predicted target.
    Grtable {
        #[arg(long, value_parser = rank)]
        n: usize,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        side: Side,
        #[arg(long, value_parser = degree_pair)]
        maxdeg: (u32, u32),
        #[arg(long, default_value_t = 2)]
        slack: u32,
        #[arg(long, value_parser = rational)]
        c: Option<BigRational>,
        /// Bound each factor separately instead of the whole product.
        #[arg(long)]
        factorwise: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run a named verification suite.
    Verify {
        #[arg(long)]
        suite: String,
        #[arg(long, value_parser = rank)]
        n: usize,
        /// Write the JSON report here.
        #[arg(long)]
        json: Option<PathBuf>,
        #[arg(long, value_parser = rational)]
        c: Option<BigRational>,
        #[arg(long)]
        m: Option<u32>,
    },
}

fn rank(s: &str) -> Result<usize, String> {
    let n: usize = s.parse().map_err(|_| format!("not a rank: {s}"))?;
    if n < 2 {
        return Err("n must be at least 2".into());
    }
    Ok(n)
}

fn rational(s: &str) -> Result<BigRational, String> {
    parse_rational(s).ok_or_else(|| format!("expected p/q, got {s:?}"))
}

fn degree_pair(s: &str) -> Result<(u32, u32), String> {
    let (a, b) = s.split_once(',').ok_or("expected DX,DY")?;
    let parse = |t: &str| t.trim().parse::<u32>().map_err(|_| format!("bad degree {t:?}"));
    Ok((parse(a)?, parse(b)?))
}

enum Failure {
    Checks,
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn emit(text: &str, output: Option<&PathBuf>) -> Result<(), Failure> {
    match output {
        Some(path) => fs::write(path, text)?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            if !text.ends_with('\n') {
                out.write_all(b"\n")?;
            }
        }
    }
    Ok(())
}

fn table_text(t: &DimensionTable, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(t).expect("table serializes"),
        Format::Csv => {
            let mut s = String::from("i,j,dim\n");
            for ((i, j), d) in &t.entries {
                s += &format!("{i},{j},{d}\n");
            }
            s
        }
        Format::Text => {
            let mut s = format!("{} (n = {})\n", t.space, t.n);
            for ((i, j), d) in &t.entries {
                s += &format!("({i},{j}) -> {d}\n");
            }
            s
        }
    }
}

fn comparison_text(cmp: &GrComparison, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(cmp).expect("comparison serializes"),
        Format::Csv => {
            let mut s = String::from("i,j,span,target,status\n");
            for r in &cmp.rows {
                s += &format!("{},{},{},{},{}\n", r.i, r.j, r.span_dim, r.target_dim, status_name(r));
            }
            s
        }
        Format::Text => {
            let mut s = format!(
                "gr of {} (n = {}, m = {}, c = {}, bounds {},{}, slack {})\n",
                cmp.side, cmp.n, cmp.m, cmp.param, cmp.dx, cmp.dy, cmp.slack
            );
            for r in &cmp.rows {
                s += &format!(
                    "({},{}) span {} target {} {}{}\n",
                    r.i,
                    r.j,
                    r.span_dim,
                    r.target_dim,
                    status_name(r),
                    if r.trusted { "" } else { " (outside trusted region)" }
                );
            }
            s += &format!(
                "overflows {}, trusted deficits {}, {}\n",
                cmp.overflows(),
                cmp.trusted_deficits(),
                if cmp.passes() { "PASS" } else { "FAIL" }
            );
            s
        }
    }
}

fn status_name(r: &cherednik_core::GrRow) -> String {
    serde_json::to_value(r.status)
        .ok()
        .and_then(|v| v.as_str().map(str::to_string))
        .unwrap_or_default()
}

fn run_grtable<K: Field>(opts: GrOptions<K>, format: Format, output: Option<&PathBuf>) -> Result<(), Failure> {
    eprintln!(
        "computing gr of {} for n = {}, m = {}, bounds {},{}",
        opts.side, opts.n, opts.m, opts.dx, opts.dy
    );
    let cmp = gr_comparison(&opts)?;
    for r in &cmp.rows {
        eprintln!("bidegree ({},{}): span {} target {}", r.i, r.j, r.span_dim, r.target_dim);
    }
    emit(&comparison_text(&cmp, format), output)?;
    if cmp.passes() {
        Ok(())
    } else {
        Err(Failure::Checks)
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Eval { n, expr: src, apply, c } => {
            let mut op = expr::parse_operator(&src, n)?;
            if let Some(r) = &c {
                op = op.specialize_c(r)?;
            }
            let text = match apply {
                None => expr::render(&op),
                Some(f) => {
                    let mut f = expr::parse_function(&f, n)?;
                    if let Some(r) = &c {
                        f = f.try_map_coeffs(|s| Ok(RatFunc::from_rational(&s.evaluate_at(r)?)))?;
                    }
                    expr::render_function(&op.apply(&f)?)
                }
            };
            emit(&text, None)
        }
        Command::Symbol { n, expr: src } => {
            let op = expr::parse_operator(&src, n)?;
            let mut text = format!("symbol: {}", op.principal_symbol()?);
            if let Ok(s) = op.spherical_scalar_symbol() {
                text += &format!("\nspherical: {s}");
            }
            emit(&text, None)
        }
        Command::Hilbert {
            n,
            isotype,
            m,
            maxdeg: (dx, dy),
            format,
            output,
        } => {
            let table = match m {
                None => isotypic_table::<BigRational>(n, isotype, dx, dy),
                Some(m) if Character::power(m) == isotype => a_power_table::<BigRational>(n, m, dx, dy),
                Some(m) => {
                    return Err(Failure::Usage(format!(
                        "A^{m} lies in the {} isotypic component, not {isotype}",
                        Character::power(m)
                    )))
                }
            };
            emit(&table_text(&table, format), output.as_ref())
        }
        Command::Grtable {
            n,
            m,
            side,
            maxdeg: (dx, dy),
            slack,
            c,
            factorwise,
            format,
            output,
        } => {
            let mode = if factorwise { BoundMode::Factorwise } else { BoundMode::Merged };
            match c {
                None => {
                    let mut opts = GrOptions::new(n, m, side, dx, dy, RatFunc::param());
                    opts.slack = slack;
                    opts.bound_mode = mode;
                    run_grtable(opts, format, output.as_ref())
                }
                Some(r) => {
                    let mut opts = GrOptions::new(n, m, side, dx, dy, r);
                    opts.slack = slack;
                    opts.bound_mode = mode;
                    run_grtable(opts, format, output.as_ref())
                }
            }
        }
        Command::Verify { suite, n, json, c, m } => {
            let mut opts = SuiteOptions::default();
            if let Some(r) = c {
                opts.param = Param::Rational(r);
            }
            if let Some(m) = m {
                opts.m = m;
            }
            eprintln!("running {suite} for n = {n}");
            let report = run_suite(&suite, n, &opts)?;
            let mut text = String::new();
            for check in &report.checks {
                let status = serde_json::to_value(check.status).expect("status serializes");
                text += &format!(
                    "{} {}: {} ({} ms)\n",
                    status.as_str().unwrap_or("?").to_uppercase(),
                    check.name,
                    check.detail,
                    check.ms
                );
            }
            if let Some(path) = json {
                fs::write(path, report.to_json())?;
            }
            emit(&text, None)?;
            if report.passed() {
                Ok(())
            } else {
                Err(Failure::Checks)
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Checks) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
