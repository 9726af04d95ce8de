//! Command-line front end. [`run_cli`] never exits the process, so it can
//! be driven from tests.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use chiro_core::double_circle::analytics::{
    asymptotic_report, constants, df_series_at_one, f_closed, f_series_at_one, small_roots,
};
use chiro_core::double_circle::qk_sequence;
use chiro_core::oracle::{count_triangulations, OracleConfig, MAX_GROUND_SET};
use chiro_core::poly::calc::q_from_p;
use chiro_core::scalar::digits_to_bits;
use chiro_core::{AsymptoticConstants, Chirotope, Real};
use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::error::{Result, WorkbenchError};
use crate::eval::{load_file, materialize, polynomial, EvalContext};
use crate::expr::{parse_expr, Atom, Expr};
use crate::ordertypes::{read_order_types, Width};
use crate::search::{candidates, search, to_csv, Metric, SearchConfig};

#[derive(Debug, Parser)]
#[command(name = "chiro", version, about = "Triangulation counting on rooted chirotopes")]
struct Cli {
    /// Worker threads (default: one per core).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Decimal digits for real-valued output.
    #[arg(long, global = true, default_value_t = 50)]
    precision: u32,
    /// Largest chirotope the brute-force oracle accepts.
    #[arg(long, global = true, default_value_t = chiro_core::oracle::DEFAULT_ORACLE_LIMIT)]
    oracle_cap: usize,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Check the chirotope axioms of a .chi or .pts file.
    Axioms { file: PathBuf },
    /// Count triangulations of an expression or file.
    Count {
        target: String,
        #[arg(long, value_enum, default_value_t = Method::Brute)]
        method: Method,
        /// Remove the root before counting.
        #[arg(long)]
        drop_root: bool,
    },
    /// Print the P or Q polynomial of an expression.
    Poly {
        expr: String,
        #[arg(long, value_enum, default_value_t = Which::P)]
        which: Which,
        #[arg(long, value_enum, default_value_t = OutFormat::Json)]
        out: OutFormat,
    },
    /// Exact double-circle counts against the asymptotic estimate.
    DcTable {
        #[arg(long)]
        kmax: usize,
        #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
        format: TableFormat,
    },
    /// Closed forms against truncated series at one point x.
    KernelReport {
        #[arg(long)]
        x: String,
        #[arg(long)]
        terms: usize,
    },
    /// Rank database entries as substitutes for the level-3 Koch chain.
    Search {
        #[arg(long)]
        db: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        levels: usize,
        #[arg(long)]
        top: Option<usize>,
        /// Coordinate width in bits (8 or 16).
        #[arg(long)]
        width: Option<u32>,
        /// Skip collinear records instead of failing.
        #[arg(long)]
        lenient: bool,
        #[arg(long, value_enum, default_value_t = MetricArg::Weak)]
        metric: MetricArg,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Method {
    Brute,
    Poly,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Which {
    #[value(name = "P")]
    P,
    #[value(name = "Q")]
    Q,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OutFormat {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TableFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MetricArg {
    Weak,
    Count,
}

/// Runs one invocation; returns the process exit code (0 ok, 1 domain
/// error, 2 usage error).
pub fn run_cli<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    let (mut stdout, mut notes) = (String::new(), String::new());
    let result = match cli.threads {
        Some(0) => Err(WorkbenchError::Usage("--threads must be positive".into())),
        Some(t) => match rayon::ThreadPoolBuilder::new().num_threads(t).build() {
            Ok(pool) => pool.install(|| dispatch(&cli, &mut stdout, &mut notes)),
            Err(e) => Err(WorkbenchError::Usage(e.to_string())),
        },
        None => dispatch(&cli, &mut stdout, &mut notes),
    };
    let code = match result {
        Ok(code) => code,
        Err(e) => {
            notes += &format!("error: {e}\n");
            e.exit_code()
        }
    };
    let written = out
        .write_all(stdout.as_bytes())
        .and_then(|_| out.flush())
        .and_then(|_| err.write_all(notes.as_bytes()));
    if written.is_err() && code == 0 {
        return 1;
    }
    code
}

fn dispatch(cli: &Cli, out: &mut String, err: &mut String) -> Result<i32> {
    if cli.oracle_cap < 3 || cli.oracle_cap > MAX_GROUND_SET {
        return Err(WorkbenchError::Usage(format!(
            "--oracle-cap must lie in 3..={MAX_GROUND_SET}"
        )));
    }
    let oracle = OracleConfig::with_limit(cli.oracle_cap);
    let ctx = EvalContext::new(oracle);
    let text = match &cli.cmd {
        Cmd::Axioms { file } => {
            let (chi, _) = load_file(file, None)?;
            let report = chi.check_axioms();
            *out += &report.to_string();
            if !out.ends_with('\n') {
                out.push('\n');
            }
            return Ok(if report.is_empty() { 0 } else { 1 });
        }
        Cmd::Count { target, method, drop_root } => {
            format!("{}\n", count(target, *method, *drop_root, &ctx)?)
        }
        Cmd::Poly { expr, which, out: fmt } => {
            let p = polynomial(&parse_expr(expr)?, &ctx)?;
            match (which, fmt) {
                (Which::P, OutFormat::Json) => format!("{}\n", p.to_json()),
                (Which::P, OutFormat::Text) => format!("{p}\n"),
                (Which::Q, OutFormat::Json) => format!("{}\n", q_from_p(&p)?.to_json()),
                (Which::Q, OutFormat::Text) => format!("{}\n", q_from_p(&p)?),
            }
        }
        Cmd::DcTable { kmax, format } => dc_table(*kmax, *format, cli.precision)?,
        Cmd::KernelReport { x, terms } => kernel_report(x, *terms, cli.precision)?,
        Cmd::Search { db, n, levels, top, width, lenient, metric } => {
            let width = match width {
                Some(w) => Width::try_from(*w)?,
                None => Width::default_for(*n)?,
            };
            let ingested = read_order_types(db, *n, width, *lenient)?;
            for (index, reason) in &ingested.skipped {
                *err += &format!("note: record {index} skipped: {reason}\n");
            }
            let mut cands = Vec::new();
            for (rec, ps) in &ingested.records {
                let (c, notes) = candidates(rec.index, &ps.chirotope()?, None);
                for note in notes {
                    *err += &format!("note: {note}\n");
                }
                cands.extend(c);
            }
            let cfg = SearchConfig {
                levels: *levels,
                metric: match metric {
                    MetricArg::Weak => Metric::Weak,
                    MetricArg::Count => Metric::Count,
                },
                oracle,
            };
            to_csv(&search(&cands, &cfg)?, *top)
        }
    };
    *out += &text;
    Ok(0)
}

fn is_chirotope_file(target: &str) -> bool {
    let p = Path::new(target);
    matches!(p.extension().and_then(|e| e.to_str()), Some("chi" | "pts")) && p.is_file()
}

fn count(target: &str, method: Method, drop_root: bool, ctx: &EvalContext) -> Result<BigInt> {
    if drop_root && matches!(method, Method::Poly) {
        return Err(WorkbenchError::Usage(
            "--drop-root needs --method brute; P describes the rooted chirotope".into(),
        ));
    }
    let expr = if is_chirotope_file(target) {
        let (chi, root) = load_file(Path::new(target), None)?;
        if matches!(method, Method::Brute) {
            let chi = match (drop_root, root) {
                (false, _) => chi,
                (true, Some(r)) => drop(&chi, r)?,
                (true, None) => return Err(WorkbenchError::Usage(format!("{target} has no root to drop"))),
            };
            return Ok(count_triangulations(&chi, &ctx.oracle)?.into());
        }
        Expr::Atom(Atom::Load {
            path: target.to_string(),
            root: None,
        })
    } else {
        parse_expr(target)?
    };
    match method {
        Method::Brute => {
            let rc = materialize(&expr, ctx)?;
            let chi = if drop_root { drop(rc.chi(), rc.root())? } else { rc.chi().clone() };
            Ok(count_triangulations(&chi, &ctx.oracle)?.into())
        }
        Method::Poly => Ok(q_from_p(&polynomial(&expr, ctx)?)?.eval_at_one()),
    }
}

fn drop(chi: &Chirotope, root: usize) -> Result<Chirotope> {
    let keep: Vec<usize> = (0..chi.len()).filter(|&l| l != root).collect();
    Ok(chi.restrict(&keep)?.0)
}

fn dc_table(kmax: usize, format: TableFormat, precision: u32) -> Result<String> {
    if kmax < 3 {
        return Err(WorkbenchError::Usage("--kmax must be at least 3".into()));
    }
    let bits = digits_to_bits(precision.max(20));
    let table = qk_sequence(kmax)?;
    let consts: AsymptoticConstants = constants(bits);
    let ks: Vec<usize> = (3..=kmax).collect();
    let rows = asymptotic_report(&table, &ks, &consts, bits)?;
    Ok(match format {
        TableFormat::Csv => {
            let mut s = String::from("k,exact,estimate,ratio\n");
            for r in &rows {
                s += &format!("{},{},{},{}\n", r.k, r.exact, r.estimate.to_decimal(6), r.ratio.to_decimal(12));
            }
            s
        }
        TableFormat::Json => {
            let arr: Vec<Value> = rows
                .iter()
                .map(|r| {
                    json!({
                        "k": r.k,
                        "exact": r.exact.to_string(),
                        "estimate": r.estimate.to_decimal(6),
                        "ratio": r.ratio.to_decimal(12),
                    })
                })
                .collect();
            format!("{}\n", serde_json::to_string_pretty(&Value::Array(arr)).expect("JSON values serialize"))
        }
    })
}

/// Parses `a/b`, an integer, or a plain decimal such as `0.05`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || WorkbenchError::Usage(format!("not a rational number: {s:?}"));
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(n, d));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty()
        || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit())
    {
        return Err(bad());
    }
    let digits: BigInt = format!("0{int}{frac}").parse().map_err(|_| bad())?;
    let r = BigRational::new(digits, BigInt::from(10u32).pow(frac.len() as u32));
    Ok(if neg { -r } else { r })
}

/// Scientific notation with four significant digits.
fn sci(v: &BigRational) -> String {
    format!("{:.3e}", v.to_f64().unwrap_or(f64::INFINITY))
}

fn kernel_report(x: &str, terms: usize, precision: u32) -> Result<String> {
    let x = parse_rational(x)?;
    if terms == 0 {
        return Err(WorkbenchError::Usage("--terms must be positive".into()));
    }
    let digits = precision as usize;
    let bits = digits_to_bits(precision) + 16;
    let kp = small_roots(&x, bits)?;
    let (f, df) = f_closed(&kp)?;
    let table = qk_sequence(terms)?;
    let fs = f_series_at_one(&table, &x, terms);
    let dfs = df_series_at_one(&table, &x, terms);
    let d = |v: &BigRational| v.to_decimal(digits);
    let report = json!({
        "x": x.to_string(),
        "u1": d(&kp.u1),
        "u2": d(&kp.u2),
        "F_closed": d(&f),
        "F_series": d(&fs),
        "dF_closed": d(&df),
        "dF_series": d(&dfs),
        "residuals": {
            "F": sci(&(f.clone() - &fs).abs()),
            "dF": sci(&(df.clone() - &dfs).abs()),
        },
    });
    Ok(format!("{}\n", serde_json::to_string_pretty(&report).expect("JSON values serialize")))
}
