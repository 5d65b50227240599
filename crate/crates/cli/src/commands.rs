use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use k3cert_core::arith::{self, Place};
use k3cert_core::condition::{self, Witness};
use k3cert_core::weilpoly::strip_cyclotomic;
use k3cert_core::{CMFieldData, Error, RatPoly};

use crate::render;

#[derive(Debug, Parser)]
#[command(name = "k3cert", version, about = "Exact certificates for K3 L-function candidates and lattice data")]
pub struct Cli {
    /// Emit {command, inputs, result} JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a witness L for (p, m, h) and certify it.
    Construct(ConstructArgs),
    /// Check a candidate L given by its ascending coefficients.
    Check(CheckArgs),
    /// Build and verify the case-table lattice N for 6 <= m <= 10.
    Lattice(LatticeArgs),
    /// Decide whether (rho, height) occurs at p.
    Feasible(FeasibleArgs),
    /// The 10 x 10 (rho, height) feasibility grid at p.
    Table(TableArgs),
    /// Local Hilbert symbol (a, b)_v as 0 or 1.
    Hilbert(HilbertArgs),
    /// Remove cyclotomic factors from a polynomial.
    Strip(StripArgs),
}

#[derive(Debug, Args)]
pub struct ConstructArgs {
    #[arg(long)]
    pub p: u64,
    #[arg(long)]
    pub m: usize,
    #[arg(long)]
    pub h: usize,
    /// First exponent a to try (q = p^a).
    #[arg(long)]
    pub a_start: Option<u64>,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[arg(long)]
    pub p: u64,
    /// Ascending coefficients, e.g. 1,1/7,1,1/7,1
    #[arg(long, allow_hyphen_values = true)]
    pub coeffs: String,
}

#[derive(Debug, Args)]
pub struct LatticeArgs {
    #[arg(long)]
    pub m: usize,
    #[arg(long)]
    pub n: u64,
    /// Whether disc(F) is a square; derived from n when omitted.
    #[arg(long)]
    pub disc_square: Option<bool>,
    /// Prime with a non-split place of F₀ (required for m = 7, 8).
    #[arg(long)]
    pub p1: Option<u64>,
    /// Split data as prime=true|false; repeatable.
    #[arg(long, value_parser = parse_split)]
    pub split: Vec<(u64, bool)>,
}

#[derive(Debug, Args)]
pub struct FeasibleArgs {
    #[arg(long)]
    pub p: u64,
    #[arg(long)]
    pub rho: u64,
    #[arg(long)]
    pub height: u64,
    /// Also construct a witness polynomial.
    #[arg(long)]
    pub witness: bool,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    #[arg(long)]
    pub p: u64,
}

#[derive(Debug, Args)]
pub struct HilbertArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub a: String,
    #[arg(long, allow_hyphen_values = true)]
    pub b: String,
    /// A prime or "inf".
    #[arg(long)]
    pub place: String,
}

#[derive(Debug, Args)]
pub struct StripArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub coeffs: String,
}

fn parse_split(s: &str) -> Result<(u64, bool), String> {
    let (p, b) = s.split_once('=').ok_or_else(|| format!("expected prime=bool, got {s:?}"))?;
    let p: u64 = p.trim().parse().map_err(|_| format!("bad prime in {s:?}"))?;
    let b: bool = b.trim().parse().map_err(|_| format!("bad bool in {s:?}"))?;
    Ok((p, b))
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Internal(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> CliError {
        match e {
            Error::Internal(_) | Error::SearchExhausted(_) | Error::Overflow(_) => CliError::Internal(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

type CliResult<T> = Result<T, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Result of one command: JSON payload plus its text rendering.
struct Output {
    command: &'static str,
    inputs: Value,
    result: Value,
    text: String,
}

fn to_value<T: Serialize>(x: &T) -> CliResult<Value> {
    serde_json::to_value(x).map_err(|e| CliError::Internal(e.to_string()))
}

pub fn run(cli: &Cli) -> CliResult<String> {
    let out = match &cli.command {
        Command::Construct(a) => construct(a)?,
        Command::Check(a) => check(a)?,
        Command::Lattice(a) => lattice(a)?,
        Command::Feasible(a) => feasible(a)?,
        Command::Table(a) => table(a)?,
        Command::Hilbert(a) => hilbert(a)?,
        Command::Strip(a) => strip(a)?,
    };
    if cli.json {
        let doc = json!({ "command": out.command, "inputs": out.inputs, "result": out.result });
        serde_json::to_string_pretty(&doc).map_err(|e| CliError::Internal(e.to_string()))
    } else {
        Ok(out.text.trim_end().to_string())
    }
}

fn require_prime(p: u64) -> CliResult<()> {
    if !arith::is_prime(p) {
        return Err(usage(format!("--p {p} is not prime")));
    }
    Ok(())
}

fn parse_poly(text: &str) -> CliResult<RatPoly> {
    RatPoly::parse(text).map_err(|e| usage(format!("--coeffs: {e}")))
}

fn construct(a: &ConstructArgs) -> CliResult<Output> {
    require_prime(a.p)?;
    if !(1..=10).contains(&a.m) || !(1..=a.m).contains(&a.h) {
        return Err(usage(format!("need 1 <= h <= m <= 10, got m = {}, h = {}", a.m, a.h)));
    }
    let squared = a.m == 10 && a.h % 2 == 0;
    if squared && a.a_start.is_some() {
        return Err(usage("--a-start is not used on the squared (m = 10, even h) path"));
    }
    let w = if squared {
        condition::construct_l_even_h(a.p, a.h)?
    } else {
        condition::construct_l(a.p, a.m, a.h, a.a_start)?
    };
    let inputs = json!({ "p": a.p, "m": a.m, "h": a.h, "a_start": a.a_start });
    Ok(Output { command: "construct", inputs, text: render::witness(&w), result: to_value(&w)? })
}

fn check(a: &CheckArgs) -> CliResult<Output> {
    require_prime(a.p)?;
    let l = parse_poly(&a.coeffs)?;
    let report = condition::check_condition1(&l, a.p)?;
    let w = Witness { l, report };
    let inputs = json!({ "p": a.p, "coeffs": a.coeffs });
    Ok(Output { command: "check", inputs, text: render::witness(&w), result: to_value(&w)? })
}

fn lattice(a: &LatticeArgs) -> CliResult<Output> {
    if !(6..=10).contains(&a.m) {
        return Err(usage(format!("--m {} outside 6..=10", a.m)));
    }
    if matches!(a.m, 7 | 8) && a.p1.is_none() {
        return Err(usage(format!("--p1 is required for m = {}", a.m)));
    }
    let mut field = CMFieldData::new(2 * a.m, a.n)?;
    if let Some(sq) = a.disc_square {
        if sq != field.disc_is_square {
            return Err(usage(format!(
                "--disc-square {sq} contradicts n = {}: disc(F) = (-1)^m n is {}a square",
                a.n,
                if field.disc_is_square { "" } else { "not " }
            )));
        }
    }
    if let Some(p1) = a.p1 {
        field = field.with_witness(p1)?;
    }
    for &(p, s) in &a.split {
        field = field.with_split(p, s)?;
    }
    let report = k3cert_core::verify_lattice_cm(a.m, &field)?;
    let inputs = json!({
        "m": a.m,
        "n": a.n,
        "disc_square": field.disc_is_square,
        "p1": a.p1,
        "split": field.split_table,
    });
    Ok(Output { command: "lattice", inputs, text: render::lattice(&report), result: to_value(&report)? })
}

fn check_feasible_prime(p: u64) -> CliResult<()> {
    if p < 5 {
        return Err(usage(format!("--p {p}: the existence theorem assumes p >= 5")));
    }
    require_prime(p)
}

fn feasible(a: &FeasibleArgs) -> CliResult<Output> {
    check_feasible_prime(a.p)?;
    let v = condition::feasibility(a.p, a.rho, a.height, a.witness)?;
    let inputs = json!({ "p": a.p, "rho": a.rho, "height": a.height, "witness": a.witness });
    Ok(Output { command: "feasible", inputs, text: render::feasibility(&v), result: to_value(&v)? })
}

fn table(a: &TableArgs) -> CliResult<Output> {
    check_feasible_prime(a.p)?;
    let cells = condition::feasibility_table(a.p, true)?;
    let inputs = json!({ "p": a.p });
    Ok(Output { command: "table", inputs, text: render::table(a.p, &cells), result: to_value(&cells)? })
}

fn hilbert(a: &HilbertArgs) -> CliResult<Output> {
    let x = arith::parse_rat(&a.a)?;
    let y = arith::parse_rat(&a.b)?;
    let place: Place = a.place.parse()?;
    let symbol = arith::hilbert(&x, &y, place)?;
    let inputs = json!({ "a": arith::format_rat(&x), "b": arith::format_rat(&y), "place": place });
    let text = format!("({}, {})_{} = {}", arith::format_rat(&x), arith::format_rat(&y), place, symbol);
    Ok(Output { command: "hilbert", inputs, text, result: to_value(&symbol)? })
}

fn strip(a: &StripArgs) -> CliResult<Output> {
    let p = parse_poly(&a.coeffs)?;
    let (q, removed) = strip_cyclotomic(&p)?;
    let inputs = json!({ "coeffs": a.coeffs });
    let result = json!({ "stripped": q, "removed": removed });
    let text = format!("stripped: {}\nremoved: {:?}", q.to_text(), removed);
    Ok(Output { command: "strip", inputs, text, result })
}
