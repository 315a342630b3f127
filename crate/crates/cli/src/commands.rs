use std::fmt::Write as _;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use finv_core::inversion::{assemble_inverse, compute_n_sequence, verify_inverse};
use finv_core::symmetric::{burgers_solve, check_legendre, jc_scan, legendre_transform, JcVerdict};
use finv_core::trees::enumerate;
use finv_core::{Error, FormalMap, GaussianRational, TruncatedSeries};

use crate::document::{DocumentError, MapDocument, PolyDocument};

#[derive(Debug, Parser)]
#[command(name = "finv", version, about = "Exact inversion of formal maps z - H(z)")]
pub struct Cli {
    /// Read the input document from this file instead of standard input.
    #[arg(long = "in", global = true, value_name = "PATH")]
    pub input: Option<std::path::PathBuf>,

    /// Write the result to this file instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<std::path::PathBuf>,

    /// Worker threads for inner sums; output does not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Re-truncate the input polynomial(s) at this degree.
    #[arg(long, global = true)]
    pub trunc: Option<u32>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Invert F = z - H from a map document for H.
    Invert(InvertArgs),
    /// Legendre transform of f = ½Σz² - P.
    Legendre(LegendreArgs),
    /// Solve ∂Q/∂t = ½⟨∇Q, ∇Q⟩ with Q_0 = P.
    Burgers(BurgersArgs),
    /// List binary rooted trees with a given number of leaves.
    Trees(TreesArgs),
    /// Look for t-polynomiality of Q_t for a homogeneous potential.
    JcScan(JcScanArgs),
}

#[derive(Debug, Args)]
pub struct InvertArgs {
    /// Number of t-orders to compute; defaults to the truncation.
    #[arg(long)]
    pub torder: Option<usize>,
    /// Value of t at which to assemble z + tN_t.
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    pub t: String,
    /// Check that the result inverts z - tH in both orders.
    #[arg(long)]
    pub verify: bool,
}

#[derive(Debug, Args)]
pub struct LegendreArgs {
    /// Also check that the gradients are mutually inverse and the transform is an involution.
    #[arg(long)]
    pub check: bool,
}

#[derive(Debug, Args)]
pub struct BurgersArgs {
    #[arg(long, default_value_t = 5)]
    pub torder: usize,
}

#[derive(Debug, Args)]
pub struct TreesArgs {
    #[arg(long)]
    pub leaves: usize,
    /// Print only the number of trees.
    #[arg(long)]
    pub stats: bool,
}

#[derive(Debug, Args)]
pub struct JcScanArgs {
    #[arg(long, default_value_t = 10)]
    pub torder: usize,
    #[arg(long, default_value_t = 5)]
    pub window: usize,
}

/// How a command failed, which fixes its exit code.
#[derive(Debug)]
pub enum Failure {
    /// Unreadable or malformed input.
    Input(String),
    /// Input is well-formed but violates a precondition.
    Precondition(Error),
    /// A requested check did not hold. The result is still emitted.
    Verification { output: String, report: String },
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Input(_) => 2,
            Failure::Precondition(_) => 3,
            Failure::Verification { .. } => 1,
        }
    }
}

impl From<DocumentError> for Failure {
    fn from(e: DocumentError) -> Self {
        Failure::Input(e.0)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. } => Failure::Input(e.to_string()),
            other => Failure::Precondition(other),
        }
    }
}

/// What a successful command prints: the result and a report for stderr.
#[derive(Debug, Default)]
pub struct Success {
    pub output: String,
    pub report: String,
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("documents serialize");
    s.push('\n');
    s
}

fn parse_json<T: serde::de::DeserializeOwned>(input: &str) -> Result<T, Failure> {
    serde_json::from_str(input).map_err(|e| Failure::Input(format!("invalid document: {e}")))
}

fn read_poly(input: &str, trunc: Option<u32>) -> Result<TruncatedSeries, Failure> {
    let p = parse_json::<PolyDocument>(input)?.to_series()?;
    Ok(match trunc {
        Some(d) => p.retruncate_polynomial(d),
        None => p,
    })
}

fn read_map(input: &str, trunc: Option<u32>) -> Result<FormalMap, Failure> {
    let m = parse_json::<MapDocument>(input)?.to_map()?;
    Ok(match trunc {
        Some(d) => FormalMap::new(
            m.components()
                .iter()
                .map(|c| c.retruncate_polynomial(d))
                .collect(),
        )?,
        None => m,
    })
}

pub fn run(cli: &Cli, input: Option<&str>) -> Result<Success, Failure> {
    let need_input = || input.ok_or_else(|| Failure::Input("no input document".into()));
    match &cli.command {
        Command::Invert(args) => invert(read_map(need_input()?, cli.trunc)?, args),
        Command::Legendre(args) => legendre(read_poly(need_input()?, cli.trunc)?, args),
        Command::Burgers(args) => burgers(read_poly(need_input()?, cli.trunc)?, args),
        Command::Trees(args) => trees(args),
        Command::JcScan(args) => scan(read_poly(need_input()?, cli.trunc)?, args),
    }
}

/// Whether the command reads an input document.
pub fn reads_input(cmd: &Command) -> bool {
    !matches!(cmd, Command::Trees(_))
}

fn invert(h: FormalMap, args: &InvertArgs) -> Result<Success, Failure> {
    let t0: GaussianRational = args
        .t
        .parse()
        .map_err(|e| Failure::Input(format!("--t: {e}")))?;
    let torder = args.torder.unwrap_or(h.trunc().max(1) as usize);
    let seq = compute_n_sequence(&h, torder)?;
    let g = assemble_inverse(&seq, &t0)?;
    let output = to_json(&MapDocument::from_map(&g));
    if !args.verify {
        return Ok(Success { output, report: String::new() });
    }
    let id = FormalMap::identity(h.nvars(), h.trunc());
    let f_t = id.sub(&h.scale(&t0))?;
    let d = f_t.trunc().min(g.trunc());
    if verify_inverse(&f_t, &g)? {
        Ok(Success {
            output,
            report: format!("verify: both compositions are the identity modulo degree > {d}\n"),
        })
    } else {
        Err(Failure::Verification {
            output,
            report: format!("verify: composition differs from the identity modulo degree > {d}\n"),
        })
    }
}

fn legendre(f: TruncatedSeries, args: &LegendreArgs) -> Result<Success, Failure> {
    if !args.check {
        let fbar = legendre_transform(&f)?;
        return Ok(Success {
            output: to_json(&PolyDocument::from_series(&fbar)),
            report: String::new(),
        });
    }
    let check = check_legendre(&f)?;
    let output = to_json(&PolyDocument::from_series(&check.transform));
    let report = format!(
        "check: gradients mutually inverse: {}\ncheck: transform is an involution: {}\n",
        check.gradients_inverse, check.involution
    );
    if check.passed() {
        Ok(Success { output, report })
    } else {
        Err(Failure::Verification { output, report })
    }
}

#[derive(Serialize)]
struct BurgersDocument {
    slices: Vec<PolyDocument>,
    residual_zero: bool,
}

fn burgers(p: TruncatedSeries, args: &BurgersArgs) -> Result<Success, Failure> {
    let (seq, residual) = burgers_solve(&p, args.torder)?;
    let doc = BurgersDocument {
        slices: seq.terms().iter().map(PolyDocument::from_series).collect(),
        residual_zero: residual.is_zero(),
    };
    let output = to_json(&doc);
    let report = format!(
        "residual: {} slices checked, {}\n",
        residual.slices.len(),
        if doc.residual_zero { "all zero" } else { "NONZERO" }
    );
    if doc.residual_zero {
        Ok(Success { output, report })
    } else {
        Err(Failure::Verification { output, report })
    }
}

fn trees(args: &TreesArgs) -> Result<Success, Failure> {
    if args.leaves == 0 {
        return Err(Failure::Input("--leaves must be at least 1".into()));
    }
    let list = enumerate(args.leaves);
    let mut output = String::new();
    if args.stats {
        writeln!(output, "{}", list.len()).unwrap();
    } else {
        for t in &list {
            writeln!(
                output,
                "{} leaves={} vertices={} alpha={} pruned_factorial={} beta={}",
                t,
                t.leaves(),
                t.vertices(),
                t.automorphism_count(),
                t.pruned_factorial(),
                t.beta()
            )
            .unwrap();
        }
    }
    Ok(Success { output, report: String::new() })
}

fn scan(p: TruncatedSeries, args: &JcScanArgs) -> Result<Success, Failure> {
    let result = jc_scan(&p, args.torder, args.window)?;
    let mut output = format!("{}\n", result.verdict);
    if let JcVerdict::PolynomialWitnessed(m0) = result.verdict {
        writeln!(output, "largest nonzero t-order: {m0}").unwrap();
    }
    writeln!(output, "computed t-orders: {}", args.torder).unwrap();
    writeln!(output, "degree argument closes the sequence: {}", result.proven).unwrap();
    Ok(Success { output, report: String::new() })
}
