//! `toricmono`: list examples, compute lattice, ring and monodromy data, and
//! run the verification suites.

mod config;
mod selectors;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use thiserror::Error;
use toricmono::chowring::{minimal_non_faces, AlgebraElement, GradedAlgebra};
use toricmono::exactlat::{fmt_rational, Rational, RationalMatrix};
use toricmono::fmkernel::{kernel_action, KernelSpec};
use toricmono::mirrorlab::{
    condition2_status, find_example, verify_example, CheckStatus, ExampleData, ExampleSpec, LabError,
    VerificationReport, VerifyOptions, CONVENTION,
};
use toricmono::monodromy::{
    compose, edge_loop, horn_discriminant, torus_loop, two_param_discriminant, MonodromyOperator,
    Normalization,
};
use toricmono::triangulate::Circuit;

use config::{Config, ConfigError, OutputFormat};
use selectors::{parse_class, parse_kernel, parse_loop, EdgeRef, KernelSelector, LoopRef, LoopSelector, SelectorError};

const LAYOUT: &str = "row i lists the image of basis element i";

#[derive(Parser, Debug)]
#[command(name = "toricmono", version, about = "Exact monodromy and kernel computations for toric complete intersections")]
struct Cli {
    /// TOML file with extra examples and output defaults.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the known examples with their wall condition status.
    List,
    /// Compute one object for an example.
    Compute(ComputeArgs),
    /// Run the verification suites.
    Verify(VerifyArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Target {
    Gale,
    Triangulations,
    SrRing,
    Todd,
    Monodromy,
    Kernel,
    Discriminant,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum NormArg {
    Psi,
    Phi,
}

#[derive(Args, Debug)]
struct ComputeArgs {
    /// Object to compute.
    #[arg(value_enum)]
    target: Target,
    /// Example name, as shown by `list`.
    #[arg(long)]
    example: String,
    /// torus:<j>, edge[:<n>] or composite:<word>
    #[arg(long = "loop")]
    loop_: Option<String>,
    /// twist:<class>, diagonal-ideal, conjugate:<class> or edge[:<n>]
    #[arg(long)]
    kernel: Option<String>,
    #[arg(long, value_enum, default_value = "psi")]
    normalization: NormArg,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Example name, as shown by `list`.
    #[arg(long, conflicts_with = "all", required_unless_present = "all")]
    example: Option<String>,
    /// Verify every known example.
    #[arg(long)]
    all: bool,
    /// Truncation order of the series checks.
    #[arg(long)]
    order: Option<usize>,
    /// Perturb the Todd class used by the kernel checks; the run must fail.
    #[arg(long)]
    corrupt_todd: bool,
}

#[derive(Debug, Error)]
enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Selector(#[from] SelectorError),
    #[error(transparent)]
    Lab(#[from] LabError),
    #[error("{0}")]
    Usage(String),
}

impl From<toricmono::monodromy::MonodromyError> for CliError {
    fn from(e: toricmono::monodromy::MonodromyError) -> Self {
        CliError::Lab(e.into())
    }
}

impl From<toricmono::fmkernel::KernelError> for CliError {
    fn from(e: toricmono::fmkernel::KernelError) -> Self {
        CliError::Lab(e.into())
    }
}

impl From<toricmono::chowring::ChowError> for CliError {
    fn from(e: toricmono::chowring::ChowError) -> Self {
        CliError::Lab(e.into())
    }
}

struct Context {
    examples: Vec<ExampleSpec>,
    json: bool,
    order: usize,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<u8, CliError> {
    let config = match &cli.config {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    let ctx = Context {
        examples: config.examples()?,
        json: cli.json || config.output.format == OutputFormat::Json,
        order: config.truncation.order,
    };
    match cli.command {
        Command::List => cmd_list(&ctx),
        Command::Compute(args) => cmd_compute(&ctx, &args),
        Command::Verify(args) => cmd_verify(&ctx, &args),
    }
}

fn emit(value: &Value) {
    println!("{}", serde_json::to_string_pretty(value).expect("json values serialize"));
}

fn cmd_list(ctx: &Context) -> Result<u8, CliError> {
    let mut rows = Vec::new();
    for e in &ctx.examples {
        let status = match condition2_status(e) {
            Ok(true) => "ok".to_string(),
            Ok(false) => "fails".to_string(),
            Err(err) => format!("error ({err})"),
        };
        rows.push((e, status));
    }
    if ctx.json {
        let items: Vec<Value> = rows
            .iter()
            .map(|(e, s)| {
                json!({
                    "name": e.name,
                    "kind": e.kind.to_string(),
                    "weights": e.weights,
                    "degrees": e.degrees,
                    "cond2": s,
                })
            })
            .collect();
        emit(&Value::Array(items));
    } else {
        let width = rows.iter().map(|(e, _)| e.name.len()).max().unwrap_or(0);
        for (e, s) in rows {
            println!(
                "{:<width$}  {:<9}  {:<16} {:<9}  cond2: {}",
                e.name,
                e.kind.to_string(),
                e.weight_label(),
                e.degree_label(),
                s
            );
        }
    }
    Ok(0)
}

fn cmd_compute(ctx: &Context, args: &ComputeArgs) -> Result<u8, CliError> {
    let spec = find_example(&ctx.examples, &args.example)?;
    let value = match args.target {
        Target::Gale => compute_gale(&spec)?,
        Target::Triangulations => compute_triangulations(&spec.data()?),
        Target::SrRing => compute_sr_ring(&spec.data()?),
        Target::Todd => compute_todd(&spec.data()?)?,
        Target::Monodromy => {
            let text = args
                .loop_
                .as_deref()
                .ok_or_else(|| CliError::Usage("compute monodromy needs --loop".into()))?;
            let norm = match args.normalization {
                NormArg::Psi => Normalization::Psi,
                NormArg::Phi => Normalization::Phi,
            };
            let data = spec.data()?;
            let op = resolve_loop(&data, text, &parse_loop(text)?, norm)?;
            matrix_value(&data.phase.h, &op.label, &op.matrix)
        }
        Target::Kernel => {
            let text = args
                .kernel
                .as_deref()
                .ok_or_else(|| CliError::Usage("compute kernel needs --kernel".into()))?;
            let data = spec.data()?;
            let kspec = resolve_kernel(&data, &parse_kernel(text)?)?;
            let m = kernel_action(&data.phase, &kspec)?;
            matrix_value(&data.phase.h, &kspec.to_string(), &m)
        }
        Target::Discriminant => compute_discriminant(&spec)?,
    };
    if ctx.json {
        emit(&value);
    } else {
        print_text(args.target, &value);
    }
    Ok(0)
}

fn compute_gale(spec: &ExampleSpec) -> Result<Value, CliError> {
    let a = spec.aset()?;
    let rows: Vec<Vec<String>> = a
        .relations()
        .to_rows()
        .iter()
        .map(|r| r.iter().map(|x| x.to_string()).collect())
        .collect();
    Ok(json!({ "example": spec.name, "relations": rows }))
}

fn compute_triangulations(data: &ExampleData) -> Value {
    let chambers: Vec<Value> = data
        .chambers
        .iter()
        .enumerate()
        .map(|(i, ch)| {
            let gens: Vec<Vec<String>> = ch
                .generators
                .iter()
                .map(|g| g.iter().map(|x| x.to_string()).collect())
                .collect();
            let simplices: Vec<Vec<usize>> = ch
                .triangulation
                .simplices()
                .iter()
                .map(|s| s.iter().map(|j| j + 1).collect())
                .collect();
            json!({
                "chamber": i + 1,
                "generators": gens,
                "simplices": simplices,
                "smooth_phase": i == data.smooth,
            })
        })
        .collect();
    json!({ "chambers": chambers })
}

fn compute_sr_ring(data: &ExampleData) -> Value {
    let p = &data.phase;
    let faces: Vec<Vec<usize>> = minimal_non_faces(&p.aset, &p.triangulation)
        .into_iter()
        .map(|f| f.into_iter().map(|j| j + 1).collect())
        .collect();
    json!({
        "variables": p.ring.names(),
        "minimal_non_faces": faces,
        "ring_basis": p.ring.basis_names(),
        "basis": p.h.basis_names(),
    })
}

fn compute_todd(data: &ExampleData) -> Result<Value, CliError> {
    let p = &data.phase;
    let td = p.todd()?;
    let integrals: Vec<String> = p
        .integral_vector()
        .map(|v| v.iter().map(fmt_rational).collect())
        .unwrap_or_default();
    Ok(json!({
        "basis": p.h.basis_names(),
        "todd": td.coeffs().iter().map(fmt_rational).collect::<Vec<_>>(),
        "rendered": td.to_string(),
        "integrals": integrals,
    }))
}

fn compute_discriminant(spec: &ExampleSpec) -> Result<Value, CliError> {
    let a = spec.aset()?;
    let horn = horn_discriminant(&a)?;
    let names: Vec<&str> = ["x", "y", "z"].into_iter().take(a.corank()).collect();
    let implicit = horn.implicit.render(&names);
    let mut out = json!({ "implicit": format!("{implicit} = 0") });
    if a.corank() == 2 {
        if let Some(c) = horn_constant(&horn.implicit) {
            out["constant"] = Value::String(fmt_rational(&c));
            let shown = if c.is_integer() {
                fmt_rational(&c)
            } else {
                format!("({})", fmt_rational(&c))
            };
            out["curve"] = Value::String(format!("y = 1/4*(1 - {shown}/x)^2"));
        }
    }
    Ok(out)
}

/// The `c` with implicit equation proportional to `4x²y - (x - c)²`, if any.
fn horn_constant(implicit: &toricmono::poly::Poly) -> Option<Rational> {
    let linear = implicit
        .terms()
        .find(|(e, _)| e.as_slice() == [1, 0])
        .map(|(_, c)| c.clone())?;
    let c = linear * Rational::from_integer(2.into());
    (two_param_discriminant(&c).monic() == *implicit).then_some(c)
}

fn matrix_value(alg: &GradedAlgebra, label: &str, m: &RationalMatrix) -> Value {
    json!({
        "operator": label,
        "basis": alg.basis_names(),
        "matrix": m.transpose().to_string_rows(),
        "layout": LAYOUT,
        "convention": CONVENTION,
    })
}

fn pick_edge(data: &ExampleData, r: &EdgeRef) -> Result<Circuit, CliError> {
    let edges = data.edges();
    let names = || {
        edges
            .iter()
            .map(|(i, _)| format!("edge:{}", i + 1))
            .collect::<Vec<_>>()
            .join(", ")
    };
    match r {
        EdgeRef::Only if edges.len() == 1 => Ok(edges[0].1.clone()),
        EdgeRef::Only => Err(CliError::Usage(format!("several walls; pick one of {}", names()))),
        EdgeRef::Chamber(n) => edges
            .iter()
            .find(|(i, _)| i + 1 == *n)
            .map(|(_, c)| c.clone())
            .ok_or_else(|| CliError::Usage(format!("no wall to chamber {n}; available: {}", names()))),
    }
}

fn base_loop(data: &ExampleData, r: &LoopRef, norm: Normalization) -> Result<MonodromyOperator, CliError> {
    match r {
        LoopRef::Torus(j) => {
            if *j > data.aset.len() {
                return Err(CliError::Usage(format!(
                    "torus loop index {j} out of range 1..={}",
                    data.aset.len()
                )));
            }
            Ok(torus_loop(&data.phase, j - 1)?)
        }
        LoopRef::Edge(e) => {
            let c = pick_edge(data, e)?;
            let edge = data.edge_data(&c)?;
            Ok(edge_loop(&data.phase, &edge, norm)?)
        }
    }
}

fn resolve_loop(
    data: &ExampleData,
    label: &str,
    sel: &LoopSelector,
    norm: Normalization,
) -> Result<MonodromyOperator, CliError> {
    match sel {
        LoopSelector::Single(r) => base_loop(data, r, norm),
        LoopSelector::Composite(letters) => {
            let mut ops = Vec::new();
            for l in letters {
                let op = base_loop(data, &l.generator, norm)?;
                let op = if l.exponent < 0 { op.inverse()? } else { op };
                ops.push(op.pow(l.exponent.unsigned_abs()));
            }
            let refs: Vec<&MonodromyOperator> = ops.iter().collect();
            Ok(MonodromyOperator::new(label, compose(&refs).matrix))
        }
    }
}

fn resolve_kernel(data: &ExampleData, sel: &KernelSelector) -> Result<KernelSpec, CliError> {
    let class = |t: &str| -> Result<AlgebraElement, CliError> { Ok(parse_class(&data.phase.h, t)?) };
    Ok(match sel {
        KernelSelector::Twist(t) => KernelSpec::Twist(class(t)?),
        KernelSelector::DiagonalIdeal => KernelSpec::DiagonalIdeal,
        KernelSelector::Conjugate(t) => KernelSpec::TwistedConjugate(class(t)?),
        KernelSelector::Edge(e) => KernelSpec::Edge(data.edge_data(&pick_edge(data, e)?)?),
    })
}

fn as_strings(v: &Value) -> Vec<String> {
    v.as_array()
        .map(|a| a.iter().map(|x| x.as_str().unwrap_or_default().to_string()).collect())
        .unwrap_or_default()
}

fn print_matrix(value: &Value) {
    let basis = as_strings(&value["basis"]);
    let rows: Vec<Vec<String>> = value["matrix"].as_array().map(|r| r.iter().map(as_strings).collect()).unwrap_or_default();
    let label_w = basis.iter().map(String::len).max().unwrap_or(0);
    let cell_w = rows
        .iter()
        .flatten()
        .chain(basis.iter())
        .map(String::len)
        .max()
        .unwrap_or(1);
    println!("operator: {}", value["operator"].as_str().unwrap_or_default());
    println!("convention: {CONVENTION}");
    println!("layout: {LAYOUT}");
    let header: Vec<String> = basis.iter().map(|b| format!("{b:>cell_w$}")).collect();
    println!("{:label_w$}  {}", "", header.join("  "));
    for (b, row) in basis.iter().zip(&rows) {
        let cells: Vec<String> = row.iter().map(|c| format!("{c:>cell_w$}")).collect();
        println!("{b:<label_w$}  {}", cells.join("  "));
    }
}

fn print_text(target: Target, value: &Value) {
    match target {
        Target::Gale => {
            for row in value["relations"].as_array().into_iter().flatten() {
                println!("[{}]", as_strings(row).join(", "));
            }
        }
        Target::Triangulations => {
            for ch in value["chambers"].as_array().into_iter().flatten() {
                let gens: Vec<String> = ch["generators"]
                    .as_array()
                    .into_iter()
                    .flatten()
                    .map(|g| format!("({})", as_strings(g).join(",")))
                    .collect();
                let simplices: Vec<String> = ch["simplices"]
                    .as_array()
                    .into_iter()
                    .flatten()
                    .map(|s| {
                        let ids: Vec<String> = s.as_array().into_iter().flatten().map(|x| x.to_string()).collect();
                        format!("{{{}}}", ids.join(","))
                    })
                    .collect();
                let mark = if ch["smooth_phase"].as_bool() == Some(true) { "  (smooth phase)" } else { "" };
                println!("T{}: cone {}{}", ch["chamber"], gens.join(" "), mark);
                println!("    {}", simplices.join(" "));
            }
        }
        Target::SrRing => {
            println!("variables: {}", as_strings(&value["variables"]).join(", "));
            let faces: Vec<String> = value["minimal_non_faces"]
                .as_array()
                .into_iter()
                .flatten()
                .map(|f| {
                    let ids: Vec<String> = f.as_array().into_iter().flatten().map(|x| x.to_string()).collect();
                    format!("{{{}}}", ids.join(","))
                })
                .collect();
            println!("minimal non-faces: {}", faces.join(" "));
            println!("ring basis: {}", as_strings(&value["ring_basis"]).join(", "));
            println!("basis: {}", as_strings(&value["basis"]).join(", "));
        }
        Target::Todd => {
            println!("todd: {}", value["rendered"].as_str().unwrap_or_default());
            let basis = as_strings(&value["basis"]);
            let ints = as_strings(&value["integrals"]);
            for (b, i) in basis.iter().zip(&ints) {
                println!("  integral of {b}: {i}");
            }
        }
        Target::Monodromy | Target::Kernel => print_matrix(value),
        Target::Discriminant => {
            if let Some(curve) = value["curve"].as_str() {
                println!("{curve}");
            }
            println!("{}", value["implicit"].as_str().unwrap_or_default());
        }
    }
}

fn cmd_verify(ctx: &Context, args: &VerifyArgs) -> Result<u8, CliError> {
    let opts = VerifyOptions {
        order: args.order.unwrap_or(ctx.order),
        corrupt_todd: args.corrupt_todd,
    };
    let targets: Vec<ExampleSpec> = match &args.example {
        Some(name) => vec![find_example(&ctx.examples, name)?],
        None => ctx.examples.clone(),
    };
    let mut reports = Vec::new();
    for e in &targets {
        reports.push(verify_example(e, &opts)?);
    }
    if ctx.json {
        let value = if args.example.is_some() {
            serde_json::to_value(&reports[0])
        } else {
            serde_json::to_value(&reports)
        };
        emit(&value.expect("reports serialize"));
    } else {
        for r in &reports {
            print_report(r);
        }
    }
    Ok(if reports.iter().all(VerificationReport::passed) { 0 } else { 1 })
}

fn print_report(r: &VerificationReport) {
    println!("{}", r.example);
    for c in &r.checks {
        let tag = match c.status {
            CheckStatus::Pass => "PASS",
            CheckStatus::Fail => "FAIL",
            CheckStatus::Skipped => "SKIP",
        };
        match &c.detail {
            Some(d) => println!("  {tag} {}: {} ({d})", c.name, c.expected),
            None => println!("  {tag} {}: {}", c.name, c.expected),
        }
        if let Some(w) = &c.witness {
            println!("       witness: {}", serde_json::to_string(w).expect("witness serializes"));
        }
    }
}
