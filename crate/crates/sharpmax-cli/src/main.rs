//! Command-line front end: loads space and function documents, runs one
//! analysis command, prints a one-line summary, and writes a deterministic
//! report file in the requested format.

mod commands;
mod doc;
mod inputs;

use clap::{Args, Parser, Subcommand, ValueEnum};
use commands::{CommandOutput, KindChoice, Params};
use doc::{i, obj, s, Doc};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "sharpmax",
    version,
    about = "Analysis toolkit for finite metric measure spaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Hajlasz,
    Upper,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
    Plotdata,
}

#[derive(Args)]
struct CommonArgs {
    /// Path to a space document (JSON).
    #[arg(long)]
    space: PathBuf,
    /// Path to a function document (JSON); a seeded sample is used if absent.
    #[arg(long)]
    function: Option<PathBuf>,
    /// Integrability exponent.
    #[arg(long, default_value_t = 2.0)]
    p: f64,
    /// Smoothness exponent in (0, 1].
    #[arg(long, default_value_t = 1.0)]
    beta: f64,
    /// Left-hand exponent; defaults to p.
    #[arg(long)]
    q: Option<f64>,
    /// Ball dilation factor.
    #[arg(long, default_value_t = 1.0)]
    tau: f64,
    /// Summation depth.
    #[arg(long, default_value_t = 3)]
    k: usize,
    /// Exponent reduction; must satisfy 0 <= epsilon < p - 1.
    #[arg(long, default_value_t = 0.05)]
    epsilon: f64,
    /// Which gradient structure to use.
    #[arg(long, value_enum, default_value_t = KindArg::Hajlasz)]
    kind: KindArg,
    /// Cell-size ratio for coverings, in (0, 1/8].
    #[arg(long, default_value_t = 1.0 / 128.0)]
    cw: f64,
    /// Seed for generated sample functions.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Report format.
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
}

#[derive(Subcommand)]
enum Command {
    /// Doubling and geometry statistics of a space.
    Stats(CommonArgs),
    /// Sharp maximal profile of a function.
    Maximal(CommonArgs),
    /// Minimal gradient for the chosen structure.
    Gradient(CommonArgs),
    /// Ball constant for the (q, p) inequality.
    Poincare(CommonArgs),
    /// Exponent self-improvement sweep.
    Improve(CommonArgs),
    /// Term-by-term audit of the main inequality on a base ball.
    Audit(CommonArgs),
    /// Reduced-exponent constants over an epsilon grid.
    Kz(CommonArgs),
    /// Sobolev and sharp-maximal norm comparison.
    Norms(CommonArgs),
    /// Whitney covering of a base ball.
    Whitney(CommonArgs),
    /// Telescoping ball chain from a base ball to a point.
    Chain(CommonArgs),
    /// Stopping-time families over the covering cells.
    Stopping(CommonArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Stats(_) => "stats",
            Command::Maximal(_) => "maximal",
            Command::Gradient(_) => "gradient",
            Command::Poincare(_) => "poincare",
            Command::Improve(_) => "improve",
            Command::Audit(_) => "audit",
            Command::Kz(_) => "kz",
            Command::Norms(_) => "norms",
            Command::Whitney(_) => "whitney",
            Command::Chain(_) => "chain",
            Command::Stopping(_) => "stopping",
        }
    }

    fn args(&self) -> &CommonArgs {
        match self {
            Command::Stats(a)
            | Command::Maximal(a)
            | Command::Gradient(a)
            | Command::Poincare(a)
            | Command::Improve(a)
            | Command::Audit(a)
            | Command::Kz(a)
            | Command::Norms(a)
            | Command::Whitney(a)
            | Command::Chain(a)
            | Command::Stopping(a) => a,
        }
    }
}

fn space_descriptor(loaded: &inputs::LoadedSpace) -> Doc {
    let mut fields = vec![
        ("source", s(&loaded.source)),
        ("n", i(loaded.space.n())),
        ("metric", s(loaded.metric_type)),
    ];
    if let Some(name) = &loaded.name {
        fields.push(("name", s(name)));
    }
    if let Some(seed) = loaded.seed {
        fields.push(("seed", i(seed as usize)));
    }
    obj(fields)
}

fn run(cli: &Cli) -> Result<(CommandOutput, Doc), String> {
    let args = cli.command.args();
    let loaded = inputs::load_space(&args.space)?;
    let function = match &args.function {
        Some(path) => Some(inputs::load_function(path, loaded.space.n())?),
        None => None,
    };
    let params = Params {
        p: args.p,
        beta: args.beta,
        q: args.q,
        tau: args.tau,
        k: args.k,
        epsilon: args.epsilon,
        kind: match args.kind {
            KindArg::Hajlasz => KindChoice::Hajlasz,
            KindArg::Upper => KindChoice::Upper,
        },
        cw: args.cw,
        seed: args.seed,
    };
    let function = function.as_ref();
    let output = match &cli.command {
        Command::Stats(_) => commands::stats(&loaded),
        Command::Maximal(_) => commands::maximal(&loaded, &params, function),
        Command::Gradient(_) => commands::gradient(&loaded, &params, function),
        Command::Poincare(_) => commands::poincare(&loaded, &params, function),
        Command::Improve(_) => commands::improve(&loaded, &params, function),
        Command::Audit(_) => commands::audit(&loaded, &params, function),
        Command::Kz(_) => commands::kz(&loaded, &params, function),
        Command::Norms(_) => commands::norms(&loaded, &params, function),
        Command::Whitney(_) => commands::whitney(&loaded, &params),
        Command::Chain(_) => commands::chain(&loaded, &params),
        Command::Stopping(_) => commands::stopping(&loaded, &params, function),
    }?;
    let report = obj(vec![
        ("command", s(cli.command.name())),
        ("version", s(env!("CARGO_PKG_VERSION"))),
        ("seed", i(params.seed as usize)),
        ("space", space_descriptor(&loaded)),
        ("params", params.describe()),
        ("result", output.payload.clone()),
    ]);
    Ok((output, report))
}

fn emit(cli: &Cli, output: &CommandOutput, report: &Doc) -> Result<Vec<String>, String> {
    let name = cli.command.name();
    let mut written = Vec::new();
    match cli.command.args().format {
        FormatArg::Json => {
            let path = format!("{name}.report.json");
            std::fs::write(&path, report.render())
                .map_err(|e| format!("cannot write {path}: {e}"))?;
            written.push(path);
        }
        FormatArg::Csv => {
            let path = format!("{name}.report.csv");
            let mut text = output.csv.join("\n");
            text.push('\n');
            std::fs::write(&path, text)
                .map_err(|e| format!("cannot write {path}: {e}"))?;
            written.push(path);
        }
        FormatArg::Plotdata => {
            for (series, lines) in &output.plot {
                let path = format!("{name}.{series}.dat");
                let mut text = lines.join("\n");
                text.push('\n');
                std::fs::write(&path, text)
                    .map_err(|e| format!("cannot write {path}: {e}"))?;
                written.push(path);
            }
        }
    }
    Ok(written)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((output, report)) => match emit(&cli, &output, &report) {
            Ok(written) => {
                println!("{} [wrote {}]", output.summary, written.join(", "));
                if output.findings {
                    ExitCode::from(2)
                } else {
                    ExitCode::SUCCESS
                }
            }
            Err(message) => {
                eprintln!("error: {message}");
                ExitCode::from(1)
            }
        },
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
    }
}
