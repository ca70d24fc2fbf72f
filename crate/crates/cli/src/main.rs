use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use entroflow::{
    cmd_entropy, cmd_eval, cmd_verify, resolve_options, CliError, EntropyArgs, OptionFlags, Outcome, Report, Target,
    Workspace,
};
use entroflow_core::InvariantTag;

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum TargetArg {
    Endo,
    Module,
    Preradical,
    FlowPreradical,
    Lattice,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum TagArg {
    Log,
    Rank,
}

#[derive(Debug, Parser)]
#[command(name = "entroflow", version, about = "Exact preradicals, flows and entropies of modules")]
struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long, global = true)]
    precision_bits: Option<u32>,
    #[arg(long, global = true)]
    max_order: Option<u64>,
    #[arg(long, global = true)]
    max_window: Option<usize>,
    #[arg(long, global = true)]
    s_max: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate a preradical expression on a module.
    Eval {
        #[arg(short, long)]
        workspace: PathBuf,
        #[arg(short, long)]
        expr: String,
        #[arg(short, long)]
        module: String,
    },
    /// Compute an entropy.
    Entropy {
        #[arg(short, long)]
        workspace: PathBuf,
        #[arg(long, value_enum)]
        target: TargetArg,
        #[arg(long, value_enum, default_value_t = TagArg::Log)]
        tag: TagArg,
        #[arg(long)]
        module: Option<String>,
        #[arg(long)]
        morphism: Option<String>,
        #[arg(long)]
        flow: Option<String>,
        #[arg(long)]
        expr: Option<String>,
        #[arg(long)]
        family: Option<String>,
    },
    /// Run a randomized verification suite.
    Verify {
        #[arg(short, long)]
        workspace: Option<PathBuf>,
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 30)]
        size: usize,
    },
    /// Re-render a saved JSON report.
    Report {
        #[arg(long)]
        input: Option<PathBuf>,
    },
}

fn quoted(s: &str) -> String {
    if !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || "-_./:".contains(c)) {
        s.to_string()
    } else {
        format!("'{}'", s.replace('\'', "'\\''"))
    }
}

fn option_echo(cli: &Cli) -> String {
    let mut out = String::new();
    let flags = [
        ("precision-bits", cli.precision_bits.map(|v| v.to_string())),
        ("max-order", cli.max_order.map(|v| v.to_string())),
        ("max-window", cli.max_window.map(|v| v.to_string())),
        ("s-max", cli.s_max.map(|v| v.to_string())),
    ];
    for (name, v) in flags {
        if let Some(v) = v {
            out.push_str(&format!(" --{name} {v}"));
        }
    }
    out
}

fn read_report(input: Option<&PathBuf>) -> Result<Report, CliError> {
    let (text, path) = match input {
        Some(p) => {
            let t = std::fs::read_to_string(p)
                .map_err(|e| CliError::Io { path: p.display().to_string(), message: e.to_string() })?;
            (t, p.display().to_string())
        }
        None => {
            let mut t = String::new();
            std::io::stdin()
                .read_to_string(&mut t)
                .map_err(|e| CliError::Io { path: "<stdin>".into(), message: e.to_string() })?;
            (t, "<stdin>".to_string())
        }
    };
    serde_json::from_str(&text).map_err(|e| CliError::Parse {
        line: e.line(),
        column: e.column(),
        message: format!("{path}: {e}"),
    })
}

fn run(cli: &Cli) -> Result<(Report, bool), CliError> {
    let flags = OptionFlags {
        precision_bits: cli.precision_bits,
        max_order: cli.max_order,
        max_window: cli.max_window,
        s_max: cli.s_max,
    };
    let echo = option_echo(cli);
    match &cli.command {
        Command::Eval { workspace, expr, module } => {
            let ws = Workspace::load(workspace)?;
            let command =
                format!("eval -w {} -e {} -m {}{echo}", quoted(&workspace.display().to_string()), quoted(expr), quoted(module));
            Ok((cmd_eval(&ws, command, expr, module)?, true))
        }
        Command::Entropy { workspace, target, tag, module, morphism, flow, expr, family } => {
            let ws = Workspace::load(workspace)?;
            let opts = resolve_options(Some(&ws), &flags)?;
            let target = match target {
                TargetArg::Endo => Target::Endo,
                TargetArg::Module => Target::Module,
                TargetArg::Preradical => Target::Preradical,
                TargetArg::FlowPreradical => Target::FlowPreradical,
                TargetArg::Lattice => Target::Lattice,
            };
            let tag = match tag {
                TagArg::Log => InvariantTag::Log,
                TagArg::Rank => InvariantTag::Rank,
            };
            let args = EntropyArgs {
                module: module.clone(),
                morphism: morphism.clone(),
                flow: flow.clone(),
                expr: expr.clone(),
                family: family.clone(),
            };
            let mut command = format!(
                "entropy -w {} --target {} --tag {}",
                quoted(&workspace.display().to_string()),
                target.name(),
                if tag == InvariantTag::Log { "log" } else { "rank" }
            );
            for (name, v) in [("module", module), ("morphism", morphism), ("flow", flow), ("expr", expr), ("family", family)] {
                if let Some(v) = v {
                    command.push_str(&format!(" --{name} {}", quoted(v)));
                }
            }
            command.push_str(&echo);
            Ok((cmd_entropy(&ws, command, target, tag, &args, &opts)?, true))
        }
        Command::Verify { workspace, suite, seed, size } => {
            let ws = workspace.as_ref().map(|p| Workspace::load(p)).transpose()?;
            let opts = resolve_options(ws.as_ref(), &flags)?;
            let mut command = String::from("verify");
            if let Some(p) = workspace {
                command.push_str(&format!(" -w {}", quoted(&p.display().to_string())));
            }
            command.push_str(&format!(" --suite {} --seed {seed} --size {size}{echo}", quoted(suite)));
            Ok((cmd_verify(ws.as_ref(), command, suite, *seed, *size, &opts)?, true))
        }
        Command::Report { input } => Ok((read_report(input.as_ref())?, false)),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((report, judged)) => {
            match cli.format {
                Format::Json => println!("{}", report.to_json()),
                Format::Text => {
                    print!("{}", report.body_text());
                    eprintln!("elapsed: {:.3} ms", report.timing.elapsed_ms);
                }
            }
            if !judged {
                return ExitCode::SUCCESS;
            }
            match report.outcome() {
                Outcome::Passed => ExitCode::SUCCESS,
                Outcome::Violations => ExitCode::from(1),
                Outcome::Errors => ExitCode::from(2),
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
