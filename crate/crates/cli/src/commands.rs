//! The `eval`, `entropy` and `verify` commands as library calls.

use std::time::Instant;

use entroflow_core::entropy::{
    entropy_lattice_side, entropy_of_endo, entropy_of_flow_preradical, entropy_of_module, entropy_of_preradical,
    EntropyOutcome,
};
use entroflow_core::{eval_preradical, Cardinality, Flow, InvariantTag, Options, PreradicalExpr, Submodule};

use crate::error::CliError;
use crate::report::{Item, Report};
use crate::suites::{run_suite, SuiteContext};
use crate::workspace::Workspace;

/// Largest submodule whose elements are listed in `eval` output.
const LISTED_ELEMENTS: u128 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    Endo,
    Module,
    Preradical,
    FlowPreradical,
    Lattice,
}

impl Target {
    pub fn name(self) -> &'static str {
        match self {
            Target::Endo => "endo",
            Target::Module => "module",
            Target::Preradical => "preradical",
            Target::FlowPreradical => "flow-preradical",
            Target::Lattice => "lattice",
        }
    }
}

/// Object names for `entropy`; which are required depends on the target.
#[derive(Debug, Clone, Default)]
pub struct EntropyArgs {
    pub module: Option<String>,
    pub morphism: Option<String>,
    pub flow: Option<String>,
    pub expr: Option<String>,
    pub family: Option<String>,
}

/// Option overrides given on the command line.
#[derive(Debug, Clone, Default)]
pub struct OptionFlags {
    pub precision_bits: Option<u32>,
    pub max_order: Option<u64>,
    pub max_window: Option<usize>,
    pub s_max: Option<usize>,
}

/// Defaults, then environment, then workspace `options`, then flags.
pub fn resolve_options(workspace: Option<&Workspace>, flags: &OptionFlags) -> Result<Options, CliError> {
    let mut o = Options::from_env()?;
    if let Some(ws) = workspace {
        o = ws.apply_options(o)?;
    }
    if let Some(v) = flags.precision_bits {
        o.precision_bits = v;
    }
    if let Some(v) = flags.max_order {
        o.max_order = v;
    }
    if let Some(v) = flags.max_window {
        o.max_window = v;
    }
    if let Some(v) = flags.s_max {
        o.s_max = v;
    }
    Ok(o)
}

fn timed(command: String, run: impl FnOnce() -> Result<(Vec<Item>, Vec<String>), CliError>) -> Result<Report, CliError> {
    let start = Instant::now();
    let (items, notes) = run()?;
    let mut report = Report::new(command, items, notes);
    report.timing.elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(report)
}

fn render_elements(n: &Submodule) -> Result<Option<String>, CliError> {
    match n.cardinality()? {
        Cardinality::Finite(k) if k <= LISTED_ELEMENTS => {
            let mut coords: Vec<Vec<i64>> = n.elements()?.into_iter().map(|e| e.coords().to_vec()).collect();
            coords.sort();
            let parts: Vec<String> = coords
                .iter()
                .map(|c| match c.as_slice() {
                    [x] => x.to_string(),
                    _ => format!("({})", c.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")),
                })
                .collect();
            Ok(Some(format!("{{{}}}", parts.join(", "))))
        }
        _ => Ok(None),
    }
}

pub fn cmd_eval(ws: &Workspace, command: String, expr: &str, module: &str) -> Result<Report, CliError> {
    timed(command, || {
        let e = ws.expression(expr)?;
        let m = ws.module(module)?;
        let n = eval_preradical(&e, m)?;
        let card = n.cardinality()?;
        let value = render_elements(&n)?.unwrap_or_else(|| n.to_string());
        let item = Item::ok(format!("eval/{module}")).value(value).detail(format!("{e} on {m}: {n}, order {card}"));
        Ok((vec![item], Vec::new()))
    })
}

fn required<'a>(v: &'a Option<String>, what: &'static str) -> Result<&'a str, CliError> {
    v.as_deref().ok_or(CliError::MissingArgument(what))
}

fn endo_flow(ws: &Workspace, args: &EntropyArgs) -> Result<Flow, CliError> {
    if let Some(name) = &args.flow {
        return Ok(ws.flow(name)?.clone());
    }
    let f = ws.morphism(required(&args.morphism, "--flow or --morphism")?)?;
    Ok(Flow::new(f.dom(), f)?)
}

pub fn cmd_entropy(
    ws: &Workspace,
    command: String,
    target: Target,
    tag: InvariantTag,
    args: &EntropyArgs,
    opts: &Options,
) -> Result<Report, CliError> {
    timed(command, || {
        let family = args.family.as_deref().map(|f| ws.family(f)).transpose()?;
        let expr = |default: Option<PreradicalExpr>| -> Result<PreradicalExpr, CliError> {
            match (&args.expr, default) {
                (Some(text), _) => ws.expression(text),
                (None, Some(d)) => Ok(d),
                (None, None) => Err(CliError::MissingArgument("--expr")),
            }
        };
        let (subject, outcome): (String, EntropyOutcome) = match target {
            Target::Endo => {
                let x = endo_flow(ws, args)?;
                (format!("endomorphism of {}", x.carrier()), entropy_of_endo(tag, &x, opts)?)
            }
            Target::Module => {
                let name = required(&args.module, "--module")?;
                (format!("module {name}"), entropy_of_module(tag, ws.module(name)?, family, opts)?)
            }
            Target::Preradical => {
                let name = required(&args.module, "--module")?;
                let e = expr(None)?;
                (format!("{e} on {name}"), entropy_of_preradical(tag, &e, ws.module(name)?, family, opts)?)
            }
            Target::FlowPreradical => {
                let x = endo_flow(ws, args)?;
                let e = expr(None)?;
                (format!("{e} on a flow over {}", x.carrier()), entropy_of_flow_preradical(tag, &e, &x, opts)?)
            }
            Target::Lattice => {
                let name = required(&args.module, "--module")?;
                let e = expr(Some(PreradicalExpr::Identity))?;
                (format!("lattice side of {e} on {name}"), entropy_lattice_side(tag, &e, ws.module(name)?, family, opts)?)
            }
        };
        let item = Item::ok(format!("entropy/{}", target.name())).norm(&outcome.value).detail(format!("{tag}: {subject}"));
        Ok((vec![item], outcome.provenance.into_iter().collect()))
    })
}

pub fn cmd_verify(
    ws: Option<&Workspace>,
    command: String,
    suite: &str,
    seed: u64,
    size: usize,
    opts: &Options,
) -> Result<Report, CliError> {
    let ctx = SuiteContext { seed, size, opts: opts.clone(), workspace: ws };
    timed(command, || run_suite(suite, &ctx))
}
