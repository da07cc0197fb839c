//! The `coarsegraph` command line.
//!
//! Exit codes: 0 for ok or found, 1 for a violation or an exhausted search,
//! 2 for a search that ran out of budget, 3 for unreadable or malformed
//! input, 64 for usage errors.

pub mod args;
mod build;
mod certify;
pub mod input;
pub mod report;
mod search;
mod verify;

use std::ffi::OsString;
use std::io::Write;

use anyhow::Result;
use clap::Parser;
use serde_json::json;

pub use certify::{Bundle, BundleInput};
pub use report::{Report, Status, EXIT_INCONCLUSIVE, EXIT_INPUT, EXIT_NEGATIVE, EXIT_OK, EXIT_USAGE};

use args::{Cli, Command, TreeDecompCommand};

fn command_name(c: &Command) -> String {
    match c {
        Command::Construct(_) => "construct".into(),
        Command::VerifyModel(_) => "verify-model".into(),
        Command::FindFatMinor(_) => "find-fat-minor".into(),
        Command::Inflate(_) => "inflate".into(),
        Command::MergeSets(_) => "merge-sets".into(),
        Command::CheckQi(_) => "check-qi".into(),
        Command::PowerQi(_) => "power-qi".into(),
        Command::TreeDecomp(t) => format!(
            "tree-decomp {}",
            match t {
                TreeDecompCommand::Build { .. } => "build",
                TreeDecompCommand::Validate { .. } => "validate",
                TreeDecompCommand::Width { .. } => "width",
                TreeDecompCommand::Exact { .. } => "exact",
            }
        ),
        Command::SpreadPaths(_) => "spread-paths".into(),
        Command::Witness(_) => "witness-2fat".into(),
        Command::Pipeline(_) => "pipeline-theorem13".into(),
        Command::Certify(_) => "certify".into(),
    }
}

fn dispatch(c: &Command) -> Result<Report> {
    match c {
        Command::Construct(a) => build::construct(a),
        Command::VerifyModel(a) => verify::model(
            &input::read_text(&a.graph)?,
            &input::read_text(&a.cert)?,
            a.k,
        ),
        Command::FindFatMinor(a) => search::find(a),
        Command::Inflate(a) => search::inflate(a),
        Command::MergeSets(a) => search::merge(a),
        Command::CheckQi(a) => verify::qi_map(
            &input::read_text(&a.domain)?,
            &input::read_text(&a.codomain)?,
            &input::read_text(&a.map)?,
        ),
        Command::PowerQi(a) => search::power_qi(a),
        Command::TreeDecomp(t) => match t {
            TreeDecompCommand::Build {
                family,
                out,
                graph_out,
            } => build::tree_decomp_build(family, out.as_deref(), graph_out.as_deref()),
            TreeDecompCommand::Validate { graph, td } => {
                verify::tree_decomposition(&input::read_text(graph)?, &input::read_text(td)?)
            }
            TreeDecompCommand::Width { td } => {
                let j: coarsegraph::treedecomp::DecompositionJson = input::load_json(td)?;
                let td = coarsegraph::treedecomp::TreeDecomposition::from_json(&j)?;
                Ok(Report::new(Status::Ok)
                    .with("width", td.width())
                    .with("bags", td.bags().len()))
            }
            TreeDecompCommand::Exact { graph, cap } => {
                let g = input::load_graph(graph)?;
                let tw = coarsegraph::treedecomp::exact_treewidth(&g, *cap)?;
                Ok(Report::new(Status::Ok).with("treewidth", tw))
            }
        },
        Command::SpreadPaths(a) => search::spread(a),
        Command::Witness(a) => build::witness(a),
        Command::Pipeline(a) => search::pipeline(a),
        Command::Certify(c) => certify::run(c),
    }
}

/// Runs one invocation, writing the report to `out` and diagnostics to
/// standard error. Returns the exit code.
pub fn run_with<I, T>(argv: I, out: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let name = command_name(&cli.command);
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads as usize)
        .build()
    {
        Ok(pool) => pool,
        Err(e) => {
            eprintln!("coarsegraph: cannot start {} threads: {e}", cli.threads);
            return EXIT_USAGE;
        }
    };
    match pool.install(|| dispatch(&cli.command)) {
        Ok(report) => {
            if let Err(e) = report.emit(&name, cli.json, out) {
                eprintln!("coarsegraph: cannot write report: {e}");
                return EXIT_INPUT;
            }
            report.status.exit_code()
        }
        Err(e) => {
            eprintln!("coarsegraph: {name}: {e:#}");
            if cli.json {
                let doc = json!({"command": name, "status": "error", "error": format!("{e:#}")});
                let _ = writeln!(out, "{}", serde_json::to_string_pretty(&doc).unwrap());
            }
            EXIT_INPUT
        }
    }
}

pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(argv, &mut std::io::stdout().lock())
}
