//! Library side of the `wedgekit` command: argument types, input
//! resolution, report construction and rendering.

pub mod args;
pub mod input;
pub mod render;
pub mod reports;

use args::{AdjCmd, Cli, ClusterCmd, Command, DfdCmd, DocKind, EulerCmd, Format, GraphCmd, PairCmd, ValCmd};
use input::{load, load_cluster, load_graph, read, CliError, EXIT_INPUT, EXIT_OK};
use reports::*;
use wedgekit::document::{self, DocumentKind};
use wedgekit::fixtures::cluster_by_name;

/// What a successful invocation prints, and its exit code.
pub enum Output {
    Report(Box<Report>, i32),
    Raw(String),
}

pub fn execute(cmd: &Command) -> Result<Output, CliError> {
    let report = match cmd {
        Command::Graph(GraphCmd::Check { input, dot }) => {
            let g = load_graph(input)?;
            if *dot {
                return Ok(Output::Raw(g.to_dot()));
            }
            Report::Graph(graph_report(input, &g)?)
        }
        Command::Cluster(ClusterCmd::Build { input, dot }) => {
            let c = load_cluster(input)?;
            if *dot {
                return Ok(Output::Raw(c.simulate()?.to_dot()));
            }
            Report::Cluster(cluster_report(input, &c)?)
        }
        Command::Val(ValCmd::Compare { input, e, f }) => Report::Compare(compare_report(input, &load_cluster(input)?, *e, *f)?),
        Command::Val(ValCmd::Ord { input, e, poly }) => Report::Ord(ord_report(input, &load_cluster(input)?, *e, poly)?),
        Command::Adj(AdjCmd::Obstruct(a)) => match &a.returns {
            Some(b) => Report::Returns(returns_report(
                &a.input,
                &load(&a.input)?,
                b.clone(),
                a.special,
                a.require_indeterminacy,
            )?),
            None => {
                let (Some(e), Some(f)) = (a.e, a.f) else {
                    return Err(CliError::input("adj obstruct needs e and f, or --returns"));
                };
                Report::Obstruct(obstruct_report(&a.input, &load_cluster(&a.input)?, e, f)?)
            }
        },
        Command::Adj(AdjCmd::Table { input }) => Report::Table(table_report(input, &load_cluster(input)?)?),
        Command::Euler(EulerCmd::Bound { input, coeffs, attach }) => {
            Report::Euler(euler_report(input, load_graph(input)?, coeffs.clone(), *attach)?)
        }
        Command::Dfd(DfdCmd::Check {
            input,
            minimal_target,
            assert_b1_lt_1,
            assert_no_lift,
        }) => {
            let text = read(input)?;
            let source = input.display().to_string();
            let mut model = document::parse_dfd(&text, |name| {
                cluster_by_name(name.strip_prefix("fixtures/").unwrap_or(name))
            })
            .map_err(|diagnostics| CliError {
                code: EXIT_INPUT,
                message: format!("{source}: invalid document"),
                diagnostics,
            })?;
            model.minimal_target |= minimal_target;
            model.assert_b1_lt_1 |= assert_b1_lt_1;
            model.assert_no_lift |= assert_no_lift;
            Report::Dfd(dfd_report(&source, &model)?)
        }
        Command::Pair(PairCmd::Canon { input, e, f, kb }) => {
            Report::Pair(pair_report(input, &load(input)?, *e, *f, kb.as_deref())?)
        }
        Command::Validate(v) => {
            let text = read(&v.input)?;
            let kind = match v.kind {
                DocKind::Graph => DocumentKind::Graph,
                DocKind::Cluster => DocumentKind::Cluster,
                DocKind::Dfd => DocumentKind::Dfd,
            };
            let diagnostics = document::validate(&text, kind);
            let code = if diagnostics.is_empty() { EXIT_OK } else { EXIT_INPUT };
            return Ok(Output::Report(
                Box::new(Report::Validate(ValidateReport {
                    source: v.input.display().to_string(),
                    kind,
                    diagnostics,
                })),
                code,
            ));
        }
    };
    Ok(Output::Report(Box::new(report), EXIT_OK))
}

/// Runs a parsed command line: `(exit code, stdout, stderr)`.
pub fn run(cli: &Cli) -> (i32, String, String) {
    match execute(&cli.command) {
        Ok(Output::Raw(s)) => (EXIT_OK, s, String::new()),
        Ok(Output::Report(r, code)) => {
            let out = match cli.format {
                Format::Text => render::text(&r),
                Format::Structured => {
                    let mut s = serde_json::to_string_pretty(&r).expect("reports serialize");
                    s.push('\n');
                    s
                }
            };
            (code, out, String::new())
        }
        Err(e) => match cli.format {
            Format::Text => (e.code, String::new(), format!("{e}\n")),
            Format::Structured => {
                let mut s = serde_json::to_string_pretty(&e).expect("errors serialize");
                s.push('\n');
                (e.code, s, String::new())
            }
        },
    }
}
