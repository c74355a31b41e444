use std::fmt;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use wedgekit::document::{self, Diagnostic};
use wedgekit::fixtures::{cluster_by_name, graph_by_name};
use wedgekit::{BlowupCluster, DualGraph, Error};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_INVARIANT: i32 = 3;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CliError {
    pub code: i32,
    pub message: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub diagnostics: Vec<Diagnostic>,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_INPUT,
            message: message.into(),
            diagnostics: Vec::new(),
        }
    }

    fn document(source: &str, diagnostics: Vec<Diagnostic>) -> Self {
        CliError {
            code: EXIT_INPUT,
            message: format!("{source}: invalid document"),
            diagnostics,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Invariant(_) => EXIT_INVARIANT,
            _ => EXIT_INPUT,
        };
        CliError {
            code,
            message: e.to_string(),
            diagnostics: Vec::new(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "error: {}", self.message)?;
        for d in &self.diagnostics {
            write!(f, "\n  {d}")?;
        }
        Ok(())
    }
}

pub enum Input {
    Graph(DualGraph),
    Cluster(BlowupCluster),
}

pub fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

/// A document path, or a fixture name with an optional `fixtures/` prefix.
pub fn load(arg: &str) -> Result<Input, CliError> {
    let path = Path::new(arg);
    if path.is_file() {
        let text = read(path)?;
        let is_cluster = serde_json::from_str::<serde_json::Value>(&text)
            .ok()
            .and_then(|v| v.as_object().map(|o| o.contains_key("points")))
            .unwrap_or(false);
        return if is_cluster {
            document::parse_cluster(&text)
                .map(Input::Cluster)
                .map_err(|d| CliError::document(arg, d))
        } else {
            document::parse_graph(&text)
                .map(Input::Graph)
                .map_err(|d| CliError::document(arg, d))
        };
    }
    let name = arg.strip_prefix("fixtures/").unwrap_or(arg);
    if let Some(c) = cluster_by_name(name) {
        return Ok(Input::Cluster(c));
    }
    if let Some(g) = graph_by_name(name) {
        return Ok(Input::Graph(g));
    }
    Err(CliError::input(format!("{arg}: no such file or fixture")))
}

pub fn load_cluster(arg: &str) -> Result<BlowupCluster, CliError> {
    match load(arg)? {
        Input::Cluster(c) => Ok(c),
        Input::Graph(_) => Err(CliError::input(format!("{arg}: expected a cluster, got a graph"))),
    }
}

/// A graph, or the final dual graph of a cluster.
pub fn load_graph(arg: &str) -> Result<DualGraph, CliError> {
    match load(arg)? {
        Input::Graph(g) => Ok(g),
        Input::Cluster(c) => Ok(c.simulate()?),
    }
}
