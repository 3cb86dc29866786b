//! Input loading for the CLI: matrix-or-graph sniffing and selection lists.

use std::fs;
use std::path::Path;

use kronctrl_core::{Error, InputSelection, Mat, WeightedDigraph};

/// Reads a file and returns its contents, mapping IO failures to parse
/// errors so they share the exit-2 path.
pub fn read_input(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))
}

/// A system matrix source: either a raw matrix file or a graph file
/// (detected by the `graph` header), converted through its adjacency matrix.
pub fn load_matrix(path: &Path) -> Result<Mat, Error> {
    let text = read_input(path)?;
    if is_graph_text(&text) {
        Ok(WeightedDigraph::parse(&text)?.adjacency())
    } else {
        Mat::parse_text(&text)
    }
}

pub fn load_graph(path: &Path) -> Result<WeightedDigraph, Error> {
    WeightedDigraph::parse(&read_input(path)?)
}

fn is_graph_text(text: &str) -> bool {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .find(|l| !l.is_empty())
        .map(|l| l.starts_with("graph"))
        .unwrap_or(false)
}

/// Parses an actuated-node list: comma-separated 1-based indices, `all`, or
/// `none`.
pub fn parse_selection(spec: &str, total_nodes: usize) -> Result<InputSelection, Error> {
    let spec = spec.trim();
    match spec {
        "all" => Ok(InputSelection::full(total_nodes)),
        "" | "none" => Ok(InputSelection::empty(total_nodes)),
        _ => {
            let nodes = spec
                .split(',')
                .map(|tok| {
                    tok.trim().parse::<usize>().map_err(|_| {
                        Error::Invalid(format!("invalid node index '{}'", tok.trim()))
                    })
                })
                .collect::<Result<Vec<usize>, Error>>()?;
            InputSelection::new(total_nodes, nodes)
        }
    }
}
