//! Instance files.
//!
//! - knapsack: JSON `{"weights": [..], "profits": [..], "capacity": W}`
//! - tsp: full weight matrix, one whitespace-separated row per line
//! - sssp/apsp: header `n m`, then `m` lines `u v w` with 1-based vertices
//!
//! Blank lines and lines starting with `#` are ignored in the text formats.

use std::fmt::Write as _;
use std::path::Path;

use clap::ValueEnum;
use dynevo::problems::{Graph, KnapsackInstance, TspInstance};
use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ProblemKind {
    Knapsack,
    Tsp,
    Sssp,
    Apsp,
}

impl ProblemKind {
    pub fn name(self) -> &'static str {
        match self {
            ProblemKind::Knapsack => "knapsack",
            ProblemKind::Tsp => "tsp",
            ProblemKind::Sssp => "sssp",
            ProblemKind::Apsp => "apsp",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Instance {
    Knapsack(KnapsackInstance),
    Tsp(TspInstance),
    Graph(Graph),
}

fn invalid(msg: impl Into<String>) -> HarnessError {
    HarnessError::Validation(msg.into())
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_ints(line_no: usize, line: &str) -> Result<Vec<i64>> {
    line.split_whitespace()
        .map(|tok| {
            tok.parse::<i64>()
                .map_err(|_| invalid(format!("line {line_no}: `{tok}` is not an integer")))
        })
        .collect()
}

pub fn parse_tsp(text: &str) -> Result<TspInstance> {
    let rows = content_lines(text)
        .map(|(no, line)| parse_ints(no, line))
        .collect::<Result<Vec<_>>>()?;
    Ok(TspInstance::new(rows)?)
}

pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut lines = content_lines(text);
    let (no, header) = lines.next().ok_or_else(|| invalid("empty graph file"))?;
    let header = parse_ints(no, header)?;
    let [n, m] = header[..] else {
        return Err(invalid(format!("line {no}: expected `n m`")));
    };
    if n < 1 || m < 0 {
        return Err(invalid(format!("line {no}: invalid sizes n={n} m={m}")));
    }
    let mut edges = Vec::with_capacity(m as usize);
    for (no, line) in lines {
        let fields = parse_ints(no, line)?;
        let [u, v, w] = fields[..] else {
            return Err(invalid(format!("line {no}: expected `u v w`")));
        };
        if u < 1 || v < 1 || u > n || v > n {
            return Err(invalid(format!("line {no}: vertex outside 1..={n}")));
        }
        edges.push((u as usize - 1, v as usize - 1, w));
    }
    if edges.len() != m as usize {
        return Err(invalid(format!(
            "header announces {m} edges, found {}",
            edges.len()
        )));
    }
    Ok(Graph::from_edges(n as usize, &edges)?)
}

pub fn parse_knapsack(text: &str) -> Result<KnapsackInstance> {
    let inst: KnapsackInstance =
        serde_json::from_str(text).map_err(|e| invalid(format!("knapsack file: {e}")))?;
    inst.validate()?;
    Ok(inst)
}

pub fn parse_instance(kind: ProblemKind, text: &str) -> Result<Instance> {
    Ok(match kind {
        ProblemKind::Knapsack => Instance::Knapsack(parse_knapsack(text)?),
        ProblemKind::Tsp => Instance::Tsp(parse_tsp(text)?),
        ProblemKind::Sssp | ProblemKind::Apsp => Instance::Graph(parse_graph(text)?),
    })
}

pub fn render_instance(instance: &Instance) -> String {
    match instance {
        Instance::Knapsack(k) => {
            let mut s = serde_json::to_string_pretty(k).expect("plain data serializes");
            s.push('\n');
            s
        }
        Instance::Tsp(t) => {
            let mut s = String::new();
            for row in &t.weights {
                let cells: Vec<String> = row.iter().map(|w| w.to_string()).collect();
                writeln!(s, "{}", cells.join(" ")).unwrap();
            }
            s
        }
        Instance::Graph(g) => {
            let edges = g.edges();
            let mut s = format!("{} {}\n", g.len(), edges.len());
            for (u, v, w) in edges {
                writeln!(s, "{} {} {}", u + 1, v + 1, w).unwrap();
            }
            s
        }
    }
}

pub fn read_instance(kind: ProblemKind, path: &Path) -> Result<Instance> {
    let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
    parse_instance(kind, &text)
}

/// Writes `content` to `path`, or to stdout when `path` is `None`.
pub fn write_output(path: Option<&Path>, content: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, content).map_err(|e| HarnessError::io(p, e)),
        None => {
            use std::io::Write;
            std::io::stdout()
                .write_all(content.as_bytes())
                .map_err(|e| HarnessError::io("<stdout>", e))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graph_round_trip() {
        let text = "# triangle\n3 3\n1 2 1\n2 3 1\n1 3 3\n";
        let g = parse_graph(text).unwrap();
        assert_eq!(g.weight(0, 2), Some(3));
        assert_eq!(
            render_instance(&Instance::Graph(g.clone())),
            "3 3\n1 2 1\n1 3 3\n2 3 1\n"
        );
        assert_eq!(
            parse_graph(&render_instance(&Instance::Graph(g.clone()))).unwrap(),
            g
        );
    }

    #[test]
    fn graph_errors() {
        assert!(parse_graph("").is_err());
        assert!(parse_graph("2 1\n1 3 4\n").is_err());
        assert!(parse_graph("2 2\n1 2 4\n").is_err());
        assert!(parse_graph("2 1\n1 x 4\n").is_err());
    }

    #[test]
    fn tsp_round_trip() {
        let text = "0 1 2\n1 0 3\n2 3 0\n";
        let t = parse_tsp(text).unwrap();
        assert_eq!(render_instance(&Instance::Tsp(t)), text);
        assert!(parse_tsp("0 1\n1 0\n").is_err());
        assert!(parse_tsp("0 1 2\n1 0\n2 3 0\n").is_err());
    }

    #[test]
    fn knapsack_round_trip() {
        let text = r#"{"weights": [2, 3], "profits": [3, 4], "capacity": 5}"#;
        let k = parse_knapsack(text).unwrap();
        let again = parse_knapsack(&render_instance(&Instance::Knapsack(k.clone()))).unwrap();
        assert_eq!(k, again);
        assert!(parse_knapsack(r#"{"weights": [0], "profits": [3], "capacity": 5}"#).is_err());
        assert!(parse_knapsack("{").is_err());
    }
}
