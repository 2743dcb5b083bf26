use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Parses whitespace-separated `u v` lines (0-indexed). Lines starting with
/// `#` or `%` are comments; an optional `n <count>` header fixes the node
/// count, otherwise it is one more than the largest index.
pub fn parse_edge_list(path: &Path) -> Result<Graph> {
    let text = fs::read_to_string(path).map_err(Error::io(path))?;
    parse_edge_list_str(&text, path)
}

/// As [`parse_edge_list`], with `origin` used only in error messages.
pub fn parse_edge_list_str(text: &str, origin: &Path) -> Result<Graph> {
    let err = |line: usize, message: String| Error::Parse {
        path: origin.to_path_buf(),
        line,
        message,
    };
    let int = |line: usize, tok: &str| -> Result<usize> {
        tok.parse()
            .map_err(|_| err(line, format!("expected a non-negative integer, found {tok:?}")))
    };

    let mut declared = None;
    let mut edges = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') || trimmed.starts_with('%') {
            continue;
        }
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        match tokens.as_slice() {
            ["n", count] if declared.is_none() && edges.is_empty() => {
                declared = Some(int(line, count)?);
            }
            [u, v] => edges.push((int(line, u)?, int(line, v)?)),
            _ => return Err(err(line, format!("expected \"u v\", found {trimmed:?}"))),
        }
    }
    let node_count = declared.unwrap_or_else(|| {
        edges
            .iter()
            .map(|&(u, v)| u.max(v) + 1)
            .max()
            .unwrap_or(0)
    });
    Graph::from_edge_list(node_count, &edges)
}

pub fn format_edge_list(g: &Graph) -> String {
    let mut out = format!("n {}\n", g.node_count());
    for (u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

pub fn write_edge_list(g: &Graph, path: &Path) -> Result<()> {
    fs::write(path, format_edge_list(g)).map_err(Error::io(path))
}
