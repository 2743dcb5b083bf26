use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Graphs of one TUDataset collection, in ascending graph-id order.
#[derive(Clone, Debug, PartialEq)]
pub struct DatasetBundle {
    pub name: String,
    pub graphs: Vec<Graph>,
    pub graph_labels: Option<Vec<i64>>,
}

impl DatasetBundle {
    pub fn mean_node_count(&self) -> f64 {
        let total: usize = self.graphs.iter().map(Graph::node_count).sum();
        total as f64 / self.graphs.len() as f64
    }

    pub fn mean_edge_count(&self) -> f64 {
        let total: usize = self.graphs.iter().map(Graph::edge_count).sum();
        total as f64 / self.graphs.len() as f64
    }
}

const IGNORED_SUFFIXES: [&str; 5] = [
    "node_labels",
    "node_attributes",
    "edge_labels",
    "edge_attributes",
    "graph_attributes",
];

fn read(path: &Path) -> Result<String> {
    if !path.exists() {
        return Err(Error::MissingFile(path.to_path_buf()));
    }
    fs::read_to_string(path).map_err(Error::io(path))
}

fn parse_int<T: std::str::FromStr>(path: &Path, line: usize, token: &str) -> Result<T> {
    token.trim().parse().map_err(|_| Error::Parse {
        path: path.to_path_buf(),
        line,
        message: format!("expected an integer, found {:?}", token.trim()),
    })
}

/// Non-blank lines with 1-based line numbers.
fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty())
}

/// Reads `<name>_A.txt`, `<name>_graph_indicator.txt` and, when present,
/// `<name>_graph_labels.txt` from `dir`.
pub fn parse_tudataset(dir: &Path, name: &str) -> Result<DatasetBundle> {
    let file = |suffix: &str| dir.join(format!("{name}_{suffix}.txt"));
    let indicator_path = file("graph_indicator");
    let edges_path = file("A");

    let indicator_text = read(&indicator_path)?;
    let mut node_graph_ids = Vec::new();
    for (line, text) in lines(&indicator_text) {
        node_graph_ids.push(parse_int::<i64>(&indicator_path, line, text)?);
    }
    let graph_index: BTreeMap<i64, usize> = {
        let mut ids: Vec<i64> = node_graph_ids.clone();
        ids.sort_unstable();
        ids.dedup();
        ids.into_iter().enumerate().map(|(i, id)| (id, i)).collect()
    };
    let graph_count = graph_index.len();
    if graph_count == 0 {
        return Err(Error::Parse {
            path: indicator_path,
            line: 1,
            message: "no nodes listed".into(),
        });
    }

    // global node -> (graph, local index), local indices in file order
    let mut sizes = vec![0usize; graph_count];
    let placement: Vec<(usize, usize)> = node_graph_ids
        .iter()
        .map(|id| {
            let gi = graph_index[id];
            sizes[gi] += 1;
            (gi, sizes[gi] - 1)
        })
        .collect();

    let edges_text = read(&edges_path)?;
    let mut edge_lists = vec![Vec::new(); graph_count];
    for (line, text) in lines(&edges_text) {
        let mut parts = text.split(',');
        let (Some(a), Some(b), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(Error::Parse {
                path: edges_path,
                line,
                message: format!("expected \"u, v\", found {text:?}"),
            });
        };
        let u: usize = parse_int(&edges_path, line, a)?;
        let v: usize = parse_int(&edges_path, line, b)?;
        let node_count = placement.len();
        for x in [u, v] {
            if x == 0 || x > node_count {
                return Err(Error::Parse {
                    path: edges_path,
                    line,
                    message: format!("node {x} outside 1..={node_count}"),
                });
            }
        }
        let (gu, lu) = placement[u - 1];
        let (gv, lv) = placement[v - 1];
        if gu != gv {
            return Err(Error::CrossGraphEdge {
                path: edges_path,
                line,
                u,
                v,
                graph_u: gu + 1,
                graph_v: gv + 1,
            });
        }
        edge_lists[gu].push((lu, lv));
    }

    let graphs = sizes
        .iter()
        .zip(&edge_lists)
        .map(|(&n, edges)| Graph::from_edge_list(n, edges))
        .collect::<Result<Vec<_>>>()?;

    let labels_path = file("graph_labels");
    let graph_labels = if labels_path.exists() {
        let text = read(&labels_path)?;
        let labels = lines(&text)
            .map(|(line, t)| parse_int::<i64>(&labels_path, line, t))
            .collect::<Result<Vec<_>>>()?;
        if labels.len() != graph_count {
            return Err(Error::Parse {
                path: labels_path,
                line: labels.len(),
                message: format!("{} labels for {graph_count} graphs", labels.len()),
            });
        }
        Some(labels)
    } else {
        None
    };

    for suffix in IGNORED_SUFFIXES {
        let path = file(suffix);
        if path.exists() {
            log::info!("ignoring {}", path.display());
        }
    }

    Ok(DatasetBundle {
        name: name.to_string(),
        graphs,
        graph_labels,
    })
}

/// Writes `bundle` in TUDataset layout; each undirected edge is listed in
/// both directions.
pub fn write_tudataset(bundle: &DatasetBundle, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(Error::io(dir))?;
    let path = |suffix: &str| dir.join(format!("{}_{suffix}.txt", bundle.name));

    let mut indicator = String::new();
    let mut edges = String::new();
    let mut offset = 0;
    for (gi, g) in bundle.graphs.iter().enumerate() {
        for _ in 0..g.node_count() {
            indicator.push_str(&format!("{}\n", gi + 1));
        }
        for (u, v) in g.edges() {
            let (a, b) = (u + offset + 1, v + offset + 1);
            edges.push_str(&format!("{a}, {b}\n{b}, {a}\n"));
        }
        offset += g.node_count();
    }
    write_file(&path("graph_indicator"), &indicator)?;
    write_file(&path("A"), &edges)?;
    if let Some(labels) = &bundle.graph_labels {
        let text: String = labels.iter().map(|l| format!("{l}\n")).collect();
        write_file(&path("graph_labels"), &text)?;
    }
    Ok(())
}

pub(crate) fn write_file(path: &PathBuf, contents: &str) -> Result<()> {
    let mut f = fs::File::create(path).map_err(Error::io(path))?;
    f.write_all(contents.as_bytes()).map_err(Error::io(path))
}
