//! Result files: `mapping.jsonl`, `coarse_edges.txt`, `report.csv` and the
//! optional `rayleigh.csv`.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::tudataset::write_file;
use crate::error::{Error, Result};
use crate::spectral::RayleighSample;

pub const MAPPING_FILE: &str = "mapping.jsonl";
pub const COARSE_EDGES_FILE: &str = "coarse_edges.txt";
pub const REPORT_FILE: &str = "report.csv";
pub const RAYLEIGH_FILE: &str = "rayleigh.csv";
pub const REPORT_HEADER: &str = "graph_index,n,e,n_bar,e_bar,r_a,sd,elapsed_micros";

/// One coarsened graph.
#[derive(Clone, Debug, PartialEq)]
pub struct CoarsenRecord {
    pub graph_index: usize,
    pub node_count: usize,
    pub edge_count: usize,
    pub assignment: Vec<usize>,
    pub supernode_count: usize,
    pub superedges: Vec<(usize, usize)>,
    /// `None` when spectral distance was skipped.
    pub sd: Option<f64>,
    pub r_a: f64,
    pub elapsed_micros: u128,
}

/// One line of `mapping.jsonl`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MappingEntry {
    pub graph_index: usize,
    pub assignment: Vec<usize>,
    pub supernode_count: usize,
}

/// One parsed row of `report.csv`.
#[derive(Clone, Debug, PartialEq)]
pub struct ReportRow {
    pub graph_index: usize,
    pub n: usize,
    pub e: usize,
    pub n_bar: usize,
    pub e_bar: usize,
    pub r_a: f64,
    pub sd: Option<f64>,
    pub elapsed_micros: u128,
}

pub fn mapping_line(record: &CoarsenRecord) -> String {
    let entry = MappingEntry {
        graph_index: record.graph_index,
        assignment: record.assignment.clone(),
        supernode_count: record.supernode_count,
    };
    serde_json::to_string(&entry).expect("mapping entries always serialize")
}

pub fn report_line(record: &CoarsenRecord) -> String {
    let sd = record.sd.map(|s| format!("{s:.6}")).unwrap_or_default();
    format!(
        "{},{},{},{},{},{:.6},{},{}",
        record.graph_index,
        record.node_count,
        record.edge_count,
        record.supernode_count,
        record.superedges.len(),
        record.r_a,
        sd,
        record.elapsed_micros
    )
}

/// Writes the three result files into `out_dir`, creating it if needed.
pub fn write_results(records: &[CoarsenRecord], out_dir: &Path) -> Result<()> {
    fs::create_dir_all(out_dir).map_err(Error::io(out_dir))?;
    let mut mapping = String::new();
    let mut edges = String::new();
    let mut report = format!("{REPORT_HEADER}\n");
    for r in records {
        mapping.push_str(&mapping_line(r));
        mapping.push('\n');
        let _ = writeln!(edges, "graph {}", r.graph_index);
        for (a, b) in &r.superedges {
            let _ = writeln!(edges, "{a} {b}");
        }
        report.push_str(&report_line(r));
        report.push('\n');
    }
    write_file(&out_dir.join(MAPPING_FILE), &mapping)?;
    write_file(&out_dir.join(COARSE_EDGES_FILE), &edges)?;
    write_file(&out_dir.join(REPORT_FILE), &report)
}

/// Writes `graph_index,sample,r_o,r_c,relative_gap` rows.
pub fn write_rayleigh(samples: &[(usize, Vec<RayleighSample>)], path: &Path) -> Result<()> {
    let mut out = String::from("graph_index,sample,r_o,r_c,relative_gap\n");
    for (graph_index, rows) in samples {
        for (i, s) in rows.iter().enumerate() {
            let _ = writeln!(
                out,
                "{graph_index},{i},{:.6},{:.6},{:.6}",
                s.original, s.coarse, s.relative_gap
            );
        }
    }
    write_file(&path.to_path_buf(), &out)
}

fn parse_error(path: &Path, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        path: PathBuf::from(path),
        line,
        message: message.into(),
    }
}

pub fn read_mapping(path: &Path) -> Result<Vec<MappingEntry>> {
    let text = fs::read_to_string(path).map_err(Error::io(path))?;
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| serde_json::from_str(l).map_err(|e| parse_error(path, i + 1, e.to_string())))
        .collect()
}

pub fn read_report(path: &Path) -> Result<Vec<ReportRow>> {
    let text = fs::read_to_string(path).map_err(Error::io(path))?;
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header == REPORT_HEADER => {}
        _ => return Err(parse_error(path, 1, "missing report header")),
    }
    lines
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            let line = i + 1;
            let fields: Vec<&str> = l.split(',').collect();
            if fields.len() != 8 {
                return Err(parse_error(path, line, format!("expected 8 fields, found {}", fields.len())));
            }
            let int = |s: &str| s.parse::<usize>().map_err(|e| parse_error(path, line, e.to_string()));
            let real = |s: &str| s.parse::<f64>().map_err(|e| parse_error(path, line, e.to_string()));
            Ok(ReportRow {
                graph_index: int(fields[0])?,
                n: int(fields[1])?,
                e: int(fields[2])?,
                n_bar: int(fields[3])?,
                e_bar: int(fields[4])?,
                r_a: real(fields[5])?,
                sd: if fields[6].is_empty() { None } else { Some(real(fields[6])?) },
                elapsed_micros: fields[7]
                    .parse()
                    .map_err(|e: std::num::ParseIntError| parse_error(path, line, e.to_string()))?,
            })
        })
        .collect()
}
