use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use gbgc::io::{self, CoarsenRecord};
use gbgc::pipeline::{self, PipelineOptions};
use gbgc::Graph;

use crate::{Format, Invocation};

fn load_graphs(inv: &Invocation) -> Result<Vec<Graph>> {
    let input = inv.input.as_deref().context("--input is required")?;
    match inv.format {
        Format::Edgelist => Ok(vec![io::parse_edge_list(input)?]),
        Format::Tudataset => {
            let name = match &inv.name {
                Some(n) => n.clone(),
                None => input
                    .file_name()
                    .and_then(|s| s.to_str())
                    .map(str::to_owned)
                    .with_context(|| format!("cannot derive a dataset name from {}", input.display()))?,
            };
            Ok(io::parse_tudataset(input, &name)?.graphs)
        }
    }
}

fn options(inv: &Invocation) -> PipelineOptions {
    PipelineOptions {
        coarsen: inv.coarsen,
        eval: inv.eval,
        skip_sd: inv.skip_sd,
        jobs: inv.jobs,
    }
}

fn mean(values: impl Iterator<Item = f64>) -> f64 {
    let (sum, count) = values.fold((0.0, 0usize), |(s, c), v| (s + v, c + 1));
    if count == 0 {
        f64::NAN
    } else {
        sum / count as f64
    }
}

/// Keeps successful records, reporting failures on stderr.
fn split_failures<T>(results: Vec<gbgc::Result<T>>) -> (Vec<T>, usize) {
    let mut ok = Vec::with_capacity(results.len());
    let mut failed = 0;
    for (i, r) in results.into_iter().enumerate() {
        match r {
            Ok(v) => ok.push(v),
            Err(e) => {
                failed += 1;
                eprintln!("graph {i}: {e}");
            }
        }
    }
    (ok, failed)
}

fn summary(records: &[CoarsenRecord], failed: usize, skip_sd: bool, started: Instant) -> String {
    let mut line = format!(
        "graphs={} failed={failed} mean_r_a={:.6}",
        records.len(),
        mean(records.iter().map(|r| r.r_a))
    );
    if !skip_sd {
        let _ = write!(line, " mean_sd={:.6}", mean(records.iter().filter_map(|r| r.sd)));
    }
    let _ = write!(line, " wall_ms={}", started.elapsed().as_millis());
    line
}

fn exit_for(failed: usize) -> ExitCode {
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

pub fn run_coarsen(inv: &Invocation) -> Result<ExitCode> {
    let started = Instant::now();
    let graphs = load_graphs(inv)?;
    let results = pipeline::coarsen_dataset(&graphs, &options(inv));
    let (records, failed) = split_failures(results);
    io::write_results(&records, &inv.output)?;
    println!("{}", summary(&records, failed, inv.skip_sd, started));
    Ok(exit_for(failed))
}

pub fn run_evaluate(inv: &Invocation, mapping: &Path) -> Result<ExitCode> {
    let started = Instant::now();
    let graphs = load_graphs(inv)?;
    let entries = io::read_mapping(mapping)?;
    if entries.len() != graphs.len() {
        bail!(
            "{} lists {} graphs but the input has {}",
            mapping.display(),
            entries.len(),
            graphs.len()
        );
    }
    let results = pipeline::evaluate_dataset(&graphs, &entries, &inv.eval, inv.jobs);
    let (evaluations, failed) = split_failures(results);
    let records: Vec<CoarsenRecord> = evaluations.iter().map(|e| e.record.clone()).collect();
    fs::create_dir_all(&inv.output).with_context(|| inv.output.display().to_string())?;
    let report: String = std::iter::once(io::REPORT_HEADER.to_string())
        .chain(records.iter().map(io::report_line))
        .map(|l| l + "\n")
        .collect();
    let report_path = inv.output.join(io::REPORT_FILE);
    fs::write(&report_path, report).with_context(|| report_path.display().to_string())?;
    let samples: Vec<_> = evaluations
        .iter()
        .map(|e| (e.record.graph_index, e.report.rayleigh_samples.clone()))
        .collect();
    io::write_rayleigh(&samples, &inv.output.join(io::RAYLEIGH_FILE))?;
    println!("{}", summary(&records, failed, false, started));
    Ok(exit_for(failed))
}

pub fn run_bench(inv: &Invocation, sizes: &[usize]) -> Result<ExitCode> {
    fs::create_dir_all(&inv.output).with_context(|| inv.output.display().to_string())?;
    let mut csv = String::from("n,e,n_bar,r_a,elapsed_micros\n");
    for &n in sizes {
        let g = pipeline::bench_graph(n);
        let row = pipeline::scaling_row(&g, &inv.coarsen)?;
        let line = format!(
            "{},{},{},{:.6},{}",
            row.n, row.e, row.n_bar, row.r_a, row.elapsed_micros
        );
        println!("{line}");
        csv.push_str(&line);
        csv.push('\n');
    }
    let bench_path = inv.output.join("bench.csv");
    fs::write(&bench_path, csv).with_context(|| bench_path.display().to_string())?;

    if !inv.skip_sd {
        let n = 1_000;
        let control = pipeline::sd_control(&pipeline::bench_graph(n), &inv.coarsen, &inv.eval, n as u64)?;
        let line = format!("{n},{:.6},{:.6}", control.gbgc_sd, control.random_sd);
        println!("gbgc_sd vs random_sd: {line}");
        let path = inv.output.join("bench_sd.csv");
        fs::write(&path, format!("n,gbgc_sd,random_sd\n{line}\n"))
            .with_context(|| path.display().to_string())?;
    }
    Ok(ExitCode::SUCCESS)
}
