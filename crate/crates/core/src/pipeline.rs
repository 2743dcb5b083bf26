//! Dataset-level orchestration: coarsen, evaluate and benchmark many graphs.

use std::time::{Duration, Instant};

use crate::coarse::{build_coarse_graph, build_projection, CoarsenedGraph, ProjectionMap};
use crate::engine::{achieved_ratio, coarsen, CoarsenConfig, Partition};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::io::{CoarsenRecord, MappingEntry};
use crate::par::map_ordered;
use crate::spectral::{coarse_spectral_distance, evaluate, EvalConfig, SpectralReport};
use crate::synth::{erdos_renyi, random_assignment_like};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PipelineOptions {
    pub coarsen: CoarsenConfig,
    pub eval: EvalConfig,
    pub skip_sd: bool,
    pub jobs: usize,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions {
            coarsen: CoarsenConfig::default(),
            eval: EvalConfig::default(),
            skip_sd: false,
            jobs: 1,
        }
    }
}

/// Everything produced by coarsening one graph.
#[derive(Clone, Debug)]
pub struct Coarsening {
    pub partition: Partition,
    pub projection: ProjectionMap,
    pub coarse: CoarsenedGraph,
    /// Partitioning plus coarse-graph construction.
    pub elapsed: Duration,
}

pub fn coarsen_full(g: &Graph, cfg: &CoarsenConfig) -> Result<Coarsening> {
    let start = Instant::now();
    let partition = coarsen(g, cfg)?;
    let projection = build_projection(&partition, g.node_count())?;
    let coarse = build_coarse_graph(g, &projection)?;
    Ok(Coarsening {
        partition,
        projection,
        coarse,
        elapsed: start.elapsed(),
    })
}

fn record(index: usize, g: &Graph, c: &Coarsening, sd: Option<f64>) -> CoarsenRecord {
    CoarsenRecord {
        graph_index: index,
        node_count: g.node_count(),
        edge_count: g.edge_count(),
        assignment: c.projection.column_of.clone(),
        supernode_count: c.coarse.supernode_count,
        superedges: c.coarse.superedges.clone(),
        sd,
        r_a: achieved_ratio(&c.partition, g.node_count()),
        elapsed_micros: c.elapsed.as_micros(),
    }
}

pub fn coarsen_graph(index: usize, g: &Graph, opts: &PipelineOptions) -> Result<CoarsenRecord> {
    let c = coarsen_full(g, &opts.coarsen)?;
    let sd = if opts.skip_sd {
        None
    } else {
        Some(coarse_spectral_distance(g, &c.coarse, &opts.eval)?)
    };
    Ok(record(index, g, &c, sd))
}

/// Coarsens every graph; results are in input order regardless of `jobs`.
pub fn coarsen_dataset(graphs: &[Graph], opts: &PipelineOptions) -> Vec<Result<CoarsenRecord>> {
    map_ordered(graphs, opts.jobs, |i, g| coarsen_graph(i, g, opts))
}

#[derive(Clone, Debug)]
pub struct Evaluation {
    pub record: CoarsenRecord,
    pub report: SpectralReport,
}

/// Re-evaluates a stored assignment without coarsening again.
pub fn evaluate_assignment(
    index: usize,
    g: &Graph,
    assignment: &[usize],
    eval: &EvalConfig,
) -> Result<Evaluation> {
    let start = Instant::now();
    let partition = Partition::from_assignment(g, assignment)?;
    let projection = ProjectionMap::from_assignment(assignment.to_vec())?;
    let coarse = build_coarse_graph(g, &projection)?;
    let elapsed = start.elapsed();
    let report = evaluate(g, &coarse, &partition, &projection, eval)?;
    let c = Coarsening {
        partition,
        projection,
        coarse,
        elapsed,
    };
    Ok(Evaluation {
        record: record(index, g, &c, Some(report.sd)),
        report,
    })
}

/// Pairs each mapping entry with its graph and evaluates it.
pub fn evaluate_dataset(
    graphs: &[Graph],
    entries: &[MappingEntry],
    eval: &EvalConfig,
    jobs: usize,
) -> Vec<Result<Evaluation>> {
    map_ordered(entries, jobs, |_, entry| {
        let g = graphs.get(entry.graph_index).ok_or_else(|| {
            Error::InvalidPartition(format!(
                "mapping refers to graph {} but the input has {} graphs",
                entry.graph_index,
                graphs.len()
            ))
        })?;
        let eval_result = evaluate_assignment(entry.graph_index, g, &entry.assignment, eval)?;
        if eval_result.record.supernode_count != entry.supernode_count {
            return Err(Error::InvalidPartition(format!(
                "graph {}: mapping declares {} supernodes but the assignment uses {}",
                entry.graph_index, entry.supernode_count, eval_result.record.supernode_count
            )));
        }
        Ok(eval_result)
    })
}

/// One timing row of the scaling benchmark.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalingRow {
    pub n: usize,
    pub e: usize,
    pub n_bar: usize,
    pub r_a: f64,
    pub elapsed_micros: u128,
}

pub const BENCH_SIZES: [usize; 4] = [1_000, 5_000, 10_000, 50_000];
pub const BENCH_MEAN_DEGREE: f64 = 4.0;

/// Benchmark graph for size `n`, seeded by its size.
pub fn bench_graph(n: usize) -> Graph {
    erdos_renyi(n, BENCH_MEAN_DEGREE, n as u64)
}

/// Times coarsening (partition plus coarse graph) of one graph.
pub fn scaling_row(g: &Graph, cfg: &CoarsenConfig) -> Result<ScalingRow> {
    let c = coarsen_full(g, cfg)?;
    Ok(ScalingRow {
        n: g.node_count(),
        e: g.edge_count(),
        n_bar: c.coarse.supernode_count,
        r_a: achieved_ratio(&c.partition, g.node_count()),
        elapsed_micros: c.elapsed.as_micros(),
    })
}

/// SD of the engine's partition and of a size-matched random partition.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SdControl {
    pub gbgc_sd: f64,
    pub random_sd: f64,
}

pub fn sd_control(g: &Graph, cfg: &CoarsenConfig, eval: &EvalConfig, seed: u64) -> Result<SdControl> {
    let c = coarsen_full(g, cfg)?;
    let gbgc_sd = coarse_spectral_distance(g, &c.coarse, eval)?;
    let random = ProjectionMap::from_assignment(random_assignment_like(&c.partition, seed))?;
    let random_sd = coarse_spectral_distance(g, &build_coarse_graph(g, &random)?, eval)?;
    Ok(SdControl { gbgc_sd, random_sd })
}
