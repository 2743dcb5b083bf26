//! Granular-ball coarsening: degree-seeded BFS initialization followed by
//! quality-gated binary splitting.

mod ball;

use std::cmp::{Ordering, Reverse};
use std::collections::{BinaryHeap, VecDeque};

pub use ball::{ball_quality, split_ball, subgraph_quality, GranularBall};
use ball::split_with_scratch;

use crate::error::{Error, Result};
use crate::graph::{Graph, InducedScratch, LayerWalk};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Mode {
    /// Split while the children's quality sum strictly exceeds the parent's.
    Adaptive,
    /// Split greedily until `max(1, ceil(r * N))` balls exist.
    Ratio(f64),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Ablation {
    #[default]
    None,
    /// Stop after initialization.
    NoSplit,
    /// Skip initialization and split from a single whole-graph ball.
    NoInit,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoarsenConfig {
    pub mode: Mode,
    pub ablation: Ablation,
    /// Layer-size threshold for initialization; `None` means `ceil(sqrt(N))`.
    pub init_ball_target: Option<usize>,
}

impl Default for CoarsenConfig {
    fn default() -> Self {
        CoarsenConfig {
            mode: Mode::Adaptive,
            ablation: Ablation::None,
            init_ball_target: None,
        }
    }
}

impl CoarsenConfig {
    pub fn adaptive() -> Self {
        Self::default()
    }

    pub fn ratio(r: f64) -> Self {
        CoarsenConfig {
            mode: Mode::Ratio(r),
            ..Self::default()
        }
    }

    pub fn with_ablation(mut self, ablation: Ablation) -> Self {
        self.ablation = ablation;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if let Mode::Ratio(r) = self.mode {
            check_ratio(r)?;
        }
        if self.init_ball_target == Some(0) {
            return Err(Error::InvalidConfig("init ball target must be positive".into()));
        }
        Ok(())
    }

    fn init_target(&self, n: usize) -> usize {
        self.init_ball_target.unwrap_or_else(|| ceil_sqrt(n))
    }
}

fn check_ratio(r: f64) -> Result<()> {
    if r > 0.0 && r < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidRatio(r))
    }
}

/// Smallest `s` with `s * s >= n`.
pub fn ceil_sqrt(n: usize) -> usize {
    let mut s = (n as f64).sqrt() as usize;
    while s * s < n {
        s += 1;
    }
    while s > 0 && (s - 1) * (s - 1) >= n {
        s -= 1;
    }
    s
}

/// Target ball count `max(1, ceil(r * n))` for ratio mode. The product is
/// shrunk by a few ulps so that `r = i / 10` lands on the exact integer when
/// `i * n` is divisible by 10.
pub fn ratio_target(r: f64, n: usize) -> usize {
    let scaled = r * n as f64 * (1.0 - 4.0 * f64::EPSILON);
    (scaled.ceil() as usize).clamp(1, n.max(1))
}

/// Complete disjoint assignment of nodes to balls.
#[derive(Clone, Debug, PartialEq)]
pub struct Partition {
    /// Ordered by smallest member.
    pub balls: Vec<GranularBall>,
    /// `assignment[v]` is the index of the ball holding `v`.
    pub assignment: Vec<usize>,
}

impl Partition {
    /// Sorts balls by smallest member and derives the assignment.
    pub fn from_balls(mut balls: Vec<GranularBall>, node_count: usize) -> Result<Self> {
        balls.sort_by_key(GranularBall::smallest_member);
        let mut assignment = vec![usize::MAX; node_count];
        for (i, ball) in balls.iter().enumerate() {
            for &v in &ball.members {
                if v >= node_count {
                    return Err(Error::InvalidPartition(format!(
                        "node {v} out of range for {node_count} nodes"
                    )));
                }
                if assignment[v] != usize::MAX {
                    return Err(Error::InvalidPartition(format!(
                        "node {v} belongs to more than one ball"
                    )));
                }
                assignment[v] = i;
            }
        }
        if let Some(v) = assignment.iter().position(|&a| a == usize::MAX) {
            return Err(Error::InvalidPartition(format!("node {v} is not covered")));
        }
        Ok(Partition { balls, assignment })
    }

    /// Rebuilds balls (with qualities) from a per-node assignment whose labels
    /// are dense in `[0, count)`.
    pub fn from_assignment(g: &Graph, assignment: &[usize]) -> Result<Self> {
        let n = g.node_count();
        if assignment.len() != n {
            return Err(Error::InvalidPartition(format!(
                "assignment has {} entries for {n} nodes",
                assignment.len()
            )));
        }
        let count = assignment.iter().max().map_or(0, |&m| m + 1);
        let mut members = vec![Vec::new(); count];
        for (v, &a) in assignment.iter().enumerate() {
            members[a].push(v);
        }
        if let Some(empty) = members.iter().position(Vec::is_empty) {
            return Err(Error::InvalidPartition(format!("supernode {empty} is empty")));
        }
        let mut scratch = InducedScratch::new(n);
        let balls = members
            .into_iter()
            .map(|m| GranularBall::with_scratch(g, &mut scratch, m))
            .collect::<Result<Vec<_>>>()?;
        // keep the caller's labelling rather than re-sorting
        Ok(Partition {
            balls,
            assignment: assignment.to_vec(),
        })
    }

    /// One ball per node.
    pub fn singletons(g: &Graph) -> Self {
        let assignment: Vec<usize> = (0..g.node_count()).collect();
        Self::from_assignment(g, &assignment).expect("identity assignment is valid")
    }

    pub fn len(&self) -> usize {
        self.balls.len()
    }

    pub fn is_empty(&self) -> bool {
        self.balls.is_empty()
    }

    pub fn node_count(&self) -> usize {
        self.assignment.len()
    }

    /// Checks disjointness, coverage and assignment consistency.
    pub fn validate(&self) -> Result<()> {
        let n = self.assignment.len();
        let mut seen = vec![false; n];
        for (i, ball) in self.balls.iter().enumerate() {
            if ball.is_empty() {
                return Err(Error::InvalidPartition(format!("ball {i} is empty")));
            }
            for &v in &ball.members {
                if v >= n || seen[v] {
                    return Err(Error::InvalidPartition(format!(
                        "node {v} duplicated or out of range"
                    )));
                }
                seen[v] = true;
                if self.assignment[v] != i {
                    return Err(Error::InvalidPartition(format!(
                        "assignment of node {v} disagrees with ball {i}"
                    )));
                }
            }
        }
        match seen.iter().position(|s| !s) {
            Some(v) => Err(Error::InvalidPartition(format!("node {v} is not covered"))),
            None => Ok(()),
        }
    }
}

/// Achieved coarsening ratio `|balls| / n`.
pub fn achieved_ratio(p: &Partition, n: usize) -> f64 {
    p.len() as f64 / n as f64
}

/// Degree-seeded BFS initialization. Repeatedly takes the highest-degree
/// remaining node as center and grows BFS layers over the remaining nodes
/// until a layer holds more than `target` nodes (or the reachable remainder
/// is exhausted); every visited layer, the triggering one included, forms the
/// new ball.
pub fn init_balls(g: &Graph, target: usize) -> Result<Partition> {
    let n = g.node_count();
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    if target == 0 {
        return Err(Error::InvalidConfig("init ball target must be positive".into()));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (Reverse(g.degree(v)), v));

    let mut remaining = vec![true; n];
    let mut scratch = InducedScratch::new(n);
    let mut balls = Vec::new();
    let mut cursor = 0;
    loop {
        while cursor < n && !remaining[order[cursor]] {
            cursor += 1;
        }
        if cursor == n {
            break;
        }
        let center = order[cursor];
        let mut members = Vec::new();
        for layer in LayerWalk::new(g, center, Some(&remaining)) {
            let stop = layer.len() > target;
            members.extend(layer);
            if stop {
                break;
            }
        }
        for &v in &members {
            remaining[v] = false;
        }
        balls.push(GranularBall::with_scratch(g, &mut scratch, members)?);
    }
    Partition::from_balls(balls, n)
}

/// One tentative split examined by the engine.
#[derive(Clone, Debug, PartialEq)]
pub struct SplitRecord {
    pub parent: Vec<usize>,
    pub parent_quality: f64,
    pub children: [Vec<usize>; 2],
    pub child_qualities: [f64; 2],
    pub accepted: bool,
}

/// A partition plus, when requested, every tentative split the engine made.
#[derive(Clone, Debug)]
pub struct CoarsenOutcome {
    pub partition: Partition,
    pub splits: Vec<SplitRecord>,
}

/// Runs the configured mode and ablation.
pub fn coarsen(g: &Graph, cfg: &CoarsenConfig) -> Result<Partition> {
    Ok(Coarsener::new(g, false).run(cfg)?.partition)
}

/// Like [`coarsen`] but also records each tentative split.
pub fn coarsen_traced(g: &Graph, cfg: &CoarsenConfig) -> Result<CoarsenOutcome> {
    Coarsener::new(g, true).run(cfg)
}

/// Adaptive coarsening; `cfg.mode` is ignored.
pub fn adaptive_coarsen(g: &Graph, cfg: &CoarsenConfig) -> Result<Partition> {
    let cfg = CoarsenConfig {
        mode: Mode::Adaptive,
        ..*cfg
    };
    coarsen(g, &cfg)
}

/// Ratio-targeted coarsening with default initialization.
pub fn ratio_coarsen(g: &Graph, r: f64) -> Result<Partition> {
    coarsen(g, &CoarsenConfig::ratio(r))
}

struct Coarsener<'g> {
    graph: &'g Graph,
    scratch: InducedScratch,
    trace: Option<Vec<SplitRecord>>,
}

/// Heap entry for ratio mode: a ball with its precomputed tentative split.
struct Candidate {
    gain: f64,
    parent: GranularBall,
    children: (GranularBall, GranularBall),
}

impl Candidate {
    fn key(&self) -> (usize, Reverse<usize>) {
        (self.parent.len(), Reverse(self.parent.smallest_member()))
    }
}

impl PartialEq for Candidate {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Candidate {}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Candidate {
    // max-heap: higher gain, then larger ball, then lower smallest member
    fn cmp(&self, other: &Self) -> Ordering {
        self.gain
            .total_cmp(&other.gain)
            .then_with(|| self.key().cmp(&other.key()))
    }
}

impl<'g> Coarsener<'g> {
    fn new(graph: &'g Graph, traced: bool) -> Self {
        Coarsener {
            graph,
            scratch: InducedScratch::new(graph.node_count()),
            trace: traced.then(Vec::new),
        }
    }

    fn run(mut self, cfg: &CoarsenConfig) -> Result<CoarsenOutcome> {
        cfg.validate()?;
        let n = self.graph.node_count();
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        let start = match cfg.ablation {
            Ablation::NoInit => {
                vec![GranularBall::with_scratch(self.graph, &mut self.scratch, (0..n).collect())?]
            }
            Ablation::None | Ablation::NoSplit => init_balls(self.graph, cfg.init_target(n))?.balls,
        };
        let balls = match (cfg.ablation, cfg.mode) {
            (Ablation::NoSplit, _) => start,
            (_, Mode::Adaptive) => self.split_adaptively(start)?,
            (_, Mode::Ratio(r)) => self.split_to_count(start, ratio_target(r, n))?,
        };
        Ok(CoarsenOutcome {
            partition: Partition::from_balls(balls, n)?,
            splits: self.trace.unwrap_or_default(),
        })
    }

    fn split(&mut self, ball: &GranularBall) -> Result<(GranularBall, GranularBall)> {
        split_with_scratch(self.graph, &mut self.scratch, ball)
    }

    fn record(&mut self, parent: &GranularBall, a: &GranularBall, b: &GranularBall, accepted: bool) {
        if let Some(trace) = self.trace.as_mut() {
            trace.push(SplitRecord {
                parent: parent.members.clone(),
                parent_quality: parent.quality,
                children: [a.members.clone(), b.members.clone()],
                child_qualities: [a.quality, b.quality],
                accepted,
            });
        }
    }

    fn split_adaptively(&mut self, start: Vec<GranularBall>) -> Result<Vec<GranularBall>> {
        let mut queue: VecDeque<GranularBall> = start.into();
        let mut done = Vec::new();
        while let Some(ball) = queue.pop_front() {
            if ball.len() < 2 {
                done.push(ball);
                continue;
            }
            let (a, b) = self.split(&ball)?;
            let accepted = a.quality + b.quality > ball.quality;
            self.record(&ball, &a, &b, accepted);
            if accepted {
                queue.push_back(a);
                queue.push_back(b);
            } else {
                done.push(ball);
            }
        }
        Ok(done)
    }

    fn candidate(&mut self, ball: GranularBall) -> Result<Candidate> {
        let (a, b) = self.split(&ball)?;
        Ok(Candidate {
            gain: a.quality + b.quality - ball.quality,
            parent: ball,
            children: (a, b),
        })
    }

    fn split_to_count(&mut self, start: Vec<GranularBall>, target: usize) -> Result<Vec<GranularBall>> {
        let mut count = start.len();
        if count >= target {
            return Ok(start);
        }
        let mut done = Vec::new();
        let mut heap = BinaryHeap::new();
        for ball in start {
            if ball.len() < 2 {
                done.push(ball);
            } else {
                heap.push(self.candidate(ball)?);
            }
        }
        while count < target {
            let Some(best) = heap.pop() else { break };
            let (a, b) = best.children;
            self.record(&best.parent, &a, &b, true);
            count += 1;
            for child in [a, b] {
                if child.len() < 2 {
                    done.push(child);
                } else {
                    heap.push(self.candidate(child)?);
                }
            }
        }
        done.extend(heap.into_iter().map(|c| c.parent));
        Ok(done)
    }
}
