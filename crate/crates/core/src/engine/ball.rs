use crate::error::{Error, Result};
use crate::graph::{Graph, InducedScratch};

/// Quality of a ball's induced subgraph: average-degree term `E/N` plus
/// transitivity (ordered triangles over ordered wedges, 0 without wedges).
pub fn subgraph_quality(sub: &Graph) -> f64 {
    let n = sub.node_count();
    if n == 0 {
        return 0.0;
    }
    let density = sub.edge_count() as f64 / n as f64;
    let (triangles, wedges) = sub.count_ordered_triangles_and_wedges();
    let transitivity = if wedges == 0 {
        0.0
    } else {
        triangles as f64 / wedges as f64
    };
    density + transitivity
}

/// Quality of the ball `members` inside `g`.
pub fn ball_quality(g: &Graph, members: &[usize]) -> Result<f64> {
    if members.is_empty() {
        return Err(Error::EmptyBall);
    }
    let (sub, _) = g.induced_subgraph(members);
    Ok(subgraph_quality(&sub))
}

/// A set of original nodes that becomes one supernode.
#[derive(Clone, Debug, PartialEq)]
pub struct GranularBall {
    /// Sorted global node indices.
    pub members: Vec<usize>,
    pub quality: f64,
    pub internal_edge_count: usize,
}

impl GranularBall {
    pub fn new(g: &Graph, members: Vec<usize>) -> Result<Self> {
        let mut scratch = InducedScratch::new(g.node_count());
        Self::with_scratch(g, &mut scratch, members)
    }

    pub(crate) fn with_scratch(
        g: &Graph,
        scratch: &mut InducedScratch,
        mut members: Vec<usize>,
    ) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::EmptyBall);
        }
        members.sort_unstable();
        let (sub, _) = scratch.induce(g, &members);
        Ok(Self::from_subgraph(members, &sub))
    }

    fn from_subgraph(members: Vec<usize>, sub: &Graph) -> Self {
        GranularBall {
            members,
            quality: subgraph_quality(sub),
            internal_edge_count: sub.edge_count(),
        }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn smallest_member(&self) -> usize {
        self.members[0]
    }
}

/// Index of the highest-degree node of `sub`, skipping `exclude`; ties go to
/// the lowest index.
fn highest_degree(sub: &Graph, exclude: Option<usize>) -> usize {
    let mut best = usize::MAX;
    let mut best_degree = 0;
    for v in 0..sub.node_count() {
        if Some(v) == exclude {
            continue;
        }
        let d = sub.degree(v);
        if best == usize::MAX || d > best_degree {
            best = v;
            best_degree = d;
        }
    }
    best
}

/// Splits `ball` around its two highest-degree members (degree inside the
/// ball). Non-center members go to whichever center's BFS reaches them in the
/// earlier layer; same-layer contention and members unreachable from both
/// centers go to the first child.
pub fn split_ball(g: &Graph, ball: &GranularBall) -> Result<(GranularBall, GranularBall)> {
    let mut scratch = InducedScratch::new(g.node_count());
    split_with_scratch(g, &mut scratch, ball)
}

pub(crate) fn split_with_scratch(
    g: &Graph,
    scratch: &mut InducedScratch,
    ball: &GranularBall,
) -> Result<(GranularBall, GranularBall)> {
    if ball.len() < 2 {
        return Err(if ball.is_empty() {
            Error::EmptyBall
        } else {
            Error::NotSplittable
        });
    }
    let (sub, mapping) = scratch.induce(g, &ball.members);
    let center_a = highest_degree(&sub, None);
    let center_b = highest_degree(&sub, Some(center_a));

    const FREE: u8 = 0;
    const OWN_A: u8 = 1;
    const OWN_B: u8 = 2;
    let mut owner = vec![FREE; sub.node_count()];
    owner[center_a] = OWN_A;
    owner[center_b] = OWN_B;
    let mut frontier_a = vec![center_a];
    let mut frontier_b = vec![center_b];
    let mut next = Vec::new();
    while !frontier_a.is_empty() || !frontier_b.is_empty() {
        // A expands first so that same-layer contention resolves to A
        for (frontier, tag) in [(&mut frontier_a, OWN_A), (&mut frontier_b, OWN_B)] {
            next.clear();
            for &u in frontier.iter() {
                for &v in sub.neighbors(u) {
                    if owner[v] == FREE {
                        owner[v] = tag;
                        next.push(v);
                    }
                }
            }
            std::mem::swap(frontier, &mut next);
        }
    }

    let (mut members_a, mut members_b) = (Vec::new(), Vec::new());
    for (local, &global) in mapping.iter().enumerate() {
        if owner[local] == OWN_B {
            members_b.push(global);
        } else {
            members_a.push(global);
        }
    }
    let child_a = GranularBall::with_scratch(g, scratch, members_a)?;
    let child_b = GranularBall::with_scratch(g, scratch, members_b)?;
    Ok((child_a, child_b))
}
