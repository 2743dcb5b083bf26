//! Immutable undirected simple graphs in compressed adjacency form.
//!
//! Adjacency lists are sorted ascending and every traversal in the crate
//! derives its order from them, so all results are deterministic.

use std::collections::VecDeque;

use crate::error::{Error, Result};

/// Undirected simple graph with dense node indices in `[0, n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    neighbors: Vec<usize>,
    edge_count: usize,
}

impl Graph {
    /// Builds a graph from raw pairs. Self-loops are dropped, duplicates and
    /// reversed duplicates are merged.
    pub fn from_edge_list(node_count: usize, edge_pairs: &[(usize, usize)]) -> Result<Self> {
        let mut directed = Vec::with_capacity(edge_pairs.len() * 2);
        for &(u, v) in edge_pairs {
            if u >= node_count || v >= node_count {
                return Err(Error::EdgeOutOfRange { u, v, node_count });
            }
            if u != v {
                directed.push((u, v));
                directed.push((v, u));
            }
        }
        directed.sort_unstable();
        directed.dedup();
        Ok(Self::from_sorted_arcs(node_count, &directed))
    }

    /// `arcs` must be sorted, deduplicated and symmetric.
    fn from_sorted_arcs(node_count: usize, arcs: &[(usize, usize)]) -> Self {
        let mut offsets = vec![0usize; node_count + 1];
        for &(u, _) in arcs {
            offsets[u + 1] += 1;
        }
        for i in 0..node_count {
            offsets[i + 1] += offsets[i];
        }
        let neighbors = arcs.iter().map(|&(_, v)| v).collect();
        Graph {
            offsets,
            neighbors,
            edge_count: arcs.len() / 2,
        }
    }

    /// Graph with `node_count` isolated nodes.
    pub fn empty(node_count: usize) -> Self {
        Graph {
            offsets: vec![0; node_count + 1],
            neighbors: Vec::new(),
            edge_count: 0,
        }
    }

    pub fn node_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn is_empty(&self) -> bool {
        self.node_count() == 0
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.neighbors[self.offsets[v]..self.offsets[v + 1]]
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.node_count()).map(|v| self.degree(v)).collect()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.neighbors(u).binary_search(&v).is_ok()
    }

    /// Each undirected edge once, as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.node_count()).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .copied()
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }

    /// Subgraph induced by `nodes`, with local indices assigned in ascending
    /// global order. Returns the subgraph and the local-to-global map.
    pub fn induced_subgraph(&self, nodes: &[usize]) -> (Graph, Vec<usize>) {
        let mut scratch = InducedScratch::new(self.node_count());
        scratch.induce(self, nodes)
    }

    /// Layered BFS from `source`, optionally restricted to nodes whose mask
    /// entry is `true`.
    pub fn bfs_layers(&self, source: usize, allowed: Option<&[bool]>) -> BfsLayering {
        let layers: Vec<Vec<usize>> = LayerWalk::new(self, source, allowed).collect();
        BfsLayering { source, layers }
    }

    /// Ordered closed triples and ordered wedges over distinct node triples:
    /// `(6 * triangles, sum_v deg(v) * (deg(v) - 1))`.
    pub fn count_ordered_triangles_and_wedges(&self) -> (u64, u64) {
        let mut triangles = 0u64;
        let mut wedges = 0u64;
        for u in 0..self.node_count() {
            let nu = self.neighbors(u);
            let d = nu.len() as u64;
            wedges += d * d.saturating_sub(1);
            // each triangle u < v < w counted once
            let upper_u = &nu[nu.partition_point(|&x| x <= u)..];
            for &v in upper_u {
                let nv = self.neighbors(v);
                let upper_v = &nv[nv.partition_point(|&x| x <= v)..];
                triangles += sorted_intersection_count(upper_u, upper_v);
            }
        }
        (6 * triangles, wedges)
    }

    /// Maximal connected node sets, each sorted, ordered by smallest member.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let n = self.node_count();
        let mut seen = vec![false; n];
        let mut components = Vec::new();
        let mut queue = VecDeque::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            queue.push_back(start);
            let mut comp = Vec::new();
            while let Some(u) = queue.pop_front() {
                comp.push(u);
                for &v in self.neighbors(u) {
                    if !seen[v] {
                        seen[v] = true;
                        queue.push_back(v);
                    }
                }
            }
            comp.sort_unstable();
            components.push(comp);
        }
        components
    }
}

fn sorted_intersection_count(a: &[usize], b: &[usize]) -> u64 {
    let (mut i, mut j, mut count) = (0, 0, 0u64);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                count += 1;
                i += 1;
                j += 1;
            }
        }
    }
    count
}

/// Reusable global-to-local index table for repeated induced-subgraph
/// extraction on the same parent graph. Costs O(sum of member degrees) per
/// call instead of O(N).
#[derive(Debug)]
pub struct InducedScratch {
    local: Vec<usize>,
}

impl InducedScratch {
    pub fn new(node_count: usize) -> Self {
        InducedScratch {
            local: vec![usize::MAX; node_count],
        }
    }

    /// Like [`Graph::induced_subgraph`]; `nodes` need not be sorted.
    pub fn induce(&mut self, g: &Graph, nodes: &[usize]) -> (Graph, Vec<usize>) {
        let mut mapping = nodes.to_vec();
        mapping.sort_unstable();
        mapping.dedup();
        for (i, &v) in mapping.iter().enumerate() {
            self.local[v] = i;
        }
        let mut offsets = Vec::with_capacity(mapping.len() + 1);
        let mut neighbors = Vec::new();
        offsets.push(0);
        for &v in &mapping {
            // global adjacency is sorted and the local map is monotone
            neighbors.extend(
                g.neighbors(v)
                    .iter()
                    .map(|&w| self.local[w])
                    .filter(|&l| l != usize::MAX),
            );
            offsets.push(neighbors.len());
        }
        for &v in &mapping {
            self.local[v] = usize::MAX;
        }
        let edge_count = neighbors.len() / 2;
        (
            Graph {
                offsets,
                neighbors,
                edge_count,
            },
            mapping,
        )
    }
}

/// BFS layers from a single source.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BfsLayering {
    pub source: usize,
    /// `layers[0] == [source]`; each layer ascending.
    pub layers: Vec<Vec<usize>>,
}

impl BfsLayering {
    pub fn visited(&self) -> impl Iterator<Item = usize> + '_ {
        self.layers.iter().flatten().copied()
    }

    pub fn visited_count(&self) -> usize {
        self.layers.iter().map(Vec::len).sum()
    }
}

/// Lazy layer-by-layer BFS. Each call to `next` yields one sorted layer; a
/// layer's successors are not explored until the following call, so callers
/// can stop early without paying for unexplored layers.
pub struct LayerWalk<'g, 'm> {
    graph: &'g Graph,
    allowed: Option<&'m [bool]>,
    seen: Vec<bool>,
    frontier: Vec<usize>,
    started: bool,
}

impl<'g, 'm> LayerWalk<'g, 'm> {
    pub fn new(graph: &'g Graph, source: usize, allowed: Option<&'m [bool]>) -> Self {
        let mut seen = vec![false; graph.node_count()];
        seen[source] = true;
        LayerWalk {
            graph,
            allowed,
            seen,
            frontier: vec![source],
            started: false,
        }
    }
}

impl Iterator for LayerWalk<'_, '_> {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if !self.started {
            self.started = true;
            return Some(self.frontier.clone());
        }
        let mut next = Vec::new();
        for &u in &self.frontier {
            for &v in self.graph.neighbors(u) {
                if !self.seen[v] && self.allowed.is_none_or(|m| m[v]) {
                    self.seen[v] = true;
                    next.push(v);
                }
            }
        }
        if next.is_empty() {
            return None;
        }
        next.sort_unstable();
        self.frontier = next;
        Some(self.frontier.clone())
    }
}
