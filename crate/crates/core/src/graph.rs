//! Undirected simple graphs with dense node indices.

use std::collections::VecDeque;

use crate::{fnv1a, Error, Result};

/// An immutable undirected simple graph. Neighbour lists are sorted, node
/// indices are dense in `0..node_count`. Self-loops and parallel edges are
/// dropped at construction, so every instance satisfies the simple-graph
/// invariants by construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    name: String,
    adjacency: Vec<Vec<u32>>,
    edge_count: usize,
}

/// Basic size statistics of a graph.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SummaryStats {
    pub nodes: usize,
    pub edges: usize,
    pub density: f64,
    pub avg_degree: f64,
}

impl Graph {
    /// An edgeless graph on `node_count` nodes.
    pub fn empty(node_count: usize) -> Self {
        Graph {
            name: String::new(),
            adjacency: vec![Vec::new(); node_count],
            edge_count: 0,
        }
    }

    /// Builds a graph from an edge iterator. Self-loops and duplicate edges
    /// (in either orientation) are silently dropped. Panics if an endpoint
    /// is `>= node_count`.
    pub fn from_edges<I>(node_count: usize, edges: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut adjacency = vec![Vec::new(); node_count];
        for (u, v) in edges {
            assert!(
                u < node_count && v < node_count,
                "edge ({u},{v}) out of range for {node_count} nodes"
            );
            if u == v {
                continue;
            }
            adjacency[u].push(v as u32);
            adjacency[v].push(u as u32);
        }
        let mut edge_count = 0;
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
            edge_count += list.len();
        }
        Graph {
            name: String::new(),
            adjacency,
            edge_count: edge_count / 2,
        }
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.adjacency[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].binary_search(&(v as u32)).is_ok()
    }

    /// Iterates every edge once as `(u, v)` with `u < v`.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.adjacency.iter().enumerate().flat_map(|(u, nbrs)| {
            nbrs.iter()
                .filter(move |&&v| (u as u32) < v)
                .map(move |&v| (u as u32, v))
        })
    }

    /// Per-node degrees, index-aligned. The sum is always even.
    pub fn degree_sequence(&self) -> Vec<usize> {
        self.adjacency.iter().map(Vec::len).collect()
    }

    pub fn summary_stats(&self) -> SummaryStats {
        let n = self.node_count();
        let e = self.edge_count();
        let density = if n >= 2 {
            2.0 * e as f64 / (n as f64 * (n as f64 - 1.0))
        } else {
            0.0
        };
        let avg_degree = if n >= 1 { 2.0 * e as f64 / n as f64 } else { 0.0 };
        SummaryStats {
            nodes: n,
            edges: e,
            density,
            avg_degree,
        }
    }

    /// The induced subgraph on `nodes` (which must be distinct and in
    /// range). New indices follow the sorted order of `nodes`.
    pub fn induced_subgraph(&self, nodes: &[usize]) -> Graph {
        let mut sorted: Vec<usize> = nodes.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let mut index_of = std::collections::HashMap::with_capacity(sorted.len());
        for (new, &old) in sorted.iter().enumerate() {
            index_of.insert(old as u32, new as u32);
        }
        let mut adjacency = vec![Vec::new(); sorted.len()];
        let mut edge_count = 0;
        for (new, &old) in sorted.iter().enumerate() {
            for &nbr in &self.adjacency[old] {
                if let Some(&mapped) = index_of.get(&nbr) {
                    adjacency[new].push(mapped);
                }
            }
            edge_count += adjacency[new].len();
        }
        Graph {
            name: self.name.clone(),
            adjacency,
            edge_count: edge_count / 2,
        }
    }

    /// The `k`-step ego network of `v`: the induced subgraph on all nodes at
    /// BFS distance at most `k` from `v`, including `v` itself.
    pub fn ego_network(&self, v: usize, k: usize) -> Result<Graph> {
        if v >= self.node_count() {
            return Err(Error::NodeOutOfRange {
                index: v,
                node_count: self.node_count(),
            });
        }
        if k == 0 {
            return Err(Error::Parameter("ego network requires k >= 1".into()));
        }
        let mut dist = vec![usize::MAX; self.node_count()];
        let mut queue = VecDeque::new();
        dist[v] = 0;
        queue.push_back(v);
        let mut reached = vec![v];
        while let Some(u) = queue.pop_front() {
            if dist[u] == k {
                continue;
            }
            for &w in &self.adjacency[u] {
                let w = w as usize;
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    reached.push(w);
                    queue.push_back(w);
                }
            }
        }
        Ok(self.induced_subgraph(&reached))
    }

    /// Relabels nodes: node `v` of `self` becomes `perm[v]`. `perm` must be
    /// a permutation of `0..node_count`.
    pub fn relabel(&self, perm: &[usize]) -> Graph {
        assert_eq!(perm.len(), self.node_count());
        Graph::from_edges(
            self.node_count(),
            self.edges().map(|(u, v)| (perm[u as usize], perm[v as usize])),
        )
        .with_name(self.name.clone())
    }

    /// Content hash over node count and the sorted edge set. Stable across
    /// runs and platforms; node names do not enter.
    pub fn content_hash(&self) -> u64 {
        let mut bytes = Vec::with_capacity(8 + 8 * self.edge_count());
        bytes.extend_from_slice(&(self.node_count() as u64).to_le_bytes());
        for (u, v) in self.edges() {
            bytes.extend_from_slice(&u.to_le_bytes());
            bytes.extend_from_slice(&v.to_le_bytes());
        }
        fnv1a(&bytes)
    }
}

/// An ordered collection of graphs with optional per-graph class labels and
/// timestamps, as loaded from a dataset manifest.
#[derive(Debug, Clone, Default)]
pub struct GraphDataset {
    pub graphs: Vec<Graph>,
    pub class_labels: Option<Vec<String>>,
    pub time_labels: Option<Vec<f64>>,
}

impl GraphDataset {
    pub fn from_graphs(graphs: Vec<Graph>) -> Self {
        GraphDataset {
            graphs,
            class_labels: None,
            time_labels: None,
        }
    }

    pub fn len(&self) -> usize {
        self.graphs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graphs.is_empty()
    }

    /// Graph names, substituting the position for unnamed graphs.
    pub fn names(&self) -> Vec<String> {
        self.graphs
            .iter()
            .enumerate()
            .map(|(i, g)| {
                if g.name().is_empty() {
                    format!("graph{i}")
                } else {
                    g.name().to_string()
                }
            })
            .collect()
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(labels) = &self.class_labels {
            if labels.len() != self.graphs.len() {
                return Err(Error::Parameter(format!(
                    "{} class labels for {} graphs",
                    labels.len(),
                    self.graphs.len()
                )));
            }
        }
        if let Some(times) = &self.time_labels {
            if times.len() != self.graphs.len() {
                return Err(Error::Parameter(format!(
                    "{} time labels for {} graphs",
                    times.len(),
                    self.graphs.len()
                )));
            }
        }
        Ok(())
    }
}
