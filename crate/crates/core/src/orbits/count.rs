//! Exact graphlet-orbit counting by enumeration of connected induced
//! subgraphs (ESU), with O(1) classification through the atlas tables.

use rayon::prelude::*;

use super::atlas::{pair_bit, GraphletAtlas, DISCONNECTED, MAX_GRAPHLET_SIZE};
use crate::{Error, Graph, Result};

/// Per-node feature counts: a dense node-by-column matrix of non-negative
/// counts. For [`orbit_counts`] the columns are automorphism-orbit ids; for
/// [`ego_graphlet_counts`] they are graphlet-type ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitCountTable {
    node_count: usize,
    max_graphlet_size: usize,
    column_count: usize,
    counts: Vec<u64>,
}

impl OrbitCountTable {
    pub(crate) fn new(node_count: usize, max_graphlet_size: usize, column_count: usize) -> Self {
        OrbitCountTable {
            node_count,
            max_graphlet_size,
            column_count,
            counts: vec![0; node_count * column_count],
        }
    }

    /// Rebuilds a table from raw rows (used by the feature cache).
    pub fn from_rows(max_graphlet_size: usize, rows: Vec<Vec<u64>>) -> Result<Self> {
        let node_count = rows.len();
        let column_count = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != column_count) {
            return Err(Error::Parameter("ragged count table".into()));
        }
        Ok(OrbitCountTable {
            node_count,
            max_graphlet_size,
            column_count,
            counts: rows.into_iter().flatten().collect(),
        })
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn max_graphlet_size(&self) -> usize {
        self.max_graphlet_size
    }

    pub fn column_count(&self) -> usize {
        self.column_count
    }

    /// Counts of one node across all columns.
    pub fn row(&self, v: usize) -> &[u64] {
        &self.counts[v * self.column_count..(v + 1) * self.column_count]
    }

    /// Counts of one column across all nodes.
    pub fn column(&self, c: usize) -> Vec<u64> {
        (0..self.node_count).map(|v| self.row(v)[c]).collect()
    }

    /// Column restricted to a node subset.
    pub fn column_sampled(&self, c: usize, nodes: &[usize]) -> Vec<u64> {
        nodes.iter().map(|&v| self.row(v)[c]).collect()
    }

    fn merge(mut self, other: OrbitCountTable) -> OrbitCountTable {
        debug_assert_eq!(self.counts.len(), other.counts.len());
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        self
    }
}

/// Counts, for every node and every automorphism orbit of the graphlets on
/// 2..=`max_size` nodes, the connected induced subgraphs that contain the
/// node at that orbit position. Column `o` is orbit `o`; column 0 equals the
/// node degree.
pub fn orbit_counts(g: &Graph, max_size: usize) -> Result<OrbitCountTable> {
    if !(2..=MAX_GRAPHLET_SIZE).contains(&max_size) {
        return Err(Error::Parameter(format!(
            "graphlet size {max_size} outside 2..=5"
        )));
    }
    let atlas = GraphletAtlas::get();
    let columns = atlas.orbit_count(max_size);
    let n = g.node_count();

    let table = (0..n)
        .into_par_iter()
        .fold(
            || OrbitCountTable::new(n, max_size, columns),
            |mut table, root| {
                let mut esu = Esu {
                    g,
                    atlas,
                    max_size,
                    root: root as u32,
                    sub: Vec::with_capacity(max_size),
                    ext: Vec::new(),
                    marked: vec![false; n],
                    undo: Vec::new(),
                };
                esu.run(&mut |sub, mask| {
                    let orbits = atlas.orbits_of(sub.len(), mask);
                    for (idx, &v) in sub.iter().enumerate() {
                        table.counts[v as usize * columns + orbits[idx] as usize] += 1;
                    }
                });
                table
            },
        )
        .reduce(
            || OrbitCountTable::new(n, max_size, columns),
            OrbitCountTable::merge,
        );
    Ok(table)
}

/// Counts each connected graphlet type on 2..=`max_size` nodes as an induced
/// subgraph of every node's `k`-step ego network. Row `v`, column `t` is the
/// number of induced copies of graphlet type `t` in the ego network of `v`
/// (9 types for `max_size` 4).
pub fn ego_graphlet_counts(g: &Graph, k: usize, max_size: usize) -> Result<OrbitCountTable> {
    if !(2..=MAX_GRAPHLET_SIZE).contains(&max_size) {
        return Err(Error::Parameter(format!(
            "graphlet size {max_size} outside 2..=5"
        )));
    }
    if k == 0 {
        return Err(Error::Parameter("ego network requires k >= 1".into()));
    }
    let atlas = GraphletAtlas::get();
    let columns = atlas.graphlet_count(max_size);
    let n = g.node_count();

    let rows: Vec<Vec<u64>> = (0..n)
        .into_par_iter()
        .map(|v| {
            let ego = g.ego_network(v, k).expect("node index in range");
            let mut row = vec![0u64; columns];
            let en = ego.node_count();
            for root in 0..en {
                let mut esu = Esu {
                    g: &ego,
                    atlas,
                    max_size,
                    root: root as u32,
                    sub: Vec::with_capacity(max_size),
                    ext: Vec::new(),
                    marked: vec![false; en],
                    undo: Vec::new(),
                };
                esu.run(&mut |sub, mask| {
                    let t = atlas.graphlet_of(sub.len(), mask);
                    debug_assert_ne!(t, DISCONNECTED);
                    row[t as usize] += 1;
                });
            }
            row
        })
        .collect();

    OrbitCountTable::from_rows(max_size, rows).map(|mut t| {
        t.node_count = n;
        t
    })
}

/// ESU state for one enumeration root. Emits every connected vertex set of
/// size 2..=`max_size` whose minimum vertex is `root` exactly once, together
/// with its induced adjacency mask.
struct Esu<'a> {
    g: &'a Graph,
    #[allow(dead_code)]
    atlas: &'a GraphletAtlas,
    max_size: usize,
    root: u32,
    sub: Vec<u32>,
    ext: Vec<u32>,
    marked: Vec<bool>,
    undo: Vec<u32>,
}

impl Esu<'_> {
    fn run(&mut self, emit: &mut impl FnMut(&[u32], u16)) {
        let root = self.root;
        self.sub.push(root);
        self.marked[root as usize] = true;
        for &u in self.g.neighbors(root as usize) {
            self.marked[u as usize] = true;
            if u > root {
                self.ext.push(u);
            }
        }
        let hi = self.ext.len();
        self.extend(0, hi, 0, emit);
        // reset scratch state
        self.sub.clear();
        self.ext.clear();
        self.marked[root as usize] = false;
        for &u in self.g.neighbors(root as usize) {
            self.marked[u as usize] = false;
        }
    }

    /// Extends the current subgraph with each candidate in `ext[lo..hi]` in
    /// turn; a candidate's successors are the candidates after it plus the
    /// exclusive neighbourhood of the newly added vertex.
    fn extend(&mut self, lo: usize, hi: usize, mask: u16, emit: &mut impl FnMut(&[u32], u16)) {
        for i in lo..hi {
            let w = self.ext[i];
            let s = self.sub.len();
            let mut m = mask;
            for (idx, &u) in self.sub.iter().enumerate() {
                if self.g.has_edge(u as usize, w as usize) {
                    m |= 1 << pair_bit(idx, s);
                }
            }
            self.sub.push(w);
            emit(&self.sub, m);
            if self.sub.len() < self.max_size {
                let undo_base = self.undo.len();
                let top = self.ext.len();
                debug_assert_eq!(top, hi);
                for &u in self.g.neighbors(w as usize) {
                    if !self.marked[u as usize] {
                        self.marked[u as usize] = true;
                        self.undo.push(u);
                        if u > self.root {
                            self.ext.push(u);
                        }
                    }
                }
                self.extend(i + 1, self.ext.len(), m, emit);
                self.ext.truncate(top);
                for &u in &self.undo[undo_base..] {
                    self.marked[u as usize] = false;
                }
                self.undo.truncate(undo_base);
            }
            self.sub.pop();
        }
    }
}
