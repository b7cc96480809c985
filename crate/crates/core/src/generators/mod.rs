//! The eight random-graph models used to build benchmark datasets, with
//! parameter calibration so suites can be regenerated at any scale.
//!
//! Edge-count-calibrated models (uniform, geometric, small-world) hit their
//! target edge count exactly; growth models (preferential attachment,
//! duplication divergence) are calibrated to the target average degree.
//! Every generator is a pure function of its parameters and seed, so a
//! fixed seed reproduces the graph bit for bit.

mod duplication;
mod geometric;

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::graph::{Graph, GraphDataset};
use crate::{mix_seed, Error, Result};

pub use duplication::{
    calibrate_dd_ispolatov, calibrate_dd_vazquez, gen_dd_ispolatov, gen_dd_ispolatov_with,
    gen_dd_vazquez, gen_dd_vazquez_with, VAZQUEZ_LINK_PROB,
};
pub use geometric::{gen_geo_gene_dup, gen_geometric3d, GENE_DUP_RADIUS, GENE_DUP_SEED_POINTS};

/// Rewiring probability of the small-world model.
pub const WS_REWIRE_PROB: f64 = 0.05;

/// The supported random-graph models.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Model {
    Er,
    Ba,
    Config,
    Geo3d,
    GeoGeneDup,
    DdVazquez,
    DdIspolatov,
    WattsStrogatz,
}

impl Model {
    pub fn name(&self) -> &'static str {
        match self {
            Model::Er => "er",
            Model::Ba => "ba",
            Model::Config => "config",
            Model::Geo3d => "geo3d",
            Model::GeoGeneDup => "geo-gene-dup",
            Model::DdVazquez => "dd-vazquez",
            Model::DdIspolatov => "dd-ispolatov",
            Model::WattsStrogatz => "ws",
        }
    }

    pub fn all() -> [Model; 8] {
        [
            Model::Er,
            Model::Ba,
            Model::Config,
            Model::Geo3d,
            Model::GeoGeneDup,
            Model::DdVazquez,
            Model::DdIspolatov,
            Model::WattsStrogatz,
        ]
    }
}

impl std::str::FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "er" => Ok(Model::Er),
            "ba" => Ok(Model::Ba),
            "config" => Ok(Model::Config),
            "geo3d" => Ok(Model::Geo3d),
            "geo-gene-dup" | "geogenedup" => Ok(Model::GeoGeneDup),
            "dd-vazquez" | "ddvazquez" => Ok(Model::DdVazquez),
            "dd-ispolatov" | "ddispolatov" => Ok(Model::DdIspolatov),
            "ws" | "watts-strogatz" => Ok(Model::WattsStrogatz),
            other => Err(Error::Parameter(format!("unknown model `{other}`"))),
        }
    }
}

impl std::fmt::Display for Model {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// One generation request: model, size, target average degree, seed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelSpec {
    pub model: Model,
    pub n: usize,
    pub k_avg: f64,
    pub seed: u64,
}

impl ModelSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::Parameter(format!("n = {} below 2", self.n)));
        }
        if !(self.k_avg > 0.0 && self.k_avg < self.n as f64 - 1.0) {
            return Err(Error::Parameter(format!(
                "average degree {} outside (0, n-1)",
                self.k_avg
            )));
        }
        Ok(())
    }
}

/// Dispatches to the model generators.
pub fn generate(spec: &ModelSpec) -> Result<Graph> {
    spec.validate()?;
    let ModelSpec { n, k_avg, seed, .. } = *spec;
    match spec.model {
        Model::Er => gen_er(n, k_avg, seed),
        Model::Ba => gen_ba(n, k_avg, seed),
        Model::Config => gen_config_from_dd(n, k_avg, seed),
        Model::Geo3d => gen_geometric3d(n, k_avg, seed),
        Model::GeoGeneDup => gen_geo_gene_dup(n, k_avg, seed),
        Model::DdVazquez => gen_dd_vazquez(n, k_avg, seed),
        Model::DdIspolatov => gen_dd_ispolatov(n, k_avg, seed),
        Model::WattsStrogatz => gen_watts_strogatz(n, k_avg, seed),
    }
}

pub(crate) fn target_edge_count(n: usize, k_avg: f64) -> u64 {
    (n as f64 * k_avg / 2.0).round() as u64
}

/// Uniform random graph with exactly `round(n * k_avg / 2)` distinct edges.
pub fn gen_er(n: usize, k_avg: f64, seed: u64) -> Result<Graph> {
    let m = target_edge_count(n, k_avg);
    let total = n as u64 * (n as u64 - 1) / 2;
    if m > total {
        return Err(Error::Parameter(format!(
            "{m} edges requested but only {total} pairs exist"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // Floyd's algorithm: m distinct pair indices without materializing all pairs.
    let mut chosen: HashSet<u64> = HashSet::with_capacity(m as usize);
    for j in (total - m)..total {
        let t = rng.gen_range(0..=j);
        if !chosen.insert(t) {
            chosen.insert(j);
        }
    }
    let edges = chosen.iter().map(|&idx| unrank_pair(idx, n as u64));
    Ok(Graph::from_edges(n, edges))
}

/// Inverse of the i-major pair enumeration: index -> (i, j) with i < j.
fn unrank_pair(idx: u64, n: u64) -> (usize, usize) {
    let cum = |i: u64| i * (2 * n - i - 1) / 2; // pairs with first endpoint < i
    let (mut lo, mut hi) = (0u64, n - 1);
    while lo < hi {
        let mid = (lo + hi).div_ceil(2);
        if cum(mid) <= idx {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    let i = lo;
    let j = i + 1 + (idx - cum(i));
    (i as usize, j as usize)
}

/// Preferential attachment: starting from a complete graph on
/// `round(k_avg / 2) + 1` nodes, each new node attaches to that many
/// distinct existing nodes with probability proportional to their degree.
pub fn gen_ba(n: usize, k_avg: f64, seed: u64) -> Result<Graph> {
    let m_attach = (k_avg / 2.0).round() as usize;
    if m_attach < 1 {
        return Err(Error::Parameter(format!(
            "average degree {k_avg} gives zero attachment edges"
        )));
    }
    if n <= m_attach {
        return Err(Error::Parameter(format!(
            "n = {n} too small for attachment count {m_attach}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n0 = m_attach + 1;
    let mut edges: Vec<(usize, usize)> = Vec::new();
    // Endpoint multiset: sampling an entry uniformly is degree-proportional.
    let mut endpoints: Vec<u32> = Vec::with_capacity(2 * m_attach * n);
    for i in 0..n0 {
        for j in (i + 1)..n0 {
            edges.push((i, j));
            endpoints.push(i as u32);
            endpoints.push(j as u32);
        }
    }
    let mut targets: Vec<u32> = Vec::with_capacity(m_attach);
    for v in n0..n {
        targets.clear();
        while targets.len() < m_attach {
            let t = endpoints[rng.gen_range(0..endpoints.len())];
            if !targets.contains(&t) {
                targets.push(t);
            }
        }
        for &t in &targets {
            edges.push((v, t as usize));
            endpoints.push(v as u32);
            endpoints.push(t);
        }
    }
    Ok(Graph::from_edges(n, edges))
}

/// Erased configuration model over an explicit target degree sequence:
/// stubs are paired uniformly at random and colliding pairs (self-loops,
/// duplicates) are dropped. An odd stub total is fixed by incrementing one
/// uniformly chosen node's target.
pub fn erased_configuration(targets: &[usize], seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut targets = targets.to_vec();
    if targets.iter().sum::<usize>() % 2 == 1 {
        let bump = rng.gen_range(0..targets.len());
        targets[bump] += 1;
    }
    let mut stubs: Vec<u32> = Vec::with_capacity(targets.iter().sum());
    for (v, &d) in targets.iter().enumerate() {
        stubs.extend(std::iter::repeat_n(v as u32, d));
    }
    stubs.shuffle(&mut rng);
    let edges = stubs
        .chunks_exact(2)
        .map(|pair| (pair[0] as usize, pair[1] as usize));
    Graph::from_edges(targets.len(), edges)
}

/// Configuration model whose target degree sequence is a fresh duplication
/// divergence realization with the requested average degree.
pub fn gen_config_from_dd(n: usize, k_avg: f64, seed: u64) -> Result<Graph> {
    let template = gen_dd_vazquez(n, k_avg, mix_seed(seed, 0x7e41))?;
    Ok(erased_configuration(
        &template.degree_sequence(),
        mix_seed(seed, 0xc0f1),
    ))
}

/// Small-world graph at an explicit ring half-width and rewiring
/// probability. Rewiring preserves the edge count exactly: each ring edge
/// is replaced (with probability `p`) by an edge to a uniform node that
/// avoids self-loops and duplicates.
pub fn gen_watts_strogatz_with(n: usize, k_ring: usize, p: f64, seed: u64) -> Result<Graph> {
    if k_ring < 1 || 2 * k_ring >= n {
        return Err(Error::Parameter(format!(
            "ring half-width {k_ring} invalid for n = {n}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let norm = |a: usize, b: usize| if a < b { (a, b) } else { (b, a) };
    let mut edge_set: HashSet<(usize, usize)> = HashSet::with_capacity(n * k_ring);
    for i in 0..n {
        for j in 1..=k_ring {
            edge_set.insert(norm(i, (i + j) % n));
        }
    }
    for i in 0..n {
        for j in 1..=k_ring {
            let old = norm(i, (i + j) % n);
            if rng.gen::<f64>() >= p || !edge_set.contains(&old) {
                continue;
            }
            for _ in 0..2 * n {
                let w = rng.gen_range(0..n);
                if w != i && !edge_set.contains(&norm(i, w)) {
                    edge_set.remove(&old);
                    edge_set.insert(norm(i, w));
                    break;
                }
            }
        }
    }
    Ok(Graph::from_edges(n, edge_set.iter().copied()))
}

/// Small-world graph: ring lattice with `round(k_avg / 2)` neighbours per
/// side, rewired with probability [`WS_REWIRE_PROB`].
pub fn gen_watts_strogatz(n: usize, k_avg: f64, seed: u64) -> Result<Graph> {
    let k_ring = (k_avg / 2.0).round() as usize;
    gen_watts_strogatz_with(n, k_ring.max(1), WS_REWIRE_PROB, seed)
}

/// One row of a generation grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridCell {
    pub model: Model,
    pub n: usize,
    pub k_avg: f64,
    pub reps: Option<usize>,
    pub seed_base: Option<u64>,
}

/// Generates `reps` realizations per grid cell, class-labelled by model.
/// Graph seeds derive from the cell's seed base (or `default_seed` mixed
/// with the cell position) and the repetition index, so the suite is
/// reproducible and cells can be generated in parallel.
pub fn gen_suite(
    cells: &[GridCell],
    default_reps: usize,
    default_seed: u64,
) -> Result<GraphDataset> {
    if cells.is_empty() {
        return Err(Error::Parameter("empty generation grid".into()));
    }
    let mut requests: Vec<(ModelSpec, String)> = Vec::new();
    for (idx, cell) in cells.iter().enumerate() {
        let reps = cell.reps.unwrap_or(default_reps);
        if reps < 1 {
            return Err(Error::Parameter(format!("cell {idx}: reps must be >= 1")));
        }
        let base = cell.seed_base.unwrap_or_else(|| mix_seed(default_seed, idx as u64));
        for rep in 0..reps {
            let spec = ModelSpec {
                model: cell.model,
                n: cell.n,
                k_avg: cell.k_avg,
                seed: mix_seed(base, rep as u64),
            };
            spec.validate()?;
            let name = format!("{}-n{}-k{}-r{}", cell.model, cell.n, cell.k_avg, rep);
            requests.push((spec, name));
        }
    }
    let graphs: Vec<Graph> = requests
        .par_iter()
        .map(|(spec, name)| generate(spec).map(|g| g.with_name(name.clone())))
        .collect::<Result<_>>()?;
    let class_labels = requests
        .iter()
        .map(|(spec, _)| spec.model.name().to_string())
        .collect();
    Ok(GraphDataset {
        graphs,
        class_labels: Some(class_labels),
        time_labels: None,
    })
}
