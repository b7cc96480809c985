//! Per-graph feature distributions: the inputs the distance consumes.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::emd::EmpiricalDistribution;
use crate::orbits::{ego_graphlet_counts, orbit_counts, OrbitCountTable};
use crate::spectra::{spectra, SpectrumPair};
use crate::{Error, Graph, Result};

/// The feature families a distance can be built on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FeatureSet {
    /// Degree distribution only.
    Dd,
    /// Graphlet orbit degrees up to size 3 (4 orbits).
    G3,
    /// Graphlet orbit degrees up to size 4 (15 orbits).
    G4,
    /// Graphlet orbit degrees up to size 5 (73 orbits).
    G5,
    /// Graphlet-type counts in 1-step ego networks, sizes up to 4 (9 types).
    E4,
    /// Laplacian and normalized-Laplacian eigenvalue spectra (2 features).
    Spectral,
}

impl FeatureSet {
    pub fn name(&self) -> &'static str {
        match self {
            FeatureSet::Dd => "dd",
            FeatureSet::G3 => "g3",
            FeatureSet::G4 => "g4",
            FeatureSet::G5 => "g5",
            FeatureSet::E4 => "e4",
            FeatureSet::Spectral => "s",
        }
    }

    pub fn all() -> [FeatureSet; 6] {
        [
            FeatureSet::Dd,
            FeatureSet::G3,
            FeatureSet::G4,
            FeatureSet::G5,
            FeatureSet::E4,
            FeatureSet::Spectral,
        ]
    }
}

impl std::str::FromStr for FeatureSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "dd" => Ok(FeatureSet::Dd),
            "g3" => Ok(FeatureSet::G3),
            "g4" => Ok(FeatureSet::G4),
            "g5" => Ok(FeatureSet::G5),
            "e4" => Ok(FeatureSet::E4),
            "s" | "spectral" => Ok(FeatureSet::Spectral),
            other => Err(Error::Parameter(format!("unknown feature set `{other}`"))),
        }
    }
}

impl std::fmt::Display for FeatureSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// A feature set plus the node-sampling fraction applied to per-node
/// features (1 = use every node).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeatureSpec {
    pub set: FeatureSet,
    pub sample_fraction: f64,
}

impl FeatureSpec {
    pub fn new(set: FeatureSet) -> Self {
        FeatureSpec {
            set,
            sample_fraction: 1.0,
        }
    }

    pub fn with_sample_fraction(mut self, fraction: f64) -> Self {
        self.sample_fraction = fraction;
        self
    }

    pub fn dd() -> Self {
        Self::new(FeatureSet::Dd)
    }
    pub fn g3() -> Self {
        Self::new(FeatureSet::G3)
    }
    pub fn g4() -> Self {
        Self::new(FeatureSet::G4)
    }
    pub fn g5() -> Self {
        Self::new(FeatureSet::G5)
    }
    pub fn e4() -> Self {
        Self::new(FeatureSet::E4)
    }
    pub fn spectral() -> Self {
        Self::new(FeatureSet::Spectral)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sample_fraction > 0.0 && self.sample_fraction <= 1.0) {
            return Err(Error::Parameter(format!(
                "sample fraction {} outside (0, 1]",
                self.sample_fraction
            )));
        }
        Ok(())
    }
}

/// Uniform node sample without replacement: `ceil(fraction * n)` nodes (at
/// least one), returned sorted. `fraction = 1` returns every node without
/// consuming randomness.
pub fn sample_nodes(node_count: usize, fraction: f64, seed: u64) -> Vec<usize> {
    if fraction >= 1.0 {
        return (0..node_count).collect();
    }
    let k = ((fraction * node_count as f64).ceil() as usize).clamp(1, node_count);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut nodes: Vec<usize> = (0..node_count).collect();
    nodes.partial_shuffle(&mut rng, k);
    let mut chosen = nodes[..k].to_vec();
    chosen.sort_unstable();
    chosen
}

/// Histograms of every column of a count table, restricted to `sample` when
/// given. Counts are always taken from the full table; sampling only
/// restricts which nodes' values enter the histogram.
pub fn distributions_from_table(
    table: &OrbitCountTable,
    sample: Option<&[usize]>,
) -> Result<Vec<EmpiricalDistribution>> {
    if let Some(s) = sample {
        if s.is_empty() {
            return Err(Error::Parameter("empty node sample".into()));
        }
        if let Some(&bad) = s.iter().find(|&&v| v >= table.node_count()) {
            return Err(Error::NodeOutOfRange {
                index: bad,
                node_count: table.node_count(),
            });
        }
    }
    (0..table.column_count())
        .map(|c| {
            let values = match sample {
                Some(s) => table.column_sampled(c, s),
                None => table.column(c),
            };
            EmpiricalDistribution::integer_histogram(&values)
        })
        .collect()
}

/// Point-mass empirical distributions of the two spectra.
pub fn distributions_from_spectra(sp: &SpectrumPair) -> Result<Vec<EmpiricalDistribution>> {
    Ok(vec![
        EmpiricalDistribution::point_masses(&sp.laplacian)?,
        EmpiricalDistribution::point_masses(&sp.normalized)?,
    ])
}

/// Extracts the feature distributions of one graph. `seed` drives node
/// sub-sampling only; with `sample_fraction = 1` the result is
/// seed-independent. Spectral features are not node-local, so sampling does
/// not apply to them.
pub fn extract(g: &Graph, spec: &FeatureSpec, seed: u64) -> Result<Vec<EmpiricalDistribution>> {
    spec.validate()?;
    if g.node_count() == 0 {
        return Err(Error::Parameter(format!(
            "graph `{}` has no nodes",
            g.name()
        )));
    }
    let sample_vec;
    let sample: Option<&[usize]> = if spec.sample_fraction < 1.0 {
        sample_vec = sample_nodes(g.node_count(), spec.sample_fraction, seed);
        Some(&sample_vec)
    } else {
        None
    };
    match spec.set {
        FeatureSet::Dd => {
            let degrees: Vec<u64> = g.degree_sequence().iter().map(|&d| d as u64).collect();
            let values = match sample {
                Some(s) => s.iter().map(|&v| degrees[v]).collect(),
                None => degrees,
            };
            Ok(vec![EmpiricalDistribution::integer_histogram(&values)?])
        }
        FeatureSet::G3 => distributions_from_table(&orbit_counts(g, 3)?, sample),
        FeatureSet::G4 => distributions_from_table(&orbit_counts(g, 4)?, sample),
        FeatureSet::G5 => distributions_from_table(&orbit_counts(g, 5)?, sample),
        FeatureSet::E4 => distributions_from_table(&ego_graphlet_counts(g, 1, 4)?, sample),
        FeatureSet::Spectral => distributions_from_spectra(&spectra(g)?),
    }
}
