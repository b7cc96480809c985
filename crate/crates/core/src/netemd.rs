//! Assembling per-feature distances into graph distances, distance
//! matrices, and Gaussian kernel matrices.

use rayon::prelude::*;

use crate::emd::{emd_star, EmpiricalDistribution};
use crate::features::{extract, FeatureSpec};
use crate::graph::{Graph, GraphDataset};
use crate::{mix_seed, Error, Result};

/// Distance between two graphs for a single feature: the minimized,
/// rescaled earth mover's distance between the two feature distributions.
pub fn netemd_single(a: &EmpiricalDistribution, b: &EmpiricalDistribution) -> f64 {
    emd_star(a, b)
}

/// Unweighted mean of the per-feature distances.
pub fn netemd_set(a: &[EmpiricalDistribution], b: &[EmpiricalDistribution]) -> Result<f64> {
    netemd_set_weighted(a, b, None)
}

/// Mean of per-feature distances with optional non-negative weights
/// (uniform when `None`). The uniform case is the measure proper; weights
/// are an extension hook.
pub fn netemd_set_weighted(
    a: &[EmpiricalDistribution],
    b: &[EmpiricalDistribution],
    weights: Option<&[f64]>,
) -> Result<f64> {
    if a.len() != b.len() || a.is_empty() {
        return Err(Error::Parameter(format!(
            "feature lists of length {} and {}",
            a.len(),
            b.len()
        )));
    }
    let distances = a.iter().zip(b).map(|(da, db)| emd_star(da, db));
    match weights {
        None => Ok(distances.sum::<f64>() / a.len() as f64),
        Some(w) => {
            if w.len() != a.len() || w.iter().any(|&x| x.is_nan() || x < 0.0) {
                return Err(Error::Parameter("invalid feature weights".into()));
            }
            let total: f64 = w.iter().sum();
            if total <= 0.0 {
                return Err(Error::Parameter("feature weights sum to zero".into()));
            }
            Ok(distances.zip(w).map(|(d, &x)| d * x).sum::<f64>() / total)
        }
    }
}

/// Distance between two graphs over a feature set. Feature extraction
/// sub-samples with seeds derived from `seed` when the spec asks for it.
pub fn netemd_between(ga: &Graph, gb: &Graph, spec: &FeatureSpec, seed: u64) -> Result<f64> {
    let fa = extract(ga, spec, mix_seed(seed, 0))?;
    let fb = extract(gb, spec, mix_seed(seed, 1))?;
    netemd_set(&fa, &fb)
}

/// Symmetric matrix of pairwise distances with graph labels attached.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    labels: Vec<String>,
    feature_set: String,
    values: Vec<f64>,
}

impl DistanceMatrix {
    pub fn new(labels: Vec<String>, feature_set: impl Into<String>) -> Self {
        let n = labels.len();
        DistanceMatrix {
            labels,
            feature_set: feature_set.into(),
            values: vec![0.0; n * n],
        }
    }

    /// Builds a matrix from row-major values, checking symmetry, zero
    /// diagonal and non-negativity.
    pub fn from_values(
        labels: Vec<String>,
        feature_set: impl Into<String>,
        values: Vec<f64>,
    ) -> Result<Self> {
        let n = labels.len();
        if values.len() != n * n {
            return Err(Error::Parameter(format!(
                "{} values for a {n}x{n} matrix",
                values.len()
            )));
        }
        let m = DistanceMatrix {
            labels,
            feature_set: feature_set.into(),
            values,
        };
        for i in 0..n {
            if m.get(i, i) != 0.0 {
                return Err(Error::Parameter(format!("nonzero diagonal at {i}")));
            }
            for j in 0..i {
                if m.get(i, j) != m.get(j, i) {
                    return Err(Error::Parameter(format!("asymmetry at ({i},{j})")));
                }
                if m.get(i, j).is_nan() || m.get(i, j) < 0.0 {
                    return Err(Error::Parameter(format!(
                        "negative or NaN distance at ({i},{j})"
                    )));
                }
            }
        }
        Ok(m)
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn feature_set(&self) -> &str {
        &self.feature_set
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n() + j]
    }

    pub fn set_symmetric(&mut self, i: usize, j: usize, value: f64) {
        let n = self.n();
        self.values[i * n + j] = value;
        self.values[j * n + i] = value;
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Applies `f` to every off-diagonal entry (used by the evaluation
    /// protocols' monotone-invariance tests).
    pub fn map_values(&self, f: impl Fn(f64) -> f64) -> DistanceMatrix {
        let n = self.n();
        let mut out = self.clone();
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    out.values[i * n + j] = f(self.get(i, j));
                }
            }
        }
        out
    }
}

/// Pairwise distance matrix over a dataset. Features are extracted once per
/// graph (in parallel) and every unordered pair is compared (in parallel);
/// the result is deterministic for a fixed `seed` regardless of thread
/// count. Per-graph sampling seeds are derived from `seed` and the graph
/// position.
pub fn distance_matrix(
    ds: &GraphDataset,
    spec: &FeatureSpec,
    seed: u64,
) -> Result<DistanceMatrix> {
    if ds.is_empty() {
        return Err(Error::Parameter("empty dataset".into()));
    }
    spec.validate()?;
    let features: Vec<Vec<EmpiricalDistribution>> = ds
        .graphs
        .par_iter()
        .enumerate()
        .map(|(i, g)| {
            extract(g, spec, mix_seed(seed, i as u64)).map_err(|e| {
                Error::Parameter(format!("graph `{}`: {e}", ds.names()[i]))
            })
        })
        .collect::<Result<_>>()?;
    distance_matrix_from_features(&features, ds.names(), spec.set.name())
}

/// Pairwise distances over pre-extracted per-graph feature lists.
pub fn distance_matrix_from_features(
    features: &[Vec<EmpiricalDistribution>],
    labels: Vec<String>,
    feature_set: &str,
) -> Result<DistanceMatrix> {
    let n = features.len();
    if labels.len() != n {
        return Err(Error::Parameter("label/feature length mismatch".into()));
    }
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
        .collect();
    let distances: Vec<Result<f64>> = pairs
        .par_iter()
        .map(|&(i, j)| netemd_set(&features[i], &features[j]))
        .collect();
    let mut dm = DistanceMatrix::new(labels, feature_set);
    for (&(i, j), d) in pairs.iter().zip(distances) {
        dm.set_symmetric(i, j, d?);
    }
    Ok(dm)
}

/// Gaussian kernel matrix `exp(-alpha * d^2)` with labels and the smallest
/// eigenvalue of the transformed matrix attached; the kernel is not
/// guaranteed positive semidefinite, so callers can check `is_psd`.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelMatrix {
    labels: Vec<String>,
    alpha: f64,
    values: Vec<f64>,
    min_eigenvalue: f64,
}

impl KernelMatrix {
    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n() + j]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.min_eigenvalue
    }

    pub fn is_psd(&self) -> bool {
        self.min_eigenvalue >= -1e-9
    }
}

/// Elementwise Gaussian transform of a distance matrix.
pub fn gaussian_kernel(dm: &DistanceMatrix, alpha: f64) -> Result<KernelMatrix> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::Parameter(format!("alpha {alpha} must be positive")));
    }
    let n = dm.n();
    let values: Vec<f64> = dm
        .values()
        .iter()
        .map(|&d| (-alpha * d * d).exp())
        .collect();
    let mut m = nalgebra::DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] = values[i * n + j];
        }
    }
    let min_eigenvalue = m
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    Ok(KernelMatrix {
        labels: dm.labels().to_vec(),
        alpha,
        values,
        min_eigenvalue,
    })
}

/// Log-spaced alpha grid for kernel sweeps, inclusive of both endpoints.
pub fn alpha_grid(lo: f64, hi: f64, count: usize) -> Result<Vec<f64>> {
    if !(lo > 0.0 && hi >= lo) || count == 0 {
        return Err(Error::Parameter(format!(
            "invalid alpha grid {lo}..{hi} x{count}"
        )));
    }
    if count == 1 {
        return Ok(vec![lo]);
    }
    let step = (hi.ln() - lo.ln()) / (count - 1) as f64;
    Ok((0..count)
        .map(|i| (lo.ln() + step * i as f64).exp())
        .collect())
}
