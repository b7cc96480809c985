//! Duplication divergence growth models and their grid-search calibration.

use std::collections::HashMap;
use std::sync::Mutex;
use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::Graph;
use crate::{mix_seed, Error, Result};

/// Probability of linking a duplicate to its parent in the retention model.
pub const VAZQUEZ_LINK_PROB: f64 = 0.05;

/// Calibration grid resolution (the swept parameter moves in these steps).
const GRID_STEP: f64 = 0.01;
/// Seeds per grid value in the coarse sweep.
const CALIBRATION_SEEDS: u64 = 5;
/// Candidates from the coarse sweep re-scored with more seeds.
const REFINE_CANDIDATES: usize = 7;
/// Seeds per candidate in the refinement pass.
const REFINE_SEEDS: u64 = 20;
/// Accepted relative deviation of a realization's average degree. The raw
/// growth processes fluctuate wildly between realizations (the per-seed
/// standard deviation of the average degree is of the order of its mean),
/// so generation retries derived sub-seeds until the realization lands in
/// this window; benchmark cells are labelled by (n, k) and rely on it.
const DENSITY_WINDOW: f64 = 0.10;
/// Retry budget for the density window before giving up.
const MAX_ATTEMPTS: u64 = 400;

/// Duplication divergence with edge retention: a random node is duplicated
/// with all its edges, the duplicate links to its parent with probability
/// `p`, and for every duplicated edge pair one side (chosen uniformly) is
/// deleted with probability `q`. Starts from a single edge.
pub fn gen_dd_vazquez_with(n: usize, p: f64, q: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut adjacency: Vec<Vec<u32>> = vec![vec![1], vec![0]];
    while adjacency.len() < n {
        let v = rng.gen_range(0..adjacency.len());
        let twin = adjacency.len() as u32;
        let nbrs = adjacency[v].clone(); // snapshot before the twin appears
        adjacency.push(Vec::with_capacity(nbrs.len() + 1));
        for &k in &nbrs {
            adjacency[twin as usize].push(k);
            adjacency[k as usize].push(twin);
        }
        if rng.gen::<f64>() < p {
            adjacency[twin as usize].push(v as u32);
            adjacency[v].push(twin);
        }
        for &k in &nbrs {
            let side = if rng.gen::<bool>() { v as u32 } else { twin };
            if rng.gen::<f64>() < q {
                remove_edge(&mut adjacency, side, k);
            }
        }
    }
    let edges = adjacency.iter().enumerate().flat_map(|(u, nbrs)| {
        nbrs.iter()
            .filter(move |&&w| (u as u32) < w)
            .map(move |&w| (u, w as usize))
    });
    Graph::from_edges(n, edges.collect::<Vec<_>>())
}

fn remove_edge(adjacency: &mut [Vec<u32>], a: u32, b: u32) {
    if let Some(pos) = adjacency[a as usize].iter().position(|&x| x == b) {
        adjacency[a as usize].swap_remove(pos);
    }
    if let Some(pos) = adjacency[b as usize].iter().position(|&x| x == a) {
        adjacency[b as usize].swap_remove(pos);
    }
}

/// Duplication without edge retention: starting from a single edge, a random
/// node is duplicated and the duplicate links to each neighbour of its
/// parent independently with probability `p` (no parent link).
pub fn gen_dd_ispolatov_with(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut adjacency: Vec<Vec<u32>> = vec![vec![1], vec![0]];
    while adjacency.len() < n {
        let v = rng.gen_range(0..adjacency.len());
        let twin = adjacency.len() as u32;
        let nbrs = adjacency[v].clone();
        adjacency.push(Vec::new());
        for &k in &nbrs {
            if rng.gen::<f64>() < p {
                adjacency[twin as usize].push(k);
                adjacency[k as usize].push(twin);
            }
        }
    }
    let edges = adjacency.iter().enumerate().flat_map(|(u, nbrs)| {
        nbrs.iter()
            .filter(move |&&w| (u as u32) < w)
            .map(move |&w| (u, w as usize))
    });
    Graph::from_edges(n, edges.collect::<Vec<_>>())
}

fn average_degree(g: &Graph) -> f64 {
    2.0 * g.edge_count() as f64 / g.node_count() as f64
}

/// Median realized average degree over fixed seeds. The median is used
/// because the realized density of the growth models is heavily skewed.
fn median_degree<F: Fn(u64) -> Graph>(seeds: u64, generate: F) -> f64 {
    let mut ks: Vec<f64> = (0..seeds).map(|s| average_degree(&generate(s))).collect();
    ks.sort_by(f64::total_cmp);
    let n = ks.len();
    if n % 2 == 1 {
        ks[n / 2]
    } else {
        0.5 * (ks[n / 2 - 1] + ks[n / 2])
    }
}

/// Sweeps `value` over [0, 1] in [`GRID_STEP`] steps, scoring each value by
/// the median realized average degree over a handful of fixed seeds, then
/// re-scores the closest candidates with more seeds and returns the best.
fn grid_search(
    k_avg: f64,
    label: &str,
    mut median_at: impl FnMut(f64, u64) -> f64,
) -> Result<f64> {
    let steps = (1.0 / GRID_STEP).round() as usize;
    let mut scored: Vec<(f64, f64)> = (0..=steps)
        .map(|i| {
            let value = i as f64 * GRID_STEP;
            ((median_at(value, CALIBRATION_SEEDS) - k_avg).abs(), value)
        })
        .collect();
    scored.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));

    let mut best: Option<(f64, f64)> = None;
    for &(_, value) in scored.iter().take(REFINE_CANDIDATES) {
        let err = (median_at(value, REFINE_SEEDS) - k_avg).abs();
        if best.is_none_or(|(b, _)| err < b) {
            best = Some((err, value));
        }
    }
    let (err, value) = best.unwrap();
    // The density window on generation needs the median close enough that
    // acceptable realizations are common.
    if err > 2.0 * DENSITY_WINDOW * k_avg {
        return Err(Error::Calibration(format!(
            "{label}: best grid value {value:.2} has median degree {err:.3} away from target {k_avg}"
        )));
    }
    Ok(value)
}

/// Draws realizations from sub-seeds of `seed` until one lands within
/// [`DENSITY_WINDOW`] of the target average degree.
fn generate_in_window<F: Fn(u64) -> Graph>(
    k_avg: f64,
    label: &str,
    seed: u64,
    generate: F,
) -> Result<Graph> {
    for attempt in 0..MAX_ATTEMPTS {
        let g = generate(mix_seed(seed, attempt));
        if (average_degree(&g) - k_avg).abs() <= DENSITY_WINDOW * k_avg {
            return Ok(g);
        }
    }
    Err(Error::Calibration(format!(
        "{label}: no realization within {:.0}% of degree {k_avg} in {MAX_ATTEMPTS} attempts",
        DENSITY_WINDOW * 100.0
    )))
}

type CalKey = (u8, usize, u64);

fn calibration_cache() -> &'static Mutex<HashMap<CalKey, f64>> {
    static CACHE: OnceLock<Mutex<HashMap<CalKey, f64>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn cached(key: CalKey, compute: impl FnOnce() -> Result<f64>) -> Result<f64> {
    if let Some(&v) = calibration_cache().lock().unwrap().get(&key) {
        return Ok(v);
    }
    let v = compute()?;
    calibration_cache().lock().unwrap().insert(key, v);
    Ok(v)
}

/// Grid-searches the deletion probability `q` of the retention model so the
/// mean average degree over the calibration seeds matches `k_avg`.
/// Calibration seeds are fixed constants, so the result depends only on
/// `(n, k_avg)`; results are memoized.
pub fn calibrate_dd_vazquez(n: usize, k_avg: f64) -> Result<f64> {
    cached((0, n, k_avg.to_bits()), || {
        grid_search(k_avg, "dd-vazquez", |q, seeds| {
            median_degree(seeds, |s| {
                gen_dd_vazquez_with(n, VAZQUEZ_LINK_PROB, q, mix_seed(0xdd01, s ^ (q.to_bits())))
            })
        })
    })
}

/// Grid-searches the attachment probability `p` of the no-retention model.
pub fn calibrate_dd_ispolatov(n: usize, k_avg: f64) -> Result<f64> {
    cached((1, n, k_avg.to_bits()), || {
        grid_search(k_avg, "dd-ispolatov", |p, seeds| {
            median_degree(seeds, |s| {
                gen_dd_ispolatov_with(n, p, mix_seed(0xdd02, s ^ (p.to_bits())))
            })
        })
    })
}

/// Calibrated retention-model graph (`p` fixed at [`VAZQUEZ_LINK_PROB`],
/// `q` from the grid search, realization conditioned on the density window).
pub fn gen_dd_vazquez(n: usize, k_avg: f64, seed: u64) -> Result<Graph> {
    let q = calibrate_dd_vazquez(n, k_avg)?;
    generate_in_window(k_avg, "dd-vazquez", seed, |s| {
        gen_dd_vazquez_with(n, VAZQUEZ_LINK_PROB, q, s)
    })
}

/// Calibrated no-retention-model graph, realization conditioned on the
/// density window.
pub fn gen_dd_ispolatov(n: usize, k_avg: f64, seed: u64) -> Result<Graph> {
    let p = calibrate_dd_ispolatov(n, k_avg)?;
    generate_in_window(k_avg, "dd-ispolatov", seed, |s| {
        gen_dd_ispolatov_with(n, p, s)
    })
}
