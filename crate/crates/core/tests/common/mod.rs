//! Shared test oracles: independent reference implementations the library
//! is checked against. Everything here favours obviousness over speed.

#![allow(dead_code)] // each integration test binary uses a subset

use netemd_core::emd::{emd, EmpiricalDistribution};
use netemd_core::netemd::DistanceMatrix;
use netemd_core::orbits::GraphletAtlas;
use netemd_core::Graph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// G(n, p) graph for test inputs, independent of the library's generators.
pub fn random_graph(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.gen::<f64>() < p {
                edges.push((i, j));
            }
        }
    }
    Graph::from_edges(n, edges)
}

fn heap_permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(items: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
        if k == 1 {
            out.push(items.clone());
            return;
        }
        for i in 0..k {
            go(items, k - 1, out);
            if k.is_multiple_of(2) {
                items.swap(i, k - 1);
            } else {
                items.swap(0, k - 1);
            }
        }
    }
    let mut items: Vec<usize> = (0..n).collect();
    let mut out = Vec::new();
    go(&mut items, n, &mut out);
    out
}

fn pair_bit(i: usize, j: usize) -> u32 {
    (j * (j - 1) / 2 + i) as u32
}

fn subset_mask(g: &Graph, nodes: &[usize]) -> u16 {
    let mut mask = 0u16;
    for j in 1..nodes.len() {
        for i in 0..j {
            if g.has_edge(nodes[i], nodes[j]) {
                mask |= 1 << pair_bit(i, j);
            }
        }
    }
    mask
}

fn mask_connected(mask: u16, n: usize) -> bool {
    let mut seen = 1u8;
    let mut stack = vec![0usize];
    while let Some(v) = stack.pop() {
        for u in 0..n {
            if u == v {
                continue;
            }
            let (a, b) = if u < v { (u, v) } else { (v, u) };
            if mask & (1 << pair_bit(a, b)) != 0 && seen & (1 << u) == 0 {
                seen |= 1 << u;
                stack.push(u);
            }
        }
    }
    seen.count_ones() as usize == n
}

fn permuted_mask(mask: u16, n: usize, perm: &[usize]) -> u16 {
    let mut out = 0u16;
    for j in 1..n {
        for i in 0..j {
            if mask & (1 << pair_bit(i, j)) != 0 {
                let (a, b) = (perm[i].min(perm[j]), perm[i].max(perm[j]));
                out |= 1 << pair_bit(a, b);
            }
        }
    }
    out
}

/// Brute-force per-node orbit counts: enumerate every node subset of size
/// 2..=max_size, keep connected induced subgraphs, canonicalize each by
/// explicit permutation search and read each node's orbit off the atlas
/// table. Classification is independent of the library's enumeration and
/// lookup tables; only the pinned numbering is shared.
pub fn brute_force_orbit_counts(g: &Graph, max_size: usize) -> Vec<Vec<u64>> {
    let atlas = GraphletAtlas::get();
    let columns = atlas.orbit_count(max_size);
    let n = g.node_count();
    let mut counts = vec![vec![0u64; columns]; n];
    for size in 2..=max_size {
        let perms = heap_permutations(size);
        let mut subset: Vec<usize> = Vec::with_capacity(size);
        enumerate_subsets(n, size, &mut subset, &mut |nodes: &[usize]| {
            let mask = subset_mask(g, nodes);
            if !mask_connected(mask, size) {
                return;
            }
            let (canon, best) = perms
                .iter()
                .map(|p| (permuted_mask(mask, size, p), p))
                .min_by_key(|&(m, _)| m)
                .unwrap();
            let graphlet = atlas
                .graphlets()
                .iter()
                .find(|gl| gl.node_count == size && gl.mask == canon)
                .expect("connected graph on <=5 nodes is in the atlas");
            for (pos, &v) in nodes.iter().enumerate() {
                let orbit = graphlet.vertex_orbits[best[pos]];
                counts[v][orbit as usize] += 1;
            }
        });
    }
    counts
}

fn enumerate_subsets(
    n: usize,
    size: usize,
    current: &mut Vec<usize>,
    visit: &mut impl FnMut(&[usize]),
) {
    if current.len() == size {
        visit(current);
        return;
    }
    let start = current.last().map_or(0, |&v| v + 1);
    for v in start..n {
        if n - v < size - current.len() {
            break;
        }
        current.push(v);
        enumerate_subsets(n, size, current, visit);
        current.pop();
    }
}

/// Brute-force count of induced copies of each graphlet type (atlas ids) on
/// 2..=max_size nodes in the whole graph.
pub fn brute_force_graphlet_census(g: &Graph, max_size: usize) -> Vec<u64> {
    let atlas = GraphletAtlas::get();
    let mut census = vec![0u64; atlas.graphlet_count(max_size)];
    for size in 2..=max_size {
        let perms = heap_permutations(size);
        let mut subset = Vec::with_capacity(size);
        enumerate_subsets(g.node_count(), size, &mut subset, &mut |nodes: &[usize]| {
            let mask = subset_mask(g, nodes);
            if !mask_connected(mask, size) {
                return;
            }
            let canon = perms
                .iter()
                .map(|p| permuted_mask(mask, size, p))
                .min()
                .unwrap();
            let id = atlas
                .graphlets()
                .iter()
                .find(|gl| gl.node_count == size && gl.mask == canon)
                .unwrap()
                .id;
            census[id as usize] += 1;
        });
    }
    census
}

/// Optimal-transport cost between two point-mass distributions by the
/// greedy two-pointer coupling, which is optimal in one dimension.
pub fn coupling_emd(p: &EmpiricalDistribution, q: &EmpiricalDistribution) -> f64 {
    assert_eq!(p.bin_width(), 0.0);
    assert_eq!(q.bin_width(), 0.0);
    let (px, pm) = (p.locations(), p.masses());
    let (qx, qm) = (q.locations(), q.masses());
    let (mut i, mut j) = (0usize, 0usize);
    let mut remaining_p = pm[0];
    let mut remaining_q = qm[0];
    let mut cost = 0.0;
    loop {
        let moved = remaining_p.min(remaining_q);
        cost += moved * (px[i] - qx[j]).abs();
        remaining_p -= moved;
        remaining_q -= moved;
        if remaining_p <= 1e-15 {
            i += 1;
            if i == px.len() {
                break;
            }
            remaining_p = pm[i];
        }
        if remaining_q <= 1e-15 {
            j += 1;
            if j == qx.len() {
                break;
            }
            remaining_q = qm[j];
        }
    }
    cost
}

/// Independent minimization over the translation: rescales both sides (the
/// zero-variance side stays unscaled) and scans the shift over the support
/// bracket with a coarse grid refined to `fine_step` around the best point.
/// The objective is convex, so the two-stage scan finds the global minimum
/// to within the step.
pub fn emd_star_grid_oracle(
    p: &EmpiricalDistribution,
    q: &EmpiricalDistribution,
    fine_step: f64,
) -> f64 {
    let pr = p.rescale_to_unit_variance();
    let qr = q.rescale_to_unit_variance();
    let lo = qr.support_min() - pr.support_max();
    let hi = qr.support_max() - pr.support_min();
    let scan = |a: f64, b: f64, step: f64| -> (f64, f64) {
        let mut best = (f64::INFINITY, a);
        let mut c = a;
        while c <= b + step / 2.0 {
            let v = emd(&pr.translate(c), &qr);
            if v < best.0 {
                best = (v, c);
            }
            c += step;
        }
        best
    };
    if hi <= lo {
        return emd(&pr.translate(lo), &qr);
    }
    let coarse_step = ((hi - lo) / 4000.0).max(fine_step);
    let (_, c0) = scan(lo, hi, coarse_step);
    let (v, _) = scan(
        (c0 - 2.0 * coarse_step).max(lo),
        (c0 + 2.0 * coarse_step).min(hi),
        fine_step,
    );
    v
}

/// Mean over graphs of the area under the ROC curve of the ranking
/// "closer means more likely same-class", with tie handling via average
/// ranks (the Mann-Whitney construction).
pub fn mean_rank_auroc(dm: &DistanceMatrix, classes: &[String]) -> f64 {
    let n = dm.n();
    let mut total = 0.0;
    let mut counted = 0usize;
    for g in 0..n {
        let mut items: Vec<(f64, bool)> = (0..n)
            .filter(|&i| i != g)
            .map(|i| (dm.get(g, i), classes[i] == classes[g]))
            .collect();
        let positives = items.iter().filter(|&&(_, pos)| pos).count();
        let negatives = items.len() - positives;
        if positives == 0 || negatives == 0 {
            continue;
        }
        // Rank by descending distance so larger rank = closer; average
        // ranks over ties.
        items.sort_by(|a, b| b.0.total_cmp(&a.0));
        let mut rank_sum_pos = 0.0;
        let mut idx = 0;
        while idx < items.len() {
            let mut end = idx;
            while end < items.len() && items[end].0 == items[idx].0 {
                end += 1;
            }
            let avg_rank = (idx + 1 + end) as f64 / 2.0; // ranks are 1-based
            for item in &items[idx..end] {
                if item.1 {
                    rank_sum_pos += avg_rank;
                }
            }
            idx = end;
        }
        let p = positives as f64;
        let auroc = (rank_sum_pos - p * (p + 1.0) / 2.0) / (p * negatives as f64);
        total += auroc;
        counted += 1;
    }
    total / counted as f64
}

/// Literal quadratic-per-threshold precision-recall area: for every unique
/// distance threshold all pairs are re-scanned.
pub fn auprc_reference(dm: &DistanceMatrix, classes: &[String]) -> f64 {
    let n = dm.n();
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            pairs.push((dm.get(i, j), classes[i] == classes[j]));
        }
    }
    let positives = pairs.iter().filter(|&&(_, pos)| pos).count() as f64;
    let mut thresholds: Vec<f64> = pairs.iter().map(|&(d, _)| d).collect();
    thresholds.sort_by(f64::total_cmp);
    thresholds.dedup();

    let mut area = 0.0;
    let mut prev_recall = 0.0;
    let mut prev_precision = f64::NAN;
    for &eps in &thresholds {
        let predicted = pairs.iter().filter(|&&(d, _)| d <= eps).count() as f64;
        let tp = pairs.iter().filter(|&&(d, pos)| d <= eps && pos).count() as f64;
        let recall = tp / positives;
        let precision = tp / predicted;
        if prev_precision.is_nan() {
            prev_precision = precision;
        }
        area += (recall - prev_recall) * 0.5 * (precision + prev_precision);
        prev_recall = recall;
        prev_precision = precision;
    }
    area
}

/// Mean local clustering coefficient (triangle density around each node of
/// degree at least two).
pub fn mean_clustering(g: &Graph) -> f64 {
    let n = g.node_count();
    let mut total = 0.0;
    let mut counted = 0usize;
    for v in 0..n {
        let nbrs = g.neighbors(v);
        if nbrs.len() < 2 {
            continue;
        }
        let mut links = 0usize;
        for (a, &x) in nbrs.iter().enumerate() {
            for &y in &nbrs[a + 1..] {
                if g.has_edge(x as usize, y as usize) {
                    links += 1;
                }
            }
        }
        total += 2.0 * links as f64 / (nbrs.len() * (nbrs.len() - 1)) as f64;
        counted += 1;
    }
    if counted == 0 {
        0.0
    } else {
        total / counted as f64
    }
}

/// Random point-mass distribution with at most `max_atoms` atoms.
pub fn random_point_distribution(
    rng: &mut ChaCha8Rng,
    max_atoms: usize,
) -> EmpiricalDistribution {
    let atoms = rng.gen_range(1..=max_atoms);
    let pairs: Vec<(f64, f64)> = (0..atoms)
        .map(|_| (rng.gen_range(-50.0..50.0), rng.gen_range(0.05..1.0)))
        .collect();
    EmpiricalDistribution::points(pairs).unwrap()
}

/// Random integer histogram (unit bins, or a point mass when degenerate).
pub fn random_histogram(rng: &mut ChaCha8Rng, max_values: usize) -> EmpiricalDistribution {
    let len = rng.gen_range(1..=max_values);
    let values: Vec<u64> = (0..len).map(|_| rng.gen_range(0..30)).collect();
    EmpiricalDistribution::integer_histogram(&values).unwrap()
}
