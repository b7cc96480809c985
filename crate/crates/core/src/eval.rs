//! Evaluation protocols for comparison quality: class-separation score,
//! area under the precision-recall curve, time-ordering recovery, and a
//! leave-one-out nearest-neighbour classifier.

use crate::netemd::DistanceMatrix;
use crate::{Error, Result};

/// Result of the class-separation score. `value` is the mean over graphs of
/// the empirical probability that a same-class graph is closer than an
/// other-class graph (ties count one half). Graphs whose class has no other
/// member are excluded and listed in `excluded`.
#[derive(Debug, Clone, PartialEq)]
pub struct SeparationScore {
    pub value: f64,
    pub excluded: Vec<usize>,
}

fn check_labels(dm: &DistanceMatrix, classes: &[String]) -> Result<()> {
    if classes.len() != dm.n() {
        return Err(Error::Parameter(format!(
            "{} class labels for {} graphs",
            classes.len(),
            dm.n()
        )));
    }
    let mut distinct: Vec<&String> = classes.iter().collect();
    distinct.sort();
    distinct.dedup();
    if distinct.len() < 2 {
        return Err(Error::Parameter(
            "separation scores need at least two classes".into(),
        ));
    }
    Ok(())
}

/// Mean empirical probability that within-class distances beat
/// between-class distances: 0.5 is chance level, 1 is perfect separation.
/// For each graph `g` the probability is computed exactly over all pairs of
/// one same-class graph (excluding `g`) and one other-class graph, with
/// distance ties counted one half.
pub fn pbar(dm: &DistanceMatrix, classes: &[String]) -> Result<SeparationScore> {
    check_labels(dm, classes)?;
    let n = dm.n();
    let mut total = 0.0;
    let mut counted = 0usize;
    let mut excluded = Vec::new();
    for g in 0..n {
        let same: Vec<usize> = (0..n)
            .filter(|&i| i != g && classes[i] == classes[g])
            .collect();
        let other: Vec<usize> = (0..n).filter(|&i| classes[i] != classes[g]).collect();
        if same.is_empty() {
            excluded.push(g);
            continue;
        }
        let mut wins = 0.0;
        for &s in &same {
            let ds = dm.get(g, s);
            for &o in &other {
                let doo = dm.get(g, o);
                if ds < doo {
                    wins += 1.0;
                } else if ds == doo {
                    wins += 0.5;
                }
            }
        }
        total += wins / (same.len() as f64 * other.len() as f64);
        counted += 1;
    }
    if counted == 0 {
        return Err(Error::Parameter("every class has a single member".into()));
    }
    Ok(SeparationScore {
        value: total / counted as f64,
        excluded,
    })
}

/// Area under the precision-recall curve of the pair classifier "similar
/// iff distance < epsilon", sweeping epsilon over the observed distances.
/// Positives are same-class pairs. The area is integrated linearly in
/// recall, extending the first threshold's precision back to recall zero.
pub fn auprc(dm: &DistanceMatrix, classes: &[String]) -> Result<f64> {
    check_labels(dm, classes)?;
    let n = dm.n();
    let mut pairs: Vec<(f64, bool)> = Vec::with_capacity(n * (n - 1) / 2);
    let mut positives = 0usize;
    for i in 0..n {
        for j in (i + 1)..n {
            let pos = classes[i] == classes[j];
            positives += pos as usize;
            pairs.push((dm.get(i, j), pos));
        }
    }
    if positives == 0 {
        return Err(Error::Parameter(
            "no same-class pairs; precision-recall curve undefined".into(),
        ));
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));

    let mut area = 0.0;
    let mut prev_recall = 0.0;
    let mut prev_precision = f64::NAN; // filled at the first threshold
    let mut tp = 0usize;
    let mut predicted = 0usize;
    let mut idx = 0;
    while idx < pairs.len() {
        // advance over one group of tied distances: one threshold step
        let eps = pairs[idx].0;
        while idx < pairs.len() && pairs[idx].0 == eps {
            predicted += 1;
            tp += pairs[idx].1 as usize;
            idx += 1;
        }
        let recall = tp as f64 / positives as f64;
        let precision = tp as f64 / predicted as f64;
        if prev_precision.is_nan() {
            prev_precision = precision;
        }
        area += (recall - prev_recall) * 0.5 * (precision + prev_precision);
        prev_recall = recall;
        prev_precision = precision;
    }
    Ok(area)
}

/// Kendall's rank correlation (tau-a, no tie correction) between two strict
/// orderings of the same items. Each argument lists item ids in rank order.
pub fn kendall_tau(a: &[usize], b: &[usize]) -> f64 {
    let n = a.len();
    assert_eq!(n, b.len());
    assert!(n >= 2);
    let max_id = *a.iter().max().unwrap();
    let mut pos_a = vec![usize::MAX; max_id + 1];
    let mut pos_b = vec![usize::MAX; max_id + 1];
    for (rank, &item) in a.iter().enumerate() {
        pos_a[item] = rank;
    }
    for (rank, &item) in b.iter().enumerate() {
        pos_b[item] = rank;
    }
    let mut concordant = 0i64;
    let mut discordant = 0i64;
    for i in 0..n {
        for j in (i + 1)..n {
            let (x, y) = (a[i], a[j]); // pos_a[x] < pos_a[y] by construction
            if pos_b[x] < pos_b[y] {
                concordant += 1;
            } else {
                discordant += 1;
            }
        }
    }
    (concordant - discordant) as f64 / (n as f64 * (n as f64 - 1.0) / 2.0)
}

/// Time-ordering recovery. Four orderings are built greedily from the
/// distance matrix: the anchor (the true first or the true last network) is
/// placed first, then either the network closest to the last added one
/// (algorithm 1) or the network with the smallest mean distance to all
/// ranked ones (algorithm 2) is appended; distance ties pick the lowest
/// index. Last-anchored orderings are reversed before scoring against the
/// true order with Kendall's tau.
#[derive(Debug, Clone, PartialEq)]
pub struct RankingResult {
    /// Inferred orderings: [first/alg1, first/alg2, last/alg1, last/alg2].
    pub orderings: [Vec<usize>; 4],
    pub taus: [f64; 4],
    pub best_tau: f64,
}

pub fn time_rankings(dm: &DistanceMatrix, true_order: &[usize]) -> Result<RankingResult> {
    let n = dm.n();
    if n < 3 {
        return Err(Error::Parameter("time ordering needs at least 3 graphs".into()));
    }
    let mut seen = vec![false; n];
    for &g in true_order {
        if g >= n || seen[g] {
            return Err(Error::Parameter("true order is not a permutation".into()));
        }
        seen[g] = true;
    }
    if true_order.len() != n {
        return Err(Error::Parameter("true order is not a permutation".into()));
    }

    let greedy = |anchor: usize, chain: bool| -> Vec<usize> {
        let mut ranked = vec![anchor];
        let mut used = vec![false; n];
        used[anchor] = true;
        while ranked.len() < n {
            let mut best: Option<(f64, usize)> = None;
            for cand in 0..n {
                if used[cand] {
                    continue;
                }
                let score = if chain {
                    dm.get(*ranked.last().unwrap(), cand)
                } else {
                    ranked.iter().map(|&r| dm.get(r, cand)).sum::<f64>() / ranked.len() as f64
                };
                // strict < keeps the lowest candidate index on ties
                if best.is_none_or(|(b, _)| score < b) {
                    best = Some((score, cand));
                }
            }
            let (_, next) = best.unwrap();
            ranked.push(next);
            used[next] = true;
        }
        ranked
    };

    let first = true_order[0];
    let last = true_order[n - 1];
    let mut orderings = [
        greedy(first, true),
        greedy(first, false),
        greedy(last, true),
        greedy(last, false),
    ];
    orderings[2].reverse();
    orderings[3].reverse();

    let taus = [
        kendall_tau(true_order, &orderings[0]),
        kendall_tau(true_order, &orderings[1]),
        kendall_tau(true_order, &orderings[2]),
        kendall_tau(true_order, &orderings[3]),
    ];
    let best_tau = taus.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(RankingResult {
        orderings,
        taus,
        best_tau,
    })
}

/// Leave-one-out k-nearest-neighbour accuracy on a distance matrix.
/// Neighbour ties at equal distance are resolved by index; vote ties are
/// broken by the label of the single nearest neighbour.
pub fn knn_accuracy(dm: &DistanceMatrix, classes: &[String], k: usize) -> Result<f64> {
    check_labels(dm, classes)?;
    let n = dm.n();
    if k == 0 || k >= n {
        return Err(Error::Parameter(format!("k = {k} outside 1..{n}")));
    }
    let mut correct = 0usize;
    for g in 0..n {
        let mut others: Vec<usize> = (0..n).filter(|&i| i != g).collect();
        others.sort_by(|&a, &b| dm.get(g, a).total_cmp(&dm.get(g, b)).then(a.cmp(&b)));
        let neighbours = &others[..k];
        let mut votes: Vec<(&String, usize)> = Vec::new();
        for &nb in neighbours {
            match votes.iter_mut().find(|(label, _)| *label == &classes[nb]) {
                Some(entry) => entry.1 += 1,
                None => votes.push((&classes[nb], 1)),
            }
        }
        let top = votes.iter().map(|&(_, c)| c).max().unwrap();
        let tied: Vec<&String> = votes
            .iter()
            .filter(|&&(_, c)| c == top)
            .map(|&(label, _)| label)
            .collect();
        let predicted = if tied.len() == 1 {
            tied[0]
        } else {
            &classes[neighbours[0]]
        };
        correct += (predicted == &classes[g]) as usize;
    }
    Ok(correct as f64 / n as f64)
}
