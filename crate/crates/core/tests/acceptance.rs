//! Acceptance suite: one test per shipped quality criterion. Each test
//! prints a PASS/FAIL line with the measured value (visible with
//! `cargo test --test acceptance -- --nocapture`).

#![allow(clippy::needless_range_loop)]

mod common;

use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use netemd_core::emd::{emd, emd_star, EmpiricalDistribution};
use netemd_core::eval::{kendall_tau, pbar, time_rankings};
use netemd_core::features::{
    distributions_from_spectra, distributions_from_table, extract, sample_nodes,
};
use netemd_core::generators::{
    gen_ba, gen_er, gen_suite, gen_watts_strogatz_with, GridCell, Model,
};
use netemd_core::netemd::{distance_matrix_from_features, netemd_set};
use netemd_core::orbits::{orbit_counts, OrbitCountTable};
use netemd_core::spectra::spectra;
use netemd_core::{mix_seed, FeatureSpec, Graph};

fn report(criterion: &str, pass: bool, detail: &str) {
    println!(
        "criterion {criterion}: {} ({detail})",
        if pass { "PASS" } else { "FAIL" }
    );
}

fn complete(n: usize) -> Graph {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            edges.push((i, j));
        }
    }
    Graph::from_edges(n, edges)
}

/// Desk-scale single-cell benchmark shared by criteria 1 and 10: 8 models,
/// n = 1000, average degree 10, 10 realizations each, with cached orbit
/// tables for graphlets up to size 4.
struct DeskSuite {
    labels: Vec<String>,
    classes: Vec<String>,
    tables: Vec<OrbitCountTable>,
}

fn desk_suite() -> &'static DeskSuite {
    static SUITE: OnceLock<DeskSuite> = OnceLock::new();
    SUITE.get_or_init(|| {
        let cells: Vec<GridCell> = Model::all()
            .into_iter()
            .map(|model| GridCell {
                model,
                n: 1000,
                k_avg: 10.0,
                reps: Some(10),
                seed_base: None,
            })
            .collect();
        let ds = gen_suite(&cells, 10, 2024).expect("desk-scale suite generates");
        let tables: Vec<OrbitCountTable> = ds
            .graphs
            .par_iter()
            .map(|g| orbit_counts(g, 4).expect("orbit counting"))
            .collect();
        DeskSuite {
            labels: ds.names(),
            classes: ds.class_labels.clone().unwrap(),
            tables,
        }
    })
}

fn pbar_from_tables(
    suite: &DeskSuite,
    sample_fraction: f64,
    sample_seed: u64,
) -> f64 {
    let features: Vec<Vec<EmpiricalDistribution>> = suite
        .tables
        .par_iter()
        .enumerate()
        .map(|(i, table)| {
            let sample_vec;
            let sample = if sample_fraction < 1.0 {
                sample_vec = sample_nodes(
                    table.node_count(),
                    sample_fraction,
                    mix_seed(sample_seed, i as u64),
                );
                Some(&sample_vec[..])
            } else {
                None
            };
            distributions_from_table(table, sample).expect("histograms")
        })
        .collect();
    let dm = distance_matrix_from_features(&features, suite.labels.clone(), "g4").unwrap();
    pbar(&dm, &suite.classes).unwrap().value
}

/// Criterion 1: 8 models x (n=1000, k=10) x 10 reps, graphlets up to size
/// 4; class separation at least 0.90.
#[test]
fn criterion_01_desk_scale_separation() {
    let value = pbar_from_tables(desk_suite(), 1.0, 0);
    let pass = value >= 0.90;
    report("01 desk-scale g4 separation", pass, &format!("pbar = {value:.4}"));
    assert!(pass, "pbar {value:.4} below 0.90");
}

/// Criterion 2: sizes 500/1000 crossed with degrees 10/20; both the
/// graphlet and the spectral variant separate models at 0.85 or better.
#[test]
fn criterion_02_size_density_robustness() {
    let mut cells = Vec::new();
    for &n in &[500usize, 1000] {
        for &k in &[10.0f64, 20.0] {
            for model in Model::all() {
                cells.push(GridCell {
                    model,
                    n,
                    k_avg: k,
                    reps: Some(5),
                    seed_base: None,
                });
            }
        }
    }
    let ds = gen_suite(&cells, 5, 77).expect("mini grid generates");
    let labels = ds.names();
    let classes = ds.class_labels.clone().unwrap();

    let g4_features: Vec<Vec<EmpiricalDistribution>> = ds
        .graphs
        .par_iter()
        .map(|g| distributions_from_table(&orbit_counts(g, 4).unwrap(), None).unwrap())
        .collect();
    let dm_g4 = distance_matrix_from_features(&g4_features, labels.clone(), "g4").unwrap();
    let pbar_g4 = pbar(&dm_g4, &classes).unwrap().value;

    let spectral_features: Vec<Vec<EmpiricalDistribution>> = ds
        .graphs
        .par_iter()
        .map(|g| distributions_from_spectra(&spectra(g).unwrap()).unwrap())
        .collect();
    let dm_s = distance_matrix_from_features(&spectral_features, labels, "s").unwrap();
    let pbar_s = pbar(&dm_s, &classes).unwrap().value;

    let pass = pbar_g4 >= 0.85 && pbar_s >= 0.85;
    report(
        "02 size/density robustness",
        pass,
        &format!("pbar g4 = {pbar_g4:.4}, pbar s = {pbar_s:.4}"),
    );
    assert!(pass, "g4 {pbar_g4:.4} / s {pbar_s:.4} below 0.85");
}

/// Criterion 3: the degree-distribution distance groups models across
/// scale: same-model pairs at different (n, k) sit closer than cross-model
/// pairs at equal (n, k), in at least 90% of seeded trials both ways.
#[test]
fn criterion_03_degree_shape_across_scales() {
    let dd = FeatureSpec::dd();
    let mut ba_side = 0;
    let mut er_ok = 0;
    let trials = 20;
    for t in 0..trials {
        let ba_a = gen_ba(2000, 40.0, mix_seed(31, t)).unwrap();
        let ba_b = gen_ba(5000, 10.0, mix_seed(32, t)).unwrap();
        let er_a = gen_er(2000, 40.0, mix_seed(33, t)).unwrap();
        let er_b = gen_er(5000, 10.0, mix_seed(34, t)).unwrap();
        let f = |g: &Graph| extract(g, &dd, 0).unwrap();
        let (fba_a, fba_b, fer_a, fer_b) = (f(&ba_a), f(&ba_b), f(&er_a), f(&er_b));
        let d_ba_ba = netemd_set(&fba_a, &fba_b).unwrap();
        let d_ba_er = netemd_set(&fba_a, &fer_a).unwrap();
        let d_er_er = netemd_set(&fer_a, &fer_b).unwrap();
        if d_ba_ba < d_ba_er {
            ba_side += 1;
        }
        if d_er_er < d_ba_er {
            er_ok += 1;
        }
    }
    let pass = ba_side >= 18 && er_ok >= 18;
    report(
        "03 degree-shape ordering",
        pass,
        &format!("ba {ba_side}/{trials}, er {er_ok}/{trials}"),
    );
    assert!(pass, "orderings held ba {ba_side}, er {er_ok} of {trials}");
}

/// Criterion 4: pseudometric behaviour on random distribution triples and
/// random graph triples: exact symmetry, vanishing self-distance, and no
/// triangle-inequality violation above 1e-7.
#[test]
fn criterion_04_pseudometric_suite() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut violations = 0usize;
    for _ in 0..200 {
        let triple: Vec<EmpiricalDistribution> = (0..3)
            .map(|_| {
                if rng.gen::<bool>() {
                    common::random_point_distribution(&mut rng, 12)
                } else {
                    common::random_histogram(&mut rng, 20)
                }
            })
            .collect();
        for d in &triple {
            assert!(emd_star(d, d) < 1e-12);
        }
        for (a, b) in [(0, 1), (0, 2), (1, 2)] {
            let ab = emd_star(&triple[a], &triple[b]);
            let ba = emd_star(&triple[b], &triple[a]);
            assert_eq!(ab.to_bits(), ba.to_bits(), "symmetry must be exact");
        }
        let (dpq, dqr, dpr) = (
            emd_star(&triple[0], &triple[1]),
            emd_star(&triple[1], &triple[2]),
            emd_star(&triple[0], &triple[2]),
        );
        if dpr > dpq + dqr + 1e-7 {
            violations += 1;
        }
    }

    let spec = FeatureSpec::g4();
    for t in 0..50u64 {
        let gs: Vec<Graph> = (0..3)
            .map(|i| common::random_graph(10 + (t as usize % 20), 0.25, mix_seed(400 + i, t)))
            .collect();
        let fs: Vec<_> = gs.iter().map(|g| extract(g, &spec, 0).unwrap()).collect();
        for f in &fs {
            assert!(netemd_set(f, f).unwrap() < 1e-12);
        }
        let ab = netemd_set(&fs[0], &fs[1]).unwrap();
        let ba = netemd_set(&fs[1], &fs[0]).unwrap();
        assert_eq!(ab.to_bits(), ba.to_bits());
        let (dpq, dqr, dpr) = (
            ab,
            netemd_set(&fs[1], &fs[2]).unwrap(),
            netemd_set(&fs[0], &fs[2]).unwrap(),
        );
        if dpr > dpq + dqr + 1e-7 {
            violations += 1;
        }
    }
    let pass = violations == 0;
    report(
        "04 pseudometric suite",
        pass,
        &format!("triangle violations = {violations}"),
    );
    assert!(pass);
}

/// Criterion 5: the CDF integral agrees with an optimal-coupling oracle on
/// 500 random point-mass pairs to 1e-9.
#[test]
fn criterion_05_emd_oracle_equivalence() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst = 0.0f64;
    for _ in 0..500 {
        let p = common::random_point_distribution(&mut rng, 8);
        let q = common::random_point_distribution(&mut rng, 8);
        let direct = emd(&p, &q);
        let oracle = common::coupling_emd(&p, &q);
        worst = worst.max((direct - oracle).abs());
    }
    let pass = worst < 1e-9;
    report("05 emd oracle equivalence", pass, &format!("max |diff| = {worst:.2e}"));
    assert!(pass, "max deviation {worst:.2e}");
}

/// Criterion 6: affine maps of either input move the distance by less than
/// 1e-6, and any two single point masses are at distance exactly zero.
#[test]
fn criterion_06_affine_invariance() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let p = if rng.gen::<bool>() {
            common::random_point_distribution(&mut rng, 10)
        } else {
            common::random_histogram(&mut rng, 16)
        };
        let q = if rng.gen::<bool>() {
            common::random_point_distribution(&mut rng, 10)
        } else {
            common::random_histogram(&mut rng, 16)
        };
        let affine = |d: &EmpiricalDistribution, a: f64, b: f64| {
            let atoms: Vec<(f64, f64)> = d
                .locations()
                .iter()
                .zip(d.masses())
                .map(|(&x, &m)| (a * x + b, m))
                .collect();
            EmpiricalDistribution::bins(atoms, a * d.bin_width()).unwrap()
        };
        let (a1, b1) = (rng.gen_range(0.1..10.0), rng.gen_range(-20.0..20.0));
        let (a2, b2) = (rng.gen_range(0.1..10.0), rng.gen_range(-20.0..20.0));
        let base = emd_star(&p, &q);
        let moved = emd_star(&affine(&p, a1, b1), &affine(&q, a2, b2));
        worst = worst.max((base - moved).abs());
    }
    let mut point_zero = true;
    for _ in 0..50 {
        let a = EmpiricalDistribution::points([(rng.gen_range(-100.0..100.0), 1.0)]).unwrap();
        let b = EmpiricalDistribution::points([(rng.gen_range(-100.0..100.0), 1.0)]).unwrap();
        point_zero &= emd_star(&a, &b) == 0.0;
    }
    let pass = worst < 1e-6 && point_zero;
    report(
        "06 affine invariance",
        pass,
        &format!("max |shift| = {worst:.2e}, point masses exact zero = {point_zero}"),
    );
    assert!(pass);
}

/// Criterion 7: orbit counts match brute-force subset enumeration exactly
/// on 50 random graphs with at most 14 nodes, and column 0 is the degree.
#[test]
fn criterion_07_orbit_count_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for trial in 0..50 {
        let n = rng.gen_range(6..=14);
        let p = rng.gen_range(0.15..0.55);
        let g = common::random_graph(n, p, 700 + trial);
        let table = orbit_counts(&g, 5).unwrap();
        let oracle = common::brute_force_orbit_counts(&g, 5);
        for v in 0..n {
            assert_eq!(table.row(v), &oracle[v][..], "trial {trial} node {v}");
            assert_eq!(table.row(v)[0] as usize, g.degree(v));
        }
    }
    report("07 orbit-count oracle", true, "50 graphs exact");
}

/// Criterion 8: spectra are sane on random graphs, and complete graphs of
/// different sizes collapse under graphlet features but not spectral ones.
#[test]
fn criterion_08_spectra_sanity() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for trial in 0..50 {
        let n = rng.gen_range(5..=30);
        let p = rng.gen_range(0.1..0.6);
        let g = common::random_graph(n, p, 800 + trial);
        // spectra() errors if an eigenvalue violates its range by > 1e-9
        let sp = spectra(&g).unwrap();
        let trace: f64 = sp.laplacian.iter().sum();
        let degsum: usize = g.degree_sequence().iter().sum();
        assert!((trace - degsum as f64).abs() < 1e-9, "trace identity");
        assert!(sp.normalized.iter().all(|&v| (0.0..=2.0).contains(&v)));
    }
    let (k8, k12) = (complete(8), complete(12));
    let g5 = |g: &Graph| extract(g, &FeatureSpec::g5(), 0).unwrap();
    let sp = |g: &Graph| extract(g, &FeatureSpec::spectral(), 0).unwrap();
    let d_g5 = netemd_set(&g5(&k8), &g5(&k12)).unwrap();
    let d_s = netemd_set(&sp(&k8), &sp(&k12)).unwrap();
    let pass = d_g5 == 0.0 && d_s > 0.0;
    report(
        "08 spectra sanity",
        pass,
        &format!("netemd_g5(K8,K12) = {d_g5}, netemd_s(K8,K12) = {d_s:.4}"),
    );
    assert!(pass);
}

/// Criterion 9: a 30-step chain of cumulative 1% edge rewiring starting
/// from a ring lattice is time-orderable from the graphlet distance with a
/// best-of-four Kendall tau of at least 0.8.
#[test]
fn criterion_09_time_ordering() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut current = gen_watts_strogatz_with(400, 5, 0.0, 99).unwrap();
    let per_step = current.edge_count() / 100;
    let mut chain = vec![current.clone()];
    for _ in 1..30 {
        let mut edges: Vec<(u32, u32)> = current.edges().collect();
        for _ in 0..per_step {
            let victim = rng.gen_range(0..edges.len());
            edges.swap_remove(victim);
            loop {
                let u = rng.gen_range(0..400u32);
                let v = rng.gen_range(0..400u32);
                let (u, v) = (u.min(v), u.max(v));
                if u != v && !edges.contains(&(u, v)) {
                    edges.push((u, v));
                    break;
                }
            }
        }
        current = Graph::from_edges(400, edges.iter().map(|&(u, v)| (u as usize, v as usize)));
        chain.push(current.clone());
    }
    let features: Vec<Vec<EmpiricalDistribution>> = chain
        .par_iter()
        .map(|g| distributions_from_table(&orbit_counts(g, 4).unwrap(), None).unwrap())
        .collect();
    let labels = (0..chain.len()).map(|i| format!("t{i}")).collect();
    let dm = distance_matrix_from_features(&features, labels, "g4").unwrap();
    let truth: Vec<usize> = (0..chain.len()).collect();
    let result = time_rankings(&dm, &truth).unwrap();
    let pass = result.best_tau >= 0.8;
    report(
        "09 time ordering",
        pass,
        &format!("best tau = {:.4}", result.best_tau),
    );
    assert!(pass, "best tau {:.4}", result.best_tau);
}

/// Criterion 10: on the criterion-1 dataset, separation under 10% node
/// sampling stays within 0.05 of the full score, averaged over 10 seeds.
#[test]
fn criterion_10_subsampling_stability() {
    let suite = desk_suite();
    let full = pbar_from_tables(suite, 1.0, 0);
    let mean_sampled = (0..10u64)
        .map(|seed| pbar_from_tables(suite, 0.1, seed))
        .sum::<f64>()
        / 10.0;
    let diff = (full - mean_sampled).abs();
    let pass = diff <= 0.05;
    report(
        "10 sub-sampling stability",
        pass,
        &format!("pbar full = {full:.4}, mean 10% = {mean_sampled:.4}, |diff| = {diff:.4}"),
    );
    assert!(pass, "drift {diff:.4} above 0.05");
}

/// Criterion 11: the evaluation protocols agree with their reference
/// constructions, and the rank-correlation fixtures are exact.
#[test]
fn criterion_11_protocol_oracles() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst_pbar = 0.0f64;
    for trial in 0..100 {
        let n = rng.gen_range(8..=16);
        let classes: Vec<String> = (0..n).map(|i| format!("c{}", i % (2 + trial % 2))).collect();
        let mut dm =
            netemd_core::DistanceMatrix::new((0..n).map(|i| format!("g{i}")).collect(), "x");
        for i in 0..n {
            for j in (i + 1)..n {
                // quantized distances exercise the tie handling
                let d = (rng.gen_range(0.0f64..4.0) * 4.0).round() / 4.0;
                dm.set_symmetric(i, j, d);
            }
        }
        let direct = pbar(&dm, &classes).unwrap().value;
        let auroc = common::mean_rank_auroc(&dm, &classes);
        worst_pbar = worst_pbar.max((direct - auroc).abs());
    }

    let mut worst_auprc = 0.0f64;
    for trial in 0..50 {
        let n = rng.gen_range(6..=10);
        let classes: Vec<String> = (0..n).map(|i| format!("c{}", i % (2 + trial % 3))).collect();
        let mut dm =
            netemd_core::DistanceMatrix::new((0..n).map(|i| format!("g{i}")).collect(), "x");
        for i in 0..n {
            for j in (i + 1)..n {
                let d = (rng.gen_range(0.0f64..3.0) * 8.0).round() / 8.0;
                dm.set_symmetric(i, j, d);
            }
        }
        let direct = netemd_core::eval::auprc(&dm, &classes).unwrap();
        let reference = common::auprc_reference(&dm, &classes);
        worst_auprc = worst_auprc.max((direct - reference).abs());
    }

    let tau_identity = kendall_tau(&[0, 1, 2, 3, 4], &[0, 1, 2, 3, 4]);
    let tau_reversal = kendall_tau(&[0, 1, 2, 3, 4], &[4, 3, 2, 1, 0]);
    let tau_swap = kendall_tau(&[0, 1, 2, 3], &[0, 2, 1, 3]);
    let fixtures_ok =
        tau_identity == 1.0 && tau_reversal == -1.0 && (tau_swap - 2.0 / 3.0).abs() < 1e-15;

    let pass = worst_pbar < 1e-10 && worst_auprc < 1e-12 && fixtures_ok;
    report(
        "11 protocol oracles",
        pass,
        &format!(
            "max |pbar-auroc| = {worst_pbar:.2e}, max |auprc-ref| = {worst_auprc:.2e}, tau fixtures = {fixtures_ok}"
        ),
    );
    assert!(pass);
}
