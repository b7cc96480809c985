//! Command-line front end: graph generation, feature extraction, distance
//! and kernel matrices, and the evaluation protocols, wired into
//! reproducible runs. Every output file carries a provenance header (tool
//! version, config hash, seed) and identical configurations produce
//! byte-identical outputs regardless of thread count.

use std::collections::HashSet;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use netemd_core::features::{extract, sample_nodes};
use netemd_core::generators::{gen_suite, GridCell, Model};
use netemd_core::netemd::{
    alpha_grid, distance_matrix_from_features, gaussian_kernel, DistanceMatrix,
};
use netemd_core::orbits::{ego_graphlet_counts, orbit_counts};
use netemd_core::spectra::spectra;
use netemd_core::{
    eval, features, fnv1a, io, mix_seed, EmpiricalDistribution, Error, FeatureSet, FeatureSpec,
    Graph, GraphDataset,
};

#[derive(Parser, Debug)]
#[command(name = "netemd", version, about = "Network comparison via distributional distances")]
struct Cli {
    /// Worker threads (defaults to available parallelism). Results do not
    /// depend on this setting.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a dataset of random graphs from a model grid file.
    Generate(GenerateArgs),
    /// Compute and cache per-graph features for a dataset.
    Features(FeaturesArgs),
    /// Compute the pairwise distance matrix of a dataset.
    Distance(DistanceArgs),
    /// Turn a distance matrix into Gaussian kernel matrices.
    Kernel(KernelArgs),
    /// Class-separation score of a distance matrix.
    EvalPbar(EvalArgs),
    /// Area under the precision-recall curve of a distance matrix.
    EvalAuprc(EvalArgs),
    /// Recover the time ordering of a dataset from its distance matrix.
    EvalTimeorder(EvalArgs),
    /// Leave-one-out k-nearest-neighbour accuracy.
    EvalKnn(EvalKnnArgs),
}

#[derive(Args, Debug)]
struct GenerateArgs {
    /// Grid file: whitespace-separated rows `model n k_avg [reps [seed_base]]`.
    #[arg(long)]
    grid: PathBuf,
    /// Repetitions per grid row without an explicit count.
    #[arg(long, default_value_t = 1)]
    reps: usize,
    /// Base seed for rows without an explicit seed base.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output directory (created if missing); receives edge lists and a manifest.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct FeaturesArgs {
    /// Dataset manifest.
    #[arg(long)]
    manifest: PathBuf,
    /// Feature set: dd, g3, g4, g5, e4 or s.
    #[arg(long)]
    features: String,
    /// Cache directory for per-graph feature files (created if missing).
    #[arg(long)]
    cache: PathBuf,
}

#[derive(Args, Debug)]
struct DistanceArgs {
    #[arg(long)]
    manifest: PathBuf,
    /// Feature set: dd, g3, g4, g5, e4 or s.
    #[arg(long)]
    features: String,
    /// Node sub-sampling fraction in (0, 1].
    #[arg(long, default_value_t = 1.0)]
    sample_fraction: f64,
    /// Seed for sub-sampling.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Optional feature cache directory (reused and filled).
    #[arg(long)]
    cache: Option<PathBuf>,
    /// Output distance matrix file.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct KernelArgs {
    /// Input distance matrix.
    #[arg(long)]
    distances: PathBuf,
    /// Single kernel width.
    #[arg(long, conflicts_with = "alpha_grid")]
    alpha: Option<f64>,
    /// Log-spaced sweep `LO:HI:COUNT`; emits one kernel file per alpha.
    #[arg(long)]
    alpha_grid: Option<String>,
    /// Output file (single alpha) or prefix (sweep).
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct EvalArgs {
    /// Distance matrix file.
    #[arg(long)]
    distances: PathBuf,
    /// Manifest supplying class or time labels.
    #[arg(long)]
    manifest: PathBuf,
    /// Optional machine-readable score file (metric, feature_set, dataset, value).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct EvalKnnArgs {
    #[command(flatten)]
    common: EvalArgs,
    /// Neighbour count.
    #[arg(long, default_value_t = 1)]
    k: usize,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap help/version output is a success, bad usage is exit 1
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
        {
            eprintln!("netemd: thread pool: {e}");
            return ExitCode::from(1);
        }
    }
    let config_hash = fnv1a(format!("{:?}", cli.command).as_bytes());
    match run(cli.command, config_hash) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("netemd: {e}");
            let code = match e {
                Error::Calibration(_) | Error::Numerical(_) => 3,
                _ => 2,
            };
            ExitCode::from(code)
        }
    }
}

fn provenance(config_hash: u64, seed: u64) -> Vec<String> {
    vec![
        format!("tool: netemd {}", env!("CARGO_PKG_VERSION")),
        format!("config: {config_hash:016x}"),
        format!("seed: {seed}"),
    ]
}

fn run(command: Command, config_hash: u64) -> Result<(), Error> {
    match command {
        Command::Generate(args) => generate(args, config_hash),
        Command::Features(args) => features_cmd(args, config_hash),
        Command::Distance(args) => distance(args, config_hash),
        Command::Kernel(args) => kernel(args, config_hash),
        Command::EvalPbar(args) => eval_scores(args, config_hash, Metric::Pbar),
        Command::EvalAuprc(args) => eval_scores(args, config_hash, Metric::Auprc),
        Command::EvalTimeorder(args) => eval_timeorder(args, config_hash),
        Command::EvalKnn(args) => eval_knn(args, config_hash),
    }
}

fn read_grid(path: &Path) -> Result<Vec<GridCell>, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io { path: path.into(), source: e })?;
    let mut cells = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if !(3..=5).contains(&fields.len()) {
            return Err(Error::Parse {
                path: path.into(),
                line: lineno + 1,
                message: format!("expected `model n k_avg [reps [seed]]`, got `{line}`"),
            });
        }
        let bad = |what: &str| Error::Parse {
            path: path.into(),
            line: lineno + 1,
            message: format!("bad {what} `{line}`"),
        };
        cells.push(GridCell {
            model: fields[0].parse::<Model>()?,
            n: fields[1].parse().map_err(|_| bad("node count"))?,
            k_avg: fields[2].parse().map_err(|_| bad("average degree"))?,
            reps: match fields.get(3) {
                Some(f) => Some(f.parse().map_err(|_| bad("rep count"))?),
                None => None,
            },
            seed_base: match fields.get(4) {
                Some(f) => Some(f.parse().map_err(|_| bad("seed"))?),
                None => None,
            },
        });
    }
    if cells.is_empty() {
        return Err(Error::Parameter(format!("{}: empty grid", path.display())));
    }
    Ok(cells)
}

/// Removes files created by a failed multi-file command.
fn cleanup(paths: &[PathBuf]) {
    for p in paths {
        let _ = std::fs::remove_file(p);
    }
}

fn generate(args: GenerateArgs, config_hash: u64) -> Result<(), Error> {
    let cells = read_grid(&args.grid)?;
    let ds = gen_suite(&cells, args.reps, args.seed)?;
    std::fs::create_dir_all(&args.out)
        .map_err(|e| Error::Io { path: args.out.clone(), source: e })?;
    let prov = provenance(config_hash, args.seed);
    let mut written: Vec<PathBuf> = Vec::new();
    let mut rows = Vec::new();
    let result = (|| {
        for (graph, class) in ds.graphs.iter().zip(ds.class_labels.as_ref().unwrap()) {
            let file = format!("{}.edges", graph.name());
            let path = args.out.join(&file);
            io::write_edge_list(graph, &path, &prov)?;
            written.push(path);
            rows.push((file, Some(class.clone()), None));
        }
        let manifest = args.out.join("manifest.tsv");
        io::write_manifest(&manifest, &rows, &prov)?;
        written.push(manifest);
        Ok(())
    })();
    if result.is_err() {
        cleanup(&written);
        return result;
    }
    println!(
        "generated {} graphs into {} (manifest.tsv)",
        ds.len(),
        args.out.display()
    );
    Ok(())
}

/// The cacheable part of a feature set: integer count tables for node-local
/// features, the two spectra for the spectral set.
enum FeatureBase {
    Counts(netemd_core::OrbitCountTable),
    Spectra(netemd_core::SpectrumPair),
}

fn compute_base(g: &Graph, set: FeatureSet) -> Result<FeatureBase, Error> {
    Ok(match set {
        FeatureSet::Dd => {
            let degrees: Vec<Vec<u64>> = g
                .degree_sequence()
                .iter()
                .map(|&d| vec![d as u64])
                .collect();
            FeatureBase::Counts(netemd_core::OrbitCountTable::from_rows(2, degrees)?)
        }
        FeatureSet::G3 => FeatureBase::Counts(orbit_counts(g, 3)?),
        FeatureSet::G4 => FeatureBase::Counts(orbit_counts(g, 4)?),
        FeatureSet::G5 => FeatureBase::Counts(orbit_counts(g, 5)?),
        FeatureSet::E4 => FeatureBase::Counts(ego_graphlet_counts(g, 1, 4)?),
        FeatureSet::Spectral => FeatureBase::Spectra(spectra(g)?),
    })
}

fn cache_path(dir: &Path, g: &Graph, set: FeatureSet) -> PathBuf {
    dir.join(format!("{:016x}-{}.tsv", g.content_hash(), set.name()))
}

fn max_size_of(set: FeatureSet) -> usize {
    match set {
        FeatureSet::Dd => 2,
        FeatureSet::G3 => 3,
        FeatureSet::G4 | FeatureSet::E4 => 4,
        FeatureSet::G5 => 5,
        FeatureSet::Spectral => 2,
    }
}

fn load_or_compute_base(
    g: &Graph,
    set: FeatureSet,
    cache: &Path,
    prov: &[String],
) -> Result<FeatureBase, Error> {
    let path = cache_path(cache, g, set);
    if path.exists() {
        return Ok(match set {
            FeatureSet::Spectral => FeatureBase::Spectra(io::read_spectra(&path)?),
            _ => FeatureBase::Counts(io::read_count_table(&path, max_size_of(set))?),
        });
    }
    let base = compute_base(g, set)?;
    match &base {
        FeatureBase::Counts(t) => io::write_count_table(t, &path, prov)?,
        FeatureBase::Spectra(sp) => io::write_spectra(sp, &path, prov)?,
    }
    Ok(base)
}

fn distributions_of(
    base: &FeatureBase,
    node_count: usize,
    sample_fraction: f64,
    seed: u64,
) -> Result<Vec<EmpiricalDistribution>, Error> {
    match base {
        FeatureBase::Counts(table) => {
            let sample_vec;
            let sample = if sample_fraction < 1.0 {
                sample_vec = sample_nodes(node_count, sample_fraction, seed);
                Some(&sample_vec[..])
            } else {
                None
            };
            features::distributions_from_table(table, sample)
        }
        FeatureBase::Spectra(sp) => features::distributions_from_spectra(sp),
    }
}

fn features_cmd(args: FeaturesArgs, config_hash: u64) -> Result<(), Error> {
    let set: FeatureSet = args.features.parse()?;
    let ds = io::read_manifest(&args.manifest)?;
    std::fs::create_dir_all(&args.cache)
        .map_err(|e| Error::Io { path: args.cache.clone(), source: e })?;
    let prov = provenance(config_hash, 0);
    for g in &ds.graphs {
        load_or_compute_base(g, set, &args.cache, &prov)?;
    }
    println!(
        "cached {} feature files ({set}) in {}",
        ds.len(),
        args.cache.display()
    );
    Ok(())
}

fn distance(args: DistanceArgs, config_hash: u64) -> Result<(), Error> {
    let set: FeatureSet = args.features.parse()?;
    let spec = FeatureSpec::new(set).with_sample_fraction(args.sample_fraction);
    spec.validate()?;
    let ds = io::read_manifest(&args.manifest)?;
    if ds.is_empty() {
        return Err(Error::Parameter("empty dataset".into()));
    }
    let names = ds.names();
    {
        let mut seen = HashSet::new();
        if let Some(dup) = names.iter().find(|n| !seen.insert(n.as_str())) {
            return Err(Error::Parameter(format!("duplicate graph name `{dup}`")));
        }
    }
    let prov = provenance(config_hash, args.seed);
    let features: Vec<Vec<EmpiricalDistribution>> = match &args.cache {
        Some(cache) => {
            std::fs::create_dir_all(cache)
                .map_err(|e| Error::Io { path: cache.clone(), source: e })?;
            ds.graphs
                .iter()
                .enumerate()
                .map(|(i, g)| {
                    let base = load_or_compute_base(g, set, cache, &prov)?;
                    distributions_of(
                        &base,
                        g.node_count(),
                        args.sample_fraction,
                        mix_seed(args.seed, i as u64),
                    )
                })
                .collect::<Result<_, _>>()?
        }
        None => {
            use rayon::prelude::*;
            ds.graphs
                .par_iter()
                .enumerate()
                .map(|(i, g)| extract(g, &spec, mix_seed(args.seed, i as u64)))
                .collect::<Result<_, _>>()?
        }
    };
    let dm = distance_matrix_from_features(&features, names, set.name())?;
    io::write_distance_matrix(&dm, &args.out, &prov)?;
    println!(
        "wrote {}x{} {} distance matrix to {}",
        dm.n(),
        dm.n(),
        set.name(),
        args.out.display()
    );
    Ok(())
}

fn kernel(args: KernelArgs, config_hash: u64) -> Result<(), Error> {
    let dm = io::read_distance_matrix(&args.distances)?;
    let prov = provenance(config_hash, 0);
    let alphas: Vec<f64> = match (&args.alpha, &args.alpha_grid) {
        (Some(a), None) => vec![*a],
        (None, Some(grid)) => {
            let parts: Vec<&str> = grid.split(':').collect();
            let bad = || Error::Parameter(format!("bad alpha grid `{grid}`, want LO:HI:COUNT"));
            if parts.len() != 3 {
                return Err(bad());
            }
            let lo: f64 = parts[0].parse().map_err(|_| bad())?;
            let hi: f64 = parts[1].parse().map_err(|_| bad())?;
            let count: usize = parts[2].parse().map_err(|_| bad())?;
            alpha_grid(lo, hi, count)?
        }
        _ => return Err(Error::Parameter("pass exactly one of --alpha, --alpha-grid".into())),
    };
    let sweep = alphas.len() > 1;
    for alpha in alphas {
        let km = gaussian_kernel(&dm, alpha)?;
        let path = if sweep {
            let stem = args.out.to_string_lossy();
            PathBuf::from(format!("{stem}-a{alpha:.6e}.tsv"))
        } else {
            args.out.clone()
        };
        io::write_kernel_matrix(&km, &path, &prov)?;
        println!(
            "wrote kernel (alpha {alpha:.6e}, psd {}) to {}",
            km.is_psd(),
            path.display()
        );
    }
    Ok(())
}

enum Metric {
    Pbar,
    Auprc,
}

fn read_labelled(args: &EvalArgs) -> Result<(DistanceMatrix, GraphDataset), Error> {
    let dm = io::read_distance_matrix(&args.distances)?;
    let ds = io::read_manifest(&args.manifest)?;
    if ds.len() != dm.n() {
        return Err(Error::Parameter(format!(
            "distance matrix has {} graphs, manifest has {}",
            dm.n(),
            ds.len()
        )));
    }
    Ok((dm, ds))
}

fn dataset_name(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "dataset".into())
}

fn write_scores(
    out: &Option<PathBuf>,
    config_hash: u64,
    rows: &[(String, String, String, f64)],
) -> Result<(), Error> {
    if let Some(path) = out {
        let mut text = String::new();
        for line in provenance(config_hash, 0) {
            text.push_str(&format!("# {line}\n"));
        }
        text.push_str("# metric\tfeature_set\tdataset\tvalue\n");
        for (metric, fs, ds, value) in rows {
            text.push_str(&format!("{metric}\t{fs}\t{ds}\t{value}\n"));
        }
        io::write_atomic(path, &text)?;
    }
    Ok(())
}

fn eval_scores(args: EvalArgs, config_hash: u64, metric: Metric) -> Result<(), Error> {
    let (dm, ds) = read_labelled(&args)?;
    let classes = ds
        .class_labels
        .as_ref()
        .ok_or_else(|| Error::Parameter("manifest has no class labels".into()))?;
    let dataset = dataset_name(&args.manifest);
    let (name, value) = match metric {
        Metric::Pbar => {
            let score = eval::pbar(&dm, classes)?;
            for g in &score.excluded {
                eprintln!(
                    "warning: graph `{}` excluded (only member of its class)",
                    dm.labels()[*g]
                );
            }
            ("pbar", score.value)
        }
        Metric::Auprc => ("auprc", eval::auprc(&dm, classes)?),
    };
    println!("{name}\t{}\t{dataset}\t{value:.6}", dm.feature_set());
    write_scores(
        &args.out,
        config_hash,
        &[(name.into(), dm.feature_set().into(), dataset, value)],
    )
}

fn eval_timeorder(args: EvalArgs, config_hash: u64) -> Result<(), Error> {
    let (dm, ds) = read_labelled(&args)?;
    let times = ds
        .time_labels
        .as_ref()
        .ok_or_else(|| Error::Parameter("manifest has no time labels".into()))?;
    let mut order: Vec<usize> = (0..dm.n()).collect();
    order.sort_by(|&a, &b| times[a].total_cmp(&times[b]).then(a.cmp(&b)));
    let result = eval::time_rankings(&dm, &order)?;
    let dataset = dataset_name(&args.manifest);
    let methods = ["first/chain", "first/mean", "last/chain", "last/mean"];
    let mut rows = Vec::new();
    for (method, tau) in methods.iter().zip(result.taus) {
        println!("tau[{method}]\t{}\t{dataset}\t{tau:.6}", dm.feature_set());
        rows.push((
            format!("tau-{}", method.replace('/', "-")),
            dm.feature_set().to_string(),
            dataset.clone(),
            tau,
        ));
    }
    println!("tau[best]\t{}\t{dataset}\t{:.6}", dm.feature_set(), result.best_tau);
    rows.push((
        "tau-best".into(),
        dm.feature_set().into(),
        dataset,
        result.best_tau,
    ));
    write_scores(&args.out, config_hash, &rows)
}

fn eval_knn(args: EvalKnnArgs, config_hash: u64) -> Result<(), Error> {
    let (dm, ds) = read_labelled(&args.common)?;
    let classes = ds
        .class_labels
        .as_ref()
        .ok_or_else(|| Error::Parameter("manifest has no class labels".into()))?;
    let accuracy = eval::knn_accuracy(&dm, classes, args.k)?;
    let dataset = dataset_name(&args.common.manifest);
    println!("knn{}\t{}\t{dataset}\t{accuracy:.6}", args.k, dm.feature_set());
    write_scores(
        &args.common.out,
        config_hash,
        &[(
            format!("knn{}", args.k),
            dm.feature_set().into(),
            dataset,
            accuracy,
        )],
    )
}
