//! File formats: edge lists, dataset manifests, matrices, feature caches.
//!
//! All formats are line-oriented, tab- or whitespace-separated text. Lines
//! beginning with `#` are comments and carry provenance; the one exception
//! is the `# nodes:` directive in edge lists, which declares node tokens so
//! isolated nodes survive a round trip. Floating-point values are written
//! with the shortest representation that parses back to the identical bits.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::graph::{Graph, GraphDataset};
use crate::netemd::{DistanceMatrix, KernelMatrix};
use crate::orbits::OrbitCountTable;
use crate::spectra::SpectrumPair;
use crate::{Error, Result};

/// Writes `content` to `path` via a temporary file and rename, so failed
/// runs do not leave partial outputs behind.
pub fn write_atomic(path: &Path, content: &str) -> Result<()> {
    let tmp = path.with_extension("tmp~");
    fs::write(&tmp, content).map_err(|e| Error::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| {
        let _ = fs::remove_file(&tmp);
        Error::io(path, e)
    })
}

fn comment_block(provenance: &[String]) -> String {
    let mut out = String::new();
    for line in provenance {
        let _ = writeln!(out, "# {line}");
    }
    out
}

/// Reads an edge list: one edge per line as two whitespace-separated node
/// tokens, `#` lines ignored. Tokens may be arbitrary strings and are
/// densely re-indexed in first-appearance order. Duplicate edges and
/// self-loops are dropped. A `# nodes: tok tok ...` directive declares
/// tokens up front (isolated nodes appear only if declared this way). An
/// empty file yields the empty graph.
pub fn load_edge_list(path: &Path) -> Result<Graph> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut index_of: HashMap<String, usize> = HashMap::new();
    let intern = |token: &str, index_of: &mut HashMap<String, usize>| -> usize {
        let next = index_of.len();
        *index_of.entry(token.to_string()).or_insert(next)
    };
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            if let Some(tokens) = rest.trim_start().strip_prefix("nodes:") {
                for token in tokens.split_whitespace() {
                    intern(token, &mut index_of);
                }
            }
            continue;
        }
        let mut parts = line.split_whitespace();
        let (a, b) = match (parts.next(), parts.next(), parts.next()) {
            (Some(a), Some(b), None) => (a, b),
            _ => {
                return Err(Error::parse(
                    path,
                    lineno + 1,
                    format!("expected two node tokens, got `{line}`"),
                ))
            }
        };
        let u = intern(a, &mut index_of);
        let v = intern(b, &mut index_of);
        edges.push((u, v));
    }
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    Ok(Graph::from_edges(index_of.len(), edges).with_name(name))
}

/// Writes a graph as an edge list with node tokens `0..n-1`. Provenance
/// lines become leading comments; a `# nodes:` directive is emitted when
/// the graph has isolated nodes, so reloading preserves the node count.
pub fn write_edge_list(g: &Graph, path: &Path, provenance: &[String]) -> Result<()> {
    let mut out = comment_block(provenance);
    if (0..g.node_count()).any(|v| g.degree(v) == 0) {
        out.push_str("# nodes:");
        for v in 0..g.node_count() {
            let _ = write!(out, " {v}");
        }
        out.push('\n');
    }
    for (u, v) in g.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    write_atomic(path, &out)
}

/// Reads a dataset manifest: tab-separated rows of
/// `path [class_label [time_label]]`, `#` lines ignored. Graph paths are
/// resolved relative to the manifest's directory; every row must have the
/// same number of columns.
pub fn read_manifest(path: &Path) -> Result<GraphDataset> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let base = path.parent().unwrap_or(Path::new(""));
    let mut columns: Option<usize> = None;
    let mut graphs = Vec::new();
    let mut classes = Vec::new();
    let mut times = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim_end();
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() > 3 || fields[0].is_empty() {
            return Err(Error::parse(
                path,
                lineno + 1,
                format!("expected 1-3 tab-separated fields, got {}", fields.len()),
            ));
        }
        match columns {
            None => columns = Some(fields.len()),
            Some(c) if c != fields.len() => {
                return Err(Error::parse(
                    path,
                    lineno + 1,
                    format!("row has {} fields, earlier rows had {c}", fields.len()),
                ))
            }
            _ => {}
        }
        let graph_path: PathBuf = base.join(fields[0]);
        graphs.push(load_edge_list(&graph_path)?);
        if fields.len() >= 2 {
            classes.push(fields[1].to_string());
        }
        if fields.len() == 3 {
            let t: f64 = fields[2].parse().map_err(|_| {
                Error::parse(path, lineno + 1, format!("bad time label `{}`", fields[2]))
            })?;
            times.push(t);
        }
    }
    let ds = GraphDataset {
        graphs,
        class_labels: (!classes.is_empty()).then_some(classes),
        time_labels: (!times.is_empty()).then_some(times),
    };
    ds.validate()?;
    Ok(ds)
}

/// Writes a manifest. `rows` are `(relative path, class, time)`.
pub fn write_manifest(
    path: &Path,
    rows: &[(String, Option<String>, Option<f64>)],
    provenance: &[String],
) -> Result<()> {
    let mut out = comment_block(provenance);
    for (p, class, time) in rows {
        out.push_str(p);
        if let Some(c) = class {
            let _ = write!(out, "\t{c}");
        }
        if let Some(t) = time {
            let _ = write!(out, "\t{t}");
        }
        out.push('\n');
    }
    write_atomic(path, &out)
}

fn labelled_matrix(labels: &[String], values: &[f64], provenance: &[String]) -> String {
    let n = labels.len();
    let mut out = comment_block(provenance);
    for label in labels {
        let _ = write!(out, "\t{label}");
    }
    out.push('\n');
    for (i, label) in labels.iter().enumerate() {
        out.push_str(label);
        for j in 0..n {
            let _ = write!(out, "\t{}", values[i * n + j]);
        }
        out.push('\n');
    }
    out
}

/// Writes a distance matrix with a label header row and column. The
/// `feature_set` travels in a comment directive, and values round-trip
/// exactly through [`read_distance_matrix`].
pub fn write_distance_matrix(
    dm: &DistanceMatrix,
    path: &Path,
    provenance: &[String],
) -> Result<()> {
    let mut lines = provenance.to_vec();
    lines.push(format!("feature_set: {}", dm.feature_set()));
    write_atomic(path, &labelled_matrix(dm.labels(), dm.values(), &lines))
}

pub fn read_distance_matrix(path: &Path) -> Result<DistanceMatrix> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut feature_set = String::from("unknown");
    let mut labels: Option<Vec<String>> = None;
    let mut values: Vec<f64> = Vec::new();
    let mut rows = 0usize;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim_end();
        if line.trim().is_empty() {
            continue;
        }
        if let Some(rest) = line.trim_start().strip_prefix('#') {
            if let Some(fs) = rest.trim().strip_prefix("feature_set:") {
                feature_set = fs.trim().to_string();
            }
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        match &labels {
            None => {
                if !fields[0].is_empty() {
                    return Err(Error::parse(path, lineno + 1, "missing header row"));
                }
                labels = Some(fields[1..].iter().map(|s| s.to_string()).collect());
            }
            Some(l) => {
                if fields.len() != l.len() + 1 {
                    return Err(Error::parse(
                        path,
                        lineno + 1,
                        format!("expected {} cells, got {}", l.len() + 1, fields.len()),
                    ));
                }
                for cell in &fields[1..] {
                    let v: f64 = cell.parse().map_err(|_| {
                        Error::parse(path, lineno + 1, format!("bad value `{cell}`"))
                    })?;
                    values.push(v);
                }
                rows += 1;
            }
        }
    }
    let labels = labels.ok_or_else(|| Error::parse(path, 1, "empty matrix file"))?;
    if rows != labels.len() {
        return Err(Error::parse(
            path,
            1,
            format!("{rows} rows for {} labels", labels.len()),
        ));
    }
    DistanceMatrix::from_values(labels, feature_set, values)
}

/// Writes a kernel matrix; `alpha` and the smallest eigenvalue travel as
/// comment directives.
pub fn write_kernel_matrix(km: &KernelMatrix, path: &Path, provenance: &[String]) -> Result<()> {
    let mut lines = provenance.to_vec();
    lines.push(format!("alpha: {}", km.alpha()));
    lines.push(format!("min_eigenvalue: {}", km.min_eigenvalue()));
    lines.push(format!("psd: {}", km.is_psd()));
    write_atomic(path, &labelled_matrix(km.labels(), km.values(), &lines))
}

/// Writes a per-node count table: a header row of column ids, then one row
/// of counts per node.
pub fn write_count_table(
    table: &OrbitCountTable,
    path: &Path,
    provenance: &[String],
) -> Result<()> {
    let mut out = comment_block(provenance);
    let header: Vec<String> = (0..table.column_count()).map(|c| c.to_string()).collect();
    out.push_str(&header.join("\t"));
    out.push('\n');
    for v in 0..table.node_count() {
        let row: Vec<String> = table.row(v).iter().map(|c| c.to_string()).collect();
        out.push_str(&row.join("\t"));
        out.push('\n');
    }
    write_atomic(path, &out)
}

pub fn read_count_table(path: &Path, max_graphlet_size: usize) -> Result<OrbitCountTable> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut rows: Vec<Vec<u64>> = Vec::new();
    let mut header_seen = false;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if !header_seen {
            header_seen = true;
            continue;
        }
        let row: Vec<u64> = line
            .split('\t')
            .map(|c| {
                c.parse()
                    .map_err(|_| Error::parse(path, lineno + 1, format!("bad count `{c}`")))
            })
            .collect::<Result<_>>()?;
        rows.push(row);
    }
    OrbitCountTable::from_rows(max_graphlet_size, rows)
}

/// Writes the two spectra as one sorted list per operator (two columns).
pub fn write_spectra(sp: &SpectrumPair, path: &Path, provenance: &[String]) -> Result<()> {
    let mut out = comment_block(provenance);
    out.push_str("laplacian\tnormalized\n");
    for (l, n) in sp.laplacian.iter().zip(&sp.normalized) {
        let _ = writeln!(out, "{l}\t{n}");
    }
    write_atomic(path, &out)
}

pub fn read_spectra(path: &Path) -> Result<SpectrumPair> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut laplacian = Vec::new();
    let mut normalized = Vec::new();
    let mut header_seen = false;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if !header_seen {
            header_seen = true;
            continue;
        }
        let mut parts = line.split('\t');
        let parse = |cell: Option<&str>| -> Result<f64> {
            cell.and_then(|c| c.parse().ok())
                .ok_or_else(|| Error::parse(path, lineno + 1, "bad spectrum row"))
        };
        laplacian.push(parse(parts.next())?);
        normalized.push(parse(parts.next())?);
    }
    Ok(SpectrumPair {
        laplacian,
        normalized,
    })
}
