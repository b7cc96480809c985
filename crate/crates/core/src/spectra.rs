//! Laplacian and normalized-Laplacian eigenvalue spectra.

use nalgebra::DMatrix;

use crate::{Error, Graph, Result};

/// Tolerance for eigenvalues slightly outside their theoretical range;
/// values within it are clamped, larger violations are reported as errors.
pub const SPECTRUM_CLAMP_TOL: f64 = 1e-9;

/// Sorted eigenvalue spectra of the Laplacian `L = D - A` and the normalized
/// Laplacian `D^{-1/2} L D^{-1/2}`. For isolated nodes the normalized
/// Laplacian row and column are zero.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumPair {
    pub laplacian: Vec<f64>,
    pub normalized: Vec<f64>,
}

/// Computes both spectra with a dense symmetric eigensolver. Eigenvalues of
/// `L` are clamped into `[0, inf)` and those of the normalized Laplacian
/// into `[0, 2]`, provided they violate the range by no more than
/// [`SPECTRUM_CLAMP_TOL`].
pub fn spectra(g: &Graph) -> Result<SpectrumPair> {
    let n = g.node_count();
    if n == 0 {
        return Ok(SpectrumPair {
            laplacian: Vec::new(),
            normalized: Vec::new(),
        });
    }

    let mut lap = DMatrix::<f64>::zeros(n, n);
    let mut norm = DMatrix::<f64>::zeros(n, n);
    let inv_sqrt: Vec<f64> = (0..n)
        .map(|v| {
            let d = g.degree(v);
            if d == 0 {
                0.0
            } else {
                1.0 / (d as f64).sqrt()
            }
        })
        .collect();
    for v in 0..n {
        lap[(v, v)] = g.degree(v) as f64;
        if g.degree(v) > 0 {
            norm[(v, v)] = 1.0;
        }
        for &u in g.neighbors(v) {
            let u = u as usize;
            lap[(v, u)] = -1.0;
            norm[(v, u)] = -inv_sqrt[v] * inv_sqrt[u];
        }
    }

    let laplacian = clamped_eigenvalues(lap, 0.0, f64::INFINITY, "laplacian")?;
    let normalized = clamped_eigenvalues(norm, 0.0, 2.0, "normalized laplacian")?;
    Ok(SpectrumPair {
        laplacian,
        normalized,
    })
}

fn clamped_eigenvalues(m: DMatrix<f64>, lo: f64, hi: f64, what: &str) -> Result<Vec<f64>> {
    let mut ev: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
    for v in &mut ev {
        if *v < lo {
            if lo - *v > SPECTRUM_CLAMP_TOL {
                return Err(Error::Numerical(format!(
                    "{what} eigenvalue {v} below {lo}"
                )));
            }
            *v = lo;
        } else if *v > hi {
            if *v - hi > SPECTRUM_CLAMP_TOL {
                return Err(Error::Numerical(format!(
                    "{what} eigenvalue {v} above {hi}"
                )));
            }
            *v = hi;
        }
    }
    ev.sort_by(|a, b| a.total_cmp(b));
    Ok(ev)
}
