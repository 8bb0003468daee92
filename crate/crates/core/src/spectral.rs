//! Eigenvalues of covariance matrices and their place in the simplex family.
//!
//! The eigenvalues of a Bernoulli covariance matrix lie in
//! `{λ ≥ 0, Σλ ≤ k/4}`; for the Trinomial the bound is `k`. The origin is the
//! minimum-entropy point and, for undirected graphs, `(1/4, ..., 1/4)` is the
//! maximum-entropy point.

use serde::{Deserialize, Serialize};

use crate::edgedist::Family;
use crate::graph::nodes_for_pairs;
use crate::matrix::SquareMatrix;
use crate::measures::approx_arc_variance;
use crate::{Error, Result};

pub const SYMMETRY_TOLERANCE: f64 = 1e-10;
pub const OFF_DIAGONAL_TOLERANCE: f64 = 1e-12;
pub const MAX_SWEEPS: usize = 100;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralSummary {
    pub k: usize,
    /// Descending.
    pub eigenvalues: Vec<f64>,
    pub trace: f64,
    pub family_bound: f64,
    pub simplex_coordinate: f64,
}

impl SpectralSummary {
    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimplexPosition {
    pub coordinate: f64,
    pub distance_to_origin: f64,
    pub distance_to_maxent: f64,
}

pub fn family_bound(family: Family, k: usize) -> f64 {
    match family {
        Family::Bernoulli => k as f64 / 4.0,
        Family::Trinomial => k as f64,
    }
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations.
pub fn eigenvalues_symmetric(sigma: &SquareMatrix, family: Family) -> Result<SpectralSummary> {
    let eigenvalues = symmetric_eigenvalues(sigma)?;
    let k = sigma.dim();
    Ok(SpectralSummary {
        k,
        simplex_coordinate: eigenvalues.iter().sum(),
        eigenvalues,
        trace: sigma.trace(),
        family_bound: family_bound(family, k),
    })
}

/// Descending eigenvalues only.
pub fn symmetric_eigenvalues(a: &SquareMatrix) -> Result<Vec<f64>> {
    Ok(jacobi(a, false)?.values)
}

/// Distances of the eigenvalue vector from the origin and from the
/// family's maximum-entropy point. For the Trinomial the point is the
/// approximate uniform-DAG arc variance on every axis.
pub fn simplex_position(s: &SpectralSummary, family: Family) -> SimplexPosition {
    let c = match family {
        Family::Bernoulli => 0.25,
        Family::Trinomial => nodes_for_pairs(s.k).map(approx_arc_variance).unwrap_or(0.5),
    };
    simplex_position_from(s, &vec![c; s.k])
}

/// Like [`simplex_position`] with an explicit reference eigenvalue vector,
/// compared after sorting both in descending order.
pub fn simplex_position_from(s: &SpectralSummary, reference: &[f64]) -> SimplexPosition {
    let mut r = reference.to_vec();
    r.sort_by(|a, b| b.total_cmp(a));
    let dist = |other: &mut dyn Iterator<Item = f64>| -> f64 {
        s.eigenvalues.iter().zip(other).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt()
    };
    SimplexPosition {
        coordinate: s.eigenvalues.iter().sum(),
        distance_to_origin: dist(&mut std::iter::repeat(0.0)),
        distance_to_maxent: dist(&mut r.into_iter()),
    }
}

/// Descending eigenvalues and matching orthonormal eigenvectors (columns).
pub fn eigen_decomposition(a: &SquareMatrix) -> Result<(Vec<f64>, SquareMatrix)> {
    let e = jacobi(a, true)?;
    Ok((e.values, e.vectors.expect("requested")))
}

pub(crate) struct Eigen {
    pub values: Vec<f64>,
    /// Eigenvectors as columns, in the same order as `values`.
    pub vectors: Option<SquareMatrix>,
    #[allow(dead_code)]
    pub sweeps: usize,
}

pub(crate) fn jacobi(input: &SquareMatrix, want_vectors: bool) -> Result<Eigen> {
    let asym = input.max_asymmetry();
    if !(asym <= SYMMETRY_TOLERANCE) {
        return Err(Error::NotSymmetric(asym));
    }
    let k = input.dim();
    let mut a = input.clone();
    for i in 0..k {
        for j in (i + 1)..k {
            let m = 0.5 * (a[(i, j)] + a[(j, i)]);
            a[(i, j)] = m;
            a[(j, i)] = m;
        }
    }
    let mut v = want_vectors.then(|| SquareMatrix::identity(k));

    let mut sweeps = 0;
    while sweeps < MAX_SWEEPS {
        let off: f64 = (0..k).flat_map(|i| ((i + 1)..k).map(move |j| (i, j))).map(|(i, j)| a[(i, j)].powi(2)).sum();
        if (2.0 * off).sqrt() <= OFF_DIAGONAL_TOLERANCE {
            break;
        }
        sweeps += 1;
        for p in 0..k {
            for q in (p + 1)..k {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for r in 0..k {
                    let (arp, arq) = (a[(r, p)], a[(r, q)]);
                    a[(r, p)] = c * arp - s * arq;
                    a[(r, q)] = s * arp + c * arq;
                }
                for r in 0..k {
                    let (apr, aqr) = (a[(p, r)], a[(q, r)]);
                    a[(p, r)] = c * apr - s * aqr;
                    a[(q, r)] = s * apr + c * aqr;
                }
                a[(p, q)] = 0.0;
                a[(q, p)] = 0.0;
                if let Some(v) = v.as_mut() {
                    for r in 0..k {
                        let (vrp, vrq) = (v[(r, p)], v[(r, q)]);
                        v[(r, p)] = c * vrp - s * vrq;
                        v[(r, q)] = s * vrp + c * vrq;
                    }
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..k).collect();
    // Stable: ties keep their original position.
    order.sort_by(|&i, &j| a[(j, j)].total_cmp(&a[(i, i)]));
    let values = order.iter().map(|&i| a[(i, i)]).collect();
    let vectors = v.map(|v| {
        let mut sorted = SquareMatrix::zeros(k);
        for (col, &src) in order.iter().enumerate() {
            for r in 0..k {
                sorted[(r, col)] = v[(r, src)];
            }
        }
        sorted
    });
    Ok(Eigen { values, vectors, sweeps })
}
