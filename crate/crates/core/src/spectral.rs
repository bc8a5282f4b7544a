//! Laplacian spectrum and the two-sided bound
//! `λ/2 <= i(G) <= sqrt(λ(2Δ - λ))`, with `λ` the second smallest
//! Laplacian eigenvalue.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{domain, IsoError, Result};
use crate::graph::Graph;

pub const DEFAULT_EIGEN_TOL: f64 = 1e-9;

/// Dense eigensolves are limited to this many vertices.
pub const MAX_DENSE_N: usize = 4096;

/// L = D - A.
pub fn laplacian(g: &Graph) -> DMatrix<f64> {
    let n = g.n();
    let mut l = DMatrix::zeros(n, n);
    for u in 0..n {
        l[(u, u)] = g.degree(u) as f64;
        for &v in g.neighbors(u) {
            l[(u, v as usize)] = -1.0;
        }
    }
    l
}

#[derive(Debug, Clone)]
pub struct Eigenpair {
    pub value: f64,
    pub vector: DVector<f64>,
}

/// Second smallest Laplacian eigenvalue with its eigenvector.
pub fn lambda2_pair(g: &Graph, tol: f64) -> Result<Eigenpair> {
    if g.n() < 2 {
        return Err(domain("λ2 needs n >= 2"));
    }
    if g.n() > MAX_DENSE_N {
        return Err(IsoError::Resource(format!(
            "dense eigensolve limited to n <= {MAX_DENSE_N}, got {}",
            g.n()
        )));
    }
    if !(tol > 0.0) {
        return Err(domain(format!("eigenvalue tolerance must be positive, got {tol}")));
    }
    let eig = SymmetricEigen::try_new(laplacian(g), f64::EPSILON, 0)
        .ok_or_else(|| IsoError::Invariant("symmetric eigensolver did not converge".into()))?;
    let mut order: Vec<usize> = (0..g.n()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let idx = order[1];
    let mut value = eig.eigenvalues[idx];
    // L is positive semidefinite; anything below zero is rounding
    if value < 0.0 {
        if value < -tol {
            return Err(IsoError::Invariant(format!("negative Laplacian eigenvalue {value}")));
        }
        value = 0.0;
    }
    Ok(Eigenpair { value, vector: eig.eigenvectors.column(idx).into_owned() })
}

pub fn lambda2(g: &Graph, tol: f64) -> Result<f64> {
    lambda2_pair(g, tol).map(|p| p.value)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralReport {
    pub lambda2: f64,
    pub lower: f64,
    pub upper: f64,
    pub tol: f64,
}

impl SpectralReport {
    /// Whether `value` lies in `[lower - slack, upper + slack]`.
    pub fn sandwiches(&self, value: f64, slack: f64) -> bool {
        self.lower - slack <= value && value <= self.upper + slack
    }
}

pub fn spectral_bounds(g: &Graph) -> Result<SpectralReport> {
    spectral_bounds_with_tol(g, DEFAULT_EIGEN_TOL)
}

pub fn spectral_bounds_with_tol(g: &Graph, tol: f64) -> Result<SpectralReport> {
    let lambda = lambda2(g, tol)?;
    let max_deg = g.max_degree() as f64;
    // λ2 <= 2Δ up to noise
    let radicand = (lambda * (2.0 * max_deg - lambda)).max(0.0);
    Ok(SpectralReport { lambda2: lambda, lower: lambda / 2.0, upper: radicand.sqrt(), tol })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn laplacian_examples() {
        let l = laplacian(&Graph::complete(2));
        assert_eq!(l, DMatrix::from_row_slice(2, 2, &[1.0, -1.0, -1.0, 1.0]));
        assert_eq!(laplacian(&Graph::empty(3)), DMatrix::zeros(3, 3));
        let p = laplacian(&Graph::path(3));
        let expected =
            DMatrix::from_row_slice(3, 3, &[1.0, -1.0, 0.0, -1.0, 2.0, -1.0, 0.0, -1.0, 1.0]);
        assert_eq!(p, expected);
        for r in 0..3 {
            assert_eq!(p.row(r).sum(), 0.0);
        }
    }

    #[test]
    fn known_spectra() {
        for n in 2..=12 {
            assert!(close(lambda2(&Graph::complete(n), 1e-9).unwrap(), n as f64, 1e-9));
        }
        assert!(close(lambda2(&Graph::cycle(4), 1e-9).unwrap(), 2.0, 1e-9));
        let split = Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        assert!(close(lambda2(&split, 1e-9).unwrap(), 0.0, 1e-9));
        assert!(lambda2(&Graph::empty(1), 1e-9).is_err());
    }

    #[test]
    fn residual_is_small() {
        for seed in 0..10 {
            let g = crate::process::sample_gnp(15, 0.4, seed).unwrap();
            let pair = lambda2_pair(&g, 1e-9).unwrap();
            let r = laplacian(&g) * &pair.vector - &pair.vector * pair.value;
            assert!(r.amax() <= 1e-7 * pair.value.max(1.0));
        }
    }

    #[test]
    fn bound_examples() {
        let k4 = spectral_bounds(&Graph::complete(4)).unwrap();
        assert!(close(k4.lower, 2.0, 1e-7));
        assert!(close(k4.upper, 8f64.sqrt(), 1e-7));
        assert!(k4.sandwiches(2.0, 1e-7));

        let c4 = spectral_bounds(&Graph::cycle(4)).unwrap();
        assert!(close(c4.lower, 1.0, 1e-7));
        assert!(close(c4.upper, 2.0, 1e-7));

        let split = spectral_bounds(&Graph::from_edges(6, [(0, 1), (1, 2), (3, 4)]).unwrap()).unwrap();
        assert!(close(split.lower, 0.0, 1e-7) && close(split.upper, 0.0, 1e-7));
    }
}
