// Copyright 2026 The qbath Authors
// SPDX-License-Identifier: Apache-2.0

//! One-sided (Hestenes) Jacobi SVD and the nullspace built on it.
//!
//! One-sided Jacobi keeps small singular values accurate to roughly
//! `eps * |A|` in absolute terms, which is what kernel detection needs.

use num_complex::Complex64;

use super::{ComplexMatrix, ZERO};
use crate::error::{Error, Result};

/// Default relative threshold for treating a singular value as zero.
pub const DEFAULT_NULLSPACE_TOL: f64 = 1e-9;

/// Thin SVD of a square matrix: `A V = U diag(sigma)`.
#[derive(Debug, Clone)]
pub struct Svd {
    /// Singular values, descending.
    pub sigma: Vec<f64>,
    /// Right singular vectors as columns, ordered like `sigma`.
    pub v: ComplexMatrix,
}

pub fn svd(a: &ComplexMatrix) -> Result<Svd> {
    let n = a.require_square()?;
    let mut u = a.clone();
    let mut v = ComplexMatrix::identity(n);
    let max_sweeps = 100 * n.max(1);
    let eps = 1e-15;

    let mut sweep = 0;
    loop {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let mut alpha = 0.0;
                let mut beta = 0.0;
                let mut gamma = ZERO;
                for i in 0..n {
                    alpha += u[(i, p)].norm_sqr();
                    beta += u[(i, q)].norm_sqr();
                    gamma += u[(i, p)].conj() * u[(i, q)];
                }
                let g = gamma.norm();
                if g == 0.0 || g <= eps * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = (gamma / g).conj();
                let zeta = (beta - alpha) / (2.0 * g);
                let t = if zeta == 0.0 {
                    1.0
                } else {
                    zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for m in [&mut u, &mut v] {
                    for i in 0..n {
                        let xp = m[(i, p)];
                        let xq = m[(i, q)] * phase;
                        m[(i, p)] = xp * c - xq * s;
                        m[(i, q)] = xp * s + xq * c;
                    }
                }
            }
        }
        if !rotated {
            break;
        }
        sweep += 1;
        if sweep >= max_sweeps {
            return Err(Error::NoConvergence {
                algorithm: "one-sided Jacobi SVD",
                iterations: sweep,
                residual: f64::NAN,
            });
        }
    }

    let norms: Vec<f64> = (0..n)
        .map(|j| (0..n).map(|i| u[(i, j)].norm_sqr()).sum::<f64>().sqrt())
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| norms[y].total_cmp(&norms[x]));
    Ok(Svd {
        sigma: order.iter().map(|&k| norms[k]).collect(),
        v: ComplexMatrix::from_fn(n, n, |i, j| v[(i, order[j])]),
    })
}

/// Singular values of a square matrix, descending.
pub fn singular_values(a: &ComplexMatrix) -> Result<Vec<f64>> {
    Ok(svd(a)?.sigma)
}

/// Orthonormal basis of the numerical kernel of `a`.
///
/// A right singular vector belongs to the kernel when its singular value is
/// at most `tol` times the largest one.
pub fn nullspace(a: &ComplexMatrix, tol: f64) -> Result<Vec<Vec<Complex64>>> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "nullspace tolerance must be positive, got {tol}"
        )));
    }
    let Svd { sigma, v } = svd(a)?;
    let top = sigma.first().copied().unwrap_or(0.0);
    Ok(sigma
        .iter()
        .enumerate()
        .filter(|(_, &s)| s <= tol * top)
        .map(|(k, _)| v.col(k))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{inner, vec_norm};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn zero_matrix_has_full_kernel() {
        assert_eq!(nullspace(&ComplexMatrix::zeros(2, 2), 1e-9).unwrap().len(), 2);
    }

    #[test]
    fn identity_has_empty_kernel() {
        assert!(nullspace(&ComplexMatrix::identity(4), 1e-9).unwrap().is_empty());
    }

    #[test]
    fn nonpositive_tolerance_is_rejected() {
        assert!(nullspace(&ComplexMatrix::identity(2), 0.0).is_err());
        assert!(nullspace(&ComplexMatrix::identity(2), f64::NAN).is_err());
    }

    #[test]
    fn rank_one_projector_kernel_is_orthogonal_complement() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let mut u: Vec<Complex64> = (0..4)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let n = vec_norm(&u);
        u.iter_mut().for_each(|z| *z /= n);
        let proj = ComplexMatrix::from_fn(4, 4, |i, j| u[i] * u[j].conj());
        let basis = nullspace(&proj, DEFAULT_NULLSPACE_TOL).unwrap();
        assert_eq!(basis.len(), 3);
        for (i, b) in basis.iter().enumerate() {
            assert!(inner(&u, b).norm() <= 1e-12);
            assert!(vec_norm(&proj.matvec(b)) <= 1e-12);
            for (j, c) in basis.iter().enumerate() {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((inner(b, c) - want).norm() <= 1e-12);
            }
        }
    }

    #[test]
    fn singular_values_of_diagonal() {
        let m = ComplexMatrix::from_real(3, 3, &[-2.0, 0.0, 0.0, 0.0, 0.5, 0.0, 0.0, 0.0, 3.0]).unwrap();
        assert_eq!(singular_values(&m).unwrap(), vec![3.0, 2.0, 0.5]);
    }
}
