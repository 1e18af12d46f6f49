// Copyright 2026 The qbath Authors
// SPDX-License-Identifier: Apache-2.0

//! Two-qubit concurrence.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lindblad::{DensityMatrix, DIM};
use crate::linalg::{hermitian_eig, singular_values, ComplexMatrix};

const PSD_TOL: f64 = 1e-10;
/// Largest off-block entry accepted by [`concurrence_block`].
pub const BLOCK_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConcurrenceResult {
    pub value: f64,
    /// Wootters λ's in descending order.
    pub lambdas: [f64; 4],
}

/// `σy ⊗ σy`, with `σy = [[0, -i], [i, 0]]`.
pub fn spin_flip() -> ComplexMatrix {
    ComplexMatrix::from_real(
        DIM,
        DIM,
        &[
            0.0, 0.0, 0.0, -1.0, //
            0.0, 0.0, 1.0, 0.0, //
            0.0, 1.0, 0.0, 0.0, //
            -1.0, 0.0, 0.0, 0.0,
        ],
    )
    .expect("4x4")
}

/// Wootters concurrence `max{0, λ1 - λ2 - λ3 - λ4}`.
///
/// The λ's, square roots of the spectrum of `ρ (σy⊗σy) ρ* (σy⊗σy)`, are taken
/// as the singular values of `Wᵀ (σy⊗σy) W` for `ρ = W W†`, which stays
/// accurate for rank-deficient states.
pub fn concurrence(rho: &DensityMatrix) -> Result<ConcurrenceResult> {
    let m = rho.matrix();
    let eig = hermitian_eig(m)?;
    if eig.values[0] < -PSD_TOL {
        return Err(Error::InvalidState(format!(
            "not positive semidefinite (smallest eigenvalue {:e})",
            eig.values[0]
        )));
    }
    let roots: Vec<f64> = eig.values.iter().map(|p| p.max(0.0).sqrt()).collect();
    let w = ComplexMatrix::from_fn(DIM, DIM, |i, j| eig.vectors[(i, j)] * roots[j]);
    let sigma = singular_values(&w.transpose().matmul(&spin_flip()).matmul(&w))?;
    let lambdas = [sigma[0], sigma[1], sigma[2], sigma[3]];
    let value = (lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).clamp(0.0, 1.0);
    Ok(ConcurrenceResult { value, lambdas })
}

/// True when every entry outside the diagonal and the `ρ₂₃` pair is at most `tol`.
pub fn is_block_form(m: &ComplexMatrix, tol: f64) -> bool {
    (0..DIM).all(|i| {
        (0..DIM).all(|j| {
            i == j || (i, j) == (1, 2) || (i, j) == (2, 1) || m[(i, j)].norm() <= tol
        })
    })
}

/// `2 max{0, |ρ₂₃| - sqrt(ρ₁₁ ρ₄₄)}` for states with only diagonal and `ρ₂₃` entries.
pub fn concurrence_block(rho: &DensityMatrix) -> Result<f64> {
    let m = rho.matrix();
    if !is_block_form(m, BLOCK_TOL) {
        return Err(Error::InvalidState(
            "state has coherences outside the diagonal and the (2,3) pair; use the general concurrence"
                .into(),
        ));
    }
    let corner = (m[(0, 0)].re * m[(3, 3)].re).max(0.0).sqrt();
    Ok((2.0 * (m[(1, 2)].norm() - corner)).clamp(0.0, 1.0))
}

/// `|ψ⁻⟩ = (|↑↓⟩ - |↓↑⟩)/√2`
pub fn singlet() -> DensityMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    DensityMatrix::pure(&[
        Complex64::new(0.0, 0.0),
        Complex64::new(s, 0.0),
        Complex64::new(-s, 0.0),
        Complex64::new(0.0, 0.0),
    ])
    .expect("normalized")
}

/// `p |ψ⁻⟩⟨ψ⁻| + (1 - p) 1/4`
pub fn werner(p: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("Werner weight must lie in [0, 1], got {p}")));
    }
    let mix = &singlet().matrix().scale_real(p) + &ComplexMatrix::identity(DIM).scale_real((1.0 - p) / 4.0);
    DensityMatrix::new(mix)
}
