// Copyright 2026 The qbath Authors
// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

/// Errors raised by the numerical kernels and the physics layers built on them.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix dimension {0} exceeds the supported maximum of 16")]
    TooLarge(usize),

    #[error("matrix is not Hermitian (max |A - A^H| = {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("{algorithm} did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence {
        algorithm: &'static str,
        iterations: usize,
        residual: f64,
    },

    #[error("eigenvalue iteration did not converge after {iterations} QR steps ({} eigenvalues found)", found.len())]
    PartialSpectrum {
        iterations: usize,
        found: Vec<num_complex::Complex64>,
    },

    #[error("singular pivot encountered at column {column} (|pivot| = {pivot:e})")]
    SingularPivot { column: usize, pivot: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("frequency {omega} lies below the magnon band edge {edge}")]
    OutOfBand { omega: f64, edge: f64 },

    #[error("Bose occupation is unstable: (omega - mu)/T = {exponent} must be positive")]
    UnstableOccupation { exponent: f64 },

    #[error("invalid channel index {0}; expected +1 or -1")]
    InvalidChannel(i32),

    #[error("rate set is unphysical (margins: emission {margin_e:e}, absorption {margin_a:e})")]
    Unphysical { margin_e: f64, margin_a: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("the reduced block system is singular; the steady state is degenerate")]
    DegenerateBlock,

    #[error("Liouvillian has an empty kernel (trace preservation violated)")]
    EmptyKernel,

    #[error("time step {dt} violates the stability guard dt*|L| <= 0.1 (|L| = {norm})")]
    UnstableStep { dt: f64, norm: f64 },

    #[error("undefined: {0}")]
    Undefined(String),
}

impl Error {
    /// True for errors caused by invalid user input rather than numerical failure.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::NotSquare { .. }
                | Error::DimensionMismatch { .. }
                | Error::TooLarge(_)
                | Error::NotHermitian { .. }
                | Error::InvalidParameter(_)
                | Error::OutOfBand { .. }
                | Error::InvalidChannel(_)
                | Error::Unphysical { .. }
                | Error::InvalidState(_)
                | Error::UnstableStep { .. }
                | Error::Undefined(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
