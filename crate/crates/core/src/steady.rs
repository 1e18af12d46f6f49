// Copyright 2026 The qbath Authors
// SPDX-License-Identifier: Apache-2.0

//! Steady states, relaxation spectrum and steady-state multiplicity.

use num_complex::Complex64;

use crate::env::RateSet;
use crate::error::{Error, Result};
use crate::lindblad::{
    apply_dissipator, build_dissipator, validate_psd, DensityMatrix, Liouvillian, DIM, SUPER_DIM,
};
use crate::linalg::{general_eig, inner, nullspace, solve, ComplexMatrix, DEFAULT_NULLSPACE_TOL};

/// Eigenvalues within `ZERO_REL · max(1, |L|)` of the origin count as stationary.
pub const ZERO_REL: f64 = 1e-9;
/// Integrator step in units of `1/|L|`.
pub const STEP_FACTOR: f64 = 0.05;
/// Largest accepted `dt · |L|`.
pub const MAX_STEP_NORM: f64 = 0.1;
/// Relaxation times integrated by the propagation route.
pub const RELAXATION_TIMES: f64 = 40.0;
/// Relaxation times used to pick a representative in the degenerate case.
pub const DEGENERATE_RELAXATION_TIMES: f64 = 100.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SteadyMethod {
    Nullspace,
    Block,
    Propagation,
}

impl SteadyMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            SteadyMethod::Nullspace => "nullspace",
            SteadyMethod::Block => "block",
            SteadyMethod::Propagation => "propagation",
        }
    }
}

#[derive(Debug, Clone)]
pub struct SteadyStateResult {
    pub state: DensityMatrix,
    /// Dimension of the kernel of `L`.
    pub multiplicity: usize,
    /// `|L vec(ρ)|`
    pub residual: f64,
    pub method: SteadyMethod,
}

impl SteadyStateResult {
    pub fn is_degenerate(&self) -> bool {
        self.multiplicity > 1
    }
}

#[derive(Debug, Clone)]
pub struct GapResult {
    /// Smallest decay rate `-Re λ` among decaying modes, zero if none decay.
    pub gap: f64,
    pub zero_count: usize,
    pub spectrum: Vec<Complex64>,
    /// True when no eigenvalue has a real part below `-ε_zero`.
    pub no_decay: bool,
}

fn zero_threshold(l: &Liouvillian) -> f64 {
    ZERO_REL * l.norm().max(1.0)
}

fn residual(l: &Liouvillian, rho: &DensityMatrix) -> f64 {
    crate::linalg::vec_norm(&l.matrix().matvec(&rho.vectorize()))
}

fn require_trace_preserving(l: &Liouvillian) -> Result<()> {
    let dev = l.trace_preservation_residual();
    if dev > 1e-12 * l.norm().max(1.0) {
        return Err(Error::InvalidParameter(format!(
            "generator is not trace preserving (deviation {dev:e})"
        )));
    }
    Ok(())
}

/// Eigenvalues of `L` with the zero count and gap.
///
/// `ε_zero = 1e-9 · max(1, |L|)`. An eigenvalue is stationary when both its
/// real and imaginary parts are within `ε_zero`; undamped oscillations are
/// neither stationary nor decaying.
pub fn spectral_gap(l: &Liouvillian) -> Result<GapResult> {
    let spectrum = general_eig(l.matrix())?;
    let eps = zero_threshold(l);
    let zero_count = spectrum
        .iter()
        .filter(|z| z.re.abs() <= eps && z.im.abs() <= eps)
        .count();
    let gap = spectrum
        .iter()
        .filter(|z| z.re < -eps)
        .map(|z| -z.re)
        .fold(f64::INFINITY, f64::min);
    let no_decay = !gap.is_finite();
    Ok(GapResult {
        gap: if no_decay { 0.0 } else { gap },
        zero_count,
        spectrum,
        no_decay,
    })
}

/// Kernel of `L` by singular value decomposition.
///
/// A unique kernel vector is rescaled to unit trace and Hermitized. With a
/// degenerate kernel the maximally mixed state is propagated for
/// `100/λ_gap` and projected onto the kernel.
pub fn steady_state(l: &Liouvillian) -> Result<SteadyStateResult> {
    require_trace_preserving(l)?;
    let kernel = nullspace(l.matrix(), DEFAULT_NULLSPACE_TOL)?;
    let state = match kernel.len() {
        0 => return Err(Error::EmptyKernel),
        1 => DensityMatrix::from_vectorized(&kernel[0])?,
        _ => {
            let gap = spectral_gap(l)?;
            let t = if gap.no_decay {
                0.0
            } else {
                DEGENERATE_RELAXATION_TIMES / gap.gap
            };
            let evolved = propagate(l, &DensityMatrix::maximally_mixed(), t, default_step(l))?;
            let v = evolved.vectorize();
            let mut projected = vec![Complex64::new(0.0, 0.0); SUPER_DIM];
            for q in &kernel {
                let a = inner(q, &v);
                for (p, qk) in projected.iter_mut().zip(q) {
                    *p += a * qk;
                }
            }
            DensityMatrix::from_vectorized(&projected)?
        }
    };
    Ok(SteadyStateResult {
        residual: residual(l, &state),
        state,
        multiplicity: kernel.len(),
        method: SteadyMethod::Nullspace,
    })
}

/// Hermitian basis of the block `{diagonal, ρ₂₃}`:
/// `E00, E11, E22, E33, E12 + E21, i(E12 - E21)`.
fn block_basis() -> [ComplexMatrix; 6] {
    let mut out: [ComplexMatrix; 6] = std::array::from_fn(|_| ComplexMatrix::zeros(DIM, DIM));
    for (k, m) in out.iter_mut().take(4).enumerate() {
        m[(k, k)] = Complex64::new(1.0, 0.0);
    }
    out[4][(1, 2)] = Complex64::new(1.0, 0.0);
    out[4][(2, 1)] = Complex64::new(1.0, 0.0);
    out[5][(1, 2)] = Complex64::new(0.0, 1.0);
    out[5][(2, 1)] = Complex64::new(0.0, -1.0);
    out
}

fn block_coordinates(m: &ComplexMatrix) -> [f64; 6] {
    [
        m[(0, 0)].re,
        m[(1, 1)].re,
        m[(2, 2)].re,
        m[(3, 3)].re,
        m[(1, 2)].re,
        m[(1, 2)].im,
    ]
}

fn block_solve(map: impl Fn(&ComplexMatrix) -> ComplexMatrix) -> Result<DensityMatrix> {
    let basis = block_basis();
    let mut reduced = ComplexMatrix::zeros(6, 6);
    for (k, b) in basis.iter().enumerate() {
        for (row, x) in block_coordinates(&map(b)).into_iter().enumerate() {
            reduced[(row, k)] = Complex64::new(x, 0.0);
        }
    }
    // The population rows sum to zero, so the first is replaced by the trace.
    for k in 0..6 {
        reduced[(0, k)] = Complex64::new(if k < 4 { 1.0 } else { 0.0 }, 0.0);
    }
    let mut rhs = vec![Complex64::new(0.0, 0.0); 6];
    rhs[0] = Complex64::new(1.0, 0.0);
    let x = match solve(&reduced, &rhs) {
        Ok(x) => x,
        Err(Error::SingularPivot { .. }) => return Err(Error::DegenerateBlock),
        Err(e) => return Err(e),
    };
    let mut rho = ComplexMatrix::zeros(DIM, DIM);
    for (b, xk) in basis.iter().zip(&x) {
        rho = &rho + &b.scale_real(xk.re);
    }
    DensityMatrix::new(rho)
}

/// Steady state from the closed six-unknown system on the block
/// `(ρ₁₁, ρ₂₂, ρ₃₃, ρ₄₄, Re ρ₂₃, Im ρ₂₃)`.
pub fn steady_state_block(rates: &RateSet) -> Result<SteadyStateResult> {
    let psd = validate_psd(rates);
    if !psd.physical {
        return Err(Error::Unphysical {
            margin_e: psd.margin_e,
            margin_a: psd.margin_a,
        });
    }
    let state = block_solve(|b| apply_dissipator(rates, b))?;
    Ok(SteadyStateResult {
        residual: residual(&build_dissipator(rates), &state),
        state,
        multiplicity: 1,
        method: SteadyMethod::Block,
    })
}

/// Block solve using an arbitrary generator restricted to the block.
pub fn steady_state_block_of(l: &Liouvillian) -> Result<SteadyStateResult> {
    let state = block_solve(|b| l.apply(b))?;
    Ok(SteadyStateResult {
        residual: residual(l, &state),
        state,
        multiplicity: 1,
        method: SteadyMethod::Block,
    })
}

/// `0.05 / |L|`, the step used by the propagation routes.
pub fn default_step(l: &Liouvillian) -> f64 {
    let n = l.norm();
    if n > 0.0 {
        STEP_FACTOR / n
    } else {
        1.0
    }
}

fn rk4_map(l: &ComplexMatrix, h: f64) -> ComplexMatrix {
    let hl = l.scale_real(h);
    let mut term = ComplexMatrix::identity(SUPER_DIM);
    let mut out = term.clone();
    for k in 1..=4 {
        term = hl.matmul(&term).scale_real(1.0 / k as f64);
        out = &out + &term;
    }
    out
}

/// Classical fourth-order Runge-Kutta for `d vec(ρ)/dt = L vec(ρ)`.
///
/// The linear one-step map is raised to the step count by repeated squaring,
/// followed by one shorter step to land on `t_final`. The result is
/// Hermitized but not renormalized.
pub fn propagate(
    l: &Liouvillian,
    rho0: &DensityMatrix,
    t_final: f64,
    dt: f64,
) -> Result<DensityMatrix> {
    if !(t_final >= 0.0) || !t_final.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "final time must be finite and nonnegative, got {t_final}"
        )));
    }
    let norm = l.norm();
    if !(dt > 0.0) || !dt.is_finite() || dt * norm > MAX_STEP_NORM {
        return Err(Error::UnstableStep { dt, norm });
    }
    let steps = (t_final / dt).floor();
    if steps > u64::MAX as f64 / 2.0 {
        return Err(Error::InvalidParameter(format!(
            "{steps} integration steps requested"
        )));
    }
    let mut n = steps as u64;
    let rest = t_final - n as f64 * dt;
    let mut v = rho0.vectorize();
    let mut power = rk4_map(l.matrix(), dt);
    while n > 0 {
        if n & 1 == 1 {
            v = power.matvec(&v);
        }
        n >>= 1;
        if n > 0 {
            power = power.matmul(&power);
        }
    }
    if rest > 0.0 {
        v = rk4_map(l.matrix(), rest).matvec(&v);
    }
    let m = ComplexMatrix::unvectorize(&v, DIM)?;
    Ok(DensityMatrix::new_unchecked(
        (&m + &m.adjoint()).scale_real(0.5),
    ))
}

/// Steady state as the long-time limit of the maximally mixed state,
/// integrated for `40/λ_gap`.
pub fn steady_state_propagation(l: &Liouvillian) -> Result<SteadyStateResult> {
    let gap = spectral_gap(l)?;
    if gap.no_decay {
        return Err(Error::Undefined(
            "no decaying modes; the long-time limit is not reached".into(),
        ));
    }
    let evolved = propagate(
        l,
        &DensityMatrix::maximally_mixed(),
        RELAXATION_TIMES / gap.gap,
        default_step(l),
    )?;
    let state = DensityMatrix::from_vectorized(&evolved.vectorize())?;
    Ok(SteadyStateResult {
        residual: residual(l, &state),
        state,
        multiplicity: gap.zero_count,
        method: SteadyMethod::Propagation,
    })
}
