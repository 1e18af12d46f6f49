// Copyright 2026 The qbath Authors
// SPDX-License-Identifier: Apache-2.0

//! Two-qubit Lindblad generator.
//!
//! Basis order is `(|↑↑⟩, |↑↓⟩, |↓↑⟩, |↓↓⟩)` with `σz|↑⟩ = +|↑⟩` and
//! `σ+ = |↑⟩⟨↓|`; qubit 1 is the left tensor factor. Superoperators act on
//! column-stacked density matrices, `vec(ρ)[i + 4j] = ρ[i, j]`.

use num_complex::Complex64;

use crate::env::RateSet;
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, ComplexMatrix};

/// Hilbert-space dimension of the qubit pair.
pub const DIM: usize = 4;
/// Dimension of the superoperator space.
pub const SUPER_DIM: usize = DIM * DIM;

const STATE_TOL: f64 = 1e-10;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn single_raise() -> ComplexMatrix {
    ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]).expect("2x2")
}

fn embed(op: &ComplexMatrix, qubit: usize) -> ComplexMatrix {
    let id = ComplexMatrix::identity(2);
    match qubit {
        0 => op.kron(&id),
        1 => id.kron(op),
        _ => panic!("qubit index {qubit} out of range"),
    }
}

/// `σ+` on qubit `0` or `1`.
pub fn sigma_plus(qubit: usize) -> ComplexMatrix {
    embed(&single_raise(), qubit)
}

/// `σ-` on qubit `0` or `1`.
pub fn sigma_minus(qubit: usize) -> ComplexMatrix {
    embed(&single_raise().transpose(), qubit)
}

/// `H_S = (Δ/2)(σz ⊗ 1 + 1 ⊗ σz)`, diagonal with energies `(Δ, 0, 0, -Δ)`.
pub fn system_hamiltonian(delta: f64) -> ComplexMatrix {
    ComplexMatrix::diagonal(&[c(delta), c(0.0), c(0.0), c(-delta)])
}

/// Two-qubit density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix(ComplexMatrix);

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity, each to `1e-10`.
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        if m.rows() != DIM || m.cols() != DIM {
            return Err(Error::InvalidState(format!(
                "expected a 4x4 matrix, got {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        let dev = m.hermitian_deviation();
        if dev > STATE_TOL {
            return Err(Error::InvalidState(format!("not Hermitian (deviation {dev:e})")));
        }
        let tr = m.trace();
        if (tr - c(1.0)).norm() > STATE_TOL {
            return Err(Error::InvalidState(format!("trace is {tr}, expected 1")));
        }
        let low = hermitian_eig(&m)?.values[0];
        if low < -STATE_TOL {
            return Err(Error::InvalidState(format!(
                "not positive semidefinite (smallest eigenvalue {low:e})"
            )));
        }
        Ok(Self(m))
    }

    /// Wraps a matrix without checking the density-matrix invariants.
    pub fn new_unchecked(m: ComplexMatrix) -> Self {
        Self(m)
    }

    /// `|ψ⟩⟨ψ|` for a normalized or unnormalized state vector.
    pub fn pure(psi: &[Complex64]) -> Result<Self> {
        let norm = crate::linalg::vec_norm(psi);
        if psi.len() != DIM || norm == 0.0 {
            return Err(Error::InvalidState("need a nonzero 4-component vector".into()));
        }
        Self::new(ComplexMatrix::from_fn(DIM, DIM, |i, j| {
            psi[i] * psi[j].conj() / (norm * norm)
        }))
    }

    pub fn maximally_mixed() -> Self {
        Self(ComplexMatrix::identity(DIM).scale_real(0.25))
    }

    /// Projector onto a product-basis state (index in the fixed basis order).
    pub fn basis(index: usize) -> Self {
        let mut m = ComplexMatrix::zeros(DIM, DIM);
        m[(index, index)] = c(1.0);
        Self(m)
    }

    /// Gibbs state `exp(-H_S/kT)/Z` of the qubit pair, temperature in units of `Δ`.
    ///
    /// Negative temperatures give the inverted ensemble; `kT = ±∞` the maximally
    /// mixed state.
    pub fn gibbs(kt_over_delta: f64) -> Result<Self> {
        if kt_over_delta == 0.0 || kt_over_delta.is_nan() {
            return Err(Error::InvalidParameter(format!(
                "Gibbs state needs a nonzero temperature, got {kt_over_delta}"
            )));
        }
        let energies = [1.0, 0.0, 0.0, -1.0];
        let log_w: Vec<f64> = energies.iter().map(|e| -e / kt_over_delta).collect();
        let top = log_w.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let w: Vec<f64> = log_w.iter().map(|l| (l - top).exp()).collect();
        let z: f64 = w.iter().sum();
        Ok(Self(ComplexMatrix::diagonal(
            &w.iter().map(|x| c(x / z)).collect::<Vec<_>>(),
        )))
    }

    /// Builds a state from a column-stacked vector, rescaling to unit trace and
    /// Hermitizing. Fails if the trace vanishes.
    pub fn from_vectorized(v: &[Complex64]) -> Result<Self> {
        let m = ComplexMatrix::unvectorize(v, DIM)?;
        let tr = m.trace();
        if tr.norm() < 1e-14 * crate::linalg::vec_norm(v).max(f64::MIN_POSITIVE) {
            return Err(Error::InvalidState("vector has zero trace".into()));
        }
        let m = m.scale(c(1.0) / tr);
        let herm = (&m + &m.adjoint()).scale_real(0.5);
        Self::new(herm)
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.0[(i, j)]
    }

    /// `tr ρ²`.
    pub fn purity(&self) -> f64 {
        self.0.matmul(&self.0).trace().re
    }

    /// `U ρ U†`.
    pub fn conjugated(&self, u: &ComplexMatrix) -> Self {
        Self(u.matmul(&self.0).matmul(&u.adjoint()))
    }

    pub fn vectorize(&self) -> Vec<Complex64> {
        self.0.vectorize()
    }
}

/// Superoperator matrix of a linear map on 4x4 matrices.
pub fn superoperator_from_map(f: impl Fn(&ComplexMatrix) -> ComplexMatrix) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(SUPER_DIM, SUPER_DIM);
    for l in 0..DIM {
        for k in 0..DIM {
            let mut unit = ComplexMatrix::zeros(DIM, DIM);
            unit[(k, l)] = c(1.0);
            out.set_col(k + DIM * l, &f(&unit).vectorize());
        }
    }
    out
}

/// Linear generator on column-stacked two-qubit density matrices.
#[derive(Debug, Clone)]
pub struct Liouvillian {
    matrix: ComplexMatrix,
    physical: bool,
}

impl Liouvillian {
    pub fn from_matrix(matrix: ComplexMatrix, physical: bool) -> Result<Self> {
        if matrix.rows() != SUPER_DIM || matrix.cols() != SUPER_DIM {
            return Err(Error::DimensionMismatch {
                expected: SUPER_DIM,
                got: matrix.rows(),
            });
        }
        Ok(Self { matrix, physical })
    }

    pub fn zero() -> Self {
        Self {
            matrix: ComplexMatrix::zeros(SUPER_DIM, SUPER_DIM),
            physical: true,
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// False when built from rates that violate complete positivity.
    pub fn is_physical(&self) -> bool {
        self.physical
    }

    /// Norm used for relative thresholds and the integrator step: the induced
    /// infinity norm of the superoperator matrix.
    pub fn norm(&self) -> f64 {
        self.matrix.norm_inf()
    }

    pub fn apply(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        let v = self.matrix.matvec(&rho.vectorize());
        ComplexMatrix::unvectorize(&v, DIM).expect("16-vector")
    }

    /// `max_j |Σ_i L[i + 4i, j]|`: how far `vec(1)†` is from a left null vector.
    pub fn trace_preservation_residual(&self) -> f64 {
        (0..SUPER_DIM)
            .map(|j| {
                (0..DIM)
                    .map(|i| self.matrix[(i + DIM * i, j)])
                    .sum::<Complex64>()
                    .norm()
            })
            .fold(0.0, f64::max)
    }

    pub fn plus(&self, other: &Liouvillian) -> Liouvillian {
        Liouvillian {
            matrix: &self.matrix + &other.matrix,
            physical: self.physical && other.physical,
        }
    }
}

/// Direct evaluation of the dissipator on a matrix:
/// `Σ_ij Γe(r_ij)(σ-_j ρ σ+_i - ½{σ+_i σ-_j, ρ}) + Γa(r_ij)(σ+_j ρ σ-_i - ½{σ-_i σ+_j, ρ})`.
pub fn apply_dissipator(rates: &RateSet, rho: &ComplexMatrix) -> ComplexMatrix {
    let sp = [sigma_plus(0), sigma_plus(1)];
    let sm = [sigma_minus(0), sigma_minus(1)];
    let mut out = ComplexMatrix::zeros(DIM, DIM);
    for i in 0..2 {
        for j in 0..2 {
            let (ge, ga) = if i == j {
                (rates.gamma_e_local, rates.gamma_a_local)
            } else {
                (rates.gamma_e_nonlocal, rates.gamma_a_nonlocal)
            };
            if ge != 0.0 {
                let jump = sm[j].matmul(rho).matmul(&sp[i]);
                let anti = sp[i].matmul(&sm[j]).anticommutator(rho).scale_real(0.5);
                out = &out + &(&jump - &anti).scale_real(ge);
            }
            if ga != 0.0 {
                let jump = sp[j].matmul(rho).matmul(&sm[i]);
                let anti = sm[i].matmul(&sp[j]).anticommutator(rho).scale_real(0.5);
                out = &out + &(&jump - &anti).scale_real(ga);
            }
        }
    }
    out
}

/// Dissipator superoperator. Unphysical rate sets are accepted and flagged.
pub fn build_dissipator(rates: &RateSet) -> Liouvillian {
    Liouvillian {
        matrix: superoperator_from_map(|rho| apply_dissipator(rates, rho)),
        physical: validate_psd(rates).physical,
    }
}

/// Superoperator of `-i[H_S, ·]`.
pub fn build_hamiltonian_part(delta: f64) -> Liouvillian {
    let h = system_hamiltonian(delta);
    let minus_i = Complex64::new(0.0, -1.0);
    Liouvillian {
        matrix: superoperator_from_map(|rho| h.commutator(rho).scale(minus_i)),
        physical: true,
    }
}

/// Hamiltonian part plus dissipator.
pub fn build_liouvillian(rates: &RateSet, delta: f64) -> Liouvillian {
    build_hamiltonian_part(delta).plus(&build_dissipator(rates))
}

/// Outcome of the complete-positivity check on a rate set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsdCheck {
    pub physical: bool,
    /// `Γe(0) - |Γe(r)|`
    pub margin_e: f64,
    /// `Γa(0) - |Γa(r)|`
    pub margin_a: f64,
}

/// Tolerance on the PSD margins.
pub const PSD_TOL: f64 = 1e-12;

pub fn validate_psd(rates: &RateSet) -> PsdCheck {
    let margin_e = rates.gamma_e_local - rates.gamma_e_nonlocal.abs();
    let margin_a = rates.gamma_a_local - rates.gamma_a_nonlocal.abs();
    PsdCheck {
        physical: margin_e >= -PSD_TOL && margin_a >= -PSD_TOL,
        margin_e,
        margin_a,
    }
}

/// One diagonal channel `γ (L ρ L† - ½{L†L, ρ})`.
#[derive(Debug, Clone)]
pub struct JumpChannel {
    pub rate: f64,
    pub operator: ComplexMatrix,
}

/// Dissipator in diagonal form: two absorption and two emission channels.
///
/// Operators are `(σ±_1 ± sgn(Γ(r)) σ±_2)/√2` with rates `Γ(0) ± |Γ(r)|`,
/// ordered absorption-symmetric, absorption-antisymmetric,
/// emission-symmetric, emission-antisymmetric.
#[derive(Debug, Clone)]
pub struct JumpDecomposition {
    pub channels: [JumpChannel; 4],
}

impl JumpDecomposition {
    pub fn apply(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(DIM, DIM);
        for ch in &self.channels {
            if ch.rate == 0.0 {
                continue;
            }
            let l = &ch.operator;
            let ld = l.adjoint();
            let jump = l.matmul(rho).matmul(&ld);
            let anti = ld.matmul(l).anticommutator(rho).scale_real(0.5);
            out = &out + &(&jump - &anti).scale_real(ch.rate);
        }
        out
    }

    pub fn to_liouvillian(&self) -> Liouvillian {
        Liouvillian {
            matrix: superoperator_from_map(|rho| self.apply(rho)),
            physical: true,
        }
    }
}

fn sign(x: f64) -> f64 {
    if x < 0.0 {
        -1.0
    } else {
        1.0
    }
}

pub fn jump_decomposition(rates: &RateSet) -> Result<JumpDecomposition> {
    let psd = validate_psd(rates);
    if !psd.physical {
        return Err(Error::Unphysical {
            margin_e: psd.margin_e,
            margin_a: psd.margin_a,
        });
    }
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    let pair = |op: fn(usize) -> ComplexMatrix, local: f64, nonlocal: f64| {
        let s = sign(nonlocal);
        let (a, b) = (op(0), op(1));
        let sym = (&a + &b.scale_real(s)).scale_real(inv_sqrt2);
        let anti = (&a - &b.scale_real(s)).scale_real(inv_sqrt2);
        [
            JumpChannel {
                rate: local + nonlocal.abs(),
                operator: sym,
            },
            JumpChannel {
                // Clamp the tolerated -1e-12 margin.
                rate: (local - nonlocal.abs()).max(0.0),
                operator: anti,
            },
        ]
    };
    let [a1, a2] = pair(sigma_plus, rates.gamma_a_local, rates.gamma_a_nonlocal);
    let [e1, e2] = pair(sigma_minus, rates.gamma_e_local, rates.gamma_e_nonlocal);
    Ok(JumpDecomposition {
        channels: [a1, a2, e1, e2],
    })
}

/// Boltzmann ratio `exp(-Δ/kT)`; `±∞` maps to one, zero is rejected.
fn boltzmann(kt_over_delta: f64) -> Result<f64> {
    if kt_over_delta == 0.0 || kt_over_delta.is_nan() {
        return Err(Error::InvalidParameter(format!(
            "effective temperature must be nonzero, got {kt_over_delta}"
        )));
    }
    Ok((-1.0 / kt_over_delta).exp())
}

/// Rates built from effective temperatures, together with their PSD check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TemperatureRates {
    pub rates: RateSet,
    pub psd: PsdCheck,
}

/// Rates anchored on emission:
/// `Γe(0) = γ`, `Γe(r) = f_e γ`, `Γa(0) = γ e^{-Δ/kT(0)}`,
/// `|Γa(r)| = |Γe(r)| e^{-Δ/kT(r)}` with sign `sign_a · sgn(f_e)`.
pub fn rates_from_temperatures(
    gamma_e0: f64,
    f_e: f64,
    kt0_over_delta: f64,
    ktr_over_delta: f64,
    sign_a: f64,
) -> Result<TemperatureRates> {
    check_anchor(gamma_e0, f_e, sign_a)?;
    let x0 = boltzmann(kt0_over_delta)?;
    let xr = boltzmann(ktr_over_delta)?;
    let ger = f_e * gamma_e0;
    let gar = sign(sign_a) * sign(f_e) * ger.abs() * xr;
    let rates = RateSet::new(gamma_e0, ger, gamma_e0 * x0, gar);
    Ok(TemperatureRates {
        rates,
        psd: validate_psd(&rates),
    })
}

/// Mirror image of [`rates_from_temperatures`], anchored on absorption:
/// `Γa(0) = γ`, `Γa(r) = f_a γ`, `Γe(0) = γ e^{Δ/kT(0)}`,
/// `|Γe(r)| = |Γa(r)| e^{Δ/kT(r)}` with sign `sign_e · sgn(f_a)`.
pub fn rates_from_temperatures_absorption(
    gamma_a0: f64,
    f_a: f64,
    kt0_over_delta: f64,
    ktr_over_delta: f64,
    sign_e: f64,
) -> Result<TemperatureRates> {
    let mirrored = rates_from_temperatures(gamma_a0, f_a, -kt0_over_delta, -ktr_over_delta, sign_e)?;
    let rates = mirrored.rates.mirrored();
    Ok(TemperatureRates {
        rates,
        psd: validate_psd(&rates),
    })
}

fn check_anchor(gamma0: f64, f: f64, s: f64) -> Result<()> {
    if !(gamma0 > 0.0 && gamma0.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "reference rate must be positive, got {gamma0}"
        )));
    }
    if !(-1.0..=1.0).contains(&f) {
        return Err(Error::InvalidParameter(format!(
            "nonlocal fraction must lie in [-1, 1], got {f}"
        )));
    }
    if s != 1.0 && s != -1.0 {
        return Err(Error::InvalidParameter(format!("relative sign must be ±1, got {s}")));
    }
    Ok(())
}

/// Pair-resolved emission term `Γe(r_ij)(σ-_i ρ σ+_j - ½{σ+_j σ-_i, ρ})`.
fn emission_term(rates: &RateSet, i: usize, j: usize, rho: &ComplexMatrix) -> ComplexMatrix {
    let g = if i == j { rates.gamma_e_local } else { rates.gamma_e_nonlocal };
    let (a, ad) = (sigma_minus(i), sigma_plus(j));
    let jump = a.matmul(rho).matmul(&ad);
    let anti = ad.matmul(&a).anticommutator(rho).scale_real(0.5);
    (&jump - &anti).scale_real(g)
}

/// Pair-resolved absorption term `Γa(r_ij)(σ+_i ρ σ-_j - ½{σ-_j σ+_i, ρ})`.
fn absorption_term(rates: &RateSet, i: usize, j: usize, rho: &ComplexMatrix) -> ComplexMatrix {
    let g = if i == j { rates.gamma_a_local } else { rates.gamma_a_nonlocal };
    let (a, ad) = (sigma_plus(i), sigma_minus(j));
    let jump = a.matmul(rho).matmul(&ad);
    let anti = ad.matmul(&a).anticommutator(rho).scale_real(0.5);
    (&jump - &anti).scale_real(g)
}

/// `max_ij max|L^e_ij[ρ_T] + L^a_ji[ρ_T]|` on the Gibbs state at `kT`.
///
/// Vanishes when `Γa(r_ij) = e^{-Δ/kT} Γe(r_ij)` for every pair.
pub fn detailed_balance_residual(rates: &RateSet, kt_over_delta: f64) -> Result<f64> {
    let gibbs = DensityMatrix::gibbs(kt_over_delta)?;
    let rho = gibbs.matrix();
    let mut worst = 0.0_f64;
    for i in 0..2 {
        for j in 0..2 {
            let total = &emission_term(rates, i, j, rho) + &absorption_term(rates, j, i, rho);
            worst = worst.max(total.max_abs());
        }
    }
    Ok(worst)
}
