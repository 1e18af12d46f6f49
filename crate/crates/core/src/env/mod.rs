// Copyright 2026 The qbath Authors
// SPDX-License-Identifier: Apache-2.0

//! Inverted-magnet environment.
//!
//! A two-dimensional ferromagnet in an antiparallel field `b`, pumped to a
//! spin accumulation `mu < -b`, hosts magnons with dispersion
//! `omega(k) = A s k^2 - b`. Its spin-resolved correlation functions fix the
//! emission and absorption rates seen by a pair of qubits.
//!
//! Channel `n = +1` is the spin-conserving coupling `lambda_plus`, channel
//! `n = -1` the spin-nonconserving coupling `lambda_minus`.
//!
//! Units: energies in units of the qubit gap `Delta`, lengths in units of
//! `ell = sqrt(A s / Delta)`, `k_B = hbar = 1`. [`magnet_rates`] reports rates
//! in units of `4 pi s g_2D lambda_ref^2 = lambda_ref^2 / A` with
//! `lambda_ref = max(lambda_plus, lambda_minus)`; steady states only depend on
//! rate ratios.

mod bessel;

use std::f64::consts::PI;

use crate::error::{Error, Result};

pub use bessel::bessel_j0;

/// Parameters of the pumped magnet.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MagnetParams {
    /// Spin stiffness `A`.
    pub stiffness: f64,
    /// Saturated spin density `s`.
    pub spin_density: f64,
    /// Field `b > 0`; the band bottom sits at `-b`.
    pub field: f64,
    /// Environment temperature `T_E >= 0`.
    pub temperature: f64,
    /// Spin accumulation `mu`; must satisfy `mu < -b` when `T_E > 0`.
    pub mu: f64,
}

impl MagnetParams {
    /// Magnet in reduced units (`A = s = 1`, so `ell = 1` when `Delta = 1`).
    pub fn reduced(field: f64, temperature: f64, mu: f64) -> Self {
        Self {
            stiffness: 1.0,
            spin_density: 1.0,
            field,
            temperature,
            mu,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if !(self.stiffness > 0.0 && self.stiffness.is_finite()) {
            return bad(format!("stiffness A must be positive, got {}", self.stiffness));
        }
        if !(self.spin_density > 0.0 && self.spin_density.is_finite()) {
            return bad(format!("spin density s must be positive, got {}", self.spin_density));
        }
        if !(self.field > 0.0 && self.field.is_finite()) {
            return bad(format!("field b must be positive, got {}", self.field));
        }
        if !(self.temperature >= 0.0 && self.temperature.is_finite()) {
            return bad(format!("temperature T_E must be >= 0, got {}", self.temperature));
        }
        if self.temperature > 0.0 && !(self.mu < -self.field) {
            return bad(format!(
                "spin accumulation mu = {} must lie below -b = {} at finite temperature",
                self.mu, -self.field
            ));
        }
        Ok(())
    }

    fn a_s(&self) -> f64 {
        self.stiffness * self.spin_density
    }

    /// `4 pi s g_2D = 1 / A`, the natural rate scale.
    pub fn rate_unit(&self) -> f64 {
        4.0 * PI * self.spin_density * dos_value(self)
    }
}

/// System-environment coupling magnitudes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingParams {
    /// `|lambda_1|`, spin-conserving.
    pub lambda_plus: f64,
    /// `|lambda_-1|`, spin-nonconserving.
    pub lambda_minus: f64,
}

impl CouplingParams {
    /// Couplings with `|lambda_1 / lambda_-1| = ratio` and `lambda_-1 = 1`.
    pub fn from_ratio(ratio: f64) -> Self {
        Self {
            lambda_plus: ratio.abs(),
            lambda_minus: 1.0,
        }
    }

    /// Couplings produced by an exchange interaction of strength `j` whose
    /// quantization axis is tilted by `theta` against the magnetization.
    pub fn from_angle(j: f64, theta: f64) -> Self {
        let (c, chi) = couplings_from_angle(j, theta);
        Self {
            lambda_plus: c.abs(),
            lambda_minus: chi.abs(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = |x: f64| x >= 0.0 && x.is_finite();
        if !ok(self.lambda_plus) || !ok(self.lambda_minus) {
            return Err(Error::InvalidParameter(format!(
                "couplings must be finite and non-negative, got ({}, {})",
                self.lambda_plus, self.lambda_minus
            )));
        }
        if self.lambda_plus == 0.0 && self.lambda_minus == 0.0 {
            return Err(Error::InvalidParameter("both couplings vanish".into()));
        }
        Ok(())
    }

    fn strength(&self, channel: Channel) -> f64 {
        match channel {
            Channel::Conserving => self.lambda_plus,
            Channel::NonConserving => self.lambda_minus,
        }
    }
}

/// Qubit gap and separation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    pub delta: f64,
    pub separation: f64,
}

impl SystemParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.delta > 0.0 && self.delta.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "qubit gap Delta must be positive, got {}",
                self.delta
            )));
        }
        if !(self.separation >= 0.0 && self.separation.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "separation r must be >= 0, got {}",
                self.separation
            )));
        }
        Ok(())
    }
}

/// The four rates that fully determine the two-qubit dissipator.
///
/// Local rates are non-negative; nonlocal rates carry a sign. Physicality
/// (`Gamma(0) >= |Gamma(r)|` for both processes) is checked, not enforced.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateSet {
    pub gamma_e_local: f64,
    pub gamma_e_nonlocal: f64,
    pub gamma_a_local: f64,
    pub gamma_a_nonlocal: f64,
}

impl RateSet {
    pub const fn new(ge0: f64, ger: f64, ga0: f64, gar: f64) -> Self {
        Self {
            gamma_e_local: ge0,
            gamma_e_nonlocal: ger,
            gamma_a_local: ga0,
            gamma_a_nonlocal: gar,
        }
    }

    /// Exchanges the roles of emission and absorption.
    pub fn mirrored(&self) -> Self {
        Self::new(
            self.gamma_a_local,
            self.gamma_a_nonlocal,
            self.gamma_e_local,
            self.gamma_e_nonlocal,
        )
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self::new(
            s * self.gamma_e_local,
            s * self.gamma_e_nonlocal,
            s * self.gamma_a_local,
            s * self.gamma_a_nonlocal,
        )
    }

    pub fn max_abs(&self) -> f64 {
        [
            self.gamma_e_local,
            self.gamma_e_nonlocal,
            self.gamma_a_local,
            self.gamma_a_nonlocal,
        ]
        .iter()
        .fold(0.0_f64, |m, x| m.max(x.abs()))
    }
}

/// Symmetry channel: the change of the environment's spin per coupling term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Channel {
    /// `n = +1`
    Conserving,
    /// `n = -1`
    NonConserving,
}

impl Channel {
    pub const ALL: [Channel; 2] = [Channel::Conserving, Channel::NonConserving];

    pub fn index(self) -> i32 {
        match self {
            Channel::Conserving => 1,
            Channel::NonConserving => -1,
        }
    }
}

impl TryFrom<i32> for Channel {
    type Error = Error;

    fn try_from(n: i32) -> Result<Self> {
        match n {
            1 => Ok(Channel::Conserving),
            -1 => Ok(Channel::NonConserving),
            other => Err(Error::InvalidChannel(other)),
        }
    }
}

/// Magnon dispersion `A s k^2 - b`.
pub fn dispersion(k: f64, p: &MagnetParams) -> f64 {
    p.a_s() * k * k - p.field
}

/// Magnon wavevector at energy `omega`, the inverse of [`dispersion`].
pub fn wavevector(omega: f64, p: &MagnetParams) -> Result<f64> {
    if omega < -p.field {
        return Err(Error::OutOfBand {
            omega,
            edge: -p.field,
        });
    }
    Ok(((omega + p.field) / p.a_s()).sqrt())
}

fn dos_value(p: &MagnetParams) -> f64 {
    1.0 / (4.0 * PI * p.a_s())
}

/// 2D density of states `Theta(omega + b) / (4 pi A s)`, with the band edge included.
pub fn dos(omega: f64, p: &MagnetParams) -> f64 {
    if omega + p.field >= 0.0 {
        dos_value(p)
    } else {
        0.0
    }
}

/// Bose occupation `1 / (exp((omega - mu)/T_E) - 1)`; identically zero at `T_E = 0`.
pub fn bose(omega: f64, p: &MagnetParams) -> Result<f64> {
    if p.temperature == 0.0 {
        return Ok(0.0);
    }
    let exponent = (omega - p.mu) / p.temperature;
    if !(exponent > 0.0) {
        return Err(Error::UnstableOccupation { exponent });
    }
    Ok(1.0 / exponent.exp_m1())
}

/// Spectral weight of a magnon at energy `e` seen at distance `r`:
/// `4 pi s g(e) J0(r k(e))`, zero below the band.
fn weight(e: f64, r: f64, p: &MagnetParams) -> Result<Option<f64>> {
    let g = dos(e, p);
    if g == 0.0 {
        return Ok(None);
    }
    let k = wavevector(e, p)?;
    Ok(Some(4.0 * PI * p.spin_density * g * bessel_j0(r * k)))
}

/// Correlation `C+_n(omega, r)`: the environment gains energy `omega` and spin `n`.
pub fn corr_plus(channel: Channel, omega: f64, r: f64, p: &MagnetParams) -> Result<f64> {
    match channel {
        Channel::Conserving => match weight(omega, r, p)? {
            Some(w) => Ok((bose(omega, p)? + 1.0) * w),
            None => Ok(0.0),
        },
        Channel::NonConserving => match weight(-omega, r, p)? {
            Some(w) => Ok(bose(-omega, p)? * w),
            None => Ok(0.0),
        },
    }
}

/// Correlation `C-_n(omega, r)`: the environment loses energy `omega` and spin `n`.
pub fn corr_minus(channel: Channel, omega: f64, r: f64, p: &MagnetParams) -> Result<f64> {
    match channel {
        Channel::Conserving => match weight(omega, r, p)? {
            Some(w) => Ok(bose(omega, p)? * w),
            None => Ok(0.0),
        },
        Channel::NonConserving => match weight(-omega, r, p)? {
            Some(w) => Ok((bose(-omega, p)? + 1.0) * w),
            None => Ok(0.0),
        },
    }
}

/// Residual of the channel-resolved KMS relation
/// `C-_n / C+_n = exp(-(omega - n mu) / T_E)`.
///
/// The difference is measured relative to `max(1, exp(...))`, so large
/// Boltzmann factors are compared at floating-point precision.
pub fn kms_verify(channel: Channel, omega: f64, r: f64, p: &MagnetParams) -> Result<f64> {
    if !(p.temperature > 0.0) {
        return Err(Error::Undefined(
            "the KMS ratio needs a positive environment temperature".into(),
        ));
    }
    let plus = corr_plus(channel, omega, r, p)?;
    if plus == 0.0 {
        return Err(Error::Undefined(format!(
            "C+ vanishes at omega = {omega}, r = {r}"
        )));
    }
    let minus = corr_minus(channel, omega, r, p)?;
    let expected = (-(omega - channel.index() as f64 * p.mu) / p.temperature).exp();
    Ok((minus / plus - expected).abs() / expected.max(1.0))
}

/// Emission and absorption rates of two qubits at the given separation.
///
/// `Gamma_e(r) = sum_n |lambda_n|^2 C+_n(Delta, r)` and
/// `Gamma_a(r) = sum_n |lambda_n|^2 C-_n(Delta, r)`, divided by
/// `lambda_ref^2 / A`.
pub fn magnet_rates(sys: &SystemParams, cpl: &CouplingParams, p: &MagnetParams) -> Result<RateSet> {
    sys.validate()?;
    cpl.validate()?;
    p.validate()?;
    let lambda_ref = cpl.lambda_plus.max(cpl.lambda_minus);
    let unit = lambda_ref * lambda_ref * p.rate_unit();
    let rate = |corr: fn(Channel, f64, f64, &MagnetParams) -> Result<f64>, r: f64| -> Result<f64> {
        let mut total = 0.0;
        for ch in Channel::ALL {
            let lam = cpl.strength(ch);
            if lam != 0.0 {
                total += lam * lam * corr(ch, sys.delta, r, p)?;
            }
        }
        Ok(total / unit)
    };
    Ok(RateSet::new(
        rate(corr_plus, 0.0)?,
        rate(corr_plus, sys.separation)?,
        rate(corr_minus, 0.0)?,
        rate(corr_minus, sys.separation)?,
    ))
}

/// Effective temperature in units of `Delta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Temperature {
    Finite(f64),
    /// `|Gamma_a| = |Gamma_e|`: the ratio is one.
    Infinite,
    /// `Gamma_a = 0`: pure emission, `T -> 0+`.
    ZeroPositive,
    /// `Gamma_e = 0`: pure absorption, `T -> 0-`.
    ZeroNegative,
}

impl Temperature {
    pub fn kt_over_delta(self) -> f64 {
        match self {
            Temperature::Finite(t) => t,
            Temperature::Infinite => f64::INFINITY,
            Temperature::ZeroPositive => 0.0,
            Temperature::ZeroNegative => -0.0,
        }
    }

    /// The Boltzmann ratio `exp(-Delta / kT)` this temperature encodes.
    pub fn ratio(self) -> f64 {
        match self {
            Temperature::Finite(t) => (-1.0 / t).exp(),
            Temperature::Infinite => 1.0,
            Temperature::ZeroPositive => 0.0,
            Temperature::ZeroNegative => f64::INFINITY,
        }
    }
}

/// Temperature assigned to a rate pair via `exp(-Delta/kT) = |Gamma_a / Gamma_e|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveTemperature {
    /// `|Gamma_a / Gamma_e|`.
    pub ratio: f64,
    pub temperature: Temperature,
    delta: f64,
}

impl EffectiveTemperature {
    pub fn kt_over_delta(&self) -> f64 {
        self.temperature.kt_over_delta()
    }

    /// Absolute `k_B T` in energy units.
    pub fn kt(&self) -> f64 {
        self.delta * self.kt_over_delta()
    }
}

pub fn effective_temperature(gamma_e: f64, gamma_a: f64, delta: f64) -> Result<EffectiveTemperature> {
    if gamma_e == 0.0 && gamma_a == 0.0 {
        return Err(Error::Undefined(
            "effective temperature of a vanishing rate pair".into(),
        ));
    }
    if gamma_e == 0.0 {
        return Ok(EffectiveTemperature {
            ratio: f64::INFINITY,
            temperature: Temperature::ZeroNegative,
            delta,
        });
    }
    let ratio = (gamma_a / gamma_e).abs();
    let temperature = if ratio == 0.0 {
        Temperature::ZeroPositive
    } else if ratio == 1.0 {
        Temperature::Infinite
    } else {
        Temperature::Finite(-1.0 / ratio.ln())
    };
    Ok(EffectiveTemperature {
        ratio,
        temperature,
        delta,
    })
}

/// Coefficients `(c, chi)` of the spin-conserving and spin-flipping parts of
/// an exchange coupling `-J sigma . S` whose axes are tilted by `theta`.
pub fn couplings_from_angle(j: f64, theta: f64) -> (f64, f64) {
    let c = theta.cos();
    (-j * (1.0 + c), -j * (1.0 - c))
}
