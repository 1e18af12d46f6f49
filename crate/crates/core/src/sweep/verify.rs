// Copyright 2026 The qbath Authors
// SPDX-License-Identifier: Apache-2.0

//! Built-in verification suites.

use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::entanglement::{concurrence, concurrence_block};
use crate::env::{
    corr_minus, corr_plus, kms_verify, magnet_rates, Channel, CouplingParams, MagnetParams,
    RateSet, SystemParams,
};
use crate::error::{Error, Result};
use crate::lindblad::{
    build_dissipator, build_liouvillian, detailed_balance_residual, jump_decomposition,
    rates_from_temperatures, validate_psd, DensityMatrix,
};
use crate::linalg::{general_eig, hermitian_eig, ComplexMatrix};
use crate::steady::{steady_state, steady_state_block, steady_state_propagation};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Kms,
    Psd,
    DetailedBalance,
    Oracles,
    All,
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "kms" => Ok(Suite::Kms),
            "psd" => Ok(Suite::Psd),
            "detailed-balance" => Ok(Suite::DetailedBalance),
            "oracles" => Ok(Suite::Oracles),
            "all" => Ok(Suite::All),
            other => Err(Error::InvalidParameter(format!(
                "unknown suite `{other}`; expected kms, psd, detailed-balance, oracles or all"
            ))),
        }
    }
}

/// Outcome of one check: the worst value seen against its tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub suite: &'static str,
    pub check: &'static str,
    pub cases: usize,
    pub worst: f64,
    pub tolerance: f64,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.worst <= self.tolerance
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "suite={} check={} cases={} worst={:e} tolerance={:e} status={}",
            self.suite,
            self.check,
            self.cases,
            self.worst,
            self.tolerance,
            if self.passed() { "pass" } else { "fail" }
        )
    }
}

struct Tally {
    suite: &'static str,
    check: &'static str,
    tolerance: f64,
    cases: usize,
    worst: f64,
}

impl Tally {
    fn new(suite: &'static str, check: &'static str, tolerance: f64) -> Self {
        Self {
            suite,
            check,
            tolerance,
            cases: 0,
            worst: 0.0,
        }
    }

    fn record(&mut self, value: f64) {
        self.cases += 1;
        // NaN counts as a failure.
        self.worst = if value.is_nan() { f64::INFINITY } else { self.worst.max(value) };
    }

    fn finish(self) -> CheckReport {
        CheckReport {
            suite: self.suite,
            check: self.check,
            cases: self.cases,
            worst: self.worst,
            tolerance: self.tolerance,
        }
    }
}

/// Physical rate set with both nonlocal fractions in `[-0.95, 0.95]`.
pub fn random_physical_rates(rng: &mut impl Rng) -> RateSet {
    let ge0 = rng.gen_range(0.2..2.0);
    let ga0 = rng.gen_range(0.0..1.5);
    RateSet::new(
        ge0,
        ge0 * rng.gen_range(-0.95..0.95),
        ga0,
        ga0 * rng.gen_range(-0.95..0.95),
    )
}

/// Random state with only diagonal entries and a `ρ₂₃` coherence.
pub fn random_block_state(rng: &mut impl Rng) -> DensityMatrix {
    let mut p: Vec<f64> = (0..4).map(|_| rng.gen_range(0.0..1.0)).collect();
    let s: f64 = p.iter().sum();
    p.iter_mut().for_each(|x| *x /= s);
    let coh = Complex64::from_polar(
        (p[1] * p[2]).sqrt() * rng.gen_range(0.0..1.0),
        rng.gen_range(0.0..std::f64::consts::TAU),
    );
    let mut m = ComplexMatrix::diagonal(&p.iter().map(|&x| Complex64::new(x, 0.0)).collect::<Vec<_>>());
    m[(1, 2)] = coh;
    m[(2, 1)] = coh.conj();
    DensityMatrix::new(m).expect("valid by construction")
}

/// Magnet environments covering both sides of the absorption threshold,
/// zero and finite temperature, and several coupling ratios.
fn magnet_grid() -> Vec<(SystemParams, CouplingParams, MagnetParams)> {
    let mut out = Vec::new();
    for b in [0.5, 0.8, 1.0, 1.05, 1.1, 1.2, 1.5] {
        for r in [0.0, 0.05, 0.5, 1.0, 2.0, 5.0, 10.0] {
            for ratio in [0.05, 0.135, 1.0, 7.0] {
                for (t, shift) in [(0.0, 9.0), (0.3, 0.2), (1.0, 1.0)] {
                    out.push((
                        SystemParams { delta: 1.0, separation: r },
                        CouplingParams::from_ratio(ratio),
                        MagnetParams::reduced(b, t, -b - shift),
                    ));
                }
            }
        }
    }
    out
}

fn kms_suite() -> Result<Vec<CheckReport>> {
    let mut t = Tally::new("kms", "correlation-ratio", 1e-10);
    for b in [0.8, 1.0, 1.3] {
        for shift in [0.05, 0.5, 3.0] {
            for temp in [0.05, 0.3, 1.0, 4.0] {
                let p = MagnetParams::reduced(b, temp, -b - shift);
                for frac in [0.1, 0.5, 0.9] {
                    for r in [0.0, 0.3, 1.7, 4.2] {
                        for ch in Channel::ALL {
                            t.record(kms_verify(ch, frac * b, r, &p)?);
                        }
                    }
                }
            }
        }
    }
    Ok(vec![t.finish()])
}

fn psd_suite(rng: &mut ChaCha8Rng) -> Result<Vec<CheckReport>> {
    let mut margins = Tally::new("psd", "magnet-rate-margins", 1e-12);
    let mut corr = Tally::new("psd", "correlation-matrix", 1e-12);
    for (sys, cpl, mag) in magnet_grid() {
        let psd = validate_psd(&magnet_rates(&sys, &cpl, &mag)?);
        margins.record((-psd.margin_e).max(-psd.margin_a).max(0.0));
        for ch in Channel::ALL {
            for f in [corr_plus, corr_minus] {
                let local = f(ch, sys.delta, 0.0, &mag)?;
                let nonlocal = f(ch, sys.delta, sys.separation, &mag)?;
                let m = ComplexMatrix::from_real(2, 2, &[local, nonlocal, nonlocal, local])?;
                let low = hermitian_eig(&m)?.values[0];
                corr.record((-low).max(0.0));
            }
        }
    }
    let mut spectrum = Tally::new("psd", "liouvillian-spectrum", 1e-10);
    for _ in 0..50 {
        let l = build_liouvillian(&random_physical_rates(rng), 1.0);
        for z in general_eig(l.matrix())? {
            spectrum.record(z.re.max(0.0));
        }
    }
    Ok(vec![margins.finish(), corr.finish(), spectrum.finish()])
}

fn detailed_balance_suite() -> Result<Vec<CheckReport>> {
    let mut residual = Tally::new("detailed-balance", "pair-residual", 1e-12);
    let mut gibbs = Tally::new("detailed-balance", "steady-equals-gibbs", 1e-8);
    let mut conc = Tally::new("detailed-balance", "thermal-concurrence", 1e-9);
    for kt in [-5.0, -1.0, -0.5, -0.2, 0.2, 0.5, 1.0, 5.0] {
        for f_e in [0.0, 0.3, 0.7, 0.99] {
            let rates = rates_from_temperatures(1.0, f_e, kt, kt, 1.0)?.rates;
            residual.record(detailed_balance_residual(&rates, kt)?);
            let ss = steady_state(&build_liouvillian(&rates, 1.0))?;
            gibbs.record(ss.state.matrix().max_abs_diff(DensityMatrix::gibbs(kt)?.matrix()));
            conc.record(concurrence(&ss.state)?.value);
        }
    }
    Ok(vec![residual.finish(), gibbs.finish(), conc.finish()])
}

fn oracle_suite(rng: &mut ChaCha8Rng) -> Result<Vec<CheckReport>> {
    let mut agree = Tally::new("oracles", "steady-three-routes", 1e-6);
    let mut jumps = Tally::new("oracles", "jump-reassembly", 1e-12);
    for _ in 0..20 {
        let rates = random_physical_rates(rng);
        let l = build_liouvillian(&rates, 1.0);
        let a = steady_state(&l)?;
        let b = steady_state_block(&rates)?;
        let c = steady_state_propagation(&l)?;
        agree.record(
            a.state
                .matrix()
                .max_abs_diff(b.state.matrix())
                .max(a.state.matrix().max_abs_diff(c.state.matrix())),
        );
        let diag = jump_decomposition(&rates)?.to_liouvillian();
        jumps.record(diag.matrix().max_abs_diff(build_dissipator(&rates).matrix()));
    }
    let mut block = Tally::new("oracles", "block-concurrence", 1e-9);
    for _ in 0..100 {
        let rho = random_block_state(rng);
        block.record((concurrence_block(&rho)? - concurrence(&rho)?.value).abs());
    }
    Ok(vec![agree.finish(), jumps.finish(), block.finish()])
}

/// Runs a suite; randomized checks draw from a generator seeded with `seed`.
pub fn cmd_verify(suite: Suite, seed: u64) -> Result<Vec<CheckReport>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    if matches!(suite, Suite::Kms | Suite::All) {
        out.extend(kms_suite()?);
    }
    if matches!(suite, Suite::Psd | Suite::All) {
        out.extend(psd_suite(&mut rng)?);
    }
    if matches!(suite, Suite::DetailedBalance | Suite::All) {
        out.extend(detailed_balance_suite()?);
    }
    if matches!(suite, Suite::Oracles | Suite::All) {
        out.extend(oracle_suite(&mut rng)?);
    }
    Ok(out)
}

pub fn write_reports(out: &mut impl Write, reports: &[CheckReport]) -> io::Result<()> {
    for r in reports {
        writeln!(out, "{r}")?;
    }
    let ok = reports.iter().all(CheckReport::passed);
    writeln!(out, "overall={}", if ok { "pass" } else { "fail" })
}
