// Copyright 2026 The qbath Authors
// SPDX-License-Identifier: Apache-2.0

//! Single-point commands with `key=value` reports.

use std::io::{self, Write};

use super::grid::{fmt_float, solve_point, write_metadata, Solved};
use super::params::{Params, ResolvedRates};
use crate::error::{Error, Result};
use crate::lindblad::build_liouvillian;
use crate::steady::{spectral_gap, steady_state_block, GapResult};

fn opt(x: Option<f64>) -> String {
    x.map(fmt_float).unwrap_or_default()
}

fn write_rates(out: &mut impl Write, r: &ResolvedRates) -> io::Result<()> {
    let g = &r.rates;
    writeln!(out, "physical={}", r.psd.physical as u8)?;
    writeln!(out, "gamma_e_local={}", fmt_float(g.gamma_e_local))?;
    writeln!(out, "gamma_e_nonlocal={}", fmt_float(g.gamma_e_nonlocal))?;
    writeln!(out, "gamma_a_local={}", fmt_float(g.gamma_a_local))?;
    writeln!(out, "gamma_a_nonlocal={}", fmt_float(g.gamma_a_nonlocal))?;
    writeln!(out, "kT0={}", opt(r.kt0))?;
    writeln!(out, "kTr={}", opt(r.ktr))?;
    writeln!(out, "fraction_e={}", opt(r.nonlocal_fraction_e()))?;
    writeln!(out, "fraction_a={}", opt(r.nonlocal_fraction_a()))?;
    writeln!(out, "margin_e={}", fmt_float(r.psd.margin_e))?;
    writeln!(out, "margin_a={}", fmt_float(r.psd.margin_a))
}

#[derive(Debug, Clone)]
pub struct RatesReport {
    pub params: Params,
    pub rates: ResolvedRates,
}

impl RatesReport {
    pub fn write(&self, out: &mut impl Write) -> io::Result<()> {
        write_metadata(out, "rates", &self.params)?;
        write_rates(out, &self.rates)
    }
}

/// Rates, effective temperatures, nonlocal fractions and physicality.
pub fn cmd_rates(params: &Params) -> Result<RatesReport> {
    Ok(RatesReport {
        params: params.clone(),
        rates: params.model()?.rates()?,
    })
}

#[derive(Debug, Clone)]
pub struct SteadyReport {
    pub params: Params,
    pub rates: ResolvedRates,
    /// Empty for unphysical parameters.
    pub solved: Option<Solved>,
    /// Largest entrywise difference between the block and nullspace solutions;
    /// `None` when the steady state is degenerate.
    pub block_discrepancy: Option<f64>,
}

impl SteadyReport {
    pub fn write(&self, out: &mut impl Write) -> io::Result<()> {
        write_metadata(out, "steady", &self.params)?;
        write_rates(out, &self.rates)?;
        let Some(s) = &self.solved else {
            return Ok(());
        };
        let ss = &s.steady;
        writeln!(out, "method={}", ss.method.as_str())?;
        writeln!(out, "multiplicity={}", ss.multiplicity)?;
        writeln!(out, "residual={}", fmt_float(ss.residual))?;
        writeln!(out, "block_discrepancy={}", opt(self.block_discrepancy))?;
        writeln!(out, "concurrence={}", fmt_float(s.concurrence.value))?;
        let l: Vec<String> = s.concurrence.lambdas.iter().map(|x| fmt_float(*x)).collect();
        writeln!(out, "lambdas={}", l.join(","))?;
        writeln!(out, "gap={}", fmt_float(s.gap.gap))?;
        writeln!(out, "zero_count={}", s.gap.zero_count)?;
        writeln!(out, "no_decay={}", s.gap.no_decay as u8)?;
        writeln!(out, "purity={}", fmt_float(ss.state.purity()))?;
        for i in 0..4 {
            for j in 0..4 {
                let z = ss.state.entry(i, j);
                writeln!(out, "rho_{}{}={},{}", i + 1, j + 1, fmt_float(z.re), fmt_float(z.im))?;
            }
        }
        Ok(())
    }
}

/// Steady state by nullspace, cross-checked against the block solve.
pub fn cmd_steady(params: &Params) -> Result<SteadyReport> {
    let rates = params.model()?.rates()?;
    if !rates.psd.physical {
        return Ok(SteadyReport {
            params: params.clone(),
            rates,
            solved: None,
            block_discrepancy: None,
        });
    }
    let solved = solve_point(&rates)?;
    let block_discrepancy = if solved.steady.is_degenerate() {
        None
    } else {
        let blk = steady_state_block(&rates.rates)?;
        Some(blk.state.matrix().max_abs_diff(solved.steady.state.matrix()))
    };
    Ok(SteadyReport {
        params: params.clone(),
        rates,
        solved: Some(solved),
        block_discrepancy,
    })
}

#[derive(Debug, Clone)]
pub struct GapReport {
    pub params: Params,
    pub rates: ResolvedRates,
    pub gap: GapResult,
}

impl GapReport {
    pub fn write(&self, out: &mut impl Write) -> io::Result<()> {
        write_metadata(out, "gap", &self.params)?;
        write_rates(out, &self.rates)?;
        writeln!(out, "gap={}", fmt_float(self.gap.gap))?;
        writeln!(out, "zero_count={}", self.gap.zero_count)?;
        writeln!(out, "no_decay={}", self.gap.no_decay as u8)?;
        let mut spec = self.gap.spectrum.clone();
        spec.sort_by(|a, b| b.re.total_cmp(&a.re).then(a.im.total_cmp(&b.im)));
        for (k, z) in spec.iter().enumerate() {
            writeln!(out, "eigenvalue_{}={},{}", k + 1, fmt_float(z.re), fmt_float(z.im))?;
        }
        Ok(())
    }
}

/// Spectrum of the full generator, zero count and gap. Unphysical parameters
/// are refused.
pub fn cmd_gap(params: &Params) -> Result<GapReport> {
    let rates = params.model()?.rates()?;
    if !rates.psd.physical {
        return Err(Error::Unphysical {
            margin_e: rates.psd.margin_e,
            margin_a: rates.psd.margin_a,
        });
    }
    Ok(GapReport {
        params: params.clone(),
        gap: spectral_gap(&build_liouvillian(&rates.rates, 1.0))?,
        rates,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sweep::params::Mode;

    fn text(f: impl FnOnce(&mut Vec<u8>) -> io::Result<()>) -> String {
        let mut buf = Vec::new();
        f(&mut buf).unwrap();
        String::from_utf8(buf).unwrap()
    }

    fn value(report: &str, key: &str) -> String {
        report
            .lines()
            .find_map(|l| l.strip_prefix(&format!("{key}=")))
            .unwrap_or_else(|| panic!("missing {key}"))
            .to_string()
    }

    #[test]
    fn rates_at_threshold_field() {
        let mut p = Params::new(Mode::Magnet);
        p.set("b", 1.0).unwrap();
        p.set("r", 3.0).unwrap();
        let out = text(|b| cmd_rates(&p).unwrap().write(b));
        assert_eq!(value(&out, "fraction_a").parse::<f64>().unwrap(), 1.0);
        assert_eq!(value(&out, "physical"), "1");
    }

    #[test]
    fn rates_below_absorption_threshold() {
        let mut p = Params::new(Mode::Magnet);
        p.set("b", 0.5).unwrap();
        let r = cmd_rates(&p).unwrap();
        assert_eq!(r.rates.rates.gamma_a_local, 0.0);
        assert_eq!(r.rates.rates.gamma_a_nonlocal, 0.0);
        let out = text(|b| r.write(b));
        assert_eq!(value(&out, "fraction_a"), "");
        assert_eq!(value(&out, "kT0").parse::<f64>().unwrap(), 0.0);
    }

    #[test]
    fn thermal_line_report() {
        let mut p = Params::new(Mode::Phenomenological);
        for (k, v) in [("kT0", 0.7), ("kTr", 0.7), ("f_e", 0.6)] {
            p.set(k, v).unwrap();
        }
        let rep = cmd_steady(&p).unwrap();
        let out = text(|b| rep.write(b));
        assert!(value(&out, "concurrence").parse::<f64>().unwrap() <= 1e-9);
        assert!(value(&out, "block_discrepancy").parse::<f64>().unwrap() <= 1e-8);
        assert_eq!(out.lines().filter(|l| l.starts_with("rho_")).count(), 16);
    }

    #[test]
    fn entangled_and_separable_points() {
        let mut p = Params::new(Mode::Phenomenological);
        p.set("kT0", 0.3).unwrap();
        assert!(cmd_steady(&p).unwrap().solved.unwrap().concurrence.value > 0.0);
        p.set("f_e", 0.5).unwrap();
        assert!(cmd_steady(&p).unwrap().solved.unwrap().concurrence.value <= 1e-9);
    }

    #[test]
    fn unphysical_steady_is_reported_without_solve() {
        let mut p = Params::new(Mode::Phenomenological);
        p.set("kT0", 0.05).unwrap();
        let rep = cmd_steady(&p).unwrap();
        assert!(rep.solved.is_none());
        let out = text(|b| rep.write(b));
        assert_eq!(value(&out, "physical"), "0");
        assert!(!out.contains("concurrence="));
        assert!(matches!(cmd_gap(&p), Err(Error::Unphysical { .. })));
    }

    #[test]
    fn gap_report_lists_spectrum() {
        let p = Params::new(Mode::Phenomenological);
        let out = text(|b| cmd_gap(&p).unwrap().write(b));
        assert_eq!(out.lines().filter(|l| l.starts_with("eigenvalue_")).count(), 16);
        assert!(value(&out, "gap").parse::<f64>().unwrap() > 0.0);
    }
}
