// Copyright 2026 The qbath Authors
// SPDX-License-Identifier: Apache-2.0

//! Point evaluation, parallel grid sweeps and CSV output.

use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use super::params::{lookup, parse_value, Mode, Model, Params, ResolvedRates};
use crate::entanglement::{concurrence, ConcurrenceResult};
use crate::error::{Error, Result};
use crate::lindblad::build_liouvillian;
use crate::steady::{spectral_gap, steady_state, GapResult, SteadyStateResult};

/// Everything computed at one parameter point. Result fields stay empty for
/// unphysical points and after failures.
#[derive(Debug, Clone, Default)]
pub struct PointResult {
    pub rates: Option<ResolvedRates>,
    pub steady: Option<SteadyStateResult>,
    pub concurrence: Option<ConcurrenceResult>,
    pub gap: Option<GapResult>,
    pub error: Option<String>,
}

impl PointResult {
    pub fn physical(&self) -> Option<bool> {
        self.rates.map(|r| r.psd.physical)
    }

    pub fn purity(&self) -> Option<f64> {
        self.steady.as_ref().map(|s| s.state.purity())
    }
}

/// Steady state, concurrence and gap of the full generator with `Δ = 1`.
pub fn evaluate(model: &Model) -> PointResult {
    let mut out = PointResult::default();
    let rates = match model.rates() {
        Ok(r) => r,
        Err(e) => {
            out.error = Some(e.to_string());
            return out;
        }
    };
    out.rates = Some(rates);
    if !rates.psd.physical {
        return out;
    }
    match solve_point(&rates) {
        Ok(s) => {
            out.steady = Some(s.steady);
            out.concurrence = Some(s.concurrence);
            out.gap = Some(s.gap);
        }
        Err(e) => out.error = Some(e.to_string()),
    }
    out
}

#[derive(Debug, Clone)]
pub struct Solved {
    pub steady: SteadyStateResult,
    pub concurrence: ConcurrenceResult,
    pub gap: GapResult,
}

/// Nullspace steady state, its concurrence and the gap of `H_S + D` with `Δ = 1`.
pub fn solve_point(rates: &ResolvedRates) -> Result<Solved> {
    let l = build_liouvillian(&rates.rates, 1.0);
    let steady = steady_state(&l)?;
    Ok(Solved {
        concurrence: concurrence(&steady.state)?,
        gap: spectral_gap(&l)?,
        steady,
    })
}

/// Linear grid `name:min:max:points`.
#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub name: &'static str,
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

impl Axis {
    pub fn new(name: &str, min: f64, max: f64, points: usize) -> Result<Self> {
        let def = lookup(name)?;
        if points < 2 {
            return Err(Error::InvalidParameter(format!(
                "axis `{name}` needs at least 2 points, got {points}"
            )));
        }
        if !min.is_finite() || !max.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "axis `{name}` bounds must be finite, got {min}..{max}"
            )));
        }
        Ok(Self {
            name: def.name,
            min,
            max,
            points,
        })
    }

    pub fn value(&self, i: usize) -> f64 {
        if i + 1 == self.points {
            self.max
        } else {
            self.min + (self.max - self.min) * i as f64 / (self.points - 1) as f64
        }
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.points).map(|i| self.value(i)).collect()
    }
}

impl FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let [name, min, max, n] = parts[..] else {
            return Err(Error::InvalidParameter(format!(
                "axis must look like name:min:max:points, got `{s}`"
            )));
        };
        let points = n.trim().parse::<usize>().map_err(|_| {
            Error::InvalidParameter(format!("axis `{name}`: point count `{n}` is not an integer"))
        })?;
        Axis::new(name.trim(), parse_value(name, min)?, parse_value(name, max)?, points)
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}:{}", self.name, self.min, self.max, self.points)
    }
}

/// Result columns, in default order.
pub const RESULT_COLUMNS: &[&str] = &[
    "gamma_e_local",
    "gamma_e_nonlocal",
    "gamma_a_local",
    "gamma_a_nonlocal",
    "kT0",
    "kTr",
    "concurrence",
    "gap",
    "physical",
    "multiplicity",
    "purity",
    "error",
];

#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub params: Params,
    pub axis1: Axis,
    pub axis2: Axis,
    pub columns: Vec<String>,
}

impl SweepSpec {
    /// Validated sweep with the default column set.
    pub fn new(params: Params, axis1: Axis, axis2: Axis) -> Result<Self> {
        let columns = default_columns(&axis1, &axis2);
        let spec = Self {
            params,
            axis1,
            axis2,
            columns,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Selects result columns; axis columns not listed are kept in front.
    pub fn with_columns(mut self, list: &str) -> Result<Self> {
        let picked: Vec<String> = list
            .split(',')
            .map(|c| c.trim().to_string())
            .filter(|c| !c.is_empty())
            .collect();
        let mut columns: Vec<String> = [self.axis1.name, self.axis2.name]
            .into_iter()
            .filter(|a| !picked.iter().any(|c| c == a))
            .map(str::to_string)
            .collect();
        columns.extend(picked);
        self.columns = columns;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if self.axis1.name == self.axis2.name {
            return Err(Error::InvalidParameter(format!(
                "the two axes must differ, both are `{}`",
                self.axis1.name
            )));
        }
        let mode = self.params.mode();
        for axis in [&self.axis1, &self.axis2] {
            let def = lookup(axis.name)?;
            if def.mode != mode {
                return Err(Error::InvalidParameter(format!(
                    "axis `{}` belongs to {} mode but mode is {mode}",
                    axis.name, def.mode
                )));
            }
        }
        if self.columns.is_empty() {
            return Err(Error::InvalidParameter("no output columns selected".into()));
        }
        for c in &self.columns {
            let known = RESULT_COLUMNS.contains(&c.as_str())
                || c == self.axis1.name
                || c == self.axis2.name;
            if !known {
                return Err(Error::InvalidParameter(format!(
                    "unknown column `{c}`; choose from the axis names and {}",
                    RESULT_COLUMNS.join(", ")
                )));
            }
        }
        self.point_params(self.axis1.value(0), self.axis2.value(0))
            .model()
            .map(|_| ())
    }

    pub fn point_params(&self, x: f64, y: f64) -> Params {
        let mut p = self.params.clone();
        p.set_mode(self.params.mode());
        p.set(self.axis1.name, x).expect("registered");
        p.set(self.axis2.name, y).expect("registered");
        p
    }

    pub fn len(&self) -> usize {
        self.axis1.points * self.axis2.points
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Axis values of the `k`-th point in row-major order over `(axis1, axis2)`.
    pub fn point(&self, k: usize) -> (f64, f64) {
        (
            self.axis1.value(k / self.axis2.points),
            self.axis2.value(k % self.axis2.points),
        )
    }
}

fn default_columns(a1: &Axis, a2: &Axis) -> Vec<String> {
    let mut out = vec![a1.name.to_string(), a2.name.to_string()];
    out.extend(
        RESULT_COLUMNS
            .iter()
            .filter(|c| **c != a1.name && **c != a2.name)
            .map(|c| c.to_string()),
    );
    out
}

#[derive(Debug, Clone)]
pub struct SweepRow {
    pub x: f64,
    pub y: f64,
    pub result: PointResult,
}

fn sweep_row(spec: &SweepSpec, k: usize) -> SweepRow {
    let (x, y) = spec.point(k);
    let result = match spec.point_params(x, y).model() {
        Ok(m) => evaluate(&m),
        Err(e) => PointResult {
            error: Some(e.to_string()),
            ..PointResult::default()
        },
    };
    SweepRow { x, y, result }
}

/// Evaluates every grid point on `workers` threads; rows come back in
/// row-major order whatever the worker count.
pub fn run_sweep(spec: &SweepSpec, workers: usize) -> Vec<SweepRow> {
    let n = spec.len();
    let workers = workers.clamp(1, n.max(1));
    if workers == 1 {
        return (0..n).map(|k| sweep_row(spec, k)).collect();
    }
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<SweepRow>>> = Mutex::new(vec![None; n]);
    std::thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| loop {
                let k = next.fetch_add(1, Ordering::Relaxed);
                if k >= n {
                    break;
                }
                let row = sweep_row(spec, k);
                slots.lock().expect("no poisoned workers")[k] = Some(row);
            });
        }
    });
    slots
        .into_inner()
        .expect("no poisoned workers")
        .into_iter()
        .map(|r| r.expect("every point evaluated"))
        .collect()
}

/// Round-trip float formatting with 17 significant digits.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_float).unwrap_or_default()
}

fn csv_escape(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Value of a named column for one row.
pub fn cell(spec: &SweepSpec, row: &SweepRow, column: &str) -> String {
    if column == spec.axis1.name {
        return fmt_float(row.x);
    }
    if column == spec.axis2.name {
        return fmt_float(row.y);
    }
    let r = &row.result;
    let rates = r.rates.map(|x| x.rates);
    match column {
        "gamma_e_local" => fmt_opt(rates.map(|x| x.gamma_e_local)),
        "gamma_e_nonlocal" => fmt_opt(rates.map(|x| x.gamma_e_nonlocal)),
        "gamma_a_local" => fmt_opt(rates.map(|x| x.gamma_a_local)),
        "gamma_a_nonlocal" => fmt_opt(rates.map(|x| x.gamma_a_nonlocal)),
        "kT0" => fmt_opt(r.rates.and_then(|x| x.kt0)),
        "kTr" => fmt_opt(r.rates.and_then(|x| x.ktr)),
        "concurrence" => fmt_opt(r.concurrence.map(|c| c.value)),
        "gap" => fmt_opt(r.gap.as_ref().map(|g| g.gap)),
        "physical" => r.physical().map(|p| (p as u8).to_string()).unwrap_or_default(),
        "multiplicity" => r
            .steady
            .as_ref()
            .map(|s| s.multiplicity.to_string())
            .unwrap_or_default(),
        "purity" => fmt_opt(r.purity()),
        "error" => csv_escape(r.error.as_deref().unwrap_or("")),
        other => unreachable!("column `{other}` passed validation"),
    }
}

/// `#`-prefixed metadata: version, mode, axes and every resolved parameter.
pub fn write_metadata(out: &mut impl Write, command: &str, params: &Params) -> io::Result<()> {
    writeln!(out, "# qbath {}", env!("CARGO_PKG_VERSION"))?;
    writeln!(out, "# command={command}")?;
    writeln!(out, "# mode={}", params.mode())?;
    for (name, value) in params.resolved() {
        match value {
            Some(v) => writeln!(out, "# {name}={v}")?,
            None => writeln!(out, "# {name}=unset")?,
        }
    }
    Ok(())
}

pub fn write_csv(spec: &SweepSpec, rows: &[SweepRow], out: &mut impl Write) -> io::Result<()> {
    write_metadata(out, "sweep", &spec.params)?;
    writeln!(out, "# axis1={}", spec.axis1)?;
    writeln!(out, "# axis2={}", spec.axis2)?;
    writeln!(out, "{}", spec.columns.join(","))?;
    for row in rows {
        let cells: Vec<String> = spec.columns.iter().map(|c| cell(spec, row, c)).collect();
        writeln!(out, "{}", cells.join(","))?;
    }
    Ok(())
}

/// Named sweep setups: `(name, description, mode, fixed parameters, axis1, axis2, columns)`.
pub struct Preset {
    pub name: &'static str,
    pub help: &'static str,
    pub mode: Mode,
    pub fixed: &'static [(&'static str, f64)],
    pub axis1: &'static str,
    pub axis2: &'static str,
    pub columns: Option<&'static str>,
}

pub const PRESETS: &[Preset] = &[
    Preset {
        name: "temperature-map",
        help: "concurrence over (kT0, kTr) at f_e = 0.99",
        mode: Mode::Phenomenological,
        fixed: &[("f_e", 0.99)],
        axis1: "kT0:-1:1:100",
        axis2: "kTr:-1:1:100",
        columns: None,
    },
    Preset {
        name: "threshold",
        help: "concurrence against kT0 at kTr = 0.2 for several f_e",
        mode: Mode::Phenomenological,
        fixed: &[("kTr", 0.2)],
        axis1: "f_e:0.59:0.99:5",
        axis2: "kT0:0.01:1.5:300",
        columns: None,
    },
    Preset {
        name: "magnet-map",
        help: "concurrence over (b, r) for the pumped magnet, |λ1/λ-1| = 0.135",
        mode: Mode::Magnet,
        fixed: &[("ratio", 0.135)],
        axis1: "b:1:1.3:31",
        axis2: "r:0.04:4:100",
        columns: None,
    },
    Preset {
        name: "nonlocal-temperature",
        help: "kT(r) against r for b = 1.0 and 1.2",
        mode: Mode::Magnet,
        fixed: &[("ratio", 0.135)],
        axis1: "b:1:1.2:2",
        axis2: "r:0.02:10:500",
        columns: Some("b,r,kT0,kTr,gamma_a_local,gamma_a_nonlocal,error"),
    },
    Preset {
        name: "relaxation",
        help: "spectral gap and concurrence against r for b = 1.0, 1.1, 1.2",
        mode: Mode::Magnet,
        fixed: &[("ratio", 0.135)],
        axis1: "b:1:1.2:3",
        axis2: "r:0.01:5:500",
        columns: Some("b,r,gap,concurrence,multiplicity,error"),
    },
];

pub fn preset(name: &str) -> Result<&'static Preset> {
    PRESETS.iter().find(|p| p.name == name).ok_or_else(|| {
        let names: Vec<&str> = PRESETS.iter().map(|p| p.name).collect();
        Error::InvalidParameter(format!(
            "unknown preset `{name}`; available: {}",
            names.join(", ")
        ))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(mode: Mode, a1: &str, a2: &str) -> SweepSpec {
        SweepSpec::new(Params::new(mode), a1.parse().unwrap(), a2.parse().unwrap()).unwrap()
    }

    #[test]
    fn axis_parsing() {
        let a: Axis = "kT0:-1:1:5".parse().unwrap();
        assert_eq!(a.values(), vec![-1.0, -0.5, 0.0, 0.5, 1.0]);
        assert_eq!(a.to_string(), "kT0:-1:1:5");
        assert!("kT0:-1:1:1".parse::<Axis>().is_err());
        assert!("kT0:-1:1".parse::<Axis>().is_err());
        assert!("zz:-1:1:3".parse::<Axis>().is_err());
        assert!("kT0:a:1:3".parse::<Axis>().is_err());
    }

    #[test]
    fn spec_validation() {
        let p = Params::new(Mode::Phenomenological);
        let same = SweepSpec::new(p.clone(), "kT0:0.1:1:2".parse().unwrap(), "kT0:0.1:1:2".parse().unwrap());
        assert!(same.is_err());
        let wrong_mode = SweepSpec::new(p.clone(), "b:1:2:2".parse().unwrap(), "kT0:0.1:1:2".parse().unwrap());
        assert!(wrong_mode.is_err());
        let s = spec(Mode::Phenomenological, "kT0:0.5:1:2", "kTr:0.1:0.2:3");
        assert!(s.clone().with_columns("kT0,foo").is_err());
        assert_eq!(s.clone().with_columns("kT0, concurrence").unwrap().columns, vec!["kTr", "kT0", "concurrence"]);
    }

    #[test]
    fn row_major_order() {
        let s = spec(Mode::Phenomenological, "kT0:0.5:1:2", "kTr:0.1:0.3:3");
        let pts: Vec<(f64, f64)> = (0..s.len()).map(|k| s.point(k)).collect();
        assert_eq!(pts[0], (0.5, 0.1));
        assert_eq!(pts[2], (0.5, 0.3));
        assert_eq!(pts[3], (1.0, 0.1));
    }

    #[test]
    fn unphysical_points_carry_no_results() {
        let s = spec(Mode::Phenomenological, "kT0:0.05:0.1:2", "kTr:0.2:0.3:2");
        let rows = run_sweep(&s, 2);
        for row in &rows {
            assert_eq!(row.result.physical(), Some(false));
            for c in ["concurrence", "gap", "multiplicity", "purity"] {
                assert_eq!(cell(&s, row, c), "");
            }
            assert_eq!(cell(&s, row, "physical"), "0");
        }
    }

    #[test]
    fn bad_points_are_recorded_not_fatal() {
        let s = spec(Mode::Phenomenological, "kT0:-1:1:3", "kTr:0.5:0.6:2");
        let rows = run_sweep(&s, 3);
        assert!(rows[2].result.error.as_deref().unwrap().contains("nonzero"));
        assert!(rows[0].result.error.is_none());
        assert!(rows[5].result.concurrence.is_some());
    }

    #[test]
    fn csv_layout() {
        let s = spec(Mode::Phenomenological, "kT0:0.5:1:2", "kTr:0.1:0.2:2");
        let mut buf = Vec::new();
        write_csv(&s, &run_sweep(&s, 1), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert!(lines[0].starts_with("# qbath "));
        let header = lines.iter().find(|l| !l.starts_with('#')).unwrap();
        assert!(header.starts_with("kT0,kTr,gamma_e_local"));
        assert_eq!(header.matches("kT0").count(), 1);
        assert_eq!(lines.iter().filter(|l| !l.starts_with('#')).count(), 5);
        assert!(text.contains("# f_e=0.99"));
        assert!(text.contains("# f_a=unset"));
    }

    #[test]
    fn float_format_round_trips() {
        for x in [0.1, 1.0 / 3.0, -2.5e-300, 6.02e23, f64::INFINITY] {
            assert_eq!(fmt_float(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn csv_escaping() {
        assert_eq!(csv_escape("plain"), "plain");
        assert_eq!(csv_escape("a, \"b\""), "\"a, \"\"b\"\"\"");
    }

    #[test]
    fn presets_are_valid() {
        for p in PRESETS {
            let mut params = Params::new(p.mode);
            for (k, v) in p.fixed {
                params.set(k, *v).unwrap();
            }
            let mut s = SweepSpec::new(params, p.axis1.parse().unwrap(), p.axis2.parse().unwrap()).unwrap();
            if let Some(c) = p.columns {
                s = s.with_columns(c).unwrap();
            }
            for axis in [&s.axis1, &s.axis2] {
                if axis.name.starts_with("kT") {
                    assert!(axis.values().iter().all(|v| *v != 0.0), "{} hits zero", p.name);
                }
            }
        }
        assert!(preset("nope").is_err());
    }
}
