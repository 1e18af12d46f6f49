// Copyright 2026 The qbath Authors
// SPDX-License-Identifier: Apache-2.0

//! Parameter registry, key=value configuration and model resolution.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::env::{
    effective_temperature, magnet_rates, CouplingParams, MagnetParams, RateSet, SystemParams,
};
use crate::error::{Error, Result};
use crate::lindblad::{rates_from_temperatures, rates_from_temperatures_absorption, validate_psd, PsdCheck};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Mode {
    /// Rates given directly by a nonlocal fraction and two effective temperatures.
    Phenomenological,
    /// Rates computed from the pumped-magnet environment.
    Magnet,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Phenomenological => "phenomenological",
            Mode::Magnet => "magnet",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "phenomenological" | "pheno" => Ok(Mode::Phenomenological),
            "magnet" => Ok(Mode::Magnet),
            other => Err(Error::InvalidParameter(format!(
                "unknown mode `{other}`; expected `phenomenological` or `magnet`"
            ))),
        }
    }
}

/// One entry of the parameter registry.
#[derive(Debug, Clone, Copy)]
pub struct ParamDef {
    pub name: &'static str,
    pub mode: Mode,
    /// `None` for optional parameters that are unset by default.
    pub default: Option<f64>,
    pub help: &'static str,
}

/// Every parameter accepted on the command line, in config files and as a
/// sweep axis. Energies are in units of the qubit gap `Δ`, lengths in units
/// of `ℓ = sqrt(A s / Δ)`.
pub const REGISTRY: &[ParamDef] = &[
    ParamDef {
        name: "gamma0",
        mode: Mode::Phenomenological,
        default: Some(1.0),
        help: "local reference rate: Γe(0), or Γa(0) when f_a is set",
    },
    ParamDef {
        name: "f_e",
        mode: Mode::Phenomenological,
        default: Some(0.99),
        help: "nonlocal emission fraction Γe(r)/Γe(0) in [-1, 1]",
    },
    ParamDef {
        name: "f_a",
        mode: Mode::Phenomenological,
        default: None,
        help: "nonlocal absorption fraction Γa(r)/Γa(0); when set, rates are anchored on absorption",
    },
    ParamDef {
        name: "kT0",
        mode: Mode::Phenomenological,
        default: Some(0.3),
        help: "local effective temperature kT(0)/Δ, nonzero, may be negative or ±inf",
    },
    ParamDef {
        name: "kTr",
        mode: Mode::Phenomenological,
        default: Some(0.2),
        help: "nonlocal effective temperature kT(r)/Δ, nonzero, may be negative or ±inf",
    },
    ParamDef {
        name: "sign",
        mode: Mode::Phenomenological,
        default: Some(1.0),
        help: "relative sign (±1) of the two nonlocal rates",
    },
    ParamDef {
        name: "b",
        mode: Mode::Magnet,
        default: Some(1.0),
        help: "external field b/Δ",
    },
    ParamDef {
        name: "r",
        mode: Mode::Magnet,
        default: Some(0.5),
        help: "qubit separation r/ℓ",
    },
    ParamDef {
        name: "ratio",
        mode: Mode::Magnet,
        default: Some(0.135),
        help: "coupling ratio |λ1/λ-1|",
    },
    ParamDef {
        name: "theta",
        mode: Mode::Magnet,
        default: None,
        help: "tilt angle (rad) of an exchange coupling; when set, replaces ratio",
    },
    ParamDef {
        name: "T_E",
        mode: Mode::Magnet,
        default: Some(0.0),
        help: "magnet temperature k T_E/Δ, >= 0",
    },
    ParamDef {
        name: "mu",
        mode: Mode::Magnet,
        default: Some(-10.0),
        help: "spin accumulation μ/Δ, below -b when T_E > 0",
    },
];

pub fn lookup(name: &str) -> Result<&'static ParamDef> {
    REGISTRY.iter().find(|d| d.name == name).ok_or_else(|| {
        let known: Vec<&str> = REGISTRY.iter().map(|d| d.name).collect();
        Error::InvalidParameter(format!(
            "unknown parameter `{name}`; known parameters: {}",
            known.join(", ")
        ))
    })
}

/// Parses a float, accepting `inf`, `+inf` and `-inf`.
pub fn parse_value(name: &str, raw: &str) -> Result<f64> {
    raw.trim().parse::<f64>().map_err(|_| {
        Error::InvalidParameter(format!("parameter `{name}`: cannot parse `{raw}` as a number"))
    })
}

/// Parses `key=value` lines. `#` starts a comment; blank lines are skipped.
pub fn parse_config(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = parse_assignment(line).map_err(|_| {
            Error::InvalidParameter(format!(
                "config line {}: expected `key=value`, got `{line}`",
                lineno + 1
            ))
        })?;
        out.push((k, v));
    }
    Ok(out)
}

/// Splits `key=value` at the first `=`.
pub fn parse_assignment(s: &str) -> Result<(String, String)> {
    match s.split_once('=') {
        Some((k, v)) if !k.trim().is_empty() => Ok((k.trim().to_string(), v.trim().to_string())),
        _ => Err(Error::InvalidParameter(format!("expected `key=value`, got `{s}`"))),
    }
}

/// Explicitly set parameter values plus the mode; defaults fill the rest.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Params {
    mode: Option<Mode>,
    values: BTreeMap<&'static str, f64>,
}

impl Params {
    pub fn new(mode: Mode) -> Self {
        Self {
            mode: Some(mode),
            values: BTreeMap::new(),
        }
    }

    /// Mode, inferred from the parameters set when not given explicitly.
    pub fn mode(&self) -> Mode {
        if let Some(m) = self.mode {
            return m;
        }
        let magnet = self
            .values
            .keys()
            .any(|k| lookup(k).map(|d| d.mode == Mode::Magnet).unwrap_or(false));
        if magnet {
            Mode::Magnet
        } else {
            Mode::Phenomenological
        }
    }

    pub fn set_mode(&mut self, mode: Mode) {
        self.mode = Some(mode);
    }

    pub fn set(&mut self, name: &str, value: f64) -> Result<()> {
        let def = lookup(name)?;
        self.values.insert(def.name, value);
        Ok(())
    }

    pub fn unset(&mut self, name: &str) -> Result<()> {
        let def = lookup(name)?;
        self.values.remove(def.name);
        Ok(())
    }

    /// Applies a textual assignment; `mode` is handled here too.
    /// A value of `unset` clears an optional parameter.
    pub fn assign(&mut self, key: &str, raw: &str) -> Result<()> {
        if key == "mode" {
            self.mode = Some(raw.parse()?);
            return Ok(());
        }
        if raw == "unset" {
            return self.unset(key);
        }
        let v = parse_value(key, raw)?;
        self.set(key, v)
    }

    pub fn is_set(&self, name: &str) -> bool {
        self.values.contains_key(name)
    }

    /// Explicit value or registry default.
    pub fn get(&self, name: &str) -> Result<Option<f64>> {
        let def = lookup(name)?;
        Ok(self.values.get(def.name).copied().or(def.default))
    }

    fn require(&self, name: &str) -> Result<f64> {
        self.get(name)?
            .ok_or_else(|| Error::InvalidParameter(format!("parameter `{name}` is required")))
    }

    /// All parameters of the active mode with their resolved values.
    pub fn resolved(&self) -> Vec<(&'static str, Option<f64>)> {
        let mode = self.mode();
        REGISTRY
            .iter()
            .filter(|d| d.mode == mode)
            .map(|d| (d.name, self.values.get(d.name).copied().or(d.default)))
            .collect()
    }

    /// Resolves to a concrete model, checking mode consistency.
    pub fn model(&self) -> Result<Model> {
        let mode = self.mode();
        for k in self.values.keys() {
            let def = lookup(k)?;
            if def.mode != mode {
                return Err(Error::InvalidParameter(format!(
                    "parameter `{k}` belongs to {} mode but mode is {mode}; set mode={}",
                    def.mode, def.mode
                )));
            }
        }
        match mode {
            Mode::Phenomenological => {
                let absorption = self.is_set("f_a");
                if absorption && self.is_set("f_e") {
                    return Err(Error::InvalidParameter(
                        "set either f_e (emission anchored) or f_a (absorption anchored), not both".into(),
                    ));
                }
                Ok(Model::Phenomenological {
                    gamma0: self.require("gamma0")?,
                    fraction: self.require(if absorption { "f_a" } else { "f_e" })?,
                    anchor: if absorption {
                        Anchor::Absorption
                    } else {
                        Anchor::Emission
                    },
                    kt0: self.require("kT0")?,
                    ktr: self.require("kTr")?,
                    sign: self.require("sign")?,
                })
            }
            Mode::Magnet => {
                let couplings = match self.get("theta")? {
                    Some(theta) => CouplingParams::from_angle(1.0, theta),
                    None => CouplingParams::from_ratio(self.require("ratio")?),
                };
                Ok(Model::Magnet {
                    system: SystemParams {
                        delta: 1.0,
                        separation: self.require("r")?,
                    },
                    couplings,
                    magnet: MagnetParams::reduced(
                        self.require("b")?,
                        self.require("T_E")?,
                        self.require("mu")?,
                    ),
                })
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Anchor {
    Emission,
    Absorption,
}

/// Fully resolved parameter point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Model {
    Phenomenological {
        gamma0: f64,
        fraction: f64,
        anchor: Anchor,
        kt0: f64,
        ktr: f64,
        sign: f64,
    },
    Magnet {
        system: SystemParams,
        couplings: CouplingParams,
        magnet: MagnetParams,
    },
}

/// Rates of a model point with their effective temperatures.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResolvedRates {
    pub rates: RateSet,
    pub psd: PsdCheck,
    /// `kT(0)/Δ`, `None` when both local rates vanish.
    pub kt0: Option<f64>,
    /// `kT(r)/Δ`, `None` when both nonlocal rates vanish.
    pub ktr: Option<f64>,
}

impl ResolvedRates {
    /// `|Γe(r)|/Γe(0)`
    pub fn nonlocal_fraction_e(&self) -> Option<f64> {
        let r = &self.rates;
        (r.gamma_e_local != 0.0).then(|| r.gamma_e_nonlocal.abs() / r.gamma_e_local)
    }

    /// `|Γa(r)|/Γa(0)`
    pub fn nonlocal_fraction_a(&self) -> Option<f64> {
        let r = &self.rates;
        (r.gamma_a_local != 0.0).then(|| r.gamma_a_nonlocal.abs() / r.gamma_a_local)
    }
}

impl Model {
    pub fn rates(&self) -> Result<ResolvedRates> {
        match *self {
            Model::Phenomenological {
                gamma0,
                fraction,
                anchor,
                kt0,
                ktr,
                sign,
            } => {
                let t = match anchor {
                    Anchor::Emission => rates_from_temperatures(gamma0, fraction, kt0, ktr, sign)?,
                    Anchor::Absorption => {
                        rates_from_temperatures_absorption(gamma0, fraction, kt0, ktr, sign)?
                    }
                };
                Ok(ResolvedRates {
                    rates: t.rates,
                    psd: t.psd,
                    kt0: Some(kt0),
                    ktr: Some(ktr),
                })
            }
            Model::Magnet {
                system,
                couplings,
                magnet,
            } => {
                let rates = magnet_rates(&system, &couplings, &magnet)?;
                let temp = |e: f64, a: f64| {
                    effective_temperature(e, a, system.delta)
                        .ok()
                        .map(|t| t.kt_over_delta())
                };
                Ok(ResolvedRates {
                    rates,
                    psd: validate_psd(&rates),
                    kt0: temp(rates.gamma_e_local, rates.gamma_a_local),
                    ktr: temp(rates.gamma_e_nonlocal, rates.gamma_a_nonlocal),
                })
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_names_are_unique() {
        let mut names: Vec<&str> = REGISTRY.iter().map(|d| d.name).collect();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), REGISTRY.len());
    }

    #[test]
    fn config_parsing() {
        let cfg = parse_config("# comment\nmode = magnet\n\nb=1.1 # trailing\nr= 2\n").unwrap();
        assert_eq!(
            cfg,
            vec![
                ("mode".into(), "magnet".into()),
                ("b".into(), "1.1".into()),
                ("r".into(), "2".into())
            ]
        );
        let err = parse_config("b 1.0").unwrap_err().to_string();
        assert!(err.contains("line 1"), "{err}");
    }

    #[test]
    fn later_assignments_override() {
        let mut p = Params::default();
        for (k, v) in parse_config("kT0=0.5\nkT0=0.7").unwrap() {
            p.assign(&k, &v).unwrap();
        }
        p.assign("kTr", "-inf").unwrap();
        assert_eq!(p.get("kT0").unwrap(), Some(0.7));
        assert_eq!(p.get("kTr").unwrap(), Some(f64::NEG_INFINITY));
        assert_eq!(p.get("f_e").unwrap(), Some(0.99));
        assert_eq!(p.mode(), Mode::Phenomenological);
    }

    #[test]
    fn unknown_and_malformed_values() {
        let mut p = Params::default();
        assert!(p.assign("nope", "1").is_err());
        assert!(p.assign("b", "abc").is_err());
        assert!(p.assign("mode", "quantum").is_err());
    }

    #[test]
    fn mode_mixing_is_rejected() {
        let mut p = Params::new(Mode::Phenomenological);
        p.set("b", 1.0).unwrap();
        assert!(p.model().is_err());
        let mut q = Params::default();
        q.set("f_e", 0.5).unwrap();
        q.set("f_a", 0.5).unwrap();
        assert!(q.model().is_err());
    }

    #[test]
    fn magnet_mode_is_inferred() {
        let mut p = Params::default();
        p.set("b", 1.2).unwrap();
        assert_eq!(p.mode(), Mode::Magnet);
        assert!(matches!(p.model().unwrap(), Model::Magnet { .. }));
    }

    #[test]
    fn local_temperature_from_coupling_ratio() {
        let mut p = Params::new(Mode::Magnet);
        p.set("r", 0.0).unwrap();
        let res = p.model().unwrap().rates().unwrap();
        assert!((res.kt0.unwrap() + 0.25).abs() <= 1e-3);
        assert!(res.psd.physical);
    }

    #[test]
    fn absorption_anchor_selected_by_f_a() {
        let mut p = Params::default();
        p.assign("f_a", "0.9").unwrap();
        p.assign("kT0", "-0.8").unwrap();
        p.assign("kTr", "-0.3").unwrap();
        let res = p.model().unwrap().rates().unwrap();
        assert_eq!(res.rates.gamma_a_local, 1.0);
        assert!((res.rates.gamma_a_nonlocal - 0.9).abs() <= 1e-15);
    }
}
