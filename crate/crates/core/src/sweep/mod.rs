// Copyright 2026 The qbath Authors
// SPDX-License-Identifier: Apache-2.0

//! Parameter handling, grid sweeps, single-point reports and verification suites
//! behind the `qbath` command line.

pub mod grid;
pub mod params;
pub mod report;
pub mod verify;

pub use grid::{evaluate, preset, run_sweep, write_csv, Axis, PointResult, Preset, SweepRow, SweepSpec, PRESETS};
pub use params::{parse_config, Mode, Model, Params, REGISTRY};
pub use report::{cmd_gap, cmd_rates, cmd_steady};
pub use verify::{cmd_verify, Suite};
