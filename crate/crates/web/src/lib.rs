// Copyright 2026 The qbath Authors
// SPDX-License-Identifier: Apache-2.0

//! WebAssembly bindings for the browser demo. Every function returns a flat
//! `Float64Array`; unphysical or failed points are `NaN`.

use qbath::sweep::{evaluate, run_sweep, Axis, Mode, Params, SweepRow, SweepSpec};
use wasm_bindgen::prelude::*;

const MAX_POINTS: usize = 400;

fn sweep(params: Params, a1: Axis, a2: Axis) -> Result<Vec<SweepRow>, JsError> {
    let spec = SweepSpec::new(params, a1, a2).map_err(|e| JsError::new(&e.to_string()))?;
    Ok(run_sweep(&spec, 1))
}

fn axis(name: &str, min: f64, max: f64, n: usize) -> Result<Axis, JsError> {
    Axis::new(name, min, max, n.clamp(2, MAX_POINTS)).map_err(|e| JsError::new(&e.to_string()))
}

fn concurrence(row: &SweepRow) -> f64 {
    row.result.concurrence.map_or(f64::NAN, |c| c.value)
}

/// Concurrence over `kT0 × kTr ∈ [-span, span]²` at nonlocal emission
/// fraction `f_e`, row-major with `kT0` as the outer index.
#[wasm_bindgen]
pub fn temperature_map(f_e: f64, span: f64, n: usize) -> Result<Vec<f64>, JsError> {
    let mut p = Params::new(Mode::Phenomenological);
    p.set("f_e", f_e).map_err(|e| JsError::new(&e.to_string()))?;
    let rows = sweep(p, axis("kT0", -span, span, n)?, axis("kTr", -span, span, n)?)?;
    Ok(rows.iter().map(concurrence).collect())
}

/// Concurrence of the pumped magnet over `b ∈ [b_min, b_max]` (outer) and
/// `r ∈ [r_min, r_max]` (inner) for coupling ratio `ratio`.
#[wasm_bindgen]
pub fn magnet_map(
    ratio: f64,
    b_min: f64,
    b_max: f64,
    r_min: f64,
    r_max: f64,
    n: usize,
) -> Result<Vec<f64>, JsError> {
    let mut p = Params::new(Mode::Magnet);
    p.set("ratio", ratio).map_err(|e| JsError::new(&e.to_string()))?;
    let rows = sweep(p, axis("b", b_min, b_max, n)?, axis("r", r_min, r_max, n)?)?;
    Ok(rows.iter().map(concurrence).collect())
}

/// Triples `(r, gap, concurrence)` along `r ∈ [r_min, r_max]` at field `b`.
#[wasm_bindgen]
pub fn relaxation_curve(b: f64, r_min: f64, r_max: f64, n: usize) -> Result<Vec<f64>, JsError> {
    let js = |e: qbath::Error| JsError::new(&e.to_string());
    let mut out = Vec::new();
    for r in axis("r", r_min, r_max, n)?.values() {
        let mut p = Params::new(Mode::Magnet);
        p.set("b", b).map_err(js)?;
        p.set("r", r).map_err(js)?;
        let point = evaluate(&p.model().map_err(js)?);
        let gap = point.gap.as_ref().map_or(f64::NAN, |g| g.gap);
        out.extend([r, gap, point.concurrence.map_or(f64::NAN, |c| c.value)]);
    }
    Ok(out)
}
