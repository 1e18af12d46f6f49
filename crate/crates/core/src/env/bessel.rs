// Copyright 2026 The qbath Authors
// SPDX-License-Identifier: Apache-2.0

//! Bessel function of the first kind, order zero.

use std::f64::consts::{FRAC_PI_4, PI};

const SERIES_MAX: f64 = 8.0;
const RECURRENCE_MAX: f64 = 25.0;

/// `J0(x)` with absolute error below `1e-12` on the whole real line.
///
/// Power series for `|x| <= 8`, Miller's backward recurrence up to 25 and the
/// Hankel asymptotic expansion beyond, where its smallest term is below `e^{-2x}`.
pub fn bessel_j0(x: f64) -> f64 {
    let x = x.abs();
    if x <= SERIES_MAX {
        series(x)
    } else if x <= RECURRENCE_MAX {
        backward_recurrence(x)
    } else {
        asymptotic(x)
    }
}

fn series(x: f64) -> f64 {
    let q = -0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k = 1.0;
    loop {
        term *= q / (k * k);
        sum += term;
        if term.abs() < 1e-17 * sum.abs().max(1e-3) {
            break;
        }
        k += 1.0;
    }
    sum
}

fn backward_recurrence(x: f64) -> f64 {
    // Start well above x; J_k decays super-exponentially once k > x.
    let mut order = (x as usize + 40) & !1;
    let mut j_next = 0.0;
    let mut j_cur = 1e-30;
    let mut j0 = 0.0;
    let mut norm = 0.0;
    while order > 0 {
        let j_prev = 2.0 * order as f64 / x * j_cur - j_next;
        j_next = j_cur;
        j_cur = j_prev;
        order -= 1;
        if order % 2 == 0 {
            norm += if order == 0 { j_cur } else { 2.0 * j_cur };
        }
        if order == 0 {
            j0 = j_cur;
        }
        if j_cur.abs() > 1e200 {
            j_cur *= 1e-200;
            j_next *= 1e-200;
            norm *= 1e-200;
        }
    }
    j0 / norm
}

fn asymptotic(x: f64) -> f64 {
    let mut p = 1.0;
    let mut q = 0.0;
    let mut a = 1.0;
    let mut last = f64::INFINITY;
    for k in 1..200 {
        let odd = (2 * k - 1) as f64;
        a *= -odd * odd / (8.0 * k as f64 * x);
        if a.abs() >= last || a.abs() < 1e-18 {
            break;
        }
        last = a.abs();
        // (-1)^floor(k/2) applied to the alternating a_k / x^k terms.
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            p += sign * a;
        } else {
            q += sign * a;
        }
    }
    let chi = x - FRAC_PI_4;
    (2.0 / (PI * x)).sqrt() * (p * chi.cos() - q * chi.sin())
}
