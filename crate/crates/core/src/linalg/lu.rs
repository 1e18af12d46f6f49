// Copyright 2026 The qbath Authors
// SPDX-License-Identifier: Apache-2.0

//! LU factorization with partial pivoting.

use num_complex::Complex64;

use super::{ComplexMatrix, ONE};
use crate::error::{Error, Result};

/// Relative pivot magnitude below which a system is treated as singular.
const PIVOT_TOL: f64 = 1e-13;

struct Lu {
    lu: ComplexMatrix,
    perm: Vec<usize>,
    sign: f64,
}

fn factor(a: &ComplexMatrix, strict: bool) -> Result<Lu> {
    let n = a.require_square()?;
    let mut lu = a.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut sign = 1.0;
    let scale = a.max_abs();
    for k in 0..n {
        let (p, mag) = (k..n)
            .map(|i| (i, lu[(i, k)].norm()))
            .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        if strict && (mag <= PIVOT_TOL * scale || mag == 0.0) {
            return Err(Error::SingularPivot { column: k, pivot: mag });
        }
        if p != k {
            for j in 0..n {
                let tmp = lu[(k, j)];
                lu[(k, j)] = lu[(p, j)];
                lu[(p, j)] = tmp;
            }
            perm.swap(k, p);
            sign = -sign;
        }
        let pivot = lu[(k, k)];
        if pivot.norm() == 0.0 {
            continue;
        }
        for i in k + 1..n {
            let f = lu[(i, k)] / pivot;
            lu[(i, k)] = f;
            for j in k + 1..n {
                let u = lu[(k, j)];
                lu[(i, j)] -= f * u;
            }
        }
    }
    Ok(Lu { lu, perm, sign })
}

/// Solves `A x = b`, failing on pivots that are negligible relative to `max|A|`.
pub fn solve(a: &ComplexMatrix, b: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = a.require_square()?;
    if b.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: b.len() });
    }
    let Lu { lu, perm, .. } = factor(a, true)?;
    let mut x: Vec<Complex64> = perm.iter().map(|&p| b[p]).collect();
    for i in 0..n {
        for j in 0..i {
            let l = lu[(i, j)];
            let xj = x[j];
            x[i] -= l * xj;
        }
    }
    for i in (0..n).rev() {
        for j in i + 1..n {
            let u = lu[(i, j)];
            let xj = x[j];
            x[i] -= u * xj;
        }
        x[i] /= lu[(i, i)];
    }
    Ok(x)
}

pub fn determinant(a: &ComplexMatrix) -> Result<Complex64> {
    let n = a.require_square()?;
    let Lu { lu, sign, .. } = factor(a, false)?;
    Ok((0..n).fold(ONE * sign, |acc, i| acc * lu[(i, i)]))
}
