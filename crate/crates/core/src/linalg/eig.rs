// Copyright 2026 The qbath Authors
// SPDX-License-Identifier: Apache-2.0

//! Eigenvalue solvers: cyclic Jacobi for Hermitian input, Hessenberg
//! reduction followed by single-shift complex QR for everything else.

use num_complex::Complex64;

use super::{ComplexMatrix, ONE, ZERO};
use crate::error::{Error, Result};

/// Eigendecomposition `A = V diag(values) V^H` of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEig {
    /// Eigenvalues in ascending order.
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors stored as columns, matching `values`.
    pub vectors: ComplexMatrix,
}

impl HermitianEig {
    /// `V diag(f(λ)) V^H`.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.values.len();
        let mut out = ComplexMatrix::zeros(n, n);
        for (k, &lam) in self.values.iter().enumerate() {
            let w = f(lam);
            if w == 0.0 {
                continue;
            }
            for i in 0..n {
                let vi = self.vectors[(i, k)] * w;
                for j in 0..n {
                    out[(i, j)] += vi * self.vectors[(j, k)].conj();
                }
            }
        }
        out
    }
}

/// Hermitian eigendecomposition by cyclic complex Jacobi rotations.
pub fn hermitian_eig(a: &ComplexMatrix) -> Result<HermitianEig> {
    let n = a.require_square()?;
    let scale = a.max_abs();
    let deviation = a.hermitian_deviation();
    if deviation > 1e-10 * scale {
        return Err(Error::NotHermitian { deviation });
    }
    if n == 0 {
        return Ok(HermitianEig {
            values: Vec::new(),
            vectors: ComplexMatrix::zeros(0, 0),
        });
    }

    let mut m = ComplexMatrix::from_fn(n, n, |i, j| (a[(i, j)] + a[(j, i)].conj()) * 0.5);
    let mut v = ComplexMatrix::identity(n);
    let total = m.frobenius();
    let target = 1e-15 * total;
    let max_sweeps = 100 * n;

    let off = |m: &ComplexMatrix| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += m[(i, j)].norm_sqr();
                }
            }
        }
        s.sqrt()
    };

    let mut sweeps = 0;
    while off(&m) > target {
        if sweeps == max_sweeps {
            return Err(Error::NoConvergence {
                algorithm: "hermitian Jacobi",
                iterations: sweeps,
                residual: off(&m),
            });
        }
        sweeps += 1;
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = m[(p, q)];
                let mag = apq.norm();
                if mag <= f64::MIN_POSITIVE || mag <= 1e-18 * total {
                    continue;
                }
                // Phase that makes the (p, q) entry real, then a real rotation.
                let phase = apq / mag;
                let app = m[(p, p)].re;
                let aqq = m[(q, q)].re;
                let theta = (aqq - app) / (2.0 * mag);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                // Columns of J: J[p,p]=c, J[q,p]=-s·conj(phase), J[p,q]=s, J[q,q]=c·conj(phase).
                let jpp = Complex64::new(c, 0.0);
                let jqp = -phase.conj() * s;
                let jpq = Complex64::new(s, 0.0);
                let jqq = phase.conj() * c;
                // m <- m J
                for i in 0..n {
                    let mip = m[(i, p)];
                    let miq = m[(i, q)];
                    m[(i, p)] = mip * jpp + miq * jqp;
                    m[(i, q)] = mip * jpq + miq * jqq;
                }
                // m <- J^H m
                for j in 0..n {
                    let mpj = m[(p, j)];
                    let mqj = m[(q, j)];
                    m[(p, j)] = jpp.conj() * mpj + jqp.conj() * mqj;
                    m[(q, j)] = jpq.conj() * mpj + jqq.conj() * mqj;
                }
                m[(p, q)] = ZERO;
                m[(q, p)] = ZERO;
                m[(p, p)] = Complex64::new(m[(p, p)].re, 0.0);
                m[(q, q)] = Complex64::new(m[(q, q)].re, 0.0);
                for i in 0..n {
                    let vip = v[(i, p)];
                    let viq = v[(i, q)];
                    v[(i, p)] = vip * jpp + viq * jqp;
                    v[(i, q)] = vip * jpq + viq * jqq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| m[(x, x)].re.total_cmp(&m[(y, y)].re));
    let values = order.iter().map(|&k| m[(k, k)].re).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok(HermitianEig { values, vectors })
}

/// Reduces `a` to upper Hessenberg form by Householder similarity transforms.
fn hessenberg(a: &ComplexMatrix) -> ComplexMatrix {
    let n = a.rows();
    let mut h = a.clone();
    for k in 0..n.saturating_sub(2) {
        let x: Vec<Complex64> = (k + 1..n).map(|i| h[(i, k)]).collect();
        let xnorm = super::vec_norm(&x);
        if xnorm == 0.0 {
            continue;
        }
        let phase = if x[0].norm() > 0.0 { x[0] / x[0].norm() } else { ONE };
        let alpha = -phase * xnorm;
        let mut v = x;
        v[0] -= alpha;
        let vnorm = super::vec_norm(&v);
        if vnorm == 0.0 {
            continue;
        }
        for z in v.iter_mut() {
            *z /= vnorm;
        }
        // h <- (I - 2vv^H) h on rows k+1..n
        for j in 0..n {
            let dot: Complex64 = v
                .iter()
                .enumerate()
                .map(|(r, vr)| vr.conj() * h[(k + 1 + r, j)])
                .sum();
            for (r, vr) in v.iter().enumerate() {
                h[(k + 1 + r, j)] -= vr * dot * 2.0;
            }
        }
        // h <- h (I - 2vv^H) on columns k+1..n
        for i in 0..n {
            let dot: Complex64 = v
                .iter()
                .enumerate()
                .map(|(c, vc)| h[(i, k + 1 + c)] * vc)
                .sum();
            for (c, vc) in v.iter().enumerate() {
                h[(i, k + 1 + c)] -= dot * vc.conj() * 2.0;
            }
        }
        for i in k + 2..n {
            h[(i, k)] = ZERO;
        }
    }
    h
}

/// Givens rotation `G = [[c, s], [-conj(s), c]]` with `G [a; b] = [r; 0]`.
fn givens(a: Complex64, b: Complex64) -> (f64, Complex64) {
    let an = a.norm();
    let bn = b.norm();
    if bn == 0.0 {
        return (1.0, ZERO);
    }
    if an == 0.0 {
        return (0.0, b.conj() / bn);
    }
    let r = an.hypot(bn);
    (an / r, (a / an) * b.conj() / r)
}

/// Eigenvalues of a general square matrix.
///
/// On non-convergence the eigenvalues deflated so far are returned inside
/// [`Error::PartialSpectrum`].
pub fn general_eig(a: &ComplexMatrix) -> Result<Vec<Complex64>> {
    let n = a.require_square()?;
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut h = hessenberg(a);
    let eps = f64::EPSILON;
    let hnorm = h.max_abs();
    let mut eig = vec![ZERO; n];
    let mut hi = n - 1;
    let mut iter_here = 0usize;
    let mut total_iter = 0usize;
    let cap = 100 * n;

    loop {
        if hi == 0 {
            eig[0] = h[(0, 0)];
            break;
        }
        // Locate the start of the unreduced trailing block.
        let mut l = hi;
        while l > 0 {
            let sub = h[(l, l - 1)].norm();
            let mut diag = h[(l, l)].norm() + h[(l - 1, l - 1)].norm();
            if diag == 0.0 {
                diag = hnorm;
            }
            if sub <= eps * diag || sub <= f64::MIN_POSITIVE {
                h[(l, l - 1)] = ZERO;
                break;
            }
            l -= 1;
        }
        if l == hi {
            eig[hi] = h[(hi, hi)];
            hi -= 1;
            iter_here = 0;
            continue;
        }
        if total_iter >= cap {
            let partial = eig[hi + 1..].to_vec();
            return Err(Error::PartialSpectrum {
                iterations: total_iter,
                found: partial,
            });
        }
        total_iter += 1;
        iter_here += 1;

        let shift = if iter_here % 11 == 10 {
            // Exceptional shift to break cycles.
            h[(hi, hi)] + Complex64::new(0.75 * h[(hi, hi - 1)].norm(), 0.0)
        } else {
            let a11 = h[(hi - 1, hi - 1)];
            let a12 = h[(hi - 1, hi)];
            let a21 = h[(hi, hi - 1)];
            let a22 = h[(hi, hi)];
            let half_tr = (a11 + a22) * 0.5;
            let disc = ((a11 - a22) * (a11 - a22) * 0.25 + a12 * a21).sqrt();
            let e1 = half_tr + disc;
            let e2 = half_tr - disc;
            if (e1 - a22).norm() <= (e2 - a22).norm() {
                e1
            } else {
                e2
            }
        };

        for i in l..=hi {
            h[(i, i)] -= shift;
        }
        let mut rotations = Vec::with_capacity(hi - l);
        for k in l..hi {
            let (c, s) = givens(h[(k, k)], h[(k + 1, k)]);
            for j in k..=hi {
                let x = h[(k, j)];
                let y = h[(k + 1, j)];
                h[(k, j)] = x * c + s * y;
                h[(k + 1, j)] = -s.conj() * x + y * c;
            }
            h[(k + 1, k)] = ZERO;
            rotations.push((c, s));
        }
        for (idx, &(c, s)) in rotations.iter().enumerate() {
            let k = l + idx;
            let top = (k + 2).min(hi);
            for i in l..=top {
                let x = h[(i, k)];
                let y = h[(i, k + 1)];
                h[(i, k)] = x * c + y * s.conj();
                h[(i, k + 1)] = -x * s + y * c;
            }
        }
        for i in l..=hi {
            h[(i, i)] += shift;
        }
    }
    Ok(eig)
}
