// Copyright 2026 The qbath Authors
// SPDX-License-Identifier: Apache-2.0

//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each and
//! exits non-zero if any criterion fails.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qbath::entanglement::{concurrence, concurrence_block, singlet, spin_flip, werner};
use qbath::env::{
    corr_minus, corr_plus, kms_verify, magnet_rates, Channel, CouplingParams, MagnetParams,
    RateSet, SystemParams,
};
use qbath::lindblad::{
    build_dissipator, build_liouvillian, jump_decomposition, rates_from_temperatures,
    validate_psd, DensityMatrix,
};
use qbath::linalg::{general_eig, ComplexMatrix};
use qbath::steady::{spectral_gap, steady_state, steady_state_block, steady_state_propagation};
use qbath::sweep::{preset, run_sweep, write_csv, Axis, Mode, Params, SweepSpec};

const KT0_TARGET: f64 = -0.25;
const KT0_TOL: f64 = 1e-3;
const GIBBS_TOL: f64 = 1e-8;
const ZERO_CONCURRENCE: f64 = 1e-9;
const KMS_TOL: f64 = 1e-10;
const PSD_TOL: f64 = 1e-12;
const SPECTRUM_TOL: f64 = 1e-10;
const MIRROR_TOL: f64 = 1e-9;
const ROUTES_TOL: f64 = 1e-6;
const JUMP_TOL: f64 = 1e-12;
const CONCURRENCE_TOL: f64 = 1e-9;
const SEED: u64 = 0x5eed_0001;

type Outcome = Result<String, String>;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn magnet(b: f64, r: f64) -> Params {
    let mut p = Params::new(Mode::Magnet);
    p.set("b", b).unwrap();
    p.set("r", r).unwrap();
    p
}

fn magnet_concurrence(b: f64, r: f64) -> f64 {
    let rates = magnet(b, r).model().unwrap().rates().unwrap().rates;
    let ss = steady_state(&build_liouvillian(&rates, 1.0)).unwrap();
    concurrence(&ss.state).unwrap().value
}

fn pheno_concurrence(p: &Params) -> Option<f64> {
    let rates = p.model().ok()?.rates().ok()?;
    if !rates.psd.physical {
        return None;
    }
    let ss = steady_state(&build_liouvillian(&rates.rates, 1.0)).ok()?;
    Some(concurrence(&ss.state).ok()?.value)
}

/// Gibbs state of `H = (Δ/2)(σz⊗1 + 1⊗σz)` from the energies `(Δ, 0, 0, −Δ)`.
fn gibbs_oracle(kt: f64) -> ComplexMatrix {
    let w: Vec<f64> = [1.0, 0.0, 0.0, -1.0].iter().map(|e: &f64| (-e / kt).exp()).collect();
    let z: f64 = w.iter().sum();
    ComplexMatrix::diagonal(&w.iter().map(|x| c(x / z, 0.0)).collect::<Vec<_>>())
}

/// Wootters concurrence from the eigenvalues of `ρ (σy⊗σy) ρ* (σy⊗σy)`.
fn wootters_oracle(rho: &ComplexMatrix) -> f64 {
    let yy = ComplexMatrix::from_fn(4, 4, |i, j| match (i, j) {
        (0, 3) | (3, 0) => c(-1.0, 0.0),
        (1, 2) | (2, 1) => c(1.0, 0.0),
        _ => c(0.0, 0.0),
    });
    let r = rho.matmul(&yy).matmul(&rho.conj()).matmul(&yy);
    let mut l: Vec<f64> = general_eig(&r).unwrap().iter().map(|z| z.re.max(0.0).sqrt()).collect();
    l.sort_by(|a, b| b.total_cmp(a));
    (l[0] - l[1] - l[2] - l[3]).max(0.0)
}

fn random_state(rng: &mut ChaCha8Rng) -> ComplexMatrix {
    let w = ComplexMatrix::from_fn(4, 4, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    let rho = w.matmul(&w.adjoint());
    let t = rho.trace().re;
    rho.scale_real(1.0 / t)
}

fn random_su2(rng: &mut ChaCha8Rng) -> ComplexMatrix {
    let (a, b, g): (f64, f64, f64) = (rng.gen_range(0.0..6.3), rng.gen_range(0.0..3.2), rng.gen_range(0.0..6.3));
    let (x, y) = (Complex64::from_polar(1.0, a), Complex64::from_polar(1.0, g));
    let (cb, sb) = ((b / 2.0).cos(), (b / 2.0).sin());
    ComplexMatrix::from_vec(2, 2, vec![x * cb, -y.conj() * sb, y * sb, x.conj() * cb]).unwrap()
}

fn kt0_from_ratio() -> Outcome {
    let r = magnet(1.0, 0.5).model().unwrap().rates().unwrap();
    let kt0 = r.kt0.ok_or("no local temperature")?;
    // Γe(0)/Γa(0) = ratio² at b = Δ and T_E = 0, so kT(0)/Δ = 1/(2 ln ratio).
    let closed = 1.0 / (2.0 * 0.135f64.ln());
    let detail = format!("kT0 = {kt0:.6}, closed form {closed:.6}, target {KT0_TARGET} ± {KT0_TOL}");
    if (kt0 - KT0_TARGET).abs() <= KT0_TOL && (kt0 - closed).abs() <= 1e-12 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn detailed_balance() -> Outcome {
    let (mut gibbs, mut conc) = (0.0f64, 0.0f64);
    for kt in [-5.0, -1.0, -0.5, -0.2, 0.2, 0.5, 1.0, 5.0] {
        for f_e in [0.0, 0.3, 0.7, 0.99] {
            let rates = rates_from_temperatures(1.0, f_e, kt, kt, 1.0).unwrap().rates;
            let ss = steady_state(&build_liouvillian(&rates, 1.0)).unwrap();
            gibbs = gibbs.max(ss.state.matrix().max_abs_diff(&gibbs_oracle(kt)));
            conc = conc.max(concurrence(&ss.state).unwrap().value);
        }
    }
    let detail = format!("max |ρ − Gibbs| = {gibbs:.2e}, max C = {conc:.2e}");
    if gibbs <= GIBBS_TOL && conc <= ZERO_CONCURRENCE {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn generalized_kms() -> Outcome {
    let (mut worst, mut worst_lib, mut cases) = (0.0f64, 0.0f64, 0usize);
    for b in [0.7, 1.0, 1.4] {
        for shift in [0.02, 0.4, 2.5] {
            for t in [0.05, 0.3, 1.0, 5.0] {
                let p = MagnetParams::reduced(b, t, -b - shift);
                for frac in [-0.8, -0.3, 0.2, 0.6, 0.95] {
                    let omega = frac * b;
                    for r in [0.0, 0.4, 1.3, 3.7, 8.0] {
                        for ch in Channel::ALL {
                            let plus = corr_plus(ch, omega, r, &p).unwrap();
                            if plus == 0.0 {
                                continue;
                            }
                            let minus = corr_minus(ch, omega, r, &p).unwrap();
                            let n = match ch {
                                Channel::Conserving => 1.0,
                                Channel::NonConserving => -1.0,
                            };
                            let boltzmann = (-(omega - n * p.mu) / t).exp();
                            worst = worst.max((minus / plus - boltzmann).abs() / boltzmann.max(1.0));
                            worst_lib = worst_lib.max(kms_verify(ch, omega, r, &p).unwrap());
                            cases += 1;
                        }
                    }
                }
            }
        }
    }
    let detail = format!("{cases} cases, oracle residual {worst:.2e}, library residual {worst_lib:.2e}");
    if cases > 0 && worst <= KMS_TOL && worst_lib <= KMS_TOL {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn psd_constraints() -> Outcome {
    let (mut margin, mut corr, mut spec) = (f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    let mut physical = Vec::new();
    for b in [0.5, 0.9, 1.0, 1.1, 1.3, 2.0] {
        for r in [0.0, 0.05, 0.5, 2.0, 5.0, 12.0] {
            for ratio in [0.1, 0.135, 1.0, 4.0] {
                for (t, shift) in [(0.0, 10.0 - 1.0), (0.2, 0.1), (1.5, 2.0)] {
                    let p = MagnetParams::reduced(b, t, -b - shift);
                    let sys = SystemParams { delta: 1.0, separation: r };
                    let g = magnet_rates(&sys, &CouplingParams::from_ratio(ratio), &p).unwrap();
                    margin = margin
                        .min(g.gamma_e_local - g.gamma_e_nonlocal.abs())
                        .min(g.gamma_a_local - g.gamma_a_nonlocal.abs());
                    if validate_psd(&g).physical {
                        physical.push(g);
                    }
                    for ch in Channel::ALL {
                        for f in [corr_plus, corr_minus] {
                            let (c0, cr) = (f(ch, 1.0, 0.0, &p).unwrap(), f(ch, 1.0, r, &p).unwrap());
                            // Eigenvalues of [[c0, cr], [cr, c0]].
                            corr = corr.min(c0 - cr.abs());
                        }
                    }
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for _ in 0..50 {
        let ge0 = rng.gen_range(0.1..2.0);
        let ga0 = rng.gen_range(0.0..2.0);
        physical.push(RateSet::new(ge0, ge0 * rng.gen_range(-1.0..1.0), ga0, ga0 * rng.gen_range(-1.0..1.0)));
    }
    for g in &physical {
        for z in general_eig(build_liouvillian(g, 1.0).matrix()).unwrap() {
            spec = spec.max(z.re);
        }
    }
    let detail = format!(
        "min Γ(0) − |Γ(r)| = {margin:.2e}, min correlation eigenvalue = {corr:.2e}, max Re λ = {spec:.2e} over {} generators",
        physical.len()
    );
    if margin >= -PSD_TOL && corr >= -PSD_TOL && spec <= SPECTRUM_TOL {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn kt0_grid() -> Vec<f64> {
    (1..=5000).map(|i| i as f64 * 1e-3).collect()
}

fn peak_emission(f_e: f64) -> f64 {
    let mut peak = 0.0f64;
    for kt0 in kt0_grid().into_iter().flat_map(|t| [t, -t]) {
        let mut p = Params::new(Mode::Phenomenological);
        p.set("f_e", f_e).unwrap();
        p.set("kTr", 0.2).unwrap();
        p.set("kT0", kt0).unwrap();
        if let Some(c) = pheno_concurrence(&p) {
            peak = peak.max(c);
        }
    }
    peak
}

fn peak_absorption(f_a: f64) -> f64 {
    let mut peak = 0.0f64;
    for kt0 in kt0_grid().into_iter().flat_map(|t| [-t, t]) {
        let mut p = Params::new(Mode::Phenomenological);
        p.unset("f_e").unwrap();
        p.set("f_a", f_a).unwrap();
        p.set("kTr", -0.2).unwrap();
        p.set("kT0", kt0).unwrap();
        if let Some(c) = pheno_concurrence(&p) {
            peak = peak.max(c);
        }
    }
    peak
}

fn threshold() -> Outcome {
    let strong = peak_emission(0.99);
    let weak = peak_emission(0.5);
    let mirrored = peak_absorption(0.99);
    let detail = format!(
        "peak C: f_e = 0.99 → {strong:.6}, f_e = 0.5 → {weak:.2e}, mirrored f_a = 0.99 → {mirrored:.6} (Δ = {:.2e})",
        (strong - mirrored).abs()
    );
    if strong > 0.0 && weak <= ZERO_CONCURRENCE && (strong - mirrored).abs() <= MIRROR_TOL {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn temperature_quadrants() -> Outcome {
    let p = preset("temperature-map").unwrap();
    let mut params = Params::new(p.mode);
    for (k, v) in p.fixed {
        params.set(k, *v).unwrap();
    }
    let spec = SweepSpec::new(params, p.axis1.parse().unwrap(), p.axis2.parse().unwrap()).unwrap();
    let rows = run_sweep(&spec, 4);
    let (mut mixed, mut same, mut counted) = (0.0f64, 0.0f64, 0usize);
    for row in &rows {
        let Some(conc) = &row.result.concurrence else { continue };
        counted += 1;
        if (row.x > 0.0) == (row.y > 0.0) {
            same = same.max(conc.value);
        } else {
            mixed = mixed.max(conc.value);
        }
    }
    let detail = format!("{counted} physical points, max C mixed-sign = {mixed:.2e}, same-sign = {same:.4}");
    if mixed <= ZERO_CONCURRENCE && same > 0.0 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn magnet_map() -> Outcome {
    let near = magnet_concurrence(1.0, 0.5);
    let far = magnet_concurrence(1.3, 2.0);
    let far_rates = magnet(1.3, 2.0).model().unwrap().rates().unwrap().rates;
    let l = build_liouvillian(&far_rates, 1.0);
    let block = concurrence_block(&steady_state_block(&far_rates).unwrap().state).unwrap();
    let prop = concurrence(&steady_state_propagation(&l).unwrap().state).unwrap().value;
    let mut unit = true;
    let mut fractions = Vec::new();
    for r in [0.5, 2.0, 5.0] {
        let g = magnet(1.0, r).model().unwrap().rates().unwrap().rates;
        let f = g.gamma_a_nonlocal.abs() / g.gamma_a_local;
        unit &= f == 1.0;
        fractions.push(f);
    }
    let detail = format!(
        "C(b=1.0, r=0.5) = {near:.4}; C(b=1.3, r=2) = {far:.3e} (block {block:.3e}, RK4 {prop:.3e}, \
         Γe(r)/Γe(0) = {:.4}); |Γa(r)|/Γa(0) at b=1.0 = {fractions:?}",
        far_rates.gamma_e_nonlocal / far_rates.gamma_e_local
    );
    if near > 0.0 && far <= ZERO_CONCURRENCE && unit {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn relaxation_trend() -> Outcome {
    let gap = |r: f64| {
        let g = magnet(1.1, r).model().unwrap().rates().unwrap().rates;
        spectral_gap(&build_liouvillian(&g, 1.0)).unwrap().gap
    };
    let (g_short, g_long) = (gap(0.05), gap(1.0));
    let (c_near, c_far) = (magnet_concurrence(1.1, 0.5), magnet_concurrence(1.1, 5.0));
    let detail = format!(
        "gap(r=0.05) = {g_short:.3e} < gap(r=1) = {g_long:.3e}; C(r=0.5) = {c_near:.4} > C(r=5) = {c_far:.2e}"
    );
    if g_short < g_long && c_near > c_far {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 9);
    let (mut routes, mut jumps, mut n) = (0.0f64, 0.0f64, 0usize);
    while n < 50 {
        let ge0 = rng.gen_range(0.2..2.0);
        let ga0 = rng.gen_range(0.05..1.5);
        let g = RateSet::new(ge0, ge0 * rng.gen_range(-0.95..0.95), ga0, ga0 * rng.gen_range(-0.95..0.95));
        let l = build_liouvillian(&g, 1.0);
        let a = steady_state(&l).unwrap();
        if a.is_degenerate() {
            continue;
        }
        let b = steady_state_block(&g).unwrap();
        let p = steady_state_propagation(&l).unwrap();
        routes = routes
            .max(a.state.matrix().max_abs_diff(b.state.matrix()))
            .max(a.state.matrix().max_abs_diff(p.state.matrix()))
            .max(b.state.matrix().max_abs_diff(p.state.matrix()));
        let direct = build_dissipator(&g);
        jumps = jumps.max(jump_decomposition(&g).unwrap().to_liouvillian().matrix().max_abs_diff(direct.matrix()));
        n += 1;
    }
    let detail = format!("{n} rate sets, route disagreement {routes:.2e}, jump reassembly {jumps:.2e}");
    if routes <= ROUTES_TOL && jumps <= JUMP_TOL {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn concurrence_correctness() -> Outcome {
    let s = concurrence(&singlet()).unwrap().value;
    let mixed = concurrence(&DensityMatrix::maximally_mixed()).unwrap().value;
    let w = werner(0.5).unwrap();
    let (wl, wo) = (concurrence(&w).unwrap().value, wootters_oracle(w.matrix()));
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 10);
    let mut block = 0.0f64;
    for _ in 0..100 {
        let mut p: Vec<f64> = (0..4).map(|_| rng.gen_range(0.0..1.0)).collect();
        let t: f64 = p.iter().sum();
        p.iter_mut().for_each(|x| *x /= t);
        let z = Complex64::from_polar((p[1] * p[2]).sqrt() * rng.gen_range(0.0..1.0), rng.gen_range(0.0..6.3));
        let mut m = ComplexMatrix::diagonal(&p.iter().map(|&x| c(x, 0.0)).collect::<Vec<_>>());
        m[(1, 2)] = z;
        m[(2, 1)] = z.conj();
        let rho = DensityMatrix::new(m).unwrap();
        let general = concurrence(&rho).unwrap().value;
        block = block
            .max((concurrence_block(&rho).unwrap() - general).abs())
            .max((wootters_oracle(rho.matrix()) - general).abs());
    }
    let mut invariance = 0.0f64;
    let mut oracle = 0.0f64;
    for _ in 0..50 {
        let rho = DensityMatrix::new(random_state(&mut rng)).unwrap();
        let u = random_su2(&mut rng).kron(&random_su2(&mut rng));
        let before = concurrence(&rho).unwrap().value;
        invariance = invariance.max((concurrence(&rho.conjugated(&u)).unwrap().value - before).abs());
        oracle = oracle.max((wootters_oracle(rho.matrix()) - before).abs());
    }
    // Spin flip acts as an involution.
    let flip = spin_flip().matmul(&spin_flip()).max_abs_diff(&ComplexMatrix::identity(4));
    let detail = format!(
        "singlet {s:.12}, I/4 {mixed:.1e}, Werner(0.5) {wl:.12} (oracle {wo:.12}), block {block:.1e}, \
         local unitary {invariance:.1e}, oracle on random states {oracle:.1e}"
    );
    let ok = (s - 1.0).abs() <= CONCURRENCE_TOL
        && mixed <= CONCURRENCE_TOL
        && (wl - 0.25).abs() <= CONCURRENCE_TOL
        && (wo - 0.25).abs() <= CONCURRENCE_TOL
        && block <= CONCURRENCE_TOL
        && invariance <= CONCURRENCE_TOL
        && oracle <= 1e-7
        && flip == 0.0;
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn csv(spec: &SweepSpec, workers: usize) -> Vec<u8> {
    let mut out = Vec::new();
    write_csv(spec, &run_sweep(spec, workers), &mut out).unwrap();
    out
}

fn determinism() -> Outcome {
    let mut pheno = Params::new(Mode::Phenomenological);
    pheno.set("f_e", 0.95).unwrap();
    let specs = [
        SweepSpec::new(
            pheno,
            Axis::new("kT0", -1.0, 1.0, 13).unwrap(),
            Axis::new("kTr", -0.8, 0.9, 11).unwrap(),
        )
        .unwrap(),
        SweepSpec::new(
            Params::new(Mode::Magnet),
            Axis::new("b", 0.9, 1.3, 5).unwrap(),
            Axis::new("r", 0.0, 4.0, 9).unwrap(),
        )
        .unwrap(),
    ];
    let mut bytes = 0;
    for spec in &specs {
        let reference = csv(spec, 1);
        for workers in [2, 3, 8] {
            if csv(spec, workers) != reference {
                return Err(format!("CSV differs between 1 and {workers} workers"));
            }
        }
        bytes += reference.len();
    }
    Ok(format!("{bytes} bytes identical for 1, 2, 3 and 8 workers"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("local temperature from coupling ratio", kt0_from_ratio),
        ("detailed balance gives Gibbs steady state", detailed_balance),
        ("channel-resolved KMS relation", generalized_kms),
        ("positivity constraints", psd_constraints),
        ("entanglement threshold and mirror symmetry", threshold),
        ("no entanglement for opposite-sign temperatures", temperature_quadrants),
        ("magnet map structure", magnet_map),
        ("relaxation gap and concurrence trend", relaxation_trend),
        ("three steady-state routes and jump form agree", oracle_equivalence),
        ("concurrence correctness", concurrence_correctness),
        ("sweep output independent of worker count", determinism),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
