// Copyright 2026 The qbath Authors
// SPDX-License-Identifier: Apache-2.0

use num_complex::Complex64;
use proptest::prelude::*;

use qbath::entanglement::{concurrence, concurrence_block};
use qbath::env::RateSet;
use qbath::lindblad::{build_dissipator, build_liouvillian, jump_decomposition, validate_psd, DensityMatrix};
use qbath::linalg::{general_eig, ComplexMatrix};
use qbath::steady::{steady_state, steady_state_block};

fn physical_rates() -> impl Strategy<Value = RateSet> {
    (0.05f64..2.0, -1.0f64..=1.0, 0.0f64..2.0, -1.0f64..=1.0)
        .prop_map(|(ge, fe, ga, fa)| RateSet::new(ge, ge * fe, ga, ga * fa))
}

fn any_rates() -> impl Strategy<Value = RateSet> {
    (0.0f64..2.0, -2.0f64..2.0, 0.0f64..2.0, -2.0f64..2.0)
        .prop_map(|(a, b, c, d)| RateSet::new(a, b, c, d))
}

fn state() -> impl Strategy<Value = DensityMatrix> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 16).prop_map(|v| {
        let w = ComplexMatrix::from_vec(4, 4, v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect()).unwrap();
        let rho = w.matmul(&w.adjoint());
        let t = rho.trace().re;
        DensityMatrix::new(rho.scale_real(1.0 / t)).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn generator_preserves_trace(g in any_rates(), delta in 0.1f64..3.0) {
        let l = build_liouvillian(&g, delta);
        prop_assert!(l.trace_preservation_residual() <= 1e-12 * l.norm().max(1.0));
    }

    #[test]
    fn generator_preserves_hermiticity(g in any_rates(), rho in state()) {
        let out = build_liouvillian(&g, 1.0).apply(rho.matrix());
        prop_assert!(out.hermitian_deviation() <= 1e-12);
    }

    #[test]
    fn physical_spectrum_does_not_grow(g in physical_rates()) {
        prop_assert!(validate_psd(&g).physical);
        for z in general_eig(build_liouvillian(&g, 1.0).matrix()).unwrap() {
            prop_assert!(z.re <= 1e-10, "{z}");
        }
    }

    #[test]
    fn jump_form_reassembles(g in physical_rates()) {
        let diag = jump_decomposition(&g).unwrap().to_liouvillian();
        prop_assert!(diag.matrix().max_abs_diff(build_dissipator(&g).matrix()) <= 1e-12);
    }

    #[test]
    fn concurrence_is_bounded(rho in state()) {
        let c = concurrence(&rho).unwrap().value;
        prop_assert!((0.0..=1.0 + 1e-12).contains(&c));
    }

    #[test]
    fn steady_state_is_block_and_matches(g in physical_rates()) {
        prop_assume!(g.gamma_e_local > 0.1 && g.gamma_a_local > 0.1);
        let l = build_liouvillian(&g, 1.0);
        let ss = steady_state(&l).unwrap();
        prop_assume!(!ss.is_degenerate());
        let blk = steady_state_block(&g).unwrap();
        prop_assert!(ss.state.matrix().max_abs_diff(blk.state.matrix()) <= 1e-8);
        let c = concurrence(&ss.state).unwrap().value;
        prop_assert!((c - concurrence_block(&ss.state).unwrap()).abs() <= 1e-9);
    }
}
