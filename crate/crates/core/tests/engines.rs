use approx::assert_abs_diff_eq;
use num_complex::Complex64;
use proptest::prelude::*;

use quantumness::fock::{
    amplify_fock, attenuate_fock, classicalize_fock_auto, loss_kraus_decomposition, make_mixture,
    required_amplifier_margin, wigner_s_fock,
};
use quantumness::gaussian::{
    make_squeezed_thermal, make_thermal, wigner_s_gaussian, OrderedGaussian,
};
use quantumness::{ChannelSpec, FockDiagonalState, GaussianState};

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (n - j) as f64 / (j + 1) as f64)
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|j| j as f64).product()
}

/// `L_n(x)` from its explicit finite sum.
fn laguerre(n: usize, x: f64) -> f64 {
    (0..=n)
        .map(|k| binomial(n, k) * (-x).powi(k as i32) / factorial(k))
        .sum()
}

/// s-ordered quasiprobability of `|n>`.
fn number_state_ordered(n: usize, s: f64, r: f64) -> f64 {
    let r2 = r * r;
    2.0 / (1.0 - s)
        * ((s + 1.0) / (s - 1.0)).powi(n as i32)
        * (-2.0 * r2 / (1.0 - s)).exp()
        * laguerre(n, 4.0 * r2 / (1.0 - s * s))
}

fn weights_strategy() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.01f64..1.0, 1..6).prop_map(|w| {
        let total: f64 = w.iter().sum();
        w.into_iter().map(|x| x / total).collect()
    })
}

#[test]
fn fock_wigner_matches_explicit_laguerre_sum() {
    for n in 0..=6 {
        let state = FockDiagonalState::number(n);
        for s in [0.0, -0.5, -1.5, -2.0] {
            for i in 0..40 {
                let r = 0.1 * i as f64;
                let got = wigner_s_fock(&state, s, r).unwrap();
                assert_abs_diff_eq!(got, number_state_ordered(n, s, r), epsilon = 1e-12);
            }
        }
    }
}

#[test]
fn husimi_of_number_state_is_poissonian() {
    // Q_n(alpha) = e^{-|alpha|^2} |alpha|^{2n} / n!
    for n in 0..5 {
        let state = FockDiagonalState::number(n);
        for i in 0..30 {
            let r: f64 = 0.1 * i as f64;
            let want = (-r * r).exp() * r.powi(2 * n as i32) / factorial(n);
            assert_abs_diff_eq!(
                wigner_s_fock(&state, -1.0, r).unwrap(),
                want,
                epsilon = 1e-13
            );
        }
    }
}

#[test]
fn thermal_engines_agree() {
    for nbar in [0.0, 0.3, 1.0, 3.0] {
        let g = OrderedGaussian::new(&make_thermal(nbar).unwrap(), 0.0).unwrap();
        let f = FockDiagonalState::thermal(nbar, 200).unwrap();
        for i in 0..50 {
            let r = 0.08 * i as f64;
            assert_abs_diff_eq!(
                g.eval(0.0, r),
                wigner_s_fock(&f, 0.0, r).unwrap(),
                epsilon = 1e-10
            );
        }
    }
}

#[test]
fn classicalized_number_states_match_s_shift() {
    for n in 0..=5 {
        let out = classicalize_fock_auto(&FockDiagonalState::number(n)).unwrap();
        assert!(out.tail_mass_bound() < 1e-9);
        for i in 0..60 {
            let r = 0.1 * i as f64;
            let got = wigner_s_fock(&out, 0.0, r).unwrap();
            assert_abs_diff_eq!(got, number_state_ordered(n, -2.0, r), epsilon = 1e-9);
        }
    }
}

#[test]
fn amplifier_margin_bounds_the_tail() {
    let state = FockDiagonalState::number(3);
    let margin = required_amplifier_margin(&state, 2.0).unwrap();
    let out = amplify_fock(&state, 2.0, margin).unwrap();
    assert!(out.tail_mass_bound() <= 1e-10);
    assert!(amplify_fock(&state, 2.0, 0).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn squeezed_thermal_is_physical(nbar in 0.0f64..5.0, r in 0.0f64..2.0, theta in 0.0f64..6.3) {
        let s = make_squeezed_thermal(nbar, r, theta).unwrap();
        let det = s.cov().determinant();
        prop_assert!(det >= 1.0 / 16.0 - 1e-12);
        prop_assert!((det - (0.5 * nbar + 0.25).powi(2)).abs() < 1e-9 * (1.0 + det));
        let onset = 0.5 * (2.0 * nbar + 1.0).ln();
        prop_assume!((r - onset).abs() > 1e-9);
        prop_assert_eq!(s.is_quantum(), r > onset);
    }

    #[test]
    fn classicalizer_adds_half_identity(nbar in 0.0f64..3.0, r in 0.0f64..1.5, theta in 0.0f64..3.2, re in -2.0f64..2.0, im in -2.0f64..2.0) {
        let s = make_squeezed_thermal(nbar, r, theta).unwrap()
            .apply(&ChannelSpec::displacement(Complex64::new(re, im)).unwrap());
        let out = s.apply(&ChannelSpec::classicalizer());
        prop_assert!((out.cov() - s.cov() - nalgebra::Matrix2::identity() * 0.5).abs().max() < 1e-12);
        prop_assert!((out.mean() - s.mean()).norm() < 1e-12);
    }

    #[test]
    fn classicalized_gaussian_wigner_is_shifted_ordering(nbar in 0.0f64..2.0, r in 0.0f64..1.2, x in -2.0f64..2.0, y in -2.0f64..2.0) {
        let s = make_squeezed_thermal(nbar, r, 0.4).unwrap();
        let out = s.apply(&ChannelSpec::classicalizer());
        let p = Complex64::new(x, y);
        let lhs = wigner_s_gaussian(&out, 0.0, p).unwrap();
        let rhs = wigner_s_gaussian(&s, -2.0, p).unwrap();
        prop_assert!((lhs - rhs).abs() < 1e-12);
    }

    #[test]
    fn fock_channels_preserve_mass_and_scale_photon_number(w in weights_strategy(), l in 0.05f64..0.95, g in 1.05f64..3.0) {
        let s = make_mixture(&w).unwrap();
        let n = s.mean_photon_number();
        let lossy = attenuate_fock(&s, l).unwrap();
        prop_assert!((lossy.total_mass() - 1.0).abs() < 1e-12);
        prop_assert!((lossy.mean_photon_number() - l * n).abs() < 1e-10);
        let margin = required_amplifier_margin(&s, g).unwrap();
        let amp = amplify_fock(&s, g, margin).unwrap();
        prop_assert!((amp.total_mass() + amp.tail_mass_bound() - 1.0).abs() < 1e-9);
        prop_assert!((amp.mean_photon_number() - (g * n + g - 1.0)).abs() < 1e-6);
    }

    #[test]
    fn attenuator_matches_binomial_law(n in 0usize..12, l in 0.01f64..0.99) {
        let out = attenuate_fock(&FockDiagonalState::number(n), l).unwrap();
        for m in 0..=n {
            let want = binomial(n, m) * l.powi(m as i32) * (1.0 - l).powi((n - m) as i32);
            prop_assert!((out.weight(m) - want).abs() < 1e-13);
        }
    }

    #[test]
    fn kraus_branches_average_to_the_lossy_state(w in weights_strategy(), l in 0.05f64..0.95) {
        let s = make_mixture(&w).unwrap();
        let branches = loss_kraus_decomposition(&s, l).unwrap();
        let total: f64 = branches.iter().map(|(p, _)| p).sum();
        prop_assert!((total - 1.0).abs() < 1e-12);
        let lossy = attenuate_fock(&s, l).unwrap();
        for m in 0..=lossy.cutoff() {
            let avg: f64 = branches.iter().map(|(p, b)| p * b.weight(m)).sum();
            prop_assert!((avg - lossy.weight(m)).abs() < 1e-12);
        }
    }

    #[test]
    fn vacuum_is_fixed_by_loss(l in 0.01f64..0.99) {
        let g = GaussianState::vacuum().apply(&ChannelSpec::attenuator(l).unwrap());
        prop_assert_eq!(g, GaussianState::vacuum());
        let f = attenuate_fock(&FockDiagonalState::vacuum(), l).unwrap();
        prop_assert_eq!(f.weight(0), 1.0);
    }
}
