//! The norm-based quantumness quantifier and its resource-theoretic checks.
//!
//! `N(rho) = || W^(s)_rho - W^(s)_{C(rho)} ||_p` under the measure
//! `d^2 alpha / pi`, the coherent baseline `N(|0>)`, and
//! `M(rho) = N(rho) - N(|0>)`, which is `<= 0` for every classical state.

use std::fmt;

use nalgebra::Vector2;

use crate::channel::ChannelSpec;
use crate::error::{check_param, Error, Result};
use crate::fock::{FockDiagonalState, OrderedFock};
use crate::gaussian::{GaussianState, OrderedGaussian};
use crate::quadrature::{
    integrate_plane_abs_pow, integrate_radial_abs_pow, principal_factor, DecayHint, Envelope,
    EnvelopeTerm, PlaneFunction,
};

/// Default quadrature tolerance for `N`.
pub const DEFAULT_TOL: f64 = 1e-6;

/// Wigner negativity above which a diagonal state counts as independently quantum.
pub const NEGATIVITY_THRESHOLD: f64 = 1e-3;

/// Largest disagreement allowed between the closed-form baseline and quadrature.
pub const BASELINE_AGREEMENT: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq)]
pub enum State {
    Gaussian(GaussianState),
    Fock(FockDiagonalState),
}

impl From<GaussianState> for State {
    fn from(s: GaussianState) -> Self {
        State::Gaussian(s)
    }
}

impl From<FockDiagonalState> for State {
    fn from(s: FockDiagonalState) -> Self {
        State::Fock(s)
    }
}

impl State {
    pub fn apply(&self, channel: &ChannelSpec) -> Result<State> {
        Ok(match self {
            State::Gaussian(g) => State::Gaussian(g.apply(channel)),
            State::Fock(f) => State::Fock(f.apply(channel)?),
        })
    }
}

/// Which s-ordered quasiprobability is compared, and in which p-norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FunctionalSpec {
    s: f64,
    p: f64,
}

impl Default for FunctionalSpec {
    fn default() -> Self {
        Self::wigner()
    }
}

impl FunctionalSpec {
    pub fn new(s: f64, p: f64) -> Result<Self> {
        check_param(s <= 0.0, "s", s, "ordering must be <= 0")?;
        check_param(p >= 1.0 && p.is_finite(), "p", p, "norm order must be >= 1")?;
        Ok(Self { s, p })
    }

    /// Wigner function, L1 norm.
    pub fn wigner() -> Self {
        Self { s: 0.0, p: 1.0 }
    }

    /// Husimi function, L1 norm.
    pub fn husimi() -> Self {
        Self { s: -1.0, p: 1.0 }
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn p(&self) -> f64 {
        self.p
    }
}

/// A value together with its propagated absolute error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub err: f64,
}

/// Independent quantumness indicator used for classification.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Witness {
    /// Minimal quadrature variance of a Gaussian state (quantum below 1/4).
    GaussianVariance(f64),
    /// Wigner negativity of a diagonal state (quantum above [`NEGATIVITY_THRESHOLD`]).
    WignerNegativity(f64),
}

impl Witness {
    pub fn indicates_quantum(&self) -> bool {
        match *self {
            Witness::GaussianVariance(v) => {
                v < crate::gaussian::VACUUM_VARIANCE - crate::gaussian::PHYSICALITY_SLACK
            }
            Witness::WignerNegativity(n) => n > NEGATIVITY_THRESHOLD,
        }
    }

    pub fn value(&self) -> f64 {
        match *self {
            Witness::GaussianVariance(v) | Witness::WignerNegativity(v) => v,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Classification {
    ClassicalConsistent,
    CertifiedQuantum,
    NogoInstance,
}

impl Classification {
    /// `nogo` iff quantum by witness and `M <= 0`; `certified` iff `M > err`.
    pub fn from_parts(witness_quantum: bool, m_value: f64, err: f64) -> Self {
        if witness_quantum && m_value <= 0.0 {
            Classification::NogoInstance
        } else if m_value > err {
            Classification::CertifiedQuantum
        } else {
            Classification::ClassicalConsistent
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Classification::ClassicalConsistent => "classical_consistent",
            Classification::CertifiedQuantum => "certified_quantum",
            Classification::NogoInstance => "nogo_instance",
        }
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantifierResult {
    pub n_value: f64,
    pub err: f64,
    pub baseline: f64,
    pub m_value: f64,
    pub witness: Witness,
    pub classification: Classification,
}

/// L1 distance between isotropic centered Gaussians with per-axis variances `a` and `b`:
/// `2 [ (a/b)^(a/(b-a)) - (a/b)^(b/(b-a)) ]`.
pub fn isotropic_l1_distance(a: f64, b: f64) -> f64 {
    let (a, b) = if a <= b { (a, b) } else { (b, a) };
    if a == b {
        return 0.0;
    }
    let ratio = a / b;
    2.0 * (ratio.powf(a / (b - a)) - ratio.powf(b / (b - a)))
}

/// `4 sqrt(3) / 9`: the vacuum value for the classicalizer with the Wigner L1 norm.
pub fn classicalizer_vacuum_closed_form() -> f64 {
    isotropic_l1_distance(0.25, 0.75)
}

fn finish_norm(integral: f64, err: f64, p: f64) -> Estimate {
    if p == 1.0 {
        return Estimate {
            value: integral,
            err,
        };
    }
    let value = integral.max(0.0).powf(1.0 / p);
    let err = if integral > err {
        err * value / (p * integral)
    } else {
        err.powf(1.0 / p)
    };
    Estimate { value, err }
}

/// Gaussian envelope of `|W_j|` in coordinates whitened by `l` around `center`.
fn gaussian_envelope_term(
    w: &OrderedGaussian,
    l: &nalgebra::Matrix2<f64>,
    center: &Vector2<f64>,
) -> Result<EnvelopeTerm> {
    let l_inv = l
        .try_inverse()
        .ok_or(Error::Unsupported("degenerate decay hint".into()))?;
    let precision = w
        .cov()
        .try_inverse()
        .ok_or(Error::Unsupported("degenerate covariance".into()))?;
    let m = (l.transpose() * precision * l)
        .symmetric_eigenvalues()
        .min();
    let offset = (l_inv * (w.mean() - center)).norm();
    Ok(if offset == 0.0 {
        EnvelopeTerm::gaussian(w.peak(), 2.0 / m)
    } else {
        // (|u| - d)^2 >= |u|^2 / 2 - d^2
        EnvelopeTerm::gaussian(w.peak() * (0.5 * m * offset * offset).exp(), 4.0 / m)
    })
}

fn gaussian_norm(
    state: &GaussianState,
    channel: &ChannelSpec,
    f: FunctionalSpec,
    tol: f64,
) -> Result<Estimate> {
    let w_in = OrderedGaussian::new(state, f.s)?;
    let w_out = OrderedGaussian::new(&state.apply(channel), f.s)?;
    let center = (w_in.mean() + w_out.mean()) * 0.5;
    let shape = (w_in.cov() + w_out.cov()) * 0.5;
    let l = principal_factor(&shape)?;
    let envelope = Envelope::new(vec![
        gaussian_envelope_term(&w_in, &l, &center)?,
        gaussian_envelope_term(&w_out, &l, &center)?,
    ]);
    let hint = DecayHint {
        center,
        shape,
        envelope,
        sample_spacing: 0.02,
    };
    let diff = PlaneFunction::new(move |x, y| w_in.eval(x, y) - w_out.eval(x, y), hint);
    let est = integrate_plane_abs_pow(&diff, f.p, tol)?;
    Ok(finish_norm(est.value, est.abs_error_bound, f.p))
}

fn fock_norm(
    state: &FockDiagonalState,
    channel: &ChannelSpec,
    f: FunctionalSpec,
    tol: f64,
) -> Result<Estimate> {
    let out = state.apply(channel)?;
    let profile = OrderedFock::new(state, f.s)?
        .into_profile()
        .minus(OrderedFock::new(&out, f.s)?.into_profile());
    let est = integrate_radial_abs_pow(&profile, f.p, tol)?;
    // truncated amplifier tail is reported, not certified
    let err = est.abs_error_bound + out.tail_mass_bound() + state.tail_mass_bound();
    Ok(finish_norm(est.value, err, f.p))
}

/// `N = || W^(s)_rho - W^(s)_{C(rho)} ||_p`.
pub fn quantumness_norm(
    state: &State,
    channel: &ChannelSpec,
    f: FunctionalSpec,
    tol: f64,
) -> Result<Estimate> {
    match state {
        State::Gaussian(g) => gaussian_norm(g, channel, f, tol),
        State::Fock(d) => fock_norm(d, channel, f, tol),
    }
}

/// `N(|0>)`. For the classicalizer with the Wigner L1 norm this is the closed form
/// `4 sqrt(3)/9`, cross-checked against quadrature.
pub fn baseline(channel: &ChannelSpec, f: FunctionalSpec, tol: f64) -> Result<Estimate> {
    let vacuum = State::Gaussian(GaussianState::vacuum());
    if channel.is_classicalizer() && f == FunctionalSpec::wigner() {
        let closed_form = classicalizer_vacuum_closed_form();
        let quad = quantumness_norm(&vacuum, channel, f, tol.min(0.1 * BASELINE_AGREEMENT))?;
        if (quad.value - closed_form).abs() > BASELINE_AGREEMENT {
            return Err(Error::BaselineMismatch {
                closed_form,
                quadrature: quad.value,
            });
        }
        return Ok(Estimate {
            value: closed_form,
            err: 0.0,
        });
    }
    quantumness_norm(&vacuum, channel, f, tol)
}

/// `int d^2 alpha/pi |W| - 1` for a diagonal state.
pub fn wigner_negativity(state: &FockDiagonalState, tol: f64) -> Result<Estimate> {
    let profile = OrderedFock::new(state, 0.0)?.into_profile();
    let est = integrate_radial_abs_pow(&profile, 1.0, tol)?;
    Ok(Estimate {
        value: est.value - 1.0,
        err: est.abs_error_bound + state.tail_mass_bound(),
    })
}

pub fn witness(state: &State, tol: f64) -> Result<Witness> {
    Ok(match state {
        State::Gaussian(g) => Witness::GaussianVariance(g.min_quadrature_variance()),
        State::Fock(d) => Witness::WignerNegativity(wigner_negativity(d, tol)?.value),
    })
}

/// `M = N - N(|0>)` with classification.
pub fn measure_m(
    state: &State,
    channel: &ChannelSpec,
    f: FunctionalSpec,
    tol: f64,
) -> Result<QuantifierResult> {
    let base = baseline(channel, f, tol)?;
    measure_m_with_baseline(state, channel, f, tol, base)
}

/// [`measure_m`] with a precomputed baseline, for sweeps over many states.
pub fn measure_m_with_baseline(
    state: &State,
    channel: &ChannelSpec,
    f: FunctionalSpec,
    tol: f64,
    base: Estimate,
) -> Result<QuantifierResult> {
    let n = quantumness_norm(state, channel, f, tol)?;
    let witness = witness(state, tol)?;
    let m_value = n.value - base.value;
    let err = n.err + base.err;
    Ok(QuantifierResult {
        n_value: n.value,
        err,
        baseline: base.value,
        m_value,
        witness,
        classification: Classification::from_parts(witness.indicates_quantum(), m_value, err),
    })
}

/// `sum_k p_k N(rho_k) - N(sum_k p_k rho_k)`; nonnegative up to the error budget.
pub fn convexity_gap(
    components: &[(f64, State)],
    channel: &ChannelSpec,
    f: FunctionalSpec,
    tol: f64,
) -> Result<Estimate> {
    let mut parts = Vec::with_capacity(components.len());
    for (p, state) in components {
        match state {
            State::Fock(d) => parts.push((*p, d)),
            State::Gaussian(_) => {
                return Err(Error::Unsupported(
                    "Gaussian states are not closed under mixing".into(),
                ))
            }
        }
    }
    let mixture = State::Fock(FockDiagonalState::mix(&parts)?);
    let whole = quantumness_norm(&mixture, channel, f, tol)?;
    let mut average = 0.0;
    let mut err = whole.err;
    for (p, state) in components {
        let n = quantumness_norm(state, channel, f, tol)?;
        average += p * n.value;
        err += p * n.err;
    }
    Ok(Estimate {
        value: average - whole.value,
        err,
    })
}

/// `N(rho) - N(E_lambda(rho))` for the quantum-limited attenuator.
pub fn monotonicity_gap_weak(
    state: &State,
    transmittivity: f64,
    channel: &ChannelSpec,
    f: FunctionalSpec,
    tol: f64,
) -> Result<Estimate> {
    let l = transmittivity;
    check_param(
        l > 0.0 && l < 1.0,
        "transmittivity",
        l,
        "must lie in (0, 1)",
    )?;
    let before = quantumness_norm(state, channel, f, tol)?;
    let lossy = state.apply(&ChannelSpec::attenuator(l)?)?;
    let after = quantumness_norm(&lossy, channel, f, tol)?;
    Ok(Estimate {
        value: before.value - after.value,
        err: before.err + after.err,
    })
}

/// `N(rho) - sum_k p_k N(rho_k)` over the photon-counting branches of the loss ancilla.
pub fn monotonicity_gap_strong(
    state: &State,
    transmittivity: f64,
    channel: &ChannelSpec,
    f: FunctionalSpec,
    tol: f64,
) -> Result<Estimate> {
    let State::Fock(d) = state else {
        return Err(Error::Unsupported(
            "photon-counting branches are only available for diagonal states".into(),
        ));
    };
    let before = quantumness_norm(state, channel, f, tol)?;
    let mut average = 0.0;
    let mut err = before.err;
    for (p, branch) in crate::fock::loss_kraus_decomposition(d, transmittivity)? {
        let n = quantumness_norm(&State::Fock(branch), channel, f, tol)?;
        average += p * n.value;
        err += p * n.err;
    }
    Ok(Estimate {
        value: before.value - average,
        err,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::make_mixture;
    use crate::gaussian::{make_coherent, make_squeezed_thermal, make_thermal};
    use approx::assert_abs_diff_eq;
    use num_complex::Complex64;

    const TOL: f64 = 1e-8;

    fn cg() -> ChannelSpec {
        ChannelSpec::classicalizer()
    }

    #[test]
    fn functional_spec_validation() {
        assert!(FunctionalSpec::new(0.5, 1.0).is_err());
        assert!(FunctionalSpec::new(0.0, 0.9).is_err());
        assert_eq!(
            FunctionalSpec::new(-1.0, 1.0).unwrap(),
            FunctionalSpec::husimi()
        );
    }

    #[test]
    fn closed_form_values() {
        assert_abs_diff_eq!(
            classicalizer_vacuum_closed_form(),
            4.0 * 3f64.sqrt() / 9.0,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            isotropic_l1_distance(0.75, 1.25),
            2.0 * (0.6f64.powf(1.5) - 0.6f64.powf(2.5)),
            epsilon = 1e-15
        );
        assert_eq!(isotropic_l1_distance(0.3, 0.3), 0.0);
        assert_eq!(
            isotropic_l1_distance(0.3, 0.7),
            isotropic_l1_distance(0.7, 0.3)
        );
    }

    #[test]
    fn vacuum_norm_matches_closed_form_on_both_engines() {
        let want = classicalizer_vacuum_closed_form();
        let g = quantumness_norm(
            &GaussianState::vacuum().into(),
            &cg(),
            FunctionalSpec::wigner(),
            TOL,
        )
        .unwrap();
        assert_abs_diff_eq!(g.value, want, epsilon = 1e-7);
        assert!(g.err <= TOL);
        let f = quantumness_norm(
            &FockDiagonalState::vacuum().into(),
            &cg(),
            FunctionalSpec::wigner(),
            TOL,
        )
        .unwrap();
        assert_abs_diff_eq!(f.value, want, epsilon = 1e-7);
    }

    #[test]
    fn thermal_norm_matches_closed_form() {
        let want = isotropic_l1_distance(0.75, 1.25);
        let g = quantumness_norm(
            &make_thermal(1.0).unwrap().into(),
            &cg(),
            FunctionalSpec::wigner(),
            TOL,
        )
        .unwrap();
        assert_abs_diff_eq!(g.value, want, epsilon = 1e-7);
    }

    #[test]
    fn coherent_norm_equals_vacuum() {
        let c = quantumness_norm(
            &make_coherent(Complex64::new(2.0, -1.0)).into(),
            &cg(),
            FunctionalSpec::wigner(),
            1e-6,
        )
        .unwrap();
        assert_abs_diff_eq!(c.value, classicalizer_vacuum_closed_form(), epsilon = 2e-6);
    }

    #[test]
    fn baseline_examples() {
        let b = baseline(&cg(), FunctionalSpec::wigner(), 1e-6).unwrap();
        assert_eq!(b.value, classicalizer_vacuum_closed_form());
        // Husimi: isotropic variances 1/2 and 1 give 2[(1/2) - (1/2)^2] = 0.5
        let q = baseline(&cg(), FunctionalSpec::husimi(), 1e-8).unwrap();
        assert_abs_diff_eq!(q.value, 0.5, epsilon = 1e-8);
        let direct = quantumness_norm(
            &GaussianState::vacuum().into(),
            &cg(),
            FunctionalSpec::husimi(),
            1e-8,
        )
        .unwrap();
        assert_eq!(q, direct);
    }

    #[test]
    fn measure_examples() {
        let vac = measure_m(
            &GaussianState::vacuum().into(),
            &cg(),
            FunctionalSpec::wigner(),
            1e-6,
        )
        .unwrap();
        assert!(vac.m_value.abs() <= 2e-6);
        assert_eq!(vac.classification, Classification::ClassicalConsistent);
        assert_eq!(vac.m_value, vac.n_value - vac.baseline);

        let st = measure_m(
            &make_squeezed_thermal(1.0, 0.7, 0.0).unwrap().into(),
            &cg(),
            FunctionalSpec::wigner(),
            1e-6,
        )
        .unwrap();
        assert!(st.witness.indicates_quantum());
        assert!(st.m_value < 0.0);
        assert_eq!(st.classification, Classification::NogoInstance);

        let st = measure_m(
            &make_squeezed_thermal(1.0, 1.2, 0.0).unwrap().into(),
            &cg(),
            FunctionalSpec::wigner(),
            1e-6,
        )
        .unwrap();
        assert!(st.m_value > 0.0);
        assert_eq!(st.classification, Classification::CertifiedQuantum);
    }

    #[test]
    fn negativity_examples() {
        let v = wigner_negativity(&FockDiagonalState::vacuum(), 1e-8).unwrap();
        assert!(v.value.abs() <= 1e-8);
        let one = wigner_negativity(&FockDiagonalState::number(1), 1e-8).unwrap();
        assert_abs_diff_eq!(one.value, 4.0 * (-0.5f64).exp() - 2.0, epsilon = 1e-8);
        assert!(one.value >= -2e-8);
    }

    #[test]
    fn convexity_examples() {
        let single = convexity_gap(
            &[(1.0, FockDiagonalState::number(1).into())],
            &cg(),
            FunctionalSpec::wigner(),
            1e-6,
        )
        .unwrap();
        assert!(single.value.abs() <= 2e-6);
        let pair = convexity_gap(
            &[
                (0.5, FockDiagonalState::vacuum().into()),
                (0.5, FockDiagonalState::number(1).into()),
            ],
            &cg(),
            FunctionalSpec::wigner(),
            1e-6,
        )
        .unwrap();
        assert!(pair.value >= -pair.err);
        let pair = convexity_gap(
            &[
                (0.3, FockDiagonalState::number(1).into()),
                (0.7, FockDiagonalState::number(2).into()),
            ],
            &cg(),
            FunctionalSpec::wigner(),
            1e-6,
        )
        .unwrap();
        assert!(pair.value >= -pair.err);
        let gaussian = convexity_gap(
            &[(1.0, GaussianState::vacuum().into())],
            &cg(),
            FunctionalSpec::wigner(),
            1e-6,
        );
        assert!(matches!(gaussian, Err(Error::Unsupported(_))));
    }

    #[test]
    fn monotonicity_examples() {
        let f = FunctionalSpec::wigner();
        for l in [0.2, 0.5, 0.8] {
            let vac: State = FockDiagonalState::vacuum().into();
            let w = monotonicity_gap_weak(&vac, l, &cg(), f, 1e-6).unwrap();
            let s = monotonicity_gap_strong(&vac, l, &cg(), f, 1e-6).unwrap();
            assert!(w.value.abs() <= 2e-6 && s.value.abs() <= 2e-6);
        }
        let one: State = FockDiagonalState::number(1).into();
        let weak = monotonicity_gap_weak(&one, 0.5, &cg(), f, 1e-6).unwrap();
        let strong = monotonicity_gap_strong(&one, 0.5, &cg(), f, 1e-6).unwrap();
        assert!(weak.value >= -weak.err);
        assert!(strong.value >= -strong.err);
        // convexity: averaging over branches can only raise sum_k p_k N(rho_k)
        assert!(strong.value <= weak.value + weak.err + strong.err);
        assert!(
            monotonicity_gap_strong(&GaussianState::vacuum().into(), 0.5, &cg(), f, 1e-6).is_err()
        );
    }

    #[test]
    fn mixture_nogo_exists() {
        let s: State = make_mixture(&[0.4, 0.6]).unwrap().into();
        let r = measure_m(&s, &cg(), FunctionalSpec::wigner(), 1e-6).unwrap();
        assert_eq!(r.classification, Classification::NogoInstance);
    }
}
