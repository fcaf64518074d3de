//! Covariance-matrix calculus for single-mode Gaussian states.
//!
//! Everything lives in the alpha-plane (`x = Re alpha`, `y = Im alpha`) with
//! measure `d^2 alpha / pi`. The vacuum has per-axis variance 1/4, and an
//! s-ordered quasiprobability is a Gaussian of covariance `cov - s/4 * I`
//! normalized to unit integral under that measure.

use nalgebra::{Matrix2, Vector2};
use num_complex::Complex64;

use crate::channel::{ChannelElement, ChannelSpec};
use crate::error::{check_param, Error, Result};

/// Per-axis variance of the vacuum in alpha-plane units.
pub const VACUUM_VARIANCE: f64 = 0.25;

/// Physicality slack for covariances produced by composed channels.
pub const PHYSICALITY_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianState {
    mean: Vector2<f64>,
    cov: Matrix2<f64>,
}

impl GaussianState {
    pub fn vacuum() -> Self {
        Self {
            mean: Vector2::zeros(),
            cov: Matrix2::identity() * VACUUM_VARIANCE,
        }
    }

    /// Builds a state from raw moments, rejecting asymmetric or unphysical covariances.
    pub fn from_moments(mean: Vector2<f64>, cov: Matrix2<f64>) -> Result<Self> {
        check_param(
            (cov[(0, 1)] - cov[(1, 0)]).abs() <= 1e-14 * cov.norm().max(1.0),
            "covariance asymmetry",
            cov[(0, 1)] - cov[(1, 0)],
            "covariance must be symmetric",
        )?;
        check_param(
            mean.iter().chain(cov.iter()).all(|v| v.is_finite()),
            "moment",
            f64::NAN,
            "moments must be finite",
        )?;
        let state = Self { mean, cov };
        let min_eig = state.min_quadrature_variance();
        check_param(
            min_eig > 0.0,
            "covariance eigenvalue",
            min_eig,
            "must be positive",
        )?;
        let det = state.cov.determinant();
        check_param(
            det >= VACUUM_VARIANCE * VACUUM_VARIANCE - PHYSICALITY_SLACK,
            "covariance determinant",
            det,
            "violates the uncertainty relation",
        )?;
        Ok(state)
    }

    pub fn mean(&self) -> Vector2<f64> {
        self.mean
    }

    pub fn cov(&self) -> Matrix2<f64> {
        self.cov
    }

    /// Smallest eigenvalue of the covariance, i.e. the minimal quadrature variance.
    pub fn min_quadrature_variance(&self) -> f64 {
        self.cov.symmetric_eigenvalues().min()
    }

    /// Sub-vacuum variance along some quadrature.
    pub fn is_quantum(&self) -> bool {
        self.min_quadrature_variance() < VACUUM_VARIANCE - PHYSICALITY_SLACK
    }

    /// Mean photon number `<a^dagger a> = |mean|^2 + tr(cov) - 1/2`.
    pub fn mean_photon_number(&self) -> f64 {
        self.mean.norm_squared() + self.cov.trace() - 2.0 * VACUUM_VARIANCE
    }

    /// Covariance of the s-ordered quasiprobability.
    pub fn ordered_cov(&self, s: f64) -> Matrix2<f64> {
        self.cov - Matrix2::identity() * (s * VACUUM_VARIANCE)
    }

    pub fn apply(&self, channel: &ChannelSpec) -> GaussianState {
        channel
            .elements()
            .iter()
            .fold(*self, |state, element| state.apply_element(element))
    }

    fn apply_element(&self, element: &ChannelElement) -> GaussianState {
        let id = Matrix2::identity();
        match *element {
            ChannelElement::Attenuator(l) => GaussianState {
                mean: self.mean * l.sqrt(),
                cov: self.cov * l + id * ((1.0 - l) * VACUUM_VARIANCE),
            },
            ChannelElement::Amplifier(g) => GaussianState {
                mean: self.mean * g.sqrt(),
                cov: self.cov * g + id * ((g - 1.0) * VACUUM_VARIANCE),
            },
            ChannelElement::Rotation(theta) => {
                let r = rotation(theta);
                let cov = r * self.cov * r.transpose();
                GaussianState {
                    mean: r * self.mean,
                    cov: symmetrize(cov),
                }
            }
            ChannelElement::Displacement(d) => GaussianState {
                mean: self.mean + Vector2::new(d.re, d.im),
                cov: self.cov,
            },
        }
    }
}

pub fn make_squeezed_thermal(nbar: f64, r: f64, theta: f64) -> Result<GaussianState> {
    check_param(
        nbar >= 0.0 && nbar.is_finite(),
        "nbar",
        nbar,
        "must be >= 0",
    )?;
    check_param(r >= 0.0 && r.is_finite(), "r", r, "must be >= 0")?;
    check_param(theta.is_finite(), "theta", theta, "must be finite")?;
    let v = (2.0 * nbar + 1.0) * VACUUM_VARIANCE;
    let diag = Matrix2::new(v * (-2.0 * r).exp(), 0.0, 0.0, v * (2.0 * r).exp());
    let rot = rotation(theta);
    Ok(GaussianState {
        mean: Vector2::zeros(),
        cov: symmetrize(rot * diag * rot.transpose()),
    })
}

pub fn make_thermal(nbar: f64) -> Result<GaussianState> {
    make_squeezed_thermal(nbar, 0.0, 0.0)
}

pub fn make_coherent(alpha: Complex64) -> GaussianState {
    GaussianState {
        mean: Vector2::new(alpha.re, alpha.im),
        cov: Matrix2::identity() * VACUUM_VARIANCE,
    }
}

pub fn apply_channel_gaussian(state: &GaussianState, channel: &ChannelSpec) -> GaussianState {
    state.apply(channel)
}

/// Squeezing at which a squeezed thermal state first has sub-vacuum variance: `ln(2 nbar + 1) / 2`.
pub fn quantumness_onset(nbar: f64) -> f64 {
    0.5 * (2.0 * nbar + 1.0).ln()
}

/// Closed-form s-ordered quasiprobability of a Gaussian state at `point`.
pub fn wigner_s_gaussian(state: &GaussianState, s: f64, point: Complex64) -> Result<f64> {
    Ok(OrderedGaussian::new(state, s)?.eval(point.re, point.im))
}

pub fn min_quadrature_variance(state: &GaussianState) -> f64 {
    state.min_quadrature_variance()
}

pub fn is_quantum_gaussian(state: &GaussianState) -> bool {
    state.is_quantum()
}

/// A pre-factored s-ordered Gaussian quasiprobability, cheap to evaluate repeatedly.
#[derive(Debug, Clone, Copy)]
pub struct OrderedGaussian {
    mean: Vector2<f64>,
    cov: Matrix2<f64>,
    precision: Matrix2<f64>,
    prefactor: f64,
}

impl OrderedGaussian {
    pub fn new(state: &GaussianState, s: f64) -> Result<Self> {
        let cov = state.ordered_cov(s);
        let min_eigenvalue = cov.symmetric_eigenvalues().min();
        if min_eigenvalue.is_nan() || min_eigenvalue <= 0.0 {
            return Err(Error::NotPositiveDefinite { s, min_eigenvalue });
        }
        let det = cov.determinant();
        let precision = cov
            .try_inverse()
            .ok_or(Error::NotPositiveDefinite { s, min_eigenvalue })?;
        Ok(Self {
            mean: state.mean,
            cov,
            precision,
            prefactor: 1.0 / (2.0 * det.sqrt()),
        })
    }

    #[inline]
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        let dx = x - self.mean[0];
        let dy = y - self.mean[1];
        let p = &self.precision;
        let q = p[(0, 0)] * dx * dx + 2.0 * p[(0, 1)] * dx * dy + p[(1, 1)] * dy * dy;
        self.prefactor * (-0.5 * q).exp()
    }

    pub fn mean(&self) -> Vector2<f64> {
        self.mean
    }

    pub fn cov(&self) -> Matrix2<f64> {
        self.cov
    }

    /// Peak value `1 / (2 sqrt(det cov))`.
    pub fn peak(&self) -> f64 {
        self.prefactor
    }
}

fn rotation(theta: f64) -> Matrix2<f64> {
    let (s, c) = theta.sin_cos();
    Matrix2::new(c, -s, s, c)
}

fn symmetrize(m: Matrix2<f64>) -> Matrix2<f64> {
    (m + m.transpose()) * 0.5
}
