//! Sign-aware adaptive integration of `|f|^p` over the phase plane.
//!
//! All integrals use the measure `d^2 alpha / pi`. For a rotation-symmetric
//! function this reduces to `int_0^inf 2 rho |f(rho)|^p d rho`; the planar
//! integrator works in polar coordinates around a decay center after
//! whitening with the hint's quadratic form.
//!
//! Improper integrals are made finite through an [`Envelope`]: a declared
//! upper bound `sum_k c_k rho^(2k) exp(-rho^2 / sigma_k)` on `|f|` whose tail
//! integral has a closed form. The integrand is cut at every located sign
//! change of `f`, so `|f|^p` is smooth on each panel.

mod kronrod;
mod roots;

use std::f64::consts::PI;

use nalgebra::{Matrix2, Vector2};

use crate::error::{check_param, Error, Result};

pub use roots::{locate_sign_changes, locate_sign_changes_sampled, DEFAULT_SAMPLES, ROOT_TOL};

const MAX_PANELS: usize = 4000;
const MAX_ROOTS: usize = 10_000;
const MAX_RADIUS_STEPS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegralEstimate {
    pub value: f64,
    pub abs_error_bound: f64,
    pub subdivisions: usize,
    pub truncation_radius: f64,
}

/// One envelope term `coeff * rho^(2 power) * exp(-rho^2 / sigma)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvelopeTerm {
    pub coeff: f64,
    pub power: u32,
    pub sigma: f64,
}

impl EnvelopeTerm {
    pub fn new(coeff: f64, power: u32, sigma: f64) -> Self {
        Self {
            coeff,
            power,
            sigma,
        }
    }

    pub fn gaussian(coeff: f64, sigma: f64) -> Self {
        Self::new(coeff, 0, sigma)
    }

    fn eval(&self, r: f64) -> f64 {
        let r2 = r * r;
        if self.power == 0 {
            return self.coeff * (-r2 / self.sigma).exp();
        }
        if r2 == 0.0 {
            return 0.0;
        }
        (self.coeff.ln() + self.power as f64 * r2.ln() - r2 / self.sigma).exp()
    }

    /// `int_R^inf 2 rho term(rho) d rho = coeff sigma^(k+1) Gamma(k+1, R^2/sigma)`.
    fn tail(&self, radius: f64) -> f64 {
        if self.coeff == 0.0 {
            return 0.0;
        }
        let k = self.power as usize;
        let x = radius * radius / self.sigma;
        // Gamma(k+1, x) = e^{-x} sum_j k!/j! x^j, summed in log space
        let ln_x = x.ln();
        let mut ln_terms = Vec::with_capacity(k + 1);
        let mut ln_k_over_j = 0.0; // ln(k!/j!), walking j from k down to 0
        for j in (0..=k).rev() {
            let power = if j == 0 { 0.0 } else { j as f64 * ln_x };
            ln_terms.push(ln_k_over_j + power);
            if j > 0 {
                ln_k_over_j += (j as f64).ln();
            }
        }
        let max = ln_terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let ln_sum = max + ln_terms.iter().map(|t| (t - max).exp()).sum::<f64>().ln();
        (self.coeff.ln() + (k + 1) as f64 * self.sigma.ln() - x + ln_sum).exp()
    }
}

/// A declared upper bound on `|f|` in terms of the (whitened) radius.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Envelope {
    terms: Vec<EnvelopeTerm>,
}

impl Envelope {
    pub fn new(terms: Vec<EnvelopeTerm>) -> Self {
        Self {
            terms: terms.into_iter().filter(|t| t.coeff > 0.0).collect(),
        }
    }

    pub fn terms(&self) -> &[EnvelopeTerm] {
        &self.terms
    }

    pub fn sum(mut self, other: &Envelope) -> Self {
        self.terms.extend_from_slice(&other.terms);
        self
    }

    pub fn eval(&self, r: f64) -> f64 {
        self.terms.iter().map(|t| t.eval(r)).sum()
    }

    /// `int_R^inf 2 rho E(rho) d rho`.
    pub fn tail_integral(&self, radius: f64) -> f64 {
        self.terms.iter().map(|t| t.tail(radius)).sum()
    }

    /// Radius beyond which every term decreases, `E <= 1` and the tail is below `budget`.
    ///
    /// Past that radius `|f|^p <= E` for every `p >= 1`, so the envelope tail
    /// bounds the truncated part of `int |f|^p`.
    pub fn truncation_radius(&self, budget: f64) -> f64 {
        if self.terms.is_empty() {
            return 0.0;
        }
        let peak = self
            .terms
            .iter()
            .map(|t| t.power as f64 * t.sigma)
            .fold(0.0, f64::max)
            .sqrt();
        let ok = |r: f64| r >= peak && self.eval(r) <= 1.0 && self.tail_integral(r) <= budget;
        let mut hi = peak.max(1.0);
        for _ in 0..MAX_RADIUS_STEPS {
            if ok(hi) {
                break;
            }
            hi *= 1.5;
        }
        let mut lo = peak;
        for _ in 0..50 {
            if hi - lo < 1e-3 * hi {
                break;
            }
            let mid = 0.5 * (lo + hi);
            if ok(mid) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    }
}

/// A rotation-symmetric phase-space function given by its radial profile.
pub struct RadialProfile<'a> {
    eval: Box<dyn Fn(f64) -> f64 + Send + Sync + 'a>,
    envelope: Envelope,
    sample_spacing: f64,
}

impl<'a> RadialProfile<'a> {
    pub fn new(eval: impl Fn(f64) -> f64 + Send + Sync + 'a, envelope: Envelope) -> Self {
        Self {
            eval: Box::new(eval),
            envelope,
            sample_spacing: 0.01,
        }
    }

    /// Grid step used to bracket sign changes; must resolve the closest pair of roots.
    pub fn with_sample_spacing(mut self, spacing: f64) -> Self {
        self.sample_spacing = spacing;
        self
    }

    pub fn eval(&self, r: f64) -> f64 {
        (self.eval)(r)
    }

    pub fn envelope(&self) -> &Envelope {
        &self.envelope
    }

    pub fn sample_spacing(&self) -> f64 {
        self.sample_spacing
    }

    /// Pointwise difference `self - other`, with the summed envelope.
    pub fn minus(self, other: RadialProfile<'a>) -> RadialProfile<'a> {
        let envelope = self.envelope.clone().sum(&other.envelope);
        let spacing = self.sample_spacing.min(other.sample_spacing);
        let (f, g) = (self.eval, other.eval);
        RadialProfile::new(move |r| f(r) - g(r), envelope).with_sample_spacing(spacing)
    }
}

#[inline]
fn abs_pow(v: f64, p: f64) -> f64 {
    if p == 1.0 {
        v.abs()
    } else if p == 2.0 {
        v * v
    } else {
        v.abs().powf(p)
    }
}

fn check_norm_args(p: f64, tol: f64) -> Result<()> {
    check_param(p >= 1.0 && p.is_finite(), "p", p, "norm order must be >= 1")?;
    check_param(
        tol > 0.0 && tol.is_finite(),
        "tol",
        tol,
        "tolerance must be positive",
    )
}

/// Radial integral of `2 rho |g(rho)|^p` on `[0, radius]` with cuts at the sign changes of `g`.
fn radial_segment<G: Fn(f64) -> f64>(
    g: G,
    radius: f64,
    spacing: f64,
    p: f64,
    tol: f64,
) -> Result<kronrod::AdaptiveOutcome> {
    let samples = ((radius / spacing).ceil() as usize + 1).max(64);
    let cuts = locate_sign_changes_sampled(&g, (0.0, radius), samples, MAX_ROOTS)?;
    let mut breaks = Vec::with_capacity(cuts.len() + 2);
    breaks.push(0.0);
    breaks.extend(cuts);
    breaks.push(radius);
    Ok(kronrod::integrate(
        |r| 2.0 * r * abs_pow(g(r), p),
        &breaks,
        tol,
        MAX_PANELS + breaks.len(),
    ))
}

/// `int d^2 alpha/pi |f|^p = int_0^inf 2 rho |f(rho)|^p d rho` for a radial profile.
pub fn integrate_radial_abs_pow(f: &RadialProfile, p: f64, tol: f64) -> Result<IntegralEstimate> {
    check_norm_args(p, tol)?;
    let radius = f.envelope.truncation_radius(0.1 * tol);
    let tail = f.envelope.tail_integral(radius);
    let out = radial_segment(|r| f.eval(r), radius, f.sample_spacing, p, tol - tail)?;
    let estimate = IntegralEstimate {
        value: out.value,
        abs_error_bound: out.error + tail,
        subdivisions: out.panels,
        truncation_radius: radius,
    };
    if !out.converged {
        return Err(Error::QuadratureFailed {
            requested: tol,
            best: estimate,
        });
    }
    Ok(estimate)
}

/// Where a planar integrand lives: `|f(center + L u)| <= envelope(|u|)` with `L L^T = shape`.
#[derive(Debug, Clone, PartialEq)]
pub struct DecayHint {
    pub center: Vector2<f64>,
    pub shape: Matrix2<f64>,
    pub envelope: Envelope,
    /// Grid step along each whitened ray for bracketing sign changes.
    pub sample_spacing: f64,
}

pub struct PlaneFunction<'a> {
    eval: Box<dyn Fn(f64, f64) -> f64 + Send + Sync + 'a>,
    hint: DecayHint,
}

impl<'a> PlaneFunction<'a> {
    pub fn new(eval: impl Fn(f64, f64) -> f64 + Send + Sync + 'a, hint: DecayHint) -> Self {
        Self {
            eval: Box::new(eval),
            hint,
        }
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        (self.eval)(x, y)
    }

    pub fn hint(&self) -> &DecayHint {
        &self.hint
    }
}

/// Principal-axis factor `L = V diag(sqrt(lambda))` of an SPD matrix.
pub(crate) fn principal_factor(shape: &Matrix2<f64>) -> Result<Matrix2<f64>> {
    let eig = shape.symmetric_eigen();
    let min = eig.eigenvalues.min();
    check_param(
        min > 0.0,
        "shape eigenvalue",
        min,
        "decay hint must be positive definite",
    )?;
    let scale = Matrix2::from_diagonal(&eig.eigenvalues.map(f64::sqrt));
    Ok(eig.eigenvectors * scale)
}

/// `int d^2 alpha/pi |f|^p` for an anisotropic integrand.
///
/// Polar quadrature in whitened coordinates: an adaptive outer rule in the
/// angle, and for each ray an adaptive radial rule cut at that ray's sign
/// changes. Angular breaks sit on the hint's principal axes.
pub fn integrate_plane_abs_pow(f: &PlaneFunction, p: f64, tol: f64) -> Result<IntegralEstimate> {
    check_norm_args(p, tol)?;
    let hint = &f.hint;
    let l = principal_factor(&hint.shape)?;
    let jac = l.determinant().abs();
    let radius = hint.envelope.truncation_radius(0.1 * tol / jac);
    let tail = jac * hint.envelope.tail_integral(radius);
    let inner_tol = 0.1 * tol / jac;
    let outer_tol = 0.7 * tol;

    let mut failure: Option<Error> = None;
    let mut worst_inner = 0.0f64;
    let mut inner_panels = 0usize;
    let outer = kronrod::integrate(
        |theta| {
            if failure.is_some() {
                return 0.0;
            }
            let dir = l * Vector2::new(theta.cos(), theta.sin());
            let (cx, cy) = (hint.center[0], hint.center[1]);
            let ray = |r: f64| f.eval(cx + r * dir[0], cy + r * dir[1]);
            match radial_segment(ray, radius, hint.sample_spacing, p, inner_tol) {
                Ok(out) => {
                    worst_inner = worst_inner.max(out.error);
                    inner_panels += out.panels;
                    if !out.converged {
                        failure = Some(Error::QuadratureFailed {
                            requested: inner_tol,
                            best: IntegralEstimate {
                                value: out.value,
                                abs_error_bound: out.error,
                                subdivisions: out.panels,
                                truncation_radius: radius,
                            },
                        });
                    }
                    jac * out.value / (2.0 * PI)
                }
                Err(e) => {
                    failure = Some(e);
                    0.0
                }
            }
        },
        &[0.0, 0.5 * PI, PI, 1.5 * PI, 2.0 * PI],
        outer_tol,
        MAX_PANELS,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    let estimate = IntegralEstimate {
        value: outer.value,
        abs_error_bound: outer.error + jac * worst_inner + tail,
        subdivisions: outer.panels + inner_panels,
        truncation_radius: radius,
    };
    if !outer.converged || estimate.abs_error_bound > tol {
        return Err(Error::QuadratureFailed {
            requested: tol,
            best: estimate,
        });
    }
    Ok(estimate)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn vacuum_profile() -> RadialProfile<'static> {
        RadialProfile::new(
            |r| 2.0 * (-2.0 * r * r).exp(),
            Envelope::new(vec![EnvelopeTerm::gaussian(2.0, 0.5)]),
        )
    }

    #[test]
    fn envelope_tail_matches_incomplete_gamma() {
        // k = 2: Gamma(3, x) = e^{-x}(x^2 + 2x + 2)
        let t = EnvelopeTerm::new(1.5, 2, 0.7);
        let r: f64 = 1.3;
        let x = r * r / 0.7;
        let want = 1.5 * 0.7f64.powi(3) * (-x).exp() * (x * x + 2.0 * x + 2.0);
        assert_abs_diff_eq!(t.tail(r), want, epsilon = 1e-14);
        // full integral at R = 0 is coeff sigma^(k+1) k!
        assert_abs_diff_eq!(t.tail(0.0), 1.5 * 0.7f64.powi(3) * 2.0, epsilon = 1e-14);
    }

    #[test]
    fn high_power_terms_stay_finite() {
        let env = Envelope::new(vec![EnvelopeTerm::new(1e-300, 250, 0.5)]);
        let r = env.truncation_radius(1e-10);
        assert!(r.is_finite() && r > 0.0);
        assert!(env.eval(r) <= 1.0);
        assert!(env.tail_integral(r) <= 1e-10);
        assert_eq!(env.eval(0.0), 0.0);
    }

    #[test]
    fn truncation_radius_meets_budget() {
        let env = Envelope::new(vec![
            EnvelopeTerm::new(3.0, 4, 0.5),
            EnvelopeTerm::gaussian(2.0, 1.5),
        ]);
        let r = env.truncation_radius(1e-12);
        assert!(env.tail_integral(r) <= 1e-12);
        assert!(env.eval(r) <= 1.0);
        assert!(env.tail_integral(0.9 * r) > 1e-12);
    }

    #[test]
    fn vacuum_normalization() {
        let est = integrate_radial_abs_pow(&vacuum_profile(), 1.0, 1e-12).unwrap();
        assert_abs_diff_eq!(est.value, 1.0, epsilon = 1e-10);
        assert!(est.abs_error_bound <= 1e-12);
    }

    #[test]
    fn rejects_bad_norm_order() {
        assert!(integrate_radial_abs_pow(&vacuum_profile(), 0.5, 1e-8).is_err());
        assert!(integrate_radial_abs_pow(&vacuum_profile(), 1.0, 0.0).is_err());
    }

    #[test]
    fn l2_norm_of_vacuum() {
        // int 2 rho 4 e^{-4 rho^2} = 1
        let est = integrate_radial_abs_pow(&vacuum_profile(), 2.0, 1e-12).unwrap();
        assert_abs_diff_eq!(est.value, 1.0, epsilon = 1e-11);
    }

    #[test]
    fn plane_matches_radial_for_isotropic_gaussian() {
        let hint = DecayHint {
            center: Vector2::zeros(),
            shape: Matrix2::identity() * 0.25,
            envelope: Envelope::new(vec![EnvelopeTerm::gaussian(2.0, 2.0)]),
            sample_spacing: 0.02,
        };
        let f = PlaneFunction::new(|x, y| 2.0 * (-2.0 * (x * x + y * y)).exp(), hint);
        let est = integrate_plane_abs_pow(&f, 1.0, 1e-10).unwrap();
        assert_abs_diff_eq!(est.value, 1.0, epsilon = 1e-10);
    }
}
