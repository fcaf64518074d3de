//! Photon-number-diagonal states on a truncated Fock space.
//!
//! Loss, gain and the classicalizer act on the diagonal through exact
//! transition laws (binomial for loss, negative binomial for quantum-limited
//! gain). Mass pushed beyond the cutoff by amplification is never dropped
//! silently; it is carried in [`FockDiagonalState::tail_mass_bound`].

use crate::channel::{ChannelElement, ChannelSpec};
use crate::error::{check_param, Error, Result};
use crate::quadrature::{Envelope, EnvelopeTerm, RadialProfile};

/// Normalization slack accepted for user-supplied weights.
pub const WEIGHT_NORMALIZATION_TOL: f64 = 1e-9;

/// Largest tail mass an amplifier is allowed to push past the output cutoff.
pub const AMPLIFIER_TAIL_TARGET: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct FockDiagonalState {
    weights: Vec<f64>,
    tail_mass_bound: f64,
}

impl FockDiagonalState {
    pub fn vacuum() -> Self {
        Self {
            weights: vec![1.0],
            tail_mass_bound: 0.0,
        }
    }

    /// Pure number state `|n><n|`.
    pub fn number(n: usize) -> Self {
        let mut weights = vec![0.0; n + 1];
        weights[n] = 1.0;
        Self {
            weights,
            tail_mass_bound: 0.0,
        }
    }

    /// Thermal state truncated at `cutoff`; the geometric remainder goes to the tail bound.
    pub fn thermal(nbar: f64, cutoff: usize) -> Result<Self> {
        check_param(
            nbar >= 0.0 && nbar.is_finite(),
            "nbar",
            nbar,
            "must be >= 0",
        )?;
        let q = nbar / (1.0 + nbar);
        let mut weights = Vec::with_capacity(cutoff + 1);
        let mut w = 1.0 / (1.0 + nbar);
        for _ in 0..=cutoff {
            weights.push(w);
            w *= q;
        }
        Ok(Self {
            weights,
            tail_mass_bound: q.powi(cutoff as i32 + 1),
        })
    }

    /// Poissonian photon statistics: a phase-averaged coherent state of mean photon number `mean`.
    pub fn poisson(mean: f64, cutoff: usize) -> Result<Self> {
        check_param(
            mean >= 0.0 && mean.is_finite(),
            "mean",
            mean,
            "must be >= 0",
        )?;
        let mut weights = Vec::with_capacity(cutoff + 1);
        let mut w = (-mean).exp();
        for n in 0..=cutoff {
            weights.push(w);
            w *= mean / (n + 1) as f64;
        }
        let kept: f64 = weights.iter().sum();
        Ok(Self {
            weights,
            tail_mass_bound: (1.0 - kept).max(0.0),
        })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weight(&self, n: usize) -> f64 {
        self.weights.get(n).copied().unwrap_or(0.0)
    }

    pub fn cutoff(&self) -> usize {
        self.weights.len() - 1
    }

    pub fn tail_mass_bound(&self) -> f64 {
        self.tail_mass_bound
    }

    pub fn total_mass(&self) -> f64 {
        self.weights.iter().sum::<f64>() + self.tail_mass_bound
    }

    pub fn mean_photon_number(&self) -> f64 {
        self.weights
            .iter()
            .enumerate()
            .map(|(n, p)| n as f64 * p)
            .sum()
    }

    /// Convex combination of diagonal states (weights must lie on the simplex).
    pub fn mix(components: &[(f64, &FockDiagonalState)]) -> Result<Self> {
        check_param(
            !components.is_empty(),
            "components",
            0.0,
            "need at least one state",
        )?;
        let probs: Vec<f64> = components.iter().map(|(p, _)| *p).collect();
        validate_distribution(&probs)?;
        let cutoff = components
            .iter()
            .map(|(_, s)| s.cutoff())
            .max()
            .unwrap_or(0);
        let mut weights = vec![0.0; cutoff + 1];
        let mut tail = 0.0;
        for (p, state) in components {
            for (w, x) in weights.iter_mut().zip(&state.weights) {
                *w += p * x;
            }
            tail += p * state.tail_mass_bound;
        }
        Ok(Self {
            weights,
            tail_mass_bound: tail,
        })
    }

    pub fn apply(&self, channel: &ChannelSpec) -> Result<Self> {
        let mut state = self.clone();
        for element in channel.elements() {
            state = match *element {
                ChannelElement::Attenuator(l) => attenuate_fock(&state, l)?,
                ChannelElement::Amplifier(g) => {
                    let margin = required_amplifier_margin(&state, g)?;
                    amplify_fock(&state, g, margin)?
                }
                // diagonal states are phase invariant
                ChannelElement::Rotation(_) => state,
                ChannelElement::Displacement(d) if d.norm() == 0.0 => state,
                ChannelElement::Displacement(_) => {
                    return Err(Error::Unsupported(
                        "displacement does not preserve photon-number-diagonal states".into(),
                    ))
                }
            };
        }
        Ok(state)
    }
}

fn validate_distribution(weights: &[f64]) -> Result<()> {
    for (index, &value) in weights.iter().enumerate() {
        if value.is_nan() || value < 0.0 || value.is_infinite() {
            return Err(Error::NegativeWeight { index, value });
        }
    }
    let sum: f64 = weights.iter().sum();
    if (sum - 1.0).abs() > WEIGHT_NORMALIZATION_TOL {
        return Err(Error::Unnormalized { sum });
    }
    Ok(())
}

pub fn make_mixture(weights: &[f64]) -> Result<FockDiagonalState> {
    check_param(!weights.is_empty(), "weights", 0.0, "must be non-empty")?;
    validate_distribution(weights)?;
    Ok(FockDiagonalState {
        weights: weights.to_vec(),
        tail_mass_bound: 0.0,
    })
}

fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Column-stochastic loss matrix: entry `[m][n] = P(m | n) = C(n,m) l^m (1-l)^(n-m)`.
pub fn attenuation_matrix(cutoff: usize, transmittivity: f64) -> Vec<Vec<f64>> {
    let l = transmittivity;
    (0..=cutoff)
        .map(|m| {
            (0..=cutoff)
                .map(|n| {
                    if m > n {
                        0.0
                    } else {
                        binomial(n, m) * l.powi(m as i32) * (1.0 - l).powi((n - m) as i32)
                    }
                })
                .collect()
        })
        .collect()
}

pub fn attenuate_fock(state: &FockDiagonalState, transmittivity: f64) -> Result<FockDiagonalState> {
    let l = transmittivity;
    check_param(
        l > 0.0 && l <= 1.0,
        "transmittivity",
        l,
        "must lie in (0, 1]",
    )?;
    if l == 1.0 {
        return Ok(state.clone());
    }
    let matrix = attenuation_matrix(state.cutoff(), l);
    let weights = matrix
        .iter()
        .map(|row| row.iter().zip(&state.weights).map(|(t, p)| t * p).sum())
        .collect();
    Ok(FockDiagonalState {
        weights,
        tail_mass_bound: state.tail_mass_bound,
    })
}

/// Negative-binomial gain law `P(m | n) = C(m,n) g^(n+1) (1-g)^(m-n)`, `g = 1/G`, for
/// `m` in `n..=m_max`, plus the exact mass beyond `m_max`.
fn gain_row(n: usize, gain: f64, m_max: usize) -> (Vec<f64>, f64) {
    let g = 1.0 / gain;
    let mut row = vec![0.0; m_max + 1];
    if gain == 1.0 {
        if n <= m_max {
            row[n] = 1.0;
            return (row, 0.0);
        }
        return (row, 1.0);
    }
    if n > m_max {
        return (row, 1.0);
    }
    // P(m+1|n) / P(m|n), decreasing in m
    let ratio = |m: usize| (m + 1) as f64 / (m + 1 - n) as f64 * (1.0 - g);
    let mut term = g.powi(n as i32 + 1);
    let mut m = n;
    while m <= m_max {
        row[m] = term;
        term *= ratio(m);
        m += 1;
    }
    let mut tail = 0.0;
    while term > 0.0 {
        tail += term;
        let r = ratio(m);
        if r < 1.0 {
            // every later term is bounded by a geometric series with ratio r
            let remainder = term * r / (1.0 - r);
            if remainder <= 1e-17 * tail {
                tail += remainder;
                break;
            }
        }
        term *= r;
        m += 1;
    }
    (row, tail)
}

fn amplified_tail(state: &FockDiagonalState, gain: f64, out_cutoff: usize) -> f64 {
    state
        .weights
        .iter()
        .enumerate()
        .filter(|(_, p)| **p > 0.0)
        .map(|(n, p)| p * gain_row(n, gain, out_cutoff).1)
        .sum()
}

fn base_amplified_cutoff(state: &FockDiagonalState, gain: f64) -> usize {
    (gain * (state.cutoff() + 1) as f64).ceil() as usize
}

/// Smallest margin for which the amplifier leaves less than [`AMPLIFIER_TAIL_TARGET`] past the cutoff.
pub fn required_amplifier_margin(state: &FockDiagonalState, gain: f64) -> Result<usize> {
    check_param(
        gain >= 1.0 && gain.is_finite(),
        "gain",
        gain,
        "must be >= 1",
    )?;
    let base = base_amplified_cutoff(state, gain);
    let fits = |margin: usize| amplified_tail(state, gain, base + margin) < AMPLIFIER_TAIL_TARGET;
    let mut hi = 1usize;
    while !fits(hi) {
        hi *= 2;
    }
    let mut lo = 0usize;
    if fits(lo) {
        return Ok(0);
    }
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if fits(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Column-stochastic gain matrix restricted to the given output cutoff.
///
/// Columns sum to one minus the mass each input sends past `out_cutoff`.
pub fn amplification_matrix(
    in_cutoff: usize,
    gain: f64,
    out_cutoff: usize,
) -> (Vec<Vec<f64>>, Vec<f64>) {
    let mut matrix = vec![vec![0.0; in_cutoff + 1]; out_cutoff + 1];
    let mut tails = Vec::with_capacity(in_cutoff + 1);
    for n in 0..=in_cutoff {
        let (row, tail) = gain_row(n, gain, out_cutoff);
        for (out_row, v) in matrix.iter_mut().zip(row) {
            out_row[n] = v;
        }
        tails.push(tail);
    }
    (matrix, tails)
}

pub fn amplify_fock(
    state: &FockDiagonalState,
    gain: f64,
    margin: usize,
) -> Result<FockDiagonalState> {
    check_param(
        gain >= 1.0 && gain.is_finite(),
        "gain",
        gain,
        "must be >= 1",
    )?;
    let out_cutoff = base_amplified_cutoff(state, gain) + margin;
    let (matrix, tails) = amplification_matrix(state.cutoff(), gain, out_cutoff);
    let new_tail: f64 = tails.iter().zip(&state.weights).map(|(t, p)| t * p).sum();
    if new_tail >= AMPLIFIER_TAIL_TARGET {
        return Err(Error::MarginTooSmall {
            given: margin,
            required: required_amplifier_margin(state, gain)?,
            target: AMPLIFIER_TAIL_TARGET,
        });
    }
    let weights = matrix
        .iter()
        .map(|row| row.iter().zip(&state.weights).map(|(t, p)| t * p).sum())
        .collect();
    Ok(FockDiagonalState {
        weights,
        tail_mass_bound: state.tail_mass_bound + new_tail,
    })
}

/// Attenuator 1/2 followed by amplifier 2.
pub fn classicalize_fock(state: &FockDiagonalState, margin: usize) -> Result<FockDiagonalState> {
    amplify_fock(&attenuate_fock(state, 0.5)?, 2.0, margin)
}

/// [`classicalize_fock`] with the smallest margin that certifies the tail.
pub fn classicalize_fock_auto(state: &FockDiagonalState) -> Result<FockDiagonalState> {
    let lossy = attenuate_fock(state, 0.5)?;
    let margin = required_amplifier_margin(&lossy, 2.0)?;
    amplify_fock(&lossy, 2.0, margin)
}

/// Branches of the loss channel conditioned on counting `k` photons in the ancilla.
///
/// Returns `(p_k, rho_k)` for every `k` with nonzero probability, in increasing `k`.
pub fn loss_kraus_decomposition(
    state: &FockDiagonalState,
    transmittivity: f64,
) -> Result<Vec<(f64, FockDiagonalState)>> {
    let l = transmittivity;
    check_param(
        l > 0.0 && l < 1.0,
        "transmittivity",
        l,
        "must lie in (0, 1)",
    )?;
    let cutoff = state.cutoff();
    let mut branches = Vec::new();
    for k in 0..=cutoff {
        let mut unnormalized = vec![0.0; cutoff - k + 1];
        for n in k..=cutoff {
            let p = state.weights[n];
            if p > 0.0 {
                unnormalized[n - k] =
                    p * binomial(n, k) * (1.0 - l).powi(k as i32) * l.powi((n - k) as i32);
            }
        }
        let pk: f64 = unnormalized.iter().sum();
        if pk > 0.0 {
            let weights = unnormalized.into_iter().map(|w| w / pk).collect();
            branches.push((
                pk,
                FockDiagonalState {
                    weights,
                    tail_mass_bound: 0.0,
                },
            ));
        }
    }
    Ok(branches)
}

/// The s-ordered quasiprobability of a diagonal state as a function of `|alpha|`.
///
/// Uses the scaled recurrence `g_k = t^k e^{-2 rho^2/(1-s)} L_k(4 rho^2/(1-s^2))`,
/// `t = (s+1)/(s-1)`, rewritten in terms of `a = t` and `b = -t x = 4 rho^2/(1-s)^2`
/// so that `s = -1` (the Husimi function) needs no special case.
#[derive(Debug, Clone)]
pub struct OrderedFock {
    weights: Vec<f64>,
    s: f64,
    a: f64,
    prefactor: f64,
}

impl OrderedFock {
    pub fn new(state: &FockDiagonalState, s: f64) -> Result<Self> {
        check_param(s < 1.0, "s", s, "ordering must be < 1")?;
        // trailing zeros do not contribute
        let len = state
            .weights
            .iter()
            .rposition(|w| *w != 0.0)
            .map_or(1, |i| i + 1);
        Ok(Self {
            weights: state.weights[..len].to_vec(),
            s,
            a: (s + 1.0) / (s - 1.0),
            prefactor: 2.0 / (1.0 - s),
        })
    }

    pub fn eval(&self, radius: f64) -> f64 {
        let r2 = radius * radius;
        let one_minus_s = 1.0 - self.s;
        let a = self.a;
        let b = 4.0 * r2 / (one_minus_s * one_minus_s);
        let mut prev = 0.0;
        let mut cur = (-2.0 * r2 / one_minus_s).exp();
        let mut acc = self.weights[0] * cur;
        for (k, w) in self.weights.iter().enumerate().skip(1) {
            let km1 = (k - 1) as f64;
            let next = (((2.0 * km1 + 1.0) * a + b) * cur - km1 * a * a * prev) / k as f64;
            prev = cur;
            cur = next;
            acc += w * cur;
        }
        self.prefactor * acc
    }

    /// Upper bound on `|W(rho)|` as a Gaussian-times-polynomial envelope in `rho`.
    ///
    /// Expands `t^n L_n(x) = sum_k C(n,k) t^(n-k) b^k / k!` and bounds term by term.
    pub fn envelope(&self) -> Envelope {
        let one_minus_s = 1.0 - self.s;
        let abs_a = self.a.abs();
        let ln_b_coeff = (4.0 / (one_minus_s * one_minus_s)).ln();
        let sigma = one_minus_s / 2.0;
        let nmax = self.weights.len() - 1;
        let mut ln_fact = vec![0.0; nmax + 1];
        for k in 1..=nmax {
            ln_fact[k] = ln_fact[k - 1] + (k as f64).ln();
        }
        let mut terms = Vec::with_capacity(nmax + 1);
        for k in 0..=nmax {
            let mut coeff = 0.0;
            for (n, w) in self.weights.iter().enumerate().skip(k) {
                if *w == 0.0 {
                    continue;
                }
                let ln_binom = ln_fact[n] - ln_fact[k] - ln_fact[n - k];
                let ln_pow = if n == k {
                    0.0
                } else {
                    (n - k) as f64 * abs_a.ln()
                };
                coeff += w.abs() * (ln_binom + ln_pow).exp();
            }
            if coeff > 0.0 {
                let ln_c = self.prefactor.ln() + coeff.ln() + k as f64 * ln_b_coeff - ln_fact[k];
                terms.push(EnvelopeTerm::new(ln_c.exp(), k as u32, sigma));
            }
        }
        Envelope::new(terms)
    }

    /// Radial sampling step fine enough to separate adjacent Laguerre nodes.
    pub fn sample_spacing(&self) -> f64 {
        (0.1 / (self.weights.len() as f64).sqrt()).min(0.01)
    }

    pub fn into_profile(self) -> RadialProfile<'static> {
        let envelope = self.envelope();
        let spacing = self.sample_spacing();
        RadialProfile::new(move |r| self.eval(r), envelope).with_sample_spacing(spacing)
    }
}

pub fn wigner_s_fock(state: &FockDiagonalState, s: f64, radius: f64) -> Result<f64> {
    Ok(OrderedFock::new(state, s)?.eval(radius))
}
