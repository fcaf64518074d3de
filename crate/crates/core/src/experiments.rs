//! Squeezed-thermal sweeps, the baseline crossing, seeded Fock-mixture scans,
//! CSV output, and the runnable property batteries behind `verify`.

use std::io::{self, Write};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::channel::ChannelSpec;
use crate::error::{check_param, Error, Result};
use crate::fock::{
    classicalize_fock_auto, make_mixture, wigner_s_fock, FockDiagonalState, OrderedFock,
};
use crate::gaussian::{
    make_coherent, make_squeezed_thermal, make_thermal, quantumness_onset, GaussianState,
    OrderedGaussian,
};
use crate::quadrature::{
    integrate_plane_abs_pow, integrate_radial_abs_pow, principal_factor, DecayHint, Envelope,
    EnvelopeTerm, PlaneFunction,
};
use crate::quantifier::{
    baseline, classicalizer_vacuum_closed_form, convexity_gap, isotropic_l1_distance,
    measure_m_with_baseline, monotonicity_gap_strong, monotonicity_gap_weak, quantumness_norm,
    wigner_negativity, Classification, Estimate, FunctionalSpec, State,
};

pub const SWEEP_HEADER: &str = "r,n_value,err,baseline,m_value,quantum_by_variance,classification";
pub const MIXTURE_HEADER: &str =
    "p0,p1,p2,n_value,m_value,wigner_negativity,classification,seed_index";

/// Upper end of the squeezing bracket searched for the crossing.
pub const CROSSING_R_MAX: f64 = 2.0;

/// Transmittivities probed by the monotonicity checks.
pub const MONOTONICITY_LAMBDAS: [f64; 3] = [0.2, 0.5, 0.8];

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub r: f64,
    pub n_value: f64,
    pub err: f64,
    pub baseline: f64,
    pub m_value: f64,
    pub quantum_by_variance: bool,
    pub classification: Classification,
}

/// `M` of squeezed thermal states with `steps` equally spaced squeezings.
pub fn sweep(nbar: f64, r_min: f64, r_max: f64, steps: usize, tol: f64) -> Result<Vec<SweepRow>> {
    check_param(r_min < r_max, "r_max", r_max, "must exceed r_min")?;
    check_param(r_min >= 0.0, "r_min", r_min, "must be nonnegative")?;
    check_param(steps >= 2, "steps", steps as f64, "at least two points")?;
    let channel = ChannelSpec::classicalizer();
    let f = FunctionalSpec::wigner();
    let base = baseline(&channel, f, tol)?;
    (0..steps)
        .into_par_iter()
        .map(|i| {
            let r = r_min + (r_max - r_min) * i as f64 / (steps - 1) as f64;
            let state = State::Gaussian(make_squeezed_thermal(nbar, r, 0.0)?);
            let res = measure_m_with_baseline(&state, &channel, f, tol, base)?;
            Ok(SweepRow {
                r,
                n_value: res.n_value,
                err: res.err,
                baseline: res.baseline,
                m_value: res.m_value,
                quantum_by_variance: res.witness.indicates_quantum(),
                classification: res.classification,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Crossing {
    pub onset: f64,
    pub r_star: f64,
    pub m_at_r_star: f64,
    pub lo: f64,
    pub hi: f64,
    pub m_lo: f64,
    pub m_hi: f64,
}

/// Squeezing at which `M` of the squeezed thermal state returns to zero,
/// bisected on `[onset, 2]` until `|M| <= tol`.
pub fn crossing(nbar: f64, tol: f64) -> Result<Crossing> {
    check_param(tol > 0.0, "tol", tol, "must be positive")?;
    let channel = ChannelSpec::classicalizer();
    let f = FunctionalSpec::wigner();
    let quad_tol = 0.1 * tol;
    let base = baseline(&channel, f, quad_tol)?;
    let m = |r: f64| -> Result<Estimate> {
        let state = State::Gaussian(make_squeezed_thermal(nbar, r, 0.0)?);
        let n = quantumness_norm(&state, &channel, f, quad_tol)?;
        Ok(Estimate {
            value: n.value - base.value,
            err: n.err + base.err,
        })
    };
    let onset = quantumness_onset(nbar);
    let (mut lo, mut hi) = (onset, CROSSING_R_MAX);
    let at_lo = m(lo)?;
    let at_hi = m(hi)?;
    if at_lo.value > at_lo.err || at_hi.value <= 0.0 {
        return Err(Error::NoCrossing {
            lo,
            hi,
            m_lo: at_lo.value,
            m_hi: at_hi.value,
        });
    }
    let (mut m_lo, mut m_hi) = (at_lo.value, at_hi.value);
    loop {
        let mid = 0.5 * (lo + hi);
        let at_mid = m(mid)?;
        if at_mid.value.abs() <= tol || hi - lo <= 1e-12 {
            return Ok(Crossing {
                onset,
                r_star: mid,
                m_at_r_star: at_mid.value,
                lo,
                hi,
                m_lo,
                m_hi,
            });
        }
        if at_mid.value < 0.0 {
            lo = mid;
            m_lo = at_mid.value;
        } else {
            hi = mid;
            m_hi = at_mid.value;
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MixtureRow {
    pub p0: f64,
    pub p1: f64,
    pub p2: f64,
    pub n_value: f64,
    pub m_value: f64,
    pub wigner_negativity: f64,
    pub classification: Classification,
    pub seed_index: u64,
}

/// Uniform point on the 2-simplex from stream `index` of a ChaCha8 generator seeded with `seed`.
pub fn sample_simplex(seed: u64, index: u64) -> [f64; 3] {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let (u, v): (f64, f64) = (rng.gen(), rng.gen());
    let (a, b) = if u <= v { (u, v) } else { (v, u) };
    [a, b - a, 1.0 - b]
}

fn mixture_row(weights: [f64; 3], seed_index: u64, base: Estimate, tol: f64) -> Result<MixtureRow> {
    let state = State::Fock(make_mixture(&weights)?);
    let res = measure_m_with_baseline(
        &state,
        &ChannelSpec::classicalizer(),
        FunctionalSpec::wigner(),
        tol,
        base,
    )?;
    Ok(MixtureRow {
        p0: weights[0],
        p1: weights[1],
        p2: weights[2],
        n_value: res.n_value,
        m_value: res.m_value,
        wigner_negativity: res.witness.value(),
        classification: res.classification,
        seed_index,
    })
}

/// `count` seeded mixtures of `|0>, |1>, |2>`; with `include_corners` the three
/// pure states follow with seed indices `count`, `count + 1`, `count + 2`.
pub fn mixtures(
    count: usize,
    seed: u64,
    include_corners: bool,
    tol: f64,
) -> Result<Vec<MixtureRow>> {
    check_param(count >= 1, "count", count as f64, "at least one triplet")?;
    let base = baseline(&ChannelSpec::classicalizer(), FunctionalSpec::wigner(), tol)?;
    let mut jobs: Vec<([f64; 3], u64)> = (0..count as u64)
        .map(|i| (sample_simplex(seed, i), i))
        .collect();
    if include_corners {
        let n = count as u64;
        jobs.push(([1.0, 0.0, 0.0], n));
        jobs.push(([0.0, 1.0, 0.0], n + 1));
        jobs.push(([0.0, 0.0, 1.0], n + 2));
    }
    jobs.into_par_iter()
        .map(|(w, i)| mixture_row(w, i, base, tol))
        .collect()
}

/// Seven significant digits, positional notation for moderate magnitudes.
pub fn sig7(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let sci = format!("{v:.6e}");
    let exp: i32 = sci
        .rsplit('e')
        .next()
        .and_then(|e| e.parse().ok())
        .unwrap_or(0);
    if (-5..7).contains(&exp) {
        let decimals = (6 - exp).max(0) as usize;
        format!("{v:.decimals$}")
    } else {
        sci
    }
}

pub fn write_sweep_csv<W: Write>(rows: &[SweepRow], out: W) -> io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SWEEP_HEADER.split(','))?;
    for r in rows {
        w.write_record([
            sig7(r.r),
            sig7(r.n_value),
            sig7(r.err),
            sig7(r.baseline),
            sig7(r.m_value),
            u8::from(r.quantum_by_variance).to_string(),
            r.classification.to_string(),
        ])?;
    }
    w.flush()
}

pub fn write_mixtures_csv<W: Write>(rows: &[MixtureRow], out: W) -> io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(MIXTURE_HEADER.split(','))?;
    for r in rows {
        w.write_record([
            sig7(r.p0),
            sig7(r.p1),
            sig7(r.p2),
            sig7(r.n_value),
            sig7(r.m_value),
            sig7(r.wigner_negativity),
            r.classification.to_string(),
            r.seed_index.to_string(),
        ])?;
    }
    w.flush()
}

/// Gaussian and diagonal states exercised by the monotonicity and no-go checks.
pub fn state_battery() -> Result<Vec<(String, State)>> {
    let mut states: Vec<(String, State)> = vec![
        ("gaussian vacuum".into(), GaussianState::vacuum().into()),
        (
            "coherent 2-i".into(),
            make_coherent(Complex64::new(2.0, -1.0)).into(),
        ),
        ("gaussian thermal 1".into(), make_thermal(1.0)?.into()),
        ("gaussian thermal 0.3".into(), make_thermal(0.3)?.into()),
    ];
    for (nbar, r) in [(1.0, 0.7), (1.0, 1.2), (0.0, 0.5)] {
        states.push((
            format!("squeezed thermal ({nbar}, {r})"),
            make_squeezed_thermal(nbar, r, 0.0)?.into(),
        ));
    }
    states.push(("fock vacuum".into(), FockDiagonalState::vacuum().into()));
    for n in 1..=3 {
        states.push((format!("fock |{n}>"), FockDiagonalState::number(n).into()));
    }
    states.push((
        "fock thermal 1".into(),
        FockDiagonalState::thermal(1.0, 60)?.into(),
    ));
    for w in [
        &[0.5, 0.5][..],
        &[0.2, 0.3, 0.5],
        &[0.4, 0.6],
        &[0.0, 0.3, 0.7],
    ] {
        states.push((format!("fock mixture {w:?}"), make_mixture(w)?.into()));
    }
    states.push((
        "classicalized |1>".into(),
        classicalize_fock_auto(&FockDiagonalState::number(1))?.into(),
    ));
    Ok(states)
}

/// States with a nonnegative P function, on which `M <= err` must hold.
pub fn classical_battery() -> Result<Vec<(String, State)>> {
    let mut states: Vec<(String, State)> = vec![
        ("gaussian vacuum".into(), GaussianState::vacuum().into()),
        (
            "coherent 2-i".into(),
            make_coherent(Complex64::new(2.0, -1.0)).into(),
        ),
        (
            "coherent 0.5i".into(),
            make_coherent(Complex64::new(0.0, 0.5)).into(),
        ),
    ];
    for nbar in [0.3, 1.0, 2.5] {
        states.push((
            format!("gaussian thermal {nbar}"),
            make_thermal(nbar)?.into(),
        ));
    }
    states.push(("fock vacuum".into(), FockDiagonalState::vacuum().into()));
    for nbar in [0.3, 1.0] {
        states.push((
            format!("fock thermal {nbar}"),
            FockDiagonalState::thermal(nbar, 60)?.into(),
        ));
    }
    states.push((
        "poisson 1.5".into(),
        FockDiagonalState::poisson(1.5, 40)?.into(),
    ));
    for n in [1, 2] {
        states.push((
            format!("classicalized |{n}>"),
            classicalize_fock_auto(&FockDiagonalState::number(n))?.into(),
        ));
    }
    Ok(states)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckOutcome {
    fn new(name: &str, passed: bool, detail: String) -> Self {
        Self {
            name: name.to_string(),
            passed,
            detail,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerifySuite {
    Axioms,
    Oracles,
    All,
}

fn classicalizer() -> ChannelSpec {
    ChannelSpec::classicalizer()
}

/// Random diagonal mixtures of up to four components drawn from a fixed pool.
pub fn random_fock_mixtures(count: usize, seed: u64) -> Result<Vec<Vec<(f64, State)>>> {
    let pool: Vec<FockDiagonalState> = vec![
        FockDiagonalState::vacuum(),
        FockDiagonalState::number(1),
        FockDiagonalState::number(2),
        FockDiagonalState::number(3),
        FockDiagonalState::thermal(0.5, 40)?,
        make_mixture(&[0.2, 0.3, 0.5])?,
    ];
    let mut out = Vec::with_capacity(count);
    for i in 0..count as u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(i);
        let k = rng.gen_range(1..=4usize);
        let mut cuts: Vec<f64> = (0..k - 1).map(|_| rng.gen()).collect();
        cuts.sort_by(f64::total_cmp);
        cuts.insert(0, 0.0);
        cuts.push(1.0);
        let parts = cuts
            .windows(2)
            .map(|w| {
                (
                    w[1] - w[0],
                    State::Fock(pool[rng.gen_range(0..pool.len())].clone()),
                )
            })
            .collect();
        out.push(parts);
    }
    Ok(out)
}

/// Random squeezed thermal states with random displacements and rotations.
pub fn random_gaussian_cases(
    count: usize,
    seed: u64,
) -> Result<Vec<(GaussianState, Complex64, f64)>> {
    let mut out = Vec::with_capacity(count);
    for i in 0..count as u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(i);
        let state = make_squeezed_thermal(
            rng.gen_range(0.0..2.0),
            rng.gen_range(0.0..1.2),
            rng.gen_range(0.0..std::f64::consts::PI),
        )?;
        let alpha = Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let theta = rng.gen_range(0.0..std::f64::consts::TAU);
        out.push((state, alpha, theta));
    }
    Ok(out)
}

pub fn check_convexity(tol: f64) -> Result<CheckOutcome> {
    let cases = random_fock_mixtures(50, 7)?;
    let gaps: Vec<Estimate> = cases
        .par_iter()
        .map(|parts| convexity_gap(parts, &classicalizer(), FunctionalSpec::wigner(), tol))
        .collect::<Result<_>>()?;
    let worst = gaps
        .iter()
        .map(|g| g.value + g.err)
        .fold(f64::INFINITY, f64::min);
    Ok(CheckOutcome::new(
        "convexity",
        worst >= 0.0,
        format!("50 mixtures; min(gap+err)={}", sig7(worst)),
    ))
}

pub fn check_invariance(tol: f64) -> Result<CheckOutcome> {
    let cases = random_gaussian_cases(20, 11)?;
    let f = FunctionalSpec::wigner();
    let devs: Vec<f64> = cases
        .par_iter()
        .map(|(state, alpha, theta)| {
            let n = quantumness_norm(&(*state).into(), &classicalizer(), f, tol)?.value;
            let moved = state.apply(&ChannelSpec::displacement(*alpha)?);
            let turned = state.apply(&ChannelSpec::rotation(*theta)?);
            let nd = quantumness_norm(&moved.into(), &classicalizer(), f, tol)?.value;
            let nr = quantumness_norm(&turned.into(), &classicalizer(), f, tol)?.value;
            Ok((n - nd).abs().max((n - nr).abs()))
        })
        .collect::<Result<_>>()?;
    let worst = devs.iter().copied().fold(0.0, f64::max);
    Ok(CheckOutcome::new(
        "displacement_rotation_invariance",
        worst <= 2.0 * tol,
        format!(
            "20 states; max|dN|={} bound={}",
            sig7(worst),
            sig7(2.0 * tol)
        ),
    ))
}

fn worst_gap(gaps: Vec<(String, f64, Estimate)>, name: &str) -> CheckOutcome {
    let failures: Vec<String> = gaps
        .iter()
        .filter(|(_, _, g)| g.value < -g.err)
        .map(|(s, l, g)| format!("{s}@{l}:{}", sig7(g.value)))
        .collect();
    let detail = if failures.is_empty() {
        format!("{} cases", gaps.len())
    } else {
        format!(
            "{} of {} cases below -err: {}",
            failures.len(),
            gaps.len(),
            failures.join("; ")
        )
    };
    CheckOutcome::new(name, failures.is_empty(), detail)
}

pub fn check_monotonicity(tol: f64) -> Result<Vec<CheckOutcome>> {
    let battery = state_battery()?;
    let f = FunctionalSpec::wigner();
    let jobs: Vec<(&String, &State, f64)> = battery
        .iter()
        .flat_map(|(n, s)| MONOTONICITY_LAMBDAS.iter().map(move |&l| (n, s, l)))
        .collect();
    let weak: Vec<(String, f64, Estimate)> = jobs
        .par_iter()
        .map(|&(n, s, l)| {
            Ok((
                n.clone(),
                l,
                monotonicity_gap_weak(s, l, &classicalizer(), f, tol)?,
            ))
        })
        .collect::<Result<_>>()?;
    let strong: Vec<(String, f64, Estimate)> = jobs
        .par_iter()
        .filter(|(_, s, _)| matches!(s, State::Fock(_)))
        .map(|&(n, s, l)| {
            Ok((
                n.clone(),
                l,
                monotonicity_gap_strong(s, l, &classicalizer(), f, tol)?,
            ))
        })
        .collect::<Result<_>>()?;
    Ok(vec![
        worst_gap(weak, "weak_monotonicity"),
        worst_gap(strong, "strong_monotonicity"),
    ])
}

pub fn check_classical_bound(tol: f64) -> Result<CheckOutcome> {
    let battery = classical_battery()?;
    let base = baseline(&classicalizer(), FunctionalSpec::wigner(), tol)?;
    let results: Vec<(String, f64, f64)> = battery
        .par_iter()
        .map(|(n, s)| {
            let r =
                measure_m_with_baseline(s, &classicalizer(), FunctionalSpec::wigner(), tol, base)?;
            Ok((n.clone(), r.m_value, r.err))
        })
        .collect::<Result<_>>()?;
    let bad: Vec<String> = results
        .iter()
        .filter(|(_, m, e)| m > e)
        .map(|(n, m, _)| format!("{n}:{}", sig7(*m)))
        .collect();
    let max_m = results
        .iter()
        .map(|r| r.1)
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(CheckOutcome::new(
        "classical_bound",
        bad.is_empty(),
        format!(
            "{} states; max M={} {}",
            results.len(),
            sig7(max_m),
            bad.join("; ")
        )
        .trim_end()
        .to_string(),
    ))
}

pub fn check_nogo_existence(tol: f64) -> Result<CheckOutcome> {
    let battery = state_battery()?;
    let base = baseline(&classicalizer(), FunctionalSpec::wigner(), tol)?;
    let results: Vec<(bool, Classification)> = battery
        .par_iter()
        .map(|(_, s)| {
            let r =
                measure_m_with_baseline(s, &classicalizer(), FunctionalSpec::wigner(), tol, base)?;
            Ok((matches!(s, State::Gaussian(_)), r.classification))
        })
        .collect::<Result<_>>()?;
    let count = |gaussian: bool| {
        results
            .iter()
            .filter(|(g, c)| *g == gaussian && *c == Classification::NogoInstance)
            .count()
    };
    let (g, f) = (count(true), count(false));
    Ok(CheckOutcome::new(
        "nogo_existence",
        g >= 1 && f >= 1,
        format!("gaussian={g} fock={f}"),
    ))
}

/// Quadrature of `|W^(0) - W^(-2)|` of a Gaussian state, bypassing any channel.
fn gaussian_s_shift_direct(state: &GaussianState, tol: f64) -> Result<f64> {
    let w0 = OrderedGaussian::new(state, 0.0)?;
    let w2 = OrderedGaussian::new(state, -2.0)?;
    let shape = (w0.cov() + w2.cov()) * 0.5;
    let l = principal_factor(&shape)?;
    let center = state.mean();
    let term = |w: &OrderedGaussian| -> Result<EnvelopeTerm> {
        let prec = w
            .cov()
            .try_inverse()
            .ok_or(Error::Unsupported("degenerate covariance".into()))?;
        let m = (l.transpose() * prec * l).symmetric_eigenvalues().min();
        Ok(EnvelopeTerm::gaussian(w.peak(), 2.0 / m))
    };
    let hint = DecayHint {
        center,
        shape,
        envelope: Envelope::new(vec![term(&w0)?, term(&w2)?]),
        sample_spacing: 0.02,
    };
    let diff = PlaneFunction::new(move |x, y| w0.eval(x, y) - w2.eval(x, y), hint);
    Ok(integrate_plane_abs_pow(&diff, 1.0, tol)?.value)
}

fn fock_s_shift_direct(state: &FockDiagonalState, tol: f64) -> Result<f64> {
    let profile = OrderedFock::new(state, 0.0)?
        .into_profile()
        .minus(OrderedFock::new(state, -2.0)?.into_profile());
    Ok(integrate_radial_abs_pow(&profile, 1.0, tol)?.value)
}

pub fn check_s_shift(tol: f64) -> Result<CheckOutcome> {
    let f = FunctionalSpec::wigner();
    let mut worst = f64::NEG_INFINITY;
    for state in [
        make_squeezed_thermal(1.0, 0.7, 0.3)?,
        make_squeezed_thermal(0.0, 1.0, 0.0)?,
        make_thermal(0.5)?,
    ] {
        let via = quantumness_norm(&state.into(), &classicalizer(), f, tol)?;
        worst =
            worst.max((via.value - gaussian_s_shift_direct(&state, tol)?).abs() - via.err - tol);
    }
    for state in [
        FockDiagonalState::number(1),
        FockDiagonalState::number(2),
        make_mixture(&[0.4, 0.6])?,
    ] {
        let via = quantumness_norm(&state.clone().into(), &classicalizer(), f, tol)?;
        worst = worst.max((via.value - fock_s_shift_direct(&state, tol)?).abs() - via.err - tol);
    }
    Ok(CheckOutcome::new(
        "s_shift_identity",
        worst <= 0.0,
        format!("max excess over budget={}", sig7(worst)),
    ))
}

pub fn check_classicalized_fock(tol: f64) -> Result<CheckOutcome> {
    let _ = tol;
    let mut worst: f64 = 0.0;
    for n in 0..=5 {
        let state = FockDiagonalState::number(n);
        let out = classicalize_fock_auto(&state)?;
        for i in 0..=300 {
            let r = 0.02 * i as f64;
            let a = wigner_s_fock(&out, 0.0, r)?;
            let b = wigner_s_fock(&state, -2.0, r)?;
            worst = worst.max((a - b).abs());
        }
    }
    Ok(CheckOutcome::new(
        "classicalized_fock_vs_s_shift",
        worst <= 1e-6,
        format!("n<=5; sup|dW|={}", sig7(worst)),
    ))
}

pub fn check_cross_engine(tol: f64) -> Result<CheckOutcome> {
    let mut worst_w: f64 = 0.0;
    for nbar in [0.0, 0.5, 1.0, 2.0] {
        let g = make_thermal(nbar)?;
        let w_g = OrderedGaussian::new(&g, 0.0)?;
        let fock = FockDiagonalState::thermal(nbar, 120)?;
        for i in 0..=100 {
            let r = 0.05 * i as f64;
            worst_w = worst_w.max((w_g.eval(r, 0.0) - wigner_s_fock(&fock, 0.0, r)?).abs());
        }
    }
    let f = FunctionalSpec::wigner();
    let ng = quantumness_norm(&make_thermal(1.0)?.into(), &classicalizer(), f, tol)?;
    let nf = quantumness_norm(
        &FockDiagonalState::thermal(1.0, 60)?.into(),
        &classicalizer(),
        f,
        tol,
    )?;
    let dn = (ng.value - nf.value).abs();
    let budget = ng.err + nf.err + tol;
    Ok(CheckOutcome::new(
        "cross_engine_agreement",
        worst_w <= 1e-8 && dn <= budget,
        format!(
            "thermal sup|dW|={} |dN|={} budget={}",
            sig7(worst_w),
            sig7(dn),
            sig7(budget)
        ),
    ))
}

pub fn check_closed_forms(tol: f64) -> Result<CheckOutcome> {
    let f = FunctionalSpec::wigner();
    let b = baseline(&classicalizer(), f, tol)?;
    let vac = quantumness_norm(&GaussianState::vacuum().into(), &classicalizer(), f, tol)?;
    let th = quantumness_norm(&make_thermal(1.0)?.into(), &classicalizer(), f, tol)?;
    let d_vac = (vac.value - classicalizer_vacuum_closed_form()).abs();
    let d_th = (th.value - isotropic_l1_distance(0.75, 1.25)).abs();
    let one = wigner_negativity(&FockDiagonalState::number(1), tol)?;
    let d_one = (one.value - (4.0 * (-0.5f64).exp() - 2.0)).abs();
    let passed = b.value == classicalizer_vacuum_closed_form()
        && d_vac <= vac.err + tol
        && d_th <= th.err + tol
        && d_one <= one.err + tol;
    Ok(CheckOutcome::new(
        "closed_form_baselines",
        passed,
        format!(
            "vacuum {} thermal {} negativity(|1>) {}",
            sig7(d_vac),
            sig7(d_th),
            sig7(d_one)
        ),
    ))
}

fn collect(checks: Vec<Result<CheckOutcome>>, name: &str) -> Vec<CheckOutcome> {
    checks
        .into_iter()
        .map(|c| c.unwrap_or_else(|e| CheckOutcome::new(name, false, format!("error: {e}"))))
        .collect()
}

/// Runs the requested batteries; a check that errors is reported as failed.
pub fn run_verify(suite: VerifySuite, tol: f64) -> Vec<CheckOutcome> {
    let mut out = Vec::new();
    if matches!(suite, VerifySuite::Axioms | VerifySuite::All) {
        out.extend(collect(
            vec![check_convexity(tol), check_invariance(tol)],
            "axiom",
        ));
        match check_monotonicity(tol) {
            Ok(v) => out.extend(v),
            Err(e) => out.push(CheckOutcome::new(
                "monotonicity",
                false,
                format!("error: {e}"),
            )),
        }
        out.extend(collect(
            vec![check_classical_bound(tol), check_nogo_existence(tol)],
            "axiom",
        ));
    }
    if matches!(suite, VerifySuite::Oracles | VerifySuite::All) {
        out.extend(collect(
            vec![
                check_s_shift(tol),
                check_classicalized_fock(tol),
                check_cross_engine(tol),
                check_closed_forms(tol),
            ],
            "oracle",
        ));
    }
    out
}
