use crate::error::{Error, Result};

/// Bracket width below which bisection stops.
pub const ROOT_TOL: f64 = 1e-12;

/// Default number of uniform samples used to bracket sign changes.
pub const DEFAULT_SAMPLES: usize = 4096;

/// Finds every sign change of `f` visible on a uniform grid over `bracket`,
/// refined by bisection to [`ROOT_TOL`].
pub fn locate_sign_changes<F: FnMut(f64) -> f64>(
    f: F,
    bracket: (f64, f64),
    max_roots: usize,
) -> Result<Vec<f64>> {
    locate_sign_changes_sampled(f, bracket, DEFAULT_SAMPLES, max_roots)
}

pub fn locate_sign_changes_sampled<F: FnMut(f64) -> f64>(
    mut f: F,
    bracket: (f64, f64),
    samples: usize,
    max_roots: usize,
) -> Result<Vec<f64>> {
    let (lo, hi) = bracket;
    let samples = samples.max(2);
    let step = (hi - lo) / (samples - 1) as f64;
    let mut roots = Vec::new();
    // last point with a nonzero value
    let mut anchor: Option<(f64, f64)> = None;
    for i in 0..samples {
        let x = if i + 1 == samples {
            hi
        } else {
            lo + step * i as f64
        };
        let fx = f(x);
        if fx == 0.0 || !fx.is_finite() {
            continue;
        }
        if let Some((xa, fa)) = anchor {
            if (fa < 0.0) != (fx < 0.0) {
                if roots.len() == max_roots {
                    return Err(Error::RootBudgetExceeded { max_roots, lo, hi });
                }
                roots.push(bisect(&mut f, xa, fa, x));
            }
        }
        anchor = Some((x, fx));
    }
    Ok(roots)
}

fn bisect<F: FnMut(f64) -> f64>(f: &mut F, mut a: f64, fa: f64, mut b: f64) -> f64 {
    let negative_at_a = fa < 0.0;
    while b - a > ROOT_TOL {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if (fm < 0.0) == negative_at_a {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}
