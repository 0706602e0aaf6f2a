//! Test oracles that share no code with the simulator: adaptive quadrature,
//! finite differences and goodness-of-fit statistics.

use std::f64::consts::PI;

use statrs::distribution::{ChiSquared, ContinuousCDF};

/// Adaptive Simpson quadrature of `f` on `[a, b]` to absolute tolerance `tol`.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(f, a, b, fa, fm, fb, whole, tol, 48)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        left + right + delta / 15.0
    } else {
        simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
}

/// Integral over (-pi, pi] split into `panels` equal panels, each integrated
/// adaptively. Panelling keeps narrow peaks from being stepped over.
pub fn integrate_circle<F: Fn(f64) -> f64>(f: &F, panels: usize, tol: f64) -> f64 {
    integrate_panels(f, -PI, PI, panels, tol)
}

pub fn integrate_panels<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, panels: usize, tol: f64) -> f64 {
    let h = (b - a) / panels as f64;
    (0..panels)
        .map(|k| {
            let lo = a + k as f64 * h;
            adaptive_simpson(f, lo, lo + h, tol / panels as f64)
        })
        .sum()
}

/// Central difference `(f(x + h) - f(x - h)) / 2h`.
pub fn central_difference<F: Fn(f64) -> f64>(f: &F, x: f64, h: f64) -> f64 {
    (f(x + h) - f(x - h)) / (2.0 * h)
}

#[derive(Debug, Clone, Copy)]
pub struct ChiSquareOutcome {
    pub statistic: f64,
    pub dof: usize,
    pub critical: f64,
}

impl ChiSquareOutcome {
    pub fn passes(&self) -> bool {
        self.statistic <= self.critical
    }
}

/// Pearson goodness of fit of observed counts against cell probabilities.
/// Adjacent cells are pooled until each expected count is at least 5.
pub fn chi_square_gof(observed: &[u64], probabilities: &[f64], alpha: f64) -> ChiSquareOutcome {
    assert_eq!(observed.len(), probabilities.len());
    let n: u64 = observed.iter().sum();
    let n = n as f64;
    let mut cells: Vec<(f64, f64)> = Vec::new();
    let (mut o_acc, mut e_acc) = (0.0, 0.0);
    for (&o, &p) in observed.iter().zip(probabilities) {
        o_acc += o as f64;
        e_acc += p * n;
        if e_acc >= 5.0 {
            cells.push((o_acc, e_acc));
            o_acc = 0.0;
            e_acc = 0.0;
        }
    }
    if e_acc > 0.0 || o_acc > 0.0 {
        match cells.last_mut() {
            Some(last) => {
                last.0 += o_acc;
                last.1 += e_acc;
            }
            None => cells.push((o_acc, e_acc)),
        }
    }
    let statistic = cells.iter().map(|(o, e)| (o - e).powi(2) / e).sum();
    let dof = cells.len().saturating_sub(1).max(1);
    let critical = ChiSquared::new(dof as f64).unwrap().inverse_cdf(1.0 - alpha);
    ChiSquareOutcome {
        statistic,
        dof,
        critical,
    }
}

/// Kolmogorov-Smirnov distance of a sample from the uniform law on `[a, b]`.
pub fn ks_uniform(samples: &mut [f64], a: f64, b: f64) -> f64 {
    samples.sort_by(|x, y| x.partial_cmp(y).unwrap());
    let n = samples.len() as f64;
    samples
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let cdf = ((x - a) / (b - a)).clamp(0.0, 1.0);
            (cdf - i as f64 / n).abs().max(((i + 1) as f64 / n - cdf).abs())
        })
        .fold(0.0, f64::max)
}

/// Large-sample KS critical distance at significance `alpha`.
pub fn ks_critical(n: usize, alpha: f64) -> f64 {
    (-0.5 * (alpha / 2.0).ln()).sqrt() / (n as f64).sqrt()
}

/// Modified Bessel function `I_n(x)` from its integral representation.
pub fn bessel_i_quadrature(order: u32, x: f64) -> f64 {
    let f = |t: f64| (x * t.cos()).exp() * (order as f64 * t).cos();
    adaptive_simpson(&f, 0.0, PI, 1e-13) / PI
}
