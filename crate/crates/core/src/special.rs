//! Special functions needed by the densities.

/// Crossover between the power series and the large-argument expansion.
const SERIES_LIMIT: f64 = 30.0;

/// Exponentially scaled modified Bessel function `exp(-x) * I0(x)` for `x >= 0`.
pub fn bessel_i0_scaled(x: f64) -> f64 {
    let x = x.abs();
    if x <= SERIES_LIMIT {
        i0_series(x) * (-x).exp()
    } else {
        i0_scaled_asymptotic(x)
    }
}

/// Modified Bessel function of the first kind, order zero.
pub fn bessel_i0(x: f64) -> f64 {
    let x = x.abs();
    if x <= SERIES_LIMIT {
        i0_series(x)
    } else {
        i0_scaled_asymptotic(x) * x.exp()
    }
}

// sum_k (x^2/4)^k / (k!)^2, all terms positive
fn i0_series(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k = 0.0;
    loop {
        k += 1.0;
        term *= q / (k * k);
        sum += term;
        if term < sum * 1e-17 {
            return sum;
        }
    }
}

// exp(-x) I0(x) ~ (2 pi x)^(-1/2) sum_k ((2k-1)!!)^2 / (k! (8x)^k)
fn i0_scaled_asymptotic(x: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k: f64 = 0.0;
    loop {
        let next = term * (2.0 * k + 1.0).powi(2) / (8.0 * (k + 1.0) * x);
        if next >= term || next < 1e-17 * sum {
            break;
        }
        sum += next;
        term = next;
        k += 1.0;
    }
    sum / (2.0 * std::f64::consts::PI * x).sqrt()
}

pub fn erf(x: f64) -> f64 {
    statrs::function::erf::erf(x)
}
