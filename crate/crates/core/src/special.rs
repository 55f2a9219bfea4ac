//! Orthogonal polynomials and quadrature used by wavefunction assembly.
//!
//! Generalized Laguerre and Jacobi polynomials are evaluated by their
//! three-term recurrences; explicit factorial sums overflow and cancel well
//! before the degrees needed here (n up to ~50). Quadrature is composite
//! Simpson on uniform grids, which is plenty for smooth, exponentially
//! decaying integrands.

use crate::error::{Error, Result};

/// Generalized Laguerre polynomial L_n^(beta)(x).
///
/// Uses the recurrence
/// `k L_k = (2k - 1 + beta - x) L_{k-1} - (k - 1 + beta) L_{k-2}`
/// with `L_0 = 1`, `L_1 = 1 + beta - x`.
///
/// Requires `beta > -1` (the orthogonality weight x^beta e^(-x) must be
/// integrable); smaller orders never arise from valid quantum numbers.
pub fn laguerre(n: u32, beta: f64, x: f64) -> Result<f64> {
    if beta <= -1.0 || beta.is_nan() {
        return Err(Error::Domain(format!(
            "laguerre order beta = {beta} must be > -1"
        )));
    }
    if n == 0 {
        return Ok(1.0);
    }
    let mut prev = 1.0;
    let mut cur = 1.0 + beta - x;
    for k in 2..=n {
        let k = f64::from(k);
        let next = ((2.0 * k - 1.0 + beta - x) * cur - (k - 1.0 + beta) * prev) / k;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// Jacobi polynomial P_n^(p,q)(x) by the standard three-term recurrence.
///
/// Only the general (alpha3 != 0) wavefunction branch consumes this; the four
/// potential families all reduce to the Laguerre branch.
pub fn jacobi(n: u32, p: f64, q: f64, x: f64) -> Result<f64> {
    if p <= -1.0 || q <= -1.0 || p.is_nan() || q.is_nan() {
        return Err(Error::Domain(format!(
            "jacobi parameters (p, q) = ({p}, {q}) must both be > -1"
        )));
    }
    if n == 0 {
        return Ok(1.0);
    }
    let mut prev = 1.0;
    let mut cur = (p + 1.0) + (p + q + 2.0) * (x - 1.0) / 2.0;
    for k in 2..=n {
        let k = f64::from(k);
        let s = 2.0 * k + p + q;
        let a = 2.0 * k * (k + p + q) * (s - 2.0);
        let b = (s - 1.0) * (s * (s - 2.0) * x + p * p - q * q);
        let c = 2.0 * (k + p - 1.0) * (k + q - 1.0) * s;
        let next = (b * cur - c * prev) / a;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// Composite Simpson estimate of the integral of uniformly sampled values.
///
/// An even sample count leaves one panel over; that panel is closed with the
/// trapezoid rule.
pub fn integrate_samples(values: &[f64], step: f64) -> Result<f64> {
    if values.len() < 2 {
        return Err(Error::InsufficientSamples {
            count: values.len(),
        });
    }
    if step <= 0.0 || !step.is_finite() {
        return Err(Error::Domain(format!("step = {step} must be positive")));
    }
    // Simpson wants an odd number of points; keep the largest odd prefix.
    let m = if values.len() % 2 == 1 {
        values.len()
    } else {
        values.len() - 1
    };
    let mut acc = 0.0;
    if m >= 3 {
        acc += values[0] + values[m - 1];
        let mut odd = 0.0;
        let mut even = 0.0;
        for (i, &v) in values.iter().enumerate().take(m - 1).skip(1) {
            if i % 2 == 1 {
                odd += v;
            } else {
                even += v;
            }
        }
        acc = (acc + 4.0 * odd + 2.0 * even) * step / 3.0;
    }
    if m < values.len() {
        acc += 0.5 * step * (values[values.len() - 2] + values[values.len() - 1]);
    }
    Ok(acc)
}

/// Natural log of the Gamma function for x > 0 (Lanczos, g = 7, 9 terms).
pub fn ln_gamma(x: f64) -> f64 {
    const COEFFS: [f64; 8] = [
        676.5203681218851,
        -1259.1392167224028,
        771.323_428_777_653_1,
        -176.615_029_162_140_6,
        12.507343278686905,
        -0.13857109526572012,
        9.984_369_578_019_572e-6,
        1.5056327351493116e-7,
    ];
    assert!(x > 0.0, "ln_gamma requires a positive argument, got {x}");
    let mut acc = 0.999_999_999_999_809_9;
    for (i, c) in COEFFS.iter().enumerate() {
        acc += c / (x + i as f64);
    }
    let t = x + 6.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x - 0.5) * t.ln() - t + acc.ln()
}

/// Generalized binomial coefficient C(n + beta, n) via log-Gamma, so
/// non-integer orders (flux-shifted and sigma-shifted) work unchanged.
pub fn binomial(n: u32, beta: f64) -> f64 {
    let nf = f64::from(n);
    (ln_gamma(nf + beta + 1.0) - ln_gamma(beta + 1.0) - ln_gamma(nf + 1.0)).exp()
}
