//! Parametric Nikiforov-Uvarov machinery.
//!
//! The parametric variant of the NU method (Tezcan & Sever, Int. J. Theor.
//! Phys. 48 (2009) 337) turns a hypergeometric-type radial equation
//!
//! ```text
//! psi'' + (a1 - a2 s) / (s (1 - a3 s)) psi'
//!       + (-x1 s^2 + x2 s - x3) / (s^2 (1 - a3 s)^2) psi = 0
//! ```
//!
//! into a plug-in recipe over the six coefficients: ten derived parameters,
//! an algebraic quantization condition, and a closed wavefunction shape.
//! Published statements of the recipe circulate with a few typographical
//! slips; see TYPOS.md for the conventions adopted here.

use crate::error::{Error, Result};
use crate::special;

/// Radicands within this margin below zero are treated as exactly zero;
/// floating-point cancellation produces them at threshold bound states.
const RADICAND_SLACK: f64 = 1e-12;

/// The six base coefficients of the standard form.
///
/// `xi1..xi3` encode the energy and the potential strengths; for the
/// bound-state branches used here `xi1 > 0` and `xi3 >= 0` (checked where
/// consumed, not on construction).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NuInput {
    pub alpha1: f64,
    pub alpha2: f64,
    pub alpha3: f64,
    pub xi1: f64,
    pub xi2: f64,
    pub xi3: f64,
}

/// The ten derived parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NuDerived {
    pub alpha4: f64,
    pub alpha5: f64,
    pub alpha6: f64,
    pub alpha7: f64,
    pub alpha8: f64,
    pub alpha9: f64,
    pub alpha10: f64,
    pub alpha11: f64,
    pub alpha12: f64,
    pub alpha13: f64,
}

/// Closed wavefunction shape.
///
/// With `general_case` false (`alpha3 == 0`):
/// `psi(s) = s^power * exp(rate * s) * L_degree^(order)(scale * s)`,
/// and normalizability demands `rate < 0`.
///
/// With `general_case` true the polynomial factor is the Jacobi pair
/// `P_degree^(order, scale/alpha3 - order - 2)(1 - 2 alpha3 s)` wrapped in
/// `s^power (1 - alpha3 s)^(-power - rate/alpha3)`; [`WavefunctionForm::evaluate`]
/// handles both branches.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WavefunctionForm {
    /// Exponent of s (alpha12).
    pub power: f64,
    /// Coefficient in the exponential factor (alpha13).
    pub rate: f64,
    /// Polynomial degree n.
    pub degree: u32,
    /// Laguerre order alpha10 - 1 (first Jacobi index in the general case).
    pub order: f64,
    /// Argument multiplier alpha11.
    pub scale: f64,
    /// True when alpha3 != 0.
    pub general_case: bool,
    /// alpha3 of the source input, needed to evaluate the general branch.
    pub alpha3: f64,
}

fn checked_sqrt(radicand: f64) -> Option<f64> {
    if radicand >= 0.0 {
        Some(radicand.sqrt())
    } else if radicand >= -RADICAND_SLACK {
        Some(0.0)
    } else {
        None
    }
}

/// Computes the ten derived parameters from the six base coefficients.
///
/// Fails with `complex NU branch` when either radicand (alpha8 or alpha9)
/// is negative, which signals a non-bound-state or invalid-parameter regime.
pub fn derive_parameters(input: &NuInput) -> Result<NuDerived> {
    let NuInput {
        alpha1,
        alpha2,
        alpha3,
        xi1,
        xi2,
        xi3,
    } = *input;
    let alpha4 = (1.0 - alpha1) / 2.0;
    let alpha5 = (alpha2 - 2.0 * alpha3) / 2.0;
    let alpha6 = alpha5 * alpha5 + xi1;
    let alpha7 = 2.0 * alpha4 * alpha5 - xi2;
    let alpha8 = alpha4 * alpha4 + xi3;
    let alpha9 = alpha6 + alpha3 * alpha7 + alpha3 * alpha3 * alpha8;
    let (sqrt8, sqrt9) = match (checked_sqrt(alpha8), checked_sqrt(alpha9)) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(Error::ComplexNuBranch { alpha8, alpha9 }),
    };
    Ok(NuDerived {
        alpha4,
        alpha5,
        alpha6,
        alpha7,
        alpha8,
        alpha9,
        alpha10: alpha1 + 2.0 * alpha4 + 2.0 * sqrt8,
        alpha11: alpha2 - 2.0 * alpha5 + 2.0 * (sqrt9 + alpha3 * sqrt8),
        alpha12: alpha4 + sqrt8,
        alpha13: alpha5 - (sqrt9 + alpha3 * sqrt8),
    })
}

/// Left-hand side of the general quantization condition; a root in the
/// energy (entering through the xi's) is an eigenvalue.
pub fn energy_residual_general(input: &NuInput, n: u32) -> Result<f64> {
    let d = derive_parameters(input)?;
    let nf = f64::from(n);
    let sqrt8 = checked_sqrt(d.alpha8).expect("validated by derive_parameters");
    let sqrt9 = checked_sqrt(d.alpha9).expect("validated by derive_parameters");
    Ok(input.alpha2 * nf - (2.0 * nf + 1.0) * d.alpha5
        + (2.0 * nf + 1.0) * (sqrt9 + input.alpha3 * sqrt8)
        + nf * (nf - 1.0) * input.alpha3
        + d.alpha7
        + 2.0 * input.alpha3 * d.alpha8
        + 2.0 * sqrt8 * sqrt9)
}

/// The alpha3 = 0 reduction of the quantization condition:
/// `n a2 - (2n+1) a5 + (2n+1) sqrt(a9) + a7 + 2 sqrt(a8 a9)`.
pub fn energy_residual_reduced(input: &NuInput, n: u32) -> Result<f64> {
    if input.alpha3 != 0.0 {
        return Err(Error::Domain(format!(
            "reduced energy condition requires alpha3 = 0, got {}",
            input.alpha3
        )));
    }
    let d = derive_parameters(input)?;
    let nf = f64::from(n);
    let sqrt8 = checked_sqrt(d.alpha8).expect("validated by derive_parameters");
    let sqrt9 = checked_sqrt(d.alpha9).expect("validated by derive_parameters");
    Ok(nf * input.alpha2 - (2.0 * nf + 1.0) * d.alpha5 + (2.0 * nf + 1.0) * sqrt9
        + d.alpha7
        + 2.0 * sqrt8 * sqrt9)
}

/// Absolute tolerance of the bisection root in the energy.
pub const SOLVE_ENERGY_TOLERANCE: f64 = 1e-12;
const SOLVE_ENERGY_MAX_ITER: usize = 200;

/// Bisection root of the reduced quantization condition in the energy.
///
/// `mapper` converts a trial energy into the six standard-form coefficients
/// (it must be a pure function of the energy). The bracket ends must produce
/// residuals of opposite sign.
pub fn solve_energy<F>(mapper: F, n: u32, bracket: (f64, f64)) -> Result<f64>
where
    F: Fn(f64) -> NuInput,
{
    let (mut lo, mut hi) = bracket;
    if lo > hi {
        std::mem::swap(&mut lo, &mut hi);
    }
    let f_lo = energy_residual_reduced(&mapper(lo), n)?;
    let f_hi = energy_residual_reduced(&mapper(hi), n)?;
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::NoSignChange { lo, hi });
    }
    for _ in 0..SOLVE_ENERGY_MAX_ITER {
        let mid = 0.5 * (lo + hi);
        if hi - lo < SOLVE_ENERGY_TOLERANCE {
            return Ok(mid);
        }
        let f_mid = energy_residual_reduced(&mapper(mid), n)?;
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::NoConvergence {
        iterations: SOLVE_ENERGY_MAX_ITER,
    })
}

/// Assembles the wavefunction shape for polynomial degree `n`.
///
/// On the alpha3 = 0 path a non-negative exponential rate means the shape
/// cannot be normalized and is rejected.
pub fn wavefunction_form(derived: &NuDerived, n: u32, alpha3: f64) -> Result<WavefunctionForm> {
    let general_case = alpha3 != 0.0;
    if !general_case && derived.alpha13 >= 0.0 {
        return Err(Error::NonNormalizable {
            rate: derived.alpha13,
        });
    }
    Ok(WavefunctionForm {
        power: derived.alpha12,
        rate: derived.alpha13,
        degree: n,
        order: derived.alpha10 - 1.0,
        scale: derived.alpha11,
        general_case,
        alpha3,
    })
}

impl WavefunctionForm {
    /// Evaluates the shape at a point of its working variable.
    pub fn evaluate(&self, s: f64) -> Result<f64> {
        if self.general_case {
            let p = self.order;
            let q = self.scale / self.alpha3 - self.order - 2.0;
            let poly = special::jacobi(self.degree, p, q, 1.0 - 2.0 * self.alpha3 * s)?;
            let base = 1.0 - self.alpha3 * s;
            Ok(s.powf(self.power) * base.powf(-self.power - self.rate / self.alpha3) * poly)
        } else {
            let poly = special::laguerre(self.degree, self.order, self.scale * s)?;
            Ok(s.powf(self.power) * (self.rate * s).exp() * poly)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    /// Coulomb-type mapping in natural units (hbar = M = 1, b = 1, a = 0):
    /// xi1 = -2E, xi2 = 2, xi3 = J0^2.
    fn coulomb_input(energy: f64, j0: f64) -> NuInput {
        NuInput {
            alpha1: 1.0,
            alpha2: 0.0,
            alpha3: 0.0,
            xi1: -2.0 * energy,
            xi2: 2.0,
            xi3: j0 * j0,
        }
    }

    #[test]
    fn derived_parameters_coulomb_ground() {
        let d = derive_parameters(&coulomb_input(-0.5, 0.5)).unwrap();
        assert_eq!(d.alpha4, 0.0);
        assert_eq!(d.alpha5, 0.0);
        assert_abs_diff_eq!(d.alpha10, 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(d.alpha11, 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(d.alpha12, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(d.alpha13, -1.0, epsilon = 1e-15);
    }

    #[test]
    fn derived_parameters_zero_propagation() {
        let input = NuInput {
            alpha1: 1.0,
            alpha2: 0.0,
            alpha3: 0.0,
            xi1: 0.0,
            xi2: 0.0,
            xi3: 0.0,
        };
        let d = derive_parameters(&input).unwrap();
        for v in [
            d.alpha4, d.alpha5, d.alpha6, d.alpha7, d.alpha8, d.alpha9, d.alpha11, d.alpha12,
            d.alpha13,
        ] {
            assert_eq!(v, 0.0);
        }
        // alpha10 = alpha1 + 0 + 0 = 1 here; every other derived value is 0.
        assert_eq!(d.alpha10, 1.0);
    }

    #[test]
    fn derived_parameters_oscillator_mapping() {
        // Oscillator mapping at its ground state: xi1 = 1/4, xi3 = J0^2/4,
        // and the quantization condition fixes xi2 = (2n + 1 + J0)/2.
        let j0: f64 = 0.5;
        let input = NuInput {
            alpha1: 1.0,
            alpha2: 0.0,
            alpha3: 0.0,
            xi1: 0.25,
            xi2: (1.0 + j0) / 2.0,
            xi3: j0 * j0 / 4.0,
        };
        let d = derive_parameters(&input).unwrap();
        assert_abs_diff_eq!(d.alpha9, 0.25, epsilon = 1e-15);
        assert_abs_diff_eq!(d.alpha11, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(d.alpha12, j0 / 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(d.alpha13, -0.5, epsilon = 1e-15);
    }

    #[test]
    fn derived_parameters_complex_branch() {
        let mut input = coulomb_input(-0.5, 0.5);
        input.xi3 = -1.0; // alpha8 < 0
        assert!(matches!(
            derive_parameters(&input),
            Err(Error::ComplexNuBranch { .. })
        ));
        let scattering = coulomb_input(0.5, 0.5); // xi1 < 0 -> alpha9 < 0
        assert!(matches!(
            derive_parameters(&scattering),
            Err(Error::ComplexNuBranch { .. })
        ));
    }

    #[test]
    fn radicand_slack_treats_tiny_negatives_as_zero() {
        let mut input = coulomb_input(-0.5, 0.5);
        input.xi3 = -1e-13;
        assert!(derive_parameters(&input).is_ok());
    }

    #[test]
    fn residual_vanishes_at_coulomb_eigenvalues() {
        assert_abs_diff_eq!(
            energy_residual_reduced(&coulomb_input(-0.5, 0.5), 0).unwrap(),
            0.0,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            energy_residual_reduced(&coulomb_input(-0.125, 0.5), 1).unwrap(),
            0.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn residual_off_eigenvalue_regression() {
        // E = -0.3 is not an eigenvalue; value frozen from the direct
        // evaluation (2n+1) sqrt(0.6) - 2 + 2 sqrt(0.15).
        let r = energy_residual_reduced(&coulomb_input(-0.3, 0.5), 0).unwrap();
        assert_abs_diff_eq!(r, -0.4508066615170332, epsilon = 1e-15);
        assert!(r != 0.0);
    }

    #[test]
    fn general_equals_reduced_when_alpha3_vanishes() {
        for n in 0..=3 {
            for &e in &[-0.5, -0.3, -0.125] {
                let input = coulomb_input(e, 0.5);
                let g = energy_residual_general(&input, n).unwrap();
                let r = energy_residual_reduced(&input, n).unwrap();
                assert_abs_diff_eq!(g, r, epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn reduced_rejects_nonzero_alpha3() {
        let mut input = coulomb_input(-0.5, 0.5);
        input.alpha3 = 0.1;
        assert!(energy_residual_reduced(&input, 0).is_err());
    }

    #[test]
    fn solve_energy_coulomb_ground() {
        let root = solve_energy(|e| coulomb_input(e, 0.5), 0, (-0.9, -0.1)).unwrap();
        assert_abs_diff_eq!(root, -0.5, epsilon = 1e-10);
    }

    #[test]
    fn solve_energy_reports_missing_sign_change() {
        assert!(matches!(
            solve_energy(|e| coulomb_input(e, 0.5), 0, (-0.45, -0.3)),
            Err(Error::NoSignChange { .. })
        ));
    }

    #[test]
    fn wavefunction_form_coulomb_ground() {
        let d = derive_parameters(&coulomb_input(-0.5, 0.5)).unwrap();
        let form = wavefunction_form(&d, 0, 0.0).unwrap();
        assert_abs_diff_eq!(form.power, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(form.rate, -1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(form.order, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(form.scale, 2.0, epsilon = 1e-15);
        assert!(!form.general_case);
    }

    #[test]
    fn wavefunction_form_rejects_non_decaying_rate() {
        // All xi zero gives alpha13 = 0: exp(0) does not decay.
        let input = NuInput {
            alpha1: 1.0,
            alpha2: 0.0,
            alpha3: 0.0,
            xi1: 0.0,
            xi2: 0.0,
            xi3: 0.0,
        };
        let d = derive_parameters(&input).unwrap();
        assert!(matches!(
            wavefunction_form(&d, 0, 0.0),
            Err(Error::NonNormalizable { rate }) if rate == 0.0
        ));
    }

    #[test]
    fn jacobi_branch_converges_to_laguerre_branch() {
        // The general shape at small alpha3 must approach the alpha3 = 0
        // shape pointwise, with error decreasing monotonically in alpha3.
        let reduced_input = coulomb_input(-0.5, 0.5);
        let reduced = wavefunction_form(&derive_parameters(&reduced_input).unwrap(), 1, 0.0)
            .unwrap();
        let mut last_err = f64::INFINITY;
        for &eps in &[1e-2, 1e-4, 1e-6] {
            let mut input = reduced_input;
            input.alpha3 = eps;
            let form =
                wavefunction_form(&derive_parameters(&input).unwrap(), 1, eps).unwrap();
            let mut worst = 0.0f64;
            for i in 0..=100 {
                let s = 10.0 * f64::from(i) / 100.0;
                let diff = (form.evaluate(s).unwrap() - reduced.evaluate(s).unwrap()).abs();
                worst = worst.max(diff);
            }
            assert!(
                worst < last_err,
                "alpha3 = {eps}: error {worst} did not decrease from {last_err}"
            );
            last_err = worst;
        }
        assert!(last_err < 1e-4);
    }
}
