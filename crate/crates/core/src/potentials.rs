//! The four potential families under an Aharonov-Bohm flux line: mapping to
//! the standard-form coefficients, closed-form energies and radial
//! wavefunctions, and normalization.
//!
//! The flux enters only through the dimensionless ratio `alpha = Phi/Phi_0`,
//! which shifts the orbital quantum number, `l -> l0 = l - alpha`. The
//! effective half-shifted angular momentum is `J0 = l0 + 1/2`; bound-state
//! operations require `J0 > 0` so the reduced wavefunction stays regular and
//! normalizable at the origin.

use crate::error::{Error, Result};
use crate::nu::{self, NuInput, WavefunctionForm};
use crate::parallel;
use crate::special;

/// Normalization tail threshold: |R(r_max)| must sit below this fraction of
/// max |R| before the truncated integral is trusted. The truncated mass is
/// then of order TAIL_THRESHOLD^2, far below the 1e-6 normalization target.
const TAIL_THRESHOLD: f64 = 1e-8;

/// The constants fixing the unit system. Defaults to natural units
/// hbar = M = 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalScale {
    pub hbar: f64,
    pub mass: f64,
}

impl Default for PhysicalScale {
    fn default() -> Self {
        Self {
            hbar: 1.0,
            mass: 1.0,
        }
    }
}

impl PhysicalScale {
    pub fn new(hbar: f64, mass: f64) -> Result<Self> {
        let positive = |x: f64| x.is_finite() && x > 0.0;
        if !positive(hbar) || !positive(mass) {
            return Err(Error::Domain(format!(
                "hbar = {hbar} and mass = {mass} must both be positive"
            )));
        }
        Ok(Self { hbar, mass })
    }

    /// 2M / hbar^2, the factor converting energies to inverse length squared.
    fn two_m_over_hbar2(&self) -> f64 {
        2.0 * self.mass / (self.hbar * self.hbar)
    }
}

/// One of the four solvable radial potentials.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PotentialSpec {
    /// V(r) = a - b/r
    ModifiedCoulomb { a: f64, b: f64 },
    /// V(r) = a + b r^2
    ModifiedOscillator { a: f64, b: f64 },
    /// V(r) = -b/r + c/r^2
    KratzerFues { b: f64, c: f64 },
    /// V(r) = a - b/r + c/r^2
    MieType { a: f64, b: f64, c: f64 },
}

impl PotentialSpec {
    pub fn label(&self) -> &'static str {
        match self {
            Self::ModifiedCoulomb { .. } => "coulomb",
            Self::ModifiedOscillator { .. } => "oscillator",
            Self::KratzerFues { .. } => "kratzer",
            Self::MieType { .. } => "mie",
        }
    }

    /// Full potential value at radius r.
    pub fn value(&self, r: f64) -> f64 {
        match *self {
            Self::ModifiedCoulomb { a, b } => a - b / r,
            Self::ModifiedOscillator { a, b } => a + b * r * r,
            Self::KratzerFues { b, c } => -b / r + c / (r * r),
            Self::MieType { a, b, c } => a - b / r + c / (r * r),
        }
    }

    /// Constant offset of the family (the asymptotic value for all but the
    /// oscillator, whose potential grows without bound).
    pub fn constant_offset(&self) -> f64 {
        match *self {
            Self::ModifiedCoulomb { a, .. }
            | Self::ModifiedOscillator { a, .. }
            | Self::MieType { a, .. } => a,
            Self::KratzerFues { .. } => 0.0,
        }
    }

    /// Coefficient of the inverse-square term, zero for families without one.
    pub fn inverse_square_strength(&self) -> f64 {
        match *self {
            Self::KratzerFues { c, .. } | Self::MieType { c, .. } => c,
            _ => 0.0,
        }
    }

    /// Coefficient of the attractive -b/r term, zero for the oscillator.
    pub fn coulomb_strength(&self) -> f64 {
        match *self {
            Self::ModifiedCoulomb { b, .. }
            | Self::KratzerFues { b, .. }
            | Self::MieType { b, .. } => b,
            Self::ModifiedOscillator { .. } => 0.0,
        }
    }

    /// V(r) minus its inverse-square part; stays finite at every r > 0 and
    /// carries no singular term stronger than 1/r.
    pub fn regular_part(&self, r: f64) -> f64 {
        match *self {
            Self::ModifiedCoulomb { a, b } => a - b / r,
            Self::ModifiedOscillator { a, b } => a + b * r * r,
            Self::KratzerFues { b, .. } => -b / r,
            Self::MieType { a, b, .. } => a - b / r,
        }
    }

    /// Checks the family-level coefficient constraints for bound states:
    /// b > 0 everywhere, c >= 0 where an inverse-square term exists (the
    /// fall-to-center regime is excluded).
    pub fn validate_for_bound_states(&self) -> Result<()> {
        let b = match *self {
            Self::ModifiedCoulomb { b, .. }
            | Self::ModifiedOscillator { b, .. }
            | Self::KratzerFues { b, .. }
            | Self::MieType { b, .. } => b,
        };
        if b <= 0.0 || b.is_nan() {
            return Err(Error::Domain(format!(
                "{} requires b > 0 for bound states, got b = {b}",
                self.label()
            )));
        }
        let c = self.inverse_square_strength();
        if c < 0.0 {
            return Err(Error::Domain(format!(
                "{} requires c >= 0 (fall-to-center regime excluded), got c = {c}",
                self.label()
            )));
        }
        Ok(())
    }
}

/// Quantum numbers of a state, with the flux ratio alpha = Phi/Phi_0.
///
/// The magnetic quantum number is bookkeeping only: it never enters the
/// radial problem and no |m| <= l constraint is enforced under flux.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantumState {
    /// Radial quantum number (number of radial nodes).
    pub n: u32,
    /// Orbital quantum number.
    pub l: u32,
    /// Flux ratio alpha = Phi/Phi_0.
    pub flux: f64,
    /// Magnetic quantum number, stored but unused.
    pub m: Option<i32>,
}

impl QuantumState {
    pub fn new(n: u32, l: u32, flux: f64) -> Self {
        Self {
            n,
            l,
            flux,
            m: None,
        }
    }

    /// Effective orbital quantum number l0 = l - alpha.
    pub fn effective_l(&self) -> f64 {
        f64::from(self.l) - self.flux
    }

    /// Effective half-shifted angular momentum J0 = l0 + 1/2.
    pub fn effective_j(&self) -> f64 {
        self.effective_l() + 0.5
    }

    /// J0, or the regularity-bound error when J0 <= 0.
    pub fn require_regular(&self) -> Result<f64> {
        let j0 = self.effective_j();
        if j0 > 0.0 {
            Ok(j0)
        } else {
            Err(Error::FluxRegularity { j0 })
        }
    }
}

/// Where an energy value came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnergySource {
    ClosedForm,
    NuRoot,
    Oracle,
}

impl EnergySource {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::ClosedForm => "closed_form",
            Self::NuRoot => "nu_root",
            Self::Oracle => "oracle",
        }
    }
}

/// A single bound-state energy with its provenance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyLevel {
    pub n: u32,
    pub l: u32,
    pub flux: f64,
    pub energy: f64,
    pub source: EnergySource,
}

/// Working variable of a closed-form wavefunction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RadialVariable {
    /// The shape is a function of r directly.
    Radius,
    /// The shape is a function of s = omega r^2 (oscillator family).
    OmegaRSquared { omega: f64 },
}

/// A closed-form radial wavefunction: the assembled shape, its working
/// variable, and (after [`normalize`]) the constant making
/// `integral of R^2 r^2 dr` equal one.
///
/// The physical radial function is `R(r) = U(r) / sqrt(r)` where `U` is the
/// assembled shape in its working variable. `U -> 0` at the origin whenever
/// J0 > 0; `R` itself may approach a finite value (or diverge integrably)
/// when the effective l0 is zero (or negative).
#[derive(Debug, Clone, PartialEq)]
pub struct RadialWavefunction {
    pub family: PotentialSpec,
    pub state: QuantumState,
    pub energy: f64,
    pub variable: RadialVariable,
    pub form: WavefunctionForm,
    pub norm_constant: Option<f64>,
}

impl RadialWavefunction {
    /// The assembled shape U evaluated at radius r (converting through
    /// s = omega r^2 for the oscillator family). Unnormalized.
    pub fn evaluate_u(&self, r: f64) -> f64 {
        let s = match self.variable {
            RadialVariable::Radius => r,
            RadialVariable::OmegaRSquared { omega } => omega * r * r,
        };
        self.form
            .evaluate(s)
            .expect("closed-form shapes evaluate on the Laguerre branch")
    }

    /// The physical radial function R(r) = N U(r) / sqrt(r), with N = 1
    /// until [`normalize`] has set the constant. Requires r > 0.
    pub fn evaluate_radial(&self, r: f64) -> f64 {
        self.norm_constant.unwrap_or(1.0) * self.evaluate_u(r) / r.sqrt()
    }
}

/// Maps a family, state and trial energy onto the six standard-form
/// coefficients of the radial equation (always alpha1 = 1, alpha2 = alpha3 = 0
/// for these families).
pub fn effective_radial_coefficients(
    spec: &PotentialSpec,
    state: &QuantumState,
    scale: &PhysicalScale,
    energy: f64,
) -> Result<NuInput> {
    let j0 = state.require_regular()?;
    let k = scale.two_m_over_hbar2();
    let (xi1, xi2, xi3) = match *spec {
        PotentialSpec::ModifiedCoulomb { a, b } => {
            let delta = k * (energy - a);
            (-delta, k * b, j0 * j0)
        }
        PotentialSpec::ModifiedOscillator { a, b } => {
            let omega = (k * b).sqrt();
            let delta = k * (energy - a);
            (0.25, delta / (4.0 * omega), j0 * j0 / 4.0)
        }
        PotentialSpec::KratzerFues { b, c } => {
            let sigma2 = k * c + j0 * j0;
            if sigma2 < 0.0 {
                return Err(Error::Domain(format!(
                    "sigma^2 = {sigma2} < 0: inverse-square attraction too strong"
                )));
            }
            (-k * energy, k * b, sigma2)
        }
        PotentialSpec::MieType { a, b, c } => {
            let sigma2 = k * c + j0 * j0;
            if sigma2 < 0.0 {
                return Err(Error::Domain(format!(
                    "sigma^2 = {sigma2} < 0: inverse-square attraction too strong"
                )));
            }
            (-k * (energy - a), k * b, sigma2)
        }
    };
    Ok(NuInput {
        alpha1: 1.0,
        alpha2: 0.0,
        alpha3: 0.0,
        xi1,
        xi2,
        xi3,
    })
}

/// The constant-offset-independent part of the closed-form energy,
/// E - a (negative for the attractive families, positive for the oscillator).
fn binding_energy(spec: &PotentialSpec, state: &QuantumState, scale: &PhysicalScale) -> Result<f64> {
    spec.validate_for_bound_states()?;
    let j0 = state.require_regular()?;
    let nf = f64::from(state.n);
    let k = scale.two_m_over_hbar2();
    Ok(match *spec {
        PotentialSpec::ModifiedCoulomb { b, .. } => {
            // denominator n + 1 + l - alpha = n + 1/2 + J0 > 0 under the
            // regularity bound
            let denom = nf + 1.0 + f64::from(state.l) - state.flux;
            -scale.mass * b * b / (2.0 * scale.hbar * scale.hbar * denom * denom)
        }
        PotentialSpec::ModifiedOscillator { b, .. } => {
            scale.hbar
                * (2.0 * b / scale.mass).sqrt()
                * (2.0 * nf + 1.5 + f64::from(state.l) - state.flux)
        }
        PotentialSpec::KratzerFues { b, c } | PotentialSpec::MieType { b, c, .. } => {
            let sigma = (k * c + j0 * j0).sqrt();
            let denom = nf + 0.5 + sigma;
            -scale.mass * b * b / (2.0 * scale.hbar * scale.hbar * denom * denom)
        }
    })
}

/// A copy of the family with its constant offset removed.
fn without_offset(spec: &PotentialSpec) -> PotentialSpec {
    match *spec {
        PotentialSpec::ModifiedCoulomb { b, .. } => PotentialSpec::ModifiedCoulomb { a: 0.0, b },
        PotentialSpec::ModifiedOscillator { b, .. } => {
            PotentialSpec::ModifiedOscillator { a: 0.0, b }
        }
        PotentialSpec::KratzerFues { b, c } => PotentialSpec::KratzerFues { b, c },
        PotentialSpec::MieType { b, c, .. } => PotentialSpec::MieType { a: 0.0, b, c },
    }
}

/// Closed-form bound-state energy of the family.
pub fn closed_form_energy(
    spec: &PotentialSpec,
    state: &QuantumState,
    scale: &PhysicalScale,
) -> Result<EnergyLevel> {
    let energy = spec.constant_offset() + binding_energy(spec, state, scale)?;
    Ok(EnergyLevel {
        n: state.n,
        l: state.l,
        flux: state.flux,
        energy,
        source: EnergySource::ClosedForm,
    })
}

/// Assembles the closed-form radial wavefunction by feeding the family
/// mapping, evaluated at the closed-form energy, through the generic
/// wavefunction recipe.
pub fn closed_form_wavefunction(
    spec: &PotentialSpec,
    state: &QuantumState,
    scale: &PhysicalScale,
) -> Result<RadialWavefunction> {
    let level = closed_form_energy(spec, state, scale)?;
    // The shape depends only on the binding part E - a; mapping the
    // offset-free family at the binding energy keeps the assembled form
    // bit-identical under constant shifts of the potential.
    let binding = binding_energy(spec, state, scale)?;
    let input = effective_radial_coefficients(&without_offset(spec), state, scale, binding)?;
    let derived = nu::derive_parameters(&input)?;
    let form = nu::wavefunction_form(&derived, state.n, 0.0)?;
    let variable = match *spec {
        PotentialSpec::ModifiedOscillator { b, .. } => RadialVariable::OmegaRSquared {
            omega: (scale.two_m_over_hbar2() * b).sqrt(),
        },
        _ => RadialVariable::Radius,
    };
    Ok(RadialWavefunction {
        family: *spec,
        state: *state,
        energy: level.energy,
        variable,
        form,
        norm_constant: None,
    })
}

/// Sets the normalization constant so that the truncated integral of
/// R^2 r^2 dr over [0, r_max] equals one.
///
/// Fails with `tail not converged` unless |R(r_max)| has decayed below
/// 1e-8 of the sampled maximum, so the truncation is safe.
pub fn normalize(
    wf: &RadialWavefunction,
    r_max: f64,
    samples: usize,
) -> Result<RadialWavefunction> {
    if r_max <= 0.0 || !r_max.is_finite() {
        return Err(Error::Domain(format!("r_max = {r_max} must be positive")));
    }
    if samples < 3 {
        return Err(Error::Domain(format!(
            "normalization needs at least 3 samples, got {samples}"
        )));
    }
    let step = r_max / (samples - 1) as f64;
    // R^2 r^2 = U^2 r, which vanishes at the origin for J0 > 0.
    let mut integrand = Vec::with_capacity(samples);
    integrand.push(0.0);
    let mut max_abs_r = 0.0f64;
    let mut last_abs_r = 0.0;
    for i in 1..samples {
        let r = step * i as f64;
        let u = wf.evaluate_u(r);
        integrand.push(u * u * r);
        let abs_r = (u / r.sqrt()).abs();
        max_abs_r = max_abs_r.max(abs_r);
        last_abs_r = abs_r;
    }
    if last_abs_r >= TAIL_THRESHOLD * max_abs_r {
        return Err(Error::TailNotConverged {
            r_max,
            tail: last_abs_r / max_abs_r,
        });
    }
    let integral = special::integrate_samples(&integrand, step)?;
    if integral <= 0.0 || !integral.is_finite() {
        return Err(Error::Domain(format!(
            "normalization integral {integral} is not positive and finite"
        )));
    }
    let mut out = wf.clone();
    out.norm_constant = Some(1.0 / integral.sqrt());
    Ok(out)
}

/// Why a spectrum row carries no energy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowStatus {
    Ok,
    /// J0 <= 0: the state violates the regularity bound.
    SkippedRegularity,
    /// The family parameters admit no bound state for this cell.
    SkippedUnbound,
}

impl RowStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Ok => "",
            Self::SkippedRegularity => "skipped:J0<=0",
            Self::SkippedUnbound => "skipped:unbound",
        }
    }
}

/// One row of a spectrum table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumRow {
    pub n: u32,
    pub l: u32,
    pub flux: f64,
    pub energy: Option<f64>,
    pub source: Option<EnergySource>,
    pub status: RowStatus,
}

/// Rows of (n, l, flux, E), sorted by (l, n).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SpectrumTable {
    pub rows: Vec<SpectrumRow>,
}

impl SpectrumTable {
    /// Rows that carry an energy.
    pub fn bound_rows(&self) -> impl Iterator<Item = &SpectrumRow> {
        self.rows.iter().filter(|r| r.status == RowStatus::Ok)
    }
}

/// Tabulates closed-form energies over the (n, l) grid at fixed flux.
/// Cells violating their preconditions are emitted with a skip marker.
/// Cells are independent and evaluated through the data-parallel map.
pub fn spectrum(
    spec: &PotentialSpec,
    n_max: u32,
    l_max: u32,
    flux: f64,
    scale: &PhysicalScale,
) -> SpectrumTable {
    let cells: Vec<(u32, u32)> = (0..=l_max)
        .flat_map(|l| (0..=n_max).map(move |n| (l, n)))
        .collect();
    let rows = parallel::map(cells, |(l, n)| {
        let state = QuantumState::new(n, l, flux);
        match closed_form_energy(spec, &state, scale) {
            Ok(level) => SpectrumRow {
                n,
                l,
                flux,
                energy: Some(level.energy),
                source: Some(level.source),
                status: RowStatus::Ok,
            },
            Err(err) => SpectrumRow {
                n,
                l,
                flux,
                energy: None,
                source: None,
                status: match err {
                    Error::FluxRegularity { .. } => RowStatus::SkippedRegularity,
                    _ => RowStatus::SkippedUnbound,
                },
            },
        }
    });
    SpectrumTable { rows }
}
