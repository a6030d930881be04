//! Angular and integrated photon-scattering rates, in units of `gamma`.
//!
//! The bare single-atom pattern for circularly polarised emission is
//! `dw/dOmega = (3 / 4 pi) gamma |P(theta)|^2` with
//! `|P|^2 = (1 + cos^2 theta) / 2`; it integrates to the full spontaneous
//! rate `2 gamma`. Quantum depletion multiplies it by `1 + vbar^2`.

use rayon::prelude::*;

use crate::bogoliubov::momentum_transfer;
use crate::error::{Error, Result};
use crate::model::{AngularCutoff, CondensateProfile, ProfileShape};
use crate::quadrature::{averaged_occupation_at_s, Integrator, Tolerance};
use crate::scalar::Real;

/// Evaluation settings shared by the angular observables.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatteringOptions<T> {
    pub tolerance: T,
    pub cutoff: AngularCutoff<T>,
}

impl<T: Real> Default for ScatteringOptions<T> {
    fn default() -> Self {
        Self {
            tolerance: T::default_tolerance(),
            cutoff: AngularCutoff::default(),
        }
    }
}

impl<T: Real> ScatteringOptions<T> {
    pub fn with_tolerance(mut self, tolerance: T) -> Self {
        self.tolerance = tolerance;
        self
    }

    pub fn with_cutoff(mut self, cutoff: AngularCutoff<T>) -> Self {
        self.cutoff = cutoff;
        self
    }
}

/// One row of an angular spectrum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumPoint<T> {
    pub theta: T,
    pub q_over_hbar_k: T,
    pub vbar2: T,
    /// `dw/dOmega / gamma`.
    pub dw_domega: T,
    /// `1 + vbar2`.
    pub enhancement: T,
    /// Small-angle asymptote, present for `theta < sqrt(beta_bar)`.
    pub asymptote: Option<T>,
}

/// Inputs the spectrum was computed from.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileSummary<T> {
    pub species: String,
    pub atom_number: T,
    pub radius: T,
    pub shape: ProfileShape,
    pub beta_bar: T,
    pub beta_peak: T,
}

impl<T: Real> From<&CondensateProfile<T>> for ProfileSummary<T> {
    fn from(p: &CondensateProfile<T>) -> Self {
        Self {
            species: p.species().name.clone(),
            atom_number: p.atom_number(),
            radius: p.radius(),
            shape: p.shape(),
            beta_bar: p.beta_bar(),
            beta_peak: p.beta_peak(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AngularSpectrum<T> {
    pub rows: Vec<SpectrumPoint<T>>,
    pub profile: ProfileSummary<T>,
    /// `Some(theta_min)` when the finite-size cutoff was enforced.
    pub cutoff_theta_min: Option<T>,
}

/// `|P(theta)|^2 = (1 + cos^2 theta) / 2`.
pub fn polarization_factor<T: Real>(theta: T) -> Result<T> {
    if !(theta >= T::zero() && theta <= T::PI()) {
        return Err(Error::domain(
            "theta",
            format!("{:e} rad is outside [0, pi]", theta.as_f64()),
        ));
    }
    let c = theta.cos();
    Ok((T::one() + c * c) / T::lit(2.0))
}

/// `3 / (4 pi)`: bare forward rate per steradian in units of gamma.
fn rate_prefactor<T: Real>() -> T {
    T::lit(3.0) / (T::lit(4.0) * T::PI())
}

fn check_cutoff<T: Real>(
    profile: &CondensateProfile<T>,
    theta: T,
    cutoff: AngularCutoff<T>,
) -> Result<()> {
    match cutoff.theta_min(profile) {
        Some(theta_min) if theta < theta_min => Err(Error::BelowCutoff {
            theta: theta.as_f64(),
            theta_min: theta_min.as_f64(),
        }),
        _ => Ok(()),
    }
}

/// Differential scattering rate at one angle.
pub fn differential_rate<T: Real>(
    profile: &CondensateProfile<T>,
    theta: T,
    options: &ScatteringOptions<T>,
) -> Result<SpectrumPoint<T>> {
    let asymptote = SmallAngleAsymptote::new(profile, options.tolerance)?;
    point_at(profile, theta, options, &asymptote)
}

fn point_at<T: Real>(
    profile: &CondensateProfile<T>,
    theta: T,
    options: &ScatteringOptions<T>,
    asymptote: &SmallAngleAsymptote<T>,
) -> Result<SpectrumPoint<T>> {
    let inner = || -> Result<SpectrumPoint<T>> {
        let mt = momentum_transfer(theta)?;
        check_cutoff(profile, theta, options.cutoff)?;
        let vbar2 = averaged_occupation_at_s(profile, mt.s, options.tolerance)?;
        let enhancement = T::one() + vbar2;
        let dw_domega = rate_prefactor::<T>() * polarization_factor(theta)? * enhancement;
        let asymptote = if theta > T::zero() && theta < asymptote.sqrt_beta_bar {
            Some(asymptote.value(theta))
        } else {
            None
        };
        Ok(SpectrumPoint {
            theta,
            q_over_hbar_k: mt.q_over_hbar_k,
            vbar2,
            dw_domega,
            enhancement,
            asymptote,
        })
    };
    inner().map_err(|e| e.at_angle(theta.as_f64()))
}

/// Evaluates [`differential_rate`] on a strictly increasing grid.
///
/// Points are computed in parallel; the result does not depend on the
/// evaluation order, and the reported error is the one at the smallest
/// failing angle.
pub fn angular_spectrum<T: Real>(
    profile: &CondensateProfile<T>,
    theta_grid: &[T],
    options: &ScatteringOptions<T>,
) -> Result<AngularSpectrum<T>> {
    if let Some(w) = theta_grid.windows(2).find(|w| !(w[0] < w[1])) {
        return Err(Error::domain(
            "theta_grid",
            format!(
                "must be strictly increasing, found {:e} followed by {:e}",
                w[0].as_f64(),
                w[1].as_f64()
            ),
        ));
    }
    let asymptote = SmallAngleAsymptote::new(profile, options.tolerance)?;
    let results: Vec<Result<SpectrumPoint<T>>> = theta_grid
        .par_iter()
        .map(|&theta| point_at(profile, theta, options, &asymptote))
        .collect();
    let rows = results.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(AngularSpectrum {
        rows,
        profile: profile.into(),
        cutoff_theta_min: options.cutoff.theta_min(profile),
    })
}

/// Integrated scattering rate in units of `2 gamma`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TotalRate<T> {
    /// `w / 2 gamma = bare + correction`.
    pub w_over_2gamma: T,
    /// Integral of the bare pattern alone; one up to quadrature error.
    pub bare: T,
    /// Depletion-induced excess over the bare pattern.
    pub correction: T,
    pub evaluations: usize,
}

/// Angle-integrated rate, with no low-angle cutoff.
///
/// With `s = sin(theta/2)` one has `sin(theta) d theta = 4 s ds`, so
///
/// ```text
/// w / 2 gamma = (3/2) int_0^1 (1 + (1 - 2 s^2)^2) s (1 + vbar^2(s)) ds
/// ```
///
/// and `s vbar^2` stays finite as `s -> 0`. The excess over the bare pattern
/// is integrated directly, which is the difference of the two totals taken
/// node by node.
pub fn total_rate<T: Real>(profile: &CondensateProfile<T>, tol: T) -> Result<TotalRate<T>> {
    let bare_weight = |s: T| {
        let c = T::one() - T::lit(2.0) * s * s;
        T::lit(1.5) * (T::one() + c * c) * s
    };

    let bare =
        Integrator::new(Tolerance::absolute(tol)).integrate(bare_weight, T::zero(), T::one())?;
    let bare_value = bare.into_converged()?;

    let beta_peak = profile.beta_peak();
    if beta_peak == T::zero() {
        return Ok(TotalRate {
            w_over_2gamma: bare_value,
            bare: bare_value,
            correction: T::zero(),
            evaluations: bare.evaluations,
        });
    }

    // the occupation varies on the scale s ~ sqrt(beta)
    let root = beta_peak.sqrt();
    let hints: Vec<T> = [0.1, 1.0, 10.0].iter().map(|&f| T::lit(f) * root).collect();
    let inner_tol = tol / T::lit(10.0);
    let correction = Integrator::new(Tolerance::absolute(tol))
        .breakpoints(&hints)
        .try_integrate(
            |s| averaged_occupation_at_s(profile, s, inner_tol).map(|v2| bare_weight(s) * v2),
            T::zero(),
            T::one(),
        )??;
    let correction_value = correction.into_converged()?;

    Ok(TotalRate {
        w_over_2gamma: bare_value + correction_value,
        bare: bare_value,
        correction: correction_value,
        evaluations: bare.evaluations + correction.evaluations,
    })
}

/// Leading-order total `1 + (3/8) beta_bar`, in units of `2 gamma`.
pub fn first_order_total<T: Real>(beta_bar: T) -> Result<T> {
    if !(beta_bar >= T::zero()) {
        return Err(Error::domain(
            "beta_bar",
            format!("{:e} must be non-negative", beta_bar.as_f64()),
        ));
    }
    Ok(T::one() + T::lit(3.0) / T::lit(8.0) * beta_bar)
}

/// Small-angle form `3 sqrt(beta_bar) S / (8 pi theta)` of the differential
/// rate, with the profile quantities evaluated once.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmallAngleAsymptote<T> {
    pub sqrt_beta_bar: T,
    pub shape_factor: T,
}

/// Asymptote value with a flag telling whether `theta < sqrt(beta_bar)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoteValue<T> {
    pub value: T,
    pub within_window: bool,
}

impl<T: Real> SmallAngleAsymptote<T> {
    pub fn new(profile: &CondensateProfile<T>, tol: T) -> Result<Self> {
        let moments = profile.mean_density_and_shape(tol)?;
        Ok(Self {
            sqrt_beta_bar: profile.beta_bar().sqrt(),
            shape_factor: moments.shape_factor,
        })
    }

    fn value(&self, theta: T) -> T {
        T::lit(3.0) * self.sqrt_beta_bar * self.shape_factor / (T::lit(8.0) * T::PI() * theta)
    }

    pub fn at(&self, theta: T) -> Result<AsymptoteValue<T>> {
        if !(theta > T::zero()) || !theta.is_finite() {
            return Err(Error::domain(
                "theta",
                format!("{:e} rad must be positive", theta.as_f64()),
            ));
        }
        Ok(AsymptoteValue {
            value: self.value(theta),
            within_window: theta < self.sqrt_beta_bar,
        })
    }
}

pub fn small_angle_asymptote<T: Real>(
    profile: &CondensateProfile<T>,
    theta: T,
    tol: T,
) -> Result<AsymptoteValue<T>> {
    SmallAngleAsymptote::new(profile, tol)?.at(theta)
}

/// Single-atom forward scattering rates per steradian, in units of gamma.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ForwardReference<T> {
    /// Commonly quoted comparison value `3 / (8 pi)`.
    pub quoted: T,
    /// Bare rate of this model at `theta = 0`, `3 / (4 pi)`.
    pub bare_forward: T,
}

pub fn single_atom_forward_reference<T: Real>() -> ForwardReference<T> {
    ForwardReference {
        quoted: T::lit(3.0) / (T::lit(8.0) * T::PI()),
        bare_forward: rate_prefactor(),
    }
}

/// Resonant optical density through the cloud centre and the multiple
/// scattering criterion `od < beta_bar^(-1/2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OpticalDensity<T> {
    pub od: T,
    /// `beta_bar^(-1/2)`; infinite for an ideal gas.
    pub threshold: T,
    pub washout_safe: bool,
}

/// Column density through the centre, 1/m^2.
fn central_column_density<T: Real>(profile: &CondensateProfile<T>) -> T {
    let n0r = profile.peak_density() * profile.radius();
    match profile.shape() {
        ProfileShape::ThomasFermiSphere => T::lit(4.0) / T::lit(3.0) * n0r,
        ProfileShape::Uniform => T::lit(2.0) * n0r,
    }
}

/// Optical density for a two-level Lorentzian line of half width gamma,
/// `sigma = (6 pi / k^2) / (1 + (detuning / gamma)^2)`.
pub fn optical_density<T: Real>(
    profile: &CondensateProfile<T>,
    detuning: T,
) -> Result<OpticalDensity<T>> {
    if !detuning.is_finite() {
        return Err(Error::domain("detuning", "must be finite"));
    }
    let species = profile.species();
    let k = species.wavenumber;
    let x = detuning / species.gamma;
    let sigma = T::lit(6.0) * T::PI() / (k * k) / (T::one() + x * x);
    let od = sigma * central_column_density(profile);
    let beta_bar = profile.beta_bar();
    let threshold = if beta_bar > T::zero() {
        T::one() / beta_bar.sqrt()
    } else {
        T::infinity()
    };
    Ok(OpticalDensity {
        od,
        threshold,
        washout_safe: od < threshold,
    })
}

/// Smallest `|detuning|` (angular, 1/s) at which `od` drops to the
/// threshold; zero when already below it on resonance.
pub fn washout_detuning<T: Real>(profile: &CondensateProfile<T>) -> Result<T> {
    let resonant = optical_density(profile, T::zero())?;
    if resonant.od <= resonant.threshold {
        return Ok(T::zero());
    }
    Ok(profile.species().gamma * (resonant.od / resonant.threshold - T::one()).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::AtomSpecies;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn trap(n: f64, shape: ProfileShape) -> CondensateProfile<f64> {
        let na = AtomSpecies::preset("sodium-Na23").unwrap();
        CondensateProfile::new(na, n, 3.63e-5, shape).unwrap()
    }

    #[test]
    fn polarization_landmarks() {
        assert_eq!(polarization_factor(0.0).unwrap(), 1.0);
        assert_relative_eq!(polarization_factor(PI / 2.0).unwrap(), 0.5, epsilon = 1e-16);
        assert!(polarization_factor(-0.1).is_err());
        assert!(polarization_factor(4.0).is_err());
    }

    #[test]
    fn polarization_integrates_to_eight_pi_over_three() {
        // plain trapezoid in cos(theta), independent of the adaptive engine
        let n = 20_000;
        let h = 2.0 / n as f64;
        let mut acc = 0.0;
        for i in 0..=n {
            let c = -1.0 + i as f64 * h;
            let w = if i == 0 || i == n { 0.5 } else { 1.0 };
            acc += w * polarization_factor(c.acos()).unwrap();
        }
        let total = 2.0 * PI * acc * h;
        assert_relative_eq!(total, 8.0 * PI / 3.0, max_relative = 1e-8);
    }

    #[test]
    fn ideal_gas_rates() {
        let p = trap(0.0, ProfileShape::ThomasFermiSphere);
        let opts = ScatteringOptions::default().with_cutoff(AngularCutoff::Disabled);
        let fwd = differential_rate(&p, 0.0, &opts).unwrap();
        assert_relative_eq!(fwd.dw_domega, 3.0 / (4.0 * PI), max_relative = 1e-15);
        assert_eq!(fwd.enhancement, 1.0);
        assert_eq!(fwd.asymptote, None);
        let side = differential_rate(&p, PI / 2.0, &opts).unwrap();
        assert_relative_eq!(side.dw_domega, 3.0 / (8.0 * PI), max_relative = 1e-15);
    }

    #[test]
    fn cutoff_is_enforced() {
        let p = trap(1.6e6, ProfileShape::ThomasFermiSphere);
        let err = differential_rate(&p, 1e-3, &ScatteringOptions::default()).unwrap_err();
        assert!(
            matches!(err, Error::AtAngle { ref source, .. } if matches!(**source, Error::BelowCutoff { .. }))
        );
        let zero = differential_rate(
            &p,
            0.0,
            &ScatteringOptions::default().with_cutoff(AngularCutoff::Disabled),
        )
        .unwrap_err();
        assert_eq!(zero.kind(), crate::ErrorKind::Domain);
    }

    #[test]
    fn spectrum_rejects_unsorted_grid() {
        let p = trap(1.6e6, ProfileShape::Uniform);
        let opts = ScatteringOptions::default();
        assert!(angular_spectrum(&p, &[0.1, 0.1], &opts).is_err());
        assert!(angular_spectrum(&p, &[0.2, 0.1], &opts).is_err());
        assert!(angular_spectrum(&p, &[], &opts).unwrap().rows.is_empty());
    }

    #[test]
    fn spectrum_error_names_the_angle() {
        let p = trap(1.6e6, ProfileShape::Uniform);
        let err =
            angular_spectrum(&p, &[0.5, 3.0, 3.5, 4.0], &ScatteringOptions::default()).unwrap_err();
        match err {
            Error::AtAngle { theta, .. } => assert_eq!(theta, 3.5),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn first_order_values() {
        assert_eq!(first_order_total(0.0).unwrap(), 1.0);
        assert_relative_eq!(
            first_order_total(0.1).unwrap(),
            1.0375,
            max_relative = 1e-15
        );
        assert!((first_order_total(2.41e-3f64).unwrap() - 1.000904).abs() < 1e-6);
        assert!(first_order_total(-1.0).is_err());
    }

    #[test]
    fn asymptote_is_inverse_in_theta() {
        let p = trap(1.6e6, ProfileShape::ThomasFermiSphere);
        let a = small_angle_asymptote(&p, 0.005, 1e-12).unwrap();
        let b = small_angle_asymptote(&p, 0.01, 1e-12).unwrap();
        assert_relative_eq!(a.value, 2.0 * b.value, max_relative = 1e-14);
        assert!(a.within_window);
        assert!(!small_angle_asymptote(&p, 0.2, 1e-12).unwrap().within_window);
        assert!(small_angle_asymptote(&p, 0.0, 1e-12).is_err());
        // 3 * 0.0491 * 0.9314 / (8 pi 0.005)
        assert!((a.value - 1.092).abs() < 0.003, "{}", a.value);
    }

    #[test]
    fn forward_references() {
        let r = single_atom_forward_reference::<f64>();
        assert_relative_eq!(r.quoted, 3.0 / (8.0 * PI));
        assert!((r.quoted - 0.1194).abs() < 1e-4);
        assert!((r.bare_forward - 0.2387).abs() < 1e-4);
        assert_relative_eq!(r.quoted / r.bare_forward, 0.5, max_relative = 1e-15);
    }

    #[test]
    fn optical_density_basics() {
        let empty = trap(0.0, ProfileShape::ThomasFermiSphere);
        let od = optical_density(&empty, 0.0).unwrap();
        assert_eq!(od.od, 0.0);
        assert!(od.washout_safe);
        assert_eq!(washout_detuning(&empty).unwrap(), 0.0);

        let p = trap(1.6e6, ProfileShape::ThomasFermiSphere);
        let g = p.species().gamma;
        let plus = optical_density(&p, 3.0 * g).unwrap().od;
        let minus = optical_density(&p, -3.0 * g).unwrap().od;
        assert_eq!(plus, minus);
        assert!(optical_density(&p, 0.0).unwrap().od > plus);
        assert!(optical_density(&p, 4.0 * g).unwrap().od < plus);
        assert!(!optical_density(&p, 0.0).unwrap().washout_safe);
    }

    #[test]
    fn washout_detuning_matches_bisection() {
        let p = trap(1.6e6, ProfileShape::ThomasFermiSphere);
        let threshold = optical_density(&p, 0.0).unwrap().threshold;
        assert!((threshold - 20.4).abs() < 0.1, "{threshold}");
        let (mut lo, mut hi) = (0.0, 1e3 * p.species().gamma);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if optical_density(&p, mid).unwrap().od > threshold {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let closed = washout_detuning(&p).unwrap();
        assert_relative_eq!(closed, 0.5 * (lo + hi), max_relative = 1e-12);
    }
}
