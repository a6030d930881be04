//! Adaptive Gauss-Kronrod integration and the trap-volume average of the
//! depletion occupation built on top of it.
//!
//! The engine is a globally adaptive 7/15-point Gauss-Kronrod scheme: the
//! interval with the largest error estimate is bisected until the summed
//! estimate meets the tolerance. Both rules use interior nodes only, so an
//! integrable endpoint singularity is never evaluated.

use std::convert::Infallible;

use crate::bogoliubov::occupation_positive;
use crate::error::{Error, Result};
use crate::model::{AngularCutoff, CondensateProfile, ProfileShape};
use crate::scalar::Real;

/// Kronrod abscissae, descending, the last one is the centre.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

/// Gauss weights for the odd-indexed Kronrod nodes and the centre.
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

const EVALS_PER_RULE: usize = 15;

/// Outcome of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult<T> {
    pub value: T,
    pub abs_error_estimate: T,
    pub evaluations: usize,
    /// `true` iff the error estimate met the requested tolerance.
    pub converged: bool,
    /// The tolerance the estimate was compared against.
    pub requested: T,
}

impl<T: Real> QuadratureResult<T> {
    /// Turns a non-converged result into [`Error::NonConvergence`].
    pub fn into_converged(self) -> Result<T> {
        if self.converged {
            Ok(self.value)
        } else {
            Err(Error::NonConvergence {
                achieved: self.abs_error_estimate.as_f64(),
                requested: self.requested.as_f64(),
                evaluations: self.evaluations,
            })
        }
    }
}

/// Error target `max(abs, rel * |value|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance<T> {
    pub abs: T,
    pub rel: T,
}

impl<T: Real> Tolerance<T> {
    pub fn absolute(abs: T) -> Self {
        Self {
            abs,
            rel: T::zero(),
        }
    }

    /// Absolute below magnitude one, relative above.
    pub fn mixed(tol: T) -> Self {
        Self { abs: tol, rel: tol }
    }

    pub fn target(&self, value: T) -> T {
        self.abs.max(self.rel * value.abs())
    }

    fn validate(&self) -> Result<()> {
        let ok = |x: T| x >= T::zero() && x.is_finite();
        if !(ok(self.abs) && ok(self.rel)) || (self.abs == T::zero() && self.rel == T::zero()) {
            return Err(Error::domain(
                "tolerance",
                format!(
                    "abs {:e} / rel {:e}: need non-negative values, at least one positive",
                    self.abs.as_f64(),
                    self.rel.as_f64()
                ),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy)]
struct Segment<T> {
    a: T,
    b: T,
    value: T,
    error: T,
}

/// Configurable adaptive integrator.
#[derive(Debug, Clone)]
pub struct Integrator<T> {
    tolerance: Tolerance<T>,
    max_subdivisions: usize,
    breakpoints: Vec<T>,
}

impl<T: Real> Integrator<T> {
    pub const DEFAULT_MAX_SUBDIVISIONS: usize = 2000;

    pub fn new(tolerance: Tolerance<T>) -> Self {
        Self {
            tolerance,
            max_subdivisions: Self::DEFAULT_MAX_SUBDIVISIONS,
            breakpoints: Vec::new(),
        }
    }

    pub fn max_subdivisions(mut self, n: usize) -> Self {
        self.max_subdivisions = n.max(1);
        self
    }

    /// Initial subdivision points. Points outside the open integration
    /// interval are ignored.
    pub fn breakpoints(mut self, points: &[T]) -> Self {
        self.breakpoints = points.to_vec();
        self
    }

    pub fn integrate<F>(&self, mut f: F, a: T, b: T) -> Result<QuadratureResult<T>>
    where
        F: FnMut(T) -> T,
    {
        match self.try_integrate(|x| Ok::<T, Infallible>(f(x)), a, b)? {
            Ok(r) => Ok(r),
            Err(never) => match never {},
        }
    }

    /// Integrates a fallible integrand. The outer `Result` reports invalid
    /// arguments, the inner one the first integrand failure.
    pub fn try_integrate<E, F>(
        &self,
        mut f: F,
        a: T,
        b: T,
    ) -> Result<Result<QuadratureResult<T>, E>>
    where
        F: FnMut(T) -> Result<T, E>,
    {
        self.tolerance.validate()?;
        if !(a.is_finite() && b.is_finite()) || a > b {
            return Err(Error::domain(
                "integration bounds",
                format!(
                    "[{:e}, {:e}] must be finite with a <= b",
                    a.as_f64(),
                    b.as_f64()
                ),
            ));
        }
        Ok(self.run(&mut f, a, b))
    }

    fn run<E, F>(&self, f: &mut F, a: T, b: T) -> Result<QuadratureResult<T>, E>
    where
        F: FnMut(T) -> Result<T, E>,
    {
        let mut cuts: Vec<T> = self
            .breakpoints
            .iter()
            .copied()
            .filter(|&p| p > a && p < b)
            .collect();
        cuts.sort_by(|x, y| x.partial_cmp(y).expect("finite breakpoints"));
        cuts.dedup();

        let mut edges = Vec::with_capacity(cuts.len() + 2);
        edges.push(a);
        edges.extend(cuts);
        edges.push(b);

        let mut segments = Vec::with_capacity(self.max_subdivisions.min(4096));
        let mut evaluations = 0;
        for w in edges.windows(2) {
            segments.push(kronrod(f, w[0], w[1])?);
            evaluations += EVALS_PER_RULE;
        }

        loop {
            let (value, error) = totals(&segments);
            let requested = self.tolerance.target(value);
            let finish = |converged| QuadratureResult {
                value,
                abs_error_estimate: error,
                evaluations,
                converged,
                requested,
            };
            if error <= requested {
                return Ok(finish(true));
            }
            if segments.len() >= self.max_subdivisions {
                return Ok(finish(false));
            }
            let worst = worst_segment(&segments);
            let Segment { a: lo, b: hi, .. } = segments[worst];
            let mid = (lo + hi) / T::lit(2.0);
            if !(mid > lo && mid < hi) {
                // cannot bisect further in this precision
                return Ok(finish(false));
            }
            segments[worst] = kronrod(f, lo, mid)?;
            segments.insert(worst + 1, kronrod(f, mid, hi)?);
            evaluations += 2 * EVALS_PER_RULE;
        }
    }
}

fn totals<T: Real>(segments: &[Segment<T>]) -> (T, T) {
    segments.iter().fold((T::zero(), T::zero()), |(v, e), s| {
        (v + s.value, e + s.error)
    })
}

/// First segment carrying the largest error estimate.
fn worst_segment<T: Real>(segments: &[Segment<T>]) -> usize {
    let mut idx = 0;
    for (i, s) in segments.iter().enumerate().skip(1) {
        if s.error > segments[idx].error {
            idx = i;
        }
    }
    idx
}

/// One 15-point Kronrod panel with the embedded 7-point Gauss estimate.
fn kronrod<T: Real, E, F>(f: &mut F, a: T, b: T) -> Result<Segment<T>, E>
where
    F: FnMut(T) -> Result<T, E>,
{
    let half = (b - a) / T::lit(2.0);
    let center = a + half;

    let f_center = f(center)?;
    let mut kron = f_center * T::lit(WGK[7]);
    let mut gauss = f_center * T::lit(WG[3]);
    let mut abs_sum = kron.abs();

    let mut fv1 = [T::zero(); 7];
    let mut fv2 = [T::zero(); 7];
    for j in 0..7 {
        let dx = half * T::lit(XGK[j]);
        let f1 = f(center - dx)?;
        let f2 = f(center + dx)?;
        fv1[j] = f1;
        fv2[j] = f2;
        let w = T::lit(WGK[j]);
        kron = kron + w * (f1 + f2);
        abs_sum = abs_sum + w * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss = gauss + T::lit(WG[j / 2]) * (f1 + f2);
        }
    }

    let mean = kron / T::lit(2.0);
    let mut asc = T::lit(WGK[7]) * (f_center - mean).abs();
    for j in 0..7 {
        asc = asc + T::lit(WGK[j]) * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }

    let scale = half.abs();
    let value = kron * half;
    let res_abs = abs_sum * scale;
    let res_asc = asc * scale;
    let mut error = ((kron - gauss) * half).abs();

    if res_asc != T::zero() && error != T::zero() {
        let ratio = (T::lit(200.0) * error / res_asc).powf(T::lit(1.5));
        error = res_asc * ratio.min(T::one());
    }
    let fifty_eps = T::lit(50.0) * T::epsilon();
    if res_abs > T::min_positive_value() / fifty_eps {
        error = error.max(fifty_eps * res_abs);
    }
    Ok(Segment { a, b, value, error })
}

/// Integrates `f` over `[a, b]` to absolute tolerance `tol`.
///
/// Hitting the subdivision limit is not an error: the result comes back with
/// `converged == false`.
pub fn integrate_adaptive<T, F>(f: F, a: T, b: T, tol: T) -> Result<QuadratureResult<T>>
where
    T: Real,
    F: FnMut(T) -> T,
{
    Integrator::new(Tolerance::absolute(tol)).integrate(f, a, b)
}

/// Trap-volume average of the depletion occupation at `s = sin(theta/2)`,
/// without any angular cutoff.
///
/// For the Thomas-Fermi sphere this is `3 * int_0^1 x^2 v^2(s, beta_peak (1 - x^2)) dx`
/// with `x = r / R`; for the uniform sphere it is `v^2(s, beta_bar)`. The
/// tolerance is applied as `tol * max(1, |result|)`.
pub fn averaged_occupation_at_s<T: Real>(
    profile: &CondensateProfile<T>,
    s: T,
    tol: T,
) -> Result<T> {
    if !(s >= T::zero() && s <= T::one()) {
        return Err(Error::domain(
            "s",
            format!("sin(theta/2) = {:e} outside [0, 1]", s.as_f64()),
        ));
    }
    let beta_peak = profile.beta_peak();
    if beta_peak == T::zero() {
        return Ok(T::zero());
    }
    if s == T::zero() {
        return Err(Error::Singularity {
            beta_local: beta_peak.as_f64(),
        });
    }
    match profile.shape() {
        ProfileShape::Uniform => Ok(occupation_positive(s, beta_peak)),
        ProfileShape::ThomasFermiSphere => {
            let three = T::lit(3.0);
            let integrand =
                |x: T| three * x * x * occupation_positive(s, beta_peak * (T::one() - x * x));
            // the local phonon/particle crossover s = sqrt(beta_local) sits here
            let ratio = s * s / beta_peak;
            let mut hints = Vec::new();
            if ratio < T::one() {
                hints.push((T::one() - ratio).sqrt());
            }
            Integrator::new(Tolerance::mixed(tol))
                .breakpoints(&hints)
                .integrate(integrand, T::zero(), T::one())?
                .into_converged()
        }
    }
}

/// Trap-volume average `vbar^2` of the depletion occupation at angle `theta`.
///
/// With a finite-size cutoff active, angles below `theta_min` are rejected.
pub fn averaged_occupation<T: Real>(
    profile: &CondensateProfile<T>,
    theta: T,
    tol: T,
    cutoff: AngularCutoff<T>,
) -> Result<T> {
    if let Some(theta_min) = cutoff.theta_min(profile) {
        if theta < theta_min {
            return Err(Error::BelowCutoff {
                theta: theta.as_f64(),
                theta_min: theta_min.as_f64(),
            });
        }
    }
    let mt = crate::bogoliubov::momentum_transfer(theta)?;
    averaged_occupation_at_s(profile, mt.s, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn polynomial_is_exact() {
        let r = integrate_adaptive(|x: f64| x * x, 0.0, 1.0, 1e-12).unwrap();
        assert!(r.converged);
        assert!((r.value - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(r.evaluations, 15);
    }

    #[test]
    fn sqrt_endpoint_shape_integral() {
        let r = integrate_adaptive(|x: f64| 3.0 * x * x * (1.0 - x * x).sqrt(), 0.0, 1.0, 1e-12)
            .unwrap();
        assert!(r.converged, "{r:?}");
        assert!((r.value - 3.0 * PI / 16.0).abs() < 1e-12);
        assert!(r.abs_error_estimate <= 1e-12);
    }

    #[test]
    fn depletion_kernel_building_block() {
        let beta = 0.01f64;
        let f = |s: f64| (2.0 * s * s + beta) / (4.0 * (s * s + beta).sqrt()) - s / 2.0;
        let r = integrate_adaptive(f, 0.0, 1.0, 1e-12).unwrap();
        let exact = ((1.0 + beta).sqrt() - 1.0) / 4.0;
        assert!(r.converged);
        assert!((r.value - exact).abs() < 1e-12);
        assert!((r.value - 0.0012469).abs() < 1e-7);
    }

    #[test]
    fn inverse_sqrt_singularity_is_never_evaluated() {
        let r = integrate_adaptive(|x: f64| 1.0 / x.sqrt(), 0.0, 1.0, 1e-9).unwrap();
        assert!(r.converged, "{r:?}");
        assert!((r.value - 2.0).abs() < 1e-9);
    }

    #[test]
    fn empty_interval() {
        let r = integrate_adaptive(|x: f64| x, 2.0, 2.0, 1e-10).unwrap();
        assert_eq!(r.value, 0.0);
        assert!(r.converged && r.evaluations > 0);
    }

    #[test]
    fn bad_arguments() {
        assert!(integrate_adaptive(|x: f64| x, 1.0, 0.0, 1e-10).is_err());
        assert!(integrate_adaptive(|x: f64| x, 0.0, 1.0, 0.0).is_err());
        assert!(integrate_adaptive(|x: f64| x, 0.0, 1.0, -1.0).is_err());
        assert!(integrate_adaptive(|x: f64| x, 0.0, f64::INFINITY, 1e-3).is_err());
    }

    #[test]
    fn subdivision_limit_reports_non_convergence() {
        let r = Integrator::new(Tolerance::absolute(1e-14))
            .max_subdivisions(3)
            .integrate(|x: f64| (1.0 / x).sin(), 1e-3, 1.0)
            .unwrap();
        assert!(!r.converged);
        assert!(r.abs_error_estimate > 1e-14);
        assert!(r.into_converged().is_err());
    }

    #[test]
    fn integrand_failures_propagate() {
        let out = Integrator::new(Tolerance::absolute(1e-8))
            .try_integrate(|x: f64| if x > 0.5 { Err("boom") } else { Ok(x) }, 0.0, 1.0)
            .unwrap();
        assert_eq!(out.unwrap_err(), "boom");
    }

    #[test]
    fn breakpoints_outside_interval_ignored() {
        let r = Integrator::new(Tolerance::absolute(1e-12))
            .breakpoints(&[-1.0, 0.5, 0.5, 3.0])
            .integrate(|x: f64| x, 0.0, 1.0)
            .unwrap();
        assert_eq!(r.evaluations, 30);
        assert!((r.value - 0.5).abs() < 1e-15);
    }

    #[test]
    fn tighter_tolerance_shrinks_estimate() {
        let f = |x: f64| (x * 30.0).sin() * (-x).exp() / (1.0 + x * x);
        let mut last = f64::INFINITY;
        for tol in [1e-4, 1e-6, 1e-8, 1e-10, 1e-12] {
            let r = integrate_adaptive(f, 0.0, 4.0, tol).unwrap();
            assert!(r.converged);
            assert!(r.abs_error_estimate <= last, "{tol}: {r:?}");
            last = r.abs_error_estimate;
        }
    }

    #[test]
    fn single_precision() {
        // 50 eps |f| sets the error floor near 1e-5 in single precision
        let r = integrate_adaptive(|x: f32| x.exp(), 0.0, 1.0, 1e-4).unwrap();
        assert!(r.converged);
        assert!((r.value - (std::f32::consts::E - 1.0)).abs() < 1e-5);
    }
}
