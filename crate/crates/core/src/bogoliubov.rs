//! Dimensionless Bogoliubov kernel.
//!
//! Momenta are measured in units of the photon momentum `hbar k`, energies in
//! `hbar^2 k^2 / m`, and the local condensate density enters only through
//! `beta_local = 4 pi a n_c / k^2`, which equals the mean-field energy
//! `g n_c` in these units. With `s = sin(theta / 2)` the momentum transfer of
//! an elastic scattering event is `q = 2 hbar k s`, the free-particle energy
//! is `2 s^2` and
//!
//! ```text
//! eps_hf = 2 s^2 + beta_local
//! eps    = 2 s sqrt(s^2 + beta_local)
//! ```
//!
//! The depletion occupation `v^2 = eps_hf / (2 eps) - 1/2` depends on `s` and
//! `beta_local` only through the ratio `s / sqrt(beta_local)`.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Elastic momentum transfer for a scattering angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentumTransfer<T> {
    /// `sin(theta / 2)`.
    pub s: T,
    /// `q / (hbar k) = 2 s`.
    pub q_over_hbar_k: T,
}

/// Quasiparticle and Hartree-Fock energies in units of `hbar^2 k^2 / m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Energies<T> {
    pub eps: T,
    pub eps_hf: T,
}

/// Bogoliubov quantities at one `(s, beta_local)` point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BogoliubovPoint<T> {
    pub s: T,
    pub beta_local: T,
    pub eps: T,
    pub eps_hf: T,
    /// `u >= 1`.
    pub u: T,
    /// `v <= 0`.
    pub v: T,
    /// Occupation `v^2` of the phase-space cell at this momentum.
    pub v2: T,
}

/// Maps a scattering angle in `[0, pi]` to `s = sin(theta/2)` and `q / hbar k`.
pub fn momentum_transfer<T: Real>(theta: T) -> Result<MomentumTransfer<T>> {
    if !(theta >= T::zero() && theta <= T::PI()) {
        return Err(Error::domain(
            "theta",
            format!("{:e} rad is outside [0, pi]", theta.as_f64()),
        ));
    }
    let s = (theta / T::lit(2.0)).sin();
    Ok(MomentumTransfer {
        s,
        q_over_hbar_k: s + s,
    })
}

fn check_arguments<T: Real>(s: T, beta_local: T) -> Result<()> {
    if !(s >= T::zero()) || !s.is_finite() {
        return Err(Error::domain(
            "s",
            format!("{:e} must be finite and non-negative", s.as_f64()),
        ));
    }
    if !(beta_local >= T::zero()) || !beta_local.is_finite() {
        return Err(Error::domain(
            "beta_local",
            format!("{:e} must be finite and non-negative", beta_local.as_f64()),
        ));
    }
    Ok(())
}

#[inline]
fn energies_unchecked<T: Real>(s: T, beta_local: T) -> Energies<T> {
    let eps_hf = T::lit(2.0) * s * s + beta_local;
    let eps = (T::lit(2.0) * s * (s * s + beta_local).sqrt()).min(eps_hf);
    Energies { eps, eps_hf }
}

/// `v^2` from precomputed energies.
///
/// Uses `eps_hf - eps = beta^2 / (eps_hf + eps)` so the tail `s >> sqrt(beta)`
/// keeps full relative precision instead of cancelling.
#[inline]
fn occupation_from<T: Real>(s: T, beta_local: T, e: Energies<T>) -> Result<T> {
    if beta_local == T::zero() {
        return Ok(T::zero());
    }
    if s == T::zero() {
        return Err(Error::Singularity {
            beta_local: beta_local.as_f64(),
        });
    }
    Ok(beta_local * beta_local / (T::lit(2.0) * e.eps * (e.eps_hf + e.eps)))
}

/// Quasiparticle energy `eps` and Hartree-Fock energy `eps_hf`.
pub fn energies<T: Real>(s: T, beta_local: T) -> Result<Energies<T>> {
    check_arguments(s, beta_local)?;
    Ok(energies_unchecked(s, beta_local))
}

/// Full set of transformation coefficients.
///
/// At `beta_local = 0` this is the ideal gas, `(u, v) = (1, 0)`, for every
/// `s` including zero. At `s = 0` with `beta_local > 0` the coefficients
/// diverge and [`Error::Singularity`] is returned.
pub fn coefficients<T: Real>(s: T, beta_local: T) -> Result<BogoliubovPoint<T>> {
    check_arguments(s, beta_local)?;
    let e = energies_unchecked(s, beta_local);
    let v2 = occupation_from(s, beta_local, e)?;
    // eps_hf / (2 eps) + 1/2 == 1 + v^2
    let u = (T::one() + v2).sqrt();
    let v = -v2.sqrt();
    Ok(BogoliubovPoint {
        s,
        beta_local,
        eps: e.eps,
        eps_hf: e.eps_hf,
        u,
        v,
        v2,
    })
}

/// Depletion occupation `v^2` alone; bit-identical to `coefficients(..).v2`.
#[inline]
pub fn depletion_occupation<T: Real>(s: T, beta_local: T) -> Result<T> {
    check_arguments(s, beta_local)?;
    occupation_from(s, beta_local, energies_unchecked(s, beta_local))
}

/// Hot-loop variant for callers that already guarantee `s > 0` and
/// `beta_local >= 0`.
#[inline]
pub(crate) fn occupation_positive<T: Real>(s: T, beta_local: T) -> T {
    debug_assert!(s > T::zero() && beta_local >= T::zero());
    if beta_local == T::zero() {
        return T::zero();
    }
    let e = energies_unchecked(s, beta_local);
    beta_local * beta_local / (T::lit(2.0) * e.eps * (e.eps_hf + e.eps))
}
