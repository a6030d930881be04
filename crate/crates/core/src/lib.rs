//! Incoherent photon scattering by a repulsively interacting Bose-Einstein
//! condensate.
//!
//! At zero temperature interactions populate non-condensate momentum states
//! (quantum depletion). A photon scattered off the condensate leaves one
//! Bogoliubov quasiparticle behind, and the spontaneous emission into a
//! momentum `q` is stimulated by the occupation `v_q^2` already present
//! there. The differential rate picks up the factor `1 + vbar_q^2`, where the
//! bar denotes an average over the trap volume.
//!
//! The kernels are generic over the scalar type ([`Real`]); the aliases at
//! the crate root fix it to `f64` (and `f32` where useful).
//!
//! ```
//! use bec_scatter::{AtomSpecies, Profile, ProfileShape};
//!
//! let sodium = AtomSpecies::preset("sodium-Na23").unwrap();
//! let trap = Profile::new(sodium, 1.6e6, 3.63e-5, ProfileShape::ThomasFermiSphere).unwrap();
//! let report = trap.regime_report(1.0).unwrap();
//! assert!((report.sqrt_beta_bar - 0.049).abs() < 5e-4);
//! ```

// `!(x >= 0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bogoliubov;
pub mod error;
pub mod model;
pub mod quadrature;
pub mod scalar;
pub mod scattering;

pub use error::{Error, ErrorKind, Result};
pub use model::{ProfileShape, PRESETS};
pub use scalar::Real;

pub type AtomSpecies = model::AtomSpecies<f64>;
pub type Profile = model::CondensateProfile<f64>;
pub type RegimeReport = model::RegimeReport<f64>;
pub type DensityMoments = model::DensityMoments<f64>;
pub type AngularCutoff = model::AngularCutoff<f64>;
pub type BogoliubovPoint = bogoliubov::BogoliubovPoint<f64>;
pub type QuadratureResult = quadrature::QuadratureResult<f64>;
pub type ScatteringOptions = scattering::ScatteringOptions<f64>;
pub type SpectrumPoint = scattering::SpectrumPoint<f64>;
pub type AngularSpectrum = scattering::AngularSpectrum<f64>;
pub type TotalRate = scattering::TotalRate<f64>;
pub type OpticalDensity = scattering::OpticalDensity<f64>;

pub type Profile32 = model::CondensateProfile<f32>;
pub type AtomSpecies32 = model::AtomSpecies<f32>;
pub type BogoliubovPoint32 = bogoliubov::BogoliubovPoint<f32>;
