//! Atom species, the spherical condensate profile, and regime diagnostics.
//!
//! Everything is stored in SI base units. Interaction strength enters the
//! scattering calculation only through the dimensionless
//! `beta = 4 pi a n / k^2`.

use crate::error::{Error, Result};
use crate::quadrature::{Integrator, Tolerance};
use crate::scalar::Real;

/// Reduced Planck constant, J s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Unified atomic mass unit, kg.
pub const ATOMIC_MASS_UNIT: f64 = 1.660_539_066_60e-27;

/// Names accepted by [`AtomSpecies::preset`].
pub const PRESETS: &[&str] = &["sodium-Na23"];

/// Factor used for the "much greater than" regime flags.
pub const REGIME_MARGIN: f64 = 10.0;

#[derive(Debug, Clone, PartialEq)]
pub struct AtomSpecies<T> {
    pub name: String,
    /// kg
    pub mass: T,
    /// s-wave scattering length, m. Repulsive, so strictly positive.
    pub scattering_length: T,
    /// Resonant photon wavenumber, 1/m.
    pub wavenumber: T,
    /// Half the spontaneous decay rate, 1/s.
    pub gamma: T,
}

fn require_positive<T: Real>(quantity: &'static str, x: T) -> Result<()> {
    if x > T::zero() && x.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(
            quantity,
            format!("{:e} must be positive and finite", x.as_f64()),
        ))
    }
}

impl<T: Real> AtomSpecies<T> {
    pub fn new(
        name: impl Into<String>,
        mass: T,
        scattering_length: T,
        wavenumber: T,
        gamma: T,
    ) -> Result<Self> {
        require_positive("mass", mass)?;
        require_positive("scattering_length", scattering_length)?;
        require_positive("wavenumber", wavenumber)?;
        require_positive("gamma", gamma)?;
        Ok(Self {
            name: name.into(),
            mass,
            scattering_length,
            wavenumber,
            gamma,
        })
    }

    /// Built-in species constants.
    ///
    /// `sodium-Na23`: a = 2.75e-7 cm, k = 1.07e5 1/cm, and the D2 line width
    /// 2 gamma = 2 pi x 9.7946 MHz.
    pub fn preset(name: &str) -> Result<Self> {
        match name {
            "sodium-Na23" => Self::new(
                name,
                T::lit(22.989_769_282 * ATOMIC_MASS_UNIT),
                T::lit(2.75e-9),
                T::lit(1.07e7),
                T::lit(std::f64::consts::PI * 9.7946e6),
            ),
            _ => Err(Error::UnknownPreset {
                name: name.to_owned(),
            }),
        }
    }

    /// Contact coupling `g = 4 pi hbar^2 a / m`, J m^3.
    pub fn coupling_constant(&self) -> T {
        let hbar = T::lit(HBAR);
        T::lit(4.0) * T::PI() * hbar * hbar * self.scattering_length / self.mass
    }

    /// `4 pi a n / k^2` for a density `n` in 1/m^3.
    pub fn beta_of(&self, density: T) -> T {
        T::lit(4.0) * T::PI() * self.scattering_length * density
            / (self.wavenumber * self.wavenumber)
    }
}

/// Shorthand for [`AtomSpecies::preset`].
pub fn species_from_preset<T: Real>(name: &str) -> Result<AtomSpecies<T>> {
    AtomSpecies::preset(name)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProfileShape {
    /// `n0 (1 - r^2/R^2)` inside the cloud.
    ThomasFermiSphere,
    /// Constant density inside the cloud; an analytic test fixture.
    Uniform,
}

impl ProfileShape {
    /// `n(x R) / n0` for `x` in `[0, 1]`.
    pub fn density_fraction<T: Real>(self, x: T) -> T {
        match self {
            ProfileShape::ThomasFermiSphere => (T::one() - x * x).max(T::zero()),
            ProfileShape::Uniform => T::one(),
        }
    }

    /// Closed-form `nbar / n0`.
    pub fn mean_fraction<T: Real>(self) -> T {
        match self {
            ProfileShape::ThomasFermiSphere => T::lit(0.4),
            ProfileShape::Uniform => T::one(),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            ProfileShape::ThomasFermiSphere => "thomas-fermi",
            ProfileShape::Uniform => "uniform",
        }
    }
}

impl std::str::FromStr for ProfileShape {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "thomas-fermi" | "ThomasFermiSphere" => Ok(ProfileShape::ThomasFermiSphere),
            "uniform" | "Uniform" => Ok(ProfileShape::Uniform),
            other => Err(format!(
                "unknown shape `{other}` (expected `thomas-fermi` or `uniform`)"
            )),
        }
    }
}

/// Spherical condensate with all atoms in the condensate (zero temperature).
#[derive(Debug, Clone, PartialEq)]
pub struct CondensateProfile<T> {
    species: AtomSpecies<T>,
    atom_number: T,
    radius: T,
    shape: ProfileShape,
    peak_density: T,
    mean_density: T,
    beta_bar: T,
    beta_peak: T,
    chemical_potential: T,
}

/// Local density and its dimensionless interaction strength.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalDensity<T> {
    /// 1/m^3
    pub density: T,
    pub beta_local: T,
}

/// Radial moments of the profile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMoments<T> {
    /// `V^-1 int n dV` by quadrature, 1/m^3.
    pub mean_density: T,
    pub mean_density_closed_form: T,
    /// `S = (V sqrt(nbar))^-1 int sqrt(n) dV`.
    pub shape_factor: T,
}

impl<T: Real> CondensateProfile<T> {
    /// Builds the profile so that `int n dV = N`.
    pub fn new(
        species: AtomSpecies<T>,
        atom_number: T,
        radius: T,
        shape: ProfileShape,
    ) -> Result<Self> {
        require_positive("radius", radius)?;
        if !(atom_number >= T::zero() && atom_number.is_finite()) {
            return Err(Error::domain(
                "atom_number",
                format!("{:e} must be finite and non-negative", atom_number.as_f64()),
            ));
        }
        let volume = T::lit(4.0) / T::lit(3.0) * T::PI() * radius * radius * radius;
        let mean_density = atom_number / volume;
        let peak_density = mean_density / shape.mean_fraction::<T>();
        let beta_bar = species.beta_of(mean_density);
        let beta_peak = species.beta_of(peak_density);
        let chemical_potential = species.coupling_constant() * peak_density;
        Ok(Self {
            species,
            atom_number,
            radius,
            shape,
            peak_density,
            mean_density,
            beta_bar,
            beta_peak,
            chemical_potential,
        })
    }

    pub fn species(&self) -> &AtomSpecies<T> {
        &self.species
    }
    pub fn atom_number(&self) -> T {
        self.atom_number
    }
    pub fn radius(&self) -> T {
        self.radius
    }
    pub fn shape(&self) -> ProfileShape {
        self.shape
    }
    pub fn peak_density(&self) -> T {
        self.peak_density
    }
    pub fn mean_density(&self) -> T {
        self.mean_density
    }
    pub fn beta_bar(&self) -> T {
        self.beta_bar
    }
    pub fn beta_peak(&self) -> T {
        self.beta_peak
    }
    /// `mu = g n0`, J.
    pub fn chemical_potential(&self) -> T {
        self.chemical_potential
    }

    pub fn volume(&self) -> T {
        T::lit(4.0) / T::lit(3.0) * T::PI() * self.radius.powi(3)
    }

    /// `1 / (k R)`.
    pub fn inverse_kr(&self) -> T {
        T::one() / (self.species.wavenumber * self.radius)
    }

    pub fn density_at(&self, r: T) -> Result<LocalDensity<T>> {
        if !(r >= T::zero()) {
            return Err(Error::domain(
                "r",
                format!("{:e} m must be non-negative", r.as_f64()),
            ));
        }
        let density = if r > self.radius {
            T::zero()
        } else {
            self.peak_density * self.shape.density_fraction(r / self.radius)
        };
        Ok(LocalDensity {
            density,
            beta_local: self.species.beta_of(density),
        })
    }

    /// Mean density by radial quadrature, checked against the closed form,
    /// and the square-root shape factor that sets the small-angle asymptote.
    pub fn mean_density_and_shape(&self, tol: T) -> Result<DensityMoments<T>> {
        let shape = self.shape;
        let three = T::lit(3.0);
        let integrator = Integrator::new(Tolerance::mixed(tol));
        let mean_fraction = integrator
            .integrate(
                |x| three * x * x * shape.density_fraction(x),
                T::zero(),
                T::one(),
            )?
            .into_converged()?;

        let closed = shape.mean_fraction::<T>();
        let allowed = (T::lit(10.0) * tol).max(T::lit(100.0) * T::epsilon());
        if (mean_fraction - closed).abs() > allowed * closed {
            return Err(Error::CrossCheck {
                quantity: "mean density fraction",
                quadrature: mean_fraction.as_f64(),
                closed_form: closed.as_f64(),
            });
        }

        let shape_factor = match shape {
            ProfileShape::Uniform => T::one(),
            ProfileShape::ThomasFermiSphere => {
                let root_moment = integrator
                    .integrate(
                        |x| three * x * x * shape.density_fraction(x).sqrt(),
                        T::zero(),
                        T::one(),
                    )?
                    .into_converged()?;
                root_moment / mean_fraction.sqrt()
            }
        };

        Ok(DensityMoments {
            mean_density: self.peak_density * mean_fraction,
            mean_density_closed_form: self.mean_density,
            shape_factor,
        })
    }

    /// Pair-correlation length `(4 pi a n_c(r))^(-1/2)`, m.
    ///
    /// Equivalently `1 / (k sqrt(beta_local))`, the distance matching the
    /// momentum transfer at which the depletion enhancement sets in.
    pub fn correlation_length(&self, r: T) -> Result<T> {
        let local = self.density_at(r)?;
        if local.density <= T::zero() {
            return Err(Error::domain(
                "correlation_length",
                format!(
                    "local density vanishes at r = {:e} m, correlation length is infinite",
                    r.as_f64()
                ),
            ));
        }
        Ok(
            (T::lit(4.0) * T::PI() * self.species.scattering_length * local.density)
                .sqrt()
                .recip(),
        )
    }

    /// Validity diagnostics; see [`RegimeReport`].
    pub fn regime_report(&self, cutoff_factor: T) -> Result<RegimeReport<T>> {
        require_positive("cutoff_factor", cutoff_factor)?;
        let margin = T::lit(REGIME_MARGIN);
        let inverse_kr = self.inverse_kr();
        let sqrt_beta_bar = self.beta_bar.sqrt();
        let theta_min = cutoff_factor * inverse_kr;
        let n_over_r_by_a = self.atom_number * self.species.scattering_length / self.radius;
        Ok(RegimeReport {
            sqrt_beta_bar,
            inverse_kr,
            coherent_cone_exceeded: self.beta_bar > margin * inverse_kr * inverse_kr
                && theta_min < sqrt_beta_bar,
            thomas_fermi_valid: n_over_r_by_a > margin,
            n_over_r_by_a,
            theta_min,
            theta_max_small_angle: sqrt_beta_bar,
        })
    }
}

/// Shorthand for [`CondensateProfile::new`].
pub fn build_condensate<T: Real>(
    species: AtomSpecies<T>,
    atom_number: T,
    radius: T,
    shape: ProfileShape,
) -> Result<CondensateProfile<T>> {
    CondensateProfile::new(species, atom_number, radius, shape)
}

/// Validity diagnostics for the depletion-induced scattering signal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimeReport<T> {
    pub sqrt_beta_bar: T,
    pub inverse_kr: T,
    /// `beta_bar > 10 (kR)^-2` and the window `[theta_min, sqrt(beta_bar))`
    /// is non-empty.
    pub coherent_cone_exceeded: bool,
    /// `N > 10 R / a`.
    pub thomas_fermi_valid: bool,
    /// `N / (R / a)`.
    pub n_over_r_by_a: T,
    /// Finite-size cutoff angle `cutoff_factor / (k R)`, rad.
    pub theta_min: T,
    /// Upper edge `sqrt(beta_bar)` of the small-angle window, rad.
    pub theta_max_small_angle: T,
}

/// Low-angle cutoff from the finite cloud size: the smallest momentum
/// transfer is of order `hbar / R`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AngularCutoff<T> {
    /// `theta_min = factor / (k R)`.
    FiniteSize {
        factor: T,
    },
    Disabled,
}

impl<T: Real> Default for AngularCutoff<T> {
    fn default() -> Self {
        AngularCutoff::FiniteSize { factor: T::one() }
    }
}

impl<T: Real> AngularCutoff<T> {
    pub fn theta_min(&self, profile: &CondensateProfile<T>) -> Option<T> {
        match *self {
            AngularCutoff::FiniteSize { factor } => Some(factor * profile.inverse_kr()),
            AngularCutoff::Disabled => None,
        }
    }
}
