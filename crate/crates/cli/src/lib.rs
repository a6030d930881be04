//! Configuration-driven front end for `bec-scatter`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod error;
pub mod output;
pub mod plot;
pub mod units;

use bec_scatter::scattering::{
    angular_spectrum, first_order_total, optical_density, total_rate, washout_detuning,
};
use bec_scatter::{AngularCutoff, AngularSpectrum, Profile, ScatteringOptions};

pub use config::{load_config, load_config_file, Command, Format, RunConfig};
pub use error::CliError;
use output::{Cell, Destination, Table};

pub fn build_profile(config: &RunConfig) -> Result<Profile, CliError> {
    Ok(Profile::new(
        config.species.clone(),
        config.atom_number,
        config.radius,
        config.shape,
    )?)
}

/// Spectrum on the configured grid, with the finite-size cutoff enforced.
pub fn compute_spectrum(config: &RunConfig) -> Result<AngularSpectrum, CliError> {
    let profile = build_profile(config)?;
    let cutoff = AngularCutoff::FiniteSize {
        factor: config.cutoff_factor,
    };
    let theta_min = config
        .theta_grid
        .min
        .or_else(|| cutoff.theta_min(&profile))
        .expect("finite-size cutoff always yields an angle");
    let grid = config.theta_grid.nodes(theta_min)?;
    let options = ScatteringOptions::default()
        .with_tolerance(config.tolerance)
        .with_cutoff(cutoff);
    Ok(angular_spectrum(&profile, &grid, &options)?)
}

fn profile_fields(profile: &Profile) -> Vec<(&'static str, Cell)> {
    vec![
        ("species", Cell::Text(profile.species().name.clone())),
        ("shape", Cell::Text(profile.shape().label().to_owned())),
        ("atom_number", profile.atom_number().into()),
        ("radius_m", profile.radius().into()),
        ("beta_bar", profile.beta_bar().into()),
    ]
}

fn regime_table(config: &RunConfig) -> Result<Table, CliError> {
    let profile = build_profile(config)?;
    let report = profile.regime_report(config.cutoff_factor)?;
    let mut fields = profile_fields(&profile);
    fields.extend([
        ("peak_density_per_m3", profile.peak_density().into()),
        ("mean_density_per_m3", profile.mean_density().into()),
        ("chemical_potential_J", profile.chemical_potential().into()),
        ("sqrt_beta_bar", report.sqrt_beta_bar.into()),
        ("inverse_kR", report.inverse_kr.into()),
        ("N_over_R_by_a", report.n_over_r_by_a.into()),
        (
            "coherent_cone_exceeded",
            report.coherent_cone_exceeded.into(),
        ),
        ("thomas_fermi_valid", report.thomas_fermi_valid.into()),
        ("theta_min", report.theta_min.into()),
        ("theta_max_small_angle", report.theta_max_small_angle.into()),
        (
            "correlation_length_center_m",
            profile.correlation_length(0.0).ok().into(),
        ),
    ]);
    Ok(Table::record(fields))
}

fn total_rate_table(config: &RunConfig) -> Result<Table, CliError> {
    let profile = build_profile(config)?;
    let total = total_rate(&profile, config.tolerance)?;
    let beta_bar = profile.beta_bar();
    let per_beta = (beta_bar > 0.0).then(|| total.correction / beta_bar);
    let mut fields = profile_fields(&profile);
    fields.extend([
        ("w_over_2gamma", total.w_over_2gamma.into()),
        ("bare", total.bare.into()),
        ("correction", total.correction.into()),
        ("correction_over_beta_bar", per_beta.into()),
        (
            "first_order_w_over_2gamma",
            first_order_total(beta_bar)?.into(),
        ),
    ]);
    Ok(Table::record(fields))
}

fn optical_density_table(config: &RunConfig) -> Result<Table, CliError> {
    let profile = build_profile(config)?;
    let od = optical_density(&profile, config.detuning)?;
    let mut fields = profile_fields(&profile);
    fields.extend([
        ("detuning_per_s", config.detuning.into()),
        ("optical_density", od.od.into()),
        ("threshold", od.threshold.into()),
        ("washout_safe", od.washout_safe.into()),
        ("washout_detuning_per_s", washout_detuning(&profile)?.into()),
    ]);
    Ok(Table::record(fields))
}

/// Output document for a configuration, without writing it anywhere.
pub fn render(config: &RunConfig) -> Result<String, CliError> {
    Ok(match config.command {
        Command::Spectrum => {
            output::spectrum_table(&compute_spectrum(config)?).render(config.format, false)
        }
        Command::Plot => plot::spectrum_svg(&compute_spectrum(config)?),
        Command::Regime => regime_table(config)?.render(config.format, true),
        Command::TotalRate => total_rate_table(config)?.render(config.format, true),
        Command::OpticalDensity => optical_density_table(config)?.render(config.format, true),
    })
}

/// Computes the configured command and writes its output.
pub fn run(config: &RunConfig) -> Result<(), CliError> {
    let text = render(config)?;
    output::emit(&text, &Destination::from(config.output.clone()))
}
