use thiserror::Error;

use crate::model::PRESETS;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Broad failure class, used by front ends to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Config,
    Domain,
    Numerical,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{quantity} out of domain: {reason}")]
    Domain {
        quantity: &'static str,
        reason: String,
    },

    #[error("unknown species preset `{name}` (available: {})", PRESETS.join(", "))]
    UnknownPreset { name: String },

    #[error(
        "Bogoliubov coefficients diverge at zero momentum transfer (local beta {beta_local:e}); \
         apply the finite-size angular cutoff"
    )]
    Singularity { beta_local: f64 },

    #[error(
        "theta = {theta:e} rad lies below the finite-size cutoff {theta_min:e} rad \
         (minimum momentum transfer is of order hbar/R)"
    )]
    BelowCutoff { theta: f64, theta_min: f64 },

    #[error(
        "quadrature did not converge: error estimate {achieved:e} above tolerance {requested:e} \
         after {evaluations} evaluations"
    )]
    NonConvergence {
        achieved: f64,
        requested: f64,
        evaluations: usize,
    },

    #[error("{quantity}: quadrature gives {quadrature:e}, closed form gives {closed_form:e}")]
    CrossCheck {
        quantity: &'static str,
        quadrature: f64,
        closed_form: f64,
    },

    #[error("at theta = {theta:e} rad: {source}")]
    AtAngle { theta: f64, source: Box<Error> },
}

impl Error {
    pub(crate) fn domain(quantity: &'static str, reason: impl Into<String>) -> Self {
        Error::Domain {
            quantity,
            reason: reason.into(),
        }
    }

    pub(crate) fn at_angle(self, theta: f64) -> Self {
        match self {
            e @ Error::AtAngle { .. } => e,
            e => Error::AtAngle {
                theta,
                source: Box::new(e),
            },
        }
    }

    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::UnknownPreset { .. } => ErrorKind::Config,
            Error::Domain { .. } | Error::Singularity { .. } | Error::BelowCutoff { .. } => {
                ErrorKind::Domain
            }
            Error::NonConvergence { .. } | Error::CrossCheck { .. } => ErrorKind::Numerical,
            Error::AtAngle { source, .. } => source.kind(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wrapped_errors_keep_their_kind() {
        let e = Error::Singularity { beta_local: 0.1 }.at_angle(0.0);
        assert_eq!(e.kind(), ErrorKind::Domain);
        // wrapping twice keeps the innermost angle
        let e2 = e.clone().at_angle(1.0);
        assert_eq!(e, e2);
    }

    #[test]
    fn unknown_preset_lists_available() {
        let msg = Error::UnknownPreset {
            name: "cesium".into(),
        }
        .to_string();
        assert!(msg.contains("sodium-Na23"), "{msg}");
    }
}
