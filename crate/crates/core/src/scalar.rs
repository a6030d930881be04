//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt::Debug;

use num_traits::{Float, FloatConst, FromPrimitive};

/// Floating-point scalar the kernels are generic over.
///
/// Implemented for every type providing the `num-traits` float surface, so
/// `f32`, `f64` and extended-precision types such as double-double all work.
pub trait Real: Float + FloatConst + FromPrimitive + Debug + Send + Sync + 'static {
    /// Converts an `f64` literal, rounding to the nearest representable value.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal must be representable")
    }

    /// Lossy conversion used for diagnostics and error messages.
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Default absolute tolerance for kernel integrals: `1e-10`, or a
    /// hundred machine epsilons for scalars too coarse for that.
    fn default_tolerance() -> Self {
        Self::lit(1e-10).max(Self::epsilon() * Self::lit(100.0))
    }
}

impl<T> Real for T where T: Float + FloatConst + FromPrimitive + Debug + Send + Sync + 'static {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_tolerance_by_precision() {
        assert_eq!(f64::default_tolerance(), 1e-10);
        let t32 = f32::default_tolerance();
        assert!(t32 > 1e-6 && t32 < 1e-4, "{t32}");
    }
}
