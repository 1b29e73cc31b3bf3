//! Scalar types accepted by the optimisation routines.

use std::fmt::Debug;

use num_rational::Rational64;
use num_traits::{Float, Num, Signed};

/// Ordered field elements the objective and constraint checks run over.
///
/// Floats compare constraints with a small absolute slack; exact types
/// compare with none.
pub trait Scalar: Num + Signed + Clone + PartialOrd + Debug + Send + Sync + 'static {
    /// Absolute tolerance added to the right-hand side of every `<=` check.
    fn slack() -> Self;

    fn from_i64(v: i64) -> Self;

    fn to_f64(&self) -> f64;
}

/// Scalars with square roots, needed by the closed forms and the oracle.
pub trait Real: Scalar + Float {}

impl Scalar for f64 {
    fn slack() -> Self {
        1e-12
    }

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }
}

impl Scalar for f32 {
    fn slack() -> Self {
        1e-6
    }

    fn from_i64(v: i64) -> Self {
        v as f32
    }

    fn to_f64(&self) -> f64 {
        *self as f64
    }
}

impl Scalar for Rational64 {
    fn slack() -> Self {
        Rational64::from_integer(0)
    }

    fn from_i64(v: i64) -> Self {
        Rational64::from_integer(v)
    }

    fn to_f64(&self) -> f64 {
        *self.numer() as f64 / *self.denom() as f64
    }
}

impl Real for f64 {}
impl Real for f32 {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_slack_is_zero() {
        assert_eq!(Rational64::slack(), Rational64::from_integer(0));
        assert_eq!(Rational64::new(3, 4).to_f64(), 0.75);
        assert!(f64::slack() > 0.0);
    }
}
