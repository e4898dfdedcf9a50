//! Cost scalars.
//!
//! Search and bound arithmetic is written against [`Scalar`] so the same
//! engine runs on `f64`, `f32` or exact rationals. Rationals are handy for
//! fixtures whose bounds have a closed form (220/182 is representable exactly).

use num_rational::Ratio;
use num_traits::{FromPrimitive, Num, ToPrimitive};
use std::fmt::{Debug, Display};

/// Numeric type usable as an action cost, heuristic value or weight.
pub trait Scalar:
    Num + Copy + PartialOrd + FromPrimitive + ToPrimitive + Debug + Display + Send + Sync + 'static
{
    /// Lossy view used for logs, CSV output and tolerance checks.
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Converts from `f64`. `None` when the value has no representation.
    fn from_f64_exact(v: f64) -> Option<Self> {
        Self::from_f64(v)
    }

    fn is_finite_value(self) -> bool {
        self.as_f64().is_finite()
    }

    fn max_of(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    fn min_of(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }
}

impl Scalar for f64 {}
impl Scalar for f32 {}
impl Scalar for Ratio<i64> {}

/// Exact rational cost.
pub type Rational = Ratio<i64>;

/// Total order over scalars known to be finite. Incomparable pairs (NaN)
/// never reach the heap because costs are validated on entry.
pub(crate) fn cmp_scalar<C: Scalar>(a: C, b: C) -> std::cmp::Ordering {
    a.partial_cmp(&b).unwrap_or(std::cmp::Ordering::Equal)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_from_integral_float_is_exact() {
        let r = Rational::from_f64_exact(182.0).unwrap();
        assert_eq!(r, Rational::from_integer(182));
        assert_eq!(Rational::new(220, 182), Rational::new(110, 91));
    }

    #[test]
    fn min_max_helpers() {
        assert_eq!(2.0_f64.max_of(3.0), 3.0);
        assert_eq!(2.0_f64.min_of(3.0), 2.0);
        assert!(!f64::INFINITY.is_finite_value());
    }
}
