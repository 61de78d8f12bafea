//! Scalar abstraction shared by every fidelity/probability computation.

use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive};

/// Floating-point type usable by the fidelity maps and recursions.
///
/// Implemented for `f32` and `f64`. Everything numeric in this crate is
/// written against this trait; the integer parts (Pauli algebra, rate
/// accounting) are exact and do not depend on it.
pub trait Real: Float + FromPrimitive + Debug + Display + Default + Send + Sync + 'static {
    /// Converts an `f64` literal. Panics only if the value is not representable,
    /// which cannot happen for the finite constants used in this crate.
    #[inline]
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("finite literal")
    }

    #[inline]
    fn from_count(v: u64) -> Self {
        Self::from_u64(v).expect("count fits in float")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("finite float")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Evenly spaced points on `[lo, hi]` (inclusive). A single point yields `[lo]`.
pub fn linspace<T: Real>(lo: T, hi: T, points: usize) -> Vec<T> {
    match points {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let steps = T::from_count(points as u64 - 1);
            (0..points)
                .map(|i| {
                    if i + 1 == points {
                        hi
                    } else {
                        lo + (hi - lo) * T::from_count(i as u64) / steps
                    }
                })
                .collect()
        }
    }
}
