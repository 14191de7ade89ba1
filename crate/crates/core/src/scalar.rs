//! Scalar abstraction: weights, penalties and energies are real-valued while
//! sizes, deadlines and capacities stay integral.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive};
use serde::{de::DeserializeOwned, Serialize};

/// Floating-point scalar used for weights and energy values.
pub trait Scalar:
    Float
    + FromPrimitive
    + Sum<Self>
    + Default
    + Debug
    + Display
    + Serialize
    + DeserializeOwned
    + Send
    + Sync
    + 'static
{
    /// Lossless-enough conversion from an unsigned count.
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable in scalar")
    }

    /// Conversion from a signed integer difference.
    fn from_diff(n: i64) -> Self {
        Self::from_i64(n).expect("difference representable in scalar")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
