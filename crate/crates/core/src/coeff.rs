//! The coefficient scalar abstraction for graph sums.

use crate::Rat;
use num_traits::{One, Zero};
use std::fmt::{Debug, Display};
use std::ops::{Neg, Sub};

/// An exact commutative ring usable as graph-sum coefficients.
///
/// Implemented by the rational scalar and by sparse polynomials over it,
/// so the same operator code serves plain `ℚ`-sums and sums with formal
/// parameters (`ε₁`, `ε₂`, `κ`, ...).
pub trait Coeff:
    Clone
    + PartialEq
    + Debug
    + Display
    + Zero
    + One
    + Neg<Output = Self>
    + Sub<Output = Self>
    + From<Rat>
{
    /// Small integer power.
    fn pow_u(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = acc * self.clone();
        }
        acc
    }
}

impl<T> Coeff for T where
    T: Clone
        + PartialEq
        + Debug
        + Display
        + Zero
        + One
        + Neg<Output = T>
        + Sub<Output = T>
        + From<Rat>
{
}
