//! Scalar trait for the generic determinant engine.
//!
//! The matrix code is generic over any exact scalar with ring operations and
//! division: `BigInt` (fraction-free elimination keeps divisions exact),
//! `BigRational`, and [`crate::CycloElem`] all qualify through the blanket
//! impl from the num-traits bounds.

use num_traits::Zero;
use std::ops::{Div, Mul, Neg, Sub};

pub trait Scalar:
    Clone
    + PartialEq
    + Zero
    + Neg<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Send
    + Sync
{
}

impl<T> Scalar for T where
    T: Clone
        + PartialEq
        + Zero
        + Neg<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
        + Div<Output = T>
        + Send
        + Sync
{
}
