//! Scalar abstractions the generic polynomial and curve code is written against.
//!
//! [`Scalar`] covers every type with a context-free zero and one (machine
//! floats, complex floats, big integers, big rationals) and is expressed in
//! terms of `num-traits`. [`Ring`] and [`Field`] additionally cover
//! context-carrying scalars such as [`crate::Padic`], whose zero depends on the
//! prime and the working precision of the value it is derived from.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{FromPrimitive, Num};

/// A commutative ring element with context-free constants.
pub trait Scalar: Num + Clone + FromPrimitive + Neg<Output = Self> + Debug {}

impl<T> Scalar for T where T: Num + Clone + FromPrimitive + Neg<Output = T> + Debug {}

/// A commutative ring element whose constants may depend on a sibling value.
pub trait Ring:
    Clone + Debug + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
    /// The integer `n`, in the same "context" (prime, precision) as `self`.
    fn int_like(&self, n: i64) -> Self;

    /// True when the element is zero (for inexact types: zero at its precision).
    fn is_zero_elem(&self) -> bool;

    fn zero_like(&self) -> Self {
        self.int_like(0)
    }

    fn one_like(&self) -> Self {
        self.int_like(1)
    }

    fn square(&self) -> Self {
        self.clone() * self.clone()
    }
}

/// A ring in which every element that is not zero can be inverted.
pub trait Field: Ring + Div<Output = Self> {}

impl<T: Scalar> Ring for T {
    fn int_like(&self, n: i64) -> Self {
        T::from_i64(n).expect("small integer constant representable")
    }

    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
}

impl Field for f32 {}
impl Field for f64 {}
impl Field for num_rational::BigRational {}
impl<F: num_traits::Float + FromPrimitive + Debug> Field for num_complex::Complex<F> {}
