//! Exact coefficient arithmetic.
//!
//! Everything above this module is written against [`Field`] and runs
//! either on [`ExactRational`] values (numeric mode) or on
//! [`RationalFunction`]s in formal `q`, `t` (symbolic mode).

mod laurent;
mod ratfunc;
mod rational;

use std::fmt::{Debug, Display};

pub use laurent::{Exponent, LaurentPoly, Term};
pub use ratfunc::{RationalFunction, RationalFunctionRepr};
pub use rational::ExactRational;

use crate::error::Result;

/// Exact field arithmetic shared by the numeric and symbolic instantiations.
pub trait Field: Clone + PartialEq + Debug + Display + Send + Sync + 'static {
    /// True for formal `q`, `t`.
    const SYMBOLIC: bool;
    fn zero() -> Self;
    fn one() -> Self;
    fn from_int(n: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn add_ref(&self, rhs: &Self) -> Self;
    fn sub_ref(&self, rhs: &Self) -> Self;
    fn mul_ref(&self, rhs: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    fn checked_div(&self, rhs: &Self) -> Result<Self>;
    /// Integer power with `0^0 = 1`.
    fn powi(&self, e: i32) -> Result<Self>;
}

impl Field for ExactRational {
    const SYMBOLIC: bool = false;
    fn zero() -> Self {
        ExactRational::zero()
    }
    fn one() -> Self {
        ExactRational::one()
    }
    fn from_int(n: i64) -> Self {
        ExactRational::from_integer(n)
    }
    fn is_zero(&self) -> bool {
        ExactRational::is_zero(self)
    }
    fn add_ref(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub_ref(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn checked_div(&self, rhs: &Self) -> Result<Self> {
        ExactRational::checked_div(self, rhs)
    }
    fn powi(&self, e: i32) -> Result<Self> {
        self.pow(e)
    }
}

impl Field for RationalFunction {
    const SYMBOLIC: bool = true;
    fn zero() -> Self {
        RationalFunction::zero()
    }
    fn one() -> Self {
        RationalFunction::one()
    }
    fn from_int(n: i64) -> Self {
        RationalFunction::constant(ExactRational::from_integer(n))
    }
    fn is_zero(&self) -> bool {
        RationalFunction::is_zero(self)
    }
    fn add_ref(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub_ref(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn checked_div(&self, rhs: &Self) -> Result<Self> {
        RationalFunction::checked_div(self, rhs)
    }
    fn powi(&self, e: i32) -> Result<Self> {
        self.pow(e)
    }
}

/// The q-integer `[n] = 1 + q + … + q^{n-1}`, which is `(q^n - 1)/(q - 1)`
/// away from `q = 1` and equals `n` at `q = 1`.
pub fn q_integer<F: Field>(n: u32, q: &F) -> F {
    let mut acc = F::zero();
    let mut power = F::one();
    for _ in 0..n {
        acc = acc.add_ref(&power);
        power = power.mul_ref(q);
    }
    acc
}

/// `1 - x`.
pub fn one_minus<F: Field>(x: &F) -> F {
    F::one().sub_ref(x)
}

/// Product of a sequence of field elements.
pub fn product<F: Field>(items: impl IntoIterator<Item = F>) -> F {
    items.into_iter().fold(F::one(), |acc, x| acc.mul_ref(&x))
}
