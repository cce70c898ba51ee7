//! The exact field abstraction shared by the linear algebra and polynomial code.

use std::fmt::Debug;
use std::ops::Neg;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{NumOps, One, Zero};

/// An exact field of characteristic zero.
///
/// `Zero`/`One` must be context free, so a scalar type whose field is only known at
/// runtime has to let the constants embed into every field it can meet.
pub trait Field:
    Clone + Debug + PartialEq + Send + Sync + Zero + One + Neg<Output = Self> + NumOps + for<'a> NumOps<&'a Self>
{
    /// Multiplicative inverse, `None` for zero.
    fn inv(&self) -> Option<Self>;

    fn from_rational(r: BigRational) -> Self;

    fn from_i64(v: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(v)))
    }

    /// True when the value is an element of the prime field.
    fn is_rational(&self) -> bool;

    /// Rough size used to pick sparse pivots; larger means more expensive.
    fn weight(&self) -> usize {
        1
    }
}

impl Field for BigRational {
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }

    fn from_rational(r: BigRational) -> Self {
        r
    }

    fn is_rational(&self) -> bool {
        true
    }

    fn weight(&self) -> usize {
        (self.numer().bits() + self.denom().bits()) as usize
    }
}

/// Plain text rendering of a rational as `p` or `p/q`.
pub fn rat_to_string(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parse `p`, `-p` or `p/q`.
pub fn rat_from_str(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((a, b)) = s.split_once('/') {
        let n: BigInt = a.trim().parse().ok()?;
        let d: BigInt = b.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        Some(BigRational::new(n, d))
    } else {
        let n: BigInt = s.parse().ok()?;
        Some(BigRational::from_integer(n))
    }
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

