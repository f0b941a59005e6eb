//! Exact coefficient rings.
//!
//! Everything in this crate is built over four concrete rings: the rationals
//! `Q`, the Gaussian rationals `Q(i)`, and the Laurent polynomial rings over
//! either of them. All of them are modelled by [`LaurentPoly`] over
//! [`Scalar`]; a [`RingSpec`] records which of the four a value is supposed to
//! live in and validates that claim.

mod laurent;
mod poly;
mod roots;
mod scalar;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use laurent::LaurentPoly;
pub use poly::Poly;
pub use roots::{rational_roots, sum_of_two_squares};
pub use scalar::Scalar;

use crate::error::{Error, Result};

/// A commutative ring containing `Q`.
///
/// Arithmetic is by reference so that generic matrix code does not have to
/// clone big-integer coefficients for every operation.
pub trait Ring: Clone + PartialEq + fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, rhs: &Self) -> Self;
    fn minus(&self, rhs: &Self) -> Self;
    fn times(&self, rhs: &Self) -> Self;
    fn negated(&self) -> Self;
    fn from_int(n: i64) -> Self;
    /// Division by a nonzero integer; every ring here is a `Q`-algebra.
    fn div_int(&self, n: i64) -> Self;

    fn is_one(&self) -> bool {
        *self == Self::one()
    }
}

/// Rings in which `a / b` can be decided and computed when it exists.
pub trait ExactDiv: Ring {
    /// Returns `q` with `q * rhs == self`, or `None` if no such `q` exists.
    fn exact_div(&self, rhs: &Self) -> Option<Self>;
    /// Whether the element is invertible in the ring.
    fn is_unit(&self) -> bool;
}

/// Which of the four coefficient rings a matrix lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RingTag {
    Q,
    Qi,
    LaurentQ,
    LaurentQi,
}

/// A ring tag together with its field involution.
///
/// The involution is complex conjugation exactly when the base field
/// contains `i`, so it is derived from the tag rather than stored.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RingSpec {
    tag: RingTag,
}

impl RingSpec {
    pub const Q: RingSpec = RingSpec { tag: RingTag::Q };
    pub const QI: RingSpec = RingSpec { tag: RingTag::Qi };
    pub const LAURENT_Q: RingSpec = RingSpec { tag: RingTag::LaurentQ };
    pub const LAURENT_QI: RingSpec = RingSpec {
        tag: RingTag::LaurentQi,
    };

    pub fn new(tag: RingTag) -> Self {
        RingSpec { tag }
    }

    pub fn tag(self) -> RingTag {
        self.tag
    }

    /// True when the base field is `Q(i)`; then sigma is conjugation.
    pub fn is_gaussian(self) -> bool {
        matches!(self.tag, RingTag::Qi | RingTag::LaurentQi)
    }

    pub fn sigma_is_conjugation(self) -> bool {
        self.is_gaussian()
    }

    pub fn is_laurent(self) -> bool {
        matches!(self.tag, RingTag::LaurentQ | RingTag::LaurentQi)
    }

    /// The constant-coefficient ring underneath.
    pub fn base_field(self) -> RingSpec {
        if self.is_gaussian() {
            RingSpec::QI
        } else {
            RingSpec::Q
        }
    }

    /// The Laurent ring over the same field.
    pub fn laurent(self) -> RingSpec {
        if self.is_gaussian() {
            RingSpec::LAURENT_QI
        } else {
            RingSpec::LAURENT_Q
        }
    }

    pub fn name(self) -> &'static str {
        match self.tag {
            RingTag::Q => "q",
            RingTag::Qi => "qi",
            RingTag::LaurentQ => "laurent_q",
            RingTag::LaurentQi => "laurent_qi",
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        let tag = match name {
            "q" => RingTag::Q,
            "qi" => RingTag::Qi,
            "laurent_q" => RingTag::LaurentQ,
            "laurent_qi" => RingTag::LaurentQi,
            other => return Err(Error::Parse(format!("unknown ring '{other}'"))),
        };
        Ok(RingSpec { tag })
    }

    pub fn contains_scalar(self, s: &Scalar) -> bool {
        self.is_gaussian() || s.is_real()
    }

    /// Whether `p` is an element of this ring.
    pub fn contains(self, p: &LaurentPoly) -> bool {
        (self.is_laurent() || p.is_constant()) && p.coefficients().all(|c| self.contains_scalar(c))
    }
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}
