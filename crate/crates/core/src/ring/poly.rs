use std::fmt;

use serde_json::Value;

use super::{LaurentPoly, Ring, Scalar};

/// A univariate polynomial in `λ` with coefficients in a ring, lowest degree
/// first. Trailing zeros are trimmed, so the zero polynomial is empty.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly<R> {
    coeffs: Vec<R>,
}

impl<R: Ring> Poly<R> {
    pub fn new(mut coeffs: Vec<R>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn constant(c: R) -> Self {
        Poly::new(vec![c])
    }

    /// `λ - root`
    pub fn linear(root: R) -> Self {
        Poly::new(vec![root.negated(), R::one()])
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> R {
        self.coeffs.get(k).cloned().unwrap_or_else(R::zero)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&R> {
        self.coeffs.last()
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Poly::one(), |acc, _| acc.times(self))
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> Poly<S> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }

    pub fn eval(&self, x: &R) -> R {
        self.coeffs.iter().rev().fold(R::zero(), |acc, c| acc.times(x).plus(c))
    }

    /// Quotient by `λ - root` via synthetic division, with the remainder.
    pub fn deflate(&self, root: &R) -> (Poly<R>, R) {
        if self.coeffs.is_empty() {
            return (Poly::zero(), R::zero());
        }
        let n = self.coeffs.len();
        let mut quot = vec![R::zero(); n - 1];
        let mut carry = R::zero();
        for k in (0..n).rev() {
            let v = self.coeffs[k].plus(&carry.times(root));
            if k == 0 {
                return (Poly::new(quot), v);
            }
            quot[k - 1] = v.clone();
            carry = v;
        }
        unreachable!()
    }
}

impl Poly<LaurentPoly> {
    /// Coefficients as JSON Laurent objects, lowest degree first.
    pub fn to_json(&self) -> Value {
        Value::Array(self.coeffs.iter().map(|c| c.to_json()).collect())
    }

    /// Projection to a scalar polynomial when every coefficient is constant.
    pub fn constant_coefficients(&self) -> Option<Poly<Scalar>> {
        let cs: Option<Vec<Scalar>> = self.coeffs.iter().map(|c| c.constant_value()).collect();
        cs.map(Poly::new)
    }
}

impl Poly<Scalar> {
    pub fn to_json(&self) -> Value {
        Value::Array(self.coeffs.iter().map(|c| Value::String(c.encode())).collect())
    }
}

impl<R: Ring> Ring for Poly<R> {
    fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    fn one() -> Self {
        Poly::constant(R::one())
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn plus(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k).plus(&rhs.coeff(k))).collect())
    }

    fn minus(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k).minus(&rhs.coeff(k))).collect())
    }

    fn times(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![R::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].plus(&a.times(b));
            }
        }
        Poly::new(out)
    }

    fn negated(&self) -> Self {
        Poly::new(self.coeffs.iter().map(R::negated).collect())
    }

    fn from_int(n: i64) -> Self {
        Poly::constant(R::from_int(n))
    }

    fn div_int(&self, n: i64) -> Self {
        Poly::new(self.coeffs.iter().map(|c| c.div_int(n)).collect())
    }
}

impl<R: Ring + fmt::Display> fmt::Display for Poly<R> {
    /// Highest degree first, coefficients in parentheses: `(1)λ^2 + (-t - 4 - t^-1)λ + (1)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})λ")?,
                _ => write!(f, "({c})λ^{k}")?,
            }
        }
        Ok(())
    }
}

impl<R: Ring> fmt::Debug for Poly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.coeffs).finish()
    }
}
