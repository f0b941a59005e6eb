use std::cmp::Ordering;
use std::fmt;
use std::ops::Div;
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{ExactDiv, Ring};
use crate::error::{Error, Result};

/// An element of `Q(i)`: `re + im*i` with both parts exact rationals.
///
/// Elements of `Q` are the ones with a zero imaginary part.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    re: BigRational,
    im: BigRational,
}

fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    if &(&n * &n) == q.numer() && &(&d * &d) == q.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

impl Scalar {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Scalar { re, im }
    }

    pub fn real(re: BigRational) -> Self {
        Scalar {
            re,
            im: BigRational::zero(),
        }
    }

    pub fn int(n: i64) -> Self {
        Scalar::real(BigRational::from_integer(n.into()))
    }

    /// `num/den`; panics if `den == 0`.
    pub fn frac(num: i64, den: i64) -> Self {
        Scalar::real(BigRational::new(num.into(), den.into()))
    }

    pub fn gaussian(re: BigRational, im: BigRational) -> Self {
        Scalar { re, im }
    }

    /// `a + b*i` with integer parts.
    pub fn gaussian_int(a: i64, b: i64) -> Self {
        Scalar {
            re: BigRational::from_integer(a.into()),
            im: BigRational::from_integer(b.into()),
        }
    }

    pub fn i() -> Self {
        Scalar::gaussian_int(0, 1)
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// Strictly positive rational, the computable part of `R_{>0}`.
    pub fn is_positive_real(&self) -> bool {
        self.is_real() && self.re.is_positive()
    }

    /// The field involution: identity on `Q`, conjugation on `Q(i)`.
    pub fn sigma(&self) -> Scalar {
        Scalar {
            re: self.re.clone(),
            im: -&self.im,
        }
    }

    /// `z * sigma(z)`, a nonnegative rational.
    pub fn norm(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        if self.is_real() {
            return Some(Scalar::real(self.re.recip()));
        }
        let n = self.norm();
        Some(Scalar {
            re: &self.re / &n,
            im: -(&self.im / &n),
        })
    }

    /// Square root inside `Q` (or `Q(i)` when `gaussian`), if one exists.
    ///
    /// The root with positive real part is returned; when the real part
    /// vanishes, the one with positive imaginary part.
    pub fn sqrt(&self, gaussian: bool) -> Option<Scalar> {
        if self.is_zero() {
            return Some(Scalar::zero());
        }
        if self.is_real() {
            if let Some(r) = rational_sqrt(&self.re) {
                return Some(Scalar::real(r));
            }
            if gaussian && self.re.is_negative() {
                let r = rational_sqrt(&-&self.re)?;
                return Some(Scalar::gaussian(BigRational::zero(), r));
            }
            return None;
        }
        if !gaussian {
            return None;
        }
        // (x + iy)^2 = a + bi with b != 0 forces x^2 = (a + |z|)/2 > 0.
        let modulus = rational_sqrt(&self.norm())?;
        let two = BigRational::from_integer(2.into());
        let x = rational_sqrt(&((&self.re + &modulus) / &two))?;
        let y = &self.im / (&two * &x);
        Some(Scalar::gaussian(x, y))
    }

    /// `max(|num|, den)` over both parts.
    pub fn height(&self) -> BigInt {
        let h = |q: &BigRational| q.numer().abs().max(q.denom().clone());
        h(&self.re).max(h(&self.im))
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }

    /// The canonical string form `a/b` or `a/b+c/d*i`.
    pub fn encode(&self) -> String {
        self.to_string()
    }

    pub fn decode(s: &str) -> Result<Scalar> {
        s.parse()
    }

    /// Ordering used for deterministic sorting of roots: by real part, then
    /// imaginary part.
    pub fn cmp_lex(&self, other: &Scalar) -> Ordering {
        self.re.cmp(&other.re).then_with(|| self.im.cmp(&other.im))
    }
}

fn fmt_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

fn parse_rational(s: &str) -> Result<BigRational> {
    let err = || Error::Parse(format!("bad rational '{s}'"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let num: BigInt = num.trim().parse().map_err(|_| err())?;
    let den: BigInt = den.trim().parse().map_err(|_| err())?;
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in '{s}'")));
    }
    Ok(BigRational::new(num, den))
}

impl FromStr for Scalar {
    type Err = Error;

    fn from_str(s: &str) -> Result<Scalar> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::Parse("empty scalar".into()));
        }
        let Some(imag) = s.strip_suffix("*i").or_else(|| s.strip_suffix('i')) else {
            return Ok(Scalar::real(parse_rational(&s)?));
        };
        // The sign separating the two parts is the last '+'/'-' past index 0.
        let split = imag
            .char_indices()
            .skip(1)
            .filter(|&(_, c)| c == '+' || c == '-')
            .map(|(i, _)| i)
            .last();
        let (re, im) = match split {
            Some(i) => (&imag[..i], &imag[i..]),
            None => ("0", imag),
        };
        let im = match im {
            "" | "+" => "1",
            "-" => "-1",
            other => other.strip_prefix('+').unwrap_or(other),
        };
        Ok(Scalar::gaussian(parse_rational(re)?, parse_rational(im)?))
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", fmt_rational(&self.re))?;
        if !self.im.is_zero() {
            let sign = if self.im.is_negative() { '-' } else { '+' };
            write!(f, "{}{}*i", sign, fmt_rational(&self.im.abs()))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Ring for Scalar {
    fn zero() -> Self {
        Scalar::real(BigRational::zero())
    }

    fn one() -> Self {
        Scalar::real(BigRational::one())
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn plus(&self, rhs: &Self) -> Self {
        Scalar {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }

    fn minus(&self, rhs: &Self) -> Self {
        Scalar {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }

    fn times(&self, rhs: &Self) -> Self {
        if self.is_real() && rhs.is_real() {
            return Scalar::real(&self.re * &rhs.re);
        }
        Scalar {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }

    fn negated(&self) -> Self {
        Scalar {
            re: -&self.re,
            im: -&self.im,
        }
    }

    fn from_int(n: i64) -> Self {
        Scalar::int(n)
    }

    fn div_int(&self, n: i64) -> Self {
        let n = BigRational::from_integer(n.into());
        Scalar {
            re: &self.re / &n,
            im: &self.im / &n,
        }
    }
}

impl ExactDiv for Scalar {
    fn exact_div(&self, rhs: &Self) -> Option<Self> {
        Some(self.times(&rhs.inv()?))
    }

    fn is_unit(&self) -> bool {
        !self.is_zero()
    }
}

macro_rules! forward_ops {
    ($t:ty) => {
        impl ::std::ops::Add for $t {
            type Output = $t;
            fn add(self, rhs: $t) -> $t {
                self.plus(&rhs)
            }
        }
        impl<'a> ::std::ops::Add<&'a $t> for &'a $t {
            type Output = $t;
            fn add(self, rhs: &$t) -> $t {
                self.plus(rhs)
            }
        }
        impl ::std::ops::Sub for $t {
            type Output = $t;
            fn sub(self, rhs: $t) -> $t {
                self.minus(&rhs)
            }
        }
        impl<'a> ::std::ops::Sub<&'a $t> for &'a $t {
            type Output = $t;
            fn sub(self, rhs: &$t) -> $t {
                self.minus(rhs)
            }
        }
        impl ::std::ops::Mul for $t {
            type Output = $t;
            fn mul(self, rhs: $t) -> $t {
                self.times(&rhs)
            }
        }
        impl<'a> ::std::ops::Mul<&'a $t> for &'a $t {
            type Output = $t;
            fn mul(self, rhs: &$t) -> $t {
                self.times(rhs)
            }
        }
        impl ::std::ops::Neg for $t {
            type Output = $t;
            fn neg(self) -> $t {
                self.negated()
            }
        }
        impl<'a> ::std::ops::Neg for &'a $t {
            type Output = $t;
            fn neg(self) -> $t {
                self.negated()
            }
        }
    };
}
pub(crate) use forward_ops;

forward_ops!(Scalar);

impl Div for Scalar {
    type Output = Scalar;

    /// Panics on division by zero.
    fn div(self, rhs: Scalar) -> Scalar {
        self.exact_div(&rhs).expect("division by zero scalar")
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::int(n)
    }
}
