use std::collections::BTreeMap;
use std::fmt;

use num_traits::Signed;
use serde_json::{Map, Value};

use super::scalar::forward_ops;
use super::{ExactDiv, Ring, Scalar};
use crate::error::{Error, Result};

/// A Laurent polynomial in `t` with [`Scalar`] coefficients.
///
/// Stored sparsely as exponent -> coefficient with no zero coefficients, so
/// structural equality is ring equality. The zero polynomial is the empty map.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, Scalar>,
}

impl LaurentPoly {
    pub fn constant(c: Scalar) -> Self {
        Self::monomial(c, 0)
    }

    pub fn int(n: i64) -> Self {
        Self::constant(Scalar::int(n))
    }

    pub fn monomial(c: Scalar, exp: i64) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        LaurentPoly { terms }
    }

    /// The variable `t`.
    pub fn t() -> Self {
        Self::monomial(Scalar::one(), 1)
    }

    /// `t^k`
    pub fn t_pow(k: i64) -> Self {
        Self::monomial(Scalar::one(), k)
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, Scalar)>>(terms: I) -> Self {
        let mut p = LaurentPoly::default();
        for (k, c) in terms {
            p.add_term(k, &c);
        }
        p
    }

    /// Integer coefficients, `(exponent, coefficient)`.
    pub fn from_int_terms(terms: &[(i64, i64)]) -> Self {
        Self::from_terms(terms.iter().map(|&(k, c)| (k, Scalar::int(c))))
    }

    fn add_term(&mut self, exp: i64, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        let sum = match self.terms.get(&exp) {
            Some(old) => old.plus(c),
            None => c.clone(),
        };
        if sum.is_zero() {
            self.terms.remove(&exp);
        } else {
            self.terms.insert(exp, sum);
        }
    }

    pub fn coeff(&self, exp: i64) -> Scalar {
        self.terms.get(&exp).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &Scalar)> {
        self.terms.iter().map(|(&k, c)| (k, c))
    }

    pub fn coefficients(&self) -> impl Iterator<Item = &Scalar> {
        self.terms.values()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// `(lowest, highest)` exponent, or `None` for zero.
    pub fn span(&self) -> Option<(i64, i64)> {
        let lo = *self.terms.keys().next()?;
        let hi = *self.terms.keys().next_back()?;
        Some((lo, hi))
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|&k| k == 0)
    }

    /// The value of a constant polynomial.
    pub fn constant_value(&self) -> Option<Scalar> {
        self.is_constant().then(|| self.coeff(0))
    }

    /// `t -> t^{-1}`
    pub fn rho(&self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(&k, c)| (-k, c.clone())).collect(),
        }
    }

    /// The field involution applied coefficient-wise.
    pub fn sigma(&self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(&k, c)| (k, c.sigma())).collect(),
        }
    }

    pub fn sigma_rho(&self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(&k, c)| (-k, c.sigma())).collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> LaurentPoly {
        if c.is_zero() {
            return LaurentPoly::default();
        }
        LaurentPoly {
            terms: self.terms.iter().map(|(&k, v)| (k, v.times(c))).collect(),
        }
    }

    pub fn shift(&self, by: i64) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(&k, c)| (k + by, c.clone())).collect(),
        }
    }

    /// Square root in the Laurent ring over `Q` (or `Q(i)` when `gaussian`).
    ///
    /// The span of a square has even endpoints; after that check the root is
    /// solved for coefficient by coefficient from the top term, and finally
    /// squared back. The top coefficient of the root has positive real part.
    pub fn sqrt(&self, gaussian: bool) -> Option<LaurentPoly> {
        let Some((lo, hi)) = self.span() else {
            return Some(LaurentPoly::default());
        };
        if lo % 2 != 0 || hi % 2 != 0 {
            return None;
        }
        let (lo, hi) = (lo / 2, hi / 2);
        let top = self.coeff(2 * hi).sqrt(gaussian)?;
        let two_top = top.plus(&top);
        let mut root: BTreeMap<i64, Scalar> = BTreeMap::new();
        root.insert(hi, top);
        for k in (lo..hi).rev() {
            // coefficient of t^{hi+k} in root^2 is 2*q_hi*q_k + sum over the
            // already-known middle terms.
            let mut known = Scalar::zero();
            for j in (k + 1)..hi {
                let (Some(a), Some(b)) = (root.get(&j), root.get(&(hi + k - j))) else {
                    continue;
                };
                known = known.plus(&a.times(b));
            }
            let qk = self.coeff(hi + k).minus(&known).exact_div(&two_top)?;
            if !qk.is_zero() {
                root.insert(k, qk);
            }
        }
        let root = LaurentPoly { terms: root };
        (root.times(&root) == *self).then_some(root)
    }

    /// The monomial inverse of a unit `c t^k`.
    pub fn unit_inverse(&self) -> Option<LaurentPoly> {
        if self.terms.len() != 1 {
            return None;
        }
        let (&k, c) = self.terms.iter().next()?;
        Some(LaurentPoly::monomial(c.inv()?, -k))
    }

    pub fn to_json(&self) -> Value {
        let map: Map<String, Value> = self
            .terms
            .iter()
            .map(|(k, c)| (k.to_string(), Value::String(c.encode())))
            .collect();
        Value::Object(map)
    }

    /// Accepts the object encoding or a bare scalar string.
    pub fn from_json(v: &Value) -> Result<LaurentPoly> {
        match v {
            Value::Object(map) => {
                let mut p = LaurentPoly::default();
                for (k, c) in map {
                    let exp: i64 = k.parse().map_err(|_| Error::Parse(format!("bad exponent '{k}'")))?;
                    let c = match c {
                        Value::String(s) => s.parse()?,
                        Value::Number(n) => n.to_string().parse()?,
                        other => return Err(Error::Parse(format!("bad coefficient {other}"))),
                    };
                    p.add_term(exp, &c);
                }
                Ok(p)
            }
            Value::String(s) => Ok(LaurentPoly::constant(s.parse()?)),
            Value::Number(n) => Ok(LaurentPoly::constant(n.to_string().parse()?)),
            other => Err(Error::Parse(format!("bad Laurent polynomial {other}"))),
        }
    }
}

impl Ring for LaurentPoly {
    fn zero() -> Self {
        LaurentPoly::default()
    }

    fn one() -> Self {
        LaurentPoly::int(1)
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn plus(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (&k, c) in &rhs.terms {
            out.add_term(k, c);
        }
        out
    }

    fn minus(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (&k, c) in &rhs.terms {
            out.add_term(k, &c.negated());
        }
        out
    }

    fn times(&self, rhs: &Self) -> Self {
        let mut out = LaurentPoly::default();
        for (&a, x) in &self.terms {
            for (&b, y) in &rhs.terms {
                out.add_term(a + b, &x.times(y));
            }
        }
        out
    }

    fn negated(&self) -> Self {
        LaurentPoly {
            terms: self.terms.iter().map(|(&k, c)| (k, c.negated())).collect(),
        }
    }

    fn from_int(n: i64) -> Self {
        LaurentPoly::int(n)
    }

    fn div_int(&self, n: i64) -> Self {
        LaurentPoly {
            terms: self.terms.iter().map(|(&k, c)| (k, c.div_int(n))).collect(),
        }
    }
}

impl ExactDiv for LaurentPoly {
    /// Shifts both operands to ordinary polynomials with nonzero constant
    /// term and runs long division over the coefficient field; the quotient
    /// exists in the Laurent ring iff the remainder vanishes.
    fn exact_div(&self, rhs: &Self) -> Option<Self> {
        let (rlo, rhi) = rhs.span()?;
        let Some((lo, _)) = self.span() else {
            return Some(LaurentPoly::default());
        };
        if rlo == rhi {
            let inv = rhs.unit_inverse()?;
            return Some(self.times(&inv));
        }
        let lead_inv = rhs.coeff(rhi).inv()?;
        let mut rem = self.shift(-lo);
        let divisor = rhs.shift(-rlo);
        let ddeg = rhi - rlo;
        let mut quot = LaurentPoly::default();
        while let Some((_, top)) = rem.span() {
            if top < ddeg {
                return None;
            }
            let c = rem.coeff(top).times(&lead_inv);
            let m = LaurentPoly::monomial(c.clone(), top - ddeg);
            rem = rem.minus(&divisor.times(&m));
            quot.add_term(top - ddeg, &c);
        }
        Some(quot.shift(lo - rlo))
    }

    fn is_unit(&self) -> bool {
        self.terms.len() == 1
    }
}

forward_ops!(LaurentPoly);

impl From<Scalar> for LaurentPoly {
    fn from(c: Scalar) -> Self {
        LaurentPoly::constant(c)
    }
}

impl From<i64> for LaurentPoly {
    fn from(n: i64) -> Self {
        LaurentPoly::int(n)
    }
}

fn needs_parens(c: &Scalar) -> bool {
    !c.is_real() || c.re().is_negative() || !c.re().is_integer()
}

impl fmt::Display for LaurentPoly {
    /// Human-readable, highest exponent first: `t + 4 + t^-1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (idx, (&k, c)) in self.terms.iter().rev().enumerate() {
            let (neg, mag) = if c.is_real() && c.re().is_negative() {
                (true, c.negated())
            } else {
                (false, c.clone())
            };
            if idx == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            let var = match k {
                0 => String::new(),
                1 => "t".to_string(),
                _ => format!("t^{k}"),
            };
            if var.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                f.write_str(&var)?;
            } else if needs_parens(&mag) {
                write!(f, "({mag})*{var}")?;
            } else {
                write!(f, "{mag}*{var}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(terms: &[(i64, i64)]) -> LaurentPoly {
        LaurentPoly::from_int_terms(terms)
    }

    #[test]
    fn rho_examples() {
        assert_eq!(lp(&[(0, 1), (1, 1)]).rho(), lp(&[(0, 1), (-1, 1)]));
        assert_eq!(LaurentPoly::int(5).rho(), LaurentPoly::int(5));
        let pal = lp(&[(1, 1), (0, 4), (-1, 1)]);
        assert_eq!(pal.rho(), pal);
    }

    #[test]
    fn sqrt_examples() {
        assert_eq!(lp(&[(2, 1), (1, 2), (0, 1)]).sqrt(false), Some(lp(&[(1, 1), (0, 1)])));
        assert_eq!(lp(&[(0, 6), (1, 1), (-1, 1)]).sqrt(false), None);
        assert_eq!(LaurentPoly::zero().sqrt(false), Some(LaurentPoly::zero()));
        // (t^-1 - 3 + 2t)^2
        let q = lp(&[(-1, 1), (0, -3), (1, 2)]);
        assert_eq!(q.times(&q).sqrt(false), Some(q));
    }

    #[test]
    fn zero_coefficients_are_dropped() {
        let p = lp(&[(1, 1), (0, 2)]);
        assert_eq!(p.minus(&p), LaurentPoly::zero());
        assert_eq!(lp(&[(3, 0)]), LaurentPoly::zero());
        assert_eq!(lp(&[(3, 0)]).span(), None);
    }

    #[test]
    fn exact_division() {
        let a = lp(&[(1, 1), (0, 3), (-1, 1)]);
        let b = lp(&[(-2, 1), (0, 1)]);
        let prod = a.times(&b);
        assert_eq!(prod.exact_div(&b), Some(a.clone()));
        assert_eq!(prod.exact_div(&a), Some(b));
        assert_eq!(a.exact_div(&lp(&[(0, 1), (1, 1)])), None);
        assert_eq!(a.exact_div(&lp(&[(5, 2)])), Some(a.shift(-5).div_int(2)));
        assert_eq!(a.exact_div(&LaurentPoly::zero()), None);
    }

    #[test]
    fn json_encoding() {
        let p = lp(&[(-1, 1), (0, 4), (1, 1)]);
        let v = p.to_json();
        assert_eq!(v.to_string(), r#"{"-1":"1","0":"4","1":"1"}"#);
        assert_eq!(LaurentPoly::from_json(&v).unwrap(), p);
        assert_eq!(
            LaurentPoly::from_json(&Value::String("3/2".into())).unwrap(),
            LaurentPoly::constant(Scalar::frac(3, 2))
        );
    }

    #[test]
    fn display() {
        assert_eq!(lp(&[(-1, 1), (0, 4), (1, 1)]).to_string(), "t + 4 + t^-1");
        assert_eq!(lp(&[(-1, -1), (1, -1)]).to_string(), "-t - t^-1");
        assert_eq!(LaurentPoly::zero().to_string(), "0");
    }
}
