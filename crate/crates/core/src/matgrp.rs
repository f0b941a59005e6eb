//! Square matrices over the exact rings and the group `SL_n` built on them.

use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::ring::{ExactDiv, LaurentPoly, Poly, Ring, RingSpec, Scalar};

/// Dense row-major square matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<R> {
    n: usize,
    data: Vec<R>,
}

impl<R: Ring> Matrix<R> {
    pub fn zeros(n: usize) -> Self {
        Matrix {
            n,
            data: vec![R::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal((0..n).map(|_| R::one()).collect())
    }

    pub fn diagonal(entries: Vec<R>) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n);
        for (i, e) in entries.into_iter().enumerate() {
            m.data[i * n + i] = e;
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<R>>) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch(n, row.len()));
            }
            data.extend(row);
        }
        Ok(Matrix { n, data })
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> R) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Matrix { n, data }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &R {
        &self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: R) {
        self.data[i * self.n + j] = v;
    }

    pub fn rows(&self) -> impl Iterator<Item = &[R]> {
        self.data.chunks(self.n.max(1))
    }

    pub fn entries(&self) -> impl Iterator<Item = &R> {
        self.data.iter()
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> Matrix<S> {
        Matrix {
            n: self.n,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = rhs.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * n + j;
                    out.data[idx] = out.data[idx].plus(&a.times(b));
                }
            }
        }
        out
    }

    pub fn add(&self, rhs: &Self) -> Self {
        Matrix {
            n: self.n,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.plus(b)).collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        Matrix {
            n: self.n,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.minus(b)).collect(),
        }
    }

    pub fn scale(&self, c: &R) -> Self {
        self.map(|x| x.times(c))
    }

    pub fn trace(&self) -> R {
        (0..self.n).fold(R::zero(), |acc, i| acc.plus(self.get(i, i)))
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.n)
    }

    pub fn is_diagonal(&self) -> bool {
        self.is_upper_triangular() && self.is_lower_triangular()
    }

    pub fn is_upper_triangular(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j).is_zero()))
    }

    pub fn is_lower_triangular(&self) -> bool {
        (0..self.n).all(|i| (i + 1..self.n).all(|j| self.get(i, j).is_zero()))
    }

    pub fn has_unit_diagonal(&self) -> bool {
        (0..self.n).all(|i| self.get(i, i).is_one())
    }

    pub fn diagonal_entries(&self) -> Vec<R> {
        (0..self.n).map(|i| self.get(i, i).clone()).collect()
    }

    /// The matrix with row `row` and column `col` deleted.
    pub fn minor(&self, row: usize, col: usize) -> Self {
        let n = self.n - 1;
        Self::from_fn(n, |i, j| {
            let si = if i < row { i } else { i + 1 };
            let sj = if j < col { j } else { j + 1 };
            self.get(si, sj).clone()
        })
    }

    /// The leading `k x k` block.
    pub fn leading_block(&self, k: usize) -> Self {
        Self::from_fn(k, |i, j| self.get(i, j).clone())
    }

    /// Laplace expansion along the first row. Exponential; only for small
    /// matrices and as an independent check on [`Matrix::det_bareiss`].
    pub fn det_cofactor(&self) -> R {
        match self.n {
            0 => R::one(),
            1 => self.data[0].clone(),
            2 => self.data[0]
                .times(&self.data[3])
                .minus(&self.data[1].times(&self.data[2])),
            n => (0..n).fold(R::zero(), |acc, j| {
                let a = self.get(0, j);
                if a.is_zero() {
                    return acc;
                }
                let term = a.times(&self.minor(0, j).det_cofactor());
                if j % 2 == 0 {
                    acc.plus(&term)
                } else {
                    acc.minus(&term)
                }
            }),
        }
    }

    /// `det(λI - A)` by cofactor expansion over `R[λ]`.
    pub fn charpoly_cofactor(&self) -> Poly<R> {
        let lambda = Poly::new(vec![R::zero(), R::one()]);
        let m = Matrix::from_fn(self.n, |i, j| {
            let a = Poly::constant(self.get(i, j).clone());
            if i == j {
                lambda.minus(&a)
            } else {
                a.negated()
            }
        });
        m.det_cofactor()
    }

    /// Characteristic polynomial `det(λI - A)` by Faddeev-LeVerrier.
    ///
    /// Only divides by the integers `1..=n`, so it works over any of the
    /// rings here without fractions in the ring element itself.
    pub fn charpoly(&self) -> Poly<R> {
        let n = self.n;
        let mut c = vec![R::zero(); n + 1];
        c[n] = R::one();
        let mut am = Self::zeros(n);
        for k in 1..=n {
            let mut m = am;
            for i in 0..n {
                let idx = i * n + i;
                m.data[idx] = m.data[idx].plus(&c[n - k + 1]);
            }
            am = self.mul(&m);
            c[n - k] = am.trace().negated().div_int(k as i64);
        }
        Poly::new(c)
    }
}

impl<R: ExactDiv> Matrix<R> {
    /// Fraction-free Bareiss elimination with row pivoting.
    pub fn det_bareiss(&self) -> R {
        let n = self.n;
        if n == 0 {
            return R::one();
        }
        let mut a = self.data.clone();
        let mut negate = false;
        let mut prev = R::one();
        for k in 0..n - 1 {
            if a[k * n + k].is_zero() {
                let Some(r) = (k + 1..n).find(|&r| !a[r * n + k].is_zero()) else {
                    return R::zero();
                };
                for j in 0..n {
                    a.swap(k * n + j, r * n + j);
                }
                negate = !negate;
            }
            let pivot = a[k * n + k].clone();
            for i in k + 1..n {
                let aik = a[i * n + k].clone();
                for j in k + 1..n {
                    let num = pivot.times(&a[i * n + j]).minus(&aik.times(&a[k * n + j]));
                    a[i * n + j] = num
                        .exact_div(&prev)
                        .expect("Bareiss division is exact over an integral domain");
                }
                a[i * n + k] = R::zero();
            }
            prev = pivot;
        }
        let d = a[n * n - 1].clone();
        if negate {
            d.negated()
        } else {
            d
        }
    }

    pub fn adjugate(&self) -> Self {
        let n = self.n;
        if n == 1 {
            return Self::identity(1);
        }
        Self::from_fn(n, |i, j| {
            let d = self.minor(j, i).det_bareiss();
            if (i + j) % 2 == 0 {
                d
            } else {
                d.negated()
            }
        })
    }

    /// `adj(A) / det(A)`, when `det(A)` is a unit.
    pub fn inverse(&self) -> Option<Self> {
        let d = self.det_bareiss();
        if !d.is_unit() {
            return None;
        }
        let adj = self.adjugate();
        let data: Option<Vec<R>> = adj.data.iter().map(|x| x.exact_div(&d)).collect();
        Some(Matrix { n: self.n, data: data? })
    }
}

impl Matrix<LaurentPoly> {
    /// Determinant over the Laurent ring: shift every entry by a common
    /// `t^m` so all entries are ordinary polynomials, run Bareiss there and
    /// undo the shift (`det(t^m A) = t^{mn} det(A)`).
    pub fn det(&self) -> LaurentPoly {
        let m = self
            .data
            .iter()
            .filter_map(|p| p.span().map(|(lo, _)| lo))
            .min()
            .unwrap_or(0)
            .min(0);
        if m == 0 {
            return self.det_bareiss();
        }
        let shifted = self.map(|p| p.shift(-m));
        shifted.det_bareiss().shift(m * self.n as i64)
    }

    pub fn sigma(&self) -> Self {
        self.map(LaurentPoly::sigma)
    }

    pub fn rho(&self) -> Self {
        self.map(LaurentPoly::rho)
    }

    pub fn sigma_rho(&self) -> Self {
        self.map(LaurentPoly::sigma_rho)
    }

    /// Every entry is a constant (degree-0) polynomial.
    pub fn is_constant(&self) -> bool {
        self.data.iter().all(LaurentPoly::is_constant)
    }

    pub fn to_scalar(&self) -> Option<Matrix<Scalar>> {
        let data: Option<Vec<Scalar>> = self.data.iter().map(LaurentPoly::constant_value).collect();
        Some(Matrix { n: self.n, data: data? })
    }

    pub fn entries_json(&self, ring: RingSpec) -> Value {
        Value::Array(
            self.rows()
                .map(|row| {
                    Value::Array(
                        row.iter()
                            .map(|p| match p.constant_value() {
                                Some(c) if !ring.is_laurent() => Value::String(c.encode()),
                                _ => p.to_json(),
                            })
                            .collect(),
                    )
                })
                .collect(),
        )
    }

    pub fn entries_from_json(v: &Value) -> Result<Self> {
        let rows = v
            .as_array()
            .ok_or_else(|| Error::Parse("entries must be an array of rows".into()))?;
        let rows: Result<Vec<Vec<LaurentPoly>>> = rows
            .iter()
            .map(|row| {
                row.as_array()
                    .ok_or_else(|| Error::Parse("each row must be an array".into()))?
                    .iter()
                    .map(LaurentPoly::from_json)
                    .collect()
            })
            .collect();
        Matrix::from_rows(rows?)
    }
}

impl Matrix<Scalar> {
    pub fn lift(&self) -> Matrix<LaurentPoly> {
        self.map(|c| LaurentPoly::constant(c.clone()))
    }

    pub fn sigma(&self) -> Self {
        self.map(Scalar::sigma)
    }

    /// Conjugate transpose `(A^sigma)^T`.
    pub fn adjoint(&self) -> Self {
        self.sigma().transpose()
    }
}

impl<R: Ring + fmt::Display> fmt::Display for Matrix<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, row) in self.rows().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str("[")?;
            for (j, x) in row.iter().enumerate() {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{x}")?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}

impl<R: Ring> fmt::Debug for Matrix<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.data.chunks(self.n.max(1))).finish()
    }
}

/// The two matrix models: `SL_n` over a field, and `SL_n` over the Laurent
/// ring (affine type `Ã_{n-1}`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Model {
    Spherical,
    Affine,
}

impl Model {
    pub fn of_ring(ring: RingSpec) -> Model {
        if ring.is_laurent() {
            Model::Affine
        } else {
            Model::Spherical
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Model::Spherical => "spherical",
            Model::Affine => "affine",
        }
    }

    pub fn parse(s: &str) -> Result<Model> {
        match s {
            "spherical" => Ok(Model::Spherical),
            "affine" => Ok(Model::Affine),
            other => Err(Error::Parse(format!("unknown model '{other}'"))),
        }
    }

    /// The natural ring of the model over `Q` or `Q(i)`.
    pub fn ring(self, gaussian: bool) -> RingSpec {
        match (self, gaussian) {
            (Model::Spherical, false) => RingSpec::Q,
            (Model::Spherical, true) => RingSpec::QI,
            (Model::Affine, false) => RingSpec::LAURENT_Q,
            (Model::Affine, true) => RingSpec::LAURENT_QI,
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// An element of `G = SL_n(R)`: a matrix with determinant exactly 1.
///
/// Entries are always stored as Laurent polynomials; in the spherical model
/// they are constants. The model is determined by the ring.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GroupElement {
    matrix: Matrix<LaurentPoly>,
    ring: RingSpec,
}

impl GroupElement {
    pub fn new(matrix: Matrix<LaurentPoly>, ring: RingSpec) -> Result<Self> {
        if matrix.n() == 0 {
            return Err(Error::BadDimension("empty matrix".into()));
        }
        if !matrix.entries().all(|p| ring.contains(p)) {
            return Err(Error::NotInRing(ring.name().into()));
        }
        if !matrix.det().is_one() {
            return Err(Error::NotSpecial);
        }
        Ok(GroupElement { matrix, ring })
    }

    /// Skips the determinant check; callers guarantee `det == 1`.
    pub(crate) fn new_unchecked(matrix: Matrix<LaurentPoly>, ring: RingSpec) -> Self {
        debug_assert!(matrix.det().is_one());
        GroupElement { matrix, ring }
    }

    pub fn from_scalar(matrix: &Matrix<Scalar>, ring: RingSpec) -> Result<Self> {
        Self::new(matrix.lift(), ring)
    }

    pub fn identity(n: usize, ring: RingSpec) -> Self {
        GroupElement {
            matrix: Matrix::identity(n),
            ring,
        }
    }

    pub fn diagonal(entries: Vec<LaurentPoly>, ring: RingSpec) -> Result<Self> {
        Self::new(Matrix::diagonal(entries), ring)
    }

    pub fn matrix(&self) -> &Matrix<LaurentPoly> {
        &self.matrix
    }

    pub fn into_matrix(self) -> Matrix<LaurentPoly> {
        self.matrix
    }

    pub fn ring(&self) -> RingSpec {
        self.ring
    }

    pub fn model(&self) -> Model {
        Model::of_ring(self.ring)
    }

    pub fn n(&self) -> usize {
        self.matrix.n()
    }

    pub fn get(&self, i: usize, j: usize) -> &LaurentPoly {
        self.matrix.get(i, j)
    }

    fn check_compatible(&self, other: &GroupElement) -> Result<()> {
        if self.n() != other.n() {
            return Err(Error::DimensionMismatch(self.n(), other.n()));
        }
        if self.ring != other.ring {
            return Err(Error::RingMismatch(self.ring.name().into(), other.ring.name().into()));
        }
        Ok(())
    }

    pub fn mul(&self, rhs: &GroupElement) -> Result<GroupElement> {
        self.check_compatible(rhs)?;
        Ok(GroupElement {
            matrix: self.matrix.mul(&rhs.matrix),
            ring: self.ring,
        })
    }

    pub fn det(&self) -> LaurentPoly {
        self.matrix.det()
    }

    /// The adjugate, which is the inverse because `det == 1`.
    pub fn inverse(&self) -> GroupElement {
        GroupElement {
            matrix: self.matrix.adjugate(),
            ring: self.ring,
        }
    }

    pub fn transpose(&self) -> GroupElement {
        GroupElement {
            matrix: self.matrix.transpose(),
            ring: self.ring,
        }
    }

    pub fn charpoly(&self) -> Poly<LaurentPoly> {
        self.matrix.charpoly()
    }

    pub fn pow(&self, e: u32) -> GroupElement {
        let mut acc = GroupElement::identity(self.n(), self.ring);
        for _ in 0..e {
            acc.matrix = acc.matrix.mul(&self.matrix);
        }
        acc
    }

    pub fn is_identity(&self) -> bool {
        self.matrix.is_identity()
    }

    /// Same element regarded in another ring containing it.
    pub fn with_ring(&self, ring: RingSpec) -> Result<GroupElement> {
        Self::new(self.matrix.clone(), ring)
    }

    /// `{"ring": ..., "n": ..., "entries": [[...]]}`
    pub fn to_json(&self) -> Value {
        json!({
            "ring": self.ring.name(),
            "n": self.n(),
            "entries": self.matrix.entries_json(self.ring),
        })
    }

    pub fn from_json(v: &Value) -> Result<GroupElement> {
        let ring = v
            .get("ring")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::Parse("missing \"ring\"".into()))?;
        let ring = RingSpec::parse(ring)?;
        let entries = v
            .get("entries")
            .ok_or_else(|| Error::Parse("missing \"entries\"".into()))?;
        let matrix = Matrix::entries_from_json(entries)?;
        if let Some(n) = v.get("n").and_then(Value::as_u64) {
            if n as usize != matrix.n() {
                return Err(Error::DimensionMismatch(n as usize, matrix.n()));
            }
        }
        GroupElement::new(matrix, ring)
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.matrix)
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupElement<{}>({})", self.ring, self.matrix)
    }
}

/// The root-group element `I + s t^k E_ij` (indices 1-based).
///
/// In a non-Laurent ring only `k = 0` is allowed.
pub fn chevalley_generator(ring: RingSpec, n: usize, i: usize, j: usize, k: i64, s: Scalar) -> Result<GroupElement> {
    if i == j || i == 0 || j == 0 || i > n || j > n {
        return Err(Error::BadIndices(format!("({i}, {j}) in dimension {n}")));
    }
    if k != 0 && !ring.is_laurent() {
        return Err(Error::BadIndices(format!("exponent {k} requires a Laurent ring")));
    }
    if !ring.contains_scalar(&s) {
        return Err(Error::NotInRing(ring.name().into()));
    }
    let mut m = Matrix::identity(n);
    m.set(i - 1, j - 1, LaurentPoly::monomial(s, k));
    Ok(GroupElement::new_unchecked(m, ring))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(terms: &[(i64, i64)]) -> LaurentPoly {
        LaurentPoly::from_int_terms(terms)
    }

    fn hole_u() -> GroupElement {
        let a = chevalley_generator(RingSpec::LAURENT_Q, 2, 1, 2, 0, Scalar::one()).unwrap();
        let b = chevalley_generator(RingSpec::LAURENT_Q, 2, 1, 2, 1, Scalar::one()).unwrap();
        a.mul(&b).unwrap()
    }

    #[test]
    fn generators() {
        let g = chevalley_generator(RingSpec::Q, 2, 1, 2, 0, Scalar::one()).unwrap();
        assert_eq!(g.get(0, 1), &LaurentPoly::int(1));
        assert_eq!(g.get(1, 0), &LaurentPoly::zero());
        let g = chevalley_generator(RingSpec::LAURENT_Q, 2, 1, 2, 1, Scalar::one()).unwrap();
        assert_eq!(g.get(0, 1), &LaurentPoly::t());
        let u = hole_u();
        assert_eq!(u.get(0, 1), &lp(&[(0, 1), (1, 1)]));
        assert!(chevalley_generator(RingSpec::Q, 2, 1, 1, 0, Scalar::one()).is_err());
        assert!(chevalley_generator(RingSpec::Q, 2, 1, 3, 0, Scalar::one()).is_err());
        assert!(chevalley_generator(RingSpec::Q, 2, 1, 2, 1, Scalar::one()).is_err());
        assert!(chevalley_generator(RingSpec::Q, 2, 1, 2, 0, Scalar::i()).is_err());
    }

    #[test]
    fn determinants() {
        assert!(Matrix::<LaurentPoly>::identity(3).det().is_one());
        let d = Matrix::diagonal(vec![LaurentPoly::t(), LaurentPoly::t_pow(-1)]);
        assert!(d.det().is_one());
        let m = Matrix::from_rows(vec![
            vec![lp(&[(1, 1), (0, 3), (-1, 1)]), lp(&[(0, 1), (1, 1)])],
            vec![lp(&[(0, 1), (-1, 1)]), LaurentPoly::int(1)],
        ])
        .unwrap();
        assert!(m.det().is_one());
        assert_eq!(m.det(), m.det_cofactor());
    }

    #[test]
    fn inverse_of_unitriangular() {
        let u = hole_u();
        let inv = u.inverse();
        assert_eq!(inv.get(0, 1), &lp(&[(0, -1), (1, -1)]));
        assert!(u.mul(&inv).unwrap().is_identity());
    }

    #[test]
    fn charpoly_of_identity() {
        let p = GroupElement::identity(3, RingSpec::Q).charpoly();
        let expected = Poly::linear(LaurentPoly::one()).pow(3);
        assert_eq!(p, expected);
    }

    #[test]
    fn rejects_non_special_and_foreign_entries() {
        let m = Matrix::diagonal(vec![LaurentPoly::int(2), LaurentPoly::int(1)]);
        assert_eq!(GroupElement::new(m, RingSpec::Q), Err(Error::NotSpecial));
        let m = Matrix::diagonal(vec![LaurentPoly::t(), LaurentPoly::t_pow(-1)]);
        assert!(matches!(GroupElement::new(m, RingSpec::Q), Err(Error::NotInRing(_))));
    }

    #[test]
    fn json_round_trip() {
        let u = hole_u();
        let v = u.to_json();
        assert_eq!(
            v.to_string(),
            r#"{"entries":[[{"0":"1"},{"0":"1","1":"1"}],[{},{"0":"1"}]],"n":2,"ring":"laurent_q"}"#
        );
        assert_eq!(GroupElement::from_json(&v).unwrap(), u);
        let g = chevalley_generator(RingSpec::Q, 2, 2, 1, 0, Scalar::frac(1, 2)).unwrap();
        let v = g.to_json();
        assert_eq!(v["entries"].to_string(), r#"[["1","0"],["1/2","1"]]"#);
        assert_eq!(GroupElement::from_json(&v).unwrap(), g);
    }
}
