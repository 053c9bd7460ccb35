//! Truncated power series k[t]/t^N and small matrices over them.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};

/// t-adic valuation of a truncated series.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Valuation {
    Finite(usize),
    /// Every stored coefficient vanishes; the true valuation is at least this.
    AtLeast(usize),
}

impl Valuation {
    pub fn finite(self) -> Option<usize> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::AtLeast(_) => None,
        }
    }

    /// Like [`Valuation::finite`] but reports exhaustion as an error.
    pub fn require(self) -> Result<usize> {
        match self {
            Valuation::Finite(v) => Ok(v),
            Valuation::AtLeast(n) => Err(Error::PrecisionExhausted { precision: n }),
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::AtLeast(n) => write!(f, ">= {n}"),
        }
    }
}

/// An element of k[t]/t^N. The precision N is the number of stored coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TruncatedSeries {
    field: Field,
    coeffs: Vec<Scalar>,
}

impl TruncatedSeries {
    /// Coefficients beyond `precision` are dropped, missing ones are zero.
    pub fn new(field: Field, coeffs: Vec<Scalar>, precision: usize) -> Result<Self> {
        if precision == 0 {
            return Err(Error::PrecisionTooSmall { min: 1, got: 0 });
        }
        if let Some(bad) = coeffs.iter().find(|c| c.field() != field) {
            return Err(Error::FieldMismatch {
                left: field,
                right: bad.field(),
            });
        }
        let mut coeffs = coeffs;
        coeffs.resize(precision, Scalar::zero(field));
        coeffs.truncate(precision);
        Ok(TruncatedSeries { field, coeffs })
    }

    pub fn from_i64s(field: Field, coeffs: &[i64], precision: usize) -> Self {
        let coeffs = coeffs.iter().map(|&c| Scalar::from_i64(field, c)).collect();
        Self::new(field, coeffs, precision).expect("precision >= 1")
    }

    pub fn zero(field: Field, precision: usize) -> Self {
        Self::from_i64s(field, &[], precision)
    }

    pub fn one(field: Field, precision: usize) -> Self {
        Self::from_i64s(field, &[1], precision)
    }

    pub fn constant(value: Scalar, precision: usize) -> Self {
        Self::new(value.field(), vec![value], precision).expect("precision >= 1")
    }

    /// `c * t^exp`.
    pub fn monomial(value: Scalar, exp: usize, precision: usize) -> Self {
        let field = value.field();
        let mut coeffs = vec![Scalar::zero(field); exp];
        coeffs.push(value);
        Self::new(field, coeffs, precision).expect("precision >= 1")
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn precision(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn coeff(&self, exp: usize) -> Scalar {
        self.coeffs
            .get(exp)
            .cloned()
            .unwrap_or_else(|| Scalar::zero(self.field))
    }

    pub fn valuation(&self) -> Valuation {
        match self.coeffs.iter().position(|c| !c.is_zero()) {
            Some(v) => Valuation::Finite(v),
            None => Valuation::AtLeast(self.precision()),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_zero)
    }

    pub fn is_unit(&self) -> bool {
        !self.coeffs[0].is_zero()
    }

    pub fn truncate(&self, precision: usize) -> Self {
        let mut out = self.clone();
        out.coeffs.truncate(precision.max(1));
        out
    }

    /// Reinterprets the stored coefficients at a larger or smaller precision,
    /// padding with zeros. Only sound when the series is known exactly.
    pub fn with_precision(&self, precision: usize) -> Self {
        Self::new(self.field, self.coeffs.clone(), precision.max(1)).expect("same field")
    }

    fn check(&self, other: &Self) -> Result<usize> {
        if self.field != other.field {
            return Err(Error::FieldMismatch {
                left: self.field,
                right: other.field,
            });
        }
        Ok(self.precision().min(other.precision()))
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        let n = self.check(other)?;
        let coeffs = (0..n).map(|i| &self.coeffs[i] + &other.coeffs[i]).collect();
        Ok(TruncatedSeries {
            field: self.field,
            coeffs,
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&-other)
    }

    /// Convolution truncated at the smaller precision.
    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        let n = self.check(other)?;
        let mut coeffs = vec![Scalar::zero(self.field); n];
        for (i, a) in self.coeffs.iter().take(n).enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().take(n - i).enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] = &coeffs[i + j] + &(a * b);
                }
            }
        }
        Ok(TruncatedSeries {
            field: self.field,
            coeffs,
        })
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        TruncatedSeries {
            field: self.field,
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Multiplicative inverse of a unit (nonzero constant term).
    pub fn inverse(&self) -> Result<Self> {
        let c0 = self.coeffs[0].inv().map_err(|_| Error::NotInvertible)?;
        let n = self.precision();
        let mut inv = vec![Scalar::zero(self.field); n];
        inv[0] = c0.clone();
        for k in 1..n {
            let mut acc = Scalar::zero(self.field);
            for i in 1..=k {
                acc = &acc + &(&self.coeffs[i] * &inv[k - i]);
            }
            inv[k] = -(&acc * &c0);
        }
        Ok(TruncatedSeries {
            field: self.field,
            coeffs: inv,
        })
    }

    pub fn pow(&self, exp: usize) -> Self {
        let mut acc = Self::one(self.field, self.precision());
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            terms.push(match i {
                0 => c.to_string(),
                1 if c.is_one() => "t".to_string(),
                1 => format!("{c}*t"),
                _ if c.is_one() => format!("t^{i}"),
                _ => format!("{c}*t^{i}"),
            });
        }
        if terms.is_empty() {
            terms.push("0".into());
        }
        write!(f, "{} + O(t^{})", terms.join(" + "), self.precision())
    }
}

macro_rules! series_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&TruncatedSeries> for &TruncatedSeries {
            type Output = TruncatedSeries;
            fn $method(self, rhs: &TruncatedSeries) -> TruncatedSeries {
                self.$checked(rhs).expect("mixed-field series arithmetic")
            }
        }
    };
}

series_binop!(Add, add, checked_add);
series_binop!(Sub, sub, checked_sub);
series_binop!(Mul, mul, checked_mul);

impl Neg for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn neg(self) -> TruncatedSeries {
        TruncatedSeries {
            field: self.field,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct SeriesRepr {
    coefficients: Vec<String>,
    field: Field,
    precision: Option<usize>,
}

impl Serialize for TruncatedSeries {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SeriesRepr {
            coefficients: self.coeffs.iter().map(Scalar::to_string).collect(),
            field: self.field,
            precision: Some(self.precision()),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for TruncatedSeries {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = SeriesRepr::deserialize(d)?;
        let coeffs = repr
            .coefficients
            .iter()
            .map(|c| Scalar::parse(repr.field, c))
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        let precision = repr.precision.unwrap_or(coeffs.len());
        if coeffs.len() > precision {
            return Err(D::Error::custom("more coefficients than precision"));
        }
        TruncatedSeries::new(repr.field, coeffs, precision).map_err(D::Error::custom)
    }
}

/// Dense row-major matrix of truncated series sharing one field and precision.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<TruncatedSeries>,
}

impl SeriesMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<TruncatedSeries>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        if let Some(first) = entries.first() {
            for e in &entries {
                if e.field() != first.field() {
                    return Err(Error::FieldMismatch {
                        left: first.field(),
                        right: e.field(),
                    });
                }
                if e.precision() != first.precision() {
                    return Err(Error::Shape("entries have different precisions".into()));
                }
            }
        }
        Ok(SeriesMatrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn from_rows(rows: Vec<Vec<TruncatedSeries>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Shape("ragged rows".into()));
        }
        Self::new(r, c, rows.into_iter().flatten().collect())
    }

    pub fn identity(n: usize, field: Field, precision: usize) -> Self {
        let entries = (0..n * n)
            .map(|k| {
                if k / n == k % n {
                    TruncatedSeries::one(field, precision)
                } else {
                    TruncatedSeries::zero(field, precision)
                }
            })
            .collect();
        SeriesMatrix {
            rows: n,
            cols: n,
            entries,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &TruncatedSeries {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: TruncatedSeries) {
        self.entries[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[TruncatedSeries] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<TruncatedSeries>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut entries = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                entries.push(self.get(i, j).clone());
            }
        }
        SeriesMatrix {
            rows: self.cols,
            cols: self.rows,
            entries,
        }
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut entries = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = self.get(i, 0).checked_mul(other.get(0, j))?;
                for k in 1..self.cols {
                    acc = &acc + &self.get(i, k).checked_mul(other.get(k, j))?;
                }
                entries.push(acc);
            }
        }
        Ok(SeriesMatrix {
            rows: self.rows,
            cols: other.cols,
            entries,
        })
    }

    /// Applies the matrix to a column vector.
    pub fn apply(&self, v: &[TruncatedSeries]) -> Result<Vec<TruncatedSeries>> {
        if v.len() != self.cols {
            return Err(Error::Shape("vector length".into()));
        }
        (0..self.rows)
            .map(|i| {
                let mut acc = self.get(i, 0).checked_mul(&v[0])?;
                for (k, x) in v.iter().enumerate().skip(1) {
                    acc = &acc + &self.get(i, k).checked_mul(x)?;
                }
                Ok(acc)
            })
            .collect()
    }

    pub fn det(&self) -> Result<TruncatedSeries> {
        series_det(self)
    }

    /// Inverse over k[t]/t^N; exists iff the determinant is a unit.
    ///
    /// Gauss-Jordan elimination: in a local ring an invertible matrix always
    /// has a unit among the remaining entries of each pivot column.
    pub fn inverse(&self) -> Result<Self> {
        if self.rows != self.cols {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(self.clone());
        }
        let (field, prec) = (self.entries[0].field(), self.entries[0].precision());
        let mut a = self.to_rows();
        let mut inv = SeriesMatrix::identity(n, field, prec).to_rows();
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| a[r][col].is_unit())
                .ok_or(Error::NotInvertible)?;
            a.swap(col, pivot);
            inv.swap(col, pivot);
            let p_inv = a[col][col].inverse()?;
            for j in 0..n {
                a[col][j] = &a[col][j] * &p_inv;
                inv[col][j] = &inv[col][j] * &p_inv;
            }
            for r in 0..n {
                if r == col || a[r][col].is_zero() {
                    continue;
                }
                let factor = a[r][col].clone();
                for j in 0..n {
                    a[r][j] = &a[r][j] - &(&factor * &a[col][j]);
                    inv[r][j] = &inv[r][j] - &(&factor * &inv[col][j]);
                }
            }
        }
        SeriesMatrix::from_rows(inv)
    }
}

/// Determinant by Laplace expansion over column subsets (division free, so
/// exact over k[t]/t^N). Cost is O(n 2^n) series products.
pub fn series_det(m: &SeriesMatrix) -> Result<TruncatedSeries> {
    if m.rows != m.cols {
        return Err(Error::NotSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    let n = m.rows;
    if n == 0 {
        return Err(Error::Shape("empty matrix has no base ring".into()));
    }
    let (field, prec) = (m.entries[0].field(), m.entries[0].precision());
    let mut dp: Vec<Option<TruncatedSeries>> = vec![None; 1 << n];
    dp[0] = Some(TruncatedSeries::one(field, prec));
    for mask in 0..(1usize << n) {
        let Some(partial) = dp[mask].take() else {
            continue;
        };
        let row = mask.count_ones() as usize;
        if row == n {
            dp[mask] = Some(partial);
            continue;
        }
        for col in 0..n {
            if mask & (1 << col) != 0 || m.get(row, col).is_zero() {
                continue;
            }
            // inversions added: already-used columns to the right of `col`
            let larger = (mask >> (col + 1)).count_ones();
            let mut term = &partial * m.get(row, col);
            if larger % 2 == 1 {
                term = -&term;
            }
            let next = mask | (1 << col);
            dp[next] = Some(match dp[next].take() {
                Some(acc) => &acc + &term,
                None => term,
            });
        }
    }
    Ok(dp[(1 << n) - 1]
        .take()
        .unwrap_or_else(|| TruncatedSeries::zero(field, prec)))
}
