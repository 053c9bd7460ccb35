//! Finite flat algebras of rank d over k[t]/t^N, presented by structure
//! constants in a marked basis.
//!
//! A table consists of unit coordinates `d_i` and multiplication constants
//! `c[i][j][k]` with `e_i * e_j = sum_k c[i][j][k] e_k`. The discriminant of
//! such an algebra is the determinant of its trace pairing, and its t-adic
//! valuation is the multiplicity of the branch divisor at the origin.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::series::{series_det, SeriesMatrix, TruncatedSeries, Valuation};

/// Ring over which a table is defined. A plain field is modelled as
/// k[t]/t, so valuations over it only distinguish zero from nonzero.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BaseRing {
    Scalar(Field),
    Series { field: Field, precision: usize },
}

impl BaseRing {
    pub fn field(self) -> Field {
        match self {
            BaseRing::Scalar(f) | BaseRing::Series { field: f, .. } => f,
        }
    }

    pub fn precision(self) -> usize {
        match self {
            BaseRing::Scalar(_) => 1,
            BaseRing::Series { precision, .. } => precision,
        }
    }

    pub fn zero(self) -> TruncatedSeries {
        TruncatedSeries::zero(self.field(), self.precision())
    }

    pub fn one(self) -> TruncatedSeries {
        TruncatedSeries::one(self.field(), self.precision())
    }
}

/// A rank-d algebra with marked basis: a point of the space of structure
/// constants once [`StructureConstants::validate`] passes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureConstants {
    degree: usize,
    base: BaseRing,
    unit: Vec<TruncatedSeries>,
    mult: Vec<TruncatedSeries>,
}

/// One failed defining identity of a multiplication table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    Commutativity { i: usize, j: usize },
    Associativity { i: usize, j: usize, l: usize },
    Unit { j: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Commutativity { i, j } => write!(f, "e{i}*e{j} != e{j}*e{i}"),
            Violation::Associativity { i, j, l } => {
                write!(f, "(e{i}*e{j})*e{l} != e{i}*(e{j}*e{l})")
            }
            Violation::Unit { j } => write!(f, "1*e{j} != e{j}"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl StructureConstants {
    /// `mult[i][j][k]` is the coefficient of `e_k` in `e_i * e_j`. Entries are
    /// brought to the base precision; shapes and fields are checked, the
    /// algebra identities are not (see [`StructureConstants::validate`]).
    pub fn new(
        base: BaseRing,
        unit: Vec<TruncatedSeries>,
        mult: Vec<Vec<Vec<TruncatedSeries>>>,
    ) -> Result<Self> {
        let d = unit.len();
        if d == 0 {
            return Err(Error::Shape("degree must be positive".into()));
        }
        if mult.len() != d || mult.iter().any(|r| r.len() != d || r.iter().any(|c| c.len() != d)) {
            return Err(Error::Shape(format!("multiplication table must be {d}x{d}x{d}")));
        }
        let prec = base.precision();
        let fix = |s: TruncatedSeries| -> Result<TruncatedSeries> {
            if s.field() != base.field() {
                return Err(Error::FieldMismatch {
                    left: base.field(),
                    right: s.field(),
                });
            }
            if s.precision() < prec {
                return Err(Error::PrecisionTooSmall {
                    min: prec,
                    got: s.precision(),
                });
            }
            Ok(s.truncate(prec))
        };
        let unit = unit.into_iter().map(fix).collect::<Result<Vec<_>>>()?;
        let mult = mult
            .into_iter()
            .flatten()
            .flatten()
            .map(fix)
            .collect::<Result<Vec<_>>>()?;
        Ok(StructureConstants {
            degree: d,
            base,
            unit,
            mult,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn base(&self) -> BaseRing {
        self.base
    }

    pub fn field(&self) -> Field {
        self.base.field()
    }

    pub fn precision(&self) -> usize {
        self.base.precision()
    }

    pub fn unit(&self) -> &[TruncatedSeries] {
        &self.unit
    }

    pub fn c(&self, i: usize, j: usize, k: usize) -> &TruncatedSeries {
        &self.mult[(i * self.degree + j) * self.degree + k]
    }

    pub fn to_nested(&self) -> Vec<Vec<Vec<TruncatedSeries>>> {
        let d = self.degree;
        (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| (0..d).map(|k| self.c(i, j, k).clone()).collect())
                    .collect()
            })
            .collect()
    }

    /// Product of two elements given by coordinates.
    pub fn multiply(&self, a: &[TruncatedSeries], b: &[TruncatedSeries]) -> Vec<TruncatedSeries> {
        let d = self.degree;
        let mut out = vec![self.base.zero(); d];
        for i in 0..d {
            if a[i].is_zero() {
                continue;
            }
            for j in 0..d {
                if b[j].is_zero() {
                    continue;
                }
                let ab = &a[i] * &b[j];
                for (k, o) in out.iter_mut().enumerate() {
                    let c = self.c(i, j, k);
                    if !c.is_zero() {
                        *o = &*o + &(&ab * c);
                    }
                }
            }
        }
        out
    }

    pub fn basis_vector(&self, i: usize) -> Vec<TruncatedSeries> {
        (0..self.degree)
            .map(|k| if k == i { self.base.one() } else { self.base.zero() })
            .collect()
    }

    /// Trace of multiplication by `e_m`: the sum of the diagonal constants.
    pub fn basis_trace(&self, m: usize) -> TruncatedSeries {
        let mut acc = self.base.zero();
        for k in 0..self.degree {
            acc = &acc + self.c(m, k, k);
        }
        acc
    }

    pub fn trace(&self, a: &[TruncatedSeries]) -> TruncatedSeries {
        let mut acc = self.base.zero();
        for (m, x) in a.iter().enumerate() {
            if !x.is_zero() {
                acc = &acc + &(x * &self.basis_trace(m));
            }
        }
        acc
    }

    /// Checks commutativity, associativity on every basis triple and the
    /// two-sided unit law, reporting each failure.
    pub fn validate(&self) -> ValidationReport {
        let d = self.degree;
        let mut violations = Vec::new();
        for i in 0..d {
            for j in i + 1..d {
                if (0..d).any(|k| self.c(i, j, k) != self.c(j, i, k)) {
                    violations.push(Violation::Commutativity { i, j });
                }
            }
        }
        for i in 0..d {
            for j in 0..d {
                for l in 0..d {
                    let left = self.multiply(
                        &(0..d).map(|m| self.c(i, j, m).clone()).collect::<Vec<_>>(),
                        &self.basis_vector(l),
                    );
                    let right = self.multiply(
                        &self.basis_vector(i),
                        &(0..d).map(|m| self.c(j, l, m).clone()).collect::<Vec<_>>(),
                    );
                    if left != right {
                        violations.push(Violation::Associativity { i, j, l });
                    }
                }
            }
        }
        for j in 0..d {
            let e = self.basis_vector(j);
            if self.multiply(&self.unit, &e) != e || self.multiply(&e, &self.unit) != e {
                violations.push(Violation::Unit { j });
            }
        }
        ValidationReport { violations }
    }

    /// Rewrites the table in the basis `f_a = sum_i m[i][a] e_i` (columns of
    /// `m` are the new basis vectors in old coordinates).
    pub fn change_basis(&self, m: &SeriesMatrix) -> Result<Self> {
        let d = self.degree;
        if m.rows() != d || m.cols() != d {
            return Err(Error::Shape(format!("basis change must be {d}x{d}")));
        }
        let m = conform(m, self.base)?;
        let inv = m.inverse()?;
        let columns: Vec<Vec<TruncatedSeries>> = (0..d)
            .map(|a| (0..d).map(|i| m.get(i, a).clone()).collect())
            .collect();
        let mut mult = vec![vec![Vec::new(); d]; d];
        for a in 0..d {
            for b in 0..d {
                let prod = self.multiply(&columns[a], &columns[b]);
                mult[a][b] = inv.apply(&prod)?;
            }
        }
        let unit = inv.apply(&self.unit)?;
        StructureConstants::new(self.base, unit, mult)
    }
}

/// Brings a matrix to the base ring's precision, checking the field.
fn conform(m: &SeriesMatrix, base: BaseRing) -> Result<SeriesMatrix> {
    let mut rows = m.to_rows();
    for row in &mut rows {
        for e in row.iter_mut() {
            if e.field() != base.field() {
                return Err(Error::FieldMismatch {
                    left: base.field(),
                    right: e.field(),
                });
            }
            if e.precision() < base.precision() {
                return Err(Error::PrecisionTooSmall {
                    min: base.precision(),
                    got: e.precision(),
                });
            }
            *e = e.truncate(base.precision());
        }
    }
    SeriesMatrix::from_rows(rows)
}

/// Branch series `u_1..u_d`, pairwise distinct at working precision; they
/// define `R[x]/prod(x - u_i) -> R^d`, `x -> (u_1, .., u_d)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitEmbedding {
    branches: Vec<TruncatedSeries>,
}

impl SplitEmbedding {
    pub fn new(branches: Vec<TruncatedSeries>) -> Result<Self> {
        let first = branches
            .first()
            .ok_or_else(|| Error::Shape("at least one branch required".into()))?;
        let (field, prec) = (first.field(), first.precision());
        let branches: Vec<_> = branches
            .into_iter()
            .map(|u| {
                if u.field() != field {
                    Err(Error::FieldMismatch {
                        left: field,
                        right: u.field(),
                    })
                } else {
                    Ok(u.truncate(prec))
                }
            })
            .collect::<Result<_>>()?;
        if branches.iter().any(|u| u.precision() != prec) {
            return Err(Error::Shape("branches have different precisions".into()));
        }
        for i in 0..branches.len() {
            for j in i + 1..branches.len() {
                let v = (&branches[i] - &branches[j]).valuation();
                if v.finite().is_none() {
                    return Err(Error::IndistinctBranches { i, j, valuation: v });
                }
            }
        }
        Ok(SplitEmbedding { branches })
    }

    pub fn branches(&self) -> &[TruncatedSeries] {
        &self.branches
    }

    pub fn degree(&self) -> usize {
        self.branches.len()
    }

    /// `sum_{i<j} val(u_i - u_j)`; twice this is the branch valuation.
    pub fn pairwise_valuation(&self) -> usize {
        let u = &self.branches;
        let mut total = 0;
        for i in 0..u.len() {
            for j in i + 1..u.len() {
                total += (&u[i] - &u[j]).valuation().finite().expect("distinct");
            }
        }
        total
    }

    /// Expands `prod (x - u_i)` into ascending coefficients (monic).
    pub fn polynomial(&self) -> Vec<TruncatedSeries> {
        let first = &self.branches[0];
        let (field, prec) = (first.field(), first.precision());
        let mut poly = vec![TruncatedSeries::one(field, prec)];
        for u in &self.branches {
            let mut next = vec![TruncatedSeries::zero(field, prec); poly.len() + 1];
            for (k, a) in poly.iter().enumerate() {
                next[k + 1] = &next[k + 1] + a;
                next[k] = &next[k] - &(a * u);
            }
            poly = next;
        }
        poly
    }
}

/// A finite flat cover of the disk Spec k[t]/t^N, with optional provenance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiskCover {
    table: StructureConstants,
    polynomial: Option<Vec<TruncatedSeries>>,
    branches: Option<SplitEmbedding>,
    /// Images of the basis in R^d (idempotent coordinates), when the cover
    /// sits inside a split algebra.
    split_images: Option<Vec<Vec<TruncatedSeries>>>,
}

impl DiskCover {
    pub fn from_table(table: StructureConstants) -> Self {
        DiskCover {
            table,
            polynomial: None,
            branches: None,
            split_images: None,
        }
    }

    /// The split algebra R^d in its idempotent basis.
    pub fn split(degree: usize, field: Field, precision: usize) -> Result<Self> {
        if precision == 0 {
            return Err(Error::PrecisionTooSmall { min: 1, got: 0 });
        }
        let base = BaseRing::Series { field, precision };
        let unit = vec![base.one(); degree];
        let mult = (0..degree)
            .map(|i| {
                (0..degree)
                    .map(|j| {
                        (0..degree)
                            .map(|k| if i == j && j == k { base.one() } else { base.zero() })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let table = StructureConstants::new(base, unit, mult)?;
        let identity = (0..degree).map(|i| table.basis_vector(i)).collect();
        Ok(DiskCover {
            table,
            polynomial: None,
            branches: None,
            split_images: Some(identity),
        })
    }

    /// `R[x]/f` in the basis `1, x, .., x^(d-1)`; `f` is given by ascending
    /// coefficients and must be monic.
    pub fn from_polynomial(f: &[TruncatedSeries]) -> Result<Self> {
        let Some(lead) = f.last() else {
            return Err(Error::NotMonic);
        };
        let d = f.len() - 1;
        if d == 0 || *lead != TruncatedSeries::one(lead.field(), lead.precision()) {
            return Err(Error::NotMonic);
        }
        let field = lead.field();
        let precision = f.iter().map(TruncatedSeries::precision).min().expect("nonempty");
        if let Some(bad) = f.iter().find(|c| c.field() != field) {
            return Err(Error::FieldMismatch {
                left: field,
                right: bad.field(),
            });
        }
        let base = BaseRing::Series { field, precision };
        let f: Vec<_> = f.iter().map(|c| c.truncate(precision)).collect();
        // coordinates of x^n for n < 2d - 1
        let mut powers: Vec<Vec<TruncatedSeries>> = Vec::with_capacity(2 * d);
        for n in 0..d {
            powers.push((0..d).map(|k| if k == n { base.one() } else { base.zero() }).collect());
        }
        let x_d: Vec<_> = (0..d).map(|k| -&f[k]).collect();
        while powers.len() < 2 * d - 1 {
            let prev = powers.last().expect("nonempty");
            let top = prev[d - 1].clone();
            let mut next = vec![base.zero()];
            next.extend(prev[..d - 1].iter().cloned());
            for (k, c) in x_d.iter().enumerate() {
                next[k] = &next[k] + &(&top * c);
            }
            powers.push(next);
        }
        let mult = (0..d)
            .map(|i| (0..d).map(|j| powers[i + j].clone()).collect())
            .collect();
        let table = StructureConstants::new(base, powers[0].clone(), mult)?;
        Ok(DiskCover {
            table,
            polynomial: Some(f),
            branches: None,
            split_images: None,
        })
    }

    /// `R[x]/prod(x - u_i)`, remembering the embedding into R^d.
    pub fn from_branches(embedding: SplitEmbedding) -> Result<Self> {
        let mut cover = Self::from_polynomial(&embedding.polynomial())?;
        let d = embedding.degree();
        let u = embedding.branches();
        let images = (0..d).map(|k| u.iter().map(|ui| ui.pow(k)).collect()).collect();
        cover.split_images = Some(images);
        cover.branches = Some(embedding);
        Ok(cover)
    }

    pub fn table(&self) -> &StructureConstants {
        &self.table
    }

    pub fn degree(&self) -> usize {
        self.table.degree
    }

    pub fn field(&self) -> Field {
        self.table.field()
    }

    pub fn precision(&self) -> usize {
        self.table.precision()
    }

    pub fn polynomial(&self) -> Option<&[TruncatedSeries]> {
        self.polynomial.as_deref()
    }

    pub fn branches(&self) -> Option<&SplitEmbedding> {
        self.branches.as_ref()
    }

    /// `images[k]` is basis vector k written in the idempotent basis of R^d.
    pub fn split_images(&self) -> Option<&[Vec<TruncatedSeries>]> {
        self.split_images.as_deref()
    }

    pub fn validate(&self) -> ValidationReport {
        self.table.validate()
    }

    fn require_valid(&self) -> Result<()> {
        let report = self.validate();
        match report.violations.first() {
            None => Ok(()),
            Some(v) => Err(Error::InvalidTable(v.to_string())),
        }
    }

    /// Gram matrix of the trace pairing `(a, b) -> tr(a b)` on the basis.
    pub fn trace_form(&self) -> Result<SeriesMatrix> {
        self.require_valid()?;
        let t = &self.table;
        let d = t.degree;
        let traces: Vec<_> = (0..d).map(|m| t.basis_trace(m)).collect();
        let mut entries = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                let mut acc = t.base.zero();
                for (m, tr) in traces.iter().enumerate() {
                    acc = &acc + &(t.c(i, j, m) * tr);
                }
                entries.push(acc);
            }
        }
        SeriesMatrix::new(d, d, entries)
    }

    /// Trace-form discriminants are refused in characteristic p <= d unless
    /// the cover is embedded in a split algebra, where the trace is the sum
    /// of coordinates in every characteristic.
    fn check_characteristic(&self) -> Result<()> {
        let p = self.field().characteristic();
        if p != 0 && p as usize <= self.degree() && self.split_images.is_none() {
            return Err(Error::CharacteristicTooSmall {
                characteristic: p,
                degree: self.degree(),
            });
        }
        Ok(())
    }

    /// Determinant of the trace form, defined up to the square of a unit.
    pub fn discriminant(&self) -> Result<TruncatedSeries> {
        self.check_characteristic()?;
        series_det(&self.trace_form()?)
    }

    /// Multiplicity of the branch divisor at the origin.
    pub fn branch_valuation(&self) -> Result<usize> {
        self.discriminant()?.valuation().require()
    }

    pub fn discriminant_valuation(&self) -> Result<Valuation> {
        Ok(self.discriminant()?.valuation())
    }

    pub fn is_etale(&self) -> Result<bool> {
        Ok(self.branch_valuation()? == 0)
    }

    /// The same algebra in the basis given by the columns of `m`.
    pub fn change_basis(&self, m: &SeriesMatrix) -> Result<Self> {
        let det = m.det()?;
        if !det.is_unit() {
            return Err(Error::NotInvertible);
        }
        let table = self.table.change_basis(m)?;
        let split_images = self.split_images.as_ref().map(|images| {
            let d = self.degree();
            (0..d)
                .map(|a| {
                    (0..d)
                        .map(|coord| {
                            let mut acc = self.table.base.zero();
                            for (i, img) in images.iter().enumerate() {
                                acc = &acc + &(&m.get(i, a).truncate(self.precision()) * &img[coord]);
                            }
                            acc
                        })
                        .collect()
                })
                .collect()
        });
        Ok(DiskCover {
            table,
            polynomial: None,
            branches: self.branches.clone(),
            split_images,
        })
    }

    /// Splits off the trace-zero complement of the unit line using `1/d`
    /// times the trace.
    pub fn tschirnhaus_split(&self) -> Result<TschirnhausSplit> {
        self.require_valid()?;
        let t = &self.table;
        let d = t.degree;
        if !self.field().is_invertible(d as u64) {
            return Err(Error::DegreeNotInvertible {
                degree: d,
                field: self.field(),
            });
        }
        let inv_d = Scalar::from_i64(self.field(), d as i64).inv()?;
        // the unit is unimodular, so some coordinate is a unit in the local ring
        let pivot = t
            .unit
            .iter()
            .position(TruncatedSeries::is_unit)
            .ok_or_else(|| Error::InvalidTable("unit is not part of a basis".into()))?;
        let complement: Vec<Vec<TruncatedSeries>> = (0..d)
            .filter(|&i| i != pivot)
            .map(|i| {
                let shift = t.basis_trace(i).scale(&inv_d);
                let mut v = t.basis_vector(i);
                for (x, u) in v.iter_mut().zip(&t.unit) {
                    *x = &*x - &(&shift * u);
                }
                v
            })
            .collect();
        for f in &complement {
            if !t.trace(f).is_zero() {
                return Err(Error::InvalidTable("trace splitting failed".into()));
            }
        }
        // columns: 1, f_1, .., f_{d-1}
        let mut columns = vec![t.unit.clone()];
        columns.extend(complement.iter().cloned());
        let frame = SeriesMatrix::from_rows(
            (0..d).map(|r| columns.iter().map(|c| c[r].clone()).collect()).collect(),
        )?;
        let expressions = frame.inverse().map_err(|_| {
            Error::InvalidTable("unit and trace-zero part do not generate".into())
        })?;
        Ok(TschirnhausSplit {
            complement,
            generation: expressions,
        })
    }
}

/// Result of [`DiskCover::tschirnhaus_split`].
#[derive(Clone, Debug)]
pub struct TschirnhausSplit {
    /// Basis of the trace-zero complement, in the cover's coordinates.
    pub complement: Vec<Vec<TruncatedSeries>>,
    /// Column `i` writes basis vector `e_i` as a combination of
    /// `1, f_1, .., f_{d-1}`; its existence certifies that the unit and the
    /// complement generate the whole algebra (already in degree one).
    pub generation: SeriesMatrix,
}

impl TschirnhausSplit {
    /// Re-expands the certificate and compares with the standard basis.
    pub fn verify(&self, cover: &DiskCover) -> bool {
        let t = cover.table();
        let d = t.degree();
        let mut columns = vec![t.unit().to_vec()];
        columns.extend(self.complement.iter().cloned());
        (0..d).all(|i| {
            let coeffs: Vec<_> = (0..d).map(|r| self.generation.get(r, i).clone()).collect();
            let mut acc = vec![t.base().zero(); d];
            for (c, col) in coeffs.iter().zip(&columns) {
                for (a, x) in acc.iter_mut().zip(col) {
                    *a = &*a + &(c * x);
                }
            }
            acc == t.basis_vector(i)
        })
    }
}
