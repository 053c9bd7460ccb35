//! Crimps of a fixed normalization over a disk.
//!
//! Fix a cover `O~` of `Spec k[[t]]` of degree d whose discriminant has
//! valuation `a`, and a target valuation `b`. A crimp is a subalgebra
//! `O ⊂ O~` containing `t^b O~`, free of rank d, whose discriminant has
//! valuation exactly `b`; then `O~/O` has length `δ = (b - a)/2`. Crimps are
//! represented by their image `S = O / t^b O~` inside the finite-dimensional
//! algebra `F = O~ / t^b O~`, written in reduced row echelon form in the
//! monomial basis `t^m e_i` (coordinate `i * b + m`).

mod engine;
mod enumerate;
mod tangent;

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cover::DiskCover;
use crate::error::{Error, Result};
use crate::field::{Field, FieldOps, PrimeField, RationalField, Scalar};
use crate::linalg::Subspace;
use crate::series::{SeriesMatrix, TruncatedSeries, Valuation};

use engine::Ambient;

pub use enumerate::{enumerate_crimps, CrimpEnumeration, EnumerationOptions, FilterOrder};
pub use tangent::{tangent_cross_ratio, CrossRatioOrbit};

/// Runs `$body` with `$ops` bound to the [`FieldOps`] implementation for `$field`.
macro_rules! with_field_ops {
    ($field:expr, |$ops:ident| $body:expr) => {
        match $field {
            $crate::field::Field::Rational => {
                let $ops = $crate::field::RationalField;
                $body
            }
            $crate::field::Field::Prime(p) => {
                let $ops = $crate::field::PrimeField::new(p);
                $body
            }
        }
    };
}
pub(crate) use with_field_ops;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NormalizationKind {
    /// `R^d` in its idempotent basis; automorphisms are the permutations.
    Split,
    /// `R[s]/(s^e - t)`; automorphisms are `s -> ζ s` for `ζ^e = 1` in k.
    Ramified { index: usize },
    /// User-supplied table and automorphism group.
    General,
}

/// A cover asserted to be normal, with its branch valuation and the
/// automorphism group over the base acting on it.
#[derive(Clone, Debug)]
pub struct NormalizationData {
    cover: DiskCover,
    branch_valuation: usize,
    /// Column j is the image of basis vector j.
    automorphisms: Vec<SeriesMatrix>,
    kind: NormalizationKind,
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

/// All `ζ` in the field with `ζ^e = 1`, in increasing order.
fn roots_of_unity(field: Field, e: usize) -> Vec<Scalar> {
    match field {
        Field::Rational => {
            let mut out = vec![Scalar::one(field)];
            if e.is_multiple_of(2) {
                out.insert(0, Scalar::from_i64(field, -1));
            }
            out.sort();
            out
        }
        Field::Prime(p) => {
            let g = num_integer::gcd(e as u64, p - 1);
            let mut found = std::collections::BTreeSet::new();
            let mut x = 1u64;
            while (found.len() as u64) < g && x < p {
                // x^((p-1)/g) is a g-th root of unity, and every g-th root is
                // hit as x ranges over the group
                found.insert(Scalar::from_i64(field, x as i64).pow((p - 1) / g));
                x += 1;
            }
            found.into_iter().collect()
        }
    }
}

impl NormalizationData {
    pub fn split(degree: usize, field: Field, precision: usize) -> Result<Self> {
        let cover = DiskCover::split(degree, field, precision)?;
        let automorphisms = permutations(degree)
            .into_iter()
            .map(|perm| {
                let mut m = SeriesMatrix::identity(degree, field, precision);
                for j in 0..degree {
                    for i in 0..degree {
                        let v = if perm[j] == i {
                            TruncatedSeries::one(field, precision)
                        } else {
                            TruncatedSeries::zero(field, precision)
                        };
                        m.set(i, j, v);
                    }
                }
                m
            })
            .collect();
        Ok(NormalizationData {
            cover,
            branch_valuation: 0,
            automorphisms,
            kind: NormalizationKind::Split,
        })
    }

    /// The totally ramified disk `s^e = t`, in the basis `1, s, .., s^(e-1)`.
    pub fn ramified_disk(index: usize, field: Field, precision: usize) -> Result<Self> {
        if index == 0 {
            return Err(Error::Shape("ramification index must be positive".into()));
        }
        let mut poly = vec![TruncatedSeries::zero(field, precision); index + 1];
        poly[0] = TruncatedSeries::from_i64s(field, &[0, -1], precision);
        poly[index] = TruncatedSeries::one(field, precision);
        let cover = DiskCover::from_polynomial(&poly)?;
        let branch_valuation = cover.branch_valuation()?;
        let automorphisms = roots_of_unity(field, index)
            .into_iter()
            .map(|zeta| {
                let mut m = SeriesMatrix::identity(index, field, precision);
                for k in 0..index {
                    m.set(k, k, TruncatedSeries::constant(zeta.pow(k as u64), precision));
                }
                m
            })
            .collect();
        Ok(NormalizationData {
            cover,
            branch_valuation,
            automorphisms,
            kind: NormalizationKind::Ramified { index },
        })
    }

    /// A normal cover supplied by its table; every automorphism is checked to
    /// be an invertible, unit-preserving, multiplicative basis change. The
    /// identity is added when missing.
    pub fn from_cover(cover: DiskCover, automorphisms: Vec<SeriesMatrix>) -> Result<Self> {
        let report = cover.validate();
        if let Some(v) = report.violations.first() {
            return Err(Error::InvalidTable(v.to_string()));
        }
        let branch_valuation = cover.branch_valuation()?;
        let identity = SeriesMatrix::identity(cover.degree(), cover.field(), cover.precision());
        let mut all = vec![identity];
        for (index, m) in automorphisms.into_iter().enumerate() {
            if !is_table_automorphism(&cover, &m)? {
                return Err(Error::InvalidAutomorphism { index });
            }
            let m = SeriesMatrix::from_rows(
                m.to_rows()
                    .into_iter()
                    .map(|r| r.into_iter().map(|e| e.truncate(cover.precision())).collect())
                    .collect(),
            )?;
            if !all.contains(&m) {
                all.push(m);
            }
        }
        Ok(NormalizationData {
            cover,
            branch_valuation,
            automorphisms: all,
            kind: NormalizationKind::General,
        })
    }

    pub fn cover(&self) -> &DiskCover {
        &self.cover
    }

    pub fn degree(&self) -> usize {
        self.cover.degree()
    }

    pub fn field(&self) -> Field {
        self.cover.field()
    }

    pub fn precision(&self) -> usize {
        self.cover.precision()
    }

    pub fn branch_valuation(&self) -> usize {
        self.branch_valuation
    }

    pub fn automorphisms(&self) -> &[SeriesMatrix] {
        &self.automorphisms
    }

    pub fn kind(&self) -> NormalizationKind {
        self.kind
    }
}

fn is_table_automorphism(cover: &DiskCover, m: &SeriesMatrix) -> Result<bool> {
    let t = cover.table();
    let d = t.degree();
    if m.rows() != d || m.cols() != d {
        return Ok(false);
    }
    let prec = cover.precision();
    let m = SeriesMatrix::from_rows(
        m.to_rows()
            .into_iter()
            .map(|r| r.into_iter().map(|e| e.truncate(prec)).collect())
            .collect(),
    )?;
    if !m.det()?.is_unit() || m.apply(t.unit())? != t.unit() {
        return Ok(false);
    }
    let image = |v: &[TruncatedSeries]| m.apply(v);
    for i in 0..d {
        for j in 0..d {
            let lhs = image(&t.multiply(&t.basis_vector(i), &t.basis_vector(j)))?;
            let rhs = t.multiply(&image(&t.basis_vector(i))?, &image(&t.basis_vector(j))?);
            if lhs != rhs {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `δ = (b - a)/2`; odd or negative differences leave no crimps.
pub fn crimp_delta(a: usize, b: usize) -> Result<usize> {
    if b < a || (b - a) % 2 == 1 {
        return Err(Error::Parity { a, b });
    }
    Ok((b - a) / 2)
}

/// A normalization together with a target branch valuation.
#[derive(Clone, Debug)]
pub struct CrimpProblem {
    normalization: NormalizationData,
    b: usize,
    delta: usize,
}

impl CrimpProblem {
    /// The normalization's precision is the working precision and must
    /// exceed `b`.
    pub fn new(normalization: NormalizationData, b: usize) -> Result<Self> {
        let delta = crimp_delta(normalization.branch_valuation, b)?;
        if normalization.precision() <= b {
            return Err(Error::PrecisionTooSmall {
                min: b + 1,
                got: normalization.precision(),
            });
        }
        Ok(CrimpProblem {
            normalization,
            b,
            delta,
        })
    }

    pub fn normalization(&self) -> &NormalizationData {
        &self.normalization
    }

    pub fn b(&self) -> usize {
        self.b
    }

    pub fn delta(&self) -> usize {
        self.delta
    }

    pub fn field(&self) -> Field {
        self.normalization.field()
    }

    pub fn degree(&self) -> usize {
        self.normalization.degree()
    }

    /// Dimension of F over the scalar field.
    pub fn ambient_dim(&self) -> usize {
        self.degree() * self.b
    }

    pub(crate) fn ambient<F: FieldOps>(&self, ops: F) -> Result<Ambient<F>> {
        Ambient::new(ops, &self.normalization, self.b)
    }
}

/// A subspace of F = O~/t^b O~ in reduced row echelon form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CrimpSubalgebra {
    field: Field,
    degree: usize,
    b: usize,
    basis: Vec<Vec<Scalar>>,
}

impl CrimpSubalgebra {
    /// Echelonizes the span of `vectors` (each of length `degree * b`).
    pub fn from_vectors(field: Field, degree: usize, b: usize, vectors: &[Vec<Scalar>]) -> Result<Self> {
        let n = degree * b;
        if let Some(v) = vectors.iter().find(|v| v.len() != n) {
            return Err(Error::Shape(format!("vector of length {} in F of dimension {n}", v.len())));
        }
        with_field_ops!(field, |ops| {
            let lifted = vectors
                .iter()
                .map(|v| v.iter().map(|x| ops.lift(x)).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()?;
            let s = Subspace::spanned_by(&ops, n, lifted);
            Ok(Self::from_subspace(&ops, degree, b, &s))
        })
    }

    pub(crate) fn from_subspace<F: FieldOps>(ops: &F, degree: usize, b: usize, s: &Subspace<F::Elem>) -> Self {
        CrimpSubalgebra {
            field: ops.field(),
            degree,
            b,
            basis: s
                .rows()
                .iter()
                .map(|r| r.iter().map(|x| ops.to_scalar(x)).collect())
                .collect(),
        }
    }

    pub(crate) fn subspace<F: FieldOps>(&self, ops: &F) -> Result<Subspace<F::Elem>> {
        let rows = self
            .basis
            .iter()
            .map(|r| r.iter().map(|x| ops.lift(x)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(Subspace::spanned_by(ops, self.ambient_dim(), rows))
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn b(&self) -> usize {
        self.b
    }

    pub fn ambient_dim(&self) -> usize {
        self.degree * self.b
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn codim(&self) -> usize {
        self.ambient_dim() - self.dim()
    }

    pub fn basis(&self) -> &[Vec<Scalar>] {
        &self.basis
    }

    fn matches(&self, problem: &CrimpProblem) -> bool {
        self.field == problem.field() && self.degree == problem.degree() && self.b == problem.b()
    }
}

impl Serialize for CrimpSubalgebra {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            field: Field,
            degree: usize,
            b: usize,
            basis: Vec<Vec<String>>,
            #[serde(skip)]
            _p: std::marker::PhantomData<&'a ()>,
        }
        Repr {
            field: self.field,
            degree: self.degree,
            b: self.b,
            basis: self
                .basis
                .iter()
                .map(|r| r.iter().map(Scalar::to_string).collect())
                .collect(),
            _p: std::marker::PhantomData,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CrimpSubalgebra {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        #[derive(Deserialize)]
        struct Repr {
            field: Field,
            degree: usize,
            b: usize,
            basis: Vec<Vec<String>>,
        }
        let r = Repr::deserialize(d)?;
        let vectors = r
            .basis
            .iter()
            .map(|row| row.iter().map(|x| Scalar::parse(r.field, x)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        CrimpSubalgebra::from_vectors(r.field, r.degree, r.b, &vectors).map_err(D::Error::custom)
    }
}

/// The first crimp condition a subspace violates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CrimpFailure {
    /// `t^power * 1` is missing.
    MissingBaseRing { power: usize },
    /// The product of echelon basis rows `left` and `right` leaves the subspace.
    NotClosed { left: usize, right: usize },
    Codimension { expected: usize, found: usize },
    BranchValuation { expected: usize, found: Valuation },
}

impl fmt::Display for CrimpFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CrimpFailure::MissingBaseRing { power } => write!(f, "t^{power} is not in the subspace"),
            CrimpFailure::NotClosed { left, right } => {
                write!(f, "product of basis rows {left} and {right} is not in the subspace")
            }
            CrimpFailure::Codimension { expected, found } => {
                write!(f, "codimension {found}, expected {expected}")
            }
            CrimpFailure::BranchValuation { expected, found } => {
                write!(f, "lifted cover has branch valuation {found}, expected {expected}")
            }
        }
    }
}

/// Checks the crimp conditions for the span of `vectors` (any dimension).
pub fn is_crimp(problem: &CrimpProblem, vectors: &[Vec<Scalar>]) -> Result<Option<CrimpFailure>> {
    let s = CrimpSubalgebra::from_vectors(problem.field(), problem.degree(), problem.b(), vectors)?;
    check_crimp(problem, &s)
}

/// [`is_crimp`] for an already echelonized subspace.
pub fn check_crimp(problem: &CrimpProblem, crimp: &CrimpSubalgebra) -> Result<Option<CrimpFailure>> {
    if !crimp.matches(problem) {
        return Err(Error::InconsistentProblems);
    }
    with_field_ops!(problem.field(), |ops| {
        let ambient = problem.ambient(ops)?;
        let s = crimp.subspace(&ops)?;
        Ok(ambient.check(&s, problem.delta()))
    })
}

/// Branch valuation of the lattice `O` lifting `crimp`, or `None` if the
/// subspace is not a k[t]-submodule.
pub fn lifted_branch_valuation(problem: &CrimpProblem, crimp: &CrimpSubalgebra) -> Result<Option<Valuation>> {
    if !crimp.matches(problem) {
        return Err(Error::InconsistentProblems);
    }
    with_field_ops!(problem.field(), |ops| {
        let ambient = problem.ambient(ops)?;
        Ok(ambient.lift_valuation(&crimp.subspace(&ops)?))
    })
}

/// Reduction modulo `t^b O~` of a cover embedded in the normalization:
/// `images[k]` gives basis vector k of `cover` in the coordinates of `O~`.
pub fn crimp_of_embedded(
    problem: &CrimpProblem,
    cover: &DiskCover,
    images: &[Vec<TruncatedSeries>],
) -> Result<CrimpSubalgebra> {
    let d = problem.degree();
    if cover.degree() != d || images.len() != d || images.iter().any(|v| v.len() != d) {
        return Err(Error::Shape("embedding must be a d x d matrix".into()));
    }
    let found = cover.branch_valuation()?;
    if found != problem.b() {
        return Err(Error::BranchMismatch {
            expected: problem.b(),
            found,
        });
    }
    let b = problem.b();
    with_field_ops!(problem.field(), |ops| {
        let ambient = problem.ambient(ops)?;
        let mut s = Subspace::zero(ambient.dim());
        for img in images {
            let blocks = img
                .iter()
                .map(|x| engine::lift_poly(&ops, x, b))
                .collect::<Result<Vec<_>>>()?;
            let mut v = ambient.from_blocks(&blocks);
            for _ in 0..b {
                s.insert(&ops, v.clone());
                v = ambient.times_t(&v);
            }
        }
        Ok(CrimpSubalgebra::from_subspace(&ops, d, b, &s))
    })
}

/// The crimp of `R^d` cut out by a cover built with
/// [`DiskCover::from_branches`] (or any cover with a split embedding).
pub fn crimp_of(cover: &DiskCover, b: usize) -> Result<(CrimpProblem, CrimpSubalgebra)> {
    let images = cover.split_images().ok_or(Error::MissingEmbedding)?.to_vec();
    let normalization = NormalizationData::split(cover.degree(), cover.field(), cover.precision())?;
    let problem = CrimpProblem::new(normalization, b)?;
    let crimp = crimp_of_embedded(&problem, cover, &images)?;
    Ok((problem, crimp))
}

fn check_family(crimps: &[CrimpSubalgebra], normalization: &NormalizationData) -> Result<()> {
    if let Some(first) = crimps.first() {
        if first.field != normalization.field() || first.degree != normalization.degree() {
            return Err(Error::InconsistentProblems);
        }
        if crimps.iter().any(|c| c.field != first.field || c.degree != first.degree || c.b != first.b) {
            return Err(Error::InconsistentProblems);
        }
        if normalization.precision() <= first.b {
            return Err(Error::PrecisionTooSmall {
                min: first.b + 1,
                got: normalization.precision(),
            });
        }
    }
    Ok(())
}

fn ambient_for<F: FieldOps>(ops: F, normalization: &NormalizationData, b: usize) -> Result<Ambient<F>> {
    Ambient::new(ops, normalization, b)
}

/// Partition of `crimps` (indices) into orbits under the automorphism group
/// of the normalization. Orbits are sorted, each by index.
pub fn aut_orbits(crimps: &[CrimpSubalgebra], normalization: &NormalizationData) -> Result<Vec<Vec<usize>>> {
    check_family(crimps, normalization)?;
    let Some(first) = crimps.first() else {
        return Ok(Vec::new());
    };
    let index: HashMap<&CrimpSubalgebra, usize> = crimps.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let mut parent: Vec<usize> = (0..crimps.len()).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        let mut x = x;
        while parent[x] != r {
            let next = parent[x];
            parent[x] = r;
            x = next;
        }
        r
    }
    with_field_ops!(first.field, |ops| {
        let ambient = ambient_for(ops, normalization, first.b)?;
        for (i, c) in crimps.iter().enumerate() {
            let s = c.subspace(&ops)?;
            for g in 0..ambient.automorphism_count() {
                let image = ambient.image_subspace(g, &s);
                let image = CrimpSubalgebra::from_subspace(&ops, c.degree, c.b, &image);
                if let Some(&j) = index.get(&image) {
                    let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                    parent[ri.max(rj)] = ri.min(rj);
                }
            }
        }
        Ok::<(), Error>(())
    })?;
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for i in 0..crimps.len() {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(i);
    }
    Ok(groups.into_values().collect())
}

/// Images of `crimp` under every automorphism of the normalization.
pub fn automorphism_images(crimp: &CrimpSubalgebra, normalization: &NormalizationData) -> Result<Vec<CrimpSubalgebra>> {
    check_family(std::slice::from_ref(crimp), normalization)?;
    with_field_ops!(crimp.field, |ops| {
        let ambient = ambient_for(ops, normalization, crimp.b)?;
        let s = crimp.subspace(&ops)?;
        Ok((0..ambient.automorphism_count())
            .map(|g| CrimpSubalgebra::from_subspace(&ops, crimp.degree, crimp.b, &ambient.image_subspace(g, &s)))
            .collect())
    })
}

/// Whether some permutation of the branches carries `first` onto `second`.
/// Only defined for split normalizations.
pub fn crimps_isomorphic(
    first: &CrimpSubalgebra,
    second: &CrimpSubalgebra,
    normalization: &NormalizationData,
) -> Result<bool> {
    if normalization.kind() != NormalizationKind::Split {
        return Err(Error::NonSplit);
    }
    check_family(&[first.clone(), second.clone()], normalization)?;
    Ok(automorphism_images(first, normalization)?.contains(second))
}

#[allow(dead_code)]
fn _assert_ops_are_send(_: PrimeField, _: RationalField) {}

#[cfg(test)]
mod tests;
