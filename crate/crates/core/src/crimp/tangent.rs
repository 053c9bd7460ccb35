//! Cross-ratio of the tangent configuration of a planar triple point.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{FieldOps, Scalar};
use crate::linalg::Subspace;

use super::{with_field_ops, CrimpSubalgebra, NormalizationData, NormalizationKind};

/// The orbit `{λ, 1/λ, 1-λ, 1/(1-λ), λ/(λ-1), (λ-1)/λ}` of a cross-ratio under
/// reordering of the four points.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CrossRatioOrbit {
    pub values: Vec<Scalar>,
}

impl CrossRatioOrbit {
    pub fn of(lambda: &Scalar) -> Result<Self> {
        let field = lambda.field();
        let one = Scalar::one(field);
        if lambda.is_zero() || *lambda == one {
            return Err(Error::DegenerateTangency("cross-ratio is 0 or 1".into()));
        }
        let l = lambda.clone();
        let m = &one - &l;
        let values: BTreeSet<Scalar> = [
            l.clone(),
            l.inv()?,
            m.clone(),
            m.inv()?,
            l.checked_div(&(&l - &one))?,
            (&l - &one).checked_div(&l)?,
        ]
        .into_iter()
        .collect();
        Ok(CrossRatioOrbit {
            values: values.into_iter().collect(),
        })
    }

    pub fn contains(&self, x: &Scalar) -> bool {
        self.values.contains(x)
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.values.iter().all(|x| !other.contains(x))
    }
}

impl Serialize for CrossRatioOrbit {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.values.iter().map(Scalar::to_string))
    }
}

/// Branch slopes of a triple point where three smooth branches meet,
/// normalized so the vertical fiber direction sits at infinity.
pub fn tangent_cross_ratio(crimp: &CrimpSubalgebra, normalization: &NormalizationData) -> Result<CrossRatioOrbit> {
    if normalization.kind() != NormalizationKind::Split || normalization.degree() != 3 {
        return Err(Error::NonSplit);
    }
    if crimp.degree() != 3 || crimp.field() != normalization.field() {
        return Err(Error::InconsistentProblems);
    }
    let b = crimp.b();
    if b < 2 {
        return Err(Error::DegenerateTangency("b must be at least 2 to see tangents".into()));
    }
    with_field_ops!(crimp.field(), |ops| slopes_cross_ratio(&ops, crimp, b))
}

fn slopes_cross_ratio<F: FieldOps>(ops: &F, crimp: &CrimpSubalgebra, b: usize) -> Result<CrossRatioOrbit> {
    let n = 3 * b;
    let s = crimp.subspace(ops)?;
    let mut unit = vec![ops.zero(); n];
    for i in 0..3 {
        unit[i * b] = ops.one();
    }
    // maximal ideal: elements whose value at the singular point is zero
    let mut maximal = Subspace::zero(n);
    for r in s.rows() {
        let c = r[0].clone();
        let v: Vec<F::Elem> = r.iter().zip(&unit).map(|(x, u)| ops.sub(x, &ops.mul(&c, u))).collect();
        if (0..3).any(|i| !ops.is_zero(&v[i * b])) {
            return Err(Error::DegenerateTangency("branches do not meet at a single point".into()));
        }
        maximal.insert(ops, v);
    }
    let product = |x: &[F::Elem], y: &[F::Elem]| -> Vec<F::Elem> {
        let mut out = vec![ops.zero(); n];
        for i in 0..3 {
            for p in 0..b {
                for q in 0..b - p {
                    let term = ops.mul(&x[i * b + p], &y[i * b + q]);
                    out[i * b + p + q] = ops.add(&out[i * b + p + q], &term);
                }
            }
        }
        out
    };
    let rows = maximal.rows().to_vec();
    let mut square = Subspace::zero(n);
    for (i, x) in rows.iter().enumerate() {
        for y in &rows[i..] {
            square.insert(ops, product(x, y));
        }
    }
    if maximal.dim() - square.dim() != 2 {
        return Err(Error::DegenerateTangency(format!(
            "tangent space has dimension {}, expected 2",
            maximal.dim() - square.dim()
        )));
    }
    let mut span = square.clone();
    let mut e = vec![ops.zero(); n];
    for i in 0..3 {
        e[i * b + 1] = ops.one();
    }
    span.insert(ops, e);
    let g = rows
        .iter()
        .find(|r| !span.contains(ops, r))
        .ok_or_else(|| Error::DegenerateTangency("t is not part of a tangent basis".into()))?;
    let slopes: Vec<Scalar> = (0..3).map(|i| ops.to_scalar(&g[i * b + 1])).collect();
    if slopes[0] == slopes[1] || slopes[0] == slopes[2] || slopes[1] == slopes[2] {
        return Err(Error::DegenerateTangency("two branches share a tangent".into()));
    }
    let lambda = (&slopes[2] - &slopes[0]).checked_div(&(&slopes[1] - &slopes[0]))?;
    CrossRatioOrbit::of(&lambda)
}
