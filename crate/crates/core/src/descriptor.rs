//! JSON descriptors for covers, normalizations and crimps.
//!
//! A coefficient series may be written as a string (`"3/4"`), an integer,
//! an array of those in ascending powers of t, or a full series object.
//!
//! ```json
//! {"degree": 3, "base": {"field": {"Fq": 7}, "precision": 12},
//!  "presentation": {"polynomial": [[], [0, 0, 2], [0, -3], [1]]}}
//! ```

use serde::Deserialize;
use serde_json::Value;

use crate::cover::{BaseRing, DiskCover, SplitEmbedding, StructureConstants};
use crate::crimp::{crimp_of_embedded, CrimpProblem, CrimpSubalgebra, NormalizationData};
use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::series::{SeriesMatrix, TruncatedSeries};

/// Field and precision used when a descriptor does not fix them.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Defaults {
    pub field: Option<Field>,
    pub precision: Option<usize>,
}

impl Defaults {
    /// Reconciles an explicit setting with a descriptor's own; disagreement
    /// is a schema error.
    fn field(&self, own: Option<Field>) -> Result<Field> {
        match (own, self.field) {
            (Some(a), Some(b)) if a != b => Err(Error::Schema(format!(
                "descriptor field {a} conflicts with requested field {b}"
            ))),
            (Some(a), _) | (None, Some(a)) => Ok(a),
            (None, None) => Ok(Field::Rational),
        }
    }

    fn precision(&self, own: Option<usize>, fallback: usize) -> Result<usize> {
        let n = match (own, self.precision) {
            (Some(a), Some(b)) if a != b => {
                return Err(Error::Schema(format!(
                    "descriptor precision {a} conflicts with requested precision {b}"
                )))
            }
            (Some(a), _) | (None, Some(a)) => a,
            (None, None) => fallback,
        };
        if n < 2 {
            return Err(Error::Schema(format!("precision must be at least 2, got {n}")));
        }
        Ok(n)
    }
}

pub const DEFAULT_PRECISION: usize = 16;

pub fn parse_scalar(field: Field, v: &Value) -> Result<Scalar> {
    match v {
        Value::String(s) => Scalar::parse(field, s),
        Value::Number(n) => match n.as_i64() {
            Some(i) => Ok(Scalar::from_i64(field, i)),
            None => Scalar::parse(field, &n.to_string()),
        },
        other => Err(Error::Schema(format!("expected a scalar, found {other}"))),
    }
}

/// A series in any of the accepted forms, brought to `precision`.
pub fn parse_series(field: Field, precision: usize, v: &Value) -> Result<TruncatedSeries> {
    match v {
        Value::Array(items) => {
            let coeffs = items.iter().map(|x| parse_scalar(field, x)).collect::<Result<Vec<_>>>()?;
            TruncatedSeries::new(field, coeffs, precision)
        }
        Value::Object(_) => {
            let s: TruncatedSeries = serde_json::from_value(v.clone())?;
            if s.field() != field {
                return Err(Error::FieldMismatch {
                    left: field,
                    right: s.field(),
                });
            }
            Ok(s.with_precision(precision))
        }
        _ => Ok(TruncatedSeries::constant(parse_scalar(field, v)?, precision)),
    }
}

fn parse_series_list(field: Field, precision: usize, v: &Value, what: &str) -> Result<Vec<TruncatedSeries>> {
    v.as_array()
        .ok_or_else(|| Error::Schema(format!("{what} must be an array")))?
        .iter()
        .map(|x| parse_series(field, precision, x))
        .collect()
}

fn parse_matrix(field: Field, precision: usize, v: &Value) -> Result<SeriesMatrix> {
    let rows = v
        .as_array()
        .ok_or_else(|| Error::Schema("matrix must be an array of rows".into()))?
        .iter()
        .map(|r| parse_series_list(field, precision, r, "matrix row"))
        .collect::<Result<Vec<_>>>()?;
    SeriesMatrix::from_rows(rows)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BaseRepr {
    field: Option<Field>,
    precision: Option<usize>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TableRepr {
    unit: Value,
    c: Value,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields, rename_all = "lowercase")]
enum PresentationRepr {
    Polynomial(Value),
    Branches(Value),
    Table(TableRepr),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CoverRepr {
    degree: Option<usize>,
    base: Option<BaseRepr>,
    presentation: PresentationRepr,
}

/// Builds a cover from its JSON descriptor.
pub fn parse_cover(v: &Value, defaults: Defaults) -> Result<DiskCover> {
    let repr: CoverRepr = serde_json::from_value(v.clone()).map_err(|e| Error::Schema(format!("cover: {e}")))?;
    let (own_field, own_precision) = repr
        .base
        .as_ref()
        .map(|b| (b.field, b.precision))
        .unwrap_or((None, None));
    let field = defaults.field(own_field)?;
    let n = defaults.precision(own_precision, DEFAULT_PRECISION)?;
    let cover = match &repr.presentation {
        PresentationRepr::Polynomial(p) => DiskCover::from_polynomial(&parse_series_list(field, n, p, "polynomial")?)?,
        PresentationRepr::Branches(b) => {
            DiskCover::from_branches(SplitEmbedding::new(parse_series_list(field, n, b, "branches")?)?)?
        }
        PresentationRepr::Table(t) => {
            let unit = parse_series_list(field, n, &t.unit, "unit")?;
            let c = t
                .c
                .as_array()
                .ok_or_else(|| Error::Schema("c must be a nested array".into()))?
                .iter()
                .map(|row| {
                    row.as_array()
                        .ok_or_else(|| Error::Schema("c must be a nested array".into()))?
                        .iter()
                        .map(|cell| parse_series_list(field, n, cell, "c entry"))
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            let base = BaseRing::Series { field, precision: n };
            DiskCover::from_table(StructureConstants::new(base, unit, c)?)
        }
    };
    if let Some(d) = repr.degree {
        if d != cover.degree() {
            return Err(Error::Schema(format!("degree {d} does not match presentation of degree {}", cover.degree())));
        }
    }
    Ok(cover)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields, rename_all = "lowercase")]
enum NormalizationRepr {
    Split(usize),
    Ramified(usize),
    #[serde(untagged)]
    Cover {
        cover: Value,
        #[serde(default)]
        automorphisms: Vec<Value>,
    },
}

/// `{"split": d}`, `{"ramified": e}` or `{"cover": .., "automorphisms": [..]}`
/// with automorphisms given as matrices whose column j is the image of e_j.
pub fn parse_normalization(v: &Value, field: Field, precision: usize) -> Result<NormalizationData> {
    let repr: NormalizationRepr =
        serde_json::from_value(v.clone()).map_err(|e| Error::Schema(format!("normalization: {e}")))?;
    match repr {
        NormalizationRepr::Split(d) => NormalizationData::split(d, field, precision),
        NormalizationRepr::Ramified(e) => NormalizationData::ramified_disk(e, field, precision),
        NormalizationRepr::Cover { cover, automorphisms } => {
            let defaults = Defaults {
                field: Some(field),
                precision: Some(precision),
            };
            let cover = parse_cover(&cover, defaults)?;
            let autos = automorphisms
                .iter()
                .map(|m| parse_matrix(field, precision, m))
                .collect::<Result<Vec<_>>>()?;
            NormalizationData::from_cover(cover, autos)
        }
    }
}

/// A crimp given by a basis (`{"basis": [[..]]}`, rows may also be
/// space-separated strings), or by branches
/// of a split cover (`{"branches": [..]}`) or a full embedded cover
/// (`{"cover": .., "embedding": [[..]]}`) reduced into the problem.
pub fn parse_crimp(v: &Value, problem: &CrimpProblem) -> Result<CrimpSubalgebra> {
    let field = problem.field();
    let n = problem.normalization().precision();
    let obj = v.as_object().ok_or_else(|| Error::Schema("crimp must be an object".into()))?;
    let keys: Vec<&str> = obj.keys().map(String::as_str).collect();
    match keys.as_slice() {
        ["basis"] => {
            let rows = obj["basis"]
                .as_array()
                .ok_or_else(|| Error::Schema("basis must be an array of rows".into()))?
                .iter()
                .map(|r| match r {
                    Value::String(s) => s.split_whitespace().map(|x| Scalar::parse(field, x)).collect(),
                    Value::Array(xs) => xs.iter().map(|x| parse_scalar(field, x)).collect::<Result<Vec<_>>>(),
                    _ => Err(Error::Schema("basis row must be an array or a string".into())),
                })
                .collect::<Result<Vec<_>>>()?;
            CrimpSubalgebra::from_vectors(field, problem.degree(), problem.b(), &rows)
        }
        ["branches"] => {
            let cover = DiskCover::from_branches(SplitEmbedding::new(parse_series_list(
                field,
                n,
                &obj["branches"],
                "branches",
            )?)?)?;
            let images = cover.split_images().ok_or(Error::MissingEmbedding)?.to_vec();
            crimp_of_embedded(problem, &cover, &images)
        }
        ["cover", "embedding"] => {
            let defaults = Defaults {
                field: Some(field),
                precision: Some(n),
            };
            let cover = parse_cover(&obj["cover"], defaults)?;
            let m = parse_matrix(field, n, &obj["embedding"])?;
            crimp_of_embedded(problem, &cover, &m.to_rows())
        }
        _ => Err(Error::Schema(
            "crimp must have exactly one of basis, branches, or cover with embedding".into(),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn defaults(field: Option<Field>, precision: Option<usize>) -> Defaults {
        Defaults { field, precision }
    }

    #[test]
    fn polynomial_branches_and_table_agree() {
        let f = Field::Prime(7);
        let poly = json!({"degree": 3, "base": {"field": {"Fq": 7}, "precision": 12},
            "presentation": {"polynomial": [[], [0, 0, 2], [0, -3], [1]]}});
        let c = parse_cover(&poly, defaults(None, None)).unwrap();
        assert_eq!(c.field(), f);
        assert_eq!(c.precision(), 12);
        assert_eq!(c.branch_valuation().unwrap(), 6);

        let branches = json!({"presentation": {"branches": [0, [0, 1], [0, "2"]]}});
        let c = parse_cover(&branches, defaults(Some(f), Some(10))).unwrap();
        assert_eq!(c.branch_valuation().unwrap(), 6);

        let table = json!({"presentation": {"table": {
            "unit": [1, 0, 0],
            "c": [[[1, 0, 0], [0, 1, 0], [0, 0, 1]],
                  [[0, 1, 0], [0, [0, 1], 0], [0, 0, 0]],
                  [[0, 0, 1], [0, 0, 0], [0, 0, [0, 1]]]]}}});
        let c = parse_cover(&table, defaults(None, None)).unwrap();
        assert_eq!(c.field(), Field::Rational);
        assert_eq!(c.precision(), DEFAULT_PRECISION);
        assert!(c.validate().is_valid());
        assert_eq!(c.branch_valuation().unwrap(), 4);
    }

    #[test]
    fn series_object_coefficients() {
        let s = json!({"coefficients": ["0", "1"], "field": {"Fq": 5}, "precision": 4});
        let parsed = parse_series(Field::Prime(5), 8, &s).unwrap();
        assert_eq!(parsed.precision(), 8);
        assert!(parse_series(Field::Prime(7), 8, &s).is_err());
    }

    #[test]
    fn schema_errors() {
        let conflict = json!({"base": {"field": "rational"}, "presentation": {"branches": [0, 1]}});
        let err = parse_cover(&conflict, defaults(Some(Field::Prime(5)), None)).unwrap_err();
        assert_eq!(err.kind(), crate::error::ErrorKind::Schema);
        for bad in [
            json!({"presentation": {"nothing": []}}),
            json!({"presentation": {"branches": [0, 1]}, "extra": 1}),
            json!({"degree": 3, "presentation": {"branches": [0, 1]}}),
            json!({"presentation": {"branches": [0, [true]]}}),
            json!({"base": {"precision": 1}, "presentation": {"branches": [0, 1]}}),
        ] {
            let e = parse_cover(&bad, defaults(None, None)).unwrap_err();
            assert_eq!(e.kind(), crate::error::ErrorKind::Schema, "{bad}: {e}");
        }
    }

    #[test]
    fn normalizations_and_crimps() {
        let f = Field::Prime(5);
        let n = parse_normalization(&json!({"split": 2}), f, 6).unwrap();
        let p = CrimpProblem::new(n, 2).unwrap();
        let by_basis = parse_crimp(&json!({"basis": [[1, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]]}), &p).unwrap();
        let by_strings = parse_crimp(&json!({"basis": ["1 0 1 0", "0 1 0 0", "0 0 0 1"]}), &p).unwrap();
        assert_eq!(by_strings, by_basis);
        let by_branches = parse_crimp(&json!({"branches": [0, [0, 1]]}), &p).unwrap();
        assert_eq!(by_basis, by_branches);
        let embedded = parse_crimp(
            &json!({"cover": {"presentation": {"polynomial": [[], [0, -1], [1]]}},
                    "embedding": [[1, 1], [0, [0, 1]]]}),
            &p,
        )
        .unwrap();
        assert_eq!(embedded, by_basis);
        assert!(parse_crimp(&json!({"basis": [], "branches": []}), &p).is_err());

        let r = parse_normalization(&json!({"ramified": 2}), f, 6).unwrap();
        assert_eq!(r.branch_valuation(), 1);
        let g = parse_normalization(
            &json!({"cover": {"presentation": {"table": {"unit": [1, 1],
                "c": [[[1, 0], [0, 0]], [[0, 0], [0, 1]]]}}},
                "automorphisms": [[[0, 1], [1, 0]]]}),
            f,
            6,
        )
        .unwrap();
        assert_eq!(g.automorphisms().len(), 2);
        assert!(parse_normalization(&json!({"split": 2, "ramified": 2}), f, 6).is_err());
    }
}
