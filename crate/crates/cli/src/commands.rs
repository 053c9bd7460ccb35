use covercrimp::crimp::{
    aut_orbits, crimps_isomorphic, enumerate_crimps, lifted_branch_valuation, tangent_cross_ratio, CrimpProblem,
    CrimpSubalgebra, EnumerationOptions, FilterOrder, NormalizationKind,
};
use covercrimp::curve::{
    hassett_nonempty, is_epsilon_stable, riemann_hurwitz, stability_thresholds, MarkedNodalCurve, RiemannHurwitz,
    StabilityParams,
};
use covercrimp::descriptor::{parse_cover, parse_crimp, parse_normalization, Defaults, DEFAULT_PRECISION};
use covercrimp::monodromy::{enumerate_etale_covers, hurwitz_count};
use covercrimp::{Error, Field, TruncatedSeries, Valuation};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::input::{decode, reconcile, JobConfig, DEFAULT_BUDGET};

fn coefficients(s: &TruncatedSeries) -> Value {
    s.coeffs().iter().map(|c| c.to_string()).collect()
}

fn defaults(config: &JobConfig) -> Defaults {
    Defaults {
        field: config.field,
        precision: config.precision,
    }
}

pub fn disc(value: &Value, config: &JobConfig) -> Result<Value, Error> {
    let cover = parse_cover(value, defaults(config))?;
    let form = cover.trace_form()?;
    let disc = cover.discriminant()?;
    let valuation = disc.valuation().require()?;
    let trace_form: Vec<Value> = (0..form.rows())
        .map(|i| (0..form.cols()).map(|j| coefficients(form.get(i, j))).collect())
        .collect();
    Ok(json!({
        "branch_valuation": valuation,
        "degree": cover.degree(),
        "discriminant": disc,
        "etale": valuation == 0,
        "field": cover.field().to_string(),
        "precision": cover.precision(),
        "trace_form": trace_form,
    }))
}

pub fn validate(value: &Value, config: &JobConfig) -> Result<Value, Error> {
    let cover = parse_cover(value, defaults(config))?;
    let report = cover.validate();
    Ok(json!({
        "degree": cover.degree(),
        "field": cover.field().to_string(),
        "valid": report.is_valid(),
        "violations": report.violations.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
    }))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ProblemInput {
    normalization: Value,
    b: usize,
    field: Option<Field>,
    precision: Option<usize>,
    budget: Option<u128>,
    #[serde(default)]
    order: FilterOrder,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct IsoInput {
    normalization: Value,
    b: usize,
    field: Option<Field>,
    precision: Option<usize>,
    first: Value,
    second: Value,
}

fn build_problem(
    normalization: &Value,
    b: usize,
    field: Option<Field>,
    precision: Option<usize>,
    config: &JobConfig,
) -> Result<CrimpProblem, Error> {
    let field = reconcile("field", config.field.as_ref(), field.as_ref())?.unwrap_or(Field::Rational);
    let precision =
        reconcile("precision", config.precision.as_ref(), precision.as_ref())?.unwrap_or(DEFAULT_PRECISION.max(2 * b));
    if precision < 2 {
        return Err(Error::Schema(format!("precision must be at least 2, got {precision}")));
    }
    let normalization = parse_normalization(normalization, field, precision)?;
    CrimpProblem::new(normalization, b)
}

fn kind_name(kind: NormalizationKind) -> Value {
    match kind {
        NormalizationKind::Split => json!("split"),
        NormalizationKind::Ramified { index } => json!({ "ramified": index }),
        NormalizationKind::General => json!("general"),
    }
}

/// Echelon rows as space-separated coordinates, index `i * b + m` for `t^m e_i`.
fn basis_json(c: &CrimpSubalgebra) -> Value {
    c.basis()
        .iter()
        .map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "))
        .collect()
}

pub fn crimps(value: &Value, config: &JobConfig) -> Result<Value, Error> {
    let input: ProblemInput = decode(value, "crimps input")?;
    let problem = build_problem(&input.normalization, input.b, input.field, input.precision, config)?;
    let budget = reconcile("budget", config.budget.as_ref(), input.budget.as_ref())?.unwrap_or(DEFAULT_BUDGET);
    if budget == 0 {
        return Err(Error::Schema("budget must be at least 1".into()));
    }
    let options = EnumerationOptions {
        budget,
        order: input.order,
        ..Default::default()
    };
    let found = enumerate_crimps(&problem, options)?;
    let orbits = aut_orbits(&found.crimps, problem.normalization())?;
    let mut orbit_of = vec![0; found.crimps.len()];
    for (k, orbit) in orbits.iter().enumerate() {
        for &i in orbit {
            orbit_of[i] = k;
        }
    }
    let crimps = found
        .crimps
        .iter()
        .zip(&orbit_of)
        .map(|(c, &orbit)| {
            let lifted = match lifted_branch_valuation(&problem, c)? {
                Some(Valuation::Finite(v)) => json!(v),
                _ => Value::Null,
            };
            Ok(json!({
                "basis": basis_json(c),
                "certificate": {"codimension": c.codim(), "lifted_branch_valuation": lifted},
                "orbit": orbit,
            }))
        })
        .collect::<Result<Vec<_>, Error>>()?;
    Ok(json!({
        "a": problem.normalization().branch_valuation(),
        "b": problem.b(),
        "count": found.crimps.len(),
        "crimps": crimps,
        "degree": problem.degree(),
        "delta": problem.delta(),
        "field": problem.field().to_string(),
        "normalization": kind_name(problem.normalization().kind()),
        "orbits": orbits,
        "precision": problem.normalization().precision(),
        "search_space": found.search_space.to_string(),
    }))
}

pub fn iso(value: &Value, config: &JobConfig) -> Result<Value, Error> {
    let input: IsoInput = decode(value, "iso input")?;
    let problem = build_problem(&input.normalization, input.b, input.field, input.precision, config)?;
    let first = parse_crimp(&input.first, &problem)?;
    let second = parse_crimp(&input.second, &problem)?;
    let normalization = problem.normalization();
    let isomorphic = crimps_isomorphic(&first, &second, normalization)?;
    let cross_ratio = |c: &CrimpSubalgebra| {
        tangent_cross_ratio(c, normalization)
            .map(|o| json!(o))
            .unwrap_or(Value::Null)
    };
    Ok(json!({
        "cross_ratio": {"first": cross_ratio(&first), "second": cross_ratio(&second)},
        "first": basis_json(&first),
        "isomorphic": isomorphic,
        "second": basis_json(&second),
    }))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct StableInput {
    curve: Value,
    epsilon: Option<String>,
}

pub fn stable(value: &Value, config: &JobConfig) -> Result<Value, Error> {
    // either {"curve": .., "epsilon": ..} or a bare curve descriptor
    let (curve, epsilon) = if value.get("curve").is_some() {
        let input: StableInput = decode(value, "stable input")?;
        (input.curve, input.epsilon.as_deref().map(StabilityParams::parse).transpose()?)
    } else {
        (value.clone(), None)
    };
    let curve: MarkedNodalCurve = decode(&curve, "curve")?;
    let params = reconcile("epsilon", config.epsilon.as_ref(), epsilon.as_ref())?
        .ok_or_else(|| Error::Schema("epsilon is required".into()))?;
    let verdict = is_epsilon_stable(&curve, &params);
    let genus = curve.arithmetic_genus();
    Ok(json!({
        "arithmetic_genus": genus,
        "degrees": verdict.degrees.iter().map(|d| d.to_string()).collect::<Vec<_>>(),
        "epsilon": params.to_string(),
        "hassett_nonempty": hassett_nonempty(genus, curve.total_multiplicity(), &params),
        "reason": verdict.reason.as_ref().map(|r| r.to_string()),
        "stable": verdict.is_stable(),
        "thresholds": stability_thresholds(&curve).iter().map(|t| t.to_string()).collect::<Vec<_>>(),
        "total_multiplicity": curve.total_multiplicity(),
    }))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct HurwitzInput {
    d: usize,
    #[serde(default)]
    h: usize,
    b: Option<usize>,
    punctures: Option<Vec<Vec<usize>>>,
    budget: Option<u128>,
}

pub fn hurwitz(value: &Value, config: &JobConfig) -> Result<Value, Error> {
    let input: HurwitzInput = decode(value, "hurwitz input")?;
    let budget = reconcile("budget", config.budget.as_ref(), input.budget.as_ref())?.unwrap_or(DEFAULT_BUDGET);
    match (input.b, &input.punctures) {
        (Some(b), None) => {
            let c = hurwitz_count(input.d, input.h, b, budget)?;
            Ok(json!({
                "b": b,
                "d": input.d,
                "disconnected": c.disconnected,
                "h": input.h,
                "raw": c.raw,
                "search_space": c.search_space.to_string(),
                "weighted": c.weighted.to_string(),
            }))
        }
        (None, Some(punctures)) => {
            let classes = enumerate_etale_covers(input.d, input.h, punctures, budget)?;
            Ok(json!({
                "classes": classes,
                "count": classes.len(),
                "d": input.d,
                "h": input.h,
                "punctures": punctures,
            }))
        }
        _ => Err(Error::Schema("hurwitz input needs exactly one of b or punctures".into())),
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RhInput {
    d: u64,
    h: u64,
    b: Option<u64>,
    g: Option<u64>,
}

pub fn rh(value: &Value) -> Result<Value, Error> {
    let input: RhInput = decode(value, "rh input")?;
    let known = match (input.b, input.g) {
        (Some(b), None) => RiemannHurwitz::Branch(b),
        (None, Some(g)) => RiemannHurwitz::Genus(g),
        _ => return Err(Error::Schema("rh input needs exactly one of b or g".into())),
    };
    let (b, g) = match (known, riemann_hurwitz(input.d, input.h, known)?) {
        (RiemannHurwitz::Branch(b), RiemannHurwitz::Genus(g)) | (RiemannHurwitz::Genus(g), RiemannHurwitz::Branch(b)) => {
            (b, g)
        }
        _ => unreachable!("the solver returns the other quantity"),
    };
    Ok(json!({"b": b, "d": input.d, "g": g, "h": input.h}))
}
