use std::io::Read;

use covercrimp::curve::StabilityParams;
use covercrimp::{Error, Field};
use serde_json::Value;

use crate::Options;

pub const DEFAULT_BUDGET: u128 = 10_000_000;

/// Validated command-line settings.
#[derive(Clone, Debug)]
pub struct JobConfig {
    pub field: Option<Field>,
    pub precision: Option<usize>,
    pub epsilon: Option<StabilityParams>,
    pub budget: Option<u128>,
}

impl JobConfig {
    pub fn from_options(o: &Options) -> Result<Self, Error> {
        let field = o.field.as_deref().map(Field::parse).transpose()?;
        if let Some(n) = o.precision {
            if n < 2 {
                return Err(Error::Schema(format!("--precision must be at least 2, got {n}")));
            }
        }
        if o.budget == Some(0) {
            return Err(Error::Schema("--budget must be at least 1".into()));
        }
        Ok(JobConfig {
            field,
            precision: o.precision,
            epsilon: o.epsilon.as_deref().map(StabilityParams::parse).transpose()?,
            budget: o.budget,
        })
    }
}

/// Reads `--input`: inline JSON when it starts like JSON, stdin for `-` or
/// when absent, otherwise a file path.
pub fn read(input: Option<&str>) -> Result<Value, Error> {
    let text = match input {
        None | Some("-") => {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| Error::Schema(format!("reading stdin: {e}")))?;
            s
        }
        Some(s) if s.trim_start().starts_with(['{', '[']) => s.to_string(),
        Some(path) => std::fs::read_to_string(path).map_err(|e| Error::Schema(format!("reading {path}: {e}")))?,
    };
    serde_json::from_str(&text).map_err(|e| Error::Schema(format!("input is not JSON: {e}")))
}

/// Deserializes a schema-checked input struct, reporting failures as
/// schema errors.
pub fn decode<T: serde::de::DeserializeOwned>(value: &Value, what: &str) -> Result<T, Error> {
    serde_json::from_value(value.clone()).map_err(|e| Error::Schema(format!("{what}: {e}")))
}

/// An explicit flag and an input field must agree when both are present.
pub fn reconcile<T: PartialEq + std::fmt::Display + Clone>(
    name: &str,
    flag: Option<&T>,
    input: Option<&T>,
) -> Result<Option<T>, Error> {
    match (flag, input) {
        (Some(a), Some(b)) if a != b => Err(Error::Schema(format!(
            "{name} given as {a} on the command line and {b} in the input"
        ))),
        (Some(a), _) | (None, Some(a)) => Ok(Some(a.clone())),
        (None, None) => Ok(None),
    }
}
