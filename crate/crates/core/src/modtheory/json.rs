//! Reading descriptors and matrix modules back from JSON.
//!
//! Scalars are strings in the same syntax the serializers print, so the
//! output of `build` can be fed to `verify` or `classify` unchanged.

use serde::Deserialize;
use thiserror::Error;

use super::{Matrix, MatrixModule, ModError, ModuleDescriptor, SCHEMA_VERSION};
use crate::parse::{parse_scalar, ParseError};
use crate::poly::Orbit;
use crate::scalar::{Field, Scalar};

#[derive(Debug, Error)]
pub enum JsonError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported schema_version {0} (expected {SCHEMA_VERSION})")]
    SchemaVersion(u32),
    #[error("field `{field}`: {source}")]
    Scalar {
        field: String,
        #[source]
        source: ParseError,
    },
    #[error("{0}")]
    Shape(String),
    #[error(transparent)]
    Module(#[from] ModError),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDescriptor {
    schema_version: Option<u32>,
    #[serde(rename = "type")]
    kind: String,
    orbit: Option<Vec<String>>,
    zdot: String,
    a: Option<String>,
    n: Option<usize>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawModule {
    schema_version: Option<u32>,
    n: usize,
    #[serde(rename = "X")]
    x: Vec<Vec<String>>,
    #[serde(rename = "H")]
    h: Vec<Vec<String>>,
    #[serde(rename = "Y")]
    y: Vec<Vec<String>>,
}

fn check_version(v: Option<u32>) -> Result<(), JsonError> {
    match v {
        Some(v) if v != SCHEMA_VERSION => Err(JsonError::SchemaVersion(v)),
        _ => Ok(()),
    }
}

fn scalar(text: &str, name: &str, field: &Field) -> Result<Scalar, JsonError> {
    parse_scalar(text, field).map_err(|source| JsonError::Scalar {
        field: name.to_string(),
        source,
    })
}

fn matrix(rows: &[Vec<String>], name: &str, n: usize, field: &Field) -> Result<Matrix, JsonError> {
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(JsonError::Shape(format!("{name} must be {n} x {n}")));
    }
    let parsed = rows
        .iter()
        .enumerate()
        .map(|(r, row)| {
            row.iter()
                .enumerate()
                .map(|(c, s)| scalar(s, &format!("{name}[{r}][{c}]"), field))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    Matrix::from_rows(parsed).ok_or_else(|| JsonError::Shape(format!("{name} is empty")))
}

impl ModuleDescriptor {
    /// Reads the object written by the `Serialize` impl.
    pub fn from_json(text: &str, field: &Field) -> Result<Self, JsonError> {
        let raw: RawDescriptor = serde_json::from_str(text)?;
        check_version(raw.schema_version)?;
        let zdot = scalar(&raw.zdot, "zdot", field)?;
        let missing = |what: &str| JsonError::Shape(format!("{} needs `{what}`", raw.kind));
        match raw.kind.as_str() {
            "Aprime" | "Bprime" => {
                let values = raw
                    .orbit
                    .as_ref()
                    .ok_or_else(|| missing("orbit"))?
                    .iter()
                    .enumerate()
                    .map(|(i, s)| scalar(s, &format!("orbit[{i}]"), field))
                    .collect::<Result<Vec<_>, _>>()?;
                if values.is_empty() {
                    return Err(JsonError::Shape("orbit must not be empty".into()));
                }
                if raw.n.is_some_and(|n| n != values.len()) {
                    return Err(JsonError::Shape("`n` differs from the orbit length".into()));
                }
                let a = scalar(raw.a.as_deref().ok_or_else(|| missing("a"))?, "a", field)?;
                let orbit = Orbit::new(values);
                Ok(if raw.kind == "Aprime" {
                    ModuleDescriptor::Aprime { orbit, zdot, a }
                } else {
                    ModuleDescriptor::Bprime { orbit, zdot, a }
                })
            }
            "Cmod" => {
                let n = raw.n.ok_or_else(|| missing("n"))?;
                if n == 0 {
                    return Err(JsonError::Shape("n must be positive".into()));
                }
                Ok(ModuleDescriptor::Cmod { zdot, n })
            }
            other => Err(JsonError::Shape(format!(
                "unknown descriptor type `{other}` (expected Aprime, Bprime or Cmod)"
            ))),
        }
    }
}

impl MatrixModule {
    /// Reads `{"n", "X", "H", "Y"}` with scalar strings.
    pub fn from_json(text: &str, field: &Field) -> Result<Self, JsonError> {
        let raw: RawModule = serde_json::from_str(text)?;
        check_version(raw.schema_version)?;
        if raw.n == 0 {
            return Err(JsonError::Shape("n must be positive".into()));
        }
        let x = matrix(&raw.x, "X", raw.n, field)?;
        let h = matrix(&raw.h, "H", raw.n, field)?;
        let y = matrix(&raw.y, "Y", raw.n, field)?;
        Ok(MatrixModule::new(x, h, y)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modtheory::build;
    use crate::poly::Poly;

    #[test]
    fn built_modules_read_back() {
        let field = Field::exact(3);
        let f = Poly::monomial(field.zeta(3, 1), 1);
        let descriptors = [
            ModuleDescriptor::Aprime {
                orbit: Orbit::new(vec![field.int(1), field.zeta(3, 1), field.zeta(3, 2)]),
                zdot: field.ratio(1, 2),
                a: field.int(2),
            },
            ModuleDescriptor::Cmod { zdot: field.int(1), n: 3 },
        ];
        for d in descriptors {
            let text = serde_json::to_string(&d).unwrap();
            assert_eq!(ModuleDescriptor::from_json(&text, &field).unwrap(), d);
            let m = build(&d, &f, &field).unwrap();
            let text = serde_json::to_string(&m).unwrap();
            assert_eq!(MatrixModule::from_json(&text, &field).unwrap(), m);
        }
    }

    #[test]
    fn rejects_bad_input() {
        let field = Field::exact(1);
        let bad = [
            r#"{"type": "Cmod", "zdot": "1", "n": 2, "schema_version": 7}"#,
            r#"{"type": "Dmod", "zdot": "1", "n": 2}"#,
            r#"{"type": "Aprime", "zdot": "1", "a": "1"}"#,
            r#"{"type": "Cmod", "zdot": "1 +", "n": 2}"#,
            r#"{"type": "Cmod", "zdot": "1", "n": 2, "extra": 0}"#,
        ];
        for text in bad {
            assert!(ModuleDescriptor::from_json(text, &field).is_err(), "{text}");
        }
        let ragged = r#"{"n": 2, "X": [["0"]], "H": [["0","0"],["0","0"]], "Y": [["0","0"],["0","0"]]}"#;
        assert!(matches!(
            MatrixModule::from_json(ragged, &field),
            Err(JsonError::Shape(_))
        ));
    }
}
