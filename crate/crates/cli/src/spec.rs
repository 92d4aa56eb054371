//! Group specifications read from JSON.

use rootadj_core::{classify, ElementClass, IsometryMatrix, Role, Tolerances};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RootSpec {
    pub role: Role,
    pub num: u64,
    pub den: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupSpec {
    #[serde(serialize_with = "ser_generators")]
    pub generators: [IsometryMatrix; 2],
    #[serde(skip_serializing_if = "Option::is_none")]
    pub root: Option<RootSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<Tolerances>,
}

fn ser_generators<S: serde::Serializer>(g: &[IsometryMatrix; 2], s: S) -> Result<S::Ok, S::Error> {
    #[derive(Serialize)]
    struct Pair<'a> {
        #[serde(rename = "A")]
        a: &'a IsometryMatrix,
        #[serde(rename = "B")]
        b: &'a IsometryMatrix,
    }
    Pair { a: &g[0], b: &g[1] }.serialize(s)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    generators: RawGenerators,
    root: Option<RawRoot>,
    tolerances: Option<Tolerances>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGenerators {
    #[serde(rename = "A")]
    a: Option<[f64; 4]>,
    #[serde(rename = "B")]
    b: Option<[f64; 4]>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRoot {
    role: String,
    num: i64,
    den: i64,
}

fn invalid(field: &str, message: impl Into<String>) -> CliError {
    CliError::Validation {
        field: field.into(),
        message: message.into(),
    }
}

fn generator(field: &str, raw: Option<[f64; 4]>) -> Result<IsometryMatrix, CliError> {
    let [a, b, c, d] = raw.ok_or_else(|| invalid(field, "missing generator"))?;
    if ![a, b, c, d].iter().all(|x| x.is_finite()) {
        return Err(invalid(field, "entries must be finite"));
    }
    let det = a * d - b * c;
    if det < 0.0 {
        return Err(invalid(
            field,
            format!("negative determinant {det} (orientation-reversing)"),
        ));
    }
    if det == 0.0 {
        return Err(invalid(field, "singular matrix"));
    }
    let m = IsometryMatrix::new(a, b, c, d).map_err(|e| invalid(field, e.to_string()))?;
    if classify(&m, &Tolerances::default()) == ElementClass::Identity {
        return Err(invalid(field, "generator is the identity"));
    }
    Ok(m)
}

fn root(raw: RawRoot) -> Result<RootSpec, CliError> {
    let role = match raw.role.as_str() {
        "A" => Role::A,
        "B" => Role::B,
        other => {
            return Err(invalid(
                "root.role",
                format!("expected \"A\" or \"B\", got {other:?}"),
            ))
        }
    };
    if raw.num < 1 {
        return Err(invalid("root.num", "must be at least 1"));
    }
    if raw.den < 1 {
        return Err(invalid("root.den", "must be at least 1"));
    }
    Ok(RootSpec {
        role,
        num: raw.num as u64,
        den: raw.den as u64,
    })
}

fn tolerances(t: Tolerances) -> Result<Tolerances, CliError> {
    for (name, v) in [
        ("alg", t.alg),
        ("cls", t.cls),
        ("geo", t.geo),
        ("vertex", t.vertex),
    ] {
        if !(v.is_finite() && v > 0.0) {
            return Err(invalid(&format!("tolerances.{name}"), "must be positive"));
        }
    }
    Ok(t)
}

/// Parses and validates a group specification.
pub fn parse_group_spec(text: &str) -> Result<GroupSpec, CliError> {
    let raw: RawSpec = serde_json::from_str(text).map_err(|e| CliError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    Ok(GroupSpec {
        generators: [
            generator("generators.A", raw.generators.a)?,
            generator("generators.B", raw.generators.b)?,
        ],
        root: raw.root.map(root).transpose()?,
        tolerances: raw.tolerances.map(tolerances).transpose()?,
    })
}

impl GroupSpec {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serializes")
    }

    /// Tolerances from the spec (or defaults), multiplied by `scale`.
    pub fn effective_tolerances(&self, scale: f64) -> Tolerances {
        self.tolerances.unwrap_or_default().scaled(scale)
    }
}
