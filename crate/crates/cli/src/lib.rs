//! Library side of the `rootadj` command: spec parsing, command dispatch
//! and SVG rendering.

pub mod render;
pub mod spec;

use rootadj_core::{
    build_hexagon, classify, classify_stopping, cross_check, decide_rational_power_with,
    root_line_fan, AdjoinOptions, CheckStatus, Error, IeReading, Outcome, Role, Tolerances,
    Verdict,
};
use serde::Serialize;
use serde_json::json;

pub use render::{disc_arc, render_svg, DiscArc};
pub use spec::{parse_group_spec, GroupSpec, RootSpec};

pub const TOLERANCE_SCALE_VAR: &str = "ROOTADJ_TOLERANCE_SCALE";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid {field}: {message}")]
    Validation { field: String, message: String },
    #[error("{0}")]
    Core(#[from] Error),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    /// Machine-readable form printed on failure.
    pub fn to_json(&self) -> serde_json::Value {
        let mut body = match self {
            CliError::Parse { line, column, .. } => {
                json!({"kind": "parse", "line": line, "column": column})
            }
            CliError::Validation { field, .. } => json!({"kind": "validation", "field": field}),
            CliError::Core(_) => json!({"kind": "geometry"}),
            CliError::Io(_) => json!({"kind": "io"}),
        };
        body["message"] = json!(self.to_string());
        json!({ "error": body })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Command {
    Classify,
    Hexagon,
    Adjoin {
        root: Option<RootSpec>,
        ie_reading: IeReading,
    },
    Verify {
        root: Option<RootSpec>,
    },
    Render {
        root: Option<RootSpec>,
    },
}

/// What a command produced: text for standard output (JSON or SVG) and
/// the exit code.
#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub body: String,
    pub code: i32,
}

pub const EXIT_DEFINITE: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_BORDERLINE: i32 = 3;

/// Reads the tolerance scale from the environment; unset means 1.
pub fn tolerance_scale() -> Result<f64, CliError> {
    match std::env::var(TOLERANCE_SCALE_VAR) {
        Err(_) => Ok(1.0),
        Ok(v) => match v.trim().parse::<f64>() {
            Ok(x) if x.is_finite() && x > 0.0 => Ok(x),
            _ => Err(CliError::Validation {
                field: TOLERANCE_SCALE_VAR.into(),
                message: format!("expected a positive number, got {v:?}"),
            }),
        },
    }
}

fn pretty<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("report serializes") + "\n"
}

pub fn verdict_exit_code(v: &Verdict) -> i32 {
    if v.is_borderline() {
        EXIT_BORDERLINE
    } else if v.outcome == Outcome::NeedsEllipticAlgorithm {
        EXIT_INCONCLUSIVE
    } else {
        EXIT_DEFINITE
    }
}

fn root_or(spec: &GroupSpec, root: Option<RootSpec>) -> RootSpec {
    root.or(spec.root).unwrap_or(RootSpec {
        role: Role::B,
        num: 1,
        den: 1,
    })
}

enum Decision {
    Verdict(Box<Verdict>),
    NotStopping(String),
}

fn decide(
    spec: &GroupSpec,
    root: RootSpec,
    tol: &Tolerances,
    opts: &AdjoinOptions,
) -> Result<Decision, CliError> {
    let [a, b] = spec.generators;
    let h = build_hexagon(&a, &b, tol)?;
    match decide_rational_power_with(&h, root.role, root.num, root.den, tol, opts) {
        Ok(v) => Ok(Decision::Verdict(Box::new(v))),
        Err(Error::NotStoppingInput(why)) => Ok(Decision::NotStopping(why)),
        Err(e) => Err(e.into()),
    }
}

fn not_stopping(why: &str) -> Output {
    Output {
        body: pretty(&json!({
            "status": "inconclusive",
            "detail": format!("not a discrete stopping configuration: {why}"),
        })),
        code: EXIT_INCONCLUSIVE,
    }
}

/// Runs one command on a parsed spec.
pub fn run(cmd: &Command, spec: &GroupSpec, scale: f64) -> Result<Output, CliError> {
    let tol = spec.effective_tolerances(scale);
    let [a, b] = spec.generators;
    match cmd {
        Command::Classify => {
            let classes = json!({
                "A": classify(&a, &tol),
                "B": classify(&b, &tol),
                "A^-1 B": classify(&(a.inverse() * b), &tol),
            });
            Ok(Output {
                body: pretty(&classes),
                code: EXIT_DEFINITE,
            })
        }
        Command::Hexagon => {
            let h = build_hexagon(&a, &b, &tol)?;
            let (stopping, code) = match classify_stopping(&h, &tol) {
                Ok(c) => (json!({ "stopping": c }), EXIT_DEFINITE),
                Err(why) => (json!({ "not_stopping": why }), EXIT_INCONCLUSIVE),
            };
            let mut body = json!({ "hexagon": h });
            body.as_object_mut()
                .unwrap()
                .extend(stopping.as_object().unwrap().clone());
            Ok(Output {
                body: pretty(&body),
                code,
            })
        }
        Command::Adjoin { root, ie_reading } => {
            let opts = AdjoinOptions {
                ie_reading: *ie_reading,
            };
            match decide(spec, root_or(spec, *root), &tol, &opts)? {
                Decision::Verdict(v) => Ok(Output {
                    body: pretty(&v),
                    code: verdict_exit_code(&v),
                }),
                Decision::NotStopping(why) => Ok(not_stopping(&why)),
            }
        }
        Command::Verify { root } => {
            let v = match decide(spec, root_or(spec, *root), &tol, &AdjoinOptions::default())? {
                Decision::Verdict(v) => *v,
                Decision::NotStopping(why) => return Ok(not_stopping(&why)),
            };
            let report = cross_check(&v, &spec.generators, &tol);
            let code = if v.is_borderline() {
                EXIT_BORDERLINE
            } else if report.status == CheckStatus::Agreement {
                EXIT_DEFINITE
            } else {
                EXIT_INCONCLUSIVE
            };
            Ok(Output {
                body: pretty(&json!({ "verdict": v, "report": report })),
                code,
            })
        }
        Command::Render { root } => {
            let h = build_hexagon(&a, &b, &tol)?;
            let fan = match root.or(spec.root) {
                Some(r) => Some(root_line_fan(&h, r.role, r.den, r.den, &tol)?),
                None => None,
            };
            Ok(Output {
                body: render_svg(&h, fan.as_ref()),
                code: EXIT_DEFINITE,
            })
        }
    }
}
