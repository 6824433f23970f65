//! JSON documents emitted by the CLI.

use serde_json::{json, Value};

use super::csv_io::ParseError;
use crate::align::{AlignError, AlignmentSolution};

/// The solution as written by `solve`. The rotor is serialized in its
/// canonical sign (`a ≥ 0`), and `quaternion` repeats the same four numbers.
pub fn solution_report(sol: &AlignmentSolution) -> Value {
    let r = sol.rotor.canonical();
    let [a, c1, c2, c3] = r.to_array();
    json!({
        "ambiguous": sol.ambiguous,
        "cost": sol.cost,
        "eigen_gap": sol.eigen_gap,
        "lambda_max": sol.lambda_max,
        "n_pairs": sol.n_pairs,
        "n_priors": sol.n_priors,
        "quaternion": [a, c1, c2, c3],
        "rotation_matrix": r.to_matrix().concat(),
        "rotor": {"a": a, "c": [c1, c2, c3]},
        "translation": sol.translation,
    })
}

pub fn align_error_kind(e: &AlignError) -> &'static str {
    match e {
        AlignError::EmptyProblem => "EmptyProblem",
        AlignError::NonPositiveWeight { .. } => "NonPositiveWeight",
        AlignError::NonFinite { .. } => "NonFinite",
        AlignError::NoPointData => "NoPointData",
        AlignError::ZeroPrior => "ZeroPrior",
        AlignError::DegeneratePrior { .. } => "DegeneratePrior",
        AlignError::Eig(crate::eig::EigError::NoConvergence { .. }) => "NoConvergence",
        AlignError::Eig(crate::eig::EigError::NonFinite) => "NonFinite",
        AlignError::Ga(_) => "NonUnitRotor",
    }
}

pub fn parse_error_report(path: &str, e: &ParseError) -> Value {
    json!({
        "error": "ParseError",
        "path": path,
        "line": e.line,
        "column": e.column,
        "message": e.message,
    })
}

pub fn error_report(kind: &str, message: &str) -> Value {
    json!({"error": kind, "message": message})
}
