//! Named algebras used by the CLI and the test suites.

use std::sync::Arc;

use crate::algebra::{field, path_algebra, triangular_algebra, truncated_poly, AlgError, Algebra};

/// Catalog names with a one-line description.
pub const NAMES: &[(&str, &str)] = &[
    ("F2", "the field F_2"),
    ("F3", "the field F_3"),
    ("D2", "dual numbers F_2[x]/(x^2)"),
    ("D2p3", "dual numbers F_3[x]/(x^2)"),
    ("D3", "F_2[x]/(x^3)"),
    ("A2", "path algebra of 1 -> 2 over F_2"),
    ("A3", "path algebra of 1 -> 2 -> 3 over F_2"),
    ("T2", "upper-triangular 2x2 matrices over F_2"),
    ("TD2", "upper-triangular 2x2 matrices over F_2[x]/(x^2)"),
];

pub fn lookup(name: &str) -> Result<Arc<Algebra>, AlgError> {
    match name {
        "F2" => field(2),
        "F3" => field(3),
        "D2" => truncated_poly(2, 2),
        "D2p3" => truncated_poly(3, 2),
        "D3" => truncated_poly(2, 3),
        "A2" => path_algebra(2, 2, &[(1, 2)]),
        "A3" => path_algebra(2, 3, &[(1, 2), (2, 3)]),
        "T2" => triangular_algebra(&field(2)?),
        "TD2" => triangular_algebra(&truncated_poly(2, 2)?),
        other => Err(AlgError::Shape(format!("unknown catalog algebra '{other}'"))),
    }
}

/// The six algebras of the main verification run.
pub const MAIN_SET: &[&str] = &["F2", "D2", "D3", "A2", "A3", "T2"];
