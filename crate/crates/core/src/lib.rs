//! Computational toolkit for the modular method applied to
//! `x⁴ + dy² = zᵖ` and `x² + dy⁶ = zᵖ` over `K = Q(√−d)`.
//!
//! The crate is organised bottom-up:
//!
//! * [`quadfield`]: exact arithmetic in `O_K`, prime splitting, class numbers
//!   and the hypothesis gates on `d`.
//! * [`numfield`]: coefficient fields `Q[x]/(h)` and Nebentypus tables.
//! * [`curve`]: generic Weierstrass invariants and the group law.
//! * [`frey`]: the two Frey curves, the CM test and reduction types.
//! * [`ecfinite`]: `F_ℓ`/`F_ℓ²` arithmetic and traces of Frobenius.
//! * [`sieve`]: the 2-torsion and 3-torsion discriminant searches.
//! * [`eliminate`]: Mazur-style elimination certificates and auxiliary bounds.
//! * [`twists`]: inner-twist groups and coefficient-field structure.
//! * [`ingest`]: newform tables and certificate files.

pub mod arith;
pub mod curve;
pub mod ecfinite;
pub mod eliminate;
pub mod frey;
pub mod ingest;
pub mod numfield;
pub mod quadfield;
pub mod sieve;
pub mod twists;

use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// Which of the two Diophantine equations a computation refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// `x⁴ + dy² = zᵖ`
    Quartic,
    /// `x² + dy⁶ = zᵖ`
    Sextic,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Quartic => "quartic",
            Family::Sextic => "sextic",
        })
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "quartic" => Ok(Family::Quartic),
            "sextic" => Ok(Family::Sextic),
            other => Err(format!("unknown family '{other}' (expected quartic or sextic)")),
        }
    }
}
