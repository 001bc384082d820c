//! The two discriminant searches: curves over `K` with a 2-torsion point
//! and good reduction away from 2, and curves with a 3-torsion point and
//! conductor supported at 2 and 3.

mod mod8;
mod three_torsion;
mod two_torsion;

pub use mod8::{solve_mod8, Mod8Pattern, Mod8Solution, Mod8Solutions};
pub use three_torsion::{
    is_prime_times_cube, sieve_3torsion, ExponentBounds, ThreeTorsionCandidate, ThreeTorsionMode,
    DEFAULT_BOUNDS,
};
pub use two_torsion::{sieve_2torsion, TwoTorsionCandidate, TwoTorsionReport, BRUTE_FORCE_R_MAX, BRUTE_FORCE_T_MAX};

use serde::{Deserialize, Serialize};
use std::io::{BufRead, Write};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SieveError {
    #[error("d = 3: Q(√−3) has extra units and the 2-torsion classification fails there")]
    ExtraUnits,
    #[error("precondition failed for d = {d}: {}", failed.join(", "))]
    Precondition { d: u64, failed: Vec<String> },
    #[error("analytic and brute-force searches disagree for d = {0}")]
    CrossCheckMismatch(u64),
    #[error("line {line}: {source}")]
    Record {
        line: usize,
        #[source]
        source: serde_json::Error,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// One line of a candidate file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum SieveRecord {
    Quartic(TwoTorsionCandidate),
    Sextic(ThreeTorsionCandidate),
}

/// Write records as JSON lines, one candidate per line.
pub fn write_records<W: Write>(mut out: W, records: &[SieveRecord]) -> Result<(), SieveError> {
    for r in records {
        serde_json::to_writer(&mut out, r).map_err(std::io::Error::from)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

pub fn read_records<R: BufRead>(input: R) -> Result<Vec<SieveRecord>, SieveError> {
    let mut out = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(serde_json::from_str(&line).map_err(|source| SieveError::Record { line: i + 1, source })?);
    }
    Ok(out)
}
