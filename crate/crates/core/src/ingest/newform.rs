use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Deserialize;
use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;
use std::sync::Arc;

use super::IngestError;
use crate::arith;
use crate::numfield::{CharacterTable, NumberField, NumberFieldElement};

pub const NEWFORM_FORMAT_VERSION: u32 = 1;

/// A candidate newform `g`: level, Nebentypus and Hecke eigenvalues in its
/// coefficient field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewformRecord {
    pub label: String,
    pub level: u64,
    pub field: Arc<NumberField>,
    pub ap: BTreeMap<u64, NumberFieldElement>,
    pub eps: CharacterTable,
}

impl NewformRecord {
    pub fn degree(&self) -> usize {
        self.field.degree()
    }

    pub fn char_modulus(&self) -> u64 {
        self.eps.modulus()
    }

    pub fn char_order(&self) -> u64 {
        self.eps.order()
    }

    pub fn ap(&self, ell: u64) -> Option<&NumberFieldElement> {
        self.ap.get(&ell)
    }

    /// Validate a record built in code.
    pub fn new(
        label: impl Into<String>,
        level: u64,
        field: Arc<NumberField>,
        ap: BTreeMap<u64, NumberFieldElement>,
        eps: CharacterTable,
    ) -> Result<Self, IngestError> {
        let rec = Self {
            label: label.into(),
            level,
            field,
            ap,
            eps,
        };
        rec.validate()?;
        Ok(rec)
    }

    fn fail(&self, reason: impl Into<String>) -> IngestError {
        IngestError::Record {
            label: self.label.clone(),
            reason: reason.into(),
        }
    }

    fn validate(&self) -> Result<(), IngestError> {
        if self.level == 0 {
            return Err(self.fail("level must be positive"));
        }
        if !self.eps.order().is_power_of_two() {
            return Err(self.fail(format!("character order {} is not a power of two", self.eps.order())));
        }
        if let Some(v) = self.eps.values().values().next() {
            if v.field() != &self.field {
                return Err(self.fail("character values live in a different field"));
            }
        }
        for (&ell, a) in &self.ap {
            if !arith::is_prime64(ell) {
                return Err(self.fail(format!("a_{ell}: {ell} is not prime")));
            }
            if a.field() != &self.field {
                return Err(self.fail(format!("a_{ell} lives in a different field")));
            }
            if !ramanujan_ok(a, ell) {
                return Err(self.fail(format!(
                    "a_{ell} = {a} violates the Ramanujan bound: |N(a)| = {} > (2√{ell})^{}",
                    a.norm().abs(),
                    self.degree()
                )));
            }
        }
        Ok(())
    }
}

/// Necessary condition `|N(a)| ≤ (2√ℓ)^n`, tested exactly as
/// `N(a)² ≤ (4ℓ)^n`.
pub fn ramanujan_ok(a: &NumberFieldElement, ell: u64) -> bool {
    let n = a.norm();
    let bound = BigRational::from_integer(BigInt::from(4 * ell).pow(a.field().degree() as u32));
    &n * &n <= bound
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFile {
    format_version: u32,
    #[serde(default)]
    newform: Vec<RawNewform>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawNewform {
    label: String,
    level: u64,
    field_poly: Vec<i64>,
    char_modulus: u64,
    char_order: u64,
    #[serde(default)]
    ap: BTreeMap<String, Vec<Coord>>,
    #[serde(default)]
    eps: BTreeMap<String, Vec<Coord>>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Coord {
    Int(i64),
    Text(String),
}

impl Coord {
    fn to_rational(&self) -> Result<BigRational, String> {
        match self {
            Coord::Int(n) => Ok(BigRational::from_integer((*n).into())),
            Coord::Text(s) => {
                let (num, den) = match s.split_once('/') {
                    Some((n, d)) => (n.trim(), d.trim()),
                    None => (s.trim(), "1"),
                };
                let num: BigInt = num.parse().map_err(|_| format!("bad coordinate '{s}'"))?;
                let den: BigInt = den.parse().map_err(|_| format!("bad coordinate '{s}'"))?;
                if den.is_zero() {
                    return Err(format!("zero denominator in '{s}'"));
                }
                Ok(BigRational::new(num, den))
            }
        }
    }
}

fn element(field: &Arc<NumberField>, coords: &[Coord]) -> Result<NumberFieldElement, String> {
    if coords.len() > field.degree() {
        return Err(format!("{} coordinates for a degree-{} field", coords.len(), field.degree()));
    }
    let c = coords.iter().map(Coord::to_rational).collect::<Result<Vec<_>, _>>()?;
    NumberFieldElement::new(field, c).map_err(|e| e.to_string())
}

impl RawNewform {
    fn build(self) -> Result<NewformRecord, IngestError> {
        let label = self.label.clone();
        let fail = |reason: String| IngestError::Record {
            label: label.clone(),
            reason,
        };
        if !self.char_order.is_power_of_two() {
            return Err(fail(format!("character order {} is not a power of two", self.char_order)));
        }
        let field = NumberField::from_coeffs(&self.field_poly).map_err(|e| fail(e.to_string()))?;
        let mut ap = BTreeMap::new();
        for (k, v) in &self.ap {
            let ell: u64 = k.trim().parse().map_err(|_| fail(format!("bad prime key '{k}'")))?;
            ap.insert(ell, element(&field, v).map_err(|e| fail(format!("a_{ell}: {e}")))?);
        }
        let eps = if self.eps.is_empty() && self.char_order == 1 {
            CharacterTable::trivial(&field, self.char_modulus)
        } else {
            let mut values = BTreeMap::new();
            for (k, v) in &self.eps {
                let r: u64 = k.trim().parse().map_err(|_| fail(format!("bad residue key '{k}'")))?;
                values.insert(r, element(&field, v).map_err(|e| fail(format!("eps({r}): {e}")))?);
            }
            CharacterTable::new(self.char_modulus, self.char_order, values).map_err(|e| fail(e.to_string()))?
        };
        NewformRecord::new(self.label, self.level, field, ap, eps)
    }
}

/// Parse and validate a newform table. Records come back sorted by label.
pub fn parse_newforms(text: &str) -> Result<Vec<NewformRecord>, IngestError> {
    let raw: RawFile = toml::from_str(text).map_err(|e| IngestError::Parse(e.to_string()))?;
    if raw.format_version != NEWFORM_FORMAT_VERSION {
        return Err(IngestError::Version {
            found: raw.format_version,
            expected: NEWFORM_FORMAT_VERSION,
        });
    }
    let mut seen = BTreeSet::new();
    for r in &raw.newform {
        if !seen.insert(r.label.clone()) {
            return Err(IngestError::DuplicateLabel(r.label.clone()));
        }
    }
    let mut out = raw
        .newform
        .into_iter()
        .map(RawNewform::build)
        .collect::<Result<Vec<_>, _>>()?;
    out.sort_by(|a, b| a.label.cmp(&b.label));
    Ok(out)
}

pub fn load_newforms(path: impl AsRef<Path>) -> Result<Vec<NewformRecord>, IngestError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| IngestError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_newforms(&text)
}
