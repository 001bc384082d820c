//! Mazur-style elimination of newforms for `x⁴ + dy² = zᵖ`.
//!
//! For an auxiliary prime `ℓ ∤ 2d` every residue pair `(ā, b̄)` gives a
//! factor `B(ℓ, g; ā, b̄, c̄)` that `p` must divide; `p` divides the product
//! over `S_ℓ`, and hence the gcd of these products over several `ℓ`.

mod bounds;

pub use bounds::{
    lowering_level_bound, pmin, sturm_agreement_bound, trace_agreement, TraceAgreement, TraceOutcome,
};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

use crate::arith;
use crate::ecfinite::{self, EcFiniteError, FqElement, SquareTable};
use crate::ingest::NewformRecord;
use crate::numfield::{NumFieldError, NumberFieldElement};
use crate::quadfield::{splitting_type, QuadField, QuadFieldError, SplittingKind};
use crate::Family;

/// Primes at or below this are never claimed eliminated.
pub const SMALL_PRIME_FLOOR: u64 = 13;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EliminateError {
    #[error("ℓ = {ell} is not admissible for d = {d}: {reason}")]
    BadEll { ell: u64, d: u64, reason: &'static str },
    #[error("the set of auxiliary primes is empty")]
    EmptyEllSet,
    #[error("newform '{label}' has no a_{ell}")]
    MissingCoefficient { label: String, ell: u64 },
    #[error("data integrity: {0}")]
    DataIntegrity(String),
    #[error(transparent)]
    NumField(#[from] NumFieldError),
    #[error(transparent)]
    Field(#[from] QuadFieldError),
    #[error(transparent)]
    Curve(#[from] EcFiniteError),
}

/// A point of `S_ℓ`: residues with `c̄ = ā⁴ + d·b̄²`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SolutionTriple {
    pub a_bar: u64,
    pub b_bar: u64,
    pub c_bar: u64,
    pub divides_c: bool,
}

fn check_ell(ell: u64, d: u64) -> Result<(), EliminateError> {
    let bad = |reason| Err(EliminateError::BadEll { ell, d, reason });
    if !arith::is_prime64(ell) {
        return bad("not prime");
    }
    if ell == 2 {
        return bad("ℓ must be odd");
    }
    if d % ell == 0 {
        return bad("ℓ divides d");
    }
    Ok(())
}

/// `S_ℓ`: all nonzero `(ā, b̄) ∈ F_ℓ²`, with `c̄` fixed by `ā⁴ + db̄²` (the
/// `p`-th power map being a bijection of `F_ℓ`). Always `ℓ² − 1` triples.
pub fn enumerate_s_ell(ell: u64, d: u64) -> Result<Vec<SolutionTriple>, EliminateError> {
    check_ell(ell, d)?;
    let dm = d % ell;
    let mut out = Vec::with_capacity((ell * ell - 1) as usize);
    for a in 0..ell {
        for b in 0..ell {
            if a == 0 && b == 0 {
                continue;
            }
            let c = (arith::mod_pow(a, 4, ell) + arith::mod_mul(dm, arith::mod_mul(b, b, ell), ell)) % ell;
            out.push(SolutionTriple {
                a_bar: a,
                b_bar: b,
                c_bar: c,
                divides_c: c == 0,
            });
        }
    }
    Ok(out)
}

/// Which row of the bound a triple falls in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FactorCase {
    Split,
    Inert,
    DividesC,
}

/// Precomputed data for one `ℓ`, shared by all triples and forms.
#[derive(Clone, Debug)]
pub struct EllContext {
    pub ell: u64,
    pub d: u64,
    pub kind: SplittingKind,
    /// Image of `√−d` in the residue field of the chosen prime above `ℓ`
    /// (for split `ℓ`, the prime with the smaller root).
    pub sqrt_minus_d: FqElement,
    table: SquareTable,
}

impl EllContext {
    pub fn new(ell: u64, d: u64) -> Result<Self, EliminateError> {
        check_ell(ell, d)?;
        let k = QuadField::new(d)?;
        let sp = splitting_type(ell, &k)?;
        let prime = sp.ideals()?[0];
        let s = ecfinite::residue_sqrt_minus_d(d, &prime)?;
        let table = SquareTable::new(ell, s.degree())?;
        Ok(Self {
            ell,
            d,
            kind: sp.kind,
            sqrt_minus_d: s,
            table,
        })
    }

    /// Trace of Frobenius of the reduced Frey curve at the chosen prime:
    /// over `F_ℓ` when split, over `F_ℓ²` when inert.
    pub fn frey_trace(&self, t: &SolutionTriple) -> Result<i64, EliminateError> {
        let deg = self.sqrt_minus_d.degree();
        let a = FqElement::from_int(self.ell, deg, t.a_bar as i64);
        let b = FqElement::from_int(self.ell, deg, t.b_bar as i64);
        let curve = ecfinite::frey_model_over(Family::Quartic, a, b, self.d, self.sqrt_minus_d);
        match ecfinite::count_points_with(&curve, &self.table) {
            Ok(a) => Ok(a),
            Err(EcFiniteError::Singular(_)) if !t.divides_c => {
                panic!("reduced Frey curve singular with ℓ ∤ c̄ at {t:?}: this is a bug")
            }
            Err(e) => Err(e.into()),
        }
    }
}

fn int_norm(x: &NumberFieldElement, what: &str) -> Result<BigInt, EliminateError> {
    let n: BigRational = x.norm();
    if !n.is_integer() {
        return Err(EliminateError::DataIntegrity(format!("{what} has non-integral norm {n}")));
    }
    Ok(n.to_integer().abs())
}

fn coefficient<'a>(g: &'a NewformRecord, ell: u64) -> Result<&'a NumberFieldElement, EliminateError> {
    g.ap(ell).ok_or_else(|| EliminateError::MissingCoefficient {
        label: g.label.clone(),
        ell,
    })
}

/// `|N(ε⁻¹(ℓ)(ℓ+1)² − a_ℓ(g)²)|`, the row used when `ℓ | c̄`.
pub fn divides_c_factor(ell: u64, g: &NewformRecord) -> Result<BigInt, EliminateError> {
    let a = coefficient(g, ell)?;
    let einv = g.eps.inverse_value(ell)?;
    let sq = BigRational::from_integer(BigInt::from(ell + 1).pow(2));
    int_norm(&(einv.scale(&sq) - a * a), "ε⁻¹(ℓ)(ℓ+1)² − a_ℓ(g)²")
}

/// The factor `B(ℓ, g; ā, b̄, c̄)`, with the unknown `ϰ` replaced by the
/// product over all its admissible values:
///
/// * split: `∏_{ζ² = ε(ℓ)} (a_𝔩(E)ζ − a_ℓ(g)) = a_ℓ(g)² − a_𝔩(E)²ε(ℓ)`
/// * inert: `∏_{ζ = ±ε(ℓ)} (a_ℓ(g)² − ζ·a(E) − 2ℓε(ℓ))`
///   `= (a_ℓ(g)² − 2ℓε(ℓ))² − a(E)²ε(ℓ)²`
/// * `ℓ | c̄`: `ε⁻¹(ℓ)(ℓ+1)² − a_ℓ(g)²`
///
/// and the absolute value of the norm to `Q` taken.
pub fn mazur_factor(ctx: &EllContext, t: &SolutionTriple, g: &NewformRecord) -> Result<BigInt, EliminateError> {
    Ok(mazur_factor_detail(ctx, t, g)?.1)
}

fn mazur_factor_detail(
    ctx: &EllContext,
    t: &SolutionTriple,
    g: &NewformRecord,
) -> Result<(FactorCase, BigInt), EliminateError> {
    let ell = ctx.ell;
    if t.divides_c {
        return Ok((FactorCase::DividesC, divides_c_factor(ell, g)?));
    }
    let ag = coefficient(g, ell)?;
    let eps = g.eps.value(ell)?;
    let ae = BigRational::from_integer(ctx.frey_trace(t)?.into());
    let ag2 = ag * ag;
    Ok(match ctx.kind {
        SplittingKind::Split => {
            let x = ag2 - eps.scale(&(&ae * &ae));
            (FactorCase::Split, int_norm(&x, "split factor")?)
        }
        SplittingKind::Inert => {
            let two_ell = BigRational::from_integer(BigInt::from(2 * ell));
            let u = ag2 - eps.scale(&two_ell);
            let x = &u * &u - (eps * eps).scale(&(&ae * &ae));
            (FactorCase::Inert, int_norm(&x, "inert factor")?)
        }
        SplittingKind::Ramified => unreachable!("ℓ ∤ d"),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimePower {
    #[serde(with = "arith::decimal")]
    pub prime: BigInt,
    pub exponent: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EllEntry {
    pub ell: u64,
    pub splitting: SplittingKind,
    pub triples: usize,
    pub divides_c_triples: usize,
    pub zero_factors: usize,
    /// `∏ B(ℓ, g; ·)` over `S_ℓ`.
    #[serde(with = "arith::decimal")]
    pub product: BigInt,
    /// Factorization of `product` (empty when it is 0 or 1).
    pub factorization: Vec<PrimePower>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Verdict {
    /// Every `p` above the out-of-reach bound outside the caveat set is
    /// excluded, except the surviving primes listed in the entry.
    Bounded,
    /// All products vanish: this `ℓ`-set cannot separate `g` from the
    /// Frey curve.
    NotEliminable,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormEntry {
    pub label: String,
    pub level: u64,
    pub coefficient_field_degree: usize,
    pub per_ell: Vec<EllEntry>,
    /// gcd of the nonzero per-ℓ products (0 if all vanish).
    #[serde(with = "arith::decimal")]
    pub gcd: BigInt,
    pub gcd_factorization: Vec<PrimePower>,
    /// Primes dividing the gcd.
    #[serde(with = "arith::decimal::vec")]
    pub surviving_primes: Vec<BigInt>,
    /// Primes `p | ℓ − 1` (where `x ↦ xᵖ` is not a bijection of `F_ℓ`) and
    /// `p = ℓ` itself, for the ℓ used.
    pub caveat_primes: Vec<u64>,
    /// Primes `p ≤ out_of_reach_bound` are never claimed.
    pub out_of_reach_bound: u64,
    pub verdict: Verdict,
    pub conclusion: String,
}

/// The persisted result of an elimination run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EliminationCertificate {
    pub d: u64,
    pub ells: Vec<u64>,
    pub irreducibility_threshold: u64,
    /// SHA-256 of the newform table the forms came from, if any.
    pub input_digest: Option<String>,
    pub forms: Vec<FormEntry>,
    /// Informational blocks (e.g. inner-twist descriptors).
    #[serde(default)]
    pub annotations: BTreeMap<String, serde_json::Value>,
}

fn factorization_of_factors(factors: &[BigInt]) -> BTreeMap<BigInt, u32> {
    let mut acc: BTreeMap<BigInt, u32> = BTreeMap::new();
    for f in factors {
        for (p, e) in arith::factor_big(f) {
            *acc.entry(BigInt::from(p)).or_default() += e;
        }
    }
    acc
}

fn to_powers(m: &BTreeMap<BigInt, u32>) -> Vec<PrimePower> {
    m.iter()
        .map(|(p, &e)| PrimePower {
            prime: p.clone(),
            exponent: e,
        })
        .collect()
}

/// Run elimination of `g` over the `ℓ`-set.
///
/// Each factor is factored on its own, so the per-ℓ product never has to
/// be factored as a whole. Output is independent of the rayon pool size.
pub fn mazur_bound(
    ells: &[u64],
    d: u64,
    g: &NewformRecord,
    irreducibility_threshold: u64,
) -> Result<FormEntry, EliminateError> {
    let contexts = ells
        .iter()
        .map(|&ell| EllContext::new(ell, d))
        .collect::<Result<Vec<_>, _>>()?;
    mazur_bound_with(&contexts, g, irreducibility_threshold)
}

pub fn mazur_bound_with(
    contexts: &[EllContext],
    g: &NewformRecord,
    irreducibility_threshold: u64,
) -> Result<FormEntry, EliminateError> {
    if contexts.is_empty() {
        return Err(EliminateError::EmptyEllSet);
    }
    let mut ells: Vec<&EllContext> = contexts.iter().collect();
    ells.sort_by_key(|c| c.ell);
    ells.dedup_by_key(|c| c.ell);

    let mut per_ell = Vec::new();
    let mut nonzero_maps: Vec<BTreeMap<BigInt, u32>> = Vec::new();
    for ctx in &ells {
        let triples = enumerate_s_ell(ctx.ell, ctx.d)?;
        let factors: Vec<(FactorCase, BigInt)> = triples
            .par_iter()
            .map(|t| mazur_factor_detail(ctx, t, g))
            .collect::<Result<_, _>>()?;
        let zero_factors = factors.iter().filter(|(_, f)| f.is_zero()).count();
        let product: BigInt = if zero_factors > 0 {
            BigInt::zero()
        } else {
            factors.iter().map(|(_, f)| f).product()
        };
        let factorization = if zero_factors > 0 {
            BTreeMap::new()
        } else {
            // distinct factor values repeat a lot; factor each once
            let mut counts: BTreeMap<&BigInt, u32> = BTreeMap::new();
            for (_, f) in &factors {
                *counts.entry(f).or_default() += 1;
            }
            let distinct: Vec<&BigInt> = counts.keys().copied().collect();
            let per: Vec<BTreeMap<BigInt, u32>> = distinct
                .par_iter()
                .map(|f| factorization_of_factors(std::slice::from_ref(*f)))
                .collect();
            let mut acc: BTreeMap<BigInt, u32> = BTreeMap::new();
            for (f, m) in distinct.iter().zip(per) {
                for (p, e) in m {
                    *acc.entry(p).or_default() += e * counts[f];
                }
            }
            acc
        };
        if !product.is_zero() {
            nonzero_maps.push(factorization.clone());
        }
        per_ell.push(EllEntry {
            ell: ctx.ell,
            splitting: ctx.kind,
            triples: triples.len(),
            divides_c_triples: triples.iter().filter(|t| t.divides_c).count(),
            zero_factors,
            product,
            factorization: to_powers(&factorization),
        });
    }

    let mut gcd_map: BTreeMap<BigInt, u32> = BTreeMap::new();
    if let Some((first, rest)) = nonzero_maps.split_first() {
        for (p, &e) in first {
            let m = rest.iter().map(|m| m.get(p).copied().unwrap_or(0)).fold(e, u32::min);
            if m > 0 {
                gcd_map.insert(p.clone(), m);
            }
        }
    }
    let gcd = if nonzero_maps.is_empty() {
        BigInt::zero()
    } else {
        gcd_map.iter().map(|(p, &e)| p.pow(e)).product()
    };
    debug_assert!(per_ell
        .iter()
        .filter(|e| !e.product.is_zero())
        .fold(BigInt::zero(), |acc, e| acc.gcd(&e.product))
        == gcd);

    let mut caveats = BTreeSet::new();
    for ctx in &ells {
        caveats.insert(ctx.ell);
        for (p, _) in arith::factor_u64(ctx.ell - 1) {
            caveats.insert(p);
        }
    }
    let caveat_primes: Vec<u64> = caveats.into_iter().collect();
    let bound = SMALL_PRIME_FLOOR.max(irreducibility_threshold);
    let surviving_primes: Vec<BigInt> = gcd_map.keys().cloned().collect();
    let ell_list = ells.iter().map(|c| c.ell.to_string()).collect::<Vec<_>>().join(", ");

    let (verdict, conclusion) = if nonzero_maps.is_empty() {
        (
            Verdict::NotEliminable,
            format!(
                "not eliminable by ℓ ∈ {{{ell_list}}}: every product vanishes, so g is congruent to the \
                 Frey data at each ℓ used"
            ),
        )
    } else {
        let big: Vec<String> = surviving_primes
            .iter()
            .filter(|p| *p > &BigInt::from(bound) && !caveat_primes.iter().any(|c| BigInt::from(*c) == **p))
            .map(ToString::to_string)
            .collect();
        let text = if big.is_empty() {
            format!(
                "g is eliminated for every prime p > {bound} outside the caveat set {caveat_primes:?} \
                 using ℓ ∈ {{{ell_list}}}"
            )
        } else {
            format!(
                "g survives for p ∈ {{{}}}; all other primes p > {bound} outside the caveat set \
                 {caveat_primes:?} are eliminated using ℓ ∈ {{{ell_list}}}",
                big.join(", ")
            )
        };
        (Verdict::Bounded, text)
    };

    Ok(FormEntry {
        label: g.label.clone(),
        level: g.level,
        coefficient_field_degree: g.degree(),
        per_ell,
        gcd,
        gcd_factorization: to_powers(&gcd_map),
        surviving_primes,
        caveat_primes,
        out_of_reach_bound: bound,
        verdict,
        conclusion,
    })
}

/// Run [`mazur_bound`] for every form and assemble a certificate. Forms
/// are processed in label order.
pub fn eliminate_all(
    ells: &[u64],
    d: u64,
    forms: &[NewformRecord],
    irreducibility_threshold: u64,
    input_digest: Option<String>,
) -> Result<EliminationCertificate, EliminateError> {
    if ells.is_empty() {
        return Err(EliminateError::EmptyEllSet);
    }
    let mut sorted_ells = ells.to_vec();
    sorted_ells.sort_unstable();
    sorted_ells.dedup();
    let contexts = sorted_ells
        .iter()
        .map(|&ell| EllContext::new(ell, d))
        .collect::<Result<Vec<_>, _>>()?;
    let mut forms: Vec<&NewformRecord> = forms.iter().collect();
    forms.sort_by(|a, b| a.label.cmp(&b.label));
    let entries = forms
        .iter()
        .map(|g| mazur_bound_with(&contexts, g, irreducibility_threshold))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(EliminationCertificate {
        d,
        ells: sorted_ells,
        irreducibility_threshold,
        input_digest,
        forms: entries,
        annotations: BTreeMap::new(),
    })
}

impl EliminationCertificate {
    pub fn is_consistent(&self) -> bool {
        self.forms.iter().all(|f| {
            let nonzero: Vec<&BigInt> = f.per_ell.iter().map(|e| &e.product).filter(|p| !p.is_zero()).collect();
            let g = nonzero.iter().fold(BigInt::zero(), |acc, p| acc.gcd(p));
            g == f.gcd && nonzero.iter().all(|p| (*p % f.gcd.clone().max(BigInt::one())).is_zero())
        })
    }
}
