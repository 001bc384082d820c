use num_bigint::BigInt;
use num_integer::Roots;
use num_traits::Zero;
use serde::Serialize;

use super::{divides_c_factor, EliminateError};
use crate::arith;
use crate::curve::Weierstrass;
use crate::ecfinite::{self, EcFiniteError};
use crate::ingest::NewformRecord;
use crate::quadfield::{PrimeIdeal, QuadInt};

/// `|N(ε⁻¹(q)(q+1)² − a_q(g)²)|`, which `p` must divide when the level is
/// lowered away from `q`.
pub fn lowering_level_bound(q: u64, g: &NewformRecord) -> Result<BigInt, EliminateError> {
    if !arith::is_prime64(q) {
        return Err(EliminateError::BadEll {
            ell: q,
            d: 0,
            reason: "not prime",
        });
    }
    if g.level % q == 0 {
        return Err(EliminateError::DataIntegrity(format!(
            "q = {q} divides the level {} of '{}'",
            g.level, g.label
        )));
    }
    let n = divides_c_factor(q, g)?;
    if n.is_zero() {
        return Err(EliminateError::DataIntegrity(format!(
            "'{}' gives a zero lowering-the-level norm at q = {q}, violating the Ramanujan bound",
            g.label
        )));
    }
    Ok(n)
}

/// `max(N + 1 + ⌈2√N⌉, 4N)`: above this, `a_𝔮(E₁) ≡ a_𝔮(E₂) (mod p)`
/// forces equality.
pub fn pmin(norm: u64) -> u64 {
    let four_n = 4 * norm;
    let s = four_n.sqrt();
    let ceil_two_sqrt = if s * s == four_n { s } else { s + 1 };
    (norm + 1 + ceil_two_sqrt).max(four_n)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "outcome", content = "pmin")]
pub enum TraceOutcome {
    Agree,
    Disagree,
    /// `p ≤ pmin`; a congruence would not force equality.
    Threshold(u64),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceAgreement {
    pub norm: u64,
    pub pmin: u64,
    pub a1: i64,
    /// `None` when `E₂` has bad reduction at `𝔮`.
    pub a2: Option<i64>,
    pub outcome: TraceOutcome,
}

/// Compare `a_𝔮(E₁)` and `a_𝔮(E₂)` for curves over `K = Q(√−d)`.
pub fn trace_agreement(
    e1: &Weierstrass<QuadInt>,
    e2: &Weierstrass<QuadInt>,
    prime: &PrimeIdeal,
    p: u64,
) -> Result<TraceAgreement, EliminateError> {
    let d = e1.a1.field().d();
    let r1 = ecfinite::reduce_model_at(e1, d, prime)?;
    if !r1.is_smooth() {
        return Err(EcFiniteError::Singular(prime.ell()).into());
    }
    let r2 = ecfinite::reduce_model_at(e2, d, prime)?;
    let a1 = ecfinite::count_points(&r1)?;
    let a2 = if r2.is_smooth() {
        Some(ecfinite::count_points(&r2)?)
    } else {
        None
    };
    let norm = prime.norm();
    let pm = pmin(norm);
    let outcome = if p <= pm {
        TraceOutcome::Threshold(pm)
    } else if a2 == Some(a1) {
        TraceOutcome::Agree
    } else {
        TraceOutcome::Disagree
    };
    Ok(TraceAgreement {
        norm,
        pmin: pm,
        a1,
        a2,
        outcome,
    })
}

/// `⌈index / 6⌉` with `index = N·∏_{ℓ | N}(1 + 1/ℓ)`, the weight-2 Sturm
/// bound for `Γ₀(N)`.
pub fn sturm_agreement_bound(level: u64) -> u64 {
    assert!(level >= 1, "level must be positive");
    let index: u64 = arith::factor_u64(level)
        .into_iter()
        .map(|(l, e)| l.pow(e - 1) * (l + 1))
        .product();
    index.div_ceil(6)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eliminate::tests::rational_form;
    use crate::frey::build_frey;
    use crate::quadfield::{splitting_type, QuadField};
    use crate::Family;

    #[test]
    fn pmin_values() {
        assert_eq!(pmin(9), 36);
        assert_eq!(pmin(5), 20);
        assert_eq!(pmin(1), 4);
        // 4N always wins for N ≥ 3
        for n in 3..1000 {
            assert_eq!(pmin(n), 4 * n);
        }
    }

    #[test]
    fn sturm_values() {
        assert_eq!(sturm_agreement_bound(1), 1);
        assert_eq!(sturm_agreement_bound(11), 2);
        assert_eq!(sturm_agreement_bound(38), 10);
        for n in 1..500 {
            assert!(sturm_agreement_bound(2 * n) >= sturm_agreement_bound(n));
        }
    }

    #[test]
    fn lowering_level() {
        assert_eq!(lowering_level_bound(3, &rational_form("a", &[(3, 1)])).unwrap(), BigInt::from(15));
        assert_eq!(lowering_level_bound(3, &rational_form("b", &[(3, 0)])).unwrap(), BigInt::from(16));
        assert!(lowering_level_bound(5, &rational_form("c", &[(3, 0)])).is_err());
    }

    #[test]
    fn reflexive_agreement() {
        let e = build_frey(Family::Quartic, 1, 2, 19, 5).unwrap();
        let k = QuadField::new(19).unwrap();
        for ell in [3u64, 5, 7, 11] {
            for prime in splitting_type(ell, &k).unwrap().ideals().unwrap() {
                match trace_agreement(&e.model, &e.model, &prime, 1_000_003) {
                    Ok(t) => assert_eq!(t.outcome, TraceOutcome::Agree),
                    Err(EliminateError::Curve(EcFiniteError::Singular(_))) => {}
                    Err(other) => panic!("{other:?}"),
                }
                if let Ok(t) = trace_agreement(&e.model, &e.model, &prime, 7) {
                    assert_eq!(t.outcome, TraceOutcome::Threshold(pmin(prime.norm())));
                }
            }
        }
    }
}
