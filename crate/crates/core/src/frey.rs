//! Frey curves over `K = Q(√−d)`, the CM test and reduction types.
//!
//! Quartic family: `E: y² = x³ + 4a·x² + 2(a² + b√−d)·x`.
//! Sextic family: `E: y² + 6b√−d·xy − 4d(a + b³√−d)·y = x³`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::arith;
use crate::curve::{Point, Weierstrass};
use crate::quadfield::{PrimeIdeal, QuadField, QuadFieldError, QuadFrac, QuadInt};
use crate::Family;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FreyError {
    #[error("trivial solution: a·b·c = 0")]
    Trivial,
    #[error("gcd(a, b) = {0}, expected a primitive pair")]
    NotCoprime(i64),
    #[error("p = {0} is not an odd prime")]
    BadExponent(u64),
    #[error(transparent)]
    Field(#[from] QuadFieldError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreyCurve {
    pub family: Family,
    pub d: u64,
    pub a: i64,
    pub b: i64,
    pub p: u64,
    /// `cᵖ = a⁴ + db²` (quartic) or `a² + db⁶` (sextic).
    pub c_power: BigInt,
    pub model: Weierstrass<QuadInt>,
    pub delta: QuadInt,
    pub c4: QuadInt,
    /// `j = j_num / j_den`.
    pub j_num: QuadInt,
    pub j_den: QuadInt,
}

impl FreyCurve {
    pub fn field(&self) -> &QuadField {
        self.delta.field()
    }

    pub fn reduction_type(&self, prime: &PrimeIdeal) -> Result<ReductionData, QuadFieldError> {
        reduction_type(&self.model, prime)
    }
}

/// Build the Frey curve of `family` attached to `(a, b)`.
///
/// The closed-form invariants are checked against the generic evaluator in
/// [`crate::curve`].
pub fn build_frey(family: Family, a: i64, b: i64, d: u64, p: u64) -> Result<FreyCurve, FreyError> {
    if a == 0 || b == 0 {
        return Err(FreyError::Trivial);
    }
    let g = a.gcd(&b);
    if g != 1 {
        return Err(FreyError::NotCoprime(g));
    }
    if p < 3 || !arith::is_prime64(p) {
        return Err(FreyError::BadExponent(p));
    }
    let k = QuadField::new(d)?;
    let (ab, bb, db) = (BigInt::from(a), BigInt::from(b), BigInt::from(d));
    let zero = k.zero();
    let curve = match family {
        Family::Quartic => {
            let c_power = ab.pow(4) + &db * &bb * &bb;
            let gamma = k.from_parts(&ab * &ab, bb.clone());
            let model = Weierstrass::new(
                zero.clone(),
                k.int(&ab * 4),
                zero.clone(),
                gamma.scale(&2.into()),
                zero,
            );
            let delta = gamma.scale(&(BigInt::from(512) * &c_power));
            let lam = k.from_parts(&ab * &ab * 5, &bb * -3);
            let c4 = lam.scale(&32.into());
            let j_num = lam.pow(3).scale(&64.into());
            let j_den = gamma.scale(&c_power);
            FreyCurve {
                family,
                d,
                a,
                b,
                p,
                c_power,
                model,
                delta,
                c4,
                j_num,
                j_den,
            }
        }
        Family::Sextic => {
            let c_power = &ab * &ab + &db * bb.pow(6);
            let a1 = k.from_parts(0, &bb * 6);
            let inner = k.from_parts(ab.clone(), bb.pow(3));
            let a3 = inner.scale(&(&db * -4));
            let model = Weierstrass::new(a1.clone(), zero.clone(), a3.clone(), zero.clone(), zero);
            let delta = a3.pow(3) * (a1.pow(3) - a3.scale(&27.into()));
            debug_assert_eq!(
                delta,
                inner.pow(2).scale(&(BigInt::from(-6912) * db.pow(4) * &c_power))
            );
            let c4 = model.c4();
            let j_num = c4.pow(3);
            FreyCurve {
                family,
                d,
                a,
                b,
                p,
                c_power,
                model,
                delta: delta.clone(),
                c4,
                j_num,
                j_den: delta,
            }
        }
    };
    assert_eq!(curve.delta, curve.model.discriminant(), "closed-form Δ");
    assert_eq!(curve.c4, curve.model.c4(), "closed-form c4");
    assert_eq!(
        curve.c4.pow(3) * curve.j_den.clone(),
        curve.j_num.clone() * curve.delta.clone(),
        "c4³ = j·Δ"
    );
    Ok(curve)
}

/// The point `(0, 0)` of the sextic curve as an element of `E(K)`.
pub fn sextic_torsion_point(curve: &FreyCurve) -> Point<QuadFrac> {
    let k = curve.field();
    Point::Affine(QuadFrac::from_int(k.zero()), QuadFrac::from_int(k.zero()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum CmVerdict {
    NoCm,
    /// `175a⁴ = 81db²` holds; the curve could have CM only in this case.
    CmCandidate {
        #[serde(with = "arith::decimal")]
        c_power: BigInt,
        /// Integers `c` with `cᵖ = c_power` (empty when there are none).
        #[serde(with = "arith::decimal::vec")]
        c_roots: Vec<BigInt>,
        /// The exponent for which `c_power` is a perfect power with `p > 1`
        /// minimal, i.e. the forced value of `p`.
        forced_p: Option<u32>,
    },
}

impl CmVerdict {
    pub fn is_candidate(&self) -> bool {
        matches!(self, CmVerdict::CmCandidate { .. })
    }
}

/// CM exclusion: `j` of the quartic curve is a CM value only if
/// `175a⁴ = 81db²`.
pub fn cm_check(a: i64, b: i64, d: u64, p: u64) -> CmVerdict {
    let (ab, bb, db) = (BigInt::from(a), BigInt::from(b), BigInt::from(d));
    if BigInt::from(175) * ab.pow(4) != BigInt::from(81) * &db * &bb * &bb {
        return CmVerdict::NoCm;
    }
    let c_power = ab.pow(4) + &db * &bb * &bb;
    let c_roots = integer_roots(&c_power, p);
    let forced_p = (2..=c_power.bits() as u32).find(|&e| !integer_roots(&c_power, e as u64).is_empty());
    CmVerdict::CmCandidate {
        c_power,
        c_roots,
        forced_p,
    }
}

fn integer_roots(n: &BigInt, e: u64) -> Vec<BigInt> {
    if e == 0 || e > u32::MAX as u64 {
        return Vec::new();
    }
    let e = e as u32;
    let r = n.abs().nth_root(e);
    if r.pow(e) != n.abs() {
        return Vec::new();
    }
    match (n.is_negative(), e % 2 == 0) {
        (true, true) => Vec::new(),
        (true, false) => vec![-r],
        (false, true) if !r.is_zero() => vec![-r.clone(), r],
        _ => vec![r],
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ReductionKind {
    Good,
    Multiplicative,
    Additive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ReductionData {
    pub kind: ReductionKind,
    /// Valuations on the given model.
    pub v_delta: u32,
    /// `None` when `c4 = 0`.
    pub v_c4: Option<u32>,
    /// Valuations after removing `u¹²`, `u⁴` while both stay integral.
    pub v_delta_min: u32,
    pub v_c4_min: Option<u32>,
}

/// Classify the reduction of `model` at `prime` from `v(Δ)` and `v(c4)`.
pub fn reduction_type(
    model: &Weierstrass<QuadInt>,
    prime: &PrimeIdeal,
) -> Result<ReductionData, QuadFieldError> {
    let ell = prime.ell();
    match prime {
        PrimeIdeal::Inert { .. } => {}
        PrimeIdeal::Ramified { .. } if ell <= 3 => {
            return Err(QuadFieldError::UnsupportedPlace(ell, "ramified prime above 2 or 3"))
        }
        PrimeIdeal::Split { .. } if ell == 2 => {
            return Err(QuadFieldError::UnsupportedPlace(2, "split prime above 2"))
        }
        _ => {}
    }
    let v_delta = prime
        .valuation(&model.discriminant())?
        .expect("singular Weierstrass model");
    let v_c4 = prime.valuation(&model.c4())?;
    let (mut vd, mut vc) = (v_delta, v_c4);
    while vd >= 12 && vc.is_none_or(|v| v >= 4) {
        vd -= 12;
        vc = vc.map(|v| v - 4);
    }
    let kind = if vd == 0 {
        ReductionKind::Good
    } else if vc == Some(0) {
        ReductionKind::Multiplicative
    } else {
        ReductionKind::Additive
    };
    Ok(ReductionData {
        kind,
        v_delta,
        v_c4,
        v_delta_min: vd,
        v_c4_min: vc,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadfield::splitting_type;

    #[test]
    fn quartic_discriminant_example() {
        let e = build_frey(Family::Quartic, 1, 1, 19, 5).unwrap();
        let k = e.field();
        assert_eq!(e.c_power, BigInt::from(20));
        assert_eq!(e.delta, k.from_parts(512 * 20, 512 * 20));
        // y² = x³ + Ax² + Bx has Δ = 16B²(A² − 4B)
        let (a2, a4) = (e.model.a2.clone(), e.model.a4.clone());
        let generic = (a4.clone() * a4.clone()).scale(&16.into()) * (a2.clone() * a2 - a4.scale(&4.into()));
        assert_eq!(e.delta, generic);
    }

    #[test]
    fn quartic_j_denominator() {
        // (3, 5, 7) with p = 5 only to pass the exponent gate
        let e = build_frey(Family::Quartic, 3, 5, 7, 5).unwrap();
        assert_eq!(e.c_power, BigInt::from(256));
        assert_eq!(e.j_den, e.field().from_parts(9 * 256, 5 * 256));
    }

    #[test]
    fn quartic_delta_factorization_grid() {
        for d in [1u64, 2, 7, 19, 43] {
            let k = QuadField::new(d).unwrap();
            for a in -30i64..=30 {
                for b in -30i64..=30 {
                    if a == 0 || b == 0 || a.gcd(&b) != 1 {
                        continue;
                    }
                    let e = build_frey(Family::Quartic, a, b, d, 3).unwrap();
                    let c = BigInt::from(a).pow(4) + BigInt::from(d) * b * b;
                    let expected = k.from_parts(a * a, b).scale(&(c * 512));
                    assert_eq!(e.delta, expected);
                    assert_eq!(e.c4.pow(3) * e.j_den.clone(), e.j_num.clone() * e.delta.clone());
                }
            }
        }
    }

    #[test]
    fn sextic_discriminant_and_torsion() {
        for (a, b, d) in [(1i64, 1i64, 19u64), (2, 3, 43), (-5, 2, 19), (7, -1, 67)] {
            let e = build_frey(Family::Sextic, a, b, d, 7).unwrap();
            let k = e.field();
            let inner = k.from_parts(a, BigInt::from(b).pow(3));
            let c = BigInt::from(a * a) + BigInt::from(d) * BigInt::from(b).pow(6);
            let expected = inner.pow(2).scale(&(BigInt::from(-6912) * BigInt::from(d).pow(4) * c));
            assert_eq!(e.delta, expected);

            let over_k = e.model.map(|c| QuadFrac::from_int(c.clone()));
            let p = sextic_torsion_point(&e);
            if let Point::Affine(x, y) = &p {
                assert!(over_k.contains(x, y));
            }
            assert_ne!(over_k.multiply(&p, 2), Point::Infinity);
            assert_eq!(over_k.multiply(&p, 3), Point::Infinity);
        }
    }

    #[test]
    fn build_errors() {
        assert_eq!(build_frey(Family::Quartic, 0, 1, 19, 5), Err(FreyError::Trivial));
        assert_eq!(build_frey(Family::Quartic, 2, 4, 19, 5), Err(FreyError::NotCoprime(2)));
        assert_eq!(build_frey(Family::Quartic, 1, 1, 19, 2), Err(FreyError::BadExponent(2)));
        assert_eq!(build_frey(Family::Quartic, 1, 1, 19, 9), Err(FreyError::BadExponent(9)));
        assert!(matches!(
            build_frey(Family::Sextic, 1, 1, 12, 5),
            Err(FreyError::Field(QuadFieldError::NotSquarefree(12)))
        ));
    }

    #[test]
    fn cm_examples() {
        match cm_check(3, 5, 7, 2) {
            CmVerdict::CmCandidate {
                c_power,
                c_roots,
                forced_p,
            } => {
                assert_eq!(c_power, BigInt::from(256));
                assert_eq!(c_roots, vec![BigInt::from(-16), BigInt::from(16)]);
                assert_eq!(forced_p, Some(2));
            }
            v => panic!("{v:?}"),
        }
        assert_eq!(cm_check(1, 1, 19, 5), CmVerdict::NoCm);
        assert_eq!(cm_check(5, 3, 7, 3), CmVerdict::NoCm);
        assert!(cm_check(-3, -5, 7, 3).is_candidate());
    }

    #[test]
    fn reduction_examples() {
        // c⁵ ← 20: the prime above 5 dividing 1 + √−19 is multiplicative
        let e = build_frey(Family::Quartic, 1, 1, 19, 5).unwrap();
        let ideals = splitting_type(5, e.field()).unwrap().ideals().unwrap();
        let kinds: Vec<_> = ideals.iter().map(|p| e.reduction_type(p).unwrap().kind).collect();
        assert!(kinds.contains(&ReductionKind::Multiplicative));
        for p in &ideals {
            assert_ne!(e.reduction_type(p).unwrap().kind, ReductionKind::Additive);
        }
        // good at √−19 when 19 ∤ c
        let r = e.reduction_type(&PrimeIdeal::Ramified { ell: 19 }).unwrap();
        assert_eq!(r.kind, ReductionKind::Good);
        // good away from 2c
        let r = e.reduction_type(&PrimeIdeal::Inert { ell: 3 }).unwrap();
        assert_eq!(r.kind, ReductionKind::Good);
        // at inert 2 with a = b = 1: v(Δ) = 12, v(c4) = 6, so u = 2 is removed
        let r = e.reduction_type(&PrimeIdeal::Inert { ell: 2 }).unwrap();
        assert_eq!((r.v_delta, r.v_c4, r.v_delta_min), (12, Some(6), 0));
        // a even: v(Δ) = 9 and v(c4) ≥ 5
        let e2 = build_frey(Family::Quartic, 2, 1, 19, 5).unwrap();
        let r = e2.reduction_type(&PrimeIdeal::Inert { ell: 2 }).unwrap();
        assert_eq!(r.v_delta, 9);
        assert_eq!(r.kind, ReductionKind::Additive);

        let s = build_frey(Family::Sextic, 1, 1, 19, 5).unwrap();
        let r = s.reduction_type(&PrimeIdeal::Ramified { ell: 19 }).unwrap();
        assert_eq!(r.kind, ReductionKind::Additive);

        let k7 = build_frey(Family::Quartic, 1, 1, 7, 5).unwrap();
        assert!(k7.reduction_type(&PrimeIdeal::Ramified { ell: 7 }).is_ok());
        let k3 = build_frey(Family::Quartic, 1, 1, 3, 5).unwrap();
        assert!(k3.reduction_type(&PrimeIdeal::Ramified { ell: 3 }).is_err());
    }

    #[test]
    fn minimalization_removes_twelfth_powers() {
        // scaling by u = 3 multiplies Δ by 3¹² and c4 by 3⁴
        let k = QuadField::new(19).unwrap();
        let model = Weierstrass::new(k.zero(), k.int(4 * 9), k.zero(), k.int(2 * 81), k.zero());
        let r = reduction_type(&model, &PrimeIdeal::Inert { ell: 3 }).unwrap();
        assert_eq!(r.v_delta, 12);
        assert_eq!(r.v_delta_min, 0);
        assert_eq!(r.kind, ReductionKind::Good);
    }
}
