//! Inner twists and coefficient-field structure of the newform `f`
//! attached to the Frey curve, where `ϰ` has 2-power order `M` and
//! `ϰ² = ε∘N`.
//!
//! Characters are symbolic: `δ_K^a·ε^k`.

use serde::Serialize;
use std::fmt;
use thiserror::Error;

use crate::arith;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TwistError {
    #[error("M = {0} is not a power of two")]
    NotPowerOfTwo(u64),
    #[error("|a_p(E)| = {ap} exceeds 2p = {}", 2 * p)]
    Hasse { ap: i64, p: u64 },
    #[error("{0} is not prime")]
    NotPrime(u64),
}

fn check_m(m: u64) -> Result<(), TwistError> {
    if arith::is_power_of_two(m) {
        Ok(())
    } else {
        Err(TwistError::NotPowerOfTwo(m))
    }
}

/// `δ_K^{delta}·ε^{eps_exponent}`, exponent reduced modulo the order of
/// `ε` bound `max(M/2, 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct CharLabel {
    pub delta: bool,
    pub eps_exponent: u64,
}

impl fmt::Display for CharLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let eps = match self.eps_exponent {
            0 => None,
            1 => Some("ε".to_string()),
            k => Some(format!("ε^{k}")),
        };
        match (self.delta, eps) {
            (false, None) => f.write_str("trivial"),
            (true, None) => f.write_str("δ_K"),
            (false, Some(e)) => f.write_str(&e),
            (true, Some(e)) => write!(f, "δ_K·{e}"),
        }
    }
}

/// The inner twist `(σ_j, χ)` (with `σ_j` also acting on `F` when
/// `flips_f`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct InnerTwist {
    pub j: u64,
    pub flips_f: bool,
    pub character: CharLabel,
}

impl InnerTwist {
    pub fn label(&self) -> String {
        self.character.to_string()
    }
}

fn eps_modulus(m: u64) -> u64 {
    (m / 2).max(1)
}

fn twist(m: u64, j: u64, flips_f: bool) -> InnerTwist {
    InnerTwist {
        j,
        flips_f,
        character: CharLabel {
            delta: flips_f,
            eps_exponent: ((j - 1) / 2) % eps_modulus(m),
        },
    }
}

/// `Γ_f`: one twist per `j ∈ (Z/M)^×`, doubled by `δ_K` when `F` is
/// nontrivial.
pub fn inner_twist_group(m: u64, f_nontrivial: bool) -> Result<Vec<InnerTwist>, TwistError> {
    check_m(m)?;
    let units: Vec<u64> = if m <= 2 { vec![1] } else { (1..m).step_by(2).collect() };
    let mut out = Vec::new();
    for flip in [false, true] {
        if flip && !f_nontrivial {
            continue;
        }
        out.extend(units.iter().map(|&j| twist(m, j, flip)));
    }
    Ok(out)
}

/// `(σ_{j₁}, χ₁)·(σ_{j₂}, χ₂) = (σ_{j₁j₂}, χ₁·σ_{j₁}(χ₂))`, where
/// `σ_{j}(ε) = ε^j` and `δ_K` is fixed.
pub fn compose(m: u64, x: &InnerTwist, y: &InnerTwist) -> InnerTwist {
    let em = eps_modulus(m);
    let j = if m <= 2 { 1 } else { (x.j * y.j) % m };
    InnerTwist {
        j,
        flips_f: x.flips_f ^ y.flips_f,
        character: CharLabel {
            delta: x.character.delta ^ y.character.delta,
            eps_exponent: (x.character.eps_exponent + x.j * y.character.eps_exponent) % em,
        },
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoefficientFieldInfo {
    /// `+1` or `−1`: which sign of `a_p(f)² = ε(p)(±a_p(E) + 2p)`.
    pub sign: i8,
    pub m: u64,
    pub eta: i64,
    /// `[K_f : Q(ζ_M)]`.
    pub degree_over_cyclotomic: u8,
    pub galois_group_shape: String,
    /// `a_p(f) = 0` for this sign; then `a_p(f)` adds nothing to the field.
    pub ap_vanishes: bool,
}

/// A positive integer is a square in `Q(ζ_M)` (`M` a power of 2) iff it is
/// a square, or `M ≥ 8` and it is twice a square (`√2 ∈ Q(ζ₈)`).
pub fn is_square_in_cyclotomic(n: u64, m: u64) -> bool {
    let sq = |x: u64| x.isqrt() * x.isqrt() == x;
    sq(n) || (m >= 8 && n % 2 == 0 && sq(n / 2))
}

/// Degree of `K_f = Q(ζ_M, a_p(f))` over `Q(ζ_M)` for each sign, using
/// that `ε(p)` is a square in `Q(ζ_M)`.
pub fn coefficient_field_info(ap_e: i64, p: u64, m: u64) -> Result<Vec<CoefficientFieldInfo>, TwistError> {
    check_m(m)?;
    if !arith::is_prime64(p) {
        return Err(TwistError::NotPrime(p));
    }
    if ap_e.unsigned_abs() > 2 * p {
        return Err(TwistError::Hasse { ap: ap_e, p });
    }
    let units = if m <= 2 { "trivial".to_string() } else { format!("(Z/{m})^×") };
    Ok([1i8, -1]
        .into_iter()
        .map(|sign| {
            let eta = sign as i64 * ap_e + 2 * p as i64;
            let degree = if is_square_in_cyclotomic(eta as u64, m) { 1 } else { 2 };
            let shape = if degree == 2 {
                if m <= 2 {
                    "Z/2".to_string()
                } else {
                    format!("Z/2 × {units}")
                }
            } else {
                units.clone()
            };
            CoefficientFieldInfo {
                sign,
                m,
                eta,
                degree_over_cyclotomic: degree,
                galois_group_shape: shape,
                ap_vanishes: eta == 0,
            }
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FieldDiagram {
    pub m: u64,
    /// `[K̄^ϰ : K·Q̄^ε]`.
    pub index_over_k_eps: u64,
    /// Admissible `[Q̄^ε : Q]`: the proper divisors of `M`.
    pub eps_field_degrees: Vec<u64>,
    /// `Q̄^ε ∩ K = Q`.
    pub eps_field_meets_k_in_q: bool,
    pub degenerate: bool,
    pub note: String,
}

pub fn field_diagram(m: u64) -> Result<FieldDiagram, TwistError> {
    check_m(m)?;
    if m == 1 {
        return Ok(FieldDiagram {
            m,
            index_over_k_eps: 1,
            eps_field_degrees: vec![1],
            eps_field_meets_k_in_q: true,
            degenerate: true,
            note: "ϰ trivial: every layer collapses to K/Q".into(),
        });
    }
    let degrees: Vec<u64> = (0..m.trailing_zeros()).map(|e| 1u64 << e).collect();
    Ok(FieldDiagram {
        m,
        index_over_k_eps: 2,
        eps_field_degrees: degrees,
        eps_field_meets_k_in_q: true,
        degenerate: false,
        note: "squareness of η·ε(p) in Q(ζ_M) is reduced to squareness of η, since ε(p) is a square there".into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_groups() {
        let g = inner_twist_group(4, false).unwrap();
        let v: Vec<(u64, String)> = g.iter().map(|t| (t.j, t.label())).collect();
        assert_eq!(v, vec![(1, "trivial".into()), (3, "ε".into())]);
        let g = inner_twist_group(2, true).unwrap();
        let v: Vec<(u64, bool, String)> = g.iter().map(|t| (t.j, t.flips_f, t.label())).collect();
        assert_eq!(v, vec![(1, false, "trivial".into()), (1, true, "δ_K".into())]);
        assert_eq!(inner_twist_group(4, true).unwrap().len(), 4);
        assert_eq!(inner_twist_group(1, false).unwrap().len(), 1);
        assert_eq!(inner_twist_group(6, false), Err(TwistError::NotPowerOfTwo(6)));
    }

    #[test]
    fn sizes_and_closure() {
        for e in 0..8 {
            let m = 1u64 << e;
            let phi = if m <= 2 { 1 } else { m / 2 };
            for f in [false, true] {
                let g = inner_twist_group(m, f).unwrap();
                assert_eq!(g.len() as u64, phi * if f { 2 } else { 1 });
                for x in &g {
                    assert_eq!(x.j % 2, 1);
                    for y in &g {
                        let z = compose(m, x, y);
                        assert!(g.contains(&z), "M={m}: {x:?} ∘ {y:?} = {z:?}");
                        // abelian
                        assert_eq!(z, compose(m, y, x));
                    }
                }
            }
        }
    }

    #[test]
    fn coefficient_field_examples() {
        let info = coefficient_field_info(2, 3, 4).unwrap();
        let plus = info.iter().find(|i| i.sign == 1).unwrap();
        let minus = info.iter().find(|i| i.sign == -1).unwrap();
        assert_eq!((minus.eta, minus.degree_over_cyclotomic), (4, 1));
        assert_eq!((plus.eta, plus.degree_over_cyclotomic), (8, 2));
        assert_eq!(plus.galois_group_shape, "Z/2 × (Z/4)^×");
        for i in coefficient_field_info(0, 5, 4).unwrap() {
            assert_eq!((i.eta, i.degree_over_cyclotomic), (10, 2));
        }
        // √2 ∈ Q(ζ₈)
        let info = coefficient_field_info(2, 3, 8).unwrap();
        assert_eq!(info.iter().find(|i| i.sign == 1).unwrap().degree_over_cyclotomic, 1);
        assert!(coefficient_field_info(7, 3, 4).is_err());
    }

    #[test]
    fn sign_symmetry() {
        for p in [3u64, 5, 7, 11] {
            for a in -(2 * p as i64)..=2 * p as i64 {
                let x = coefficient_field_info(a, p, 4).unwrap();
                let y = coefficient_field_info(-a, p, 4).unwrap();
                assert_eq!(x[0].degree_over_cyclotomic, y[1].degree_over_cyclotomic);
                assert_eq!(x[1].degree_over_cyclotomic, y[0].degree_over_cyclotomic);
            }
        }
    }

    #[test]
    fn diagrams() {
        let d2 = field_diagram(2).unwrap();
        assert_eq!((d2.index_over_k_eps, d2.eps_field_degrees.clone()), (2, vec![1]));
        assert_eq!(field_diagram(4).unwrap().eps_field_degrees, vec![1, 2]);
        assert!(field_diagram(1).unwrap().degenerate);
        assert!(field_diagram(12).is_err());
    }
}
