use num_integer::Integer;
use serde::Serialize;

use super::{class_number, splitting_type, QuadField, SplittingKind};
use crate::arith;
use crate::Family;

/// Outcome of the arithmetic gates on `d` for one equation family.
///
/// Quartic (`x⁴+dy²=zᵖ`): `d` prime, `d ≡ 3 (mod 8)`, `3 ∤ h`, 2 inert.
/// Sextic (`x²+dy⁶=zᵖ`): `d` prime, `d ≡ 19 (mod 24)`, `gcd(h, 6) = 1`,
/// 2 and 3 inert.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HypothesisReport {
    pub d: u64,
    pub family: Family,
    pub d_prime: bool,
    pub congruence: bool,
    /// `None` when `d` is not squarefree (no field to compute with).
    pub class_number: Option<u64>,
    pub class_number_gate: bool,
    pub two_inert: bool,
    /// Only evaluated for the sextic family.
    pub three_inert: Option<bool>,
}

impl HypothesisReport {
    pub fn passes(&self) -> bool {
        self.d_prime
            && self.congruence
            && self.class_number_gate
            && self.two_inert
            && self.three_inert.unwrap_or(true)
    }

    /// Names of the gates that failed.
    pub fn failures(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if !self.d_prime {
            out.push("d prime");
        }
        if !self.congruence {
            out.push(match self.family {
                Family::Quartic => "d ≡ 3 (mod 8)",
                Family::Sextic => "d ≡ 19 (mod 24)",
            });
        }
        if !self.class_number_gate {
            out.push(match self.family {
                Family::Quartic => "3 ∤ h",
                Family::Sextic => "gcd(h, 6) = 1",
            });
        }
        if !self.two_inert {
            out.push("2 inert");
        }
        if self.three_inert == Some(false) {
            out.push("3 inert");
        }
        out
    }
}

pub fn check_hypotheses(d: u64, family: Family) -> HypothesisReport {
    let d_prime = arith::is_prime64(d);
    let congruence = match family {
        Family::Quartic => d % 8 == 3,
        Family::Sextic => d % 24 == 19,
    };
    let field = QuadField::new(d).ok();
    let class_number = field.as_ref().map(class_number);
    let class_number_gate = match (family, class_number) {
        (Family::Quartic, Some(h)) => h % 3 != 0,
        (Family::Sextic, Some(h)) => h.gcd(&6) == 1,
        (_, None) => false,
    };
    let inert = |ell| {
        field
            .as_ref()
            .map(|k| splitting_type(ell, k).expect("prime").kind == SplittingKind::Inert)
            .unwrap_or(false)
    };
    HypothesisReport {
        d,
        family,
        d_prime,
        congruence,
        class_number,
        class_number_gate,
        two_inert: inert(2),
        three_inert: (family == Family::Sextic).then(|| inert(3)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nineteen_passes_both_families() {
        let q = check_hypotheses(19, Family::Quartic);
        assert!(q.passes(), "{q:?}");
        assert_eq!(q.class_number, Some(1));
        let s = check_hypotheses(19, Family::Sextic);
        assert!(s.passes(), "{s:?}");
        assert_eq!(s.three_inert, Some(true));
    }

    #[test]
    fn seven_fails_the_congruence_gate() {
        let r = check_hypotheses(7, Family::Quartic);
        assert!(!r.passes());
        assert!(!r.congruence);
        assert!(!r.two_inert);
        assert!(r.failures().contains(&"d ≡ 3 (mod 8)"));
    }

    #[test]
    fn composite_and_non_squarefree() {
        let r = check_hypotheses(35, Family::Quartic);
        assert!(!r.d_prime);
        assert_eq!(r.class_number, Some(2));
        let r = check_hypotheses(27, Family::Quartic);
        assert_eq!(r.class_number, None);
        assert!(!r.passes());
    }

    #[test]
    fn class_number_three_divisibility() {
        // h(−23) = 3; 23 ≡ 7 mod 8 anyway, but the gate is computed.
        let r = check_hypotheses(23, Family::Quartic);
        assert!(!r.class_number_gate);
        // h(−211) = 3 with 211 ≡ 3 mod 8
        let r = check_hypotheses(211, Family::Quartic);
        assert!(r.congruence && r.d_prime && !r.class_number_gate);
    }
}
