//! Curves `y² + a₁xy + a₃y = x³` with `a₁ = α√−d`, `a₃ = β√−d` and
//! discriminant `−d²·β³(dα³ + 27β)`, where `β³(dα³ + 27β) = ±2^r·3^q`.

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::SieveError;
use crate::arith;
use crate::curve::Weierstrass;
use crate::frey::{reduction_type, ReductionKind};
use crate::quadfield::{PrimeIdeal, QuadField};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExponentBounds {
    pub r_max: u32,
    pub q_max: u32,
}

/// `r ≤ 16`, `q ≤ 13`.
pub const DEFAULT_BOUNDS: ExponentBounds = ExponentBounds { r_max: 16, q_max: 13 };

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ThreeTorsionMode {
    /// Any prime `d ≡ 19 (mod 24)`.
    FreeD,
    FixedD(u64),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ThreeTorsionCandidate {
    pub d: u64,
    pub alpha: i64,
    pub beta: i64,
    pub sign: i8,
    pub r: u32,
    pub q: u32,
    /// Exponent of `d` in the discriminant.
    pub s: u32,
    pub additive_at_2: bool,
    pub additive_at_3: bool,
    /// Found only because the exponent bounds were raised.
    pub beyond_default_bounds: bool,
    /// Whether the quotient by the 3-torsion point is rational is not
    /// recomputed.
    pub isogeny_check: String,
}

impl ThreeTorsionCandidate {
    /// `β³(dα³ + 27β) = sign·2^r·3^q`.
    pub fn satisfies_equation(&self) -> bool {
        let (a, b, d) = (BigInt::from(self.alpha), BigInt::from(self.beta), BigInt::from(self.d));
        let lhs = b.pow(3) * (d * a.pow(3) + 27 * b);
        let rhs = BigInt::from(self.sign) * BigInt::from(2).pow(self.r) * BigInt::from(3).pow(self.q);
        lhs == rhs
    }

    pub fn model(&self) -> Weierstrass<crate::quadfield::QuadInt> {
        model(self.d, self.alpha, self.beta)
    }
}

fn model(d: u64, alpha: i64, beta: i64) -> Weierstrass<crate::quadfield::QuadInt> {
    let k = QuadField::new(d).expect("prime d");
    let z = k.zero();
    Weierstrass::new(k.from_parts(0, alpha), z.clone(), k.from_parts(0, beta), z.clone(), z)
}

/// Write `m = d·α³` with `d` prime, if possible. `α` carries the sign of `m`.
pub fn is_prime_times_cube(m: i64) -> Option<(u64, i64)> {
    if m == 0 {
        return None;
    }
    let mut d = None;
    let mut alpha: i64 = 1;
    for (p, e) in arith::factor_u64(m.unsigned_abs()) {
        match e % 3 {
            0 => {}
            1 if d.is_none() => d = Some(p),
            _ => return None,
        }
        alpha = alpha.checked_mul((p as i64).checked_pow(e / 3)?)?;
    }
    d.map(|d| (d, alpha * m.signum()))
}

fn fixed_d_gate(d: u64) -> Result<(), SieveError> {
    let mut failed = Vec::new();
    if !arith::is_prime64(d) {
        failed.push("d prime".to_string());
    }
    if d % 24 != 19 {
        failed.push("d ≡ 19 (mod 24)".to_string());
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(SieveError::Precondition { d, failed })
    }
}

/// Enumerate `β = ±2^u3^v` with `β³ | 2^r3^q`, solve for `dα³`, and keep
/// the curves with additive reduction at both 2 and 3.
pub fn sieve_3torsion(
    mode: ThreeTorsionMode,
    bounds: ExponentBounds,
) -> Result<Vec<ThreeTorsionCandidate>, SieveError> {
    if let ThreeTorsionMode::FixedD(d) = mode {
        fixed_d_gate(d)?;
    }
    let mut cells = Vec::new();
    for sign in [1i8, -1] {
        for r in 0..=bounds.r_max {
            for q in 0..=bounds.q_max {
                cells.push((sign, r, q));
            }
        }
    }
    let mut out: Vec<ThreeTorsionCandidate> = cells
        .par_iter()
        .flat_map_iter(|&(sign, r, q)| cell(mode, sign, r, q))
        .collect();
    out.sort();
    Ok(out)
}

fn cell(mode: ThreeTorsionMode, sign: i8, r: u32, q: u32) -> Vec<ThreeTorsionCandidate> {
    let n = sign as i128 * (1i128 << r) * 3i128.pow(q);
    let mut out = Vec::new();
    for u in 0..=r / 3 {
        for v in 0..=q / 3 {
            for sb in [1i128, -1] {
                let beta = sb * (1i128 << u) * 3i128.pow(v);
                let m = n / beta.pow(3) - 27 * beta;
                let Ok(m) = i64::try_from(m) else { continue };
                let Some((d, alpha)) = is_prime_times_cube(m) else { continue };
                let keep = match mode {
                    ThreeTorsionMode::FreeD => arith::is_prime64(d) && d % 24 == 19,
                    ThreeTorsionMode::FixedD(fixed) => d == fixed,
                };
                if !keep {
                    continue;
                }
                let e = model(d, alpha, beta as i64);
                let additive = |ell| {
                    reduction_type(&e, &PrimeIdeal::Inert { ell }).expect("2 and 3 inert").kind
                        == ReductionKind::Additive
                };
                let (at2, at3) = (additive(2), additive(3));
                if at2 && at3 {
                    out.push(ThreeTorsionCandidate {
                        d,
                        alpha,
                        beta: beta as i64,
                        sign,
                        r,
                        q,
                        s: 2,
                        additive_at_2: at2,
                        additive_at_3: at3,
                        beyond_default_bounds: r > DEFAULT_BOUNDS.r_max || q > DEFAULT_BOUNDS.q_max,
                        isogeny_check: "unchecked".into(),
                    });
                }
            }
        }
    }
    out
}
