use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{QuadField, QuadFieldError, QuadInt};
use crate::arith;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SplittingKind {
    Split,
    Inert,
    Ramified,
}

/// Decomposition of a rational prime `ℓ` in `K`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeSplitting {
    pub ell: u64,
    pub kind: SplittingKind,
    /// For odd split `ℓ`: the smaller square root of `−d` mod `ℓ`. The
    /// prime ideals above `ℓ` are `(ℓ, √−d − s)` for `s` and `ℓ − s`.
    pub sqrt_minus_d: Option<u64>,
    /// Norm of a prime ideal above `ℓ`: `ℓ`, or `ℓ²` when inert.
    pub residue_norm: u64,
}

pub fn splitting_type(ell: u64, field: &QuadField) -> Result<PrimeSplitting, QuadFieldError> {
    if !arith::is_prime64(ell) {
        return Err(QuadFieldError::NotPrime(ell));
    }
    let kind = match arith::kronecker(field.disc(), ell) {
        1 => SplittingKind::Split,
        -1 => SplittingKind::Inert,
        _ => SplittingKind::Ramified,
    };
    let sqrt_minus_d = match kind {
        SplittingKind::Split if ell > 2 => {
            let r = arith::residue(-(field.d() as i64), ell);
            Some(arith::sqrt_mod(r, ell).expect("split prime has a root"))
        }
        _ => None,
    };
    let residue_norm = match kind {
        SplittingKind::Inert => ell * ell,
        _ => ell,
    };
    Ok(PrimeSplitting {
        ell,
        kind,
        sqrt_minus_d,
        residue_norm,
    })
}

impl PrimeSplitting {
    /// The prime ideals above `ℓ`. Split primes above 2 are not modelled.
    pub fn ideals(&self) -> Result<Vec<PrimeIdeal>, QuadFieldError> {
        let ell = self.ell;
        Ok(match self.kind {
            SplittingKind::Inert => vec![PrimeIdeal::Inert { ell }],
            SplittingKind::Ramified => vec![PrimeIdeal::Ramified { ell }],
            SplittingKind::Split => {
                let s = self
                    .sqrt_minus_d
                    .ok_or(QuadFieldError::UnsupportedPlace(ell, "split prime above 2"))?;
                vec![
                    PrimeIdeal::Split {
                        ell,
                        sqrt_minus_d: s,
                    },
                    PrimeIdeal::Split {
                        ell,
                        sqrt_minus_d: ell - s,
                    },
                ]
            }
        })
    }
}

/// A nonzero prime ideal of `O_K`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PrimeIdeal {
    /// `(ℓ, √−d − s)` for odd `ℓ`; reduction sends `√−d ↦ s`.
    Split { ell: u64, sqrt_minus_d: u64 },
    /// `(ℓ)`.
    Inert { ell: u64 },
    /// The unique prime above `ℓ | disc`.
    Ramified { ell: u64 },
}

impl PrimeIdeal {
    pub fn ell(&self) -> u64 {
        match *self {
            PrimeIdeal::Split { ell, .. }
            | PrimeIdeal::Inert { ell }
            | PrimeIdeal::Ramified { ell } => ell,
        }
    }

    pub fn norm(&self) -> u64 {
        match *self {
            PrimeIdeal::Inert { ell } => ell * ell,
            _ => self.ell(),
        }
    }

    /// Valuation `v_P(α)`; `None` for `α = 0`.
    ///
    /// Ramified primes above 2 are not handled (`2α` is used to clear the
    /// half-integral basis).
    pub fn valuation(&self, a: &QuadInt) -> Result<Option<u32>, QuadFieldError> {
        if a.is_zero() {
            return Ok(None);
        }
        match *self {
            PrimeIdeal::Inert { ell } => {
                let (x, y) = a.coords();
                let vx = arith::valuation(x, ell).unwrap_or(u32::MAX);
                let vy = arith::valuation(y, ell).unwrap_or(u32::MAX);
                Ok(Some(vx.min(vy)))
            }
            PrimeIdeal::Ramified { ell } => {
                if ell == 2 {
                    return Err(QuadFieldError::UnsupportedPlace(2, "ramified prime above 2"));
                }
                let (u, v) = a.doubled_parts();
                let vu = arith::valuation(&u, ell).map_or(u32::MAX, |e| 2 * e);
                let vv = arith::valuation(&v, ell).map_or(u32::MAX, |e| 2 * e + 1);
                Ok(Some(vu.min(vv)))
            }
            PrimeIdeal::Split { ell, sqrt_minus_d } => {
                let (u, v) = a.doubled_parts();
                let total = arith::valuation(&(&u * &u + &v * &v * a.field().d()), ell)
                    .expect("nonzero norm");
                let modulus = BigInt::from(ell).pow(total + 1);
                let root = hensel_sqrt_minus_d(a.field().d(), ell, sqrt_minus_d, total + 1);
                let w = (u + v * root).mod_floor(&modulus);
                Ok(Some(arith::valuation(&w, ell).unwrap_or(total).min(total)))
            }
        }
    }
}

/// Lift `s` with `s² ≡ −d (mod ℓ)` to a root modulo `ℓ^k`.
fn hensel_sqrt_minus_d(d: u64, ell: u64, s: u64, k: u32) -> BigInt {
    let d = BigInt::from(d);
    let mut root = BigInt::from(s);
    let mut prec = 1u32;
    while prec < k {
        prec = (prec * 2).min(k);
        let m = BigInt::from(ell).pow(prec);
        let f = (&root * &root + &d).mod_floor(&m);
        let two_root: BigInt = (&root * BigInt::from(2)).mod_floor(&m);
        let g = two_root.extended_gcd(&m);
        debug_assert!(g.gcd.is_one());
        root = (&root - f * g.x).mod_floor(&m);
    }
    debug_assert!(((&root * &root + &d) % BigInt::from(ell).pow(k)).is_zero());
    root
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splitting_examples() {
        let k = QuadField::new(19).unwrap();
        assert_eq!(splitting_type(2, &k).unwrap().kind, SplittingKind::Inert);
        let five = splitting_type(5, &k).unwrap();
        assert_eq!(five.kind, SplittingKind::Split);
        assert_eq!(five.residue_norm, 5);
        let s = five.sqrt_minus_d.unwrap();
        assert_eq!((s * s + 19) % 5, 0);
        let r = splitting_type(19, &k).unwrap();
        assert_eq!(r.kind, SplittingKind::Ramified);
        assert_eq!(r.residue_norm, 19);
        assert_eq!(splitting_type(9, &k), Err(QuadFieldError::NotPrime(9)));
    }

    #[test]
    fn split_matches_brute_force_squares() {
        for d in (1u64..100).filter(|&d| arith::is_squarefree(d)) {
            let k = QuadField::new(d).unwrap();
            for ell in arith::primes(200) {
                let ps = splitting_type(ell, &k).unwrap();
                if k.disc() % ell as i64 == 0 {
                    assert_eq!(ps.kind, SplittingKind::Ramified, "d={d} ell={ell}");
                    continue;
                }
                let target = arith::residue(-(d as i64), ell);
                let brute = if ell == 2 {
                    // 2 splits iff disc ≡ 1 (mod 8)
                    k.disc().rem_euclid(8) == 1
                } else {
                    (1..ell).any(|x| x * x % ell == target)
                };
                assert_eq!(ps.kind == SplittingKind::Split, brute, "d={d} ell={ell}");
                assert_eq!(
                    ps.residue_norm == ell,
                    ps.kind != SplittingKind::Inert
                );
            }
        }
    }

    #[test]
    fn valuations_at_split_primes_add_up_to_norm() {
        let k = QuadField::new(19).unwrap();
        let ideals = splitting_type(5, &k).unwrap().ideals().unwrap();
        for (x, y) in [(1i64, 1i64), (3, 0), (25, 5), (-7, 2), (125, 50), (0, 5)] {
            let a = k.elem(x, y);
            let vs: u32 = ideals
                .iter()
                .map(|p| p.valuation(&a).unwrap().unwrap())
                .sum();
            assert_eq!(Some(vs), arith::valuation(&a.norm(), 5), "{a}");
        }
        // ω has norm 5, so exactly one of the two primes divides it.
        let w = k.elem(0, 1);
        let v: Vec<u32> = ideals.iter().map(|p| p.valuation(&w).unwrap().unwrap()).collect();
        assert_eq!(v.iter().sum::<u32>(), 1);
    }

    #[test]
    fn ramified_valuation() {
        let k = QuadField::new(19).unwrap();
        let p = PrimeIdeal::Ramified { ell: 19 };
        assert_eq!(p.valuation(&k.sqrt_minus_d()).unwrap(), Some(1));
        assert_eq!(p.valuation(&k.int(19)).unwrap(), Some(2));
        assert_eq!(p.valuation(&k.from_parts(19, 1)).unwrap(), Some(1));
        assert_eq!(p.valuation(&k.int(3)).unwrap(), Some(0));
    }

    #[test]
    fn inert_valuation_at_two() {
        let k = QuadField::new(547).unwrap();
        let p = PrimeIdeal::Inert { ell: 2 };
        assert_eq!(p.valuation(&k.from_parts(-12, 0)).unwrap(), Some(2));
        assert_eq!(p.valuation(&k.sqrt_minus_d().scale(&16.into())).unwrap(), Some(4));
        assert_eq!(p.valuation(&k.elem(0, 1)).unwrap(), Some(0));
    }
}
