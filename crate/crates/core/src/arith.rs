//! Small rational-integer helpers shared by the field and curve modules.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::{Integer, Roots};
use num_modular::{ModularCoreOps, ModularPow};
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::BTreeMap;

pub use num_prime::nt_funcs::{is_prime64, primes};

/// Squarefree test for positive integers; `0` is not squarefree.
pub fn is_squarefree(n: u64) -> bool {
    n != 0 && num_prime::nt_funcs::factorize64(n).values().all(|&e| e == 1)
}

/// Prime factorization of a `u64`, smallest prime first.
pub fn factor_u64(n: u64) -> Vec<(u64, u32)> {
    if n <= 1 {
        return Vec::new();
    }
    num_prime::nt_funcs::factorize64(n)
        .into_iter()
        .map(|(p, e)| (p, e as u32))
        .collect()
}

/// Prime factorization of a nonzero big integer's absolute value.
pub fn factor_big(n: &BigInt) -> BTreeMap<BigUint, u32> {
    let m = n.magnitude().clone();
    if m <= BigUint::one() {
        return BTreeMap::new();
    }
    if let Some(small) = m.to_u64() {
        return factor_u64(small)
            .into_iter()
            .map(|(p, e)| (BigUint::from(p), e))
            .collect();
    }
    num_prime::nt_funcs::factorize(m)
        .into_iter()
        .map(|(p, e)| (p, e as u32))
        .collect()
}

pub fn mod_pow(base: u64, exp: u64, m: u64) -> u64 {
    (base % m).powm(exp, &m)
}

pub fn mod_mul(a: u64, b: u64, m: u64) -> u64 {
    a.mulm(b, &m)
}

pub fn mod_inv(a: u64, p: u64) -> Option<u64> {
    use num_modular::ModularUnaryOps;
    (a % p).invm(&p)
}

/// Residue of a signed integer in `[0, m)`.
pub fn residue(a: i64, m: u64) -> u64 {
    (a as i128).rem_euclid(m as i128) as u64
}

pub fn residue_big(a: &BigInt, m: u64) -> u64 {
    let r = a.mod_floor(&BigInt::from(m));
    r.to_u64().expect("residue fits u64")
}

/// Kronecker symbol `(a / n)`.
pub fn kronecker(a: i64, n: u64) -> i8 {
    use num_modular::ModularSymbols;
    (a as i128).kronecker(&(n as i128))
}

/// Smallest quadratic non-residue modulo an odd prime.
pub fn smallest_nonresidue(p: u64) -> u64 {
    debug_assert!(p > 2);
    (2..p)
        .find(|&r| mod_pow(r, (p - 1) / 2, p) == p - 1)
        .expect("odd prime has a non-residue")
}

/// Square root modulo an odd prime (Tonelli-Shanks). Returns the smaller
/// of the two roots, or `None` for non-residues.
pub fn sqrt_mod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if p == 2 {
        return Some(a);
    }
    if mod_pow(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    let mut q = p - 1;
    let mut s = 0u32;
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let z = smallest_nonresidue(p);
    let mut m = s;
    let mut c = mod_pow(z, q, p);
    let mut t = mod_pow(a, q, p);
    let mut r = mod_pow(a, (q + 1) / 2, p);
    while t != 1 {
        let mut i = 0u32;
        let mut tt = t;
        while tt != 1 {
            tt = mod_mul(tt, tt, p);
            i += 1;
        }
        let mut b = c;
        for _ in 0..(m - i - 1) {
            b = mod_mul(b, b, p);
        }
        m = i;
        c = mod_mul(b, b, p);
        t = mod_mul(t, c, p);
        r = mod_mul(r, b, p);
    }
    Some(r.min(p - r))
}

/// `p`-adic valuation; `None` for zero.
pub fn valuation(n: &BigInt, p: u64) -> Option<u32> {
    if n.is_zero() {
        return None;
    }
    let p = BigInt::from(p);
    let mut m = n.abs();
    let mut v = 0;
    loop {
        let (q, r) = m.div_rem(&p);
        if !r.is_zero() {
            return Some(v);
        }
        m = q;
        v += 1;
    }
}

pub fn valuation_i128(n: i128, p: u64) -> Option<u32> {
    if n == 0 {
        return None;
    }
    let p = p as i128;
    let mut m = n;
    let mut v = 0;
    while m % p == 0 {
        m /= p;
        v += 1;
    }
    Some(v)
}

/// Exact integer square root when `n` is a perfect square.
pub fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.sign() == Sign::Minus {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

pub fn exact_sqrt_i128(n: i128) -> Option<i128> {
    if n < 0 {
        return None;
    }
    let r = n.sqrt();
    (r * r == n).then_some(r)
}

/// `true` for 1, 2, 4, 8, ...
pub fn is_power_of_two(n: u64) -> bool {
    n != 0 && n & (n - 1) == 0
}

/// `true` when `n` is a power of two times a power of three.
pub fn is_three_smooth(mut n: u64) -> bool {
    if n == 0 {
        return false;
    }
    while n % 2 == 0 {
        n /= 2;
    }
    while n % 3 == 0 {
        n /= 3;
    }
    n == 1
}

/// Serde adapters writing big integers as decimal strings.
pub mod decimal {
    use num_bigint::BigInt;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(n: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&n.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(D::Error::custom)
    }

    pub mod vec {
        use super::*;
        use serde::ser::SerializeSeq;

        pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(v.len()))?;
            for n in v {
                seq.serialize_element(&n.to_string())?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
            Vec::<String>::deserialize(d)?
                .iter()
                .map(|s| s.parse().map_err(D::Error::custom))
                .collect()
        }
    }
}
