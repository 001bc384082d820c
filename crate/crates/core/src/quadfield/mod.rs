//! Exact arithmetic in imaginary quadratic fields `Q(√−d)`.
//!
//! Elements of the ring of integers are stored by their coordinates in the
//! integral basis `{1, ω}`, where `ω = (1+√−d)/2` when `d ≡ 3 (mod 4)` and
//! `ω = √−d` otherwise. Coordinates are arbitrary-precision integers, so the
//! half-integral elements `(u + v√−d)/2` are represented without rounding.

mod classnum;
mod hypotheses;
mod ideals;
mod splitting;

pub use classnum::{class_number, reduced_forms, ReducedForm};
pub use hypotheses::{check_hypotheses, HypothesisReport};
pub use ideals::{class_number_by_ideals, minkowski_bound};
pub use splitting::{splitting_type, PrimeIdeal, PrimeSplitting, SplittingKind};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use thiserror::Error;

use crate::arith;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuadFieldError {
    #[error("d = {0} is not a squarefree positive integer")]
    NotSquarefree(u64),
    #[error("operands live in different fields Q(√−{0}) and Q(√−{1})")]
    FieldMismatch(u64, u64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("unsupported place above {0}: {1}")]
    UnsupportedPlace(u64, &'static str),
}

/// Shape of the integral basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum IntegralBasis {
    /// `ω = (1+√−d)/2`, used when `d ≡ 3 (mod 4)`.
    HalfInteger,
    /// `ω = √−d`.
    Integer,
}

/// The field `K = Q(√−d)` for squarefree `d ≥ 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct QuadField {
    d: u64,
    disc: i64,
    basis: IntegralBasis,
}

impl QuadField {
    pub fn new(d: u64) -> Result<Self, QuadFieldError> {
        if !arith::is_squarefree(d) {
            return Err(QuadFieldError::NotSquarefree(d));
        }
        let (disc, basis) = if d % 4 == 3 {
            (-(d as i64), IntegralBasis::HalfInteger)
        } else {
            (-4 * d as i64, IntegralBasis::Integer)
        };
        Ok(Self { d, disc, basis })
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    /// Field discriminant, `−d` or `−4d`.
    pub fn disc(&self) -> i64 {
        self.disc
    }

    pub fn basis(&self) -> IntegralBasis {
        self.basis
    }

    /// Trace and norm of `ω`, so that `ω² = t·ω − n`.
    pub fn omega_trace_norm(&self) -> (i64, i64) {
        match self.basis {
            IntegralBasis::HalfInteger => (1, (1 + self.d as i64) / 4),
            IntegralBasis::Integer => (0, self.d as i64),
        }
    }

    pub fn elem(&self, x: impl Into<BigInt>, y: impl Into<BigInt>) -> QuadInt {
        QuadInt {
            field: *self,
            x: x.into(),
            y: y.into(),
        }
    }

    pub fn int(&self, n: impl Into<BigInt>) -> QuadInt {
        self.elem(n, 0)
    }

    pub fn zero(&self) -> QuadInt {
        self.int(0)
    }

    pub fn one(&self) -> QuadInt {
        self.int(1)
    }

    pub fn sqrt_minus_d(&self) -> QuadInt {
        match self.basis {
            IntegralBasis::HalfInteger => self.elem(-1, 2),
            IntegralBasis::Integer => self.elem(0, 1),
        }
    }

    /// The element `a + b√−d`.
    pub fn from_parts(&self, a: impl Into<BigInt>, b: impl Into<BigInt>) -> QuadInt {
        let a = a.into();
        let b = b.into();
        match self.basis {
            IntegralBasis::HalfInteger => self.elem(&a - &b, b * 2),
            IntegralBasis::Integer => self.elem(a, b),
        }
    }
}

impl fmt::Display for QuadField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(√−{})", self.d)
    }
}

/// An algebraic integer `x + y·ω` of a [`QuadField`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadInt {
    field: QuadField,
    x: BigInt,
    y: BigInt,
}

impl QuadInt {
    pub fn field(&self) -> &QuadField {
        &self.field
    }

    /// Coordinates in the integral basis.
    pub fn coords(&self) -> (&BigInt, &BigInt) {
        (&self.x, &self.y)
    }

    /// `(u, v)` with `2·self = u + v√−d`.
    pub fn doubled_parts(&self) -> (BigInt, BigInt) {
        match self.field.basis {
            IntegralBasis::HalfInteger => (&self.x * 2 + &self.y, self.y.clone()),
            IntegralBasis::Integer => (&self.x * 2, &self.y * 2),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    /// `true` when the element lies in `Z`.
    pub fn is_rational(&self) -> bool {
        self.y.is_zero()
    }

    pub fn as_integer(&self) -> Option<&BigInt> {
        self.is_rational().then_some(&self.x)
    }

    fn same_field(&self, other: &QuadInt) -> Result<(), QuadFieldError> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(QuadFieldError::FieldMismatch(self.field.d, other.field.d))
        }
    }

    pub fn checked_add(&self, other: &QuadInt) -> Result<QuadInt, QuadFieldError> {
        self.same_field(other)?;
        Ok(self.field.elem(&self.x + &other.x, &self.y + &other.y))
    }

    pub fn checked_sub(&self, other: &QuadInt) -> Result<QuadInt, QuadFieldError> {
        self.same_field(other)?;
        Ok(self.field.elem(&self.x - &other.x, &self.y - &other.y))
    }

    pub fn checked_mul(&self, other: &QuadInt) -> Result<QuadInt, QuadFieldError> {
        self.same_field(other)?;
        let (t, n) = self.field.omega_trace_norm();
        let yy = &self.y * &other.y;
        let x = &self.x * &other.x - &yy * n;
        let y = &self.x * &other.y + &other.x * &self.y + yy * t;
        Ok(self.field.elem(x, y))
    }

    pub fn conj(&self) -> QuadInt {
        let (t, _) = self.field.omega_trace_norm();
        self.field.elem(&self.x + &self.y * t, -&self.y)
    }

    pub fn norm(&self) -> BigInt {
        let (t, n) = self.field.omega_trace_norm();
        &self.x * &self.x + &self.x * &self.y * t + &self.y * &self.y * n
    }

    pub fn trace(&self) -> BigInt {
        let (t, _) = self.field.omega_trace_norm();
        &self.x * 2 + &self.y * t
    }

    pub fn scale(&self, k: &BigInt) -> QuadInt {
        self.field.elem(&self.x * k, &self.y * k)
    }

    pub fn pow(&self, mut e: u32) -> QuadInt {
        let mut base = self.clone();
        let mut acc = self.field.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            base = base.clone() * base;
            e >>= 1;
        }
        acc
    }

    /// Exact division by a nonzero rational integer, if it divides.
    pub fn div_int(&self, k: &BigInt) -> Option<QuadInt> {
        if k.is_zero() {
            return None;
        }
        let (qx, rx) = self.x.div_rem(k);
        let (qy, ry) = self.y.div_rem(k);
        (rx.is_zero() && ry.is_zero()).then(|| self.field.elem(qx, qy))
    }

    /// Exact division in `O_K`, if `other` divides `self`.
    pub fn div_exact(&self, other: &QuadInt) -> Option<QuadInt> {
        let n = other.norm();
        (self.clone() * other.conj()).div_int(&n)
    }

    /// Gcd of the integral-basis coordinates (the largest rational integer
    /// dividing the element).
    pub fn content(&self) -> BigInt {
        self.x.gcd(&self.y)
    }
}

macro_rules! forward_op {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr for QuadInt {
            type Output = QuadInt;
            fn $method(self, rhs: QuadInt) -> QuadInt {
                self.$checked(&rhs).expect("quadratic field mismatch")
            }
        }
        impl<'a> $tr<&'a QuadInt> for &'a QuadInt {
            type Output = QuadInt;
            fn $method(self, rhs: &'a QuadInt) -> QuadInt {
                self.$checked(rhs).expect("quadratic field mismatch")
            }
        }
    };
}

forward_op!(Add, add, checked_add);
forward_op!(Sub, sub, checked_sub);
forward_op!(Mul, mul, checked_mul);

impl Neg for QuadInt {
    type Output = QuadInt;
    fn neg(self) -> QuadInt {
        self.field.elem(-self.x, -self.y)
    }
}

impl fmt::Display for QuadInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Printed as (u + v√−d)/2 or u + v√−d, whichever is integral.
        let (u, v) = self.doubled_parts();
        let d = self.field.d;
        let body = |u: &BigInt, v: &BigInt| -> String {
            if v.is_zero() {
                return u.to_string();
            }
            let sign = if v.is_negative() { "-" } else { "+" };
            let mag = v.abs();
            let coef = if mag.is_one() {
                String::new()
            } else {
                mag.to_string()
            };
            if u.is_zero() {
                let lead = if v.is_negative() { "-" } else { "" };
                format!("{lead}{coef}√-{d}")
            } else {
                format!("{u} {sign} {coef}√-{d}")
            }
        };
        if u.is_even() && v.is_even() {
            write!(f, "{}", body(&(&u / 2), &(&v / 2)))
        } else {
            write!(f, "({})/2", body(&u, &v))
        }
    }
}

/// An element of the fraction field `K`, stored as `num / den` with
/// `num ∈ O_K` and `den > 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadFrac {
    num: QuadInt,
    den: BigInt,
}

impl QuadFrac {
    pub fn new(num: QuadInt, den: BigInt) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let mut out = Self { num, den };
        out.normalize();
        out
    }

    pub fn from_int(x: QuadInt) -> Self {
        Self::new(x, BigInt::one())
    }

    fn normalize(&mut self) {
        if self.den.is_negative() {
            self.den = -self.den.clone();
            self.num = -self.num.clone();
        }
        let g = self.num.content().gcd(&self.den);
        if !g.is_zero() && !g.is_one() {
            self.num = self.num.div_int(&g).expect("content divides");
            self.den = &self.den / &g;
        }
        if self.num.is_zero() {
            self.den = BigInt::one();
        }
    }

    pub fn numerator(&self) -> &QuadInt {
        &self.num
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn inv(&self) -> Option<QuadFrac> {
        if self.is_zero() {
            return None;
        }
        let n = self.num.norm();
        Some(QuadFrac::new(self.num.conj().scale(&self.den), n))
    }
}

impl Add for QuadFrac {
    type Output = QuadFrac;
    fn add(self, rhs: QuadFrac) -> QuadFrac {
        QuadFrac::new(
            self.num.scale(&rhs.den) + rhs.num.scale(&self.den),
            self.den * rhs.den,
        )
    }
}

impl Sub for QuadFrac {
    type Output = QuadFrac;
    fn sub(self, rhs: QuadFrac) -> QuadFrac {
        self + (-rhs)
    }
}

impl Mul for QuadFrac {
    type Output = QuadFrac;
    fn mul(self, rhs: QuadFrac) -> QuadFrac {
        QuadFrac::new(self.num * rhs.num, self.den * rhs.den)
    }
}

impl Neg for QuadFrac {
    type Output = QuadFrac;
    fn neg(self) -> QuadFrac {
        QuadFrac {
            num: -self.num,
            den: self.den,
        }
    }
}
