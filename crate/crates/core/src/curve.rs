//! Generic long-Weierstrass models `y² + a1·xy + a3·y = x³ + a2·x² + a4·x + a6`.
//!
//! The invariants are written once against [`RingElem`] and evaluated over
//! `O_K`, `K`, `F_ℓ` and `F_ℓ²`.

use num_bigint::BigInt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::quadfield::{QuadFrac, QuadInt};

pub trait RingElem:
    Clone + PartialEq + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
    /// Multiply by a rational integer.
    fn scale(&self, k: i64) -> Self;
    fn is_zero(&self) -> bool;
}

pub trait FieldElem: RingElem {
    fn inv(&self) -> Option<Self>;
}

impl RingElem for QuadInt {
    fn scale(&self, k: i64) -> Self {
        QuadInt::scale(self, &BigInt::from(k))
    }
    fn is_zero(&self) -> bool {
        QuadInt::is_zero(self)
    }
}

impl RingElem for QuadFrac {
    fn scale(&self, k: i64) -> Self {
        QuadFrac::new(self.numerator().scale(&BigInt::from(k)), self.denominator().clone())
    }
    fn is_zero(&self) -> bool {
        QuadFrac::is_zero(self)
    }
}

impl FieldElem for QuadFrac {
    fn inv(&self) -> Option<Self> {
        QuadFrac::inv(self)
    }
}

impl RingElem for i128 {
    fn scale(&self, k: i64) -> Self {
        self * k as i128
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Weierstrass<R> {
    pub a1: R,
    pub a2: R,
    pub a3: R,
    pub a4: R,
    pub a6: R,
}

impl<R: RingElem> Weierstrass<R> {
    pub fn new(a1: R, a2: R, a3: R, a4: R, a6: R) -> Self {
        Self { a1, a2, a3, a4, a6 }
    }

    pub fn coefficients(&self) -> [&R; 5] {
        [&self.a1, &self.a2, &self.a3, &self.a4, &self.a6]
    }

    pub fn map<S: RingElem>(&self, f: impl Fn(&R) -> S) -> Weierstrass<S> {
        Weierstrass::new(f(&self.a1), f(&self.a2), f(&self.a3), f(&self.a4), f(&self.a6))
    }

    pub fn b2(&self) -> R {
        self.a1.clone() * self.a1.clone() + self.a2.scale(4)
    }

    pub fn b4(&self) -> R {
        self.a1.clone() * self.a3.clone() + self.a4.scale(2)
    }

    pub fn b6(&self) -> R {
        self.a3.clone() * self.a3.clone() + self.a6.scale(4)
    }

    pub fn b8(&self) -> R {
        let (a1, a2, a3, a4, a6) = (&self.a1, &self.a2, &self.a3, &self.a4, &self.a6);
        a1.clone() * a1.clone() * a6.clone() + (a2.clone() * a6.clone()).scale(4)
            - a1.clone() * a3.clone() * a4.clone()
            + a2.clone() * a3.clone() * a3.clone()
            - a4.clone() * a4.clone()
    }

    pub fn c4(&self) -> R {
        let b2 = self.b2();
        b2.clone() * b2 - self.b4().scale(24)
    }

    pub fn c6(&self) -> R {
        let b2 = self.b2();
        let b4 = self.b4();
        -(b2.clone() * b2.clone() * b2.clone()) + (b2 * b4).scale(36) - self.b6().scale(216)
    }

    pub fn discriminant(&self) -> R {
        let (b2, b4, b6, b8) = (self.b2(), self.b4(), self.b6(), self.b8());
        -(b2.clone() * b2.clone() * b8) - (b4.clone() * b4.clone() * b4.clone()).scale(8)
            - (b6.clone() * b6.clone()).scale(27)
            + (b2 * b4 * b6).scale(9)
    }

    /// `y² + a1·xy + a3·y − (x³ + a2·x² + a4·x + a6)`.
    pub fn equation_at(&self, x: &R, y: &R) -> R {
        let lhs = y.clone() * y.clone() + self.a1.clone() * x.clone() * y.clone()
            + self.a3.clone() * y.clone();
        let rhs = x.clone() * x.clone() * x.clone()
            + self.a2.clone() * x.clone() * x.clone()
            + self.a4.clone() * x.clone()
            + self.a6.clone();
        lhs - rhs
    }

    pub fn contains(&self, x: &R, y: &R) -> bool {
        self.equation_at(x, y).is_zero()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Point<R> {
    Infinity,
    Affine(R, R),
}

impl<R: FieldElem> Weierstrass<R> {
    pub fn negate(&self, p: &Point<R>) -> Point<R> {
        match p {
            Point::Infinity => Point::Infinity,
            Point::Affine(x, y) => Point::Affine(
                x.clone(),
                -y.clone() - self.a1.clone() * x.clone() - self.a3.clone(),
            ),
        }
    }

    /// Chord-and-tangent addition.
    pub fn add_points(&self, p: &Point<R>, q: &Point<R>) -> Point<R> {
        let (x1, y1, x2, y2) = match (p, q) {
            (Point::Infinity, _) => return q.clone(),
            (_, Point::Infinity) => return p.clone(),
            (Point::Affine(x1, y1), Point::Affine(x2, y2)) => (x1, y1, x2, y2),
        };
        if *q == self.negate(p) {
            return Point::Infinity;
        }
        let lambda = if x1 == x2 {
            let num = x1.clone() * x1.clone() * x1.clone().scale(3) + (self.a2.clone() * x1.clone()).scale(2)
                + self.a4.clone()
                - self.a1.clone() * y1.clone();
            let den = y1.clone().scale(2) + self.a1.clone() * x1.clone() + self.a3.clone();
            num * den.inv().expect("non-vertical tangent")
        } else {
            (y2.clone() - y1.clone()) * (x2.clone() - x1.clone()).inv().expect("distinct x")
        };
        let nu = y1.clone() - lambda.clone() * x1.clone();
        let x3 = lambda.clone() * lambda.clone() + self.a1.clone() * lambda.clone()
            - self.a2.clone()
            - x1.clone()
            - x2.clone();
        let y3 = -(lambda.clone() + self.a1.clone()) * x3.clone() - nu - self.a3.clone();
        Point::Affine(x3, y3)
    }

    pub fn multiply(&self, p: &Point<R>, n: u64) -> Point<R> {
        let mut acc = Point::Infinity;
        for _ in 0..n {
            acc = self.add_points(&acc, p);
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn short_weierstrass_discriminant() {
        // y² = x³ + Ax² + Bx has Δ = 16B²(A² − 4B)
        for (a, b) in [(4i128, 4i128), (1, -3), (0, 1), (-7, 2)] {
            let e = Weierstrass::new(0, a, 0, b, 0);
            assert_eq!(e.discriminant(), 16 * b * b * (a * a - 4 * b));
        }
    }

    #[test]
    fn invariant_identities() {
        // 1728Δ = c4³ − c6² and 4b8 = b2·b6 − b4²
        for coeffs in [[1i128, -1, 0, -10, -20], [0, 0, 1, -1, 0], [1, 2, 3, 4, 5], [-3, 7, 11, 0, 13]] {
            let [a1, a2, a3, a4, a6] = coeffs;
            let e = Weierstrass::new(a1, a2, a3, a4, a6);
            let c4 = e.c4();
            let c6 = e.c6();
            assert_eq!(1728 * e.discriminant(), c4 * c4 * c4 - c6 * c6);
            assert_eq!(4 * e.b8(), e.b2() * e.b6() - e.b4() * e.b4());
        }
        // 11a1: y² + y = x³ − x² − 10x − 20 has Δ = −161051 = −11⁵
        let e = Weierstrass::new(0i128, -1, 1, -10, -20);
        assert_eq!(e.discriminant(), -161051);
    }
}
