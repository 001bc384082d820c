//! Exact arithmetic in number fields `Q[x]/(h)` given by a monic integer
//! polynomial, as used for newform coefficient fields.

mod character;
mod poly;

pub use character::CharacterTable;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NumFieldError {
    #[error("defining polynomial must be monic of degree ≥ 1")]
    NotMonic,
    #[error("elements belong to different fields")]
    FieldMismatch,
    #[error("expected {expected} coordinates, got {got}")]
    WrongLength { expected: usize, got: usize },
    #[error("element is not invertible")]
    NotInvertible,
    #[error("ramified character evaluation: {ell} is not coprime to the modulus {modulus}")]
    RamifiedCharacter { ell: u64, modulus: u64 },
    #[error("character order {0} is not a power of two")]
    OrderNotPowerOfTwo(u64),
    #[error("character table has no value for the unit {0}")]
    MissingValue(u64),
    #[error("character table has a value for the non-unit {0}")]
    NonUnitKey(u64),
    #[error("value at {0} is not a root of unity of the declared order")]
    NotRootOfUnity(u64),
    #[error("table is not multiplicative at ({0}, {1})")]
    NotMultiplicative(u64, u64),
    #[error("norm methods disagree: determinant {det}, resultant {res}")]
    NormMismatch { det: BigRational, res: BigRational },
}

/// `Q[x]/(h)` for a monic `h ∈ Z[x]`, coefficients low-to-high.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NumberField {
    poly: Vec<BigInt>,
}

impl NumberField {
    pub fn new(poly: Vec<BigInt>) -> Result<Arc<Self>, NumFieldError> {
        if poly.len() < 2 || !poly.last().is_some_and(|c| c.is_one()) {
            return Err(NumFieldError::NotMonic);
        }
        Ok(Arc::new(Self { poly }))
    }

    pub fn from_coeffs(coeffs: &[i64]) -> Result<Arc<Self>, NumFieldError> {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// `Q` presented as `Q[x]/(x)`.
    pub fn rationals() -> Arc<Self> {
        Self::from_coeffs(&[0, 1]).expect("x is monic")
    }

    pub fn degree(&self) -> usize {
        self.poly.len() - 1
    }

    pub fn poly(&self) -> &[BigInt] {
        &self.poly
    }
}

/// An element of a [`NumberField`] in power-basis coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NumberFieldElement {
    field: Arc<NumberField>,
    coords: Vec<BigRational>,
}

impl NumberFieldElement {
    pub fn new(field: &Arc<NumberField>, coords: Vec<BigRational>) -> Result<Self, NumFieldError> {
        let n = field.degree();
        if coords.len() > n {
            // accept longer vectors and reduce them, as long as they are a polynomial
            return Ok(Self::from_poly(field, coords));
        }
        let mut coords = coords;
        coords.resize(n, BigRational::zero());
        Ok(Self {
            field: field.clone(),
            coords,
        })
    }

    pub fn from_ints(field: &Arc<NumberField>, coords: &[i64]) -> Self {
        Self::new(
            field,
            coords.iter().map(|&c| BigRational::from_integer(c.into())).collect(),
        )
        .expect("valid coordinates")
    }

    pub fn from_rational(field: &Arc<NumberField>, r: BigRational) -> Self {
        Self::new(field, vec![r]).expect("constant")
    }

    pub fn from_int(field: &Arc<NumberField>, n: i64) -> Self {
        Self::from_rational(field, BigRational::from_integer(n.into()))
    }

    pub fn zero(field: &Arc<NumberField>) -> Self {
        Self::from_int(field, 0)
    }

    pub fn one(field: &Arc<NumberField>) -> Self {
        Self::from_int(field, 1)
    }

    /// The class of `x`.
    pub fn generator(field: &Arc<NumberField>) -> Self {
        Self::from_poly(field, vec![BigRational::zero(), BigRational::one()])
    }

    fn from_poly(field: &Arc<NumberField>, p: Vec<BigRational>) -> Self {
        let mut coords = poly::reduce_monic(p, &field.poly);
        coords.resize(field.degree(), BigRational::zero());
        Self {
            field: field.clone(),
            coords,
        }
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coords[0].is_one() && self.coords[1..].iter().all(Zero::is_zero)
    }

    /// The element as a rational number, if it lies in `Q`.
    pub fn as_rational(&self) -> Option<&BigRational> {
        self.coords[1..].iter().all(Zero::is_zero).then_some(&self.coords[0])
    }

    fn check(&self, other: &Self) -> Result<(), NumFieldError> {
        if Arc::ptr_eq(&self.field, &other.field) || self.field == other.field {
            Ok(())
        } else {
            Err(NumFieldError::FieldMismatch)
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, NumFieldError> {
        self.check(other)?;
        let coords = self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect();
        Ok(Self {
            field: self.field.clone(),
            coords,
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, NumFieldError> {
        self.checked_add(&other.neg_ref())
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, NumFieldError> {
        self.check(other)?;
        Ok(Self::from_poly(&self.field, poly::mul(&self.coords, &other.coords)))
    }

    fn neg_ref(&self) -> Self {
        Self {
            field: self.field.clone(),
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        Self {
            field: self.field.clone(),
            coords: self.coords.iter().map(|c| c * r).collect(),
        }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Matrix of multiplication by `self` on the power basis; column `j`
    /// holds the coordinates of `self·xʲ`.
    pub fn multiplication_matrix(&self) -> Vec<Vec<BigRational>> {
        let n = self.field.degree();
        let x = Self::generator(&self.field);
        let mut col = self.clone();
        let mut cols = Vec::with_capacity(n);
        for _ in 0..n {
            cols.push(col.coords.clone());
            col = &col * &x;
        }
        (0..n).map(|i| (0..n).map(|j| cols[j][i].clone()).collect()).collect()
    }

    pub fn inverse(&self) -> Result<Self, NumFieldError> {
        let n = self.field.degree();
        let mut rhs = vec![BigRational::zero(); n];
        rhs[0] = BigRational::one();
        let sol = poly::solve(self.multiplication_matrix(), rhs).ok_or(NumFieldError::NotInvertible)?;
        Ok(Self {
            field: self.field.clone(),
            coords: sol,
        })
    }

    pub fn norm_by_determinant(&self) -> BigRational {
        poly::determinant(self.multiplication_matrix())
    }

    /// `Res(h, a)` for the representative polynomial `a`; equals the norm
    /// because `h` is monic.
    pub fn norm_by_resultant(&self) -> BigRational {
        let h: Vec<BigRational> = self
            .field
            .poly
            .iter()
            .map(|c| BigRational::from_integer(c.clone()))
            .collect();
        poly::resultant(&h, &self.coords)
    }

    /// Field norm to `Q`, computed both as a determinant and as a
    /// resultant.
    pub fn try_norm(&self) -> Result<BigRational, NumFieldError> {
        let det = self.norm_by_determinant();
        let res = self.norm_by_resultant();
        if det == res {
            Ok(det)
        } else {
            Err(NumFieldError::NormMismatch { det, res })
        }
    }

    pub fn norm(&self) -> BigRational {
        self.try_norm().expect("determinant and resultant norms agree")
    }

    pub fn trace(&self) -> BigRational {
        let m = self.multiplication_matrix();
        (0..m.len()).map(|i| m[i][i].clone()).sum()
    }
}

macro_rules! forward_op {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr for NumberFieldElement {
            type Output = NumberFieldElement;
            fn $method(self, rhs: Self) -> Self {
                self.$checked(&rhs).expect("number field mismatch")
            }
        }
        impl<'a> $tr<&'a NumberFieldElement> for &'a NumberFieldElement {
            type Output = NumberFieldElement;
            fn $method(self, rhs: Self) -> NumberFieldElement {
                self.$checked(rhs).expect("number field mismatch")
            }
        }
    };
}

forward_op!(Add, add, checked_add);
forward_op!(Sub, sub, checked_sub);
forward_op!(Mul, mul, checked_mul);

impl Neg for NumberFieldElement {
    type Output = NumberFieldElement;
    fn neg(self) -> Self {
        self.neg_ref()
    }
}

impl fmt::Display for NumberFieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (i, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            terms.push(match i {
                0 => format!("{c}"),
                1 => format!("{c}*x"),
                _ => format!("{c}*x^{i}"),
            });
        }
        if terms.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&terms.join(" + "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn gaussian_integers() {
        let k = NumberField::from_coeffs(&[1, 0, 1]).unwrap();
        let i = NumberFieldElement::generator(&k);
        assert_eq!(&i * &i, NumberFieldElement::from_int(&k, -1));
        assert!(i.pow(4).is_one());
        assert_eq!(NumberFieldElement::from_int(&k, 3).norm(), q(9));
        assert_eq!(NumberFieldElement::from_ints(&k, &[1, 1]).norm(), q(2));
    }

    #[test]
    fn sqrt_two() {
        let k = NumberField::from_coeffs(&[-2, 0, 1]).unwrap();
        let x = NumberFieldElement::generator(&k);
        let one = NumberFieldElement::one(&k);
        assert!((&(&x + &one) * &(&x - &one)).is_one());
        assert_eq!(x.norm(), q(-2));
        assert_eq!(x.inverse().unwrap(), x.scale(&BigRational::new(1.into(), 2.into())));
    }

    #[test]
    fn rationals_as_degree_one() {
        let k = NumberField::rationals();
        let a = NumberFieldElement::from_int(&k, -7);
        assert_eq!(a.norm(), q(-7));
        // x ≡ 0
        assert!(NumberFieldElement::generator(&k).is_zero());
    }

    #[test]
    fn mismatched_fields() {
        let k1 = NumberField::from_coeffs(&[1, 0, 1]).unwrap();
        let k2 = NumberField::from_coeffs(&[-2, 0, 1]).unwrap();
        let a = NumberFieldElement::one(&k1);
        let b = NumberFieldElement::one(&k2);
        assert_eq!(a.checked_mul(&b), Err(NumFieldError::FieldMismatch));
        assert_eq!(a.checked_add(&b), Err(NumFieldError::FieldMismatch));
    }

    #[test]
    fn not_monic() {
        assert_eq!(NumberField::from_coeffs(&[1, 2]), Err(NumFieldError::NotMonic));
        assert_eq!(NumberField::from_coeffs(&[1]), Err(NumFieldError::NotMonic));
    }

    #[test]
    fn zero_has_no_inverse() {
        let k = NumberField::from_coeffs(&[1, 0, 1]).unwrap();
        assert_eq!(NumberFieldElement::zero(&k).inverse(), Err(NumFieldError::NotInvertible));
        assert_eq!(NumberFieldElement::zero(&k).norm(), q(0));
    }

    #[test]
    fn cyclotomic_eight() {
        // ζ₈ has norm 1 in Q(ζ₈) = Q[x]/(x⁴+1); 1 − ζ₈ has norm 2
        let k = NumberField::from_coeffs(&[1, 0, 0, 0, 1]).unwrap();
        let z = NumberFieldElement::generator(&k);
        assert_eq!(z.norm(), q(1));
        assert_eq!((NumberFieldElement::one(&k) - z.clone()).norm(), q(2));
        assert!(z.pow(8).is_one());
        assert!(!z.pow(4).is_one());
    }

    fn field_and_elements() -> impl Strategy<Value = (Arc<NumberField>, Vec<i64>, Vec<i64>)> {
        (1usize..=8)
            .prop_flat_map(|n| {
                (
                    prop::collection::vec(-5i64..=5, n),
                    prop::collection::vec(-9i64..=9, n),
                    prop::collection::vec(-9i64..=9, n),
                )
            })
            .prop_map(|(mut h, a, b)| {
                h.push(1);
                (NumberField::from_coeffs(&h).unwrap(), a, b)
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn determinant_and_resultant_agree((k, a, _b) in field_and_elements()) {
            let x = NumberFieldElement::from_ints(&k, &a);
            prop_assert_eq!(x.norm_by_determinant(), x.norm_by_resultant());
        }
    }

    proptest! {
        #[test]
        fn norm_is_multiplicative((k, a, b) in field_and_elements()) {
            let x = NumberFieldElement::from_ints(&k, &a);
            let y = NumberFieldElement::from_ints(&k, &b);
            prop_assert_eq!((&x * &y).norm(), x.norm() * y.norm());
        }

        #[test]
        fn inverse_round_trips((k, a, _b) in field_and_elements()) {
            let x = NumberFieldElement::from_ints(&k, &a);
            if !x.norm().is_zero() {
                prop_assert!((&x * &x.inverse().unwrap()).is_one());
            }
        }
    }
}
