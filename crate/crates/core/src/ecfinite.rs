//! Arithmetic in `F_ℓ` and `F_ℓ² = F_ℓ[t]/(t² − r)` for odd `ℓ`, reduction
//! of Frey curves, and traces of Frobenius by exhaustive counting.

use num_bigint::BigInt;
use rayon::prelude::*;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use thiserror::Error;

use crate::arith;
use crate::curve::{RingElem, Weierstrass};
use crate::frey::FreyCurve;
use crate::quadfield::{IntegralBasis, PrimeIdeal, QuadInt};
use crate::Family;

/// Largest field size accepted by [`count_points`].
pub const MAX_FIELD_SIZE: u64 = 1_000_000;

const PARALLEL_THRESHOLD: u64 = 1 << 14;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EcFiniteError {
    #[error("bad reduction: the curve is singular over F_{0}")]
    Singular(u64),
    #[error("field size {0} exceeds the counting cap {MAX_FIELD_SIZE}")]
    TooLarge(u64),
    #[error("characteristic {0} is not an odd prime")]
    BadCharacteristic(u64),
    #[error("unsupported place above {0}")]
    Unsupported(u64),
}

/// An element `c0 + c1·t` of `F_ℓ` (`degree = 1`, `c1 = 0`) or of `F_ℓ²`,
/// where `t² = r` for the smallest quadratic non-residue `r`.
#[derive(Clone, Copy, Debug)]
pub struct FqElement {
    ell: u64,
    r: u64,
    degree: u8,
    c0: u64,
    c1: u64,
}

impl PartialEq for FqElement {
    fn eq(&self, other: &Self) -> bool {
        self.ell == other.ell && self.c0 == other.c0 && self.c1 == other.c1
    }
}

impl Eq for FqElement {}

impl FqElement {
    pub fn new(ell: u64, degree: u8, c0: u64, c1: u64) -> Self {
        assert!(degree == 1 || degree == 2, "degree must be 1 or 2");
        assert!(degree == 2 || c1 % ell == 0, "degree-1 element with a t-component");
        Self {
            ell,
            r: arith::smallest_nonresidue(ell),
            degree,
            c0: c0 % ell,
            c1: c1 % ell,
        }
    }

    pub fn from_int(ell: u64, degree: u8, n: i64) -> Self {
        Self::new(ell, degree, arith::residue(n, ell), 0)
    }

    pub fn from_big(ell: u64, degree: u8, n: &BigInt) -> Self {
        Self::new(ell, degree, arith::residue_big(n, ell), 0)
    }

    /// The generator `t` of `F_ℓ²`.
    pub fn t(ell: u64) -> Self {
        Self::new(ell, 2, 0, 1)
    }

    /// A square root of the integer `n`: in `F_ℓ` when `n` is a square
    /// mod `ℓ`, otherwise in `F_ℓ²`.
    pub fn sqrt_of(ell: u64, n: i64) -> Self {
        let v = arith::residue(n, ell);
        if let Some(s) = arith::sqrt_mod(v, ell) {
            return Self::new(ell, 1, s, 0);
        }
        // n = r·s² with s ∈ F_ℓ, so √n = s·t
        let r = arith::smallest_nonresidue(ell);
        let q = arith::mod_mul(v, arith::mod_inv(r, ell).expect("r ≠ 0"), ell);
        let s = arith::sqrt_mod(q, ell).expect("n/r is a square");
        Self::new(ell, 2, 0, s)
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }

    pub fn degree(&self) -> u8 {
        self.degree
    }

    pub fn coords(&self) -> (u64, u64) {
        (self.c0, self.c1)
    }

    /// Embed into `F_ℓ²`.
    pub fn lift(self) -> Self {
        Self { degree: 2, ..self }
    }

    pub fn is_in_prime_field(&self) -> bool {
        self.c1 == 0
    }

    /// Index in `0..q`, used for table lookups.
    pub fn index(&self) -> usize {
        (self.c0 + self.ell * self.c1) as usize
    }

    pub fn from_index(ell: u64, degree: u8, i: u64) -> Self {
        Self::new(ell, degree, i % ell, i / ell)
    }

    /// The element of index `i` in the same field as `self`, skipping the
    /// non-residue search.
    fn sibling(&self, degree: u8, i: u64) -> Self {
        Self {
            degree,
            c0: i % self.ell,
            c1: i / self.ell,
            ..*self
        }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = *self;
        let mut acc = Self::from_int(self.ell, self.degree, 1);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    /// `x ↦ x^ℓ`, i.e. `t ↦ −t`.
    pub fn frobenius(&self) -> Self {
        Self {
            c1: (self.ell - self.c1) % self.ell,
            ..*self
        }
    }

    pub fn inverse(&self) -> Option<Self> {
        let p = self.ell;
        let norm = (arith::mod_mul(self.c0, self.c0, p) + p
            - arith::mod_mul(self.r, arith::mod_mul(self.c1, self.c1, p), p))
            % p;
        let ninv = arith::mod_inv(norm, p)?;
        Some(Self {
            c0: arith::mod_mul(self.c0, ninv, p),
            c1: arith::mod_mul((p - self.c1) % p, ninv, p),
            ..*self
        })
    }

    fn combine(&self, other: &Self) -> (u64, u8) {
        assert_eq!(self.ell, other.ell, "characteristic mismatch");
        (self.ell, self.degree.max(other.degree))
    }
}

impl Add for FqElement {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let (p, degree) = self.combine(&o);
        Self {
            degree,
            c0: (self.c0 + o.c0) % p,
            c1: (self.c1 + o.c1) % p,
            ..self
        }
    }
}

impl Neg for FqElement {
    type Output = Self;
    fn neg(self) -> Self {
        let p = self.ell;
        Self {
            c0: (p - self.c0) % p,
            c1: (p - self.c1) % p,
            ..self
        }
    }
}

impl Sub for FqElement {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl Mul for FqElement {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let (p, degree) = self.combine(&o);
        let m = |a, b| arith::mod_mul(a, b, p);
        let c0 = (m(self.c0, o.c0) + m(self.r, m(self.c1, o.c1))) % p;
        let c1 = (m(self.c0, o.c1) + m(self.c1, o.c0)) % p;
        Self {
            degree,
            c0,
            c1,
            ..self
        }
    }
}

impl RingElem for FqElement {
    fn scale(&self, k: i64) -> Self {
        *self * Self::from_int(self.ell, self.degree, k)
    }
    fn is_zero(&self) -> bool {
        self.c0 == 0 && self.c1 == 0
    }
}

impl fmt::Display for FqElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.c0, self.c1) {
            (c0, 0) => write!(f, "{c0}"),
            (0, c1) => write!(f, "{c1}t"),
            (c0, c1) => write!(f, "{c0} + {c1}t"),
        }
    }
}

/// Quadratic character of `F_q` as a lookup table indexed by
/// [`FqElement::index`].
#[derive(Clone, Debug)]
pub struct SquareTable {
    ell: u64,
    degree: u8,
    chi: Vec<i8>,
}

impl SquareTable {
    pub fn new(ell: u64, degree: u8) -> Result<Self, EcFiniteError> {
        if ell < 3 || !arith::is_prime64(ell) {
            return Err(EcFiniteError::BadCharacteristic(ell));
        }
        let q = ell.pow(degree as u32);
        if q > MAX_FIELD_SIZE {
            return Err(EcFiniteError::TooLarge(q));
        }
        let mut chi = vec![-1i8; q as usize];
        chi[0] = 0;
        let zero = FqElement::from_int(ell, degree, 0);
        for i in 1..q {
            let x = zero.sibling(degree, i);
            chi[(x * x).index()] = 1;
        }
        Ok(Self { ell, degree, chi })
    }

    pub fn size(&self) -> u64 {
        self.chi.len() as u64
    }

    pub fn chi(&self, x: &FqElement) -> i8 {
        self.chi[x.index()]
    }
}

/// A Weierstrass curve over `F_ℓ` or `F_ℓ²`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveOverFq {
    pub model: Weierstrass<FqElement>,
    pub delta: FqElement,
    pub ell: u64,
    pub degree: u8,
}

impl CurveOverFq {
    pub fn new(model: Weierstrass<FqElement>) -> Self {
        let degree = model.coefficients().iter().map(|c| c.degree).max().unwrap_or(1);
        let model = if degree == 2 { model.map(|c| c.lift()) } else { model };
        let delta = model.discriminant();
        Self {
            ell: delta.ell,
            degree,
            model,
            delta,
        }
    }

    pub fn from_ints(ell: u64, coeffs: [i64; 5]) -> Self {
        let [a1, a2, a3, a4, a6] = coeffs.map(|c| FqElement::from_int(ell, 1, c));
        Self::new(Weierstrass::new(a1, a2, a3, a4, a6))
    }

    pub fn field_size(&self) -> u64 {
        self.ell.pow(self.degree as u32)
    }

    pub fn is_smooth(&self) -> bool {
        !self.delta.is_zero()
    }

    /// All coefficients in the prime field.
    pub fn is_over_prime_field(&self) -> bool {
        self.model.coefficients().iter().all(|c| c.is_in_prime_field())
    }

    /// The same curve over `F_ℓ²`.
    pub fn base_change(&self) -> Self {
        Self::new(self.model.map(|c| c.lift()))
    }
}

/// `a_q = q + 1 − #E(F_q)` by summing the quadratic character of
/// `4x³ + b2x² + 2b4x + b6` over all `x ∈ F_q`.
pub fn count_points(curve: &CurveOverFq) -> Result<i64, EcFiniteError> {
    let table = SquareTable::new(curve.ell, curve.degree)?;
    count_points_with(curve, &table)
}

/// As [`count_points`] with a prebuilt table for the same field.
pub fn count_points_with(curve: &CurveOverFq, table: &SquareTable) -> Result<i64, EcFiniteError> {
    if curve.ell < 3 {
        return Err(EcFiniteError::BadCharacteristic(curve.ell));
    }
    assert_eq!((table.ell, table.degree), (curve.ell, curve.degree), "square table for a different field");
    if !curve.is_smooth() {
        return Err(EcFiniteError::Singular(curve.ell));
    }
    let q = curve.field_size();
    let e = &curve.model;
    let (b2, b4, b6) = (e.b2(), e.b4().scale(2), e.b6());
    let four = FqElement::from_int(curve.ell, curve.degree, 4);
    let degree = curve.degree;
    let term = |i: u64| -> i64 {
        let x = four.sibling(degree, i);
        let f = ((four * x + b2) * x + b4) * x + b6;
        table.chi(&f) as i64
    };
    let sum: i64 = if q >= PARALLEL_THRESHOLD {
        (0..q).into_par_iter().map(term).sum()
    } else {
        (0..q).map(term).sum()
    };
    let a = -sum;
    // Hasse: a² ≤ 4q
    assert!((a * a) as u64 <= 4 * q, "Hasse bound violated: a = {a}, q = {q}");
    Ok(a)
}

/// `a_{ℓ²}` of a curve defined over `F_ℓ`, counted directly over `F_ℓ²`.
pub fn inert_trace(curve: &CurveOverFq) -> Result<i64, EcFiniteError> {
    count_points(&curve.base_change())
}

/// Image of `α ∈ O_K` in the residue field, given the image of `√−d`.
pub fn reduce_quad(alpha: &QuadInt, sqrt_minus_d: FqElement) -> FqElement {
    let ell = sqrt_minus_d.ell;
    let degree = sqrt_minus_d.degree;
    let (x, y) = alpha.coords();
    let omega = match alpha.field().basis() {
        IntegralBasis::Integer => sqrt_minus_d,
        IntegralBasis::HalfInteger => {
            let half = FqElement::from_int(ell, 1, arith::mod_inv(2, ell).expect("ℓ odd") as i64);
            (FqElement::from_int(ell, degree, 1) + sqrt_minus_d) * half
        }
    };
    FqElement::from_big(ell, degree, x) + FqElement::from_big(ell, degree, y) * omega
}

/// Image of `√−d` in `O_K/P`.
pub fn residue_sqrt_minus_d(d: u64, prime: &PrimeIdeal) -> Result<FqElement, EcFiniteError> {
    let ell = prime.ell();
    if ell == 2 {
        return Err(EcFiniteError::Unsupported(2));
    }
    Ok(match *prime {
        PrimeIdeal::Split { sqrt_minus_d, .. } => FqElement::new(ell, 1, sqrt_minus_d, 0),
        PrimeIdeal::Inert { .. } => {
            let s = FqElement::sqrt_of(ell, -(d as i64));
            debug_assert_eq!(s.degree, 2);
            s
        }
        PrimeIdeal::Ramified { .. } => FqElement::from_int(ell, 1, 0),
    })
}

/// Reduce the Frey curve modulo `P`. The result may be singular; check
/// [`CurveOverFq::is_smooth`].
pub fn reduce_frey_at(curve: &FreyCurve, prime: &PrimeIdeal) -> Result<CurveOverFq, EcFiniteError> {
    reduce_model_at(&curve.model, curve.d, prime)
}

/// Reduce any model over `O_K` modulo `P`.
pub fn reduce_model_at(model: &Weierstrass<QuadInt>, d: u64, prime: &PrimeIdeal) -> Result<CurveOverFq, EcFiniteError> {
    let s = residue_sqrt_minus_d(d, prime)?;
    Ok(CurveOverFq::new(model.map(|c| reduce_quad(c, s))))
}

/// The Frey model of `family` over the residue field, built from residues
/// `a, b` and the image `s` of `√−d`.
pub fn frey_model_over(family: Family, a: FqElement, b: FqElement, d: u64, s: FqElement) -> CurveOverFq {
    let ell = s.ell;
    let zero = FqElement::from_int(ell, s.degree, 0);
    let model = match family {
        Family::Quartic => Weierstrass::new(zero, a.scale(4), zero, (a * a + b * s).scale(2), zero),
        Family::Sextic => Weierstrass::new(
            (b * s).scale(6),
            zero,
            (a + b * b * b * s).scale(-4 * d as i64),
            zero,
            zero,
        ),
    };
    CurveOverFq::new(model)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frey::build_frey;
    use crate::quadfield::{splitting_type, QuadField, SplittingKind};
    use rand::{Rng, SeedableRng};

    fn brute_count(curve: &CurveOverFq) -> i64 {
        let q = curve.field_size();
        let mut n = 1i64;
        for i in 0..q {
            for j in 0..q {
                let x = FqElement::from_index(curve.ell, curve.degree, i);
                let y = FqElement::from_index(curve.ell, curve.degree, j);
                if curve.model.contains(&x, &y) {
                    n += 1;
                }
            }
        }
        q as i64 + 1 - n
    }

    #[test]
    fn field_axioms_sample() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for ell in [3u64, 5, 7, 11, 13, 101] {
            for _ in 0..200 {
                let mut pick = || FqElement::new(ell, 2, rng.gen_range(0..ell), rng.gen_range(0..ell));
                let (x, y, z) = (pick(), pick(), pick());
                assert_eq!((x * y) * z, x * (y * z));
                assert_eq!(x * (y + z), x * y + x * z);
                assert_eq!(x * y, y * x);
                if !x.is_zero() {
                    assert_eq!(x * x.inverse().unwrap(), FqElement::from_int(ell, 2, 1));
                    // x^{q−1} = 1
                    assert_eq!(x.pow(ell * ell - 1), FqElement::from_int(ell, 2, 1));
                }
                assert_eq!(x.pow(ell), x.frobenius());
            }
        }
    }

    #[test]
    fn frobenius_fixes_prime_field() {
        for ell in [3u64, 7, 19] {
            for i in 0..ell * ell {
                let x = FqElement::from_index(ell, 2, i);
                assert_eq!(x.frobenius() == x, x.is_in_prime_field());
            }
        }
    }

    #[test]
    fn sqrt_of_nonresidue() {
        for ell in [3u64, 5, 7, 11, 23] {
            for n in -30i64..30 {
                let s = FqElement::sqrt_of(ell, n);
                assert_eq!(s * s, FqElement::from_int(ell, 2, n));
            }
        }
    }

    #[test]
    fn cm_curve_examples() {
        let e5 = CurveOverFq::from_ints(5, [0, 0, 0, 1, 0]);
        assert_eq!(count_points(&e5).unwrap(), 2);
        assert_eq!(brute_count(&e5), 2);
        assert_eq!(inert_trace(&e5).unwrap(), -6);
        let e7 = CurveOverFq::from_ints(7, [0, 0, 0, 1, 0]);
        assert_eq!(count_points(&e7).unwrap(), 0);
        assert_eq!(inert_trace(&e7).unwrap(), -14);
    }

    #[test]
    fn singular_and_bad_inputs() {
        let nodal = CurveOverFq::from_ints(7, [0, 1, 0, 0, 0]);
        assert_eq!(count_points(&nodal), Err(EcFiniteError::Singular(7)));
        assert_eq!(SquareTable::new(2, 1).unwrap_err(), EcFiniteError::BadCharacteristic(2));
        assert_eq!(SquareTable::new(1009, 2).unwrap_err(), EcFiniteError::TooLarge(1009 * 1009));
    }

    #[test]
    fn counting_matches_brute_force_including_char_three() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(11);
        for ell in [3u64, 5, 7, 11] {
            for _ in 0..20 {
                let coeffs = [(); 5].map(|_| rng.gen_range(0..ell as i64));
                let c = CurveOverFq::from_ints(ell, coeffs);
                if !c.is_smooth() {
                    continue;
                }
                assert_eq!(count_points(&c).unwrap(), brute_count(&c), "{coeffs:?} mod {ell}");
                if ell <= 5 {
                    assert_eq!(inert_trace(&c).unwrap(), brute_count(&c.base_change()));
                }
            }
        }
    }

    #[test]
    fn quadratic_extension_relation_sweep() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(2024);
        for ell in arith::primes(50).into_iter().filter(|&l| l > 2) {
            let mut done = 0;
            while done < 6 {
                let coeffs = [(); 5].map(|_| rng.gen_range(0..ell as i64));
                let c = CurveOverFq::from_ints(ell, coeffs);
                if !c.is_smooth() {
                    continue;
                }
                let a = count_points(&c).unwrap();
                assert_eq!(inert_trace(&c).unwrap(), a * a - 2 * ell as i64);
                done += 1;
            }
        }
    }

    #[test]
    fn parallel_counting_path() {
        // q = 131² is above the parallel threshold
        let c = CurveOverFq::from_ints(131, [0, 0, 0, 1, 3]);
        let a = count_points(&c).unwrap();
        assert_eq!(inert_trace(&c).unwrap(), a * a - 262);
        let big = CurveOverFq::from_ints(65537, [0, 0, 0, 2, 5]);
        let a = count_points(&big).unwrap();
        assert!(a * a <= 4 * 65537);
    }

    #[test]
    fn reduce_quartic_at_split_five() {
        let e = build_frey(Family::Quartic, 1, 1, 19, 5).unwrap();
        let p = PrimeIdeal::Split { ell: 5, sqrt_minus_d: 1 };
        let r = reduce_frey_at(&e, &p).unwrap();
        let expected = CurveOverFq::from_ints(5, [0, 4, 0, 4, 0]);
        assert_eq!(r.model, expected.model);
        // 1 + √−19 ↦ 2 ≠ 0 but 5 | c, so the other factor of Δ vanishes
        assert!(!r.is_smooth());
        assert!(reduce_frey_at(&e, &PrimeIdeal::Inert { ell: 2 }).is_err());
    }

    #[test]
    fn reduction_is_a_ring_map() {
        let k = QuadField::new(19).unwrap();
        let p = PrimeIdeal::Split { ell: 7, sqrt_minus_d: splitting_type(7, &k).unwrap().sqrt_minus_d.unwrap() };
        let s = residue_sqrt_minus_d(19, &p).unwrap();
        let inert = residue_sqrt_minus_d(19, &PrimeIdeal::Inert { ell: 3 }).unwrap();
        for (x1, y1, x2, y2) in [(1, 2, 3, 4), (-5, 7, 11, -13), (0, 1, 0, 1)] {
            let (u, v) = (k.elem(x1, y1), k.elem(x2, y2));
            for s in [s, inert] {
                assert_eq!(reduce_quad(&(u.clone() * v.clone()), s), reduce_quad(&u, s) * reduce_quad(&v, s));
                assert_eq!(reduce_quad(&(u.clone() + v.clone()), s), reduce_quad(&u, s) + reduce_quad(&v, s));
            }
        }
    }

    #[test]
    fn quartic_traces_are_even() {
        for d in [11u64, 19, 43] {
            let k = QuadField::new(d).unwrap();
            for (a, b) in [(1i64, 1i64), (2, 1), (3, -2), (-1, 4), (5, 3)] {
                let e = build_frey(Family::Quartic, a, b, d, 7).unwrap();
                for ell in arith::primes(40).into_iter().filter(|&l| l > 2) {
                    let sp = splitting_type(ell, &k).unwrap();
                    if sp.kind == SplittingKind::Ramified {
                        continue;
                    }
                    for p in sp.ideals().unwrap() {
                        let r = reduce_frey_at(&e, &p).unwrap();
                        if r.is_smooth() {
                            assert_eq!(count_points(&r).unwrap() % 2, 0, "d={d} ({a},{b}) at {p:?}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn generic_frey_model_matches_reduction() {
        let e = build_frey(Family::Sextic, 2, 3, 43, 5).unwrap();
        let k = e.field();
        for ell in [5u64, 7, 11, 13] {
            for p in splitting_type(ell, k).unwrap().ideals().unwrap() {
                let s = residue_sqrt_minus_d(43, &p).unwrap();
                let direct = frey_model_over(
                    Family::Sextic,
                    FqElement::from_int(ell, s.degree(), 2),
                    FqElement::from_int(ell, s.degree(), 3),
                    43,
                    s,
                );
                assert_eq!(direct.model, reduce_frey_at(&e, &p).unwrap().model);
            }
        }
    }
}
