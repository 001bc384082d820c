use num_integer::Integer;
use std::collections::BTreeMap;
use std::sync::Arc;

use super::{NumFieldError, NumberField, NumberFieldElement};

/// A Dirichlet character of 2-power order, tabulated on `(Z/M)^×` with
/// values in a coefficient field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacterTable {
    modulus: u64,
    order: u64,
    values: BTreeMap<u64, NumberFieldElement>,
}

impl CharacterTable {
    pub fn new(
        modulus: u64,
        order: u64,
        values: BTreeMap<u64, NumberFieldElement>,
    ) -> Result<Self, NumFieldError> {
        if order == 0 || !order.is_power_of_two() {
            return Err(NumFieldError::OrderNotPowerOfTwo(order));
        }
        let units: Vec<u64> = units(modulus);
        for &u in &units {
            let v = values.get(&u).ok_or(NumFieldError::MissingValue(u))?;
            if !v.pow(order).is_one() {
                return Err(NumFieldError::NotRootOfUnity(u));
            }
        }
        if let Some(&k) = values.keys().find(|k| units.binary_search(k).is_err()) {
            return Err(NumFieldError::NonUnitKey(k));
        }
        let m = modulus.max(1) as u128;
        for (i, &a) in units.iter().enumerate() {
            for &b in &units[i..] {
                let ab = (a as u128 * b as u128 % m) as u64;
                if &values[&a] * &values[&b] != values[&ab] {
                    return Err(NumFieldError::NotMultiplicative(a, b));
                }
            }
        }
        Ok(Self {
            modulus,
            order,
            values,
        })
    }

    /// The trivial character modulo `modulus`.
    pub fn trivial(field: &Arc<NumberField>, modulus: u64) -> Self {
        let one = NumberFieldElement::one(field);
        let values = units(modulus).into_iter().map(|u| (u, one.clone())).collect();
        Self {
            modulus,
            order: 1,
            values,
        }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn values(&self) -> &BTreeMap<u64, NumberFieldElement> {
        &self.values
    }

    pub fn is_trivial(&self) -> bool {
        self.values.values().all(NumberFieldElement::is_one)
    }

    /// `ε(ℓ)`; an error when `ℓ` shares a factor with the modulus.
    pub fn value(&self, ell: u64) -> Result<&NumberFieldElement, NumFieldError> {
        if ell.gcd(&self.modulus) != 1 {
            return Err(NumFieldError::RamifiedCharacter {
                ell,
                modulus: self.modulus,
            });
        }
        let r = if self.modulus == 1 { 0 } else { ell % self.modulus };
        Ok(&self.values[&r])
    }

    /// `ε(ℓ)⁻¹ = ε(ℓ)^{order−1}`.
    pub fn inverse_value(&self, ell: u64) -> Result<NumberFieldElement, NumFieldError> {
        Ok(self.value(ell)?.pow(self.order - 1))
    }

    /// `ε²`, with its order halved when that is still exact.
    pub fn squared(&self) -> Self {
        let values: BTreeMap<_, _> = self.values.iter().map(|(&k, v)| (k, v * v)).collect();
        let order = (self.order / 2).max(1);
        Self {
            modulus: self.modulus,
            order,
            values,
        }
    }

    /// Smallest `n` with `εⁿ = 1`.
    pub fn exact_order(&self) -> u64 {
        let mut n = 1;
        while !self.values.values().all(|v| v.pow(n).is_one()) {
            n *= 2;
        }
        n
    }
}

fn units(modulus: u64) -> Vec<u64> {
    if modulus <= 1 {
        return vec![0];
    }
    (1..modulus).filter(|u| u.gcd(&modulus) == 1).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mod8_character(field: &Arc<NumberField>) -> CharacterTable {
        // the character of Q(√2): 1, 7 ↦ 1 and 3, 5 ↦ −1
        let values = [(1, 1), (3, -1), (5, -1), (7, 1)]
            .into_iter()
            .map(|(k, v)| (k, NumberFieldElement::from_int(field, v)))
            .collect();
        CharacterTable::new(8, 2, values).unwrap()
    }

    #[test]
    fn quadratic_character_mod_eight() {
        let q = NumberField::rationals();
        let chi = mod8_character(&q);
        assert_eq!(chi.value(3).unwrap(), &NumberFieldElement::from_int(&q, -1));
        assert_eq!(chi.value(17).unwrap(), &NumberFieldElement::one(&q));
        assert_eq!(
            chi.value(2),
            Err(NumFieldError::RamifiedCharacter { ell: 2, modulus: 8 })
        );
        assert!(chi.squared().is_trivial());
        assert_eq!(chi.exact_order(), 2);
    }

    #[test]
    fn quartic_character_mod_five() {
        // 2 generates (Z/5)^×; send it to i
        let k = NumberField::from_coeffs(&[1, 0, 1]).unwrap();
        let i = NumberFieldElement::generator(&k);
        let values = [(1, i.pow(0)), (2, i.clone()), (4, i.pow(2)), (3, i.pow(3))]
            .into_iter()
            .collect();
        let chi = CharacterTable::new(5, 4, values).unwrap();
        assert_eq!(chi.exact_order(), 4);
        assert_eq!(chi.squared().exact_order(), 2);
        assert!((chi.value(7).unwrap() * &chi.inverse_value(7).unwrap()).is_one());
    }

    #[test]
    fn validation() {
        let q = NumberField::rationals();
        let one = NumberFieldElement::one(&q);
        let minus = NumberFieldElement::from_int(&q, -1);
        let bad: BTreeMap<_, _> = [(1, one.clone()), (3, minus.clone()), (5, minus.clone()), (7, minus.clone())]
            .into_iter()
            .collect();
        assert_eq!(
            CharacterTable::new(8, 2, bad),
            Err(NumFieldError::NotMultiplicative(3, 5))
        );
        let missing: BTreeMap<_, _> = [(1, one.clone())].into_iter().collect();
        assert_eq!(CharacterTable::new(8, 2, missing), Err(NumFieldError::MissingValue(3)));
        let two = NumberFieldElement::from_int(&q, 2);
        let not_root: BTreeMap<_, _> = [(1, one.clone()), (2, two)].into_iter().collect();
        assert_eq!(CharacterTable::new(3, 2, not_root), Err(NumFieldError::NotRootOfUnity(2)));
        assert_eq!(
            CharacterTable::new(3, 3, BTreeMap::new()),
            Err(NumFieldError::OrderNotPowerOfTwo(3))
        );
        let t = CharacterTable::trivial(&q, 1);
        assert!(t.value(2).unwrap().is_one());
    }
}
