use num_integer::Integer;

use super::QuadField;

/// A reduced positive definite binary quadratic form `ax² + bxy + cy²`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ReducedForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

/// All reduced primitive forms of a negative discriminant: `|b| ≤ a ≤ c`,
/// with `b ≥ 0` whenever `|b| = a` or `a = c`.
pub fn reduced_forms(disc: i64) -> Vec<ReducedForm> {
    assert!(disc < 0 && disc.rem_euclid(4) <= 1, "bad discriminant {disc}");
    let abs = -disc;
    let mut out = Vec::new();
    // a ≤ √(|D|/3)
    let mut a = 1i64;
    while 3 * a * a <= abs {
        for b in -a..=a {
            if (b * b - disc) % (4 * a) != 0 {
                continue;
            }
            let c = (b * b - disc) / (4 * a);
            if c < a {
                continue;
            }
            if b < 0 && (-b == a || a == c) {
                continue;
            }
            if a.gcd(&b).gcd(&c) != 1 {
                continue;
            }
            out.push(ReducedForm { a, b, c });
        }
        a += 1;
    }
    out
}

/// Class number of `Q(√−d)` by counting reduced forms of its discriminant.
pub fn class_number(field: &QuadField) -> u64 {
    reduced_forms(field.disc()).len() as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith;

    #[test]
    fn small_class_numbers() {
        let h = |d| class_number(&QuadField::new(d).unwrap());
        assert_eq!(h(1), 1);
        assert_eq!(h(3), 1);
        assert_eq!(h(5), 2);
        assert_eq!(h(23), 3);
        assert_eq!(h(163), 1);
        assert_eq!(h(47), 5);
    }

    #[test]
    fn heegner_numbers_are_exactly_class_number_one() {
        let heegner = [1u64, 2, 3, 7, 11, 19, 43, 67, 163];
        for d in (1..2000).filter(|&d| arith::is_squarefree(d)) {
            let one = class_number(&QuadField::new(d).unwrap()) == 1;
            assert_eq!(one, heegner.contains(&d), "d={d}");
        }
    }

    #[test]
    fn forms_have_the_right_discriminant() {
        for f in reduced_forms(-547 * 4) {
            assert_eq!(f.b * f.b - 4 * f.a * f.c, -547 * 4);
        }
    }
}
