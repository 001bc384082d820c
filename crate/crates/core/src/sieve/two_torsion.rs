//! Curves `y² = x³ + ax² + bx` over `K` whose discriminant `2⁴b²(a²−4b)`
//! is a unit times a power of 2.
//!
//! Unique factorization forces `b = ±2^t`, and then
//! `a² = σ·2^{r−4−2t} + ε·2^{t+2}`. Either `a ∈ Z` (the curve is a base
//! change from `Q`) or `a ∈ Z·√−d`, which the 2-adic and mod-8 analysis
//! rules out for `d > 3`.

use num_integer::Roots;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::mod8::solve_mod8;
use super::SieveError;
use crate::quadfield::{check_hypotheses, QuadField, QuadInt};
use crate::Family;

pub const BRUTE_FORCE_T_MAX: u32 = 10;
pub const BRUTE_FORCE_R_MAX: u32 = 40;

/// `a = (a_u + a_v√−d)/2`, `b = ±2^t`, with `b²(a² − 4b) = σ·2^{r−4}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TwoTorsionCandidate {
    pub d: u64,
    pub t: u32,
    pub r: u32,
    pub sigma: i8,
    pub b: i64,
    pub a_u: i64,
    pub a_v: i64,
    /// `a ∈ Q`, so the curve is the base change of a rational curve.
    pub rational: bool,
}

impl TwoTorsionCandidate {
    pub fn a(&self) -> QuadInt {
        let k = QuadField::new(self.d).expect("validated d");
        let two_a = k.from_parts(self.a_u, self.a_v);
        two_a.div_int(&2.into()).expect("a is integral")
    }

    /// `b²(a² − 4b) = σ·2^{r−4}`, checked in `O_K`.
    pub fn satisfies_disc_equation(&self) -> bool {
        let a = self.a();
        let k = *a.field();
        let b = k.int(self.b);
        let lhs = b.clone() * b.clone() * (a.clone() * a - b.scale(&4.into()));
        lhs == k.int(num_bigint::BigInt::from(self.sigma) << (self.r - 4))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwoTorsionReport {
    pub d: u64,
    pub t_max: u32,
    pub r_max: u32,
    pub base_change: Vec<TwoTorsionCandidate>,
    pub non_base_change: Vec<TwoTorsionCandidate>,
    /// Cells with `a² < 0` excluded because `v₂(a²)` is odd.
    pub parity_obstructed: usize,
    /// Cells whose odd part is not `≡ 5 (mod 8)` or matches no pattern.
    pub mod8_obstructed: usize,
    /// Cells matching a mod-8 pattern but with `|odd part| ≤ 5 < d`.
    pub too_small_for_d: usize,
    /// The brute-force root search reproduced the same candidates.
    pub brute_force_agrees: bool,
}

#[derive(Clone, Copy)]
struct Cell {
    t: u32,
    r: u32,
    sigma: i8,
    eps: i8,
}

impl Cell {
    fn b(&self) -> i64 {
        self.eps as i64 * (1i64 << self.t)
    }

    fn e1(&self) -> u32 {
        self.r - 4 - 2 * self.t
    }

    fn e2(&self) -> u32 {
        self.t + 2
    }

    /// The required value of `a²`.
    fn a_squared(&self) -> i128 {
        self.sigma as i128 * (1i128 << self.e1()) + self.eps as i128 * (1i128 << self.e2())
    }

    fn candidate(&self, d: u64, a_u: i64, a_v: i64) -> TwoTorsionCandidate {
        TwoTorsionCandidate {
            d,
            t: self.t,
            r: self.r,
            sigma: self.sigma,
            b: self.b(),
            a_u,
            a_v,
            rational: a_v == 0,
        }
    }
}

fn cells(t_max: u32, r_max: u32) -> Vec<Cell> {
    let mut out = Vec::new();
    for t in 0..=t_max {
        for r in 2 * t + 4..=r_max {
            for sigma in [1i8, -1] {
                for eps in [1i8, -1] {
                    out.push(Cell { t, r, sigma, eps });
                }
            }
        }
    }
    out
}

enum Outcome {
    Found(Vec<TwoTorsionCandidate>),
    Parity,
    Mod8,
    TooSmall,
}

fn analytic_cell(d: u64, cell: &Cell) -> Outcome {
    let a2 = cell.a_squared();
    if a2 >= 0 {
        let s = a2.sqrt();
        if s * s != a2 {
            // not a rational square, and a ∈ Z·√−d would give a² ≤ 0
            return Outcome::Found(Vec::new());
        }
        let s = s as i64;
        let mut v = vec![cell.candidate(d, 2 * s, 0)];
        if s != 0 {
            v.push(cell.candidate(d, -2 * s, 0));
        }
        return Outcome::Found(v);
    }
    // a = a₂√−d with a₂ = 2^s·ã, so −d·ã²·4^s = a²
    let v = (-a2).trailing_zeros();
    if v % 2 == 1 {
        return Outcome::Parity;
    }
    let odd = a2 >> v;
    if odd.rem_euclid(8) != 5 {
        return Outcome::Mod8;
    }
    let (e1, e2) = (cell.e1() as i64 - v as i64, cell.e2() as i64 - v as i64);
    // one exponent is 0 after removing 4^s; read off the pattern
    let (lead, other, m) = if e1 == 0 {
        (cell.sigma, cell.eps, e2)
    } else {
        (cell.eps, cell.sigma, e1)
    };
    let matched = m >= 0
        && solve_mod8()
            .solutions
            .iter()
            .any(|s| s.sign1 == lead && s.sign2 == other && s.m as i64 == m);
    if !matched {
        return Outcome::Mod8;
    }
    // |odd| ≤ 1 + 2² = 5, so d·ã² ≤ 5
    let n = -odd;
    if n % d as i128 != 0 {
        return Outcome::TooSmall;
    }
    let q = n / d as i128;
    let root = q.sqrt();
    if root * root != q {
        return Outcome::TooSmall;
    }
    let a_v = 2 * (root << (v / 2)) as i64;
    Outcome::Found(vec![cell.candidate(d, 0, a_v), cell.candidate(d, 0, -a_v)])
}

/// All `a ∈ O_K` with `a² = A`, by walking the norm form
/// `(u² + dv²)/4 = |A|`.
fn brute_force_cell(d: u64, cell: &Cell) -> Vec<TwoTorsionCandidate> {
    let target = cell.a_squared();
    let n4 = 4 * target.abs();
    let di = d as i128;
    let mut out = Vec::new();
    let mut v: i128 = 0;
    while di * v * v <= n4 {
        let rest = n4 - di * v * v;
        let u = rest.sqrt();
        if u * u == rest && (u - v) % 2 == 0 {
            for (su, sv) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
                let (uu, vv) = (su * u, sv * v);
                // ((u + v√−d)/2)² = (u² − dv²)/4 + (uv/2)√−d
                if uu * vv == 0 && (uu * uu - di * vv * vv) == 4 * target {
                    out.push(cell.candidate(d, uu as i64, vv as i64));
                }
            }
        }
        v += 1;
    }
    out.sort();
    out.dedup();
    out
}

/// Classify all 2-torsion curves with good reduction away from 2 for
/// `d ≡ 3 (mod 8)` prime, cross-checked against a direct root search.
pub fn sieve_2torsion(d: u64) -> Result<TwoTorsionReport, SieveError> {
    sieve_2torsion_bounded(d, BRUTE_FORCE_T_MAX, BRUTE_FORCE_R_MAX)
}

pub fn sieve_2torsion_bounded(d: u64, t_max: u32, r_max: u32) -> Result<TwoTorsionReport, SieveError> {
    if d == 3 {
        return Err(SieveError::ExtraUnits);
    }
    let gate = check_hypotheses(d, Family::Quartic);
    if d < 3 || !gate.passes() {
        let mut failed: Vec<String> = gate.failures().into_iter().map(String::from).collect();
        if d < 3 {
            failed.push("d > 3".into());
        }
        return Err(SieveError::Precondition { d, failed });
    }
    let cells = cells(t_max, r_max);
    let analytic: Vec<Outcome> = cells.par_iter().map(|c| analytic_cell(d, c)).collect();
    let brute: Vec<Vec<TwoTorsionCandidate>> = cells.par_iter().map(|c| brute_force_cell(d, c)).collect();

    let mut found = Vec::new();
    let (mut parity, mut mod8, mut small) = (0, 0, 0);
    for o in analytic {
        match o {
            Outcome::Found(v) => found.extend(v),
            Outcome::Parity => parity += 1,
            Outcome::Mod8 => mod8 += 1,
            Outcome::TooSmall => small += 1,
        }
    }
    found.sort();
    let mut brute: Vec<_> = brute.into_iter().flatten().collect();
    brute.sort();
    if found != brute {
        return Err(SieveError::CrossCheckMismatch(d));
    }
    let (base_change, non_base_change) = found.into_iter().partition(|c| c.rational);
    Ok(TwoTorsionReport {
        d,
        t_max,
        r_max,
        base_change,
        non_base_change,
        parity_obstructed: parity,
        mod8_obstructed: mod8,
        too_small_for_d: small,
        brute_force_agrees: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eleven_has_only_base_change() {
        let r = sieve_2torsion(11).unwrap();
        assert!(r.non_base_change.is_empty());
        assert!(!r.base_change.is_empty());
        assert!(r.brute_force_agrees);
        for c in &r.base_change {
            assert!(c.satisfies_disc_equation(), "{c:?}");
        }
        // t = 0, r = 9: a² = 2⁵ + 2² = 36, i.e. y² = x³ + 6x² + x
        assert!(r.base_change.iter().any(|c| c.t == 0 && c.r == 9 && c.a_u == 12));
    }

    #[test]
    fn domain_and_precondition_errors() {
        assert!(matches!(sieve_2torsion(3), Err(SieveError::ExtraUnits)));
        match sieve_2torsion(35) {
            Err(SieveError::Precondition { d: 35, failed }) => assert!(failed.contains(&"d prime".to_string())),
            other => panic!("{other:?}"),
        }
        assert!(matches!(sieve_2torsion(7), Err(SieveError::Precondition { .. })));
        // h(−211) = 3
        assert!(matches!(sieve_2torsion(211), Err(SieveError::Precondition { .. })));
    }

    #[test]
    fn non_base_change_exists_over_three_only() {
        // Over Q(√−3) the analytic route does see √−3-multiples: a = √−3,
        // a² = −3 = 1 − 4 with t = 0, r = 4.
        let cell = Cell { t: 0, r: 4, sigma: 1, eps: -1 };
        match analytic_cell(3, &cell) {
            Outcome::Found(v) => assert!(v.iter().any(|c| !c.rational)),
            _ => panic!("expected a root"),
        }
        assert_eq!(analytic_cell(3, &cell).found_len(), brute_force_cell(3, &cell).len());
    }

    impl Outcome {
        fn found_len(&self) -> usize {
            match self {
                Outcome::Found(v) => v.len(),
                _ => 0,
            }
        }
    }
}
