use serde::Serialize;
use std::fmt;

/// One solution of `s₁ + s₂·2^m ≡ 5 (mod 8)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Mod8Solution {
    pub sign1: i8,
    pub sign2: i8,
    pub m: u32,
}

/// Solutions sharing `sign1` and `m`, written `s₁ ± 2^m` when both signs
/// occur.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Mod8Pattern {
    pub sign1: i8,
    pub signs2: Vec<i8>,
    pub m: u32,
}

impl fmt::Display for Mod8Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lead = if self.sign1 > 0 { "1" } else { "-1" };
        let op = match self.signs2.as_slice() {
            [1] => "+",
            [-1] => "-",
            _ => "±",
        };
        write!(f, "{lead} {op} 2^{}", self.m)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Mod8Solutions {
    /// Every `(s₁, s₂, m)` with `m ≤ 7`, deduplicated modulo 8.
    pub solutions: Vec<Mod8Solution>,
    pub patterns: Vec<Mod8Pattern>,
}

/// Solve `±1 ± 2^m ≡ 5 (mod 8)` over `m ∈ {0, …, 7}`.
///
/// For `m ≥ 3` the left side is `±1 (mod 8)`, so only `m ≤ 2` can occur;
/// the scan confirms this rather than assuming it.
pub fn solve_mod8() -> Mod8Solutions {
    let mut solutions = Vec::new();
    for m in 0..=7u32 {
        for sign1 in [1i8, -1] {
            for sign2 in [1i8, -1] {
                let v = sign1 as i64 + sign2 as i64 * (1i64 << m);
                if v.rem_euclid(8) == 5 {
                    solutions.push(Mod8Solution { sign1, sign2, m });
                }
            }
        }
    }
    solutions.sort_by_key(|s| (-s.sign1, s.m, -s.sign2));
    let mut patterns: Vec<Mod8Pattern> = Vec::new();
    for s in &solutions {
        match patterns.iter_mut().find(|p| p.sign1 == s.sign1 && p.m == s.m) {
            Some(p) => p.signs2.push(s.sign2),
            None => patterns.push(Mod8Pattern {
                sign1: s.sign1,
                signs2: vec![s.sign2],
                m: s.m,
            }),
        }
    }
    Mod8Solutions { solutions, patterns }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_raw_solutions_two_patterns() {
        let s = solve_mod8();
        let raw: Vec<_> = s.solutions.iter().map(|x| (x.sign1, x.sign2, x.m)).collect();
        assert_eq!(raw, vec![(1, 1, 2), (1, -1, 2), (-1, -1, 1)]);
        let shown: Vec<String> = s.patterns.iter().map(ToString::to_string).collect();
        assert_eq!(shown, vec!["1 ± 2^2", "-1 - 2^1"]);
        assert!(s.solutions.iter().all(|x| x.m < 3));
    }
}
