//! Class number by ideal enumeration below the Minkowski bound.
//!
//! This route never touches binary quadratic forms: ideals are Z-lattices in
//! Hermite normal form on the basis `{1, ω}`, products are lattice products,
//! and two ideals are equivalent iff `I·J̄` contains an element whose norm
//! equals the ideal norm.

use num_integer::{Integer, Roots};

use super::QuadField;
use crate::arith;

/// Lattice `a·Z + (b + c·ω)·Z` with `a, c > 0` and `0 ≤ b < a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
struct Ideal {
    a: i128,
    b: i128,
    c: i128,
}

impl Ideal {
    fn unit() -> Self {
        Ideal { a: 1, b: 0, c: 1 }
    }

    fn norm(&self) -> i128 {
        self.a * self.c
    }

    fn from_generators(gens: &[(i128, i128)]) -> Self {
        let (mut a, mut b, mut c) = (0i128, 0i128, 0i128);
        for &(x, y) in gens {
            if y == 0 {
                a = a.gcd(&x);
            } else if c == 0 {
                b = x;
                c = y;
            } else {
                let e = c.extended_gcd(&y);
                let g = e.gcd;
                let nb = e.x * b + e.y * x;
                let kernel = (y / g) * b - (c / g) * x;
                a = a.gcd(&kernel);
                b = nb;
                c = g;
            }
        }
        assert!(a != 0 && c != 0, "lattice is not of full rank");
        if c < 0 {
            c = -c;
            b = -b;
        }
        Ideal {
            a: a.abs(),
            b: b.rem_euclid(a.abs()),
            c,
        }
    }

    fn basis(&self) -> [(i128, i128); 2] {
        [(self.a, 0), (self.b, self.c)]
    }
}

struct Ring {
    t: i128,
    n: i128,
    disc: i128,
}

impl Ring {
    fn new(k: &QuadField) -> Self {
        let (t, n) = k.omega_trace_norm();
        Ring {
            t: t as i128,
            n: n as i128,
            disc: k.disc() as i128,
        }
    }

    fn mul(&self, (x1, y1): (i128, i128), (x2, y2): (i128, i128)) -> (i128, i128) {
        let yy = y1 * y2;
        (x1 * x2 - self.n * yy, x1 * y2 + x2 * y1 + self.t * yy)
    }

    fn product(&self, i: &Ideal, j: &Ideal) -> Ideal {
        let mut gens = Vec::with_capacity(4);
        for u in i.basis() {
            for v in j.basis() {
                gens.push(self.mul(u, v));
            }
        }
        Ideal::from_generators(&gens)
    }

    fn conj(&self, i: &Ideal) -> Ideal {
        Ideal::from_generators(&[(i.a, 0), (i.b + self.t * i.c, -i.c)])
    }

    /// `true` when the lattice has an element of norm `N(I)`.
    fn is_principal(&self, i: &Ideal) -> bool {
        let target = i.norm();
        let abs_disc = -self.disc;
        // (2X + tY)² + |D|·Y² = 4N with Y = n·c
        let ymax = (4 * target / abs_disc).sqrt();
        let nmax = ymax / i.c;
        for n in -nmax..=nmax {
            let y = n * i.c;
            let rest = 4 * target - abs_disc * y * y;
            let Some(s) = arith::exact_sqrt_i128(rest) else {
                continue;
            };
            for root in [s, -s] {
                let twice_x = root - self.t * y;
                if twice_x % 2 != 0 {
                    continue;
                }
                let x = twice_x / 2;
                if (x - n * i.b).rem_euclid(i.a) == 0 {
                    return true;
                }
            }
        }
        false
    }

    fn equivalent(&self, i: &Ideal, j: &Ideal) -> bool {
        self.is_principal(&self.product(i, &self.conj(j)))
    }

    /// Prime ideals of norm at most `bound`.
    fn prime_ideals(&self, bound: u64) -> Vec<Ideal> {
        let mut out = Vec::new();
        for p in arith::primes(bound + 1) {
            let p = p as i128;
            let roots: Vec<i128> = (0..p)
                .filter(|r| (r * r - self.t * r + self.n).rem_euclid(p) == 0)
                .collect();
            match roots.len() {
                // inert: (p) has norm p² and is principal
                0 => {}
                _ => {
                    for r in roots {
                        out.push(Ideal::from_generators(&[(p, 0), (-r, 1)]));
                    }
                }
            }
        }
        out.sort_by_key(|i| (i.norm(), i.b));
        out.dedup();
        out
    }
}

/// `⌊2√|disc| / π⌋ + 1`.
pub fn minkowski_bound(field: &QuadField) -> u64 {
    let d = -(field.disc()) as f64;
    (2.0 * d.sqrt() / std::f64::consts::PI).floor() as u64 + 1
}

/// Class number via ideals of norm below the Minkowski bound.
pub fn class_number_by_ideals(field: &QuadField) -> u64 {
    let ring = Ring::new(field);
    let bound = minkowski_bound(field) as i128;
    let primes = ring.prime_ideals(bound as u64);

    // Every class contains an integral ideal of norm ≤ bound; enumerate all
    // such ideals as products of the prime ideals.
    let mut ideals = vec![Ideal::unit()];
    let mut frontier = vec![(Ideal::unit(), 0usize)];
    while let Some((ideal, start)) = frontier.pop() {
        for (k, p) in primes.iter().enumerate().skip(start) {
            if ideal.norm() * p.norm() > bound {
                continue;
            }
            let next = ring.product(&ideal, p);
            ideals.push(next);
            frontier.push((next, k));
        }
    }

    let mut reps: Vec<Ideal> = Vec::new();
    for i in ideals {
        if !reps.iter().any(|r| ring.equivalent(&i, r)) {
            reps.push(i);
        }
    }
    reps.len() as u64
}
