//! Dense polynomials and matrices over `Q`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

fn trim(mut p: Vec<BigRational>) -> Vec<BigRational> {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

pub fn mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Remainder of `p` modulo a monic integer polynomial.
pub fn reduce_monic(p: Vec<BigRational>, h: &[BigInt]) -> Vec<BigRational> {
    let n = h.len() - 1;
    let mut p = trim(p);
    while p.len() > n {
        let top = p.len() - 1;
        let c = p[top].clone();
        let shift = top - n;
        for (k, hk) in h.iter().enumerate() {
            p[shift + k] -= &c * BigRational::from_integer(hk.clone());
        }
        p = trim(p);
    }
    p
}

fn rem(f: &[BigRational], g: &[BigRational]) -> Vec<BigRational> {
    let mut r = f.to_vec();
    let dg = g.len() - 1;
    let lead = g[dg].clone();
    while r.len() > dg {
        let top = r.len() - 1;
        let c = &r[top] / &lead;
        let shift = top - dg;
        for (k, gk) in g.iter().enumerate() {
            r[shift + k] -= &c * gk;
        }
        r = trim(r);
    }
    r
}

/// Resultant by the Euclidean recursion
/// `Res(f, g) = (−1)^{deg f·deg g} · lc(g)^{deg f − deg r} · Res(g, r)`.
pub fn resultant(f: &[BigRational], g: &[BigRational]) -> BigRational {
    let f = trim(f.to_vec());
    let g = trim(g.to_vec());
    if f.is_empty() || g.is_empty() {
        return BigRational::zero();
    }
    let m = f.len() - 1;
    let n = g.len() - 1;
    if n == 0 {
        return pow(&g[0], m);
    }
    if m == 0 {
        return pow(&f[0], n);
    }
    let r = rem(&f, &g);
    if r.is_empty() {
        return BigRational::zero();
    }
    let sign = if (m * n) % 2 == 1 {
        -BigRational::one()
    } else {
        BigRational::one()
    };
    sign * pow(&g[n], m - (r.len() - 1)) * resultant(&g, &r)
}

fn pow(x: &BigRational, e: usize) -> BigRational {
    (0..e).fold(BigRational::one(), |acc, _| acc * x)
}

/// Determinant by Gaussian elimination over `Q`.
pub fn determinant(mut m: Vec<Vec<BigRational>>) -> BigRational {
    let n = m.len();
    let mut det = BigRational::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return BigRational::zero();
        };
        if pivot != col {
            m.swap(pivot, col);
            det = -det;
        }
        let p = m[col][col].clone();
        det *= &p;
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = &m[r][col] / &p;
            for c in col..n {
                let delta = &factor * &m[col][c];
                m[r][c] -= delta;
            }
        }
    }
    det
}

/// Solve `m·x = rhs`; `None` when `m` is singular.
pub fn solve(mut m: Vec<Vec<BigRational>>, mut rhs: Vec<BigRational>) -> Option<Vec<BigRational>> {
    let n = m.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(pivot, col);
        rhs.swap(pivot, col);
        let p = m[col][col].clone();
        for c in col..n {
            m[col][c] = &m[col][c] / &p;
        }
        rhs[col] = &rhs[col] / &p;
        for r in 0..n {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let factor = m[r][col].clone();
            for c in col..n {
                let delta = &factor * &m[col][c];
                m[r][c] -= delta;
            }
            let delta = &factor * &rhs[col];
            rhs[r] -= delta;
        }
    }
    Some(rhs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|&c| BigRational::from_integer(c.into())).collect()
    }

    #[test]
    fn resultant_by_hand() {
        // Res(x² + 1, x + 1) = (−1)² + 1 = 2
        assert_eq!(resultant(&q(&[1, 0, 1]), &q(&[1, 1])), BigRational::from_integer(2.into()));
        // Res(x² − 2, x) = −2
        assert_eq!(resultant(&q(&[-2, 0, 1]), &q(&[0, 1])), BigRational::from_integer((-2).into()));
        // common root
        assert!(resultant(&q(&[-1, 0, 1]), &q(&[-1, 1])).is_zero());
    }

    #[test]
    fn determinant_small() {
        let m = vec![q(&[0, 2]), q(&[3, 4])];
        assert_eq!(determinant(m), BigRational::from_integer((-6).into()));
    }
}
