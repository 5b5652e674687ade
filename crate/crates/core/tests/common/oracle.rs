//! Reference computations written independently of the library: cofactor
//! inverses, brute-force complementary supports and direct category rules.

use num_traits::{One, Signed, Zero};
use srbm_core::{Matrix, Rational};

pub type M3 = [[Rational; 3]; 3];

pub fn to_array(r: &Matrix<Rational>) -> M3 {
    std::array::from_fn(|i| std::array::from_fn(|j| r[(i, j)].clone()))
}

pub fn det2(a: &Rational, b: &Rational, c: &Rational, d: &Rational) -> Rational {
    a * d - b * c
}

pub fn det3(m: &M3) -> Rational {
    let minor = |r: usize, c: usize| {
        let rows: Vec<usize> = (0..3).filter(|&i| i != r).collect();
        let cols: Vec<usize> = (0..3).filter(|&j| j != c).collect();
        det2(&m[rows[0]][cols[0]], &m[rows[0]][cols[1]], &m[rows[1]][cols[0]], &m[rows[1]][cols[1]])
    };
    (0..3).fold(Rational::zero(), |acc, c| {
        let term = &m[0][c] * minor(0, c);
        if c % 2 == 0 {
            acc + term
        } else {
            acc - term
        }
    })
}

/// Inverse by the adjugate formula; `None` when singular.
pub fn inverse3(m: &M3) -> Option<M3> {
    let det = det3(m);
    if det.is_zero() {
        return None;
    }
    let cof = |r: usize, c: usize| {
        let rows: Vec<usize> = (0..3).filter(|&i| i != r).collect();
        let cols: Vec<usize> = (0..3).filter(|&j| j != c).collect();
        let d = det2(&m[rows[0]][cols[0]], &m[rows[0]][cols[1]], &m[rows[1]][cols[0]], &m[rows[1]][cols[1]]);
        if (r + c).is_multiple_of(2) {
            d
        } else {
            -d
        }
    };
    Some(std::array::from_fn(|i| std::array::from_fn(|j| cof(j, i) / &det)))
}

pub fn mat_vec(m: &M3, x: &[Rational]) -> Vec<Rational> {
    (0..3)
        .map(|i| (0..3).fold(Rational::zero(), |acc, j| acc + &m[i][j] * &x[j]))
        .collect()
}

/// `-R⁻¹θ`.
pub fn proper_u(theta: &[Rational], r: &M3) -> Option<Vec<Rational>> {
    inverse3(r).map(|inv| mat_vec(&inv, theta).into_iter().map(|x| -x).collect())
}

/// Every LCP solution reachable through a support with a nonsingular
/// principal block, solved by Cramer's rule.
pub fn lcp_solutions(theta: &[Rational], r: &M3) -> Vec<(Vec<Rational>, Vec<Rational>)> {
    let mut out: Vec<(Vec<Rational>, Vec<Rational>)> = Vec::new();
    for mask in 0u8..8 {
        let idx: Vec<usize> = (0..3).filter(|i| mask & (1 << i) != 0).collect();
        let mut u = vec![Rational::zero(); 3];
        let solved = match idx.len() {
            0 => true,
            1 => {
                let i = idx[0];
                if r[i][i].is_zero() {
                    false
                } else {
                    u[i] = -&theta[i] / &r[i][i];
                    true
                }
            }
            2 => {
                let (i, j) = (idx[0], idx[1]);
                let d = det2(&r[i][i], &r[i][j], &r[j][i], &r[j][j]);
                if d.is_zero() {
                    false
                } else {
                    let (bi, bj) = (-&theta[i], -&theta[j]);
                    u[i] = det2(&bi, &r[i][j], &bj, &r[j][j]) / &d;
                    u[j] = det2(&r[i][i], &bi, &r[j][i], &bj) / &d;
                    true
                }
            }
            _ => match proper_u(theta, r) {
                Some(x) => {
                    u = x;
                    true
                }
                None => false,
            },
        };
        if !solved {
            continue;
        }
        let ru = mat_vec(r, &u);
        let v: Vec<Rational> = (0..3).map(|i| &theta[i] + &ru[i]).collect();
        let ok = (0..3).all(|i| !u[i].is_negative() && !v[i].is_negative() && (&u[i] * &v[i]).is_zero());
        if ok && !out.iter().any(|(x, _)| *x == u) {
            out.push((u, v));
        }
    }
    out
}

/// Category number 1–5 of a divergent solution, straight from the rules.
pub fn category(u: &[Rational], v: &[Rational], r: &M3) -> Option<u8> {
    let pos_v: Vec<usize> = (0..3).filter(|&i| v[i].is_positive()).collect();
    let zero_v: Vec<usize> = (0..3).filter(|&i| !v[i].is_positive()).collect();
    match pos_v.len() {
        2 => u[zero_v[0]].is_positive().then_some(1),
        1 => {
            let (i, j) = (zero_v[0], zero_v[1]);
            let d = det2(&r[i][i], &r[i][j], &r[j][i], &r[j][j]);
            let positive = [i, j].iter().filter(|&&k| u[k].is_positive()).count();
            match positive {
                0 => None,
                _ if d.is_positive() => Some(2),
                _ if d.is_zero() => Some(3),
                2 => Some(4),
                _ => Some(5),
            }
        }
        _ => None,
    }
}

/// Single-cycle gain as the product of the three axis-to-axis ratios of the
/// counter-clockwise boundary spiral, for `θ = -e` and unit diagonal.
pub fn spiral_gain_ccw(theta: &[Rational], r: &M3) -> Rational {
    let t = theta;
    let r1 = (&t[0] - &t[1] * &r[0][1]) / (&t[1] * &r[2][1] - &t[2]);
    let r2 = (&t[1] - &t[2] * &r[1][2]) / (&t[2] * &r[0][2] - &t[0]);
    let r3 = (&t[2] - &t[0] * &r[2][0]) / (&t[0] * &r[1][0] - &t[1]);
    r1 * r2 * r3
}

/// Same for the clockwise spiral: reverse the coordinate order first.
pub fn spiral_gain_cw(theta: &[Rational], r: &M3) -> Rational {
    let rev: M3 = std::array::from_fn(|i| std::array::from_fn(|j| r[2 - i][2 - j].clone()));
    let t: Vec<Rational> = theta.iter().rev().cloned().collect();
    spiral_gain_ccw(&t, &rev)
}

pub fn is_one(x: &Rational) -> bool {
    x.is_one()
}
