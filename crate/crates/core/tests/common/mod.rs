#![allow(dead_code)]

pub mod oracle;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use srbm_core::{is_completely_s, Matrix, ProblemData, Rational, Scalar};

pub fn q(n: i64, d: i64) -> Rational {
    Rational::from_ratio(n, d)
}

pub fn ints(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&n| Rational::from_i64(n)).collect()
}

pub fn mat(rows: [[(i64, i64); 3]; 3]) -> Matrix<Rational> {
    Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&(n, d)| q(n, d)).collect()).collect()).unwrap()
}

pub fn data(theta: Vec<Rational>, r: Matrix<Rational>) -> ProblemData<Rational> {
    ProblemData::with_identity_covariance(theta, r).unwrap()
}

pub struct Example {
    pub name: &'static str,
    pub theta: Vec<Rational>,
    pub r: Matrix<Rational>,
    pub u_star: Vec<Rational>,
    pub u: Vec<Rational>,
    pub v: Vec<Rational>,
}

/// The five worked examples of divergent LCP solutions, as printed.
pub fn worked_examples() -> Vec<Example> {
    vec![
        Example {
            name: "Category I",
            theta: ints(&[-1, -1, -1]),
            r: mat([[(1, 1), (1, 3), (1, 3)], [(2, 1), (1, 1), (-1, 2)], [(2, 1), (-1, 2), (1, 1)]]),
            u_star: vec![q(1, 5), q(6, 5), q(6, 5)],
            u: ints(&[1, 0, 0]),
            v: ints(&[0, 1, 1]),
        },
        Example {
            name: "Category II (both complementary u positive)",
            theta: ints(&[-1, 1, -1]),
            r: mat([[(1, 1), (1, 1), (1, 2)], [(-2, 1), (1, 1), (0, 1)], [(3, 1), (0, 1), (1, 1)]]),
            u_star: ints(&[1, 1, 2]),
            u: vec![q(2, 3), q(1, 3), q(0, 1)],
            v: ints(&[0, 0, 1]),
        },
        Example {
            name: "Category II (one complementary u positive)",
            theta: ints(&[-1, -1, -1]),
            r: mat([[(1, 1), (1, 2), (3, 1)], [(1, 1), (1, 1), (2, 1)], [(2, 1), (1, 1), (1, 1)]]),
            u_star: vec![q(1, 5), q(2, 5), q(1, 5)],
            u: ints(&[1, 0, 0]),
            v: ints(&[0, 0, 1]),
        },
        Example {
            name: "Category IV",
            theta: ints(&[-1, -1, -1]),
            r: cat4_r(),
            u_star: vec![q(19, 68), q(15, 34), q(2, 17)],
            u: vec![q(1, 12), q(5, 6), q(0, 1)],
            v: vec![q(0, 1), q(0, 1), q(2, 3)],
        },
        Example {
            name: "Category V",
            theta: ints(&[-1, -1, 1]),
            r: mat([[(1, 1), (1, 1), (-2, 5)], [(2, 1), (1, 1), (-6, 5)], [(-2, 1), (-1, 10), (1, 1)]]),
            u_star: vec![q(9, 8), q(5, 14), q(45, 28)],
            u: ints(&[0, 1, 0]),
            v: vec![q(0, 1), q(0, 1), q(9, 10)],
        },
    ]
}

pub fn cat4_r() -> Matrix<Rational> {
    mat([[(1, 1), (11, 10), (2, 1)], [(2, 1), (1, 1), (0, 1)], [(0, 1), (2, 1), (1, 1)]])
}

pub fn bek_r() -> Matrix<Rational> {
    mat([[(1, 1), (3, 1), (0, 1)], [(0, 1), (1, 1), (3, 1)], [(3, 1), (0, 1), (1, 1)]])
}

/// A rational `n/d` with `|n| ≤ max_num`, `1 ≤ d ≤ max_den`.
pub fn random_rational(rng: &mut ChaCha8Rng, max_num: i64, max_den: i64) -> Rational {
    q(rng.random_range(-max_num..=max_num), rng.random_range(1..=max_den))
}

pub fn random_positive(rng: &mut ChaCha8Rng, max_num: i64, max_den: i64) -> Rational {
    q(rng.random_range(1..=max_num), rng.random_range(1..=max_den))
}

fn has_zero_minor(r: &Matrix<Rational>) -> bool {
    srbm_core::IndexSet::nonempty_subsets(3)
        .into_iter()
        .any(|s| r.principal(s).det().is_zero())
}

/// Unit-diagonal `R` with random rational off-diagonal entries, completely-S
/// and with no vanishing principal minor.
pub fn random_canonical_r(rng: &mut ChaCha8Rng) -> Matrix<Rational> {
    loop {
        let r = Matrix::from_fn(3, |i, j| {
            if i == j {
                Rational::one()
            } else {
                random_rational(rng, 12, 4)
            }
        });
        if !has_zero_minor(&r) && is_completely_s(&r).unwrap().holds {
            return r;
        }
    }
}

/// Canonical drift: every entry in {-1, 1}, mostly -1.
pub fn random_canonical_theta(rng: &mut ChaCha8Rng) -> Vec<Rational> {
    (0..3)
        .map(|_| if rng.random_bool(0.8) { -Rational::one() } else { Rational::one() })
        .collect()
}

/// Random canonical data that satisfies `R` nonsingular, `R⁻¹θ < 0`.
pub fn random_stable_candidate(rng: &mut ChaCha8Rng) -> (Vec<Rational>, Matrix<Rational>) {
    loop {
        let r = random_canonical_r(rng);
        let theta = random_canonical_theta(rng);
        if srbm_core::condition_15(&theta, &r).unwrap().holds() {
            return (theta, r);
        }
    }
}

/// Spiral data built from the cycle parameters `a, b > 0` with gain
/// `Πa/Πb < 1`; transposed half the time to give the clockwise class.
pub fn random_spiral_stable(rng: &mut ChaCha8Rng) -> (Vec<Rational>, Matrix<Rational>) {
    loop {
        let a: Vec<Rational> = (0..3).map(|_| random_positive(rng, 8, 4)).collect();
        let b: Vec<Rational> = (0..3).map(|_| random_positive(rng, 8, 4)).collect();
        let gain = a.iter().fold(Rational::one(), |p, x| p * x.clone())
            / b.iter().fold(Rational::one(), |p, x| p * x.clone());
        if gain >= Rational::one() {
            continue;
        }
        let one = Rational::one();
        let rows = vec![
            vec![one.clone(), one.clone() + a[1].clone(), one.clone() - b[2].clone()],
            vec![one.clone() - b[0].clone(), one.clone(), one.clone() + a[2].clone()],
            vec![one.clone() + a[0].clone(), one.clone() - b[1].clone(), one.clone()],
        ];
        let mut r = Matrix::from_rows(rows).unwrap();
        if rng.random_bool(0.5) {
            r = r.transpose();
        }
        let theta = ints(&[-1, -1, -1]);
        if has_zero_minor(&r) || !is_completely_s(&r).unwrap().holds {
            continue;
        }
        if srbm_core::condition_15(&theta, &r).unwrap().holds() {
            return (theta, r);
        }
    }
}
