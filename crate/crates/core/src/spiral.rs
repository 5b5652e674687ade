//! Boundary spirals in three dimensions.
//!
//! `(θ, R)` lies in `C1` when `θ < 0` and six strict inequalities between
//! `θ` and the off-diagonal entries of `R` hold; then every fluid path started
//! on an axis circles counter-clockwise around the boundary of the orthant,
//! and each full turn scales it by the single-cycle gain `β`. `C2` is the
//! mirror image (all six inequalities reversed, clockwise turns).
//!
//! On canonical data (unit diagonal, `θ = -e`) the matrix `V = R - 11′`
//! has the sign pattern
//!
//! ```text
//!     [  0   a2  -b3 ]
//! V = [ -b1   0   a3 ]      a, b > 0,   β = a1 a2 a3 / (b1 b2 b3)
//!     [  a1 -b2   0  ]
//! ```
//!
//! for `C1` members; `C2` members have it after reversing the coordinate
//! order.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::normalization::canonical_violation;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Membership {
    /// Counter-clockwise spiral.
    C1,
    /// Clockwise spiral.
    C2,
    NotInC,
}

impl Membership {
    pub fn in_c(self) -> bool {
        self != Membership::NotInC
    }
}

impl fmt::Display for Membership {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Membership::C1 => "C1",
            Membership::C2 => "C2",
            Membership::NotInC => "NotInC",
        })
    }
}

/// One of the six pairwise comparisons, written in its `C1` sense.
#[derive(Debug, Clone, PartialEq)]
pub struct Comparison<T> {
    pub name: &'static str,
    pub lhs: T,
    pub rhs: T,
    /// Required ordering of `lhs` against `rhs` for `C1`; `C2` needs the reverse.
    pub c1_sense: Ordering,
    /// Observed ordering; `None` when a float comparison is within tolerance.
    pub outcome: Option<Ordering>,
}

impl<T> Comparison<T> {
    pub fn holds_c1(&self) -> Option<bool> {
        self.outcome.map(|o| o == self.c1_sense)
    }

    pub fn holds_c2(&self) -> Option<bool> {
        self.outcome.map(|o| o == self.c1_sense.reverse())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpiralReport<T> {
    pub membership: Membership,
    pub beta: Option<T>,
    pub theta_negative: bool,
    pub comparisons: Vec<Comparison<T>>,
    /// Cycle parameters read off `V` (of the index-reversed data for `C2`).
    pub a: Option<Vec<T>>,
    pub b: Option<Vec<T>>,
}

/// `V_ij = R_ij - 1`.
pub fn v_matrix<T: Scalar>(r: &Matrix<T>) -> Matrix<T> {
    Matrix::from_fn(r.dim(), |i, j| r[(i, j)].clone() - T::one())
}

// (name, lhs index, rhs theta index, rhs R entry, C1 sense), 0-based.
type ComparisonSpec = (&'static str, usize, usize, (usize, usize), Ordering);

const COMPARISONS: [ComparisonSpec; 6] = [
    ("theta1 > theta2*R12", 0, 1, (0, 1), Ordering::Greater),
    ("theta3 < theta2*R32", 2, 1, (2, 1), Ordering::Less),
    ("theta2 > theta3*R23", 1, 2, (1, 2), Ordering::Greater),
    ("theta1 < theta3*R13", 0, 2, (0, 2), Ordering::Less),
    ("theta3 > theta1*R31", 2, 0, (2, 0), Ordering::Greater),
    ("theta2 < theta1*R21", 1, 0, (1, 0), Ordering::Less),
];

fn check_canonical_3d<T: Scalar>(theta: &[T], r: &Matrix<T>) -> Result<()> {
    if theta.len() != 3 || r.dim() != 3 {
        return Err(Error::Dimension {
            expected: "3",
            found: theta.len(),
        });
    }
    match canonical_violation(theta, r) {
        Some(why) => Err(Error::NotCanonical(why)),
        None => Ok(()),
    }
}

/// Evaluates the seven defining conditions of `C1`/`C2` on canonical data.
pub fn spiral_membership<T: Scalar>(theta: &[T], r: &Matrix<T>) -> Result<SpiralReport<T>> {
    check_canonical_3d(theta, r)?;
    let theta_negative = theta.iter().all(|t| t.is_negative());
    let comparisons: Vec<Comparison<T>> = COMPARISONS
        .iter()
        .map(|&(name, l, t, (i, j), sense)| {
            let lhs = theta[l].clone();
            let rhs = theta[t].clone() * r[(i, j)].clone();
            let outcome = (lhs.clone() - rhs.clone()).strict_sign().ok().map(|s| match s {
                crate::scalar::Sign::Negative => Ordering::Less,
                crate::scalar::Sign::Zero => Ordering::Equal,
                crate::scalar::Sign::Positive => Ordering::Greater,
            });
            Comparison {
                name,
                lhs,
                rhs,
                c1_sense: sense,
                outcome,
            }
        })
        .collect();

    let membership = if !theta_negative {
        Membership::NotInC
    } else {
        let c1_definite = comparisons.iter().all(|c| c.holds_c1() == Some(true));
        let c2_definite = comparisons.iter().all(|c| c.holds_c2() == Some(true));
        let c1_possible = comparisons.iter().all(|c| c.holds_c1() != Some(false));
        let c2_possible = comparisons.iter().all(|c| c.holds_c2() != Some(false));
        if c1_definite {
            Membership::C1
        } else if c2_definite {
            Membership::C2
        } else if c1_possible || c2_possible {
            let c = comparisons.iter().find(|c| c.outcome.is_none()).expect("an indeterminate comparison");
            return Err(Error::Indeterminate {
                context: format!("spiral condition {}", c.name),
                value: (c.lhs.clone() - c.rhs.clone()).to_f64(),
            });
        } else {
            Membership::NotInC
        }
    };

    let (beta, a, b) = if membership.in_c() {
        let (a, b) = cycle_parameters(r, membership)?;
        (Some(single_cycle_gain(theta, r, membership)?), Some(a), Some(b))
    } else {
        (None, None, None)
    };
    Ok(SpiralReport {
        membership,
        beta,
        theta_negative,
        comparisons,
        a,
        b,
    })
}

/// Single-cycle gain from the explicit product of three ratios.
///
/// `C1`: `β₁ = Π (θᵢ − θⱼRᵢⱼ)/(θⱼRₖⱼ − θₖ)` over the cycle `3 → 1 → 2 → 3`;
/// `C2`: `β₂ = 1/β₁`, written as its own product so it never divides by a
/// vanishing `β₁` term.
pub fn single_cycle_gain<T: Scalar>(theta: &[T], r: &Matrix<T>, membership: Membership) -> Result<T> {
    if theta.len() != 3 || r.dim() != 3 {
        return Err(Error::Dimension {
            expected: "3",
            found: theta.len(),
        });
    }
    let t = |i: usize| theta[i].clone();
    let rr = |i: usize, j: usize| r[(i, j)].clone();
    match membership {
        Membership::C1 => Ok(((t(0) - t(1) * rr(0, 1)) / (t(1) * rr(2, 1) - t(2)))
            * ((t(1) - t(2) * rr(1, 2)) / (t(2) * rr(0, 2) - t(0)))
            * ((t(2) - t(0) * rr(2, 0)) / (t(0) * rr(1, 0) - t(1)))),
        Membership::C2 => Ok(((t(2) - t(1) * rr(2, 1)) / (t(1) * rr(0, 1) - t(0)))
            * ((t(0) - t(2) * rr(0, 2)) / (t(2) * rr(1, 2) - t(1)))
            * ((t(1) - t(0) * rr(1, 0)) / (t(0) * rr(2, 0) - t(2)))),
        Membership::NotInC => Err(Error::Precondition(
            "single-cycle gain is only defined for spiral data (C1 or C2)".into(),
        )),
    }
}

/// Coordinate reversal `(1, 2, 3) → (3, 2, 1)`; maps `C2` onto `C1`.
pub fn reverse_coordinates<T: Scalar>(theta: &[T], r: &Matrix<T>) -> (Vec<T>, Matrix<T>) {
    let n = theta.len();
    let theta_rev: Vec<T> = theta.iter().rev().cloned().collect();
    let r_rev = Matrix::from_fn(n, |i, j| r[(n - 1 - i, n - 1 - j)].clone());
    (theta_rev, r_rev)
}

/// The `(a, b)` parametrisation of `V` (canonical data). For `C2`, the values
/// belong to the index-reversed data.
pub fn cycle_parameters<T: Scalar>(r: &Matrix<T>, membership: Membership) -> Result<(Vec<T>, Vec<T>)> {
    let r = match membership {
        Membership::C1 => r.clone(),
        Membership::C2 => reverse_coordinates(&[T::zero(), T::zero(), T::zero()], r).1,
        Membership::NotInC => {
            return Err(Error::Precondition("cycle parameters need C1 or C2 data".into()))
        }
    };
    let v = v_matrix(&r);
    let a = vec![v[(2, 0)].clone(), v[(0, 1)].clone(), v[(1, 2)].clone()];
    let b = vec![-v[(1, 0)].clone(), -v[(2, 1)].clone(), -v[(0, 2)].clone()];
    Ok((a, b))
}

/// `a₁a₂a₃ / (b₁b₂b₃)`.
pub fn gain_from_parameters<T: Scalar>(a: &[T], b: &[T]) -> T {
    let prod = |x: &[T]| x.iter().fold(T::one(), |acc, v| acc * v.clone());
    prod(a) / prod(b)
}

/// A vector `u > 0` with `u′e = 1` and `u′V ≥ 0`, available for spiral data
/// whose gain is at least one.
///
/// Built as `(1, a₁a₂/(b₁b₂), a₂/b₂)` (then normalised); the first two
/// entries of `u′V` vanish and the third is `b₃(β − 1)` before normalisation.
pub fn spiral_certificate<T: Scalar>(theta: &[T], r: &Matrix<T>) -> Result<Vec<T>> {
    let report = spiral_membership(theta, r)?;
    let beta = report.beta.clone().ok_or_else(|| {
        Error::Precondition("certificate requires data in C1 or C2".into())
    })?;
    let at_least_one = (beta.clone() - T::one())
        .strict_sign()
        .map_err(Error::indeterminate("single-cycle gain against 1"))?;
    if at_least_one.is_negative() {
        return Err(Error::Precondition(format!(
            "certificate requires gain >= 1, got {beta}"
        )));
    }
    let a = report.a.expect("present with beta");
    let b = report.b.expect("present with beta");
    let raw = vec![
        T::one(),
        a[0].clone() * a[1].clone() / (b[0].clone() * b[1].clone()),
        a[1].clone() / b[1].clone(),
    ];
    let total = raw.iter().fold(T::zero(), |acc, x| acc + x.clone());
    let u: Vec<T> = raw.into_iter().map(|x| x / total.clone()).collect();
    Ok(match report.membership {
        Membership::C2 => u.into_iter().rev().collect(),
        _ => u,
    })
}

/// Re-checks `u > 0`, `u′e = 1` and `u′V ≥ 0`.
pub fn certificate_is_valid<T: Scalar>(u: &[T], r: &Matrix<T>) -> bool {
    let sum = u.iter().fold(T::zero(), |acc, x| acc + x.clone());
    u.iter().all(|x| x.is_positive())
        && sum.approx_eq(&T::one())
        && v_matrix(r).vec_mul(u).iter().all(|x| !x.is_negative())
}
