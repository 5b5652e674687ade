//! Exact piecewise-linear fluid paths.
//!
//! A fluid path satisfies `z(t) = z(0) + θt + R y(t)`, `z ≥ 0`, `y`
//! nondecreasing from zero, and `yⱼ` increasing only while `zⱼ = 0`. With
//! constant pushing rates on each face the path is piecewise linear, so it can
//! be integrated event by event without any time stepping: a segment ends
//! exactly when a positive coordinate reaches zero.
//!
//! Rates on a face come from the restricted LCP solved by [`face_velocity`].
//! When several complementary supports are feasible the smallest one wins,
//! ties broken lexicographically, which makes every trace reproducible.

use crate::error::{Error, Result};
use crate::index_set::IndexSet;
use crate::lcp::{support_solution, SupportOutcome};
use crate::matrix::Matrix;
use crate::scalar::{norm1, Scalar};
use crate::spiral::{spiral_membership, Membership};

/// Pushing rates and resulting velocity on a face `{zᵢ = 0, i ∈ active_set}`.
#[derive(Debug, Clone, PartialEq)]
pub struct FaceRates<T> {
    pub active_set: IndexSet,
    /// Coordinates that are actually pushed (`uᵢ > 0` or degenerate zero).
    pub support: IndexSet,
    pub u: Vec<T>,
    pub velocity: Vec<T>,
}

/// Solves for `u ≥ 0` supported on `active_set` such that the velocity
/// `θ + R u` is nonnegative on the face and zero wherever `u` pushes.
pub fn face_velocity<T: Scalar>(theta: &[T], r: &Matrix<T>, active_set: IndexSet) -> Result<FaceRates<T>> {
    let d = theta.len();
    if !active_set.is_subset_of(IndexSet::full(d)) {
        return Err(Error::InvalidInput(format!(
            "active set {active_set} exceeds dimension {d}"
        )));
    }
    for support in active_set.subsets() {
        match support_solution(theta, r, support, active_set) {
            SupportOutcome::Infeasible => continue,
            SupportOutcome::Continuum => return Err(Error::DegenerateRay { support }),
            SupportOutcome::Unique(u) => {
                let velocity: Vec<T> = r
                    .mul_vec(&u)
                    .into_iter()
                    .zip(theta)
                    .enumerate()
                    .map(|(i, (ru, t))| {
                        let v = t.clone() + ru;
                        if support.contains(i) || v.is_zero() {
                            T::zero()
                        } else {
                            v
                        }
                    })
                    .collect();
                return Ok(FaceRates {
                    active_set,
                    support,
                    u,
                    velocity,
                });
            }
        }
    }
    Err(Error::NoFeasibleRates(active_set))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Breakpoint<T> {
    pub t: T,
    pub z: Vec<T>,
    pub y: Vec<T>,
    /// Coordinates equal to zero at this breakpoint.
    pub active_set: IndexSet,
    /// Pushing rates on the outgoing segment.
    pub rates: Vec<T>,
    /// Velocity on the outgoing segment.
    pub velocity: Vec<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum FluidVerdict<T> {
    /// `|z| ≤ atol`, or the path returned to an axis ray contracted by a
    /// factor below one (the remainder is a scaled copy, so it converges).
    AttractedToOrigin,
    /// `|z|` passed the divergence threshold, or the path left along a ray.
    Diverged,
    /// The path returned to an axis ray expanded by this factor.
    SpiralGrowth(T),
    /// Zero velocity away from the origin.
    Stalled,
    BudgetExhausted,
}

impl<T> FluidVerdict<T> {
    pub fn is_attracted(&self) -> bool {
        matches!(self, FluidVerdict::AttractedToOrigin)
    }

    pub fn name(&self) -> &'static str {
        match self {
            FluidVerdict::AttractedToOrigin => "AttractedToOrigin",
            FluidVerdict::Diverged => "Diverged",
            FluidVerdict::SpiralGrowth(_) => "SpiralGrowth",
            FluidVerdict::Stalled => "Stalled",
            FluidVerdict::BudgetExhausted => "BudgetExhausted",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FluidPath<T> {
    pub breakpoints: Vec<Breakpoint<T>>,
    pub verdict: FluidVerdict<T>,
}

impl<T: Scalar> FluidPath<T> {
    /// Re-checks the defining conditions at every breakpoint and on every
    /// segment: `z ≥ 0`, `y` nondecreasing from zero, `z = z0 + θt + Ry`, and
    /// pushing only on coordinates that stay at zero.
    pub fn is_feasible(&self, theta: &[T], r: &Matrix<T>) -> bool {
        let Some(first) = self.breakpoints.first() else {
            return false;
        };
        let z0 = &first.z;
        if first.y.iter().any(|y| !y.is_zero()) {
            return false;
        }
        let mut prev_y: Option<&Vec<T>> = None;
        for bp in &self.breakpoints {
            if bp.z.iter().any(|z| z.is_negative()) {
                return false;
            }
            let ry = r.mul_vec(&bp.y);
            let consistent = (0..theta.len()).all(|i| {
                (z0[i].clone() + theta[i].clone() * bp.t.clone() + ry[i].clone() - bp.z[i].clone()).is_zero()
            });
            if !consistent {
                return false;
            }
            if let Some(py) = prev_y {
                if py.iter().zip(&bp.y).any(|(a, b)| (b.clone() - a.clone()).is_negative()) {
                    return false;
                }
            }
            prev_y = Some(&bp.y);
        }
        for pair in self.breakpoints.windows(2) {
            let (a, b) = (&pair[0], &pair[1]);
            for i in 0..theta.len() {
                if a.rates[i].is_positive() && !(a.z[i].is_zero() && b.z[i].is_zero()) {
                    return false;
                }
            }
        }
        true
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluidBudget {
    pub max_breakpoints: usize,
    pub horizon: f64,
    pub atol: f64,
    /// Defaults to `1e6 · max(1, |z0|)`.
    pub divergence_threshold: Option<f64>,
}

impl Default for FluidBudget {
    fn default() -> Self {
        FluidBudget {
            max_breakpoints: 10_000,
            horizon: 1e6,
            atol: 1e-9,
            divergence_threshold: None,
        }
    }
}

/// Integrates the fluid path from `z0` segment by segment.
pub fn fluid_trace<T: Scalar>(
    theta: &[T],
    r: &Matrix<T>,
    z0: &[T],
    budget: &FluidBudget,
) -> Result<FluidPath<T>> {
    let d = theta.len();
    if z0.len() != d || r.dim() != d {
        return Err(Error::InvalidInput("z0, theta and R dimensions differ".into()));
    }
    if z0.iter().any(|z| z.is_negative() || !z.is_valid()) {
        return Err(Error::Precondition("z0 must be nonnegative".into()));
    }
    let threshold = budget
        .divergence_threshold
        .unwrap_or_else(|| 1e6 * norm1(z0).to_f64().max(1.0));

    let mut t = T::zero();
    let mut z: Vec<T> = z0.iter().map(|x| if x.is_zero() { T::zero() } else { x.clone() }).collect();
    let mut y = vec![T::zero(); d];
    let mut axis_visits: Vec<(usize, T)> = Vec::new();
    let mut breakpoints = Vec::new();

    let verdict = loop {
        let face = IndexSet::from_indices((0..d).filter(|&i| z[i].is_zero()));
        let rates = face_velocity(theta, r, face)?;
        breakpoints.push(Breakpoint {
            t: t.clone(),
            z: z.clone(),
            y: y.clone(),
            active_set: face,
            rates: rates.u.clone(),
            velocity: rates.velocity.clone(),
        });

        let size = norm1(&z).to_f64();
        if size <= budget.atol {
            break FluidVerdict::AttractedToOrigin;
        }
        if size > threshold {
            break FluidVerdict::Diverged;
        }
        if face.len() + 1 == d {
            let axis = face.complement(d).iter().next().expect("one positive coordinate");
            let magnitude = z[axis].clone();
            if let Some((_, previous)) = axis_visits.iter().rev().find(|(a, _)| *a == axis) {
                let factor = magnitude.clone() / previous.clone();
                match (factor.clone() - T::one()).sign() {
                    crate::scalar::Sign::Positive => break FluidVerdict::SpiralGrowth(factor),
                    crate::scalar::Sign::Negative => break FluidVerdict::AttractedToOrigin,
                    crate::scalar::Sign::Zero => {}
                }
            }
            axis_visits.push((axis, magnitude));
        }
        if breakpoints.len() >= budget.max_breakpoints {
            break FluidVerdict::BudgetExhausted;
        }

        // Earliest time a positive coordinate with negative velocity hits zero.
        let vel = &rates.velocity;
        let mut step: Option<T> = None;
        for i in 0..d {
            if z[i].is_positive() && vel[i].is_negative() {
                let hit = z[i].clone() / (-vel[i].clone());
                if step.as_ref().is_none_or(|s| hit < *s) {
                    step = Some(hit);
                }
            }
        }
        let Some(dt) = step else {
            break if vel.iter().all(|v| v.is_zero()) {
                FluidVerdict::Stalled
            } else {
                FluidVerdict::Diverged
            };
        };
        if (t.clone() + dt.clone()).to_f64() > budget.horizon {
            break FluidVerdict::BudgetExhausted;
        }
        t = t + dt.clone();
        for i in 0..d {
            let next = z[i].clone() + vel[i].clone() * dt.clone();
            z[i] = if next.is_zero() || next.is_negative() {
                T::zero()
            } else {
                next
            };
            y[i] = y[i].clone() + rates.u[i].clone() * dt.clone();
        }
    };

    Ok(FluidPath { breakpoints, verdict })
}

/// Closed-form axis intersections of a counter-clockwise boundary spiral
/// started at `(0, 0, κ)`: `3 · n_cycles` points, the `n`-th cycle ending at
/// `(0, 0, βⁿκ)`.
pub fn spiral_breakpoints<T: Scalar>(
    theta: &[T],
    r: &Matrix<T>,
    kappa: T,
    n_cycles: usize,
) -> Result<Vec<Vec<T>>> {
    let report = spiral_membership(theta, r)?;
    if report.membership != Membership::C1 {
        return Err(Error::Precondition(
            "closed-form spiral breakpoints need counter-clockwise (C1) data".into(),
        ));
    }
    if !kappa.is_positive() {
        return Err(Error::Precondition("kappa must be positive".into()));
    }
    let t = |i: usize| theta[i].clone();
    let rr = |i: usize, j: usize| r[(i, j)].clone();
    let ratios = [
        (t(0) - t(1) * rr(0, 1)) / (t(1) * rr(2, 1) - t(2)),
        (t(1) - t(2) * rr(1, 2)) / (t(2) * rr(0, 2) - t(0)),
        (t(2) - t(0) * rr(2, 0)) / (t(0) * rr(1, 0) - t(1)),
    ];
    let mut magnitude = kappa;
    let mut points = Vec::with_capacity(3 * n_cycles);
    for _ in 0..n_cycles {
        for (axis, ratio) in ratios.iter().enumerate() {
            magnitude = magnitude * ratio.clone();
            let mut p = vec![T::zero(); 3];
            p[axis] = magnitude.clone();
            points.push(p);
        }
    }
    Ok(points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lcp::solve_lcp;
    use crate::scalar::Rational;

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&n| Rational::from_i64(n)).collect()
    }

    fn bek() -> Matrix<Rational> {
        Matrix::from_rows(vec![ints(&[1, 3, 0]), ints(&[0, 1, 3]), ints(&[3, 0, 1])]).unwrap()
    }

    fn neg() -> Vec<Rational> {
        ints(&[-1, -1, -1])
    }

    #[test]
    fn bek_face_two_velocity() {
        let rates = face_velocity(&neg(), &bek(), IndexSet::singleton(1)).unwrap();
        assert_eq!(rates.u, ints(&[0, 1, 0]));
        assert_eq!(rates.velocity, ints(&[2, 0, -1]));
    }

    #[test]
    fn interior_velocity_is_drift() {
        let theta = vec![-0.5, -1.0, -2.0];
        let rates = face_velocity(&theta, &Matrix::identity(3), IndexSet::EMPTY).unwrap();
        assert_eq!(rates.u, vec![0.0; 3]);
        assert_eq!(rates.velocity, theta);
    }

    #[test]
    fn origin_with_identity_reflection() {
        let rates = face_velocity(&neg(), &Matrix::identity(3), IndexSet::full(3)).unwrap();
        assert_eq!(rates.u, ints(&[1, 1, 1]));
        assert_eq!(rates.velocity, ints(&[0, 0, 0]));
    }

    #[test]
    fn bek_trace_spirals_outward() {
        let path = fluid_trace(&neg(), &bek(), &ints(&[0, 0, 1]), &FluidBudget::default()).unwrap();
        let zs: Vec<Vec<Rational>> = path.breakpoints.iter().map(|b| b.z.clone()).collect();
        assert_eq!(
            zs,
            vec![ints(&[0, 0, 1]), ints(&[2, 0, 0]), ints(&[0, 4, 0]), ints(&[0, 0, 8])]
        );
        assert_eq!(path.verdict, FluidVerdict::SpiralGrowth(Rational::from_i64(8)));
        assert!(path.is_feasible(&neg(), &bek()));
    }

    #[test]
    fn decoupled_coordinates_reach_origin() {
        let path = fluid_trace(
            &neg(),
            &Matrix::identity(3),
            &ints(&[1, 2, 3]),
            &FluidBudget::default(),
        )
        .unwrap();
        let ts: Vec<Rational> = path.breakpoints.iter().map(|b| b.t.clone()).collect();
        assert_eq!(ts, ints(&[0, 1, 2, 3]));
        assert!(path.verdict.is_attracted());
        assert_eq!(path.breakpoints.last().unwrap().z, ints(&[0, 0, 0]));
    }

    #[test]
    fn category_one_diverges_off_face_one() {
        let q = |n, d| Rational::from_ratio(n, d);
        let r = Matrix::from_rows(vec![
            vec![q(1, 1), q(1, 3), q(1, 3)],
            vec![q(2, 1), q(1, 1), q(-1, 2)],
            vec![q(2, 1), q(-1, 2), q(1, 1)],
        ])
        .unwrap();
        let path = fluid_trace(&neg(), &r, &ints(&[0, 1000, 1000]), &FluidBudget::default()).unwrap();
        assert_eq!(path.breakpoints[0].velocity, ints(&[0, 1, 1]));
        assert_eq!(path.verdict, FluidVerdict::Diverged);
    }

    #[test]
    fn closed_form_breakpoints() {
        let one = spiral_breakpoints(&neg(), &bek(), Rational::one(), 1).unwrap();
        assert_eq!(one, vec![ints(&[2, 0, 0]), ints(&[0, 4, 0]), ints(&[0, 0, 8])]);
        let two = spiral_breakpoints(&neg(), &bek(), Rational::one(), 2).unwrap();
        assert_eq!(two[5], ints(&[0, 0, 64]));
        let unit = Matrix::from_rows(vec![ints(&[1, 2, 0]), ints(&[0, 1, 2]), ints(&[2, 0, 1])]).unwrap();
        let pts = spiral_breakpoints(&neg(), &unit, Rational::from_i64(5), 1).unwrap();
        assert_eq!(pts[2], ints(&[0, 0, 5]));
    }

    #[test]
    fn closed_form_rejects_non_spiral_data() {
        assert!(matches!(
            spiral_breakpoints(&neg(), &Matrix::identity(3), Rational::one(), 1),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn linear_path_from_origin_matches_an_lcp_solution() {
        let q = |n, d| Rational::from_ratio(n, d);
        let r = Matrix::from_rows(vec![
            vec![q(1, 1), q(11, 10), q(2, 1)],
            vec![q(2, 1), q(1, 1), q(0, 1)],
            vec![q(0, 1), q(2, 1), q(1, 1)],
        ])
        .unwrap();
        let path = fluid_trace(&neg(), &r, &ints(&[0, 0, 0]), &FluidBudget::default()).unwrap();
        let first = &path.breakpoints[0];
        let sols = solve_lcp(&neg(), &r).unwrap();
        assert!(sols.iter().any(|s| s.u == first.rates && s.v == first.velocity));
    }

    #[test]
    fn negative_start_is_rejected() {
        assert!(fluid_trace(&neg(), &bek(), &ints(&[0, -1, 0]), &FluidBudget::default()).is_err());
    }
}
