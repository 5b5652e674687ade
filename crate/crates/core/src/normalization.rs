//! Problem data and the two scalings that bring it to canonical form:
//! unit diagonal for `R`, and drift components in `{-1, 0, 1}`.

use crate::error::{Error, Result};
use crate::index_set::IndexSet;
use crate::matrix::{is_completely_s, Matrix};
use crate::scalar::{Rational, Scalar, Sign};

/// SRBM data `(θ, Γ, R)` in dimension 2 or 3.
///
/// Construction validates that `Γ` is symmetric positive definite and that
/// `R` is completely-S.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemData<T> {
    theta: Vec<T>,
    gamma: Matrix<T>,
    r: Matrix<T>,
}

impl<T: Scalar> ProblemData<T> {
    pub fn new(theta: Vec<T>, gamma: Matrix<T>, r: Matrix<T>) -> Result<Self> {
        let dim = theta.len();
        if !(2..=3).contains(&dim) {
            return Err(Error::Dimension {
                expected: "2 or 3",
                found: dim,
            });
        }
        if gamma.dim() != dim || r.dim() != dim {
            return Err(Error::InvalidInput(format!(
                "theta has {dim} components but gamma is {g}x{g} and R is {n}x{n}",
                g = gamma.dim(),
                n = r.dim()
            )));
        }
        if theta.iter().any(|x| !x.is_valid()) {
            return Err(Error::NonFinite("theta"));
        }
        if !gamma.is_symmetric() || !is_positive_definite(&gamma) {
            return Err(Error::CovarianceNotPositiveDefinite);
        }
        let cs = is_completely_s(&r)?;
        if let Some(failing) = cs.failing {
            return Err(Error::NotCompletelyS { failing });
        }
        Ok(ProblemData { theta, gamma, r })
    }

    /// Data with identity covariance; the classification never depends on Γ.
    pub fn with_identity_covariance(theta: Vec<T>, r: Matrix<T>) -> Result<Self> {
        let dim = theta.len();
        Self::new(theta, Matrix::identity(dim), r)
    }

    pub fn dim(&self) -> usize {
        self.theta.len()
    }

    pub fn theta(&self) -> &[T] {
        &self.theta
    }

    pub fn gamma(&self) -> &Matrix<T> {
        &self.gamma
    }

    pub fn r(&self) -> &Matrix<T> {
        &self.r
    }

    /// Unit diagonal and `θᵢ ∈ {-1, 0, 1}`.
    pub fn is_canonical(&self) -> bool {
        canonical_violation(&self.theta, &self.r).is_none()
    }
}

impl ProblemData<Rational> {
    pub fn to_f64(&self) -> ProblemData<f64> {
        ProblemData {
            theta: self.theta.iter().map(|x| x.to_f64()).collect(),
            gamma: self.gamma.to_f64(),
            r: self.r.to_f64(),
        }
    }
}

/// Describes why `(θ, R)` is not canonical, or `None` when it is.
pub(crate) fn canonical_violation<T: Scalar>(theta: &[T], r: &Matrix<T>) -> Option<String> {
    for i in 0..r.dim() {
        if !r[(i, i)].approx_eq(&T::one()) {
            return Some(format!("R[{0}][{0}] = {1} is not 1", i + 1, r[(i, i)]));
        }
    }
    for (i, t) in theta.iter().enumerate() {
        let ok = t.is_zero() || t.approx_eq(&T::one()) || t.approx_eq(&-T::one());
        if !ok {
            return Some(format!("theta[{}] = {} is not in {{-1, 0, 1}}", i + 1, t));
        }
    }
    None
}

/// Strict positive definiteness via leading principal minors.
fn is_positive_definite<T: Scalar>(m: &Matrix<T>) -> bool {
    (1..=m.dim()).all(|k| {
        m.principal(IndexSet::full(k))
            .det()
            .strict_sign()
            .map(Sign::is_positive)
            .unwrap_or(false)
    })
}

/// Full record of the canonical scaling.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizationRecord<T> {
    /// Drift scaling `D`: `D_ii = 1/|θᵢ|`, or 1 when `θᵢ = 0`.
    pub drift_scaling: Matrix<T>,
    /// Column scaling `D̃ = diag(D R)`.
    pub column_scaling: Matrix<T>,
    pub original: ProblemData<T>,
    pub normalized: ProblemData<T>,
}

/// Applies the drift scaling, then the column scaling.
///
/// `θ̂ = Dθ`, `R̂ = DR`, `Γ̂ = DΓD`; then `R̃ = R̂ D̃⁻¹` with `D̃ = diag(R̂)`.
pub fn normalize<T: Scalar>(data: &ProblemData<T>) -> NormalizationRecord<T> {
    let dim = data.dim();
    let d: Vec<T> = data
        .theta
        .iter()
        .map(|t| if t.is_zero() { T::one() } else { T::one() / t.abs() })
        .collect();
    let theta_hat: Vec<T> = data
        .theta
        .iter()
        .zip(&d)
        .map(|(t, di)| {
            if t.is_zero() {
                T::zero()
            } else {
                t.clone() * di.clone()
            }
        })
        .collect();
    let r_hat = data.r.scale_rows(&d);
    let gamma_hat = data.gamma.scale_rows(&d).scale_columns(&d);

    let d_tilde = r_hat.diag();
    let inv_d_tilde: Vec<T> = d_tilde.iter().map(|x| T::one() / x.clone()).collect();
    let mut r_tilde = r_hat.scale_columns(&inv_d_tilde);
    // Pin the diagonal to exactly one so float round-off never breaks the
    // canonical-form check downstream.
    r_tilde = Matrix::from_fn(dim, |i, j| {
        if i == j {
            T::one()
        } else {
            r_tilde[(i, j)].clone()
        }
    });

    NormalizationRecord {
        drift_scaling: Matrix::diagonal(&d),
        column_scaling: Matrix::diagonal(&d_tilde),
        original: data.clone(),
        normalized: ProblemData {
            theta: theta_hat,
            gamma: gamma_hat,
            r: r_tilde,
        },
    }
}

/// Why the nonsingularity / negativity condition on `R⁻¹θ` fails.
#[derive(Debug, Clone, PartialEq)]
pub enum Condition15Failure<T> {
    /// `R` is singular; `u′R = 0`.
    Singular { null_vector: Vec<T> },
    /// `(R⁻¹θ)ᵢ ≥ 0` at the first such index.
    NonnegativeComponent { index: usize, value: T },
}

/// Result of checking "`R` nonsingular and `R⁻¹θ < 0`".
#[derive(Debug, Clone, PartialEq)]
pub enum Condition15<T> {
    Holds { u_star: Vec<T> },
    Fails(Condition15Failure<T>),
}

impl<T> Condition15<T> {
    pub fn holds(&self) -> bool {
        matches!(self, Condition15::Holds { .. })
    }

    pub fn u_star(&self) -> Option<&[T]> {
        match self {
            Condition15::Holds { u_star } => Some(u_star),
            Condition15::Fails(_) => None,
        }
    }
}

/// Checks `R` nonsingular and `R⁻¹θ < 0`; on success `u* = -R⁻¹θ > 0`.
pub fn condition_15<T: Scalar>(theta: &[T], r: &Matrix<T>) -> Result<Condition15<T>> {
    let det_sign = r
        .det()
        .strict_sign()
        .map_err(Error::indeterminate("determinant of R"))?;
    if det_sign.is_zero() {
        return Ok(Condition15::Fails(Condition15Failure::Singular {
            null_vector: r.left_null_vector(),
        }));
    }
    let gamma = r.solve(theta)?;
    for (i, g) in gamma.iter().enumerate() {
        let s = g
            .strict_sign()
            .map_err(Error::indeterminate(format!("component {} of R^-1 theta", i + 1)))?;
        if s != Sign::Negative {
            return Ok(Condition15::Fails(Condition15Failure::NonnegativeComponent {
                index: i,
                value: g.clone(),
            }));
        }
    }
    Ok(Condition15::Holds {
        u_star: gamma.into_iter().map(|g| -g).collect(),
    })
}

impl<T: Scalar> ProblemData<T> {
    pub fn condition_15(&self) -> Result<Condition15<T>> {
        condition_15(&self.theta, &self.r)
    }
}
