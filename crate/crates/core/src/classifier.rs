//! The three-dimensional positive-recurrence decision tree, plus the
//! two-dimensional criterion.
//!
//! ```text
//!  R nonsingular and R⁻¹θ < 0 ? ── no ──▶ not positive recurrent
//!            │ yes
//!  spiral data (C1 or C2) ? ── yes ──▶ β < 1: positive recurrent
//!            │ no                      β ≥ 1: not positive recurrent
//!  LCP has a divergent solution ? ── yes ──▶ not positive recurrent
//!            │ no
//!  positive recurrent
//! ```
//!
//! Every verdict carries a certificate that can be re-checked against the
//! normalized data with [`Certificate::is_valid_for`].

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::index_set::IndexSet;
use crate::lcp::{solve_and_classify, Category, LcpSolution};
use crate::matrix::{is_p_matrix, is_s_matrix, Matrix, SCertificate};
use crate::normalization::{condition_15, normalize, Condition15, Condition15Failure, NormalizationRecord, ProblemData};
use crate::scalar::{dot, Scalar};
use crate::spiral::{certificate_is_valid, spiral_certificate, spiral_membership, Membership, SpiralReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Decision {
    PositiveRecurrent,
    NotPositiveRecurrent,
}

impl Decision {
    pub fn as_str(self) -> &'static str {
        match self {
            Decision::PositiveRecurrent => "PositiveRecurrent",
            Decision::NotPositiveRecurrent => "NotPositiveRecurrent",
        }
    }
}

impl fmt::Display for Decision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Which branch of the decision tree produced the verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Basis {
    /// `R` singular or `R⁻¹θ` has a nonnegative component.
    Necessity15Fails,
    /// Spiral data with gain `β ≥ 1`.
    SpiralGainGe1,
    /// The LCP has a solution with `v ≠ 0`.
    DivergentLcpExists,
    /// Spiral data with gain `β < 1`.
    TheoremEltA,
    /// Not spiral data and `(u*, 0)` is the only LCP solution.
    TheoremEltB,
    TwoDPMatrix,
    TwoDFails,
}

impl Basis {
    pub fn as_str(self) -> &'static str {
        match self {
            Basis::Necessity15Fails => "Necessity15Fails",
            Basis::SpiralGainGe1 => "SpiralGainGE1",
            Basis::DivergentLcpExists => "DivergentLcpExists",
            Basis::TheoremEltA => "TheoremELT_a",
            Basis::TheoremEltB => "TheoremELT_b",
            Basis::TwoDPMatrix => "TwoD_PMatrix",
            Basis::TwoDFails => "TwoD_Fails",
        }
    }

    pub fn decision(self) -> Decision {
        match self {
            Basis::TheoremEltA | Basis::TheoremEltB | Basis::TwoDPMatrix => Decision::PositiveRecurrent,
            _ => Decision::NotPositiveRecurrent,
        }
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Evidence that `R` nonsingular with `R⁻¹θ < 0` fails.
#[derive(Debug, Clone, PartialEq)]
pub enum NecessityFailure<T> {
    /// `row` is row `index` of `R⁻¹`, so `row·θ = (R⁻¹θ)ᵢ = value ≥ 0`.
    /// Paired with an S-witness `w > 0`, `Rw > 0`, for which `row·Rw = wᵢ > 0`.
    NonnegativeComponent {
        index: usize,
        row: Vec<T>,
        value: T,
        s_witness: Vec<T>,
    },
    /// `u ≠ 0` with `u′R = 0` and `u·θ ≥ 0`.
    SingularNull { u: Vec<T> },
}

#[derive(Debug, Clone, PartialEq)]
pub enum Certificate<T> {
    ProperUnique { u_star: Vec<T> },
    SpiralStable { membership: Membership, beta: T },
    /// `u > 0`, `u′e = 1`, `u′V ≥ 0`.
    SpiralUnstable { membership: Membership, beta: T, u: Vec<T> },
    DivergentSolution(LcpSolution<T>),
    NecessityFailure(NecessityFailure<T>),
    /// `u* > 0` and every principal minor of the 2×2 `R`.
    TwoDStable { u_star: Vec<T>, minors: Vec<(IndexSet, T)> },
    /// A nonpositive principal minor of the 2×2 `R`.
    TwoDNotPMatrix { set: IndexSet, minor: T },
}

impl<T: Scalar> Certificate<T> {
    pub fn kind(&self) -> &'static str {
        match self {
            Certificate::ProperUnique { .. } => "ProperUnique",
            Certificate::SpiralStable { .. } => "SpiralStable",
            Certificate::SpiralUnstable { .. } => "SpiralUnstable",
            Certificate::DivergentSolution(_) => "DivergentSolution",
            Certificate::NecessityFailure(_) => "NecessityFailure",
            Certificate::TwoDStable { .. } => "TwoDStable",
            Certificate::TwoDNotPMatrix { .. } => "TwoDNotPMatrix",
        }
    }

    /// Re-derives the certificate's claim from `(θ, R)`.
    pub fn is_valid_for(&self, theta: &[T], r: &Matrix<T>) -> bool {
        match self {
            Certificate::ProperUnique { u_star } => is_proper(u_star, theta, r),
            Certificate::SpiralStable { membership, beta } => spiral_membership(theta, r)
                .map(|rep| {
                    rep.membership == *membership
                        && rep.beta.is_some_and(|b| b.approx_eq(beta))
                        && (beta.clone() - T::one()).is_negative()
                })
                .unwrap_or(false),
            Certificate::SpiralUnstable { membership, beta, u } => {
                let same = spiral_membership(theta, r)
                    .map(|rep| rep.membership == *membership && rep.beta.is_some_and(|b| b.approx_eq(beta)))
                    .unwrap_or(false);
                same && !(beta.clone() - T::one()).is_negative() && certificate_is_valid(u, r)
            }
            Certificate::DivergentSolution(sol) => {
                sol.is_divergent() && sol.category.is_some() && sol.is_valid_for(theta, r)
            }
            Certificate::NecessityFailure(failure) => necessity_is_valid(failure, theta, r),
            Certificate::TwoDStable { u_star, minors } => {
                r.dim() == 2
                    && is_proper(u_star, theta, r)
                    && minors.len() == 3
                    && minors
                        .iter()
                        .all(|(set, m)| m.is_positive() && r.principal(*set).det().approx_eq(m))
            }
            Certificate::TwoDNotPMatrix { set, minor } => {
                r.dim() == 2 && !minor.is_positive() && r.principal(*set).det().approx_eq(minor)
            }
        }
    }
}

fn is_proper<T: Scalar>(u_star: &[T], theta: &[T], r: &Matrix<T>) -> bool {
    u_star.iter().all(|x| x.is_positive())
        && r
            .mul_vec(u_star)
            .iter()
            .zip(theta)
            .all(|(ru, t)| (ru.clone() + t.clone()).is_zero())
}

fn necessity_is_valid<T: Scalar>(failure: &NecessityFailure<T>, theta: &[T], r: &Matrix<T>) -> bool {
    match failure {
        NecessityFailure::NonnegativeComponent {
            index,
            row,
            value,
            s_witness,
        } => {
            let unit_row = r
                .vec_mul(row)
                .iter()
                .enumerate()
                .all(|(j, x)| x.approx_eq(&if j == *index { T::one() } else { T::zero() }));
            let rw = r.mul_vec(s_witness);
            unit_row
                && dot(row, theta).approx_eq(value)
                && !value.is_negative()
                && s_witness.iter().all(|x| x.is_positive())
                && rw.iter().all(|x| x.is_positive())
                && dot(row, &rw).is_positive()
        }
        NecessityFailure::SingularNull { u } => {
            u.iter().any(|x| !x.is_zero())
                && r.vec_mul(u).iter().all(|x| x.is_zero())
                && !dot(u, theta).is_negative()
        }
    }
}

/// Supporting evidence gathered on the way to a verdict.
#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostics<T> {
    pub condition: Condition15<T>,
    pub spiral: Option<SpiralReport<T>>,
    pub lcp_solutions: Option<Vec<LcpSolution<T>>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Verdict<T> {
    pub decision: Decision,
    pub basis: Basis,
    /// Expressed in terms of the normalized data.
    pub certificate: Certificate<T>,
    pub normalization: NormalizationRecord<T>,
    pub diagnostics: Diagnostics<T>,
    /// Informational remarks that do not affect the decision.
    pub notes: Vec<String>,
}

impl<T: Scalar> Verdict<T> {
    /// Re-validates the certificate against the normalized data.
    pub fn certificate_is_valid(&self) -> bool {
        let n = &self.normalization.normalized;
        self.certificate.is_valid_for(n.theta(), n.r())
    }
}

const TRANSIENCE_NOTE: &str = "a divergent solution of this category makes the process transient: from some start it avoids a fixed ball around the origin with positive probability";

/// Classifies an SRBM as positive recurrent or not (d = 2 or 3).
pub fn classify<T: Scalar>(data: &ProblemData<T>) -> Result<Verdict<T>> {
    let record = normalize(data);
    match data.dim() {
        2 => decide_2d(record),
        3 => decide_3d(record),
        d => Err(Error::Dimension {
            expected: "2 or 3",
            found: d,
        }),
    }
}

/// The two-dimensional criterion: positive recurrent exactly when `R` is
/// nonsingular with `R⁻¹θ < 0` and `R` is a P-matrix.
pub fn classify_2d<T: Scalar>(theta: &[T], gamma: &Matrix<T>, r: &Matrix<T>) -> Result<Verdict<T>> {
    if theta.len() != 2 {
        return Err(Error::Dimension {
            expected: "2",
            found: theta.len(),
        });
    }
    let data = ProblemData::new(theta.to_vec(), gamma.clone(), r.clone())?;
    decide_2d(normalize(&data))
}

fn verdict<T: Scalar>(
    basis: Basis,
    certificate: Certificate<T>,
    normalization: NormalizationRecord<T>,
    diagnostics: Diagnostics<T>,
) -> Verdict<T> {
    Verdict {
        decision: basis.decision(),
        basis,
        certificate,
        normalization,
        diagnostics,
        notes: Vec::new(),
    }
}

fn decide_2d<T: Scalar>(record: NormalizationRecord<T>) -> Result<Verdict<T>> {
    let (theta, r) = (record.normalized.theta().to_vec(), record.normalized.r().clone());
    let condition = condition_15(&theta, &r)?;
    let diagnostics = Diagnostics {
        condition: condition.clone(),
        spiral: None,
        lcp_solutions: None,
    };
    let Condition15::Holds { u_star } = condition else {
        let cert = necessity_certificate(&theta, &r)?;
        return Ok(verdict(Basis::TwoDFails, cert, record, diagnostics));
    };
    let p = is_p_matrix(&r)?;
    if let Some((set, minor)) = p.failing_minor() {
        let cert = Certificate::TwoDNotPMatrix {
            set: *set,
            minor: minor.clone(),
        };
        return Ok(verdict(Basis::TwoDFails, cert, record, diagnostics));
    }
    let cert = Certificate::TwoDStable {
        u_star,
        minors: p.minors,
    };
    Ok(verdict(Basis::TwoDPMatrix, cert, record, diagnostics))
}

fn decide_3d<T: Scalar>(record: NormalizationRecord<T>) -> Result<Verdict<T>> {
    let (theta, r) = (record.normalized.theta().to_vec(), record.normalized.r().clone());
    let condition = condition_15(&theta, &r)?;
    let mut diagnostics = Diagnostics {
        condition: condition.clone(),
        spiral: None,
        lcp_solutions: None,
    };
    let Condition15::Holds { u_star } = condition else {
        let cert = necessity_certificate(&theta, &r)?;
        return Ok(verdict(Basis::Necessity15Fails, cert, record, diagnostics));
    };

    let report = spiral_membership(&theta, &r)?;
    diagnostics.spiral = Some(report.clone());
    if report.membership.in_c() {
        let beta = report.beta.clone().expect("spiral data carries a gain");
        let below_one = (beta.clone() - T::one())
            .strict_sign()
            .map_err(Error::indeterminate("single-cycle gain against 1"))?
            .is_negative();
        let (basis, cert) = if below_one {
            (
                Basis::TheoremEltA,
                Certificate::SpiralStable {
                    membership: report.membership,
                    beta,
                },
            )
        } else {
            (
                Basis::SpiralGainGe1,
                Certificate::SpiralUnstable {
                    membership: report.membership,
                    u: spiral_certificate(&theta, &r)?,
                    beta,
                },
            )
        };
        return Ok(verdict(basis, cert, record, diagnostics));
    }

    let solutions = solve_and_classify(&theta, &r)?;
    diagnostics.lcp_solutions = Some(solutions.clone());
    let lowest = solutions
        .iter()
        .filter(|s| s.is_divergent())
        .min_by(|a, b| {
            a.category()
                .cmp(&b.category())
                .then_with(|| lex_cmp(&a.u, &b.u))
        })
        .cloned();
    match lowest {
        Some(sol) => {
            let transient = matches!(sol.category(), Some(Category::I | Category::II));
            let mut v = verdict(
                Basis::DivergentLcpExists,
                Certificate::DivergentSolution(sol),
                record,
                diagnostics,
            );
            if transient {
                v.notes.push(TRANSIENCE_NOTE.to_string());
            }
            Ok(v)
        }
        None => Ok(verdict(
            Basis::TheoremEltB,
            Certificate::ProperUnique { u_star },
            record,
            diagnostics,
        )),
    }
}

fn lex_cmp<T: Scalar>(a: &[T], b: &[T]) -> Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.partial_cmp(y).unwrap_or(Ordering::Equal))
        .find(|o| *o != Ordering::Equal)
        .unwrap_or(Ordering::Equal)
}

/// Evidence that `R` nonsingular with `R⁻¹θ < 0` fails; a precondition
/// error when it holds.
pub fn necessity_certificate<T: Scalar>(theta: &[T], r: &Matrix<T>) -> Result<Certificate<T>> {
    let failure = match condition_15(theta, r)? {
        Condition15::Holds { .. } => {
            return Err(Error::Precondition(
                "R is nonsingular with R^-1 theta < 0; no necessity certificate exists".into(),
            ))
        }
        Condition15::Fails(f) => f,
    };
    let cert = match failure {
        Condition15Failure::NonnegativeComponent { index, value } => {
            let row = r.invert()?.row(index);
            let s_witness = match is_s_matrix(r)? {
                SCertificate::Witness { w, .. } => w,
                SCertificate::NoneExists => {
                    return Err(Error::Precondition("R is not an S-matrix".into()))
                }
            };
            NecessityFailure::NonnegativeComponent {
                index,
                row,
                value,
                s_witness,
            }
        }
        Condition15Failure::Singular { null_vector } => {
            let u = if dot(&null_vector, theta).is_negative() {
                null_vector.into_iter().map(|x| -x).collect()
            } else {
                null_vector
            };
            NecessityFailure::SingularNull { u }
        }
    };
    Ok(Certificate::NecessityFailure(cert))
}
