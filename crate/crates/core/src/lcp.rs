//! The linear complementarity problem `u, v ≥ 0`, `v = θ + R u`, `u·v = 0`.
//!
//! For `d ≤ 3` all solutions are found by enumerating complementary supports.
//! Divergent solutions (`v ≠ 0`) are sorted into five categories by the
//! number of positive components of `u` and `v` and the sign of the 2×2
//! principal minor on the zero components of `v`.

use std::fmt;

use crate::error::{render, Error, Result};
use crate::index_set::IndexSet;
use crate::matrix::Matrix;
use crate::normalization::{condition_15, Condition15};
use crate::polyhedron::{self, Constraint};
use crate::scalar::{dot, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Category {
    I,
    II,
    III,
    IV,
    V,
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Category::I => "I",
            Category::II => "II",
            Category::III => "III",
            Category::IV => "IV",
            Category::V => "V",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CategoryLabel<T> {
    pub category: Category,
    /// The 2×2 principal submatrix on the zero components of `v`
    /// (categories II–V only).
    pub rhat: Option<Matrix<T>>,
    pub det_rhat: Option<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LcpSolution<T> {
    pub u: Vec<T>,
    pub v: Vec<T>,
    pub support_u: IndexSet,
    pub support_v: IndexSet,
    /// `v = 0`.
    pub stable: bool,
    /// `u` and `v` together do not have exactly `d` positive components.
    pub degenerate: bool,
    pub proper: bool,
    pub category: Option<CategoryLabel<T>>,
}

impl<T: Scalar> LcpSolution<T> {
    /// Builds the solution record for a given `u`, computing `v = θ + R u`.
    pub fn from_u(theta: &[T], r: &Matrix<T>, u: Vec<T>) -> Self {
        let u: Vec<T> = u.into_iter().map(snap_zero).collect();
        let v: Vec<T> = r
            .mul_vec(&u)
            .into_iter()
            .zip(theta)
            .map(|(ru, t)| snap_zero(t.clone() + ru))
            .collect();
        let support_u = positive_support(&u);
        let support_v = positive_support(&v);
        let stable = support_v.is_empty();
        let degenerate = support_u.len() + support_v.len() != theta.len();
        LcpSolution {
            u,
            v,
            support_u,
            support_v,
            stable,
            degenerate,
            proper: stable && !degenerate,
            category: None,
        }
    }

    pub fn is_divergent(&self) -> bool {
        !self.stable
    }

    pub fn category(&self) -> Option<Category> {
        self.category.as_ref().map(|c| c.category)
    }

    /// Re-checks nonnegativity, `v = θ + R u` and complementarity.
    pub fn is_valid_for(&self, theta: &[T], r: &Matrix<T>) -> bool {
        let nonneg = self.u.iter().chain(&self.v).all(|x| !x.is_negative());
        let residual_ok = r
            .mul_vec(&self.u)
            .into_iter()
            .zip(theta)
            .zip(&self.v)
            .all(|((ru, t), v)| (t.clone() + ru - v.clone()).is_zero());
        nonneg && residual_ok && dot(&self.u, &self.v).is_zero()
    }
}

fn snap_zero<T: Scalar>(x: T) -> T {
    if x.is_zero() {
        T::zero()
    } else {
        x
    }
}

fn positive_support<T: Scalar>(x: &[T]) -> IndexSet {
    IndexSet::from_indices(x.iter().enumerate().filter(|(_, v)| v.is_positive()).map(|(i, _)| i))
}

/// What a single complementary support admits.
#[derive(Debug, Clone, PartialEq)]
pub(crate) enum SupportOutcome<T> {
    Infeasible,
    /// The unique `u` (full length, zero off the support).
    Unique(Vec<T>),
    /// Infinitely many solutions.
    Continuum,
}

/// Solves for `u` supported in `support` with `(θ + R u)_A = 0`, `u_A ≥ 0`,
/// and `(θ + R u)ᵢ ≥ 0` for every `i ∈ constrained \ A`. Coordinates outside
/// `constrained` are left free in sign.
pub(crate) fn support_solution<T: Scalar>(
    theta: &[T],
    r: &Matrix<T>,
    support: IndexSet,
    constrained: IndexSet,
) -> SupportOutcome<T> {
    let d = theta.len();
    let outside: Vec<usize> = constrained.intersection(support.complement(d)).to_vec();
    if support.is_empty() {
        return if outside.iter().all(|&i| !theta[i].is_negative()) {
            SupportOutcome::Unique(vec![T::zero(); d])
        } else {
            SupportOutcome::Infeasible
        };
    }
    let idx = support.to_vec();
    let raa = r.principal(support);
    let rhs: Vec<T> = idx.iter().map(|&i| -theta[i].clone()).collect();
    let expand = |x: &[T]| {
        let mut u = vec![T::zero(); d];
        for (k, &i) in idx.iter().enumerate() {
            u[i] = x[k].clone();
        }
        u
    };

    if !raa.det().is_zero() {
        let Ok(x) = raa.solve(&rhs) else {
            return SupportOutcome::Infeasible;
        };
        if x.iter().any(|xi| xi.is_negative()) {
            return SupportOutcome::Infeasible;
        }
        let u = expand(&x);
        let v = r.mul_vec(&u);
        let ok = outside
            .iter()
            .all(|&i| !(theta[i].clone() + v[i].clone()).is_negative());
        return if ok {
            SupportOutcome::Unique(u)
        } else {
            SupportOutcome::Infeasible
        };
    }

    // Singular principal block: the feasible set is a polyhedron that may be
    // empty, a point, or larger.
    let k = idx.len();
    let mut cons = Vec::new();
    for row in 0..k {
        cons.push(Constraint::eq(raa.row(row), rhs[row].clone()));
    }
    for c in 0..k {
        let mut e = vec![T::zero(); k];
        e[c] = T::one();
        cons.push(Constraint::ge(e, T::zero()));
    }
    for &i in &outside {
        let coeffs: Vec<T> = idx.iter().map(|&j| r[(i, j)].clone()).collect();
        cons.push(Constraint::ge(coeffs, -theta[i].clone()));
    }
    let verts = polyhedron::vertices(k, &cons, false);
    match verts.len() {
        0 => SupportOutcome::Infeasible,
        1 => {
            // Bounded iff the recession cone {R_AA x = 0, x ≥ 0, R_BA x ≥ 0}
            // is trivial; normalise recession directions by Σx = 1.
            let mut rec: Vec<Constraint<T>> = cons
                .iter()
                .map(|c| Constraint {
                    coeffs: c.coeffs.clone(),
                    rhs: T::zero(),
                    relation: c.relation,
                })
                .collect();
            rec.push(Constraint::eq(vec![T::one(); k], T::one()));
            if polyhedron::vertices(k, &rec, true).is_empty() {
                SupportOutcome::Unique(expand(&verts[0]))
            } else {
                SupportOutcome::Continuum
            }
        }
        _ => SupportOutcome::Continuum,
    }
}

/// All solutions of the LCP, ordered by `|support_u|` then lexicographically.
///
/// Solutions reached from several supports are reported once. Categories are
/// not filled in; see [`classify_solution`].
pub fn solve_lcp<T: Scalar>(theta: &[T], r: &Matrix<T>) -> Result<Vec<LcpSolution<T>>> {
    let d = theta.len();
    if r.dim() != d {
        return Err(Error::InvalidInput("theta and R dimensions differ".into()));
    }
    let full = IndexSet::full(d);
    let mut found: Vec<LcpSolution<T>> = Vec::new();
    for support in IndexSet::all_subsets(d) {
        match support_solution(theta, r, support, full) {
            SupportOutcome::Infeasible => {}
            SupportOutcome::Continuum => return Err(Error::DegenerateRay { support }),
            SupportOutcome::Unique(u) => {
                let sol = LcpSolution::from_u(theta, r, u);
                let duplicate = found
                    .iter()
                    .any(|s| s.u.iter().zip(&sol.u).all(|(a, b)| a.approx_eq(b)));
                if !duplicate {
                    found.push(sol);
                }
            }
        }
    }
    found.sort_by_key(|s| (s.support_u.len(), s.support_u.to_vec()));
    Ok(found)
}

/// Assigns a divergent solution to one of the five categories (d = 3).
/// Stable solutions come back with `category = None`.
pub fn classify_solution<T: Scalar>(
    sol: &LcpSolution<T>,
    _theta: &[T],
    r: &Matrix<T>,
) -> Result<LcpSolution<T>> {
    if r.dim() != 3 {
        return Err(Error::Dimension {
            expected: "3",
            found: r.dim(),
        });
    }
    let mut out = sol.clone();
    if sol.stable {
        out.category = None;
        return Ok(out);
    }
    let unclassified = || Error::UnclassifiedSolution {
        u: render(&sol.u),
        v: render(&sol.v),
    };
    let zero_v = sol.support_v.complement(3);
    let label = match sol.support_v.len() {
        2 => {
            let k = zero_v.iter().next().expect("one zero component");
            if sol.u[k].is_positive() {
                CategoryLabel {
                    category: Category::I,
                    rhat: None,
                    det_rhat: None,
                }
            } else {
                return Err(unclassified());
            }
        }
        1 => {
            let rhat = r.principal(zero_v);
            let det = rhat.det();
            let positive = zero_v.iter().filter(|&i| sol.u[i].is_positive()).count();
            let category = match (det.sign(), positive) {
                (_, 0) => return Err(unclassified()),
                (crate::scalar::Sign::Positive, _) => Category::II,
                (crate::scalar::Sign::Zero, _) => Category::III,
                (crate::scalar::Sign::Negative, 2) => Category::IV,
                (crate::scalar::Sign::Negative, _) => Category::V,
            };
            CategoryLabel {
                category,
                rhat: Some(rhat),
                det_rhat: Some(det),
            }
        }
        _ => return Err(unclassified()),
    };
    out.category = Some(label);
    Ok(out)
}

/// `solve_lcp` followed by `classify_solution` on every solution.
pub fn solve_and_classify<T: Scalar>(theta: &[T], r: &Matrix<T>) -> Result<Vec<LcpSolution<T>>> {
    solve_lcp(theta, r)?
        .iter()
        .map(|s| classify_solution(s, theta, r))
        .collect()
}

/// `u* = -R⁻¹θ`, defined when `R` is nonsingular and `R⁻¹θ < 0`.
pub fn proper_solution<T: Scalar>(theta: &[T], r: &Matrix<T>) -> Result<Vec<T>> {
    match condition_15(theta, r)? {
        Condition15::Holds { u_star } => Ok(u_star),
        Condition15::Fails(_) => Err(Error::Precondition(
            "R must be nonsingular with R^-1 theta < 0".into(),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    fn v(x: &[(i64, i64)]) -> Vec<Rational> {
        x.iter().map(|&(n, d)| q(n, d)).collect()
    }

    fn m(rows: &[[(i64, i64); 3]]) -> Matrix<Rational> {
        Matrix::from_rows(rows.iter().map(|r| v(r)).collect()).unwrap()
    }

    fn ones_neg() -> Vec<Rational> {
        v(&[(-1, 1), (-1, 1), (-1, 1)])
    }

    fn bek() -> Matrix<Rational> {
        m(&[[(1, 1), (3, 1), (0, 1)], [(0, 1), (1, 1), (3, 1)], [(3, 1), (0, 1), (1, 1)]])
    }

    fn cat1() -> Matrix<Rational> {
        m(&[[(1, 1), (1, 3), (1, 3)], [(2, 1), (1, 1), (-1, 2)], [(2, 1), (-1, 2), (1, 1)]])
    }

    fn cat2a() -> (Vec<Rational>, Matrix<Rational>) {
        (
            v(&[(-1, 1), (1, 1), (-1, 1)]),
            m(&[[(1, 1), (1, 1), (1, 2)], [(-2, 1), (1, 1), (0, 1)], [(3, 1), (0, 1), (1, 1)]]),
        )
    }

    fn cat4() -> Matrix<Rational> {
        m(&[[(1, 1), (11, 10), (2, 1)], [(2, 1), (1, 1), (0, 1)], [(0, 1), (2, 1), (1, 1)]])
    }

    fn cat5() -> (Vec<Rational>, Matrix<Rational>) {
        (
            v(&[(-1, 1), (-1, 1), (1, 1)]),
            m(&[[(1, 1), (1, 1), (-2, 5)], [(2, 1), (1, 1), (-6, 5)], [(-2, 1), (-1, 10), (1, 1)]]),
        )
    }

    fn has(sols: &[LcpSolution<Rational>], u: &[(i64, i64)], vv: &[(i64, i64)]) -> bool {
        sols.iter().any(|s| s.u == v(u) && s.v == v(vv))
    }

    #[test]
    fn bek_has_only_the_proper_solution() {
        let sols = solve_lcp(&ones_neg(), &bek()).unwrap();
        assert_eq!(sols.len(), 1);
        assert_eq!(sols[0].u, vec![q(1, 4); 3]);
        assert!(sols[0].proper);
    }

    #[test]
    fn category_one_solutions() {
        let sols = solve_lcp(&ones_neg(), &cat1()).unwrap();
        assert!(has(&sols, &[(1, 1), (0, 1), (0, 1)], &[(0, 1), (1, 1), (1, 1)]));
        assert!(has(&sols, &[(1, 5), (6, 5), (6, 5)], &[(0, 1), (0, 1), (0, 1)]));
        let proper: Vec<_> = sols.iter().filter(|s| s.proper).collect();
        assert_eq!(proper.len(), 1);
        let target = sols.iter().find(|s| s.u == v(&[(1, 1), (0, 1), (0, 1)])).unwrap();
        let labelled = classify_solution(target, &ones_neg(), &cat1()).unwrap();
        assert_eq!(labelled.category(), Some(Category::I));
    }

    #[test]
    fn category_four_has_two_divergent_solutions() {
        let sols = solve_lcp(&ones_neg(), &cat4()).unwrap();
        assert!(has(&sols, &[(1, 12), (5, 6), (0, 1)], &[(0, 1), (0, 1), (2, 3)]));
        assert!(has(&sols, &[(0, 1), (1, 1), (0, 1)], &[(1, 10), (0, 1), (1, 1)]));
        let cats: Vec<_> = solve_and_classify(&ones_neg(), &cat4())
            .unwrap()
            .iter()
            .filter_map(|s| s.category())
            .collect();
        assert!(cats.contains(&Category::IV));
        assert!(cats.contains(&Category::I));
    }

    #[test]
    fn category_two_label_and_det() {
        let (theta, r) = cat2a();
        let sol = LcpSolution::from_u(&theta, &r, v(&[(2, 3), (1, 3), (0, 1)]));
        assert_eq!(sol.v, v(&[(0, 1), (0, 1), (1, 1)]));
        let labelled = classify_solution(&sol, &theta, &r).unwrap();
        let label = labelled.category.unwrap();
        assert_eq!(label.category, Category::II);
        assert_eq!(label.det_rhat, Some(q(3, 1)));
    }

    #[test]
    fn category_five_label() {
        let (theta, r) = cat5();
        let sol = LcpSolution::from_u(&theta, &r, v(&[(0, 1), (1, 1), (0, 1)]));
        assert_eq!(sol.v, v(&[(0, 1), (0, 1), (9, 10)]));
        assert!(sol.degenerate);
        let labelled = classify_solution(&sol, &theta, &r).unwrap();
        assert_eq!(labelled.category(), Some(Category::V));
    }

    #[test]
    fn degenerate_solution_is_reported_once() {
        let (theta, r) = cat5();
        let sols = solve_lcp(&theta, &r).unwrap();
        let hits = sols
            .iter()
            .filter(|s| s.u == v(&[(0, 1), (1, 1), (0, 1)]))
            .count();
        assert_eq!(hits, 1);
    }

    #[test]
    fn proper_solution_examples() {
        let r2 = m(&[[(1, 1), (1, 2), (3, 1)], [(1, 1), (1, 1), (2, 1)], [(2, 1), (1, 1), (1, 1)]]);
        assert_eq!(
            proper_solution(&ones_neg(), &r2).unwrap(),
            v(&[(1, 5), (2, 5), (1, 5)])
        );
        assert_eq!(
            proper_solution(&ones_neg(), &cat4()).unwrap(),
            v(&[(19, 68), (15, 34), (2, 17)])
        );
        assert_eq!(
            proper_solution(&ones_neg(), &Matrix::identity(3)).unwrap(),
            vec![Rational::one(); 3]
        );
        let (theta, r) = cat2a();
        assert!(matches!(proper_solution(&theta, &r), Err(Error::Precondition(_))));
    }

    #[test]
    fn continuum_is_reported() {
        let r = Matrix::from_rows(vec![vec![1.0, 1.0], vec![1.0, 1.0]]).unwrap();
        let err = solve_lcp(&[-1.0, -1.0], &r).unwrap_err();
        assert_eq!(
            err,
            Error::DegenerateRay {
                support: IndexSet::full(2)
            }
        );
    }

    #[test]
    fn singular_support_without_feasible_point_is_skipped() {
        // R_{12} block singular but u1 + u2 = -1 has no nonnegative solution.
        let r = Matrix::from_rows(vec![vec![1.0, 1.0], vec![1.0, 1.0]]).unwrap();
        let sols = solve_lcp(&[1.0, 1.0], &r).unwrap();
        assert_eq!(sols.len(), 1);
        assert_eq!(sols[0].u, vec![0.0, 0.0]);
    }

    #[test]
    fn unclassified_solution_errors() {
        // θ > 0: the trivial solution has v > 0, which no category covers.
        let theta = v(&[(1, 1), (1, 1), (1, 1)]);
        let r = Matrix::identity(3);
        let sols = solve_lcp(&theta, &r).unwrap();
        assert!(matches!(
            classify_solution(&sols[0], &theta, &r),
            Err(Error::UnclassifiedSolution { .. })
        ));
    }
}
