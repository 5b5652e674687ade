//! Vertex enumeration for tiny polyhedra (dimension ≤ 3, a dozen rows).
//!
//! Every polyhedron handed to this module lies inside a nonnegative orthant
//! or an equivalent translate, so it is pointed: it is nonempty exactly when
//! it has a vertex.

use itertools::Itertools;

use crate::matrix::Matrix;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Relation {
    Eq,
    Ge,
}

#[derive(Debug, Clone)]
pub(crate) struct Constraint<T> {
    pub coeffs: Vec<T>,
    pub rhs: T,
    pub relation: Relation,
}

impl<T: Scalar> Constraint<T> {
    pub fn ge(coeffs: Vec<T>, rhs: T) -> Self {
        Constraint {
            coeffs,
            rhs,
            relation: Relation::Ge,
        }
    }

    pub fn eq(coeffs: Vec<T>, rhs: T) -> Self {
        Constraint {
            coeffs,
            rhs,
            relation: Relation::Eq,
        }
    }

    fn satisfied_by(&self, x: &[T]) -> bool {
        let slack = crate::scalar::dot(&self.coeffs, x) - self.rhs.clone();
        match self.relation {
            Relation::Eq => slack.is_zero(),
            Relation::Ge => !slack.is_negative(),
        }
    }
}

/// Vertices in the order their defining row subsets are enumerated
/// (lexicographic). Stops after the first one when `first_only`.
pub(crate) fn vertices<T: Scalar>(
    n: usize,
    constraints: &[Constraint<T>],
    first_only: bool,
) -> Vec<Vec<T>> {
    let mut found: Vec<Vec<T>> = Vec::new();
    for rows in (0..constraints.len()).combinations(n) {
        let a = Matrix::from_fn(n, |i, j| constraints[rows[i]].coeffs[j].clone());
        let b: Vec<T> = rows.iter().map(|&r| constraints[r].rhs.clone()).collect();
        let Ok(x) = a.solve(&b) else { continue };
        if !constraints.iter().all(|c| c.satisfied_by(&x)) {
            continue;
        }
        if found
            .iter()
            .any(|y| y.iter().zip(&x).all(|(p, q)| p.approx_eq(q)))
        {
            continue;
        }
        found.push(x);
        if first_only {
            break;
        }
    }
    found
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_square_has_four_vertices() {
        let cons = vec![
            Constraint::ge(vec![1.0, 0.0], 0.0),
            Constraint::ge(vec![0.0, 1.0], 0.0),
            Constraint::ge(vec![-1.0, 0.0], -1.0),
            Constraint::ge(vec![0.0, -1.0], -1.0),
        ];
        assert_eq!(vertices(2, &cons, false).len(), 4);
    }

    #[test]
    fn empty_polyhedron() {
        let cons = vec![
            Constraint::ge(vec![1.0], 1.0),
            Constraint::ge(vec![-1.0], 1.0),
        ];
        assert!(vertices(1, &cons, false).is_empty());
    }

    #[test]
    fn equality_rows_are_enforced() {
        // x + y = 1, x, y ≥ 0: the segment's two endpoints.
        let cons = vec![
            Constraint::eq(vec![1.0, 1.0], 1.0),
            Constraint::ge(vec![1.0, 0.0], 0.0),
            Constraint::ge(vec![0.0, 1.0], 0.0),
        ];
        let v = vertices(2, &cons, false);
        assert_eq!(v, vec![vec![0.0, 1.0], vec![1.0, 0.0]]);
    }
}
