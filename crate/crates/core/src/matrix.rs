//! Small dense matrices (dimension ≤ 3) and the matrix-class tests the
//! classifier relies on: S, completely-S, P and M.

use std::fmt;
use std::ops::Index;

use crate::error::{render, Error, Result};
use crate::index_set::IndexSet;
use crate::polyhedron::{self, Constraint};
use crate::scalar::{Rational, Scalar};

/// Square matrix stored row-major.
#[derive(Clone, PartialEq)]
pub struct Matrix<T> {
    dim: usize,
    data: Vec<T>,
}

/// `solve`/`invert` hit a singular matrix. Carries a nonzero row vector `u`
/// with `u′M = 0`, scaled so its first nonzero entry is 1.
#[derive(Debug, Clone, PartialEq)]
pub struct SingularMatrix<T> {
    pub null_vector: Vec<T>,
}

impl<T: Scalar> From<SingularMatrix<T>> for Error {
    fn from(s: SingularMatrix<T>) -> Self {
        Error::SingularMatrix {
            null_vector: render(&s.null_vector),
        }
    }
}

impl<T: Scalar> Matrix<T> {
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 || dim > 3 {
            return Err(Error::Dimension {
                expected: "1..=3",
                found: dim,
            });
        }
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::InvalidInput(format!(
                "matrix rows must all have length {dim}"
            )));
        }
        let data: Vec<T> = rows.into_iter().flatten().collect();
        if data.iter().any(|x| !x.is_valid()) {
            return Err(Error::NonFinite("matrix"));
        }
        Ok(Matrix { dim, data })
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Matrix { dim, data }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn diagonal(entries: &[T]) -> Self {
        Self::from_fn(entries.len(), |i, j| {
            if i == j {
                entries[i].clone()
            } else {
                T::zero()
            }
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.dim + j]
    }

    pub fn row(&self, i: usize) -> Vec<T> {
        self.data[i * self.dim..(i + 1) * self.dim].to_vec()
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.dim).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn diag(&self) -> Vec<T> {
        (0..self.dim).map(|i| self[(i, i)].clone()).collect()
    }

    pub fn rows(&self) -> Vec<Vec<T>> {
        (0..self.dim).map(|i| self.row(i)).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].clone())
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix {
            dim: self.dim,
            data: self.data.iter().map(f).collect(),
        }
    }

    /// `M x`.
    pub fn mul_vec(&self, x: &[T]) -> Vec<T> {
        (0..self.dim)
            .map(|i| {
                (0..self.dim).fold(T::zero(), |acc, j| acc + self[(i, j)].clone() * x[j].clone())
            })
            .collect()
    }

    /// `u′ M`.
    pub fn vec_mul(&self, u: &[T]) -> Vec<T> {
        (0..self.dim)
            .map(|j| {
                (0..self.dim).fold(T::zero(), |acc, i| acc + u[i].clone() * self[(i, j)].clone())
            })
            .collect()
    }

    pub fn mul(&self, other: &Matrix<T>) -> Matrix<T> {
        Self::from_fn(self.dim, |i, j| {
            (0..self.dim).fold(T::zero(), |acc, k| {
                acc + self[(i, k)].clone() * other[(k, j)].clone()
            })
        })
    }

    /// Principal submatrix on `set`, in increasing index order.
    pub fn principal(&self, set: IndexSet) -> Matrix<T> {
        let idx = set.to_vec();
        Self::from_fn(idx.len(), |i, j| self[(idx[i], idx[j])].clone())
    }

    /// Rows `rows`, columns `cols` (both increasing).
    pub fn block(&self, rows: IndexSet, cols: IndexSet) -> Vec<Vec<T>> {
        rows.iter()
            .map(|i| cols.iter().map(|j| self[(i, j)].clone()).collect())
            .collect()
    }

    /// Determinant by cofactor expansion (dimension ≤ 3).
    pub fn det(&self) -> T {
        let a = |i: usize, j: usize| self[(i, j)].clone();
        match self.dim {
            0 => T::one(),
            1 => a(0, 0),
            2 => a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0),
            3 => {
                a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1))
                    - a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0))
                    + a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0))
            }
            _ => {
                // Laplace expansion along the first row.
                (0..self.dim).fold(T::zero(), |acc, j| {
                    let minor = self.minor_matrix(0, j);
                    let term = a(0, j) * minor.det();
                    if j % 2 == 0 {
                        acc + term
                    } else {
                        acc - term
                    }
                })
            }
        }
    }

    fn minor_matrix(&self, row: usize, col: usize) -> Matrix<T> {
        let rows: Vec<usize> = (0..self.dim).filter(|&i| i != row).collect();
        let cols: Vec<usize> = (0..self.dim).filter(|&j| j != col).collect();
        Self::from_fn(self.dim - 1, |i, j| self[(rows[i], cols[j])].clone())
    }

    /// Solves `M x = b` by Gaussian elimination with largest-magnitude pivots.
    pub fn solve(&self, b: &[T]) -> std::result::Result<Vec<T>, SingularMatrix<T>> {
        let n = self.dim;
        let mut a: Vec<Vec<T>> = self.rows();
        for (row, rhs) in a.iter_mut().zip(b) {
            row.push(rhs.clone());
        }
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&p, &q| {
                    a[p][col]
                        .abs()
                        .partial_cmp(&a[q][col].abs())
                        .unwrap_or(std::cmp::Ordering::Equal)
                })
                .expect("nonempty range");
            if a[pivot][col].is_zero() {
                return Err(SingularMatrix {
                    null_vector: self.left_null_vector(),
                });
            }
            a.swap(col, pivot);
            for r in (col + 1)..n {
                let factor = a[r][col].clone() / a[col][col].clone();
                for c in col..=n {
                    let delta = factor.clone() * a[col][c].clone();
                    a[r][c] = a[r][c].clone() - delta;
                }
            }
        }
        let mut x = vec![T::zero(); n];
        for i in (0..n).rev() {
            let s = ((i + 1)..n).fold(a[i][n].clone(), |acc, j| acc - a[i][j].clone() * x[j].clone());
            x[i] = s / a[i][i].clone();
        }
        Ok(x)
    }

    /// Inverse matrix, or a [`SingularMatrix`] carrying a left null vector.
    pub fn invert(&self) -> std::result::Result<Matrix<T>, SingularMatrix<T>> {
        let n = self.dim;
        let mut columns = Vec::with_capacity(n);
        for j in 0..n {
            let e: Vec<T> = (0..n)
                .map(|i| if i == j { T::one() } else { T::zero() })
                .collect();
            columns.push(self.solve(&e)?);
        }
        Ok(Self::from_fn(n, |i, j| columns[j][i].clone()))
    }

    /// A nonzero `u` with `u′M = 0` (zero vector if `M` is nonsingular),
    /// scaled so the first nonzero entry equals 1.
    pub fn left_null_vector(&self) -> Vec<T> {
        let n = self.dim;
        // Reduced row echelon form of Mᵀ.
        let mut a = self.transpose().rows();
        let mut pivots: Vec<usize> = Vec::new();
        let mut row = 0;
        for col in 0..n {
            if row == n {
                break;
            }
            let Some(p) = (row..n)
                .filter(|&r| !a[r][col].is_zero())
                .max_by(|&p, &q| {
                    a[p][col]
                        .abs()
                        .partial_cmp(&a[q][col].abs())
                        .unwrap_or(std::cmp::Ordering::Equal)
                })
            else {
                continue;
            };
            a.swap(row, p);
            let pv = a[row][col].clone();
            for c in 0..n {
                a[row][c] = a[row][c].clone() / pv.clone();
            }
            for r in 0..n {
                if r != row && !a[r][col].is_zero() {
                    let factor = a[r][col].clone();
                    for c in 0..n {
                        let delta = factor.clone() * a[row][c].clone();
                        a[r][c] = a[r][c].clone() - delta;
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        let Some(free) = (0..n).find(|c| !pivots.contains(c)) else {
            return vec![T::zero(); n];
        };
        let mut u = vec![T::zero(); n];
        u[free] = T::one();
        for (r, &pc) in pivots.iter().enumerate() {
            u[pc] = -a[r][free].clone();
        }
        if let Some(first) = u.iter().find(|x| !x.is_zero()).cloned() {
            for x in u.iter_mut() {
                *x = x.clone() / first.clone();
            }
        }
        u
    }

    /// Row scaling `D M` for a diagonal `D = diag(d)`.
    pub fn scale_rows(&self, d: &[T]) -> Matrix<T> {
        Self::from_fn(self.dim, |i, j| d[i].clone() * self[(i, j)].clone())
    }

    /// Column scaling `M D` for a diagonal `D = diag(d)`.
    pub fn scale_columns(&self, d: &[T]) -> Matrix<T> {
        Self::from_fn(self.dim, |i, j| self[(i, j)].clone() * d[j].clone())
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.dim).all(|i| (0..i).all(|j| self[(i, j)].approx_eq(&self[(j, i)])))
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> T {
        self.data
            .iter()
            .map(|x| x.abs())
            .fold(T::zero(), |m, x| if x > m { x } else { m })
    }
}

impl Matrix<Rational> {
    pub fn to_f64(&self) -> Matrix<f64> {
        self.map(|x| x.to_f64())
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;

    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.dim + j]
    }
}

impl<T: fmt::Display> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.dim {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.dim {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.data[i * self.dim + j])?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries(self.data.chunks(self.dim.max(1)))
            .finish()
    }
}

/// Outcome of the S-matrix test.
#[derive(Debug, Clone, PartialEq)]
pub enum SCertificate<T> {
    /// `w > 0` with `M w > 0`.
    Witness { w: Vec<T>, mw: Vec<T> },
    NoneExists,
}

impl<T> SCertificate<T> {
    pub fn exists(&self) -> bool {
        matches!(self, SCertificate::Witness { .. })
    }
}

/// Decides whether some `w > 0` has `M w > 0`.
///
/// By homogeneity this is feasibility of `{w ≥ e, M w ≥ e}`, a pointed
/// polyhedron, so it suffices to look for a vertex.
pub fn is_s_matrix<T: Scalar>(m: &Matrix<T>) -> Result<SCertificate<T>> {
    check_finite(m)?;
    let n = m.dim();
    let mut cons = Vec::with_capacity(2 * n);
    for i in 0..n {
        let mut e = vec![T::zero(); n];
        e[i] = T::one();
        cons.push(Constraint::ge(e, T::one()));
    }
    for i in 0..n {
        cons.push(Constraint::ge(m.row(i), T::one()));
    }
    Ok(match polyhedron::vertices(n, &cons, true).pop() {
        Some(w) => {
            let mw = m.mul_vec(&w);
            SCertificate::Witness { w, mw }
        }
        None => SCertificate::NoneExists,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CompletelySCheck {
    pub holds: bool,
    /// Smallest principal index set (canonical order) that is not an S-matrix.
    pub failing: Option<IndexSet>,
}

pub fn is_completely_s<T: Scalar>(m: &Matrix<T>) -> Result<CompletelySCheck> {
    check_finite(m)?;
    for set in IndexSet::nonempty_subsets(m.dim()) {
        if !is_s_matrix(&m.principal(set))?.exists() {
            return Ok(CompletelySCheck {
                holds: false,
                failing: Some(set),
            });
        }
    }
    Ok(CompletelySCheck {
        holds: true,
        failing: None,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct PMatrixCheck<T> {
    pub holds: bool,
    /// Every principal minor in canonical order (singletons, pairs, ...).
    pub minors: Vec<(IndexSet, T)>,
}

impl<T: Scalar> PMatrixCheck<T> {
    /// First nonpositive minor, if any.
    pub fn failing_minor(&self) -> Option<&(IndexSet, T)> {
        self.minors.iter().find(|(_, m)| !m.is_positive())
    }
}

pub fn is_p_matrix<T: Scalar>(m: &Matrix<T>) -> Result<PMatrixCheck<T>> {
    check_finite(m)?;
    let mut holds = true;
    let mut minors = Vec::new();
    for set in IndexSet::nonempty_subsets(m.dim()) {
        let minor = m.principal(set).det();
        let sign = minor
            .strict_sign()
            .map_err(Error::indeterminate(format!("principal minor on {set}")))?;
        holds &= sign.is_positive();
        minors.push((set, minor));
    }
    Ok(PMatrixCheck { holds, minors })
}

/// Nonsingular M-matrix: off-diagonal entries ≤ 0 and a P-matrix.
pub fn is_m_matrix<T: Scalar>(m: &Matrix<T>) -> Result<bool> {
    check_finite(m)?;
    let n = m.dim();
    let z_pattern = (0..n).all(|i| (0..n).all(|j| i == j || !m[(i, j)].is_positive()));
    if !z_pattern {
        return Ok(false);
    }
    Ok(is_p_matrix(m)?.holds)
}

/// Inverse of `R`; a singular matrix becomes [`Error::SingularMatrix`].
pub fn invert<T: Scalar>(r: &Matrix<T>) -> Result<Matrix<T>> {
    check_finite(r)?;
    Ok(r.invert()?)
}

fn check_finite<T: Scalar>(m: &Matrix<T>) -> Result<()> {
    if m.data.iter().all(|x| x.is_valid()) {
        Ok(())
    } else {
        Err(Error::NonFinite("matrix"))
    }
}
