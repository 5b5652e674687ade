use thiserror::Error;

use crate::index_set::IndexSet;
use crate::scalar::Indeterminate;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("unsupported dimension {found} (expected {expected})")]
    Dimension { expected: &'static str, found: usize },

    #[error("non-finite entry in {0}")]
    NonFinite(&'static str),

    #[error("reflection matrix is not completely-S: principal submatrix on {failing} is not an S-matrix")]
    NotCompletelyS { failing: IndexSet },

    #[error("covariance matrix is not symmetric positive definite")]
    CovarianceNotPositiveDefinite,

    #[error("indeterminate comparison ({context}): {value:e} is within tolerance of zero")]
    Indeterminate { context: String, value: f64 },

    #[error("singular matrix (left null vector {null_vector:?})")]
    SingularMatrix { null_vector: Vec<String> },

    #[error("LCP has a continuum of solutions on support {support}")]
    DegenerateRay { support: IndexSet },

    #[error("divergent LCP solution u = {u:?}, v = {v:?} falls in no category")]
    UnclassifiedSolution { u: Vec<String>, v: Vec<String> },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("data is not in canonical form: {0}")]
    NotCanonical(String),

    #[error("no feasible face rates on active set {0}")]
    NoFeasibleRates(IndexSet),

    #[error("Skorokhod step has no feasible support")]
    StepInfeasible,
}

impl Error {
    pub(crate) fn indeterminate(context: impl Into<String>) -> impl FnOnce(Indeterminate) -> Error {
        let context = context.into();
        move |i| Error::Indeterminate {
            context,
            value: i.value,
        }
    }

    pub fn is_indeterminate(&self) -> bool {
        matches!(self, Error::Indeterminate { .. })
    }
}

pub(crate) fn render<T: std::fmt::Display>(values: &[T]) -> Vec<String> {
    values.iter().map(|v| v.to_string()).collect()
}
