use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("polynomial is zero")]
    ZeroPolynomial,
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("ring mismatch: {0} vs {1}")]
    RingMismatch(String, String),
    #[error("entries are not in ring {0}")]
    NotInRing(String),
    #[error("determinant is not 1")]
    NotSpecial,
    #[error("bad indices: {0}")]
    BadIndices(String),
    #[error("element belongs to the {found} model, expected {expected}")]
    ModelMismatch { expected: String, found: String },
    #[error("subset {0} is not available in the {1} model")]
    TagUnavailableInModel(String, String),
    #[error("element is not in the torus T")]
    NotInTorus,
    #[error("outside the big cell: trailing principal minor {0} is not a unit")]
    OutsideBigCell(usize),
    #[error("Jacobi iteration did not converge within {0} sweeps")]
    ConvergenceFailure(usize),
    #[error("bad dimension: {0}")]
    BadDimension(String),
    #[error("element is not theta-symmetric")]
    NotSymmetric,
    #[error("tau of the supplied preimage does not equal the element")]
    NotInTauG,
    #[error("bad generator index {0}")]
    BadIndex(usize),
    #[error("invalid generalized Cartan matrix: {0}")]
    InvalidGcm(String),
    #[error("generalized Cartan matrix is not symmetrizable")]
    NotSymmetrizable,
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("internal error: {0}")]
    Internal(String),
}
