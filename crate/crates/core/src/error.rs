use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("cyclotomic field order must be at least 1")]
    InvalidFieldOrder,

    #[error("cannot parse scalar `{input}`: {reason}")]
    ScalarParse { input: String, reason: String },

    #[error("cannot parse Laurent polynomial `{input}`: {reason}")]
    PolyParse { input: String, reason: String },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("antisymmetry violated: c[{i}][{j}][{k}] != -c[{j}][{i}][{k}]")]
    AntisymmetryViolation { i: usize, j: usize, k: usize },

    #[error("Jacobi identity violated on basis triple ({i}, {j}, {k})")]
    JacobiViolation { i: usize, j: usize, k: usize },

    #[error("matrix does not preserve the bracket on basis pair ({i}, {j})")]
    NotAutomorphism { i: usize, j: usize },

    #[error("automorphism order mismatch: {0}")]
    OrderMismatch(String),

    #[error("automorphisms {0} and {1} do not commute")]
    NonCommuting(usize, usize),

    #[error("degree {degree:?} exceeds the degree cap {cap}")]
    DegreeCapExceeded { degree: Vec<i64>, cap: i64 },

    #[error("one-form is not homogeneous of weight {0:?}")]
    NotHomogeneous(Vec<i64>),

    #[error("coefficient vector at degree {0:?} is not in the invariant eigenspace")]
    NotInvariant(Vec<i64>),

    #[error("bracket of degree {0:?} left its eigenspace")]
    GradingViolation(Vec<i64>),

    #[error("elements belong to different multiloop algebras")]
    MixedParents,

    #[error("unknown preset `{0}`")]
    UnknownPreset(String),

    #[error("cochain is not a cocycle on the window (weight {weight:?}, cutoff {cutoff})")]
    NotACocycle { weight: Vec<i64>, cutoff: u32 },

    #[error("cochain at weight {weight:?} does not factor through the universal cocycle at cutoff {cutoff}")]
    Inconsistent { weight: Vec<i64>, cutoff: u32 },

    #[error("no degree pairs inside the window (weight {weight:?}, cutoff {cutoff})")]
    WindowEmpty { weight: Vec<i64>, cutoff: u32 },

    #[error("H^2 at weight {weight:?} is unstable: dim {dim_low} at cutoff {cutoff}, {dim_high} at {}", cutoff + 1)]
    Unstable { weight: Vec<i64>, cutoff: u32, dim_low: usize, dim_high: usize },

    #[error("invalid config at `{path}`: {reason}")]
    Config { path: String, reason: String },

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
