use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid precision: {0}")]
    InvalidPrecision(String),
    #[error("imaginary part {im} of tau is below 0.1")]
    ImTooSmall { im: f64 },
    #[error("operand magnitude below eps in {0}")]
    NearZero(&'static str),
    #[error("degenerate index {0}: pair lies in Z^2")]
    DegenerateIndex(String),
    #[error("argument lies on the period lattice")]
    OnLattice,
    #[error("discriminant {0} is not negative")]
    NotImaginary(i64),
    #[error("discriminant {0} is not fundamental")]
    NotFundamental(i64),
    #[error("discriminant {0} not supported here (requires d_K <= -7)")]
    UnsupportedDiscriminant(i64),
    #[error("matrix not invertible mod {modulus}: {detail}")]
    NonInvertible { modulus: i64, detail: String },
    #[error("input values are not pairwise distinct")]
    DuplicateValues,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// Errors raised by floating-point evaluation rather than by bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::ImTooSmall { .. } | Error::NearZero(_) | Error::OnLattice | Error::DuplicateValues
        )
    }
}
