use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// The modulus (or complementary modulus) lies outside the admitted range.
    #[error("modulus out of range: {0}")]
    Domain(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("theta series did not converge within {terms} terms")]
    SeriesNotConverged { terms: usize },
    #[error("quadrature did not converge (estimated error {estimate:e})")]
    QuadratureNotConverged { estimate: f64 },
}
