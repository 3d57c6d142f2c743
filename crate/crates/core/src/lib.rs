//! Jacobi elliptic and theta functions in Jacobi's original notation
//! (Θ, H, H₁, Θ₁), their derivatives with respect to the argument and to
//! the modulus, and numerical checks of the monotonicity and convexity
//! properties of theta quotients.
//!
//! Conventions: `k` is the modulus, `k' = sqrt(1 - k²)`, `K`/`E` the complete
//! integrals, `q = exp(-π K'/K)` the nome, and the theta argument is
//! `v = u / (2K)` with angular factor `2πnv` (so `Θ(u) = ϑ₄(u/(2K), iK'/K)`).
//! Some references use `v = uπ/(2K)` instead; that convention is not offered.

pub mod calculus;
pub mod elliptic;
pub mod grid;
mod error;
pub mod modulus;
pub mod par;
pub mod properties;
pub mod quadrature;
pub mod theta;
pub mod verify;

pub use calculus::{
    dtheta_dk_at, dtheta_dk_at_closed, finite_difference_dk, heat_residual, lemma1,
    Lemma1Derivatives,
};
pub use elliptic::{
    complete_e, complete_k, constants, jacobi_point, zn_oracle, EllipticConstants, JacobiPoint,
};
pub use error::{Error, Result};
pub use modulus::Modulus;
pub use properties::{
    asymptotic_slope, classify, convexity_f, convexity_f_second, g, h, h_second, log_h_ratio,
    ratio, ratio_dk, theta_nonmonotonicity_scan, RatioProbe, Sign, SignSummary, Verdict,
};
pub use theta::{theta, theta_d2u, theta_du, theta_series_derivative, ThetaEval, ThetaKind};
pub use verify::{Suite, VerificationReport};
