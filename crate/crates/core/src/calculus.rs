//! Derivatives with respect to the modulus `k`.
//!
//! Along `u = λK` the theta argument `v = λ/2` does not move with `k`, so the
//! total k-derivative of any theta function reduces to its τ-derivative,
//! which the heat equation `∂²ϑ/∂v² = 4iπ ∂ϑ/∂τ` turns into a second
//! u-derivative:
//!
//! ```text
//! d/dk {ϑ(λK, k)} = -1/(2 k k'²) · ∂²ϑ/∂u² |_{u = λK}
//! ```

use std::f64::consts::PI;

use serde::Serialize;

use crate::elliptic::{constants, EllipticConstants};
use crate::error::{Error, Result};
use crate::modulus::Modulus;
use crate::theta::{self, SeriesSpec, ThetaKind};

/// Default central-difference step for k-derivatives.
pub const FD_STEP: f64 = 1e-6;

/// The four k-derivatives of `K`, `K'`, `1/K` and `K'/K`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Lemma1Derivatives {
    pub d_big_k: f64,
    pub d_big_k_prime: f64,
    pub d_inv_big_k: f64,
    /// Derivative of `K'/K`; always negative.
    pub d_period_ratio: f64,
}

impl EllipticConstants {
    pub fn lemma1(&self) -> Lemma1Derivatives {
        let m = self.modulus;
        let (k, kp2) = (m.k(), m.k_prime_sq());
        let (big_k, big_kp) = (self.big_k, self.big_k_prime);
        let denom = k * kp2;
        Lemma1Derivatives {
            d_big_k: (self.big_e - kp2 * big_k) / denom,
            d_big_k_prime: (m.k_sq() * big_kp - self.big_e_prime) / denom,
            d_inv_big_k: (kp2 * big_k - self.big_e) / (denom * big_k * big_k),
            d_period_ratio: -PI / (2.0 * denom * big_k * big_k),
        }
    }

    /// `-1/(2kk'²)`, the factor converting `∂²/∂u²` into `d/dk` along `u = λK`.
    fn heat_factor(&self) -> f64 {
        let m = self.modulus;
        -1.0 / (2.0 * m.k() * m.k_prime_sq())
    }

    /// Total derivative `d/dk {ϑ(λK(k), k)}`, with `∂²ϑ/∂u²` summed term-wise.
    pub fn dtheta_dk_at(&self, kind: ThetaKind, lambda: f64) -> Result<f64> {
        if !lambda.is_finite() {
            return Err(Error::InvalidArgument(format!("lambda = {lambda} is not finite")));
        }
        Ok(self.heat_factor() * self.theta_series_derivative(kind, lambda * self.big_k, 2)?)
    }

    /// Same derivative with `∂²ϑ/∂u²` taken from the closed form in terms of
    /// Θ, sn, cn, dn and zn. Loses absolute accuracy where that bracket
    /// nearly cancels (Θ at λ ≈ ½ and small k).
    pub fn dtheta_dk_at_closed(&self, kind: ThetaKind, lambda: f64) -> Result<f64> {
        if !lambda.is_finite() {
            return Err(Error::InvalidArgument(format!("lambda = {lambda} is not finite")));
        }
        Ok(self.heat_factor() * self.theta_d2u(kind, lambda * self.big_k)?)
    }
}

pub fn lemma1(m: Modulus) -> Lemma1Derivatives {
    constants(m).lemma1()
}

pub fn dtheta_dk_at(kind: ThetaKind, lambda: f64, m: Modulus) -> Result<f64> {
    constants(m).dtheta_dk_at(kind, lambda)
}

pub fn dtheta_dk_at_closed(kind: ThetaKind, lambda: f64, m: Modulus) -> Result<f64> {
    constants(m).dtheta_dk_at_closed(kind, lambda)
}

/// `∂²ϑⱼ/∂v² - 4π ∂ϑⱼ/∂t` on `τ = it`, i.e. `q = exp(-πt)`.
///
/// Zero analytically; the return value is floating-point residue.
pub fn heat_residual(kind: ThetaKind, v: f64, t: f64) -> Result<f64> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::InvalidArgument(format!("heat residual needs t > 0, got {t}")));
    }
    let log_q = -PI * t;
    let vv = theta::series(SeriesSpec::plain(kind, 2), v, log_q)?.value;
    let dt = theta::series(
        SeriesSpec {
            t_derivative: true,
            ..SeriesSpec::plain(kind, 0)
        },
        v,
        log_q,
    )?
    .value;
    Ok(vv - 4.0 * PI * dt)
}

/// Central difference `(f(k+h) - f(k-h)) / 2h` over the modulus.
pub fn finite_difference_dk<F>(mut f: F, k: f64, step: f64) -> Result<f64>
where
    F: FnMut(Modulus) -> Result<f64>,
{
    if step.is_nan() || step <= 0.0 {
        return Err(Error::InvalidArgument(format!("step must be positive, got {step}")));
    }
    let plus = Modulus::new(k + step)?;
    let minus = Modulus::new(k - step)?;
    Ok((f(plus)? - f(minus)?) / (2.0 * step))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elliptic::complete_k;
    use approx::assert_relative_eq;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn symmetric_point_period_ratio() {
        let m = Modulus::new(std::f64::consts::FRAC_1_SQRT_2).unwrap();
        let c = constants(m);
        let expected = -std::f64::consts::SQRT_2 * PI / (c.big_k * c.big_k);
        assert_relative_eq!(c.lemma1().d_period_ratio, expected, max_relative = 1e-14);
    }

    #[test]
    fn dk_matches_finite_difference() {
        let m = Modulus::new(0.3).unwrap();
        let fd = finite_difference_dk(|m| Ok(complete_k(m)), 0.3, FD_STEP).unwrap();
        assert!(rel(lemma1(m).d_big_k, fd) < 1e-7);
    }

    #[test]
    fn dk_vanishes_at_small_modulus() {
        let d = lemma1(Modulus::new(1e-4).unwrap());
        assert!(d.d_big_k.abs() < 1e-3 && d.d_big_k > 0.0);
    }

    #[test]
    fn chain_rule_consistency() {
        for k in [0.01, 0.2, 0.5, 0.9, 0.999] {
            let c = constants(Modulus::new(k).unwrap());
            let d = c.lemma1();
            assert_relative_eq!(d.d_inv_big_k, -d.d_big_k / (c.big_k * c.big_k), max_relative = 1e-12);
            assert!(d.d_period_ratio < 0.0);
        }
    }

    #[test]
    fn theta_derivative_at_quarter_period() {
        let m = Modulus::new(0.55).unwrap();
        let c = constants(m);
        let t = c.theta(ThetaKind::Theta, c.big_k).unwrap().value;
        let expected = -1.0 / (2.0 * 0.55 * m.k_prime_sq()) * t * (m.k_prime_sq() - c.big_e / c.big_k);
        assert_relative_eq!(c.dtheta_dk_at(ThetaKind::Theta, 1.0).unwrap(), expected, max_relative = 1e-12);
        assert_relative_eq!(c.dtheta_dk_at_closed(ThetaKind::Theta, 1.0).unwrap(), expected, max_relative = 1e-12);
    }

    #[test]
    fn theta_derivative_matches_finite_difference() {
        for (kind, lambda, k) in [(ThetaKind::Theta, 0.4, 0.6), (ThetaKind::H1, 0.25, 0.5)] {
            let fd = finite_difference_dk(
                |m| {
                    let c = constants(m);
                    Ok(c.theta_oscillatory(kind, lambda * c.big_k)?.value)
                },
                k,
                FD_STEP,
            )
            .unwrap();
            let exact = dtheta_dk_at(kind, lambda, Modulus::new(k).unwrap()).unwrap();
            assert!(rel(exact, fd) < 1e-6, "{kind}: {exact} vs {fd}");
        }
    }

    #[test]
    fn heat_residuals_vanish() {
        assert!(heat_residual(ThetaKind::Theta, 0.25, 1.0).unwrap().abs() < 1e-10);
        assert!(heat_residual(ThetaKind::H, 0.1, 0.5).unwrap().abs() < 1e-9);
        for kind in ThetaKind::ALL {
            assert!(heat_residual(kind, 0.3, 50.0).unwrap().abs() < 1e-30);
        }
        assert!(heat_residual(ThetaKind::H1, 0.1, 0.0).is_err());
        assert!(heat_residual(ThetaKind::H1, 0.1, -1.0).is_err());
    }

    #[test]
    fn finite_difference_trivial_functions() {
        assert_eq!(finite_difference_dk(|_| Ok(3.0), 0.4, 1e-6).unwrap(), 0.0);
        let d = finite_difference_dk(|m| Ok(m.k()), 0.4, 1e-6).unwrap();
        assert!((d - 1.0).abs() < 1e-9);
        assert!(finite_difference_dk(|m| Ok(m.k()), 1e-9, 1e-6).is_err());
        assert!(finite_difference_dk(|m| Ok(m.k()), 0.5, 0.0).is_err());
    }
}
