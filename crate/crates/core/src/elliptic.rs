//! Complete elliptic integrals, the nome, Jacobi's `sn`, `cn`, `dn` and the
//! zeta function `zn`.
//!
//! `K` and `E` come from the arithmetic-geometric mean. `sn`, `cn`, `dn` use
//! the descending Landen (Gauss) transformation. `zn` is the logarithmic
//! derivative of Θ taken from the differentiated q-series, so it stays
//! consistent with the theta evaluations in [`crate::theta`].

use std::f64::consts::{FRAC_PI_2, PI};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::modulus::Modulus;
use crate::quadrature;
use crate::theta::{self, ThetaKind};

const AGM_MAX_ITER: usize = 64;
const AGM_REL_TOL: f64 = 4.0 * f64::EPSILON;
/// The Landen descent stops once the transformed modulus drops below this.
const LANDEN_MODULUS_TOL: f64 = 1e-12;

/// `(K, E)` for the modulus with the given `k` and `k'`.
///
/// `k'²` is passed separately so callers near `k = 1` keep it accurate.
fn agm_integrals(k: f64, k_prime: f64, k_prime_sq: f64) -> (f64, f64) {
    let mut a = 1.0_f64;
    let mut b = k_prime;
    let mut c = k;
    // E/K = 1 - Σ 2^(n-1) c_n², with the n = 0 term folded in as (1 + k'²)/2.
    let mut sum = 0.0;
    let mut weight = 1.0;
    for _ in 0..AGM_MAX_ITER {
        let a_next = 0.5 * (a + b);
        // c_{n+1} = (a_n - b_n)/2 = c_n²/(4 a_{n+1}), free of cancellation
        c = c * c / (4.0 * a_next);
        sum += weight * c * c;
        weight *= 2.0;
        b = (a * b).sqrt();
        a = a_next;
        if (a - b).abs() <= AGM_REL_TOL * a {
            break;
        }
    }
    let big_k = FRAC_PI_2 / a;
    let big_e = big_k * (0.5 * (1.0 + k_prime_sq) - sum);
    (big_k, big_e)
}

/// Complete elliptic integral of the first kind, `K(k) > π/2`.
pub fn complete_k(m: Modulus) -> f64 {
    agm_integrals(m.k(), m.k_prime(), m.k_prime_sq()).0
}

/// Complete elliptic integral of the second kind, `E(k) ∈ (1, π/2)`.
pub fn complete_e(m: Modulus) -> f64 {
    agm_integrals(m.k(), m.k_prime(), m.k_prime_sq()).1
}

/// `K`, `K'`, `E`, `E'` and the nome `q` for one modulus.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EllipticConstants {
    #[serde(skip)]
    pub modulus: Modulus,
    pub big_k: f64,
    pub big_k_prime: f64,
    pub big_e: f64,
    pub big_e_prime: f64,
    /// `exp(-π K'/K)`.
    pub nome: f64,
}

impl EllipticConstants {
    pub fn new(m: Modulus) -> Self {
        let (big_k, big_e) = agm_integrals(m.k(), m.k_prime(), m.k_prime_sq());
        let (big_k_prime, big_e_prime) = agm_integrals(m.k_prime(), m.k(), m.k_sq());
        Self {
            modulus: m,
            big_k,
            big_k_prime,
            big_e,
            big_e_prime,
            nome: (-PI * big_k_prime / big_k).exp(),
        }
    }

    /// `ln q = -π K'/K`, exact up to one rounding even when `q` is close to 1.
    #[inline]
    pub fn log_nome(&self) -> f64 {
        -PI * self.big_k_prime / self.big_k
    }

    /// `E K' + E' K - K K'`, which equals π/2.
    pub fn legendre(&self) -> f64 {
        self.big_e * self.big_k_prime + self.big_e_prime * self.big_k
            - self.big_k * self.big_k_prime
    }

    /// `(sn, cn, dn)` via the descending Landen transformation.
    pub fn sn_cn_dn(&self, u: f64) -> (f64, f64, f64) {
        let m = self.modulus;
        let period = 4.0 * self.big_k;
        let r = u - period * (u / period).round();

        // ratios[n] = c_n / a_n after n descending steps
        let mut ratios = [0.0_f64; AGM_MAX_ITER + 1];
        let mut depth = 0;
        let mut a = 1.0_f64;
        let mut b = m.k_prime();
        let mut c = m.k();
        while c > LANDEN_MODULUS_TOL * a && depth < AGM_MAX_ITER {
            let a_next = 0.5 * (a + b);
            c = c * c / (4.0 * a_next);
            b = (a * b).sqrt();
            a = a_next;
            depth += 1;
            ratios[depth] = c / a;
        }
        let mut phi = (1u64 << depth) as f64 * a * r;
        for &ratio in ratios[1..=depth].iter().rev() {
            phi = 0.5 * (phi + (ratio * phi.sin()).asin());
        }
        let (sn, cn) = phi.sin_cos();
        let dn = (m.k_prime_sq() + m.k_sq() * cn * cn).sqrt();
        (sn, cn, dn)
    }

    /// Jacobi's zeta function `Θ'(u)/Θ(u)`.
    pub fn zn(&self, u: f64) -> Result<f64> {
        let v = u / (2.0 * self.big_k);
        let log_q = self.log_nome();
        let value = theta::v_series(ThetaKind::Theta, v, log_q, 0)?.value;
        let slope = theta::v_series(ThetaKind::Theta, v, log_q, 1)?.value;
        Ok(slope / (2.0 * self.big_k * value))
    }

    pub fn jacobi_point(&self, u: f64) -> Result<JacobiPoint> {
        let (sn, cn, dn) = self.sn_cn_dn(u);
        Ok(JacobiPoint {
            u,
            sn,
            cn,
            dn,
            zn: self.zn(u)?,
        })
    }
}

pub fn constants(m: Modulus) -> EllipticConstants {
    EllipticConstants::new(m)
}

/// `sn`, `cn`, `dn` and `zn` at one argument.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JacobiPoint {
    pub u: f64,
    pub sn: f64,
    pub cn: f64,
    pub dn: f64,
    pub zn: f64,
}

pub fn jacobi_point(u: f64, m: Modulus) -> Result<JacobiPoint> {
    if !u.is_finite() {
        return Err(Error::InvalidArgument(format!("u = {u} is not finite")));
    }
    constants(m).jacobi_point(u)
}

/// Independent route to `zn` on `[0, K]`: `E(am u, k) - (E/K) u`, with the
/// incomplete integral `E(φ, k)` computed by adaptive quadrature.
///
/// Intended as a test oracle.
pub fn zn_oracle(u: f64, m: Modulus) -> Result<f64> {
    let c = constants(m);
    if !(0.0..=c.big_k).contains(&u) {
        return Err(Error::InvalidArgument(format!(
            "zn oracle needs 0 <= u <= K = {}, got {u}",
            c.big_k
        )));
    }
    let (sn, cn, _) = c.sn_cn_dn(u);
    let amplitude = sn.atan2(cn);
    let k_sq = m.k_sq();
    let incomplete_e = quadrature::integrate(
        |t: f64| {
            let s = t.sin();
            (1.0 - k_sq * s * s).sqrt()
        },
        0.0,
        amplitude,
        1e-15,
        1e-14,
    )?
    .value;
    Ok(incomplete_e - c.big_e / c.big_k * u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    /// Central binomial coefficient ratio (2n)!/(2^{2n} (n!)²).
    fn central(n: usize) -> f64 {
        (1..=n).fold(1.0, |acc, j| acc * (2 * j - 1) as f64 / (2 * j) as f64)
    }

    fn k_series(k: f64) -> f64 {
        FRAC_PI_2 * (0..40).map(|n| central(n).powi(2) * k.powi(2 * n as i32)).sum::<f64>()
    }

    fn e_series(k: f64) -> f64 {
        FRAC_PI_2
            * (0..40)
                .map(|n| central(n).powi(2) * k.powi(2 * n as i32) / (1.0 - 2.0 * n as f64))
                .sum::<f64>()
    }

    /// Nome via repeated descending Landen steps: q(k_{n+1}) = q(k_n)².
    fn nome_by_landen(k: f64) -> f64 {
        let mut kk = k;
        let mut kp = ((1.0 - k) * (1.0 + k)).sqrt();
        let mut steps = 0;
        while kk > 1e-6 {
            let next = kk * kk / ((1.0 + kp) * (1.0 + kp));
            kp = 2.0 * kp.sqrt() / (1.0 + kp);
            kk = next;
            steps += 1;
        }
        let x = kk * kk / 16.0;
        let q_small = x + 8.0 * x * x;
        (q_small.ln() / 2f64.powi(steps)).exp()
    }

    #[test]
    fn k_and_e_match_maclaurin_series() {
        let m = Modulus::new(0.5).unwrap();
        assert_relative_eq!(complete_k(m), k_series(0.5), max_relative = 1e-12);
        assert_relative_eq!(complete_e(m), e_series(0.5), max_relative = 1e-12);
        assert_relative_eq!(complete_k(m), 1.685_750_354_812_596, max_relative = 1e-14);
    }

    #[test]
    fn degenerate_limits() {
        let m = Modulus::new(1e-8).unwrap();
        assert_relative_eq!(complete_k(m), FRAC_PI_2, max_relative = 1e-14);
        assert_relative_eq!(complete_e(m), FRAC_PI_2, max_relative = 1e-14);
        let m = Modulus::from_complementary(1e-6).unwrap();
        assert!((complete_e(m) - 1.0).abs() < 1e-10);
        assert!(complete_k(m) > FRAC_PI_2);
    }

    #[test]
    fn k_log_asymptote_near_one() {
        let m = Modulus::from_complementary(1e-6).unwrap();
        let ratio = complete_k(m) / (4.0 / 1e-6_f64).ln();
        assert!((ratio - 1.0).abs() < 1e-3, "{ratio}");
    }

    #[test]
    fn symmetric_modulus() {
        let m = Modulus::new(std::f64::consts::FRAC_1_SQRT_2).unwrap();
        let c = constants(m);
        assert_relative_eq!(c.big_k, c.big_k_prime, max_relative = 1e-15);
        assert_relative_eq!(c.nome, (-PI).exp(), max_relative = 1e-14);
        assert_relative_eq!(c.legendre(), FRAC_PI_2, max_relative = 1e-12);
    }

    #[test]
    fn nome_matches_landen_iteration() {
        let c = constants(Modulus::new(0.9).unwrap());
        assert_relative_eq!(c.nome, nome_by_landen(0.9), max_relative = 1e-13);
    }

    #[test]
    fn origin_and_quarter_period_values() {
        let m = Modulus::new(0.6).unwrap();
        let c = constants(m);
        let p = c.jacobi_point(0.0).unwrap();
        assert_eq!((p.sn, p.cn, p.dn), (0.0, 1.0, 1.0));
        assert!(p.zn.abs() < 1e-16);
        let p = c.jacobi_point(c.big_k).unwrap();
        assert!((p.sn - 1.0).abs() < 1e-15);
        assert!(p.cn.abs() < 1e-15);
        assert!((p.dn - m.k_prime()).abs() < 1e-15);
        assert!(p.zn.abs() < 1e-14);
    }

    #[test]
    fn degenerate_shapes_at_extreme_moduli() {
        let m = Modulus::new(1e-9).unwrap();
        let (sn, _, _) = constants(m).sn_cn_dn(0.7);
        assert!((sn - 0.7_f64.sin()).abs() < 1e-15);
        let m = Modulus::from_complementary(1e-6).unwrap();
        let (sn, _, _) = constants(m).sn_cn_dn(0.7);
        assert!((sn - 0.7_f64.tanh()).abs() < 1e-10);
    }

    #[test]
    fn lemma2_sn_and_zn_near_one() {
        let kp = 1e-4;
        let lambda = 0.4;
        let m = Modulus::from_complementary(kp).unwrap();
        let c = constants(m);
        let a = kp / 4.0;
        let p = c.jacobi_point(lambda * c.big_k).unwrap();
        let lead = 2.0 * a.powf(2.0 * lambda);
        // o(a^{2λ}): the remainder is a small fraction of the leading correction
        assert!((p.sn - (1.0 - lead)).abs() < 0.05 * lead, "{} vs {}", p.sn, 1.0 - lead);
        assert!((p.zn - (1.0 - lambda)).abs() < 5e-3, "{}", p.zn);
    }

    #[test]
    fn zn_oracle_agrees() {
        let m = Modulus::new(0.7).unwrap();
        let c = constants(m);
        let u = 0.3 * c.big_k;
        assert!((zn_oracle(u, m).unwrap() - c.zn(u).unwrap()).abs() < 1e-10);
        assert!(zn_oracle(0.0, m).unwrap().abs() < 1e-15);
        assert!(zn_oracle(c.big_k, m).unwrap().abs() < 1e-13);
        assert!(zn_oracle(-0.1, m).is_err());
        assert!(zn_oracle(1.1 * c.big_k, m).is_err());
    }

    #[test]
    fn argument_reduction_preserves_periodicity() {
        let m = Modulus::new(0.8).unwrap();
        let c = constants(m);
        let u = 0.37;
        let base = c.sn_cn_dn(u);
        for j in [-3.0, 1.0, 5.0] {
            let shifted = c.sn_cn_dn(u + 4.0 * j * c.big_k);
            assert!((shifted.0 - base.0).abs() < 1e-13);
            assert!((shifted.1 - base.1).abs() < 1e-13);
        }
        let half = c.sn_cn_dn(u + 2.0 * c.big_k);
        assert!((half.0 + base.0).abs() < 1e-14);
        assert!((half.1 + base.1).abs() < 1e-14);
    }
}
