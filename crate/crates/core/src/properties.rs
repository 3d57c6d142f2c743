//! Monotonicity, limits and convexity of the quotient `Θ(λK)/Θ(μK)` as
//! checkable computations, together with the auxiliary functions `g` and
//! `h` and the integral representation of `log(H(v-u)/H(v+u))`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::elliptic::{constants, EllipticConstants};
use crate::error::{Error, Result};
use crate::modulus::Modulus;
use crate::par;
use crate::quadrature;
use crate::theta::ThetaKind;

/// `|cos λπ - cos μπ|` at or below this counts as equality.
pub const COSINE_TIE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Decreasing,
    Increasing,
    Constant,
}

/// Predicted behaviour of `Θ(λK)/Θ(μK)` in `k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RatioProbe {
    pub lambda: f64,
    pub mu: f64,
    pub verdict: Verdict,
    /// `(μ-λ)(1-(λ+μ)/2)`, the power of `k'/4` as `k → 1`.
    pub exponent: f64,
    /// Set when the verdict is `Constant` only through `λ = -μ + 2ν`, i.e.
    /// `λ - μ` is not an even integer.
    pub reflected: bool,
}

pub fn classify(lambda: f64, mu: f64) -> RatioProbe {
    let diff = (lambda * PI).cos() - (mu * PI).cos();
    let verdict = if diff.abs() <= COSINE_TIE {
        Verdict::Constant
    } else if diff > 0.0 {
        Verdict::Decreasing
    } else {
        Verdict::Increasing
    };
    let half_gap = 0.5 * (lambda - mu);
    let even_shift = (half_gap - half_gap.round()).abs() <= COSINE_TIE;
    RatioProbe {
        lambda,
        mu,
        verdict,
        exponent: (mu - lambda) * (1.0 - 0.5 * (lambda + mu)),
        reflected: verdict == Verdict::Constant && !even_shift,
    }
}

impl EllipticConstants {
    pub fn ratio(&self, lambda: f64, mu: f64) -> Result<f64> {
        let num = self.theta(ThetaKind::Theta, lambda * self.big_k)?.value;
        let den = self.theta(ThetaKind::Theta, mu * self.big_k)?.value;
        Ok(num / den)
    }

    /// `g(u) = dn²(u) + zn²(u)`.
    pub fn g(&self, u: f64) -> Result<f64> {
        let p = self.jacobi_point(u)?;
        Ok(p.dn * p.dn + p.zn * p.zn)
    }

    /// `g'(u) = -2 dn² h(u) - 2E zn/K`.
    pub fn g_du(&self, u: f64) -> Result<f64> {
        let p = self.jacobi_point(u)?;
        let h = self.modulus.k_sq() * p.sn * p.cn / p.dn - p.zn;
        Ok(-2.0 * p.dn * p.dn * h - 2.0 * self.big_e * p.zn / self.big_k)
    }

    /// `h(u) = k² sn cn / dn - zn`.
    pub fn h(&self, u: f64) -> Result<f64> {
        let p = self.jacobi_point(u)?;
        Ok(self.modulus.k_sq() * p.sn * p.cn / p.dn - p.zn)
    }

    /// `h''(u) = -2k²k'² sn cn / dn³`.
    pub fn h_second(&self, u: f64) -> Result<f64> {
        let m = self.modulus;
        let (sn, cn, dn) = self.sn_cn_dn(u);
        Ok(-2.0 * m.k_sq() * m.k_prime_sq() * sn * cn / (dn * dn * dn))
    }

    /// k-derivative of the ratio: `-1/(2kk'²) · ratio · (g(λK) - g(μK))`.
    pub fn ratio_dk(&self, lambda: f64, mu: f64) -> Result<f64> {
        let m = self.modulus;
        let r = self.ratio(lambda, mu)?;
        let gap = self.g(lambda * self.big_k)? - self.g(mu * self.big_k)?;
        Ok(-r * gap / (2.0 * m.k() * m.k_prime_sq()))
    }

    /// `f(λ) = Θ((μ-λ)K) / Θ((μ+λ)K)`.
    pub fn convexity_f(&self, mu: f64, lambda: f64) -> Result<f64> {
        self.ratio(mu - lambda, mu + lambda)
    }

    /// `f''(λ) = K² f ((zn(A) + zn(B))² + dn²(A) - dn²(B))` with
    /// `A = (μ-λ)K`, `B = (μ+λ)K`.
    pub fn convexity_f_second(&self, mu: f64, lambda: f64) -> Result<f64> {
        let f = self.convexity_f(mu, lambda)?;
        let a = self.jacobi_point((mu - lambda) * self.big_k)?;
        let b = self.jacobi_point((mu + lambda) * self.big_k)?;
        let zsum = a.zn + b.zn;
        Ok(self.big_k * self.big_k * f * (zsum * zsum + a.dn * a.dn - b.dn * b.dn))
    }

    /// Both sides of
    /// `log(H(v-u)/H(v+u)) = ∫₀ᵘ 2 sn(v)cn(v)dn(v) / (sn²(w) - sn²(v)) dw - 2u zn(v)`.
    pub fn log_h_ratio(&self, u: f64, v: f64) -> Result<(f64, f64)> {
        if !(u >= 0.0 && u < v && u + v < 2.0 * self.big_k) {
            return Err(Error::InvalidArgument(format!(
                "need 0 <= u < v and u + v < 2K = {}, got u = {u}, v = {v}",
                2.0 * self.big_k
            )));
        }
        let lhs = (self.theta(ThetaKind::H, v - u)?.value / self.theta(ThetaKind::H, v + u)?.value).ln();
        let pv = self.jacobi_point(v)?;
        let numerator = 2.0 * pv.sn * pv.cn * pv.dn;
        let sn_v_sq = pv.sn * pv.sn;
        let integral = quadrature::integrate(
            |w| {
                let (sn, _, _) = self.sn_cn_dn(w);
                numerator / (sn * sn - sn_v_sq)
            },
            0.0,
            u,
            1e-14,
            1e-10,
        )?;
        Ok((lhs, integral.value - 2.0 * u * pv.zn))
    }
}

pub fn ratio(lambda: f64, mu: f64, m: Modulus) -> Result<f64> {
    constants(m).ratio(lambda, mu)
}

pub fn ratio_dk(lambda: f64, mu: f64, m: Modulus) -> Result<f64> {
    constants(m).ratio_dk(lambda, mu)
}

pub fn g(u: f64, m: Modulus) -> Result<f64> {
    constants(m).g(u)
}

/// `h` on `[0, K]`.
pub fn h(u: f64, m: Modulus) -> Result<f64> {
    let c = constants(m);
    if !(0.0..=c.big_k).contains(&u) {
        return Err(Error::InvalidArgument(format!("h needs 0 <= u <= K, got {u}")));
    }
    c.h(u)
}

pub fn h_second(u: f64, m: Modulus) -> Result<f64> {
    constants(m).h_second(u)
}

fn check_unit_interval(name: &str, x: f64, closed: bool) -> Result<()> {
    let ok = if closed { (0.0..=1.0).contains(&x) } else { x > 0.0 && x < 1.0 };
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("{name} = {x} outside the unit interval")))
    }
}

pub fn convexity_f(mu: f64, lambda: f64, m: Modulus) -> Result<f64> {
    check_unit_interval("mu", mu, false)?;
    check_unit_interval("lambda", lambda, true)?;
    constants(m).convexity_f(mu, lambda)
}

pub fn convexity_f_second(mu: f64, lambda: f64, m: Modulus) -> Result<f64> {
    check_unit_interval("mu", mu, false)?;
    check_unit_interval("lambda", lambda, true)?;
    constants(m).convexity_f_second(mu, lambda)
}

/// `log(ratio) / log(k'/4)` at the modulus with the given `k'`; tends to
/// `(μ-λ)(1-(λ+μ)/2)` as `k' → 0`.
pub fn asymptotic_slope(lambda: f64, mu: f64, k_prime: f64) -> Result<f64> {
    check_unit_interval("lambda", lambda, false)?;
    check_unit_interval("mu", mu, false)?;
    let m = Modulus::from_complementary(k_prime)?;
    Ok(ratio(lambda, mu, m)?.ln() / (k_prime / 4.0).ln())
}

pub fn log_h_ratio(u: f64, v: f64, m: Modulus) -> Result<(f64, f64)> {
    constants(m).log_h_ratio(u, v)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn of(x: f64) -> Self {
        if x > 0.0 {
            Sign::Positive
        } else if x < 0.0 {
            Sign::Negative
        } else {
            Sign::Zero
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Negative => '-',
            Sign::Zero => '0',
            Sign::Positive => '+',
        }
    }
}

/// Signs of `dΘ(λK)/dk` on the given k grid.
pub fn theta_nonmonotonicity_scan(lambda: f64, k_grid: &[Modulus]) -> Result<Vec<Sign>> {
    par::map(k_grid, |&m| constants(m).dtheta_dk_at(ThetaKind::Theta, lambda).map(Sign::of))
        .into_iter()
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SignSummary {
    /// Strict sign flips, ignoring exact zeros.
    pub changes: usize,
    pub first: Sign,
    pub last: Sign,
}

impl SignSummary {
    pub fn from_signs(signs: &[Sign]) -> Option<Self> {
        let first = *signs.first()?;
        let last = *signs.last()?;
        let mut changes = 0;
        let mut current = None;
        for &s in signs.iter().filter(|s| **s != Sign::Zero) {
            if current.is_some_and(|c| c != s) {
                changes += 1;
            }
            current = Some(s);
        }
        Some(Self { changes, first, last })
    }
}
