//! The four Jacobi theta functions as real q-series.
//!
//! With `v = u/(2K)` and `q = exp(-πK'/K)`:
//!
//! ```text
//! Θ  = ϑ₄ = 1 + 2 Σ_{n≥1} (-1)ⁿ q^{n²} cos(2πnv)
//! Θ₁ = ϑ₃ = 1 + 2 Σ_{n≥1} q^{n²} cos(2πnv)
//! H  = ϑ₁ = 2 Σ_{n≥0} (-1)ⁿ q^{(n+½)²} sin((2n+1)πv)
//! H₁ = ϑ₂ = 2 Σ_{n≥0} q^{(n+½)²} cos((2n+1)πv)
//! ```
//!
//! The closed-form u-derivatives express everything through Θ and the
//! Jacobi functions; [`theta_series_derivative`] differentiates the series
//! term by term instead and serves as their check.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::elliptic::{constants, EllipticConstants};
use crate::error::{Error, Result};
use crate::modulus::Modulus;

/// Hard cap on the number of series terms.
pub const MAX_TERMS: usize = 256;
/// Summation stops when the next term is below this fraction of the sum.
const TRUNCATION_REL: f64 = 1e-16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ThetaKind {
    /// Θ = ϑ₄
    Theta,
    /// H = ϑ₁
    H,
    /// H₁ = ϑ₂
    H1,
    /// Θ₁ = ϑ₃
    Theta1,
}

impl ThetaKind {
    pub const ALL: [ThetaKind; 4] = [ThetaKind::Theta, ThetaKind::H, ThetaKind::H1, ThetaKind::Theta1];

    /// Index `j` of the matching `ϑⱼ`.
    pub fn theta_index(self) -> u8 {
        match self {
            ThetaKind::Theta => 4,
            ThetaKind::H => 1,
            ThetaKind::H1 => 2,
            ThetaKind::Theta1 => 3,
        }
    }

    pub fn from_theta_index(j: u8) -> Option<Self> {
        match j {
            4 | 0 => Some(ThetaKind::Theta),
            1 => Some(ThetaKind::H),
            2 => Some(ThetaKind::H1),
            3 => Some(ThetaKind::Theta1),
            _ => None,
        }
    }

    /// Odd-frequency kinds (H, H₁) change sign under `v → v + 1`.
    fn odd_frequency(self) -> bool {
        matches!(self, ThetaKind::H | ThetaKind::H1)
    }

    fn constant_term(self) -> f64 {
        if self.odd_frequency() {
            0.0
        } else {
            1.0
        }
    }

    /// Coefficient sign, exponent of q, angular frequency (in v) and whether
    /// the undifferentiated term is a sine, for the n-th summand.
    #[inline]
    fn term(self, n: usize) -> (f64, f64, f64, bool) {
        let nf = n as f64;
        let alternating = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
        match self {
            ThetaKind::Theta => (alternating, nf * nf, 2.0 * PI * nf, false),
            ThetaKind::Theta1 => (1.0, nf * nf, 2.0 * PI * nf, false),
            ThetaKind::H => (alternating, (nf + 0.5) * (nf + 0.5), (2.0 * nf + 1.0) * PI, true),
            ThetaKind::H1 => (1.0, (nf + 0.5) * (nf + 0.5), (2.0 * nf + 1.0) * PI, false),
        }
    }

    fn first_index(self) -> usize {
        if self.odd_frequency() {
            0
        } else {
            1
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ThetaKind::Theta => "theta",
            ThetaKind::H => "H",
            ThetaKind::H1 => "H1",
            ThetaKind::Theta1 => "theta1",
        }
    }
}

impl fmt::Display for ThetaKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ThetaKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "theta" | "Theta" | "theta4" => Ok(ThetaKind::Theta),
            "H" | "h" | "theta1-odd" => Ok(ThetaKind::H),
            "H1" | "h1" => Ok(ThetaKind::H1),
            "theta1" | "Theta1" => Ok(ThetaKind::Theta1),
            _ => Err(Error::InvalidArgument(format!("unknown theta function {s:?}"))),
        }
    }
}

/// A series value with its truncation diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThetaEval {
    pub value: f64,
    pub terms_used: usize,
    /// Upper bound on the magnitude of the dropped tail.
    pub truncation_bound: f64,
}

/// What to sum: plain series, v-derivatives, and optionally the derivative
/// with respect to `t` where `ln q = -πt`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct SeriesSpec {
    pub kind: ThetaKind,
    pub v_order: u8,
    pub t_derivative: bool,
    pub include_constant: bool,
}

impl SeriesSpec {
    pub fn plain(kind: ThetaKind, v_order: u8) -> Self {
        Self {
            kind,
            v_order,
            t_derivative: false,
            include_constant: true,
        }
    }
}

/// Shifts `v` into `[-½, ½]` and returns the sign picked up on the way.
fn reduce(kind: ThetaKind, v: f64) -> (f64, f64) {
    let shift = v.round();
    let reduced = v - shift;
    let sign = if kind.odd_frequency() && (shift as i64).rem_euclid(2) == 1 {
        -1.0
    } else {
        1.0
    };
    (reduced, sign)
}

pub(crate) fn series(spec: SeriesSpec, v: f64, log_q: f64) -> Result<ThetaEval> {
    if !v.is_finite() || !log_q.is_finite() || log_q >= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "theta series needs finite v and 0 < q < 1 (v = {v}, ln q = {log_q})"
        )));
    }
    let kind = spec.kind;
    let (v, sign) = reduce(kind, v);
    let (sin_fund, cos_fund) = if kind.odd_frequency() {
        (PI * v).sin_cos()
    } else {
        (2.0 * PI * v).sin_cos()
    };

    // Which trig function the term is after `v_order` differentiations, and
    // the sign that differentiation introduces.
    let order = spec.v_order as usize;
    let (_, _, _, starts_sine) = kind.term(kind.first_index());
    let is_sine = starts_sine ^ (order % 2 == 1);
    let diff_sign = match (starts_sine, order % 4) {
        (_, 0) => 1.0,
        (true, 1) => 1.0,
        (false, 1) => -1.0,
        (_, 2) => -1.0,
        (true, 3) => -1.0,
        (false, 3) => 1.0,
        _ => unreachable!(),
    };
    // |sin(jx)| <= j|sin x| for integer j, |cos(jx)| <= j|cos x| for odd j.
    let scaled_fund = if is_sine {
        Some(sin_fund.abs())
    } else if kind.odd_frequency() {
        Some(cos_fund.abs())
    } else {
        None
    };
    let envelope = |n: usize| -> f64 {
        let (_, exponent, freq, _) = kind.term(n);
        let mut b = 2.0 * (exponent * log_q).exp() * freq.powi(order as i32);
        if spec.t_derivative {
            b *= PI * exponent;
        }
        if let Some(fund) = scaled_fund {
            let multiple = if kind.odd_frequency() { 2 * n + 1 } else { n } as f64;
            b *= (multiple * fund).min(1.0);
        }
        b
    };

    let mut sum = if spec.include_constant && order == 0 && !spec.t_derivative {
        kind.constant_term()
    } else {
        0.0
    };
    let mut n = kind.first_index();
    let mut terms = 0;
    let mut prev_bound = envelope(n);
    loop {
        if terms >= MAX_TERMS {
            return Err(Error::SeriesNotConverged { terms });
        }
        let (coeff, exponent, freq, _) = kind.term(n);
        let arg = freq * v;
        let trig = if is_sine { arg.sin() } else { arg.cos() };
        let mut term = 2.0 * coeff * diff_sign * (exponent * log_q).exp() * freq.powi(order as i32) * trig;
        if spec.t_derivative {
            term *= -PI * exponent;
        }
        sum += term;
        terms += 1;
        n += 1;

        let next_bound = envelope(n);
        let ratio = if prev_bound > 0.0 { next_bound / prev_bound } else { 0.0 };
        if next_bound == 0.0 || (next_bound <= TRUNCATION_REL * sum.abs() && ratio <= 0.5) {
            let tail = if next_bound == 0.0 { 0.0 } else { next_bound / (1.0 - ratio) };
            return Ok(ThetaEval {
                value: sign * sum,
                terms_used: terms,
                truncation_bound: tail,
            });
        }
        prev_bound = next_bound;
    }
}

/// Series derivative of order `v_order` in `v` (not `u`).
pub(crate) fn v_series(kind: ThetaKind, v: f64, log_q: f64, v_order: u8) -> Result<ThetaEval> {
    series(SeriesSpec::plain(kind, v_order), v, log_q)
}

impl EllipticConstants {
    fn v_of(&self, u: f64) -> Result<f64> {
        if !u.is_finite() {
            return Err(Error::InvalidArgument(format!("u = {u} is not finite")));
        }
        Ok(u / (2.0 * self.big_k))
    }

    pub fn theta(&self, kind: ThetaKind, u: f64) -> Result<ThetaEval> {
        v_series(kind, self.v_of(u)?, self.log_nome(), 0)
    }

    /// The series without its constant term (`ϑ - 1` for Θ and Θ₁).
    pub fn theta_oscillatory(&self, kind: ThetaKind, u: f64) -> Result<ThetaEval> {
        let spec = SeriesSpec {
            include_constant: false,
            ..SeriesSpec::plain(kind, 0)
        };
        series(spec, self.v_of(u)?, self.log_nome())
    }

    /// Term-wise derivative of order `order` in `u`.
    pub fn theta_series_derivative(&self, kind: ThetaKind, u: f64, order: u8) -> Result<f64> {
        if !(1..=2).contains(&order) {
            return Err(Error::InvalidArgument(format!(
                "series derivative order must be 1 or 2, got {order}"
            )));
        }
        let raw = v_series(kind, self.v_of(u)?, self.log_nome(), order)?.value;
        Ok(raw / (2.0 * self.big_k).powi(order as i32))
    }

    /// First u-derivative in closed form through Θ, sn, cn, dn, zn.
    pub fn theta_du(&self, kind: ThetaKind, u: f64) -> Result<f64> {
        let base = self.theta(ThetaKind::Theta, u)?.value;
        let p = self.jacobi_point(u)?;
        let m = self.modulus;
        let sk = m.k().sqrt();
        let skp = m.k_prime().sqrt();
        Ok(match kind {
            ThetaKind::Theta => base * p.zn,
            ThetaKind::H => sk * base * (p.cn * p.dn + p.sn * p.zn),
            ThetaKind::H1 => sk / skp * base * (-p.sn * p.dn + p.cn * p.zn),
            ThetaKind::Theta1 => base / skp * (-m.k_sq() * p.sn * p.cn + p.dn * p.zn),
        })
    }

    /// Second u-derivative in closed form through Θ, sn, cn, dn, zn, E/K.
    pub fn theta_d2u(&self, kind: ThetaKind, u: f64) -> Result<f64> {
        let base = self.theta(ThetaKind::Theta, u)?.value;
        let p = self.jacobi_point(u)?;
        let m = self.modulus;
        let k2 = m.k_sq();
        let sk = m.k().sqrt();
        let skp = m.k_prime().sqrt();
        let e_over_k = self.big_e / self.big_k;
        let zeta = p.zn * p.zn - e_over_k;
        Ok(match kind {
            ThetaKind::Theta => base * (p.dn * p.dn + zeta),
            ThetaKind::H => {
                sk * base
                    * (-k2 * p.sn * p.cn * p.cn + 2.0 * p.cn * p.dn * p.zn + p.sn * zeta)
            }
            ThetaKind::H1 => {
                sk / skp
                    * base
                    * (k2 * p.sn * p.sn * p.cn - 2.0 * p.sn * p.dn * p.zn + p.cn * zeta)
            }
            ThetaKind::Theta1 => {
                base / skp
                    * (p.dn * (1.0 - k2 * p.cn * p.cn) - 2.0 * k2 * p.sn * p.cn * p.zn
                        + p.dn * zeta)
            }
        })
    }
}

pub fn theta(kind: ThetaKind, u: f64, m: Modulus) -> Result<ThetaEval> {
    constants(m).theta(kind, u)
}

pub fn theta_du(kind: ThetaKind, u: f64, m: Modulus) -> Result<f64> {
    constants(m).theta_du(kind, u)
}

pub fn theta_d2u(kind: ThetaKind, u: f64, m: Modulus) -> Result<f64> {
    constants(m).theta_d2u(kind, u)
}

pub fn theta_series_derivative(kind: ThetaKind, u: f64, m: Modulus, order: u8) -> Result<f64> {
    constants(m).theta_series_derivative(kind, u, order)
}
