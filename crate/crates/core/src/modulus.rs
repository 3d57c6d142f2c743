use crate::error::{Error, Result};

/// Smallest admitted modulus.
pub const MIN_K: f64 = 1e-9;
/// Smallest admitted complementary modulus; bounds `k` away from 1.
pub const MIN_K_PRIME: f64 = 1e-6;

/// A validated elliptic modulus `k ∈ (0, 1)` together with its complement.
///
/// `k'²` is carried separately so it stays accurate as `k → 1`: it is either
/// `(1 - k)(1 + k)` or, when built from the complement, `k'·k'`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Modulus {
    k: f64,
    k_prime: f64,
    k_prime_sq: f64,
}

impl Modulus {
    pub fn new(k: f64) -> Result<Self> {
        if !k.is_finite() || !(MIN_K..1.0).contains(&k) {
            return Err(Error::Domain(format!(
                "k = {k} outside [{MIN_K:e}, 1)"
            )));
        }
        let k_prime_sq = (1.0 - k) * (1.0 + k);
        let k_prime = k_prime_sq.sqrt();
        if k_prime < MIN_K_PRIME {
            return Err(Error::Domain(format!(
                "k = {k} too close to 1 (k' = {k_prime:e} < {MIN_K_PRIME:e})"
            )));
        }
        Ok(Self {
            k,
            k_prime,
            k_prime_sq,
        })
    }

    /// Builds the modulus from `k'`, keeping `k'` exact.
    pub fn from_complementary(k_prime: f64) -> Result<Self> {
        if !k_prime.is_finite() || !(MIN_K_PRIME..1.0).contains(&k_prime) {
            return Err(Error::Domain(format!(
                "k' = {k_prime} outside [{MIN_K_PRIME:e}, 1)"
            )));
        }
        let k = ((1.0 - k_prime) * (1.0 + k_prime)).sqrt();
        if k < MIN_K {
            return Err(Error::Domain(format!("k' = {k_prime} gives k = {k:e} < {MIN_K:e}")));
        }
        Ok(Self {
            k,
            k_prime,
            k_prime_sq: k_prime * k_prime,
        })
    }

    #[inline]
    pub fn k(&self) -> f64 {
        self.k
    }

    #[inline]
    pub fn k_prime(&self) -> f64 {
        self.k_prime
    }

    #[inline]
    pub fn k_prime_sq(&self) -> f64 {
        self.k_prime_sq
    }

    #[inline]
    pub fn k_sq(&self) -> f64 {
        self.k * self.k
    }

    /// Whether `k ± step` both stay inside the admitted range.
    pub fn admits_stencil(k: f64, step: f64) -> bool {
        Modulus::new(k - step).is_ok() && Modulus::new(k + step).is_ok()
    }
}

impl TryFrom<f64> for Modulus {
    type Error = Error;

    fn try_from(k: f64) -> Result<Self> {
        Modulus::new(k)
    }
}
