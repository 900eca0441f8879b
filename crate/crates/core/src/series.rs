use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite, uniformly sampled real series.
///
/// `dt` is carried as metadata; the discrete computations only look at the
/// sample indices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleSeries {
    values: Vec<f64>,
    dt: f64,
}

impl SampleSeries {
    pub fn new(values: Vec<f64>, dt: f64) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptySeries);
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteInput { index });
        }
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::InvalidSpacing(dt));
        }
        Ok(Self { values, dt })
    }

    /// Unit-spaced series.
    pub fn from_values(values: Vec<f64>) -> Result<Self> {
        Self::new(values, 1.0)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Pointwise `c * x`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        Self::new(self.values.iter().map(|v| c * v).collect(), self.dt)
    }

    /// Short stable fingerprint of the samples and spacing (FNV-1a over the bit patterns).
    pub fn fingerprint(&self) -> String {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        let bits = std::iter::once(self.dt.to_bits()).chain(self.values.iter().map(|v| v.to_bits()));
        for word in bits {
            for byte in word.to_le_bytes() {
                h ^= u64::from(byte);
                h = h.wrapping_mul(0x0100_0000_01b3);
            }
        }
        format!("fnv1a:{h:016x}:len={}", self.values.len())
    }
}

/// Exponent `p` and window length `n` (in samples).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindowSpec {
    pub p: f64,
    pub n: usize,
}

impl WindowSpec {
    pub fn new(p: f64, n: usize) -> Result<Self> {
        check_exponent(p)?;
        if n == 0 {
            return Err(Error::ZeroWindow);
        }
        Ok(Self { p, n })
    }
}

pub(crate) fn check_exponent(p: f64) -> Result<()> {
    if p.is_finite() && p > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidExponent(p))
    }
}

/// `|v|^p`, with the common exponents special-cased.
#[inline]
pub(crate) fn abs_pow(v: f64, p: f64) -> f64 {
    let a = v.abs();
    if p == 1.0 {
        a
    } else if p == 2.0 {
        a * a
    } else {
        a.powf(p)
    }
}

/// Inverse of [`abs_pow`] on nonnegative inputs.
#[inline]
pub(crate) fn root(v: f64, p: f64) -> f64 {
    if p == 1.0 {
        v
    } else if p == 2.0 {
        v.sqrt()
    } else {
        v.powf(p.recip())
    }
}
