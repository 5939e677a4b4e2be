//! Real-valued functions on the Boolean cube `{-1,+1}^ell` with the
//! normalized counting measure.

use thiserror::Error;

/// Maximum number of coordinates; dense storage is `2^ell` doubles.
pub const MAX_ELL: u32 = 24;

#[derive(Debug, Error, PartialEq)]
pub enum CubeError {
    #[error("ell must be in [1, {MAX_ELL}], got {0}")]
    EllOutOfRange(u32),
    #[error("expected {expected} values for ell = {ell}, got {got}")]
    LengthMismatch { ell: u32, expected: usize, got: usize },
    #[error("value at index {0} is not finite")]
    NonFinite(usize),
    #[error("p must be >= 1 (or infinity), got {0}")]
    InvalidExponent(f64),
    #[error("dimension mismatch: ell = {0} vs ell = {1}")]
    DimensionMismatch(u32, u32),
    #[error("subset mask {subset} out of range for ell = {ell}")]
    SubsetOutOfRange { ell: u32, subset: usize },
    #[error("level k = {k} out of range for ell = {ell}")]
    LevelOutOfRange { ell: u32, k: u32 },
    #[error("{0}")]
    Precondition(String),
}

/// Dense function on the cube. Entry `b` of `values` holds `f(x(b))` where
/// `x_j(b) = +1` iff bit `j-1` of `b` is clear.
///
/// Immutable after construction; all operations are pure.
#[derive(Debug, Clone, PartialEq)]
pub struct CubeFunction {
    ell: u32,
    values: Vec<f64>,
}

impl CubeFunction {
    pub fn new(ell: u32, values: Vec<f64>) -> Result<Self, CubeError> {
        if ell == 0 || ell > MAX_ELL {
            return Err(CubeError::EllOutOfRange(ell));
        }
        let expected = 1usize << ell;
        if values.len() != expected {
            return Err(CubeError::LengthMismatch { ell, expected, got: values.len() });
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(CubeError::NonFinite(i));
        }
        Ok(CubeFunction { ell, values })
    }

    /// The constant function `c` on `B_ell`.
    pub fn constant(ell: u32, c: f64) -> Result<Self, CubeError> {
        if ell == 0 || ell > MAX_ELL {
            return Err(CubeError::EllOutOfRange(ell));
        }
        if !c.is_finite() {
            return Err(CubeError::NonFinite(0));
        }
        Ok(CubeFunction { ell, values: vec![c; 1 << ell] })
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Coordinate `x_j` of the point with index `b` (`j` is 1-based).
    #[inline]
    pub fn coordinate(b: usize, j: u32) -> f64 {
        if b >> (j - 1) & 1 == 0 {
            1.0
        } else {
            -1.0
        }
    }

    /// `(2^{-ell} sum |f|^p)^{1/p}`, or `max |f|` for `p = infinity`.
    /// Rejects `p < 1`; see [`lp_quantity`](Self::lp_quantity) for `0 < p < 1`.
    pub fn lp_norm(&self, p: f64) -> Result<f64, CubeError> {
        if p.is_nan() || p < 1.0 {
            return Err(CubeError::InvalidExponent(p));
        }
        Ok(self.lp_raw(p))
    }

    /// Same formula for any `p > 0`, with no triangle-inequality contract.
    pub fn lp_quantity(&self, p: f64) -> Result<f64, CubeError> {
        if !(p > 0.0) {
            return Err(CubeError::InvalidExponent(p));
        }
        Ok(self.lp_raw(p))
    }

    fn lp_raw(&self, p: f64) -> f64 {
        if p.is_infinite() {
            return self.values.iter().fold(0.0, |m, v| m.max(v.abs()));
        }
        let mean = if p == 2.0 {
            self.values.iter().map(|v| v * v).sum::<f64>() / self.len() as f64
        } else {
            self.values.iter().map(|v| v.abs().powf(p)).sum::<f64>() / self.len() as f64
        };
        mean.powf(1.0 / p)
    }

    /// Normalized inner product `2^{-ell} sum f(x) g(x)`.
    pub fn inner_product(&self, other: &CubeFunction) -> Result<f64, CubeError> {
        if self.ell != other.ell {
            return Err(CubeError::DimensionMismatch(self.ell, other.ell));
        }
        let s: f64 = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a * b)
            .sum();
        Ok(s / self.len() as f64)
    }
}
