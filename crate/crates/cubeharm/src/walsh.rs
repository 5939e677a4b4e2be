//! Walsh/Rademacher basis and the fast Walsh-Hadamard transform.
//!
//! Spectra are indexed by subset bitmask: entry `m` of a spectrum is the
//! coefficient of `w_I` with `I = {j : bit j-1 of m set}`. The value of
//! `w_I` at point `b` is `(-1)^popcount(m & b)` under the cube encoding.

use crate::cube::{CubeError, CubeFunction};

#[derive(Debug, Clone, PartialEq)]
pub struct WalshSpectrum {
    ell: u32,
    coeffs: Vec<f64>,
}

impl WalshSpectrum {
    pub fn new(ell: u32, coeffs: Vec<f64>) -> Result<Self, CubeError> {
        // same shape constraints as a cube function
        let f = CubeFunction::new(ell, coeffs)?;
        Ok(WalshSpectrum { ell, coeffs: f.into_values() })
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<f64> {
        self.coeffs
    }
}

/// In-place Walsh-Hadamard butterfly, unnormalized. Self-inverse up to a
/// factor of `2^ell`.
fn fwht(data: &mut [f64]) {
    let n = data.len();
    let mut h = 1;
    while h < n {
        for block in (0..n).step_by(2 * h) {
            for i in block..block + h {
                let (a, b) = (data[i], data[i + h]);
                data[i] = a + b;
                data[i + h] = a - b;
            }
        }
        h *= 2;
    }
}

/// The Walsh function `w_I` for the subset encoded by `subset`; the constant
/// `1` when `subset = 0`.
pub fn walsh_function(ell: u32, subset: usize) -> Result<CubeFunction, CubeError> {
    let probe = CubeFunction::constant(ell, 0.0)?;
    let n = probe.len();
    if subset >= n {
        return Err(CubeError::SubsetOutOfRange { ell, subset });
    }
    let values = (0..n)
        .map(|b| if (subset & b).count_ones() % 2 == 0 { 1.0 } else { -1.0 })
        .collect();
    CubeFunction::new(ell, values)
}

/// The Rademacher function `r_j` on `B_ell` (`j` is 1-based).
pub fn rademacher(ell: u32, j: u32) -> Result<CubeFunction, CubeError> {
    walsh_function(ell, 1usize << (j - 1))
}

/// Walsh coefficients of `f`: entry `m` equals `inner_product(f, w_m)`.
/// O(ell * 2^ell) via FWHT with a final `2^{-ell}` scaling.
pub fn analyze(f: &CubeFunction) -> WalshSpectrum {
    let mut data = f.values().to_vec();
    fwht(&mut data);
    let scale = 1.0 / data.len() as f64;
    for c in &mut data {
        *c *= scale;
    }
    WalshSpectrum { ell: f.ell(), coeffs: data }
}

/// `sum_I coeffs[I] * w_I`; exact inverse of [`analyze`] (no scaling here).
pub fn synthesize(s: &WalshSpectrum) -> CubeFunction {
    let mut data = s.coeffs.clone();
    fwht(&mut data);
    CubeFunction::new(s.ell, data).expect("spectrum entries are finite")
}

/// `f = sum_j a_j r_j`; `a` has length `ell >= 1`.
pub fn rademacher_span(a: &[f64]) -> Result<CubeFunction, CubeError> {
    let ell = a.len() as u32;
    if a.is_empty() {
        return Err(CubeError::EllOutOfRange(0));
    }
    let probe = CubeFunction::constant(ell, 0.0)?;
    let values = (0..probe.len())
        .map(|b| {
            a.iter()
                .enumerate()
                .map(|(j, aj)| aj * CubeFunction::coordinate(b, j as u32 + 1))
                .sum()
        })
        .collect();
    CubeFunction::new(ell, values)
}
