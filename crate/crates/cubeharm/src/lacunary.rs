//! Lacunary polynomials `f(z) = sum_j c_j z^{2^j}` on the unit circle:
//! exact L2/L4 norms, the power-of-two collision lemma, and a trapezoid
//! quadrature oracle that is exact for trigonometric polynomials.

use crate::cube::CubeError;
use num_complex::Complex64;

pub const MAX_M: usize = 20;

#[derive(Debug, Clone, PartialEq)]
pub struct LacunaryPolynomial {
    c: Vec<Complex64>,
}

impl LacunaryPolynomial {
    pub fn new(c: Vec<Complex64>) -> Result<Self, CubeError> {
        if c.is_empty() {
            return Err(CubeError::Precondition("empty coefficient vector".into()));
        }
        if c.len() - 1 > MAX_M {
            return Err(CubeError::Precondition(format!("m must be <= {MAX_M}")));
        }
        if let Some(i) = c.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(CubeError::NonFinite(i));
        }
        Ok(LacunaryPolynomial { c })
    }

    /// Degree index `m`; the top frequency is `2^m`.
    pub fn m(&self) -> usize {
        self.c.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.c
    }

    /// `f(z)` by repeated squaring of `z` through the frequencies `2^j`.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut pow = z; // z^{2^0}
        let mut acc = self.c[0] * pow;
        for c in &self.c[1..] {
            pow = pow * pow;
            acc += c * pow;
        }
        acc
    }

    /// `(sum |c_j|^2)^{1/2}`, by Parseval.
    pub fn l2_norm(&self) -> f64 {
        self.c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Exact L4 norm from the collision structure:
    /// `(2 (sum |c_j|^2)^2 - sum |c_j|^4)^{1/4}`.
    pub fn l4_norm_closed(&self) -> f64 {
        let s2: f64 = self.c.iter().map(|z| z.norm_sqr()).sum();
        let s4: f64 = self.c.iter().map(|z| z.norm_sqr().powi(2)).sum();
        (2.0 * s2 * s2 - s4).powf(0.25)
    }

    /// `((1/M) sum_{k<M} |f(e^{2 pi i k / M})|^p)^{1/p}` for even `p`.
    /// The trapezoid rule is exact once `M` exceeds the degree `p * 2^m`,
    /// so this is an oracle rather than an approximation. `M` defaults to
    /// the smallest power of two exceeding `p * 2^m + 1`.
    pub fn circle_quadrature_norm(&self, p: u32, m_points: Option<usize>) -> Result<f64, CubeError> {
        if p == 0 || p % 2 != 0 {
            return Err(CubeError::Precondition(format!("p must be even and positive, got {p}")));
        }
        let degree = p as usize * (1usize << self.m());
        let m_points = match m_points {
            Some(m) => {
                if m <= degree {
                    return Err(CubeError::Precondition(format!(
                        "M = {m} too small for exactness; need M > {degree}"
                    )));
                }
                m
            }
            None => (degree + 2).next_power_of_two(),
        };
        // Kahan summation keeps the 1e-9 oracle tolerance honest at large M
        let mut sum = 0.0f64;
        let mut comp = 0.0f64;
        for k in 0..m_points {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / m_points as f64;
            let z = Complex64::new(theta.cos(), theta.sin());
            let term = self.eval(z).norm_sqr().powi(p as i32 / 2);
            let y = term - comp;
            let t = sum + y;
            comp = (t - sum) - y;
            sum = t;
        }
        Ok((sum / m_points as f64).powf(1.0 / p as f64))
    }
}

/// Exhaustively verifies that `2^{j1} + 2^{j2} = 2^{l1} + 2^{l2}` holds iff
/// `{j1, j2} = {l1, l2}` as multisets, for exponents up to `max_j`.
/// Returns `Err` with a counterexample tuple if the claim ever fails.
pub fn collision_check(max_j: u32) -> Result<bool, (u32, u32, u32, u32)> {
    assert!(max_j <= 20, "max_j must be <= 20");
    for j1 in 0..=max_j {
        for j2 in 0..=max_j {
            for l1 in 0..=max_j {
                for l2 in 0..=max_j {
                    let sums_equal = (1u64 << j1) + (1u64 << j2) == (1u64 << l1) + (1u64 << l2);
                    let multiset_equal = (j1 == l1 && j2 == l2) || (j1 == l2 && j2 == l1);
                    if sums_equal != multiset_equal {
                        return Err((j1, j2, l1, l2));
                    }
                }
            }
        }
    }
    Ok(true)
}
