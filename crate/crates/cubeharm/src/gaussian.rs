//! Closed-form Gaussian absolute moments `int |x|^p exp(-pi x^2) dx` and the
//! reduction of n-dimensional moments of linear functionals to the
//! 1-dimensional case.

use crate::cube::CubeError;

/// Absolute moment of the standard (variance `1/(2 pi)`) Gaussian weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianMoment {
    pub p: f64,
    /// `int_R |x|^p exp(-pi x^2) dx = pi^{-(p+1)/2} Gamma((p+1)/2)`.
    pub value: f64,
    /// `value^{1/p}` for `p > 0`; equals `value` at `p = 0` by convention.
    pub root: f64,
}

// Lanczos approximation, g = 7, n = 9; relative error < 1e-13 on [0.5, 30].
const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Gamma function for positive real arguments.
pub fn gamma(x: f64) -> f64 {
    if x < 0.5 {
        // reflection keeps accuracy near 0
        std::f64::consts::PI / ((std::f64::consts::PI * x).sin() * gamma(1.0 - x))
    } else {
        let x = x - 1.0;
        let mut acc = LANCZOS_COEFFS[0];
        for (i, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
            acc += c / (x + i as f64);
        }
        let t = x + LANCZOS_G + 0.5;
        (2.0 * std::f64::consts::PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * acc
    }
}

/// `gamma_p = pi^{-(p+1)/2} Gamma((p+1)/2)` with its `p`-th root.
pub fn gaussian_moment(p: f64) -> Result<GaussianMoment, CubeError> {
    if !p.is_finite() || p < 0.0 {
        return Err(CubeError::Precondition(format!("p must be finite and >= 0, got {p}")));
    }
    let value = std::f64::consts::PI.powf(-(p + 1.0) / 2.0) * gamma((p + 1.0) / 2.0);
    let root = if p > 0.0 { value.powf(1.0 / p) } else { value };
    Ok(GaussianMoment { p, value, root })
}

/// `(int_{R^n} |<x,v>|^p exp(-pi <x,x>) dx)^{1/p}` by the closed form
/// `|v| * gaussian_moment(p).root`.
pub fn linear_functional_moment(v: &[f64], p: f64) -> Result<f64, CubeError> {
    if v.is_empty() {
        return Err(CubeError::Precondition("empty vector".into()));
    }
    if !(p > 0.0) || !p.is_finite() {
        return Err(CubeError::Precondition(format!("p must be finite and > 0, got {p}")));
    }
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    Ok(norm * gaussian_moment(p)?.root)
}

/// Ratio of the `p`-th and 2nd moment roots of a mean-zero Gaussian; the
/// large-`ell` comparison target for Khintchine constants (`3^{1/4}` at p=4).
pub fn gaussian_khintchine_limit(p: f64) -> Result<f64, CubeError> {
    if !(p >= 1.0) {
        return Err(CubeError::Precondition(format!("p must be >= 1, got {p}")));
    }
    Ok(gaussian_moment(p)?.root / gaussian_moment(2.0)?.root)
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`, by Newton iteration on the
/// Legendre polynomial.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        // Chebyshev initial guess
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            // evaluate P_n and P_n' by recurrence
            let (mut p0, mut p1) = (1.0f64, x);
            for k in 2..=n {
                let k = k as f64;
                let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (mut p0, mut p1) = (1.0f64, x);
        for k in 2..=n {
            let k = k as f64;
            let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

/// Composite Gauss-Legendre quadrature of `g` over `[a, b]`.
pub fn composite_quadrature<F: Fn(f64) -> f64>(g: F, a: f64, b: f64, panels: usize, order: usize) -> f64 {
    let (nodes, weights) = gauss_legendre(order);
    let h = (b - a) / panels as f64;
    let mut total = 0.0;
    for panel in 0..panels {
        let lo = a + panel as f64 * h;
        let mid = lo + 0.5 * h;
        let half = 0.5 * h;
        let mut s = 0.0;
        for (x, w) in nodes.iter().zip(&weights) {
            s += w * g(mid + half * x);
        }
        total += half * s;
    }
    total
}

/// Quadrature oracle for the 1-dimensional moment: `2 int_0^6 x^p e^{-pi x^2}`
/// (the tail beyond 6 is below 1e-49). Splitting at 0 keeps the integrand
/// smooth for odd `p`.
pub fn gaussian_moment_quadrature(p: f64) -> f64 {
    2.0 * composite_quadrature(|x| x.powf(p) * (-std::f64::consts::PI * x * x).exp(), 0.0, 6.0, 48, 20)
}

#[cfg(test)]
mod tests {
    use super::*;

    const PI: f64 = std::f64::consts::PI;

    #[test]
    fn gamma_known_values() {
        assert!((gamma(1.0) - 1.0).abs() < 1e-13);
        assert!((gamma(0.5) - PI.sqrt()).abs() < 1e-13);
        assert!((gamma(5.0) - 24.0).abs() < 1e-11);
        assert!((gamma(1.5) - PI.sqrt() / 2.0).abs() < 1e-13);
    }

    #[test]
    fn moment_closed_forms() {
        assert!((gaussian_moment(0.0).unwrap().value - 1.0).abs() < 1e-12);
        assert!((gaussian_moment(2.0).unwrap().value - 1.0 / (2.0 * PI)).abs() < 1e-12);
        assert!((gaussian_moment(4.0).unwrap().value - 3.0 / (4.0 * PI * PI)).abs() < 1e-12);
        assert!(gaussian_moment(-1.0).is_err());
        assert!(gaussian_moment(f64::NAN).is_err());
    }

    #[test]
    fn moment_matches_quadrature() {
        for p in [0.0, 1.0, 2.0, 3.0, 4.0, 6.0] {
            let closed = gaussian_moment(p).unwrap().value;
            let quad = gaussian_moment_quadrature(p);
            assert!(
                (closed - quad).abs() / closed < 1e-9,
                "p = {p}: closed {closed} vs quadrature {quad}"
            );
        }
        // fractional p: |x|^p is not smooth at 0, so the quadrature converges
        // more slowly there
        for p in [0.5, 2.7] {
            let closed = gaussian_moment(p).unwrap().value;
            let quad = gaussian_moment_quadrature(p);
            assert!((closed - quad).abs() / closed < 1e-5, "p = {p}");
        }
    }

    #[test]
    fn linear_functional_examples() {
        let zero = linear_functional_moment(&[0.0, 0.0, 0.0], 2.0).unwrap();
        assert_eq!(zero, 0.0);
        let e1 = linear_functional_moment(&[1.0, 0.0, 0.0], 2.0).unwrap();
        assert!((e1 - (1.0 / (2.0 * PI)).sqrt()).abs() < 1e-12);
        let v34 = linear_functional_moment(&[3.0, 4.0], 2.0).unwrap();
        assert!((v34 - 5.0 * (1.0 / (2.0 * PI)).sqrt()).abs() < 1e-12);
        assert!(linear_functional_moment(&[], 2.0).is_err());
    }

    #[test]
    fn homogeneity() {
        for t in [-2.5, 0.5, 3.0] {
            let base = linear_functional_moment(&[1.0, 2.0], 3.0).unwrap();
            let scaled = linear_functional_moment(&[t, 2.0 * t], 3.0).unwrap();
            assert!((scaled - t.abs() * base).abs() < 1e-12);
        }
    }

    #[test]
    fn khintchine_limit() {
        assert!((gaussian_khintchine_limit(2.0).unwrap() - 1.0).abs() < 1e-12);
        assert!((gaussian_khintchine_limit(4.0).unwrap() - 3f64.powf(0.25)).abs() < 1e-12);
        // dominates the cube ratios (3 - 2/ell)^{1/4}
        for ell in 1..=12 {
            let cube = (3.0 - 2.0 / ell as f64).powf(0.25);
            assert!(gaussian_khintchine_limit(4.0).unwrap() >= cube);
        }
    }

    #[test]
    fn product_factorization_2d_3d() {
        // int over R^n of exp(-pi |x|^2) = 1
        let one_d = 2.0 * composite_quadrature(|x| (-PI * x * x).exp(), 0.0, 6.0, 16, 20);
        assert!((one_d - 1.0).abs() < 1e-12);
        let (nodes, weights) = gauss_legendre(20);
        let mut grid: Vec<(f64, f64)> = Vec::new();
        let panels = 12;
        let h = 12.0 / panels as f64;
        for panel in 0..panels {
            let mid = -6.0 + (panel as f64 + 0.5) * h;
            for (x, w) in nodes.iter().zip(&weights) {
                grid.push((mid + 0.5 * h * x, 0.5 * h * w));
            }
        }
        let mut total2 = 0.0;
        for &(x, wx) in &grid {
            for &(y, wy) in &grid {
                total2 += wx * wy * (-PI * (x * x + y * y)).exp();
            }
        }
        assert!((total2 - 1.0).abs() < 1e-6);
        let mut total3 = 0.0;
        for &(x, wx) in &grid {
            for &(y, wy) in &grid {
                let partial = wx * wy * (-PI * (x * x + y * y)).exp();
                for &(z, wz) in &grid {
                    total3 += partial * wz * (-PI * z * z).exp();
                }
            }
        }
        assert!((total3 - 1.0).abs() < 1e-6);
    }

    #[test]
    fn rotational_invariance_2d_quadrature() {
        // |<x, v>|^2 moment for v = (1, 0) vs v = (1/sqrt2, 1/sqrt2)
        let (nodes, weights) = gauss_legendre(20);
        let panels = 12;
        let h = 12.0 / panels as f64;
        let mut grid: Vec<(f64, f64)> = Vec::new();
        for panel in 0..panels {
            let mid = -6.0 + (panel as f64 + 0.5) * h;
            for (x, w) in nodes.iter().zip(&weights) {
                grid.push((mid + 0.5 * h * x, 0.5 * h * w));
            }
        }
        let moment = |v: [f64; 2]| {
            let mut total = 0.0;
            for &(x, wx) in &grid {
                for &(y, wy) in &grid {
                    let dot: f64 = x * v[0] + y * v[1];
                    total += wx * wy * dot.powi(2) * (-PI * (x * x + y * y)).exp();
                }
            }
            total.sqrt()
        };
        let a = moment([1.0, 0.0]);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let b = moment([s, s]);
        assert!((a - b).abs() < 1e-6);
        // and both match the closed form
        let closed = linear_functional_moment(&[1.0, 0.0], 2.0).unwrap();
        assert!((a - closed).abs() < 1e-6);
    }
}
