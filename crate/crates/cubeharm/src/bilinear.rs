//! Exact `l_inf -> l_1` matrix norms, restricted normalization, trace-pairing
//! duality, and an alternating-maximization lower bound for the vector-valued
//! (Grothendieck) supremum.

use crate::cube::CubeError;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

/// Largest column count for exact sign enumeration (`2^{n-1}` candidates).
pub const MAX_EXACT_N: usize = 25;

/// The paper's Grothendieck bound `k = (exp(pi/2) - exp(-pi/2))/2 = sinh(pi/2)`.
pub fn grothendieck_bound() -> f64 {
    (std::f64::consts::PI / 2.0).sinh()
}

/// Dense row-major `m x n` real matrix; entry `(j, l)` is `a_{j,l}`.
#[derive(Debug, Clone, PartialEq)]
pub struct RealMatrix {
    m: usize,
    n: usize,
    a: Vec<f64>,
}

impl RealMatrix {
    pub fn new(m: usize, n: usize, a: Vec<f64>) -> Result<Self, CubeError> {
        if m == 0 || n == 0 {
            return Err(CubeError::Precondition("matrix dimensions must be positive".into()));
        }
        if a.len() != m * n {
            return Err(CubeError::LengthMismatch { ell: 0, expected: m * n, got: a.len() });
        }
        if let Some(i) = a.iter().position(|v| !v.is_finite()) {
            return Err(CubeError::NonFinite(i));
        }
        Ok(RealMatrix { m, n, a })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, CubeError> {
        if rows.is_empty() {
            return Err(CubeError::Precondition("matrix has no rows".into()));
        }
        let n = rows[0].len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(CubeError::Precondition("ragged rows".into()));
        }
        RealMatrix::new(rows.len(), n, rows.iter().flatten().copied().collect())
    }

    pub fn rows(&self) -> usize {
        self.m
    }

    pub fn cols(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, j: usize, l: usize) -> f64 {
        self.a[j * self.n + l]
    }

    pub fn entries(&self) -> &[f64] {
        &self.a
    }

    pub fn abs_sum(&self) -> f64 {
        self.a.iter().map(|v| v.abs()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.a.iter().all(|v| *v == 0.0)
    }

    pub fn scale(&self, c: f64) -> RealMatrix {
        RealMatrix {
            m: self.m,
            n: self.n,
            a: self.a.iter().map(|v| c * v).collect(),
        }
    }

    /// `sign(A)^T`, the equality witness for the trace-duality bound.
    pub fn sign_transpose(&self) -> RealMatrix {
        let mut a = vec![0.0; self.m * self.n];
        for j in 0..self.m {
            for l in 0..self.n {
                a[l * self.m + j] = self.get(j, l).signum();
            }
        }
        RealMatrix { m: self.n, n: self.m, a }
    }
}

/// Exact `l_inf -> l_1` norm with an optimal sign vector on the `w` side.
/// Enumerates `w` over one sign class (`w_1 = +1`); the optimal `v_j` is the
/// sign of the inner sum, eliminated analytically.
pub fn infty_to_one_norm(a: &RealMatrix) -> Result<(f64, Vec<i8>), CubeError> {
    let n = a.cols();
    if n > MAX_EXACT_N {
        return Err(CubeError::Precondition(format!(
            "exact enumeration limited to n <= {MAX_EXACT_N}, got {n}"
        )));
    }
    let mut best = f64::NEG_INFINITY;
    let mut best_w = vec![1i8; n];
    for bits in 0..1usize << (n - 1) {
        let w: Vec<f64> = (0..n)
            .map(|l| if l > 0 && bits >> (l - 1) & 1 == 1 { -1.0 } else { 1.0 })
            .collect();
        let mut total = 0.0;
        for j in 0..a.rows() {
            let row_sum: f64 = (0..n).map(|l| a.get(j, l) * w[l]).sum();
            total += row_sum.abs();
        }
        if total > best {
            best = total;
            best_w = w.iter().map(|&x| if x > 0.0 { 1 } else { -1 }).collect();
        }
    }
    Ok((best, best_w))
}

/// Divides `A` by its `l_inf -> l_1` norm; the result attains value exactly 1.
pub fn restrict(a: &RealMatrix) -> Result<RealMatrix, CubeError> {
    if a.is_zero() {
        return Err(CubeError::Precondition("cannot restrict the zero matrix".into()));
    }
    let (norm, _) = infty_to_one_norm(a)?;
    Ok(a.scale(1.0 / norm))
}

/// Trace of `T . A`: `sum_{j,l} a_{j,l} t_{l,j}`.
pub fn trace_pairing(a: &RealMatrix, t: &RealMatrix) -> Result<f64, CubeError> {
    if a.rows() != t.cols() || a.cols() != t.rows() {
        return Err(CubeError::Precondition(format!(
            "trace pairing needs T to be {}x{}, got {}x{}",
            a.cols(),
            a.rows(),
            t.rows(),
            t.cols()
        )));
    }
    let mut sum = 0.0;
    for j in 0..a.rows() {
        for l in 0..a.cols() {
            sum += a.get(j, l) * t.get(l, j);
        }
    }
    Ok(sum)
}

/// Unit-vector families `(v_j)`, `(w_l)` in `R^d` with the bilinear objective
/// `sum a_{j,l} <v_j, w_l>` they attain.
#[derive(Debug, Clone, PartialEq)]
pub struct GramConfiguration {
    pub d: usize,
    pub v: Vec<Vec<f64>>,
    pub w: Vec<Vec<f64>>,
    pub objective: f64,
}

fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

fn objective(a: &RealMatrix, v: &[Vec<f64>], w: &[Vec<f64>]) -> f64 {
    let mut sum = 0.0;
    for j in 0..a.rows() {
        for l in 0..a.cols() {
            sum += a.get(j, l) * dot(&v[j], &w[l]);
        }
    }
    sum
}

/// Best configuration found by alternating maximization over unit vectors:
/// with `w` fixed each `v_j` becomes the normalization of `sum_l a_{j,l} w_l`,
/// then symmetrically for `w`. The objective is non-decreasing per half-step;
/// a violation beyond 1e-10 signals an implementation bug and aborts.
///
/// The result is a lower bound on the vector-valued supremum; divided by the
/// scalar norm it is a lower bound on the Grothendieck constant.
pub fn grothendieck_ratio(
    a: &RealMatrix,
    d: usize,
    restarts: usize,
    tol: f64,
    seed: u64,
) -> Result<GramConfiguration, CubeError> {
    if a.is_zero() {
        return Err(CubeError::Precondition("zero matrix".into()));
    }
    if d == 0 {
        return Err(CubeError::Precondition("ambient dimension must be positive".into()));
    }
    let (m, n) = (a.rows(), a.cols());
    let mut best: Option<GramConfiguration> = None;

    for restart in 0..restarts.max(1) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(restart as u64));
        let sample_unit = |rng: &mut ChaCha8Rng| -> Vec<f64> {
            loop {
                let x: Vec<f64> = (0..d).map(|_| StandardNormal.sample(rng)).collect();
                let norm = dot(&x, &x).sqrt();
                if norm > 1e-12 {
                    return x.iter().map(|v| v / norm).collect();
                }
            }
        };
        // restart 0 starts from the exact scalar optimum embedded on the
        // first axis, so the best objective never falls below the scalar norm
        let (mut v, mut w): (Vec<Vec<f64>>, Vec<Vec<f64>>) = if restart == 0 && n <= MAX_EXACT_N {
            let (_, w_star) = infty_to_one_norm(a)?;
            let axis = |s: f64| {
                let mut u = vec![0.0; d];
                u[0] = s;
                u
            };
            let w: Vec<Vec<f64>> = w_star.iter().map(|&s| axis(s as f64)).collect();
            let v: Vec<Vec<f64>> = (0..m)
                .map(|j| {
                    let row: f64 = (0..n).map(|l| a.get(j, l) * w_star[l] as f64).sum();
                    axis(if row >= 0.0 { 1.0 } else { -1.0 })
                })
                .collect();
            (v, w)
        } else {
            (
                (0..m).map(|_| sample_unit(&mut rng)).collect(),
                (0..n).map(|_| sample_unit(&mut rng)).collect(),
            )
        };

        let mut obj = objective(a, &v, &w);
        for _ in 0..10_000 {
            // v-step: v_j <- normalize(sum_l a_{j,l} w_l)
            for j in 0..m {
                let mut u = vec![0.0; d];
                for l in 0..n {
                    let c = a.get(j, l);
                    for t in 0..d {
                        u[t] += c * w[l][t];
                    }
                }
                let norm = dot(&u, &u).sqrt();
                if norm > 1e-14 {
                    v[j] = u.iter().map(|x| x / norm).collect();
                }
            }
            let after_v = objective(a, &v, &w);
            if after_v < obj - 1e-10 {
                return Err(CubeError::Precondition(format!(
                    "alternating update decreased the objective: {obj} -> {after_v}"
                )));
            }
            // w-step: w_l <- normalize(sum_j a_{j,l} v_j)
            for l in 0..n {
                let mut u = vec![0.0; d];
                for j in 0..m {
                    let c = a.get(j, l);
                    for t in 0..d {
                        u[t] += c * v[j][t];
                    }
                }
                let norm = dot(&u, &u).sqrt();
                if norm > 1e-14 {
                    w[l] = u.iter().map(|x| x / norm).collect();
                }
            }
            let after_w = objective(a, &v, &w);
            if after_w < after_v - 1e-10 {
                return Err(CubeError::Precondition(format!(
                    "alternating update decreased the objective: {after_v} -> {after_w}"
                )));
            }
            let rel = (after_w - obj) / after_w.abs().max(1e-30);
            obj = after_w;
            if rel.abs() < tol {
                break;
            }
        }
        if best.as_ref().map_or(true, |b| obj > b.objective) {
            best = Some(GramConfiguration { d, v: v.clone(), w: w.clone(), objective: obj });
        }
    }
    Ok(best.expect("at least one restart"))
}
