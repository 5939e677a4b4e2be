//! Exact even moments of Rademacher sums and empirical best constants for
//! the two Khintchine-type inequalities.

use crate::cube::CubeError;
use crate::walsh::rademacher_span;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

/// Limits for the composition enumeration in [`even_moment`].
pub const MAX_ELL: usize = 16;
pub const MAX_S: u32 = 6;

/// Result of a best-constant search: the extremal value and the coefficient
/// vector attaining it (unit 2-norm).
#[derive(Debug, Clone, PartialEq)]
pub struct RatioResult {
    pub ratio: f64,
    pub coefficients: Vec<f64>,
}

fn factorials(up_to: usize) -> Vec<f64> {
    let mut f = vec![1.0; up_to + 1];
    for i in 1..=up_to {
        f[i] = f[i - 1] * i as f64;
    }
    f
}

/// `E[(sum_j a_j r_j)^{2s}]` via the multinomial sum over compositions
/// `(s_1, ..., s_ell)` of `s`: only even powers of each `r_j` survive, giving
/// `sum (2s)! / prod (2 s_j)! * prod a_j^{2 s_j}`.
pub fn even_moment(a: &[f64], s: u32) -> Result<f64, CubeError> {
    if a.is_empty() {
        return Err(CubeError::Precondition("empty coefficient vector".into()));
    }
    if s == 0 {
        return Err(CubeError::Precondition("s must be >= 1".into()));
    }
    if a.len() > MAX_ELL || s > MAX_S {
        return Err(CubeError::Precondition(format!(
            "size limits exceeded: ell <= {MAX_ELL}, s <= {MAX_S}"
        )));
    }
    let fact = factorials(2 * s as usize);
    let total = fact[2 * s as usize];
    // stack-based enumeration of compositions of s into a.len() parts
    let ell = a.len();
    let mut parts = vec![0u32; ell];
    let mut sum = 0.0;
    fn recurse(
        a: &[f64],
        fact: &[f64],
        total: f64,
        parts: &mut [u32],
        idx: usize,
        remaining: u32,
        sum: &mut f64,
    ) {
        if idx + 1 == parts.len() {
            parts[idx] = remaining;
            let mut term = total;
            for (j, &sj) in parts.iter().enumerate() {
                term /= fact[2 * sj as usize];
                term *= a[j].powi(2 * sj as i32);
            }
            *sum += term;
            return;
        }
        for sj in 0..=remaining {
            parts[idx] = sj;
            recurse(a, fact, total, parts, idx + 1, remaining - sj, sum);
        }
    }
    recurse(a, &fact, total, &mut parts, 0, s, &mut sum);
    Ok(sum)
}

/// Direct cube-enumeration oracle for `even_moment`, `2^{-ell} sum f(x)^{2s}`.
pub fn even_moment_enumerated(a: &[f64], s: u32) -> Result<f64, CubeError> {
    let f = rademacher_span(a)?;
    let p = 2 * s as i32;
    let sum: f64 = f.values().iter().map(|v| v.powi(p)).sum();
    Ok(sum / f.len() as f64)
}

/// `||f||_q / ||f||_2` for `f = sum a_j r_j`, by cube enumeration.
fn lq_over_l2(a: &[f64], q: f64) -> f64 {
    let f = rademacher_span(a).expect("nonempty");
    let l2 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    if l2 == 0.0 {
        return 0.0;
    }
    f.lp_quantity(q).expect("q > 0") / l2
}

/// `(E f^{2s})^{1/(2s)} / ||f||_2` on the unit coefficient sphere.
fn even_ratio(a: &[f64], s: u32) -> f64 {
    let m = even_moment(a, s).expect("validated");
    let l2 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    m.powf(1.0 / (2.0 * s as f64)) / l2
}

fn normalize(a: &mut [f64]) {
    let n = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    if n > 0.0 {
        for x in a.iter_mut() {
            *x /= n;
        }
    } else {
        a[0] = 1.0;
    }
}

/// Multi-start projected gradient search on the coefficient sphere.
/// `maximize` flips between ascent and descent. The gradient is taken by
/// central finite differences; structured seeds are always included.
fn sphere_search<F>(ell: usize, objective: F, maximize: bool, restarts: usize, seed: u64) -> RatioResult
where
    F: Fn(&[f64]) -> f64,
{
    let sign = if maximize { 1.0 } else { -1.0 };
    let mut best_val = f64::NEG_INFINITY;
    let mut best_a = vec![0.0; ell];

    let mut starts: Vec<Vec<f64>> = Vec::new();
    // structured seeds: all-equal, one-spike, two-spike
    starts.push(vec![1.0; ell]);
    let mut spike = vec![0.0; ell];
    spike[0] = 1.0;
    starts.push(spike);
    if ell >= 2 {
        let mut two = vec![0.0; ell];
        two[0] = 1.0;
        two[1] = 1.0;
        starts.push(two);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..restarts {
        starts.push((0..ell).map(|_| StandardNormal.sample(&mut rng)).collect());
    }

    for mut a in starts {
        normalize(&mut a);
        let mut val = sign * objective(&a);
        let mut step = 0.25;
        let eps = 1e-6;
        for _ in 0..10_000 {
            // finite-difference gradient on the sphere
            let mut grad = vec![0.0; ell];
            for j in 0..ell {
                let mut plus = a.clone();
                plus[j] += eps;
                let mut minus = a.clone();
                minus[j] -= eps;
                normalize(&mut plus);
                normalize(&mut minus);
                grad[j] = sign * (objective(&plus) - objective(&minus)) / (2.0 * eps);
            }
            let gnorm = grad.iter().map(|g| g * g).sum::<f64>().sqrt();
            if gnorm < 1e-14 {
                break;
            }
            let mut improved = false;
            while step > 1e-14 {
                let mut cand: Vec<f64> =
                    a.iter().zip(&grad).map(|(x, g)| x + step * g / gnorm).collect();
                normalize(&mut cand);
                let cval = sign * objective(&cand);
                if cval > val {
                    let rel = (cval - val) / val.abs().max(1e-30);
                    a = cand;
                    val = cval;
                    improved = true;
                    if rel < 1e-12 {
                        step = 0.0;
                    }
                    break;
                }
                step *= 0.5;
            }
            if !improved || step == 0.0 {
                break;
            }
        }
        if val > best_val {
            best_val = val;
            best_a = a;
        }
    }
    RatioResult { ratio: sign * best_val, coefficients: best_a }
}

/// Sup over nonzero `a` of `(E f^{2s})^{1/(2s)} / ||f||_2`. For `s = 2` this
/// equals `(3 - 2/ell)^{1/4}`, which validates the optimizer.
pub fn best_ratio_even(ell: usize, s: u32, restarts: usize, seed: u64) -> Result<RatioResult, CubeError> {
    if ell == 0 || ell > MAX_ELL {
        return Err(CubeError::Precondition(format!("ell must be in [1, {MAX_ELL}]")));
    }
    if s < 2 || s > MAX_S {
        return Err(CubeError::Precondition(format!("s must be in [2, {MAX_S}]")));
    }
    Ok(sphere_search(ell, |a| even_ratio(a, s), true, restarts, seed))
}

/// Inf over nonzero `a` of `||f||_q / ||f||_2` for `0 < q < 2`. The
/// reciprocal is the empirical best reverse-Khintchine constant at this `ell`.
pub fn best_ratio_low(ell: usize, q: f64, restarts: usize, seed: u64) -> Result<RatioResult, CubeError> {
    if ell == 0 || ell > MAX_ELL {
        return Err(CubeError::Precondition(format!("ell must be in [1, {MAX_ELL}]")));
    }
    if !(q > 0.0 && q < 2.0) {
        return Err(CubeError::Precondition(format!("q must lie in (0, 2), got {q}")));
    }
    Ok(sphere_search(ell, |a| lq_over_l2(a, q), false, restarts, seed))
}

/// The reverse constant obtained by interpolating `||f||_2` between `||f||_q`
/// and `||f||_4` via Hoelder, using `||f||_4 <= 3^{1/4} ||f||_2`:
/// `3^{(1-theta)/(q theta)}` with `theta = 2/(4-q)`.
pub fn holder_reverse_constant(q: f64) -> Result<f64, CubeError> {
    if !(q > 0.0 && q < 2.0) {
        return Err(CubeError::Precondition(format!("q must lie in (0, 2), got {q}")));
    }
    let theta = 2.0 / (4.0 - q);
    Ok(3f64.powf((1.0 - theta) / (q * theta)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn even_moment_examples() {
        // single coordinate: r^{2s} = 1, so the moment is c^{2s}
        for s in 1..=4 {
            assert!((even_moment(&[1.5], s).unwrap() - 1.5f64.powi(2 * s as i32)).abs() < 1e-10);
        }
        // (r1 + r2)^4 averaged: (16 + 0 + 0 + 16)/4 = 8
        assert!((even_moment(&[1.0, 1.0], 2).unwrap() - 8.0).abs() < 1e-12);
        // 3 (sum a^2)^2 - 2 sum a^4 = 27 - 6 = 21
        assert!((even_moment(&[1.0, 1.0, 1.0], 2).unwrap() - 21.0).abs() < 1e-12);
    }

    #[test]
    fn even_moment_rejections() {
        assert!(even_moment(&[], 2).is_err());
        assert!(even_moment(&[1.0], 0).is_err());
        assert!(even_moment(&vec![1.0; 17], 2).is_err());
        assert!(even_moment(&[1.0], 7).is_err());
    }

    #[test]
    fn best_ratio_even_small() {
        // ell = 1: |f| is constant so every p-norm equals ||f||_2
        let r = best_ratio_even(1, 2, 4, 1).unwrap();
        assert!((r.ratio - 1.0).abs() < 1e-9);
        // ell = 2: closed form (3 - 2/2)^{1/4} = 2^{1/4}
        let r = best_ratio_even(2, 2, 8, 1).unwrap();
        assert!((r.ratio - 2f64.powf(0.25)).abs() < 1e-6, "got {}", r.ratio);
        // ell = 10: (2.8)^{1/4}
        let r = best_ratio_even(10, 2, 8, 1).unwrap();
        assert!((r.ratio - 2.8f64.powf(0.25)).abs() < 1e-6, "got {}", r.ratio);
    }

    #[test]
    fn best_ratio_low_small() {
        let r = best_ratio_low(1, 1.0, 4, 1).unwrap();
        assert!((r.ratio - 1.0).abs() < 1e-9);
        // ell = 2, q = 1: minimum 1/sqrt(2) at a = (1,1)/sqrt(2)
        let r = best_ratio_low(2, 1.0, 16, 1).unwrap();
        assert!((r.ratio - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-6, "got {}", r.ratio);
        // reciprocal must stay below the Hoelder constant
        assert!(1.0 / r.ratio <= holder_reverse_constant(1.0).unwrap() + 1e-9);
    }

    #[test]
    fn holder_constant_values() {
        assert!((holder_reverse_constant(1.0).unwrap() - 3f64.sqrt()).abs() < 1e-12);
        assert!(holder_reverse_constant(1.999).unwrap() < 1.001);
        assert!(holder_reverse_constant(0.0).is_err());
        assert!(holder_reverse_constant(2.0).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn moment_matches_enumeration(
            a in proptest::collection::vec(-3.0f64..3.0, 1..9),
            s in 1u32..4,
        ) {
            let fast = even_moment(&a, s).unwrap();
            let slow = even_moment_enumerated(&a, s).unwrap();
            let scale = fast.abs().max(slow.abs()).max(1.0);
            prop_assert!((fast - slow).abs() / scale < 1e-10);
        }

        #[test]
        fn moment_symmetries(
            mut a in proptest::collection::vec(0.1f64..3.0, 2..8),
            s in 1u32..4,
        ) {
            let base = even_moment(&a, s).unwrap();
            a.reverse();
            prop_assert!((even_moment(&a, s).unwrap() - base).abs() < 1e-8 * base.abs().max(1.0));
            a[0] = -a[0];
            prop_assert!((even_moment(&a, s).unwrap() - base).abs() < 1e-8 * base.abs().max(1.0));
        }

        #[test]
        fn khintchine_p4_and_gaussian_domination(
            a in proptest::collection::vec(-3.0f64..3.0, 1..9),
        ) {
            let l2sq: f64 = a.iter().map(|x| x * x).sum();
            prop_assert!(even_moment(&a, 2).unwrap() <= 3.0 * l2sq * l2sq + 1e-12);
            // E[g^{2s}] = (2s)!/(2^s s!) sigma^{2s} dominates the Rademacher moment
            for s in 1u32..=4 {
                let m = even_moment(&a, s).unwrap();
                let fact = |n: u64| (1..=n).map(|k| k as f64).product::<f64>();
                let gauss = fact(2 * s as u64) / (2f64.powi(s as i32) * fact(s as u64))
                    * l2sq.powi(s as i32);
                prop_assert!(m <= gauss + 1e-12 * gauss.abs().max(1.0));
            }
        }
    }
}
