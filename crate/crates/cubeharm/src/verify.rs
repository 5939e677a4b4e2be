//! Self-verification suites: each check re-tests one of the identities or
//! inequalities the crate implements, against independent oracles where one
//! exists, and reports a pass/fail result with the observed statistics.

use crate::bilinear::{self, RealMatrix};
use crate::cube::CubeFunction;
use crate::gaussian;
use crate::khintchine;
use crate::lacunary::{self, LacunaryPolynomial};
use crate::martingale;
use crate::walsh;
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

/// Outcome of one verification suite.
#[derive(Debug, Clone, PartialEq)]
pub struct CriterionResult {
    pub name: &'static str,
    pub passed: bool,
    pub details: String,
}

impl CriterionResult {
    fn new(name: &'static str, passed: bool, details: String) -> Self {
        CriterionResult { name, passed, details }
    }
}

fn random_function(ell: u32, rng: &mut ChaCha8Rng) -> CubeFunction {
    let values = (0..1usize << ell).map(|_| StandardNormal.sample(rng)).collect();
    CubeFunction::new(ell, values).expect("finite")
}

/// Walsh orthonormality (exhaustive, ell <= 8) and Parseval on random
/// functions (ell <= 12), tolerance 1e-10.
pub fn walsh_orthonormality(seed: u64) -> CriterionResult {
    let mut worst: f64 = 0.0;
    for ell in 1..=8u32 {
        for i in 0..1usize << ell {
            let wi = walsh::walsh_function(ell, i).unwrap();
            let si = walsh::analyze(&wi);
            for (j, c) in si.coeffs().iter().enumerate() {
                let want = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((c - want).abs());
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for trial in 0..1000 {
        let ell = 1 + (trial % 12) as u32;
        let f = random_function(ell, &mut rng);
        let s = walsh::analyze(&f);
        let l2sq = f.lp_norm(2.0).unwrap().powi(2);
        let coeff: f64 = s.coeffs().iter().map(|c| c * c).sum();
        worst = worst.max((l2sq - coeff).abs());
    }
    CriterionResult::new(
        "walsh-orthonormality-parseval",
        worst < 1e-10,
        format!("max deviation {worst:.3e} (tolerance 1e-10)"),
    )
}

/// `||S(f)||_2 = ||f||_2` on random functions and `S` constant on
/// Rademacher spans.
pub fn square_function_identity(seed: u64) -> CriterionResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for trial in 0..10_000usize {
        let ell = 1 + (trial % 12) as u32;
        let f = random_function(ell, &mut rng);
        let s = martingale::square_function(&f);
        worst = worst.max((s.lp_norm(2.0).unwrap() - f.lp_norm(2.0).unwrap()).abs());
    }
    let mut worst_span: f64 = 0.0;
    for _ in 0..200 {
        let ell = rng.random_range(1..=10usize);
        let a: Vec<f64> = (0..ell).map(|_| StandardNormal.sample(&mut rng)).collect();
        let f = walsh::rademacher_span(&a).unwrap();
        let want = a.iter().map(|x| x * x).sum::<f64>().sqrt();
        for v in martingale::square_function(&f).values() {
            worst_span = worst_span.max((v - want).abs());
        }
    }
    CriterionResult::new(
        "square-function-identity",
        worst < 1e-10 && worst_span < 1e-12,
        format!("max |norm gap| {worst:.3e} (1e-10), max span deviation {worst_span:.3e} (1e-12)"),
    )
}

/// Weak-type (1,1) for the maximal function, exhaustively on sign-valued
/// functions (ell <= 4) and on random (f, lambda); also the truncation
/// variant `lambda |A_{2 lambda}| <= ||f'||_1`. Zero violations allowed.
pub fn weak_type(seed: u64) -> CriterionResult {
    let mut violations = 0usize;
    let lambdas = [0.1, 0.3, 0.5, 0.9, 1.0, 1.5];
    for ell in 1..=4u32 {
        let n = 1usize << ell;
        for bits in 0..1usize << n {
            let values: Vec<f64> =
                (0..n).map(|b| if bits >> b & 1 == 1 { 1.0 } else { -1.0 }).collect();
            let f = CubeFunction::new(ell, values).unwrap();
            let l1 = f.lp_norm(1.0).unwrap();
            for &lambda in &lambdas {
                let a = martingale::superlevel_set(&f, lambda).unwrap();
                if lambda * a.measure > l1 + 1e-12 {
                    violations += 1;
                }
                let fp = martingale::truncate_above(&f, lambda).unwrap();
                let a2 = martingale::superlevel_set(&f, 2.0 * lambda).unwrap();
                if lambda * a2.measure > fp.lp_norm(1.0).unwrap() + 1e-12 {
                    violations += 1;
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for trial in 0..10_000usize {
        let ell = 1 + (trial % 12) as u32;
        let f = random_function(ell, &mut rng);
        let lambda: f64 = rng.random_range(0.01..3.0);
        let a = martingale::superlevel_set(&f, lambda).unwrap();
        if lambda * a.measure > f.lp_norm(1.0).unwrap() + 1e-12 {
            violations += 1;
        }
        let fp = martingale::truncate_above(&f, lambda).unwrap();
        let a2 = martingale::superlevel_set(&f, 2.0 * lambda).unwrap();
        if lambda * a2.measure > fp.lp_norm(1.0).unwrap() + 1e-12 {
            violations += 1;
        }
    }
    CriterionResult::new(
        "weak-type-1-1",
        violations == 0,
        format!("{violations} violations (zero allowed)"),
    )
}

/// Stopping-time blocks: pairwise disjoint, union equal to the superlevel
/// set, and trichotomy for every pair of dyadic blocks, for ell <= 6.
pub fn cz_decomposition(seed: u64) -> CriterionResult {
    let mut ok = true;
    let mut detail = String::new();
    // trichotomy over all block pairs, exhaustive per ell
    'outer: for ell in 1..=6u32 {
        let mut blocks = Vec::new();
        for level in 0..=ell {
            for prefix in 0..1usize << level {
                blocks.push(martingale::DyadicBlock { level, prefix });
            }
        }
        for a in &blocks {
            for b in &blocks {
                let pa: Vec<usize> = a.points(ell).collect();
                let pb: Vec<usize> = b.points(ell).collect();
                let a_in_b = pa.iter().all(|p| pb.contains(p));
                let b_in_a = pb.iter().all(|p| pa.contains(p));
                let disjoint = pa.iter().all(|p| !pb.contains(p));
                if !(a_in_b || b_in_a || disjoint) {
                    ok = false;
                    detail = format!("trichotomy failed: {a:?} vs {b:?} at ell {ell}");
                    break 'outer;
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checked = 0usize;
    if ok {
        'f_loop: for ell in 1..=6u32 {
            for _ in 0..50 {
                let f = random_function(ell, &mut rng);
                for lambda in [0.1, 0.4, 0.8, 1.6] {
                    let blocks = martingale::cz_blocks(&f, lambda).unwrap();
                    let set = martingale::superlevel_set(&f, lambda).unwrap();
                    let mut union = Vec::new();
                    for b in &blocks {
                        union.extend(b.points(ell));
                    }
                    let before = union.len();
                    union.sort_unstable();
                    union.dedup();
                    if union.len() != before {
                        ok = false;
                        detail = "blocks overlap".into();
                        break 'f_loop;
                    }
                    if union != set.members {
                        ok = false;
                        detail = format!("union != superlevel set at ell {ell}, lambda {lambda}");
                        break 'f_loop;
                    }
                    checked += 1;
                }
            }
        }
    }
    if ok {
        detail = format!("trichotomy exhaustive for ell <= 6; {checked} decompositions verified");
    }
    CriterionResult::new("cz-decomposition", ok, detail)
}

/// Khintchine at p = 4: the moment bound `E f^4 <= 3 (sum a^2)^2` on 1e5
/// random vectors, the closed form `(3 - 2/ell)^{1/4}` for the optimizer,
/// and domination by the Gaussian limit `3^{1/4}`.
pub fn khintchine_p4(seed: u64) -> CriterionResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = 0usize;
    for _ in 0..100_000usize {
        let ell = rng.random_range(1..=8usize);
        let a: Vec<f64> = (0..ell).map(|_| StandardNormal.sample(&mut rng)).collect();
        let l2sq: f64 = a.iter().map(|x| x * x).sum();
        if khintchine::even_moment(&a, 2).unwrap() > 3.0 * l2sq * l2sq + 1e-12 {
            violations += 1;
        }
    }
    let gauss = gaussian::gaussian_khintchine_limit(4.0).unwrap();
    let mut worst: f64 = 0.0;
    let mut dominated = true;
    for ell in 2..=12usize {
        let r = khintchine::best_ratio_even(ell, 2, 8, seed).unwrap();
        let want = (3.0 - 2.0 / ell as f64).powf(0.25);
        worst = worst.max((r.ratio - want).abs());
        if r.ratio > gauss {
            dominated = false;
        }
    }
    CriterionResult::new(
        "khintchine-p4",
        violations == 0 && worst < 1e-6 && dominated,
        format!(
            "{violations} moment-bound violations; max closed-form gap {worst:.3e} (1e-6); \
             gaussian limit {gauss:.6} dominates: {dominated}"
        ),
    )
}

/// Reverse Khintchine: empirical reciprocal constants at q = 1 stay below
/// the Hoelder-derived bound sqrt(3) for all ell <= 12.
pub fn reverse_khintchine(seed: u64) -> CriterionResult {
    let bound = khintchine::holder_reverse_constant(1.0).unwrap();
    let mut worst: f64 = 0.0;
    let mut ok = true;
    for ell in 1..=12usize {
        let r = khintchine::best_ratio_low(ell, 1.0, 8, seed).unwrap();
        let reciprocal = 1.0 / r.ratio;
        worst = worst.max(reciprocal);
        if reciprocal > bound + 1e-9 {
            ok = false;
        }
    }
    CriterionResult::new(
        "reverse-khintchine",
        ok,
        format!("max empirical reciprocal {worst:.6} <= sqrt(3) = {bound:.6}: {ok}"),
    )
}

/// Gaussian moments against the quadrature oracle (1e-9 relative) and the
/// exact normalization at p = 0 (1e-12).
pub fn gaussian_moments(_seed: u64) -> CriterionResult {
    let mut worst: f64 = 0.0;
    for p in [0.0, 1.0, 2.0, 3.0, 4.0, 6.0] {
        let closed = gaussian::gaussian_moment(p).unwrap().value;
        let quad = gaussian::gaussian_moment_quadrature(p);
        worst = worst.max((closed - quad).abs() / closed);
    }
    let norm_gap = (gaussian::gaussian_moment(0.0).unwrap().value - 1.0).abs();
    CriterionResult::new(
        "gaussian-moments",
        worst < 1e-9 && norm_gap < 1e-12,
        format!("max relative quadrature gap {worst:.3e} (1e-9); |moment(0) - 1| = {norm_gap:.3e}"),
    )
}

/// Lacunary L4: collision lemma, closed form vs circle quadrature on random
/// polynomials, and the `2^{1/4}` bound with zero violations.
pub fn lacunary_l4(seed: u64) -> CriterionResult {
    let collision = lacunary::collision_check(10) == Ok(true);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    let mut violations = 0usize;
    for _ in 0..1000usize {
        let m = rng.random_range(0..=10usize);
        let c: Vec<Complex64> = (0..=m)
            .map(|_| Complex64::new(StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng)))
            .collect();
        let f = LacunaryPolynomial::new(c).unwrap();
        let closed = f.l4_norm_closed();
        let quad = f.circle_quadrature_norm(4, None).unwrap();
        worst = worst.max((closed - quad).abs() / closed.max(1e-12));
        if closed > 2f64.powf(0.25) * f.l2_norm() + 1e-12 {
            violations += 1;
        }
    }
    CriterionResult::new(
        "lacunary-l4",
        collision && worst < 1e-9 && violations == 0,
        format!(
            "collision lemma (max_j = 10): {collision}; max relative quadrature gap {worst:.3e} \
             (1e-9); {violations} bound violations"
        ),
    )
}

/// Trace duality with equality witness, and the exact `l_inf -> l_1` norm of
/// nonnegative matrices.
pub fn matrix_norms(seed: u64) -> CriterionResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    let mut ok = true;
    for _ in 0..1000usize {
        let m = rng.random_range(1..=5usize);
        let n = rng.random_range(1..=5usize);
        let entries: Vec<f64> = (0..m * n).map(|_| StandardNormal.sample(&mut rng)).collect();
        let a = RealMatrix::new(m, n, entries).unwrap();
        // random T bounded by 1 in sup norm obeys the bound
        let t_entries: Vec<f64> = (0..m * n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let t = RealMatrix::new(n, m, t_entries).unwrap();
        if bilinear::trace_pairing(&a, &t).unwrap().abs() > a.abs_sum() + 1e-12 {
            ok = false;
        }
        // the sign-transpose witness attains equality
        let w = a.sign_transpose();
        worst = worst.max((bilinear::trace_pairing(&a, &w).unwrap() - a.abs_sum()).abs());
        // nonnegative matrices: norm equals the entry sum exactly
        let pos: Vec<f64> = (0..m * n).map(|_| rng.random_range(0.0..2.0)).collect();
        let p = RealMatrix::new(m, n, pos).unwrap();
        let (norm, _) = bilinear::infty_to_one_norm(&p).unwrap();
        if (norm - p.entries().iter().sum::<f64>()).abs() > 1e-12 {
            ok = false;
        }
    }
    CriterionResult::new(
        "matrix-norms-trace-duality",
        ok && worst < 1e-12,
        format!("max witness equality gap {worst:.3e} (1e-12); bounds held: {ok}"),
    )
}

/// Grothendieck ratios: the restricted CHSH matrix reaches sqrt(2), and no
/// ratio in a random sweep exceeds the bound `sinh(pi/2)`.
pub fn grothendieck(seed: u64) -> CriterionResult {
    let chsh = bilinear::restrict(
        &RealMatrix::from_rows(&[vec![1.0, 1.0], vec![1.0, -1.0]]).unwrap(),
    )
    .unwrap();
    let config = bilinear::grothendieck_ratio(&chsh, 2, 16, 1e-12, seed).unwrap();
    let chsh_gap = (config.objective - std::f64::consts::SQRT_2).abs();

    let k = bilinear::grothendieck_bound();
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1));
    let mut max_ratio: f64 = 0.0;
    let mut ok = true;
    for _ in 0..1000usize {
        let m = rng.random_range(1..=6usize);
        let n = rng.random_range(1..=6usize);
        let entries: Vec<f64> = (0..m * n).map(|_| StandardNormal.sample(&mut rng)).collect();
        let a = RealMatrix::new(m, n, entries).unwrap();
        if a.is_zero() {
            continue;
        }
        let (norm, _) = bilinear::infty_to_one_norm(&a).unwrap();
        if norm < 1e-9 {
            continue;
        }
        let config = bilinear::grothendieck_ratio(&a, m + n, 4, 1e-10, seed).unwrap();
        let ratio = config.objective / norm;
        max_ratio = max_ratio.max(ratio);
        if ratio > k + 1e-9 {
            ok = false;
        }
    }
    CriterionResult::new(
        "grothendieck-ratio",
        chsh_gap < 1e-6 && ok,
        format!(
            "CHSH objective gap {chsh_gap:.3e} (1e-6); sweep max ratio {max_ratio:.6} <= \
             k = {k:.6}: {ok}"
        ),
    )
}

/// Observed suprema of `||M(f)||_p / ||f||_p` and `||S(f)||_4 / ||f||_4` per
/// level; logged statistics with no threshold beyond finiteness.
pub fn empirical_constants(seed: u64) -> CriterionResult {
    let report = empirical_report(seed, 2000);
    let finite = report.iter().all(|r| {
        r.maximal_ratios.iter().all(|(_, v)| v.is_finite()) && r.square_ratio.is_finite()
    });
    let mut lines = Vec::new();
    for r in &report {
        let ms: Vec<String> =
            r.maximal_ratios.iter().map(|(p, v)| format!("p={p}: {v:.4}")).collect();
        lines.push(format!("ell={}: M[{}] S4={:.4}", r.ell, ms.join(", "), r.square_ratio));
    }
    CriterionResult::new("empirical-constants", finite, lines.join("; "))
}

/// One row of the empirical constants report.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalRow {
    pub ell: u32,
    /// `(p, observed sup of ||M(f)||_p / ||f||_p)`.
    pub maximal_ratios: Vec<(f64, f64)>,
    /// Observed sup of `||S(f)||_4 / ||f||_4`.
    pub square_ratio: f64,
}

/// Sweep the random ensembles at every `ell <= 12`, `count` functions each.
pub fn empirical_report(seed: u64, count: usize) -> Vec<EmpiricalRow> {
    let ps = [1.5, 2.0, 3.0, 4.0];
    (1..=12u32)
        .map(|ell| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(ell as u64));
            let mut sup_m = [0.0f64; 4];
            let mut sup_s = 0.0f64;
            for i in 0..count {
                let f = martingale::ensemble_function(ell, &mut rng, i);
                let m = martingale::maximal_function(&f);
                for (j, &p) in ps.iter().enumerate() {
                    let denom = f.lp_norm(p).unwrap();
                    if denom > 1e-12 {
                        sup_m[j] = sup_m[j].max(m.lp_norm(p).unwrap() / denom);
                    }
                }
                let denom = f.lp_norm(4.0).unwrap();
                if denom > 1e-12 {
                    let s = martingale::square_function(&f);
                    sup_s = sup_s.max(s.lp_norm(4.0).unwrap() / denom);
                }
            }
            EmpiricalRow {
                ell,
                maximal_ratios: ps.iter().copied().zip(sup_m).collect(),
                square_ratio: sup_s,
            }
        })
        .collect()
}

/// Run every suite in order.
pub fn run_all(seed: u64) -> Vec<CriterionResult> {
    vec![
        walsh_orthonormality(seed),
        square_function_identity(seed),
        weak_type(seed),
        cz_decomposition(seed),
        khintchine_p4(seed),
        reverse_khintchine(seed),
        gaussian_moments(seed),
        lacunary_l4(seed),
        matrix_norms(seed),
        grothendieck(seed),
        empirical_constants(seed),
    ]
}
