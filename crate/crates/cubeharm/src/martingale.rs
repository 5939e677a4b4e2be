//! Dyadic filtration machinery: conditional expectations `E_k`, blocks
//! `N_k(x)`, the maximal function, stopping-time decompositions, truncation,
//! and the square function.
//!
//! A level-`k` block freezes the first `k` coordinates, i.e. the low `k`
//! bits of the point index. `E_k` averages over the remaining bits.

use crate::cube::{CubeError, CubeFunction};
use crate::walsh;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

/// The block `N_k(x)`: all points agreeing with `x` in the first `level`
/// coordinates. `prefix` holds those coordinate bits; bits `level..` are zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DyadicBlock {
    pub level: u32,
    pub prefix: usize,
}

impl DyadicBlock {
    /// Number of points in the block on `B_ell`.
    pub fn point_count(&self, ell: u32) -> usize {
        1usize << (ell - self.level)
    }

    /// Normalized measure `2^{-level}`.
    pub fn measure(&self) -> f64 {
        (0.5f64).powi(self.level as i32)
    }

    pub fn contains(&self, b: usize) -> bool {
        let mask = (1usize << self.level) - 1;
        b & mask == self.prefix
    }

    /// All point indices of the block on `B_ell`, ascending.
    pub fn points(&self, ell: u32) -> impl Iterator<Item = usize> + '_ {
        let level = self.level;
        let prefix = self.prefix;
        (0..1usize << (ell - level)).map(move |hi| (hi << level) | prefix)
    }
}

/// The strict superlevel set `{x : M(f)(x) > lambda}` with its measure.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelSet {
    pub lambda: f64,
    pub members: Vec<usize>,
    pub measure: f64,
}

/// All conditional expectations `E_0(f), ..., E_ell(f)` at once, by iterated
/// pairwise averaging from the top level down. O(ell * 2^ell).
pub fn all_levels(f: &CubeFunction) -> Vec<CubeFunction> {
    let ell = f.ell();
    let mut levels = vec![f.clone()];
    let mut cur = f.values().to_vec();
    for k in (0..ell).rev() {
        let bit = 1usize << k;
        let mut next = cur.clone();
        for b in 0..cur.len() {
            next[b] = 0.5 * (cur[b & !bit] + cur[b | bit]);
        }
        levels.push(CubeFunction::new(ell, next.clone()).expect("averages stay finite"));
        cur = next;
    }
    levels.reverse();
    levels
}

/// `E_k(f)`: the average of `f` over each level-`k` block.
pub fn conditional_expectation(f: &CubeFunction, k: u32) -> Result<CubeFunction, CubeError> {
    let ell = f.ell();
    if k > ell {
        return Err(CubeError::LevelOutOfRange { ell, k });
    }
    let mut cur = f.values().to_vec();
    for j in (k..ell).rev() {
        let bit = 1usize << j;
        let prev = cur.clone();
        for b in 0..prev.len() {
            cur[b] = 0.5 * (prev[b & !bit] + prev[b | bit]);
        }
    }
    CubeFunction::new(ell, cur)
}

/// Splits a function depending only on the first `k+1` coordinates as
/// `f = f1 + r_{k+1} f2` with `f1`, `f2` depending only on the first `k`.
/// `f1 = E_k(f)` and `f2 = E_k(r_{k+1} f)`.
pub fn martingale_split(
    f: &CubeFunction,
    k: u32,
) -> Result<(CubeFunction, CubeFunction), CubeError> {
    let ell = f.ell();
    if k >= ell {
        return Err(CubeError::LevelOutOfRange { ell, k });
    }
    let ek1 = conditional_expectation(f, k + 1)?;
    let dev = f
        .values()
        .iter()
        .zip(ek1.values())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0f64, f64::max);
    if dev > 1e-10 {
        return Err(CubeError::Precondition(format!(
            "function depends on coordinates beyond {} (deviation {dev:.3e})",
            k + 1
        )));
    }
    let f1 = conditional_expectation(f, k)?;
    let r = walsh::rademacher(ell, k + 1)?;
    let rf: Vec<f64> = f.values().iter().zip(r.values()).map(|(a, b)| a * b).collect();
    let f2 = conditional_expectation(&CubeFunction::new(ell, rf)?, k)?;
    Ok((f1, f2))
}

/// `M(f)(x) = max_k |E_k(f)(x)|`.
pub fn maximal_function(f: &CubeFunction) -> CubeFunction {
    let levels = all_levels(f);
    let n = f.len();
    let mut out = vec![0.0; n];
    for level in &levels {
        for (o, v) in out.iter_mut().zip(level.values()) {
            *o = f64::max(*o, v.abs());
        }
    }
    CubeFunction::new(f.ell(), out).expect("finite")
}

/// `A_lambda = {x : M(f)(x) > lambda}`, strict.
pub fn superlevel_set(f: &CubeFunction, lambda: f64) -> Result<LevelSet, CubeError> {
    if !(lambda > 0.0) {
        return Err(CubeError::Precondition(format!("lambda must be positive, got {lambda}")));
    }
    let m = maximal_function(f);
    let members: Vec<usize> = m
        .values()
        .iter()
        .enumerate()
        .filter(|(_, v)| **v > lambda)
        .map(|(i, _)| i)
        .collect();
    let measure = members.len() as f64 / f.len() as f64;
    Ok(LevelSet { lambda, members, measure })
}

/// Maximal dyadic blocks on which `|average of f| > lambda`, found by a
/// top-down stopping-time scan. Emitted blocks are pairwise disjoint and
/// their union is exactly the superlevel set of `M(f)`.
pub fn cz_blocks(f: &CubeFunction, lambda: f64) -> Result<Vec<DyadicBlock>, CubeError> {
    if !(lambda > 0.0) {
        return Err(CubeError::Precondition(format!("lambda must be positive, got {lambda}")));
    }
    let ell = f.ell();
    let levels = all_levels(f);
    let mut out = Vec::new();
    // iterative DFS; a block's average sits at index `prefix` of its level
    let mut stack = vec![DyadicBlock { level: 0, prefix: 0 }];
    while let Some(block) = stack.pop() {
        if levels[block.level as usize].values()[block.prefix].abs() > lambda {
            out.push(block);
        } else if block.level < ell {
            let bit = 1usize << block.level;
            stack.push(DyadicBlock { level: block.level + 1, prefix: block.prefix });
            stack.push(DyadicBlock { level: block.level + 1, prefix: block.prefix | bit });
        }
    }
    out.sort_by_key(|b| (b.level, b.prefix));
    Ok(out)
}

/// `f'`: equal to `f(x)` where `|f(x)| > lambda`, zero otherwise.
pub fn truncate_above(f: &CubeFunction, lambda: f64) -> Result<CubeFunction, CubeError> {
    if !(lambda > 0.0) {
        return Err(CubeError::Precondition(format!("lambda must be positive, got {lambda}")));
    }
    let values = f
        .values()
        .iter()
        .map(|&v| if v.abs() > lambda { v } else { 0.0 })
        .collect();
    CubeFunction::new(f.ell(), values)
}

/// `S(f)(x) = (|E_0(f)(x)|^2 + sum_k |E_k(f)(x) - E_{k-1}(f)(x)|^2)^{1/2}`.
pub fn square_function(f: &CubeFunction) -> CubeFunction {
    let levels = all_levels(f);
    let n = f.len();
    let mut acc: Vec<f64> = levels[0].values().iter().map(|v| v * v).collect();
    for k in 1..levels.len() {
        let (lo, hi) = (levels[k - 1].values(), levels[k].values());
        for b in 0..n {
            let d = hi[b] - lo[b];
            acc[b] += d * d;
        }
    }
    for v in &mut acc {
        *v = v.sqrt();
    }
    CubeFunction::new(f.ell(), acc).expect("finite")
}

/// Random-function ensembles used by the empirical constant sweeps: dense
/// Gaussian, sign-valued, and sparse functions, cycled by index.
pub fn ensemble_function(ell: u32, rng: &mut ChaCha8Rng, kind: usize) -> CubeFunction {
    let n = 1usize << ell;
    let values: Vec<f64> = match kind % 3 {
        0 => (0..n).map(|_| StandardNormal.sample(rng)).collect(),
        1 => (0..n).map(|_| if rng.random::<bool>() { 1.0 } else { -1.0 }).collect(),
        _ => (0..n)
            .map(|_| {
                if rng.random::<f64>() < 0.1 {
                    let g: f64 = StandardNormal.sample(rng);
                    4.0 * g
                } else {
                    0.0
                }
            })
            .collect(),
    };
    CubeFunction::new(ell, values).expect("finite")
}

/// Observed sup of `||M(f)||_p / ||f||_p` over `count` random functions.
pub fn maximal_ratio_sweep(ell: u32, p: f64, count: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sup: f64 = 0.0;
    for i in 0..count {
        let f = ensemble_function(ell, &mut rng, i);
        let denom = f.lp_norm(p).expect("p >= 1");
        if denom < 1e-12 {
            continue;
        }
        let ratio = maximal_function(&f).lp_norm(p).expect("p >= 1") / denom;
        sup = sup.max(ratio);
    }
    sup
}

/// Observed sup of `||S(f)||_4 / ||f||_4` over `count` random functions.
pub fn square_ratio_sweep(ell: u32, count: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sup: f64 = 0.0;
    for i in 0..count {
        let f = ensemble_function(ell, &mut rng, i);
        let denom = f.lp_norm(4.0).expect("valid p");
        if denom < 1e-12 {
            continue;
        }
        let ratio = square_function(&f).lp_norm(4.0).expect("valid p") / denom;
        sup = sup.max(ratio);
    }
    sup
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::walsh::{rademacher, rademacher_span};
    use proptest::prelude::*;

    fn f4000() -> CubeFunction {
        CubeFunction::new(2, vec![4.0, 0.0, 0.0, 0.0]).unwrap()
    }

    #[test]
    fn conditional_expectation_examples() {
        let r1 = rademacher(3, 1).unwrap();
        let e0 = conditional_expectation(&r1, 0).unwrap();
        assert_eq!(e0.values(), &[0.0; 8]);

        let f = CubeFunction::new(2, vec![2.0, 0.0, 0.0, -2.0]).unwrap();
        let e1 = conditional_expectation(&f, 1).unwrap();
        assert_eq!(e1.values(), &[1.0, -1.0, 1.0, -1.0]); // = r1

        let el = conditional_expectation(&f, 2).unwrap();
        assert_eq!(el.values(), f.values());

        assert!(conditional_expectation(&f, 3).is_err());
    }

    #[test]
    fn conditional_expectation_idempotent() {
        let f = f4000();
        let e1 = conditional_expectation(&f, 1).unwrap();
        let e1e1 = conditional_expectation(&e1, 1).unwrap();
        assert_eq!(e1.values(), e1e1.values());
    }

    #[test]
    fn split_examples() {
        // r1 on B2 at k=0: f1 = 0, f2 = 1
        let r1 = rademacher(2, 1).unwrap();
        let (f1, f2) = martingale_split(&r1, 0).unwrap();
        assert_eq!(f1.values(), &[0.0; 4]);
        assert_eq!(f2.values(), &[1.0; 4]);

        // 3 + 2 r1 on B1 at k=0
        let f = CubeFunction::new(1, vec![5.0, 1.0]).unwrap();
        let (f1, f2) = martingale_split(&f, 0).unwrap();
        assert_eq!(f1.values(), &[3.0, 3.0]);
        assert_eq!(f2.values(), &[2.0, 2.0]);

        // r1 r2 on B2 at k=1: f1 = 0, f2 = r1
        let w = crate::walsh::walsh_function(2, 3).unwrap();
        let (f1, f2) = martingale_split(&w, 1).unwrap();
        assert_eq!(f1.values(), &[0.0; 4]);
        assert_eq!(f2.values(), rademacher(2, 1).unwrap().values());
    }

    #[test]
    fn split_rejects_deep_dependence() {
        // r2 on B2 depends on coordinate 2, not only on the first 1 when k=0
        let r2 = rademacher(2, 2).unwrap();
        assert!(martingale_split(&r2, 0).is_err());
    }

    #[test]
    fn split_reconstructs() {
        let f = CubeFunction::new(2, vec![2.0, 0.0, 0.0, -2.0]).unwrap();
        let (f1, f2) = martingale_split(&f, 1).unwrap();
        let r2 = rademacher(2, 2).unwrap();
        for b in 0..4 {
            let recon = f1.values()[b] + r2.values()[b] * f2.values()[b];
            assert!((recon - f.values()[b]).abs() < 1e-12);
        }
    }

    #[test]
    fn maximal_examples() {
        let c = CubeFunction::constant(3, -2.5).unwrap();
        assert_eq!(maximal_function(&c).values(), &[2.5; 8]);

        let r1 = rademacher(1, 1).unwrap();
        assert_eq!(maximal_function(&r1).values(), &[1.0, 1.0]);

        // E0 = 1, E1 = (2,0,2,0) (level-1 blocks freeze bit 0), E2 = f
        assert_eq!(maximal_function(&f4000()).values(), &[4.0, 1.0, 2.0, 1.0]);
    }

    #[test]
    fn maximal_dominates_f_and_sup_norm_equality() {
        let f = CubeFunction::new(3, vec![1.0, -2.0, 0.5, 3.0, -1.0, 0.0, 2.0, -3.5]).unwrap();
        let m = maximal_function(&f);
        for (mv, fv) in m.values().iter().zip(f.values()) {
            assert!(*mv >= fv.abs());
        }
        assert_eq!(
            m.lp_norm(f64::INFINITY).unwrap(),
            f.lp_norm(f64::INFINITY).unwrap()
        );
    }

    #[test]
    fn superlevel_examples() {
        let zero = CubeFunction::constant(2, 0.0).unwrap();
        let a = superlevel_set(&zero, 1.0).unwrap();
        assert!(a.members.is_empty());
        assert_eq!(a.measure, 0.0);

        let r1 = rademacher(1, 1).unwrap();
        let a = superlevel_set(&r1, 0.5).unwrap();
        assert_eq!(a.members, vec![0, 1]);
        assert_eq!(a.measure, 1.0);
        assert!(0.5 * a.measure <= r1.lp_norm(1.0).unwrap());

        // M(f) = (4,1,2,1): the block {x1 = +1} = {0, 2} exceeds 1.5
        let a = superlevel_set(&f4000(), 1.5).unwrap();
        assert_eq!(a.members, vec![0, 2]);
        assert_eq!(a.measure, 0.5);
        assert!(1.5 * 0.5 <= f4000().lp_norm(1.0).unwrap());

        assert!(superlevel_set(&r1, 0.0).is_err());
    }

    #[test]
    fn cz_examples() {
        let zero = CubeFunction::constant(2, 0.0).unwrap();
        assert!(cz_blocks(&zero, 1.0).unwrap().is_empty());

        // lambda = 1.5: E1 average on {x1 = +1} is 2 > 1.5 while E0 = 1 <= 1.5
        let blocks = cz_blocks(&f4000(), 1.5).unwrap();
        assert_eq!(blocks, vec![DyadicBlock { level: 1, prefix: 0 }]);

        // lambda = 0.5: already E0 average = 1 > 0.5, so the whole cube
        let blocks = cz_blocks(&f4000(), 0.5).unwrap();
        assert_eq!(blocks, vec![DyadicBlock { level: 0, prefix: 0 }]);
    }

    #[test]
    fn cz_union_is_superlevel_set() {
        let f = CubeFunction::new(3, vec![4.0, 0.0, -3.0, 1.0, 0.0, 0.0, 2.0, -1.0]).unwrap();
        for lambda in [0.25, 0.6, 1.1, 2.3] {
            let blocks = cz_blocks(&f, lambda).unwrap();
            let set = superlevel_set(&f, lambda).unwrap();
            let mut union: Vec<usize> =
                blocks.iter().flat_map(|b| b.points(3).collect::<Vec<_>>()).collect();
            union.sort_unstable();
            assert_eq!(union, set.members, "lambda = {lambda}");
        }
    }

    #[test]
    fn truncate_examples() {
        let f = CubeFunction::new(1, vec![0.5, -1.0]).unwrap();
        assert_eq!(truncate_above(&f, 1.0).unwrap().values(), &[0.0, 0.0]);

        assert_eq!(truncate_above(&f4000(), 1.0).unwrap().values(), f4000().values());

        let f = CubeFunction::new(2, vec![2.0, 1.0, -3.0, 0.0]).unwrap();
        assert_eq!(truncate_above(&f, 1.5).unwrap().values(), &[2.0, 0.0, -3.0, 0.0]);
    }

    #[test]
    fn square_examples() {
        let c = CubeFunction::constant(3, -2.0).unwrap();
        assert_eq!(square_function(&c).values(), &[2.0; 8]);

        let f = rademacher_span(&[3.0, 4.0]).unwrap();
        for v in square_function(&f).values() {
            assert!((v - 5.0).abs() < 1e-12);
        }

        // E0 = 1, E1 = (2,0,2,0), E2 = f; per-point squares summed by hand:
        // b=0: 1 + 1 + 4 = 6; b=1: 1 + 1 + 0 = 2; b=2: 1 + 1 + 4 = 6; b=3: 2
        let s = square_function(&f4000());
        let want = [6.0f64.sqrt(), 2.0f64.sqrt(), 6.0f64.sqrt(), 2.0f64.sqrt()];
        for (a, b) in s.values().iter().zip(&want) {
            assert!((a - b).abs() < 1e-12);
        }
        // independent per-point oracle over explicit level averages
        let levels = all_levels(&f4000());
        for b in 0..4 {
            let mut acc = levels[0].values()[b].powi(2);
            for k in 1..=2 {
                acc += (levels[k].values()[b] - levels[k - 1].values()[b]).powi(2);
            }
            assert!((s.values()[b] - acc.sqrt()).abs() < 1e-12);
        }
    }

    #[test]
    fn block_trichotomy_exhaustive() {
        for ell in 1..=6u32 {
            let mut blocks = Vec::new();
            for level in 0..=ell {
                for prefix in 0..1usize << level {
                    blocks.push(DyadicBlock { level, prefix });
                }
            }
            for a in &blocks {
                for b in &blocks {
                    let pa: Vec<usize> = a.points(ell).collect();
                    let pb: Vec<usize> = b.points(ell).collect();
                    let a_in_b = pa.iter().all(|p| pb.contains(p));
                    let b_in_a = pb.iter().all(|p| pa.contains(p));
                    let disjoint = pa.iter().all(|p| !pb.contains(p));
                    assert!(a_in_b || b_in_a || disjoint, "ell={ell} {a:?} {b:?}");
                }
            }
        }
    }

    proptest! {
        #[test]
        fn projection_chain(
            values in proptest::collection::vec(-5.0f64..5.0, 16),
            j in 0u32..5,
            k in 0u32..5,
        ) {
            let f = CubeFunction::new(4, values).unwrap();
            let ek = conditional_expectation(&f, k.min(4)).unwrap();
            let ejek = conditional_expectation(&ek, j.min(4)).unwrap();
            let emin = conditional_expectation(&f, j.min(k).min(4)).unwrap();
            for (a, b) in ejek.values().iter().zip(emin.values()) {
                prop_assert!((a - b).abs() < 1e-12);
            }
        }

        #[test]
        fn module_property(
            fv in proptest::collection::vec(-5.0f64..5.0, 16),
            hv in proptest::collection::vec(-5.0f64..5.0, 4),
            k in 0u32..3,
        ) {
            let k = k.min(2);
            let f = CubeFunction::new(4, fv).unwrap();
            // h depends only on the first k coordinates
            let hv: Vec<f64> = (0..16).map(|b| hv[b & ((1 << k) - 1)]).collect();
            let h = CubeFunction::new(4, hv).unwrap();
            let fh: Vec<f64> = f.values().iter().zip(h.values()).map(|(a, b)| a * b).collect();
            let lhs = conditional_expectation(&CubeFunction::new(4, fh).unwrap(), k).unwrap();
            let ekf = conditional_expectation(&f, k).unwrap();
            for b in 0..16 {
                let rhs = h.values()[b] * ekf.values()[b];
                prop_assert!((lhs.values()[b] - rhs).abs() < 1e-12);
            }
        }

        #[test]
        fn pythagoras_and_difference_orthogonality(
            values in proptest::collection::vec(-5.0f64..5.0, 32),
        ) {
            let f = CubeFunction::new(5, values).unwrap();
            let levels = all_levels(&f);
            let mut parts = vec![levels[0].clone()];
            for k in 1..levels.len() {
                let d: Vec<f64> = levels[k].values().iter()
                    .zip(levels[k - 1].values()).map(|(a, b)| a - b).collect();
                parts.push(CubeFunction::new(5, d).unwrap());
            }
            for i in 0..parts.len() {
                for j in i + 1..parts.len() {
                    prop_assert!(parts[i].inner_product(&parts[j]).unwrap().abs() < 1e-12);
                }
            }
            let total: f64 = parts.iter()
                .map(|p| p.lp_norm(2.0).unwrap().powi(2)).sum();
            let l2sq = f.lp_norm(2.0).unwrap().powi(2);
            prop_assert!((total - l2sq).abs() < 1e-10);
            // square-function identity on the same input
            let s = square_function(&f);
            prop_assert!((s.lp_norm(2.0).unwrap() - f.lp_norm(2.0).unwrap()).abs() < 1e-10);
        }

        #[test]
        fn weak_type_and_truncation(
            values in proptest::collection::vec(-5.0f64..5.0, 16),
            lambda in 0.01f64..4.0,
        ) {
            let f = CubeFunction::new(4, values).unwrap();
            let a = superlevel_set(&f, lambda).unwrap();
            prop_assert!(lambda * a.measure <= f.lp_norm(1.0).unwrap() + 1e-12);
            let fp = truncate_above(&f, lambda).unwrap();
            let a2 = superlevel_set(&f, 2.0 * lambda).unwrap();
            prop_assert!(lambda * a2.measure <= fp.lp_norm(1.0).unwrap() + 1e-12);
            // |f - f'| <= lambda and M(f) <= M(f') + lambda pointwise
            let mf = maximal_function(&f);
            let mfp = maximal_function(&fp);
            for b in 0..16 {
                prop_assert!((f.values()[b] - fp.values()[b]).abs() <= lambda + 1e-12);
                prop_assert!(mf.values()[b] <= mfp.values()[b] + lambda + 1e-12);
            }
        }
    }
}
