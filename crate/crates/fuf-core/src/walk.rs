//! The classical Markov chain on the Cayley tree induced by convolving with
//! the uniform one-letter trace, and Monte Carlo estimation of its exit law.
//!
//! From a word `x` the chain picks a letter `γ ∈ {u, ū}` with weight 1/2.
//! Appending the same letter as the end of `x` is deterministic; appending
//! the conjugate letter splits between the extension and the cancellation
//! `x'` with weights `dim_q(y) / (dim_q(x) dim_q(u))`, which sum to 1 by
//! fusion multiplicativity. The exit law of the chain reproduces the
//! harmonic cylinder masses of [`crate::boundary`].

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::boundary::harmonic_cylinder_mass;
use crate::fusion::{Letter, Word};
use crate::qarith::{q_number_table, QContext};
use crate::real::Real;
use crate::seeding::stream_seed;

/// Hard per-path step cap; paths that exceed it are counted as failures.
pub const MAX_STEPS_PER_PATH: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WalkError {
    #[error("exact distribution after {n_steps} steps needs max_level >= n_steps, got {max_level}")]
    TruncationViolation { n_steps: u32, max_level: u32 },
    #[error("walk config invalid: escape_level ({escape}) must exceed record_depth ({depth})")]
    BadConfig { escape: u32, depth: u32 },
    #[error("no interior point of the sampled function has all its neighbor values present")]
    MissingNeighbors,
}

/// One-step transition distribution of the chain at `x`, exact.
pub fn step_distribution(x: &Word, ctx: &QContext) -> Vec<(Word, Real)> {
    let r = ctx.real();
    let half = r.from_f64(0.5);
    if x.is_empty() {
        return vec![
            (Word::EMPTY.push(Letter::U).unwrap(), half.clone()),
            (Word::EMPTY.push(Letter::Ubar).unwrap(), half),
        ];
    }
    let alpha = x.last().expect("nonempty");
    let dim_x = ctx.qdim_word(x);
    let denom = r.mul(&dim_x, ctx.dim_u());

    // γ = α: the extension x·α is the only subobject
    let same = x.push(alpha).expect("extension fits");
    // γ = ᾱ: split between x·ᾱ and the cancellation x'
    let ext = x.push(alpha.conjugate()).expect("extension fits");
    let inner = x.drop_last(1);
    let p_ext = r.mul(&half, &r.div(&ctx.qdim_word(&ext), &denom));
    let p_in = r.mul(&half, &r.div(&ctx.qdim_word(&inner), &denom));
    vec![(same, half), (ext, p_ext), (inner, p_in)]
}

/// Distribution of the chain after `n_steps` steps from the root, exact.
/// `max_level` bounds the support; the chain reaches level at most
/// `n_steps`, so `max_level >= n_steps` is required.
pub fn exact_distribution(
    n_steps: u32,
    max_level: u32,
    ctx: &QContext,
) -> Result<BTreeMap<Word, Real>, WalkError> {
    if n_steps > max_level {
        return Err(WalkError::TruncationViolation { n_steps, max_level });
    }
    let r = ctx.real();
    let mut dist = BTreeMap::new();
    dist.insert(Word::EMPTY, r.one());
    for _ in 0..n_steps {
        let mut next: BTreeMap<Word, Real> = BTreeMap::new();
        for (x, mass) in &dist {
            for (y, p) in step_distribution(x, ctx) {
                let add = r.mul(mass, &p);
                next.entry(y)
                    .and_modify(|cur| *cur = r.add(cur, &add))
                    .or_insert(add);
            }
        }
        dist = next;
    }
    Ok(dist)
}

/// Configuration of a Monte Carlo run. Each path is simulated from the root
/// until its first visit to `escape_level`, where the length-`record_depth`
/// prefix is recorded.
#[derive(Clone, Copy, Debug)]
pub struct WalkConfig {
    pub seed: u64,
    pub n_paths: u64,
    pub escape_level: u32,
    pub record_depth: u32,
}

impl WalkConfig {
    pub fn validate(&self) -> Result<(), WalkError> {
        if self.escape_level <= self.record_depth {
            return Err(WalkError::BadConfig {
                escape: self.escape_level,
                depth: self.record_depth,
            });
        }
        Ok(())
    }
}

/// Empirical cylinder frequencies at the recording depth, with binomial
/// standard errors. Counts are integers, so aggregation over workers is
/// order independent and runs are reproducible bit for bit.
#[derive(Clone, Debug)]
pub struct EmpiricalCylinderMeasure {
    counts: BTreeMap<Word, u64>,
    pub n_paths: u64,
    pub completed: u64,
    pub failed: u64,
    pub record_depth: u32,
    pub escape_level: u32,
    pub seed: u64,
}

impl EmpiricalCylinderMeasure {
    pub fn count(&self, x: &Word) -> u64 {
        self.counts.get(x).copied().unwrap_or(0)
    }

    pub fn estimate(&self, x: &Word) -> f64 {
        if self.completed == 0 {
            return f64::NAN;
        }
        self.count(x) as f64 / self.completed as f64
    }

    pub fn stderr(&self, x: &Word) -> f64 {
        let p = self.estimate(x);
        (p * (1.0 - p) / self.completed as f64).sqrt()
    }

    /// `(word, estimate, stderr, closed form, z)` rows for every cylinder at
    /// the recording depth, closed form from the harmonic measure.
    pub fn compare_with_harmonic(&self, ctx: &QContext) -> Vec<(Word, f64, f64, f64, f64)> {
        Word::all_of_len(self.record_depth as usize)
            .map(|w| {
                let est = self.estimate(&w);
                let se = self.stderr(&w);
                let closed = ctx.real().to_f64(&harmonic_cylinder_mass(&w, ctx));
                let z = if se > 0.0 { (est - closed) / se } else { 0.0 };
                (w, est, se, closed, z)
            })
            .collect()
    }
}

struct PathState {
    letters: Vec<Letter>,
    blocks: Vec<u32>,
}

impl PathState {
    fn new(cap: usize) -> Self {
        PathState {
            letters: Vec::with_capacity(cap),
            blocks: Vec::with_capacity(cap),
        }
    }

    fn reset(&mut self) {
        self.letters.clear();
        self.blocks.clear();
    }

    fn len(&self) -> usize {
        self.letters.len()
    }

    fn push(&mut self, l: Letter) {
        let extends = self.letters.last().is_some_and(|&last| last != l);
        self.letters.push(l);
        if extends {
            *self.blocks.last_mut().unwrap() += 1;
        } else {
            self.blocks.push(1);
        }
    }

    fn pop(&mut self) {
        self.letters.pop();
        let last = self.blocks.last_mut().unwrap();
        *last -= 1;
        if *last == 0 {
            self.blocks.pop();
        }
    }

    fn last_block(&self) -> u32 {
        self.blocks.last().copied().unwrap_or(0)
    }
}

/// Runs one path to the escape level; returns the recorded prefix, or
/// `None` if the step cap was hit.
fn run_path(
    rng: &mut ChaCha8Rng,
    state: &mut PathState,
    qn: &[f64],
    escape: u32,
    depth: u32,
) -> Option<Word> {
    state.reset();
    let inv_d1 = 1.0 / qn[2];
    for _ in 0..MAX_STEPS_PER_PATH {
        if state.len() as u32 == escape {
            let letters: Vec<Letter> = state.letters[..depth as usize].to_vec();
            return Some(Word::from_letters(&letters).expect("depth <= escape"));
        }
        let gamma = if rng.gen::<u64>() & 1 == 0 {
            Letter::U
        } else {
            Letter::Ubar
        };
        match state.letters.last() {
            None => state.push(gamma),
            Some(&alpha) if alpha == gamma => state.push(gamma),
            Some(_) => {
                let l = state.last_block() as usize;
                let p_in = if l >= 2 {
                    qn[l] / qn[l + 1] * inv_d1
                } else {
                    inv_d1 * inv_d1
                };
                if rng.gen::<f64>() < p_in {
                    state.pop();
                } else {
                    state.push(gamma);
                }
            }
        }
    }
    None
}

/// Seed-deterministic Monte Carlo estimate of the exit law: empirical
/// cylinder frequencies of the prefix recorded at the first visit to the
/// escape level. Parallel over paths with one RNG stream per path.
pub fn monte_carlo_hitting(
    cfg: &WalkConfig,
    ctx: &QContext,
) -> Result<EmpiricalCylinderMeasure, WalkError> {
    cfg.validate()?;
    let qn: Vec<f64> = {
        let table = q_number_table(ctx.real(), cfg.escape_level as usize + 2, ctx.q());
        table.iter().map(|v| ctx.real().to_f64(v)).collect()
    };

    let chunk = 4096u64;
    let n_chunks = cfg.n_paths.div_ceil(chunk);
    let (counts, failed) = (0..n_chunks)
        .into_par_iter()
        .map(|c| {
            let lo = c * chunk;
            let hi = ((c + 1) * chunk).min(cfg.n_paths);
            let mut counts: BTreeMap<Word, u64> = BTreeMap::new();
            let mut failed = 0u64;
            let mut state = PathState::new(cfg.escape_level as usize + 1);
            for idx in lo..hi {
                let mut rng = ChaCha8Rng::seed_from_u64(stream_seed(cfg.seed, idx));
                match run_path(&mut rng, &mut state, &qn, cfg.escape_level, cfg.record_depth) {
                    Some(prefix) => *counts.entry(prefix).or_insert(0) += 1,
                    None => failed += 1,
                }
            }
            (counts, failed)
        })
        .reduce(
            || (BTreeMap::new(), 0u64),
            |(mut a, fa), (b, fb)| {
                for (w, c) in b {
                    *a.entry(w).or_insert(0) += c;
                }
                (a, fa + fb)
            },
        );

    let completed = cfg.n_paths - failed;
    Ok(EmpiricalCylinderMeasure {
        counts,
        n_paths: cfg.n_paths,
        completed,
        failed,
        record_depth: cfg.record_depth,
        escape_level: cfg.escape_level,
        seed: cfg.seed,
    })
}

/// Largest harmonicity defect `|f(x) - Σ_y K(x,y) f(y)|` over the interior
/// points of `f` (those whose step targets are all present in `f`).
pub fn harmonicity_residual(
    f: &BTreeMap<Word, f64>,
    ctx: &QContext,
) -> Result<f64, WalkError> {
    let r = ctx.real();
    let mut residual: Option<f64> = None;
    for (x, fx) in f {
        let steps = step_distribution(x, ctx);
        if !steps.iter().all(|(y, _)| f.contains_key(y)) {
            continue;
        }
        let mut acc = 0.0;
        for (y, p) in &steps {
            acc += r.to_f64(p) * f[y];
        }
        let d = (fx - acc).abs();
        residual = Some(residual.map_or(d, |cur| cur.max(d)));
    }
    residual.ok_or(WalkError::MissingNeighbors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::traces::qtr1_power_distribution;

    fn ctx_q(q: f64) -> QContext {
        QContext::from_q_f64(q, 128).unwrap()
    }

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn step_from_root_and_letter() {
        let ctx = ctx_q(1.0);
        let r = ctx.real();
        let root = step_distribution(&Word::EMPTY, &ctx);
        assert_eq!(root.len(), 2);
        for (_, p) in &root {
            assert!(r.to_f64(&r.abs_diff(p, &r.from_f64(0.5))) < 1e-35);
        }

        let d: BTreeMap<Word, f64> = step_distribution(&w("u"), &ctx)
            .into_iter()
            .map(|(y, p)| (y, r.to_f64(&p)))
            .collect();
        assert!((d[&w("uu")] - 0.5).abs() < 1e-15);
        assert!((d[&w("ub")] - 0.375).abs() < 1e-15);
        assert!((d[&Word::EMPTY] - 0.125).abs() < 1e-15);
    }

    #[test]
    fn kernel_rows_are_stochastic() {
        for qv in [0.2, 0.5, 0.9, 1.0] {
            let ctx = ctx_q(qv);
            let r = ctx.real();
            for x in Word::all_up_to_len(6) {
                let mut total = r.zero();
                for (_, p) in step_distribution(&x, &ctx) {
                    assert!(r.ge(&p, &r.zero()));
                    total = r.add(&total, &p);
                }
                assert!(
                    r.to_f64(&r.abs_diff(&total, &r.one())) < 1e-30,
                    "q={qv} x={x}"
                );
            }
        }
    }

    #[test]
    fn exact_distribution_base_cases() {
        let ctx = ctx_q(0.5);
        let r = ctx.real();
        let d0 = exact_distribution(0, 5, &ctx).unwrap();
        assert_eq!(d0.len(), 1);
        assert!(r.cmp(&d0[&Word::EMPTY], &r.one()).is_eq());

        let d1 = exact_distribution(1, 5, &ctx).unwrap();
        assert_eq!(d1.len(), 2);
        assert!(r.to_f64(&r.abs_diff(&d1[&w("u")], &r.from_f64(0.5))) < 1e-35);

        assert!(exact_distribution(6, 5, &ctx).is_err());
    }

    #[test]
    fn level_marginal_matches_trace_powers() {
        for qv in [0.2, 1.0] {
            let ctx = ctx_q(qv);
            let r = ctx.real();
            for n in 0..=8u32 {
                let dist = exact_distribution(n, n, &ctx).unwrap();
                let mut marginal: BTreeMap<u32, Real> = BTreeMap::new();
                for (x, m) in &dist {
                    marginal
                        .entry(x.len() as u32)
                        .and_modify(|c| *c = r.add(c, m))
                        .or_insert_with(|| m.clone());
                }
                let oracle = qtr1_power_distribution(n, &ctx);
                assert_eq!(marginal.len(), oracle.len(), "q={qv} n={n}");
                for (k, v) in &oracle {
                    let got = &marginal[k];
                    assert!(
                        r.to_f64(&r.abs_diff(got, v)) < 1e-25,
                        "q={qv} n={n} k={k}"
                    );
                }
            }
        }
    }

    #[test]
    fn monte_carlo_is_deterministic_and_symmetric() {
        let ctx = ctx_q(1.0);
        let cfg = WalkConfig {
            seed: 7,
            n_paths: 20_000,
            escape_level: 25,
            record_depth: 1,
        };
        let a = monte_carlo_hitting(&cfg, &ctx).unwrap();
        let b = monte_carlo_hitting(&cfg, &ctx).unwrap();
        assert_eq!(a.counts, b.counts);
        assert_eq!(a.failed, 0);
        // depth-1 estimates are 1/2 by symmetry
        for (_, est, se, closed, z) in a.compare_with_harmonic(&ctx) {
            assert!((closed - 0.5).abs() < 1e-12);
            assert!(se > 0.0);
            assert!(z.abs() <= 4.0, "estimate {est} z {z}");
        }
    }

    #[test]
    fn monte_carlo_independent_of_worker_count() {
        let ctx = ctx_q(0.5);
        let cfg = WalkConfig {
            seed: 99,
            n_paths: 8_000,
            escape_level: 20,
            record_depth: 2,
        };
        let single = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(|| monte_carlo_hitting(&cfg, &ctx).unwrap());
        let multi = rayon::ThreadPoolBuilder::new()
            .num_threads(4)
            .build()
            .unwrap()
            .install(|| monte_carlo_hitting(&cfg, &ctx).unwrap());
        assert_eq!(single.counts, multi.counts);
        assert_eq!(single.failed, multi.failed);
    }

    #[test]
    fn monte_carlo_matches_closed_form_at_depth_two() {
        let ctx = ctx_q(1.0);
        let cfg = WalkConfig {
            seed: 20260810,
            n_paths: 100_000,
            escape_level: 40,
            record_depth: 2,
        };
        let est = monte_carlo_hitting(&cfg, &ctx).unwrap();
        for (word, _, _, _, z) in est.compare_with_harmonic(&ctx) {
            assert!(z.abs() <= 3.0, "word {word} drifted: z = {z}");
        }
    }

    #[test]
    fn harmonicity_of_constants_and_controls() {
        let ctx = ctx_q(0.7);
        // f ≡ 1 on a ball: kernel rows sum to 1, residual ~ 0
        let mut f: BTreeMap<Word, f64> = BTreeMap::new();
        for x in Word::all_up_to_len(4) {
            f.insert(x, 1.0);
        }
        let res = harmonicity_residual(&f, &ctx).unwrap();
        assert!(res < 1e-12);

        // level indicator is not harmonic: positive residual
        let mut g: BTreeMap<Word, f64> = BTreeMap::new();
        for x in Word::all_up_to_len(4) {
            g.insert(x, x.len() as f64);
        }
        let res = harmonicity_residual(&g, &ctx).unwrap();
        assert!(res > 1e-3);

        // no interior points: error
        let mut h: BTreeMap<Word, f64> = BTreeMap::new();
        h.insert(w("u"), 1.0);
        assert!(matches!(
            harmonicity_residual(&h, &ctx),
            Err(WalkError::MissingNeighbors)
        ));
    }

    #[test]
    fn config_validation() {
        let cfg = WalkConfig {
            seed: 0,
            n_paths: 10,
            escape_level: 2,
            record_depth: 2,
        };
        assert!(cfg.validate().is_err());
    }
}
