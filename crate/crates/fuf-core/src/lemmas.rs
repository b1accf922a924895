//! Randomized property checks for two finite-dimensional operator-norm
//! inequalities and a rotation-action lower bound, in double precision.
//!
//! For positive contractions with `‖A+B‖ ≤ 1+ε` the powers become almost
//! orthogonal, `‖AⁿBⁿ‖ ≤ 14ε` once `(1-ε²)ⁿ ≤ ε²`; conversely norm-one
//! positives with `‖AB‖ ≤ ε` satisfy `‖A+B‖ ≤ 1+2ε`. Both are proved facts,
//! so the randomized sweeps are implementation checks: any violation beyond
//! the numeric margin indicates a bug in norms or precondition handling, not
//! a counterexample. The θ-rotation probe is the opposite: it attempts to
//! falsify the lower bound `‖b(α⊗id)(b)‖ ≥ 1-|1-e^{iθ}|` for the rotation
//! `α = Ad(diag(1, e^{iθ}))` on 2×2 blocks; absence of counterexamples is
//! the deliverable.

use nalgebra::{Complex, DMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::seeding::stream_seed;

type C64 = Complex<f64>;
type CMat = DMatrix<C64>;

/// Numeric slack added to the proved bounds (double-precision roundoff).
pub const NORM_MARGIN: f64 = 1e-9;

/// Maximum matrix size accepted by [`PsdPair`].
pub const MAX_DIM: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LemmaError {
    #[error("matrices must be square, same size, dimension 1..={MAX_DIM}")]
    BadShape,
}

/// A pair of Hermitian positive semidefinite matrices with spectra in [0,1].
#[derive(Clone, Debug)]
pub struct PsdPair {
    pub a: CMat,
    pub b: CMat,
}

impl PsdPair {
    pub fn new(a: CMat, b: CMat) -> Result<Self, LemmaError> {
        if a.nrows() != a.ncols()
            || b.nrows() != b.ncols()
            || a.nrows() != b.nrows()
            || a.nrows() == 0
            || a.nrows() > MAX_DIM
        {
            return Err(LemmaError::BadShape);
        }
        Ok(PsdPair { a, b })
    }

    pub fn dim(&self) -> usize {
        self.a.nrows()
    }
}

/// Operator norm of a Hermitian PSD matrix: its largest eigenvalue.
pub fn hermitian_norm(m: &CMat) -> f64 {
    m.clone()
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .fold(0.0f64, |acc, &e| acc.max(e.abs()))
}

/// Operator norm of an arbitrary matrix: its largest singular value,
/// computed as `sqrt(λ_max(X*X))`.
pub fn opnorm(m: &CMat) -> f64 {
    let gram = m.adjoint() * m;
    hermitian_norm(&gram).max(0.0).sqrt()
}

/// `m^n` for Hermitian PSD `m`, through the spectral decomposition with
/// eigenvalues clamped at 0 against roundoff.
pub fn psd_power(m: &CMat, n: u64) -> CMat {
    let eig = m.clone().symmetric_eigen();
    let d = m.nrows();
    let mut scaled = eig.eigenvectors.clone();
    for j in 0..d {
        let lam = eig.eigenvalues[j].max(0.0).powf(n as f64);
        for i in 0..d {
            scaled[(i, j)] *= C64::new(lam, 0.0);
        }
    }
    &scaled * eig.eigenvectors.adjoint()
}

/// Verdict of the almost-orthogonality check `‖AⁿBⁿ‖ ≤ 14ε`.
#[derive(Clone, Debug)]
pub struct AsymptoticVerdict {
    pub eps: f64,
    /// `n = ⌈log(ε²)/log(1-ε²)⌉`, the smallest power with `(1-ε²)ⁿ ≤ ε²`.
    pub n_power: u64,
    pub norm_a: f64,
    pub norm_b: f64,
    pub norm_sum: f64,
    pub value: f64,
    pub bound: f64,
    pub preconditions_ok: bool,
    pub pass: bool,
}

/// Checks `‖AⁿBⁿ‖ ≤ 14ε` for the power `n` determined by `ε ∈ (0, 1/2]`.
/// Precondition failures (`‖A‖,‖B‖ ≤ 1`, `‖A+B‖ ≤ 1+ε`) are reported in the
/// verdict, not asserted.
pub fn asymptotic_orthogonality_check(pair: &PsdPair, eps: f64) -> AsymptoticVerdict {
    assert!(eps > 0.0 && eps <= 0.5, "eps must lie in (0, 1/2]");
    let n_power = ((eps * eps).ln() / (1.0 - eps * eps).ln()).ceil() as u64;
    let norm_a = hermitian_norm(&pair.a);
    let norm_b = hermitian_norm(&pair.b);
    let norm_sum = hermitian_norm(&(&pair.a + &pair.b));
    let preconditions_ok = norm_a <= 1.0 + NORM_MARGIN
        && norm_b <= 1.0 + NORM_MARGIN
        && norm_sum <= 1.0 + eps + NORM_MARGIN;
    let value = opnorm(&(psd_power(&pair.a, n_power) * psd_power(&pair.b, n_power)));
    let bound = 14.0 * eps;
    AsymptoticVerdict {
        eps,
        n_power,
        norm_a,
        norm_b,
        norm_sum,
        value,
        bound,
        preconditions_ok,
        pass: value <= bound + NORM_MARGIN,
    }
}

/// Verdict of the sum-norm check `‖A+B‖ ≤ 1+2ε`.
#[derive(Clone, Debug)]
pub struct EasyVerdict {
    pub eps: f64,
    pub norm_a: f64,
    pub norm_b: f64,
    pub norm_product: f64,
    pub value: f64,
    pub bound: f64,
    pub preconditions_ok: bool,
    pub pass: bool,
}

/// Checks `‖A+B‖ ≤ 1+2ε` for norm-one positives with `‖AB‖ ≤ ε`.
pub fn easy_orthogonality_check(pair: &PsdPair, eps: f64) -> EasyVerdict {
    assert!(eps >= 0.0);
    let norm_a = hermitian_norm(&pair.a);
    let norm_b = hermitian_norm(&pair.b);
    let norm_product = opnorm(&(&pair.a * &pair.b));
    let preconditions_ok = (norm_a - 1.0).abs() <= NORM_MARGIN
        && (norm_b - 1.0).abs() <= NORM_MARGIN
        && norm_product <= eps + NORM_MARGIN;
    let value = hermitian_norm(&(&pair.a + &pair.b));
    let bound = 1.0 + 2.0 * eps;
    EasyVerdict {
        eps,
        norm_a,
        norm_b,
        norm_product,
        value,
        bound,
        preconditions_ok,
        pass: value <= bound + NORM_MARGIN,
    }
}

fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    // Box-Muller; rejects the measure-zero u = 0
    let mut u = rng.gen::<f64>();
    while u == 0.0 {
        u = rng.gen::<f64>();
    }
    let v = rng.gen::<f64>();
    (-2.0 * u.ln()).sqrt() * (std::f64::consts::TAU * v).cos()
}

fn random_gaussian_matrix(dim: usize, rng: &mut ChaCha8Rng) -> CMat {
    CMat::from_fn(dim, dim, |_, _| C64::new(gaussian(rng), gaussian(rng)))
}

/// Random PSD matrix `G*G` scaled to operator norm 1.
pub fn random_normalized_psd(dim: usize, rng: &mut ChaCha8Rng) -> CMat {
    let g = random_gaussian_matrix(dim, rng);
    let p = g.adjoint() * &g;
    let norm = hermitian_norm(&p);
    p / C64::new(norm, 0.0)
}

/// Samples a pair meeting the preconditions of the almost-orthogonality
/// check: `A` has norm 1 and `B` is shrunk by binary search until
/// `‖A+B‖ ≈ 1+ε` (uniform rejection essentially never lands there).
pub fn sample_asymptotic_pair(dim: usize, eps: f64, rng: &mut ChaCha8Rng) -> PsdPair {
    let a = random_normalized_psd(dim, rng);
    let b0 = random_normalized_psd(dim, rng);
    let target = 1.0 + eps;
    if hermitian_norm(&(&a + &b0)) <= target {
        return PsdPair { a, b: b0 };
    }
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        let norm = hermitian_norm(&(&a + &b0 * C64::new(mid, 0.0)));
        if norm > target {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    PsdPair {
        a,
        b: &b0 * C64::new(lo, 0.0),
    }
}

/// Outcome of a randomized sweep: number of samples, violations, and the
/// worst (largest) observed ratio `value / bound`.
#[derive(Clone, Debug)]
pub struct SweepReport {
    pub eps: f64,
    pub dim: usize,
    pub n_samples: u64,
    pub violations: u64,
    pub worst_ratio: f64,
}

/// Randomized search for counterexamples to the almost-orthogonality bound.
pub fn sweep_asymptotic(dim: usize, eps: f64, n_samples: u64, seed: u64) -> SweepReport {
    let (violations, worst_ratio) = (0..n_samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(stream_seed(seed, i));
            let pair = sample_asymptotic_pair(dim, eps, &mut rng);
            let v = asymptotic_orthogonality_check(&pair, eps);
            (u64::from(!v.pass), v.value / v.bound)
        })
        .reduce(|| (0u64, 0.0f64), |(va, ra), (vb, rb)| (va + vb, ra.max(rb)));
    SweepReport {
        eps,
        dim,
        n_samples,
        violations,
        worst_ratio,
    }
}

/// Randomized search for counterexamples to the sum-norm bound, with the
/// observed `ε = ‖AB‖` per pair.
pub fn sweep_easy(dim: usize, n_samples: u64, seed: u64) -> SweepReport {
    let (violations, worst_ratio) = (0..n_samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(stream_seed(seed, i));
            let a = random_normalized_psd(dim, &mut rng);
            let b = random_normalized_psd(dim, &mut rng);
            let pair = PsdPair { a, b };
            let eps = opnorm(&(&pair.a * &pair.b));
            let v = easy_orthogonality_check(&pair, eps);
            (u64::from(!v.pass), v.value / v.bound)
        })
        .reduce(|| (0u64, 0.0f64), |(va, ra), (vb, rb)| (va + vb, ra.max(rb)));
    SweepReport {
        eps: f64::NAN,
        dim,
        n_samples,
        violations,
        worst_ratio,
    }
}

/// Result of the rotation probe: the minimum of `‖b (α⊗id)(b)‖` over random
/// positive norm-one `b ∈ M₂⊗M_k`, against the bound `1-|1-e^{iθ}|`.
#[derive(Clone, Debug)]
pub struct ThetaProbeReport {
    pub theta: f64,
    pub k: usize,
    pub n_samples: u64,
    pub min_value: f64,
    pub bound: f64,
    pub pass: bool,
}

/// Attempts to falsify the lower bound for `α = Ad(diag(1, e^{iθ}))`.
pub fn theta_rotation_probe(theta: f64, k: usize, n_samples: u64, seed: u64) -> ThetaProbeReport {
    assert!(k >= 1 && 2 * k <= MAX_DIM);
    let u2 = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
        C64::new(1.0, 0.0),
        C64::new(theta.cos(), theta.sin()),
    ]));
    let u = u2.kronecker(&DMatrix::<C64>::identity(k, k));
    let u_adj = u.adjoint();

    let min_value = (0..n_samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(stream_seed(seed, i));
            let b = random_normalized_psd(2 * k, &mut rng);
            let alpha_b = &u_adj * &b * &u;
            opnorm(&(&b * alpha_b))
        })
        .reduce(|| f64::INFINITY, f64::min);

    let bound = 1.0 - (C64::new(1.0, 0.0) - C64::new(theta.cos(), theta.sin())).norm();
    ThetaProbeReport {
        theta,
        k,
        n_samples,
        min_value,
        bound,
        pass: min_value >= bound - NORM_MARGIN,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(entries: &[f64]) -> CMat {
        CMat::from_fn(entries.len(), entries.len(), |i, j| {
            if i == j {
                C64::new(entries[i], 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        })
    }

    #[test]
    fn orthogonal_projections_pass() {
        let pair = PsdPair::new(diag(&[1.0, 0.0]), diag(&[0.0, 1.0])).unwrap();
        let v = asymptotic_orthogonality_check(&pair, 0.1);
        assert!(v.preconditions_ok);
        assert!(v.value < 1e-12);
        assert!(v.pass);

        let v = easy_orthogonality_check(&pair, 0.0);
        assert!(v.preconditions_ok);
        assert!((v.value - 1.0).abs() < 1e-12);
        assert!(v.pass);
    }

    #[test]
    fn scalar_halves_pass() {
        // A = B = I/2: ‖A+B‖ = 1 ≤ 1.5 and ‖AⁿBⁿ‖ = 4^-n
        let pair = PsdPair::new(diag(&[0.5, 0.5]), diag(&[0.5, 0.5])).unwrap();
        let v = asymptotic_orthogonality_check(&pair, 0.5);
        assert!(v.preconditions_ok);
        assert_eq!(v.n_power, 5);
        assert!((v.value - 0.25f64.powi(5)).abs() < 1e-12);
        assert!(v.pass);
    }

    #[test]
    fn angled_rank_one_projections() {
        // projections at angle θ: ‖PQ‖ = cosθ and ‖P+Q‖ = 1 + cosθ
        let theta = 0.7f64;
        let (c, s) = (theta.cos(), theta.sin());
        let p = CMat::from_fn(2, 2, |i, j| {
            C64::new([[1.0, 0.0], [0.0, 0.0]][i][j], 0.0)
        });
        let q = CMat::from_fn(2, 2, |i, j| {
            C64::new([[c * c, c * s], [c * s, s * s]][i][j], 0.0)
        });
        let pair = PsdPair::new(p, q).unwrap();
        let eps = opnorm(&(&pair.a * &pair.b));
        assert!((eps - c).abs() < 1e-12);
        let v = easy_orthogonality_check(&pair, eps);
        assert!(v.preconditions_ok);
        assert!((v.value - (1.0 + c)).abs() < 1e-12);
        assert!(v.pass);
    }

    #[test]
    fn norm_self_consistency() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let x = random_gaussian_matrix(6, &mut rng);
            let n1 = opnorm(&x);
            let n2 = opnorm(&(x.adjoint() * &x));
            assert!((n1 * n1 - n2).abs() <= 1e-10 * n2.max(1.0));
        }
    }

    #[test]
    fn sampled_pairs_meet_preconditions() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for eps in [0.05, 0.25, 0.5] {
            for _ in 0..20 {
                let pair = sample_asymptotic_pair(6, eps, &mut rng);
                let v = asymptotic_orthogonality_check(&pair, eps);
                assert!(v.preconditions_ok, "eps={eps}");
            }
        }
    }

    #[test]
    fn small_sweeps_find_no_counterexamples() {
        for eps in [0.05, 0.5] {
            let rep = sweep_asymptotic(5, eps, 300, 17);
            assert_eq!(rep.violations, 0, "eps={eps} worst={}", rep.worst_ratio);
        }
        let rep = sweep_easy(5, 300, 23);
        assert_eq!(rep.violations, 0, "worst={}", rep.worst_ratio);
    }

    #[test]
    fn theta_probe_identity_and_pi() {
        // θ = 0: α is trivial and ‖b²‖ = 1 for every norm-one positive b
        let rep = theta_rotation_probe(0.0, 3, 50, 3);
        assert!(rep.pass);
        assert!((rep.min_value - 1.0).abs() < 1e-9);
        assert!((rep.bound - 1.0).abs() < 1e-15);

        // θ = π: the bound is negative, vacuous for norms
        let rep = theta_rotation_probe(std::f64::consts::PI, 2, 50, 4);
        assert!(rep.bound < 0.0);
        assert!(rep.pass);
    }

    #[test]
    fn theta_probe_pi_over_six() {
        let rep = theta_rotation_probe(std::f64::consts::PI / 6.0, 4, 400, 8);
        assert!(rep.pass, "min {} below bound {}", rep.min_value, rep.bound);
    }

    #[test]
    fn psd_pair_shape_validation() {
        assert!(PsdPair::new(diag(&[1.0]), diag(&[1.0, 0.5])).is_err());
        assert!(PsdPair::new(diag(&[]), diag(&[])).is_err());
        let big = vec![0.5; 65];
        assert!(PsdPair::new(diag(&big), diag(&big)).is_err());
    }

    #[test]
    fn sweeps_are_deterministic() {
        let a = sweep_asymptotic(4, 0.25, 64, 99);
        let b = sweep_asymptotic(4, 0.25, 64, 99);
        assert_eq!(a.worst_ratio, b.worst_ratio);
        assert_eq!(a.violations, b.violations);
    }
}
