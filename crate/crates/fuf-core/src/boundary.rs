//! The harmonic measure on the boundary of the Cayley tree of the free
//! monoid on `{u, ū}`, driven by the uniform one-letter step.
//!
//! The mass of the cylinder of infinite words extending `x` has the closed
//! form
//!
//! ```text
//! mass(x) = dim_q(x) (κ/√2)^|x| (1 - (κ/√2) [l]_q/[l+1]_q)
//! ```
//!
//! where `l` is the length of the final alternating block of `x`, and
//! `mass(ε) = 1` by normalization. The same value is the limit of the
//! normalized dimension ratio `dim_q(x, n)/dim_q(n)`, where `dim_q(x, n)`
//! sums the dimensions of the length-`n` words extending `x`; both routes
//! are implemented and cross-checked. The mass decays geometrically in `|x|`
//! and a long alternating tail of length `k+1` forces mass at most `2^-k`,
//! which is why the measure has no atoms.

use std::collections::BTreeMap;

use crate::fusion::{Letter, Word};
use crate::qarith::{strict_less, QContext, Verdict};
use crate::real::{Real, DEFAULT_MARGIN};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BoundaryError {
    #[error("cylinder depth {0} too large; 2^depth cylinders, max depth {max}", max = CylinderMeasure::MAX_DEPTH)]
    DepthTooLarge(u32),
    #[error("ratio limit needs n_max >= |x| + 2, got n_max={n_max} for |x|={len}")]
    HorizonTooShort { n_max: u32, len: u32 },
}

/// Masses of all cylinders up to a fixed prefix depth, Kolmogorov
/// consistent: `mass(x) = mass(xu) + mass(xū)`.
#[derive(Clone, Debug)]
pub struct CylinderMeasure {
    masses: BTreeMap<Word, Real>,
    depth: u32,
}

impl CylinderMeasure {
    pub const MAX_DEPTH: u32 = 14;

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn mass(&self, x: &Word) -> Option<&Real> {
        self.masses.get(x)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Word, &Real)> {
        self.masses.iter()
    }

    /// Largest consistency defect `|mass(x) - mass(xu) - mass(xū)|` over all
    /// populated interior nodes.
    pub fn consistency_defect(&self, ctx: &QContext) -> Real {
        let r = ctx.real();
        let mut worst = r.zero();
        for (x, m) in &self.masses {
            if x.len() as u32 >= self.depth {
                continue;
            }
            let mu = self.masses[&x.push(Letter::U).expect("within depth")].clone();
            let mb = self.masses[&x.push(Letter::Ubar).expect("within depth")].clone();
            let d = r.abs_diff(m, &r.add(&mu, &mb));
            worst = r.max(&worst, &d);
        }
        worst
    }

    /// Largest defect `|Σ_{|x|=d} mass(x) - 1|` over the populated levels.
    pub fn level_sum_defect(&self, ctx: &QContext) -> Real {
        let r = ctx.real();
        let mut worst = r.zero();
        for d in 0..=self.depth {
            let mut sum = r.zero();
            for w in Word::all_of_len(d as usize) {
                sum = r.add(&sum, &self.masses[&w]);
            }
            worst = r.max(&worst, &r.abs_diff(&sum, &r.one()));
        }
        worst
    }
}

/// Closed-form harmonic mass of the cylinder `∂I(x)`; 1 for the empty word.
pub fn harmonic_cylinder_mass(x: &Word, ctx: &QContext) -> Real {
    let r = ctx.real();
    if x.is_empty() {
        return r.one();
    }
    let ratio = r.div(ctx.kappa(), &r.sqrt2()); // κ/√2 < 1
    let l = x.last_block_len() as u64;
    let tail = r.mul(&ratio, &r.div(&ctx.qnum(l), &ctx.qnum(l + 1)));
    let factor = r.sub(&r.one(), &tail);
    let geo = r.powi(&ratio, x.len());
    r.mul(&r.mul(&ctx.qdim_word(x), &geo), &factor)
}

/// The normalized extension-dimension ratio `dim_q(x, n_max) / dim_q(n_max)`.
///
/// `d(n) = dim_q(x, n)` obeys the same recursion as the level dimensions,
/// `d(n+1) = 2[2]_q d(n) - 2 d(n-1)`, seeded by `d(|x|) = dim_q(x)` and
/// `d(|x|+1) = dim_q(xu) + dim_q(xū)`. The iteration is carried out on the
/// ratio `r(n) = d(n)/dim_q(n)`, which stays bounded, and converges to
/// [`harmonic_cylinder_mass`] as `n_max` grows.
pub fn dimq_ratio_limit(x: &Word, n_max: u32, ctx: &QContext) -> Result<Real, BoundaryError> {
    let len = x.len() as u32;
    if n_max < len + 2 {
        return Err(BoundaryError::HorizonTooShort { n_max, len });
    }
    let r = ctx.real();
    let two_d1 = r.mul(&r.two(), ctx.dim_u());

    // level dimensions via the κ closed form, computed incrementally
    let mut lev = Vec::with_capacity(n_max as usize + 1);
    for n in len..=n_max {
        lev.push(ctx.qdim_level(n as u64));
    }
    let lev = |n: u32| -> &Real { &lev[(n - len) as usize] };

    let d0 = ctx.qdim_word(x);
    let d1 = {
        let xu = x.push(Letter::U).expect("extension fits");
        let xb = x.push(Letter::Ubar).expect("extension fits");
        r.add(&ctx.qdim_word(&xu), &ctx.qdim_word(&xb))
    };
    let mut prev = r.div(&d0, lev(len));
    let mut cur = r.div(&d1, lev(len + 1));
    for n in (len + 1)..n_max {
        // r(n+1) = (2[2]_q r(n) dim(n) - 2 r(n-1) dim(n-1)) / dim(n+1)
        let a = r.mul(&r.mul(&two_d1, &cur), lev(n));
        let b = r.mul(&r.mul(&r.two(), &prev), lev(n - 1));
        let next = r.div(&r.sub(&a, &b), lev(n + 1));
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// Populates every cylinder up to `depth` with the closed-form mass.
pub fn build_cylinder_measure(depth: u32, ctx: &QContext) -> Result<CylinderMeasure, BoundaryError> {
    if depth > CylinderMeasure::MAX_DEPTH {
        return Err(BoundaryError::DepthTooLarge(depth));
    }
    let mut masses = BTreeMap::new();
    for d in 0..=depth {
        for w in Word::all_of_len(d as usize) {
            masses.insert(w, harmonic_cylinder_mass(&w, ctx));
        }
    }
    Ok(CylinderMeasure { masses, depth })
}

/// One row of a [`NonAtomicityReport`]: the alternating-tail decay check
/// `mass(x α^{(k+1)}) <= 2^-k` for a given `k` and both choices of `α`.
#[derive(Clone, Debug)]
pub struct TailDecayCheck {
    pub k: u32,
    pub mass_u_tail: Real,
    pub mass_ubar_tail: Real,
    pub bound: Real,
    pub ok: bool,
}

/// Verdicts for the non-atomicity bounds at a single base word.
#[derive(Clone, Debug)]
pub struct NonAtomicityReport {
    pub word: Word,
    pub mass: Real,
    /// `([2]_q κ/√2)^|x|`.
    pub geometric_bound: Real,
    pub geometric_ok: bool,
    /// Verdict on `[2]_q κ/√2 < 1`.
    pub base_verdict: Verdict,
    pub tail_checks: Vec<TailDecayCheck>,
}

impl NonAtomicityReport {
    pub fn all_ok(&self) -> bool {
        self.geometric_ok
            && self.base_verdict == Verdict::Holds
            && self.tail_checks.iter().all(|t| t.ok)
    }
}

/// Checks `mass(x) <= ([2]_q κ/√2)^|x|` with base < 1, and the tail decay
/// `mass(x α^{(k+1)}) <= 2^-k` for `k <= k_max`.
pub fn non_atomicity_report(x: &Word, k_max: u32, ctx: &QContext) -> NonAtomicityReport {
    let r = ctx.real();
    let margin = r.from_f64(DEFAULT_MARGIN);
    let base = r.div(&r.mul(ctx.dim_u(), ctx.kappa()), &r.sqrt2());
    let base_verdict = strict_less(r, &base, &r.one(), &margin);
    let mass = harmonic_cylinder_mass(x, ctx);
    let geometric_bound = r.powi(&base, x.len());
    let geometric_ok = r.le(&mass, &r.add(&geometric_bound, &margin));

    let tail_checks = (1..=k_max)
        .map(|k| {
            let bound = r.pow2_neg(k);
            let mut masses = [r.zero(), r.zero()];
            for (slot, alpha) in [Letter::U, Letter::Ubar].into_iter().enumerate() {
                let tail = Word::alternating(alpha, k as usize + 1).expect("tail fits");
                let xt = x.concat(&tail).expect("word fits");
                masses[slot] = harmonic_cylinder_mass(&xt, ctx);
            }
            let [mass_u_tail, mass_ubar_tail] = masses;
            let ok = r.le(&mass_u_tail, &r.add(&bound, &margin))
                && r.le(&mass_ubar_tail, &r.add(&bound, &margin));
            TailDecayCheck {
                k,
                mass_u_tail,
                mass_ubar_tail,
                bound,
                ok,
            }
        })
        .collect();

    NonAtomicityReport {
        word: *x,
        mass,
        geometric_bound,
        geometric_ok,
        base_verdict,
        tail_checks,
    }
}
