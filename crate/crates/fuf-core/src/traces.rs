//! The convolution algebra of quantum traces and its level-aggregated
//! quotient.
//!
//! `qTr_x` denotes the quantum trace of the irreducible `x`; convolution is
//! governed by the fusion rules, `qTr_x * qTr_y = Σ_w qTr_w` over the
//! decomposition of `x ⊗ y`. Aggregating by word length gives the
//! birth-death rule `qTr_1 * qTr_n = qTr_{n+1} + 2 qTr_{n-1}`. The module
//! also computes the restricted-trace gap: the total normalized dimension of
//! the level-`n` words that have no letter repetition inside a fixed window,
//! which is bounded by `2^-k` for a window of width `k`.

use std::collections::BTreeMap;

use crate::fusion::{tensor_decompose, Word};
use crate::qarith::{q_number_table, QContext};
use crate::real::Real;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TraceError {
    #[error("restricted-trace window needs 1 <= p, k >= 1 and n >= p + k; got n={n}, p={p}, k={k}")]
    BadWindow { n: u32, p: u32, k: u32 },
    #[error("enumeration over 2^{0} words is beyond desk scale (max n = 30)")]
    LevelTooLarge(u32),
}

/// A finitely supported linear combination `Σ c_x qTr_x`.
///
/// Zero coefficients are pruned from the map.
#[derive(Clone, Debug, Default)]
pub struct CentralElement {
    coeffs: BTreeMap<Word, Real>,
}

impl CentralElement {
    pub fn new() -> Self {
        Self::default()
    }

    /// The single trace `qTr_x` with coefficient 1.
    pub fn trace(x: Word, ctx: &QContext) -> Self {
        let mut out = Self::new();
        out.set(x, ctx.real().one());
        out
    }

    /// The unit of the convolution algebra, `qTr_ε`.
    pub fn unit(ctx: &QContext) -> Self {
        Self::trace(Word::EMPTY, ctx)
    }

    /// The level aggregate `qTr_n = Σ_{|x|=n} qTr_x`.
    pub fn level_trace(n: usize, ctx: &QContext) -> Self {
        let mut out = Self::new();
        for w in Word::all_of_len(n) {
            out.set(w, ctx.real().one());
        }
        out
    }

    pub fn set(&mut self, x: Word, c: Real) {
        if c.is_zero() {
            self.coeffs.remove(&x);
        } else {
            self.coeffs.insert(x, c);
        }
    }

    pub fn add_to(&mut self, x: Word, c: &Real, ctx: &QContext) {
        let cur = match self.coeffs.get(&x) {
            Some(v) => ctx.real().add(v, c),
            None => c.clone(),
        };
        self.set(x, cur);
    }

    pub fn coeff(&self, x: &Word) -> Option<&Real> {
        self.coeffs.get(x)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Word, &Real)> {
        self.coeffs.iter()
    }

    pub fn support_len(&self) -> usize {
        self.coeffs.len()
    }

    /// Convolution: the bilinear extension of
    /// `qTr_x * qTr_y = Σ_{w ⊂ x⊗y} qTr_w`. Not commutative in general —
    /// the fusion monoid is free — though level aggregates commute.
    pub fn convolve(&self, other: &Self, ctx: &QContext) -> Self {
        let r = ctx.real();
        let mut out = Self::new();
        for (x, cx) in self.iter() {
            for (y, cy) in other.iter() {
                let c = r.mul(cx, cy);
                for (w, _) in tensor_decompose(x, y).iter() {
                    out.add_to(*w, &c, ctx);
                }
            }
        }
        out
    }

    /// The dimension character: `qTr_x ↦ dim_q(x)` extended linearly. An
    /// algebra morphism for convolution (fusion multiplicativity).
    pub fn dimension_character(&self, ctx: &QContext) -> Real {
        let r = ctx.real();
        let mut out = r.zero();
        for (x, c) in self.iter() {
            out = r.add(&out, &r.mul(c, &ctx.qdim_word(x)));
        }
        out
    }

    /// Coefficients summed per word length.
    pub fn level_marginal(&self, ctx: &QContext) -> LevelElement {
        let r = ctx.real();
        let mut out = LevelElement::new();
        for (x, c) in self.iter() {
            let n = x.len() as u32;
            let cur = match out.coeffs.get(&n) {
                Some(v) => r.add(v, c),
                None => c.clone(),
            };
            out.set(n, cur);
        }
        out
    }

    /// Exact equality of coefficient maps.
    pub fn eq_exact(&self, other: &Self, ctx: &QContext) -> bool {
        let r = ctx.real();
        self.coeffs.len() == other.coeffs.len()
            && self.iter().zip(other.iter()).all(|((x, c), (y, d))| {
                x == y && r.cmp(c, d) == std::cmp::Ordering::Equal
            })
    }
}

/// A finitely supported combination of level aggregates `Σ c_n qTr_n`.
#[derive(Clone, Debug, Default)]
pub struct LevelElement {
    coeffs: BTreeMap<u32, Real>,
}

impl LevelElement {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn delta(n: u32, ctx: &QContext) -> Self {
        let mut out = Self::new();
        out.set(n, ctx.real().one());
        out
    }

    pub fn set(&mut self, n: u32, c: Real) {
        if c.is_zero() {
            self.coeffs.remove(&n);
        } else {
            self.coeffs.insert(n, c);
        }
    }

    pub fn coeff(&self, n: u32) -> Option<&Real> {
        self.coeffs.get(&n)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&u32, &Real)> {
        self.coeffs.iter()
    }

    /// Left convolution by `qTr_1`: each level coefficient follows the
    /// birth-death rule `n ↦ {n+1: c, n-1: 2c}` for `n >= 1`, and level 0
    /// feeds level 1 only.
    pub fn level_convolve_step(&self, ctx: &QContext) -> Self {
        let r = ctx.real();
        let mut out = Self::new();
        let bump = |m: u32, v: &Real, out: &mut Self| {
            let cur = match out.coeffs.get(&m) {
                Some(x) => r.add(x, v),
                None => v.clone(),
            };
            out.set(m, cur);
        };
        for (&n, c) in self.iter() {
            if n == 0 {
                bump(1, c, &mut out);
            } else {
                bump(n + 1, c, &mut out);
                bump(n - 1, &r.mul(&r.two(), c), &mut out);
            }
        }
        out
    }

    /// Total of the dimension character: `Σ c_n dim_q(n)`.
    pub fn dimension_character(&self, ctx: &QContext) -> Real {
        let r = ctx.real();
        let mut out = r.zero();
        for (&n, c) in self.iter() {
            out = r.add(&out, &r.mul(c, &ctx.qdim_level(n as u64)));
        }
        out
    }
}

/// Expands the state `qtr_1^{*n}` as a convex combination `Σ_k w_k qtr_k`.
///
/// The integer coefficients of `qTr_1^{*n} = Σ c_k qTr_k` follow the level
/// birth-death rule; the weight of `qtr_k` is then
/// `c_k dim_q(k) / dim_q(1)^n`. Weights are nonnegative, sum to 1, and are
/// supported on `k <= n` with `k + n` even.
pub fn qtr1_power_distribution(n: u32, ctx: &QContext) -> BTreeMap<u32, Real> {
    let r = ctx.real();
    let mut counts = LevelElement::delta(0, ctx);
    for _ in 0..n {
        counts = counts.level_convolve_step(ctx);
    }
    let denom = r.powi(&ctx.qdim_level(1), n as usize);
    let mut out = BTreeMap::new();
    for (&k, c) in counts.iter() {
        let w = r.div(&r.mul(c, &ctx.qdim_level(k as u64)), &denom);
        out.insert(k, w);
    }
    out
}

/// How [`restricted_trace_gap`] computes its sum.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GapMethod {
    /// Direct sum over all `2^n` words of the level.
    Enumerate,
    /// Run-length dynamic program over positions; exact, O(n^2) states.
    Dp,
}

/// Normalized dimension mass of the words of length `n` with **no** letter
/// repetition at the junctions `p ..= p+k` — those of the form
/// `y = y₁ α^{(k+1)} y₂` with `|y₁| = p-1`:
///
/// `gap = dim_q(n)^{-1} Σ { dim_q(y) : y has no repetition in the window }`.
///
/// This is the gap `‖qtr_n - qtr_n^{(p,k)}‖` of the restricted trace, and is
/// bounded by `2^-k`. Requires `p >= 1`, `k >= 1`, `n >= p + k`.
pub fn restricted_trace_gap(
    n: u32,
    p: u32,
    k: u32,
    ctx: &QContext,
    method: GapMethod,
) -> Result<Real, TraceError> {
    if p < 1 || k < 1 || n < p + k {
        return Err(TraceError::BadWindow { n, p, k });
    }
    if n > 30 {
        return Err(TraceError::LevelTooLarge(n));
    }
    let r = ctx.real();
    let table = q_number_table(r, n as usize + 1, ctx.q());
    // junctions j (between letters j and j+1, 1-based) constrained to differ
    let j_lo = p;
    let j_hi = (p + k).min(n - 1);

    let sum = match method {
        GapMethod::Enumerate => {
            let n = n as usize;
            let (j_lo, j_hi) = (j_lo as usize, j_hi as usize);
            // bit j-1 of `repeats` is set iff letters j and j+1 are equal
            let window: u64 = ((1u64 << (j_hi - j_lo + 1)) - 1) << (j_lo - 1);
            let mut sum = r.zero();
            for m in 0u64..(1u64 << n) {
                let repeats = !(m ^ (m >> 1));
                if repeats & window != 0 {
                    continue; // some junction in the window repeats
                }
                let w = Word::from_bits(m as u128, n).expect("n <= 30");
                let mut d = r.one();
                for (_, len) in w.blocks() {
                    d = r.mul(&d, &table[len + 1]);
                }
                sum = r.add(&sum, &d);
            }
            sum
        }
        GapMethod::Dp => {
            // states: current alternating run length; the first letter's two
            // choices contribute a global factor 2 since dimensions only
            // depend on the run structure
            let n = n as usize;
            let mut state: Vec<Real> = vec![r.zero(); n + 2];
            state[1] = r.one();
            for j in 1..n {
                let mut next: Vec<Real> = vec![r.zero(); n + 2];
                let in_window = (j as u32) >= j_lo && (j as u32) <= j_hi;
                for (run, weight) in state.iter().enumerate() {
                    if weight.is_zero() {
                        continue;
                    }
                    // alternate: extend the run
                    next[run + 1] = r.add(&next[run + 1], weight);
                    // repeat: close the block, forbidden inside the window
                    if !in_window {
                        let closed = r.mul(weight, &table[run + 1]);
                        next[1] = r.add(&next[1], &closed);
                    }
                }
                state = next;
            }
            let mut sum = r.zero();
            for (run, weight) in state.iter().enumerate() {
                if !weight.is_zero() {
                    sum = r.add(&sum, &r.mul(weight, &table[run + 1]));
                }
            }
            r.mul(&r.two(), &sum)
        }
    };

    Ok(r.div(&sum, &ctx.qdim_level(n as u64)))
}
