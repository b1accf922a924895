//! q-numbers, the deformation parameters `q` and `κ`, quantum dimensions,
//! and the spectral data of the Woronowicz matrix `Q_u` derived from an
//! input parameter matrix `F`.
//!
//! The two defining quadratics are
//! `q + 1/q = dim_q(u)` with `q ∈ (0,1]`, and
//! `κ + 1/κ = √2 (q + 1/q)` with `κ ∈ (0,1)`.

use crate::eigen::hermitian_eigenvalues;
use crate::fusion::Word;
use crate::real::{format_sig, Real, RealCtx, DEFAULT_MARGIN};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum QArithError {
    #[error("q = {0} out of range; q must lie in (0, 1]")]
    QOutOfRange(String),
    #[error("matrix must be square with N >= 2, got {0}x{1}")]
    BadMatrixShape(usize, usize),
    #[error("matrix F is singular (smallest eigenvalue of F*F is not positive)")]
    SingularMatrix,
}

/// Outcome of a strict-inequality check carried out with an explicit margin.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// The strict inequality holds with room to spare.
    Holds,
    /// The two sides agree within the margin (e.g. `qρ = 1` for N = 2).
    Boundary,
    /// The inequality fails beyond the margin.
    Fails,
}

/// Classifies `value < bound` with the given margin.
pub fn strict_less(ctx: &RealCtx, value: &Real, bound: &Real, margin: &Real) -> Verdict {
    if ctx.le(&ctx.abs_diff(value, bound), margin) {
        Verdict::Boundary
    } else if ctx.lt(value, bound) {
        Verdict::Holds
    } else {
        Verdict::Fails
    }
}

/// The numeric environment: `q`, `κ`, `dim_q(u)`, optional spectral radius
/// data, and the working precision.
#[derive(Clone, Debug)]
pub struct QContext {
    ctx: RealCtx,
    q: Real,
    kappa: Real,
    dim_u: Real,
    rho: Option<Real>,
}

/// Eigenvalues of the normalized Woronowicz matrix `Q_u`.
#[derive(Clone, Debug)]
pub struct QSpectrum {
    pub eigenvalues: Vec<Real>,
    pub n: usize,
}

impl QSpectrum {
    /// Operator norm of `Q_u` (largest eigenvalue; all are positive).
    pub fn norm(&self, ctx: &RealCtx) -> Real {
        self.eigenvalues
            .iter()
            .fold(self.eigenvalues[0].clone(), |m, e| ctx.max(&m, e))
    }

    /// Operator norm of `Q_u^{-1}`, i.e. the reciprocal smallest eigenvalue.
    pub fn norm_inv(&self, ctx: &RealCtx) -> Real {
        let min = self
            .eigenvalues
            .iter()
            .fold(self.eigenvalues[0].clone(), |m, e| ctx.min(&m, e));
        ctx.recip(&min)
    }

    pub fn trace(&self, ctx: &RealCtx) -> Real {
        self.eigenvalues
            .iter()
            .fold(ctx.zero(), |s, e| ctx.add(&s, e))
    }

    pub fn trace_inv(&self, ctx: &RealCtx) -> Real {
        self.eigenvalues
            .iter()
            .fold(ctx.zero(), |s, e| ctx.add(&s, &ctx.recip(e)))
    }
}

/// The q-number `[n]_t = (t^{-n} - t^n) / (t^{-1} - t)`, with the limit
/// value `n` at `t = 1`.
pub fn q_number(ctx: &RealCtx, n: u64, t: &Real) -> Real {
    let one = ctx.one();
    if ctx.cmp(t, &one) == std::cmp::Ordering::Equal {
        return ctx.uint(n);
    }
    let tn = ctx.powi(t, n as usize);
    let num = ctx.sub(&ctx.recip(&tn), &tn);
    let den = ctx.sub(&ctx.recip(t), t);
    ctx.div(&num, &den)
}

/// Table of `[0]_t .. [n_max]_t` via the three-term recursion
/// `[n+1] = (t + 1/t)[n] - [n-1]`.
pub fn q_number_table(ctx: &RealCtx, n_max: usize, t: &Real) -> Vec<Real> {
    let mut out = Vec::with_capacity(n_max + 1);
    out.push(ctx.zero());
    if n_max == 0 {
        return out;
    }
    out.push(ctx.one());
    let s = ctx.add(t, &ctx.recip(t));
    for n in 1..n_max {
        let next = ctx.sub(&ctx.mul(&s, &out[n]), &out[n - 1]);
        out.push(next);
    }
    out
}

/// Root in (0,1] of `x + 1/x = d`, for `d >= 2`. Rounding may push the
/// discriminant of a boundary case (`d = 2`) slightly negative; it is
/// clamped to zero.
fn small_root(ctx: &RealCtx, d: &Real) -> Real {
    let four = ctx.int(4);
    let mut disc = ctx.sub(&ctx.mul(d, d), &four);
    if ctx.lt(&disc, &ctx.zero()) {
        disc = ctx.zero();
    }
    let r = ctx.div(&ctx.sub(d, &ctx.sqrt(&disc)), &ctx.two());
    ctx.min(&r, &ctx.one())
}

impl QContext {
    /// Builds the context from a deformation parameter `q ∈ (0, 1]`.
    pub fn from_q(q: Real, precision_bits: usize) -> Result<Self, QArithError> {
        let ctx = RealCtx::new(precision_bits);
        if q.is_nan() || ctx.le(&q, &ctx.zero()) || ctx.gt(&q, &ctx.one()) {
            return Err(QArithError::QOutOfRange(format_sig(&q, 20)));
        }
        let dim_u = ctx.add(&q, &ctx.recip(&q));
        let kappa = small_root(&ctx, &ctx.mul(&ctx.sqrt2(), &dim_u));
        Ok(QContext {
            ctx,
            q,
            kappa,
            dim_u,
            rho: None,
        })
    }

    pub fn from_q_f64(q: f64, precision_bits: usize) -> Result<Self, QArithError> {
        let ctx = RealCtx::new(precision_bits);
        Self::from_q(ctx.from_f64(q), precision_bits)
    }

    /// Builds the context from an invertible `N x N` matrix `F`, given as
    /// rows of `(re, im)` entries.
    ///
    /// The Woronowicz matrix is normalized as `Q_u = c F*F` with
    /// `c = sqrt(Tr((F*F)^{-1}) / Tr(F*F))`, the unique positive scalar
    /// balancing `Tr(Q_u) = Tr(Q_u^{-1})`. Then `dim_q(u) = Tr(Q_u)`,
    /// `q` solves `q + 1/q = dim_q(u)` and
    /// `ρ = max(‖Q_u‖, ‖Q_u^{-1}‖)`.
    pub fn from_matrix(
        f: &[Vec<(f64, f64)>],
        precision_bits: usize,
    ) -> Result<(Self, QSpectrum), QArithError> {
        let ctx = RealCtx::new(precision_bits);
        let n = f.len();
        if n < 2 || f.iter().any(|row| row.len() != n) {
            return Err(QArithError::BadMatrixShape(
                n,
                f.first().map_or(0, |r| r.len()),
            ));
        }
        // H = F*F (conjugate transpose times F), Hermitian positive semidefinite
        let entry = |i: usize, j: usize| -> (Real, Real) {
            (ctx.from_f64(f[i][j].0), ctx.from_f64(f[i][j].1))
        };
        let mut h = vec![vec![(ctx.zero(), ctx.zero()); n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut re = ctx.zero();
                let mut im = ctx.zero();
                for k in 0..n {
                    // conj(F[k][i]) * F[k][j]
                    let (a, b) = entry(k, i);
                    let (c, d) = entry(k, j);
                    re = ctx.add(&re, &ctx.add(&ctx.mul(&a, &c), &ctx.mul(&b, &d)));
                    im = ctx.add(&im, &ctx.sub(&ctx.mul(&a, &d), &ctx.mul(&b, &c)));
                }
                h[i][j] = (re, im);
            }
        }
        let raw = hermitian_eigenvalues(&ctx, &h);
        let max = raw.iter().fold(ctx.zero(), |m, e| ctx.max(&m, e));
        let floor = ctx.mul(&max, &ctx.from_f64(1e-30));
        if raw.iter().any(|e| ctx.le(e, &floor)) {
            return Err(QArithError::SingularMatrix);
        }
        let tr: Real = raw.iter().fold(ctx.zero(), |s, e| ctx.add(&s, e));
        let tr_inv: Real = raw
            .iter()
            .fold(ctx.zero(), |s, e| ctx.add(&s, &ctx.recip(e)));
        let c = ctx.sqrt(&ctx.div(&tr_inv, &tr));
        let eigenvalues: Vec<Real> = raw.iter().map(|e| ctx.mul(&c, e)).collect();
        let spectrum = QSpectrum { eigenvalues, n };
        let dim_u = spectrum.trace(&ctx);
        let q = small_root(&ctx, &dim_u);
        let kappa = small_root(&ctx, &ctx.mul(&ctx.sqrt2(), &dim_u));
        let rho = ctx.max(&spectrum.norm(&ctx), &spectrum.norm_inv(&ctx));
        Ok((
            QContext {
                ctx,
                q,
                kappa,
                dim_u,
                rho: Some(rho),
            },
            spectrum,
        ))
    }

    pub fn real(&self) -> &RealCtx {
        &self.ctx
    }

    pub fn precision_bits(&self) -> usize {
        self.ctx.prec()
    }

    pub fn q(&self) -> &Real {
        &self.q
    }

    pub fn kappa(&self) -> &Real {
        &self.kappa
    }

    /// `dim_q(u) = q + 1/q`.
    pub fn dim_u(&self) -> &Real {
        &self.dim_u
    }

    /// `max(‖Q_u‖, ‖Q_ū‖)`; present only when built from a matrix `F`.
    pub fn rho(&self) -> Option<&Real> {
        self.rho.as_ref()
    }

    pub fn q_f64(&self) -> f64 {
        self.ctx.to_f64(&self.q)
    }

    /// `[n]_q`.
    pub fn qnum(&self, n: u64) -> Real {
        q_number(&self.ctx, n, &self.q)
    }

    /// `[n]_κ`.
    pub fn qnum_kappa(&self, n: u64) -> Real {
        q_number(&self.ctx, n, &self.kappa)
    }

    /// Quantum dimension of an irreducible word: the product of
    /// `[b+1]_q` over its maximal alternating blocks.
    pub fn qdim_word(&self, x: &Word) -> Real {
        let mut out = self.ctx.one();
        for (_, len) in x.blocks() {
            out = self.ctx.mul(&out, &self.qnum(len as u64 + 1));
        }
        out
    }

    /// Total quantum dimension of the level set `I_n`, in closed form
    /// `√2^n [n+1]_κ`.
    pub fn qdim_level(&self, n: u64) -> Real {
        let pow = self.ctx.powi(&self.ctx.sqrt2(), n as usize);
        self.ctx.mul(&pow, &self.qnum_kappa(n + 1))
    }

    /// Sum of `qdim_word` over all `2^n` words of length `n`; the exhaustive
    /// counterpart of [`Self::qdim_level`].
    pub fn qdim_level_exhaustive(&self, n: usize) -> Real {
        let table = q_number_table(&self.ctx, n + 1, &self.q);
        let mut sum = self.ctx.zero();
        for w in Word::all_of_len(n) {
            let mut d = self.ctx.one();
            for (_, len) in w.blocks() {
                d = self.ctx.mul(&d, &table[len + 1]);
            }
            sum = self.ctx.add(&sum, &d);
        }
        sum
    }
}

/// One sampled word in a [`WoronowiczReport`].
#[derive(Clone, Debug)]
pub struct WordBoundCheck {
    pub word: Word,
    /// `dim_q(x) >= q^{-|x|}`.
    pub dim_lower_ok: bool,
    /// `ρ^{|x|} / dim_q(x) <= (qρ)^{|x|}` (only checked when ρ is known).
    pub norm_ratio_ok: bool,
    pub dim: Real,
}

/// Result of checking the spectral bounds tied to `Q_u`.
#[derive(Clone, Debug)]
pub struct WoronowiczReport {
    pub q_rho: Real,
    /// Verdict on the strict inequality `qρ < 1`; `Boundary` flags the
    /// `N = 2` family where `qρ = 1`.
    pub q_rho_verdict: Verdict,
    /// `Tr(Q_u) = Tr(Q_u^{-1})` discrepancy after normalization.
    pub trace_symmetry_error: Real,
    pub word_checks: Vec<WordBoundCheck>,
    pub margin: Real,
}

impl WoronowiczReport {
    pub fn all_words_ok(&self) -> bool {
        self.word_checks
            .iter()
            .all(|c| c.dim_lower_ok && c.norm_ratio_ok)
    }
}

/// Checks `qρ < 1` and the per-word bounds `dim_q(x) >= q^{-|x|}`,
/// `ρ^{|x|}/dim_q(x) <= (qρ)^{|x|}` on the sampled words.
pub fn verify_woronowicz_bounds(
    qctx: &QContext,
    spectrum: &QSpectrum,
    sample_words: &[Word],
    margin: Option<f64>,
) -> WoronowiczReport {
    let ctx = qctx.real();
    let margin = ctx.from_f64(margin.unwrap_or(DEFAULT_MARGIN));
    let rho = ctx.max(&spectrum.norm(ctx), &spectrum.norm_inv(ctx));
    let q_rho = ctx.mul(qctx.q(), &rho);
    let q_rho_verdict = strict_less(ctx, &q_rho, &ctx.one(), &margin);
    let trace_symmetry_error = ctx.abs_diff(&spectrum.trace(ctx), &spectrum.trace_inv(ctx));

    let word_checks = sample_words
        .iter()
        .map(|w| {
            let dim = qctx.qdim_word(w);
            let len = w.len() as i64;
            let q_pow = ctx.pow_int(qctx.q(), -len);
            let dim_lower_ok = ctx.ge(&ctx.add(&dim, &margin), &q_pow);
            let lhs = ctx.div(&ctx.pow_int(&rho, len), &dim);
            let rhs = ctx.pow_int(&q_rho, len);
            let norm_ratio_ok = ctx.le(&lhs, &ctx.add(&rhs, &margin));
            WordBoundCheck {
                word: *w,
                dim_lower_ok,
                norm_ratio_ok,
                dim,
            }
        })
        .collect();

    WoronowiczReport {
        q_rho,
        q_rho_verdict,
        trace_symmetry_error,
        word_checks,
        margin,
    }
}
