//! Eigenvalues of small Hermitian matrices at working precision.
//!
//! A cyclic Jacobi iteration on real symmetric matrices; complex Hermitian
//! input goes through the standard real embedding `[[X, -Y], [Y, X]]`, which
//! doubles every eigenvalue. Only eigenvalues are needed, never vectors.

use crate::real::{Real, RealCtx};

/// Eigenvalues of a real symmetric matrix, ascending.
pub fn symmetric_eigenvalues(ctx: &RealCtx, mut a: Vec<Vec<Real>>) -> Vec<Real> {
    let n = a.len();
    debug_assert!(a.iter().all(|row| row.len() == n));
    if n == 0 {
        return vec![];
    }
    if n == 1 {
        return vec![a[0][0].clone()];
    }

    // stop once the off-diagonal mass is negligible against the diagonal scale
    let mut scale = ctx.zero();
    for (i, row) in a.iter().enumerate() {
        scale = ctx.add(&scale, &row[i].abs());
    }
    scale = ctx.max(&scale, &ctx.one());
    let guard = 2u32.min(ctx.prec() as u32);
    let threshold = {
        let eps = ctx.pow2_neg((ctx.prec() as u32).saturating_sub(guard).max(16));
        ctx.mul(&scale, &eps)
    };

    for _sweep in 0..100 {
        let mut off = ctx.zero();
        for p in 0..n {
            for q in (p + 1)..n {
                off = ctx.add(&off, &a[p][q].abs());
            }
        }
        if ctx.le(&off, &threshold) {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p][q].clone();
                if ctx.le(&apq.abs(), &ctx.mul(&threshold, &ctx.from_f64(1e-6))) {
                    continue;
                }
                // rotation parameters for the 2x2 block
                let diff = ctx.sub(&a[q][q], &a[p][p]);
                let tau = ctx.div(&diff, &ctx.mul(&ctx.two(), &apq));
                let hyp = ctx.sqrt(&ctx.add(&ctx.mul(&tau, &tau), &ctx.one()));
                let t = if ctx.ge(&tau, &ctx.zero()) {
                    ctx.recip(&ctx.add(&tau, &hyp))
                } else {
                    ctx.neg(&ctx.recip(&ctx.sub(&hyp, &tau)))
                };
                let c = ctx.recip(&ctx.sqrt(&ctx.add(&ctx.mul(&t, &t), &ctx.one())));
                let s = ctx.mul(&t, &c);

                for k in 0..n {
                    let akp = a[k][p].clone();
                    let akq = a[k][q].clone();
                    a[k][p] = ctx.sub(&ctx.mul(&c, &akp), &ctx.mul(&s, &akq));
                    a[k][q] = ctx.add(&ctx.mul(&s, &akp), &ctx.mul(&c, &akq));
                }
                for k in 0..n {
                    let apk = a[p][k].clone();
                    let aqk = a[q][k].clone();
                    a[p][k] = ctx.sub(&ctx.mul(&c, &apk), &ctx.mul(&s, &aqk));
                    a[q][k] = ctx.add(&ctx.mul(&s, &apk), &ctx.mul(&c, &aqk));
                }
            }
        }
    }

    let mut eigs: Vec<Real> = (0..n).map(|i| a[i][i].clone()).collect();
    eigs.sort_by(|x, y| ctx.cmp(x, y));
    eigs
}

/// Eigenvalues of a complex Hermitian matrix given as `(re, im)` entry pairs,
/// ascending. Uses the doubling real embedding and keeps one copy of each
/// duplicated eigenvalue.
pub fn hermitian_eigenvalues(ctx: &RealCtx, h: &[Vec<(Real, Real)>]) -> Vec<Real> {
    let n = h.len();
    let mut m = vec![vec![ctx.zero(); 2 * n]; 2 * n];
    for i in 0..n {
        for j in 0..n {
            let (re, im) = &h[i][j];
            m[i][j] = re.clone();
            m[n + i][n + j] = re.clone();
            m[i][n + j] = ctx.neg(im);
            m[n + i][j] = im.clone();
        }
    }
    let all = symmetric_eigenvalues(ctx, m);
    // sorted eigenvalues come in duplicated pairs
    all.into_iter().step_by(2).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(ctx: &RealCtx, a: &Real, b: f64, tol: f64) {
        let d = ctx.to_f64(&ctx.abs_diff(a, &ctx.from_f64(b)));
        assert!(d < tol, "expected {b}, got {} (diff {d})", ctx.to_f64(a));
    }

    #[test]
    fn real_symmetric_2x2() {
        let ctx = RealCtx::new(128);
        let a = vec![
            vec![ctx.int(2), ctx.int(1)],
            vec![ctx.int(1), ctx.int(2)],
        ];
        let e = symmetric_eigenvalues(&ctx, a);
        assert_close(&ctx, &e[0], 1.0, 1e-30);
        assert_close(&ctx, &e[1], 3.0, 1e-30);
    }

    #[test]
    fn identity_and_diagonal() {
        let ctx = RealCtx::new(128);
        let a = vec![
            vec![ctx.int(3), ctx.zero(), ctx.zero()],
            vec![ctx.zero(), ctx.int(1), ctx.zero()],
            vec![ctx.zero(), ctx.zero(), ctx.int(2)],
        ];
        let e = symmetric_eigenvalues(&ctx, a);
        assert_close(&ctx, &e[0], 1.0, 1e-35);
        assert_close(&ctx, &e[1], 2.0, 1e-35);
        assert_close(&ctx, &e[2], 3.0, 1e-35);
    }

    #[test]
    fn hermitian_with_imaginary_part() {
        // [[2, i], [-i, 2]] has eigenvalues 1 and 3
        let ctx = RealCtx::new(128);
        let h = vec![
            vec![(ctx.int(2), ctx.zero()), (ctx.zero(), ctx.one())],
            vec![(ctx.zero(), ctx.neg(&ctx.one())), (ctx.int(2), ctx.zero())],
        ];
        let e = hermitian_eigenvalues(&ctx, &h);
        assert_eq!(e.len(), 2);
        assert_close(&ctx, &e[0], 1.0, 1e-30);
        assert_close(&ctx, &e[1], 3.0, 1e-30);
    }

    #[test]
    fn random_matrix_trace_invariant() {
        let ctx = RealCtx::new(128);
        // fixed pseudo-random symmetric 5x5
        let mut vals = Vec::new();
        let mut x = 1234567u64;
        for _ in 0..25 {
            x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            vals.push((x >> 33) as f64 / (1u64 << 31) as f64 - 0.5);
        }
        let mut a = vec![vec![ctx.zero(); 5]; 5];
        for i in 0..5 {
            for j in i..5 {
                let v = ctx.from_f64(vals[i * 5 + j]);
                a[i][j] = v.clone();
                a[j][i] = v;
            }
        }
        let mut trace = ctx.zero();
        for i in 0..5 {
            trace = ctx.add(&trace, &a[i][i]);
        }
        let eigs = symmetric_eigenvalues(&ctx, a);
        let mut sum = ctx.zero();
        for e in &eigs {
            sum = ctx.add(&sum, e);
        }
        let d = ctx.to_f64(&ctx.abs_diff(&trace, &sum));
        assert!(d < 1e-33, "trace drift {d}");
    }
}
