//! Configurable-precision real arithmetic used by every numeric module.
//!
//! A thin layer over binary arbitrary-precision floats: a [`RealCtx`] pins
//! the working precision in significand bits (default 128) and a fixed
//! round-to-even mode, so that call sites never pass precision around
//! explicitly. Inequality checks in the verification code always go through
//! an explicit margin, since the strict inequalities being checked must be
//! distinguishable from boundary cases.

use astro_float::{BigFloat, Consts, Radix, RoundingMode, Sign};
use num_bigint::BigUint;

pub type Real = BigFloat;

/// Default significand precision in bits.
pub const DEFAULT_PREC: usize = 128;

/// Default margin for strict-inequality verdicts.
pub const DEFAULT_MARGIN: f64 = 1e-25;

const RM: RoundingMode = RoundingMode::ToEven;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealCtx {
    prec: usize,
}

impl Default for RealCtx {
    fn default() -> Self {
        Self::new(DEFAULT_PREC)
    }
}

impl RealCtx {
    pub fn new(prec: usize) -> Self {
        assert!(prec >= 64, "precision below 64 bits is not supported");
        RealCtx { prec }
    }

    pub fn prec(&self) -> usize {
        self.prec
    }

    pub fn zero(&self) -> Real {
        BigFloat::from_u8(0, self.prec)
    }

    pub fn one(&self) -> Real {
        BigFloat::from_u8(1, self.prec)
    }

    pub fn two(&self) -> Real {
        BigFloat::from_u8(2, self.prec)
    }

    pub fn int(&self, v: i64) -> Real {
        BigFloat::from_i64(v, self.prec)
    }

    pub fn uint(&self, v: u64) -> Real {
        BigFloat::from_u64(v, self.prec)
    }

    pub fn from_f64(&self, v: f64) -> Real {
        BigFloat::from_f64(v, self.prec)
    }

    pub fn from_biguint(&self, v: &BigUint) -> Real {
        // digits in base 2^32, least significant first
        let mut acc = self.zero();
        let scale = BigFloat::from_u64(1u64 << 32, self.prec);
        for d in v.to_u32_digits().iter().rev() {
            acc = acc.mul(&scale, self.prec, RM);
            acc = acc.add(&BigFloat::from_u32(*d, self.prec), self.prec, RM);
        }
        acc
    }

    /// Parses a decimal literal at full working precision. Strict: the
    /// whole string must be a plain decimal with optional sign and exponent.
    pub fn parse(&self, s: &str) -> Option<Real> {
        if !valid_decimal(s) {
            return None;
        }
        let mut cc = Consts::new().ok()?;
        let v = BigFloat::parse(s, Radix::Dec, self.prec, RM, &mut cc);
        if v.is_nan() {
            None
        } else {
            Some(v)
        }
    }

    pub fn add(&self, a: &Real, b: &Real) -> Real {
        a.add(b, self.prec, RM)
    }

    pub fn sub(&self, a: &Real, b: &Real) -> Real {
        a.sub(b, self.prec, RM)
    }

    pub fn mul(&self, a: &Real, b: &Real) -> Real {
        a.mul(b, self.prec, RM)
    }

    pub fn div(&self, a: &Real, b: &Real) -> Real {
        a.div(b, self.prec, RM)
    }

    pub fn recip(&self, a: &Real) -> Real {
        a.reciprocal(self.prec, RM)
    }

    pub fn sqrt(&self, a: &Real) -> Real {
        a.sqrt(self.prec, RM)
    }

    pub fn sqrt2(&self) -> Real {
        self.sqrt(&self.two())
    }

    pub fn powi(&self, a: &Real, n: usize) -> Real {
        a.powi(n, self.prec, RM)
    }

    /// Integer power with negative exponents allowed.
    pub fn pow_int(&self, a: &Real, n: i64) -> Real {
        if n >= 0 {
            self.powi(a, n as usize)
        } else {
            self.recip(&self.powi(a, (-n) as usize))
        }
    }

    /// Exact value `2^-k`.
    pub fn pow2_neg(&self, k: u32) -> Real {
        self.recip(&self.powi(&self.two(), k as usize))
    }

    pub fn neg(&self, a: &Real) -> Real {
        a.neg()
    }

    pub fn abs(&self, a: &Real) -> Real {
        a.abs()
    }

    pub fn abs_diff(&self, a: &Real, b: &Real) -> Real {
        self.sub(a, b).abs()
    }

    /// Relative difference `|a-b| / max(|a|,|b|,1e-300)`.
    pub fn rel_diff(&self, a: &Real, b: &Real) -> Real {
        let d = self.abs_diff(a, b);
        let m = a.abs().max(&b.abs()).max(&self.from_f64(1e-300));
        self.div(&d, &m)
    }

    pub fn cmp(&self, a: &Real, b: &Real) -> std::cmp::Ordering {
        let c = a.cmp(b).expect("NaN in real comparison");
        c.cmp(&0)
    }

    pub fn lt(&self, a: &Real, b: &Real) -> bool {
        self.cmp(a, b) == std::cmp::Ordering::Less
    }

    pub fn le(&self, a: &Real, b: &Real) -> bool {
        self.cmp(a, b) != std::cmp::Ordering::Greater
    }

    pub fn gt(&self, a: &Real, b: &Real) -> bool {
        self.cmp(a, b) == std::cmp::Ordering::Greater
    }

    pub fn ge(&self, a: &Real, b: &Real) -> bool {
        self.cmp(a, b) != std::cmp::Ordering::Less
    }

    pub fn max(&self, a: &Real, b: &Real) -> Real {
        a.max(b)
    }

    pub fn min(&self, a: &Real, b: &Real) -> Real {
        a.min(b)
    }

    /// Nearest `f64`, with graceful under/overflow to `0`/`inf`.
    pub fn to_f64(&self, a: &Real) -> f64 {
        if a.is_zero() {
            return 0.0;
        }
        if a.is_inf_pos() {
            return f64::INFINITY;
        }
        if a.is_inf_neg() {
            return f64::NEG_INFINITY;
        }
        let Some((words, _n, sign, exp, _)) = a.as_raw_parts() else {
            return f64::NAN;
        };
        // value = 0.mantissa * 2^exp, mantissa normalized, words little-endian
        let top = words.last().copied().unwrap_or(0) as f64;
        let next = if words.len() >= 2 {
            words[words.len() - 2] as f64
        } else {
            0.0
        };
        let e = exp as f64;
        let mag = top * (e - 64.0).exp2() + next * (e - 128.0).exp2();
        if sign == Sign::Neg {
            -mag
        } else {
            mag
        }
    }
}

fn valid_decimal(s: &str) -> bool {
    let s = s.strip_prefix(['+', '-']).unwrap_or(s);
    let (mantissa, exp) = match s.split_once(['e', 'E']) {
        Some((m, e)) => (m, Some(e)),
        None => (s, None),
    };
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((i, f)) => (i, Some(f)),
        None => (mantissa, None),
    };
    let digits = |t: &str| !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit());
    let mantissa_ok = match frac_part {
        Some(f) => digits(int_part) && digits(f),
        None => digits(int_part),
    };
    let exp_ok = match exp {
        Some(e) => {
            let e = e.strip_prefix(['+', '-']).unwrap_or(e);
            digits(e)
        }
        None => true,
    };
    mantissa_ok && exp_ok
}

/// Formats `x` with `sig` significant decimal digits in scientific notation.
/// Deterministic for a given value, used for reproducible CSV/JSON output.
pub fn format_sig(x: &Real, sig: usize) -> String {
    assert!(sig >= 1);
    if x.is_zero() {
        return "0".into();
    }
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_inf_pos() {
        return "inf".into();
    }
    if x.is_inf_neg() {
        return "-inf".into();
    }
    let mut cc = Consts::new().expect("constants cache");
    let (sign, mut digits, mut exp10) = x
        .convert_to_radix(Radix::Dec, RM, &mut cc)
        .expect("finite value converts");
    // round the digit string to `sig` digits, half-up
    if digits.len() > sig {
        let round_up = digits[sig] >= 5;
        digits.truncate(sig);
        if round_up {
            let mut i = sig;
            loop {
                if i == 0 {
                    digits.insert(0, 1);
                    digits.truncate(sig);
                    exp10 += 1;
                    break;
                }
                i -= 1;
                if digits[i] == 9 {
                    digits[i] = 0;
                } else {
                    digits[i] += 1;
                    break;
                }
            }
        }
    }
    while digits.len() < sig {
        digits.push(0);
    }
    let mut s = String::new();
    if sign == Sign::Neg {
        s.push('-');
    }
    s.push((b'0' + digits[0]) as char);
    if sig > 1 {
        s.push('.');
        for d in &digits[1..] {
            s.push((b'0' + d) as char);
        }
    }
    // convert_to_radix yields value = 0.d1d2... * 10^exp10
    s.push('e');
    let e = exp10 as i64 - 1;
    if e >= 0 {
        s.push('+');
    }
    s.push_str(&e.to_string());
    s
}
