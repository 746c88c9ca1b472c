//! Integer power gaps `(b+1)^a − b^a` and their base-2 logarithms.

use crate::error::{Error, Result};

/// Largest value treated as exact (63-bit signed range).
const EXACT_LIMIT: u64 = i64::MAX as u64;

/// `(base+1)^exp − base^exp` when `(base+1)^exp` fits in 63 bits.
pub fn pow_gap(base: u64, exp: u32) -> Result<u64> {
    let overflow = || Error::Overflow(format!("({}+1)^{exp} - {base}^{exp}", base));
    let hi = base.checked_add(1).and_then(|b| b.checked_pow(exp)).filter(|&v| v <= EXACT_LIMIT).ok_or_else(overflow)?;
    let lo = base.pow(exp);
    Ok(hi - lo)
}

/// `log2((base+1)^exp − base^exp)`; exact integer path when it fits, otherwise
/// `exp·log2(base+1) + log2(1 − (base/(base+1))^exp)` with the tail evaluated
/// through `expm1`/`ln_1p`.
pub fn log2_pow_gap(base: u64, exp: u32) -> f64 {
    if exp == 0 {
        return f64::NEG_INFINITY;
    }
    if let Ok(v) = pow_gap(base, exp) {
        return (v as f64).log2();
    }
    let b1 = base as f64 + 1.0;
    let a = exp as f64;
    // ln((base/(base+1))^exp) = exp·ln(1 − 1/(base+1))
    let ln_ratio_pow = a * (-1.0 / b1).ln_1p();
    let one_minus = -ln_ratio_pow.exp_m1();
    a * b1.log2() + one_minus.log2()
}

/// `x·log2(x)` with `0·log 0 = 0`.
pub fn xlog2x(x: f64) -> f64 {
    if x > 0.0 {
        x * x.log2()
    } else {
        0.0
    }
}

/// `−Σ terms`, returning `+0.0` rather than `−0.0` for an all-zero sum.
pub fn neg_sum(terms: impl Iterator<Item = f64>) -> f64 {
    0.0 - terms.sum::<f64>()
}
