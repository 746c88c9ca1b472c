//! Higher-order information volume: the maximum k-order TFB entropy of an
//! n-element frame, `log2((k+2)^n − (k+1)^n)`, and the BPA attaining it.

use crate::error::{Error, Result};
use crate::frame::{Frame, MassFunction};
use crate::numeric::{log2_pow_gap, pow_gap};

/// Largest frame for which `max_tfb_bpa` enumerates the power set.
pub const MAX_EXPLICIT_ELEMENTS: usize = 20;

/// Largest frame accepted by the binomial identity check.
pub const MAX_BINOMIAL_ELEMENTS: u32 = 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct VolumeQuery {
    n: u32,
    k: u64,
}

impl VolumeQuery {
    pub fn new(n: u32, k: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyFrame);
        }
        if k == 0 {
            return Err(Error::InvalidOrder(k));
        }
        Ok(Self { n, k })
    }

    pub fn n(self) -> u32 {
        self.n
    }

    pub fn k(self) -> u64 {
        self.k
    }

    /// Information volume in bits.
    pub fn value(self) -> f64 {
        log2_pow_gap(self.k + 1, self.n)
    }

    /// The integer `(k+2)^n − (k+1)^n` when it fits in 63 bits.
    pub fn argument(self) -> Option<u64> {
        pow_gap(self.k + 1, self.n).ok()
    }
}

/// `log2((k+2)^n − (k+1)^n)`.
///
/// # Panics
///
/// If `n` or `k` is zero; use [`VolumeQuery::new`] for fallible construction.
pub fn hoivmf_value(n: u32, k: u64) -> f64 {
    VolumeQuery::new(n, k).expect("n and k must be positive").value()
}

/// Same quantity through `Σ_a C(n,a)·((k+1)^a − k^a)`, evaluated in exact
/// 128-bit integers.
pub fn hoivmf_via_binomial(n: u32, k: u64) -> Result<f64> {
    VolumeQuery::new(n, k)?;
    if n > MAX_BINOMIAL_ELEMENTS {
        return Err(Error::FrameTooLarge(n as usize));
    }
    let overflow = || Error::Overflow(format!("binomial sum for n={n}, k={k}"));
    let (hi_base, lo_base) = (k as u128 + 1, k as u128);
    let mut total: u128 = 0;
    let mut binom: u128 = 1;
    for a in 1..=n {
        binom = binom * (n - a + 1) as u128 / a as u128;
        let hi = hi_base.checked_pow(a).ok_or_else(overflow)?;
        let lo = lo_base.checked_pow(a).ok_or_else(overflow)?;
        let term = binom.checked_mul(hi - lo).ok_or_else(overflow)?;
        total = total.checked_add(term).ok_or_else(overflow)?;
    }
    Ok(log2_u128(total))
}

fn log2_u128(x: u128) -> f64 {
    // keep 64 significant bits so the f64 conversion rounds only once
    let shift = (128 - x.leading_zeros()).saturating_sub(64);
    ((x >> shift) as u64 as f64).log2() + shift as f64
}

/// The BPA whose k-order TFB entropy equals the information volume:
/// `m(F) = ((k+1)^|F| − k^|F|) / ((k+2)^n − (k+1)^n)` for every nonempty `F`.
pub fn max_tfb_bpa(frame: &Frame, k: u64) -> Result<MassFunction> {
    let n = frame.len();
    if n > MAX_EXPLICIT_ELEMENTS {
        return Err(Error::FrameTooLarge(n));
    }
    let q = VolumeQuery::new(n as u32, k)?;
    let log_total = q.value();
    let exact_total = q.argument();
    let entries = frame.theta().subsets().map(|f| {
        let card = f.cardinality();
        let mass = match (pow_gap(k, card), exact_total) {
            (Ok(num), Some(den)) => num as f64 / den as f64,
            _ => (log2_pow_gap(k, card) - log_total).exp2(),
        };
        (f.bits(), mass)
    });
    MassFunction::new(frame.clone(), entries)
}
