//! Closed-form belief entropies. All logarithms are base 2.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::frame::{FocalElement, Frame, MassFunction};
use crate::numeric::{log2_pow_gap, neg_sum, xlog2x};

/// Largest focal element the fractal transform will expand into its power set.
pub const MAX_FRACTAL_CARDINALITY: u32 = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Measure {
    Shannon,
    Deng,
    Fb,
    Tfb,
}

impl Measure {
    pub const ALL: [Measure; 4] = [Measure::Shannon, Measure::Deng, Measure::Fb, Measure::Tfb];

    pub fn name(self) -> &'static str {
        match self {
            Measure::Shannon => "shannon",
            Measure::Deng => "deng",
            Measure::Fb => "fb",
            Measure::Tfb => "tfb",
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Measure {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "shannon" => Ok(Measure::Shannon),
            "deng" => Ok(Measure::Deng),
            "fb" => Ok(Measure::Fb),
            "tfb" => Ok(Measure::Tfb),
            other => Err(format!("unknown measure {other:?} (expected shannon, deng, fb or tfb)")),
        }
    }
}

/// One measure evaluated on one mass function.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntropyReport {
    pub measure: Measure,
    pub value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<u64>,
    pub bpa_digest: String,
}

impl EntropyReport {
    /// Evaluate `measure` on `m`. `k` must be given for TFB and is ignored
    /// otherwise.
    pub fn evaluate(m: &MassFunction, measure: Measure, k: Option<u64>) -> Result<Self> {
        let (value, k) = match measure {
            Measure::Shannon => (shannon_of_masses(m), None),
            Measure::Deng => (deng_entropy(m), None),
            Measure::Fb => (fb_entropy(m)?, None),
            Measure::Tfb => {
                let k = k.ok_or(Error::InvalidOrder(0))?;
                (tfb_entropy(m, k)?, Some(k))
            }
        };
        Ok(Self { measure, value, k, bpa_digest: m.digest() })
    }
}

/// Shannon entropy of a probability vector.
pub fn shannon(p: &[f64]) -> Result<f64> {
    if p.is_empty() {
        return Err(Error::InvalidDistribution("empty distribution".into()));
    }
    let mut total = 0.0;
    for &x in p {
        if !x.is_finite() || x < 0.0 {
            return Err(Error::InvalidDistribution(format!("probability {x} outside [0, 1]")));
        }
        total += x;
    }
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidDistribution(format!("probabilities sum to {total}")));
    }
    Ok(neg_sum(p.iter().map(|&x| xlog2x(x))))
}

/// Shannon entropy of the focal masses read as a flat distribution, ignoring
/// which subsets carry them. Equals the usual Shannon entropy when `m` is
/// Bayesian.
pub fn shannon_of_masses(m: &MassFunction) -> f64 {
    neg_sum(m.focal().map(|(_, w)| xlog2x(w)))
}

/// The fractal (pignistic-like) redistribution of a mass function onto the
/// whole power set.
#[derive(Debug, Clone, PartialEq)]
pub struct FractalMass {
    frame: Frame,
    values: BTreeMap<FocalElement, f64>,
}

impl FractalMass {
    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    /// `m_F(f)`; zero for subsets no focal element covers.
    pub fn get(&self, f: FocalElement) -> f64 {
        self.values.get(&f).copied().unwrap_or(0.0)
    }

    /// Nonzero values in ascending bitmask order.
    pub fn iter(&self) -> impl Iterator<Item = (FocalElement, f64)> + '_ {
        self.values.iter().map(|(&f, &v)| (f, v))
    }

    pub fn total(&self) -> f64 {
        self.values.values().sum()
    }
}

/// `m_F(F) = Σ_{G ⊇ F} m(G) / (2^|G| − 1)`.
pub fn fractal_transform(m: &MassFunction) -> Result<FractalMass> {
    let mut values: BTreeMap<FocalElement, f64> = BTreeMap::new();
    for (g, mass) in m.focal() {
        let card = g.cardinality();
        if card > MAX_FRACTAL_CARDINALITY {
            return Err(Error::FrameTooLarge(card as usize));
        }
        let share = mass / ((1u64 << card) - 1) as f64;
        for f in g.subsets() {
            *values.entry(f).or_insert(0.0) += share;
        }
    }
    Ok(FractalMass { frame: m.frame().clone(), values })
}

/// Shannon entropy of the fractal transform.
pub fn fb_entropy(m: &MassFunction) -> Result<f64> {
    let mf = fractal_transform(m)?;
    Ok(neg_sum(mf.iter().map(|(_, v)| xlog2x(v))))
}

/// `−Σ m(F) log2(m(F) / (2^|F| − 1))`.
pub fn deng_entropy(m: &MassFunction) -> f64 {
    m.focal().map(|(f, w)| w * (log2_pow_gap(1, f.cardinality()) - w.log2())).sum()
}

/// k-order TFB entropy, `−Σ m(F) log2(m(F) / ((k+1)^|F| − k^|F|))`.
pub fn tfb_entropy(m: &MassFunction, k: u64) -> Result<f64> {
    if k == 0 {
        return Err(Error::InvalidOrder(k));
    }
    Ok(m.focal().map(|(f, w)| w * (log2_pow_gap(k, f.cardinality()) - w.log2())).sum())
}

/// TFB entropy of the vacuous BPA on an `n`-element frame:
/// `log2((k+1)^n − k^n)`.
pub fn tfb_vacuous(n: u32, k: u64) -> Result<f64> {
    if k == 0 {
        return Err(Error::InvalidOrder(k));
    }
    if n == 0 {
        return Err(Error::EmptyFrame);
    }
    Ok(log2_pow_gap(k, n))
}
