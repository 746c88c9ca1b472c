//! Brute-force checks: simplex grid sweeps over two-element frames, seeded
//! random BPAs, and a cross-check report tying the closed forms to the split
//! tree.

use std::io::Write;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::frame::{FocalElement, Frame, MassFunction};
use crate::measures::{deng_entropy, fb_entropy, fractal_transform, shannon_of_masses, tfb_entropy, tfb_vacuous};
use crate::split::{csv_writer, split_tree_entropy};

/// Largest frame `random_bpa` will populate.
pub const MAX_RANDOM_ELEMENTS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridMeasure {
    /// Shannon entropy of `(m(A), m(B), m(AB))` as a distribution.
    Shannon,
    Deng,
    Fb,
    Tfb(u64),
}

impl GridMeasure {
    pub fn evaluate(self, m: &MassFunction) -> Result<f64> {
        match self {
            GridMeasure::Shannon => Ok(shannon_of_masses(m)),
            GridMeasure::Deng => Ok(deng_entropy(m)),
            GridMeasure::Fb => fb_entropy(m),
            GridMeasure::Tfb(k) => tfb_entropy(m, k),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub frame: Frame,
    pub step: f64,
    pub measure: GridMeasure,
}

impl GridSpec {
    pub fn new(frame: Frame, step: f64, measure: GridMeasure) -> Result<Self> {
        let spec = Self { frame, step, measure };
        spec.divisions()?;
        Ok(spec)
    }

    /// `1/step` as an integer; fails unless the step divides 1 within 1e-12.
    fn divisions(&self) -> Result<u64> {
        let h = self.step;
        if !(h > 0.0 && h < 1.0) {
            return Err(Error::StepInvalid(h));
        }
        let n = (1.0 / h).round();
        if (n * h - 1.0).abs() > 1e-12 {
            return Err(Error::StepInvalid(h));
        }
        Ok(n as u64)
    }
}

/// One grid point: `(m(A), m(B), m(AB))` and the measure value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SurfacePoint {
    pub m_a: f64,
    pub m_b: f64,
    pub m_ab: f64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridResult {
    pub argmax: MassFunction,
    pub max_value: f64,
    /// Row-major over `(m(A), m(B))`.
    pub surface: Vec<SurfacePoint>,
}

impl GridResult {
    pub fn argmax_point(&self) -> SurfacePoint {
        *self.surface.iter().find(|p| p.value == self.max_value).expect("argmax is a surface point")
    }

    /// CSV with columns `mA,mB,mAB,value`.
    pub fn write_csv<W: Write>(&self, out: W, precision: usize) -> Result<()> {
        let io = |e: csv::Error| Error::MalformedDocument(format!("csv output: {e}"));
        let mut w = csv_writer(out);
        w.write_record(["mA", "mB", "mAB", "value"]).map_err(io)?;
        for p in &self.surface {
            w.write_record([
                format!("{:.*}", precision, p.m_a),
                format!("{:.*}", precision, p.m_b),
                format!("{:.*}", precision, p.m_ab),
                format!("{:.*}", precision, p.value),
            ])
            .map_err(io)?;
        }
        w.flush().map_err(|e| Error::MalformedDocument(format!("csv output: {e}")))?;
        Ok(())
    }
}

/// Exhaustive sweep of `m(A) = x, m(B) = y, m(AB) = 1 − x − y` over the
/// simplex grid. Ties go to the lexicographically smallest `(x, y)`.
pub fn grid_search_max(spec: &GridSpec) -> Result<GridResult> {
    if spec.frame.len() != 2 {
        return Err(Error::FrameTooLarge(spec.frame.len()));
    }
    let n = spec.divisions()?;
    let scale = n as f64;
    let mut surface = Vec::with_capacity(((n + 1) * (n + 2) / 2) as usize);
    let mut best: Option<(f64, MassFunction)> = None;
    for i in 0..=n {
        for j in 0..=(n - i) {
            let (x, y, z) = (i as f64 / scale, j as f64 / scale, (n - i - j) as f64 / scale);
            let m = MassFunction::new(spec.frame.clone(), [(0b01, x), (0b10, y), (0b11, z)])?;
            let value = spec.measure.evaluate(&m)?;
            surface.push(SurfacePoint { m_a: x, m_b: y, m_ab: z, value });
            if best.as_ref().is_none_or(|(v, _)| value > *v) {
                best = Some((value, m));
            }
        }
    }
    let (max_value, argmax) = best.expect("grid is nonempty");
    Ok(GridResult { argmax, max_value, surface })
}

/// Seeded BPA with positive mass on every nonempty subset, drawn uniformly
/// from the simplex by normalizing i.i.d. exponentials.
pub fn random_bpa(frame: &Frame, seed: u64) -> Result<MassFunction> {
    if frame.len() > MAX_RANDOM_ELEMENTS {
        return Err(Error::FrameTooLarge(frame.len()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let subsets: Vec<FocalElement> = frame.theta().subsets().collect();
    let draws: Vec<f64> = subsets.iter().map(|_| Exp1.sample(&mut rng)).collect();
    normalized(frame, subsets.into_iter().zip(draws))
}

/// Seeded BPA with mass only on singletons.
pub fn random_bayesian_bpa(frame: &Frame, seed: u64) -> Result<MassFunction> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let singletons: Vec<FocalElement> = (0..frame.len()).filter_map(|i| frame.singleton(i)).collect();
    let draws: Vec<f64> = singletons.iter().map(|_| Exp1.sample(&mut rng)).collect();
    normalized(frame, singletons.into_iter().zip(draws))
}

fn normalized(frame: &Frame, draws: impl Iterator<Item = (FocalElement, f64)>) -> Result<MassFunction> {
    let draws: Vec<(FocalElement, f64)> = draws.collect();
    let total: f64 = draws.iter().map(|(_, w)| w).sum();
    MassFunction::new(frame.clone(), draws.into_iter().map(|(f, w)| (f.bits(), w / total)))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Default)]
pub struct CrossCheckReport {
    pub checks: Vec<CheckResult>,
}

impl CrossCheckReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    fn record(&mut self, name: impl Into<String>, residual: f64, tol: f64) {
        self.checks.push(CheckResult { name: name.into(), passed: residual <= tol, residual });
    }

    fn record_bool(&mut self, name: impl Into<String>, passed: bool, residual: f64) {
        self.checks.push(CheckResult { name: name.into(), passed, residual });
    }
}

/// Run every pairwise identity that applies to `m` for orders `1..=k_max`.
pub fn cross_check(m: &MassFunction, k_max: u64) -> CrossCheckReport {
    let mut report = CrossCheckReport::default();
    let mut tfb = Vec::new();
    for k in 1..=k_max {
        match tfb_entropy(m, k) {
            Ok(v) => tfb.push(v),
            Err(e) => {
                report.record_bool(format!("tfb k={k}: {e}"), false, f64::NAN);
                return report;
            }
        }
    }
    let deng = deng_entropy(m);

    if let Some(&t1) = tfb.first() {
        report.record("order-1 tfb equals deng", (t1 - deng).abs(), 1e-12);
    }

    for (i, &t) in tfb.iter().enumerate() {
        let k = i as u64 + 1;
        match split_tree_entropy(m, k) {
            Ok(s) => report.record(format!("tfb k={k} equals split tree"), (t - s).abs(), 1e-9),
            Err(Error::TreeTooLarge { .. }) => {}
            Err(e) => report.record_bool(format!("split tree k={k}: {e}"), false, f64::NAN),
        }
    }

    let multi = m.focal().any(|(f, _)| !f.is_singleton());
    for (i, w) in tfb.windows(2).enumerate() {
        let k = i + 1;
        if multi {
            report.record_bool(format!("tfb k={} > k={k}", k + 1), w[1] > w[0], w[1] - w[0]);
        } else {
            report.record(format!("tfb k={} = k={k}", k + 1), (w[1] - w[0]).abs(), 1e-12);
        }
    }

    if !multi {
        let h = shannon_of_masses(m);
        report.record("deng degenerates to shannon", (deng - h).abs(), 1e-12);
        if let Ok(fb) = fb_entropy(m) {
            report.record("fb degenerates to shannon", (fb - h).abs(), 1e-12);
        }
        for (i, &t) in tfb.iter().enumerate() {
            report.record(format!("tfb k={} degenerates to shannon", i + 1), (t - h).abs(), 1e-12);
        }
    }

    if let Ok(mf) = fractal_transform(m) {
        report.record("fractal transform conserves mass", (mf.total() - m.total()).abs(), 1e-12);
        let bound = crate::numeric::log2_pow_gap(1, m.frame().len() as u32);
        if let Ok(fb) = fb_entropy(m) {
            report.record_bool("fb within log2(2^n - 1)", fb <= bound + 1e-12, fb - bound);
        }
    }

    if m.is_vacuous() {
        let n = m.frame().len() as u32;
        for (i, &t) in tfb.iter().enumerate() {
            let k = i as u64 + 1;
            let expected = tfb_vacuous(n, k).expect("positive n and k");
            report.record(format!("vacuous tfb k={k} closed form"), (t - expected).abs(), 1e-12);
        }
    }

    report
}
