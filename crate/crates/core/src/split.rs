//! Explicit power-set splitting of mass functions.
//!
//! A split round replaces every multi-element leaf by all nonempty subsets of
//! it; singleton leaves carry over unchanged. Leaves are never merged, even
//! when several of them name the same subset.
//!
//! [`build_split_tree`] materializes those rounds with the original mass of
//! each focal element spread uniformly over its leaves, and
//! [`split_tree_entropy`] reads the Shannon entropy straight off the leaves.
//! Neither touches the closed-form leaf count, which makes the pair an
//! independent check on [`crate::measures::tfb_entropy`].
//!
//! [`deng_volume`] runs the older proportional scheme: each multi-element leaf
//! splits in the maximum-Deng-entropy proportions of its own power set, and
//! Deng entropy is re-evaluated after every round.

use std::collections::BTreeMap;
use std::io::Write;

use crate::error::{Error, Result};
use crate::frame::{FocalElement, Frame, MassFunction};
use crate::numeric::{log2_pow_gap, neg_sum, pow_gap, xlog2x};

/// Upper bound on materialized leaves.
pub const MAX_LEAVES: u64 = 10_000_000;

pub const DEFAULT_EPSILON: f64 = 1e-6;
pub const DEFAULT_MAX_ITER: usize = 100;

/// Number of leaves a focal element of cardinality `a` has after `k` rounds:
/// `(k+1)^a − k^a`.
pub fn leaf_count(a: u32, k: u64) -> Result<u64> {
    if k == 0 {
        return Err(Error::InvalidOrder(k));
    }
    if a == 0 {
        return Err(Error::Overflow("leaf count of the empty set".into()));
    }
    pow_gap(k, a)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LeafTerm {
    pub subset: FocalElement,
    pub mass: f64,
    /// Focal element of the original BPA this leaf descends from.
    pub origin: FocalElement,
}

/// Non-additive collection of leaves; repeated subsets stay separate terms.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LeafMultiset {
    pub terms: Vec<LeafTerm>,
}

impl LeafMultiset {
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn total_mass(&self) -> f64 {
        self.terms.iter().map(|t| t.mass).sum()
    }

    /// `−Σ w log2 w` over the leaf masses, summed in leaf order.
    pub fn shannon(&self) -> f64 {
        neg_sum(self.terms.iter().map(|t| xlog2x(t.mass)))
    }

    /// Leaves per origin, ascending by origin bitmask.
    pub fn counts_by_origin(&self) -> BTreeMap<FocalElement, u64> {
        let mut counts = BTreeMap::new();
        for t in &self.terms {
            *counts.entry(t.origin).or_insert(0) += 1;
        }
        counts
    }

    pub fn mass_by_origin(&self) -> BTreeMap<FocalElement, f64> {
        let mut sums = BTreeMap::new();
        for t in &self.terms {
            *sums.entry(t.origin).or_insert(0.0) += t.mass;
        }
        sums
    }

    /// Replace every multi-element leaf by its nonempty subsets. Masses are
    /// copied from the parent and must be reassigned by the caller.
    fn expand(&self) -> LeafMultiset {
        let mut terms = Vec::with_capacity(self.terms.len() * 2);
        for t in &self.terms {
            if t.subset.is_singleton() {
                terms.push(*t);
            } else {
                terms.extend(t.subset.subsets().map(|s| LeafTerm { subset: s, ..*t }));
            }
        }
        LeafMultiset { terms }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SplitTree {
    frame: Frame,
    pub root_terms: Vec<(FocalElement, f64)>,
    /// Rounds `1..=k`.
    pub rounds: Vec<LeafMultiset>,
}

impl SplitTree {
    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn order(&self) -> usize {
        self.rounds.len()
    }

    pub fn final_round(&self) -> &LeafMultiset {
        self.rounds.last().expect("split tree has at least one round")
    }

    /// CSV with columns `origin,subset,round,mass`; `all_rounds = false`
    /// writes only the last round.
    pub fn write_csv<W: Write>(&self, out: W, all_rounds: bool, precision: usize) -> Result<()> {
        let mut w = csv_writer(out);
        let io = |e: csv::Error| Error::MalformedDocument(format!("csv output: {e}"));
        w.write_record(["origin", "subset", "round", "mass"]).map_err(io)?;
        let first = if all_rounds { 0 } else { self.rounds.len() - 1 };
        for (r, round) in self.rounds.iter().enumerate().skip(first) {
            for t in &round.terms {
                w.write_record([
                    self.frame.format_subset(t.origin),
                    self.frame.format_subset(t.subset),
                    (r + 1).to_string(),
                    format!("{:.*}", precision, t.mass),
                ])
                .map_err(io)?;
            }
        }
        w.flush().map_err(|e| Error::MalformedDocument(format!("csv output: {e}")))?;
        Ok(())
    }
}

pub(crate) fn csv_writer<W: Write>(out: W) -> csv::Writer<W> {
    csv::WriterBuilder::new().quote_style(csv::QuoteStyle::NonNumeric).from_writer(out)
}

fn check_tree_size(m: &MassFunction, k: u64) -> Result<()> {
    let too_large = |leaves| Error::TreeTooLarge { leaves, limit: MAX_LEAVES };
    // stored leaves over all rounds 1..=k
    let mut total: u128 = 0;
    for (f, _) in m.focal() {
        for r in 1..=k {
            let n = leaf_count(f.cardinality(), r).map_err(|_| too_large(u128::MAX))?;
            total += n as u128;
            if total > MAX_LEAVES as u128 {
                return Err(too_large(total));
            }
        }
    }
    Ok(())
}

/// Split `m` for `k` rounds, spreading each origin's mass uniformly over its
/// leaves in every round.
pub fn build_split_tree(m: &MassFunction, k: u64) -> Result<SplitTree> {
    if k == 0 {
        return Err(Error::InvalidOrder(k));
    }
    check_tree_size(m, k)?;
    let root_terms: Vec<(FocalElement, f64)> = m.focal().collect();
    let mut current =
        LeafMultiset { terms: root_terms.iter().map(|&(f, w)| LeafTerm { subset: f, mass: w, origin: f }).collect() };
    let mut rounds = Vec::with_capacity(k as usize);
    for _ in 0..k {
        let mut next = current.expand();
        let counts = next.counts_by_origin();
        for t in &mut next.terms {
            t.mass = m.get(t.origin) / counts[&t.origin] as f64;
        }
        rounds.push(next.clone());
        current = next;
    }
    Ok(SplitTree { frame: m.frame().clone(), root_terms, rounds })
}

/// Shannon entropy of the round-`k` leaves of [`build_split_tree`].
pub fn split_tree_entropy(m: &MassFunction, k: u64) -> Result<f64> {
    Ok(build_split_tree(m, k)?.final_round().shannon())
}

/// Outcome of [`deng_volume`]: one Deng-entropy value per iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct DengVolume {
    /// `(iteration, value)` starting at iteration 1.
    pub values: Vec<(usize, f64)>,
    pub converged: bool,
}

impl DengVolume {
    /// Value of the last iteration.
    pub fn last(&self) -> f64 {
        self.values.last().map(|&(_, v)| v).unwrap_or(0.0)
    }

    pub fn last_increase(&self) -> Option<f64> {
        match self.values.as_slice() {
            [.., (_, a), (_, b)] => Some(b - a),
            _ => None,
        }
    }

    /// `Err(NonConvergence)` when the iteration limit was hit first.
    pub fn check(&self) -> Result<()> {
        if self.converged {
            Ok(())
        } else {
            Err(Error::NonConvergence {
                iterations: self.values.len(),
                last_increase: self.last_increase().unwrap_or(f64::NAN),
            })
        }
    }
}

/// `−Σ w log2(w / (2^|S| − 1))` over leaf terms.
fn leaf_deng(leaves: &[(FocalElement, f64)]) -> f64 {
    leaves.iter().filter(|(_, w)| *w > 0.0).map(|&(s, w)| w * (log2_pow_gap(1, s.cardinality()) - w.log2())).sum()
}

/// Iterated proportional splitting with a Deng entropy reading after every
/// round, stopping once the increase drops below `epsilon` or after
/// `max_iter` values.
pub fn deng_volume(m: &MassFunction, epsilon: f64, max_iter: usize) -> Result<DengVolume> {
    if epsilon.is_nan() || epsilon <= 0.0 {
        return Err(Error::InvalidDistribution(format!("epsilon must be positive, got {epsilon}")));
    }
    let max_iter = max_iter.max(1);
    let mut leaves: Vec<(FocalElement, f64)> = m.focal().collect();
    let mut values = vec![(1, leaf_deng(&leaves))];
    let mut converged = false;

    while values.len() < max_iter {
        if leaves.iter().all(|(s, _)| s.is_singleton()) {
            converged = true;
            break;
        }
        let grown: u128 =
            leaves.iter().map(|(s, _)| if s.is_singleton() { 1 } else { (1u128 << s.cardinality()) - 1 }).sum();
        if grown > MAX_LEAVES as u128 {
            return Err(Error::TreeTooLarge { leaves: grown, limit: MAX_LEAVES });
        }
        let mut next = Vec::with_capacity(grown as usize);
        for &(s, w) in &leaves {
            if s.is_singleton() {
                next.push((s, w));
                continue;
            }
            let card = s.cardinality();
            let denom = pow_gap(2, card).map(|v| v as f64).unwrap_or_else(|_| log2_pow_gap(2, card).exp2());
            for t in s.subsets() {
                let weight = ((1u64 << t.cardinality()) - 1) as f64 / denom;
                next.push((t, w * weight));
            }
        }
        leaves = next;
        let value = leaf_deng(&leaves);
        let prev = values.last().expect("nonempty").1;
        values.push((values.len() + 1, value));
        if value - prev < epsilon {
            converged = true;
            break;
        }
    }
    if !converged && leaves.iter().all(|(s, _)| s.is_singleton()) {
        converged = true;
    }
    Ok(DengVolume { values, converged })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::{deng_entropy, shannon, tfb_entropy};

    fn ab() -> Frame {
        Frame::new(["A", "B"]).unwrap()
    }

    fn example6() -> MassFunction {
        MassFunction::new(ab(), [(0b01, 0.2), (0b10, 0.2), (0b11, 0.6)]).unwrap()
    }

    fn example1() -> MassFunction {
        MassFunction::new(ab(), [(0b01, 1.0 / 9.0), (0b10, 1.0 / 9.0), (0b11, 7.0 / 9.0)]).unwrap()
    }

    /// Leaf count by walking the split rule on cardinalities only.
    fn simulate_count(a: u32, k: u64) -> u64 {
        let mut leaves = vec![a];
        for _ in 0..k {
            let mut next = Vec::new();
            for c in leaves {
                if c == 1 {
                    next.push(1);
                } else {
                    for s in FocalElement::new((1u64 << c) - 1).unwrap().subsets() {
                        next.push(s.cardinality());
                    }
                }
            }
            leaves = next;
        }
        leaves.len() as u64
    }

    #[test]
    fn leaf_count_examples() {
        assert_eq!(leaf_count(2, 1), Ok(3));
        assert_eq!(leaf_count(2, 3), Ok(7));
        assert_eq!(leaf_count(3, 2), Ok(19));
        assert_eq!(simulate_count(3, 2), 19);
        assert_eq!(leaf_count(2, 0), Err(Error::InvalidOrder(0)));
        assert!(matches!(leaf_count(64, 1), Err(Error::Overflow(_))));
    }

    #[test]
    fn leaf_count_matches_simulation() {
        for a in 1..=6 {
            for k in 1..=6 {
                assert_eq!(leaf_count(a, k).unwrap(), simulate_count(a, k), "a={a} k={k}");
            }
        }
    }

    #[test]
    fn example1_tree() {
        let tree = build_split_tree(&example1(), 3).unwrap();
        let last = tree.final_round();
        assert_eq!(last.len(), 9);
        for t in &last.terms {
            assert!((t.mass - 1.0 / 9.0).abs() < 1e-15);
        }
        let counts: Vec<u64> = last.counts_by_origin().into_values().collect();
        assert_eq!(counts, vec![1, 1, 7]);
        assert!((last.shannon() - 9f64.log2()).abs() < 1e-12);
    }

    #[test]
    fn single_round_of_vacuous() {
        let m = MassFunction::vacuous(ab());
        let tree = build_split_tree(&m, 1).unwrap();
        let masses: Vec<f64> = tree.final_round().terms.iter().map(|t| t.mass).collect();
        assert_eq!(masses.len(), 3);
        assert!(masses.iter().all(|&w| (w - 1.0 / 3.0).abs() < 1e-15));
        assert!((split_tree_entropy(&m, 2).unwrap() - 5f64.log2()).abs() < 1e-12);
    }

    #[test]
    fn bayesian_never_splits() {
        let m = MassFunction::new(ab(), [(0b01, 0.3), (0b10, 0.7)]).unwrap();
        let tree = build_split_tree(&m, 5).unwrap();
        for round in &tree.rounds {
            let leaves: Vec<(FocalElement, f64)> = round.terms.iter().map(|t| (t.subset, t.mass)).collect();
            assert_eq!(leaves, m.iter().collect::<Vec<_>>());
        }
        let h = shannon(&[0.3, 0.7]).unwrap();
        assert!((split_tree_entropy(&m, 5).unwrap() - h).abs() < 1e-12);
    }

    #[test]
    fn rounds_conserve_mass() {
        let m = example6();
        let tree = build_split_tree(&m, 6).unwrap();
        assert_eq!(tree.order(), 6);
        for round in &tree.rounds {
            assert!((round.total_mass() - 1.0).abs() < 1e-12);
            for (origin, mass) in round.mass_by_origin() {
                assert!((mass - m.get(origin)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn tree_guard() {
        let frame = Frame::numbered(12).unwrap();
        let m = MassFunction::vacuous(frame);
        assert!(matches!(build_split_tree(&m, 6), Err(Error::TreeTooLarge { .. })));
    }

    #[test]
    fn split_entropy_matches_closed_form_on_example6() {
        let m = example6();
        for k in 1..=6 {
            let a = split_tree_entropy(&m, k).unwrap();
            let b = tfb_entropy(&m, k).unwrap();
            assert!((a - b).abs() < 1e-12, "k={k}");
        }
    }

    #[test]
    fn deng_volume_reproduces_table() {
        let printed = [
            2.3219, 2.7641, 3.0294, 3.1886, 3.2841, 3.3414, 3.3758, 3.3964, 3.4088, 3.4162, 3.4206, 3.4234, 3.4250,
            3.4259,
        ];
        let dv = deng_volume(&example6(), 1e-9, 14).unwrap();
        assert_eq!(dv.values.len(), 14);
        assert!(!dv.converged);
        assert!(dv.check().is_err());
        for ((i, v), p) in dv.values.iter().zip(printed) {
            assert!((v - p).abs() < 5e-4, "iteration {i}: {v} vs {p}");
        }
        assert!((dv.values[0].1 - deng_entropy(&example6())).abs() < 1e-12);
    }

    #[test]
    fn deng_volume_stops_on_small_increase() {
        let dv = deng_volume(&example6(), 1e-3, 100).unwrap();
        assert!(dv.converged);
        assert_eq!(dv.values.len(), 14);
        assert!(dv.last_increase().unwrap() < 1e-3);
    }

    #[test]
    fn deng_volume_bayesian_single_value() {
        let m = MassFunction::new(ab(), [(0b01, 0.5), (0b10, 0.5)]).unwrap();
        let dv = deng_volume(&m, 1e-6, 100).unwrap();
        assert_eq!(dv.values, vec![(1, 1.0)]);
        assert!(dv.converged);
        assert!(deng_volume(&m, 0.0, 10).is_err());
    }

    #[test]
    fn deng_volume_nondecreasing_on_three_elements() {
        let frame = Frame::new(["A", "B", "C"]).unwrap();
        let m = MassFunction::new(frame, [(0b001, 0.1), (0b011, 0.3), (0b110, 0.2), (0b111, 0.4)]).unwrap();
        let dv = deng_volume(&m, 1e-6, 30).unwrap();
        for w in dv.values.windows(2) {
            assert!(w[1].1 >= w[0].1 - 1e-12);
        }
    }

    #[test]
    fn csv_export() {
        let tree = build_split_tree(&MassFunction::vacuous(ab()), 1).unwrap();
        let mut buf = Vec::new();
        tree.write_csv(&mut buf, true, 4).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "\"origin\",\"subset\",\"round\",\"mass\"\n\
             \"A,B\",\"A\",1,0.3333\n\
             \"A,B\",\"B\",1,0.3333\n\
             \"A,B\",\"A,B\",1,0.3333\n"
        );
    }
}
