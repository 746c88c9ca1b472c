//! Discernment frames, focal elements and mass functions.
//!
//! Subsets of a frame are bitmasks over element indices, so a frame holds at
//! most 64 elements. Mass functions keep their focal elements in ascending
//! bitmask order, which fixes the summation order of every measure built on
//! top of them.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use serde::de::{self, MapAccess, Visitor};
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Maximum number of elements in a frame.
pub const MAX_ELEMENTS: usize = 64;

/// Default tolerance on `|Σm − 1|`.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

const SEPARATOR: char = ',';

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Frame {
    labels: Vec<String>,
}

impl Frame {
    pub fn new<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::EmptyFrame);
        }
        if labels.len() > MAX_ELEMENTS {
            return Err(Error::TooManyElements(labels.len()));
        }
        let mut seen = HashSet::with_capacity(labels.len());
        for label in &labels {
            if label.is_empty() || label.contains(SEPARATOR) || label.trim() != label {
                return Err(Error::ReservedCharacter(label.clone()));
            }
            if !seen.insert(label.as_str()) {
                return Err(Error::DuplicateLabel(label.clone()));
            }
        }
        Ok(Self { labels })
    }

    /// Frame with labels `θ1 … θn`.
    pub fn numbered(n: usize) -> Result<Self> {
        Self::new((1..=n).map(|i| format!("θ{i}")))
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Bitmask with every element of the frame set.
    pub fn full_mask(&self) -> u64 {
        if self.len() == 64 {
            u64::MAX
        } else {
            (1u64 << self.len()) - 1
        }
    }

    /// The whole frame as a focal element.
    pub fn theta(&self) -> FocalElement {
        FocalElement(self.full_mask())
    }

    pub fn singleton(&self, index: usize) -> Option<FocalElement> {
        (index < self.len()).then(|| FocalElement(1u64 << index))
    }

    pub fn contains(&self, f: FocalElement) -> bool {
        f.0 & !self.full_mask() == 0
    }

    /// Parse a comma-joined subset key. Label order and surrounding
    /// whitespace are irrelevant: `"B, A"` and `"A,B"` name the same set.
    pub fn parse_subset(&self, key: &str) -> Result<FocalElement> {
        let mut bits = 0u64;
        for part in key.split(SEPARATOR) {
            let part = part.trim();
            if part.is_empty() {
                return Err(Error::MalformedDocument(format!("empty label in subset key {key:?}")));
            }
            let idx = self.index_of(part).ok_or_else(|| Error::UnknownLabel(part.to_string()))?;
            let bit = 1u64 << idx;
            if bits & bit != 0 {
                return Err(Error::MalformedDocument(format!("label {part:?} repeated in subset key {key:?}")));
            }
            bits |= bit;
        }
        Ok(FocalElement(bits))
    }

    /// Comma-joined labels of `f` in frame order.
    pub fn format_subset(&self, f: FocalElement) -> String {
        f.indices().map(|i| self.labels.get(i).map(String::as_str).unwrap_or("?")).collect::<Vec<_>>().join(",")
    }
}

/// A nonempty subset of a frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FocalElement(u64);

impl FocalElement {
    /// Returns `None` for the empty mask.
    pub fn new(bits: u64) -> Option<Self> {
        (bits != 0).then_some(Self(bits))
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn cardinality(self) -> u32 {
        self.0.count_ones()
    }

    pub fn is_singleton(self) -> bool {
        self.cardinality() == 1
    }

    pub fn is_subset_of(self, other: FocalElement) -> bool {
        self.0 & !other.0 == 0
    }

    /// Element indices in ascending order.
    pub fn indices(self) -> impl Iterator<Item = usize> {
        let mut rest = self.0;
        std::iter::from_fn(move || {
            if rest == 0 {
                return None;
            }
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            Some(i)
        })
    }

    /// Nonempty subsets of `self` in ascending bitmask order.
    pub fn subsets(self) -> Subsets {
        Subsets { set: self.0, next: self.0 & self.0.wrapping_neg(), done: false }
    }
}

impl fmt::Display for FocalElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{:#b}}}", self.0)
    }
}

/// Iterator over the nonempty subsets of a bitmask (carry-rippler walk).
#[derive(Debug, Clone)]
pub struct Subsets {
    set: u64,
    next: u64,
    done: bool,
}

impl Iterator for Subsets {
    type Item = FocalElement;

    fn next(&mut self) -> Option<FocalElement> {
        if self.done || self.set == 0 {
            return None;
        }
        let current = self.next;
        self.next = current.wrapping_sub(self.set) & self.set;
        self.done = self.next == 0;
        Some(FocalElement(current))
    }
}

/// All `2^|f| − 1` nonempty subsets of `f`, ascending by bitmask.
pub fn subsets_of(f: FocalElement) -> Vec<FocalElement> {
    f.subsets().collect()
}

/// A basic probability assignment over a frame.
///
/// Masses are stored exactly as given; validation only gates acceptance.
/// Zero-mass entries are kept but skipped by every measure.
#[derive(Debug, Clone, PartialEq)]
pub struct MassFunction {
    frame: Frame,
    masses: BTreeMap<FocalElement, f64>,
}

impl MassFunction {
    /// Build and validate with [`DEFAULT_TOLERANCE`].
    pub fn new<I>(frame: Frame, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u64, f64)>,
    {
        Self::with_tolerance(frame, entries, DEFAULT_TOLERANCE)
    }

    pub fn with_tolerance<I>(frame: Frame, entries: I, tol: f64) -> Result<Self>
    where
        I: IntoIterator<Item = (u64, f64)>,
    {
        let mut masses = BTreeMap::new();
        for (bits, mass) in entries {
            let Some(f) = FocalElement::new(bits) else {
                if mass != 0.0 {
                    return Err(Error::EmptySetMass(mass));
                }
                continue;
            };
            if !frame.contains(f) {
                return Err(Error::SubsetOutOfFrame(bits));
            }
            if masses.insert(f, mass).is_some() {
                return Err(Error::DuplicateSubset(frame.format_subset(f)));
            }
        }
        let m = Self { frame, masses };
        m.validate(tol)?;
        Ok(m)
    }

    /// Build from `(labels, mass)` pairs, e.g. `(&["A", "B"], 0.6)`.
    pub fn from_labeled<'a, I>(frame: Frame, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a [&'a str], f64)>,
    {
        let mut raw = Vec::new();
        for (labels, mass) in entries {
            raw.push((frame.parse_subset(&labels.join(","))?.bits(), mass));
        }
        Self::new(frame, raw)
    }

    /// `m(Θ) = 1`.
    pub fn vacuous(frame: Frame) -> Self {
        let theta = frame.theta();
        Self { frame, masses: BTreeMap::from([(theta, 1.0)]) }
    }

    /// Re-check the mass function axioms against `tol`.
    pub fn validate(&self, tol: f64) -> Result<()> {
        let mut total = 0.0;
        for (&f, &mass) in &self.masses {
            if !mass.is_finite() {
                return Err(Error::NonFiniteMass { subset: self.frame.format_subset(f), mass });
            }
            if mass < 0.0 {
                return Err(Error::NegativeMass { subset: self.frame.format_subset(f), mass });
            }
            total += mass;
        }
        if (total - 1.0).abs() > tol {
            return Err(Error::SumNotOne(total));
        }
        Ok(())
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn get(&self, f: FocalElement) -> f64 {
        self.masses.get(&f).copied().unwrap_or(0.0)
    }

    /// All stored entries, zero masses included, ascending by bitmask.
    pub fn iter(&self) -> impl Iterator<Item = (FocalElement, f64)> + '_ {
        self.masses.iter().map(|(&f, &m)| (f, m))
    }

    /// Entries with strictly positive mass.
    pub fn focal(&self) -> impl Iterator<Item = (FocalElement, f64)> + '_ {
        self.iter().filter(|&(_, m)| m > 0.0)
    }

    pub fn total(&self) -> f64 {
        self.masses.values().sum()
    }

    /// True when all positive mass sits on singletons.
    pub fn is_bayesian(&self) -> bool {
        self.focal().all(|(f, _)| f.is_singleton())
    }

    pub fn is_vacuous(&self) -> bool {
        let theta = self.frame.theta();
        self.focal().all(|(f, _)| f == theta)
    }

    /// Parse the JSON interchange format:
    /// `{"frame": ["A","B"], "masses": {"A": 0.2, "A,B": 0.8}}`.
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: BpaDocument = serde_json::from_str(text).map_err(|e| Error::MalformedDocument(e.to_string()))?;
        let frame = Frame::new(doc.frame)?;
        let mut raw = Vec::with_capacity(doc.masses.0.len());
        let mut seen = HashSet::new();
        for (key, mass) in doc.masses.0 {
            let f = frame.parse_subset(&key)?;
            if !seen.insert(f) {
                return Err(Error::DuplicateSubset(frame.format_subset(f)));
            }
            raw.push((f.bits(), mass));
        }
        Self::new(frame, raw)
    }

    /// Serialize to the JSON interchange format with keys in frame order.
    pub fn to_json(&self) -> String {
        let doc = BpaDocument {
            frame: self.frame.labels.clone(),
            masses: OrderedMasses(self.iter().map(|(f, m)| (self.frame.format_subset(f), m)).collect()),
        };
        serde_json::to_string(&doc).expect("mass function serializes")
    }

    /// Short stable checksum of the canonical JSON form.
    pub fn digest(&self) -> String {
        use sha2::{Digest, Sha256};
        let hash = Sha256::digest(self.to_json().as_bytes());
        hash[..8].iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// Free-function form of [`MassFunction::from_json`].
pub fn parse_bpa(text: &str) -> Result<MassFunction> {
    MassFunction::from_json(text)
}

/// Free-function form of [`MassFunction::validate`].
pub fn validate(m: &MassFunction, tol: f64) -> Result<()> {
    m.validate(tol)
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BpaDocument {
    frame: Vec<String>,
    masses: OrderedMasses,
}

/// Object entries in document order, duplicate keys preserved so they can be
/// rejected.
struct OrderedMasses(Vec<(String, f64)>);

impl Serialize for OrderedMasses {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for OrderedMasses {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct EntriesVisitor;

        impl<'de> Visitor<'de> for EntriesVisitor {
            type Value = OrderedMasses;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("an object mapping subset keys to masses")
            }

            fn visit_map<A: MapAccess<'de>>(self, mut access: A) -> std::result::Result<Self::Value, A::Error> {
                let mut entries = Vec::new();
                while let Some((k, v)) = access.next_entry::<String, f64>()? {
                    entries.push((k, v));
                }
                Ok(OrderedMasses(entries))
            }
        }

        deserializer.deserialize_map(EntriesVisitor).map_err(|e: D::Error| de::Error::custom(e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Frame {
        Frame::new(["A", "B"]).unwrap()
    }

    #[test]
    fn frame_construction() {
        assert_eq!(ab().len(), 2);
        assert_eq!(Frame::new(["R", "D"]).unwrap().len(), 2);
        let many: Vec<String> = (0..65).map(|i| format!("e{i}")).collect();
        assert_eq!(Frame::new(many), Err(Error::TooManyElements(65)));
        let full: Vec<String> = (0..64).map(|i| format!("e{i}")).collect();
        assert_eq!(Frame::new(full).unwrap().full_mask(), u64::MAX);
    }

    #[test]
    fn frame_rejects_bad_labels() {
        assert_eq!(Frame::new(["A", "A"]), Err(Error::DuplicateLabel("A".into())));
        assert_eq!(Frame::new(["A,B"]), Err(Error::ReservedCharacter("A,B".into())));
        assert_eq!(Frame::new([""]), Err(Error::ReservedCharacter("".into())));
        assert_eq!(Frame::new(Vec::<String>::new()), Err(Error::EmptyFrame));
    }

    #[test]
    fn subsets_in_ascending_order() {
        let f = FocalElement::new(0b11).unwrap();
        let bits: Vec<u64> = subsets_of(f).into_iter().map(FocalElement::bits).collect();
        assert_eq!(bits, vec![0b01, 0b10, 0b11]);
        assert_eq!(subsets_of(FocalElement::new(0b1).unwrap()).len(), 1);
        assert_eq!(subsets_of(FocalElement::new(0b111).unwrap()).len(), 7);
    }

    #[test]
    fn subsets_of_sparse_mask_match_brute_force() {
        let set = 0b1010_0110u64;
        let brute: Vec<u64> = (1..=set).filter(|s| s & !set == 0).collect();
        let got: Vec<u64> = FocalElement::new(set).unwrap().subsets().map(|f| f.bits()).collect();
        assert_eq!(got, brute);
    }

    #[test]
    fn validation() {
        let m = MassFunction::new(ab(), [(0b01, 0.2), (0b10, 0.2), (0b11, 0.6)]);
        assert!(m.is_ok());
        assert!(MassFunction::new(ab(), [(0b11, 1.0)]).is_ok());
        match MassFunction::new(ab(), [(0b01, 0.5), (0b10, 0.6)]) {
            Err(Error::SumNotOne(t)) => assert!((t - 1.1).abs() < 1e-12),
            other => panic!("expected SumNotOne, got {other:?}"),
        }
        assert!(matches!(MassFunction::new(ab(), [(0b01, -0.1), (0b11, 1.1)]), Err(Error::NegativeMass { .. })));
        assert_eq!(MassFunction::new(ab(), [(0, 0.5), (0b11, 0.5)]), Err(Error::EmptySetMass(0.5)));
        assert_eq!(MassFunction::new(ab(), [(0b100, 1.0)]), Err(Error::SubsetOutOfFrame(0b100)));
    }

    #[test]
    fn validate_with_custom_tolerance() {
        let m = MassFunction::with_tolerance(ab(), [(0b01, 0.5), (0b10, 0.5001)], 1e-3).unwrap();
        assert!(m.validate(1e-3).is_ok());
        assert!(matches!(validate(&m, 1e-9), Err(Error::SumNotOne(_))));
    }

    #[test]
    fn parse_example_documents() {
        let m = parse_bpa(r#"{"frame":["A","B"],"masses":{"A":0.2,"B":0.2,"A,B":0.6}}"#).unwrap();
        assert_eq!(m.get(FocalElement::new(0b11).unwrap()), 0.6);
        let v = parse_bpa(r#"{"frame":["A","B"],"masses":{"B,A":1.0}}"#).unwrap();
        assert!(v.is_vacuous());
        assert_eq!(parse_bpa(r#"{"frame":["A"],"masses":{"A,B":1.0}}"#), Err(Error::UnknownLabel("B".into())));
    }

    #[test]
    fn parse_rejects_duplicates_and_garbage() {
        assert!(matches!(
            parse_bpa(r#"{"frame":["A","B"],"masses":{"A,B":0.5,"B,A":0.5}}"#),
            Err(Error::DuplicateSubset(_))
        ));
        assert!(matches!(
            parse_bpa(r#"{"frame":["A","B"],"masses":{"A":0.5,"A":0.5}}"#),
            Err(Error::DuplicateSubset(_))
        ));
        assert!(matches!(parse_bpa("[1,2]"), Err(Error::MalformedDocument(_))));
        assert!(matches!(parse_bpa(r#"{"frame":["A"],"masses":{"A":"x"}}"#), Err(Error::MalformedDocument(_))));
        assert!(matches!(parse_bpa(r#"{"frame":["A","B"],"masses":{"A":0.5,"B":0.6}}"#), Err(Error::SumNotOne(_))));
    }

    #[test]
    fn json_uses_frame_order_keys() {
        let m = parse_bpa(r#"{"frame":["X","Y","Z"],"masses":{"Z,X":0.5,"Y":0.5}}"#).unwrap();
        assert_eq!(m.to_json(), r#"{"frame":["X","Y","Z"],"masses":{"Y":0.5,"X,Z":0.5}}"#);
    }

    #[test]
    fn digest_is_stable() {
        let a = MassFunction::vacuous(ab());
        let b = parse_bpa(r#"{"frame":["A","B"],"masses":{"B,A":1}}"#).unwrap();
        assert_eq!(a.digest(), b.digest());
        assert_eq!(a.digest().len(), 16);
    }
}
