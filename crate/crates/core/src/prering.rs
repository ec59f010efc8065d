//! Bounded rational intervals and their finite disjoint unions.
//!
//! [`Interval`] values form a prering: intersections are intervals and
//! differences are disjoint unions of at most two intervals. [`SimpleSet`]
//! is the generated ring, kept in a canonical minimal form so that set
//! equality is structural equality.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Interval {
    lo: Rational,
    hi: Rational,
    lo_closed: bool,
    hi_closed: bool,
}

impl Interval {
    /// Builds an interval; every empty result is the canonical `(0,0)`.
    pub fn new(lo: Rational, hi: Rational, lo_closed: bool, hi_closed: bool) -> Result<Self> {
        if lo > hi {
            return Err(Error::InvalidInterval {
                lo: Box::new(lo),
                hi: Box::new(hi),
            });
        }
        Ok(Self::from_parts(lo, hi, lo_closed, hi_closed))
    }

    /// Like [`Interval::new`] but yields the empty interval when `lo > hi`.
    fn from_parts(lo: Rational, hi: Rational, lo_closed: bool, hi_closed: bool) -> Self {
        if lo > hi || (lo == hi && !(lo_closed && hi_closed)) {
            return Self::empty();
        }
        Interval {
            lo,
            hi,
            lo_closed,
            hi_closed,
        }
    }

    pub fn empty() -> Self {
        Interval {
            lo: Rational::zero(),
            hi: Rational::zero(),
            lo_closed: false,
            hi_closed: false,
        }
    }

    pub fn closed(lo: Rational, hi: Rational) -> Result<Self> {
        Self::new(lo, hi, true, true)
    }

    pub fn open(lo: Rational, hi: Rational) -> Result<Self> {
        Self::new(lo, hi, false, false)
    }

    pub fn closed_open(lo: Rational, hi: Rational) -> Result<Self> {
        Self::new(lo, hi, true, false)
    }

    pub fn open_closed(lo: Rational, hi: Rational) -> Result<Self> {
        Self::new(lo, hi, false, true)
    }

    pub fn singleton(x: Rational) -> Self {
        Interval {
            lo: x.clone(),
            hi: x,
            lo_closed: true,
            hi_closed: true,
        }
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn lo_closed(&self) -> bool {
        self.lo_closed
    }

    pub fn hi_closed(&self) -> bool {
        self.hi_closed
    }

    pub fn is_empty(&self) -> bool {
        self.lo == self.hi && !(self.lo_closed && self.hi_closed)
    }

    pub fn is_singleton(&self) -> bool {
        self.lo == self.hi && self.lo_closed && self.hi_closed
    }

    pub fn length(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &Rational) -> bool {
        let above = match x.cmp(&self.lo) {
            Ordering::Greater => true,
            Ordering::Equal => self.lo_closed,
            Ordering::Less => false,
        };
        let below = match x.cmp(&self.hi) {
            Ordering::Less => true,
            Ordering::Equal => self.hi_closed,
            Ordering::Greater => false,
        };
        above && below
    }

    pub fn intersect(&self, other: &Interval) -> Interval {
        if self.is_empty() || other.is_empty() {
            return Self::empty();
        }
        let (lo, lo_closed) = match self.lo.cmp(&other.lo) {
            Ordering::Greater => (self.lo.clone(), self.lo_closed),
            Ordering::Less => (other.lo.clone(), other.lo_closed),
            Ordering::Equal => (self.lo.clone(), self.lo_closed && other.lo_closed),
        };
        let (hi, hi_closed) = match self.hi.cmp(&other.hi) {
            Ordering::Less => (self.hi.clone(), self.hi_closed),
            Ordering::Greater => (other.hi.clone(), other.hi_closed),
            Ordering::Equal => (self.hi.clone(), self.hi_closed && other.hi_closed),
        };
        Self::from_parts(lo, hi, lo_closed, hi_closed)
    }

    /// `self \ other` as at most two disjoint intervals.
    pub fn diff(&self, other: &Interval) -> SimpleSet {
        let common = self.intersect(other);
        if common.is_empty() {
            return SimpleSet::from_interval(self.clone());
        }
        let left = Self::from_parts(
            self.lo.clone(),
            common.lo.clone(),
            self.lo_closed,
            !common.lo_closed,
        );
        let right = Self::from_parts(
            common.hi.clone(),
            self.hi.clone(),
            !common.hi_closed,
            self.hi_closed,
        );
        let parts = [left, right]
            .into_iter()
            .filter(|i| !i.is_empty())
            .collect();
        SimpleSet { parts }
    }

    pub fn is_subset(&self, other: &Interval) -> bool {
        self.is_empty() || &self.intersect(other) == self
    }

    /// Open interval with the same endpoints.
    pub fn interior(&self) -> Interval {
        Self::from_parts(self.lo.clone(), self.hi.clone(), false, false)
    }

    /// Closure `[lo, hi]`; the empty interval stays empty.
    pub fn closure(&self) -> Interval {
        if self.is_empty() {
            return Self::empty();
        }
        Self::from_parts(self.lo.clone(), self.hi.clone(), true, true)
    }

    // order of left ends: a closed start precedes an open start at the same point
    fn cmp_start(&self, other: &Interval) -> Ordering {
        self.lo
            .cmp(&other.lo)
            .then_with(|| other.lo_closed.cmp(&self.lo_closed))
    }

    // order of right ends: an open end precedes a closed end at the same point
    fn cmp_end(&self, other: &Interval) -> Ordering {
        self.hi
            .cmp(&other.hi)
            .then_with(|| self.hi_closed.cmp(&other.hi_closed))
    }

    /// Whether `self ∪ next` is an interval, given `next` starts no earlier.
    fn joins(&self, next: &Interval) -> bool {
        match next.lo.cmp(&self.hi) {
            Ordering::Less => true,
            Ordering::Equal => self.hi_closed || next.lo_closed,
            Ordering::Greater => false,
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{},{}{}",
            if self.lo_closed { '[' } else { '(' },
            self.lo,
            self.hi,
            if self.hi_closed { ']' } else { ')' }
        )
    }
}

impl FromStr for Interval {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidArgument(format!("not an interval literal: {s:?}"));
        let mut chars = s.chars();
        let lo_closed = match chars.next() {
            Some('[') => true,
            Some('(') => false,
            _ => return Err(bad()),
        };
        let hi_closed = match chars.next_back() {
            Some(']') => true,
            Some(')') => false,
            _ => return Err(bad()),
        };
        let (a, b) = chars.as_str().split_once(',').ok_or_else(bad)?;
        Interval::new(
            rational::parse(a)?,
            rational::parse(b)?,
            lo_closed,
            hi_closed,
        )
    }
}

impl Serialize for Interval {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Interval {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// A finite disjoint union of intervals in canonical minimal form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct SimpleSet {
    parts: Vec<Interval>,
}

impl SimpleSet {
    pub fn empty() -> Self {
        SimpleSet { parts: Vec::new() }
    }

    pub fn from_interval(i: Interval) -> Self {
        if i.is_empty() {
            Self::empty()
        } else {
            SimpleSet { parts: vec![i] }
        }
    }

    /// Caller guarantees the parts are already canonical.
    pub(crate) fn from_canonical_parts(parts: Vec<Interval>) -> Self {
        debug_assert!(parts
            .windows(2)
            .all(|w| w[0].hi <= w[1].lo && !w[0].joins(&w[1])));
        SimpleSet { parts }
    }

    /// Canonical form of an arbitrary (possibly overlapping) union.
    pub fn normalize(raw: impl IntoIterator<Item = Interval>) -> Self {
        let mut items: Vec<Interval> = raw.into_iter().filter(|i| !i.is_empty()).collect();
        items.sort_by(|a, b| a.cmp_start(b));
        let mut parts: Vec<Interval> = Vec::with_capacity(items.len());
        for item in items {
            match parts.last_mut() {
                Some(last) if last.joins(&item) => {
                    if item.cmp_end(last) == Ordering::Greater {
                        last.hi = item.hi;
                        last.hi_closed = item.hi_closed;
                    }
                }
                _ => parts.push(item),
            }
        }
        SimpleSet { parts }
    }

    pub fn parts(&self) -> &[Interval] {
        &self.parts
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn length(&self) -> Rational {
        self.parts.iter().map(Interval::length).sum()
    }

    pub fn contains(&self, x: &Rational) -> bool {
        // parts are sorted, so binary search on the left endpoint
        let idx = self.parts.partition_point(|p| &p.lo <= x);
        idx > 0 && self.parts[idx - 1].contains(x)
    }

    pub fn union(&self, other: &SimpleSet) -> SimpleSet {
        Self::normalize(self.parts.iter().chain(&other.parts).cloned())
    }

    pub fn intersect(&self, other: &SimpleSet) -> SimpleSet {
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.parts.len() && j < other.parts.len() {
            let (a, b) = (&self.parts[i], &other.parts[j]);
            let c = a.intersect(b);
            if !c.is_empty() {
                out.push(c);
            }
            if a.cmp_end(b) == Ordering::Less {
                i += 1;
            } else {
                j += 1;
            }
        }
        Self::normalize(out)
    }

    pub fn difference(&self, other: &SimpleSet) -> SimpleSet {
        let mut pieces: Vec<Interval> = self.parts.clone();
        for cut in &other.parts {
            pieces = pieces.iter().flat_map(|p| p.diff(cut).parts).collect();
        }
        Self::normalize(pieces)
    }

    pub fn is_subset(&self, other: &SimpleSet) -> bool {
        self.difference(other).is_empty()
    }

    pub fn is_disjoint(&self, other: &SimpleSet) -> bool {
        self.intersect(other).is_empty()
    }

    /// Smallest closed interval containing the set, if nonempty.
    pub fn span(&self) -> Option<(Rational, Rational)> {
        Some((
            self.parts.first()?.lo.clone(),
            self.parts.last()?.hi.clone(),
        ))
    }

    /// Every endpoint of every part, sorted and deduplicated.
    pub fn endpoints(&self) -> Vec<Rational> {
        let mut pts: Vec<Rational> = self
            .parts
            .iter()
            .flat_map(|p| [p.lo.clone(), p.hi.clone()])
            .collect();
        pts.sort();
        pts.dedup();
        pts
    }
}

impl fmt::Display for SimpleSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "}}")
    }
}

impl FromStr for SimpleSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        // A lone interval is a one-part set.
        if s.starts_with(['[', '(']) {
            return Ok(Self::from_interval(s.parse()?));
        }
        let inner = s
            .strip_prefix('{')
            .and_then(|r| r.strip_suffix('}'))
            .ok_or_else(|| Error::InvalidArgument(format!("not a set literal: {s:?}")))?;
        let mut parts = Vec::new();
        let mut start = None;
        for (idx, c) in inner.char_indices() {
            match c {
                '[' | '(' => start = Some(idx),
                ']' | ')' => {
                    let from = start.take().ok_or_else(|| {
                        Error::InvalidArgument(format!("unbalanced interval in {s:?}"))
                    })?;
                    parts.push(inner[from..=idx].parse::<Interval>()?);
                }
                _ => {}
            }
        }
        Ok(Self::normalize(parts))
    }
}

impl Serialize for SimpleSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.parts.iter().map(ToString::to_string))
    }
}

impl<'de> Deserialize<'de> for SimpleSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let parts = Vec::<Interval>::deserialize(d)?;
        Ok(SimpleSet::normalize(parts))
    }
}

/// An elementary piece of the line between consecutive cut points.
#[derive(Debug, Clone)]
struct Atom {
    cell: Interval,
    witness: Rational,
}

fn atoms(cuts: &[Rational]) -> Vec<Atom> {
    let mut out = Vec::with_capacity(2 * cuts.len());
    for (k, p) in cuts.iter().enumerate() {
        out.push(Atom {
            cell: Interval::singleton(p.clone()),
            witness: p.clone(),
        });
        if let Some(q) = cuts.get(k + 1) {
            out.push(Atom {
                cell: Interval::from_parts(p.clone(), q.clone(), false, false),
                witness: (p + q) / rational::int(2),
            });
        }
    }
    out
}

/// A cell of a common refinement together with the indices of the input
/// sets that contain it.
#[derive(Debug, Clone, PartialEq)]
pub struct RefinedCell {
    pub cell: Interval,
    pub members: Vec<usize>,
}

/// Common disjoint refinement of a family of simple sets.
///
/// The line is cut at the sorted endpoints of all inputs; consecutive
/// elementary pieces with the same membership are merged back into one
/// interval. Each input is exactly the union of the cells listing it.
pub fn refine_with_membership(sets: &[SimpleSet]) -> Vec<RefinedCell> {
    let mut cuts: Vec<Rational> = sets.iter().flat_map(SimpleSet::endpoints).collect();
    cuts.sort();
    cuts.dedup();
    let mut out: Vec<RefinedCell> = Vec::new();
    let mut last_adjacent = false;
    for atom in atoms(&cuts) {
        let members: Vec<usize> = sets
            .iter()
            .enumerate()
            .filter(|(_, s)| s.contains(&atom.witness))
            .map(|(i, _)| i)
            .collect();
        if members.is_empty() {
            last_adjacent = false;
            continue;
        }
        match out.last_mut() {
            Some(prev) if last_adjacent && prev.members == members => {
                prev.cell.hi = atom.cell.hi.clone();
                prev.cell.hi_closed = atom.cell.hi_closed;
            }
            _ => out.push(RefinedCell {
                cell: atom.cell,
                members,
            }),
        }
        last_adjacent = true;
    }
    out
}

pub fn refine(sets: &[SimpleSet]) -> Vec<Interval> {
    refine_with_membership(sets)
        .into_iter()
        .map(|c| c.cell)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn iv(s: &str) -> Interval {
        s.parse().unwrap()
    }

    fn set(s: &str) -> SimpleSet {
        s.parse().unwrap()
    }

    #[test]
    fn lengths() {
        assert_eq!(iv("(1/3,2/3)").length(), frac(1, 3));
        assert_eq!(iv("[5,5]").length(), int(0));
        assert_eq!(iv("[0,1]").length(), int(1));
    }

    #[test]
    fn empty_is_canonical() {
        assert_eq!(iv("(3,3)"), Interval::empty());
        assert_eq!(iv("[3,3)"), Interval::empty());
        assert!(!iv("[3,3]").is_empty());
        assert!(Interval::new(int(2), int(1), true, true).is_err());
    }

    #[test]
    fn intersections() {
        assert_eq!(iv("[0,2]").intersect(&iv("(1,3]")), iv("(1,2]"));
        assert!(iv("[0,1)").intersect(&iv("[1,2]")).is_empty());
        assert_eq!(iv("[0,3]").intersect(&iv("[1,2]")), iv("[1,2]"));
    }

    #[test]
    fn differences() {
        assert_eq!(iv("[0,3]").diff(&iv("(1,2)")), set("{[0,1],[2,3]}"));
        assert!(iv("[0,1]").diff(&iv("[0,1]")).is_empty());
        assert_eq!(iv("(0,2]").diff(&iv("[1,3]")), set("{(0,1)}"));
    }

    #[test]
    fn normalization() {
        assert_eq!(
            SimpleSet::normalize([iv("[0,1]"), iv("(1,2]")]).parts(),
            &[iv("[0,2]")]
        );
        assert!(SimpleSet::normalize([]).is_empty());
        let split = SimpleSet::normalize([iv("(0,1)"), iv("(1,2)")]);
        assert_eq!(split.parts(), &[iv("(0,1)"), iv("(1,2)")]);
        // a singleton fills the gap
        let filled = SimpleSet::normalize([iv("(0,1)"), iv("(1,2)"), iv("[1,1]")]);
        assert_eq!(filled.parts(), &[iv("(0,2)")]);
    }

    #[test]
    fn ring_operations() {
        assert_eq!(set("{[0,1]}").union(&set("{[2,3]}")), set("{[0,1],[2,3]}"));
        assert_eq!(set("{[0,2]}").difference(&set("{[1,3]}")), set("{[0,1)}"));
        let a = set("{[0,1),(2,5],[7,7]}");
        assert_eq!(a.intersect(&a), a);
    }

    #[test]
    fn refinement() {
        assert_eq!(
            refine(&[set("{[0,2]}"), set("{[1,3]}")]),
            vec![iv("[0,1)"), iv("[1,2]"), iv("(2,3]")]
        );
        assert_eq!(refine(&[set("{[0,1]}"), set("{[0,1]}")]), vec![iv("[0,1]")]);
        assert_eq!(
            refine(&[set("{[0,1]}"), set("{[2,3]}")]),
            vec![iv("[0,1]"), iv("[2,3]")]
        );
    }

    #[test]
    fn membership() {
        let s = set("{[0,1)}");
        assert!(!s.contains(&int(1)));
        assert!(s.contains(&int(0)));
        assert!(!SimpleSet::empty().contains(&frac(1, 2)));
    }

    #[test]
    fn display_round_trip() {
        let s = set("{(-1/2,0], [3,7/2)}");
        assert_eq!(s.to_string().parse::<SimpleSet>().unwrap(), s);
    }
}
