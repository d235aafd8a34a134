//! Bitsets over edge variables, used for transversal search and simplicial
//! complexes. Edge ids `e1..=e128` are supported.

use std::fmt;

use crate::graph::EdgeId;

pub const MAX_VARIABLE: u32 = 128;

/// Ordered lexicographically by the ascending list of members.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct VarSet(u128);

impl Ord for VarSet {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.iter().cmp(other.iter())
    }
}

impl PartialOrd for VarSet {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl VarSet {
    pub const EMPTY: VarSet = VarSet(0);

    fn bit(e: EdgeId) -> u128 {
        assert!(
            (1..=MAX_VARIABLE).contains(&e.0),
            "edge id {e} outside the supported range e1..=e{MAX_VARIABLE}"
        );
        1u128 << (e.0 - 1)
    }

    pub fn fits(e: EdgeId) -> bool {
        (1..=MAX_VARIABLE).contains(&e.0)
    }

    pub fn singleton(e: EdgeId) -> Self {
        VarSet(Self::bit(e))
    }

    pub fn insert(&mut self, e: EdgeId) {
        self.0 |= Self::bit(e);
    }

    pub fn remove(&mut self, e: EdgeId) {
        self.0 &= !Self::bit(e);
    }

    pub fn with(self, e: EdgeId) -> Self {
        VarSet(self.0 | Self::bit(e))
    }

    pub fn without(self, e: EdgeId) -> Self {
        VarSet(self.0 & !Self::bit(e))
    }

    pub fn contains(self, e: EdgeId) -> bool {
        Self::fits(e) && self.0 & Self::bit(e) != 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, o: VarSet) -> VarSet {
        VarSet(self.0 | o.0)
    }

    pub fn intersection(self, o: VarSet) -> VarSet {
        VarSet(self.0 & o.0)
    }

    pub fn difference(self, o: VarSet) -> VarSet {
        VarSet(self.0 & !o.0)
    }

    pub fn intersects(self, o: VarSet) -> bool {
        self.0 & o.0 != 0
    }

    pub fn is_subset(self, o: VarSet) -> bool {
        self.0 & !o.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = EdgeId> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let i = bits.trailing_zeros();
            bits &= bits - 1;
            Some(EdgeId(i + 1))
        })
    }
}

impl FromIterator<EdgeId> for VarSet {
    fn from_iter<I: IntoIterator<Item = EdgeId>>(iter: I) -> Self {
        let mut s = VarSet::EMPTY;
        for e in iter {
            s.insert(e);
        }
        s
    }
}

impl fmt::Display for VarSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.iter().map(|e| e.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

impl fmt::Debug for VarSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Keeps the inclusion-minimal sets, deduplicated and sorted.
pub fn minimal_sets(mut sets: Vec<VarSet>) -> Vec<VarSet> {
    sets.sort_by_key(|s| (s.len(), *s));
    sets.dedup();
    let mut out: Vec<VarSet> = Vec::with_capacity(sets.len());
    for s in sets {
        if !out.iter().any(|t| t.is_subset(s)) {
            out.push(s);
        }
    }
    out.sort();
    out
}

/// Keeps the inclusion-maximal sets, deduplicated and sorted.
pub fn maximal_sets(mut sets: Vec<VarSet>) -> Vec<VarSet> {
    sets.sort_by_key(|s| (std::cmp::Reverse(s.len()), *s));
    sets.dedup();
    let mut out: Vec<VarSet> = Vec::with_capacity(sets.len());
    for s in sets {
        if !out.iter().any(|t| s.is_subset(*t)) {
            out.push(s);
        }
    }
    out.sort();
    out
}

/// All inclusion-minimal transversals (hitting sets) of `edges`, by
/// Berge's incremental method.
///
/// An empty member of `edges` cannot be hit, so the result is empty then;
/// no edges at all gives the single transversal `{}`.
pub fn minimal_transversals(edges: &[VarSet]) -> Vec<VarSet> {
    let mut edges: Vec<VarSet> = minimal_sets(edges.to_vec());
    edges.sort_by_key(|s| s.len());
    let mut trans = vec![VarSet::EMPTY];
    for &edge in &edges {
        let mut next = Vec::with_capacity(trans.len() * 2);
        for &t in &trans {
            if t.intersects(edge) {
                next.push(t);
            } else {
                next.extend(edge.iter().map(|v| t.with(v)));
            }
        }
        trans = minimal_sets(next);
    }
    trans
}
