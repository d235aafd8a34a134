//! Path ordered matchings and the ideals `I_e^G` built from them.
//!
//! An ordered matching `e_1, ..., e_r` is *path ordered* when its vertices can
//! be relabeled so that `e_i = {i, i+r}` and
//!
//! * (a) the connectors `f_i = {i, i+1+r}` are edges for `i < r`;
//! * (b) no edge `{i, j+r}` has `j < i`.
//!
//! Condition (a) chains the matching into an alternating path
//! `b_1 a_1 b_2 a_2 ... a_r` (with `a_i` labeled `i`, `b_i` labeled `i+r`), so
//! the relabeling is determined by the orientation of `e_1`.
//! [`validate_pom`] constructs it instead of searching all relabelings.
//!
//! For a matching `e`, `M_e^G` collects the cofactors `m` with
//! `m * prod_{i in I} e_i - n = T_c` for a cycle `c` and `I` nonempty, and
//! `I_e^G = P(G \ e) + (M_e^G)`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::graph::{enumerate_cycles, Cycle, EdgeId, Graph, GraphError, Vertex};
use crate::groebner::{GroebnerError, IdealPresentation, MonomialIdeal};
use crate::poly::{LexOrder, Monomial, PolyError, TwoTermPoly};
use crate::toric::{cycle_binomials, ToricError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FreeVariableFailure {
    /// The graph still has leaves.
    Leaves(Vec<Vertex>),
    /// The matching can be enlarged.
    NotMaximal,
    /// Leafless graph, maximal matching, and still no usable variable.
    NoneFound,
}

impl fmt::Display for FreeVariableFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FreeVariableFailure::Leaves(v) => write!(f, "graph has leaves {v:?}"),
            FreeVariableFailure::NotMaximal => write!(f, "matching is not maximal"),
            FreeVariableFailure::NoneFound => {
                write!(f, "no indeterminate in M for a leafless graph and maximal matching")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PomError {
    #[error("edge {0} is not in the graph")]
    UnknownEdge(EdgeId),
    #[error("not a matching: {0} and {1} share a vertex")]
    NotAMatching(EdgeId, EdgeId),
    #[error("condition (a) fails at i={index}: no connector from vertex {from} to an endpoint of {next}")]
    ConditionA { index: usize, from: Vertex, next: EdgeId },
    #[error("condition (b) fails: edge {edge} joins label {top} to label {bottom} (j={j} < i={i})")]
    ConditionB { edge: EdgeId, top: u32, bottom: u32, i: usize, j: usize },
    #[error("no free variable: {0}")]
    NoFreeVariable(FreeVariableFailure),
    #[error("position {0} is outside the matching")]
    BadPosition(usize),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Toric(#[from] ToricError),
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
}

impl From<PolyError> for PomError {
    fn from(e: PolyError) -> Self {
        PomError::Groebner(e.into())
    }
}

/// A validated path ordered matching with its witness relabeling.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathOrderedMatching {
    edges: Vec<EdgeId>,
    labeling: BTreeMap<Vertex, u32>,
}

impl PathOrderedMatching {
    pub fn empty() -> Self {
        PathOrderedMatching { edges: Vec::new(), labeling: BTreeMap::new() }
    }

    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Old vertex label to new label in `1..=2r`.
    pub fn labeling(&self) -> &BTreeMap<Vertex, u32> {
        &self.labeling
    }

    pub fn contains(&self, e: EdgeId) -> bool {
        self.edges.contains(&e)
    }

    /// 1-based position of `e`.
    pub fn position(&self, e: EdgeId) -> Option<usize> {
        self.edges.iter().position(|&x| x == e).map(|i| i + 1)
    }

    pub fn last(&self) -> Option<EdgeId> {
        self.edges.last().copied()
    }

    /// The first `s` edges, revalidated in `g`.
    pub fn prefix(&self, g: &Graph, s: usize) -> Result<PathOrderedMatching, PomError> {
        if s > self.len() {
            return Err(PomError::BadPosition(s));
        }
        validate_pom(g, &self.edges[..s])
    }

    /// The edge sequence with the `s`-th edge (1-based) removed.
    pub fn sequence_without(&self, s: usize) -> Result<Vec<EdgeId>, PomError> {
        if s == 0 || s > self.len() {
            return Err(PomError::BadPosition(s));
        }
        let mut v = self.edges.clone();
        v.remove(s - 1);
        Ok(v)
    }

    /// The lex order used with this matching when `e_s` is the edge to be
    /// removed: `e_s` first, the other matching edges in reverse matching
    /// order, then every remaining variable by ascending id. With `s = r`
    /// this is `e_r > ... > e_1 > f`.
    pub fn term_order(
        &self,
        s: usize,
        vars: impl IntoIterator<Item = EdgeId>,
    ) -> Result<LexOrder, PomError> {
        let mut top = Vec::with_capacity(self.len());
        if s > 0 {
            if s > self.len() {
                return Err(PomError::BadPosition(s));
            }
            top.push(self.edges[s - 1]);
        }
        let first = top.first().copied();
        top.extend(self.edges.iter().rev().filter(|&&e| Some(e) != first));
        let vars: Vec<EdgeId> = vars.into_iter().collect();
        Ok(LexOrder::promoted(&top, vars)?)
    }

    /// Rendering for certificates: the ordered edges and the labeling table.
    pub fn describe(&self) -> (Vec<String>, Vec<(Vertex, u32)>) {
        (
            self.edges.iter().map(|e| e.to_string()).collect(),
            self.labeling.iter().map(|(&v, &l)| (v, l)).collect(),
        )
    }
}

impl fmt::Display for PathOrderedMatching {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.edges.iter().map(|e| e.to_string()).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// Checks that `order` has `e_s` above the other matching edges and every
/// matching edge above every other variable. Returns a description of the
/// first violation.
pub fn check_term_order(pom: &[EdgeId], s: usize, order: &LexOrder) -> Result<(), String> {
    if s == 0 || s > pom.len() {
        return Err(format!("position {s} is outside a matching of length {}", pom.len()));
    }
    let es = pom[s - 1];
    for &e in pom {
        if !order.contains(e) {
            return Err(format!("{e} is not in the term order"));
        }
        if e != es && !order.is_above(es, e) {
            return Err(format!("{es} must be above {e}"));
        }
    }
    for &f in order.priority() {
        if pom.contains(&f) {
            continue;
        }
        if let Some(&e) = pom.iter().find(|&&e| !order.is_above(e, f)) {
            return Err(format!("{e} must be above {f}"));
        }
    }
    Ok(())
}

struct Orientation {
    tops: Vec<Vertex>,
    bottoms: Vec<Vertex>,
}

// All orientations satisfying (a), with e_1's lower endpoint tried as the top
// vertex first. On failure, reports the deepest (a)-violation.
fn chain_orientations(g: &Graph, edges: &[(EdgeId, Vertex, Vertex)]) -> Result<Vec<Orientation>, PomError> {
    let (_, u, v) = edges[0];
    let mut found = Vec::new();
    let mut first_failure: Option<PomError> = None;
    for (top, bottom) in [(u.min(v), u.max(v)), (u.max(v), u.min(v))] {
        let mut partial = vec![(vec![top], vec![bottom])];
        for i in 1..edges.len() {
            let (id, p, q) = edges[i];
            let mut next = Vec::new();
            for (tops, bottoms) in &partial {
                let prev = *tops.last().unwrap();
                for (b, a) in [(p, q), (q, p)] {
                    if g.find_edge(prev, b).is_some() {
                        let (mut t, mut bs) = (tops.clone(), bottoms.clone());
                        t.push(a);
                        bs.push(b);
                        next.push((t, bs));
                    }
                }
                if next.is_empty() && first_failure.is_none() {
                    first_failure = Some(PomError::ConditionA { index: i, from: prev, next: id });
                }
            }
            partial = next;
        }
        found.extend(partial.into_iter().map(|(tops, bottoms)| Orientation { tops, bottoms }));
    }
    if found.is_empty() {
        return Err(first_failure.expect("a failure was recorded"));
    }
    Ok(found)
}

fn condition_b(g: &Graph, o: &Orientation) -> Result<(), PomError> {
    let r = o.tops.len();
    for (i, &top) in o.tops.iter().enumerate() {
        for (j, &bottom) in o.bottoms.iter().enumerate().take(i) {
            if let Some(edge) = g.find_edge(top, bottom) {
                return Err(PomError::ConditionB {
                    edge,
                    top: (i + 1) as u32,
                    bottom: (j + 1 + r) as u32,
                    i: i + 1,
                    j: j + 1,
                });
            }
        }
    }
    Ok(())
}

/// Validates an ordered edge list as a path ordered matching and returns the
/// witness relabeling.
///
/// When both orientations of `e_1` work, the one giving label 1 to the lower
/// vertex is kept. A failure of (b) is reported in preference to a failure of
/// (a).
pub fn validate_pom(g: &Graph, edges: &[EdgeId]) -> Result<PathOrderedMatching, PomError> {
    let mut ends = Vec::with_capacity(edges.len());
    for &id in edges {
        let e = g.edge(id).ok_or(PomError::UnknownEdge(id))?;
        ends.push((id, e.u, e.v));
    }
    for (i, a) in ends.iter().enumerate() {
        for b in &ends[..i] {
            if a.0 == b.0 || [a.1, a.2].iter().any(|&x| x == b.1 || x == b.2) {
                return Err(PomError::NotAMatching(b.0, a.0));
            }
        }
    }
    if ends.is_empty() {
        return Ok(PathOrderedMatching::empty());
    }
    let r = ends.len();
    let mut b_failure = None;
    for o in chain_orientations(g, &ends)? {
        match condition_b(g, &o) {
            Ok(()) => {
                let mut labeling = BTreeMap::new();
                for i in 0..r {
                    labeling.insert(o.tops[i], (i + 1) as u32);
                    labeling.insert(o.bottoms[i], (i + 1 + r) as u32);
                }
                return Ok(PathOrderedMatching { edges: edges.to_vec(), labeling });
            }
            Err(e) => {
                b_failure.get_or_insert(e);
            }
        }
    }
    Err(b_failure.unwrap())
}

/// Every path ordered matching of `g` as an edge sequence, sorted and
/// deduplicated. Exhaustive; the count grows quickly with the graph.
pub fn enumerate_poms(g: &Graph) -> Vec<Vec<EdgeId>> {
    let adj = g.adjacency();
    let mut out = BTreeSet::new();
    for e in g.edges() {
        for (top, bottom) in [(e.u, e.v), (e.v, e.u)] {
            let mut state = PomSearch {
                tops: vec![top],
                bottoms: vec![bottom],
                seq: vec![e.id],
                used: BTreeSet::from([top, bottom]),
            };
            state.grow(g, &adj, &mut out);
        }
    }
    out.into_iter().collect()
}

struct PomSearch {
    tops: Vec<Vertex>,
    bottoms: Vec<Vertex>,
    seq: Vec<EdgeId>,
    used: BTreeSet<Vertex>,
}

impl PomSearch {
    fn grow(
        &mut self,
        g: &Graph,
        adj: &BTreeMap<Vertex, Vec<(Vertex, EdgeId)>>,
        out: &mut BTreeSet<Vec<EdgeId>>,
    ) {
        out.insert(self.seq.clone());
        let last = *self.tops.last().unwrap();
        for &(b, _) in &adj[&last] {
            if self.used.contains(&b) {
                continue;
            }
            for &(a, e) in &adj[&b] {
                if self.used.contains(&a) {
                    continue;
                }
                // (b): the new top may only see bottoms at its own position or later.
                if self.bottoms.iter().any(|&x| g.find_edge(a, x).is_some()) {
                    continue;
                }
                self.tops.push(a);
                self.bottoms.push(b);
                self.seq.push(e);
                self.used.insert(a);
                self.used.insert(b);
                self.grow(g, adj, out);
                self.used.remove(&a);
                self.used.remove(&b);
                self.seq.pop();
                self.bottoms.pop();
                self.tops.pop();
            }
        }
    }
}

/// Whether no path ordered matching of `g` strictly contains the edge set of
/// `pom`, in any order. Exhaustive over [`enumerate_poms`].
pub fn is_maximal(g: &Graph, pom: &PathOrderedMatching) -> bool {
    strict_supersets(g, pom.edges()).is_empty()
}

fn strict_supersets(g: &Graph, edges: &[EdgeId]) -> Vec<Vec<EdgeId>> {
    let set: BTreeSet<EdgeId> = edges.iter().copied().collect();
    enumerate_poms(g)
        .into_iter()
        .filter(|s| s.len() > set.len() && set.iter().all(|e| s.contains(e)))
        .collect()
}

fn is_subsequence(small: &[EdgeId], big: &[EdgeId]) -> bool {
    let mut it = big.iter();
    small.iter().all(|x| it.any(|y| y == x))
}

/// Grows `pom` to a maximal path ordered matching.
///
/// Candidate edges are tried by ascending id and inserted at the first
/// position (left to right) that validates, until no single insertion works.
/// If a larger matching still exists, the smallest one keeping the current
/// edges in their relative order is adopted and growth continues.
pub fn extend_pom(g: &Graph, pom: &PathOrderedMatching) -> Result<PathOrderedMatching, PomError> {
    let mut cur = pom.clone();
    loop {
        let mut grown = false;
        'search: for cand in g.edge_ids() {
            if cur.contains(cand) {
                continue;
            }
            for pos in 0..=cur.len() {
                let mut seq = cur.edges().to_vec();
                seq.insert(pos, cand);
                if let Ok(next) = validate_pom(g, &seq) {
                    cur = next;
                    grown = true;
                    break 'search;
                }
            }
        }
        if grown {
            continue;
        }
        let mut supers = strict_supersets(g, cur.edges());
        if supers.is_empty() {
            return Ok(cur);
        }
        supers.sort_by_key(|s| (!is_subsequence(cur.edges(), s), s.len(), s.clone()));
        cur = validate_pom(g, &supers[0])?;
    }
}

/// A maximal path ordered matching grown from the smallest edge id.
pub fn find_maximal_pom(g: &Graph) -> Result<PathOrderedMatching, PomError> {
    extend_pom(g, &PathOrderedMatching::empty())
}

/// One contribution to `M_e^G`: the side of cycle `cycle` equal to
/// `monomial * prod_{i in indices} e_i`, opposite to `other_side`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MEntry {
    pub monomial: Monomial,
    pub cycle: Cycle,
    /// 1-based positions of the matching edges on this side.
    pub indices: Vec<usize>,
    pub other_side: Monomial,
    /// Whether the opposite side also meets the matching.
    pub both_sides: bool,
}

impl MEntry {
    /// The full side `monomial * prod e_i` of the witness cycle.
    pub fn side(&self, pom: &PathOrderedMatching) -> Monomial {
        let es = self.indices.iter().map(|&i| pom.edges()[i - 1]);
        self.monomial.mul(&Monomial::product(es))
    }
}

/// The cofactor set `M_e^G` with one witness per (cycle, side).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MSet {
    entries: Vec<MEntry>,
}

impl MSet {
    pub fn entries(&self) -> &[MEntry] {
        &self.entries
    }

    /// Distinct cofactors, sorted by degree and then canonically.
    pub fn monomials(&self) -> Vec<Monomial> {
        let mut v: Vec<Monomial> = self.entries.iter().map(|e| e.monomial.clone()).collect();
        v.sort_by(|a, b| a.degree().cmp(&b.degree()).then_with(|| a.cmp(b)));
        v.dedup();
        v
    }

    pub fn ideal(&self) -> MonomialIdeal {
        MonomialIdeal::new(self.monomials())
    }

    /// Cofactors of degree one, ascending.
    pub fn variables(&self) -> Vec<EdgeId> {
        let mut v: Vec<EdgeId> = self
            .monomials()
            .into_iter()
            .filter(|m| m.degree() == 1)
            .flat_map(|m| m.support().collect::<Vec<_>>())
            .collect();
        v.sort();
        v
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Scans every cycle of `g`; each side meeting the matching contributes its
/// cofactor.
pub fn compute_m(g: &Graph, pom: &PathOrderedMatching) -> MSet {
    let mut entries = Vec::new();
    for cycle in enumerate_cycles(g) {
        let (odd, even) = cycle.alternating_sides();
        let hits = |side: &[EdgeId]| side.iter().any(|e| pom.contains(*e));
        let both = hits(&odd) && hits(&even);
        for (side, other) in [(&odd, &even), (&even, &odd)] {
            let mut indices: Vec<usize> = side.iter().filter_map(|&e| pom.position(e)).collect();
            if indices.is_empty() {
                continue;
            }
            indices.sort();
            entries.push(MEntry {
                monomial: Monomial::product(side.iter().copied().filter(|e| !pom.contains(*e))),
                cycle: cycle.clone(),
                indices,
                other_side: Monomial::product(other.iter().copied()),
                both_sides: both,
            });
        }
    }
    MSet { entries }
}

/// Which generators to take for `I_e^G`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GeneratorSet {
    /// Every cycle binomial of `G \ e` and every element of `M_e^G`.
    Full,
    /// Like `Full`, but cycles meeting the matching on both sides are
    /// skipped.
    OneSided,
}

/// The natural generators of `I_e^G` (cycle binomials first, then the
/// cofactor monomials), not minimalized.
pub fn raw_generators(
    g: &Graph,
    pom: &PathOrderedMatching,
    ord: &LexOrder,
    which: GeneratorSet,
) -> Result<Vec<TwoTermPoly>, PomError> {
    let rest = g.delete_edges(pom.edges())?;
    let mut gens = cycle_binomials(&enumerate_cycles(&rest), ord)?;
    let m = compute_m(g, pom);
    let mut monos: Vec<Monomial> = m
        .entries()
        .iter()
        .filter(|e| which == GeneratorSet::Full || !e.both_sides)
        .map(|e| e.monomial.clone())
        .collect();
    monos.sort();
    monos.dedup();
    for mono in monos {
        ord.check_monomial(&mono)?;
        gens.push(TwoTermPoly::monomial(mono));
    }
    Ok(gens)
}

/// `I_e^G = P(G \ e) + (M_e^G)` with the cofactors minimalized. The empty
/// matching gives `P(G)`.
pub fn build_i(g: &Graph, pom: &PathOrderedMatching, ord: &LexOrder) -> Result<IdealPresentation, PomError> {
    let rest = g.delete_edges(pom.edges())?;
    let mut gens = cycle_binomials(&enumerate_cycles(&rest), ord)?;
    gens.extend(compute_m(g, pom).ideal().generators().iter().cloned().map(TwoTermPoly::monomial));
    Ok(IdealPresentation::new(gens, ord.clone())?)
}

/// An indeterminate `x` in `M_e^G` such that `e` is still a path ordered
/// matching of `G \ x`; the smallest such id.
pub fn find_free_variable(g: &Graph, pom: &PathOrderedMatching) -> Result<EdgeId, PomError> {
    let leaves = g.leaves();
    if !leaves.is_empty() {
        return Err(PomError::NoFreeVariable(FreeVariableFailure::Leaves(leaves)));
    }
    for x in compute_m(g, pom).variables() {
        if validate_pom(&g.delete_edge(x)?, pom.edges()).is_ok() {
            return Ok(x);
        }
    }
    if !is_maximal(g, pom) {
        return Err(PomError::NoFreeVariable(FreeVariableFailure::NotMaximal));
    }
    Err(PomError::NoFreeVariable(FreeVariableFailure::NoneFound))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::toric::kernel_member;

    fn ids(v: &[u32]) -> Vec<EdgeId> {
        v.iter().map(|&i| EdgeId(i)).collect()
    }

    fn m(s: &str) -> Monomial {
        s.parse().unwrap()
    }

    // Oracle for validity: try every bijection of the 2r endpoints onto
    // labels that maps each e_i to {i, i+r}, i.e. every orientation.
    fn brute_valid(g: &Graph, seq: &[EdgeId]) -> bool {
        let r = seq.len();
        let ends: Vec<(Vertex, Vertex)> = seq.iter().map(|&e| {
            let x = g.edge(e).unwrap();
            (x.u, x.v)
        }).collect();
        let all: BTreeSet<Vertex> = ends.iter().flat_map(|&(u, v)| [u, v]).collect();
        if all.len() != 2 * r {
            return false;
        }
        (0u32..(1 << r)).any(|mask| {
            let mut label = BTreeMap::new();
            for (i, &(u, v)) in ends.iter().enumerate() {
                let (a, b) = if mask >> i & 1 == 0 { (u, v) } else { (v, u) };
                label.insert(a, i + 1);
                label.insert(b, i + 1 + r);
            }
            let cond_a = (1..r).all(|i| {
                let a = ends[i - 1];
                let top = if mask >> (i - 1) & 1 == 0 { a.0 } else { a.1 };
                let n = ends[i];
                let bottom = if mask >> i & 1 == 0 { n.1 } else { n.0 };
                g.find_edge(top, bottom).is_some()
            });
            let cond_b = g.edges().iter().all(|e| match (label.get(&e.u), label.get(&e.v)) {
                (Some(&x), Some(&y)) => {
                    let (lo, hi) = (x.min(y), x.max(y));
                    !(lo <= r && hi > r && hi - r < lo)
                }
                _ => true,
            });
            cond_a && cond_b
        })
    }

    #[test]
    fn figure_skeleton_is_valid_with_identity_labels() {
        let g = corpus::pom_skeleton();
        let p = validate_pom(&g, &ids(&[1, 2, 3, 4, 5])).unwrap();
        assert!(p.labeling().iter().all(|(v, l)| v == l));
        assert!(is_maximal(&g, &p));
        assert_eq!(extend_pom(&g, &p).unwrap(), p);
        let shorter = validate_pom(&g, &ids(&[1, 2, 3, 4])).unwrap();
        assert!(!is_maximal(&g, &shorter));
    }

    #[test]
    fn backward_edge_violates_b() {
        let mut pairs: Vec<(u32, u32)> = (1..=5).map(|i| (i, i + 5)).collect();
        pairs.extend((1..=4).map(|i| (i, i + 6)));
        pairs.push((6, 2));
        let g = Graph::from_pairs(&pairs).unwrap();
        match validate_pom(&g, &ids(&[1, 2, 3, 4, 5])) {
            Err(PomError::ConditionB { edge, i, j, .. }) => {
                assert_eq!(edge, EdgeId(10));
                assert_eq!((i, j), (2, 1));
            }
            other => panic!("expected (b) failure, got {other:?}"),
        }
    }

    #[test]
    fn c4_two_matching_fails_b_in_both_orders() {
        let g = corpus::c4();
        for seq in [ids(&[1, 3]), ids(&[3, 1])] {
            assert!(matches!(validate_pom(&g, &seq), Err(PomError::ConditionB { .. })));
            assert!(!brute_valid(&g, &seq));
        }
    }

    #[test]
    fn structural_errors() {
        let g = corpus::c4();
        assert_eq!(validate_pom(&g, &ids(&[1, 2])), Err(PomError::NotAMatching(EdgeId(1), EdgeId(2))));
        assert_eq!(validate_pom(&g, &ids(&[9])), Err(PomError::UnknownEdge(EdgeId(9))));
        let path = Graph::parse("1 2\n3 4\n5 6").unwrap();
        assert!(matches!(validate_pom(&path, &ids(&[1, 2])), Err(PomError::ConditionA { index: 1, .. })));
    }

    #[test]
    fn validation_matches_brute_force_on_corpus() {
        for (name, g) in corpus::all() {
            let q = g.q() as u32;
            for a in 1..=q {
                for b in 1..=q {
                    if a == b {
                        continue;
                    }
                    let seq = ids(&[a, b]);
                    assert_eq!(validate_pom(&g, &seq).is_ok(), brute_valid(&g, &seq), "{name} {seq:?}");
                    for c in 1..=q {
                        if c == a || c == b {
                            continue;
                        }
                        let seq = ids(&[a, b, c]);
                        assert_eq!(validate_pom(&g, &seq).is_ok(), brute_valid(&g, &seq), "{name} {seq:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn enumeration_agrees_with_validation() {
        for (name, g) in corpus::all() {
            for seq in enumerate_poms(&g) {
                assert!(validate_pom(&g, &seq).is_ok(), "{name} {seq:?}");
            }
        }
    }

    #[test]
    fn maximality_examples() {
        let c4 = corpus::c4();
        let p = validate_pom(&c4, &ids(&[1])).unwrap();
        assert!(is_maximal(&c4, &p));
        assert_eq!(extend_pom(&c4, &p).unwrap(), p);
        let k23 = corpus::k23();
        let grown = find_maximal_pom(&k23).unwrap();
        // In a complete bipartite graph every later top vertex sees b_1.
        assert_eq!(grown.len(), 1);
        assert!(enumerate_poms(&k23).iter().all(|s| s.len() == 1));
        let c6 = corpus::c6();
        let one = validate_pom(&c6, &ids(&[1])).unwrap();
        assert!(!is_maximal(&c6, &one));
        assert_eq!(extend_pom(&c6, &one).unwrap().len(), 2);
    }

    #[test]
    fn extension_keeps_relative_order() {
        for (name, g) in corpus::all() {
            for seed in g.edge_ids() {
                let p = validate_pom(&g, &[seed]).unwrap();
                let grown = extend_pom(&g, &p).unwrap();
                assert!(is_maximal(&g, &grown), "{name}");
                assert!(grown.contains(seed), "{name}");
            }
        }
    }

    #[test]
    fn m_set_examples() {
        let c4 = corpus::c4();
        let p = validate_pom(&c4, &ids(&[1])).unwrap();
        let ms = compute_m(&c4, &p);
        assert_eq!(ms.monomials(), vec![m("e3")]);
        assert_eq!(ms.entries()[0].indices, vec![1]);
        let forest = Graph::parse("1 2\n2 3").unwrap();
        let p = validate_pom(&forest, &ids(&[1])).unwrap();
        assert!(compute_m(&forest, &p).is_empty());
        let k23 = corpus::k23();
        let p = find_maximal_pom(&k23).unwrap();
        assert!(compute_m(&k23, &p).monomials().iter().any(|m| m.degree() == 1));
    }

    #[test]
    fn m_witnesses_reconstruct_kernel_binomials() {
        for (name, g) in corpus::all() {
            let o = LexOrder::by_ascending_id(g.edge_ids());
            let p = find_maximal_pom(&g).unwrap();
            for entry in compute_m(&g, &p).entries() {
                let t = TwoTermPoly::orient(entry.side(&p), entry.other_side.clone(), &o);
                assert!(kernel_member(&t, &g).unwrap(), "{name}: {t}");
            }
        }
    }

    #[test]
    fn build_i_examples() {
        let c4 = corpus::c4();
        let p = validate_pom(&c4, &ids(&[1])).unwrap();
        let o = p.term_order(1, c4.edge_ids()).unwrap();
        let i = build_i(&c4, &p, &o).unwrap();
        assert_eq!(i.generators(), &[TwoTermPoly::var(EdgeId(3))]);
        let empty = PathOrderedMatching::empty();
        let p0 = build_i(&c4, &empty, &o).unwrap();
        let direct = crate::toric::toric_ideal(&c4, &o).unwrap();
        assert!(p0.equals(&direct).unwrap());
    }

    #[test]
    fn free_variable_examples() {
        let c4 = corpus::c4();
        let p = validate_pom(&c4, &ids(&[1])).unwrap();
        assert_eq!(find_free_variable(&c4, &p), Ok(EdgeId(3)));
        let k33 = corpus::k33();
        let p = find_maximal_pom(&k33).unwrap();
        let x = find_free_variable(&k33, &p).unwrap();
        assert!(validate_pom(&k33.delete_edge(x).unwrap(), p.edges()).is_ok());
        let path = Graph::parse("1 2\n2 3").unwrap();
        let p = validate_pom(&path, &ids(&[1])).unwrap();
        assert!(matches!(
            find_free_variable(&path, &p),
            Err(PomError::NoFreeVariable(FreeVariableFailure::Leaves(_)))
        ));
    }

    #[test]
    fn term_order_layout() {
        let g = corpus::pom_skeleton();
        let p = validate_pom(&g, &ids(&[1, 2, 3])).unwrap();
        let o = p.term_order(3, g.edge_ids()).unwrap();
        assert_eq!(&o.priority()[..4], &ids(&[3, 2, 1, 4])[..]);
        assert!(check_term_order(p.edges(), 3, &o).is_ok());
        let o2 = p.term_order(2, g.edge_ids()).unwrap();
        assert_eq!(&o2.priority()[..3], &ids(&[2, 3, 1])[..]);
        assert!(check_term_order(p.edges(), 2, &o2).is_ok());
        assert!(check_term_order(p.edges(), 3, &o2).is_err());
        let natural = LexOrder::by_ascending_id(g.edge_ids());
        assert!(check_term_order(p.edges(), 3, &natural).is_err());
    }
}
