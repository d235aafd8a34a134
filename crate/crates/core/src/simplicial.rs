//! Stanley–Reisner complexes of squarefree monomial ideals and vertex
//! decomposability.
//!
//! A complex is stored by its facets over an explicit vertex set. The facets
//! of the complex of a squarefree ideal are the complements of its minimal
//! primes, and its minimal non-faces are the minimal transversals of the
//! facet complements, so both directions reduce to transversal search.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::graph::{EdgeId, Graph, GraphError};
use crate::groebner::{GroebnerError, MonomialIdeal};
use crate::pom::{build_i, find_free_variable, is_maximal, validate_pom, PathOrderedMatching, PomError};
use crate::poly::{LexOrder, Monomial, PolyError};
use crate::varset::{maximal_sets, minimal_transversals, VarSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimplicialError {
    #[error("monomial ideal is not squarefree: generator {0}")]
    NotSquarefree(Monomial),
    #[error("generator variable {0} is outside the vertex set")]
    ForeignVertex(EdgeId),
    #[error("{0} is not a vertex of the complex")]
    UnknownVertex(EdgeId),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Pom(#[from] PomError),
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
}

impl From<PolyError> for SimplicialError {
    fn from(e: PolyError) -> Self {
        SimplicialError::Groebner(e.into())
    }
}

/// A simplicial complex given by its facets. No facet is the void complex;
/// `{}` as the only facet is the complex whose only face is empty.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SimplicialComplex {
    vertices: VarSet,
    facets: Vec<VarSet>,
}

impl SimplicialComplex {
    /// The complex generated by `faces`, minimalized to facets.
    pub fn new(vertices: VarSet, faces: impl IntoIterator<Item = VarSet>) -> Result<Self, SimplicialError> {
        let faces: Vec<VarSet> = faces.into_iter().collect();
        if let Some(v) = faces.iter().flat_map(|f| f.difference(vertices).iter()).next() {
            return Err(SimplicialError::ForeignVertex(v));
        }
        Ok(Self::from_facets(vertices, faces))
    }

    fn from_facets(vertices: VarSet, faces: Vec<VarSet>) -> Self {
        let mut facets = maximal_sets(faces);
        facets.sort();
        SimplicialComplex { vertices, facets }
    }

    pub fn simplex(vertices: VarSet) -> Self {
        SimplicialComplex { vertices, facets: vec![vertices] }
    }

    pub fn vertices(&self) -> VarSet {
        self.vertices
    }

    pub fn facets(&self) -> &[VarSet] {
        &self.facets
    }

    /// No faces at all, not even the empty one.
    pub fn is_void(&self) -> bool {
        self.facets.is_empty()
    }

    /// `None` for the void complex, otherwise the largest facet size minus one.
    pub fn dim(&self) -> Option<isize> {
        self.facets.iter().map(|f| f.len() as isize - 1).max()
    }

    pub fn is_pure(&self) -> bool {
        self.facets.windows(2).all(|w| w[0].len() == w[1].len())
    }

    pub fn is_simplex(&self) -> bool {
        self.facets.len() == 1
    }

    pub fn is_face(&self, f: VarSet) -> bool {
        self.facets.iter().any(|&x| f.is_subset(x))
    }

    /// Every facet contains `v`.
    pub fn is_cone(&self, v: EdgeId) -> bool {
        !self.facets.is_empty() && self.facets.iter().all(|f| f.contains(v))
    }

    fn check_vertex(&self, v: EdgeId) -> Result<(), SimplicialError> {
        if VarSet::fits(v) && self.vertices.contains(v) {
            Ok(())
        } else {
            Err(SimplicialError::UnknownVertex(v))
        }
    }

    /// `{F : v not in F, F + v in Δ}` on the vertex set without `v`.
    pub fn link(&self, v: EdgeId) -> Result<SimplicialComplex, SimplicialError> {
        self.check_vertex(v)?;
        let faces = self.facets.iter().filter(|f| f.contains(v)).map(|f| f.without(v)).collect();
        Ok(Self::from_facets(self.vertices.without(v), faces))
    }

    /// `{F in Δ : v not in F}` on the vertex set without `v`.
    pub fn deletion(&self, v: EdgeId) -> Result<SimplicialComplex, SimplicialError> {
        self.check_vertex(v)?;
        let faces = self.facets.iter().map(|f| f.without(v)).collect();
        Ok(Self::from_facets(self.vertices.without(v), faces))
    }

    /// Faces contained in `w`, on the vertex set `w`.
    pub fn restriction(&self, w: VarSet) -> SimplicialComplex {
        let faces = self.facets.iter().map(|f| f.intersection(w)).collect();
        Self::from_facets(self.vertices.intersection(w), faces)
    }

    /// Minimal non-faces as squarefree monomials. The void complex gives the
    /// unit ideal.
    pub fn stanley_reisner_ideal(&self) -> MonomialIdeal {
        let complements: Vec<VarSet> = self.facets.iter().map(|f| self.vertices.difference(*f)).collect();
        MonomialIdeal::new(minimal_transversals(&complements).into_iter().map(|s| Monomial::product(s.iter())))
    }
}

impl fmt::Display for SimplicialComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.facets.iter().map(|s| s.to_string()).collect();
        write!(f, "<{}>", parts.join(", "))
    }
}

/// The complex on `vertices` whose Stanley–Reisner ideal is `mi`.
pub fn complex_of(mi: &MonomialIdeal, vertices: VarSet) -> Result<SimplicialComplex, SimplicialError> {
    for g in mi.generators() {
        if !g.is_squarefree() {
            return Err(SimplicialError::NotSquarefree(g.clone()));
        }
        if let Some(v) = g.support().find(|&v| !VarSet::fits(v) || !vertices.contains(v)) {
            return Err(SimplicialError::ForeignVertex(v));
        }
    }
    let faces = mi.minimal_primes()?.into_iter().map(|p| vertices.difference(p)).collect();
    Ok(SimplicialComplex::from_facets(vertices, faces))
}

/// A proof tree for vertex decomposability.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum VdWitness {
    Empty,
    Simplex {
        #[serde(serialize_with = "edge_names")]
        facet: Vec<EdgeId>,
    },
    Shed {
        #[serde(serialize_with = "edge_name")]
        vertex: EdgeId,
        link: Arc<VdWitness>,
        deletion: Arc<VdWitness>,
    },
}

// Certificates name edges `e<n>` everywhere.
fn edge_name<S: serde::Serializer>(e: &EdgeId, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(e)
}

fn edge_names<S: serde::Serializer>(es: &[EdgeId], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(es.iter().map(|e| e.to_string()))
}

impl VdWitness {
    /// Shedding vertices in preorder.
    pub fn shedding_order(&self) -> Vec<EdgeId> {
        match self {
            VdWitness::Shed { vertex, link, deletion } => {
                let mut v = vec![*vertex];
                v.extend(link.shedding_order());
                v.extend(deletion.shedding_order());
                v
            }
            _ => Vec::new(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VdOutcome {
    Decomposable(Arc<VdWitness>),
    NotVd { reason: String },
}

impl VdOutcome {
    pub fn is_vd(&self) -> bool {
        matches!(self, VdOutcome::Decomposable(_))
    }

    pub fn witness(&self) -> Option<&Arc<VdWitness>> {
        match self {
            VdOutcome::Decomposable(w) => Some(w),
            VdOutcome::NotVd { .. } => None,
        }
    }
}

fn link_facets(facets: &[VarSet], v: EdgeId) -> Vec<VarSet> {
    let mut out = maximal_sets(facets.iter().filter(|f| f.contains(v)).map(|f| f.without(v)).collect());
    out.sort();
    out
}

fn deletion_facets(facets: &[VarSet], v: EdgeId) -> Vec<VarSet> {
    let mut out = maximal_sets(facets.iter().map(|f| f.without(v)).collect());
    out.sort();
    out
}

fn pure(facets: &[VarSet]) -> bool {
    facets.windows(2).all(|w| w[0].len() == w[1].len())
}

fn top_size(facets: &[VarSet]) -> usize {
    facets.iter().map(|f| f.len()).max().unwrap_or(0)
}

/// Exhaustive search for shedding vertices, memoized on facet lists.
///
/// Only facets matter for the recursion, so one checker can be shared by
/// all complexes of a run.
#[derive(Default)]
pub struct VdChecker {
    memo: HashMap<Vec<VarSet>, Result<Arc<VdWitness>, String>>,
}

impl VdChecker {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn memo_size(&self) -> usize {
        self.memo.len()
    }

    pub fn check(&mut self, d: &SimplicialComplex) -> VdOutcome {
        match self.search(d.facets()) {
            Ok(w) => VdOutcome::Decomposable(w),
            Err(reason) => VdOutcome::NotVd { reason },
        }
    }

    fn search(&mut self, facets: &[VarSet]) -> Result<Arc<VdWitness>, String> {
        if let Some(hit) = self.memo.get(facets) {
            return hit.clone();
        }
        let result = self.search_uncached(facets);
        self.memo.insert(facets.to_vec(), result.clone());
        result
    }

    fn search_uncached(&mut self, facets: &[VarSet]) -> Result<Arc<VdWitness>, String> {
        if facets.is_empty() || facets == [VarSet::EMPTY] {
            return Ok(Arc::new(VdWitness::Empty));
        }
        if facets.len() == 1 {
            return Ok(Arc::new(VdWitness::Simplex { facet: facets[0].iter().collect() }));
        }
        if !pure(facets) {
            return Err(format!("not pure: facet sizes differ in {}", show(facets)));
        }
        let size = top_size(facets);
        let support = facets.iter().fold(VarSet::EMPTY, |a, &b| a.union(b));
        for v in support.iter() {
            let link = link_facets(facets, v);
            let deletion = deletion_facets(facets, v);
            // dim Δ = dim(Δ \ v) = dim link + 1, both sides pure.
            if top_size(&deletion) != size || top_size(&link) + 1 != size {
                continue;
            }
            if !pure(&link) || !pure(&deletion) {
                continue;
            }
            let Ok(lw) = self.search(&link) else { continue };
            let Ok(dw) = self.search(&deletion) else { continue };
            return Ok(Arc::new(VdWitness::Shed { vertex: v, link: lw, deletion: dw }));
        }
        Err(format!("no shedding vertex in {}", show(facets)))
    }
}

fn show(facets: &[VarSet]) -> String {
    let parts: Vec<String> = facets.iter().map(|f| f.to_string()).collect();
    format!("<{}>", parts.join(", "))
}

/// Searches with a fresh memo; see [`VdChecker`] for reuse.
pub fn is_vertex_decomposable(d: &SimplicialComplex) -> VdOutcome {
    VdChecker::new().check(d)
}

/// Rechecks a witness against `d` without any search.
pub fn replay(d: &SimplicialComplex, w: &VdWitness) -> Result<(), String> {
    replay_facets(d.facets(), w)
}

fn replay_facets(facets: &[VarSet], w: &VdWitness) -> Result<(), String> {
    match w {
        VdWitness::Empty => {
            if facets.is_empty() || facets == [VarSet::EMPTY] {
                Ok(())
            } else {
                Err(format!("{} is not empty", show(facets)))
            }
        }
        VdWitness::Simplex { facet } => {
            let f: VarSet = facet.iter().copied().collect();
            if facets == [f] {
                Ok(())
            } else {
                Err(format!("{} is not the simplex {}", show(facets), f))
            }
        }
        VdWitness::Shed { vertex, link, deletion } => {
            if !pure(facets) {
                return Err(format!("{} is not pure", show(facets)));
            }
            let l = link_facets(facets, *vertex);
            let d = deletion_facets(facets, *vertex);
            let size = top_size(facets);
            if !pure(&l) || !pure(&d) || top_size(&d) != size || top_size(&l) + 1 != size {
                return Err(format!("{vertex} is not a shedding vertex of {}", show(facets)));
            }
            replay_facets(&l, link)?;
            replay_facets(&d, deletion)
        }
    }
}

/// `Δ^G_e`: the complex of `in(I_e^G)` on the edges of `g`.
pub fn matching_complex(
    g: &Graph,
    pom: &PathOrderedMatching,
    ord: &LexOrder,
) -> Result<SimplicialComplex, SimplicialError> {
    let init = build_i(g, pom, ord)?.initial_ideal()?;
    complex_of(&init, g.edge_ids().collect())
}

/// Identities used when `e` extends by one edge `v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionCheck {
    pub edge: EdgeId,
    pub extended: Vec<EdgeId>,
    pub order: LexOrder,
    /// `Δ_e \ v = Δ_e^{G \ v}`.
    pub deletion_matches: bool,
    /// `link_{Δ_e}(v)` equals `Δ_{e'}` with the cone point `v` removed.
    pub link_matches: bool,
    /// `Δ_{e'}` is a cone over `v`.
    pub cone: bool,
}

/// Identities used when `e` is maximal and `x` is the free variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitCheck {
    pub x: EdgeId,
    /// `Δ_e^{G \ x}` is the restriction of `Δ_e^G` to `E(G) \ x`.
    pub restriction_matches: bool,
    pub x_not_face: bool,
}

#[derive(Clone, Debug)]
pub struct CorollaryReport {
    pub complex: SimplicialComplex,
    pub outcome: VdOutcome,
    /// The witness replays without search.
    pub replayed: bool,
    pub extension: Option<ExtensionCheck>,
    pub split: Option<SplitCheck>,
    pub notes: Vec<String>,
}

impl CorollaryReport {
    pub fn holds(&self) -> bool {
        self.outcome.is_vd()
            && self.replayed
            && self.extension.as_ref().is_none_or(|x| x.deletion_matches && x.link_matches && x.cone)
            && self.split.as_ref().is_none_or(|x| x.restriction_matches && x.x_not_face)
    }
}

fn first_insertion(g: &Graph, pom: &PathOrderedMatching) -> Option<(EdgeId, PathOrderedMatching)> {
    for cand in g.edge_ids().filter(|e| !pom.contains(*e)) {
        for pos in 0..=pom.len() {
            let mut seq = pom.edges().to_vec();
            seq.insert(pos, cand);
            if let Ok(p) = validate_pom(g, &seq) {
                return Some((cand, p));
            }
        }
    }
    None
}

/// Vertex decomposability of `Δ^G_e` under `ord`, with the identities the
/// inductive argument rests on.
///
/// When `e` is not maximal, the first order-preserving single insertion `v`
/// is used together with the order that puts `v` on top, then the other
/// matching edges last to first, then `ord`. When `e` is maximal and the
/// graph leafless, the split identities for the free variable are checked
/// under `ord`.
pub fn verify_corollary_vd(
    g: &Graph,
    pom: &PathOrderedMatching,
    ord: &LexOrder,
    checker: &mut VdChecker,
) -> Result<CorollaryReport, SimplicialError> {
    let complex = matching_complex(g, pom, ord)?;
    let outcome = checker.check(&complex);
    let replayed = outcome.witness().is_some_and(|w| replay(&complex, w).is_ok());
    let mut notes = Vec::new();
    let mut extension = None;
    let mut split = None;
    if !is_maximal(g, pom) {
        match first_insertion(g, pom) {
            Some((v, bigger)) => {
                let s = bigger.position(v).expect("inserted edge is present");
                let top = bigger.term_order(s, [])?.priority().to_vec();
                let order = ord.with_top(&top)?;
                let d_e = matching_complex(g, pom, &order)?;
                let d_small = matching_complex(&g.delete_edge(v)?, pom, &order)?;
                let d_big = matching_complex(g, &bigger, &order)?;
                extension = Some(ExtensionCheck {
                    edge: v,
                    extended: bigger.edges().to_vec(),
                    deletion_matches: d_e.deletion(v)? == d_small,
                    link_matches: d_e.link(v)? == d_big.deletion(v)?,
                    cone: d_big.is_cone(v),
                    order,
                });
            }
            None => notes.push("matching is not maximal but no single insertion keeps its order".into()),
        }
    } else if !g.is_leafless() {
        notes.push("maximal matching on a graph with leaves: split identities not applicable".into());
    } else if crate::graph::enumerate_cycles(g).is_empty() {
        notes.push("no cycles: complex is a simplex".into());
    } else {
        let x = find_free_variable(g, pom)?;
        let rest: VarSet = g.edge_ids().filter(|&e| e != x).collect();
        let minus = build_i(&g.delete_edge(x)?, pom, ord)?.initial_ideal()?;
        let d_minus = complex_of(&minus, rest)?;
        split = Some(SplitCheck {
            x,
            restriction_matches: complex.restriction(rest) == d_minus,
            x_not_face: !complex.is_face(VarSet::singleton(x)),
        });
    }
    if !outcome.is_vd() {
        if let VdOutcome::NotVd { reason } = &outcome {
            notes.push(reason.clone());
        }
    }
    Ok(CorollaryReport { complex, outcome, replayed, extension, split, notes })
}
