//! Simple bipartite graphs whose edges double as polynomial ring variables.
//!
//! Edges carry stable identifiers ([`EdgeId`]). They are assigned in input
//! order when parsing the edge-list format (`e1`, `e2`, ...) and survive every
//! deletion unchanged, so a variable named `e7` means the same edge at every
//! stage of a liaison chain.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::varset::{VarSet, MAX_VARIABLE};

/// A vertex label. Labels are positive integers.
pub type Vertex = u32;

/// Stable identifier of an edge; rendered as `e<n>`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EdgeId(pub u32);

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

impl FromStr for EdgeId {
    type Err = GraphError;

    /// Accepts `e12` as well as a bare `12`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let digits = t.strip_prefix('e').unwrap_or(t);
        match digits.parse::<u32>() {
            Ok(n) if n > 0 => Ok(EdgeId(n)),
            _ => Err(GraphError::BadEdgeId(s.to_string())),
        }
    }
}

/// Parses a comma or whitespace separated list of edge ids.
pub fn parse_edge_list(s: &str) -> Result<Vec<EdgeId>, GraphError> {
    s.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(EdgeId::from_str)
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub id: EdgeId,
    pub u: Vertex,
    pub v: Vertex,
}

impl Edge {
    pub fn contains(&self, w: Vertex) -> bool {
        self.u == w || self.v == w
    }

    /// The endpoint opposite to `w`, if `w` is an endpoint.
    pub fn other(&self, w: Vertex) -> Option<Vertex> {
        if self.u == w {
            Some(self.v)
        } else if self.v == w {
            Some(self.u)
        } else {
            None
        }
    }

    fn key(&self) -> (Vertex, Vertex) {
        (self.u.min(self.v), self.u.max(self.v))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("line {line}: malformed edge line {text:?}, expected two positive integers")]
    Malformed { line: usize, text: String },
    #[error("{}loop at vertex {vertex}", at_line(*.line))]
    Loop { line: Option<usize>, vertex: Vertex },
    #[error("{}duplicate edge {{{u},{v}}}", at_line(*.line))]
    DuplicateEdge { line: Option<usize>, u: Vertex, v: Vertex },
    #[error("duplicate edge id {0}")]
    DuplicateEdgeId(EdgeId),
    #[error("vertex labels must be positive, got {0}")]
    BadVertex(Vertex),
    #[error("edge {edge} uses vertex {vertex} which is not in the vertex set")]
    UnknownVertex { edge: EdgeId, vertex: Vertex },
    #[error("unknown edge {0}")]
    UnknownEdge(EdgeId),
    #[error("invalid edge id {0:?}")]
    BadEdgeId(String),
    #[error("graph is not bipartite: odd cycle through vertices {cycle:?}")]
    OddCycleFound { cycle: Vec<Vertex> },
    #[error("more than {limit} cycles; raise the cycle limit to continue")]
    TooManyCycles { limit: usize },
    #[error("invalid JSON graph: {0}")]
    Json(String),
}

fn at_line(line: Option<usize>) -> String {
    line.map(|l| format!("line {l}: ")).unwrap_or_default()
}

/// A simple graph with stable edge identifiers.
///
/// Edges are kept sorted by id. Isolated vertices are allowed and retained by
/// edge deletion so that vertex labels stay fixed along a chain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    vertices: BTreeSet<Vertex>,
    edges: Vec<Edge>,
}

#[derive(Serialize, Deserialize)]
struct JsonGraph {
    vertices: Vec<Vertex>,
    edges: Vec<(u32, Vertex, Vertex)>,
}

impl Graph {
    /// Builds a graph from explicit parts, checking every structural invariant.
    pub fn new(
        vertices: impl IntoIterator<Item = Vertex>,
        edges: impl IntoIterator<Item = Edge>,
    ) -> Result<Self, GraphError> {
        let vertices: BTreeSet<Vertex> = vertices.into_iter().collect();
        if let Some(&0) = vertices.iter().next() {
            return Err(GraphError::BadVertex(0));
        }
        let mut edges: Vec<Edge> = edges.into_iter().collect();
        edges.sort_by_key(|e| e.id);
        let mut pairs = BTreeSet::new();
        for w in edges.windows(2) {
            if w[0].id == w[1].id {
                return Err(GraphError::DuplicateEdgeId(w[0].id));
            }
        }
        for e in &edges {
            if !VarSet::fits(e.id) {
                return Err(GraphError::BadEdgeId(format!("{} (ids run from e1 to e{MAX_VARIABLE})", e.id)));
            }
            if e.u == e.v {
                return Err(GraphError::Loop { line: None, vertex: e.u });
            }
            for x in [e.u, e.v] {
                if !vertices.contains(&x) {
                    return Err(GraphError::UnknownVertex { edge: e.id, vertex: x });
                }
            }
            if !pairs.insert(e.key()) {
                return Err(GraphError::DuplicateEdge { line: None, u: e.u, v: e.v });
            }
        }
        Ok(Graph { vertices, edges })
    }

    /// Builds a graph from endpoint pairs, numbering edges `e1, e2, ...`.
    pub fn from_pairs(pairs: &[(Vertex, Vertex)]) -> Result<Self, GraphError> {
        let edges = pairs.iter().enumerate().map(|(i, &(u, v))| Edge {
            id: EdgeId(i as u32 + 1),
            u,
            v,
        });
        let vertices = pairs.iter().flat_map(|&(u, v)| [u, v]);
        Graph::new(vertices, edges)
    }

    /// Parses the edge-list text format (`u v` per line, `#` comments) or,
    /// when the document starts with `{`, the JSON form.
    pub fn parse(text: &str) -> Result<Self, GraphError> {
        if text.trim_start().starts_with('{') {
            return Self::from_json(text);
        }
        let mut pairs = Vec::new();
        let mut seen = BTreeSet::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let malformed = || GraphError::Malformed { line, text: raw.to_string() };
            let tokens: Vec<&str> = content.split_whitespace().collect();
            if tokens.len() != 2 {
                return Err(malformed());
            }
            let u: Vertex = tokens[0].parse().map_err(|_| malformed())?;
            let v: Vertex = tokens[1].parse().map_err(|_| malformed())?;
            if u == 0 || v == 0 {
                return Err(malformed());
            }
            if u == v {
                return Err(GraphError::Loop { line: Some(line), vertex: u });
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(GraphError::DuplicateEdge { line: Some(line), u, v });
            }
            pairs.push((u, v));
        }
        Graph::from_pairs(&pairs)
    }

    pub fn from_json(text: &str) -> Result<Self, GraphError> {
        let doc: JsonGraph =
            serde_json::from_str(text).map_err(|e| GraphError::Json(e.to_string()))?;
        if doc.edges.iter().any(|&(id, _, _)| id == 0) {
            return Err(GraphError::BadEdgeId("0".into()));
        }
        Graph::new(
            doc.vertices,
            doc.edges.into_iter().map(|(id, u, v)| Edge { id: EdgeId(id), u, v }),
        )
    }

    /// Canonical edge-list text: one `u v` line per edge in id order.
    ///
    /// Edge ids and isolated vertices are implicit in this format; use
    /// [`Graph::to_json`] when they must survive.
    pub fn to_text(&self) -> String {
        self.edges.iter().map(|e| format!("{} {}\n", e.u, e.v)).collect()
    }

    /// Canonical JSON: `{"vertices":[...],"edges":[[id,u,v],...]}`.
    pub fn to_json(&self) -> String {
        let doc = JsonGraph {
            vertices: self.vertices.iter().copied().collect(),
            edges: self.edges.iter().map(|e| (e.id.0, e.u, e.v)).collect(),
        };
        serde_json::to_string(&doc).expect("graph serialization cannot fail")
    }

    /// Compact one-line rendering used in certificates: `e1:1-3 e2:3-2 ...`.
    pub fn snapshot(&self) -> String {
        self.edges
            .iter()
            .map(|e| format!("{}:{}-{}", e.id, e.u, e.v))
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn n(&self) -> usize {
        self.vertices.len()
    }

    pub fn q(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.vertices.iter().copied()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.edges.iter().map(|e| e.id)
    }

    pub fn edge(&self, id: EdgeId) -> Option<&Edge> {
        self.edges
            .binary_search_by_key(&id, |e| e.id)
            .ok()
            .map(|i| &self.edges[i])
    }

    pub fn has_edge_id(&self, id: EdgeId) -> bool {
        self.edge(id).is_some()
    }

    /// The id of the edge joining `u` and `v`, if any.
    pub fn find_edge(&self, u: Vertex, v: Vertex) -> Option<EdgeId> {
        self.edges
            .iter()
            .find(|e| e.contains(u) && e.contains(v) && u != v)
            .map(|e| e.id)
    }

    /// Local degree.
    pub fn degree(&self, v: Vertex) -> usize {
        self.edges.iter().filter(|e| e.contains(v)).count()
    }

    /// Neighbors of every vertex together with the connecting edge, sorted.
    pub fn adjacency(&self) -> BTreeMap<Vertex, Vec<(Vertex, EdgeId)>> {
        let mut adj: BTreeMap<Vertex, Vec<(Vertex, EdgeId)>> =
            self.vertices.iter().map(|&v| (v, Vec::new())).collect();
        for e in &self.edges {
            adj.get_mut(&e.u).unwrap().push((e.v, e.id));
            adj.get_mut(&e.v).unwrap().push((e.u, e.id));
        }
        for list in adj.values_mut() {
            list.sort();
        }
        adj
    }

    pub fn leaves(&self) -> Vec<Vertex> {
        self.vertices().filter(|&v| self.degree(v) == 1).collect()
    }

    pub fn is_leafless(&self) -> bool {
        self.leaves().is_empty()
    }

    /// Number of connected components, isolated vertices included.
    pub fn component_count(&self) -> usize {
        let adj = self.adjacency();
        let mut seen = BTreeSet::new();
        let mut count = 0;
        for &start in &self.vertices {
            if !seen.insert(start) {
                continue;
            }
            count += 1;
            let mut stack = vec![start];
            while let Some(v) = stack.pop() {
                for &(w, _) in &adj[&v] {
                    if seen.insert(w) {
                        stack.push(w);
                    }
                }
            }
        }
        count
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() == 1
    }

    /// Removes one edge. Its endpoints stay in the vertex set.
    pub fn delete_edge(&self, id: EdgeId) -> Result<Graph, GraphError> {
        self.delete_edges(&[id])
    }

    pub fn delete_edges(&self, ids: &[EdgeId]) -> Result<Graph, GraphError> {
        for &id in ids {
            if !self.has_edge_id(id) {
                return Err(GraphError::UnknownEdge(id));
            }
        }
        Ok(Graph {
            vertices: self.vertices.clone(),
            edges: self.edges.iter().filter(|e| !ids.contains(&e.id)).copied().collect(),
        })
    }
}

/// A two-coloring of the non-isolated vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bipartition {
    pub part1: BTreeSet<Vertex>,
    pub part2: BTreeSet<Vertex>,
}

/// Breadth-first 2-coloring. The least vertex of every component is put in
/// `part1`; isolated vertices are left out.
pub fn bipartition(g: &Graph) -> Result<Bipartition, GraphError> {
    let adj = g.adjacency();
    let mut color: BTreeMap<Vertex, bool> = BTreeMap::new();
    let mut parent: BTreeMap<Vertex, Vertex> = BTreeMap::new();
    for (&root, nbrs) in &adj {
        if nbrs.is_empty() || color.contains_key(&root) {
            continue;
        }
        color.insert(root, false);
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for &(w, _) in &adj[&v] {
                match color.get(&w) {
                    None => {
                        color.insert(w, !color[&v]);
                        parent.insert(w, v);
                        queue.push_back(w);
                    }
                    Some(&cw) if cw == color[&v] => {
                        return Err(GraphError::OddCycleFound { cycle: odd_witness(&parent, v, w) });
                    }
                    Some(_) => {}
                }
            }
        }
    }
    let (p2, p1): (Vec<_>, Vec<_>) = color.into_iter().partition(|&(_, c)| c);
    Ok(Bipartition {
        part1: p1.into_iter().map(|(v, _)| v).collect(),
        part2: p2.into_iter().map(|(v, _)| v).collect(),
    })
}

fn odd_witness(parent: &BTreeMap<Vertex, Vertex>, a: Vertex, b: Vertex) -> Vec<Vertex> {
    let path_to_root = |mut v: Vertex| {
        let mut path = vec![v];
        while let Some(&p) = parent.get(&v) {
            path.push(p);
            v = p;
        }
        path
    };
    let pa = path_to_root(a);
    let pb = path_to_root(b);
    let on_b: BTreeSet<Vertex> = pb.iter().copied().collect();
    let lca_pos = pa.iter().position(|v| on_b.contains(v)).unwrap();
    let lca = pa[lca_pos];
    let mut cycle: Vec<Vertex> = pa[..=lca_pos].to_vec();
    let back = pb.iter().position(|&v| v == lca).unwrap();
    cycle.extend(pb[..back].iter().rev());
    cycle
}

pub fn is_bipartite(g: &Graph) -> bool {
    bipartition(g).is_ok()
}

/// Repeatedly removes leaves and their edges. Vertices that lose their last
/// edge during stripping are removed as well; isolated vertices already
/// present in the input are kept.
pub fn strip_leaves(g: &Graph) -> Graph {
    let mut vertices = g.vertices.clone();
    let mut edges = g.edges.clone();
    loop {
        let degree = |v: Vertex, edges: &[Edge]| edges.iter().filter(|e| e.contains(v)).count();
        let leaves: BTreeSet<Vertex> =
            vertices.iter().copied().filter(|&v| degree(v, &edges) == 1).collect();
        if leaves.is_empty() {
            break;
        }
        let touched: BTreeSet<Vertex> = edges
            .iter()
            .filter(|e| leaves.contains(&e.u) || leaves.contains(&e.v))
            .flat_map(|e| [e.u, e.v])
            .collect();
        edges.retain(|e| !leaves.contains(&e.u) && !leaves.contains(&e.v));
        for v in touched {
            if leaves.contains(&v) || degree(v, &edges) == 0 {
                vertices.remove(&v);
            }
        }
    }
    Graph { vertices, edges }
}

/// Edges that lie on no cycle: removing one disconnects its endpoints.
pub fn bridges(g: &Graph) -> Vec<EdgeId> {
    g.edges
        .iter()
        .filter(|e| {
            let rest: Vec<Edge> = g.edges.iter().filter(|f| f.id != e.id).cloned().collect();
            let mut seen = BTreeSet::from([e.u]);
            let mut stack = vec![e.u];
            while let Some(v) = stack.pop() {
                for f in rest.iter().filter(|f| f.contains(v)) {
                    let w = f.other(v).expect("edge contains v");
                    if seen.insert(w) {
                        stack.push(w);
                    }
                }
            }
            !seen.contains(&e.v)
        })
        .map(|e| e.id)
        .collect()
}

/// Removes every edge that lies on no cycle, which leaves the toric ideal
/// unchanged. Vertices that lose their last edge are removed; isolated
/// vertices already present in the input are kept. Generalizes
/// [`strip_leaves`]: bridges between cycles go as well.
pub fn strip_acyclic(g: &Graph) -> Graph {
    let gone: BTreeSet<EdgeId> = bridges(g).into_iter().collect();
    let edges: Vec<Edge> = g.edges.iter().filter(|e| !gone.contains(&e.id)).cloned().collect();
    let vertices = g
        .vertices
        .iter()
        .copied()
        .filter(|&v| g.degree(v) == 0 || edges.iter().any(|e| e.contains(v)))
        .collect();
    Graph { vertices, edges }
}

/// A simple cycle as a cyclic sequence of edge ids.
///
/// The sequence starts at its least edge id and is oriented so that the
/// second entry is smaller than the last, which makes equal cycles compare
/// equal.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cycle {
    edges: Vec<EdgeId>,
}

impl Cycle {
    /// Canonicalizes an arbitrary rotation/orientation of a cycle.
    pub fn from_sequence(mut seq: Vec<EdgeId>) -> Cycle {
        if let Some(pos) = seq.iter().enumerate().min_by_key(|(_, e)| **e).map(|(i, _)| i) {
            seq.rotate_left(pos);
        }
        if seq.len() > 2 && seq[1] > seq[seq.len() - 1] {
            seq[1..].reverse();
        }
        Cycle { edges: seq }
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

    pub fn contains(&self, e: EdgeId) -> bool {
        self.edges.contains(&e)
    }

    /// Edges in odd and even positions (1-based): the two sides of the
    /// alternating binomial.
    pub fn alternating_sides(&self) -> (Vec<EdgeId>, Vec<EdgeId>) {
        let odd = self.edges.iter().step_by(2).copied().collect();
        let even = self.edges.iter().skip(1).step_by(2).copied().collect();
        (odd, even)
    }

    /// Checks adjacency of consecutive edges, distinct vertices and even
    /// length against `g`.
    pub fn is_valid_in(&self, g: &Graph) -> bool {
        let m = self.edges.len();
        if m < 4 || !m.is_multiple_of(2) {
            return false;
        }
        let Some(es) = self.edges.iter().map(|&id| g.edge(id).copied()).collect::<Option<Vec<_>>>()
        else {
            return false;
        };
        let mut vertices = BTreeSet::new();
        for i in 0..m {
            let (a, b) = (es[i], es[(i + 1) % m]);
            let shared: Vec<Vertex> = [a.u, a.v].into_iter().filter(|&x| b.contains(x)).collect();
            if shared.len() != 1 || !vertices.insert(shared[0]) {
                return false;
            }
        }
        vertices.len() == m
    }
}

impl fmt::Display for Cycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.edges.iter().map(|e| e.to_string()).collect();
        write!(f, "({})", parts.join(" "))
    }
}

/// All simple cycles of `g`, canonical and sorted.
pub fn enumerate_cycles(g: &Graph) -> Vec<Cycle> {
    enumerate_cycles_bounded(g, None).expect("unbounded enumeration cannot overflow")
}

/// Like [`enumerate_cycles`], but gives up once more than `limit` distinct
/// cycles have been found. The count grows exponentially with the edge count.
pub fn enumerate_cycles_bounded(g: &Graph, limit: Option<usize>) -> Result<Vec<Cycle>, GraphError> {
    let adj = g.adjacency();
    let mut found: BTreeSet<Cycle> = BTreeSet::new();
    for &start in adj.keys() {
        let mut on_path = BTreeSet::from([start]);
        let mut path: Vec<EdgeId> = Vec::new();
        extend_paths(&adj, start, start, &mut on_path, &mut path, &mut found, limit)?;
    }
    Ok(found.into_iter().collect())
}

// DFS over simple paths from `start` through vertices larger than `start`;
// every cycle is reached from its least vertex, once per direction.
fn extend_paths(
    adj: &BTreeMap<Vertex, Vec<(Vertex, EdgeId)>>,
    start: Vertex,
    at: Vertex,
    on_path: &mut BTreeSet<Vertex>,
    path: &mut Vec<EdgeId>,
    found: &mut BTreeSet<Cycle>,
    limit: Option<usize>,
) -> Result<(), GraphError> {
    for &(w, e) in &adj[&at] {
        if w == start && path.len() >= 2 && path[0] != e {
            path.push(e);
            found.insert(Cycle::from_sequence(path.clone()));
            path.pop();
            if let Some(limit) = limit {
                if found.len() > limit {
                    return Err(GraphError::TooManyCycles { limit });
                }
            }
        } else if w > start && !on_path.contains(&w) {
            on_path.insert(w);
            path.push(e);
            extend_paths(adj, start, w, on_path, path, found, limit)?;
            path.pop();
            on_path.remove(&w);
        }
    }
    Ok(())
}
