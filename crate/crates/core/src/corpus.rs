//! The reference graphs used throughout the tests, the guide and the
//! acceptance suite.

use crate::graph::{Graph, Vertex};

fn build(pairs: &[(Vertex, Vertex)]) -> Graph {
    Graph::from_pairs(pairs).expect("corpus graphs are well formed")
}

/// The cycle on `n` vertices, edges `{i, i+1}` and `{n, 1}`.
pub fn cycle(n: Vertex) -> Graph {
    let pairs: Vec<_> = (1..=n).map(|i| (i, i % n + 1)).collect();
    build(&pairs)
}

/// The complete bipartite graph with parts `1..=a` and `a+1..=a+b`.
pub fn complete_bipartite(a: Vertex, b: Vertex) -> Graph {
    let mut pairs = Vec::new();
    for i in 1..=a {
        for j in 1..=b {
            pairs.push((i, a + j));
        }
    }
    build(&pairs)
}

/// The 4-cycle `1-3-2-4-1`, edges `e1={1,3}, e2={3,2}, e3={2,4}, e4={4,1}`.
pub fn c4() -> Graph {
    build(&[(1, 3), (3, 2), (2, 4), (4, 1)])
}

pub fn c6() -> Graph {
    cycle(6)
}

pub fn c8() -> Graph {
    cycle(8)
}

pub fn k23() -> Graph {
    complete_bipartite(2, 3)
}

pub fn k24() -> Graph {
    complete_bipartite(2, 4)
}

pub fn k33() -> Graph {
    complete_bipartite(3, 3)
}

/// The 2x3 grid: rows `1-2-3` and `4-5-6` joined by three rungs.
pub fn grid_2x3() -> Graph {
    build(&[(1, 2), (2, 3), (4, 5), (5, 6), (1, 4), (2, 5), (3, 6)])
}

pub fn two_disjoint_c4() -> Graph {
    build(&[(1, 2), (2, 3), (3, 4), (4, 1), (5, 6), (6, 7), (7, 8), (8, 5)])
}

/// [`c4`] with the pendant edge `{4,5}`.
pub fn c4_pendant() -> Graph {
    build(&[(1, 3), (3, 2), (2, 4), (4, 1), (4, 5)])
}

/// Ten vertices, the matching `{i, i+5}` and the connectors `{i, i+6}`:
/// a path ordered matching of length five with nothing else attached.
pub fn pom_skeleton() -> Graph {
    let mut pairs: Vec<(Vertex, Vertex)> = (1..=5).map(|i| (i, i + 5)).collect();
    pairs.extend((1..=4).map(|i| (i, i + 6)));
    build(&pairs)
}

/// Every corpus graph with its name.
pub fn all() -> Vec<(&'static str, Graph)> {
    vec![
        ("C4", c4()),
        ("C6", c6()),
        ("C8", c8()),
        ("K23", k23()),
        ("K24", k24()),
        ("K33", k33()),
        ("grid2x3", grid_2x3()),
        ("2xC4", two_disjoint_c4()),
        ("C4+pendant", c4_pendant()),
    ]
}
