//! Cycle binomials and toric ideals of bipartite graphs.
//!
//! The toric ideal `P(G)` is the kernel of the map sending an edge variable
//! `{i,j}` to `x_i x_j`. For a bipartite graph it is generated by the
//! binomials `T_c` of its simple even cycles: the product of the edges in odd
//! positions minus the product of those in even positions.
//! [`kernel_member`] evaluates that map directly and serves as an oracle that
//! does not go through any Gröbner computation.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::graph::{bipartition, enumerate_cycles, Cycle, EdgeId, Graph, GraphError, Vertex};
use crate::groebner::{GroebnerError, IdealPresentation};
use crate::poly::{LexOrder, Monomial, TwoTermPoly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ToricError {
    #[error("cycle of odd length {0} has no alternating binomial")]
    OddCycle(usize),
    #[error("variable {0} is not an edge of the graph")]
    ForeignVariable(EdgeId),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
}

/// A cycle together with its binomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleBinomial {
    pub cycle: Cycle,
    pub poly: TwoTermPoly,
}

/// The two alternating products of a cycle, in sequence order.
pub fn cycle_sides(c: &Cycle) -> Result<(Monomial, Monomial), ToricError> {
    if !c.len().is_multiple_of(2) {
        return Err(ToricError::OddCycle(c.len()));
    }
    let (odd, even) = c.alternating_sides();
    Ok((Monomial::product(odd), Monomial::product(even)))
}

pub fn toric_binomial(c: &Cycle, ord: &LexOrder) -> Result<CycleBinomial, ToricError> {
    let (a, b) = cycle_sides(c)?;
    let poly = TwoTermPoly::try_orient(a, b, ord).map_err(GroebnerError::from)?;
    Ok(CycleBinomial { cycle: c.clone(), poly })
}

/// Binomials of the given cycles.
pub fn cycle_binomials(cycles: &[Cycle], ord: &LexOrder) -> Result<Vec<TwoTermPoly>, ToricError> {
    cycles.iter().map(|c| toric_binomial(c, ord).map(|b| b.poly)).collect()
}

/// `P(G)` generated by its cycle binomials. Forests give the zero ideal.
pub fn toric_ideal(g: &Graph, ord: &LexOrder) -> Result<IdealPresentation, ToricError> {
    bipartition(g)?;
    let gens = cycle_binomials(&enumerate_cycles(g), ord)?;
    Ok(IdealPresentation::new(gens, ord.clone())?)
}

fn incidence_vector(m: &Monomial, g: &Graph) -> Result<BTreeMap<Vertex, u32>, ToricError> {
    let mut v = BTreeMap::new();
    for &(e, k) in m.exponents() {
        let edge = g.edge(e).ok_or(ToricError::ForeignVariable(e))?;
        *v.entry(edge.u).or_insert(0) += k;
        *v.entry(edge.v).or_insert(0) += k;
    }
    Ok(v)
}

/// Whether `p` lies in the kernel of the incidence map of `g`.
///
/// A binomial is in the kernel exactly when both monomials hit every vertex
/// equally often. A nonzero monomial never maps to zero.
pub fn kernel_member(p: &TwoTermPoly, g: &Graph) -> Result<bool, ToricError> {
    match p {
        TwoTermPoly::Zero => Ok(true),
        TwoTermPoly::Mono { mono, .. } => {
            incidence_vector(mono, g)?;
            Ok(false)
        }
        TwoTermPoly::Bino { lead, trail } => {
            Ok(incidence_vector(lead, g)? == incidence_vector(trail, g)?)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn m(s: &str) -> Monomial {
        s.parse().unwrap()
    }

    #[test]
    fn c4_binomial() {
        let g = corpus::c4();
        let o = LexOrder::by_ascending_id(g.edge_ids());
        let cycles = enumerate_cycles(&g);
        let b = toric_binomial(&cycles[0], &o).unwrap();
        assert_eq!(b.poly, TwoTermPoly::orient(m("e1*e3"), m("e2*e4"), &o));
        assert!(kernel_member(&b.poly, &g).unwrap());
    }

    #[test]
    fn kernel_oracle_examples() {
        let g = corpus::c4();
        let o = LexOrder::by_ascending_id(g.edge_ids());
        let wrong = TwoTermPoly::orient(m("e1*e2"), m("e3*e4"), &o);
        assert!(!kernel_member(&wrong, &g).unwrap());
        assert!(kernel_member(&TwoTermPoly::Zero, &g).unwrap());
        assert!(!kernel_member(&TwoTermPoly::monomial(m("e1")), &g).unwrap());
        assert_eq!(
            kernel_member(&TwoTermPoly::monomial(m("e9")), &g),
            Err(ToricError::ForeignVariable(EdgeId(9)))
        );
    }

    #[test]
    fn corpus_binomials_are_homogeneous_kernel_members() {
        for (name, g) in corpus::all() {
            let o = LexOrder::by_ascending_id(g.edge_ids());
            for c in enumerate_cycles(&g) {
                let b = toric_binomial(&c, &o).unwrap();
                let TwoTermPoly::Bino { lead, trail } = &b.poly else { panic!("{name}") };
                assert_eq!(lead.degree() as usize, c.len() / 2, "{name}");
                assert!(b.poly.is_homogeneous(), "{name}");
                assert!(lead.is_squarefree() && trail.is_squarefree(), "{name}");
                assert!(lead.is_coprime(trail), "{name}");
                assert!(kernel_member(&b.poly, &g).unwrap(), "{name}: {}", b.poly);
            }
        }
    }

    #[test]
    fn toric_ideal_examples() {
        let forest = Graph::parse("1 2\n2 3\n3 4").unwrap();
        let o = LexOrder::by_ascending_id(forest.edge_ids());
        assert!(toric_ideal(&forest, &o).unwrap().generators().is_empty());
        let k23 = corpus::k23();
        let o = LexOrder::by_ascending_id(k23.edge_ids());
        let p = toric_ideal(&k23, &o).unwrap();
        assert_eq!(p.generators().len(), 3);
        assert!(p.generators().iter().all(|g| g.degree() == 2));
        let k33 = corpus::k33();
        let o = LexOrder::by_ascending_id(k33.edge_ids());
        let p = toric_ideal(&k33, &o).unwrap();
        assert_eq!(p.generators().iter().filter(|g| g.degree() == 3).count(), 6);
        let tri = Graph::parse("1 2\n2 3\n3 1").unwrap();
        let o = LexOrder::by_ascending_id(tri.edge_ids());
        assert!(matches!(toric_ideal(&tri, &o), Err(ToricError::Graph(GraphError::OddCycleFound { .. }))));
    }

    #[test]
    fn initial_ideals_of_toric_ideals_are_squarefree() {
        for (name, g) in corpus::all() {
            let o = LexOrder::by_ascending_id(g.edge_ids());
            let p = toric_ideal(&g, &o).unwrap();
            let init = p.initial_ideal().unwrap();
            assert!(init.is_squarefree(), "{name}: {init}");
            for b in p.reduced_gb().unwrap() {
                assert!(kernel_member(b, &g).unwrap(), "{name}: {b}");
            }
        }
    }
}
