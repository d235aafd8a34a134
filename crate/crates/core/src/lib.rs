//! Toric ideals of bipartite graphs and their G-biliaison chains.
//!
//! The crate builds the toric ideal `P(G)` of a bipartite graph from its
//! cycles, computes lexicographic Gröbner bases with an engine specialized
//! to binomials and monomials, constructs the ideals `I_e^G` attached to
//! path ordered matchings, and runs the chain of biliaisons and variable
//! splits that connects `P(G)` to a complete intersection. Every identity
//! the chain relies on is checked as an exact ideal or monomial-ideal
//! equality and recorded in a [`liaison::ChainCertificate`].
//!
//! ```
//! use toric_liaison::{corpus, liaison::{run_chain, ChainOptions}};
//!
//! let cert = run_chain(&corpus::c4(), &ChainOptions::default()).unwrap();
//! assert_eq!(cert.summary.biliaisons, 1);
//! assert_eq!(cert.summary.splits, 1);
//! assert_eq!(cert.complete_intersection, vec!["e3".to_string()]);
//! ```
//!
//! The guide in `book/` walks through each module; its code listings are
//! compiled and run as doc-tests of this crate.

pub mod corpus;
pub mod graph;
pub mod groebner;
pub mod liaison;
pub mod pom;
pub mod poly;
pub mod simplicial;
pub mod toric;
pub mod varset;

pub use graph::{EdgeId, Graph};
pub use groebner::{IdealPresentation, MonomialIdeal};
pub use poly::{LexOrder, Monomial, TwoTermPoly};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/graphs.md")]
    mod graphs {}
    #[doc = include_str!("../../../book/src/polynomials.md")]
    mod polynomials {}
    #[doc = include_str!("../../../book/src/toric.md")]
    mod toric {}
    #[doc = include_str!("../../../book/src/matchings.md")]
    mod matchings {}
    #[doc = include_str!("../../../book/src/liaison.md")]
    mod liaison {}
    #[doc = include_str!("../../../book/src/complexes.md")]
    mod complexes {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
