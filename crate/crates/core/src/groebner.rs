//! Buchberger's algorithm for the two-term class, normal forms, initial
//! ideals and the monomial-ideal algebra built on top of them.
//!
//! Heights are read off initial ideals: for a squarefree monomial ideal the
//! height is the least size of a minimal prime, and minimal primes are the
//! minimal transversals of the generator supports. A Gröbner degeneration
//! preserves height, so this is also the height of the ideal itself.
//!
//! A variable `v` that lies in no minimal prime of `in(J)` is a nonzerodivisor
//! modulo `in(J)`, and then also modulo `J`: if `v*f` is in `J`, reduce `f` to
//! its normal form `r`; `v*r` is again in normal form (no term of `r` becomes
//! divisible by a lead monomial, because `v` is a nonzerodivisor on the
//! initial ideal), so `v*r` in `J` forces `r = 0`.

use std::cmp::Ordering;
use std::fmt;
use std::sync::OnceLock;

use thiserror::Error;

use crate::graph::EdgeId;
use crate::poly::{LexOrder, Monomial, PolyError, TwoTermPoly};
use crate::varset::{minimal_transversals, VarSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroebnerError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("monomial ideal is not squarefree: generator {0}")]
    NotSquarefree(Monomial),
    #[error("the unit ideal has no minimal primes")]
    UnitIdeal,
    #[error("ideals live in different rings or use different term orders")]
    AmbientMismatch,
    #[error("variable {0} exceeds the supported range for transversal search")]
    VariableOutOfRange(EdgeId),
}

fn leading(p: &TwoTermPoly) -> &Monomial {
    p.lead().expect("basis elements are nonzero")
}

/// S-polynomial of two nonzero class members.
pub fn s_polynomial(
    f: &TwoTermPoly,
    g: &TwoTermPoly,
    ord: &LexOrder,
) -> Result<TwoTermPoly, PolyError> {
    let (f, g) = (f.clone().monic(), g.clone().monic());
    let (lf, lg) = (leading(&f), leading(&g));
    let l = lf.lcm(lg);
    let (cf, cg) = (l.divide(lf).unwrap(), l.divide(lg).unwrap());
    let mut terms: Vec<(i64, Monomial)> =
        f.terms().into_iter().map(|(c, m)| (c, m.mul(&cf))).collect();
    terms.extend(g.terms().into_iter().map(|(c, m)| (-c, m.mul(&cg))));
    TwoTermPoly::from_terms(terms, ord)
}

/// Full reduction of `p` modulo `basis` (lead first, then the trailing
/// term). The result has no term divisible by a lead monomial of `basis`.
pub fn normal_form(
    p: &TwoTermPoly,
    basis: &[TwoTermPoly],
    ord: &LexOrder,
) -> Result<TwoTermPoly, PolyError> {
    let mut p = p.clone();
    loop {
        let terms = p.terms();
        let step = terms.iter().find_map(|(c, t)| {
            basis
                .iter()
                .filter(|g| !g.is_zero())
                .find(|g| leading(g).divides(t))
                .map(|g| (*c, t.clone(), g.clone().monic()))
        });
        let Some((c, t, g)) = step else {
            return Ok(p);
        };
        let cofactor = t.divide(leading(&g)).unwrap();
        let mut next = terms;
        next.extend(g.terms().into_iter().map(|(d, m)| (-c * d, m.mul(&cofactor))));
        p = TwoTermPoly::from_terms(next, ord)?;
    }
}

/// The reduced Gröbner basis of the ideal generated by `gens`.
///
/// Pairs are processed smallest lcm first (ties by index); pairs with coprime
/// lead monomials are skipped. Every intermediate polynomial is read back
/// into the two-term class, and a polynomial that does not fit aborts with
/// [`PolyError::ClassEscape`].
pub fn buchberger(gens: &[TwoTermPoly], ord: &LexOrder) -> Result<Vec<TwoTermPoly>, GroebnerError> {
    let mut basis: Vec<TwoTermPoly> = Vec::new();
    for g in gens {
        let g = g.reorient(ord)?.monic();
        if !g.is_zero() && !basis.contains(&g) {
            basis.push(g);
        }
    }
    let mut pairs: Vec<(Monomial, usize, usize)> = Vec::new();
    for j in 0..basis.len() {
        for i in 0..j {
            pairs.push((leading(&basis[i]).lcm(leading(&basis[j])), i, j));
        }
    }
    while !pairs.is_empty() {
        let pick = (0..pairs.len())
            .min_by(|&a, &b| {
                ord.cmp(&pairs[a].0, &pairs[b].0)
                    .then((pairs[a].1, pairs[a].2).cmp(&(pairs[b].1, pairs[b].2)))
            })
            .unwrap();
        let (_, i, j) = pairs.swap_remove(pick);
        if leading(&basis[i]).is_coprime(leading(&basis[j])) {
            continue;
        }
        let s = s_polynomial(&basis[i], &basis[j], ord)?;
        let h = normal_form(&s, &basis, ord)?.monic();
        if h.is_zero() {
            continue;
        }
        let k = basis.len();
        for i in 0..k {
            pairs.push((leading(&basis[i]).lcm(leading(&h)), i, k));
        }
        basis.push(h);
    }
    Ok(reduce_basis(basis, ord)?)
}

// Minimalizes a Gröbner basis, tail-reduces every element and sorts by lead.
fn reduce_basis(basis: Vec<TwoTermPoly>, ord: &LexOrder) -> Result<Vec<TwoTermPoly>, PolyError> {
    let mut minimal: Vec<TwoTermPoly> = Vec::new();
    for (i, g) in basis.iter().enumerate() {
        let lg = leading(g);
        let redundant = basis.iter().enumerate().any(|(j, h)| {
            j != i && leading(h).divides(lg) && (leading(h) != lg || j < i)
        });
        if !redundant {
            minimal.push(g.clone());
        }
    }
    let mut reduced = Vec::with_capacity(minimal.len());
    for g in &minimal {
        let r = match g {
            TwoTermPoly::Bino { lead, trail } => {
                let tail = normal_form(&TwoTermPoly::monomial(trail.clone()), &minimal, ord)?;
                let mut terms = vec![(1, lead.clone())];
                terms.extend(tail.terms().into_iter().map(|(c, m)| (-c, m)));
                TwoTermPoly::from_terms(terms, ord)?
            }
            other => other.clone(),
        };
        reduced.push(r.monic());
    }
    reduced.sort_by(|a, b| ord.cmp(leading(a), leading(b)));
    Ok(reduced)
}

/// Checks that every S-polynomial of `basis` reduces to zero, with no
/// criteria applied.
pub fn satisfies_buchberger_criterion(basis: &[TwoTermPoly], ord: &LexOrder) -> Result<bool, PolyError> {
    for (i, f) in basis.iter().enumerate() {
        for g in &basis[i + 1..] {
            if !normal_form(&s_polynomial(f, g, ord)?, basis, ord)?.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// A generating set under a fixed lex order, with its reduced Gröbner basis
/// computed on first use.
///
/// The ambient ring is the variable set of the order. Ideals compared or
/// added together must share the order.
#[derive(Clone, Debug)]
pub struct IdealPresentation {
    generators: Vec<TwoTermPoly>,
    order: LexOrder,
    reduced_gb: OnceLock<Vec<TwoTermPoly>>,
}

impl IdealPresentation {
    pub fn new(generators: Vec<TwoTermPoly>, order: LexOrder) -> Result<Self, GroebnerError> {
        let generators = generators
            .iter()
            .map(|g| g.reorient(&order))
            .filter(|g| !matches!(g, Ok(TwoTermPoly::Zero)))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(IdealPresentation { generators, order, reduced_gb: OnceLock::new() })
    }

    pub fn zero(order: LexOrder) -> Self {
        IdealPresentation { generators: Vec::new(), order, reduced_gb: OnceLock::new() }
    }

    pub fn generators(&self) -> &[TwoTermPoly] {
        &self.generators
    }

    pub fn order(&self) -> &LexOrder {
        &self.order
    }

    pub fn reduced_gb(&self) -> Result<&[TwoTermPoly], GroebnerError> {
        if let Some(gb) = self.reduced_gb.get() {
            return Ok(gb);
        }
        let gb = buchberger(&self.generators, &self.order)?;
        Ok(self.reduced_gb.get_or_init(|| gb))
    }

    pub fn initial_ideal(&self) -> Result<MonomialIdeal, GroebnerError> {
        Ok(MonomialIdeal::new(self.reduced_gb()?.iter().filter_map(|g| g.lead().cloned())))
    }

    /// The ideal generated by the lead monomials of the given generators,
    /// which equals the initial ideal exactly when they form a Gröbner basis.
    pub fn generator_leads(&self) -> MonomialIdeal {
        MonomialIdeal::new(self.generators.iter().filter_map(|g| g.lead().cloned()))
    }

    pub fn contains(&self, p: &TwoTermPoly) -> Result<bool, GroebnerError> {
        let p = p.reorient(&self.order)?;
        Ok(normal_form(&p, self.reduced_gb()?, &self.order)?.is_zero())
    }

    pub fn normal_form(&self, p: &TwoTermPoly) -> Result<TwoTermPoly, GroebnerError> {
        let p = p.reorient(&self.order)?;
        Ok(normal_form(&p, self.reduced_gb()?, &self.order)?)
    }

    pub fn sum(&self, other: &IdealPresentation) -> Result<IdealPresentation, GroebnerError> {
        if self.order != other.order {
            return Err(GroebnerError::AmbientMismatch);
        }
        let mut gens = self.generators.clone();
        gens.extend(other.generators.iter().cloned());
        IdealPresentation::new(gens, self.order.clone())
    }

    /// `self + (extra)`.
    pub fn with_generators(&self, extra: &[TwoTermPoly]) -> Result<IdealPresentation, GroebnerError> {
        let mut gens = self.generators.clone();
        gens.extend(extra.iter().cloned());
        IdealPresentation::new(gens, self.order.clone())
    }

    pub fn height(&self) -> Result<usize, GroebnerError> {
        self.initial_ideal()?.height()
    }

    pub fn is_nzd_variable(&self, v: EdgeId) -> Result<bool, GroebnerError> {
        self.initial_ideal()?.is_nzd_variable(v)
    }

    pub fn equals(&self, other: &IdealPresentation) -> Result<bool, GroebnerError> {
        if self.order != other.order {
            return Err(GroebnerError::AmbientMismatch);
        }
        Ok(self.reduced_gb()? == other.reduced_gb()?)
    }
}

pub fn initial_ideal(ip: &IdealPresentation) -> Result<MonomialIdeal, GroebnerError> {
    ip.initial_ideal()
}

pub fn height(ip: &IdealPresentation) -> Result<usize, GroebnerError> {
    ip.height()
}

pub fn is_nzd_variable(v: EdgeId, ip: &IdealPresentation) -> Result<bool, GroebnerError> {
    ip.is_nzd_variable(v)
}

/// Equality of ideals through their reduced Gröbner bases.
pub fn ideal_equal(a: &IdealPresentation, b: &IdealPresentation) -> Result<bool, GroebnerError> {
    a.equals(b)
}

pub fn minimal_primes(a: &MonomialIdeal) -> Result<Vec<VarSet>, GroebnerError> {
    a.minimal_primes()
}

/// A monomial ideal given by its minimal generators, sorted.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct MonomialIdeal {
    gens: Vec<Monomial>,
}

impl MonomialIdeal {
    /// Minimalizes the given monomials under divisibility.
    pub fn new(monomials: impl IntoIterator<Item = Monomial>) -> Self {
        let mut all: Vec<Monomial> = monomials.into_iter().collect();
        all.sort_by(|a, b| a.degree().cmp(&b.degree()).then_with(|| a.cmp(b)));
        all.dedup();
        let mut gens: Vec<Monomial> = Vec::with_capacity(all.len());
        for m in all {
            if !gens.iter().any(|g| g.divides(&m)) {
                gens.push(m);
            }
        }
        gens.sort();
        MonomialIdeal { gens }
    }

    pub fn zero() -> Self {
        MonomialIdeal::default()
    }

    pub fn generators(&self) -> &[Monomial] {
        &self.gens
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.gens.iter().any(Monomial::is_one)
    }

    pub fn sum(&self, other: &MonomialIdeal) -> MonomialIdeal {
        MonomialIdeal::new(self.gens.iter().chain(&other.gens).cloned())
    }

    /// `v * self`.
    pub fn scale(&self, v: EdgeId) -> MonomialIdeal {
        self.multiply(&Monomial::var(v))
    }

    pub fn multiply(&self, m: &Monomial) -> MonomialIdeal {
        MonomialIdeal::new(self.gens.iter().map(|g| g.mul(m)))
    }

    pub fn member(&self, m: &Monomial) -> bool {
        self.gens.iter().any(|g| g.divides(m))
    }

    pub fn is_squarefree(&self) -> bool {
        self.gens.iter().all(Monomial::is_squarefree)
    }

    pub fn variables(&self) -> VarSet {
        self.gens.iter().flat_map(|g| g.support()).collect()
    }

    /// Supports of the generators; requires a squarefree ideal.
    pub fn supports(&self) -> Result<Vec<VarSet>, GroebnerError> {
        self.gens
            .iter()
            .map(|g| {
                if !g.is_squarefree() {
                    return Err(GroebnerError::NotSquarefree(g.clone()));
                }
                if let Some(e) = g.support().find(|e| !VarSet::fits(*e)) {
                    return Err(GroebnerError::VariableOutOfRange(e));
                }
                Ok(g.support().collect())
            })
            .collect()
    }

    /// Minimal primes of a squarefree monomial ideal, each given by its
    /// variable set: the minimal transversals of the generator supports.
    pub fn minimal_primes(&self) -> Result<Vec<VarSet>, GroebnerError> {
        Ok(minimal_transversals(&self.supports()?))
    }

    pub fn height(&self) -> Result<usize, GroebnerError> {
        self.minimal_primes()?
            .iter()
            .map(|p| p.len())
            .min()
            .ok_or(GroebnerError::UnitIdeal)
    }

    /// All minimal primes have the same size.
    pub fn is_unmixed(&self) -> Result<bool, GroebnerError> {
        let primes = self.minimal_primes()?;
        Ok(primes.windows(2).all(|w| w[0].len() == w[1].len()))
    }

    pub fn is_nzd_variable(&self, v: EdgeId) -> Result<bool, GroebnerError> {
        Ok(self.minimal_primes()?.iter().all(|p| !p.contains(v)))
    }
}

impl fmt::Display for MonomialIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.gens.is_empty() {
            return write!(f, "(0)");
        }
        let parts: Vec<String> = self.gens.iter().map(|g| g.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Renders a basis as a sorted list of strings, for certificates.
pub fn render_polys(polys: &[TwoTermPoly]) -> Vec<String> {
    polys.iter().map(|p| p.to_string()).collect()
}

/// Lead-monomial comparison helper used when sorting bases for display.
pub fn compare_leads(a: &TwoTermPoly, b: &TwoTermPoly, ord: &LexOrder) -> Ordering {
    match (a.lead(), b.lead()) {
        (Some(x), Some(y)) => ord.cmp(x, y),
        (x, y) => x.is_some().cmp(&y.is_some()),
    }
}
