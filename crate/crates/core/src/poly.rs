//! Monomials in the edge variables, lexicographic orders and the two-term
//! polynomial class.
//!
//! Every polynomial the toolkit manipulates is zero, a signed monomial, or a
//! pure difference `lead - trail` of two monomials. S-polynomials and
//! reductions of such polynomials stay in the class, so coefficients are
//! always `±1` and nothing depends on the ground field.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::graph::EdgeId;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("variable {0} is not part of the term order")]
    UnknownVariable(EdgeId),
    #[error("term order lists {0} more than once")]
    RepeatedVariable(EdgeId),
    #[error("polynomial left the two-term class: {0}")]
    ClassEscape(String),
    #[error("cannot parse monomial {0:?}")]
    BadMonomial(String),
}

/// A monomial as a sparse exponent vector sorted by edge id. Zero exponents
/// are never stored; the empty vector is the unit monomial.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(Vec<(EdgeId, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(e: EdgeId) -> Self {
        Monomial(vec![(e, 1)])
    }

    /// Product of the given variables (repetitions raise exponents).
    pub fn product(vars: impl IntoIterator<Item = EdgeId>) -> Self {
        vars.into_iter().fold(Monomial::one(), |m, v| m.mul(&Monomial::var(v)))
    }

    pub fn from_exponents(pairs: impl IntoIterator<Item = (EdgeId, u32)>) -> Self {
        let mut v: Vec<(EdgeId, u32)> = pairs.into_iter().filter(|&(_, k)| k > 0).collect();
        v.sort();
        let mut out: Vec<(EdgeId, u32)> = Vec::with_capacity(v.len());
        for (e, k) in v {
            match out.last_mut() {
                Some((last, acc)) if *last == e => *acc += k,
                _ => out.push((e, k)),
            }
        }
        Monomial(out)
    }

    pub fn exponents(&self) -> &[(EdgeId, u32)] {
        &self.0
    }

    pub fn exponent(&self, e: EdgeId) -> u32 {
        self.0
            .binary_search_by_key(&e, |&(v, _)| v)
            .map(|i| self.0[i].1)
            .unwrap_or(0)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, k)| k).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_squarefree(&self) -> bool {
        self.0.iter().all(|&(_, k)| k == 1)
    }

    /// Variables with positive exponent, ascending.
    pub fn support(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.0.iter().map(|&(e, _)| e)
    }

    pub fn contains_var(&self, e: EdgeId) -> bool {
        self.exponent(e) > 0
    }

    fn merge(&self, other: &Monomial, f: impl Fn(u32, u32) -> u32) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            let (e, k) = match (a.get(i), b.get(j)) {
                (Some(&(x, kx)), Some(&(y, ky))) => match x.cmp(&y) {
                    Ordering::Less => {
                        i += 1;
                        (x, f(kx, 0))
                    }
                    Ordering::Greater => {
                        j += 1;
                        (y, f(0, ky))
                    }
                    Ordering::Equal => {
                        i += 1;
                        j += 1;
                        (x, f(kx, ky))
                    }
                },
                (Some(&(x, kx)), None) => {
                    i += 1;
                    (x, f(kx, 0))
                }
                (None, Some(&(y, ky))) => {
                    j += 1;
                    (y, f(0, ky))
                }
                (None, None) => unreachable!(),
            };
            if k > 0 {
                out.push((e, k));
            }
        }
        Monomial(out)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        self.merge(other, |x, y| x + y)
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        self.merge(other, u32::max)
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        self.merge(other, u32::min)
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.gcd(other).is_one()
    }

    /// Whether `self` divides `other`.
    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().all(|&(e, k)| other.exponent(e) >= k)
    }

    /// Exact quotient `self / divisor`, or `None` when `divisor` does not
    /// divide `self`.
    pub fn divide(&self, divisor: &Monomial) -> Option<Monomial> {
        if !divisor.divides(self) {
            return None;
        }
        Some(self.merge(divisor, |x, y| x - y))
    }

    /// `self` with `e` removed entirely.
    pub fn without_var(&self, e: EdgeId) -> Monomial {
        Monomial(self.0.iter().copied().filter(|&(v, _)| v != e).collect())
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (i, &(e, k)) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            if k == 1 {
                write!(f, "{e}")?;
            } else {
                write!(f, "{e}^{k}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Monomial {
    type Err = PolyError;

    /// Parses the canonical rendering, e.g. `e3*e7^2` or `1`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || PolyError::BadMonomial(s.to_string());
        let t = s.trim();
        if t == "1" {
            return Ok(Monomial::one());
        }
        let mut pairs = Vec::new();
        for factor in t.split('*') {
            let (var, exp) = match factor.trim().split_once('^') {
                Some((v, k)) => (v, k.parse::<u32>().map_err(|_| bad())?),
                None => (factor.trim(), 1),
            };
            let id = var.strip_prefix('e').ok_or_else(bad)?.parse::<u32>().map_err(|_| bad())?;
            if id == 0 {
                return Err(bad());
            }
            pairs.push((EdgeId(id), exp));
        }
        Ok(Monomial::from_exponents(pairs))
    }
}

/// A lexicographic term order given by a priority list, highest first.
#[derive(Clone)]
pub struct LexOrder {
    priority: Vec<EdgeId>,
    rank: HashMap<EdgeId, usize>,
}

impl LexOrder {
    pub fn new(priority: Vec<EdgeId>) -> Result<Self, PolyError> {
        let mut rank = HashMap::with_capacity(priority.len());
        for (i, &e) in priority.iter().enumerate() {
            if rank.insert(e, i).is_some() {
                return Err(PolyError::RepeatedVariable(e));
            }
        }
        Ok(LexOrder { priority, rank })
    }

    /// `e1 > e2 > ...`: smaller ids get higher priority.
    pub fn by_ascending_id(vars: impl IntoIterator<Item = EdgeId>) -> Self {
        let mut v: Vec<EdgeId> = vars.into_iter().collect();
        v.sort();
        v.dedup();
        LexOrder::new(v).expect("deduplicated")
    }

    /// Places `top` first (in the given order) and the remaining `vars`
    /// after it by ascending id.
    pub fn promoted(top: &[EdgeId], vars: impl IntoIterator<Item = EdgeId>) -> Result<Self, PolyError> {
        let mut rest: Vec<EdgeId> = vars.into_iter().filter(|v| !top.contains(v)).collect();
        rest.sort();
        rest.dedup();
        let mut priority = top.to_vec();
        priority.extend(rest);
        LexOrder::new(priority)
    }

    /// `top` first, then the other variables of this order in their
    /// current relative order.
    pub fn with_top(&self, top: &[EdgeId]) -> Result<LexOrder, PolyError> {
        if let Some(&e) = top.iter().find(|e| !self.contains(**e)) {
            return Err(PolyError::UnknownVariable(e));
        }
        let mut p = top.to_vec();
        p.extend(self.priority.iter().filter(|v| !top.contains(v)));
        LexOrder::new(p)
    }

    pub fn priority(&self) -> &[EdgeId] {
        &self.priority
    }

    pub fn contains(&self, e: EdgeId) -> bool {
        self.rank.contains_key(&e)
    }

    pub fn rank(&self, e: EdgeId) -> Option<usize> {
        self.rank.get(&e).copied()
    }

    /// Whether `a` is ranked above `b`.
    pub fn is_above(&self, a: EdgeId, b: EdgeId) -> bool {
        matches!((self.rank(a), self.rank(b)), (Some(x), Some(y)) if x < y)
    }

    pub fn check_monomial(&self, m: &Monomial) -> Result<(), PolyError> {
        match m.support().find(|e| !self.contains(*e)) {
            Some(e) => Err(PolyError::UnknownVariable(e)),
            None => Ok(()),
        }
    }

    /// Lexicographic comparison: the highest-priority variable whose
    /// exponents differ decides, the larger exponent wins.
    pub fn compare(&self, a: &Monomial, b: &Monomial) -> Result<Ordering, PolyError> {
        self.check_monomial(a)?;
        self.check_monomial(b)?;
        Ok(self.cmp(a, b))
    }

    /// Comparison for monomials already known to live in this order's ring.
    pub(crate) fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        let mut best: Option<(usize, Ordering)> = None;
        let (x, y) = (a.exponents(), b.exponents());
        let (mut i, mut j) = (0, 0);
        let mut consider = |e: EdgeId, o: Ordering| {
            let r = self.rank[&e];
            if best.is_none_or(|(br, _)| r < br) {
                best = Some((r, o));
            }
        };
        while i < x.len() || j < y.len() {
            match (x.get(i), y.get(j)) {
                (Some(&(ea, ka)), Some(&(eb, kb))) if ea == eb => {
                    if ka != kb {
                        consider(ea, ka.cmp(&kb));
                    }
                    i += 1;
                    j += 1;
                }
                (Some(&(ea, _)), Some(&(eb, _))) if ea < eb => {
                    consider(ea, Ordering::Greater);
                    i += 1;
                }
                (Some(_), Some(&(eb, _))) => {
                    consider(eb, Ordering::Less);
                    j += 1;
                }
                (Some(&(ea, _)), None) => {
                    consider(ea, Ordering::Greater);
                    i += 1;
                }
                (None, Some(&(eb, _))) => {
                    consider(eb, Ordering::Less);
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        best.map_or(Ordering::Equal, |(_, o)| o)
    }
}

impl PartialEq for LexOrder {
    fn eq(&self, other: &Self) -> bool {
        self.priority == other.priority
    }
}

impl Eq for LexOrder {}

impl fmt::Debug for LexOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for LexOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.priority.iter().map(|e| e.to_string()).collect();
        write!(f, "{}", parts.join(" > "))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    fn as_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

/// Zero, a signed monomial, or `lead - trail` with `lead` above `trail` in
/// the order the polynomial was built with.
///
/// A binomial is stored up to its overall sign: `trail - lead` and
/// `lead - trail` generate the same ideal and are both stored as the latter.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum TwoTermPoly {
    Zero,
    Mono { sign: Sign, mono: Monomial },
    Bino { lead: Monomial, trail: Monomial },
}

impl TwoTermPoly {
    pub fn monomial(m: Monomial) -> Self {
        TwoTermPoly::Mono { sign: Sign::Plus, mono: m }
    }

    pub fn var(e: EdgeId) -> Self {
        Self::monomial(Monomial::var(e))
    }

    /// The difference `a - b` with its terms put in order.
    pub fn orient(a: Monomial, b: Monomial, ord: &LexOrder) -> Self {
        match ord.cmp(&a, &b) {
            Ordering::Equal => TwoTermPoly::Zero,
            Ordering::Greater => TwoTermPoly::Bino { lead: a, trail: b },
            Ordering::Less => TwoTermPoly::Bino { lead: b, trail: a },
        }
    }

    /// [`TwoTermPoly::orient`] with the variables checked against `ord`.
    pub fn try_orient(a: Monomial, b: Monomial, ord: &LexOrder) -> Result<Self, PolyError> {
        ord.check_monomial(&a)?;
        ord.check_monomial(&b)?;
        Ok(Self::orient(a, b, ord))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, TwoTermPoly::Zero)
    }

    pub fn is_monomial(&self) -> bool {
        matches!(self, TwoTermPoly::Mono { .. })
    }

    pub fn lead(&self) -> Option<&Monomial> {
        match self {
            TwoTermPoly::Zero => None,
            TwoTermPoly::Mono { mono, .. } => Some(mono),
            TwoTermPoly::Bino { lead, .. } => Some(lead),
        }
    }

    pub fn monomials(&self) -> Vec<&Monomial> {
        match self {
            TwoTermPoly::Zero => vec![],
            TwoTermPoly::Mono { mono, .. } => vec![mono],
            TwoTermPoly::Bino { lead, trail } => vec![lead, trail],
        }
    }

    /// Total degree of the leading term (0 for the zero polynomial).
    pub fn degree(&self) -> u32 {
        self.lead().map_or(0, Monomial::degree)
    }

    pub fn is_homogeneous(&self) -> bool {
        match self {
            TwoTermPoly::Bino { lead, trail } => lead.degree() == trail.degree(),
            _ => true,
        }
    }

    /// Signed terms, lead first.
    pub fn terms(&self) -> Vec<(i64, Monomial)> {
        match self {
            TwoTermPoly::Zero => vec![],
            TwoTermPoly::Mono { sign, mono } => vec![(sign.as_i64(), mono.clone())],
            TwoTermPoly::Bino { lead, trail } => vec![(1, lead.clone()), (-1, trail.clone())],
        }
    }

    /// Collects like terms and reads the result back into the class.
    /// Anything that is not zero, `±m`, or `±(m - n)` is a class escape.
    pub fn from_terms(terms: Vec<(i64, Monomial)>, ord: &LexOrder) -> Result<Self, PolyError> {
        let mut collected: Vec<(i64, Monomial)> = Vec::new();
        for (c, m) in terms {
            match collected.iter_mut().find(|(_, x)| *x == m) {
                Some(slot) => slot.0 += c,
                None => collected.push((c, m)),
            }
        }
        collected.retain(|(c, _)| *c != 0);
        let render = |ts: &[(i64, Monomial)]| {
            ts.iter().map(|(c, m)| format!("{c:+}*{m}")).collect::<Vec<_>>().join(" ")
        };
        match collected.as_slice() {
            [] => Ok(TwoTermPoly::Zero),
            [(1, m)] => Ok(TwoTermPoly::Mono { sign: Sign::Plus, mono: m.clone() }),
            [(-1, m)] => Ok(TwoTermPoly::Mono { sign: Sign::Minus, mono: m.clone() }),
            [(c1, m1), (c2, m2)] if c1.abs() == 1 && *c1 == -*c2 => {
                Ok(Self::orient(m1.clone(), m2.clone(), ord))
            }
            other => Err(PolyError::ClassEscape(render(other))),
        }
    }

    /// Multiplies by a monomial. Lex orders are multiplicative, so the
    /// orientation is preserved.
    pub fn mul_monomial(&self, m: &Monomial) -> TwoTermPoly {
        match self {
            TwoTermPoly::Zero => TwoTermPoly::Zero,
            TwoTermPoly::Mono { sign, mono } => TwoTermPoly::Mono { sign: *sign, mono: mono.mul(m) },
            TwoTermPoly::Bino { lead, trail } => {
                TwoTermPoly::Bino { lead: lead.mul(m), trail: trail.mul(m) }
            }
        }
    }

    /// Product of two class members, failing if it leaves the class (for
    /// instance the four-term product of two binomials).
    pub fn mul(&self, other: &TwoTermPoly, ord: &LexOrder) -> Result<TwoTermPoly, PolyError> {
        let mut terms = Vec::new();
        for (c1, m1) in self.terms() {
            for (c2, m2) in other.terms() {
                terms.push((c1 * c2, m1.mul(&m2)));
            }
        }
        Self::from_terms(terms, ord)
    }

    /// Drops the sign of a monomial so that the leading coefficient is `+1`.
    pub fn monic(self) -> TwoTermPoly {
        match self {
            TwoTermPoly::Mono { mono, .. } => TwoTermPoly::Mono { sign: Sign::Plus, mono },
            other => other,
        }
    }

    /// Re-expresses the polynomial under another order.
    pub fn reorient(&self, ord: &LexOrder) -> Result<TwoTermPoly, PolyError> {
        for m in self.monomials() {
            ord.check_monomial(m)?;
        }
        Ok(match self {
            TwoTermPoly::Bino { lead, trail } => Self::orient(lead.clone(), trail.clone(), ord),
            other => other.clone(),
        })
    }

    pub fn variables(&self) -> Vec<EdgeId> {
        let mut v: Vec<EdgeId> = self.monomials().into_iter().flat_map(|m| m.support()).collect();
        v.sort();
        v.dedup();
        v
    }
}

impl fmt::Display for TwoTermPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TwoTermPoly::Zero => write!(f, "0"),
            TwoTermPoly::Mono { sign: Sign::Plus, mono } => write!(f, "{mono}"),
            TwoTermPoly::Mono { sign: Sign::Minus, mono } => write!(f, "-{mono}"),
            TwoTermPoly::Bino { lead, trail } => write!(f, "{lead} - {trail}"),
        }
    }
}
