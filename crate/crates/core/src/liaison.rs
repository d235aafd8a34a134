//! The biliaison chain from `P(G)` down to a complete intersection, with a
//! verifier for every identity it uses.
//!
//! Each stage works on a graph in which every edge lies on a cycle (edges
//! on no cycle are stripped first) with a maximal path ordered matching
//! `e_1, ..., e_r`. Step `s` passes from `I_{e(s-1)}` to `I_{e(s)}` under the
//! lex order `e_s > e_{s-1} > ... > e_1 > f`. After the last step a free
//! variable `x` splits off, `I_e^G = I_e^{G \ x} + (x)`, and the chain
//! continues on `G \ x`. The split variables form the terminal complete
//! intersection.
//!
//! Verdicts are stored by name in each step. A verifier that returns `false`
//! aborts the run with the partial certificate; a violated hypothesis is an
//! error of its own kind.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::graph::{bipartition, bridges, enumerate_cycles, strip_acyclic, EdgeId, Graph, GraphError, Vertex};
use crate::groebner::{render_polys, GroebnerError, IdealPresentation, MonomialIdeal};
use crate::pom::{
    build_i, check_term_order, compute_m, extend_pom, find_free_variable, find_maximal_pom, is_maximal,
    raw_generators, validate_pom, GeneratorSet, PathOrderedMatching, PomError,
};
use crate::poly::{LexOrder, Monomial, PolyError, TwoTermPoly};
use crate::simplicial::{verify_corollary_vd, CorollaryReport, SimplicialError, VdChecker, VdOutcome, VdWitness};
use crate::toric::{cycle_sides, toric_ideal, ToricError};

pub const SCHEMA: &str = "liaison-cert/1";

#[derive(Debug, Error)]
pub enum LiaisonError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Pom(#[from] PomError),
    #[error(transparent)]
    Toric(#[from] ToricError),
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
    #[error(transparent)]
    Simplicial(#[from] SimplicialError),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("verification failed at step {step}: {}", failed.join(", "))]
    VerificationFailed { step: usize, failed: Vec<String>, certificate: Box<ChainCertificate> },
    #[error("chain did not terminate within {0} iterations")]
    NoTermination(usize),
}

impl From<PolyError> for LiaisonError {
    fn from(e: PolyError) -> Self {
        LiaisonError::Groebner(e.into())
    }
}

/// A named boolean result with human-readable context.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub holds: bool,
    pub diagnostics: Vec<String>,
}

impl Verdict {
    pub fn new(holds: bool, diagnostics: Vec<String>) -> Self {
        Verdict { holds, diagnostics }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StepKind {
    BiliaisonDown,
    VariableSplit,
    /// Edges on no cycle removed; the toric ideal does not change.
    StripAcyclic,
    Terminal,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PomRecord {
    pub edges: Vec<String>,
    /// Old vertex to new label.
    pub labeling: BTreeMap<Vertex, u32>,
}

impl From<&PathOrderedMatching> for PomRecord {
    fn from(p: &PathOrderedMatching) -> Self {
        PomRecord { edges: p.edges().iter().map(|e| e.to_string()).collect(), labeling: p.labeling().clone() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChainStep {
    pub kind: StepKind,
    pub stage: usize,
    /// Canonical edge list of the graph this step works on.
    pub graph: String,
    pub q: usize,
    pub n: usize,
    pub components: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pom: Option<PomRecord>,
    /// `s` for a biliaison step.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub position: Option<usize>,
    /// `e_s` for a biliaison step, `x` for a split.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub edge: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order: Option<String>,
    /// Generators of the ideals involved, by name.
    pub ideals: BTreeMap<String, Vec<String>>,
    pub initial_ideals: BTreeMap<String, String>,
    pub heights: BTreeMap<String, usize>,
    /// Height of the current ideal plus the number of split variables so
    /// far; constant along a verified chain.
    pub height: Option<usize>,
    pub verdicts: BTreeMap<String, Verdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vd_witness: Option<Arc<VdWitness>>,
}

impl ChainStep {
    fn new(kind: StepKind, stage: usize, g: &Graph) -> Self {
        ChainStep {
            kind,
            stage,
            graph: g.snapshot(),
            q: g.q(),
            n: g.n(),
            components: g.component_count(),
            pom: None,
            position: None,
            edge: None,
            order: None,
            ideals: BTreeMap::new(),
            initial_ideals: BTreeMap::new(),
            heights: BTreeMap::new(),
            height: None,
            verdicts: BTreeMap::new(),
            vd_witness: None,
        }
    }

    pub fn failed_verdicts(&self) -> Vec<String> {
        self.verdicts.iter().filter(|(_, v)| !v.holds).map(|(k, _)| k.clone()).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainSummary {
    pub biliaisons: usize,
    pub splits: usize,
    pub strips: usize,
    pub steps: usize,
    /// Height of `P(G)` for the input graph.
    pub height: Option<usize>,
    /// The recorded height of every step, in order.
    pub heights: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChainCertificate {
    pub schema: String,
    pub graph: String,
    pub q: usize,
    pub n: usize,
    pub components: usize,
    pub verified: bool,
    pub base_order: String,
    pub steps: Vec<ChainStep>,
    pub complete_intersection: Vec<String>,
    pub summary: ChainSummary,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub height_check: Option<Verdict>,
}

impl ChainCertificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    /// Every verdict of every step, and the height check, holds.
    pub fn all_verdicts_hold(&self) -> bool {
        self.steps.iter().all(|s| s.verdicts.values().all(|v| v.holds))
            && self.height_check.as_ref().is_none_or(|v| v.holds)
    }

    /// Names of the verdicts recorded anywhere in the chain.
    pub fn verdict_names(&self) -> BTreeSet<String> {
        self.steps.iter().flat_map(|s| s.verdicts.keys().cloned()).collect()
    }

    /// Plain-text rendering, one line per step.
    pub fn to_text(&self) -> String {
        let mut out = format!("chain for {}\n", self.graph);
        for (i, s) in self.steps.iter().enumerate() {
            let mut line = format!("{:>3} {:?}", i, s.kind);
            if let Some(e) = &s.edge {
                line.push_str(&format!(" {e}"));
            }
            if let Some(p) = &s.pom {
                line.push_str(&format!(" pom=[{}]", p.edges.join(",")));
            }
            if let Some(h) = s.height {
                line.push_str(&format!(" height={h}"));
            }
            if !s.verdicts.is_empty() {
                let ok = s.verdicts.values().filter(|v| v.holds).count();
                line.push_str(&format!(" verdicts={ok}/{}", s.verdicts.len()));
            }
            out.push_str(&line);
            out.push('\n');
        }
        out.push_str(&format!(
            "biliaisons={} splits={} complete intersection=({})\n",
            self.summary.biliaisons,
            self.summary.splits,
            self.complete_intersection.join(", ")
        ));
        out
    }
}

#[derive(Clone, Debug)]
pub struct ChainOptions {
    /// Run every verifier. Without it only the skeleton is produced.
    pub verify: bool,
    /// Initial matching for the first stage, extended to a maximal one.
    pub seed_pom: Option<Vec<EdgeId>>,
    /// Tail order of the non-matching variables; ascending id by default.
    pub order: Option<LexOrder>,
}

impl Default for ChainOptions {
    fn default() -> Self {
        ChainOptions { verify: true, seed_pom: None, order: None }
    }
}

impl ChainOptions {
    pub fn verified() -> Self {
        Self::default()
    }

    pub fn skeleton() -> Self {
        ChainOptions { verify: false, ..Self::default() }
    }
}

fn hypothesis<E: std::fmt::Display>(context: &str) -> impl Fn(E) -> LiaisonError + '_ {
    move |e| LiaisonError::Hypothesis(format!("{context}: {e}"))
}

// e' = e minus e_s must be a path ordered matching, and the order must put
// e_s above the other matching edges and those above everything else.
fn step_hypotheses(
    g: &Graph,
    pom: &PathOrderedMatching,
    s: usize,
    ord: &LexOrder,
) -> Result<PathOrderedMatching, LiaisonError> {
    validate_pom(g, pom.edges()).map_err(hypothesis("matching"))?;
    let rest = pom.sequence_without(s).map_err(hypothesis("position"))?;
    let smaller = validate_pom(g, &rest).map_err(hypothesis("matching without e_s"))?;
    check_term_order(pom.edges(), s, ord).map_err(hypothesis("term order"))?;
    for e in g.edge_ids() {
        if !ord.contains(e) {
            return Err(LiaisonError::Hypothesis(format!("term order misses {e}")));
        }
    }
    Ok(smaller)
}

/// The natural generators of `I_e^G` are a Gröbner basis: their lead
/// monomials generate the initial ideal.
pub fn verify_gb_step(
    g: &Graph,
    pom: &PathOrderedMatching,
    s: usize,
    ord: &LexOrder,
) -> Result<Verdict, LiaisonError> {
    step_hypotheses(g, pom, s, ord)?;
    gb_verdict(g, pom, ord, GeneratorSet::Full)
}

/// The same with the generators of cycles meeting the matching on both sides
/// left out.
pub fn verify_gb_one_sided(
    g: &Graph,
    pom: &PathOrderedMatching,
    s: usize,
    ord: &LexOrder,
) -> Result<Verdict, LiaisonError> {
    step_hypotheses(g, pom, s, ord)?;
    gb_verdict(g, pom, ord, GeneratorSet::OneSided)
}

fn gb_verdict(
    g: &Graph,
    pom: &PathOrderedMatching,
    ord: &LexOrder,
    which: GeneratorSet,
) -> Result<Verdict, LiaisonError> {
    let raw = IdealPresentation::new(raw_generators(g, pom, ord, which)?, ord.clone())?;
    let full = build_i(g, pom, ord)?;
    let leads = raw.generator_leads();
    let init = full.initial_ideal()?;
    let same_ideal = raw.equals(&full)?;
    let mut diag = vec![format!("{} generators, initial ideal {}", raw.generators().len(), init)];
    let missing: Vec<String> =
        init.generators().iter().filter(|m| !leads.member(m)).map(|m| m.to_string()).collect();
    if !missing.is_empty() {
        diag.push(format!("initial generators not reached by leads: {}", missing.join(", ")));
    }
    if !same_ideal {
        diag.push("generators do not span I_e^G".into());
    }
    Ok(Verdict::new(same_ideal && leads == init, diag))
}

/// `in(I_{e'}^G) = e_s in(I_e^G) + in(I_{e'}^{G \ e_s})`, with `e_s` a
/// nonzerodivisor modulo the last summand and that summand squarefree.
pub fn verify_initial_bdl(
    g: &Graph,
    pom: &PathOrderedMatching,
    s: usize,
    ord: &LexOrder,
) -> Result<Verdict, LiaisonError> {
    let smaller = step_hypotheses(g, pom, s, ord)?;
    let es = pom.edges()[s - 1];
    let minus = g.delete_edge(es)?;
    let smaller_minus = validate_pom(&minus, smaller.edges()).map_err(hypothesis("e' in G \\ e_s"))?;
    let big = build_i(g, &smaller, ord)?.initial_ideal()?;
    let cur = build_i(g, pom, ord)?.initial_ideal()?;
    let base = build_i(&minus, &smaller_minus, ord)?.initial_ideal()?;
    let rhs = cur.scale(es).sum(&base);
    let equal = big == rhs;
    let squarefree = base.is_squarefree();
    let nzd = squarefree && base.is_nzd_variable(es)?;
    let mut diag = vec![format!("in(I_e') = {big}"), format!("{es}*in(I_e) + in(J) = {rhs}")];
    if !squarefree {
        diag.push(format!("in(J) = {base} is not squarefree"));
    }
    if !nzd {
        diag.push(format!("{es} is a zero divisor modulo in(J)"));
    }
    Ok(Verdict::new(equal && squarefree && nzd, diag))
}

// `factor * gens + J`. A product that leaves the two-term class may be
// dropped only when one factor is already in `J`, which makes the product
// redundant.
fn product_plus(
    factor: &TwoTermPoly,
    gens: &[TwoTermPoly],
    j: &IdealPresentation,
    absorbed: &mut usize,
) -> Result<IdealPresentation, LiaisonError> {
    let ord = j.order();
    let mut all: Vec<TwoTermPoly> = j.reduced_gb()?.to_vec();
    for h in gens {
        match factor.mul(h, ord) {
            Ok(p) => all.push(p),
            Err(PolyError::ClassEscape(msg)) => {
                if j.contains(h)? || j.contains(factor)? {
                    *absorbed += 1;
                } else {
                    return Err(PolyError::ClassEscape(msg).into());
                }
            }
            Err(e) => return Err(e.into()),
        }
    }
    Ok(IdealPresentation::new(all, ord.clone())?)
}

/// The ideal equalities behind the degree-one biliaison from `I_e^G` to
/// `I_{e'}^G` on `J = I_{e'}^{G \ e_r}`, where `e'` drops the last edge:
///
/// * `m_c I_{e'} + J = T_c I_e + J` for each cycle `c` of `G \ e'` through
///   `e_r`, with `T_c = m_c e_r - n_c`;
/// * `m_c I_{e'} + J = e_r m_c I_e + J` for each cycle through `e_r` and an
///   earlier `e_j`, when the opposite side avoids the matching.
///
/// Also checks that `e_r` is a nonzerodivisor modulo `J` and records the
/// degree gap between `g` and `g'` of each instance.
pub fn verify_iso_equalities(
    g: &Graph,
    pom: &PathOrderedMatching,
    ord: &LexOrder,
) -> Result<Verdict, LiaisonError> {
    let r = pom.len();
    if r == 0 {
        return Err(LiaisonError::Hypothesis("empty matching".into()));
    }
    let smaller = step_hypotheses(g, pom, r, ord)?;
    let er = pom.edges()[r - 1];
    // Otherwise J keeps the height of P(G) and there is no biliaison.
    if bridges(g).contains(&er) {
        return Err(LiaisonError::Hypothesis(format!("{er} lies on no cycle")));
    }
    let minus = g.delete_edge(er)?;
    let smaller_minus = validate_pom(&minus, smaller.edges()).map_err(hypothesis("e' in G \\ e_r"))?;
    let ie = build_i(g, pom, ord)?;
    let ie_prime = build_i(g, &smaller, ord)?;
    let j = build_i(&minus, &smaller_minus, ord)?;

    let mut holds = true;
    let mut diag = Vec::new();
    let (mut first, mut second, mut skipped, mut absorbed, mut shifts) = (0, 0, 0, 0, BTreeSet::new());
    let mut check = |label: String, m_c: &Monomial, g_poly: &TwoTermPoly, absorbed: &mut usize| {
        let left = product_plus(&TwoTermPoly::monomial(m_c.clone()), ie_prime.generators(), &j, absorbed)?;
        let right = product_plus(g_poly, ie.generators(), &j, absorbed)?;
        shifts.insert(g_poly.degree() as i64 - m_c.degree() as i64);
        let eq = left.equals(&right)?;
        if !eq {
            holds = false;
            diag.push(format!("{label}: sides differ"));
        }
        Ok::<_, LiaisonError>(())
    };

    let outside = g.delete_edges(smaller.edges())?;
    for c in enumerate_cycles(&outside).into_iter().filter(|c| c.contains(er)) {
        let (a, b) = cycle_sides(&c)?;
        let (side, other) = if a.contains_var(er) { (a, b) } else { (b, a) };
        let m_c = side.without_var(er);
        let t_c = TwoTermPoly::try_orient(side, other, ord)?;
        check(format!("cycle {c}"), &m_c, &t_c, &mut absorbed)?;
        first += 1;
    }
    for c in enumerate_cycles(g) {
        if !c.contains(er) || !smaller.edges().iter().any(|&e| c.contains(e)) {
            continue;
        }
        let (a, b) = cycle_sides(&c)?;
        let (side, other) = if a.contains_var(er) { (a, b) } else { (b, a) };
        if pom.edges().iter().any(|&e| other.contains_var(e)) {
            skipped += 1;
            continue;
        }
        let m_c = Monomial::product(side.support().filter(|&e| !pom.contains(e)));
        let g_poly = TwoTermPoly::monomial(m_c.mul(&Monomial::var(er)));
        check(format!("cycle {c} (through earlier edges)"), &m_c, &g_poly, &mut absorbed)?;
        second += 1;
    }

    let nzd = j.is_nzd_variable(er)?;
    if !nzd {
        holds = false;
        diag.push(format!("{er} is a zero divisor modulo J"));
    }
    diag.insert(
        0,
        format!(
            "{first} cycles through {er} avoiding e', {second} through earlier matching edges, \
             {skipped} skipped (matching on both sides), {absorbed} products absorbed by J"
        ),
    );
    let shifts: Vec<String> = shifts.iter().map(|d| d.to_string()).collect();
    if shifts.iter().any(|d| d != "1") {
        diag.push(format!("flag: degree gap deg g - deg g' takes values [{}]", shifts.join(", ")));
    } else if !shifts.is_empty() {
        diag.push("degree gap deg g - deg g' = 1 on every instance".into());
    }
    Ok(Verdict::new(holds, diag))
}

/// `I_e^G = I_e^{G \ x} + (x)` in the ring of `g`.
pub fn verify_key_split(
    g: &Graph,
    pom: &PathOrderedMatching,
    x: EdgeId,
    ord: &LexOrder,
) -> Result<Verdict, LiaisonError> {
    if !g.is_leafless() {
        return Err(LiaisonError::Hypothesis(format!("graph has leaves {:?}", g.leaves())));
    }
    if !is_maximal(g, pom) {
        return Err(LiaisonError::Hypothesis(format!("matching {pom} is not maximal")));
    }
    if !compute_m(g, pom).variables().contains(&x) {
        return Err(LiaisonError::Hypothesis(format!("{x} is not a variable of M")));
    }
    let minus = g.delete_edge(x)?;
    let pom_minus = validate_pom(&minus, pom.edges()).map_err(hypothesis("e in G \\ x"))?;
    let lhs = build_i(g, pom, ord)?;
    let rhs = build_i(&minus, &pom_minus, ord)?.with_generators(&[TwoTermPoly::var(x)])?;
    let eq = lhs.equals(&rhs)?;
    Ok(Verdict::new(eq, vec![format!("reduced basis {}", render_polys(lhs.reduced_gb()?).join(", "))]))
}

fn vd_verdict(report: &CorollaryReport) -> Verdict {
    let mut diag = vec![format!(
        "{} facets, dim {}",
        report.complex.facets().len(),
        report.complex.dim().map_or("void".to_string(), |d| d.to_string())
    )];
    match &report.outcome {
        VdOutcome::Decomposable(w) => {
            let order: Vec<String> = w.shedding_order().iter().map(|e| e.to_string()).collect();
            diag.push(format!("shedding order [{}]", order.join(", ")));
        }
        VdOutcome::NotVd { reason } => diag.push(format!("not vertex decomposable: {reason}")),
    }
    if let Some(x) = &report.extension {
        diag.push(format!(
            "extension by {}: deletion {}, link {}, cone {}",
            x.edge, x.deletion_matches, x.link_matches, x.cone
        ));
    }
    if let Some(x) = &report.split {
        diag.push(format!("split by {}: restriction {}, non-face {}", x.x, x.restriction_matches, x.x_not_face));
    }
    diag.extend(report.notes.iter().cloned());
    Verdict::new(report.holds(), diag)
}

fn squarefree_unmixed(named: &[(&str, &MonomialIdeal)]) -> Result<Verdict, LiaisonError> {
    let mut holds = true;
    let mut diag = Vec::new();
    for (name, mi) in named {
        let sf = mi.is_squarefree();
        let um = sf && mi.is_unmixed()?;
        if !(sf && um) {
            holds = false;
            diag.push(format!("in({name}) = {mi}: squarefree {sf}, unmixed {um}"));
        }
    }
    Ok(Verdict::new(holds, diag))
}

/// Height bookkeeping across the whole certificate.
///
/// Within a stage every `I_{e(s)}` has the height of `P(G)` and `J` one
/// less. A split lowers the height by one and `(x)` restores it. `P(G)` of
/// every stage has height `q - n + c`. The recorded height never changes
/// and equals the size of the terminal complete intersection.
pub fn verify_heights(cert: &ChainCertificate) -> Verdict {
    let mut diag = Vec::new();
    let mut fail = |msg: String| diag.push(msg);
    let Some(original) = cert.summary.height else {
        return Verdict::new(false, vec!["no heights recorded".into()]);
    };
    if cert.components == 1 && original + cert.n != cert.q + 1 {
        fail(format!("ht P(G) = {original}, expected q - n + 1 = {}", cert.q as i64 - cert.n as i64 + 1));
    }
    if original + cert.n != cert.q + cert.components {
        fail(format!("ht P(G) = {original} differs from q - n + c"));
    }
    for (i, s) in cert.steps.iter().enumerate() {
        let h = |k: &str| s.heights.get(k).copied();
        match s.height {
            Some(x) if x == original => {}
            other => fail(format!("step {i}: recorded height {other:?}, expected {original}")),
        }
        if let Some(p) = h("P") {
            if p + s.n != s.q + s.components {
                fail(format!("step {i}: ht P = {p} but q - n + c = {}", s.q as i64 - s.n as i64 + s.components as i64));
            }
        }
        match s.kind {
            StepKind::BiliaisonDown => {
                let (p, a, b, j) = (h("P"), h("I_e(s)"), h("I_e(s-1)"), h("J"));
                if a != p || b != p || j.zip(p).is_none_or(|(j, p)| j + 1 != p) {
                    fail(format!("step {i}: heights P {p:?}, I_e(s) {a:?}, I_e(s-1) {b:?}, J {j:?}"));
                }
            }
            StepKind::VariableSplit => {
                let (a, m, r) = (h("I_e"), h("I_e^{G-x}"), h("I_e^{G-x}+(x)"));
                if m.zip(a).is_none_or(|(m, a)| m + 1 != a) || r != a {
                    fail(format!("step {i}: split heights {a:?} -> {m:?} -> {r:?}"));
                }
            }
            StepKind::StripAcyclic | StepKind::Terminal => {}
        }
    }
    if cert.complete_intersection.len() != original {
        fail(format!(
            "complete intersection has {} generators, height is {original}",
            cert.complete_intersection.len()
        ));
    }
    let holds = diag.is_empty();
    if holds {
        diag.push(format!("height {original} throughout {} steps", cert.steps.len()));
    }
    Verdict::new(holds, diag)
}

struct ChainRun<'a> {
    opts: &'a ChainOptions,
    base: LexOrder,
    steps: Vec<ChainStep>,
    ci: Vec<EdgeId>,
    checker: VdChecker,
    original: Option<usize>,
}

impl ChainRun<'_> {
    fn record(&self, h: usize) -> Option<usize> {
        Some(h + self.ci.len())
    }

    fn push(&mut self, step: ChainStep, input: &Graph) -> Result<(), LiaisonError> {
        let failed = step.failed_verdicts();
        self.steps.push(step);
        if !failed.is_empty() {
            let cert = self.certificate(input);
            return Err(LiaisonError::VerificationFailed {
                step: self.steps.len() - 1,
                failed,
                certificate: Box::new(cert),
            });
        }
        Ok(())
    }

    fn certificate(&self, input: &Graph) -> ChainCertificate {
        let count = |k: StepKind| self.steps.iter().filter(|s| s.kind == k).count();
        ChainCertificate {
            schema: SCHEMA.to_string(),
            graph: input.snapshot(),
            q: input.q(),
            n: input.n(),
            components: input.component_count(),
            verified: self.opts.verify,
            base_order: self.base.to_string(),
            complete_intersection: self.ci.iter().map(|e| e.to_string()).collect(),
            summary: ChainSummary {
                biliaisons: count(StepKind::BiliaisonDown),
                splits: count(StepKind::VariableSplit),
                strips: count(StepKind::StripAcyclic),
                steps: self.steps.len(),
                height: self.original,
                heights: self.steps.iter().filter_map(|s| s.height).collect(),
            },
            steps: self.steps.clone(),
            height_check: None,
        }
    }

    fn strip(&mut self, stage: usize, before: &Graph, after: &Graph) -> Result<ChainStep, LiaisonError> {
        let mut step = ChainStep::new(StepKind::StripAcyclic, stage, after);
        let removed: Vec<String> =
            before.edge_ids().filter(|e| !after.has_edge_id(*e)).map(|e| e.to_string()).collect();
        step.ideals.insert("removed".into(), removed);
        if self.opts.verify {
            let p_before = toric_ideal(before, &self.base)?;
            let p_after = toric_ideal(after, &self.base)?;
            let eq = p_before.equals(&p_after)?;
            let h = p_after.height()?;
            step.heights.insert("P".into(), h);
            step.height = self.record(h);
            step.verdicts.insert("same_toric_ideal".into(), Verdict::new(eq, vec![]));
        }
        Ok(step)
    }

    #[allow(clippy::too_many_arguments)]
    fn biliaison(
        &mut self,
        stage: usize,
        g: &Graph,
        full: &PathOrderedMatching,
        s: usize,
        p_height: Option<usize>,
    ) -> Result<(ChainStep, LexOrder), LiaisonError> {
        let e = full.prefix(g, s)?;
        let es = e.edges()[s - 1];
        let ord = self.base.with_top(e.term_order(s, [])?.priority())?;
        let mut step = ChainStep::new(StepKind::BiliaisonDown, stage, g);
        step.pom = Some(PomRecord::from(&e));
        step.position = Some(s);
        step.edge = Some(es.to_string());
        step.order = Some(ord.to_string());
        let smaller = step_hypotheses(g, &e, s, &ord)?;
        let minus = g.delete_edge(es)?;
        let smaller_minus = validate_pom(&minus, smaller.edges()).map_err(hypothesis("e' in G \\ e_s"))?;
        let ie = build_i(g, &e, &ord)?;
        let ie_prime = build_i(g, &smaller, &ord)?;
        let j = build_i(&minus, &smaller_minus, &ord)?;
        step.ideals.insert("I_e(s)".into(), render_polys(ie.generators()));
        step.ideals.insert("I_e(s-1)".into(), render_polys(ie_prime.generators()));
        step.ideals.insert("J".into(), render_polys(j.generators()));
        if !self.opts.verify {
            return Ok((step, ord));
        }
        let (in_e, in_p, in_j) = (ie.initial_ideal()?, ie_prime.initial_ideal()?, j.initial_ideal()?);
        step.initial_ideals.insert("I_e(s)".into(), in_e.to_string());
        step.initial_ideals.insert("I_e(s-1)".into(), in_p.to_string());
        step.initial_ideals.insert("J".into(), in_j.to_string());
        let v = &mut step.verdicts;
        v.insert("gb_step".into(), verify_gb_step(g, &e, s, &ord)?);
        v.insert("gb_one_sided".into(), verify_gb_one_sided(g, &e, s, &ord)?);
        v.insert("initial_bdl".into(), verify_initial_bdl(g, &e, s, &ord)?);
        v.insert("iso_equalities".into(), verify_iso_equalities(g, &e, &ord)?);
        v.insert(
            "squarefree_unmixed".into(),
            squarefree_unmixed(&[("I_e(s)", &in_e), ("I_e(s-1)", &in_p), ("J", &in_j)])?,
        );
        let p = p_height.expect("heights are computed when verifying");
        let (he, hp, hj) = (in_e.height()?, in_p.height()?, in_j.height()?);
        step.heights.insert("P".into(), p);
        step.heights.insert("I_e(s)".into(), he);
        step.heights.insert("I_e(s-1)".into(), hp);
        step.heights.insert("J".into(), hj);
        step.verdicts.insert(
            "heights".into(),
            Verdict::new(
                he == p && hp == p && hj + 1 == p,
                vec![format!("P {p}, I_e(s) {he}, I_e(s-1) {hp}, J {hj}")],
            ),
        );
        if s == 1 {
            let report = verify_corollary_vd(g, &smaller, &ord, &mut self.checker)?;
            step.verdicts.insert("corollary_vd_base".into(), vd_verdict(&report));
        }
        let report = verify_corollary_vd(g, &e, &ord, &mut self.checker)?;
        step.verdicts.insert("corollary_vd".into(), vd_verdict(&report));
        step.vd_witness = report.outcome.witness().cloned();
        step.height = self.record(he);
        Ok((step, ord))
    }

    fn split(
        &mut self,
        stage: usize,
        g: &Graph,
        pom: &PathOrderedMatching,
        x: EdgeId,
        ord: &LexOrder,
    ) -> Result<ChainStep, LiaisonError> {
        let mut step = ChainStep::new(StepKind::VariableSplit, stage, g);
        step.pom = Some(PomRecord::from(pom));
        step.edge = Some(x.to_string());
        step.order = Some(ord.to_string());
        let minus = g.delete_edge(x)?;
        let pom_minus = validate_pom(&minus, pom.edges())?;
        let ie = build_i(g, pom, ord)?;
        let ie_minus = build_i(&minus, &pom_minus, ord)?;
        let restored = ie_minus.with_generators(&[TwoTermPoly::var(x)])?;
        step.ideals.insert("I_e".into(), render_polys(ie.generators()));
        step.ideals.insert("I_e^{G-x}".into(), render_polys(ie_minus.generators()));
        if !self.opts.verify {
            return Ok(step);
        }
        step.verdicts.insert("key_split".into(), verify_key_split(g, pom, x, ord)?);
        let (in_e, in_m, in_r) = (ie.initial_ideal()?, ie_minus.initial_ideal()?, restored.initial_ideal()?);
        step.initial_ideals.insert("I_e".into(), in_e.to_string());
        step.initial_ideals.insert("I_e^{G-x}".into(), in_m.to_string());
        let (h, hm, hr) = (in_e.height()?, in_m.height()?, in_r.height()?);
        let hp = toric_ideal(&minus, &self.base)?.height()?;
        step.heights.insert("I_e".into(), h);
        step.heights.insert("I_e^{G-x}".into(), hm);
        step.heights.insert("I_e^{G-x}+(x)".into(), hr);
        step.heights.insert("P(G-x)".into(), hp);
        step.verdicts.insert(
            "heights".into(),
            Verdict::new(
                hm + 1 == h && hr == h && hp + 1 == h,
                vec![format!("I_e {h}, I_e^(G-x) {hm}, plus (x) {hr}, P(G-x) {hp}")],
            ),
        );
        step.verdicts.insert(
            "squarefree_unmixed".into(),
            squarefree_unmixed(&[("I_e", &in_e), ("I_e^{G-x}", &in_m)])?,
        );
        step.height = self.record(hr);
        Ok(step)
    }

    fn terminal(&mut self, stage: usize, g: &Graph) -> Result<ChainStep, LiaisonError> {
        let mut step = ChainStep::new(StepKind::Terminal, stage, g);
        step.ideals.insert("complete_intersection".into(), self.ci.iter().map(|e| e.to_string()).collect());
        if self.opts.verify {
            let distinct = self.ci.iter().collect::<BTreeSet<_>>().len() == self.ci.len();
            let p_zero = toric_ideal(g, &self.base)?.generators().is_empty();
            step.heights.insert("P".into(), 0);
            step.verdicts.insert(
                "complete_intersection".into(),
                Verdict::new(
                    distinct && p_zero,
                    vec![format!("{} distinct split variables, remaining graph acyclic: {p_zero}", self.ci.len())],
                ),
            );
            step.height = self.record(0);
        }
        Ok(step)
    }
}

/// Runs the chain on a bipartite graph.
pub fn run_chain(g: &Graph, opts: &ChainOptions) -> Result<ChainCertificate, LiaisonError> {
    bipartition(g)?;
    let base = match &opts.order {
        Some(o) => {
            if let Some(e) = g.edge_ids().find(|e| !o.contains(*e)) {
                return Err(PolyError::UnknownVariable(e).into());
            }
            o.clone()
        }
        None => LexOrder::by_ascending_id(g.edge_ids()),
    };
    let original = if opts.verify { Some(toric_ideal(g, &base)?.height()?) } else { None };
    let mut run = ChainRun { opts, base, steps: Vec::new(), ci: Vec::new(), checker: VdChecker::new(), original };
    let mut cur = g.clone();
    let limit = g.q() + 1;
    for stage in 0..=limit {
        // Leaves alone are not enough: a bridge in the matching would make
        // its step an identity with J of full height.
        let stripped = strip_acyclic(&cur);
        // Stripping is only worth a step when a further stage follows.
        if stripped != cur && !enumerate_cycles(&stripped).is_empty() {
            let step = run.strip(stage, &cur, &stripped)?;
            run.push(step, g)?;
            cur = stripped;
        }
        if enumerate_cycles(&cur).is_empty() {
            let step = run.terminal(stage, &cur)?;
            run.push(step, g)?;
            let mut cert = run.certificate(g);
            if opts.verify {
                let check = verify_heights(&cert);
                let holds = check.holds;
                cert.height_check = Some(check);
                if !holds {
                    let step = cert.steps.len() - 1;
                    return Err(LiaisonError::VerificationFailed {
                        step,
                        failed: vec!["heights".into()],
                        certificate: Box::new(cert),
                    });
                }
            }
            return Ok(cert);
        }
        let pom = match (&opts.seed_pom, stage) {
            (Some(seed), 0) => extend_pom(&cur, &validate_pom(&cur, seed)?)?,
            _ => find_maximal_pom(&cur)?,
        };
        let p_height = if opts.verify { Some(toric_ideal(&cur, &run.base)?.height()?) } else { None };
        let mut last_order = run.base.clone();
        for s in 1..=pom.len() {
            let (step, ord) = run.biliaison(stage, &cur, &pom, s, p_height)?;
            run.push(step, g)?;
            last_order = ord;
        }
        let x = find_free_variable(&cur, &pom)?;
        let step = run.split(stage, &cur, &pom, x, &last_order)?;
        run.push(step, g)?;
        run.ci.push(x);
        cur = cur.delete_edge(x)?;
    }
    Err(LiaisonError::NoTermination(limit))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn ids(v: &[u32]) -> Vec<EdgeId> {
        v.iter().map(|&i| EdgeId(i)).collect()
    }

    #[test]
    fn c4_chain() {
        let cert = run_chain(&corpus::c4(), &ChainOptions::verified()).unwrap();
        let kinds: Vec<StepKind> = cert.steps.iter().map(|s| s.kind).collect();
        assert_eq!(kinds, vec![StepKind::BiliaisonDown, StepKind::VariableSplit, StepKind::Terminal]);
        assert_eq!(cert.complete_intersection, vec!["e3"]);
        assert_eq!(cert.summary.heights, vec![1, 1, 1]);
        assert!(cert.all_verdicts_hold());
        assert_eq!(cert.steps[0].initial_ideals["I_e(s-1)"], "(e1*e3)");
        assert_eq!(cert.steps[0].initial_ideals["I_e(s)"], "(e3)");
    }

    #[test]
    fn forest_chain_is_empty() {
        let g = Graph::parse("1 2\n2 3\n3 4").unwrap();
        let cert = run_chain(&g, &ChainOptions::verified()).unwrap();
        assert!(cert.complete_intersection.is_empty());
        assert_eq!(cert.summary.height, Some(0));
        assert_eq!(cert.summary.biliaisons, 0);
    }

    #[test]
    fn k23_chain_reaches_height_two() {
        let cert = run_chain(&corpus::k23(), &ChainOptions::verified()).unwrap();
        assert_eq!(cert.complete_intersection.len(), 2);
        assert!(cert.summary.heights.iter().all(|&h| h == 2));
    }

    #[test]
    fn triangle_is_rejected() {
        let g = Graph::parse("1 2\n2 3\n3 1").unwrap();
        assert!(matches!(run_chain(&g, &ChainOptions::verified()), Err(LiaisonError::Graph(_))));
    }

    #[test]
    fn skeleton_has_no_verdicts() {
        let cert = run_chain(&corpus::c4(), &ChainOptions::skeleton()).unwrap();
        assert_eq!(cert.summary.biliaisons, 1);
        assert!(cert.steps.iter().all(|s| s.verdicts.is_empty() && s.height.is_none()));
    }

    #[test]
    fn wrong_order_is_a_hypothesis_violation() {
        let g = corpus::c6();
        let p = find_maximal_pom(&g).unwrap();
        assert_eq!(p.len(), 2);
        let natural = LexOrder::by_ascending_id(g.edge_ids());
        let s = 2;
        let ok = g.edge_ids();
        let good = natural.with_top(p.term_order(s, ok).unwrap().priority()).unwrap();
        assert!(verify_initial_bdl(&g, &p, s, &good).unwrap().holds);
        let mut bad: Vec<EdgeId> = good.priority().to_vec();
        bad.swap(0, 1);
        let bad = LexOrder::new(bad).unwrap();
        assert!(matches!(verify_initial_bdl(&g, &p, s, &bad), Err(LiaisonError::Hypothesis(_))));
        assert!(matches!(verify_gb_step(&g, &p, s, &bad), Err(LiaisonError::Hypothesis(_))));
    }

    #[test]
    fn seed_pom_is_honoured() {
        let g = corpus::c6();
        let opts = ChainOptions { seed_pom: Some(ids(&[4])), ..ChainOptions::verified() };
        let cert = run_chain(&g, &opts).unwrap();
        assert!(cert.steps.iter().any(|s| s.edge.as_deref() == Some("e4") && s.kind == StepKind::BiliaisonDown));
        assert!(cert.all_verdicts_hold());
    }

    #[test]
    fn certificate_json_is_stable() {
        let a = run_chain(&corpus::k23(), &ChainOptions::verified()).unwrap().to_json();
        let b = run_chain(&corpus::k23(), &ChainOptions::verified()).unwrap().to_json();
        assert_eq!(a, b);
        assert!(a.contains("\"schema\": \"liaison-cert/1\""));
    }
}
