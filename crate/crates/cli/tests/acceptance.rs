//! Acceptance run over the fixed corpus. Prints one PASS/FAIL line per
//! criterion and exits non-zero if any criterion fails.
//!
//! Wherever practical the checks recompute from the public API or from
//! brute-force oracles instead of trusting the verdicts stored in the
//! certificates.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use toric_liaison::corpus;
use toric_liaison::graph::{enumerate_cycles, parse_edge_list, Graph};
use toric_liaison::groebner::IdealPresentation;
use toric_liaison::liaison::{run_chain, verify_iso_equalities, ChainCertificate, ChainOptions, ChainStep, StepKind};
use toric_liaison::pom::{build_i, raw_generators, validate_pom, GeneratorSet, PathOrderedMatching};
use toric_liaison::simplicial::{complex_of, replay, verify_corollary_vd, VdChecker};
use toric_liaison::toric::{kernel_member, toric_ideal};
use toric_liaison::varset::VarSet;
use toric_liaison::{EdgeId, LexOrder, Monomial, MonomialIdeal, TwoTermPoly};

// Time limits, pinned.
const HEIGHT_BUDGET: Duration = Duration::from_secs(5);
const K33_BUDGET: Duration = Duration::from_secs(60);
// Brute-force oracles are only run below these sizes.
const COVER_ORACLE_MAX_VARS: usize = 16;
const FACE_ORACLE_MAX_VERTICES: usize = 12;

type Check = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Check + 'a>);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(ctx: &str) -> impl Fn(E) -> String + '_ {
    move |e| format!("{ctx}: {e}")
}

/// The graph a step works on, rebuilt from its `e1:1-3 ...` snapshot so
/// that edge ids survive.
fn graph_of(snapshot: &str) -> Graph {
    let mut edges = Vec::new();
    let mut vertices = BTreeSet::new();
    for tok in snapshot.split_whitespace() {
        let (id, ends) = tok.split_once(':').expect("id:u-v");
        let (u, v) = ends.split_once('-').expect("u-v");
        let id: u32 = id.trim_start_matches('e').parse().unwrap();
        let (u, v): (u32, u32) = (u.parse().unwrap(), v.parse().unwrap());
        vertices.extend([u, v]);
        edges.push((id, u, v));
    }
    let doc = serde_json::json!({ "vertices": vertices, "edges": edges });
    Graph::from_json(&doc.to_string()).expect("snapshot is a graph")
}

fn order_of(step: &ChainStep) -> LexOrder {
    let text = step.order.as_deref().expect("step records its order").replace('>', " ");
    LexOrder::new(parse_edge_list(&text).unwrap()).unwrap()
}

fn edge_of(step: &ChainStep) -> EdgeId {
    parse_edge_list(step.edge.as_deref().expect("step records its edge")).unwrap()[0]
}

fn pom_of(g: &Graph, step: &ChainStep) -> PathOrderedMatching {
    let edges: Vec<EdgeId> =
        step.pom.as_ref().expect("step records its matching").edges.iter().map(|e| parse_edge_list(e).unwrap()[0]).collect();
    validate_pom(g, &edges).expect("recorded matching is valid")
}

/// One biliaison triple `(G, e, s)` with its order, or one split.
struct Biliaison {
    graph: Graph,
    pom: PathOrderedMatching,
    s: usize,
    ord: LexOrder,
}

struct Split {
    graph: Graph,
    pom: PathOrderedMatching,
    x: EdgeId,
    ord: LexOrder,
}

struct Chain {
    name: &'static str,
    input: Graph,
    cert: ChainCertificate,
    elapsed: Duration,
    biliaisons: Vec<Biliaison>,
    splits: Vec<Split>,
}

fn chains() -> Vec<Chain> {
    corpus::all()
        .into_iter()
        .map(|(name, g)| {
            let t = Instant::now();
            let cert = run_chain(&g, &ChainOptions::default()).unwrap_or_else(|e| panic!("{name}: {e}"));
            let elapsed = t.elapsed();
            let mut biliaisons = Vec::new();
            let mut splits = Vec::new();
            for step in &cert.steps {
                match step.kind {
                    StepKind::BiliaisonDown => {
                        let graph = graph_of(&step.graph);
                        let pom = pom_of(&graph, step);
                        let s = step.position.unwrap();
                        biliaisons.push(Biliaison { ord: order_of(step), pom, s, graph });
                    }
                    StepKind::VariableSplit => {
                        let graph = graph_of(&step.graph);
                        let pom = pom_of(&graph, step);
                        splits.push(Split { ord: order_of(step), x: edge_of(step), pom, graph });
                    }
                    _ => {}
                }
            }
            Chain { name, input: g, cert, elapsed, biliaisons, splits }
        })
        .collect()
}

/// `e` without `e_s`, valid in `g`.
fn smaller(b: &Biliaison, g: &Graph) -> PathOrderedMatching {
    validate_pom(g, &b.pom.sequence_without(b.s).unwrap()).expect("e' is a matching")
}

fn es(b: &Biliaison) -> EdgeId {
    b.pom.edges()[b.s - 1]
}

fn initial(g: &Graph, pom: &PathOrderedMatching, ord: &LexOrder) -> MonomialIdeal {
    build_i(g, pom, ord).unwrap().initial_ideal().unwrap()
}

/// Minimal vertex covers of the supports by exhaustive subset search.
fn brute_minimal_covers(mi: &MonomialIdeal) -> Vec<VarSet> {
    let vars: Vec<EdgeId> = mi.variables().iter().collect();
    assert!(vars.len() <= COVER_ORACLE_MAX_VARS);
    let supports: Vec<VarSet> = mi.generators().iter().map(|m| m.support().collect()).collect();
    let covers: Vec<VarSet> = (0u32..1 << vars.len())
        .map(|mask| vars.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e).collect::<VarSet>())
        .filter(|c| supports.iter().all(|s| s.intersects(*c)))
        .collect();
    covers.iter().copied().filter(|c| !covers.iter().any(|d| d != c && d.is_subset(*c))).collect()
}

/// `e` is a nonzerodivisor modulo a squarefree monomial ideal iff the colon
/// `(I : e)` is `I` again.
fn colon_nzd(mi: &MonomialIdeal, e: EdgeId) -> bool {
    mi.generators().iter().all(|m| mi.member(&m.without_var(e)))
}

/// Facets of the complex of a squarefree monomial ideal, found by listing
/// every subset and keeping the maximal non-covering ones.
fn brute_facets(mi: &MonomialIdeal, vertices: &[EdgeId]) -> BTreeSet<VarSet> {
    let supports: Vec<VarSet> = mi.generators().iter().map(|m| m.support().collect()).collect();
    let faces: Vec<VarSet> = (0u32..1 << vertices.len())
        .map(|mask| vertices.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e).collect::<VarSet>())
        .filter(|f| !supports.iter().any(|s| s.is_subset(*f)))
        .collect();
    faces.iter().copied().filter(|f| !faces.iter().any(|h| h != f && f.is_subset(*h))).collect()
}

/// Cycles as edge sets: nonempty subsets in which every vertex has degree
/// 0 or 2 and whose edges are connected.
fn brute_cycle_count(g: &Graph) -> usize {
    let edges = g.edges();
    assert!(edges.len() <= 20);
    let mut count = 0;
    for mask in 1u32..1 << edges.len() {
        let chosen: Vec<_> = edges.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, e)| e).collect();
        let mut deg = std::collections::BTreeMap::new();
        for e in &chosen {
            *deg.entry(e.u).or_insert(0) += 1;
            *deg.entry(e.v).or_insert(0) += 1;
        }
        if deg.values().any(|&d| d != 2) {
            continue;
        }
        // Connected: walk from the first edge.
        let mut seen = BTreeSet::from([chosen[0].u]);
        let mut grew = true;
        while grew {
            grew = false;
            for e in &chosen {
                if seen.contains(&e.u) != seen.contains(&e.v) {
                    seen.insert(e.u);
                    seen.insert(e.v);
                    grew = true;
                }
            }
        }
        if seen.len() == deg.len() {
            count += 1;
        }
    }
    count
}

fn criterion_1() -> Check {
    let t = Instant::now();
    let mut parts = Vec::new();
    for (name, g) in corpus::all().into_iter().filter(|(_, g)| g.is_connected()) {
        let ord = LexOrder::by_ascending_id(g.edge_ids());
        let h = toric_ideal(&g, &ord).map_err(err(name))?.height().map_err(err(name))?;
        let expected = g.q() + 1 - g.n();
        ensure(h == expected, || format!("{name}: height {h}, expected {expected}"))?;
        parts.push(format!("{name}={h}"));
    }
    let by_name = |n: &str| parts.iter().any(|p| p == n);
    ensure(by_name("C4=1") && by_name("K23=2") && by_name("K33=4"), || format!("reference heights: {parts:?}"))?;
    let elapsed = t.elapsed();
    ensure(elapsed < HEIGHT_BUDGET, || format!("took {elapsed:?}"))?;
    Ok(format!("{} in {elapsed:.2?}", parts.join(" ")))
}

fn criterion_2() -> Check {
    let mut total = 0;
    for (name, g) in corpus::all() {
        let ascending = LexOrder::by_ascending_id(g.edge_ids());
        let descending = LexOrder::new(ascending.priority().iter().rev().copied().collect()).unwrap();
        for ord in [ascending, descending] {
            let p = toric_ideal(&g, &ord).map_err(err(name))?;
            for f in p.reduced_gb().map_err(err(name))? {
                total += 1;
                ensure(kernel_member(f, &g).map_err(err(name))?, || format!("{name}: {f} is not in the kernel"))?;
            }
        }
    }
    Ok(format!("{total}/{total} reduced basis elements in the kernel (two orders per graph)"))
}

fn criterion_3(chains: &[Chain]) -> Check {
    let mut n = 0;
    for c in chains {
        for b in &c.biliaisons {
            let full = build_i(&b.graph, &b.pom, &b.ord).map_err(err(c.name))?;
            let init = full.initial_ideal().map_err(err(c.name))?;
            for which in [GeneratorSet::Full, GeneratorSet::OneSided] {
                let raw = raw_generators(&b.graph, &b.pom, &b.ord, which).map_err(err(c.name))?;
                let raw = IdealPresentation::new(raw, b.ord.clone()).map_err(err(c.name))?;
                ensure(raw.generator_leads() == init, || {
                    format!("{} s={} {:?}: leads {} vs {}", c.name, b.s, which, raw.generator_leads(), init)
                })?;
                ensure(raw.equals(&full).map_err(err(c.name))?, || format!("{} s={}: raw set spans a different ideal", c.name, b.s))?;
            }
            n += 1;
        }
    }
    Ok(format!("{n} triples, lead monomials equal the Buchberger initial ideal"))
}

fn criterion_4(chains: &[Chain]) -> Check {
    let mut n = 0;
    for c in chains {
        for b in &c.biliaisons {
            let e = es(b);
            let minus = b.graph.delete_edge(e).unwrap();
            let e_prime = smaller(b, &b.graph);
            let e_prime_minus = smaller(b, &minus);
            let lhs = initial(&b.graph, &e_prime, &b.ord);
            let base = initial(&minus, &e_prime_minus, &b.ord);
            let rhs = initial(&b.graph, &b.pom, &b.ord).scale(e).sum(&base);
            ensure(lhs == rhs, || format!("{} s={}: {lhs} vs {rhs}", c.name, b.s))?;
            ensure(base.is_squarefree() && colon_nzd(&base, e), || format!("{} s={}: {e} zero divisor mod {base}", c.name, b.s))?;
            n += 1;
        }
    }
    Ok(format!("{n} steps, identity and nonzerodivisor check exact"))
}

fn criterion_5(chains: &[Chain]) -> Check {
    let mut n = 0;
    for c in chains {
        // The equalities concern the last edge, i.e. the full prefix at each s.
        for b in &c.biliaisons {
            let v = verify_iso_equalities(&b.graph, &b.pom, &b.ord).map_err(err(c.name))?;
            ensure(v.holds, || format!("{} s={}: {:?}", c.name, b.s, v.diagnostics))?;
            n += 1;
        }
        for step in c.cert.steps.iter().filter(|s| s.kind == StepKind::BiliaisonDown) {
            ensure(step.verdicts["iso_equalities"].holds, || format!("{}: stored verdict fails", c.name))?;
        }
    }
    Ok(format!("{n} steps, every qualifying cycle gives equal reduced bases"))
}

fn criterion_6(chains: &[Chain]) -> Check {
    let mut n = 0;
    for c in chains {
        for sp in &c.splits {
            let lhs = build_i(&sp.graph, &sp.pom, &sp.ord).map_err(err(c.name))?;
            let minus = sp.graph.delete_edge(sp.x).unwrap();
            let pom_minus = validate_pom(&minus, sp.pom.edges()).map_err(err(c.name))?;
            let rhs = build_i(&minus, &pom_minus, &sp.ord)
                .map_err(err(c.name))?
                .with_generators(&[TwoTermPoly::var(sp.x)])
                .map_err(err(c.name))?;
            ensure(lhs.reduced_gb().unwrap() == rhs.reduced_gb().unwrap(), || format!("{} split {}", c.name, sp.x))?;
            n += 1;
        }
    }
    Ok(format!("{n} splits, reduced bases identical"))
}

fn criterion_7(chains: &[Chain]) -> Check {
    for c in chains {
        let ord = LexOrder::by_ascending_id(c.input.edge_ids());
        let h = toric_ideal(&c.input, &ord).unwrap().height().unwrap();
        ensure(c.cert.steps.last().map(|s| s.kind) == Some(StepKind::Terminal), || format!("{}: no terminal step", c.name))?;
        let ci: BTreeSet<&String> = c.cert.complete_intersection.iter().collect();
        ensure(ci.len() == c.cert.complete_intersection.len(), || format!("{}: repeated split variable", c.name))?;
        ensure(c.cert.complete_intersection.len() == h, || format!("{}: CI size {} vs height {h}", c.name, ci.len()))?;
        // The split variables generate a complete intersection of the same height.
        let ci_ideal = MonomialIdeal::new(c.splits.iter().map(|s| Monomial::var(s.x)));
        ensure(ci_ideal.height().unwrap() == h, || format!("{}: CI height", c.name))?;
    }
    let c4 = &chains.iter().find(|c| c.name == "C4").unwrap().cert;
    ensure(
        c4.summary.biliaisons == 1 && c4.summary.splits == 1 && c4.complete_intersection == ["e3"],
        || format!("C4: {} biliaisons, {} splits, CI {:?}", c4.summary.biliaisons, c4.summary.splits, c4.complete_intersection),
    )?;
    Ok(format!("{} chains terminate; C4 gives 1 biliaison, 1 split, CI=(e3)", chains.len()))
}

fn criterion_8(chains: &[Chain]) -> Check {
    let mut n = 0;
    let mut check = |name: &str, mi: &MonomialIdeal| -> Result<(), String> {
        ensure(mi.is_squarefree(), || format!("{name}: {mi} not squarefree"))?;
        let covers = brute_minimal_covers(mi);
        let sizes: BTreeSet<usize> = covers.iter().map(|c| c.len()).collect();
        ensure(sizes.len() <= 1, || format!("{name}: {mi} has primes of sizes {sizes:?}"))?;
        let primes = mi.minimal_primes().unwrap();
        let (a, b): (BTreeSet<VarSet>, BTreeSet<VarSet>) = (covers.iter().copied().collect(), primes.iter().copied().collect());
        ensure(a == b, || format!("{name}: minimal primes of {mi} are {b:?}, oracle gives {a:?}"))?;
        n += 1;
        Ok(())
    };
    for c in chains {
        for b in &c.biliaisons {
            let minus = b.graph.delete_edge(es(b)).unwrap();
            check(c.name, &initial(&b.graph, &b.pom, &b.ord))?;
            check(c.name, &initial(&b.graph, &smaller(b, &b.graph), &b.ord))?;
            check(c.name, &initial(&minus, &smaller(b, &minus), &b.ord))?;
        }
        for sp in &c.splits {
            let minus = sp.graph.delete_edge(sp.x).unwrap();
            check(c.name, &initial(&sp.graph, &sp.pom, &sp.ord))?;
            check(c.name, &initial(&minus, &validate_pom(&minus, sp.pom.edges()).unwrap(), &sp.ord))?;
        }
    }
    Ok(format!("{n} initial ideals squarefree and unmixed (cover oracle)"))
}

fn criterion_9(chains: &[Chain]) -> Check {
    let mut n = 0;
    for c in chains {
        let mut checker = VdChecker::new();
        for b in &c.biliaisons {
            let mut positions = vec![b.pom.clone()];
            if b.s == 1 {
                positions.push(smaller(b, &b.graph));
            }
            for pom in positions {
                let r = verify_corollary_vd(&b.graph, &pom, &b.ord, &mut checker).map_err(err(c.name))?;
                ensure(r.holds(), || format!("{} {pom}: {:?} {:?}", c.name, r.extension, r.split))?;
                let w = r.outcome.witness().expect("decomposable");
                replay(&r.complex, w).map_err(err(c.name))?;
                // Pure of dimension |E| - height - 1.
                let h = initial(&b.graph, &pom, &b.ord).height().unwrap() as isize;
                ensure(r.complex.is_pure() && r.complex.dim() == Some(b.graph.q() as isize - h - 1), || {
                    format!("{} {pom}: purity", c.name)
                })?;
                n += 1;
            }
        }
    }
    let k33 = chains.iter().find(|c| c.name == "K33").unwrap();
    ensure(k33.elapsed < K33_BUDGET, || format!("K33 chain took {:?}", k33.elapsed))?;
    Ok(format!("{n} complexes decomposable with replayed witnesses; K33 chain {:.2?}", k33.elapsed))
}

fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

fn cli_chain(g: &Graph) -> toric_liaison_cli::Outcome {
    toric_liaison_cli::run(["toric-liaison", "--format", "json", "chain", "-"], &mut g.to_json().as_bytes())
}

fn criterion_10(chains: &[Chain]) -> Check {
    for c in chains {
        let a = cli_chain(&c.input);
        let b = cli_chain(&c.input);
        ensure(a.code == 0, || format!("{}: exit {} {}", c.name, a.code, a.stderr))?;
        ensure(a == b, || format!("{}: runs differ", c.name))?;
        ensure(a.stdout.trim_end() == c.cert.to_json(), || format!("{}: CLI and library disagree", c.name))?;
        let path = golden_dir().join(format!("chain_{}.json", c.name));
        let golden = std::fs::read_to_string(&path).map_err(err(&path.display().to_string()))?;
        ensure(golden == a.stdout, || format!("{}: differs from {}", c.name, path.display()))?;
    }
    Ok(format!("{} certificates byte-identical across runs and to golden files", chains.len()))
}

fn criterion_11(chains: &[Chain]) -> Check {
    let mut counts = Vec::new();
    for (name, g) in corpus::all() {
        let fast = enumerate_cycles(&g).len();
        let slow = brute_cycle_count(&g);
        ensure(fast == slow, || format!("{name}: {fast} cycles vs {slow} by subsets"))?;
        counts.push((name, fast));
    }
    let count = |n: &str| counts.iter().find(|(m, _)| *m == n).unwrap().1;
    ensure(count("K23") == 3 && count("K33") == 15, || format!("K23 {}, K33 {}", count("K23"), count("K33")))?;

    let mut complexes = 0;
    for c in chains {
        for b in &c.biliaisons {
            let vertices: Vec<EdgeId> = b.graph.edge_ids().collect();
            if vertices.len() > FACE_ORACLE_MAX_VERTICES {
                continue;
            }
            let mi = initial(&b.graph, &b.pom, &b.ord);
            let d = complex_of(&mi, vertices.iter().copied().collect()).unwrap();
            let facets: BTreeSet<VarSet> = d.facets().iter().copied().collect();
            ensure(facets == brute_facets(&mi, &vertices), || format!("{}: facets of {mi}", c.name))?;
            complexes += 1;
        }
    }
    Ok(format!("cycle counts match subset enumeration (K23=3, K33=15); {complexes} complexes match face enumeration"))
}

fn main() -> ExitCode {
    let t = Instant::now();
    let chains = chains();
    let criteria: Vec<Criterion> = vec![
        ("height formula", Box::new(criterion_1)),
        ("kernel oracle", Box::new(criterion_2)),
        ("raw generators are a Groebner basis", Box::new(|| criterion_3(&chains))),
        ("initial ideal basic double link", Box::new(|| criterion_4(&chains))),
        ("isomorphism ideal equalities", Box::new(|| criterion_5(&chains))),
        ("split equality", Box::new(|| criterion_6(&chains))),
        ("termination in a complete intersection", Box::new(|| criterion_7(&chains))),
        ("squarefree and unmixed", Box::new(|| criterion_8(&chains))),
        ("vertex decomposability", Box::new(|| criterion_9(&chains))),
        ("determinism", Box::new(|| criterion_10(&chains))),
        ("brute-force cross-checks", Box::new(|| criterion_11(&chains))),
    ];
    let mut failed = 0;
    for (i, (title, check)) in criteria.iter().enumerate() {
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_else(|| "panic".into()))
        });
        match result {
            Ok(detail) => println!("criterion {:>2} PASS {title}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL {title}: {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed in {:.2?}", criteria.len() - failed, t.elapsed());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
