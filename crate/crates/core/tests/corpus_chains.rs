use std::time::Instant;

use toric_liaison::corpus;
use toric_liaison::liaison::{run_chain, ChainOptions, StepKind};

#[test]
fn every_corpus_chain_verifies() {
    for (name, g) in corpus::all() {
        let t = Instant::now();
        let cert = match run_chain(&g, &ChainOptions::default()) {
            Ok(c) => c,
            Err(e) => panic!("{name}: {e}"),
        };
        eprintln!(
            "{name}: {} steps, CI ({}), {:?}",
            cert.steps.len(),
            cert.complete_intersection.join(", "),
            t.elapsed()
        );
        assert!(cert.all_verdicts_hold(), "{name}");
        let height = cert.summary.height.unwrap();
        assert_eq!(cert.complete_intersection.len(), height, "{name}");
        assert!(cert.summary.heights.iter().all(|&h| h == height), "{name}");
        assert!(cert.steps.len() <= 3 * g.q() + 2, "{name}");
        assert_eq!(cert.steps.last().unwrap().kind, StepKind::Terminal, "{name}");
    }
}

// Two squares joined by a bridge. Leaf stripping alone leaves the bridge,
// and a matching through it gives a step whose base has full height.
#[test]
fn bridge_between_cycles_is_stripped() {
    let g = toric_liaison::Graph::parse("1 5\n1 6\n1 8\n2 5\n2 7\n3 6\n3 8\n4 5\n4 7\n").unwrap();
    assert!(g.is_leafless());
    let cert = run_chain(&g, &ChainOptions::default()).unwrap();
    assert!(cert.all_verdicts_hold());
    assert_eq!(cert.steps[0].kind, StepKind::StripAcyclic);
    assert_eq!(cert.steps[0].ideals["removed"], ["e1"]);
    assert_eq!(cert.complete_intersection.len(), 2);
}

#[test]
fn iso_equalities_reject_a_bridge() {
    use toric_liaison::liaison::{verify_iso_equalities, LiaisonError};
    use toric_liaison::pom::validate_pom;
    use toric_liaison::EdgeId;
    let g = toric_liaison::Graph::parse("1 5\n1 6\n1 8\n2 5\n2 7\n3 6\n3 8\n4 5\n4 7\n").unwrap();
    let pom = validate_pom(&g, &[EdgeId(5), EdgeId(1)]).unwrap();
    let ord = pom.term_order(2, g.edge_ids()).unwrap();
    assert!(matches!(verify_iso_equalities(&g, &pom, &ord), Err(LiaisonError::Hypothesis(_))));
}
