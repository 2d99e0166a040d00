//! Independent characterizations of the same facts must agree: the
//! polynomial admissibility test, signed-circuit coverage, and the
//! exhaustive solver are checked against each other over a small corpus,
//! and the pruned solver against its naive reference.

use sfk_core::gen;
use sfk_core::graph::SignedGraph;
use sfk_core::oracle::{self, FlowNumberResult, Outcome, Prescriptions, SearchBudget};
use sfk_core::structure;
use sfk_core::Error;

fn small_bases() -> Vec<(&'static str, SignedGraph)> {
    vec![
        ("theta", gen::theta()),
        ("dumbbell", gen::dumbbell()),
        ("k4", gen::k4()),
        ("doubled_c4", gen::doubled_cycle(4)),
        ("prism", gen::prism()),
        ("k33", gen::k33()),
        ("doubled_c6", gen::doubled_cycle(6)),
    ]
}

/// Every signature with at most two negative edges on one base graph.
fn signatures(g: &SignedGraph) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for e in 0..g.m() {
        out.push(vec![e]);
        for f in e + 1..g.m() {
            out.push(vec![e, f]);
        }
    }
    out
}

fn budget() -> SearchBudget {
    SearchBudget {
        node_limit: 20_000_000,
        deadline: None,
    }
}

#[test]
fn admissibility_circuit_coverage_and_solver_agree() {
    for (name, base) in small_bases() {
        assert!(base.m() <= 10);
        for sig in signatures(&base) {
            let g = gen::with_negatives(&base, &sig);
            let fast = structure::is_flow_admissible(&g);

            let covered = (0..g.m()).all(|e| {
                structure::find_signed_circuit_through(&g, e)
                    .ok()
                    .flatten()
                    .is_some()
            });

            let solver = match oracle::flow_number(&g, 7, &budget()) {
                Ok(FlowNumberResult::Exact { .. }) => true,
                Ok(other) => panic!("{name} {sig:?}: solver came back undecided: {other:?}"),
                Err(Error::NoFlow(_)) => false,
                Err(e) => panic!("{name} {sig:?}: solver failed: {e}"),
            };

            assert_eq!(
                fast, covered,
                "{name} {sig:?}: admissibility test vs circuit coverage"
            );
            assert_eq!(
                fast, solver,
                "{name} {sig:?}: admissibility test vs exhaustive solver"
            );
        }
    }
}

#[test]
fn pruned_solver_matches_the_naive_reference() {
    for (name, base) in small_bases() {
        if base.m() > 8 {
            continue;
        }
        for sig in signatures(&base) {
            let g = gen::with_negatives(&base, &sig);
            for k in 2..=4u32 {
                let pruned =
                    oracle::exists_integer_flow(&g, k, &Prescriptions::none(), &budget()).unwrap();
                let naive =
                    oracle::exists_integer_flow_naive(&g, k, &Prescriptions::none()).unwrap();
                let (a, b) = (pruned.is_yes(), naive.is_yes());
                assert_eq!(a, b, "{name} {sig:?} k={k}: pruned {a} vs naive {b}");
                if let Outcome::Yes(f) = pruned {
                    f.verify(&g).unwrap();
                }
                if let Outcome::Yes(f) = naive {
                    f.verify(&g).unwrap();
                }
            }
        }
    }
}

#[test]
fn cut_negative_pairs_match_the_underlying_flow_number() {
    // when the two negatives form an edge cut the signed flow number equals
    // the flow number of the all-positive underlying graph
    let host = SignedGraph::all_positive(
        8,
        &[
            (0, 1),
            (0, 2),
            (0, 3),
            (1, 2),
            (1, 3),
            (4, 5),
            (4, 6),
            (4, 7),
            (5, 6),
            (5, 7),
            (2, 6),
            (3, 7),
        ],
    )
    .unwrap();
    // two triangles joined by a pair of edges, the joint being the cut
    let triangles = SignedGraph::all_positive(
        6,
        &[
            (0, 1),
            (1, 2),
            (0, 2),
            (3, 4),
            (4, 5),
            (3, 5),
            (0, 3),
            (1, 4),
        ],
    )
    .unwrap();
    let cases = vec![
        (host.clone(), vec![10usize, 11usize]),
        (triangles, vec![6, 7]),
    ];
    for (base, pair) in cases {
        let g = gen::with_negatives(&base, &pair);
        assert!(g.is_edge_cut(&pair));
        let signed = match oracle::flow_number(&g, 8, &budget()).unwrap() {
            FlowNumberResult::Exact { k, .. } => k,
            other => panic!("undecided: {other:?}"),
        };
        let positive = match oracle::flow_number(&base, 8, &budget()).unwrap() {
            FlowNumberResult::Exact { k, .. } => k,
            other => panic!("undecided: {other:?}"),
        };
        assert_eq!(signed, positive, "pair {pair:?}");
    }
}

#[test]
fn adjacent_negative_pairs_are_dead_ends() {
    for (base, pair) in [
        (gen::k4(), [0usize, 1usize]),
        (gen::k33(), [0, 1]),
        (gen::prism(), [0, 1]),
        (gen::petersen(), [0, 5]),
    ] {
        let g = gen::with_negatives(&base, &pair);
        let (u1, v1) = g.endpoints(pair[0]);
        let (u2, v2) = g.endpoints(pair[1]);
        assert!(
            u1 == u2 || u1 == v2 || v1 == u2 || v1 == v2,
            "fixture pairs must share a vertex"
        );
        assert!(!structure::is_flow_admissible(&g));
        assert!(matches!(
            oracle::flow_number(&g, 7, &budget()),
            Err(Error::NoFlow(_))
        ));
    }
}

#[test]
fn reduction_pieces_stay_admissible() {
    let host = SignedGraph::all_positive(
        8,
        &[
            (0, 1),
            (0, 2),
            (0, 3),
            (1, 2),
            (1, 3),
            (4, 5),
            (4, 6),
            (4, 7),
            (5, 6),
            (5, 7),
            (2, 6),
            (3, 7),
        ],
    )
    .unwrap();
    // independent negatives on one side, the cut all-positive
    let g = gen::with_negatives(&host, &[1, 4]);
    assert!(structure::is_flow_admissible(&g));
    let r = structure::reduce_two_cut(&g, [10, 11]).unwrap();
    assert!(structure::is_flow_admissible(&r.g1));
    assert!(structure::is_flow_admissible(&r.g2));
    assert_eq!(r.g1.negative_edges().len(), 2);
    assert!(r.g2.is_all_positive());

    // one negative on the cut itself
    let g = gen::with_negatives(&host, &[0, 10]);
    assert!(structure::is_flow_admissible(&g));
    let r = structure::reduce_two_cut(&g, [10, 11]).unwrap();
    assert!(structure::is_flow_admissible(&r.g1));
    assert!(structure::is_flow_admissible(&r.g2));
}
