//! Differential test of the balance machinery against the naive
//! integer oracle, over a seeded corpus of random quasistable graphs.

mod common;

use common::OracleGraph;
use univjac_core::balanced::{
    enumerate_balanced, enumerate_balanced_mode, enumerate_balanced_sequential,
    is_properly_balanced, is_strictly_balanced, Multidegree,
};
use univjac_core::corpus::random_quasistable_graphs;
use univjac_core::dualgraph::SubcurveMode;

#[test]
fn enumeration_matches_integer_oracle() {
    let graphs = random_quasistable_graphs(220, 6, 0xBA1A_0001);
    for (idx, graph) in graphs.iter().enumerate() {
        let oracle = OracleGraph::of(graph);
        let d = (idx as i64 % 21) - 10;
        let tag = || format!("graph #{idx} ({}) at d = {d}", graph.to_json());

        for strict in [false, true] {
            let got = enumerate_balanced(graph, d, strict).unwrap();
            let want = oracle.enumerate(d, strict);
            assert_eq!(
                got.iter().map(|m| m.0.clone()).collect::<Vec<_>>(),
                want,
                "strict = {strict}, {}",
                tag()
            );
        }

        let proper = enumerate_balanced(graph, d, false).unwrap();
        let strict_set = enumerate_balanced(graph, d, true).unwrap();
        assert!(
            strict_set.iter().all(|m| proper.contains(m)),
            "strict set escapes the proper set, {}",
            tag()
        );

        for md in &proper {
            assert!(is_properly_balanced(graph, md).unwrap().balanced, "{}", tag());
            assert_eq!(
                is_strictly_balanced(graph, md).unwrap(),
                oracle.strictly_balanced(&md.0).unwrap(),
                "strictness disagrees on {:?}, {}",
                md.0,
                tag()
            );
        }

        // nudge each enumerated multidegree off and compare verdicts
        if graph.n_vertices() >= 2 {
            for md in proper.iter().take(8) {
                let mut nudged = md.clone();
                nudged.0[0] += 1;
                *nudged.0.last_mut().unwrap() -= 1;
                assert_eq!(
                    is_properly_balanced(graph, &nudged).unwrap().balanced,
                    oracle.properly_balanced(&nudged.0),
                    "perturbed verdicts disagree on {:?}, {}",
                    nudged.0,
                    tag()
                );
            }
        }

        assert_eq!(
            proper,
            enumerate_balanced_sequential(graph, d, false).unwrap(),
            "sequential/parallel mismatch, {}",
            tag()
        );
        assert_eq!(
            proper,
            enumerate_balanced_mode(graph, d, false, SubcurveMode::All).unwrap(),
            "subcurve pruning mismatch, {}",
            tag()
        );
    }
}

#[test]
fn witnesses_point_at_real_violations() {
    use univjac_core::balanced::BalanceWitness;

    let graphs = random_quasistable_graphs(60, 5, 0xBA1A_0002);
    for graph in &graphs {
        let n = graph.n_vertices();
        let skew = Multidegree((0..n).map(|v| if v == 0 { 40 } else { -3 }).collect());
        let check = is_properly_balanced(graph, &skew).unwrap();
        let oracle = OracleGraph::of(graph);
        assert_eq!(check.balanced, oracle.properly_balanced(&skew.0));
        if check.balanced {
            continue;
        }
        match check.witness.expect("failures carry a witness") {
            BalanceWitness::Bounds {
                subcurve,
                degree,
                lo,
                hi,
            } => {
                let sum: i64 = subcurve
                    .iter()
                    .map(|id| skew.0[graph.index_of(id).unwrap()])
                    .sum();
                assert_eq!(sum, degree);
                assert!(
                    univjac_core::balanced::Rat::from_integer(degree) < lo
                        || univjac_core::balanced::Rat::from_integer(degree) > hi
                );
            }
            BalanceWitness::ExceptionalDegree { vertex, degree } => {
                let v = graph.index_of(&vertex).unwrap();
                assert!(graph.is_exceptional(v));
                assert_eq!(skew.0[v], degree);
                assert_ne!(degree, 1);
            }
        }
    }
}
