use proptest::prelude::*;

use oddflip::connectivity::{classify_edge, is_flip_connected, EdgeClass};
use oddflip::graph::{parse_graph, serialize_graph, Graph};
use oddflip::matching::{apply_flip, lower_bound, parse_matching, serialize_matching, validate_sequence};
use oddflip::reductions::{
    build_diameter_instance, parse_formula, parse_roles, parse_setcover, serialize_roles, serialize_setcover,
    QuantifiedFormula, Quantifier, ReductionParams, SetCoverInstance,
};
use oddflip::search::{build_flip_graph, enumerate_odd_matchings, flip_distance, SearchConfig};

fn graph_strategy(max_n: usize, odd: bool) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(move |n| {
        let n = if odd && n % 2 == 0 { n - 1 } else { n };
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
        proptest::collection::vec(any::<bool>(), pairs.len()).prop_map(move |keep| {
            Graph::new(n, pairs.iter().zip(&keep).filter(|(_, &k)| k).map(|(&e, _)| e)).unwrap()
        })
    })
}

fn cfg() -> SearchConfig {
    SearchConfig::default()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn graph_round_trip(g in graph_strategy(12, false)) {
        let back = parse_graph(&serialize_graph(&g)).unwrap();
        prop_assert_eq!(back.vertex_count(), g.vertex_count());
        prop_assert_eq!(back.edges(), g.edges());
    }

    #[test]
    fn matchings_round_trip_and_flips_stay_odd(g in graph_strategy(9, true)) {
        let ms = enumerate_odd_matchings(&g).unwrap();
        for m in ms.iter().take(20) {
            prop_assert_eq!(&parse_matching(&g, &serialize_matching(m)).unwrap(), m);
            for w in g.neighbors(m.isolated()) {
                let f = apply_flip(&g, m, w).unwrap();
                prop_assert_eq!(f.isolated(), m.partner(w).unwrap());
                prop_assert!(ms.contains(&f));
            }
        }
    }

    #[test]
    fn distances_are_symmetric_and_witnessed(g in graph_strategy(9, true), i in any::<prop::sample::Index>(), j in any::<prop::sample::Index>()) {
        let ms = enumerate_odd_matchings(&g).unwrap();
        prop_assume!(!ms.is_empty());
        let (a, b) = (i.get(&ms), j.get(&ms));
        let ab = flip_distance(&g, a, b, None, &cfg()).unwrap();
        let ba = flip_distance(&g, b, a, None, &cfg()).unwrap();
        prop_assert_eq!(ab.distance, ba.distance);
        if let (Some(d), Some(w)) = (ab.distance, ab.witness) {
            let (end, len) = validate_sequence(&g, &w).unwrap();
            prop_assert_eq!(&end, b);
            prop_assert_eq!(len, d);
            prop_assert!(lower_bound(a, b).unwrap() <= d);
            // a budget equal to the distance still finds it, one less does not
            prop_assert_eq!(flip_distance(&g, a, b, Some(d), &cfg()).unwrap().distance, Some(d));
            if d > 0 {
                prop_assert!(flip_distance(&g, a, b, Some(d - 1), &cfg()).is_err());
            }
        }
    }

    #[test]
    fn fringe_diameter_matches_all_source_bfs(g in graph_strategy(11, true)) {
        let fg = build_flip_graph(&g, &cfg()).unwrap();
        prop_assume!(fg.state_count() > 0 && fg.component_count() == 1);
        prop_assert_eq!(fg.diameter_bounded().unwrap(), fg.diameter(1).unwrap());
        let ecc = fg.eccentricities(2);
        for (s, &e) in ecc.iter().enumerate().take(10) {
            let far = fg.distances_from(s).into_iter().flatten().max().unwrap();
            prop_assert_eq!(e, far);
        }
    }

    #[test]
    fn edge_classes_match_enumeration(g in graph_strategy(9, true)) {
        let ms = enumerate_odd_matchings(&g).unwrap();
        for &(a, b) in g.edges() {
            let uses = ms.iter().filter(|m| m.contains_edge(a, b)).count();
            let class = classify_edge(&g, (a, b)).unwrap();
            let expected = if uses == 0 {
                EdgeClass::Forbidden
            } else if uses == ms.len() {
                EdgeClass::Forced
            } else {
                EdgeClass::Flexible
            };
            prop_assert_eq!(class, expected);
        }
        let fg = build_flip_graph(&g, &cfg()).unwrap();
        prop_assert_eq!(is_flip_connected(&g).unwrap().0, fg.component_count() <= 1);
    }

    #[test]
    fn formula_round_trip(clauses in proptest::collection::vec(proptest::collection::vec((1i32..=4, any::<bool>()), 1..4), 1..4)) {
        let clauses: Vec<Vec<i32>> = clauses
            .into_iter()
            .map(|c| c.into_iter().map(|(v, neg)| if neg { -v } else { v }).collect())
            .collect();
        let f = QuantifiedFormula::from_prefix(&[(Quantifier::Forall, 2), (Quantifier::Exists, 2)], clauses).unwrap();
        let back = parse_formula(&f.to_string()).unwrap();
        prop_assert_eq!(back.to_string(), f.to_string());
    }

    #[test]
    fn setcover_round_trip(sets in proptest::collection::vec(proptest::collection::btree_set(1usize..=4, 1..4), 1..5)) {
        let sets: Vec<Vec<usize>> = sets.into_iter().map(|s| s.into_iter().collect()).collect();
        let n = sets.iter().flatten().copied().max().unwrap();
        prop_assume!((1..=n).all(|e| sets.iter().any(|s| s.contains(&e))));
        let sc = SetCoverInstance::new(n, sets).unwrap();
        let back = parse_setcover(&serialize_setcover(&sc)).unwrap();
        prop_assert_eq!(serialize_setcover(&back), serialize_setcover(&sc));
    }
}

#[test]
fn roles_round_trip() {
    let phi = parse_formula("p cnf 4 2\na 1 2 0\ne 3 4 0\n1 -2 3 0\n2 3 -4 0\n").unwrap();
    let p = ReductionParams {
        ell_override: Some(4),
        ..Default::default()
    };
    let inst = build_diameter_instance(&phi, &p).unwrap();
    let text = serialize_roles(&inst.roles);
    assert_eq!(parse_roles(inst.graph.vertex_count(), &text).unwrap(), inst.roles);
}
