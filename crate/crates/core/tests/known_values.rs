use treecover::island::ScriptOp;
use treecover::*;

fn budget() -> OracleBudget {
    OracleBudget::path_default()
}

/// Heavy path x-u-v-y; u and v carry one leaf each, x and y two each.
fn heavy_spine() -> Graph {
    // x=0 u=1 v=2 y=3, leaves 4..=9
    Graph::from_edges(
        10,
        &[
            (0, 1),
            (1, 2),
            (2, 3),
            (1, 4),
            (2, 5),
            (0, 6),
            (0, 7),
            (3, 8),
            (3, 9),
        ],
    )
    .unwrap()
}

#[test]
fn light_neighbor_counts_on_a_heavy_spine() {
    let t = heavy_spine();
    let (p, data) = light_neighbor_formula(&t).unwrap();
    assert_eq!(
        (data.leaves, data.heavy_edges, data.s, data.t),
        (6, 3, 2, 1)
    );
    assert_eq!(p, 3);
    assert_eq!(tree_path_cover(&t).unwrap().count, 3);
    assert_eq!(oracle_min_cover(&t, &budget()).unwrap().0, 3);
}

#[test]
fn expansion_of_a_short_path() {
    let t = Graph::path(3);
    let e = expand_tree(&t, &[3, 4]).unwrap();
    assert_eq!((e.graph.n(), e.graph.m()), (6, 9));
    let c = expansion_path_cover(&t, &[3, 4]).unwrap();
    assert_eq!(c.count, 1);
    assert_eq!(oracle_min_cover(&e.graph, &budget()).unwrap().0, 1);
}

#[test]
fn sequence_sets() {
    let k2k3 = Graph::complete(2).disjoint_union(&Graph::complete(3));
    assert_eq!(sequence_set(&k2k3, 16).unwrap().to_string(), "{(2,3)}");
    assert_eq!(
        sequence_set(&Graph::path(5), 16).unwrap().to_string(),
        "{(5)}"
    );
    assert_eq!(
        sequence_set(&Graph::complete_bipartite(5, 2), 16)
            .unwrap()
            .to_string(),
        "{(1,1,5), (1,3,3)}"
    );
    assert_eq!(
        sequence_set(&Graph::spider(&[1, 1, 2]), 16)
            .unwrap()
            .to_string(),
        "{(1,4), (2,3)}"
    );
    assert!(matches!(
        sequence_set(&Graph::path(17), 16),
        Err(Error::Resource(_))
    ));
}

#[test]
fn complement_values() {
    let k23 = Graph::complete_bipartite(2, 3);
    let b = OracleBudget::lambda_default();
    assert_eq!(oracle_lambda(&k23, &b).unwrap().0, 5);
    assert_eq!(oracle_rho(&k23, &b).unwrap().0, 1);
    match lambda_rho_of_complement(&k23.complement()).unwrap() {
        ComplementLambda::Exact(inv) => {
            assert_eq!((inv.lambda, inv.rho, inv.path_cover_number), (5, 1, 2));
            let f = inv.certificate.unwrap();
            assert_eq!(f.island_sequence().to_string(), "(2,3)");
        }
        other => panic!("expected exact values, got {other:?}"),
    }
    // P = 1: only a bound, plus brute force for small n
    match lambda_rho_of_complement(&Graph::path(5)).unwrap() {
        ComplementLambda::UpperBound { n, bound, exact } => {
            assert_eq!((n, bound), (5, 4));
            let (l, _) = exact.unwrap();
            assert!(l <= bound);
        }
        other => panic!("expected a bound, got {other:?}"),
    }
}

#[test]
fn composite_family_member_certificate() {
    // a 3-vine star with a second star hung from one of its B vertices
    let mut t = make_labeled_generalized_star(3, 2).unwrap();
    t.apply_type3(1, &make_labeled_generalized_star(3, 2).unwrap())
        .unwrap();
    let g = t.tree();
    assert_eq!(g.n(), 14);
    assert!(duis(&g).unwrap().unique);
    assert!(sequence_set(&g, 16).unwrap().is_unique());
    let script = certify_family_membership(&g).unwrap().unwrap();
    let kinds: Vec<&str> = script
        .ops
        .iter()
        .map(|op| match op {
            ScriptOp::Base { .. } => "base",
            ScriptOp::Type1 { .. } => "type1",
            ScriptOp::Type2 { .. } => "type2",
            ScriptOp::Type3 { .. } => "type3",
        })
        .collect();
    assert_eq!(kinds, ["base", "type3"]);
    assert_eq!(script.replay().unwrap().tree(), g);
}

#[test]
fn type1_composite_is_unique() {
    let mut t = make_labeled_generalized_star(3, 3).unwrap();
    // vertex 2 is the A vertex in the middle of the first vine
    assert_eq!(t.mark(2), Mark::A);
    t.apply_type1(2, &make_labeled_generalized_star(3, 1).unwrap())
        .unwrap();
    let g = t.tree();
    assert!(duis(&g).unwrap().unique);
    assert!(sequence_set(&g, 16).unwrap().is_unique());
}
