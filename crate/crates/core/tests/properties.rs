use proptest::prelude::*;

use sl3_blocks::global::{assemble, enumerate_level, global_dim, global_dim_fusion_oracle, DEFAULT_ENUMERATION_CAP};
use sl3_blocks::graphs::{caterpillar, gamma, parse_graph, theta, TrivalentGraph};
use sl3_blocks::verlinde::verlinde;
use sl3_blocks::weights::Weight;

fn graphs() -> Vec<TrivalentGraph> {
    vec![
        caterpillar(3).unwrap(),
        caterpillar(4).unwrap(),
        caterpillar(5).unwrap(),
        gamma(1, 1).unwrap(),
        gamma(1, 2).unwrap(),
        gamma(2, 1).unwrap(),
        theta(),
    ]
}

fn weight(max: u32) -> impl Strategy<Value = Weight> {
    (0..=max).prop_flat_map(move |a| (Just(a), 0..=max - a)).prop_map(|(a, b)| Weight::new(a, b))
}

/// Attaches a new trinode at leaf `leaf`, which keeps that leaf and adds a
/// new last leaf.
fn insert_vacuum(g: &TrivalentGraph, leaf: usize) -> TrivalentGraph {
    let mut spec = g.to_spec();
    let new = spec.internal.iter().max().unwrap() + 1;
    spec.internal.push(new);
    let label = (leaf + 1).to_string();
    let old = spec.leaves[&label];
    spec.edges.push([old, [new, 1]]);
    spec.leaves.insert(label, [new, 2]);
    spec.leaves.insert((g.n_leaves() + 1).to_string(), [new, 3]);
    spec.build().unwrap()
}

#[test]
fn vacuum_insertion_preserves_dimensions() {
    for g in [caterpillar(3).unwrap(), caterpillar(4).unwrap(), gamma(1, 1).unwrap(), gamma(1, 2).unwrap()] {
        for leaf in 0..g.n_leaves() {
            let bigger = insert_vacuum(&g, leaf);
            assert_eq!(bigger.n_leaves(), g.n_leaves() + 1);
            for t in sl3_blocks::global::leaf_weight_tuples(g.n_leaves(), 2) {
                let mut t2 = t.clone();
                t2.push(Weight::ZERO);
                for level in 0..=3 {
                    let d = global_dim(&g, &t, level).unwrap();
                    assert_eq!(global_dim(&bigger, &t2, level).unwrap(), d);
                    assert_eq!(global_dim_fusion_oracle(&bigger, &t2, level).unwrap(), d);
                }
            }
        }
    }
}

#[test]
fn inline_json_graph_matches_builder() {
    let json = r#"{"internal":[7],"edges":[[[7,1],[7,2]]],"leaves":{"1":[7,3]}}"#;
    assert_eq!(parse_graph(json).unwrap(), gamma(1, 1).unwrap());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn polytope_fusion_and_verlinde_agree(gi in 0usize..7, ws in prop::collection::vec(weight(3), 5), level in 0u32..=4) {
        let g = &graphs()[gi];
        let t: Vec<Weight> = ws.into_iter().take(g.n_leaves()).collect();
        let d = global_dim(g, &t, level).unwrap();
        prop_assert_eq!(d, global_dim_fusion_oracle(g, &t, level).unwrap());
        prop_assert_eq!(d, verlinde(g.genus() as u32, &t, level).unwrap().dim);
    }

    #[test]
    fn sums_of_points_are_points(gi in 0usize..7, i in any::<prop::sample::Index>(), j in any::<prop::sample::Index>(), l1 in 1u32..=2, l2 in 1u32..=2) {
        let g = &graphs()[gi];
        let a = enumerate_level(g, None, l1, DEFAULT_ENUMERATION_CAP).unwrap();
        let b = enumerate_level(g, None, l2, DEFAULT_ENUMERATION_CAP).unwrap();
        let (p, q) = (&a[i.index(a.len())], &b[j.index(b.len())]);
        let s = p.add(q);
        prop_assert!(assemble(g, s.points().to_vec(), l1 + l2).is_ok());
        let lw: Vec<Weight> = p.leaf_weights(g).iter().zip(q.leaf_weights(g)).map(|(x, y)| Weight::new(x.a + y.a, x.b + y.b)).collect();
        prop_assert_eq!(s.leaf_weights(g), lw);
    }
}
