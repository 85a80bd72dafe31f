use dynapsp::decremental::{
    batch_delete, batch_delete_det, preprocess, preprocess_det, BuildSpec, DecrementalStructure, Kernel, Layer,
    StagedBuild,
};
use dynapsp::harness::{generate_graph, path_weight, WorkloadSpec};
use dynapsp::oracle::apsp_oracle;
use dynapsp::sssp::extract_path;
use dynapsp::{Error, Graph, NodeId, INFINITY};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn random_graph(n: usize, density: f64, seed: u64) -> Graph {
    generate_graph(&WorkloadSpec::mixed(n, density, 0, seed).with_weights(0, 20)).unwrap()
}

/// Recount of every congestion counter from the stored trees: for each
/// visit and each endpoint `x`, every node other than the visited one on
/// either stored path of `x` counts once.
fn recount(layer: &Layer, n: usize) -> Vec<u64> {
    let mut c = vec![0u64; n];
    for rec in layer.visits() {
        for x in 0..n {
            let mut on = vec![false; n];
            for tree in [rec.to_tree(), rec.from_tree()] {
                if let Ok(p) = extract_path(tree, x) {
                    for u in p {
                        on[u] = true;
                    }
                }
            }
            on[rec.node()] = false;
            for u in 0..n {
                c[u] += u64::from(on[u]);
            }
        }
    }
    c
}

fn assert_matches_oracle(ds: &DecrementalStructure, g: &Graph, deleted: &[NodeId], det: bool) {
    let (view, _) = if det {
        batch_delete_det(ds, deleted)
    } else {
        batch_delete(ds, deleted)
    }
    .unwrap();
    let h = g.without(deleted.iter().copied());
    let o = apsp_oracle(&h);
    for s in h.alive_nodes() {
        for t in h.alive_nodes() {
            assert_eq!(view.dist(s, t), o.dist(s, t), "({s}, {t}) after deleting {deleted:?}");
            if view.dist(s, t) != INFINITY {
                assert_eq!(path_weight(&h, &view.path(s, t).unwrap()), Some(view.dist(s, t)));
            }
        }
    }
    for &x in deleted {
        assert!(!view.contains(x));
    }
}

#[test]
fn single_node_graph() {
    let g = Graph::new(1);
    let ds = preprocess(&g, 3.0, 1).unwrap();
    for layer in ds.layers() {
        assert!(layer.visits().len() <= 1);
        for s in 0..1 {
            assert!(layer.candidates(s, s).len() <= 1);
        }
    }
    let (v, _) = batch_delete(&ds, &[]).unwrap();
    assert_eq!(v.dist(0, 0), 0);
}

#[test]
fn hand_run_path_level_one() {
    let g = Graph::from_edges(3, &[(0, 1, 1), (1, 2, 1)]).unwrap();
    let mut layer = Layer::new(1, 2, vec![1], 3);
    layer.visit(&g, 1, Kernel::BellmanFord).unwrap();
    assert_eq!(layer.visit_order().collect::<Vec<_>>(), vec![1]);
    let (d, h, _) = layer.visits()[0].through(0, 2).unwrap();
    assert_eq!((d, h), (2, 2));
}

#[test]
fn isolated_visit_and_repeat() {
    let g = Graph::from_edges(3, &[(0, 1, 1)]).unwrap();
    let mut layer = Layer::new(1, 2, vec![2], 3);
    layer.visit(&g, 2, Kernel::BellmanFord).unwrap();
    let rec = &layer.visits()[0];
    assert_eq!(rec.to_tree().entries().len(), 1);
    assert_eq!(rec.from_tree().entries().len(), 1);
    assert!((0..3).all(|u| layer.congestion(u) == 0));
    assert_eq!(layer.visit(&g, 2, Kernel::BellmanFord), Err(Error::AlreadyVisited(2)));
}

#[test]
fn triangle_counts_each_endpoint_once() {
    let g = Graph::from_edges(3, &[(0, 1, 1), (1, 0, 1), (0, 2, 1), (2, 0, 1), (1, 2, 1), (2, 1, 1)]).unwrap();
    let mut layer = Layer::new(1, 2, vec![0, 1, 2], 3);
    layer.visit(&g, 0, Kernel::BellmanFord).unwrap();
    assert_eq!(layer.congestion(0), 0);
    assert_eq!(layer.congestion(1), 1);
    assert_eq!(layer.congestion(2), 1);
}

#[test]
fn path_deletion_disconnects() {
    let g = Graph::from_edges(3, &[(0, 1, 1), (1, 2, 1)]).unwrap();
    let ds = preprocess(&g, 3.0, 0).unwrap();
    let (v, _) = batch_delete(&ds, &[1]).unwrap();
    assert_eq!(v.dist(0, 2), INFINITY);
}

#[test]
fn diamond_deletion_reroutes() {
    let g = Graph::from_edges(4, &[(0, 1, 1), (1, 3, 1), (0, 2, 1), (2, 3, 2)]).unwrap();
    let ds = preprocess(&g, 3.0, 0).unwrap();
    assert_eq!(batch_delete(&ds, &[]).unwrap().0.dist(0, 3), 2);
    let (v, _) = batch_delete(&ds, &[1]).unwrap();
    assert_eq!(v.dist(0, 3), 3);
    assert_eq!(v.path(0, 3).unwrap(), vec![0, 2, 3]);
}

#[test]
fn unknown_deletion_rejected() {
    let g = Graph::from_edges(2, &[(0, 1, 1)]).unwrap();
    let ds = preprocess(&g, 3.0, 0).unwrap();
    assert_eq!(batch_delete(&ds, &[5]).err(), Some(Error::DeletingUnknownNode(5)));
}

#[test]
fn negative_weights_rejected() {
    let g = Graph::from_edges(2, &[(0, 1, -1)]).unwrap();
    assert_eq!(preprocess(&g, 3.0, 0).err(), Some(Error::NegativeWeight));
}

#[test]
fn random_deletions_match_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for seed in 0..100 {
        let g = random_graph(32, 0.1, seed);
        let ds = preprocess(&g, 3.0, seed).unwrap();
        let mut nodes: Vec<NodeId> = (0..32).collect();
        nodes.shuffle(&mut rng);
        let k = 1 + (seed as usize % 8);
        assert_matches_oracle(&ds, &g, &nodes[..k], false);
    }
}

#[test]
fn congestion_recount_matches() {
    for seed in 0..10 {
        let g = random_graph(40, 0.08, seed);
        let ds = preprocess(&g, 3.0, seed).unwrap();
        for layer in ds.layers() {
            let c = recount(layer, 40);
            for (u, &k) in c.iter().enumerate() {
                assert_eq!(layer.congestion(u), k, "seed {seed} level {} node {u}", layer.level());
            }
        }
        let dsd = preprocess_det(&g, 3).unwrap();
        let c = recount(&dsd.layers()[0], 40);
        assert!(c.iter().enumerate().all(|(u, &k)| dsd.layers()[0].congestion(u) == k));
    }
}

#[test]
fn visit_order_alternates_by_congestion() {
    for seed in 0..10 {
        let g = random_graph(48, 0.08, seed);
        let ds = preprocess(&g, 1.0, seed).unwrap();
        for layer in ds.layers() {
            let order: Vec<NodeId> = layer.visit_order().collect();
            assert!(layer.centers().all(|c| layer.rank_of(c).is_some()));
            let non_centers = 48 - layer.center_count();
            for (pos, &v) in order.iter().enumerate() {
                let expect_center = pos % 2 == 0 || pos / 2 >= non_centers;
                assert_eq!(
                    layer.is_center(v),
                    expect_center,
                    "level {} position {pos}",
                    layer.level()
                );
            }
        }
    }
}

#[test]
fn sketch_edge_bound() {
    for seed in 0..10 {
        let g = random_graph(24, 0.15, seed);
        let ds = preprocess(&g, 3.0, seed).unwrap();
        let deleted = [seed as usize % 24, (seed as usize * 7 + 3) % 24];
        for (li, layer) in ds.layers().iter().enumerate() {
            for rank in 0..layer.visits().len() {
                let Some(sk) = ds.sketch(li, rank, &deleted).unwrap() else {
                    continue;
                };
                let deg: usize = (0..24).filter(|&y| sk.affected[y]).map(|y| g.degree(y)).sum();
                assert!(sk.edges.len() <= deg + 2 * 24);
            }
        }
    }
}

#[test]
fn deletion_is_pure_and_monotone() {
    for seed in 0..10 {
        let g = random_graph(28, 0.12, seed);
        let ds = preprocess(&g, 3.0, seed).unwrap();
        let before = ds.fingerprint();
        let small = [1, 5];
        let large = [1, 5, 9, 20];
        let (a, _) = batch_delete(&ds, &small).unwrap();
        let (b, _) = batch_delete(&ds, &large).unwrap();
        assert_eq!(ds.fingerprint(), before);
        for s in b.nodes() {
            for t in b.nodes() {
                assert!(b.dist(*s, *t) >= a.dist(*s, *t));
            }
        }
    }
}

#[test]
fn deterministic_examples() {
    let es: Vec<_> = (0..7).map(|i| (i, i + 1, 2)).collect();
    let g = Graph::from_edges(8, &es).unwrap();
    let full = preprocess_det(&g, 8).unwrap();
    assert_matches_oracle(&full, &g, &[], true);
    let ds = preprocess_det(&g, 2).unwrap();
    assert_matches_oracle(&ds, &g, &[3], true);
    assert_matches_oracle(&ds, &g, &[], true);
    assert_eq!(ds.layers()[0].visits().len(), 8);
}

#[test]
fn deterministic_random_deletions() {
    for seed in 0..20 {
        let g = random_graph(24, 0.12, seed);
        let ds = preprocess_det(&g, 2 + seed as usize % 3).unwrap();
        let deleted: Vec<NodeId> = (0..(seed as usize % 5)).map(|k| (k * 5 + seed as usize) % 24).collect();
        let mut d = deleted.clone();
        d.sort_unstable();
        d.dedup();
        assert_matches_oracle(&ds, &g, &d, true);
    }
}

#[test]
fn staged_build_matches_one_shot() {
    let g = random_graph(30, 0.1, 3);
    let one = preprocess(&g, 3.0, 3).unwrap();
    let mut staged = StagedBuild::new(&g, BuildSpec::randomized(3.0, 3), false).unwrap();
    let total = staged.total_units();
    let mut steps = 0;
    while !staged.is_done() {
        staged.step().unwrap();
        steps += 1;
    }
    assert_eq!(steps, total);
    assert_eq!(staged.into_structure().fingerprint(), one.fingerprint());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]
    #[test]
    fn reported_distances_are_realized(seed in 0u64..1000, k in 1usize..6) {
        let g = random_graph(20, 0.15, seed);
        let ds = preprocess(&g, 1.0, seed).unwrap();
        let deleted: Vec<NodeId> = (0..k).map(|i| (seed as usize + 3 * i) % 20).collect::<std::collections::BTreeSet<_>>().into_iter().collect();
        let (v, _) = batch_delete(&ds, &deleted).unwrap();
        let h = g.without(deleted.iter().copied());
        let o = apsp_oracle(&h);
        for &s in v.nodes() {
            for &t in v.nodes() {
                let d = v.dist(s, t);
                prop_assert!(d >= o.dist(s, t));
                if d != INFINITY {
                    prop_assert_eq!(path_weight(&h, &v.path(s, t).unwrap()), Some(d));
                }
            }
        }
    }
}
