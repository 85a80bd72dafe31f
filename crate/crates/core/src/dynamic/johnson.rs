use crate::error::{Error, Result};
use crate::graph::{Graph, Weight};

/// Potentials `p(v) = dist(q, v)` for a virtual source `q` with zero-weight
/// edges to every node. Every edge satisfies `w(u, v) + p(u) - p(v) >= 0`.
/// Returns the potentials (indexed by node id) and the relaxation count.
pub fn johnson_potentials(g: &Graph) -> Result<(Vec<Weight>, u64)> {
    let n = g.capacity();
    let mut p = vec![0 as Weight; n];
    let mut relax = 0u64;
    // after round k, p(v) is exact for every v whose optimal path from q
    // has at most k + 1 edges; a change in round n means a negative cycle
    for round in 0..=g.node_count() {
        let mut changed = false;
        for (u, v, w) in g.edges() {
            relax += 1;
            if p[u] + w < p[v] {
                p[v] = p[u] + w;
                changed = true;
            }
        }
        if !changed {
            return Ok((p, relax));
        }
        if round == g.node_count() {
            break;
        }
    }
    Err(Error::NegativeCycle)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::apsp_oracle;
    use proptest::prelude::*;

    #[test]
    fn non_negative_gives_zero() {
        let g = Graph::from_edges(3, &[(0, 1, 4), (1, 2, 0)]).unwrap();
        assert_eq!(johnson_potentials(&g).unwrap().0, vec![0, 0, 0]);
    }

    #[test]
    fn chain_and_single_edge() {
        let g = Graph::from_edges(3, &[(0, 1, -1), (1, 2, -1)]).unwrap();
        assert_eq!(johnson_potentials(&g).unwrap().0, vec![0, -1, -2]);
        let g = Graph::from_edges(2, &[(0, 1, -5)]).unwrap();
        let p = johnson_potentials(&g).unwrap().0;
        assert_eq!(p[1], -5);
        assert_eq!(-5 + p[0] - p[1], 0);
    }

    #[test]
    fn negative_two_cycle() {
        let g = Graph::from_edges(2, &[(0, 1, 1), (1, 0, -2)]).unwrap();
        assert_eq!(johnson_potentials(&g), Err(Error::NegativeCycle));
    }

    proptest! {
        #[test]
        fn reweighting_identity(n in 2usize..16, raw in prop::collection::vec((0usize..16, 0usize..16, -6i64..30), 0..50)) {
            let es: Vec<_> = raw.into_iter().map(|(u, v, w)| (u % n, v % n, w)).filter(|e| e.0 != e.1).collect();
            let g = Graph::from_edges(n, &es).unwrap();
            let truth = apsp_oracle(&g);
            match johnson_potentials(&g) {
                Err(_) => prop_assert!(truth.negative_cycle),
                Ok((p, _)) => {
                    prop_assert!(!truth.negative_cycle);
                    let gp = g.map_weights(|u, v, w| w + p[u] - p[v]);
                    prop_assert!(gp.edges().all(|e| e.2 >= 0));
                    let rw = apsp_oracle(&gp);
                    for s in 0..n {
                        for t in 0..n {
                            let d = truth.dist(s, t);
                            let expect = if d == crate::graph::INFINITY { d } else { d + p[s] - p[t] };
                            prop_assert_eq!(rw.dist(s, t), expect);
                        }
                    }
                }
            }
        }
    }
}
