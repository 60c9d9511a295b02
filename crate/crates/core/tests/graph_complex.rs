use num_bigint::BigInt;
use num_rational::BigRational;
use periodforge::gc::{differential, differential_matrix, gc_basis, homology_dims, is_zero_class, rank_exact, rank_mod_p, ChainVector};
use periodforge::graph::{builtin_graph, enumerate_stable_weighted, Family, Graph};
use proptest::prelude::*;

fn admissible_strategy() -> impl Strategy<Value = Graph> {
    (4usize..=7)
        .prop_flat_map(|n| {
            let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
            let len = pairs.len();
            (Just(n), Just(pairs), proptest::collection::vec(any::<bool>(), len))
        })
        .prop_map(|(n, pairs, keep)| {
            let edges: Vec<(usize, usize)> = pairs.into_iter().zip(keep).filter(|(_, k)| *k).map(|(p, _)| p).collect();
            Graph::new(n, &edges).unwrap()
        })
        .prop_filter("connected with minimum degree 3", |g| g.is_connected() && g.degrees().iter().all(|&d| d >= 3))
}

fn minus(c: &ChainVector) -> ChainVector {
    c.scale(&BigRational::from_integer(BigInt::from(-1)))
}

#[test]
fn wheels_are_cycles() {
    for n in [3, 5, 7] {
        let w = builtin_graph(Family::Wheel, n).unwrap();
        let c = ChainVector::from_graph(&w).unwrap();
        assert!(!c.is_zero(), "W{n} is a nonzero class");
        assert!(differential(&c).unwrap().is_zero(), "d W{n} = 0");
    }
}

#[test]
fn even_wheels_vanish() {
    for n in [4, 6] {
        let w = builtin_graph(Family::Wheel, n).unwrap();
        assert!(is_zero_class(&w));
        assert!(ChainVector::from_graph(&w).unwrap().is_zero());
    }
}

#[test]
fn parallel_edges_vanish() {
    let g = Graph::new(4, &[(0, 1), (0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
    assert!(is_zero_class(&g));
    assert!(ChainVector::from_graph(&g).unwrap().is_zero());
}

#[test]
fn composites_vanish_between_bases() {
    for loops in 3..=5 {
        for e in loops + 2..=3 * loops - 3 {
            let d1 = differential_matrix(loops, e).unwrap();
            let d2 = differential_matrix(loops, e - 1).unwrap();
            if d1.cols() == 0 || d2.cols() == 0 {
                continue;
            }
            assert!(d2.mul(&d1).is_zero(), "loops {loops}, edges {e}");
        }
    }
}

#[test]
fn modular_and_exact_ranks_agree() {
    for (loops, e) in [(5, 12), (5, 11), (5, 10), (6, 14)] {
        let d = differential_matrix(loops, e).unwrap();
        assert_eq!(rank_exact(&d), rank_mod_p(&d), "loops {loops}, edges {e}");
    }
}

#[test]
fn low_loop_homology() {
    assert_eq!(homology_dims(3).unwrap().into_iter().collect::<Vec<_>>(), vec![(0, 1)]);
    assert!(homology_dims(4).unwrap().is_empty());
    assert_eq!(homology_dims(5).unwrap().into_iter().collect::<Vec<_>>(), vec![(0, 1)]);
}

#[test]
fn basis_is_empty_outside_range() {
    assert!(gc_basis(3, 3).unwrap().is_empty());
    assert!(gc_basis(3, 7).unwrap().is_empty());
    assert_eq!(gc_basis(3, 6).unwrap().len(), 1);
}

#[test]
fn stable_graph_counts() {
    assert_eq!(enumerate_stable_weighted(2).unwrap().len(), 7);
    assert_eq!(enumerate_stable_weighted(3).unwrap().len(), 42);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn d_squared_vanishes_on_graphs(g in admissible_strategy()) {
        let c = ChainVector::from_graph(&g).unwrap();
        let dd = differential(&differential(&c).unwrap()).unwrap();
        prop_assert!(dd.is_zero(), "{:?}", g.edges());
    }

    #[test]
    fn transposition_flips_orientation(g in admissible_strategy(), i in 0usize..21, j in 0usize..21) {
        let m = g.num_edges();
        let (i, j) = (i % m, j % m);
        prop_assume!(i != j);
        let mut order: Vec<usize> = (0..m).collect();
        order.swap(i, j);
        let swapped = ChainVector::from_graph(&g.reorder_edges(&order).unwrap()).unwrap();
        let c = ChainVector::from_graph(&g).unwrap();
        prop_assert_eq!(&swapped, &minus(&c));
        prop_assert_eq!(differential(&swapped).unwrap(), minus(&differential(&c).unwrap()));
    }

    #[test]
    fn relabeling_vertices_keeps_class(g in admissible_strategy(), seed in any::<u64>()) {
        let n = g.num_vertices();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut s = seed;
        for k in (1..n).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(k, (s >> 33) as usize % (k + 1));
        }
        let h = g.relabel_vertices(&perm).unwrap();
        prop_assert_eq!(ChainVector::from_graph(&h).unwrap(), ChainVector::from_graph(&g).unwrap());
    }
}
