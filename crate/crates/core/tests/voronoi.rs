use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use periodforge::graph::{builtin_graph, named_graph, Family};
use periodforge::poly::cycle_basis;
use periodforge::voronoi::{
    arithmetic_minimum, cone_membership, minimal_vectors, short_vectors, sign_normalize, torelli_point, torelli_point_in_basis,
    voronoi_cell, ConeMembership, QuadraticForm, VoronoiCell,
};
use proptest::prelude::*;

fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

fn identity(g: usize) -> Vec<Vec<i64>> {
    (0..g).map(|i| (0..g).map(|j| i64::from(i == j)).collect()).collect()
}

fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect()).collect()
}

fn apply(p: &[Vec<i64>], v: &[i64]) -> Vec<i64> {
    p.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
}

/// Product of elementary matrices `I + a E_ij` and sign flips.
fn unimodular(g: usize, ops: &[(usize, usize, i64)]) -> (Vec<Vec<i64>>, Vec<Vec<i64>>) {
    let mut p = identity(g);
    let mut inv = identity(g);
    for &(i, j, a) in ops {
        let (i, j) = (i % g, j % g);
        let mut e = identity(g);
        let mut f = identity(g);
        if i == j {
            e[i][i] = -1;
            f[i][i] = -1;
        } else {
            e[i][j] = a;
            f[i][j] = -a;
        }
        p = mat_mul(&p, &e);
        inv = mat_mul(&f, &inv);
    }
    (p, inv)
}

/// Minimal vectors by scanning a box, as an oracle.
fn box_minimal_vectors(q: &QuadraticForm, radius: i64) -> Vec<Vec<i64>> {
    let g = q.dim();
    let mut best: Option<BigRational> = None;
    let mut out = Vec::new();
    let side = (2 * radius + 1) as usize;
    for idx in 0..side.pow(g as u32) {
        let mut k = idx;
        let v: Vec<i64> = (0..g)
            .map(|_| {
                let c = (k % side) as i64 - radius;
                k /= side;
                c
            })
            .collect();
        if v.iter().all(|&c| c == 0) {
            continue;
        }
        let val = q.value(&v);
        match &best {
            Some(b) if val > *b => {}
            Some(b) if val == *b => out.push(v),
            _ => {
                best = Some(val);
                out = vec![v];
            }
        }
    }
    out.sort();
    out
}

fn random_pd(entries: &[i64], g: usize) -> QuadraticForm {
    let b: Vec<Vec<i64>> = (0..g).map(|i| (0..g).map(|j| entries[i * g + j]).collect()).collect();
    let mut a = vec![vec![0i64; g]; g];
    for i in 0..g {
        for j in 0..g {
            a[i][j] = (0..g).map(|k| b[k][i] * b[k][j]).sum::<i64>() + if i == j { 1 } else { 0 };
        }
    }
    QuadraticForm::from_ints(&a).unwrap()
}

#[test]
fn principal_form_in_two_variables() {
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    let q = QuadraticForm::new(vec![vec![int(1), half.clone()], vec![half, int(1)]]).unwrap();
    assert_eq!(arithmetic_minimum(&q).unwrap(), int(1));
    let mv = minimal_vectors(&q).unwrap();
    assert_eq!(mv.len(), 6);
    for v in [[1, 0], [-1, 0], [0, 1], [0, -1], [1, -1], [-1, 1]] {
        assert!(mv.contains(&v.to_vec()), "{v:?}");
    }
    let cell = voronoi_cell(&q).unwrap();
    let mut gens = cell.generators();
    gens.sort();
    let mut expected = vec![vec![vec![1, 0], vec![0, 0]], vec![vec![0, 0], vec![0, 1]], vec![vec![1, -1], vec![-1, 1]]];
    expected.sort();
    assert_eq!(gens, expected);
}

#[test]
fn sunrise_lies_in_the_principal_cell() {
    let sunrise = named_graph("sunrise").unwrap();
    let basis = cycle_basis(&sunrise).unwrap().transform(&[vec![1, 0], vec![0, -1]]).unwrap();
    let lengths = [int(3), int(5), int(7)];
    let x = torelli_point_in_basis(&sunrise, &basis, &lengths).unwrap();
    assert_eq!(x, QuadraticForm::from_ints(&[vec![8, -3], vec![-3, 10]]).unwrap());
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    let principal = QuadraticForm::new(vec![vec![int(1), half.clone()], vec![half, int(1)]]).unwrap();
    let cell = voronoi_cell(&principal).unwrap();
    let graph_cell = VoronoiCell::of_graph(&sunrise, &basis).unwrap();
    let mut a = cell.vectors().to_vec();
    let mut b = graph_cell.vectors().to_vec();
    a.sort();
    b.sort();
    assert_eq!(a, b);
    match cone_membership(&x, &graph_cell).unwrap() {
        ConeMembership::Member(lambda) => assert_eq!(lambda, lengths.to_vec()),
        other => panic!("{other:?}"),
    }
}

#[test]
fn wheel_three_cell() {
    let w3 = builtin_graph(Family::Wheel, 3).unwrap();
    let basis = cycle_basis(&w3).unwrap();
    let ones = vec![int(1); 6];
    let q = torelli_point(&w3, &ones).unwrap().inverse().unwrap();
    let graph_cell = VoronoiCell::of_graph(&w3, &basis).unwrap();
    assert_eq!(graph_cell.len(), 6);
    let mut mv: Vec<Vec<i64>> = minimal_vectors(&q).unwrap().iter().map(|v| sign_normalize(v)).collect();
    mv.sort();
    mv.dedup();
    let mut cols = graph_cell.vectors().to_vec();
    cols.sort();
    assert_eq!(mv, cols);
    let lengths: Vec<BigRational> = [2, 3, 5, 7, 11, 13].iter().map(|&v| int(v)).collect();
    let x = torelli_point(&w3, &lengths).unwrap();
    assert!(cone_membership(&x, &voronoi_cell(&q).unwrap()).unwrap().is_member());
}

#[test]
fn points_outside_are_separated() {
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    let principal = QuadraticForm::new(vec![vec![int(1), half.clone()], vec![half, int(1)]]).unwrap();
    let cell = voronoi_cell(&principal).unwrap();
    let x = QuadraticForm::from_ints(&[vec![2, 1], vec![1, 2]]).unwrap();
    match cone_membership(&x, &cell).unwrap() {
        ConeMembership::Separated(y) => {
            let coords = x.upper_coordinates();
            let value = y.iter().zip(&coords).fold(BigRational::zero(), |s, (a, b)| s + a.clone() * b.clone());
            assert!(value < BigRational::zero());
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn short_vectors_respect_the_bound() {
    let q = QuadraticForm::from_ints(&[vec![2, 1, 0], vec![1, 3, 1], vec![0, 1, 4]]).unwrap();
    let bound = int(6);
    let found = short_vectors(&q, &bound).unwrap();
    let mut count = 0;
    for a in -4i64..=4 {
        for b in -4i64..=4 {
            for c in -4i64..=4 {
                let v = vec![a, b, c];
                if v != [0, 0, 0] && q.value(&v) <= bound {
                    count += 1;
                    assert!(found.iter().any(|(w, _)| *w == v), "{v:?}");
                }
            }
        }
    }
    assert_eq!(found.len(), count);
    assert!(found.iter().all(|(v, rest)| *rest == bound.clone() - q.value(v)));
}

#[test]
fn inverse_round_trip() {
    let q = QuadraticForm::from_ints(&[vec![2, -1, 0], vec![-1, 2, -1], vec![0, -1, 2]]).unwrap();
    let inv = q.inverse().unwrap();
    let back = inv.inverse().unwrap();
    assert_eq!(back, q);
    let one = BigRational::one();
    for i in 0..3 {
        let diag: BigRational = (0..3).fold(BigRational::zero(), |s, k| s + q.entry(i, k).clone() * inv.entry(k, i).clone());
        assert_eq!(diag, one);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn matches_box_search(g in 2usize..=3, entries in proptest::collection::vec(-2i64..=2, 9)) {
        let q = random_pd(&entries, g);
        prop_assert_eq!(minimal_vectors(&q).unwrap(), box_minimal_vectors(&q, 3));
    }

    #[test]
    fn equivariant_under_gl(
        g in 2usize..=4,
        entries in proptest::collection::vec(-2i64..=2, 16),
        ops in proptest::collection::vec((0usize..4, 0usize..4, -2i64..=2), 0..6),
    ) {
        let q = random_pd(&entries, g);
        let (p, p_inv) = unimodular(g, &ops);
        prop_assert_eq!(mat_mul(&p, &p_inv), identity(g));
        let moved = q.congruence(&p).unwrap();
        let mut expected: Vec<Vec<i64>> = minimal_vectors(&q).unwrap().iter().map(|v| apply(&p_inv, v)).collect();
        expected.sort();
        prop_assert_eq!(minimal_vectors(&moved).unwrap(), expected);
        prop_assert_eq!(arithmetic_minimum(&moved).unwrap(), arithmetic_minimum(&q).unwrap());
    }

    #[test]
    fn torelli_points_lie_in_their_cell(lengths in proptest::collection::vec(1i64..=20, 6)) {
        let w3 = builtin_graph(Family::Wheel, 3).unwrap();
        let basis = cycle_basis(&w3).unwrap();
        let ls: Vec<BigRational> = lengths.iter().map(|&v| int(v)).collect();
        let x = torelli_point(&w3, &ls).unwrap();
        match cone_membership(&x, &VoronoiCell::of_graph(&w3, &basis).unwrap()).unwrap() {
            ConeMembership::Member(_) => {}
            other => prop_assert!(false, "{:?}", other),
        }
    }
}
