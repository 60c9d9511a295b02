use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use periodforge::forms::{
    canonical_form_coefficients, canonical_form_numeric, canonical_form_symbolic, graph_canonical_form, FormSpec, RationalForm,
};
use periodforge::graph::{builtin_graph, Family};
use periodforge::poly::{cycle_basis, laplacian, LinearFormMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn random_point(rng: &mut ChaCha8Rng, n: usize) -> Vec<BigRational> {
    (0..n).map(|_| q(rng.gen_range(-9..=9), rng.gen_range(1..=7))).collect()
}

fn det_at(x: &LinearFormMatrix, p: &[BigRational]) -> BigRational {
    x.det().eval_rational(p)
}

/// Coefficient of `c * Omega / det^2` on the monomial missing variable `i`.
fn omega_coefficient(c: i64, p: &[BigRational], det: &BigRational, i: usize) -> BigRational {
    let sign = if (i + 1) % 2 == 0 { 1 } else { -1 };
    q(c * sign, 1) * p[i].clone() / (det.clone() * det.clone())
}

/// `tr((X^-1 dX)^n)` coefficient on the ascending monomial `vars`, by a
/// signed sum over orderings.
fn permutation_oracle(x: &LinearFormMatrix, p: &[BigRational], vars: &[usize]) -> BigRational {
    let m = x.size();
    let xm: Vec<Vec<BigRational>> = (0..m).map(|i| (0..m).map(|j| x.entry(i, j).eval_rational(p)).collect()).collect();
    let inv = invert(&xm);
    let a: Vec<Vec<Vec<BigRational>>> = vars
        .iter()
        .map(|&v| {
            let d: Vec<Vec<BigRational>> = x.derivative_matrix(v).iter().map(|r| r.iter().map(|&c| q(c as i64, 1)).collect()).collect();
            mul(&inv, &d)
        })
        .collect();
    let mut total = BigRational::zero();
    let mut order: Vec<usize> = (0..vars.len()).collect();
    permute(&mut order, 0, &mut |perm| {
        let mut prod = a[perm[0]].clone();
        for &k in &perm[1..] {
            prod = mul(&prod, &a[k]);
        }
        let tr = (0..m).fold(BigRational::zero(), |s, i| s + prod[i][i].clone());
        let inversions = (0..perm.len()).flat_map(|i| (i + 1..perm.len()).map(move |j| (i, j))).filter(|&(i, j)| perm[i] > perm[j]).count();
        total += if inversions % 2 == 0 { tr } else { -tr };
    });
    total
}

fn permute(v: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == v.len() {
        f(v);
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permute(v, k + 1, f);
        v.swap(k, i);
    }
}

fn mul(a: &[Vec<BigRational>], b: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| (0..n).fold(BigRational::zero(), |s, k| s + a[i][k].clone() * b[k][j].clone())).collect()).collect()
}

fn invert(a: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let n = a.len();
    let mut aug: Vec<Vec<BigRational>> = (0..n)
        .map(|i| a[i].iter().cloned().chain((0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() })).collect())
        .collect();
    for c in 0..n {
        let r = (c..n).find(|&r| !aug[r][c].is_zero()).expect("invertible");
        aug.swap(c, r);
        let piv = aug[c][c].clone();
        for v in aug[c].iter_mut() {
            *v /= piv.clone();
        }
        for r in 0..n {
            if r != c && !aug[r][c].is_zero() {
                let f = aug[r][c].clone();
                let row = aug[c].clone();
                for (v, w) in aug[r].iter_mut().zip(row) {
                    *v -= f.clone() * w;
                }
            }
        }
    }
    aug.into_iter().map(|r| r[n..].to_vec()).collect()
}

#[test]
fn coefficients_match_permutation_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let cases = [
        (LinearFormMatrix::generic(2).unwrap(), 3usize),
        (LinearFormMatrix::symmetric_generic(3).unwrap(), 5),
        (LinearFormMatrix::generic(3).unwrap(), 3),
    ];
    for (x, n) in cases {
        let nv = x.n_vars();
        let p = loop {
            let p = random_point(&mut rng, nv);
            if !det_at(&x, &p).is_zero() {
                break p;
            }
        };
        let c = canonical_form_coefficients(&x, &[n], &p, &[]).unwrap();
        for key in (0u32..1 << nv).filter(|k| k.count_ones() as usize == n).take(40) {
            let vars: Vec<usize> = (0..nv).filter(|&i| key >> i & 1 == 1).collect();
            let got = c.get(&key).cloned().unwrap_or_else(BigRational::zero);
            assert_eq!(got, permutation_oracle(&x, &p, &vars), "n = {n}, vars {vars:?}");
        }
    }
}

#[test]
fn omega_three_generic_two() {
    let x = LinearFormMatrix::generic(2).unwrap();
    let w = canonical_form_symbolic(&x, 3).unwrap();
    assert_eq!(w.k(), 2);
    assert!(w.equals(&RationalForm::omega(4).scale(3).over(x.det(), 2)));
}

/// `omega^5 = 10 sum_i (-1)^(i+1) x_i dx_1 ^ ... (omit dx_i) ... ^ dx_6 / det^2`
/// in the diagonal-first numbering.
#[test]
fn omega_five_symmetric_three_pointwise() {
    let x = LinearFormMatrix::symmetric_generic(3).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let all = (1u32 << 6) - 1;
    let mut checked = 0;
    while checked < 12 {
        let p = random_point(&mut rng, 6);
        let det = det_at(&x, &p);
        if det.is_zero() {
            continue;
        }
        let c = canonical_form_coefficients(&x, &[5], &p, &[]).unwrap();
        for i in 0..6 {
            let got = c.get(&(all & !(1 << i))).cloned().unwrap_or_else(BigRational::zero);
            assert_eq!(got, omega_coefficient(-10, &p, &det, i), "point {p:?}, omitted {i}");
        }
        checked += 1;
    }
}

#[test]
fn even_powers_vanish() {
    let g2 = LinearFormMatrix::generic(2).unwrap();
    for n in [2, 4] {
        assert!(canonical_form_symbolic(&g2, n).unwrap().is_zero());
    }
    let s3 = LinearFormMatrix::symmetric_generic(3).unwrap();
    let p = random_point(&mut ChaCha8Rng::seed_from_u64(2), 6);
    for n in [2, 4, 6] {
        let c = canonical_form_coefficients(&s3, &[n], &p, &[]).unwrap();
        assert!(c.values().all(Zero::is_zero), "n = {n}");
    }
}

#[test]
fn symmetric_three_mod_four_vanish() {
    let s2 = LinearFormMatrix::symmetric_generic(2).unwrap();
    assert!(canonical_form_symbolic(&s2, 3).unwrap().is_zero());
    let s3 = LinearFormMatrix::symmetric_generic(3).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..4 {
        let p = random_point(&mut rng, 6);
        if det_at(&s3, &p).is_zero() {
            continue;
        }
        for n in [3, 7] {
            let c = canonical_form_coefficients(&s3, &[n], &p, &[]).unwrap();
            assert!(c.values().all(Zero::is_zero), "n = {n}");
        }
    }
}

#[test]
fn transpose_sign() {
    let x = LinearFormMatrix::generic(2).unwrap();
    let w = canonical_form_symbolic(&x, 3).unwrap();
    let wt = canonical_form_symbolic(&x.transpose(), 3).unwrap();
    assert!(wt.equals(&w.scale(-1)));

    let x3 = LinearFormMatrix::generic(3).unwrap();
    let xt = x3.transpose();
    let p = random_point(&mut ChaCha8Rng::seed_from_u64(4), 9);
    for n in [3usize, 5] {
        let sign = if (n * (n - 1) / 2) % 2 == 0 { BigRational::one() } else { -BigRational::one() };
        let a = canonical_form_coefficients(&x3, &[n], &p, &[]).unwrap();
        let b = canonical_form_coefficients(&xt, &[n], &p, &[]).unwrap();
        for (key, v) in &a {
            let w = b.get(key).cloned().unwrap_or_else(BigRational::zero);
            assert_eq!(w, v.clone() * sign.clone(), "n = {n}");
        }
    }
}

#[test]
fn forms_are_closed() {
    let g2 = LinearFormMatrix::generic(2).unwrap();
    for n in [1, 3] {
        assert!(canonical_form_symbolic(&g2, n).unwrap().exterior_derivative().is_zero(), "n = {n}");
    }
    let s3 = LinearFormMatrix::symmetric_generic(3).unwrap();
    assert!(canonical_form_symbolic(&s3, 1).unwrap().exterior_derivative().is_zero());
}

#[test]
fn graph_form_independent_of_cycle_basis() {
    let w3 = builtin_graph(Family::Wheel, 3).unwrap();
    let basis = cycle_basis(&w3).unwrap();
    let p = vec![vec![1, 1, 0], vec![0, 1, 0], vec![-1, 2, 1]];
    let a = laplacian(&w3, &basis).unwrap();
    let b = laplacian(&w3, &basis.transform(&p).unwrap()).unwrap();
    let spec = FormSpec::new(vec![5]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..10 {
        let pt: Vec<f64> = (0..5).map(|_| rng.gen_range(0.1..2.0)).collect();
        let u = canonical_form_numeric(&a, &spec, &pt).unwrap();
        let v = canonical_form_numeric(&b, &spec, &pt).unwrap();
        assert!((u - v).abs() <= 1e-9 * u.abs().max(1.0), "{u} vs {v}");
    }
}

#[test]
fn wheel_three_density() {
    let w3 = builtin_graph(Family::Wheel, 3).unwrap();
    let w = graph_canonical_form(&w3, &FormSpec::new(vec![5]).unwrap()).unwrap();
    let psi = periodforge::poly::graph_polynomial(&w3).unwrap();
    assert_eq!(w.k(), 2);
    assert_eq!(w.det(), &psi);
    assert!(w.equals(&RationalForm::omega(6).scale(10).over(psi, 2)));
}
