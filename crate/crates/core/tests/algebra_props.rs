//! Norms and characteristic polynomials of matrix, Kummer, symbol and
//! Albert algebras.

use std::sync::LazyLock;

use kforms::albert::CubicNormStructure;
use kforms::fields::{Field, FiniteField, FqElem};
use kforms::powassoc::Algebra;
use kforms::symbolalg::SymbolAlgebra;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn gf(p: u64) -> FiniteField {
    FiniteField::new(p, 1).unwrap()
}

fn int(f: &FiniteField, a: &FqElem) -> i64 {
    f.coeffs(*a)[0] as i64
}

/// Leibniz determinant mod p.
fn leibniz(m: &[Vec<i64>], p: i64) -> i64 {
    let n = m.len();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut total = 0;
    loop {
        let inversions = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| perm[i] > perm[j]).count();
        let mut term = if inversions % 2 == 0 { 1 } else { -1 };
        for (i, &j) in perm.iter().enumerate() {
            term = term * m[i][j] % p;
        }
        total = (total + term).rem_euclid(p);
        // next permutation
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| perm[i] < perm[i + 1]) else {
            return total;
        };
        let j = (i + 1..n).rev().find(|&j| perm[j] > perm[i]).unwrap();
        perm.swap(i, j);
        perm[i + 1..].reverse();
    }
}

static M2F5: LazyLock<Algebra<FiniteField>> = LazyLock::new(|| Algebra::matrix_algebra(gf(5), 2).unwrap());
static M3F7: LazyLock<Algebra<FiniteField>> = LazyLock::new(|| Algebra::matrix_algebra(gf(7), 3).unwrap());

fn elem(f: &FiniteField, coords: &[i64]) -> Vec<FqElem> {
    coords.iter().map(|&c| f.from_int(c)).collect()
}

fn det_matches(alg: &Algebra<FiniteField>, n: usize, coords: &[i64]) {
    let f = alg.field();
    let a = elem(f, coords);
    let m: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| int(f, &a[i * n + j])).collect()).collect();
    let expected = leibniz(&m, f.characteristic() as i64);
    assert_eq!(int(f, &alg.reduced_norm(&a).unwrap()), expected, "{m:?}");
}

fn char_identities(alg: &Algebra<FiniteField>, coords: &[i64]) {
    let f = alg.field();
    let a = elem(f, coords);
    let chi = alg.reduced_char_poly(&a).unwrap();
    assert!(alg.is_zero_elem(&alg.eval_poly(&chi, &a)), "χ_a(a) ≠ 0 in {}", alg.name());
    assert_eq!(alg.norm_of_t_minus(&a).unwrap(), chi, "χ_a(T) ≠ N(T - a) in {}", alg.name());
    let sigma = alg.char_data().unwrap().sigma;
    let adj = alg.adjunct(&a).unwrap();
    let n = alg.reduced_norm(&a).unwrap();
    let n = if sigma < 0 { f.neg(&n) } else { n };
    assert_eq!(alg.mul(&a, &adj), alg.scalar(&n));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn reduced_norm_is_determinant_2(c in prop::collection::vec(0i64..5, 4)) {
        det_matches(&M2F5, 2, &c);
    }

    #[test]
    fn reduced_norm_is_determinant_3(c in prop::collection::vec(0i64..7, 9)) {
        det_matches(&M3F7, 3, &c);
    }

    #[test]
    fn matrix_char_identities(c in prop::collection::vec(0i64..7, 9)) {
        char_identities(&M3F7, &c);
    }

    #[test]
    fn kummer_char_identities(a in 1i64..7, c in prop::collection::vec(0i64..7, 3)) {
        char_identities(&Algebra::kummer(gf(7), 3, &gf(7).from_int(a)).unwrap(), &c);
    }

    #[test]
    fn norm_is_multiplicative(a in 1i64..7, b in 1i64..7, x in prop::collection::vec(0i64..7, 9), y in prop::collection::vec(0i64..7, 9)) {
        let f = gf(7);
        let d = SymbolAlgebra::build(&f, 3, &f.from_int(a), &f.from_int(b)).unwrap();
        let alg = d.algebra();
        let (x, y) = (elem(&f, &x), elem(&f, &y));
        let lhs = alg.reduced_norm(&alg.mul(&x, &y)).unwrap();
        let rhs = f.mul(&alg.reduced_norm(&x).unwrap(), &alg.reduced_norm(&y).unwrap());
        prop_assert_eq!(lhs, rhs);
        char_identities(alg, &x.iter().map(|e| int(&f, e)).collect::<Vec<_>>());
    }

    #[test]
    fn quaternion_norm_shape(q in prop::sample::select(vec![5u64, 7]), a in 1i64..7, b in 1i64..7, v in prop::collection::vec(0i64..7, 4)) {
        let f = gf(q);
        let (a, b) = (f.from_int(a % q as i64), f.from_int(b % q as i64));
        prop_assume!(a != f.zero() && b != f.zero());
        let d = SymbolAlgebra::build(&f, 2, &a, &b).unwrap();
        let v = elem(&f, &v);
        let sq = |x: &FqElem| f.mul(x, x);
        // basis 1, x, y, xy
        let expected = f.add(
            &f.sub(&f.sub(&sq(&v[0]), &f.mul(&a, &sq(&v[1]))), &f.mul(&b, &sq(&v[2]))),
            &f.mul(&f.mul(&a, &b), &sq(&v[3])),
        );
        prop_assert_eq!(d.norm_form().unwrap().evaluate(&v).unwrap(), expected);
    }

    #[test]
    fn symbol_identity_witnesses(a in 1i64..13, b in 1i64..13) {
        let f = gf(13);
        let (a, b) = (f.from_int(a), f.from_int(b));
        prop_assume!(f.is_nonzero(&f.add(&a, &b)));
        let d = SymbolAlgebra::build(&f, 3, &a, &b).unwrap();
        prop_assert!(d.identity_witness().unwrap().holds());
        prop_assert!(d.second_identity_witness().unwrap().holds());
    }
}

#[test]
fn albert_identities() {
    let f = gf(7);
    let d = SymbolAlgebra::build(&f, 3, &f.from_int(3), &f.from_int(5)).unwrap();
    let j = CubicNormStructure::build_first_tits(&d, &f.from_int(2)).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..60 {
        let x = j.random_elem(&mut rng);
        let n = j.norm(&x);
        let s = j.sharp(&x);
        assert_eq!(j.sharp(&s), j.scale(&n, &x));
        assert_eq!(j.norm(&s), f.mul(&n, &n));
        assert!(j.verify_char_identity(&x).unwrap());
        assert_eq!(j.norm_of_t_minus(&x), j.char_poly_element(&x));
        assert_eq!(j.norm_poly().eval(&f, &x), n);
    }
}

#[test]
fn associativity_and_division() {
    let f = gf(7);
    let d = SymbolAlgebra::build(&f, 3, &f.from_int(3), &f.from_int(1)).unwrap();
    assert!(d.algebra().check_associative().ok);
    assert!(M3F7.check_power_associative(20, 4, 1).ok);
}
