use num_complex::Complex64;
use proptest::prelude::*;

use hodgemod::deriv::{apply, bracket_der, epsilon, inner, is_der0, Deriv};
use hodgemod::exact::Matrix;
use hodgemod::freelie::FreeLie;
use hodgemod::modforms::{eisenstein_g, Series};
use hodgemod::scalar::q;
use hodgemod::sl2::{act_on_poly, conjugate, raising, Sl2Z};
use hodgemod::transport::{EisensteinConnection, GroupLikeElem, UPath};
use hodgemod::{Derivation, LieElement, PolyAB, Rational};

fn alg() -> FreeLie {
    FreeLie::new(12).unwrap()
}

/// Random homogeneous Lie element of degree 1..=4 with small integer coefficients.
fn lie_elem() -> impl Strategy<Value = LieElement> {
    (1usize..=4).prop_flat_map(|d| {
        let words = alg().lyndon_words(d).unwrap();
        let len = words.len();
        proptest::collection::vec(-3i64..=3, len).prop_map(move |cs| {
            LieElement::from_terms(words.iter().copied().zip(cs.into_iter().map(q)).filter(|(_, c)| *c != q(0)))
        })
    })
}

fn derivation() -> impl Strategy<Value = Derivation> {
    (1usize..=3).prop_flat_map(|g| {
        let words = alg().lyndon_words(g + 1).unwrap();
        let len = words.len();
        (proptest::collection::vec(-2i64..=2, len), proptest::collection::vec(-2i64..=2, len)).prop_map(move |(x, y)| {
            let mk = |cs: Vec<i64>| LieElement::from_terms(words.iter().copied().zip(cs.into_iter().map(q)).filter(|(_, c)| *c != q(0)));
            Deriv::new(g, mk(x), mk(y)).unwrap()
        })
    })
}

fn sl2() -> impl Strategy<Value = Sl2Z> {
    proptest::collection::vec(prop_oneof![Just(Sl2Z::S), Just(Sl2Z::T), Just(Sl2Z::T.inverse()), Just(Sl2Z::U)], 0..4)
        .prop_map(|gs| gs.iter().fold(Sl2Z::IDENTITY, |acc, g| acc.mul(g)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn bracket_is_antisymmetric(x in lie_elem(), y in lie_elem()) {
        let a = alg();
        prop_assert_eq!(a.bracket(&x, &y).unwrap(), -a.bracket(&y, &x).unwrap());
    }

    #[test]
    fn jacobi_identity(x in lie_elem(), y in lie_elem(), z in lie_elem()) {
        let a = alg();
        let br = |u: &LieElement, v: &LieElement| a.bracket(u, v).unwrap();
        let sum = br(&x, &br(&y, &z)) + br(&y, &br(&z, &x)) + br(&z, &br(&x, &y));
        prop_assert!(sum.is_zero());
    }

    #[test]
    fn derivations_satisfy_leibniz(d in derivation(), x in lie_elem(), y in lie_elem()) {
        let a = alg();
        let lhs = apply(&a, &d, &a.bracket(&x, &y).unwrap()).unwrap();
        let rhs = a.bracket(&apply(&a, &d, &x).unwrap(), &y).unwrap() + a.bracket(&x, &apply(&a, &d, &y).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn derivation_bracket_is_the_commutator(d1 in derivation(), d2 in derivation(), x in lie_elem()) {
        let a = FreeLie::new(14).unwrap();
        let lhs = apply(&a, &bracket_der(&a, &d1, &d2).unwrap(), &x).unwrap();
        let rhs = apply(&a, &d1, &apply(&a, &d2, &x).unwrap()).unwrap() - apply(&a, &d2, &apply(&a, &d1, &x).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn derivation_jacobi(d1 in derivation(), d2 in derivation(), d3 in derivation()) {
        let a = FreeLie::new(14).unwrap();
        let br = |u: &Derivation, v: &Derivation| bracket_der(&a, u, v).unwrap();
        let sum = br(&d1, &br(&d2, &d3)).add(&br(&d2, &br(&d3, &d1))).unwrap().add(&br(&d3, &br(&d1, &d2))).unwrap();
        prop_assert!(sum.is_zero());
    }

    #[test]
    fn conjugation_respects_brackets(g in sl2(), d1 in derivation(), d2 in derivation()) {
        let a = FreeLie::new(14).unwrap();
        let lhs = conjugate(&a, &g, &bracket_der(&a, &d1, &d2).unwrap()).unwrap();
        let rhs = bracket_der(&a, &conjugate(&a, &g, &d1).unwrap(), &conjugate(&a, &g, &d2).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn poly_action_is_linear(g in sl2(), c1 in proptest::collection::vec(-4i64..=4, 7), c2 in proptest::collection::vec(-4i64..=4, 7)) {
        let p1 = PolyAB::from_coeffs(c1.into_iter().map(q).collect());
        let p2 = PolyAB::from_coeffs(c2.into_iter().map(q).collect());
        let mut sum = p1.clone();
        sum.add_scaled(&p2, &q(3));
        let mut expected = act_on_poly(&g, &p1);
        expected.add_scaled(&act_on_poly(&g, &p2), &q(3));
        prop_assert_eq!(act_on_poly(&g, &sum), expected);
    }

    #[test]
    fn kernel_vectors_are_annihilated(rows in proptest::collection::vec(proptest::collection::vec(-3i64..=3, 6), 1..6)) {
        let m = Matrix::from_rows(rows.into_iter().map(|r| r.into_iter().map(q).collect()).collect());
        let k = m.kernel_basis();
        prop_assert_eq!(m.rank() + k.len(), m.cols());
        for v in &k {
            prop_assert!(m.mul_vector(v).is_zero());
        }
    }

    #[test]
    fn series_product_commutes(a in proptest::collection::vec(-5i64..=5, 8), b in proptest::collection::vec(-5i64..=5, 8)) {
        let s = Series::<Rational>::new(0, a.into_iter().map(q).collect()).unwrap();
        let t = Series::<Rational>::new(0, b.into_iter().map(q).collect()).unwrap();
        prop_assert_eq!(s.mul(&t), t.mul(&s));
    }

    #[test]
    fn group_action_is_multiplicative(g in sl2(), re in -0.5f64..0.5, im in 0.6f64..1.5) {
        let conn = EisensteinConnection::<f64>::new(&[4, 6], 32).unwrap();
        let z0 = Complex64::new(re, im);
        let path1 = UPath::polygon(&[z0, z0 + Complex64::new(0.3, 0.2)]).unwrap();
        let path2 = UPath::polygon(&[z0, z0 + Complex64::new(-0.2, 0.4)]).unwrap();
        let x = conn.transport_inverse(&path1, 2, 16).unwrap();
        let y = conn.transport_inverse(&path2, 2, 16).unwrap();
        let lhs = x.mul(&y).unwrap().act(&g);
        let rhs = x.act(&g).mul(&y.act(&g)).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs).unwrap() < 1e-9);
        let id = GroupLikeElem::<f64>::identity(2, &[4, 6]).unwrap();
        prop_assert!(x.mul(&x.inverse()).unwrap().max_abs_diff(&id).unwrap() < 1e-12);
    }
}

#[test]
fn eps_generate_der0_and_are_highest_weight_with_larger_cap() {
    let a = FreeLie::new(18).unwrap();
    let e = raising::<Rational>();
    for n in 1..=8 {
        let eps = epsilon::<Rational>(&a, n).unwrap().derivation;
        assert!(is_der0(&a, &eps).unwrap(), "n = {n}");
        assert!(bracket_der(&a, &e, &eps).unwrap().is_zero(), "n = {n}");
    }
}

#[test]
fn der0_is_closed_under_brackets() {
    let a = FreeLie::new(14).unwrap();
    let eps: Vec<Derivation> = (1..=3).map(|n| epsilon::<Rational>(&a, n).unwrap().derivation).collect();
    for x in &eps {
        for y in &eps {
            assert!(is_der0(&a, &bracket_der(&a, x, y).unwrap()).unwrap());
        }
    }
    // inner derivations by multiples of [a, b] are the only inner ones in Der0 of degree 2
    let ab = a.bracket(&LieElement::a(), &LieElement::b()).unwrap();
    assert!(is_der0(&a, &inner(&a, &ab).unwrap()).unwrap());
}

#[test]
fn eisenstein_weights_are_validated() {
    assert!(eisenstein_g(3, 8).is_err());
    assert!(eisenstein_g(2, 8).is_err());
}
