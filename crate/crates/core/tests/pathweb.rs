use lattperm::pathweb::checks::{key_inequality_sides, seeded_integer_vector, DEFAULT_BUDGET};
use lattperm::pathweb::{
    chessboard_check, h_from_v, key_inequality_check, mu_invariance_check, polynomial_expansion_check,
    verify_lemma_components, Aggregate,
};
use lattperm::perm::PermSystem;
use lattperm::scalar::{ratio, rint};
use lattperm::{ExtTorus, Rational, Torus};
use proptest::prelude::*;

fn ext(l: usize) -> ExtTorus {
    ExtTorus::new(Torus::even(1, l).unwrap())
}

#[test]
fn component_identities_at_other_lambda() {
    for lam in [ratio(1, 3), ratio(5, 2)] {
        let r = verify_lemma_components(&ext(4), 2, &lam).unwrap();
        assert!(r.pass, "{:?}", r.witnesses);
        assert!(r.checked > 0);
    }
}

#[test]
fn measure_is_reflection_invariant() {
    for n in 1..=2 {
        let r = mu_invariance_check(&ext(4), n, &rint(1), DEFAULT_BUDGET).unwrap();
        assert!(r.pass, "{:?}", r.witnesses);
    }
}

#[test]
fn chessboard_is_tight_for_constant_fields() {
    let e = ext(4);
    let agg = Aggregate::build(&e, 1, &rint(1), None, DEFAULT_BUDGET).unwrap();
    let n = e.base().n();
    let h: Vec<f64> = (0..e.vertex_count()).map(|v| if v < n { 0.3 } else { -0.7 }).collect();
    let r = chessboard_check(&agg, &e, &h, 1e-12).unwrap();
    assert!(r.pass, "{:?}", r.witnesses);
    assert!(chessboard_check(&agg, &e, &vec![1.5; e.vertex_count()], 1e-12).is_err());
}

#[test]
fn key_inequality_detects_a_point_mass() {
    let t = Torus::even(1, 6).unwrap();
    let mut g = vec![rint(0); t.n()];
    g[0] = rint(1);
    let broken = (0..50).any(|i| {
        let v = seeded_integer_vector(t.n(), i);
        let (l, r) = key_inequality_sides(&t, &g, &v);
        l > r
    });
    assert!(broken);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]
    #[test]
    fn key_inequality_on_a_ring(v in proptest::collection::vec(-6i64..=6, 6), n in 1u32..=3, p in 0i64..=4) {
        let sys = PermSystem::new(Torus::even(1, 6).unwrap()).unwrap();
        let v: Vec<Rational> = v.into_iter().map(rint).collect();
        let r = key_inequality_check(&sys, n, &ratio(p, 2), &[v]).unwrap();
        prop_assert!(r.pass, "{:?}", r.witnesses);
    }

    #[test]
    fn expansion_on_random_fields(v in proptest::collection::vec(-4i64..=4, 4), n in 1u32..=2) {
        let e = ext(4);
        let v: Vec<Rational> = v.into_iter().map(|k| ratio(k, 3)).collect();
        let h = h_from_v(&e, &v);
        let r = polynomial_expansion_check(&e, n, &ratio(1, 2), &h).unwrap();
        prop_assert!(r.pass, "{:?}", r.witnesses);
    }
}
