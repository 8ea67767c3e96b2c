use lattperm::dimer::{correlation_table, Counter};
use lattperm::perm::bijection::bijection_check_dimers;
use lattperm::perm::{monotonicity_check, Engine, PermSystem, Target};
use lattperm::scalar::{ratio, rint};
use lattperm::{Rational, Torus};
use num_traits::Zero;
use proptest::prelude::*;

#[test]
fn loop_dimer_bijection_on_small_tori() {
    for (d, l) in [(1, 4), (1, 6), (2, 4)] {
        let t = Torus::even(d, l).unwrap();
        let rep = bijection_check_dimers(&t, 1_000_000).unwrap();
        assert!(rep.pass, "({d},{l}): {:?}", rep.witness);
        assert_eq!(rep.loop_pairs as u64, rep.loop_packed);
    }
}

#[test]
fn two_colour_dense_limit_is_monomer_correlation() {
    let t = Torus::even(2, 4).unwrap();
    let sys = PermSystem::new(t.clone()).unwrap();
    let g = sys.two_point_table(2, &Rational::zero()).unwrap();
    let xi = correlation_table(&t, Counter::Backtracking).unwrap();
    assert_eq!(g, xi);
}

#[test]
fn monotone_profile_at_zero_density() {
    for (d, l) in [(1, 6), (2, 4)] {
        let sys = PermSystem::new(Torus::even(d, l).unwrap()).unwrap();
        for n in 1..=3 {
            let rep = monotonicity_check(&sys, n).unwrap();
            assert!(rep.pass, "({d},{l}) N={n}: {:?}", rep.witness);
        }
    }
}

#[test]
fn target_law_sums_to_one() {
    let sys = PermSystem::new(Torus::even(2, 4).unwrap()).unwrap();
    for rho in [rint(0), ratio(1, 3), rint(2)] {
        let law = sys.target_law(2, &rho).unwrap();
        let total: Rational = law.iter().sum();
        assert_eq!(total, rint(1));
    }
}

#[test]
fn rejects_bad_parameters() {
    let sys = PermSystem::new(Torus::even(1, 4).unwrap()).unwrap();
    assert!(sys.z(Target::Ell, 0, &rint(1)).is_err());
    assert!(sys.z(Target::Ell, 1, &rint(-1)).is_err());
    assert!(PermSystem::new(Torus::new(1, 5).unwrap()).is_err());
    assert!(PermSystem::new(Torus::even(3, 4).unwrap()).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]
    #[test]
    fn engines_agree(n in 1u32..=4, p in 0i64..=6, q in 1i64..=4, x in 0usize..16) {
        let t = Torus::even(2, 4).unwrap();
        let rho = ratio(p, q);
        let en = PermSystem::with_engine(t.clone(), Engine::Enumerate);
        let tm = PermSystem::with_engine(t, Engine::Transfer);
        prop_assert_eq!(en.z(Target::Walk(0, x), n, &rho).unwrap(), tm.z(Target::Walk(0, x), n, &rho).unwrap());
        let g = en.two_point(n, &rho, 0, x).unwrap();
        prop_assert!(g >= Rational::zero());
    }
}
