use lattperm::dimer::{correlation_table, count_covers, enumerate_covers, Counter};
use lattperm::scalar::ratio;
use lattperm::{Count, Torus};
use proptest::prelude::*;
use std::f64::consts::PI;

/// Closed-form Pfaffian count for the `L x L` periodic square lattice.
fn kasteleyn(l: usize) -> f64 {
    let p = |a: f64, b: f64| {
        let mut acc = 0.0f64;
        for j in 0..l {
            for k in 0..l {
                let s1 = ((2.0 * j as f64 + a) * PI / l as f64).sin();
                let s2 = ((2.0 * k as f64 + b) * PI / l as f64).sin();
                acc += (4.0 * s1 * s1 + 4.0 * s2 * s2).ln() / 4.0;
            }
        }
        acc.exp()
    };
    0.5 * (p(1.0, 1.0) + p(1.0, 0.0) + p(0.0, 1.0))
}

#[test]
fn square_torus_matches_pfaffian_formula() {
    for l in [4, 6, 8] {
        let t = Torus::even(2, l).unwrap();
        let c = count_covers(&t, &[], Counter::Transfer).unwrap();
        let want = kasteleyn(l).round() as u64;
        assert_eq!(c, Count::from(want), "L = {l}");
    }
}

#[test]
fn one_dimensional_ring() {
    for l in [4, 6, 8, 10] {
        let t = Torus::even(1, l).unwrap();
        for c in [Counter::Backtracking, Counter::Transfer] {
            assert_eq!(count_covers(&t, &[], c).unwrap(), Count::from(2u32));
            assert_eq!(count_covers(&t, &[0, 1], c).unwrap(), Count::from(1u32));
            assert_eq!(count_covers(&t, &[0, 2], c).unwrap(), Count::from(0u32));
        }
    }
}

#[test]
fn nearest_neighbour_correlation() {
    for (d, l) in [(1, 4), (2, 4), (2, 6)] {
        let t = Torus::even(d, l).unwrap();
        let xi = correlation_table(&t, Counter::Transfer);
        let xi = xi.unwrap();
        assert_eq!(xi[t.unit(1)], ratio(1, 2 * d as i64));
        for x in 0..t.n() {
            assert!(xi[x] <= ratio(1, 2 * d as i64));
            if !t.is_odd(x) {
                assert_eq!(xi[x], ratio(0, 1));
            }
        }
    }
}

#[test]
fn enumerated_covers_are_valid_and_distinct() {
    let t = Torus::even(2, 4).unwrap();
    let covers = enumerate_covers(&t, &[], 1000).unwrap();
    assert_eq!(covers.len(), 272);
    for c in &covers {
        assert!(c.is_valid(&t, &[]));
    }
    let mut seen: Vec<_> = covers.iter().map(|c| format!("{c:?}")).collect();
    seen.sort();
    seen.dedup();
    assert_eq!(seen.len(), 272);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]
    #[test]
    fn counters_agree_on_random_holes(mask in 0u32..(1 << 16), half in 2usize..=3) {
        let t = Torus::even(2, 2 * half).unwrap();
        let removed: Vec<usize> = (0..16).filter(|i| mask >> i & 1 == 1).map(|i| (i * 7) % t.n()).collect();
        let a = count_covers(&t, &removed, Counter::Backtracking).unwrap();
        let b = count_covers(&t, &removed, Counter::Transfer).unwrap();
        prop_assert_eq!(a, b);
    }
}
