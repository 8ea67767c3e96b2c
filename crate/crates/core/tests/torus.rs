use lattperm::{ExtTorus, Reflection, Torus};
use proptest::prelude::*;

#[test]
fn rejects_bad_sides() {
    assert!(Torus::even(2, 2).is_err());
    assert!(Torus::even(2, 5).is_err());
    assert!(Torus::new(2, 5).is_ok());
    assert!(Torus::new(0, 4).is_err());
}

#[test]
fn degree_and_edge_count() {
    for (d, l) in [(1, 4), (2, 6), (3, 4)] {
        let t = Torus::even(d, l).unwrap();
        assert_eq!(t.edges().len(), d * t.n());
        for x in 0..t.n() {
            assert_eq!(t.neighbors(x).len(), 2 * d);
            for &y in t.neighbors(x) {
                assert!(t.are_adjacent(y, x));
                assert_ne!(t.parity(x), t.parity(y));
            }
        }
    }
}

#[test]
fn extended_torus_counts() {
    let t = Torus::even(2, 4).unwrap();
    let e = ExtTorus::new(t.clone());
    assert_eq!(e.vertex_count(), 2 * t.n());
    assert_eq!(e.edge_count(), 2 * t.n() + t.n());
    for x in 0..t.n() {
        let v = e.virtual_of(x);
        assert!(e.is_virtual(v));
        assert_eq!(e.original_of(v), x);
        assert_eq!(e.degree(x), 5);
        assert_eq!(e.degree(v), 1);
    }
}

#[test]
fn every_reflection_preserves_adjacency() {
    let t = Torus::even(2, 6).unwrap();
    for r in Reflection::all(&t) {
        for (a, b) in t.edges() {
            let (ra, rb) = (r.reflect(&t, a), r.reflect(&t, b));
            assert!(t.are_adjacent(ra, rb));
        }
        let plus = (0..t.n()).filter(|&s| r.in_plus(&t, s)).count();
        assert_eq!(plus, t.n() / 2);
    }
}

proptest! {
    #[test]
    fn group_laws(d in 1usize..=3, half in 2usize..=4, a in 0usize..4096, b in 0usize..4096) {
        let t = Torus::even(d, 2 * half).unwrap();
        let (a, b) = (a % t.n(), b % t.n());
        prop_assert_eq!(t.sub(t.add(a, b), b), a);
        prop_assert_eq!(t.add(a, t.neg(a)), t.origin());
        prop_assert_eq!(t.add(a, b), t.add(b, a));
        prop_assert_eq!(t.site_index(&t.coords(a)).unwrap(), a);
        prop_assert_eq!(t.from_digits(&t.digits(a)), a);
        prop_assert_eq!(t.orbit_key(a), t.orbit_key(t.neg(a)));
    }

    #[test]
    fn reflections_are_involutions(half in 2usize..=4, s in 0usize..64) {
        let t = Torus::even(2, 2 * half).unwrap();
        let s = s % t.n();
        for r in Reflection::all(&t) {
            prop_assert_eq!(r.reflect(&t, r.reflect(&t, s)), s);
        }
    }
}
