use lattperm::rwalk::{
    n_window, partial_sum_identity, r_montecarlo, r_partial_sum, r_quadrature, return_tail, visit_probabilities,
};

// Watson's constant u(3) = 1 + r_3.
const WATSON: f64 = 1.516_386_059_151_978;

#[test]
fn quadrature_reproduces_watson() {
    let q = r_quadrature::<f64>(3, 1024).unwrap();
    assert!((q.value - (WATSON - 1.0)).abs() < 1e-6, "{}", q.value);
}

#[test]
fn constants_decrease_with_dimension() {
    let r: Vec<f64> = (3..=6).map(|d| r_quadrature::<f64>(d, 48).unwrap().value).collect();
    for w in r.windows(2) {
        assert!(w[1] < w[0] && w[1] > 0.0, "{r:?}");
    }
}

#[test]
fn montecarlo_is_seeded_and_ordered() {
    let a = r_montecarlo(3, 20_000, 1024, 7).unwrap();
    let b = r_montecarlo(3, 20_000, 1024, 7).unwrap();
    assert_eq!(a.value, b.value);
    let c = r_montecarlo(5, 20_000, 1024, 7).unwrap();
    assert!(c.value + 3.0 * c.err < a.value - 3.0 * a.err);
    let q = r_quadrature::<f64>(5, 48).unwrap();
    assert!((c.value - q.value).abs() < 4.0 * c.err + 1e-3);
}

#[test]
fn exact_step_distribution() {
    assert!((visit_probabilities(&[0], 3)[2] - 0.5).abs() < 1e-15);
    assert!((visit_probabilities(&[0, 0], 3)[2] - 0.25).abs() < 1e-15);
    assert!((visit_probabilities(&[1, 0, 0], 2)[1] - 1.0 / 6.0).abs() < 1e-15);
    assert!(return_tail(3, 1000) > 0.0);
}

#[test]
fn partial_sums_converge() {
    let p = r_partial_sum(3, 4000).unwrap();
    assert!((p.value - (WATSON - 1.0)).abs() < 2e-3, "{}", p.value);
}

#[test]
fn finite_sum_identity() {
    for m in [0, 1, 10] {
        let r = partial_sum_identity(3, m, 32, 1e-10).unwrap();
        assert!(r.pass, "m = {m}: {:?}", r.witnesses);
    }
}

#[test]
fn window_for_three_dimensions() {
    assert_eq!(n_window(WATSON - 1.0), 7);
}
