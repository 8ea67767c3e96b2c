use lattperm::dimer::{correlation_table, count_covers, Counter};
use lattperm::scalar::to_real;
use lattperm::worm::{closed_sector_census, worm_run, worm_run_with, WormConfig};
use lattperm::Torus;

#[test]
fn closed_covers_are_uniform() {
    let t = Torus::even(2, 4).unwrap();
    let per = 1000u64;
    let seen = closed_sector_census(&t, 272 * per, 11).unwrap();
    assert_eq!(seen.len(), 272);
    let chi2: f64 = seen.values().map(|&c| (c as f64 - per as f64).powi(2) / per as f64).sum();
    // 271 degrees of freedom; generous room for autocorrelation
    assert!(chi2 < 2.0 * 271.0, "chi2 = {chi2}");
}

#[test]
fn matches_exact_correlation_on_eight_torus() {
    let t = Torus::even(2, 8).unwrap();
    let exact = correlation_table(&t, Counter::Transfer).unwrap();
    let est = worm_run(&t, 100_000, 500, 5).unwrap();
    for x in (0..t.n()).filter(|&x| t.is_odd(x)) {
        let e: f64 = to_real(&exact[x]);
        let z = (est.xi[x] - e).abs() / est.stderr[x].max(1e-15);
        assert!(z < 4.5, "x = {:?}: {} +- {} vs {e}", t.coords(x), est.xi[x], est.stderr[x]);
    }
}

#[test]
fn runs_are_reproducible() {
    let t = Torus::even(2, 6).unwrap();
    let cfg = WormConfig { chains: 2, ..WormConfig::new(200, 10, 99) };
    let a = worm_run_with(&t, &cfg).unwrap();
    let b = worm_run_with(&t, &cfg).unwrap();
    assert_eq!(a.hist, b.hist);
    assert_eq!(a.closures, b.closures);
    let c = worm_run_with(&t, &WormConfig { seed: 100, ..cfg }).unwrap();
    assert_ne!(a.hist, c.hist);
}

#[test]
fn three_dimensional_anchor() {
    let t = Torus::even(3, 4).unwrap();
    let est = worm_run(&t, 2000, 50, 3).unwrap();
    assert!((est.xi[t.unit(1)] - 1.0 / 6.0).abs() < 1e-15);
    assert!(count_covers(&t, &[], Counter::Transfer).unwrap() > 0u32.into());
}

#[test]
fn rejects_unsupported_geometry() {
    assert!(worm_run(&Torus::even(1, 8).unwrap(), 100, 1, 0).is_err());
    assert!(worm_run(&Torus::new(2, 5).unwrap(), 100, 1, 0).is_err());
}
