use lattperm::spectral::{
    dft, i_l, idft, key_cosine_check, plane_wave_identities, spectra_from_system, upsilon_l, DualTorus,
};
use lattperm::perm::PermSystem;
use lattperm::scalar::rint;
use lattperm::Torus;
use proptest::prelude::*;

fn dual(d: usize, l: usize) -> DualTorus {
    DualTorus::new(Torus::even(d, l).unwrap())
}

proptest! {
    #[test]
    fn round_trip_parseval_linearity(
        f in proptest::collection::vec(-1.0f64..1.0, 36),
        g in proptest::collection::vec(-1.0f64..1.0, 36),
        a in -2.0f64..2.0,
    ) {
        let du = dual(2, 6);
        let fh = dft(&du, &f);
        let back = idft(&du, &fh);
        for (x, b) in f.iter().zip(&back) {
            prop_assert!((x - b.re).abs() < 1e-12 && b.im.abs() < 1e-12);
        }
        let e_x: f64 = f.iter().map(|v| v * v).sum();
        let e_k: f64 = fh.iter().map(|c| c.norm_sqr()).sum::<f64>() / 36.0;
        prop_assert!((e_x - e_k).abs() < 1e-10);
        let mix: Vec<f64> = f.iter().zip(&g).map(|(x, y)| a * x + y).collect();
        let gh = dft(&du, &g);
        for ((m, p), q) in dft(&du, &mix).iter().zip(&fh).zip(&gh) {
            prop_assert!((m - (p * a + q)).norm() < 1e-10);
        }
    }
}

#[test]
fn single_precision_agrees_with_double() {
    let du = dual(3, 4);
    let f64s: Vec<f64> = (0..64).map(|i| ((i * 37 % 11) as f64 - 5.0) / 7.0).collect();
    let f32s: Vec<f32> = f64s.iter().map(|&v| v as f32).collect();
    for (a, b) in dft(&du, &f64s).iter().zip(dft(&du, &f32s)) {
        assert!((a.re - b.re as f64).abs() < 1e-4 && (a.im - b.im as f64).abs() < 1e-4);
    }
}

#[test]
fn upsilon_decays_like_inverse_distance() {
    let l = 32;
    let t = Torus::even(3, l).unwrap();
    let u: Vec<f64> = upsilon_l(3, l).unwrap();
    let at = |n: i64| u[t.site_index(&[n, 0, 0]).unwrap()];
    for x in [2, 4] {
        let q = at(x).abs() / at(2 * x).abs();
        assert!((1.0..=4.0).contains(&q), "x1 = {x}: ratio {q}");
    }
    assert!((at(1) - 1.0).abs() < 1e-12);
    for s in 0..t.n() {
        let c = t.coords(s);
        if c[1] != 0 || c[2] != 0 {
            assert!(u[s].abs() < 1e-12);
        }
    }
}

#[test]
fn i_l_increases_and_rejects_odd_sides() {
    let a: f64 = i_l(3, 8).unwrap();
    let b: f64 = i_l(3, 16).unwrap();
    assert!(a > 0.0 && b > a);
    assert!(i_l::<f64>(3, 7).is_err());
}

#[test]
fn key_inequality_on_plane_waves_matches_fourier_bound() {
    let sys = PermSystem::new(Torus::even(2, 4).unwrap()).unwrap();
    for n in 1..=2 {
        for rho in [rint(0), rint(1)] {
            let (du, s) = spectra_from_system(&sys, n, &rho).unwrap();
            let r = key_cosine_check(&du, &s, 1e-9);
            assert!(r.pass, "{:?}", r.witnesses);
            let r = plane_wave_identities(&du, &s, 1e-9);
            assert!(r.pass, "{:?}", r.witnesses);
        }
    }
}
