//! Fourier analysis of the two-point function on the dual torus.

pub mod checks;
pub mod dual;

pub use checks::{
    high_frequency_check, infrared_check, infrared_sides, key_cosine_check, mode_difference_identity,
    parity_symmetry_check, plane_wave_identities, psi_symmetrisation_check, spectra_from_system, InfraredSides,
    TwoPointSpectra,
};
pub use dual::{dft, epsilon, epsilon_mode, i_l, idft, upsilon_complex, upsilon_l, Block, DualTorus};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::torus::Torus;
    use num_complex::Complex;

    fn dual(d: usize, l: usize) -> DualTorus {
        DualTorus::new(Torus::new(d, l).unwrap())
    }

    #[test]
    fn delta_and_constant() {
        let du = dual(2, 4);
        let mut f = vec![0.0f64; 16];
        f[0] = 1.0;
        assert!(dft(&du, &f).iter().all(|c| (c - Complex::new(1.0, 0.0)).norm() < 1e-14));
        let one = vec![1.0f64; 16];
        let h = dft(&du, &one);
        assert!((h[0].re - 16.0).abs() < 1e-12);
        assert!(h[1..].iter().all(|c| c.norm() < 1e-12));
    }

    #[test]
    fn epsilon_values() {
        let pi = std::f64::consts::PI;
        assert_eq!(epsilon(&[0.0f64, 0.0]), 0.0);
        assert!((epsilon(&[pi, pi, pi]) - 12.0).abs() < 1e-12);
        assert!((epsilon(&[pi, 0.0]) - 4.0).abs() < 1e-12);
        let du = dual(2, 6);
        let p = du.p().unwrap();
        assert!((epsilon_mode::<f64>(&du, p) - 8.0).abs() < 1e-12);
    }

    #[test]
    fn psi_bijection() {
        for l in [4, 6, 8] {
            let r = psi_symmetrisation_check::<f64>(&dual(2, l), None, 1e-10).unwrap();
            assert!(r.pass, "{:?}", r.witnesses);
        }
    }

    #[test]
    fn upsilon_on_axis() {
        let d = 2;
        let l = 8;
        let t = Torus::new(d, l).unwrap();
        let u = upsilon_complex::<f64>(d, l).unwrap();
        for x in 0..t.n() {
            if u[x].norm() > 1e-9 {
                assert!(t.on_first_axis(x));
                assert!(x == t.unit(1) || !t.is_odd(x), "support at {:?}", t.coords(x));
            }
        }
        assert!((u[t.unit(1)].re - 1.0).abs() < 1e-12);
    }
}
