//! Fourier-side verification of the two-point function: high-frequency
//! bound, parity symmetries, mode-difference identity, `Psi`
//! symmetrisation and the finite-`L` infrared-ultraviolet inequality.

use super::dual::{dft, epsilon_mode, i_l, require_even, upsilon_l, DualTorus};
use crate::error::Result;
use crate::perm::PermSystem;
use crate::report::Report;
use crate::scalar::{to_real, Rational, Real};
use num_complex::Complex;
use std::collections::BTreeMap;

/// Imaginary residue tolerated when asserting that a transform is real.
pub const IMAG_TOL: f64 = 1e-12;

/// `G(o, .)`, its odd and even parts, and their transforms.
#[derive(Debug, Clone)]
pub struct TwoPointSpectra<T> {
    pub g: Vec<T>,
    pub go: Vec<T>,
    pub ge: Vec<T>,
    pub g_hat: Vec<Complex<T>>,
    pub go_hat: Vec<Complex<T>>,
    pub ge_hat: Vec<Complex<T>>,
}

impl<T: Real> TwoPointSpectra<T> {
    pub fn new(dual: &DualTorus, g: Vec<T>) -> Self {
        let t = dual.torus();
        let go: Vec<T> = (0..t.n()).map(|x| if t.is_odd(x) { g[x] } else { T::zero() }).collect();
        let ge: Vec<T> = (0..t.n()).map(|x| if t.is_odd(x) { T::zero() } else { g[x] }).collect();
        TwoPointSpectra {
            g_hat: dft(dual, &g),
            go_hat: dft(dual, &go),
            ge_hat: dft(dual, &ge),
            g,
            go,
            ge,
        }
    }

    pub fn from_exact(dual: &DualTorus, g: &[Rational]) -> Self {
        Self::new(dual, g.iter().map(to_real::<T>).collect())
    }
}

/// Spectra of the exact two-point table of `sys` at `(N, rho)`.
pub fn spectra_from_system(sys: &PermSystem, n: u32, rho: &Rational) -> Result<(DualTorus, TwoPointSpectra<f64>)> {
    let dual = DualTorus::new(sys.torus().clone());
    let g = sys.two_point_table(n, rho)?;
    let s = TwoPointSpectra::from_exact(&dual, &g);
    Ok((dual, s))
}

fn real<T: Real>(c: &Complex<T>) -> f64 {
    c.re.to_f64().unwrap()
}

fn imag<T: Real>(c: &Complex<T>) -> f64 {
    c.im.to_f64().unwrap()
}

/// `G^(k) <= 1/epsilon(k) + tol` at every `k != o`.
pub fn high_frequency_check<T: Real>(dual: &DualTorus, s: &TwoPointSpectra<T>, tol: f64) -> Report {
    let mut r = Report::new();
    let mut slack = f64::INFINITY;
    for m in 1..dual.len() {
        let eps: f64 = epsilon_mode(dual, m);
        let g = real(&s.g_hat[m]);
        let bound = 1.0 / eps;
        slack = slack.min(bound - g);
        r.check(g <= bound + tol, || format!("k = {:?}: G^ = {g:.15e} > 1/eps = {bound:.15e}", dual.mode(m)));
    }
    r.note(format!("min slack 1/eps - G^ = {slack:.6e}"));
    r
}

/// Parity symmetries: all three transforms real; `G^o` flips sign and
/// `G^e` is invariant under `k -> k + pi u` whenever both modes lie in the
/// dual torus.
pub fn parity_symmetry_check<T: Real>(dual: &DualTorus, s: &TwoPointSpectra<T>, tol: f64) -> Result<Report> {
    let t = dual.torus();
    require_even(t)?;
    let d = t.d();
    let half = (t.l() / 2) as i64;
    let mut r = Report::new();
    for m in 0..dual.len() {
        for (name, v) in [("G^", &s.g_hat[m]), ("G^o", &s.go_hat[m]), ("G^e", &s.ge_hat[m])] {
            let im = imag(v);
            r.check(im.abs() <= IMAG_TOL, || format!("{name} at {:?} has imaginary part {im:.3e}", dual.mode(m)));
        }
    }
    for signs in 0u32..(1 << d) {
        for m in 0..dual.len() {
            let mut n = dual.mode(m);
            for (i, v) in n.iter_mut().enumerate() {
                *v += if signs >> i & 1 == 1 { half } else { -half };
            }
            let Some(m2) = dual.index(&n) else { continue };
            let (a, b) = (real(&s.go_hat[m]), real(&s.go_hat[m2]));
            r.check((a + b).abs() <= tol, || format!("G^o({:?}) = {a:.12e}, G^o(k + pi u) = {b:.12e}", dual.mode(m)));
            let (a, b) = (real(&s.ge_hat[m]), real(&s.ge_hat[m2]));
            r.check((a - b).abs() <= tol, || format!("G^e({:?}) = {a:.12e}, G^e(k + pi u) = {b:.12e}", dual.mode(m)));
        }
    }
    Ok(r)
}

/// `(2/|T|) sum_{x odd} G(x) = G(e_1) - |T|^{-1} sum_{k not in {o,p}} e^{i k . e_1} G^(k)`.
pub fn mode_difference_identity<T: Real>(dual: &DualTorus, s: &TwoPointSpectra<T>, tol: f64) -> Result<Report> {
    let t = dual.torus();
    require_even(t)?;
    let n = t.n() as f64;
    let e1 = t.unit(1);
    let p = dual.p().unwrap();
    let lhs: f64 = 2.0 / n * (0..t.n()).filter(|&x| t.is_odd(x)).map(|x| s.g[x].to_f64().unwrap()).sum::<f64>();
    let mut sum = Complex::new(0.0, 0.0);
    for m in 0..dual.len() {
        if m == 0 || m == p {
            continue;
        }
        let w: Complex<f64> = dual.wave(m, e1);
        sum += w * Complex::new(real(&s.g_hat[m]), imag(&s.g_hat[m]));
    }
    let rhs = s.g[e1].to_f64().unwrap() - sum.re / n;
    let mut r = Report::new();
    r.check((lhs - rhs).abs() <= tol, || format!("lhs {lhs:.15e} != rhs {rhs:.15e}"));
    r.check((sum.im / n).abs() <= tol, || format!("mode sum has imaginary part {:.3e}", sum.im / n));
    r.note(format!("lhs = {lhs:.15e}, rhs = {rhs:.15e}"));
    Ok(r)
}

/// Exhaustive check of `Psi`: a bijection from `H \ {o}` onto
/// `T* \ (H u {p})` mapping each quarter block onto a single block, with
/// `cos(k . e_1)` flipping sign. With spectra, also `G^o(Psi k) = -G^o(k)`
/// and `G^e(Psi k) = G^e(k)`.
pub fn psi_symmetrisation_check<T: Real>(dual: &DualTorus, s: Option<&TwoPointSpectra<T>>, tol: f64) -> Result<Report> {
    let t = dual.torus();
    require_even(t)?;
    let p = dual.p().unwrap();
    let e1 = t.unit(1);
    let mut r = Report::new();
    let mut hit = vec![0u32; dual.len()];
    let mut block_map: BTreeMap<_, std::collections::BTreeSet<_>> = BTreeMap::new();
    for m in 1..dual.len() {
        if !dual.in_h(m) {
            continue;
        }
        let Some(img) = dual.psi(m) else {
            r.check(false, || format!("Psi undefined at {:?}", dual.mode(m)));
            continue;
        };
        hit[img] += 1;
        r.check(!dual.in_h(img) && img != p, || format!("Psi({:?}) = {:?} lies in H or is p", dual.mode(m), dual.mode(img)));
        let (c0, c1) = (dual.wave::<f64>(m, e1).re, dual.wave::<f64>(img, e1).re);
        r.check(c0 >= -1e-15 && (c0 + c1).abs() <= 1e-12, || format!("cos at {:?}: {c0} vs {c1}", dual.mode(m)));
        block_map.entry(dual.block(m)).or_default().insert(dual.block(img));
        if let Some(s) = s {
            let (a, b) = (real(&s.go_hat[m]), real(&s.go_hat[img]));
            r.check((a + b).abs() <= tol, || format!("G^o at {:?}: {a:.12e} vs {b:.12e}", dual.mode(m)));
            let (a, b) = (real(&s.ge_hat[m]), real(&s.ge_hat[img]));
            r.check((a - b).abs() <= tol, || format!("G^e at {:?}: {a:.12e} vs {b:.12e}", dual.mode(m)));
        }
    }
    for m in 0..dual.len() {
        let want = u32::from(!dual.in_h(m) && m != p);
        r.check(hit[m] == want, || format!("mode {:?} hit {} times, expected {want}", dual.mode(m), hit[m]));
    }
    for (b, imgs) in &block_map {
        r.check(imgs.len() == 1, || format!("block {b:?} is split across {} blocks", imgs.len()));
    }
    r.note(format!("{} blocks meet H", block_map.len()));
    Ok(r)
}

/// Both sides of the finite-`L` infrared-ultraviolet inequality.
#[derive(Debug, Clone, Copy)]
pub struct InfraredSides {
    pub lhs: f64,
    pub g_e1: f64,
    pub i_l: f64,
    pub even_mean: f64,
    pub upsilon_term: f64,
    pub rhs: f64,
}

pub fn infrared_sides<T: Real>(dual: &DualTorus, s: &TwoPointSpectra<T>) -> Result<InfraredSides> {
    let t = dual.torus();
    require_even(t)?;
    let half = t.n() as f64 / 2.0;
    let f = |v: T| v.to_f64().unwrap();
    let lhs = s.go.iter().map(|&v| f(v)).sum::<f64>() / half;
    let even_mean = s.ge.iter().map(|&v| f(v)).sum::<f64>() / half;
    let ups: Vec<f64> = upsilon_l(t.d(), t.l())?;
    let upsilon_term = (0..t.n()).filter(|&x| t.on_first_axis(x)).map(|x| ups[x] * f(s.ge[x])).sum::<f64>();
    let il: f64 = i_l(t.d(), t.l())?;
    let g_e1 = f(s.g[t.unit(1)]);
    let rhs = g_e1 - il - even_mean + upsilon_term;
    Ok(InfraredSides { lhs, g_e1, i_l: il, even_mean, upsilon_term, rhs })
}

/// `sum_{x odd} G^o(x)/|T^o| >= G(e_1) - I_L(d) - sum_x G^e(x)/|T^e| + sum_{x on axis} Upsilon_L(x) G^e(x)`.
pub fn infrared_check<T: Real>(dual: &DualTorus, s: &TwoPointSpectra<T>, tol: f64) -> Result<Report> {
    let sides = infrared_sides(dual, s)?;
    let mut r = Report::new();
    r.check(sides.lhs + tol >= sides.rhs, || format!("{sides:?}"));
    r.note(format!(
        "lhs = {:.12e}, rhs = {:.12e} (G(e1) = {:.6e}, I_L = {:.6e}, even mean = {:.6e}, upsilon term = {:.6e})",
        sides.lhs, sides.rhs, sides.g_e1, sides.i_l, sides.even_mean, sides.upsilon_term
    ));
    Ok(r)
}

/// The three plane-wave identities for `v_x = cos(k . x)`:
/// `(Delta v)_x = -epsilon v_x`, `sum_edges (v_y - v_x)^2 = epsilon sum v^2`,
/// `sum_{x,y} v_x v_y G(y - x) = G^(k) sum v^2`.
pub fn plane_wave_identities<T: Real>(dual: &DualTorus, s: &TwoPointSpectra<T>, tol: f64) -> Report {
    let t = dual.torus();
    let g: Vec<f64> = s.g.iter().map(|v| v.to_f64().unwrap()).collect();
    let mut r = Report::new();
    for m in 1..dual.len() {
        let eps: f64 = epsilon_mode(dual, m);
        let v: Vec<f64> = (0..t.n()).map(|x| dual.wave::<f64>(m, x).re).collect();
        let norm: f64 = v.iter().map(|a| a * a).sum();
        for x in 0..t.n() {
            let lap: f64 = t.neighbors(x).iter().map(|&y| v[y] - v[x]).sum();
            r.check((lap + eps * v[x]).abs() <= tol, || format!("Laplacian at k = {:?}, x = {x}", dual.mode(m)));
        }
        let dir: f64 = t.edges().iter().map(|&(x, y)| (v[y] - v[x]).powi(2)).sum();
        r.check((dir - eps * norm).abs() <= tol * norm.max(1.0), || format!("Dirichlet form at k = {:?}", dual.mode(m)));
        let mut quad = 0.0;
        for x in 0..t.n() {
            for y in 0..t.n() {
                quad += v[x] * v[y] * g[t.sub(y, x)];
            }
        }
        let want = real(&s.g_hat[m]) * norm;
        r.check((quad - want).abs() <= tol * norm.max(1.0), || format!("quadratic form at k = {:?}: {quad} vs {want}", dual.mode(m)));
    }
    r
}

/// Sides of the Key Inequality evaluated in floating point.
pub fn key_inequality_sides_f64(t: &crate::torus::Torus, g: &[f64], v: &[f64]) -> (f64, f64) {
    let lap: Vec<f64> = (0..t.n()).map(|x| t.neighbors(x).iter().map(|&y| v[y] - v[x]).sum()).collect();
    let mut lhs = 0.0;
    for x in 0..t.n() {
        for y in 0..t.n() {
            lhs += lap[x] * lap[y] * g[t.sub(y, x)];
        }
    }
    let rhs = t.edges().iter().map(|&(x, y)| (v[y] - v[x]).powi(2)).sum();
    (lhs, rhs)
}

/// Plugging `v_x = cos(k . x)` into the Key Inequality reproduces the
/// high-frequency bound: the sides equal `epsilon^2 G^ |v|^2` and
/// `epsilon |v|^2`.
pub fn key_cosine_check<T: Real>(dual: &DualTorus, s: &TwoPointSpectra<T>, tol: f64) -> Report {
    let t = dual.torus();
    let g: Vec<f64> = s.g.iter().map(|v| v.to_f64().unwrap()).collect();
    let mut r = Report::new();
    for m in 1..dual.len() {
        let eps: f64 = epsilon_mode(dual, m);
        let v: Vec<f64> = (0..t.n()).map(|x| dual.wave::<f64>(m, x).re).collect();
        let norm: f64 = v.iter().map(|a| a * a).sum();
        let (lhs, rhs) = key_inequality_sides_f64(t, &g, &v);
        let gh = real(&s.g_hat[m]);
        let scale = norm * eps * eps.max(1.0);
        r.check((lhs - eps * eps * gh * norm).abs() <= tol * scale, || format!("k = {:?}: lhs {lhs} vs {}", dual.mode(m), eps * eps * gh * norm));
        r.check((rhs - eps * norm).abs() <= tol * scale, || format!("k = {:?}: rhs {rhs} vs {}", dual.mode(m), eps * norm));
        let hf = gh <= 1.0 / eps + tol;
        r.check((lhs <= rhs + tol * scale) == hf, || format!("k = {:?}: Key Inequality and high-frequency bound disagree", dual.mode(m)));
    }
    r
}
