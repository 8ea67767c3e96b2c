//! The dual torus, plain discrete Fourier transforms, and the lattice sums
//! `I_L(d)` and `Upsilon_L`.

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::torus::Torus;
use num_complex::Complex;
use std::f64::consts::PI;

/// Modes `k = (2 pi / L) n` with `n_i` in `(-L/2, L/2]`.
///
/// Modes share the site numbering of the underlying torus: mode `m` has
/// `n_i` equal to the centred residue of the `i`-th digit of `m`. Phases
/// are looked up from a table indexed by `(n . x) mod L`, so no angle is
/// ever accumulated in floating point.
#[derive(Debug, Clone)]
pub struct DualTorus {
    t: Torus,
    cos: Vec<f64>,
    sin: Vec<f64>,
}

/// Index of the block `H^b` holding a mode. `b1` is stored doubled, so
/// `b1 = 2 * b_1` is one of `-1, 0, 1, 2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Block {
    pub b1: i8,
    pub rest: Vec<u8>,
}

impl DualTorus {
    pub fn new(t: Torus) -> Self {
        let l = t.l();
        let cos = (0..l).map(|j| (2.0 * PI * j as f64 / l as f64).cos()).collect();
        let sin = (0..l).map(|j| (2.0 * PI * j as f64 / l as f64).sin()).collect();
        DualTorus { t, cos, sin }
    }

    pub fn torus(&self) -> &Torus {
        &self.t
    }

    pub fn len(&self) -> usize {
        self.t.n()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Integer label `n` of mode `m`.
    pub fn mode(&self, m: usize) -> Vec<i64> {
        self.t.coords(m)
    }

    /// Mode with integer label `n`, if every `n_i` lies in `(-L/2, L/2]`.
    pub fn index(&self, n: &[i64]) -> Option<usize> {
        let l = self.t.l() as i64;
        if n.len() != self.t.d() || n.iter().any(|&v| 2 * v <= -l || 2 * v > l) {
            return None;
        }
        self.t.site_index(n).ok()
    }

    pub fn k<T: Real>(&self, m: usize) -> Vec<T> {
        let l = self.t.l() as f64;
        self.mode(m)
            .into_iter()
            .map(|n| T::from_f64(2.0 * PI * n as f64 / l).unwrap())
            .collect()
    }

    /// The mode `p = (pi, ..., pi)`, present iff `L` is even.
    pub fn p(&self) -> Option<usize> {
        let l = self.t.l();
        (l % 2 == 0).then(|| self.t.from_digits(&vec![l / 2; self.t.d()]))
    }

    /// `(n . x) mod L`.
    #[inline]
    pub fn phase(&self, m: usize, x: usize) -> usize {
        let l = self.t.l();
        (0..self.t.d()).map(|i| self.t.digit(m, i) * self.t.digit(x, i)).sum::<usize>() % l
    }

    /// `e^{i k . x}`.
    pub fn wave<T: Real>(&self, m: usize, x: usize) -> Complex<T> {
        let j = self.phase(m, x);
        Complex::new(T::from_f64(self.cos[j]).unwrap(), T::from_f64(self.sin[j]).unwrap())
    }

    /// `cos(k_i)` for axis `i` (0-based).
    pub fn cos_axis<T: Real>(&self, m: usize, i: usize) -> T {
        T::from_f64(self.cos[self.t.digit(m, i)]).unwrap()
    }

    /// `k_1` in `(-pi/2, pi/2]`.
    pub fn in_h(&self, m: usize) -> bool {
        let l = self.t.l() as i64;
        let n1 = self.t.centered(self.t.digit(m, 0));
        -l < 4 * n1 && 4 * n1 <= l
    }

    pub fn h_modes(&self) -> Vec<usize> {
        (0..self.len()).filter(|&m| self.in_h(m)).collect()
    }

    /// Quarter-interval block of `m`: `k_1` in `(pi (b_1 - 1/2), pi b_1]` and
    /// `k_i` in `(pi (b_i - 1), pi b_i]`.
    pub fn block(&self, m: usize) -> Block {
        let l = self.t.l() as i64;
        let n = self.mode(m);
        // smallest b1 (in halves) with 4 n1 <= l * b1
        let b1 = (-1..=2).find(|&b| 4 * n[0] <= l * b).unwrap() as i8;
        let rest = n[1..].iter().map(|&v| u8::from(v > 0)).collect();
        Block { b1, rest }
    }

    /// `Psi(k) = k + pi u` for `k` in `H \ {o}`; `None` elsewhere or for odd
    /// `L`.
    pub fn psi(&self, m: usize) -> Option<usize> {
        let l = self.t.l() as i64;
        if l % 2 == 1 || m == 0 || !self.in_h(m) {
            return None;
        }
        let half = l / 2;
        let mut n = self.mode(m);
        n[0] += if n[0] > 0 { -half } else { half };
        for v in n.iter_mut().skip(1) {
            *v += if *v > 0 { -half } else { half };
        }
        self.index(&n)
    }
}

/// `epsilon(k) = 2 sum_j (1 - cos k_j)`.
pub fn epsilon<T: Real>(k: &[T]) -> T {
    let two = T::one() + T::one();
    k.iter().fold(T::zero(), |acc, &kj| acc + two * (T::one() - kj.cos()))
}

/// `epsilon` of mode `m`, from the phase table.
pub fn epsilon_mode<T: Real>(dual: &DualTorus, m: usize) -> T {
    let two = T::one() + T::one();
    (0..dual.torus().d()).fold(T::zero(), |acc, i| acc + two * (T::one() - dual.cos_axis::<T>(m, i)))
}

/// `f^(k) = sum_x e^{-i k . x} f(x)`.
pub fn dft<T: Real>(dual: &DualTorus, f: &[T]) -> Vec<Complex<T>> {
    let n = dual.len();
    assert_eq!(f.len(), n, "input length must equal the number of sites");
    (0..n)
        .map(|m| {
            let mut acc = Complex::new(T::zero(), T::zero());
            for (x, &fx) in f.iter().enumerate() {
                if fx != T::zero() {
                    acc = acc + dual.wave::<T>(m, x).conj() * fx;
                }
            }
            acc
        })
        .collect()
}

/// `f(x) = |T|^{-1} sum_k e^{i k . x} f^(k)`.
pub fn idft<T: Real>(dual: &DualTorus, fhat: &[Complex<T>]) -> Vec<Complex<T>> {
    let n = dual.len();
    assert_eq!(fhat.len(), n, "input length must equal the number of modes");
    let inv = T::one() / T::from_usize(n).unwrap();
    (0..n)
        .map(|x| {
            let mut acc = Complex::new(T::zero(), T::zero());
            for (m, v) in fhat.iter().enumerate() {
                acc = acc + dual.wave::<T>(m, x) * v;
            }
            acc * inv
        })
        .collect()
}

/// `I_L(d) = (1/2d) |T|^{-1} sum_{k in H \ o} 2 cos k_1 / (1 - (1/d) sum_i cos k_i)`.
pub fn i_l<T: Real>(d: usize, l: usize) -> Result<T> {
    let dual = DualTorus::new(Torus::even(d, l)?);
    let df = T::from_usize(d).unwrap();
    let two = T::one() + T::one();
    let mut acc = T::zero();
    for m in 1..dual.len() {
        if !dual.in_h(m) {
            continue;
        }
        let s = (0..d).fold(T::zero(), |a, i| a + dual.cos_axis::<T>(m, i));
        acc = acc + two * dual.cos_axis::<T>(m, 0) / (T::one() - s / df);
    }
    Ok(acc / (two * df * T::from_usize(dual.len()).unwrap()))
}

/// `Upsilon_L(x) = (2/|T|) sum_{k in H} e^{-i k . (x - e_1)}` at every site.
///
/// The sum over `H` factorises into the `k_1` range times full sums over
/// the other axes, which vanish unless `x_i = 0`.
pub fn upsilon_complex<T: Real>(d: usize, l: usize) -> Result<Vec<Complex<T>>> {
    let dual = DualTorus::new(Torus::even(d, l)?);
    let t = dual.torus();
    let h1: Vec<usize> = (0..l).filter(|&j| dual.in_h(j * t.stride(0))).collect();
    let scale = T::from_f64(2.0 / l as f64).unwrap();
    Ok((0..t.n())
        .map(|x| {
            if !t.on_first_axis(x) {
                return Complex::new(T::zero(), T::zero());
            }
            let a = (t.digit(x, 0) + l - 1) % l;
            let mut acc = Complex::new(T::zero(), T::zero());
            for &j in &h1 {
                let ph = (j * a) % l;
                acc = acc + Complex::new(T::from_f64(dual.cos[ph]).unwrap(), -T::from_f64(dual.sin[ph]).unwrap());
            }
            acc * scale
        })
        .collect())
}

/// Real part of `Upsilon_L`.
pub fn upsilon_l<T: Real>(d: usize, l: usize) -> Result<Vec<T>> {
    Ok(upsilon_complex::<T>(d, l)?.into_iter().map(|c| c.re).collect())
}

pub(crate) fn require_even(t: &Torus) -> Result<()> {
    if t.l() % 2 == 1 {
        return Err(Error::OddSide(t.l()));
    }
    Ok(())
}
