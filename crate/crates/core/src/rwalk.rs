//! Expected number of returns `r_d = E[N_+]` of the simple random walk on
//! `Z^d`, by quadrature, by Monte Carlo, and by exact partial sums.

use crate::error::{Error, Result};
use crate::report::Report;
use crate::scalar::Real;
use rand::{Rng, SeedableRng};
use serde::Serialize;
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Quadrature,
    Mc,
    PartialSum,
}

#[derive(Debug, Clone, Serialize)]
pub struct WalkEstimate {
    pub d: usize,
    pub value: f64,
    pub err: f64,
    pub method: Method,
    pub notes: Vec<String>,
}

fn transient(d: usize) -> Result<()> {
    if d < 3 {
        return Err(Error::Dimension(d, "the walk is recurrent for d <= 2, r_d diverges"));
    }
    Ok(())
}

/// Midpoint sum over `[0, pi]^{d-1}` of `d (b / sqrt(b^2 - 1) - 1)` with
/// `b = d - sum_{i >= 2} cos k_i`: the `k_1` integral of
/// `cos k_1 / (1 - (1/d) sum cos k_i)` done in closed form.
fn reduced_sum<T: Real>(d: usize, m: usize) -> T {
    let h = PI / m as f64;
    let cosines: Vec<T> = (0..m).map(|j| T::from_f64(((j as f64 + 0.5) * h).cos()).unwrap()).collect();
    let df = T::from_usize(d).unwrap();
    let one = T::one();
    let dims = d - 1;
    let mut idx = vec![0usize; dims];
    let mut acc = T::zero();
    loop {
        let c = idx.iter().fold(T::zero(), |a, &j| a + cosines[j]);
        let b = df - c;
        acc = acc + df * (b / (b * b - one).sqrt() - one);
        let mut i = 0;
        loop {
            if i == dims {
                return acc / T::from_usize(m.pow(dims as u32)).unwrap();
            }
            idx[i] += 1;
            if idx[i] < m {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
    }
}

/// `r_d = (2 pi)^{-d} int cos k_1 / (1 - (1/d) sum_i cos k_i) dk`
/// on a midpoint grid with `m` cells per half axis, Richardson-extrapolated
/// from `m` and `2m`.
pub fn r_quadrature<T: Real>(d: usize, m: usize) -> Result<WalkEstimate> {
    transient(d)?;
    if m == 0 {
        return Err(Error::Param("grid must have at least one cell".into()));
    }
    let coarse: T = reduced_sum(d, m);
    let fine: T = reduced_sum(d, 2 * m);
    let (c, f) = (coarse.to_f64().unwrap(), fine.to_f64().unwrap());
    let value = 2.0 * f - c;
    let mut notes = vec![format!("grid {m}: {c:.10}, grid {}: {f:.10}", 2 * m)];
    let rel = (f - c).abs() / f.abs();
    notes.push(format!("relative change between grids {rel:.3e}"));
    Ok(WalkEstimate { d, value, err: (value - f).abs(), method: Method::Quadrature, notes })
}

/// `(1/2) (2 pi)^{-d} int cos(k_1/2) / (1 - J(k)) dk` with
/// `J(k) = (1/d)(cos(k_1/2) + sum_{i >= 2} cos k_i)`, on a midpoint grid
/// with `m` cells per axis over `[0, pi]^d`.
///
/// The substitution `k_1 -> k_1/2` squeezes the half-lattice walk's dual
/// cell into `[-pi, pi]`, so this integral is not `r_d`; it is exposed to
/// measure the gap.
pub fn half_angle_integral(d: usize, m: usize) -> Result<f64> {
    transient(d)?;
    let h = PI / m as f64;
    let cosines: Vec<f64> = (0..m).map(|j| ((j as f64 + 0.5) * h).cos()).collect();
    let halves: Vec<f64> = (0..m).map(|j| ((j as f64 + 0.5) * h / 2.0).cos()).collect();
    let df = d as f64;
    let sum = |m: usize| -> f64 {
        let mut idx = vec![0usize; d];
        let mut acc = 0.0;
        loop {
            let c1 = halves[idx[0]];
            let j = (c1 + idx[1..].iter().map(|&j| cosines[j]).sum::<f64>()) / df;
            acc += c1 / (1.0 - j);
            let mut i = 0;
            loop {
                if i == d {
                    return acc / (m as f64).powi(d as i32);
                }
                idx[i] += 1;
                if idx[i] < m {
                    break;
                }
                idx[i] = 0;
                i += 1;
            }
        }
    };
    Ok(0.5 * sum(m))
}

/// `ln n!` for `n <= len`.
fn ln_factorials(len: usize) -> Vec<f64> {
    let mut v = vec![0.0; len + 1];
    for n in 1..=len {
        v[n] = v[n - 1] + (n as f64).ln();
    }
    v
}

/// `P(S_n = x)` for `n = 0..=steps`, exact up to rounding.
///
/// Built one axis at a time: after adding axis `j+1`, the number of steps
/// spent on it is binomial with success probability `1/(j+1)`, and the
/// one-dimensional walk gives `binom(k, (k+x)/2) 2^{-k}`.
pub fn visit_probabilities(x: &[i64], steps: usize) -> Vec<f64> {
    let lf = ln_factorials(steps);
    let ln2 = std::f64::consts::LN_2;
    let one_d = |k: usize, xi: i64| -> f64 {
        let a = xi.unsigned_abs() as usize;
        if a > k || (k + a) % 2 == 1 {
            return 0.0;
        }
        let up = (k + a) / 2;
        (lf[k] - lf[up] - lf[k - up] - k as f64 * ln2).exp()
    };
    let mut q: Vec<f64> = (0..=steps).map(|k| one_d(k, x[0])).collect();
    for (j, &xj) in x.iter().enumerate().skip(1) {
        let p_new = 1.0 / (j as f64 + 1.0);
        let (lp, lq) = (p_new.ln(), (1.0 - p_new).ln());
        let axis: Vec<f64> = (0..=steps).map(|k| one_d(k, xj)).collect();
        let mut next = vec![0.0; steps + 1];
        for (n, slot) in next.iter_mut().enumerate() {
            let mut acc = 0.0;
            for k in 0..=n {
                let r = n - k;
                if q[k] == 0.0 || axis[r] == 0.0 {
                    continue;
                }
                let binom = (lf[n] - lf[k] - lf[r] + k as f64 * lq + r as f64 * lp).exp();
                acc += binom * q[k] * axis[r];
            }
            *slot = acc;
        }
        q = next;
    }
    q
}

/// Local-limit estimate of `sum_{n > steps} P(S_n = o)`: for even `n`,
/// `P(S_n = o) ~ 2 (d / (2 pi n))^{d/2}`, summed by the midpoint integral.
pub fn return_tail(d: usize, steps: usize) -> f64 {
    let df = d as f64;
    let m0 = (steps / 2 + 1) as f64 - 0.5;
    2.0 * (df / (4.0 * PI)).powf(df / 2.0) * m0.powf(1.0 - df / 2.0) / (df / 2.0 - 1.0)
}

/// `r_d` as the exact sum `sum_{n=1}^{steps} P(S_n = o)` plus the local
/// limit tail.
pub fn r_partial_sum(d: usize, steps: usize) -> Result<WalkEstimate> {
    transient(d)?;
    let p = visit_probabilities(&vec![0; d], steps);
    let head: f64 = p[1..].iter().sum();
    let tail = return_tail(d, steps);
    let notes = vec![format!("exact head {head:.10} over {steps} steps, tail {tail:.3e}")];
    Ok(WalkEstimate { d, value: head + tail, err: tail * 2.0 / steps as f64 + 1e-12, method: Method::PartialSum, notes })
}

/// Sample mean of the number of returns in `max_steps` steps, plus the
/// local-limit tail for the truncated remainder.
pub fn r_montecarlo(d: usize, trials: u64, max_steps: usize, seed: u64) -> Result<WalkEstimate> {
    transient(d)?;
    if trials < 2 {
        return Err(Error::Param("need at least two trials".into()));
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut pos = vec![0i64; d];
    let (mut sum, mut sum2) = (0.0f64, 0.0f64);
    for _ in 0..trials {
        pos.iter_mut().for_each(|v| *v = 0);
        let mut off = 0usize;
        let mut returns = 0u64;
        for _ in 0..max_steps {
            let dir = rng.gen_range(0..2 * d);
            let i = dir >> 1;
            let was = pos[i] == 0;
            let step = if dir & 1 == 0 { 1 } else { -1 };
            pos[i] += step;
            let now = pos[i] == 0;
            if was && !now {
                off += 1;
            } else if !was && now {
                off -= 1;
            }
            if off == 0 {
                returns += 1;
            }
        }
        let r = returns as f64;
        sum += r;
        sum2 += r * r;
    }
    let n = trials as f64;
    let mean = sum / n;
    let var = (sum2 / n - mean * mean) * n / (n - 1.0);
    let tail = return_tail(d, max_steps);
    let notes = vec![
        format!("raw mean {mean:.6} over {trials} trials of {max_steps} steps"),
        format!("local-limit tail correction {tail:.6e}"),
    ];
    Ok(WalkEstimate { d, value: mean + tail, err: (var / n).sqrt(), method: Method::Mc, notes })
}

/// `sum_{n=0}^m P(S_n = e_1)` against
/// `(2 pi)^{-d} int cos k_1 sum_{n=0}^m phi(k)^n dk`, `phi = (1/d) sum cos k_i`.
///
/// The integrand is a trigonometric polynomial of degree `m`, so a grid
/// with more than `m` points per axis integrates it exactly.
pub fn partial_sum_identity(d: usize, m: usize, grid: usize, tol: f64) -> Result<Report> {
    if d == 0 {
        return Err(Error::Dimension(d, "need d >= 1"));
    }
    let mut x = vec![0i64; d];
    x[0] = 1;
    let p = visit_probabilities(&x, m);
    let lhs: f64 = p.iter().sum();
    let h = 2.0 * PI / grid as f64;
    let cosines: Vec<f64> = (0..grid).map(|j| ((j as f64 + 0.5) * h - PI).cos()).collect();
    let mut idx = vec![0usize; d];
    let mut acc = 0.0;
    'outer: loop {
        let phi = idx.iter().map(|&j| cosines[j]).sum::<f64>() / d as f64;
        let mut geo = 0.0;
        let mut pw = 1.0;
        for _ in 0..=m {
            geo += pw;
            pw *= phi;
        }
        acc += cosines[idx[0]] * geo;
        let mut i = 0;
        loop {
            if i == d {
                break 'outer;
            }
            idx[i] += 1;
            if idx[i] < grid {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
    }
    let rhs = acc / (grid as f64).powi(d as i32);
    let mut r = Report::new();
    let scale = lhs.abs().max(rhs.abs());
    r.check((lhs - rhs).abs() <= tol * scale.max(1e-300) || (lhs - rhs).abs() <= 1e-14, || {
        format!("d={d}, m={m}: DP {lhs:.12e} vs integral {rhs:.12e}")
    });
    r.note(format!("d={d}, m={m}: DP {lhs:.12e}, integral {rhs:.12e}"));
    Ok(r)
}

/// Largest `N` with `(1/2d)(2/N - r_d/2) > 0`, i.e. `N < 4 / r_d`.
pub fn n_window(r_d: f64) -> u32 {
    let bound = 4.0 / r_d;
    let mut n = bound.floor() as u32;
    if n as f64 >= bound {
        n -= 1;
    }
    n
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recurrent_dimensions_rejected() {
        assert!(r_quadrature::<f64>(2, 16).is_err());
        assert!(r_montecarlo(1, 10, 10, 0).is_err());
    }

    #[test]
    fn one_step_probabilities() {
        let p = visit_probabilities(&[1, 0, 0], 3);
        assert_eq!(p[0], 0.0);
        assert!((p[1] - 1.0 / 6.0).abs() < 1e-15);
        assert_eq!(p[2], 0.0);
        let q = visit_probabilities(&[0, 0], 2);
        assert!((q[2] - 0.25).abs() < 1e-15);
    }

    #[test]
    fn window_is_strict() {
        assert_eq!(n_window(0.5), 7);
        assert_eq!(n_window(0.51638), 7);
    }
}
