//! Monomer-worm Monte Carlo for uniform dimer covers, estimating the
//! monomer correlation `Xi_L(x)` beyond the reach of exact counting.
//!
//! The chain lives on closed covers plus covers with two monomers, a fixed
//! tail and a moving head. From a closed cover a uniform site becomes the
//! tail and its dimer is removed. The head picks a uniform neighbour `w`:
//! if `w` is the tail the worm closes, otherwise the dimer `{w, v}` is
//! replaced by `{head, w}` and the head jumps to `v`. Every proposal is
//! accepted; the stationary law is uniform on each sector, so the time
//! spent at head-tail displacement `x` is proportional to `|D({o, x})|`.

use crate::error::{Error, Result};
use crate::torus::Torus;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::HashMap;

const NONE: u32 = u32::MAX;

pub struct WormState {
    t: Torus,
    mate: Vec<u32>,
    tail: Option<usize>,
    head: usize,
    rng: ChaCha8Rng,
}

impl WormState {
    /// Starts from the cover pairing `x` with `x + e_1` for even `x_1`.
    pub fn new(t: &Torus, seed: u64, stream: u64) -> Result<Self> {
        if t.l() % 2 == 1 {
            return Err(Error::Infeasible(format!("no initial dimer cover: L = {} is odd", t.l())));
        }
        let e1 = t.unit(1);
        let mut mate = vec![NONE; t.n()];
        for x in 0..t.n() {
            if t.digit(x, 0) % 2 == 0 {
                let y = t.add(x, e1);
                mate[x] = y as u32;
                mate[y] = x as u32;
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Ok(WormState { t: t.clone(), mate, tail: None, head: 0, rng })
    }

    pub fn is_closed(&self) -> bool {
        self.tail.is_none()
    }

    pub fn defects(&self) -> Option<(usize, usize)> {
        self.tail.map(|t| (t, self.head))
    }

    pub fn mates(&self) -> &[u32] {
        &self.mate
    }

    /// One elementary update.
    #[inline]
    pub fn step(&mut self) {
        match self.tail {
            None => {
                let t = self.rng.gen_range(0..self.t.n());
                let h = self.mate[t] as usize;
                self.mate[t] = NONE;
                self.mate[h] = NONE;
                self.tail = Some(t);
                self.head = h;
            }
            Some(t) => {
                let nb = self.t.neighbors(self.head);
                let w = nb[self.rng.gen_range(0..nb.len())];
                if w == t {
                    self.mate[self.head] = t as u32;
                    self.mate[t] = self.head as u32;
                    self.tail = None;
                } else {
                    let v = self.mate[w] as usize;
                    self.mate[self.head] = w as u32;
                    self.mate[w] = self.head as u32;
                    self.mate[v] = NONE;
                    self.head = v;
                }
            }
        }
    }

    /// Valid cover away from the defects, defects on opposite sublattices.
    pub fn is_consistent(&self) -> bool {
        let t = &self.t;
        for x in 0..t.n() {
            let m = self.mate[x];
            let defect = matches!(self.tail, Some(tl) if tl == x || self.head == x);
            if defect {
                if m != NONE {
                    return false;
                }
                continue;
            }
            if m == NONE || self.mate[m as usize] != x as u32 || !t.are_adjacent(x, m as usize) {
                return false;
            }
        }
        match self.tail {
            Some(tl) => t.parity(tl) != t.parity(self.head),
            None => true,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct WormConfig {
    /// Measured sweeps per chain; a sweep is `|T|` updates.
    pub sweeps: u64,
    pub therm: u64,
    pub seed: u64,
    pub chains: u64,
    pub batches: u64,
}

impl WormConfig {
    pub fn new(sweeps: u64, therm: u64, seed: u64) -> Self {
        WormConfig { sweeps, therm, seed, chains: 1, batches: 20 }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct WormEstimate {
    pub d: usize,
    pub l: usize,
    pub xi: Vec<f64>,
    pub stderr: Vec<f64>,
    /// Raw head-tail displacement histogram, all chains.
    pub hist: Vec<u64>,
    pub closures: u64,
    pub updates: u64,
    pub config: WormConfig,
}

/// `(1/2d) H(x) / H(e_1)` with both histograms averaged over point-group
/// orbits, which leaves the expectation unchanged by lattice symmetry.
fn estimate(t: &Torus, hist: &[u64]) -> Vec<f64> {
    let mut orbit: HashMap<Vec<i64>, (u64, u64)> = HashMap::new();
    for (x, &h) in hist.iter().enumerate() {
        let e = orbit.entry(t.orbit_key(x)).or_default();
        e.0 += h;
        e.1 += 1;
    }
    let nn = orbit[&t.orbit_key(t.unit(1))];
    let base = nn.0 as f64 / nn.1 as f64;
    let two_d = 2.0 * t.d() as f64;
    (0..t.n())
        .map(|x| {
            let (h, c) = orbit[&t.orbit_key(x)];
            if base == 0.0 {
                f64::NAN
            } else {
                h as f64 / c as f64 / base / two_d
            }
        })
        .collect()
}

/// Estimates `Xi_L(x)` at every site with batch-mean error bars.
pub fn worm_run_with(t: &Torus, cfg: &WormConfig) -> Result<WormEstimate> {
    if t.d() < 2 || t.d() > 3 {
        return Err(Error::Dimension(t.d(), "worm runs support d in {2, 3}"));
    }
    t.require_even()?;
    if cfg.batches < 2 || cfg.chains == 0 || cfg.sweeps < cfg.batches {
        return Err(Error::Param("need chains >= 1, batches >= 2 and sweeps >= batches".into()));
    }
    let n = t.n() as u64;
    let mut total = vec![0u64; t.n()];
    let mut per_batch: Vec<Vec<f64>> = Vec::new();
    let mut closures = 0u64;
    let mut updates = 0u64;
    for chain in 0..cfg.chains {
        let mut w = WormState::new(t, cfg.seed, chain)?;
        for _ in 0..cfg.therm * n {
            w.step();
        }
        updates += cfg.therm * n;
        let per = cfg.sweeps / cfg.batches;
        for _ in 0..cfg.batches {
            let mut hist = vec![0u64; t.n()];
            for _ in 0..per * n {
                let was_open = !w.is_closed();
                w.step();
                match w.tail {
                    Some(tl) => hist[t.sub(w.head, tl)] += 1,
                    None => closures += u64::from(was_open),
                }
            }
            updates += per * n;
            for (a, b) in total.iter_mut().zip(&hist) {
                *a += b;
            }
            per_batch.push(estimate(t, &hist));
        }
    }
    let xi = estimate(t, &total);
    let b = per_batch.len() as f64;
    let stderr = (0..t.n())
        .map(|x| {
            let mean = per_batch.iter().map(|v| v[x]).sum::<f64>() / b;
            let var = per_batch.iter().map(|v| (v[x] - mean).powi(2)).sum::<f64>() / (b - 1.0);
            (var / b).sqrt()
        })
        .collect();
    Ok(WormEstimate { d: t.d(), l: t.l(), xi, stderr, hist: total, closures, updates, config: cfg.clone() })
}

pub fn worm_run(t: &Torus, sweeps: u64, therm: u64, seed: u64) -> Result<WormEstimate> {
    worm_run_with(t, &WormConfig::new(sweeps, therm, seed))
}

#[derive(Debug, Clone, Serialize)]
pub struct DecayProfile {
    /// `(n, Xi(n e_1), stderr)` for odd `n`.
    pub axis: Vec<(usize, f64, f64)>,
    /// Least-squares slope of `ln Xi` against `ln n` with its standard error.
    pub exponent: Option<(f64, f64)>,
    /// `min Xi(n e_1) / Xi(e_1)` over the profile.
    pub min_ratio: f64,
}

/// Axis profile for odd `n <= n_max`; the power-law fit uses `n >= n_fit_min`.
pub fn decay_profile(t: &Torus, est: &WormEstimate, n_max: usize, n_fit_min: usize) -> Result<DecayProfile> {
    let mut axis = Vec::new();
    for n in (1..=n_max.min(t.l() / 2)).step_by(2) {
        let mut c = vec![0i64; t.d()];
        c[0] = n as i64;
        let x = t.site_index(&c)?;
        axis.push((n, est.xi[x], est.stderr[x]));
    }
    let first = axis.first().map(|a| a.1).unwrap_or(f64::NAN);
    let min_ratio = axis.iter().map(|a| a.1 / first).fold(f64::INFINITY, f64::min);
    let pts: Vec<(f64, f64, f64)> = axis
        .iter()
        .filter(|a| a.0 >= n_fit_min && a.1 > 0.0)
        .map(|a| ((a.0 as f64).ln(), a.1.ln(), (a.2 / a.1).max(1e-12)))
        .collect();
    let exponent = (pts.len() >= 2).then(|| weighted_slope(&pts));
    Ok(DecayProfile { axis, exponent, min_ratio })
}

/// Weighted least-squares slope of `y` on `x` with per-point errors.
fn weighted_slope(pts: &[(f64, f64, f64)]) -> (f64, f64) {
    let (mut s, mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for &(x, y, e) in pts {
        let w = 1.0 / (e * e);
        s += w;
        sx += w * x;
        sy += w * y;
        sxx += w * x * x;
        sxy += w * x * y;
    }
    let det = s * sxx - sx * sx;
    ((s * sxy - sx * sy) / det, (s / det).sqrt())
}

/// Visit counts of closed covers, sampled at every closure, keyed by the
/// partner array. Used to test stationarity on small tori.
pub fn closed_sector_census(t: &Torus, closures: u64, seed: u64) -> Result<HashMap<Vec<u32>, u64>> {
    let mut w = WormState::new(t, seed, 0)?;
    let mut seen = HashMap::new();
    let mut got = 0;
    while got < closures {
        let was_open = !w.is_closed();
        w.step();
        if was_open && w.is_closed() {
            *seen.entry(w.mate.clone()).or_insert(0) += 1;
            got += 1;
        }
    }
    Ok(seen)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn state_stays_consistent() {
        let t = Torus::even(2, 4).unwrap();
        let mut w = WormState::new(&t, 3, 0).unwrap();
        for _ in 0..20_000 {
            w.step();
            assert!(w.is_consistent());
        }
    }

    #[test]
    fn odd_support_and_anchor() {
        let t = Torus::even(2, 4).unwrap();
        let est = worm_run(&t, 200, 10, 1).unwrap();
        for x in 0..t.n() {
            if !t.is_odd(x) {
                assert_eq!(est.hist[x], 0);
            }
        }
        assert!((est.xi[t.unit(1)] - 0.25).abs() < 1e-15);
    }
}
