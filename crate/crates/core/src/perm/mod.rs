//! Lattice permutations: configuration spaces `Omega^ell` and
//! `Omega_{x,y}`, their partition functions in the monomer (`rho`) and edge
//! (`lambda`) parametrisations, and the two-point function.
//!
//! Convention: in `Omega_{x,x}` the site `x` carries the degenerate walk
//! and is not counted among the monomers, so that `H + M = L^d - 1` on
//! every walk space.

pub mod bijection;
pub mod enumerate;
pub mod transfer;

pub use enumerate::Target;

use crate::error::{Error, Result};
use crate::scalar::{rint, rpow, Rational, Wide};
use crate::torus::Torus;
use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use std::collections::HashMap;
use std::sync::{Arc, Mutex};

/// Default cap on enumerated configurations.
pub const DEFAULT_CAP: u64 = 200_000_000;

/// An element of `Omega^ell` or `Omega_{x,y}` as a partial successor map.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LoopConfig {
    pub succ: Vec<Option<usize>>,
    pub walk: Option<(usize, usize)>,
}

impl LoopConfig {
    pub fn from_sigma(sigma: &[usize], target: Target) -> Self {
        let succ = sigma
            .iter()
            .enumerate()
            .map(|(z, &s)| if s == z || s == enumerate::NONE { None } else { Some(s) })
            .collect();
        let walk = match target {
            Target::Ell => None,
            Target::Walk(x, y) => Some((x, y)),
        };
        LoopConfig { succ, walk }
    }

    fn in_degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.succ.len()];
        for s in self.succ.iter().flatten() {
            d[*s] += 1;
        }
        d
    }

    /// Monomers: sites with no edge, except the degenerate walk site.
    pub fn monomers(&self) -> usize {
        let ind = self.in_degrees();
        (0..self.succ.len())
            .filter(|&z| self.succ[z].is_none() && ind[z] == 0)
            .filter(|&z| !matches!(self.walk, Some((x, y)) if x == y && z == x))
            .count()
    }

    /// Directed edges.
    pub fn edges(&self) -> usize {
        self.succ.iter().flatten().count()
    }

    /// Loops plus double edges.
    pub fn loops(&self) -> usize {
        let n = self.succ.len();
        let mut seen = vec![false; n];
        if let Some((x, _)) = self.walk {
            let mut z = x;
            seen[z] = true;
            while let Some(s) = self.succ[z] {
                z = s;
                seen[z] = true;
            }
        }
        let mut count = 0;
        for z in 0..n {
            if seen[z] || self.succ[z].is_none() {
                continue;
            }
            count += 1;
            let mut w = z;
            while !seen[w] {
                seen[w] = true;
                w = self.succ[w].expect("closed cycle");
            }
        }
        count
    }

    /// Checks membership in `Omega^ell` / `Omega_{x,y}` on the torus.
    pub fn is_valid(&self, t: &Torus) -> bool {
        let n = t.n();
        if self.succ.len() != n {
            return false;
        }
        for (z, s) in self.succ.iter().enumerate() {
            if let Some(s) = s {
                if !t.are_adjacent(z, *s) {
                    return false;
                }
            }
        }
        let ind = self.in_degrees();
        for z in 0..n {
            let out = self.succ[z].is_some() as usize;
            let inn = ind[z];
            let ok = match self.walk {
                Some((x, y)) if x != y && z == x => out == 1 && inn == 0,
                Some((x, y)) if x != y && z == y => out == 0 && inn == 1,
                Some((x, _)) if z == x => out == 0 && inn == 0,
                _ => out == inn && inn <= 1,
            };
            if !ok {
                return false;
            }
        }
        // the walk must reach y and every other cycle of length 2 is a
        // double edge, longer ones are loops: both automatic for a simple graph
        if let Some((x, y)) = self.walk {
            let mut z = x;
            let mut steps = 0;
            while let Some(s) = self.succ[z] {
                z = s;
                steps += 1;
                if steps > n {
                    return false;
                }
            }
            if z != y {
                return false;
            }
        }
        true
    }
}

/// Number of configurations for each `(monomers, loops)` pair.
#[derive(Debug, Clone, Default, Serialize)]
pub struct Census {
    pub counts: Vec<(usize, usize, u64)>,
    pub total: u64,
    /// `L^d` for `Omega^ell`, `L^d - 1` for walk spaces.
    pub sites: usize,
}

impl Census {
    pub fn build(t: &Torus, target: Target, cap: u64) -> Result<Self> {
        let mut map: HashMap<(usize, usize), u64> = HashMap::new();
        let mut seen = Vec::new();
        let total = enumerate::for_each(t, target, cap, |sigma| {
            let k = enumerate::stats(sigma, target, &mut seen);
            *map.entry(k).or_insert(0) += 1;
        })?;
        let mut counts: Vec<(usize, usize, u64)> = map.into_iter().map(|((m, l), c)| (m, l, c)).collect();
        counts.sort_unstable();
        let sites = match target {
            Target::Ell => t.n(),
            Target::Walk(..) => t.n() - 1,
        };
        Ok(Census { counts, total, sites })
    }

    /// `sum rho^M (N/2)^L`.
    pub fn z(&self, n: u32, rho: &Rational) -> Rational {
        let half = Rational::new(BigInt::from(n), BigInt::from(2));
        let mut acc = Rational::zero();
        for &(m, l, c) in &self.counts {
            acc += rpow(rho, m) * rpow(&half, l) * rint(c as i64);
        }
        acc
    }

    /// `sum lambda^H (N/2)^L` with `H = sites - M`.
    pub fn y(&self, n: u32, lambda: &Rational) -> Rational {
        let half = Rational::new(BigInt::from(n), BigInt::from(2));
        let mut acc = Rational::zero();
        for &(m, l, c) in &self.counts {
            acc += rpow(lambda, self.sites - m) * rpow(&half, l) * rint(c as i64);
        }
        acc
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Engine {
    /// Exhaustive enumeration (census of statistics).
    Enumerate,
    /// Transfer matrix, `d = 2` only.
    Transfer,
}

/// Partition functions of one torus, cached by canonical target.
pub struct PermSystem {
    t: Torus,
    engine: Engine,
    cap: u64,
    census: Mutex<HashMap<Target, Arc<Census>>>,
    tm: Mutex<HashMap<(Target, u32, Rational), Rational>>,
}

fn check_params(n: u32, rho: &Rational) -> Result<()> {
    if n == 0 {
        return Err(Error::Param("N must be a positive integer".into()));
    }
    if rho.is_negative() {
        return Err(Error::Param("rho must be nonnegative".into()));
    }
    Ok(())
}

impl PermSystem {
    pub fn new(t: Torus) -> Result<Self> {
        t.require_even()?;
        if t.d() >= 3 {
            return Err(Error::Infeasible(format!(
                "exact lattice permutation sums need d <= 2; the smallest d = {} torus has {} sites",
                t.d(),
                t.n()
            )));
        }
        let engine = if t.d() == 2 && t.l() > 4 { Engine::Transfer } else { Engine::Enumerate };
        Ok(Self::with_engine(t, engine))
    }

    pub fn with_engine(t: Torus, engine: Engine) -> Self {
        PermSystem {
            t,
            engine,
            cap: DEFAULT_CAP,
            census: Mutex::new(HashMap::new()),
            tm: Mutex::new(HashMap::new()),
        }
    }

    pub fn torus(&self) -> &Torus {
        &self.t
    }

    pub fn engine(&self) -> Engine {
        self.engine
    }

    /// Moves a walk target to `(o, z)` with `z` the canonical orbit
    /// representative of `y - x` (translations, reversal, point group).
    pub fn canonical(&self, target: Target) -> Target {
        match target {
            Target::Ell => Target::Ell,
            Target::Walk(x, y) => {
                let z = self.t.sub(y, x);
                let key = self.t.orbit_key(z);
                let rep = self.t.site_index(&key).expect("valid key");
                Target::Walk(0, rep)
            }
        }
    }

    pub fn census(&self, target: Target) -> Result<Arc<Census>> {
        let key = self.canonical(target);
        if let Some(c) = self.census.lock().unwrap().get(&key) {
            return Ok(c.clone());
        }
        let c = Arc::new(Census::build(&self.t, key, self.cap)?);
        self.census.lock().unwrap().insert(key, c.clone());
        Ok(c)
    }

    fn transfer_z(&self, target: Target, n: u32, rho: &Rational) -> Result<Rational> {
        let key = (self.canonical(target), n, rho.clone());
        if let Some(v) = self.tm.lock().unwrap().get(&key) {
            return Ok(v.clone());
        }
        let p: BigUint = rho.numer().to_biguint().expect("nonnegative");
        let q: BigUint = rho.denom().to_biguint().expect("positive");
        let two = BigUint::from(2u32);
        let nn = BigUint::from(n);
        let w = transfer::Weights {
            monomer: &two * &p,
            site: &two * &q,
            iso_site: q.clone(),
            iso_done: &two * &nn,
            loop_done: nn,
        };
        let narrow = |v: &BigUint| Wide(v.to_u128());
        let wn = transfer::Weights {
            monomer: narrow(&w.monomer),
            site: narrow(&w.site),
            iso_site: narrow(&w.iso_site),
            iso_done: narrow(&w.iso_done),
            loop_done: narrow(&w.loop_done),
        };
        let raw = match transfer::partition(&self.t, key.0, &wn)? {
            Wide(Some(v)) => BigUint::from(v),
            Wide(None) => transfer::partition(&self.t, key.0, &w)?,
        };
        let scale = (&two * &q).pow(self.t.n() as u32);
        let v = Rational::new(BigInt::from(raw), BigInt::from(scale));
        self.tm.lock().unwrap().insert(key, v.clone());
        Ok(v)
    }

    /// `Z^ell` or `Z(x,y)` at `(N, rho)`.
    pub fn z(&self, target: Target, n: u32, rho: &Rational) -> Result<Rational> {
        check_params(n, rho)?;
        match self.engine {
            Engine::Enumerate => Ok(self.census(target)?.z(n, rho)),
            Engine::Transfer => self.transfer_z(target, n, rho),
        }
    }

    /// `Y^ell` or `Y(x,y)` at `(N, lambda)`.
    pub fn y(&self, target: Target, n: u32, lambda: &Rational) -> Result<Rational> {
        if !lambda.is_positive() {
            return Err(Error::Param("lambda must be positive".into()));
        }
        match self.engine {
            Engine::Enumerate => {
                check_params(n, lambda)?;
                Ok(self.census(target)?.y(n, lambda))
            }
            Engine::Transfer => {
                let sites = match target {
                    Target::Ell => self.t.n(),
                    Target::Walk(..) => self.t.n() - 1,
                };
                let inv = lambda.recip();
                Ok(rpow(lambda, sites) * self.transfer_z(target, n, &inv)?)
            }
        }
    }

    /// `G(x,y) = Z(x,y) / Z^ell`.
    pub fn two_point(&self, n: u32, rho: &Rational, x: usize, y: usize) -> Result<Rational> {
        self.t.check_site(x)?;
        self.t.check_site(y)?;
        let zl = self.z(Target::Ell, n, rho)?;
        if zl.is_zero() {
            return Err(Error::DivisionByZero("Z^ell vanishes"));
        }
        Ok(self.z(Target::Walk(x, y), n, rho)? / zl)
    }

    /// `G(o, x)` for every site `x`.
    pub fn two_point_table(&self, n: u32, rho: &Rational) -> Result<Vec<Rational>> {
        let zl = self.z(Target::Ell, n, rho)?;
        if zl.is_zero() {
            return Err(Error::DivisionByZero("Z^ell vanishes"));
        }
        (0..self.t.n())
            .map(|x| Ok(self.z(Target::Walk(0, x), n, rho)? / &zl))
            .collect()
    }

    /// `Y(o, x)` for every site `x`.
    pub fn y_table(&self, n: u32, lambda: &Rational) -> Result<Vec<Rational>> {
        (0..self.t.n()).map(|x| self.y(Target::Walk(0, x), n, lambda)).collect()
    }

    /// Law of the walk end: `P(X = x) = G(o,x) / sum_z G(o,z)`.
    pub fn target_law(&self, n: u32, rho: &Rational) -> Result<Vec<Rational>> {
        let g = self.two_point_table(n, rho)?;
        let total: Rational = g.iter().sum();
        if total.is_zero() {
            return Err(Error::DivisionByZero("two-point function vanishes"));
        }
        Ok(g.into_iter().map(|v| v / &total).collect())
    }
}

/// Every configuration of `Omega^ell`, in enumeration order.
pub fn enumerate_omega_ell(t: &Torus, cap: u64) -> Result<Vec<LoopConfig>> {
    let mut out = Vec::new();
    enumerate::for_each(t, Target::Ell, cap, |s| out.push(LoopConfig::from_sigma(s, Target::Ell)))?;
    Ok(out)
}

/// Every configuration of `Omega_{x,y}`.
pub fn enumerate_omega_xy(t: &Torus, x: usize, y: usize, cap: u64) -> Result<Vec<LoopConfig>> {
    let target = Target::Walk(x, y);
    let mut out = Vec::new();
    enumerate::for_each(t, target, cap, |s| out.push(LoopConfig::from_sigma(s, target)))?;
    Ok(out)
}

pub fn partition_ell(t: &Torus, n: u32, rho: &Rational) -> Result<Rational> {
    PermSystem::new(t.clone())?.z(Target::Ell, n, rho)
}

pub fn partition_directed(t: &Torus, n: u32, rho: &Rational, x: usize, y: usize) -> Result<Rational> {
    PermSystem::new(t.clone())?.z(Target::Walk(x, y), n, rho)
}

pub fn two_point(t: &Torus, n: u32, rho: &Rational, x: usize, y: usize) -> Result<Rational> {
    PermSystem::new(t.clone())?.two_point(n, rho, x, y)
}

pub fn partition_lambda(t: &Torus, n: u32, lambda: &Rational, xy: Option<(usize, usize)>) -> Result<Rational> {
    let target = xy.map_or(Target::Ell, |(x, y)| Target::Walk(x, y));
    PermSystem::new(t.clone())?.y(target, n, lambda)
}

/// Outcome of the monotonicity chain check.
#[derive(Debug, Clone, Serialize)]
pub struct MonotonicityReport {
    pub pass: bool,
    /// `(axis, n, G(o, n e_axis))` for odd `n < L/2`, as decimal strings.
    pub chain: Vec<(usize, usize, String)>,
    pub bound: String,
    pub max_odd: String,
    pub witness: Option<String>,
}

/// For `rho = 0`: `G(o, n e_i)` nonincreasing over odd `n < L/2`, equal
/// across axes, and `G(o, z) <= 1/(dN)` at every odd `z`.
pub fn monotonicity_check(sys: &PermSystem, n: u32) -> Result<MonotonicityReport> {
    let t = sys.torus();
    let g = sys.two_point_table(n, &Rational::zero())?;
    let bound = Rational::new(BigInt::one(), BigInt::from(t.d() as u64 * n as u64));
    let mut witness = None;
    let mut chain = Vec::new();
    let mut first_axis: Vec<Rational> = Vec::new();
    for axis in 1..=t.d() {
        let mut prev: Option<Rational> = None;
        let mut vals = Vec::new();
        for k in (1..t.l() / 2).step_by(2) {
            let x = t.site_index(&{
                let mut c = vec![0i64; t.d()];
                c[axis - 1] = k as i64;
                c
            })?;
            let v = g[x].clone();
            if let Some(p) = &prev {
                if &v > p && witness.is_none() {
                    witness = Some(format!("G(o,{k}e_{axis}) = {v} exceeds previous {p}"));
                }
            }
            chain.push((axis, k, v.to_string()));
            vals.push(v.clone());
            prev = Some(v);
        }
        if axis == 1 {
            first_axis = vals;
        } else if vals != first_axis && witness.is_none() {
            witness = Some(format!("axis {axis} profile differs from axis 1"));
        }
    }
    let mut max_odd = Rational::zero();
    for x in 0..t.n() {
        if t.is_odd(x) {
            if g[x] > max_odd {
                max_odd = g[x].clone();
            }
            if g[x] > bound && witness.is_none() {
                witness = Some(format!("G(o,{:?}) = {} exceeds 1/(dN)", t.coords(x), g[x]));
            }
        }
    }
    Ok(MonotonicityReport {
        pass: witness.is_none(),
        chain,
        bound: bound.to_string(),
        max_odd: max_odd.to_string(),
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;

    fn t14() -> Torus {
        Torus::even(1, 4).unwrap()
    }

    #[test]
    fn four_cycle_counts() {
        let all = enumerate_omega_ell(&t14(), 1000).unwrap();
        assert_eq!(all.len(), 9);
        assert!(all.iter().all(|c| c.is_valid(&t14())));
        assert_eq!(all.iter().filter(|c| c.monomers() == 0).count(), 4);
        for c in &all {
            assert_eq!(c.edges() + c.monomers(), 4);
        }
        let w = enumerate_omega_xy(&t14(), 0, 1, 1000).unwrap();
        assert_eq!(w.iter().filter(|c| c.monomers() == 0).count(), 2);
        for c in &w {
            assert!(c.is_valid(&t14()));
            assert_eq!(c.edges() + c.monomers(), 3);
        }
        let deg = enumerate_omega_xy(&t14(), 0, 0, 1000).unwrap();
        let with_o_monomer = all.iter().filter(|c| c.succ[0].is_none()).count();
        assert_eq!(deg.len(), with_o_monomer);
    }

    #[test]
    fn four_cycle_partition() {
        let t = t14();
        assert_eq!(partition_ell(&t, 2, &rint(1)).unwrap(), rint(9));
        assert_eq!(partition_ell(&t, 2, &rint(0)).unwrap(), rint(4));
        assert_eq!(partition_directed(&t, 2, &rint(0), 0, 1).unwrap(), rint(2));
        assert_eq!(partition_directed(&t, 2, &rint(0), 0, 0).unwrap(), rint(0));
        assert_eq!(two_point(&t, 2, &rint(0), 0, 1).unwrap(), ratio(1, 2));
        let y = partition_lambda(&t, 2, &rint(2), None).unwrap();
        assert_eq!(y, rint(16) * partition_ell(&t, 2, &ratio(1, 2)).unwrap());
        let law = PermSystem::new(t).unwrap().target_law(2, &rint(0)).unwrap();
        assert_eq!(law, vec![rint(0), ratio(1, 2), rint(0), ratio(1, 2)]);
    }

    #[test]
    fn translation_covariance() {
        let t = Torus::even(2, 4).unwrap();
        let sys = PermSystem::new(t.clone()).unwrap();
        let c1 = Census::build(&t, Target::Walk(5, 6), DEFAULT_CAP).unwrap();
        let c2 = sys.census(Target::Walk(0, 1)).unwrap();
        assert_eq!(c1.counts, c2.counts);
    }

    #[test]
    fn transfer_matches_enumeration() {
        let t = Torus::even(2, 4).unwrap();
        let en = PermSystem::with_engine(t.clone(), Engine::Enumerate);
        let tm = PermSystem::with_engine(t.clone(), Engine::Transfer);
        for (n, rho) in [(1, ratio(1, 2)), (2, rint(0)), (3, rint(1))] {
            assert_eq!(en.z(Target::Ell, n, &rho).unwrap(), tm.z(Target::Ell, n, &rho).unwrap());
            for x in 0..t.n() {
                let a = en.z(Target::Walk(0, x), n, &rho).unwrap();
                let b = tm.z(Target::Walk(0, x), n, &rho).unwrap();
                assert_eq!(a, b, "x={x} N={n} rho={rho}");
            }
        }
    }
}
