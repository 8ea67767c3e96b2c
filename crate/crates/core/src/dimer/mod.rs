//! Dimer covers of the torus with a set of sites removed, and the exact
//! monomer-monomer correlation `Xi_L(x) = |D({o,x})| / |D(empty)|`.

pub mod backtrack;
pub mod section;
pub mod transfer;

use crate::error::{Error, Result};
use crate::scalar::{count_to_rational, Count, Rational};
use crate::torus::Torus;
use num_traits::Zero;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Counter {
    Backtracking,
    Transfer,
}

fn normalize(t: &Torus, removed: &[usize]) -> Result<Vec<usize>> {
    t.require_even()?;
    let mut r = removed.to_vec();
    for &s in &r {
        t.check_site(s)?;
    }
    r.sort_unstable();
    r.dedup();
    Ok(r)
}

/// True when the removed set leaves unequal numbers of odd and even sites,
/// in which case no cover exists.
fn parity_blocked(t: &Torus, removed: &[usize]) -> bool {
    let odd = removed.iter().filter(|&&s| t.is_odd(s)).count();
    2 * odd != removed.len()
}

/// `|D(removed)|` with the chosen counter.
pub fn count_covers(t: &Torus, removed: &[usize], counter: Counter) -> Result<Count> {
    let r = normalize(t, removed)?;
    if parity_blocked(t, &r) {
        return Ok(Count::zero());
    }
    match counter {
        Counter::Backtracking => backtrack::count(t, &r),
        Counter::Transfer => transfer::count(t, &r),
    }
}

pub fn count_covers_backtracking(t: &Torus, removed: &[usize]) -> Result<Count> {
    count_covers(t, removed, Counter::Backtracking)
}

pub fn count_covers_transfer(t: &Torus, removed: &[usize]) -> Result<Count> {
    count_covers(t, removed, Counter::Transfer)
}

/// Faster counter for the geometry at hand.
pub fn default_counter(t: &Torus) -> Counter {
    if t.d() == 1 {
        Counter::Backtracking
    } else {
        Counter::Transfer
    }
}

/// Element of `D(M)` as a partner array; removed sites map to themselves.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DimerCover {
    pub partner: Vec<usize>,
}

impl DimerCover {
    pub fn is_valid(&self, t: &Torus, removed: &[usize]) -> bool {
        (0..t.n()).all(|x| {
            let p = self.partner[x];
            if removed.contains(&x) {
                p == x
            } else {
                p != x && t.are_adjacent(x, p) && self.partner[p] == x && !removed.contains(&p)
            }
        })
    }

    pub fn contains(&self, a: usize, b: usize) -> bool {
        self.partner[a] == b && a != b
    }
}

/// All covers of `D(removed)`, for small instances (at most `cap`).
pub fn enumerate_covers(t: &Torus, removed: &[usize], cap: usize) -> Result<Vec<DimerCover>> {
    let r = normalize(t, removed)?;
    let raw = backtrack::enumerate(t, &r, cap)?;
    Ok(raw
        .into_iter()
        .map(|mut p| {
            for &s in &r {
                p[s] = s;
            }
            DimerCover { partner: p }
        })
        .collect())
}

/// `Xi_L(x)` as an exact rational.
pub fn monomer_correlation(t: &Torus, x: usize, counter: Counter) -> Result<Rational> {
    t.check_site(x)?;
    let z = count_covers(t, &[], counter)?;
    if z.is_zero() {
        return Err(Error::DivisionByZero("torus has no dimer cover"));
    }
    if x == t.origin() {
        return Ok(Rational::zero());
    }
    let zx = count_covers(t, &[t.origin(), x], counter)?;
    Ok(count_to_rational(&zx) / count_to_rational(&z))
}

/// `Xi_L(x)` for every site, evaluating one site per point-group orbit.
pub fn correlation_table(t: &Torus, counter: Counter) -> Result<Vec<Rational>> {
    let z = count_covers(t, &[], counter)?;
    if z.is_zero() {
        return Err(Error::DivisionByZero("torus has no dimer cover"));
    }
    let zq = count_to_rational(&z);
    let mut cache: std::collections::HashMap<Vec<i64>, Rational> = Default::default();
    let mut out = Vec::with_capacity(t.n());
    for x in 0..t.n() {
        let key = t.orbit_key(x);
        if let Some(v) = cache.get(&key) {
            out.push(v.clone());
            continue;
        }
        let v = if x == t.origin() {
            Rational::zero()
        } else {
            count_to_rational(&count_covers(t, &[t.origin(), x], counter)?) / &zq
        };
        cache.insert(key, v.clone());
        out.push(v);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;

    #[test]
    fn four_cycle() {
        let t = Torus::even(1, 4).unwrap();
        for c in [Counter::Backtracking, Counter::Transfer] {
            assert_eq!(count_covers(&t, &[], c).unwrap(), Count::from(2u32));
            assert_eq!(monomer_correlation(&t, 1, c).unwrap(), ratio(1, 2));
        }
    }

    #[test]
    fn square_four() {
        let t = Torus::even(2, 4).unwrap();
        let b = count_covers_backtracking(&t, &[]).unwrap();
        let tr = count_covers_transfer(&t, &[]).unwrap();
        assert_eq!(b, tr);
        assert_eq!(b, Count::from(272u32));
        let x11 = t.site_index(&[1, 1]).unwrap();
        assert!(count_covers_backtracking(&t, &[0, x11]).unwrap().is_zero());
        assert_eq!(monomer_correlation(&t, t.unit(1), Counter::Transfer).unwrap(), ratio(1, 4));
    }

    #[test]
    fn enumeration_matches_count() {
        let t = Torus::even(2, 4).unwrap();
        let all = enumerate_covers(&t, &[], 10_000).unwrap();
        assert_eq!(all.len(), 272);
        assert!(all.iter().all(|c| c.is_valid(&t, &[])));
        let e = t.unit(2);
        let some = enumerate_covers(&t, &[0, e], 10_000).unwrap();
        assert!(some.iter().all(|c| c.is_valid(&t, &[0, e])));
        assert_eq!(some.len() * 4, 272);
    }

    #[test]
    fn removed_sets_agree() {
        for (d, l) in [(1usize, 6usize), (2, 4), (2, 6)] {
            let t = Torus::even(d, l).unwrap();
            for x in 0..t.n() {
                let a = count_covers_backtracking(&t, &[0, x]).unwrap();
                let b = count_covers_transfer(&t, &[0, x]).unwrap();
                assert_eq!(a, b, "d={d} L={l} x={x}");
            }
        }
    }
}
