//! Layer-by-layer profile dynamic programming.
//!
//! The profile between two consecutive layers is the set of cross-section
//! positions carrying a dimer along `e_1`. One layer is filled site by site
//! ("broken profile"), so a layer step costs `O(W 2^W)`.

use super::section::{section_group, MaskAction, Section};
use crate::error::{Error, Result};
use crate::scalar::Count;
use crate::torus::Torus;

/// Largest cross-section handled (profile vectors of `2^W` entries).
pub const MAX_SECTION: usize = 22;

struct Acc {
    overflow: bool,
}

impl Acc {
    #[inline]
    fn add(&mut self, a: &mut u128, b: u128) {
        let (s, o) = a.overflowing_add(b);
        self.overflow |= o;
        *a = s;
    }
}

/// Applies one layer: `v` indexed by incoming profile, result indexed by
/// outgoing profile. `blocked` marks removed positions of this layer.
fn layer(sec: &Section, v: &[u128], blocked: u64, acc: &mut Acc) -> Vec<u128> {
    let size = v.len();
    let mut cur: Vec<u128> = v.to_vec();
    for (m, x) in cur.iter_mut().enumerate() {
        if m as u64 & blocked != 0 {
            *x = 0;
        }
    }
    let mut next = vec![0u128; size];
    for s in 0..sec.w {
        next.iter_mut().for_each(|x| *x = 0);
        let bit = 1usize << s;
        for (mask, &val) in cur.iter().enumerate() {
            if val == 0 {
                continue;
            }
            if blocked >> s & 1 == 1 {
                acc.add(&mut next[mask], val);
                continue;
            }
            if mask & bit != 0 {
                acc.add(&mut next[mask ^ bit], val);
                continue;
            }
            acc.add(&mut next[mask | bit], val);
            for &q in &sec.later[s] {
                let qb = 1usize << q;
                if mask & qb == 0 && blocked >> q & 1 == 0 {
                    acc.add(&mut next[mask | qb], val);
                }
            }
        }
        std::mem::swap(&mut cur, &mut next);
    }
    cur
}

/// `|D(removed)|` as the trace of the product of layer transfer matrices.
///
/// With nothing removed all layers coincide and the matrix `T` is
/// symmetric, so `tr T^L = sum_a |row_a(T^{L/2})|^2`, and rows are needed
/// only for one profile per symmetry orbit.
pub fn count(t: &Torus, removed: &[usize]) -> Result<Count> {
    t.require_even()?;
    let sec = Section::new(t);
    let w = sec.w;
    if w > MAX_SECTION {
        return Err(Error::Infeasible(format!(
            "profile table of 2^{w} entries (~{} MiB per layer vector) exceeds the limit 2^{MAX_SECTION}",
            (16u128 << w) >> 20
        )));
    }
    let size = 1usize << w;
    let mut blocked = vec![0u64; sec.layers];
    for &r in removed {
        blocked[r / w] |= 1 << (r % w);
    }
    let mut acc = Acc { overflow: false };
    let mut total = Count::default();
    if removed.is_empty() {
        let act = MaskAction::new(&section_group(t), w);
        for (a, mult) in act.orbits(w) {
            let mut v = vec![0u128; size];
            v[a as usize] = 1;
            for _ in 0..sec.layers / 2 {
                v = layer(&sec, &v, 0, &mut acc);
            }
            let mut sq = Count::default();
            for &x in &v {
                if x != 0 {
                    let xb = Count::from(x);
                    sq += &xb * &xb;
                }
            }
            total += sq * Count::from(mult);
        }
    } else {
        for a in 0..size {
            if a as u64 & blocked[0] != 0 {
                continue;
            }
            let mut v = vec![0u128; size];
            v[a] = 1;
            for b in &blocked {
                v = layer(&sec, &v, *b, &mut acc);
            }
            total += Count::from(v[a]);
        }
    }
    if acc.overflow {
        return Err(Error::Infeasible("profile value overflowed 128 bits".into()));
    }
    Ok(total)
}
