//! Memoised backtracking counter: repeatedly match the first unmatched site.

use super::section::{section_group, MaskAction, Section};
use crate::error::{Error, Result};
use crate::scalar::Count;
use crate::torus::Torus;
use rustc_hash::FxHashMap;

struct Ctx<'a> {
    t: &'a Torus,
    full: u128,
    /// Sites of layer 0 may not use their `-e_1` edge (set when the wrap
    /// dimers are fixed up front).
    forbid_wrap: bool,
    w: usize,
    memo: FxHashMap<u128, u128>,
    overflow: bool,
}

impl Ctx<'_> {
    fn count(&mut self, mask: u128) -> u128 {
        if mask == self.full {
            return 1;
        }
        if let Some(&v) = self.memo.get(&mask) {
            return v;
        }
        let i = (!mask).trailing_zeros() as usize;
        let mut total: u128 = 0;
        let nb = self.t.neighbors(i);
        for (k, &j) in nb.iter().enumerate() {
            if mask >> j & 1 == 1 {
                continue;
            }
            if self.forbid_wrap && i < self.w && k == 1 {
                continue;
            }
            let sub = self.count(mask | 1 << i | 1 << j);
            let (s, o) = total.overflowing_add(sub);
            self.overflow |= o;
            total = s;
        }
        self.memo.insert(mask, total);
        total
    }
}

fn removed_mask(removed: &[usize]) -> u128 {
    removed.iter().fold(0u128, |m, &s| m | 1 << s)
}

/// `|D(removed)|` by depth-first matching of the lowest unmatched site.
///
/// Partial states are memoised on the set of matched sites. For `d >= 3`
/// the dimers crossing between the last and the first layer are fixed
/// first, which keeps every memo table small; with nothing removed the
/// choices are reduced modulo the cross-section symmetries.
pub fn count(t: &Torus, removed: &[usize]) -> Result<Count> {
    if t.n() > 128 {
        return Err(Error::Infeasible(format!(
            "backtracking handles at most 128 sites, got {}",
            t.n()
        )));
    }
    let full = if t.n() == 128 { u128::MAX } else { (1u128 << t.n()) - 1 };
    let rm = removed_mask(removed);
    if t.d() < 3 {
        let mut ctx = Ctx { t, full, forbid_wrap: false, w: 0, memo: FxHashMap::default(), overflow: false };
        let v = ctx.count(rm);
        if ctx.overflow {
            return Err(Error::Infeasible("count overflowed 128 bits".into()));
        }
        return Ok(Count::from(v));
    }
    let sec = Section::new(t);
    let w = sec.w;
    if w > 24 {
        return Err(Error::Infeasible(format!("cross-section of {w} sites too large")));
    }
    let wrap_image = |a: u64| -> Option<u128> {
        let mut m = 0u128;
        for p in 0..w {
            if a >> p & 1 == 1 {
                let top = t.neighbors(p)[1];
                m |= 1 << p | 1 << top;
            }
        }
        if m & rm != 0 {
            None
        } else {
            Some(m)
        }
    };
    let choices: Vec<(u64, u64)> = if removed.is_empty() {
        MaskAction::new(&section_group(t), w).orbits(w)
    } else {
        (0..1u64 << w).map(|a| (a, 1)).collect()
    };
    let mut total = Count::default();
    let mut ctx = Ctx { t, full, forbid_wrap: true, w, memo: FxHashMap::default(), overflow: false };
    for (a, mult) in choices {
        let Some(m) = wrap_image(a) else { continue };
        ctx.memo.clear();
        let v = ctx.count(rm | m);
        total += Count::from(v) * Count::from(mult);
    }
    if ctx.overflow {
        return Err(Error::Infeasible("count overflowed 128 bits".into()));
    }
    Ok(total)
}

/// Explicit list of covers as partner arrays (`usize::MAX` on removed
/// sites), in the same canonical order as the counter. Intended for small
/// instances.
pub fn enumerate(t: &Torus, removed: &[usize], cap: usize) -> Result<Vec<Vec<usize>>> {
    let n = t.n();
    let mut partner = vec![usize::MAX; n];
    let mut used = vec![false; n];
    for &r in removed {
        used[r] = true;
    }
    let mut out = Vec::new();
    fn rec(
        t: &Torus,
        used: &mut Vec<bool>,
        partner: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
        cap: usize,
    ) -> bool {
        let Some(i) = used.iter().position(|u| !u) else {
            out.push(partner.clone());
            return out.len() <= cap;
        };
        for &j in t.neighbors(i) {
            if used[j] || (j == i) {
                continue;
            }
            // neighbours of a site are distinct for L >= 4
            used[i] = true;
            used[j] = true;
            partner[i] = j;
            partner[j] = i;
            let ok = rec(t, used, partner, out, cap);
            used[i] = false;
            used[j] = false;
            partner[i] = usize::MAX;
            partner[j] = usize::MAX;
            if !ok {
                return false;
            }
        }
        true
    }
    if !rec(t, &mut used, &mut partner, &mut out, cap) {
        return Err(Error::Infeasible(format!("more than {cap} covers")));
    }
    Ok(out)
}
