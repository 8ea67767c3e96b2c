//! Superposition maps between pairs of dimer covers and fully packed
//! loop configurations.
//!
//! `pi2`: a pair of covers of the whole torus (red, blue) becomes a
//! configuration of `Omega^ell` without monomers. A shared dimer is a
//! double edge; every alternating cycle is oriented so that the red dimer
//! at its lowest-index site points out of that site.
//!
//! `pi1`: a red cover of the torus and a blue cover of the torus minus
//! `{o, x}` become a fully packed element of `Omega_{o,x}`. The walk is the
//! alternating path from `o` to `x`; it starts and ends with red dimers.

use super::{enumerate::Target, Census, LoopConfig};
use crate::dimer::{enumerate_covers, DimerCover};
use crate::error::Result;
use crate::torus::Torus;
use serde::Serialize;
use std::collections::HashSet;

fn follow_cycle(succ: &mut [Option<usize>], red: &[usize], blue: &[usize], start: usize) {
    let mut z = start;
    let mut use_red = true;
    loop {
        let next = if use_red { red[z] } else { blue[z] };
        succ[z] = Some(next);
        z = next;
        use_red = !use_red;
        if z == start {
            break;
        }
    }
}

/// Pair of covers of the full torus to a fully packed loop configuration.
pub fn pi2(red: &DimerCover, blue: &DimerCover) -> LoopConfig {
    let (r, b) = (&red.partner, &blue.partner);
    let n = r.len();
    let mut succ = vec![None; n];
    for z in 0..n {
        if succ[z].is_some() {
            continue;
        }
        if r[z] == b[z] {
            succ[z] = Some(r[z]);
            succ[r[z]] = Some(z);
        } else {
            follow_cycle(&mut succ, r, b, z);
        }
    }
    LoopConfig { succ, walk: None }
}

/// Full cover (red) and cover of the torus minus `{o, x}` (blue) to a fully
/// packed walk configuration from `o` to `x`.
pub fn pi1(red: &DimerCover, blue: &DimerCover, x: usize) -> LoopConfig {
    let (r, b) = (&red.partner, &blue.partner);
    let n = r.len();
    let mut succ = vec![None; n];
    let mut z = 0;
    loop {
        let next = r[z];
        succ[z] = Some(next);
        if next == x {
            break;
        }
        succ[next] = Some(b[next]);
        z = b[next];
    }
    let mut done: Vec<bool> = (0..n).map(|z| succ[z].is_some() || z == x).collect();
    for z in 0..n {
        if done[z] {
            continue;
        }
        if r[z] == b[z] {
            succ[z] = Some(r[z]);
            succ[r[z]] = Some(z);
            done[z] = true;
            done[r[z]] = true;
        } else {
            follow_cycle(&mut succ, r, b, z);
            let mut w = z;
            while !done[w] {
                done[w] = true;
                w = succ[w].unwrap();
            }
        }
    }
    LoopConfig { succ, walk: Some((0, x)) }
}

/// Inverse of `pi2` / `pi1`: recovers the red and blue partner arrays.
/// Sites outside the blue cover map to themselves.
pub fn split(c: &LoopConfig) -> (DimerCover, DimerCover) {
    let n = c.succ.len();
    let mut red: Vec<usize> = (0..n).collect();
    let mut blue: Vec<usize> = (0..n).collect();
    let mut done = vec![false; n];
    let pair = |a: usize, b: usize, is_red: bool, red: &mut Vec<usize>, blue: &mut Vec<usize>| {
        let arr = if is_red { red } else { blue };
        arr[a] = b;
        arr[b] = a;
    };
    if let Some((x, y)) = c.walk {
        let mut z = x;
        let mut is_red = true;
        done[z] = true;
        while let Some(s) = c.succ[z] {
            pair(z, s, is_red, &mut red, &mut blue);
            is_red = !is_red;
            z = s;
            done[z] = true;
        }
        debug_assert_eq!(z, y);
    }
    for z in 0..n {
        if done[z] {
            continue;
        }
        let s = c.succ[z].expect("fully packed");
        if c.succ[s] == Some(z) {
            pair(z, s, true, &mut red, &mut blue);
            pair(z, s, false, &mut red, &mut blue);
            done[z] = true;
            done[s] = true;
            continue;
        }
        let mut w = z;
        let mut is_red = true;
        while !done[w] {
            done[w] = true;
            let s = c.succ[w].unwrap();
            pair(w, s, is_red, &mut red, &mut blue);
            is_red = !is_red;
            w = s;
        }
    }
    (DimerCover { partner: red }, DimerCover { partner: blue })
}

#[derive(Debug, Clone, Serialize)]
pub struct BijectionReport {
    pub pass: bool,
    /// `|D|^2` and the number of fully packed loop configurations.
    pub loop_pairs: usize,
    pub loop_packed: u64,
    /// `(x, |D| * |D(o,x)|, fully packed walks o -> x)` for every `x != o`.
    pub walks: Vec<(usize, usize, u64)>,
    pub witness: Option<String>,
}

fn packed(c: &Census) -> u64 {
    c.counts.iter().filter(|e| e.0 == 0).map(|e| e.2).sum()
}

/// Builds both maps on every pair of covers, checks that images are
/// valid, distinct, invert back, and exhaust the fully packed sets.
pub fn bijection_check_dimers(t: &Torus, cap: u64) -> Result<BijectionReport> {
    t.require_even()?;
    let full = enumerate_covers(t, &[], cap as usize)?;
    let mut witness = None;
    let note = |w: &mut Option<String>, s: String| {
        if w.is_none() {
            *w = Some(s);
        }
    };
    let mut seen = HashSet::new();
    for red in &full {
        for blue in &full {
            let c = pi2(red, blue);
            if !c.is_valid(t) || c.monomers() != 0 {
                note(&mut witness, format!("invalid image {:?}", c.succ));
            }
            let (r, b) = split(&c);
            if &r != red || &b != blue {
                note(&mut witness, format!("round trip failed for {:?}", c.succ));
            }
            seen.insert(c.succ);
        }
    }
    let loop_packed = packed(&Census::build(t, Target::Ell, cap)?);
    if seen.len() != full.len() * full.len() || seen.len() as u64 != loop_packed {
        note(
            &mut witness,
            format!("|D|^2 = {}, distinct images {}, packed {}", full.len() * full.len(), seen.len(), loop_packed),
        );
    }
    let mut walks = Vec::new();
    for x in 1..t.n() {
        let blues = if t.is_odd(x) { enumerate_covers(t, &[0, x], cap as usize)? } else { Vec::new() };
        let mut seen = HashSet::new();
        for red in &full {
            for blue in &blues {
                let c = pi1(red, blue, x);
                if !c.is_valid(t) || c.monomers() != 0 {
                    note(&mut witness, format!("invalid walk image {:?}", c.succ));
                }
                let (r, b) = split(&c);
                if &r != red || &b != blue {
                    note(&mut witness, format!("walk round trip failed for {:?}", c.succ));
                }
                seen.insert(c.succ);
            }
        }
        let count = packed(&Census::build(t, Target::Walk(0, x), cap)?);
        let pairs = full.len() * blues.len();
        if seen.len() != pairs || pairs as u64 != count {
            note(&mut witness, format!("x = {x}: pairs {pairs}, distinct {}, packed walks {count}", seen.len()));
        }
        walks.push((x, pairs, count));
    }
    Ok(BijectionReport { pass: witness.is_none(), loop_pairs: full.len() * full.len(), loop_packed, walks, witness })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_of_four() {
        let t = Torus::even(1, 4).unwrap();
        let r = bijection_check_dimers(&t, 1 << 20).unwrap();
        assert!(r.pass, "{:?}", r.witness);
        assert_eq!(r.loop_pairs, 4);
        assert_eq!(r.loop_packed, 4);
    }
}
