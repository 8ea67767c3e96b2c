//! Depth-first enumeration of lattice permutations.
//!
//! A configuration is encoded as an injective map `sigma` on sites:
//! `sigma(z) = z` marks a monomer, `sigma(z) = y` a directed edge `z -> y`.
//! For a walk from `x` to `y` the map is a bijection `T \ {y} -> T \ {x}`.

use crate::error::{Error, Result};
use crate::torus::Torus;

/// Which configuration space is enumerated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Target {
    /// `Omega^ell`: monomers, double edges and loops only.
    Ell,
    /// `Omega_{x,y}`: one walk from `x` to `y` (degenerate when `x = y`).
    Walk(usize, usize),
}

pub const NONE: usize = usize::MAX;

struct Search<'a> {
    t: &'a Torus,
    target: Target,
    sigma: Vec<usize>,
    used: Vec<bool>,
    /// Targets whose last possible preimage is the given site.
    deadline: Vec<Vec<usize>>,
    leaves: u64,
    cap: u64,
}

impl Search<'_> {
    fn in_domain(&self, z: usize) -> bool {
        match self.target {
            Target::Ell => true,
            Target::Walk(x, y) => z != y && !(x == y && z == x),
        }
    }

    fn in_codomain(&self, z: usize) -> bool {
        match self.target {
            Target::Ell => true,
            Target::Walk(x, _) => z != x,
        }
    }

    fn may_fix(&self, z: usize) -> bool {
        match self.target {
            Target::Ell => true,
            Target::Walk(x, _) => z != x,
        }
    }

    fn run<F: FnMut(&[usize])>(&mut self, z: usize, f: &mut F) -> bool {
        if z == self.t.n() {
            self.leaves += 1;
            if self.leaves > self.cap {
                return false;
            }
            f(&self.sigma);
            return true;
        }
        if !self.in_domain(z) {
            return self.check_and_recurse(z, f);
        }
        let mut cands = [NONE; 16];
        let mut k = 0;
        if self.may_fix(z) && !self.used[z] {
            cands[k] = z;
            k += 1;
        }
        for &j in self.t.neighbors(z) {
            if !self.used[j] && self.in_codomain(j) {
                cands[k] = j;
                k += 1;
            }
        }
        for &j in &cands[..k] {
            self.used[j] = true;
            self.sigma[z] = j;
            let ok = self.check_and_recurse(z, f);
            self.used[j] = false;
            self.sigma[z] = NONE;
            if !ok {
                return false;
            }
        }
        true
    }

    fn check_and_recurse<F: FnMut(&[usize])>(&mut self, z: usize, f: &mut F) -> bool {
        if self.deadline[z].iter().any(|&t| !self.used[t]) {
            return true;
        }
        self.run(z + 1, f)
    }
}

/// Calls `f` on the `sigma` array of every configuration of `target`, in
/// lexicographic order of sites and candidate lists. Fails once more than
/// `cap` configurations have been produced.
pub fn for_each<F: FnMut(&[usize])>(t: &Torus, target: Target, cap: u64, mut f: F) -> Result<u64> {
    t.require_even()?;
    if let Target::Walk(x, y) = target {
        t.check_site(x)?;
        t.check_site(y)?;
    }
    let n = t.n();
    let mut s = Search {
        t,
        target,
        sigma: vec![NONE; n],
        used: vec![false; n],
        deadline: vec![Vec::new(); n],
        leaves: 0,
        cap,
    };
    if let Target::Walk(x, y) = target {
        if x == y {
            s.used[x] = true;
        }
    }
    // every codomain site must be hit; record when its last chance passes
    for tgt in 0..n {
        if !s.in_codomain(tgt) || s.used[tgt] {
            continue;
        }
        let mut last: Option<usize> = None;
        let mut consider = |z: usize| {
            last = Some(last.map_or(z, |l: usize| l.max(z)));
        };
        if s.in_domain(tgt) && s.may_fix(tgt) {
            consider(tgt);
        }
        for &z in t.neighbors(tgt) {
            if s.in_domain(z) {
                consider(z);
            }
        }
        match last {
            Some(l) => s.deadline[l].push(tgt),
            None => return Ok(0),
        }
    }
    if !s.run(0, &mut f) {
        return Err(Error::Infeasible(format!("enumeration exceeded the cap of {cap} configurations")));
    }
    Ok(s.leaves)
}

/// Statistics of a `sigma` array: `(monomers, loops + double edges)`.
/// The degenerate walk site is not a monomer.
pub fn stats(sigma: &[usize], target: Target, seen: &mut Vec<bool>) -> (usize, usize) {
    let n = sigma.len();
    seen.clear();
    seen.resize(n, false);
    let mut mono = 0;
    let mut loops = 0;
    if let Target::Walk(x, y) = target {
        if x != y {
            let mut z = x;
            while z != y {
                seen[z] = true;
                z = sigma[z];
            }
        }
        seen[y] = true;
    }
    for z in 0..n {
        if seen[z] {
            continue;
        }
        if sigma[z] == z {
            mono += 1;
            seen[z] = true;
            continue;
        }
        loops += 1;
        let mut w = z;
        while !seen[w] {
            seen[w] = true;
            w = sigma[w];
        }
    }
    (mono, loops)
}
