//! Layer decomposition of the torus along axis 1 and the symmetry group of
//! the cross-section acting on layer bitmasks.

use crate::torus::Torus;

/// A layer is the set of sites with fixed first coordinate; it is itself a
/// `(d-1)`-dimensional torus of `W = L^(d-1)` positions.
#[derive(Debug, Clone)]
pub struct Section {
    pub w: usize,
    pub layers: usize,
    /// In-layer neighbours of each position with a larger index.
    pub later: Vec<Vec<usize>>,
    /// In-layer neighbours of each position.
    pub adj: Vec<Vec<usize>>,
}

impl Section {
    pub fn new(t: &Torus) -> Self {
        let w = t.n() / t.l();
        let mut adj = vec![Vec::new(); w];
        for p in 0..w {
            for (k, &q) in t.neighbors(p).iter().enumerate() {
                if k >= 2 {
                    // skip the two e_1 neighbours
                    let q = q % w;
                    if !adj[p].contains(&q) {
                        adj[p].push(q);
                    }
                }
            }
            adj[p].sort_unstable();
        }
        let later = adj
            .iter()
            .enumerate()
            .map(|(p, v)| v.iter().copied().filter(|&q| q > p).collect())
            .collect();
        Section { w, layers: t.l(), later, adj }
    }

    pub fn site(&self, layer: usize, pos: usize) -> usize {
        layer * self.w + pos
    }
}

/// Position permutations induced by translations, axis permutations and
/// reflections of the cross-section torus.
pub fn section_group(t: &Torus) -> Vec<Vec<usize>> {
    let d = t.d();
    let l = t.l();
    let w = t.n() / l;
    let k = d - 1;
    if k == 0 {
        return vec![vec![0]];
    }
    let digits = |p: usize| -> Vec<usize> {
        let mut v = vec![0; k];
        let mut p = p;
        for i in (0..k).rev() {
            v[i] = p % l;
            p /= l;
        }
        v
    };
    let undigits = |v: &[usize]| -> usize { v.iter().fold(0, |acc, &x| acc * l + x) };
    let perms = permutations(k);
    let mut out = Vec::new();
    for perm in &perms {
        for signs in 0..(1usize << k) {
            for shift in 0..w {
                let sh = digits(shift);
                let g: Vec<usize> = (0..w)
                    .map(|p| {
                        let x = digits(p);
                        let y: Vec<usize> = (0..k)
                            .map(|i| {
                                let v = x[perm[i]];
                                let v = if signs >> i & 1 == 1 { (l - v) % l } else { v };
                                (v + sh[i]) % l
                            })
                            .collect();
                        undigits(&y)
                    })
                    .collect();
                out.push(g);
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// All permutations of `0..k`.
pub fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(k - 1) {
        for pos in 0..k {
            let mut q = p.clone();
            q.insert(pos, k - 1);
            out.push(q);
        }
    }
    out
}

/// Lookup tables mapping a bitmask through each group element, 8 bits at a time.
pub struct MaskAction {
    chunks: usize,
    tables: Vec<Vec<u64>>,
}

impl MaskAction {
    pub fn new(group: &[Vec<usize>], w: usize) -> Self {
        let chunks = w.div_ceil(8);
        let tables = group
            .iter()
            .map(|g| {
                let mut tab = vec![0u64; chunks * 256];
                for c in 0..chunks {
                    for byte in 0..256usize {
                        let mut m = 0u64;
                        for b in 0..8 {
                            let p = c * 8 + b;
                            if p < w && byte >> b & 1 == 1 {
                                m |= 1 << g[p];
                            }
                        }
                        tab[c * 256 + byte] = m;
                    }
                }
                tab
            })
            .collect();
        MaskAction { chunks, tables }
    }

    pub fn apply(&self, g: usize, mask: u64) -> u64 {
        let tab = &self.tables[g];
        let mut out = 0;
        for c in 0..self.chunks {
            out |= tab[c * 256 + ((mask >> (8 * c)) & 0xff) as usize];
        }
        out
    }

    /// Orbit representatives (minimal element) with orbit sizes.
    pub fn orbits(&self, w: usize) -> Vec<(u64, u64)> {
        let total = 1u64 << w;
        let mut reps = Vec::new();
        let mut img = Vec::with_capacity(self.tables.len());
        for m in 0..total {
            img.clear();
            let mut minimal = true;
            for g in 0..self.tables.len() {
                let x = self.apply(g, m);
                if x < m {
                    minimal = false;
                    break;
                }
                img.push(x);
            }
            if minimal {
                img.sort_unstable();
                img.dedup();
                reps.push((m, img.len() as u64));
            }
        }
        reps
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_orders() {
        assert_eq!(section_group(&Torus::new(1, 4).unwrap()).len(), 1);
        assert_eq!(section_group(&Torus::new(2, 6).unwrap()).len(), 12);
        assert_eq!(section_group(&Torus::new(3, 4).unwrap()).len(), 128);
    }

    #[test]
    fn group_preserves_adjacency() {
        let t = Torus::new(3, 4).unwrap();
        let s = Section::new(&t);
        for g in section_group(&t) {
            for p in 0..s.w {
                for &q in &s.adj[p] {
                    assert!(s.adj[g[p]].contains(&g[q]));
                }
            }
        }
    }

    #[test]
    fn orbit_sizes_partition() {
        for (d, l) in [(2, 4), (2, 6), (3, 4)] {
            let t = Torus::new(d, l).unwrap();
            let g = section_group(&t);
            let w = t.n() / l;
            let act = MaskAction::new(&g, w);
            let total: u64 = act.orbits(w).iter().map(|x| x.1).sum();
            assert_eq!(total, 1u64 << w);
        }
    }
}
