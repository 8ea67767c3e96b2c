//! Torus geometry, the extended torus with virtual vertices, and reflections
//! through edge planes.
//!
//! Sites are numbered lexicographically by the residues `x_i mod L` in
//! `[0, L)`, axis 1 most significant, so the origin is site 0 and the
//! sites with a fixed first coordinate form a contiguous layer.

use crate::error::{Error, Result};
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Torus {
    d: usize,
    l: usize,
    n: usize,
    #[serde(skip)]
    strides: Vec<usize>,
    #[serde(skip)]
    nbrs: Vec<usize>,
}

impl Torus {
    /// Geometry for any `L >= 4`. Odd sides are allowed here but rejected by
    /// every operation that needs a bipartite torus.
    pub fn new(d: usize, l: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::Dimension(d, "need d >= 1"));
        }
        if l < 4 {
            return Err(Error::SideTooSmall(l));
        }
        let n = l.checked_pow(d as u32).ok_or(Error::Dimension(d, "L^d overflows"))?;
        let mut strides = vec![1usize; d];
        for i in (0..d.saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * l;
        }
        let mut t = Torus { d, l, n, strides, nbrs: Vec::with_capacity(2 * d * n) };
        for s in 0..n {
            for i in 0..d {
                let x = t.digit(s, i);
                let up = (x + 1) % l;
                let down = (x + l - 1) % l;
                t.nbrs.push(s - x * t.strides[i] + up * t.strides[i]);
                t.nbrs.push(s - x * t.strides[i] + down * t.strides[i]);
            }
        }
        Ok(t)
    }

    /// Even-side torus, as required by every statement about dimers and
    /// lattice permutations.
    pub fn even(d: usize, l: usize) -> Result<Self> {
        if l < 4 {
            return Err(Error::SideTooSmall(l));
        }
        if l % 2 == 1 {
            return Err(Error::OddSide(l));
        }
        Self::new(d, l)
    }

    pub fn d(&self) -> usize {
        self.d
    }
    pub fn l(&self) -> usize {
        self.l
    }
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn is_bipartite(&self) -> bool {
        self.l % 2 == 0
    }
    pub fn require_even(&self) -> Result<()> {
        if self.is_bipartite() {
            Ok(())
        } else {
            Err(Error::OddSide(self.l))
        }
    }

    pub fn origin(&self) -> usize {
        0
    }

    /// Residue of coordinate `i` (0-based axis) in `[0, L)`.
    #[inline]
    pub fn digit(&self, s: usize, i: usize) -> usize {
        (s / self.strides[i]) % self.l
    }

    pub fn stride(&self, i: usize) -> usize {
        self.strides[i]
    }

    pub fn digits(&self, s: usize) -> Vec<usize> {
        (0..self.d).map(|i| self.digit(s, i)).collect()
    }

    pub fn from_digits(&self, digits: &[usize]) -> usize {
        digits.iter().zip(&self.strides).map(|(x, s)| (x % self.l) * s).sum()
    }

    /// Representative coordinate in `(-L/2, L/2]`.
    pub fn centered(&self, digit: usize) -> i64 {
        let l = self.l as i64;
        let x = digit as i64;
        if 2 * x > l {
            x - l
        } else {
            x
        }
    }

    pub fn coords(&self, s: usize) -> Vec<i64> {
        (0..self.d).map(|i| self.centered(self.digit(s, i))).collect()
    }

    pub fn site_index(&self, coords: &[i64]) -> Result<usize> {
        if coords.len() != self.d {
            return Err(Error::CoordLength { expected: self.d, got: coords.len() });
        }
        let l = self.l as i64;
        Ok(coords
            .iter()
            .zip(&self.strides)
            .map(|(&x, &s)| (x.rem_euclid(l) as usize) * s)
            .sum())
    }

    /// Unit vector `e_i` for a 1-based axis.
    pub fn unit(&self, axis: usize) -> usize {
        self.strides[axis - 1]
    }

    pub fn check_site(&self, s: usize) -> Result<()> {
        if s < self.n {
            Ok(())
        } else {
            Err(Error::BadSite(s))
        }
    }

    /// The `2d` neighbours, ordered `+e_1, -e_1, +e_2, -e_2, ...`.
    #[inline]
    pub fn neighbors(&self, s: usize) -> &[usize] {
        &self.nbrs[2 * self.d * s..2 * self.d * (s + 1)]
    }

    pub fn are_adjacent(&self, a: usize, b: usize) -> bool {
        self.neighbors(a).contains(&b)
    }

    /// Sum of coordinates mod 2 (graph-distance parity for even L).
    pub fn parity(&self, s: usize) -> usize {
        (0..self.d).map(|i| self.digit(s, i)).sum::<usize>() % 2
    }

    pub fn is_odd(&self, s: usize) -> bool {
        self.parity(s) == 1
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        let mut s = 0;
        for i in 0..self.d {
            s += ((self.digit(a, i) + self.digit(b, i)) % self.l) * self.strides[i];
        }
        s
    }

    /// Displacement `a - b`.
    pub fn sub(&self, a: usize, b: usize) -> usize {
        let mut s = 0;
        for i in 0..self.d {
            s += ((self.digit(a, i) + self.l - self.digit(b, i)) % self.l) * self.strides[i];
        }
        s
    }

    pub fn neg(&self, a: usize) -> usize {
        self.sub(0, a)
    }

    /// Undirected edges `{x, x + e_i}`, each once, ordered by `(x, i)`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut v = Vec::with_capacity(self.d * self.n);
        for x in 0..self.n {
            for i in 0..self.d {
                v.push((x, self.nbrs[2 * self.d * x + 2 * i]));
            }
        }
        v
    }

    /// Key identifying the orbit of `s` under the point group fixing the
    /// origin (axis permutations and sign flips).
    pub fn orbit_key(&self, s: usize) -> Vec<i64> {
        let mut k: Vec<i64> = self.coords(s).iter().map(|x| x.abs()).collect();
        k.sort_unstable();
        k
    }

    /// Whether `s` lies on the `e_1` axis (`x_2 = ... = x_d = 0`).
    pub fn on_first_axis(&self, s: usize) -> bool {
        (1..self.d).all(|i| self.digit(s, i) == 0)
    }
}

/// The torus with one virtual vertex `x + e_{d+1}` stacked on every site.
/// Virtual vertex of site `x` has id `n + x`.
#[derive(Debug, Clone)]
pub struct ExtTorus {
    base: Torus,
}

/// Edge of the extended torus. Horizontal edges have id `x*d + i` for
/// `{x, x+e_{i+1}}`; the vertical edge above `x` has id `n*d + x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct EdgeId(pub usize);

impl ExtTorus {
    pub fn new(base: Torus) -> Self {
        ExtTorus { base }
    }
    pub fn base(&self) -> &Torus {
        &self.base
    }
    pub fn vertex_count(&self) -> usize {
        2 * self.base.n
    }
    pub fn edge_count(&self) -> usize {
        (self.base.d + 1) * self.base.n
    }
    pub fn is_virtual(&self, v: usize) -> bool {
        v >= self.base.n
    }
    pub fn virtual_of(&self, x: usize) -> usize {
        self.base.n + x
    }
    pub fn original_of(&self, v: usize) -> usize {
        v % self.base.n
    }
    pub fn vertical_edge(&self, x: usize) -> EdgeId {
        EdgeId(self.base.n * self.base.d + (x % self.base.n))
    }
    pub fn is_vertical(&self, e: EdgeId) -> bool {
        e.0 >= self.base.n * self.base.d
    }
    pub fn horizontal_edge(&self, x: usize, axis0: usize) -> EdgeId {
        EdgeId(x * self.base.d + axis0)
    }

    pub fn endpoints(&self, e: EdgeId) -> (usize, usize) {
        let n = self.base.n;
        let d = self.base.d;
        if e.0 >= n * d {
            let x = e.0 - n * d;
            (x, n + x)
        } else {
            let x = e.0 / d;
            let i = e.0 % d;
            (x, self.base.neighbors(x)[2 * i])
        }
    }

    /// Edges incident to a vertex of the extended torus.
    pub fn incident(&self, v: usize) -> Vec<EdgeId> {
        let n = self.base.n;
        let d = self.base.d;
        if v >= n {
            return vec![self.vertical_edge(v - n)];
        }
        let mut out = Vec::with_capacity(2 * d + 1);
        for i in 0..d {
            out.push(EdgeId(v * d + i));
            let back = self.base.neighbors(v)[2 * i + 1];
            out.push(EdgeId(back * d + i));
        }
        out.push(self.vertical_edge(v));
        out
    }

    pub fn degree(&self, v: usize) -> usize {
        if self.is_virtual(v) {
            1
        } else {
            2 * self.base.d + 1
        }
    }

    /// Neighbours of `v` in the extended torus.
    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        self.incident(v)
            .into_iter()
            .map(|e| {
                let (a, b) = self.endpoints(e);
                if a == v {
                    b
                } else {
                    a
                }
            })
            .collect()
    }

    pub fn other_end(&self, e: EdgeId, v: usize) -> usize {
        let (a, b) = self.endpoints(e);
        if a == v {
            b
        } else {
            a
        }
    }
}

/// Reflection through the hyperplane orthogonal to `e_axis` lying halfway
/// between the layers `x_axis = m` and `x_axis = m + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Reflection {
    /// 1-based axis.
    pub axis: usize,
    /// Plane sits at `u = m + 1/2`.
    pub m: i64,
}

impl Reflection {
    pub fn new(t: &Torus, axis: usize, m: i64) -> Result<Self> {
        if axis == 0 || axis > t.d() {
            return Err(Error::BadAxis(axis, t.d()));
        }
        t.require_even()?;
        Ok(Reflection { axis, m: m.rem_euclid(t.l() as i64) })
    }

    /// All `d * L/2` distinct edge planes (planes `m` and `m + L/2`
    /// induce the same map).
    pub fn all(t: &Torus) -> Vec<Reflection> {
        let mut v = Vec::new();
        for axis in 1..=t.d() {
            for m in 0..(t.l() / 2) as i64 {
                v.push(Reflection { axis, m });
            }
        }
        v
    }

    pub fn reflect(&self, t: &Torus, s: usize) -> usize {
        let l = t.l() as i64;
        let i = self.axis - 1;
        let x = t.digit(s, i) as i64;
        let y = (2 * self.m + 1 - x).rem_euclid(l) as usize;
        s - t.digit(s, i) * t.stride(i) + y * t.stride(i)
    }

    /// Reflection on extended-torus vertices (virtual to virtual).
    pub fn reflect_ext(&self, e: &ExtTorus, v: usize) -> usize {
        let n = e.base().n();
        if v >= n {
            n + self.reflect(e.base(), v - n)
        } else {
            self.reflect(e.base(), v)
        }
    }

    pub fn reflect_edge(&self, e: &ExtTorus, id: EdgeId) -> EdgeId {
        let (a, b) = e.endpoints(id);
        let (ra, rb) = (self.reflect_ext(e, a), self.reflect_ext(e, b));
        if e.is_vertical(id) {
            return e.vertical_edge(ra);
        }
        let t = e.base();
        let d = t.d();
        for i in 0..d {
            if t.neighbors(ra)[2 * i] == rb {
                return e.horizontal_edge(ra, i);
            }
            if t.neighbors(rb)[2 * i] == ra {
                return e.horizontal_edge(rb, i);
            }
        }
        unreachable!("reflection preserves adjacency")
    }

    /// Whether an original site lies in the positive half `{m+1, ..., m+L/2}`.
    pub fn in_plus(&self, t: &Torus, s: usize) -> bool {
        let l = t.l() as i64;
        let x = t.digit(s, self.axis - 1) as i64;
        ((x - self.m - 1).rem_euclid(l) as usize) < t.l() / 2
    }

    pub fn in_plus_ext(&self, e: &ExtTorus, v: usize) -> bool {
        self.in_plus(e.base(), e.original_of(v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_roundtrip_and_origin() {
        let t = Torus::new(2, 4).unwrap();
        assert_eq!(t.site_index(&[0, 0]).unwrap(), 0);
        assert_eq!(t.site_index(&[4, 0]).unwrap(), 0);
        for s in 0..t.n() {
            assert_eq!(t.site_index(&t.coords(s)).unwrap(), s);
            for &c in &t.coords(s) {
                assert!(c > -2 && c <= 2);
            }
        }
        assert!(t.site_index(&[0]).is_err());
    }

    #[test]
    fn bijection_d3() {
        let t = Torus::new(3, 4).unwrap();
        let mut seen = std::collections::HashSet::new();
        for a in -1..=2 {
            for b in -1..=2 {
                for c in -1..=2 {
                    seen.insert(t.site_index(&[a, b, c]).unwrap());
                }
            }
        }
        assert_eq!(seen.len(), 64);
    }

    #[test]
    fn neighbours_small() {
        let t = Torus::new(1, 4).unwrap();
        let mut nb = t.neighbors(0).to_vec();
        nb.sort();
        assert_eq!(nb, vec![1, 3]);
        let t = Torus::new(2, 4).unwrap();
        for x in 0..t.n() {
            let nb = t.neighbors(x);
            let mut u = nb.to_vec();
            u.sort();
            u.dedup();
            assert_eq!(u.len(), 4);
            for &y in nb {
                assert!(t.neighbors(y).contains(&x));
                assert_ne!(t.parity(x), t.parity(y));
            }
        }
    }

    #[test]
    fn rejects_two() {
        assert_eq!(Torus::new(2, 2), Err(Error::SideTooSmall(2)));
        assert!(Torus::new(1, 5).is_ok());
        assert_eq!(Torus::even(1, 5), Err(Error::OddSide(5)));
    }

    #[test]
    fn parity_counts() {
        for d in 1..=3 {
            for l in [4usize, 6] {
                if d == 3 && l == 6 {
                    continue;
                }
                let t = Torus::new(d, l).unwrap();
                let odd = (0..t.n()).filter(|&s| t.is_odd(s)).count();
                assert_eq!(2 * odd, t.n());
            }
        }
    }

    #[test]
    fn reflection_example() {
        let t = Torus::new(1, 6).unwrap();
        let r = Reflection::new(&t, 1, 0).unwrap();
        assert_eq!(r.reflect(&t, 1), 0);
        assert_eq!(r.reflect(&t, 0), 1);
        assert_eq!(r.reflect(&t, 2), 5);
        assert!(Reflection::new(&t, 2, 0).is_err());
        let plus: Vec<usize> = (0..6).filter(|&s| r.in_plus(&t, s)).collect();
        assert_eq!(plus, vec![1, 2, 3]);
    }

    #[test]
    fn reflection_involution_and_adjacency() {
        let t = Torus::new(2, 4).unwrap();
        let e = ExtTorus::new(t.clone());
        for r in Reflection::all(&t) {
            for v in 0..e.vertex_count() {
                let w = r.reflect_ext(&e, v);
                assert_eq!(r.reflect_ext(&e, w), v);
                assert_ne!(w, v);
                assert_eq!(e.is_virtual(v), e.is_virtual(w));
                assert_ne!(r.in_plus_ext(&e, v), r.in_plus_ext(&e, w));
                for u in e.neighbors(v) {
                    assert!(e.neighbors(w).contains(&r.reflect_ext(&e, u)));
                }
            }
            for id in 0..e.edge_count() {
                let f = r.reflect_edge(&e, EdgeId(id));
                assert_eq!(r.reflect_edge(&e, f), EdgeId(id));
            }
        }
    }

    #[test]
    fn extended_degrees() {
        let e = ExtTorus::new(Torus::new(2, 4).unwrap());
        assert_eq!(e.vertex_count(), 32);
        for v in 0..32 {
            assert_eq!(e.neighbors(v).len(), e.degree(v));
        }
        let mut count = vec![0usize; e.vertex_count()];
        for id in 0..e.edge_count() {
            let (a, b) = e.endpoints(EdgeId(id));
            count[a] += 1;
            count[b] += 1;
        }
        for v in 0..32 {
            assert_eq!(count[v], e.degree(v));
            assert_eq!(e.incident(v).len(), e.degree(v));
        }
    }
}
