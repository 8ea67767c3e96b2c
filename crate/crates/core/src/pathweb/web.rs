use crate::error::{Error, Result};
use crate::scalar::{rint, rpow, Rational};
use crate::torus::{EdgeId, ExtTorus, Reflection};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

/// One end of a link: the `label`-th link (0-based) on `edge`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct End {
    pub edge: EdgeId,
    pub label: u8,
}

/// Colour-blind configuration: link counts and pairings. Summing over
/// colourings compatible with the pairings gives a factor `N^paths`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct PathWeb {
    /// Links per edge of the extended torus.
    pub m: Vec<u8>,
    /// Pairings at each vertex of the extended torus.
    pub gamma: Vec<Vec<(End, End)>>,
}

/// A configuration with explicit colours, `colours[e][p]` in `0..N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColouredWeb {
    pub web: PathWeb,
    pub colours: Vec<Vec<u8>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum PathKind {
    Loop,
    DoubleLink,
    Walk,
    Segment,
}

/// A maximal pairing-connected set of links.
#[derive(Debug, Clone, Serialize)]
pub struct Path {
    pub kind: PathKind,
    pub links: Vec<(EdgeId, u8)>,
    /// Endpoints of the path: for a walk, the directed edges `(x, q)` of the
    /// two extremal links, paired at `x` and unpaired at `q`; for a segment,
    /// both orientations of its edge.
    pub ends: Vec<(usize, usize)>,
}

pub(crate) struct Dsu(Vec<usize>);

impl Dsu {
    pub(crate) fn new(n: usize) -> Self {
        Dsu((0..n).collect())
    }
    pub(crate) fn find(&mut self, a: usize) -> usize {
        let mut r = a;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut a = a;
        while self.0[a] != r {
            let next = self.0[a];
            self.0[a] = r;
            a = next;
        }
        r
    }
    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra] = rb;
        }
    }
}

fn factorial(k: u8) -> u64 {
    (1..=k as u64).product()
}

impl PathWeb {
    pub fn empty(ext: &ExtTorus) -> Self {
        PathWeb { m: vec![0; ext.edge_count()], gamma: vec![Vec::new(); ext.vertex_count()] }
    }

    pub fn links(&self) -> usize {
        self.m.iter().map(|&k| k as usize).sum()
    }

    /// Link ends touching `v`.
    pub fn ends_at(&self, ext: &ExtTorus, v: usize) -> usize {
        ext.incident(v).iter().map(|e| self.m[e.0] as usize).sum()
    }

    /// Pairings at `v`.
    pub fn n_at(&self, v: usize) -> usize {
        self.gamma[v].len()
    }

    /// Links touching `v` that are unpaired at `v`.
    pub fn u_at(&self, ext: &ExtTorus, v: usize) -> usize {
        self.ends_at(ext, v) - 2 * self.gamma[v].len()
    }

    /// Total number of unpaired link ends.
    pub fn unpaired(&self, ext: &ExtTorus) -> usize {
        (0..ext.vertex_count()).map(|v| self.u_at(ext, v)).sum()
    }

    fn offsets(&self) -> Vec<usize> {
        let mut off = Vec::with_capacity(self.m.len() + 1);
        let mut acc = 0;
        for &k in &self.m {
            off.push(acc);
            acc += k as usize;
        }
        off.push(acc);
        off
    }

    /// Checks that every pairing refers to existing, distinct links touching
    /// the vertex and that no end is paired twice.
    pub fn validate(&self, ext: &ExtTorus) -> Result<()> {
        if self.m.len() != ext.edge_count() || self.gamma.len() != ext.vertex_count() {
            return Err(Error::Param("configuration does not match the extended torus".into()));
        }
        for (v, pairs) in self.gamma.iter().enumerate() {
            let inc = ext.incident(v);
            let mut used = Vec::new();
            for &(a, b) in pairs {
                for end in [a, b] {
                    if !inc.contains(&end.edge) || end.label >= self.m[end.edge.0] {
                        return Err(Error::Param(format!("pairing at {v} uses a missing link")));
                    }
                    if used.contains(&end) {
                        return Err(Error::Param(format!("link end paired twice at {v}")));
                    }
                    used.push(end);
                }
                if a == b {
                    return Err(Error::Param(format!("link paired to itself at {v}")));
                }
            }
        }
        Ok(())
    }

    /// Number of original sites where exactly one link on the vertical edge
    /// is unpaired.
    pub fn half_sites(&self, ext: &ExtTorus) -> usize {
        let n = ext.base().n();
        (0..n)
            .filter(|&x| {
                let ve = ext.vertical_edge(x);
                let paired = self.gamma[x].iter().flat_map(|&(a, b)| [a, b]).filter(|e| e.edge == ve).count();
                self.m[ve.0] as usize - paired == 1
            })
            .count()
    }

    /// Product of the weight function `H` over all vertices.
    pub fn h_weight(&self, ext: &ExtTorus) -> Rational {
        let n = ext.base().n();
        for v in 0..ext.vertex_count() {
            if v >= n {
                if self.n_at(v) != 0 {
                    return Rational::zero();
                }
            } else if self.n_at(v) > 1 || self.u_at(ext, v) > 2 {
                return Rational::zero();
            }
        }
        rpow(&Rational::new(BigInt::one(), BigInt::from(2)), self.half_sites(ext))
    }

    pub fn in_w1(&self, ext: &ExtTorus) -> bool {
        !self.h_weight(ext).is_zero()
    }

    /// `prod_e 1/m_e!`.
    pub fn factorial_weight(&self) -> Rational {
        let den: u64 = self.m.iter().map(|&k| factorial(k)).product();
        Rational::new(BigInt::one(), BigInt::from(den))
    }

    /// Path decomposition.
    pub fn paths(&self, ext: &ExtTorus) -> Vec<Path> {
        let off = self.offsets();
        let total = off[self.m.len()];
        let mut dsu = Dsu::new(total);
        let id = |e: End| off[e.edge.0] + e.label as usize;
        // paired[link][side]: side 0 is the first endpoint of the edge
        let mut paired = vec![[false; 2]; total];
        for (v, pairs) in self.gamma.iter().enumerate() {
            for &(a, b) in pairs {
                dsu.union(id(a), id(b));
                for end in [a, b] {
                    let (p, _) = ext.endpoints(end.edge);
                    paired[id(end)][if p == v { 0 } else { 1 }] = true;
                }
            }
        }
        let mut groups: Vec<Vec<usize>> = Vec::new();
        let mut root_group = vec![usize::MAX; total];
        for l in 0..total {
            let r = dsu.find(l);
            if root_group[r] == usize::MAX {
                root_group[r] = groups.len();
                groups.push(Vec::new());
            }
            groups[root_group[r]].push(l);
        }
        let link_of: Vec<(EdgeId, u8)> =
            (0..self.m.len()).flat_map(|e| (0..self.m[e]).map(move |p| (EdgeId(e), p))).collect();
        groups
            .into_iter()
            .map(|g| {
                let links: Vec<(EdgeId, u8)> = g.iter().map(|&l| link_of[l]).collect();
                let mut ends = Vec::new();
                for (&l, &(e, _)) in g.iter().zip(&links) {
                    let (p, q) = ext.endpoints(e);
                    match paired[l] {
                        [true, false] => ends.push((p, q)),
                        [false, true] => ends.push((q, p)),
                        [false, false] => {
                            ends.push((p, q));
                            ends.push((q, p));
                        }
                        [true, true] => {}
                    }
                }
                let kind = if g.len() == 1 && ends.len() == 2 && paired[g[0]] == [false, false] {
                    PathKind::Segment
                } else if ends.is_empty() {
                    if g.len() == 2 {
                        PathKind::DoubleLink
                    } else {
                        PathKind::Loop
                    }
                } else {
                    PathKind::Walk
                };
                Path { kind, links, ends }
            })
            .collect()
    }

    pub fn path_count(&self, ext: &ExtTorus) -> usize {
        self.paths(ext).len()
    }

    /// `mu` summed over the `N^paths` compatible colourings.
    pub fn colour_sum_weight(&self, ext: &ExtTorus, n: u32, lambda: &Rational) -> Rational {
        let h = self.h_weight(ext);
        if h.is_zero() {
            return h;
        }
        h * self.factorial_weight() * rpow(lambda, self.links()) * rpow(&rint(n as i64), self.path_count(ext))
    }

    /// `prod_x h_x^{u_x}`.
    pub fn h_monomial(&self, ext: &ExtTorus, h: &[Rational]) -> Rational {
        (0..ext.vertex_count()).map(|v| rpow(&h[v], self.u_at(ext, v))).product()
    }

    /// The reflected configuration `Theta w`.
    pub fn reflect(&self, ext: &ExtTorus, r: &Reflection) -> PathWeb {
        let mut out = PathWeb::empty(ext);
        for e in 0..self.m.len() {
            out.m[r.reflect_edge(ext, EdgeId(e)).0] = self.m[e];
        }
        for v in 0..self.gamma.len() {
            let tv = r.reflect_ext(ext, v);
            let map = |a: End| End { edge: r.reflect_edge(ext, a.edge), label: a.label };
            out.gamma[tv] = self.gamma[v].iter().map(|&(a, b)| (map(a), map(b))).collect();
        }
        out
    }

    /// Every colouring with `N` colours compatible with the pairings.
    pub fn colourings(&self, ext: &ExtTorus, n: u32) -> Vec<ColouredWeb> {
        let paths = self.paths(ext);
        let mut out = Vec::new();
        let k = paths.len();
        let total = (n as usize).pow(k as u32);
        for idx in 0..total {
            let mut colours: Vec<Vec<u8>> = self.m.iter().map(|&c| vec![0; c as usize]).collect();
            let mut rest = idx;
            for p in &paths {
                let c = (rest % n as usize) as u8;
                rest /= n as usize;
                for &(e, l) in &p.links {
                    colours[e.0][l as usize] = c;
                }
            }
            out.push(ColouredWeb { web: self.clone(), colours });
        }
        out
    }
}

/// `mu(w) = prod_e lambda^{m_e}/m_e! prod_x H_x(w)`; zero when a pairing
/// joins links of different colours.
pub fn mu_weight(ext: &ExtTorus, w: &ColouredWeb, lambda: &Rational) -> Result<Rational> {
    w.web.validate(ext)?;
    for pairs in &w.web.gamma {
        for &(a, b) in pairs {
            if w.colours[a.edge.0][a.label as usize] != w.colours[b.edge.0][b.label as usize] {
                return Ok(Rational::zero());
            }
        }
    }
    Ok(w.web.h_weight(ext) * w.web.factorial_weight() * rpow(lambda, w.web.links()))
}

/// `h_x = v_x` on original sites and `h_{x + e_{d+1}} = -2d v_x` on virtual ones.
pub fn h_from_v(ext: &ExtTorus, v: &[Rational]) -> Vec<Rational> {
    let n = ext.base().n();
    let c = rint(-2 * ext.base().d() as i64);
    (0..2 * n).map(|z| if z < n { v[z].clone() } else { &c * &v[z - n] }).collect()
}

/// `h^x`: `h_x` on every original vertex, `h_{x + e_{d+1}}` on every virtual one.
pub fn h_copy<T: Clone>(ext: &ExtTorus, h: &[T], x: usize) -> Vec<T> {
    let n = ext.base().n();
    (0..2 * n).map(|z| if z < n { h[x].clone() } else { h[n + x].clone() }).collect()
}
