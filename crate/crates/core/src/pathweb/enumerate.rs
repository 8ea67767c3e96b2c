//! Exhaustive enumeration of colour-blind configurations of `W^1`.

use super::web::{Dsu, End, PathWeb};
use crate::error::{Error, Result};
use crate::torus::{EdgeId, ExtTorus};

/// Summary of one configuration, enough to evaluate its weight.
#[derive(Debug, Clone, Copy, Default)]
pub struct WebStats {
    pub links: u32,
    pub paths: u32,
    /// Original sites with exactly one unpaired vertical link.
    pub halves: u32,
    /// `prod_e m_e!`.
    pub fact: u64,
    pub unpaired: u32,
}

const MAX_ENDS: usize = 4;
const MIN_U: [usize; MAX_ENDS + 1] = [0, 1, 0, 1, 2];

const NODES_PER_CONFIG: u64 = 4;

struct Walker<'a, F> {
    ext: &'a ExtTorus,
    n: usize,
    incident: Vec<Vec<usize>>,
    ends_of: Vec<(usize, usize)>,
    completes: Vec<Vec<usize>>,
    cap: usize,
    budget: u64,
    count: u64,
    /// Search nodes visited, capped at `NODES_PER_CONFIG * budget`.
    nodes: u64,
    m: Vec<u8>,
    load: Vec<usize>,
    options: Vec<Vec<Option<(End, End)>>>,
    choice: Vec<Option<(End, End)>>,
    web: PathWeb,
    f: F,
}

impl<'a, F: FnMut(&PathWeb, &WebStats)> Walker<'a, F> {
    fn visit(&mut self) -> Result<()> {
        self.nodes += 1;
        if self.nodes > NODES_PER_CONFIG.saturating_mul(self.budget) {
            return Err(Error::Infeasible(format!(
                "search exceeded {} nodes; the instance is too large for full enumeration",
                NODES_PER_CONFIG.saturating_mul(self.budget)
            )));
        }
        Ok(())
    }

    fn edges(&mut self, k: usize, min_unpaired: usize) -> Result<()> {
        self.visit()?;
        if k == self.m.len() {
            return self.pairings_start();
        }
        let (a, b) = self.ends_of[k];
        for val in 0..=MAX_ENDS as u8 {
            let ok = [a, b].iter().all(|&v| v >= self.n || self.load[v] + val as usize <= MAX_ENDS);
            if !ok {
                break;
            }
            self.m[k] = val;
            self.load[a] += val as usize;
            self.load[b] += val as usize;
            let mut mu = min_unpaired;
            for &v in &self.completes[k] {
                mu += if v >= self.n { self.load[v] } else { MIN_U[self.load[v]] };
            }
            if mu <= self.cap {
                self.edges(k + 1, mu)?;
            }
            self.load[a] -= val as usize;
            self.load[b] -= val as usize;
        }
        self.m[k] = 0;
        Ok(())
    }

    fn pairings_start(&mut self) -> Result<()> {
        for v in 0..self.ext.vertex_count() {
            let mut ends = Vec::new();
            for &e in &self.incident[v] {
                for p in 0..self.m[e] {
                    ends.push(End { edge: EdgeId(e), label: p });
                }
            }
            let opts = &mut self.options[v];
            opts.clear();
            let k = ends.len();
            if v >= self.n || k <= 2 {
                opts.push(None);
            }
            if v < self.n {
                for i in 0..k {
                    for j in i + 1..k {
                        opts.push(Some((ends[i], ends[j])));
                    }
                }
            }
        }
        self.web.m.copy_from_slice(&self.m);
        self.pairings(0, 0)
    }

    fn pairings(&mut self, v: usize, unpaired: usize) -> Result<()> {
        self.visit()?;
        if v == self.options.len() {
            return self.leaf(unpaired);
        }
        for i in 0..self.options[v].len() {
            let opt = self.options[v][i];
            let u = self.load[v] - if opt.is_some() { 2 } else { 0 };
            if unpaired + u > self.cap {
                continue;
            }
            self.choice[v] = opt;
            self.pairings(v + 1, unpaired + u)?;
        }
        Ok(())
    }

    fn leaf(&mut self, unpaired: usize) -> Result<()> {
        self.count += 1;
        if self.count > self.budget {
            return Err(Error::Infeasible(format!("more than {} configurations", self.budget)));
        }
        let mut off = vec![0usize; self.m.len() + 1];
        for e in 0..self.m.len() {
            off[e + 1] = off[e] + self.m[e] as usize;
        }
        let total = off[self.m.len()];
        let mut dsu = Dsu::new(total);
        let mut merged = 0;
        for (v, c) in self.choice.iter().enumerate() {
            self.web.gamma[v].clear();
            if let Some((a, b)) = *c {
                self.web.gamma[v].push((a, b));
                let (ia, ib) = (off[a.edge.0] + a.label as usize, off[b.edge.0] + b.label as usize);
                if dsu.find(ia) != dsu.find(ib) {
                    merged += 1;
                }
                dsu.union(ia, ib);
            }
        }
        let mut halves = 0;
        for x in 0..self.n {
            let ve = self.ext.vertical_edge(x);
            let paired = match self.choice[x] {
                Some((a, b)) => (a.edge == ve) as usize + (b.edge == ve) as usize,
                None => 0,
            };
            if self.m[ve.0] as usize - paired == 1 {
                halves += 1;
            }
        }
        let fact = self.m.iter().map(|&k| (1..=k as u64).product::<u64>()).product();
        let stats = WebStats {
            links: total as u32,
            paths: (total - merged) as u32,
            halves,
            fact,
            unpaired: unpaired as u32,
        };
        (self.f)(&self.web, &stats);
        Ok(())
    }
}

/// Calls `f` on every configuration of `W^1` (colours summed out) with at
/// most `max_unpaired` unpaired link ends in total. Returns the number of
/// configurations visited.
pub fn for_each_web<F: FnMut(&PathWeb, &WebStats)>(
    ext: &ExtTorus,
    max_unpaired: Option<usize>,
    budget: u64,
    f: F,
) -> Result<u64> {
    let n = ext.base().n();
    let e_count = ext.edge_count();
    let v_count = ext.vertex_count();
    let incident: Vec<Vec<usize>> = (0..v_count).map(|v| ext.incident(v).into_iter().map(|e| e.0).collect()).collect();
    let ends_of: Vec<(usize, usize)> = (0..e_count).map(|e| ext.endpoints(EdgeId(e))).collect();
    let mut completes = vec![Vec::new(); e_count];
    for (v, inc) in incident.iter().enumerate() {
        let last = *inc.iter().max().expect("every vertex has an edge");
        completes[last].push(v);
    }
    let mut w = Walker {
        ext,
        n,
        incident,
        ends_of,
        completes,
        cap: max_unpaired.unwrap_or(usize::MAX),
        budget,
        count: 0,
        nodes: 0,
        m: vec![0; e_count],
        load: vec![0; v_count],
        options: vec![Vec::new(); v_count],
        choice: vec![None; v_count],
        web: PathWeb::empty(ext),
        f,
    };
    w.edges(0, 0)?;
    Ok(w.count)
}
