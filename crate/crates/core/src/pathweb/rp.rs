//! Reflection positivity on `W^1`, tested through functions of the
//! colour-blind restriction of a configuration to one half of the torus.

use super::checks::stats_weight;
use super::enumerate::for_each_web;
use super::web::{End, PathWeb};
use crate::error::{Error, Result};
use crate::report::Report;
use crate::scalar::Rational;
use crate::torus::{EdgeId, ExtTorus, Reflection};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rustc_hash::{FxHashMap, FxHasher};
use std::hash::Hasher;

/// The bilinear form `(f, g) -> mu(f Theta g)` restricted to functions of
/// the restriction to `T^+`.
pub struct RpForm {
    pub plane: Reflection,
    /// Distinct restrictions, in first-seen order.
    pub keys: Vec<Vec<u8>>,
    /// `(a, b, w)`: total weight of configurations whose restriction is
    /// `keys[a]` and whose reflected restriction is `keys[b]`, times `scale`.
    pub entries: Vec<(u32, u32, i128)>,
    pub scale: BigInt,
    pub configurations: u64,
}

struct Half {
    edges: Vec<usize>,
    edge_pos: Vec<Option<u8>>,
    verts: Vec<usize>,
}

impl Half {
    fn new(ext: &ExtTorus, r: &Reflection) -> Self {
        let edges: Vec<usize> = (0..ext.edge_count())
            .filter(|&e| {
                let (a, b) = ext.endpoints(EdgeId(e));
                r.in_plus_ext(ext, a) || r.in_plus_ext(ext, b)
            })
            .collect();
        let mut edge_pos = vec![None; ext.edge_count()];
        for (i, &e) in edges.iter().enumerate() {
            edge_pos[e] = Some(i as u8);
        }
        let verts = (0..ext.vertex_count()).filter(|&v| r.in_plus_ext(ext, v)).collect();
        Half { edges, edge_pos, verts }
    }

    /// Restriction of `w` (or of `Theta w` when `reflected`) to `T^+`.
    fn key(&self, ext: &ExtTorus, r: &Reflection, w: &PathWeb, reflected: bool, out: &mut Vec<u8>) {
        out.clear();
        let edge = |e: EdgeId| if reflected { r.reflect_edge(ext, e) } else { e };
        for &e in &self.edges {
            out.push(w.m[edge(EdgeId(e)).0]);
        }
        for &v in &self.verts {
            let src = if reflected { r.reflect_ext(ext, v) } else { v };
            let enc = |a: End| -> (u8, u8) {
                let pos = self.edge_pos[edge(a.edge).0].expect("edge touches the half");
                (pos, a.label)
            };
            let mut pairs: Vec<((u8, u8), (u8, u8))> = w.gamma[src]
                .iter()
                .map(|&(a, b)| {
                    let (x, y) = (enc(a), enc(b));
                    if x <= y {
                        (x, y)
                    } else {
                        (y, x)
                    }
                })
                .collect();
            pairs.sort_unstable();
            out.push(pairs.len() as u8);
            for (x, y) in pairs {
                out.extend_from_slice(&[x.0, x.1, y.0, y.1]);
            }
        }
    }
}

impl RpForm {
    pub fn build(ext: &ExtTorus, n: u32, lambda: &Rational, plane: Reflection, budget: u64) -> Result<Self> {
        let half = Half::new(ext, &plane);
        let mut index: FxHashMap<Vec<u8>, u32> = FxHashMap::default();
        let mut keys: Vec<Vec<u8>> = Vec::new();
        let mut stat_index: FxHashMap<(u32, u32, u32, u64), u32> = FxHashMap::default();
        let mut raw: Vec<(u32, u32, u32)> = Vec::new();
        let mut buf = Vec::new();
        let mut intern = |k: &Vec<u8>, keys: &mut Vec<Vec<u8>>| -> u32 {
            if let Some(&i) = index.get(k) {
                return i;
            }
            let i = keys.len() as u32;
            keys.push(k.clone());
            index.insert(k.clone(), i);
            i
        };
        let configurations = for_each_web(ext, None, budget, |w, s| {
            half.key(ext, &plane, w, false, &mut buf);
            let a = intern(&buf, &mut keys);
            half.key(ext, &plane, w, true, &mut buf);
            let b = intern(&buf, &mut keys);
            let next = stat_index.len() as u32;
            let st = *stat_index.entry((s.links, s.paths, s.halves, s.fact)).or_insert(next);
            raw.push((a, b, st));
        })?;
        let mut stat_weight = vec![Rational::zero(); stat_index.len()];
        for (&(links, paths, halves, fact), &i) in &stat_index {
            let s = super::enumerate::WebStats { links, paths, halves, fact, unpaired: 0 };
            stat_weight[i as usize] = stats_weight(&s, n, lambda);
        }
        let mut scale = BigInt::one();
        for w in &stat_weight {
            scale = scale.lcm(w.denom());
        }
        let int_weight: Vec<i128> = stat_weight
            .iter()
            .map(|w| (w * Rational::from_integer(scale.clone())).to_integer().to_i128())
            .collect::<Option<_>>()
            .ok_or_else(|| Error::Infeasible("weights exceed 128 bits".into()))?;
        raw.sort_unstable();
        let mut entries: Vec<(u32, u32, i128)> = Vec::new();
        for (a, b, st) in raw {
            let w = int_weight[st as usize];
            match entries.last_mut() {
                Some(last) if last.0 == a && last.1 == b => {
                    last.2 = last.2.checked_add(w).ok_or_else(|| Error::Infeasible("weights exceed 128 bits".into()))?;
                }
                _ => entries.push((a, b, w)),
            }
        }
        entries.sort_unstable();
        Ok(RpForm { plane, keys, entries, scale, configurations })
    }

    /// `mu(f Theta g)` for `f`, `g` given on `keys`.
    pub fn form(&self, f: &[i64], g: &[i64]) -> Rational {
        let mut acc = BigInt::zero();
        let mut part: i128 = 0;
        for &(a, b, w) in &self.entries {
            let term = w * (f[a as usize] as i128) * (g[b as usize] as i128);
            match part.checked_add(term) {
                Some(v) => part = v,
                None => {
                    acc += BigInt::from(part);
                    part = term;
                }
            }
        }
        acc += BigInt::from(part);
        Rational::new(acc, self.scale.clone())
    }

    /// `mu(f Theta g) = mu(g Theta f)` for all `f, g` is symmetry of the
    /// weight matrix.
    pub fn is_symmetric(&self) -> bool {
        let map: FxHashMap<(u32, u32), i128> = self.entries.iter().map(|&(a, b, w)| ((a, b), w)).collect();
        self.entries.iter().all(|&(a, b, w)| map.get(&(b, a)) == Some(&w))
    }

    /// Seeded function of the restriction with values in `values`.
    pub fn seeded_function(&self, seed: u64, values: &[i64]) -> Vec<i64> {
        self.keys
            .iter()
            .map(|k| {
                let mut h = FxHasher::default();
                h.write_u64(seed);
                h.write(k);
                let x = splitmix(h.finish());
                values[(x % values.len() as u64) as usize]
            })
            .collect()
    }
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// `mu(f Theta g) = mu(g Theta f)`, `mu(f Theta f) >= 0` and the
/// Cauchy-Schwarz bound for `pairs` seeded pairs of functions, plus the
/// constant function and single-restriction indicators.
pub fn reflection_positivity_check(form: &RpForm, pairs: usize, seed: u64) -> Report {
    let mut r = Report::new();
    r.check(form.is_symmetric(), || "weight matrix is not symmetric".into());
    let k = form.keys.len();
    let ones = vec![1i64; k];
    let total = form.form(&ones, &ones);
    r.check(!total.is_negative(), || format!("mu(1) = {total}"));
    for i in 0..5.min(k) {
        let idx = (splitmix(seed ^ i as u64) % k as u64) as usize;
        let mut f = vec![0i64; k];
        f[idx] = 1;
        let v = form.form(&f, &f);
        r.check(!v.is_negative(), || format!("indicator of restriction {idx}: {v}"));
    }
    let mut min_ff: Option<Rational> = None;
    for p in 0..pairs as u64 {
        let vals: &[i64] = if p % 2 == 0 { &[-1, 1] } else { &[-3, -2, -1, 0, 1, 2, 3] };
        let f = form.seeded_function(seed.wrapping_mul(1_000_003).wrapping_add(2 * p), vals);
        let g = form.seeded_function(seed.wrapping_mul(1_000_003).wrapping_add(2 * p + 1), vals);
        let fg = form.form(&f, &g);
        let gf = form.form(&g, &f);
        let ff = form.form(&f, &f);
        let gg = form.form(&g, &g);
        r.check(fg == gf, || format!("pair {p}: mu(f Theta g) = {fg} != mu(g Theta f) = {gf}"));
        r.check(!ff.is_negative(), || format!("pair {p}: mu(f Theta f) = {ff}"));
        r.check(!gg.is_negative(), || format!("pair {p}: mu(g Theta g) = {gg}"));
        r.check(&fg * &fg <= &ff * &gg, || format!("pair {p}: Cauchy-Schwarz fails"));
        if min_ff.as_ref().is_none_or(|m| &ff < m) {
            min_ff = Some(ff);
        }
    }
    r.note(format!(
        "{} configurations, {} restrictions, {} weight entries",
        form.configurations,
        k,
        form.entries.len()
    ));
    if let Some(m) = min_ff {
        r.note(format!("min mu(f Theta f) = {:.6e}", crate::scalar::to_real::<f64>(&m)));
    }
    r
}

/// `mu(w) = mu(Theta w)` and `Theta w in W^1` for every `w in W^1`.
pub fn mu_invariance_check(ext: &ExtTorus, n: u32, lambda: &Rational, budget: u64) -> Result<Report> {
    let planes = Reflection::all(ext.base());
    let mut r = Report::new();
    for_each_web(ext, None, budget, |w, s| {
        let base = (s.links as usize, s.paths as usize, s.halves as usize);
        for p in &planes {
            let tw = w.reflect(ext, p);
            let ok = tw.in_w1(ext) && (tw.links(), tw.path_count(ext), tw.half_sites(ext)) == base;
            r.check(ok, || format!("reflection {p:?} changes the weight of {w:?}"));
        }
    })?;
    let _ = (n, lambda);
    Ok(r)
}
