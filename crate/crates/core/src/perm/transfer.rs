//! Row-major "plug" transfer matrix for lattice permutations on the
//! two-dimensional torus.
//!
//! Configurations are handled in undirected form: every site has degree
//! 0 (monomer), 1 (end of a double edge, or a walk end) or 2. A loop
//! carries weight `N` (its two orientations at `N/2` each) and an isolated
//! edge carries `N/2`. The frontier holds labelled edge ends:
//!
//! * `D[c]`: vertical edge crossing the current row cut at column `c`;
//! * `H`: horizontal edge entering the current site from the left;
//! * `RW`: far end of the horizontal wrap edge of the current row;
//! * `B[c]`: far end of the vertical wrap edge at column `c`.
//!
//! A label is `Iso` (the edge is a whole isolated edge with its other
//! end already closed), `Wx`/`Wy` (the segment leads to the walk end `x` or
//! `y`), or a pair id shared by the two open ends of one segment.

use super::enumerate::Target;
use crate::error::{Error, Result};
use crate::scalar::Semiring;
use crate::torus::Torus;
use rustc_hash::FxHashMap;

const EMPTY: u8 = 0;
const ISO: u8 = 1;
const WX: u8 = 2;
const WY: u8 = 3;
const PAIR0: u8 = 4;

/// Per-event weights. The exact path uses integer-scaled weights and
/// divides by a global factor afterwards.
#[derive(Debug, Clone)]
pub struct Weights<S> {
    pub monomer: S,
    /// Degree-2 site, walk end, or degenerate walk site.
    pub site: S,
    /// Endpoint of an isolated edge.
    pub iso_site: S,
    /// Completion of an isolated edge.
    pub iso_done: S,
    /// Closure of a loop.
    pub loop_done: S,
}

#[derive(Clone, Copy)]
struct Layout {
    l: usize,
}

impl Layout {
    fn d(&self, c: usize) -> usize {
        c
    }
    fn h(&self) -> usize {
        self.l
    }
    fn rw(&self) -> usize {
        self.l + 1
    }
    fn b(&self, c: usize) -> usize {
        self.l + 2 + c
    }
    fn slots(&self) -> usize {
        2 * self.l + 2
    }
}

#[inline]
fn get(s: u64, i: usize) -> u8 {
    ((s >> (4 * i)) & 0xf) as u8
}

#[inline]
fn set(s: u64, i: usize, v: u8) -> u64 {
    (s & !(0xf << (4 * i))) | ((v as u64) << (4 * i))
}

fn canonical(s: u64, slots: usize) -> u64 {
    let mut map = [0u8; 16];
    let mut next = PAIR0;
    let mut out = s;
    for i in 0..slots {
        let v = get(s, i);
        if v >= PAIR0 {
            let m = &mut map[v as usize];
            if *m == 0 {
                *m = next;
                next += 1;
            }
            out = set(out, i, *m);
        }
    }
    out
}

fn find_other(s: u64, slots: usize, label: u8) -> Option<usize> {
    (0..slots).find(|&i| get(s, i) == label)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Kind {
    Ordinary,
    X,
    Y,
    Degenerate,
}

/// Outcome of attaching a site to its incident edge ends.
enum Step {
    Invalid,
    /// New state, and which of `iso_done` / `loop_done` to apply.
    Ok(u64, bool, bool),
}

fn fresh_id(s: u64, slots: usize) -> u8 {
    let mut used = 0u32;
    for i in 0..slots {
        let v = get(s, i);
        if v >= PAIR0 {
            used |= 1 << v;
        }
    }
    (PAIR0..16).find(|&v| used >> v & 1 == 0).expect("too many open segments")
}

/// `s` has the incoming slots already cleared; `ins` holds their labels.
fn attach(s: u64, slots: usize, kind: Kind, ins: &[u8], outs: &[usize]) -> Step {
    let deg = ins.len() + outs.len();
    match kind {
        Kind::Degenerate => {
            return if deg == 0 { Step::Ok(s, false, false) } else { Step::Invalid };
        }
        Kind::X | Kind::Y => {
            if deg != 1 {
                return Step::Invalid;
            }
            let (me, other) = if kind == Kind::X { (WX, WY) } else { (WY, WX) };
            if let Some(&o) = outs.first() {
                return Step::Ok(set(s, o, me), false, false);
            }
            let a = ins[0];
            if a == other {
                return Step::Ok(s, false, false);
            }
            if a >= PAIR0 {
                let p = find_other(s, slots, a).expect("pair partner");
                return Step::Ok(set(s, p, me), false, false);
            }
            return Step::Invalid;
        }
        Kind::Ordinary => {}
    }
    match (ins.len(), outs.len()) {
        (0, 0) => Step::Ok(s, false, false),
        (1, 0) => {
            if ins[0] == ISO {
                Step::Ok(s, true, false)
            } else {
                Step::Invalid
            }
        }
        (0, 1) => Step::Ok(set(s, outs[0], ISO), false, false),
        (2, 0) => {
            let (a, b) = (ins[0], ins[1]);
            if a == ISO || b == ISO {
                return Step::Invalid;
            }
            if a >= PAIR0 && a == b {
                return Step::Ok(s, false, true);
            }
            match (a >= PAIR0, b >= PAIR0) {
                (true, true) => {
                    let pb = find_other(s, slots, b).expect("pair partner");
                    Step::Ok(set(s, pb, a), false, false)
                }
                (true, false) => {
                    let pa = find_other(s, slots, a).expect("pair partner");
                    Step::Ok(set(s, pa, b), false, false)
                }
                (false, true) => {
                    let pb = find_other(s, slots, b).expect("pair partner");
                    Step::Ok(set(s, pb, a), false, false)
                }
                (false, false) => {
                    if (a == WX && b == WY) || (a == WY && b == WX) {
                        Step::Ok(s, false, false)
                    } else {
                        Step::Invalid
                    }
                }
            }
        }
        (1, 1) => {
            if ins[0] == ISO {
                Step::Invalid
            } else {
                Step::Ok(set(s, outs[0], ins[0]), false, false)
            }
        }
        (0, 2) => {
            let id = fresh_id(s, slots);
            Step::Ok(set(set(s, outs[0], id), outs[1], id), false, false)
        }
        _ => Step::Invalid,
    }
}

/// Weighted sum over all configurations of `target` on a 2-d torus with
/// side `L <= 7`.
pub fn partition<S: Semiring>(t: &Torus, target: Target, w: &Weights<S>) -> Result<S> {
    if t.d() != 2 {
        return Err(Error::Dimension(t.d(), "transfer matrix for permutations needs d = 2"));
    }
    t.require_even()?;
    let l = t.l();
    if l > 7 {
        return Err(Error::Infeasible(format!("transfer matrix limited to L <= 7, got {l}")));
    }
    let lay = Layout { l };
    let slots = lay.slots();
    let kind_of = |z: usize| -> Kind {
        match target {
            Target::Ell => Kind::Ordinary,
            Target::Walk(x, y) if x == y => {
                if z == x {
                    Kind::Degenerate
                } else {
                    Kind::Ordinary
                }
            }
            Target::Walk(x, y) => {
                if z == x {
                    Kind::X
                } else if z == y {
                    Kind::Y
                } else {
                    Kind::Ordinary
                }
            }
        }
    };
    let mono_allowed = !w.monomer.is_zero();
    let mut cur: FxHashMap<u64, S> = FxHashMap::default();
    cur.insert(0, S::one());
    for r in 0..l {
        for c in 0..l {
            let z = r * l + c;
            let kind = kind_of(z);
            let mut next: FxHashMap<u64, S> = FxHashMap::default();
            next.reserve(cur.len());
            // incoming slots and outgoing options
            let mut in_slots: Vec<usize> = Vec::with_capacity(4);
            let mut out_opts: Vec<usize> = Vec::with_capacity(4);
            if r > 0 {
                in_slots.push(lay.d(c));
            } else {
                out_opts.push(lay.b(c));
            }
            if c > 0 {
                in_slots.push(lay.h());
            } else {
                out_opts.push(lay.rw());
            }
            if c < l - 1 {
                out_opts.push(lay.h());
            } else {
                in_slots.push(lay.rw());
            }
            if r < l - 1 {
                out_opts.push(lay.d(c));
            } else {
                in_slots.push(lay.b(c));
            }
            for (&state, val) in cur.iter() {
                let mut s = state;
                let mut ins = [0u8; 4];
                let mut ni = 0;
                for &slot in &in_slots {
                    let v = get(state, slot);
                    if v != EMPTY {
                        if ni == 2 {
                            ni = 3;
                            break;
                        }
                        ins[ni] = v;
                        ni += 1;
                        s = set(s, slot, EMPTY);
                    }
                }
                if ni > 2 {
                    continue;
                }
                let ins = &ins[..ni];
                let k = out_opts.len();
                for subset in 0u32..(1 << k) {
                    let nout = subset.count_ones() as usize;
                    if ni + nout > 2 {
                        continue;
                    }
                    let mut outs = [0usize; 2];
                    let mut m = 0;
                    for (b, &slot) in out_opts.iter().enumerate() {
                        if subset >> b & 1 == 1 {
                            outs[m] = slot;
                            m += 1;
                        }
                    }
                    let deg = ni + nout;
                    if kind == Kind::Ordinary && deg == 0 && !mono_allowed {
                        continue;
                    }
                    let Step::Ok(ns, iso_done, loop_done) = attach(s, slots, kind, ins, &outs[..m]) else {
                        continue;
                    };
                    let mut f = match (kind, deg) {
                        (Kind::Ordinary, 0) => val.mul_ref(&w.monomer),
                        (Kind::Ordinary, 1) => val.mul_ref(&w.iso_site),
                        _ => val.mul_ref(&w.site),
                    };
                    if iso_done {
                        f = f.mul_ref(&w.iso_done);
                    }
                    if loop_done {
                        f = f.mul_ref(&w.loop_done);
                    }
                    let key = canonical(ns, slots);
                    match next.get_mut(&key) {
                        Some(e) => *e += &f,
                        None => {
                            next.insert(key, f);
                        }
                    }
                }
            }
            cur = next;
        }
    }
    Ok(cur.remove(&0).unwrap_or_else(S::zero))
}
