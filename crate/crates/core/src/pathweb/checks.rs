//! Exact identities of the random path model: component
//! weights, the second-order expansion of `Z(phi h)`, the chessboard
//! estimate and the Key Inequality.

use super::enumerate::{for_each_web, WebStats};
use super::web::{h_copy, PathKind};
use crate::error::{Error, Result};
use crate::perm::{PermSystem, Target};
use crate::report::Report;
use crate::scalar::{ratio, rint, rpow, to_real, Rational};
use crate::torus::{EdgeId, ExtTorus, Torus};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use std::collections::HashMap;

/// Default configuration budget for full enumeration of `W^1`.
pub const DEFAULT_BUDGET: u64 = 50_000_000;

fn check_params(n: u32, lambda: &Rational) -> Result<()> {
    if n == 0 {
        return Err(Error::Param("N must be a positive integer".into()));
    }
    if !lambda.is_positive() {
        return Err(Error::Param("lambda must be positive".into()));
    }
    Ok(())
}

/// `mu` of a colour-blind configuration, colours summed.
pub fn stats_weight(s: &WebStats, n: u32, lambda: &Rational) -> Rational {
    let den = BigInt::from(s.fact) << s.halves as usize;
    rpow(lambda, s.links as usize) * rpow(&rint(n as i64), s.paths as usize) / Rational::from_integer(den)
}

type StatKey = (u32, u32, u32, u64);

fn stat_key(s: &WebStats) -> StatKey {
    (s.links, s.paths, s.halves, s.fact)
}

fn stat_of(k: StatKey, unpaired: u32) -> WebStats {
    WebStats { links: k.0, paths: k.1, halves: k.2, fact: k.3, unpaired }
}

/// Total `mu`-weight of `W^1` grouped by the vector `(u_x)`.
#[derive(Debug, Clone)]
pub struct Aggregate {
    pub entries: Vec<(Vec<u8>, Rational)>,
    pub configurations: u64,
}

impl Aggregate {
    /// `max_unpaired` restricts to configurations with at most that many
    /// unpaired ends, which is enough for low-order coefficients.
    pub fn build(ext: &ExtTorus, n: u32, lambda: &Rational, max_unpaired: Option<usize>, budget: u64) -> Result<Self> {
        check_params(n, lambda)?;
        let mut groups: HashMap<(Vec<u8>, StatKey), u64> = HashMap::new();
        let vc = ext.vertex_count();
        let configurations = for_each_web(ext, max_unpaired, budget, |w, s| {
            let u: Vec<u8> = (0..vc).map(|v| w.u_at(ext, v) as u8).collect();
            *groups.entry((u, stat_key(s))).or_insert(0) += 1;
        })?;
        let mut by_u: HashMap<Vec<u8>, Rational> = HashMap::new();
        for ((u, k), c) in groups {
            let w = stats_weight(&stat_of(k, 0), n, lambda) * rint(c as i64);
            *by_u.entry(u).or_insert_with(Rational::zero) += w;
        }
        let mut entries: Vec<(Vec<u8>, Rational)> = by_u.into_iter().collect();
        entries.sort_by(|a, b| a.0.cmp(&b.0));
        Ok(Aggregate { entries, configurations })
    }

    /// `Z(h) = sum_w mu(w) prod_x h_x^{u_x}`, exact.
    pub fn z(&self, h: &[Rational]) -> Rational {
        self.entries
            .iter()
            .map(|(u, w)| u.iter().zip(h).map(|(&k, hv)| rpow(hv, k as usize)).product::<Rational>() * w)
            .sum()
    }

    /// Floating-point `Z(h)`.
    pub fn z_f64(&self, h: &[f64]) -> f64 {
        self.entries
            .iter()
            .map(|(u, w)| u.iter().zip(h).map(|(&k, hv)| hv.powi(k as i32)).product::<f64>() * to_real::<f64>(w))
            .sum()
    }

    /// Coefficients of `Z(phi h)` as a polynomial in `phi`.
    pub fn coefficients(&self, h: &[Rational]) -> Vec<Rational> {
        let mut out: Vec<Rational> = Vec::new();
        for (u, w) in &self.entries {
            let deg: usize = u.iter().map(|&k| k as usize).sum();
            if out.len() <= deg {
                out.resize(deg + 1, Rational::zero());
            }
            out[deg] += u.iter().zip(h).map(|(&k, hv)| rpow(hv, k as usize)).product::<Rational>() * w;
        }
        out
    }
}

/// `Z(h)` over all of `W^1`.
pub fn central_quantity(ext: &ExtTorus, n: u32, lambda: &Rational, h: &[Rational]) -> Result<Rational> {
    if h.len() != ext.vertex_count() {
        return Err(Error::CoordLength { expected: ext.vertex_count(), got: h.len() });
    }
    Ok(Aggregate::build(ext, n, lambda, None, DEFAULT_BUDGET)?.z(h))
}

/// `mu` of the sets with at most two unpaired ends, split by component type.
#[derive(Debug, Clone, Default)]
pub struct Components {
    /// All links paired at both ends.
    pub closed: Rational,
    /// One segment on the given edge.
    pub segment: HashMap<EdgeId, Rational>,
    /// One walk with extremal directed edges `{(x,q), (y,r)}`, stored sorted.
    pub walk: HashMap<((usize, usize), (usize, usize)), Rational>,
}

pub fn components(ext: &ExtTorus, n: u32, lambda: &Rational) -> Result<Components> {
    check_params(n, lambda)?;
    let mut c = Components::default();
    let mut err = None;
    for_each_web(ext, Some(2), DEFAULT_BUDGET, |w, s| {
        let wt = stats_weight(s, n, lambda);
        if s.unpaired == 0 {
            c.closed += wt;
            return;
        }
        let open: Vec<_> = w.paths(ext).into_iter().filter(|p| !p.ends.is_empty()).collect();
        match (open.len(), open.first().map(|p| p.kind)) {
            (1, Some(PathKind::Segment)) => {
                let e = open[0].links[0].0;
                *c.segment.entry(e).or_insert_with(Rational::zero) += wt;
            }
            (1, Some(PathKind::Walk)) => {
                let (a, b) = (open[0].ends[0], open[0].ends[1]);
                let key = if a <= b { (a, b) } else { (b, a) };
                *c.walk.entry(key).or_insert_with(Rational::zero) += wt;
            }
            _ => err = Some(format!("unexpected open paths {:?}", open)),
        }
    })?;
    match err {
        Some(e) => Err(Error::Infeasible(e)),
        None => Ok(c),
    }
}

fn directed_edges(ext: &ExtTorus) -> Vec<(usize, usize)> {
    (0..ext.edge_count())
        .flat_map(|e| {
            let (a, b) = ext.endpoints(EdgeId(e));
            [(a, b), (b, a)]
        })
        .collect()
}

/// Checks the three component identities against partition functions
/// computed independently by enumerating lattice permutations.
pub fn verify_lemma_components(ext: &ExtTorus, n: u32, lambda: &Rational) -> Result<Report> {
    let c = components(ext, n, lambda)?;
    let sys = PermSystem::new(ext.base().clone())?;
    let y_ell = sys.y(Target::Ell, n, lambda)?;
    let nn = rint(n as i64);
    let mut r = Report::new();
    r.check(c.closed == y_ell, || format!("mu(A^l) = {} but Y^l = {}", c.closed, y_ell));
    for e in 0..ext.edge_count() {
        let e = EdgeId(e);
        let got = c.segment.get(&e).cloned().unwrap_or_else(Rational::zero);
        let mut want = lambda * &nn * &y_ell;
        if ext.is_vertical(e) {
            want /= rint(2);
        }
        r.check(got == want, || format!("mu(A^s({:?})) = {got}, expected {want}", ext.endpoints(e)));
    }
    let dir = directed_edges(ext);
    let lam2n = lambda * lambda * &nn;
    for i in 0..dir.len() {
        for j in i..dir.len() {
            let (a, b) = (dir[i], dir[j]);
            let key = if a <= b { (a, b) } else { (b, a) };
            let got = c.walk.get(&key).cloned().unwrap_or_else(Rational::zero);
            let (x, y) = (a.0, b.0);
            let want = if ext.is_virtual(x) || ext.is_virtual(y) {
                Rational::zero()
            } else if a == b {
                &lam2n / rint(2) * sys.y(Target::Walk(x, x), n, lambda)?
            } else {
                &lam2n * sys.y(Target::Walk(x, y), n, lambda)?
            };
            r.check(got == want, || format!("mu(A^w({a:?},{b:?})) = {got}, expected {want}"));
        }
    }
    let stray = c.walk.keys().filter(|k| !dir.contains(&k.0) || !dir.contains(&k.1)).count();
    r.check(stray == 0, || format!("{stray} walk classes on unknown edges"));
    Ok(r)
}

/// Second-order coefficient of `Z(phi h)` from the closed formula in terms
/// of `Y^ell` and `Y(x,y)`.
pub fn z2_formula(ext: &ExtTorus, sys: &PermSystem, n: u32, lambda: &Rational, h: &[Rational]) -> Result<Rational> {
    let t = ext.base();
    let nn = rint(n as i64);
    let y_ell = sys.y(Target::Ell, n, lambda)?;
    let mut edge_sum = Rational::zero();
    for (x, y) in t.edges() {
        edge_sum += &h[x] * &h[y];
    }
    for x in 0..t.n() {
        edge_sum += &h[x] * &h[ext.virtual_of(x)] / rint(2);
    }
    let nb: Vec<Rational> = (0..t.n()).map(|x| ext.neighbors(x).iter().map(|&q| h[q].clone()).sum()).collect();
    let mut walk_sum = Rational::zero();
    for x in 0..t.n() {
        if nb[x].is_zero() {
            continue;
        }
        for y in 0..t.n() {
            if nb[y].is_zero() {
                continue;
            }
            walk_sum += sys.y(Target::Walk(x, y), n, lambda)? * &nb[x] * &nb[y];
        }
    }
    Ok(&nn * lambda * y_ell * edge_sum + &nn * lambda * lambda / rint(2) * walk_sum)
}

/// Compares the coefficients of `Z(phi h)` up to order three with
/// `(Y^ell, 0, Z2(h), 0)`.
pub fn polynomial_expansion_check(ext: &ExtTorus, n: u32, lambda: &Rational, h: &[Rational]) -> Result<Report> {
    if h.len() != ext.vertex_count() {
        return Err(Error::CoordLength { expected: ext.vertex_count(), got: h.len() });
    }
    let agg = Aggregate::build(ext, n, lambda, Some(3), DEFAULT_BUDGET)?;
    let sys = PermSystem::new(ext.base().clone())?;
    let mut coef = agg.coefficients(h);
    coef.resize(4, Rational::zero());
    let y_ell = sys.y(Target::Ell, n, lambda)?;
    let z2 = z2_formula(ext, &sys, n, lambda, h)?;
    let mut r = Report::new();
    r.check(coef[0] == y_ell, || format!("C0 = {} but Y^l = {}", coef[0], y_ell));
    r.check(coef[1].is_zero(), || format!("C1 = {}", coef[1]));
    r.check(coef[2] == z2, || format!("C2 = {} but formula gives {}", coef[2], z2));
    r.check(coef[3].is_zero(), || format!("C3 = {}", coef[3]));
    r.note(format!("C0 = {}, C2 = {}", coef[0], coef[2]));
    Ok(r)
}

/// `Z(h) <= (prod_x Z(h^x))^{1/|T|}` in the log domain.
pub fn chessboard_check(agg: &Aggregate, ext: &ExtTorus, h: &[f64], tol: f64) -> Result<Report> {
    if h.len() != ext.vertex_count() {
        return Err(Error::CoordLength { expected: ext.vertex_count(), got: h.len() });
    }
    if h.iter().any(|v| v.abs() > 1.0) {
        return Err(Error::Param("chessboard estimate needs |h| <= 1".into()));
    }
    let n = ext.base().n();
    let lhs = agg.z_f64(h);
    let mut r = Report::new();
    let mut log_rhs = 0.0;
    let mut zero_factor = false;
    for x in 0..n {
        let zx = agg.z_f64(&h_copy(ext, h, x));
        r.check(zx >= -tol * zx.abs().max(1.0), || format!("Z(h^{x}) = {zx} is negative"));
        if zx <= 0.0 {
            zero_factor = true;
        } else {
            log_rhs += zx.ln() / n as f64;
        }
    }
    if lhs > 0.0 {
        if zero_factor {
            r.check(false, || format!("Z(h) = {lhs} > 0 but a factor vanishes"));
        } else {
            r.check(lhs.ln() <= log_rhs + tol, || format!("log Z(h) = {} > {}", lhs.ln(), log_rhs));
        }
    } else {
        r.check(true, String::new);
    }
    r.note(format!("Z(h) = {lhs:.12e}, rhs = {:.12e}", if zero_factor { 0.0 } else { log_rhs.exp() }));
    Ok(r)
}

/// `(Delta v)_x = sum_{y ~ x} (v_y - v_x)`.
pub fn laplacian(t: &Torus, v: &[Rational]) -> Vec<Rational> {
    (0..t.n())
        .map(|x| t.neighbors(x).iter().map(|&y| &v[y] - &v[x]).sum())
        .collect()
}

/// Left and right sides of the Key Inequality for a two-point table
/// `g[x] = G(o, x)`.
pub fn key_inequality_sides(t: &Torus, g: &[Rational], v: &[Rational]) -> (Rational, Rational) {
    let lap = laplacian(t, v);
    let mut lhs = Rational::zero();
    for x in 0..t.n() {
        if lap[x].is_zero() {
            continue;
        }
        let mut inner = Rational::zero();
        for y in 0..t.n() {
            if !lap[y].is_zero() {
                inner += &g[t.sub(y, x)] * &lap[y];
            }
        }
        lhs += inner * &lap[x];
    }
    let rhs = t.edges().into_iter().map(|(x, y)| rpow(&(&v[y] - &v[x]), 2)).sum();
    (lhs, rhs)
}

/// Key Inequality on every vector of `vs`, exact.
pub fn key_inequality_check(sys: &PermSystem, n: u32, rho: &Rational, vs: &[Vec<Rational>]) -> Result<Report> {
    let t = sys.torus();
    let g = sys.two_point_table(n, rho)?;
    let mut r = Report::new();
    let mut tightest: Option<Rational> = None;
    for v in vs {
        if v.len() != t.n() {
            return Err(Error::CoordLength { expected: t.n(), got: v.len() });
        }
        let (lhs, rhs) = key_inequality_sides(t, &g, v);
        if !rhs.is_zero() {
            let q = &lhs / &rhs;
            if tightest.as_ref().is_none_or(|b| &q > b) {
                tightest = Some(q);
            }
        }
        r.check(lhs <= rhs, || format!("v = {v:?}: lhs {lhs} > rhs {rhs}"));
    }
    if let Some(q) = tightest {
        r.note(format!("max lhs/rhs = {:.6}", to_real::<f64>(&q)));
    }
    Ok(r)
}

/// A seeded rational vector with entries `k / 4`, `|k| <= 8`.
pub fn seeded_rational_vector(len: usize, seed: u64) -> Vec<Rational> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    (0..len).map(|_| ratio(rng.gen_range(-8..=8), 4)).collect()
}

/// A seeded integer vector with entries in `[-5, 5]`.
pub fn seeded_integer_vector(len: usize, seed: u64) -> Vec<Rational> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    (0..len).map(|_| rint(rng.gen_range(-5..=5))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn ext(l: usize) -> ExtTorus {
        ExtTorus::new(Torus::even(1, l).unwrap())
    }

    #[test]
    fn lemma_small_cycle() {
        for (n, lam) in [(1, rint(1)), (2, ratio(1, 2))] {
            let r = verify_lemma_components(&ext(4), n, &lam).unwrap();
            assert!(r.pass, "{:?}", r.witnesses);
        }
    }

    #[test]
    fn zero_field_gives_closed_partition() {
        let e = ext(4);
        let agg = Aggregate::build(&e, 1, &rint(1), None, DEFAULT_BUDGET).unwrap();
        let zero = vec![Rational::zero(); e.vertex_count()];
        let sys = PermSystem::new(e.base().clone()).unwrap();
        assert_eq!(agg.z(&zero), sys.y(Target::Ell, 1, &rint(1)).unwrap());
    }

    #[test]
    fn expansion_unit_vector() {
        let e = ext(4);
        let mut v = vec![Rational::zero(); 4];
        v[0] = Rational::one();
        let h = crate::pathweb::h_from_v(&e, &v);
        let r = polynomial_expansion_check(&e, 1, &rint(1), &h).unwrap();
        assert!(r.pass, "{:?}", r.witnesses);
    }

    #[test]
    fn key_constant_vector() {
        let t = Torus::even(1, 4).unwrap();
        let g = vec![rint(1); 4];
        let (l, r) = key_inequality_sides(&t, &g, &vec![rint(3); 4]);
        assert!(l.is_zero() && r.is_zero());
    }
}
